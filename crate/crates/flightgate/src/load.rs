//! Reading rule bases, questionnaires, rule texts and answer files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use flightgate_core::{
    parse_program, AnswerSet, ComplianceError, KnowledgeBase, ParseError, Program, Question, Questionnaire,
};

pub const DEFAULT_KB: &str = "kb/ama_general.lp";
const QUESTIONNAIRE_FILE: &str = "questionnaire.json";
const RULES_FILE: &str = "ama_rules.json";

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{}: rule key `{key}` is not a number", path.display())]
    RuleKey { path: PathBuf, key: String },
    #[error(transparent)]
    Compliance(#[from] ComplianceError),
}

/// Where the knowledge-base files live. Missing companions default to
/// `questionnaire.json` and `ama_rules.json` next to the rule base.
#[derive(Clone, Debug)]
pub struct KbPaths {
    pub kb: PathBuf,
    pub questionnaire: Option<PathBuf>,
    pub rules: Option<PathBuf>,
}

impl KbPaths {
    pub fn new(kb: impl Into<PathBuf>) -> Self {
        KbPaths { kb: kb.into(), questionnaire: None, rules: None }
    }

    fn sibling(&self, name: &str) -> PathBuf {
        self.kb.parent().unwrap_or(Path::new("")).join(name)
    }

    pub fn questionnaire_path(&self) -> PathBuf {
        self.questionnaire.clone().unwrap_or_else(|| self.sibling(QUESTIONNAIRE_FILE))
    }

    /// An explicit path must exist; the default one is optional.
    pub fn rules_path(&self) -> Option<PathBuf> {
        match &self.rules {
            Some(p) => Some(p.clone()),
            None => Some(self.sibling(RULES_FILE)).filter(|p| p.exists()),
        }
    }
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.to_owned(), source })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, LoadError> {
    serde_json::from_str(&read(path)?).map_err(|source| LoadError::Json { path: path.to_owned(), source })
}

pub fn load_program(path: &Path) -> Result<Program, LoadError> {
    parse_program(&read(path)?).map_err(|source| LoadError::Parse { path: path.to_owned(), source })
}

pub fn load_questionnaire(path: &Path) -> Result<Questionnaire, LoadError> {
    let questions: Vec<Question> = read_json(path)?;
    Ok(Questionnaire::new(questions)?)
}

pub fn load_rule_texts(path: &Path) -> Result<BTreeMap<u32, String>, LoadError> {
    let raw: BTreeMap<String, String> = read_json(path)?;
    raw.into_iter()
        .map(|(k, v)| match k.parse() {
            Ok(n) => Ok((n, v)),
            Err(_) => Err(LoadError::RuleKey { path: path.to_owned(), key: k }),
        })
        .collect()
}

pub fn load_kb(paths: &KbPaths) -> Result<KnowledgeBase, LoadError> {
    let program = load_program(&paths.kb)?;
    let questionnaire = load_questionnaire(&paths.questionnaire_path())?;
    let texts = match paths.rules_path() {
        Some(p) => load_rule_texts(&p)?,
        None => BTreeMap::new(),
    };
    Ok(KnowledgeBase::new(program, questionnaire, texts)?)
}

/// A JSON object mapping condition names to booleans.
pub fn load_answers(path: &Path) -> Result<AnswerSet, LoadError> {
    let map: BTreeMap<String, bool> = read_json(path)?;
    Ok(map.into_iter().collect())
}
