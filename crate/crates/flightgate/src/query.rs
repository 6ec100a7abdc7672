//! Ad hoc queries against the loaded rule base or a supplied program.

use flightgate_core::{
    parse_program, parse_query, render_structured, solve, validate, Answer, DualProgram, ParseError, Program,
    SolveError, SolveOptions, TemplateMap,
};

use crate::schema::{ModelDoc, QueryResponse, SCHEMA_VERSION};

/// Upper bound on `max_models`.
pub const MAX_MODELS: usize = 1000;

#[derive(Debug, thiserror::Error)]
pub enum QueryError {
    #[error("program: {source}")]
    Program { source: ParseError },
    #[error("query: {source}")]
    Query { source: ParseError },
    #[error("unknown atom `{0}` in query")]
    UnknownAtom(String),
    #[error("max_models must be between 1 and {MAX_MODELS}, got {0}")]
    ModelCount(usize),
    #[error("odd loops through negation involving: {}", .0.join(", "))]
    OddLoops(Vec<String>),
    #[error(transparent)]
    Engine(SolveError),
}

impl QueryError {
    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            QueryError::Program { source } | QueryError::Query { source } => Some(source.location()),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub struct QueryOutcome {
    pub dual: DualProgram,
    pub templates: TemplateMap,
    pub answers: Vec<Answer>,
    pub exhausted: bool,
}

pub fn run_query(
    base: &Program,
    program: Option<&str>,
    query: &str,
    max_models: usize,
) -> Result<QueryOutcome, QueryError> {
    if max_models == 0 || max_models > MAX_MODELS {
        return Err(QueryError::ModelCount(max_models));
    }
    let parsed;
    let program = match program {
        Some(src) => {
            parsed = parse_program(src).map_err(|source| QueryError::Program { source })?;
            &parsed
        }
        None => base,
    };
    let report = validate(program);
    if !report.is_ok() {
        return Err(QueryError::OddLoops(report.odd_loop_atoms));
    }
    let literals = parse_query(query).map_err(|source| QueryError::Query { source })?;
    let dual = DualProgram::new(program).map_err(QueryError::Engine)?;
    let goal = dual.program().resolve_query(&literals).map_err(QueryError::UnknownAtom)?;
    let mut answers = solve(&goal, &dual, SolveOptions::limit(max_models + 1)).map_err(QueryError::Engine)?;
    let exhausted = answers.len() <= max_models;
    answers.truncate(max_models);
    let templates = TemplateMap::new(dual.program());
    Ok(QueryOutcome { dual, templates, answers, exhausted })
}

impl QueryOutcome {
    pub fn literal_names(&self, answer: &Answer) -> Vec<String> {
        let program = self.dual.program();
        answer.model.visible_literals(program).into_iter().map(|l| program.display_literal(l).to_string()).collect()
    }

    pub fn to_response(&self) -> QueryResponse {
        let models = self
            .answers
            .iter()
            .map(|a| ModelDoc {
                literals: self.literal_names(a),
                justifications: a.proofs.iter().filter_map(|p| render_structured(p, &self.templates)).collect(),
            })
            .collect();
        QueryResponse { schema_version: SCHEMA_VERSION, models, exhausted: self.exhausted }
    }
}
