//! Proof trees and their English rendering.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::rulebase::{AtomId, Literal, Program};

/// Why a literal holds in a derivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    /// A rule with an empty body.
    Fact,
    /// The rule at this index of the program; children follow its body.
    Rule(usize),
    /// `not p` via the dual of `p`: one refutation per rule of `p`.
    Dual,
    /// Assumed through an abducible's even loop.
    Abduced,
    /// Succeeded against an ancestor call through an even number of `not`s.
    Coinductive,
    /// `not p` where `p` heads no rule.
    RulelessNegation,
    /// Already established earlier in the same derivation.
    Proved,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::Fact => "fact",
            Reason::Rule(_) => "rule",
            Reason::Dual => "dual",
            Reason::Abduced => "abduced",
            Reason::Coinductive => "coinductive_assumption",
            Reason::RulelessNegation => "ruleless_negation",
            Reason::Proved => "proved",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofNode {
    pub literal: Literal,
    pub reason: Reason,
    pub children: Vec<ProofNode>,
}

impl ProofNode {
    pub fn leaf(literal: Literal, reason: Reason) -> Self {
        ProofNode { literal, reason, children: Vec::new() }
    }

    /// Pre-order walk over the tree.
    pub fn walk(&self, f: &mut impl FnMut(&ProofNode, usize)) {
        fn go(node: &ProofNode, depth: usize, f: &mut impl FnMut(&ProofNode, usize)) {
            f(node, depth);
            for c in &node.children {
                go(c, depth + 1, f);
            }
        }
        go(self, 0, f)
    }

    /// Number of nodes left after pruning hidden atoms (with their subtrees).
    pub fn visible_len(&self, templates: &TemplateMap) -> usize {
        if templates.is_hidden(self.literal.atom) {
            return 0;
        }
        1 + self.children.iter().map(|c| c.visible_len(templates)).sum::<usize>()
    }
}

/// English text per atom: the `#pred` template, or the atom name with
/// underscores turned into spaces.
#[derive(Clone, Debug)]
pub struct TemplateMap {
    text: Vec<String>,
    names: Vec<String>,
    hidden: Vec<bool>,
}

impl TemplateMap {
    pub fn new(program: &Program) -> Self {
        let mut text = Vec::with_capacity(program.atom_count());
        let mut names = Vec::with_capacity(program.atom_count());
        let mut hidden = Vec::with_capacity(program.atom_count());
        for atom in program.atom_ids() {
            let name = program.name(atom);
            text.push(program.template(atom).map(str::to_string).unwrap_or_else(|| name.replace('_', " ")));
            names.push(name.to_string());
            hidden.push(program.is_hidden(atom));
        }
        TemplateMap { text, names, hidden }
    }

    pub fn text(&self, atom: AtomId) -> &str {
        &self.text[atom.index()]
    }

    pub fn is_hidden(&self, atom: AtomId) -> bool {
        self.hidden[atom.index()]
    }

    /// Logic syntax for a literal, e.g. `not penguin_tweety`.
    pub fn literal_syntax(&self, lit: Literal) -> String {
        let name = &self.names[lit.atom.index()];
        if lit.is_naf() {
            format!("not {name}")
        } else {
            name.clone()
        }
    }

    /// The English line for a single node, without indentation.
    pub fn sentence(&self, node: &ProofNode) -> String {
        let base = self.text(node.literal.atom);
        let mut line =
            if node.literal.is_naf() { format!("there is no evidence that {base}") } else { base.to_string() };
        match node.reason {
            Reason::Abduced => line.push_str(" (it is assumed)"),
            Reason::Coinductive => line.push_str(" (by coinduction)"),
            Reason::Proved => line.push_str(" (proved above)"),
            _ => {}
        }
        line
    }
}

/// One line per visible node, indented two spaces per level.
pub fn render_text(root: &ProofNode, templates: &TemplateMap) -> String {
    let mut lines = Vec::new();
    push_lines(root, 0, templates, &mut lines);
    lines.join("\n")
}

fn push_lines(node: &ProofNode, depth: usize, templates: &TemplateMap, out: &mut Vec<String>) {
    if templates.is_hidden(node.literal.atom) {
        return;
    }
    out.push(format!("{:indent$}{}", "", templates.sentence(node), indent = depth * 2));
    for c in &node.children {
        push_lines(c, depth + 1, templates, out);
    }
}

/// Tree document handed to user interfaces.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JustificationDoc {
    pub text: String,
    pub literal: String,
    pub reason: String,
    pub children: Vec<JustificationDoc>,
}

impl JustificationDoc {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(JustificationDoc::node_count).sum::<usize>()
    }
}

/// Structured form of [`render_text`]. Returns `None` when the root itself
/// is hidden.
pub fn render_structured(root: &ProofNode, templates: &TemplateMap) -> Option<JustificationDoc> {
    if templates.is_hidden(root.literal.atom) {
        return None;
    }
    Some(JustificationDoc {
        text: templates.sentence(root),
        literal: templates.literal_syntax(root.literal),
        reason: root.reason.as_str().to_string(),
        children: root.children.iter().filter_map(|c| render_structured(c, templates)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulebase::{desugar_abducibles, parse_program};
    use alloc::vec;

    fn tweety() -> (Program, ProofNode) {
        let p = parse_program(
            "flies_tweety :- bird_tweety, not penguin_tweety.\nbird_tweety.\n\
             #pred flies_tweety :: 'tweety flies'.\n#pred bird_tweety :: 'tweety is a bird'.\n\
             #pred penguin_tweety :: 'tweety is a penguin'.",
        )
        .unwrap();
        let a = |n| p.atom(n).unwrap();
        let tree = ProofNode {
            literal: Literal::pos(a("flies_tweety")),
            reason: Reason::Rule(0),
            children: vec![
                ProofNode::leaf(Literal::pos(a("bird_tweety")), Reason::Fact),
                ProofNode::leaf(Literal::naf(a("penguin_tweety")), Reason::RulelessNegation),
            ],
        };
        (p, tree)
    }

    #[test]
    fn tweety_text() {
        let (p, tree) = tweety();
        let t = TemplateMap::new(&p);
        assert_eq!(
            render_text(&tree, &t),
            "tweety flies\n  tweety is a bird\n  there is no evidence that tweety is a penguin"
        );
    }

    #[test]
    fn tweety_structured_matches_text() {
        let (p, tree) = tweety();
        let t = TemplateMap::new(&p);
        let doc = render_structured(&tree, &t).unwrap();
        assert_eq!(doc.node_count(), 3);
        assert_eq!(doc.node_count(), render_text(&tree, &t).lines().count());
        assert_eq!(doc.children[1].literal, "not penguin_tweety");
        assert_eq!(doc.children[1].reason, "ruleless_negation");
        assert_eq!(doc.reason, "rule");
    }

    #[test]
    fn single_fact() {
        let p = parse_program("p.\n#pred p :: 'p holds'.").unwrap();
        let t = TemplateMap::new(&p);
        let leaf = ProofNode::leaf(Literal::pos(p.atom("p").unwrap()), Reason::Fact);
        assert_eq!(render_text(&leaf, &t), "p holds");
        let doc = render_structured(&leaf, &t).unwrap();
        assert_eq!(doc.reason, "fact");
        assert!(doc.children.is_empty());
    }

    #[test]
    fn fallback_humanizes_names() {
        let p = parse_program("alcohol_drug_influence.").unwrap();
        let t = TemplateMap::new(&p);
        assert_eq!(t.text(p.atom("alcohol_drug_influence").unwrap()), "alcohol drug influence");
    }

    #[test]
    fn suffixes_and_hidden_pruning() {
        let p = desugar_abducibles(&parse_program("#abducible c. q :- not p. p :- not q.").unwrap()).unwrap();
        let t = TemplateMap::new(&p);
        let a = |n| p.atom(n).unwrap();
        let tree = ProofNode {
            literal: Literal::pos(a("q")),
            reason: Reason::Rule(0),
            children: vec![ProofNode {
                literal: Literal::naf(a("p")),
                reason: Reason::Dual,
                children: vec![ProofNode::leaf(Literal::pos(a("q")), Reason::Coinductive)],
            }],
        };
        assert_eq!(render_text(&tree, &t), "q\n  there is no evidence that p\n    q (by coinduction)");
        let hidden = ProofNode {
            literal: Literal::naf(a("c")),
            reason: Reason::Dual,
            children: vec![ProofNode::leaf(Literal::pos(a("c__neg")), Reason::Rule(3))],
        };
        assert_eq!(render_text(&hidden, &t), "there is no evidence that c");
        assert_eq!(hidden.visible_len(&t), 1);
        assert_eq!(render_structured(&hidden, &t).unwrap().children.len(), 0);
        let abduced = ProofNode::leaf(Literal::pos(a("c")), Reason::Abduced);
        assert_eq!(render_text(&abduced, &t), "c (it is assumed)");
    }
}
