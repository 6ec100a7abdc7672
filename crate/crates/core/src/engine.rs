//! Goal-directed evaluation of propositional answer set programs.
//!
//! `p` is proven by trying its rules in source order and proving each body
//! left to right. `not p` is proven through the *dual* of `p`: every rule for
//! `p` must have one body literal refuted. All literals proven so far form the
//! derivation's model; a call that contradicts it fails, a call already in it
//! succeeds at once.
//!
//! Calls that meet an ancestor for the same literal are decided by the number
//! of `not` edges of the original program crossed since that ancestor:
//!
//! | call    | zero crossings | even, nonzero | odd  |
//! |---------|----------------|---------------|------|
//! | `p`     | fail           | assume `p`    | fail |
//! | `not p` | assume `not p` | assume `not p`| fail |
//!
//! Once the query succeeds every constraint body must be refuted in the same
//! derivation before a model is emitted. Programs with odd loops through
//! negation are refused up front.
//!
//! The search keeps its own goal list and choicepoints rather than recursing,
//! so the depth of a derivation is limited only by [`SolveOptions::max_depth`].

use alloc::collections::BTreeSet;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::justify::{ProofNode, Reason};
use crate::rulebase::{desugar_abducibles, validate, AtomId, DesugarError, Literal, Program, RuleOrigin, Sign};

pub const DEFAULT_MAX_DEPTH: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("query mentions an atom unknown to the program (id {0})")]
    UnknownAtom(u32),
    #[error("program has odd loops through negation involving: {}", .0.join(", "))]
    OddLoops(Vec<String>),
    #[error("search depth exceeded {0} frames")]
    DepthLimit(usize),
    #[error(transparent)]
    Desugar(#[from] DesugarError),
}

/// A desugared program indexed for goal-directed search: the rules of each
/// atom (whose negation is the atom's dual) and the constraints.
#[derive(Clone, Debug)]
pub struct DualProgram {
    program: Program,
    rules_for: Vec<Vec<usize>>,
    constraints: Vec<usize>,
    hidden_partner: Vec<Option<AtomId>>,
    odd_loops: Vec<String>,
}

/// The dual of one atom: `not atom` holds iff, for every obligation, one of
/// its literals is proven.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dual {
    pub atom: AtomId,
    pub obligations: Vec<Vec<Literal>>,
}

impl Dual {
    /// True for atoms without rules: `not atom` is a fact.
    pub fn is_trivial(&self) -> bool {
        self.obligations.is_empty()
    }
}

/// Builds the dual program, desugaring any remaining `#abducible` directives.
pub fn compute_duals(program: &Program) -> Result<DualProgram, SolveError> {
    DualProgram::new(program)
}

impl DualProgram {
    pub fn new(program: &Program) -> Result<Self, SolveError> {
        let program = desugar_abducibles(program)?;
        let n = program.atom_count();
        let mut rules_for = vec![Vec::new(); n];
        let mut constraints = Vec::new();
        let mut hidden_partner = vec![None; n];
        for (i, rule) in program.rules().iter().enumerate() {
            match rule.head {
                Some(h) => rules_for[h.index()].push(i),
                None => constraints.push(i),
            }
        }
        for (atom, hidden) in program.desugared_abducibles() {
            hidden_partner[atom.index()] = Some(hidden);
        }
        let odd_loops = validate(&program).odd_loop_atoms;
        Ok(DualProgram { program, rules_for, constraints, hidden_partner, odd_loops })
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn odd_loop_atoms(&self) -> &[String] {
        &self.odd_loops
    }

    pub fn dual(&self, atom: AtomId) -> Dual {
        let obligations = self.rules_for[atom.index()]
            .iter()
            .map(|&r| self.program.rules()[r].body.iter().map(|l| l.negate()).collect())
            .collect();
        Dual { atom, obligations }
    }

    /// Visible atom assumed through an abducible loop.
    pub fn is_abducible(&self, atom: AtomId) -> bool {
        self.hidden_partner[atom.index()].is_some()
    }

    fn is_loop_rule(&self, rule: usize) -> bool {
        self.program.rules()[rule].origin == RuleOrigin::AbducibleLoop
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Maximum number of distinct models to emit; `None` enumerates all.
    pub limit: Option<usize>,
    pub max_depth: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { limit: None, max_depth: DEFAULT_MAX_DEPTH }
    }
}

impl SolveOptions {
    pub fn limit(n: usize) -> Self {
        SolveOptions { limit: Some(n), ..Default::default() }
    }
}

/// Literals proven or assumed along one successful derivation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialModel {
    pub positives: BTreeSet<AtomId>,
    pub negatives: BTreeSet<AtomId>,
    /// Visible abducibles whose value was assumed through their even loop.
    pub abduced: BTreeSet<AtomId>,
}

impl PartialModel {
    pub fn value(&self, atom: AtomId) -> Option<bool> {
        if self.positives.contains(&atom) {
            Some(true)
        } else if self.negatives.contains(&atom) {
            Some(false)
        } else {
            None
        }
    }

    pub fn satisfies(&self, lit: Literal) -> bool {
        match lit.sign {
            Sign::Positive => self.positives.contains(&lit.atom),
            Sign::Naf => self.negatives.contains(&lit.atom),
        }
    }

    /// Model literals without hidden atoms, positives first.
    pub fn visible_literals(&self, program: &Program) -> Vec<Literal> {
        let pos = self.positives.iter().map(|&a| Literal::pos(a));
        let neg = self.negatives.iter().map(|&a| Literal::naf(a));
        pos.chain(neg).filter(|l| !program.is_hidden(l.atom)).collect()
    }
}

/// One emitted solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub model: PartialModel,
    /// One proof per query literal, in query order.
    pub proofs: Vec<ProofNode>,
    /// One refutation per constraint, in program order.
    pub constraint_proofs: Vec<ProofNode>,
}

/// Enumerates distinct partial models of `query`, depth first in rule order.
pub fn solve(query: &[Literal], dual: &DualProgram, options: SolveOptions) -> Result<Vec<Answer>, SolveError> {
    if let Some(lit) = query.iter().find(|l| !dual.program.contains(l.atom)) {
        return Err(SolveError::UnknownAtom(lit.atom.0));
    }
    if !dual.odd_loops.is_empty() {
        return Err(SolveError::OddLoops(dual.odd_loops.clone()));
    }
    let mut goals: Vec<Goal> = query.iter().map(|&lit| Goal::Prove { lit, depth: 0 }).collect();
    goals.extend(dual.constraints.iter().map(|&rule| Goal::Refute { rule, depth: 0 }));
    let mut search = Search::new(dual, options, query.len());
    search.run(Cont::NIL.prepend(&goals))?;
    Ok(search.answers)
}

/// True iff `atom` holds in some partial model, hence in some stable model.
pub fn brave_entails(dual: &DualProgram, atom: AtomId) -> Result<bool, SolveError> {
    Ok(!solve(&[Literal::pos(atom)], dual, SolveOptions::limit(1))?.is_empty())
}

#[derive(Clone, Copy, Debug)]
enum Goal {
    Prove {
        lit: Literal,
        depth: u32,
    },
    /// Prove the negation of one body literal of `rule`.
    Refute {
        rule: usize,
        depth: u32,
    },
    FinishPositive {
        atom: AtomId,
        rule: usize,
    },
    FinishNegative {
        atom: AtomId,
    },
}

struct ContNode {
    goal: Goal,
    next: Cont,
}

/// Persistent goal list shared between choicepoints.
#[derive(Clone)]
struct Cont(Option<Rc<ContNode>>);

impl Cont {
    const NIL: Cont = Cont(None);

    fn prepend(self, goals: &[Goal]) -> Cont {
        goals.iter().rev().fold(self, |next, &goal| Cont(Some(Rc::new(ContNode { goal, next }))))
    }

    fn split(&self) -> Option<(Goal, Cont)> {
        self.0.as_ref().map(|n| (n.goal, n.next.clone()))
    }
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    lit: Literal,
    depth: u32,
}

struct PNode {
    lit: Literal,
    reason: Reason,
    children: Vec<Rc<PNode>>,
}

impl PNode {
    fn to_tree(&self) -> ProofNode {
        ProofNode {
            literal: self.lit,
            reason: self.reason,
            children: self.children.iter().map(|c| c.to_tree()).collect(),
        }
    }
}

#[derive(Clone, Copy)]
enum Alternatives {
    /// Rules of `atom`, by position in its rule list.
    Rules { atom: AtomId, depth: u32, next: usize },
    /// Body positions of `rule` still to try for refutation.
    Refute { rule: usize, depth: u32, next: usize },
}

struct ChoicePoint {
    alternatives: Alternatives,
    rest: Cont,
    trail_len: usize,
    frames: Vec<Frame>,
    proofs: Vec<Rc<PNode>>,
}

struct Search<'a> {
    dual: &'a DualProgram,
    options: SolveOptions,
    query_len: usize,
    value: Vec<Option<bool>>,
    trail: Vec<AtomId>,
    frames: Vec<Frame>,
    proofs: Vec<Rc<PNode>>,
    choicepoints: Vec<ChoicePoint>,
    seen: BTreeSet<Vec<(AtomId, bool)>>,
    answers: Vec<Answer>,
}

impl<'a> Search<'a> {
    fn new(dual: &'a DualProgram, options: SolveOptions, query_len: usize) -> Self {
        Search {
            dual,
            options,
            query_len,
            value: vec![None; dual.program.atom_count()],
            trail: Vec::new(),
            frames: Vec::new(),
            proofs: Vec::new(),
            choicepoints: Vec::new(),
            seen: BTreeSet::new(),
            answers: Vec::new(),
        }
    }

    fn run(&mut self, mut cont: Cont) -> Result<(), SolveError> {
        if self.options.limit == Some(0) {
            return Ok(());
        }
        loop {
            let next = match cont.split() {
                None => {
                    if self.emit() {
                        return Ok(());
                    }
                    None
                }
                Some((goal, rest)) => self.step(goal, rest)?,
            };
            cont = match next {
                Some(c) => c,
                None => match self.backtrack()? {
                    Some(c) => c,
                    None => return Ok(()),
                },
            };
        }
    }

    fn assign(&mut self, atom: AtomId, v: bool) {
        if self.value[atom.index()].is_none() {
            self.value[atom.index()] = Some(v);
            self.trail.push(atom);
        }
    }

    fn push_leaf(&mut self, lit: Literal, reason: Reason) {
        self.proofs.push(Rc::new(PNode { lit, reason, children: Vec::new() }));
    }

    fn pop_children(&mut self, n: usize) -> Vec<Rc<PNode>> {
        let at = self.proofs.len() - n;
        self.proofs.split_off(at)
    }

    /// Runs one goal. `None` means failure.
    fn step(&mut self, goal: Goal, rest: Cont) -> Result<Option<Cont>, SolveError> {
        match goal {
            Goal::Prove { lit, depth } => self.prove(lit, depth, rest),
            Goal::Refute { rule, depth } => {
                let body_len = self.dual.program.rules()[rule].body.len();
                if body_len == 0 {
                    return Ok(None);
                }
                let alternatives = Alternatives::Refute { rule, depth, next: 0 };
                Ok(Some(self.branch(alternatives, body_len, rest)?))
            }
            Goal::FinishPositive { atom, rule } => {
                self.frames.pop();
                self.assign(atom, true);
                let body_len = self.dual.program.rules()[rule].body.len();
                let children = self.pop_children(body_len);
                let lit = Literal::pos(atom);
                let node = if self.dual.is_loop_rule(rule) && self.dual.is_abducible(atom) {
                    PNode { lit, reason: Reason::Abduced, children: Vec::new() }
                } else if body_len == 0 {
                    PNode { lit, reason: Reason::Fact, children }
                } else {
                    PNode { lit, reason: Reason::Rule(rule), children }
                };
                self.proofs.push(Rc::new(node));
                Ok(Some(rest))
            }
            Goal::FinishNegative { atom } => {
                self.frames.pop();
                self.assign(atom, false);
                let rules = &self.dual.rules_for[atom.index()];
                let mut children = self.pop_children(rules.len());
                let lit = Literal::naf(atom);
                let node = if self.dual.is_abducible(atom) {
                    let mut keep = rules.iter().map(|&r| !self.dual.is_loop_rule(r));
                    children.retain(|_| keep.next().unwrap_or(true));
                    let reason = if children.is_empty() { Reason::Abduced } else { Reason::Dual };
                    PNode { lit, reason, children }
                } else {
                    PNode { lit, reason: Reason::Dual, children }
                };
                self.proofs.push(Rc::new(node));
                Ok(Some(rest))
            }
        }
    }

    fn prove(&mut self, lit: Literal, depth: u32, rest: Cont) -> Result<Option<Cont>, SolveError> {
        let atom = lit.atom;
        let want = lit.sign == Sign::Positive;
        if self.value[atom.index()] == Some(!want) || self.frames.iter().any(|f| f.lit == lit.negate()) {
            return Ok(None);
        }
        // A call still in progress is a loop even when a coinductive success
        // inside it has already assigned the atom.
        if let Some(anc) = self.frames.iter().rev().find(|f| f.lit == lit) {
            let crossings = depth - anc.depth;
            let coinductive = crossings.is_multiple_of(2) && (crossings > 0 || !want);
            if !coinductive {
                return Ok(None);
            }
            self.assign(atom, want);
            self.push_leaf(lit, Reason::Coinductive);
            return Ok(Some(rest));
        }
        if self.value[atom.index()].is_some() {
            self.push_leaf(lit, Reason::Proved);
            return Ok(Some(rest));
        }

        let rule_count = self.dual.rules_for[atom.index()].len();
        if want {
            if rule_count == 0 {
                return Ok(None);
            }
            let alternatives = Alternatives::Rules { atom, depth, next: 0 };
            return Ok(Some(self.branch(alternatives, rule_count, rest)?));
        }
        if rule_count == 0 {
            self.assign(atom, false);
            self.push_leaf(lit, Reason::RulelessNegation);
            return Ok(Some(rest));
        }
        self.push_frame(Frame { lit, depth })?;
        let mut goals: Vec<Goal> =
            self.dual.rules_for[atom.index()].iter().map(|&rule| Goal::Refute { rule, depth }).collect();
        goals.push(Goal::FinishNegative { atom });
        Ok(Some(rest.prepend(&goals)))
    }

    fn push_frame(&mut self, frame: Frame) -> Result<(), SolveError> {
        if self.frames.len() >= self.options.max_depth {
            return Err(SolveError::DepthLimit(self.options.max_depth));
        }
        self.frames.push(frame);
        Ok(())
    }

    /// Takes the first alternative, leaving a choicepoint for the others.
    fn branch(&mut self, alternatives: Alternatives, count: usize, rest: Cont) -> Result<Cont, SolveError> {
        if count > 1 {
            self.choicepoints.push(ChoicePoint {
                alternatives,
                rest: rest.clone(),
                trail_len: self.trail.len(),
                frames: self.frames.clone(),
                proofs: self.proofs.clone(),
            });
        }
        self.apply(alternatives, rest)
    }

    fn apply(&mut self, alternatives: Alternatives, rest: Cont) -> Result<Cont, SolveError> {
        let rules = self.dual.program.rules();
        match alternatives {
            Alternatives::Rules { atom, depth, next } => {
                let rule = self.dual.rules_for[atom.index()][next];
                self.push_frame(Frame { lit: Literal::pos(atom), depth })?;
                let mut goals: Vec<Goal> = rules[rule]
                    .body
                    .iter()
                    .map(|&lit| Goal::Prove { lit, depth: depth + lit.is_naf() as u32 })
                    .collect();
                goals.push(Goal::FinishPositive { atom, rule });
                Ok(rest.prepend(&goals))
            }
            Alternatives::Refute { rule, depth, next } => {
                let lit = rules[rule].body[next];
                let goal = Goal::Prove { lit: lit.negate(), depth: depth + lit.is_naf() as u32 };
                Ok(rest.prepend(&[goal]))
            }
        }
    }

    fn backtrack(&mut self) -> Result<Option<Cont>, SolveError> {
        let Some(mut cp) = self.choicepoints.pop() else {
            return Ok(None);
        };
        while self.trail.len() > cp.trail_len {
            let atom = self.trail.pop().unwrap();
            self.value[atom.index()] = None;
        }
        let remaining = match &mut cp.alternatives {
            Alternatives::Rules { atom, next, .. } => {
                *next += 1;
                self.dual.rules_for[atom.index()].len() - *next - 1
            }
            Alternatives::Refute { rule, next, .. } => {
                *next += 1;
                self.dual.program.rules()[*rule].body.len() - *next - 1
            }
        };
        let alternatives = cp.alternatives;
        let rest = cp.rest.clone();
        if remaining > 0 {
            self.frames.clone_from(&cp.frames);
            self.proofs.clone_from(&cp.proofs);
            self.choicepoints.push(cp);
        } else {
            self.frames = cp.frames;
            self.proofs = cp.proofs;
        }
        Ok(Some(self.apply(alternatives, rest)?))
    }

    /// Records the current derivation. Returns true when the limit is reached.
    fn emit(&mut self) -> bool {
        let key: Vec<(AtomId, bool)> =
            self.value.iter().enumerate().filter_map(|(i, v)| v.map(|v| (AtomId(i as u32), v))).collect();
        if self.seen.insert(key.clone()) {
            let mut model = PartialModel::default();
            for (atom, v) in key {
                if v {
                    model.positives.insert(atom);
                } else {
                    model.negatives.insert(atom);
                }
            }
            for atom in self.dual.program.atom_ids() {
                if let Some(hidden) = self.dual.hidden_partner[atom.index()] {
                    if self.value[atom.index()].is_some() && self.value[hidden.index()].is_some() {
                        model.abduced.insert(atom);
                    }
                }
            }
            let (proofs, constraint_proofs) = self.proofs.split_at(self.query_len);
            self.answers.push(Answer {
                model,
                proofs: proofs.iter().map(|p| p.to_tree()).collect(),
                constraint_proofs: constraint_proofs.iter().map(|p| p.to_tree()).collect(),
            });
        }
        self.options.limit.is_some_and(|l| self.answers.len() >= l)
    }
}
