use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Program, RuleOrigin};

/// Loop classification of a program's positive/negative dependency graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Atoms lying on a dependency cycle through an odd number of `not`
    /// edges, sorted by name.
    pub odd_loop_atoms: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.odd_loop_atoms.is_empty()
    }
}

/// Edges run from a rule head to each body atom; an edge has parity 1 when the
/// body literal is under `not`. Constraints contribute no edges.
pub fn validate(program: &Program) -> ValidationReport {
    let n = program.atom_count();
    let mut edges: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n];
    for rule in program.rules() {
        let Some(head) = rule.head else { continue };
        for lit in &rule.body {
            edges[head.index()].push((lit.atom.index(), lit.is_naf() as u8));
        }
    }

    let comp = strongly_connected(&edges);
    let mut parity: Vec<Option<u8>> = vec![None; n];
    let mut odd_comp = vec![false; n];
    for root in 0..n {
        if parity[root].is_some() {
            continue;
        }
        // label the component of `root` with path parities; a conflicting
        // edge inside the component closes an odd walk
        parity[root] = Some(0);
        let mut todo = vec![root];
        while let Some(u) = todo.pop() {
            let pu = parity[u].unwrap();
            for &(v, w) in &edges[u] {
                if comp[v] != comp[u] {
                    continue;
                }
                match parity[v] {
                    None => {
                        parity[v] = Some(pu ^ w);
                        todo.push(v);
                    }
                    Some(pv) if pv != pu ^ w => odd_comp[comp[u]] = true,
                    Some(_) => {}
                }
            }
        }
    }

    let mut odd_loop_atoms: Vec<String> =
        (0..n).filter(|&a| odd_comp[comp[a]]).map(|a| String::from(program.name(super::AtomId(a as u32)))).collect();
    odd_loop_atoms.sort();

    let mut warnings = Vec::new();
    for (atom, _) in program.desugared_abducibles() {
        let own = program.rules().iter().filter(|r| r.head == Some(atom) && r.origin == RuleOrigin::Source).count();
        if own > 0 {
            warnings.push(format!(
                "abducible `{}` also has {own} rule(s) of its own; the abducible loop was added alongside",
                program.name(atom)
            ));
        }
    }
    for atom in program.abducible_directives() {
        if program.rules().iter().any(|r| r.head == Some(atom)) {
            warnings.push(format!(
                "abducible `{}` also has rules of its own; the abducible loop will be added alongside",
                program.name(atom)
            ));
        }
    }
    ValidationReport { odd_loop_atoms, warnings }
}

/// Tarjan's algorithm without recursion. Returns a component id per node.
fn strongly_connected(edges: &[Vec<(usize, u8)>]) -> Vec<usize> {
    let n = edges.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;

    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(start, 0)];
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&mut (u, ref mut i)) = work.last_mut() {
            if let Some(&(v, _)) = edges[u].get(*i) {
                *i += 1;
                if index[v] == usize::MAX {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    work.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == index[u] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == u {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::super::{desugar_abducibles, parse_program};
    use super::*;

    fn odd(src: &str) -> Vec<String> {
        validate(&parse_program(src).unwrap()).odd_loop_atoms
    }

    #[test]
    fn even_loop_is_fine() {
        assert!(odd("p :- not q. q :- not p.").is_empty());
    }

    #[test]
    fn self_negation_is_odd() {
        assert_eq!(odd("p :- not p."), ["p"]);
    }

    #[test]
    fn three_negations_around_a_cycle() {
        assert_eq!(odd("a :- not b. b :- not c. c :- not a. d :- a."), ["a", "b", "c"]);
    }

    #[test]
    fn positive_loops_and_chains() {
        assert!(odd("p :- q. q :- p. r :- not p.").is_empty());
        assert!(odd("a :- not b. b :- not c. c.").is_empty());
    }

    #[test]
    fn constraints_do_not_form_loops() {
        assert!(odd(":- p. p :- not q. q :- not p.").is_empty());
    }

    #[test]
    fn odd_walk_through_shared_component() {
        // q sits on the positive cycle p-q but its component also holds the
        // odd self-loop on p
        assert_eq!(odd("p :- not p. p :- q. q :- p."), ["p", "q"]);
    }

    #[test]
    fn desugared_abducibles_are_even() {
        let p = desugar_abducibles(&parse_program("#abducible a. #abducible b. x :- a, not b.").unwrap()).unwrap();
        let report = validate(&p);
        assert!(report.is_ok());
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn warns_when_abducible_has_rules() {
        let p = desugar_abducibles(&parse_program("#abducible a. a :- b.").unwrap()).unwrap();
        let report = validate(&p);
        assert!(report.is_ok());
        assert_eq!(report.warnings.len(), 1);
    }
}
