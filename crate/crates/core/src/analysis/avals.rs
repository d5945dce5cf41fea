use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::toposort;
use petgraph::graph::DiGraph;

use crate::model::{HornClause, LinearAtom, Pos, Problem, SortKind, Term};
use crate::num::{Scalar, Value};

/// Over-approximated set of derivable values at one argument position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AvalSet<S> {
    Finite(BTreeSet<Value<S>>),
    /// The whole arithmetic domain.
    Top,
}

impl<S: Scalar> AvalSet<S> {
    pub fn is_finite(&self) -> bool {
        matches!(self, AvalSet::Finite(_))
    }

    pub fn values(&self) -> Option<&BTreeSet<Value<S>>> {
        match self {
            AvalSet::Finite(v) => Some(v),
            AvalSet::Top => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AVals<S> {
    pub table: BTreeMap<Pos, AvalSet<S>>,
}

impl<S: Scalar> AVals<S> {
    pub fn get(&self, pos: &Pos) -> &AvalSet<S> {
        &self.table[pos]
    }

    pub fn is_finite(&self, pos: &Pos) -> bool {
        self.get(pos).is_finite()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum DeriveMode {
    /// Iterate over all clauses until nothing changes.
    #[default]
    Fixpoint,
    /// Visit clauses once in dependency order when the predicate graph is
    /// acyclic; fall back to the fixpoint otherwise.
    OnePassIfAcyclic,
}

enum Contribution<S> {
    Values(BTreeSet<Value<S>>),
    Top,
}

/// Values the head position `i` of `clause` can receive under `avals`.
fn contribution<S: Scalar>(
    problem: &Problem<S>,
    clause: &HornClause<S>,
    i: usize,
    avals: &BTreeMap<Pos, AvalSet<S>>,
) -> Contribution<S> {
    let head = clause.head.as_ref().expect("clause with head");
    let pos_sort = problem.pred(&head.pred).expect("declared").arg_sorts[i];
    let x = match &head.args[i] {
        Term::Var(x) => x,
        t => return Contribution::Values(t.as_value().into_iter().collect()),
    };
    let assigned: BTreeSet<Value<S>> = clause
        .theory
        .iter()
        .filter_map(LinearAtom::as_assignment)
        .filter(|(v, _)| *v == x)
        .map(|(_, c)| Value::Num(c))
        .filter(|v| problem.in_sort(pos_sort, v))
        .collect();
    if !assigned.is_empty() {
        return Contribution::Values(assigned);
    }
    let mut meet: Option<BTreeSet<Value<S>>> = None;
    for pos in clause.positions_of(x, false) {
        if let AvalSet::Finite(vals) = &avals[&pos] {
            meet = Some(match meet {
                None => vals.clone(),
                Some(m) => m.intersection(vals).cloned().collect(),
            });
        }
    }
    match meet {
        Some(vals) => Contribution::Values(vals),
        None if problem.sort(pos_sort).kind == SortKind::Finite => {
            Contribution::Values(problem.members(pos_sort).into_iter().collect())
        }
        None => Contribution::Top,
    }
}

/// Applies one clause to the table; returns whether anything changed.
fn apply<S: Scalar>(problem: &Problem<S>, clause: &HornClause<S>, table: &mut BTreeMap<Pos, AvalSet<S>>) -> bool {
    let Some(head) = &clause.head else { return false };
    let mut changed = false;
    for i in 0..head.args.len() {
        let pos = Pos::new(&head.pred, i);
        if table[&pos] == AvalSet::Top {
            continue;
        }
        match contribution(problem, clause, i, table) {
            Contribution::Top => {
                table.insert(pos, AvalSet::Top);
                changed = true;
            }
            Contribution::Values(vals) => {
                let AvalSet::Finite(current) = table.get_mut(&pos).unwrap() else { unreachable!() };
                let before = current.len();
                current.extend(vals);
                changed |= current.len() != before;
            }
        }
    }
    changed
}

/// Over-approximates the values derivable at every argument position.
///
/// Finite-sort positions are never `Top`: where the arithmetic case would
/// give up, they receive all members of their sort instead.
pub fn derive_values<S: Scalar>(problem: &Problem<S>) -> AVals<S> {
    derive_values_with(problem, DeriveMode::Fixpoint)
}

pub fn derive_values_with<S: Scalar>(problem: &Problem<S>, mode: DeriveMode) -> AVals<S> {
    let mut table: BTreeMap<Pos, AvalSet<S>> =
        problem.positions().map(|p| (p, AvalSet::Finite(BTreeSet::new()))).collect();
    if mode == DeriveMode::OnePassIfAcyclic {
        if let Some(order) = dependency_order(problem) {
            for k in order {
                apply(problem, &problem.clauses[k], &mut table);
            }
            return AVals { table };
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for clause in &problem.clauses {
            changed |= apply(problem, clause, &mut table);
        }
    }
    AVals { table }
}

/// Clause indices ordered so that every clause comes after all clauses
/// deriving its body predicates, or `None` if the predicates are recursive.
pub fn dependency_order<S: Scalar>(problem: &Problem<S>) -> Option<Vec<usize>> {
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: BTreeMap<&str, _> = problem.preds.iter().map(|p| (p.name.as_str(), graph.add_node(()))).collect();
    for clause in &problem.clauses {
        let Some(head) = &clause.head else { continue };
        for atom in &clause.body {
            graph.update_edge(nodes[atom.pred.as_str()], nodes[head.pred.as_str()], ());
        }
    }
    let order = toposort(&graph, None).ok()?;
    let rank: BTreeMap<_, usize> = order.iter().enumerate().map(|(k, n)| (*n, k)).collect();
    let mut clauses: Vec<usize> = (0..problem.clauses.len()).collect();
    clauses.sort_by_key(|&k| {
        problem.clauses[k].head.as_ref().map_or(usize::MAX, |h| rank[&nodes[h.pred.as_str()]])
    });
    Some(clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{normalize, parse_problem};
    use num_rational::Rational64;

    fn run(text: &str) -> AVals<Rational64> {
        derive_values(&normalize(&parse_problem(text).unwrap()))
    }

    fn nums(v: &[i64]) -> AvalSet<Rational64> {
        AvalSet::Finite(v.iter().map(|&n| Value::Num(Rational64::from_integer(n))).collect())
    }

    #[test]
    fn finite_chain() {
        let a = run("pred P(Real). pred Q(Real). clause P(0). clause P(1). clause P(x) -> Q(x).");
        assert_eq!(a.get(&Pos::new("P", 0)), &nums(&[0, 1]));
        assert_eq!(a.get(&Pos::new("Q", 0)), &nums(&[0, 1]));
    }

    #[test]
    fn empty_problem_has_empty_sets() {
        let a = run("pred P(Real, Int).");
        assert!(a.table.values().all(|s| s == &nums(&[])));
    }

    #[test]
    fn unconstrained_head_is_top_and_finite_sorts_never_are() {
        let a = run("sort F = {a, b}. pred P(Real, F). clause x > 0 || -> P(x, u).");
        assert_eq!(a.get(&Pos::new("P", 0)), &AvalSet::Top);
        let members: BTreeSet<_> = ["a", "b"].iter().map(|m| Value::Fo(m.to_string())).collect();
        assert_eq!(a.get(&Pos::new("P", 1)), &AvalSet::Finite(members));
    }

    #[test]
    fn top_is_neutral_in_intersections() {
        let a = run("pred P(Real). pred Q(Real). pred R(Real). \
                     clause x > 0 || -> P(x). clause Q(3). clause Q(4). clause P(x), Q(x) -> R(x).");
        assert_eq!(a.get(&Pos::new("R", 0)), &nums(&[3, 4]));
    }

    #[test]
    fn one_pass_matches_fixpoint_on_acyclic_input() {
        let text = "pred P(Real). pred Q(Real). pred R(Real, Real). \
                    clause P(x), Q(y) -> R(x, y). clause P(x) -> Q(x). clause P(2). clause x = 5 || -> P(x).";
        let p = normalize(&parse_problem::<Rational64>(text).unwrap());
        assert!(dependency_order(&p).is_some());
        assert_eq!(derive_values(&p), derive_values_with(&p, DeriveMode::OnePassIfAcyclic));
        assert_eq!(derive_values(&p).get(&Pos::new("R", 1)), &nums(&[2, 5]));
    }

    #[test]
    fn recursion_falls_back_to_fixpoint() {
        let p = normalize(&parse_problem::<Rational64>("pred P(Real). clause P(0). clause P(x) -> P(x).").unwrap());
        assert!(dependency_order(&p).is_none());
        assert_eq!(derive_values_with(&p, DeriveMode::OnePassIfAcyclic).get(&Pos::new("P", 0)), &nums(&[0]));
    }
}
