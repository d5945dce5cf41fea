use std::collections::{BTreeMap, BTreeSet};

use super::{Fact, HbsRule, EXPECTED, GOAL, MISSING};
use crate::engine::{DAtom, DTerm, GroundAtom, Rule};
use crate::model::{Conjecture, HornClause, Problem, Quantifier};
use crate::num::{Scalar, Value};
use crate::testpoints::{atom_domains, eta_complete_for, ExtrapolationFn, Groundings, TestPointFn};

/// All groundings of the conjecture atom over β, or `None` if η does not
/// cover its predicate.
pub fn conjecture_groundings<S: Scalar>(
    problem: &Problem<S>,
    conj: &Conjecture<S>,
    beta: &TestPointFn<S>,
    eta: &ExtrapolationFn<S>,
) -> Option<Vec<Vec<Value<S>>>> {
    let sig = problem.pred(&conj.atom.pred).expect("declared predicate");
    if !eta_complete_for(problem, sig, beta, eta) {
        return None;
    }
    let out = Groundings::new(atom_domains(problem, &conj.atom, beta))
        .map(|sigma| {
            conj.atom
                .args
                .iter()
                .map(|t| match t.as_var() {
                    Some(x) => sigma[x].clone(),
                    None => t.as_value().expect("ground term"),
                })
                .collect()
        })
        .collect();
    Some(out)
}

/// `N_C`: the negated conjecture grounded over β, as one clause with a `⊥`
/// head. Empty when η is incomplete for the conjecture predicate.
pub fn hammer_universal<S: Scalar>(
    problem: &Problem<S>,
    conj: &Conjecture<S>,
    beta: &TestPointFn<S>,
    eta: &ExtrapolationFn<S>,
) -> Vec<HbsRule<S>> {
    let Some(groundings) = conjecture_groundings(problem, conj, beta, eta) else {
        return Vec::new();
    };
    let body = groundings
        .into_iter()
        .map(|args| DAtom::new(&conj.atom.pred, args.into_iter().map(DTerm::Const).collect()))
        .collect();
    vec![HbsRule { head: None, body }]
}

/// The conjecture as stratified negation: `__expected` facts for every
/// grounding, `__missing` if one of them is not derived, and the goal if
/// nothing is missing.
pub fn encode_universal_stratified<S: Scalar>(
    problem: &Problem<S>,
    conj: &Conjecture<S>,
    beta: &TestPointFn<S>,
    eta: &ExtrapolationFn<S>,
) -> (BTreeSet<Fact<S>>, Vec<Rule<Value<S>>>) {
    let Some(groundings) = conjecture_groundings(problem, conj, beta, eta) else {
        return (BTreeSet::new(), Vec::new());
    };
    let facts = groundings.into_iter().map(|args| GroundAtom { pred: EXPECTED.to_string(), args }).collect();
    let vars: Vec<DTerm<Value<S>>> = conj.vars.iter().map(|x| DTerm::Var(x.clone())).collect();
    let rules = vec![
        Rule {
            head: DAtom::nullary(MISSING),
            pos: vec![DAtom::new(EXPECTED, vars.clone())],
            neg: vec![DAtom::new(&conj.atom.pred, vars)],
        },
        Rule { head: DAtom::nullary(GOAL), pos: vec![], neg: vec![DAtom::nullary(MISSING)] },
    ];
    (facts, rules)
}

/// Turns `N ⊨ ∃x̄. Q(x̄)` into the clause set `N ∪ {Q(x̄) → ⊥}`.
pub fn hammer_existential<S: Scalar>(problem: &Problem<S>) -> Problem<S> {
    let mut out = problem.clone();
    let Some(conj) = out.conjecture.take() else { return out };
    debug_assert_eq!(conj.quantifier, Quantifier::Exists);
    let sig = problem.pred(&conj.atom.pred).expect("declared predicate");
    let mut var_sorts = BTreeMap::new();
    for (t, sort) in conj.atom.args.iter().zip(&sig.arg_sorts) {
        if let Some(x) = t.as_var() {
            var_sorts.insert(x.to_string(), *sort);
        }
    }
    out.clauses.push(HornClause { theory: vec![], body: vec![conj.atom], head: None, var_sorts });
    out
}

/// Gives every `⊥`-headed clause the nullary goal as head.
pub fn goal_transform<S: Scalar>(rules: Vec<HbsRule<S>>) -> Vec<Rule<Value<S>>> {
    rules
        .into_iter()
        .map(|r| Rule::positive(r.head.unwrap_or_else(|| DAtom::nullary(GOAL)), r.body))
        .collect()
}
