//! Translation of a reduced clause set into a Datalog program over test points.

mod conjecture;
mod rename;

pub use conjecture::{
    conjecture_groundings, encode_universal_stratified, goal_transform, hammer_existential, hammer_universal,
};
pub use rename::{rename_theory, sort_facts, theory_facts, Catalog, Renamed, SortPredicate, TheoryPredicate};

use std::collections::BTreeSet;

use crate::engine::{DAtom, DTerm, GroundAtom, Program};
use crate::model::{Problem, Quantifier};
use crate::num::{Scalar, Value};
use crate::testpoints::{ExtrapolationFn, TestPointFn};

pub const GOAL: &str = "__goal";
pub const EXPECTED: &str = "__expected";
pub const MISSING: &str = "__missing";

pub type Fact<S> = GroundAtom<Value<S>>;

/// A Horn clause without arithmetic; `None` is `⊥`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HbsRule<S> {
    pub head: Option<DAtom<Value<S>>>,
    pub body: Vec<DAtom<Value<S>>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Encoding {
    /// One clause whose body lists every grounding of the conjecture.
    Clause,
    /// `__expected` facts plus two rules with negation.
    #[default]
    Stratified,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct HammerStats {
    pub rules: usize,
    pub facts: usize,
    /// `|B|`: size of the largest test-point set.
    pub max_testpoints: usize,
    /// `|Δφ|`: number of conjecture groundings, 0 without a covered
    /// universal conjecture.
    pub conjecture_body: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HammeredProgram<S> {
    pub program: Program<Value<S>>,
    pub catalog: Catalog<S>,
    pub tfacts: BTreeSet<Fact<S>>,
    pub sfacts: BTreeSet<Fact<S>>,
    /// `N_C` under the clause encoding, or `__expected` facts under the
    /// stratified one.
    pub conjecture_body: Vec<Vec<Value<S>>>,
    pub stats: HammerStats,
}

fn ground<S: Scalar>(atom: &DAtom<Value<S>>) -> Option<Fact<S>> {
    let args = atom
        .args
        .iter()
        .map(|t| match t {
            DTerm::Const(c) => Some(c.clone()),
            DTerm::Var(_) => None,
        })
        .collect::<Option<Vec<_>>>()?;
    Some(GroundAtom { pred: atom.pred.clone(), args })
}

/// Hammers a normalized problem. An existential conjecture must already have
/// been folded into the clauses with [`hammer_existential`].
pub fn hammer<S: Scalar>(
    problem: &Problem<S>,
    beta: &TestPointFn<S>,
    eta: &ExtrapolationFn<S>,
    encoding: Encoding,
) -> HammeredProgram<S> {
    let Renamed { mut rules, catalog } = rename_theory(problem, beta);
    let tfacts = theory_facts(&catalog);
    let sfacts = sort_facts(problem, &catalog, beta);

    let universal = problem.conjecture.as_ref().filter(|c| c.quantifier == Quantifier::Forall);
    debug_assert!(problem.conjecture.is_none() || universal.is_some());
    let groundings = universal.and_then(|c| conjecture_groundings(problem, c, beta, eta)).unwrap_or_default();
    let mut extra_rules = Vec::new();
    let mut expected = BTreeSet::new();
    if let Some(conj) = universal {
        match encoding {
            Encoding::Clause => rules.extend(hammer_universal(problem, conj, beta, eta)),
            Encoding::Stratified => (expected, extra_rules) = encode_universal_stratified(problem, conj, beta, eta),
        }
    }

    let mut program = Program::default();
    for rule in goal_transform(rules) {
        match ground(&rule.head) {
            Some(fact) if rule.pos.is_empty() => {
                program.facts.insert(fact);
            }
            _ => program.rules.push(rule),
        }
    }
    program.rules.extend(extra_rules);
    program.facts.extend(tfacts.iter().cloned());
    program.facts.extend(sfacts.iter().cloned());
    program.facts.extend(expected);

    let stats = HammerStats {
        rules: program.rules.len(),
        facts: program.facts.len(),
        max_testpoints: beta.max_size(),
        conjecture_body: groundings.len(),
    };
    HammeredProgram { program, catalog, tfacts, sfacts, conjecture_body: groundings, stats }
}
