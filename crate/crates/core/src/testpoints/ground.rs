use std::collections::BTreeMap;

use super::pick::TestPointFn;
use crate::model::{Atom, HornClause, Pos, Problem, SortId, SortKind};
use crate::num::{Scalar, Value};

/// Something whose variables can be grounded over test points.
pub enum Item<'a, S> {
    Clause(&'a HornClause<S>),
    Atom(&'a Atom<S>),
}

/// Values a variable may take: its sort intersected with the test points of
/// every position it occupies.
fn domain<S: Scalar>(problem: &Problem<S>, sort: SortId, positions: &[Pos], beta: &TestPointFn<S>) -> Vec<Value<S>> {
    let Some((first, rest)) = positions.split_first() else {
        return match problem.sort(sort).kind {
            SortKind::Finite => problem.members(sort),
            _ => Vec::new(),
        };
    };
    beta.get(first)
        .iter()
        .filter(|v| problem.in_sort(sort, v) && rest.iter().all(|p| beta.get(p).contains(v)))
        .cloned()
        .collect()
}

/// `wti(x)` for every variable of a clause. Variables need an occurrence in
/// `Δ → H` (true after repair) to receive a nonempty arithmetic domain.
pub fn clause_domains<S: Scalar>(
    problem: &Problem<S>,
    clause: &HornClause<S>,
    beta: &TestPointFn<S>,
) -> BTreeMap<String, Vec<Value<S>>> {
    clause
        .var_sorts
        .iter()
        .map(|(x, &sort)| (x.clone(), domain(problem, sort, &clause.positions_of(x, true), beta)))
        .collect()
}

pub fn atom_domains<S: Scalar>(problem: &Problem<S>, atom: &Atom<S>, beta: &TestPointFn<S>) -> BTreeMap<String, Vec<Value<S>>> {
    let mut positions: BTreeMap<String, Vec<Pos>> = BTreeMap::new();
    for (i, t) in atom.args.iter().enumerate() {
        if let Some(x) = t.as_var() {
            positions.entry(x.to_string()).or_default().push(Pos::new(&atom.pred, i));
        }
    }
    positions
        .into_iter()
        .map(|(x, ps)| {
            let sort = problem.pos_sort(&ps[0]);
            let d = domain(problem, sort, &ps, beta);
            (x, d)
        })
        .collect()
}

/// Lexicographic enumeration of all substitutions over per-variable domains.
pub struct Groundings<S> {
    vars: Vec<(String, Vec<Value<S>>)>,
    idx: Option<Vec<usize>>,
}

impl<S: Scalar> Groundings<S> {
    pub fn new(domains: BTreeMap<String, Vec<Value<S>>>) -> Self {
        let vars: Vec<_> = domains.into_iter().collect();
        let idx = if vars.iter().any(|(_, d)| d.is_empty()) { None } else { Some(vec![0; vars.len()]) };
        Groundings { vars, idx }
    }

    /// Number of substitutions, saturating.
    pub fn size(domains: &BTreeMap<String, Vec<Value<S>>>) -> u128 {
        domains.values().fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
    }
}

impl<S: Scalar> Iterator for Groundings<S> {
    type Item = BTreeMap<String, Value<S>>;

    fn next(&mut self) -> Option<Self::Item> {
        let idx = self.idx.as_mut()?;
        let out = self.vars.iter().zip(idx.iter()).map(|((x, d), &k)| (x.clone(), d[k].clone())).collect();
        let mut k = idx.len();
        loop {
            if k == 0 {
                self.idx = None;
                break;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < self.vars[k].1.len() {
                break;
            }
            idx[k] = 0;
        }
        Some(out)
    }
}

/// All well-typed instances of `item` over `beta`, in lexicographic order of
/// variable names.
pub fn well_typed_groundings<S: Scalar>(problem: &Problem<S>, item: Item<'_, S>, beta: &TestPointFn<S>) -> Groundings<S> {
    let domains = match item {
        Item::Clause(c) => clause_domains(problem, c, beta),
        Item::Atom(a) => atom_domains(problem, a, beta),
    };
    Groundings::new(domains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn num(n: i64) -> Value<Rational64> {
        Value::Num(Rational64::from_integer(n))
    }

    #[test]
    fn enumerates_in_lexicographic_order() {
        let d = BTreeMap::from([("x".to_string(), vec![num(1), num(2)]), ("y".to_string(), vec![num(0), num(5)])]);
        let all: Vec<Vec<Value<Rational64>>> = Groundings::new(d).map(|s| s.into_values().collect()).collect();
        assert_eq!(all, vec![vec![num(1), num(0)], vec![num(1), num(5)], vec![num(2), num(0)], vec![num(2), num(5)]]);
    }

    #[test]
    fn ground_items_have_one_empty_substitution() {
        let all: Vec<_> = Groundings::<Rational64>::new(BTreeMap::new()).collect();
        assert_eq!(all, vec![BTreeMap::new()]);
    }

    #[test]
    fn empty_domain_gives_nothing() {
        let d = BTreeMap::from([("x".to_string(), vec![num(1)]), ("y".to_string(), vec![])]);
        assert_eq!(Groundings::new(d).count(), 0);
    }
}
