//! Brute-force hierarchic unit resolution over the test-point grounding of a
//! clause set. Slow and independent of the hammer; tests compare against it.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::GroundAtom;
use crate::model::{Atom, HornClause, LinearAtom, Pos, Problem, Rel, SortId, SortKind, Term};
use crate::num::{Scalar, Value};
use crate::testpoints::TestPointFn;

/// Default cap on the number of ground clauses.
pub const DEFAULT_ORACLE_LIMIT: u128 = 1_000_000;

/// Reads the grounding cap from `SLAH_ORACLE_LIMIT`.
pub fn oracle_limit() -> u128 {
    std::env::var("SLAH_ORACLE_LIMIT").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_ORACLE_LIMIT)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("grounding has {size} instances, above the oracle limit of {limit}")]
pub struct ScaleExceeded {
    pub size: u128,
    pub limit: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult<S> {
    /// `⊥` was derived.
    pub refuted: bool,
    pub facts: BTreeSet<GroundAtom<Value<S>>>,
}

/// Candidate values per clause variable: its sort, cut down to the test
/// points of every free-atom position it occupies.
fn variable_domains<S: Scalar>(problem: &Problem<S>, clause: &HornClause<S>, beta: &TestPointFn<S>) -> Vec<(String, Vec<Value<S>>)> {
    let mut positions: BTreeMap<&str, Vec<_>> = clause.var_sorts.keys().map(|x| (x.as_str(), Vec::new())).collect();
    for atom in clause.body.iter().chain(clause.head.iter()) {
        for (i, t) in atom.args.iter().enumerate() {
            if let Term::Var(x) = t {
                positions.get_mut(x.as_str()).expect("sorted variable").push(Pos::new(&atom.pred, i));
            }
        }
    }
    positions
        .into_iter()
        .map(|(x, ps)| {
            let sort_id = clause.var_sorts[x];
            let sort = problem.sort(sort_id);
            let candidates: Vec<Value<S>> = match ps.first() {
                Some(p) => beta.get(p).to_vec(),
                None if sort.kind == SortKind::Finite => sort.members.iter().map(|m| Value::Fo(m.clone())).collect(),
                None => Vec::new(),
            };
            let of_sort = |v: &Value<S>| match (sort.kind, v) {
                (SortKind::Real, Value::Num(_)) => true,
                (SortKind::Int, Value::Num(n)) => n.is_integer(),
                (SortKind::Finite, Value::Fo(c)) => sort.members.contains(c),
                _ => false,
            };
            let dom = candidates.into_iter().filter(|v| of_sort(v) && ps.iter().all(|p| beta.get(p).contains(v))).collect();
            (x.to_string(), dom)
        })
        .collect()
}

fn theory_true<S: Scalar>(atom: &LinearAtom<S>, sigma: &BTreeMap<&str, &Value<S>>) -> bool {
    let mut lhs = S::zero();
    for (x, c) in &atom.combo {
        let Some(Value::Num(v)) = sigma.get(x.as_str()) else { return false };
        lhs = lhs + c.clone() * (*v).clone();
    }
    match atom.rel {
        Rel::Le => lhs <= atom.bound,
        Rel::Lt => lhs < atom.bound,
        Rel::Eq => lhs == atom.bound,
        Rel::Ne => lhs != atom.bound,
        Rel::Gt => lhs > atom.bound,
        Rel::Ge => lhs >= atom.bound,
    }
}

fn instantiate<S: Scalar>(atom: &Atom<S>, sigma: &BTreeMap<&str, &Value<S>>) -> GroundAtom<Value<S>> {
    let args = atom
        .args
        .iter()
        .map(|t| match t {
            Term::Var(x) => sigma[x.as_str()].clone(),
            Term::Num(c) => Value::Num(c.clone()),
            Term::Fo(c) => Value::Fo(c.clone()),
        })
        .collect();
    GroundAtom { pred: atom.pred.clone(), args }
}

/// Number of well-typed ground instances of all clauses, saturating.
pub fn grounding_size<S: Scalar>(problem: &Problem<S>, beta: &TestPointFn<S>) -> u128 {
    problem
        .clauses
        .iter()
        .map(|c| variable_domains(problem, c, beta).iter().fold(1u128, |acc, (_, d)| acc.saturating_mul(d.len() as u128)))
        .fold(0u128, u128::saturating_add)
}

struct GroundClause {
    body: Vec<usize>,
    head: Option<usize>,
}

/// Grounds every clause over its test points, keeps the instances whose
/// theory part is true, and saturates them under unit resolution.
pub fn oracle_ground_resolution<S: Scalar>(
    problem: &Problem<S>,
    beta: &TestPointFn<S>,
    limit: u128,
) -> Result<OracleResult<S>, ScaleExceeded> {
    let size = grounding_size(problem, beta);
    if size > limit {
        return Err(ScaleExceeded { size, limit });
    }
    let mut ids: HashMap<GroundAtom<Value<S>>, usize> = HashMap::new();
    let mut atoms: Vec<GroundAtom<Value<S>>> = Vec::new();
    let mut intern = |a: GroundAtom<Value<S>>| -> usize {
        if let Some(&k) = ids.get(&a) {
            return k;
        }
        atoms.push(a.clone());
        ids.insert(a, atoms.len() - 1);
        atoms.len() - 1
    };
    let mut ground: Vec<GroundClause> = Vec::new();
    for clause in &problem.clauses {
        let domains = variable_domains(problem, clause, beta);
        let mut idx = vec![0usize; domains.len()];
        if domains.iter().any(|(_, d)| d.is_empty()) {
            continue;
        }
        'instances: loop {
            let sigma: BTreeMap<&str, &Value<S>> =
                domains.iter().zip(&idx).map(|((x, d), &k)| (x.as_str(), &d[k])).collect();
            if clause.theory.iter().all(|a| theory_true(a, &sigma)) {
                let mut body: Vec<usize> = clause.body.iter().map(|a| intern(instantiate(a, &sigma))).collect();
                body.sort_unstable();
                body.dedup();
                let head = clause.head.as_ref().map(|h| intern(instantiate(h, &sigma)));
                ground.push(GroundClause { body, head });
            }
            let mut k = idx.len();
            loop {
                if k == 0 {
                    break 'instances;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < domains[k].1.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); atoms.len()];
    let mut waiting: Vec<usize> = Vec::with_capacity(ground.len());
    for (c, g) in ground.iter().enumerate() {
        for &a in &g.body {
            watchers[a].push(c);
        }
        waiting.push(g.body.len());
    }
    let mut derived = vec![false; atoms.len()];
    let mut refuted = false;
    let mut queue: Vec<usize> = Vec::new();
    let fire = |c: usize, derived: &mut Vec<bool>, queue: &mut Vec<usize>, refuted: &mut bool| match ground[c].head {
        Some(h) if !derived[h] => {
            derived[h] = true;
            queue.push(h);
        }
        Some(_) => {}
        None => *refuted = true,
    };
    for (c, &w) in waiting.iter().enumerate() {
        if w == 0 {
            fire(c, &mut derived, &mut queue, &mut refuted);
        }
    }
    while let Some(a) = queue.pop() {
        for &c in &watchers[a] {
            waiting[c] -= 1;
            if waiting[c] == 0 {
                fire(c, &mut derived, &mut queue, &mut refuted);
            }
        }
    }
    let facts = atoms.into_iter().zip(derived).filter(|(_, d)| *d).map(|(a, _)| a).collect();
    Ok(OracleResult { refuted, facts })
}

/// Ground instances of `atom` with variables ranging over the test points of
/// their positions, filtered by sort.
pub fn atom_instances<S: Scalar>(problem: &Problem<S>, atom: &Atom<S>, beta: &TestPointFn<S>) -> Vec<GroundAtom<Value<S>>> {
    let mut vars: BTreeMap<String, SortId> = BTreeMap::new();
    let sig = problem.pred(&atom.pred).expect("declared predicate");
    for (t, s) in atom.args.iter().zip(&sig.arg_sorts) {
        if let Term::Var(x) = t {
            vars.insert(x.clone(), *s);
        }
    }
    let probe = HornClause { theory: vec![], body: vec![atom.clone()], head: None, var_sorts: vars };
    let domains = variable_domains(problem, &probe, beta);
    let mut out = Vec::new();
    if domains.iter().any(|(_, d)| d.is_empty()) {
        return out;
    }
    let mut idx = vec![0usize; domains.len()];
    loop {
        let sigma: BTreeMap<&str, &Value<S>> = domains.iter().zip(&idx).map(|((x, d), &k)| (x.as_str(), &d[k])).collect();
        out.push(instantiate(atom, &sigma));
        let mut k = idx.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < domains[k].1.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{derive_values, find_connections};
    use crate::model::{normalize, parse_problem};
    use crate::testpoints::{pick_test_points, PickOptions};
    use num_rational::Rational64;

    fn run(text: &str) -> OracleResult<Rational64> {
        let p = normalize(&parse_problem::<Rational64>(text).unwrap());
        let avals = derive_values(&p);
        let conn = find_connections(&p, &avals).unwrap();
        let (beta, _) = pick_test_points(&p, &avals, &conn, PickOptions::default()).unwrap();
        oracle_ground_resolution(&p, &beta, DEFAULT_ORACLE_LIMIT).unwrap()
    }

    #[test]
    fn empty_set_is_satisfiable() {
        let r = run("");
        assert!(!r.refuted && r.facts.is_empty());
    }

    #[test]
    fn bound_and_refutation() {
        assert!(run("pred P(Real). clause x = 0 || -> P(x). clause P(y) -> false.").refuted);
        assert!(!run("pred P(Real). clause x = 0 || -> P(x). clause y > 0 || P(y) -> false.").refuted);
    }

    #[test]
    fn scale_limit() {
        let p = normalize(&parse_problem::<Rational64>("pred P(Real). clause x > 0 || -> P(x).").unwrap());
        let avals = derive_values(&p);
        let conn = find_connections(&p, &avals).unwrap();
        let (beta, _) = pick_test_points(&p, &avals, &conn, PickOptions::default()).unwrap();
        assert!(matches!(oracle_ground_resolution(&p, &beta, 0), Err(ScaleExceeded { .. })));
    }
}
