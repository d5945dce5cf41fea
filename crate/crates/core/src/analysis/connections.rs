use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use super::avals::{AVals, AvalSet};
use super::finite_vars;
use crate::model::{HornClause, LinearAtom, Pos, Problem, Rel, Term};
use crate::num::{Scalar, Value};

/// `x rel value` over the nominal variable of an argument-position class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SimpleBound<S> {
    pub value: S,
    pub rel: Rel,
}

impl<S: Scalar> SimpleBound<S> {
    pub fn new(rel: Rel, value: S) -> Self {
        SimpleBound { value, rel }
    }

    pub fn holds(&self, x: &S) -> bool {
        self.rel.holds(x, &self.value)
    }
}

impl<S: Scalar> fmt::Display for SimpleBound<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x {} {}", self.rel.symbol(), self.value)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Simplified<S> {
    True,
    False,
    Bound { var: String, rel: Rel, value: S },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SimplifyError {
    #[error("more than one free variable remains: {0:?}")]
    MoreThanOneFreeVariable(Vec<String>),
}

/// Substitutes `binding` into `atom` and solves for the remaining variable.
pub fn simplify_theory_atom<S: Scalar>(
    atom: &LinearAtom<S>,
    binding: &BTreeMap<String, S>,
) -> Result<Simplified<S>, SimplifyError> {
    let mut rest = atom.bound.clone();
    let mut free = Vec::new();
    for (x, c) in &atom.combo {
        match binding.get(x) {
            Some(v) => rest = rest - c.clone() * v.clone(),
            None => free.push((x, c)),
        }
    }
    match free.as_slice() {
        [] => Ok(if atom.rel.holds(&S::zero(), &rest) { Simplified::True } else { Simplified::False }),
        [(x, c)] => {
            let rel = if c.is_negative() { atom.rel.flip() } else { atom.rel };
            Ok(Simplified::Bound { var: x.to_string(), rel, value: rest / (*c).clone() })
        }
        _ => Err(SimplifyError::MoreThanOneFreeVariable(free.iter().map(|(x, _)| x.to_string()).collect())),
    }
}

/// Equivalence classes of connected argument positions and the simple bounds
/// attached to each class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Connections<S> {
    /// Position to class representative (least member).
    pub class_of: BTreeMap<Pos, Pos>,
    pub classes: BTreeMap<Pos, BTreeSet<Pos>>,
    pub bounds: BTreeMap<Pos, BTreeSet<SimpleBound<S>>>,
}

impl<S: Scalar> Connections<S> {
    pub fn rep(&self, pos: &Pos) -> &Pos {
        &self.class_of[pos]
    }

    pub fn class(&self, pos: &Pos) -> &BTreeSet<Pos> {
        &self.classes[self.rep(pos)]
    }

    pub fn bounds_of(&self, pos: &Pos) -> &BTreeSet<SimpleBound<S>> {
        &self.bounds[self.rep(pos)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConnectionError {
    #[error("theory atom `{atom}` in clause {clause} does not simplify to a bound: {source}")]
    SimplificationFailure {
        clause: usize,
        atom: String,
        #[source]
        source: SimplifyError,
    },
}

/// Numeric values common to all finite body positions of `x`.
pub(crate) fn finite_meet<S: Scalar>(clause: &HornClause<S>, x: &str, avals: &AVals<S>) -> BTreeSet<S> {
    let mut meet: Option<BTreeSet<S>> = None;
    for pos in clause.positions_of(x, false) {
        if let AvalSet::Finite(vals) = avals.get(&pos) {
            let nums: BTreeSet<S> = vals.iter().filter_map(|v| v.as_num().cloned()).collect();
            meet = Some(match meet {
                None => nums,
                Some(m) => m.intersection(&nums).cloned().collect(),
            });
        }
    }
    meet.unwrap_or_default()
}

/// Calls `f` with every binding of `vars` over the given value sets, in
/// lexicographic order of `vars` as listed.
pub(crate) fn for_each_binding<S: Scalar>(
    vars: &[(&str, Vec<S>)],
    mut f: impl FnMut(&BTreeMap<String, S>),
) {
    if vars.iter().any(|(_, vals)| vals.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; vars.len()];
    loop {
        let binding: BTreeMap<String, S> =
            vars.iter().zip(&idx).map(|((x, vals), &k)| (x.to_string(), vals[k].clone())).collect();
        f(&binding);
        let mut k = vars.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < vars[k].1.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Computes connected argument positions (union over shared variables in
/// `Δ → H`) and their connected simple bounds.
pub fn find_connections<S: Scalar>(problem: &Problem<S>, avals: &AVals<S>) -> Result<Connections<S>, ConnectionError> {
    let positions: Vec<Pos> = {
        let mut v: Vec<Pos> = problem.positions().collect();
        v.sort();
        v
    };
    let index: BTreeMap<&Pos, usize> = positions.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let mut uf = UnionFind::<usize>::new(positions.len());
    for clause in &problem.clauses {
        for x in clause.free_vars() {
            let occ = clause.positions_of(x, true);
            for pair in occ.windows(2) {
                uf.union(index[&pair[0]], index[&pair[1]]);
            }
        }
    }
    let mut class_of = BTreeMap::new();
    let mut classes: BTreeMap<Pos, BTreeSet<Pos>> = BTreeMap::new();
    let mut rep_of_root: BTreeMap<usize, Pos> = BTreeMap::new();
    // Positions are visited in ascending order, so the first member seen per
    // root is the least one.
    for (k, pos) in positions.iter().enumerate() {
        let rep = rep_of_root.entry(uf.find(k)).or_insert_with(|| pos.clone()).clone();
        classes.entry(rep.clone()).or_default().insert(pos.clone());
        class_of.insert(pos.clone(), rep);
    }
    let mut bounds: BTreeMap<Pos, BTreeSet<SimpleBound<S>>> =
        classes.keys().map(|r| (r.clone(), BTreeSet::new())).collect();

    for clause in &problem.clauses {
        for atom in clause.free_atoms() {
            for (i, t) in atom.args.iter().enumerate() {
                if let Term::Num(c) = t {
                    let rep = &class_of[&Pos::new(&atom.pred, i)];
                    bounds.get_mut(rep).unwrap().insert(SimpleBound::new(Rel::Eq, c.clone()));
                }
            }
        }
    }
    for (pos, set) in &avals.table {
        if let AvalSet::Finite(vals) = set {
            let b = bounds.get_mut(&class_of[pos]).unwrap();
            b.extend(vals.iter().filter_map(Value::as_num).map(|c| SimpleBound::new(Rel::Eq, c.clone())));
        }
    }
    for (k, clause) in problem.clauses.iter().enumerate() {
        let finite = finite_vars(clause, avals);
        for atom in &clause.theory {
            let infinite: Vec<&str> = atom.vars().filter(|x| !finite.contains(*x)).collect();
            let y = match infinite.as_slice() {
                [] => continue,
                [y] => *y,
                _ => {
                    return Err(ConnectionError::SimplificationFailure {
                        clause: k,
                        atom: atom.to_string(),
                        source: SimplifyError::MoreThanOneFreeVariable(infinite.iter().map(|s| s.to_string()).collect()),
                    })
                }
            };
            let targets: BTreeSet<Pos> =
                clause.positions_of(y, true).iter().map(|p| class_of[p].clone()).collect();
            let domains: Vec<(&str, Vec<S>)> = atom
                .vars()
                .filter(|x| *x != y)
                .map(|x| (x, finite_meet(clause, x, avals).into_iter().collect()))
                .collect();
            let mut found = BTreeSet::new();
            let mut failure = None;
            for_each_binding(&domains, |binding| match simplify_theory_atom(atom, binding) {
                Ok(Simplified::Bound { rel, value, .. }) => {
                    found.insert(SimpleBound::new(rel, value));
                }
                Ok(_) => {}
                Err(e) => failure = Some(e),
            });
            if let Some(source) = failure {
                return Err(ConnectionError::SimplificationFailure { clause: k, atom: atom.to_string(), source });
            }
            for rep in &targets {
                bounds.get_mut(rep).unwrap().extend(found.iter().cloned());
            }
        }
    }
    Ok(Connections { class_of, classes, bounds })
}
