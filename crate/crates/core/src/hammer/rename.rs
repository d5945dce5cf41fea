use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::{Fact, HbsRule};
use crate::engine::{DAtom, DTerm, GroundAtom};
use crate::model::{Atom, HornClause, LinearAtom, Pos, Problem, SortId, SortKind, Term};
use crate::num::{Scalar, Value};
use crate::testpoints::{clause_domains, Groundings, TestPointFn};

/// A fresh predicate standing for a theory atom over fixed test-point sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TheoryPredicate<S> {
    pub name: String,
    /// The atom as first met, over the clause's own variable names.
    pub atom: LinearAtom<S>,
    /// Argument order of the predicate: the atom's variables, sorted.
    pub vars: Vec<String>,
    /// Test points each argument ranges over.
    pub domains: Vec<Vec<Value<S>>>,
}

/// `Q_(P,i,S)`: restricts a head variable at `(P, i)` to test points of sort `S`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SortPredicate {
    pub name: String,
    pub pos: Pos,
    pub sort: SortId,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Catalog<S> {
    pub theory: BTreeMap<String, TheoryPredicate<S>>,
    pub sorts: BTreeMap<String, SortPredicate>,
}

impl<S> Default for Catalog<S> {
    fn default() -> Self {
        Catalog { theory: BTreeMap::new(), sorts: BTreeMap::new() }
    }
}

pub struct Renamed<S> {
    pub rules: Vec<HbsRule<S>>,
    pub catalog: Catalog<S>,
}

fn short_hash(key: &str) -> String {
    let digest = Sha256::digest(key.as_bytes());
    digest.iter().take(6).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Key identifying a theory atom up to variable renaming, together with the
/// test points its variables range over.
fn theory_key<S: Scalar>(atom: &LinearAtom<S>, domains: &[Vec<Value<S>>]) -> String {
    let atom = atom.clone().normalized();
    let mut key = String::new();
    for (k, c) in atom.combo.values().enumerate() {
        let _ = write!(key, "{c}*_{k} + ");
    }
    let _ = write!(key, "{} {}", atom.rel.symbol(), atom.bound);
    for d in domains {
        key.push('|');
        let vals: Vec<String> = d.iter().map(|v| v.mangled()).collect();
        key.push_str(&vals.join(","));
    }
    key
}

fn sort_predicate_name<S: Scalar>(problem: &Problem<S>, pos: &Pos, sort: SortId) -> String {
    format!("__sortfact_{}_{}_{}", pos.pred, pos.index, problem.sort(sort).name)
}

fn to_datalog<S: Scalar>(atom: &Atom<S>, subst: &BTreeMap<String, S>) -> DAtom<Value<S>> {
    let args = atom
        .args
        .iter()
        .map(|t| match t {
            Term::Var(x) => match subst.get(x) {
                Some(c) => DTerm::Const(Value::Num(c.clone())),
                None => DTerm::Var(x.clone()),
            },
            Term::Num(c) => DTerm::Const(Value::Num(c.clone())),
            Term::Fo(c) => DTerm::Const(Value::Fo(c.clone())),
        })
        .collect();
    DAtom::new(&atom.pred, args)
}

/// Whether head variable `x` needs a sort literal: it is bound by nothing
/// else, or it is an integer variable whose body positions are all real.
fn needs_sort_literal<S: Scalar>(problem: &Problem<S>, clause: &HornClause<S>, x: &str) -> bool {
    let in_theory = clause.theory_vars().contains(x);
    let body_positions = clause.positions_of(x, false);
    if !in_theory && body_positions.is_empty() {
        return true;
    }
    problem.sort(clause.var_sorts[x]).kind == SortKind::Int
        && !body_positions.is_empty()
        && body_positions.iter().all(|p| problem.sort(problem.pos_sort(p)).kind == SortKind::Real)
}

/// Replaces every theory atom by a fresh predicate over its variables, adds
/// sort literals where a head variable would otherwise range too widely, and
/// folds abstraction equalities `x = c` back into constants when `c` is a
/// test point of `x`.
pub fn rename_theory<S: Scalar>(problem: &Problem<S>, beta: &TestPointFn<S>) -> Renamed<S> {
    let mut catalog = Catalog::default();
    let mut rules = Vec::new();
    for clause in &problem.clauses {
        let domains = clause_domains(problem, clause, beta);
        let mut subst: BTreeMap<String, S> = BTreeMap::new();
        let mut remaining = Vec::new();
        for atom in &clause.theory {
            match atom.as_assignment() {
                Some((x, c)) if x.starts_with("__abs") && domains[x].contains(&Value::Num(c.clone())) => {
                    subst.insert(x.to_string(), c);
                }
                _ => remaining.push(atom),
            }
        }

        let mut body = Vec::new();
        for atom in remaining {
            let vars: Vec<String> = atom.vars().map(str::to_string).collect();
            let doms: Vec<Vec<Value<S>>> = vars.iter().map(|x| domains[x].clone()).collect();
            let name = format!("__theory_{}", short_hash(&theory_key(atom, &doms)));
            catalog.theory.entry(name.clone()).or_insert_with(|| TheoryPredicate {
                name: name.clone(),
                atom: atom.clone(),
                vars: vars.clone(),
                domains: doms,
            });
            let lit = DAtom::new(&name, vars.into_iter().map(DTerm::Var).collect());
            if !body.contains(&lit) {
                body.push(lit);
            }
        }

        if let Some(head) = &clause.head {
            for (i, t) in head.args.iter().enumerate() {
                let Some(x) = t.as_var() else { continue };
                if subst.contains_key(x) || !needs_sort_literal(problem, clause, x) {
                    continue;
                }
                let pos = Pos::new(&head.pred, i);
                let sort = clause.var_sorts[x];
                let name = sort_predicate_name(problem, &pos, sort);
                catalog.sorts.entry(name.clone()).or_insert_with(|| SortPredicate { name: name.clone(), pos, sort });
                let lit = DAtom::new(&name, vec![DTerm::Var(x.to_string())]);
                if !body.contains(&lit) {
                    body.push(lit);
                }
            }
        }

        body.extend(clause.body.iter().map(|a| to_datalog(a, &subst)));
        rules.push(HbsRule { head: clause.head.as_ref().map(|h| to_datalog(h, &subst)), body });
    }
    Renamed { rules, catalog }
}

/// The true instances of every catalogued theory predicate.
pub fn theory_facts<S: Scalar>(catalog: &Catalog<S>) -> BTreeSet<Fact<S>> {
    let mut out = BTreeSet::new();
    for tp in catalog.theory.values() {
        let domains: BTreeMap<String, Vec<Value<S>>> = tp.vars.iter().cloned().zip(tp.domains.iter().cloned()).collect();
        for sigma in Groundings::new(domains) {
            let holds = tp.atom.eval(|x| sigma[x].as_num().expect("arithmetic test point").clone());
            if holds {
                out.insert(GroundAtom { pred: tp.name.clone(), args: tp.vars.iter().map(|x| sigma[x].clone()).collect() });
            }
        }
    }
    out
}

/// `Q_(P,i,S)(a)` for every test point `a` of `(P, i)` in sort `S`.
pub fn sort_facts<S: Scalar>(problem: &Problem<S>, catalog: &Catalog<S>, beta: &TestPointFn<S>) -> BTreeSet<Fact<S>> {
    let mut out = BTreeSet::new();
    for sp in catalog.sorts.values() {
        for a in beta.get(&sp.pos).iter().filter(|a| problem.in_sort(sp.sort, a)) {
            out.insert(GroundAtom { pred: sp.name.clone(), args: vec![a.clone()] });
        }
    }
    out
}
