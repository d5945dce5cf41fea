//! Semi-naive bottom-up evaluation, one stratum at a time.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::program::{DAtom, DTerm, GroundAtom, Program, Rule};
use super::stratify::stratify;
use super::EngineError;

type Tuple = Vec<u32>;

#[derive(Clone, Copy)]
enum CTerm {
    Var(usize),
    Const(u32),
}

struct CAtom {
    pred: usize,
    args: Vec<CTerm>,
}

struct CRule {
    head: CAtom,
    pos: Vec<CAtom>,
    neg: Vec<CAtom>,
    nvars: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Source {
    Full,
    Delta,
    /// Full minus delta.
    Old,
}

/// Derived facts, per predicate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactStore<C> {
    pub relations: BTreeMap<String, BTreeSet<Vec<C>>>,
}

impl<C: Ord + Clone> FactStore<C> {
    pub fn tuples(&self, pred: &str) -> impl Iterator<Item = &Vec<C>> {
        self.relations.get(pred).into_iter().flatten()
    }

    pub fn holds(&self, pred: &str, args: &[C]) -> bool {
        self.relations.get(pred).is_some_and(|r| r.contains(args))
    }

    pub fn atoms(&self) -> BTreeSet<GroundAtom<C>> {
        self.relations
            .iter()
            .flat_map(|(p, ts)| ts.iter().map(move |t| GroundAtom { pred: p.clone(), args: t.clone() }))
            .collect()
    }
}

struct Interner<'a, C> {
    consts: Vec<&'a C>,
    const_ids: BTreeMap<&'a C, u32>,
    pred_ids: BTreeMap<&'a str, usize>,
}

impl<'a, C: Ord> Interner<'a, C> {
    fn new(program: &'a Program<C>) -> Self {
        let mut census: BTreeSet<&C> = BTreeSet::new();
        for f in &program.facts {
            census.extend(f.args.iter());
        }
        for r in &program.rules {
            for a in std::iter::once(&r.head).chain(&r.pos).chain(&r.neg) {
                census.extend(a.args.iter().filter_map(|t| match t {
                    DTerm::Const(c) => Some(c),
                    DTerm::Var(_) => None,
                }));
            }
        }
        let consts: Vec<&C> = census.into_iter().collect();
        let const_ids = consts.iter().enumerate().map(|(k, c)| (*c, k as u32)).collect();
        let pred_ids = program.predicates().into_iter().enumerate().map(|(k, p)| (p, k)).collect();
        Interner { consts, const_ids, pred_ids }
    }

    fn compile(&self, rule: &'a Rule<C>) -> Result<CRule, EngineError> {
        let mut vars: BTreeMap<&str, usize> = BTreeMap::new();
        for a in &rule.pos {
            for x in a.vars() {
                let n = vars.len();
                vars.entry(x).or_insert(n);
            }
        }
        let unsafe_var = rule.head.vars().chain(rule.neg.iter().flat_map(DAtom::vars)).any(|x| !vars.contains_key(x));
        if unsafe_var {
            return Err(EngineError::UnsafeRule(rule.head.pred.clone()));
        }
        let atom = |a: &DAtom<C>| CAtom {
            pred: self.pred_ids[a.pred.as_str()],
            args: a
                .args
                .iter()
                .map(|t| match t {
                    DTerm::Var(x) => CTerm::Var(vars[x.as_str()]),
                    DTerm::Const(c) => CTerm::Const(self.const_ids[c]),
                })
                .collect(),
        };
        Ok(CRule {
            head: atom(&rule.head),
            pos: rule.pos.iter().map(atom).collect(),
            neg: rule.neg.iter().map(atom).collect(),
            nvars: vars.len(),
        })
    }
}

struct Store {
    full: Vec<HashSet<Tuple>>,
    delta: Vec<HashSet<Tuple>>,
}

impl Store {
    fn contains(&self, pred: usize, t: &Tuple, source: Source) -> bool {
        match source {
            Source::Full => self.full[pred].contains(t),
            Source::Delta => self.delta[pred].contains(t),
            Source::Old => self.full[pred].contains(t) && !self.delta[pred].contains(t),
        }
    }

    fn size(&self, pred: usize, source: Source) -> usize {
        match source {
            Source::Delta => self.delta[pred].len(),
            _ => self.full[pred].len(),
        }
    }
}

fn instantiate(atom: &CAtom, binding: &[Option<u32>]) -> Option<Tuple> {
    atom.args
        .iter()
        .map(|t| match t {
            CTerm::Const(c) => Some(*c),
            CTerm::Var(v) => binding[*v],
        })
        .collect()
}

/// Matches `t` against `atom` under `binding`, extending it; returns the
/// variables newly bound so they can be undone.
fn unify(atom: &CAtom, t: &Tuple, binding: &mut [Option<u32>], bound: &mut Vec<usize>) -> bool {
    let start = bound.len();
    for (arg, &val) in atom.args.iter().zip(t) {
        let ok = match arg {
            CTerm::Const(c) => *c == val,
            CTerm::Var(v) => match binding[*v] {
                Some(b) => b == val,
                None => {
                    binding[*v] = Some(val);
                    bound.push(*v);
                    true
                }
            },
        };
        if !ok {
            for v in bound.drain(start..) {
                binding[v] = None;
            }
            return false;
        }
    }
    true
}

fn join(
    rule: &CRule,
    order: &[(usize, Source)],
    store: &Store,
    binding: &mut Vec<Option<u32>>,
    out: &mut Vec<(usize, Tuple)>,
) {
    let Some(((k, source), rest)) = order.split_first() else {
        let negated = rule.neg.iter().any(|a| {
            let t = instantiate(a, binding).expect("range-restricted");
            store.full[a.pred].contains(&t)
        });
        if !negated {
            out.push((rule.head.pred, instantiate(&rule.head, binding).expect("range-restricted")));
        }
        return;
    };
    let atom = &rule.pos[*k];
    if let Some(t) = instantiate(atom, binding) {
        if store.contains(atom.pred, &t, *source) {
            join(rule, rest, store, binding, out);
        }
        return;
    }
    let relation = match source {
        Source::Delta => &store.delta[atom.pred],
        _ => &store.full[atom.pred],
    };
    let mut bound = Vec::new();
    for t in relation {
        if *source == Source::Old && store.delta[atom.pred].contains(t) {
            continue;
        }
        if unify(atom, t, binding, &mut bound) {
            join(rule, rest, store, binding, out);
            for v in bound.drain(..) {
                binding[v] = None;
            }
        }
    }
}

/// Runs `rule` once; `delta_at` selects the body atom read from the delta,
/// with earlier atoms reading the old facts and later ones the full set.
fn fire(rule: &CRule, delta_at: Option<usize>, store: &Store, out: &mut Vec<(usize, Tuple)>) {
    let mut order: Vec<(usize, Source)> = (0..rule.pos.len())
        .map(|j| {
            let source = match delta_at {
                None => Source::Full,
                Some(k) if j < k => Source::Old,
                Some(k) if j == k => Source::Delta,
                Some(_) => Source::Full,
            };
            (j, source)
        })
        .collect();
    order.sort_by_key(|&(j, source)| (store.size(rule.pos[j].pred, source), j));
    let mut binding = vec![None; rule.nvars];
    join(rule, &order, store, &mut binding, out);
}

/// Computes the least model of a stratified program.
pub fn evaluate<C: Ord + Clone>(program: &Program<C>) -> Result<FactStore<C>, EngineError> {
    let strata = stratify(program)?;
    let interner = Interner::new(program);
    let npreds = interner.pred_ids.len();
    let mut store = Store { full: vec![HashSet::new(); npreds], delta: vec![HashSet::new(); npreds] };
    for f in &program.facts {
        let t = f.args.iter().map(|c| interner.const_ids[c]).collect();
        store.full[interner.pred_ids[f.pred.as_str()]].insert(t);
    }
    let rules = program.rules.iter().map(|r| interner.compile(r)).collect::<Result<Vec<_>, _>>()?;

    for stratum in &strata.strata {
        let members: BTreeSet<usize> = stratum.iter().map(|p| interner.pred_ids[p.as_str()]).collect();
        let local: Vec<&CRule> = rules.iter().filter(|r| members.contains(&r.head.pred)).collect();
        let mut first = true;
        loop {
            let mut derived = Vec::new();
            for rule in &local {
                if first {
                    fire(rule, None, &store, &mut derived);
                    continue;
                }
                for (k, atom) in rule.pos.iter().enumerate() {
                    if members.contains(&atom.pred) && !store.delta[atom.pred].is_empty() {
                        fire(rule, Some(k), &store, &mut derived);
                    }
                }
            }
            first = false;
            for d in store.delta.iter_mut() {
                d.clear();
            }
            let mut grew = false;
            for (pred, t) in derived {
                if !store.full[pred].contains(&t) {
                    store.delta[pred].insert(t.clone());
                    store.full[pred].insert(t);
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
    }
    let mut relations = BTreeMap::new();
    for (name, &id) in &interner.pred_ids {
        let tuples: BTreeSet<Vec<C>> = store.full[id]
            .iter()
            .map(|t| t.iter().map(|&c| interner.consts[c as usize].clone()).collect())
            .collect();
        relations.insert(name.to_string(), tuples);
    }
    Ok(FactStore { relations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> DTerm<i64> {
        DTerm::Var(x.to_string())
    }

    fn c(n: i64) -> DTerm<i64> {
        DTerm::Const(n)
    }

    fn fact(p: &str, args: &[i64]) -> GroundAtom<i64> {
        GroundAtom { pred: p.to_string(), args: args.to_vec() }
    }

    #[test]
    fn facts_only() {
        let mut p = Program::default();
        p.facts.insert(fact("p", &[1]));
        let s = evaluate(&p).unwrap();
        assert_eq!(s.atoms(), p.facts);
    }

    #[test]
    fn simple_rule() {
        let mut p = Program::default();
        p.facts.insert(fact("p", &[0]));
        p.rules.push(Rule::positive(DAtom::new("q", vec![v("X")]), vec![DAtom::new("p", vec![v("X")])]));
        assert!(evaluate(&p).unwrap().holds("q", &[0]));
    }

    #[test]
    fn transitive_closure() {
        let mut p = Program::default();
        for (a, b) in [(1, 2), (2, 3), (3, 4), (4, 1), (5, 6)] {
            p.facts.insert(fact("e", &[a, b]));
        }
        p.rules.push(Rule::positive(DAtom::new("t", vec![v("X"), v("Y")]), vec![DAtom::new("e", vec![v("X"), v("Y")])]));
        p.rules.push(Rule::positive(
            DAtom::new("t", vec![v("X"), v("Z")]),
            vec![DAtom::new("t", vec![v("X"), v("Y")]), DAtom::new("t", vec![v("Y"), v("Z")])],
        ));
        let s = evaluate(&p).unwrap();
        assert_eq!(s.tuples("t").count(), 16 + 1);
        assert!(s.holds("t", &[3, 3]) && !s.holds("t", &[6, 5]));
    }

    #[test]
    fn constants_and_repeated_variables() {
        let mut p = Program::default();
        p.facts.insert(fact("e", &[1, 1]));
        p.facts.insert(fact("e", &[1, 2]));
        p.rules.push(Rule::positive(DAtom::new("loop", vec![v("X")]), vec![DAtom::new("e", vec![v("X"), v("X")])]));
        p.rules.push(Rule::positive(DAtom::new("from1", vec![v("Y")]), vec![DAtom::new("e", vec![c(1), v("Y")])]));
        let s = evaluate(&p).unwrap();
        assert_eq!(s.tuples("loop").cloned().collect::<Vec<_>>(), vec![vec![1]]);
        assert_eq!(s.tuples("from1").count(), 2);
    }

    #[test]
    fn stratified_negation() {
        let mut p = Program::default();
        for n in [1, 2, 3] {
            p.facts.insert(fact("expected", &[n]));
        }
        p.facts.insert(fact("base", &[1]));
        p.facts.insert(fact("base", &[2]));
        p.rules.push(Rule::positive(DAtom::new("q", vec![v("X")]), vec![DAtom::new("base", vec![v("X")])]));
        p.rules.push(Rule {
            head: DAtom::nullary("missing"),
            pos: vec![DAtom::new("expected", vec![v("X")])],
            neg: vec![DAtom::new("q", vec![v("X")])],
        });
        p.rules.push(Rule { head: DAtom::nullary("goal"), pos: vec![], neg: vec![DAtom::nullary("missing")] });
        let s = evaluate(&p).unwrap();
        assert!(s.holds("missing", &[]));
        assert!(!s.holds("goal", &[]));
        p.facts.insert(fact("base", &[3]));
        assert!(evaluate(&p).unwrap().holds("goal", &[]));
    }

    #[test]
    fn unsafe_rules_are_rejected() {
        let mut p: Program<i64> = Program::default();
        p.rules.push(Rule::positive(DAtom::new("q", vec![v("X")]), vec![]));
        assert!(matches!(evaluate(&p), Err(EngineError::UnsafeRule(_))));
    }

    #[test]
    fn rerunning_on_the_result_adds_nothing() {
        let mut p = Program::default();
        p.facts.insert(fact("e", &[1, 2]));
        p.facts.insert(fact("e", &[2, 3]));
        p.rules.push(Rule::positive(DAtom::new("e", vec![v("X"), v("Z")]), vec![DAtom::new("e", vec![v("X"), v("Y")]), DAtom::new("e", vec![v("Y"), v("Z")])]));
        let first = evaluate(&p).unwrap();
        let mut again = p.clone();
        again.facts = first.atoms();
        assert_eq!(evaluate(&again).unwrap(), first);
    }
}
