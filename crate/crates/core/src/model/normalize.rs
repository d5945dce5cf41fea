use std::collections::BTreeMap;

use super::{Atom, HornClause, LinearAtom, Problem, Rel, SortKind, Term};
use crate::num::Scalar;

/// Replaces every numeric argument of a free atom by a fresh variable `x`
/// and adds `x = c` to the theory part.
pub fn abstract_clause<S: Scalar>(problem: &Problem<S>, clause: &HornClause<S>) -> HornClause<S> {
    let mut out = clause.clone();
    let mut fresh = 0usize;
    let mut extra = Vec::new();
    let mut rewrite = |atom: &mut Atom<S>, var_sorts: &mut BTreeMap<String, _>| {
        let sig = problem.pred(&atom.pred).expect("declared predicate");
        for (i, term) in atom.args.iter_mut().enumerate() {
            if let Term::Num(c) = term {
                let name = loop {
                    let candidate = format!("__abs{fresh}");
                    fresh += 1;
                    if !clause.var_sorts.contains_key(&candidate) {
                        break candidate;
                    }
                };
                extra.push(LinearAtom::simple(&name, Rel::Eq, c.clone()));
                var_sorts.insert(name.clone(), sig.arg_sorts[i]);
                *term = Term::Var(name);
            }
        }
    };
    for atom in out.body.iter_mut().chain(out.head.iter_mut()) {
        rewrite(atom, &mut out.var_sorts);
    }
    out.theory.extend(extra);
    out
}

/// Gives every theory variable that occurs in no free atom a fresh unary
/// predicate `Q` in the body, and adds the fact clause `‖ → Q(x)`.
pub fn repair_unhoused_vars<S: Scalar>(problem: &Problem<S>) -> Problem<S> {
    let mut out = problem.clone();
    out.clauses.clear();
    let mut fresh = 0usize;
    let mut facts = Vec::new();
    for clause in &problem.clauses {
        let mut clause = clause.clone();
        let housed: Vec<String> = clause.free_vars().into_iter().map(str::to_string).collect();
        let unhoused: Vec<String> = clause
            .theory_vars()
            .into_iter()
            .filter(|x| !housed.iter().any(|h| h == x))
            .map(str::to_string)
            .collect();
        for x in unhoused {
            let name = format!("__sortvar{fresh}");
            fresh += 1;
            let sort = clause.var_sorts[&x];
            out.declare_pred(&name, vec![sort]);
            let atom = Atom { pred: name, args: vec![Term::Var(x.clone())] };
            clause.body.push(atom.clone());
            facts.push(HornClause {
                theory: vec![],
                body: vec![],
                head: Some(atom),
                var_sorts: BTreeMap::from([(x, sort)]),
            });
        }
        out.clauses.push(clause);
    }
    out.clauses.extend(facts);
    out
}

/// Abstraction followed by repair; the form every analysis expects.
pub fn normalize<S: Scalar>(problem: &Problem<S>) -> Problem<S> {
    let mut abstracted = problem.clone();
    abstracted.clauses = problem.clauses.iter().map(|c| abstract_clause(problem, c)).collect();
    debug_assert!(abstracted.clauses.iter().all(|c| c
        .free_atoms()
        .flat_map(|a| a.args.iter().zip(&problem.pred(&a.pred).unwrap().arg_sorts))
        .all(|(t, s)| !matches!(t, Term::Num(_)) || problem.sort(*s).kind == SortKind::Finite)));
    repair_unhoused_vars(&abstracted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_problem;
    use num_rational::Rational64;

    fn q(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn abstracts_fact_positionally() {
        let p = parse_problem::<Rational64>("pred T(Real, Real, Int). clause T(0, 2000, 1350).").unwrap();
        let c = abstract_clause(&p, &p.clauses[0]);
        let head = c.head.as_ref().unwrap();
        let names: Vec<_> = head.vars().map(str::to_string).collect();
        assert_eq!(names, vec!["__abs0", "__abs1", "__abs2"]);
        assert_eq!(
            c.theory,
            vec![
                LinearAtom::simple("__abs0", Rel::Eq, q(0)),
                LinearAtom::simple("__abs1", Rel::Eq, q(2000)),
                LinearAtom::simple("__abs2", Rel::Eq, q(1350)),
            ]
        );
        assert_eq!(c.var_sorts["__abs2"], crate::model::INT);
    }

    #[test]
    fn repeated_values_get_distinct_variables() {
        let p = parse_problem::<Rational64>("pred P(Real, Real). clause P(3, 3).").unwrap();
        let c = abstract_clause(&p, &p.clauses[0]);
        assert_eq!(c.var_sorts.len(), 2);
    }

    #[test]
    fn variable_only_clause_unchanged() {
        let p = parse_problem::<Rational64>("pred P(Real). pred Q(Real). clause x > 1 || P(x) -> Q(x).").unwrap();
        assert_eq!(abstract_clause(&p, &p.clauses[0]), p.clauses[0]);
    }

    #[test]
    fn repair_adds_fresh_predicate_and_fact() {
        let p = parse_problem::<Rational64>("pred P(Real). clause x < 5 || -> false.").unwrap();
        let r = repair_unhoused_vars(&p);
        assert_eq!(r.clauses.len(), 2);
        assert_eq!(r.clauses[0].body[0].pred, "__sortvar0");
        assert!(r.clauses[1].is_fact());
        assert_eq!(r.pred("__sortvar0").unwrap().arg_sorts, vec![crate::model::REAL]);
        for c in &r.clauses {
            assert!(c.theory_vars().is_subset(&c.free_vars()));
        }
    }

    #[test]
    fn repair_is_noop_when_housed() {
        let p = parse_problem::<Rational64>("pred P(Real). pred Q(Real). clause x < 5 || -> P(x). clause y > 0 || Q(y) -> false.").unwrap();
        assert_eq!(repair_unhoused_vars(&p), p);
    }
}
