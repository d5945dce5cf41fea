use std::fmt::Write;

use super::{Atom, LinearAtom, Problem, Quantifier, SortKind, Term};
use crate::num::Scalar;

fn number<S: Scalar>(v: &S) -> String {
    v.to_decimal().unwrap_or_else(|| v.to_string())
}

fn term<S: Scalar>(t: &Term<S>) -> String {
    match t {
        Term::Var(x) | Term::Fo(x) => x.clone(),
        Term::Num(v) => number(v),
    }
}

fn atom<S: Scalar>(a: &Atom<S>) -> String {
    let args: Vec<String> = a.args.iter().map(term).collect();
    format!("{}({})", a.pred, args.join(", "))
}

fn linear<S: Scalar>(a: &LinearAtom<S>) -> String {
    let mut out = String::new();
    if a.combo.is_empty() {
        out.push('0');
    }
    for (k, (x, c)) in a.combo.iter().enumerate() {
        let sep = match (k, c.is_negative()) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        out.push_str(sep);
        let mag = c.abs();
        if mag.is_one() {
            out.push_str(x);
        } else {
            let _ = write!(out, "{}*{x}", number(&mag));
        }
    }
    let bound = if a.bound.is_negative() {
        format!("-{}", number(&a.bound.abs()))
    } else {
        number(&a.bound)
    };
    let _ = write!(out, " {} {bound}", a.rel.symbol());
    out
}

/// Renders a problem in the input language. Parsing the result yields the
/// same problem as long as no reserved names are present.
pub fn print_problem<S: Scalar>(p: &Problem<S>) -> String {
    let mut out = String::new();
    for sort in p.sorts.iter().filter(|s| s.kind == SortKind::Finite) {
        let _ = writeln!(out, "sort {} = {{{}}}.", sort.name, sort.members.join(", "));
    }
    for pred in &p.preds {
        let sorts: Vec<&str> = pred.arg_sorts.iter().map(|s| p.sort(*s).name.as_str()).collect();
        let _ = writeln!(out, "pred {}({}).", pred.name, sorts.join(", "));
    }
    for c in &p.clauses {
        let head = c.head.as_ref().map(atom).unwrap_or_else(|| "false".to_string());
        if c.is_fact() {
            let _ = writeln!(out, "clause {head}.");
            continue;
        }
        let theory: Vec<String> = c.theory.iter().map(linear).collect();
        let body: Vec<String> = c.body.iter().map(atom).collect();
        let _ = writeln!(out, "clause {} || {} -> {head}.", theory.join(", "), body.join(", "));
    }
    if let Some(conj) = &p.conjecture {
        let q = match conj.quantifier {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        };
        let _ = writeln!(out, "conjecture {q} {}. {}.", conj.vars.join(", "), atom(&conj.atom));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_problem;
    use num_rational::Rational64;

    #[test]
    fn round_trips_sample() {
        let text = "sort F = {a, b}.\npred P(Real, F).\npred Q(Int).\n\
                    clause P(-1.5, a).\n\
                    clause 2*x - y < -3, x = 0.25 || P(x, u), Q(y) -> Q(y).\n\
                    clause || Q(z) -> false.\n\
                    conjecture exists x. P(x, b).\n";
        let p = parse_problem::<Rational64>(text).unwrap();
        let printed = print_problem(&p);
        assert_eq!(parse_problem::<Rational64>(&printed).unwrap(), p);
    }
}
