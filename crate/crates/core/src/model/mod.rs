//! Clause model: sorts, predicates, Horn clauses `Λ ‖ Δ → H` and conjectures.

mod normalize;
mod parse;
mod print;

pub use normalize::{abstract_clause, normalize, repair_unhoused_vars};
pub use parse::{parse_problem, ParseError, ParseErrorKind};
pub use print::print_problem;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::num::{Scalar, Value};

/// Name prefixes reserved for symbols introduced by the pipeline.
pub const RESERVED_PREFIXES: &[&str] = &[
    "__abs",
    "__sortvar",
    "__theory",
    "__sortfact",
    "__goal",
    "__expected",
    "__missing",
];

pub fn is_reserved(name: &str) -> bool {
    RESERVED_PREFIXES.iter().any(|p| name.starts_with(p))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SortKind {
    Real,
    Int,
    Finite,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sort {
    pub name: String,
    pub kind: SortKind,
    pub members: Vec<String>,
}

/// Index into [`Problem::sorts`]. The two builtin sorts always come first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SortId(pub usize);

pub const REAL: SortId = SortId(0);
pub const INT: SortId = SortId(1);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PredicateSig {
    pub name: String,
    pub arg_sorts: Vec<SortId>,
}

impl PredicateSig {
    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }
}

/// An argument position `(P, i)`, 0-based. Ordered by predicate name, then index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Pos {
    pub pred: String,
    pub index: usize,
}

impl Pos {
    pub fn new(pred: impl Into<String>, index: usize) -> Self {
        Pos { pred: pred.into(), index }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.pred, self.index + 1)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term<S> {
    Var(String),
    Num(S),
    Fo(String),
}

impl<S: Scalar> Term<S> {
    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_value(&self) -> Option<Value<S>> {
        match self {
            Term::Var(_) => None,
            Term::Num(v) => Some(Value::Num(v.clone())),
            Term::Fo(c) => Some(Value::Fo(c.clone())),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom<S> {
    pub pred: String,
    pub args: Vec<Term<S>>,
}

impl<S: Scalar> Atom<S> {
    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_var)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Rel {
    Le,
    Lt,
    Eq,
    Ne,
    Gt,
    Ge,
}

impl Rel {
    /// Relation obtained when both sides are multiplied by a negative number.
    pub fn flip(self) -> Rel {
        match self {
            Rel::Le => Rel::Ge,
            Rel::Lt => Rel::Gt,
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
            r => r,
        }
    }

    pub fn holds<T: Ord>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Rel::Le => lhs <= rhs,
            Rel::Lt => lhs < rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ne => lhs != rhs,
            Rel::Gt => lhs > rhs,
            Rel::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

/// `Σ cᵢ·xᵢ rel bound` with nonzero coefficients.
///
/// The parser keeps the first coefficient (in variable order) positive; atoms
/// built elsewhere need not be in that form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LinearAtom<S> {
    pub combo: BTreeMap<String, S>,
    pub rel: Rel,
    pub bound: S,
}

impl<S: Scalar> LinearAtom<S> {
    pub fn new(combo: BTreeMap<String, S>, rel: Rel, bound: S) -> Self {
        let combo = combo.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        LinearAtom { combo, rel, bound }
    }

    /// `x rel c`
    pub fn simple(var: &str, rel: Rel, bound: S) -> Self {
        LinearAtom::new(BTreeMap::from([(var.to_string(), S::one())]), rel, bound)
    }

    /// Scales by `-1` if the first coefficient is negative.
    pub fn normalized(mut self) -> Self {
        if let Some((_, c)) = self.combo.iter().next() {
            if c.is_negative() {
                for c in self.combo.values_mut() {
                    *c = -c.clone();
                }
                self.bound = -self.bound;
                self.rel = self.rel.flip();
            }
        }
        self
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.combo.keys().map(String::as_str)
    }

    /// Evaluates under a total assignment of the atom's variables.
    pub fn eval(&self, value_of: impl Fn(&str) -> S) -> bool {
        let mut sum = S::zero();
        for (x, c) in &self.combo {
            sum = sum + c.clone() * value_of(x);
        }
        self.rel.holds(&sum, &self.bound)
    }

    /// `x = c` with coefficient 1, as produced by abstraction.
    pub fn as_assignment(&self) -> Option<(&str, S)> {
        if self.rel != Rel::Eq || self.combo.len() != 1 {
            return None;
        }
        let (x, c) = self.combo.iter().next()?;
        Some((x.as_str(), self.bound.clone() / c.clone()))
    }
}

impl<S: Scalar> fmt::Display for LinearAtom<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.combo.is_empty() {
            f.write_str("0")?;
        }
        for (k, (x, c)) in self.combo.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if mag.is_one() {
                f.write_str(x)?;
            } else {
                write!(f, "{mag}*{x}")?;
            }
        }
        write!(f, " {} {}", self.rel.symbol(), self.bound)
    }
}

/// `Λ ‖ Δ → H`; a `None` head is `⊥`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HornClause<S> {
    pub theory: Vec<LinearAtom<S>>,
    pub body: Vec<Atom<S>>,
    pub head: Option<Atom<S>>,
    pub var_sorts: BTreeMap<String, SortId>,
}

impl<S: Scalar> HornClause<S> {
    pub fn free_atoms(&self) -> impl Iterator<Item = &Atom<S>> {
        self.body.iter().chain(self.head.iter())
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        self.var_sorts.keys().map(String::as_str).collect()
    }

    pub fn theory_vars(&self) -> BTreeSet<&str> {
        self.theory.iter().flat_map(LinearAtom::vars).collect()
    }

    pub fn free_vars(&self) -> BTreeSet<&str> {
        self.free_atoms().flat_map(Atom::vars).collect()
    }

    pub fn body_vars(&self) -> BTreeSet<&str> {
        self.body.iter().flat_map(Atom::vars).collect()
    }

    /// Positions in `Δ` (and in `H` if `with_head`) where `var` occurs.
    pub fn positions_of(&self, var: &str, with_head: bool) -> Vec<Pos> {
        let atoms: Box<dyn Iterator<Item = &Atom<S>>> = if with_head {
            Box::new(self.free_atoms())
        } else {
            Box::new(self.body.iter())
        };
        let mut out = Vec::new();
        for atom in atoms {
            for (i, t) in atom.args.iter().enumerate() {
                if t.as_var() == Some(var) {
                    out.push(Pos::new(&atom.pred, i));
                }
            }
        }
        out
    }

    pub fn is_fact(&self) -> bool {
        self.theory.is_empty() && self.body.is_empty() && self.head.is_some()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Conjecture<S> {
    pub quantifier: Quantifier,
    pub vars: Vec<String>,
    pub atom: Atom<S>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Problem<S> {
    pub sorts: Vec<Sort>,
    pub preds: Vec<PredicateSig>,
    pub clauses: Vec<HornClause<S>>,
    pub conjecture: Option<Conjecture<S>>,
}

impl<S: Scalar> Default for Problem<S> {
    fn default() -> Self {
        Problem {
            sorts: vec![
                Sort { name: "Real".into(), kind: SortKind::Real, members: vec![] },
                Sort { name: "Int".into(), kind: SortKind::Int, members: vec![] },
            ],
            preds: vec![],
            clauses: vec![],
            conjecture: None,
        }
    }
}

impl<S: Scalar> Problem<S> {
    pub fn sort(&self, id: SortId) -> &Sort {
        &self.sorts[id.0]
    }

    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s.name == name).map(SortId)
    }

    pub fn pred(&self, name: &str) -> Option<&PredicateSig> {
        self.preds.iter().find(|p| p.name == name)
    }

    pub fn pos_sort(&self, pos: &Pos) -> SortId {
        self.pred(&pos.pred).expect("declared predicate").arg_sorts[pos.index]
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        self.preds
            .iter()
            .flat_map(|p| (0..p.arity()).map(move |i| Pos::new(&p.name, i)))
    }

    /// Whether `v` belongs to the domain of sort `id`.
    pub fn in_sort(&self, id: SortId, v: &Value<S>) -> bool {
        let sort = self.sort(id);
        match (sort.kind, v) {
            (SortKind::Real, Value::Num(_)) => true,
            (SortKind::Int, Value::Num(n)) => n.is_integer(),
            (SortKind::Finite, Value::Fo(c)) => sort.members.contains(c),
            _ => false,
        }
    }

    /// Finite-sort member constants, as values.
    pub fn members(&self, id: SortId) -> Vec<Value<S>> {
        self.sort(id).members.iter().map(|m| Value::Fo(m.clone())).collect()
    }

    pub fn declare_pred(&mut self, name: impl Into<String>, arg_sorts: Vec<SortId>) {
        self.preds.push(PredicateSig { name: name.into(), arg_sorts });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn normalization_flips_on_negative_leading_coefficient() {
        let atom = LinearAtom::new(
            BTreeMap::from([("x".to_string(), Rational64::from_integer(-2))]),
            Rel::Lt,
            Rational64::from_integer(6),
        )
        .normalized();
        assert_eq!(atom.combo["x"], Rational64::from_integer(2));
        assert_eq!(atom.rel, Rel::Gt);
        assert_eq!(atom.bound, Rational64::from_integer(-6));
        assert_eq!(atom.to_string(), "2*x > -6");
    }

    #[test]
    fn eval_and_assignment() {
        let atom = LinearAtom::simple("x", Rel::Eq, Rational64::from_integer(3));
        assert_eq!(atom.as_assignment(), Some(("x", Rational64::from_integer(3))));
        assert!(atom.eval(|_| Rational64::from_integer(3)));
        assert!(!atom.eval(|_| Rational64::from_integer(4)));
    }
}
