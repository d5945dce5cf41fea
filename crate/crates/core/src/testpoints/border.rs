use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::analysis::SimpleBound;
use crate::model::Rel;
use crate::num::Scalar;

/// A border value on the extended real line.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Ext<S> {
    NegInf,
    Fin(S),
    PosInf,
}

/// Border shapes in their tie-breaking order: `c) < [c < c] < (c`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Shape {
    OpenUpper,
    ClosedLower,
    ClosedUpper,
    OpenLower,
}

impl Shape {
    pub fn is_lower(self) -> bool {
        matches!(self, Shape::ClosedLower | Shape::OpenLower)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Border<S> {
    pub value: Ext<S>,
    pub shape: Shape,
}

impl<S: Scalar> Border<S> {
    pub fn neg_inf() -> Self {
        Border { value: Ext::NegInf, shape: Shape::OpenLower }
    }

    pub fn pos_inf() -> Self {
        Border { value: Ext::PosInf, shape: Shape::OpenUpper }
    }

    pub fn at(value: S, shape: Shape) -> Self {
        Border { value: Ext::Fin(value), shape }
    }

    fn finite(&self) -> Option<&S> {
        match &self.value {
            Ext::Fin(v) => Some(v),
            _ => None,
        }
    }
}

impl<S: Scalar> fmt::Display for Border<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.value, self.shape) {
            (Ext::NegInf, _) => f.write_str("(-inf"),
            (Ext::PosInf, _) => f.write_str("inf)"),
            (Ext::Fin(c), Shape::OpenUpper) => write!(f, "{c})"),
            (Ext::Fin(c), Shape::ClosedLower) => write!(f, "[{c}"),
            (Ext::Fin(c), Shape::ClosedUpper) => write!(f, "{c}]"),
            (Ext::Fin(c), Shape::OpenLower) => write!(f, "({c}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Interval<S> {
    pub lower: Border<S>,
    pub upper: Border<S>,
}

impl<S: Scalar> Interval<S> {
    pub fn whole() -> Self {
        Interval { lower: Border::neg_inf(), upper: Border::pos_inf() }
    }

    pub fn lower_value(&self) -> Option<&S> {
        self.lower.finite()
    }

    pub fn upper_value(&self) -> Option<&S> {
        self.upper.finite()
    }

    pub fn contains(&self, x: &S) -> bool {
        let above = match (&self.lower.value, self.lower.shape) {
            (Ext::NegInf, _) => true,
            (Ext::Fin(c), Shape::ClosedLower) => x >= c,
            (Ext::Fin(c), _) => x > c,
            (Ext::PosInf, _) => false,
        };
        let below = match (&self.upper.value, self.upper.shape) {
            (Ext::PosInf, _) => true,
            (Ext::Fin(c), Shape::ClosedUpper) => x <= c,
            (Ext::Fin(c), _) => x < c,
            (Ext::NegInf, _) => false,
        };
        above && below
    }

    pub fn is_point(&self) -> bool {
        matches!((self.lower_value(), self.upper_value()), (Some(a), Some(b)) if a == b)
    }

    pub fn is_nonempty(&self) -> bool {
        match (&self.lower.value, &self.upper.value) {
            (Ext::Fin(a), Ext::Fin(b)) => {
                a < b || (a == b && self.lower.shape == Shape::ClosedLower && self.upper.shape == Shape::ClosedUpper)
            }
            (Ext::PosInf, _) | (_, Ext::NegInf) => false,
            _ => true,
        }
    }

    /// Least integer in the interval (`None` if unbounded below).
    pub fn min_integer(&self) -> Option<S> {
        let c = self.lower_value()?;
        Some(if self.lower.shape == Shape::ClosedLower { c.ceil() } else { c.floor() + S::one() })
    }

    /// Greatest integer in the interval (`None` if unbounded above).
    pub fn max_integer(&self) -> Option<S> {
        let c = self.upper_value()?;
        Some(if self.upper.shape == Shape::ClosedUpper { c.floor() } else { c.ceil() - S::one() })
    }

    pub fn has_integers(&self) -> bool {
        match (self.min_integer(), self.max_integer()) {
            (Some(lo), Some(hi)) => lo <= hi,
            _ => true,
        }
    }

    pub fn has_non_integers(&self) -> bool {
        !self.is_point() || !self.lower_value().is_some_and(|c| c.is_integer())
    }
}

impl<S: Scalar> fmt::Display for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lower = match (&self.lower.value, self.lower.shape) {
            (Ext::Fin(c), Shape::ClosedLower) => format!("[{c}"),
            (Ext::Fin(c), _) => format!("({c}"),
            _ => "(-inf".to_string(),
        };
        let upper = match (&self.upper.value, self.upper.shape) {
            (Ext::Fin(c), Shape::ClosedUpper) => format!("{c}]"),
            (Ext::Fin(c), _) => format!("{c})"),
            _ => "inf)".to_string(),
        };
        write!(f, "{lower},{upper}")
    }
}

/// Borders contributed by a set of bounds: each bound yields the border it
/// implies together with the complementary border of its negation.
pub fn interval_endpoints<S: Scalar>(bounds: &BTreeSet<SimpleBound<S>>) -> BTreeSet<Border<S>> {
    let mut out = BTreeSet::from([Border::neg_inf(), Border::pos_inf()]);
    for b in bounds {
        let c = &b.value;
        if matches!(b.rel, Rel::Le | Rel::Eq | Rel::Ne | Rel::Gt) {
            out.insert(Border::at(c.clone(), Shape::ClosedUpper));
            out.insert(Border::at(c.clone(), Shape::OpenLower));
        }
        if matches!(b.rel, Rel::Ge | Rel::Eq | Rel::Ne | Rel::Lt) {
            out.insert(Border::at(c.clone(), Shape::OpenUpper));
            out.insert(Border::at(c.clone(), Shape::ClosedLower));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("border set does not alternate between lower and upper borders at {0}")]
pub struct MalformedBorderSet(pub String);

/// Pairs consecutive sorted borders into intervals.
pub fn interval_partition<S: Scalar>(borders: &BTreeSet<Border<S>>) -> Result<Vec<Interval<S>>, MalformedBorderSet> {
    let sorted: Vec<&Border<S>> = borders.iter().collect();
    if !sorted.len().is_multiple_of(2) {
        return Err(MalformedBorderSet(format!("{} borders", sorted.len())));
    }
    let mut out = Vec::with_capacity(sorted.len() / 2);
    for pair in sorted.chunks(2) {
        let (lower, upper) = (pair[0], pair[1]);
        if !lower.shape.is_lower() || upper.shape.is_lower() {
            return Err(MalformedBorderSet(format!("{lower} {upper}")));
        }
        let interval = Interval { lower: lower.clone(), upper: upper.clone() };
        if !interval.is_nonempty() {
            return Err(MalformedBorderSet(format!("empty interval {interval}")));
        }
        out.push(interval);
    }
    Ok(out)
}

/// Checks that `intervals` are nonempty, ascending, pairwise disjoint and
/// cover the whole line.
pub fn check_partition_laws<S: Scalar>(intervals: &[Interval<S>]) -> Result<(), String> {
    let (Some(first), Some(last)) = (intervals.first(), intervals.last()) else {
        return Err("empty partition".into());
    };
    if first.lower != Border::neg_inf() || last.upper != Border::pos_inf() {
        return Err("partition does not reach both infinities".into());
    }
    for i in intervals {
        if !i.is_nonempty() {
            return Err(format!("empty interval {i}"));
        }
    }
    for w in intervals.windows(2) {
        let (u, l) = (&w[0].upper, &w[1].lower);
        let complementary = u.value == l.value
            && matches!(
                (u.shape, l.shape),
                (Shape::OpenUpper, Shape::ClosedLower) | (Shape::ClosedUpper, Shape::OpenLower)
            );
        if !complementary {
            return Err(format!("{} and {} are not adjacent", w[0], w[1]));
        }
    }
    Ok(())
}
