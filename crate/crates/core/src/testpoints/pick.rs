use std::collections::{BTreeMap, BTreeSet};

use super::border::{interval_endpoints, interval_partition, Interval, MalformedBorderSet};
use crate::analysis::{AVals, AvalSet, Connections};
use crate::model::{PredicateSig, Pos, Problem, SortKind};
use crate::num::{Scalar, Value};

/// The integer of least magnitude in `interval`, ties going to the negative one.
pub fn integer_pick<S: Scalar>(interval: &Interval<S>) -> Option<S> {
    if !interval.has_integers() {
        return None;
    }
    let zero = S::zero();
    match (interval.min_integer(), interval.max_integer()) {
        (lo, Some(hi)) if hi < zero && lo.as_ref().is_none_or(|l| *l <= hi) => Some(hi),
        (Some(lo), _) if lo > zero => Some(lo),
        _ => Some(zero),
    }
}

/// A deterministic non-integer point of `interval`.
///
/// Bounded intervals use the midpoint, nudged off integers; half-bounded ones
/// go half a unit inward from the border; the whole line uses `-1/2`.
pub fn non_integer_pick<S: Scalar>(interval: &Interval<S>) -> Option<S> {
    if !interval.has_non_integers() {
        return None;
    }
    let half = S::half();
    let quarter = half.clone() / S::from_i64(2);
    Some(match (interval.lower_value(), interval.upper_value()) {
        (Some(a), Some(b)) if a == b => a.clone(),
        (Some(a), Some(b)) => {
            let m = (a.clone() + b.clone()) * half.clone();
            if !m.is_integer() {
                m
            } else if b.clone() - m.clone() > half {
                m + half
            } else {
                m + (b.clone() - a.clone()) * quarter
            }
        }
        (Some(a), None) => {
            let v = a.clone() + half;
            if v.is_integer() { a.clone() + quarter } else { v }
        }
        (None, Some(b)) => {
            let v = b.clone() - half;
            if v.is_integer() { b.clone() - quarter } else { v }
        }
        (None, None) => -half,
    })
}

/// Which part of an interval a test point stands for.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Part {
    Integers,
    NonIntegers,
    Whole,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Extrapolation {
    /// A finite position: the point stands only for itself.
    Identity,
    /// The point stands for a part of interval `index` of its class partition.
    Interval { index: usize, part: Part },
}

/// The tp-function: a finite set of test points per argument position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TestPointFn<S> {
    pub table: BTreeMap<Pos, Vec<Value<S>>>,
    /// Interval partition per class representative, for classes with an
    /// infinite member.
    pub class_intervals: BTreeMap<Pos, Vec<Interval<S>>>,
    pub finite: BTreeMap<Pos, bool>,
    pub class_of: BTreeMap<Pos, Pos>,
}

impl<S: Scalar> TestPointFn<S> {
    pub fn get(&self, pos: &Pos) -> &[Value<S>] {
        &self.table[pos]
    }

    pub fn intervals_of(&self, pos: &Pos) -> Option<&[Interval<S>]> {
        self.class_intervals.get(&self.class_of[pos]).map(Vec::as_slice)
    }

    /// Size of the largest test-point set.
    pub fn max_size(&self) -> usize {
        self.table.values().map(Vec::len).max().unwrap_or(0)
    }
}

/// The ep-function: what each test point of each position extrapolates to.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtrapolationFn<S> {
    pub table: BTreeMap<Pos, BTreeMap<Value<S>, Extrapolation>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct PickOptions {
    /// Always pick an integer and a non-integer point per interval, even for
    /// classes over a single arithmetic sort.
    pub two_points_per_interval: bool,
}

/// Whether a class only involves one arithmetic sort, in which case a single
/// point per interval represents it.
fn sort_uniform<S: Scalar>(problem: &Problem<S>, members: &BTreeSet<Pos>) -> bool {
    let sorts: BTreeSet<_> = members.iter().map(|p| problem.pos_sort(p)).collect();
    if sorts.len() != 1 {
        return false;
    }
    // Variables occurring at member positions must carry that same sort.
    let sort = *sorts.iter().next().unwrap();
    problem.clauses.iter().all(|c| {
        c.free_atoms().all(|a| {
            a.args.iter().enumerate().all(|(i, t)| {
                let pos = Pos::new(&a.pred, i);
                match t.as_var() {
                    Some(x) if members.contains(&pos) => c.var_sorts[x] == sort,
                    _ => true,
                }
            })
        })
    })
}

/// Chooses test points: avals for finite positions, and per interval of the
/// class partition an integer and/or non-integer point for the others.
pub fn pick_test_points<S: Scalar>(
    problem: &Problem<S>,
    avals: &AVals<S>,
    conn: &Connections<S>,
    options: PickOptions,
) -> Result<(TestPointFn<S>, ExtrapolationFn<S>), MalformedBorderSet> {
    let mut table = BTreeMap::new();
    let mut eta = BTreeMap::new();
    let mut class_intervals = BTreeMap::new();
    let mut finite = BTreeMap::new();

    for (rep, members) in &conn.classes {
        let has_infinite = members.iter().any(|p| !avals.is_finite(p));
        let mut points: Vec<(Value<S>, usize, Part)> = Vec::new();
        if has_infinite {
            let intervals = interval_partition(&interval_endpoints(&conn.bounds[rep]))?;
            let single = !options.two_points_per_interval && sort_uniform(problem, members);
            for (k, interval) in intervals.iter().enumerate() {
                let int = integer_pick(interval);
                let non = non_integer_pick(interval);
                if single {
                    if let Some(v) = int.or(non) {
                        points.push((Value::Num(v), k, Part::Whole));
                    }
                    continue;
                }
                let both = int.is_some() && non.is_some();
                if let Some(v) = int {
                    points.push((Value::Num(v), k, if both { Part::Integers } else { Part::Whole }));
                }
                if let Some(v) = non {
                    points.push((Value::Num(v), k, if both { Part::NonIntegers } else { Part::Whole }));
                }
            }
            class_intervals.insert(rep.clone(), intervals);
        }
        for pos in members {
            let sort = problem.pos_sort(pos);
            match avals.get(pos) {
                AvalSet::Finite(vals) => {
                    let beta: Vec<Value<S>> = vals.iter().filter(|v| problem.in_sort(sort, v)).cloned().collect();
                    eta.insert(pos.clone(), beta.iter().map(|v| (v.clone(), Extrapolation::Identity)).collect());
                    table.insert(pos.clone(), beta);
                    finite.insert(pos.clone(), true);
                }
                AvalSet::Top => {
                    let mut kept: Vec<(Value<S>, usize, Part)> =
                        points.iter().filter(|(v, _, _)| problem.in_sort(sort, v)).cloned().collect();
                    kept.sort();
                    eta.insert(
                        pos.clone(),
                        kept.iter().map(|(v, index, part)| (v.clone(), Extrapolation::Interval { index: *index, part: *part })).collect(),
                    );
                    table.insert(pos.clone(), kept.into_iter().map(|(v, _, _)| v).collect());
                    finite.insert(pos.clone(), false);
                }
            }
        }
    }
    let beta = TestPointFn { table, class_intervals, finite, class_of: conn.class_of.clone() };
    Ok((beta, ExtrapolationFn { table: eta }))
}

/// Whether the test points of `pred` extrapolate to its whole domain.
pub fn eta_complete_for<S: Scalar>(
    problem: &Problem<S>,
    pred: &PredicateSig,
    beta: &TestPointFn<S>,
    eta: &ExtrapolationFn<S>,
) -> bool {
    (0..pred.arity()).all(|i| {
        let pos = Pos::new(&pred.name, i);
        let sort_id = pred.arg_sorts[i];
        let sort = problem.sort(sort_id);
        if beta.finite[&pos] {
            return sort.kind == SortKind::Finite
                && sort.members.iter().all(|m| beta.get(&pos).contains(&Value::Fo(m.clone())));
        }
        let Some(intervals) = beta.intervals_of(&pos) else { return false };
        let mut covered = vec![(false, false); intervals.len()];
        for ext in eta.table[&pos].values() {
            if let Extrapolation::Interval { index, part } = ext {
                let c = &mut covered[*index];
                match part {
                    Part::Integers => c.0 = true,
                    Part::NonIntegers => c.1 = true,
                    Part::Whole => *c = (true, true),
                }
            }
        }
        intervals.iter().zip(&covered).all(|(interval, (ints, nons))| {
            let need_ints = interval.has_integers();
            let need_nons = sort.kind == SortKind::Real && interval.has_non_integers();
            (!need_ints || *ints) && (!need_nons || *nons)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::super::border::{Border, Shape};
    use super::*;
    use num_rational::Rational64;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn iv(lo: Option<(i64, bool)>, hi: Option<(i64, bool)>) -> Interval<Rational64> {
        Interval {
            lower: lo.map_or(Border::neg_inf(), |(c, closed)| {
                Border::at(q(c, 1), if closed { Shape::ClosedLower } else { Shape::OpenLower })
            }),
            upper: hi.map_or(Border::pos_inf(), |(c, closed)| {
                Border::at(q(c, 1), if closed { Shape::ClosedUpper } else { Shape::OpenUpper })
            }),
        }
    }

    #[test]
    fn integer_picks_prefer_small_magnitude() {
        assert_eq!(integer_pick(&iv(None, Some((0, false)))), Some(q(-1, 1)));
        assert_eq!(integer_pick(&iv(Some((0, true)), Some((2000, false)))), Some(q(0, 1)));
        assert_eq!(integer_pick(&iv(Some((8000, true)), None)), Some(q(8000, 1)));
        assert_eq!(integer_pick(&iv(None, None)), Some(q(0, 1)));
        assert_eq!(integer_pick(&iv(Some((-5, false)), Some((-2, true)))), Some(q(-2, 1)));
        assert_eq!(integer_pick(&iv(Some((0, false)), Some((1, false)))), None);
    }

    #[test]
    fn non_integer_picks() {
        assert_eq!(non_integer_pick(&iv(None, Some((0, false)))), Some(q(-1, 2)));
        assert_eq!(non_integer_pick(&iv(Some((0, true)), Some((1, false)))), Some(q(1, 2)));
        assert_eq!(non_integer_pick(&iv(Some((1, false)), Some((3, false)))), Some(q(5, 2)));
        assert_eq!(non_integer_pick(&iv(Some((1, true)), None)), Some(q(3, 2)));
        assert_eq!(non_integer_pick(&iv(None, None)), Some(q(-1, 2)));
        assert_eq!(non_integer_pick(&iv(Some((2, true)), Some((2, true)))), None);
        // midpoint of (1/2, 3/2) is the integer 1; half a unit above hits the border
        let narrow = Interval {
            lower: Border::at(q(1, 2), Shape::OpenLower),
            upper: Border::at(q(3, 2), Shape::OpenUpper),
        };
        let v = non_integer_pick(&narrow).unwrap();
        assert!(narrow.contains(&v) && !crate::num::Scalar::is_integer(&v));
        let from_half = Interval { lower: Border::at(q(1, 2), Shape::OpenLower), upper: Border::pos_inf() };
        assert_eq!(non_integer_pick(&from_half), Some(q(3, 4)));
    }

    #[test]
    fn mixed_partition_two_points() {
        let parts = [iv(None, Some((0, false))), iv(Some((0, true)), Some((1, false))), iv(Some((1, true)), None)];
        let ints: Vec<_> = parts.iter().filter_map(integer_pick).collect();
        let nons: Vec<_> = parts.iter().filter_map(non_integer_pick).collect();
        assert_eq!(ints, vec![q(-1, 1), q(0, 1), q(1, 1)]);
        assert_eq!(nons, vec![q(-1, 2), q(1, 2), q(3, 2)]);
        for (p, (i, n)) in parts.iter().zip(ints.iter().zip(&nons)) {
            assert!(p.contains(i) && p.contains(n));
        }
    }
}
