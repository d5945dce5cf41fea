//! Random problem generator and helpers shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use slah::engine::GroundAtom;
use slah::model::{Problem as GProblem, SortKind};
use slah::num::Value as GValue;
use slah::testpoints::TestPointFn as GTestPointFn;
use slah::{Problem, Rational, Value};

pub const COLORS: [&str; 3] = ["red", "green", "blue"];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConjMode {
    None,
    Forall,
    Exists,
    Any,
}

#[derive(Clone, Copy, Debug)]
pub struct Gen {
    pub max_preds: usize,
    pub max_clauses: usize,
    /// Only clauses whose head variables are bound by the body or by `x = c`,
    /// so every argument position has finitely many derivable values.
    pub finite: bool,
    pub conjecture: ConjMode,
    /// Variables per clause.
    pub max_vars: usize,
}

impl Default for Gen {
    fn default() -> Self {
        Gen { max_preds: 4, max_clauses: 8, finite: false, conjecture: ConjMode::Any, max_vars: 4 }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Real,
    Int,
    Color,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Real => "Real",
            Kind::Int => "Int",
            Kind::Color => "Color",
        }
    }
}

fn number(rng: &mut impl Rng, int_only: bool) -> String {
    let n: i64 = rng.gen_range(-3..=3);
    if !int_only && rng.gen_bool(0.2) && n.abs() < 3 {
        format!("{n}.5")
    } else {
        n.to_string()
    }
}

fn rel(rng: &mut impl Rng) -> &'static str {
    ["<", "<=", "=", "!=", ">", ">="][rng.gen_range(0..6)]
}

struct ClauseBuilder<'a, R: Rng> {
    rng: &'a mut R,
    max_vars: usize,
    vars: BTreeMap<String, bool>,
}

impl<R: Rng> ClauseBuilder<'_, R> {
    fn var(&mut self, color: bool) -> Option<String> {
        let existing: Vec<String> = self.vars.iter().filter(|(_, c)| **c == color).map(|(v, _)| v.clone()).collect();
        if !existing.is_empty() && (self.vars.len() >= self.max_vars || self.rng.gen_bool(0.6)) {
            return existing.choose(self.rng).cloned();
        }
        if self.vars.len() >= self.max_vars {
            return None;
        }
        let name = format!("{}{}", if color { "c" } else { "x" }, self.vars.len());
        self.vars.insert(name.clone(), color);
        Some(name)
    }

    fn term(&mut self, kind: Kind) -> String {
        match kind {
            Kind::Color => {
                if self.rng.gen_bool(0.3) {
                    return COLORS.choose(self.rng).unwrap().to_string();
                }
                self.var(true).unwrap_or_else(|| COLORS[0].to_string())
            }
            _ => {
                if self.rng.gen_bool(0.25) {
                    return number(self.rng, kind == Kind::Int);
                }
                self.var(false).unwrap_or_else(|| number(self.rng, true))
            }
        }
    }

    fn atom(&mut self, name: &str, sig: &[Kind]) -> (String, Vec<String>) {
        let args: Vec<String> = sig.iter().map(|k| self.term(*k)).collect();
        let text = if args.is_empty() { name.to_string() } else { format!("{name}({})", args.join(", ")) };
        (text, args)
    }
}

fn is_var(t: &str) -> bool {
    t.starts_with('x') || (t.starts_with('c') && t[1..].chars().all(|c| c.is_ascii_digit()))
}

/// A random well-formed problem in the input language.
pub fn problem_text(rng: &mut impl Rng, gen: &Gen) -> String {
    let mut out = String::from("sort Color = { red, green, blue }.\n");
    let npreds = rng.gen_range(1..=gen.max_preds);
    let mut preds: Vec<(String, Vec<Kind>)> = Vec::new();
    for k in 0..npreds {
        let arity = [0, 1, 1, 2, 2, 2][rng.gen_range(0..6)];
        let sig: Vec<Kind> =
            (0..arity).map(|_| [Kind::Real, Kind::Real, Kind::Int, Kind::Color][rng.gen_range(0..4)]).collect();
        let names: Vec<&str> = sig.iter().map(|k| k.name()).collect();
        let _ = writeln!(out, "pred P{k}({}).", names.join(", "));
        preds.push((format!("P{k}"), sig));
    }

    for _ in 0..rng.gen_range(1..=gen.max_clauses) {
        let mut b = ClauseBuilder { rng: &mut *rng, max_vars: gen.max_vars, vars: BTreeMap::new() };
        let mut body = Vec::new();
        let mut body_vars = BTreeSet::new();
        let nbody = [0, 1, 1, 2][b.rng.gen_range(0..4)];
        for _ in 0..nbody {
            let (name, sig) = preds.choose(b.rng).unwrap().clone();
            let (text, args) = b.atom(&name, &sig);
            body_vars.extend(args.into_iter().filter(|a| is_var(a)));
            body.push(text);
        }
        let head = if b.rng.gen_bool(0.8) {
            let (name, sig) = preds.choose(b.rng).unwrap().clone();
            Some(b.atom(&name, &sig))
        } else {
            None
        };

        let arith: Vec<String> = b.vars.iter().filter(|(_, c)| !**c).map(|(v, _)| v.clone()).collect();
        let mut theory = Vec::new();
        if gen.finite {
            if let Some((_, args)) = &head {
                for a in args {
                    if a.starts_with('x') && !body_vars.contains(a) && !theory.iter().any(|t: &String| t.starts_with(&format!("{a} ="))) {
                        theory.push(format!("{a} = {}", number(b.rng, false)));
                    }
                }
            }
        }
        let pool: Vec<String> = if gen.finite {
            arith.iter().filter(|v| body_vars.contains(*v)).cloned().collect()
        } else {
            arith.clone()
        };
        for _ in 0..[0, 1, 1, 2][b.rng.gen_range(0..4)] {
            let x = if !gen.finite && (pool.is_empty() || b.rng.gen_bool(0.1)) {
                match b.var(false) {
                    Some(v) => v,
                    None => continue,
                }
            } else if let Some(v) = pool.choose(b.rng) {
                v.clone()
            } else {
                continue;
            };
            let y = pool.choose(b.rng).cloned().unwrap_or_else(|| x.clone());
            let r = rel(b.rng);
            let c = number(b.rng, false);
            let text = match b.rng.gen_range(0..10) {
                0..=5 => format!("{x} {r} {c}"),
                6 => format!("{x} - {y} {r} {c}"),
                7 => format!("{x} + {y} {r} {c}"),
                8 => format!("2*{x} {r} {c}"),
                _ => format!("{x} {r} {y}"),
            };
            theory.push(text);
        }

        let head_text = head.map_or_else(|| "false".to_string(), |(t, _)| t);
        let clause = match (theory.is_empty(), body.is_empty()) {
            (true, true) => format!("clause -> {head_text}."),
            (true, false) => format!("clause {} -> {head_text}.", body.join(", ")),
            (false, _) => format!("clause {} || {} -> {head_text}.", theory.join(", "), body.join(", ")),
        };
        let _ = writeln!(out, "{clause}");
    }

    let mode = match gen.conjecture {
        ConjMode::Any => [ConjMode::None, ConjMode::Forall, ConjMode::Exists][rng.gen_range(0..3)],
        m => m,
    };
    let (name, sig) = preds.choose(rng).unwrap().clone();
    match mode {
        ConjMode::Forall => {
            let vars: Vec<String> = (0..sig.len()).map(|i| format!("y{i}")).collect();
            let atom = if vars.is_empty() { name } else { format!("{name}({})", vars.join(", ")) };
            let _ = writeln!(out, "conjecture forall {}. {atom}.", vars.join(", "));
        }
        ConjMode::Exists => {
            let mut vars = Vec::new();
            let args: Vec<String> = sig
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    if rng.gen_bool(0.7) {
                        vars.push(format!("y{i}"));
                        format!("y{i}")
                    } else if *k == Kind::Color {
                        COLORS.choose(rng).unwrap().to_string()
                    } else {
                        number(rng, *k == Kind::Int)
                    }
                })
                .collect();
            let atom = if args.is_empty() { name } else { format!("{name}({})", args.join(", ")) };
            let _ = writeln!(out, "conjecture exists {}. {atom}.", vars.join(", "));
        }
        _ => {}
    }
    out
}

/// Facts restricted to the problem's own (non-reserved) predicates.
pub fn input_facts<S: Ord + Clone>(problem: &GProblem<impl slah::num::Scalar>, facts: impl IntoIterator<Item = GroundAtom<S>>) -> BTreeSet<GroundAtom<S>> {
    let names: BTreeSet<&str> = problem.preds.iter().filter(|p| !slah::model::is_reserved(&p.name)).map(|p| p.name.as_str()).collect();
    facts.into_iter().filter(|f| names.contains(f.pred.as_str())).collect()
}

/// A tp-function in which every position ranges over `values` of its sort;
/// lets the ground-resolution oracle run over a reference domain instead of
/// test points.
pub fn uniform_domain(problem: &Problem, values: &BTreeSet<Rational>, like: &slah::TestPointFn) -> slah::TestPointFn {
    let mut table = BTreeMap::new();
    for pos in problem.positions() {
        let sort_id = problem.pos_sort(&pos);
        let sort = problem.sort(sort_id);
        let vals: Vec<Value> = match sort.kind {
            SortKind::Finite => sort.members.iter().map(|m| GValue::Fo(m.clone())).collect(),
            _ => values.iter().map(|v| GValue::Num(v.clone())).filter(|v| problem.in_sort(sort_id, v)).collect(),
        };
        table.insert(pos, vals);
    }
    GTestPointFn { table, class_intervals: like.class_intervals.clone(), finite: like.finite.clone(), class_of: like.class_of.clone() }
}

/// Every number occurring in the clauses or the conjecture.
pub fn constants(problem: &Problem) -> BTreeSet<Rational> {
    let mut out = BTreeSet::new();
    for c in &problem.clauses {
        for a in &c.theory {
            out.insert(a.bound.clone());
        }
        for atom in c.free_atoms() {
            for t in &atom.args {
                if let slah::model::Term::Num(v) = t {
                    out.insert(v.clone());
                }
            }
        }
    }
    if let Some(conj) = &problem.conjecture {
        for t in &conj.atom.args {
            if let slah::model::Term::Num(v) = t {
                out.insert(v.clone());
            }
        }
    }
    out
}
