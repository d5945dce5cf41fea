//! End-to-end decision: normalize, analyse, pick test points, hammer, evaluate.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::analysis::{
    check_reducible, derive_values_with, find_connections, AVals, AvalSet, ConnectionError, Connections, DeriveMode,
    Irreducible,
};
use crate::engine::{atom_instances, evaluate, oracle_ground_resolution, EngineError, FactStore, ScaleExceeded};
use crate::hammer::{hammer, hammer_existential, Encoding, HammeredProgram, GOAL};
use crate::model::{normalize, Problem, Quantifier};
use crate::num::{Scalar, Value};
use crate::testpoints::{
    eta_complete_for, pick_test_points, Extrapolation, ExtrapolationFn, MalformedBorderSet, Part, PickOptions,
    TestPointFn,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Options {
    pub encoding: Encoding,
    pub pick: PickOptions,
    pub derive: DeriveMode,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("not reducible: {0}")]
    NotReducible(#[from] Irreducible),
    #[error(transparent)]
    Connections(#[from] ConnectionError),
    #[error(transparent)]
    Partition(#[from] MalformedBorderSet),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Entailed,
    NotEntailed,
    /// No conjecture, and the clauses are satisfiable.
    Sat,
    /// No conjecture, and the clauses are contradictory.
    Unsat,
}

impl Verdict {
    /// Maps derivability of the goal atom to an answer.
    pub fn from_goal(has_conjecture: bool, goal: bool) -> Verdict {
        match (has_conjecture, goal) {
            (true, true) => Verdict::Entailed,
            (true, false) => Verdict::NotEntailed,
            (false, true) => Verdict::Unsat,
            (false, false) => Verdict::Sat,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Entailed | Verdict::Unsat => 0,
            Verdict::NotEntailed | Verdict::Sat => 1,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Entailed => "ENTAILED",
            Verdict::NotEntailed => "NOT ENTAILED",
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
        })
    }
}

/// Everything computed before hammering.
#[derive(Clone, Debug)]
pub struct Analysis<S> {
    pub input: Problem<S>,
    /// Normalized clauses, with an existential conjecture folded in.
    pub problem: Problem<S>,
    pub avals: AVals<S>,
    pub conn: Connections<S>,
    pub beta: TestPointFn<S>,
    pub eta: ExtrapolationFn<S>,
}

impl<S: Scalar> Analysis<S> {
    pub fn has_conjecture(&self) -> bool {
        self.input.conjecture.is_some()
    }
}

pub fn analyze<S: Scalar>(input: &Problem<S>, options: &Options) -> Result<Analysis<S>, PipelineError> {
    let folded = match &input.conjecture {
        Some(c) if c.quantifier == Quantifier::Exists => hammer_existential(input),
        _ => input.clone(),
    };
    let problem = normalize(&folded);
    let avals = derive_values_with(&problem, options.derive);
    check_reducible(&problem, &avals)?;
    let conn = find_connections(&problem, &avals)?;
    let (beta, eta) = pick_test_points(&problem, &avals, &conn, options.pick)?;
    Ok(Analysis { input: input.clone(), problem, avals, conn, beta, eta })
}

/// The figures reported next to a verdict.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Stats {
    pub clauses: usize,
    pub max_clause_vars: usize,
    pub max_testpoints: usize,
    pub conjecture_body: usize,
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "clauses: {}", self.clauses)?;
        writeln!(f, "max_clause_vars: {}", self.max_clause_vars)?;
        writeln!(f, "max_testpoints: {}", self.max_testpoints)?;
        writeln!(f, "conjecture_body: {}", self.conjecture_body)
    }
}

#[derive(Clone, Debug)]
pub struct Decision<S> {
    pub verdict: Verdict,
    pub stats: Stats,
    pub analysis: Analysis<S>,
    pub hammered: HammeredProgram<S>,
    pub facts: FactStore<Value<S>>,
}

pub fn hammer_analysis<S: Scalar>(analysis: &Analysis<S>, encoding: Encoding) -> HammeredProgram<S> {
    hammer(&analysis.problem, &analysis.beta, &analysis.eta, encoding)
}

pub fn decide<S: Scalar>(input: &Problem<S>, options: &Options) -> Result<Decision<S>, PipelineError> {
    let analysis = analyze(input, options)?;
    let hammered = hammer_analysis(&analysis, options.encoding);
    let facts = evaluate(&hammered.program)?;
    let verdict = Verdict::from_goal(analysis.has_conjecture(), facts.holds(GOAL, &[]));
    let stats = Stats {
        clauses: input.clauses.len(),
        max_clause_vars: input.clauses.iter().map(|c| c.var_sorts.len()).max().unwrap_or(0),
        max_testpoints: hammered.stats.max_testpoints,
        conjecture_body: hammered.stats.conjecture_body,
    };
    Ok(Decision { verdict, stats, analysis, hammered, facts })
}

/// The verdict of brute-force unit resolution over the test-point grounding.
pub fn oracle_verdict<S: Scalar>(analysis: &Analysis<S>, limit: u128) -> Result<Verdict, ScaleExceeded> {
    let result = oracle_ground_resolution(&analysis.problem, &analysis.beta, limit)?;
    let goal = match &analysis.input.conjecture {
        Some(c) if c.quantifier == Quantifier::Forall && !result.refuted => {
            let sig = analysis.problem.pred(&c.atom.pred).expect("declared predicate");
            eta_complete_for(&analysis.problem, sig, &analysis.beta, &analysis.eta)
                && atom_instances(&analysis.problem, &c.atom, &analysis.beta).iter().all(|a| result.facts.contains(a))
        }
        _ => result.refuted,
    };
    Ok(Verdict::from_goal(analysis.has_conjecture(), goal))
}

fn values(vs: impl IntoIterator<Item = impl fmt::Display>) -> String {
    vs.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

/// Derivable-value sets and position classes with their bounds.
pub fn dump_analysis<S: Scalar>(a: &Analysis<S>) -> String {
    let mut out = String::from("avals:\n");
    for pos in a.problem.positions() {
        let shown = match a.avals.get(&pos) {
            AvalSet::Top => "T".to_string(),
            AvalSet::Finite(vs) => format!("{{{}}}", values(vs)),
        };
        let _ = writeln!(out, "  {pos}: {shown}");
    }
    out.push_str("classes:\n");
    for (rep, members) in &a.conn.classes {
        let _ = writeln!(out, "  {}", values(members));
        let _ = writeln!(out, "    bounds: {{{}}}", values(&a.conn.bounds[rep]));
    }
    out
}

/// Interval partitions, test points and what each point stands for.
pub fn dump_testpoints<S: Scalar>(a: &Analysis<S>) -> String {
    let mut out = String::from("partitions:\n");
    for (rep, intervals) in &a.beta.class_intervals {
        let _ = writeln!(out, "  {}: {}", rep, values(intervals));
    }
    out.push_str("testpoints:\n");
    for (pos, points) in &a.beta.table {
        let _ = writeln!(out, "  {pos}: {{{}}}", values(points));
    }
    out.push_str("extrapolation:\n");
    for (pos, eta) in &a.eta.table {
        let shown: Vec<String> = eta
            .iter()
            .map(|(v, e)| match e {
                Extrapolation::Identity => format!("{v} -> {v}"),
                Extrapolation::Interval { index, part } => {
                    let interval = &a.beta.intervals_of(pos).expect("infinite position")[*index];
                    let part = match part {
                        Part::Integers => " integers",
                        Part::NonIntegers => " non-integers",
                        Part::Whole => "",
                    };
                    format!("{v} -> {interval}{part}")
                }
            })
            .collect();
        let _ = writeln!(out, "  {pos}: {}", shown.join("; "));
    }
    out
}

/// Derived tuples of `pred`, one per line, in lexicographic order.
pub fn dump_facts<S: Scalar>(facts: &FactStore<Value<S>>, pred: &str) -> String {
    let mut out = String::new();
    for t in facts.tuples(pred) {
        let _ = writeln!(out, "{pred}({})", values(t));
    }
    out
}
