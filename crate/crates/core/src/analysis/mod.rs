//! Derivable-value approximation, reducibility check and position classes.

mod avals;
mod connections;

pub use avals::{dependency_order, derive_values, derive_values_with, AVals, AvalSet, DeriveMode};
pub use connections::{
    find_connections, simplify_theory_atom, ConnectionError, Connections, SimpleBound, Simplified,
    SimplifyError,
};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{HornClause, Problem};
use crate::num::Scalar;

/// Variables of `clause` occurring at some body position with finite avals.
pub fn finite_vars<S: Scalar>(clause: &HornClause<S>, avals: &AVals<S>) -> BTreeSet<String> {
    clause
        .body_vars()
        .into_iter()
        .filter(|x| clause.positions_of(x, false).iter().any(|p| avals.is_finite(p)))
        .map(str::to_string)
        .collect()
}

/// A theory atom with more than one variable not fixed by a finite position.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("theory atom `{atom}` in clause {} has more than one infinite variable: {}", clause + 1, infinite_vars.join(", "))]
pub struct Irreducible {
    pub clause: usize,
    pub atom: String,
    pub infinite_vars: Vec<String>,
}

pub fn check_reducible<S: Scalar>(problem: &Problem<S>, avals: &AVals<S>) -> Result<(), Irreducible> {
    for (k, clause) in problem.clauses.iter().enumerate() {
        let finite = finite_vars(clause, avals);
        for atom in &clause.theory {
            let infinite: Vec<String> =
                atom.vars().filter(|x| !finite.contains(*x)).map(str::to_string).collect();
            if infinite.len() > 1 {
                return Err(Irreducible { clause: k, atom: atom.to_string(), infinite_vars: infinite });
            }
        }
    }
    Ok(())
}

/// Whether instantiating finite positions turns every theory atom into a
/// simple bound or a ground atom.
pub fn is_reducible<S: Scalar>(problem: &Problem<S>, avals: &AVals<S>) -> bool {
    check_reducible(problem, avals).is_ok()
}
