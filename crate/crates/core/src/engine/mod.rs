//! Bottom-up Datalog evaluation with stratified negation.

mod eval;
mod oracle;
mod program;
mod stratify;

pub use eval::{evaluate, FactStore};
pub use oracle::{
    atom_instances, grounding_size, oracle_ground_resolution, oracle_limit, OracleResult, ScaleExceeded,
    DEFAULT_ORACLE_LIMIT,
};
pub use program::{DAtom, DTerm, GroundAtom, Program, Rule};
pub use stratify::{stratify, Stratification};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("program is not stratifiable (negative cycle through `{0}`)")]
    NotStratifiable(String),
    #[error("rule for `{0}` has a variable not bound by a positive body atom")]
    UnsafeRule(String),
}
