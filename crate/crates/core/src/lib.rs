//! Decides conjectures over Horn clauses with simple linear arithmetic by
//! translating them into Datalog over finitely many test points.

pub mod analysis;
pub mod emit;
pub mod engine;
pub mod hammer;
pub mod model;
pub mod num;
pub mod pipeline;
pub mod testpoints;

/// Exact rationals of unbounded size; the scalar every front end uses.
pub type Rational = num_rational::BigRational;
pub type Problem = model::Problem<Rational>;
pub type HornClause = model::HornClause<Rational>;
pub type LinearAtom = model::LinearAtom<Rational>;
pub type Value = num::Value<Rational>;
pub type TestPointFn = testpoints::TestPointFn<Rational>;
pub type ExtrapolationFn = testpoints::ExtrapolationFn<Rational>;
pub type HammeredProgram = hammer::HammeredProgram<Rational>;
pub type DatalogProgram = engine::Program<Value>;
pub type Decision = pipeline::Decision<Rational>;

pub use pipeline::{decide, Options, Verdict};
