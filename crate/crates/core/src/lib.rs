//! Multiple zeta values: the word algebra, 2-posets and the `W` map,
//! regularization, high-precision evaluation, and generation of the
//! integral-series relations together with exact rank computations.

pub mod error;
pub mod index;
pub mod linalg;
pub mod lincomb;
pub mod numeric;
pub mod poset;
pub mod products;
pub mod real;
pub mod regularization;
pub mod relations;
pub mod suites;
pub mod word;

pub use error::{MzvError, Result};
pub use index::Index;
pub use lincomb::{LinComb, Q};
pub use numeric::{EvalContext, Evaluator};
pub use poset::Poset2;
pub use real::Real;
pub use regularization::TPoly;
pub use relations::RelationRecord;
pub use word::Word;
