//! Exact and error-bounded numerics around the series `Σ 1/(n³ sin² n)`:
//! the binomial double sum G(n), a self-contained multiprecision real with π
//! and argument reduction, continued fractions of π, partial sums with
//! checkpoints, the sufficient-condition scanner, and identity checks.

pub mod criterion;
pub mod error;
pub mod exact;
pub mod exec;
pub mod identity;
pub mod mp;
pub mod rationality;
pub mod report;
pub mod series;
pub mod cli;

pub use error::{Error, Result};
pub use exec::Exec;
pub use mp::MpReal;
