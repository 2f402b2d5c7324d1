//! Bivariate means around the Neuman-Sándor mean `M(a, b)`.
//!
//! - [`means`]: stable `f64` evaluation of the arithmetic, geometric, harmonic,
//!   centroidal, contra-harmonic, Seiffert, root-square, Neuman-Sándor and
//!   generalized logarithmic means.
//! - [`series`]: exact rational coefficients of the `h1`, `h2`, `h3` power
//!   series and the monotone-ratio check.
//! - [`ratio`]: the `h` functions, the `t = sinh(theta)` substitution and the
//!   `p0` root.
//! - [`constants`]: every sharp constant as an exact expression.
//! - [`catalog`]: the inequality catalog, sampled verification and
//!   sharpness probes.
//! - [`report`]: report rows in human, json-lines and csv form.

pub mod catalog;
pub mod constants;
pub mod error;
pub mod means;
pub mod precise;
pub mod ratio;
pub mod report;
pub mod series;

pub use catalog::{InequalityRecord, Margins, VerificationReport};
pub use constants::{sharp_constants, SharpConstant};
pub use error::{Error, Result};
pub use means::{MeanKind, PositivePair};
pub use ratio::HFunction;
pub use series::LemmaSeries;
