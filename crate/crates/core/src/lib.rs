//! Statistical inference for nested (subject-within-group) data.
//!
//! The crate is organised along the two stages of a summary-statistic
//! analysis:
//!
//! * [`effect`] estimates one effect size per subject together with an
//!   analytic variance (mean, paired and Welch differences, AUC, Fisher-z
//!   correlation, OLS coefficients).
//! * [`combine`] turns a list of [`SubjectEffect`]s into a group-level
//!   estimate under a fixed-effect or DerSimonian-Laird random-effects model,
//!   and provides the naive summary test, Stouffer's method, Cochran's Q and
//!   the (invalid) pooling baseline.
//!
//! [`dist`] holds the numerical kernels and the seedable random streams, and
//! [`simulate`] is the Monte Carlo harness that measures rejection rates of
//! every group-level method on synthetic nested data.
//!
//! ```
//! use neststat::combine::{combine_effects, group_test, Model, ReferencePolicy, WeightScheme};
//! use neststat::effect::{welch_diff_effect, TwoSampleData};
//!
//! let subjects = [
//!     TwoSampleData::new(vec![1.2, 0.8, 1.5, 1.1], vec![0.1, 0.4, -0.2, 0.3])?,
//!     TwoSampleData::new(vec![2.0, 1.7, 2.4, 1.9, 2.2], vec![1.0, 1.3, 0.9, 1.2])?,
//! ];
//! let effects = subjects
//!     .iter()
//!     .map(welch_diff_effect)
//!     .collect::<Result<Vec<_>, _>>()?;
//! let group = combine_effects(&effects, Model::RandomEffectsDL, WeightScheme::InverseVariance)?;
//! let test = group_test(&group, 0.0, ReferencePolicy::ZTest)?;
//! assert!(test.p_two < 0.05);
//! # Ok::<(), neststat::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod combine;
pub mod dist;
pub mod effect;
mod error;
pub mod simulate;

pub use combine::{GroupResult, Model, ReferencePolicy, WeightScheme};
pub use dist::RngState;
pub use effect::{EffectKind, RefDist, SampleSize, SubjectEffect, TestResult};
pub use error::{Error, Result};
