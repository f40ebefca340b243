//! klab: numerical verification of Kenmotsu and 3-Kenmotsu structures on
//! coordinate charts.
//!
//! The crate evaluates metrics, structure tensors, and their first two
//! derivatives exactly through second-order jets, derives Levi-Civita
//! connection and curvature data from them, and checks the defining
//! identities of (3-)Kenmotsu geometry pointwise on sampled charts. Finite
//! differences appear only where third derivatives of the metric are needed
//! (the parallel-Ricci check) and as an independent cross-check of the jet
//! arithmetic.

// Tensor algebra reads best with explicit index loops.
#![allow(clippy::needless_range_loop)]

pub mod chart;
pub mod contact;
pub mod curvature;
pub mod error;
pub mod fd;
pub mod field;
pub mod form;
pub mod jet;
pub mod kenmotsu3;
pub mod manifolds;
pub mod report;
pub mod rng;
pub mod suite;

pub use chart::{Chart, Point};
pub use contact::{AlmostContactMetricStructure, Sampling};
pub use error::{GeomError, Result};
pub use field::{MetricField, TensorField};
pub use jet::Jet2;
pub use kenmotsu3::{compose_third, HVector, ThreeKenmotsuStructure};
pub use manifolds::{example_r5, flat_control, warped_product, ManifoldSpec, WarpedProductSpec};
pub use report::{CheckReport, ReportFormat, Verdict};
pub use rng::Lcg64;
pub use suite::{run_suite, suite_passed, SuiteConfig, CHECK_IDS};
