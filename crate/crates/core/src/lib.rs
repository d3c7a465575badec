//! Heat calculus on finite weighted graphs.
//!
//! A [`WeightedGraph`] carries positive edge weights `w_xy` and a positive
//! vertex measure `μ`. On top of it this crate provides
//!
//! - the μ-Laplacian and the gradient form ([`calculus`]),
//! - the heat kernel and heat semigroup by uniformization, with a dense
//!   spectral oracle ([`heat`]),
//! - a Monte Carlo kernel estimator from the continuous-time random walk
//!   ([`mc`]),
//! - the global gradient estimate `Γ(√u)/u − Δu/(2u) ≤ D_μ` and the Harnack,
//!   heat kernel and volume growth bounds that follow from it, each as a
//!   site-by-site verifier producing [`BoundReport`]s ([`estimates`]).
//!
//! ```
//! use graphheat::{generate, Family, GenMeasure, heat_kernel};
//!
//! let g = generate(&Family::Path { n: 2 }, GenMeasure::Unit, 0).unwrap();
//! let p = heat_kernel(&g, 1.0, 1e-10).unwrap();
//! assert!((p.get(0, 1) - (1.0 - (-2.0f64).exp()) / 2.0).abs() < 1e-10);
//! ```

pub mod calculus;
pub mod error;
pub mod estimates;
pub mod generate;
pub mod graph;
pub mod heat;
pub mod io;
pub mod mc;
pub mod report;

pub use calculus::{gamma, gamma_self, laplacian, neg_sqrt_laplacian_bound, sqrt_identity_residual};
pub use error::{Error, Result};
pub use generate::{generate, log_uniform_function, Family, GenMeasure};
pub use graph::{GraphBuilder, GraphConstants, Measure, MeasureMode, VertexFunction, WeightedGraph};
pub use heat::{dense_oracle, evolve, heat_kernel, jump_matrix, HeatKernel, JumpMatrix};
pub use mc::{simulate, WalkEstimate};
pub use report::{BoundReport, Site, Summary, Tolerance};
