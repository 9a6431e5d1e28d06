//! Positive-weight cubature formulas from i.i.d. samples.
//!
//! Given a sampler for a probability measure and the means of a finite family
//! of test functions `phi = (1, phi_2, ..., phi_d)`, [`construct_exact`]
//! draws candidates until the mean vector lies in the convex hull of the
//! lifted candidates and then reads off a rule with at most `d` nodes from a
//! basic feasible solution of `A z = b, z >= 0`. The same machinery
//! compresses an empirical measure ([`compress_empirical`]) or reduces an
//! existing rule, for example a tensor product ([`product_cubature`]),
//! back to at most `d` nodes ([`subsample`]).
//!
//! ```
//! use tchakaloff::{analytic_moment_vector, enumerate_monomials, subsample, LpOptions, PointSet};
//!
//! let basis = enumerate_monomials(1, 3).unwrap();
//! let target = analytic_moment_vector(&basis).unwrap();
//! let points = PointSet::from_rows(1, &[[0.0], [0.5], [1.0]]).unwrap();
//! let simpson = subsample(&points, &basis, &target, &LpOptions::default()).unwrap();
//! assert!((simpson.weights[1] - 2.0 / 3.0).abs() < 1e-12);
//! ```

pub mod basis;
pub mod cubature;
pub mod error;
pub mod experiment;
pub mod format;
pub mod lp;
pub mod moments;
pub mod points;
pub mod sampler;

pub use basis::{basis_dim, enumerate_monomials, BasisKind, MultiIndex, TestFunctionBasis};
pub use cubature::{
    compress_empirical, construct_exact, integrate, integrate_fn, product_cubature, subsample,
    subsample_lifted, verify, ConstructionConfig, Cubature, CubatureProvenance, VerificationReport,
};
pub use error::{Error, Result};
pub use experiment::{estimate_n, mc_error_study, probe, run_table, ExperimentConfig, ExperimentRecord};
pub use lp::{find_bfs, membership_test, BfsResult, BfsStatus, LpInstance, LpOptions, PivotRule};
pub use moments::{
    analytic_moment_vector, empirical_moments, load_moment_vector, uniform_cube_moment,
    MomentProvenance, MomentVector,
};
pub use points::PointSet;
pub use sampler::{
    load_samples, sample_gaussian, sample_uniform_cube, Distribution, SampleBatch, SampleSource,
    SampleStream,
};
