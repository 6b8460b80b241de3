//! Ellipticity of polyhedral products `(X, A)^K`.
//!
//! The library decides whether a polyhedral product is rationally elliptic
//! or hyperbolic from the minimal missing faces of `K` together with
//! per-vertex rational data, builds the loop-space decomposition in the
//! elliptic case and a wedge-of-spheres witness in the hyperbolic case, and
//! computes exact rational homotopy rank series for both.
//!
//! Vertices are 1-based throughout. Faces are bitmasks, so complexes live on
//! at most 63 vertices.

pub mod complex;
pub mod error;
pub mod face;
pub mod homotopy;
pub mod json;
pub mod mmf;
pub mod ranks;
pub mod series;
pub mod verify;

pub use complex::SimplicialComplex;
pub use error::{Error, ErrorKind, Result};
pub use face::Face;
pub use homotopy::{
    classify, decompose_loops, eval_cy_boundary, eval_cy_simplex, hyperbolic_witness,
    linkjoin_check, Classification, ClassifyOptions, FibreType, FormalSpace, PairSpec, Verdict,
    VertexPair, Witness,
};
pub use mmf::{
    build_kbar, complex_from_mmf, join_decomposition, missing_faces, mmf, mmf_brute_force,
    mutually_disjoint, JoinDecomposition, MmfSet,
};
pub use ranks::{
    growth_report, lie_ranks, ranks_of_formal, sphere_ranks, Growth, GrowthReport, RankSeries,
};
pub use series::{Coeff, PowerSeries};

/// Exact integer power series; the coefficient type used for every rank computation.
pub type IntegerSeries = PowerSeries<num_bigint::BigInt>;
/// Machine-word power series. Only safe while coefficients stay inside `i64`.
pub type MachineSeries = PowerSeries<i64>;
/// Exact rational number, used for growth ratios.
pub type Ratio = num_rational::BigRational;

/// Default truncation degree for rank series.
pub const DEFAULT_MAX_DEGREE: u32 = 40;
/// Largest truncation degree accepted by the rank engine.
pub const MAX_DEGREE_CAP: u32 = 200;
