//! Compact-model simulation and tandem neural-network parameter extraction
//! for back-gated 2D Schottky-barrier FETs.
//!
//! The crate has two halves:
//!
//! - [`refmodel`] is a self-contained physics model that maps eight device
//!   parameters (mobility, barrier height, density of states, and donor /
//!   acceptor defect profiles) to drain-current vs. gate-voltage curves at
//!   two drain biases. It stands in for a full TCAD solver and is cheap
//!   enough to generate training corpora on a laptop.
//! - [`features`], [`nn`], [`training`] and [`eval`] implement the fitting
//!   pipeline: feature engineering and min-max scaling, a small dense/GRU
//!   network engine with exact analytic gradients, the forward-surrogate and
//!   tandem training stages, and the R²/parameter-error metrics used to
//!   grade extractions.
//!
//! All numeric kernels are generic over the scalar type via [`Scalar`]
//! (`f32` or `f64`); the type aliases at the crate root fix the production
//! precision to `f64`.

pub mod dataset;
pub mod eval;
pub mod features;
pub mod nn;
pub mod numeric;
pub mod refmodel;
pub mod scalar;
pub mod training;

pub use scalar::Scalar;

/// Production scalar type. Gradient checks and R² values close to 1 need
/// double precision; `f32` remains available through the generic API.
pub type Real = f64;

pub type DeviceParams64 = refmodel::DeviceParams<Real>;
pub type PhysicalConstants64 = refmodel::PhysicalConstants<Real>;
pub type BiasSpec64 = refmodel::BiasSpec<Real>;
pub type IvCurveSet64 = refmodel::IvCurveSet<Real>;
pub type ParamRanges64 = refmodel::ParamRanges<Real>;
// placeholder: pub type FeatureMatrix64 = features::FeatureMatrix<Real>;
// placeholder: pub type ScalingRecord64 = features::ScalingRecord<Real>;
// placeholder: pub type Network64 = nn::Network<Real>;

/// Crate-wide error type. The variants map onto the distinct process exit
/// codes of the command-line front end, so error classification is part of
/// the public contract.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed user input (curves, CSV rows, masks, out-of-span grids).
    #[error("input error: {0}")]
    Input(String),
    /// Invalid configuration (bad ranges, degenerate scaling slices).
    #[error("configuration error: {0}")]
    Config(String),
    /// An iterative routine failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// The model was asked for a state outside its physical domain.
    #[error("model domain error: {0}")]
    ModelDomain(String),
    /// An internal API contract was violated (shape or topology mismatch).
    #[error("contract violation: {0}")]
    Contract(String),
    /// A weight or record file could not be read back faithfully.
    #[error("persistence error: {0}")]
    Persistence(String),
    /// A required upstream artifact (dataset, checkpoint) is missing.
    #[error("dependency error: {0}")]
    Dependency(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
