//! Minimum-distance analysis of irregular generalized LDPC (GLDPC) code
//! ensembles: exact weight enumerators of check-node codes, the growth rate of
//! the VN-regular ensemble and its critical relative distance, limit
//! probabilities and bounds for the unstructured ensemble, and Monte Carlo
//! sampling of finite Tanner graphs to check them.

pub mod bounds;
pub mod ensemble;
pub mod error;
pub mod gf2;
pub mod growth;
pub mod numfmt;
pub mod polywef;
pub mod sampler;
pub mod specfile;

pub use ensemble::{
    validate_finite_instance, CheckNodeType, CnMixture, Ensemble, Ensemble1Spec, Ensemble2Spec,
    EnsembleTag, InstancePlan, Rational,
};
pub use error::{GldpcError, Result};
pub use gf2::BitMatrix;
pub use polywef::{IntPoly, Wef};
