//! Monte Carlo side: the centred partial-trace process of sampled matrices,
//! replica statistics, the limiting Brownian bridge, and the Kesten-McKay
//! law for the spectrum of a truncation.

mod bridge;
mod field;
mod spectral;
mod stats;
mod tightness;

pub use bridge::{bridge_covariance, BridgeReference, BRIDGE_RIDGE};
pub use field::{
    block_increment, floor_index, map_replicas, process_value, product_grid, sample_trace_field,
    ProcessSample, TraceField,
};
pub use spectral::{
    kesten_mckay, sample_spectrum, spectral_compare, KestenMcKay, SpectralComparison,
    SpectralHistogram, SPECTRAL_BINS,
};
pub use stats::{
    covariance_mc, jackknife_se, ks_beta_one, ks_standard_normal, kstat_estimators, mean, mean_se,
    CovarianceEstimate, KStats, KsOutcome, MIN_COVARIANCE_REPLICAS, MIN_KSTAT_SAMPLES,
};
pub use tightness::{dyadic_blocks, tightness_fit, BlockMoment, TightnessReport};
