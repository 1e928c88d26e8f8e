//! Eigenvectors with high relative accuracy in every coordinate.

mod export;
mod partition;
mod pipeline;
mod stability;
pub mod sweep;

pub use export::write_eigenvector_csv;
pub use partition::{classify_regions, Degeneracy, RegionPartition, RegionTag};
pub use pipeline::{
    decay_backward, glue, glue_scaled, grow_forward, hira_eigenvector, hira_eigenvector_with,
    norm_factor, simplified_eigenvector, simplified_eigenvector_with, EigenvectorResult, Method,
    NormParts, OscillatorySweep,
};
pub use stability::{kappa, power_law_error_order, stability_report, StabilityReport};
pub use sweep::{alpha_init, alpha_sweep, gamma_sweep};
