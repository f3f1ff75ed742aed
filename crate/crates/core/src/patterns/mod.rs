//! Quantifying steady spot patterns: connected-component spot detection, the
//! per-spot radial distribution function and the fit `r = A e^{-β/α}`.

mod rdf;
mod scaling;
mod spots;

pub use rdf::{find_peaks, rdf, smooth3, RdfProfile, DEFAULT_BIN_WIDTH, PEAK_PROMINENCE};
pub use scaling::{fit_scaling, peaks_table, read_peaks, ScalingFit};
pub use spots::{detect_spots, detect_spots_relative, SpotSet, DEFAULT_THRESHOLD_FRACTION};
