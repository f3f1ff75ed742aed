use super::SpotSet;
use crate::error::{invalid, Error, Result};
use crate::io::csv::Table;
use serde::{Deserialize, Serialize};

pub const DEFAULT_BIN_WIDTH: f64 = 0.01;
/// Minimum peak prominence relative to the global maximum of smoothed `g`.
pub const PEAK_PROMINENCE: f64 = 0.1;

/// Pair-distance histogram normalized by the spot count. Bin `k` is centred
/// on `r = k·w` and collects distances in `[(k-½)w, (k+½)w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RdfProfile {
    pub bin_width: f64,
    pub bin_edges: Vec<f64>,
    pub r: Vec<f64>,
    pub g: Vec<f64>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub spot_count: usize,
}

impl RdfProfile {
    /// `g` in the bin containing `r`.
    pub fn value_at(&self, r: f64) -> Option<f64> {
        let k = (r / self.bin_width).round();
        (k >= 0.0).then(|| self.g.get(k as usize).copied()).flatten()
    }

    /// Sum of `g · N`, i.e. the number of binned unordered pairs.
    pub fn pair_mass(&self) -> f64 {
        self.g.iter().sum::<f64>() * self.spot_count as f64
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["r", "g"]);
        for (r, g) in self.r.iter().zip(&self.g) {
            t.push([r.to_string(), g.to_string()]);
        }
        t
    }
}

pub fn rdf(spots: &SpotSet, bin_width: f64, r_max: f64) -> Result<RdfProfile> {
    let n = spots.count();
    if n < 2 {
        return Err(Error::TooFewSamples { required: 2, actual: n });
    }
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(invalid("bin_width", "must be positive"));
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(invalid("r_max", "must be positive"));
    }
    let nbins = (r_max / bin_width).round() as usize + 1;
    let mut counts = vec![0u64; nbins];
    let c = &spots.centroids;
    for a in 0..n {
        for b in a + 1..n {
            let d = (c[a].0 - c[b].0).hypot(c[a].1 - c[b].1);
            if d <= r_max {
                let k = ((d / bin_width).round() as usize).min(nbins - 1);
                counts[k] += 1;
            }
        }
    }
    let g: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let r: Vec<f64> = (0..nbins).map(|k| k as f64 * bin_width).collect();
    let bin_edges = (0..=nbins)
        .map(|k| ((k as f64 - 0.5) * bin_width).max(0.0))
        .collect();
    let peaks = find_peaks(&g, PEAK_PROMINENCE);
    Ok(RdfProfile {
        bin_width,
        bin_edges,
        r1: peaks.first().map(|&k| r[k]),
        r2: peaks.get(1).map(|&k| r[k]),
        r,
        g,
        spot_count: n,
    })
}

/// Three-bin moving average; end bins average over the neighbours present.
pub fn smooth3(g: &[f64]) -> Vec<f64> {
    (0..g.len())
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(g.len().saturating_sub(1));
            g[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// Indices (ascending) of local maxima of the smoothed profile whose
/// prominence is at least `min_prominence · max`. A flat-topped maximum is
/// reported at the middle of its plateau.
pub fn find_peaks(g: &[f64], min_prominence: f64) -> Vec<usize> {
    let s = smooth3(g);
    let max = s.iter().copied().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Vec::new();
    }
    let eq = |a: f64, b: f64| (a - b).abs() <= 1e-12 * max;
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < s.len() {
        let mut j = i;
        while j + 1 < s.len() && eq(s[j + 1], s[i]) {
            j += 1;
        }
        let rises = s[i - 1] < s[i] && !eq(s[i - 1], s[i]);
        let falls = j + 1 < s.len() && s[j + 1] < s[i];
        if rises && falls && prominence(&s, i, j) >= min_prominence * max {
            peaks.push((i + j) / 2);
        }
        i = j + 1;
    }
    peaks
}

/// Height above the higher of the two lowest points separating the plateau
/// `[i, j]` from higher ground (or the profile ends).
fn prominence(s: &[f64], i: usize, j: usize) -> f64 {
    let h = s[i];
    let mut left_min = h;
    for k in (0..i).rev() {
        if s[k] > h {
            break;
        }
        left_min = left_min.min(s[k]);
    }
    let mut right_min = h;
    for &v in &s[j + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}
