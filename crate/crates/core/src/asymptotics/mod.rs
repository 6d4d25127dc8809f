//! Validators that turn each asymptotic claim into a [`ConvergenceReport`].
//!
//! The `predicted` column of every report comes from the weight data alone;
//! the `observed` column comes from an independently computed basis.

mod global;
mod identity;
mod interior;
mod report;

pub use global::{
    alpha_decay_report, alpha_structure_report, faber_norm_report, kernel_report, strong_asymptotics_report,
    theorem1_report, TheoremOptions,
};
pub use identity::exp_identity_report;
pub use interior::{
    branch_ratio_report, branch_rhs, bs_zero_report, rational_residue_report, COMPANION_DEGREE, rational_residue_value,
    rk0_point_report, tau_estimate, tau_report, TauEstimate,
};
pub use report::{log_slope, ConvergenceReport, Criterion, ReportRow, SeriesSpec, Verdict, DEFAULT_SLACK, ROUNDOFF_FLOOR};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::C64;

/// Deterministic points with `lo ≤ |z| ≤ hi` and uniform angle.
pub fn sample_points(count: usize, lo: f64, hi: f64, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = lo + (hi - lo) * rng.random::<f64>();
            C64::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
        })
        .collect()
}

/// Polar grid of `rings × rays` points on `0 ≤ |z| ≤ 1`, including the centre and the unit circle.
pub fn disk_grid(rings: usize, rays: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(rings * rays);
    for i in 0..rings {
        let r = i as f64 / (rings - 1).max(1) as f64;
        for l in 0..rays {
            out.push(C64::from_polar(r, std::f64::consts::TAU * (l as f64 + 0.5 * (i % 2) as f64) / rays as f64));
        }
    }
    out
}
