//! Trapezoid rule for contour integrals over circles.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::C64;

/// `count` equispaced nodes on `|ζ| = radius`, optionally rotated by half a step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleRule {
    pub radius: f64,
    pub count: usize,
    pub half_step: bool,
}

impl CircleRule {
    pub fn new(radius: f64, count: usize) -> Result<Self> {
        if count < 16 || !count.is_multiple_of(2) {
            return Err(Error::InvalidOrder(format!("circle node count {count} must be even and at least 16")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidOrder(format!("circle radius {radius} must be positive")));
        }
        Ok(CircleRule { radius, count, half_step: false })
    }

    /// Same rule shifted by half a node spacing.
    pub fn rotated(self) -> Self {
        CircleRule { half_step: !self.half_step, ..self }
    }

    pub fn node(&self, l: usize) -> C64 {
        let shift = if self.half_step { 0.5 } else { 0.0 };
        C64::from_polar(self.radius, 2.0 * std::f64::consts::PI * (l as f64 + shift) / self.count as f64)
    }

    /// Smallest distance from a node to `p`.
    pub fn clearance(&self, p: C64) -> f64 {
        (0..self.count).map(|l| (self.node(l) - p).norm()).fold(f64::MAX, f64::min)
    }
}

/// `(1/2πi) ∮ f(ζ) dζ ≈ (1/count) Σ f(ζ_l) ζ_l`.
pub fn integrate_circle<E>(rule: &CircleRule, mut f: impl FnMut(C64) -> Result<C64, E>) -> Result<C64, E> {
    let mut acc = Complex::zero();
    for l in 0..rule.count {
        let z = rule.node(l);
        acc += f(z)? * z;
    }
    Ok(acc / rule.count as f64)
}
