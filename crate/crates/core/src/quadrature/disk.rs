//! Area rules for `dσ = dA/π` on the unit disk adapted to the weight's singular points.

use std::f64::consts::PI;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::gauss::{gauss_legendre, singular_radial};
use crate::error::{Error, Result};
use crate::scalar::{lift, root_of_unity, Real, C64};
use crate::weight::WeightSpec;

/// Quadrature orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadOrders {
    /// Gauss–Legendre points across the full radius.
    pub radial: usize,
    /// Equispaced angles per ring (rounded up to a power of two).
    pub angular: usize,
    /// Order of the local rules around singular points.
    pub patch: usize,
}

impl Default for QuadOrders {
    fn default() -> Self {
        QuadOrders { radial: 96, angular: 256, patch: 48 }
    }
}

impl QuadOrders {
    /// Orders adequate for degree-`2n` integrands; never below the defaults.
    pub fn for_degree(n: usize) -> Self {
        let d = QuadOrders::default();
        QuadOrders {
            radial: d.radial.max(n + 48),
            angular: d.angular.max(2 * n + 128),
            patch: d.patch.max(n / 2 + 32),
        }
    }

    /// Every order doubled.
    pub fn doubled(&self) -> Self {
        QuadOrders { radial: 2 * self.radial, angular: 2 * self.angular, patch: 2 * self.patch }
    }
}

/// Rings of equispaced nodes: node `(i, l)` sits at `radii[i]·e^{2πil/count}`
/// and carries weight `ring_weights[i] / count`.
#[derive(Clone, Debug)]
pub struct TensorBlock<T> {
    pub radii: Vec<T>,
    pub ring_weights: Vec<T>,
    pub count: usize,
    unit: Vec<Complex<T>>,
}

impl<T: Real> TensorBlock<T> {
    fn new(radii: Vec<T>, ring_weights: Vec<T>, count: usize) -> Self {
        let unit = (0..count).map(|l| root_of_unity::<T>(l, count)).collect();
        TensorBlock { radii, ring_weights, count, unit }
    }

    /// `e^{2πil/count}`.
    pub fn unit(&self, l: usize) -> &Complex<T> {
        &self.unit[l]
    }
}

/// Unstructured nodes, used where patches cut the rings.
#[derive(Clone, Debug)]
pub struct ScatteredBlock {
    pub nodes: Vec<C64>,
    pub weights: Vec<f64>,
    /// Largest node modulus.
    pub r_max: f64,
}

impl ScatteredBlock {
    fn new(nodes: Vec<C64>, weights: Vec<f64>) -> Self {
        let r_max = nodes.iter().map(|z| z.norm()).fold(0.0, f64::max);
        ScatteredBlock { nodes, weights, r_max }
    }
}

/// Composite area rule: polar tensor rings plus local patches.
#[derive(Clone, Debug)]
pub struct DiskRule<T = f64> {
    pub tensor: Vec<TensorBlock<T>>,
    pub scattered: Vec<ScatteredBlock>,
    pub orders: QuadOrders,
    fingerprint: u64,
}

/// Polar rectangle around a singular point off the origin.
#[derive(Clone, Copy, Debug)]
struct Patch {
    a: C64,
    m: f64,
    /// Radial half-width.
    delta: f64,
    /// Angular half-width.
    theta_half: f64,
}

/// Builds a rule with the default patch order.
pub fn build_disk_rule(spec: &WeightSpec, radial_order: usize, angular_order: usize) -> Result<DiskRule> {
    DiskRule::build(
        spec,
        QuadOrders { radial: radial_order, angular: angular_order, ..QuadOrders::default() },
    )
}

impl<T: Real> DiskRule<T> {
    /// Builds the rule. Multiprecision instances support smooth weights only.
    pub fn build(spec: &WeightSpec, orders: QuadOrders) -> Result<Self> {
        if orders.radial < 4 || orders.angular < 4 || orders.patch < 4 {
            return Err(Error::InvalidOrder(format!(
                "orders must be at least 4, got radial={} angular={} patch={}",
                orders.radial, orders.angular, orders.patch
            )));
        }
        let count = orders.angular.next_power_of_two();
        let singular: Vec<_> = spec.singularities.iter().filter(|s| s.is_singular()).copied().collect();
        if !singular.is_empty() && T::unit_roundoff() < f64::EPSILON / 4.0 {
            return Err(Error::Precondition(
                "multiprecision rules support smooth weights only (every m_k an even positive integer)".into(),
            ));
        }

        let mut tensor = Vec::new();
        let mut scattered = Vec::new();
        let mut breaks = vec![0.0, 1.0];
        let mut patches = Vec::new();

        // Origin patch: a disk whose radial rule carries the |z|^m factor.
        let origin = singular.iter().find(|s| s.a.norm() == 0.0);
        if let Some(s) = origin {
            let nearest = singular
                .iter()
                .filter(|t| t.a.norm() > 0.0)
                .map(|t| t.a.norm())
                .fold(1.0, f64::min);
            let r0 = nearest / 2.0;
            let rule = singular_radial(s.m + 1.0, orders.patch)?;
            let radii = rule.nodes.iter().map(|u| T::from_f64(r0 * u)).collect();
            let ring_weights =
                rule.nodes.iter().zip(&rule.weights).map(|(u, w)| T::from_f64(2.0 * r0 * r0 * w / u.powf(s.m))).collect();
            tensor.push(TensorBlock::new(radii, ring_weights, count));
            breaks.push(r0);
        }
        for s in singular.iter().filter(|s| s.a.norm() > 0.0) {
            let others = singular
                .iter()
                .filter(|t| t.a != s.a)
                .map(|t| (t.a - s.a).norm())
                .fold(f64::MAX, f64::min);
            let rho = s.a.norm();
            let d = others.min(1.0 - rho).min(rho);
            let delta = d / 4.0;
            let patch = Patch { a: s.a, m: s.m, delta, theta_half: delta / (rho + delta) };
            breaks.push(rho - delta);
            breaks.push(rho + delta);
            patches.push(patch);
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        let start = if origin.is_some() { breaks.iter().position(|&b| b > 0.0).expect("origin radius") } else { 0 };

        for w in breaks[start..].windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let n = if breaks.len() == 2 {
                orders.radial
            } else {
                ((1.5 * orders.radial as f64 * (hi - lo)).ceil() as usize).clamp(16, orders.radial)
            };
            let cut: Vec<&Patch> =
                patches.iter().filter(|p| p.a.norm() - p.delta < hi - 1e-15 && p.a.norm() + p.delta > lo + 1e-15).collect();
            if cut.is_empty() {
                let gl = gauss_legendre::<T>(n).mapped(&T::from_f64(lo), &T::from_f64(hi));
                let ring_weights = gl
                    .nodes
                    .iter()
                    .zip(&gl.weights)
                    .map(|(r, w)| T::from_f64(2.0) * w.clone() * r.clone())
                    .collect();
                tensor.push(TensorBlock::new(gl.nodes, ring_weights, count));
            } else {
                scattered.push(arc_band(lo, hi, n, orders.angular, &cut));
            }
        }
        for p in &patches {
            scattered.push(patch_block(p, orders.patch)?);
        }

        let mut rule = DiskRule { tensor, scattered, orders, fingerprint: 0 };
        rule.fingerprint = rule.compute_fingerprint();
        Ok(rule)
    }

    /// Digest of every node and weight; equal rules give equal digests.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    fn compute_fingerprint(&self) -> u64 {
        // FNV-1a over the bit patterns.
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |x: f64| {
            for b in x.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        for b in &self.tensor {
            eat(b.count as f64);
            for (r, w) in b.radii.iter().zip(&b.ring_weights) {
                eat(r.to_f64());
                eat(w.to_f64());
            }
        }
        for b in &self.scattered {
            for (z, w) in b.nodes.iter().zip(&b.weights) {
                eat(z.re);
                eat(z.im);
                eat(*w);
            }
        }
        h
    }

    pub fn len(&self) -> usize {
        self.tensor.iter().map(|b| b.radii.len() * b.count).sum::<usize>()
            + self.scattered.iter().map(|b| b.nodes.len()).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Visits every node with its weight, in a fixed order.
    pub fn for_each_node<E>(&self, mut f: impl FnMut(&Complex<T>, &T) -> Result<(), E>) -> Result<(), E> {
        for b in &self.tensor {
            let inv = T::one() / T::from_usize(b.count);
            for (r, rw) in b.radii.iter().zip(&b.ring_weights) {
                let w = rw.clone() * inv.clone();
                for l in 0..b.count {
                    let z = b.unit[l].clone().scale(r.clone());
                    f(&z, &w)?;
                }
            }
        }
        for b in &self.scattered {
            for (z, w) in b.nodes.iter().zip(&b.weights) {
                f(&lift::<T>(*z), &T::from_f64(*w))?;
            }
        }
        Ok(())
    }

    /// `Σ w_i f(z_i)`, summed ring by ring.
    pub fn integrate<E>(&self, mut f: impl FnMut(&Complex<T>) -> Result<Complex<T>, E>) -> Result<Complex<T>, E> {
        let mut total = Complex::<T>::zero();
        for b in &self.tensor {
            let inv = T::one() / T::from_usize(b.count);
            for (r, rw) in b.radii.iter().zip(&b.ring_weights) {
                let mut ring = Complex::<T>::zero();
                for l in 0..b.count {
                    ring += f(&b.unit[l].clone().scale(r.clone()))?;
                }
                total += ring.scale(rw.clone() * inv.clone());
            }
        }
        for b in &self.scattered {
            let mut part = Complex::<T>::zero();
            for (z, w) in b.nodes.iter().zip(&b.weights) {
                part += f(&lift::<T>(*z))?.scale(T::from_f64(*w));
            }
            total += part;
        }
        Ok(total)
    }
}

impl DiskRule<f64> {
    /// Flattened nodes and weights.
    pub fn nodes_and_weights(&self) -> (Vec<C64>, Vec<f64>) {
        let mut nodes = Vec::with_capacity(self.len());
        let mut weights = Vec::with_capacity(self.len());
        self.for_each_node::<()>(|z, w| {
            nodes.push(*z);
            weights.push(*w);
            Ok(())
        })
        .expect("infallible");
        (nodes, weights)
    }
}

/// `Σ w_i f(z_i)` over a double-precision rule.
pub fn integrate_disk<E>(rule: &DiskRule, f: impl FnMut(&C64) -> Result<C64, E>) -> Result<C64, E> {
    rule.integrate(f)
}

/// Rings `lo < ρ < hi` minus the angular windows of the patches crossing them,
/// with Gauss–Legendre in angle on each remaining arc.
fn arc_band(lo: f64, hi: f64, n_radial: usize, angular: usize, cut: &[&Patch]) -> ScatteredBlock {
    let mut windows: Vec<(f64, f64)> = cut
        .iter()
        .map(|p| {
            let start = (p.a.arg() - p.theta_half).rem_euclid(2.0 * PI);
            (start, start + 2.0 * p.theta_half)
        })
        .collect();
    windows.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angles"));
    let mut arcs = Vec::new();
    for (i, w) in windows.iter().enumerate() {
        let next_start = if i + 1 < windows.len() { windows[i + 1].0 } else { windows[0].0 + 2.0 * PI };
        if next_start > w.1 {
            arcs.push((w.1, next_start));
        }
    }
    let radial = gauss_legendre::<f64>(n_radial).mapped(&lo, &hi);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (t0, t1) in arcs {
        let n_ang = ((angular as f64 * (t1 - t0) / (2.0 * PI)).ceil() as usize + 8).max(8);
        let ang = gauss_legendre::<f64>(n_ang).mapped(&t0, &t1);
        for (r, wr) in radial.nodes.iter().zip(&radial.weights) {
            for (t, wt) in ang.nodes.iter().zip(&ang.weights) {
                nodes.push(C64::from_polar(*r, *t));
                weights.push(wr * wt * r / PI);
            }
        }
    }
    ScatteredBlock::new(nodes, weights)
}

/// Duffy-type rule on a polar rectangle: four triangles with apex at the
/// singular point, each carrying the radial rule for `u^{m+1}`.
fn patch_block(p: &Patch, order: usize) -> Result<ScatteredBlock> {
    let rho_a = p.a.norm();
    let theta_a = p.a.arg();
    let radial = singular_radial(p.m + 1.0, order)?;
    let along = gauss_legendre::<f64>(order);
    let (dx, dy) = (p.delta, p.theta_half);
    let corners = [(dx, -dy), (dx, dy), (-dx, dy), (-dx, -dy)];
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for k in 0..4 {
        let (x1, y1) = corners[k];
        let (x2, y2) = corners[(k + 1) % 4];
        let det = (x1 * (y2 - y1) - y1 * (x2 - x1)).abs();
        for (t, wt) in along.nodes.iter().zip(&along.weights) {
            let t = (1.0 + t) / 2.0;
            let wt = wt / 2.0;
            let ex = x1 + t * (x2 - x1);
            let ey = y1 + t * (y2 - y1);
            for (u, wu) in radial.nodes.iter().zip(&radial.weights) {
                let rho = rho_a + u * ex;
                let theta = theta_a + u * ey;
                nodes.push(C64::from_polar(rho, theta));
                weights.push(wu * wt * det * rho / (PI * u.powf(p.m)));
            }
        }
    }
    Ok(ScatteredBlock::new(nodes, weights))
}
