//! Discrete Gram matrix of the scaled monomials `e_j = √(j+1) z^j`.
//!
//! The `e_j` are orthonormal for `w ≡ 1`, and the weighted norm is equivalent
//! to the unweighted one, so this matrix stays well conditioned at every degree.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::Result;
use crate::quadrature::fft::Fft;
use crate::quadrature::DiskRule;
use crate::scalar::{lift, Real, C64};
use crate::weight::WeightSpec;

/// Dense Hermitian matrix stored row-major.
#[derive(Clone, Debug)]
pub struct Gram<T> {
    pub dim: usize,
    pub entries: Vec<Complex<T>>,
}

impl<T: Real> Gram<T> {
    pub fn get(&self, j: usize, k: usize) -> &Complex<T> {
        &self.entries[j * self.dim + k]
    }
}

/// `√(j+1)` for `j ≤ n`.
pub fn monomial_scales<T: Real>(n: usize) -> Vec<T> {
    (0..=n).map(|j| T::from_usize(j + 1).sqrt()).collect()
}

/// `G_{jk} = Σ_i W_i w(z_i) e_j(z_i) conj(e_k(z_i))` for `j, k ≤ n`.
///
/// Ring blocks use one FFT of the weight per ring; scattered blocks are summed
/// directly, truncated where `r_max^j` can no longer contribute.
pub fn gram_matrix<T: Real>(spec: &WeightSpec, rule: &DiskRule<T>, n: usize) -> Result<Gram<T>> {
    let dim = n + 1;
    // Upper triangle accumulated without the e_j scales.
    let mut acc = vec![Complex::<T>::zero(); dim * dim];

    for block in &rule.tensor {
        let m = block.count;
        let fft = Fft::<T>::new(m);
        let inv_m = T::one() / T::from_usize(m);
        let mut values = vec![Complex::<T>::zero(); m];
        let mut powers = vec![T::zero(); 2 * n + 1];
        for (r, rw) in block.radii.iter().zip(&block.ring_weights) {
            for (l, slot) in values.iter_mut().enumerate() {
                let z = block.unit(l).clone().scale(r.clone());
                *slot = Complex::new(spec.eval_weight(&z)?, T::zero());
            }
            fft.forward(&mut values);
            powers[0] = rw.clone() * inv_m.clone();
            for p in 1..powers.len() {
                powers[p] = powers[p - 1].clone() * r.clone();
            }
            // Σ_l w_l e^{i(j−k)θ_l} = X[(k−j) mod m]
            for d in 0..dim {
                let x = &values[d % m];
                for j in 0..dim - d {
                    let slot = &mut acc[j * dim + j + d];
                    let t = &powers[2 * j + d];
                    slot.re.mul_add_assign(t, &x.re);
                    slot.im.mul_add_assign(t, &x.im);
                }
            }
        }
    }

    for block in &rule.scattered {
        let cutoff = truncation_degree(block.r_max, n);
        let mut pw = vec![C64::zero(); cutoff + 1];
        let mut local = vec![C64::zero(); (cutoff + 1) * (cutoff + 1)];
        for (z, w) in block.nodes.iter().zip(&block.weights) {
            let c = w * spec.eval_weight(z)?;
            pw[0] = C64::new(c.sqrt(), 0.0);
            for j in 1..=cutoff {
                pw[j] = pw[j - 1] * z;
            }
            for j in 0..=cutoff {
                let a = pw[j];
                for k in j..=cutoff {
                    local[j * (cutoff + 1) + k] += a * pw[k].conj();
                }
            }
        }
        for j in 0..=cutoff {
            for k in j..=cutoff {
                acc[j * dim + k] += lift::<T>(local[j * (cutoff + 1) + k]);
            }
        }
    }

    let scales = monomial_scales::<T>(n);
    let mut entries = vec![Complex::<T>::zero(); dim * dim];
    for j in 0..dim {
        for k in j..dim {
            let v = acc[j * dim + k].clone().scale(scales[j].clone() * scales[k].clone());
            entries[k * dim + j] = v.conj();
            entries[j * dim + k] = v;
        }
    }
    Ok(Gram { dim, entries })
}

/// Smallest degree past which `(j+1) r^{2j}` is negligible, capped at `n`.
fn truncation_degree(r_max: f64, n: usize) -> usize {
    if r_max <= 0.0 {
        return 0;
    }
    (0..=n).find(|&j| (j as f64 + 1.0) * r_max.powi(2 * j as i32) < 1e-34).unwrap_or(n)
}
