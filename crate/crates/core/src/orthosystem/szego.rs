//! Monic orthogonal polynomials on the unit circle.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{cabs, root_of_unity, Real};
use crate::weight::OuterPart;

/// Monic `ψ_0..ψ_N` and their reversals `ψ*_n(z) = z^n conj(ψ_n(1/z̄))`.
#[derive(Clone, Debug)]
pub struct SzegoSystem<T = f64> {
    pub psi: Vec<Poly<T>>,
    pub psi_star: Vec<Poly<T>>,
}

/// Discrete inner product `Σ (2π/M) u(ζ_l) f(ζ_l) conj(g(ζ_l))` on `M` equispaced nodes.
struct CircleProduct<T> {
    nodes: Vec<Complex<T>>,
    weights: Vec<T>,
}

impl<T: Real> CircleProduct<T> {
    fn new(outer: &OuterPart, count: usize) -> Result<Self> {
        if count < 16 || !count.is_multiple_of(2) {
            return Err(Error::InvalidOrder(format!("circle node count {count} must be even and at least 16")));
        }
        let step = T::pi() * T::from_f64(2.0) / T::from_usize(count);
        let nodes: Vec<Complex<T>> = (0..count).map(|l| root_of_unity(l, count)).collect();
        let weights = nodes
            .iter()
            .map(|z| outer.eval(z).map(|v| step.clone() * v.norm_sqr()))
            .collect::<Result<Vec<_>>>()?;
        Ok(CircleProduct { nodes, weights })
    }

    fn inner(&self, f: &Poly<T>, g: &Poly<T>) -> Complex<T> {
        let mut acc = Complex::<T>::zero();
        for (z, w) in self.nodes.iter().zip(&self.weights) {
            acc += (f.eval(z) * g.eval(z).conj()).scale(w.clone());
        }
        acc
    }
}

/// Szegő recursion `ψ_{n+1} = zψ_n − c_n ψ*_n` with `c_n` chosen so `ψ_{n+1} ⊥ 1`.
pub fn szego_monic<T: Real>(outer: &OuterPart, n: usize, circle_count: usize) -> Result<SzegoSystem<T>> {
    if circle_count <= 2 * n + 2 {
        return Err(Error::InvalidOrder(format!("circle count {circle_count} too small for degree {n}")));
    }
    let ip = CircleProduct::<T>::new(outer, circle_count)?;
    let one = Poly::new(vec![Complex::<T>::one()]);
    let mut psi = vec![one.clone()];
    let mut psi_star = vec![one.clone()];
    for k in 0..n {
        let zpsi = Poly::new(std::iter::once(Complex::zero()).chain(psi[k].coeffs.iter().cloned()).collect());
        let denom = ip.inner(&psi_star[k], &one);
        let size = cabs(&denom).to_f64();
        if !(size > 1e-300 && size.is_finite()) {
            return Err(Error::SingularGram { degree: k + 1 });
        }
        let c = ip.inner(&zpsi, &one) / denom;
        let next = zpsi.add(&psi_star[k].scale(&-c));
        psi_star.push(next.reversed_conj(k + 1));
        psi.push(next);
    }
    Ok(SzegoSystem { psi, psi_star })
}
