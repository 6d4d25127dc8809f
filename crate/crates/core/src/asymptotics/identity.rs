//! The Szegő–Bergman identity for `v(z) = e^z`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::orthosystem::{szego_monic, Oracle};
use crate::poly::Poly;
use crate::scalar::{cabs, Hp, Real, C64};
use crate::weight::{OuterPart, WeightSpec};

use super::report::{ConvergenceReport, Criterion};

fn is_exp_z(spec: &WeightSpec) -> bool {
    match &spec.outer {
        OuterPart::ExpPolynomial { g, scale } => {
            spec.singularities.is_empty()
                && *scale == 1.0
                && g.len() == 2
                && g[0].is_zero()
                && g[1] == C64::new(1.0, 0.0)
        }
        _ => false,
    }
}

/// `(ψ*_n + ψ*_n′)/conj(ψ_n(0))` for every `n ≤ n_max`, built in multiprecision
/// because `ψ_n(0)` decays faster than geometrically.
fn szego_side(outer: &OuterPart, n_max: usize, circle_count: usize) -> Result<Vec<(Poly<f64>, f64)>> {
    let sys = szego_monic::<Hp>(outer, n_max, circle_count)?;
    (0..=n_max)
        .map(|n| {
            let psi0 = sys.psi[n].coeffs[0].clone();
            let size = cabs(&psi0).to_f64();
            if size == 0.0 {
                return Err(Error::Precondition(format!("ψ_{n}(0) vanishes")));
            }
            let phi = sys.psi_star[n].add(&sys.psi_star[n].derivative());
            let inv = Complex::<Hp>::new(Hp::from_f64(1.0), Hp::zero()) / psi0.conj();
            Ok((phi.scale(&inv).to_f64(), size))
        })
        .collect()
}

/// `sup_grid |γ_n⁻¹p_n − (ψ*_n + ψ*_n′)/conj(ψ_n(0))|` for `n ≤ n_max`, comparing the
/// disk Bergman oracle against the circle Szegő oracle for `|e^z|²`.
pub fn exp_identity_report(
    spec: &WeightSpec,
    basis: &dyn Oracle,
    n_max: usize,
    circle_count: usize,
    grid: &[C64],
    tol: f64,
) -> Result<ConvergenceReport> {
    if !is_exp_z(spec) {
        return Err(Error::Precondition("the Szegő–Bergman identity holds for v(z) = e^z only".into()));
    }
    if n_max > basis.degree() {
        return Err(Error::DegreeOutOfRange { n: n_max, max: basis.degree() });
    }
    let szego = szego_side(&spec.outer, n_max, circle_count)?;
    let mut rep = ConvergenceReport::new("exp_identity");
    rep.series("residual", Criterion::Below { threshold: tol });
    let mut smallest_psi0 = f64::INFINITY;
    for (n, (rhs, psi0)) in szego.iter().enumerate() {
        smallest_psi0 = smallest_psi0.min(*psi0);
        let gamma = basis.gamma(n);
        let mut worst = (0.0, 0.0, -1.0);
        for z in grid {
            let lhs = basis.eval(n, *z) / gamma;
            let right = rhs.eval(z);
            let gap = (lhs - right).norm();
            if !(gap <= worst.2) {
                worst = (lhs.norm(), right.norm(), gap);
            }
        }
        rep.push("residual", n, worst.0, worst.1, worst.2);
    }
    rep.note(format!("{} grid points, {circle_count} circle nodes, min |psi_n(0)| = {smallest_psi0:e}", grid.len()));
    Ok(rep.finish())
}
