//! The quadratic operator `Â = ½ r⃗ᵀγ⁻¹r⃗` and the eigenvalue check for
//! squeezed vacua.

use crate::error::{Error, Result};
use crate::fock::{quadrature_matrices, squeezed_vacuum, FockState, GaussianUnitarySpec};
use crate::moments::{covariance, CovarianceMatrix};
use crate::scalar::{cr, norm_sqr, CMatrix, CVector, Real};

/// `Â = (X²σp² + P²σx² − {X,P}σxp) / (2|γ|)` with `X = x̂ − x̄`, `P = p̂ − p̄`,
/// on levels `0..=nmax`.
///
/// Products are formed on two extra levels, so `Â` is the exact projection
/// of the untruncated operator.
pub fn a_operator<T: Real>(g: &CovarianceMatrix<T>, nmax: usize) -> Result<CMatrix<T>> {
    let det = g.det();
    if !(det > T::zero()) {
        return Err(Error::DegenerateCovariance(det.as_f64()));
    }
    let dim = nmax + 1;
    let (x, p) = quadrature_matrices::<T>(dim + 2, g.hbar);
    let eye = CMatrix::<T>::identity(dim + 2, dim + 2);
    let xc = &x - &eye * cr(g.mean[0]);
    let pc = &p - &eye * cr(g.mean[1]);
    let xx = &xc * &xc;
    let pp = &pc * &pc;
    let anti = &xc * &pc + &pc * &xc;
    let scale = T::one() / (T::lit(2.0) * det);
    let a = (xx * cr(g.spp) + pp * cr(g.sxx) - anti * cr(g.sxp)) * cr(scale);
    let a = a.view((0, 0), (dim, dim)).into_owned();
    Ok((&a + a.adjoint()) * cr(T::lit(0.5)))
}

/// Outcome of [`eigencheck`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenReport<T: Real> {
    /// `‖(Âψ − ψ)_n‖` over `n ≤ nmax − 2`, the rows on which the truncated
    /// operator acts exactly.
    pub residual: T,
    /// `‖Âψ − ψ‖` over all rows; dominated by the two highest levels.
    pub boundary_residual: T,
    /// `⟨ψ|Â|ψ⟩`.
    pub expectation: T,
    /// Largest entry of `γ_measured − M γ_vac Mᵀ`.
    pub covariance_discrepancy: T,
    pub nmax: usize,
}

/// Covariance of `S(z)|0⟩` from the canonical transform,
/// `γ = (ħ/2)[cosh 2r ∓ cos φ sinh 2r, −sin φ sinh 2r]`.
pub fn squeezed_covariance<T: Real>(r: T, phi: T, hbar: T) -> (T, T, T) {
    let h = hbar / T::lit(2.0);
    let (c2, s2) = ((T::lit(2.0) * r).cosh(), (T::lit(2.0) * r).sinh());
    let (sp, cp) = phi.sin_cos();
    (h * (c2 - cp * s2), h * (c2 + cp * s2), -h * sp * s2)
}

/// Builds the squeezed vacuum of `spec`, its measured covariance and `Â`, and
/// reports how far `ψ` is from an eigenvector of `Â` with eigenvalue 1.
pub fn eigencheck<T: Real>(spec: GaussianUnitarySpec<T>, nmax: usize, hbar: T) -> Result<EigenReport<T>> {
    if nmax < 2 {
        return Err(Error::InvalidDimension(format!("need nmax ≥ 2, got {nmax}")));
    }
    let psi = squeezed_vacuum(spec, nmax, hbar)?;
    let g = covariance(&psi)?;
    let a = a_operator(&g, nmax)?;
    let v = psi.amplitudes();
    let diff: CVector<T> = &a * v - v;
    let norm = |range: std::ops::Range<usize>| range.fold(T::zero(), |s, i| s + norm_sqr(diff[i])).sqrt();
    let (xx, pp, xp) = squeezed_covariance(spec.r, spec.phi, hbar);
    let discrepancy = (g.sxx - xx).abs().max((g.spp - pp).abs()).max((g.sxp - xp).abs());
    Ok(EigenReport {
        residual: norm(0..nmax - 1),
        boundary_residual: norm(0..nmax + 1),
        expectation: psi.expect(&a).re,
        covariance_discrepancy: discrepancy,
        nmax,
    })
}
