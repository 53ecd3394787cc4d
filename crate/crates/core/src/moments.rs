//! First and second moments of the quadratures.

use crate::error::{Error, Result};
use crate::fock::{quadrature_matrices, FockState};
use crate::scalar::{CMatrix, Real};

/// Single-mode covariance matrix with the mean vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix<T: Real> {
    pub mean: [T; 2],
    pub sxx: T,
    pub spp: T,
    pub sxp: T,
    pub hbar: T,
}

impl<T: Real> CovarianceMatrix<T> {
    pub fn new(sxx: T, spp: T, sxp: T, hbar: T) -> Result<Self> {
        Self::with_mean([T::zero(), T::zero()], sxx, spp, sxp, hbar)
    }

    pub fn with_mean(mean: [T; 2], sxx: T, spp: T, sxp: T, hbar: T) -> Result<Self> {
        if !(sxx > T::zero()) {
            return Err(Error::NonPositiveVariance(sxx.as_f64()));
        }
        if !(spp > T::zero()) {
            return Err(Error::NonPositiveVariance(spp.as_f64()));
        }
        if !(hbar > T::zero()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self {
            mean,
            sxx,
            spp,
            sxp,
            hbar,
        })
    }

    /// Vacuum covariance `(ħ/2)·I`.
    pub fn vacuum(hbar: T) -> Self {
        let h = hbar / T::lit(2.0);
        Self {
            mean: [T::zero(), T::zero()],
            sxx: h,
            spp: h,
            sxp: T::zero(),
            hbar,
        }
    }

    /// `|γ| = σx²σp² − σxp²`.
    pub fn det(&self) -> T {
        self.sxx * self.spp - self.sxp * self.sxp
    }

    /// Covariance of `x_θ = cos θ x + sin θ p`, `p_θ = −sin θ x + cos θ p`.
    pub fn rotate(&self, theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        let sxx = c * c * self.sxx + s * s * self.spp + T::lit(2.0) * s * c * self.sxp;
        let spp = s * s * self.sxx + c * c * self.spp - T::lit(2.0) * s * c * self.sxp;
        let sxp = s * c * (self.spp - self.sxx) + (c * c - s * s) * self.sxp;
        let mean = [
            c * self.mean[0] + s * self.mean[1],
            -s * self.mean[0] + c * self.mean[1],
        ];
        Self {
            mean,
            sxx,
            spp,
            sxp,
            hbar: self.hbar,
        }
    }

    /// Angle at which the rotated cross moment vanishes; `x_θ` then carries
    /// the larger eigenvalue.
    pub fn principal_angle(&self) -> T {
        (T::lit(2.0) * self.sxp).atan2(self.sxx - self.spp) / T::lit(2.0)
    }

    /// Eigenvalues of `γ`, largest first.
    pub fn eigenvalues(&self) -> (T, T) {
        let half_tr = (self.sxx + self.spp) / T::lit(2.0);
        let d = ((self.sxx - self.spp) * (self.sxx - self.spp) / T::lit(4.0) + self.sxp * self.sxp).sqrt();
        (half_tr + d, half_tr - d)
    }

    /// `ρ = σxp / (σx σp)`.
    pub fn correlation(&self) -> T {
        self.sxp / (self.sxx * self.spp).sqrt()
    }

    /// Schrödinger–Robertson condition `|γ| ≥ (ħ/2)²` within `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        let h = self.hbar / T::lit(2.0);
        self.det() >= h * h - T::tol(tol)
    }
}

/// `ρ = σxp / (σx σp)`.
pub fn correlation_coefficient<T: Real>(g: &CovarianceMatrix<T>) -> T {
    g.correlation()
}

/// Covariance of the rotated quadrature pair.
pub fn rotate_covariance<T: Real>(g: &CovarianceMatrix<T>, theta: T) -> CovarianceMatrix<T> {
    g.rotate(theta)
}

/// `I_G = ½ ln(σx²σp²/|γ|)`.
pub fn gaussian_mutual_information<T: Real>(g: &CovarianceMatrix<T>) -> Result<T> {
    let det = g.det();
    if !(det > T::zero()) {
        return Err(Error::DegenerateCovariance(det.as_f64()));
    }
    let ig = (g.sxx * g.spp / det).ln() / T::lit(2.0);
    Ok(ig.max(T::zero()))
}

/// `I_G = −½ ln(1 − ρ²)`.
pub fn gaussian_mutual_information_rho<T: Real>(rho: T) -> Result<T> {
    let q = T::one() - rho * rho;
    if !(q > T::zero()) {
        return Err(Error::DegenerateCovariance(q.as_f64()));
    }
    Ok(-q.ln() / T::lit(2.0))
}

/// `μ_G = (ħ/2)/√|γ|`.
pub fn gaussian_purity<T: Real>(g: &CovarianceMatrix<T>) -> Result<T> {
    let h = g.hbar / T::lit(2.0);
    let det = g.det();
    if det < h * h - T::tol(1e-9) {
        return Err(Error::Unphysical(format!(
            "|γ| = {det} below (ħ/2)² = {}",
            h * h
        )));
    }
    Ok((h / det.sqrt()).min(T::one()))
}

/// `x̂`, `p̂`, `x̂²`, `p̂²` and `½{x̂, p̂}` restricted to `dim` levels.
///
/// Products are formed on `dim + 2` levels before slicing, so each block
/// equals the projection of the exact operator.
#[derive(Debug, Clone)]
pub struct MomentOperators<T: Real> {
    pub x: CMatrix<T>,
    pub p: CMatrix<T>,
    pub xx: CMatrix<T>,
    pub pp: CMatrix<T>,
    pub xp_sym: CMatrix<T>,
}

impl<T: Real> MomentOperators<T> {
    pub fn new(dim: usize, hbar: T) -> Self {
        let (x, p) = quadrature_matrices::<T>(dim + 2, hbar);
        let cut = |m: CMatrix<T>| m.view((0, 0), (dim, dim)).into_owned();
        let half = T::lit(0.5);
        let xx = cut(&x * &x);
        let pp = cut(&p * &p);
        let xp_sym = cut((&x * &p + &p * &x).map(|z| z * half));
        Self {
            x: cut(x),
            p: cut(p),
            xx,
            pp,
            xp_sym,
        }
    }
}

/// Central second moments `σx² = ⟨x̂²⟩ − x̄²`, `σxp = ⟨{x̂,p̂}⟩/2 − x̄p̄`.
pub fn covariance<S, T>(state: &S) -> Result<CovarianceMatrix<T>>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    let ops = MomentOperators::new(state.dim(), state.hbar());
    let mx = state.expect(&ops.x).re;
    let mp = state.expect(&ops.p).re;
    let sxx = state.expect(&ops.xx).re - mx * mx;
    let spp = state.expect(&ops.pp).re - mp * mp;
    let sxp = state.expect(&ops.xp_sym).re - mx * mp;
    CovarianceMatrix::with_mean([mx, mp], sxx, spp, sxp, state.hbar())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{
        displace, extremal_passive_state, haar_random_state, squeezed_vacuum, FockDensity, FockVector,
        GaussianUnitarySpec,
    };
    use crate::scalar::c;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn squeezed_oracle(r: f64, theta: f64) -> (f64, f64, f64) {
        // M γ_vac Mᵀ with M = R(θ) diag(e^{−r}, e^{r}) R(−θ)
        let (s, c) = theta.sin_cos();
        let m = |i: usize, j: usize| {
            let d = [(-r).exp(), r.exp()];
            let rot = [[c, -s], [s, c]];
            (0..2).map(|k| rot[i][k] * d[k] * rot[j][k]).sum::<f64>()
        };
        let g = |i: usize, j: usize| 0.5 * (0..2).map(|k| m(i, k) * m(j, k)).sum::<f64>();
        (g(0, 0), g(1, 1), g(0, 1))
    }

    #[test]
    fn vacuum_and_single_photon() {
        let g = covariance(&FockVector::<f64>::vacuum(4, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(g.sxx, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(g.spp, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(g.sxp, 0.0, epsilon = 1e-14);
        let g = covariance(&FockDensity::<f64>::diagonal(&[0.0, 1.0], 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(g.sxx, 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(g.spp, 1.5, epsilon = 1e-14);
    }

    #[test]
    fn covariance_of_highest_level_is_exact() {
        // ⟨n|x̂²|n⟩ = ħ(n + ½) even when n is the last retained level
        let g = covariance(&FockVector::<f64>::fock(7, 7, 2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(g.sxx, 15.0, epsilon = 1e-12);
    }

    #[test]
    fn rotated_squeezed_matches_canonical_transform() {
        let r = 1.5f64.ln();
        for &theta in &[0.0, PI / 8.0, PI / 4.0, 1.0] {
            let s = squeezed_vacuum(GaussianUnitarySpec::rotated(r, theta), 64, 1.0).unwrap();
            let g = covariance(&s).unwrap();
            let (xx, pp, xp) = squeezed_oracle(r, theta);
            assert_abs_diff_eq!(g.sxx, xx, epsilon = 1e-9);
            assert_abs_diff_eq!(g.spp, pp, epsilon = 1e-9);
            assert_abs_diff_eq!(g.sxp, xp, epsilon = 1e-9);
            assert_abs_diff_eq!(g.det(), 0.25, epsilon = 1e-9);
        }
        let s = squeezed_vacuum(GaussianUnitarySpec::rotated(r, PI / 4.0), 64, 1.0).unwrap();
        let g = covariance(&s).unwrap();
        assert_abs_diff_eq!(g.sxx, 0.673611, epsilon = 1e-6);
        assert_abs_diff_eq!(g.sxp, -0.451389, epsilon = 1e-6);
    }

    #[test]
    fn moments_of_superposition() {
        // (|0⟩ + i|1⟩)/√2: p̄ = 1/√2, x̄ = 0
        let v = crate::fock::amplitudes::<f64>(&[(1.0, 0.0), (0.0, 1.0)], 2);
        let s = FockVector::from_unnormalized(v, 1.0).unwrap();
        let g = covariance(&s).unwrap();
        assert_abs_diff_eq!(g.mean[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.mean[1], 0.5f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(g.sxx, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.spp, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn principal_rotation() {
        let s = 1.5f64;
        let r = s.ln();
        let st = squeezed_vacuum(GaussianUnitarySpec::rotated(r, PI / 4.0), 64, 1.0).unwrap();
        let g = covariance(&st).unwrap();
        let q = g.rotate(g.principal_angle());
        assert_abs_diff_eq!(q.sxp, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(q.sxx, s * s / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(q.spp, 1.0 / (2.0 * s * s), epsilon = 1e-9);
        let (l1, l2) = g.eigenvalues();
        assert_abs_diff_eq!(l1, q.sxx, epsilon = 1e-12);
        assert_abs_diff_eq!(l2, q.spp, epsilon = 1e-12);
        assert_eq!(g.rotate(0.0), g);
    }

    #[test]
    fn correlation_and_gaussian_information() {
        let r = 1.5f64.ln();
        let st = squeezed_vacuum(GaussianUnitarySpec::rotated(r, PI / 4.0), 64, 1.0).unwrap();
        let g = covariance(&st).unwrap();
        assert_abs_diff_eq!(g.correlation().abs(), (2.0 * r).tanh(), epsilon = 1e-9);
        assert_abs_diff_eq!(g.correlation().abs(), 0.67010, epsilon = 1e-5);
        let ig = gaussian_mutual_information(&g).unwrap();
        assert_abs_diff_eq!(ig, (2.0 * r).cosh().ln(), epsilon = 1e-9);
        assert_abs_diff_eq!(ig, 0.29805, epsilon = 1e-5);
        let vac = CovarianceMatrix::vacuum(1.0);
        assert_eq!(gaussian_mutual_information(&vac).unwrap(), 0.0);
        assert_eq!(correlation_coefficient(&vac), 0.0);
    }

    #[test]
    fn purity() {
        assert_abs_diff_eq!(gaussian_purity(&CovarianceMatrix::vacuum(1.0)).unwrap(), 1.0);
        let thermal = CovarianceMatrix::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(gaussian_purity(&thermal).unwrap(), 0.5);
        let bad = CovarianceMatrix::new(0.1, 0.1, 0.0, 1.0).unwrap();
        assert!(matches!(gaussian_purity(&bad), Err(Error::Unphysical(_))));
    }

    #[test]
    fn purity_and_information_forms_agree() {
        // h_G(x) + h_G(p) + ln μ_G = ln(πeħ) + I_G
        let g = CovarianceMatrix::new(1.3, 0.9, 0.4, 1.0).unwrap();
        let hg = |v: f64| 0.5 * (2.0 * PI * std::f64::consts::E * v).ln();
        let lhs = hg(g.sxx) + hg(g.spp) + gaussian_purity(&g).unwrap().ln();
        let rhs = (PI * std::f64::consts::E).ln() + gaussian_mutual_information(&g).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(CovarianceMatrix::<f64>::new(0.0, 1.0, 0.0, 1.0).is_err());
        let g = CovarianceMatrix::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(gaussian_mutual_information(&g), Err(Error::DegenerateCovariance(_))));
        assert!(gaussian_mutual_information_rho(1.0f64).is_err());
    }

    #[test]
    fn displacement_leaves_covariance_invariant() {
        let s = squeezed_vacuum(GaussianUnitarySpec::rotated(0.3, 0.4), 48, 1.0).unwrap();
        let d = displace(&s, c(0.4, -0.2)).unwrap();
        let (a, b) = (covariance(&s).unwrap(), covariance(&d).unwrap());
        assert_abs_diff_eq!(a.sxx, b.sxx, epsilon = 1e-9);
        assert_abs_diff_eq!(a.spp, b.spp, epsilon = 1e-9);
        assert_abs_diff_eq!(a.sxp, b.sxp, epsilon = 1e-9);
        assert_abs_diff_eq!(b.mean[0], 2f64.sqrt() * 0.4, epsilon = 1e-9);
    }

    #[test]
    fn passive_states_have_no_cross_moment() {
        for n in 0..6 {
            let g = covariance(&extremal_passive_state::<f64>(n, 8, 1.0).unwrap()).unwrap();
            assert_abs_diff_eq!(g.sxp, 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(g.sxx, 0.5 + n as f64 / 2.0, epsilon = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn haar_states_obey_schrodinger_robertson(seed in 0u64..10_000, dim in 1usize..8) {
            let s = haar_random_state::<f64>(dim, 10, 1.0, seed).unwrap();
            let g = covariance(&s).unwrap();
            prop_assert!(g.is_physical(1e-9));
            prop_assert!(g.correlation().abs() < 1.0);
        }

        #[test]
        fn rotation_preserves_determinant(
            sxx in 0.1f64..5.0, spp in 0.1f64..5.0, k in -0.99f64..0.99, theta in -4.0f64..4.0
        ) {
            let sxp = k * (sxx * spp).sqrt();
            let g = CovarianceMatrix::new(sxx, spp, sxp, 1.0).unwrap();
            let q = g.rotate(theta);
            prop_assert!((q.det() - g.det()).abs() < 1e-12 * (1.0 + g.det()));
            let p = g.rotate(g.principal_angle());
            prop_assert!(p.sxp.abs() < 1e-10);
        }

        #[test]
        fn information_forms_agree(
            sxx in 0.1f64..5.0, spp in 0.1f64..5.0, k in -0.99f64..0.99
        ) {
            let g = CovarianceMatrix::new(sxx, spp, k * (sxx * spp).sqrt(), 1.0).unwrap();
            let a = gaussian_mutual_information(&g).unwrap();
            let b = gaussian_mutual_information_rho(g.correlation()).unwrap();
            prop_assert!((a - b).abs() < 1e-12 * (1.0 + a));
            prop_assert!(a >= 0.0);
        }
    }
}
