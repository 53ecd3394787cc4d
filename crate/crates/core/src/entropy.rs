//! Differential entropies (nats) and the quantities derived from them.

use crate::error::{Error, Result};
use crate::quad::{min_wigner, Density1D, WignerGrid};
use crate::scalar::Real;

/// Densities at or below this value contribute nothing to `−∫ ρ ln ρ`.
pub const DENSITY_FLOOR: f64 = 1e-300;

/// Default tolerance on negative Wigner values.
pub const DEFAULT_NEG_TOL: f64 = 1e-9;

/// Non-Gaussianities in `(−NONGAUSSIANITY_NOISE, 0)` are reported as zero.
pub const NONGAUSSIANITY_NOISE: f64 = 1e-9;

#[inline]
fn neg_p_ln_p<T: Real>(v: T, floor: T) -> T {
    if v > floor {
        -v * v.ln()
    } else {
        T::zero()
    }
}

/// `h = −∫ ρ ln ρ` by the trapezoid rule.
pub fn differential_entropy<T: Real>(d: &Density1D<T>) -> T {
    let floor = T::lit(DENSITY_FLOOR);
    let integrand: Vec<T> = d.values().iter().map(|&v| neg_p_ln_p(v, floor)).collect();
    d.grid().integrate(&integrand)
}

/// Joint entropy of a non-negative Wigner function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointEntropy<T: Real> {
    pub value: T,
    /// Smallest sampled value of `W`.
    pub min_wigner: T,
    /// `∬ |W|` over the region where `W < 0`, excluded from the integral.
    pub clipped_mass: T,
}

/// `h(x,p) = −∬ W ln W`.
///
/// Fails with [`Error::WignerNegative`] when `min W < −neg_tol`; values in
/// `[−neg_tol, 0)` are dropped and their mass recorded.
pub fn joint_entropy<T: Real>(w: &WignerGrid<T>, neg_tol: T) -> Result<JointEntropy<T>> {
    let min = min_wigner(w);
    if min < -neg_tol {
        return Err(Error::WignerNegative {
            min: min.as_f64(),
            tolerance: neg_tol.as_f64(),
        });
    }
    let floor = T::lit(DENSITY_FLOOR);
    let value = w.integrate_with(|v| neg_p_ln_p(v, floor));
    let clipped_mass = w.integrate_with(|v| if v < T::zero() { -v } else { T::zero() });
    Ok(JointEntropy {
        value,
        min_wigner: min,
        clipped_mass,
    })
}

/// `N = e^{2h}/(2πe)`.
pub fn entropy_power<T: Real>(h: T) -> T {
    (T::lit(2.0) * h).exp() / (T::two_pi() * T::e())
}

/// `½ ln(2πe·v)`.
pub fn gaussian_entropy_1d<T: Real>(variance: T) -> Result<T> {
    if !(variance > T::zero()) {
        return Err(Error::NonPositiveVariance(variance.as_f64()));
    }
    Ok((T::two_pi() * T::e() * variance).ln() / T::lit(2.0))
}

/// Relative entropy to the Gaussian of equal variance, `D = ½ ln(σ²/N)`.
pub fn nongaussianity<T: Real>(h: T, variance: T) -> T {
    let d = (variance / entropy_power(h)).ln() / T::lit(2.0);
    if d < T::zero() && d > -T::lit(NONGAUSSIANITY_NOISE) {
        T::zero()
    } else {
        d
    }
}

/// `I(x:p) = h(x) + h(p) − h(x,p)`.
pub fn mutual_information<T: Real>(hx: T, hp: T, hxp: T) -> T {
    hx + hp - hxp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{
        displace, extremal_passive_state, haar_random_state, mix, squeezed_vacuum, FockState,
        FockVector, GaussianUnitarySpec,
    };
    use crate::moments::covariance;
    use crate::quad::{marginal_p, marginal_x, wigner, Grid1D, DEFAULT_GRID_POINTS};
    use crate::scalar::c;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{E, PI};

    fn default_grid(state: &dyn FockState<f64>) -> Grid1D<f64> {
        Grid1D::for_levels(state.support() - 1, state.hbar(), DEFAULT_GRID_POINTS, 1.0).unwrap()
    }

    fn hx(state: &dyn FockState<f64>, g: &Grid1D<f64>) -> f64 {
        differential_entropy(&marginal_x(state, g).unwrap())
    }

    fn hp(state: &dyn FockState<f64>, g: &Grid1D<f64>) -> f64 {
        differential_entropy(&marginal_p(state, g).unwrap())
    }

    #[test]
    fn vacuum_marginal_entropy() {
        let v = FockVector::<f64>::vacuum(2, 1.0).unwrap();
        let g = default_grid(&v);
        assert_abs_diff_eq!(hx(&v, &g), 0.5 * (PI * E).ln(), epsilon = 1e-10);
        assert_abs_diff_eq!(0.5 * (PI * E).ln(), 1.07236, epsilon = 1e-5);
    }

    #[test]
    fn uniform_density_has_zero_entropy() {
        let g = Grid1D::new(0.0, 1.0, 1001).unwrap();
        let d = Density1D::new(g, vec![1.0; 1001]).unwrap();
        assert_abs_diff_eq!(differential_entropy(&d), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn single_photon_entropy_matches_refined_grid() {
        let one = FockVector::<f64>::fock(1, 2, 1.0).unwrap();
        let g = default_grid(&one);
        let fine = Grid1D::new(g.lo(), g.hi(), 16384).unwrap();
        let coarse = hx(&one, &g);
        assert_abs_diff_eq!(coarse, hx(&one, &fine), epsilon = 1e-6);
        assert!(coarse > 0.5 * (PI * E).ln());
    }

    #[test]
    fn vacuum_joint_entropy() {
        let v = FockVector::<f64>::vacuum(2, 1.0).unwrap();
        let g = Grid1D::for_levels(0, 1.0, 201, 1.0).unwrap();
        let w = wigner(&v, &g, &g).unwrap();
        let j = joint_entropy(&w, DEFAULT_NEG_TOL).unwrap();
        assert_abs_diff_eq!(j.value, (PI * E).ln(), epsilon = 1e-8);
        assert_abs_diff_eq!((PI * E).ln(), 2.14473, epsilon = 1e-5);
    }

    #[test]
    fn single_photon_joint_entropy_is_rejected() {
        let one = FockVector::<f64>::fock(1, 2, 1.0).unwrap();
        let g = Grid1D::for_levels(1, 1.0, 121, 1.0).unwrap();
        let w = wigner(&one, &g, &g).unwrap();
        match joint_entropy(&w, DEFAULT_NEG_TOL) {
            Err(Error::WignerNegative { min, .. }) => assert_abs_diff_eq!(min, -1.0 / PI, epsilon = 1e-6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn passive_joint_entropy_is_above_bound() {
        let s = extremal_passive_state::<f64>(5, 8, 1.0).unwrap();
        let g = Grid1D::for_levels(5, 1.0, 201, 1.0).unwrap();
        let w = wigner(&s, &g, &g).unwrap();
        let j = joint_entropy(&w, DEFAULT_NEG_TOL).unwrap();
        assert!(j.value >= (PI * E).ln() - 1e-4);
        let gl = default_grid(&s);
        let i = mutual_information(hx(&s, &gl), hp(&s, &gl), j.value);
        assert!(i >= -1e-4, "mutual information {i}");
    }

    #[test]
    fn opposed_squeezing_mixture_has_mutual_information() {
        let a = squeezed_vacuum(GaussianUnitarySpec::rotated(0.5, 0.0), 64, 1.0).unwrap();
        let b = squeezed_vacuum(GaussianUnitarySpec::rotated(0.5, PI / 2.0), 64, 1.0).unwrap();
        let rho = mix(&[a.to_density(), b.to_density()], &[0.5, 0.5]).unwrap();
        let g = Grid1D::for_levels(64, 1.0, 161, 1.0).unwrap();
        let w = wigner(&rho, &g, &g).unwrap();
        let j = joint_entropy(&w, DEFAULT_NEG_TOL).unwrap();
        let gl = default_grid(&rho);
        let i = mutual_information(hx(&rho, &gl), hp(&rho, &gl), j.value);
        assert!(i > 1e-3, "mutual information {i}");
    }

    #[test]
    fn entropy_power_round_trip() {
        for &v in &[0.1, 0.5, 2.0, 7.3] {
            let h = gaussian_entropy_1d(v).unwrap();
            assert_abs_diff_eq!(entropy_power(h), v, epsilon = 1e-13 * v);
        }
        assert_abs_diff_eq!(entropy_power(0.0), 0.058550, epsilon = 1e-6);
        assert_abs_diff_eq!(gaussian_entropy_1d(1.0 / (2.0 * PI * E)).unwrap(), 0.0, epsilon = 1e-15);
        let v = (2.0 * 1.5f64.ln()).cosh() / 2.0;
        assert_abs_diff_eq!(gaussian_entropy_1d(v).unwrap(), 1.22139, epsilon = 1e-5);
        assert!(gaussian_entropy_1d(0.0).is_err());
    }

    #[test]
    fn single_photon_nongaussianity() {
        let one = FockVector::<f64>::fock(1, 2, 1.0).unwrap();
        let g = default_grid(&one);
        let h = hx(&one, &g);
        let var = covariance(&one).unwrap().sxx;
        assert_abs_diff_eq!(var, 1.5, epsilon = 1e-14);
        assert!(entropy_power(h) < var);
        let d = nongaussianity(h, var);
        assert!(d > 0.0);
        assert_abs_diff_eq!(var, entropy_power(h) * (2.0 * d).exp(), epsilon = 1e-10);
    }

    #[test]
    fn gaussian_marginal_has_no_nongaussianity() {
        let s = squeezed_vacuum(GaussianUnitarySpec::rotated(0.4, 0.7), 64, 1.0).unwrap();
        let g = default_grid(&s);
        let cov = covariance(&s).unwrap();
        assert_abs_diff_eq!(nongaussianity(hx(&s, &g), cov.sxx), 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(nongaussianity(hp(&s, &g), cov.spp), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn noise_clamp() {
        let h = gaussian_entropy_1d(0.5).unwrap();
        assert_eq!(nongaussianity(h + 1e-12, 0.5), 0.0);
        assert!(nongaussianity(h + 1e-3, 0.5) < -1e-4);
    }

    #[test]
    fn displacement_leaves_entropies_unchanged() {
        let s = haar_random_state::<f64>(4, 30, 1.0, 5).unwrap();
        let d = displace(&s, c(0.5, 0.3)).unwrap();
        let g = Grid1D::for_levels(30, 1.0, DEFAULT_GRID_POINTS, 1.3).unwrap();
        assert_abs_diff_eq!(hx(&s, &g), hx(&d, &g), epsilon = 1e-6);
        assert_abs_diff_eq!(hp(&s, &g), hp(&d, &g), epsilon = 1e-6);
    }

    #[test]
    fn single_precision_entropy() {
        let v = FockVector::<f32>::vacuum(2, 1.0).unwrap();
        let g = Grid1D::<f32>::for_levels(2, 1.0, 512, 1.0).unwrap();
        let h = differential_entropy(&marginal_x(&v, &g).unwrap());
        assert!((h - 0.5 * (std::f32::consts::PI * std::f32::consts::E).ln()).abs() < 1e-4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn maximum_entropy_and_entropy_power_bounds(seed in 0u64..100_000, dim in 1usize..7) {
            let s = haar_random_state::<f64>(dim, 8, 1.0, seed).unwrap();
            let g = default_grid(&s);
            let cov = covariance(&s).unwrap();
            let (ex, ep) = (hx(&s, &g), hp(&s, &g));
            prop_assert!(ex <= gaussian_entropy_1d(cov.sxx).unwrap() + 1e-7);
            prop_assert!(ep <= gaussian_entropy_1d(cov.spp).unwrap() + 1e-7);
            prop_assert!(entropy_power(ex) <= cov.sxx + 1e-7);
            prop_assert!(entropy_power(ep) <= cov.spp + 1e-7);
        }

        #[test]
        fn grid_doubling_is_stable(seed in 0u64..100_000) {
            let s = haar_random_state::<f64>(4, 8, 1.0, seed).unwrap();
            let g = default_grid(&s);
            prop_assert!((hx(&s, &g) - hx(&s, &g.refined())).abs() < 1e-6);
            prop_assert!((hp(&s, &g) - hp(&s, &g.refined())).abs() < 1e-6);
        }
    }
}
