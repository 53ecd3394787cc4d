//! n-mode Gaussian states in closed form.
//!
//! Phase-space vectors use the interleaved ordering `(x₁, p₁, …, xₙ, pₙ)`.
//! [`to_block_order`] converts to `(x₁…xₙ, p₁…pₙ)`, the ordering in which
//! the reduced blocks `γ_x` and `γ_p` are diagonal sub-blocks.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::{Distribution, Uniform};

use crate::entropy::entropy_power;
use crate::error::{Error, Result};
use crate::fock::{haar_unitary, trial_rng};
use crate::relations::{ChainLink, ChainReport, RelationVerdict, CLOSED_FORM_SAT_TOL};
use crate::scalar::{ln_pi_e_hbar, CMatrix, Real, C};

/// Tolerance on `γ + i(ħ/2)Ω ⪰ 0`.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Tolerance on `SΩSᵀ = Ω`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Symplectic form for `n` interleaved modes.
pub fn omega<T: Real>(n: usize) -> DMatrix<T> {
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        w[(2 * k, 2 * k + 1)] = T::one();
        w[(2 * k + 1, 2 * k)] = -T::one();
    }
    w
}

/// Permutation `P` with `P·r_interleaved = r_block`.
pub fn block_permutation<T: Real>(n: usize) -> DMatrix<T> {
    let mut p = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        p[(k, 2 * k)] = T::one();
        p[(n + k, 2 * k + 1)] = T::one();
    }
    p
}

/// Reorders a matrix from interleaved to block ordering.
pub fn to_block_order<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    let p = block_permutation::<T>(m.nrows() / 2);
    &p * m * p.transpose()
}

/// Reorders a matrix from block to interleaved ordering.
pub fn from_block_order<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    let p = block_permutation::<T>(m.nrows() / 2);
    p.transpose() * m * &p
}

fn max_abs<T: Real>(m: &DMatrix<T>) -> T {
    m.iter().fold(T::zero(), |a, &v| a.max(v.abs()))
}

/// Linear canonical transformation, `SΩSᵀ = Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct Symplectic<T: Real> {
    matrix: DMatrix<T>,
}

impl<T: Real> Symplectic<T> {
    pub fn new(matrix: DMatrix<T>) -> Result<Self> {
        let d = matrix.nrows();
        if d == 0 || d % 2 != 0 || matrix.ncols() != d {
            return Err(Error::InvalidDimension(format!(
                "symplectic matrix must be 2n×2n, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let w = omega::<T>(d / 2);
        let defect = max_abs(&(&matrix * &w * matrix.transpose() - &w));
        if defect > T::tol(SYMPLECTIC_TOL) * (T::one() + max_abs(&matrix).powi(2)) {
            return Err(Error::InvalidParameter(format!("not symplectic: |SΩSᵀ − Ω| = {defect}")));
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * n, 2 * n),
        }
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    /// `self ∘ other`, i.e. `other` acts first.
    pub fn then_after(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// `S γ Sᵀ`.
    pub fn conjugate(&self, gamma: &DMatrix<T>) -> DMatrix<T> {
        &self.matrix * gamma * self.matrix.transpose()
    }

    fn embed(n: usize, mode: usize, block: [[T; 2]; 2]) -> Self {
        let mut m = DMatrix::identity(2 * n, 2 * n);
        for i in 0..2 {
            for j in 0..2 {
                m[(2 * mode + i, 2 * mode + j)] = block[i][j];
            }
        }
        Self { matrix: m }
    }

    /// Phase-space rotation `x → cos θ x − sin θ p`, `p → sin θ x + cos θ p`
    /// on one mode.
    pub fn rotation(n: usize, mode: usize, theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        Self::embed(n, mode, [[c, -s], [s, c]])
    }

    /// Squeezer `R(θ) diag(e^{−r}, e^{r}) R(−θ)` on one mode.
    pub fn squeezer(n: usize, mode: usize, r: T, theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        let (a, b) = ((-r).exp(), r.exp());
        let xx = c * c * a + s * s * b;
        let pp = s * s * a + c * c * b;
        let xp = s * c * (a - b);
        Self::embed(n, mode, [[xx, xp], [xp, pp]])
    }

    /// Balanced beamsplitter `(q_i, q_j) → ((q_i + q_j)/√2, (q_i − q_j)/√2)`
    /// for `q = x, p`.
    pub fn beamsplitter(n: usize, i: usize, j: usize) -> Self {
        let h = T::lit(0.5).sqrt();
        let mut m = DMatrix::identity(2 * n, 2 * n);
        for q in 0..2 {
            let (a, b) = (2 * i + q, 2 * j + q);
            m[(a, a)] = h;
            m[(a, b)] = h;
            m[(b, a)] = h;
            m[(b, b)] = -h;
        }
        Self { matrix: m }
    }

    /// Passive transformation of mode operators `a → U a`.
    pub fn passive(u: &CMatrix<T>) -> Self {
        let n = u.nrows();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (u[(i, j)].re, u[(i, j)].im);
                m[(2 * i, 2 * j)] = x;
                m[(2 * i, 2 * j + 1)] = -y;
                m[(2 * i + 1, 2 * j)] = y;
                m[(2 * i + 1, 2 * j + 1)] = x;
            }
        }
        Self { matrix: m }
    }
}

/// n-mode Gaussian state: mean vector and covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState<T: Real> {
    n: usize,
    mean: DVector<T>,
    gamma: DMatrix<T>,
    hbar: T,
}

impl<T: Real> GaussianState<T> {
    /// Validates symmetry and `γ + i(ħ/2)Ω ⪰ 0`.
    pub fn new(gamma: DMatrix<T>, hbar: T) -> Result<Self> {
        let d = gamma.nrows();
        Self::with_mean(DVector::zeros(d), gamma, hbar)
    }

    pub fn with_mean(mean: DVector<T>, gamma: DMatrix<T>, hbar: T) -> Result<Self> {
        let d = gamma.nrows();
        if d == 0 || d % 2 != 0 || gamma.ncols() != d {
            return Err(Error::InvalidDimension(format!(
                "covariance must be 2n×2n, got {}×{}",
                gamma.nrows(),
                gamma.ncols()
            )));
        }
        if mean.len() != d {
            return Err(Error::DimensionMismatch(d, mean.len()));
        }
        if !(hbar > T::zero()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        let asym = max_abs(&(&gamma - gamma.transpose()));
        if asym > T::tol(1e-12) * (T::one() + max_abs(&gamma)) {
            return Err(Error::NotHermitian(asym.as_f64()));
        }
        let gamma = (&gamma + gamma.transpose()) * T::lit(0.5);
        let state = Self {
            n: d / 2,
            mean,
            gamma,
            hbar,
        };
        let m = state.physicality_margin();
        if m < -T::tol(PHYSICALITY_TOL) {
            return Err(Error::Unphysical(format!("γ + i(ħ/2)Ω has eigenvalue {m}")));
        }
        Ok(state)
    }

    pub fn vacuum(n: usize, hbar: T) -> Self {
        Self::thermal(n, hbar / T::lit(2.0), hbar).expect("vacuum is physical")
    }

    /// `γ = ν·I` with `ν ≥ ħ/2`.
    pub fn thermal(n: usize, nu: T, hbar: T) -> Result<Self> {
        Self::new(DMatrix::identity(2 * n, 2 * n) * nu, hbar)
    }

    /// `S diag(ν) Sᵀ` with symplectic eigenvalues `ν_k ≥ ħ/2` (each repeated
    /// for x and p).
    pub fn from_williamson(s: &Symplectic<T>, nu: &[T], hbar: T) -> Result<Self> {
        if nu.len() != s.modes() {
            return Err(Error::DimensionMismatch(s.modes(), nu.len()));
        }
        let d = DMatrix::from_fn(2 * nu.len(), 2 * nu.len(), |i, j| if i == j { nu[i / 2] } else { T::zero() });
        Self::new(s.conjugate(&d), hbar)
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> &DVector<T> {
        &self.mean
    }

    pub fn gamma(&self) -> &DMatrix<T> {
        &self.gamma
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn det(&self) -> T {
        self.gamma.clone().determinant()
    }

    /// Smallest eigenvalue of `γ + i(ħ/2)Ω`.
    pub fn physicality_margin(&self) -> T {
        let w = omega::<T>(self.n);
        let h = self.hbar / T::lit(2.0);
        let m = CMatrix::from_fn(2 * self.n, 2 * self.n, |i, j| C::new(self.gamma[(i, j)], h * w[(i, j)]));
        SymmetricEigen::new(m)
            .eigenvalues
            .iter()
            .copied()
            .reduce(|a, v| a.min(v))
            .unwrap_or_else(T::zero)
    }

    /// `S γ Sᵀ`, `S r̄`.
    pub fn transform(&self, s: &Symplectic<T>) -> Result<Self> {
        if s.modes() != self.n {
            return Err(Error::DimensionMismatch(self.n, s.modes()));
        }
        Self::with_mean(s.matrix() * &self.mean, s.conjugate(&self.gamma), self.hbar)
    }
}

/// `(γ_x, γ_p)`, the covariance blocks of `x⃗` and `p⃗`.
pub fn reduced_blocks<T: Real>(g: &GaussianState<T>) -> (DMatrix<T>, DMatrix<T>) {
    let n = g.modes();
    let b = to_block_order(g.gamma());
    (
        b.view((0, 0), (n, n)).into_owned(),
        b.view((n, n), (n, n)).into_owned(),
    )
}

/// `h(x⃗) = ½ ln((2πe)ⁿ |γ_x|)` and likewise for `p⃗`.
pub fn gaussian_joint_entropies<T: Real>(g: &GaussianState<T>) -> Result<(T, T)> {
    let (gx, gp) = reduced_blocks(g);
    let n = T::count(g.modes());
    let h = |m: DMatrix<T>| {
        let d = m.determinant();
        if !(d > T::zero()) {
            return Err(Error::DegenerateCovariance(d.as_f64()));
        }
        Ok((n * (T::two_pi() * T::e()).ln() + d.ln()) / T::lit(2.0))
    };
    Ok((h(gx)?, h(gp)?))
}

/// `h(x⃗) + h(p⃗) ≥ n ln(πeħ)`.
pub fn nmode_bbm<T: Real>(g: &GaussianState<T>) -> Result<RelationVerdict<T>> {
    let (hx, hp) = gaussian_joint_entropies(g)?;
    let rhs = T::count(g.modes()) * ln_pi_e_hbar(g.hbar());
    Ok(RelationVerdict::new("nmode_bbm", hx + hp, rhs, CLOSED_FORM_SAT_TOL))
}

/// `h(x⃗) + h(p⃗) − ½ ln(|γ_x||γ_p|/|γ|) ≥ n ln(πeħ)`.
pub fn nmode_tight<T: Real>(g: &GaussianState<T>) -> Result<RelationVerdict<T>> {
    let (hx, hp) = gaussian_joint_entropies(g)?;
    let (gx, gp) = reduced_blocks(g);
    let corr = (gx.determinant() * gp.determinant() / g.det()).ln() / T::lit(2.0);
    let rhs = T::count(g.modes()) * ln_pi_e_hbar(g.hbar());
    Ok(RelationVerdict::new("nmode_tight", hx + hp - corr, rhs, CLOSED_FORM_SAT_TOL))
}

/// `N^{(n)} = e^{2h/n}/(2πe)` for both joint entropies.
pub fn nmode_entropy_powers<T: Real>(hx: T, hp: T, n: usize) -> (T, T) {
    let k = T::count(n);
    (entropy_power(hx / k), entropy_power(hp / k))
}

/// `N_x N_p ≥ (ħ/2)²`.
pub fn nmode_epur<T: Real>(g: &GaussianState<T>) -> Result<RelationVerdict<T>> {
    let (hx, hp) = gaussian_joint_entropies(g)?;
    let (nx, np) = nmode_entropy_powers(hx, hp, g.modes());
    let h = g.hbar() / T::lit(2.0);
    Ok(RelationVerdict::new("nmode_epur", nx * np, h * h, CLOSED_FORM_SAT_TOL))
}

/// `N_x N_p ≥ (|γ_x||γ_p|/|γ|)^{1/n} (ħ/2)²`.
pub fn nmode_tight_epur<T: Real>(g: &GaussianState<T>) -> Result<RelationVerdict<T>> {
    let (hx, hp) = gaussian_joint_entropies(g)?;
    let (nx, np) = nmode_entropy_powers(hx, hp, g.modes());
    let (gx, gp) = reduced_blocks(g);
    let ratio = (gx.determinant() * gp.determinant() / g.det()).powf(T::one() / T::count(g.modes()));
    let h = g.hbar() / T::lit(2.0);
    Ok(RelationVerdict::new("nmode_tight_epur", nx * np, ratio * h * h, CLOSED_FORM_SAT_TOL))
}

/// `|γ| ≥ (N_xN_p)ⁿ|γ|/(|γ_x||γ_p|) ≥ (ħ/2)^{2n}` together with
/// `|γ_x|^{1/n} ≥ N_x` and `|γ_p|^{1/n} ≥ N_p`, in log-ratio form.
pub fn nmode_chain<T: Real>(g: &GaussianState<T>) -> Result<ChainReport<T>> {
    let (hx, hp) = gaussian_joint_entropies(g)?;
    let n = g.modes();
    let (nx, np) = nmode_entropy_powers(hx, hp, n);
    let (gx, gp) = reduced_blocks(g);
    let (dx, dp) = (gx.determinant(), gp.determinant());
    let det = g.det();
    let corrected = (nx * np).powi(n as i32) / (dx * dp) * det;
    let bound = (g.hbar() / T::lit(2.0)).powi(2 * n as i32);
    let inv = T::one() / T::count(n);
    Ok(ChainReport {
        links: vec![
            ChainLink::new("determinant_over_corrected", det, corrected),
            ChainLink::new("corrected_over_bound", corrected, bound),
            ChainLink::new("x_block_over_entropy_power", dx.powf(inv), nx),
            ChainLink::new("p_block_over_entropy_power", dp.powf(inv), np),
        ],
    })
}

fn require_nonnegative<T: Real>(r: T) -> Result<()> {
    if r < T::zero() {
        return Err(Error::InvalidParameter(format!("squeezing must be non-negative, got {r}")));
    }
    Ok(())
}

/// Balanced beamsplitter on modes 0 and 1 of a two-mode system.
pub fn beamsplitter<T: Real>() -> Symplectic<T> {
    Symplectic::beamsplitter(2, 0, 1)
}

/// p-squeezed vacuum on mode 1 and x-squeezed vacuum on mode 2, mixed on a
/// balanced beamsplitter.
pub fn two_mode_squeezed<T: Real>(r: T, hbar: T) -> Result<GaussianState<T>> {
    require_nonnegative(r)?;
    let half_pi = T::frac_pi_2();
    let s = beamsplitter::<T>()
        .then_after(&Symplectic::squeezer(2, 0, r, half_pi))
        .then_after(&Symplectic::squeezer(2, 1, r, T::zero()));
    GaussianState::from_williamson(&s, &[hbar / T::lit(2.0); 2], hbar)
}

/// Squeezed vacua rotated by `+π/4` and `−π/4`, mixed on a balanced
/// beamsplitter.
pub fn rotated_pair<T: Real>(r: T, hbar: T) -> Result<GaussianState<T>> {
    require_nonnegative(r)?;
    let q = T::frac_pi_4();
    let s = beamsplitter::<T>()
        .then_after(&Symplectic::squeezer(2, 0, r, q))
        .then_after(&Symplectic::squeezer(2, 1, r, -q));
    GaussianState::from_williamson(&s, &[hbar / T::lit(2.0); 2], hbar)
}

/// Random symplectic `U₁ · ⊕ₖ S(r_k) · U₂` with Haar passive parts and
/// squeezings `r_k ∈ [0, max_r)`.
pub fn random_symplectic<T: Real, R: Rng + ?Sized>(n: usize, max_r: f64, rng: &mut R) -> Symplectic<T> {
    let u1 = Symplectic::passive(&haar_unitary::<T, R>(n, rng));
    let u2 = Symplectic::passive(&haar_unitary::<T, R>(n, rng));
    let dist = Uniform::new(0.0, max_r).expect("valid range");
    let mut s = u1;
    for k in 0..n {
        s = s.then_after(&Symplectic::squeezer(n, k, T::lit(dist.sample(rng)), T::zero()));
    }
    s.then_after(&u2)
}

/// Random mixed Gaussian state `S diag(ν) Sᵀ`, `ν_k ∈ [ħ/2, 3ħ/2)`.
pub fn random_physical_gamma_with<T: Real, R: Rng + ?Sized>(n: usize, hbar: T, rng: &mut R) -> Result<GaussianState<T>> {
    if n == 0 {
        return Err(Error::InvalidDimension("need at least one mode".into()));
    }
    let s = random_symplectic::<T, R>(n, 1.0, rng);
    let dist = Uniform::new(0.5, 1.5).expect("valid range");
    let nu: Vec<T> = (0..n).map(|_| hbar * T::lit(dist.sample(rng))).collect();
    GaussianState::from_williamson(&s, &nu, hbar)
}

/// [`random_physical_gamma_with`] on the stream of `(seed, 0)`.
pub fn random_physical_gamma<T: Real>(n: usize, hbar: T, seed: u64) -> Result<GaussianState<T>> {
    random_physical_gamma_with(n, hbar, &mut trial_rng(seed, 0))
}

/// Random pure Gaussian state `S Sᵀ ħ/2`.
pub fn random_pure_gaussian<T: Real>(n: usize, hbar: T, seed: u64) -> Result<GaussianState<T>> {
    let s = random_symplectic::<T, _>(n, 1.0, &mut trial_rng(seed, 0));
    GaussianState::from_williamson(&s, &vec![hbar / T::lit(2.0); n], hbar)
}
