//! Single-mode states in a truncated Fock basis and the operator algebra
//! acting on them.
//!
//! The Fock space is cut at occupation `nmax`, so every state carries
//! `nmax + 1` amplitudes. Quadratures follow the quantum-optics convention
//! `x = √(ħ/2)(a + a†)`, `p = i√(ħ/2)(a† − a)`.

use nalgebra::{DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{c, cr, norm_sqr, CMatrix, CVector, Real, C};

/// Truncation rule: weight on the two highest levels must stay below this.
pub const TAIL_WEIGHT_LIMIT: f64 = 1e-10;

/// Extra levels carried while exponentiating a truncated generator. The
/// returned state is the leading `nmax + 1` block of the padded result, so
/// reflections off the artificial boundary never reach it.
pub const EXPONENTIATION_PAD: usize = 32;

const MAX_NMAX_SEARCH: usize = 4096;

/// Label of a quadrature operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

/// Matrix of `x̂` or `p̂` in the truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadOperator<T: Real> {
    pub matrix: CMatrix<T>,
    pub label: Quadrature,
}

/// Parameters of `D(α) S(z)` with `z = r e^{iφ}`. The squeezing axis sits at
/// `θ = φ / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianUnitarySpec<T: Real> {
    pub r: T,
    pub phi: T,
    pub alpha: C<T>,
}

impl<T: Real> GaussianUnitarySpec<T> {
    pub fn squeeze(r: T, phi: T) -> Self {
        Self {
            r,
            phi,
            alpha: cr(T::zero()),
        }
    }

    /// Squeezed along the axis rotated by `theta` from `x`.
    pub fn rotated(r: T, theta: T) -> Self {
        Self::squeeze(r, theta * T::lit(2.0))
    }

    pub fn with_displacement(mut self, alpha: C<T>) -> Self {
        self.alpha = alpha;
        self
    }
}

/// Common view over pure and mixed Fock-basis states.
pub trait FockState<T: Real>: Sync {
    fn hbar(&self) -> T;

    /// Number of Fock levels carried (`nmax + 1`).
    fn dim(&self) -> usize;

    /// Number of leading levels with nonzero population.
    fn support(&self) -> usize;

    /// `⟨n|ρ|n⟩`.
    fn population(&self, n: usize) -> T;

    /// `Tr(ρ O)` for an operator given on the same `dim × dim` space.
    fn expect(&self, op: &CMatrix<T>) -> C<T>;

    /// Decomposition `ρ = Σ w_k |v_k⟩⟨v_k|` with each `v_k` trimmed to the
    /// support.
    fn components(&self) -> Vec<(T, CVector<T>)>;

    fn to_density(&self) -> FockDensity<T>;

    fn nmax(&self) -> usize {
        self.dim() - 1
    }

    /// Weight on the two highest levels.
    fn tail_weight(&self) -> T {
        let d = self.dim();
        (d.saturating_sub(2)..d).fold(T::zero(), |acc, n| acc + self.population(n))
    }
}

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<T: Real> {
    amplitudes: CVector<T>,
    hbar: T,
}

impl<T: Real> FockVector<T> {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: CVector<T>, hbar: T) -> Result<Self> {
        check_dim_and_hbar(amplitudes.len(), hbar)?;
        let n2 = amplitudes.iter().fold(T::zero(), |a, z| a + norm_sqr(*z));
        if (n2 - T::one()).abs() > T::tol(1e-10) {
            return Err(Error::NotNormalized(n2.as_f64()));
        }
        Ok(Self { amplitudes, hbar })
    }

    /// Normalizes the given amplitudes.
    pub fn from_unnormalized(amplitudes: CVector<T>, hbar: T) -> Result<Self> {
        check_dim_and_hbar(amplitudes.len(), hbar)?;
        let n2 = amplitudes.iter().fold(T::zero(), |a, z| a + norm_sqr(*z));
        if !(n2 > T::zero()) || !n2.is_finite() {
            return Err(Error::NotNormalized(n2.as_f64()));
        }
        let s = T::one() / n2.sqrt();
        Ok(Self {
            amplitudes: amplitudes.map(|z| z * s),
            hbar,
        })
    }

    /// `|n⟩` in a space truncated at `nmax`.
    pub fn fock(n: usize, nmax: usize, hbar: T) -> Result<Self> {
        if n > nmax {
            return Err(Error::InvalidDimension(format!("level {n} exceeds nmax {nmax}")));
        }
        let mut amps = CVector::<T>::zeros(nmax + 1);
        amps[n] = cr(T::one());
        Self::new(amps, hbar)
    }

    pub fn vacuum(nmax: usize, hbar: T) -> Result<Self> {
        Self::fock(0, nmax, hbar)
    }

    pub fn amplitudes(&self) -> &CVector<T> {
        &self.amplitudes
    }

    /// Zero-pads (or keeps) the state to a space truncated at `nmax`. Fails if
    /// that would drop populated levels.
    pub fn embed(&self, nmax: usize) -> Result<Self> {
        if nmax + 1 < self.support() {
            return Err(Error::InvalidDimension(format!(
                "cannot embed support {} into nmax {nmax}",
                self.support()
            )));
        }
        let mut amps = CVector::<T>::zeros(nmax + 1);
        let keep = self.dim().min(nmax + 1);
        amps.rows_mut(0, keep)
            .copy_from(&self.amplitudes.rows(0, keep));
        Self::from_unnormalized(amps, self.hbar)
    }

    /// `|self⟩ + eps |other⟩`, renormalized.
    pub fn superpose(&self, other: &Self, eps: C<T>) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let amps = &self.amplitudes + other.amplitudes.map(|z| z * eps);
        Self::from_unnormalized(amps, self.hbar)
    }
}

impl<T: Real> FockState<T> for FockVector<T> {
    fn hbar(&self) -> T {
        self.hbar
    }

    fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    fn support(&self) -> usize {
        self.amplitudes
            .iter()
            .rposition(|z| norm_sqr(*z) > T::zero())
            .map_or(1, |n| n + 1)
    }

    fn population(&self, n: usize) -> T {
        norm_sqr(self.amplitudes[n])
    }

    fn expect(&self, op: &CMatrix<T>) -> C<T> {
        let v = op * &self.amplitudes;
        self.amplitudes.dotc(&v)
    }

    fn components(&self) -> Vec<(T, CVector<T>)> {
        let s = self.support();
        vec![(T::one(), self.amplitudes.rows(0, s).into_owned())]
    }

    fn to_density(&self) -> FockDensity<T> {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        FockDensity {
            matrix: m,
            hbar: self.hbar,
        }
    }
}

/// Density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity<T: Real> {
    matrix: CMatrix<T>,
    hbar: T,
}

impl<T: Real> FockDensity<T> {
    pub fn new(matrix: CMatrix<T>, hbar: T) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(matrix.nrows(), matrix.ncols()));
        }
        check_dim_and_hbar(matrix.nrows(), hbar)?;
        let asym = max_asymmetry(&matrix);
        if asym > T::tol(1e-12) {
            return Err(Error::NotHermitian(asym.as_f64()));
        }
        let tr = matrix.diagonal().iter().fold(T::zero(), |a, z| a + z.re);
        if (tr - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::NotNormalized(tr.as_f64()));
        }
        let herm = hermitize(&matrix);
        let min_eig = SymmetricEigen::new(herm.clone())
            .eigenvalues
            .iter()
            .fold(T::max_value().unwrap_or(T::one()), |a, &e| a.min(e));
        if min_eig < -T::tol(1e-10) {
            return Err(Error::NotPositive(min_eig.as_f64()));
        }
        Ok(Self { matrix: herm, hbar })
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[T], hbar: T) -> Result<Self> {
        let d = populations.len();
        let mut m = CMatrix::<T>::zeros(d, d);
        for (n, &w) in populations.iter().enumerate() {
            m[(n, n)] = cr(w);
        }
        Self::new(m, hbar)
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        self.matrix
            .iter()
            .fold(T::zero(), |a, z| a + norm_sqr(*z))
    }
}

impl<T: Real> FockState<T> for FockDensity<T> {
    fn hbar(&self) -> T {
        self.hbar
    }

    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn support(&self) -> usize {
        let d = self.dim();
        (0..d)
            .rposition(|n| self.matrix[(n, n)].re > T::zero())
            .map_or(1, |n| n + 1)
    }

    fn population(&self, n: usize) -> T {
        self.matrix[(n, n)].re
    }

    fn expect(&self, op: &CMatrix<T>) -> C<T> {
        // Tr(ρO) = Σ_ij ρ_ij O_ji
        let d = self.dim();
        let mut acc = cr(T::zero());
        for i in 0..d {
            for j in 0..d {
                acc += self.matrix[(i, j)] * op[(j, i)];
            }
        }
        acc
    }

    fn components(&self) -> Vec<(T, CVector<T>)> {
        let s = self.support();
        let block = self.matrix.view((0, 0), (s, s)).into_owned();
        if is_diagonal(&block) {
            return (0..s)
                .filter(|&n| block[(n, n)].re > T::zero())
                .map(|n| {
                    let mut v = CVector::<T>::zeros(s);
                    v[n] = cr(T::one());
                    (block[(n, n)].re, v)
                })
                .collect();
        }
        let eig = SymmetricEigen::new(block);
        let cutoff = T::default_epsilon() * T::lit(16.0);
        (0..s)
            .filter(|&k| eig.eigenvalues[k] > cutoff)
            .map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned()))
            .collect()
    }

    fn to_density(&self) -> FockDensity<T> {
        self.clone()
    }
}

fn check_dim_and_hbar<T: Real>(dim: usize, hbar: T) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!(
            "need nmax ≥ 1, got {} levels",
            dim
        )));
    }
    if !(hbar > T::zero()) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    Ok(())
}

fn max_asymmetry<T: Real>(m: &CMatrix<T>) -> T {
    let d = m.nrows();
    let mut worst = T::zero();
    for i in 0..d {
        for j in i..d {
            let diff = m[(i, j)] - m[(j, i)].conj();
            worst = worst.max(norm_sqr(diff).sqrt());
        }
    }
    worst
}

fn hermitize<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = T::lit(0.5);
    (m + m.adjoint()).map(|z| z * half)
}

fn is_diagonal<T: Real>(m: &CMatrix<T>) -> bool {
    let d = m.nrows();
    (0..d).all(|i| (0..d).all(|j| i == j || norm_sqr(m[(i, j)]) == T::zero()))
}

/// Annihilation operator on `dim` levels: `a|n⟩ = √n |n−1⟩`.
pub fn annihilation<T: Real>(dim: usize) -> CMatrix<T> {
    let mut a = CMatrix::<T>::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = cr(T::count(n).sqrt());
    }
    a
}

/// `x̂` and `p̂` on levels `0..=nmax`.
pub fn quadrature_operators<T: Real>(
    nmax: usize,
    hbar: T,
) -> Result<(QuadOperator<T>, QuadOperator<T>)> {
    if nmax < 1 {
        return Err(Error::InvalidDimension(format!("need nmax ≥ 1, got {nmax}")));
    }
    let (x, p) = quadrature_matrices(nmax + 1, hbar);
    Ok((
        QuadOperator {
            matrix: x,
            label: Quadrature::X,
        },
        QuadOperator {
            matrix: p,
            label: Quadrature::P,
        },
    ))
}

pub(crate) fn quadrature_matrices<T: Real>(dim: usize, hbar: T) -> (CMatrix<T>, CMatrix<T>) {
    let a = annihilation::<T>(dim);
    let ad = a.adjoint();
    let s = (hbar / T::lit(2.0)).sqrt();
    let x = (&a + &ad).map(|z| z * s);
    let p = (&ad - &a).map(|z| z * c(T::zero(), s));
    (x, p)
}

/// Squeezed (and optionally displaced) vacuum `D(α) S(z)|0⟩`.
///
/// `S(z) = exp{½(z* a² − z a†²)}` is exponentiated on a padded truncated
/// space, then cut back to `nmax`. Fails when the two highest retained
/// levels carry more than [`TAIL_WEIGHT_LIMIT`].
pub fn squeezed_vacuum<T: Real>(
    spec: GaussianUnitarySpec<T>,
    nmax: usize,
    hbar: T,
) -> Result<FockVector<T>> {
    if !(spec.r >= T::zero()) {
        return Err(Error::InvalidParameter(format!("squeezing r must be ≥ 0, got {}", spec.r)));
    }
    check_dim_and_hbar(nmax + 1, hbar)?;
    let z = crate::scalar::cis(spec.phi) * spec.r;
    let squeeze_gen = move |dim: usize| {
        let a = annihilation::<T>(dim);
        let a2 = &a * &a;
        let ad2 = a2.adjoint();
        let half = T::lit(0.5);
        a2.map(|v| v * z.conj() * half) - ad2.map(|v| v * z * half)
    };
    let vacuum = |dim: usize| {
        let mut v = CVector::<T>::zeros(dim);
        v[0] = cr(T::one());
        v
    };
    let squeezed = evolve_truncated(&squeeze_gen, &vacuum, nmax, hbar)?;
    if norm_sqr(spec.alpha) > T::zero() {
        displace(&squeezed, spec.alpha)
    } else {
        Ok(squeezed)
    }
}

/// `D(α)|ψ⟩` with `D(α) = exp(α a† − α* a)`.
pub fn displace<T: Real>(state: &FockVector<T>, alpha: C<T>) -> Result<FockVector<T>> {
    let gen = move |dim: usize| {
        let a = annihilation::<T>(dim);
        let ad = a.adjoint();
        ad.map(|v| v * alpha) - a.map(|v| v * alpha.conj())
    };
    let src = state.amplitudes.clone();
    let input = move |dim: usize| {
        let mut v = CVector::<T>::zeros(dim);
        let n = src.len().min(dim);
        v.rows_mut(0, n).copy_from(&src.rows(0, n));
        v
    };
    evolve_truncated(&gen, &input, state.nmax(), state.hbar)
}

fn evolve_truncated<T: Real>(
    generator: &dyn Fn(usize) -> CMatrix<T>,
    input: &dyn Fn(usize) -> CVector<T>,
    nmax: usize,
    hbar: T,
) -> Result<FockVector<T>> {
    let work = |levels: usize| -> CVector<T> {
        let dim = levels + EXPONENTIATION_PAD;
        let u = generator(dim).exp();
        u * input(dim)
    };
    let full = work(nmax + 1);
    let tail = tail_of(&full, nmax);
    if tail >= T::lit(TAIL_WEIGHT_LIMIT) {
        let required = required_nmax(&work, nmax)?;
        return Err(Error::TruncationInsufficient {
            nmax,
            required,
            tail: tail.as_f64(),
        });
    }
    FockVector::from_unnormalized(full.rows(0, nmax + 1).into_owned(), hbar)
}

fn tail_of<T: Real>(v: &CVector<T>, nmax: usize) -> T {
    (nmax.saturating_sub(1)..=nmax).fold(T::zero(), |a, n| a + norm_sqr(v[n]))
}

fn required_nmax<T: Real>(work: &dyn Fn(usize) -> CVector<T>, nmax: usize) -> Result<usize> {
    let mut hi = (2 * nmax).max(16);
    while hi <= MAX_NMAX_SEARCH {
        let v = work(hi + 1);
        if let Some(m) = (1..=hi).find(|&m| tail_of(&v, m) < T::lit(TAIL_WEIGHT_LIMIT)) {
            return Ok(m);
        }
        hi *= 2;
    }
    Err(Error::InvalidParameter(format!(
        "no adequate truncation below nmax = {MAX_NMAX_SEARCH}"
    )))
}

/// Haar-distributed `dim × dim` unitary: QR of a complex Ginibre matrix
/// with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix<T> {
    let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let g = CMatrix::<T>::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(T::lit(re) * s, T::lit(im) * s)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..dim {
        let d = r[(k, k)];
        let m = norm_sqr(d).sqrt();
        let phase = if m > T::zero() { d / cr(m) } else { cr(T::one()) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// First column of a Haar unitary on `span{|0⟩..|dim−1⟩}`, i.e. a random
/// unitary applied to the vacuum.
pub fn haar_random_state_with<T: Real, R: Rng + ?Sized>(
    dim: usize,
    nmax: usize,
    hbar: T,
    rng: &mut R,
) -> Result<FockVector<T>> {
    if dim < 1 || dim > nmax + 1 {
        return Err(Error::InvalidDimension(format!(
            "Haar dimension {dim} outside 1..={}",
            nmax + 1
        )));
    }
    let u = haar_unitary::<T, R>(dim, rng);
    let mut amps = CVector::<T>::zeros(nmax + 1);
    amps.rows_mut(0, dim).copy_from(&u.column(0));
    FockVector::from_unnormalized(amps, hbar)
}

/// Seeded variant of [`haar_random_state_with`].
pub fn haar_random_state<T: Real>(
    dim: usize,
    nmax: usize,
    hbar: T,
    seed: u64,
) -> Result<FockVector<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_random_state_with(dim, nmax, hbar, &mut rng)
}

/// Independent generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Equal weights on `|0⟩..|N⟩`.
pub fn extremal_passive_state<T: Real>(
    photons: usize,
    nmax: usize,
    hbar: T,
) -> Result<FockDensity<T>> {
    if photons > nmax {
        return Err(Error::InvalidDimension(format!(
            "photon number {photons} exceeds nmax {nmax}"
        )));
    }
    let w = T::one() / T::count(photons + 1);
    let pops: Vec<T> = (0..=nmax)
        .map(|n| if n <= photons { w } else { T::zero() })
        .collect();
    FockDensity::diagonal(&pops, hbar)
}

/// Convex combination `Σ w_i ρ_i`.
pub fn mix<T: Real>(states: &[FockDensity<T>], weights: &[T]) -> Result<FockDensity<T>> {
    if states.is_empty() || states.len() != weights.len() {
        return Err(Error::DimensionMismatch(states.len(), weights.len()));
    }
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    if weights.iter().any(|&w| w < T::zero()) || (total - T::one()).abs() > T::tol(1e-12) {
        return Err(Error::InvalidWeights(total.as_f64()));
    }
    let dim = states[0].dim();
    let hbar = states[0].hbar;
    let mut m = CMatrix::<T>::zeros(dim, dim);
    for (s, &w) in states.iter().zip(weights) {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch(dim, s.dim()));
        }
        if (s.hbar - hbar).abs() > T::tol(1e-12) {
            return Err(Error::InvalidParameter("mixed states disagree on hbar".into()));
        }
        m += s.matrix.map(|z| z * w);
    }
    FockDensity::new(m, hbar)
}

/// Helper for literal amplitude lists, e.g. `amplitudes(&[(0.0, 7.0), (0.0, 0.0), (1.0, 0.0)])`.
pub fn amplitudes<T: Real>(pairs: &[(f64, f64)], nmax: usize) -> CVector<T> {
    let mut v = DVector::from_element(nmax + 1, cr(T::zero()));
    for (n, &(re, im)) in pairs.iter().enumerate() {
        v[n] = c(T::lit(re), T::lit(im));
    }
    v
}
