//! Position/momentum representations of Fock-basis states: oscillator
//! eigenfunctions on uniform grids, quadrature marginals and the Wigner
//! function.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::FockState;
use crate::scalar::{cr, minus_i_pow, norm_sqr, CVector, Real, C};

/// Minimum number of points on a grid.
pub const MIN_GRID_POINTS: usize = 64;

/// Default number of points on 1D grids.
pub const DEFAULT_GRID_POINTS: usize = 2048;

/// Margin (in units of `√ħ`) beyond the classical turning point of the
/// highest level that a grid must cover.
pub const TURNING_POINT_MARGIN: f64 = 4.0;

/// Margin added on top of `√(2ħ(nmax+1))` by [`Grid1D::for_levels`].
pub const DEFAULT_EXTENT_MARGIN: f64 = 5.0;

/// Marginals deviating from unit mass by more than this are rejected.
pub const MARGINAL_NORM_TOL: f64 = 1e-4;

/// Wigner grids deviating from unit mass by more than this are rejected.
pub const WIGNER_NORM_TOL: f64 = 1e-5;

/// Uniform grid on `[lo, hi]` with `npts` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D<T: Real> {
    lo: T,
    hi: T,
    npts: usize,
}

impl<T: Real> Grid1D<T> {
    pub fn new(lo: T, hi: T, npts: usize) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidParameter(format!("grid needs lo < hi, got [{lo}, {hi}]")));
        }
        if npts < MIN_GRID_POINTS {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least {MIN_GRID_POINTS} points, got {npts}"
            )));
        }
        Ok(Self { lo, hi, npts })
    }

    pub fn symmetric(extent: T, npts: usize) -> Result<Self> {
        Self::new(-extent, extent, npts)
    }

    /// Default extent for states occupying levels `0..=nmax`:
    /// `±scale·(√(2ħ(nmax+1)) + 5√ħ)`.
    pub fn default_extent(nmax: usize, hbar: T, scale: T) -> T {
        let two = T::lit(2.0);
        scale * ((two * hbar * T::count(nmax + 1)).sqrt() + T::lit(DEFAULT_EXTENT_MARGIN) * hbar.sqrt())
    }

    pub fn for_levels(nmax: usize, hbar: T, npts: usize, scale: T) -> Result<Self> {
        Self::symmetric(Self::default_extent(nmax, hbar, scale), npts)
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn npts(&self) -> usize {
        self.npts
    }

    pub fn spacing(&self) -> T {
        (self.hi - self.lo) / T::count(self.npts - 1)
    }

    pub fn point(&self, i: usize) -> T {
        self.lo + self.spacing() * T::count(i)
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.npts).map(|i| self.point(i)).collect()
    }

    /// Trapezoid weight of point `i`.
    pub fn weight(&self, i: usize) -> T {
        let h = self.spacing();
        if i == 0 || i + 1 == self.npts {
            h * T::lit(0.5)
        } else {
            h
        }
    }

    /// Trapezoid rule over the grid, summed left to right.
    pub fn integrate(&self, values: &[T]) -> T {
        values
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, &v)| acc + self.weight(i) * v)
    }

    /// Same grid with twice the resolution (`2·npts − 1` points).
    pub fn refined(&self) -> Self {
        Self {
            npts: 2 * self.npts - 1,
            ..*self
        }
    }

    fn half_width(&self) -> T {
        self.lo.abs().min(self.hi.abs())
    }
}

/// Sampled probability density.
#[derive(Debug, Clone, PartialEq)]
pub struct Density1D<T: Real> {
    grid: Grid1D<T>,
    values: Vec<T>,
}

impl<T: Real> Density1D<T> {
    /// Values above `−1e-12` are clamped to zero; the trapezoid mass must be
    /// 1 within `1e-6`.
    pub fn new(grid: Grid1D<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.npts() {
            return Err(Error::DimensionMismatch(grid.npts(), values.len()));
        }
        let floor = -T::tol(1e-12);
        if let Some(&bad) = values.iter().find(|&&v| v < floor) {
            return Err(Error::NegativeDensity(bad.as_f64()));
        }
        let values: Vec<T> = values.into_iter().map(|v| v.max(T::zero())).collect();
        let mass = grid.integrate(&values);
        if (mass - T::one()).abs() > T::tol(1e-6) {
            return Err(Error::Unnormalized(mass.as_f64()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn integral(&self) -> T {
        self.grid.integrate(&self.values)
    }

    pub fn mean(&self) -> T {
        let xv: Vec<T> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| self.grid.point(i) * v)
            .collect();
        self.grid.integrate(&xv)
    }

    pub fn variance(&self) -> T {
        let m = self.mean();
        let xv: Vec<T> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let d = self.grid.point(i) - m;
                d * d * v
            })
            .collect();
        self.grid.integrate(&xv)
    }
}

/// Wigner function sampled on `xgrid × pgrid`; `values[(i, j)] = W(x_i, p_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid<T: Real> {
    pub xgrid: Grid1D<T>,
    pub pgrid: Grid1D<T>,
    pub values: DMatrix<T>,
}

impl<T: Real> WignerGrid<T> {
    /// Double trapezoid integral.
    pub fn integral(&self) -> T {
        self.integrate_with(|w| w)
    }

    pub(crate) fn integrate_with(&self, f: impl Fn(T) -> T) -> T {
        let mut acc = T::zero();
        for i in 0..self.xgrid.npts() {
            let mut row = T::zero();
            for j in 0..self.pgrid.npts() {
                row += self.pgrid.weight(j) * f(self.values[(i, j)]);
            }
            acc += self.xgrid.weight(i) * row;
        }
        acc
    }

    /// `∫ W(x, p) dp` at each `x_i`.
    pub fn x_marginal(&self) -> Vec<T> {
        (0..self.xgrid.npts())
            .map(|i| {
                let row: Vec<T> = (0..self.pgrid.npts()).map(|j| self.values[(i, j)]).collect();
                self.pgrid.integrate(&row)
            })
            .collect()
    }

    /// `∫ W(x, p) dx` at each `p_j`.
    pub fn p_marginal(&self) -> Vec<T> {
        (0..self.pgrid.npts())
            .map(|j| {
                let col: Vec<T> = (0..self.xgrid.npts()).map(|i| self.values[(i, j)]).collect();
                self.xgrid.integrate(&col)
            })
            .collect()
    }
}

/// `φ_0(x) .. φ_{levels−1}(x)` by the normalized three-term recurrence
/// `φ_{n+1} = √(2/(n+1)) ξ φ_n − √(n/(n+1)) φ_{n−1}`, `ξ = x/√ħ`.
pub fn hermite_values<T: Real>(x: T, levels: usize, hbar: T) -> Vec<T> {
    let mut out = Vec::with_capacity(levels);
    hermite_values_into(x, levels, hbar, &mut out);
    out
}

fn hermite_values_into<T: Real>(x: T, levels: usize, hbar: T, out: &mut Vec<T>) {
    out.clear();
    if levels == 0 {
        return;
    }
    let xi = x / hbar.sqrt();
    let norm = (T::pi() * hbar).powf(T::lit(-0.25));
    let phi0 = norm * (-xi * xi * T::lit(0.5)).exp();
    out.push(phi0);
    if levels == 1 {
        return;
    }
    let two = T::lit(2.0);
    out.push(two.sqrt() * xi * phi0);
    for n in 1..levels - 1 {
        let nf = T::count(n);
        let next = (two / (nf + T::one())).sqrt() * xi * out[n]
            - (nf / (nf + T::one())).sqrt() * out[n - 1];
        out.push(next);
    }
}

/// Required half-width of a grid holding levels `0..=nmax`.
pub fn required_extent<T: Real>(nmax: usize, hbar: T) -> T {
    let turning = (hbar * T::count(2 * nmax + 1)).sqrt();
    turning + T::lit(TURNING_POINT_MARGIN) * hbar.sqrt()
}

/// Matrix of oscillator eigenfunctions, row `n` holding `φ_n` on the grid.
pub fn hermite_basis<T: Real>(grid: &Grid1D<T>, nmax: usize, hbar: T) -> Result<DMatrix<T>> {
    let need = required_extent(nmax, hbar);
    if grid.half_width() < need {
        return Err(Error::GridTooSmall {
            extent: grid.half_width().as_f64(),
            required: Grid1D::default_extent(nmax, hbar, T::one()).as_f64(),
        });
    }
    let levels = nmax + 1;
    let mut basis = DMatrix::<T>::zeros(levels, grid.npts());
    let mut buf = Vec::with_capacity(levels);
    for j in 0..grid.npts() {
        hermite_values_into(grid.point(j), levels, hbar, &mut buf);
        for (n, &v) in buf.iter().enumerate() {
            basis[(n, j)] = v;
        }
    }
    Ok(basis)
}

fn quadrature_density<S, T>(state: &S, grid: &Grid1D<T>, momentum: bool) -> Result<Density1D<T>>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    let support = state.support();
    let basis = hermite_basis(grid, support - 1, state.hbar())?;
    let mut values = vec![T::zero(); grid.npts()];
    for (w, v) in state.components() {
        let v: CVector<T> = if momentum {
            CVector::from_iterator(v.len(), v.iter().enumerate().map(|(n, &z)| z * minus_i_pow::<T>(n)))
        } else {
            v
        };
        for (j, out) in values.iter_mut().enumerate() {
            let mut amp = cr(T::zero());
            for (n, z) in v.iter().enumerate() {
                amp += *z * basis[(n, j)];
            }
            *out += w * norm_sqr(amp);
        }
    }
    let mass = grid.integrate(&values);
    let deviation = (mass - T::one()).abs();
    if deviation > T::tol(MARGINAL_NORM_TOL) {
        return Err(Error::GridInadequate {
            integral: mass.as_f64(),
            deviation: deviation.as_f64(),
        });
    }
    let values = values.into_iter().map(|v| v / mass).collect();
    Density1D::new(*grid, values)
}

/// Position marginal `W_x(x) = Σ ρ_mn φ_m(x) φ_n(x)`.
pub fn marginal_x<S, T>(state: &S, grid: &Grid1D<T>) -> Result<Density1D<T>>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    quadrature_density(state, grid, false)
}

/// Momentum marginal, using `⟨p|n⟩ = (−i)ⁿ φ_n(p)`.
pub fn marginal_p<S, T>(state: &S, grid: &Grid1D<T>) -> Result<Density1D<T>>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    quadrature_density(state, grid, true)
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule for the inner `y` integral of the Wigner
/// transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerQuadrature {
    pub order: usize,
    pub panels: usize,
}

impl WignerQuadrature {
    pub const ORDER: usize = 16;
    /// Largest phase advance `ω·Δy` tolerated inside one panel.
    pub const PHASE_PER_PANEL: f64 = 6.0;

    /// Panels fine enough for `e^{−ipy/ħ}` with `|p| ≤ pmax` against a
    /// kernel built from levels `0..support`.
    pub fn for_grids<T: Real>(ymax: T, pmax: T, support: usize, hbar: T) -> Self {
        let kmax = (hbar * T::count(2 * support + 1)).sqrt();
        let omega = (pmax + kmax) / hbar;
        let panels = (ymax * omega / T::lit(Self::PHASE_PER_PANEL)).as_f64().ceil() as usize;
        Self {
            order: Self::ORDER,
            panels: panels.max(4),
        }
    }

    fn nodes<T: Real>(&self, ymax: T) -> Vec<(T, T)> {
        let (gx, gw) = gauss_legendre(self.order);
        let width = ymax / T::count(self.panels);
        let half = width * T::lit(0.5);
        let mut out = Vec::with_capacity(self.order * self.panels);
        for k in 0..self.panels {
            let mid = width * T::count(k) + half;
            for (x, w) in gx.iter().zip(&gw) {
                out.push((mid + half * T::lit(*x), half * T::lit(*w)));
            }
        }
        out
    }
}

/// `W(x,p) = (1/2πħ) ∫ e^{−ipy/ħ} ⟨x+y/2|ρ|x−y/2⟩ dy` on a grid.
pub fn wigner<S, T>(state: &S, xgrid: &Grid1D<T>, pgrid: &Grid1D<T>) -> Result<WignerGrid<T>>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    let hbar = state.hbar();
    let xmax = xgrid.lo().abs().max(xgrid.hi().abs());
    let pmax = pgrid.lo().abs().max(pgrid.hi().abs());
    let ymax = T::lit(2.0) * xmax;
    let quad = WignerQuadrature::for_grids(ymax, pmax, state.support(), hbar);
    wigner_with(state, xgrid, pgrid, quad)
}

/// [`wigner`] with an explicit inner quadrature.
pub fn wigner_with<S, T>(
    state: &S,
    xgrid: &Grid1D<T>,
    pgrid: &Grid1D<T>,
    quad: WignerQuadrature,
) -> Result<WignerGrid<T>>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    let hbar = state.hbar();
    let support = state.support();
    let need = required_extent(support - 1, hbar);
    let half = xgrid.half_width().min(pgrid.half_width());
    if half < need {
        return Err(Error::GridTooSmall {
            extent: half.as_f64(),
            required: Grid1D::default_extent(support - 1, hbar, T::one()).as_f64(),
        });
    }
    let comps = state.components();
    let xmax = xgrid.lo().abs().max(xgrid.hi().abs());
    let nodes = quad.nodes(T::lit(2.0) * xmax);
    let ps = pgrid.points();
    // e^{−i p y/ħ} for every (p_j, y_k)
    let phases: Vec<Vec<(T, T)>> = ps
        .iter()
        .map(|&p| {
            nodes
                .iter()
                .map(|&(y, _)| {
                    let a = -p * y / hbar;
                    (a.cos(), a.sin())
                })
                .collect()
        })
        .collect();
    // Hermiticity gives K(x,−y) = K(x,y)*, so only y ≥ 0 is integrated.
    let prefactor = T::one() / (T::pi() * hbar);
    let two = T::lit(2.0);
    let rows: Vec<Vec<T>> = (0..xgrid.npts())
        .into_par_iter()
        .map(|i| {
            let x = xgrid.point(i);
            let mut hu = Vec::with_capacity(support);
            let mut hv = Vec::with_capacity(support);
            let kernel: Vec<C<T>> = nodes
                .iter()
                .map(|&(y, w)| {
                    hermite_values_into(x + y / two, support, hbar, &mut hu);
                    hermite_values_into(x - y / two, support, hbar, &mut hv);
                    let mut k = cr(T::zero());
                    for (weight, v) in &comps {
                        let mut a = cr(T::zero());
                        let mut b = cr(T::zero());
                        for (n, z) in v.iter().enumerate() {
                            a += *z * hu[n];
                            b += *z * hv[n];
                        }
                        k += a * b.conj() * *weight;
                    }
                    k * w
                })
                .collect();
            phases
                .iter()
                .map(|row| {
                    let mut acc = T::zero();
                    for (k, &(cs, sn)) in kernel.iter().zip(row) {
                        acc += k.re * cs - k.im * sn;
                    }
                    acc * prefactor
                })
                .collect()
        })
        .collect();
    let values = DMatrix::from_fn(xgrid.npts(), pgrid.npts(), |i, j| rows[i][j]);
    let out = WignerGrid {
        xgrid: *xgrid,
        pgrid: *pgrid,
        values,
    };
    let mass = out.integral();
    let deviation = (mass - T::one()).abs();
    if deviation > T::tol(WIGNER_NORM_TOL) {
        return Err(Error::GridInadequate {
            integral: mass.as_f64(),
            deviation: deviation.as_f64(),
        });
    }
    Ok(out)
}

/// Smallest sampled value of the Wigner function.
pub fn min_wigner<T: Real>(w: &WignerGrid<T>) -> T {
    w.values.iter().copied().reduce(|a, v| a.min(v)).unwrap_or_else(T::zero)
}
