//! Uncertainty relations evaluated as `lhs ≥ rhs` with their slack.

use crate::entropy::{
    differential_entropy, entropy_power, joint_entropy, nongaussianity, JointEntropy, DEFAULT_NEG_TOL,
};
use crate::error::{Error, Result};
use crate::fock::FockState;
use crate::moments::{covariance, gaussian_mutual_information, CovarianceMatrix};
use crate::quad::{marginal_p, marginal_x, wigner, Grid1D, DEFAULT_GRID_POINTS};
use crate::scalar::{ln_pi_e_hbar, Real};

/// Saturation threshold for relations whose sides are closed forms.
pub const CLOSED_FORM_SAT_TOL: f64 = 1e-8;

/// Saturation threshold for relations involving numerical entropies.
pub const DEFAULT_SAT_TOL: f64 = 1e-4;

/// Default number of points per axis of Wigner grids.
pub const DEFAULT_WIGNER_POINTS: usize = 401;

/// Numerical settings shared by every evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub grid_points: usize,
    /// Multiplier on the default grid half-width.
    pub extent_scale: f64,
    pub wigner_points: usize,
    pub sat_tol: f64,
    pub neg_tol: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            extent_scale: 1.0,
            wigner_points: DEFAULT_WIGNER_POINTS,
            sat_tol: DEFAULT_SAT_TOL,
            neg_tol: DEFAULT_NEG_TOL,
        }
    }
}

impl EvalConfig {
    /// Grid for states supported on `support` levels.
    pub fn grid<T: Real>(&self, support: usize, hbar: T) -> Result<Grid1D<T>> {
        Grid1D::for_levels(support.max(1) - 1, hbar, self.grid_points, T::lit(self.extent_scale))
    }

    pub fn wigner_grid<T: Real>(&self, support: usize, hbar: T) -> Result<Grid1D<T>> {
        Grid1D::for_levels(support.max(1) - 1, hbar, self.wigner_points, T::lit(self.extent_scale))
    }

    /// Same settings with both grids refined by a factor of two.
    pub fn refined(&self) -> Self {
        Self {
            grid_points: 2 * self.grid_points - 1,
            wigner_points: 2 * self.wigner_points - 1,
            ..*self
        }
    }
}

/// Entropy-power form `lhs ≥ rhs` attached to an entropic verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerForm<T: Real> {
    pub lhs: T,
    pub rhs: T,
}

impl<T: Real> PowerForm<T> {
    pub fn slack(&self) -> T {
        self.lhs - self.rhs
    }
}

/// Outcome of one relation on one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationVerdict<T: Real> {
    pub name: &'static str,
    pub lhs: T,
    pub rhs: T,
    /// `lhs − rhs`.
    pub slack: T,
    pub saturated: bool,
    pub applicable: bool,
    pub power: Option<PowerForm<T>>,
}

impl<T: Real> RelationVerdict<T> {
    pub fn new(name: &'static str, lhs: T, rhs: T, sat_tol: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            name,
            lhs,
            rhs,
            slack,
            saturated: slack.abs() < T::lit(sat_tol),
            applicable: true,
            power: None,
        }
    }

    /// Verdict for a relation whose hypotheses fail on the state.
    pub fn inapplicable(name: &'static str, rhs: T) -> Self {
        Self {
            name,
            lhs: rhs,
            rhs,
            slack: T::zero(),
            saturated: false,
            applicable: false,
            power: None,
        }
    }

    pub fn with_power(mut self, lhs: T, rhs: T) -> Self {
        self.power = Some(PowerForm { lhs, rhs });
        self
    }

    /// `true` when inapplicable or `slack ≥ −tol`.
    pub fn holds(&self, tol: f64) -> bool {
        !self.applicable || self.slack >= -T::lit(tol)
    }
}

/// `σx²σp² ≥ (ħ/2)²`.
pub fn heisenberg<T: Real>(g: &CovarianceMatrix<T>) -> RelationVerdict<T> {
    let h = g.hbar / T::lit(2.0);
    RelationVerdict::new("heisenberg", g.sxx * g.spp, h * h, CLOSED_FORM_SAT_TOL)
}

/// `|γ| ≥ (ħ/2)²`.
pub fn schrodinger_robertson<T: Real>(g: &CovarianceMatrix<T>) -> RelationVerdict<T> {
    let h = g.hbar / T::lit(2.0);
    RelationVerdict::new("schrodinger_robertson", g.det(), h * h, CLOSED_FORM_SAT_TOL)
}

/// `h(x) + h(p) ≥ ln(πeħ)`, carrying the entropy-power form.
pub fn bbm<T: Real>(hx: T, hp: T, hbar: T) -> RelationVerdict<T> {
    let h = hbar / T::lit(2.0);
    RelationVerdict::new("bbm", hx + hp, ln_pi_e_hbar(hbar), DEFAULT_SAT_TOL)
        .with_power(entropy_power(hx) * entropy_power(hp), h * h)
}

/// `N_x N_p ≥ (ħ/2)²`.
pub fn epur<T: Real>(nx: T, np: T, hbar: T) -> RelationVerdict<T> {
    let h = hbar / T::lit(2.0);
    RelationVerdict::new("epur", nx * np, h * h, DEFAULT_SAT_TOL)
}

/// Marginal entropies and moments of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateAnalysis<T: Real> {
    pub cov: CovarianceMatrix<T>,
    pub hx: T,
    pub hp: T,
    pub nx: T,
    pub np: T,
    /// Non-Gaussianities of the two marginals.
    pub dx: T,
    pub dp: T,
    pub grid: Grid1D<T>,
}

impl<T: Real> StateAnalysis<T> {
    pub fn new<S: FockState<T> + ?Sized>(state: &S, cfg: &EvalConfig) -> Result<Self> {
        let grid = cfg.grid(state.support(), state.hbar())?;
        let cov = covariance(state)?;
        let hx = differential_entropy(&marginal_x(state, &grid)?);
        let hp = differential_entropy(&marginal_p(state, &grid)?);
        Ok(Self {
            cov,
            hx,
            hp,
            nx: entropy_power(hx),
            np: entropy_power(hp),
            dx: nongaussianity(hx, cov.sxx),
            dp: nongaussianity(hp, cov.spp),
            grid,
        })
    }

    pub fn hbar(&self) -> T {
        self.cov.hbar
    }

    pub fn gaussian_information(&self) -> Result<T> {
        gaussian_mutual_information(&self.cov)
    }

    /// `F = h(x) + h(p) − I_G(x:p)`.
    pub fn functional(&self) -> Result<T> {
        Ok(self.hx + self.hp - self.gaussian_information()?)
    }

    pub fn bbm(&self, cfg: &EvalConfig) -> RelationVerdict<T> {
        let mut v = bbm(self.hx, self.hp, self.hbar());
        v.saturated = v.slack.abs() < T::lit(cfg.sat_tol);
        v
    }

    pub fn epur(&self) -> RelationVerdict<T> {
        epur(self.nx, self.np, self.hbar())
    }

    /// `h(x) + h(p) − I_G ≥ ln(πeħ)` and `N_x N_p ≥ (σx²σp²/|γ|)(ħ/2)²`.
    pub fn tight_epur(&self, cfg: &EvalConfig) -> Result<RelationVerdict<T>> {
        let ig = self.gaussian_information()?;
        let h = self.hbar() / T::lit(2.0);
        let ratio = self.cov.sxx * self.cov.spp / self.cov.det();
        Ok(RelationVerdict::new(
            "tight_epur",
            self.hx + self.hp - ig,
            ln_pi_e_hbar(self.hbar()),
            cfg.sat_tol,
        )
        .with_power(self.nx * self.np, ratio * h * h))
    }

    /// Inequality chains in log-ratio form, `ln(upper/lower) ≥ 0`.
    pub fn implication_chain(&self) -> ChainReport<T> {
        let g = &self.cov;
        let h = self.hbar() / T::lit(2.0);
        let h2 = h * h;
        let var = g.sxx * g.spp;
        let pow = self.nx * self.np;
        let det = g.det();
        let tight = pow / var * det;
        let links = vec![
            ChainLink::new("variance_over_entropy_power", var, pow),
            ChainLink::new("entropy_power_over_bound", pow, h2),
            ChainLink::new("determinant_over_corrected", det, tight),
            ChainLink::new("corrected_over_bound", tight, h2),
            ChainLink::new("nongaussian_form", det.sqrt(), h * (self.dx + self.dp).exp()),
        ];
        ChainReport { links }
    }
}

/// One link `upper ≥ lower` of an inequality chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainLink<T: Real> {
    pub name: &'static str,
    pub upper: T,
    pub lower: T,
    /// `ln(upper/lower)`.
    pub slack: T,
}

impl<T: Real> ChainLink<T> {
    pub fn new(name: &'static str, upper: T, lower: T) -> Self {
        Self {
            name,
            upper,
            lower,
            slack: (upper / lower).ln(),
        }
    }
}

/// All links of `σx²σp² ≥ N_xN_p ≥ (ħ/2)²`,
/// `|γ| ≥ (N_xN_p/σx²σp²)|γ| ≥ (ħ/2)²` and `√|γ| ≥ (ħ/2)e^{D_x+D_p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport<T: Real> {
    pub links: Vec<ChainLink<T>>,
}

impl<T: Real> ChainReport<T> {
    pub fn min_slack(&self) -> T {
        self.links
            .iter()
            .map(|l| l.slack)
            .reduce(|a, b| a.min(b))
            .unwrap_or_else(T::zero)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.min_slack() >= -T::lit(tol)
    }

    pub fn strict(&self) -> bool {
        self.links.iter().all(|l| l.slack > T::zero())
    }
}

/// Entropic verdicts for `state`, covariance-corrected.
pub fn tight_epur<S, T>(state: &S, cfg: &EvalConfig) -> Result<RelationVerdict<T>>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    StateAnalysis::new(state, cfg)?.tight_epur(cfg)
}

/// `F = h(x) + h(p) − I_G(x:p)`.
pub fn uncertainty_functional<S, T>(state: &S, cfg: &EvalConfig) -> Result<T>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    StateAnalysis::new(state, cfg)?.functional()
}

pub fn implication_chain<S, T>(state: &S, cfg: &EvalConfig) -> Result<ChainReport<T>>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    Ok(StateAnalysis::new(state, cfg)?.implication_chain())
}

/// Joint entropy of the state's Wigner function on the config's grid.
pub fn wigner_entropy<S, T>(state: &S, cfg: &EvalConfig) -> Result<JointEntropy<T>>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    let g = cfg.wigner_grid(state.support(), state.hbar())?;
    let w = wigner(state, &g, &g)?;
    joint_entropy(&w, T::lit(cfg.neg_tol))
}

/// `h(x,p) ≥ ln(πeħ)`; inapplicable when the Wigner function is negative.
pub fn joint_conjecture<S, T>(state: &S, cfg: &EvalConfig) -> Result<RelationVerdict<T>>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    let rhs = ln_pi_e_hbar(state.hbar());
    match wigner_entropy(state, cfg) {
        Ok(j) => Ok(RelationVerdict::new("joint_conjecture", j.value, rhs, cfg.sat_tol)),
        Err(Error::WignerNegative { .. }) => Ok(RelationVerdict::inapplicable("joint_conjecture", rhs)),
        Err(e) => Err(e),
    }
}

/// Every single-mode verdict for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport<T: Real> {
    pub analysis: StateAnalysis<T>,
    pub verdicts: Vec<RelationVerdict<T>>,
    pub chain: ChainReport<T>,
}

/// Evaluates all relations; the joint-entropy conjecture only when
/// `with_joint` is set.
pub fn evaluate<S, T>(state: &S, cfg: &EvalConfig, with_joint: bool) -> Result<RelationReport<T>>
where
    S: FockState<T> + ?Sized,
    T: Real,
{
    let a = StateAnalysis::new(state, cfg)?;
    let mut verdicts = vec![
        heisenberg(&a.cov),
        schrodinger_robertson(&a.cov),
        a.bbm(cfg),
        a.epur(),
        a.tight_epur(cfg)?,
    ];
    if with_joint {
        verdicts.push(joint_conjecture(state, cfg)?);
    }
    Ok(RelationReport {
        chain: a.implication_chain(),
        analysis: a,
        verdicts,
    })
}
