//! The experiment commands. Each returns an [`Outcome`]; assertion failures
//! are collected as [`Violation`]s rather than aborting the run.

use std::f64::consts::PI;

use anyhow::{bail, Result};
use epur_core::relations::wigner_entropy;
use epur_core::scalar::{CMatrix, CVector};
use epur_core::{
    eigencheck, extremal_passive_state, haar_random_state_with, ln_pi_e_hbar, mix, schrodinger_robertson,
    squeezed_vacuum, trial_rng, Analysis64, FockDensity64, FockState, FockVector64, GaussianUnitarySpec, C,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::settings::{Settings, CLOSED_FORM_TOL};
use crate::simplex::{self, Options};
use crate::state_file::{LoadedState, StateFile};
use crate::svg::{Plot, Series, Style};
use crate::table::Table;

/// Allowed error of the measured BBM slack against its closed form.
pub const BBM_GAP_TOL: f64 = 2e-4;

/// Largest accepted eigencheck residual.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub description: String,
    pub state: StateFile,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: &'static str,
    pub table: Table,
    pub summary: Value,
    pub violations: Vec<Violation>,
    pub plot: Option<Plot>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn min_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::INFINITY, f64::min)
}

fn bound_curve(rhos: &[f64], hbar: f64) -> Vec<(f64, f64)> {
    let (lo, hi) = rhos
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    if !lo.is_finite() {
        return Vec::new();
    }
    let n = 200;
    (0..=n)
        .map(|k| {
            let r = lo + (hi - lo) * k as f64 / n as f64;
            (r, ln_pi_e_hbar(hbar) - 0.5 * (1.0 - r * r).ln())
        })
        .collect()
}

/// Joint and marginal entropies of extremal passive states `N = 0..=max_photons`.
pub fn passive_scan(max_photons: usize, s: &Settings) -> Result<Outcome> {
    let cfg = s.eval();
    let bound = ln_pi_e_hbar(s.hbar);
    let results = (0..=max_photons)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let state = extremal_passive_state::<f64>(n, n.max(1), s.hbar)?;
            let a = Analysis64::new(&state, &cfg)?;
            let j = wigner_entropy(&state, &cfg)?;
            Ok((n, a.hx + a.hp, j, state))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(&[
        "photons",
        "hx_plus_hp",
        "hxp",
        "bound",
        "mutual_information",
        "joint_slack",
        "clipped_mass",
    ]);
    let mut violations = Vec::new();
    for (n, marg, j, state) in &results {
        let joint_slack = j.value - bound;
        let mi = marg - j.value;
        table.push(vec![
            (*n).into(),
            (*marg).into(),
            j.value.into(),
            bound.into(),
            mi.into(),
            joint_slack.into(),
            j.clipped_mass.into(),
        ]);
        if joint_slack < -s.tol {
            violations.push(Violation {
                description: format!("N = {n}: h(x,p) − ln(πeħ) = {joint_slack:.3e}"),
                state: StateFile::from_density(state),
            });
        }
        if mi < -s.tol {
            violations.push(Violation {
                description: format!("N = {n}: h(x,p) exceeds h(x)+h(p) by {:.3e}", -mi),
                state: StateFile::from_density(state),
            });
        }
    }
    let marg = table.column("hx_plus_hp");
    let joint = table.column("hxp");
    let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
    let summary = json!({
        "max_photons": max_photons,
        "bound": bound,
        "min_joint_slack": min_of(table.column("joint_slack")),
        "min_mutual_information": min_of(table.column("mutual_information")),
        "marginal_sum_increasing": increasing(&marg),
        "joint_increasing": increasing(&joint),
    });
    let ns = table.column("photons");
    let plot = Plot::new("Extremal passive states", "N", "entropy (nats)")
        .with(Series::new("h(x)+h(p)", ns.iter().copied().zip(marg).collect(), Style::Dots, "#1f77b4"))
        .with(Series::new("h(x,p)", ns.iter().copied().zip(joint).collect(), Style::Dots, "#d62728"))
        .with(Series::new(
            "ln(πeħ)",
            vec![(0.0, bound), (max_photons as f64, bound)],
            Style::Dashed,
            "black",
        ));
    Ok(Outcome {
        name: "passive-scan",
        table,
        summary,
        violations,
        plot: Some(plot),
    })
}

struct TightRow {
    rho: f64,
    sum: f64,
    bound: f64,
    slack: f64,
}

fn tight_row(state: &FockVector64, s: &Settings) -> Result<TightRow> {
    let cfg = s.eval();
    let a = Analysis64::new(state, &cfg)?;
    let rho = a.cov.correlation();
    let bound = ln_pi_e_hbar(s.hbar) + a.gaussian_information()?;
    Ok(TightRow {
        rho,
        sum: a.hx + a.hp,
        bound,
        slack: a.tight_epur(&cfg)?.slack,
    })
}

fn scatter_outcome(
    name: &'static str,
    title: &str,
    rows: Vec<(u64, TightRow, FockVector64)>,
    s: &Settings,
    mut summary: Value,
) -> Outcome {
    let mut table = Table::new(&["trial", "rho", "hx_plus_hp", "bound", "slack"]);
    let mut violations = Vec::new();
    for (i, r, state) in &rows {
        table.push(vec![(*i).into(), r.rho.into(), r.sum.into(), r.bound.into(), r.slack.into()]);
        if r.slack < -s.tol {
            violations.push(Violation {
                description: format!("trial {i}: tight slack {:.3e}", r.slack),
                state: StateFile::from_vector(state),
            });
        }
    }
    table.sort_by_column("rho");
    let rhos = table.column("rho");
    let slacks = table.column("slack");
    summary["trials"] = json!(rows.len());
    summary["min_slack"] = json!(min_of(slacks.iter().copied()));
    summary["violations"] = json!(violations.len());
    let plot = Plot::new(title, "ρ", "h(x)+h(p)")
        .with(Series::new(
            "h(x)+h(p)",
            rhos.iter().copied().zip(table.column("hx_plus_hp")).collect(),
            Style::Dots,
            "#1f77b4",
        ))
        .with(Series::new("ln(πeħ) + I_G", bound_curve(&rhos, s.hbar), Style::Line, "#d62728"));
    Outcome {
        name,
        table,
        summary,
        violations,
        plot: Some(plot),
    }
}

/// Haar-random pure states on the first `dim` Fock levels.
pub fn random_scan(trials: u64, dim: usize, s: &Settings) -> Result<Outcome> {
    if dim == 0 {
        bail!("dimension must be at least 1");
    }
    // the state lives on `dim` levels; one extra keeps the space non-trivial for dim = 1
    let nmax = dim.max(2) - 1;
    let rows = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let mut rng = trial_rng(s.seed, i);
            let state = haar_random_state_with::<f64, _>(dim, nmax, s.hbar, &mut rng)?;
            Ok((i, tight_row(&state, s)?, state))
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = json!({ "dim": dim, "seed": s.seed });
    Ok(scatter_outcome("random-scan", "Random pure states", rows, s, summary))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Neighborhood {
    /// Squeezing factor `s = e^r`.
    pub s: f64,
    pub theta: f64,
    pub eps: f64,
    pub trials: u64,
    /// Dimension of the Haar perturbation.
    pub dim: usize,
}

impl Default for Neighborhood {
    fn default() -> Self {
        Self {
            s: 1.5,
            theta: PI / 4.0,
            eps: 0.01,
            trials: 500,
            dim: 4,
        }
    }
}

/// Squeezed vacuum `|s, θ⟩` perturbed by `ε|φ⟩` with Haar `|φ⟩`.
pub fn neighborhood(p: &Neighborhood, s: &Settings) -> Result<Outcome> {
    if !(p.s >= 1.0) {
        bail!("squeezing factor must be ≥ 1, got {}", p.s);
    }
    let spec = GaussianUnitarySpec::rotated(p.s.ln(), p.theta);
    let reference = squeezed_vacuum(spec, s.nmax, s.hbar)?;
    let ref_slack = tight_row(&reference, s)?.slack;
    let rows = (0..p.trials)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let mut rng = trial_rng(s.seed, i);
            let phi = haar_random_state_with::<f64, _>(p.dim, s.nmax, s.hbar, &mut rng)?;
            let state = reference.superpose(&phi, C::new(p.eps, 0.0))?;
            Ok((i, tight_row(&state, s)?, state))
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = json!({ "reference_slack": ref_slack, "seed": s.seed });
    Ok(scatter_outcome("neighborhood", "Near-Gaussian pure states", rows, s, summary))
}

/// Two states mixed as `λρ_a + (1−λ)ρ_b`.
#[derive(Debug, Clone)]
pub struct Pair {
    pub label: String,
    pub a: FockDensity64,
    pub b: FockDensity64,
}

fn pure(pairs: &[(f64, f64)], hbar: f64) -> Result<FockDensity64> {
    let v = CVector::from_iterator(pairs.len(), pairs.iter().map(|&(re, im)| C::new(re, im)));
    Ok(FockVector64::from_unnormalized(v, hbar)?.to_density())
}

/// Zero-pads `d` to `dim` levels.
fn pad(d: &FockDensity64, dim: usize) -> Result<FockDensity64> {
    let m = d.matrix();
    let n = m.nrows();
    let padded = CMatrix::from_fn(dim, dim, |i, j| if i < n && j < n { m[(i, j)] } else { C::new(0.0, 0.0) });
    Ok(FockDensity64::new(padded, d.hbar())?)
}

/// The three published mixtures plus a pair sharing one covariance matrix.
pub fn default_pairs(hbar: f64) -> Result<Vec<Pair>> {
    let z = (0.0, 0.0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Ok(vec![
        Pair {
            label: "|0>,|1>".into(),
            a: pure(&[(1.0, 0.0), z], hbar)?,
            b: pure(&[z, (1.0, 0.0)], hbar)?,
        },
        Pair {
            label: "|2>,|0>".into(),
            a: pure(&[z, z, (1.0, 0.0)], hbar)?,
            b: pure(&[(1.0, 0.0), z, z], hbar)?,
        },
        Pair {
            label: "psi,phi".into(),
            a: pure(&[(0.0, 7.0), z, (1.0, 0.0), z], hbar)?,
            b: pure(&[(1.0, 3.0), (2.0, 5.0), (1.0, 3.0), (6.0, 8.0)], hbar)?,
        },
        Pair {
            label: "same-covariance".into(),
            a: pure(&[(r, 0.0), z, z, (r, 0.0)], hbar)?,
            b: pure(&[(r, 0.0), z, z, (0.0, r)], hbar)?,
        },
    ])
}

/// Reads `[[state, state], ...]` from a JSON file.
pub fn read_pairs(path: &std::path::Path) -> Result<Vec<Pair>> {
    let text = std::fs::read_to_string(path)?;
    let raw: Vec<[StateFile; 2]> = serde_json::from_str(&text)?;
    raw.iter()
        .enumerate()
        .map(|(k, [a, b])| {
            let d = |f: &StateFile| -> Result<FockDensity64> {
                Ok(match f.load_state()? {
                    LoadedState::Pure(v) => v.to_density(),
                    LoadedState::Mixed(m) => m,
                })
            };
            Ok(Pair {
                label: format!("pair{k}"),
                a: d(a)?,
                b: d(b)?,
            })
        })
        .collect()
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Concavity defect `F(λρ_a + (1−λ)ρ_b) − [λF(ρ_a) + (1−λ)F(ρ_b)]` on
/// `points` equally spaced values of `λ ∈ [0, 1]`.
pub fn concavity(pairs: &[Pair], points: usize, s: &Settings) -> Result<Outcome> {
    if points < 2 {
        bail!("need at least two λ values");
    }
    let cfg = s.eval();
    let f = |rho: &FockDensity64| -> Result<f64> { Ok(Analysis64::new(rho, &cfg)?.functional()?) };
    let mut table = Table::new(&["pair", "lambda", "f_mix", "f_linear", "defect"]);
    let mut violations = Vec::new();
    let mut plot = Plot::new("Concavity of the uncertainty functional", "λ", "defect (nats)");
    for (k, pair) in pairs.iter().enumerate() {
        let dim = pair.a.dim().max(pair.b.dim());
        let (a, b) = (pad(&pair.a, dim)?, pad(&pair.b, dim)?);
        let (fa, fb) = (f(&a)?, f(&b)?);
        let rows = (0..points)
            .into_par_iter()
            .map(|i| -> Result<_> {
                let l = i as f64 / (points - 1) as f64;
                let rho = mix(&[a.clone(), b.clone()], &[l, 1.0 - l])?;
                let fm = f(&rho)?;
                Ok((l, fm, l * fa + (1.0 - l) * fb, rho))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut curve = Vec::new();
        for (l, fm, lin, rho) in rows {
            let defect = fm - lin;
            table.push(vec![pair.label.clone().into(), l.into(), fm.into(), lin.into(), defect.into()]);
            curve.push((l, defect));
            if defect < -s.tol {
                violations.push(Violation {
                    description: format!("{} at λ = {l}: defect {defect:.3e}", pair.label),
                    state: StateFile::from_density(&rho),
                });
            }
        }
        plot = plot.with(Series::new(&pair.label, curve, Style::Line, PALETTE[k % PALETTE.len()]));
    }
    let summary = json!({
        "pairs": pairs.iter().map(|p| p.label.clone()).collect::<Vec<_>>(),
        "points": points,
        "min_defect": min_of(table.column("defect")),
    });
    Ok(Outcome {
        name: "concavity",
        table,
        summary,
        violations,
        plot: Some(plot),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Search {
    pub dim: usize,
    pub restarts: u64,
    pub max_evals: usize,
}

impl Default for Search {
    fn default() -> Self {
        Self {
            dim: 6,
            restarts: 50,
            max_evals: 3000,
        }
    }
}

/// Amplitudes `re[0..d] ++ im[0..d]` as a state, padded to at least two levels.
pub fn state_from_coords(x: &[f64], hbar: f64) -> Result<FockVector64> {
    let d = x.len() / 2;
    let len = d.max(2);
    let v = CVector::from_fn(len, |i, _| if i < d { C::new(x[i], x[d + i]) } else { C::new(0.0, 0.0) });
    Ok(FockVector64::from_unnormalized(v, hbar)?)
}

/// Tight-relation slack of the state with coordinates `x`; `+∞` when it
/// cannot be evaluated.
pub fn search_objective(x: &[f64], s: &Settings) -> f64 {
    state_from_coords(x, s.hbar)
        .and_then(|v| tight_row(&v, s))
        .map_or(f64::INFINITY, |r| r.slack)
}

/// Frobenius distance from `γ` to `γ` rescaled to determinant `(ħ/2)²`,
/// the nearest pure-Gaussian covariance with the same shape.
pub fn pure_gaussian_distance(state: &FockVector64) -> Result<f64> {
    let g = epur_core::covariance(state)?;
    let k = 0.5 * g.hbar / g.det().sqrt();
    let frob = (g.sxx * g.sxx + g.spp * g.spp + 2.0 * g.sxp * g.sxp).sqrt();
    Ok((1.0 - k).abs() * frob)
}

struct Restart {
    index: u64,
    x: Vec<f64>,
    value: f64,
    evals: usize,
    trace: Vec<f64>,
}

/// Minimizes the tight-relation slack with restarted Nelder–Mead. Reports
/// the outcome; never records violations, since a genuine negative slack is
/// a finding rather than a failure.
pub fn counterexample(p: &Search, s: &Settings) -> Result<Outcome> {
    if p.dim == 0 || p.restarts == 0 {
        bail!("need dim ≥ 1 and at least one restart");
    }
    let n = p.dim;
    let opts = Options {
        max_evals: p.max_evals,
        step: 0.3,
        ..Options::default()
    };
    let mut runs = (0..p.restarts)
        .into_par_iter()
        .map(|i| -> Result<Restart> {
            let mut rng = trial_rng(s.seed, i);
            let start = haar_random_state_with::<f64, _>(n, n.max(2) - 1, s.hbar, &mut rng)?;
            let a = start.amplitudes();
            let x0: Vec<f64> = (0..n).map(|k| a[k].re).chain((0..n).map(|k| a[k].im)).collect();
            let first = simplex::minimize(|x| search_objective(x, s), &x0, opts);
            // a fresh simplex around the first minimum escapes premature collapse
            let second = simplex::minimize(
                |x| search_objective(x, s),
                &first.x,
                Options {
                    step: 0.05,
                    ..opts
                },
            );
            let mut trace = first.trace;
            trace.extend(second.trace);
            Ok(Restart {
                index: i,
                x: second.x,
                value: second.value,
                evals: first.evals + second.evals,
                trace,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    runs.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.index.cmp(&b.index)));

    let mut table = Table::new(&["restart", "slack", "evals", "vacuum_weight", "gaussian_distance"]);
    for r in &runs {
        let v = state_from_coords(&r.x, s.hbar)?;
        table.push(vec![
            r.index.into(),
            r.value.into(),
            r.evals.into(),
            v.population(0).into(),
            pure_gaussian_distance(&v)?.into(),
        ]);
    }
    let best = &runs[0];
    let best_state = state_from_coords(&best.x, s.hbar)?;
    let summary = json!({
        "dim": n,
        "restarts": p.restarts,
        "best_slack": best.value,
        "best_restart": best.index,
        "best_state": StateFile::from_vector(&best_state),
        "best_vacuum_weight": best_state.population(0),
        "best_gaussian_distance": pure_gaussian_distance(&best_state)?,
        "trace": best.trace,
        "negative_slack_found": best.value < -s.tol,
    });
    let plot = Plot::new("Counterexample search", "iteration", "best slack").with(Series::new(
        "best restart",
        best.trace.iter().enumerate().map(|(i, &v)| (i as f64, v)).collect(),
        Style::Line,
        "#1f77b4",
    ));
    Ok(Outcome {
        name: "counterexample",
        table,
        summary,
        violations: Vec::new(),
        plot: Some(plot),
    })
}

pub fn default_r_grid() -> Vec<f64> {
    vec![0.0, 0.2, 0.4, 0.6, 0.8]
}

pub fn default_theta_grid() -> Vec<f64> {
    (0..5).map(|k| k as f64 * PI / 8.0).collect()
}

/// BBM slack of the squeezed vacuum `S(r, θ)|0⟩`:
/// `½ ln(σx²σp²/(ħ/2)²) = ½ ln(1 + sin²2θ sinh²2r)`, which is `ln cosh 2r`
/// at `θ = π/4` and zero on the axes.
pub fn squeezed_bbm_gap(r: f64, theta: f64) -> f64 {
    0.5 * ((2.0 * theta).sin().powi(2) * (2.0 * r).sinh().powi(2)).ln_1p()
}

/// Rotated squeezed vacua: tight slack, Schrödinger–Robertson slack,
/// BBM slack against its closed form, and the eigencheck residual.
pub fn gaussian_saturation(rs: &[f64], thetas: &[f64], s: &Settings) -> Result<Outcome> {
    let cfg = s.eval();
    let grid: Vec<(f64, f64)> = rs.iter().flat_map(|&r| thetas.iter().map(move |&t| (r, t))).collect();
    let rows = grid
        .par_iter()
        .map(|&(r, theta)| -> Result<_> {
            let spec = GaussianUnitarySpec::rotated(r, theta);
            let state = squeezed_vacuum(spec, s.nmax, s.hbar)?;
            let a = Analysis64::new(&state, &cfg)?;
            let tight = a.tight_epur(&cfg)?.slack;
            let sr = schrodinger_robertson(&a.cov).slack;
            let bbm = a.bbm(&cfg).slack;
            let residual = eigencheck(spec, s.nmax, s.hbar)?.residual;
            Ok((r, theta, tight, sr, bbm, residual, state))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["r", "theta", "tight_slack", "sr_slack", "bbm_slack", "bbm_gap", "ln_cosh_2r", "eigen_residual"]);
    let mut violations = Vec::new();
    for (r, theta, tight, sr, bbm, residual, state) in rows {
        let gap = squeezed_bbm_gap(r, theta);
        let lc = (2.0 * r).cosh().ln();
        table.push(vec![
            r.into(),
            theta.into(),
            tight.into(),
            sr.into(),
            bbm.into(),
            gap.into(),
            lc.into(),
            residual.into(),
        ]);
        let mut fail = |what: String| {
            violations.push(Violation {
                description: format!("r = {r}, θ = {theta}: {what}"),
                state: StateFile::from_vector(&state),
            })
        };
        if tight.abs() >= s.tol {
            fail(format!("tight slack {tight:.3e}"));
        }
        if sr.abs() >= CLOSED_FORM_TOL {
            fail(format!("Schrödinger–Robertson slack {sr:.3e}"));
        }
        if (bbm - gap).abs() >= BBM_GAP_TOL {
            fail(format!("BBM slack {bbm:.6} vs closed form {gap:.6}"));
        }
        if residual >= EIGEN_RESIDUAL_TOL {
            fail(format!("eigencheck residual {residual:.3e}"));
        }
    }
    let gaps: Vec<f64> = table
        .column("bbm_slack")
        .iter()
        .zip(table.column("bbm_gap"))
        .map(|(b, g)| (b - g).abs())
        .collect();
    let summary = json!({
        "points": table.rows.len(),
        "max_abs_tight_slack": table.column("tight_slack").iter().fold(0.0f64, |m, x| m.max(x.abs())),
        "max_abs_sr_slack": table.column("sr_slack").iter().fold(0.0f64, |m, x| m.max(x.abs())),
        "max_bbm_gap_error": gaps.iter().fold(0.0f64, |m, &x| m.max(x)),
        "max_eigen_residual": table.column("eigen_residual").iter().fold(0.0f64, |m, &x| m.max(x)),
    });
    let rcol = table.column("r");
    let plot = Plot::new("Gaussian pure states", "r", "slack (nats)")
        .with(Series::new("BBM slack", rcol.iter().copied().zip(table.column("bbm_slack")).collect(), Style::Dots, "#1f77b4"))
        .with(Series::new(
            "tight slack",
            rcol.iter().copied().zip(table.column("tight_slack")).collect(),
            Style::Dots,
            "#d62728",
        ))
        .with(Series::new(
            "ln cosh 2r",
            (0..=100)
                .map(|k| {
                    let r = rs.iter().fold(0.0f64, |m, &x| m.max(x)) * k as f64 / 100.0;
                    (r, (2.0 * r).cosh().ln())
                })
                .collect(),
            Style::Dashed,
            "black",
        ));
    Ok(Outcome {
        name: "gaussian-saturation",
        table,
        summary,
        violations,
        plot: Some(plot),
    })
}

/// Full relation report for one state. Violations are applicable verdicts
/// with slack below `−tol` and broken chain links.
pub fn check(file: &StateFile, s: &Settings) -> Result<Outcome> {
    let loaded = file.load_state()?;
    let state = loaded.as_state();
    let cfg = s.eval();
    let report = epur_core::evaluate(state, &cfg, true)?;
    let mut table = Table::new(&["relation", "lhs", "rhs", "slack", "saturated", "applicable"]);
    let mut violations = Vec::new();
    for v in &report.verdicts {
        table.push(vec![v.name.into(), v.lhs.into(), v.rhs.into(), v.slack.into(), v.saturated.into(), v.applicable.into()]);
        if !v.holds(s.tol) {
            violations.push(Violation {
                description: format!("{}: slack {:.3e}", v.name, v.slack),
                state: file.clone(),
            });
        }
    }
    for l in &report.chain.links {
        table.push(vec![l.name.into(), l.upper.into(), l.lower.into(), l.slack.into(), false.into(), true.into()]);
        if l.slack < -s.tol {
            violations.push(Violation {
                description: format!("chain link {}: slack {:.3e}", l.name, l.slack),
                state: file.clone(),
            });
        }
    }
    let a = &report.analysis;
    let summary = json!({
        "dim": state.dim(),
        "support": state.support(),
        "tail_weight": state.tail_weight(),
        "mean": a.cov.mean,
        "covariance": { "sxx": a.cov.sxx, "spp": a.cov.spp, "sxp": a.cov.sxp, "det": a.cov.det() },
        "rho": a.cov.correlation(),
        "hx": a.hx,
        "hp": a.hp,
        "nongaussianity": [a.dx, a.dp],
        "chain_strict": report.chain.strict(),
    });
    Ok(Outcome {
        name: "check",
        table,
        summary,
        violations,
        plot: None,
    })
}
