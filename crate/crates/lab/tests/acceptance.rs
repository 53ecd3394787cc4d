//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; the process fails if any does.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use epur_core::multimode::random_physical_gamma_with;
use epur_core::relations::wigner_entropy;
use epur_core::*;
use epur_lab::experiments::{self, squeezed_bbm_gap, Neighborhood, Search};
use epur_lab::Settings;

const TOL: f64 = 1e-4;

type Res<T, E> = std::result::Result<T, E>;

struct Criterion {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: usize, name: &'static str, f: impl FnOnce() -> Res<(bool, String), String>) -> Criterion {
    let t = Instant::now();
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    let c = Criterion {
        id,
        name,
        pass,
        detail,
        elapsed: t.elapsed(),
    };
    println!(
        "[{}] criterion {:>2} {:<28} {:>8.2}s  {}",
        if c.pass { "PASS" } else { "FAIL" },
        c.id,
        c.name,
        c.elapsed.as_secs_f64(),
        c.detail
    );
    c
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn saturation() -> Res<(bool, String), String> {
    let t = Instant::now();
    let o = experiments::gaussian_saturation(&experiments::default_r_grid(), &experiments::default_theta_grid(), &Settings::default())
        .map_err(err)?;
    let tight = max_abs(&o.table.column("tight_slack"));
    let sr = max_abs(&o.table.column("sr_slack"));
    let secs = t.elapsed().as_secs_f64();
    let ok = o.table.rows.len() == 25 && tight < 1e-4 && sr < 1e-8 && secs < 120.0;
    Ok((ok, format!("25 states: max |tight| {tight:.2e}, max |SR| {sr:.2e}")))
}

fn bbm_gap() -> Res<(bool, String), String> {
    let o = experiments::gaussian_saturation(&experiments::default_r_grid(), &experiments::default_theta_grid(), &Settings::default())
        .map_err(err)?;
    let (r, th, bbm) = (o.table.column("r"), o.table.column("theta"), o.table.column("bbm_slack"));
    let mut diagonal = 0.0f64;
    let mut general = 0.0f64;
    for k in 0..r.len() {
        general = general.max((bbm[k] - squeezed_bbm_gap(r[k], th[k])).abs());
        if (th[k] - PI / 4.0).abs() < 1e-12 {
            diagonal = diagonal.max((bbm[k] - (2.0 * r[k]).cosh().ln()).abs());
        }
    }
    let ok = diagonal < 2e-4 && general < 2e-4;
    Ok((
        ok,
        format!("θ=π/4 vs ln cosh 2r: {diagonal:.2e}; all θ vs ½ln(1+sin²2θ sinh²2r): {general:.2e}"),
    ))
}

fn passive() -> Res<(bool, String), String> {
    let t = Instant::now();
    let o = experiments::passive_scan(20, &Settings::default()).map_err(err)?;
    let joint = o.table.column("joint_slack").into_iter().fold(f64::INFINITY, f64::min);
    let mi = o.table.column("mutual_information").into_iter().fold(f64::INFINITY, f64::min);
    let secs = t.elapsed().as_secs_f64();
    let ok = joint >= -TOL && mi >= -TOL && secs < 300.0;
    Ok((
        ok,
        format!(
            "min h(x,p)−ln(πe) {joint:.2e}, min h(x)+h(p)−h(x,p) {mi:.2e}, increasing: marginals {} joint {}",
            o.summary["marginal_sum_increasing"], o.summary["joint_increasing"]
        ),
    ))
}

fn random_states() -> Res<(bool, String), String> {
    let t = Instant::now();
    let o = experiments::random_scan(1000, 4, &Settings::default()).map_err(err)?;
    let secs = t.elapsed().as_secs_f64();
    let has_curve = o.table.column("bound").len() == 1000 && o.plot.as_ref().is_some_and(|p| p.series.len() == 2);
    let ok = o.passed() && has_curve && secs < 600.0;
    Ok((
        ok,
        format!("{} violations in 1000, min slack {:.3e}", o.violations.len(), o.summary["min_slack"].as_f64().unwrap_or(f64::NAN)),
    ))
}

fn neighborhood() -> Res<(bool, String), String> {
    let s = Settings::default();
    let o = experiments::neighborhood(&Neighborhood::default(), &s).map_err(err)?;
    let wide = experiments::neighborhood(
        &Neighborhood {
            eps: 0.1,
            ..Neighborhood::default()
        },
        &s,
    )
    .map_err(err)?;
    let min = o.summary["min_slack"].as_f64().unwrap_or(f64::NAN);
    let min_wide = wide.summary["min_slack"].as_f64().unwrap_or(f64::NAN);
    Ok((
        o.passed() && o.table.rows.len() == 500,
        format!("{} violations in 500, min slack {min:.3e} (ε=0.1: {min_wide:.3e})", o.violations.len()),
    ))
}

fn concavity() -> Res<(bool, String), String> {
    let pairs = experiments::default_pairs(1.0).map_err(err)?;
    let o = experiments::concavity(&pairs, 21, &Settings::default()).map_err(err)?;
    let min = o.summary["min_defect"].as_f64().unwrap_or(f64::NAN);
    Ok((o.passed() && min >= -TOL, format!("{} pairs × 21 λ, min defect {min:.3e}", pairs.len())))
}

fn eigen() -> Res<(bool, String), String> {
    let mut worst = 0.0f64;
    for r in [0.0, 0.2, 0.4, 0.6, 0.8] {
        for k in 0..8 {
            let phi = k as f64 * PI / 4.0;
            let rep = eigencheck(GaussianUnitarySpec::squeeze(r, phi), 80, 1.0).map_err(err)?;
            worst = worst.max(rep.residual);
        }
    }
    Ok((worst < 1e-7, format!("40 (r, φ) at nmax 80, max residual {worst:.2e}")))
}

fn nmode_closed_forms() -> Res<(bool, String), String> {
    let mut worst_bbm = 0.0f64;
    let mut worst_tight = 0.0f64;
    let mut worst_tms = 0.0f64;
    for r in [0.1f64, 0.3, 0.5, 0.8, 1.2] {
        let g = rotated_pair::<f64>(r, 1.0).map_err(err)?;
        worst_bbm = worst_bbm.max((nmode_bbm(&g).map_err(err)?.slack - 2.0 * (2.0 * r).cosh().ln()).abs());
        worst_tight = worst_tight.max(nmode_tight(&g).map_err(err)?.slack.abs());
        let t = two_mode_squeezed::<f64>(r, 1.0).map_err(err)?;
        worst_tms = worst_tms.max(nmode_bbm(&t).map_err(err)?.slack.abs());
    }
    let ok = worst_bbm < 1e-12 && worst_tight < 1e-12 && worst_tms < 1e-12;
    Ok((
        ok,
        format!("rotated pair: |bbm − 2ln cosh 2r| {worst_bbm:.1e}, |tight| {worst_tight:.1e}; two-mode squeezed |bbm| {worst_tms:.1e}"),
    ))
}

fn chains() -> Res<(bool, String), String> {
    let cfg = EvalConfig::default();
    let mut worst_fock = f64::INFINITY;
    for i in 0..200u64 {
        let mut rng = trial_rng(9, i);
        let dim = 1 + (i as usize % 6);
        let nmax = dim.max(2) - 1;
        let a = haar_random_state_with::<f64, _>(dim, nmax, 1.0, &mut rng).map_err(err)?;
        let report = if i % 2 == 0 {
            implication_chain(&a, &cfg).map_err(err)?
        } else {
            let b = haar_random_state_with::<f64, _>(dim, nmax, 1.0, &mut rng).map_err(err)?;
            let w = (i as f64 * 0.37).fract();
            let rho = mix(&[a.to_density(), b.to_density()], &[w, 1.0 - w]).map_err(err)?;
            implication_chain(&rho, &cfg).map_err(err)?
        };
        worst_fock = worst_fock.min(report.min_slack());
    }
    let mut worst_gauss = f64::INFINITY;
    for i in 0..200u64 {
        let n = 1 + (i as usize % 4);
        let g = random_physical_gamma_with::<f64, _>(n, 1.0, &mut trial_rng(11, i)).map_err(err)?;
        worst_gauss = worst_gauss.min(nmode_chain(&g).map_err(err)?.min_slack());
    }
    let ok = worst_fock >= -TOL && worst_gauss >= -CLOSED_FORM_TOL;
    Ok((ok, format!("min link slack: Fock {worst_fock:.3e}, Gaussian {worst_gauss:.3e}")))
}

const CLOSED_FORM_TOL: f64 = 1e-8;

fn search() -> Res<(bool, String), String> {
    let s = Settings::default();
    let mut parts = Vec::new();
    let mut worst = f64::INFINITY;
    for dim in 2..=6 {
        let o = experiments::counterexample(
            &Search {
                dim,
                restarts: 50,
                ..Search::default()
            },
            &s,
        )
        .map_err(err)?;
        let best = o.summary["best_slack"].as_f64().unwrap_or(f64::NAN);
        worst = worst.min(best);
        parts.push(format!("d{dim} {best:.1e}"));
    }
    Ok((worst >= -TOL, format!("best slack per dim: {}", parts.join(", "))))
}

struct Entropies {
    label: &'static str,
    values: Vec<f64>,
}

fn entropies<S: FockState<f64>>(label: &'static str, state: &S, cfg: &EvalConfig, joint: bool) -> Res<Entropies, String> {
    let a = StateAnalysis::new(state, cfg).map_err(err)?;
    let mut values = vec![a.hx, a.hp];
    if joint {
        values.push(wigner_entropy(state, cfg).map_err(err)?.value);
    }
    Ok(Entropies { label, values })
}

fn hygiene() -> Res<(bool, String), String> {
    let cfg = EvalConfig::default();
    let fine = cfg.refined();
    let nmax = 64;
    let squeezed = |nmax| squeezed_vacuum(GaussianUnitarySpec::rotated(0.5, PI / 8.0), nmax, 1.0);
    let sq = squeezed(nmax).map_err(err)?;
    let sq_big = squeezed(nmax + 16).map_err(err)?;
    let haar = haar_random_state::<f64>(4, nmax, 1.0, 7).map_err(err)?;
    let passive = extremal_passive_state::<f64>(5, nmax, 1.0).map_err(err)?;
    let passive_big = extremal_passive_state::<f64>(5, nmax + 16, 1.0).map_err(err)?;

    let mut grid_worst = (0.0f64, "");
    let mut cut_worst = (0.0f64, "");
    let compare = |a: Entropies, b: Entropies, worst: &mut (f64, &'static str)| {
        for (x, y) in a.values.iter().zip(&b.values) {
            let d = (x - y).abs();
            if d > worst.0 {
                *worst = (d, a.label);
            }
        }
    };
    compare(entropies("squeezed", &sq, &cfg, true)?, entropies("squeezed", &sq, &fine, true)?, &mut grid_worst);
    compare(entropies("haar", &haar, &cfg, false)?, entropies("haar", &haar, &fine, false)?, &mut grid_worst);
    compare(entropies("passive", &passive, &cfg, true)?, entropies("passive", &passive, &fine, true)?, &mut grid_worst);
    compare(entropies("squeezed", &sq, &cfg, true)?, entropies("squeezed", &sq_big, &cfg, true)?, &mut cut_worst);
    compare(
        entropies("haar", &haar, &cfg, false)?,
        entropies("haar", &haar.embed(nmax + 16).map_err(err)?, &cfg, false)?,
        &mut cut_worst,
    );
    compare(entropies("passive", &passive, &cfg, true)?, entropies("passive", &passive_big, &cfg, true)?, &mut cut_worst);
    let ok = grid_worst.0 < 1e-6 && cut_worst.0 < 1e-5;
    Ok((
        ok,
        format!(
            "grid doubling max Δ {:.2e} ({}), nmax+16 max Δ {:.2e} ({})",
            grid_worst.0, grid_worst.1, cut_worst.0, cut_worst.1
        ),
    ))
}

fn main() {
    let results = [
        run(1, "gaussian saturation", saturation),
        run(2, "bbm gap", bbm_gap),
        run(3, "passive states", passive),
        run(4, "random states", random_states),
        run(5, "gaussian neighborhood", neighborhood),
        run(6, "concavity", concavity),
        run(7, "eigencheck", eigen),
        run(8, "n-mode closed forms", nmode_closed_forms),
        run(9, "inequality chains", chains),
        run(10, "counterexample search", search),
        run(11, "numerical hygiene", hygiene),
    ];
    let failed: Vec<usize> = results.iter().filter(|c| !c.pass).map(|c| c.id).collect();
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}
