//! Data behind the non-ideality and complementarity figures.

use std::f64::consts::{FRAC_PI_2, LN_2};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::haroche::{dh_bivariate, dh_entropies, dh_povm_closed_form, dh_reference_pvms};
use crate::experiments::homodyne::homodyne_marginal_analysis;
use crate::povm::check_joint_inequality;
use crate::tolerances;

use super::config::{Range, SweepConfig};
use super::point_params;
use super::table::{Cell, Table};

/// Command-line overrides of the `γ` grid.
#[derive(Clone, Copy, Debug, Default)]
pub struct GammaOverride {
    pub steps: Option<usize>,
    pub gamma_max: Option<f64>,
}

fn gamma_values(cfg: &SweepConfig, default: Range, ov: GammaOverride) -> Result<Vec<f64>> {
    let mut r = cfg.grid.gamma.unwrap_or(default);
    if let Some(s) = ov.steps {
        r.steps = s;
    }
    if let Some(m) = ov.gamma_max {
        r.max = m;
    }
    if r.steps == 0 || r.min > r.max || r.min < 0.0 || !r.max.is_finite() {
        return Err(Error::Precondition(format!("invalid gamma grid {r:?}")));
    }
    Ok(r.values())
}

fn cross(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

fn fail(figure: u8, what: String) -> Error {
    Error::CheckFailed(format!("figure {figure}: {what}"))
}

fn collect(columns: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Result<Table> {
    let mut t = Table::new(columns);
    for r in rows {
        t.push(r)?;
    }
    Ok(t)
}

/// `(gamma, phi, J_HR, J_DH)`; checks `J_DH ≤ J_HR`, strict wherever `J_HR > 0`.
pub fn figure2(cfg: &SweepConfig, ov: GammaOverride) -> Result<Table> {
    let gammas = gamma_values(cfg, Range::new(0.0, 3.0, 13), ov)?;
    let phis = cfg.values_or(cfg.grid.phi, Range::point(FRAC_PI_2));
    let rows = cross(&gammas, &phis)
        .par_iter()
        .map(|&(g, phi)| {
            let p = point_params(cfg, g, phi, 0.0, 0.0, 0.0)?;
            let e = dh_entropies(&p)?;
            let tol = tolerances::INEQUALITY;
            if e.j_dh > e.j_hr + tol || (e.j_hr > tol && e.j_dh >= e.j_hr) {
                return Err(fail(2, format!("J_DH = {} vs J_HR = {} at gamma={g}, phi={phi}", e.j_dh, e.j_hr)));
            }
            Ok(vec![Cell::Real(g), Cell::Real(phi), Cell::Real(e.j_hr), Cell::Real(e.j_dh)])
        })
        .collect::<Result<Vec<_>>>()?;
    collect(vec!["gamma", "phi", "J_HR", "J_DH"], rows)
}

/// `(gamma, phi, J_lambda, J_mu)` of the two-atom arrangement; checks the joint inequality.
pub fn figure3(cfg: &SweepConfig, ov: GammaOverride) -> Result<Table> {
    let gammas = gamma_values(cfg, Range::new(0.0, 3.0, 13), ov)?;
    let phis = cfg.values_or(cfg.grid.phi, Range::point(FRAC_PI_2));
    let rows = cross(&gammas, &phis)
        .par_iter()
        .map(|&(g, phi)| {
            let p = point_params(cfg, g, phi, 0.0, 0.0, 0.0)?;
            let e = dh_entropies(&p)?;
            let b = dh_bivariate(&dh_povm_closed_form(&p)?)?;
            let (rows, cols) = dh_reference_pvms(&b)?;
            let r = check_joint_inequality(&b, &rows, &cols)?;
            if !r.holds() {
                return Err(fail(3, format!("slack {} at gamma={g}, phi={phi}", r.slack)));
            }
            Ok(vec![Cell::Real(g), Cell::Real(phi), Cell::Real(e.j_lambda), Cell::Real(e.j_mu)])
        })
        .collect::<Result<Vec<_>>>()?;
    collect(vec!["gamma", "phi", "J_lambda", "J_mu"], rows)
}

/// `(gamma, J_lambda, J_mu, bound)` for the homodyne readout at `δ = 0`, `Φ = π/2`.
pub fn figure4(cfg: &SweepConfig, ov: GammaOverride) -> Result<Table> {
    let gammas = gamma_values(cfg, Range::new(0.0, 5.0, 11), ov)?;
    let rows = gammas
        .par_iter()
        .map(|&g| {
            let p = point_params(cfg, g, FRAC_PI_2, 0.0, 0.0, 0.0)?;
            let r = homodyne_marginal_analysis(&p)?;
            let ineq = r
                .inequality
                .ok_or_else(|| fail(4, format!("no reference PVM at gamma={g}")))?;
            if (ineq.bound - LN_2).abs() > 1e-12 {
                return Err(fail(4, format!("bound {} differs from ln 2", ineq.bound)));
            }
            if r.j_lambda + r.j_mu - ineq.bound < -tolerances::INEQUALITY {
                return Err(fail(4, format!("inequality violated at gamma={g}")));
            }
            Ok(vec![Cell::Real(g), Cell::Real(r.j_lambda), Cell::Real(r.j_mu), Cell::Real(ineq.bound)])
        })
        .collect::<Result<Vec<_>>>()?;
    collect(vec!["gamma", "J_lambda", "J_mu", "bound"], rows)
}

/// `(gamma_sin_phi, delta, J_lambda_prime, J_mu_prime)` for general homodyne parameters.
///
/// Grid points with `δ = ±1` are left out.
pub fn figure5(cfg: &SweepConfig, ov: GammaOverride) -> Result<Table> {
    let gammas = gamma_values(cfg, Range::new(0.0, 3.0, 13), ov)?;
    let phis = cfg.values_or(cfg.grid.phi, Range::point(FRAC_PI_2));
    let deltas = cfg.values_or(cfg.grid.delta, Range::new(-0.9, 0.9, 7));
    let points: Vec<(f64, f64, f64)> = cross(&gammas, &phis)
        .into_iter()
        .flat_map(|(g, phi)| deltas.iter().map(move |&d| (g, phi, d)))
        .filter(|&(_, _, d)| d.abs() < 1.0)
        .collect();
    let rows = points
        .par_iter()
        .map(|&(g, phi, d)| {
            let p = point_params(cfg, g, phi, d, 0.0, 0.0)?;
            let r = homodyne_marginal_analysis(&p)?;
            if let Some(ineq) = &r.inequality {
                if !ineq.holds() {
                    return Err(fail(5, format!("slack {} at gamma={g}, phi={phi}, delta={d}", ineq.slack)));
                }
            }
            Ok(vec![
                Cell::Real(g * phi.sin()),
                Cell::Real(d),
                Cell::Real(r.j_lambda),
                Cell::Real(r.j_mu),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    collect(vec!["gamma_sin_phi", "delta", "J_lambda_prime", "J_mu_prime"], rows)
}

pub fn figure(id: u8, cfg: &SweepConfig, ov: GammaOverride) -> Result<Table> {
    match id {
        2 => figure2(cfg, ov),
        3 => figure3(cfg, ov),
        4 => figure4(cfg, ov),
        5 => figure5(cfg, ov),
        _ => Err(Error::Precondition(format!("unknown figure {id}; expected 2, 3, 4 or 5"))),
    }
}
