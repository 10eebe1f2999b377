//! Cross-check suite run by `povmlab validate`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::experiments::haroche::{
    dh_bivariate, dh_entropies, dh_entropies_fitted, dh_povm, dh_povm_closed_form, dh_povm_simulated,
    dh_reference_pvms, hr_atom_povm, hr_atom_povm_closed_form,
};
use crate::experiments::homodyne::{homodyne_complement, homodyne_marginal_analysis, homodyne_povm, homodyne_povm_simulated};
use crate::experiments::number::{expected_number_readout_rank, number_readout_povm, number_readout_povm_simulated};
use crate::experiments::params::ExperimentParams;
use crate::experiments::ramsey::{first_pulse, interference_povm, second_pulse, two_cavity_unitary};
use crate::hilbert_schmidt::subspace_of;
use crate::operator::atom;
use crate::povm::check_joint_inequality;
use crate::tolerances;

use super::config::{Experiment, SweepConfig};
use super::point_params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub experiment: Experiment,
    pub gamma: f64,
    pub phi: f64,
    pub delta: f64,
    pub nu_tau: f64,
    pub omega_t1: f64,
    pub truncation: usize,
    pub status: Status,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub skipped: usize,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Point {
    gamma: f64,
    phi: f64,
    delta: f64,
    nu_tau: f64,
    omega_t1: f64,
}

struct Recorder<'a> {
    point: &'a Point,
    truncation: usize,
    filter: Option<Experiment>,
    out: Vec<Check>,
}

impl Recorder<'_> {
    fn push(&mut self, name: &'static str, experiment: Experiment, status: Status, residual: Option<f64>, tolerance: Option<f64>, detail: Option<String>) {
        let pt = self.point;
        self.out.push(Check {
            name,
            experiment,
            gamma: pt.gamma,
            phi: pt.phi,
            delta: pt.delta,
            nu_tau: pt.nu_tau,
            omega_t1: pt.omega_t1,
            truncation: self.truncation,
            status,
            residual,
            tolerance,
            detail,
        });
    }

    fn wanted(&self, e: Experiment) -> bool {
        self.filter.is_none_or(|f| f == e)
    }

    /// Records `residual ≤ tolerance`, or a failure carrying the error.
    fn check(&mut self, name: &'static str, e: Experiment, tol: f64, f: impl FnOnce() -> Result<f64>) {
        if !self.wanted(e) {
            return;
        }
        match f() {
            Ok(r) if r <= tol => self.push(name, e, Status::Pass, Some(r), Some(tol), None),
            Ok(r) => self.push(name, e, Status::Fail, Some(r), Some(tol), Some(format!("residual {r:e} exceeds {tol:e}"))),
            Err(err) => self.push(name, e, Status::Fail, None, Some(tol), Some(err.to_string())),
        }
    }

    fn skip(&mut self, name: &'static str, e: Experiment, reason: &str) {
        if self.wanted(e) {
            self.push(name, e, Status::Skip, None, None, Some(reason.to_string()));
        }
    }
}

const REGIME: &str = "closed form is given only for resonant pi/2 pulses";
const TRIVIAL: &str = "delta = +-1: the POVM is a trivial refinement of {|e><e|, |g><g|}";

fn run_point(cfg: &SweepConfig, pt: &Point) -> Vec<Check> {
    use Experiment::*;
    let p = match point_params(cfg, pt.gamma, pt.phi, pt.delta, pt.nu_tau, pt.omega_t1) {
        Ok(p) => p,
        Err(e) => {
            let mut r = Recorder { point: pt, truncation: 0, filter: None, out: Vec::new() };
            r.push("parameters", Ramsey, Status::Fail, None, None, Some(e.to_string()));
            return r.out;
        }
    };
    let mut r = Recorder {
        point: pt,
        truncation: p.fock.truncation(),
        filter: cfg.experiment,
        out: Vec::new(),
    };
    let exact = tolerances::CROSS_CHECK_EXACT;
    let special = tolerances::CROSS_CHECK_SPECIAL;
    let ineq = tolerances::INEQUALITY;
    let trivial = (p.delta().abs() - 1.0).abs() < 1e-12;

    r.check("pulse_unitarity", Ramsey, 1e-12, || {
        Ok(first_pulse(&p).unitarity_residual().max(second_pulse(&p).unitarity_residual()))
    });
    r.check("interference_vs_two_cavity", Ramsey, 1e-10, || {
        let sim = atom::proj_e().heisenberg(&two_cavity_unitary(&p));
        Ok(interference_povm(&p)?.op(0).max_abs_diff(&sim))
    });

    if p.in_pi_half_regime() {
        r.check("hr_closed_vs_simulation", Hr, exact, || {
            Ok(hr_atom_povm_closed_form(&p)?.max_abs_diff(&hr_atom_povm(&p)?))
        });
        r.check("dh_closed_vs_simulation", Dh, exact, || {
            Ok(dh_povm_closed_form(&p)?.max_abs_diff(&dh_povm_simulated(&p)?))
        });
        r.check("dh_entropies_vs_fits", Dh, exact, || {
            let a = dh_entropies(&p)?;
            let b = dh_entropies_fitted(&p)?;
            Ok([a.j_hr - b.j_hr, a.j_dh - b.j_dh, a.j_lambda - b.j_lambda, a.j_mu - b.j_mu]
                .iter()
                .fold(0.0, |m, x| m.max(x.abs())))
        });
        r.check("dh_ordering", Dh, ineq, || {
            let e = dh_entropies(&p)?;
            Ok(e.j_dh - e.j_hr)
        });
    } else {
        r.check("hr_povm_valid", Hr, tolerances::COMPLETE, || hr_atom_povm(&p).map(|_| 0.0));
        r.skip("hr_closed_vs_simulation", Hr, REGIME);
        r.skip("dh_closed_vs_simulation", Dh, REGIME);
        r.skip("dh_entropies_vs_fits", Dh, REGIME);
    }
    r.check("dh_joint_inequality", Dh, ineq, || {
        let b = dh_bivariate(&dh_povm(&p)?)?;
        let (e, f) = dh_reference_pvms(&b)?;
        Ok(-check_joint_inequality(&b, &e, &f)?.slack)
    });

    if trivial {
        for (name, e) in [
            ("number_closed_vs_simulation", Number),
            ("number_rank", Number),
            ("homodyne_closed_vs_simulation", Homodyne),
            ("homodyne_joint_inequality", Homodyne),
            ("homodyne_complement", Homodyne),
        ] {
            r.skip(name, e, TRIVIAL);
        }
        return r.out;
    }
    r.check("number_closed_vs_simulation", Number, exact, || {
        Ok(number_readout_povm(&p)?.max_abs_diff(&number_readout_povm_simulated(&p)?))
    });
    r.check("number_rank", Number, 0.0, || {
        let rank = subspace_of(&number_readout_povm(&p)?, tolerances::RANK).rank();
        Ok((rank as f64 - expected_number_readout_rank(&p) as f64).abs())
    });
    r.check("homodyne_closed_vs_simulation", Homodyne, special, || {
        Ok(homodyne_povm(&p)?.max_abs_diff(&homodyne_povm_simulated(&p)?))
    });
    match homodyne_marginal_analysis(&p) {
        Ok(rep) if rep.degenerate => r.skip(
            "homodyne_joint_inequality",
            Homodyne,
            "degenerate atomic marginal: no reference PVM",
        ),
        Ok(rep) => r.check("homodyne_joint_inequality", Homodyne, ineq, || {
            Ok(-rep.inequality.expect("non-degenerate").slack)
        }),
        Err(e) => r.check("homodyne_joint_inequality", Homodyne, ineq, || Err(e)),
    }
    if p.erf_a() == 0.0 {
        r.skip("homodyne_complement", Homodyne, "gamma * sin(phi) = 0: field decouples");
    } else {
        r.check("homodyne_complement", Homodyne, 1e-10, || Ok(homodyne_complement(&p)?.max_overlap));
    }
    r.out
}

fn values(r: Option<super::config::Range>, default: &[f64]) -> Vec<f64> {
    r.map_or_else(|| default.to_vec(), |r| r.values())
}

/// Runs every cross-check over the configured grid.
pub fn validate(cfg: &SweepConfig) -> ValidationReport {
    let g = &cfg.grid;
    let gammas = values(g.gamma, &[0.0, 0.5, 1.0, 2.0, 3.0]);
    let phis = values(g.phi, &[FRAC_PI_6, FRAC_PI_4, FRAC_PI_2]);
    let deltas = values(g.delta, &[0.0, 0.3]);
    let nu_taus = values(g.nu_tau, &[0.0]);
    let t1s = values(g.omega_t1, &[0.3]);
    let mut points = Vec::new();
    for &gamma in &gammas {
        for &phi in &phis {
            for &delta in &deltas {
                for &nu_tau in &nu_taus {
                    for &omega_t1 in &t1s {
                        points.push(Point { gamma, phi, delta, nu_tau, omega_t1 });
                    }
                }
            }
        }
    }
    let checks: Vec<Check> = points.par_iter().flat_map_iter(|pt| run_point(cfg, pt)).collect();
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    let skipped = checks.iter().filter(|c| c.status == Status::Skip).count();
    ValidationReport {
        passed: failed == 0,
        total: checks.len(),
        failed,
        skipped,
        checks,
    }
}

/// Parameters of a named grid point, for callers that want to re-run a single check.
pub fn params_of(cfg: &SweepConfig, c: &Check) -> Result<ExperimentParams> {
    point_params(cfg, c.gamma, c.phi, c.delta, c.nu_tau, c.omega_t1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_passes() {
        let cfg = SweepConfig::from_toml("[grid.gamma]\nmin = 1.0\nmax = 1.0\n[grid.phi]\nmin = 0.7\nmax = 0.7\n").unwrap();
        let rep = validate(&cfg);
        assert!(rep.passed, "{:?}", rep.first_failure());
        assert!(rep.skipped > 0);
    }

    #[test]
    fn trivial_delta_is_skipped_with_reason() {
        let cfg = SweepConfig::from_toml(
            "experiment = \"number\"\n[grid.gamma]\nmin = 1.0\nmax = 1.0\n[grid.phi]\nmin = 0.7\nmax = 0.7\n[grid.delta]\nmin = 1.0\nmax = 1.0\n",
        )
        .unwrap();
        let rep = validate(&cfg);
        assert!(rep.passed);
        assert!(rep.checks.iter().all(|c| c.status == Status::Skip && c.detail.as_deref() == Some(TRIVIAL)));
    }

    #[test]
    fn loose_truncation_is_reported() {
        let cfg = SweepConfig::from_toml("fock_tail_tol = 0.1\n[grid.gamma]\nmin = 3.0\nmax = 3.0\n[grid.phi]\nmin = 0.7\nmax = 0.7\n").unwrap();
        let rep = validate(&cfg);
        assert!(!rep.passed);
        let f = rep.first_failure().unwrap();
        assert!(f.truncation < 15, "{f:?}");
    }
}
