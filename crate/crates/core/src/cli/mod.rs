//! Command-line support: configuration, sweeps and report emission.

pub mod config;
pub mod figures;
pub mod scan;
pub mod table;
pub mod validate;

use crate::error::Result;
use crate::experiments::params::ExperimentParams;
use crate::operator::choose_truncation;

/// Grid point with `ν = 0`, pulse area set from `δ`, and the configured Fock truncation.
pub fn point_params(
    cfg: &config::SweepConfig,
    gamma: f64,
    phi: f64,
    delta: f64,
    nu_tau: f64,
    omega_t1: f64,
) -> Result<ExperimentParams> {
    let fock = choose_truncation(gamma, cfg.fock_tail_tol)?;
    Ok(ExperimentParams::with_delta(delta, gamma, phi)?
        .with_nu_tau(nu_tau)
        .with_omega_t1(omega_t1)
        .with_fock(fock))
}
