//! Span dimensions of the number-readout and two-atom POVMs over `(Φ, δ, ντ)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::haroche::dh_povm;
use crate::experiments::number::{expected_number_readout_rank, number_readout_povm};
use crate::experiments::params::ExperimentParams;
use crate::hilbert_schmidt::subspace_of;
use crate::tolerances;

use super::config::{Range, SweepConfig};
use super::point_params;
use super::table::{Cell, Table};

pub const DEFAULT_GAMMA: f64 = 1.3;

/// Equal spans are required only where both POVMs are known to share the pattern.
fn equivalence_required(p: &ExperimentParams) -> bool {
    let r = (p.phi - FRAC_PI_2).rem_euclid(PI);
    p.delta().abs() < 1e-9 || r.min(PI - r) < 1e-9
}

/// Rank and equivalence for one grid point.
pub fn scan_point(p: &ExperimentParams) -> Result<(usize, usize, bool)> {
    let num = subspace_of(&number_readout_povm(p)?, tolerances::RANK);
    let dh = subspace_of(&dh_povm(p)?, tolerances::RANK);
    let equivalent = num.rank() == dh.rank() && num.projector_distance(&dh)? <= tolerances::CROSS_CHECK_EXACT;
    Ok((num.rank(), dh.rank(), equivalent))
}

/// Rows `(phi, delta, nu_tau, rank_number_readout, rank_dh, equivalent)`.
///
/// Aborts if a number-readout rank departs from the 4/3/2 pattern, or if the spans
/// differ at a point with `δ = 0` or `Φ ≡ π/2`.
pub fn subspace_scan(cfg: &SweepConfig) -> Result<Table> {
    let phis = match cfg.grid.phi {
        Some(r) => r.values(),
        None => vec![FRAC_PI_3, FRAC_PI_2, 1.1],
    };
    let deltas = cfg.values_or(cfg.grid.delta, Range::new(0.0, 0.3, 2));
    let nu_taus = cfg.values_or(cfg.grid.nu_tau, Range::point(0.0));
    let gamma = cfg.grid.gamma.map_or(DEFAULT_GAMMA, |r| r.min);
    let mut points = Vec::new();
    for &phi in &phis {
        for &d in &deltas {
            for &nt in &nu_taus {
                points.push((phi, d, nt));
            }
        }
    }
    let rows = points
        .par_iter()
        .map(|&(phi, d, nt)| {
            let p = point_params(cfg, gamma, phi, d, nt, 0.0)?;
            let (rn, rd, eq) = scan_point(&p)?;
            let want = expected_number_readout_rank(&p);
            if rn != want {
                return Err(Error::CheckFailed(format!(
                    "number-readout rank {rn}, expected {want} at phi={phi}, delta={d}, nu_tau={nt}"
                )));
            }
            if equivalence_required(&p) && !eq {
                return Err(Error::CheckFailed(format!(
                    "spans differ at phi={phi}, delta={d}, nu_tau={nt} (ranks {rn}, {rd})"
                )));
            }
            Ok(vec![
                Cell::Real(phi),
                Cell::Real(d),
                Cell::Real(nt),
                Cell::Int(rn),
                Cell::Int(rd),
                Cell::Bool(eq),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(vec!["phi", "delta", "nu_tau", "rank_number_readout", "rank_dh", "equivalent"]);
    for r in rows {
        t.push(r)?;
    }
    Ok(t)
}
