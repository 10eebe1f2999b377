//! Final atomic state read out jointly with the cavity photon number.

use crate::error::Result;
use crate::operator::{cis, poisson_weight, re, Operator, C64};
use crate::povm::Povm;
use crate::tolerances;

use super::params::ExperimentParams;
use super::simulate::{extract_operators, simulate_hr_final_state};

fn labels(dim: usize) -> Vec<String> {
    (0..dim).flat_map(|n| [format!("e{n}"), format!("g{n}")]).collect()
}

/// `D(ωt₁) = diag(1, e^{iωt₁})`, which carries the `ωt₁ = 0` POVMs to general entry phase.
pub fn entry_phase_unitary(omega_t1: f64) -> Operator {
    Operator::from_diagonal(&[re(1.0), cis(omega_t1)])
}

/// `{M_en, M_gn}` from the closed form with `φ_n = 2nΦ + ντ + 2ψ`, ordered `e0, g0, e1, g1, …`.
pub fn number_readout_povm(p: &ExperimentParams) -> Result<Povm> {
    let d = p.delta();
    let psi = p.psi();
    let w = (1.0 - d * d).max(0.0).sqrt();
    let u = entry_phase_unitary(p.omega_t1);
    let mut ops = Vec::with_capacity(2 * p.fock.dim());
    for n in 0..p.fock.dim() {
        let weight = poisson_weight(p.gamma * p.gamma, n);
        let ph = 2.0 * n as f64 * p.phi + p.nu_tau + 2.0 * psi;
        let c2 = (0.5 * ph).cos().powi(2);
        let s2 = (0.5 * ph).sin().powi(2);
        let off = -cis(-psi) * (0.5 * w) * C64::new(ph.sin(), 2.0 * d * c2);
        let bright = re(s2 + d * d * c2);
        let dark = re((1.0 - d * d) * c2);
        let m_e = Operator::from_2x2(bright, off, off.conj(), dark);
        let m_g = Operator::from_2x2(dark, -off, -off.conj(), bright);
        ops.push(m_e.scale_real(weight).conjugate_by(&u));
        ops.push(m_g.scale_real(weight).conjugate_by(&u));
    }
    Povm::with_labels(labels(p.fock.dim()), ops, tolerances::COMPLETE)
}

/// Same POVM from simulation with pointer PVM `{|m⟩⟨m| ⊗ |n⟩⟨n|}`.
pub fn number_readout_povm_simulated(p: &ExperimentParams) -> Result<Povm> {
    let f = p.fock.dim();
    let ops = extract_operators(|psi| {
        let out = simulate_hr_final_state(p, psi)?;
        Ok((0..f)
            .flat_map(|n| [out.get(n).norm_sqr(), out.get(f + n).norm_sqr()])
            .collect())
    })?;
    Povm::with_labels(labels(f), ops, tolerances::COMPLETE)
}

fn near_multiple(x: f64, period: f64, offset: f64) -> bool {
    let r = (x - offset).rem_euclid(period);
    r.min(period - r) < 1e-9
}

/// Span dimension predicted from the special parameter values.
///
/// 4 in general, 3 when exactly one of `Φ ≡ π/2 (mod π)` and `δ = 0` holds, 2 when both hold.
/// Trivial cases (`γ = 0`, `Φ ≡ 0 (mod π)`, `δ = ±1`) give 2.
pub fn expected_number_readout_rank(p: &ExperimentParams) -> usize {
    use std::f64::consts::{FRAC_PI_2, PI};
    let d = p.delta();
    if p.gamma == 0.0 || near_multiple(p.phi, PI, 0.0) || (d.abs() - 1.0).abs() < 1e-9 {
        return 2;
    }
    let special = near_multiple(p.phi, PI, FRAC_PI_2) as usize + (d.abs() < 1e-9) as usize;
    4 - special
}
