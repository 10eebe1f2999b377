//! Unitary simulation of atoms crossing the Ramsey cavities and the dispersive cavity.
//!
//! States live on `atom₁ (⊗ atom₂) ⊗ field`, atom-major. Each atom sees
//! `U₂ · U_C · U₁`, with
//! `U_C = e^{-iω_e τ}|e⟩⟨e| ⊗ e^{iΦ a†a} + e^{-iω_g τ}|g⟩⟨g| ⊗ e^{-iΦ a†a}`.

use crate::error::{Error, Result};
use crate::operator::{atom, cis, coherent_state, re, Ket, Operator, Tensor, C64};

use super::params::ExperimentParams;
use super::ramsey::{first_pulse, second_pulse};

/// `U_C` as an operator on `atom ⊗ field`.
pub fn cavity_unitary(p: &ExperimentParams) -> Operator {
    let f = p.fock.dim();
    let mut d = Vec::with_capacity(2 * f);
    for (sign, flight) in [(1.0, p.atomic.omega_e_tau), (-1.0, p.atomic.omega_g_tau)] {
        for n in 0..f {
            d.push(cis(-flight + sign * p.phi * n as f64));
        }
    }
    Operator::from_diagonal(&d)
}

/// `(U₂ ⊗ I) U_C (U₁ ⊗ I)` on `atom ⊗ field`.
pub fn hr_unitary(p: &ExperimentParams) -> Operator {
    let id = p.fock.identity();
    second_pulse(p).tensor(&id) * cavity_unitary(p) * first_pulse(p).tensor(&id)
}

fn apply_pulse(u: &Operator, amps: &mut [C64], stride: usize) {
    let block = 2 * stride;
    for base in (0..amps.len()).step_by(block) {
        for k in base..base + stride {
            let (a, b) = (amps[k], amps[k + stride]);
            amps[k] = u.get(0, 0) * a + u.get(0, 1) * b;
            amps[k + stride] = u.get(1, 0) * a + u.get(1, 1) * b;
        }
    }
}

fn apply_cavity(p: &ExperimentParams, amps: &mut [C64], stride: usize, field_dim: usize) {
    let e_phase = cis(-p.atomic.omega_e_tau);
    let g_phase = cis(-p.atomic.omega_g_tau);
    let block = 2 * stride;
    for base in (0..amps.len()).step_by(block) {
        for k in base..base + stride {
            let n = (k % field_dim) as f64;
            amps[k] *= e_phase * cis(p.phi * n);
            amps[k + stride] *= g_phase * cis(-p.phi * n);
        }
    }
}

/// Passes atom `which` (of `n_atoms`) through both Ramsey cavities and the dispersive cavity.
pub fn evolve_atom(p: &ExperimentParams, state: &Ket, which: usize, n_atoms: usize) -> Result<Ket> {
    let f = p.fock.dim();
    let expected = (1usize << n_atoms) * f;
    if state.dim() != expected || which >= n_atoms {
        return Err(Error::DimensionMismatch {
            expected,
            found: state.dim(),
        });
    }
    let stride = (1usize << (n_atoms - 1 - which)) * f;
    let mut amps = state.amplitudes().to_vec();
    apply_pulse(&first_pulse(p), &mut amps, stride);
    apply_cavity(p, &mut amps, stride, f);
    apply_pulse(&second_pulse(p), &mut amps, stride);
    Ok(Ket::from_fn(amps.len(), |i| amps[i]))
}

fn check_normalized(psi: &Ket) -> Result<()> {
    if psi.dim() != 2 || !psi.is_normalized(1e-10) {
        return Err(Error::Precondition(format!(
            "initial atom state must be a normalized 2-vector (dim {}, norm {})",
            psi.dim(),
            psi.norm()
        )));
    }
    Ok(())
}

/// `|Ψ_f⟩` on `atom ⊗ field` for the initial state `|ψ_in⟩ ⊗ |γ⟩`.
pub fn simulate_hr_final_state(p: &ExperimentParams, psi_in: &Ket) -> Result<Ket> {
    check_normalized(psi_in)?;
    let field = coherent_state(re(p.gamma), &p.fock)?;
    evolve_atom(p, &psi_in.tensor(&field), 0, 1)
}

/// Single atom `|ψ_in⟩` crossing with an arbitrary field state.
pub fn simulate_with_field(p: &ExperimentParams, psi_in: &Ket, field: &Ket) -> Result<Ket> {
    check_normalized(psi_in)?;
    evolve_atom(p, &psi_in.tensor(field), 0, 1)
}

/// Two atoms in succession, the second prepared in `|e⟩`, on `atom₁ ⊗ atom₂ ⊗ field`.
pub fn simulate_dh_final_state(p: &ExperimentParams, psi_in: &Ket) -> Result<Ket> {
    check_normalized(psi_in)?;
    let field = coherent_state(re(p.gamma), &p.fock)?;
    let start = psi_in.tensor(&atom::excited()).tensor(&field);
    let after_first = evolve_atom(p, &start, 0, 2)?;
    evolve_atom(p, &after_first, 1, 2)
}

/// Probe states `|e⟩, |g⟩, (|e⟩+|g⟩)/√2, (|e⟩+i|g⟩)/√2`.
pub fn probe_states() -> [Ket; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        atom::excited(),
        atom::ground(),
        atom::state(re(h), re(h)),
        atom::state(re(h), C64::new(0.0, h)),
    ]
}

/// Recovers 2×2 Hermitian operators from their expectations on the probe states.
///
/// `probabilities(ψ)` returns one expectation per outcome.
pub fn extract_operators<F>(probabilities: F) -> Result<Vec<Operator>>
where
    F: Fn(&Ket) -> Result<Vec<f64>>,
{
    let probes = probe_states();
    let values: Vec<Vec<f64>> = probes.iter().map(&probabilities).collect::<Result<_>>()?;
    let n = values[0].len();
    if values.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: values.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n),
        });
    }
    Ok((0..n)
        .map(|k| {
            let (pe, pg, pp, pi) = (values[0][k], values[1][k], values[2][k], values[3][k]);
            let mid = 0.5 * (pe + pg);
            let off = C64::new(pp - mid, -(pi - mid));
            Operator::from_2x2(re(pe), off, off.conj(), re(pg))
        })
        .collect())
}

/// Squared norms of the blocks of a state split into `blocks` equal slices.
pub fn block_weights(state: &Ket, blocks: usize) -> Vec<f64> {
    let len = state.dim() / blocks;
    state
        .amplitudes()
        .chunks(len)
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum())
        .collect()
}
