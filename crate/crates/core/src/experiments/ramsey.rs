//! Two-cavity Ramsey arrangement: pulse matrices, path and interference observables.

use crate::error::Result;
use crate::operator::{atom, cis, Ket, Operator};
use crate::povm::{phase_average, Povm};
use crate::tolerances;

use super::params::{ramsey_constants, ExperimentParams};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Pulse matrix for a cavity entered at microwave phase `omega_t_i`.
pub fn ramsey_pulse(p: &ExperimentParams, omega_t_i: f64) -> Operator {
    let (s1, s2) = p.pulse_amplitudes();
    let pe = cis(-(0.5 * p.nu_t + p.atomic.omega_e_t));
    let pg = cis(0.5 * p.nu_t - p.atomic.omega_g_t);
    Operator::from_2x2(
        pe * s1,
        pe * cis(-omega_t_i) * s2,
        pg * cis(omega_t_i) * s2,
        pg * s1.conj(),
    )
}

/// First-cavity pulse `U₁`.
pub fn first_pulse(p: &ExperimentParams) -> Operator {
    ramsey_pulse(p, p.omega_t1)
}

/// Second-cavity pulse `U₂`.
pub fn second_pulse(p: &ExperimentParams) -> Operator {
    ramsey_pulse(p, p.omega_t2())
}

/// Free flight between the cavities, `diag(e^{-iω_e τ}, e^{-iω_g τ})`.
pub fn free_flight(p: &ExperimentParams) -> Operator {
    Operator::from_diagonal(&[cis(-p.atomic.omega_e_tau), cis(-p.atomic.omega_g_tau)])
}

/// Full two-cavity evolution without the dispersive field.
pub fn two_cavity_unitary(p: &ExperimentParams) -> Operator {
    second_pulse(p) * free_flight(p) * first_pulse(p)
}

/// `|p₊⟩ = (S₁*, S₂* e^{iωt₁})`.
pub fn path_plus(p: &ExperimentParams) -> Ket {
    let (s1, s2) = p.pulse_amplitudes();
    atom::state(s1.conj(), s2.conj() * cis(p.omega_t1))
}

/// `|p₋⟩ = (S₂*, S₁ e^{iωt₁})`, orthogonal to `|p₊⟩` since `S₂` is imaginary.
pub fn path_minus(p: &ExperimentParams) -> Ket {
    let (s1, s2) = p.pulse_amplitudes();
    atom::state(s2.conj(), s1 * cis(p.omega_t1))
}

/// Path observable `{P₊, P₋}`.
pub fn path_povm(p: &ExperimentParams) -> Result<Povm> {
    let pp = Operator::projector(&path_plus(p));
    let pm = Operator::identity(2) - &pp;
    Povm::with_labels(vec!["+".into(), "-".into()], vec![pp, pm], tolerances::COMPLETE)
}

/// `|q_e⟩ = (E* + F*, G* + H*)`.
pub fn interference_vector(p: &ExperimentParams) -> Ket {
    let k = ramsey_constants(p);
    atom::state((k.e + k.f).conj(), (k.g + k.h).conj())
}

/// Interference observable `{Q_e, Q_g}`.
pub fn interference_povm(p: &ExperimentParams) -> Result<Povm> {
    let qe = Operator::projector(&interference_vector(p));
    let qg = Operator::identity(2) - &qe;
    Povm::with_labels(vec!["e".into(), "g".into()], vec![qe, qg], tolerances::COMPLETE)
}

/// Averages a POVM family over the microwave phase `ωt₁ ∈ [0, 2π)`.
pub fn average_over_phase<F>(p: &ExperimentParams, build: F) -> Result<Povm>
where
    F: Fn(&ExperimentParams) -> Result<Povm>,
{
    phase_average(|t| build(&p.with_omega_t1(t)), TWO_PI)
}

pub fn phase_averaged_path_povm(p: &ExperimentParams) -> Result<Povm> {
    average_over_phase(p, path_povm)
}

pub fn phase_averaged_interference_povm(p: &ExperimentParams) -> Result<Povm> {
    average_over_phase(p, interference_povm)
}

/// `P̄₊ = |S₁|²|e⟩⟨e| + |S₂|²|g⟩⟨g|`.
pub fn averaged_path_closed_form(p: &ExperimentParams) -> Operator {
    let (s1, s2) = p.pulse_amplitudes();
    Operator::from_real_diagonal(&[s1.norm_sqr(), s2.norm_sqr()])
}

/// `Q̄_e = |S₁² + S₂² e^{-iντ}|² |e⟩⟨e| + |S₂|² |S₁ + S₁* e^{-iντ}|² |g⟩⟨g|`.
pub fn averaged_interference_closed_form(p: &ExperimentParams) -> Operator {
    let (s1, s2) = p.pulse_amplitudes();
    let ph = cis(-p.nu_tau);
    Operator::from_real_diagonal(&[
        (s1 * s1 + s2 * s2 * ph).norm_sqr(),
        s2.norm_sqr() * (s1 + s1.conj() * ph).norm_sqr(),
    ])
}
