//! Physical dials of the beam experiments, stored as dimensionless phases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{choose_truncation, cis, coherent_overlap, re, FockSpace, C64};
use crate::tolerances;

/// Atomic phase products `ω_e T`, `ω_g T`, `ω_e τ`, `ω_g τ`.
///
/// All zero gives the frame rotating with the atom, in which `ω = ν`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AtomicPhases {
    pub omega_e_t: f64,
    pub omega_g_t: f64,
    pub omega_e_tau: f64,
    pub omega_g_tau: f64,
}

/// Pulse area, detuning, field phase, coherent amplitude and cavity phase shift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentParams {
    /// Pulse area `ΩT`.
    pub omega_t: f64,
    /// Detuning times pulse time `νT`.
    pub nu_t: f64,
    /// Detuning times flight time `ντ`.
    pub nu_tau: f64,
    /// Microwave phase `ωt₁` when the atom enters the first cavity.
    pub omega_t1: f64,
    /// Coherent amplitude `γ` of the dispersive cavity field.
    pub gamma: f64,
    /// Conditional phase shift `Φ`.
    pub phi: f64,
    pub fock: FockSpace,
    pub atomic: AtomicPhases,
}

/// Same parameters in physical units (rad/s and s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub rabi_frequency: f64,
    pub detuning: f64,
    pub pulse_time: f64,
    pub flight_time: f64,
    pub entry_time: f64,
    pub transition_frequency: f64,
    pub gamma: f64,
    pub phi: f64,
}

impl ExperimentParams {
    /// Parameters with `ωt₁ = 0`, zero atomic phases and the default Fock truncation for `γ`.
    pub fn new(omega_t: f64, nu_t: f64, nu_tau: f64, gamma: f64, phi: f64) -> Result<Self> {
        for (name, x) in [
            ("omega_t", omega_t),
            ("nu_t", nu_t),
            ("nu_tau", nu_tau),
            ("gamma", gamma),
            ("phi", phi),
        ] {
            if !x.is_finite() {
                return Err(Error::Precondition(format!("{name} must be finite")));
            }
        }
        if gamma < 0.0 {
            return Err(Error::Precondition(format!("gamma must be non-negative, got {gamma}")));
        }
        Ok(Self {
            omega_t,
            nu_t,
            nu_tau,
            omega_t1: 0.0,
            gamma,
            phi,
            fock: choose_truncation(gamma, tolerances::FOCK_TAIL)?,
            atomic: AtomicPhases::default(),
        })
    }

    /// Resonant pulses (`ν = 0`) with `δ = cos ΩT`, so `ΩT = arccos δ`.
    pub fn with_delta(delta: f64, gamma: f64, phi: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&delta) {
            return Err(Error::Precondition(format!("delta must lie in [-1, 1], got {delta}")));
        }
        Self::new(delta.acos(), 0.0, 0.0, gamma, phi)
    }

    /// Resonant π/2 pulses.
    pub fn pi_half(gamma: f64, phi: f64) -> Result<Self> {
        Self::new(std::f64::consts::FRAC_PI_2, 0.0, 0.0, gamma, phi)
    }

    /// Converts physical units; `ω = ν + ω₀` fixes `ωt₁`.
    pub fn from_physical(p: &PhysicalParams) -> Result<Self> {
        let omega = p.detuning + p.transition_frequency;
        let wt1 = (omega * p.entry_time).rem_euclid(2.0 * std::f64::consts::PI);
        Ok(Self::new(
            p.rabi_frequency * p.pulse_time,
            p.detuning * p.pulse_time,
            p.detuning * p.flight_time,
            p.gamma,
            p.phi,
        )?
        .with_omega_t1(wt1))
    }

    pub fn with_omega_t1(mut self, omega_t1: f64) -> Self {
        self.omega_t1 = omega_t1;
        self
    }

    pub fn with_nu_tau(mut self, nu_tau: f64) -> Self {
        self.nu_tau = nu_tau;
        self
    }

    pub fn with_fock(mut self, fock: FockSpace) -> Self {
        self.fock = fock;
        self
    }

    pub fn with_atomic_phases(mut self, atomic: AtomicPhases) -> Self {
        self.atomic = atomic;
        self
    }

    /// `(S₁, S₂)` of the pulse matrix.
    pub fn pulse_amplitudes(&self) -> (C64, C64) {
        pulse_amplitudes(self.omega_t, self.nu_t)
    }

    pub fn s1(&self) -> C64 {
        self.pulse_amplitudes().0
    }

    pub fn s2(&self) -> C64 {
        self.pulse_amplitudes().1
    }

    /// `δ = |S₁|² - |S₂|²`.
    pub fn delta(&self) -> f64 {
        let (s1, s2) = self.pulse_amplitudes();
        s1.norm_sqr() - s2.norm_sqr()
    }

    /// `ψ = arg S₁`.
    pub fn psi(&self) -> f64 {
        self.s1().arg()
    }

    /// `ωT = νT + ω_e T - ω_g T`.
    pub fn omega_big_t(&self) -> f64 {
        self.nu_t + self.atomic.omega_e_t - self.atomic.omega_g_t
    }

    /// `ωτ = ντ + ω_e τ - ω_g τ`.
    pub fn omega_tau(&self) -> f64 {
        self.nu_tau + self.atomic.omega_e_tau - self.atomic.omega_g_tau
    }

    /// Field phase on entering the second cavity, `ωt₂ = ωt₁ + ωT + ωτ`.
    pub fn omega_t2(&self) -> f64 {
        self.omega_t1 + self.omega_big_t() + self.omega_tau()
    }

    /// `A = erf(γ sin Φ)`.
    pub fn erf_a(&self) -> f64 {
        libm::erf(self.gamma * self.phi.sin())
    }

    pub fn overlap_constants(&self) -> OverlapConstants {
        overlap_constants(self.gamma, self.phi)
    }

    /// True when `S₁ = 1/√2`, `S₂ = -i/√2` and `ντ = 0` (resonant π/2 pulses).
    pub fn in_pi_half_regime(&self) -> bool {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (s1, s2) = self.pulse_amplitudes();
        (s1 - re(h)).norm() < 1e-12 && (s2 - C64::new(0.0, -h)).norm() < 1e-12 && self.nu_tau.abs() < 1e-12
    }

    pub(crate) fn require_pi_half_regime(&self, what: &str) -> Result<()> {
        if self.in_pi_half_regime() {
            Ok(())
        } else {
            Err(Error::OutsideClosedFormRegime(format!(
                "{what} needs resonant pi/2 pulses (S1 = 1/sqrt2, S2 = -i/sqrt2, nu*tau = 0); \
                 got delta = {:.3e}, nu*tau = {:.3e}",
                self.delta(),
                self.nu_tau
            )))
        }
    }

    pub(crate) fn require_nontrivial_delta(&self) -> Result<()> {
        if (self.delta().abs() - 1.0).abs() < 1e-12 {
            Err(Error::Precondition(
                "delta = +-1 reduces the measurement to a trivial refinement of {|e><e|, |g><g|}".into(),
            ))
        } else {
            Ok(())
        }
    }
}

/// `S₁ = cos(aT/2) + i(νT/aT) sin(aT/2)`, `S₂ = -i(ΩT/aT) sin(aT/2)`, `aT = √((ΩT)² + (νT)²)`.
pub fn pulse_amplitudes(omega_t: f64, nu_t: f64) -> (C64, C64) {
    let at = omega_t.hypot(nu_t);
    if at == 0.0 {
        return (re(1.0), re(0.0));
    }
    let (s, c) = (0.5 * at).sin_cos();
    (C64::new(c, nu_t / at * s), C64::new(0.0, -omega_t / at * s))
}

/// `C₁ + iC₂ = ⟨γe^{iΦ}|γe^{-iΦ}⟩` and the primed pair at `2Φ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OverlapConstants {
    pub c1: f64,
    pub c2: f64,
    pub c1p: f64,
    pub c2p: f64,
}

impl OverlapConstants {
    pub fn c(&self) -> C64 {
        C64::new(self.c1, self.c2)
    }

    pub fn c_prime(&self) -> C64 {
        C64::new(self.c1p, self.c2p)
    }
}

pub fn overlap_constants(gamma: f64, phi: f64) -> OverlapConstants {
    let c = coherent_overlap(cis(phi) * gamma, cis(-phi) * gamma);
    let cp = coherent_overlap(cis(2.0 * phi) * gamma, cis(-2.0 * phi) * gamma);
    OverlapConstants {
        c1: c.re,
        c2: c.im,
        c1p: cp.re,
        c2p: cp.im,
    }
}

/// Amplitudes `E … M` of the two-cavity evolution, keyed to the initial atom state and the field branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RamseyConstants {
    pub e: C64,
    pub f: C64,
    pub g: C64,
    pub h: C64,
    pub j: C64,
    pub k: C64,
    pub l: C64,
    pub m: C64,
}

/// Closed-form `E … M` including all atomic phase factors.
pub fn ramsey_constants(p: &ExperimentParams) -> RamseyConstants {
    let (s1, s2) = p.pulse_amplitudes();
    let a = &p.atomic;
    let (nt, ntau, wt1) = (p.nu_t, p.nu_tau, p.omega_t1);
    let pe = cis(-(nt + 2.0 * a.omega_e_t) - a.omega_e_tau);
    let pg = cis((nt - 2.0 * a.omega_g_t) - a.omega_g_tau);
    RamseyConstants {
        e: s1 * s1 * pe,
        f: s2 * s2 * cis(-ntau) * pe,
        g: s1 * s2 * pe * cis(-wt1),
        h: s1.conj() * s2 * cis(-ntau) * pe * cis(-wt1),
        j: s1 * s2 * cis(ntau) * pg * cis(wt1),
        k: s1.conj() * s2 * pg * cis(wt1),
        l: s2 * s2 * cis(ntau) * pg,
        m: s1.conj() * s1.conj() * pg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn pulse_examples() {
        let (s1, s2) = pulse_amplitudes(0.0, 0.7);
        assert!(s2.norm() < 1e-15 && (s1.norm() - 1.0).abs() < 1e-15);
        let p = ExperimentParams::pi_half(0.0, 0.0).unwrap();
        assert!((p.s1().norm_sqr() - 0.5).abs() < 1e-15);
        assert!(p.delta().abs() < 1e-15);
        assert_eq!(pulse_amplitudes(0.0, 0.0), (re(1.0), re(0.0)));
    }

    #[test]
    fn with_delta_matches() {
        for d in [-0.9, -0.3, 0.0, 0.4, 1.0] {
            let p = ExperimentParams::with_delta(d, 1.0, 0.5).unwrap();
            assert!((p.delta() - d).abs() < 1e-14);
            assert_eq!(p.psi(), 0.0);
        }
        assert!(ExperimentParams::with_delta(1.5, 1.0, 0.5).is_err());
        assert!(ExperimentParams::new(1.0, 0.0, 0.0, -1.0, 0.5).is_err());
    }

    #[test]
    fn overlap_examples() {
        let c = overlap_constants(0.0, 0.3);
        assert_eq!((c.c1, c.c2), (1.0, 0.0));
        let g: f64 = 1.4;
        let c = overlap_constants(g, FRAC_PI_2);
        assert!((c.c1 - (-2.0 * g * g).exp()).abs() < 1e-15 && c.c2.abs() < 1e-15);
    }

    #[test]
    fn physical_conversion() {
        let pp = PhysicalParams {
            rabi_frequency: 2.0e5,
            detuning: 1.0e3,
            pulse_time: 1.0e-5,
            flight_time: 2.0e-4,
            entry_time: 0.0,
            transition_frequency: 321e9,
            gamma: 1.0,
            phi: 0.5,
        };
        let p = ExperimentParams::from_physical(&pp).unwrap();
        assert!((p.omega_t - 2.0).abs() < 1e-12);
        assert!((p.nu_t - 1e-2).abs() < 1e-15);
        assert!((p.nu_tau - 0.2).abs() < 1e-15);
        assert_eq!(p.omega_t1, 0.0);
    }

    proptest! {
        #[test]
        fn s_functions_normalized(ot in -10.0f64..10.0, nt in -10.0f64..10.0) {
            let (s1, s2) = pulse_amplitudes(ot, nt);
            prop_assert!((s1.norm_sqr() + s2.norm_sqr() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn overlap_bounded(g in 0.0f64..5.0, phi in -PI..PI) {
            let c = overlap_constants(g, phi);
            prop_assert!(c.c1 * c.c1 + c.c2 * c.c2 <= 1.0 + 1e-15);
            prop_assert!(c.c1p * c.c1p + c.c2p * c.c2p <= 1.0 + 1e-15);
        }
    }
}
