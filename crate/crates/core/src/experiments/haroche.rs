//! Single-atom (Haroche-Ramsey) and two-atom (Davidovich-Haroche) arrangements.

use crate::error::Result;
use crate::operator::{atom, cis, coherent_overlap, re, Operator, C64, I};
use crate::povm::{
    binary_entropy, fit_nonideality, marginals, rectangular_row_entropy, row_entropy, validate_povm,
    BivariatePovm, Povm,
};
use crate::tolerances;

use super::params::ExperimentParams;
use super::ramsey::average_over_phase;
use super::simulate::{block_weights, extract_operators, simulate_dh_final_state, simulate_hr_final_state};

/// Labels of the two-atom outcomes in atom-major order.
pub const DH_LABELS: [&str; 4] = ["e1e2", "e1g2", "g1e2", "g1g2"];

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// `{R_e, R_g}` extracted from the simulated atom-field evolution.
pub fn hr_atom_povm(p: &ExperimentParams) -> Result<Povm> {
    let ops = extract_operators(|psi| Ok(block_weights(&simulate_hr_final_state(p, psi)?, 2)))?;
    Povm::with_labels(labels(&["e", "g"]), ops, tolerances::COMPLETE)
}

/// `R_e = ½[[1-C₁, e^{-iωt₁}C₂], [e^{iωt₁}C₂, 1+C₁]]`, valid for resonant π/2 pulses.
pub fn hr_atom_povm_closed_form(p: &ExperimentParams) -> Result<Povm> {
    p.require_pi_half_regime("the single-atom closed form")?;
    let c = p.overlap_constants();
    let off = cis(-p.omega_t1) * (0.5 * c.c2);
    let r_e = Operator::from_2x2(re(0.5 * (1.0 - c.c1)), off, off.conj(), re(0.5 * (1.0 + c.c1)));
    let r_g = Operator::identity(2) - &r_e;
    Povm::with_labels(labels(&["e", "g"]), vec![r_e, r_g], tolerances::COMPLETE)
}

/// Linear combination `Σ cₖ|αₖ⟩` of coherent states, with exact inner products.
#[derive(Clone, Debug)]
struct CoherentCombination(Vec<(C64, C64)>);

impl CoherentCombination {
    fn inner(&self, other: &Self) -> C64 {
        self.0
            .iter()
            .flat_map(|&(ca, a)| other.0.iter().map(move |&(cb, b)| ca.conj() * cb * coherent_overlap(a, b)))
            .sum()
    }

    fn norm_sqr(&self) -> f64 {
        self.inner(self).re
    }

    fn plus(&self, other: &Self, s: f64) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&(c, a)| (c * s, a)));
        Self(v)
    }
}

/// Two-atom POVM from coherent-state overlaps, valid for resonant π/2 pulses.
///
/// Built from `|v′_e⟩ = |γe^{2iΦ}⟩ - |γe^{-2iΦ}⟩`, `|v′_g⟩ = |γe^{2iΦ}⟩ + |γe^{-2iΦ}⟩` and `|γ⟩`.
pub fn dh_povm_closed_form(p: &ExperimentParams) -> Result<Povm> {
    p.require_pi_half_regime("the two-atom closed form")?;
    let g = re(p.gamma);
    let up = g * cis(2.0 * p.phi);
    let dn = g * cis(-2.0 * p.phi);
    let ve = CoherentCombination(vec![(re(1.0), up), (re(-1.0), dn)]);
    let vg = CoherentCombination(vec![(re(1.0), up), (re(1.0), dn)]);
    let c = CoherentCombination(vec![(re(1.0), g)]);
    let vg_minus = vg.plus(&c, -2.0);
    let vg_plus = vg.plus(&c, 2.0);
    let e = -I * cis(-p.omega_t1);
    let build = |d0: f64, off: C64, d1: f64| {
        let off = e * off / 16.0;
        Operator::from_2x2(re(d0 / 16.0), off, off.conj(), re(d1 / 16.0))
    };
    let ops = vec![
        build(vg_minus.norm_sqr(), vg.inner(&ve) - c.inner(&ve) * 2.0, ve.norm_sqr()),
        build(ve.norm_sqr(), ve.inner(&vg) + ve.inner(&c) * 2.0, vg_plus.norm_sqr()),
        build(ve.norm_sqr(), ve.inner(&vg) - ve.inner(&c) * 2.0, vg_minus.norm_sqr()),
        build(vg_plus.norm_sqr(), vg.inner(&ve) + c.inner(&ve) * 2.0, ve.norm_sqr()),
    ];
    Povm::with_labels(labels(&DH_LABELS), ops, tolerances::COMPLETE)
}

/// Two-atom POVM extracted from the simulated `atom₁ ⊗ atom₂ ⊗ field` evolution.
pub fn dh_povm_simulated(p: &ExperimentParams) -> Result<Povm> {
    let ops = extract_operators(|psi| Ok(block_weights(&simulate_dh_final_state(p, psi)?, 4)))?;
    Povm::with_labels(labels(&DH_LABELS), ops, tolerances::COMPLETE)
}

/// Simulated two-atom POVM, or the closed form inside its regime.
pub fn dh_povm(p: &ExperimentParams) -> Result<Povm> {
    if p.in_pi_half_regime() {
        dh_povm_closed_form(p)
    } else {
        dh_povm_simulated(p)
    }
}

/// Arranges the two-atom POVM by first-atom result (rows `e1`, `g1`) and
/// agreement of the two atoms (columns `equal`, `opposite`).
pub fn dh_bivariate(dh: &Povm) -> Result<BivariatePovm> {
    let op = |i: usize| dh.op(i).clone();
    BivariatePovm::new(
        labels(&["e1", "g1"]),
        labels(&["equal", "opposite"]),
        vec![vec![op(0), op(1)], vec![op(3), op(2)]],
        tolerances::COMPLETE,
    )
}

/// Eigenprojectors of a binary marginal, larger eigenvalue first.
///
/// A degenerate marginal falls back to `{|e⟩⟨e|, |g⟩⟨g|}`.
pub fn marginal_reference_pvm(marginal: &Povm) -> Result<Povm> {
    let (vals, vecs) = marginal.op(0).eigh();
    let ops = if (vals[1] - vals[0]).abs() < 1e-12 {
        vec![atom::proj_e(), atom::proj_g()]
    } else {
        vec![Operator::projector(&vecs[1]), Operator::projector(&vecs[0])]
    };
    Povm::with_labels(marginal.labels().to_vec(), ops, tolerances::COMPLETE)
}

/// Reference PVMs `(E, F)` for the row and column marginals of `b`.
pub fn dh_reference_pvms(b: &BivariatePovm) -> Result<(Povm, Povm)> {
    let (rows, cols) = marginals(b)?;
    Ok((marginal_reference_pvm(&rows)?, marginal_reference_pvm(&cols)?))
}

/// Non-ideality measures of the single- and two-atom arrangements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DhEntropies {
    /// Phase-averaged single-atom measure `J^HR̄`.
    pub j_hr: f64,
    /// Phase-averaged two-atom measure `J^DH̄`.
    pub j_dh: f64,
    pub j_lambda: f64,
    pub j_mu: f64,
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `λ = ½(1 + e^{-2γ² sin²Φ})`.
pub fn dh_lambda(p: &ExperimentParams) -> f64 {
    let s = p.phi.sin();
    0.5 * (1.0 + (-2.0 * p.gamma * p.gamma * s * s).exp())
}

/// `μ = ½ + ¼√((1+C₁′)² + C₂′²)`.
pub fn dh_mu(p: &ExperimentParams) -> f64 {
    let c = p.overlap_constants();
    0.5 + 0.25 * (1.0 + c.c1p).hypot(c.c2p)
}

/// Closed-form measures, valid for resonant π/2 pulses.
pub fn dh_entropies(p: &ExperimentParams) -> Result<DhEntropies> {
    p.require_pi_half_regime("the closed-form entropies")?;
    let c = p.overlap_constants();
    let b = (1.0 - c.c1p) / 8.0;
    let j_dh = [1.0 - c.c1, 1.0 + c.c1]
        .iter()
        .map(|&s| {
            let half = 0.5 * s;
            let a = half - b;
            if half <= 0.0 {
                return 0.0;
            }
            -xlnx(a) + a * half.ln() - xlnx(b) + b * half.ln()
        })
        .sum();
    Ok(DhEntropies {
        j_hr: binary_entropy(0.5 * (1.0 - c.c1)),
        j_dh,
        j_lambda: binary_entropy(dh_lambda(p)),
        j_mu: binary_entropy(dh_mu(p)),
    })
}

/// Same measures from non-ideality fits of the simulated POVMs.
pub fn dh_entropies_fitted(p: &ExperimentParams) -> Result<DhEntropies> {
    let eg = validate_povm(vec![atom::proj_e(), atom::proj_g()], tolerances::COMPLETE)?;
    let hr_bar = average_over_phase(p, hr_atom_povm)?;
    let dh_bar = average_over_phase(p, dh_povm_simulated)?;
    let j_hr = row_entropy(&fit_nonideality(&hr_bar, &eg, tolerances::FIT)?)?;
    let j_dh = rectangular_row_entropy(&fit_nonideality(&dh_bar, &eg, tolerances::FIT)?);
    let b = dh_bivariate(&dh_povm_simulated(p)?)?;
    let (rows, cols) = marginals(&b)?;
    let (e, f) = dh_reference_pvms(&b)?;
    let j_lambda = row_entropy(&fit_nonideality(&rows, &e, tolerances::FIT)?)?;
    let j_mu = row_entropy(&fit_nonideality(&cols, &f, tolerances::FIT)?)?;
    Ok(DhEntropies {
        j_hr,
        j_dh,
        j_lambda,
        j_mu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::params::AtomicPhases;
    use crate::povm::check_joint_inequality;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, LN_2};

    fn pi_half(gamma: f64, phi: f64) -> ExperimentParams {
        ExperimentParams::pi_half(gamma, phi).unwrap().with_omega_t1(0.3)
    }

    #[test]
    fn hr_closed_form_matches_simulation() {
        for (g, phi) in [(0.0, 0.4), (0.5, FRAC_PI_6), (2.0, 1.0)] {
            let p = pi_half(g, phi);
            let sim = hr_atom_povm(&p).unwrap();
            assert!(sim.max_abs_diff(&hr_atom_povm_closed_form(&p).unwrap()) < 1e-8);
        }
        let zero = hr_atom_povm(&pi_half(0.0, 0.4)).unwrap();
        assert!(zero.op(0).max_abs_diff(&atom::proj_g()) < 1e-12);
        let large = hr_atom_povm_closed_form(&pi_half(6.0, FRAC_PI_2)).unwrap();
        assert!(large.op(0).max_abs_diff(&Operator::identity(2).scale_real(0.5)) < 1e-8);
        assert!(!hr_atom_povm(&pi_half(1.0, 0.7)).unwrap().is_pvm(1e-6));
    }

    #[test]
    fn closed_forms_reject_detuned() {
        let p = ExperimentParams::new(1.1, 0.4, 0.0, 1.0, 0.5).unwrap();
        assert!(hr_atom_povm_closed_form(&p).is_err());
        assert!(dh_povm_closed_form(&p).is_err());
        assert!(dh_entropies(&p).is_err());
    }

    #[test]
    fn dh_closed_form_matches_simulation() {
        for (g, phi) in [(0.5, FRAC_PI_6), (1.0, FRAC_PI_2), (2.0, 0.9)] {
            let p = pi_half(g, phi);
            let d = dh_povm_closed_form(&p).unwrap().max_abs_diff(&dh_povm_simulated(&p).unwrap());
            assert!(d < 1e-8, "{g} {phi}: {d}");
        }
    }

    #[test]
    fn atomic_phases_leave_povms_unchanged() {
        let p = ExperimentParams::new(1.1, 0.4, 0.7, 1.2, 0.6).unwrap().with_omega_t1(0.2);
        let q = p.with_atomic_phases(AtomicPhases {
            omega_e_t: 0.3,
            omega_g_t: -1.2,
            omega_e_tau: 2.0,
            omega_g_tau: 0.1,
        });
        assert!(hr_atom_povm(&p).unwrap().max_abs_diff(&hr_atom_povm(&q).unwrap()) < 1e-12);
        assert!(dh_povm_simulated(&p).unwrap().max_abs_diff(&dh_povm_simulated(&q).unwrap()) < 1e-12);
    }

    #[test]
    fn dh_linear_dependency() {
        let p = pi_half(1.3, 0.8);
        let dh = dh_povm_closed_form(&p).unwrap();
        let s = dh.op(0) + dh.op(2);
        let scale = s.get(0, 0).re;
        assert!(s.max_abs_diff(&Operator::identity(2).scale_real(scale)) < 1e-10);
    }

    #[test]
    fn dh_marginal_parameters() {
        for (g, phi) in [(0.5, FRAC_PI_6), (1.0, FRAC_PI_2), (2.0, 0.9)] {
            let p = pi_half(g, phi);
            let b = dh_bivariate(&dh_povm_closed_form(&p).unwrap()).unwrap();
            let (e, f) = dh_reference_pvms(&b).unwrap();
            let r = check_joint_inequality(&b, &e, &f).unwrap();
            assert!((r.lambda.get(0, 0) - dh_lambda(&p)).abs() < 1e-10);
            assert!((r.mu.get(0, 0) - dh_mu(&p)).abs() < 1e-10);
            assert!(r.holds());
        }
    }

    #[test]
    fn entropies_examples() {
        let z = dh_entropies(&pi_half(0.0, 0.7)).unwrap();
        assert!(z.j_hr.abs() < 1e-15 && z.j_lambda.abs() < 1e-15 && z.j_mu.abs() < 1e-15);
        let big = dh_entropies(&pi_half(6.0, FRAC_PI_2)).unwrap();
        assert!((big.j_hr - LN_2).abs() < 1e-6);
        for g in [0.5, 1.0, 2.0] {
            let e = dh_entropies(&pi_half(g, FRAC_PI_2)).unwrap();
            assert!(e.j_dh < e.j_hr);
        }
    }

    #[test]
    fn entropies_match_fits() {
        for (g, phi) in [(0.5, FRAC_PI_6), (1.0, FRAC_PI_2), (1.5, 1.0)] {
            let p = pi_half(g, phi);
            let a = dh_entropies(&p).unwrap();
            let b = dh_entropies_fitted(&p).unwrap();
            for (x, y) in [(a.j_hr, b.j_hr), (a.j_dh, b.j_dh), (a.j_lambda, b.j_lambda), (a.j_mu, b.j_mu)] {
                assert!((x - y).abs() < 1e-8, "{g} {phi}: {x} vs {y}");
            }
        }
    }
}
