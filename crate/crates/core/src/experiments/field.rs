//! The atom as a meter for the cavity photon number.

use crate::error::{Error, Result};
use crate::operator::{atom, FockSpace, Ket, Operator};
use crate::povm::{validate_density, Povm};
use crate::tolerances;

use super::params::ExperimentParams;
use super::simulate::{block_weights, simulate_with_field};

/// `{M_e, M_g} = {sin²(Φ a†a), cos²(Φ a†a)}` on the truncated Fock space.
pub fn field_number_povm(phi: f64, space: &FockSpace) -> Result<Povm> {
    let s: Vec<f64> = (0..space.dim()).map(|n| (phi * n as f64).sin().powi(2)).collect();
    let c: Vec<f64> = s.iter().map(|x| 1.0 - x).collect();
    Povm::with_labels(
        vec!["e".into(), "g".into()],
        vec![Operator::from_real_diagonal(&s), Operator::from_real_diagonal(&c)],
        tolerances::COMPLETE,
    )
}

/// Photon-number PVM `{|n⟩⟨n|}`.
pub fn number_pvm(space: &FockSpace) -> Result<Povm> {
    let ops = (0..space.dim())
        .map(|n| Operator::projector(&space.number_state(n)))
        .collect();
    let labels = (0..space.dim()).map(|n| n.to_string()).collect();
    Povm::with_labels(labels, ops, tolerances::COMPLETE)
}

/// Probability that an atom prepared in `|e⟩` leaves in `|e⟩` after crossing the field `field`.
pub fn second_atom_probability(p: &ExperimentParams, field: &Ket) -> Result<f64> {
    let out = simulate_with_field(p, &atom::excited(), field)?;
    Ok(block_weights(&out, 2)[0])
}

/// Sums `r`, `s`, the Gram determinant and the dual coefficients `β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionCoefficients {
    /// `Σ_{n=1}^{D} cos²Φn`.
    pub r: f64,
    /// `Σ_{n=1}^{D} sin²Φn cos²Φn`.
    pub s: f64,
    pub det: f64,
    pub beta_ee: f64,
    pub beta_eg: f64,
    pub beta_gg: f64,
}

/// Inverse Gram matrix of `{M_e, M_g}`; singular when `Φ ∈ πℤ` or `D = 0`.
pub fn field_projection_coefficients(phi: f64, space: &FockSpace) -> Result<ProjectionCoefficients> {
    let d = space.truncation() as f64;
    let (mut r, mut s) = (0.0, 0.0);
    for n in 1..space.dim() {
        let c2 = (phi * n as f64).cos().powi(2);
        r += c2;
        s += c2 * (1.0 - c2);
    }
    let g_ee = d - r - s;
    let g_gg = 1.0 + r - s;
    let det = g_ee * g_gg - s * s;
    if det <= tolerances::RANK * g_ee.max(g_gg).powi(2) {
        return Err(Error::LinearDependence { rank: 1, len: 2 });
    }
    Ok(ProjectionCoefficients {
        r,
        s,
        det,
        beta_ee: g_gg / det,
        beta_eg: -s / det,
        beta_gg: g_ee / det,
    })
}

/// `ρ_M = Σ_{mm'} β_{mm'} Tr(ρ M_{m'}) M_m`, the part of `ρ` seen by `{M_e, M_g}`.
pub fn field_projected_state(rho: &Operator, phi: f64, space: &FockSpace) -> Result<Operator> {
    if rho.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: rho.dim(),
        });
    }
    validate_density(rho)?;
    let k = field_projection_coefficients(phi, space)?;
    let povm = field_number_povm(phi, space)?;
    let pr = povm.probabilities(rho);
    let ce = k.beta_ee * pr[0] + k.beta_eg * pr[1];
    let cg = k.beta_eg * pr[0] + k.beta_gg * pr[1];
    Ok(povm.op(0).scale_real(ce) + povm.op(1).scale_real(cg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert_schmidt::{project_state, subspace_of};
    use crate::operator::{coherent_state, poisson_weight, re, cis};
    use crate::povm::fit_nonideality;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn povm_examples() {
        let space = FockSpace::new(7, 1e-12).unwrap();
        let m = field_number_povm(FRAC_PI_2, &space).unwrap();
        for n in 0..8 {
            assert!((m.op(0).get(n, n).re - (n % 2) as f64).abs() < 1e-15);
        }
        assert!((m.op(0) + m.op(1)).max_abs_diff(&Operator::identity(8)) == 0.0);
        let m = field_number_povm(0.7, &space).unwrap();
        let lam = fit_nonideality(&m, &number_pvm(&space).unwrap(), 1e-10).unwrap();
        for n in 0..8 {
            assert!((lam.get(0, n) - (0.7 * n as f64).sin().powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn simulated_probability_matches_expectation() {
        let p = ExperimentParams::pi_half(0.0, 0.8).unwrap();
        let space = FockSpace::new(60, 1e-12).unwrap();
        let p = p.with_fock(space);
        let m = field_number_povm(0.8, &space).unwrap();
        for alpha in [re(1.2), cis(0.7) * 2.0, cis(-2.0) * 0.4] {
            let field = coherent_state(alpha, &space).unwrap();
            let pe = second_atom_probability(&p, &field).unwrap();
            assert!((pe - m.op(0).expectation(&field).re).abs() < 1e-8);
        }
    }

    #[test]
    fn coefficients_are_gram_inverse() {
        let space = FockSpace::new(12, 1e-12).unwrap();
        let phi = 0.9;
        let k = field_projection_coefficients(phi, &space).unwrap();
        let m = field_number_povm(phi, &space).unwrap();
        let g = |i: usize, j: usize| m.op(i).hs_inner(m.op(j)).unwrap().re;
        let (a, b, d) = (g(0, 0), g(0, 1), g(1, 1));
        let det = a * d - b * b;
        assert!((k.beta_ee - d / det).abs() < 1e-12);
        assert!((k.beta_eg + b / det).abs() < 1e-12);
        assert!((k.beta_gg - a / det).abs() < 1e-12);
    }

    #[test]
    fn singular_cases() {
        let space = FockSpace::new(12, 1e-12).unwrap();
        assert!(matches!(
            field_projection_coefficients(PI, &space),
            Err(Error::LinearDependence { .. })
        ));
        let trivial = FockSpace::new(0, 1e-12).unwrap();
        assert!(field_projection_coefficients(0.7, &trivial).is_err());
    }

    #[test]
    fn projection_preserves_expectations() {
        let space = FockSpace::new(30, 1e-12).unwrap();
        let phi = 0.6;
        let m = field_number_povm(phi, &space).unwrap();
        let psi = coherent_state(cis(0.4) * 1.5, &space).unwrap().normalized().unwrap();
        let rho = Operator::projector(&psi);
        let proj = field_projected_state(&rho, phi, &space).unwrap();
        assert!((proj.trace().re - 1.0).abs() < 1e-10);
        for (x, y) in m.probabilities(&proj).iter().zip(m.probabilities(&rho)) {
            assert!((x - y).abs() < 1e-10);
        }
        let other = project_state(&rho, &subspace_of(&m, 1e-8)).unwrap();
        assert!(proj.max_abs_diff(&other) < 1e-10);
        let diag: Vec<f64> = (0..space.dim()).map(|n| poisson_weight(2.25, n)).collect();
        let total: f64 = diag.iter().sum();
        let rho_d = Operator::from_real_diagonal(&diag.iter().map(|x| x / total).collect::<Vec<_>>());
        let pd = field_projected_state(&rho_d, phi, &space).unwrap();
        for (x, y) in m.probabilities(&pd).iter().zip(m.probabilities(&rho_d)) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn cat_and_mixture_differ_only_through_number_distribution() {
        let space = FockSpace::new(40, 1e-12).unwrap();
        let phi = 0.5;
        let (up, dn) = (
            coherent_state(cis(phi) * 1.4, &space).unwrap(),
            coherent_state(cis(-phi) * 1.4, &space).unwrap(),
        );
        let cat = (&up - &dn).normalized().unwrap();
        let rho_cat = Operator::projector(&cat);
        let rho_mix = (Operator::projector(&up) + Operator::projector(&dn)).scale_real(0.5);
        let rho_mix = rho_mix.scale_real(1.0 / rho_mix.trace().re);
        let a = field_projected_state(&rho_cat, phi, &space).unwrap();
        let b = field_projected_state(&rho_mix, phi, &space).unwrap();
        let m = field_number_povm(phi, &space).unwrap();
        let diag = |r: &Operator| Operator::from_diagonal(&r.diagonal());
        let da = field_projected_state(&diag(&rho_cat), phi, &space).unwrap();
        let db = field_projected_state(&diag(&rho_mix), phi, &space).unwrap();
        assert!(a.max_abs_diff(&da) < 1e-12 && b.max_abs_diff(&db) < 1e-12);
        assert!(a.max_abs_diff(&b) > 1e-6);
        assert!(m.probabilities(&a).iter().zip(m.probabilities(&rho_cat)).all(|(x, y)| (x - y).abs() < 1e-10));
    }

    #[test]
    fn large_truncation_keeps_trace() {
        for d in [64, 128] {
            let space = FockSpace::new(d, 1e-12).unwrap();
            let k = field_projection_coefficients(0.7, &space).unwrap();
            assert!(k.beta_ee.abs() < 0.1 && k.beta_gg.abs() < 0.1);
            let rho = Operator::projector(&space.number_state(3));
            let proj = field_projected_state(&rho, 0.7, &space).unwrap();
            assert!((proj.trace().re - 1.0).abs() < 1e-10);
            assert!(proj.hs_norm() > 0.0);
        }
    }
}
