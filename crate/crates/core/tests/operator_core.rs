mod common;

use std::f64::consts::PI;

use povmlab::experiments::params::{AtomicPhases, ExperimentParams};
use povmlab::experiments::ramsey::ramsey_pulse;
use povmlab::operator::{
    atom, choose_truncation, cis, coherent_overlap, coherent_state, partial_trace_left, partial_trace_right,
    phase_rotation, poisson_tail, tensor, FockSpace, Operator,
};
use proptest::prelude::*;

#[test]
fn pauli_algebra() {
    let (x, y, z) = (atom::sigma_x(), atom::sigma_y(), atom::sigma_z());
    let i2 = Operator::identity(2);
    for s in [&x, &y, &z] {
        assert!((s * s).max_abs_diff(&i2) < 1e-15);
    }
    let comm = &(&x * &y) - &(&y * &x);
    assert!(comm.max_abs_diff(&z.scale(povmlab::operator::I * 2.0)) < 1e-15);
    assert!((&atom::proj_e() + &atom::proj_g()).max_abs_diff(&i2) < 1e-15);
}

#[test]
fn truncation_meets_tail() {
    for g in [0.0, 0.5, 1.3, 3.0, 6.0] {
        let s = choose_truncation(g, 1e-12).unwrap();
        assert!(poisson_tail(g * g, s.truncation()) < 1e-12);
        let psi = coherent_state(povmlab::operator::re(g), &s).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-11);
    }
}

#[test]
fn coherent_amplitude_beyond_space_is_rejected() {
    let s = FockSpace::new(4, 1e-12).unwrap();
    assert!(coherent_state(povmlab::operator::re(3.0), &s).is_err());
}

proptest! {
    #[test]
    fn pulse_is_unitary(
        omega_t in -2.0 * PI..2.0 * PI,
        nu_t in -5.0f64..5.0,
        wt in 0.0..2.0 * PI,
        we in -PI..PI,
        wg in -PI..PI,
    ) {
        let p = ExperimentParams::new(omega_t, nu_t, 0.0, 0.0, 0.0).unwrap().with_atomic_phases(AtomicPhases {
            omega_e_t: we,
            omega_g_t: wg,
            omega_e_tau: 0.0,
            omega_g_tau: 0.0,
        });
        prop_assert!(ramsey_pulse(&p, wt).unitarity_residual() < 1e-12);
        let (s1, s2) = p.pulse_amplitudes();
        prop_assert!((s1.norm_sqr() + s2.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_traces_of_products(a in common::positive(2), b in common::positive(3)) {
        let ab = tensor(&a, &b);
        let left = partial_trace_right(&ab, 2).unwrap();
        let right = partial_trace_left(&ab, 2).unwrap();
        prop_assert!(left.max_abs_diff(&a.scale(b.trace())) < 1e-12);
        prop_assert!(right.max_abs_diff(&b.scale(a.trace())) < 1e-12);
    }

    #[test]
    fn coherent_overlap_matches_truncated_inner_product(
        ar in -2.0f64..2.0, ai in -2.0f64..2.0, br in -2.0f64..2.0, bi in -2.0f64..2.0,
    ) {
        let (a, b) = (povmlab::operator::C64::new(ar, ai), povmlab::operator::C64::new(br, bi));
        let s = choose_truncation(3.0, 1e-14).unwrap();
        let num = coherent_state(a, &s).unwrap().inner(&coherent_state(b, &s).unwrap());
        prop_assert!((num - coherent_overlap(a, b)).norm() < 1e-10);
    }

    #[test]
    fn phase_rotation_moves_coherent_states(r in 0.0f64..2.0, theta in 0.0..2.0 * PI, phi in -PI..PI) {
        let s = choose_truncation(2.0, 1e-13).unwrap();
        let psi = coherent_state(cis(theta) * r, &s).unwrap();
        let rotated = phase_rotation(phi, &s).apply(&psi);
        prop_assert!(rotated.max_abs_diff(&coherent_state(cis(theta + phi) * r, &s).unwrap()) < 1e-12);
    }

    #[test]
    fn heisenberg_preserves_spectrum(a in common::positive(3), b in common::positive(3)) {
        let (_, vecs) = b.eigh();
        let u = Operator::from_fn(3, |i, j| vecs[j].get(i));
        prop_assert!(u.unitarity_residual() < 1e-10);
        let x = a.eigvalsh();
        let y = a.heisenberg(&u).eigvalsh();
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() < 1e-10);
        }
    }
}
