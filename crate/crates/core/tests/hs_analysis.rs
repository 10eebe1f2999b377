mod common;

use povmlab::hilbert_schmidt::{
    coordinate_basis, from_hermitian_coordinates, hermitian_coordinates, informationally_equivalent,
    orthogonal_complement, project_operator, project_state, subspace_of, HsSubspace,
};
use povmlab::operator::Operator;
use povmlab::povm::validate_povm;
use povmlab::tolerances;
use proptest::prelude::*;

#[test]
fn coordinate_basis_is_orthonormal() {
    for d in 1..5 {
        let b = coordinate_basis(d);
        assert_eq!(b.len(), d * d);
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((x.hs_inner(y).unwrap().re - want).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn three_level_projection_can_lose_positivity() {
    let m1 = Operator::from_real_diagonal(&[1.0, 0.5, 0.0]);
    let m2 = &Operator::identity(3) - &m1;
    let sub = HsSubspace::from_operators(vec![m1, m2], tolerances::RANK).unwrap();
    let rho = Operator::from_real_diagonal(&[0.0, 0.0, 1.0]);
    let proj = project_state(&rho, &sub).unwrap();
    assert!((proj.min_eigenvalue() + 1.0 / 6.0).abs() < 1e-12);
    assert!((proj.trace().re - 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn coordinates_round_trip(a in common::positive(3)) {
        let back = from_hermitian_coordinates(&hermitian_coordinates(&a), 3);
        prop_assert!(back.max_abs_diff(&a) < 1e-12);
        prop_assert!((hermitian_coordinates(&a).norm() - a.hs_norm()).abs() < 1e-12);
    }

    #[test]
    fn projection_is_idempotent_and_trace_preserving(p in common::povm(3, 2..=6), rho in common::density(3)) {
        let sub = subspace_of(&p, tolerances::RANK);
        let once = project_state(&rho, &sub).unwrap();
        let twice = project_operator(&once, &sub).unwrap();
        prop_assert!(twice.max_abs_diff(&once) < 1e-9);
        prop_assert!((once.trace().re - 1.0).abs() < 1e-9);
        prop_assert!(p.probabilities(&once).iter().zip(p.probabilities(&rho)).all(|(a, b)| (a - b).abs() < 1e-9));
    }

    #[test]
    fn two_level_projection_stays_positive(p in common::povm(2, 2..=4), rho in common::density(2)) {
        let sub = subspace_of(&p, tolerances::RANK);
        prop_assert!(project_state(&rho, &sub).unwrap().min_eigenvalue() >= -1e-10);
    }

    #[test]
    fn complement_is_orthogonal_and_fills_the_space(p in common::povm(3, 2..=5)) {
        let sub = subspace_of(&p, tolerances::RANK);
        let comp = orthogonal_complement(&sub, 3).unwrap();
        prop_assert_eq!(comp.len() + sub.rank(), 9);
        for c in &comp {
            for m in p.ops() {
                prop_assert!(c.hs_inner(m).unwrap().norm() < 1e-10);
            }
        }
    }

    #[test]
    fn relabeling_and_invertible_smearing_keep_the_span(p in common::povm(2, 3..=3)) {
        let mut ops = p.ops().to_vec();
        ops.reverse();
        let reordered = validate_povm(ops.clone(), 1e-9).unwrap();
        prop_assert!(informationally_equivalent(&p, &reordered, 1e-8));
        let mixed: Vec<Operator> = (0..3)
            .map(|m| &ops[m].scale_real(0.8) + &ops[(m + 1) % 3].scale_real(0.2))
            .collect();
        let smeared = validate_povm(mixed, 1e-9).unwrap();
        prop_assert!(informationally_equivalent(&p, &smeared, 1e-8));
        prop_assert!(subspace_of(&p, tolerances::RANK).projector_distance(&subspace_of(&smeared, tolerances::RANK)).unwrap() < 1e-8);
    }
}
