mod common;

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use povmlab::operator::{atom, Operator};
use povmlab::povm::{
    binary_entropy, entropic_ur, fit_nonideality, md_bound, row_entropy, shannon_entropy, validate_povm,
    StochasticMatrix,
};
use povmlab::tolerances;
use proptest::prelude::*;

#[test]
fn entropies() {
    assert_eq!(shannon_entropy(&[1.0, 0.0]), 0.0);
    assert!((shannon_entropy(&[0.25; 4]) - 2.0 * LN_2).abs() < 1e-15);
    assert!((binary_entropy(0.5) - LN_2).abs() < 1e-15);
    let bs = StochasticMatrix::binary_symmetric(0.2).unwrap();
    assert!((row_entropy(&bs).unwrap() - binary_entropy(0.2)).abs() < 1e-15);
}

#[test]
fn rejects_incomplete_sets() {
    assert!(validate_povm(vec![atom::proj_e()], 1e-10).is_err());
    let neg = Operator::from_real_diagonal(&[1.5, 1.0]);
    let rest = Operator::from_real_diagonal(&[-0.5, 0.0]);
    assert!(validate_povm(vec![neg, rest], 1e-10).is_err());
}

#[test]
fn mutually_unbiased_bases_saturate_the_bound() {
    let z = validate_povm(vec![atom::proj_e(), atom::proj_g()], 1e-12).unwrap();
    let (_, vx) = atom::sigma_x().eigh();
    let x = validate_povm(vx.iter().map(Operator::projector).collect(), 1e-12).unwrap();
    let b = md_bound(&z.rank_one_vectors().unwrap(), &x.rank_one_vectors().unwrap()).unwrap();
    assert!((b - LN_2).abs() < 1e-14);
}

fn stochastic(d: usize) -> impl Strategy<Value = StochasticMatrix> {
    prop::collection::vec(0.01f64..1.0, d * d).prop_map(move |v| {
        let mut m = DMatrix::from_vec(d, d, v);
        for mut c in m.column_iter_mut() {
            let s = c.sum();
            c /= s;
        }
        StochasticMatrix::new(m).unwrap()
    })
}

proptest! {
    #[test]
    fn random_povms_are_valid(p in common::povm(3, 2..=5), rho in common::density(3)) {
        let probs = p.probabilities(&rho);
        prop_assert!(probs.iter().all(|&x| x >= -1e-12));
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fit_recovers_smearing(e in common::pvm(3), lam in stochastic(3)) {
        let ops: Vec<Operator> = (0..3)
            .map(|m| {
                let mut acc = Operator::zeros(3);
                for k in 0..3 {
                    acc += &e.op(k).scale_real(lam.get(m, k));
                }
                acc
            })
            .collect();
        let r = validate_povm(ops, 1e-9).unwrap();
        let fit = fit_nonideality(&r, &e, tolerances::FIT).unwrap();
        prop_assert!(fit.max_abs_diff(&lam) < 1e-9);
        prop_assert!(row_entropy(&fit).unwrap() >= -1e-15);
    }

    #[test]
    fn entropic_relation_holds(rho in common::density(3), e in common::pvm(3), f in common::pvm(3)) {
        let rep = entropic_ur(&rho, &e, &f).unwrap();
        prop_assert!(rep.holds(), "{rep:?}");
    }

    #[test]
    fn conjugation_preserves_validity(p in common::povm(2, 2..=4), a in common::positive(2)) {
        let (_, vecs) = a.eigh();
        let u = Operator::from_fn(2, |i, j| vecs[j].get(i));
        let q = p.conjugate_by(&u);
        prop_assert!(validate_povm(q.ops().to_vec(), 1e-9).is_ok());
    }
}
