#![allow(dead_code)]

use povmlab::operator::{Operator, C64};
use povmlab::povm::{validate_povm, Povm};
use proptest::prelude::*;

pub fn complex() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C64::new(a, b))
}

/// `G G†` for a random `G`, shifted to be safely positive definite.
pub fn positive(d: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec(complex(), d * d).prop_map(move |v| {
        let g = Operator::from_rows(d, &v).unwrap();
        &(&g * &g.adjoint()) + &Operator::identity(d).scale_real(1e-3)
    })
}

pub fn density(d: usize) -> impl Strategy<Value = Operator> {
    positive(d).prop_map(|a| {
        let t = a.trace().re;
        a.scale_real(1.0 / t)
    })
}

pub fn inverse_sqrt(s: &Operator) -> Operator {
    let (vals, vecs) = s.eigh();
    let mut out = Operator::zeros(s.dim());
    for (v, k) in vals.iter().zip(&vecs) {
        out += &Operator::projector(k).scale_real(1.0 / v.sqrt());
    }
    out
}

/// Normalizes positive operators into a POVM via `S^{-1/2} A_k S^{-1/2}`.
pub fn normalize(raw: Vec<Operator>) -> Povm {
    let d = raw[0].dim();
    let mut s = Operator::zeros(d);
    for a in &raw {
        s += a;
    }
    let w = inverse_sqrt(&s);
    let ops = raw.iter().map(|a| (&(&w * a) * &w).hermitian_part()).collect();
    validate_povm(ops, 1e-9).unwrap()
}

pub fn povm(d: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Povm> {
    prop::collection::vec(positive(d), n).prop_map(normalize)
}

/// Eigenbasis PVM of a random Hermitian operator.
pub fn pvm(d: usize) -> impl Strategy<Value = Povm> {
    positive(d).prop_map(|a| {
        let (_, vecs) = a.eigh();
        validate_povm(vecs.iter().map(Operator::projector).collect(), 1e-9).unwrap()
    })
}
