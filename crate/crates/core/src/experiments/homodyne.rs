//! Atomic state read out jointly with the sign of the field quadrature.

use crate::error::{Error, Result};
use crate::hilbert_schmidt::{orthogonal_complement, subspace_of};
use crate::operator::{cis, ln_factorial, FockSpace, Ket, Operator, C64, I};
use crate::povm::{binary_entropy, check_joint_inequality, marginals, BivariatePovm, JointInequalityReport, Povm};
use crate::tolerances;

use super::params::ExperimentParams;
use super::ramsey::{interference_povm, path_minus, path_plus, path_povm};
use super::simulate::{extract_operators, simulate_hr_final_state};

/// `M₊ = (1/π)∫_{Im α > 0} d²α |α⟩⟨α|` and `M₋ = I - M₊` on the truncated Fock space.
pub fn halfplane_field_povm(space: &FockSpace) -> Result<Povm> {
    let plus = Operator::from_fn(space.dim(), |n, m| {
        if n == m {
            return C64::new(0.5, 0.0);
        }
        let k = n as i64 - m as i64;
        if k % 2 == 0 {
            return C64::new(0.0, 0.0);
        }
        let ln = libm::lgamma(0.5 * (n + m) as f64 + 1.0) - 0.5 * (ln_factorial(n) + ln_factorial(m));
        I * (ln.exp() / std::f64::consts::PI / k as f64)
    });
    let minus = Operator::identity(space.dim()) - &plus;
    Povm::with_labels(vec!["+".into(), "-".into()], vec![plus, minus], tolerances::COMPLETE)
}

fn bivariate(ops: [[Operator; 2]; 2]) -> Result<BivariatePovm> {
    let [[ep, gp], [em, gm]] = ops;
    BivariatePovm::new(
        vec!["+".into(), "-".into()],
        vec!["e".into(), "g".into()],
        vec![vec![ep, gp], vec![em, gm]],
        tolerances::COMPLETE,
    )
}

/// `Ŝ = X + X†` with `X = i e^{-iντ} S₁* S₂ |p₊⟩⟨p₋|`.
pub fn s_hat(p: &ExperimentParams) -> Operator {
    let (s1, s2) = p.pulse_amplitudes();
    let x = Operator::outer(&path_plus(p), &path_minus(p)).scale(I * cis(-p.nu_tau) * s1.conj() * s2);
    &x + &x.adjoint()
}

/// Closed-form joint POVM; rows are the quadrature sign `+, -`, columns the atomic state `e, g`.
pub fn homodyne_povm(p: &ExperimentParams) -> Result<BivariatePovm> {
    p.require_nontrivial_delta()?;
    let (s1, s2) = p.pulse_amplitudes();
    let (a1, a2) = (s1.norm_sqr(), s2.norm_sqr());
    let a = p.erf_a();
    let c = p.overlap_constants();
    let paths = path_povm(p)?;
    let (pp, pm) = (paths.op(0), paths.op(1));
    let qe = interference_povm(p)?.op(0).clone();
    let s = s_hat(p);
    let m_e = |sign: f64| {
        (pp.scale_real((1.0 + sign * a - c.c1) * a1)
            + pm.scale_real((1.0 - sign * a - c.c1) * a2)
            + qe.scale_real(c.c1)
            + s.scale_real(c.c2))
        .scale_real(0.5)
    };
    let (ep, em) = (m_e(1.0), m_e(-1.0));
    let id = Operator::identity(2);
    let d = p.delta();
    let gp = id.scale_real(0.5 * (1.0 - a * d)) - &em;
    let gm = id.scale_real(0.5 * (1.0 + a * d)) - &ep;
    bivariate([[ep, gp], [em, gm]])
}

/// Same POVM from simulation with pointer `{|m⟩⟨m| ⊗ M_±}`.
pub fn homodyne_povm_simulated(p: &ExperimentParams) -> Result<BivariatePovm> {
    let half = halfplane_field_povm(&p.fock)?;
    let f = p.fock.dim();
    let ops = extract_operators(|psi| {
        let out = simulate_hr_final_state(p, psi)?;
        let e = Ket::from_fn(f, |n| out.get(n));
        let g = Ket::from_fn(f, |n| out.get(f + n));
        Ok(vec![
            half.op(0).expectation(&e).re,
            half.op(0).expectation(&g).re,
            half.op(1).expectation(&e).re,
            half.op(1).expectation(&g).re,
        ])
    })?;
    let mut it = ops.into_iter();
    let mut next = || it.next().expect("four outcomes");
    bivariate([[next(), next()], [next(), next()]])
}

/// Marginal non-idealities of the joint POVM.
#[derive(Clone, Debug)]
pub struct HomodyneReport {
    /// `A = erf(γ sin Φ)`.
    pub a: f64,
    /// `|C|`.
    pub c_abs: f64,
    /// Diagonal of the path non-ideality matrix, `(1 + A)/2`.
    pub lambda: f64,
    /// Off-diagonal of the interference-like non-ideality matrix.
    pub mu_prime: f64,
    pub j_lambda: f64,
    pub j_mu: f64,
    /// Reference PVM `{Q′_e, Q′_g}` for the atomic marginal, absent when degenerate.
    pub q_prime: Option<Povm>,
    /// Fitted matrices and the joint-measurement inequality, absent when degenerate.
    pub inequality: Option<JointInequalityReport>,
    pub degenerate: bool,
}

fn special_point(p: &ExperimentParams) -> bool {
    let r = (p.phi - std::f64::consts::FRAC_PI_2).rem_euclid(std::f64::consts::PI);
    p.delta().abs() < 1e-12 && r.min(std::f64::consts::PI - r) < 1e-12
}

/// `μ′ = (1 - √(1 - (1-δ²)(1-|C|²)))/2`.
pub fn mu_prime(p: &ExperimentParams) -> f64 {
    let d = p.delta();
    let c = p.overlap_constants().c().norm();
    0.5 * (1.0 - (1.0 - (1.0 - d * d) * (1.0 - c * c)).max(0.0).sqrt())
}

/// Fits both marginals and evaluates the joint-measurement inequality.
///
/// At `δ = 0`, `Φ = π/2` the atomic marginal is fitted against `{Q_e, Q_g}`;
/// elsewhere `{Q′_e, Q′_g}` is the eigenbasis of the atomic marginal.
pub fn homodyne_marginal_analysis(p: &ExperimentParams) -> Result<HomodyneReport> {
    let b = homodyne_povm(p)?;
    let a = p.erf_a();
    let c_abs = p.overlap_constants().c().norm();
    let lambda = 0.5 * (1.0 + a);
    let mu_prime = mu_prime(p);
    let j_lambda = binary_entropy(lambda);
    let paths = path_povm(p)?;
    let q_prime = if special_point(p) {
        Some(interference_povm(p)?)
    } else {
        let (_, cols) = marginals(&b)?;
        let (vals, vecs) = cols.op(0).eigh();
        if vals[1] - vals[0] < 1e-12 {
            None
        } else {
            let top = Operator::projector(&vecs[1]);
            let rest = Operator::identity(2) - &top;
            Some(Povm::with_labels(cols.labels().to_vec(), vec![top, rest], tolerances::COMPLETE)?)
        }
    };
    let inequality = match &q_prime {
        Some(q) => Some(check_joint_inequality(&b, &paths, q)?),
        None => None,
    };
    let degenerate = q_prime.is_none();
    Ok(HomodyneReport {
        a,
        c_abs,
        lambda,
        mu_prime,
        j_lambda,
        j_mu: binary_entropy(mu_prime),
        q_prime,
        inequality,
        degenerate,
    })
}

/// `T̂ = iCe^{-iντ}S₁*S₂|p₊⟩⟨p₋| + h.c.`
pub fn complement_operator(p: &ExperimentParams) -> Operator {
    let (s1, s2) = p.pulse_amplitudes();
    let c = p.overlap_constants().c();
    let x = Operator::outer(&path_plus(p), &path_minus(p)).scale(I * c * cis(-p.nu_tau) * s1.conj() * s2);
    &x + &x.adjoint()
}

/// `T̂` together with the checks made on it.
#[derive(Clone, Debug)]
pub struct ComplementReport {
    pub t: Operator,
    /// Largest `|Tr T̂ M|/‖T̂‖` over the POVM elements.
    pub max_overlap: f64,
    pub rank: usize,
    /// False when `|C S₁ S₂|` is too small for the third direction to be resolved numerically.
    pub resolvable: bool,
}

/// Builds `T̂` and checks that it is orthogonal to the joint POVM, whose span then has dimension 3.
pub fn homodyne_complement(p: &ExperimentParams) -> Result<ComplementReport> {
    if p.erf_a() == 0.0 {
        return Err(Error::Precondition("needs gamma * sin(phi) != 0".into()));
    }
    let b = homodyne_povm(p)?.flatten();
    let t = complement_operator(p);
    let norm = t.hs_norm();
    let max_overlap = b
        .ops()
        .iter()
        .map(|m| t.hs_inner(m).map(|z| z.norm() / norm))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if max_overlap > 1e-10 {
        return Err(Error::CheckFailed(format!("T is not orthogonal to the POVM (overlap {max_overlap:e})")));
    }
    let rank = subspace_of(&b, tolerances::RANK).rank();
    let (s1, s2) = p.pulse_amplitudes();
    let weight = p.overlap_constants().c().norm() * (s1 * s2).norm();
    let resolvable = weight * weight > 100.0 * tolerances::RANK;
    if rank > 3 || (resolvable && rank != 3) {
        return Err(Error::CheckFailed(format!("span dimension {rank}, expected 3")));
    }
    Ok(ComplementReport {
        t,
        max_overlap,
        rank,
        resolvable,
    })
}

/// Orthonormal basis of the operators orthogonal to every joint POVM element.
pub fn homodyne_span_complement(p: &ExperimentParams) -> Result<Vec<Operator>> {
    let b = homodyne_povm(p)?.flatten();
    orthogonal_complement(&subspace_of(&b, tolerances::RANK), 2)
}
