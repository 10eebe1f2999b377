//! Hilbert-Schmidt subspaces spanned by POVM elements.
//!
//! Hermitian `d×d` operators are identified with real vectors of length `d²`
//! (diagonal entries, then `√2 Re` and `√2 Im` of each upper off-diagonal
//! entry) so that `Tr(AB)` becomes the Euclidean dot product.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::{re, Operator, C64};
use crate::povm::{gram_rank, real_gram, validate_density, Povm};
use crate::tolerances;

/// Real coordinates of a Hermitian operator in the orthonormal coordinate basis.
pub fn hermitian_coordinates(op: &Operator) -> DVector<f64> {
    let d = op.dim();
    let s = std::f64::consts::SQRT_2;
    let mut v = Vec::with_capacity(d * d);
    for i in 0..d {
        v.push(op.get(i, i).re);
    }
    for i in 0..d {
        for j in i + 1..d {
            let z = op.get(i, j);
            v.push(s * z.re);
            v.push(s * z.im);
        }
    }
    DVector::from_vec(v)
}

/// Inverse of [`hermitian_coordinates`].
pub fn from_hermitian_coordinates(v: &DVector<f64>, d: usize) -> Operator {
    assert_eq!(v.len(), d * d, "coordinate length");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DMatrix::<C64>::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = re(v[i]);
    }
    let mut k = d;
    for i in 0..d {
        for j in i + 1..d {
            let z = C64::new(h * v[k], h * v[k + 1]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    Operator::new(m).expect("finite coordinates")
}

/// Orthonormal Hermitian basis matching the coordinate ordering.
pub fn coordinate_basis(d: usize) -> Vec<Operator> {
    (0..d * d)
        .map(|k| {
            let mut v = DVector::zeros(d * d);
            v[k] = 1.0;
            from_hermitian_coordinates(&v, d)
        })
        .collect()
}

/// Span of a set of Hermitian operators.
#[derive(Clone, Debug)]
pub struct HsSubspace {
    basis_ops: Vec<Operator>,
    gram: DMatrix<f64>,
    rank: usize,
    rank_tol: f64,
    independent: Vec<usize>,
    orthonormal: DMatrix<f64>,
}

impl HsSubspace {
    /// Builds the span of Hermitian operators of a common dimension.
    pub fn from_operators(ops: Vec<Operator>, rank_tol: f64) -> Result<Self> {
        let first = ops.first().ok_or(Error::Empty)?;
        let d = first.dim();
        for (index, op) in ops.iter().enumerate() {
            if op.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: op.dim(),
                });
            }
            let residual = op.hermitian_residual();
            if residual > 1e-10 {
                return Err(Error::NotHermitian { index, residual });
            }
        }
        let gram = real_gram(&ops);
        let rank = gram_rank(&gram, rank_tol);
        let independent = pivoted_selection(&gram, rank);
        let coords: Vec<DVector<f64>> = independent
            .iter()
            .map(|&i| hermitian_coordinates(&ops[i]))
            .collect();
        let orthonormal = orthonormalize(&coords, d * d);
        Ok(Self {
            basis_ops: ops,
            gram,
            rank,
            rank_tol,
            independent,
            orthonormal,
        })
    }

    pub fn basis_ops(&self) -> &[Operator] {
        &self.basis_ops
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    /// Operator dimension `d`; the ambient Hermitian space has dimension `d²`.
    pub fn dim(&self) -> usize {
        self.basis_ops[0].dim()
    }

    /// Indices of a maximal linearly independent subset.
    pub fn independent_indices(&self) -> &[usize] {
        &self.independent
    }

    pub fn independent_ops(&self) -> Vec<Operator> {
        self.independent
            .iter()
            .map(|&i| self.basis_ops[i].clone())
            .collect()
    }

    /// Orthonormal coordinate columns spanning the subspace (`d² × rank`).
    pub fn orthonormal_coordinates(&self) -> &DMatrix<f64> {
        &self.orthonormal
    }

    /// Orthogonal projector onto the span, acting on coordinate vectors.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.orthonormal * self.orthonormal.transpose()
    }

    /// Frobenius distance between the span projectors of two subspaces.
    pub fn projector_distance(&self, other: &HsSubspace) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok((self.projector() - other.projector()).norm())
    }

    /// Ratio of the extreme Gram eigenvalues of the independent subset.
    pub fn condition_number(&self) -> f64 {
        let ops = self.independent_ops();
        if ops.is_empty() {
            return f64::INFINITY;
        }
        let vals = real_gram(&ops).symmetric_eigenvalues();
        let max = vals.iter().copied().fold(f64::MIN, f64::max);
        let min = vals.iter().copied().fold(f64::MAX, f64::min);
        if min <= 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }
}

/// Greedy pivoted Cholesky: the first `rank` pivots of the Gram matrix.
fn pivoted_selection(gram: &DMatrix<f64>, rank: usize) -> Vec<usize> {
    let n = gram.nrows();
    let mut residual: Vec<f64> = (0..n).map(|i| gram[(i, i)]).collect();
    let mut l = DMatrix::<f64>::zeros(n, rank);
    let mut chosen = Vec::with_capacity(rank);
    for k in 0..rank {
        let p = (0..n)
            .filter(|i| !chosen.contains(i))
            .max_by(|&a, &b| residual[a].total_cmp(&residual[b]))
            .expect("rank does not exceed operator count");
        let piv = residual[p].max(f64::MIN_POSITIVE).sqrt();
        for i in 0..n {
            let mut v = gram[(i, p)];
            for j in 0..k {
                v -= l[(i, j)] * l[(p, j)];
            }
            l[(i, k)] = v / piv;
        }
        for i in 0..n {
            residual[i] -= l[(i, k)] * l[(i, k)];
        }
        chosen.push(p);
    }
    chosen.sort_unstable();
    chosen
}

/// Twice-iterated Gram-Schmidt of independent coordinate vectors.
fn orthonormalize(vectors: &[DVector<f64>], len: usize) -> DMatrix<f64> {
    let mut q = DMatrix::<f64>::zeros(len, vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for _ in 0..2 {
            for j in 0..k {
                let c = q.column(j).dot(&w);
                w -= q.column(j) * c;
            }
        }
        let n = w.norm();
        q.set_column(k, &(w / n));
    }
    q
}

/// Span of a POVM's elements.
pub fn subspace_of(povm: &Povm, rank_tol: f64) -> HsSubspace {
    HsSubspace::from_operators(povm.ops().to_vec(), rank_tol)
        .expect("validated POVM elements are Hermitian and of equal dimension")
}

/// Bi-orthogonal partner of a linearly independent operator set.
#[derive(Clone, Debug)]
pub struct DualBasis {
    pub ops: Vec<Operator>,
    pub beta: DMatrix<f64>,
    pub duals: Vec<Operator>,
}

impl DualBasis {
    /// `Tr(M_m M'_{m'})` for all pairs.
    pub fn biorthogonality(&self) -> DMatrix<f64> {
        let n = self.ops.len();
        DMatrix::from_fn(n, n, |m, k| {
            self.ops[m].hs_inner(&self.duals[k]).expect("equal dimensions").re
        })
    }
}

/// `M'_{m'} = Σ_m β_{m'm} M_m` with `β = G⁻¹`.
pub fn dual_basis(ops: &[Operator]) -> Result<DualBasis> {
    let sub = HsSubspace::from_operators(ops.to_vec(), tolerances::RANK)?;
    if sub.rank() < ops.len() {
        return Err(Error::LinearDependence {
            rank: sub.rank(),
            len: ops.len(),
        });
    }
    let beta = sub
        .gram()
        .clone()
        .try_inverse()
        .ok_or(Error::LinearDependence {
            rank: sub.rank(),
            len: ops.len(),
        })?;
    let beta = (&beta + beta.transpose()) * 0.5;
    let duals = (0..ops.len())
        .map(|k| {
            let mut acc = Operator::zeros(ops[0].dim());
            for (m, op) in ops.iter().enumerate() {
                acc += &op.scale_real(beta[(k, m)]);
            }
            acc
        })
        .collect();
    Ok(DualBasis {
        ops: ops.to_vec(),
        beta,
        duals,
    })
}

/// `ρ_M = Σ_m Tr(M'_m ρ) M_m` over an independent subset of the span.
pub fn project_state(rho: &Operator, sub: &HsSubspace) -> Result<Operator> {
    if rho.dim() != sub.dim() {
        return Err(Error::DimensionMismatch {
            expected: sub.dim(),
            found: rho.dim(),
        });
    }
    validate_density(rho)?;
    project_operator(rho, sub)
}

/// Orthogonal projection of any Hermitian operator onto the span.
pub fn project_operator(x: &Operator, sub: &HsSubspace) -> Result<Operator> {
    let dual = dual_basis(&sub.independent_ops())?;
    let mut out = Operator::zeros(x.dim());
    for (m, op) in dual.ops.iter().enumerate() {
        let c = dual.duals[m].hs_inner(x)?;
        out += &op.scale(c);
    }
    Ok(out)
}

/// Orthonormal Hermitian basis of the complement of `sub` in the `d²`-dimensional Hermitian space.
pub fn orthogonal_complement(sub: &HsSubspace, ambient_dim: usize) -> Result<Vec<Operator>> {
    if ambient_dim != sub.dim() {
        return Err(Error::DimensionMismatch {
            expected: sub.dim(),
            found: ambient_dim,
        });
    }
    let n = ambient_dim * ambient_dim;
    let q = sub.orthonormal_coordinates();
    let mut basis: Vec<DVector<f64>> = (0..q.ncols()).map(|j| q.column(j).into_owned()).collect();
    let mut out = Vec::new();
    let mut used = vec![false; n];
    for _ in sub.rank()..n {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for k in (0..n).filter(|&k| !used[k]) {
            let mut w = DVector::zeros(n);
            w[k] = 1.0;
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dot(&w);
                    w -= b * c;
                }
            }
            let norm = w.norm();
            if best.as_ref().map_or(true, |(_, _, bn)| norm > *bn) {
                best = Some((k, w, norm));
            }
        }
        let (k, w, norm) = best.expect("complement dimension is positive");
        used[k] = true;
        let w = w / norm;
        out.push(from_hermitian_coordinates(&w, ambient_dim));
        basis.push(w);
    }
    Ok(out)
}

/// Equal Hilbert-Schmidt spans, judged by the projector distance.
pub fn informationally_equivalent(a: &Povm, b: &Povm, tol: f64) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let sa = subspace_of(a, tolerances::RANK);
    let sb = subspace_of(b, tolerances::RANK);
    sa.rank() == sb.rank() && sa.projector_distance(&sb).map_or(false, |d| d < tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::atom;
    use crate::povm::validate_povm;

    fn pvm_eg() -> Povm {
        validate_povm(vec![atom::proj_e(), atom::proj_g()], 1e-10).unwrap()
    }

    fn rho() -> Operator {
        Operator::from_2x2(
            re(0.7),
            C64::new(0.1, 0.3),
            C64::new(0.1, -0.3),
            re(0.3),
        )
    }

    #[test]
    fn coordinates_round_trip_and_inner_product() {
        let a = rho();
        let b = atom::sigma_y();
        let ca = hermitian_coordinates(&a);
        let cb = hermitian_coordinates(&b);
        assert!((ca.dot(&cb) - a.hs_inner(&b).unwrap().re).abs() < 1e-15);
        assert!(from_hermitian_coordinates(&ca, 2).max_abs_diff(&a) < 1e-15);
        let basis = coordinate_basis(3);
        assert_eq!(basis.len(), 9);
        let g = real_gram(&basis);
        assert!((g - DMatrix::<f64>::identity(9, 9)).amax() < 1e-15);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(subspace_of(&pvm_eg(), 1e-8).rank(), 2);
        let h = Operator::identity(2).scale_real(0.5);
        let u = validate_povm(vec![h.clone(), h], 1e-10).unwrap();
        let s = subspace_of(&u, 1e-8);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.independent_indices().len(), 1);
    }

    #[test]
    fn projector_is_idempotent() {
        let s = subspace_of(&pvm_eg(), 1e-8);
        let p = s.projector();
        assert!((&p * &p - &p).amax() < 1e-12);
    }

    #[test]
    fn dual_examples() {
        let d = dual_basis(pvm_eg().ops()).unwrap();
        assert!(d.duals[0].max_abs_diff(&atom::proj_e()) < 1e-15);
        let ops = vec![
            Operator::from_real_diagonal(&[0.8, 0.3]),
            Operator::from_real_diagonal(&[0.2, 0.7]),
            atom::sigma_x().scale_real(0.2) + Operator::identity(2).scale_real(0.5),
        ];
        let d = dual_basis(&ops).unwrap();
        assert!((d.biorthogonality() - DMatrix::<f64>::identity(3, 3)).amax() < 1e-10);
        let h = Operator::identity(2);
        assert!(matches!(
            dual_basis(&[h.clone(), h.scale_real(2.0)]),
            Err(Error::LinearDependence { rank: 1, len: 2 })
        ));
    }

    #[test]
    fn projection_examples() {
        let s = subspace_of(&pvm_eg(), 1e-8);
        let p = project_state(&rho(), &s).unwrap();
        assert!(p.max_abs_diff(&Operator::from_real_diagonal(&[0.7, 0.3])) < 1e-14);
        let complete = HsSubspace::from_operators(coordinate_basis(2), 1e-8).unwrap();
        assert!(project_state(&rho(), &complete).unwrap().max_abs_diff(&rho()) < 1e-14);
        assert!(project_state(&Operator::identity(2), &s).is_err());
    }

    #[test]
    fn complement_examples() {
        let s = subspace_of(&pvm_eg(), 1e-8);
        let c = orthogonal_complement(&s, 2).unwrap();
        assert_eq!(c.len(), 2);
        for t in &c {
            assert!((t.hs_norm() - 1.0).abs() < 1e-12);
            assert!(t.is_hermitian(1e-15));
            for m in pvm_eg().ops() {
                assert!(t.hs_inner(m).unwrap().norm() < 1e-12);
            }
        }
        assert!(c[0].hs_inner(&c[1]).unwrap().norm() < 1e-12);
        let full = HsSubspace::from_operators(coordinate_basis(2), 1e-8).unwrap();
        assert!(orthogonal_complement(&full, 2).unwrap().is_empty());
        assert!(orthogonal_complement(&s, 3).is_err());
    }

    #[test]
    fn equivalence_examples() {
        assert!(informationally_equivalent(&pvm_eg(), &pvm_eg(), 1e-8));
        let s = 1.0 / 2f64.sqrt();
        let p = Operator::projector(&atom::state(re(s), re(s)));
        let x = validate_povm(vec![p.clone(), Operator::identity(2) - p], 1e-10).unwrap();
        assert!(!informationally_equivalent(&pvm_eg(), &x, 1e-8));
        let mixed = validate_povm(
            vec![
                Operator::from_real_diagonal(&[0.9, 0.2]),
                Operator::from_real_diagonal(&[0.1, 0.8]),
            ],
            1e-10,
        )
        .unwrap();
        assert!(informationally_equivalent(&pvm_eg(), &mixed, 1e-8));
    }

    #[test]
    fn condition_number_diagnostic() {
        let s = subspace_of(&pvm_eg(), 1e-8);
        assert!((s.condition_number() - 1.0).abs() < 1e-12);
    }
}
