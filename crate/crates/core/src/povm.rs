//! POVMs, non-ideality matrices and the entropic bounds on joint measurements.
//!
//! Non-ideality matrices are column-stochastic: `R_m = Σ_{m'} λ_{mm'} E_{m'}`
//! with `Σ_m λ_{mm'} = 1`. Rows index the outcomes of the non-ideal
//! measurement, columns those of the reference PVM.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::{hs_inner, sum_ops, Ket, Operator};
use crate::tolerances;

/// Default number of `ωt₁` samples used by [`phase_average`].
pub const DEFAULT_PHASE_SAMPLES: usize = 64;

/// Validated POVM with labelled outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    labels: Vec<String>,
    ops: Vec<Operator>,
}

impl Povm {
    /// Validates labelled operators; `tol` bounds the positivity margin and the completeness residual.
    pub fn with_labels(labels: Vec<String>, ops: Vec<Operator>, tol: f64) -> Result<Self> {
        if labels.len() != ops.len() {
            return Err(Error::DimensionMismatch {
                expected: ops.len(),
                found: labels.len(),
            });
        }
        check_povm(&ops, tol)?;
        Ok(Self { labels, ops })
    }

    pub(crate) fn from_parts_unchecked(labels: Vec<String>, ops: Vec<Operator>) -> Self {
        Self { labels, ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn ops(&self) -> &[Operator] {
        &self.ops
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn op(&self, i: usize) -> &Operator {
        &self.ops[i]
    }

    /// Operator with the given label.
    pub fn by_label(&self, label: &str) -> Option<&Operator> {
        self.labels.iter().position(|l| l == label).map(|i| &self.ops[i])
    }

    /// `p_m = Tr ρ M_m`.
    pub fn probabilities(&self, rho: &Operator) -> Vec<f64> {
        self.ops
            .iter()
            .map(|m| hs_inner(m, rho).expect("state dimension").re)
            .collect()
    }

    /// Largest entrywise difference over all outcomes.
    pub fn max_abs_diff(&self, other: &Povm) -> f64 {
        assert_eq!(self.len(), other.len(), "outcome counts differ");
        self.ops
            .iter()
            .zip(&other.ops)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// `{U M_m U†}` for a unitary `U`.
    pub fn conjugate_by(&self, u: &Operator) -> Povm {
        Povm {
            labels: self.labels.clone(),
            ops: self.ops.iter().map(|m| m.conjugate_by(u)).collect(),
        }
    }

    /// True when every element is a projection within `tol`.
    pub fn is_pvm(&self, tol: f64) -> bool {
        self.ops.iter().all(|m| m.is_projection(tol))
    }

    /// Orthonormal eigenvectors of a PVM made of rank-one projections, in outcome order.
    pub fn rank_one_vectors(&self) -> Result<Vec<Ket>> {
        self.ops
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if !m.is_projection(1e-8) {
                    return Err(Error::Precondition(format!("outcome {i} is not a projection")));
                }
                let (vals, vecs) = m.eigh();
                let ones: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > 0.5).collect();
                if ones.len() != 1 {
                    return Err(Error::Precondition(format!(
                        "outcome {i} has rank {}, expected a rank-one projection",
                        ones.len()
                    )));
                }
                Ok(vecs[ones[0]].clone())
            })
            .collect()
    }
}

fn check_povm(ops: &[Operator], tol: f64) -> Result<()> {
    let first = ops.first().ok_or(Error::Empty)?;
    for op in ops {
        if op.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: op.dim(),
            });
        }
    }
    for (index, op) in ops.iter().enumerate() {
        let residual = op.hermitian_residual();
        if residual > tolerances::HERMITIAN {
            return Err(Error::NotHermitian { index, residual });
        }
    }
    for (index, op) in ops.iter().enumerate() {
        let min_eigenvalue = op.min_eigenvalue();
        if min_eigenvalue < -tol {
            return Err(Error::NotPositive {
                index,
                min_eigenvalue,
            });
        }
    }
    let total = sum_ops(ops)?;
    let residual = total.max_abs_diff(&Operator::identity(first.dim()));
    if residual > tol {
        return Err(Error::NotComplete { residual });
    }
    Ok(())
}

/// Validates a POVM, labelling outcomes by their index.
pub fn validate_povm(ops: Vec<Operator>, tol: f64) -> Result<Povm> {
    let labels = (0..ops.len()).map(|i| i.to_string()).collect();
    Povm::with_labels(labels, ops, tol)
}

/// POVM arranged on an `m × n` grid of outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePovm {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    grid: Vec<Vec<Operator>>,
}

impl BivariatePovm {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        grid: Vec<Vec<Operator>>,
        tol: f64,
    ) -> Result<Self> {
        if grid.len() != row_labels.len() {
            return Err(Error::DimensionMismatch {
                expected: row_labels.len(),
                found: grid.len(),
            });
        }
        for row in &grid {
            if row.len() != col_labels.len() {
                return Err(Error::DimensionMismatch {
                    expected: col_labels.len(),
                    found: row.len(),
                });
            }
        }
        let flat: Vec<Operator> = grid.iter().flatten().cloned().collect();
        check_povm(&flat, tol)?;
        Ok(Self {
            row_labels,
            col_labels,
            grid,
        })
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, m: usize, n: usize) -> &Operator {
        &self.grid[m][n]
    }

    pub fn dim(&self) -> usize {
        self.grid[0][0].dim()
    }

    /// Row-major flattening, labels `"row,col"`.
    pub fn flatten(&self) -> Povm {
        let mut labels = Vec::new();
        let mut ops = Vec::new();
        for (m, row) in self.grid.iter().enumerate() {
            for (n, op) in row.iter().enumerate() {
                labels.push(format!("{},{}", self.row_labels[m], self.col_labels[n]));
                ops.push(op.clone());
            }
        }
        Povm::from_parts_unchecked(labels, ops)
    }

    pub fn max_abs_diff(&self, other: &BivariatePovm) -> f64 {
        self.flatten().max_abs_diff(&other.flatten())
    }
}

/// Row marginal `{Σ_n R_mn}` and column marginal `{Σ_m R_mn}`.
pub fn marginals(b: &BivariatePovm) -> Result<(Povm, Povm)> {
    let rows: Vec<Operator> = (0..b.rows())
        .map(|m| sum_ops(b.grid[m].iter()))
        .collect::<Result<_>>()?;
    let cols: Vec<Operator> = (0..b.cols())
        .map(|n| sum_ops(b.grid.iter().map(|row| &row[n])))
        .collect::<Result<_>>()?;
    let tol = tolerances::COMPLETE;
    Ok((
        Povm::with_labels(b.row_labels.clone(), rows, tol)?,
        Povm::with_labels(b.col_labels.clone(), cols, tol)?,
    ))
}

/// Nonnegative matrix with unit column sums.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    entries: DMatrix<f64>,
}

impl StochasticMatrix {
    /// Validates and clamps entries in `[-1e-12, 0)` to zero.
    pub fn new(mut entries: DMatrix<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        for r in 0..entries.nrows() {
            for c in 0..entries.ncols() {
                let x = entries[(r, c)];
                if x < -tolerances::STOCHASTIC_NEGATIVE {
                    return Err(Error::NegativeCoefficients {
                        row: r,
                        col: c,
                        value: x,
                    });
                }
                if x < 0.0 {
                    entries[(r, c)] = 0.0;
                }
            }
        }
        for c in 0..entries.ncols() {
            let sum = entries.column(c).sum();
            if (sum - 1.0).abs() > tolerances::STOCHASTIC_COLUMN {
                return Err(Error::NotStochastic { col: c, sum });
            }
        }
        Ok(Self { entries })
    }

    pub fn from_rows(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(rows, cols, data))
    }

    /// Symmetric 2×2 matrix `[[p, 1-p], [1-p, p]]`.
    pub fn binary_symmetric(p: f64) -> Result<Self> {
        Self::from_rows(2, 2, &[p, 1.0 - p, 1.0 - p, p])
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries[(r, c)]
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn max_abs_diff(&self, other: &StochasticMatrix) -> f64 {
        (&self.entries - &other.entries).amax()
    }

    /// Average row entropy; requires a square matrix.
    pub fn row_entropy(&self) -> Result<f64> {
        row_entropy(self)
    }
}

/// `J = -(1/N) Σ_{mm'} λ_{mm'} ln(λ_{mm'} / Σ_{m''} λ_{mm''})` for square `λ`.
pub fn row_entropy(lambda: &StochasticMatrix) -> Result<f64> {
    if lambda.rows() != lambda.cols() {
        return Err(Error::NotSquare {
            rows: lambda.rows(),
            cols: lambda.cols(),
        });
    }
    Ok(rectangular_row_entropy(lambda))
}

/// Row entropy of an `M × N` matrix, normalized by the number of columns `N`.
pub fn rectangular_row_entropy(lambda: &StochasticMatrix) -> f64 {
    let e = &lambda.entries;
    let mut total = 0.0;
    for r in 0..e.nrows() {
        let row_sum: f64 = e.row(r).sum();
        for c in 0..e.ncols() {
            let x = e[(r, c)];
            if x > 0.0 {
                total -= x * (x / row_sum).ln();
            }
        }
    }
    total / e.ncols() as f64
}

/// Binary entropy `-p ln p - (1-p) ln(1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_entropy(&[p, 1.0 - p])
}

/// `-Σ p ln p` with `0 ln 0 = 0`; tiny negatives are treated as zero.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.ln())
        .sum::<f64>()
        + 0.0
}

/// Real Gram matrix `Tr(A_i A_j)` of Hermitian operators.
pub(crate) fn real_gram(ops: &[Operator]) -> DMatrix<f64> {
    let n = ops.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = hs_inner(&ops[i], &ops[j]).expect("equal dimensions").re;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// Number of eigenvalues of a PSD Gram matrix above `rank_tol × max`.
pub(crate) fn gram_rank(g: &DMatrix<f64>, rank_tol: f64) -> usize {
    if g.is_empty() {
        return 0;
    }
    let vals = g.clone().symmetric_eigenvalues();
    let max = vals.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return 0;
    }
    vals.iter().filter(|&&v| v > rank_tol * max).count()
}

/// Expresses each `R_m` as `Σ_{m'} λ_{mm'} E_{m'}` by a Hilbert-Schmidt least-squares fit.
pub fn fit_nonideality(r: &Povm, e: &Povm, tol: f64) -> Result<StochasticMatrix> {
    if r.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: r.dim(),
        });
    }
    let g = real_gram(e.ops());
    let rank = gram_rank(&g, tolerances::RANK);
    if rank < e.len() {
        return Err(Error::LinearDependence {
            rank,
            len: e.len(),
        });
    }
    let chol = g.clone().cholesky().ok_or(Error::LinearDependence {
        rank,
        len: e.len(),
    })?;
    let mut lambda = DMatrix::zeros(r.len(), e.len());
    for (m, rm) in r.ops().iter().enumerate() {
        let b = DVector::from_iterator(
            e.len(),
            e.ops().iter().map(|ej| hs_inner(ej, rm).expect("equal dimensions").re),
        );
        let x = chol.solve(&b);
        let mut recon = Operator::zeros(r.dim());
        for (j, ej) in e.ops().iter().enumerate() {
            recon += &ej.scale_real(x[j]);
            lambda[(m, j)] = x[j];
        }
        let residual = (rm - &recon).hs_norm();
        if residual > tol {
            return Err(Error::NoRepresentation {
                outcome: m,
                residual,
            });
        }
    }
    StochasticMatrix::new(lambda)
}

/// `-2 ln max_{mn} |⟨a_m|b_n⟩|` for two orthonormal bases.
pub fn md_bound(a: &[Ket], b: &[Ket]) -> Result<f64> {
    check_orthonormal(a)?;
    check_orthonormal(b)?;
    if a[0].dim() != b[0].dim() {
        return Err(Error::DimensionMismatch {
            expected: a[0].dim(),
            found: b[0].dim(),
        });
    }
    let max = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| x.inner(y).norm()))
        .fold(0.0, f64::max);
    Ok((-2.0 * max.ln()).max(0.0))
}

fn check_orthonormal(basis: &[Ket]) -> Result<()> {
    let first = basis.first().ok_or(Error::Empty)?;
    if basis.len() != first.dim() {
        return Err(Error::DimensionMismatch {
            expected: first.dim(),
            found: basis.len(),
        });
    }
    let mut residual: f64 = 0.0;
    for (i, x) in basis.iter().enumerate() {
        if x.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: x.dim(),
            });
        }
        for (j, y) in basis.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((x.inner(y) - target).norm());
        }
    }
    if residual > tolerances::ORTHONORMAL {
        return Err(Error::NonOrthonormal { residual });
    }
    Ok(())
}

/// Outcome of checking `J_(λ) + J_(μ) ≥ -2 ln max |⟨a_m|b_n⟩|`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointInequalityReport {
    pub lambda: StochasticMatrix,
    pub mu: StochasticMatrix,
    pub j_lambda: f64,
    pub j_mu: f64,
    pub bound: f64,
    pub slack: f64,
}

impl JointInequalityReport {
    pub fn holds(&self) -> bool {
        self.slack >= -tolerances::INEQUALITY
    }
}

/// Fits both marginals of `b` against rank-one PVMs `e` (rows) and `f` (columns) and evaluates the bound.
pub fn check_joint_inequality(
    b: &BivariatePovm,
    e: &Povm,
    f: &Povm,
) -> Result<JointInequalityReport> {
    let (rows, cols) = marginals(b)?;
    let lambda = fit_nonideality(&rows, e, tolerances::FIT)?;
    let mu = fit_nonideality(&cols, f, tolerances::FIT)?;
    let j_lambda = row_entropy(&lambda)?;
    let j_mu = row_entropy(&mu)?;
    let bound = md_bound(&e.rank_one_vectors()?, &f.rank_one_vectors()?)?;
    Ok(JointInequalityReport {
        lambda,
        mu,
        j_lambda,
        j_mu,
        bound,
        slack: j_lambda + j_mu - bound,
    })
}

/// Both sides of `H_E(ρ) + H_F(ρ) ≥ -2 ln max |⟨a_m|b_n⟩|`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropicReport {
    pub h_e: f64,
    pub h_f: f64,
    pub bound: f64,
    pub slack: f64,
}

impl EntropicReport {
    pub fn holds(&self) -> bool {
        self.slack >= -tolerances::INEQUALITY
    }
}

/// Checks that `rho` is Hermitian, unit-trace and positive.
pub fn validate_density(rho: &Operator) -> Result<()> {
    let h = rho.hermitian_residual();
    if h > tolerances::HERMITIAN.max(1e-10) {
        return Err(Error::InvalidDensity(format!("not Hermitian (residual {h:e})")));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
    }
    let min = rho.min_eigenvalue();
    if min < -tolerances::POSITIVE {
        return Err(Error::InvalidDensity(format!("smallest eigenvalue {min:e}")));
    }
    Ok(())
}

/// Evaluates the entropic uncertainty relation for two maximal PVMs.
pub fn entropic_ur(rho: &Operator, e: &Povm, f: &Povm) -> Result<EntropicReport> {
    validate_density(rho)?;
    let h_e = shannon_entropy(&e.probabilities(rho));
    let h_f = shannon_entropy(&f.probabilities(rho));
    let bound = md_bound(&e.rank_one_vectors()?, &f.rank_one_vectors()?)?;
    Ok(EntropicReport {
        h_e,
        h_f,
        bound,
        slack: h_e + h_f - bound,
    })
}

/// Uniform average of `family(t)` over `samples` equally spaced points in `[0, period)`.
pub fn phase_average_with<F>(family: F, period: f64, samples: usize) -> Result<Povm>
where
    F: Fn(f64) -> Result<Povm>,
{
    if samples == 0 {
        return Err(Error::Empty);
    }
    let first = family(0.0)?;
    let mut acc: Vec<Operator> = first.ops().to_vec();
    for k in 1..samples {
        let p = family(period * k as f64 / samples as f64)?;
        if p.len() != acc.len() {
            return Err(Error::DimensionMismatch {
                expected: acc.len(),
                found: p.len(),
            });
        }
        for (a, m) in acc.iter_mut().zip(p.ops()) {
            *a += m;
        }
    }
    let w = 1.0 / samples as f64;
    let ops = acc.into_iter().map(|a| a.scale_real(w)).collect();
    Povm::with_labels(first.labels().to_vec(), ops, tolerances::COMPLETE)
}

/// [`phase_average_with`] using [`DEFAULT_PHASE_SAMPLES`].
pub fn phase_average<F>(family: F, period: f64) -> Result<Povm>
where
    F: Fn(f64) -> Result<Povm>,
{
    phase_average_with(family, period, DEFAULT_PHASE_SAMPLES)
}
