//! Dense complex operators, kets, truncated Fock spaces and coherent states.
//!
//! Composite systems are ordered atom-major: for `A ⊗ B` the left factor
//! indexes the slower-varying part of the composite index. Atom basis index 0
//! is `|e⟩` and index 1 is `|g⟩`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

/// Shorthand for a real complex number.
#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct Operator {
    m: DMatrix<C64>,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator(dim={})", self.dim())?;
        for i in 0..self.dim() {
            write!(f, "\n  [")?;
            for j in 0..self.dim() {
                let z = self.m[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            write!(f, " ]")?;
        }
        Ok(())
    }
}

impl Operator {
    /// Wraps a matrix, rejecting non-square or non-finite input.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::Empty);
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { m })
    }

    /// Builds from row-major entries.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds a 2×2 operator from row-major entries.
    pub fn from_2x2(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self {
            m: DMatrix::from_row_slice(2, 2, &[a, b, c, d]),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            m: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { re(diag[i]) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) })
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &Ket, b: &Ket) -> Self {
        Self {
            m: &a.v * b.v.adjoint(),
        }
    }

    /// `|a⟩⟨a|`.
    pub fn projector(a: &Ket) -> Self {
        Self::outer(a, a)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { m: &self.m * s }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            m: self.m.map(|z| z * s),
        }
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.m[(i, i)]).collect()
    }

    /// `Tr(A†B)`.
    pub fn hs_inner(&self, other: &Operator) -> Result<C64> {
        hs_inner(self, other)
    }

    /// Hilbert-Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim(), other.dim(), "operator dimensions differ");
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|A - A†|`.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.dim();
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                r = r.max((self.m[(i, j)] - self.m[(j, i)].conj()).norm());
            }
        }
        r
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self {
            m: (&self.m + self.m.adjoint()) * re(0.5),
        }
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigvalsh()[0]
    }

    /// Positivity of the Hermitian part, with eigenvalues down to `-tol` accepted.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// Hermitian and idempotent within `tol`.
    pub fn is_projection(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let sq = &self.m * &self.m;
        sq.iter()
            .zip(self.m.iter())
            .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigvalsh(&self) -> Vec<f64> {
        let e = self.hermitian_part().m.symmetric_eigenvalues();
        let mut v: Vec<f64> = e.iter().copied().collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    /// Eigen-decomposition of the Hermitian part, eigenvalues ascending.
    pub fn eigh(&self) -> (Vec<f64>, Vec<Ket>) {
        let eig = self.hermitian_part().m.symmetric_eigen();
        let mut idx: Vec<usize> = (0..self.dim()).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = idx
            .iter()
            .map(|&k| Ket {
                v: eig.eigenvectors.column(k).into_owned(),
            })
            .collect();
        (values, vectors)
    }

    /// `A|ψ⟩`.
    pub fn apply(&self, psi: &Ket) -> Ket {
        assert_eq!(self.dim(), psi.dim(), "operator/ket dimensions differ");
        Ket { v: &self.m * &psi.v }
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &Ket) -> C64 {
        psi.inner(&self.apply(psi))
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, u: &Operator) -> Self {
        Self {
            m: &u.m * &self.m * u.m.adjoint(),
        }
    }

    /// `U† A U`.
    pub fn heisenberg(&self, u: &Operator) -> Self {
        Self {
            m: u.m.adjoint() * &self.m * &u.m,
        }
    }

    /// Unitarity residual `max |U†U - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let p = Operator {
            m: self.m.adjoint() * &self.m,
        };
        p.max_abs_diff(&Operator::identity(self.dim()))
    }
}

/// `Tr(A†B)`.
pub fn hs_inner(a: &Operator, b: &Operator) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.m
        .iter()
        .zip(b.m.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

macro_rules! binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr<&Operator> for &Operator {
            type Output = Operator;
            fn $f(self, rhs: &Operator) -> Operator {
                assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
                Operator { m: &self.m $op &rhs.m }
            }
        }
        impl $tr<Operator> for Operator {
            type Output = Operator;
            fn $f(self, rhs: Operator) -> Operator {
                &self $op &rhs
            }
        }
        impl $tr<&Operator> for Operator {
            type Output = Operator;
            fn $f(self, rhs: &Operator) -> Operator {
                &self $op rhs
            }
        }
        impl $tr<Operator> for &Operator {
            type Output = Operator;
            fn $f(self, rhs: Operator) -> Operator {
                self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl AddAssign<&Operator> for Operator {
    fn add_assign(&mut self, rhs: &Operator) {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        self.m += &rhs.m;
    }
}

impl SubAssign<&Operator> for Operator {
    fn sub_assign(&mut self, rhs: &Operator) {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        self.m -= &rhs.m;
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { m: -&self.m }
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        -&self
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, s: f64) -> Operator {
        self.scale_real(s)
    }
}

impl Mul<f64> for Operator {
    type Output = Operator;
    fn mul(self, s: f64) -> Operator {
        self.scale_real(s)
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, s: C64) -> Operator {
        self.scale(s)
    }
}

impl Mul<C64> for Operator {
    type Output = Operator;
    fn mul(self, s: C64) -> Operator {
        self.scale(s)
    }
}

/// Sum of a nonempty sequence of equal-dimension operators.
pub fn sum_ops<'a>(ops: impl IntoIterator<Item = &'a Operator>) -> Result<Operator> {
    let mut it = ops.into_iter();
    let mut acc = it.next().ok_or(Error::Empty)?.clone();
    for op in it {
        if op.dim() != acc.dim() {
            return Err(Error::DimensionMismatch {
                expected: acc.dim(),
                found: op.dim(),
            });
        }
        acc += op;
    }
    Ok(acc)
}

/// Complex column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    v: DVector<C64>,
}

impl Ket {
    pub fn new(v: DVector<C64>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::Empty);
        }
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { v })
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amps))
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize) -> C64) -> Self {
        Self {
            v: DVector::from_fn(dim, |i, _| f(i)),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            v: DVector::zeros(dim),
        }
    }

    /// Standard basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = DVector::zeros(dim);
        v[index] = re(1.0);
        Self { v }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn vector(&self) -> &DVector<C64> {
        &self.v
    }

    #[inline]
    pub fn get(&self, i: usize) -> C64 {
        self.v[i]
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.v.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.v.norm()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.v.norm_squared()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Precondition("cannot normalize the zero vector".into()));
        }
        Ok(self.scale(re(1.0 / n)))
    }

    /// True when `‖ψ‖ = 1` within `tol`.
    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> C64 {
        assert_eq!(self.dim(), other.dim(), "ket dimensions differ");
        self.v.dotc(&other.v)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { v: &self.v * s }
    }

    pub fn max_abs_diff(&self, other: &Ket) -> f64 {
        assert_eq!(self.dim(), other.dim(), "ket dimensions differ");
        self.v
            .iter()
            .zip(other.v.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add<&Ket> for &Ket {
    type Output = Ket;
    fn add(self, rhs: &Ket) -> Ket {
        assert_eq!(self.dim(), rhs.dim(), "ket dimensions differ");
        Ket { v: &self.v + &rhs.v }
    }
}

impl Sub<&Ket> for &Ket {
    type Output = Ket;
    fn sub(self, rhs: &Ket) -> Ket {
        assert_eq!(self.dim(), rhs.dim(), "ket dimensions differ");
        Ket { v: &self.v - &rhs.v }
    }
}

impl Mul<C64> for &Ket {
    type Output = Ket;
    fn mul(self, s: C64) -> Ket {
        self.scale(s)
    }
}

/// Kronecker product, left factor slower-varying.
pub trait Tensor<Rhs = Self> {
    type Output;
    fn tensor(&self, rhs: &Rhs) -> Self::Output;
}

impl Tensor for Operator {
    type Output = Operator;
    fn tensor(&self, rhs: &Operator) -> Operator {
        Operator {
            m: self.m.kronecker(&rhs.m),
        }
    }
}

impl Tensor for Ket {
    type Output = Ket;
    fn tensor(&self, rhs: &Ket) -> Ket {
        Ket {
            v: self.v.kronecker(&rhs.v),
        }
    }
}

/// Free-function form of [`Tensor::tensor`].
pub fn tensor<T: Tensor>(a: &T, b: &T) -> T::Output {
    a.tensor(b)
}

/// Partial trace over the right factor of `left ⊗ right`, `left` of dimension `left_dim`.
pub fn partial_trace_right(x: &Operator, left_dim: usize) -> Result<Operator> {
    if left_dim == 0 || x.dim() % left_dim != 0 {
        return Err(Error::NotDivisible {
            dim: x.dim(),
            atom_dim: left_dim,
        });
    }
    let r = x.dim() / left_dim;
    Ok(Operator::from_fn(left_dim, |a, b| {
        (0..r).map(|k| x.m[(a * r + k, b * r + k)]).sum()
    }))
}

/// Partial trace over the left factor of `left ⊗ right`.
pub fn partial_trace_left(x: &Operator, left_dim: usize) -> Result<Operator> {
    if left_dim == 0 || x.dim() % left_dim != 0 {
        return Err(Error::NotDivisible {
            dim: x.dim(),
            atom_dim: left_dim,
        });
    }
    let r = x.dim() / left_dim;
    Ok(Operator::from_fn(r, |i, j| {
        (0..left_dim).map(|a| x.m[(a * r + i, a * r + j)]).sum()
    }))
}

/// Traces out the field of an `atom ⊗ field` operator.
pub fn partial_trace_field(x: &Operator) -> Result<Operator> {
    partial_trace_right(x, 2)
}

/// Two-level atom basis and Pauli matrices.
pub mod atom {
    use super::{re, Ket, Operator, C64, I};

    pub const DIM: usize = 2;

    pub fn excited() -> Ket {
        Ket::basis(DIM, 0)
    }

    pub fn ground() -> Ket {
        Ket::basis(DIM, 1)
    }

    /// `α|e⟩ + β|g⟩`.
    pub fn state(alpha: C64, beta: C64) -> Ket {
        Ket::from_fn(DIM, |i| if i == 0 { alpha } else { beta })
    }

    pub fn proj_e() -> Operator {
        Operator::from_real_diagonal(&[1.0, 0.0])
    }

    pub fn proj_g() -> Operator {
        Operator::from_real_diagonal(&[0.0, 1.0])
    }

    pub fn sigma_x() -> Operator {
        let z = re(0.0);
        Operator::from_2x2(z, re(1.0), re(1.0), z)
    }

    pub fn sigma_y() -> Operator {
        let z = re(0.0);
        Operator::from_2x2(z, -I, I, z)
    }

    pub fn sigma_z() -> Operator {
        Operator::from_real_diagonal(&[1.0, -1.0])
    }
}

/// Truncated Fock space `|0⟩ … |D⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FockSpace {
    truncation: usize,
    tail_tolerance: f64,
}

impl FockSpace {
    pub fn new(truncation: usize, tail_tolerance: f64) -> Result<Self> {
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(Error::Precondition(format!(
                "tail tolerance must lie in (0, 1), got {tail_tolerance}"
            )));
        }
        Ok(Self {
            truncation,
            tail_tolerance,
        })
    }

    /// Truncation `D`; the space has dimension `D + 1`.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    pub fn dim(&self) -> usize {
        self.truncation + 1
    }

    /// Fails when a coherent state of modulus `amplitude` loses too much Poisson mass.
    pub fn check_amplitude(&self, amplitude: f64) -> Result<()> {
        let tail = poisson_tail(amplitude * amplitude, self.truncation);
        if tail < self.tail_tolerance {
            Ok(())
        } else {
            Err(Error::Truncation {
                amplitude,
                truncation: self.truncation,
                tail,
                tolerance: self.tail_tolerance,
            })
        }
    }

    pub fn number_state(&self, n: usize) -> Ket {
        Ket::basis(self.dim(), n)
    }

    /// `a†a`.
    pub fn number_operator(&self) -> Operator {
        let d: Vec<f64> = (0..self.dim()).map(|n| n as f64).collect();
        Operator::from_real_diagonal(&d)
    }

    pub fn identity(&self) -> Operator {
        Operator::identity(self.dim())
    }
}

/// `ln n!` via the log-gamma function.
pub fn ln_factorial(n: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// Poisson weight `e^{-mean} mean^n / n!`.
pub fn poisson_weight(mean: f64, n: usize) -> f64 {
    if mean == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-mean + n as f64 * mean.ln() - ln_factorial(n)).exp()
}

/// Poisson mass strictly above `d`, summed directly.
pub fn poisson_tail(mean: f64, d: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let mut n = d + 1;
    let mut term = poisson_weight(mean, n);
    let mut sum = 0.0;
    loop {
        sum += term;
        n += 1;
        term *= mean / n as f64;
        if term == 0.0 || (n as f64 > mean && term <= sum * f64::EPSILON * 1e-3) {
            break;
        }
    }
    sum
}

/// Smallest truncation whose Poisson tail at `|α| = gamma_max` is below `tail_tol`.
pub fn choose_truncation(gamma_max: f64, tail_tol: f64) -> Result<FockSpace> {
    if !(gamma_max >= 0.0 && gamma_max.is_finite()) {
        return Err(Error::Precondition(format!(
            "gamma_max must be finite and non-negative, got {gamma_max}"
        )));
    }
    let mean = gamma_max * gamma_max;
    let mut d = 0;
    while poisson_tail(mean, d) >= tail_tol {
        d += 1;
    }
    FockSpace::new(d, tail_tol)
}

/// Truncated coherent state; amplitudes are not renormalized.
pub fn coherent_state(alpha: C64, space: &FockSpace) -> Result<Ket> {
    space.check_amplitude(alpha.norm())?;
    let mut v = DVector::zeros(space.dim());
    v[0] = re((-0.5 * alpha.norm_sqr()).exp());
    for n in 1..space.dim() {
        v[n] = v[n - 1] * alpha / (n as f64).sqrt();
    }
    Ket::new(v)
}

/// Exact overlap `⟨α|β⟩ = exp(-|α|²/2 - |β|²/2 + ᾱβ)`.
pub fn coherent_overlap(alpha: C64, beta: C64) -> C64 {
    (-0.5 * alpha.norm_sqr() - 0.5 * beta.norm_sqr() + alpha.conj() * beta).exp()
}

/// `e^{iφ a†a}`.
pub fn phase_rotation(phi: f64, space: &FockSpace) -> Operator {
    let d: Vec<C64> = (0..space.dim()).map(|n| cis(phi * n as f64)).collect();
    Operator::from_diagonal(&d)
}
