//! Dense linear algebra: singular values, top-k left singular subspaces,
//! orthogonal projections, spectral norms and principal angles.
//!
//! Singular subspaces and values are computed from the eigendecomposition
//! of the smaller Gram matrix (`MᵀM` or `MMᵀ`), which is fast and accurate
//! for the leading directions the algorithms need. [`svd`] runs a one-sided
//! Jacobi sweep instead and is accurate for every singular value; it is the
//! route to use when the full factorization is required.

mod eigen;
mod jacobi;
mod matrix;

pub use matrix::DenseMatrix;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) use eigen::symmetric_eigen;

/// Relative tolerance under which `σ_k` and `σ_{k+1}` count as tied.
pub const DEGENERATE_GAP_TOL: f64 = 1e-9;

/// Orthonormal basis of a subspace of `R^dim_ambient`.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis<T> {
    dim_ambient: usize,
    /// Basis vectors, each stored contiguously.
    vectors: Vec<Vec<T>>,
}

fn orthonormality_tol<T: Scalar>() -> T {
    T::of(1e-8).max(T::epsilon() * T::of(1e3))
}

impl<T: Scalar> Basis<T> {
    /// Wraps vectors that are already orthonormal, checking the Gram matrix
    /// entrywise.
    pub fn new(dim_ambient: usize, vectors: Vec<Vec<T>>) -> Result<Self> {
        if vectors.len() > dim_ambient || vectors.iter().any(|v| v.len() != dim_ambient) {
            return Err(Error::DimensionMismatch(format!(
                "{} basis vectors in R^{dim_ambient}",
                vectors.len()
            )));
        }
        let tol = orthonormality_tol::<T>();
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate().skip(i) {
                let target = if i == j { T::one() } else { T::zero() };
                if (dot(a, b) - target).abs() > tol {
                    return Err(Error::InvalidArgument(format!(
                        "basis vectors {i} and {j} are not orthonormal"
                    )));
                }
            }
        }
        Ok(Self { dim_ambient, vectors })
    }

    /// Orthonormalizes linearly independent vectors (modified Gram-Schmidt,
    /// applied twice).
    pub fn orthonormalize(dim_ambient: usize, vectors: Vec<Vec<T>>) -> Result<Self> {
        let mut out: Vec<Vec<T>> = Vec::with_capacity(vectors.len());
        for mut v in vectors {
            if v.len() != dim_ambient {
                return Err(Error::DimensionMismatch("vector length".into()));
            }
            let original = norm(&v);
            for _ in 0..2 {
                for q in &out {
                    let c = dot(q, &v);
                    axpy(-c, q, &mut v);
                }
            }
            let len = norm(&v);
            if len <= original * T::epsilon().sqrt() || len == T::zero() {
                return Err(Error::InvalidArgument("vectors are linearly dependent".into()));
            }
            v.iter_mut().for_each(|x| *x /= len);
            out.push(v);
        }
        Ok(Self { dim_ambient, vectors: out })
    }

    /// Span of the given standard basis vectors.
    pub fn standard(dim_ambient: usize, axes: &[usize]) -> Result<Self> {
        let vectors = axes
            .iter()
            .map(|&a| {
                let mut v = vec![T::zero(); dim_ambient];
                *v.get_mut(a).ok_or_else(|| Error::DimensionMismatch(format!("axis {a}")))? =
                    T::one();
                Ok(v)
            })
            .collect::<Result<_>>()?;
        Self::new(dim_ambient, vectors)
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn dim_sub(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.vectors
    }

    /// Coordinates of each column of `m` in this basis (`dim_sub x cols`).
    /// Distances between coordinate columns equal distances between the
    /// projected columns.
    pub fn coordinates(&self, m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        if m.rows() != self.dim_ambient {
            return Err(Error::DimensionMismatch(format!(
                "basis in R^{} applied to {} rows",
                self.dim_ambient,
                m.rows()
            )));
        }
        let mut out = DenseMatrix::zeros(self.dim_sub(), m.cols());
        for (i, q) in self.vectors.iter().enumerate() {
            let dst = out.row_mut(i);
            for (r, &qr) in q.iter().enumerate() {
                if qr == T::zero() {
                    continue;
                }
                for (d, &x) in dst.iter_mut().zip(m.row(r)) {
                    *d += qr * x;
                }
            }
        }
        Ok(out)
    }

    /// Coordinates of a single vector.
    pub fn coordinates_of(&self, x: &[T]) -> Vec<T> {
        self.vectors.iter().map(|q| dot(q, x)).collect()
    }

    /// Length of the orthogonal projection of `x` onto the subspace.
    pub fn projection_length(&self, x: &[T]) -> T {
        norm(&self.coordinates_of(x))
    }

    /// The `dim_ambient x dim_ambient` orthogonal projector `QQᵀ`.
    pub fn projector(&self) -> DenseMatrix<T> {
        let d = self.dim_ambient;
        let mut p = DenseMatrix::zeros(d, d);
        for q in &self.vectors {
            for r in 0..d {
                if q[r] == T::zero() {
                    continue;
                }
                for (dst, &x) in p.row_mut(r).iter_mut().zip(q) {
                    *dst += q[r] * x;
                }
            }
        }
        p
    }
}

/// Leading left singular subspace with the singular spectrum it came from.
#[derive(Debug, Clone)]
pub struct LeftSubspace<T> {
    pub basis: Basis<T>,
    /// All `min(rows, cols)` singular values, descending.
    pub singular_values: Vec<T>,
    /// `σ_k` and `σ_{k+1}` tie within [`DEGENERATE_GAP_TOL`]; the basis is
    /// then one of several valid invariant subspaces.
    pub degenerate_gap: bool,
}

/// Full thin SVD `M = U diag(values) Vᵀ`.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: DenseMatrix<T>,
    pub values: Vec<T>,
    pub v: DenseMatrix<T>,
}

impl<T: Scalar> Svd<T> {
    pub fn reconstruct(&self) -> DenseMatrix<T> {
        let r = self.values.len();
        let us = DenseMatrix::from_fn(self.u.rows(), r, |i, j| self.u.get(i, j) * self.values[j]);
        us.matmul(&self.v.transpose()).expect("factor shapes agree")
    }
}

fn check_finite<T: Scalar>(m: &DenseMatrix<T>) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// All `min(rows, cols)` singular values in descending order.
pub fn svd_values<T: Scalar>(m: &DenseMatrix<T>) -> Result<Vec<T>> {
    check_finite(m)?;
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(vec![]);
    }
    if m.is_symmetric() {
        let mut values: Vec<T> =
            symmetric_eigen(m.as_slice(), rows, false).values.into_iter().map(|x| x.abs()).collect();
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        return Ok(values);
    }
    let (gram, n) = if cols <= rows {
        (m.gram_of_columns(), cols)
    } else {
        (m.gram_of_rows(), rows)
    };
    Ok(symmetric_eigen(&gram, n, false)
        .values
        .into_iter()
        .map(|l| l.max(T::zero()).sqrt())
        .collect())
}

/// Full thin SVD by one-sided Jacobi rotations.
pub fn svd<T: Scalar>(m: &DenseMatrix<T>) -> Result<Svd<T>> {
    check_finite(m)?;
    let (rows, cols) = m.shape();
    let transposed = rows < cols;
    let tall = if transposed { m.transpose() } else { m.clone() };
    let (mm, nn) = tall.shape();
    let thin = jacobi::jacobi_svd_tall(tall.as_slice(), mm, nn);
    let r = nn;
    let left = DenseMatrix::from_fn(mm, r, |i, j| thin.u[j * mm + i]);
    let right = DenseMatrix::from_fn(nn, r, |i, j| thin.v[j * nn + i]);
    Ok(if transposed {
        Svd { u: right, values: thin.values, v: left }
    } else {
        Svd { u: left, values: thin.values, v: right }
    })
}

/// Orthonormal basis of the span of the top-k left singular vectors.
pub fn top_k_left_basis<T: Scalar>(m: &DenseMatrix<T>, k: usize) -> Result<Basis<T>> {
    Ok(top_k_left_subspace(m, k)?.basis)
}

pub fn top_k_left_subspace<T: Scalar>(m: &DenseMatrix<T>, k: usize) -> Result<LeftSubspace<T>> {
    check_finite(m)?;
    let (rows, cols) = m.shape();
    let max = rows.min(cols);
    if k == 0 || k > max {
        return Err(Error::RankOutOfRange { k, max });
    }

    let mut vectors: Vec<Option<Vec<T>>> = Vec::with_capacity(k);
    let singular_values: Vec<T>;
    if cols <= rows {
        let eig = symmetric_eigen(&m.gram_of_columns(), cols, true);
        singular_values = eig.values.iter().map(|l| l.max(T::zero()).sqrt()).collect();
        let negligible = negligible_singular_value(&singular_values, rows.max(cols));
        for (j, &sigma) in singular_values.iter().enumerate().take(k) {
            if sigma <= negligible {
                vectors.push(None);
                continue;
            }
            let v = eig.vector(j);
            let u: Vec<T> = (0..rows).map(|r| dot(m.row(r), v) / sigma).collect();
            vectors.push(Some(u));
        }
    } else {
        let eig = symmetric_eigen(&m.gram_of_rows(), rows, true);
        singular_values = eig.values.iter().map(|l| l.max(T::zero()).sqrt()).collect();
        let negligible = negligible_singular_value(&singular_values, rows.max(cols));
        for (j, &sigma) in singular_values.iter().enumerate().take(k) {
            vectors.push((sigma > negligible).then(|| eig.vector(j).to_vec()));
        }
    }

    let basis = orthonormal_with_completion(rows, vectors);
    let degenerate_gap = k < max && {
        let (a, b) = (singular_values[k - 1], singular_values[k]);
        a - b <= T::of(DEGENERATE_GAP_TOL) * a
    };
    Ok(LeftSubspace { basis, singular_values, degenerate_gap })
}

/// Gram-route singular values below this are indistinguishable from zero.
fn negligible_singular_value<T: Scalar>(values: &[T], dim: usize) -> T {
    let top = values.first().copied().unwrap_or(T::zero());
    top * (T::epsilon() * T::of(dim as f64)).sqrt() * T::of(10.0)
}

/// Orthonormalizes the present vectors in order and fills the missing ones
/// with directions orthogonal to everything else.
fn orthonormal_with_completion<T: Scalar>(dim: usize, vectors: Vec<Option<Vec<T>>>) -> Basis<T> {
    let r = vectors.len();
    let mut cols = vec![T::zero(); dim * r];
    let mut filled = vec![false; r];
    let mut done: Vec<usize> = Vec::new();
    for (j, v) in vectors.into_iter().enumerate() {
        let Some(mut v) = v else { continue };
        for _ in 0..2 {
            for &d in &done {
                let q = &cols[d * dim..(d + 1) * dim];
                let c = dot(q, &v);
                axpy(-c, q, &mut v);
            }
        }
        let len = norm(&v);
        if len > T::of(0.5) {
            for (dst, x) in cols[j * dim..(j + 1) * dim].iter_mut().zip(&v) {
                *dst = *x / len;
            }
            filled[j] = true;
            done.push(j);
        }
    }
    jacobi::complete_orthonormal(&mut cols, dim, r, &filled);
    let vectors = (0..r).map(|j| cols[j * dim..(j + 1) * dim].to_vec()).collect();
    Basis { dim_ambient: dim, vectors }
}

/// Orthogonal projection of every column of `m` onto `span(basis)`.
pub fn project_columns<T: Scalar>(basis: &Basis<T>, m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let coords = basis.coordinates(m)?;
    let mut out = DenseMatrix::zeros(m.rows(), m.cols());
    for (i, q) in basis.vectors.iter().enumerate() {
        let c = coords.row(i);
        for (r, &qr) in q.iter().enumerate() {
            if qr == T::zero() {
                continue;
            }
            for (dst, &x) in out.row_mut(r).iter_mut().zip(c) {
                *dst += qr * x;
            }
        }
    }
    Ok(out)
}

/// Largest singular value.
pub fn spectral_norm<T: Scalar>(m: &DenseMatrix<T>) -> Result<T> {
    Ok(svd_values(m)?.first().copied().unwrap_or(T::zero()))
}

/// Sine of the largest principal angle between two subspaces of equal
/// dimension: `‖(I − P₁) P₂‖`.
pub fn sin_max_principal_angle<T: Scalar>(b1: &Basis<T>, b2: &Basis<T>) -> Result<T> {
    if b1.dim_ambient != b2.dim_ambient || b1.dim_sub() != b2.dim_sub() {
        return Err(Error::DimensionMismatch(format!(
            "subspaces of dimension {} in R^{} and {} in R^{}",
            b1.dim_sub(),
            b1.dim_ambient,
            b2.dim_sub(),
            b2.dim_ambient
        )));
    }
    let k = b2.dim_sub();
    if k == 0 {
        return Ok(T::zero());
    }
    // Columns of (I − Q₁Q₁ᵀ)Q₂; its spectral norm equals that of (I − P₁)P₂.
    let residuals: Vec<Vec<T>> = b2
        .vectors
        .iter()
        .map(|q2| {
            let mut w = q2.clone();
            for q1 in &b1.vectors {
                let c = dot(q1, q2);
                axpy(-c, q1, &mut w);
            }
            w
        })
        .collect();
    let mut gram = vec![T::zero(); k * k];
    for i in 0..k {
        for j in 0..k {
            gram[i * k + j] = dot(&residuals[i], &residuals[j]);
        }
    }
    let top = symmetric_eigen(&gram, k, false).values[0];
    Ok(top.max(T::zero()).sqrt().min(T::one()))
}

#[inline]
pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[inline]
pub(crate) fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

#[inline]
fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
