//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by the implicit QL iteration (the EISPACK `tred2`/`tql2` pair).
//!
//! Work storage is column-major so that the inner loops of both phases run
//! over contiguous memory.

use crate::scalar::Scalar;

/// Eigen-decomposition of a symmetric matrix, eigenvalues in descending
/// order. `vectors`, when present, holds the matching unit eigenvectors as
/// contiguous columns of an `n x n` column-major array.
#[derive(Debug, Clone)]
pub(crate) struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: Option<Vec<T>>,
    pub n: usize,
}

impl<T: Scalar> SymmetricEigen<T> {
    pub fn vector(&self, j: usize) -> &[T] {
        let v = self.vectors.as_ref().expect("eigenvectors were not requested");
        &v[j * self.n..(j + 1) * self.n]
    }
}

/// Decomposes the symmetric `n x n` matrix given in row-major order. Only
/// the lower triangle is read.
pub(crate) fn symmetric_eigen<T: Scalar>(a: &[T], n: usize, want_vectors: bool) -> SymmetricEigen<T> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return SymmetricEigen { values: vec![], vectors: want_vectors.then(Vec::new), n };
    }
    // Row-major lower triangle read as column-major upper triangle: by
    // symmetry either view is the same matrix.
    let mut v = a.to_vec();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(&mut v, &mut d, &mut e, n, want_vectors);
    ql_implicit(&mut d, &mut e, want_vectors.then_some(v.as_mut_slice()), n);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = want_vectors.then(|| {
        let mut sorted = vec![T::zero(); n * n];
        for (dst, &src) in order.iter().enumerate() {
            sorted[dst * n..(dst + 1) * n].copy_from_slice(&v[src * n..(src + 1) * n]);
        }
        sorted
    });
    SymmetricEigen { values, vectors, n }
}

// Column-major accessor: element (row, col) of an n x n matrix.
macro_rules! at {
    ($v:expr, $n:expr, $r:expr, $c:expr) => {
        $v[($c) * $n + ($r)]
    };
}

fn tridiagonalize<T: Scalar>(v: &mut [T], d: &mut [T], e: &mut [T], n: usize, accumulate: bool) {
    for j in 0..n {
        d[j] = at!(v, n, n - 1, j);
    }

    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = at!(v, n, i - 1, j);
                at!(v, n, i, j) = T::zero();
                at!(v, n, j, i) = T::zero();
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }

            for j in 0..i {
                f = d[j];
                at!(v, n, j, i) = f;
                g = e[j] + at!(v, n, j, j) * f;
                let col = &v[j * n..j * n + i];
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut v[j * n..j * n + i];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = at!(v, n, i - 1, j);
                at!(v, n, i, j) = T::zero();
            }
        }
        d[i] = h;
    }

    if accumulate {
        for i in 0..n - 1 {
            at!(v, n, n - 1, i) = at!(v, n, i, i);
            at!(v, n, i, i) = T::one();
            let h = d[i + 1];
            if h != T::zero() {
                for k in 0..=i {
                    d[k] = at!(v, n, k, i + 1) / h;
                }
                let (head, tail) = v.split_at_mut((i + 1) * n);
                let house = &tail[..=i];
                for j in 0..=i {
                    let col = &mut head[j * n..j * n + i + 1];
                    let mut g = T::zero();
                    for k in 0..=i {
                        g += house[k] * col[k];
                    }
                    for k in 0..=i {
                        col[k] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                at!(v, n, k, i + 1) = T::zero();
            }
        }
        for j in 0..n {
            d[j] = at!(v, n, n - 1, j);
            at!(v, n, n - 1, j) = T::zero();
        }
        at!(v, n, n - 1, n - 1) = T::one();
    } else {
        for j in 0..n {
            d[j] = at!(v, n, j, j);
        }
    }
    e[0] = T::zero();
}

fn ql_implicit<T: Scalar>(d: &mut [T], e: &mut [T], mut v: Option<&mut [T]>, n: usize) {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let two = T::of(2.0);
    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iterations = 0;
            loop {
                iterations += 1;
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(v) = v.as_deref_mut() {
                        let (left, right) = v.split_at_mut((i + 1) * n);
                        let vi = &mut left[i * n..];
                        let vi1 = &mut right[..n];
                        for k in 0..n {
                            let h = vi1[k];
                            vi1[k] = s * vi[k] + c * h;
                            vi[k] = c * vi[k] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 || iterations >= 64 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
}
