//! One-sided (Hestenes) Jacobi SVD. Slower than the Gram-matrix route but
//! accurate to working precision for every singular value, so it backs the
//! full factorization where reconstruction error matters.

use crate::scalar::Scalar;

pub(crate) struct ThinSvd<T> {
    /// `m x r` column-major left factor, `r = min(m, n)`.
    pub u: Vec<T>,
    pub values: Vec<T>,
    /// `n x r` column-major right factor.
    pub v: Vec<T>,
}

const MAX_SWEEPS: usize = 80;

/// Thin SVD of the `m x n` row-major matrix `a` with `m >= n`.
pub(crate) fn jacobi_svd_tall<T: Scalar>(a: &[T], m: usize, n: usize) -> ThinSvd<T> {
    debug_assert!(m >= n);
    let mut w = vec![T::zero(); m * n];
    for r in 0..m {
        for c in 0..n {
            w[c * m + r] = a[r * n + c];
        }
    }
    let mut v = vec![T::zero(); n * n];
    for c in 0..n {
        v[c * n + c] = T::one();
    }

    let eps = T::epsilon();
    let tol = eps * T::of(m as f64).sqrt();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let cp = &w[p * m..(p + 1) * m];
                    let cq = &w[q * m..(q + 1) * m];
                    let mut alpha = T::zero();
                    let mut beta = T::zero();
                    let mut gamma = T::zero();
                    for (x, y) in cp.iter().zip(cq) {
                        alpha += *x * *x;
                        beta += *y * *y;
                        gamma += *x * *y;
                    }
                    (alpha, beta, gamma)
                };
                if gamma == T::zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::of(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, m, p, q, c, s);
                rotate(&mut v, n, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut norms: Vec<(usize, T)> = (0..n)
        .map(|c| (c, w[c * m..(c + 1) * m].iter().map(|x| *x * *x).sum::<T>().sqrt()))
        .collect();
    norms.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));

    let largest = norms.first().map(|x| x.1).unwrap_or(T::zero());
    let negligible = largest * eps * T::of(m.max(n) as f64);
    let mut u = vec![T::zero(); m * n];
    let mut vs = vec![T::zero(); n * n];
    let mut values = Vec::with_capacity(n);
    let mut filled = Vec::with_capacity(n);
    for (dst, &(src, sigma)) in norms.iter().enumerate() {
        values.push(sigma);
        vs[dst * n..(dst + 1) * n].copy_from_slice(&v[src * n..(src + 1) * n]);
        if sigma > negligible {
            for r in 0..m {
                u[dst * m + r] = w[src * m + r] / sigma;
            }
            filled.push(true);
        } else {
            filled.push(false);
        }
    }
    complete_orthonormal(&mut u, m, n, &filled);
    ThinSvd { u, values, v: vs }
}

fn rotate<T: Scalar>(w: &mut [T], len: usize, p: usize, q: usize, c: T, s: T) {
    let (head, tail) = w.split_at_mut(q * len);
    let cp = &mut head[p * len..(p + 1) * len];
    let cq = &mut tail[..len];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let yq = *y;
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

/// Replaces the columns not marked `filled` with unit vectors orthogonal to
/// every other column (column-major `m x r`).
pub(crate) fn complete_orthonormal<T: Scalar>(u: &mut [T], m: usize, r: usize, filled: &[bool]) {
    let mut done: Vec<usize> = (0..r).filter(|&c| filled[c]).collect();
    let mut candidate = 0;
    for c in 0..r {
        if filled[c] {
            continue;
        }
        loop {
            assert!(candidate < m, "ran out of candidate directions");
            let mut x = vec![T::zero(); m];
            x[candidate] = T::one();
            candidate += 1;
            for _ in 0..2 {
                for &d in &done {
                    let col = &u[d * m..(d + 1) * m];
                    let dot: T = col.iter().zip(&x).map(|(a, b)| *a * *b).sum();
                    for (xi, ci) in x.iter_mut().zip(col) {
                        *xi -= dot * *ci;
                    }
                }
            }
            let norm = x.iter().map(|t| *t * *t).sum::<T>().sqrt();
            if norm > T::of(0.5) {
                for (dst, xi) in u[c * m..(c + 1) * m].iter_mut().zip(&x) {
                    *dst = *xi / norm;
                }
                done.push(c);
                break;
            }
        }
    }
}
