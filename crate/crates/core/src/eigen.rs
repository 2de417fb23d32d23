//! Eigensolver for real symmetric tridiagonal matrices.
//!
//! Eigenvalues by Sturm-sequence bisection (each converged to floating
//! point resolution), eigenvectors by inverse iteration with partial
//! pivoting and in-cluster reorthogonalization. This is all the charge
//! basis needs: the Hamiltonian there is tridiagonal by construction.

use crate::error::{Error, Result};
use crate::quad::compensated_sum;
use crate::real::Real;

/// Lowest eigenpairs of a symmetric tridiagonal matrix, ascending.
#[derive(Debug, Clone)]
pub struct EigenPairs<R> {
    pub values: Vec<R>,
    /// `vectors[k]` is the normalized eigenvector of `values[k]`.
    pub vectors: Vec<Vec<R>>,
}

/// Number of eigenvalues strictly below `x`, by counting negative LDLᵀ
/// pivots of T − xI.
fn sturm_count<R: Real>(diag: &[R], off: &[R], x: R) -> usize {
    let floor = R::min_positive_value() * R::of(1e8);
    let mut count = 0usize;
    let mut q = diag[0] - x;
    if q < R::zero() {
        count += 1;
    }
    for i in 1..diag.len() {
        let q_safe = if q.abs() < floor {
            if q >= R::zero() {
                floor
            } else {
                -floor
            }
        } else {
            q
        };
        q = (diag[i] - x) - off[i - 1] * off[i - 1] / q_safe;
        if q < R::zero() {
            count += 1;
        }
    }
    count
}

/// Solve (T − λI) x = b in place by Gaussian elimination with partial
/// pivoting (fill-in limited to a second superdiagonal).
fn solve_shifted<R: Real>(diag: &[R], off: &[R], lambda: R, b: &mut [R]) {
    let n = diag.len();
    let floor = R::min_positive_value() * R::of(1e8);
    let mut d: Vec<R> = diag.iter().map(|&v| v - lambda).collect();
    let mut u1: Vec<R> = off.to_vec();
    u1.push(R::zero());
    let mut u2 = vec![R::zero(); n];
    let mut sub: Vec<R> = off.to_vec();

    for i in 0..n - 1 {
        if sub[i].abs() > d[i].abs() {
            // swap rows i and i+1; row i holds columns (i, i+1, i+2) in
            // (d, u1, u2), row i+1 holds (i, i+1, i+2) in (sub, d, u1)
            let (old_di, old_u1i, old_u2i) = (d[i], u1[i], u2[i]);
            d[i] = sub[i];
            u1[i] = d[i + 1];
            u2[i] = u1[i + 1];
            sub[i] = old_di;
            d[i + 1] = old_u1i;
            u1[i + 1] = old_u2i;
            b.swap(i, i + 1);
        }
        let pivot = if d[i].abs() < floor {
            if d[i] >= R::zero() {
                floor
            } else {
                -floor
            }
        } else {
            d[i]
        };
        let m = sub[i] / pivot;
        d[i + 1] = d[i + 1] - m * u1[i];
        u1[i + 1] = u1[i + 1] - m * u2[i];
        b[i + 1] = b[i + 1] - m * b[i];
        d[i] = pivot;
    }

    // back substitution
    let last = n - 1;
    let dn = if d[last].abs() < floor {
        if d[last] >= R::zero() {
            floor
        } else {
            -floor
        }
    } else {
        d[last]
    };
    b[last] = b[last] / dn;
    if n >= 2 {
        b[last - 1] = (b[last - 1] - u1[last - 1] * b[last]) / d[last - 1];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - u1[i] * b[i + 1] - u2[i] * b[i + 2]) / d[i];
    }
}

fn norm2<R: Real>(v: &[R]) -> R {
    compensated_sum(v.iter().map(|&x| x * x)).sqrt()
}

fn dot<R: Real>(a: &[R], b: &[R]) -> R {
    compensated_sum(a.iter().zip(b).map(|(&x, &y)| x * y))
}

/// Deterministic start vector for inverse iteration; varies with the
/// eigenvalue index so clustered iterations do not alias.
fn start_vector<R: Real>(n: usize, k: usize) -> Vec<R> {
    let mut state = (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(1);
    (0..n)
        .map(|_| {
            state = state
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407);
            R::of(((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5)
        })
        .collect()
}

/// Compute the `count` lowest eigenpairs.
pub fn lowest_eigenpairs<R: Real>(diag: &[R], off: &[R], count: usize) -> Result<EigenPairs<R>> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(Error::invalid("tridiagonal arrays must satisfy |off| = |diag| - 1 ≥ 0"));
    }
    if count == 0 || count > n {
        return Err(Error::invalid(format!(
            "requested {count} eigenpairs of a {n}-dimensional matrix"
        )));
    }

    // Gershgorin interval
    let mut lo = R::max_value();
    let mut hi = -R::max_value();
    let mut scale = R::zero();
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { R::zero() };
        let right = if i < n - 1 { off[i].abs() } else { R::zero() };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
        scale = scale.max(diag[i].abs() + left + right);
    }
    let pad = (hi - lo).abs() * R::epsilon() + R::min_positive_value();
    lo = lo - pad - R::one();
    hi = hi + pad + R::one();

    let mut values = Vec::with_capacity(count);
    for k in 0..count {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..(4 * 8 * std::mem::size_of::<R>()) {
            let mid = (a + b) * R::of(0.5);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(diag, off, mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        values.push((a + b) * R::of(0.5));
    }

    // inverse iteration, reorthogonalizing against everything already found
    let cluster_tol = scale * R::epsilon() * R::of(64.0) + R::min_positive_value();
    let residual_tol = scale * R::epsilon() * R::of(1e3) * R::of(n as f64);
    let mut vectors: Vec<Vec<R>> = Vec::with_capacity(count);
    for k in 0..count {
        // separate identical shifts slightly so the solves stay benign
        let mut shift = values[k];
        if k > 0 && (values[k] - values[k - 1]).abs() <= cluster_tol {
            shift = shift + cluster_tol * R::of(k as f64 + 1.0);
        }

        let mut v = start_vector::<R>(n, k);
        let mut converged = false;
        for _ in 0..10 {
            solve_shifted(diag, off, shift, &mut v);
            for prev in &vectors {
                let proj = dot(&v, prev);
                for (vi, pi) in v.iter_mut().zip(prev) {
                    *vi = *vi - proj * *pi;
                }
            }
            let norm = norm2(&v);
            if norm == R::zero() || !norm.is_finite() {
                v = start_vector::<R>(n, k + 7919);
                continue;
            }
            for vi in v.iter_mut() {
                *vi = *vi / norm;
            }
            if residual(diag, off, values[k], &v) <= residual_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            let res = residual(diag, off, values[k], &v);
            return Err(Error::Convergence {
                context: format!("inverse iteration for eigenvalue {k}"),
                achieved: res.as_f64(),
                requested: residual_tol.as_f64(),
            });
        }
        vectors.push(v);
    }

    // final modified Gram-Schmidt pass for strict orthonormality
    for k in 0..vectors.len() {
        for j in 0..k {
            let proj = dot(&vectors[k], &vectors[j]);
            let (head, tail) = vectors.split_at_mut(k);
            for (vi, pi) in tail[0].iter_mut().zip(&head[j]) {
                *vi = *vi - proj * *pi;
            }
        }
        let norm = norm2(&vectors[k]);
        for vi in vectors[k].iter_mut() {
            *vi = *vi / norm;
        }
    }

    Ok(EigenPairs { values, vectors })
}

fn residual<R: Real>(diag: &[R], off: &[R], lambda: R, v: &[R]) -> R {
    let n = diag.len();
    let mut worst = R::zero();
    for i in 0..n {
        let mut r = (diag[i] - lambda) * v[i];
        if i > 0 {
            r = r + off[i - 1] * v[i - 1];
        }
        if i < n - 1 {
            r = r + off[i] * v[i + 1];
        }
        worst = worst.max(r.abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_exact() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3
        let pairs = lowest_eigenpairs(&[2.0f64, 2.0], &[1.0], 2).unwrap();
        assert!((pairs.values[0] - 1.0).abs() < 1e-14);
        assert!((pairs.values[1] - 3.0).abs() < 1e-14);
        let v = &pairs.vectors[0];
        assert!((v[0] + v[1]).abs() < 1e-12, "ground vector (1,-1)/sqrt2");
    }

    #[test]
    fn diagonal_with_exact_degeneracy() {
        // eigenvalues {0, 4, 4, 16, 16} with zero coupling
        let diag = [16.0f64, 4.0, 0.0, 4.0, 16.0];
        let off = [0.0f64; 4];
        let pairs = lowest_eigenpairs(&diag, &off, 5).unwrap();
        let want = [0.0, 4.0, 4.0, 16.0, 16.0];
        for (got, want) in pairs.values.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
        // degenerate vectors must still be orthonormal
        for i in 0..5 {
            for j in 0..=i {
                let d = dot(&pairs.vectors[i], &pairs.vectors[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-12, "({i},{j}) -> {d}");
            }
        }
    }

    #[test]
    fn laplacian_has_known_spectrum() {
        // -u'' on a path graph: eigenvalues 2 - 2 cos(k pi / (n+1))
        let n = 40;
        let diag = vec![2.0f64; n];
        let off = vec![-1.0f64; n - 1];
        let pairs = lowest_eigenpairs(&diag, &off, 6).unwrap();
        for (k, &v) in pairs.values.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((v - want).abs() < 1e-12, "k={k}: {v} vs {want}");
        }
        for (k, vec) in pairs.vectors.iter().enumerate() {
            let res = residual(&diag, &off, pairs.values[k], vec);
            assert!(res < 1e-12, "residual {res}");
        }
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(lowest_eigenpairs::<f64>(&[1.0], &[], 2).is_err());
        assert!(lowest_eigenpairs::<f64>(&[], &[], 1).is_err());
        assert!(lowest_eigenpairs(&[1.0f64, 2.0], &[0.5], 0).is_err());
    }
}
