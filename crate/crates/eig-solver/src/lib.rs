//! Ground-truth spectral oracle: cyclic Jacobi eigendecomposition for dense
//! symmetric matrices, with PSD checks and singular values derived from it.
//! Cubic cost, chosen for accuracy at desk scale (n up to a few thousand).

use core_matrix::{Mat, SymmetricMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EigError {
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("jacobi sweep limit reached without convergence")]
    NoConvergence,
}

/// Full spectrum, eigenvalues ascending, eigenvector columns aligned.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column k is the unit eigenvector for eigenvalues[k].
    pub eigenvectors: Mat,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        (0..self.eigenvectors.rows())
            .map(|i| self.eigenvectors.get(i, k))
            .collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }
}

pub const RESIDUAL_TOL: f64 = 1e-10;
pub const ORTHO_TOL: f64 = 1e-9;

/// Default PSD decision tolerance: 1e-9 * n * entry_bound.
pub fn default_psd_tol(n: usize, entry_bound: f64) -> f64 {
    1e-9 * n as f64 * entry_bound.max(1e-300)
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi on a dense symmetric copy. Rotations annihilate each
/// off-diagonal element in turn; off-diagonal mass shrinks quadratically
/// once small, so a few dozen sweeps always suffice at these sizes.
pub fn eigh(m: &SymmetricMatrix) -> Result<EigenDecomposition, EigError> {
    let n = m.n();
    let mut a: Vec<f64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            a.push(m.get(i, j));
        }
    }
    eigh_dense(n, a)
}

/// Same solver for a dense symmetric `Mat` (symmetry is trusted; the upper
/// triangle is read).
pub fn eigh_mat(m: &Mat) -> Result<EigenDecomposition, EigError> {
    assert_eq!(m.rows(), m.cols(), "eigh needs a square matrix");
    eigh_dense(m.rows(), m.data().to_vec())
}

fn eigh_dense(n: usize, mut a: Vec<f64>) -> Result<EigenDecomposition, EigError> {
    if a.iter().any(|v| !v.is_finite()) {
        return Err(EigError::NonFinite);
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n == 1 {
        return Ok(finish(n, &a, v));
    }

    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            return Ok(finish(n, &a, v));
        }
        // small rotations are skipped early on, NR-style thresholding
        let thresh = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = 100.0 * apq.abs();
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if sweep > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                if apq * apq <= thresh {
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e12 {
                    1.0 / (2.0 * theta)
                } else {
                    let s = theta.signum();
                    s / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rows/cols p and q of A
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                // exact zero for the annihilated pair kills drift
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(EigError::NoConvergence)
}

fn finish(n: usize, a: &[f64], v: Vec<f64>) -> EigenDecomposition {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let eigenvectors = Mat::from_fn(n, n, |r, k| v[r * n + order[k]]);
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Eigenvalues only, ascending, via Householder tridiagonalization and
/// implicit-shift QL. Much faster than [`eigh`] since no eigenvectors are
/// accumulated; used for brute-force spectrum measurements on large inputs.
pub fn eigenvalues_sym(m: &SymmetricMatrix) -> Result<Vec<f64>, EigError> {
    let n = m.n();
    let mut a: Vec<f64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            if !v.is_finite() {
                return Err(EigError::NonFinite);
            }
            a.push(v);
        }
    }
    let (mut d, mut e) = tridiagonalize(n, &mut a);
    ql_implicit(&mut d, &mut e)?;
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(d)
}

/// Householder reduction of a symmetric matrix to tridiagonal form
/// (EISPACK tred1 layout: d = diagonal, e = subdiagonal with e[0] = 0).
fn tridiagonalize(n: usize, a: &mut [f64]) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    // scratch copies of the pivot row and the running product A*v keep all
    // inner loops on contiguous rows (the classic column-strided pass is a
    // cache disaster at large n)
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i;
        let mut h = 0.0;
        let mut scale = 0.0;
        if l > 1 {
            for k in 0..l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l - 1];
            } else {
                for k in 0..l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let mut f = a[i * n + l - 1];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l - 1] = f - g;
                v[..l].copy_from_slice(&a[i * n..i * n + l]);
                // p = A v over the stored lower triangle, row-major only
                for x in p[..l].iter_mut() {
                    *x = 0.0;
                }
                for j in 0..l {
                    let row = &a[j * n..j * n + j + 1];
                    let vj = v[j];
                    let mut s = 0.0;
                    for ((pk, &rk), &vk) in p[..j].iter_mut().zip(&row[..j]).zip(&v[..j]) {
                        s += rk * vk;
                        *pk += rk * vj;
                    }
                    p[j] += s + row[j] * vj;
                }
                f = 0.0;
                for j in 0..l {
                    e[j] = p[j] / h;
                    f += e[j] * v[j];
                }
                let hh = f / (h + h);
                for j in 0..l {
                    let fj = v[j];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    let row = &mut a[j * n..j * n + j + 1];
                    for (k, rk) in row.iter_mut().enumerate() {
                        *rk -= fj * e[k] + gj * v[k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l - 1];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    (d, e)
}

/// Implicit-shift QL on a tridiagonal (d, e); e[0] unused. Eigenvalues land
/// in d, unsorted.
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<(), EigError> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    // absolute floor for the deflation test: a purely relative threshold
    // never fires next to zero diagonal entries (rank-deficient inputs)
    let scale = d
        .iter()
        .zip(e.iter())
        .map(|(a, b)| a.abs() + b.abs())
        .fold(0.0f64, f64::max);
    let floor = f64::EPSILON * scale;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd + floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(EigError::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sgn = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sgn);
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // deflate and rescan
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

pub fn min_eigenvalue(m: &SymmetricMatrix) -> Result<f64, EigError> {
    Ok(eigh(m)?.eigenvalues[0])
}

pub fn is_psd(m: &SymmetricMatrix, tol: f64) -> Result<bool, EigError> {
    Ok(min_eigenvalue(m)? >= -tol)
}

/// Singular values, descending, of any rectangular matrix; computed from the
/// smaller Gram factor with eigenvalues clamped at zero before square-rooting.
pub fn singular_values(m: &Mat) -> Result<Vec<f64>, EigError> {
    if m.data().iter().any(|v| !v.is_finite()) {
        return Err(EigError::NonFinite);
    }
    // symmetric inputs: |eigenvalues| avoids the precision loss of
    // square-rooting a Gram spectrum near zero
    if m.rows() == m.cols() && m.is_symmetric(0.0) {
        let dec = eigh_mat(m)?;
        let mut sv: Vec<f64> = dec.eigenvalues.iter().map(|l| l.abs()).collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        return Ok(sv);
    }
    let gram = if m.rows() <= m.cols() {
        m.gram()
    } else {
        m.transpose().gram()
    };
    let dec = eigh_mat(&gram)?;
    let mut sv: Vec<f64> = dec
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    sv.reverse();
    Ok(sv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_invariants(m: &SymmetricMatrix, dec: &EigenDecomposition) {
        let n = m.n();
        // residual
        for k in 0..n {
            let l = dec.eigenvalues[k];
            let vk = dec.eigenvector(k);
            let mut res = 0.0f64;
            for i in 0..n {
                let mut av = 0.0;
                for j in 0..n {
                    av += m.get(i, j) * vk[j];
                }
                res += (av - l * vk[i]).powi(2);
            }
            assert!(
                res.sqrt() <= RESIDUAL_TOL * n as f64 * l.abs().max(1.0),
                "residual {} too large for eigenvalue {}",
                res.sqrt(),
                l
            );
        }
        // orthonormality
        for p in 0..n {
            let vp = dec.eigenvector(p);
            for q in p..n {
                let vq = dec.eigenvector(q);
                let dot: f64 = vp.iter().zip(&vq).map(|(a, b)| a * b).sum();
                let target = if p == q { 1.0 } else { 0.0 };
                assert!((dot - target).abs() <= ORTHO_TOL);
            }
        }
    }

    #[test]
    fn identity_spectrum() {
        let m = SymmetricMatrix::identity(3);
        let dec = eigh(&m).unwrap();
        for l in &dec.eigenvalues {
            assert!((l - 1.0).abs() < 1e-12);
        }
        check_invariants(&m, &dec);
    }

    #[test]
    fn two_by_two_exchange() {
        let m = SymmetricMatrix::from_triangle(2, 1.0, vec![0.0, 1.0, 0.0]).unwrap();
        let dec = eigh(&m).unwrap();
        assert!((dec.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((dec.eigenvalues[1] - 1.0).abs() < 1e-12);
        check_invariants(&m, &dec);
    }

    fn cycle(n: usize) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(n, 1.0, |i, j| {
            let d = (i + n - j) % n;
            if d == 1 || d == n - 1 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap()
    }

    #[test]
    fn cycle_c5_min_eigenvalue() {
        // 2 cos(4 pi / 5)
        let m = cycle(5);
        let dec = eigh(&m).unwrap();
        let expect = 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos();
        assert!((dec.eigenvalues[0] - expect).abs() < 1e-10);
        check_invariants(&m, &dec);
    }

    #[test]
    fn cycle_c4_min_is_minus_two() {
        assert!((min_eigenvalue(&cycle(4)).unwrap() + 2.0).abs() < 1e-10);
    }

    #[test]
    fn diagonal_min() {
        let m = SymmetricMatrix::from_triangle(2, 3.0, vec![1.0, 0.0, -3.0]).unwrap();
        assert!((min_eigenvalue(&m).unwrap() + 3.0).abs() < 1e-12);
        assert!(!is_psd(&m, 0.0).unwrap());
        assert!(is_psd(&SymmetricMatrix::identity(4), 0.0).unwrap());
    }

    #[test]
    fn singular_values_cases() {
        let sv = singular_values(&Mat::identity(2)).unwrap();
        assert_eq!(sv.len(), 2);
        assert!((sv[0] - 1.0).abs() < 1e-12 && (sv[1] - 1.0).abs() < 1e-12);

        let ones = Mat::from_fn(3, 3, |_, _| 1.0);
        let sv = singular_values(&ones).unwrap();
        assert!((sv[0] - 3.0).abs() < 1e-9);
        assert!(sv[1].abs() < 1e-9 && sv[2].abs() < 1e-9);

        let x = Mat::from_vec(2, 2, vec![0.0, 1.0, 1.0, 0.0]);
        let sv = singular_values(&x).unwrap();
        assert!((sv[0] - 1.0).abs() < 1e-12 && (sv[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_and_frobenius_identities() {
        // pseudo-random symmetric matrix
        let n = 24;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let m = SymmetricMatrix::from_fn(n, 1.0, |_, _| next()).unwrap();
        let dec = eigh(&m).unwrap();
        let sum_l: f64 = dec.eigenvalues.iter().sum();
        assert!((sum_l - m.trace()).abs() <= 1e-9 * n as f64);
        let sum_l2: f64 = dec.eigenvalues.iter().map(|l| l * l).sum();
        assert!((sum_l2 - m.frobenius_sq()).abs() <= 1e-9 * m.frobenius_sq().max(1.0));
        // |eigenvalues| sorted match singular values
        let mut abs_l: Vec<f64> = dec.eigenvalues.iter().map(|l| l.abs()).collect();
        abs_l.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let sv = singular_values(&m.to_mat()).unwrap();
        for (a, s) in abs_l.iter().zip(&sv) {
            assert!((a - s).abs() <= 1e-8 * a.max(1.0));
        }
        check_invariants(&m, &dec);
    }

    #[test]
    fn eigenvalues_only_matches_jacobi() {
        let n = 40;
        let mut state = 0xdeadbeefu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let m = SymmetricMatrix::from_fn(n, 1.0, |_, _| next()).unwrap();
        let a = eigh(&m).unwrap().eigenvalues;
        let b = eigenvalues_sym(&m).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9, "{} vs {}", x, y);
        }
    }

    #[test]
    fn eigenvalues_only_cycle() {
        let m = cycle(7);
        let ev = eigenvalues_sym(&m).unwrap();
        let expect = 2.0 * (2.0 * std::f64::consts::PI * 3.0 / 7.0).cos();
        assert!((ev[0] - expect).abs() < 1e-10);
    }

    #[test]
    fn non_finite_rejected() {
        let m = Mat::from_vec(1, 1, vec![f64::NAN]);
        assert!(eigh_mat(&m).is_err());
    }
}
