//! Spectral functionals for PSD testing: distance to the PSD cone, singular
//! value tails, Schatten and Ky-Fan norms, cheap PSD-impossibility witnesses,
//! row/column contributions, and the sampling estimators used by the testers.

use core_matrix::rng::trial_rng;
use core_matrix::{Mat, MatrixError, QueryOracle, SymmetricMatrix};
use eig_solver::{default_psd_tol, eigh, eigh_mat, singular_values, EigError};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error(transparent)]
    Eig(#[from] EigError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("rank cutoff must be positive")]
    ZeroCutoff,
    #[error("sample size must be in 1..=n")]
    BadSampleSize,
}

/// One-stop spectrum report for a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    /// Squared Frobenius distance to the PSD cone.
    pub negative_mass: f64,
    /// Spectral-norm distance to the PSD cone: max(0, -lambda_min).
    pub spectral_psd_distance: f64,
    pub trace: f64,
    pub frobenius_sq: f64,
}

pub fn spectral_summary(m: &SymmetricMatrix) -> Result<SpectralSummary, MetricError> {
    let eigenvalues = eig_solver::eigenvalues_sym(m)?;
    let negative_mass = eigenvalues
        .iter()
        .filter(|&&l| l < 0.0)
        .map(|l| l * l)
        .sum();
    let spectral_psd_distance = (-eigenvalues[0]).max(0.0);
    Ok(SpectralSummary {
        negative_mass,
        spectral_psd_distance,
        trace: m.trace(),
        frobenius_sq: m.frobenius_sq(),
        eigenvalues,
    })
}

/// Squared Frobenius distance to the PSD cone: sum of squared negative
/// eigenvalues.
pub fn psd_distance_frobenius_sq(m: &SymmetricMatrix) -> Result<f64, MetricError> {
    Ok(eig_solver::eigenvalues_sym(m)?
        .iter()
        .filter(|&&l| l < 0.0)
        .map(|l| l * l)
        .sum())
}

/// Nearest PSD matrix in Frobenius norm: eigen-truncation to the nonnegative
/// part of the spectrum.
pub fn project_psd(m: &SymmetricMatrix) -> Result<SymmetricMatrix, MetricError> {
    let dec = eigh(m)?;
    let n = m.n();
    let mut dense = vec![0.0; n * n];
    for (k, &l) in dec.eigenvalues.iter().enumerate() {
        if l <= 0.0 {
            continue;
        }
        let v = dec.eigenvector(k);
        for i in 0..n {
            for j in 0..=i {
                dense[i * n + j] += l * v[i] * v[j];
            }
        }
    }
    let mut bound = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            bound = bound.max(dense[i * n + j].abs());
        }
    }
    Ok(SymmetricMatrix::from_fn(n, bound, |i, j| dense[i * n + j])?)
}

/// Sum of squared singular values past rank t.
pub fn tail_mass(m: &Mat, t: usize) -> Result<f64, MetricError> {
    let sv = singular_values(m)?;
    if t > sv.len() {
        return Ok(0.0);
    }
    Ok(sv[t..].iter().map(|s| s * s).sum())
}

pub fn tail_mass_sym(m: &SymmetricMatrix, t: usize) -> Result<f64, MetricError> {
    tail_mass(&m.to_mat(), t)
}

/// Schatten-p norm (sum of p-th powers of singular values, p-th root).
pub fn schatten(m: &Mat, p: f64) -> Result<f64, MetricError> {
    assert!(p > 0.0, "p must be positive");
    let sv = singular_values(m)?;
    Ok(sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Ky-Fan (s, p) norm over the s largest singular values.
pub fn kyfan(m: &Mat, s: usize, p: f64) -> Result<f64, MetricError> {
    assert!(p > 0.0, "p must be positive");
    let sv = singular_values(m)?;
    let s = s.min(sv.len());
    Ok(sv[..s].iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Witness that a symmetric matrix fails the PSD top-heavy inequality
/// tail(t) <= Tr^2 / t.
#[derive(Debug, Clone)]
pub struct TopHeavyWitness {
    pub t: usize,
    pub tail: f64,
    pub bound: f64,
}

/// PSD matrices are top-heavy: the tail past rank t is at most Tr^2/t.
/// Returns a witness when the inequality fails by more than tol.
pub fn topheavy_violation(
    m: &SymmetricMatrix,
    t: usize,
    tol: f64,
) -> Result<Option<TopHeavyWitness>, MetricError> {
    if t == 0 {
        return Err(MetricError::ZeroCutoff);
    }
    let tail = tail_mass_sym(m, t)?;
    let tr = m.trace();
    let bound = tr * tr / t as f64;
    if tail > bound + tol {
        Ok(Some(TopHeavyWitness { t, tail, bound }))
    } else {
        Ok(None)
    }
}

/// Witness that Schatten-1 exceeds the trace; impossible for a PSD matrix.
#[derive(Debug, Clone)]
pub struct SchattenTraceWitness {
    pub schatten1: f64,
    pub trace: f64,
}

pub fn schatten1_trace_violation(
    m: &SymmetricMatrix,
    tol: f64,
) -> Result<Option<SchattenTraceWitness>, MetricError> {
    let s1 = schatten(&m.to_mat(), 1.0)?;
    let tr = m.trace();
    if s1 > tr + tol {
        Ok(Some(SchattenTraceWitness {
            schatten1: s1,
            trace: tr,
        }))
    } else {
        Ok(None)
    }
}

/// z_i = R_i(y) + C_i(y) = 2 y_i (<m_i, y> - m_ii y_i): how much index i
/// contributes through its row and column, diagonal excluded.
pub fn row_col_contributions(m: &SymmetricMatrix, y: &[f64]) -> Vec<f64> {
    assert_eq!(y.len(), m.n(), "dimension mismatch");
    let n = m.n();
    (0..n)
        .map(|i| {
            let dot: f64 = (0..n).map(|j| m.get(i, j) * y[j]).sum();
            2.0 * y[i] * (dot - m.get(i, i) * y[i])
        })
        .collect()
}

/// Result of the Bernoulli row-sampling Frobenius estimator. The diagonal
/// enters the submatrix at rate k/n rather than (k/n)^2, so its rescaled
/// share is reported separately for callers applying the split bound.
#[derive(Debug, Clone)]
pub struct FrobeniusEstimate {
    /// (n^2/k^2) * ||A_{SxS}||_F^2, diagonal included.
    pub estimate: f64,
    /// (n^2/k^2) * sum of squared sampled diagonal entries.
    pub diagonal_part: f64,
    pub sample_size: usize,
}

/// Samples S by independent Bernoulli(k/n) inclusion and rescales the
/// submatrix Frobenius mass by (n/k)^2. Charges the oracle for A_{SxS}.
pub fn estimate_frobenius_sq(
    oracle: &mut QueryOracle,
    k: usize,
    seed: u64,
) -> Result<FrobeniusEstimate, MetricError> {
    let n = oracle.n();
    if k == 0 || k > n {
        return Err(MetricError::BadSampleSize);
    }
    let p = k as f64 / n as f64;
    let mut rng = trial_rng(seed, 0);
    let s: Vec<usize> = (0..n).filter(|_| rng.gen::<f64>() < p).collect();
    let scale = (n as f64 / k as f64).powi(2);
    let mut total = 0.0;
    let mut diag = 0.0;
    for (a, &i) in s.iter().enumerate() {
        for &j in &s[..=a] {
            let v = oracle.query_entry(i, j)?;
            if i == j {
                diag += v * v;
                total += v * v;
            } else {
                total += 2.0 * v * v;
            }
        }
    }
    Ok(FrobeniusEstimate {
        estimate: scale * total,
        diagonal_part: scale * diag,
        sample_size: s.len(),
    })
}

/// t uniformly chosen columns (with replacement), each scaled by sqrt(n/t),
/// so E[C C'] = A A'.
pub fn sample_columns_spectral(m: &Mat, t: usize, seed: u64) -> Mat {
    assert!(t >= 1, "need at least one column");
    let n = m.cols();
    let mut rng = trial_rng(seed, 0);
    let scale = (n as f64 / t as f64).sqrt();
    let picks: Vec<usize> = (0..t).map(|_| rng.gen_range(0..n)).collect();
    Mat::from_fn(m.rows(), t, |i, c| scale * m.get(i, picks[c]))
}

/// Number of sampled columns prescribed by the column-sampling lemma,
/// t = c' * sqrt(k/alpha) / eps^2 * log(2n/delta), with c' a calibrated
/// default.
pub const COLUMN_SAMPLE_CPRIME: f64 = 1.0;

pub fn column_sample_size(n: usize, k: usize, alpha: f64, eps: f64, delta: f64) -> usize {
    let t = COLUMN_SAMPLE_CPRIME * (k as f64 / alpha).sqrt() / (eps * eps)
        * (2.0 * n as f64 / delta).ln();
    (t.ceil() as usize).clamp(1, n)
}

/// Checks the two-sided Loewner sandwich
/// (1-eps) AA' - (eps/k)||A||_F^2 I <= CC' <= (1+eps) AA' + (eps/k)||A||_F^2 I
/// by eigendecomposing both differences.
pub fn check_spectral_sandwich(
    m: &Mat,
    c: &Mat,
    eps: f64,
    k: usize,
) -> Result<bool, MetricError> {
    assert!(k >= 1);
    let n = m.rows();
    let gram_a = m.gram();
    let gram_c = c.gram();
    let slack = eps / k as f64 * m.frobenius_sq();
    let tol = 1e-9 * n as f64 * (gram_a.frobenius_sq().sqrt()).max(1.0);
    // upper: (1+eps) AA' + slack I - CC' is PSD
    let mut upper = gram_a.scale(1.0 + eps).sub(&gram_c);
    for i in 0..n {
        upper.set(i, i, upper.get(i, i) + slack);
    }
    if eigh_mat(&upper)?.eigenvalues[0] < -tol {
        return Ok(false);
    }
    // lower: CC' - (1-eps) AA' + slack I is PSD
    let mut lower = gram_c.sub(&gram_a.scale(1.0 - eps));
    for i in 0..n {
        lower.set(i, i, lower.get(i, i) + slack);
    }
    Ok(eigh_mat(&lower)?.eigenvalues[0] >= -tol)
}

/// Default violation tolerance: 1e-9 * n * entry_bound.
pub fn default_tol(m: &SymmetricMatrix) -> f64 {
    default_psd_tol(m.n(), m.entry_bound())
}

#[cfg(test)]
mod tests;
