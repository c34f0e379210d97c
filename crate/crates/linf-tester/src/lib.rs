//! One-sided testers for the spectral-norm gap: either the input is PSD, or
//! some eigenvalue is below -eps*n. Both testers sample random principal
//! submatrices, flag the input only when a sampled submatrix is itself
//! non-PSD, and back every NotPsd verdict with a checkable certificate.

use core_matrix::rng::trial_rng;
use core_matrix::{IndexSet, MatrixError, QueryOracle, SymmetricMatrix};
use eig_solver::{default_psd_tol, eigh, eigenvalues_sym, EigError};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TesterError {
    #[error("eps must lie strictly between 0 and 1")]
    BadEps,
    #[error("delta must lie strictly between 0 and 1")]
    BadDelta,
    #[error("matrix dimension must be at least 2")]
    TooSmall,
    #[error(transparent)]
    Eig(#[from] EigError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Tunable constants. The defaults are calibrated for desk-scale detection;
/// every experiment records the values used.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LinfConstants {
    /// Submatrix size multiplier: k_alpha = c1 * (alpha/eps^2) * ln^a(1/eps).
    pub c1: f64,
    /// Repetition multiplier: r_alpha = c2 * (eps^2/alpha^2) * ln^b(1/eps) * ln(1/delta).
    pub c2: f64,
    pub a: f64,
    pub b: f64,
    /// Warm-up tester: submatrix size ceil(warmup_k / eps).
    pub warmup_k: f64,
    /// Warm-up tester: ceil(warmup_reps / eps) submatrices.
    pub warmup_reps: f64,
}

impl Default for LinfConstants {
    fn default() -> Self {
        Self {
            c1: 4.0,
            c2: 4.0,
            a: 1.0,
            b: 1.0,
            warmup_k: 10.0,
            warmup_reps: 16.0,
        }
    }
}

/// Proof that the tested matrix is not PSD: a principal submatrix index set
/// and a unit direction with negative quadratic form. Zero-padding the
/// witness to full length gives x' A x = quadratic_value.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub submatrix_indices: IndexSet,
    pub witness: Vec<f64>,
    pub quadratic_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Psd,
    NotPsd(Certificate),
}

impl Verdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, Verdict::Psd)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Psd => None,
            Verdict::NotPsd(c) => Some(c),
        }
    }
}

/// One sampling scale: r repetitions of Bernoulli(k/n) principal submatrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Scale {
    pub alpha: f64,
    pub k: usize,
    pub reps: usize,
}

/// Resolved sampling plan for a (n, eps, delta) triple.
#[derive(Debug, Clone, PartialEq)]
pub struct TesterSchedule {
    pub eps: f64,
    pub delta: f64,
    pub scales: Vec<Scale>,
    /// Hard ceiling on metered queries for one run.
    pub total_query_budget: usize,
}

impl TesterSchedule {
    /// sum over scales of r * k(k+1)/2.
    pub fn planned_cost(&self) -> usize {
        self.scales
            .iter()
            .map(|s| s.reps * s.k * (s.k + 1) / 2)
            .sum()
    }
}

/// Builds the multi-scale plan: one scale per power of two alpha in
/// (eps^2, eps/2], plus the top scale at alpha = eps, ordered from the
/// smallest submatrix size upward. When 1/eps^2 already pays for the whole
/// matrix the plan degenerates to a single full read.
pub fn build_schedule(
    n: usize,
    eps: f64,
    delta: f64,
    constants: &LinfConstants,
) -> Result<TesterSchedule, TesterError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(TesterError::BadEps);
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(TesterError::BadDelta);
    }
    if n < 2 {
        return Err(TesterError::TooSmall);
    }
    let full_cost = n * (n + 1) / 2;
    if 1.0 / (eps * eps) >= full_cost as f64 {
        return Ok(TesterSchedule {
            eps,
            delta,
            scales: vec![Scale {
                alpha: eps,
                k: n,
                reps: 1,
            }],
            total_query_budget: full_cost,
        });
    }
    let log_eps = (1.0 / eps).ln();
    let log_delta = (1.0 / delta).ln();
    let mut alphas = vec![eps];
    // powers of two strictly inside (eps^2, eps)
    let mut a = 2.0f64.powi((eps).log2().floor() as i32);
    if (a - eps).abs() < f64::EPSILON * eps {
        a /= 2.0;
    }
    while a > eps * eps {
        alphas.push(a);
        a /= 2.0;
    }
    let mut scales = Vec::with_capacity(alphas.len());
    for alpha in alphas {
        let k = (constants.c1 * (alpha / (eps * eps)) * log_eps.powf(constants.a)).ceil() as usize;
        let k = k.clamp(1, n);
        let reps = (constants.c2 * (eps * eps) / (alpha * alpha)
            * log_eps.powf(constants.b)
            * log_delta)
            .ceil() as usize;
        scales.push(Scale {
            alpha,
            k,
            reps: reps.max(1),
        });
    }
    // cheapest submatrices run first, so far inputs that any scale can
    // catch exit after a few small draws instead of paying for a big one
    scales.sort_by(|x, y| x.alpha.partial_cmp(&y.alpha).expect("finite alphas"));
    let planned: usize = scales.iter().map(|s| s.reps * s.k * (s.k + 1) / 2).sum();
    Ok(TesterSchedule {
        eps,
        delta,
        scales,
        total_query_budget: planned.min(full_cost),
    })
}

/// Index inclusion for one repetition. The uniform draw per index depends
/// only on (seed, scale, rep), never on the threshold, so runs at a smaller
/// eps see supersets of the runs at a larger eps (monotone coupling).
pub fn sample_indices(seed: u64, scale_idx: usize, rep: usize, n: usize, p: f64) -> Vec<usize> {
    let stream = ((scale_idx as u64) << 32) | rep as u64;
    let mut rng = trial_rng(seed, stream);
    (0..n).filter(|_| rng.gen::<f64>() < p).collect()
}

/// Extracts A_{TxT}, eigendecomposes it, and emits a certificate when the
/// bottom of the spectrum is decisively negative (below -10 * tol, so the
/// certificate survives independent verification).
fn check_submatrix(
    oracle: &mut QueryOracle,
    indices: Vec<usize>,
) -> Result<Option<Certificate>, TesterError> {
    let set = IndexSet::new(indices)?;
    let sub = oracle.principal_submatrix(&set)?;
    let tol = default_psd_tol(sub.n(), sub.entry_bound());
    // cheap eigenvalue-only screen first; the rotation-based solver that
    // also yields the witness vector only runs on flagged submatrices
    let evs = eigenvalues_sym(&sub)?;
    if evs[0] >= -10.0 * tol {
        return Ok(None);
    }
    let dec = eigh(&sub)?;
    if dec.eigenvalues[0] >= -10.0 * tol {
        return Ok(None);
    }
    let witness = dec.eigenvector(0);
    let q = sub.quadratic_form(&witness);
    if q >= -10.0 * tol {
        return Ok(None);
    }
    Ok(Some(Certificate {
        submatrix_indices: set,
        witness,
        quadratic_value: q,
    }))
}

/// The O(1/eps^3) warm-up tester: fixed-size Bernoulli submatrices, many
/// repetitions, no multi-scale structure.
pub fn warmup_linf_test(
    oracle: &mut QueryOracle,
    eps: f64,
    seed: u64,
) -> Result<Verdict, TesterError> {
    warmup_linf_test_with(oracle, eps, seed, &LinfConstants::default())
}

pub fn warmup_linf_test_with(
    oracle: &mut QueryOracle,
    eps: f64,
    seed: u64,
    constants: &LinfConstants,
) -> Result<Verdict, TesterError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(TesterError::BadEps);
    }
    let n = oracle.n();
    let k = ((constants.warmup_k / eps).ceil() as usize).clamp(1, n);
    let d = (constants.warmup_reps / eps).ceil() as usize;
    let p = k as f64 / n as f64;
    for rep in 0..d {
        let idx = sample_indices(seed, 0, rep, n, p);
        if idx.is_empty() {
            continue;
        }
        if let Some(cert) = check_submatrix(oracle, idx)? {
            return Ok(Verdict::NotPsd(cert));
        }
    }
    Ok(Verdict::Psd)
}

/// The multi-scale main tester. Walks the schedule, drawing r_alpha
/// independent Bernoulli(k_alpha/n) index sets per scale; the first
/// decisively negative submatrix ends the run with a certificate.
/// Repetitions whose worst-case cost would overrun the budget are skipped
/// (consumed), keeping the metered count under the ceiling on every run.
pub fn linf_test(
    oracle: &mut QueryOracle,
    eps: f64,
    delta: f64,
    seed: u64,
) -> Result<Verdict, TesterError> {
    linf_test_with(oracle, eps, delta, seed, &LinfConstants::default())
}

pub fn linf_test_with(
    oracle: &mut QueryOracle,
    eps: f64,
    delta: f64,
    seed: u64,
    constants: &LinfConstants,
) -> Result<Verdict, TesterError> {
    let schedule = build_schedule(oracle.n(), eps, delta, constants)?;
    linf_test_scheduled(oracle, &schedule, seed)
}

pub fn linf_test_scheduled(
    oracle: &mut QueryOracle,
    schedule: &TesterSchedule,
    seed: u64,
) -> Result<Verdict, TesterError> {
    let n = oracle.n();
    for (si, scale) in schedule.scales.iter().enumerate() {
        let p = scale.k as f64 / n as f64;
        for rep in 0..scale.reps {
            let idx = if scale.k >= n {
                (0..n).collect()
            } else {
                sample_indices(seed, si, rep, n, p)
            };
            if idx.is_empty() {
                continue;
            }
            let cost = idx.len() * (idx.len() + 1) / 2;
            if oracle.query_count() + cost > schedule.total_query_budget {
                continue;
            }
            if let Some(cert) = check_submatrix(oracle, idx)? {
                return Ok(Verdict::NotPsd(cert));
            }
        }
    }
    Ok(Verdict::Psd)
}

/// Recomputes the certificate's quadratic form against the full matrix.
/// Accepts iff the recomputed value is negative and no better than the
/// claimed value plus tolerance.
pub fn verify_certificate(full: &SymmetricMatrix, cert: &Certificate) -> bool {
    let idx = cert.submatrix_indices.indices();
    if idx.is_empty() || cert.witness.len() != idx.len() {
        return false;
    }
    if idx.iter().any(|&i| i >= full.n()) {
        return false;
    }
    let norm_sq: f64 = cert.witness.iter().map(|w| w * w).sum();
    if (norm_sq - 1.0).abs() > 1e-6 {
        return false;
    }
    let mut q = 0.0;
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            q += cert.witness[a] * cert.witness[b] * full.get(i, j);
        }
    }
    let tol = default_psd_tol(idx.len(), full.entry_bound());
    q < 0.0 && q <= cert.quadratic_value + tol
}

#[cfg(test)]
mod tests;
