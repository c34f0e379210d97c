//! One-sided tester for the Euclidean gap: either the input is PSD, or its
//! squared negative eigenvalue mass is at least eps*n^2. The tester first
//! runs the spectral-norm tester at a derived parameter, then eig-checks one
//! large random principal submatrix. PSD inputs are never flagged.

use core_matrix::rng::trial_rng;
use core_matrix::{IndexSet, MatrixError, QueryOracle, SymmetricMatrix};
use eig_solver::{default_psd_tol, eigh, eigenvalues_sym, EigError};
use linf_tester::{linf_test_with, Certificate, LinfConstants, TesterError, Verdict};
use rand::Rng;
use serde::{Deserialize, Serialize};
use spectral_metrics::{
    schatten1_trace_violation, topheavy_violation, MetricError, SchattenTraceWitness,
    TopHeavyWitness,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum L2Error {
    #[error("eps must lie strictly between 0 and 1")]
    BadEps,
    #[error("rank cutoff must be positive")]
    ZeroCutoff,
    #[error(transparent)]
    Linf(#[from] TesterError),
    #[error(transparent)]
    Eig(#[from] EigError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Tunable constants for the two-stage tester.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct L2Constants {
    /// Stage 1 runs the spectral-norm tester at eps0 = 2/k, k = ceil(ck/eps).
    pub ck: f64,
    /// Stage 2 inclusion size t = ceil(ct * ln(1/eps) / eps^2).
    pub ct: f64,
    /// Constants handed to the stage-1 tester.
    pub linf: LinfConstants,
}

impl Default for L2Constants {
    fn default() -> Self {
        Self {
            ck: 8.0,
            ct: 4.0,
            linf: LinfConstants::default(),
        }
    }
}

/// Derived per-run parameters, exposed for query accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Plan {
    pub k: usize,
    pub eps0: f64,
    pub t: usize,
}

pub fn plan(eps: f64, constants: &L2Constants) -> Result<L2Plan, L2Error> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(L2Error::BadEps);
    }
    let k = (constants.ck / eps).ceil() as usize;
    let eps0 = (2.0 / k as f64).min(1.0 - f64::EPSILON);
    let t = (constants.ct * (1.0 / eps).ln() / (eps * eps)).ceil() as usize;
    Ok(L2Plan {
        k,
        eps0,
        t: t.max(1),
    })
}

pub fn l2_test(
    oracle: &mut QueryOracle,
    eps: f64,
    delta: f64,
    seed: u64,
) -> Result<Verdict, L2Error> {
    l2_test_with(oracle, eps, delta, seed, &L2Constants::default())
}

/// Stage 1: spectral-norm tester at eps0 = 2/k. Stage 2: draw S and T by
/// independent Bernoulli(t/n) inclusion, eig-check the principal submatrix
/// on S union T, and certify when its bottom eigenvalue is decisively
/// negative.
pub fn l2_test_with(
    oracle: &mut QueryOracle,
    eps: f64,
    delta: f64,
    seed: u64,
    constants: &L2Constants,
) -> Result<Verdict, L2Error> {
    let p = plan(eps, constants)?;
    let verdict = linf_test_with(oracle, p.eps0, delta, seed, &constants.linf)?;
    if !verdict.is_psd() {
        return Ok(verdict);
    }
    let n = oracle.n();
    let incl = (p.t as f64 / n as f64).min(1.0);
    let mut merged = bernoulli_draw(seed, 0, n, incl);
    merged.extend(bernoulli_draw(seed, 1, n, incl));
    merged.sort_unstable();
    merged.dedup();
    if merged.is_empty() {
        return Ok(Verdict::Psd);
    }
    let union = IndexSet::new(merged)?;
    let sub = oracle.principal_submatrix(&union)?;
    let tol = default_psd_tol(sub.n(), sub.entry_bound());
    // eigenvalue-only screen before the slower witness-producing solve
    if eigenvalues_sym(&sub)?[0] >= -10.0 * tol {
        return Ok(Verdict::Psd);
    }
    let dec = eigh(&sub)?;
    if dec.eigenvalues[0] >= -10.0 * tol {
        return Ok(Verdict::Psd);
    }
    let witness = dec.eigenvector(0);
    let q = sub.quadratic_form(&witness);
    if q >= -10.0 * tol {
        return Ok(Verdict::Psd);
    }
    Ok(Verdict::NotPsd(Certificate {
        submatrix_indices: union,
        witness,
        quadratic_value: q,
    }))
}

/// Bernoulli(p) inclusion over 0..n; the stage-2 draws live on dedicated
/// high streams so they never collide with stage-1 sampling.
fn bernoulli_draw(seed: u64, which: u64, n: usize, p: f64) -> Vec<usize> {
    let mut rng = trial_rng(seed, (1 << 48) | which);
    (0..n).filter(|_| rng.gen::<f64>() < p).collect()
}

/// Advisory witnesses logged next to the eigen verdict: both inequalities
/// hold for every PSD matrix, so either witness on a sampled submatrix
/// already implies the input is not PSD.
#[derive(Debug, Clone)]
pub struct L2Diagnostics {
    pub tail_excess: Option<TopHeavyWitness>,
    pub schatten_excess: Option<SchattenTraceWitness>,
}

pub fn l2_diagnostics(submatrix: &SymmetricMatrix, k: usize) -> Result<L2Diagnostics, L2Error> {
    if k == 0 {
        return Err(L2Error::ZeroCutoff);
    }
    let tol = spectral_metrics::default_tol(submatrix);
    Ok(L2Diagnostics {
        tail_excess: topheavy_violation(submatrix, k, tol)?,
        schatten_excess: schatten1_trace_violation(submatrix, tol)?,
    })
}
