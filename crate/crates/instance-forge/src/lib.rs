//! Seeded generators for the instance families used throughout the toolkit:
//! bounded-entry PSD matrices, matrices far from PSD in the spectral-norm or
//! Euclidean sense, cycle-based indistinguishable pairs, and the sampling
//! lower-bound distributions. Every labeled instance re-verifies its label at
//! construction and fails loudly if the check does not go through.

use core_matrix::rng::trial_rng;
use core_matrix::{Mat, MatrixError, SymmetricMatrix};
use eig_solver::{eigenvalues_sym, EigError};
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ForgeError {
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("label failed verification: {0}")]
    LabelRejected(String),
    #[error(transparent)]
    Eig(#[from] EigError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn bad(msg: impl Into<String>) -> ForgeError {
    ForgeError::BadParameter(msg.into())
}

/// Ground-truth tag. FarLinf(e) promises a unit direction with quadratic
/// form at most -e*n; FarL2(e) promises squared negative eigenvalue mass of
/// at least e*n^2.
#[derive(Debug, Clone, PartialEq)]
pub enum Label {
    Psd,
    FarLinf(f64),
    FarL2(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub generator: &'static str,
    pub params: String,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct LabeledInstance {
    pub matrix: SymmetricMatrix,
    pub label: Label,
    pub provenance: Provenance,
}

/// How a generator backs up its label. Full-spectrum checks are only viable
/// up to moderate sizes, so large instances carry a cheaper but still
/// eig-grade proof.
enum Evidence {
    /// Brute-force eigenvalues of the whole matrix.
    Spectrum,
    /// A unit vector whose quadratic form certifies FarLinf.
    Rayleigh(Vec<f64>),
    /// The matrix is a padded block-diagonal of `copies` permuted copies of
    /// `block`; the block's spectrum decides the label.
    BlockSpectrum { block: SymmetricMatrix, copies: usize },
    /// PSD because the matrix is a Gram matrix by construction.
    Gram,
}

/// Sizes up to this brute-force their spectrum at construction.
const SPECTRUM_CHECK_LIMIT: usize = 1024;

fn label_tol(m: &SymmetricMatrix) -> f64 {
    eig_solver::default_psd_tol(m.n(), m.entry_bound().max(1.0))
}

fn negative_mass(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| l * l).sum()
}

impl LabeledInstance {
    fn checked(
        matrix: SymmetricMatrix,
        label: Label,
        provenance: Provenance,
        evidence: Evidence,
    ) -> Result<Self, ForgeError> {
        let n = matrix.n() as f64;
        let tol = label_tol(&matrix);
        let ok = match (&label, &evidence) {
            (_, Evidence::Spectrum) => {
                let ev = eigenvalues_sym(&matrix)?;
                match &label {
                    Label::Psd => ev[0] >= -tol,
                    Label::FarLinf(e) => ev[0] <= -e * n + tol,
                    Label::FarL2(e) => negative_mass(&ev) >= e * n * n - tol * n,
                }
            }
            (Label::FarLinf(e), Evidence::Rayleigh(x)) => {
                let norm_sq: f64 = x.iter().map(|v| v * v).sum();
                matrix.quadratic_form(x) <= (-e * n + tol) * norm_sq
            }
            (label, Evidence::BlockSpectrum { block, copies }) => {
                let ev = eigenvalues_sym(block)?;
                match label {
                    Label::Psd => ev[0] >= -tol,
                    Label::FarLinf(e) => ev[0] <= -e * n + tol,
                    Label::FarL2(e) => {
                        *copies as f64 * negative_mass(&ev) >= e * n * n - tol * n
                    }
                }
            }
            (Label::Psd, Evidence::Gram) => true,
            _ => false,
        };
        if !ok {
            return Err(ForgeError::LabelRejected(format!(
                "{} ({})",
                provenance.generator, provenance.params
            )));
        }
        Ok(Self {
            matrix,
            label,
            provenance,
        })
    }
}

/// A = (1/d) G G' with G uniform in {-1,1}^{n x d}: entries in [-1,1],
/// unit diagonal, PSD by construction.
pub fn gen_random_psd(n: usize, d: usize, seed: u64) -> Result<LabeledInstance, ForgeError> {
    if n == 0 || d == 0 {
        return Err(bad("n and d must be positive"));
    }
    let mut rng = trial_rng(seed, 0);
    let g: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    let matrix = SymmetricMatrix::from_fn(n, 1.0, |i, j| {
        let dot: f64 = g[i].iter().zip(&g[j]).map(|(a, b)| a * b).sum();
        dot / d as f64
    })?;
    let evidence = if n <= SPECTRUM_CHECK_LIMIT {
        Evidence::Spectrum
    } else {
        Evidence::Gram
    };
    LabeledInstance::checked(
        matrix,
        Label::Psd,
        Provenance {
            generator: "random_psd",
            params: format!("n={} d={}", n, d),
            seed,
        },
        evidence,
    )
}

/// Identity diagonal plus a constant -eps/sqrt(alpha) bipartite strip
/// between a random index set S of size about alpha*n and its complement.
/// The spectrum is {1} except for 1 +- (eps/sqrt(alpha)) * sqrt(s(n-s)), so
/// the bottom eigenvalue is known in closed form.
pub fn gen_linf_concentrated(
    n: usize,
    eps: f64,
    alpha: f64,
    seed: u64,
) -> Result<LabeledInstance, ForgeError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(bad("eps must lie in (0,1)"));
    }
    if alpha < eps * eps - 1e-12 || alpha > eps + 1e-12 {
        return Err(bad("alpha must lie in [eps^2, eps]"));
    }
    let c = eps / alpha.sqrt();
    if c > 1.0 + 1e-12 {
        return Err(bad("eps/sqrt(alpha) exceeds the entry bound"));
    }
    let s = ((alpha * n as f64).round() as usize).max(1);
    if s >= n {
        return Err(bad("alpha*n must leave the complement nonempty"));
    }
    let mut rng = trial_rng(seed, 0);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut in_s = vec![false; n];
    for &i in &perm[..s] {
        in_s[i] = true;
    }
    let c = c.min(1.0);
    let matrix = SymmetricMatrix::from_fn(n, 1.0, |i, j| {
        if i == j {
            1.0
        } else if in_s[i] != in_s[j] {
            -c
        } else {
            0.0
        }
    })?;
    let lambda_min = 1.0 - c * ((s * (n - s)) as f64).sqrt();
    if lambda_min >= 0.0 {
        return Err(bad("instance is not negative at this size"));
    }
    let eps_true = -lambda_min / n as f64;
    // bottom eigenvector: constant on S and on its complement
    let a = 1.0 / (2.0 * s as f64).sqrt();
    let b = 1.0 / (2.0 * (n - s) as f64).sqrt();
    let witness: Vec<f64> = (0..n).map(|i| if in_s[i] { a } else { b }).collect();
    let evidence = if n <= SPECTRUM_CHECK_LIMIT {
        Evidence::Spectrum
    } else {
        Evidence::Rayleigh(witness)
    };
    LabeledInstance::checked(
        matrix,
        Label::FarLinf(eps_true),
        Provenance {
            generator: "linf_concentrated",
            params: format!("n={} eps={} alpha={}", n, eps, alpha),
            seed,
        },
        evidence,
    )
}

/// The spectral-norm query lower bound pair: the zero matrix against a
/// hidden all-(-1) band. The band covers the rows and columns of a random
/// t-subset with t about 2*eps^2*n, leaving n^2 - (n-t)^2 nonzero entries.
pub fn gen_linf_lb_pair(
    n: usize,
    eps: f64,
    seed: u64,
) -> Result<(LabeledInstance, LabeledInstance), ForgeError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(bad("eps must lie in (0,1)"));
    }
    let t_real = 2.0 * eps * eps * n as f64;
    if t_real < 1.0 {
        return Err(bad("2*eps^2*n is below one row"));
    }
    let t = (t_real.round() as usize).clamp(1, n.saturating_sub(1));
    let mut rng = trial_rng(seed, 0);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut marked = vec![false; n];
    for &i in &perm[..t] {
        marked[i] = true;
    }
    let no_matrix = SymmetricMatrix::from_fn(n, 1.0, |i, j| {
        if marked[i] || marked[j] {
            -1.0
        } else {
            0.0
        }
    })?;
    // only two nontrivial eigenvalues: those of [[0, -sqrt(t(n-t))],
    // [-sqrt(t(n-t)), -t]] on the span of the two indicator directions
    let off = (t as f64 * (n - t) as f64).sqrt();
    let lambda_min = (-(t as f64) - ((t * t) as f64 + 4.0 * off * off).sqrt()) / 2.0;
    let eps_true = -lambda_min / n as f64;
    // bottom eigenvector of the reduced 2x2, lifted back to block-constant form
    let (u, v) = (-off, lambda_min);
    let norm = (u * u + v * v).sqrt();
    let (u, v) = (u / norm, v / norm);
    let a = u / ((n - t) as f64).sqrt();
    let b = v / (t as f64).sqrt();
    let witness: Vec<f64> = (0..n).map(|i| if marked[i] { b } else { a }).collect();
    let evidence = if n <= SPECTRUM_CHECK_LIMIT {
        Evidence::Spectrum
    } else {
        Evidence::Rayleigh(witness)
    };
    let yes = LabeledInstance::checked(
        SymmetricMatrix::from_fn(n, 1.0, |_, _| 0.0)?,
        Label::Psd,
        Provenance {
            generator: "linf_lb_pair/yes",
            params: format!("n={} eps={}", n, eps),
            seed,
        },
        Evidence::Spectrum,
    )?;
    let no = LabeledInstance::checked(
        no_matrix,
        Label::FarLinf(eps_true),
        Provenance {
            generator: "linf_lb_pair/no",
            params: format!("n={} eps={} t={}", n, eps, t),
            seed,
        },
        evidence,
    )?;
    Ok((yes, no))
}

/// Random symmetric matrix with unit diagonal and independent uniform +-1
/// off-diagonal entries. Its negative eigenvalue mass is a constant fraction
/// of n^2; the label carries the measured fraction.
pub fn gen_wigner(n: usize, seed: u64) -> Result<LabeledInstance, ForgeError> {
    if n < 16 {
        return Err(bad("wigner generator requires n >= 16"));
    }
    let mut rng = trial_rng(seed, 0);
    let matrix = SymmetricMatrix::from_fn(n, 1.0, |i, j| {
        if i == j {
            1.0
        } else if rng.gen::<bool>() {
            1.0
        } else {
            -1.0
        }
    })?;
    let ev = eigenvalues_sym(&matrix)?;
    let mass = negative_mass(&ev);
    let eps_measured = mass / (n * n) as f64;
    if eps_measured <= 0.0 {
        return Err(ForgeError::LabelRejected("wigner without negative mass".into()));
    }
    // the measurement above is the verification: the label stores exactly
    // the measured fraction
    Ok(LabeledInstance {
        matrix,
        label: Label::FarL2(eps_measured),
        provenance: Provenance {
            generator: "wigner",
            params: format!("n={}", n),
            seed,
        },
    })
}

/// 0/1 adjacency matrix of the cycle on n vertices.
pub fn cycle_adjacency(n: usize) -> Result<SymmetricMatrix, ForgeError> {
    if n < 3 {
        return Err(bad("cycles need at least 3 vertices"));
    }
    Ok(SymmetricMatrix::from_fn(n, 1.0, |i, j| {
        let d = (i + n - j) % n;
        if d == 1 || d == n - 1 {
            1.0
        } else {
            0.0
        }
    })?)
}

/// Disjoint union of two cycles as one adjacency matrix.
pub fn cycles_adjacency(n1: usize, n2: usize) -> Result<SymmetricMatrix, ForgeError> {
    if n1 < 3 || n2 < 3 {
        return Err(bad("cycles need at least 3 vertices"));
    }
    let n = n1 + n2;
    Ok(SymmetricMatrix::from_fn(n, 1.0, |i, j| {
        let (i, j, len) = if i < n1 && j < n1 {
            (i, j, n1)
        } else if i >= n1 && j >= n1 {
            (i - n1, j - n1, n2)
        } else {
            return 0.0;
        };
        let d = (i + len - j) % len;
        if d == 1 || d == len - 1 {
            1.0
        } else {
            0.0
        }
    })?)
}

/// Standard Kronecker product; eigenvalues multiply for symmetric factors.
pub fn kron(a: &Mat, z: &Mat) -> Mat {
    let (ar, ac, zr, zc) = (a.rows(), a.cols(), z.rows(), z.cols());
    Mat::from_fn(ar * zr, ac * zc, |i, j| {
        a.get(i / zr, j / zc) * z.get(i % zr, j % zc)
    })
}

/// Shared scaffolding for the block-diagonal lower-bound families: place
/// `k` copies of a small block on a random equal partition of the first
/// k*block_n indices (independent within-block shuffles), zero-pad to n.
struct BlockLayout {
    /// position[b][u] = global row of local coordinate u of block b
    position: Vec<Vec<usize>>,
}

fn block_layout(n: usize, k: usize, block_n: usize, seed: u64) -> BlockLayout {
    let mut rng = trial_rng(seed, 1);
    let mut global: Vec<usize> = (0..n).collect();
    global.shuffle(&mut rng);
    let position = (0..k)
        .map(|b| {
            let mut slots: Vec<usize> = global[b * block_n..(b + 1) * block_n].to_vec();
            slots.shuffle(&mut rng);
            slots
        })
        .collect();
    BlockLayout { position }
}

fn assemble_blocks(
    n: usize,
    block: &SymmetricMatrix,
    layout: &BlockLayout,
    bound: f64,
) -> Result<SymmetricMatrix, ForgeError> {
    let bn = block.n();
    let mut tri = vec![0.0; n * (n + 1) / 2];
    let idx = |i: usize, j: usize| -> usize {
        let (a, b) = if i >= j { (i, j) } else { (j, i) };
        a * (a + 1) / 2 + b
    };
    for slots in &layout.position {
        for u in 0..bn {
            for v in 0..=u {
                tri[idx(slots[u], slots[v])] = block.get(u, v);
            }
        }
    }
    Ok(SymmetricMatrix::from_triangle(n, bound, tri)?)
}

/// Default cycle half-length for the Euclidean lower-bound pair.
pub fn default_d0(k: usize) -> usize {
    let lg = (k.max(1) as f64).log2().ceil() as usize;
    (4 * lg).max(4)
}

/// The main Euclidean-gap indistinguishable pair: k hidden blocks, each a
/// cycle-based matrix tensored with the all-ones m x m matrix. YES blocks
/// are PSD exactly; NO blocks swap the odd cycle for two shorter cycles,
/// pushing one eigenvalue per block to (lambda-2)/2 * m.
pub fn gen_l2_lb_pair(
    n: usize,
    k: usize,
    seed: u64,
) -> Result<(LabeledInstance, LabeledInstance), ForgeError> {
    gen_l2_lb_pair_with_d0(n, k, default_d0(k), seed)
}

pub fn gen_l2_lb_pair_with_d0(
    n: usize,
    k: usize,
    d0: usize,
    seed: u64,
) -> Result<(LabeledInstance, LabeledInstance), ForgeError> {
    if k == 0 {
        return Err(bad("k must be positive"));
    }
    if d0 < 3 {
        return Err(bad("d0 must be at least 3"));
    }
    let d = 2 * d0 + 1;
    let m = n / (d * k);
    if m == 0 {
        return Err(bad(format!("n={} too small for k={} blocks of width {}", n, k, d)));
    }
    let lambda = -2.0 * (2.0 * std::f64::consts::PI * d0 as f64 / d as f64).cos();
    let ones = Mat::from_fn(m, m, |_, _| 1.0);
    let yes_small = cycle_adjacency(d)?;
    let no_small = cycles_adjacency(d0, d0 + 1)?;
    let half_shift = |small: &SymmetricMatrix| -> Result<SymmetricMatrix, ForgeError> {
        Ok(SymmetricMatrix::from_fn(small.n(), 1.0, |i, j| {
            0.5 * (small.get(i, j) + if i == j { lambda } else { 0.0 })
        })?)
    };
    let yes_core = half_shift(&yes_small)?;
    let no_core = half_shift(&no_small)?;
    let lift = |core: &SymmetricMatrix| -> Result<SymmetricMatrix, ForgeError> {
        let big = kron(&core.to_mat(), &ones);
        Ok(SymmetricMatrix::from_fn(d * m, 1.0, |i, j| big.get(i, j))?)
    };
    let yes_block = lift(&yes_core)?;
    let no_block = lift(&no_core)?;
    let layout = block_layout(n, k, d * m, seed);
    let yes_matrix = assemble_blocks(n, &yes_block, &layout, 1.0)?;
    let no_matrix = assemble_blocks(n, &no_block, &layout, 1.0)?;
    // the NO block's negative mass, repeated over all k blocks
    let no_ev = eigenvalues_sym(&no_block)?;
    let mass = k as f64 * negative_mass(&no_ev);
    let eps_true = mass / (n * n) as f64;
    let params = format!("n={} k={} d0={} m={}", n, k, d0, m);
    let yes = LabeledInstance::checked(
        yes_matrix,
        Label::Psd,
        Provenance {
            generator: "l2_lb_pair/yes",
            params: params.clone(),
            seed,
        },
        Evidence::BlockSpectrum {
            block: yes_block,
            copies: k,
        },
    )?;
    let no = LabeledInstance::checked(
        no_matrix,
        Label::FarL2(eps_true),
        Provenance {
            generator: "l2_lb_pair/no",
            params,
            seed,
        },
        Evidence::BlockSpectrum {
            block: no_block,
            copies: k,
        },
    )?;
    Ok((yes, no))
}

/// Per-eigenvalue depth of the NO block before tensoring: (lambda - 2)/2.
pub fn l2_no_block_min_eigenvalue(d0: usize) -> f64 {
    let d = 2 * d0 + 1;
    let lambda = -2.0 * (2.0 * std::f64::consts::PI * d0 as f64 / d as f64).cos();
    (lambda - 2.0) / 2.0
}

/// A pair of matrices separated only by a scalar statistic, with the
/// statistic measured by brute force at construction.
#[derive(Debug, Clone)]
pub struct StatPair {
    pub high: SymmetricMatrix,
    pub low: SymmetricMatrix,
    pub statistic: &'static str,
    pub high_value: f64,
    pub low_value: f64,
    pub provenance: Provenance,
}

fn schatten1_brute(m: &SymmetricMatrix) -> Result<f64, ForgeError> {
    Ok(eigenvalues_sym(m)?.iter().map(|l| l.abs()).sum())
}

fn kyfan_brute(m: &SymmetricMatrix, s: usize) -> Result<f64, ForgeError> {
    let mut sv: Vec<f64> = eigenvalues_sym(m)?.iter().map(|l| l.abs()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv[..s.min(sv.len())].iter().sum())
}

/// Schatten-1 testing pair: k hidden blocks of one long cycle versus two
/// half-length cycles, both tensored with a fixed random sign matrix Z.
/// The long-cycle side has the larger Schatten-1 norm.
pub fn gen_schatten_lb_pair(n: usize, k: usize, seed: u64) -> Result<StatPair, ForgeError> {
    if k < 2 {
        return Err(bad("k must be at least 2"));
    }
    let d = 4 * k;
    let block_small = 2 * d;
    let m = n / (block_small * k);
    if m == 0 {
        return Err(bad(format!(
            "n={} too small for k={} blocks of width {}",
            n,
            k,
            block_small
        )));
    }
    let mut rng = trial_rng(seed, 2);
    let z = Mat::from_fn(m, m, |i, j| {
        if i > j {
            0.0
        } else if rng.gen::<bool>() {
            1.0
        } else {
            -1.0
        }
    });
    let z = Mat::from_fn(m, m, |i, j| if i <= j { z.get(i, j) } else { z.get(j, i) });
    let lift = |small: &SymmetricMatrix| -> Result<SymmetricMatrix, ForgeError> {
        let big = kron(&small.to_mat(), &z);
        Ok(SymmetricMatrix::from_fn(block_small * m, 1.0, |i, j| {
            big.get(i, j)
        })?)
    };
    let high_block = lift(&cycle_adjacency(2 * d)?)?;
    let low_block = lift(&cycles_adjacency(d, d)?)?;
    let layout = block_layout(n, k, block_small * m, seed);
    let high = assemble_blocks(n, &high_block, &layout, 1.0)?;
    let low = assemble_blocks(n, &low_block, &layout, 1.0)?;
    let high_value = schatten1_brute(&high)?;
    let low_value = schatten1_brute(&low)?;
    Ok(StatPair {
        high,
        low,
        statistic: "schatten1",
        high_value,
        low_value,
        provenance: Provenance {
            generator: "schatten_lb_pair",
            params: format!("n={} k={} d={} m={}", n, k, d, m),
            seed,
        },
    })
}

/// Ky-Fan testing pair: quartered shifted cycle blocks tensored with the
/// all-ones matrix. The two-cycle side attains singular value m exactly in
/// every block, so its Ky-Fan s value is exactly s*m.
pub fn gen_kyfan_lb_pair(n: usize, s: usize, seed: u64) -> Result<StatPair, ForgeError> {
    if s == 0 {
        return Err(bad("s must be positive"));
    }
    let d0 = ((s.max(2) as f64).log2().ceil() as usize).max(3);
    let d = 2 * d0 + 1;
    let k = s;
    let m = n / (d * k);
    if m == 0 {
        return Err(bad(format!("n={} too small for s={} blocks of width {}", n, s, d)));
    }
    let ones = Mat::from_fn(m, m, |_, _| 1.0);
    let quarter_shift = |small: &SymmetricMatrix| -> Result<SymmetricMatrix, ForgeError> {
        Ok(SymmetricMatrix::from_fn(small.n(), 1.0, |i, j| {
            0.25 * (small.get(i, j) - if i == j { 2.0 } else { 0.0 })
        })?)
    };
    let lift = |core: &SymmetricMatrix| -> Result<SymmetricMatrix, ForgeError> {
        let big = kron(&core.to_mat(), &ones);
        Ok(SymmetricMatrix::from_fn(d * m, 1.0, |i, j| big.get(i, j))?)
    };
    let high_block = lift(&quarter_shift(&cycles_adjacency(d0, d0 + 1)?)?)?;
    let low_block = lift(&quarter_shift(&cycle_adjacency(d)?)?)?;
    let layout = block_layout(n, k, d * m, seed);
    let high = assemble_blocks(n, &high_block, &layout, 1.0)?;
    let low = assemble_blocks(n, &low_block, &layout, 1.0)?;
    let high_value = kyfan_brute(&high, s)?;
    let low_value = kyfan_brute(&low, s)?;
    Ok(StatPair {
        high,
        low,
        statistic: "kyfan_s",
        high_value,
        low_value,
        provenance: Provenance {
            generator: "kyfan_lb_pair",
            params: format!("n={} s={} d0={} m={}", n, s, d0, m),
            seed,
        },
    })
}

/// The submatrix-sampling lower bound for squared singular value sums:
/// rank-one row patterns where only the one-row rate separates the sides.
#[derive(Debug, Clone)]
pub struct RowOnesPair {
    pub high: Mat,
    pub low: Mat,
    pub high_one_rows: usize,
    pub low_one_rows: usize,
    /// Frobenius mass equals (number of one rows) * n for each side.
    pub high_frobenius_sq: f64,
    pub low_frobenius_sq: f64,
    pub provenance: Provenance,
}

pub fn gen_rowones_pair(n: usize, eps: f64, seed: u64) -> Result<RowOnesPair, ForgeError> {
    if !(eps > 0.0 && eps <= 0.25) {
        return Err(bad("eps must lie in (0, 1/4]"));
    }
    if n == 0 {
        return Err(bad("n must be positive"));
    }
    let draw = |p: f64, stream: u64| -> (Mat, usize) {
        let mut rng = trial_rng(seed, stream);
        let rows: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < p).collect();
        let count = rows.iter().filter(|&&b| b).count();
        let transpose: bool = rng.gen();
        let m = Mat::from_fn(n, n, |i, j| {
            let r = if transpose { j } else { i };
            if rows[r] {
                1.0
            } else {
                0.0
            }
        });
        (m, count)
    };
    let (high, high_one_rows) = draw(0.5 + 2.0 * eps, 3);
    let (low, low_one_rows) = draw(0.5 - 2.0 * eps, 4);
    Ok(RowOnesPair {
        high_frobenius_sq: (high_one_rows * n) as f64,
        low_frobenius_sq: (low_one_rows * n) as f64,
        high,
        low,
        high_one_rows,
        low_one_rows,
        provenance: Provenance {
            generator: "rowones_pair",
            params: format!("n={} eps={}", n, eps),
            seed,
        },
    })
}

#[cfg(test)]
mod tests;
