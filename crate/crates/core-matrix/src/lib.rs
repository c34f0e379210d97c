//! Dense symmetric matrices with a declared entry bound, metered entry access
//! through [`QueryOracle`], and a bit-exact on-disk format.

mod error;
pub mod exec;
mod io;
mod mat;
pub mod rng;

pub use error::MatrixError;
pub use io::{read_matrix, read_matrix_from, write_matrix, write_matrix_to, Format};
pub use mat::Mat;

use std::collections::HashSet;

/// Dense real symmetric matrix. Only the lower triangle (i >= j) is stored;
/// reads of (i, j) and (j, i) return the identical stored value.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    /// Row-major lower triangle: row i holds entries (i, 0..=i).
    tri: Vec<f64>,
    entry_bound: f64,
}

#[inline]
fn tri_index(i: usize, j: usize) -> usize {
    debug_assert!(j <= i);
    i * (i + 1) / 2 + j
}

impl SymmetricMatrix {
    /// Builds from a row-major lower triangle of length n(n+1)/2.
    /// Every entry must satisfy |e| <= entry_bound exactly; no tolerance.
    pub fn from_triangle(n: usize, entry_bound: f64, tri: Vec<f64>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::ZeroDimension);
        }
        if !(entry_bound >= 0.0) {
            return Err(MatrixError::InvalidBound(entry_bound));
        }
        if tri.len() != n * (n + 1) / 2 {
            return Err(MatrixError::TriangleLength {
                expected: n * (n + 1) / 2,
                got: tri.len(),
            });
        }
        for &e in &tri {
            if !e.is_finite() {
                return Err(MatrixError::NonFinite);
            }
            if e.abs() > entry_bound {
                return Err(MatrixError::BoundViolation {
                    entry: e,
                    bound: entry_bound,
                });
            }
        }
        Ok(Self { n, tri, entry_bound })
    }

    /// Builds from an entry function; f is called once per (i, j) with j <= i.
    pub fn from_fn(
        n: usize,
        entry_bound: f64,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self, MatrixError> {
        let mut tri = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                tri.push(f(i, j));
            }
        }
        Self::from_triangle(n, entry_bound, tri)
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_triangle(n, 0.0, vec![0.0; n * (n + 1) / 2]).expect("zeros is valid")
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, 1.0, |i, j| if i == j { 1.0 } else { 0.0 }).expect("identity is valid")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry_bound(&self) -> f64 {
        self.entry_bound
    }

    /// Raw stored lower triangle, row-major.
    pub fn triangle(&self) -> &[f64] {
        &self.tri
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index out of range");
        let (a, b) = if i >= j { (i, j) } else { (j, i) };
        self.tri[tri_index(a, b)]
    }

    /// Full dense copy, row-major n x n.
    pub fn to_mat(&self) -> Mat {
        Mat::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let v = self.tri[tri_index(i, j)];
                s += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        s
    }

    /// Quadratic form x' A x.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let v = self.tri[tri_index(i, j)];
                s += if i == j {
                    v * x[i] * x[i]
                } else {
                    2.0 * v * x[i] * x[j]
                };
            }
        }
        s
    }

    /// Principal submatrix A_{S x S} without query accounting.
    pub fn principal_submatrix_free(&self, s: &IndexSet) -> Result<SymmetricMatrix, MatrixError> {
        if s.is_empty() {
            return Err(MatrixError::EmptyIndexSet);
        }
        s.check_range(self.n)?;
        let idx = s.indices();
        SymmetricMatrix::from_fn(idx.len(), self.entry_bound, |i, j| {
            self.get(idx[i], idx[j])
        })
    }
}

/// Sorted, duplicate-free index list; holds the sample sets S, T.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    /// Accepts any order; sorts and rejects duplicates.
    pub fn new(mut indices: Vec<usize>) -> Result<Self, MatrixError> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(MatrixError::DuplicateIndex);
        }
        Ok(Self { indices })
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.indices, &other.indices);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    v.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    v.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    v.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        v.extend_from_slice(&a[i..]);
        v.extend_from_slice(&b[j..]);
        IndexSet { indices: v }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    fn check_range(&self, n: usize) -> Result<(), MatrixError> {
        match self.indices.last() {
            Some(&m) if m >= n => Err(MatrixError::IndexOutOfRange { index: m, n }),
            _ => Ok(()),
        }
    }
}

/// Entry-access wrapper that meters every distinct entry read. Unordered
/// pairs are charged once: after (i, j) is revealed, (j, i) is free.
#[derive(Debug, Clone)]
pub struct QueryOracle<'a> {
    source: &'a SymmetricMatrix,
    queried: HashSet<(usize, usize)>,
}

impl<'a> QueryOracle<'a> {
    pub fn new(source: &'a SymmetricMatrix) -> Self {
        Self {
            source,
            queried: HashSet::new(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn source(&self) -> &SymmetricMatrix {
        self.source
    }

    /// Number of distinct unordered pairs revealed so far.
    pub fn query_count(&self) -> usize {
        self.queried.len()
    }

    pub fn query_entry(&mut self, i: usize, j: usize) -> Result<f64, MatrixError> {
        let n = self.source.n();
        if i >= n || j >= n {
            return Err(MatrixError::IndexOutOfRange {
                index: i.max(j),
                n,
            });
        }
        let key = if i >= j { (i, j) } else { (j, i) };
        self.queried.insert(key);
        Ok(self.source.get(i, j))
    }

    /// A_{S x S}; every distinct entry is charged.
    pub fn principal_submatrix(&mut self, s: &IndexSet) -> Result<SymmetricMatrix, MatrixError> {
        if s.is_empty() {
            return Err(MatrixError::EmptyIndexSet);
        }
        s.check_range(self.n())?;
        let idx = s.indices().to_vec();
        let mut tri = Vec::with_capacity(idx.len() * (idx.len() + 1) / 2);
        for a in 0..idx.len() {
            for b in 0..=a {
                tri.push(self.query_entry(idx[a], idx[b])?);
            }
        }
        SymmetricMatrix::from_triangle(idx.len(), self.source.entry_bound(), tri)
    }

    /// A_{S x T}, not necessarily symmetric; distinct unordered pairs charged once.
    pub fn rectangular_submatrix(
        &mut self,
        s: &IndexSet,
        t: &IndexSet,
    ) -> Result<Mat, MatrixError> {
        if s.is_empty() || t.is_empty() {
            return Err(MatrixError::EmptyIndexSet);
        }
        s.check_range(self.n())?;
        t.check_range(self.n())?;
        let rows = s.indices().to_vec();
        let cols = t.indices().to_vec();
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in &rows {
            for &j in &cols {
                data.push(self.query_entry(i, j)?);
            }
        }
        Ok(Mat::from_vec(rows.len(), cols.len(), data))
    }
}
