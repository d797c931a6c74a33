//! Dense exact matrices.
//!
//! Indices at the public surface are 1-based, so `get(i, j)` is `a_{i,j}`;
//! storage is row-major and 0-based internally.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::scalar::{RingDomain, Scalar, ScalarError};

/// Largest order accepted by [`Matrix::det_cofactor`] unless overridden.
pub const COFACTOR_ORACLE_BOUND: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("entry ({row}, {col}) is in {found}, matrix is over {expected}")]
    MixedDomain {
        row: usize,
        col: usize,
        expected: RingDomain,
        found: RingDomain,
    },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("index {0} listed twice")]
    DuplicateIndex(usize),
    #[error("order {n} is below the minimum {min}")]
    OrderTooSmall { n: usize, min: usize },
    #[error("parameter {name} = {value} outside 0..={max}")]
    ParameterOutOfRange {
        name: &'static str,
        value: usize,
        max: usize,
    },
    #[error("cofactor expansion limited to order {bound}, got {n}")]
    TooLargeForCofactor { n: usize, bound: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Rows and columns to delete, both 1-based and kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinorSpec {
    removed_rows: Vec<usize>,
    removed_cols: Vec<usize>,
}

impl MinorSpec {
    /// Accepts the indices in any order; duplicates and index 0 are rejected.
    pub fn new(rows: &[usize], cols: &[usize]) -> Result<Self, MatrixError> {
        Ok(MinorSpec {
            removed_rows: normalise(rows)?,
            removed_cols: normalise(cols)?,
        })
    }

    pub fn removed_rows(&self) -> &[usize] {
        &self.removed_rows
    }

    pub fn removed_cols(&self) -> &[usize] {
        &self.removed_cols
    }
}

fn normalise(indices: &[usize]) -> Result<Vec<usize>, MatrixError> {
    let mut v = indices.to_vec();
    v.sort_unstable();
    for w in v.windows(2) {
        if w[0] == w[1] {
            return Err(MatrixError::DuplicateIndex(w[0]));
        }
    }
    if v.first() == Some(&0) {
        return Err(MatrixError::IndexOutOfRange { index: 0, bound: usize::MAX });
    }
    Ok(v)
}

fn check_bounds(indices: &[usize], bound: usize) -> Result<(), MatrixError> {
    match indices.iter().find(|&&i| i == 0 || i > bound) {
        Some(&index) => Err(MatrixError::IndexOutOfRange { index, bound }),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    domain: RingDomain,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(
        domain: RingDomain,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|e| e.domain() != domain) {
            return Err(MatrixError::MixedDomain {
                row: pos / cols + 1,
                col: pos % cols + 1,
                expected: domain,
                found: entries[pos].domain(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            domain,
            entries,
        })
    }

    /// Builds a matrix from integer rows, mapped into `domain`.
    ///
    /// Panics if the rows are ragged; meant for literals in tests and examples.
    pub fn from_rows<R: AsRef<[i64]>>(domain: RingDomain, rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            entries.extend(r.as_ref().iter().map(|&v| Scalar::from_i64(domain, v)));
        }
        Matrix {
            rows: rows.len(),
            cols,
            domain,
            entries,
        }
    }

    pub fn identity(domain: RingDomain, n: usize) -> Self {
        Self::from_fn(domain, n, n, |i, j| Scalar::from_i64(domain, (i == j) as i64))
    }

    /// `f` receives 1-based `(i, j)`.
    pub fn from_fn(
        domain: RingDomain,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 1..=rows {
            for j in 1..=cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            domain,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain(&self) -> RingDomain {
        self.domain
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// The order `n` of a square matrix.
    pub fn order(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// `a_{i,j}`, 1-based. Panics when out of range.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!(
            (1..=self.rows).contains(&i) && (1..=self.cols).contains(&j),
            "({i}, {j}) outside {}x{}",
            self.rows,
            self.cols
        );
        &self.entries[(i - 1) * self.cols + (j - 1)]
    }

    pub(crate) fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// Row `i` (1-based) as a slice.
    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[(i - 1) * self.cols..i * self.cols]
    }

    pub fn with_rows_swapped(&self, i: usize, j: usize) -> Result<Matrix, MatrixError> {
        check_bounds(&[i, j], self.rows)?;
        let mut out = self.clone();
        for c in 0..self.cols {
            out.entries.swap((i - 1) * self.cols + c, (j - 1) * self.cols + c);
        }
        Ok(out)
    }

    pub fn with_row_scaled(&self, i: usize, factor: &Scalar) -> Result<Matrix, MatrixError> {
        check_bounds(&[i], self.rows)?;
        let mut out = self.clone();
        for c in 0..self.cols {
            let idx = (i - 1) * self.cols + c;
            out.entries[idx] = out.entries[idx].mul(factor)?;
        }
        Ok(out)
    }

    /// Deletes the rows and columns named by `spec`, keeping the relative
    /// order of what remains.
    pub fn minor(&self, spec: &MinorSpec) -> Result<Matrix, MatrixError> {
        check_bounds(&spec.removed_rows, self.rows)?;
        check_bounds(&spec.removed_cols, self.cols)?;
        let keep_rows: Vec<usize> =
            (1..=self.rows).filter(|i| spec.removed_rows.binary_search(i).is_err()).collect();
        let keep_cols: Vec<usize> =
            (1..=self.cols).filter(|j| spec.removed_cols.binary_search(j).is_err()).collect();
        Ok(self.select(&keep_rows, &keep_cols))
    }

    /// Shorthand for `minor(&MinorSpec::new(rows, cols)?)`.
    pub fn delete(&self, rows: &[usize], cols: &[usize]) -> Result<Matrix, MatrixError> {
        self.minor(&MinorSpec::new(rows, cols)?)
    }

    /// Submatrix on the given 1-based rows and columns, in the order listed.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            domain: self.domain,
            entries,
        }
    }

    /// Hex SHA-256 of the canonical text rendering.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(crate::io::render_matrix(self).as_bytes()))
    }

    /// Determinant by recursive first-row Laplace expansion, limited to
    /// order [`COFACTOR_ORACLE_BOUND`].
    pub fn det_cofactor(&self) -> Result<Scalar, MatrixError> {
        self.det_cofactor_bounded(COFACTOR_ORACLE_BOUND)
    }

    pub fn det_cofactor_bounded(&self, bound: usize) -> Result<Scalar, MatrixError> {
        let n = self.order()?;
        if n > bound {
            return Err(MatrixError::TooLargeForCofactor { n, bound });
        }
        let cols: Vec<usize> = (0..n).collect();
        Ok(self.laplace(0, &cols)?)
    }

    fn laplace(&self, row: usize, cols: &[usize]) -> Result<Scalar, ScalarError> {
        match cols {
            [] => return Ok(Scalar::one(self.domain)),
            [c] => return Ok(self.at(row, *c).clone()),
            [c0, c1] => {
                let (a, b) = (self.at(row, *c0), self.at(row, *c1));
                let (c, d) = (self.at(row + 1, *c0), self.at(row + 1, *c1));
                return a.cross(d, b, c);
            }
            _ => {}
        }
        let mut acc = Scalar::zero(self.domain);
        let mut rest = Vec::with_capacity(cols.len() - 1);
        for (idx, &c) in cols.iter().enumerate() {
            let entry = self.at(row, c);
            if entry.is_zero() {
                continue;
            }
            rest.clear();
            rest.extend(cols.iter().copied().filter(|&x| x != c));
            let term = entry.mul(&self.laplace(row + 1, &rest)?)?;
            acc = if idx % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
        }
        Ok(acc)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination over the
    /// integers and rationals, and by pivoted Gaussian elimination over
    /// prime fields.
    pub fn det_bareiss(&self) -> Result<Scalar, MatrixError> {
        let n = self.order()?;
        let mut m = self.entries.clone();
        let det = match self.domain {
            RingDomain::PrimeField(_) => field_elimination(&mut m, n, self.domain)?,
            _ => bareiss(&mut m, n, self.domain)?,
        };
        Ok(det)
    }

    /// `A(k)`: drop rows `n-2, n-1` and columns `n-1, n`, then overwrite the
    /// last remaining column (position `n-2`) with column `n-k` of `A`
    /// restricted to rows `1..=n-3` and `n`.
    pub fn build_a_k(&self, k: usize) -> Result<Matrix, MatrixError> {
        let n = self.order()?;
        if n < 4 {
            return Err(MatrixError::OrderTooSmall { n, min: 4 });
        }
        if k > n - 1 {
            return Err(MatrixError::ParameterOutOfRange {
                name: "k",
                value: k,
                max: n - 1,
            });
        }
        let rows: Vec<usize> = (1..=n - 3).chain([n]).collect();
        let cols: Vec<usize> = (1..=n - 3).chain([n - k]).collect();
        Ok(self.select(&rows, &cols))
    }

    /// `B(l)`: `A` with row `n` replaced by a copy of row `n-l`.
    pub fn build_b_l(&self, l: usize) -> Result<Matrix, MatrixError> {
        let n = self.order()?;
        if n < 2 {
            return Err(MatrixError::OrderTooSmall { n, min: 2 });
        }
        if l > n - 1 {
            return Err(MatrixError::ParameterOutOfRange {
                name: "l",
                value: l,
                max: n - 1,
            });
        }
        let rows: Vec<usize> = (1..n).chain([n - l]).collect();
        let cols: Vec<usize> = (1..=n).collect();
        Ok(self.select(&rows, &cols))
    }
}

fn bareiss(m: &mut [Scalar], n: usize, domain: RingDomain) -> Result<Scalar, ScalarError> {
    if n == 0 {
        return Ok(Scalar::one(domain));
    }
    let mut negate = false;
    let mut prev = Scalar::one(domain);
    for k in 0..n - 1 {
        if m[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i * n + k].is_zero()) else {
                return Ok(Scalar::zero(domain));
            };
            for c in 0..n {
                m.swap(k * n + c, p * n + c);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i * n + j].cross(&m[k * n + k], &m[i * n + k], &m[k * n + j])?;
                m[i * n + j] = num.div_exact(&prev)?;
            }
        }
        prev = m[k * n + k].clone();
    }
    let det = m[n * n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

fn field_elimination(m: &mut [Scalar], n: usize, domain: RingDomain) -> Result<Scalar, ScalarError> {
    let mut det = Scalar::one(domain);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i * n + k].is_zero()) else {
            return Ok(Scalar::zero(domain));
        };
        if p != k {
            for c in 0..n {
                m.swap(k * n + c, p * n + c);
            }
            det = det.neg();
        }
        let pivot = m[k * n + k].clone();
        det = det.mul(&pivot)?;
        for i in k + 1..n {
            if m[i * n + k].is_zero() {
                continue;
            }
            let factor = m[i * n + k].div_exact(&pivot)?;
            for j in k + 1..n {
                let t = factor.mul(&m[k * n + j])?;
                m[i * n + j] = m[i * n + j].sub(&t)?;
            }
        }
    }
    Ok(det)
}

/// Seeded random square matrix.
///
/// Integer entries are uniform in `[-entry_bound, entry_bound]`; rational
/// entries have numerator in that range and denominator in `[1, entry_bound]`;
/// prime field entries are uniform residues. The output depends only on the
/// arguments.
pub fn random_matrix(domain: RingDomain, n: usize, entry_bound: u32, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_matrix_with(&mut rng, domain, n, entry_bound)
}

pub fn random_matrix_with<R: Rng>(rng: &mut R, domain: RingDomain, n: usize, entry_bound: u32) -> Matrix {
    Matrix::from_fn(domain, n, n, |_, _| random_scalar(rng, domain, entry_bound))
}

pub fn random_scalar<R: Rng>(rng: &mut R, domain: RingDomain, entry_bound: u32) -> Scalar {
    let b = i64::from(entry_bound.max(1));
    match domain {
        RingDomain::Integers => Scalar::from_i64(domain, rng.gen_range(-b..=b)),
        RingDomain::Rationals => {
            let num = rng.gen_range(-b..=b);
            let den = rng.gen_range(1..=b);
            Scalar::rational(num, den).expect("denominator is positive")
        }
        RingDomain::PrimeField(p) => {
            let r = rng.gen_range(0..p.get());
            Scalar::fp(r, p.get()).expect("modulus already checked")
        }
    }
}
