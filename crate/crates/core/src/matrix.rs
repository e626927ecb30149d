//! Dense matrices over a [`FieldSpec`] and the tournament matrix builders.

use std::fmt::Write as _;

use thiserror::Error;

use crate::field::{parse_scalar, FieldError, FieldSpec, Scalar};
use crate::tournament::Tournament;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("sequence entry {0} is zero")]
    ZeroEntryInSequence(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range for size {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("matrix csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The sequence `(a_1, …, a_n)` of nonzero elements of one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqA {
    field: FieldSpec,
    values: Vec<Scalar>,
}

impl SeqA {
    pub fn new(field: FieldSpec, values: Vec<Scalar>) -> Result<Self, MatrixError> {
        for (i, v) in values.iter().enumerate() {
            if v.field() != field {
                return Err(FieldError::FieldMismatch(field, v.field()).into());
            }
            if v.is_zero() {
                return Err(MatrixError::ZeroEntryInSequence(i));
            }
        }
        Ok(SeqA { field, values })
    }

    pub fn from_i64s(field: FieldSpec, values: &[i64]) -> Result<Self, MatrixError> {
        Self::new(field, values.iter().map(|&v| field.from_i64(v)).collect())
    }

    pub fn constant(c: &Scalar, n: usize) -> Result<Self, MatrixError> {
        Self::new(c.field(), vec![c.clone(); n])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.values[i]
    }

    /// First `n` entries.
    pub fn prefix(&self, n: usize) -> Result<SeqA, MatrixError> {
        if n > self.len() {
            return Err(MatrixError::LengthMismatch {
                expected: n,
                found: self.len(),
            });
        }
        Ok(SeqA {
            field: self.field,
            values: self.values[..n].to_vec(),
        })
    }

    /// Copy with entry `i` replaced by the nonzero `z`.
    pub fn with_entry(&self, i: usize, z: Scalar) -> Result<SeqA, MatrixError> {
        if i >= self.len() {
            return Err(MatrixError::OutOfRange {
                index: i,
                size: self.len(),
            });
        }
        let mut values = self.values.clone();
        values[i] = z;
        SeqA::new(self.field, values)
    }

    /// `σa` with `(σa)_i = a_{σ(i)}`.
    pub fn permuted(&self, sigma: &[usize]) -> Result<SeqA, MatrixError> {
        if sigma.len() != self.len() {
            return Err(MatrixError::LengthMismatch {
                expected: self.len(),
                found: sigma.len(),
            });
        }
        let values = sigma
            .iter()
            .map(|&s| {
                self.values.get(s).cloned().ok_or(MatrixError::OutOfRange {
                    index: s,
                    size: self.len(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(SeqA {
            field: self.field,
            values,
        })
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }
}

/// `f(x, y) = αx + βy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearF {
    pub alpha: Scalar,
    pub beta: Scalar,
}

impl LinearF {
    pub fn new(alpha: Scalar, beta: Scalar) -> Result<Self, MatrixError> {
        if alpha.field() != beta.field() {
            return Err(FieldError::FieldMismatch(alpha.field(), beta.field()).into());
        }
        Ok(LinearF { alpha, beta })
    }

    pub fn field(&self) -> FieldSpec {
        self.alpha.field()
    }

    pub fn apply(&self, x: &Scalar, y: &Scalar) -> Scalar {
        self.alpha.mul_same(x).add_same(&self.beta.mul_same(y))
    }

    /// `α + β`.
    pub fn weight(&self) -> Scalar {
        self.alpha.add_same(&self.beta)
    }

    pub fn is_degenerate(&self) -> bool {
        self.weight().is_zero()
    }
}

/// Row-major dense matrix; every entry lives in `field`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn new(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::LengthMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(e) = entries.iter().find(|e| e.field() != field) {
            return Err(FieldError::FieldMismatch(field, e.field()).into());
        }
        Ok(DenseMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                debug_assert_eq!(e.field(), field);
                entries.push(e);
            }
        }
        DenseMatrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatrixError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self::from_fn(field, rows.len(), cols, |i, j| {
            field.from_i64(rows[i][j])
        }))
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.zero())
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        Self::from_fn(field, n, n, |i, j| field.from_i64((i == j) as i64))
    }

    /// The all-ones matrix `J`.
    pub fn ones(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.one())
    }

    pub fn diagonal(values: &[Scalar]) -> Result<Self, MatrixError> {
        let field = values
            .first()
            .map_or(FieldSpec::rationals(), |v| v.field());
        let n = values.len();
        let zero = field.zero();
        let mut entries = vec![zero; n * n];
        for (i, v) in values.iter().enumerate() {
            entries[i * n + i] = v.clone();
        }
        Self::new(field, n, n, entries)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) -> Result<(), MatrixError> {
        if v.field() != self.field {
            return Err(FieldError::FieldMismatch(self.field, v.field()).into());
        }
        if i >= self.rows || j >= self.cols {
            return Err(MatrixError::OutOfRange {
                index: i.max(j),
                size: self.rows.min(self.cols),
            });
        }
        self.entries[i * self.cols + j] = v;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMatrix {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| self.get(i, i).is_zero())
    }

    fn same_shape(&self, other: &DenseMatrix) -> Result<(), MatrixError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch(self.field, other.field).into());
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix, MatrixError> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.add_same(b)))
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix, MatrixError> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.add_same(&b.neg())))
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> DenseMatrix {
        DenseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix, MatrixError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch(self.field, other.field).into());
        }
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let zero = self.field.zero();
        Ok(Self::from_fn(self.field, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(zero.clone(), |acc, k| {
                acc.add_same(&self.get(i, k).mul_same(other.get(k, j)))
            })
        }))
    }

    pub fn scale(&self, c: &Scalar) -> Result<DenseMatrix, MatrixError> {
        if c.field() != self.field {
            return Err(FieldError::FieldMismatch(self.field, c.field()).into());
        }
        Ok(DenseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.mul_same(c)).collect(),
        })
    }

    /// Submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<DenseMatrix, MatrixError> {
        for &r in rows {
            if r >= self.rows {
                return Err(MatrixError::OutOfRange { index: r, size: self.rows });
            }
        }
        for &c in cols {
            if c >= self.cols {
                return Err(MatrixError::OutOfRange { index: c, size: self.cols });
            }
        }
        Ok(Self::from_fn(self.field, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        }))
    }

    /// Top-left `s × s` block.
    pub fn principal(&self, s: usize) -> Result<DenseMatrix, MatrixError> {
        if s > self.rows || s > self.cols {
            return Err(MatrixError::OutOfRange {
                index: s,
                size: self.rows.min(self.cols),
            });
        }
        let idx: Vec<usize> = (0..s).collect();
        self.submatrix(&idx, &idx)
    }

    /// CSV with the header line `field=<spec>,rows=<r>,cols=<c>`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("field={},rows={},cols={}\n", self.field, self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    /// The same integer/rational entries read in another field: residues are
    /// lifted to `0..p`, fractions reduced (their denominators must be units).
    pub fn in_field(&self, field: FieldSpec) -> Result<DenseMatrix, MatrixError> {
        if field == self.field {
            return Ok(self.clone());
        }
        let entries = self
            .entries
            .iter()
            .map(|e| match (e.residue(), e.as_ratio()) {
                (Some(r), _) => Ok(field.from_i64(i64::from(r))),
                (None, Some(q)) => field.from_fraction(q.numer(), q.denom()),
                _ => unreachable!("a scalar is a residue or a fraction"),
            })
            .collect::<Result<Vec<_>, _>>()?;
        DenseMatrix::new(field, self.rows, self.cols, entries)
    }

    pub fn from_csv(text: &str) -> Result<DenseMatrix, MatrixError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| MatrixError::Csv("missing header".into()))?;
        let mut field = None;
        let mut rows = None;
        let mut cols = None;
        for part in header.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| MatrixError::Csv(format!("bad header field {part:?}")))?;
            match k.trim() {
                "field" => field = Some(v.parse::<FieldSpec>()?),
                "rows" => rows = v.trim().parse::<usize>().ok(),
                "cols" => cols = v.trim().parse::<usize>().ok(),
                other => return Err(MatrixError::Csv(format!("unknown header key {other:?}"))),
            }
        }
        let (Some(field), Some(rows), Some(cols)) = (field, rows, cols) else {
            return Err(MatrixError::Csv(format!("incomplete header {header:?}")));
        };
        let mut entries = Vec::with_capacity(rows * cols);
        let mut seen_rows = 0;
        for line in lines {
            let before = entries.len();
            for cell in line.split(',') {
                entries.push(parse_scalar(field, cell)?);
            }
            if entries.len() - before != cols {
                return Err(MatrixError::Csv(format!(
                    "row {seen_rows} has {} cells, expected {cols}",
                    entries.len() - before
                )));
            }
            seen_rows += 1;
        }
        if seen_rows != rows {
            return Err(MatrixError::Csv(format!("expected {rows} rows, found {seen_rows}")));
        }
        DenseMatrix::new(field, rows, cols, entries)
    }
}

fn check_len(t: &Tournament, a: &SeqA) -> Result<(), MatrixError> {
    if t.n() != a.len() {
        return Err(MatrixError::LengthMismatch {
            expected: t.n(),
            found: a.len(),
        });
    }
    Ok(())
}

fn symmetric_from(
    field: FieldSpec,
    n: usize,
    mut upper: impl FnMut(usize, usize) -> Scalar,
) -> DenseMatrix {
    let zero = field.zero();
    let mut entries = vec![zero; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = upper(i, j);
            entries[j * n + i] = v.clone();
            entries[i * n + j] = v;
        }
    }
    DenseMatrix {
        field,
        rows: n,
        cols: n,
        entries,
    }
}

/// `M_T(a)`: zero diagonal, and for `i < j` the entry `a_i` if `i → j`, else `a_j`.
pub fn build_m(t: &Tournament, a: &SeqA) -> Result<DenseMatrix, MatrixError> {
    check_len(t, a)?;
    Ok(symmetric_from(a.field(), a.len(), |i, j| {
        let v = if t.beats(i, j) { a.get(i) } else { a.get(j) };
        v.clone()
    }))
}

/// `D_n(a)`: entry `(i, j)` is `a_max(i,j)` off the diagonal.
pub fn build_dn(a: &SeqA) -> DenseMatrix {
    symmetric_from(a.field(), a.len(), |_, j| a.get(j).clone())
}

/// `M_T^(f)(a)` for `f(x, y) = αx + βy`.
pub fn build_m_f(t: &Tournament, a: &SeqA, f: &LinearF) -> Result<DenseMatrix, MatrixError> {
    check_len(t, a)?;
    if f.field() != a.field() {
        return Err(FieldError::FieldMismatch(a.field(), f.field()).into());
    }
    Ok(symmetric_from(a.field(), a.len(), |i, j| {
        if t.beats(i, j) {
            f.apply(a.get(i), a.get(j))
        } else {
            f.apply(a.get(j), a.get(i))
        }
    }))
}

/// The `f(x, y) = x / y` ensemble.
pub fn build_m_ratio(t: &Tournament, a: &SeqA) -> Result<DenseMatrix, MatrixError> {
    check_len(t, a)?;
    let inverses: Vec<Scalar> = a
        .values()
        .iter()
        .map(|v| v.inv().expect("sequence entries are nonzero"))
        .collect();
    Ok(symmetric_from(a.field(), a.len(), |i, j| {
        if t.beats(i, j) {
            a.get(i).mul_same(&inverses[j])
        } else {
            a.get(j).mul_same(&inverses[i])
        }
    }))
}

/// `M_T(a) + M_{T_R}(a)`, i.e. `DJ + JD − 2D`: entry `a_i + a_j` off the diagonal.
pub fn reversal_sum_matrix(a: &SeqA) -> DenseMatrix {
    symmetric_from(a.field(), a.len(), |i, j| a.get(i).add_same(a.get(j)))
}

/// Whether `m` lies in the family `M_n(a)`: symmetric, zero diagonal, and each
/// entry `(i, j)` equal to `a_i` or `a_j`.
pub fn in_family(m: &DenseMatrix, a: &SeqA) -> bool {
    let n = a.len();
    m.field() == a.field()
        && m.rows() == n
        && m.cols() == n
        && m.is_symmetric()
        && m.has_zero_diagonal()
        && (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let e = m.get(i, j);
                e == a.get(i) || e == a.get(j)
            })
        })
}

/// `c (J − I)` of size `n`.
pub fn scaled_j_minus_i(c: &Scalar, n: usize) -> DenseMatrix {
    symmetric_from(c.field(), n, |_, _| c.clone())
}
