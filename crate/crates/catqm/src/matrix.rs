//! Dense row-major matrices over a scalar carrier, with the JSON forms used
//! on every external interface.

use crate::scalar::ScalarRing;
use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ShapeError {
    #[error("entry count {got} does not match {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("dimension mismatch: {left_rows}x{left_cols} against {right_rows}x{right_cols} in {op}")]
    Mismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
        op: String,
    },
}

/// Row-major matrix; `rows` is the codomain dimension, `cols` the domain
/// dimension, so columns are images of domain basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: ScalarRing> Matrix<S> {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<S>) -> Result<Self, ShapeError> {
        if entries.len() != rows * cols {
            return Err(ShapeError::EntryCount { rows, cols, got: entries.len() });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    /// Column vector from entries.
    pub fn column(entries: Vec<S>) -> Self {
        Matrix { rows: entries.len(), cols: 1, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &Matrix<S>) -> Result<Matrix<S>, ShapeError> {
        if self.cols != other.rows {
            return Err(ShapeError::Mismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
                op: "multiplication".into(),
            });
        }
        let mut out: Matrix<S> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).add(&a.mul(other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product in row-major index convention: the index of
    /// `a (x) b` is `a * dim(B) + b` on both sides.
    pub fn kron(&self, other: &Matrix<S>) -> Matrix<S> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.set(
                            i1 * other.rows + i2,
                            j1 * other.cols + j2,
                            a.mul(other.get(i2, j2)),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix<S> {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn conj(&self) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix<S> {
        self.transpose().conj()
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| s.mul(e)).collect(),
        }
    }

    /// Stack vertically; all blocks must share the column count.
    pub fn vstack(blocks: &[Matrix<S>]) -> Result<Matrix<S>, ShapeError> {
        let cols = blocks.first().map(|b| b.cols).unwrap_or(0);
        let mut entries = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(ShapeError::Mismatch {
                    left_rows: rows,
                    left_cols: cols,
                    right_rows: b.rows,
                    right_cols: b.cols,
                    op: "vertical stacking".into(),
                });
            }
            rows += b.rows;
            entries.extend(b.entries.iter().cloned());
        }
        Ok(Matrix { rows, cols, entries })
    }

    /// Concatenate horizontally; all blocks must share the row count.
    pub fn hstack(blocks: &[Matrix<S>]) -> Result<Matrix<S>, ShapeError> {
        let rows = blocks.first().map(|b| b.rows).unwrap_or(0);
        for b in blocks {
            if b.rows != rows {
                return Err(ShapeError::Mismatch {
                    left_rows: rows,
                    left_cols: 0,
                    right_rows: b.rows,
                    right_cols: b.cols,
                    op: "horizontal concatenation".into(),
                });
            }
        }
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for r in 0..rows {
                for c in 0..b.cols {
                    out.set(r, offset + c, b.get(r, c).clone());
                }
            }
            offset += b.cols;
        }
        Ok(out)
    }

    /// Contiguous row block `[start, start + len)`.
    pub fn row_block(&self, start: usize, len: usize) -> Matrix<S> {
        assert!(start + len <= self.rows, "row block out of range");
        Matrix {
            rows: len,
            cols: self.cols,
            entries: self.entries[start * self.cols..(start + len) * self.cols].to_vec(),
        }
    }

    /// Entrywise tolerance comparison; shapes must match.
    pub fn approx_eq(&self, other: &Matrix<S>, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .entries
                .iter()
                .zip(other.entries.iter())
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

// ────────────────────────────── JSON forms ──────────────────────────────
//
// fdhilb: {"rows":R,"cols":C,"entries":[[re,im],...]}   (row-major)
// rel:    {"rows":R,"cols":C,"entries":[0|1,...]}

pub fn matrix_to_json<S: ScalarRing>(m: &Matrix<S>) -> Value {
    let entries: Vec<Value> = m
        .entries()
        .iter()
        .map(|e| {
            let lit = e.to_literal();
            match S::BACKEND {
                crate::scalar::BackendKind::FdHilb => json!([lit.re, lit.im]),
                crate::scalar::BackendKind::Rel => json!(lit.re as i64),
            }
        })
        .collect();
    json!({"rows": m.rows(), "cols": m.cols(), "entries": entries})
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MatrixJsonError {
    #[error("matrix JSON: {0}")]
    Malformed(String),
    #[error("matrix JSON: {0}")]
    Shape(#[from] ShapeError),
    #[error("matrix JSON: entry {index}: {source}")]
    Literal {
        index: usize,
        source: crate::scalar::LiteralError,
    },
}

/// Parse a single scalar entry: a bare number, a `[re, im]` pair, or a 0/1
/// integer, depending on what the backend accepts.
pub fn scalar_from_json<S: ScalarRing>(v: &Value, index: usize) -> Result<S, MatrixJsonError> {
    let lit = match v {
        Value::Number(n) => {
            let re = n
                .as_f64()
                .ok_or_else(|| MatrixJsonError::Malformed(format!("entry {index} not a number")))?;
            crate::term::ScalarLiteral::real(re)
        }
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(|| {
                MatrixJsonError::Malformed(format!("entry {index}: non-numeric real part"))
            })?;
            let im = pair[1].as_f64().ok_or_else(|| {
                MatrixJsonError::Malformed(format!("entry {index}: non-numeric imaginary part"))
            })?;
            crate::term::ScalarLiteral::new(re, im)
        }
        other => {
            return Err(MatrixJsonError::Malformed(format!(
                "entry {index}: expected number or [re, im], got {other}"
            )))
        }
    };
    S::from_literal(lit).map_err(|source| MatrixJsonError::Literal { index, source })
}

pub fn matrix_from_json<S: ScalarRing>(v: &Value) -> Result<Matrix<S>, MatrixJsonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| MatrixJsonError::Malformed("expected an object".into()))?;
    let rows = obj
        .get("rows")
        .and_then(Value::as_u64)
        .ok_or_else(|| MatrixJsonError::Malformed("missing rows".into()))? as usize;
    let cols = obj
        .get("cols")
        .and_then(Value::as_u64)
        .ok_or_else(|| MatrixJsonError::Malformed("missing cols".into()))? as usize;
    let raw = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| MatrixJsonError::Malformed("missing entries".into()))?;
    let entries = raw
        .iter()
        .enumerate()
        .map(|(i, e)| scalar_from_json::<S>(e, i))
        .collect::<Result<Vec<S>, _>>()?;
    Ok(Matrix::from_vec(rows, cols, entries)?)
}

/// Render for terminal output: complex entries as `re+imi`, booleans as 0/1.
pub fn matrix_to_text<S: ScalarRing>(m: &Matrix<S>) -> String {
    let fmt_entry = |e: &S| -> String {
        let lit = e.to_literal();
        match S::BACKEND {
            crate::scalar::BackendKind::Rel => format!("{}", lit.re as i64),
            crate::scalar::BackendKind::FdHilb => {
                if lit.im == 0.0 {
                    format!("{}", lit.re)
                } else {
                    format!("{}{:+}i", lit.re, lit.im)
                }
            }
        }
    };
    let mut lines = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| fmt_entry(m.get(r, c))).collect();
        lines.push(format!("[{}]", row.join(", ")));
    }
    lines.join("\n")
}

pub type CMatrix = Matrix<Complex64>;
pub type RMatrix = Matrix<bool>;
