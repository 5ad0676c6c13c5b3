//! Dense matrices over exact rationals.
//!
//! Carrier for LP data, synthesized Choi matrices, and golden-table
//! comparisons. No rounding happens anywhere in this module.

use num::{One, Zero};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::exact::{format_rat, parse_rat, rat_to_f64, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        QMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = QMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, s: &Rat) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        let mut acc = Rat::zero();
        for i in 0..self.rows {
            acc += self.get(i, i);
        }
        acc
    }

    pub fn kron(&self, other: &QMatrix) -> QMatrix {
        let mut out = QMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn partial_trace_first(&self, d1: usize, d2: usize) -> Result<QMatrix> {
        self.check_bipartite(d1, d2)?;
        let mut out = QMatrix::zeros(d2, d2);
        for a in 0..d1 {
            for i in 0..d2 {
                for j in 0..d2 {
                    let v = out.get(i, j) + self.get(a * d2 + i, a * d2 + j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn partial_trace_second(&self, d1: usize, d2: usize) -> Result<QMatrix> {
        self.check_bipartite(d1, d2)?;
        let mut out = QMatrix::zeros(d1, d1);
        for a in 0..d1 {
            for b in 0..d1 {
                let mut acc = Rat::zero();
                for i in 0..d2 {
                    acc += self.get(a * d2 + i, b * d2 + i);
                }
                out.set(a, b, acc);
            }
        }
        Ok(out)
    }

    fn check_bipartite(&self, d1: usize, d2: usize) -> Result<()> {
        if !self.is_square() || self.rows != d1 * d2 {
            return Err(Error::DimensionMismatch(format!(
                "expected square matrix of dimension {}*{}, got {}x{}",
                d1, d2, self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Lossless up to float rounding of each entry.
    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| {
            Complex64::new(rat_to_f64(self.get(i, j)), 0.0)
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.data.iter().map(|r| json!(format_rat(r))).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<QMatrix> {
        let rows = v["rows"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing rows".into()))? as usize;
        let cols = v["cols"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing cols".into()))? as usize;
        let entries = v["entries"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing entries".into()))?;
        if entries.len() != rows * cols {
            return Err(Error::Parse("entry count mismatch".into()));
        }
        let mut data = Vec::with_capacity(entries.len());
        for e in entries {
            let s = e
                .as_str()
                .ok_or_else(|| Error::Parse("rational entry is not a string".into()))?;
            data.push(parse_rat(s)?);
        }
        Ok(QMatrix { rows, cols, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn exact_kron_partial_trace_factorization() {
        let a = QMatrix::from_fn(3, 3, |i, j| rat((i * 3 + j) as i64, 7));
        let b = QMatrix::from_fn(2, 2, |i, j| rat(1 + (i * 2 + j) as i64, 5));
        let lhs = a.kron(&b).partial_trace_second(3, 2).unwrap();
        assert_eq!(lhs, a.scale(&b.trace()));
        let lhs1 = a.kron(&b).partial_trace_first(3, 2).unwrap();
        assert_eq!(lhs1, b.scale(&a.trace()));
    }

    #[test]
    fn exact_mul_matches_float() {
        let a = QMatrix::from_fn(2, 3, |i, j| rat(i as i64 - 1, 1 + j as i64));
        let b = QMatrix::from_fn(3, 2, |i, j| rat(2 * i as i64 + 1, 3 + j as i64));
        let c = a.mul(&b);
        let cf = a.to_cmatrix().mul(&b.to_cmatrix());
        assert!(c.to_cmatrix().max_abs_diff(&cf) < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let a = QMatrix::from_fn(2, 2, |i, j| rat(i as i64 * 5 - 3, 1 + j as i64 * 8));
        let back = QMatrix::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
    }
}
