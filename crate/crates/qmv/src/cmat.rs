//! Dense complex double-precision matrices.
//!
//! Column vectors are represented as `d x 1` matrices so that Kronecker
//! products, adjoints, and serialization work uniformly for states and
//! operators.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Row-major construction from real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut m = CMatrix::zeros(rows, cols);
        for (k, &x) in entries.iter().enumerate() {
            m.data[k] = C64::new(x, 0.0);
        }
        m
    }

    /// Standard basis column vector |k> of the given dimension.
    pub fn basis_vector(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut v = CMatrix::zeros(dim, 1);
        v.set(k, 0, C64::new(1.0, 0.0));
        v
    }

    pub fn column_from(entries: Vec<C64>) -> Self {
        let rows = entries.len();
        CMatrix {
            rows,
            cols: 1,
            data: entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x *= s;
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> CMatrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = x.conj();
        }
        out
    }

    pub fn dagger(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Kronecker product; dimensions multiply.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == C64::new(0.0, 0.0) {
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

    /// Partial trace over the first register of a `d1*d2`-dimensional square
    /// matrix: Tr_1(A (x) B) = Tr(A) B, extended linearly.
    pub fn partial_trace_first(&self, d1: usize, d2: usize) -> Result<CMatrix> {
        self.check_bipartite(d1, d2)?;
        let mut out = CMatrix::zeros(d2, d2);
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

    /// Partial trace over the second register: Tr_2(A (x) B) = Tr(B) A.
    pub fn partial_trace_second(&self, d1: usize, d2: usize) -> Result<CMatrix> {
        self.check_bipartite(d1, d2)?;
        let mut out = CMatrix::zeros(d1, d1);
        for a in 0..d1 {
            for b in 0..d1 {
                let mut acc = C64::new(0.0, 0.0);
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

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tolerance {
                    return false;
                }
            }
        }
        true
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product <self|other> of two column vectors.
    pub fn vdot(&self, other: &CMatrix) -> C64 {
        assert_eq!(self.cols, 1);
        assert_eq!(other.cols, 1);
        assert_eq!(self.rows, other.rows);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |self><other| of two column vectors.
    pub fn outer(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, 1);
        assert_eq!(other.cols, 1);
        CMatrix::from_fn(self.rows, other.rows, |i, j| {
            self.get(i, 0) * other.get(j, 0).conj()
        })
    }

    /// Determinant via LU decomposition with partial pivoting.
    pub fn det(&self) -> C64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = C64::new(1.0, 0.0);
        for k in 0..n {
            let (mut pivot, mut pmax) = (k, a.get(k, k).norm());
            for i in k + 1..n {
                if a.get(i, k).norm() > pmax {
                    pivot = i;
                    pmax = a.get(i, k).norm();
                }
            }
            if pmax == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if pivot != k {
                for j in 0..n {
                    let (x, y) = (a.get(k, j), a.get(pivot, j));
                    a.set(k, j, y);
                    a.set(pivot, j, x);
                }
                det = -det;
            }
            let akk = a.get(k, k);
            det *= akk;
            for i in k + 1..n {
                let f = a.get(i, k) / akk;
                for j in k..n {
                    let v = a.get(i, j) - f * a.get(k, j);
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// Inverse of a 2x2 matrix by the adjugate formula.
    pub fn inverse_2x2(&self) -> Result<CMatrix> {
        if self.rows != 2 || self.cols != 2 {
            return Err(Error::DimensionMismatch(format!(
                "inverse_2x2 on {}x{}",
                self.rows, self.cols
            )));
        }
        let det = self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0);
        if det.norm() == 0.0 {
            return Err(Error::InvalidArgument("singular 2x2 matrix".into()));
        }
        let mut inv = CMatrix::zeros(2, 2);
        inv.set(0, 0, self.get(1, 1) / det);
        inv.set(0, 1, -self.get(0, 1) / det);
        inv.set(1, 0, -self.get(1, 0) / det);
        inv.set(1, 1, self.get(0, 0) / det);
        Ok(inv)
    }

    /// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
    /// sorted ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "eigenvalues of {}x{}",
                self.rows, self.cols
            )));
        }
        if !self.is_hermitian(1e-9 * (1.0 + self.max_abs())) {
            return Err(Error::InvalidArgument(
                "hermitian_eigenvalues on a non-Hermitian matrix".into(),
            ));
        }
        let n = self.rows;
        // Work on the Hermitian average to kill rounding asymmetry.
        let mut a = CMatrix::from_fn(n, n, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        });
        let scale = a.max_abs().max(1.0);
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in p + 1..n {
                    off = off.max(a.get(p, q).norm());
                }
            }
            if off <= tol::JACOBI_OFFDIAG * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    jacobi_rotate(&mut a, p, q);
                }
            }
        }
        let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        Ok(eigs)
    }

    /// Count of eigenvalues exceeding `cutoff` in absolute value.
    pub fn numerical_rank_hermitian(&self, cutoff: f64) -> Result<usize> {
        Ok(self
            .hermitian_eigenvalues()?
            .iter()
            .filter(|e| e.abs() > cutoff)
            .count())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.data.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<CMatrix> {
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
            let pair = e
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse("entry is not an [re, im] pair".into()))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::Parse("bad real part".into()))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::Parse("bad imaginary part".into()))?;
            data.push(C64::new(re, im));
        }
        Ok(CMatrix { rows, cols, data })
    }
}

/// One complex Jacobi rotation zeroing out the (p, q) entry.
fn jacobi_rotate(a: &mut CMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{i phi}
    let alpha = a.get(p, p).re;
    let beta = a.get(q, q).re;
    let tau = (beta - alpha) / (2.0 * r);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = a.rows();
    // Column update: (col_p, col_q) <- (c col_p - s pb* col_q, s phase col_p + c pb* col_q)
    // where the phase diag(1, e^{-i phi}) first makes the pivot entry real.
    let pb = phase.conj();
    for i in 0..n {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.set(i, p, aip * c - aiq * pb * s);
        a.set(i, q, aip * s + aiq * pb * c);
    }
    // Matching row update with the conjugate coefficients.
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj * c - aqj * phase * s);
        a.set(q, j, apj * s + aqj * phase * c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn kron_identity() {
        let i2 = CMatrix::identity(2);
        assert_eq!(i2.kron(&i2), CMatrix::identity(4));
    }

    #[test]
    fn kron_basis_shuffle() {
        // |1> (x) |0> = |10>.
        let e1 = CMatrix::basis_vector(2, 1);
        let e0 = CMatrix::basis_vector(2, 0);
        let col = e1.kron(&e0);
        let expected = CMatrix::from_real(4, 1, &[0.0, 0.0, 1.0, 0.0]);
        assert!(col.max_abs_diff(&expected) == 0.0);
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 2, 2);
            let b = random_matrix(&mut rng, 2, 2);
            let c = random_matrix(&mut rng, 2, 2);
            let d = random_matrix(&mut rng, 2, 2);
            let lhs = a.kron(&b).mul(&c.kron(&d));
            let rhs = a.mul(&c).kron(&b.mul(&d));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn kron_associativity() {
        let mut rng = StdRng::seed_from_u64(8);
        let a = random_matrix(&mut rng, 2, 3);
        let b = random_matrix(&mut rng, 3, 2);
        let c = random_matrix(&mut rng, 2, 2);
        let lhs = a.kron(&b).kron(&c);
        let rhs = a.kron(&b.kron(&c));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_identity() {
        let tr2 = CMatrix::identity(4).partial_trace_second(2, 2).unwrap();
        assert!(tr2.max_abs_diff(&CMatrix::identity(2).scale(C64::new(2.0, 0.0))) < 1e-15);
    }

    #[test]
    fn partial_trace_of_projector() {
        // |01><01| traced over the first qubit leaves |1><1|.
        let v = CMatrix::basis_vector(4, 1);
        let proj = v.outer(&v);
        let out = proj.partial_trace_first(2, 2).unwrap();
        let e1 = CMatrix::basis_vector(2, 1);
        assert!(out.max_abs_diff(&e1.outer(&e1)) < 1e-15);
    }

    #[test]
    fn partial_trace_factorizes() {
        let mut rng = StdRng::seed_from_u64(9);
        let a = random_matrix(&mut rng, 3, 3);
        let b = random_matrix(&mut rng, 2, 2);
        let lhs = a.kron(&b).partial_trace_second(3, 2).unwrap();
        let rhs = a.scale(b.trace());
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let lhs1 = a.kron(&b).partial_trace_first(3, 2).unwrap();
        let rhs1 = b.scale(a.trace());
        assert!(lhs1.max_abs_diff(&rhs1) < 1e-12);
    }

    #[test]
    fn partial_trace_dimension_error() {
        assert!(CMatrix::identity(6).partial_trace_first(2, 2).is_err());
        assert!(CMatrix::zeros(4, 2).partial_trace_first(2, 2).is_err());
    }

    #[test]
    fn pauli_z_eigenvalues() {
        let z = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let e = z.hermitian_eigenvalues().unwrap();
        assert!((e[0] + 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_matches_trace_and_psd() {
        let mut rng = StdRng::seed_from_u64(10);
        for n in [2usize, 3, 5, 8] {
            let g = random_matrix(&mut rng, n, n);
            let h = g.add(&g.dagger());
            let eigs = h.hermitian_eigenvalues().unwrap();
            let tr: f64 = eigs.iter().sum();
            assert!((tr - h.trace().re).abs() < 1e-10);
            // G G^dagger is PSD with eigenvalue sum = ||G||_F^2.
            let p = g.mul(&g.dagger());
            let pe = p.hermitian_eigenvalues().unwrap();
            assert!(pe[0] > -1e-12);
            assert!((pe.iter().sum::<f64>() - g.norm() * g.norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn jacobi_known_complex_matrix() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let mut h = CMatrix::zeros(2, 2);
        h.set(0, 0, C64::new(2.0, 0.0));
        h.set(0, 1, C64::new(0.0, 1.0));
        h.set(1, 0, C64::new(0.0, -1.0));
        h.set(1, 1, C64::new(2.0, 0.0));
        let e = h.hermitian_eigenvalues().unwrap();
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn determinant_2x2_and_inverse() {
        let mut rng = StdRng::seed_from_u64(11);
        let m = random_matrix(&mut rng, 2, 2);
        let det = m.det();
        let direct = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
        assert!((det - direct).norm() < 1e-12);
        let inv = m.inverse_2x2().unwrap();
        assert!(m.mul(&inv).max_abs_diff(&CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let mut rng = StdRng::seed_from_u64(12);
        let m = random_matrix(&mut rng, 3, 2);
        let back = CMatrix::from_json(&m.to_json()).unwrap();
        assert!(m.max_abs_diff(&back) == 0.0);
    }
}
