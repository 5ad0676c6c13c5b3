//! Trivariate polynomials over complex rationals, with reduction modulo
//! x^2 + y^2 + z^2 - 1, plus exact Gaussian elimination over the complex
//! rationals. Support machinery for the Choi-matrix synthesis.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rat;

/// A complex number with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn zero() -> Self {
        CRat {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }

    pub fn one() -> Self {
        CRat {
            re: Rat::one(),
            im: Rat::zero(),
        }
    }

    pub fn real(r: Rat) -> Self {
        CRat {
            re: r,
            im: Rat::zero(),
        }
    }

    pub fn imaginary(r: Rat) -> Self {
        CRat {
            re: Rat::zero(),
            im: r,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, other: &CRat) -> CRat {
        CRat {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &CRat) -> CRat {
        CRat {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn mul(&self, other: &CRat) -> CRat {
        CRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn neg(&self) -> CRat {
        CRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn inv(&self) -> Result<CRat> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return Err(Error::LinearSystem("division by zero".into()));
        }
        Ok(CRat {
            re: &self.re / &norm,
            im: -(&self.im / &norm),
        })
    }
}

/// Monomial exponents (x, y, z).
pub type Monomial = (u16, u16, u16);

/// A polynomial in x, y, z with complex rational coefficients, kept in a
/// sorted map for deterministic iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly3 {
    terms: BTreeMap<Monomial, CRat>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Poly3 {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CRat) -> Self {
        let mut p = Poly3::zero();
        p.add_term((0, 0, 0), c);
        p
    }

    pub fn monomial(m: Monomial, c: CRat) -> Self {
        let mut p = Poly3::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: CRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(CRat::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.neg());
        }
        out
    }

    pub fn scale(&self, c: &CRat) -> Poly3 {
        let mut out = Poly3::zero();
        for (m, coeff) in &self.terms {
            out.add_term(*m, coeff.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term((m1.0 + m2.0, m1.1 + m2.1, m1.2 + m2.2), c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Poly3 {
        let mut out = Poly3::constant(CRat::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rewrites z^2 -> 1 - x^2 - y^2 until every z-degree is 0 or 1.
    pub fn reduce_sphere(&self) -> Poly3 {
        // 1 - x^2 - y^2
        let mut replacement = Poly3::constant(CRat::one());
        replacement.add_term((2, 0, 0), CRat::real(-Rat::one()));
        replacement.add_term((0, 2, 0), CRat::real(-Rat::one()));

        let mut out = Poly3::zero();
        for (&(x, y, z), c) in &self.terms {
            if z < 2 {
                out.add_term((x, y, z), c.clone());
                continue;
            }
            let reduced = replacement
                .pow((z / 2) as usize)
                .mul(&Poly3::monomial((x, y, z % 2), c.clone()));
            out = out.add(&reduced);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CRat)> {
        self.terms.iter()
    }
}

/// Solves an overdetermined exact linear system `A x = b` that must have
/// a unique solution; reports rank deficiency or inconsistency instead of
/// regularizing.
pub fn solve_unique(mut a: Vec<Vec<CRat>>, mut b: Vec<CRat>) -> Result<Vec<CRat>> {
    let rows = a.len();
    if rows == 0 {
        return Err(Error::LinearSystem("no equations".into()));
    }
    let cols = a[0].len();
    if rows < cols {
        return Err(Error::LinearSystem(format!(
            "underdetermined: {rows} equations, {cols} unknowns"
        )));
    }
    let mut pivot_row = 0usize;
    let mut pivots = Vec::with_capacity(cols);
    for col in 0..cols {
        // Find a nonzero pivot at or below pivot_row.
        let Some(found) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
            return Err(Error::LinearSystem(format!(
                "rank-deficient system: no pivot for unknown {col}"
            )));
        };
        a.swap(pivot_row, found);
        b.swap(pivot_row, found);
        let inv = a[pivot_row][col].inv()?;
        for j in col..cols {
            a[pivot_row][j] = a[pivot_row][j].mul(&inv);
        }
        b[pivot_row] = b[pivot_row].mul(&inv);
        for r in 0..rows {
            if r == pivot_row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in col..cols {
                let delta = factor.mul(&a[pivot_row][j]);
                a[r][j] = a[r][j].sub(&delta);
            }
            let delta = factor.mul(&b[pivot_row]);
            b[r] = b[r].sub(&delta);
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    // All remaining rows must have vanished.
    for r in pivot_row..rows {
        if !b[r].is_zero() || a[r].iter().any(|c| !c.is_zero()) {
            return Err(Error::LinearSystem("inconsistent system".into()));
        }
    }
    Ok(b.into_iter().take(cols).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn c(re: i64, im: i64) -> CRat {
        CRat {
            re: rat_int(re),
            im: rat_int(im),
        }
    }

    #[test]
    fn complex_field_ops() {
        let z = c(3, 4);
        let w = z.inv().unwrap();
        assert_eq!(z.mul(&w), CRat::one());
        assert!(c(0, 0).inv().is_err());
        assert_eq!(c(1, 2).mul(&c(3, -1)), c(5, 5));
    }

    #[test]
    fn sphere_reduction() {
        // z^2 -> 1 - x^2 - y^2.
        let p = Poly3::monomial((0, 0, 2), CRat::one()).reduce_sphere();
        let mut expected = Poly3::constant(CRat::one());
        expected.add_term((2, 0, 0), c(-1, 0));
        expected.add_term((0, 2, 0), c(-1, 0));
        assert_eq!(p, expected);
        // z^3 -> z (1 - x^2 - y^2).
        let p = Poly3::monomial((0, 0, 3), CRat::one()).reduce_sphere();
        let mut expected = Poly3::monomial((0, 0, 1), CRat::one());
        expected.add_term((2, 0, 1), c(-1, 0));
        expected.add_term((0, 2, 1), c(-1, 0));
        assert_eq!(p, expected);
        // A reduced polynomial evaluates identically on the sphere.
        let q = Poly3::monomial((1, 2, 4), c(2, 1));
        let r = q.reduce_sphere();
        let (x, y) = (0.6f64, 0.48f64);
        let z = (1.0 - x * x - y * y).sqrt();
        let eval = |p: &Poly3| -> (f64, f64) {
            let mut re = 0.0;
            let mut im = 0.0;
            for (&(a, b, e), coeff) in p.terms() {
                let v = x.powi(a as i32) * y.powi(b as i32) * z.powi(e as i32);
                re += crate::exact::rat_to_f64(&coeff.re) * v;
                im += crate::exact::rat_to_f64(&coeff.im) * v;
            }
            (re, im)
        };
        let (r1, i1) = eval(&q);
        let (r2, i2) = eval(&r);
        assert!((r1 - r2).abs() < 1e-12 && (i1 - i2).abs() < 1e-12);
    }

    #[test]
    fn unique_solve() {
        // x + iy = 1+i, x - iy = 1-i  =>  x = 1, y = 1.
        let a = vec![
            vec![c(1, 0), c(0, 1)],
            vec![c(1, 0), c(0, -1)],
            vec![c(2, 0), c(0, 0)], // redundant consistent row
        ];
        let b = vec![c(1, 1), c(1, -1), c(2, 0)];
        let x = solve_unique(a, b).unwrap();
        assert_eq!(x, vec![c(1, 0), c(1, 0)]);
    }

    #[test]
    fn solve_detects_deficiency_and_inconsistency() {
        // Rank deficient.
        let a = vec![vec![c(1, 0), c(1, 0)], vec![c(2, 0), c(2, 0)]];
        let b = vec![c(1, 0), c(2, 0)];
        assert!(solve_unique(a, b).is_err());
        // Inconsistent.
        let a = vec![vec![c(1, 0)], vec![c(1, 0)]];
        let b = vec![c(1, 0), c(2, 0)];
        assert!(solve_unique(a, b).is_err());
    }

    #[test]
    fn rational_coefficients_survive() {
        let a = vec![vec![CRat::real(rat(1, 3))]];
        let b = vec![CRat::real(rat(8, 9))];
        assert_eq!(solve_unique(a, b).unwrap(), vec![CRat::real(rat(8, 3))]);
    }
}
