//! Irreducible representations of 2x2 matrices on homogeneous polynomial
//! spaces, and the symmetric-subspace constructions attached to them:
//! Dicke states, the symmetrizing isometry, coherent states, and the
//! symmetric-subspace projector.
//!
//! All binomial and factorial data is computed in exact integers; doubles
//! appear only under the final square root. The basis of the spin-`l`
//! representation is indexed by `k = 0..l`, with `k` the y-degree of the
//! monomial `x^(l-k) y^k` (equivalently the Dicke Hamming weight). The
//! whole crate relies on this single ordering.

use num::{BigInt, One, Zero};

use crate::cmat::{C64, CMatrix};
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, rat_to_f64, Rat};

/// Two-row partition (lambda1, lambda2) of n = lambda1 + lambda2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    lambda1: usize,
    lambda2: usize,
}

impl Partition {
    pub fn new(lambda1: usize, lambda2: usize) -> Result<Self> {
        if lambda1 < lambda2 {
            return Err(Error::InvalidArgument(format!(
                "partition rows must be weakly decreasing, got ({lambda1},{lambda2})"
            )));
        }
        Ok(Partition { lambda1, lambda2 })
    }

    pub fn lambda1(&self) -> usize {
        self.lambda1
    }

    pub fn lambda2(&self) -> usize {
        self.lambda2
    }

    /// Number of boxes n = lambda1 + lambda2.
    pub fn n(&self) -> usize {
        self.lambda1 + self.lambda2
    }

    /// Row difference l = lambda1 - lambda2.
    pub fn ell(&self) -> usize {
        self.lambda1 - self.lambda2
    }

    /// Second-row length r = lambda2.
    pub fn r(&self) -> usize {
        self.lambda2
    }

    /// Dimension of the unitary register, m = l + 1.
    pub fn unitary_dim(&self) -> usize {
        self.ell() + 1
    }

    /// Dimension of the permutation register,
    /// d = C(n, lambda1) (lambda1 - lambda2 + 1) / (lambda1 + 1), exactly.
    pub fn permutation_dim(&self) -> usize {
        let num = binomial(self.n(), self.lambda1 as isize) * BigInt::from(self.unitary_dim());
        let den = BigInt::from(self.lambda1 + 1);
        let (q, r) = num::Integer::div_rem(&num, &den);
        debug_assert!(r.is_zero());
        q.try_into().expect("permutation register dimension overflow")
    }

    /// All two-row partitions of n, ordered by descending first row.
    pub fn all(n: usize) -> Vec<Partition> {
        (0..=n / 2)
            .map(|k| Partition {
                lambda1: n - k,
                lambda2: k,
            })
            .collect()
    }
}

fn cpow(z: C64, k: usize) -> C64 {
    // Loop multiplication keeps the 0^0 = 1 convention.
    let mut acc = C64::new(1.0, 0.0);
    for _ in 0..k {
        acc *= z;
    }
    acc
}

/// Spin-`l` representation of an arbitrary 2x2 matrix: the (l+1)x(l+1)
/// matrix of its action on homogeneous degree-l bivariate polynomials in
/// the normalized monomial basis. `wigner_t(1, m) = m`.
pub fn wigner_t(l: usize, m: &CMatrix) -> CMatrix {
    assert_eq!((m.rows(), m.cols()), (2, 2), "wigner_t expects a 2x2 matrix");
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let mut out = CMatrix::zeros(l + 1, l + 1);
    for j in 0..=l {
        for k in 0..=l {
            let mut entry = C64::new(0.0, 0.0);
            let r_min = (l as isize - j as isize - k as isize).max(0) as usize;
            let r_max = (l - j).min(l - k);
            for r in r_min..=r_max {
                let s = l - j - r; // power of b
                let u = l - k - r; // power of c
                let v = j + k + r - l; // power of d
                // sqrt(j!(l-j)!k!(l-k)!) / (r! s! u! v!) as an exact ratio
                // under the square root.
                let num = factorial(j) * factorial(l - j) * factorial(k) * factorial(l - k);
                let den = factorial(r) * factorial(s) * factorial(u) * factorial(v);
                let coeff = rat_to_f64(&Rat::new(num, den.pow(2))).sqrt();
                entry += C64::new(coeff, 0.0) * cpow(a, r) * cpow(b, s) * cpow(c, u) * cpow(d, v);
            }
            out.set(j, k, entry);
        }
    }
    out
}

/// Irreducible U(2) representation labelled by a two-row partition:
/// det(M)^lambda2 * wigner_t(lambda1 - lambda2, M).
pub fn q_lambda(p: &Partition, m: &CMatrix) -> CMatrix {
    assert_eq!((m.rows(), m.cols()), (2, 2));
    let det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
    wigner_t(p.ell(), m).scale(cpow(det, p.r()))
}

/// Dicke state: normalized uniform superposition of the weight-`w`
/// computational basis states on `l` qubits. `l = 0` gives the scalar `[1]`.
pub fn dicke_state(l: usize, w: usize) -> Result<CMatrix> {
    if w > l {
        return Err(Error::IndexOutOfRange(format!(
            "Dicke weight {w} exceeds qubit count {l}"
        )));
    }
    let dim = 1usize << l;
    let amp = 1.0 / rat_to_f64(&Rat::new(binomial(l, w as isize), BigInt::one())).sqrt();
    let mut v = CMatrix::zeros(dim, 1);
    for x in 0..dim {
        if (x as u32).count_ones() as usize == w {
            v.set(x, 0, C64::new(amp, 0.0));
        }
    }
    Ok(v)
}

/// Isometry from C^(l+1) into the l-qubit symmetric subspace,
/// sending |k> to the Dicke state of weight k.
pub fn sym_isometry(l: usize) -> CMatrix {
    let dim = 1usize << l;
    let mut v = CMatrix::zeros(dim, l + 1);
    for k in 0..=l {
        let col = dicke_state(l, k).expect("weight in range");
        for i in 0..dim {
            v.set(i, k, col.get(i, 0));
        }
    }
    v
}

/// Coherent state: the spin-`l` image of a single-qubit pure state,
/// with components sqrt(C(l,k)) a^(l-k) c^k for psi = (a, c).
pub fn coherent_state(l: usize, psi: &CMatrix) -> CMatrix {
    assert_eq!((psi.rows(), psi.cols()), (2, 1));
    let (a, c) = (psi.get(0, 0), psi.get(1, 0));
    let mut v = CMatrix::zeros(l + 1, 1);
    for k in 0..=l {
        let coeff = rat_to_f64(&Rat::new(binomial(l, k as isize), BigInt::one())).sqrt();
        v.set(k, 0, C64::new(coeff, 0.0) * cpow(a, l - k) * cpow(c, k));
    }
    v
}

/// Projector onto the l-qubit symmetric subspace, sum_w |s_l(w)><s_l(w)|.
pub fn sym_projector(l: usize) -> CMatrix {
    let dim = 1usize << l;
    let mut p = CMatrix::zeros(dim, dim);
    // <x| Pi |y> = delta_{|x|,|y|} / C(l, |x|); avoids forming each Dicke state.
    for x in 0..dim {
        let wx = (x as u32).count_ones() as usize;
        let inv = 1.0 / rat_to_f64(&Rat::new(binomial(l, wx as isize), BigInt::one()));
        for y in 0..dim {
            if (y as u32).count_ones() as usize == wx {
                p.set(x, y, C64::new(inv, 0.0));
            }
        }
    }
    p
}
