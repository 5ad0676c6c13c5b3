//! Exact Choi matrices of channels for symmetric self-dual Boolean
//! functions: optimal channels hitting a prescribed per-weight fidelity
//! vector, and ideal (generally non-physical) extensions with fidelity
//! one everywhere.
//!
//! Method: a permutation-invariant Choi matrix on one output qubit and n
//! input qubits decomposes into four blocks J^{ab}, each a combination of
//! the orbit sums of |x><y| under simultaneous bit permutations. The
//! fidelity requirement on one representative input per Hamming weight,
//! expanded symbolically over the Bloch sphere and reduced modulo
//! x^2 + y^2 + z^2 - 1, pins every orbit coefficient through a small
//! exact linear system per block.

use num::One;

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::exact::{factorial, rat, rationalize, Rat};
use crate::fidopt::BoolFn;
use crate::poly::{solve_unique, CRat, Poly3};
use crate::qmat::QMatrix;
use crate::schur::{gamma_blocks, SchurBasis};
use crate::tol;

/// Largest supported bit count; the orbit systems stay small but the
/// output matrix is dense of dimension 2^(n+1).
pub const MAX_SYNTH_BITS: usize = 5;

/// An exact synthesized Choi matrix.
#[derive(Clone, Debug)]
pub struct ChoiResult {
    /// The Choi matrix, dimension 2^(n+1), output qubit first.
    pub matrix: QMatrix,
    /// Whether the matrix is positive semidefinite (checked in floats).
    pub is_cp: bool,
    /// The per-weight fidelities the synthesis imposed.
    pub fidelities: Vec<Rat>,
}

/// Orbit label of a pair (x, y) under simultaneous bit permutation:
/// counts of positions with (x_i, y_i) = (0,0), (0,1), (1,0), (1,1).
fn pair_type(n: usize, x: usize, y: usize) -> (usize, usize, usize, usize) {
    let mut t = (0usize, 0usize, 0usize, 0usize);
    for i in 0..n {
        match ((x >> i) & 1, (y >> i) & 1) {
            (0, 0) => t.0 += 1,
            (0, 1) => t.1 += 1,
            (1, 0) => t.2 += 1,
            (1, 1) => t.3 += 1,
            _ => unreachable!(),
        }
    }
    t
}

fn all_types(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for n00 in 0..=n {
        for n01 in 0..=n - n00 {
            for n10 in 0..=n - n00 - n01 {
                out.push((n00, n01, n10, n - n00 - n01 - n10));
            }
        }
    }
    out
}

/// Entries of the single-qubit Bloch-parameterized state as polynomials:
/// rho = (1/2) [[1+z, x-iy], [x+iy, 1-z]]; `flip` negates the Bloch vector.
fn bloch_entry(row: usize, col: usize, flip: bool) -> Poly3 {
    let half = CRat::real(rat(1, 2));
    let sign = if flip { -Rat::one() } else { Rat::one() };
    let mut p = Poly3::zero();
    match (row, col) {
        (0, 0) => {
            p.add_term((0, 0, 0), half.clone());
            p.add_term((0, 0, 1), CRat::real(&sign * rat(1, 2)));
        }
        (1, 1) => {
            p.add_term((0, 0, 0), half.clone());
            p.add_term((0, 0, 1), CRat::real(&sign * rat(-1, 2)));
        }
        (0, 1) => {
            p.add_term((1, 0, 0), CRat::real(&sign * rat(1, 2)));
            p.add_term((0, 1, 0), CRat::imaginary(&sign * rat(-1, 2)));
        }
        (1, 0) => {
            p.add_term((1, 0, 0), CRat::real(&sign * rat(1, 2)));
            p.add_term((0, 1, 0), CRat::imaginary(&sign * rat(1, 2)));
        }
        _ => unreachable!(),
    }
    p
}

/// Sum over the orbit of pair type `t` of the entry products
/// prod_i rho(s_i r)_{x_i y_i} on the representative input
/// s = 0^(n-h) 1^h, as an exact polynomial in the Bloch coordinates.
fn orbit_polynomial(n: usize, h: usize, t: (usize, usize, usize, usize)) -> Poly3 {
    let (t00, t01, t10, t11) = t;
    let group0 = n - h;
    let mut total = Poly3::zero();
    // Split each pair count between the s=0 group and the s=1 group.
    for j00 in 0..=t00 {
        for j01 in 0..=t01 {
            for j10 in 0..=t10 {
                for j11 in 0..=t11 {
                    if j00 + j01 + j10 + j11 != group0 {
                        continue;
                    }
                    let ways0 = multinomial(group0, &[j00, j01, j10, j11]);
                    let ways1 = multinomial(h, &[t00 - j00, t01 - j01, t10 - j10, t11 - j11]);
                    let count = CRat::real(Rat::new(ways0 * ways1, 1.into()));
                    let mut term = Poly3::constant(count);
                    for (pt, (jj, tt)) in [
                        ((0usize, 0usize), (j00, t00)),
                        ((0, 1), (j01, t01)),
                        ((1, 0), (j10, t10)),
                        ((1, 1), (j11, t11)),
                    ] {
                        if jj > 0 {
                            term = term.mul(&bloch_entry(pt.0, pt.1, false).pow(jj));
                        }
                        if tt - jj > 0 {
                            term = term.mul(&bloch_entry(pt.0, pt.1, true).pow(tt - jj));
                        }
                    }
                    total = total.add(&term);
                }
            }
        }
    }
    total
}

fn multinomial(n: usize, parts: &[usize]) -> num::BigInt {
    debug_assert_eq!(parts.iter().sum::<usize>(), n);
    let mut acc = factorial(n);
    for &p in parts {
        acc /= factorial(p);
    }
    acc
}

/// Synthesizes the exact Choi matrix of the permutation-invariant,
/// unitary-equivariant map achieving fidelity `c[h]` on inputs of Hamming
/// weight h (and, by self-duality, on the mirrored weights). The result
/// is completely positive exactly when `c` is feasible.
pub fn synthesize_choi(n: usize, f: &BoolFn, c: &[Rat]) -> Result<ChoiResult> {
    if n.is_multiple_of(2) || n == 0 || n > MAX_SYNTH_BITS {
        return Err(Error::UnsupportedSize(format!(
            "synthesis supports odd n up to {MAX_SYNTH_BITS}, got {n}"
        )));
    }
    if f.n() != n {
        return Err(Error::DimensionMismatch("function arity".into()));
    }
    if c.len() != n / 2 + 1 {
        return Err(Error::DimensionMismatch(format!(
            "need {} fidelities, got {}",
            n / 2 + 1,
            c.len()
        )));
    }
    let types = all_types(n);
    let dim = 1usize << n;

    // Per output entry (a, b), the orbit coefficients solve a linear
    // system collected over all weights and reduced monomials.
    let mut alpha: Vec<Vec<CRat>> = Vec::with_capacity(4);
    for a in 0..2usize {
        for b in 0..2usize {
            // Precompute, per weight h, the orbit polynomials (shared
            // between the four blocks) lazily: they depend only on h, t.
            let mut rows: Vec<Vec<CRat>> = Vec::new();
            let mut rhs: Vec<CRat> = Vec::new();
            for h in 0..=n / 2 {
                let column_polys: Vec<Poly3> = types
                    .iter()
                    .map(|&t| orbit_polynomial(n, h, t).reduce_sphere())
                    .collect();
                // Target: rho(gamma r)_{a,b} with gamma = (2 c_h - 1) (-1)^fbar(h).
                let gamma = (rat(2, 1) * &c[h] - Rat::one())
                    * if f.value(h) { -Rat::one() } else { Rat::one() };
                let target = scale_bloch_entry(a, b, &gamma);
                // Collect every monomial appearing anywhere.
                let mut monomials: std::collections::BTreeSet<(u16, u16, u16)> =
                    std::collections::BTreeSet::new();
                for p in &column_polys {
                    monomials.extend(p.terms().map(|(m, _)| *m));
                }
                monomials.extend(target.terms().map(|(m, _)| *m));
                for m in monomials {
                    let row: Vec<CRat> = column_polys
                        .iter()
                        .map(|p| {
                            p.terms()
                                .find(|(mm, _)| **mm == m)
                                .map(|(_, c)| c.clone())
                                .unwrap_or_else(CRat::zero)
                        })
                        .collect();
                    let t = target
                        .terms()
                        .find(|(mm, _)| **mm == m)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(CRat::zero);
                    rows.push(row);
                    rhs.push(t);
                }
            }
            alpha.push(solve_unique(rows, rhs)?);
        }
    }

    // Assemble J: entry ((a, x), (b, y)) = alpha^{ab}_{type(x,y)}.
    let mut type_index = std::collections::HashMap::new();
    for (i, t) in types.iter().enumerate() {
        type_index.insert(*t, i);
    }
    let mut j = QMatrix::zeros(2 * dim, 2 * dim);
    for a in 0..2usize {
        for b in 0..2usize {
            let coeffs = &alpha[a * 2 + b];
            for x in 0..dim {
                for y in 0..dim {
                    let idx = type_index[&pair_type(n, x, y)];
                    let v = &coeffs[idx];
                    if !v.is_real() {
                        return Err(Error::LinearSystem(
                            "synthesized Choi matrix has a non-real entry".into(),
                        ));
                    }
                    j.set(a * dim + x, b * dim + y, v.re.clone());
                }
            }
        }
    }

    let float = j.to_cmatrix();
    let min_eig = float.hermitian_eigenvalues()?[0];
    Ok(ChoiResult {
        matrix: j,
        is_cp: min_eig >= tol::CP_MIN_EIG,
        fidelities: c.to_vec(),
    })
}

fn scale_bloch_entry(row: usize, col: usize, gamma: &Rat) -> Poly3 {
    // rho(gamma r): the Bloch vector scales linearly.
    let g = CRat::real(gamma.clone());
    let mut p = Poly3::zero();
    match (row, col) {
        (0, 0) => {
            p.add_term((0, 0, 0), CRat::real(rat(1, 2)));
            p.add_term((0, 0, 1), g.mul(&CRat::real(rat(1, 2))));
        }
        (1, 1) => {
            p.add_term((0, 0, 0), CRat::real(rat(1, 2)));
            p.add_term((0, 0, 1), g.mul(&CRat::real(rat(-1, 2))));
        }
        (0, 1) => {
            p.add_term((1, 0, 0), g.mul(&CRat::real(rat(1, 2))));
            p.add_term((0, 1, 0), g.mul(&CRat::imaginary(rat(-1, 2))));
        }
        (1, 0) => {
            p.add_term((1, 0, 0), g.mul(&CRat::real(rat(1, 2))));
            p.add_term((0, 1, 0), g.mul(&CRat::imaginary(rat(1, 2))));
        }
        _ => unreachable!(),
    }
    p
}

/// Choi matrix of the ideal (fidelity-one) extension; not completely
/// positive except for the single-bit identity.
pub fn ideal_choi(n: usize, f: &BoolFn) -> Result<ChoiResult> {
    let ones = vec![Rat::one(); n / 2 + 1];
    synthesize_choi(n, f, &ones)
}

/// The closed-form parameter vector conjectured to make every per-weight
/// fidelity equal to one once the box constraints are dropped.
pub fn conjectured_ideal_t(n: usize, f: &BoolFn, k: usize) -> Result<Rat> {
    if n.is_multiple_of(2) || n == 0 || f.n() != n {
        return Err(Error::InvalidArgument("odd n matching f required".into()));
    }
    if k > n / 2 {
        return Err(Error::IndexOutOfRange(format!("k = {k} exceeds floor(n/2)")));
    }
    let sign = |bit: bool| if bit { -Rat::one() } else { Rat::one() };
    let (nf, kf) = (n as i64, k as i64);
    let d = nf - 2 * kf + 1;
    let mut t = rat(nf - 2 * kf, 2 * d);
    if k > 0 {
        // The k = 0 case never evaluates fbar(-1): its term carries a
        // factor of k.
        t -= rat(kf * (nf - 2 * kf), 2 * d * d) * sign(f.value(k - 1));
    }
    t += rat((nf - kf + 1) * (nf - 2 * kf + 2), 2 * d * d) * sign(f.value(k));
    Ok(t)
}

/// Choi matrix of the two-stage algorithm at parameters `t`, computed by
/// pushing all matrix units through the floating-point pre-processing and
/// per-block channels, then reconstructing exact rationals entry by
/// entry. Agreement with [`synthesize_choi`] at the matching fidelity
/// vector is the cross-representation consistency check.
pub fn assemble_choi_from_template(
    basis: &SchurBasis,
    t: &[Rat],
    f: &BoolFn,
) -> Result<QMatrix> {
    let n = basis.n();
    if n > MAX_SYNTH_BITS {
        return Err(Error::UnsupportedSize(format!(
            "template assembly supports n up to {MAX_SYNTH_BITS}"
        )));
    }
    if f.n() != n || t.len() != n / 2 + 1 {
        return Err(Error::DimensionMismatch("parameter vector arity".into()));
    }
    let tf: Vec<f64> = t.iter().map(crate::exact::rat_to_f64).collect();
    let dim = 1usize << n;
    let mut j_float = CMatrix::zeros(2 * dim, 2 * dim);
    for i in 0..dim {
        for k in 0..dim {
            let mut unit = CMatrix::zeros(dim, dim);
            unit.set(i, k, num_complex::Complex64::new(1.0, 0.0));
            let out = apply_template_superop(basis, &tf, &unit)?;
            for a in 0..2 {
                for b in 0..2 {
                    j_float.set(a * dim + i, b * dim + k, out.get(a, b));
                }
            }
        }
    }
    let mut j = QMatrix::zeros(2 * dim, 2 * dim);
    for r in 0..2 * dim {
        for c in 0..2 * dim {
            let v = j_float.get(r, c);
            if v.im.abs() > tol::RATIONALIZE {
                return Err(Error::Rationalize(format!(
                    "entry ({r},{c}) has imaginary part {}",
                    v.im
                )));
            }
            let Some(q) = rationalize(v.re, tol::RATIONALIZE_MAX_DEN, tol::RATIONALIZE) else {
                return Err(Error::Rationalize(format!(
                    "entry ({r},{c}) = {} is not near a small rational",
                    v.re
                )));
            };
            j.set(r, c, q);
        }
    }
    Ok(j)
}

/// Linear action of the two-stage algorithm on an arbitrary operator
/// (not necessarily a state): per-block CP maps followed by the
/// parameter mixture of extremal channels.
fn apply_template_superop(basis: &SchurBasis, t: &[f64], m: &CMatrix) -> Result<CMatrix> {
    use crate::channels::{apply_extremal, Extremal};
    let mut out = CMatrix::zeros(2, 2);
    for (partition, block) in gamma_blocks(basis, m)? {
        let l = partition.ell();
        if l == 0 {
            continue; // absent for odd n
        }
        let tk = t[partition.lambda2()];
        let tr_part = apply_extremal(l, Extremal::Tr, &block)?;
        let unot_part = apply_extremal(l, Extremal::Unot, &block)?;
        out = out.add(&tr_part.scale(num_complex::Complex64::new(tk, 0.0)));
        out = out.add(&unot_part.scale(num_complex::Complex64::new(1.0 - tk, 0.0)));
    }
    Ok(out)
}
