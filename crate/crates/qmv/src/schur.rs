//! Explicit Schur basis of the n-qubit space (n <= 8), the associated
//! Schur transform, weak Schur sampling, the generic pre-processing
//! channel, and its inverse on symmetric inputs.
//!
//! Basis layout: blocks ordered by descending first row of the partition;
//! within a block the row index is `w * d + i` for unitary-register value
//! `w` and permutation-register value `i`.

use num::{BigInt, One, Zero};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::cmat::{C64, CMatrix};
use crate::error::{Error, Result};
use crate::exact::{binomial, Rat};
use crate::rep2::{dicke_state, Partition};
use crate::tol;

/// Largest qubit count supported by the explicit n!-permutation
/// construction.
pub const MAX_QUBITS: usize = 8;

/// One isotypic block of the Schur basis.
#[derive(Clone, Debug)]
pub struct SchurBlock {
    pub partition: Partition,
    pub row_offset: usize,
    /// Basis vectors indexed `[w][i]`, each of dimension 2^n.
    pub vectors: Vec<Vec<CMatrix>>,
}

/// Schur basis of the n-qubit space together with the basis-change matrix.
#[derive(Clone, Debug)]
pub struct SchurBasis {
    n: usize,
    blocks: Vec<SchurBlock>,
    u_sch: CMatrix,
}

/// One weak-Schur-sampling outcome of the pre-processing channel.
#[derive(Clone, Debug)]
pub struct PreprocessOutcome {
    pub partition: Partition,
    pub probability: f64,
    /// Normalized post-measurement state on the unitary register.
    pub state: CMatrix,
}

/// Permutation matrix on n qubits sending |x_1 ... x_n> to the state whose
/// i-th qubit is x_{perm^-1(i)}; `perm` is 0-based.
pub fn permutation_matrix(n: usize, perm: &[usize]) -> Result<CMatrix> {
    let map = permutation_index_map(n, perm)?;
    let dim = 1usize << n;
    let mut p = CMatrix::zeros(dim, dim);
    for (from, to) in map.iter().enumerate() {
        p.set(*to, from, C64::new(1.0, 0.0));
    }
    Ok(p)
}

/// Basis-index relabelling of [`permutation_matrix`]: entry `x` is the
/// index of P|x>.
fn permutation_index_map(n: usize, perm: &[usize]) -> Result<Vec<usize>> {
    if perm.len() != n {
        return Err(Error::InvalidArgument(format!(
            "permutation length {} does not match qubit count {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        seen[p] = true;
    }
    // Qubit i of the image holds qubit perm^-1(i) of the input, which
    // makes pi |-> P(pi) a homomorphism.
    let mut inverse = vec![0usize; n];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    let dim = 1usize << n;
    let mut map = vec![0usize; dim];
    for x in 0..dim {
        // Qubit i holds bit (n-1-i) of the index.
        let mut y = 0usize;
        for i in 0..n {
            let bit = (x >> (n - 1 - inverse[i])) & 1;
            y |= bit << (n - 1 - i);
        }
        map[x] = y;
    }
    Ok(map)
}

fn apply_perm_to_vector(map: &[usize], v: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(v.rows(), 1);
    for (from, &to) in map.iter().enumerate() {
        out.set(to, 0, v.get(from, 0));
    }
    out
}

/// All permutations of {0, .., n-1} in lexicographic order.
fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut all = vec![current.clone()];
    // Standard next-permutation steps until the order reverses.
    while let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) {
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
        all.push(current.clone());
    }
    all
}

/// Symmetrization over all qubit permutations: the average of
/// P(pi) rho P(pi)^dagger.
pub fn symmetrize(n: usize, rho: &CMatrix) -> Result<CMatrix> {
    if n > MAX_QUBITS {
        return Err(Error::UnsupportedSize(format!("symmetrize at n = {n}")));
    }
    let dim = 1usize << n;
    if !rho.is_square() || rho.rows() != dim {
        return Err(Error::DimensionMismatch("symmetrize input dimension".into()));
    }
    let perms = lex_permutations(n);
    let mut out = CMatrix::zeros(dim, dim);
    for perm in &perms {
        let map = permutation_index_map(n, perm)?;
        for i in 0..dim {
            for j in 0..dim {
                let v = out.get(map[i], map[j]) + rho.get(i, j);
                out.set(map[i], map[j], v);
            }
        }
    }
    Ok(out.scale(C64::new(1.0 / perms.len() as f64, 0.0)))
}

/// The seed vector of a block: Dicke state of weight `w` on the first
/// l qubits tensored with lambda2 singlet pairs.
pub fn base_vector(p: &Partition, w: usize) -> Result<CMatrix> {
    if w > p.ell() {
        return Err(Error::IndexOutOfRange(format!(
            "weight {w} exceeds l = {} of partition ({},{})",
            p.ell(),
            p.lambda1(),
            p.lambda2()
        )));
    }
    let mut singlet = CMatrix::zeros(4, 1);
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    singlet.set(1, 0, C64::new(inv_sqrt2, 0.0));
    singlet.set(2, 0, C64::new(-inv_sqrt2, 0.0));
    let mut v = dicke_state(p.ell(), w)?;
    for _ in 0..p.r() {
        v = v.kron(&singlet);
    }
    Ok(v)
}

impl SchurBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[SchurBlock] {
        &self.blocks
    }

    pub fn u_sch(&self) -> &CMatrix {
        &self.u_sch
    }

    pub fn vector(&self, block: usize, w: usize, i: usize) -> &CMatrix {
        &self.blocks[block].vectors[w][i]
    }

    /// Serialization: the transform in the complex matrix format plus a
    /// block manifest of (lambda1, lambda2, m, d, row_offset) tuples.
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "blocks": self.blocks.iter().map(|b| json!([
                b.partition.lambda1(),
                b.partition.lambda2(),
                b.partition.unitary_dim(),
                b.partition.permutation_dim(),
                b.row_offset,
            ])).collect::<Vec<_>>(),
            "u_sch": self.u_sch.to_json(),
        })
    }
}

/// Builds the Schur basis for `1 <= n <= 8`.
///
/// Per block, the permutation-register directions are fixed by a
/// deterministic Gram-Schmidt pass over `P(pi) |seed(w=0)>` with pi in
/// lexicographic order, dropping candidates whose residual falls under
/// [`tol::GRAM_SCHMIDT_RESIDUAL`]; the resulting combination coefficients
/// are then reused verbatim at every other weight, which keeps the basis
/// reproducible bit-for-bit across runs.
pub fn build_schur_basis(n: usize) -> Result<SchurBasis> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::UnsupportedSize(format!(
            "explicit Schur basis supports 1..={MAX_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let perms = lex_permutations(n);
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| permutation_index_map(n, p).expect("valid permutation"))
        .collect();

    let mut blocks = Vec::new();
    let mut row_offset = 0usize;
    for partition in Partition::all(n) {
        let m = partition.unitary_dim();
        let d = partition.permutation_dim();
        let seed0 = base_vector(&partition, 0)?;

        // Gram-Schmidt at w = 0, recording each accepted direction as a
        // combination of the accepted permutation images.
        let mut ortho: Vec<CMatrix> = Vec::with_capacity(d);
        let mut combos: Vec<Vec<(usize, f64)>> = Vec::with_capacity(d);
        for (pi_index, map) in maps.iter().enumerate() {
            if ortho.len() == d {
                break;
            }
            let mut candidate = apply_perm_to_vector(map, &seed0);
            let mut combo: Vec<(usize, f64)> = vec![(pi_index, 1.0)];
            // Two projection passes keep the set orthonormal to machine
            // precision.
            for _ in 0..2 {
                for (u, c) in ortho.iter().zip(combos.iter()) {
                    let overlap = u.vdot(&candidate);
                    debug_assert!(overlap.im.abs() < 1e-12);
                    let r = overlap.re;
                    if r == 0.0 {
                        continue;
                    }
                    candidate = candidate.sub(&u.scale(C64::new(r, 0.0)));
                    for &(idx, coeff) in c {
                        combo.push((idx, -r * coeff));
                    }
                }
            }
            let norm = candidate.vdot(&candidate).re.sqrt();
            if norm < tol::GRAM_SCHMIDT_RESIDUAL {
                continue;
            }
            candidate = candidate.scale(C64::new(1.0 / norm, 0.0));
            for entry in combo.iter_mut() {
                entry.1 /= norm;
            }
            ortho.push(candidate);
            combos.push(merge_combo(combo));
        }
        if ortho.len() != d {
            return Err(Error::InvalidState(format!(
                "block ({},{}) spanned only {} of {} directions",
                partition.lambda1(),
                partition.lambda2(),
                ortho.len(),
                d
            )));
        }

        // Reuse the same combination coefficients at every weight.
        let mut vectors: Vec<Vec<CMatrix>> = Vec::with_capacity(m);
        for w in 0..m {
            let seed = base_vector(&partition, w)?;
            let images: Vec<Option<CMatrix>> = {
                // Permutation images are only needed at indices that appear.
                let mut needed = vec![false; maps.len()];
                for combo in &combos {
                    for &(idx, _) in combo {
                        needed[idx] = true;
                    }
                }
                needed
                    .iter()
                    .enumerate()
                    .map(|(idx, &used)| used.then(|| apply_perm_to_vector(&maps[idx], &seed)))
                    .collect()
            };
            let mut per_weight = Vec::with_capacity(d);
            for combo in &combos {
                let mut v = CMatrix::zeros(dim, 1);
                for &(idx, coeff) in combo {
                    v = v.add(&images[idx].as_ref().unwrap().scale(C64::new(coeff, 0.0)));
                }
                per_weight.push(v);
            }
            vectors.push(per_weight);
        }

        blocks.push(SchurBlock {
            partition,
            row_offset,
            vectors,
        });
        row_offset += m * d;
    }
    debug_assert_eq!(row_offset, dim);

    // Assemble the transform: row (offset + w*d + i) = <(lambda, w, i)|.
    let mut u_sch = CMatrix::zeros(dim, dim);
    for block in &blocks {
        let d = block.partition.permutation_dim();
        for (w, family) in block.vectors.iter().enumerate() {
            for (i, v) in family.iter().enumerate() {
                let row = block.row_offset + w * d + i;
                for col in 0..dim {
                    u_sch.set(row, col, v.get(col, 0).conj());
                }
            }
        }
    }
    Ok(SchurBasis { n, blocks, u_sch })
}

fn merge_combo(combo: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    let mut acc: std::collections::BTreeMap<usize, f64> = std::collections::BTreeMap::new();
    for (idx, coeff) in combo {
        *acc.entry(idx).or_insert(0.0) += coeff;
    }
    acc.into_iter().filter(|(_, c)| *c != 0.0).collect()
}

/// Probability of weak-Schur-sampling outcome (n - lambda2, lambda2) on a
/// standard-basis input of Hamming weight `h`, as an exact rational.
pub fn outcome_probability(n: usize, lambda2: usize, h: usize) -> Result<Rat> {
    if h > n || lambda2 > n / 2 {
        return Err(Error::IndexOutOfRange(format!(
            "outcome ({}, {lambda2}) on weight {h} of {n}",
            n - lambda2
        )));
    }
    if lambda2 > h.min(n - h) {
        return Ok(Rat::zero());
    }
    let num = binomial(n, lambda2 as isize) - binomial(n, lambda2 as isize - 1);
    Ok(Rat::new(num, binomial(n, h as isize)))
}

/// The unnormalized per-block CP maps of the pre-processing channel:
/// project onto each isotypic block in the Schur basis and trace out the
/// permutation register. Trace of each output is the outcome probability.
pub fn gamma_blocks(basis: &SchurBasis, rho: &CMatrix) -> Result<Vec<(Partition, CMatrix)>> {
    let dim = 1usize << basis.n;
    if !rho.is_square() || rho.rows() != dim {
        return Err(Error::DimensionMismatch(format!(
            "pre-processing input should be {dim}x{dim}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let hat = basis.u_sch.mul(rho).mul(&basis.u_sch.dagger());
    let mut out = Vec::new();
    for block in &basis.blocks {
        let m = block.partition.unitary_dim();
        let d = block.partition.permutation_dim();
        let o = block.row_offset;
        let mut reduced = CMatrix::zeros(m, m);
        for w in 0..m {
            for v in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..d {
                    acc += hat.get(o + w * d + i, o + v * d + i);
                }
                reduced.set(w, v, acc);
            }
        }
        out.push((block.partition, reduced));
    }
    Ok(out)
}

/// Weak Schur sampling of a density matrix: the measurement outcomes with
/// their probabilities and normalized post-states. Outcomes below
/// [`tol::PROB_FLOOR`] are dropped (their post-states are undefined).
pub fn preprocess(basis: &SchurBasis, rho: &CMatrix) -> Result<Vec<PreprocessOutcome>> {
    let mut outcomes = Vec::new();
    for (partition, reduced) in gamma_blocks(basis, rho)? {
        let p = reduced.trace().re;
        if p <= tol::PROB_FLOOR {
            continue;
        }
        outcomes.push(PreprocessOutcome {
            partition,
            probability: p,
            state: reduced.scale(C64::new(1.0 / p, 0.0)),
        });
    }
    Ok(outcomes)
}

/// Inverse of the pre-processing on symmetric inputs: re-attach a
/// maximally mixed permutation register to each outcome and undo the
/// Schur transform.
pub fn preprocess_inverse(basis: &SchurBasis, outcomes: &[PreprocessOutcome]) -> Result<CMatrix> {
    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "outcome probabilities sum to {total}, not 1"
        )));
    }
    let dim = 1usize << basis.n;
    let mut hat = CMatrix::zeros(dim, dim);
    for outcome in outcomes {
        let block = basis
            .blocks
            .iter()
            .find(|b| b.partition == outcome.partition)
            .ok_or_else(|| Error::InvalidArgument("outcome partition not in basis".into()))?;
        let m = block.partition.unitary_dim();
        let d = block.partition.permutation_dim();
        if outcome.state.rows() != m || !outcome.state.is_square() {
            return Err(Error::DimensionMismatch("outcome state dimension".into()));
        }
        let weight = outcome.probability / d as f64;
        let o = block.row_offset;
        for w in 0..m {
            for v in 0..m {
                let val = outcome.state.get(w, v) * weight;
                for i in 0..d {
                    hat.set(o + w * d + i, o + v * d + i, val);
                }
            }
        }
    }
    Ok(basis.u_sch.dagger().mul(&hat).mul(&basis.u_sch))
}

/// Exact dimension bookkeeping: sum over blocks of m * d equals 2^n.
pub fn dimension_identity_holds(n: usize) -> bool {
    let total: BigInt = Partition::all(n)
        .iter()
        .map(|p| BigInt::from(p.unitary_dim()) * BigInt::from(p.permutation_dim()))
        .sum();
    total == BigInt::one() << n
}
