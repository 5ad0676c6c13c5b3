//! Clebsch-Gordan transform coupling the defining 2-dimensional
//! representation (or its dual) to a spin-`l` representation, splitting the
//! product into spin-(l-1) and spin-(l+1) blocks.
//!
//! Output indexing: rows `0..l` form the lower (spin l-1) block, rows
//! `l..2l+2` the upper (spin l+1) block. Input indexing is `(i, j) ->
//! i*(l+1) + j` for the qubit factor `i` and the spin-l factor `j`.

use crate::cmat::{C64, CMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CgKind {
    Standard,
    Dual,
}

/// A coupling transform together with its block layout.
#[derive(Clone, Debug)]
pub struct CGTransform {
    pub l: usize,
    pub kind: CgKind,
    pub matrix: CMatrix,
}

impl CGTransform {
    /// Dimension of the lower (spin l-1) output block.
    pub fn lower_dim(&self) -> usize {
        self.l
    }

    /// Dimension of the upper (spin l+1) output block.
    pub fn upper_dim(&self) -> usize {
        self.l + 2
    }
}

/// Elementary real rotation with entries sqrt(k), sqrt(l+1-k) over
/// sqrt(l+1); the building block of the coupling transform.
pub fn rotation_r(l: usize, k: usize) -> Result<CMatrix> {
    if k > l + 1 {
        return Err(Error::IndexOutOfRange(format!(
            "rotation index {k} exceeds {} for l = {l}",
            l + 1
        )));
    }
    let norm = ((l + 1) as f64).sqrt();
    let a = (k as f64).sqrt() / norm;
    let b = ((l + 1 - k) as f64).sqrt() / norm;
    Ok(CMatrix::from_real(2, 2, &[a, b, -b, a]))
}

fn rotation_entry(l: usize, a: usize, b: usize, k: usize) -> f64 {
    // Entry (a, b) of rotation_r(l, k) without building the matrix.
    let norm = ((l + 1) as f64).sqrt();
    match (a, b) {
        (0, 0) | (1, 1) => (k as f64).sqrt() / norm,
        (0, 1) => ((l + 1 - k) as f64).sqrt() / norm,
        (1, 0) => -((l + 1 - k) as f64).sqrt() / norm,
        _ => unreachable!(),
    }
}

fn build(l: usize, dual: bool) -> CMatrix {
    let dim = 2 * (l + 1);
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..=1usize {
        for j in 0..=l {
            let k = j + i;
            // Input column: qubit value i, spin value j (for the dual
            // transform the qubit factor is flipped and signed).
            let (col, sign) = if dual {
                ((1 - i) * (l + 1) + j, if i == 1 { -1.0 } else { 1.0 })
            } else {
                (i * (l + 1) + j, 1.0)
            };
            // Lower block |j+i-1>; the out-of-range kets at (i,j) = (0,0)
            // and (1,l) carry vanishing coefficients and are skipped.
            if k >= 1 && k <= l {
                let row = k - 1;
                let v = sign * rotation_entry(l, i, 0, k);
                m.set(row, col, m.get(row, col) + C64::new(v, 0.0));
            }
            // Upper block |j+i>.
            let row = l + k;
            let v = sign * rotation_entry(l, i, 1, k);
            m.set(row, col, m.get(row, col) + C64::new(v, 0.0));
        }
    }
    m
}

/// Coupling transform for `M (x) T^l(M)`; unitary (indeed real orthogonal).
pub fn cg_transform(l: usize) -> Result<CGTransform> {
    if l < 1 {
        return Err(Error::InvalidArgument("coupling needs l >= 1".into()));
    }
    Ok(CGTransform {
        l,
        kind: CgKind::Standard,
        matrix: build(l, false),
    })
}

/// Coupling transform for `M* (x) T^l(M)` where `M* = (M^-1)^T`;
/// equals `cg_transform(l) . ([[0,1],[-1,0]] (x) I)`.
pub fn dual_cg_transform(l: usize) -> Result<CGTransform> {
    if l < 1 {
        return Err(Error::InvalidArgument("coupling needs l >= 1".into()));
    }
    Ok(CGTransform {
        l,
        kind: CgKind::Dual,
        matrix: build(l, true),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::CMatrix;
    use crate::rep2::wigner_t;
    use crate::tol;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_2x2(rng: &mut StdRng) -> CMatrix {
        CMatrix::from_fn(2, 2, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    fn random_invertible_2x2(rng: &mut StdRng) -> CMatrix {
        loop {
            let m = random_2x2(rng);
            if m.det().norm() >= tol::DUAL_DET_FLOOR {
                return m;
            }
        }
    }

    fn dual_rep(m: &CMatrix) -> CMatrix {
        m.inverse_2x2().unwrap().transpose()
    }

    fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
        let n = a.rows() + b.rows();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                out.set(i, j, a.get(i, j));
            }
        }
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out.set(a.rows() + i, a.cols() + j, b.get(i, j));
            }
        }
        out
    }

    #[test]
    fn rotation_edge_cases() {
        let r0 = rotation_r(3, 0).unwrap();
        assert!(r0.max_abs_diff(&CMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0])) < 1e-15);
        let rtop = rotation_r(3, 4).unwrap();
        assert!(rtop.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        assert!(rotation_r(3, 5).is_err());
        for l in 0..=10usize {
            for k in 0..=l + 1 {
                let r = rotation_r(l, k).unwrap();
                assert!(r.mul(&r.transpose()).max_abs_diff(&CMatrix::identity(2)) < 1e-14);
            }
        }
    }

    #[test]
    fn transforms_are_real_orthogonal() {
        for l in 1..=12usize {
            for t in [cg_transform(l).unwrap(), dual_cg_transform(l).unwrap()] {
                let c = &t.matrix;
                assert!(c.max_imag() == 0.0);
                assert!(
                    c.mul(&c.transpose()).max_abs_diff(&CMatrix::identity(2 * l + 2)) < 1e-12,
                    "l = {l}"
                );
                assert!((c.det().norm() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn dual_is_standard_after_singlet_twist() {
        let s = CMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        for l in 1..=10usize {
            let lhs = dual_cg_transform(l).unwrap().matrix;
            let rhs = cg_transform(l)
                .unwrap()
                .matrix
                .mul(&s.kron(&CMatrix::identity(l + 1)));
            assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }
    }

    #[test]
    fn dual_l1_explicit_matrix() {
        let d1 = dual_cg_transform(1).unwrap().matrix;
        let s = 1.0 / 2f64.sqrt();
        let expected = CMatrix::from_real(
            4,
            4,
            &[
                s, 0.0, 0.0, s, //
                0.0, 0.0, 1.0, 0.0, //
                -s, 0.0, 0.0, s, //
                0.0, -1.0, 0.0, 0.0,
            ],
        );
        assert!(d1.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn standard_decomposition() {
        let mut rng = StdRng::seed_from_u64(31);
        for l in 1..=10usize {
            let c = cg_transform(l).unwrap().matrix;
            for trial in 0..10 {
                // Alternate unitary and general invertible inputs.
                let m = if trial % 2 == 0 {
                    crate::sim::haar_unitary(&mut rng)
                } else {
                    random_invertible_2x2(&mut rng)
                };
                let det = m.det();
                let product = m.kron(&wigner_t(l, &m));
                let lhs = c.mul(&product).mul(&c.dagger());
                let rhs = direct_sum(&wigner_t(l - 1, &m).scale(det), &wigner_t(l + 1, &m));
                assert!(lhs.max_abs_diff(&rhs) < tol::BLOCK_DECOMP, "l = {l}");
            }
        }
    }

    #[test]
    fn dual_decomposition() {
        let mut rng = StdRng::seed_from_u64(32);
        for l in 1..=10usize {
            let d = dual_cg_transform(l).unwrap().matrix;
            for trial in 0..10 {
                let m = if trial % 2 == 0 {
                    crate::sim::haar_unitary(&mut rng)
                } else {
                    random_invertible_2x2(&mut rng)
                };
                let det = m.det();
                let product = dual_rep(&m).kron(&wigner_t(l, &m));
                let lhs = d.mul(&product).mul(&d.dagger());
                let rhs = direct_sum(
                    &wigner_t(l - 1, &m),
                    &wigner_t(l + 1, &m).scale(C64::new(1.0, 0.0) / det),
                );
                assert!(lhs.max_abs_diff(&rhs) < tol::BLOCK_DECOMP, "l = {l}");
            }
        }
    }

    #[test]
    fn q_lambda_form_of_decompositions() {
        use crate::rep2::{q_lambda, Partition};
        let mut rng = StdRng::seed_from_u64(33);
        for n in 2..=12usize {
            for p in Partition::all(n) {
                let l = p.ell();
                if l == 0 {
                    continue;
                }
                let m = random_invertible_2x2(&mut rng);
                let det = m.det();
                let c = cg_transform(l).unwrap().matrix;
                let lhs = c
                    .mul(&m.kron(&q_lambda(&p, &m)))
                    .mul(&c.dagger());
                let rhs_low = q_lambda(&Partition::new(p.lambda1(), p.lambda2() + 1).unwrap(), &m);
                let rhs_high = q_lambda(&Partition::new(p.lambda1() + 1, p.lambda2()).unwrap(), &m);
                assert!(
                    lhs.max_abs_diff(&direct_sum(&rhs_low, &rhs_high)) < tol::BLOCK_DECOMP,
                    "standard, n={n} lambda=({},{})",
                    p.lambda1(),
                    p.lambda2()
                );

                // Dual form: blocks are the representations with one box
                // removed from each row; removing from the second row can
                // leave a signed power of the determinant.
                let d = dual_cg_transform(l).unwrap().matrix;
                let lhs = d
                    .mul(&dual_rep(&m).kron(&q_lambda(&p, &m)))
                    .mul(&d.dagger());
                let rhs_low = q_lambda(&Partition::new(p.lambda1() - 1, p.lambda2()).unwrap(), &m);
                let mut rhs_high = wigner_t(l + 1, &m);
                let mut det_pow = C64::new(1.0, 0.0);
                for _ in 0..p.lambda2() {
                    det_pow *= det;
                }
                rhs_high = rhs_high.scale(det_pow / det);
                assert!(
                    lhs.max_abs_diff(&direct_sum(&rhs_low, &rhs_high)) < tol::BLOCK_DECOMP,
                    "dual, n={n} lambda=({},{})",
                    p.lambda1(),
                    p.lambda2()
                );
            }
        }
    }

    #[test]
    fn antisymmetric_input_lands_in_lower_block() {
        // The singlet spans the 1-dimensional spin-0 block of C^2 (x) C^2.
        let c1 = cg_transform(1).unwrap();
        let mut singlet = CMatrix::zeros(4, 1);
        let s = 1.0 / 2f64.sqrt();
        singlet.set(1, 0, C64::new(s, 0.0));
        singlet.set(2, 0, C64::new(-s, 0.0));
        let image = c1.matrix.mul(&singlet);
        assert!((image.get(0, 0).norm() - 1.0).abs() < 1e-12);
        for row in 1..4 {
            assert!(image.get(row, 0).norm() < 1e-12);
        }
    }
}
