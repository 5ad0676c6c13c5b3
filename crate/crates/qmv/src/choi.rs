//! Choi-matrix calculus: applying a channel through its Choi matrix,
//! CP/TP verification, and state fidelity.
//!
//! Conventions: J(Phi) = sum_{ij} Phi(|i><j|) (x) |i><j|, so the first
//! (traced-last) register is the output and the second the input, and
//! Phi(rho) = Tr_2[ J (I_out (x) rho^T) ].

use num_complex::Complex64;

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::qmat::QMatrix;
use crate::tol;

/// Recovers the channel action from a Choi matrix: Tr_2[ J (I (x) rho^T) ].
pub fn choi_apply(j: &CMatrix, rho: &CMatrix, d_out: usize, d_in: usize) -> Result<CMatrix> {
    if !j.is_square() || j.rows() != d_out * d_in {
        return Err(Error::DimensionMismatch(format!(
            "Choi matrix should be {}x{0}, got {}x{}",
            d_out * d_in,
            j.rows(),
            j.cols()
        )));
    }
    if !rho.is_square() || rho.rows() != d_in {
        return Err(Error::DimensionMismatch(format!(
            "input state should be {d_in}x{d_in}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let mut out = CMatrix::zeros(d_out, d_out);
    for a in 0..d_out {
        for b in 0..d_out {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d_in {
                for k in 0..d_in {
                    acc += j.get(a * d_in + i, b * d_in + k) * rho.get(i, k);
                }
            }
            out.set(a, b, acc);
        }
    }
    Ok(out)
}

/// Exact-rational variant of [`choi_apply`].
pub fn choi_apply_exact(j: &QMatrix, rho: &QMatrix, d_out: usize, d_in: usize) -> Result<QMatrix> {
    if !j.is_square() || j.rows() != d_out * d_in {
        return Err(Error::DimensionMismatch("Choi matrix dimension".into()));
    }
    if !rho.is_square() || rho.rows() != d_in {
        return Err(Error::DimensionMismatch("input state dimension".into()));
    }
    let mut out = QMatrix::zeros(d_out, d_out);
    for a in 0..d_out {
        for b in 0..d_out {
            let mut acc = Rat::from_integer(0.into());
            for i in 0..d_in {
                for k in 0..d_in {
                    acc += j.get(a * d_in + i, b * d_in + k) * rho.get(i, k);
                }
            }
            out.set(a, b, acc);
        }
    }
    Ok(out)
}

/// Outcome of the CP/TP classification of a Choi matrix.
#[derive(Clone, Debug)]
pub struct CptpReport {
    pub is_cp: bool,
    pub is_tp: bool,
    pub min_eigenvalue: f64,
    pub tp_residual: f64,
}

impl CptpReport {
    pub fn is_cptp(&self) -> bool {
        self.is_cp && self.is_tp
    }
}

/// Classifies a Choi matrix: CP iff its smallest eigenvalue clears
/// [`tol::CP_MIN_EIG`], TP iff `Tr_1 J = I` within [`tol::TP_RESIDUAL`].
pub fn check_cptp(j: &CMatrix, d_out: usize, d_in: usize) -> Result<CptpReport> {
    if !j.is_square() || j.rows() != d_out * d_in {
        return Err(Error::DimensionMismatch(format!(
            "Choi matrix should be {}x{0}, got {}x{}",
            d_out * d_in,
            j.rows(),
            j.cols()
        )));
    }
    let eigs = j.hermitian_eigenvalues()?;
    let min_eigenvalue = eigs[0];
    let reduced = j.partial_trace_first(d_out, d_in)?;
    let tp_residual = reduced.max_abs_diff(&CMatrix::identity(d_in));
    Ok(CptpReport {
        is_cp: min_eigenvalue >= tol::CP_MIN_EIG,
        is_tp: tp_residual <= tol::TP_RESIDUAL,
        min_eigenvalue,
        tp_residual,
    })
}

/// Fidelity <psi|rho|psi> between a pure state and a density matrix.
pub fn fidelity(psi: &CMatrix, rho: &CMatrix) -> Result<f64> {
    if psi.cols() != 1 || psi.rows() != rho.rows() || !rho.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of {}x{} state with {}x{} matrix",
            psi.rows(),
            psi.cols(),
            rho.rows(),
            rho.cols()
        )));
    }
    let norm = psi.vdot(psi).re.sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!("state norm {norm} is not 1")));
    }
    let val = psi.dagger().mul(rho).mul(psi).get(0, 0);
    debug_assert!(val.im.abs() < 1e-9, "fidelity has imaginary part {}", val.im);
    Ok(val.re)
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// within the central tolerances.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidState("density matrix is not square".into()));
        }
        if !mat.is_hermitian(tol::HERMITICITY * (1.0 + mat.max_abs())) {
            return Err(Error::InvalidState("density matrix is not Hermitian".into()));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol::TRACE_ONE || tr.im.abs() > tol::TRACE_ONE {
            return Err(Error::InvalidState(format!("trace {} is not 1", tr)));
        }
        let min_eig = mat.hermitian_eigenvalues()?[0];
        if min_eig < tol::PSD_MIN_EIG {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min_eig} is negative"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }
}

/// Choi matrix of a channel given by Kraus operators:
/// J = sum_i vec(K_i) vec(K_i)^dagger with vec in (out, in) index order.
pub fn choi_from_kraus(kraus: &[CMatrix]) -> CMatrix {
    assert!(!kraus.is_empty());
    let d_out = kraus[0].rows();
    let d_in = kraus[0].cols();
    let mut j = CMatrix::zeros(d_out * d_in, d_out * d_in);
    for k in kraus {
        assert_eq!((k.rows(), k.cols()), (d_out, d_in));
        let mut vec_k = CMatrix::zeros(d_out * d_in, 1);
        for a in 0..d_out {
            for b in 0..d_in {
                vec_k.set(a * d_in + b, 0, k.get(a, b));
            }
        }
        j = j.add(&vec_k.outer(&vec_k));
    }
    j
}

/// Applies a channel given by Kraus operators: sum_i K_i rho K_i^dagger.
pub fn kraus_apply(kraus: &[CMatrix], rho: &CMatrix) -> CMatrix {
    assert!(!kraus.is_empty());
    let mut out = CMatrix::zeros(kraus[0].rows(), kraus[0].rows());
    for k in kraus {
        out = out.add(&k.mul(rho).mul(&k.dagger()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::C64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn identity_choi(d: usize) -> CMatrix {
        // J = sum_{ij} |ii><jj|
        let mut j = CMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for k in 0..d {
                j.set(i * d + i, k * d + k, C64::new(1.0, 0.0));
            }
        }
        j
    }

    fn bloch_state(x: f64, y: f64, z: f64) -> CMatrix {
        let mut rho = CMatrix::zeros(2, 2);
        rho.set(0, 0, C64::new((1.0 + z) / 2.0, 0.0));
        rho.set(0, 1, C64::new(x / 2.0, -y / 2.0));
        rho.set(1, 0, C64::new(x / 2.0, y / 2.0));
        rho.set(1, 1, C64::new((1.0 - z) / 2.0, 0.0));
        rho
    }

    fn j_unot() -> CMatrix {
        CMatrix::from_real(
            4,
            4,
            &[
                0.0, 0.0, 0.0, -1.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                -1.0, 0.0, 0.0, 0.0,
            ],
        )
    }

    #[test]
    fn identity_channel_acts_trivially() {
        let j = identity_choi(2);
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..5 {
            let g = CMatrix::from_fn(2, 2, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let rho = g.mul(&g.dagger());
            let rho = rho.scale(C64::new(1.0 / rho.trace().re, 0.0));
            let out = choi_apply(&j, &rho, 2, 2).unwrap();
            assert!(out.max_abs_diff(&rho) < 1e-12);
        }
    }

    #[test]
    fn ideal_not_flips_bloch_vector() {
        let j = j_unot();
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..10 {
            let v = [
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
            ];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let (x, y, z) = (v[0] / n, v[1] / n, v[2] / n);
            let out = choi_apply(&j, &bloch_state(x, y, z), 2, 2).unwrap();
            assert!(out.max_abs_diff(&bloch_state(-x, -y, -z)) < 1e-12);
        }
    }

    #[test]
    fn random_kraus_choi_agrees_with_kraus_sum() {
        let mut rng = StdRng::seed_from_u64(3);
        let d_in = 3;
        let d_out = 2;
        let raw: Vec<CMatrix> = (0..3)
            .map(|_| {
                CMatrix::from_fn(d_out, d_in, |_, _| {
                    C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                })
            })
            .collect();
        // Normalise so sum K^dag K = I (divide by the unique positive root).
        // Simpler: keep the raw CP map; the identity to check is linearity, not TP.
        let j = choi_from_kraus(&raw);
        for _ in 0..5 {
            let g = CMatrix::from_fn(d_in, d_in, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let rho = g.mul(&g.dagger());
            let via_choi = choi_apply(&j, &rho, d_out, d_in).unwrap();
            let via_kraus = kraus_apply(&raw, &rho);
            assert!(via_choi.max_abs_diff(&via_kraus) < 1e-10);
        }
    }

    #[test]
    fn cptp_classification() {
        let report = check_cptp(&identity_choi(2), 2, 2).unwrap();
        assert!(report.is_cp && report.is_tp);

        let report = check_cptp(&j_unot(), 2, 2).unwrap();
        assert!(!report.is_cp);
        assert!((report.min_eigenvalue + 1.0).abs() < 1e-10);
        assert!(report.is_tp);
    }

    #[test]
    fn fidelity_examples() {
        let e0 = CMatrix::basis_vector(2, 0);
        let p0 = e0.outer(&e0);
        assert!((fidelity(&e0, &p0).unwrap() - 1.0).abs() < 1e-12);

        let mixed = CMatrix::identity(2).scale(C64::new(0.5, 0.0));
        assert!((fidelity(&e0, &mixed).unwrap() - 0.5).abs() < 1e-12);

        let e1 = CMatrix::basis_vector(2, 1);
        let rho = p0
            .scale(C64::new(2.0 / 3.0, 0.0))
            .add(&e1.outer(&e1).scale(C64::new(1.0 / 3.0, 0.0)));
        assert!((fidelity(&e0, &rho).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_rejects_bad_inputs() {
        let e0 = CMatrix::basis_vector(2, 0);
        assert!(fidelity(&e0, &CMatrix::identity(3)).is_err());
        let unnormalised = e0.scale(C64::new(2.0, 0.0));
        assert!(fidelity(&unnormalised, &CMatrix::identity(2)).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let e0 = CMatrix::basis_vector(2, 0);
        assert!(DensityMatrix::new(e0.outer(&e0)).is_ok());
        assert!(DensityMatrix::new(CMatrix::identity(2)).is_err()); // trace 2
        let mut bad = CMatrix::zeros(2, 2);
        bad.set(0, 0, C64::new(1.5, 0.0));
        bad.set(1, 1, C64::new(-0.5, 0.0));
        assert!(DensityMatrix::new(bad).is_err()); // negative eigenvalue
    }
}
