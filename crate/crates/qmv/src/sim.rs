//! End-to-end density-matrix execution of the two-stage algorithm
//! (weak Schur sampling followed by a per-block mixture of the two
//! extremal channels) and empirical checks of its fidelity and
//! equivariance.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::{apply_extremal, extremal_circuit, Extremal};
use crate::choi::{fidelity, DensityMatrix};
use crate::cmat::{C64, CMatrix};
use crate::error::{Error, Result};
use crate::exact::{rat_to_f64, Rat};
use crate::fidopt::BoolFn;
use crate::schur::{gamma_blocks, permutation_matrix, SchurBasis};

/// Haar-random 2x2 unitary: QR of a complex Gaussian matrix with the
/// R-diagonal phases folded back in.
pub fn haar_unitary(rng: &mut impl Rng) -> CMatrix {
    let gauss = |rng: &mut dyn FnMut() -> f64| C64::new(rng(), rng());
    let mut draw = || rng.sample::<f64, _>(StandardNormal);
    let a = gauss(&mut draw);
    let b = gauss(&mut draw);
    let c = gauss(&mut draw);
    let d = gauss(&mut draw);
    // Gram-Schmidt on the two columns.
    let n1 = (a.norm_sqr() + c.norm_sqr()).sqrt();
    let (q00, q10) = (a / n1, c / n1);
    let r01 = q00.conj() * b + q10.conj() * d;
    let (v0, v1) = (b - q00 * r01, d - q10 * r01);
    let n2 = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
    let (q01, q11) = (v0 / n2, v1 / n2);
    // Fix the phases of the R diagonal (r00 = n1 > 0 already real).
    let r11 = q01.conj() * v0 + q11.conj() * v1;
    let phase = r11 / r11.norm();
    let mut u = CMatrix::zeros(2, 2);
    u.set(0, 0, q00);
    u.set(1, 0, q10);
    u.set(0, 1, q01 * phase);
    u.set(1, 1, q11 * phase);
    u
}

/// Random density matrix: normalized G G^dagger for complex Gaussian G.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    let rho = g.mul(&g.dagger());
    let tr = rho.trace().re;
    rho.scale(C64::new(1.0 / tr, 0.0))
}

/// |0^(n-h) 1^h> as a computational basis column.
pub fn weight_state(n: usize, h: usize) -> CMatrix {
    assert!(h <= n);
    CMatrix::basis_vector(1 << n, (1 << h) - 1)
}

/// n-fold tensor power of a single-qubit operator.
pub fn tensor_power(m: &CMatrix, n: usize) -> CMatrix {
    assert!(n >= 1);
    let mut out = m.clone();
    for _ in 1..n {
        out = out.kron(m);
    }
    out
}

fn check_t(basis: &SchurBasis, t: &[f64]) -> Result<()> {
    let expected = basis.n() / 2 + 1;
    if t.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "expected {expected} interpolation parameters, got {}",
            t.len()
        )));
    }
    if t.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::InvalidArgument(
            "interpolation parameters must lie in [0, 1]".into(),
        ));
    }
    Ok(())
}

/// How the per-block channels are evaluated inside [`run_template`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BlockPath {
    ClosedForm,
    Circuit,
}

fn run_template_path(
    basis: &SchurBasis,
    t: &[f64],
    rho: &CMatrix,
    path: BlockPath,
) -> Result<CMatrix> {
    check_t(basis, t)?;
    DensityMatrix::new(rho.clone())?;
    let mut out = CMatrix::zeros(2, 2);
    for (partition, block) in gamma_blocks(basis, rho)? {
        let p = block.trace().re;
        if p <= crate::tol::PROB_FLOOR {
            continue;
        }
        // Each normalized post-measurement state must itself be a state.
        DensityMatrix::new(block.scale(C64::new(1.0 / p, 0.0)))?;
        let l = partition.ell();
        assert!(l >= 1, "spin-0 block reached on odd qubit count");
        let tk = t[partition.lambda2()];
        let apply = |which: Extremal| -> Result<CMatrix> {
            match path {
                BlockPath::ClosedForm => apply_extremal(l, which, &block),
                BlockPath::Circuit => extremal_circuit(l, which)?.apply(&block),
            }
        };
        if tk > 0.0 {
            out = out.add(&apply(Extremal::Tr)?.scale(C64::new(tk, 0.0)));
        }
        if tk < 1.0 {
            out = out.add(&apply(Extremal::Unot)?.scale(C64::new(1.0 - tk, 0.0)));
        }
    }
    DensityMatrix::new(out.clone())?;
    Ok(out)
}

/// Runs the two-stage algorithm on an n-qubit density matrix: weak Schur
/// sampling, then per measured block the `t`-mixture of the trace and
/// universal-NOT channels. `t` is indexed by the second partition row.
pub fn run_template(basis: &SchurBasis, t: &[f64], rho: &CMatrix) -> Result<CMatrix> {
    run_template_path(basis, t, rho, BlockPath::ClosedForm)
}

/// Same channel, but with every per-block map evaluated by dense gate
/// composition instead of the closed form.
pub fn run_template_via_circuits(basis: &SchurBasis, t: &[f64], rho: &CMatrix) -> Result<CMatrix> {
    run_template_path(basis, t, rho, BlockPath::Circuit)
}

/// Worst-case fidelity of the algorithm for computing `f`, evaluated by
/// direct simulation over the floor(n/2)+1 canonical inputs. Restricting
/// to those inputs is valid because the simulated channel is
/// permutation-invariant and unitary-equivariant; acceptance runs verify
/// that with [`equivariance_check`] first.
pub fn worst_case_fidelity_sim(basis: &SchurBasis, f: &BoolFn, t: &[f64]) -> Result<f64> {
    let n = basis.n();
    if f.n() != n {
        return Err(Error::DimensionMismatch(
            "function arity does not match basis".into(),
        ));
    }
    per_weight_fidelity_sim(basis, f, t)?
        .into_iter()
        .try_fold(f64::INFINITY, |acc, x| Ok(acc.min(x)))
}

/// Simulated per-weight output fidelities on |0^(n-h) 1^h> for
/// h = 0 .. floor(n/2).
pub fn per_weight_fidelity_sim(basis: &SchurBasis, f: &BoolFn, t: &[f64]) -> Result<Vec<f64>> {
    let n = basis.n();
    let mut values = Vec::with_capacity(n / 2 + 1);
    for h in 0..=n / 2 {
        let x = weight_state(n, h);
        let out = run_template(basis, t, &x.outer(&x))?;
        let target = CMatrix::basis_vector(2, usize::from(f.value(h)));
        values.push(fidelity(&target, &out)?);
    }
    Ok(values)
}

/// Maximum deviation from joint permutation-invariance and unitary
/// equivariance over random (U, x, pi) triples.
pub fn equivariance_check(
    basis: &SchurBasis,
    t: &[f64],
    trials: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let n = basis.n();
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let h = rng.random_range(0..=n);
        let x = weight_state(n, h);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let u = haar_unitary(rng);
        let p = permutation_matrix(n, &perm)?;
        let un = tensor_power(&u, n);
        let scrambled = un
            .mul(&p.mul(&x.outer(&x)).mul(&p.dagger()))
            .mul(&un.dagger());
        let lhs = run_template(basis, t, &scrambled)?;
        let rhs = u
            .mul(&run_template(basis, t, &x.outer(&x))?)
            .mul(&u.dagger());
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// Monte-Carlo average output fidelity over Haar-random bases and the
/// canonical per-weight inputs. Returns (mean, standard error) over the
/// per-basis means.
pub fn haar_average_fidelity(
    basis: &SchurBasis,
    f: &BoolFn,
    t: &[f64],
    samples: usize,
    rng: &mut impl Rng,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let n = basis.n();
    let mut per_sample = Vec::with_capacity(samples);
    for _ in 0..samples {
        let u = haar_unitary(rng);
        let un = tensor_power(&u, n);
        let mut acc = 0.0;
        for h in 0..=n / 2 {
            let x = weight_state(n, h);
            let rho = un.mul(&x.outer(&x)).mul(&un.dagger());
            let out = run_template(basis, t, &rho)?;
            let target = u.mul(&CMatrix::basis_vector(2, usize::from(f.value(h))));
            acc += fidelity(&target, &out)?;
        }
        per_sample.push(acc / (n / 2 + 1) as f64);
    }
    let mean = per_sample.iter().sum::<f64>() / samples as f64;
    let var = per_sample
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .sum::<f64>()
        / samples as f64;
    let stderr = (var / samples as f64).sqrt();
    Ok((mean, stderr))
}

/// Summary of a full simulated evaluation at exact interpolation
/// parameters.
#[derive(Clone, Debug)]
pub struct TemplateRun {
    pub n: usize,
    pub t: Vec<f64>,
    pub per_weight_fidelity_sim: Vec<f64>,
    pub worst_case: f64,
}

/// Simulates `f` at exact parameters `t`, reporting per-weight and
/// worst-case fidelities.
pub fn template_run(basis: &SchurBasis, f: &BoolFn, t_exact: &[Rat]) -> Result<TemplateRun> {
    let t: Vec<f64> = t_exact.iter().map(rat_to_f64).collect();
    let per_weight = per_weight_fidelity_sim(basis, f, &t)?;
    let worst_case = per_weight.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TemplateRun {
        n: basis.n(),
        t,
        per_weight_fidelity_sim: per_weight,
        worst_case,
    })
}

/// CSV rows comparing simulated against exact per-weight fidelities:
/// `function,h,simulated,exact,delta`, one row per input weight.
pub fn fidelity_comparison_csv(
    basis: &SchurBasis,
    f: &BoolFn,
    t_exact: &[Rat],
    exact: &[Rat],
) -> Result<String> {
    let run = template_run(basis, f, t_exact)?;
    if exact.len() != run.per_weight_fidelity_sim.len() {
        return Err(Error::DimensionMismatch("exact fidelity vector".into()));
    }
    let mut out = String::from("function,h,simulated,exact,delta\n");
    for (h, sim) in run.per_weight_fidelity_sim.iter().enumerate() {
        let reference = rat_to_f64(&exact[h]);
        out.push_str(&format!(
            "{},{h},{:.12},{:.12},{:.3e}\n",
            f.table_string(),
            sim,
            reference,
            (sim - reference).abs()
        ));
    }
    Ok(out)
}
