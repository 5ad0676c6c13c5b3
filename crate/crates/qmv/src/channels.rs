//! The two extremal unitary-covariant channels from an (l+1)-dimensional
//! spin register to a single qubit: the partial-trace channel and the
//! universal-NOT channel. Each is available as a Choi matrix, a Kraus
//! list, a Stinespring isometry, and a gate circuit, and the four
//! representations are kept consistent.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::cg::dual_cg_transform;
use crate::choi::{choi_from_kraus, kraus_apply};
use crate::cmat::{C64, CMatrix};
use crate::error::{Error, Result};
use crate::rep2::coherent_state;
use crate::tol;

/// Which of the two extremal channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremal {
    /// Embed into the symmetric subspace, keep one qubit.
    Tr,
    /// Measure along tensor-power states, output the orthogonal state.
    Unot,
}

/// Choi matrix of an extremal channel, dimension 2(l+1), built by
/// conjugating the flat block spectrum with the dual coupling transform.
pub fn extremal_choi(l: usize, which: Extremal) -> Result<CMatrix> {
    if l < 1 {
        return Err(Error::InvalidArgument("extremal channels need l >= 1".into()));
    }
    let d = dual_cg_transform(l)?.matrix;
    let dim = 2 * (l + 1);
    let mut diag = CMatrix::zeros(dim, dim);
    match which {
        Extremal::Tr => {
            let v = (l as f64 + 1.0) / l as f64;
            for i in 0..l {
                diag.set(i, i, C64::new(v, 0.0));
            }
        }
        Extremal::Unot => {
            let v = (l as f64 + 1.0) / (l as f64 + 2.0);
            for i in l..dim {
                diag.set(i, i, C64::new(v, 0.0));
            }
        }
    }
    Ok(d.dagger().mul(&diag).mul(&d))
}

/// Kraus operators of an extremal channel, each 2 x (l+1).
pub fn extremal_kraus(l: usize, which: Extremal) -> Result<Vec<CMatrix>> {
    if l < 1 {
        return Err(Error::InvalidArgument("extremal channels need l >= 1".into()));
    }
    let mut ops = Vec::new();
    match which {
        Extremal::Tr => {
            let lf = l as f64;
            for v in 0..l {
                let mut k = CMatrix::zeros(2, l + 1);
                k.set(0, v, C64::new(((lf - v as f64) / lf).sqrt(), 0.0));
                k.set(1, v + 1, C64::new(((v as f64 + 1.0) / lf).sqrt(), 0.0));
                ops.push(k);
            }
        }
        Extremal::Unot => {
            let den = l as f64 + 2.0;
            for w in 0..=l + 1 {
                let mut k = CMatrix::zeros(2, l + 1);
                if w >= 1 {
                    k.set(0, w - 1, C64::new(-((w as f64) / den).sqrt(), 0.0));
                }
                if w <= l {
                    k.set(1, w, C64::new(((l as f64 + 1.0 - w as f64) / den).sqrt(), 0.0));
                }
                ops.push(k);
            }
        }
    }
    Ok(ops)
}

/// Stinespring isometry: (2*l) x (l+1) for the trace channel,
/// (2*(l+2)) x (l+1) for the NOT channel, with the environment as the
/// second output factor.
pub fn extremal_stinespring(l: usize, which: Extremal) -> Result<CMatrix> {
    if l < 1 {
        return Err(Error::InvalidArgument("extremal channels need l >= 1".into()));
    }
    Ok(match which {
        Extremal::Tr => {
            let env = l;
            let lf = l as f64;
            let mut u = CMatrix::zeros(2 * env, l + 1);
            for v in 0..=l {
                if v < l {
                    u.set(v, v, C64::new(((lf - v as f64) / lf).sqrt(), 0.0));
                }
                if v >= 1 {
                    u.set(env + v - 1, v, C64::new((v as f64 / lf).sqrt(), 0.0));
                }
            }
            u
        }
        Extremal::Unot => {
            let env = l + 2;
            let den = l as f64 + 2.0;
            let mut u = CMatrix::zeros(2 * env, l + 1);
            for w in 0..=l {
                u.set(w + 1, w, C64::new(-((w as f64 + 1.0) / den).sqrt(), 0.0));
                u.set(env + w, w, C64::new(((l as f64 + 1.0 - w as f64) / den).sqrt(), 0.0));
            }
            u
        }
    })
}

/// Closed-form action of an extremal channel on an arbitrary
/// (l+1)-dimensional operator; the image is tridiagonal in the
/// matrix-unit expansion, so this runs in O(l^2).
pub fn apply_extremal(l: usize, which: Extremal, rho: &CMatrix) -> Result<CMatrix> {
    if l < 1 {
        return Err(Error::InvalidArgument("extremal channels need l >= 1".into()));
    }
    if !rho.is_square() || rho.rows() != l + 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected {}x{0} input, got {}x{}",
            l + 1,
            rho.rows(),
            rho.cols()
        )));
    }
    let mut out = CMatrix::zeros(2, 2);
    let lf = l as f64;
    for w in 0..=l {
        let wf = w as f64;
        let diag = rho.get(w, w);
        match which {
            Extremal::Tr => {
                out.set(0, 0, out.get(0, 0) + diag * ((lf - wf) / lf));
                out.set(1, 1, out.get(1, 1) + diag * (wf / lf));
                if w < l {
                    let coherence = rho.get(w, w + 1);
                    let amp = ((lf - wf) * (wf + 1.0)).sqrt() / lf;
                    out.set(0, 1, out.get(0, 1) + coherence * amp);
                    out.set(1, 0, out.get(1, 0) + rho.get(w + 1, w) * amp);
                }
            }
            Extremal::Unot => {
                let den = lf + 2.0;
                out.set(0, 0, out.get(0, 0) + diag * ((wf + 1.0) / den));
                out.set(1, 1, out.get(1, 1) + diag * ((lf + 1.0 - wf) / den));
                if w < l {
                    let coherence = rho.get(w, w + 1);
                    let amp = -((lf - wf) * (wf + 1.0)).sqrt() / den;
                    out.set(0, 1, out.get(0, 1) + coherence * amp);
                    out.set(1, 0, out.get(1, 0) + rho.get(w + 1, w) * amp);
                }
            }
        }
    }
    Ok(out)
}

/// One gate of the extremal-channel circuits. The ancilla qubit is the
/// first register, the spin register the second.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Adjoin the ancilla qubit in |bit>.
    PrepareAncilla { bit: u8 },
    /// Widen the spin register from dimension `from` to `to`.
    EmbedRegister { from: usize, to: usize },
    /// Rotate the ancilla by the elementary rotation with parameters
    /// (l, k) when the spin register reads `control`.
    ControlledRotation { l: usize, k: usize, control: usize },
    /// Decrement the spin register modulo `dim` when the ancilla is |1>.
    Decrementer { dim: usize },
    /// Increment the spin register modulo `dim` when the ancilla is |0>.
    Incrementer { dim: usize },
    /// Trace out the spin register (terminal).
    DiscardRegister,
}

/// Ancilla rotation used inside the circuits:
/// (1/sqrt(l)) [[sqrt(l-k), -sqrt(k)], [sqrt(k), sqrt(l-k)]].
pub fn circuit_rotation(l: usize, k: usize) -> CMatrix {
    assert!(k <= l);
    let norm = (l as f64).sqrt();
    let a = ((l - k) as f64).sqrt() / norm;
    let b = (k as f64).sqrt() / norm;
    CMatrix::from_real(2, 2, &[a, -b, b, a])
}

/// An ordered gate sequence implementing a channel from `d_in` dimensions
/// to one qubit. The composition stays isometric until the final
/// register discard, which is modelled as a partial trace at application
/// time.
#[derive(Clone, Debug)]
pub struct GateList {
    pub d_in: usize,
    pub gates: Vec<Gate>,
}

impl GateList {
    /// Dense composition of everything before the register discard:
    /// an isometry from C^d_in to C^2 (x) C^m.
    pub fn compose_isometry(&self) -> Result<CMatrix> {
        let mut w = CMatrix::identity(self.d_in);
        let mut data_dim = self.d_in;
        let mut have_ancilla = false;
        for gate in &self.gates {
            match gate {
                Gate::PrepareAncilla { bit } => {
                    if have_ancilla {
                        return Err(Error::InvalidArgument("ancilla prepared twice".into()));
                    }
                    w = CMatrix::basis_vector(2, *bit as usize).kron(&CMatrix::identity(data_dim)).mul(&w);
                    have_ancilla = true;
                }
                Gate::EmbedRegister { from, to } => {
                    if *from != data_dim || to < from {
                        return Err(Error::DimensionMismatch("register embedding".into()));
                    }
                    let mut e = CMatrix::zeros(*to, *from);
                    for v in 0..*from {
                        e.set(v, v, C64::new(1.0, 0.0));
                    }
                    let lift = if have_ancilla {
                        CMatrix::identity(2).kron(&e)
                    } else {
                        e
                    };
                    w = lift.mul(&w);
                    data_dim = *to;
                }
                Gate::ControlledRotation { l, k, control } => {
                    if !have_ancilla || *control >= data_dim {
                        return Err(Error::InvalidArgument("misplaced controlled rotation".into()));
                    }
                    let r = circuit_rotation(*l, *k);
                    let proj = CMatrix::basis_vector(data_dim, *control)
                        .outer(&CMatrix::basis_vector(data_dim, *control));
                    let rest = CMatrix::identity(data_dim).sub(&proj);
                    let g = r.kron(&proj).add(&CMatrix::identity(2).kron(&rest));
                    w = g.mul(&w);
                }
                Gate::Decrementer { dim } | Gate::Incrementer { dim } => {
                    if !have_ancilla || *dim != data_dim {
                        return Err(Error::DimensionMismatch("shift gate register size".into()));
                    }
                    let mut shift = CMatrix::zeros(data_dim, data_dim);
                    for v in 0..data_dim {
                        let target = match gate {
                            Gate::Decrementer { .. } => (v + data_dim - 1) % data_dim,
                            _ => (v + 1) % data_dim,
                        };
                        shift.set(target, v, C64::new(1.0, 0.0));
                    }
                    let (active, idle) = match gate {
                        // Decrement when the ancilla reads |1>.
                        Gate::Decrementer { .. } => (1usize, 0usize),
                        // Increment when the ancilla reads |0>.
                        _ => (0usize, 1usize),
                    };
                    let pa = CMatrix::basis_vector(2, active).outer(&CMatrix::basis_vector(2, active));
                    let pi = CMatrix::basis_vector(2, idle).outer(&CMatrix::basis_vector(2, idle));
                    let g = pa.kron(&shift).add(&pi.kron(&CMatrix::identity(data_dim)));
                    w = g.mul(&w);
                }
                Gate::DiscardRegister => break,
            }
        }
        Ok(w)
    }

    /// Applies the circuit as a channel: compose, conjugate, trace out the
    /// spin register.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let w = self.compose_isometry()?;
        let data_dim = w.rows() / 2;
        w.mul(rho).mul(&w.dagger()).partial_trace_second(2, data_dim)
    }

    pub fn to_json(&self) -> Value {
        let gates: Vec<Value> = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::PrepareAncilla { bit } => json!({
                    "kind": "prepare_ancilla", "bit": bit, "target": "ancilla"
                }),
                Gate::EmbedRegister { from, to } => json!({
                    "kind": "embed_register", "from": from, "to": to, "target": "spin"
                }),
                Gate::ControlledRotation { l, k, control } => json!({
                    "kind": "controlled_rotation", "l": l, "k": k, "control_value": control,
                    "target": "ancilla", "control": "spin"
                }),
                Gate::Decrementer { dim } => json!({
                    "kind": "decrementer", "modulus": dim, "target": "spin", "control": "ancilla"
                }),
                Gate::Incrementer { dim } => json!({
                    "kind": "incrementer", "modulus": dim, "target": "spin", "control": "ancilla"
                }),
                Gate::DiscardRegister => json!({ "kind": "discard_register", "target": "spin" }),
            })
            .collect();
        json!({ "d_in": self.d_in, "gates": gates })
    }
}

/// Gate circuit for an extremal channel: an ancilla preparation, one
/// conditional rotation per spin value, one modular shift, and a
/// register discard.
pub fn extremal_circuit(l: usize, which: Extremal) -> Result<GateList> {
    if l < 1 {
        return Err(Error::InvalidArgument("extremal channels need l >= 1".into()));
    }
    let mut gates = Vec::new();
    match which {
        Extremal::Tr => {
            gates.push(Gate::PrepareAncilla { bit: 0 });
            for v in 0..=l {
                gates.push(Gate::ControlledRotation { l, k: v, control: v });
            }
            gates.push(Gate::Decrementer { dim: l + 1 });
        }
        Extremal::Unot => {
            gates.push(Gate::PrepareAncilla { bit: 1 });
            gates.push(Gate::EmbedRegister { from: l + 1, to: l + 2 });
            for w in 0..=l + 1 {
                gates.push(Gate::ControlledRotation { l: l + 2, k: w + 1, control: w });
            }
            gates.push(Gate::Incrementer { dim: l + 2 });
        }
    }
    gates.push(Gate::DiscardRegister);
    Ok(GateList { d_in: l + 1, gates })
}

/// A channel in four coordinated representations.
#[derive(Clone, Debug)]
pub struct Channel {
    pub d_in: usize,
    pub d_out: usize,
    pub choi: CMatrix,
    pub kraus: Vec<CMatrix>,
    pub stinespring: CMatrix,
    pub circuit: Option<GateList>,
}

impl Channel {
    /// Checks the cross-representation invariants.
    pub fn validate(&self) -> Result<()> {
        let rebuilt = choi_from_kraus(&self.kraus);
        if rebuilt.max_abs_diff(&self.choi) > tol::CHANNEL_AGREEMENT {
            return Err(Error::InvalidState("Choi/Kraus mismatch".into()));
        }
        let mut completeness = CMatrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            completeness = completeness.add(&k.dagger().mul(k));
        }
        if completeness.max_abs_diff(&CMatrix::identity(self.d_in)) > tol::CHANNEL_AGREEMENT {
            return Err(Error::InvalidState("Kraus completeness failed".into()));
        }
        let gram = self.stinespring.dagger().mul(&self.stinespring);
        if gram.max_abs_diff(&CMatrix::identity(self.d_in)) > tol::CHANNEL_AGREEMENT {
            return Err(Error::InvalidState("Stinespring map is not an isometry".into()));
        }
        Ok(())
    }

    pub fn apply_via_kraus(&self, rho: &CMatrix) -> CMatrix {
        kraus_apply(&self.kraus, rho)
    }

    pub fn apply_via_choi(&self, rho: &CMatrix) -> Result<CMatrix> {
        crate::choi::choi_apply(&self.choi, rho, self.d_out, self.d_in)
    }

    pub fn apply_via_stinespring(&self, rho: &CMatrix) -> Result<CMatrix> {
        let env = self.stinespring.rows() / self.d_out;
        self.stinespring
            .mul(rho)
            .mul(&self.stinespring.dagger())
            .partial_trace_second(self.d_out, env)
    }
}

/// Assembles all four representations of an extremal channel.
pub fn extremal_channel(l: usize, which: Extremal) -> Result<Channel> {
    let channel = Channel {
        d_in: l + 1,
        d_out: 2,
        choi: extremal_choi(l, which)?,
        kraus: extremal_kraus(l, which)?,
        stinespring: extremal_stinespring(l, which)?,
        circuit: Some(extremal_circuit(l, which)?),
    };
    channel.validate()?;
    Ok(channel)
}

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_{n-1}(x).
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Quadrature oracle for the universal-NOT channel: evaluates the
/// Bloch-sphere integral of the measure-and-flip definition with a
/// Gauss-Legendre grid in cos(theta) times a uniform grid in phi. Used
/// only to cross-check [`apply_extremal`].
pub fn unot_integral_check(l: usize, rho: &CMatrix, n_grid: usize) -> Result<CMatrix> {
    if n_grid < 8 {
        return Err(Error::InvalidArgument("quadrature grid must be at least 8".into()));
    }
    if !rho.is_square() || rho.rows() != l + 1 {
        return Err(Error::DimensionMismatch("quadrature input dimension".into()));
    }
    let (nodes, weights) = gauss_legendre(n_grid);
    let mut out = CMatrix::zeros(2, 2);
    for (u, wu) in nodes.iter().zip(&weights) {
        let cos_half = ((1.0 + u) / 2.0).sqrt();
        let sin_half = ((1.0 - u) / 2.0).sqrt();
        for j in 0..n_grid {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_grid as f64;
            let psi = CMatrix::column_from(vec![
                C64::new(cos_half, 0.0),
                Complex64::from_polar(sin_half, phi),
            ]);
            // <psi|^(x)l Sigma(rho) |psi>^(x)l reduces to the coherent-state
            // expectation of rho.
            let coh = coherent_state(l, &psi);
            let overlap = coh.dagger().mul(rho).mul(&coh).get(0, 0);
            let flip = CMatrix::identity(2).sub(&psi.outer(&psi));
            let weight = overlap * (wu / (2.0 * n_grid as f64)) * (l as f64 + 1.0);
            out = out.add(&flip.scale(weight));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::{check_cptp, choi_apply};
    use crate::exact::{rat, rationalize};
    use crate::rep2::{sym_isometry, wigner_t};
    use crate::sim::{haar_unitary, random_density};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn l1_choi_matrices_match_known_values() {
        let j_tr = extremal_choi(1, Extremal::Tr).unwrap();
        let expected_tr = CMatrix::from_real(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                1.0, 0.0, 0.0, 1.0,
            ],
        );
        assert!(j_tr.max_abs_diff(&expected_tr) < 1e-12);

        let j_unot = extremal_choi(1, Extremal::Unot).unwrap();
        let t = 1.0 / 3.0;
        let expected_unot = CMatrix::from_real(
            4,
            4,
            &[
                t, 0.0, 0.0, -t, //
                0.0, 2.0 * t, 0.0, 0.0, //
                0.0, 0.0, 2.0 * t, 0.0, //
                -t, 0.0, 0.0, t,
            ],
        );
        assert!(j_unot.max_abs_diff(&expected_unot) < 1e-12);

        // Every entry rationalizes to an exact multiple of the block weight.
        use num::One;
        for (j, scale) in [(j_tr, rat(1, 1)), (j_unot, rat(1, 3))] {
            for i in 0..4 {
                for k in 0..4 {
                    let r = rationalize(j.get(i, k).re, 100, 1e-12).unwrap();
                    assert!((&r / &scale).denom().is_one());
                }
            }
        }
    }

    #[test]
    fn choi_relation() {
        // l J_tr + (l+2) J_unot = (l+1) I.
        for l in 1..=10usize {
            let j1 = extremal_choi(l, Extremal::Tr).unwrap();
            let j2 = extremal_choi(l, Extremal::Unot).unwrap();
            let lhs = j1
                .scale(C64::new(l as f64, 0.0))
                .add(&j2.scale(C64::new(l as f64 + 2.0, 0.0)));
            let rhs = CMatrix::identity(2 * l + 2).scale(C64::new(l as f64 + 1.0, 0.0));
            assert!(lhs.max_abs_diff(&rhs) < 1e-10, "l = {l}");
        }
    }

    #[test]
    fn choi_ranks() {
        for l in 1..=8usize {
            let r1 = extremal_choi(l, Extremal::Tr)
                .unwrap()
                .numerical_rank_hermitian(tol::RANK_CUTOFF)
                .unwrap();
            let r2 = extremal_choi(l, Extremal::Unot)
                .unwrap()
                .numerical_rank_hermitian(tol::RANK_CUTOFF)
                .unwrap();
            assert_eq!((r1, r2), (l, l + 2), "l = {l}");
        }
    }

    #[test]
    fn kraus_unot_l1_matches_example_up_to_sign() {
        let ops = extremal_kraus(1, Extremal::Unot).unwrap();
        assert_eq!(ops.len(), 3);
        let r23 = (2.0f64 / 3.0).sqrt();
        let r13 = (1.0f64 / 3.0).sqrt();
        // Reference set: -sqrt(2/3)|1><0|, sqrt(1/3)(|0><0| - |1><1|), sqrt(2/3)|0><1|.
        let mut k0 = CMatrix::zeros(2, 2);
        k0.set(1, 0, C64::new(-r23, 0.0));
        let mut k1 = CMatrix::zeros(2, 2);
        k1.set(0, 0, C64::new(r13, 0.0));
        k1.set(1, 1, C64::new(-r13, 0.0));
        let mut k2 = CMatrix::zeros(2, 2);
        k2.set(0, 1, C64::new(r23, 0.0));
        // Kraus operators are only defined up to a global sign per operator.
        for (ours, reference) in ops.iter().zip([k0, k1, k2]) {
            let direct = ours.max_abs_diff(&reference);
            let negated = ours.scale(C64::new(-1.0, 0.0)).max_abs_diff(&reference);
            assert!(direct < 1e-12 || negated < 1e-12);
        }
    }

    #[test]
    fn kraus_completeness_and_choi_reassembly() {
        for l in 1..=10usize {
            for which in [Extremal::Tr, Extremal::Unot] {
                let ops = extremal_kraus(l, which).unwrap();
                let mut sum = CMatrix::zeros(l + 1, l + 1);
                for k in &ops {
                    sum = sum.add(&k.dagger().mul(k));
                }
                assert!(sum.max_abs_diff(&CMatrix::identity(l + 1)) < 1e-12);
                let rebuilt = choi_from_kraus(&ops);
                assert!(rebuilt.max_abs_diff(&extremal_choi(l, which).unwrap()) < 1e-10);
            }
        }
    }

    #[test]
    fn stinespring_properties() {
        let u = extremal_stinespring(1, Extremal::Tr).unwrap();
        // |0> -> |0>|0>.
        assert!((u.get(0, 0).re - 1.0).abs() < 1e-15);
        let mut rng = StdRng::seed_from_u64(41);
        for l in 1..=10usize {
            for which in [Extremal::Tr, Extremal::Unot] {
                let u = extremal_stinespring(l, which).unwrap();
                assert!(u.dagger().mul(&u).max_abs_diff(&CMatrix::identity(l + 1)) < 1e-12);
                if l <= 8 {
                    let rho = random_density(&mut rng, l + 1);
                    let env = u.rows() / 2;
                    let via_stine = u
                        .mul(&rho)
                        .mul(&u.dagger())
                        .partial_trace_second(2, env)
                        .unwrap();
                    let via_kraus = kraus_apply(&extremal_kraus(l, which).unwrap(), &rho);
                    assert!(via_stine.max_abs_diff(&via_kraus) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn closed_form_action_examples() {
        // Tracing after symmetrizing |1> of three levels gives the mixed qubit.
        let e1 = CMatrix::basis_vector(3, 1);
        let out = apply_extremal(2, Extremal::Tr, &e1.outer(&e1)).unwrap();
        assert!(out.max_abs_diff(&CMatrix::identity(2).scale(C64::new(0.5, 0.0))) < 1e-14);

        let e0 = CMatrix::basis_vector(2, 0);
        let out = apply_extremal(1, Extremal::Unot, &e0.outer(&e0)).unwrap();
        let mut expected = CMatrix::zeros(2, 2);
        expected.set(0, 0, C64::new(1.0 / 3.0, 0.0));
        expected.set(1, 1, C64::new(2.0 / 3.0, 0.0));
        assert!(out.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn four_representations_agree() {
        let mut rng = StdRng::seed_from_u64(42);
        for l in 1..=10usize {
            for which in [Extremal::Tr, Extremal::Unot] {
                let channel = extremal_channel(l, which).unwrap();
                channel.validate().unwrap();
                let circuit = channel.circuit.as_ref().unwrap();
                for _ in 0..if l <= 8 { 20 } else { 3 } {
                    let rho = random_density(&mut rng, l + 1);
                    let closed = apply_extremal(l, which, &rho).unwrap();
                    let via_choi = channel.apply_via_choi(&rho).unwrap();
                    let via_kraus = channel.apply_via_kraus(&rho);
                    let via_stine = channel.apply_via_stinespring(&rho).unwrap();
                    let via_circuit = circuit.apply(&rho).unwrap();
                    for other in [&via_choi, &via_kraus, &via_stine, &via_circuit] {
                        assert!(closed.max_abs_diff(other) < tol::CHANNEL_AGREEMENT, "l = {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn circuit_composition_matches_stinespring() {
        for l in 1..=8usize {
            // Trace circuit: environment padded from l to l+1; the wrap
            // state must stay unpopulated.
            let w = extremal_circuit(l, Extremal::Tr).unwrap().compose_isometry().unwrap();
            let u = extremal_stinespring(l, Extremal::Tr).unwrap();
            assert_eq!(w.rows(), 2 * (l + 1));
            for a in 0..2usize {
                for e in 0..=l {
                    for col in 0..=l {
                        let ours = w.get(a * (l + 1) + e, col);
                        if e == l {
                            assert!(ours.norm() < 1e-12, "wrap state populated at l = {l}");
                        } else {
                            assert!((ours - u.get(a * l + e, col)).norm() < 1e-12);
                        }
                    }
                }
            }
            // NOT circuit: dimensions already match.
            let w = extremal_circuit(l, Extremal::Unot).unwrap().compose_isometry().unwrap();
            let u = extremal_stinespring(l, Extremal::Unot).unwrap();
            assert!(w.max_abs_diff(&u) < 1e-12);
        }
    }

    #[test]
    fn circuit_gate_count_is_linear() {
        for l in 1..=10usize {
            let rotations = extremal_circuit(l, Extremal::Tr)
                .unwrap()
                .gates
                .iter()
                .filter(|g| matches!(g, Gate::ControlledRotation { .. }))
                .count();
            assert_eq!(rotations, l + 1);
        }
    }

    #[test]
    fn circuit_serializes() {
        let json = extremal_circuit(2, Extremal::Unot).unwrap().to_json();
        let gates = json["gates"].as_array().unwrap();
        assert_eq!(gates[0]["kind"], "prepare_ancilla");
        assert_eq!(gates[1]["kind"], "embed_register");
        assert_eq!(gates.last().unwrap()["kind"], "discard_register");
    }

    #[test]
    fn covariance_under_spin_rotations() {
        let mut rng = StdRng::seed_from_u64(43);
        for l in 1..=8usize {
            for which in [Extremal::Tr, Extremal::Unot] {
                let j = extremal_choi(l, which).unwrap();
                for _ in 0..10 {
                    let u = haar_unitary(&mut rng);
                    let rho = random_density(&mut rng, l + 1);
                    let t = wigner_t(l, &u);
                    let lhs =
                        apply_extremal(l, which, &t.mul(&rho).mul(&t.dagger())).unwrap();
                    let rhs = u
                        .mul(&apply_extremal(l, which, &rho).unwrap())
                        .mul(&u.dagger());
                    assert!(lhs.max_abs_diff(&rhs) < 1e-10, "l = {l}");
                    // Commutation criterion on the Choi matrix.
                    let big = u.conj().kron(&t);
                    let comm = j.mul(&big).sub(&big.mul(&j));
                    assert!(comm.max_abs() < 1e-10, "l = {l}");
                }
            }
        }
    }

    #[test]
    fn trace_channel_is_symmetric_subspace_partial_trace() {
        let mut rng = StdRng::seed_from_u64(44);
        for l in 1..=6usize {
            let v = sym_isometry(l);
            let rho = random_density(&mut rng, l + 1);
            let embedded = v.mul(&rho).mul(&v.dagger());
            // Trace out qubits 2..l, keep the first.
            let kept = embedded.partial_trace_second(2, 1 << (l - 1)).unwrap();
            let direct = apply_extremal(l, Extremal::Tr, &rho).unwrap();
            assert!(kept.max_abs_diff(&direct) < 1e-12, "l = {l}");
        }
    }

    #[test]
    fn convex_combinations_are_cptp() {
        for l in [1usize, 2, 3] {
            let j1 = extremal_choi(l, Extremal::Tr).unwrap();
            let j2 = extremal_choi(l, Extremal::Unot).unwrap();
            for t in [0.0, 0.25, 0.5, 1.0] {
                let j = j1
                    .scale(C64::new(t, 0.0))
                    .add(&j2.scale(C64::new(1.0 - t, 0.0)));
                let report = check_cptp(&j, 2, l + 1).unwrap();
                assert!(report.is_cptp(), "l = {l}, t = {t}");
            }
        }
    }

    #[test]
    fn quadrature_oracle_matches_closed_form() {
        let e0 = CMatrix::basis_vector(2, 0);
        let out = unot_integral_check(1, &e0.outer(&e0), 64).unwrap();
        let closed = apply_extremal(1, Extremal::Unot, &e0.outer(&e0)).unwrap();
        assert!(out.max_abs_diff(&closed) < tol::QUADRATURE);

        let e1 = CMatrix::basis_vector(3, 1);
        let out = unot_integral_check(2, &e1.outer(&e1), 64).unwrap();
        let closed = apply_extremal(2, Extremal::Unot, &e1.outer(&e1)).unwrap();
        assert!(out.max_abs_diff(&closed) < tol::QUADRATURE);

        // Trace preservation of the quadrature itself.
        let mut rng = StdRng::seed_from_u64(45);
        for l in 1..=4usize {
            let rho = random_density(&mut rng, l + 1);
            let out = unot_integral_check(l, &rho, 48).unwrap();
            assert!((out.trace().re - 1.0).abs() < 1e-8);
        }
        assert!(unot_integral_check(1, &e0.outer(&e0), 4).is_err());
    }

    #[test]
    fn rejects_l_zero() {
        assert!(extremal_choi(0, Extremal::Tr).is_err());
        assert!(apply_extremal(1, Extremal::Tr, &CMatrix::identity(3)).is_err());
    }
}
