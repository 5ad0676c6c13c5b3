//! Exact optimal fidelities for computing symmetric self-dual Boolean
//! functions in an unknown basis: the linear program over interpolation
//! parameters, its per-weight fidelity expansion, and closed forms for
//! the majority and parity families.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, rat, rat_int, Rat};
use crate::simplex;

/// A symmetric self-dual Boolean function on an odd number of bits,
/// stored as the half truth table on Hamming weights 0 .. floor(n/2).
/// The remaining values follow from self-duality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolFn {
    n: usize,
    half: Vec<bool>,
}

impl BoolFn {
    pub fn new(n: usize, half: Vec<bool>) -> Result<Self> {
        if n.is_multiple_of(2) || n == 0 {
            return Err(Error::InvalidArgument(format!(
                "self-dual functions need an odd bit count, got {n}"
            )));
        }
        if half.len() != n / 2 + 1 {
            return Err(Error::InvalidArgument(format!(
                "half table needs {} bits for n = {n}, got {}",
                n / 2 + 1,
                half.len()
            )));
        }
        Ok(BoolFn { n, half })
    }

    /// Parses the bitstring wire format, e.g. "0000" for the 7-bit
    /// majority function. The length fixes n = 2 len - 1.
    pub fn parse(table: &str) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::Parse("empty truth table".into()));
        }
        let mut half = Vec::with_capacity(table.len());
        for ch in table.chars() {
            match ch {
                '0' => half.push(false),
                '1' => half.push(true),
                _ => {
                    return Err(Error::Parse(format!(
                        "truth table must be binary, found {ch:?}"
                    )))
                }
            }
        }
        BoolFn::new(2 * table.len() - 1, half)
    }

    pub fn majority(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) || n == 0 {
            return Err(Error::InvalidArgument("majority needs odd n".into()));
        }
        BoolFn::new(n, vec![false; n / 2 + 1])
    }

    pub fn parity(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) || n == 0 {
            return Err(Error::InvalidArgument("parity needs odd n".into()));
        }
        BoolFn::new(n, (0..=n / 2).map(|h| h % 2 == 1).collect())
    }

    pub fn negated(&self) -> Self {
        BoolFn {
            n: self.n,
            half: self.half.iter().map(|b| !b).collect(),
        }
    }

    /// All 2^(floor(n/2)+1) functions on n bits, in truth-table order.
    pub fn enumerate(n: usize) -> Result<Vec<Self>> {
        if n.is_multiple_of(2) || n == 0 {
            return Err(Error::InvalidArgument("enumeration needs odd n".into()));
        }
        let len = n / 2 + 1;
        Ok((0..1usize << len)
            .map(|bits| BoolFn {
                n,
                half: (0..len).map(|h| (bits >> (len - 1 - h)) & 1 == 1).collect(),
            })
            .collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Value on inputs of Hamming weight `h`, for any 0 <= h <= n.
    pub fn value(&self, h: usize) -> bool {
        assert!(h <= self.n);
        if h <= self.n / 2 {
            self.half[h]
        } else {
            !self.half[self.n - h]
        }
    }

    fn value_rat(&self, h: usize) -> Rat {
        if self.value(h) {
            Rat::one()
        } else {
            Rat::zero()
        }
    }

    pub fn table_string(&self) -> String {
        self.half.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl std::fmt::Display for BoolFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.table_string())
    }
}

/// Block probability: (C(n,k) - C(n,k-1)) / C(n,h).
pub fn p_coeff(n: usize, k: usize, h: usize) -> Result<Rat> {
    check_kh(n, k, h)?;
    let num = binomial(n, k as isize) - binomial(n, k as isize - 1);
    Ok(Rat::new(num, binomial(n, h as isize)))
}

/// Per-block fidelity of the trace channel on weight-h inputs:
/// (n-h-k)/(n-2k) - fbar(h) (n-2h)/(n-2k).
pub fn a_coeff(f: &BoolFn, k: usize, h: usize) -> Result<Rat> {
    let n = f.n();
    check_kh(n, k, h)?;
    let den = rat_int((n - 2 * k) as i64);
    let base = rat_int((n - h - k) as i64) / &den;
    let twist = f.value_rat(h) * rat_int((n - 2 * h) as i64) / &den;
    Ok(base - twist)
}

/// Per-block fidelity of the universal-NOT channel on weight-h inputs:
/// (h-k+1)/(n-2k+2) + fbar(h) (n-2h)/(n-2k+2).
pub fn b_coeff(f: &BoolFn, k: usize, h: usize) -> Result<Rat> {
    let n = f.n();
    check_kh(n, k, h)?;
    let den = rat_int((n - 2 * k + 2) as i64);
    let base = rat_int((h - k + 1) as i64) / &den;
    let twist = f.value_rat(h) * rat_int((n - 2 * h) as i64) / &den;
    Ok(base + twist)
}

fn check_kh(n: usize, k: usize, h: usize) -> Result<()> {
    if k > h || h > n / 2 {
        return Err(Error::IndexOutOfRange(format!(
            "coefficient indices k = {k}, h = {h} for n = {n}"
        )));
    }
    Ok(())
}

/// All p, a, b coefficient tables of a function, indexed `[h][k]`.
#[derive(Clone, Debug)]
pub struct LpCoefficients {
    pub p: Vec<Vec<Rat>>,
    pub a: Vec<Vec<Rat>>,
    pub b: Vec<Vec<Rat>>,
}

pub fn lp_coefficients(f: &BoolFn) -> LpCoefficients {
    let kmax = f.n() / 2;
    let build = |g: &dyn Fn(usize, usize) -> Rat| -> Vec<Vec<Rat>> {
        (0..=kmax).map(|h| (0..=h).map(|k| g(k, h)).collect()).collect()
    };
    LpCoefficients {
        p: build(&|k, h| p_coeff(f.n(), k, h).expect("in range")),
        a: build(&|k, h| a_coeff(f, k, h).expect("in range")),
        b: build(&|k, h| b_coeff(f, k, h).expect("in range")),
    }
}

/// Exact output fidelity on each input weight h = 0 .. floor(n/2) for a
/// given parameter vector: c_h = sum_k p_k(h) [t_k a_k(h) + (1-t_k) b_k(h)].
/// The formula is evaluated as written, so parameters outside [0, 1]
/// (which no longer describe a physical mixture) are accepted.
pub fn per_weight_fidelity(f: &BoolFn, t: &[Rat]) -> Result<Vec<Rat>> {
    let kmax = f.n() / 2;
    if t.len() != kmax + 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected {} parameters, got {}",
            kmax + 1,
            t.len()
        )));
    }
    let coeffs = lp_coefficients(f);
    let mut out = Vec::with_capacity(kmax + 1);
    for h in 0..=kmax {
        let mut acc = Rat::zero();
        for k in 0..=h {
            let mix = &t[k] * &coeffs.a[h][k] + (Rat::one() - &t[k]) * &coeffs.b[h][k];
            acc += &coeffs.p[h][k] * mix;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Solution of the fidelity linear program.
#[derive(Clone, Debug)]
pub struct LpSolution {
    /// Optimal worst-case fidelity over the constrained weights.
    pub fidelity: Rat,
    /// Optimal interpolation parameters t_0 .. t_floor(n/2).
    pub t: Vec<Rat>,
    /// Fidelity achieved on every input weight at the optimal parameters.
    pub per_weight: Vec<Rat>,
}

/// Maximizes the worst-case fidelity over interpolation parameters
/// t_k in [0, 1]: `max c` subject to `c_h(t) >= c` for every h in
/// `weight_set` (default: all weights 0 .. floor(n/2)).
///
/// The LP is solved exactly; `fidelity` equals `min_h per_weight[h]`
/// over the constrained weights with rational equality.
pub fn solve_lp(f: &BoolFn, weight_set: Option<&[usize]>) -> Result<LpSolution> {
    let kmax = f.n() / 2;
    let all: Vec<usize> = (0..=kmax).collect();
    let mut weights: Vec<usize> = match weight_set {
        Some(ws) => {
            if ws.is_empty() {
                return Err(Error::InvalidArgument("empty weight set".into()));
            }
            if ws.iter().any(|&h| h > kmax) {
                return Err(Error::IndexOutOfRange(format!(
                    "weight set exceeds floor(n/2) = {kmax}"
                )));
            }
            ws.to_vec()
        }
        None => all,
    };
    weights.sort_unstable();
    weights.dedup();

    let coeffs = lp_coefficients(f);
    // Variables: [u, v, t_0 .. t_kmax] with c = u - v free.
    let n_vars = kmax + 3;
    let mut objective = vec![Rat::zero(); n_vars];
    objective[0] = Rat::one();
    objective[1] = -Rat::one();
    let mut rows = Vec::new();
    for &h in &weights {
        // u - v - sum_k p_k(h)(a_k(h) - b_k(h)) t_k <= sum_k p_k(h) b_k(h)
        let mut row = vec![Rat::zero(); n_vars];
        row[0] = Rat::one();
        row[1] = -Rat::one();
        let mut rhs = Rat::zero();
        for k in 0..=h {
            row[2 + k] = -(&coeffs.p[h][k] * (&coeffs.a[h][k] - &coeffs.b[h][k]));
            rhs += &coeffs.p[h][k] * &coeffs.b[h][k];
        }
        rows.push((row, rhs));
    }
    for k in 0..=kmax {
        let mut row = vec![Rat::zero(); n_vars];
        row[2 + k] = Rat::one();
        rows.push((row, Rat::one()));
    }

    let solution = simplex::solve(&simplex::Problem { objective, rows })?;
    let t: Vec<Rat> = solution.x[2..].to_vec();
    let per_weight = per_weight_fidelity(f, &t)?;
    let fidelity = solution.objective_value;
    // The optimum must be attained: min over the constrained weights of
    // the per-weight fidelity equals the LP value exactly.
    let attained = weights
        .iter()
        .map(|&h| per_weight[h].clone())
        .min()
        .expect("non-empty weight set");
    if attained != fidelity {
        return Err(Error::Simplex(
            "optimum does not match per-weight minimum".into(),
        ));
    }
    Ok(LpSolution {
        fidelity,
        t,
        per_weight,
    })
}

fn require_odd(n: usize) -> Result<()> {
    if n.is_multiple_of(2) || n == 0 {
        return Err(Error::InvalidArgument(format!("n must be odd, got {n}")));
    }
    Ok(())
}

/// Exact fidelity of the optimal majority channel on inputs of Hamming
/// weight h: sum_{k<=h} p_k(h) (n-h-k)/(n-2k).
pub fn majority_fidelity_direct(n: usize, h: usize) -> Result<Rat> {
    require_odd(n)?;
    if h > (n - 1) / 2 {
        return Err(Error::IndexOutOfRange(format!(
            "majority weight {h} exceeds (n-1)/2 for n = {n}"
        )));
    }
    let mut acc = Rat::zero();
    for k in 0..=h {
        let p = p_coeff(n, k, h)?;
        acc += p * rat((n - h - k) as i64, (n - 2 * k) as i64);
    }
    Ok(acc)
}

/// Coefficients (a, b) of the linear recurrence
/// F_n(h) = a(n,h) F_n(h-1) + b(n,h).
pub fn majority_recurrence_coefficients(n: usize, h: usize) -> Result<(Rat, Rat)> {
    require_odd(n)?;
    if h == 0 || h > (n - 1) / 2 {
        return Err(Error::IndexOutOfRange(format!(
            "recurrence step {h} for n = {n}"
        )));
    }
    let (nf, hf) = (n as i64, h as i64);
    let den = rat_int((nf - 2 * hf + 2) * (nf - hf + 1));
    let a = rat_int((nf - 2 * hf) * hf) / &den;
    let b = rat_int(4 * hf * hf - (4 * nf + 5) * hf + (nf + 1) * (nf + 2)) / &den;
    Ok((a, b))
}

/// One step of the recurrence from F_n(h-1) to F_n(h).
pub fn majority_recurrence_step(n: usize, h: usize, prev: &Rat) -> Result<Rat> {
    let (a, b) = majority_recurrence_coefficients(n, h)?;
    Ok(a * prev + b)
}

/// The whole per-weight profile F_n(0 .. (n-1)/2), built by the
/// recurrence in O(n) exact steps.
pub fn majority_fidelity_profile(n: usize) -> Result<Vec<Rat>> {
    require_odd(n)?;
    let mut profile = vec![Rat::one()];
    for h in 1..=(n - 1) / 2 {
        let next = majority_recurrence_step(n, h, profile.last().unwrap())?;
        profile.push(next);
    }
    Ok(profile)
}

/// Optimal majority fidelity via the three-term recursion
/// g(1) = 1, g(2) = 8/9,
/// g(m) = 2m / ((2m-1)^2 (2m+1)) [ (2m(4m-7)+5) g(m-1) - 4(m-1)(m-2) g(m-2) + 1 ].
pub fn majority_fidelity_recursive(n: usize) -> Result<Rat> {
    require_odd(n)?;
    let target = n.div_ceil(2);
    let mut g_prev = Rat::one(); // g(1)
    if target == 1 {
        return Ok(g_prev);
    }
    let mut g = rat(8, 9); // g(2)
    for m in 3..=target {
        let mf = m as i64;
        let front = rat(2 * mf, (2 * mf - 1) * (2 * mf - 1) * (2 * mf + 1));
        let inner = rat_int(2 * mf * (4 * mf - 7) + 5) * &g
            - rat_int(4 * (mf - 1) * (mf - 2)) * &g_prev
            + Rat::one();
        g_prev = std::mem::replace(&mut g, front * inner);
    }
    Ok(g)
}

/// Closed form conjectured for the optimal parity fidelity:
/// (2 ceil((n+1)/4) + 1) / (n + 2).
pub fn parity_conjecture(n: usize) -> Result<Rat> {
    require_odd(n)?;
    let ceil = (n as i64 + 1).div_euclid(4) + i64::from((n as i64 + 1) % 4 != 0);
    Ok(rat(2 * ceil + 1, n as i64 + 2))
}

/// Worst-case fidelity of returning a uniformly random input qubit:
/// 1/2 + 1/(2n) without a promise, 5/6 under the one-third promise.
pub fn trivial_strategy_fidelity(n: usize, promise: bool) -> Result<Rat> {
    require_odd(n)?;
    Ok(if promise {
        rat(5, 6)
    } else {
        rat(1, 2) + rat(1, 2 * n as i64)
    })
}
