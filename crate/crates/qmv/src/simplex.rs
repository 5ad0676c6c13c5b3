//! Dense exact-rational primal simplex with Bland's anti-cycling rule.
//!
//! Solves `max c.x` subject to `A x <= b`, `x >= 0` with `b >= 0`, so the
//! all-slack basis is feasible and no phase-1 is needed. Every pivot is
//! exact; the reported optimum is a true rational vertex.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rat;

pub struct Problem {
    /// Objective coefficients, one per structural variable.
    pub objective: Vec<Rat>,
    /// Rows (coefficients, right-hand side) of `A x <= b`; rhs must be >= 0.
    pub rows: Vec<(Vec<Rat>, Rat)>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub x: Vec<Rat>,
    pub objective_value: Rat,
}

pub fn solve(problem: &Problem) -> Result<Solution> {
    let n = problem.objective.len();
    let m = problem.rows.len();
    if m == 0 {
        return Err(Error::Simplex("no constraints".into()));
    }
    for (row, rhs) in &problem.rows {
        if row.len() != n {
            return Err(Error::Simplex("row length mismatch".into()));
        }
        if rhs.is_negative() {
            return Err(Error::Simplex("negative right-hand side".into()));
        }
    }

    // Tableau: m constraint rows of [A | I | b], then the objective row
    // [c | 0 | 0] holding reduced costs and (negated) objective value.
    let width = n + m + 1;
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    for (i, (row, rhs)) in problem.rows.iter().enumerate() {
        let mut r = vec![Rat::zero(); width];
        r[..n].clone_from_slice(row);
        r[n + i] = Rat::from_integer(1.into());
        r[width - 1] = rhs.clone();
        tab.push(r);
    }
    let mut obj = vec![Rat::zero(); width];
    obj[..n].clone_from_slice(&problem.objective);
    tab.push(obj);

    let mut basis: Vec<usize> = (n..n + m).collect();
    let iteration_cap = 1000 + 50 * (n + m);
    for _ in 0..iteration_cap {
        // Bland: entering variable is the lowest index with a positive
        // reduced cost.
        let Some(entering) = (0..n + m).find(|&j| tab[m][j].is_positive()) else {
            // Optimal.
            let mut x = vec![Rat::zero(); n];
            for (i, &b) in basis.iter().enumerate() {
                if b < n {
                    x[b] = tab[i][width - 1].clone();
                }
            }
            return Ok(Solution {
                x,
                objective_value: -tab[m][width - 1].clone(),
            });
        };
        // Ratio test; ties broken by the lowest basis index (Bland).
        let mut leaving: Option<(usize, Rat)> = None;
        for i in 0..m {
            if !tab[i][entering].is_positive() {
                continue;
            }
            let ratio = &tab[i][width - 1] / &tab[i][entering];
            match &leaving {
                None => leaving = Some((i, ratio)),
                Some((best, best_ratio)) => {
                    if ratio < *best_ratio
                        || (ratio == *best_ratio && basis[i] < basis[*best])
                    {
                        leaving = Some((i, ratio));
                    }
                }
            }
        }
        let Some((pivot_row, _)) = leaving else {
            return Err(Error::Simplex("objective unbounded".into()));
        };
        // Pivot.
        let pivot = tab[pivot_row][entering].clone();
        for cell in tab[pivot_row].iter_mut() {
            *cell /= &pivot;
        }
        for i in 0..=m {
            if i == pivot_row || tab[i][entering].is_zero() {
                continue;
            }
            let factor = tab[i][entering].clone();
            for j in 0..width {
                let delta = &factor * &tab[pivot_row][j];
                tab[i][j] -= delta;
            }
        }
        basis[pivot_row] = entering;
    }
    Err(Error::Simplex("iteration cap exceeded".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn textbook_instance() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18: optimum 36 at (2, 6).
        let p = Problem {
            objective: vec![rat_int(3), rat_int(5)],
            rows: vec![
                (vec![rat_int(1), rat_int(0)], rat_int(4)),
                (vec![rat_int(0), rat_int(2)], rat_int(12)),
                (vec![rat_int(3), rat_int(2)], rat_int(18)),
            ],
        };
        let s = solve(&p).unwrap();
        assert_eq!(s.objective_value, rat_int(36));
        assert_eq!(s.x, vec![rat_int(2), rat_int(6)]);
    }

    #[test]
    fn fractional_vertex() {
        // max x + y s.t. 2x + y <= 2, x + 2y <= 2: optimum 4/3 at (2/3, 2/3).
        let p = Problem {
            objective: vec![rat_int(1), rat_int(1)],
            rows: vec![
                (vec![rat_int(2), rat_int(1)], rat_int(2)),
                (vec![rat_int(1), rat_int(2)], rat_int(2)),
            ],
        };
        let s = solve(&p).unwrap();
        assert_eq!(s.objective_value, rat(4, 3));
        assert_eq!(s.x, vec![rat(2, 3), rat(2, 3)]);
    }

    #[test]
    fn detects_unbounded() {
        let p = Problem {
            objective: vec![rat_int(1), rat_int(0)],
            rows: vec![(vec![rat_int(-1), rat_int(1)], rat_int(1))],
        };
        assert!(solve(&p).is_err());
    }

    #[test]
    fn degenerate_instance_terminates() {
        // A classic cycling-prone setup; Bland's rule must terminate.
        let p = Problem {
            objective: vec![rat(3, 4), rat_int(-150), rat(1, 50), rat_int(-6)],
            rows: vec![
                (
                    vec![rat(1, 4), rat_int(-60), rat(-1, 25), rat_int(9)],
                    rat_int(0),
                ),
                (
                    vec![rat(1, 2), rat_int(-90), rat(-1, 50), rat_int(3)],
                    rat_int(0),
                ),
                (vec![rat_int(0), rat_int(0), rat_int(1), rat_int(0)], rat_int(1)),
            ],
        };
        let s = solve(&p).unwrap();
        assert_eq!(s.objective_value, rat(1, 20));
    }
}
