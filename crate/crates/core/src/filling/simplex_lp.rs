//! Exact revised simplex over the rationals, specialized for l1-minimal
//! filling problems: min sum |x_j| subject to A x = b.
//!
//! Signed columns are split as x = x+ - x-; the initial basis is the
//! artificial identity, and the basis inverse is kept as a product of eta
//! matrices (exact arithmetic, so the representation never degrades). Pivots
//! follow Bland's rule, which guarantees termination. Phase 1 minimizes the
//! artificial sum; phase 2 keeps zero-level artificials pinned to zero by
//! treating them as fixed at their bound in the ratio test, so redundant rows
//! never need to be deleted and their dual values come out as exact zeros.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::simplex::Rat;

/// One column of the LP: a sparse rational column, its cost, and whether the
/// underlying variable is free (split into two nonnegative parts) or already
/// nonnegative (branch slacks).
#[derive(Clone, Debug)]
pub struct LpCol {
    pub entries: Vec<(usize, Rat)>,
    pub cost: Rat,
    pub signed: bool,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: Rat,
    /// Net value per column (x+ - x- for signed columns).
    pub net: Vec<Rat>,
    /// Dual vector, one entry per row.
    pub dual: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
}

struct Eta {
    row: usize,
    pivot: Rat,
    /// Off-pivot entries of the transformed entering column.
    rest: Vec<(usize, Rat)>,
}

pub struct SimplexSolver<'a> {
    cols: &'a [LpCol],
    rows: usize,
    nvars: usize,
    art_base: usize,
    art_sign: Vec<Rat>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    x: Vec<Rat>,
    etas: Vec<Eta>,
    max_iterations: usize,
}

impl<'a> SimplexSolver<'a> {
    pub fn new(cols: &'a [LpCol], rhs: &[Rat]) -> SimplexSolver<'a> {
        let rows = rhs.len();
        let art_base = 2 * cols.len();
        let art_sign: Vec<Rat> = rhs
            .iter()
            .map(|b| {
                if b.is_negative() {
                    -Rat::one()
                } else {
                    Rat::one()
                }
            })
            .collect();
        let x: Vec<Rat> = rhs.iter().map(|b| b.abs()).collect();
        let basis: Vec<usize> = (0..rows).map(|r| art_base + r).collect();
        let mut in_basis = vec![false; art_base + rows];
        for r in 0..rows {
            in_basis[art_base + r] = true;
        }
        SimplexSolver {
            cols,
            rows,
            nvars: art_base + rows,
            art_base,
            art_sign,
            basis,
            in_basis,
            x,
            etas: Vec::new(),
            max_iterations: 2_000_000,
        }
    }

    fn is_artificial(&self, var: usize) -> bool {
        var >= self.art_base
    }

    fn var_cost(&self, var: usize, phase: u8) -> Rat {
        if self.is_artificial(var) {
            if phase == 1 {
                Rat::one()
            } else {
                Rat::zero()
            }
        } else if phase == 1 {
            Rat::zero()
        } else {
            self.cols[var / 2].cost.clone()
        }
    }

    fn var_enterable(&self, var: usize) -> bool {
        if self.is_artificial(var) {
            return false;
        }
        let col = var / 2;
        if var % 2 == 1 && !self.cols[col].signed {
            return false;
        }
        true
    }

    fn for_col_entries(&self, var: usize, mut f: impl FnMut(usize, &Rat)) {
        if self.is_artificial(var) {
            let r = var - self.art_base;
            f(r, &self.art_sign[r]);
        } else {
            let col = &self.cols[var / 2];
            if var % 2 == 0 {
                for (r, v) in &col.entries {
                    f(*r, v);
                }
            } else {
                for (r, v) in &col.entries {
                    let neg = -v.clone();
                    f(*r, &neg);
                }
            }
        }
    }

    fn sparse_dot(&self, dense: &[Rat], var: usize) -> Rat {
        let mut acc = Rat::zero();
        self.for_col_entries(var, |r, v| {
            if !dense[r].is_zero() {
                acc += dense[r].clone() * v.clone();
            }
        });
        acc
    }

    /// v := B^{-1} v.
    fn ftran(&self, v: &mut [Rat]) {
        for (r, s) in self.art_sign.iter().enumerate() {
            if !v[r].is_zero() && s.is_negative() {
                v[r] = -v[r].clone();
            }
        }
        for eta in &self.etas {
            if v[eta.row].is_zero() {
                continue;
            }
            let p = v[eta.row].clone() / eta.pivot.clone();
            v[eta.row] = p.clone();
            for (i, w) in &eta.rest {
                let delta = w.clone() * p.clone();
                v[*i] -= delta;
            }
        }
    }

    /// y := y B^{-1} (row vector). Each eta only changes component `row`:
    /// y_r <- y_r - (y.w - y_r) / pivot, where w is the stored column.
    fn btran(&self, y: &mut [Rat]) {
        for eta in self.etas.iter().rev() {
            let mut dot = y[eta.row].clone() * eta.pivot.clone();
            for (i, w) in &eta.rest {
                if !y[*i].is_zero() {
                    dot += y[*i].clone() * w.clone();
                }
            }
            let yr = y[eta.row].clone();
            y[eta.row] = yr.clone() - (dot - yr) / eta.pivot.clone();
        }
        for (r, sgn) in self.art_sign.iter().enumerate() {
            if !y[r].is_zero() && sgn.is_negative() {
                y[r] = -y[r].clone();
            }
        }
    }

    fn dual_vector(&self, phase: u8) -> Vec<Rat> {
        let mut y: Vec<Rat> = (0..self.rows)
            .map(|r| self.var_cost(self.basis[r], phase))
            .collect();
        self.btran(&mut y);
        y
    }

    fn objective(&self, phase: u8) -> Rat {
        let mut total = Rat::zero();
        for (r, &var) in self.basis.iter().enumerate() {
            let c = self.var_cost(var, phase);
            if !c.is_zero() {
                total += c * self.x[r].clone();
            }
        }
        total
    }

    /// Run one phase to optimality with Bland's rule. Returns the optimal
    /// dual vector of the phase objective.
    fn optimize(&mut self, phase: u8) -> Result<Vec<Rat>> {
        let mut iterations = 0usize;
        loop {
            iterations += 1;
            if iterations > self.max_iterations {
                return Err(Error::BadCertificate(
                    "simplex iteration cap exceeded".into(),
                ));
            }
            let y = self.dual_vector(phase);

            // Bland: lowest-index nonbasic column with negative reduced cost.
            let mut entering = None;
            for var in 0..self.nvars {
                if self.in_basis[var] || !self.var_enterable(var) {
                    continue;
                }
                let d = self.var_cost(var, phase) - self.sparse_dot(&y, var);
                if d.is_negative() {
                    entering = Some(var);
                    break;
                }
            }
            let entering = match entering {
                Some(v) => v,
                None => return Ok(y),
            };

            let mut w = vec![Rat::zero(); self.rows];
            self.for_col_entries(entering, |r, v| {
                w[r] = v.clone();
            });
            self.ftran(&mut w);

            // Ratio test; Bland tie-break on the smallest leaving variable.
            let mut best: Option<(Rat, usize, usize)> = None; // (ratio, var, row)
            for r in 0..self.rows {
                if w[r].is_zero() {
                    continue;
                }
                let bv = self.basis[r];
                let ratio = if w[r].is_positive() {
                    self.x[r].clone() / w[r].clone()
                } else if phase == 2 && self.is_artificial(bv) {
                    // Zero-level artificial would rise above its bound.
                    debug_assert!(self.x[r].is_zero());
                    Rat::zero()
                } else {
                    continue;
                };
                let replace = match &best {
                    None => true,
                    Some((br, bvar, _)) => ratio < *br || (ratio == *br && bv < *bvar),
                };
                if replace {
                    best = Some((ratio, bv, r));
                }
            }
            let (theta, _, leave_row) = best.ok_or_else(|| {
                Error::BadCertificate("LP unbounded; filling objective cannot be unbounded".into())
            })?;

            // Pivot.
            if !theta.is_zero() {
                for r in 0..self.rows {
                    if !w[r].is_zero() {
                        let delta = theta.clone() * w[r].clone();
                        self.x[r] -= delta;
                    }
                }
            }
            self.x[leave_row] = theta;
            let leaving = self.basis[leave_row];
            self.in_basis[leaving] = false;
            self.in_basis[entering] = true;
            self.basis[leave_row] = entering;

            let pivot = w[leave_row].clone();
            let rest: Vec<(usize, Rat)> = w
                .into_iter()
                .enumerate()
                .filter(|(r, v)| *r != leave_row && !v.is_zero())
                .collect();
            self.etas.push(Eta {
                row: leave_row,
                pivot,
                rest,
            });
        }
    }

    pub fn solve(mut self) -> Result<LpOutcome> {
        self.optimize(1)?;
        if !self.objective(1).is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        let dual = self.optimize(2)?;
        let value = self.objective(2);

        let mut net = vec![Rat::zero(); self.cols.len()];
        for (r, &var) in self.basis.iter().enumerate() {
            if self.is_artificial(var) {
                debug_assert!(self.x[r].is_zero());
                continue;
            }
            let col = var / 2;
            if var % 2 == 0 {
                net[col] += self.x[r].clone();
            } else {
                net[col] -= self.x[r].clone();
            }
        }
        Ok(LpOutcome::Optimal(LpSolution { value, net, dual }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> Rat {
        Rat::from(BigInt::from(n))
    }

    fn signed_col(entries: &[(usize, i64)]) -> LpCol {
        LpCol {
            entries: entries.iter().map(|&(r, v)| (r, rat(v))).collect(),
            cost: rat(1),
            signed: true,
        }
    }

    #[test]
    fn solves_trivial_identity_system() {
        // min |x0| + |x1| with x0 = 3, x1 = -2.
        let cols = vec![signed_col(&[(0, 1)]), signed_col(&[(1, 1)])];
        let rhs = vec![rat(3), rat(-2)];
        match SimplexSolver::new(&cols, &rhs).solve().unwrap() {
            LpOutcome::Optimal(sol) => {
                assert_eq!(sol.value, rat(5));
                assert_eq!(sol.net, vec![rat(3), rat(-2)]);
                // Duals certify: |y_r| <= 1 on each unit column, y.b = 5.
                let yb: Rat = sol.dual[0].clone() * rat(3) + sol.dual[1].clone() * rat(-2);
                assert_eq!(yb, rat(5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn prefers_cheaper_combination() {
        // Rows r0, r1. Col A hits both; cols B, C hit one each.
        // b = (1, 1): using A once costs 1, using B+C costs 2.
        let cols = vec![
            signed_col(&[(0, 1), (1, 1)]),
            signed_col(&[(0, 1)]),
            signed_col(&[(1, 1)]),
        ];
        let rhs = vec![rat(1), rat(1)];
        match SimplexSolver::new(&cols, &rhs).solve().unwrap() {
            LpOutcome::Optimal(sol) => {
                assert_eq!(sol.value, rat(1));
                assert_eq!(sol.net[0], rat(1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_rows() {
        // x - x = 1 has no solution.
        let cols = vec![LpCol {
            entries: vec![(0, rat(1)), (1, rat(1))],
            cost: rat(1),
            signed: true,
        }];
        let rhs = vec![rat(1), rat(0)];
        match SimplexSolver::new(&cols, &rhs).solve().unwrap() {
            LpOutcome::Infeasible => {}
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn redundant_rows_get_zero_duals() {
        // Second row duplicates the first; its artificial stays basic at zero.
        let cols = vec![signed_col(&[(0, 1), (1, 1)])];
        let rhs = vec![rat(2), rat(2)];
        match SimplexSolver::new(&cols, &rhs).solve().unwrap() {
            LpOutcome::Optimal(sol) => {
                assert_eq!(sol.value, rat(2));
                let yb: Rat = sol.dual[0].clone() * rat(2) + sol.dual[1].clone() * rat(2);
                assert_eq!(yb, rat(2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unsigned_slack_column_stays_nonnegative() {
        // Single row: x + s = -1 with x signed, s unsigned slack.
        // Optimal is x = -1 (cost 1), s = 0.
        let cols = vec![
            signed_col(&[(0, 1)]),
            LpCol {
                entries: vec![(0, rat(1))],
                cost: rat(0),
                signed: false,
            },
        ];
        let rhs = vec![rat(-1)];
        match SimplexSolver::new(&cols, &rhs).solve().unwrap() {
            LpOutcome::Optimal(sol) => {
                assert_eq!(sol.value, rat(1));
                assert_eq!(sol.net[0], rat(-1));
                assert_eq!(sol.net[1], rat(0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
