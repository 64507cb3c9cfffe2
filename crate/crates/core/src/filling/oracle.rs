//! Brute-force ground truth for integral filling values on small models.
//!
//! Iterative deepening over the total number of simplex units in the filling,
//! entirely independent of the LP/branch-and-bound path: the search walks the
//! residual chain directly. Each step targets the first nonzero residual row,
//! tries every incident column with both unit signs (sign that cancels first),
//! and prunes with the admissible bound ceil(|res|_1 / max column l1).

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::chain::IntChain;
use crate::error::{Error, Result};
use crate::simplex::Int;

use super::model::FiniteModel;

pub const DEFAULT_ORACLE_COLUMN_CAP: usize = 5_000;

/// Least l1-norm of an integer filling of `z`, or None if there is none of
/// norm at most `budget`.
pub fn oracle_fill_int(
    model: &FiniteModel,
    z: &IntChain,
    budget: u32,
    column_cap: usize,
) -> Result<Option<u32>> {
    if model.num_columns() > column_cap {
        return Err(Error::OracleModelTooLarge {
            size: model.num_columns(),
            cap: column_cap,
        });
    }
    let rhs = model.chain_vector(z)?;
    let mut residual: Vec<Int> = rhs
        .iter()
        .map(|v| {
            debug_assert!(v.is_integer());
            v.to_integer()
        })
        .collect();
    if residual.iter().all(|v| v.is_zero()) {
        return Ok(Some(0));
    }
    let incidence = model.incidence_by_row();
    let max_col_l1: i64 = (0..model.num_columns())
        .map(|j| model.column(j).iter().map(|(_, c)| c.abs()).sum::<i64>())
        .max()
        .unwrap_or(1)
        .max(1);

    for n in 1..=budget {
        if search(model, &incidence, &mut residual, n, max_col_l1) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

fn residual_l1(res: &[Int]) -> Int {
    let mut total = Int::zero();
    for v in res {
        if !v.is_zero() {
            total += v.abs();
        }
    }
    total
}

fn search(
    model: &FiniteModel,
    incidence: &[Vec<(usize, i64)>],
    res: &mut Vec<Int>,
    remaining: u32,
    max_col_l1: i64,
) -> bool {
    let l1 = residual_l1(res);
    if l1.is_zero() {
        return true;
    }
    // Admissible lower bound on the remaining units.
    let (need, rem) = l1.div_rem(&Int::from(max_col_l1));
    let need = if rem.is_zero() { need } else { need + 1 };
    if need > Int::from(remaining) {
        return false;
    }

    let row = res.iter().position(|v| !v.is_zero()).expect("l1 > 0");
    let res_sign = if res[row].is_positive() { 1 } else { -1 };

    for &(j, entry) in &incidence[row] {
        // Any unit touching the first nonzero row may be applied first;
        // try the cancelling sign before the reinforcing one.
        let forced = if (entry > 0) == (res_sign > 0) { 1 } else { -1 };
        for s in [forced, -forced] {
            for &(r, c) in model.column(j) {
                res[r] -= Int::from(s * c);
            }
            let found = search(model, incidence, res, remaining - 1, max_col_l1);
            for &(r, c) in model.column(j) {
                res[r] += Int::from(s * c);
            }
            if found {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::int_chain;

    #[test]
    fn oracle_on_zero_chain() {
        let model = FiniteModel::build(1, 1, 1, 2, 10_000).unwrap();
        let z = IntChain::zero(1, 1);
        assert_eq!(oracle_fill_int(&model, &z, 5, 5_000).unwrap(), Some(0));
    }

    #[test]
    fn oracle_finds_single_simplex_filling() {
        let model = FiniteModel::build(1, 1, 1, 2, 10_000).unwrap();
        let z = int_chain(1, 1, &[(2, &[&[0], &[1]]), (-1, &[&[0], &[2]])]);
        assert_eq!(oracle_fill_int(&model, &z, 5, 5_000).unwrap(), Some(1));
    }

    #[test]
    fn oracle_reports_absent_for_non_boundary() {
        // Degree-0 cycles with nonzero total coefficient are never boundaries.
        let model = FiniteModel::build(1, 0, 1, 2, 10_000).unwrap();
        let z = int_chain(1, 0, &[(1, &[&[0]])]);
        assert_eq!(oracle_fill_int(&model, &z, 4, 5_000).unwrap(), None);
    }

    #[test]
    fn oracle_respects_column_cap() {
        let model = FiniteModel::build(1, 1, 1, 2, 10_000).unwrap();
        let z = IntChain::zero(1, 1);
        assert!(matches!(
            oracle_fill_int(&model, &z, 5, 2),
            Err(Error::OracleModelTooLarge { .. })
        ));
    }
}
