//! Branch-and-bound over the exact LP relaxation for integral fillings.
//!
//! Best-first on the LP bound, branching on the most fractional coordinate
//! (ties to the lowest column index). The optimal value is unique, so it is
//! deterministic regardless of exploration order; the witness is whichever
//! optimum is found first.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::{One, Signed, Zero};

use crate::chain::IntChain;
use crate::error::{Error, Result};
use crate::simplex::{Int, Rat};

use super::model::FiniteModel;
use super::simplex_lp::{LpCol, LpOutcome, LpSolution, SimplexSolver};
use super::{structural_cols, verify_certificate, FillMode, FillingCertificate};

#[derive(Clone, Debug)]
struct Branch {
    col: usize,
    /// true: x_col <= bound; false: x_col >= bound.
    upper: bool,
    bound: Int,
}

#[derive(Clone, Debug)]
struct Node {
    parent_bound: Rat,
    branches: Vec<Branch>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.parent_bound == other.parent_bound
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.parent_bound
            .cmp(&other.parent_bound)
            .then(self.branches.len().cmp(&other.branches.len()))
    }
}

pub const DEFAULT_NODE_CAP: usize = 20_000;

/// Exact minimum l1-norm of an integer filling of `z` within the model.
pub fn fill_int(model: &FiniteModel, z: &IntChain, node_cap: usize) -> Result<FillingCertificate> {
    let base_rhs = model.chain_vector(z)?;
    let base_cols = structural_cols(model);

    let mut solves = 0usize;
    let root = solve_node(model, &base_cols, &base_rhs, &[], &mut solves, node_cap)?;
    let root = match root {
        Some(sol) => sol,
        None => {
            return Err(Error::NotABoundaryInModel {
                q: model.q(),
                spread: model.spread(),
            })
        }
    };
    let root_dual: Vec<Rat> = root.dual[..model.rows()].to_vec();

    let mut incumbent: Option<(Rat, Vec<(usize, Int)>)> = None;
    let mut heap: BinaryHeap<Reverse<Node>> = BinaryHeap::new();

    consider_solution(model, &base_rhs, &root, &mut incumbent);
    if let Some(frac) = most_fractional(&root.net) {
        push_children(&mut heap, &root, frac, Vec::new());
    }

    while let Some(Reverse(node)) = heap.pop() {
        if let Some((best, _)) = &incumbent {
            if node.parent_bound >= *best {
                break;
            }
        }
        let sol = solve_node(
            model,
            &base_cols,
            &base_rhs,
            &node.branches,
            &mut solves,
            node_cap,
        )?;
        let sol = match sol {
            Some(s) => s,
            None => continue,
        };
        if let Some((best, _)) = &incumbent {
            if sol.value >= *best {
                continue;
            }
        }
        consider_solution(model, &base_rhs, &sol, &mut incumbent);
        match most_fractional(&sol.net) {
            None => {} // integral: handled by consider_solution
            Some(frac) => push_children(&mut heap, &sol, frac, node.branches.clone()),
        }
    }

    let (value, coeffs) = incumbent.ok_or(Error::NotABoundaryInModel {
        q: model.q(),
        spread: model.spread(),
    })?;
    let witness = model.chain_from_coeffs(&coeffs)?.to_rational();
    let cert = FillingCertificate {
        value,
        witness,
        dual: root_dual,
        mode: FillMode::Integral,
    };
    verify_certificate(model, z, &cert)?;
    Ok(cert)
}

fn push_children(
    heap: &mut BinaryHeap<Reverse<Node>>,
    sol: &LpSolution,
    frac_col: usize,
    parent_branches: Vec<Branch>,
) {
    let v = &sol.net[frac_col];
    let fl = v.floor().to_integer();
    let mut down = parent_branches.clone();
    down.push(Branch {
        col: frac_col,
        upper: true,
        bound: fl.clone(),
    });
    let mut up = parent_branches;
    up.push(Branch {
        col: frac_col,
        upper: false,
        bound: fl + Int::one(),
    });
    heap.push(Reverse(Node {
        parent_bound: sol.value.clone(),
        branches: down,
    }));
    heap.push(Reverse(Node {
        parent_bound: sol.value.clone(),
        branches: up,
    }));
}

/// Most fractional net coordinate; None when the solution is integral.
fn most_fractional(net: &[Rat]) -> Option<usize> {
    let half = Rat::new(Int::one(), Int::from(2));
    let mut best: Option<(Rat, usize)> = None;
    for (j, v) in net.iter().enumerate() {
        if v.is_integer() {
            continue;
        }
        let frac = v.fract().abs();
        let score = if frac > half {
            Rat::one() - frac
        } else {
            frac
        };
        let better = match &best {
            None => true,
            Some((s, _)) => score > *s,
        };
        if better {
            best = Some((score, j));
        }
    }
    best.map(|(_, j)| j)
}

/// Round the LP point to the nearest integer chain and keep it if it is an
/// exact filling; also catches exactly integral LP optima.
fn consider_solution(
    model: &FiniteModel,
    rhs: &[Rat],
    sol: &LpSolution,
    incumbent: &mut Option<(Rat, Vec<(usize, Int)>)>,
) {
    let rounded: Vec<(usize, Int)> = sol
        .net
        .iter()
        .enumerate()
        .filter_map(|(j, v)| {
            let r = v.round().to_integer();
            if r.is_zero() {
                None
            } else {
                Some((j, r))
            }
        })
        .collect();
    let mut acc = vec![Rat::zero(); model.rows()];
    for (j, c) in &rounded {
        for &(row, e) in model.column(*j) {
            acc[row] += Rat::from(c.clone() * Int::from(e));
        }
    }
    if acc != rhs {
        return;
    }
    let norm: Int = rounded.iter().map(|(_, c)| c.abs()).sum();
    let norm = Rat::from(norm);
    let better = match incumbent {
        None => true,
        Some((best, _)) => norm < *best,
    };
    if better {
        *incumbent = Some((norm, rounded));
    }
}

fn solve_node(
    _model: &FiniteModel,
    base_cols: &[LpCol],
    base_rhs: &[Rat],
    branches: &[Branch],
    solves: &mut usize,
    node_cap: usize,
) -> Result<Option<LpSolution>> {
    *solves += 1;
    if *solves > node_cap {
        return Err(Error::NodeCapExhausted { cap: node_cap });
    }
    if branches.is_empty() {
        return match SimplexSolver::new(base_cols, base_rhs).solve()? {
            LpOutcome::Optimal(sol) => Ok(Some(sol)),
            LpOutcome::Infeasible => Ok(None),
        };
    }
    let base_rows = base_rhs.len();
    let mut cols: Vec<LpCol> = base_cols.to_vec();
    let mut rhs = base_rhs.to_vec();
    for (t, b) in branches.iter().enumerate() {
        let row = base_rows + t;
        cols[b.col].entries.push((row, Rat::one()));
        let slack_sign = if b.upper { Rat::one() } else { -Rat::one() };
        cols.push(LpCol {
            entries: vec![(row, slack_sign)],
            cost: Rat::zero(),
            signed: false,
        });
        rhs.push(Rat::from(b.bound.clone()));
    }
    match SimplexSolver::new(&cols, &rhs).solve()? {
        LpOutcome::Optimal(mut sol) => {
            sol.net.truncate(base_cols.len());
            Ok(Some(sol))
        }
        LpOutcome::Infeasible => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::int_chain;
    use crate::filling::fill_real;

    #[test]
    fn integral_filling_of_single_simplex_boundary_has_value_one() {
        let model = FiniteModel::build(1, 1, 1, 2, 10_000).unwrap();
        let z = int_chain(1, 1, &[(2, &[&[0], &[1]]), (-1, &[&[0], &[2]])]);
        let cert = fill_int(&model, &z, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(cert.value, Rat::from(Int::from(1)));
    }

    #[test]
    fn integral_filling_of_zero_is_zero() {
        let model = FiniteModel::build(1, 1, 1, 2, 10_000).unwrap();
        let z = IntChain::zero(1, 1);
        let cert = fill_int(&model, &z, DEFAULT_NODE_CAP).unwrap();
        assert!(cert.value.is_zero());
    }

    #[test]
    fn lp_value_never_exceeds_ilp_value() {
        let model = FiniteModel::build(1, 1, 1, 3, 10_000).unwrap();
        let w = int_chain(1, 2, &[(1, &[&[0], &[1], &[3]]), (1, &[&[0], &[2], &[3]])]);
        let z = w.boundary().unwrap();
        let real = fill_real(&model, &z).unwrap();
        let int = fill_int(&model, &z, DEFAULT_NODE_CAP).unwrap();
        assert!(real.value <= int.value);
    }
}
