//! Smith normal form over the integers, for homology ranks and torsion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

type Int = BigInt;

/// Diagonal invariant factors d_1 | d_2 | ... (nonnegative, zeros trailing),
/// padded to min(rows, cols).
pub fn smith_normal_form(mut m: Vec<Vec<Int>>) -> Vec<Int> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let n = rows.min(cols);
    let mut diag = Vec::with_capacity(n);

    let mut k = 0;
    while k < n {
        // Find a nonzero pivot of least absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if m[i][j].is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => m[i][j].abs() < m[pi][pj].abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let (pi, pj) = match pivot {
            None => break,
            Some(p) => p,
        };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }

        // Clear row and column k; restart if a remainder shrinks the pivot.
        let mut clean = true;
        for i in k + 1..rows {
            if !m[i][k].is_zero() {
                let q = m[i][k].div_floor(&m[k][k]);
                for j in k..cols {
                    let delta = &q * &m[k][j];
                    m[i][j] -= delta;
                }
                if !m[i][k].is_zero() {
                    clean = false;
                }
            }
        }
        for j in k + 1..cols {
            if !m[k][j].is_zero() {
                let q = m[k][j].div_floor(&m[k][k]);
                for i in k..rows {
                    let delta = &q * &m[i][k];
                    m[i][j] -= delta;
                }
                if !m[k][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }

        // Divisibility: fold any bad entry into column k and retry.
        let mut divisible = true;
        'scan: for i in k + 1..rows {
            for j in k + 1..cols {
                if !(&m[i][j] % &m[k][k]).is_zero() {
                    for jj in k..cols {
                        let add = m[i][jj].clone();
                        m[k][jj] += add;
                    }
                    divisible = false;
                    break 'scan;
                }
            }
        }
        if !divisible {
            continue;
        }

        diag.push(m[k][k].abs());
        k += 1;
    }

    while diag.len() < n {
        diag.push(Int::zero());
    }
    diag
}

/// Cokernel of the matrix as a finitely generated abelian group: free rank
/// and the torsion invariant factors greater than 1.
pub fn cokernel(m: Vec<Vec<Int>>, ambient_rank: usize) -> (usize, Vec<Int>) {
    let diag = smith_normal_form(m);
    let nonzero: Vec<&Int> = diag.iter().filter(|d| !d.is_zero()).collect();
    let rank = ambient_rank - nonzero.len();
    let torsion = nonzero
        .into_iter()
        .filter(|d| **d > Int::from(1))
        .cloned()
        .collect();
    (rank, torsion)
}

pub fn matrix_rank(m: Vec<Vec<Int>>) -> usize {
    smith_normal_form(m).iter().filter(|d| !d.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Int::from(v)).collect())
            .collect()
    }

    #[test]
    fn snf_of_known_matrix() {
        // Classic example with invariant factors 1, 3, 21, 0.
        let m = mat(&[
            &[-6, 111, -36, 6],
            &[5, -672, 210, 74],
            &[0, -255, 81, 24],
            &[-7, 255, -81, -10],
        ]);
        let d = smith_normal_form(m);
        assert_eq!(
            d,
            vec![Int::from(1), Int::from(3), Int::from(21), Int::from(0)]
        );
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = mat(&[&[2, 0], &[0, 3]]);
        let d = smith_normal_form(m);
        assert_eq!(d, vec![Int::from(1), Int::from(6)]);
    }

    #[test]
    fn cokernel_of_shear_minus_identity() {
        // [[0,1],[0,0]]: cokernel Z.
        let (rank, torsion) = cokernel(mat(&[&[0, 1], &[0, 0]]), 2);
        assert_eq!(rank, 1);
        assert!(torsion.is_empty());
    }

    #[test]
    fn cokernel_of_anosov_minus_identity() {
        // [[1,1],[1,0]] has determinant -1: trivial cokernel.
        let (rank, torsion) = cokernel(mat(&[&[1, 1], &[1, 0]]), 2);
        assert_eq!(rank, 0);
        assert!(torsion.is_empty());
        // Square of [[2,1],[1,1]] minus identity: determinant -5.
        let (rank, torsion) = cokernel(mat(&[&[4, 3], &[3, 1]]), 2);
        assert_eq!(rank, 0);
        assert_eq!(torsion, vec![Int::from(5)]);
    }

    #[test]
    fn rank_of_rectangular_matrix() {
        assert_eq!(matrix_rank(mat(&[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(matrix_rank(mat(&[&[1, 0, 0], &[0, 0, 5]])), 2);
        assert_eq!(matrix_rank(mat(&[&[0, 0], &[0, 0]])), 0);
    }
}
