//! Affine maps between tori and their action on chains.

use num_traits::{One, Zero};

use crate::chain::{Chain, Coeff};
use crate::error::{Error, Result};
use crate::simplex::{Int, Point, Rat, StraightSimplex};

/// `x -> Mx + t` from T^m to T^n. An integer matrix is exactly the condition
/// for the affine map to descend to the quotient tori; the translation part
/// may be any rational vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineTorusMap {
    matrix: Vec<Vec<Int>>, // n rows, m columns
    translation: Vec<Rat>, // n entries
}

impl AffineTorusMap {
    pub fn new(matrix: Vec<Vec<Int>>, translation: Vec<Rat>) -> Result<AffineTorusMap> {
        let n = matrix.len();
        if translation.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: translation.len(),
            });
        }
        if n > 0 {
            let m = matrix[0].len();
            for row in &matrix {
                if row.len() != m {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        got: row.len(),
                    });
                }
            }
        }
        Ok(AffineTorusMap {
            matrix,
            translation,
        })
    }

    pub fn linear(matrix: Vec<Vec<Int>>) -> Result<AffineTorusMap> {
        let n = matrix.len();
        AffineTorusMap::new(matrix, vec![Rat::zero(); n])
    }

    pub fn from_int_matrix(rows: &[&[i64]]) -> AffineTorusMap {
        AffineTorusMap::linear(
            rows.iter()
                .map(|r| r.iter().map(|&e| Int::from(e)).collect())
                .collect(),
        )
        .unwrap()
    }

    pub fn identity(dim: usize) -> AffineTorusMap {
        let matrix = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Int::one() } else { Int::zero() })
                    .collect()
            })
            .collect();
        AffineTorusMap::linear(matrix).unwrap()
    }

    pub fn domain_dim(&self) -> usize {
        if self.matrix.is_empty() {
            0
        } else {
            self.matrix[0].len()
        }
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Int>] {
        &self.matrix
    }

    pub fn apply_point(&self, p: &Point) -> Result<Point> {
        if p.dim() != self.domain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain_dim(),
                got: p.dim(),
            });
        }
        let coords = self
            .matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| {
                let mut acc = t.clone();
                for (a, x) in row.iter().zip(&p.0) {
                    acc += Rat::from(a.clone()) * x;
                }
                acc
            })
            .collect();
        Ok(Point(coords))
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &AffineTorusMap) -> Result<AffineTorusMap> {
        if self.domain_dim() != other.codomain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain_dim(),
                got: other.codomain_dim(),
            });
        }
        let n = self.codomain_dim();
        let m = other.domain_dim();
        let mut matrix = vec![vec![Int::zero(); m]; n];
        for i in 0..n {
            for j in 0..m {
                for k in 0..self.domain_dim() {
                    matrix[i][j] += &self.matrix[i][k] * &other.matrix[k][j];
                }
            }
        }
        let translation = self
            .matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| {
                let mut acc = t.clone();
                for (a, x) in row.iter().zip(&other.translation) {
                    acc += Rat::from(a.clone()) * x;
                }
                acc
            })
            .collect();
        AffineTorusMap::new(matrix, translation)
    }

    /// `self` composed with itself `k` times (k >= 1).
    pub fn power(&self, k: u64) -> Result<AffineTorusMap> {
        assert!(k >= 1, "power requires k >= 1");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    pub fn apply_simplex(&self, s: &StraightSimplex) -> Result<StraightSimplex> {
        let verts = s
            .vertices()
            .iter()
            .map(|v| self.apply_point(v))
            .collect::<Result<Vec<_>>>()?;
        StraightSimplex::new(verts)
    }

    /// Pushforward on chains: map each canonical lift vertex-wise, then
    /// re-canonicalize and combine coefficients. Commutes with the boundary.
    pub fn pushforward<C: Coeff>(&self, chain: &Chain<C>) -> Result<Chain<C>> {
        if chain.ambient_dim() != self.domain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain_dim(),
                got: chain.ambient_dim(),
            });
        }
        let mut out = Chain::zero(self.codomain_dim(), chain.degree());
        for (s, c) in chain.terms() {
            out.add_term(self.apply_simplex(s)?, c.clone())?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::int_chain;

    #[test]
    fn identity_pushforward_is_identity() {
        let c = int_chain(
            2,
            2,
            &[
                (1, &[&[0, 0], &[1, 0], &[1, 1]]),
                (-1, &[&[0, 0], &[0, 1], &[1, 1]]),
            ],
        );
        let id = AffineTorusMap::identity(2);
        assert_eq!(id.pushforward(&c).unwrap(), c);
    }

    #[test]
    fn shear_power_matches_direct_matrix() {
        let f = AffineTorusMap::from_int_matrix(&[&[1, 1], &[0, 1]]);
        let f3 = f.power(3).unwrap();
        assert_eq!(f3, AffineTorusMap::from_int_matrix(&[&[1, 3], &[0, 1]]));
    }

    #[test]
    fn pushforward_commutes_with_boundary() {
        let c = int_chain(
            2,
            2,
            &[
                (2, &[&[0, 0], &[2, 1], &[1, 1]]),
                (-1, &[&[0, 0], &[0, 1], &[3, 1]]),
            ],
        );
        let phi = AffineTorusMap::from_int_matrix(&[&[1, 4], &[2, 1]]);
        let a = phi.pushforward(&c).unwrap().boundary().unwrap();
        let b = phi.pushforward(&c.boundary().unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pushforward_is_norm_non_increasing() {
        let c = int_chain(
            2,
            2,
            &[
                (1, &[&[0, 0], &[1, 0], &[1, 1]]),
                (-1, &[&[0, 0], &[0, 1], &[1, 1]]),
            ],
        );
        // Collapse everything to a point: both terms land on the same
        // degenerate simplex and cancel.
        let collapse = AffineTorusMap::from_int_matrix(&[&[0, 0], &[0, 0]]);
        let image = collapse.pushforward(&c).unwrap();
        assert!(image.l1_norm() <= c.l1_norm());
        assert!(image.is_zero());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let c = int_chain(1, 1, &[(1, &[&[0], &[1]])]);
        let phi = AffineTorusMap::from_int_matrix(&[&[1, 0], &[0, 1]]);
        assert!(phi.pushforward(&c).is_err());
    }
}
