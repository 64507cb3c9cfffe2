//! Chains of straight simplices with exact integer or rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::simplex::{Int, Point, Rat, StraightSimplex};

/// Coefficient rings usable in a chain: Z for the constructions, Q for LP witnesses.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + std::ops::Add<Output = Self>
    + std::ops::Neg<Output = Self>
    + std::ops::Mul<Output = Self>
    + Zero
    + Signed
{
    fn to_rat(&self) -> Rat;
}

impl Coeff for Int {
    fn to_rat(&self) -> Rat {
        Rat::from(self.clone())
    }
}

impl Coeff for Rat {
    fn to_rat(&self) -> Rat {
        self.clone()
    }
}

/// A finite combination of straight simplices of one fixed degree and ambient
/// dimension. Zero coefficients are never stored; keys are canonical lifts, so
/// structural equality is equality of chains.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain<C: Coeff> {
    ambient_dim: usize,
    degree: usize,
    terms: BTreeMap<StraightSimplex, C>,
}

pub type IntChain = Chain<Int>;
pub type RatChain = Chain<Rat>;

impl<C: Coeff> Chain<C> {
    pub fn zero(ambient_dim: usize, degree: usize) -> Chain<C> {
        Chain {
            ambient_dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(ambient_dim: usize, degree: usize, terms: I) -> Result<Chain<C>>
    where
        I: IntoIterator<Item = (StraightSimplex, C)>,
    {
        let mut chain = Chain::zero(ambient_dim, degree);
        for (s, c) in terms {
            chain.add_term(s, c)?;
        }
        Ok(chain)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&StraightSimplex, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &StraightSimplex) -> C {
        self.terms.get(s).cloned().unwrap_or_else(C::zero)
    }

    /// Add `c * s`, combining with any existing term and pruning zeros.
    pub fn add_term(&mut self, s: StraightSimplex, c: C) -> Result<()> {
        if s.ambient_dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: s.ambient_dim(),
            });
        }
        if s.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: s.degree(),
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(s) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Chain<C>) -> Result<Chain<C>> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Chain<C>) -> Result<Chain<C>> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> Chain<C> {
        Chain {
            ambient_dim: self.ambient_dim,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &C) -> Chain<C> {
        if factor.is_zero() {
            return Chain::zero(self.ambient_dim, self.degree);
        }
        Chain {
            ambient_dim: self.ambient_dim,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s.clone(), c.clone() * factor.clone()))
                .collect(),
        }
    }

    /// l1-norm: sum of |coefficient| over the reduced form.
    pub fn l1_norm(&self) -> C {
        let mut total = C::zero();
        for c in self.terms.values() {
            total = total + c.abs();
        }
        total
    }

    /// Singular boundary, each face canonicalized before coefficients combine.
    pub fn boundary(&self) -> Result<Chain<C>> {
        if self.degree == 0 {
            return Err(Error::DegreeZeroBoundary);
        }
        let mut out = Chain::zero(self.ambient_dim, self.degree - 1);
        for (s, c) in &self.terms {
            for i in 0..=self.degree {
                let coeff = if i % 2 == 0 { c.clone() } else { -c.clone() };
                out.add_term(s.face(i), coeff)?;
            }
        }
        Ok(out)
    }

    /// The class of a top-degree cycle in H_m(T^m) = Z, computed as the sum of
    /// signed volumes of the canonical lifts: sum over terms of
    /// coeff * det(v_1-v_0, ..., v_m-v_0) / m!. Returns a rational; for cycles
    /// it is the integer multiple of the fundamental class.
    pub fn cycle_class(&self) -> Result<Rat> {
        if self.degree != self.ambient_dim {
            return Err(Error::DegreeNotTop {
                degree: self.degree,
                ambient: self.ambient_dim,
            });
        }
        let m = self.ambient_dim;
        let mut factorial = Int::from(1);
        for i in 2..=m {
            factorial *= Int::from(i as i64);
        }
        let mut total = Rat::zero();
        for (s, c) in &self.terms {
            let verts = s.vertices();
            let rows: Vec<Vec<Rat>> = (1..=m)
                .map(|i| {
                    (0..m)
                        .map(|j| verts[i].0[j].clone() - verts[0].0[j].clone())
                        .collect()
                })
                .collect();
            total += c.to_rat() * det(rows);
        }
        Ok(total / Rat::from(factorial))
    }
}

impl IntChain {
    pub fn to_rational(&self) -> RatChain {
        Chain {
            ambient_dim: self.ambient_dim,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s.clone(), Rat::from(c.clone())))
                .collect(),
        }
    }
}

impl RatChain {
    /// Exact integer-chain view; None if any coefficient is fractional.
    pub fn to_integer(&self) -> Option<IntChain> {
        let mut terms = BTreeMap::new();
        for (s, c) in &self.terms {
            if !c.is_integer() {
                return None;
            }
            terms.insert(s.clone(), c.to_integer());
        }
        Some(Chain {
            ambient_dim: self.ambient_dim,
            degree: self.degree,
            terms,
        })
    }
}

impl<C: Coeff> Chain<C> {
    fn check_compatible(&self, other: &Chain<C>) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }
}

/// Determinant by fraction-free-ish Gaussian elimination over Q.
fn det(mut rows: Vec<Vec<Rat>>) -> Rat {
    let n = rows.len();
    let mut sign = Rat::from(Int::from(1));
    let mut result = Rat::from(Int::from(1));
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            rows.swap(pivot, col);
            sign = -sign;
        }
        let p = rows[col][col].clone();
        result *= p.clone();
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone() / p.clone();
            for c in col..n {
                let delta = factor.clone() * rows[col][c].clone();
                rows[r][c] -= delta;
            }
        }
    }
    sign * result
}

/// Shorthand for building integer chains in tests and constructions:
/// each term is (coefficient, vertex rows).
pub fn int_chain(ambient_dim: usize, degree: usize, terms: &[(i64, &[&[i64]])]) -> IntChain {
    Chain::from_terms(
        ambient_dim,
        degree,
        terms.iter().map(|&(c, rows)| {
            (
                StraightSimplex::new(rows.iter().map(|r| Point::from_ints(r)).collect()).unwrap(),
                Int::from(c),
            )
        }),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_of_wraparound_edge_cancels() {
        // The edge [0,1] on S^1: both endpoint 0-simplices canonicalize to [0].
        let c = int_chain(1, 1, &[(1, &[&[0], &[1]])]);
        assert!(c.boundary().unwrap().is_zero());
    }

    #[test]
    fn boundary_of_interval_simplex_combines_faces() {
        // d[0,1,2] on S^1 = [1,2] - [0,2] + [0,1] = 2[0,1] - [0,2].
        let c = int_chain(1, 2, &[(1, &[&[0], &[1], &[2]])]);
        let b = c.boundary().unwrap();
        let expected = int_chain(1, 1, &[(2, &[&[0], &[1]]), (-1, &[&[0], &[2]])]);
        assert_eq!(b, expected);
    }

    #[test]
    fn boundary_squares_to_zero() {
        let w = int_chain(
            2,
            3,
            &[
                (2, &[&[0, 0], &[1, 0], &[3, 1], &[2, 2]]),
                (-1, &[&[0, 1], &[1, 1], &[0, 3], &[1, 0]]),
            ],
        );
        let bb = w.boundary().unwrap().boundary().unwrap();
        assert!(bb.is_zero());
    }

    #[test]
    fn add_negate_scale() {
        let c = int_chain(2, 2, &[(1, &[&[0, 0], &[1, 0], &[1, 1]])]);
        assert!(c.add(&c.negate()).unwrap().is_zero());
        assert!(c.scale(&Int::from(0)).is_zero());
        assert_eq!(c.scale(&Int::from(3)).l1_norm(), Int::from(3));
    }

    #[test]
    fn mismatched_chains_rejected() {
        let c1 = int_chain(2, 2, &[(1, &[&[0, 0], &[1, 0], &[1, 1]])]);
        let c2 = int_chain(1, 2, &[(1, &[&[0], &[1], &[2]])]);
        assert!(c1.add(&c2).is_err());
        let c3 = int_chain(2, 1, &[(1, &[&[0, 0], &[1, 1]])]);
        assert!(c1.add(&c3).is_err());
    }

    #[test]
    fn l1_norm_of_zero_chain() {
        let z = IntChain::zero(2, 2);
        assert_eq!(z.l1_norm(), Int::from(0));
    }

    #[test]
    fn cycle_class_requires_top_degree() {
        let c = int_chain(2, 1, &[(1, &[&[0, 0], &[1, 1]])]);
        assert!(c.cycle_class().is_err());
    }

    #[test]
    fn det_small_cases() {
        let two = |v: i64| Rat::from(Int::from(v));
        assert_eq!(det(vec![vec![two(3)]]), two(3));
        assert_eq!(
            det(vec![vec![two(1), two(2)], vec![two(3), two(4)]]),
            two(-2)
        );
        assert_eq!(
            det(vec![vec![two(0), two(1)], vec![two(1), two(0)]]),
            two(-1)
        );
    }
}
