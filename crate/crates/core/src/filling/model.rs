//! Finite universes of straight simplices and their boundary matrices.
//!
//! A model is parameterized by the ambient dimension m, the degree d of the
//! cycles to fill, a grid denominator q and a spread bound D. The universes
//! U_d and U_{d+1} hold every canonical straight simplex whose vertices lie in
//! (1/q)Z^m with per-coordinate spread at most D. The spread bound (not a
//! bounding box) is what makes the universes closed under faces: dropping a
//! vertex never increases spread, and canonicalization is a translation.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::chain::{Chain, Coeff, IntChain};
use crate::error::{Error, Result};
use crate::simplex::{Int, Point, Rat, StraightSimplex};

#[derive(Clone, Debug)]
pub struct FiniteModel {
    ambient_dim: usize,
    degree: usize,
    q: u32,
    spread: u32,
    u_low: Vec<StraightSimplex>,
    u_high: Vec<StraightSimplex>,
    low_index: HashMap<StraightSimplex, usize>,
    /// Column j = coordinates of boundary(u_high[j]) in the U_d basis.
    columns: Vec<Vec<(usize, i64)>>,
}

pub const DEFAULT_UNIVERSE_CAP: usize = 200_000;

impl FiniteModel {
    /// Enumerate both universes and assemble the boundary matrix.
    pub fn build(
        ambient_dim: usize,
        degree: usize,
        q: u32,
        spread: u32,
        cap: usize,
    ) -> Result<FiniteModel> {
        assert!(q >= 1 && spread >= 1, "q and D must be positive");
        assert!(ambient_dim >= 1);

        let high_count = universe_size(ambient_dim, degree + 1, q, spread);
        if high_count > cap {
            return Err(Error::UniverseTooLarge {
                size: high_count,
                cap,
                degree: degree + 1,
                q,
                spread,
            });
        }

        let mut u_low = enumerate_universe(ambient_dim, degree, q, spread);
        let mut u_high = enumerate_universe(ambient_dim, degree + 1, q, spread);
        u_low.sort();
        u_high.sort();

        let low_index: HashMap<StraightSimplex, usize> = u_low
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();

        let mut columns = Vec::with_capacity(u_high.len());
        for s in &u_high {
            let single = Chain::from_terms(ambient_dim, degree + 1, [(s.clone(), Int::from(1))])?;
            let b = single.boundary()?;
            let mut col = Vec::with_capacity(degree + 2);
            for (face, coeff) in b.terms() {
                let row = *low_index.get(face).ok_or_else(|| {
                    Error::InvalidTriangulation(format!(
                        "face of a universe simplex escaped the universe: {:?}",
                        face
                    ))
                })?;
                let c = int_to_i64(coeff)?;
                col.push((row, c));
            }
            col.sort_unstable();
            columns.push(col);
        }

        Ok(FiniteModel {
            ambient_dim,
            degree,
            q,
            spread,
            u_low,
            u_high,
            low_index,
            columns,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn spread(&self) -> u32 {
        self.spread
    }

    pub fn rows(&self) -> usize {
        self.u_low.len()
    }

    pub fn num_columns(&self) -> usize {
        self.u_high.len()
    }

    pub fn low_simplices(&self) -> &[StraightSimplex] {
        &self.u_low
    }

    pub fn high_simplices(&self) -> &[StraightSimplex] {
        &self.u_high
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.columns[j]
    }

    pub fn contains_low(&self, s: &StraightSimplex) -> bool {
        self.low_index.contains_key(s)
    }

    /// Express a degree-d chain as a dense coordinate vector over U_d.
    pub fn chain_vector<C: Coeff>(&self, z: &Chain<C>) -> Result<Vec<Rat>> {
        if z.ambient_dim() != self.ambient_dim || z.degree() != self.degree {
            return Err(Error::ChainNotInModel {
                degree: self.degree,
            });
        }
        let mut v = vec![Rat::from(BigInt::from(0)); self.u_low.len()];
        for (s, c) in z.terms() {
            let row = *self
                .low_index
                .get(s)
                .ok_or(Error::ChainNotInModel {
                    degree: self.degree,
                })?;
            v[row] = c.to_rat();
        }
        Ok(v)
    }

    /// Rebuild a degree-(d+1) chain from per-column coefficients.
    pub fn chain_from_coeffs<C: Coeff>(&self, coeffs: &[(usize, C)]) -> Result<Chain<C>> {
        Chain::from_terms(
            self.ambient_dim,
            self.degree + 1,
            coeffs
                .iter()
                .map(|(j, c)| (self.u_high[*j].clone(), c.clone())),
        )
    }

    /// Columns incident to each row, for the oracle's residual-directed search.
    pub fn incidence_by_row(&self) -> Vec<Vec<(usize, i64)>> {
        let mut inc = vec![Vec::new(); self.u_low.len()];
        for (j, col) in self.columns.iter().enumerate() {
            for &(row, c) in col {
                inc[row].push((j, c));
            }
        }
        inc
    }
}

fn int_to_i64(v: &Int) -> Result<i64> {
    i64::try_from(v.clone()).map_err(|_| Error::JsonRange(v.to_string()))
}

/// Per-coordinate scalar tuples: `len` grid values (numerators over q), first
/// in [0, q), joint range at most D*q, in lexicographic order.
fn coordinate_tuples(len: usize, q: u32, spread: u32) -> Vec<Vec<i64>> {
    let window = (spread as i64) * (q as i64);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    for first in 0..q as i64 {
        cur.push(first);
        extend_tuples(&mut cur, len, first, first, window, &mut out);
        cur.pop();
    }
    out
}

fn extend_tuples(
    cur: &mut Vec<i64>,
    len: usize,
    min: i64,
    max: i64,
    window: i64,
    out: &mut Vec<Vec<i64>>,
) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for v in (max - window)..=(min + window) {
        let (nmin, nmax) = (min.min(v), max.max(v));
        cur.push(v);
        extend_tuples(cur, len, nmin, nmax, window, out);
        cur.pop();
    }
}

fn universe_size(m: usize, degree: usize, q: u32, spread: u32) -> usize {
    let per_coord = coordinate_tuples(degree + 1, q, spread).len();
    per_coord.checked_pow(m as u32).unwrap_or(usize::MAX)
}

fn enumerate_universe(m: usize, degree: usize, q: u32, spread: u32) -> Vec<StraightSimplex> {
    let tuples = coordinate_tuples(degree + 1, q, spread);
    let mut out = Vec::new();
    let mut pick = vec![0usize; m];
    loop {
        let verts: Vec<Point> = (0..=degree)
            .map(|vi| {
                Point(
                    (0..m)
                        .map(|c| BigRational::new(Int::from(tuples[pick[c]][vi]), Int::from(q)))
                        .collect(),
                )
            })
            .collect();
        let s = StraightSimplex::new(verts).expect("enumerated tuples are valid");
        debug_assert!(s.spread() <= Rat::from(Int::from(spread as i64)));
        out.push(s);

        // odometer over the m coordinate choices
        let mut c = 0;
        loop {
            if c == m {
                return out;
            }
            pick[c] += 1;
            if pick[c] < tuples.len() {
                break;
            }
            pick[c] = 0;
            c += 1;
        }
    }
}

/// Convenience: the boundary of an integer chain supported on U_{d+1},
/// computed through the model's columns (used to cross-check witnesses
/// against the chain-level boundary).
pub fn column_boundary(model: &FiniteModel, coeffs: &[(usize, Int)]) -> Vec<Rat> {
    let mut v = vec![Rat::from(BigInt::from(0)); model.rows()];
    for (j, c) in coeffs {
        for &(row, e) in model.column(*j) {
            v[row] += Rat::from(c.clone() * Int::from(e));
        }
    }
    v
}

pub fn int_chain_coeffs(model: &FiniteModel, chain: &IntChain) -> Result<Vec<(usize, Int)>> {
    let idx: HashMap<&StraightSimplex, usize> = model
        .u_high
        .iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    chain
        .terms()
        .map(|(s, c)| {
            idx.get(s)
                .map(|&j| (j, c.clone()))
                .ok_or(Error::ChainNotInModel {
                    degree: model.degree + 1,
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::int_chain;

    #[test]
    fn circle_universe_small() {
        // m=1, 1-simplices, q=1, D=2: first vertex 0, second in [-2, 2].
        let model = FiniteModel::build(1, 1, 1, 2, 10_000).unwrap();
        assert_eq!(model.rows(), 5);
        for s in model.low_simplices() {
            assert_eq!(s.degree(), 1);
            assert!(s.spread() <= Rat::from(Int::from(2)));
        }
    }

    #[test]
    fn faces_stay_in_low_universe() {
        let model = FiniteModel::build(1, 1, 2, 2, 100_000).unwrap();
        for j in 0..model.num_columns() {
            for &(row, _) in model.column(j) {
                assert!(row < model.rows());
            }
        }
    }

    #[test]
    fn torus_model_contains_unit_square_cycles() {
        let model = FiniteModel::build(2, 2, 2, 1, 100_000).unwrap();
        let c = int_chain(
            2,
            2,
            &[
                (1, &[&[0, 0], &[1, 0], &[1, 1]]),
                (-1, &[&[0, 0], &[0, 1], &[1, 1]]),
            ],
        );
        for (s, _) in c.terms() {
            assert!(model.contains_low(s));
        }
        assert!(model.chain_vector(&c).is_ok());
    }

    #[test]
    fn single_column_is_the_boundary() {
        // d[0,1,2] = 2[0,1] - [0,2] on S^1.
        let model = FiniteModel::build(1, 1, 1, 2, 10_000).unwrap();
        let target = StraightSimplex::from_int_rows(&[&[0], &[1], &[2]]);
        let j = model
            .high_simplices()
            .iter()
            .position(|s| *s == target)
            .unwrap();
        let b = int_chain(1, 1, &[(2, &[&[0], &[1]]), (-1, &[&[0], &[2]])]);
        let v = model.chain_vector(&b).unwrap();
        let col = column_boundary(&model, &[(j, Int::from(1))]);
        assert_eq!(v, col);
    }

    #[test]
    fn cap_is_enforced_with_counts() {
        let err = FiniteModel::build(2, 2, 2, 2, 100).unwrap_err();
        match err {
            Error::UniverseTooLarge { size, cap, .. } => {
                assert!(size > cap);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn universe_counts_match_per_coordinate_product() {
        // m=2, triples, q=2, D=1: 38 per coordinate -> 38^2 total.
        let model = FiniteModel::build(2, 2, 2, 1, 100_000).unwrap();
        assert_eq!(model.rows(), 38 * 38);
        assert_eq!(model.num_columns(), 130 * 130);
    }
}
