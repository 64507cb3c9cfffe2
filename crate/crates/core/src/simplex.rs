//! Straight singular simplices on the torus T^m = R^m/Z^m, stored as a
//! canonical lift of the vertex tuple.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type Int = BigInt;

/// A point of R^m with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point(pub Vec<Rat>);

impl Point {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn from_ints(coords: &[i64]) -> Point {
        Point(coords.iter().map(|&c| Rat::from(Int::from(c))).collect())
    }

    /// Coordinate-wise p/q points, e.g. `[(1,2)]` is (1/2).
    pub fn from_pairs(coords: &[(i64, i64)]) -> Point {
        Point(
            coords
                .iter()
                .map(|&(n, d)| Rat::new(Int::from(n), Int::from(d)))
                .collect(),
        )
    }

    fn translate(&self, t: &[Int]) -> Point {
        Point(
            self.0
                .iter()
                .zip(t)
                .map(|(c, ti)| c - Rat::from(ti.clone()))
                .collect(),
        )
    }
}

/// A straight singular simplex on T^m, identified by the canonical lift of its
/// vertex tuple: the tuple is translated by the unique integer vector placing
/// the first vertex in [0,1)^m. Vertex order is significant, and degenerate
/// tuples (repeated or affinely dependent vertices, degree above m) are
/// allowed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StraightSimplex {
    vertices: Vec<Point>,
}

impl StraightSimplex {
    /// Canonicalize a vertex tuple. Two tuples related by an integer
    /// translation yield the same simplex.
    pub fn new(vertices: Vec<Point>) -> Result<StraightSimplex> {
        if vertices.is_empty() {
            return Err(Error::EmptyVertexTuple);
        }
        let m = vertices[0].dim();
        for v in &vertices {
            if v.dim() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: v.dim(),
                });
            }
        }
        let shift: Vec<Int> = vertices[0].0.iter().map(|c| c.floor().to_integer()).collect();
        let canon = if shift.iter().all(|s| s.is_zero()) {
            vertices
        } else {
            vertices.iter().map(|v| v.translate(&shift)).collect()
        };
        Ok(StraightSimplex { vertices: canon })
    }

    /// Convenience constructor from integer coordinates; one slice per vertex.
    pub fn from_int_rows(rows: &[&[i64]]) -> StraightSimplex {
        StraightSimplex::new(rows.iter().map(|r| Point::from_ints(r)).collect()).unwrap()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn degree(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// The face opposite vertex `i` (vertex `i` dropped, result re-canonicalized).
    pub fn face(&self, i: usize) -> StraightSimplex {
        debug_assert!(self.degree() >= 1 && i <= self.degree());
        let mut verts = self.vertices.clone();
        verts.remove(i);
        StraightSimplex::new(verts).expect("face of a valid simplex is valid")
    }

    /// Per-coordinate spread: max over coordinates of (max - min) over vertices.
    /// Translation-invariant, and never increases when a vertex is dropped.
    pub fn spread(&self) -> Rat {
        let m = self.ambient_dim();
        let mut best = Rat::zero();
        for c in 0..m {
            let mut lo = self.vertices[0].0[c].clone();
            let mut hi = lo.clone();
            for v in &self.vertices[1..] {
                if v.0[c] < lo {
                    lo = v.0[c].clone();
                }
                if v.0[c] > hi {
                    hi = v.0[c].clone();
                }
            }
            let range = hi - lo;
            if range > best {
                best = range;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex(rows: &[&[i64]]) -> StraightSimplex {
        StraightSimplex::from_int_rows(rows)
    }

    #[test]
    fn canonicalize_translates_first_vertex_into_unit_cube() {
        let s = simplex(&[&[1, 0], &[2, 0], &[2, 1]]);
        let expected = simplex(&[&[0, 0], &[1, 0], &[1, 1]]);
        assert_eq!(s, expected);
    }

    #[test]
    fn canonicalize_handles_large_translations() {
        // k = 2: first vertex 2^{2k} = 16.
        let s = simplex(&[&[16, 0], &[17, 0], &[17, 1]]);
        let expected = simplex(&[&[0, 0], &[1, 0], &[1, 1]]);
        assert_eq!(s, expected);
    }

    #[test]
    fn canonicalize_is_identity_on_canonical_input() {
        let s = simplex(&[&[0, 0], &[0, 1], &[1, 1]]);
        let again = StraightSimplex::new(s.vertices().to_vec()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn canonicalize_with_rational_first_vertex() {
        let s = StraightSimplex::new(vec![
            Point::from_pairs(&[(3, 2), (0, 1)]),
            Point::from_pairs(&[(2, 1), (1, 1)]),
        ])
        .unwrap();
        let expected = StraightSimplex::new(vec![
            Point::from_pairs(&[(1, 2), (0, 1)]),
            Point::from_pairs(&[(1, 1), (1, 1)]),
        ])
        .unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let r = StraightSimplex::new(vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1])]);
        assert!(r.is_err());
    }

    #[test]
    fn face_drops_vertex_and_recanonicalizes() {
        // Dropping the first vertex forces a new translation.
        let s = simplex(&[&[0], &[2], &[1]]);
        assert_eq!(s.face(0), simplex(&[&[2], &[1]]));
        assert_eq!(s.face(0), simplex(&[&[0], &[-1]]));
    }

    #[test]
    fn spread_is_translation_invariant_and_monotone_under_faces() {
        let s = simplex(&[&[0, 0], &[3, 1], &[1, 2]]);
        assert_eq!(s.spread(), Rat::from(Int::from(3)));
        for i in 0..3 {
            assert!(s.face(i).spread() <= s.spread());
        }
    }
}
