//! SL(2,Z) mapping classes of the torus and the Farey flip graph.
//!
//! Torus mapping classes are periodic, a reducible twist power, or Anosov,
//! decided by the trace. One-vertex torus triangulations are encoded as
//! triples of pairwise-unimodular slopes; a flip swaps one slope for the
//! opposite diagonal of the surrounding quadrilateral. The flip graph is the
//! dual tree of the Farey tessellation, so distances are computed either by
//! breadth-first search (capped) or by reading off the free-product normal
//! form of the matrix carrying one triangle to the other.

use std::collections::{HashMap, VecDeque};

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Ratio64 = Ratio<i64>;

/// An element of SL(2,Z), row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Sl2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Sl2> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(Error::NotSl2(det));
        }
        Ok(Sl2 { a, b, c, d })
    }

    pub fn identity() -> Sl2 {
        Sl2 { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn shear() -> Sl2 {
        Sl2 { a: 1, b: 1, c: 0, d: 1 }
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn pow(&self, n: u32) -> Sl2 {
        let mut acc = Sl2::identity();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_plus_minus_identity(&self) -> bool {
        (self.a == 1 && self.d == 1 && self.b == 0 && self.c == 0)
            || (self.a == -1 && self.d == -1 && self.b == 0 && self.c == 0)
    }

    /// Parse "a,b,c,d".
    pub fn parse(text: &str) -> Result<Sl2> {
        let parts: Vec<i64> = text
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("bad matrix entry: {e}")))?;
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected 4 entries a,b,c,d, got {}",
                parts.len()
            )));
        }
        Sl2::new(parts[0], parts[1], parts[2], parts[3])
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MappingClass {
    Periodic { order: u32 },
    ReducibleTwist,
    Anosov,
}

/// Trace trichotomy: |tr| < 2 or +-I periodic, |tr| = 2 (not +-I) a twist
/// power, |tr| > 2 Anosov. Torsion orders in SL(2,Z) divide 12, so the order
/// is found by iterating.
pub fn classify(m: &Sl2) -> MappingClass {
    let t = m.trace().abs();
    if m.is_plus_minus_identity() || t < 2 {
        let mut p = *m;
        for order in 1..=12u32 {
            if p == Sl2::identity() {
                return MappingClass::Periodic { order };
            }
            p = p.mul(m);
        }
        unreachable!("finite-order elements of SL(2,Z) have order dividing 12");
    } else if t == 2 {
        MappingClass::ReducibleTwist
    } else {
        MappingClass::Anosov
    }
}

/// Whether the integral filling volume of the class is positive: exactly the
/// Anosov case on the torus.
pub fn fv_positive(m: &Sl2) -> bool {
    classify(m) == MappingClass::Anosov
}

/// A primitive slope with canonical sign: first nonzero entry positive.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Slope> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidTriangle("zero slope".into()));
        }
        let g = gcd(p.abs(), q.abs());
        let (mut p, mut q) = (p / g, q / g);
        if p < 0 || (p == 0 && q < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    fn det(&self, other: &Slope) -> i64 {
        self.p * other.q - self.q * other.p
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// A one-vertex torus triangulation as a triple of pairwise-unimodular
/// slopes. Slot order is kept as given so that flipping a slot twice is the
/// identity; equality, ordering and hashing compare the sorted triple.
#[derive(Clone, Copy, Debug)]
pub struct FareyTriangle {
    slopes: [Slope; 3],
}

impl PartialEq for FareyTriangle {
    fn eq(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}
impl Eq for FareyTriangle {}
impl PartialOrd for FareyTriangle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FareyTriangle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.normalized().cmp(&other.normalized())
    }
}
impl std::hash::Hash for FareyTriangle {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.normalized().hash(state);
    }
}

impl FareyTriangle {
    pub fn new(slopes: [Slope; 3]) -> Result<FareyTriangle> {
        for i in 0..3 {
            for j in i + 1..3 {
                if slopes[i] == slopes[j] {
                    return Err(Error::InvalidTriangle("repeated slope".into()));
                }
                if slopes[i].det(&slopes[j]).abs() != 1 {
                    return Err(Error::InvalidTriangle(format!(
                        "slopes {:?} and {:?} are not unimodular",
                        slopes[i], slopes[j]
                    )));
                }
            }
        }
        Ok(FareyTriangle { slopes })
    }

    fn normalized(&self) -> [Slope; 3] {
        let mut s = self.slopes;
        s.sort();
        s
    }

    /// The base triangle {(1,0), (0,1), (1,1)}.
    pub fn base() -> FareyTriangle {
        FareyTriangle::new([
            Slope { p: 1, q: 0 },
            Slope { p: 0, q: 1 },
            Slope { p: 1, q: 1 },
        ])
        .unwrap()
    }

    pub fn slopes(&self) -> &[Slope; 3] {
        &self.slopes
    }

    pub fn slope_index(&self, s: &Slope) -> Option<usize> {
        self.slopes.iter().position(|t| t == s)
    }

    /// Apply a mapping class to each slope and re-canonicalize.
    pub fn act(&self, m: &Sl2) -> FareyTriangle {
        let mapped = self.slopes.map(|s| {
            Slope::new(m.a * s.p + m.b * s.q, m.c * s.p + m.d * s.q)
                .expect("SL(2,Z) preserves primitivity")
        });
        FareyTriangle::new(mapped).expect("SL(2,Z) preserves unimodularity")
    }

    /// Replace the indexed slope by the unique other completion of the
    /// remaining pair: one of (u + v), (u - v) up to canonical sign. The
    /// replacement lands in the same slot, so flipping a slot twice is the
    /// identity.
    pub fn flip(&self, index: usize) -> FareyTriangle {
        assert!(index < 3, "flip index must be 0, 1 or 2");
        let (u, v) = match index {
            0 => (self.slopes[1], self.slopes[2]),
            1 => (self.slopes[0], self.slopes[2]),
            _ => (self.slopes[0], self.slopes[1]),
        };
        let sum = Slope::new(u.p + v.p, u.q + v.q).expect("mediant of unimodular pair");
        let diff = Slope::new(u.p - v.p, u.q - v.q).expect("difference of unimodular pair");
        let old = self.slopes[index];
        let new = if old == sum { diff } else { sum };
        let mut slopes = self.slopes;
        slopes[index] = new;
        FareyTriangle::new(slopes).expect("flip preserves unimodularity")
    }
}

/// Exact flip-graph distance by breadth-first search; None if above the cap.
pub fn flip_distance_bfs(
    from: &FareyTriangle,
    to: &FareyTriangle,
    cap: usize,
) -> Option<usize> {
    if from == to {
        return Some(0);
    }
    let mut seen: HashMap<FareyTriangle, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(*from, 0);
    queue.push_back(*from);
    while let Some(t) = queue.pop_front() {
        let d = seen[&t];
        if d >= cap {
            continue;
        }
        for j in 0..3 {
            let n = t.flip(j);
            if n == *to {
                return Some(d + 1);
            }
            if !seen.contains_key(&n) {
                seen.insert(n, d + 1);
                queue.push_back(n);
            }
        }
    }
    None
}

/// Letters of the free product Z/2 * Z/3 presenting PSL(2,Z).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Letter {
    S,
    /// R^e with e in {1, 2}.
    R(u8),
}

/// A matrix whose columns span the triangle as an ideal Farey triangle:
/// g maps the base triangle (infinity, 0, 1) onto it. Any valid choice
/// differs by the order-3 stabilizer, which the normal form quotients out.
fn triangle_matrix(t: &FareyTriangle) -> Sl2 {
    let s = t.slopes;
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let k = 3 - i - j;
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let u = (si * s[i].p, si * s[i].q);
                let v = (sj * s[j].p, sj * s[j].q);
                if u.0 * v.1 - u.1 * v.0 != 1 {
                    continue;
                }
                let med = Slope::new(u.0 + v.0, u.1 + v.1).expect("mediant");
                if med == s[k] {
                    return Sl2 {
                        a: u.0,
                        b: v.0,
                        c: u.1,
                        d: v.1,
                    };
                }
            }
        }
    }
    unreachable!("every Farey triangle has a mediant presentation");
}

/// Continued-fraction factorization of g into T-powers and S, then rewritten
/// over S and R (T = R^2 S) and freely reduced in Z/2 * Z/3.
fn normal_form_letters(g: &Sl2) -> Vec<Letter> {
    // Factor: g = T^{q_1} S T^{q_2} S ... T^{q_m} (up to sign).
    let mut m = *g;
    let mut word: Vec<(i64, bool)> = Vec::new(); // (T-power, followed by S)
    loop {
        if m.c != 0 {
            let q = m.a.div_euclid(m.c);
            // T^{-q} m, then S^{-1} (= S in PSL) on the left.
            let (a, b) = (m.a - q * m.c, m.b - q * m.d);
            let next = Sl2 {
                a: m.c,
                b: m.d,
                c: -a,
                d: -b,
            };
            word.push((q, true));
            m = next;
        } else {
            // m = +-[[1, b], [0, 1]].
            let t_pow = if m.a == 1 { m.b } else { -m.b };
            word.push((t_pow, false));
            break;
        }
    }

    let mut letters = Vec::new();
    for (t_pow, then_s) in word {
        if t_pow >= 0 {
            for _ in 0..t_pow {
                letters.push(Letter::R(2));
                letters.push(Letter::S);
            }
        } else {
            for _ in 0..(-t_pow) {
                letters.push(Letter::S);
                letters.push(Letter::R(1));
            }
        }
        if then_s {
            letters.push(Letter::S);
        }
    }

    // Free-product reduction with a stack.
    let mut stack: Vec<Letter> = Vec::new();
    for l in letters {
        push_reduce(&mut stack, l);
    }
    stack
}

fn push_reduce(stack: &mut Vec<Letter>, l: Letter) {
    match (stack.last().copied(), l) {
        (Some(Letter::S), Letter::S) => {
            stack.pop();
        }
        (Some(Letter::R(a)), Letter::R(b)) => {
            stack.pop();
            let e = (a + b) % 3;
            if e != 0 {
                push_reduce(stack, Letter::R(e));
            }
        }
        _ => stack.push(l),
    }
}

/// Flip-graph distance via the dual tree of the Farey tessellation: the
/// number of S-letters in the reduced normal form of the transfer matrix,
/// after stripping the stabilizer at both ends.
pub fn flip_distance(from: &FareyTriangle, to: &FareyTriangle) -> usize {
    if from == to {
        return 0;
    }
    let g0 = triangle_matrix(from);
    let g1 = triangle_matrix(to);
    let g = g0.inverse().mul(&g1);
    let mut letters = normal_form_letters(&g);
    while matches!(letters.first(), Some(Letter::R(_))) {
        letters.remove(0);
    }
    while matches!(letters.last(), Some(Letter::R(_))) {
        letters.pop();
    }
    letters.iter().filter(|l| matches!(l, Letter::S)).count()
}

/// Growth of flip distance under iteration: rows (i, d(A^i t0, t0), d/i).
/// The flip distance is half the edge-contraction/expansion count of the
/// corresponding spine moves, so ratios are a lower-bound proxy up to that
/// bounded factor.
pub fn spine_growth_table(m: &Sl2, i_max: u32) -> Result<Vec<(u32, usize, Ratio64)>> {
    if let MappingClass::Periodic { order } = classify(m) {
        return Err(Error::PeriodicMonodromy { order });
    }
    let t0 = FareyTriangle::base();
    let mut rows = Vec::new();
    let mut power = Sl2::identity();
    for i in 1..=i_max {
        power = power.mul(m);
        let d = flip_distance(&t0.act(&power), &t0);
        rows.push((i, d, Ratio64::new(d as i64, i as i64)));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_trichotomy_examples() {
        assert_eq!(
            classify(&Sl2::new(1, 1, 0, 1).unwrap()),
            MappingClass::ReducibleTwist
        );
        assert_eq!(
            classify(&Sl2::new(0, -1, 1, 0).unwrap()),
            MappingClass::Periodic { order: 4 }
        );
        assert_eq!(classify(&Sl2::new(2, 1, 1, 1).unwrap()), MappingClass::Anosov);
        assert_eq!(
            classify(&Sl2::identity()),
            MappingClass::Periodic { order: 1 }
        );
        assert_eq!(
            classify(&Sl2::new(-1, 0, 0, -1).unwrap()),
            MappingClass::Periodic { order: 2 }
        );
        assert_eq!(
            classify(&Sl2::new(0, -1, 1, 1).unwrap()),
            MappingClass::Periodic { order: 6 }
        );
        assert_eq!(
            classify(&Sl2::new(-1, -1, 1, 0).unwrap()),
            MappingClass::Periodic { order: 3 }
        );
    }

    #[test]
    fn determinant_checked() {
        assert!(Sl2::new(1, 0, 0, -1).is_err());
        assert!(Sl2::new(2, 0, 0, 2).is_err());
    }

    #[test]
    fn fv_positive_iff_anosov() {
        for n in 1..=5 {
            assert!(!fv_positive(&Sl2::new(1, n, 0, 1).unwrap()));
        }
        assert!(fv_positive(&Sl2::new(2, 1, 1, 1).unwrap()));
        assert!(!fv_positive(&Sl2::identity()));
    }

    #[test]
    fn slope_canonical_sign() {
        assert_eq!(Slope::new(-1, 1).unwrap(), Slope { p: 1, q: -1 });
        assert_eq!(Slope::new(0, -1).unwrap(), Slope { p: 0, q: 1 });
        assert_eq!(Slope::new(-2, 0).unwrap(), Slope { p: 1, q: 0 });
    }

    #[test]
    fn flip_is_an_involution() {
        let t0 = FareyTriangle::base();
        let mut frontier = vec![t0];
        for _ in 0..3 {
            let mut next = Vec::new();
            for t in frontier {
                for j in 0..3 {
                    assert_eq!(t.flip(j).flip(j), t);
                    next.push(t.flip(j));
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn flip_replaces_diagonal_by_the_other_one() {
        let t0 = FareyTriangle::base();
        let j = t0.slope_index(&Slope { p: 0, q: 1 }).unwrap();
        let flipped = t0.flip(j);
        let expected = FareyTriangle::new([
            Slope { p: 1, q: 0 },
            Slope { p: 2, q: 1 },
            Slope { p: 1, q: 1 },
        ])
        .unwrap();
        assert_eq!(flipped, expected);
    }

    #[test]
    fn shear_action_on_base_triangle() {
        let t0 = FareyTriangle::base();
        let s = t0.act(&Sl2::shear());
        let expected = FareyTriangle::new([
            Slope { p: 1, q: 0 },
            Slope { p: 1, q: 1 },
            Slope { p: 2, q: 1 },
        ])
        .unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn bfs_distance_basics() {
        let t0 = FareyTriangle::base();
        assert_eq!(flip_distance_bfs(&t0, &t0, 5), Some(0));
        let n = t0.flip(1);
        assert_eq!(flip_distance_bfs(&t0, &n, 5), Some(1));
        assert_eq!(flip_distance_bfs(&t0, &t0.act(&Sl2::shear()), 5), Some(1));
    }

    #[test]
    fn fast_distance_agrees_with_bfs_nearby() {
        let t0 = FareyTriangle::base();
        let mats = [
            Sl2::shear(),
            Sl2::new(2, 1, 1, 1).unwrap(),
            Sl2::new(1, 0, 1, 1).unwrap(),
        ];
        for m in mats {
            let mut p = Sl2::identity();
            for _ in 1..=6 {
                p = p.mul(&m);
                let t1 = t0.act(&p);
                let fast = flip_distance(&t0, &t1);
                if let Some(bfs) = flip_distance_bfs(&t0, &t1, 12) {
                    assert_eq!(fast, bfs, "matrix {m:?}");
                }
            }
        }
    }

    #[test]
    fn shear_powers_have_linear_distance() {
        let t0 = FareyTriangle::base();
        let mut p = Sl2::identity();
        for i in 1..=20usize {
            p = p.mul(&Sl2::shear());
            assert_eq!(flip_distance(&t0, &t0.act(&p)), i);
        }
    }

    #[test]
    fn distance_is_equivariant() {
        let t0 = FareyTriangle::base();
        let t1 = t0.flip(0).flip(2).flip(1);
        let g = Sl2::new(3, 2, 1, 1).unwrap();
        assert_eq!(
            flip_distance(&t0.act(&g), &t1.act(&g)),
            flip_distance(&t0, &t1)
        );
    }

    #[test]
    fn growth_table_rejects_periodic() {
        let rot = Sl2::new(0, -1, 1, 0).unwrap();
        assert!(spine_growth_table(&rot, 5).is_err());
    }

    #[test]
    fn growth_table_for_anosov_has_positive_ratios() {
        let m = Sl2::new(2, 1, 1, 1).unwrap();
        let rows = spine_growth_table(&m, 10).unwrap();
        for (i, d, ratio) in &rows {
            assert!(*d > 0, "distance zero at i = {i}");
            assert!(*ratio > Ratio64::new(0, 1));
        }
    }
}
