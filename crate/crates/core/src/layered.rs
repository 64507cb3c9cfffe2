//! Layered triangulations of torus bundles.
//!
//! Each flip in a path through the Farey graph is realized by one tetrahedron
//! laid onto the flipped diagonal; stacking the tetrahedra along the path and
//! closing up through the monodromy yields a candidate triangulation of the
//! mapping torus, which is then validated structurally (face-pairing
//! involution, orientability, Euler characteristic zero, sphere vertex
//! links). First homology is computed from the quotient cell complex by Smith
//! normal form and cross-checked against Z + coker(A - I).
//!
//! Everything is coordinate-driven: a layer's tetrahedron keeps the four
//! lattice points of its quadrilateral, and gluings are found by matching
//! lattice triangles modulo integer translation (modulo the monodromy matrix
//! for the closing layer). Very short paths can close up degenerately; the
//! builder pads such paths with flip/unflip pairs until validation passes.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mcg::{classify, flip_distance, FareyTriangle, MappingClass, Sl2, Slope};
use crate::snf;

type Int = BigInt;
type Vec2 = (i64, i64);

/// A path in the flip graph: slot indices applied in order from `start`.
#[derive(Clone, Debug)]
pub struct FlipPath {
    pub start: FareyTriangle,
    pub moves: Vec<usize>,
}

impl FlipPath {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Triangles visited, including both endpoints.
    pub fn triangles(&self) -> Vec<FareyTriangle> {
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        let mut t = self.start;
        out.push(t);
        for &mv in &self.moves {
            t = t.flip(mv);
            out.push(t);
        }
        out
    }

    pub fn end(&self) -> FareyTriangle {
        self.triangles().pop().unwrap()
    }
}

/// Deterministic geodesic from the base triangle to its image under the
/// mapping class: each step takes the unique flip that moves closer in the
/// flip tree.
pub fn flip_path(m: &Sl2) -> Result<FlipPath> {
    if let MappingClass::Periodic { order } = classify(m) {
        return Err(Error::PeriodicMonodromy { order });
    }
    let start = FareyTriangle::base();
    let target = start.act(m);
    let mut moves = Vec::new();
    let mut cur = start;
    while cur != target {
        let d = flip_distance(&cur, &target);
        let step = (0..3)
            .find(|&j| flip_distance(&cur.flip(j), &target) + 1 == d)
            .expect("some neighbor is closer in a tree");
        moves.push(step);
        cur = cur.flip(step);
    }
    Ok(FlipPath { start, moves })
}

/// The path upstairs in the i-sheeted cyclic cover: i copies of the path,
/// each translated by the next power of the monodromy. Realizes A^i.
pub fn cyclic_cover_path(path: &FlipPath, m: &Sl2, sheets: u32) -> Result<FlipPath> {
    assert!(sheets >= 1);
    let originals = path.triangles();
    let mut moves = Vec::with_capacity(path.len() * sheets as usize);
    let mut cur = path.start;
    let mut power = Sl2::identity();
    for _ in 0..sheets {
        for (step, &mv) in path.moves.iter().enumerate() {
            let original_slope = originals[step].slopes()[mv];
            let translated = Slope::new(
                power.a * original_slope.p + power.b * original_slope.q,
                power.c * original_slope.p + power.d * original_slope.q,
            )
            .expect("acted slope stays primitive");
            let slot = cur
                .slope_index(&translated)
                .expect("translated slope lies in the current triangle");
            moves.push(slot);
            cur = cur.flip(slot);
        }
        power = power.mul(m);
    }
    Ok(FlipPath {
        start: path.start,
        moves,
    })
}

/// One face gluing: target tetrahedron and face, with the vertex map stored
/// as images of (0,1,2,3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub face: usize,
    pub perm: [usize; 4],
}

#[derive(Clone, Debug)]
pub struct LayeredTriangulation {
    /// gluings[t][f] pairs face f of tetrahedron t (faces are numbered by
    /// their opposite vertex).
    pub gluings: Vec<[Gluing; 4]>,
    /// Layer index of each tetrahedron.
    pub layers: Vec<usize>,
}

const FACE_VERTS: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
const EDGE_VERTS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGE_VERTS.iter().position(|&(x, y)| (x, y) == (a, b)).unwrap()
}

impl LayeredTriangulation {
    pub fn tetrahedra(&self) -> usize {
        self.gluings.len()
    }
}

/// A tetrahedron in the stack: the lattice points of its quadrilateral.
/// Vertices 0..3 are (0, x, x+y, y); faces 3 and 1 are the bottom pair
/// (sharing the diagonal 0 -- x+y), faces 2 and 0 the top pair (sharing
/// x -- y).
#[derive(Clone, Copy, Debug)]
struct LayerTet {
    coords: [Vec2; 4],
}

const BOTTOM_FACES: [usize; 2] = [3, 1];
const TOP_FACES: [usize; 2] = [2, 0];

fn add(a: Vec2, b: Vec2) -> Vec2 {
    (a.0 + b.0, a.1 + b.1)
}

fn sub(a: Vec2, b: Vec2) -> Vec2 {
    (a.0 - b.0, a.1 - b.1)
}

fn apply(m: &Sl2, v: Vec2) -> Vec2 {
    (m.a * v.0 + m.b * v.1, m.c * v.0 + m.d * v.1)
}

/// Lattice triangle modulo translation: vertices relative to the
/// lexicographically least one, sorted.
fn canon_triangle(tri: [Vec2; 3]) -> ([Vec2; 3], Vec2) {
    let base = *tri.iter().min().unwrap();
    let mut rel = tri.map(|v| sub(v, base));
    rel.sort();
    (rel, base)
}

fn face_coords(tet: &LayerTet, face: usize) -> [Vec2; 3] {
    FACE_VERTS[face].map(|v| tet.coords[v])
}

/// Signed basis (x, y) for the quadrilateral of one flip: x, y represent the
/// two kept slopes, det(x, y) = 1, and x + y represents the flipped slope.
fn quad_basis(triple: &FareyTriangle, slot: usize) -> (Vec2, Vec2) {
    let slopes = triple.slopes();
    let g = slopes[slot];
    let kept: Vec<Slope> = (0..3).filter(|&i| i != slot).map(|i| slopes[i]).collect();
    for (first, second) in [(kept[0], kept[1]), (kept[1], kept[0])] {
        for s1 in [1i64, -1] {
            for s2 in [1i64, -1] {
                let x = (s1 * first.p, s1 * first.q);
                let y = (s2 * second.p, s2 * second.q);
                if x.0 * y.1 - x.1 * y.0 != 1 {
                    continue;
                }
                let s = add(x, y);
                if (s.0 == g.p && s.1 == g.q) || (s.0 == -g.p && s.1 == -g.q) {
                    return (x, y);
                }
            }
        }
    }
    unreachable!("the flipped slope is a signed mediant of the kept pair");
}

/// Build the layered triangulation for a path realizing the mapping class:
/// one tetrahedron per flip, closed through the monodromy. Purely structural
/// failures (degenerate closure) are reported as typed errors.
pub fn layer(path: &FlipPath, m: &Sl2) -> Result<LayeredTriangulation> {
    if path.is_empty() {
        return Err(Error::InvalidTriangulation("empty flip path".into()));
    }
    let triples = path.triangles();
    if *triples.last().unwrap() != path.start.act(m) {
        return Err(Error::InvalidTriangulation(
            "path does not realize the monodromy".into(),
        ));
    }
    let count = path.len();
    let tets: Vec<LayerTet> = (0..count)
        .map(|i| {
            let (x, y) = quad_basis(&triples[i], path.moves[i]);
            LayerTet {
                coords: [(0, 0), x, add(x, y), y],
            }
        })
        .collect();

    let mut gluings: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; count];

    for i in 0..count {
        let j = (i + 1) % count;
        let closing = j == 0;
        // Glue the bottom faces of layer j onto the top faces of layer i.
        // Across the closing interface the fiber identification (x,0)~(Ax,1)
        // carries the bottom triangulation onto the top one, so bottom
        // coordinates are pushed through the monodromy before matching.
        let map = if closing { *m } else { Sl2::identity() };
        for bf in BOTTOM_FACES {
            let mapped_b = face_coords(&tets[j], bf).map(|v| apply(&map, v));
            let (canon_b, base_b) = canon_triangle(mapped_b);
            let mut matched = false;
            for tf in TOP_FACES {
                let (canon_t, base_t) = canon_triangle(face_coords(&tets[i], tf));
                if canon_t != canon_b {
                    continue;
                }
                let shift = sub(base_t, base_b);
                let mut perm_fwd = [usize::MAX; 4]; // tet j -> tet i
                perm_fwd[bf] = tf;
                for v in FACE_VERTS[bf] {
                    let image = add(apply(&map, tets[j].coords[v]), shift);
                    let u = FACE_VERTS[tf]
                        .iter()
                        .copied()
                        .find(|&u| tets[i].coords[u] == image)
                        .ok_or_else(|| {
                            Error::InvalidTriangulation(
                                "vertex match failed across a layer interface".into(),
                            )
                        })?;
                    perm_fwd[v] = u;
                }
                let mut perm_back = [usize::MAX; 4];
                for (v, &u) in perm_fwd.iter().enumerate() {
                    perm_back[u] = v;
                }
                if gluings[j][bf].is_some() || gluings[i][tf].is_some() {
                    return Err(Error::InvalidTriangulation(
                        "face glued twice while stacking".into(),
                    ));
                }
                gluings[j][bf] = Some(Gluing {
                    tet: i,
                    face: tf,
                    perm: perm_fwd,
                });
                gluings[i][tf] = Some(Gluing {
                    tet: j,
                    face: bf,
                    perm: perm_back,
                });
                matched = true;
                break;
            }
            if !matched {
                return Err(Error::InvalidTriangulation(
                    "no top triangle matches a bottom triangle at an interface".into(),
                ));
            }
        }
    }

    let gluings = gluings
        .into_iter()
        .map(|faces| {
            let mut out = [Gluing {
                tet: usize::MAX,
                face: usize::MAX,
                perm: [0; 4],
            }; 4];
            for (f, g) in faces.into_iter().enumerate() {
                out[f] = g.ok_or_else(|| {
                    Error::InvalidTriangulation("unglued face after stacking".into())
                })?;
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let tri = LayeredTriangulation {
        layers: (0..count).collect(),
        gluings,
    };
    // The stacking above is structural; validity of the closed complex is a
    // separate question answered by `validate`.
    Ok(tri)
}

fn perm_parity(p: &[usize; 4]) -> i32 {
    let mut sign = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Union-find with a relative sign to the root.
struct SignedUf {
    parent: Vec<usize>,
    sign: Vec<i32>,
    conflict: bool,
}

impl SignedUf {
    fn new(n: usize) -> SignedUf {
        SignedUf {
            parent: (0..n).collect(),
            sign: vec![1; n],
            conflict: false,
        }
    }

    fn find(&mut self, i: usize) -> (usize, i32) {
        if self.parent[i] == i {
            return (i, 1);
        }
        let (root, s) = self.find(self.parent[i]);
        self.parent[i] = root;
        self.sign[i] *= s;
        (root, self.sign[i])
    }

    /// Declare element a (with sign sa relative to some slot) equal to b.
    fn union(&mut self, a: usize, b: usize, rel_sign: i32) {
        let (ra, sa) = self.find(a);
        let (rb, sb) = self.find(b);
        if ra == rb {
            if sa * rel_sign != sb {
                self.conflict = true;
            }
            return;
        }
        self.parent[rb] = ra;
        self.sign[rb] = sa * rel_sign * sb;
    }
}

struct Orbits {
    /// Orbit id per slot, orbit count, slot sign relative to orbit rep.
    id: Vec<usize>,
    count: usize,
    sign: Vec<i32>,
    conflict: bool,
}

fn collect_orbits(mut uf: SignedUf) -> Orbits {
    let n = uf.parent.len();
    let mut id = vec![usize::MAX; n];
    let mut sign = vec![1; n];
    let mut count = 0;
    for i in 0..n {
        let (root, s) = uf.find(i);
        if id[root] == usize::MAX {
            id[root] = count;
            count += 1;
        }
        id[i] = id[root];
        sign[i] = s;
    }
    Orbits {
        id,
        count,
        sign,
        conflict: uf.conflict,
    }
}

fn vertex_orbits(tri: &LayeredTriangulation) -> Orbits {
    let n = tri.tetrahedra();
    let mut uf = SignedUf::new(4 * n);
    for t in 0..n {
        for f in 0..4 {
            let g = &tri.gluings[t][f];
            for v in FACE_VERTS[f] {
                uf.union(4 * t + v, 4 * g.tet + g.perm[v], 1);
            }
        }
    }
    collect_orbits(uf)
}

fn edge_orbits(tri: &LayeredTriangulation) -> Orbits {
    let n = tri.tetrahedra();
    let mut uf = SignedUf::new(6 * n);
    for t in 0..n {
        for f in 0..4 {
            let g = &tri.gluings[t][f];
            let [a, b, c] = FACE_VERTS[f];
            for (u, v) in [(a, b), (a, c), (b, c)] {
                let (iu, iv) = (g.perm[u], g.perm[v]);
                let rel = if (iu < iv) == (u < v) { 1 } else { -1 };
                uf.union(
                    6 * t + edge_index(u, v),
                    6 * g.tet + edge_index(iu, iv),
                    rel,
                );
            }
        }
    }
    collect_orbits(uf)
}

fn face_orbit_count(tri: &LayeredTriangulation) -> usize {
    2 * tri.tetrahedra()
}

/// Structural validity of the closed complex.
pub fn validate(tri: &LayeredTriangulation) -> Result<()> {
    let n = tri.tetrahedra();
    if n == 0 {
        return Err(Error::InvalidTriangulation("no tetrahedra".into()));
    }

    // Face pairing is an involution without fixed faces, with inverse perms.
    for t in 0..n {
        for f in 0..4 {
            let g = &tri.gluings[t][f];
            if g.tet >= n || g.face >= 4 {
                return Err(Error::InvalidTriangulation("gluing out of range".into()));
            }
            if g.tet == t && g.face == f {
                return Err(Error::InvalidTriangulation(format!(
                    "face ({t},{f}) glued to itself"
                )));
            }
            let back = &tri.gluings[g.tet][g.face];
            if back.tet != t || back.face != f {
                return Err(Error::InvalidTriangulation(format!(
                    "gluing of ({t},{f}) is not symmetric"
                )));
            }
            for v in 0..4 {
                if back.perm[g.perm[v]] != v {
                    return Err(Error::InvalidTriangulation(format!(
                        "gluing perms of ({t},{f}) are not mutually inverse"
                    )));
                }
            }
            if g.perm[f] != g.face {
                return Err(Error::InvalidTriangulation(format!(
                    "gluing of ({t},{f}) does not send the opposite vertex across"
                )));
            }
        }
    }

    // Orientability: consistent tet orientations with odd gluing parity.
    let mut orient = vec![0i32; n];
    orient[0] = 1;
    let mut stack = vec![0usize];
    while let Some(t) = stack.pop() {
        for f in 0..4 {
            let g = &tri.gluings[t][f];
            let want = if perm_parity(&g.perm) < 0 {
                orient[t]
            } else {
                -orient[t]
            };
            if orient[g.tet] == 0 {
                orient[g.tet] = want;
                stack.push(g.tet);
            } else if orient[g.tet] != want {
                return Err(Error::InvalidTriangulation(
                    "complex is not orientable".into(),
                ));
            }
        }
    }
    if orient.iter().any(|&o| o == 0) {
        return Err(Error::InvalidTriangulation("complex is disconnected".into()));
    }

    let edges = edge_orbits(tri);
    if edges.conflict {
        return Err(Error::InvalidTriangulation(
            "an edge is identified with itself reversing orientation".into(),
        ));
    }
    let verts = vertex_orbits(tri);
    let chi = verts.count as i64 - edges.count as i64 + face_orbit_count(tri) as i64 - n as i64;
    if chi != 0 {
        return Err(Error::InvalidTriangulation(format!(
            "Euler characteristic {chi}, expected 0"
        )));
    }

    // Vertex links: flag orbits (tet, vertex, edge) under the face gluings.
    let mut uf = SignedUf::new(6 * n * 2);
    let flag = |t: usize, v: usize, e: usize| -> usize {
        let (a, _) = EDGE_VERTS[e];
        let end = if v == a { 0 } else { 1 };
        (6 * t + e) * 2 + end
    };
    for t in 0..n {
        for f in 0..4 {
            let g = &tri.gluings[t][f];
            let [a, b, c] = FACE_VERTS[f];
            for (u, v) in [(a, b), (a, c), (b, c)] {
                let e = edge_index(u, v);
                let e2 = edge_index(g.perm[u], g.perm[v]);
                uf.union(flag(t, u, e), flag(g.tet, g.perm[u], e2), 1);
                uf.union(flag(t, v, e), flag(g.tet, g.perm[v], e2), 1);
            }
        }
    }
    let link_vert_orbits = collect_orbits(uf);

    for class in 0..verts.count {
        let mut corners = 0usize;
        for t in 0..n {
            for v in 0..4 {
                if verts.id[4 * t + v] == class {
                    corners += 1;
                }
            }
        }
        let mut link_vs = std::collections::HashSet::new();
        for t in 0..n {
            for e in 0..6 {
                let (a, b) = EDGE_VERTS[e];
                for v in [a, b] {
                    if verts.id[4 * t + v] == class {
                        link_vs.insert(link_vert_orbits.id[flag(t, v, e)]);
                    }
                }
            }
        }
        // Link of the vertex class: F = corners, E = 3F/2, V = flag orbits.
        let f = corners as i64;
        let e = 3 * f / 2;
        let v = link_vs.len() as i64;
        if 3 * f % 2 != 0 {
            return Err(Error::InvalidTriangulation(
                "odd corner-face incidence in a vertex link".into(),
            ));
        }
        let chi_link = v - e + f;
        if chi_link != 2 {
            return Err(Error::InvalidTriangulation(format!(
                "vertex link has Euler characteristic {chi_link}, expected 2 (sphere)"
            )));
        }
    }

    Ok(())
}

/// Rank and torsion of an abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<Int>,
}

impl std::fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// H_1 of the quotient cell complex, by Smith normal form of the boundary
/// maps assembled from the gluing orbits.
pub fn homology_h1(tri: &LayeredTriangulation) -> Result<AbelianGroup> {
    validate(tri)?;
    let n = tri.tetrahedra();
    let verts = vertex_orbits(tri);
    let edges = edge_orbits(tri);

    // d1: edges -> vertices, one column per edge orbit (from its rep slot).
    let mut edge_rep = vec![usize::MAX; edges.count];
    for slot in 0..6 * n {
        let o = edges.id[slot];
        if edge_rep[o] == usize::MAX {
            edge_rep[o] = slot;
        }
    }
    let mut d1 = vec![vec![Int::from(0); edges.count]; verts.count];
    for (o, &slot) in edge_rep.iter().enumerate() {
        let (t, e) = (slot / 6, slot % 6);
        let (a, b) = EDGE_VERTS[e];
        d1[verts.id[4 * t + b]][o] += Int::from(1);
        d1[verts.id[4 * t + a]][o] -= Int::from(1);
    }

    // d2: faces -> edges. One column per face orbit, taken from its rep slot;
    // edge coefficients carry the slot sign relative to the orbit rep.
    let mut face_rep: Vec<(usize, usize)> = Vec::new();
    let mut seen = vec![false; 4 * n];
    for t in 0..n {
        for f in 0..4 {
            if seen[4 * t + f] {
                continue;
            }
            seen[4 * t + f] = true;
            let g = &tri.gluings[t][f];
            seen[4 * g.tet + g.face] = true;
            face_rep.push((t, f));
        }
    }
    let mut d2 = vec![vec![Int::from(0); face_rep.len()]; edges.count];
    for (col, &(t, f)) in face_rep.iter().enumerate() {
        let [a, b, c] = FACE_VERTS[f];
        // boundary of [a, b, c] with ascending vertex order
        for (u, v, s) in [(b, c, 1i64), (a, c, -1), (a, b, 1)] {
            let slot = 6 * t + edge_index(u, v);
            let coeff = s * edges.sign[slot] as i64;
            d2[edges.id[slot]][col] += Int::from(coeff);
        }
    }

    let rank_d1 = snf::matrix_rank(d1);
    let diag_d2 = snf::smith_normal_form(d2);
    let rank_d2 = diag_d2.iter().filter(|d| !num_traits::Zero::is_zero(*d)).count();
    let rank = edges.count - rank_d1 - rank_d2;
    let torsion = diag_d2
        .into_iter()
        .filter(|d| *d > Int::from(1))
        .collect();
    Ok(AbelianGroup { rank, torsion })
}

/// Independent prediction of H_1 for the mapping torus of the matrix:
/// Z + coker(A - I), by Smith normal form of the 2x2 matrix.
pub fn h1_oracle(m: &Sl2) -> AbelianGroup {
    let a_minus_i = vec![
        vec![Int::from(m.a - 1), Int::from(m.b)],
        vec![Int::from(m.c), Int::from(m.d - 1)],
    ];
    let (rank, torsion) = snf::cokernel(a_minus_i, 2);
    AbelianGroup {
        rank: rank + 1,
        torsion,
    }
}

/// A validated build: the triangulation, the path it came from, and how many
/// padding flips were appended to make the closure a manifold.
#[derive(Clone, Debug)]
pub struct LayeredBuild {
    pub triangulation: LayeredTriangulation,
    pub path: FlipPath,
    pub padding: usize,
    pub power: u32,
}

/// Build a validated layered triangulation of the mapping torus of A^power.
/// The padding level is decided once on the single-sheet bundle and reused
/// for every cover, so tetrahedron counts stay exactly linear in the power.
pub fn build_layered(m: &Sl2, power: u32) -> Result<LayeredBuild> {
    assert!(power >= 1);
    let base = flip_path(m)?;
    let mut last_err = None;
    for pad_pairs in 0..=4usize {
        for slot in 0..3usize {
            let mut padded = base.clone();
            for _ in 0..pad_pairs {
                // A flip/unflip pair keeps the endpoint and adds two layers.
                padded.moves.push(slot);
                padded.moves.push(slot);
            }
            // Padding must validate on the single sheet before being adopted.
            let accept = match layer(&padded, m) {
                Ok(tri) => validate(&tri).is_ok(),
                Err(_) => false,
            };
            if !accept {
                continue;
            }
            let cover = cyclic_cover_path(&padded, m, power)?;
            let monodromy = m.pow(power);
            let tri = layer(&cover, &monodromy)?;
            match validate(&tri) {
                Ok(()) => {
                    return Ok(LayeredBuild {
                        triangulation: tri,
                        path: cover,
                        padding: 2 * pad_pairs,
                        power,
                    })
                }
                Err(e) => last_err = Some(e),
            }
        }
    }
    Err(last_err.unwrap_or_else(|| {
        Error::InvalidTriangulation("no padded path closes to a valid complex".into())
    }))
}

/// Tetrahedron counts of the validated covers: (i, count), exactly linear in
/// i by construction.
pub fn delta_upper_bound_table(m: &Sl2, i_max: u32) -> Result<Vec<(u32, usize)>> {
    if let MappingClass::Periodic { order } = classify(m) {
        return Err(Error::PeriodicMonodromy { order });
    }
    let mut rows = Vec::new();
    for i in 1..=i_max {
        let build = build_layered(m, i)?;
        rows.push((i, build.triangulation.tetrahedra()));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anosov() -> Sl2 {
        Sl2::new(2, 1, 1, 1).unwrap()
    }

    #[test]
    fn flip_path_realizes_the_monodromy() {
        for m in [Sl2::shear(), anosov(), Sl2::new(3, 2, 1, 1).unwrap()] {
            let p = flip_path(&m).unwrap();
            assert_eq!(p.end(), p.start.act(&m));
            assert_eq!(p.len(), flip_distance(&p.start, &p.start.act(&m)));
        }
    }

    #[test]
    fn flip_path_of_shear_has_length_one() {
        assert_eq!(flip_path(&Sl2::shear()).unwrap().len(), 1);
    }

    #[test]
    fn flip_path_rejects_periodic() {
        assert!(flip_path(&Sl2::new(0, -1, 1, 0).unwrap()).is_err());
    }

    #[test]
    fn cover_path_concatenates() {
        let m = anosov();
        let p = flip_path(&m).unwrap();
        let one = cyclic_cover_path(&p, &m, 1).unwrap();
        assert_eq!(one.moves, p.moves);
        for i in [2u32, 5] {
            let c = cyclic_cover_path(&p, &m, i).unwrap();
            assert_eq!(c.len(), p.len() * i as usize);
            assert_eq!(c.end(), c.start.act(&m.pow(i)));
        }
    }

    #[test]
    fn anosov_bundle_builds_and_validates() {
        let build = build_layered(&anosov(), 1).unwrap();
        assert!(validate(&build.triangulation).is_ok());
        assert_eq!(
            build.triangulation.tetrahedra(),
            build.path.len()
        );
    }

    #[test]
    fn anosov_bundle_h1_matches_oracle() {
        for power in 1..=3u32 {
            let build = build_layered(&anosov(), power).unwrap();
            let h1 = homology_h1(&build.triangulation).unwrap();
            let expected = h1_oracle(&anosov().pow(power));
            assert_eq!(h1, expected, "power {power}");
        }
    }

    #[test]
    fn shear_bundle_h1_is_z_squared() {
        let build = build_layered(&Sl2::shear(), 1).unwrap();
        let h1 = homology_h1(&build.triangulation).unwrap();
        assert_eq!(
            h1,
            AbelianGroup {
                rank: 2,
                torsion: vec![]
            }
        );
    }

    #[test]
    fn tet_counts_linear_in_cover_degree() {
        let rows = delta_upper_bound_table(&anosov(), 4).unwrap();
        let base = rows[0].1;
        for (i, count) in rows {
            assert_eq!(count, base * i as usize);
        }
    }

    #[test]
    fn homology_invariant_under_relabeling() {
        let build = build_layered(&anosov(), 2).unwrap();
        let tri = &build.triangulation;
        let n = tri.tetrahedra();
        // Reverse the tetrahedron order.
        let relabel: Vec<usize> = (0..n).rev().collect();
        let gluings: Vec<[Gluing; 4]> = (0..n)
            .map(|new_t| {
                let old_t = relabel[new_t];
                let mut faces = tri.gluings[old_t];
                for g in &mut faces {
                    g.tet = relabel.iter().position(|&x| x == g.tet).unwrap();
                }
                faces
            })
            .collect();
        let permuted = LayeredTriangulation {
            gluings,
            layers: (0..n).collect(),
        };
        assert_eq!(
            homology_h1(&permuted).unwrap(),
            homology_h1(tri).unwrap()
        );
    }

    #[test]
    fn delta_table_rejects_periodic() {
        assert!(delta_upper_bound_table(&Sl2::new(0, -1, 1, 0).unwrap(), 3).is_err());
    }
}

/// Orbit counts (vertices, edges, faces, tetrahedra) for diagnostics.
pub fn debug_counts(tri: &LayeredTriangulation) -> (usize, usize, usize, usize) {
    (
        vertex_orbits(tri).count,
        edge_orbits(tri).count,
        face_orbit_count(tri),
        tri.tetrahedra(),
    )
}
