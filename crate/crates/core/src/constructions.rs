//! The chain-level constructions behind the sublinear filling of Dehn-twist
//! boundaries: the named fundamental cycles of T^2, the prism chain that
//! collapses a large twist power down to a curve residue, the circle cycles
//! that telescope that residue away, and the resulting certified upper bounds
//! on filling volume and on integral simplicial volumes of mapping tori.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chain::{int_chain, IntChain};
use crate::error::{Error, Result};
use crate::filling::{fill_int, FiniteModel};
use crate::io::{self, FillingPairJson, PairProvenanceJson};
use crate::simplex::{Int, Rat};
use crate::torus_map::AffineTorusMap;

/// The standard fundamental cycle of T^2: the unit square split along the
/// diagonal, two simplices.
pub fn fundamental_cycle() -> IntChain {
    int_chain(
        2,
        2,
        &[
            (1, &[&[0, 0], &[1, 0], &[1, 1]]),
            (-1, &[&[0, 0], &[0, 1], &[1, 1]]),
        ],
    )
}

/// Fundamental cycle refined along the horizontal midline y = 1/2; four
/// simplices with y-coordinates in {0, 1/2, 1}.
pub fn horizontal_refined_cycle() -> IntChain {
    chain_from_half_rows(&[
        (1, &[&[0, 0], &[2, 0], &[2, 1]]),
        (-1, &[&[0, 0], &[0, 1], &[2, 1]]),
        (1, &[&[0, 1], &[2, 1], &[2, 2]]),
        (-1, &[&[0, 1], &[0, 2], &[2, 2]]),
    ])
}

/// Fundamental cycle refined along the vertical midline x = 1/2.
pub fn vertical_refined_cycle() -> IntChain {
    chain_from_half_rows(&[
        (1, &[&[0, 0], &[1, 0], &[1, 2]]),
        (-1, &[&[0, 0], &[0, 2], &[1, 2]]),
        (1, &[&[1, 0], &[2, 0], &[2, 2]]),
        (-1, &[&[1, 0], &[1, 2], &[2, 2]]),
    ])
}

/// Vertices given in halves (numerators over 2).
fn chain_from_half_rows(rows: &[(i64, &[&[i64]])]) -> IntChain {
    use crate::simplex::{Point, StraightSimplex};
    crate::chain::Chain::from_terms(
        2,
        2,
        rows.iter().map(|&(c, verts)| {
            (
                StraightSimplex::new(
                    verts
                        .iter()
                        .map(|v| Point::from_pairs(&[(v[0], 2), (v[1], 2)]))
                        .collect(),
                )
                .unwrap(),
                Int::from(c),
            )
        }),
    )
    .unwrap()
}

/// The Dehn twist along the horizontal curve, as the shear matrix.
pub fn dehn_twist() -> AffineTorusMap {
    AffineTorusMap::from_int_matrix(&[&[1, 1], &[0, 1]])
}

/// The n-th power of the twist.
pub fn twist_power(n: u64) -> AffineTorusMap {
    AffineTorusMap::from_int_matrix(&[&[1, n as i64], &[0, 1]])
}

fn pow2(e: u32) -> i64 {
    1i64 << e
}

/// 4^k, the twist power filled at scale k.
pub fn scale_power(k: u32) -> u64 {
    1u64 << (2 * k)
}

fn check_scale(k: u32) -> Result<()> {
    if k == 0 || k > 20 {
        return Err(Error::IndexOutOfRange(format!("k = {k}, want 1 <= k <= 20")));
    }
    Ok(())
}

/// The three-simplex prism chain: its boundary plus the curve residue equals
/// f^{4^k} c - c.
pub fn twist_prism(k: u32) -> IntChain {
    let n = pow2(2 * k);
    int_chain(
        2,
        3,
        &[
            (1, &[&[0, 0], &[1, 0], &[n + 1, 0], &[n + 1, 1]]),
            (-1, &[&[0, 0], &[n, 0], &[n + 1, 0], &[n + 1, 1]]),
            (1, &[&[0, 0], &[n, 0], &[n, 1], &[n + 1, 1]]),
        ],
    )
}

/// The 2-chain left over by the prism collapse, supported on the core curve.
pub fn curve_residue(k: u32) -> IntChain {
    let n = pow2(2 * k);
    int_chain(
        2,
        2,
        &[
            (1, &[&[0, 0], &[1, 0], &[n + 1, 0]]),
            (-1, &[&[0, 0], &[n, 0], &[n + 1, 0]]),
        ],
    )
}

/// The curve residue read on the circle: a degree-2 chain on S^1. Vanishes at
/// index i = k, where the two simplices coincide.
pub fn circle_residue(k: u32, i: u32) -> Result<IntChain> {
    check_scale(k)?;
    if i > 2 * k {
        return Err(Error::IndexOutOfRange(format!("i = {i}, want 0 <= i <= 2k")));
    }
    let lo = pow2(i);
    let hi = pow2(2 * k - i);
    Ok(int_chain(
        1,
        2,
        &[
            (1, &[&[0], &[lo], &[hi + lo]]),
            (-1, &[&[0], &[hi], &[hi + lo]]),
        ],
    ))
}

/// The torus-to-circle covering (x, y) -> 2^i x + 2^(2k-i) y.
pub fn covering_map(k: u32, i: u32) -> Result<AffineTorusMap> {
    check_scale(k)?;
    if i > 2 * k {
        return Err(Error::IndexOutOfRange(format!("i = {i}, want 0 <= i <= 2k")));
    }
    Ok(AffineTorusMap::from_int_matrix(&[&[
        pow2(i),
        pow2(2 * k - i),
    ]]))
}

/// The core curve S^1 -> T^2, t -> (t, 0).
pub fn core_embedding() -> AffineTorusMap {
    AffineTorusMap::from_int_matrix(&[&[1], &[0]])
}

/// Two 3-chains filling the refinement cobordisms, found once by the exact
/// solver and re-verified at every load.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairProvenance {
    pub q: u32,
    pub spread: u32,
    pub solver_version: String,
}

#[derive(Clone, Debug)]
pub struct FillingPair {
    pub alpha: IntChain,
    pub beta: IntChain,
    pub provenance: PairProvenance,
}

impl FillingPair {
    /// Boundary identities re-checked symbolically.
    pub fn verify(&self) -> Result<()> {
        let c = fundamental_cycle();
        let a = horizontal_refined_cycle();
        let b = vertical_refined_cycle();
        if self.alpha.boundary()? != a.sub(&c)? {
            return Err(Error::BoundaryIdentity(
                "alpha does not fill a - c".into(),
            ));
        }
        if self.beta.boundary()? != c.sub(&b)? {
            return Err(Error::BoundaryIdentity("beta does not fill c - b".into()));
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<FillingPair> {
        let j: FillingPairJson = serde_json::from_str(text)?;
        let pair = FillingPair {
            alpha: io::int_chain_from_json(&j.alpha)?,
            beta: io::int_chain_from_json(&j.beta)?,
            provenance: PairProvenance {
                q: j.provenance.q,
                spread: j.provenance.spread,
                solver_version: j.provenance.solver_version,
            },
        };
        pair.verify()?;
        Ok(pair)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let j = FillingPairJson {
            alpha: io::int_chain_to_json(&self.alpha)?,
            beta: io::int_chain_to_json(&self.beta)?,
            provenance: PairProvenanceJson {
                q: self.provenance.q,
                spread: self.provenance.spread,
                solver_version: self.provenance.solver_version.clone(),
            },
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }

    /// The pair shipped with the crate (committed under data/), verified on load.
    pub fn load_embedded() -> Result<FillingPair> {
        FillingPair::from_json_str(include_str!("../data/filling_pair.json"))
    }
}

/// Solve for the filling pair on the smallest workable model, escalating the
/// spread bound and then the grid if a target is not a boundary in the model.
pub fn solve_filling_pair(
    q: u32,
    spread: u32,
    universe_cap: usize,
    node_cap: usize,
) -> Result<FillingPair> {
    let c = fundamental_cycle();
    let a = horizontal_refined_cycle();
    let b = vertical_refined_cycle();
    let target_alpha = a.sub(&c)?;
    let target_beta = c.sub(&b)?;

    let ladder = [(q, spread), (q, spread + 1), (2 * q, spread + 1)];
    let mut last_err = None;
    for (mq, md) in ladder {
        let model = FiniteModel::build(2, 2, mq, md, universe_cap)?;
        let alpha = match fill_int(&model, &target_alpha, node_cap) {
            Ok(cert) => cert,
            Err(e @ Error::NotABoundaryInModel { .. }) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let beta = match fill_int(&model, &target_beta, node_cap) {
            Ok(cert) => cert,
            Err(e @ Error::NotABoundaryInModel { .. }) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let pair = FillingPair {
            alpha: alpha
                .witness
                .to_integer()
                .expect("integral certificate has integer coefficients"),
            beta: beta
                .witness
                .to_integer()
                .expect("integral certificate has integer coefficients"),
            provenance: PairProvenance {
                q: mq,
                spread: md,
                solver_version: io::TOOL_VERSION.to_string(),
            },
        };
        pair.verify()?;
        return Ok(pair);
    }
    Err(last_err.unwrap_or(Error::FillingSearchExhausted {
        q: 2 * q,
        spread: spread + 1,
    }))
}

/// The telescoping circle filling: boundary equals minus the curve residue on
/// the circle. The second summand is pushed one index further than the first;
/// this is the convention under which the telescoping closes.
pub fn residue_filling(k: u32, pair: &FillingPair) -> Result<IntChain> {
    check_scale(k)?;
    let mut omega = IntChain::zero(1, 3);
    for i in 0..k {
        let phi_i = covering_map(k, i)?;
        let phi_next = covering_map(k, i + 1)?;
        omega = omega.add(&phi_i.pushforward(&pair.alpha)?)?;
        omega = omega.add(&phi_next.pushforward(&pair.beta)?)?;
    }
    Ok(omega)
}

/// The full filling of f^{4^k} c - c: prism minus the embedded circle filling.
pub fn twist_filling(k: u32, pair: &FillingPair) -> Result<IntChain> {
    let omega = residue_filling(k, pair)?;
    let gamma = core_embedding();
    twist_prism(k).sub(&gamma.pushforward(&omega)?)
}

/// One certified upper bound on the integral filling volume of the twist:
/// |W_k| / 4^k, with the boundary identity verified before reporting.
#[derive(Clone, Debug)]
pub struct FvBound {
    pub k: u32,
    pub n: u64,
    pub filling: IntChain,
    pub filling_norm: Int,
    pub bound: Rat,
}

pub fn fv_upper_bounds(k_max: u32, pair: &FillingPair) -> Result<Vec<FvBound>> {
    check_scale(k_max)?;
    let c = fundamental_cycle();
    let mut out = Vec::new();
    for k in 1..=k_max {
        let w = twist_filling(k, pair)?;
        let n = scale_power(k);
        let target = twist_power(n).pushforward(&c)?.sub(&c)?;
        if w.boundary()? != target {
            return Err(Error::BoundaryIdentity(format!(
                "twist filling at k = {k} does not bound f^{n} c - c"
            )));
        }
        let norm = w.l1_norm();
        let bound = Rat::new(norm.clone(), Int::from(n));
        out.push(FvBound {
            k,
            n,
            filling: w,
            filling_norm: norm,
            bound,
        });
    }
    Ok(out)
}

/// Upper bound on the integral simplicial volume of the mapping torus with
/// the given monodromy: (n+1) |z| + |w|, after checking that z is a
/// fundamental cycle and that w fills f_* z - z.
pub fn isv_upper_bound(
    z: &IntChain,
    w: &IntChain,
    monodromy: &AffineTorusMap,
) -> Result<Int> {
    let class = z.cycle_class()?;
    if class != Rat::one() {
        return Err(Error::NotFundamental(class.to_string()));
    }
    let target = monodromy.pushforward(z)?.sub(z)?;
    let bw = if w.is_zero() && target.is_zero() {
        target.clone()
    } else {
        w.boundary()?
    };
    if bw != target {
        return Err(Error::BoundaryIdentity(
            "w does not fill f_* z - z".into(),
        ));
    }
    let n = z.ambient_dim();
    Ok(Int::from((n + 1) as i64) * z.l1_norm() + w.l1_norm())
}

/// Which stored identity to corrupt (one flipped coefficient) before
/// verification; the negative control for the verification runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tamper {
    Step1,
    Step2,
    Step3,
}

impl std::str::FromStr for Tamper {
    type Err = Error;
    fn from_str(s: &str) -> Result<Tamper> {
        match s {
            "step1" => Ok(Tamper::Step1),
            "step2" => Ok(Tamper::Step2),
            "step3" => Ok(Tamper::Step3),
            other => Err(Error::Parse(format!("unknown tamper target {other}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StepCheck {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct StepReport {
    pub checks: Vec<StepCheck>,
}

impl StepReport {
    fn record(&mut self, name: String, pass: bool) {
        self.checks.push(StepCheck { name, pass });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StepCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Flip the coefficient of the first stored term.
fn flip_first_term(chain: &IntChain) -> IntChain {
    let mut out = chain.clone();
    if let Some((s, c)) = chain.terms().next() {
        let twice = c.clone() + c.clone();
        out.add_term(s.clone(), -twice).expect("same shape");
    }
    out
}

/// Run the per-step identity suite up to k_max. Exact, zero tolerance.
pub fn verify_steps(k_max: u32, pair: &FillingPair, tamper: Option<Tamper>) -> Result<StepReport> {
    check_scale(k_max)?;
    let mut report = StepReport::default();
    let c = fundamental_cycle();
    let a = horizontal_refined_cycle();
    let b = vertical_refined_cycle();

    report.record("constants: |c| = 2".into(), c.l1_norm() == Int::from(2));
    report.record("constants: |a| = 4".into(), a.l1_norm() == Int::from(4));
    report.record("constants: |b| = 4".into(), b.l1_norm() == Int::from(4));
    for (name, z) in [("c", &c), ("a", &a), ("b", &b)] {
        report.record(
            format!("constants: degree({name}) = 1"),
            z.cycle_class()? == Rat::one(),
        );
    }

    for k in 1..=k_max {
        let n = scale_power(k);
        let mut tau = twist_prism(k);
        if tamper == Some(Tamper::Step1) {
            tau = flip_first_term(&tau);
        }
        let residue = curve_residue(k);
        let target = twist_power(n).pushforward(&c)?.sub(&c)?;
        report.record(
            format!("step 1, k={k}: |tau| = 3"),
            tau.l1_norm() == Int::from(3),
        );
        report.record(
            format!("step 1, k={k}: d(tau) + residue = f^{n} c - c"),
            tau.boundary()?.add(&residue)? == target,
        );
        report.record(
            format!("step 1, k={k}: degree(f^{n} c) = 1"),
            twist_power(n).pushforward(&c)?.cycle_class()? == Rat::one(),
        );

        for i in 0..=2 * k {
            let mut s = circle_residue(k, i)?;
            if tamper == Some(Tamper::Step2) && i == 0 {
                s = flip_first_term(&s);
            }
            let phi = covering_map(k, i)?;
            report.record(
                format!("step 2, k={k}, i={i}: phi_* c = s"),
                phi.pushforward(&c)? == s,
            );
        }
        for i in 0..2 * k {
            let phi_i = covering_map(k, i)?;
            let phi_next = covering_map(k, i + 1)?;
            report.record(
                format!("step 2, k={k}, i={i}: phi^i_* a = phi^(i+1)_* b"),
                phi_i.pushforward(&a)? == phi_next.pushforward(&b)?,
            );
        }
        report.record(
            format!("step 2, k={k}: s vanishes at i = k"),
            circle_residue(k, k)?.is_zero(),
        );

        let mut omega = residue_filling(k, pair)?;
        if tamper == Some(Tamper::Step3) {
            omega = flip_first_term(&omega);
        }
        let s0 = circle_residue(k, 0)?;
        report.record(
            format!("step 3, k={k}: d(omega) = -s^0"),
            omega.boundary()? == s0.negate(),
        );
        let w = twist_prism(k).sub(&core_embedding().pushforward(&omega)?)?;
        report.record(
            format!("step 3, k={k}: d(W) = f^{n} c - c"),
            w.boundary()? == target,
        );
        let budget = Int::from(3)
            + Int::from(k as i64) * (pair.alpha.l1_norm() + pair.beta.l1_norm());
        report.record(
            format!("step 3, k={k}: |W| <= 3 + k(|alpha| + |beta|)"),
            w.l1_norm() <= budget,
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_cycles_have_paper_norms_and_degree_one() {
        assert_eq!(fundamental_cycle().l1_norm(), Int::from(2));
        assert_eq!(horizontal_refined_cycle().l1_norm(), Int::from(4));
        assert_eq!(vertical_refined_cycle().l1_norm(), Int::from(4));
        for z in [
            fundamental_cycle(),
            horizontal_refined_cycle(),
            vertical_refined_cycle(),
        ] {
            assert_eq!(z.cycle_class().unwrap(), Rat::one());
            assert!(z.boundary().unwrap().is_zero());
        }
    }

    #[test]
    fn horizontal_cycle_uses_half_heights() {
        let a = horizontal_refined_cycle();
        let half = Rat::new(Int::one(), Int::from(2));
        let mut seen_half = false;
        for (s, _) in a.terms() {
            for v in s.vertices() {
                assert!(v.0[1].denom() <= &Int::from(2));
                if v.0[1] == half {
                    seen_half = true;
                }
            }
        }
        assert!(seen_half);
    }

    #[test]
    fn twisted_cycle_matches_displayed_form() {
        // f^k c = [(0,0),(1,0),(k+1,1)] - [(0,0),(k,1),(k+1,1)]
        let c = fundamental_cycle();
        for k in 1..=16u64 {
            let img = twist_power(k).pushforward(&c).unwrap();
            let expected = int_chain(
                2,
                2,
                &[
                    (1, &[&[0, 0], &[1, 0], &[k as i64 + 1, 1]]),
                    (-1, &[&[0, 0], &[k as i64, 1], &[k as i64 + 1, 1]]),
                ],
            );
            assert_eq!(img, expected);
            assert_eq!(img.cycle_class().unwrap(), Rat::one());
        }
    }

    #[test]
    fn prism_collapse_identity_holds() {
        let c = fundamental_cycle();
        for k in 1..=4 {
            let n = scale_power(k);
            let lhs = twist_prism(k)
                .boundary()
                .unwrap()
                .add(&curve_residue(k))
                .unwrap();
            let rhs = twist_power(n).pushforward(&c).unwrap().sub(&c).unwrap();
            assert_eq!(lhs, rhs, "k = {k}");
            assert_eq!(twist_prism(k).l1_norm(), Int::from(3));
        }
    }

    #[test]
    fn circle_residue_is_the_covering_image_of_c() {
        let c = fundamental_cycle();
        for k in 1..=4 {
            for i in 0..=2 * k {
                let lhs = covering_map(k, i).unwrap().pushforward(&c).unwrap();
                assert_eq!(lhs, circle_residue(k, i).unwrap(), "k={k} i={i}");
            }
        }
    }

    #[test]
    fn refined_cycle_images_telescope() {
        let a = horizontal_refined_cycle();
        let b = vertical_refined_cycle();
        for k in 1..=4 {
            for i in 0..2 * k {
                let lhs = covering_map(k, i).unwrap().pushforward(&a).unwrap();
                let rhs = covering_map(k, i + 1).unwrap().pushforward(&b).unwrap();
                assert_eq!(lhs, rhs, "k={k} i={i}");
            }
        }
    }

    #[test]
    fn residue_vanishes_at_k_not_at_2k() {
        for k in 1..=4 {
            assert!(circle_residue(k, k).unwrap().is_zero());
            let terminal = circle_residue(k, 2 * k).unwrap();
            assert!(!terminal.is_zero());
            // At i = 2k the displayed chain is minus the i = 0 chain.
            assert_eq!(terminal, circle_residue(k, 0).unwrap().negate());
        }
    }

    #[test]
    fn curve_residue_is_embedded_circle_residue() {
        for k in 1..=4 {
            let s0 = circle_residue(k, 0).unwrap();
            let pushed = core_embedding().pushforward(&s0).unwrap();
            assert_eq!(pushed, curve_residue(k));
        }
    }

    #[test]
    fn index_bounds_are_enforced() {
        assert!(circle_residue(0, 0).is_err());
        assert!(circle_residue(2, 5).is_err());
        assert!(covering_map(2, 5).is_err());
    }

    #[test]
    fn isv_bound_for_identity_monodromy_is_six() {
        let c = fundamental_cycle();
        let id = AffineTorusMap::identity(2);
        let zero = IntChain::zero(2, 3);
        assert_eq!(isv_upper_bound(&c, &zero, &id).unwrap(), Int::from(6));
    }

    #[test]
    fn isv_bound_rejects_non_fundamental_cycles() {
        let c = fundamental_cycle();
        let double = c.scale(&Int::from(2));
        let id = AffineTorusMap::identity(2);
        let zero = IntChain::zero(2, 3);
        assert!(isv_upper_bound(&double, &zero, &id).is_err());
    }
}
