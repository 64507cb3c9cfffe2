//! JSON and CSV serialization for chains, filling pairs and certificates.
//!
//! All numeric output is exact: rationals are emitted as [numerator,
//! denominator] pairs, never as decimals. Integer chain files use plain
//! integer coefficients; rational witnesses inside certificates use pairs.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chain::{IntChain, RatChain};
use crate::error::{Error, Result};
use crate::filling::{FillMode, FillingCertificate};
use crate::simplex::{Int, Point, Rat, StraightSimplex};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn int_to_i64(v: &Int) -> Result<i64> {
    i64::try_from(v.clone()).map_err(|_| Error::JsonRange(v.to_string()))
}

fn rat_pair(v: &Rat) -> Result<[i64; 2]> {
    Ok([int_to_i64(v.numer())?, int_to_i64(v.denom())?])
}

fn pair_rat(p: &[i64; 2]) -> Result<Rat> {
    if p[1] == 0 {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Rat::new(Int::from(p[0]), Int::from(p[1])))
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct IntTermJson {
    pub coeff: i64,
    pub vertices: Vec<Vec<[i64; 2]>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct IntChainJson {
    pub ambient_dim: usize,
    pub degree: usize,
    pub terms: Vec<IntTermJson>,
}

fn vertices_json(s: &StraightSimplex) -> Result<Vec<Vec<[i64; 2]>>> {
    s.vertices()
        .iter()
        .map(|p| p.0.iter().map(rat_pair).collect())
        .collect()
}

fn vertices_from_json(v: &[Vec<[i64; 2]>]) -> Result<StraightSimplex> {
    let pts = v
        .iter()
        .map(|coords| Ok(Point(coords.iter().map(pair_rat).collect::<Result<_>>()?)))
        .collect::<Result<Vec<_>>>()?;
    StraightSimplex::new(pts)
}

pub fn int_chain_to_json(c: &IntChain) -> Result<IntChainJson> {
    Ok(IntChainJson {
        ambient_dim: c.ambient_dim(),
        degree: c.degree(),
        terms: c
            .terms()
            .map(|(s, coeff)| {
                Ok(IntTermJson {
                    coeff: int_to_i64(coeff)?,
                    vertices: vertices_json(s)?,
                })
            })
            .collect::<Result<_>>()?,
    })
}

/// Loader: vertices may be non-canonical; terms are canonicalized and combined.
pub fn int_chain_from_json(j: &IntChainJson) -> Result<IntChain> {
    let mut chain = IntChain::zero(j.ambient_dim, j.degree);
    for t in &j.terms {
        let s = vertices_from_json(&t.vertices)?;
        chain.add_term(s, Int::from(t.coeff))?;
    }
    Ok(chain)
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct RatTermJson {
    pub coeff: [i64; 2],
    pub vertices: Vec<Vec<[i64; 2]>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct RatChainJson {
    pub ambient_dim: usize,
    pub degree: usize,
    pub terms: Vec<RatTermJson>,
}

pub fn rat_chain_to_json(c: &RatChain) -> Result<RatChainJson> {
    Ok(RatChainJson {
        ambient_dim: c.ambient_dim(),
        degree: c.degree(),
        terms: c
            .terms()
            .map(|(s, coeff)| {
                Ok(RatTermJson {
                    coeff: rat_pair(coeff)?,
                    vertices: vertices_json(s)?,
                })
            })
            .collect::<Result<_>>()?,
    })
}

pub fn rat_chain_from_json(j: &RatChainJson) -> Result<RatChain> {
    let mut chain = RatChain::zero(j.ambient_dim, j.degree);
    for t in &j.terms {
        let s = vertices_from_json(&t.vertices)?;
        chain.add_term(s, pair_rat(&t.coeff)?)?;
    }
    Ok(chain)
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PairProvenanceJson {
    pub q: u32,
    #[serde(rename = "D")]
    pub spread: u32,
    pub solver_version: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct FillingPairJson {
    pub alpha: IntChainJson,
    pub beta: IntChainJson,
    pub provenance: PairProvenanceJson,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CertificateJson {
    pub value: [i64; 2],
    pub mode: String,
    pub witness: RatChainJson,
    pub dual: Vec<[i64; 2]>,
    pub provenance: String,
}

pub fn certificate_to_json(cert: &FillingCertificate) -> Result<CertificateJson> {
    Ok(CertificateJson {
        value: rat_pair(&cert.value)?,
        mode: match cert.mode {
            FillMode::Real => "real".into(),
            FillMode::Integral => "integral".into(),
        },
        witness: rat_chain_to_json(&cert.witness)?,
        dual: cert.dual.iter().map(rat_pair).collect::<Result<_>>()?,
        provenance: format!("fillvol v{TOOL_VERSION}"),
    })
}

/// Leading comment lines carrying the tool version and run configuration,
/// shared by all CSV emitters.
pub fn csv_provenance(config: &str) -> String {
    format!("# fillvol v{TOOL_VERSION}\n# {config}\n")
}

fn rat_num_den(v: &Rat) -> (Int, Int) {
    (v.numer().clone(), v.denom().clone())
}

pub fn fv_bounds_csv(rows: &[(u32, u64, Int, Rat)], config: &str) -> String {
    let mut out = csv_provenance(config);
    out.push_str("k,n,norm_Wk,bound_num,bound_den\n");
    for (k, n, norm, bound) in rows {
        let (bn, bd) = rat_num_den(bound);
        out.push_str(&format!("{k},{n},{norm},{bn},{bd}\n"));
    }
    out
}

pub fn growth_csv(rows: &[(u32, usize, Rat)], config: &str) -> String {
    let mut out = csv_provenance(config);
    out.push_str("i,distance,ratio_num,ratio_den\n");
    for (i, d, ratio) in rows {
        let (rn, rd) = rat_num_den(ratio);
        out.push_str(&format!("{i},{d},{rn},{rd}\n"));
    }
    out
}

pub fn delta_table_csv(rows: &[(u32, usize)], config: &str) -> String {
    let mut out = csv_provenance(config);
    out.push_str("i,tetra_count\n");
    for (i, t) in rows {
        out.push_str(&format!("{i},{t}\n"));
    }
    out
}

/// Chains with small rational entries; used by round-trip checks.
pub fn chain_roundtrip_check(c: &IntChain) -> Result<bool> {
    let j = int_chain_to_json(c)?;
    let text = serde_json::to_string(&j)?;
    let back: IntChainJson = serde_json::from_str(&text)?;
    Ok(int_chain_from_json(&back)? == *c)
}

impl std::fmt::Display for FillMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FillMode::Real => write!(f, "real"),
            FillMode::Integral => write!(f, "integral"),
        }
    }
}

/// Guard for emitting rationals whose reported value must be a plain integer.
pub fn expect_integer(v: &Rat) -> Result<Int> {
    if v.denom().is_one() || v.numer().is_zero() {
        Ok(v.numer().clone())
    } else {
        Err(Error::Parse(format!("expected an integer, got {v}")))
    }
}

impl FillingCertificate {
    pub fn is_nonnegative(&self) -> bool {
        !self.value.is_negative()
    }
}
