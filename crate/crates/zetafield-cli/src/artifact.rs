//! On-disk formats. Curve specs and member artifacts are TOML; exact
//! rational data travels as `n/d` strings so a round trip loses nothing.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use zetafield::curves::CurveSpec;
use zetafield::gf::FiniteField;
use zetafield::instability::{
    make_multiplier, MultiplierProvenance, Perturbation, Removal, ZetaLikeMember,
};
use zetafield::polyrat::{CRat, Poly, RationalFn};
use zetafield::zeta::ZetaFunction;

use crate::Failure;

/// Curve spec: base field, model, and the model's defining coefficients.
/// Coefficients are integers and are reduced mod p on load; they describe
/// elements of the prime subfield.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub p: u64,
    pub r: u32,
    /// "elliptic" (coefficients [a, b] of y^2 = x^3 + ax + b),
    /// "hyperelliptic" (coefficients of f in y^2 = f(x), lowest first),
    /// or "projective-line" (no coefficients)
    pub model: String,
    #[serde(default)]
    pub coefficients: Vec<i64>,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn load_curve_file(path: &Path) -> Result<CurveFile, Failure> {
    let text = read(path)?;
    toml::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn build_curve(cf: &CurveFile) -> Result<CurveSpec, Failure> {
    let k = FiniteField::new(cf.p, cf.r)
        .map_err(|e| Failure::Input(format!("bad base field p = {}, r = {}: {e}", cf.p, cf.r)))?;
    match cf.model.as_str() {
        "elliptic" => {
            if cf.coefficients.len() != 2 {
                return Err(Failure::Input(
                    "elliptic model takes coefficients = [a, b]".into(),
                ));
            }
            CurveSpec::elliptic(k.clone(), k.scalar(cf.coefficients[0]), k.scalar(cf.coefficients[1]))
                .map_err(|e| Failure::Input(e.to_string()))
        }
        "hyperelliptic" => {
            if cf.coefficients.is_empty() {
                return Err(Failure::Input(
                    "hyperelliptic model needs the coefficients of f, lowest first".into(),
                ));
            }
            let f = cf.coefficients.iter().map(|&c| k.scalar(c)).collect();
            CurveSpec::hyperelliptic(k, f).map_err(|e| Failure::Input(e.to_string()))
        }
        "projective-line" => {
            if !cf.coefficients.is_empty() {
                return Err(Failure::Input(
                    "projective-line model takes no coefficients".into(),
                ));
            }
            Ok(CurveSpec::projective_line(k))
        }
        other => Err(Failure::Input(format!(
            "unknown model `{other}`; expected elliptic, hyperelliptic, or projective-line"
        ))),
    }
}

/// How many extension counts the zeta construction needs for this model.
fn count_depth(cf: &CurveFile) -> usize {
    match cf.model.as_str() {
        "elliptic" => 2,
        "hyperelliptic" => 4,
        _ => 1,
    }
}

pub fn model_genus(cf: &CurveFile) -> u32 {
    match cf.model.as_str() {
        "elliptic" => 1,
        "hyperelliptic" => 2,
        _ => 0,
    }
}

pub fn build_zeta(cf: &CurveFile) -> Result<ZetaFunction, Failure> {
    let curve = build_curve(cf)?;
    ZetaFunction::from_curve(&curve, count_depth(cf))
        .map_err(|e| Failure::Verify(format!("zeta.construction: {e}")))
}

/// One exact complex-rational coefficient, both parts as `n/d` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatPair {
    pub re: String,
    pub im: String,
}

impl RatPair {
    pub fn from_crat(c: &CRat) -> RatPair {
        RatPair {
            re: c.re.to_string(),
            im: c.im.to_string(),
        }
    }

    pub fn to_crat(&self) -> Result<CRat, Failure> {
        Ok(CRat::new(parse_rat(&self.re)?, parse_rat(&self.im)?))
    }
}

fn parse_rat(s: &str) -> Result<BigRational, Failure> {
    // accept plain integers as well as n/d
    let t = s.trim();
    if let Ok(n) = BigInt::from_str(t) {
        return Ok(BigRational::from_integer(n));
    }
    BigRational::from_str(t).map_err(|e| Failure::Input(format!("bad rational `{s}`: {e}")))
}

pub fn poly_to_pairs(p: &Poly<CRat>) -> Vec<RatPair> {
    p.coeffs().iter().map(RatPair::from_crat).collect()
}

pub fn pairs_to_poly(pairs: &[RatPair]) -> Result<Poly<CRat>, Failure> {
    let coeffs = pairs.iter().map(|p| p.to_crat()).collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::new(coeffs))
}

/// A member of the zeta's rational class, serialized with enough provenance
/// to re-check every claim offline: the base curve, the exact numerator
/// part h, the multiplier seed that produced it, and the measured claims.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberFile {
    pub kind: String,
    pub base: CurveFile,
    pub member: HFile,
    pub provenance: ProvenanceFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claims: Option<ClaimsFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HFile {
    pub h_num: Vec<RatPair>,
    pub h_den: Vec<RatPair>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceFile {
    /// "identity", "generator" (seed = normalized seed polynomial p), or
    /// "removal" (seed = symmetrized orbit polynomial)
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seed: Vec<RatPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<RatPair>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rh_verdict: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ladder: Vec<LadderFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub removed: Vec<RemovedFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderFile {
    pub u0: u64,
    pub sup_deviation: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemovedFile {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

fn provenance_file(p: &MultiplierProvenance) -> ProvenanceFile {
    match p {
        MultiplierProvenance::Identity => ProvenanceFile {
            kind: "identity".into(),
            seed: Vec::new(),
            u0: None,
            normalization: None,
        },
        MultiplierProvenance::Generator(seed) => ProvenanceFile {
            kind: "generator".into(),
            seed: poly_to_pairs(seed),
            u0: None,
            normalization: None,
        },
        MultiplierProvenance::Removal(seed) => ProvenanceFile {
            kind: "removal".into(),
            seed: poly_to_pairs(seed),
            u0: None,
            normalization: None,
        },
    }
}

fn h_file(m: &ZetaLikeMember) -> HFile {
    HFile {
        h_num: poly_to_pairs(m.h().num()),
        h_den: poly_to_pairs(m.h().den()),
    }
}

pub fn perturbation_to_file(base: &CurveFile, pert: &Perturbation, rh_verdict: bool) -> MemberFile {
    let mut prov = provenance_file(pert.multiplier.provenance());
    prov.u0 = Some(pert.u0);
    MemberFile {
        kind: "member".into(),
        base: base.clone(),
        member: h_file(&pert.member),
        provenance: prov,
        claims: Some(ClaimsFile {
            boundary_deviation: Some(pert.boundary_deviation),
            rh_verdict: Some(rh_verdict),
            ladder: pert
                .ladder
                .iter()
                .map(|r| LadderFile {
                    u0: r.u0,
                    sup_deviation: r.sup_deviation,
                })
                .collect(),
            removed: Vec::new(),
        }),
    }
}

pub fn removal_to_file(base: &CurveFile, rem: &Removal, rh_verdict: bool) -> MemberFile {
    let mut prov = provenance_file(rem.multiplier.provenance());
    prov.normalization = Some(RatPair::from_crat(&rem.normalization));
    MemberFile {
        kind: "member".into(),
        base: base.clone(),
        member: h_file(&rem.member),
        provenance: prov,
        claims: Some(ClaimsFile {
            boundary_deviation: None,
            rh_verdict: Some(rh_verdict),
            ladder: Vec::new(),
            removed: rem
                .removed
                .iter()
                .map(|(z, mult)| RemovedFile {
                    re: z.re,
                    im: z.im,
                    multiplicity: *mult,
                })
                .collect(),
        }),
    }
}

pub fn load_member_file(path: &Path) -> Result<MemberFile, Failure> {
    let text = read(path)?;
    let mf: MemberFile =
        toml::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if mf.kind != "member" {
        return Err(Failure::Input(format!(
            "{}: kind is `{}`, expected `member`",
            path.display(),
            mf.kind
        )));
    }
    Ok(mf)
}

pub fn save_member_file(path: &Path, mf: &MemberFile) -> Result<(), Failure> {
    let text = toml::to_string_pretty(mf)
        .map_err(|e| Failure::Input(format!("cannot serialize artifact: {e}")))?;
    std::fs::write(path, text)
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

/// Rebuilds the member from its artifact: base zeta from the curve spec,
/// h from the stored exact coefficients. For generator provenance the seed
/// is replayed through the multiplier constructor and must reproduce h
/// exactly, so a tampered artifact fails verification rather than loading.
pub fn rebuild_member(mf: &MemberFile) -> Result<(ZetaFunction, ZetaLikeMember), Failure> {
    let zf = build_zeta(&mf.base)?;
    let base = ZetaLikeMember::from_zeta(&zf);
    let num = pairs_to_poly(&mf.member.h_num)?;
    let den = pairs_to_poly(&mf.member.h_den)?;
    if den.is_zero() {
        return Err(Failure::Input("member h has a zero denominator".into()));
    }
    let member = base.with_h(RationalFn::new(num, den));
    if mf.provenance.kind == "generator" && !mf.provenance.seed.is_empty() {
        let seed = pairs_to_poly(&mf.provenance.seed)?;
        let mult = make_multiplier(&seed, base.q())
            .map_err(|e| Failure::Verify(format!("artifact.provenance_seed: {e}")))?;
        let replayed = mult.apply(&base);
        if !replayed.h().sub(member.h()).num().is_zero() {
            return Err(Failure::Verify(
                "artifact.provenance_consistency: seed polynomial does not reproduce h".into(),
            ));
        }
    }
    Ok((zf, member))
}
