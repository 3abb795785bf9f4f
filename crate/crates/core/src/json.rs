//! JSON documents for every value that crosses the command line.
//!
//! Rationals are strings `"p/q"` (or `"p"` when integral), complex entries
//! are `{re, im}` objects. Every top-level document carries
//! `"schema": "1"`; readers accept it missing on small inline inputs but
//! reject any other version and any unknown field.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{crat, SkewForm};
use crate::curve::{AbstractCurve, CurveEdge, Leg, Multiplicity, ParamCurve};
use crate::enumerate::{BijectionReport, EnumerationResult, SearchBounds};
use crate::error::{Error, Result};
use crate::matrix::{Mat2, Vec2};
use crate::multicover::{ComplexCount, MultiCoverReport, Provenance, StratumCheck};
use crate::torus::{PointConfig, TorusPoint, TropicalTorus};
use crate::{CMat2, IMat2, RMat2, Rat};

pub const SCHEMA: &str = "1";

/// A rational serialized as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rat);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
                parse_rat(v).map(Q).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Q, E> {
                Ok(Q(Rat::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Q, E> {
                Ok(Q(Rat::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    if t.ends_with("/0") || t.contains("/-") {
        return Err(Error::Parse(format!("bad rational {s:?}")));
    }
    Rat::from_str(t).map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Complex {
    pub re: Q,
    pub im: Q,
}

pub type IntMatrix = [[i64; 2]; 2];
pub type RatMatrix = [[Q; 2]; 2];
pub type ComplexMatrix = [[Complex; 2]; 2];

pub fn rmat_doc(m: &RMat2) -> RatMatrix {
    m.0.clone().map(|r| r.map(Q))
}

pub fn rmat_from(m: &RatMatrix) -> RMat2 {
    Mat2(m.clone().map(|r| r.map(|q| q.0)))
}

pub fn cmat_doc(m: &CMat2) -> ComplexMatrix {
    m.0.clone().map(|r| {
        r.map(|z| Complex {
            re: Q(z.re),
            im: Q(z.im),
        })
    })
}

pub fn cmat_from(m: &ComplexMatrix) -> CMat2 {
    Mat2(m.clone().map(|r| r.map(|z| crat(z.re.0, z.im.0))))
}

fn vec_doc(v: &Vec2<Rat>) -> [Q; 2] {
    v.clone().map(Q)
}

fn vec_from(v: &[Q; 2]) -> Vec2<Rat> {
    v.clone().map(|q| q.0)
}

fn check_schema(s: &Option<String>) -> Result<()> {
    match s.as_deref() {
        None | Some(SCHEMA) => Ok(()),
        Some(other) => Err(Error::Parse(format!("unsupported schema version {other:?}"))),
    }
}

fn schema() -> Option<String> {
    Some(SCHEMA.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkewFormDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(rename = "C")]
    pub c: IntMatrix,
    pub tau: i64,
}

impl SkewFormDoc {
    pub fn from_value(q: &SkewForm) -> Self {
        SkewFormDoc {
            schema: schema(),
            c: q.c.0,
            tau: q.tau,
        }
    }

    pub fn to_value(&self) -> Result<SkewForm> {
        check_schema(&self.schema)?;
        Ok(SkewForm::new(Mat2(self.c), self.tau))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(rename = "Z")]
    pub z: ComplexMatrix,
}

impl PeriodDoc {
    pub fn from_value(z: &CMat2) -> Self {
        PeriodDoc {
            schema: schema(),
            z: cmat_doc(z),
        }
    }

    pub fn to_value(&self) -> Result<CMat2> {
        check_schema(&self.schema)?;
        Ok(cmat_from(&self.z))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(rename = "S")]
    pub s: RatMatrix,
}

impl TorusDoc {
    pub fn from_value(t: &TropicalTorus) -> Self {
        TorusDoc {
            schema: schema(),
            s: rmat_doc(t.s()),
        }
    }

    pub fn to_value(&self) -> Result<TropicalTorus> {
        check_schema(&self.schema)?;
        TropicalTorus::new(rmat_from(&self.s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub points: Vec<[Q; 2]>,
    pub seed: u64,
}

impl ConfigDoc {
    pub fn from_value(c: &PointConfig) -> Self {
        ConfigDoc {
            schema: schema(),
            points: c.points.iter().map(|p| vec_doc(&p.coords)).collect(),
            seed: c.seed,
        }
    }

    pub fn to_value(&self) -> Result<PointConfig> {
        check_schema(&self.schema)?;
        PointConfig::new(
            self.points.iter().map(|p| TorusPoint { coords: vec_from(p) }).collect(),
            self.seed,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub u: usize,
    pub v: usize,
    pub length: Q,
    pub slope: [i64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winding: Option<[i64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegDoc {
    pub vertex: usize,
    pub marker: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseDoc {
    pub vertex: usize,
    pub position: [Q; 2],
}

/// A parametrized curve; the torus travels separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub vertices: usize,
    pub edges: Vec<EdgeDoc>,
    pub legs: Vec<LegDoc>,
    pub base: BaseDoc,
}

impl CurveDoc {
    pub fn from_value(pc: &ParamCurve) -> Self {
        CurveDoc {
            schema: schema(),
            vertices: pc.curve.vertex_count,
            edges: pc
                .curve
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| EdgeDoc {
                    u: e.u,
                    v: e.v,
                    length: Q(e.length.clone()),
                    slope: pc.slopes[i],
                    winding: pc.windings[i],
                })
                .collect(),
            legs: pc
                .curve
                .legs
                .iter()
                .map(|l| LegDoc {
                    vertex: l.vertex,
                    marker: l.marker,
                })
                .collect(),
            base: BaseDoc {
                vertex: pc.base_vertex,
                position: vec_doc(&pc.base_position),
            },
        }
    }

    /// Builds the curve without validating it.
    pub fn to_value(&self, torus: Arc<TropicalTorus>) -> Result<ParamCurve> {
        check_schema(&self.schema)?;
        Ok(ParamCurve {
            curve: AbstractCurve {
                vertex_count: self.vertices,
                edges: self
                    .edges
                    .iter()
                    .map(|e| CurveEdge {
                        u: e.u,
                        v: e.v,
                        length: e.length.0.clone(),
                    })
                    .collect(),
                legs: self
                    .legs
                    .iter()
                    .map(|l| Leg {
                        vertex: l.vertex,
                        marker: l.marker,
                    })
                    .collect(),
            },
            torus,
            base_vertex: self.base.vertex,
            base_position: vec_from(&self.base.position),
            slopes: self.edges.iter().map(|e| e.slope).collect(),
            windings: self.edges.iter().map(|e| e.winding).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(rename = "Z")]
    pub z: ComplexMatrix,
    #[serde(rename = "S")]
    pub s: RatMatrix,
    pub tau: i64,
    #[serde(rename = "Q")]
    pub q: SkewFormDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplicityDoc {
    pub gcd: u64,
    /// `[vertex, |det|]` pairs.
    pub vertex_factors: Vec<(usize, u64)>,
    pub total: u64,
}

impl From<&Multiplicity> for MultiplicityDoc {
    fn from(m: &Multiplicity) -> Self {
        MultiplicityDoc {
            gcd: m.gcd,
            vertex_factors: m.vertex_factors.clone(),
            total: m.total,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsDoc {
    pub slope_bound: i64,
    pub winding_bound: i64,
}

impl From<SearchBounds> for BoundsDoc {
    fn from(b: SearchBounds) -> Self {
        BoundsDoc {
            slope_bound: b.slope_bound,
            winding_bound: b.winding_bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntryDoc {
    pub comb_type: usize,
    pub key: String,
    pub multiplicity: MultiplicityDoc,
    pub curve: CurveDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerationDoc {
    pub schema: String,
    #[serde(rename = "S")]
    pub s: RatMatrix,
    pub degree: IntMatrix,
    pub genus: usize,
    pub config: ConfigDoc,
    pub bounds: BoundsDoc,
    pub bounds_stable: Option<bool>,
    pub saturated: bool,
    pub warnings: Vec<String>,
    /// `N^trop_{g,B,k}` keyed by `k`.
    pub strata: BTreeMap<i64, u64>,
    pub total: u64,
    pub curves: Vec<CurveEntryDoc>,
}

impl EnumerationDoc {
    pub fn from_value(r: &EnumerationResult) -> Self {
        let mut config = ConfigDoc::from_value(&r.config);
        config.schema = None;
        EnumerationDoc {
            schema: SCHEMA.into(),
            s: rmat_doc(r.torus.s()),
            degree: r.degree.0,
            genus: r.genus,
            config,
            bounds: r.bounds.into(),
            bounds_stable: r.bounds_stable,
            saturated: r.saturated,
            warnings: r.warnings.clone(),
            strata: r
                .by_gcd()
                .into_iter()
                .map(|(k, cs)| (k, cs.iter().map(|c| c.multiplicity.total).sum()))
                .collect(),
            total: r.total_multiplicity(),
            curves: r
                .curves
                .iter()
                .map(|c| {
                    let mut curve = CurveDoc::from_value(&c.curve);
                    curve.schema = None;
                    CurveEntryDoc {
                        comb_type: c.comb_type,
                        key: c.key.to_string(),
                        multiplicity: (&c.multiplicity).into(),
                        curve,
                    }
                })
                .collect(),
        }
    }

    pub fn check(&self) -> Result<()> {
        check_schema(&Some(self.schema.clone()))
    }

    /// `N^trop_{g,B,k}`.
    pub fn invariant(&self, k: i64) -> u64 {
        self.strata.get(&k).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceDoc {
    pub tau: i64,
    #[serde(rename = "S")]
    pub s: IntMatrix,
    pub degree: IntMatrix,
    pub genus: usize,
    pub seed: u64,
    pub bounds: BoundsDoc,
    pub bounds_stable: bool,
}

impl From<&Provenance> for ProvenanceDoc {
    fn from(p: &Provenance) -> Self {
        ProvenanceDoc {
            tau: p.tau,
            s: p.torus.0,
            degree: p.degree.0,
            genus: p.genus,
            seed: p.seed,
            bounds: p.bounds.into(),
            bounds_stable: p.bounds_stable,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountDoc {
    pub g: usize,
    pub d: i64,
    pub n: i64,
    pub value: u64,
    pub provenance: ProvenanceDoc,
}

impl From<&ComplexCount> for CountDoc {
    fn from(c: &ComplexCount) -> Self {
        CountDoc {
            g: c.g,
            d: c.d,
            n: c.n,
            value: c.value,
            provenance: (&c.provenance).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BijectionDoc {
    pub holds: bool,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
    pub multiplicities_scale: bool,
}

impl From<&BijectionReport> for BijectionDoc {
    fn from(b: &BijectionReport) -> Self {
        BijectionDoc {
            holds: b.holds,
            missing: b.missing.clone(),
            extra: b.extra.clone(),
            multiplicities_scale: b.multiplicities_scale,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumDoc {
    pub k: i64,
    pub direct: u64,
    pub scaled: u64,
    pub bijection: BijectionDoc,
}

impl From<&StratumCheck> for StratumDoc {
    fn from(s: &StratumCheck) -> Self {
        StratumDoc {
            k: s.k,
            direct: s.direct,
            scaled: s.scaled,
            bijection: (&s.bijection).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiCoverDoc {
    pub schema: String,
    pub g: usize,
    pub d: i64,
    pub n: i64,
    pub lhs: CountDoc,
    /// `N_{g,1,(d/k)²n}` keyed by `k`.
    pub primitives: BTreeMap<i64, CountDoc>,
    /// `k^{4g−3}·N_{g,1,(d/k)²n}` keyed by `k`.
    pub rhs_terms: BTreeMap<i64, u64>,
    pub rhs: u64,
    pub verdict: bool,
    pub status: String,
    pub strata: Vec<StratumDoc>,
    pub stratification_holds: bool,
}

impl MultiCoverDoc {
    pub fn from_value(r: &MultiCoverReport) -> Self {
        MultiCoverDoc {
            schema: SCHEMA.into(),
            g: r.g,
            d: r.d,
            n: r.n,
            lhs: (&r.lhs).into(),
            primitives: r.primitives.iter().map(|(&k, c)| (k, c.into())).collect(),
            rhs_terms: r.rhs_terms.clone(),
            rhs: r.rhs(),
            verdict: r.verdict,
            status: r.status.as_str().into(),
            strata: r.strata.iter().map(Into::into).collect(),
            stratification_holds: r.stratification_holds,
        }
    }

    pub fn check(&self) -> Result<()> {
        check_schema(&Some(self.schema.clone()))
    }
}

/// Parse an integer matrix written as `[[a,b],[c,d]]`.
pub fn parse_int_matrix(s: &str) -> Result<IMat2> {
    let m: IntMatrix = serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix {s:?}: {e}")))?;
    Ok(Mat2(m))
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::fixtures;
    use crate::ratio;
    use proptest::prelude::*;

    fn round_trip<T: Serialize + for<'de> Deserialize<'de> + PartialEq + fmt::Debug>(v: &T) {
        let text = to_json(v);
        let back: T = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, v);
    }

    #[test]
    fn rationals_are_strings() {
        assert_eq!(serde_json::to_string(&Q(ratio(-3, 6))).unwrap(), "\"-1/2\"");
        let q: Q = serde_json::from_str("\"4/2\"").unwrap();
        assert_eq!(q.0, ratio(2, 1));
        let q: Q = serde_json::from_str("7").unwrap();
        assert_eq!(q.0, ratio(7, 1));
        assert!(serde_json::from_str::<Q>("\"1/0\"").is_err());
        assert!(serde_json::from_str::<Q>("\"x\"").is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<SkewFormDoc>(r#"{"C":[[1,0],[0,1]],"tau":0,"x":1}"#).is_err());
        let doc: SkewFormDoc = serde_json::from_str(r#"{"schema":"2","C":[[1,0],[0,1]],"tau":0}"#).unwrap();
        assert!(doc.to_value().is_err());
    }

    #[test]
    fn curve_round_trip() {
        let pc = fixtures::weighted_theta();
        let doc = CurveDoc::from_value(&pc);
        round_trip(&doc);
        assert_eq!(doc.to_value(pc.torus.clone()).unwrap(), pc);
    }

    #[test]
    fn torus_round_trip() {
        let t = TropicalTorus::new(Mat2::new([[ratio(7, 2), ratio(1, 3)], [ratio(0, 1), ratio(5, 1)]])).unwrap();
        let doc = TorusDoc::from_value(&t);
        round_trip(&doc);
        assert_eq!(doc.to_value().unwrap(), t);
    }

    proptest! {
        #[test]
        fn skew_and_period_round_trip(c in prop::array::uniform4(-50i64..50), tau in -9i64..9, z in prop::array::uniform8(-40i64..40)) {
            let q = SkewForm::new(Mat2::new([[c[0], c[1]], [c[2], c[3]]]), tau);
            let doc = SkewFormDoc::from_value(&q);
            round_trip(&doc);
            prop_assert_eq!(doc.to_value().unwrap(), q);
            let zm: CMat2 = Mat2::new([
                [crat(ratio(z[0], 7), ratio(z[1], 3)), crat(ratio(z[2], 1), ratio(z[3], 11))],
                [crat(ratio(z[4], 5), ratio(z[5], 2)), crat(ratio(z[6], 9), ratio(z[7], 13))],
            ]);
            let pd = PeriodDoc::from_value(&zm);
            round_trip(&pd);
            prop_assert_eq!(pd.to_value().unwrap(), zm);
        }
    }
}
