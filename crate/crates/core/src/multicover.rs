//! Complex counts assembled from tropical enumeration and the realizability
//! filter of a twisted Mumford family, and the multiple cover identity
//!
//! `N_{g,d,n} = Σ_{k|d} k^{4g−3}·N_{g,1,(d/k)²n}`.
//!
//! The left side is counted on the `τ = 0` family of degree `B`, where every
//! curve lifts; each primitive term on the `τ = 1` family of degree `B/k`,
//! where only gcd-1 curves lift.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{divisibility, pow_u64};
use crate::enumerate::{
    enumerate_certified, stratum_bijection_check, tropical_invariant, BijectionReport, EnumerationResult, SearchBounds,
};
use crate::error::{Error, Result};
use crate::mumford::{is_realizable, MumfordFamily};
use crate::polarization::polarization_type;
use crate::torus::{sample_config, TropicalTorus};
use crate::IMat2;

/// Where a count came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub tau: i64,
    pub torus: IMat2,
    pub degree: IMat2,
    pub genus: usize,
    pub seed: u64,
    pub bounds: SearchBounds,
    pub bounds_stable: bool,
}

/// `N_{g,d,n}` for the class of divisibility `d` and square `2d²n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexCount {
    pub g: usize,
    pub d: i64,
    pub n: i64,
    pub value: u64,
    pub provenance: Provenance,
}

fn realizable_total(res: &EnumerationResult, fam: &MumfordFamily) -> Result<u64> {
    let mut total = 0;
    for c in &res.curves {
        if is_realizable(&c.curve, fam)? {
            total += c.multiplicity.total;
        }
    }
    Ok(total)
}

fn count_unchecked(res: &EnumerationResult, fam: &MumfordFamily) -> Result<ComplexCount> {
    if fam.b() != res.degree {
        return Err(Error::DegreeMismatch {
            expected: format!("{:?}", fam.b().0),
            found: format!("{:?}", res.degree.0),
        });
    }
    // the class is read off the family polarization of type (d, d·n)
    let (d1, d2) = polarization_type(fam.q())?;
    Ok(ComplexCount {
        g: res.genus,
        d: d1,
        n: d2 / d1,
        value: realizable_total(res, fam)?,
        provenance: Provenance {
            tau: fam.tau(),
            torus: fam.s().clone(),
            degree: res.degree.clone(),
            genus: res.genus,
            seed: res.config.seed,
            bounds: res.bounds,
            bounds_stable: res.bounds_stable == Some(true),
        },
    })
}

/// Total multiplicity of the curves in `res` that lift to `fam`.
pub fn complex_count(res: &EnumerationResult, fam: &MumfordFamily) -> Result<ComplexCount> {
    let count = count_unchecked(res, fam)?;
    if !count.provenance.bounds_stable {
        return Err(Error::BoundsUnstable);
    }
    Ok(count)
}

fn divisors(d: i64) -> Vec<i64> {
    (1..=d).filter(|k| d % k == 0).collect()
}

/// The terms `k ↦ k^{4g−3}·N_{g,1,(d/k)²n}` for `k | d`.
pub fn mc_terms(g: usize, d: i64, n: i64, primitive: &BTreeMap<i64, u64>) -> Result<BTreeMap<i64, u64>> {
    if d < 1 || n < 1 || g < 1 {
        return Err(Error::InvalidArgument(format!("need g, d, n ≥ 1, got ({g}, {d}, {n})")));
    }
    let e = 4 * g as u32 - 3;
    divisors(d)
        .into_iter()
        .map(|k| {
            let m = (d / k) * (d / k) * n;
            let v = primitive.get(&m).ok_or(Error::MissingPrimitiveValue(m))?;
            Ok((k, pow_u64(k as u64, e) * v))
        })
        .collect()
}

/// Right side of the multiple cover formula.
pub fn mc_rhs(g: usize, d: i64, n: i64, primitive: &BTreeMap<i64, u64>) -> Result<u64> {
    Ok(mc_terms(g, d, n, primitive)?.values().sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    /// Every enumeration passed the bounds-stability check.
    Certified,
    Indicative,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::Indicative => "indicative",
        }
    }
}

/// The gcd-`k` stratum of `B` against the primitive curves of `B/k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumCheck {
    pub k: i64,
    /// `N^trop_{g,B,k}`.
    pub direct: u64,
    /// `k^{4g−3}·N^trop_{g,B/k,1}`.
    pub scaled: u64,
    pub bijection: BijectionReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiCoverReport {
    pub g: usize,
    pub d: i64,
    pub n: i64,
    pub lhs: ComplexCount,
    /// `N_{g,1,(d/k)²n}` keyed by `k`.
    pub primitives: BTreeMap<i64, ComplexCount>,
    pub rhs_terms: BTreeMap<i64, u64>,
    pub verdict: bool,
    pub status: Status,
    pub strata: Vec<StratumCheck>,
    /// Every stratum matches and the `τ = 0` count is the sum of the strata.
    pub stratification_holds: bool,
}

impl MultiCoverReport {
    pub fn rhs(&self) -> u64 {
        self.rhs_terms.values().sum()
    }
}

/// [`verify_multiple_cover_with`] at default starting bounds.
pub fn verify_multiple_cover(t: &Arc<TropicalTorus>, b: &IMat2, g: usize, seed: u64) -> Result<MultiCoverReport> {
    verify_multiple_cover_with(t, b, g, seed, None)
}

/// Enumerate `B` and every `B/k` through one configuration and compare both
/// sides of the multiple cover formula. `start` overrides the starting
/// search bounds of every run.
pub fn verify_multiple_cover_with(
    t: &Arc<TropicalTorus>,
    b: &IMat2,
    g: usize,
    seed: u64,
    start: Option<SearchBounds>,
) -> Result<MultiCoverReport> {
    let runs = multiple_cover_runs(t, b, g, seed, start)?;
    multiple_cover_report(t, b, &runs)
}

/// Certified enumerations of `B/k` for every `k | d`, keyed by `k`, all
/// through the configuration sampled from `seed`.
pub fn multiple_cover_runs(
    t: &Arc<TropicalTorus>,
    b: &IMat2,
    g: usize,
    seed: u64,
    start: Option<SearchBounds>,
) -> Result<BTreeMap<i64, EnumerationResult>> {
    t.integral().ok_or(Error::NonIntegralTorus)?;
    let d = divisibility(b);
    if d < 1 {
        return Err(Error::InvalidArgument("degree must be nonzero".into()));
    }
    let cfg = sample_config(t, g, seed)?;
    let mut runs = BTreeMap::new();
    for k in divisors(d) {
        let bk = b.map(|x| x / k);
        let res = enumerate_certified(t, &bk, g, &cfg, start.unwrap_or_else(|| SearchBounds::default_for(&bk)))?;
        runs.insert(k, res);
    }
    Ok(runs)
}

/// The report for runs produced by [`multiple_cover_runs`].
pub fn multiple_cover_report(
    t: &Arc<TropicalTorus>,
    b: &IMat2,
    runs: &BTreeMap<i64, EnumerationResult>,
) -> Result<MultiCoverReport> {
    let s = t.integral().ok_or(Error::NonIntegralTorus)?;
    let d = divisibility(b);
    let ks: Vec<i64> = runs.keys().copied().collect();
    if ks != divisors(d) || runs.iter().any(|(k, r)| r.degree != b.map(|x| x / k)) {
        return Err(Error::InvalidArgument(
            "runs must cover B/k for every k dividing B".into(),
        ));
    }
    let g = runs[&1].genus;
    let big = &runs[&1];
    let lhs = count_unchecked(big, &MumfordFamily::twisted(b, 0, &s)?)?;

    let mut primitives = BTreeMap::new();
    let mut values = BTreeMap::new();
    for (&k, res) in runs {
        let count = count_unchecked(res, &MumfordFamily::twisted(&res.degree, 1, &s)?)?;
        values.insert(count.n, count.value);
        primitives.insert(k, count);
    }
    let rhs_terms = mc_terms(g, d, lhs.n, &values)?;
    let verdict = lhs.value == rhs_terms.values().sum::<u64>();

    let e = 4 * g as u32 - 3;
    let mut strata = Vec::new();
    for (&k, res) in runs {
        strata.push(StratumCheck {
            k,
            direct: tropical_invariant(big, k),
            scaled: pow_u64(k as u64, e) * tropical_invariant(res, 1),
            bijection: stratum_bijection_check(big, res, k)?,
        });
    }
    let gcds_divide = big.curves.iter().all(|c| d % c.gcd() == 0);
    let stratification_holds = gcds_divide
        && strata.iter().all(|s| s.direct == s.scaled && s.bijection.holds)
        && strata.iter().map(|s| s.direct).sum::<u64>() == lhs.value
        && primitives
            .iter()
            .all(|(k, p)| p.value == tropical_invariant(&runs[k], 1));

    let status = if runs.values().all(|r| r.bounds_stable == Some(true)) {
        Status::Certified
    } else {
        Status::Indicative
    };
    Ok(MultiCoverReport {
        g,
        d,
        n: lhs.n,
        lhs,
        primitives,
        rhs_terms,
        verdict,
        status,
        strata,
        stratification_holds,
    })
}
