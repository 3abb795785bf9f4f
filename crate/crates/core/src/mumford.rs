//! Mumford families `𝒜(Z,S)`: fibers `(I, Z + S·L)` with `L = log t/(2iπ)`
//! over the punctured disk, their polarization criterion, twisted period
//! matrices, the phase `σ(Z,B,δ)` and the realizability predicate.
//!
//! Matrices are stored row-major. The scalar condition
//! `b₁₁z₁₂ + b₂₁z₂₂ − b₁₂z₁₁ − b₂₂z₂₁ = τ`, written with the column-first
//! labels `m_ij = M[j−1][i−1]`, is the `(0,1)` entry of `BZᵀ − ZBᵀ = T`.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::algebra::{comatrix, crat, pfaffian4, rat, ratio, to_cmat, to_imat, to_rmat, SkewForm};
use crate::curve::{curve_gcd, degree, ParamCurve};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::polarization::reduced_riemann;
use crate::torus::TropicalTorus;
use crate::{CMat2, CRat, IMat2, RMat2, Rat};

/// The three conditions of the family polarization criterion, each
/// reported on its own. Condition (3) is split into its two Riemann parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    /// `Pf(Q)Q⁻¹ = (−T B; −Bᵀ 0)` with `B = comatrix(C)`.
    pub block_form: bool,
    /// `BSᵀ` symmetric positive definite.
    pub degree_positive: bool,
    /// `BZᵀ − ZBᵀ = T`.
    pub riemann_equation: bool,
    /// `−i·Pf(Q)·(BZ̄ᵀ − ZBᵀ − T)` hermitian positive definite.
    pub riemann_positive: bool,
    pub diagnostics: Vec<String>,
}

impl FamilyReport {
    pub fn holds(&self) -> bool {
        self.block_form && self.degree_positive && self.riemann_equation && self.riemann_positive
    }
}

fn sym_pd(m: &RMat2) -> bool {
    m.is_symmetric() && m.sylvester_positive()
}

/// Criterion for an arbitrary integral skew 4×4 form `Q` on `ℤ² ⊕ Λ`.
pub fn check_family_polarization_matrix(z: &CMat2, s: &RMat2, q: &Matrix<i64>) -> Result<FamilyReport> {
    if (q.rows(), q.cols()) != (4, 4) || !q.is_skew() {
        return Err(Error::InvalidArgument("Q must be a skew 4×4 matrix".into()));
    }
    let pf = pfaffian4(q);
    if pf == 0 {
        return Err(Error::SingularMatrix);
    }
    // Pf(Q)·Q⁻¹ is integral: for a skew 4×4 matrix Q⁻¹ = adj/Pf².
    let inv = crate::algebra::int_matrix_to_rat(q)
        .inverse()
        .ok_or(Error::SingularMatrix)?;
    let dual = crate::algebra::rat_matrix_to_int(&inv.scale(&rat(pf)))
        .ok_or_else(|| Error::Internal("Pf(Q)·Q⁻¹ is not integral".into()))?;
    let c = q.block2(0, 2);
    let t = dual.block2(0, 0).scale(&-1);
    let b = dual.block2(0, 2);
    let mut diagnostics = Vec::new();

    let mut block_form = dual.block2(2, 2).is_zero();
    if !block_form {
        diagnostics.push("(1) lower-right block of Pf(Q)·Q⁻¹ is not zero".to_string());
    }
    match comatrix(&c) {
        Ok(cb) if cb == b => {}
        _ => {
            block_form = false;
            diagnostics.push("(1) upper-right block of Pf(Q)·Q⁻¹ is not comatrix(C)".to_string());
        }
    }

    let bs = &to_rmat(&b) * &s.transpose();
    let degree_positive = sym_pd(&bs);
    if !degree_positive {
        let why = if bs.is_symmetric() {
            "not positive definite"
        } else {
            "not symmetric"
        };
        diagnostics.push(format!("(2) B·Sᵀ is {why}"));
    }

    let r = reduced_riemann(z, &b, &t, pf);
    if !r.first {
        diagnostics.push("(3) BZᵀ − ZBᵀ ≠ T".to_string());
    }
    if !r.second {
        diagnostics.push("(3) −i·Pf(Q)·(BZ̄ᵀ − ZBᵀ − T) is not positive definite".to_string());
    }
    Ok(FamilyReport {
        block_form,
        degree_positive,
        riemann_equation: r.first,
        riemann_positive: r.second,
        diagnostics,
    })
}

pub fn check_family_polarization(z: &CMat2, s: &RMat2, q: &SkewForm) -> Result<FamilyReport> {
    if q.c.det() == 0 {
        return Err(Error::SingularMatrix);
    }
    check_family_polarization_matrix(z, s, &q.assemble())
}

/// Period matrix of the fiber at `L = log t/(2iπ) = a − i·r`, where
/// `a = arg t/2π` and `r = ln|t|/2π`.
pub fn fiber(z: &CMat2, s: &RMat2, a: &Rat, r: &Rat) -> CMat2 {
    let l = crat(a.clone(), -r.clone());
    z + &to_cmat(s).scale(&l)
}

/// Coefficients of the scalar condition in the scan order
/// `(x₁₂, x₂₂, x₁₁, x₂₁)` as row-major positions.
fn scalar_terms(b: &IMat2) -> [((usize, usize), i64); 4] {
    [
        ((1, 0), b.0[0][0]),
        ((1, 1), b.0[0][1]),
        ((0, 0), -b.0[1][0]),
        ((0, 1), -b.0[1][1]),
    ]
}

/// A period matrix `Z = X + iS` whose Mumford family carries the
/// polarization `(C, τ)` with `C = comatrix(B)`. `X` has one nonzero entry:
/// the first variable of the scalar condition with nonzero coefficient `c`
/// gets `τ/c`.
#[allow(non_snake_case)]
pub fn build_Z(b: &IMat2, tau: i64, s: &RMat2) -> Result<CMat2> {
    if b.is_zero() {
        return Err(Error::DegenerateB);
    }
    let bs = &to_rmat(b) * &s.transpose();
    if !sym_pd(&bs) {
        return Err(Error::NoTropicalPolarization);
    }
    if !s.det().is_positive() {
        return Err(Error::NotOriented(s.det().to_string()));
    }
    let mut z = s.map(|y| crat(Rat::zero(), y.clone()));
    let ((i, j), c) = scalar_terms(b).into_iter().find(|(_, c)| *c != 0).expect("B ≠ 0");
    z.0[i][j].re = ratio(tau, c);
    Ok(z)
}

/// The exponent `w` of `σ(Z,B,δ) = e^{2iπw}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaExponent {
    pub value: CRat,
}

impl SigmaExponent {
    pub fn is_one(&self) -> bool {
        self.value.im.is_zero() && self.value.re.is_integer()
    }
}

/// `(b₁₁z₁₂ + b₂₁z₂₂ − b₁₂z₁₁ − b₂₂z₂₁)/δ`; needs `δ` to divide every
/// entry of `B`.
pub fn sigma(z: &CMat2, b: &IMat2, delta: i64) -> Result<SigmaExponent> {
    if delta <= 0 || b.entries().any(|x| x % delta != 0) {
        return Err(Error::NonIntegralExponents {
            b: format!("{:?}", b.0),
            delta,
        });
    }
    let mut w = CRat::zero();
    for ((i, j), c) in scalar_terms(b) {
        w += z.0[i][j].clone() * crat(ratio(c, delta), Rat::zero());
    }
    Ok(SigmaExponent { value: w })
}

/// A polarized Mumford family with integral `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MumfordFamily {
    z: CMat2,
    s: IMat2,
    q: SkewForm,
}

impl MumfordFamily {
    pub fn new(z: CMat2, s: &RMat2, q: SkewForm) -> Result<Self> {
        let si = to_imat(s).ok_or(Error::NonIntegralTorus)?;
        if si.det() <= 0 {
            return Err(Error::NotOriented(si.det().to_string()));
        }
        let report = check_family_polarization(&z, s, &q)?;
        if !report.holds() {
            return Err(Error::InvalidFamily(report.diagnostics.join("; ")));
        }
        Ok(MumfordFamily { z, s: si, q })
    }

    /// The family with degree `B`, twist `τ` and imaginary part `S`.
    pub fn twisted(b: &IMat2, tau: i64, s: &IMat2) -> Result<Self> {
        let sr = to_rmat(s);
        let z = build_Z(b, tau, &sr)?;
        MumfordFamily::new(z, &sr, SkewForm::new(comatrix(b)?, tau))
    }

    pub fn z(&self) -> &CMat2 {
        &self.z
    }

    pub fn s(&self) -> &IMat2 {
        &self.s
    }

    pub fn tau(&self) -> i64 {
        self.q.tau
    }

    pub fn q(&self) -> &SkewForm {
        &self.q
    }

    /// Degree of the curves counted in this family.
    pub fn b(&self) -> IMat2 {
        comatrix(&self.q.c).expect("checked non-singular")
    }

    pub fn torus(&self) -> TropicalTorus {
        TropicalTorus::from_int(self.s.clone()).expect("checked oriented")
    }
}

/// Whether `pc` lifts to the family: `σ(Z, B, δ_Γ) = 1`.
pub fn is_realizable(pc: &ParamCurve, fam: &MumfordFamily) -> Result<bool> {
    if *pc.torus != fam.torus() {
        return Err(Error::InvalidArgument("curve and family live on different tori".into()));
    }
    let found = degree(pc)?;
    let expected = fam.b();
    if found != expected {
        return Err(Error::DegreeMismatch {
            expected: format!("{:?}", expected.0),
            found: format!("{:?}", found.0),
        });
    }
    Ok(sigma(fam.z(), &expected, curve_gcd(pc))?.is_one())
}

/// Shared handle used by the enumerator and the multiple cover check.
pub type FamilyRef = Arc<MumfordFamily>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{dilate, fixtures};
    use crate::matrix::Mat2;
    use crate::polarization::{check_riemann, PeriodData};
    use proptest::prelude::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> IMat2 {
        Mat2::new([[a, b], [c, d]])
    }

    fn re(x: Rat) -> CRat {
        crat(x, Rat::zero())
    }

    /// Independent oracle: X solves the scalar condition, Y = S, and the
    /// positivity condition reduces to `2·det B·BSᵀ ≻ 0`.
    fn oracle(b: &IMat2, tau: i64, s: &IMat2, z: &CMat2) -> bool {
        let x = z.map(|w| w.re.clone());
        let y = z.map(|w| w.im.clone());
        let br = to_rmat(b);
        let scalar =
            &br.0[0][0] * &x.0[1][0] + &br.0[0][1] * &x.0[1][1] - &br.0[1][0] * &x.0[0][0] - &br.0[1][1] * &x.0[0][1];
        let bs = &br * &to_rmat(s).transpose();
        scalar == rat(tau) && y == to_rmat(s) && sym_pd(&bs.scale(&rat(2 * b.det())))
    }

    #[test]
    fn build_examples() {
        let z = build_Z(&IMat2::identity(), 0, &RMat2::identity()).unwrap();
        assert_eq!(z, IMat2::identity().map(|&x| crat(rat(0), rat(x))));

        let z = build_Z(&m(2, 0, 0, 2), 1, &RMat2::identity()).unwrap();
        assert_eq!(z.0[1][0].re, ratio(1, 2));
        assert!(oracle(&m(2, 0, 0, 2), 1, &IMat2::identity(), &z));

        let s = m(3, 4, 1, 2);
        let b = m(2, 1, 0, 1);
        let z = build_Z(&b, 1, &to_rmat(&s)).unwrap();
        assert_eq!(z.0[1][0].re, ratio(1, 2));
        assert!(oracle(&b, 1, &s, &z));
        let q = SkewForm::new(comatrix(&b).unwrap(), 1);
        assert!(check_family_polarization(&z, &to_rmat(&s), &q).unwrap().holds());
    }

    #[test]
    fn build_errors() {
        assert_eq!(build_Z(&IMat2::zero(), 1, &RMat2::identity()), Err(Error::DegenerateB));
        assert_eq!(
            build_Z(&m(1, 0, 0, -1), 0, &RMat2::identity()),
            Err(Error::NoTropicalPolarization)
        );
        assert_eq!(
            build_Z(&m(1, 1, 0, 1), 0, &RMat2::identity()),
            Err(Error::NoTropicalPolarization)
        );
    }

    #[test]
    fn planted_violations() {
        let id = RMat2::identity();
        let z = build_Z(&IMat2::identity(), 0, &id).unwrap();
        let q = SkewForm::new(IMat2::identity(), 0);
        assert!(check_family_polarization(&z, &id, &q).unwrap().holds());

        // (2): SᵀC not symmetric
        let s = to_rmat(&m(1, 1, 0, 1));
        let r = check_family_polarization(&z, &s, &q).unwrap();
        assert!(!r.degree_positive && !r.holds());
        assert!(r.diagnostics.iter().any(|d| d.starts_with("(2)")));

        // (3a): τ = 1 on the τ = 0 construction
        let b = m(2, 0, 0, 2);
        let z1 = build_Z(&b, 1, &id).unwrap();
        let q0 = SkewForm::new(comatrix(&b).unwrap(), 0);
        let r = check_family_polarization(&z1, &id, &q0).unwrap();
        assert!(r.block_form && r.degree_positive && !r.riemann_equation);

        // (3b): imaginary part −S
        let r = check_family_polarization(&z.map(|w| w.conj()), &id, &q).unwrap();
        assert!(r.riemann_equation && !r.riemann_positive);

        // (1): a nonzero upper-left block
        let mut a = q.assemble();
        let mut rows = a.to_rows();
        rows[0][1] = 1;
        rows[1][0] = -1;
        a = Matrix::from_rows(rows);
        let r = check_family_polarization_matrix(&z, &id, &a).unwrap();
        assert!(!r.block_form);
        assert!(r.diagnostics.iter().any(|d| d.starts_with("(1)")));

        assert_eq!(
            check_family_polarization(&z, &id, &SkewForm::new(m(1, 2, 2, 4), 0)),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn fibers_near_the_origin_are_polarized() {
        let s = m(7, 2, 4, 5);
        let b = m(2, 0, 0, 4);
        for tau in [0, 1, 3] {
            let z = build_Z(&b, tau, &to_rmat(&s)).unwrap();
            let q = SkewForm::new(comatrix(&b).unwrap(), tau);
            for r in [-1, -10, -1000] {
                for a in [ratio(0, 1), ratio(1, 3), ratio(1, 1)] {
                    let zt = fiber(&z, &to_rmat(&s), &a, &rat(r));
                    assert!(check_riemann(&PeriodData::new(zt).unwrap(), &q).unwrap());
                }
            }
        }
    }

    #[test]
    fn sigma_examples() {
        let id = RMat2::identity();
        let z = build_Z(&IMat2::identity(), 0, &id).unwrap();
        let w = sigma(&z, &IMat2::identity(), 1).unwrap();
        assert!(w.value.is_zero() && w.is_one());

        let b = m(2, 0, 0, 2);
        let z = build_Z(&b, 1, &id).unwrap();
        assert_eq!(sigma(&z, &b, 1).unwrap().value, re(rat(1)));
        let half = sigma(&z, &b, 2).unwrap();
        assert_eq!(half.value, re(ratio(1, 2)));
        assert!(!half.is_one());
        assert!(matches!(sigma(&z, &b, 3), Err(Error::NonIntegralExponents { .. })));
        assert!(matches!(
            sigma(&z, &m(2, 1, 0, 1), 2),
            Err(Error::NonIntegralExponents { .. })
        ));
    }

    #[test]
    fn realizability_follows_the_gcd() {
        let base = fixtures::marked_unit_theta();
        let b1 = m(2, 1, 1, 2);
        for k in 1..=3i64 {
            let pc = dilate(&base, k);
            let b = b1.scale(&k);
            for tau in 0..=6 {
                let fam = MumfordFamily::twisted(&b, tau, &IMat2::identity()).unwrap();
                assert_eq!(is_realizable(&pc, &fam).unwrap(), tau % k == 0, "k={k} τ={tau}");
            }
        }
        let fam = MumfordFamily::twisted(&IMat2::identity(), 0, &IMat2::identity()).unwrap();
        assert!(matches!(is_realizable(&base, &fam), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn family_invariants() {
        assert_eq!(
            MumfordFamily::new(
                build_Z(&IMat2::identity(), 0, &RMat2::identity()).unwrap(),
                &RMat2::identity().scale(&ratio(1, 2)),
                SkewForm::new(IMat2::identity(), 0)
            ),
            Err(Error::NonIntegralTorus)
        );
        let fam = MumfordFamily::twisted(&m(2, 1, 0, 1), 1, &m(3, 4, 1, 2)).unwrap();
        assert_eq!(fam.b(), m(2, 1, 0, 1));
        assert_eq!(fam.q().c, m(1, 0, -1, 2));
        assert_eq!(fam.tau(), 1);
    }

    fn positive_pair() -> impl Strategy<Value = (IMat2, IMat2)> {
        // S = B·P with P ≻ 0 gives B·Sᵀ = B·P·Bᵀ ≻ 0 and det S > 0
        (prop::array::uniform4(-3i64..=3), (1i64..=4, -2i64..=2, 1i64..=4)).prop_filter_map(
            "need det B > 0 and P ≻ 0",
            |(b, (p0, p1, p2))| {
                let b = m(b[0], b[1], b[2], b[3]);
                let p = m(p0, p1, p1, p2);
                if b.det() <= 0 || p.det() <= 0 {
                    return None;
                }
                let s = &b * &p;
                Some((b, s))
            },
        )
    }

    proptest! {
        #[test]
        fn construction_is_polarized((b, s) in positive_pair(), tau in -5i64..=5) {
            let z = build_Z(&b, tau, &to_rmat(&s)).unwrap();
            prop_assert!(oracle(&b, tau, &s, &z));
            let q = SkewForm::new(comatrix(&b).unwrap(), tau);
            prop_assert!(check_family_polarization(&z, &to_rmat(&s), &q).unwrap().holds());
            let w1 = sigma(&z, &b, 1).unwrap();
            prop_assert_eq!(w1.value.clone(), re(rat(tau)));
            let d = crate::algebra::divisibility(&b);
            let wd = sigma(&z, &b, d).unwrap();
            prop_assert_eq!(wd.value * re(rat(d)), w1.value);
        }
    }
}
