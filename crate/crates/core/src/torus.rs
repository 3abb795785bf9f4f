//! Tropical tori `ℝ²/Λ`, tropical polarizations and point configurations.

use std::collections::BTreeSet;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{comatrix, floor_i64, is_pos_def_sym, rat, ratio, to_imat, to_rmat};
use crate::error::{Error, Result};
use crate::matrix::Vec2;
use crate::{IMat2, RMat2, Rat};

/// Denominator used for sampled point coordinates.
pub const GENERIC_PRIME: i64 = 10007;

/// `ℝ²/Λ` where the columns of `S` are the images of a basis of `Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalTorus {
    s: RMat2,
    s_inv: RMat2,
}

impl TropicalTorus {
    pub fn new(s: RMat2) -> Result<Self> {
        let det = s.det();
        if !det.is_positive() {
            return Err(Error::NotOriented(det.to_string()));
        }
        let s_inv = s.inverse().expect("positive determinant");
        Ok(TropicalTorus { s, s_inv })
    }

    pub fn from_int(s: IMat2) -> Result<Self> {
        TropicalTorus::new(to_rmat(&s))
    }

    pub fn s(&self) -> &RMat2 {
        &self.s
    }

    pub fn s_inv(&self) -> &RMat2 {
        &self.s_inv
    }

    /// `S` as an integer matrix when every entry is integral.
    pub fn integral(&self) -> Option<IMat2> {
        to_imat(&self.s)
    }

    /// Coordinates of `x` in the basis of `Λ`.
    pub fn lattice_coords(&self, x: &Vec2<Rat>) -> Vec2<Rat> {
        self.s_inv.apply(x)
    }

    /// `S·λ` for an integer vector `λ`.
    pub fn lattice_vector(&self, lambda: &Vec2<i64>) -> Vec2<Rat> {
        self.s.apply(&[rat(lambda[0]), rat(lambda[1])])
    }
}

/// A point of the torus stored by its representative in the fundamental
/// parallelogram `[0,1)·s₁ + [0,1)·s₂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    pub coords: Vec2<Rat>,
}

/// Reduce `raw` to the fundamental parallelogram.
pub fn reduce_point(t: &TropicalTorus, raw: &Vec2<Rat>) -> TorusPoint {
    let (rep, _) = reduce_with_shift(t, raw);
    TorusPoint { coords: rep }
}

/// The canonical representative of `raw` and the lattice vector `μ` with
/// `raw = rep + S·μ`.
pub fn reduce_with_shift(t: &TropicalTorus, raw: &Vec2<Rat>) -> (Vec2<Rat>, Vec2<i64>) {
    let c = t.lattice_coords(raw);
    let shift = [floor_i64(&c[0]), floor_i64(&c[1])];
    let sv = t.lattice_vector(&shift);
    ([raw[0].clone() - sv[0].clone(), raw[1].clone() - sv[1].clone()], shift)
}

/// `SᵀC` symmetric positive definite.
pub fn check_tropical_polarization(t: &TropicalTorus, c: &IMat2) -> bool {
    let m = &t.s().transpose() * &to_rmat(c);
    is_pos_def_sym(&m).unwrap_or(false)
}

/// `B·Sᵀ` symmetric positive definite, the degree-side form of the same
/// condition.
pub fn degree_is_positive(t: &TropicalTorus, b: &IMat2) -> bool {
    let m = &to_rmat(b) * &t.s().transpose();
    is_pos_def_sym(&m).unwrap_or(false)
}

/// Linear relations among the entries of `S` that single out the two
/// symmetric worked-example families `(α 2γ; 3γ β)` and `(α 2γ+β; γ β)`.
/// A torus satisfying one is special in its polarization class.
pub fn special_relations(t: &TropicalTorus) -> Vec<&'static str> {
    let s = &t.s().0;
    let mut out = Vec::new();
    if &s[0][1] * rat(3) == &s[1][0] * rat(2) {
        out.push("3·s12 = 2·s21");
    }
    if s[0][1] == &s[1][0] * rat(2) + &s[1][1] {
        out.push("s12 = 2·s21 + s22");
    }
    out
}

/// Comatrix in either direction: degree to polarization or back.
pub fn degree_polarization_duality(m: &IMat2) -> Result<IMat2> {
    comatrix(m)
}

/// Pairwise distinct points with a seed for regeneration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    pub points: Vec<TorusPoint>,
    pub seed: u64,
}

impl PointConfig {
    pub fn new(points: Vec<TorusPoint>, seed: u64) -> Result<Self> {
        let distinct: BTreeSet<_> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(Error::InvalidArgument("configuration points must be distinct".into()));
        }
        Ok(PointConfig { points, seed })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `g` distinct points with lattice coordinates `a/p` for the fixed prime
/// `p = 10007` and numerators drawn from a ChaCha stream seeded by `seed`.
/// Later points never influence earlier ones, so configurations for
/// different `g` share a prefix.
pub fn sample_config(t: &TropicalTorus, g: usize, seed: u64) -> Result<PointConfig> {
    if g == 0 {
        return Err(Error::InvalidArgument("need at least one point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(g);
    let mut seen = BTreeSet::new();
    while points.len() < g {
        let a = rng.gen_range(0..GENERIC_PRIME);
        let b = rng.gen_range(0..GENERIC_PRIME);
        if !seen.insert((a, b)) {
            continue;
        }
        let coords = t.s().apply(&[ratio(a, GENERIC_PRIME), ratio(b, GENERIC_PRIME)]);
        points.push(reduce_point(t, &coords));
    }
    PointConfig::new(points, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat2;
    use num_bigint::BigInt;

    fn m(a: i64, b: i64, c: i64, d: i64) -> IMat2 {
        Mat2::new([[a, b], [c, d]])
    }

    #[test]
    fn orientation_is_enforced() {
        assert!(matches!(
            TropicalTorus::from_int(m(0, 1, 1, 0)),
            Err(Error::NotOriented(_))
        ));
        assert!(TropicalTorus::from_int(m(5, 2, 3, 5)).is_ok());
    }

    #[test]
    fn polarization_examples() {
        let a = TropicalTorus::from_int(m(5, 2, 3, 5)).unwrap();
        assert!(check_tropical_polarization(&a, &m(3, 0, 0, 2)));
        let b = TropicalTorus::from_int(m(3, 4, 1, 2)).unwrap();
        assert!(check_tropical_polarization(&b, &m(1, 0, -1, 2)));
        let unit = TropicalTorus::from_int(IMat2::identity()).unwrap();
        assert!(!check_tropical_polarization(&unit, &m(0, 1, -1, 0)));
    }

    #[test]
    fn duality_examples() {
        assert_eq!(degree_polarization_duality(&m(2, 0, 0, 3)).unwrap(), m(3, 0, 0, 2));
        assert_eq!(degree_polarization_duality(&m(2, 1, 0, 1)).unwrap(), m(1, 0, -1, 2));
        assert_eq!(
            degree_polarization_duality(&IMat2::identity()).unwrap(),
            IMat2::identity()
        );
    }

    #[test]
    fn reduce_examples() {
        let unit = TropicalTorus::from_int(IMat2::identity()).unwrap();
        assert_eq!(
            reduce_point(&unit, &[ratio(3, 2), ratio(-1, 4)]).coords,
            [ratio(1, 2), ratio(3, 4)]
        );
        assert_eq!(reduce_point(&unit, &[rat(0), rat(0)]).coords, [rat(0), rat(0)]);
        let two = TropicalTorus::from_int(m(2, 0, 0, 2)).unwrap();
        assert_eq!(
            reduce_point(&two, &[ratio(5, 2), ratio(1, 2)]).coords,
            [ratio(1, 2), ratio(1, 2)]
        );
    }

    #[test]
    fn sampling_is_deterministic_with_prefix_property() {
        let unit = TropicalTorus::from_int(IMat2::identity()).unwrap();
        let two = sample_config(&unit, 2, 1).unwrap();
        assert_eq!(two.len(), 2);
        assert_ne!(two.points[0], two.points[1]);
        for p in &two.points {
            for c in &p.coords {
                assert_eq!(c.denom(), &BigInt::from(GENERIC_PRIME));
            }
        }
        let one = sample_config(&unit, 1, 1).unwrap();
        assert_eq!(one.points[0], two.points[0]);
        assert_eq!(sample_config(&unit, 2, 1).unwrap(), two);
        assert_ne!(sample_config(&unit, 2, 2).unwrap(), two);
    }

    #[test]
    fn special_families_are_flagged() {
        let a = TropicalTorus::from_int(Mat2::new([[5, 2], [3, 5]])).unwrap();
        assert_eq!(special_relations(&a), vec!["3·s12 = 2·s21"]);
        let b = TropicalTorus::from_int(Mat2::new([[3, 4], [1, 2]])).unwrap();
        assert_eq!(special_relations(&b), vec!["s12 = 2·s21 + s22"]);
        let c = TropicalTorus::from_int(Mat2::new([[7, 2], [2, 5]])).unwrap();
        assert!(special_relations(&c).is_empty());
    }
}
