//! Exact kernel: rationals, complex rationals, 2×2 integer forms, the block
//! skew form `Q = (0 C; −Cᵀ T)` and its Pfaffian, and exact positivity tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{Mat2, Matrix};
use crate::{CMat2, CRat, IMat2, RMat2, Rat};

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn crat(re: Rat, im: Rat) -> CRat {
    CRat::new(re, im)
}

/// The integer value of `r`, if it has one that fits in an `i64`.
pub fn rat_to_i64(r: &Rat) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    i64::try_from(r.to_integer()).ok()
}

pub fn floor_i64(r: &Rat) -> i64 {
    i64::try_from(r.floor().to_integer()).expect("floor out of i64 range")
}

pub fn to_rmat(m: &IMat2) -> RMat2 {
    m.map(|&x| rat(x))
}

pub fn to_cmat(m: &RMat2) -> CMat2 {
    m.map(|x| crat(x.clone(), Rat::zero()))
}

/// Integer matrix with the same entries, if every entry is integral.
pub fn to_imat(m: &RMat2) -> Option<IMat2> {
    let e: Option<Vec<i64>> = m.entries().map(rat_to_i64).collect();
    let e = e?;
    Some(Mat2::new([[e[0], e[1]], [e[2], e[3]]]))
}

/// Entrywise complex conjugate.
pub fn conj(m: &CMat2) -> CMat2 {
    m.map(|z| z.conj())
}

pub fn conj_transpose(m: &CMat2) -> CMat2 {
    conj(m).transpose()
}

/// `m₁₁m₂₂ − m₁₂m₂₁`.
pub fn det2(m: &IMat2) -> i64 {
    m.det()
}

/// `(det m)(m⁻¹)ᵀ`, the duality between polarizations and curve degrees.
pub fn comatrix(m: &IMat2) -> Result<IMat2> {
    if m.det() == 0 {
        return Err(Error::SingularMatrix);
    }
    Ok(m.adjugate_transpose())
}

/// Gcd of the entries of an integer matrix (0 for the zero matrix).
pub fn divisibility(m: &IMat2) -> i64 {
    m.entries().fold(0i64, |g, &x| g.gcd(&x))
}

/// Sylvester's criterion for a rational symmetric matrix.
pub fn is_pos_def_sym(m: &RMat2) -> Result<bool> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(m.sylvester_positive())
}

pub fn is_hermitian(m: &CMat2) -> bool {
    *m == conj_transpose(m)
}

/// Both leading principal minors of a hermitian matrix are real; the matrix
/// is positive definite iff both are positive.
pub fn is_pos_def_herm(m: &CMat2) -> Result<bool> {
    if !is_hermitian(m) {
        return Err(Error::NotHermitian);
    }
    let first = &m.0[0][0].re;
    let det = m.det();
    debug_assert!(det.im.is_zero());
    Ok(first.is_positive() && det.re.is_positive())
}

/// Integer skew form on `ℤ² ⊕ Λ` in block shape `Q = (0 C; −Cᵀ T)` with
/// `T = (0 τ; −τ 0)`. Basis order is `(e₁, e₂, λ₁, λ₂)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewForm {
    pub c: IMat2,
    pub tau: i64,
}

impl SkewForm {
    pub fn new(c: IMat2, tau: i64) -> Self {
        SkewForm { c, tau }
    }

    pub fn t(&self) -> IMat2 {
        Mat2::skew(self.tau)
    }

    /// The 4×4 matrix of the form.
    pub fn assemble(&self) -> Matrix<i64> {
        Matrix::from_blocks(&IMat2::zero(), &self.c, &self.c.transpose().scale(&-1), &self.t())
    }

    /// `Pf(Q) = −det C`.
    pub fn pfaffian(&self) -> i64 {
        -self.c.det()
    }
}

pub fn pfaffian(q: &SkewForm) -> i64 {
    q.pfaffian()
}

/// Classical 4×4 Pfaffian `a₁₂a₃₄ − a₁₃a₂₄ + a₁₄a₂₃` of an arbitrary skew
/// matrix.
pub fn pfaffian4(a: &Matrix<i64>) -> i64 {
    assert_eq!((a.rows(), a.cols()), (4, 4));
    a[(0, 1)] * a[(2, 3)] - a[(0, 2)] * a[(1, 3)] + a[(0, 3)] * a[(1, 2)]
}

pub fn int_matrix_to_rat(a: &Matrix<i64>) -> Matrix<Rat> {
    a.map(|&x| rat(x))
}

/// Round a rational matrix back to integers if all entries are integral.
pub fn rat_matrix_to_int(a: &Matrix<Rat>) -> Option<Matrix<i64>> {
    let rows: Option<Vec<Vec<i64>>> = a.to_rows().iter().map(|r| r.iter().map(rat_to_i64).collect()).collect();
    rows.map(Matrix::from_rows)
}

/// `k`-th power as `u64`, panicking on overflow.
pub fn pow_u64(k: u64, e: u32) -> u64 {
    k.checked_pow(e).expect("power overflows u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> IMat2 {
        Mat2::new([[a, b], [c, d]])
    }

    #[test]
    fn det2_examples() {
        assert_eq!(det2(&IMat2::identity()), 1);
        assert_eq!(det2(&m(2, 0, 0, 3)), 6);
        assert_eq!(det2(&m(2, 1, 0, 1)), 2);
    }

    #[test]
    fn comatrix_examples() {
        assert_eq!(comatrix(&IMat2::identity()).unwrap(), IMat2::identity());
        assert_eq!(comatrix(&m(3, 0, 0, 2)).unwrap(), m(2, 0, 0, 3));
        assert_eq!(comatrix(&m(1, 0, -1, 2)).unwrap(), m(2, 1, 0, 1));
        assert_eq!(comatrix(&m(1, 2, 2, 4)), Err(Error::SingularMatrix));
    }

    #[test]
    fn comatrix_matches_its_definition() {
        let c = m(1, 0, -1, 2);
        let b = comatrix(&c).unwrap();
        let via_inverse = to_rmat(&c).inverse().unwrap().transpose().scale(&rat(c.det()));
        assert_eq!(to_rmat(&b), via_inverse);
    }

    #[test]
    fn pfaffian_examples() {
        for (d1, d2, tau) in [(1, 3, 0), (2, 2, 7), (3, 5, -1)] {
            assert_eq!(pfaffian(&SkewForm::new(m(d1, 0, 0, d2), tau)), -d1 * d2);
        }
        assert_eq!(pfaffian(&SkewForm::new(IMat2::identity(), 0)), -1);
        let q = SkewForm::new(m(1, 0, -1, 2), 5);
        assert_eq!(pfaffian(&q), -2);
        // classical expansion on the assembled matrix
        assert_eq!(pfaffian4(&q.assemble()), -2);
    }

    #[test]
    fn assembled_form_is_skew() {
        let q = SkewForm::new(m(4, -3, 2, 7), -6);
        let a = q.assemble();
        assert!(a.is_skew());
        assert_eq!(a.block2(0, 0), IMat2::zero());
        assert_eq!(a.block2(0, 2), q.c);
        assert_eq!(a.block2(2, 2), q.t());
    }

    #[test]
    fn positivity_of_symmetric_matrices() {
        assert!(is_pos_def_sym(&to_rmat(&m(10, 6, 6, 15))).unwrap());
        assert!(!is_pos_def_sym(&to_rmat(&m(1, 0, 0, -1))).unwrap());
        assert!(!is_pos_def_sym(&to_rmat(&m(0, 0, 0, 0))).unwrap());
        assert_eq!(is_pos_def_sym(&to_rmat(&m(1, 2, 0, 1))), Err(Error::NotSymmetric));
    }

    #[test]
    fn positivity_of_hermitian_matrices() {
        let i = crat(rat(0), rat(1));
        let re = |x: i64| crat(rat(x), rat(0));
        assert!(is_pos_def_herm(&CMat2::identity()).unwrap());
        assert!(!is_pos_def_herm(&Mat2::new([[re(1), re(0)], [re(0), re(-1)]])).unwrap());
        let h = Mat2::new([[re(2), i.clone()], [-i.clone(), re(2)]]);
        assert!(is_pos_def_herm(&h).unwrap());
        let not_h = Mat2::new([[re(2), i.clone()], [i, re(2)]]);
        assert_eq!(is_pos_def_herm(&not_h), Err(Error::NotHermitian));
    }

    #[test]
    fn divisibility_is_entry_gcd() {
        assert_eq!(divisibility(&m(2, 0, 0, 4)), 2);
        assert_eq!(divisibility(&m(2, 1, 0, 1)), 1);
        assert_eq!(divisibility(&m(-6, 9, 3, 0)), 3);
    }
}
