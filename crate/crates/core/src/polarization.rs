//! Polarizations of complex tori `ℂ²/L` with `L = ℤ² ⊕ Λ` and period matrix
//! `Ω = (I Z)`: Riemann bilinear relations, the Poincaré dual of a block
//! form, and the polarization type.

use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::{comatrix, conj, crat, int_matrix_to_rat, is_pos_def_herm, rat, to_cmat, to_rmat, SkewForm};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::{CMat2, CRat, IMat2, Rat};

/// Period data `Ω = (I Z)` of a complex torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodData {
    z: CMat2,
}

impl PeriodData {
    /// Rejects `Z` whose imaginary part is singular: then the columns of
    /// `(I Z)` do not span a rank-4 lattice.
    pub fn new(z: CMat2) -> Result<Self> {
        let im = z.map(|x| x.im.clone());
        if im.det().is_zero() {
            return Err(Error::DegeneratePeriods);
        }
        Ok(PeriodData { z })
    }

    pub fn z(&self) -> &CMat2 {
        &self.z
    }

    /// The 2×4 period matrix `(I Z)`.
    pub fn omega(&self) -> Matrix<CRat> {
        Matrix::from_fn(2, 4, |i, j| {
            if j < 2 {
                if i == j {
                    crat(rat(1), rat(0))
                } else {
                    CRat::zero()
                }
            } else {
                self.z.0[i][j - 2].clone()
            }
        })
    }
}

/// `Pf(Q)·Q⁻¹ = (−T B; −Bᵀ 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareDual {
    /// The skew block `T` of the source form; the dual carries `−T`.
    pub t: IMat2,
    pub b: IMat2,
}

impl PoincareDual {
    pub fn assemble(&self) -> Matrix<i64> {
        Matrix::from_blocks(
            &self.t.scale(&-1),
            &self.b,
            &self.b.transpose().scale(&-1),
            &IMat2::zero(),
        )
    }
}

pub fn poincare_dual(q: &SkewForm) -> Result<PoincareDual> {
    let b = comatrix(&q.c)?;
    Ok(PoincareDual { t: q.t(), b })
}

/// Evaluation of both Riemann relations through the 4×4 product and
/// through the 2×2 block reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannReport {
    /// `Ω Q⁻¹ Ωᵀ = 0`.
    pub first: bool,
    /// `−i Ω Q⁻¹ Ω̄ᵀ` hermitian positive definite.
    pub second: bool,
}

impl RiemannReport {
    pub fn holds(&self) -> bool {
        self.first && self.second
    }
}

fn herm_pd(m: &CMat2) -> bool {
    is_pos_def_herm(m).unwrap_or(false)
}

fn minus_i() -> CRat {
    crat(rat(0), rat(-1))
}

/// The block-reduced Riemann relations for `Pf(Q)Q⁻¹ = (−T B; −Bᵀ 0)`:
/// `BZᵀ − ZBᵀ = T` and `−i·Pf(Q)·(BZ̄ᵀ − ZBᵀ − T)` hermitian positive definite.
pub fn reduced_riemann(z: &CMat2, b: &IMat2, t: &IMat2, pf: i64) -> RiemannReport {
    let bc = to_cmat(&to_rmat(b));
    let tc = to_cmat(&to_rmat(t));
    let zbt = z * &bc.transpose();
    let first = &(&bc * &z.transpose()) - &zbt == tc;
    let inner = &(&(&bc * &conj(z).transpose()) - &zbt) - &tc;
    let h = inner.scale(&(minus_i() * crat(rat(pf), rat(0))));
    RiemannReport {
        first,
        second: herm_pd(&h),
    }
}

/// The Riemann relations evaluated on the assembled 4×4 form.
pub fn intrinsic_riemann(p: &PeriodData, q: &Matrix<i64>) -> Result<RiemannReport> {
    let qinv = int_matrix_to_rat(q).inverse().ok_or(Error::SingularMatrix)?;
    let qinv = qinv.map(|x| crat(x.clone(), Rat::zero()));
    let omega = p.omega();
    let left = &omega * &qinv;
    let first = (&left * &omega.transpose()).is_zero();
    let prod = &left * &omega.map(|x| x.conj()).transpose();
    let h = prod.scale(&minus_i()).block2(0, 0);
    Ok(RiemannReport {
        first,
        second: herm_pd(&h),
    })
}

/// Riemann bilinear relations for `(Ω, Q)`, decided exactly. Both the 4×4
/// evaluation and the block reduction are computed and must agree.
pub fn riemann_report(p: &PeriodData, q: &SkewForm) -> Result<RiemannReport> {
    let dual = poincare_dual(q)?;
    let intrinsic = intrinsic_riemann(p, &q.assemble())?;
    let reduced = reduced_riemann(p.z(), &dual.b, &dual.t, q.pfaffian());
    if intrinsic != reduced {
        return Err(Error::Internal(format!(
            "Riemann relations disagree: 4×4 gives {intrinsic:?}, block form gives {reduced:?}"
        )));
    }
    Ok(reduced)
}

pub fn check_riemann(p: &PeriodData, q: &SkewForm) -> Result<bool> {
    riemann_report(p, q).map(|r| r.holds())
}

/// Type `(d₁, d₂)`: `d₁` is the gcd of all entries of `Q` and `d₁d₂ = |Pf(Q)|`.
pub fn polarization_type(q: &SkewForm) -> Result<(i64, i64)> {
    if q.c.det() == 0 {
        return Err(Error::SingularMatrix);
    }
    let d1 = q.c.entries().fold(q.tau, |g, &x| g.gcd(&x));
    let pf = q.pfaffian().abs();
    if pf % d1 != 0 || (pf / d1) % d1 != 0 {
        return Err(Error::Internal(format!("type ({d1}, {pf}/{d1}) violates d₁ | d₂")));
    }
    Ok((d1, pf / d1))
}

/// `Q · Pf(Q)Q⁻¹`, expected to be `Pf(Q)·I₄`.
pub fn dual_product(q: &SkewForm) -> Result<Matrix<i64>> {
    let d = poincare_dual(q)?;
    Ok(&q.assemble() * &d.assemble())
}
