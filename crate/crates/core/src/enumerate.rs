//! Enumeration of genus-`g`, degree-`B` tropical curves through `g` points.
//!
//! For a combinatorial type with spanning tree `T` rooted at the vertex of
//! marker 0, every balanced slope assignment is `n = Σ_c γ_c·a_c` where `γ_c`
//! is the fundamental cycle of the non-tree edge `c` and `a_c ∈ ℤ²` the
//! slope on `c`. With `λ_c` the winding of `c` the degree is
//! `B = Σ_c a_c λ_cᵀ`, so for fixed windings the `a_c` solve a small integer
//! system. Lengths then solve the exact linear system
//!
//! * `Σ_e γ_c(e)·l_e·n_e = S·λ_c` for each cycle,
//! * `Σ_e P_i(e)·l_e·n_e = p_i − p_0 + S·μ_i` for each marker `i ≥ 1`,
//!
//! where `P_i` is the tree path from the root to the vertex of marker `i`
//! and `μ_i` ranges over lattice lifts.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{comatrix, rat};
use crate::combinatorics::{generate_comb_types, CombType};
use crate::curve::{
    canonical_key, degree, dilate, mikhalkin_multiplicity, AbstractCurve, CurveEdge, CurveKey, Multiplicity, ParamCurve,
};
use crate::error::{Error, Result};
use crate::matrix::{Elimination, Matrix, Vec2};
use crate::torus::{check_tropical_polarization, reduce_point, PointConfig, TropicalTorus};
use crate::{IMat2, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchBounds {
    /// Largest absolute entry of any edge slope.
    pub slope_bound: i64,
    /// Largest absolute entry of any winding or point lift.
    pub winding_bound: i64,
}

impl SearchBounds {
    pub fn new(slope_bound: i64, winding_bound: i64) -> Result<Self> {
        if slope_bound < 1 || winding_bound < 1 {
            return Err(Error::InvalidArgument("search bounds must be at least 1".into()));
        }
        Ok(SearchBounds {
            slope_bound,
            winding_bound,
        })
    }

    /// `max|b_ij| + 1` for slopes, 2 for windings.
    pub fn default_for(b: &IMat2) -> Self {
        let m = b.entries().map(|x| x.abs()).max().unwrap_or(0);
        SearchBounds {
            slope_bound: m + 1,
            winding_bound: 2,
        }
    }

    pub fn doubled(&self) -> Self {
        SearchBounds {
            slope_bound: 2 * self.slope_bound,
            winding_bound: 2 * self.winding_bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedCurve {
    pub curve: ParamCurve,
    pub multiplicity: Multiplicity,
    /// Index into [`generate_comb_types`] for the genus.
    pub comb_type: usize,
    pub key: CurveKey,
}

impl EnumeratedCurve {
    pub fn gcd(&self) -> i64 {
        self.multiplicity.gcd as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    pub torus: Arc<TropicalTorus>,
    pub degree: IMat2,
    pub genus: usize,
    pub config: PointConfig,
    pub bounds: SearchBounds,
    /// Sorted by canonical key.
    pub curves: Vec<EnumeratedCurve>,
    /// Some curve touches a bound or was dropped only for exceeding one.
    pub saturated: bool,
    pub warnings: Vec<String>,
    /// Set by [`enumerate_certified`]: whether a run at doubled bounds gave
    /// the same curves.
    pub bounds_stable: Option<bool>,
}

impl EnumerationResult {
    /// Curves grouped by gcd; the groups partition `curves`.
    pub fn by_gcd(&self) -> BTreeMap<i64, Vec<&EnumeratedCurve>> {
        let mut out: BTreeMap<i64, Vec<&EnumeratedCurve>> = BTreeMap::new();
        for c in &self.curves {
            out.entry(c.gcd()).or_default().push(c);
        }
        out
    }

    pub fn keys(&self) -> Vec<&CurveKey> {
        self.curves.iter().map(|c| &c.key).collect()
    }

    /// `Σ` of multiplicities over all curves.
    pub fn total_multiplicity(&self) -> u64 {
        self.curves.iter().map(|c| c.multiplicity.total).sum()
    }
}

/// Tree data of one combinatorial type.
struct TypeData {
    ty: CombType,
    tree: Vec<bool>,
    /// Non-tree edge of each cycle.
    cycles: Vec<usize>,
    /// Signed edge vector of each fundamental cycle.
    gamma: Vec<Vec<i64>>,
    /// Signed edge vector of the tree path from the root to each vertex.
    paths: Vec<Vec<i64>>,
}

impl TypeData {
    fn new(ty: CombType) -> Self {
        let n = ty.vertex_count;
        let m = ty.edges.len();
        let mut paths: Vec<Option<Vec<i64>>> = vec![None; n];
        let mut tree = vec![false; m];
        paths[0] = Some(vec![0; m]);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (e, &(u, v)) in ty.edges.iter().enumerate() {
                let (y, sign) = if u == x {
                    (v, 1)
                } else if v == x {
                    (u, -1)
                } else {
                    continue;
                };
                if paths[y].is_none() {
                    let mut p = paths[x].clone().expect("visited");
                    p[e] += sign;
                    paths[y] = Some(p);
                    tree[e] = true;
                    queue.push_back(y);
                }
            }
        }
        let paths: Vec<Vec<i64>> = paths.into_iter().map(|p| p.expect("connected")).collect();
        let cycles: Vec<usize> = (0..m).filter(|&e| !tree[e]).collect();
        let gamma = cycles
            .iter()
            .map(|&c| {
                let (u, v) = ty.edges[c];
                let mut g: Vec<i64> = (0..m).map(|e| paths[u][e] - paths[v][e]).collect();
                g[c] += 1;
                g
            })
            .collect();
        TypeData {
            ty,
            tree,
            cycles,
            gamma,
            paths,
        }
    }

    fn has_bridge(&self) -> bool {
        (0..self.ty.edges.len()).any(|e| self.gamma.iter().all(|g| g[e] == 0))
    }

    fn slopes(&self, a: &[Vec2<i64>]) -> Vec<Vec2<i64>> {
        (0..self.ty.edges.len())
            .map(|e| {
                let mut n = [0, 0];
                for (c, g) in self.gamma.iter().enumerate() {
                    n[0] += g[e] * a[c][0];
                    n[1] += g[e] * a[c][1];
                }
                n
            })
            .collect()
    }

    fn has_flat_vertex(&self, slopes: &[Vec2<i64>]) -> bool {
        (self.ty.legs..self.ty.vertex_count).any(|v| {
            let mut outs = Vec::with_capacity(3);
            for (e, &(a, b)) in self.ty.edges.iter().enumerate() {
                let n = slopes[e];
                if a == v {
                    outs.push(n);
                }
                if b == v {
                    outs.push([-n[0], -n[1]]);
                }
            }
            outs[0][0] * outs[1][1] - outs[0][1] * outs[1][0] == 0
        })
    }
}

/// Every `x ∈ [−b, b]^k` with `Σ_c x_c·λ_c = target`.
fn solve_row(lambdas: &[Vec2<i64>], target: Vec2<i64>, b: i64) -> Vec<Vec<i64>> {
    let k = lambdas.len();
    let mut out = Vec::new();
    let mut x = vec![-b; k.saturating_sub(1)];
    loop {
        let mut rest = target;
        for (c, xc) in x.iter().enumerate() {
            rest[0] -= xc * lambdas[c][0];
            rest[1] -= xc * lambdas[c][1];
        }
        let last = lambdas[k - 1];
        if last == [0, 0] {
            if rest == [0, 0] {
                for v in -b..=b {
                    let mut full = x.clone();
                    full.push(v);
                    out.push(full);
                }
            }
        } else {
            let j = if last[0] != 0 { 0 } else { 1 };
            if rest[j] % last[j] == 0 {
                let v = rest[j] / last[j];
                if v.abs() <= b && v * last[0] == rest[0] && v * last[1] == rest[1] {
                    let mut full = x.clone();
                    full.push(v);
                    out.push(full);
                }
            }
        }
        // odometer over the free coordinates
        let mut i = 0;
        loop {
            if i == x.len() {
                return out;
            }
            if x[i] < b {
                x[i] += 1;
                break;
            }
            x[i] = -b;
            i += 1;
        }
    }
}

/// All vectors in `[−b, b]^k`.
fn flat_box(k: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(k)];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-b..=b).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// All vectors in `[−b, b]^(2k)` as `k` pairs.
fn lattice_box(k: usize, b: i64) -> Vec<Vec<Vec2<i64>>> {
    let side = (2 * b + 1) as usize;
    let count = side.pow(2 * k as u32);
    (0..count)
        .map(|mut idx| {
            (0..k)
                .map(|_| {
                    let x = (idx % side) as i64 - b;
                    idx /= side;
                    let y = (idx % side) as i64 - b;
                    idx /= side;
                    [x, y]
                })
                .collect()
        })
        .collect()
}

/// The length system `A·l = r₀ + Σ_k μ_k·d_k` reduced once per slope
/// assignment. After row reduction each row is an affine function of the
/// lift coordinates `μ_k`; rows are stored as integers over one common
/// positive denominator so each lift costs a few integer operations.
struct AffineSystem {
    elim: Elimination<Rat>,
    denom: BigInt,
    /// Per reduced row: the constant, then one coefficient per lift coordinate.
    rows: Vec<Vec<BigInt>>,
    small: Option<Vec<Vec<i128>>>,
}

#[derive(Debug, PartialEq)]
enum Lift {
    Rejected,
    Lengths(Vec<Rat>),
    /// Consistent but not unique; the particular solution has free lengths 0.
    Family(Vec<Rat>),
}

impl AffineSystem {
    fn new(a: &[Vec<i64>], r0: &[Rat], dirs: &[Vec<Rat>]) -> Self {
        let elim = Elimination::new(&Matrix::from_rows(
            a.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect(),
        ));
        let t = elim.transform();
        let apply = |v: &[Rat]| -> Vec<Rat> {
            (0..t.rows())
                .map(|i| (0..t.cols()).fold(Rat::zero(), |acc, k| acc + &t[(i, k)] * &v[k]))
                .collect()
        };
        let cols: Vec<Vec<Rat>> = std::iter::once(apply(r0))
            .chain(dirs.iter().map(|d| apply(d)))
            .collect();
        let denom = cols.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let rows: Vec<Vec<BigInt>> = (0..t.rows())
            .map(|i| {
                cols.iter()
                    .map(|c| (&c[i] * Rat::from_integer(denom.clone())).to_integer())
                    .collect()
            })
            .collect();
        // headroom for |μ| ≤ 2^20 and a handful of terms
        let limit = BigInt::one() << 96u32;
        let small = rows.iter().flatten().all(|x| x.abs() < limit).then(|| {
            rows.iter()
                .map(|r| r.iter().map(|x| x.to_i128().expect("bounded")).collect())
                .collect()
        });
        AffineSystem {
            elim,
            denom,
            rows,
            small,
        }
    }

    fn row_value(&self, i: usize, mu: &[i64]) -> BigInt {
        let r = &self.rows[i];
        if let Some(small) = &self.small {
            let mut v = small[i][0];
            for (k, &m) in mu.iter().enumerate() {
                v += small[i][k + 1] * m as i128;
            }
            return BigInt::from(v);
        }
        mu.iter()
            .enumerate()
            .fold(r[0].clone(), |acc, (k, &m)| acc + &r[k + 1] * m)
    }

    fn lift(&self, mu: &[Vec2<i64>]) -> Lift {
        let flat: Vec<i64> = mu.iter().flatten().copied().collect();
        let rank = self.elim.rank();
        if (rank..self.rows.len()).any(|i| !self.row_value(i, &flat).is_zero()) {
            return Lift::Rejected;
        }
        let pivots = self.elim.pivots();
        let cols = self.elim.reduced().cols();
        let mut x = vec![Rat::zero(); cols];
        for (i, &p) in pivots.iter().enumerate() {
            let v = self.row_value(i, &flat);
            if rank == cols && !v.is_positive() {
                return Lift::Rejected;
            }
            x[p] = Rat::new(v, self.denom.clone());
        }
        if rank == cols {
            Lift::Lengths(x)
        } else {
            Lift::Family(x)
        }
    }
}

/// Whether `p + Σ_k t_k·v_k` is entrywise positive for some real `t`,
/// decided by Fourier–Motzkin elimination of the `t_k`.
fn positive_point_exists(p: &[Rat], basis: &[Vec<Rat>]) -> bool {
    let mut cons: Vec<(Vec<Rat>, Rat)> = (0..p.len())
        .map(|e| (basis.iter().map(|v| v[e].clone()).collect(), p[e].clone()))
        .collect();
    for k in 0..basis.len() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in cons {
            if c.0[k].is_positive() {
                pos.push(c);
            } else if c.0[k].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for (cp, bp) in &pos {
            for (cn, bn) in &neg {
                let (wp, wn) = (-cn[k].clone(), cp[k].clone());
                let coeffs = cp.iter().zip(cn).map(|(x, y)| x * &wp + y * &wn).collect();
                rest.push((coeffs, bp * &wp + bn * &wn));
            }
        }
        cons = rest;
    }
    cons.iter().all(|(_, b)| b.is_positive())
}

/// The torus data entering right-hand sides, scaled by the common
/// denominator `D` of `S` and the point offsets.
struct Scaling {
    denom: BigInt,
    /// `D·s_j` for each column `s_j` of `S`.
    columns: [Vec2<i64>; 2],
    /// `D·(p_i − p_0)`.
    offsets: Vec<Vec2<i64>>,
}

impl Scaling {
    fn new(t: &TropicalTorus, offsets: &[Vec2<Rat>]) -> Option<Self> {
        let denom = t
            .s()
            .entries()
            .chain(offsets.iter().flatten())
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let d = Rat::from_integer(denom.clone());
        let int = |x: &Rat| (x * &d).to_integer().to_i64();
        let col = |j: usize| -> Option<Vec2<i64>> { Some([int(&t.s().0[0][j])?, int(&t.s().0[1][j])?]) };
        Some(Scaling {
            columns: [col(0)?, col(1)?],
            offsets: offsets
                .iter()
                .map(|o| Some([int(&o[0])?, int(&o[1])?]))
                .collect::<Option<_>>()?,
            denom,
        })
    }

    /// Per row of the length system: `D·r₀`, then `D·d_k` for each lift
    /// coordinate.
    fn rhs(&self, lambdas: &[Vec2<i64>]) -> Option<Vec<Vec<i64>>> {
        let g = lambdas.len();
        let k = 2 * (g - 1);
        let mut rows = Vec::with_capacity(4 * g - 2);
        for l in lambdas {
            for j in 0..2 {
                let v = l[0]
                    .checked_mul(self.columns[0][j])?
                    .checked_add(l[1].checked_mul(self.columns[1][j])?)?;
                let mut row = vec![0; k + 1];
                row[0] = v;
                rows.push(row);
            }
        }
        for (i, off) in self.offsets.iter().enumerate() {
            for (j, &o) in off.iter().enumerate() {
                let mut row = vec![0; k + 1];
                row[0] = o;
                row[1 + 2 * i] = self.columns[0][j];
                row[2 + 2 * i] = self.columns[1][j];
                rows.push(row);
            }
        }
        Some(rows)
    }
}

/// Fraction-free integer form of the same reduction. Row operations keep
/// every row primitive; any overflow makes [`IntSystem::new`] give up and
/// the caller falls back to [`AffineSystem`].
struct IntSystem<'a> {
    /// Pivot column and pivot entry of each of the first `rank` rows.
    pivots: Vec<(usize, i64)>,
    /// Per row: the constant, then one coefficient per lift coordinate,
    /// all over the common denominator.
    rhs: Vec<Vec<i64>>,
    denom: &'a BigInt,
    cols: usize,
}

fn primitive_row(row: &mut [i64]) {
    let g = row.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

impl<'a> IntSystem<'a> {
    fn new(a: &[Vec<i64>], rhs: &[Vec<i64>], denom: &'a BigInt) -> Option<Self> {
        let cols = a.first().map_or(0, Vec::len);
        let mut rows: Vec<Vec<i64>> = a
            .iter()
            .zip(rhs)
            .map(|(ar, sr)| {
                let mut row = Vec::with_capacity(ar.len() + sr.len());
                row.extend(ar);
                row.extend(sr);
                primitive_row(&mut row);
                row
            })
            .collect();
        let mut pivots = Vec::new();
        for c in 0..cols {
            let r = pivots.len();
            let Some(p) = (r..rows.len())
                .filter(|&i| rows[i][c] != 0)
                .min_by_key(|&i| rows[i][c].abs())
            else {
                continue;
            };
            rows.swap(r, p);
            let (head, tail) = rows.split_at_mut(r);
            let (pr, tail) = tail.split_first_mut().expect("pivot row");
            for row in head.iter_mut().chain(tail.iter_mut()) {
                let f = row[c];
                if f == 0 {
                    continue;
                }
                let (pc, g) = (pr[c] / pr[c].gcd(&f), f / pr[c].gcd(&f));
                for (x, &y) in row.iter_mut().zip(pr.iter()) {
                    *x = x.checked_mul(pc)?.checked_sub(y.checked_mul(g)?)?;
                }
                primitive_row(row);
            }
            pivots.push((c, 0));
        }
        for (i, p) in pivots.iter_mut().enumerate() {
            p.1 = rows[i][p.0];
        }
        let rhs = rows.into_iter().map(|mut r| r.split_off(cols)).collect();
        Some(IntSystem {
            pivots,
            rhs,
            denom,
            cols,
        })
    }

    fn value(&self, i: usize, mu: &[i64]) -> Option<i64> {
        let r = &self.rhs[i];
        let mut v = r[0];
        for (k, &m) in mu.iter().enumerate() {
            v = v.checked_add(r[k + 1].checked_mul(m)?)?;
        }
        Some(v)
    }

    /// Lifts in `[−w, w]^k` satisfying the first residual row that involves
    /// them, found by solving that row for its last coordinate. `None` on
    /// overflow.
    fn candidate_lifts(&self, w: i64) -> Option<Vec<Vec<i64>>> {
        let k = self.rhs.first().map_or(0, |r| r.len() - 1);
        let rank = self.pivots.len();
        let Some(row) = (rank..self.rhs.len())
            .map(|i| &self.rhs[i])
            .find(|r| r[1..].iter().any(|&x| x != 0))
        else {
            return Some(flat_box(k, w));
        };
        let j = (0..k).rev().find(|&t| row[t + 1] != 0).expect("nonzero coefficient");
        let mut out = Vec::new();
        for mut mu in flat_box(k - 1, w) {
            let mut acc = row[0];
            for (t, &m) in mu.iter().enumerate() {
                let t = if t < j { t } else { t + 1 };
                acc = acc.checked_add(row[t + 1].checked_mul(m)?)?;
            }
            let c = row[j + 1];
            if acc % c == 0 && (acc / c).abs() <= w {
                mu.insert(j, -acc / c);
                out.push(mu);
            }
        }
        Some(out)
    }

    /// `None` on overflow.
    fn lift(&self, mu: &[Vec2<i64>]) -> Option<Lift> {
        let flat: Vec<i64> = mu.iter().flatten().copied().collect();
        let rank = self.pivots.len();
        for i in rank..self.rhs.len() {
            if self.value(i, &flat)? != 0 {
                return Some(Lift::Rejected);
            }
        }
        let full = rank == self.cols;
        let mut vals = Vec::with_capacity(rank);
        for (i, &(_, p)) in self.pivots.iter().enumerate() {
            let v = self.value(i, &flat)?;
            if full && (v == 0 || (v > 0) != (p > 0)) {
                return Some(Lift::Rejected);
            }
            vals.push(v);
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (&(c, p), v) in self.pivots.iter().zip(vals) {
            x[c] = Rat::new(BigInt::from(v), BigInt::from(p) * self.denom);
        }
        Some(if full { Lift::Lengths(x) } else { Lift::Family(x) })
    }
}

struct Search<'a> {
    torus: &'a Arc<TropicalTorus>,
    b: &'a IMat2,
    cfg: &'a PointConfig,
    bounds: SearchBounds,
    lifts: Vec<Vec<Vec2<i64>>>,
    /// `p_i − p_0` for `i ≥ 1`.
    offsets: Vec<Vec2<Rat>>,
    scaling: Option<Scaling>,
}

#[derive(Default)]
struct JobOutput {
    curves: Vec<EnumeratedCurve>,
    saturated: bool,
}

impl Search<'_> {
    fn run(&self, td: &TypeData, type_index: usize, lambdas: &[Vec2<i64>]) -> Result<JobOutput> {
        let mut out = JobOutput::default();
        let sb = self.bounds.slope_bound;
        let row0 = solve_row(lambdas, [self.b.0[0][0], self.b.0[0][1]], sb);
        if row0.is_empty() {
            return Ok(out);
        }
        let row1 = solve_row(lambdas, [self.b.0[1][0], self.b.0[1][1]], sb);
        let rhs = self.scaling.as_ref().and_then(|sc| sc.rhs(lambdas));
        for x0 in &row0 {
            for x1 in &row1 {
                let a: Vec<Vec2<i64>> = x0.iter().zip(x1).map(|(&p, &q)| [p, q]).collect();
                let slopes = td.slopes(&a);
                if slopes.contains(&[0, 0]) || td.has_flat_vertex(&slopes) {
                    continue;
                }
                let in_box = slopes.iter().all(|n| n[0].abs() <= sb && n[1].abs() <= sb);
                self.solve_lengths(td, type_index, lambdas, &rhs, &slopes, in_box, &mut out)?;
            }
        }
        Ok(out)
    }

    /// Exact right-hand side `(r₀, d_k)` for the rational fallback.
    fn rational_rhs(&self, lambdas: &[Vec2<i64>]) -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let g = lambdas.len();
        let n = 4 * g - 2;
        let mut r0: Vec<Rat> = Vec::with_capacity(n);
        for l in lambdas {
            r0.extend(self.torus.lattice_vector(l));
        }
        for off in &self.offsets {
            r0.extend(off.iter().cloned());
        }
        let dirs = (0..2 * (g - 1))
            .map(|k| {
                let mut d = vec![Rat::zero(); n];
                let col = self.torus.s().column(k % 2);
                d[2 * g + 2 * (k / 2)] = col[0].clone();
                d[2 * g + 2 * (k / 2) + 1] = col[1].clone();
                d
            })
            .collect();
        (r0, dirs)
    }

    #[allow(clippy::too_many_arguments)]
    fn solve_lengths(
        &self,
        td: &TypeData,
        type_index: usize,
        lambdas: &[Vec2<i64>],
        rhs: &Option<Vec<Vec<i64>>>,
        slopes: &[Vec2<i64>],
        in_box: bool,
        out: &mut JobOutput,
    ) -> Result<()> {
        let g = td.cycles.len();
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(4 * g - 2);
        for coeffs in td.gamma.iter().chain(&td.paths[1..g]) {
            for j in 0..2 {
                rows.push(coeffs.iter().zip(slopes).map(|(c, n)| c * n[j]).collect());
            }
        }
        let denom = self.scaling.as_ref().map(|sc| &sc.denom);
        let fast = rhs.as_ref().zip(denom).and_then(|(r, d)| IntSystem::new(&rows, r, d));
        let narrowed = fast.as_ref().and_then(|f| f.candidate_lifts(self.bounds.winding_bound));
        let lifts: Vec<Vec<Vec2<i64>>> = match narrowed {
            Some(flat) => flat
                .iter()
                .map(|m| m.chunks(2).map(|c| [c[0], c[1]]).collect())
                .collect(),
            None => self.lifts.clone(),
        };
        let mut exact: Option<AffineSystem> = None;
        let fallback = || {
            let (r0, dirs) = self.rational_rhs(lambdas);
            AffineSystem::new(&rows, &r0, &dirs)
        };
        for mu in &lifts {
            let lift = match fast.as_ref().and_then(|f| f.lift(mu)) {
                Some(l) => l,
                None => exact.get_or_insert_with(fallback).lift(mu),
            };
            match lift {
                Lift::Rejected => {}
                Lift::Family(particular) => {
                    let system = exact.get_or_insert_with(fallback);
                    if positive_point_exists(&particular, &system.elim.null_space()) {
                        return Err(Error::NonGenericConfig(format!(
                            "type {type_index}, slopes {slopes:?}: positive-dimensional family of curves"
                        )));
                    }
                }
                Lift::Lengths(lengths) => {
                    if !in_box {
                        out.saturated = true;
                        continue;
                    }
                    let touches = slopes.iter().flatten().any(|x| x.abs() == self.bounds.slope_bound)
                        || lambdas
                            .iter()
                            .chain(mu.iter())
                            .flatten()
                            .any(|x| x.abs() == self.bounds.winding_bound);
                    out.saturated |= touches;
                    out.curves
                        .push(self.assemble(td, type_index, lambdas, slopes, lengths)?);
                }
            }
        }
        Ok(())
    }

    fn assemble(
        &self,
        td: &TypeData,
        type_index: usize,
        lambdas: &[Vec2<i64>],
        slopes: &[Vec2<i64>],
        lengths: Vec<Rat>,
    ) -> Result<EnumeratedCurve> {
        let mut windings = vec![None; td.ty.edges.len()];
        for (c, &e) in td.cycles.iter().enumerate() {
            windings[e] = Some(lambdas[c]);
        }
        debug_assert!(td.tree.iter().zip(&windings).all(|(t, w)| *t == w.is_none()));
        let pc = ParamCurve {
            curve: AbstractCurve {
                vertex_count: td.ty.vertex_count,
                edges: td
                    .ty
                    .edges
                    .iter()
                    .zip(lengths)
                    .map(|(&(u, v), length)| CurveEdge { u, v, length })
                    .collect(),
                legs: td.ty.leg_list(),
            },
            torus: self.torus.clone(),
            base_vertex: 0,
            base_position: self.cfg.points[0].coords.clone(),
            slopes: slopes.to_vec(),
            windings,
        };
        let diags = pc.validate();
        if !diags.is_empty() {
            return Err(Error::Internal(format!("enumerated curve is invalid: {diags:?}")));
        }
        if degree(&pc)? != *self.b {
            return Err(Error::Internal("enumerated curve has the wrong degree".into()));
        }
        let pos = pc.positions()?;
        for leg in &pc.curve.legs {
            if reduce_point(self.torus, &pos[leg.vertex]) != self.cfg.points[leg.marker] {
                return Err(Error::Internal("enumerated curve misses a marked point".into()));
            }
        }
        let multiplicity = mikhalkin_multiplicity(&pc)?;
        let key = canonical_key(&pc)?;
        Ok(EnumeratedCurve {
            curve: pc,
            multiplicity,
            comb_type: type_index,
            key,
        })
    }
}

/// Curves of genus `g` and degree `B` through `cfg` within `bounds`.
pub fn enumerate(
    t: &Arc<TropicalTorus>,
    b: &IMat2,
    g: usize,
    cfg: &PointConfig,
    bounds: SearchBounds,
) -> Result<EnumerationResult> {
    let types = generate_comb_types(g)?;
    if b.det() <= 0 || !check_tropical_polarization(t, &comatrix(b)?) {
        return Err(Error::NoTropicalPolarization);
    }
    if cfg.len() != g {
        return Err(Error::InvalidArgument(format!("need {g} points, got {}", cfg.len())));
    }
    // a bridge carries zero flow, so bridged types never support a curve
    let data: Vec<(usize, TypeData)> = types
        .into_iter()
        .map(TypeData::new)
        .enumerate()
        .filter(|(_, td)| !td.has_bridge())
        .collect();
    let wb = bounds.winding_bound;
    let offsets: Vec<Vec2<Rat>> = cfg.points[1..]
        .iter()
        .map(|p| [0, 1].map(|j| &p.coords[j] - &cfg.points[0].coords[j]))
        .collect();
    let search = Search {
        torus: t,
        b,
        cfg,
        bounds,
        lifts: lattice_box(g - 1, wb),
        scaling: Scaling::new(t, &offsets),
        offsets,
    };
    let windings = lattice_box(g, wb);
    let jobs: Vec<(usize, &Vec<Vec2<i64>>)> = (0..data.len())
        .flat_map(|i| windings.iter().map(move |w| (i, w)))
        .collect();
    let outputs: Vec<Result<JobOutput>> = jobs
        .par_iter()
        .map(|&(i, lambdas)| search.run(&data[i].1, data[i].0, lambdas))
        .collect();

    let mut merged: BTreeMap<CurveKey, EnumeratedCurve> = BTreeMap::new();
    let mut saturated = false;
    for o in outputs {
        let o = o?;
        saturated |= o.saturated;
        for c in o.curves {
            merged.entry(c.key.clone()).or_insert(c);
        }
    }
    let mut warnings = Vec::new();
    if saturated {
        warnings.push(format!(
            "BoundsTooTight: a solution touches or exceeds slope bound {} / winding bound {}",
            bounds.slope_bound, bounds.winding_bound
        ));
    }
    Ok(EnumerationResult {
        torus: t.clone(),
        degree: b.clone(),
        genus: g,
        config: cfg.clone(),
        bounds,
        curves: merged.into_values().collect(),
        saturated,
        warnings,
        bounds_stable: None,
    })
}

/// Largest bounds tried before giving up on a saturation-free run.
const MAX_DOUBLINGS: usize = 3;

/// Enumerate, doubling bounds until no saturation occurs, then confirm the
/// curve set is unchanged at doubled bounds.
pub fn enumerate_certified(
    t: &Arc<TropicalTorus>,
    b: &IMat2,
    g: usize,
    cfg: &PointConfig,
    start: SearchBounds,
) -> Result<EnumerationResult> {
    let mut bounds = start;
    let mut res = enumerate(t, b, g, cfg, bounds)?;
    let mut tries = 0;
    while res.saturated && tries < MAX_DOUBLINGS {
        bounds = bounds.doubled();
        res = enumerate(t, b, g, cfg, bounds)?;
        tries += 1;
    }
    if res.saturated {
        res.bounds_stable = Some(false);
        return Ok(res);
    }
    let check = enumerate(t, b, g, cfg, bounds.doubled())?;
    let stable = check.keys() == res.keys();
    if !stable {
        res.warnings.push("curve set changes at doubled bounds".into());
    }
    res.bounds_stable = Some(stable);
    Ok(res)
}

/// `N^trop_{g,B,k}`: total multiplicity of the curves with gcd `k`.
pub fn tropical_invariant(res: &EnumerationResult, k: i64) -> u64 {
    res.curves
        .iter()
        .filter(|c| c.gcd() == k)
        .map(|c| c.multiplicity.total)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    pub holds: bool,
    /// Dilated small curves absent from the big gcd-`k` stratum.
    pub missing: Vec<String>,
    /// Big gcd-`k` curves not hit by dilation.
    pub extra: Vec<String>,
    /// Every matched pair has multiplicities in ratio `k^(4g−3)`.
    pub multiplicities_scale: bool,
}

/// Check that dilation by `k` maps the gcd-1 curves of degree `B/k` onto
/// the gcd-`k` curves of degree `B`.
pub fn stratum_bijection_check(big: &EnumerationResult, small: &EnumerationResult, k: i64) -> Result<BijectionReport> {
    if big.torus != small.torus || big.config != small.config || big.genus != small.genus {
        return Err(Error::InvalidArgument("enumerations use different inputs".into()));
    }
    if k < 1 || small.degree.scale(&k) != big.degree {
        return Err(Error::NotDivisible { k });
    }
    let factor = (k as u64).pow(4 * big.genus as u32 - 3);
    let target: BTreeMap<&CurveKey, &EnumeratedCurve> = big
        .curves
        .iter()
        .filter(|c| c.gcd() == k)
        .map(|c| (&c.key, c))
        .collect();
    let mut hit = BTreeMap::new();
    let mut missing = Vec::new();
    let mut multiplicities_scale = true;
    for c in small.curves.iter().filter(|c| c.gcd() == 1) {
        let d = dilate(&c.curve, k);
        let key = canonical_key(&d)?;
        let m = mikhalkin_multiplicity(&d)?.total;
        multiplicities_scale &= m == factor * c.multiplicity.total;
        match target.get(&key) {
            Some(found) => {
                multiplicities_scale &= found.multiplicity.total == m;
                hit.insert(key, ());
            }
            None => missing.push(key.to_string()),
        }
    }
    let extra: Vec<String> = target
        .keys()
        .filter(|k| !hit.contains_key(**k))
        .map(|k| k.to_string())
        .collect();
    Ok(BijectionReport {
        holds: missing.is_empty() && extra.is_empty() && multiplicities_scale,
        missing,
        extra,
        multiplicities_scale,
    })
}
