//! Parametrized tropical curves `h: Γ → ℝ²/Λ`.
//!
//! A curve is stored as a metric graph with an integer slope per oriented
//! edge, a spanning tree (the edges without a winding), the position of one
//! base vertex, and for each non-tree edge `e = (u, v)` the lattice vector
//! `λ_e` with `pos(u) + l_e·n_e = pos(v) + S·λ_e`. Positions of all other
//! vertices follow by walking the tree. Marked points are legs: contracted
//! ends attached to a vertex.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Signed;

use crate::algebra::{floor_i64, rat, ratio, to_imat};
use crate::error::{Error, Result};
use crate::matrix::{Mat2, Vec2};
use crate::torus::{reduce_point, TropicalTorus};
use crate::{IMat2, RMat2, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveEdge {
    pub u: usize,
    pub v: usize,
    pub length: Rat,
}

/// Contracted end carrying the marked point with index `marker`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leg {
    pub vertex: usize,
    pub marker: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbstractCurve {
    pub vertex_count: usize,
    pub edges: Vec<CurveEdge>,
    pub legs: Vec<Leg>,
}

impl AbstractCurve {
    /// First Betti number `#E − #V + 1` (assumes connectivity).
    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.vertex_count as i64 + 1
    }

    /// Number of edge ends at `v`; a loop counts twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.u == v) as usize + (e.v == v) as usize)
            .sum()
    }

    pub fn legs_at(&self, v: usize) -> usize {
        self.legs.iter().filter(|l| l.vertex == v).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            if e.u < self.vertex_count && e.v < self.vertex_count {
                adj[e.u].push(e.v);
                adj[e.v].push(e.u);
            }
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamCurve {
    pub curve: AbstractCurve,
    pub torus: Arc<TropicalTorus>,
    pub base_vertex: usize,
    pub base_position: Vec2<Rat>,
    /// Slope of each edge oriented from `u` to `v`.
    pub slopes: Vec<Vec2<i64>>,
    /// `None` for spanning-tree edges.
    pub windings: Vec<Option<Vec2<i64>>>,
}

/// One violated invariant of a [`ParamCurve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    ShapeMismatch(&'static str),
    EndpointOutOfRange { edge: usize },
    LegOutOfRange { leg: usize },
    BaseOutOfRange,
    Disconnected,
    TreeCycle { edge: usize },
    TreeNotSpanning { vertex: usize },
    NonPositiveLength { edge: usize },
    ZeroSlope { edge: usize },
    Unbalanced { vertex: usize, excess: Vec2<i64> },
    CycleMismatch { edge: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::ShapeMismatch(what) => write!(f, "shape mismatch: {what}"),
            Diagnostic::EndpointOutOfRange { edge } => write!(f, "edge e{edge} has an endpoint out of range"),
            Diagnostic::LegOutOfRange { leg } => write!(f, "leg {leg} attaches to a missing vertex"),
            Diagnostic::BaseOutOfRange => write!(f, "base vertex out of range"),
            Diagnostic::Disconnected => write!(f, "underlying graph is disconnected"),
            Diagnostic::TreeCycle { edge } => write!(f, "tree edge e{edge} closes a cycle"),
            Diagnostic::TreeNotSpanning { vertex } => write!(f, "tree does not reach v{vertex}"),
            Diagnostic::NonPositiveLength { edge } => write!(f, "edge e{edge} has non-positive length"),
            Diagnostic::ZeroSlope { edge } => write!(f, "edge e{edge} has zero slope"),
            Diagnostic::Unbalanced { vertex, excess } => {
                write!(
                    f,
                    "unbalanced at v{vertex}: outgoing slopes sum to ({}, {})",
                    excess[0], excess[1]
                )
            }
            Diagnostic::CycleMismatch { edge } => {
                write!(f, "closing edge e{edge} does not land on a lattice translate")
            }
        }
    }
}

fn add2(a: &Vec2<Rat>, b: &Vec2<Rat>) -> Vec2<Rat> {
    [&a[0] + &b[0], &a[1] + &b[1]]
}

fn sub2(a: &Vec2<Rat>, b: &Vec2<Rat>) -> Vec2<Rat> {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

fn scale_slope(l: &Rat, n: &Vec2<i64>) -> Vec2<Rat> {
    [l * rat(n[0]), l * rat(n[1])]
}

pub fn lattice_length(n: &Vec2<i64>) -> i64 {
    n[0].gcd(&n[1])
}

impl ParamCurve {
    pub fn genus(&self) -> i64 {
        self.curve.genus()
    }

    pub fn edge_count(&self) -> usize {
        self.curve.edges.len()
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.windings[e].is_none()
    }

    /// `l_e·n_e` as a vector of `ℝ²`.
    pub fn displacement(&self, e: usize) -> Vec2<Rat> {
        scale_slope(&self.curve.edges[e].length, &self.slopes[e])
    }

    /// Outgoing slopes at `v`, one per edge end.
    pub fn outgoing(&self, v: usize) -> Vec<Vec2<i64>> {
        let mut out = Vec::new();
        for (e, edge) in self.curve.edges.iter().enumerate() {
            let n = self.slopes[e];
            if edge.u == v {
                out.push(n);
            }
            if edge.v == v {
                out.push([-n[0], -n[1]]);
            }
        }
        out
    }

    /// Positions of the vertices in `ℝ²`, obtained from the base by walking
    /// tree edges. Fails if the tree edges do not form a spanning tree.
    pub fn positions(&self) -> Result<Vec<Vec2<Rat>>> {
        let n = self.curve.vertex_count;
        if self.base_vertex >= n {
            return Err(Error::InvalidCurve(Diagnostic::BaseOutOfRange.to_string()));
        }
        let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
        for (e, edge) in self.curve.edges.iter().enumerate() {
            if self.is_tree_edge(e) {
                adj[edge.u].push((e, edge.v, true));
                adj[edge.v].push((e, edge.u, false));
            }
        }
        let mut pos: Vec<Option<Vec2<Rat>>> = vec![None; n];
        pos[self.base_vertex] = Some(self.base_position.clone());
        let mut queue = VecDeque::from([self.base_vertex]);
        while let Some(x) = queue.pop_front() {
            let px = pos[x].clone().expect("visited");
            for &(e, y, forward) in &adj[x] {
                let d = self.displacement(e);
                let py = if forward { add2(&px, &d) } else { sub2(&px, &d) };
                match &pos[y] {
                    None => {
                        pos[y] = Some(py);
                        queue.push_back(y);
                    }
                    Some(existing) if *existing == py => {}
                    Some(_) => return Err(Error::InvalidCurve(Diagnostic::TreeCycle { edge: e }.to_string())),
                }
            }
        }
        pos.into_iter()
            .enumerate()
            .map(|(v, p)| p.ok_or_else(|| Error::InvalidCurve(Diagnostic::TreeNotSpanning { vertex: v }.to_string())))
            .collect()
    }

    fn tree_diagnostics(&self) -> Vec<Diagnostic> {
        // union-find over tree edges
        let n = self.curve.vertex_count;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut diags = Vec::new();
        let mut joined = 0;
        for (e, edge) in self.curve.edges.iter().enumerate() {
            if !self.is_tree_edge(e) {
                continue;
            }
            let (a, b) = (find(&mut parent, edge.u), find(&mut parent, edge.v));
            if a == b {
                diags.push(Diagnostic::TreeCycle { edge: e });
            } else {
                parent[a] = b;
                joined += 1;
            }
        }
        if joined + 1 < n {
            let root = find(&mut parent, self.base_vertex.min(n - 1));
            if let Some(v) = (0..n).find(|&v| find(&mut parent, v) != root) {
                diags.push(Diagnostic::TreeNotSpanning { vertex: v });
            }
        }
        diags
    }

    /// Every violated invariant; empty iff the curve is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let c = &self.curve;
        let n = c.vertex_count;
        let mut diags = Vec::new();
        if self.slopes.len() != c.edges.len() {
            diags.push(Diagnostic::ShapeMismatch("one slope per edge"));
        }
        if self.windings.len() != c.edges.len() {
            diags.push(Diagnostic::ShapeMismatch("one winding slot per edge"));
        }
        if !diags.is_empty() {
            return diags;
        }
        for (e, edge) in c.edges.iter().enumerate() {
            if edge.u >= n || edge.v >= n {
                diags.push(Diagnostic::EndpointOutOfRange { edge: e });
            }
        }
        for (i, leg) in c.legs.iter().enumerate() {
            if leg.vertex >= n {
                diags.push(Diagnostic::LegOutOfRange { leg: i });
            }
        }
        if self.base_vertex >= n {
            diags.push(Diagnostic::BaseOutOfRange);
        }
        if !diags.is_empty() {
            return diags;
        }
        if !c.is_connected() {
            diags.push(Diagnostic::Disconnected);
        }
        for (e, edge) in c.edges.iter().enumerate() {
            if !edge.length.is_positive() {
                diags.push(Diagnostic::NonPositiveLength { edge: e });
            }
            if self.slopes[e] == [0, 0] {
                diags.push(Diagnostic::ZeroSlope { edge: e });
            }
        }
        for v in 0..n {
            let excess = self
                .outgoing(v)
                .iter()
                .fold([0, 0], |acc, s| [acc[0] + s[0], acc[1] + s[1]]);
            if excess != [0, 0] {
                diags.push(Diagnostic::Unbalanced { vertex: v, excess });
            }
        }
        let tree = self.tree_diagnostics();
        if !tree.is_empty() {
            diags.extend(tree);
            return diags;
        }
        let pos = match self.positions() {
            Ok(p) => p,
            Err(_) => return diags,
        };
        for (e, edge) in c.edges.iter().enumerate() {
            if let Some(lambda) = self.windings[e] {
                let end = add2(&pos[edge.u], &self.displacement(e));
                let expected = add2(&pos[edge.v], &self.torus.lattice_vector(&lambda));
                if end != expected {
                    diags.push(Diagnostic::CycleMismatch { edge: e });
                }
            }
        }
        diags
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn require_valid(&self) -> Result<()> {
        let d = self.validate();
        if d.is_empty() {
            Ok(())
        } else {
            let msg: Vec<String> = d.iter().map(ToString::to_string).collect();
            Err(Error::InvalidCurve(msg.join("; ")))
        }
    }
}

pub fn validate(pc: &ParamCurve) -> Vec<Diagnostic> {
    pc.validate()
}

/// `Σ_e l_e n_e n_eᵀ`, equal to `B·Sᵀ` for a curve of degree `B`.
pub fn length_gram(pc: &ParamCurve) -> RMat2 {
    let mut m = RMat2::zero();
    for (e, edge) in pc.curve.edges.iter().enumerate() {
        let n = [rat(pc.slopes[e][0]), rat(pc.slopes[e][1])];
        let outer = Mat2::outer(&n, &n).scale(&edge.length);
        m = &m + &outer;
    }
    m
}

/// Degree from `Bᵀ(φ) = Σ_e φ(n_e) l_e n_e`, read in the basis of `Λ`:
/// `Bᵀ = S⁻¹·Σ_e l_e n_e n_eᵀ`.
pub fn degree(pc: &ParamCurve) -> Result<IMat2> {
    pc.require_valid()?;
    let bt = pc.torus.s_inv() * &length_gram(pc);
    let b = bt.transpose();
    to_imat(&b).ok_or_else(|| Error::NonIntegralDegree(format!("{:?}", b.map(ToString::to_string).0)))
}

/// Offsets of the fundamental domain in lattice coordinates, tried in order
/// when a vertex or an edge sits on a wall.
fn domain_offsets() -> [Vec2<Rat>; 4] {
    [
        [rat(0), rat(0)],
        [ratio(1, 1009), ratio(1, 1013)],
        [ratio(2, 2003), ratio(3, 2011)],
        [ratio(5, 4001), ratio(7, 4003)],
    ]
}

/// Degree read off wall crossings: column `j` of `B` is the signed sum of
/// the slopes of edges crossing the walls `{c_j ∈ ℤ}` of the lattice
/// tiling, where `c` are lattice coordinates.
pub fn degree_by_crossing(pc: &ParamCurve) -> Result<IMat2> {
    pc.require_valid()?;
    let pos = pc.positions()?;
    let segments: Vec<(Vec2<Rat>, Vec2<Rat>)> = pc
        .curve
        .edges
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let a = pc.torus.lattice_coords(&pos[edge.u]);
            let b = pc.torus.lattice_coords(&add2(&pos[edge.u], &pc.displacement(e)));
            (a, b)
        })
        .collect();
    'offsets: for offset in domain_offsets() {
        let mut b = IMat2::zero();
        for (e, (start, end)) in segments.iter().enumerate() {
            let s = sub2(start, &offset);
            let t = sub2(end, &offset);
            if s.iter().chain(t.iter()).any(|x| x.is_integer()) {
                continue 'offsets;
            }
            let n = pc.slopes[e];
            for j in 0..2 {
                let crossings = floor_i64(&t[j]) - floor_i64(&s[j]);
                b.0[0][j] += crossings * n[0];
                b.0[1][j] += crossings * n[1];
            }
        }
        return Ok(b);
    }
    Err(Error::WallDegeneracy)
}

/// Gcd of the lattice lengths of all edge slopes.
pub fn curve_gcd(pc: &ParamCurve) -> i64 {
    pc.slopes.iter().fold(0, |g, n| g.gcd(&lattice_length(n)))
}

/// `δ_Γ · ∏ m_V` over unmarked trivalent vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multiplicity {
    pub gcd: u64,
    pub vertex_factors: Vec<(usize, u64)>,
    pub total: u64,
}

fn det_slopes(a: &Vec2<i64>, b: &Vec2<i64>) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Lattice index of two outgoing slopes at each unmarked vertex, times the
/// curve gcd. Marked vertices must carry exactly one leg and two edge ends.
pub fn mikhalkin_multiplicity(pc: &ParamCurve) -> Result<Multiplicity> {
    pc.require_valid()?;
    let c = &pc.curve;
    let gcd = curve_gcd(pc) as u64;
    let mut factors = Vec::new();
    let mut total = gcd;
    for v in 0..c.vertex_count {
        let legs = c.legs_at(v);
        let outs = pc.outgoing(v);
        if legs > 0 {
            if legs != 1 || outs.len() != 2 {
                return Err(Error::NotTrivalent { vertex: v });
            }
            continue;
        }
        if outs.len() != 3 {
            return Err(Error::NotTrivalent { vertex: v });
        }
        let m = det_slopes(&outs[0], &outs[1]).unsigned_abs();
        if m == 0 {
            return Err(Error::FlatVertex { vertex: v });
        }
        factors.push((v, m));
        total = total.checked_mul(m).expect("multiplicity overflows u64");
    }
    Ok(Multiplicity {
        gcd,
        vertex_factors: factors,
        total,
    })
}

/// Multiply every slope by `k` and divide every length by `k`. The image
/// in the torus, the windings and the marked points are unchanged; the
/// degree is multiplied by `k`.
pub fn dilate(pc: &ParamCurve, k: i64) -> ParamCurve {
    assert!(k >= 1, "dilation factor must be positive");
    let mut out = pc.clone();
    let kr = rat(k);
    for (e, edge) in out.curve.edges.iter_mut().enumerate() {
        edge.length = &edge.length / &kr;
        out.slopes[e] = [pc.slopes[e][0] * k, pc.slopes[e][1] * k];
    }
    out
}

/// Inverse of [`dilate`]; needs `k` to divide every slope.
pub fn contract(pc: &ParamCurve, k: i64) -> Result<ParamCurve> {
    if k < 1 || pc.slopes.iter().any(|n| n[0] % k != 0 || n[1] % k != 0) {
        return Err(Error::NotDivisible { k });
    }
    let mut out = pc.clone();
    let kr = rat(k);
    for (e, edge) in out.curve.edges.iter_mut().enumerate() {
        edge.length = &edge.length * &kr;
        out.slopes[e] = [pc.slopes[e][0] / k, pc.slopes[e][1] / k];
    }
    Ok(out)
}

/// Parametrization-independent description of a curve's image: every edge
/// as (start point in the fundamental domain, displacement `l·n`, slope),
/// oriented canonically, plus the marked points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveKey {
    pub edges: Vec<(Vec2<Rat>, Vec2<Rat>, Vec2<i64>)>,
    pub marks: Vec<(usize, Vec2<Rat>)>,
}

impl fmt::Display for CurveKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges
            .iter()
            .map(|(p, d, n)| format!("[{},{}]+[{},{}]@({},{})", p[0], p[1], d[0], d[1], n[0], n[1]))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn canonical_key(pc: &ParamCurve) -> Result<CurveKey> {
    let pos = pc.positions()?;
    let t = &pc.torus;
    let mut edges: Vec<_> = pc
        .curve
        .edges
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let d = pc.displacement(e);
            let n = pc.slopes[e];
            let fwd = (reduce_point(t, &pos[edge.u]).coords, d.clone(), n);
            let end = add2(&pos[edge.u], &d);
            let back = (
                reduce_point(t, &end).coords,
                [-d[0].clone(), -d[1].clone()],
                [-n[0], -n[1]],
            );
            fwd.min(back)
        })
        .collect();
    edges.sort();
    let mut marks: Vec<_> = pc
        .curve
        .legs
        .iter()
        .map(|l| (l.marker, reduce_point(t, &pos[l.vertex]).coords))
        .collect();
    marks.sort();
    Ok(CurveKey { edges, marks })
}

/// The transcribed curves of the two worked examples of tropical curves in
/// tropical tori: degree `(2 0; 0 3)` on `S = (12 2; 3 8)` and degree
/// `(2 1; 0 1)` on `S = (8 −2; −4 6)`.
pub mod fixtures {
    use super::*;

    fn edge(u: usize, v: usize, l: i64) -> CurveEdge {
        CurveEdge { u, v, length: rat(l) }
    }

    /// Eight trivalent vertices, twelve edges, genus 5, degree `(2 0; 0 3)`.
    pub fn genus_five() -> ParamCurve {
        let torus = TropicalTorus::from_int(Mat2::new([[12, 2], [3, 8]])).expect("oriented");
        type Row = (usize, usize, [i64; 2], i64, Option<[i64; 2]>);
        // (u, v, slope, length, winding)
        let data: [Row; 12] = [
            (0, 1, [1, 1], 1, None),
            (1, 4, [0, 1], 2, None),
            (1, 2, [1, 0], 2, None),
            (2, 3, [1, 1], 2, None),
            (4, 5, [1, 1], 1, None),
            (5, 6, [1, 0], 4, None),
            (6, 7, [1, 1], 2, None),
            (3, 0, [1, 0], 7, Some([1, 0])),
            (7, 4, [1, 0], 5, Some([1, 0])),
            (5, 0, [0, 1], 4, Some([0, 1])),
            (3, 2, [0, 1], 6, Some([0, 1])),
            (7, 6, [0, 1], 6, Some([0, 1])),
        ];
        ParamCurve {
            curve: AbstractCurve {
                vertex_count: 8,
                edges: data.iter().map(|&(u, v, _, l, _)| edge(u, v, l)).collect(),
                legs: vec![],
            },
            torus: Arc::new(torus),
            base_vertex: 0,
            base_position: [rat(3), rat(2)],
            slopes: data.iter().map(|d| d.2).collect(),
            windings: data.iter().map(|d| d.4).collect(),
        }
    }

    /// Theta graph with one weight-2 edge, genus 2, degree `(2 1; 0 1)`.
    pub fn weighted_theta() -> ParamCurve {
        let torus = TropicalTorus::from_int(Mat2::new([[8, -2], [-4, 6]])).expect("oriented");
        ParamCurve {
            curve: AbstractCurve {
                vertex_count: 2,
                edges: vec![edge(0, 1, 4), edge(1, 0, 2), edge(0, 1, 2)],
                legs: vec![],
            },
            torus: Arc::new(torus),
            base_vertex: 0,
            base_position: [rat(4), rat(6)],
            slopes: vec![[1, -1], [2, 0], [1, 1]],
            windings: vec![None, Some([1, 0]), Some([0, 1])],
        }
    }

    /// Theta graph with slopes `(1,0), (0,1), (−1,−1)` out of one vertex on
    /// the unit torus, unit lengths; degree `(2 1; 1 2)`.
    pub fn unit_theta() -> ParamCurve {
        let torus = TropicalTorus::from_int(IMat2::identity()).expect("oriented");
        ParamCurve {
            curve: AbstractCurve {
                vertex_count: 2,
                edges: vec![edge(0, 1, 1), edge(0, 1, 1), edge(0, 1, 1)],
                legs: vec![],
            },
            torus: Arc::new(torus),
            base_vertex: 0,
            base_position: [rat(0), rat(0)],
            slopes: vec![[1, 0], [0, 1], [-1, -1]],
            windings: vec![Some([2, 1]), Some([1, 2]), None],
        }
    }

    /// A genus-2 theta curve with both marked points on its edges: the
    /// unit theta above with its first two edges subdivided at their
    /// midpoints by the legs of markers 0 and 1.
    pub fn marked_unit_theta() -> ParamCurve {
        let torus = TropicalTorus::from_int(IMat2::identity()).expect("oriented");
        let half = ratio(1, 2);
        let e = |u, v, l: Rat| CurveEdge { u, v, length: l };
        ParamCurve {
            curve: AbstractCurve {
                vertex_count: 4,
                edges: vec![
                    e(0, 2, half.clone()),
                    e(2, 1, half.clone()),
                    e(0, 3, half.clone()),
                    e(3, 1, half),
                    e(0, 1, rat(1)),
                ],
                legs: vec![Leg { vertex: 2, marker: 0 }, Leg { vertex: 3, marker: 1 }],
            },
            torus: Arc::new(torus),
            base_vertex: 0,
            base_position: [rat(0), rat(0)],
            slopes: vec![[1, 0], [1, 0], [0, 1], [0, 1], [-1, -1]],
            windings: vec![None, Some([2, 1]), None, Some([1, 2]), None],
        }
    }
}
