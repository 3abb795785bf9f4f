//! Combinatorial types: trivalent connected multigraphs of genus `g` with
//! `g` labeled legs, each leg subdividing an edge.

use std::collections::BTreeSet;

use crate::curve::Leg;
use crate::error::{Error, Result};

/// A graph with vertices `0..vertex_count`, edges `(u, v)` with `u ≤ v`
/// (loops allowed), and marker `i` on vertex `i` for `i < legs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombType {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub legs: usize,
}

impl CombType {
    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.vertex_count as i64 + 1
    }

    pub fn leg_list(&self) -> Vec<Leg> {
        (0..self.legs).map(|i| Leg { vertex: i, marker: i }).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }
}

fn normalize(edges: &[(usize, usize)], perm: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<_> = edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    out.sort();
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Lexicographically least edge list over relabelings of the vertices
/// `fixed..n`; vertices below `fixed` keep their labels.
pub fn canonical_form(n: usize, fixed: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let free: Vec<usize> = (fixed..n).collect();
    permutations(&free)
        .into_iter()
        .map(|p| {
            let perm: Vec<usize> = (0..fixed).chain(p).collect();
            normalize(edges, &perm)
        })
        .min()
        .unwrap_or_default()
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn complete(n: usize, deg: &mut [usize], edges: &mut Vec<(usize, usize)>, out: &mut BTreeSet<Vec<(usize, usize)>>) {
    let Some(i) = (0..n).find(|&i| deg[i] < 3) else {
        if connected(n, edges) {
            out.insert(canonical_form(n, 0, edges));
        }
        return;
    };
    // keep edges non-decreasing to avoid generating every ordering
    let last = edges.last().copied().unwrap_or((0, 0));
    for j in i..n {
        let fits = if i == j {
            deg[i] + 2 <= 3
        } else {
            deg[i] < 3 && deg[j] < 3
        };
        if !fits || (i, j) < last {
            continue;
        }
        edges.push((i, j));
        deg[i] += 1;
        deg[j] += 1;
        complete(n, deg, edges, out);
        edges.pop();
        deg[i] -= 1;
        deg[j] -= 1;
    }
}

/// Trivalent connected multigraphs of genus `g ≥ 2` up to isomorphism.
pub fn base_graphs(g: usize) -> Result<Vec<CombType>> {
    if !(2..=3).contains(&g) {
        return Err(Error::UnsupportedGenus(g));
    }
    let n = 2 * g - 2;
    let mut out = BTreeSet::new();
    complete(n, &mut vec![0; n], &mut Vec::new(), &mut out);
    Ok(out
        .into_iter()
        .map(|edges| CombType {
            vertex_count: n,
            edges,
            legs: 0,
        })
        .collect())
}

/// Subdivide edges of `base` by legs: `placement[i]` is the ordered list of
/// markers on edge `i`, read from its first endpoint. Leg vertices get
/// labels `0..legs`, the base vertices are shifted up.
fn subdivide(base: &CombType, placement: &[Vec<usize>], legs: usize) -> CombType {
    let shift = legs;
    let mut edges = Vec::new();
    for (i, &(a, b)) in base.edges.iter().enumerate() {
        let mut prev = a + shift;
        for &m in &placement[i] {
            edges.push((prev.min(m), prev.max(m)));
            prev = m;
        }
        let end = b + shift;
        edges.push((prev.min(end), prev.max(end)));
    }
    let n = base.vertex_count + legs;
    CombType {
        vertex_count: n,
        edges: canonical_form(n, legs, &edges),
        legs,
    }
}

fn placements(edge_count: usize, legs: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![vec![Vec::new(); edge_count]];
    for m in 0..legs {
        let mut next = Vec::new();
        for p in &out {
            for e in 0..edge_count {
                for pos in 0..=p[e].len() {
                    let mut q = p.clone();
                    q[e].insert(pos, m);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

/// All genus-`g` trivalent types with `g` labeled legs in edge interiors.
/// Genus 1 has the single type of a loop through the leg vertex.
pub fn generate_comb_types(g: usize) -> Result<Vec<CombType>> {
    match g {
        1 => Ok(vec![CombType {
            vertex_count: 1,
            edges: vec![(0, 0)],
            legs: 1,
        }]),
        2 | 3 => {
            let mut out = BTreeSet::new();
            for base in base_graphs(g)? {
                for p in placements(base.edges.len(), g) {
                    out.insert(subdivide(&base, &p, g));
                }
            }
            Ok(out.into_iter().collect())
        }
        _ => Err(Error::UnsupportedGenus(g)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_trivalent(t: &CombType) -> bool {
        (0..t.vertex_count).all(|v| t.valence(v) == if v < t.legs { 2 } else { 3 })
    }

    #[test]
    fn genus_two_bases_are_theta_and_dumbbell() {
        let b = base_graphs(2).unwrap();
        let edges: Vec<_> = b.iter().map(|t| t.edges.clone()).collect();
        assert_eq!(edges, vec![vec![(0, 0), (0, 1), (1, 1)], vec![(0, 1), (0, 1), (0, 1)]]);
    }

    #[test]
    fn genus_three_has_five_bases() {
        let b = base_graphs(3).unwrap();
        assert_eq!(b.len(), 5);
        assert!(b.iter().all(|t| t.genus() == 3 && is_trivalent(t)));
    }

    #[test]
    fn genus_one_type() {
        let t = generate_comb_types(1).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].edges.len(), 1);
        assert_eq!(t[0].leg_list(), vec![Leg { vertex: 0, marker: 0 }]);
    }

    /// Independent count by brute force: all labelings of `n` vertices with
    /// `legs` fixed, deduplicated by comparing every relabeling directly.
    fn brute_count(types: &[CombType]) -> usize {
        let mut reps: Vec<CombType> = Vec::new();
        for t in types {
            let free: Vec<usize> = (t.legs..t.vertex_count).collect();
            let iso = reps.iter().any(|r| {
                r.vertex_count == t.vertex_count
                    && permutations(&free).into_iter().any(|p| {
                        let perm: Vec<usize> = (0..t.legs).chain(p).collect();
                        normalize(&t.edges, &perm) == r.edges
                    })
            });
            if !iso {
                reps.push(t.clone());
            }
        }
        reps.len()
    }

    #[test]
    fn genus_two_with_legs() {
        let types = generate_comb_types(2).unwrap();
        for t in &types {
            assert_eq!(t.edges.len(), 5);
            assert_eq!(t.genus(), 2);
            assert!(is_trivalent(t));
        }
        assert_eq!(brute_count(&types), types.len());
        // theta: both legs on one edge (two orders coincide under the swap
        // of the trivalent vertices) or on two different edges
        // dumbbell: legs on loops or the bridge in every arrangement
        let thetas = types
            .iter()
            .filter(|t| !t.edges.iter().any(|&(a, b)| a == b) && is_bridgeless(t))
            .count();
        assert_eq!(thetas, 2);
    }

    fn is_bridgeless(t: &CombType) -> bool {
        (0..t.edges.len()).all(|i| {
            let rest: Vec<_> = t
                .edges
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, e)| *e)
                .collect();
            connected(t.vertex_count, &rest)
        })
    }

    #[test]
    fn genus_three_types_have_4g_minus_3_edges() {
        let types = generate_comb_types(3).unwrap();
        assert!(!types.is_empty());
        for t in &types {
            assert_eq!(t.edges.len(), 9);
            assert!(is_trivalent(t));
        }
    }

    #[test]
    fn unsupported_genus() {
        assert_eq!(generate_comb_types(4), Err(Error::UnsupportedGenus(4)));
        assert_eq!(generate_comb_types(0), Err(Error::UnsupportedGenus(0)));
    }
}
