//! Fundamental-domain drawings of curves in a tropical torus.
//!
//! Edges are cut where they cross a wall of the parallelogram
//! `[0,1)·s₁ + [0,1)·s₂` and each piece is translated back into it. Cuts are
//! exact; coordinates are printed as fixed-point decimals.

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::algebra::{floor_i64, rat};
use crate::curve::{lattice_length, ParamCurve};
use crate::error::Result;
use crate::matrix::Vec2;
use crate::torus::reduce_point;
use crate::Rat;

const DIGITS: u32 = 4;

/// `r` rounded half away from zero to four decimals.
pub fn decimal(r: &Rat) -> String {
    let scale = BigInt::from(10u32.pow(DIGITS));
    let num: BigInt = r.numer() * &scale * 2 + r.denom() * r.numer().signum();
    let (q, _) = num.div_rem(&(r.denom() * 2));
    let (int, frac) = q.abs().div_rem(&scale);
    let sign = if q.is_negative() { "-" } else { "" };
    let frac = format!("{:0>width$}", frac.to_string(), width = DIGITS as usize);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn add(a: &Vec2<Rat>, b: &Vec2<Rat>) -> Vec2<Rat> {
    [&a[0] + &b[0], &a[1] + &b[1]]
}

fn lerp(a: &Vec2<Rat>, d: &Vec2<Rat>, t: &Rat) -> Vec2<Rat> {
    [&a[0] + &d[0] * t, &a[1] + &d[1] * t]
}

/// Parameters in `(0, 1)` where `a + t·d` has an integral coordinate.
fn wall_crossings(a: &Vec2<Rat>, d: &Vec2<Rat>) -> Vec<Rat> {
    let mut ts = Vec::new();
    for j in 0..2 {
        if d[j].is_zero() {
            continue;
        }
        let end = &a[j] + &d[j];
        let (lo, hi) = if d[j].is_positive() {
            (&a[j], &end)
        } else {
            (&end, &a[j])
        };
        let mut k = floor_i64(lo) + 1;
        while rat(k) < *hi {
            ts.push((rat(k) - &a[j]) / &d[j]);
            k += 1;
        }
    }
    ts.sort();
    ts.dedup();
    ts
}

/// Pieces of the segment from `p` with displacement `d`, translated into
/// the fundamental parallelogram.
pub fn clip_segment(pc: &ParamCurve, p: &Vec2<Rat>, d: &Vec2<Rat>) -> Vec<(Vec2<Rat>, Vec2<Rat>)> {
    let t = &pc.torus;
    let a = t.lattice_coords(p);
    let da = t.lattice_coords(d);
    let mut cuts = vec![Rat::zero()];
    cuts.extend(wall_crossings(&a, &da));
    cuts.push(rat(1));
    cuts.windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) / rat(2);
            let shift = t.lattice_coords(&lerp(p, d, &mid)).map(|x| floor_i64(&x));
            let back = t.lattice_vector(&shift).map(|x| -x);
            (add(&lerp(p, d, &w[0]), &back), add(&lerp(p, d, &w[1]), &back))
        })
        .collect()
}

/// An SVG document whose view box is the bounding box of the fundamental
/// parallelogram, with the `y` axis pointing up.
pub fn render_curve(pc: &ParamCurve) -> Result<String> {
    let pos = pc.positions()?;
    let s = pc.torus.s();
    let s1 = s.column(0);
    let s2 = s.column(1);
    let corners = [[rat(0), rat(0)], s1.clone(), add(&s1, &s2), s2.clone()];
    let xs: Vec<&Rat> = corners.iter().map(|c| &c[0]).collect();
    let ys: Vec<&Rat> = corners.iter().map(|c| &c[1]).collect();
    let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
    let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        decimal(x0),
        decimal(y0),
        decimal(&(x1 - x0)),
        decimal(&(y1 - y0))
    )
    .unwrap();
    writeln!(out, r#"<g transform="matrix(1 0 0 -1 0 {})">"#, decimal(&(y0 + y1))).unwrap();
    let poly: Vec<String> = corners
        .iter()
        .map(|c| format!("{},{}", decimal(&c[0]), decimal(&c[1])))
        .collect();
    writeln!(
        out,
        r#"<polygon points="{}" fill="none" stroke="gray" stroke-width="1" vector-effect="non-scaling-stroke"/>"#,
        poly.join(" ")
    )
    .unwrap();
    for (e, edge) in pc.curve.edges.iter().enumerate() {
        let w = lattice_length(&pc.slopes[e]);
        for (a, b) in clip_segment(pc, &pos[edge.u], &pc.displacement(e)) {
            writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="{}" vector-effect="non-scaling-stroke"/>"#,
                decimal(&a[0]),
                decimal(&a[1]),
                decimal(&b[0]),
                decimal(&b[1]),
                w + 1
            )
            .unwrap();
        }
    }
    for leg in &pc.curve.legs {
        let p = reduce_point(&pc.torus, &pos[leg.vertex]).coords;
        let r = (x1 - x0).max(y1 - y0) / rat(80);
        writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="red"/>"#,
            decimal(&p[0]),
            decimal(&p[1]),
            decimal(&r)
        )
        .unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::fixtures;
    use crate::ratio;

    #[test]
    fn decimals() {
        assert_eq!(decimal(&ratio(1, 3)), "0.3333");
        assert_eq!(decimal(&ratio(-2, 3)), "-0.6667");
        assert_eq!(decimal(&ratio(5, 1)), "5");
        assert_eq!(decimal(&ratio(1, 2)), "0.5");
        assert_eq!(decimal(&ratio(-1, 20000)), "-0.0001");
    }

    #[test]
    fn clipped_pieces_stay_inside_and_cover_the_edge() {
        let pc = fixtures::genus_five();
        let pos = pc.positions().unwrap();
        for (e, edge) in pc.curve.edges.iter().enumerate() {
            let d = pc.displacement(e);
            let pieces = clip_segment(&pc, &pos[edge.u], &d);
            let mut total = [rat(0), rat(0)];
            for (a, b) in &pieces {
                for p in [a, b] {
                    let c = pc.torus.lattice_coords(p);
                    assert!(c.iter().all(|x| *x >= rat(0) && *x <= rat(1)), "{c:?}");
                }
                total = add(&total, &[&b[0] - &a[0], &b[1] - &a[1]]);
            }
            assert_eq!(total, d);
        }
    }

    #[test]
    fn renders_one_line_per_piece() {
        let pc = fixtures::weighted_theta();
        let svg = render_curve(&pc).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("viewBox=\""));
        assert_eq!(svg.matches("<circle").count(), pc.curve.legs.len());
        assert!(svg.matches("<line").count() >= pc.edge_count());
    }
}
