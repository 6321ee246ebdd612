//! Boundary curves and the exact distance to an intersection.
//!
//! The boundary of any region tree lies on the union of its primitives'
//! boundary curves (segments, lines, circles). For a point outside a closed
//! intersection, the nearest point lies on that boundary, and on each curve
//! the distance restricted to a sub-arc is minimized either at the curve's own
//! nearest point or at an arc end. Arc ends are curve endpoints or crossings
//! with other curves. So the minimum over these candidates that belong to the
//! region is the distance.

use num_complex::Complex64;

use super::{Disc, Region};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub(crate) enum Curve {
    /// `p + t·dir` for `t ∈ [t0, t1]`, `dir` unit; bounds may be infinite.
    Segment {
        p: Complex64,
        dir: Complex64,
        t0: f64,
        t1: f64,
    },
    Circle { center: Complex64, radius: f64 },
}

impl Curve {
    fn line(p: Complex64, dir: Complex64) -> Self {
        Curve::Segment {
            p,
            dir: dir / dir.norm(),
            t0: f64::NEG_INFINITY,
            t1: f64::INFINITY,
        }
    }

    fn segment(a: Complex64, b: Complex64) -> Self {
        let len = (b - a).norm();
        let dir = if len > 0.0 { (b - a) / len } else { Complex64::new(1.0, 0.0) };
        Curve::Segment {
            p: a,
            dir,
            t0: 0.0,
            t1: len,
        }
    }

    fn circle(center: Complex64, radius: f64) -> Self {
        if radius > 0.0 {
            Curve::Circle { center, radius }
        } else {
            Curve::segment(center, center)
        }
    }

    fn nearest(&self, z: Complex64) -> Complex64 {
        match *self {
            Curve::Segment { p, dir, t0, t1 } => {
                let t = dot(z - p, dir).clamp(t0, t1);
                p + dir * t
            }
            Curve::Circle { center, radius } => {
                let v = z - center;
                let n = v.norm();
                if n > 0.0 {
                    center + v * (radius / n)
                } else {
                    center + radius
                }
            }
        }
    }

    fn endpoints(&self, out: &mut Vec<Complex64>) {
        if let Curve::Segment { p, dir, t0, t1 } = *self {
            for t in [t0, t1] {
                if t.is_finite() {
                    out.push(p + dir * t);
                }
            }
        }
    }
}

fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Distance from `z` to the double sector `|Im| ≤ slope·|Re|` for `z` outside.
pub(crate) fn sector_distance(slope: f64, z: Complex64) -> f64 {
    let n = (1.0 + slope * slope).sqrt();
    let a = (slope * z.re - z.im).abs() / n;
    let b = (slope * z.re + z.im).abs() / n;
    a.min(b)
}

pub(crate) fn curves(region: &Region, out: &mut Vec<Curve>) {
    let c = Complex64::new;
    match region {
        Region::Empty | Region::Full => {}
        Region::Disc(d) => out.push(Curve::circle(d.center, d.radius)),
        Region::RealInterval { lo, hi } => out.push(Curve::segment(c(*lo, 0.0), c(*hi, 0.0))),
        Region::Stadium { lo, hi, radius } => {
            out.push(Curve::segment(c(*lo, *radius), c(*hi, *radius)));
            out.push(Curve::segment(c(*lo, -radius), c(*hi, -radius)));
            out.push(Curve::circle(c(*lo, 0.0), *radius));
            out.push(Curve::circle(c(*hi, 0.0), *radius));
        }
        Region::VerticalStrip { xmin, xmax } => {
            for x in [*xmin, *xmax] {
                if x.is_finite() {
                    out.push(Curve::line(c(x, 0.0), c(0.0, 1.0)));
                }
            }
        }
        Region::HorizontalBand { half_width } => {
            out.push(Curve::line(c(0.0, *half_width), c(1.0, 0.0)));
            out.push(Curve::line(c(0.0, -half_width), c(1.0, 0.0)));
        }
        Region::HalfPlane { x0, .. } => out.push(Curve::line(c(*x0, 0.0), c(0.0, 1.0))),
        Region::DoubleSector { slope } => {
            out.push(Curve::line(c(0.0, 0.0), c(1.0, *slope)));
            out.push(Curve::line(c(0.0, 0.0), c(1.0, -slope)));
        }
        Region::ConeBallUnion {
            lo,
            hi,
            center_scale: mu,
            radius_scale: rho,
        } => {
            out.push(Curve::circle(c(mu * lo, 0.0), rho * lo));
            out.push(Curve::circle(c(mu * hi, 0.0), rho * hi));
            if mu > rho {
                // common tangents through the origin, touching each disc at
                // distance μa·cosθ with sinθ = ρ/μ
                let sin = rho / mu;
                let cos = (1.0 - sin * sin).sqrt();
                for s in [sin, -sin] {
                    let dir = c(cos, s);
                    out.push(Curve::segment(dir * (mu * lo * cos), dir * (mu * hi * cos)));
                }
            }
        }
        Region::FiniteBallUnion { discs } => {
            out.extend(discs.iter().map(|d: &Disc| Curve::circle(d.center, d.radius)))
        }
        Region::Union { children } | Region::Intersection { children } => {
            children.iter().for_each(|ch| curves(ch, out))
        }
    }
}

fn crossings(a: &Curve, b: &Curve, eps: f64, out: &mut Vec<Complex64>) {
    match (*a, *b) {
        (
            Curve::Segment {
                p: p1,
                dir: d1,
                t0: a0,
                t1: a1,
            },
            Curve::Segment {
                p: p2,
                dir: d2,
                t0: b0,
                t1: b1,
            },
        ) => {
            let den = cross(d1, d2);
            if den.abs() < 1e-14 {
                return;
            }
            let w = p2 - p1;
            let t = cross(w, d2) / den;
            let s = cross(w, d1) / den;
            if t >= a0 - eps && t <= a1 + eps && s >= b0 - eps && s <= b1 + eps {
                out.push(p1 + d1 * t);
            }
        }
        (Curve::Segment { p, dir, t0, t1 }, Curve::Circle { center, radius })
        | (Curve::Circle { center, radius }, Curve::Segment { p, dir, t0, t1 }) => {
            let w = p - center;
            let b = dot(dir, w);
            let cc = w.norm_sqr() - radius * radius;
            let disc = b * b - cc;
            let scale = radius * radius + w.norm_sqr();
            if disc < -eps * scale {
                return;
            }
            let r = disc.max(0.0).sqrt();
            for t in [-b - r, -b + r] {
                if t >= t0 - eps && t <= t1 + eps {
                    out.push(p + dir * t);
                }
            }
        }
        (
            Curve::Circle {
                center: c1,
                radius: r1,
            },
            Curve::Circle {
                center: c2,
                radius: r2,
            },
        ) => {
            let v = c2 - c1;
            let d = v.norm();
            if d == 0.0 {
                return;
            }
            let slack = eps * (1.0 + r1 + r2);
            if d > r1 + r2 + slack || d < (r1 - r2).abs() - slack {
                return;
            }
            let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
            let h = (r1 * r1 - a * a).max(0.0).sqrt();
            let u = v / d;
            let base = c1 + u * a;
            let perp = Complex64::new(-u.im, u.re);
            out.push(base + perp * h);
            out.push(base - perp * h);
        }
    }
}

/// Distance from `z` (outside) to a closed intersection region.
pub(crate) fn intersection_distance(region: &Region, z: Complex64) -> Result<f64> {
    let mut cs = Vec::new();
    curves(region, &mut cs);
    let mut cands = Vec::new();
    for (i, a) in cs.iter().enumerate() {
        cands.push(a.nearest(z));
        a.endpoints(&mut cands);
        for b in &cs[i + 1..] {
            crossings(a, b, 1e-12, &mut cands);
        }
    }
    let mut best: Option<f64> = None;
    for p in cands {
        if !(p.re.is_finite() && p.im.is_finite()) {
            continue;
        }
        let tol = 1e-9 * (1.0 + p.norm());
        if region.contains_within(p, tol) {
            let d = (p - z).norm();
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best.ok_or(Error::EmptyRegion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::Side;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn segment_circle_crossings() {
        let mut out = vec![];
        crossings(
            &Curve::line(c(0.0, 0.5), c(1.0, 0.0)),
            &Curve::circle(c(0.0, 0.0), 1.0),
            1e-12,
            &mut out,
        );
        assert_eq!(out.len(), 2);
        for p in out {
            assert!((p.norm() - 1.0).abs() < 1e-15 && (p.im - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn tangent_circles_meet_once() {
        let mut out = vec![];
        crossings(
            &Curve::circle(c(0.0, 0.0), 1.0),
            &Curve::circle(c(2.0, 0.0), 1.0),
            1e-12,
            &mut out,
        );
        assert!(out.iter().all(|p| (p - c(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn cone_tangent_segments_touch_both_end_discs() {
        let mut cs = vec![];
        curves(&Region::cone_ball_union(1.0, 2.0, 1.0, 0.5), &mut cs);
        let mut ends = vec![];
        for cv in &cs[2..] {
            cv.endpoints(&mut ends);
        }
        for p in ends {
            let on_lo = ((p - 1.0).norm() - 0.5).abs() < 1e-12;
            let on_hi = ((p - 2.0).norm() - 1.0).abs() < 1e-12;
            assert!(on_lo || on_hi);
        }
    }

    #[test]
    fn strip_and_half_plane_corner() {
        let r = Region::intersection(vec![
            Region::half_plane(1.0, Side::Right),
            Region::band(1.0),
        ]);
        let d = r.distance(c(0.0, 3.0)).unwrap();
        assert!((d - 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn stadium_lens_strip_distance() {
        let r = Region::intersection(vec![
            Region::stadium(1.0, 2.0, 2.0 / 3.0),
            Region::stadium(1.0, 1.0, 2.0 / 3.0),
            Region::strip(1.0, 1.5),
        ]);
        // nearest point on the arc, inside the strip
        let z = c(3.0, 2.0);
        assert!((r.distance(z).unwrap() - (8f64.sqrt() - 2.0 / 3.0)).abs() < 1e-12);
        // nearest point is the strip corner at (1.5, sqrt(4/9 - 1/4))
        let corner = c(1.5, (4.0f64 / 9.0 - 0.25).sqrt());
        let z = c(3.0, 0.5);
        assert!((r.distance(z).unwrap() - (z - corner).norm()).abs() < 1e-12);
    }
}
