//! Closed-form regions of the complex plane.
//!
//! A [`Region`] is a tree of primitives joined by unions and intersections.
//! Membership is decided exactly by structural recursion; distances are exact
//! for every primitive and for unions, and computed for intersections by a
//! candidate search over the boundary curves (see [`geometry`]). Boundary
//! loops for plotting come from [`contour`].

pub mod contour;
pub mod geometry;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned rectangle; infinite bounds are allowed for extents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Rect {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        Self {
            xmin,
            xmax,
            ymin,
            ymax,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.xmin && z.re <= self.xmax && z.im >= self.ymin && z.im <= self.ymax
    }

    pub fn is_finite(&self) -> bool {
        [self.xmin, self.xmax, self.ymin, self.ymax]
            .iter()
            .all(|v| v.is_finite())
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn hull(&self, other: &Rect) -> Rect {
        Rect::new(
            self.xmin.min(other.xmin),
            self.xmax.max(other.xmax),
            self.ymin.min(other.ymin),
            self.ymax.max(other.ymax),
        )
    }

    pub fn meet(&self, other: &Rect) -> Option<Rect> {
        let r = Rect::new(
            self.xmin.max(other.xmin),
            self.xmax.min(other.xmax),
            self.ymin.max(other.ymin),
            self.ymax.min(other.ymax),
        );
        (r.xmin <= r.xmax && r.ymin <= r.ymax).then_some(r)
    }

    /// Grows each side by `frac` of the larger dimension, at least `floor`.
    pub fn padded(&self, frac: f64, floor: f64) -> Rect {
        let pad = (frac * self.width().max(self.height())).max(floor);
        Rect::new(self.xmin - pad, self.xmax + pad, self.ymin - pad, self.ymax + pad)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `Re z ≥ x0`
    Right,
    /// `Re z ≤ x0`
    Left,
}

/// `{z : |z - center| ≤ radius}`, or strict when `open`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Complex64,
    pub radius: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub open: bool,
}

impl Disc {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Self {
            center,
            radius,
            open: false,
        }
    }

    fn contains_within(&self, z: Complex64, tol: f64) -> bool {
        let d = (z - self.center).norm();
        if self.open {
            d < self.radius + tol
        } else {
            d <= self.radius + tol
        }
    }

    fn distance(&self, z: Complex64) -> f64 {
        ((z - self.center).norm() - self.radius).max(0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Empty,
    Full,
    Disc(Disc),
    /// Segment `[lo, hi]` of the real axis.
    RealInterval { lo: f64, hi: f64 },
    /// Closed `radius`-neighbourhood of the real segment `[lo, hi]`.
    Stadium { lo: f64, hi: f64, radius: f64 },
    VerticalStrip { xmin: f64, xmax: f64 },
    /// `|Im z| ≤ half_width`
    HorizontalBand { half_width: f64 },
    HalfPlane { x0: f64, side: Side },
    /// `|Im z| ≤ slope · |Re z|`
    DoubleSector { slope: f64 },
    /// Union of the discs `B_{ρa}(μa)` over `a ∈ [lo, hi]`, `0 ≤ lo`.
    ConeBallUnion {
        lo: f64,
        hi: f64,
        center_scale: f64,
        radius_scale: f64,
    },
    FiniteBallUnion { discs: Vec<Disc> },
    Union { children: Vec<Region> },
    Intersection { children: Vec<Region> },
}

impl Region {
    pub fn disc(center: Complex64, radius: f64) -> Self {
        Region::Disc(Disc::new(center, radius))
    }

    pub fn open_disc(center: Complex64, radius: f64) -> Self {
        Region::Disc(Disc {
            center,
            radius,
            open: true,
        })
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Region::RealInterval { lo, hi }
    }

    pub fn stadium(lo: f64, hi: f64, radius: f64) -> Self {
        Region::Stadium { lo, hi, radius }
    }

    pub fn strip(xmin: f64, xmax: f64) -> Self {
        Region::VerticalStrip { xmin, xmax }
    }

    pub fn band(half_width: f64) -> Self {
        Region::HorizontalBand { half_width }
    }

    pub fn half_plane(x0: f64, side: Side) -> Self {
        Region::HalfPlane { x0, side }
    }

    pub fn sector(slope: f64) -> Self {
        Region::DoubleSector { slope }
    }

    pub fn cone_ball_union(lo: f64, hi: f64, center_scale: f64, radius_scale: f64) -> Self {
        Region::ConeBallUnion {
            lo,
            hi,
            center_scale,
            radius_scale,
        }
    }

    pub fn ball_union(discs: Vec<Disc>) -> Self {
        Region::FiniteBallUnion { discs }
    }

    /// Union; collapses the zero- and one-child cases.
    pub fn union(mut children: Vec<Region>) -> Self {
        match children.len() {
            0 => Region::Empty,
            1 => children.pop().unwrap(),
            _ => Region::Union { children },
        }
    }

    /// Intersection; collapses the zero- and one-child cases.
    pub fn intersection(mut children: Vec<Region>) -> Self {
        match children.len() {
            0 => Region::Full,
            1 => children.pop().unwrap(),
            _ => Region::Intersection { children },
        }
    }

    /// Checks the structural invariants: finite parameters, nonnegative radii,
    /// ordered intervals.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidRegion(msg));
        let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        match self {
            Region::Empty | Region::Full => Ok(()),
            Region::Disc(d) => check_disc(d),
            Region::RealInterval { lo, hi } => {
                if !finite(&[*lo, *hi]) || lo > hi {
                    return bad(format!("real interval [{lo}, {hi}]"));
                }
                Ok(())
            }
            Region::Stadium { lo, hi, radius } => {
                if !finite(&[*lo, *hi, *radius]) || lo > hi || *radius < 0.0 {
                    return bad(format!("stadium [{lo}, {hi}] radius {radius}"));
                }
                Ok(())
            }
            Region::VerticalStrip { xmin, xmax } => {
                if xmin.is_nan() || xmax.is_nan() || xmin > xmax {
                    return bad(format!("vertical strip [{xmin}, {xmax}]"));
                }
                Ok(())
            }
            Region::HorizontalBand { half_width } => {
                if !(half_width.is_finite() && *half_width >= 0.0) {
                    return bad(format!("band half width {half_width}"));
                }
                Ok(())
            }
            Region::HalfPlane { x0, .. } => {
                if !x0.is_finite() {
                    return bad(format!("half plane at {x0}"));
                }
                Ok(())
            }
            Region::DoubleSector { slope } => {
                if !(slope.is_finite() && *slope >= 0.0) {
                    return bad(format!("sector slope {slope}"));
                }
                Ok(())
            }
            Region::ConeBallUnion {
                lo,
                hi,
                center_scale,
                radius_scale,
            } => {
                if !finite(&[*lo, *hi, *center_scale, *radius_scale])
                    || *lo < 0.0
                    || lo > hi
                    || *center_scale <= 0.0
                    || *radius_scale < 0.0
                {
                    return bad(format!(
                        "cone ball union over [{lo}, {hi}] with scales {center_scale}, {radius_scale}"
                    ));
                }
                Ok(())
            }
            Region::FiniteBallUnion { discs } => discs.iter().try_for_each(check_disc),
            Region::Union { children } | Region::Intersection { children } => {
                children.iter().try_for_each(Region::validate)
            }
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.contains_within(z, 0.0)
    }

    /// Membership with every defining inequality relaxed by `tol` (distances
    /// inflated by `tol`). `tol = 0` is exact membership.
    pub fn contains_within(&self, z: Complex64, tol: f64) -> bool {
        let (x, y) = (z.re, z.im);
        match self {
            Region::Empty => false,
            Region::Full => true,
            Region::Disc(d) => d.contains_within(z, tol),
            Region::RealInterval { lo, hi } => {
                y.abs() <= tol && (x - x.clamp(*lo, *hi)).hypot(y) <= tol
            }
            Region::Stadium { lo, hi, radius } => {
                (x - x.clamp(*lo, *hi)).hypot(y) <= radius + tol
            }
            Region::VerticalStrip { xmin, xmax } => x >= xmin - tol && x <= xmax + tol,
            Region::HorizontalBand { half_width } => y.abs() <= half_width + tol,
            Region::HalfPlane { x0, side } => match side {
                Side::Right => x >= x0 - tol,
                Side::Left => x <= x0 + tol,
            },
            Region::DoubleSector { slope } => {
                y.abs() <= slope * x.abs() || geometry::sector_distance(*slope, z) <= tol
            }
            Region::ConeBallUnion {
                lo,
                hi,
                center_scale,
                radius_scale,
            } => cone_contains(*lo, *hi, *center_scale, *radius_scale, z, tol),
            Region::FiniteBallUnion { discs } => discs.iter().any(|d| d.contains_within(z, tol)),
            Region::Union { children } => children.iter().any(|c| c.contains_within(z, tol)),
            Region::Intersection { children } => {
                children.iter().all(|c| c.contains_within(z, tol))
            }
        }
    }

    /// Euclidean distance from `z` to the region; `0` inside.
    pub fn distance(&self, z: Complex64) -> Result<f64> {
        let (x, y) = (z.re, z.im);
        Ok(match self {
            Region::Empty => return Err(Error::EmptyRegion),
            Region::Full => 0.0,
            Region::Disc(d) => d.distance(z),
            Region::RealInterval { lo, hi } => (x - x.clamp(*lo, *hi)).hypot(y),
            Region::Stadium { lo, hi, radius } => {
                ((x - x.clamp(*lo, *hi)).hypot(y) - radius).max(0.0)
            }
            Region::VerticalStrip { xmin, xmax } => (xmin - x).max(x - xmax).max(0.0),
            Region::HorizontalBand { half_width } => (y.abs() - half_width).max(0.0),
            Region::HalfPlane { x0, side } => match side {
                Side::Right => (x0 - x).max(0.0),
                Side::Left => (x - x0).max(0.0),
            },
            Region::DoubleSector { slope } => {
                if y.abs() <= slope * x.abs() {
                    0.0
                } else {
                    geometry::sector_distance(*slope, z)
                }
            }
            Region::ConeBallUnion {
                lo,
                hi,
                center_scale,
                radius_scale,
            } => cone_distance(*lo, *hi, *center_scale, *radius_scale, z),
            Region::FiniteBallUnion { discs } => discs
                .iter()
                .map(|d| d.distance(z))
                .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d))))
                .ok_or(Error::EmptyRegion)?,
            Region::Union { children } => {
                let mut best: Option<f64> = None;
                for c in children {
                    match c.distance(z) {
                        Ok(d) => best = Some(best.map_or(d, |b| b.min(d))),
                        Err(Error::EmptyRegion) => {}
                        Err(e) => return Err(e),
                    }
                }
                best.ok_or(Error::EmptyRegion)?
            }
            Region::Intersection { .. } => {
                if self.contains(z) {
                    0.0
                } else {
                    geometry::intersection_distance(self, z)?
                }
            }
        })
    }

    /// Bounding rectangle (possibly with infinite sides); `None` when the
    /// region is recognisably empty.
    pub fn extent(&self) -> Option<Rect> {
        let inf = f64::INFINITY;
        match self {
            Region::Empty => None,
            Region::Full => Some(Rect::new(-inf, inf, -inf, inf)),
            Region::Disc(d) => Some(disc_rect(d)),
            Region::RealInterval { lo, hi } => Some(Rect::new(*lo, *hi, 0.0, 0.0)),
            Region::Stadium { lo, hi, radius } => {
                Some(Rect::new(lo - radius, hi + radius, -radius, *radius))
            }
            Region::VerticalStrip { xmin, xmax } => Some(Rect::new(*xmin, *xmax, -inf, inf)),
            Region::HorizontalBand { half_width } => {
                Some(Rect::new(-inf, inf, -half_width, *half_width))
            }
            Region::HalfPlane { x0, side } => Some(match side {
                Side::Right => Rect::new(*x0, inf, -inf, inf),
                Side::Left => Rect::new(-inf, *x0, -inf, inf),
            }),
            Region::DoubleSector { slope } => {
                let h = if *slope == 0.0 { 0.0 } else { inf };
                Some(Rect::new(-inf, inf, -h, h))
            }
            Region::ConeBallUnion {
                lo,
                hi,
                center_scale,
                radius_scale,
            } => {
                let (mu, rho) = (*center_scale, *radius_scale);
                let xs = [(mu - rho) * lo, (mu - rho) * hi, (mu + rho) * lo, (mu + rho) * hi];
                let xmin = xs.iter().copied().fold(inf, f64::min);
                let xmax = xs.iter().copied().fold(-inf, f64::max);
                Some(Rect::new(xmin, xmax, -rho * hi, rho * hi))
            }
            Region::FiniteBallUnion { discs } => discs
                .iter()
                .map(disc_rect)
                .reduce(|a, b| a.hull(&b)),
            Region::Union { children } => children
                .iter()
                .filter_map(Region::extent)
                .reduce(|a, b| a.hull(&b)),
            Region::Intersection { children } => {
                let mut acc = Rect::new(-inf, inf, -inf, inf);
                for c in children {
                    acc = acc.meet(&c.extent()?)?;
                }
                Some(acc)
            }
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.extent().is_none_or(|r| r.is_finite())
    }

    /// The mirror image under `z ↦ conj(z)`. All regions built from the block
    /// formulas are symmetric; this is used to check that.
    pub fn conjugate(&self) -> Region {
        match self {
            Region::Disc(d) => Region::Disc(Disc {
                center: d.center.conj(),
                ..*d
            }),
            Region::FiniteBallUnion { discs } => Region::FiniteBallUnion {
                discs: discs
                    .iter()
                    .map(|d| Disc {
                        center: d.center.conj(),
                        ..*d
                    })
                    .collect(),
            },
            Region::Union { children } => Region::Union {
                children: children.iter().map(Region::conjugate).collect(),
            },
            Region::Intersection { children } => Region::Intersection {
                children: children.iter().map(Region::conjugate).collect(),
            },
            other => other.clone(),
        }
    }

    /// Draws `n` points uniformly from `region ∩ window` by rejection.
    /// `window` defaults to the extent, which must then be bounded.
    pub fn sample_points<R: Rng + ?Sized>(
        &self,
        n: usize,
        window: Option<Rect>,
        rng: &mut R,
    ) -> Result<Vec<Complex64>> {
        let ext = self.extent().ok_or(Error::EmptyRegion)?;
        let w = match window {
            Some(w) => w.meet(&ext).ok_or(Error::EmptyRegion)?,
            None => ext,
        };
        if !w.is_finite() {
            return Err(Error::Unbounded);
        }
        let max_tries = 10_000usize.max(n.saturating_mul(10_000));
        let mut out = Vec::with_capacity(n);
        let mut tries = 0usize;
        while out.len() < n {
            if tries >= max_tries {
                return Err(Error::InvalidRegion(
                    "rejection sampling found too few interior points".into(),
                ));
            }
            tries += 1;
            let z = Complex64::new(
                w.xmin + rng.random::<f64>() * w.width(),
                w.ymin + rng.random::<f64>() * w.height(),
            );
            if self.contains(z) {
                out.push(z);
            }
        }
        Ok(out)
    }
}

fn check_disc(d: &Disc) -> Result<()> {
    if d.center.re.is_finite() && d.center.im.is_finite() && d.radius.is_finite() && d.radius >= 0.0
    {
        Ok(())
    } else {
        Err(Error::InvalidRegion(format!(
            "disc centred at {} with radius {}",
            d.center, d.radius
        )))
    }
}

fn disc_rect(d: &Disc) -> Rect {
    Rect::new(
        d.center.re - d.radius,
        d.center.re + d.radius,
        d.center.im - d.radius,
        d.center.im + d.radius,
    )
}

/// Whether some `a ∈ [lo, hi]` has `|z - μa| ≤ ρa + tol`: the quadratic
/// `(μ² - ρ²)a² - 2(μx + ρ tol)a + |z|² - tol²` is minimized over the interval.
fn cone_contains(lo: f64, hi: f64, mu: f64, rho: f64, z: Complex64, tol: f64) -> bool {
    let q2 = mu * mu - rho * rho;
    let q1 = -2.0 * (mu * z.re + rho * tol);
    let q0 = z.norm_sqr() - tol * tol;
    let q = |a: f64| (q2 * a + q1) * a + q0;
    let min = if q2 > 0.0 {
        q((-q1 / (2.0 * q2)).clamp(lo, hi))
    } else {
        q(lo).min(q(hi))
    };
    min <= 0.0
}

/// `min_a max(0, |z - μa| - ρa)`. The objective is convex in `a`; its
/// stationary point satisfies `μ(μa - x) = ρ|z - μa|`.
fn cone_distance(lo: f64, hi: f64, mu: f64, rho: f64, z: Complex64) -> f64 {
    let h = |a: f64| (z - mu * a).norm() - rho * a;
    let a = if mu > rho {
        let u = rho * z.im.abs() / (mu * mu - rho * rho).sqrt();
        ((z.re + u) / mu).clamp(lo, hi)
    } else {
        hi
    };
    h(a).min(h(lo)).min(h(hi)).max(0.0)
}
