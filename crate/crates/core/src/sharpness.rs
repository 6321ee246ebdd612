//! Diagonal operators whose spectrum fills the quadratic-range enclosure.
//!
//! Every point `z` of the enclosure for ranges `[a_lo, a_hi]`, `[d_lo, d_hi]`
//! and coupling bound `b` is an eigenvalue of some 2×2 block
//! `[[a, β], [-β, d]]` with `a`, `d` in the ranges and `0 ≤ β ≤ b`.
//! Stacking such blocks for a dense point sequence gives `A`, `B`, `D`
//! diagonal with spectrum arbitrarily close to the whole enclosure.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enclosure::{quadratic_range_region, RangeConstants};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{c, real_diagonal, BlockOperator};
use crate::region::Region;

/// Triples must reproduce their target to this accuracy.
pub const TOL_REALIZE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessSpec {
    pub a_lo: f64,
    pub a_hi: f64,
    pub d_lo: f64,
    pub d_hi: f64,
    pub b: f64,
    pub n: usize,
    pub seed: u64,
}

impl SharpnessSpec {
    pub fn validate(&self) -> Result<()> {
        let vals = [self.a_lo, self.a_hi, self.d_lo, self.d_hi, self.b];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("sharpness bounds must be finite".into()));
        }
        if self.a_lo > self.a_hi || self.d_lo > self.d_hi {
            return Err(Error::Invalid("interval bounds must satisfy lo <= hi".into()));
        }
        if self.b <= 0.0 {
            return Err(Error::Invalid(format!("coupling bound must be positive (got {})", self.b)));
        }
        if self.n == 0 {
            return Err(Error::Invalid("truncation size must be at least 1".into()));
        }
        Ok(())
    }

    pub fn constants(&self) -> RangeConstants {
        RangeConstants::from_intervals(self.a_lo, self.a_hi, self.d_lo, self.d_hi)
    }

    fn scale(&self) -> f64 {
        [self.a_lo, self.a_hi, self.d_lo, self.d_hi, self.b]
            .iter()
            .fold(1.0f64, |m, v| m.max(v.abs()))
    }

    fn membership_tol(&self) -> f64 {
        1e-9 * self.scale()
    }
}

pub fn target_region(spec: &SharpnessSpec) -> Region {
    quadratic_range_region(&spec.constants(), spec.b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizedTriple {
    pub a: f64,
    pub beta: f64,
    pub d: f64,
    pub target: Complex64,
}

impl RealizedTriple {
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        w_pm(self.a, self.beta, self.d)
    }

    /// Distance from the target to the nearer of `w₊`, `w₋`.
    pub fn residual(&self) -> f64 {
        let [p, m] = self.eigenvalues();
        (p - self.target).norm().min((m - self.target).norm())
    }
}

/// Eigenvalues `(a+d)/2 ± √(((a-d)/2)² - β²)` of `[[a, β], [-β, d]]`.
pub fn w_pm(a: f64, beta: f64, d: f64) -> [Complex64; 2] {
    let mid = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let rad = (half - beta) * (half + beta);
    if rad >= 0.0 {
        let r = rad.sqrt();
        [c(mid + r, 0.0), c(mid - r, 0.0)]
    } else {
        let r = (-rad).sqrt();
        [c(mid, r), c(mid, -r)]
    }
}

fn clamp(x: f64, lo: f64, hi: f64) -> f64 {
    x.max(lo).min(hi)
}

fn interval_dist(x: f64, lo: f64, hi: f64) -> f64 {
    (lo - x).max(x - hi).max(0.0)
}

/// A triple `(a, β, d)` with `z ∈ {w₊, w₋}`.
pub fn realize_point(z: Complex64, spec: &SharpnessSpec) -> Result<RealizedTriple> {
    if !target_region(spec).contains_within(z, spec.membership_tol()) {
        return Err(Error::OutsideRegion(z));
    }
    let s = spec;
    let x = z.re;
    let (a, beta, d) = if z.im != 0.0 {
        // Anchor at the nearest point `p` of the farther range; the other
        // diagonal entry is the reflection `2x - p`, so `(a + d)/2 = x`.
        if interval_dist(x, s.a_lo, s.a_hi) <= interval_dist(x, s.d_lo, s.d_hi) {
            let p = clamp(x, s.d_lo, s.d_hi);
            (2.0 * x - p, (z - p).norm(), p)
        } else {
            let p = clamp(x, s.a_lo, s.a_hi);
            (p, (z - p).norm(), 2.0 * x - p)
        }
    } else if (s.a_lo..=s.a_hi).contains(&x) {
        (x, 0.0, clamp(x, s.d_lo, s.d_hi))
    } else if (s.d_lo..=s.d_hi).contains(&x) {
        (clamp(x, s.a_lo, s.a_hi), 0.0, x)
    } else {
        let rc = s.constants();
        let (a_inner, d_inner) = if s.d_hi < s.a_lo { (s.a_lo, s.d_hi) } else { (s.a_hi, s.d_lo) };
        if rc.ell > 0.0 && (x - rc.c).abs() <= rc.ell {
            let t = x - rc.c;
            (a_inner, ((rc.ell - t) * (rc.ell + t)).max(0.0).sqrt(), d_inner)
        } else {
            // within tolerance of an outer endpoint
            (clamp(x, s.a_lo, s.a_hi), 0.0, clamp(x, s.d_lo, s.d_hi))
        }
    };
    Ok(RealizedTriple {
        a: clamp(a, s.a_lo, s.a_hi),
        beta: clamp(beta, 0.0, s.b),
        d: clamp(d, s.d_lo, s.d_hi),
        target: z,
    })
}

/// Radical inverse of `k` in base `base`.
fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while k > 0 {
        r += (k % base) as f64 * f;
        k /= base;
        f *= inv;
    }
    r
}

fn shifted(u: f64, shift: f64) -> f64 {
    let v = u + shift;
    v - v.floor()
}

/// Largest `Im z` of the non-real part above `x`, or `None` outside it.
fn upper_height(spec: &SharpnessSpec, x: f64) -> Option<f64> {
    let rc = spec.constants();
    if x < rc.m_lo || x > rc.m_hi {
        return None;
    }
    let h = |lo, hi| {
        let t = interval_dist(x, lo, hi);
        (t <= spec.b).then(|| ((spec.b - t) * (spec.b + t)).sqrt())
    };
    Some(h(spec.a_lo, spec.a_hi)?.min(h(spec.d_lo, spec.d_hi)?))
}

/// Real extent of the non-real part.
fn upper_span(spec: &SharpnessSpec) -> (f64, f64) {
    let rc = spec.constants();
    let lo = rc.m_lo.max(spec.a_lo - spec.b).max(spec.d_lo - spec.b);
    let hi = rc.m_hi.min(spec.a_hi + spec.b).min(spec.d_hi + spec.b);
    (lo, hi)
}

/// Real part of the enclosure as a list of disjoint intervals.
fn real_pieces(spec: &SharpnessSpec) -> Vec<(f64, f64)> {
    let rc = spec.constants();
    let (lo, hi) = rc.hull();
    match rc.gap_radius(spec.b) {
        Some(r) => vec![(lo, rc.c - r), (rc.c + r, hi)],
        None => vec![(lo, hi)],
    }
}

/// Maps `u ∈ [0, 1)` onto the concatenation of `pieces` by arc length.
fn along_pieces(pieces: &[(f64, f64)], u: f64) -> f64 {
    let total: f64 = pieces.iter().map(|(l, h)| h - l).sum();
    if total <= 0.0 {
        return pieces[0].0;
    }
    let mut t = u * total;
    for &(l, h) in pieces {
        if t <= h - l {
            return l + t;
        }
        t -= h - l;
    }
    pieces[pieces.len() - 1].1
}

/// Extreme points that are always realized first: a point realizing
/// `β = b` (inner gap endpoint or lens tip), then the range endpoints.
pub fn extreme_points(spec: &SharpnessSpec) -> Vec<Complex64> {
    let rc = spec.constants();
    let (lo, hi) = rc.hull();
    let mut pts = match rc.gap_radius(spec.b) {
        Some(r) => vec![c(rc.c - r, 0.0), c(rc.c + r, 0.0)],
        None => {
            let y = ((spec.b - rc.ell) * (spec.b + rc.ell)).sqrt();
            vec![c(rc.c, y)]
        }
    };
    pts.extend([lo, hi, spec.a_lo, spec.a_hi, spec.d_lo, spec.d_hi].map(|x| c(x, 0.0)));
    let mut out: Vec<Complex64> = Vec::with_capacity(pts.len());
    for p in pts {
        if !out.iter().any(|q| (q - p).norm() <= 1e-15 * spec.scale()) {
            out.push(p);
        }
    }
    out
}

/// The first `spec.n` points of a prefix-stable sequence dense in the
/// enclosure: extreme points, then shifted van der Corput points on the
/// real part interleaved (one in four) with shifted Halton points in the
/// upper non-real part.
pub fn target_points(spec: &SharpnessSpec) -> Vec<Complex64> {
    let region = target_region(spec);
    let tol = spec.membership_tol();
    let mut out: Vec<Complex64> = extreme_points(spec)
        .into_iter()
        .filter(|z| region.contains_within(*z, tol))
        .take(spec.n)
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let shift: [f64; 3] = [rng.random(), rng.random(), rng.random()];
    let pieces = real_pieces(spec);
    let has_upper = spec.constants().gap_radius(spec.b).is_none();
    let (xlo, xhi) = upper_span(spec);

    let (mut real_k, mut plane_k) = (1u64, 1u64);
    let mut step = 0u64;
    let max_steps = 1000 + 100 * spec.n as u64;
    while out.len() < spec.n && step < max_steps {
        let real_turn = !has_upper || step.is_multiple_of(4);
        step += 1;
        let z = if real_turn {
            let u = shifted(radical_inverse(real_k, 2), shift[0]);
            real_k += 1;
            c(along_pieces(&pieces, u), 0.0)
        } else {
            let u = shifted(radical_inverse(plane_k, 2), shift[1]);
            let v = shifted(radical_inverse(plane_k, 3), shift[2]);
            plane_k += 1;
            let x = xlo + u * (xhi - xlo);
            match upper_height(spec, x) {
                Some(h) if h > 0.0 && v > 0.0 => c(x, v * h),
                _ => continue,
            }
        };
        if region.contains_within(z, tol) {
            out.push(z);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpConstruction {
    pub spec: SharpnessSpec,
    pub triples: Vec<RealizedTriple>,
    /// `‖B‖ = max β`.
    pub coupling_norm: f64,
    /// Whether `‖B‖ = b` to within `1e-12·b`.
    pub b_attained: bool,
}

impl SharpConstruction {
    /// All `2N` eigenvalues, two per diagonal block.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.triples.iter().flat_map(|t| t.eigenvalues()).collect()
    }

    pub fn operator(&self) -> BlockOperator {
        let a: Vec<f64> = self.triples.iter().map(|t| t.a).collect();
        let b: Vec<f64> = self.triples.iter().map(|t| t.beta).collect();
        let d: Vec<f64> = self.triples.iter().map(|t| t.d).collect();
        BlockOperator::from_matrices(real_diagonal(&a), real_diagonal(&b), real_diagonal(&d))
            .expect("diagonal blocks of equal size")
    }
}

pub fn construct(spec: &SharpnessSpec, exec: Execution) -> Result<SharpConstruction> {
    spec.validate()?;
    let points = target_points(spec);
    if points.len() < spec.n {
        return Err(Error::Invalid(format!(
            "only {} of {} target points could be drawn",
            points.len(),
            spec.n
        )));
    }
    let triples = exec
        .map_slice(&points, |z| realize_point(*z, spec))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let coupling_norm = triples.iter().fold(0.0f64, |m, t| m.max(t.beta));
    Ok(SharpConstruction {
        spec: *spec,
        triples,
        coupling_norm,
        b_attained: (coupling_norm - spec.b).abs() <= 1e-12 * spec.b,
    })
}

pub fn build_sharp_operator(spec: &SharpnessSpec) -> Result<BlockOperator> {
    Ok(construct(spec, Execution::default())?.operator())
}

/// `count` reference points of the enclosure: uniform on the real part in
/// the gap case, otherwise 80% uniform in the non-real part and 20% uniform
/// on the real hull. Always contains the hull endpoints.
pub fn reference_samples(spec: &SharpnessSpec, count: usize) -> Result<Vec<Complex64>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(1);
    let rc = spec.constants();
    let pieces = real_pieces(spec);
    let (lo, hi) = rc.hull();
    let mut out = vec![c(lo, 0.0), c(hi, 0.0)];
    let remaining = count.saturating_sub(out.len());
    let n_plane = if rc.gap_radius(spec.b).is_some() { 0 } else { remaining * 4 / 5 };
    if n_plane > 0 {
        let upper = Region::intersection(vec![
            Region::stadium(spec.a_lo, spec.a_hi, spec.b),
            Region::stadium(spec.d_lo, spec.d_hi, spec.b),
            Region::strip(rc.m_lo, rc.m_hi),
        ]);
        out.extend(upper.sample_points(n_plane, None, &mut rng)?);
    }
    for _ in 0..remaining - n_plane {
        out.push(c(along_pieces(&pieces, rng.random()), 0.0));
    }
    out.truncate(count.max(1));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub n: usize,
    /// `max` over reference samples of the distance to the eigenvalue set.
    pub hausdorff: f64,
    /// Largest pairwise distance among the reference samples.
    pub diameter: f64,
    /// Largest distance from an eigenvalue to the enclosure.
    pub max_outside: f64,
}

impl DensityReport {
    pub fn ratio(&self) -> f64 {
        if self.diameter > 0.0 {
            self.hausdorff / self.diameter
        } else {
            0.0
        }
    }
}

/// Convex hull by monotone chain, collinear points dropped.
fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &z in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], z) <= 0.0 {
                hull.pop();
            }
            hull.push(z);
        }
        hull.pop();
    }
    hull
}

/// Largest pairwise distance; the farthest pair always lies on the hull.
pub fn diameter(samples: &[Complex64], exec: Execution) -> f64 {
    let hull = convex_hull(samples);
    exec.map(hull.len(), |i| {
        hull[i + 1..]
            .iter()
            .fold(0.0f64, |m, w| m.max((hull[i] - w).norm()))
    })
    .into_iter()
    .fold(0.0, f64::max)
}

pub fn one_sided_hausdorff(samples: &[Complex64], set: &[Complex64], exec: Execution) -> f64 {
    exec.map_slice(samples, |z| {
        set.iter().fold(f64::INFINITY, |m, w| m.min((z - w).norm()))
    })
    .into_iter()
    .fold(0.0, f64::max)
}

pub fn density_report(
    construction: &SharpConstruction,
    samples: &[Complex64],
    exec: Execution,
) -> Result<DensityReport> {
    let region = target_region(&construction.spec);
    let eig = construction.eigenvalues();
    let max_outside = exec
        .map_slice(&eig, |z| region.distance(*z))
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(DensityReport {
        n: construction.spec.n,
        hausdorff: one_sided_hausdorff(samples, &eig, exec),
        diameter: diameter(samples, exec),
        max_outside,
    })
}
