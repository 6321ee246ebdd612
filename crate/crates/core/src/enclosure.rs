//! Global enclosures of the spectrum of `S` built from the spectra of the
//! diagonal blocks and norms of the coupling.
//!
//! * [`qnr_enclosure`]: the quadratic-numerical-range enclosure, two real
//!   intervals when the diagonal ranges are separated by more than `‖B‖`,
//!   otherwise a real hull plus a stadium lens cut to a vertical strip.
//! * [`tretter_strip`]: the older band enclosure, for comparison.
//! * [`gershgorin_enclosure`]: weighted ball unions over `σ(A)` and `σ(D)`.
//! * [`inverse_abs_corollary`]: the `f = 1/|t|` discs with their tangent
//!   double sector and half-plane cutoffs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BlockSpectra, TOL_POLE, TOL_SUPPORT};
use crate::region::{Disc, Region, Side};

/// Extremes of the numerical ranges of `A` and `D` and the derived constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeConstants {
    pub a_lo: f64,
    pub a_hi: f64,
    pub d_lo: f64,
    pub d_hi: f64,
    pub m_lo: f64,
    pub m_hi: f64,
    /// Midpoint between the inner ends of the two ranges.
    pub c: f64,
    /// Half the gap between the ranges; `0` when they overlap.
    pub ell: f64,
}

impl RangeConstants {
    pub fn from_intervals(a_lo: f64, a_hi: f64, d_lo: f64, d_hi: f64) -> Self {
        let inner_lo = a_hi.min(d_hi);
        let inner_hi = a_lo.max(d_lo);
        Self {
            a_lo,
            a_hi,
            d_lo,
            d_hi,
            m_lo: 0.5 * (a_lo + d_lo),
            m_hi: 0.5 * (a_hi + d_hi),
            c: 0.5 * (inner_lo + inner_hi),
            ell: 0.5 * (inner_hi - inner_lo).max(0.0),
        }
    }

    pub fn hull(&self) -> (f64, f64) {
        (self.a_lo.min(self.d_lo), self.a_hi.max(self.d_hi))
    }

    /// Half-width of the forbidden real interval around `c` when `b ≤ ell`.
    pub fn gap_radius(&self, b: f64) -> Option<f64> {
        (self.ell > 0.0 && b <= self.ell).then(|| (self.ell * self.ell - b * b).sqrt())
    }
}

pub fn range_constants(sp: &BlockSpectra) -> RangeConstants {
    RangeConstants::from_intervals(sp.a.min(), sp.a.max(), sp.d.min(), sp.d.max())
}

/// The quadratic-range enclosure for ranges `rc` and coupling norm `b`.
pub fn quadratic_range_region(rc: &RangeConstants, b: f64) -> Region {
    let (lo, hi) = rc.hull();
    if let Some(r) = rc.gap_radius(b) {
        return Region::union(vec![
            Region::interval(lo, rc.c - r),
            Region::interval(rc.c + r, hi),
        ]);
    }
    Region::union(vec![
        Region::interval(lo, hi),
        Region::intersection(vec![
            Region::stadium(rc.a_lo, rc.a_hi, b),
            Region::stadium(rc.d_lo, rc.d_hi, b),
            Region::strip(rc.m_lo, rc.m_hi),
        ]),
    ])
}

/// Enclosure of the quadratic numerical range, hence of the spectrum.
pub fn qnr_enclosure(sp: &BlockSpectra) -> Region {
    quadratic_range_region(&range_constants(sp), sp.b_norm)
}

/// Band `|Im z| ≤ √(‖B‖² − ell²)` cut to the strip `[m_lo, m_hi]`; empty when
/// `‖B‖ < ell`.
pub fn tretter_strip(sp: &BlockSpectra) -> Region {
    let rc = range_constants(sp);
    let b = sp.b_norm;
    if b < rc.ell {
        return Region::Empty;
    }
    Region::intersection(vec![
        Region::band((b * b - rc.ell * rc.ell).sqrt()),
        Region::strip(rc.m_lo, rc.m_hi),
    ])
}

/// Positive weight on a real spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFunction {
    ConstantOne,
    InverseAbs,
    /// Piecewise linear through `(t, f(t))` knots, constant beyond the ends.
    Tabulated { table: Vec<(f64, f64)> },
}

impl WeightFunction {
    pub fn validate(&self) -> Result<()> {
        if let WeightFunction::Tabulated { table } = self {
            if table.is_empty() {
                return Err(Error::Invalid("tabulated weight has no knots".into()));
            }
            if table.iter().any(|(t, f)| !t.is_finite() || !f.is_finite()) {
                return Err(Error::Invalid("tabulated weight has non-finite knots".into()));
            }
            if table.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::Invalid(
                    "tabulated weight knots must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            WeightFunction::ConstantOne => 1.0,
            WeightFunction::InverseAbs => 1.0 / t.abs(),
            WeightFunction::Tabulated { table } => {
                let first = table[0];
                let last = table[table.len() - 1];
                if t <= first.0 {
                    return first.1;
                }
                if t >= last.0 {
                    return last.1;
                }
                let k = table.partition_point(|&(x, _)| x <= t);
                let (x0, y0) = table[k - 1];
                let (x1, y1) = table[k];
                y0 + (y1 - y0) * (t - x0) / (x1 - x0)
            }
        }
    }

    /// Rejects weights that are not positive on `spectrum`.
    pub fn check_on(&self, spectrum: &[f64], block: &'static str) -> Result<()> {
        self.validate()?;
        if matches!(self, WeightFunction::InverseAbs)
            && spectrum.iter().any(|t| t.abs() <= TOL_POLE)
        {
            return Err(Error::ZeroInSpectrum(block));
        }
        for &t in spectrum {
            let w = self.eval(t);
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::NonPositiveWeight { point: t, value: w });
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &'static str {
        match self {
            WeightFunction::ConstantOne => "one",
            WeightFunction::InverseAbs => "invabs",
            WeightFunction::Tabulated { .. } => "tabulated",
        }
    }
}

fn dedup(mut v: Vec<f64>) -> Vec<f64> {
    v.dedup();
    v
}

fn ball_union(points: &[f64], norm: f64, w: &WeightFunction) -> Region {
    if points.is_empty() {
        return Region::Empty;
    }
    Region::ball_union(
        points
            .iter()
            .map(|&t| Disc::new(Complex64::new(t, 0.0), norm / w.eval(t)))
            .collect(),
    )
}

/// Weighted ball-union enclosure of the non-real spectrum:
/// `⋃_t B_{‖f(A)B‖/f(t)}(t) ∩ ⋃_s B_{‖g(D)B*‖/g(s)}(s)`, with `t` over `σ(A)`
/// (or its part coupled through `B` when `refined`) and dually for `s`.
pub fn gershgorin_enclosure(
    sp: &BlockSpectra,
    f: &WeightFunction,
    g: &WeightFunction,
    refined: bool,
) -> Result<Region> {
    gershgorin_enclosure_with(sp, f, g, refined, TOL_SUPPORT)
}

pub fn gershgorin_enclosure_with(
    sp: &BlockSpectra,
    f: &WeightFunction,
    g: &WeightFunction,
    refined: bool,
    tol_support: f64,
) -> Result<Region> {
    f.check_on(&sp.a.eigenvalues, "A")?;
    g.check_on(&sp.d.eigenvalues, "D")?;
    let na = sp.a_weighted_norm(|t| f.eval(t))?;
    let nd = sp.d_weighted_norm(|t| g.eval(t))?;
    let (pa, pd) = if refined {
        (sp.a_support(tol_support), sp.d_support(tol_support))
    } else {
        (dedup(sp.a.eigenvalues.clone()), dedup(sp.d.eigenvalues.clone()))
    };
    Ok(Region::intersection(vec![
        ball_union(&pa, na, f),
        ball_union(&pd, nd, g),
    ]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockSide {
    /// Discs over `σ(A)` with `k = ‖A⁻¹B‖`.
    A,
    /// Discs over `σ(D)` with `k = ‖D⁻¹B*‖`.
    D,
}

/// Discs `B_{|a|k}(a)` and, for `k < 1`, the tangent double sector and the
/// half-plane cutoffs `Re z ≥ (1-k)·min σ∩(0,∞)`, `Re z ≤ (1-k)·max σ∩(-∞,0)`.
/// A cutoff is `Empty` when that part of the spectrum is empty; it bounds only
/// the part of the spectrum in the corresponding open half-plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryRegions {
    pub side: BlockSide,
    pub k: f64,
    pub balls: Region,
    pub sector: Option<Region>,
    pub halfplane_pos: Option<Region>,
    pub halfplane_neg: Option<Region>,
}

impl CorollaryRegions {
    /// Everything combined into one region: the balls, the sector, and each
    /// cutoff applied to its own open half-plane.
    pub fn combined(&self) -> Region {
        let mut parts = vec![self.balls.clone()];
        if let Some(s) = &self.sector {
            parts.push(s.clone());
        }
        if let Some(p) = &self.halfplane_pos {
            parts.push(Region::union(vec![Region::half_plane(0.0, Side::Left), p.clone()]));
        }
        if let Some(n) = &self.halfplane_neg {
            parts.push(Region::union(vec![Region::half_plane(0.0, Side::Right), n.clone()]));
        }
        Region::intersection(parts)
    }
}

pub fn inverse_abs_corollary(sp: &BlockSpectra, side: BlockSide) -> Result<CorollaryRegions> {
    let (spectrum, label) = match side {
        BlockSide::A => (&sp.a.eigenvalues, "A"),
        BlockSide::D => (&sp.d.eigenvalues, "D"),
    };
    WeightFunction::InverseAbs.check_on(spectrum, label)?;
    let inv = |t: f64| 1.0 / t.abs();
    let (k, support) = match side {
        BlockSide::A => (sp.a_weighted_norm(inv)?, sp.a_support(TOL_SUPPORT)),
        BlockSide::D => (sp.d_weighted_norm(inv)?, sp.d_support(TOL_SUPPORT)),
    };
    let balls = if support.is_empty() {
        Region::Empty
    } else {
        Region::ball_union(
            support
                .iter()
                .map(|&a| Disc::new(Complex64::new(a, 0.0), a.abs() * k))
                .collect(),
        )
    };
    let (mut sector, mut halfplane_pos, mut halfplane_neg) = (None, None, None);
    if k < 1.0 {
        sector = Some(Region::sector(k / (1.0 - k * k).sqrt()));
        let min_pos = spectrum.iter().copied().filter(|&t| t > 0.0).reduce(f64::min);
        let max_neg = spectrum.iter().copied().filter(|&t| t < 0.0).reduce(f64::max);
        halfplane_pos = Some(min_pos.map_or(Region::Empty, |t| {
            Region::half_plane((1.0 - k) * t, Side::Right)
        }));
        halfplane_neg = Some(max_neg.map_or(Region::Empty, |t| {
            Region::half_plane((1.0 - k) * t, Side::Left)
        }));
    }
    Ok(CorollaryRegions {
        side,
        k,
        balls,
        sector,
        halfplane_pos,
        halfplane_neg,
    })
}
