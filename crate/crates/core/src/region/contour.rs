//! Boundary loops by marching squares.
//!
//! Membership is sampled on a grid one cell larger than the clip box on every
//! side, so every traced loop closes. Crossing points on grid edges are
//! refined by bisection on membership; ambiguous saddle cells are resolved by
//! sampling the cell centre.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Rect, Region};
use crate::error::{Error, Result};

const BISECTIONS: usize = 48;

/// Closed loops tracing `∂(region ∩ clip)` on an `nx × ny` cell grid.
pub fn boundary_loops(region: &Region, clip: Rect, nx: usize, ny: usize) -> Vec<Vec<Complex64>> {
    let nx = nx.max(1);
    let ny = ny.max(1);
    let hx = clip.width() / nx as f64;
    let hy = clip.height() / ny as f64;
    // node (i, j) for i in 0..=nx+2 sits at clip.xmin + (i - 1)·hx
    let w = nx + 3;
    let h = ny + 3;
    let pos = |i: usize, j: usize| {
        let x = if i == 1 {
            clip.xmin
        } else if i == nx + 1 {
            clip.xmax
        } else {
            clip.xmin + (i as f64 - 1.0) * hx
        };
        let y = if j == 1 {
            clip.ymin
        } else if j == ny + 1 {
            clip.ymax
        } else {
            clip.ymin + (j as f64 - 1.0) * hy
        };
        Complex64::new(x, y)
    };
    let member = |z: Complex64| clip.contains(z) && region.contains(z);
    let inside: Vec<bool> = (0..h)
        .flat_map(|j| (0..w).map(move |i| (i, j)))
        .map(|(i, j)| i > 0 && j > 0 && i < w - 1 && j < h - 1 && member(pos(i, j)))
        .collect();
    let at = |i: usize, j: usize| inside[j * w + i];
    let hedge = |i: usize, j: usize| 2 * (j * w + i);
    let vedge = |i: usize, j: usize| 2 * (j * w + i) + 1;

    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut link = |a: usize, b: usize| {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    };
    for j in 0..h - 1 {
        for i in 0..w - 1 {
            let corners = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            let case = corners
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, &b)| acc | ((b as u8) << k));
            let (bottom, right, top, left) =
                (hedge(i, j), vedge(i + 1, j), hedge(i, j + 1), vedge(i, j));
            match case {
                0 | 15 => {}
                5 | 10 => {
                    let mid = (pos(i, j) + pos(i + 1, j + 1)) * 0.5;
                    let centre_in = member(mid);
                    // corners 0 and 2 inside (case 5) or 1 and 3 (case 10)
                    let cut_odd = (case == 5) == centre_in;
                    if cut_odd {
                        link(bottom, right);
                        link(left, top);
                    } else {
                        link(bottom, left);
                        link(right, top);
                    }
                }
                _ => {
                    let crossing: Vec<usize> = [
                        (corners[0] != corners[1], bottom),
                        (corners[1] != corners[2], right),
                        (corners[2] != corners[3], top),
                        (corners[3] != corners[0], left),
                    ]
                    .iter()
                    .filter(|(x, _)| *x)
                    .map(|&(_, e)| e)
                    .collect();
                    link(crossing[0], crossing[1]);
                }
            }
        }
    }

    let edge_point = |e: usize| {
        let node = e / 2;
        let (i, j) = (node % w, node / w);
        let (p, q) = if e.is_multiple_of(2) {
            (pos(i, j), pos(i + 1, j))
        } else {
            (pos(i, j), pos(i, j + 1))
        };
        let (mut a, mut b) = if at(i, j) { (p, q) } else { (q, p) };
        for _ in 0..BISECTIONS {
            let m = (a + b) * 0.5;
            if member(m) {
                a = m;
            } else {
                b = m;
            }
        }
        (a + b) * 0.5
    };

    let mut visited = std::collections::BTreeSet::new();
    let mut loops = Vec::new();
    for &start in adj.keys() {
        if visited.contains(&start) {
            continue;
        }
        let mut lp = Vec::new();
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            visited.insert(cur);
            lp.push(edge_point(cur));
            let next = adj[&cur].iter().copied().find(|&n| n != prev && !visited.contains(&n));
            match next {
                Some(n) => {
                    prev = cur;
                    cur = n;
                }
                None => break,
            }
        }
        if lp.len() >= 2 {
            loops.push(lp);
        }
    }
    loops
}

fn grid_for(clip: &Rect, cells: usize) -> (usize, usize) {
    let long = clip.width().max(clip.height());
    let nx = ((clip.width() / long) * cells as f64).ceil().max(8.0) as usize;
    let ny = ((clip.height() / long) * cells as f64).ceil().max(8.0) as usize;
    (nx, ny)
}

/// Points on the boundary of a bounded region, from a grid over its extent
/// padded by 5%. Deterministic for fixed `n`.
pub fn boundary_sample(region: &Region, n: usize) -> Result<Vec<Complex64>> {
    let Some(ext) = region.extent() else {
        return Ok(vec![]);
    };
    if !ext.is_finite() {
        return Err(Error::Unbounded);
    }
    boundary_sample_clipped(region, ext.padded(0.05, 1e-6), n)
}

/// Points on `∂(region ∩ clip)`.
pub fn boundary_sample_clipped(region: &Region, clip: Rect, n: usize) -> Result<Vec<Complex64>> {
    if n < 8 {
        return Err(Error::Invalid(format!("boundary sample needs n ≥ 8, got {n}")));
    }
    if !clip.is_finite() || clip.width() <= 0.0 || clip.height() <= 0.0 {
        return Err(Error::Invalid("clip rectangle must be finite with positive area".into()));
    }
    let (nx, ny) = grid_for(&clip, n / 3);
    Ok(boundary_loops(region, clip, nx, ny).concat())
}

/// Loops of `∂(region ∩ clip)` with about `cells` cells along the longer side.
pub fn boundary_loops_clipped(region: &Region, clip: Rect, cells: usize) -> Vec<Vec<Complex64>> {
    let (nx, ny) = grid_for(&clip, cells);
    boundary_loops(region, clip, nx, ny)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_circle_samples() {
        let pts = boundary_sample(&Region::disc(c(0.0, 0.0), 1.0), 360).unwrap();
        assert!(pts.len() >= 360);
        for p in pts {
            assert!((p.norm() - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn two_disjoint_discs_give_two_loops() {
        let r = Region::union(vec![
            Region::disc(c(0.0, 0.0), 1.0),
            Region::disc(c(3.0, 0.0), 1.0),
        ]);
        let ext = r.extent().unwrap().padded(0.05, 0.0);
        assert_eq!(boundary_loops_clipped(&r, ext, 120).len(), 2);
    }

    #[test]
    fn clipped_strip_is_a_rectangle() {
        let clip = Rect::new(-2.0, 2.0, -1.0, 1.0);
        let loops = boundary_loops_clipped(&Region::strip(0.0, 1.0), clip, 64);
        assert_eq!(loops.len(), 1);
        for p in &loops[0] {
            let on_side = (p.re - 0.0).abs() < 1e-9 || (p.re - 1.0).abs() < 1e-9;
            let on_clip = (p.im.abs() - 1.0).abs() < 1e-9;
            assert!(on_side || on_clip, "{p}");
            assert!(p.re >= -1e-9 && p.re <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn unbounded_needs_clip() {
        assert_eq!(boundary_sample(&Region::band(1.0), 16), Err(Error::Unbounded));
        assert!(boundary_sample(&Region::disc(c(0.0, 0.0), 1.0), 4).is_err());
    }

    #[test]
    fn deterministic() {
        let r = Region::intersection(vec![
            Region::disc(c(1.0, 0.0), 2.0 / 3.0),
            Region::disc(c(2.0, 0.0), 2.0 / 3.0),
        ]);
        assert_eq!(boundary_sample(&r, 100).unwrap(), boundary_sample(&r, 100).unwrap());
    }

    #[test]
    fn disc_minus_strip_has_two_loops() {
        let split = Region::intersection(vec![
            Region::disc(c(0.0, 0.0), 2.0),
            Region::Union {
                children: vec![
                    Region::half_plane(1.0, crate::region::Side::Right),
                    Region::half_plane(-1.0, crate::region::Side::Left),
                ],
            },
        ]);
        let loops = boundary_loops_clipped(&split, split.extent().unwrap().padded(0.05, 0.0), 100);
        assert_eq!(loops.len(), 2);
    }
}
