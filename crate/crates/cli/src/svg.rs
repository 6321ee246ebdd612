//! Layered SVG plots of a [`ResultBundle`]: region fills traced by marching
//! squares, zero-area region pieces on the real axis, certificate masks,
//! sample clouds and eigenvalue dots. Coordinates are printed with fixed
//! decimals so output is byte-stable.

use std::fmt::Write as _;

use specbox_core::region::contour::boundary_loops_clipped;
use specbox_core::{Complex64, Rect, Region};

use crate::bundle::{GridLayers, ResultBundle};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Plot window; defaults to the padded extent of everything drawable.
    pub clip: Option<Rect>,
    pub width: u32,
    /// Only draw regions with these tags.
    pub tags: Option<Vec<String>>,
    /// Marching-squares cells along the longer side.
    pub cells: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            clip: None,
            width: 800,
            tags: None,
            cells: 400,
        }
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

struct Frame {
    view: Rect,
    sx: f64,
    sy: f64,
    width: u32,
    height: u32,
}

impl Frame {
    fn new(view: Rect, width: u32) -> Self {
        let width = width.max(16);
        let aspect = (view.height() / view.width()).clamp(0.05, 20.0);
        let height = ((width as f64) * aspect).round().max(16.0) as u32;
        Frame {
            view,
            sx: width as f64 / view.width(),
            sy: height as f64 / view.height(),
            width,
            height,
        }
    }

    fn px(&self, z: Complex64) -> (String, String) {
        (
            num((z.re - self.view.xmin) * self.sx),
            num((self.view.ymax - z.im) * self.sy),
        )
    }
}

fn auto_view(bundle: &ResultBundle, regions: &[(usize, &Region)]) -> Option<Rect> {
    let mut acc: Option<Rect> = None;
    let mut add = |r: Rect| {
        if r.is_finite() {
            acc = Some(match acc {
                Some(a) => a.hull(&r),
                None => r,
            });
        }
    };
    for (_, r) in regions {
        if let Some(e) = r.extent() {
            add(e);
        }
    }
    let pts = bundle
        .eigenvalues
        .iter()
        .chain(bundle.clouds.iter().flat_map(|c| c.points.iter()));
    for z in pts {
        add(Rect::new(z.re, z.re, z.im, z.im));
    }
    if let Some(g) = &bundle.grid {
        add(g.rect);
    }
    acc.map(|r| r.padded(0.05, 0.05))
}

fn region_layer(out: &mut String, frame: &Frame, tag: &str, color: &str, region: &Region, cells: usize) {
    let _ = writeln!(out, "<g class=\"region\" data-tag=\"{tag}\">");
    for lp in boundary_loops_clipped(region, frame.view, cells) {
        let mut d = String::new();
        for (k, z) in lp.iter().enumerate() {
            let (x, y) = frame.px(*z);
            let _ = write!(d, "{}{x} {y} ", if k == 0 { "M" } else { "L" });
        }
        d.push('Z');
        let _ = writeln!(
            out,
            "<path class=\"region-loop\" d=\"{d}\" fill=\"{color}\" fill-opacity=\"0.25\" stroke=\"{color}\" stroke-width=\"1\"/>"
        );
    }
    // zero-area pieces on the real axis, one sample per pixel column
    let v = frame.view;
    if v.ymin <= 0.0 && v.ymax >= 0.0 {
        let h = 1.0 / frame.sy;
        let mut run: Option<(f64, f64)> = None;
        let mut segs = Vec::new();
        for k in 0..=frame.width {
            let x = v.xmin + k as f64 / frame.sx;
            let on = region.contains(Complex64::new(x, 0.0))
                && !(region.contains(Complex64::new(x, h)) && region.contains(Complex64::new(x, -h)));
            match (on, run) {
                (true, None) => run = Some((x, x)),
                (true, Some((a, _))) => run = Some((a, x)),
                (false, Some(r)) => {
                    segs.push(r);
                    run = None;
                }
                (false, None) => {}
            }
        }
        segs.extend(run);
        for (a, b) in segs {
            let (x1, y) = frame.px(Complex64::new(a, 0.0));
            let (x2, _) = frame.px(Complex64::new(b, 0.0));
            let _ = writeln!(
                out,
                "<line class=\"region-segment\" x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"3\"/>"
            );
        }
    }
    out.push_str("</g>\n");
}

fn mask_layer(out: &mut String, frame: &Frame, g: &GridLayers, mask: &[Option<bool>], class: &str, color: &str) {
    let hx = if g.nx > 1 { g.rect.width() / (g.nx - 1) as f64 } else { g.rect.width() };
    let hy = if g.ny > 1 { g.rect.height() / (g.ny - 1) as f64 } else { g.rect.height() };
    let _ = writeln!(out, "<g class=\"{class}\" fill=\"{color}\" fill-opacity=\"0.3\">");
    for j in 0..g.ny {
        let y = g.rect.ymin + j as f64 * hy;
        let mut i = 0;
        while i < g.nx {
            if mask[j * g.nx + i] != Some(true) {
                i += 1;
                continue;
            }
            let start = i;
            while i < g.nx && mask[j * g.nx + i] == Some(true) {
                i += 1;
            }
            let x0 = g.rect.xmin + (start as f64 - 0.5) * hx;
            let x1 = g.rect.xmin + (i as f64 - 0.5) * hx;
            let (px0, py0) = frame.px(Complex64::new(x0, y + 0.5 * hy));
            let w = num((x1 - x0) * frame.sx);
            let h = num(hy * frame.sy);
            let _ = writeln!(out, "<rect x=\"{px0}\" y=\"{py0}\" width=\"{w}\" height=\"{h}\"/>");
        }
    }
    out.push_str("</g>\n");
}

pub fn render_svg(bundle: &ResultBundle, opts: &RenderOptions) -> String {
    let regions: Vec<(usize, &Region)> = bundle
        .regions
        .iter()
        .enumerate()
        .filter(|(_, r)| opts.tags.as_ref().is_none_or(|t| t.contains(&r.tag)))
        .map(|(k, r)| (k, &r.region))
        .collect();
    let has_points = !bundle.eigenvalues.is_empty() || bundle.clouds.iter().any(|c| !c.points.is_empty());
    let empty = regions.is_empty() && !has_points && bundle.grid.is_none();
    let view = opts
        .clip
        .filter(|c| c.is_finite() && c.width() > 0.0 && c.height() > 0.0)
        .or_else(|| auto_view(bundle, &regions))
        .filter(|v| v.width() > 0.0 && v.height() > 0.0)
        .unwrap_or(Rect::new(-1.0, 1.0, -1.0, 1.0));
    let frame = Frame::new(view, opts.width);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = frame.width,
        h = frame.height
    );
    let _ = writeln!(out, "<!-- {} {} {} -->", bundle.tool, bundle.version, bundle.command);
    if empty {
        out.push_str("<!-- warning: bundle has no regions, points or grid; drawing axes only -->\n");
    }
    let _ = writeln!(
        out,
        "<rect class=\"canvas\" width=\"{}\" height=\"{}\" fill=\"white\"/>",
        frame.width, frame.height
    );

    out.push_str("<g class=\"axes\" stroke=\"#888\" stroke-width=\"0.5\">\n");
    if view.ymin <= 0.0 && view.ymax >= 0.0 {
        let (_, y) = frame.px(Complex64::new(0.0, 0.0));
        let _ = writeln!(out, "<line x1=\"0.00\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\"/>", num(frame.width as f64));
    }
    if view.xmin <= 0.0 && view.xmax >= 0.0 {
        let (x, _) = frame.px(Complex64::new(0.0, 0.0));
        let _ = writeln!(out, "<line x1=\"{x}\" y1=\"0.00\" x2=\"{x}\" y2=\"{}\"/>", num(frame.height as f64));
    }
    out.push_str("</g>\n");

    for (k, region) in &regions {
        let tag = &bundle.regions[*k].tag;
        region_layer(&mut out, &frame, tag, PALETTE[k % PALETTE.len()], region, opts.cells);
    }
    if let Some(g) = &bundle.grid {
        mask_layer(&mut out, &frame, g, &g.in_best, "mask-best", "#2ca02c");
        mask_layer(&mut out, &frame, g, &g.in_neumann, "mask-neumann", "#9467bd");
    }
    for c in &bundle.clouds {
        let _ = writeln!(out, "<g class=\"cloud\" data-tag=\"{}\" fill=\"#555\">", c.tag);
        for z in c.points.iter().filter(|z| view.contains(**z)) {
            let (x, y) = frame.px(*z);
            let _ = writeln!(out, "<circle class=\"cloud-point\" cx=\"{x}\" cy=\"{y}\" r=\"0.8\"/>");
        }
        out.push_str("</g>\n");
    }
    out.push_str("<g class=\"eigenvalues\" fill=\"black\">\n");
    for z in bundle.eigenvalues.iter().filter(|z| view.contains(**z)) {
        let (x, y) = frame.px(*z);
        let _ = writeln!(out, "<circle class=\"eigenvalue\" cx=\"{x}\" cy=\"{y}\" r=\"3\"/>");
    }
    out.push_str("</g>\n</svg>\n");
    out
}
