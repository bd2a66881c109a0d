//! SVG drawings of planar unit spheres with marked points.

use std::fmt::Write;

use anyhow::{bail, Result};
use bjorth::{NormSpec, Tolerances, Vector};

/// Segments of the sphere polyline.
pub const SEGMENTS: usize = 256;

const SIZE: f64 = 400.0;
const SCALE: f64 = 120.0;

/// A labelled point. With `support` set, the drawing also shows the level
/// line `f = |f|_*` of a supporting functional at the point and its kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct Mark {
    pub label: String,
    pub point: Vector,
    pub ray: bool,
    pub support: bool,
}

impl Mark {
    pub fn ray(label: &str, coords: [f64; 2]) -> Self {
        Self { label: label.into(), point: Vector::new(coords.to_vec()).expect("finite"), ray: true, support: false }
    }

    pub fn dot(label: &str, coords: [f64; 2]) -> Self {
        Self { ray: false, ..Self::ray(label, coords) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallFigure {
    pub space: NormSpec,
    pub marks: Vec<Mark>,
}

impl BallFigure {
    /// The configuration of the max-norm plane with `x = (1, 0)`, `y = (0, 1)`,
    /// `-y`, `z = (1, 1)` and the supporting functional at `x`.
    pub fn figure_one() -> Self {
        let mut x = Mark::ray("x", [1.0, 0.0]);
        x.support = true;
        Self {
            space: NormSpec::l_inf(2).expect("dimension 2"),
            marks: vec![x, Mark::ray("y", [0.0, 1.0]), Mark::dot("-y", [0.0, -1.0]), Mark::ray("z", [1.0, 1.0])],
        }
    }
}

/// Vertices of the unit sphere: `SEGMENTS` equally spaced directions, each
/// rescaled to norm one.
pub fn sphere_vertices(space: &NormSpec) -> Vec<[f64; 2]> {
    (0..SEGMENTS)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / SEGMENTS as f64;
            let d = Vector::new(vec![t.cos(), t.sin()]).expect("finite");
            let u = space.normalize(&d).expect("nonzero");
            [u[0], u[1]]
        })
        .collect()
}

fn num(v: f64) -> String {
    let s = format!("{v:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".into(),
        s => s.into(),
    }
}

fn slug(label: &str) -> String {
    label.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

fn escape(label: &str) -> String {
    label.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the figure. Geometry is written in model coordinates inside a
/// flipped, scaled group, so polyline vertices are the sphere points themselves.
pub fn plot_ball(fig: &BallFigure, tol: &Tolerances) -> Result<String> {
    if fig.space.dim() != 2 {
        bail!("plot ball needs a planar space, got dimension {}", fig.space.dim());
    }
    for m in &fig.marks {
        fig.space.check_dim(&m.point)?;
    }
    let mut reach: f64 = 1.0;
    for m in &fig.marks {
        reach = reach.max(m.point[0].abs()).max(m.point[1].abs());
    }
    for v in sphere_vertices(&fig.space) {
        reach = reach.max(v[0].abs()).max(v[1].abs());
    }
    let extent = reach * 1.5;
    let scale = SCALE * 1.5 / extent;

    let mut out = String::new();
    let c = SIZE / 2.0;
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#)?;
    writeln!(out, "<title>Unit sphere of {}</title>", escape(&fig.space.describe()))?;
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(out, r#"<g id="model" transform="translate({c},{c}) scale({},{})">"#, num(scale), num(-scale))?;
    writeln!(
        out,
        r#"<line id="axis-h" x1="{}" y1="0" x2="{}" y2="0" stroke="gray" stroke-dasharray="4 3" vector-effect="non-scaling-stroke"/>"#,
        num(-extent),
        num(extent)
    )?;
    let pts: Vec<String> = sphere_vertices(&fig.space).iter().map(|v| format!("{},{}", num(v[0]), num(v[1]))).collect();
    writeln!(
        out,
        r#"<polygon id="sphere" points="{}" fill="none" stroke="black" stroke-width="2" vector-effect="non-scaling-stroke"/>"#,
        pts.join(" ")
    )?;

    let mut labels = Vec::new();
    for m in &fig.marks {
        let (px, py) = (m.point[0], m.point[1]);
        let id = slug(&m.label);
        if m.ray {
            writeln!(
                out,
                r#"<line id="ray-{id}" x1="0" y1="0" x2="{}" y2="{}" stroke="steelblue" stroke-dasharray="6 4" vector-effect="non-scaling-stroke"/>"#,
                num(px),
                num(py)
            )?;
        }
        writeln!(out, r#"<circle id="point-{id}" cx="{}" cy="{}" r="{}" fill="black"/>"#, num(px), num(py), num(4.0 / scale))?;
        labels.push((m.label.clone(), px, py));
        if m.support {
            let support = fig.space.dual_vertices(&m.point, tol)?;
            let f = &support.vertices[0].coords;
            let n = (f[0] * f[0] + f[1] * f[1]).sqrt();
            let (dx, dy) = (-f[1] / n * extent, f[0] / n * extent);
            writeln!(
                out,
                r#"<line id="line-f_{id}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="red" stroke-dasharray="6 4" vector-effect="non-scaling-stroke"/>"#,
                num(px - dx),
                num(py - dy),
                num(px + dx),
                num(py + dy)
            )?;
            writeln!(
                out,
                r#"<line id="line-ker-f_{id}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="red" stroke-dasharray="6 4" vector-effect="non-scaling-stroke"/>"#,
                num(-dx),
                num(-dy),
                num(dx),
                num(dy)
            )?;
            labels.push((format!("f_{}", m.label), px - 0.8 * dx, py - 0.8 * dy));
            labels.push((format!("ker f_{}", m.label), -0.9 * dx, -0.9 * dy));
        }
    }
    writeln!(out, "</g>")?;
    for (label, x, y) in labels {
        writeln!(
            out,
            r#"<text id="label-{}" x="{}" y="{}" font-family="serif" font-size="16">{}</text>"#,
            slug(&label),
            num(c + x * scale + 6.0),
            num(c - y * scale - 6.0),
            escape(&label)
        )?;
    }
    writeln!(out, "</svg>")?;
    Ok(out)
}

/// Polyline vertices read back from a rendered SVG.
pub fn parse_sphere_points(svg: &str) -> Option<Vec<[f64; 2]>> {
    let start = svg.find(r#"id="sphere" points=""#)? + r#"id="sphere" points=""#.len();
    let end = start + svg[start..].find('"')?;
    svg[start..end]
        .split_whitespace()
        .map(|p| {
            let (a, b) = p.split_once(',')?;
            Some([a.parse().ok()?, b.parse().ok()?])
        })
        .collect()
}
