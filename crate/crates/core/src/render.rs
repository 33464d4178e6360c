//! SVG pictures of geolaminations: the unit circle with each leaf drawn as a
//! straight segment, or optionally as a hyperbolic geodesic.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::chords::Chord;
use crate::error::{Error, Result};
use crate::geolam::Geolamination;

pub const MIN_SIZE: u32 = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RenderOptions {
    /// Draw leaves as arcs orthogonal to the circle instead of segments.
    pub geodesic: bool,
}

struct Frame {
    center: f64,
    radius: f64,
}

impl Frame {
    fn point(&self, t: f64) -> (f64, f64) {
        let a = TAU * t;
        (self.center + self.radius * a.cos(), self.center - self.radius * a.sin())
    }
}

// Fixed precision keeps output byte-identical across runs.
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn leaf_element(f: &Frame, c: &Chord, geodesic: bool) -> String {
    let (s, e) = (c.p().to_f64(), c.q().to_f64());
    let (x1, y1) = f.point(s);
    let (x2, y2) = f.point(e);
    let half_angle = TAU * (e - s).min(1.0 - (e - s)) / 2.0;
    let straight = !geodesic || (half_angle - TAU / 4.0).abs() < 1e-12;
    if straight {
        return format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        );
    }
    // The orthogonal circle through both points has radius tan(θ/2) in
    // units of the disk radius, where θ is the angle between them.
    let r = f.radius * half_angle.tan();
    let (sx, sy) = ((s * TAU).cos(), (s * TAU).sin());
    let (ex, ey) = ((e * TAU).cos(), (e * TAU).sin());
    let cross = sx * ey - sy * ex;
    let sweep = if cross > 0.0 { 0 } else { 1 };
    format!(
        "<path d=\"M {} {} A {} {} 0 0 {sweep} {} {}\"/>",
        num(x1),
        num(y1),
        num(r),
        num(r),
        num(x2),
        num(y2)
    )
}

pub fn render_svg(l: &Geolamination, size: u32, opts: RenderOptions) -> Result<String> {
    if size < MIN_SIZE {
        return Err(Error::InvalidInput(format!("size {size} is below {MIN_SIZE}")));
    }
    let s = f64::from(size);
    let f = Frame {
        center: s / 2.0,
        radius: s / 2.0 - 2.0,
    };
    let stroke = (s / 512.0).max(0.5);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(
        out,
        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\"/>",
        num(f.center),
        num(f.center),
        num(f.radius),
        num(stroke)
    );
    let _ = writeln!(
        out,
        "<g fill=\"none\" stroke=\"black\" stroke-width=\"{}\">",
        num(stroke)
    );
    for c in l.leaves() {
        let _ = writeln!(out, "{}", leaf_element(&f, c, opts.geodesic));
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
