use super::Geolamination;
use crate::chords::Chord;

type Point = (f64, f64);

fn on_circle(c: &Chord) -> (Point, Point) {
    let pt = |t: f64| {
        let a = std::f64::consts::TAU * t;
        (a.cos(), a.sin())
    };
    (pt(c.p().to_f64()), pt(c.q().to_f64()))
}

fn segment_distance(x: Point, (a, b): (Point, Point)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((x.0 - a.0) * dx + (x.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (px, py) = (a.0 + t * dx, a.1 + t * dy);
    ((x.0 - px).powi(2) + (x.1 - py).powi(2)).sqrt()
}

fn one_sided(a: &Geolamination, b: &Geolamination, samples: usize) -> f64 {
    let segs: Vec<(Point, Point)> = b.leaves().iter().map(on_circle).collect();
    let steps = samples.max(1);
    let mut worst: f64 = 0.0;
    for leaf in a.leaves().iter().filter(|c| !b.contains(c)) {
        let (s, e) = on_circle(leaf);
        for k in 0..=steps {
            let t = k as f64 / steps as f64;
            let x = (s.0 + t * (e.0 - s.0), s.1 + t * (e.1 - s.1));
            let mut best = 1.0 - (x.0 * x.0 + x.1 * x.1).sqrt();
            for seg in &segs {
                best = best.min(segment_distance(x, *seg));
            }
            worst = worst.max(best);
        }
    }
    worst
}

/// Approximate Hausdorff distance between the solids (leaves plus the
/// circle), sampling `samples` subdivisions along each unshared leaf.
pub fn hausdorff_distance(a: &Geolamination, b: &Geolamination, samples: usize) -> f64 {
    if a.leaves() == b.leaves() {
        return 0.0;
    }
    one_sided(a, b, samples).max(one_sided(b, a, samples))
}
