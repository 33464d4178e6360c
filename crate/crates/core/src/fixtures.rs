//! Named geolaminations used by tests, benches and the command line.

use crate::chords::{image, Chord};
use crate::circle::Angle;
use crate::error::Result;
use crate::geolam::{
    from_equivalence, pullback_construct, ChoicePolicy, CriticalPortrait, Geolamination, Script,
};

fn ang(s: &str) -> Angle {
    s.parse().expect("fixture angle")
}

fn ch(s: &str) -> Chord {
    s.parse().expect("fixture chord")
}

fn angles(xs: &[&str]) -> Vec<Angle> {
    xs.iter().map(|s| ang(s)).collect()
}

pub fn basilica_portrait() -> CriticalPortrait {
    CriticalPortrait::polygon(angles(&["1/6", "1/3", "2/3", "5/6"]), false)
}

pub fn rabbit_portrait() -> CriticalPortrait {
    CriticalPortrait::polygon(angles(&["1/14", "1/7", "4/7", "9/14"]), false)
}

pub fn airplane_portrait() -> CriticalPortrait {
    CriticalPortrait::polygon(angles(&["3/14", "2/7", "5/7", "11/14"]), false)
}

pub fn basilica_classes() -> Vec<Vec<Angle>> {
    vec![angles(&["1/3", "2/3"])]
}

pub fn rabbit_classes() -> Vec<Vec<Angle>> {
    vec![angles(&["1/7", "2/7", "4/7"])]
}

pub fn airplane_classes() -> Vec<Vec<Angle>> {
    vec![angles(&["3/7", "4/7"])]
}

pub fn basilica(depth: usize) -> Result<Geolamination> {
    pullback_construct(2, &basilica_portrait(), depth, &ChoicePolicy::Canonical)
}

pub fn rabbit(depth: usize) -> Result<Geolamination> {
    pullback_construct(2, &rabbit_portrait(), depth, &ChoicePolicy::Canonical)
}

pub fn airplane(depth: usize) -> Result<Geolamination> {
    pullback_construct(2, &airplane_portrait(), depth, &ChoicePolicy::Canonical)
}

pub fn basilica_from_classes(depth: usize) -> Result<Geolamination> {
    from_equivalence(2, &basilica_classes(), depth)
}

pub fn rabbit_from_classes(depth: usize) -> Result<Geolamination> {
    from_equivalence(2, &rabbit_classes(), depth)
}

pub fn diameter_portrait() -> CriticalPortrait {
    CriticalPortrait::leaf(ch("0 1/2"))
}

/// The caterpillar lamination pulled back from the critical diameter {0,1/2}.
pub fn l12(depth: usize) -> Result<Geolamination> {
    pullback_construct(2, &diameter_portrait(), depth, &ChoicePolicy::Canonical)
}

/// The diameter {0,1/2} pulled back to all four chords of the square
/// {0,1/4,1/2,3/4}.
pub fn l12_fan(depth: usize) -> Result<Geolamination> {
    let script = Script::new().with(
        ch("0 1/2"),
        ["0 1/4", "1/4 1/2", "1/2 3/4", "0 3/4"].map(ch).to_vec(),
    );
    pullback_construct(2, &diameter_portrait(), depth, &ChoicePolicy::Scripted(script))
}

/// `l12_fan` without the leaves whose forward orbit meets {1/2,3/4}. Thurston
/// invariant but not sibling invariant: {0,1/4} loses its sibling.
pub fn l12_amended(depth: usize) -> Result<Geolamination> {
    let fan = l12_fan(depth)?;
    let bad = ch("1/2 3/4");
    let hits = |c: &Chord| {
        let mut cur = c.clone();
        for _ in 0..=fan.len() {
            if cur == bad {
                return true;
            }
            if cur.is_degenerate() {
                return false;
            }
            cur = image(2, &cur).expect("degree 2");
        }
        false
    };
    Ok(fan.filtered(|c| !hits(c)))
}

/// A critical diameter flagged as Siegel. Exact rational diameters only
/// approximate a true Siegel diameter; the flag records the construction.
pub fn siegel_diameter() -> Chord {
    ch("37/256 165/256")
}

pub fn siegel(depth: usize) -> Result<Geolamination> {
    let mut p = CriticalPortrait::leaf(siegel_diameter());
    p.siegel = true;
    pullback_construct(2, &p, depth, &ChoicePolicy::Canonical)
}
