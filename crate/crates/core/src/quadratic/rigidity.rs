//! Sufficient conditions for a leaf or gap to persist in nearby
//! q-geolaminations.

use serde::{Deserialize, Serialize};

use crate::chords::{image_unchecked, is_critical_unchecked, Chord};
use crate::circle::Angle;
use crate::gaps::{classify_gap, gap_image, gap_period, gaps_of, Gap, GapImage, GapKind, GapSet, Location};
use crate::geolam::Geolamination;

const ORBIT_BOUND: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RigidityTarget {
    Leaf(Chord),
    /// A gap named by its vertices (or any points that locate it).
    Gap(Vec<Angle>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RigidityVerdict {
    Rigid,
    NotRigid,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityCertificate {
    pub verdict: RigidityVerdict,
    /// Set whenever the verdict is not `Unknown`.
    pub rule: Option<String>,
    pub witness: Option<String>,
}

impl RigidityCertificate {
    fn fired(verdict: RigidityVerdict, rule: &str, witness: String) -> RigidityCertificate {
        RigidityCertificate {
            verdict,
            rule: Some(rule.to_string()),
            witness: Some(witness),
        }
    }

    fn unknown(why: impl Into<String>) -> RigidityCertificate {
        RigidityCertificate {
            verdict: RigidityVerdict::Unknown,
            rule: None,
            witness: Some(why.into()),
        }
    }
}

pub const ISOLATED_PERIODIC_LEAF: &str = "isolated-periodic-leaf";
pub const EVENTUALLY_PERIODIC_GAP: &str = "eventually-periodic-gap";
pub const FATOU_WITHOUT_CRITICAL_EDGES: &str = "fatou-without-critical-edges";
pub const PULLBACK_OF_RIGID_LEAF: &str = "pullback-of-rigid-leaf";
pub const SIEGEL_GAP: &str = "siegel-gap";

pub fn rigidity_certificate(l: &Geolamination, target: &RigidityTarget) -> RigidityCertificate {
    let gs = match gaps_of(l) {
        Ok(gs) => gs,
        Err(e) => return RigidityCertificate::unknown(e.to_string()),
    };
    match target {
        RigidityTarget::Leaf(c) => {
            if !l.contains(c) {
                return RigidityCertificate::unknown(format!("{c} is not a leaf"));
            }
            leaf_certificate(l, &gs, c)
        }
        RigidityTarget::Gap(points) => match gs.locate(points) {
            Location::Gap(id) => gap_certificate(l, &gs, gs.gap(id)),
            other => RigidityCertificate::unknown(format!("points locate {other:?}, not a gap")),
        },
    }
}

/// Faces adjacent to `c` that are not truncation artifacts.
fn sides<'a>(gs: &'a GapSet, c: &Chord) -> impl Iterator<Item = &'a Gap> + 'a {
    let c = c.clone();
    gs.gaps()
        .iter()
        .filter(move |g| !g.frontier_exempt && g.edges.contains(&c))
}

fn chord_orbit_is_periodic(c: &Chord) -> bool {
    let mut cur = c.clone();
    for _ in 0..ORBIT_BOUND {
        cur = image_unchecked(2, &cur);
        if cur.is_degenerate() {
            return false;
        }
        if cur == *c {
            return true;
        }
    }
    false
}

fn iterate_gap(gs: &GapSet, id: usize, steps: usize) -> Option<usize> {
    let mut cur = id;
    for _ in 0..steps {
        match gap_image(gs, gs.gap(cur)).ok()? {
            GapImage::Gap(n) => cur = n,
            _ => return None,
        }
    }
    Some(cur)
}

fn isolated_periodic(gs: &GapSet, c: &Chord) -> bool {
    chord_orbit_is_periodic(c)
        && sides(gs, c).all(|g| !matches!(gap_period(gs, g, ORBIT_BOUND), Ok(Some(_))))
}

/// `c` is an edge of a gap `G` whose image `σᵐ(G)` is periodic and has the
/// periodic leaf `σᵐ(c)` as an edge.
fn edge_of_eventually_periodic_gap(gs: &GapSet, c: &Chord) -> Option<String> {
    for g in sides(gs, c) {
        let Ok(Some((m, _))) = gap_period(gs, g, ORBIT_BOUND) else {
            continue;
        };
        let h = iterate_gap(gs, g.id, m)?;
        let mut img = c.clone();
        for _ in 0..m {
            img = image_unchecked(2, &img);
        }
        if gs.gap(h).edges.contains(&img) && chord_orbit_is_periodic(&img) {
            return Some(format!("edge of gap {} reaching periodic gap {h} along {img}", g.id));
        }
    }
    None
}

fn in_collapsing_polygon(gs: &GapSet, c: &Chord) -> bool {
    is_critical_unchecked(2, c)
        || gs.gaps().iter().any(|g| {
            g.is_finite()
                && g.edges.contains(c)
                && matches!(gap_image(gs, g), Ok(GapImage::Leaf(_) | GapImage::Point(_)))
        })
}

fn leaf_certificate(l: &Geolamination, gs: &GapSet, c: &Chord) -> RigidityCertificate {
    use RigidityVerdict::Rigid;
    if isolated_periodic(gs, c) {
        return RigidityCertificate::fired(Rigid, ISOLATED_PERIODIC_LEAF, c.to_string());
    }
    if let Some(w) = edge_of_eventually_periodic_gap(gs, c) {
        return RigidityCertificate::fired(Rigid, EVENTUALLY_PERIODIC_GAP, w);
    }
    let mut path = vec![c.clone()];
    for k in 1..ORBIT_BOUND {
        let img = image_unchecked(2, path.last().expect("non-empty"));
        if img.is_degenerate() || !l.contains(&img) || path.contains(&img) {
            break;
        }
        if path.iter().any(|x| in_collapsing_polygon(gs, x)) {
            break;
        }
        if isolated_periodic(gs, &img) || edge_of_eventually_periodic_gap(gs, &img).is_some() {
            return RigidityCertificate::fired(
                Rigid,
                PULLBACK_OF_RIGID_LEAF,
                format!("maps to the rigid leaf {img} after {k} steps"),
            );
        }
        path.push(img);
    }
    RigidityCertificate::unknown("no sufficient condition applies")
}

fn gap_certificate(l: &Geolamination, gs: &GapSet, g: &Gap) -> RigidityCertificate {
    use RigidityVerdict::{NotRigid, Rigid};
    let orbit = gap_period(gs, g, ORBIT_BOUND).ok().flatten();
    if g.is_finite() {
        if let Some((m, k)) = orbit {
            return RigidityCertificate::fired(
                Rigid,
                EVENTUALLY_PERIODIC_GAP,
                format!("preperiod {m}, period {k}"),
            );
        }
    }
    let class = match classify_gap(l, gs, g) {
        Ok(class) => class,
        Err(e) => return RigidityCertificate::unknown(e.to_string()),
    };
    match (class.kind, orbit) {
        (GapKind::Fatou { degree }, Some((0, k))) => {
            let critical_edge = (0..k)
                .filter_map(|i| iterate_gap(gs, g.id, i))
                .flat_map(|id| gs.gap(id).edges.iter())
                .find(|e| is_critical_unchecked(2, e));
            match critical_edge {
                None => RigidityCertificate::fired(
                    Rigid,
                    FATOU_WITHOUT_CRITICAL_EDGES,
                    format!("period {k}, degree {degree}"),
                ),
                Some(e) => RigidityCertificate::unknown(format!("critical edge {e} on the orbit")),
            }
        }
        (GapKind::Siegel, _) => {
            RigidityCertificate::fired(NotRigid, SIEGEL_GAP, "built from a Siegel diameter".into())
        }
        (kind, _) => RigidityCertificate::unknown(format!("gap kind {kind:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::{critical_set, lamination_from_minor};

    #[test]
    fn basilica_minor_is_an_edge_of_a_periodic_gap() {
        let l = lamination_from_minor(&"1/3 2/3".parse().unwrap(), 5).unwrap();
        let cert = rigidity_certificate(&l, &RigidityTarget::Leaf("1/3 2/3".parse().unwrap()));
        assert_eq!(cert.verdict, RigidityVerdict::Rigid);
        assert_eq!(cert.rule.as_deref(), Some(EVENTUALLY_PERIODIC_GAP));
    }

    #[test]
    fn basilica_critical_gap_has_no_critical_edges() {
        let l = lamination_from_minor(&"1/3 2/3".parse().unwrap(), 5).unwrap();
        let u = critical_set(&l).unwrap().vertices();
        let cert = rigidity_certificate(&l, &RigidityTarget::Gap(u));
        assert_eq!(cert.verdict, RigidityVerdict::Rigid);
        assert_eq!(cert.rule.as_deref(), Some(FATOU_WITHOUT_CRITICAL_EDGES));
    }

    #[test]
    fn missing_leaf_is_unknown() {
        let l = lamination_from_minor(&"1/3 2/3".parse().unwrap(), 3).unwrap();
        let cert = rigidity_certificate(&l, &RigidityTarget::Leaf("1/5 2/5".parse().unwrap()));
        assert_eq!(cert.verdict, RigidityVerdict::Unknown);
        assert!(cert.rule.is_none());
    }
}
