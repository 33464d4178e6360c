//! The quadratic case: majors and minors, the minor lamination, limit
//! geolaminations, minor equivalence, Siegel sets and rigidity.

mod limits;
mod quotient;
mod rigidity;
mod siegel;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::chords::{chord_length, image_unchecked, is_critical_unchecked, linked, Chord};
use crate::circle::{arc_length, period_of, Angle};
use crate::error::{Error, Result};
use crate::gaps::{boundary_degree, gap_period, gaps_of, Gap};
use crate::geolam::{
    hull_edges, is_sibling_invariant, pullback_construct, ChoicePolicy, CriticalPortrait,
    Geolamination,
};

pub use limits::limit_geolaminations;
pub use quotient::{minor_quotient, minors_intersect, psi, MinorEquivClass};
pub use rigidity::{rigidity_certificate, RigidityCertificate, RigidityTarget, RigidityVerdict};
pub use siegel::{siegel_set, SiegelSample};

const D: u32 = 2;

/// The two longest leaves and their common image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajorPair {
    pub major: Chord,
    pub sibling: Chord,
    /// Degenerate when the longest leaf is a critical diameter.
    pub minor: Chord,
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

fn third() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(3))
}

fn is_periodic_chord(c: &Chord) -> bool {
    period_of(D, c.p()).is_some() && period_of(D, c.q()).is_some()
}

pub fn majors_and_minor(l: &Geolamination) -> Result<MajorPair> {
    let longest = l
        .leaves()
        .iter()
        .map(chord_length)
        .max()
        .ok_or(Error::EmptyLamination)?;
    let tops: Vec<Chord> = l
        .leaves()
        .iter()
        .filter(|c| chord_length(c) == longest)
        .cloned()
        .collect();
    if longest == half() {
        return match tops.as_slice() {
            [c] => Ok(MajorPair {
                major: c.clone(),
                sibling: c.clone(),
                minor: Chord::point(c.p().times(D)),
            }),
            _ => Err(Error::InconsistentMajors(tops)),
        };
    }
    match tops.as_slice() {
        [a, b] if a.disjoint(b) && image_unchecked(D, a) == image_unchecked(D, b) => {
            let (major, sibling) = if !is_periodic_chord(a) && is_periodic_chord(b) {
                (b.clone(), a.clone())
            } else {
                (a.clone(), b.clone())
            };
            let minor = image_unchecked(D, &major);
            Ok(MajorPair {
                major,
                sibling,
                minor,
            })
        }
        _ => Err(Error::InconsistentMajors(tops)),
    }
}

/// The critical set of a quadratic geolamination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CriticalSet {
    Leaf { leaf: Chord },
    /// A finite gap mapped two-to-one onto its image.
    Polygon { vertices: Vec<Angle> },
    /// A gap whose boundary wraps at least twice around its image.
    Gap {
        vertices: Vec<Angle>,
        period: Option<usize>,
        degree: usize,
    },
}

impl CriticalSet {
    pub fn vertices(&self) -> Vec<Angle> {
        match self {
            CriticalSet::Leaf { leaf } => vec![leaf.p().clone(), leaf.q().clone()],
            CriticalSet::Polygon { vertices } | CriticalSet::Gap { vertices, .. } => {
                vertices.clone()
            }
        }
    }
}

fn winding(d: u32, g: &Gap) -> usize {
    let imgs: Vec<Angle> = g.vertices.iter().map(|v| v.times(d)).collect();
    let k = imgs.len();
    let total: BigRational = (0..k).map(|i| arc_length(&imgs[i], &imgs[(i + 1) % k])).sum();
    total.to_integer().to_usize().unwrap_or(0)
}

/// Order: a unique critical leaf, then a two-to-one finite gap, then a gap
/// whose boundary winds at least twice.
pub fn critical_set(l: &Geolamination) -> Result<CriticalSet> {
    let crit: Vec<&Chord> = l.leaves().iter().filter(|c| is_critical_unchecked(D, c)).collect();
    match crit.as_slice() {
        [c] => return Ok(CriticalSet::Leaf { leaf: (*c).clone() }),
        [] => {}
        _ => return Err(Error::UndeterminedCritical),
    }
    let gs = gaps_of(l)?;
    for g in gs.gaps() {
        if g.is_finite() {
            let mut img: Vec<Angle> = g.vertices.iter().map(|v| v.times(D)).collect();
            img.sort();
            img.dedup();
            if 2 * img.len() == g.vertices.len() {
                return Ok(CriticalSet::Polygon {
                    vertices: g.vertices.clone(),
                });
            }
        }
    }
    for g in gs.gaps() {
        if g.is_whole_disk() || g.is_finite() || winding(D, g) < 2 {
            continue;
        }
        let period = match gap_period(&gs, g, 4096)? {
            Some((0, k)) => Some(k),
            _ => None,
        };
        let degree = match period {
            Some(k) => boundary_degree(&gs, g, k)?,
            None => winding(D, g),
        };
        return Ok(CriticalSet::Gap {
            vertices: g.vertices.clone(),
            period,
            degree,
        });
    }
    Err(Error::UndeterminedCritical)
}

pub fn is_hyperbolic(l: &Geolamination) -> bool {
    matches!(
        critical_set(l),
        Ok(CriticalSet::Gap {
            period: Some(_),
            degree: 2,
            ..
        })
    )
}

/// The orbit of `m` up to the common period of its endpoints consists of
/// pairwise disjoint chords.
pub fn is_fixed_return(m: &Chord) -> Result<bool> {
    let (Some(a), Some(b)) = (period_of(D, m.p()), period_of(D, m.q())) else {
        return Err(Error::NotPeriodic);
    };
    if a != b || m.is_degenerate() {
        return Err(Error::NotPeriodic);
    }
    let mut orbit = vec![m.clone()];
    for _ in 1..a {
        let next = image_unchecked(D, orbit.last().expect("non-empty"));
        orbit.push(next);
    }
    Ok(orbit
        .iter()
        .enumerate()
        .all(|(i, x)| orbit[i + 1..].iter().all(|y| x.disjoint(y))))
}

/// σ₂⁻¹(m): the critical leaf over a point, or the quadrilateral over a chord.
pub fn critical_portrait_of_minor(m: &Chord) -> CriticalPortrait {
    if m.is_degenerate() {
        let pre = m.p().preimages(D);
        return CriticalPortrait::leaf(Chord::new(pre[0].clone(), pre[1].clone()));
    }
    let mut quad = m.p().preimages(D);
    quad.extend(m.q().preimages(D));
    CriticalPortrait::polygon(quad, !is_periodic_chord(m))
}

/// The q-geolamination with minor `m`, by canonical pullback of σ₂⁻¹(m).
pub fn lamination_from_minor(m: &Chord, depth: usize) -> Result<Geolamination> {
    if m.is_degenerate() {
        return pullback_construct(D, &critical_portrait_of_minor(m), depth, &ChoicePolicy::Canonical);
    }
    match qml_check(m, depth) {
        QmlCheck::Accepted(l) => Ok(l),
        QmlCheck::Rejected(_) => Err(Error::NotAMinor(m.clone())),
    }
}

enum QmlCheck {
    Accepted(Geolamination),
    Rejected(String),
}

/// Membership in the minor lamination, with the reason for a rejection.
pub fn qml_leaf_verdict(m: &Chord, depth: usize) -> std::result::Result<(), String> {
    match qml_check(m, depth) {
        QmlCheck::Accepted(_) => Ok(()),
        QmlCheck::Rejected(why) => Err(why),
    }
}

pub fn is_qml_leaf(m: &Chord, depth: usize) -> bool {
    qml_leaf_verdict(m, depth).is_ok()
}

fn qml_check(m: &Chord, depth: usize) -> QmlCheck {
    use QmlCheck::Rejected;
    if m.is_degenerate() {
        return Rejected("degenerate chord".into());
    }
    let len = chord_length(m);
    if len > third() {
        return Rejected("longer than 1/3".into());
    }
    match (period_of(D, m.p()), period_of(D, m.q())) {
        (Some(a), Some(b)) if a != b => return Rejected("endpoint periods differ".into()),
        (Some(_), None) | (None, Some(_)) => {
            return Rejected("one endpoint periodic, the other not".into())
        }
        _ => {}
    }
    let mut orbit: Vec<Chord> = Vec::new();
    let mut seen: BTreeSet<Chord> = BTreeSet::new();
    seen.insert(m.clone());
    let mut cur = image_unchecked(D, m);
    while !seen.contains(&cur) {
        if cur.is_degenerate() {
            return Rejected(format!("forward image collapses after {}", orbit.len() + 1));
        }
        if linked(&cur, m) {
            return Rejected(format!("forward image {cur:?} crosses the chord"));
        }
        if chord_length(&cur) < len {
            return Rejected(format!("forward image {cur:?} is shorter"));
        }
        if let Some(o) = orbit.iter().find(|o| linked(o, &cur)) {
            return Rejected(format!("forward images {o:?} and {cur:?} cross"));
        }
        seen.insert(cur.clone());
        orbit.push(cur.clone());
        cur = image_unchecked(D, &cur);
    }
    let portrait = critical_portrait_of_minor(m);
    let quad = portrait.members[0].vertices();
    for e in hull_edges(&quad) {
        if let Some(o) = orbit.iter().find(|o| linked(o, &e)) {
            return Rejected(format!("forward image {o:?} crosses the critical quadrilateral"));
        }
    }
    let l = match pullback_construct(D, &portrait, depth, &ChoicePolicy::Canonical) {
        Ok(l) => l,
        Err(e) => return Rejected(format!("pullback failed: {e}")),
    };
    if !is_sibling_invariant(&l).passed() {
        return Rejected("pullback is not sibling invariant".into());
    }
    match majors_and_minor(&l) {
        Ok(mp) if mp.minor == *m => QmlCheck::Accepted(l),
        Ok(mp) => Rejected(format!("pullback has minor {:?}", mp.minor)),
        Err(e) => Rejected(format!("no minor: {e}")),
    }
}

/// Minor-lamination leaves with periodic endpoints of period at most
/// `max_period`, plus the periodic points that are classes on their own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QmlApprox {
    pub max_period: usize,
    pub leaves: BTreeSet<Chord>,
    pub points: BTreeSet<Angle>,
}

impl QmlApprox {
    /// The class containing `a`: the endpoints of the connected union of
    /// leaves through `a`, or `{a}` for a recorded point.
    pub fn class_of(&self, a: &Angle) -> Option<Vec<Angle>> {
        if self.points.contains(a) {
            return Some(vec![a.clone()]);
        }
        let mut class: BTreeSet<Angle> = BTreeSet::new();
        let mut frontier = vec![a.clone()];
        while let Some(x) = frontier.pop() {
            if !class.insert(x.clone()) {
                continue;
            }
            for leaf in self.leaves.iter().filter(|c| c.has_endpoint(&x)) {
                frontier.push(leaf.other(&x).expect("endpoint").clone());
            }
        }
        (class.len() > 1).then(|| class.into_iter().collect())
    }
}

/// Angles of exact period `n` under doubling.
pub fn angles_of_period(n: usize) -> Vec<Angle> {
    let q: BigInt = (BigInt::from(1) << n) - 1;
    let count = q.to_u64().expect("period fits in u64");
    (0..count)
        .map(|k| Angle::from_ratio(BigRational::new(BigInt::from(k), q.clone())))
        .filter(|a| period_of(D, a) == Some(n))
        .collect()
}

pub fn qml_approx(max_period: usize, depth: usize) -> QmlApprox {
    qml_approx_jobs(max_period, depth, 1)
}

/// `qml_approx` with candidate verification spread over `jobs` threads.
pub fn qml_approx_jobs(max_period: usize, depth: usize, jobs: usize) -> QmlApprox {
    let mut candidates = Vec::new();
    let mut periodic = Vec::new();
    for n in 1..=max_period {
        let angles = angles_of_period(n);
        for (i, a) in angles.iter().enumerate() {
            for b in &angles[i + 1..] {
                let c = Chord::new(a.clone(), b.clone());
                if chord_length(&c) <= third() {
                    candidates.push(c);
                }
            }
        }
        periodic.extend(angles);
    }
    let jobs = jobs.clamp(1, candidates.len().max(1));
    let chunk = candidates.len().div_ceil(jobs).max(1);
    let leaves: BTreeSet<Chord> = std::thread::scope(|scope| {
        let handles: Vec<_> = candidates
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .filter(|c| is_qml_leaf(c, depth))
                        .cloned()
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification thread panicked"))
            .collect()
    });
    let points = periodic
        .into_iter()
        .filter(|a| !leaves.iter().any(|c| c.has_endpoint(a)))
        .collect();
    QmlApprox {
        max_period,
        leaves,
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geolam::verify_unlinked;

    fn ch(s: &str) -> Chord {
        s.parse().unwrap()
    }

    #[test]
    fn basilica_majors() {
        let l = lamination_from_minor(&ch("1/3 2/3"), 4).unwrap();
        let mp = majors_and_minor(&l).unwrap();
        assert_eq!(mp.major, ch("1/3 2/3"));
        assert_eq!(mp.sibling, ch("1/6 5/6"));
        assert_eq!(mp.minor, ch("1/3 2/3"));
        assert!(is_hyperbolic(&l));
    }

    #[test]
    fn rabbit_majors() {
        let l = lamination_from_minor(&ch("1/7 2/7"), 4).unwrap();
        let mp = majors_and_minor(&l).unwrap();
        let pair: BTreeSet<Chord> = [mp.major, mp.sibling].into_iter().collect();
        assert_eq!(pair, [ch("1/14 9/14"), ch("1/7 4/7")].into_iter().collect());
        assert_eq!(mp.minor, ch("1/7 2/7"));
        match critical_set(&l).unwrap() {
            CriticalSet::Gap { period, degree, .. } => assert_eq!((period, degree), (Some(3), 2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn diameter_majors_are_degenerate() {
        let l = lamination_from_minor(&Chord::point(Angle::zero()), 3).unwrap();
        let mp = majors_and_minor(&l).unwrap();
        assert_eq!(mp.major, ch("0 1/2"));
        assert_eq!(mp.minor, Chord::point(Angle::zero()));
        assert!(!is_hyperbolic(&l));
        assert_eq!(
            critical_set(&l).unwrap(),
            CriticalSet::Leaf { leaf: ch("0 1/2") }
        );
    }

    #[test]
    fn fixed_return_verdicts() {
        assert!(!is_fixed_return(&ch("1/7 2/7")).unwrap());
        assert!(!is_fixed_return(&ch("1/3 2/3")).unwrap());
        assert!(!is_fixed_return(&ch("1/15 2/15")).unwrap());
        assert!(is_fixed_return(&ch("3/7 4/7")).unwrap());
        assert_eq!(is_fixed_return(&ch("1/6 1/3")), Err(Error::NotPeriodic));
    }

    #[test]
    fn qml_membership() {
        assert!(is_qml_leaf(&ch("1/3 2/3"), 4));
        assert!(is_qml_leaf(&ch("1/7 2/7"), 4));
        assert!(!is_qml_leaf(&ch("1/7 4/7"), 4));
        assert!(!is_qml_leaf(&ch("2/7 4/7"), 4));
        assert_eq!(
            lamination_from_minor(&ch("1/7 4/7"), 3),
            Err(Error::NotAMinor(ch("1/7 4/7")))
        );
    }

    #[test]
    fn qml_period_three() {
        let q = qml_approx(3, 4);
        assert_eq!(q, qml_approx_jobs(3, 4, 3));
        let want: BTreeSet<Chord> = ["1/3 2/3", "1/7 2/7", "3/7 4/7", "5/7 6/7"].map(ch).into();
        assert_eq!(q.leaves, want);
        assert_eq!(q.points, [Angle::zero()].into());
        let l = Geolamination::explicit(2, 0, q.leaves.iter().cloned()).unwrap();
        assert!(verify_unlinked(&l).passed());
    }

    #[test]
    fn preperiodic_minor_has_critical_quadrilateral() {
        let l = lamination_from_minor(&ch("5/12 7/12"), 4).unwrap();
        match critical_set(&l).unwrap() {
            CriticalSet::Polygon { vertices } => assert_eq!(vertices.len(), 4),
            other => panic!("{other:?}"),
        }
    }
}
