//! Construction of a geolamination by pulling back a critical portrait.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{hull_edges, CriticalPortrait, GeneratorMeta, Geolamination, PortraitMember};
use crate::chords::{chord_length, image_unchecked, is_critical_unchecked, linked, Chord};
use crate::circle::{arc_length, check_degree, Angle};
use crate::error::{Error, Result};

/// Explicit preimage choices, keyed by the leaf being pulled back.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Script {
    pub choices: BTreeMap<Chord, Vec<Chord>>,
}

impl Script {
    pub fn new() -> Script {
        Script::default()
    }

    pub fn with(mut self, leaf: Chord, preimages: Vec<Chord>) -> Script {
        self.choices.insert(leaf, preimages);
        self
    }
}

/// How to pick among admissible preimages when non-crossing leaves a choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChoicePolicy {
    /// Attach each free preimage to the nearest critical vertex; an exact
    /// tie goes to the vertex met first moving positively.
    Canonical,
    /// Listed leaves use the listed preimages; any other ambiguity is an error.
    Scripted(Script),
}

/// An ambiguous pullback handed to a resolver.
pub(crate) struct Ambiguity<'a> {
    pub degree: u32,
    pub leaf: &'a Chord,
    pub candidates: &'a [Chord],
    /// Vertices of portrait members.
    pub pinned: &'a BTreeSet<Angle>,
}

pub fn pullback_construct(
    d: u32,
    portrait: &CriticalPortrait,
    depth: usize,
    policy: &ChoicePolicy,
) -> Result<Geolamination> {
    match policy {
        ChoicePolicy::Canonical => construct_with(d, portrait, depth, None, &mut canonical_choice),
        ChoicePolicy::Scripted(script) => {
            construct_with(d, portrait, depth, Some(script), &mut |amb: &Ambiguity| {
                Err(Error::AmbiguousPullback(amb.leaf.clone()))
            })
        }
    }
}

pub(crate) fn canonical_choice(amb: &Ambiguity) -> Result<Vec<Chord>> {
    let mut keep = Vec::new();
    let mut groups: BTreeMap<&Angle, Vec<(&Angle, &Chord)>> = BTreeMap::new();
    for c in amb.candidates {
        let (p, q) = (amb.pinned.contains(c.p()), amb.pinned.contains(c.q()));
        match (p, q) {
            (true, false) => groups.entry(c.q()).or_default().push((c.p(), c)),
            (false, true) => groups.entry(c.p()).or_default().push((c.q(), c)),
            _ => keep.push(c.clone()),
        }
    }
    for (free, options) in groups {
        let best = options
            .iter()
            .min_by(|(a, _), (b, _)| {
                let key = |v: &Angle| {
                    let fwd = arc_length(free, v);
                    let back = arc_length(v, free);
                    (fwd.clone().min(back), fwd)
                };
                key(a).cmp(&key(b))
            })
            .expect("group is non-empty");
        keep.push(best.1.clone());
    }
    keep.sort();
    keep.dedup();
    if keep.len() > amb.degree as usize {
        return Err(Error::AmbiguousPullback(amb.leaf.clone()));
    }
    Ok(keep)
}

struct Constraints {
    edges: Vec<Chord>,
    excluded: BTreeSet<Chord>,
    polygons: Vec<Vec<Angle>>,
    member_leaves: BTreeSet<Chord>,
    pinned: BTreeSet<Angle>,
}

impl Constraints {
    fn admits(&self, c: &Chord) -> bool {
        if self.excluded.contains(c) {
            return false;
        }
        if self.edges.iter().any(|e| linked(e, c)) {
            return false;
        }
        // diagonals of a critical polygon lie inside it
        !self.polygons.iter().any(|vs| {
            vs.binary_search(c.p()).is_ok()
                && vs.binary_search(c.q()).is_ok()
                && !hull_edges(vs).contains(c)
                && !self.member_leaves.contains(c)
        })
    }
}

fn validate_portrait(d: u32, portrait: &CriticalPortrait) -> Result<Constraints> {
    if portrait.members.is_empty() {
        return Err(Error::InvalidPortrait("no members".into()));
    }
    let mut edges = Vec::new();
    let mut excluded = BTreeSet::new();
    let mut polygons = Vec::new();
    let mut member_leaves = BTreeSet::new();
    let mut pinned = BTreeSet::new();
    for m in &portrait.members {
        match m {
            PortraitMember::Leaf(c) => {
                if !is_critical_unchecked(d, c) {
                    return Err(Error::InvalidPortrait(format!("{c:?} is not critical")));
                }
                member_leaves.insert(c.clone());
            }
            PortraitMember::Polygon {
                vertices,
                edges_are_leaves,
            } => {
                let mut vs = vertices.clone();
                vs.sort();
                vs.dedup();
                let mut img: Vec<Angle> = vs.iter().map(|v| v.times(d)).collect();
                img.sort();
                img.dedup();
                if vs.len() < 3 || img.len() == vs.len() {
                    return Err(Error::InvalidPortrait(format!(
                        "polygon {vs:?} is not a critical polygon"
                    )));
                }
                let hull = hull_edges(&vs);
                if !edges_are_leaves {
                    let longest = hull.iter().map(chord_length).max().expect("polygon has edges");
                    for e in &hull {
                        if chord_length(e) != longest {
                            excluded.insert(e.clone());
                        }
                    }
                }
                polygons.push(vs);
            }
        }
        edges.extend(m.edges());
        pinned.extend(m.vertices());
    }
    for (i, a) in edges.iter().enumerate() {
        for b in &edges[i + 1..] {
            if linked(a, b) {
                return Err(Error::InvalidPortrait(format!("{a:?} crosses {b:?}")));
            }
        }
    }
    Ok(Constraints {
        edges,
        excluded,
        polygons,
        member_leaves,
        pinned,
    })
}

pub(crate) fn construct_with(
    d: u32,
    portrait: &CriticalPortrait,
    depth: usize,
    script: Option<&Script>,
    resolve: &mut dyn FnMut(&Ambiguity) -> Result<Vec<Chord>>,
) -> Result<Geolamination> {
    check_degree(d)?;
    let cons = validate_portrait(d, portrait)?;

    let mut leaves: BTreeSet<Chord> = BTreeSet::new();
    for m in &portrait.members {
        match m {
            PortraitMember::Leaf(c) => {
                leaves.insert(c.clone());
            }
            PortraitMember::Polygon {
                vertices,
                edges_are_leaves,
            } => {
                if *edges_are_leaves {
                    leaves.extend(m.edges());
                }
                let img: Vec<Angle> = vertices.iter().map(|v| v.times(d)).collect();
                for e in hull_edges(&img) {
                    let mut cur = e;
                    while !cur.is_degenerate() && leaves.insert(cur.clone()) {
                        cur = image_unchecked(d, &cur);
                    }
                }
            }
        }
    }
    let initial: Vec<&Chord> = leaves.iter().collect();
    for (i, a) in initial.iter().enumerate() {
        if let Some(e) = cons.edges.iter().find(|e| linked(e, a)) {
            return Err(Error::InvalidPortrait(format!("{a:?} crosses {e:?}")));
        }
        if let Some(b) = initial[i + 1..].iter().find(|b| linked(a, b)) {
            return Err(Error::InvalidPortrait(format!("{a:?} crosses {b:?}")));
        }
    }

    let seed = Geolamination::new(d, depth, leaves.iter().cloned(), GeneratorMeta::explicit())?;
    let mut levels: BTreeMap<usize, BTreeSet<Chord>> = BTreeMap::new();
    for (c, g) in seed.generations() {
        let g = g.ok_or_else(|| Error::InvalidPortrait(format!("orbit of {c:?} not closed")))?;
        levels.entry(g).or_default().insert(c);
    }

    for g in 0..depth {
        let current: Vec<Chord> = levels.get(&g).into_iter().flatten().cloned().collect();
        for leaf in current {
            let fresh = pull_back(d, &leaf, &cons, &leaves, script, resolve)?;
            for c in fresh {
                if leaves.insert(c.clone()) {
                    levels.entry(g + 1).or_default().insert(c);
                }
            }
        }
    }
    Geolamination::new(d, depth, leaves, GeneratorMeta::portrait(portrait.clone()))
}

fn pull_back(
    d: u32,
    leaf: &Chord,
    cons: &Constraints,
    leaves: &BTreeSet<Chord>,
    script: Option<&Script>,
    resolve: &mut dyn FnMut(&Ambiguity) -> Result<Vec<Chord>>,
) -> Result<Vec<Chord>> {
    let admissible = |c: &Chord| {
        !c.is_degenerate()
            && !is_critical_unchecked(d, c)
            && image_unchecked(d, c) == *leaf
            && cons.admits(c)
            && !leaves.iter().any(|l| linked(l, c))
    };
    let mut candidates = Vec::new();
    for p in leaf.p().preimages(d) {
        for q in leaf.q().preimages(d) {
            let c = Chord::new(p.clone(), q);
            if admissible(&c) {
                candidates.push(c);
            }
        }
    }
    candidates.sort();
    candidates.dedup();

    let chosen = if let Some(listed) = script.and_then(|s| s.choices.get(leaf)) {
        for c in listed {
            if !admissible(c) && !leaves.contains(c) {
                return Err(Error::InvalidInput(format!(
                    "scripted preimage {c:?} of {leaf:?} is not admissible"
                )));
            }
        }
        listed.clone()
    } else if candidates.iter().all(|c| leaves.contains(c)) || candidates.len() <= d as usize {
        candidates
    } else {
        let picked = resolve(&Ambiguity {
            degree: d,
            leaf,
            candidates: &candidates,
            pinned: &cons.pinned,
        })?;
        for c in &picked {
            if !candidates.contains(c) {
                return Err(Error::InvalidInput(format!(
                    "chosen preimage {c:?} of {leaf:?} is not admissible"
                )));
            }
        }
        picked
    };
    for (i, a) in chosen.iter().enumerate() {
        if let Some(b) = chosen[i + 1..].iter().find(|b| linked(a, b)) {
            return Err(Error::Linked(a.clone(), b.clone()));
        }
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geolam::{is_sibling_invariant, verify_unlinked};

    fn ch(s: &str) -> Chord {
        s.parse().unwrap()
    }

    fn ang(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn basilica_portrait() -> CriticalPortrait {
        CriticalPortrait::polygon(
            vec![ang("1/6"), ang("1/3"), ang("2/3"), ang("5/6")],
            false,
        )
    }

    #[test]
    fn basilica_depth_three() {
        let l = pullback_construct(2, &basilica_portrait(), 3, &ChoicePolicy::Canonical).unwrap();
        for s in ["1/3 2/3", "1/6 5/6", "1/12 11/12", "5/12 7/12"] {
            assert!(l.contains(&ch(s)), "missing {s}");
        }
        assert!(!l.contains(&ch("1/12 5/12")));
        assert!(!l.contains(&ch("1/6 1/3")));
        assert!(verify_unlinked(&l).passed());
        assert!(is_sibling_invariant(&l).passed());
    }

    #[test]
    fn diameter_canonical_is_l12() {
        let p = CriticalPortrait::leaf(ch("0 1/2"));
        let l = pullback_construct(2, &p, 2, &ChoicePolicy::Canonical).unwrap();
        let want: BTreeSet<Chord> = ["0 1/2", "1/4 1/2", "0 3/4", "1/8 1/4", "5/8 3/4", "3/8 1/2", "0 7/8"]
            .iter()
            .map(|s| ch(s))
            .collect();
        let got: BTreeSet<Chord> = l.leaves().clone();
        assert!(got.is_superset(&want), "{got:?}");
        assert!(is_sibling_invariant(&l).passed());
    }

    #[test]
    fn scripted_requires_entries() {
        let p = CriticalPortrait::leaf(ch("0 1/2"));
        let err = pullback_construct(2, &p, 2, &ChoicePolicy::Scripted(Script::new()));
        assert_eq!(err, Err(Error::AmbiguousPullback(ch("0 1/2"))));
        let script = Script::new().with(ch("0 1/2"), vec![ch("0 1/4"), ch("1/2 3/4")]);
        let l = pullback_construct(2, &p, 2, &ChoicePolicy::Scripted(script)).unwrap();
        assert!(l.contains(&ch("0 1/4")) && l.contains(&ch("1/2 3/4")));
    }

    #[test]
    fn rejects_non_critical_portrait() {
        let p = CriticalPortrait::leaf(ch("1/3 2/3"));
        assert!(matches!(
            pullback_construct(2, &p, 2, &ChoicePolicy::Canonical),
            Err(Error::InvalidPortrait(_))
        ));
    }
}
