//! Geolaminations: containers, invariance checkers and constructions.

mod cones;
mod equivalence;
mod hausdorff;
mod pullback;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::chords::{image_unchecked, is_critical_unchecked, linked, Chord};
use crate::circle::{check_degree, is_periodic, Angle};
use crate::error::Result;
use crate::gaps::gaps_of;

pub use cones::{analyze_cone, cone_at, max_collapsing_polygon, Cone, ConeAnalysis, Motion};
pub use equivalence::from_equivalence;
pub use hausdorff::hausdorff_distance;
pub use pullback::{pullback_construct, ChoicePolicy, Script};
pub(crate) use pullback::{canonical_choice, construct_with, Ambiguity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    FromCriticalPortrait,
    FromEquivalenceRelation,
    ExplicitLeafList,
}

/// A member of a critical portrait.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PortraitMember {
    /// A critical chord; always a leaf of the result.
    Leaf(Chord),
    /// A critical polygon. When `edges_are_leaves` is false only its longest
    /// sibling edges (the majors) may become leaves.
    Polygon {
        vertices: Vec<Angle>,
        edges_are_leaves: bool,
    },
}

impl PortraitMember {
    pub fn polygon(mut vertices: Vec<Angle>, edges_are_leaves: bool) -> PortraitMember {
        vertices.sort();
        vertices.dedup();
        PortraitMember::Polygon {
            vertices,
            edges_are_leaves,
        }
    }

    pub fn vertices(&self) -> Vec<Angle> {
        match self {
            PortraitMember::Leaf(c) => vec![c.p().clone(), c.q().clone()],
            PortraitMember::Polygon { vertices, .. } => vertices.clone(),
        }
    }

    /// Boundary edges of the convex hull.
    pub fn edges(&self) -> Vec<Chord> {
        match self {
            PortraitMember::Leaf(c) => vec![c.clone()],
            PortraitMember::Polygon { vertices, .. } => hull_edges(vertices),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CriticalPortrait {
    pub members: Vec<PortraitMember>,
    /// The single critical leaf is a Siegel diameter; certifies an
    /// uncountable basis for the invariant gap it bounds.
    #[serde(default)]
    pub siegel: bool,
}

impl CriticalPortrait {
    pub fn leaf(c: Chord) -> CriticalPortrait {
        CriticalPortrait {
            members: vec![PortraitMember::Leaf(c)],
            siegel: false,
        }
    }

    pub fn polygon(vertices: Vec<Angle>, edges_are_leaves: bool) -> CriticalPortrait {
        CriticalPortrait {
            members: vec![PortraitMember::polygon(vertices, edges_are_leaves)],
            siegel: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMeta {
    pub kind: GeneratorKind,
    pub portrait: Option<CriticalPortrait>,
    pub classes: Option<Vec<Vec<Angle>>>,
}

impl GeneratorMeta {
    pub fn explicit() -> GeneratorMeta {
        GeneratorMeta {
            kind: GeneratorKind::ExplicitLeafList,
            portrait: None,
            classes: None,
        }
    }

    pub fn portrait(p: CriticalPortrait) -> GeneratorMeta {
        GeneratorMeta {
            kind: GeneratorKind::FromCriticalPortrait,
            portrait: Some(p),
            classes: None,
        }
    }

    pub fn classes(c: Vec<Vec<Angle>>) -> GeneratorMeta {
        GeneratorMeta {
            kind: GeneratorKind::FromEquivalenceRelation,
            portrait: None,
            classes: Some(c),
        }
    }
}

/// A finite, depth-truncated geolamination. Degenerate leaves are implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geolamination {
    pub degree: u32,
    pub depth: usize,
    leaves: BTreeSet<Chord>,
    pub generator: GeneratorMeta,
}

impl Geolamination {
    pub fn new(
        degree: u32,
        depth: usize,
        leaves: impl IntoIterator<Item = Chord>,
        generator: GeneratorMeta,
    ) -> Result<Geolamination> {
        check_degree(degree)?;
        Ok(Geolamination {
            degree,
            depth,
            leaves: leaves.into_iter().filter(|c| !c.is_degenerate()).collect(),
            generator,
        })
    }

    pub fn explicit(
        degree: u32,
        depth: usize,
        leaves: impl IntoIterator<Item = Chord>,
    ) -> Result<Geolamination> {
        Geolamination::new(degree, depth, leaves, GeneratorMeta::explicit())
    }

    pub fn leaves(&self) -> &BTreeSet<Chord> {
        &self.leaves
    }

    pub fn contains(&self, c: &Chord) -> bool {
        self.leaves.contains(c)
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    /// A copy keeping only the leaves accepted by `keep`.
    pub fn filtered(&self, keep: impl Fn(&Chord) -> bool) -> Geolamination {
        Geolamination {
            degree: self.degree,
            depth: self.depth,
            leaves: self.leaves.iter().filter(|c| keep(c)).cloned().collect(),
            generator: self.generator.clone(),
        }
    }

    pub fn image(&self, c: &Chord) -> Chord {
        image_unchecked(self.degree, c)
    }

    pub fn is_critical(&self, c: &Chord) -> bool {
        is_critical_unchecked(self.degree, c)
    }

    /// Pullback generation of every leaf: 0 for periodic and critical
    /// leaves, otherwise one more than the generation of the image. `None`
    /// when the forward orbit leaves the stored set.
    pub fn generations(&self) -> HashMap<Chord, Option<usize>> {
        let mut memo: HashMap<Chord, Option<usize>> = HashMap::new();
        for leaf in &self.leaves {
            if memo.contains_key(leaf) {
                continue;
            }
            let mut chain = Vec::new();
            let mut cur = leaf.clone();
            let base = loop {
                if let Some(g) = memo.get(&cur) {
                    break *g;
                }
                if !self.leaves.contains(&cur) {
                    break None;
                }
                if self.is_critical(&cur) || self.is_periodic_leaf(&cur) {
                    memo.insert(cur.clone(), Some(0));
                    break Some(0);
                }
                let next = self.image(&cur);
                chain.push(cur);
                cur = next;
            };
            let mut g = base;
            for c in chain.into_iter().rev() {
                g = g.map(|x| x + 1);
                memo.insert(c, g);
            }
        }
        memo
    }

    pub fn is_periodic_leaf(&self, c: &Chord) -> bool {
        is_periodic(self.degree, c.p()) && is_periodic(self.degree, c.q())
    }

    /// Leaves grouped by their image.
    pub fn preimage_map(&self) -> BTreeMap<Chord, Vec<Chord>> {
        let mut map: BTreeMap<Chord, Vec<Chord>> = BTreeMap::new();
        for l in &self.leaves {
            map.entry(self.image(l)).or_default().push(l.clone());
        }
        map
    }
}

/// Edges of the convex hull of a finite set of angles.
pub fn hull_edges(points: &[Angle]) -> Vec<Chord> {
    let mut v: Vec<Angle> = points.to_vec();
    v.sort();
    v.dedup();
    match v.len() {
        0 | 1 => vec![],
        2 => vec![Chord::new(v[0].clone(), v[1].clone())],
        n => (0..n)
            .map(|i| Chord::new(v[i].clone(), v[(i + 1) % n].clone()))
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub witness: Vec<Chord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
    /// Leaves at the truncation frontier that were not held to the rules.
    pub exemptions: Vec<Chord>,
}

impl InvarianceReport {
    fn from_parts(violations: Vec<Violation>, exemptions: Vec<Chord>) -> InvarianceReport {
        InvarianceReport {
            verdict: if violations.is_empty() {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            violations,
            exemptions,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn violation(rule: &str, witness: Vec<Chord>) -> Violation {
    Violation {
        rule: rule.to_string(),
        witness,
    }
}

/// Every crossing pair of stored leaves.
pub fn verify_unlinked(l: &Geolamination) -> InvarianceReport {
    let leaves: Vec<&Chord> = l.leaves.iter().collect();
    let mut violations = Vec::new();
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            if linked(leaves[i], leaves[j]) {
                violations.push(violation("E2", vec![leaves[i].clone(), leaves[j].clone()]));
            }
        }
    }
    InvarianceReport::from_parts(violations, vec![])
}

pub fn is_sibling_invariant(l: &Geolamination) -> InvarianceReport {
    let d = l.degree as usize;
    let gens = l.generations();
    let pre = l.preimage_map();
    let mut violations = Vec::new();
    let mut exemptions = Vec::new();
    for leaf in &l.leaves {
        let img = l.image(leaf);
        if !img.is_degenerate() && !l.leaves.contains(&img) {
            violations.push(violation("S1", vec![leaf.clone()]));
        }
        let g = gens.get(leaf).copied().flatten();
        if g.map_or(true, |g| g < l.depth) && !pre.contains_key(leaf) {
            violations.push(violation("S2", vec![leaf.clone()]));
        }
        if img.is_degenerate() {
            continue;
        }
        let img_gen = gens.get(&img).copied().flatten();
        if img_gen.is_some_and(|g| g + 1 > l.depth) {
            exemptions.push(leaf.clone());
            continue;
        }
        let siblings: Vec<&Chord> = pre
            .get(&img)
            .map(|v| v.iter().filter(|s| *s != leaf && s.disjoint(leaf)).collect())
            .unwrap_or_default();
        if !has_disjoint_family(&siblings, d - 1) {
            let mut w = vec![leaf.clone()];
            w.extend(
                pre.get(&img)
                    .into_iter()
                    .flatten()
                    .filter(|s| *s != leaf)
                    .cloned(),
            );
            violations.push(violation("S3", w));
        }
    }
    InvarianceReport::from_parts(violations, exemptions)
}

fn has_disjoint_family(cands: &[&Chord], k: usize) -> bool {
    fn go(cands: &[&Chord], chosen: &mut Vec<usize>, start: usize, k: usize) -> bool {
        if chosen.len() == k {
            return true;
        }
        for i in start..cands.len() {
            if chosen.iter().all(|&j| cands[j].disjoint(cands[i])) {
                chosen.push(i);
                if go(cands, chosen, i + 1, k) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    go(cands, &mut Vec::new(), 0, k)
}

pub fn is_thurston_invariant(l: &Geolamination) -> InvarianceReport {
    let d = l.degree as usize;
    let gens = l.generations();
    let pre = l.preimage_map();
    let mut violations = Vec::new();
    let mut exemptions = Vec::new();
    for leaf in &l.leaves {
        let img = l.image(leaf);
        if !img.is_degenerate() && !l.leaves.contains(&img) {
            violations.push(violation("T1", vec![leaf.clone()]));
        }
        let g = gens.get(leaf).copied().flatten();
        if g.is_some_and(|g| g >= l.depth) {
            exemptions.push(leaf.clone());
            continue;
        }
        let count = pre.get(leaf).map_or(0, |v| v.len());
        if count < d {
            violations.push(violation("T1", vec![leaf.clone()]));
        }
    }
    let gaps = match gaps_of(l) {
        Ok(g) => g,
        Err(_) => {
            let mut v = verify_unlinked(l).violations;
            violations.append(&mut v);
            return InvarianceReport::from_parts(violations, exemptions);
        }
    };
    let old: Vec<&Chord> = l
        .leaves
        .iter()
        .filter(|c| gens.get(*c).copied().flatten().map_or(true, |g| g < l.depth))
        .collect();
    for gap in gaps.gaps() {
        if gap.frontier_exempt || gap.vertices.is_empty() {
            continue;
        }
        let images: Vec<Angle> = gap.vertices.iter().map(|v| v.times(l.degree)).collect();
        let mut distinct = images.clone();
        distinct.sort();
        distinct.dedup();
        let witness = || gap.edges.clone();
        if distinct.len() == 2 {
            let c = Chord::new(distinct[0].clone(), distinct[1].clone());
            if !l.leaves.contains(&c) {
                violations.push(violation("T2", witness()));
                continue;
            }
        } else if distinct.len() >= 3 {
            let hull = hull_edges(&distinct);
            let hull_set: BTreeSet<&Chord> = hull.iter().collect();
            let crossed = old.iter().any(|k| {
                hull.iter().any(|h| linked(h, k))
                    || (distinct.binary_search(k.p()).is_ok()
                        && distinct.binary_search(k.q()).is_ok()
                        && !hull_set.contains(k))
            });
            if crossed {
                violations.push(violation("T2", witness()));
                continue;
            }
        }
        if !monotone_walk(&images, &distinct) {
            violations.push(violation("T2", witness()));
        }
    }
    InvarianceReport::from_parts(violations, exemptions)
}

/// The cyclic walk through `images` only ever stays put or steps to the
/// next point of `distinct` in positive order.
fn monotone_walk(images: &[Angle], distinct: &[Angle]) -> bool {
    let n = images.len();
    let k = distinct.len();
    if k <= 1 {
        return true;
    }
    let index = |a: &Angle| distinct.binary_search(a).expect("image point present");
    (0..n).all(|i| {
        let a = index(&images[i]);
        let b = index(&images[(i + 1) % n]);
        a == b || b == (a + 1) % k
    })
}
