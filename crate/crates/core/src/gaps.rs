//! Gaps of a finite geolamination and their dynamics.
//!
//! Leaves are nested intervals of [0, 1); the faces of the disk are read off
//! the containment tree with one stack pass.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chords::{image_unchecked, Chord};
use crate::circle::{arc_length, in_closed_arc, is_periodic, Angle, Arc};
use crate::error::{Error, Result};
use crate::geolam::{Geolamination, PortraitMember};

/// A complementary region of a finite geolamination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    pub id: usize,
    /// Boundary points on the circle, in positive cyclic order.
    pub vertices: Vec<Angle>,
    pub edges: Vec<Chord>,
    /// Arcs cut off by the edges, on the far side of each edge.
    pub holes: Vec<Arc>,
    /// Boundary arcs of the circle not yet cut off by any leaf.
    pub free_arcs: Vec<Arc>,
    /// Every edge sits at the truncation depth or beyond.
    pub frontier_exempt: bool,
}

impl Gap {
    /// No stored leaf bounds this region, so it is the whole disk.
    pub fn is_whole_disk(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_arcs.is_empty() && !self.is_whole_disk()
    }
}

#[derive(Clone, Debug)]
struct Node {
    chord: Option<Chord>,
    children: Vec<usize>,
    /// The chord sits at the truncation depth, so its preimages are not stored.
    frontier: bool,
}

/// Where a finite set of circle points lands in the arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Point(Angle),
    Leaf(Chord),
    Gap(usize),
    /// The convex hull of the points is crossed by this leaf.
    Crossing(Chord),
}

/// The gaps of a geolamination together with its containment tree.
#[derive(Clone, Debug)]
pub struct GapSet {
    degree: u32,
    nodes: Vec<Node>,
    gaps: Vec<Gap>,
}

impl GapSet {
    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    pub fn gap(&self, id: usize) -> &Gap {
        &self.gaps[id]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The finest face or leaf whose closure contains every point.
    pub fn locate(&self, points: &[Angle]) -> Location {
        self.locate_with(points, false)
    }

    /// Like `locate`, but a leaf at the truncation depth never separates the
    /// points: an image region may be cut by such a leaf only because its
    /// preimage lies beyond the depth.
    fn locate_with(&self, points: &[Angle], pass_frontier: bool) -> Location {
        let mut pts: Vec<Angle> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() == 1 {
            return Location::Point(pts[0].clone());
        }
        let mut node = 0;
        'descend: loop {
            for &c in &self.nodes[node].children {
                let ch = self.nodes[c].chord.as_ref().expect("child has a chord");
                let (a, b) = (ch.p(), ch.q());
                let inside = pts.iter().all(|x| a <= x && x <= b);
                if inside {
                    if pts.len() == 2 && pts[0] == *a && pts[1] == *b {
                        return Location::Leaf(ch.clone());
                    }
                    node = c;
                    continue 'descend;
                }
                let some_in = pts.iter().any(|x| a < x && x < b);
                let some_out = pts.iter().any(|x| x < a || x > b);
                if some_in && some_out && !(pass_frontier && self.nodes[c].frontier) {
                    return Location::Crossing(ch.clone());
                }
            }
            return Location::Gap(node);
        }
    }
}

/// Faces of the disk cut by the leaves of `l`. Gap ids are node indices of
/// the containment tree, the id 0 being the face that touches angle 0.
pub fn gaps_of(l: &Geolamination) -> Result<GapSet> {
    let gens = l.generations();
    let mut leaves: Vec<&Chord> = l.leaves().iter().collect();
    leaves.sort_by(|x, y| x.p().cmp(y.p()).then(y.q().cmp(x.q())));

    let frontier = |c: &Chord| gens.get(c).copied().flatten().map_or(false, |g| g >= l.depth);
    let mut nodes = vec![Node {
        chord: None,
        children: vec![],
        frontier: false,
    }];
    let mut stack: Vec<usize> = vec![0];
    for c in leaves {
        loop {
            let top = *stack.last().expect("root stays on the stack");
            match &nodes[top].chord {
                None => break,
                Some(t) => {
                    if c.q() <= t.q() {
                        break;
                    }
                    if c.p() < t.q() {
                        return Err(Error::Linked(t.clone(), c.clone()));
                    }
                    stack.pop();
                }
            }
        }
        let parent = *stack.last().expect("root");
        let id = nodes.len();
        nodes.push(Node {
            chord: Some(c.clone()),
            children: vec![],
            frontier: frontier(c),
        });
        nodes[parent].children.push(id);
        stack.push(id);
    }

    let gaps = nodes
        .iter()
        .enumerate()
        .map(|(id, n)| face(id, n, &nodes, &frontier))
        .collect();
    Ok(GapSet {
        degree: l.degree,
        nodes,
        gaps,
    })
}

fn face(id: usize, node: &Node, nodes: &[Node], frontier: &dyn Fn(&Chord) -> bool) -> Gap {
    let kids: Vec<&Chord> = node
        .children
        .iter()
        .map(|&c| nodes[c].chord.as_ref().expect("child chord"))
        .collect();
    let mut edges: Vec<Chord> = Vec::new();
    let mut holes = Vec::new();
    let mut free_arcs = Vec::new();
    let mut seq: Vec<Angle> = Vec::new();
    if let Some(own) = &node.chord {
        seq.push(own.p().clone());
        edges.push(own.clone());
        holes.push(Arc::open(own.q().clone(), own.p().clone()));
    }
    for k in &kids {
        if let Some(last) = seq.last() {
            if last != k.p() {
                free_arcs.push(Arc::open(last.clone(), k.p().clone()));
            }
        }
        seq.push(k.p().clone());
        seq.push(k.q().clone());
        edges.push((*k).clone());
        holes.push(Arc::open(k.p().clone(), k.q().clone()));
    }
    match &node.chord {
        Some(own) => {
            let last = seq.last().expect("own start pushed").clone();
            if last != *own.q() {
                free_arcs.push(Arc::open(last, own.q().clone()));
            }
            seq.push(own.q().clone());
        }
        None => {
            if let (Some(first), Some(last)) = (kids.first(), kids.last()) {
                if first.p() != last.q() {
                    free_arcs.push(Arc::open(last.q().clone(), first.p().clone()));
                }
            }
        }
    }
    seq.dedup();
    if seq.len() > 1 && seq.first() == seq.last() {
        seq.pop();
    }
    let frontier_exempt = !edges.is_empty() && edges.iter().all(frontier);
    Gap {
        id,
        vertices: seq,
        edges,
        holes,
        free_arcs,
        frontier_exempt,
    }
}

/// The image of a gap: a point, a leaf, or another gap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapImage {
    Point(Angle),
    Leaf(Chord),
    Gap(usize),
}

pub fn gap_image(gs: &GapSet, g: &Gap) -> Result<GapImage> {
    if g.is_whole_disk() {
        return Ok(GapImage::Gap(g.id));
    }
    let pts: Vec<Angle> = g.vertices.iter().map(|v| v.times(gs.degree)).collect();
    match gs.locate_with(&pts, true) {
        Location::Point(a) => Ok(GapImage::Point(a)),
        Location::Leaf(c) => Ok(GapImage::Leaf(c)),
        Location::Gap(id) => Ok(GapImage::Gap(id)),
        Location::Crossing(c) => Err(Error::InvarianceViolation(format!(
            "image of gap {} is crossed by {c:?}",
            g.id
        ))),
    }
}

/// Preperiod and period of the gap's orbit among gaps; `None` when the
/// orbit collapses to a leaf or point or needs more than `bound` steps.
pub fn gap_period(gs: &GapSet, g: &Gap, bound: usize) -> Result<Option<(usize, usize)>> {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut cur = g.id;
    for step in 0..=bound {
        if let Some(&first) = seen.get(&cur) {
            return Ok(Some((first, step - first)));
        }
        seen.insert(cur, step);
        match gap_image(gs, gs.gap(cur))? {
            GapImage::Gap(next) => cur = next,
            _ => return Ok(None),
        }
    }
    Ok(None)
}

/// Degree of σⁿ restricted to the boundary of a gap with σⁿ(G) = G: the
/// winding number of the image of the vertex walk.
pub fn boundary_degree(gs: &GapSet, g: &Gap, n: usize) -> Result<usize> {
    if g.is_whole_disk() {
        return Ok((gs.degree as usize).pow(n as u32));
    }
    let mut cur = g.id;
    for _ in 0..n {
        match gap_image(gs, gs.gap(cur))? {
            GapImage::Gap(next) => cur = next,
            _ => return Err(Error::NotPeriodic),
        }
    }
    if cur != g.id {
        return Err(Error::NotPeriodic);
    }
    let imgs: Vec<Angle> = g
        .vertices
        .iter()
        .map(|v| crate::circle::sigma_n(gs.degree, v, n))
        .collect();
    let k = imgs.len();
    let mut total = BigRational::zero();
    for i in 0..k {
        total += arc_length(&imgs[i], &imgs[(i + 1) % k]);
    }
    let turns = total.to_integer();
    Ok(turns.to_usize().unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GapKind {
    Finite { vertices: usize },
    Caterpillar,
    Siegel,
    Fatou { degree: usize },
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapClass {
    pub kind: GapKind,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
}

/// Step bound for gap orbits; gap orbits in a finite arrangement are short.
const ORBIT_BOUND: usize = 4096;

pub fn classify_gap(l: &Geolamination, gs: &GapSet, g: &Gap) -> Result<GapClass> {
    let orbit = gap_period(gs, g, ORBIT_BOUND)?;
    let (preperiod, period) = match orbit {
        Some((m, k)) => (Some(m), Some(k)),
        None => (None, None),
    };
    if g.is_finite() {
        return Ok(GapClass {
            kind: GapKind::Finite {
                vertices: g.vertices.len(),
            },
            preperiod,
            period,
        });
    }
    let kind = match orbit {
        None => GapKind::Undetermined,
        Some((m, k)) => {
            let mut cur = g.id;
            for _ in 0..m {
                if let GapImage::Gap(n) = gap_image(gs, gs.gap(cur))? {
                    cur = n;
                }
            }
            let periodic = gs.gap(cur);
            let deg = boundary_degree(gs, periodic, k)?;
            if deg >= 2 {
                GapKind::Fatou { degree: deg }
            } else if periodic.vertices.iter().any(|v| is_periodic(l.degree, v)) {
                GapKind::Caterpillar
            } else if in_siegel_half(l, periodic) {
                GapKind::Siegel
            } else {
                GapKind::Undetermined
            }
        }
    };
    Ok(GapClass {
        kind,
        preperiod,
        period,
    })
}

/// The generator is a flagged Siegel diameter and the gap lies in the closed
/// half of the disk it cuts off away from angle 0.
fn in_siegel_half(l: &Geolamination, g: &Gap) -> bool {
    let Some(p) = l.generator.portrait.as_ref().filter(|p| p.siegel) else {
        return false;
    };
    let Some(PortraitMember::Leaf(ell)) = p.members.first() else {
        return false;
    };
    g.vertices.iter().all(|v| in_closed_arc(ell.p(), v, ell.q()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fate", rename_all = "kebab-case")]
pub enum EdgeFate {
    Periodic { period: usize },
    Preperiodic { preperiod: usize, period: usize },
    Precritical { steps: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeFateReport {
    pub fates: BTreeMap<Chord, EdgeFate>,
}

/// Exact forward orbit of every edge of `g`.
pub fn check_edge_fate(l: &Geolamination, g: &Gap) -> EdgeFateReport {
    let fates = g
        .edges
        .iter()
        .map(|e| (e.clone(), edge_fate(l.degree, e)))
        .collect();
    EdgeFateReport { fates }
}

fn edge_fate(d: u32, e: &Chord) -> EdgeFate {
    let mut seen: HashMap<Chord, usize> = HashMap::new();
    let mut cur = e.clone();
    let mut step = 0;
    loop {
        if cur.is_degenerate() {
            return EdgeFate::Precritical { steps: step - 1 };
        }
        if let Some(&first) = seen.get(&cur) {
            return if first == 0 {
                EdgeFate::Periodic { period: step }
            } else {
                EdgeFate::Preperiodic {
                    preperiod: first,
                    period: step - first,
                }
            };
        }
        seen.insert(cur.clone(), step);
        cur = image_unchecked(d, &cur);
        step += 1;
    }
}
