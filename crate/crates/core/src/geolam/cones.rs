//! Cones of leaves at a periodic vertex, and collapsing polygons.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Geolamination;
use crate::chords::{image_unchecked, Chord};
use crate::circle::{arc_length, period_of, sigma_n, Angle};
use crate::error::{Error, Result};

/// All leaves sharing the endpoint `vertex`, ordered positively from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub vertex: Angle,
    pub leaves: Vec<Chord>,
}

impl Cone {
    /// Other endpoints, in the same order as `leaves`.
    pub fn rays(&self) -> Vec<Angle> {
        self.leaves
            .iter()
            .map(|l| l.other(&self.vertex).expect("cone leaf has the vertex").clone())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Motion {
    Positive,
    Negative,
    Fixed,
    Mixed,
    CollapsesToVertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalMotion {
    pub from: Angle,
    pub to: Angle,
    pub motion: Motion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeAnalysis {
    pub vertex: Angle,
    pub period: usize,
    pub leaves: Vec<Chord>,
    /// A leaf that is not fixed by the return map but whose image is another
    /// leaf of the cone.
    pub certificate: Option<(Chord, Chord)>,
    pub infinite: bool,
    /// Finite cones with more than two leaves are unusual at a periodic vertex.
    pub flagged: bool,
    pub fixed_rays: Vec<Angle>,
    pub motions: Vec<IntervalMotion>,
}

pub fn cone_at(l: &Geolamination, v: &Angle) -> Cone {
    let mut leaves: Vec<Chord> = l.leaves().iter().filter(|c| c.has_endpoint(v)).cloned().collect();
    leaves.sort_by_key(|c| arc_length(v, c.other(v).expect("has vertex")));
    Cone {
        vertex: v.clone(),
        leaves,
    }
}

pub fn analyze_cone(l: &Geolamination, cone: &Cone) -> Result<ConeAnalysis> {
    let d = l.degree;
    let v = &cone.vertex;
    let n = period_of(d, v).ok_or_else(|| Error::UnsupportedVertex(v.clone()))?;
    let ret = |c: &Chord| {
        let mut x = c.clone();
        for _ in 0..n {
            x = image_unchecked(d, &x);
        }
        x
    };
    let members: BTreeSet<&Chord> = cone.leaves.iter().collect();
    let certificate = cone.leaves.iter().find_map(|c| {
        let img = ret(c);
        (img != *c && !img.is_degenerate() && members.contains(&img)).then(|| (c.clone(), img))
    });
    let rays = cone.rays();
    let fixed_rays = rays
        .iter()
        .filter(|a| sigma_n(d, a, n) == **a)
        .cloned()
        .collect();
    let mut motions = Vec::new();
    for w in rays.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (ia, ib) = (sigma_n(d, a, n), sigma_n(d, b, n));
        let motion = if ia == *v || ib == *v {
            Motion::CollapsesToVertex
        } else {
            let shift = |x: &Angle, y: &Angle| arc_length(v, y).cmp(&arc_length(v, x));
            use std::cmp::Ordering::*;
            match (shift(a, &ia), shift(b, &ib)) {
                (Equal, Equal) => Motion::Fixed,
                (Greater | Equal, Greater | Equal) => Motion::Positive,
                (Less | Equal, Less | Equal) => Motion::Negative,
                _ => Motion::Mixed,
            }
        };
        motions.push(IntervalMotion {
            from: a.clone(),
            to: b.clone(),
            motion,
        });
    }
    let infinite = certificate.is_some();
    Ok(ConeAnalysis {
        vertex: v.clone(),
        period: n,
        leaves: cone.leaves.clone(),
        certificate,
        infinite,
        flagged: !infinite && cone.leaves.len() > 2,
        fixed_rays,
        motions,
    })
}

/// The largest polygon of leaves containing the concatenated `chain` whose
/// edges all share the chain's image. Returns its vertices in order.
pub fn max_collapsing_polygon(l: &Geolamination, chain: &[Chord]) -> Result<Vec<Angle>> {
    let first = chain
        .first()
        .ok_or_else(|| Error::InvalidChain("empty chain".into()))?;
    let target = l.image(first);
    if target.is_degenerate() {
        return Err(Error::InvalidChain(format!("{first:?} is critical")));
    }
    let mut path: Vec<Angle> = vec![first.p().clone(), first.q().clone()];
    for c in chain {
        if !l.contains(c) {
            return Err(Error::InvalidChain(format!("{c:?} is not a leaf")));
        }
        if l.image(c) != target {
            return Err(Error::InvalidChain(format!("{c:?} has a different image")));
        }
    }
    let mut used: BTreeSet<Chord> = BTreeSet::new();
    used.insert(first.clone());
    for c in &chain[1..] {
        if !extend(&mut path, c) {
            return Err(Error::InvalidChain(format!("{c:?} does not continue the chain")));
        }
        used.insert(c.clone());
    }
    let same_image: Vec<Chord> = l
        .leaves()
        .iter()
        .filter(|c| l.image(c) == target)
        .cloned()
        .collect();
    loop {
        let closed = path.len() > 2 && path.first() == path.last();
        if closed {
            break;
        }
        let next = same_image
            .iter()
            .find(|c| !used.contains(*c) && extendable(&path, c));
        match next {
            Some(c) => {
                extend(&mut path, c);
                used.insert(c.clone());
            }
            None => break,
        }
    }
    let mut vertices = path;
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

fn extendable(path: &[Angle], c: &Chord) -> bool {
    let (head, tail) = (&path[0], &path[path.len() - 1]);
    let interior = &path[1..path.len() - 1];
    let fresh = |a: &Angle| !interior.contains(a);
    (c.has_endpoint(tail) && fresh(c.other(tail).expect("endpoint")))
        || (c.has_endpoint(head) && fresh(c.other(head).expect("endpoint")))
}

fn extend(path: &mut Vec<Angle>, c: &Chord) -> bool {
    if !extendable(path, c) {
        return false;
    }
    let tail = path[path.len() - 1].clone();
    if let Some(o) = c.other(&tail) {
        path.push(o.clone());
        return true;
    }
    let head = path[0].clone();
    let o = c.other(&head).expect("extendable at head").clone();
    path.insert(0, o);
    true
}
