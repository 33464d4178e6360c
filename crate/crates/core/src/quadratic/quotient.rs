//! Equivalence of q-geolaminations by intersecting minors.

use serde::{Deserialize, Serialize};

use super::{majors_and_minor, QmlApprox};
use crate::chords::Chord;
use crate::circle::Angle;
use crate::error::{Error, Result};
use crate::geolam::Geolamination;

/// One class of the closure of the relation "minors intersect".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorEquivClass {
    /// Indices into the input family.
    pub members: Vec<usize>,
    pub minors: Vec<Chord>,
    /// The minor-lamination class shared by the members, if they all map to
    /// the same one.
    pub qml_class: Option<Vec<Angle>>,
}

/// Minors as closed subsets of the disk: a point meets a chord only at an
/// endpoint.
pub fn minors_intersect(a: &Chord, b: &Chord) -> bool {
    match (a.is_degenerate(), b.is_degenerate()) {
        (true, true) => a == b,
        (true, false) => b.has_endpoint(a.p()),
        (false, true) => a.has_endpoint(b.p()),
        (false, false) => a.intersects(b),
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub fn minor_quotient(family: &[Geolamination], qml: &QmlApprox) -> Result<Vec<MinorEquivClass>> {
    let minors: Vec<Chord> = family
        .iter()
        .map(|l| majors_and_minor(l).map(|mp| mp.minor))
        .collect::<Result<_>>()?;
    let mut parent: Vec<usize> = (0..minors.len()).collect();
    for i in 0..minors.len() {
        for j in i + 1..minors.len() {
            if minors_intersect(&minors[i], &minors[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<MinorEquivClass> = Vec::new();
    let mut slot: Vec<Option<usize>> = vec![None; minors.len()];
    for i in 0..minors.len() {
        let root = find(&mut parent, i);
        let k = *slot[root].get_or_insert_with(|| {
            classes.push(MinorEquivClass {
                members: Vec::new(),
                minors: Vec::new(),
                qml_class: None,
            });
            classes.len() - 1
        });
        classes[k].members.push(i);
        if !classes[k].minors.contains(&minors[i]) {
            classes[k].minors.push(minors[i].clone());
        }
    }
    for c in &mut classes {
        let images: Vec<Option<Vec<Angle>>> = c
            .members
            .iter()
            .map(|&i| psi(&family[i], qml).ok())
            .collect();
        if images.iter().all(|x| x.is_some() && *x == images[0]) {
            c.qml_class = images[0].clone();
        }
    }
    Ok(classes)
}

/// The minor-lamination class containing the minor of `l`.
pub fn psi(l: &Geolamination, qml: &QmlApprox) -> Result<Vec<Angle>> {
    let m = majors_and_minor(l)?.minor;
    for a in m.endpoints() {
        if let Some(class) = qml.class_of(a) {
            if m.endpoints().iter().all(|e| class.contains(e)) {
                return Ok(class);
            }
        }
    }
    Err(Error::InsufficientPeriod(m.p().clone()))
}
