//! Limit geolaminations of a q-geolamination.

use std::collections::BTreeSet;

use super::{critical_set, is_fixed_return, majors_and_minor, CriticalSet, D};
use crate::chords::{image_unchecked, Chord};
use crate::circle::{in_open_arc, period_of, Angle};
use crate::error::{Error, Result};
use crate::geolam::{
    canonical_choice, construct_with, hull_edges, Ambiguity, CriticalPortrait, GeneratorKind,
    Geolamination, PortraitMember,
};

/// Every geolamination built from a critical portrait that contains the
/// critical set of `lq` as a proper refinement, at the given depth.
///
/// Hyperbolic input yields, for each endpoint `a` of the periodic major, the
/// critical leaf `ab` together with both ways of pulling it back at `a`; a
/// fixed-return minor also yields the filled critical quadrilateral. A finite
/// critical polygon yields one geolamination per sibling pair of its vertices
/// or edges whose hull is strictly smaller.
pub fn limit_geolaminations(lq: &Geolamination, depth: usize) -> Result<Vec<Geolamination>> {
    if lq.generator.kind == GeneratorKind::ExplicitLeafList {
        return Err(Error::WrongInput(
            "limit geolaminations need a constructed q-geolamination".into(),
        ));
    }
    if lq.degree != D {
        return Err(Error::WrongInput(format!("degree {} is not quadratic", lq.degree)));
    }
    let out = match critical_set(lq)? {
        CriticalSet::Leaf { .. } => Vec::new(),
        CriticalSet::Polygon { vertices } => finite_case(&vertices, depth)?,
        CriticalSet::Gap {
            period: Some(_), ..
        } => periodic_gap_case(lq, depth)?,
        CriticalSet::Gap { .. } => Vec::new(),
    };
    let mut seen = BTreeSet::new();
    Ok(out
        .into_iter()
        .filter(|l| seen.insert(l.leaves().clone()))
        .collect())
}

fn canonical(portrait: &CriticalPortrait, depth: usize) -> Result<Geolamination> {
    construct_with(D, portrait, depth, None, &mut canonical_choice)
}

fn finite_case(t: &[Angle], depth: usize) -> Result<Vec<Geolamination>> {
    let mut out = Vec::new();
    let filled = PortraitMember::polygon(t.to_vec(), true);
    for (i, u) in t.iter().enumerate() {
        for v in &t[i + 1..] {
            if u.times(D) == v.times(D) {
                let p = CriticalPortrait {
                    members: vec![filled.clone(), PortraitMember::Leaf(Chord::new(u.clone(), v.clone()))],
                    siegel: false,
                };
                out.push(canonical(&p, depth)?);
            }
        }
    }
    let edges = hull_edges(t);
    for (i, e) in edges.iter().enumerate() {
        for f in &edges[i + 1..] {
            if !e.disjoint(f) || image_unchecked(D, e) != image_unchecked(D, f) {
                continue;
            }
            let hull: Vec<Angle> = e.endpoints().into_iter().chain(f.endpoints()).cloned().collect();
            if hull.len() == t.len() {
                continue;
            }
            let p = CriticalPortrait {
                members: vec![filled.clone(), PortraitMember::polygon(hull, true)],
                siegel: false,
            };
            out.push(canonical(&p, depth)?);
        }
    }
    Ok(out)
}

/// At the vertex `a` of the critical leaf `ab`, keep the preimage whose other
/// endpoint lies in `(a, b)` when `inner`, else the one in `(b, a)`; the same
/// rule applies at `b` with the roles swapped.
fn side_resolver(a: Angle, b: Angle, inner: bool) -> impl FnMut(&Ambiguity) -> Result<Vec<Chord>> {
    move |amb: &Ambiguity| {
        let mut keep = Vec::new();
        for c in amb.candidates {
            let pinned = if c.has_endpoint(&a) {
                Some((&a, &b))
            } else if c.has_endpoint(&b) {
                Some((&b, &a))
            } else {
                None
            };
            match pinned {
                None => keep.push(c.clone()),
                Some((v, w)) => {
                    let y = c.other(v).expect("endpoint");
                    if in_open_arc(v, y, w) == inner {
                        keep.push(c.clone());
                    }
                }
            }
        }
        if keep.len() > amb.degree as usize {
            return Err(Error::AmbiguousPullback(amb.leaf.clone()));
        }
        Ok(keep)
    }
}

fn iterate(c: &Chord, n: usize) -> Chord {
    (0..n).fold(c.clone(), |x, _| image_unchecked(D, &x))
}

fn periodic_gap_case(lq: &Geolamination, depth: usize) -> Result<Vec<Geolamination>> {
    let mp = majors_and_minor(lq)?;
    let m = mp.minor.clone();
    let n = period_of(D, m.p()).ok_or(Error::NotPeriodic)?;
    let fixed_return = is_fixed_return(&m)?;
    let quad: Vec<Angle> = mp
        .major
        .endpoints()
        .into_iter()
        .chain(mp.sibling.endpoints())
        .cloned()
        .collect();
    let mut out = Vec::new();
    for a in mp.major.endpoints() {
        let b = a.rotate(&Angle::new(1, 2));
        let ab = Chord::new(a.clone(), b.clone());
        let mut variants = [None, None];
        if fixed_return {
            let p = CriticalPortrait {
                members: vec![
                    PortraitMember::polygon(quad.clone(), true),
                    PortraitMember::Leaf(ab.clone()),
                ],
                siegel: false,
            };
            let filled = canonical(&p, depth)?;
            let side = filled.leaves().iter().find_map(|c| {
                let y = c.other(a)?;
                (c != &ab && iterate(c, n) == ab).then(|| in_open_arc(a, y, &b))
            });
            if let Some(inner) = side {
                variants[usize::from(!inner)] = Some(filled);
            }
        }
        for (slot, inner) in variants.iter_mut().zip([true, false]) {
            if slot.is_none() {
                let p = CriticalPortrait::leaf(ab.clone());
                *slot = Some(construct_with(
                    D,
                    &p,
                    depth,
                    None,
                    &mut side_resolver(a.clone(), b.clone(), inner),
                )?);
            }
        }
        out.extend(variants.into_iter().flatten());
    }
    if fixed_return {
        out.push(canonical(&CriticalPortrait::polygon(quad, true), depth)?);
    }
    Ok(out)
}
