//! Geolaminations generated by finitely many equivalence classes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{hull_edges, GeneratorMeta, Geolamination};
use crate::chords::{chord_length, linked, Chord};
use crate::circle::{check_degree, in_closed_arc, in_open_arc, is_periodic, Angle};
use crate::error::{Error, Result};

type Class = Vec<Angle>;

fn image_class(d: u32, c: &[Angle]) -> Class {
    let mut v: Class = c.iter().map(|a| a.times(d)).collect();
    v.sort();
    v.dedup();
    v
}

fn hulls_linked(a: &[Angle], b: &[Angle]) -> bool {
    let ea = hull_edges(a);
    let eb = hull_edges(b);
    ea.iter().any(|x| eb.iter().any(|y| linked(x, y)))
}

fn share_point(a: &[Angle], b: &[Angle]) -> bool {
    a.iter().any(|x| b.binary_search(x).is_ok())
}

/// Each complementary arc of the class maps onto a complementary arc of the
/// image class, preserving cyclic order.
fn satisfies_d2(d: u32, c: &[Angle]) -> bool {
    let img = image_class(d, c);
    if img.len() < 2 {
        return true;
    }
    let n = c.len();
    (0..n).all(|i| {
        let a = c[i].times(d);
        let b = c[(i + 1) % n].times(d);
        a == b || img.iter().all(|x| !in_open_arc(&a, x, &b))
    })
}

/// Store of pairwise unlinked, pairwise disjoint classes.
struct Classes {
    list: Vec<Class>,
    index: BTreeMap<Class, usize>,
}

impl Classes {
    fn find(&self, c: &[Angle]) -> Option<usize> {
        self.index.get(c).copied()
    }

    fn conflict(&self, c: &[Angle]) -> Option<usize> {
        self.list
            .iter()
            .position(|x| x.as_slice() != c && (share_point(x, c) || hulls_linked(x, c)))
    }

    fn push(&mut self, c: Class) -> usize {
        let i = self.list.len();
        self.index.insert(c.clone(), i);
        self.list.push(c);
        i
    }
}

/// Builds the geolamination of hull edges of the classes generated by
/// `classes` under forward images and pullbacks, truncated at `depth`.
///
/// Without a critical class in the forward closure, the shortest hull edge
/// of the closure is taken as the minor.
pub fn from_equivalence(d: u32, classes: &[Vec<Angle>], depth: usize) -> Result<Geolamination> {
    check_degree(d)?;
    let mut input = Vec::new();
    for c in classes {
        let mut v = c.clone();
        v.sort();
        let len = v.len();
        v.dedup();
        if v.is_empty() || v.len() != len {
            return Err(Error::NotALamination {
                rule: "E1",
                witness: vec![c.clone()],
            });
        }
        input.push(v);
    }
    for (i, a) in input.iter().enumerate() {
        for b in &input[i + 1..] {
            if a == b || share_point(a, b) || hulls_linked(a, b) {
                return Err(Error::NotALamination {
                    rule: "E2",
                    witness: vec![a.clone(), b.clone()],
                });
            }
        }
    }

    let mut store = Classes {
        list: Vec::new(),
        index: BTreeMap::new(),
    };
    let mut image_of: Vec<usize> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for c in input {
        let i = store.push(c);
        image_of.push(usize::MAX);
        queue.push_back(i);
    }
    while let Some(i) = queue.pop_front() {
        let c = store.list[i].clone();
        if !satisfies_d2(d, &c) {
            return Err(Error::NotInvariant {
                rule: "D2",
                witness: c,
            });
        }
        let img = image_class(d, &c);
        let j = match store.find(&img) {
            Some(j) => j,
            None => {
                if store.conflict(&img).is_some() {
                    return Err(Error::NotInvariant {
                        rule: "D1",
                        witness: c,
                    });
                }
                let j = store.push(img);
                image_of.push(usize::MAX);
                queue.push_back(j);
                j
            }
        };
        image_of[i] = j;
    }

    let mut gens: Vec<Option<usize>> = vec![None; store.list.len()];
    for i in 0..store.list.len() {
        generation(d, &store.list, &image_of, &mut gens, i);
    }

    let regions = critical_regions(d, &store.list)?;

    let mut levels: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        levels.entry(g.expect("generation computed")).or_default().push(i);
    }
    for g in 0..depth {
        let current = levels.get(&g).cloned().unwrap_or_default();
        for i in current {
            let c = store.list[i].clone();
            if c.len() < 2 {
                continue;
            }
            for pre in regions.pull_back(d, &c) {
                if store.find(&pre).is_some() {
                    continue;
                }
                if let Some(k) = store.conflict(&pre) {
                    return Err(Error::NotALamination {
                        rule: "E2",
                        witness: vec![pre, store.list[k].clone()],
                    });
                }
                let j = store.push(pre);
                levels.entry(g + 1).or_default().push(j);
            }
        }
    }

    let leaves: BTreeSet<Chord> = store.list.iter().flat_map(|c| hull_edges(c)).collect();
    Geolamination::new(d, depth, leaves, GeneratorMeta::classes(classes.to_vec()))
}

fn generation(
    d: u32,
    list: &[Class],
    image_of: &[usize],
    gens: &mut Vec<Option<usize>>,
    start: usize,
) -> usize {
    let mut chain = Vec::new();
    let mut i = start;
    let base = loop {
        if let Some(g) = gens[i] {
            break g;
        }
        let c = &list[i];
        let critical = image_class(d, c).len() < c.len();
        if critical || c.iter().all(|a| is_periodic(d, a)) {
            gens[i] = Some(0);
            break 0;
        }
        chain.push(i);
        i = image_of[i];
    };
    let mut g = base;
    for j in chain.into_iter().rev() {
        g += 1;
        gens[j] = Some(g);
    }
    gens[start].expect("generation set")
}

/// The critical structure that decides which preimages group into classes.
struct Regions {
    /// Vertices of the critical polygon or quadrilateral, sorted.
    vertices: Vec<Angle>,
    /// When the minor is periodic its class pulls back to the two majors.
    minor: Option<(Class, Vec<Class>)>,
}

impl Regions {
    fn pull_back(&self, d: u32, c: &[Angle]) -> Vec<Class> {
        if let Some((m, majors)) = &self.minor {
            if m.as_slice() == c {
                return majors.clone();
            }
        }
        let target: Class = c.to_vec();
        if image_class(d, &self.vertices) == target {
            return vec![self.vertices.clone()];
        }
        let pre: Vec<Angle> = c.iter().flat_map(|a| a.preimages(d)).collect();
        let n = self.vertices.len();
        let mut out = Vec::new();
        for i in 0..n {
            let (s, e) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
            let mut part: Class = pre
                .iter()
                .filter(|x| in_closed_arc(s, x, e))
                .cloned()
                .collect();
            part.sort();
            part.dedup();
            if image_class(d, &part) == target && part.len() == target.len() {
                out.push(part);
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

fn critical_regions(d: u32, list: &[Class]) -> Result<Regions> {
    let critical: Vec<&Class> = list
        .iter()
        .filter(|c| c.len() >= 2 && image_class(d, c).len() < c.len())
        .collect();
    if let Some(first) = critical.first() {
        if critical.len() > 1 && d == 2 {
            return Err(Error::InvalidInput("more than one critical class".into()));
        }
        return Ok(Regions {
            vertices: (*first).clone(),
            minor: None,
        });
    }
    let edges: BTreeSet<Chord> = list.iter().flat_map(|c| hull_edges(c)).collect();
    let shortest = edges
        .iter()
        .map(chord_length)
        .min()
        .ok_or_else(|| Error::InvalidInput("no non-trivial class".into()))?;
    let minors: Vec<&Chord> = edges.iter().filter(|e| chord_length(e) == shortest).collect();
    if minors.len() != 1 || d != 2 {
        return Err(Error::InvalidInput(
            "critical structure not determined by the classes".into(),
        ));
    }
    let m = minors[0];
    let mut quad: Class = m.p().preimages(d);
    quad.extend(m.q().preimages(d));
    quad.sort();
    let sides = hull_edges(&quad);
    let longest = sides.iter().map(chord_length).max().expect("quadrilateral has sides");
    let majors: Vec<Class> = sides
        .into_iter()
        .filter(|e| chord_length(e) == longest)
        .map(|e| vec![e.p().clone(), e.q().clone()])
        .collect();
    let periodic = is_periodic(d, m.p()) && is_periodic(d, m.q());
    Ok(Regions {
        vertices: quad.clone(),
        minor: Some((
            vec![m.p().clone(), m.q().clone()],
            if periodic { majors } else { vec![quad] },
        )),
    })
}
