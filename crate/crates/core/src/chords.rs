//! Chords of the closed unit disk.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::circle::{arc_length, check_degree, in_open_arc, Angle};
use crate::error::{Error, Result};

/// Unordered pair of angles, stored with `p <= q`. A point of the circle is
/// the degenerate chord `p == q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    p: Angle,
    q: Angle,
}

impl Chord {
    pub fn new(a: Angle, b: Angle) -> Chord {
        if a <= b {
            Chord { p: a, q: b }
        } else {
            Chord { p: b, q: a }
        }
    }

    pub fn point(a: Angle) -> Chord {
        Chord {
            p: a.clone(),
            q: a,
        }
    }

    pub fn p(&self) -> &Angle {
        &self.p
    }

    pub fn q(&self) -> &Angle {
        &self.q
    }

    pub fn endpoints(&self) -> [&Angle; 2] {
        [&self.p, &self.q]
    }

    pub fn is_degenerate(&self) -> bool {
        self.p == self.q
    }

    pub fn has_endpoint(&self, a: &Angle) -> bool {
        &self.p == a || &self.q == a
    }

    pub fn shares_endpoint(&self, other: &Chord) -> bool {
        self.has_endpoint(&other.p) || self.has_endpoint(&other.q)
    }

    /// The endpoint other than `a`; `None` when `a` is not an endpoint.
    pub fn other(&self, a: &Angle) -> Option<&Angle> {
        if &self.p == a {
            Some(&self.q)
        } else if &self.q == a {
            Some(&self.p)
        } else {
            None
        }
    }

    /// Disjoint as closed subsets of the disk.
    pub fn disjoint(&self, other: &Chord) -> bool {
        !self.intersects(other)
    }

    /// Intersect as closed subsets of the disk: crossing or a common point.
    pub fn intersects(&self, other: &Chord) -> bool {
        self.shares_endpoint(other) || linked(self, other)
    }

    pub fn rotate(&self, t: &Angle) -> Chord {
        Chord::new(self.p.rotate(t), self.q.rotate(t))
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{} {}", self.p, self.q)
        }
    }
}

impl fmt::Debug for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self)
    }
}

impl FromStr for Chord {
    type Err = Error;

    /// "p/q r/s", or a single angle for a degenerate chord.
    fn from_str(s: &str) -> Result<Chord> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        match tokens.as_slice() {
            [a] => Ok(Chord::point(a.parse()?)),
            [a, b] => Ok(Chord::new(a.parse()?, b.parse()?)),
            _ => Err(Error::Parse {
                line: 0,
                message: format!("malformed chord {s:?}"),
            }),
        }
    }
}

impl Serialize for Chord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Chord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Chord, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `d` pairwise disjoint chords with a common image.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SiblingCollection {
    pub leaves: Vec<Chord>,
}

/// True iff the open chords cross inside the disk.
pub fn linked(l1: &Chord, l2: &Chord) -> bool {
    if l1.is_degenerate() || l2.is_degenerate() || l1.shares_endpoint(l2) {
        return false;
    }
    in_open_arc(&l1.p, &l2.p, &l1.q) != in_open_arc(&l1.p, &l2.q, &l1.q)
}

/// Length of the shorter arc cut by the chord, in [0, 1/2].
pub fn chord_length(l: &Chord) -> BigRational {
    let a = arc_length(&l.p, &l.q);
    let b = BigRational::one() - &a;
    if l.is_degenerate() {
        a
    } else if a <= b {
        a
    } else {
        b
    }
}

pub fn image(d: u32, l: &Chord) -> Result<Chord> {
    check_degree(d)?;
    Ok(image_unchecked(d, l))
}

pub(crate) fn image_unchecked(d: u32, l: &Chord) -> Chord {
    Chord::new(l.p.times(d), l.q.times(d))
}

pub fn is_critical(d: u32, l: &Chord) -> Result<bool> {
    check_degree(d)?;
    Ok(!l.is_degenerate() && l.p.times(d) == l.q.times(d))
}

pub(crate) fn is_critical_unchecked(d: u32, l: &Chord) -> bool {
    !l.is_degenerate() && l.p.times(d) == l.q.times(d)
}

/// Every way to match the preimages of the endpoints of `l` into `d`
/// pairwise disjoint chords.
pub fn sibling_collections(d: u32, l: &Chord) -> Result<Vec<SiblingCollection>> {
    check_degree(d)?;
    if is_critical_unchecked(d, l) {
        return Err(Error::NoSiblingDecomposition(l.clone()));
    }
    preimage_matchings(d, l)
}

/// Like [`sibling_collections`] but only requires `l` to be non-degenerate,
/// so a critical chord can serve as the common image.
pub fn preimage_matchings(d: u32, l: &Chord) -> Result<Vec<SiblingCollection>> {
    check_degree(d)?;
    if l.is_degenerate() {
        return Err(Error::NoSiblingDecomposition(l.clone()));
    }
    let ps = l.p.preimages(d);
    let qs = l.q.preimages(d);
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..d as usize).collect();
    loop {
        let leaves: Vec<Chord> = ps
            .iter()
            .zip(perm.iter())
            .map(|(a, &j)| Chord::new(a.clone(), qs[j].clone()))
            .collect();
        let disjoint = leaves
            .iter()
            .enumerate()
            .all(|(i, x)| leaves[i + 1..].iter().all(|y| x.disjoint(y)));
        if disjoint {
            let mut leaves = leaves;
            leaves.sort();
            out.push(SiblingCollection { leaves });
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out.sort();
    if out.is_empty() {
        return Err(Error::NoSiblingDecomposition(l.clone()));
    }
    Ok(out)
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
