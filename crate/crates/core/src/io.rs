//! Text formats: laminations (.lam), classes (.cls), critical portraits,
//! pullback scripts and minor-lamination exports.
//!
//! Every format is line based, '#' starts a comment, and angles are written
//! "p/q" or "0". Lamination files carry their generator in "#@" lines so a
//! round trip preserves it.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::chords::Chord;
use crate::circle::Angle;
use crate::error::{Error, Result};
use crate::geolam::{
    CriticalPortrait, GeneratorKind, GeneratorMeta, Geolamination, PortraitMember, Script,
};
use crate::quadratic::QmlApprox;

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { message, .. } => err(line, message),
        other => err(line, other.to_string()),
    })
}

/// Numbered lines with comments and blank lines removed. Metadata lines
/// ("#@ ...") are kept, stripped of the marker, and flagged.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str, bool)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let t = raw.trim();
        if let Some(meta) = t.strip_prefix("#@") {
            return Some((i + 1, meta.trim(), true));
        }
        let t = t.split('#').next().unwrap_or("").trim();
        (!t.is_empty()).then_some((i + 1, t, false))
    })
}

fn angle_set_string(xs: &[Angle]) -> String {
    let inner: Vec<String> = xs.iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Parses "{a1,a2,...}".
pub fn parse_angle_set(s: &str) -> Result<Vec<Angle>> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| err(0, format!("expected {{...}}, got {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|a| a.parse()).collect()
}

fn header_numbers(line: usize, text: &str, words: &[&str]) -> Result<Vec<usize>> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != 2 * words.len() {
        return Err(err(line, format!("expected header \"{}\"", words.join(" N "))));
    }
    words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            if tokens[2 * i] != *w {
                return Err(err(line, format!("expected {w:?}, got {:?}", tokens[2 * i])));
            }
            tokens[2 * i + 1]
                .parse()
                .map_err(|_| err(line, format!("bad number {:?}", tokens[2 * i + 1])))
        })
        .collect()
}

fn member_line(m: &PortraitMember) -> String {
    match m {
        PortraitMember::Leaf(c) => format!("leaf {c}"),
        PortraitMember::Polygon {
            vertices,
            edges_are_leaves,
        } => {
            let tail = if *edges_are_leaves { " with-edges" } else { "" };
            format!("polygon {}{tail}", angle_set_string(vertices))
        }
    }
}

fn parse_member(line: usize, text: &str) -> Result<PortraitMember> {
    if let Some(rest) = text.strip_prefix("leaf") {
        let c: Chord = at_line(line, rest.parse())?;
        if c.is_degenerate() {
            return Err(err(line, "critical leaf is degenerate"));
        }
        return Ok(PortraitMember::Leaf(c));
    }
    if let Some(rest) = text.strip_prefix("polygon") {
        let rest = rest.trim();
        let (set, edges) = match rest.strip_suffix("with-edges") {
            Some(s) => (s.trim(), true),
            None => (rest, false),
        };
        let vertices = at_line(line, parse_angle_set(set))?;
        return Ok(PortraitMember::polygon(vertices, edges));
    }
    Err(err(line, format!("expected leaf or polygon, got {text:?}")))
}

pub fn serialize_lamination(l: &Geolamination) -> String {
    let mut out = format!("degree {} depth {}\n", l.degree, l.depth);
    match l.generator.kind {
        GeneratorKind::ExplicitLeafList => {}
        GeneratorKind::FromCriticalPortrait => {
            out.push_str("#@ generator from-critical-portrait\n");
        }
        GeneratorKind::FromEquivalenceRelation => {
            out.push_str("#@ generator from-equivalence-relation\n");
        }
    }
    if let Some(p) = &l.generator.portrait {
        for m in &p.members {
            let _ = writeln!(out, "#@ portrait-{}", member_line(m));
        }
        if p.siegel {
            out.push_str("#@ siegel\n");
        }
    }
    for c in l.generator.classes.iter().flatten() {
        let _ = writeln!(out, "#@ class {}", angle_set_string(c));
    }
    for c in l.leaves() {
        let _ = writeln!(out, "{c}");
    }
    out
}

pub fn parse_lamination(text: &str) -> Result<Geolamination> {
    let mut it = lines(text).filter(|(_, _, meta)| !meta);
    let (hl, header, _) = it.next().ok_or_else(|| err(1, "missing header"))?;
    let nums = header_numbers(hl, header, &["degree", "depth"])?;
    let (degree, depth) = (nums[0] as u32, nums[1]);
    let mut leaves = Vec::new();
    for (n, t, _) in it {
        let c: Chord = at_line(n, t.parse())?;
        if c.is_degenerate() {
            return Err(err(n, "degenerate leaf"));
        }
        leaves.push(c);
    }

    let mut generator = GeneratorMeta::explicit();
    let mut members = Vec::new();
    let mut siegel = false;
    let mut classes = Vec::new();
    for (n, t, _) in lines(text).filter(|(_, _, meta)| *meta) {
        if let Some(kind) = t.strip_prefix("generator") {
            generator.kind = match kind.trim() {
                "from-critical-portrait" => GeneratorKind::FromCriticalPortrait,
                "from-equivalence-relation" => GeneratorKind::FromEquivalenceRelation,
                "explicit-leaf-list" => GeneratorKind::ExplicitLeafList,
                other => return Err(err(n, format!("unknown generator {other:?}"))),
            };
        } else if let Some(m) = t.strip_prefix("portrait-") {
            members.push(parse_member(n, m)?);
        } else if t == "siegel" {
            siegel = true;
        } else if let Some(c) = t.strip_prefix("class") {
            classes.push(at_line(n, parse_angle_set(c))?);
        } else {
            return Err(err(n, format!("unknown metadata {t:?}")));
        }
    }
    if !members.is_empty() {
        generator.portrait = Some(CriticalPortrait { members, siegel });
    }
    if !classes.is_empty() {
        generator.classes = Some(classes);
    }
    at_line(hl, Geolamination::new(degree, depth, leaves, generator))
}

pub fn serialize_classes(classes: &[Vec<Angle>]) -> String {
    classes
        .iter()
        .map(|c| angle_set_string(c) + "\n")
        .collect()
}

pub fn parse_classes(text: &str) -> Result<Vec<Vec<Angle>>> {
    lines(text)
        .filter(|(_, _, meta)| !meta)
        .map(|(n, t, _)| at_line(n, parse_angle_set(t)))
        .collect()
}

pub fn serialize_portrait(degree: u32, p: &CriticalPortrait) -> String {
    let mut out = format!("degree {degree}\n");
    for m in &p.members {
        out.push_str(&member_line(m));
        out.push('\n');
    }
    if p.siegel {
        out.push_str("siegel\n");
    }
    out
}

pub fn parse_portrait(text: &str) -> Result<(u32, CriticalPortrait)> {
    let mut it = lines(text).filter(|(_, _, meta)| !meta);
    let (hl, header, _) = it.next().ok_or_else(|| err(1, "missing header"))?;
    let degree = header_numbers(hl, header, &["degree"])?[0] as u32;
    let mut p = CriticalPortrait::default();
    for (n, t, _) in it {
        if t == "siegel" {
            p.siegel = true;
        } else {
            p.members.push(parse_member(n, t)?);
        }
    }
    if p.members.is_empty() {
        return Err(err(hl, "portrait has no members"));
    }
    Ok((degree, p))
}

pub fn serialize_script(s: &Script) -> String {
    let mut out = String::new();
    for (leaf, pre) in &s.choices {
        let rhs: Vec<String> = pre.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{leaf} -> {}", rhs.join(" ; "));
    }
    out
}

/// Lines "p/q r/s -> p/q r/s ; p/q r/s".
pub fn parse_script(text: &str) -> Result<Script> {
    let mut s = Script::new();
    for (n, t, meta) in lines(text) {
        if meta {
            continue;
        }
        let (lhs, rhs) = t
            .split_once("->")
            .ok_or_else(|| err(n, "expected \"leaf -> preimage ; preimage\""))?;
        let leaf: Chord = at_line(n, lhs.parse())?;
        let pre: Vec<Chord> = rhs
            .split(';')
            .map(|c| at_line(n, c.parse()))
            .collect::<Result<_>>()?;
        if s.choices.contains_key(&leaf) {
            return Err(err(n, format!("{leaf:?} listed twice")));
        }
        s = s.with(leaf, pre);
    }
    Ok(s)
}

/// Header "qml max_period K", then one leaf per line; a single angle is a
/// class on its own.
pub fn serialize_qml(q: &QmlApprox) -> String {
    let mut out = format!("qml max_period {}\n", q.max_period);
    for c in &q.leaves {
        let _ = writeln!(out, "{c}");
    }
    for a in &q.points {
        let _ = writeln!(out, "{a}");
    }
    out
}

pub fn parse_qml(text: &str) -> Result<QmlApprox> {
    let mut it = lines(text).filter(|(_, _, meta)| !meta);
    let (hl, header, _) = it.next().ok_or_else(|| err(1, "missing header"))?;
    let max_period = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["qml", "max_period", k] => k
            .parse()
            .map_err(|_| err(hl, format!("bad number {k:?}")))?,
        _ => return Err(err(hl, "expected header \"qml max_period K\"")),
    };
    let mut leaves = BTreeSet::new();
    let mut points = BTreeSet::new();
    for (n, t, _) in it {
        let c: Chord = at_line(n, t.parse())?;
        if c.is_degenerate() {
            points.insert(c.p().clone());
        } else {
            leaves.insert(c);
        }
    }
    Ok(QmlApprox {
        max_period,
        leaves,
        points,
    })
}
