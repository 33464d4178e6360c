//! The eight acceptance criteria. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use lamina::chords::image;
use lamina::gaps::{EdgeFate, Location};
use lamina::quadratic::minors_intersect;
use lamina::{
    analyze_cone, boundary_degree, chord_length, check_edge_fate, classify_gap, cone_at,
    critical_set, fixtures, gap_image, gap_period, gaps_of, hausdorff_distance,
    is_sibling_invariant, is_thurston_invariant, limit_geolaminations, majors_and_minor,
    minor_quotient, orbit_info, period_of, psi, qml_approx, sibling_collections, verify_unlinked,
    Angle, Chord, CriticalSet, GapKind, Geolamination,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ch(s: &str) -> Chord {
    s.parse().unwrap()
}

fn ang(s: &str) -> Angle {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn invariance_discrimination() -> Outcome {
    let l12 = ok(fixtures::l12(6))?;
    ensure(is_sibling_invariant(&l12).passed(), || "L12 fails the sibling check".into())?;
    ensure(is_thurston_invariant(&l12).passed(), || "L12 fails the Thurston check".into())?;
    let amended = ok(fixtures::l12_amended(6))?;
    ensure(is_thurston_invariant(&amended).passed(), || {
        format!("amended L12 fails Thurston: {}", is_thurston_invariant(&amended).to_json())
    })?;
    let r = is_sibling_invariant(&amended);
    ensure(!r.passed(), || "amended L12 passes the sibling check".into())?;
    let witnessed = r
        .violations
        .iter()
        .any(|v| v.witness.first() == Some(&ch("0 1/4")));
    ensure(witnessed, || format!("no violation witnessed by {{0,1/4}}: {}", r.to_json()))?;
    Ok(format!("L12 passes both; amended L12 fails sibling at {{0,1/4}} ({} leaves)", amended.len()))
}

fn pullback_equivalence() -> Outcome {
    for depth in 4..=8 {
        let pairs = [
            ("basilica", fixtures::basilica(depth), fixtures::basilica_from_classes(depth)),
            ("rabbit", fixtures::rabbit(depth), fixtures::rabbit_from_classes(depth)),
        ];
        for (name, a, b) in pairs {
            let (a, b) = (ok(a)?, ok(b)?);
            ensure(a.leaves() == b.leaves(), || {
                let only_a: Vec<_> = a.leaves().difference(b.leaves()).take(4).collect();
                let only_b: Vec<_> = b.leaves().difference(a.leaves()).take(4).collect();
                format!("{name} depth {depth}: pullback-only {only_a:?}, classes-only {only_b:?}")
            })?;
        }
    }
    Ok("basilica and rabbit agree at depths 4 to 8".into())
}

fn qml_census() -> Outcome {
    for k in 1..=4 {
        let q = qml_approx(k, 4);
        let oracle = common::lavaurs(k);
        ensure(q.leaves == oracle, || {
            format!("period ≤ {k}: got {:?}, oracle {:?}", q.leaves, oracle)
        })?;
        let l = ok(Geolamination::explicit(2, 0, q.leaves.iter().cloned()))?;
        ensure(verify_unlinked(&l).passed(), || format!("period ≤ {k}: leaves cross"))?;
    }
    let q = qml_approx(4, 4);
    let at = |n: usize| -> BTreeSet<Chord> {
        q.leaves
            .iter()
            .filter(|c| period_of(2, c.p()) == Some(n))
            .cloned()
            .collect()
    };
    ensure(at(2) == [ch("1/3 2/3")].into(), || format!("period 2: {:?}", at(2)))?;
    let three: BTreeSet<Chord> = ["1/7 2/7", "3/7 4/7", "5/7 6/7"].map(ch).into();
    ensure(at(3) == three, || format!("period 3: {:?}", at(3)))?;
    Ok(format!("{} leaves up to period 4 match Lavaurs", q.leaves.len()))
}

fn gap_taxonomy() -> Outcome {
    let basilica = ok(fixtures::basilica(6))?;
    let gs = ok(gaps_of(&basilica))?;
    let u = ok(critical_set(&basilica))?.vertices();
    let Location::Gap(id) = gs.locate(&u) else {
        return Err("basilica critical gap not found".into());
    };
    let c = ok(classify_gap(&basilica, &gs, gs.gap(id)))?;
    ensure(c.kind == GapKind::Fatou { degree: 2 } && c.period == Some(2), || {
        format!("basilica critical gap: {c:?}")
    })?;

    let rabbit = ok(fixtures::rabbit(6))?;
    let gs = ok(gaps_of(&rabbit))?;
    let Location::Gap(id) = gs.locate(&[ang("1/7"), ang("2/7"), ang("4/7")]) else {
        return Err("rabbit triangle not found".into());
    };
    let c = ok(classify_gap(&rabbit, &gs, gs.gap(id)))?;
    ensure(c.kind == GapKind::Finite { vertices: 3 } && c.period == Some(1), || {
        format!("rabbit triangle: {c:?}")
    })?;

    let l12 = ok(fixtures::l12(6))?;
    let gs = ok(gaps_of(&l12))?;
    let g = gs
        .gaps()
        .iter()
        .find(|g| g.edges.contains(&ch("0 1/2")) && g.edges.contains(&ch("1/4 1/2")))
        .ok_or("L12 gap above the diameter not found")?;
    let c = ok(classify_gap(&l12, &gs, g))?;
    ensure(c.kind == GapKind::Caterpillar, || format!("L12 gap G: {c:?}"))?;

    let mut caterpillars = 0;
    let mut edges_checked = 0;
    let family = [
        basilica,
        rabbit,
        l12,
        ok(fixtures::airplane(5))?,
        ok(fixtures::l12_fan(5))?,
        ok(fixtures::siegel(4))?,
    ];
    for l in &family {
        let gs = ok(gaps_of(l))?;
        for g in gs.gaps() {
            let Ok(Some((m, k))) = gap_period(&gs, g, 4096) else {
                continue;
            };
            if ok(classify_gap(l, &gs, g))?.kind == GapKind::Caterpillar {
                caterpillars += 1;
                let mut cur = g.id;
                for _ in 0..m {
                    match ok(gap_image(&gs, gs.gap(cur)))? {
                        lamina::gaps::GapImage::Gap(n) => cur = n,
                        other => return Err(format!("gap {} collapses to {other:?}", g.id)),
                    }
                }
                let periodic = gs.gap(cur);
                let deg = ok(boundary_degree(&gs, periodic, k))?;
                let has_periodic = periodic
                    .vertices
                    .iter()
                    .any(|v| orbit_info(2, v).map(|o| o.preperiod == 0).unwrap_or(false));
                ensure(deg == 1 && has_periodic, || {
                    format!("caterpillar {:?}: degree {deg}, periodic vertex {has_periodic}", g.vertices)
                })?;
            }
            for (e, fate) in check_edge_fate(l, g).fates {
                edges_checked += 1;
                let iterate = |c: &Chord, n: usize| {
                    (0..n).fold(c.clone(), |x, _| image(2, &x).expect("degree 2"))
                };
                let right = match fate {
                    EdgeFate::Periodic { period } => iterate(&e, period) == e,
                    EdgeFate::Preperiodic { preperiod, period } => {
                        let base = iterate(&e, preperiod);
                        iterate(&base, period) == base && iterate(&e, preperiod - 1) != iterate(&base, period - 1)
                    }
                    EdgeFate::Precritical { steps } => {
                        let c = iterate(&e, steps);
                        !c.is_degenerate() && image(2, &c).expect("degree 2").is_degenerate()
                    }
                };
                ensure(right, || format!("edge {e:?} has wrong fate {fate:?}"))?;
            }
        }
    }
    Ok(format!(
        "fatou(2)/2, finite(3)/1, caterpillar; {caterpillars} caterpillars, {edges_checked} edge fates verified"
    ))
}

fn preimage_set(m: &Chord) -> Vec<Angle> {
    let mut v: Vec<Angle> = m.endpoints().iter().flat_map(|a| a.preimages(2)).collect();
    v.sort();
    v.dedup();
    v
}

fn minors_connected(minors: &[Chord]) -> bool {
    if minors.is_empty() {
        return true;
    }
    let mut reached = vec![false; minors.len()];
    let mut stack = vec![0];
    reached[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..minors.len() {
            if !reached[j] && minors_intersect(&minors[i], &minors[j]) {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

fn limit_laminations() -> Outcome {
    let mut total = 0;
    for (name, lq) in [("basilica", fixtures::basilica(6)), ("rabbit", fixtures::rabbit(6))] {
        let lq = ok(lq)?;
        let limits = ok(limit_geolaminations(&lq, 6))?;
        ensure(!limits.is_empty(), || format!("{name}: no limits"))?;
        let mut minors = vec![ok(majors_and_minor(&lq))?.minor];
        for l in &limits {
            let r = is_sibling_invariant(l);
            ensure(r.passed(), || format!("{name} limit not sibling invariant: {}", r.to_json()))?;
            let m = ok(majors_and_minor(l))?.minor;
            let pre = preimage_set(&m);
            let cs = ok(critical_set(l))?;
            let matches = match &cs {
                CriticalSet::Leaf { leaf } => m.is_degenerate() && leaf.endpoints().map(|a| a.clone()).to_vec() == pre,
                CriticalSet::Polygon { vertices } => !m.is_degenerate() && *vertices == pre,
                CriticalSet::Gap { .. } => false,
            };
            ensure(matches, || format!("{name}: critical set {cs:?} is not the preimage of {m:?}"))?;
            let vertices: BTreeSet<&Angle> = l.leaves().iter().flat_map(|c| c.endpoints()).collect();
            for v in vertices.into_iter().filter(|v| period_of(2, v).is_some()) {
                let a = ok(analyze_cone(l, &cone_at(l, v)))?;
                ensure(a.infinite || a.leaves.len() <= 2, || {
                    format!("{name}: finite cone at {v} has {:?}", a.leaves)
                })?;
            }
            minors.push(m);
        }
        ensure(minors_connected(&minors), || format!("{name}: minors {minors:?} not connected"))?;
        total += limits.len();
    }
    Ok(format!("{total} limit geolaminations checked"))
}

fn quotient() -> Outcome {
    let qml = qml_approx(3, 4);
    let generators = [
        (ok(fixtures::basilica(5))?, vec![ang("1/3"), ang("2/3")]),
        (ok(fixtures::rabbit(5))?, vec![ang("1/7"), ang("2/7")]),
        (ok(fixtures::airplane(5))?, vec![ang("3/7"), ang("4/7")]),
    ];
    let mut family = Vec::new();
    let mut expected = Vec::new();
    for (lq, class) in &generators {
        family.push(lq.clone());
        expected.push(class.clone());
        for l in ok(limit_geolaminations(lq, 5))? {
            family.push(l);
            expected.push(class.clone());
        }
    }
    let classes = ok(minor_quotient(&family, &qml))?;
    ensure(classes.len() == 3, || {
        format!("{} classes: {:?}", classes.len(), classes.iter().map(|c| &c.minors).collect::<Vec<_>>())
    })?;
    for (l, want) in family.iter().zip(&expected) {
        let got = ok(psi(l, &qml))?;
        ensure(got == *want, || format!("psi gives {got:?}, expected {want:?}"))?;
    }
    Ok(format!("{} members in 3 classes", family.len()))
}

fn hausdorff() -> Outcome {
    let basilica = ok(fixtures::basilica(4))?;
    let d0 = hausdorff_distance(&basilica, &basilica.clone(), 256);
    ensure(d0 == 0.0, || format!("d(L, L) = {d0}"))?;
    let a = ok(Geolamination::explicit(2, 0, [ch("0 1/2")]))?;
    let b = ok(Geolamination::explicit(2, 0, [ch("1/4 3/4")]))?;
    let d = hausdorff_distance(&a, &b, 256);
    ensure((d - 0.5).abs() <= 2.0 / 256.0, || format!("diameters at distance {d}"))?;

    let res = 64;
    let mut pool = vec![
        basilica,
        ok(fixtures::rabbit(4))?,
        ok(fixtures::airplane(4))?,
        ok(fixtures::l12(4))?,
        ok(fixtures::l12_fan(4))?,
        ok(fixtures::l12_amended(4))?,
        ok(fixtures::siegel(3))?,
        a,
        b,
    ];
    for depth in 1..=3 {
        pool.push(ok(fixtures::basilica(depth))?);
        pool.push(ok(fixtures::rabbit(depth))?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut memo: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut dist = |i: usize, j: usize| {
        let key = (i.min(j), i.max(j));
        *memo
            .entry(key)
            .or_insert_with(|| hausdorff_distance(&pool[key.0], &pool[key.1], res))
    };
    let slack = 4.0 / res as f64;
    for _ in 0..100 {
        let (x, y, z) = (
            rng.gen_range(0..pool.len()),
            rng.gen_range(0..pool.len()),
            rng.gen_range(0..pool.len()),
        );
        let (xz, xy, yz) = (dist(x, z), dist(x, y), dist(y, z));
        ensure(xz <= xy + yz + slack, || format!("triangle ({x},{y},{z}): {xz} > {xy} + {yz}"))?;
    }
    Ok(format!("diameters at {d:.4}; 100 triangles hold"))
}

fn circle_kernel() -> Outcome {
    let mut angles = 0u64;
    for q in 1..=255u64 {
        for k in (0..q).filter(|&k| common::gcd(k, q) == 1) {
            let a = Angle::new(k, q);
            let info = ok(orbit_info(2, &a))?;
            let (pre, per) = common::orbit_u64(k, q);
            ensure((info.preperiod, info.period) == (pre, per), || {
                format!("{a}: orbit_info ({}, {}), oracle ({pre}, {per})", info.preperiod, info.period)
            })?;
            if q % 2 == 1 {
                ensure(pre == 0 && period_of(2, &a) == Some(per), || format!("{a} not periodic"))?;
            }
            angles += 1;
        }
    }

    // Every chord between reduced angles whose common denominator is at most
    // 255, each visited once at its least common denominator.
    let mut chords = 0u64;
    let mut collections = 0u64;
    for (j, k, q) in common::chords_up_to(255).filter(|&(j, k, q)| common::gcd(common::gcd(j, k), q) == 1) {
        let c = Chord::new(Angle::new(j, q), Angle::new(k, q));
        let len = common::length_u64(j, k, q);
        let img = common::length_u64(2 * j % q, 2 * k % q, q);
        let law = if 4 * len <= q { 2 * len } else { q - 2 * len };
        ensure(img == law, || format!("oracle length law fails at {c:?}"))?;
        let got = chord_length(&ok(image(2, &c))?);
        ensure(got == *Angle::new(img, q).value(), || format!("image length of {c:?} is {got}"))?;
        chords += 1;

        if 2 * (k - j) == q {
            continue;
        }
        for s in ok(sibling_collections(2, &c))? {
            let [x, y] = [&s.leaves[0], &s.leaves[1]];
            ensure(x.disjoint(y), || format!("siblings {x:?} {y:?} of {c:?} meet"))?;
            ensure(ok(image(2, x))? == c && ok(image(2, y))? == c, || {
                format!("siblings {x:?} {y:?} do not map to {c:?}")
            })?;
            collections += 1;
        }
    }
    Ok(format!("{angles} angles, {chords} chords, {collections} sibling collections"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("invariance discrimination", invariance_discrimination),
        ("pullback/equivalence agreement", pullback_equivalence),
        ("minor lamination census", qml_census),
        ("gap taxonomy", gap_taxonomy),
        ("limit geolaminations", limit_laminations),
        ("quotient", quotient),
        ("Hausdorff sanity", hausdorff),
        ("circle and chord kernel", circle_kernel),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
