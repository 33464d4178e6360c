//! Independent reference computations in machine integers.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use lamina::{Angle, Chord};

/// Preperiod and period of k/q under doubling, by direct iteration.
pub fn orbit_u64(k: u64, q: u64) -> (usize, usize) {
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let mut x = k % q;
    let mut step = 0;
    loop {
        if let Some(&first) = seen.get(&x) {
            return (first, step - first);
        }
        seen.insert(x, step);
        x = (2 * x) % q;
        step += 1;
    }
}

/// Length of the chord between j/q and k/q, as a numerator over q.
pub fn length_u64(j: u64, k: u64, q: u64) -> u64 {
    let d = (j + q - k) % q;
    d.min(q - d)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn crosses(a: (u64, u64), b: (u64, u64)) -> bool {
    let inside = |x: u64| a.0 < x && x < a.1;
    let (p, q) = b;
    p != a.0 && p != a.1 && q != a.0 && q != a.1 && inside(p) != inside(q)
}

/// Minor-lamination leaves with endpoints of exact period 2..=max_period,
/// by Lavaurs' algorithm: period by period, join the smallest unjoined angle
/// to the next unjoined angle of the same period that crosses no earlier leaf.
pub fn lavaurs(max_period: usize) -> BTreeSet<Chord> {
    let denoms: Vec<u64> = (1..=max_period).map(|n| (1u64 << n) - 1).collect();
    let common = denoms.iter().fold(1u64, |acc, &q| acc / gcd(acc, q) * q);
    let mut drawn: Vec<(u64, u64)> = Vec::new();
    for n in 2..=max_period {
        let q = (1u64 << n) - 1;
        let mut free: Vec<u64> = (1..q)
            .filter(|&k| orbit_u64(k, q) == (0, n))
            .map(|k| k * (common / q))
            .collect();
        while let Some(&a) = free.first() {
            let partner = free[1..]
                .iter()
                .copied()
                .find(|&b| !drawn.iter().any(|&d| crosses(d, (a, b))))
                .expect("Lavaurs pairing exists");
            drawn.push((a, partner));
            free.retain(|&x| x != a && x != partner);
        }
    }
    drawn
        .into_iter()
        .map(|(a, b)| Chord::new(Angle::new(a, common), Angle::new(b, common)))
        .collect()
}

/// Every chord j/q, k/q with 0 ≤ j < k < q, for q up to `max_q`.
pub fn chords_up_to(max_q: u64) -> impl Iterator<Item = (u64, u64, u64)> {
    (2..=max_q).flat_map(|q| (0..q).flat_map(move |j| (j + 1..q).map(move |k| (j, k, q))))
}
