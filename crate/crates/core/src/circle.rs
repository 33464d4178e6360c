//! Exact arithmetic on the circle ℝ/ℤ.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational point of the circle, stored reduced and normalized into [0, 1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Angle(BigRational);

impl Ord for Angle {
    fn cmp(&self, other: &Angle) -> std::cmp::Ordering {
        // Reduced fractions with a shared denominator order by numerator.
        if self.0.denom() == other.0.denom() {
            self.0.numer().cmp(other.0.numer())
        } else {
            (self.0.numer() * other.0.denom()).cmp(&(other.0.numer() * self.0.denom()))
        }
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Angle) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Angle {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Angle {
        let denom = denom.into();
        assert!(!denom.is_zero(), "angle with zero denominator");
        Angle::from_ratio(BigRational::new(numer.into(), denom))
    }

    pub fn from_ratio(r: BigRational) -> Angle {
        if !r.numer().is_negative() && r.numer() < r.denom() {
            return Angle(r);
        }
        let floor = r.floor();
        Angle(r - floor)
    }

    pub fn zero() -> Angle {
        Angle(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    /// Rotation by `t`.
    pub fn rotate(&self, t: &Angle) -> Angle {
        Angle::from_ratio(&self.0 + &t.0)
    }

    /// Multiplication by `d` modulo 1, without the degree check.
    pub fn times(&self, d: u32) -> Angle {
        // For reduced n/q, gcd(nd mod q, q) = gcd(d, q), so only a small gcd is needed.
        let q = self.0.denom();
        let n = (self.0.numer() * d).mod_floor(q);
        let g = small_gcd(d, q);
        if n.is_zero() {
            Angle::zero()
        } else if g == 1 {
            Angle(BigRational::new_raw(n, q.clone()))
        } else {
            Angle(BigRational::new_raw(n / g, q / g))
        }
    }

    /// All `d` preimages under σ_d, in increasing order.
    pub fn preimages(&self, d: u32) -> Vec<Angle> {
        // gcd(n + kq, dq) = gcd(n + kq, d) because n/q is reduced.
        let (n, q) = (self.0.numer(), self.0.denom());
        let dq = q * d;
        (0..d)
            .map(|k| {
                let m = n + q * k;
                if m.is_zero() {
                    return Angle::zero();
                }
                let g = small_gcd(d, &m);
                Angle(BigRational::new_raw(&m / g, &dq / g))
            })
            .collect()
    }
}

/// gcd(d, x) for a small positive d.
fn small_gcd(d: u32, x: &BigInt) -> u32 {
    let r = (x % d).to_u32().expect("remainder of a non-negative value");
    r.gcd(&d)
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// Accepts "p/q" or an integer. Values outside [0, 1) are reduced mod 1.
    fn from_str(s: &str) -> Result<Angle> {
        let bad = || Error::Parse {
            line: 0,
            message: format!("malformed angle {s:?}"),
        };
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() || q.is_negative() {
                    return Err(bad());
                }
                Ok(Angle::new(p, q))
            }
            None => {
                let p: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Angle::new(p, 1))
            }
        }
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Angle, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Closure {
    Open,
    Closed,
    HalfOpenLeft,
    HalfOpenRight,
}

/// Positively oriented arc from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub start: Angle,
    pub end: Angle,
    pub closure: Closure,
}

impl Arc {
    pub fn open(start: Angle, end: Angle) -> Arc {
        Arc {
            start,
            end,
            closure: Closure::Open,
        }
    }

    pub fn closed(start: Angle, end: Angle) -> Arc {
        Arc {
            start,
            end,
            closure: Closure::Closed,
        }
    }

    pub fn length(&self) -> BigRational {
        arc_length(&self.start, &self.end)
    }

    pub fn contains(&self, x: &Angle) -> bool {
        if x == &self.start {
            return matches!(self.closure, Closure::Closed | Closure::HalfOpenRight);
        }
        if x == &self.end {
            return matches!(self.closure, Closure::Closed | Closure::HalfOpenLeft);
        }
        if self.start == self.end {
            return false;
        }
        in_open_arc(&self.start, x, &self.end)
    }
}

/// Orbit data of a point: `orbit` lists the distinct iterates in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInfo {
    pub preperiod: usize,
    pub period: usize,
    pub orbit: Vec<Angle>,
}

impl OrbitInfo {
    pub fn is_periodic(&self) -> bool {
        self.preperiod == 0
    }
}

pub fn check_degree(d: u32) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDegree(d))
    } else {
        Ok(())
    }
}

/// σ_d(a) = d·a mod 1.
pub fn sigma(d: u32, a: &Angle) -> Result<Angle> {
    check_degree(d)?;
    Ok(a.times(d))
}

/// n-th iterate of σ_d.
pub fn sigma_n(d: u32, a: &Angle, n: usize) -> Angle {
    let mut x = a.clone();
    for _ in 0..n {
        x = x.times(d);
    }
    x
}

/// True iff `b` lies in the open positively oriented arc (a, c).
pub fn circular_order(a: &Angle, b: &Angle, c: &Angle) -> Result<bool> {
    if a == b || b == c || a == c {
        return Err(Error::DegenerateTriple);
    }
    Ok(in_open_arc(a, b, c))
}

/// `b ∈ (a, c)` for the positively oriented open arc; empty when a = c.
pub fn in_open_arc(a: &Angle, b: &Angle, c: &Angle) -> bool {
    if a < c {
        a < b && b < c
    } else if a > c {
        b > a || b < c
    } else {
        false
    }
}

/// `b ∈ [a, c]`, the closed positively oriented arc; {a} when a = c.
pub fn in_closed_arc(a: &Angle, b: &Angle, c: &Angle) -> bool {
    b == a || b == c || in_open_arc(a, b, c)
}

/// (b − a) mod 1.
pub fn arc_length(a: &Angle, b: &Angle) -> BigRational {
    let diff = b.value() - a.value();
    if diff.is_negative() {
        diff + BigRational::one()
    } else {
        diff
    }
}

/// Minimal preperiod and period of `a` under σ_d.
pub fn orbit_info(d: u32, a: &Angle) -> Result<OrbitInfo> {
    check_degree(d)?;
    let mut seen: HashMap<Angle, usize> = HashMap::new();
    let mut orbit = Vec::new();
    let mut x = a.clone();
    loop {
        if let Some(&i) = seen.get(&x) {
            let period = orbit.len() - i;
            return Ok(OrbitInfo {
                preperiod: i,
                period,
                orbit,
            });
        }
        seen.insert(x.clone(), orbit.len());
        let next = x.times(d);
        orbit.push(x);
        x = next;
    }
}

/// Period of `a` under σ_d when `a` is periodic. Uses the denominator test,
/// so it never iterates non-periodic points.
pub fn period_of(d: u32, a: &Angle) -> Option<usize> {
    let q = a.denom();
    if !q.gcd(&BigInt::from(d)).is_one() {
        return None;
    }
    if q.is_one() {
        return Some(1);
    }
    let dd = BigInt::from(d);
    let mut pow = dd.clone() % q;
    let mut k = 1usize;
    while !pow.is_one() {
        pow = (pow * &dd) % q;
        k += 1;
    }
    Some(k)
}

pub fn is_periodic(d: u32, a: &Angle) -> bool {
    period_of(d, a).is_some()
}
