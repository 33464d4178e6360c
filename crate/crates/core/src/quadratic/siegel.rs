//! Points whose orbits stay in the closed semicircle cut off by a diameter.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{half, D};
use crate::chords::{chord_length, Chord};
use crate::circle::{in_closed_arc, period_of, Angle};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiegelSample {
    pub diameter: Chord,
    pub iterations: usize,
    pub max_denominator: u64,
    /// Sampled angles whose first `iterations` images stay in the semicircle,
    /// plus both endpoints of the diameter.
    pub survivors: Vec<Angle>,
    /// Survivors that are periodic with their whole cycle in the semicircle.
    pub periodic: Vec<Angle>,
}

impl SiegelSample {
    /// No periodic point survived the sample.
    pub fn certifies_siegel(&self) -> bool {
        self.periodic.is_empty()
    }
}

pub fn siegel_set(l: &Chord, iterations: usize) -> Result<SiegelSample> {
    if chord_length(l) != half() {
        return Err(Error::InvalidInput(format!("{l:?} is not a diameter")));
    }
    if l.has_endpoint(&Angle::zero()) {
        return Err(Error::InvalidInput("the diameter {0,1/2} is excluded".into()));
    }
    // l.p() < 1/2 < l.q(), so [p, q] is the half avoiding 0.
    let (p, q) = (l.p().clone(), l.q().clone());
    let inside = |x: &Angle| in_closed_arc(&p, x, &q);
    let max_denominator = (2 * iterations as u64).max(16);
    let mut survivors = vec![p.clone(), q.clone()];
    for den in 1..=max_denominator {
        for num in 0..den {
            if num.gcd(&den) != 1 {
                continue;
            }
            let x = Angle::from_ratio(BigRational::new(BigInt::from(num), BigInt::from(den)));
            if x == p || x == q || !inside(&x) {
                continue;
            }
            let mut y = x.clone();
            let stays = (0..iterations).all(|_| {
                y = y.times(D);
                inside(&y)
            });
            if stays {
                survivors.push(x);
            }
        }
    }
    survivors.sort();
    let periodic = survivors
        .iter()
        .filter(|x| match period_of(D, x) {
            Some(n) => {
                let mut y = (*x).clone();
                (0..n).all(|_| {
                    y = y.times(D);
                    inside(&y)
                })
            }
            None => false,
        })
        .cloned()
        .collect();
    Ok(SiegelSample {
        diameter: l.clone(),
        iterations,
        max_denominator,
        survivors,
        periodic,
    })
}
