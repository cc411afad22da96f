use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use super::{FuzzyError, Result, TOLERANCE};

/// A closed bounded interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(FuzzyError::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Result<Self> {
        Interval::new(x, x)
    }

    /// Builds an interval whose bounds were computed and may have crossed
    /// by rounding noise no larger than [`TOLERANCE`].
    pub(crate) fn new_lenient(lo: f64, hi: f64) -> Result<Self> {
        if lo > hi && lo - hi <= TOLERANCE {
            let mid = 0.5 * (lo + hi);
            return Interval::new(mid, mid);
        }
        Interval::new(lo, hi)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Containment of `other` in `self`, up to `tol` on each bound.
    pub fn contains_interval(&self, other: &Interval, tol: f64) -> bool {
        self.lo <= other.lo + tol && other.hi <= self.hi + tol
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    /// Multiplication by a non-negative scalar.
    pub fn scale(&self, r: f64) -> Interval {
        debug_assert!(r >= 0.0);
        Interval {
            lo: r * self.lo,
            hi: r * self.hi,
        }
    }

    pub(crate) fn clamp_to(&self, bounds: &Interval) -> Interval {
        Interval {
            lo: self.lo.clamp(bounds.lo, bounds.hi),
            hi: self.hi.clamp(bounds.lo, bounds.hi),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[f64; 2]>::deserialize(d)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}
