use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;

use super::knots::KnotProfile;
use super::{AlphaLevels, FuzzyError, Interval, Result, COMPRESS_TOLERANCE, TOLERANCE};

/// A piecewise-linear fuzzy number given by its cuts at finitely many levels.
///
/// Invariants: one cut per level, cuts nested (higher levels inside lower
/// ones) and a non-empty core. Values are immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseMF {
    levels: AlphaLevels,
    cuts: Vec<Interval>,
}

impl PiecewiseMF {
    pub fn new(levels: AlphaLevels, cuts: Vec<Interval>) -> Result<Self> {
        if cuts.len() != levels.len() {
            return Err(FuzzyError::LengthMismatch {
                expected: levels.len(),
                got: cuts.len(),
            });
        }
        for (i, w) in cuts.windows(2).enumerate() {
            if !w[0].contains_interval(&w[1], TOLERANCE) {
                return Err(FuzzyError::NotNested {
                    lower: levels.as_slice()[i],
                    upper: levels.as_slice()[i + 1],
                });
            }
        }
        Ok(PiecewiseMF { levels, cuts })
    }

    /// Builds from `(alpha, lo, hi)` triples in any order.
    pub fn from_cuts(cuts: &[(f64, f64, f64)]) -> Result<Self> {
        let mut sorted = cuts.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let levels = AlphaLevels::new(sorted.iter().map(|c| c.0).collect())?;
        let cuts = sorted
            .iter()
            .map(|&(_, lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        PiecewiseMF::new(levels, cuts)
    }

    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self> {
        PiecewiseMF::trapezoidal(a, b, b, c)
    }

    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        PiecewiseMF::from_cuts(&[(0.0, a, d), (1.0, b, c)])
    }

    /// Crisp number `x`: every cut is `[x, x]`.
    pub fn point(x: f64) -> Result<Self> {
        PiecewiseMF::trapezoidal(x, x, x, x)
    }

    pub fn levels(&self) -> &AlphaLevels {
        &self.levels
    }

    pub fn cuts(&self) -> &[Interval] {
        &self.cuts
    }

    /// `(alpha, cut)` pairs in ascending level order.
    pub fn stored_cuts(&self) -> impl DoubleEndedIterator<Item = (f64, Interval)> + '_ {
        self.levels.iter().zip(self.cuts.iter().copied())
    }

    pub fn support(&self) -> Interval {
        self.cuts[0]
    }

    pub fn core(&self) -> Interval {
        *self.cuts.last().unwrap()
    }

    /// The α-cut; endpoints interpolate linearly between stored levels.
    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(FuzzyError::Domain(format!("alpha {alpha} is outside [0, 1]")));
        }
        if let Some(i) = self.levels.position(alpha) {
            return Ok(self.cuts[i]);
        }
        let lv = self.levels.as_slice();
        let u = lv.partition_point(|&a| a < alpha);
        let d = u - 1;
        let t = (alpha - lv[d]) / (lv[u] - lv[d]);
        let (cd, cu) = (self.cuts[d], self.cuts[u]);
        let lo = lerp_clamped(cd.lo(), cu.lo(), t);
        let hi = lerp_clamped(cd.hi(), cu.hi(), t);
        Interval::new_lenient(lo, hi)
    }

    /// Membership degree of `x`. At a vertical jump the upper value is
    /// returned, which keeps every cut closed.
    pub fn evaluate(&self, x: f64) -> f64 {
        let support = self.support();
        if !support.contains(x) {
            return 0.0;
        }
        if self.core().contains(x) {
            return 1.0;
        }
        let lv = self.levels.as_slice();
        let i = (0..self.cuts.len())
            .rev()
            .find(|&i| self.cuts[i].contains(x))
            .unwrap_or(0);
        let u = i + 1;
        let (ci, cu) = (self.cuts[i], self.cuts[u]);
        let t = if x < cu.lo() {
            (x - ci.lo()) / (cu.lo() - ci.lo())
        } else {
            (ci.hi() - x) / (ci.hi() - cu.hi())
        };
        let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
        lv[i] + t * (lv[u] - lv[i])
    }

    /// The bracketing pair of levels of `levels` around the membership of `x`:
    /// `(0, 0)` outside the support, `(1, 1)` on the core, otherwise the
    /// highest level whose cut contains `x` and the lowest whose cut does not.
    pub fn beta(&self, levels: &[f64], x: f64) -> Result<(f64, f64)> {
        let levels = AlphaLevels::new(levels.to_vec())?;
        if !self.support().contains(x) {
            return Ok((0.0, 0.0));
        }
        if self.core().contains(x) {
            return Ok((1.0, 1.0));
        }
        let mut below = 0.0;
        let mut above = 1.0;
        for a in levels.iter() {
            if self.alpha_cut(a)?.contains(x) {
                below = a;
            } else {
                above = a;
                break;
            }
        }
        Ok((below, above))
    }

    /// Removes stored levels whose cut is the linear interpolant of the
    /// neighbouring kept levels (within [`COMPRESS_TOLERANCE`]).
    pub fn compress(&self) -> PiecewiseMF {
        self.compress_with(COMPRESS_TOLERANCE)
    }

    pub fn compress_with(&self, tol: f64) -> PiecewiseMF {
        let lv = self.levels.as_slice();
        let n = lv.len();
        let mut keep = vec![0usize];
        for i in 1..n - 1 {
            let last = *keep.last().unwrap();
            let t = (lv[i] - lv[last]) / (lv[i + 1] - lv[last]);
            let (a, b, c) = (self.cuts[last], self.cuts[i], self.cuts[i + 1]);
            let lo = a.lo() + t * (c.lo() - a.lo());
            let hi = a.hi() + t * (c.hi() - a.hi());
            if (lo - b.lo()).abs() > tol || (hi - b.hi()).abs() > tol {
                keep.push(i);
            }
        }
        keep.push(n - 1);
        PiecewiseMF {
            levels: AlphaLevels::new(keep.iter().map(|&i| lv[i]).collect())
                .expect("subset of valid levels"),
            cuts: keep.iter().map(|&i| self.cuts[i]).collect(),
        }
    }

    /// Same membership function on a finer level set.
    pub fn refine(&self, levels: &AlphaLevels) -> PiecewiseMF {
        let levels = self.levels.union(levels);
        let cuts = levels
            .iter()
            .map(|a| self.alpha_cut(a).expect("level in [0, 1]"))
            .collect();
        PiecewiseMF { levels, cuts }
    }

    /// Knot profile `(x, membership)`: left side upward, then right side
    /// downward. Repeated abscissas encode vertical segments.
    pub fn knots(&self) -> KnotProfile {
        let mut pts: Vec<(f64, f64)> = self.stored_cuts().map(|(a, c)| (c.lo(), a)).collect();
        pts.extend(self.stored_cuts().rev().map(|(a, c)| (c.hi(), a)));
        KnotProfile::from_sorted_unchecked(pts)
    }

    /// Builds the fuzzy number described by a knot profile.
    pub fn from_knots(profile: &KnotProfile) -> Result<Self> {
        profile.to_piecewise()
    }

    /// Left and right one-sided limits of the membership at `x`.
    pub fn one_sided(&self, x: f64) -> (f64, f64) {
        let k = self.knots();
        (k.left_limit(x), k.right_limit(x))
    }
}

fn lerp_clamped(a: f64, b: f64, t: f64) -> f64 {
    let v = a + t * (b - a);
    v.clamp(a.min(b), a.max(b))
}

impl fmt::Display for PiecewiseMF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .stored_cuts()
            .map(|(a, c)| format!("{a}: {c}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

struct CutMap<'a>(&'a PiecewiseMF);

impl Serialize for CutMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.cuts.len()))?;
        for (a, c) in self.0.stored_cuts() {
            m.serialize_entry(&format!("{a}"), &c)?;
        }
        m.end()
    }
}

impl Serialize for PiecewiseMF {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("levels", &self.levels)?;
        m.serialize_entry("cuts", &CutMap(self))?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for PiecewiseMF {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct MfVisitor;

        impl<'de> Visitor<'de> for MfVisitor {
            type Value = PiecewiseMF;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object with \"levels\" and \"cuts\"")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<PiecewiseMF, A::Error> {
                let mut levels: Option<AlphaLevels> = None;
                let mut cuts: Option<HashMap<String, Interval>> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "levels" => levels = Some(map.next_value()?),
                        "cuts" => cuts = Some(map.next_value()?),
                        other => return Err(de::Error::unknown_field(other, &["levels", "cuts"])),
                    }
                }
                let levels = levels.ok_or_else(|| de::Error::missing_field("levels"))?;
                let cuts = cuts.ok_or_else(|| de::Error::missing_field("cuts"))?;
                if cuts.len() != levels.len() {
                    return Err(de::Error::custom(format!(
                        "expected {} cuts, got {}",
                        levels.len(),
                        cuts.len()
                    )));
                }
                let mut by_level: Vec<Option<Interval>> = vec![None; levels.len()];
                for (k, c) in cuts {
                    let a: f64 = k
                        .parse()
                        .map_err(|_| de::Error::custom(format!("cut key {k:?} is not a number")))?;
                    let i = levels
                        .iter()
                        .position(|l| l == a)
                        .ok_or_else(|| de::Error::custom(format!("cut key {k:?} is not a listed level")))?;
                    by_level[i] = Some(c);
                }
                let cuts = by_level.into_iter().map(|c| c.expect("one cut per level")).collect();
                PiecewiseMF::new(levels, cuts).map_err(de::Error::custom)
            }
        }

        d.deserialize_map(MfVisitor)
    }
}
