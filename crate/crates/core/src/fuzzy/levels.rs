use serde::{Deserialize, Deserializer, Serialize};

use super::{FuzzyError, Result, TOLERANCE};

/// Finite ascending set of α-levels containing 0 and 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct AlphaLevels(Vec<f64>);

impl AlphaLevels {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(FuzzyError::InvalidLevels(
                "at least the levels 0 and 1 are required".into(),
            ));
        }
        if levels.iter().any(|a| !a.is_finite() || *a < 0.0 || *a > 1.0) {
            return Err(FuzzyError::InvalidLevels("levels must lie in [0, 1]".into()));
        }
        if levels[0] != 0.0 {
            return Err(FuzzyError::InvalidLevels("missing level 0".into()));
        }
        if *levels.last().unwrap() != 1.0 {
            return Err(FuzzyError::InvalidLevels("missing level 1".into()));
        }
        for w in levels.windows(2) {
            if w[1] - w[0] <= TOLERANCE {
                return Err(FuzzyError::InvalidLevels(format!(
                    "levels must be strictly ascending ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(AlphaLevels(levels))
    }

    /// Levels `{0, 1}`.
    pub fn unit() -> Self {
        AlphaLevels(vec![0.0, 1.0])
    }

    /// Builds levels from arbitrary values in `[0, 1]`: sorts, merges values
    /// closer than the tolerance and adds 0 and 1.
    pub fn from_unsorted<I: IntoIterator<Item = f64>>(values: I) -> Result<Self> {
        let mut v: Vec<f64> = values.into_iter().collect();
        if v.iter().any(|a| !a.is_finite() || *a < -TOLERANCE || *a > 1.0 + TOLERANCE) {
            return Err(FuzzyError::InvalidLevels("levels must lie in [0, 1]".into()));
        }
        v.push(0.0);
        v.push(1.0);
        v.sort_by(f64::total_cmp);
        let mut out: Vec<f64> = Vec::with_capacity(v.len());
        for a in v {
            let a = a.clamp(0.0, 1.0);
            match out.last() {
                Some(&last) if (a - last).abs() <= TOLERANCE => {
                    // keep the exact endpoints 0 and 1
                    if a == 1.0 {
                        *out.last_mut().unwrap() = 1.0;
                    }
                }
                _ => out.push(a),
            }
        }
        AlphaLevels::new(out)
    }

    pub fn union(&self, other: &AlphaLevels) -> AlphaLevels {
        AlphaLevels::from_unsorted(self.0.iter().chain(other.0.iter()).copied())
            .expect("union of valid level sets is valid")
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, f64>> {
        self.0.iter().copied()
    }

    /// Index of a stored level equal to `alpha` within the tolerance.
    pub fn position(&self, alpha: f64) -> Option<usize> {
        let i = self.0.partition_point(|&a| a < alpha - TOLERANCE);
        (i < self.0.len() && (self.0[i] - alpha).abs() <= TOLERANCE).then_some(i)
    }

    /// Contains every level of `other` (within the tolerance).
    pub fn contains_all(&self, other: &AlphaLevels) -> bool {
        other.iter().all(|a| self.position(a).is_some())
    }
}

impl<'de> Deserialize<'de> for AlphaLevels {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        AlphaLevels::new(Vec::<f64>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn requires_endpoints() {
        assert!(AlphaLevels::new(vec![0.0, 0.5]).is_err());
        assert!(AlphaLevels::new(vec![0.5, 1.0]).is_err());
        assert!(AlphaLevels::new(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(AlphaLevels::new(vec![0.0, 0.5, 0.4, 1.0]).is_err());
        assert!(AlphaLevels::new(vec![0.0, 0.4, 1.0]).is_ok());
    }

    #[test]
    fn union_merges_close_levels() {
        let a = AlphaLevels::new(vec![0.0, 0.4, 1.0]).unwrap();
        let b = AlphaLevels::new(vec![0.0, 0.4 + 1e-12, 0.7, 1.0]).unwrap();
        assert_eq!(a.union(&b).as_slice(), &[0.0, 0.4, 0.7, 1.0]);
    }

    #[test]
    fn position_uses_tolerance() {
        let a = AlphaLevels::new(vec![0.0, 2.0 / 7.0, 1.0]).unwrap();
        assert_eq!(a.position(2.0 / 7.0 + 1e-12), Some(1));
        assert_eq!(a.position(0.3), None);
    }
}
