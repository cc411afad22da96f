use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ElicitationError, Result};
use crate::rational::{self, Rational};

/// Largest number of chains [`enumerate_chains`] produces by default.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000;

/// Number of blank cards between two consecutive items, possibly given as a
/// range when the decision maker hesitates. JSON: `3` or `[2, 4]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CardGap {
    Exact(u32),
    Interval { lo: u32, hi: u32 },
}

impl CardGap {
    /// A range of card counts; collapses to [`CardGap::Exact`] when `lo == hi`.
    pub fn interval(lo: u32, hi: u32) -> Result<Self> {
        match lo.cmp(&hi) {
            std::cmp::Ordering::Less => Ok(CardGap::Interval { lo, hi }),
            std::cmp::Ordering::Equal => Ok(CardGap::Exact(lo)),
            std::cmp::Ordering::Greater => Err(ElicitationError::Domain(format!(
                "card interval [{lo}, {hi}] is reversed"
            ))),
        }
    }

    pub fn exact(&self) -> Option<u32> {
        match *self {
            CardGap::Exact(e) => Some(e),
            CardGap::Interval { .. } => None,
        }
    }

    pub fn bounds(&self) -> (u32, u32) {
        match *self {
            CardGap::Exact(e) => (e, e),
            CardGap::Interval { lo, hi } => (lo, hi),
        }
    }
}

impl Serialize for CardGap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            CardGap::Exact(e) => s.serialize_u32(e),
            CardGap::Interval { lo, hi } => [lo, hi].serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for CardGap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Exact(u32),
            Interval([u32; 2]),
        }
        match Raw::deserialize(d)? {
            Raw::Exact(e) => Ok(CardGap::Exact(e)),
            Raw::Interval([lo, hi]) => CardGap::interval(lo, hi).map_err(serde::de::Error::custom),
        }
    }
}

/// `x₁ [e₁] x₂ … [e_{p−1}] x_p`, listed from the least to the most preferred
/// (or most belonging) item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawChain")]
pub struct CardChain {
    items: Vec<String>,
    gaps: Vec<CardGap>,
}

#[derive(Deserialize)]
struct RawChain {
    items: Vec<String>,
    gaps: Vec<CardGap>,
}

impl TryFrom<RawChain> for CardChain {
    type Error = ElicitationError;
    fn try_from(r: RawChain) -> Result<Self> {
        CardChain::new(r.items, r.gaps)
    }
}

impl CardChain {
    pub fn new(items: Vec<String>, gaps: Vec<CardGap>) -> Result<Self> {
        if items.len() < 2 {
            return Err(ElicitationError::Domain("a chain needs at least two items".into()));
        }
        if gaps.len() + 1 != items.len() {
            return Err(ElicitationError::Domain(format!(
                "{} items need {} gaps, got {}",
                items.len(),
                items.len() - 1,
                gaps.len()
            )));
        }
        Ok(CardChain { items, gaps })
    }

    /// Chain over items named `x1..xp`.
    pub fn anonymous(gaps: Vec<CardGap>) -> Result<Self> {
        let items = (1..=gaps.len() + 1).map(|i| format!("x{i}")).collect();
        CardChain::new(items, gaps)
    }

    pub fn from_exact(items: Vec<String>, gaps: &[u32]) -> Result<Self> {
        CardChain::new(items, gaps.iter().map(|&e| CardGap::Exact(e)).collect())
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn gaps(&self) -> &[CardGap] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_exact(&self) -> bool {
        self.gaps.iter().all(|g| g.exact().is_some())
    }

    fn exact_gaps(&self) -> Result<Vec<u32>> {
        self.gaps
            .iter()
            .map(|g| g.exact().ok_or(ElicitationError::MustEnumerate))
            .collect()
    }
}

/// `Ā(x₁) = 0`, `Ā(x_r) = Σ_{h<r} (e_h + 1)`.
pub fn nonnormalized_values(chain: &CardChain) -> Result<Vec<Rational>> {
    let gaps = chain.exact_gaps()?;
    let mut acc = 0i64;
    let mut out = vec![rational::zero()];
    for e in gaps {
        acc += i64::from(e) + 1;
        out.push(rational::int(acc));
    }
    Ok(out)
}

/// `A(x_r) = Ā(x_r) / Ā(x_p)`.
pub fn normalize(values: &[Rational]) -> Result<Vec<Rational>> {
    let last = values
        .last()
        .ok_or_else(|| ElicitationError::Domain("no values to normalize".into()))?;
    if !last.is_positive() {
        return Err(ElicitationError::Domain(format!(
            "last value must be positive, got {}",
            rational::format(last)
        )));
    }
    Ok(values.iter().map(|v| v / last).collect())
}

/// Values of linguistic labels on `[0, 1]` together with the value of one card.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueScale {
    pub labels: Vec<String>,
    #[serde(with = "rational::serde_vec")]
    pub values: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub card_value: Rational,
}

impl ValueScale {
    pub fn value_of(&self, label: &str) -> Option<&Rational> {
        self.labels.iter().position(|l| l == label).map(|i| &self.values[i])
    }
}

/// `v(l₁) = 0`, `v(l_k) = 1` and `γ = 1 / Σ(e_h + 1)`.
pub fn label_values(labels: &[String], gaps: &[CardGap]) -> Result<ValueScale> {
    let chain = CardChain::new(labels.to_vec(), gaps.to_vec())?;
    let raw = nonnormalized_values(&chain)?;
    let total = raw.last().unwrap().clone();
    Ok(ValueScale {
        labels: labels.to_vec(),
        values: normalize(&raw)?,
        card_value: rational::one() / total,
    })
}

/// Criteria weights from a chain listed from the least to the most relevant
/// criterion. The unnormalized weight of the first criterion is 0 when
/// `worst_is_zero` is set and 1 otherwise; each gap adds `e + 1`. The
/// result is aligned with the chain items and sums to 1.
pub fn weights_from_cards(chain: &CardChain, worst_is_zero: bool) -> Result<Vec<Rational>> {
    let raw = nonnormalized_values(chain)?;
    let offset = if worst_is_zero { rational::zero() } else { rational::one() };
    let raw: Vec<Rational> = raw.into_iter().map(|v| v + &offset).collect();
    let total = raw.iter().fold(rational::zero(), |a, b| a + b);
    Ok(raw.iter().map(|v| v / &total).collect())
}

/// Every exact chain obtained by picking one card count from each gap,
/// in lexicographic order of the gap vectors.
pub fn enumerate_chains(chain: &CardChain, cap: u64) -> Result<Vec<CardChain>> {
    let ranges: Vec<(u32, u32)> = chain.gaps.iter().map(|g| g.bounds()).collect();
    let count = ranges
        .iter()
        .fold(1u128, |acc, (lo, hi)| acc.saturating_mul(u128::from(hi - lo) + 1));
    if count > u128::from(cap) {
        return Err(ElicitationError::TooManyChains { count, cap });
    }
    let mut current: Vec<u32> = ranges.iter().map(|r| r.0).collect();
    let mut out = Vec::with_capacity(count as usize);
    loop {
        out.push(CardChain::from_exact(chain.items.clone(), &current)?);
        let Some(k) = (0..current.len()).rev().find(|&k| current[k] < ranges[k].1) else {
            break;
        };
        current[k] += 1;
        for (c, r) in current.iter_mut().zip(&ranges).skip(k + 1) {
            *c = r.0;
        }
    }
    Ok(out)
}

/// Card counts `c_i = floor(10^m x_i) − floor(10^m x_{i−1})` for an ascending
/// tuple `0 = x₀ < … < x_n = 1`. Partial sums divided by `10^m` approximate
/// every coordinate from below with error `< 10^-m`.
pub fn tuple_to_cards(x: &[Rational], m: u32) -> Result<Vec<u64>> {
    if x.len() < 2 {
        return Err(ElicitationError::Domain("the tuple needs at least two coordinates".into()));
    }
    if !x[0].is_zero() || !rational::is_one(x.last().unwrap()) {
        return Err(ElicitationError::Domain("the tuple must start at 0 and end at 1".into()));
    }
    if m == 0 || m > 18 {
        return Err(ElicitationError::Domain(format!("precision m = {m} must be in 1..=18")));
    }
    let scale = Rational::from_integer(num_traits::pow(BigInt::from(10), m as usize));
    let floors: Vec<i64> = x
        .iter()
        .map(|xi| (xi * &scale).floor().to_integer().to_i64().unwrap_or(i64::MAX))
        .collect();
    let mut out = Vec::with_capacity(x.len() - 1);
    for i in 1..x.len() {
        if floors[i - 1] >= floors[i] {
            return Err(ElicitationError::NeedsLargerM { index: i, m });
        }
        out.push((floors[i] - floors[i - 1]) as u64);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, parse, ratio};

    fn chain(gaps: &[u32]) -> CardChain {
        CardChain::anonymous(gaps.iter().map(|&e| CardGap::Exact(e)).collect()).unwrap()
    }

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn nonnormalized_examples() {
        assert_eq!(nonnormalized_values(&chain(&[1, 4])).unwrap(), vec![int(0), int(2), int(7)]);
        assert_eq!(nonnormalized_values(&chain(&[0, 0])).unwrap(), vec![int(0), int(1), int(2)]);
        assert_eq!(nonnormalized_values(&chain(&[9])).unwrap(), vec![int(0), int(10)]);
        let hesitant = CardChain::anonymous(vec![CardGap::Exact(1), CardGap::interval(2, 4).unwrap()]).unwrap();
        assert_eq!(nonnormalized_values(&hesitant), Err(ElicitationError::MustEnumerate));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&[int(0), int(2), int(7)]).unwrap(), vec![int(0), ratio(2, 7), int(1)]);
        assert_eq!(normalize(&[int(0), int(10)]).unwrap(), vec![int(0), int(1)]);
        assert_eq!(
            normalize(&[int(0), int(1), int(2), int(4)]).unwrap(),
            vec![int(0), ratio(1, 4), ratio(1, 2), int(1)]
        );
        assert!(normalize(&[int(0), int(0)]).is_err());
    }

    #[test]
    fn gap_json() {
        let g: Vec<CardGap> = serde_json::from_str("[3, [2, 4], [5, 5]]").unwrap();
        assert_eq!(g, vec![CardGap::Exact(3), CardGap::Interval { lo: 2, hi: 4 }, CardGap::Exact(5)]);
        assert_eq!(serde_json::to_string(&g).unwrap(), "[3,[2,4],5]");
        assert!(serde_json::from_str::<CardGap>("[4, 2]").is_err());
    }

    #[test]
    fn chain_validation() {
        assert!(CardChain::new(names(&["a"]), vec![]).is_err());
        assert!(CardChain::new(names(&["a", "b"]), vec![]).is_err());
        assert!(serde_json::from_str::<CardChain>(r#"{"items":["a","b"],"gaps":[1,2]}"#).is_err());
    }

    #[test]
    fn weights_examples() {
        // g4 [0] g3 [2] g2 [1] g1
        let c = CardChain::from_exact(names(&["g4", "g3", "g2", "g1"]), &[0, 2, 1]).unwrap();
        let w = weights_from_cards(&c, true).unwrap();
        assert_eq!(w, vec![int(0), ratio(1, 11), ratio(4, 11), ratio(6, 11)]);
        assert_eq!(w[3], parse("6/11").unwrap());

        let two = CardChain::from_exact(names(&["g2", "g1"]), &[0]).unwrap();
        assert_eq!(weights_from_cards(&two, true).unwrap(), vec![int(0), int(1)]);
        let three = CardChain::from_exact(names(&["g3", "g2", "g1"]), &[0, 0]).unwrap();
        assert_eq!(
            weights_from_cards(&three, true).unwrap(),
            vec![int(0), ratio(1, 3), ratio(2, 3)]
        );
        assert_eq!(
            weights_from_cards(&three, false).unwrap(),
            vec![ratio(1, 6), ratio(2, 6), ratio(3, 6)]
        );
    }

    #[test]
    fn label_value_examples() {
        let s = label_values(&names(&["low", "mid", "high"]), &[CardGap::Exact(0), CardGap::Exact(0)]).unwrap();
        assert_eq!(s.values, vec![int(0), ratio(1, 2), int(1)]);
        assert_eq!(s.card_value, ratio(1, 2));
        let s = label_values(&names(&["low", "mid", "high"]), &[CardGap::Exact(1), CardGap::Exact(4)]).unwrap();
        assert_eq!(s.values, vec![int(0), ratio(2, 7), int(1)]);
        assert_eq!(s.card_value, ratio(1, 7));
        let s = label_values(&names(&["bad", "good"]), &[CardGap::Exact(6)]).unwrap();
        assert_eq!(s.values, vec![int(0), int(1)]);
        assert_eq!(s.value_of("good"), Some(&int(1)));
    }

    #[test]
    fn enumeration_examples() {
        let c = CardChain::anonymous(vec![CardGap::Exact(1), CardGap::interval(2, 4).unwrap()]).unwrap();
        let all = enumerate_chains(&c, DEFAULT_ENUMERATION_CAP).unwrap();
        let second: Vec<u32> = all.iter().map(|c| c.gaps()[1].exact().unwrap()).collect();
        assert_eq!(second, vec![2, 3, 4]);
        assert_eq!(enumerate_chains(&chain(&[1, 2]), 10).unwrap(), vec![chain(&[1, 2])]);
        let c = CardChain::anonymous(vec![CardGap::interval(0, 1).unwrap(); 2]).unwrap();
        assert_eq!(enumerate_chains(&c, DEFAULT_ENUMERATION_CAP).unwrap().len(), 4);
        assert_eq!(
            enumerate_chains(&c, 3),
            Err(ElicitationError::TooManyChains { count: 4, cap: 3 })
        );
    }

    #[test]
    fn tuple_examples() {
        let q = |s: &str| parse(s).unwrap();
        assert_eq!(tuple_to_cards(&[q("0"), q("0.33"), q("1")], 2).unwrap(), vec![33, 67]);
        assert_eq!(tuple_to_cards(&[q("0"), q("1")], 3).unwrap(), vec![1000]);
        assert_eq!(tuple_to_cards(&[q("0"), q("0.5"), q("1")], 1).unwrap(), vec![5, 5]);
        assert_eq!(
            tuple_to_cards(&[q("0"), q("0.31"), q("0.35"), q("1")], 1),
            Err(ElicitationError::NeedsLargerM { index: 2, m: 1 })
        );
        assert!(tuple_to_cards(&[q("0.1"), q("1")], 1).is_err());
    }
}
