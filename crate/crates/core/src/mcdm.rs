//! Multi-criteria ranking: a performance matrix of labels, numbers or fuzzy
//! evaluations is scored by the weighted average of type-2 evaluations and
//! ranked by an admissible order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::compute::MfSpec;
use crate::elicitation::session::SessionState;
use crate::elicitation::{weights_from_cards, CardChain, ElicitationError, ValueScale};
use crate::fuzzy::{FuzzyError, PiecewiseMF, TOLERANCE};
use crate::io::knot_csv;
use crate::it2::{it2_weighted_average, It2Order, IT2MF};
use crate::rational;
use crate::ErrorKind;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum McdmError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Elicitation(#[from] ElicitationError),
}

impl McdmError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            McdmError::Elicitation(e) => e.kind(),
            _ => ErrorKind::Validation,
        }
    }
}

pub type Result<T, E = McdmError> = std::result::Result<T, E>;

fn config<T>(msg: String) -> Result<T> {
    Err(McdmError::Config(msg))
}

/// Ordered labels with the type-2 membership functions bound to them.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinguisticScale {
    /// From the worst label to the best.
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<ValueScale>,
    #[serde(default)]
    pub mfs: BTreeMap<String, IT2MF>,
    /// Session document whose assembled labels are bound by the caller.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<String>,
}

impl LinguisticScale {
    /// Labels, values and assembled membership functions of a session.
    pub fn from_session(state: &SessionState) -> Result<Self> {
        let values = state
            .value_scale
            .clone()
            .ok_or_else(|| McdmError::Config("the session has no label values yet".into()))?;
        let mut scale = LinguisticScale { labels: values.labels.clone(), values: Some(values), ..Default::default() };
        scale.bind_session(state);
        Ok(scale)
    }

    /// Binds every label assembled in the session.
    pub fn bind_session(&mut self, state: &SessionState) {
        for l in &state.labels {
            self.mfs.insert(l.label.clone(), l.it2.clone());
        }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.labels.is_empty() {
            return config(format!("scale {name:?} has no labels"));
        }
        if let Some(v) = &self.values {
            if v.labels != self.labels {
                return config(format!("scale {name:?}: label values are listed in a different order"));
            }
            if v.values.windows(2).any(|w| w[1] <= w[0]) {
                return config(format!("scale {name:?}: label values must increase"));
            }
        }
        for (label, mf) in &self.mfs {
            if !self.labels.contains(label) {
                return config(format!("scale {name:?} binds unknown label {label:?}"));
            }
            let s = mf.upper().support();
            if s.lo() < -TOLERANCE || s.hi() > 1.0 + TOLERANCE {
                return config(format!("scale {name:?}: support of {label:?} is {s}, outside [0, 1]"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericRange {
    pub min: f64,
    pub max: f64,
    #[serde(default = "yes")]
    pub higher_is_better: bool,
}

fn yes() -> bool {
    true
}

impl NumericRange {
    /// Affine map onto `[0, 1]`, reversed when lower values are better.
    pub fn normalize(&self, x: f64) -> Option<f64> {
        if !(x.is_finite() && self.min <= x && x <= self.max) {
            return None;
        }
        let t = (x - self.min) / (self.max - self.min);
        Some(if self.higher_is_better { t } else { 1.0 - t })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Criterion {
    pub name: String,
    /// Scale of label cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    /// Range of numeric cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<NumericRange>,
}

/// A label, a raw number or a fuzzy evaluation already on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Label(String),
    Number(f64),
    Fuzzy(MfSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weights {
    Explicit(Vec<f64>),
    /// Cards between criteria from the least to the most important.
    Cards {
        cards: CardChain,
        #[serde(default)]
        worst_is_zero: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionProblem {
    #[serde(default)]
    pub scales: BTreeMap<String, LinguisticScale>,
    pub criteria: Vec<Criterion>,
    pub alternatives: Vec<String>,
    /// One row per alternative, one cell per criterion.
    pub matrix: Vec<Vec<Cell>>,
    pub weights: Weights,
}

impl DecisionProblem {
    /// Checks dimensions, names and scales and returns the weights in
    /// criterion order.
    pub fn validate(&self) -> Result<Vec<f64>> {
        let n = self.criteria.len();
        if n == 0 || self.alternatives.is_empty() {
            return config("at least one criterion and one alternative are needed".into());
        }
        unique(self.criteria.iter().map(|c| c.name.as_str()), "criterion")?;
        unique(self.alternatives.iter().map(String::as_str), "alternative")?;
        for (name, s) in &self.scales {
            s.validate(name)?;
        }
        for c in &self.criteria {
            if let Some(s) = &c.scale {
                if !self.scales.contains_key(s) {
                    return config(format!("criterion {:?} uses unknown scale {s:?}", c.name));
                }
            }
            if let Some(r) = &c.range {
                if !(r.min.is_finite() && r.max.is_finite() && r.min < r.max) {
                    return config(format!("criterion {:?} has an empty range", c.name));
                }
            }
        }
        if self.matrix.len() != self.alternatives.len() {
            return config(format!(
                "the matrix has {} rows for {} alternatives",
                self.matrix.len(),
                self.alternatives.len()
            ));
        }
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return config(format!(
                "row of {:?} has {} cells for {n} criteria",
                self.alternatives[i],
                row.len()
            ));
        }
        self.weight_vector()
    }

    fn weight_vector(&self) -> Result<Vec<f64>> {
        let n = self.criteria.len();
        let w = match &self.weights {
            Weights::Explicit(w) => w.clone(),
            Weights::Cards { cards, worst_is_zero } => {
                let raw = weights_from_cards(cards, *worst_is_zero)?;
                let mut w = vec![f64::NAN; n];
                for (item, v) in cards.items().iter().zip(&raw) {
                    let Some(k) = self.criteria.iter().position(|c| &c.name == item) else {
                        return config(format!("card item {item:?} is not a criterion"));
                    };
                    w[k] = rational::to_f64(v);
                }
                if let Some(k) = w.iter().position(|v| v.is_nan()) {
                    return config(format!("criterion {:?} has no card position", self.criteria[k].name));
                }
                w
            }
        };
        if w.len() != n {
            return config(format!("{} weights for {n} criteria", w.len()));
        }
        if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return config("weights must be non-negative".into());
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > TOLERANCE {
            return config(format!("weights sum to {sum}, not 1"));
        }
        Ok(w)
    }

    fn cell_mf(&self, a: usize, j: usize) -> Result<IT2MF> {
        let c = &self.criteria[j];
        let who = || format!("{:?} on {:?}", self.alternatives[a], c.name);
        match &self.matrix[a][j] {
            Cell::Label(label) => {
                let Some(sname) = &c.scale else {
                    return config(format!("{} is a label but the criterion has no scale", who()));
                };
                let scale = &self.scales[sname];
                if !scale.labels.contains(label) {
                    return config(format!("{}: {label:?} is not a label of scale {sname:?}", who()));
                }
                scale
                    .mfs
                    .get(label)
                    .cloned()
                    .ok_or_else(|| McdmError::Config(format!("label {label:?} of scale {sname:?} is not bound")))
            }
            Cell::Number(x) => {
                let Some(range) = &c.range else {
                    return config(format!("{} is a number but the criterion has no range", who()));
                };
                let v = range.normalize(*x).ok_or_else(|| {
                    McdmError::Config(format!("{}: {x} is outside [{}, {}]", who(), range.min, range.max))
                })?;
                Ok(IT2MF::degenerate(PiecewiseMF::point(v)?))
            }
            Cell::Fuzzy(spec) => {
                let mf = spec.to_it2()?;
                let s = mf.upper().support();
                if s.lo() < -TOLERANCE || s.hi() > 1.0 + TOLERANCE {
                    return config(format!("{}: support {s} is outside [0, 1]", who()));
                }
                Ok(mf)
            }
        }
    }

    fn index_of(&self, alternative: &str) -> Result<usize> {
        self.alternatives
            .iter()
            .position(|a| a == alternative)
            .ok_or_else(|| McdmError::Config(format!("unknown alternative {alternative:?}")))
    }
}

fn unique<'a>(names: impl Iterator<Item = &'a str>, what: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return config(format!("{what} {n:?} appears twice"));
        }
    }
    Ok(())
}

/// Weighted average of the alternative's evaluations.
pub fn score_alternative(p: &DecisionProblem, alternative: &str) -> Result<IT2MF> {
    let w = p.validate()?;
    score_row(p, p.index_of(alternative)?, &w)
}

fn score_row(p: &DecisionProblem, a: usize, w: &[f64]) -> Result<IT2MF> {
    let mfs = (0..p.criteria.len()).map(|j| p.cell_mf(a, j)).collect::<Result<Vec<_>>>()?;
    Ok(it2_weighted_average(&mfs, w)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub alternative: String,
    pub score: IT2MF,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub order: It2Order,
    /// Classes of equal scores, best first; names inside a class keep the
    /// problem's order.
    pub classes: Vec<Vec<String>>,
}

pub fn scores(p: &DecisionProblem) -> Result<Vec<Score>> {
    let w = p.validate()?;
    (0..p.alternatives.len())
        .map(|a| Ok(Score { alternative: p.alternatives[a].clone(), score: score_row(p, a, &w)? }))
        .collect()
}

pub fn rank(p: &DecisionProblem, order: It2Order) -> Result<Ranking> {
    Ok(rank_scores(&scores(p)?, order))
}

pub fn rank_scores(scores: &[Score], order: It2Order) -> Ranking {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&i, &j| order.compare(&scores[j].score, &scores[i].score).then(i.cmp(&j)));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match classes.last_mut() {
            Some(c) if order.compare(&scores[c[0]].score, &scores[i].score) == Ordering::Equal => c.push(i),
            _ => classes.push(vec![i]),
        }
    }
    Ranking {
        order,
        classes: classes
            .into_iter()
            .map(|c| c.into_iter().map(|i| scores[i].alternative.clone()).collect())
            .collect(),
    }
}

/// Scores with the rankings under the requested orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rankings: Vec<Ranking>,
    pub scores: Vec<Score>,
}

impl RankReport {
    /// `order,position,alternative` with tied alternatives sharing a
    /// position.
    pub fn ranking_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["order", "position", "alternative"]).unwrap();
        for r in &self.rankings {
            for (k, class) in r.classes.iter().enumerate() {
                for a in class {
                    w.write_record([r.order.name(), &(k + 1).to_string(), a]).unwrap();
                }
            }
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn knot_csv(&self) -> String {
        let items: Vec<(&str, &IT2MF)> = self.scores.iter().map(|s| (s.alternative.as_str(), &s.score)).collect();
        knot_csv(&items)
    }
}

/// Ranks under one order, or under both when none is given.
pub fn report(p: &DecisionProblem, order: Option<It2Order>) -> Result<RankReport> {
    let scores = scores(p)?;
    let orders = match order {
        Some(o) => vec![o],
        None => vec![It2Order::Order1, It2Order::Order2],
    };
    Ok(RankReport { rankings: orders.into_iter().map(|o| rank_scores(&scores, o)).collect(), scores })
}
