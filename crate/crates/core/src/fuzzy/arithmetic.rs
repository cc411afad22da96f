use super::{AlphaLevels, FuzzyError, Interval, PiecewiseMF, Result, TOLERANCE};

/// Extension-principle sum, computed level-wise on the union of both level sets.
pub fn add(a: &PiecewiseMF, b: &PiecewiseMF) -> PiecewiseMF {
    let levels = a.levels().union(b.levels());
    let cuts = levels
        .iter()
        .map(|alpha| cut(a, alpha).add(&cut(b, alpha)))
        .collect();
    PiecewiseMF::new(levels, cuts).expect("sum of nested cuts is nested")
}

/// Product by a positive scalar.
pub fn scale(r: f64, a: &PiecewiseMF) -> Result<PiecewiseMF> {
    if !(r.is_finite() && r > 0.0) {
        return Err(FuzzyError::Domain(format!("scalar must be positive, got {r}")));
    }
    let cuts = a.cuts().iter().map(|c| c.scale(r)).collect();
    PiecewiseMF::new(a.levels().clone(), cuts)
}

/// `Σ w_j ⊙ A_j` for fuzzy numbers supported in `[0, 1]` and weights on the
/// simplex. The result is supported in `[0, 1]`.
pub fn weighted_average(mfs: &[PiecewiseMF], weights: &[f64]) -> Result<PiecewiseMF> {
    check_weights(mfs.len(), weights)?;
    let unit = Interval::new(0.0, 1.0).unwrap();
    for (j, mf) in mfs.iter().enumerate() {
        if !unit.contains_interval(&mf.support(), TOLERANCE) {
            return Err(FuzzyError::Domain(format!(
                "support {} of input {j} is not inside [0, 1]",
                mf.support()
            )));
        }
    }
    let levels = mfs
        .iter()
        .skip(1)
        .fold(mfs[0].levels().clone(), |acc, m| acc.union(m.levels()));
    Ok(weighted_sum_on(&levels, mfs, weights, Some(&unit)))
}

pub(crate) fn check_weights(n: usize, weights: &[f64]) -> Result<()> {
    if n == 0 {
        return Err(FuzzyError::InvalidWeights("no inputs".into()));
    }
    if weights.len() != n {
        return Err(FuzzyError::InvalidWeights(format!(
            "{} weights for {n} inputs",
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
        return Err(FuzzyError::InvalidWeights(format!("weight {w} is outside [0, 1]")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > TOLERANCE {
        return Err(FuzzyError::InvalidWeights(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

/// Level-wise weighted sum. When `bounds` is given the cut endpoints are
/// clamped to it; with simplex weights and inputs inside `bounds` this only
/// removes floating-point rounding.
pub(crate) fn weighted_sum_on(
    levels: &AlphaLevels,
    mfs: &[PiecewiseMF],
    weights: &[f64],
    bounds: Option<&Interval>,
) -> PiecewiseMF {
    let cuts = levels
        .iter()
        .map(|alpha| {
            let (lo, hi) = mfs
                .iter()
                .zip(weights)
                .fold((0.0, 0.0), |(lo, hi), (m, &w)| {
                    let c = cut(m, alpha);
                    (lo + w * c.lo(), hi + w * c.hi())
                });
            let c = Interval::new_lenient(lo, hi).expect("finite weighted cut");
            match bounds {
                Some(b) => c.clamp_to(b),
                None => c,
            }
        })
        .collect();
    PiecewiseMF::new(levels.clone(), cuts).expect("weighted sum of nested cuts is nested")
}

fn cut(m: &PiecewiseMF, alpha: f64) -> Interval {
    m.alpha_cut(alpha).expect("level in [0, 1]")
}
