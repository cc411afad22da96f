use serde::{Deserialize, Serialize};

use super::{ElicitationError, Result};
use crate::fuzzy::{FuzzyError, Interval, TOLERANCE};

/// Default bracket width at which the bisection stops, as a fraction of the
/// domain width.
pub const DEFAULT_RESOLUTION: f64 = 0.01;

/// Support and core of a label; the core lies inside the support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoreSupport")]
pub struct CoreSupport {
    support: Interval,
    core: Interval,
}

#[derive(Deserialize)]
struct RawCoreSupport {
    support: Interval,
    core: Interval,
}

impl TryFrom<RawCoreSupport> for CoreSupport {
    type Error = FuzzyError;
    fn try_from(r: RawCoreSupport) -> std::result::Result<Self, FuzzyError> {
        CoreSupport::new(r.support, r.core)
    }
}

impl CoreSupport {
    pub fn new(support: Interval, core: Interval) -> std::result::Result<Self, FuzzyError> {
        if !support.contains_interval(&core, TOLERANCE) {
            return Err(FuzzyError::Domain(format!(
                "core {core} is not inside support {support}"
            )));
        }
        Ok(CoreSupport { support, core })
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn core(&self) -> Interval {
        self.core
    }
}

/// Decision maker's answer to "how confident are you that `x` is this label?"
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeAnswer {
    /// Full confidence: `x` is in the core.
    YesFull,
    /// Some confidence: `x` is in the support but not in the core.
    Partial,
    /// No confidence: `x` is outside the support.
    No,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    SupportLeft,
    CoreLeft,
    CoreRight,
    SupportRight,
}

impl Boundary {
    const ALL: [Boundary; 4] = [
        Boundary::SupportLeft,
        Boundary::CoreLeft,
        Boundary::CoreRight,
        Boundary::SupportRight,
    ];

    fn index(self) -> usize {
        self as usize
    }

    fn is_left(self) -> bool {
        matches!(self, Boundary::SupportLeft | Boundary::CoreLeft)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub boundary: Boundary,
    pub x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStep {
    Probe(Probe),
    Done(CoreSupport),
}

/// Four-boundary bisection. Each boundary is kept in a bracket that
/// certainly contains it; the left boundaries start in `[domain.lo, anchor]`
/// and the right ones in `[anchor, domain.hi]`, where the anchor is a point
/// taken to be in the core. Probes go to the midpoint of the first bracket
/// (in the order support-left, core-left, core-right, support-right) that is
/// wider than the resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreSupportSearch {
    domain: Interval,
    anchor: f64,
    resolution: f64,
    brackets: [(f64, f64); 4],
    probes: u32,
}

impl CoreSupportSearch {
    /// `resolution` is relative to the domain width.
    pub fn new(domain: Interval, anchor: f64, resolution: f64) -> Result<Self> {
        if !domain.contains(anchor) {
            return Err(ElicitationError::Domain(format!(
                "anchor {anchor} is outside the domain {domain}"
            )));
        }
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(ElicitationError::Domain(format!(
                "resolution must be positive, got {resolution}"
            )));
        }
        let mut s = CoreSupportSearch {
            domain,
            anchor,
            resolution: resolution * domain.width(),
            brackets: [(0.0, 0.0); 4],
            probes: 0,
        };
        for b in Boundary::ALL {
            s.brackets[b.index()] = s.initial(b);
        }
        Ok(s)
    }

    fn initial(&self, b: Boundary) -> (f64, f64) {
        if b.is_left() {
            (self.domain.lo(), self.anchor)
        } else {
            (self.anchor, self.domain.hi())
        }
    }

    pub fn probes(&self) -> u32 {
        self.probes
    }

    pub fn bracket(&self, b: Boundary) -> (f64, f64) {
        self.brackets[b.index()]
    }

    /// The pending probe, or the result once every bracket is narrow enough.
    pub fn step(&self) -> SearchStep {
        for b in Boundary::ALL {
            let (lo, hi) = self.brackets[b.index()];
            if hi - lo > self.resolution {
                return SearchStep::Probe(Probe { boundary: b, x: 0.5 * (lo + hi) });
            }
        }
        SearchStep::Done(self.result())
    }

    fn result(&self) -> CoreSupport {
        let mid = |b: Boundary| {
            let (lo, hi) = self.brackets[b.index()];
            0.5 * (lo + hi)
        };
        let cl = mid(Boundary::CoreLeft).min(self.anchor);
        let cr = mid(Boundary::CoreRight).max(self.anchor);
        let sl = mid(Boundary::SupportLeft).min(cl);
        let sr = mid(Boundary::SupportRight).max(cr);
        CoreSupport {
            support: Interval::new(sl, sr).expect("ordered boundaries"),
            core: Interval::new(cl, cr).expect("ordered boundaries"),
        }
    }

    /// Applies the answer to the pending probe. A contradiction leaves the
    /// search unchanged and names the boundary whose bracket became empty.
    pub fn answer(&mut self, answer: ProbeAnswer) -> Result<SearchStep> {
        let SearchStep::Probe(probe) = self.step() else {
            return Err(ElicitationError::Domain("the search has already converged".into()));
        };
        let x = probe.x;
        let mut br = self.brackets;
        let lower_hi = |br: &mut [(f64, f64); 4], b: Boundary| {
            let e = &mut br[b.index()];
            e.1 = e.1.min(x);
        };
        let raise_lo = |br: &mut [(f64, f64); 4], b: Boundary| {
            let e = &mut br[b.index()];
            e.0 = e.0.max(x);
        };
        use Boundary::*;
        if probe.boundary.is_left() {
            match answer {
                ProbeAnswer::YesFull => {
                    lower_hi(&mut br, CoreLeft);
                    lower_hi(&mut br, SupportLeft);
                }
                ProbeAnswer::Partial => {
                    lower_hi(&mut br, SupportLeft);
                    raise_lo(&mut br, CoreLeft);
                }
                ProbeAnswer::No => {
                    raise_lo(&mut br, SupportLeft);
                    raise_lo(&mut br, CoreLeft);
                }
            }
        } else {
            match answer {
                ProbeAnswer::YesFull => {
                    raise_lo(&mut br, CoreRight);
                    raise_lo(&mut br, SupportRight);
                }
                ProbeAnswer::Partial => {
                    lower_hi(&mut br, CoreRight);
                    raise_lo(&mut br, SupportRight);
                }
                ProbeAnswer::No => {
                    lower_hi(&mut br, SupportRight);
                    lower_hi(&mut br, CoreRight);
                }
            }
        }
        if let Some(b) = Boundary::ALL.into_iter().find(|b| br[b.index()].0 > br[b.index()].1) {
            return Err(ElicitationError::Inconsistent {
                boundary: b,
                message: format!(
                    "answer {answer:?} at x = {x} contradicts earlier answers"
                ),
            });
        }
        self.brackets = br;
        self.probes += 1;
        Ok(self.step())
    }

    /// Forgets everything learned about one boundary.
    pub fn restart(&mut self, b: Boundary) {
        self.brackets[b.index()] = self.initial(b);
    }
}

/// Returns the pending step, after applying `answer` when one is given.
pub fn core_support_step(
    search: &mut CoreSupportSearch,
    answer: Option<ProbeAnswer>,
) -> Result<SearchStep> {
    match answer {
        Some(a) => search.answer(a),
        None => Ok(search.step()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(support: (f64, f64), core: (f64, f64)) -> impl Fn(f64) -> ProbeAnswer {
        move |x| {
            if core.0 <= x && x <= core.1 {
                ProbeAnswer::YesFull
            } else if support.0 <= x && x <= support.1 {
                ProbeAnswer::Partial
            } else {
                ProbeAnswer::No
            }
        }
    }

    fn run(domain: (f64, f64), anchor: f64, answer: impl Fn(f64) -> ProbeAnswer) -> (CoreSupport, u32) {
        let mut s = CoreSupportSearch::new(Interval::new(domain.0, domain.1).unwrap(), anchor, DEFAULT_RESOLUTION).unwrap();
        let mut step = core_support_step(&mut s, None).unwrap();
        loop {
            match step {
                SearchStep::Probe(p) => step = core_support_step(&mut s, Some(answer(p.x))).unwrap(),
                SearchStep::Done(cs) => return (cs, s.probes()),
            }
        }
    }

    #[test]
    fn recovers_hidden_boundaries() {
        let (cs, probes) = run((0.0, 1.0), 0.5, oracle((0.2, 0.8), (0.4, 0.6)));
        assert!(probes <= 7 * 4, "{probes} probes");
        assert!((cs.support().lo() - 0.2).abs() <= 0.01);
        assert!((cs.support().hi() - 0.8).abs() <= 0.01);
        assert!((cs.core().lo() - 0.4).abs() <= 0.01);
        assert!((cs.core().hi() - 0.6).abs() <= 0.01);
    }

    #[test]
    fn point_core() {
        let (cs, _) = run((0.0, 1.0), 0.5, oracle((0.3, 0.7), (0.5, 0.5)));
        assert!(cs.core().width() <= 0.01);
    }

    #[test]
    fn everything_in_the_core() {
        let (cs, _) = run((0.0, 1.0), 0.5, |_| ProbeAnswer::YesFull);
        assert!(cs.core().lo() <= 0.01 && cs.core().hi() >= 0.99);
        assert!(cs.support().lo() <= 0.01 && cs.support().hi() >= 0.99);
    }

    #[test]
    fn anchor_at_domain_edge() {
        let (cs, _) = run((0.0, 1.0), 0.0, oracle((0.0, 0.5), (0.0, 0.25)));
        assert_eq!((cs.support().lo(), cs.core().lo()), (0.0, 0.0));
        assert!((cs.core().hi() - 0.25).abs() <= 0.01);
        assert!((cs.support().hi() - 0.5).abs() <= 0.01);
    }

    #[test]
    fn contradiction_is_reported_and_restart_recovers() {
        let mut s = CoreSupportSearch::new(Interval::new(0.0, 1.0).unwrap(), 0.5, DEFAULT_RESOLUTION).unwrap();
        // 0.25 is in the support but not in the core
        s.answer(ProbeAnswer::Partial).unwrap();
        let SearchStep::Probe(p) = s.step() else { panic!() };
        assert_eq!((p.boundary, p.x), (Boundary::SupportLeft, 0.125));
        // full confidence at 0.125 would put 0.25 in the core as well
        let before = s.clone();
        let err = s.answer(ProbeAnswer::YesFull).unwrap_err();
        assert!(matches!(err, ElicitationError::Inconsistent { boundary: Boundary::CoreLeft, .. }));
        assert_eq!(s, before);
        s.restart(Boundary::CoreLeft);
        assert_eq!(s.bracket(Boundary::CoreLeft), (0.0, 0.5));
        s.answer(ProbeAnswer::YesFull).unwrap();
        assert_eq!(s.bracket(Boundary::CoreLeft), (0.0, 0.125));
    }
}
