//! The elicitation dialogue as an event-sourced state machine.
//!
//! Decision-maker and analyst actions are [`Event`]s. [`transition`] is a
//! pure function of the configuration, the current state and one event, so
//! folding a log from [`SessionState::initial`] always reproduces the same
//! state. Rejected events leave the state untouched.

use serde::{Deserialize, Serialize};

use super::{
    assemble, build_t1_side, cards_from_values, enumerate_chains, envelope_it2, label_values,
    nonnormalized_values, normalize, ratio_table, uniform_breakpoints, Adjustment, Boundary,
    CardChain, CardFit, CardGap, CoreSupport, CoreSupportSearch, ElicitationError, Orientation,
    Probe, ProbeAnswer, RatioTable, Result, SearchStep, Side, SideFragment, ValueScale,
    DEFAULT_ENUMERATION_CAP, DEFAULT_RESOLUTION,
};
use crate::fuzzy::{Interval, PiecewiseMF};
use crate::it2::IT2MF;
use crate::rational::{self, Rational};

fn default_labels() -> Vec<String> {
    ["low", "medium", "high"].iter().map(|s| s.to_string()).collect()
}

fn default_domain() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

fn default_resolution() -> f64 {
    DEFAULT_RESOLUTION
}

fn default_h_max() -> u64 {
    100
}

fn default_cap() -> u64 {
    DEFAULT_ENUMERATION_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    /// Linguistic labels from the worst to the best.
    #[serde(default = "default_labels")]
    pub labels: Vec<String>,
    /// Axis on which cores and supports are located.
    #[serde(default = "default_domain")]
    pub domain: Interval,
    /// Bisection stopping width relative to the domain width.
    #[serde(default = "default_resolution")]
    pub resolution: f64,
    #[serde(default)]
    pub orientation: Orientation,
    /// Largest card total tried when suggesting cards for adjusted values.
    #[serde(default = "default_h_max")]
    pub h_max: u64,
    #[serde(default = "default_cap")]
    pub enumeration_cap: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            labels: default_labels(),
            domain: default_domain(),
            resolution: default_resolution(),
            orientation: Orientation::default(),
            h_max: default_h_max(),
            enumeration_cap: default_cap(),
        }
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.labels.len() < 2 {
            return Err(ElicitationError::Domain("at least two labels are needed".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(l) = self.labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(ElicitationError::Domain(format!("label {l:?} appears twice")));
        }
        if self.domain.width() <= 0.0 {
            return Err(ElicitationError::Domain("the domain must have positive width".into()));
        }
        if !(self.resolution.is_finite() && self.resolution > 0.0 && self.resolution < 1.0) {
            return Err(ElicitationError::Domain("resolution must lie in (0, 1)".into()));
        }
        if self.enumeration_cap == 0 {
            return Err(ElicitationError::Domain("the enumeration cap must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Actor {
    #[serde(rename = "dm")]
    DecisionMaker,
    Analyst,
    System,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioEdit {
    pub s: usize,
    pub r: usize,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    /// Cards between consecutive labels of the configured scale.
    LabelCards { gaps: Vec<CardGap> },
    /// Starts the construction of one label.
    BeginLabel { label: String },
    ProbeAnswer { answer: ProbeAnswer },
    RestartBoundary { boundary: Boundary },
    /// Sets the core and support directly instead of probing.
    SetCoreSupport { support: Interval, core: Interval },
    /// Cards between the items of the current side, from the support edge to
    /// the core edge. Breakpoints default to an even spread.
    PlaceCards {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        items: Option<Vec<String>>,
        gaps: Vec<CardGap>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        breakpoints: Option<Vec<f64>>,
    },
    /// The decision maker is satisfied with the ratio table.
    Accept,
    /// The decision maker replaces some ratios.
    ModifyRatios { entries: Vec<RatioEdit> },
    /// The analyst shows the table of the adjusted values.
    PresentAdjusted,
    /// Moves on after a side is finished.
    Continue,
}

/// The events keyed by type, which lets a parser report field paths.
#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum KeyedEvent {
    LabelCards(LabelCardsBody),
    BeginLabel(BeginLabelBody),
    ProbeAnswer(ProbeAnswerBody),
    RestartBoundary(RestartBoundaryBody),
    SetCoreSupport(SetCoreSupportBody),
    PlaceCards(PlaceCardsBody),
    Accept(Empty),
    ModifyRatios(ModifyRatiosBody),
    PresentAdjusted(Empty),
    Continue(Empty),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelCardsBody {
    gaps: Vec<CardGap>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BeginLabelBody {
    label: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeAnswerBody {
    answer: ProbeAnswer,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RestartBoundaryBody {
    boundary: Boundary,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetCoreSupportBody {
    support: Interval,
    core: Interval,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaceCardsBody {
    #[serde(default)]
    items: Option<Vec<String>>,
    gaps: Vec<CardGap>,
    #[serde(default)]
    breakpoints: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModifyRatiosBody {
    entries: Vec<RatioEdit>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

impl From<KeyedEvent> for Event {
    fn from(k: KeyedEvent) -> Self {
        match k {
            KeyedEvent::LabelCards(b) => Event::LabelCards { gaps: b.gaps },
            KeyedEvent::BeginLabel(b) => Event::BeginLabel { label: b.label },
            KeyedEvent::ProbeAnswer(b) => Event::ProbeAnswer { answer: b.answer },
            KeyedEvent::RestartBoundary(b) => Event::RestartBoundary { boundary: b.boundary },
            KeyedEvent::SetCoreSupport(b) => Event::SetCoreSupport { support: b.support, core: b.core },
            KeyedEvent::PlaceCards(b) => Event::PlaceCards { items: b.items, gaps: b.gaps, breakpoints: b.breakpoints },
            KeyedEvent::Accept(_) => Event::Accept,
            KeyedEvent::ModifyRatios(b) => Event::ModifyRatios { entries: b.entries },
            KeyedEvent::PresentAdjusted(_) => Event::PresentAdjusted,
            KeyedEvent::Continue(_) => Event::Continue,
        }
    }
}

/// Parses one event; errors name the offending field.
pub fn parse_event(bytes: &[u8]) -> std::result::Result<LoggedEvent, crate::io::FieldError> {
    let mut value: serde_json::Value = crate::io::parse_json(bytes)?;
    let at = match value.as_object_mut().and_then(|o| o.remove("at")) {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::String(s)) => Some(s),
        Some(_) => return Err(crate::io::FieldError::new("at", "expected a string")),
    };
    let event: KeyedEvent = crate::io::parse_keyed(value, "type")?;
    Ok(LoggedEvent { at, event: event.into() })
}

impl Event {
    pub fn name(&self) -> &'static str {
        match self {
            Event::LabelCards { .. } => "label_cards",
            Event::BeginLabel { .. } => "begin_label",
            Event::ProbeAnswer { .. } => "probe_answer",
            Event::RestartBoundary { .. } => "restart_boundary",
            Event::SetCoreSupport { .. } => "set_core_support",
            Event::PlaceCards { .. } => "place_cards",
            Event::Accept => "accept",
            Event::ModifyRatios { .. } => "modify_ratios",
            Event::PresentAdjusted => "present_adjusted",
            Event::Continue => "continue",
        }
    }

    pub fn actor(&self) -> Actor {
        match self {
            Event::LabelCards { .. }
            | Event::ProbeAnswer { .. }
            | Event::PlaceCards { .. }
            | Event::Accept
            | Event::ModifyRatios { .. } => Actor::DecisionMaker,
            Event::BeginLabel { .. }
            | Event::RestartBoundary { .. }
            | Event::SetCoreSupport { .. }
            | Event::PresentAdjusted
            | Event::Continue => Actor::Analyst,
        }
    }
}

/// An event with its timestamp as recorded in the log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoggedEvent {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    #[serde(flatten)]
    pub event: Event,
}

impl From<Event> for LoggedEvent {
    fn from(event: Event) -> Self {
        LoggedEvent { at: None, event }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Phase {
    LabelValues,
    CoreSupport,
    SideCards { side: Side },
    RatioReview,
    Adjusting,
    SideDone,
    Assembled,
}

impl Phase {
    pub fn label(&self) -> String {
        match self {
            Phase::SideCards { side: Side::Left } => "side_cards(left)".into(),
            Phase::SideCards { side: Side::Right } => "side_cards(right)".into(),
            other => serde_json::to_value(other).unwrap()["name"].as_str().unwrap().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub seq: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    pub actor: Actor,
    pub event: String,
    pub from: String,
    pub to: String,
}

/// Suggested cards and fitted values after the decision maker changed ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustmentRound {
    pub modified_table: RatioTable,
    pub adjustment: Adjustment,
    pub suggested_cards: CardFit,
    pub table: RatioTable,
}

/// The side being elicited.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideWork {
    pub side: Side,
    pub chain: CardChain,
    pub breakpoints: Vec<f64>,
    /// Current non-normalized values, adjusted after every revision.
    #[serde(with = "rational::serde_vec")]
    pub values: Vec<Rational>,
    pub table: RatioTable,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rounds: Vec<AdjustmentRound>,
}

/// One type-1 side that the decision maker's cards allow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideMember {
    pub gaps: Vec<u32>,
    #[serde(with = "rational::serde_vec")]
    pub memberships: Vec<Rational>,
    pub fragment: SideFragment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideResult {
    pub side: Side,
    pub chain: CardChain,
    pub breakpoints: Vec<f64>,
    pub members: Vec<SideMember>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelResult {
    pub label: String,
    pub core_support: CoreSupport,
    pub left: SideResult,
    pub right: SideResult,
    pub family_size: usize,
    pub it2: IT2MF,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub phase: Phase,
    pub value_scale: Option<ValueScale>,
    pub label: Option<String>,
    pub search: Option<CoreSupportSearch>,
    pub core_support: Option<CoreSupport>,
    pub current: Option<SideWork>,
    pub sides: Vec<SideResult>,
    pub labels: Vec<LabelResult>,
    pub audit_log: Vec<AuditEntry>,
}

impl SessionState {
    pub fn initial() -> Self {
        SessionState {
            phase: Phase::LabelValues,
            value_scale: None,
            label: None,
            search: None,
            core_support: None,
            current: None,
            sides: Vec::new(),
            labels: Vec::new(),
            audit_log: Vec::new(),
        }
    }

    /// Events accepted in the current state.
    pub fn expected_events(&self) -> Vec<&'static str> {
        match self.phase {
            Phase::LabelValues if self.value_scale.is_some() => vec!["label_cards", "begin_label"],
            Phase::LabelValues => vec!["label_cards"],
            Phase::CoreSupport => vec!["probe_answer", "restart_boundary", "set_core_support"],
            Phase::SideCards { .. } => vec!["place_cards"],
            Phase::RatioReview => vec!["accept", "modify_ratios"],
            Phase::Adjusting => vec!["present_adjusted"],
            Phase::SideDone => vec!["continue"],
            Phase::Assembled => vec!["begin_label"],
        }
    }

    /// The bisection probe awaiting an answer.
    pub fn pending_probe(&self) -> Option<Probe> {
        match (&self.phase, &self.search) {
            (Phase::CoreSupport, Some(s)) => match s.step() {
                SearchStep::Probe(p) => Some(p),
                SearchStep::Done(_) => None,
            },
            _ => None,
        }
    }

    /// Normalized memberships of the current side (the last finished side
    /// when the phase is `side_done`).
    pub fn current_memberships(&self) -> Option<Vec<Rational>> {
        match self.phase {
            Phase::RatioReview | Phase::Adjusting => {
                self.current.as_ref().and_then(|w| normalize(&w.values).ok())
            }
            Phase::SideDone => self
                .sides
                .last()
                .filter(|s| s.members.len() == 1)
                .map(|s| s.members[0].memberships.clone()),
            _ => None,
        }
    }

    fn log(&mut self, at: Option<String>, actor: Actor, event: &str, from: Phase) {
        let seq = self.audit_log.len();
        self.audit_log.push(AuditEntry {
            seq,
            at,
            actor,
            event: event.to_string(),
            from: from.label(),
            to: self.phase.label(),
        });
    }
}

/// Applies one event. Errors leave the given state unchanged.
pub fn transition(
    config: &SessionConfig,
    state: &SessionState,
    logged: &LoggedEvent,
) -> Result<SessionState> {
    let event = &logged.event;
    if !state.expected_events().contains(&event.name())
        || (matches!(event, Event::ProbeAnswer { .. }) && state.pending_probe().is_none())
    {
        return Err(protocol(state, event));
    }
    let mut s = state.clone();
    let from = s.phase;
    let at = logged.at.clone();
    match event {
        Event::LabelCards { gaps } => {
            s.value_scale = Some(label_values(&config.labels, gaps)?);
        }
        Event::BeginLabel { label } => begin_label(config, &mut s, label)?,
        Event::ProbeAnswer { answer } => {
            let search = s.search.as_mut().expect("core support phase has a search");
            if let SearchStep::Done(cs) = search.answer(*answer)? {
                s.log(at.clone(), event.actor(), event.name(), from);
                let from = s.phase;
                s.core_support = Some(cs);
                enter_side(&mut s, Side::Left);
                s.log(at, Actor::System, "core_support_converged", from);
                return Ok(s);
            }
        }
        Event::RestartBoundary { boundary } => {
            s.search.as_mut().expect("core support phase has a search").restart(*boundary);
        }
        Event::SetCoreSupport { support, core } => {
            let cs = CoreSupport::new(*support, *core)?;
            let d = config.domain;
            if !d.contains_interval(&cs.support(), crate::fuzzy::TOLERANCE) {
                return Err(ElicitationError::Domain(format!(
                    "support {} is outside the domain {d}",
                    cs.support()
                )));
            }
            s.core_support = Some(cs);
            enter_side(&mut s, Side::Left);
        }
        Event::PlaceCards { items, gaps, breakpoints } => {
            let Phase::SideCards { side } = s.phase else { unreachable!() };
            place_cards(config, &mut s, side, items.clone(), gaps, breakpoints.clone())?;
        }
        Event::Accept => {
            let work = s.current.take().expect("ratio review has a side");
            let memberships = normalize(&work.values)?;
            let cs = s.core_support.expect("core support is known");
            let fragment = build_t1_side(&to_f64s(&memberships), &work.breakpoints, work.side, &cs)?;
            let gaps = match work.rounds.last() {
                Some(r) => r.suggested_cards.gaps.clone(),
                None => work.chain.gaps().iter().map(|g| g.exact().unwrap()).collect(),
            };
            s.sides.push(SideResult {
                side: work.side,
                chain: work.chain,
                breakpoints: work.breakpoints,
                members: vec![SideMember { gaps, memberships, fragment }],
            });
            s.phase = Phase::SideDone;
        }
        Event::ModifyRatios { entries } => {
            if entries.is_empty() {
                return Err(ElicitationError::Domain("no ratios were modified".into()));
            }
            let work = s.current.as_mut().expect("ratio review has a side");
            let mut modified = work.table.clone();
            for e in entries {
                modified.modify(e.s, e.r, e.value.clone())?;
            }
            let adjustment = super::adjust_values(&modified, config.orientation)?;
            let suggested_cards = suggest_cards(&adjustment.values, config.h_max)?;
            let table = ratio_table(&adjustment.values)?;
            work.values = adjustment.values.clone();
            work.rounds.push(AdjustmentRound { modified_table: modified, adjustment, suggested_cards, table });
            s.phase = Phase::Adjusting;
        }
        Event::PresentAdjusted => {
            let work = s.current.as_mut().expect("adjusting has a side");
            work.table = work.rounds.last().expect("a round was computed").table.clone();
            s.phase = Phase::RatioReview;
        }
        Event::Continue => {
            let done = s.sides.last().expect("a side is done").side;
            match done {
                Side::Left => enter_side(&mut s, Side::Right),
                Side::Right => finish_label(config, &mut s)?,
            }
        }
    }
    s.log(at, event.actor(), event.name(), from);
    Ok(s)
}

/// Folds a log from the initial state. The error carries the index of the
/// first rejected event.
pub fn replay(
    config: &SessionConfig,
    events: &[LoggedEvent],
) -> std::result::Result<SessionState, (usize, ElicitationError)> {
    config.validate().map_err(|e| (0, e))?;
    let mut state = SessionState::initial();
    for (i, e) in events.iter().enumerate() {
        state = transition(config, &state, e).map_err(|err| (i, err))?;
    }
    Ok(state)
}

fn protocol(state: &SessionState, event: &Event) -> ElicitationError {
    ElicitationError::Protocol {
        phase: state.phase.label(),
        expected: state.expected_events().iter().map(|s| s.to_string()).collect(),
        got: event.name().to_string(),
    }
}

fn to_f64s(v: &[Rational]) -> Vec<f64> {
    v.iter().map(rational::to_f64).collect()
}

fn begin_label(config: &SessionConfig, s: &mut SessionState, label: &str) -> Result<()> {
    let scale = s.value_scale.as_ref().expect("label values are known");
    let value = scale
        .value_of(label)
        .ok_or_else(|| ElicitationError::Domain(format!("unknown label {label:?}")))?;
    let d = config.domain;
    let anchor = (d.lo() + rational::to_f64(value) * d.width()).clamp(d.lo(), d.hi());
    s.search = Some(CoreSupportSearch::new(d, anchor, config.resolution)?);
    s.label = Some(label.to_string());
    s.core_support = None;
    s.current = None;
    s.sides.clear();
    s.phase = Phase::CoreSupport;
    Ok(())
}

/// Moves to card placement for `side`; a side whose support and core edges
/// coincide is vertical and is recorded without asking.
fn enter_side(s: &mut SessionState, side: Side) {
    let cs = s.core_support.expect("core support is known");
    let (e, c) = side.edges(&cs);
    if e != c {
        s.phase = Phase::SideCards { side };
        return;
    }
    let chain = CardChain::from_exact(vec!["x1".into(), "x2".into()], &[0]).unwrap();
    let memberships = vec![rational::zero(), rational::one()];
    let fragment = build_t1_side(&[0.0, 1.0], &[e, c], side, &cs).expect("vertical side");
    s.sides.push(SideResult {
        side,
        chain,
        breakpoints: vec![e, c],
        members: vec![SideMember { gaps: vec![0], memberships, fragment }],
    });
    s.phase = Phase::SideDone;
}

fn place_cards(
    config: &SessionConfig,
    s: &mut SessionState,
    side: Side,
    items: Option<Vec<String>>,
    gaps: &[CardGap],
    breakpoints: Option<Vec<f64>>,
) -> Result<()> {
    let chain = match items {
        Some(items) => CardChain::new(items, gaps.to_vec())?,
        None => CardChain::anonymous(gaps.to_vec())?,
    };
    let p = chain.len();
    let cs = s.core_support.expect("core support is known");
    let breakpoints = breakpoints.unwrap_or_else(|| uniform_breakpoints(p, side, &cs));
    // validates the positions before anything is stored
    let probe: Vec<f64> = (0..p).map(|r| r as f64 / (p - 1) as f64).collect();
    let breakpoints = build_t1_side(&probe, &breakpoints, side, &cs)
        .map(|f| {
            let mut xs: Vec<f64> = f.points.iter().map(|p| p.0).collect();
            if side == Side::Right {
                xs.reverse();
            }
            xs
        })?;

    if chain.is_exact() {
        let values = nonnormalized_values(&chain)?;
        let table = ratio_table(&values)?;
        s.current = Some(SideWork { side, chain, breakpoints, values, table, rounds: Vec::new() });
        s.phase = Phase::RatioReview;
        return Ok(());
    }

    let chains = enumerate_chains(&chain, config.enumeration_cap)?;
    let other = s.sides.iter().map(|r| r.members.len() as u128).product::<u128>();
    let count = other * chains.len() as u128;
    if count > u128::from(config.enumeration_cap) {
        return Err(ElicitationError::TooManyChains { count, cap: config.enumeration_cap });
    }
    let members = chains
        .iter()
        .map(|c| {
            let memberships = normalize(&nonnormalized_values(c)?)?;
            let fragment = build_t1_side(&to_f64s(&memberships), &breakpoints, side, &cs)?;
            let gaps = c.gaps().iter().map(|g| g.exact().unwrap()).collect();
            Ok(SideMember { gaps, memberships, fragment })
        })
        .collect::<Result<Vec<_>>>()?;
    s.sides.push(SideResult { side, chain, breakpoints, members });
    s.phase = Phase::SideDone;
    Ok(())
}

/// Cards for adjusted values, which may be fractional: they are scaled so
/// that the smallest positive step is one unit before fitting.
fn suggest_cards(values: &[Rational], h_max: u64) -> Result<CardFit> {
    let p = values.len() as u64;
    let h_max = h_max.max(p - 1);
    if values.windows(2).all(|w| w[1] > w[0]) {
        return cards_from_values(values, h_max);
    }
    // equal adjusted values cannot be separated by cards; fit the strictly
    // increasing envelope with a unit minimum step instead
    let mut fixed = Vec::with_capacity(values.len());
    let mut prev: Option<Rational> = None;
    for v in values {
        let v = match &prev {
            Some(p) if v <= p => p + rational::ratio(1, 1_000_000),
            _ => v.clone(),
        };
        prev = Some(v.clone());
        fixed.push(v);
    }
    cards_from_values(&fixed, h_max)
}

fn finish_label(config: &SessionConfig, s: &mut SessionState) -> Result<()> {
    let left = s.sides.iter().find(|r| r.side == Side::Left).cloned().expect("left side done");
    let right = s.sides.iter().find(|r| r.side == Side::Right).cloned().expect("right side done");
    let count = left.members.len() * right.members.len();
    if count as u64 > config.enumeration_cap {
        return Err(ElicitationError::TooManyChains { count: count as u128, cap: config.enumeration_cap });
    }
    let mut family: Vec<PiecewiseMF> = Vec::with_capacity(count);
    for l in &left.members {
        for r in &right.members {
            family.push(assemble(&l.fragment, &r.fragment)?);
        }
    }
    let it2 = envelope_it2(&family)?;
    let label = s.label.clone().expect("a label is under construction");
    let result = LabelResult {
        label: label.clone(),
        core_support: s.core_support.expect("core support is known"),
        left,
        right,
        family_size: count,
        it2,
    };
    s.labels.retain(|l| l.label != label);
    s.labels.push(result);
    s.sides.clear();
    s.search = None;
    s.phase = Phase::Assembled;
    Ok(())
}
