//! Session documents: versioned JSON persistence, event logs, replay and
//! plot exports.

use serde::{Deserialize, Serialize};

use crate::elicitation::session::{
    replay, transition, AdjustmentRound, LoggedEvent, SessionConfig, SessionState,
};
use crate::elicitation::{CoreSupport, ElicitationError, Probe, RatioTable, ValueScale};
use crate::fuzzy::PiecewiseMF;
use crate::it2::IT2MF;
use crate::rational::{self, Rational};
use crate::ErrorKind;

pub const SCHEMA_VERSION: u32 = 1;

/// A rejected JSON input with the path of the offending field (`.` for the
/// whole value).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{path}: {message}")]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl FieldError {
    pub fn new(path: &str, message: &str) -> Self {
        FieldError { path: path.to_string(), message: message.to_string() }
    }
}

/// Deserializes with the path of the first offending field.
pub fn parse_json<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T, FieldError> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let v = serde_path_to_error::deserialize(&mut de).map_err(|e| FieldError {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| FieldError::new(".", &e.to_string()))?;
    Ok(v)
}

/// Reads an object tagged by the field `tag` into an enum keyed by variant
/// name, so that errors inside the variant carry their field path.
pub(crate) fn parse_keyed<T: serde::de::DeserializeOwned>(
    mut value: serde_json::Value,
    tag: &str,
) -> Result<T, FieldError> {
    let obj = value
        .as_object_mut()
        .ok_or_else(|| FieldError::new(".", "expected an object"))?;
    let name = match obj.remove(tag) {
        Some(serde_json::Value::String(s)) => s,
        Some(_) => return Err(FieldError::new(tag, "expected a string")),
        None => return Err(FieldError::new(tag, &format!("missing field `{tag}`"))),
    };
    let keyed = serde_json::json!({ name.as_str(): value });
    serde_path_to_error::deserialize(keyed).map_err(|e| {
        let full = e.path().to_string();
        let path = match full.strip_prefix(name.as_str()) {
            Some("") => ".".to_string(),
            Some(rest) => rest.trim_start_matches('.').to_string(),
            None => tag.to_string(),
        };
        let path = if path == "." && e.inner().to_string().starts_with("unknown variant") {
            tag.to_string()
        } else {
            path
        };
        FieldError { path, message: e.inner().to_string() }
    })
}

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("parse error at byte {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema version {found:?} is not supported (this build reads version {supported})")]
    UnsupportedVersion { found: Option<u64>, supported: u32 },
    #[error("event {index} was rejected: {error}")]
    Replay { index: usize, error: ElicitationError },
    #[error("the stored state differs from the replayed event log")]
    SnapshotMismatch,
}

impl IoError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            IoError::Replay { error, .. } => error.kind(),
            _ => ErrorKind::Validation,
        }
    }

    fn parse(bytes: &[u8], e: serde_json::Error) -> IoError {
        let (line, column) = (e.line(), e.column());
        IoError::Parse {
            offset: byte_offset(bytes, line, column),
            line,
            column,
            message: e.to_string(),
        }
    }
}

/// Byte offset of a 1-based line and column as reported by the JSON parser.
fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    let mut start = 0;
    for _ in 1..line {
        match bytes[start..].iter().position(|&b| b == b'\n') {
            Some(i) => start += i + 1,
            None => break,
        }
    }
    (start + column.saturating_sub(1)).min(bytes.len())
}

/// A session: its configuration, the accepted events in order and the state
/// they produce. The state holds every produced artifact (label values,
/// cores and supports, accepted sides and assembled type-2 labels).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionDocument {
    pub schema_version: u32,
    pub config: SessionConfig,
    pub events: Vec<LoggedEvent>,
    pub state: SessionState,
}

impl SessionDocument {
    pub fn new(config: SessionConfig) -> Result<Self, ElicitationError> {
        config.validate()?;
        Ok(SessionDocument {
            schema_version: SCHEMA_VERSION,
            config,
            events: Vec::new(),
            state: SessionState::initial(),
        })
    }

    /// Applies and records one event; a rejected event changes nothing.
    pub fn apply(&mut self, event: LoggedEvent) -> Result<(), ElicitationError> {
        self.state = transition(&self.config, &self.state, &event)?;
        self.events.push(event);
        Ok(())
    }

    pub fn from_events(config: SessionConfig, events: Vec<LoggedEvent>) -> Result<Self, IoError> {
        let state = replay(&config, &events).map_err(|(index, error)| IoError::Replay { index, error })?;
        Ok(SessionDocument { schema_version: SCHEMA_VERSION, config, events, state })
    }

    pub fn view(&self) -> SessionView {
        SessionView::of(&self.state)
    }
}

/// Pretty JSON with a trailing newline.
pub fn save(doc: &SessionDocument) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(doc).expect("documents always serialize");
    out.push(b'\n');
    out
}

/// Reads a document and checks that its event log reproduces its state.
pub fn load(bytes: &[u8]) -> Result<SessionDocument, IoError> {
    let value: serde_json::Value = serde_json::from_slice(bytes).map_err(|e| IoError::parse(bytes, e))?;
    let found = value.get("schema_version").and_then(|v| v.as_u64());
    if found != Some(u64::from(SCHEMA_VERSION)) {
        return Err(IoError::UnsupportedVersion { found, supported: SCHEMA_VERSION });
    }
    let doc: SessionDocument = serde_json::from_slice(bytes).map_err(|e| IoError::parse(bytes, e))?;
    let state = replay(&doc.config, &doc.events).map_err(|(index, error)| IoError::Replay { index, error })?;
    if state != doc.state {
        return Err(IoError::SnapshotMismatch);
    }
    Ok(doc)
}

/// One event per line.
pub fn save_events_jsonl(events: &[LoggedEvent]) -> Vec<u8> {
    let mut out = Vec::new();
    for e in events {
        serde_json::to_writer(&mut out, e).expect("events always serialize");
        out.push(b'\n');
    }
    out
}

/// Reads an event log; blank lines are skipped and offsets refer to the
/// whole input.
pub fn load_events_jsonl(bytes: &[u8]) -> Result<Vec<LoggedEvent>, IoError> {
    let mut events = Vec::new();
    let mut start = 0;
    for (n, line) in bytes.split(|&b| b == b'\n').enumerate() {
        if !line.iter().all(u8::is_ascii_whitespace) {
            let e = serde_json::from_slice(line).map_err(|e| IoError::Parse {
                offset: start + e.column().saturating_sub(1),
                line: n + 1,
                column: e.column(),
                message: e.to_string(),
            })?;
            events.push(e);
        }
        start += line.len() + 1;
    }
    Ok(events)
}

/// `(x, membership)` knots of a membership function.
pub fn knot_list(mf: &PiecewiseMF) -> Vec<(f64, f64)> {
    mf.knots().points().to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct It2Preview {
    pub name: String,
    pub lower: Vec<(f64, f64)>,
    pub upper: Vec<(f64, f64)>,
}

impl It2Preview {
    pub fn of(name: &str, mf: &IT2MF) -> Self {
        It2Preview { name: name.to_string(), lower: knot_list(mf.lower()), upper: knot_list(mf.upper()) }
    }
}

/// Knot table `name,bound,x,membership` for plotting; `bound` is `lower`
/// or `upper`.
pub fn knot_csv(items: &[(&str, &IT2MF)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "bound", "x", "membership"]).unwrap();
    for (name, mf) in items {
        for (bound, f) in [("lower", mf.lower()), ("upper", mf.upper())] {
            for (x, m) in knot_list(f) {
                w.write_record([name.to_string(), bound.to_string(), x.to_string(), m.to_string()]).unwrap();
            }
        }
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// What a client needs to render the current step of a session.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionView {
    pub phase: String,
    pub prompt: String,
    pub expected_events: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<Probe>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_scale: Option<ValueScale>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core_support: Option<CoreSupport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<RatioTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjustment: Option<AdjustmentRound>,
    #[serde(with = "opt_rationals", skip_serializing_if = "Option::is_none")]
    pub memberships: Option<Vec<Rational>>,
    /// Side knots of the current label, one list per family member.
    pub sides: Vec<Vec<(f64, f64)>>,
    pub previews: Vec<It2Preview>,
}

mod opt_rationals {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => rational::serde_vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }
}

impl SessionView {
    pub fn of(state: &SessionState) -> Self {
        use crate::elicitation::session::Phase;
        let prompt = match state.phase {
            Phase::LabelValues if state.value_scale.is_some() => "choose a label to construct".to_string(),
            Phase::LabelValues => "place blank cards between consecutive labels".to_string(),
            Phase::CoreSupport => match state.pending_probe() {
                Some(p) => format!(
                    "how confident are you that {} is {}?",
                    p.x,
                    state.label.as_deref().unwrap_or("this label")
                ),
                None => "set the core and support".to_string(),
            },
            Phase::SideCards { side } => format!("place blank cards on the {side:?} side").to_lowercase(),
            Phase::RatioReview => "are you satisfied with these ratios?".to_string(),
            Phase::Adjusting => "values were adjusted to the modified ratios".to_string(),
            Phase::SideDone => "side finished".to_string(),
            Phase::Assembled => "label assembled".to_string(),
        };
        SessionView {
            phase: state.phase.label(),
            prompt,
            expected_events: state.expected_events(),
            probe: state.pending_probe(),
            value_scale: state.value_scale.clone(),
            label: state.label.clone(),
            core_support: state.core_support,
            table: state.current.as_ref().map(|w| w.table.clone()),
            adjustment: match state.phase {
                Phase::Adjusting => state.current.as_ref().and_then(|w| w.rounds.last().cloned()),
                _ => None,
            },
            memberships: state.current_memberships(),
            sides: state
                .sides
                .iter()
                .flat_map(|s| s.members.iter().map(|m| m.fragment.points.clone()))
                .collect(),
            previews: state.labels.iter().map(|l| It2Preview::of(&l.label, &l.it2)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elicitation::session::Event;
    use crate::elicitation::CardGap;

    #[test]
    fn empty_session_round_trip() {
        let doc = SessionDocument::new(SessionConfig::default()).unwrap();
        let bytes = save(&doc);
        let back = load(&bytes).unwrap();
        assert_eq!(back, doc);
        assert_eq!(save(&back), bytes);
    }

    #[test]
    fn unknown_version() {
        let doc = SessionDocument::new(SessionConfig::default()).unwrap();
        let text = String::from_utf8(save(&doc)).unwrap().replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(matches!(
            load(text.as_bytes()),
            Err(IoError::UnsupportedVersion { found: Some(7), .. })
        ));
    }

    #[test]
    fn corrupted_payload_reports_offset() {
        let bytes = b"{\n  \"schema_version\": 1,\n  \"config\": {]\n}";
        match load(bytes) {
            Err(IoError::Parse { offset, line, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(bytes[offset], b']');
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tampered_state_is_detected() {
        let mut doc = SessionDocument::new(SessionConfig::default()).unwrap();
        doc.apply(Event::LabelCards { gaps: vec![CardGap::Exact(1), CardGap::Exact(0)] }.into()).unwrap();
        let mut other = doc.clone();
        other.state.label = Some("x".into());
        assert!(matches!(load(&save(&other)), Err(IoError::SnapshotMismatch)));
        assert_eq!(load(&save(&doc)).unwrap(), doc);
    }

    #[test]
    fn jsonl_round_trip() {
        let events: Vec<LoggedEvent> = vec![
            Event::LabelCards { gaps: vec![CardGap::Exact(1), CardGap::Exact(0)] }.into(),
            LoggedEvent { at: Some("t1".into()), event: Event::BeginLabel { label: "low".into() } },
        ];
        let bytes = save_events_jsonl(&events);
        assert_eq!(load_events_jsonl(&bytes).unwrap(), events);
        let bad = b"{\"type\":\"accept\"}\n{\"type\":\n";
        match load_events_jsonl(bad) {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_lists_both_bounds() {
        let mf = IT2MF::degenerate(PiecewiseMF::triangular(0.0, 0.5, 1.0).unwrap());
        let csv = knot_csv(&[("a", &mf)]);
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.starts_with("name,bound,x,membership\na,lower,0,0\n"));
    }
}
