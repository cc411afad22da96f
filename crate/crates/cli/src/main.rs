//! `docit2`: replays session logs, runs computations, converts card counts,
//! emits plot data and serves the HTTP API.
//!
//! Failures print `{"error": {"kind", "message", ...}}` on stderr and exit
//! with 2 (validation), 3 (protocol) or 4 (internal).

use std::fs;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::{json, Value};

use docit2_core::compute::{compute, parse_request_value, ComputeRequest, ComputeResponse, MfResult, MfSpec};
use docit2_core::elicitation::session::SessionConfig;
use docit2_core::elicitation::{cards_from_values, tuple_to_cards, ElicitationError};
use docit2_core::io::{self, load, load_events_jsonl, parse_json, save, FieldError, IoError, SessionDocument};
use docit2_core::it2::{It2Order, IT2MF};
use docit2_core::mcdm::{LinguisticScale, RankReport};
use docit2_core::rational::{self, Rational};
use docit2_core::ErrorKind;

#[derive(Parser)]
#[command(name = "docit2", version, about = "Card-based elicitation of interval type-2 fuzzy labels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replays an event log or a session document and writes the document.
    Replay {
        /// `.events.jsonl` log or `.docit2.json` document.
        #[arg(long)]
        input: PathBuf,
        /// Session configuration for a log; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Where to write the document; stdout when omitted. A summary of the
        /// assembled labels then goes to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        h_max: Option<u64>,
        #[arg(long)]
        enumeration_cap: Option<u64>,
    },
    /// Runs one computation request, or an array of them.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Type-2 order (1 or 2) for requests that do not name one.
        #[arg(long)]
        order: Option<It2Order>,
        /// Ranking table of the rank requests.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Knot table of every resulting membership function.
        #[arg(long)]
        knots: Option<PathBuf>,
    },
    /// Converts a value tuple into blank-card counts.
    #[command(group(ArgGroup::new("mode").required(true).args(["m", "h_max"])))]
    Cards {
        /// Comma-separated ascending values starting at 0.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Vec<String>,
        /// Decimal precision: counts sum to 10^m and the tuple must end at 1.
        #[arg(long)]
        m: Option<u32>,
        /// Largest card total tried when fitting the values.
        #[arg(long)]
        h_max: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Serves the HTTP API.
    Serve {
        #[arg(long, env = "DOCIT2_PORT", default_value_t = 8080)]
        port: u16,
        /// Address to bind; use 0.0.0.0 to expose the service.
        #[arg(long, env = "DOCIT2_BIND", default_value = "127.0.0.1")]
        bind: IpAddr,
        /// Default enumeration cap for new sessions.
        #[arg(long, env = "DOCIT2_ENUMERATION_CAP")]
        enumeration_cap: Option<u64>,
        /// Stamp events that arrive without a timestamp.
        #[arg(long, env = "DOCIT2_STAMP_EVENTS")]
        stamp_events: bool,
    },
    /// Writes the knot table of a session document, rank report or
    /// membership function.
    PlotData {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct CliError {
    kind: ErrorKind,
    message: String,
    details: Vec<(&'static str, Value)>,
}

impl CliError {
    fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        CliError { kind, message: message.into(), details: Vec::new() }
    }

    fn validation(message: impl Into<String>) -> Self {
        CliError::new(ErrorKind::Validation, message)
    }

    fn with(mut self, key: &'static str, value: Value) -> Self {
        self.details.push((key, value));
        self
    }

    fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::Validation => 2,
            ErrorKind::Protocol => 3,
            ErrorKind::Internal => 4,
        }
    }

    fn to_json(&self) -> Value {
        let mut err = json!({ "kind": self.kind, "message": self.message });
        for (k, v) in &self.details {
            err[*k] = v.clone();
        }
        json!({ "error": err })
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::validation(e.message).with("path", json!(e.path))
    }
}

impl CliError {
    fn with_elicitation(self, e: &ElicitationError) -> Self {
        match e {
            ElicitationError::Protocol { phase, expected, got } => self
                .with("phase", json!(phase))
                .with("expected", json!(expected))
                .with("got", json!(got)),
            ElicitationError::Inconsistent { boundary, .. } => self.with("boundary", json!(boundary)),
            _ => self,
        }
    }
}

impl From<ElicitationError> for CliError {
    fn from(e: ElicitationError) -> Self {
        CliError::new(e.kind(), e.to_string()).with_elicitation(&e)
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        let err = CliError::new(e.kind(), e.to_string());
        match e {
            IoError::Parse { offset, line, column, .. } => {
                err.with("offset", json!(offset)).with("line", json!(line)).with("column", json!(column))
            }
            IoError::Replay { index, error } => err.with("event", json!(index)).with_elicitation(&error),
            _ => err,
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))
}

fn write_to(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let res = match path {
        Some(p) => fs::write(p, bytes).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout().write_all(bytes).map_err(|e| e.to_string()),
    };
    res.map_err(|m| CliError::new(ErrorKind::Internal, m))
}

fn to_pretty(v: &impl serde::Serialize) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("results always serialize");
    out.push(b'\n');
    out
}

fn is_event_log(path: &Path) -> bool {
    path.to_string_lossy().ends_with(".jsonl")
}

fn replay(
    input: &Path,
    config: Option<&Path>,
    output: Option<&Path>,
    h_max: Option<u64>,
    cap: Option<u64>,
) -> Result<(), CliError> {
    let bytes = read(input)?;
    let doc = if is_event_log(input) {
        let mut cfg: SessionConfig = match config {
            Some(p) => parse_json(&read(p)?)?,
            None => SessionConfig::default(),
        };
        if let Some(h) = h_max {
            cfg.h_max = h;
        }
        if let Some(c) = cap {
            cfg.enumeration_cap = c;
        }
        cfg.validate()?;
        SessionDocument::from_events(cfg, load_events_jsonl(&bytes)?)?
    } else {
        if config.is_some() || h_max.is_some() || cap.is_some() {
            return Err(CliError::validation("a session document carries its own configuration"));
        }
        load(&bytes)?
    };
    let out = save(&doc);
    match output {
        Some(p) => {
            write_to(Some(p), &out)?;
            write_to(None, &to_pretty(&summary(&doc)))
        }
        None => write_to(None, &out),
    }
}

fn decimals(v: &[Rational]) -> Vec<f64> {
    v.iter().map(rational::to_f64).collect()
}

/// The phase, the next step, the label values and the side memberships of
/// every label.
fn summary(doc: &SessionDocument) -> Value {
    let s = &doc.state;
    let side = |r: &docit2_core::elicitation::session::SideResult| {
        json!(r
            .members
            .iter()
            .map(|m| json!({
                "gaps": m.gaps,
                "memberships": m.memberships.iter().map(rational::format).collect::<Vec<_>>(),
                "decimal": decimals(&m.memberships),
            }))
            .collect::<Vec<_>>())
    };
    json!({
        "phase": s.phase.label(),
        "events": doc.events.len(),
        "expected_events": s.expected_events(),
        "probe": s.pending_probe(),
        "label_values": s.value_scale.as_ref().map(|v| json!({
            "labels": v.labels,
            "values": v.values.iter().map(rational::format).collect::<Vec<_>>(),
            "decimal": decimals(&v.values),
        })),
        "current": s.current_memberships().map(|m| json!({
            "memberships": m.iter().map(rational::format).collect::<Vec<_>>(),
            "decimal": decimals(&m),
        })),
        "labels": s.labels.iter().map(|l| json!({
            "label": l.label,
            "family_size": l.family_size,
            "left": side(&l.left),
            "right": side(&l.right),
        })).collect::<Vec<_>>(),
    })
}

/// Binds scales that name a session document, relative to `base`.
fn resolve_sessions(req: &mut ComputeRequest, base: &Path) -> Result<(), CliError> {
    let ComputeRequest::Rank { problem, .. } = req else { return Ok(()) };
    for (name, scale) in problem.scales.iter_mut() {
        let Some(file) = scale.session.clone() else { continue };
        let doc = load(&read(&base.join(&file))?)
            .map_err(|e| CliError::from(e).with("path", json!(format!("problem.scales.{name}.session"))))?;
        if scale.labels.is_empty() {
            let mut bound = LinguisticScale::from_session(&doc.state)
                .map_err(|e| CliError::new(e.kind(), e.to_string()))?;
            bound.session = Some(file);
            *scale = bound;
        } else {
            scale.bind_session(&doc.state);
        }
    }
    Ok(())
}

fn fill_order(req: &mut ComputeRequest, default: It2Order) {
    match req {
        ComputeRequest::Order { order, .. } | ComputeRequest::Rank { order, .. } if order.is_none() => {
            *order = Some(default);
        }
        _ => {}
    }
}

fn run_compute(
    input: &Path,
    output: Option<&Path>,
    order: Option<It2Order>,
    csv: Option<&Path>,
    knots: Option<&Path>,
) -> Result<(), CliError> {
    let value: Value = parse_json(&read(input)?)?;
    let base = input.parent().unwrap_or(Path::new("."));
    let (items, batch) = match value {
        Value::Array(items) => (items, true),
        one => (vec![one], false),
    };
    let mut responses = Vec::new();
    for (i, item) in items.into_iter().enumerate() {
        let prefix = |path: &str| if batch { format!("[{i}].{path}") } else { path.to_string() };
        let mut req = parse_request_value(item).map_err(|e| {
            let path = if e.path == "." && batch { format!("[{i}]") } else { prefix(&e.path) };
            CliError::validation(e.message).with("path", json!(path))
        })?;
        if let Some(o) = order {
            fill_order(&mut req, o);
        }
        resolve_sessions(&mut req, base)?;
        let res = compute(&req).map_err(|e| {
            let err = CliError::new(e.kind(), e.to_string());
            if batch { err.with("request", json!(i)) } else { err }
        })?;
        responses.push(res);
    }
    let name = |i: usize, base: &str| if batch { format!("{i}:{base}") } else { base.to_string() };
    if let Some(path) = csv {
        let mut out = String::from("order,position,alternative\n");
        for r in &responses {
            if let ComputeResponse::Rank(report) = r {
                out.extend(report.ranking_csv().lines().skip(1).map(|l| format!("{l}\n")));
            }
        }
        write_to(Some(path), out.as_bytes())?;
    }
    if let Some(path) = knots {
        let mut mfs: Vec<(String, IT2MF)> = Vec::new();
        for (i, r) in responses.iter().enumerate() {
            match r {
                ComputeResponse::Mf { result: MfResult::It2(m) } => mfs.push((name(i, "result"), m.clone())),
                ComputeResponse::Mf { result: MfResult::T1(m) } => {
                    mfs.push((name(i, "result"), IT2MF::degenerate(m.clone())))
                }
                ComputeResponse::Rank(report) => {
                    mfs.extend(report.scores.iter().map(|s| (name(i, &s.alternative), s.score.clone())))
                }
                ComputeResponse::Order { .. } => {}
            }
        }
        let refs: Vec<(&str, &IT2MF)> = mfs.iter().map(|(n, m)| (n.as_str(), m)).collect();
        write_to(Some(path), io::knot_csv(&refs).as_bytes())?;
    }
    let out = if batch { to_pretty(&responses) } else { to_pretty(&responses[0]) };
    write_to(output, &out)
}

fn parse_values(values: &[String]) -> Result<Vec<Rational>, CliError> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            rational::parse(v).map_err(|e| CliError::validation(e.to_string()).with("path", json!(format!("values[{i}]"))))
        })
        .collect()
}

fn cards(values: &[String], m: Option<u32>, h_max: Option<u64>, as_json: bool) -> Result<(), CliError> {
    let x = parse_values(values)?;
    let join = |v: Vec<String>| v.join(",") + "\n";
    let out = match (m, h_max) {
        (Some(m), _) => {
            let counts = tuple_to_cards(&x, m)?;
            if as_json {
                to_pretty(&json!({ "m": m, "cards": counts }))
            } else {
                join(counts.iter().map(u64::to_string).collect()).into_bytes()
            }
        }
        (None, Some(h)) => {
            let fit = cards_from_values(&x, h)?;
            if as_json {
                to_pretty(&fit)
            } else {
                join(fit.gaps.iter().map(u32::to_string).collect()).into_bytes()
            }
        }
        (None, None) => unreachable!("clap requires --m or --h-max"),
    };
    write_to(None, &out)
}

fn serve(port: u16, bind: IpAddr, cap: Option<u64>, stamp_events: bool) -> Result<(), CliError> {
    let internal = |e: std::io::Error| CliError::new(ErrorKind::Internal, e.to_string());
    let rt = tokio::runtime::Runtime::new().map_err(internal)?;
    let addr = SocketAddr::new(bind, port);
    eprintln!("listening on http://{addr}");
    let config = docit2_service::ServiceConfig { enumeration_cap: cap, stamp_events };
    rt.block_on(docit2_service::serve(addr, config)).map_err(internal)
}

fn plot_data(input: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let bytes = read(input)?;
    let value: Value = parse_json(&bytes)?;
    let csv = if value.get("schema_version").is_some() {
        let doc = load(&bytes)?;
        let items: Vec<(&str, &IT2MF)> = doc.state.labels.iter().map(|l| (l.label.as_str(), &l.it2)).collect();
        io::knot_csv(&items)
    } else if value.get("scores").is_some() {
        let report: RankReport = parse_json(&bytes)?;
        report.knot_csv()
    } else {
        let spec: MfSpec = parse_json(&bytes)?;
        let mf = spec.to_it2().map_err(|e| CliError::validation(e.to_string()))?;
        let stem = input.file_stem().map_or("mf".into(), |s| s.to_string_lossy().into_owned());
        let stem = stem.split('.').next().unwrap_or("mf").to_string();
        io::knot_csv(&[(stem.as_str(), &mf)])
    };
    write_to(output, csv.as_bytes())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Replay { input, config, output, h_max, enumeration_cap } => {
            replay(&input, config.as_deref(), output.as_deref(), h_max, enumeration_cap)
        }
        Command::Compute { input, output, order, csv, knots } => {
            run_compute(&input, output.as_deref(), order, csv.as_deref(), knots.as_deref())
        }
        Command::Cards { values, m, h_max, json } => cards(&values, m, h_max, json),
        Command::Serve { port, bind, enumeration_cap, stamp_events } => serve(port, bind, enumeration_cap, stamp_events),
        Command::PlotData { input, output } => plot_data(&input, output.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
