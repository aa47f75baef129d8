//! Scenario configuration: a flat TOML file with `[layout]`, `[pathloss]`,
//! `[sweep]` and `[grid]` sections.
//!
//! ```toml
//! scheme = "joint"
//! N = 64
//! K_dB = 10            # or "10dB"
//! frequency = 2.4e9    # Hz, or "2.4GHz"
//! P1 = 5.0
//! P2 = 5.0             # or P_tot = 5.0 for the optimizer
//! N0_dBm = -130        # or N0 = 1e-16 (watts)
//! M = 2
//! relay_mode = "ideal"
//! seed = 1
//!
//! [layout]
//! source = [5.0, 0.0]
//! destination = [5.0, 10.0]
//! ris = [0.0, 15.0]
//! relay = [10.0, 35.0]
//!
//! [pathloss]
//! model = "umi"        # umi | umi-street-canyon | custom
//! cascade = "product"  # product | end-to-end
//!
//! [pathloss.ris]       # optional law for the RIS segments
//! model = "custom"
//! intercept_db = 28.0
//! distance_slope_db = 22.0
//! frequency_slope_db = 20.0
//! ```
//!
//! [`validate_config`] reports every violation at once rather than stopping at
//! the first.

use std::fmt;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::geometry::{AffineLogLoss, CascadeRule, NodeLayout, PathLossKind, PathLossModel, Point};
use crate::optimizer::{Objective, SplitProblem};
use crate::schemes::PowerAllocation;
use crate::{db_to_linear, dbm_to_watts, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagnosticKind {
    /// Malformed text, missing field, wrong type, unknown key or value.
    Parse,
    /// Well-formed but physically or logically impossible.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

/// All violations found in one config.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn has_parse_errors(&self) -> bool {
        self.0.iter().any(|d| d.kind == DiagnosticKind::Parse)
    }

    pub fn mentions(&self, field: &str) -> bool {
        self.0.iter().any(|d| d.field == field)
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Powers {
    /// Fixed per-slot powers. `p3` is the joint-scheme relay power.
    Explicit { p1: f64, p2: f64, p3: Option<f64> },
    /// Total budget split by the optimizer.
    Budget { p_tot: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Noise {
    Watts(f64),
    Dbm(f64),
}

impl Noise {
    pub fn watts(self) -> f64 {
        match self {
            Noise::Watts(w) => w,
            Noise::Dbm(d) => dbm_to_watts(d),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelayMode {
    /// Relay always decodes correctly.
    #[default]
    Ideal,
    /// Rate limited by the relay's own receive SNR.
    Nonideal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepVariable {
    /// `P_tot / N0` in dB, with the configured powers held fixed.
    SnrDb,
    /// RIS element count.
    Elements,
    /// y coordinate of the RIS.
    RisY,
    /// y coordinate of the relay.
    RelayY,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::SnrDb => "snr-db",
            SweepVariable::Elements => "N",
            SweepVariable::RisY => "ris-y",
            SweepVariable::RelayY => "relay-y",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Self::SnrDb, Self::Elements, Self::RisY, Self::RelayY]
            .into_iter()
            .find(|v| v.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    /// Maximum symbols per point (BER) or draws per point (rates); the
    /// experiment's default when absent.
    pub trials: Option<u64>,
    /// Stop a BER point once this many bit errors have been seen.
    pub min_errors: u64,
    /// Noise draws per channel realization in BER runs.
    pub symbols_per_draw: u32,
}

impl SweepSpec {
    pub const DEFAULT_BER_TRIALS: u64 = 10_000_000;
    pub const DEFAULT_MIN_ERRORS: u64 = 200;
    pub const DEFAULT_SYMBOLS_PER_DRAW: u32 = 8;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub ris_y: Vec<f64>,
    pub relay_y: Vec<f64>,
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scheme: Scheme,
    pub layout: NodeLayout,
    /// RIS element count.
    pub elements: usize,
    pub k_db: f64,
    pub pathloss: PathLossModel,
    /// Model for the RIS segments; `pathloss` when absent.
    pub ris_pathloss: Option<PathLossModel>,
    pub cascade: CascadeRule,
    pub powers: Powers,
    pub noise: Option<Noise>,
    /// PSK modulation order.
    pub modulation: usize,
    pub relay_mode: RelayMode,
    pub objective: Objective,
    pub seed: u64,
    pub sweep: Option<SweepSpec>,
    pub grid: Option<GridSpec>,
}

impl ScenarioConfig {
    pub fn k_linear(&self) -> f64 {
        db_to_linear(self.k_db)
    }

    pub fn n0(&self) -> Option<f64> {
        self.noise.map(Noise::watts)
    }

    /// Power spent over both slots.
    pub fn total_power(&self) -> f64 {
        match self.powers {
            Powers::Budget { p_tot } => p_tot,
            Powers::Explicit { p1, p2, p3 } => match self.scheme {
                Scheme::Joint => p1 + p2 + p3.unwrap_or(p2),
                Scheme::Integrated | Scheme::RelayOnly => p1 + p2,
                Scheme::RisOnly => p1,
            },
        }
    }

    /// Fixed powers at noise level `n0`.
    pub fn power_allocation_at(&self, n0: f64) -> Result<PowerAllocation, String> {
        match self.powers {
            Powers::Explicit { p1, p2, p3 } => {
                let pa = PowerAllocation {
                    p1,
                    p2,
                    p3: if self.scheme == Scheme::Joint {
                        p3.unwrap_or(p2)
                    } else {
                        0.0
                    },
                    n0,
                };
                pa.validate(self.scheme).map_err(|e| e.to_string())?;
                Ok(pa)
            }
            Powers::Budget { .. } => Err("explicit powers P1/P2 are required".into()),
        }
    }

    pub fn power_allocation(&self) -> Result<PowerAllocation, String> {
        let n0 = self.n0().ok_or("noise level N0 or N0_dBm is required")?;
        self.power_allocation_at(n0)
    }

    pub fn split_problem(&self) -> Result<SplitProblem, String> {
        let n0 = self.n0().ok_or("noise level N0 or N0_dBm is required")?;
        match self.powers {
            Powers::Budget { p_tot } => Ok(SplitProblem {
                scheme: self.scheme,
                budget: p_tot,
                n0,
                objective: self.objective,
            }),
            Powers::Explicit { .. } => Err("P_tot is required for power optimization".into()),
        }
    }

    fn base(scheme: Scheme, layout: NodeLayout, elements: usize, pathloss: PathLossModel) -> Self {
        Self {
            scheme,
            layout,
            elements,
            k_db: 10.0,
            pathloss,
            ris_pathloss: None,
            cascade: CascadeRule::Product,
            powers: Powers::Explicit {
                p1: 5.0,
                p2: 5.0,
                p3: None,
            },
            noise: None,
            modulation: 2,
            relay_mode: RelayMode::Ideal,
            objective: Objective::SharedP2,
            seed: 1,
            sweep: None,
            grid: None,
        }
    }

    /// Joint-scheme BER layout at 2.4 GHz: S(5,0), D(5,10), RIS(0,15),
    /// relay(10,35), `P1 = P2 = 5 W`.
    pub fn sub6_joint(elements: usize) -> Self {
        let layout = NodeLayout {
            source: Point::new(5.0, 0.0),
            destination: Point::new(5.0, 10.0),
            ris: Point::new(0.0, 15.0),
            relay: Point::new(10.0, 35.0),
        };
        Self::base(Scheme::Joint, layout, elements, PathLossModel::umi_2_4ghz())
    }

    /// Integrated-scheme BER layout at 2.4 GHz: S(40,0), D(40,75),
    /// RIS/relay(0,35), `P1 = P2 = 5 W`.
    pub fn sub6_integrated(elements: usize) -> Self {
        let layout = NodeLayout::integrated(
            Point::new(40.0, 0.0),
            Point::new(40.0, 75.0),
            Point::new(0.0, 35.0),
        );
        Self::base(Scheme::Integrated, layout, elements, PathLossModel::umi_2_4ghz())
    }

    /// Joint-scheme position study at 28 GHz: S(10,0), D(10,60),
    /// RIS(0,y_ris), relay(25,y_relay), `P1 = 5 W`, `P2 = P3 = 2.5 W`,
    /// `N0 = -130 dBm`.
    pub fn mmwave_placement(elements: usize, y_ris: f64, y_relay: f64) -> Self {
        let layout = NodeLayout {
            source: Point::new(10.0, 0.0),
            destination: Point::new(10.0, 60.0),
            ris: Point::new(0.0, y_ris),
            relay: Point::new(25.0, y_relay),
        };
        Self {
            powers: Powers::Explicit {
                p1: 5.0,
                p2: 2.5,
                p3: None,
            },
            noise: Some(Noise::Dbm(-130.0)),
            ..Self::base(
                Scheme::Joint,
                layout,
                elements,
                PathLossModel::umi_street_canyon_28ghz(),
            )
        }
    }

    /// Integrated-scheme element sweep at 2.4 GHz: S(20,0), D(20,55),
    /// RIS/relay(0,20).
    pub fn mmwave_integrated(elements: usize) -> Self {
        let layout = NodeLayout::integrated(
            Point::new(20.0, 0.0),
            Point::new(20.0, 55.0),
            Point::new(0.0, 20.0),
        );
        Self {
            noise: Some(Noise::Dbm(-130.0)),
            ..Self::base(Scheme::Integrated, layout, elements, PathLossModel::umi_2_4ghz())
        }
    }

    /// Joint-scheme optimizer study at 28 GHz: S(10,0), D(10,40),
    /// RIS(0,y_ris), relay(0,y_relay), `P_tot = 5 W`, `N0 = -130 dBm`.
    pub fn mmwave_budget(elements: usize, y_ris: f64, y_relay: f64) -> Self {
        let layout = NodeLayout {
            source: Point::new(10.0, 0.0),
            destination: Point::new(10.0, 40.0),
            ris: Point::new(0.0, y_ris),
            relay: Point::new(0.0, y_relay),
        };
        Self {
            powers: Powers::Budget { p_tot: 5.0 },
            noise: Some(Noise::Dbm(-130.0)),
            relay_mode: RelayMode::Nonideal,
            ..Self::base(
                Scheme::Joint,
                layout,
                elements,
                PathLossModel::umi_street_canyon_28ghz(),
            )
        }
    }

    /// Canonical TOML form; [`validate_config`] on it reproduces `self`.
    pub fn to_toml(&self) -> String {
        let f = Value::Float;
        let point = |p: Point| Value::Array(vec![f(p.x), f(p.y)]);
        let mut root = Table::new();
        root.insert("scheme".into(), Value::String(self.scheme.to_string()));
        root.insert("N".into(), Value::Integer(self.elements as i64));
        root.insert("K_dB".into(), f(self.k_db));
        root.insert("frequency".into(), f(self.pathloss.carrier_hz));
        match self.powers {
            Powers::Explicit { p1, p2, p3 } => {
                root.insert("P1".into(), f(p1));
                root.insert("P2".into(), f(p2));
                if let Some(p3) = p3 {
                    root.insert("P3".into(), f(p3));
                }
            }
            Powers::Budget { p_tot } => {
                root.insert("P_tot".into(), f(p_tot));
            }
        }
        match self.noise {
            Some(Noise::Watts(w)) => {
                root.insert("N0".into(), f(w));
            }
            Some(Noise::Dbm(d)) => {
                root.insert("N0_dBm".into(), f(d));
            }
            None => {}
        }
        root.insert("M".into(), Value::Integer(self.modulation as i64));
        root.insert(
            "relay_mode".into(),
            Value::String(
                match self.relay_mode {
                    RelayMode::Ideal => "ideal",
                    RelayMode::Nonideal => "nonideal",
                }
                .into(),
            ),
        );
        root.insert(
            "objective".into(),
            Value::String(
                match self.objective {
                    Objective::SharedP2 => "shared-p2",
                    Objective::PerSlot => "per-slot",
                }
                .into(),
            ),
        );
        // toml integers are i64; seeds are carried bit-for-bit.
        root.insert("seed".into(), Value::Integer(self.seed as i64));

        let mut layout = Table::new();
        layout.insert("source".into(), point(self.layout.source));
        layout.insert("destination".into(), point(self.layout.destination));
        layout.insert("ris".into(), point(self.layout.ris));
        layout.insert("relay".into(), point(self.layout.relay));
        root.insert("layout".into(), Value::Table(layout));

        let mut pl = Table::new();
        write_model(&mut pl, self.pathloss.kind);
        pl.insert(
            "cascade".into(),
            Value::String(
                match self.cascade {
                    CascadeRule::Product => "product",
                    CascadeRule::EndToEnd => "end-to-end",
                }
                .into(),
            ),
        );
        if let Some(ris) = &self.ris_pathloss {
            let mut t = Table::new();
            write_model(&mut t, ris.kind);
            pl.insert("ris".into(), Value::Table(t));
        }
        root.insert("pathloss".into(), Value::Table(pl));

        if let Some(s) = &self.sweep {
            let mut t = Table::new();
            t.insert("variable".into(), Value::String(s.variable.as_str().into()));
            t.insert("values".into(), Value::Array(s.values.iter().copied().map(f).collect()));
            if let Some(n) = s.trials {
                t.insert("trials".into(), Value::Integer(n as i64));
            }
            t.insert("min_errors".into(), Value::Integer(s.min_errors as i64));
            t.insert("symbols_per_draw".into(), Value::Integer(i64::from(s.symbols_per_draw)));
            root.insert("sweep".into(), Value::Table(t));
        }
        if let Some(g) = &self.grid {
            let mut t = Table::new();
            t.insert("ris_y".into(), Value::Array(g.ris_y.iter().copied().map(f).collect()));
            t.insert("relay_y".into(), Value::Array(g.relay_y.iter().copied().map(f).collect()));
            t.insert("trials".into(), Value::Integer(g.trials as i64));
            root.insert("grid".into(), Value::Table(t));
        }
        toml::to_string(&root).expect("config tables always serialize")
    }
}

fn write_model(t: &mut Table, kind: PathLossKind) {
    let (model, custom) = match kind {
        PathLossKind::Umi => ("umi", None),
        PathLossKind::UmiStreetCanyon => ("umi-street-canyon", None),
        PathLossKind::Custom(c) => ("custom", Some(c)),
    };
    t.insert("model".into(), Value::String(model.into()));
    if let Some(c) = custom {
        t.insert("intercept_db".into(), Value::Float(c.intercept_db));
        t.insert("distance_slope_db".into(), Value::Float(c.distance_slope_db));
        t.insert("frequency_slope_db".into(), Value::Float(c.frequency_slope_db));
    }
}

const ROOT_KEYS: &[&str] = &[
    "scheme", "N", "K_dB", "frequency", "P1", "P2", "P3", "P_tot", "N0", "N0_dBm", "M",
    "relay_mode", "objective", "seed", "layout", "pathloss", "sweep", "grid",
];
const LAYOUT_KEYS: &[&str] = &["source", "destination", "ris", "relay", "node"];
const PATHLOSS_KEYS: &[&str] = &[
    "model", "cascade", "intercept_db", "distance_slope_db", "frequency_slope_db", "ris",
];
const MODEL_KEYS: &[&str] = &["model", "intercept_db", "distance_slope_db", "frequency_slope_db"];
const SWEEP_KEYS: &[&str] = &[
    "variable", "values", "start", "stop", "step", "trials", "min_errors", "symbols_per_draw",
];
const GRID_KEYS: &[&str] = &["ris_y", "relay_y", "trials"];

struct Reader<'a> {
    text: &'a str,
    diags: Vec<Diagnostic>,
}

impl<'a> Reader<'a> {
    fn line_of(&self, key: &str) -> Option<usize> {
        let bare = key.rsplit('.').next().unwrap_or(key);
        self.text.lines().position(|l| {
            let t = l.trim_start();
            t.strip_prefix(bare)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
    }

    fn push(&mut self, kind: DiagnosticKind, field: &str, message: impl Into<String>) {
        let line = self.line_of(field);
        self.diags.push(Diagnostic {
            kind,
            field: field.to_string(),
            line,
            message: message.into(),
        });
    }

    fn parse_err(&mut self, field: &str, message: impl Into<String>) {
        self.push(DiagnosticKind::Parse, field, message);
    }

    fn infeasible(&mut self, field: &str, message: impl Into<String>) {
        self.push(DiagnosticKind::Infeasible, field, message);
    }

    fn unknown_keys(&mut self, table: &Table, allowed: &[&str], prefix: &str) {
        for key in table.keys() {
            if !allowed.contains(&key.as_str()) {
                let field = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{prefix}.{key}")
                };
                self.parse_err(&field, "unknown field");
            }
        }
    }

    fn number(&mut self, table: &Table, key: &str, field: &str) -> Option<f64> {
        match table.get(key)? {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            other => {
                self.parse_err(field, format!("expected a number, found {}", other.type_str()));
                None
            }
        }
    }

    /// Number with an optional unit suffix, e.g. `"10dB"` or `"2.4GHz"`.
    fn quantity(&mut self, table: &Table, key: &str, field: &str, units: &[(&str, f64)]) -> Option<f64> {
        match table.get(key)? {
            Value::String(s) => {
                let t = s.trim();
                for (suffix, scale) in units {
                    if let Some(num) = t.strip_suffix(suffix) {
                        if let Ok(v) = num.trim().parse::<f64>() {
                            return Some(v * scale);
                        }
                    }
                }
                match t.parse::<f64>() {
                    Ok(v) => Some(v),
                    Err(_) => {
                        self.parse_err(field, format!("cannot read quantity {s:?}"));
                        None
                    }
                }
            }
            _ => self.number(table, key, field),
        }
    }

    fn integer(&mut self, table: &Table, key: &str, field: &str) -> Option<i64> {
        match table.get(key)? {
            Value::Integer(i) => Some(*i),
            other => {
                self.parse_err(field, format!("expected an integer, found {}", other.type_str()));
                None
            }
        }
    }

    fn string(&mut self, table: &Table, key: &str, field: &str) -> Option<String> {
        match table.get(key)? {
            Value::String(s) => Some(s.clone()),
            other => {
                self.parse_err(field, format!("expected a string, found {}", other.type_str()));
                None
            }
        }
    }

    fn numbers(&mut self, table: &Table, key: &str, field: &str) -> Option<Vec<f64>> {
        match table.get(key)? {
            Value::Array(items) => {
                let mut out = Vec::with_capacity(items.len());
                for v in items {
                    match v {
                        Value::Float(x) => out.push(*x),
                        Value::Integer(i) => out.push(*i as f64),
                        other => {
                            self.parse_err(field, format!("expected numbers, found {}", other.type_str()));
                            return None;
                        }
                    }
                }
                Some(out)
            }
            other => {
                self.parse_err(field, format!("expected an array, found {}", other.type_str()));
                None
            }
        }
    }

    fn point(&mut self, table: &Table, key: &str, field: &str) -> Option<Point> {
        let v = self.numbers(table, key, field)?;
        if v.len() != 2 {
            self.parse_err(field, format!("expected [x, y], found {} values", v.len()));
            return None;
        }
        Some(Point::new(v[0], v[1]))
    }

    fn section<'t>(&mut self, root: &'t Table, key: &str) -> Option<&'t Table> {
        match root.get(key)? {
            Value::Table(t) => Some(t),
            other => {
                self.parse_err(key, format!("expected a section, found {}", other.type_str()));
                None
            }
        }
    }
}

/// Parses and validates a config. On failure every violation found is
/// returned, not only the first.
pub fn validate_config(text: &str) -> Result<ScenarioConfig, Diagnostics> {
    let root: Table = match text.parse::<Table>() {
        Ok(t) => t,
        Err(e) => {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
            return Err(Diagnostics(vec![Diagnostic {
                kind: DiagnosticKind::Parse,
                field: "<file>".into(),
                line,
                message: e.message().to_string(),
            }]));
        }
    };
    let mut r = Reader {
        text,
        diags: Vec::new(),
    };
    r.unknown_keys(&root, ROOT_KEYS, "");

    let scheme = match r.string(&root, "scheme", "scheme") {
        Some(s) => match s.parse::<Scheme>() {
            Ok(v) => Some(v),
            Err(msg) => {
                r.parse_err("scheme", msg);
                None
            }
        },
        None => {
            if !root.contains_key("scheme") {
                r.parse_err("scheme", "missing required field");
            }
            None
        }
    };

    let elements = match r.integer(&root, "N", "N") {
        Some(n) if n >= 0 => Some(n as usize),
        Some(n) => {
            r.infeasible("N", format!("element count {n} is negative"));
            None
        }
        None => {
            if !root.contains_key("N") {
                if scheme == Some(Scheme::RelayOnly) {
                    Some(0)
                } else {
                    r.parse_err("N", "missing required field");
                    None
                }
            } else {
                None
            }
        }
    };

    let k_db = r.quantity(&root, "K_dB", "K_dB", &[("dB", 1.0), ("db", 1.0)]);
    if k_db.is_none() && !root.contains_key("K_dB") {
        r.parse_err("K_dB", "missing required field");
    }
    if let Some(k) = k_db {
        if !k.is_finite() && k != f64::INFINITY {
            r.infeasible("K_dB", "must be finite or +inf");
        }
    }

    // Path loss
    let pl = r.section(&root, "pathloss");
    let mut model_kind = Some(PathLossKind::Umi);
    let mut cascade = CascadeRule::Product;
    let mut ris_kind: Option<Option<PathLossKind>> = None;
    if let Some(pl) = pl {
        r.unknown_keys(pl, PATHLOSS_KEYS, "pathloss");
        model_kind = read_model_kind(&mut r, pl, "pathloss");
        if let Some(t) = r.section(pl, "ris") {
            r.unknown_keys(t, MODEL_KEYS, "pathloss.ris");
            ris_kind = Some(read_model_kind(&mut r, t, "pathloss.ris"));
        }
        cascade = match r.string(pl, "cascade", "pathloss.cascade").as_deref() {
            None | Some("product") => CascadeRule::Product,
            Some("end-to-end") => CascadeRule::EndToEnd,
            Some(other) => {
                r.parse_err(
                    "pathloss.cascade",
                    format!("unknown cascade rule {other:?} (expected product or end-to-end)"),
                );
                CascadeRule::Product
            }
        };
    }

    let frequency = r.quantity(
        &root,
        "frequency",
        "frequency",
        &[("GHz", 1e9), ("MHz", 1e6), ("Hz", 1.0)],
    );
    let carrier_hz = match (frequency, model_kind) {
        (Some(f), _) => Some(f),
        (None, _) if root.contains_key("frequency") => None,
        (None, Some(PathLossKind::Umi)) => Some(2.4e9),
        (None, Some(PathLossKind::UmiStreetCanyon)) => Some(28e9),
        (None, Some(PathLossKind::Custom(_))) => {
            r.parse_err("frequency", "missing required field for a custom path-loss model");
            None
        }
        (None, None) => None,
    };
    let pathloss = match (carrier_hz, model_kind) {
        (Some(carrier_hz), Some(kind)) => {
            let m = PathLossModel { carrier_hz, kind };
            if let Err(e) = m.check() {
                r.infeasible("pathloss", e.to_string());
            }
            Some(m)
        }
        _ => None,
    };
    let ris_pathloss = match (carrier_hz, ris_kind) {
        (Some(carrier_hz), Some(Some(kind))) => {
            let m = PathLossModel { carrier_hz, kind };
            if let Err(e) = m.check() {
                r.infeasible("pathloss.ris", e.to_string());
            }
            Some(m)
        }
        _ => None,
    };

    // Layout
    let layout = match r.section(&root, "layout") {
        None => {
            if !root.contains_key("layout") {
                r.parse_err("layout", "missing required section");
            }
            None
        }
        Some(lt) => {
            r.unknown_keys(lt, LAYOUT_KEYS, "layout");
            let source = r.point(lt, "source", "layout.source");
            let destination = r.point(lt, "destination", "layout.destination");
            for (key, v) in [("source", source), ("destination", destination)] {
                if v.is_none() && !lt.contains_key(key) {
                    r.parse_err(&format!("layout.{key}"), "missing required field");
                }
            }
            let node = r.point(lt, "node", "layout.node");
            let ris = r.point(lt, "ris", "layout.ris").or(node);
            let relay = r.point(lt, "relay", "layout.relay").or(node);
            let needs_ris = scheme.is_some_and(|s| s != Scheme::RelayOnly);
            let needs_relay = scheme.is_some_and(|s| s != Scheme::RisOnly);
            if needs_ris && ris.is_none() && !lt.contains_key("ris") {
                r.parse_err("layout.ris", "missing required field");
            }
            if needs_relay && relay.is_none() && !lt.contains_key("relay") {
                r.parse_err("layout.relay", "missing required field");
            }
            match (source, destination, ris.or(relay), relay.or(ris)) {
                (Some(source), Some(destination), Some(ris), Some(relay)) => Some(NodeLayout {
                    source,
                    destination,
                    ris,
                    relay,
                }),
                _ => None,
            }
        }
    };
    if let (Some(l), Some(s)) = (layout, scheme) {
        if let Err(e) = l.validate(s) {
            r.infeasible("layout", e.to_string());
        }
    }

    // Powers
    let p1 = r.number(&root, "P1", "P1");
    let p2 = r.number(&root, "P2", "P2");
    let p3 = r.number(&root, "P3", "P3");
    let p_tot = r.number(&root, "P_tot", "P_tot");
    let explicit_given = ["P1", "P2", "P3"].iter().any(|k| root.contains_key(*k));
    let powers = if explicit_given && root.contains_key("P_tot") {
        r.parse_err(
            "P_tot",
            "ambiguous powers: give either P1/P2[/P3] or P_tot, not both",
        );
        None
    } else if root.contains_key("P_tot") {
        p_tot.map(|p_tot| Powers::Budget { p_tot })
    } else if explicit_given {
        if !root.contains_key("P1") {
            r.parse_err("P1", "missing required field");
        }
        let p2 = match (p2, scheme) {
            (Some(p), _) => Some(p),
            (None, Some(Scheme::RisOnly)) if !root.contains_key("P2") => Some(0.0),
            (None, _) => {
                if !root.contains_key("P2") {
                    r.parse_err("P2", "missing required field");
                }
                None
            }
        };
        match (p1, p2) {
            (Some(p1), Some(p2)) => Some(Powers::Explicit { p1, p2, p3 }),
            _ => None,
        }
    } else {
        r.parse_err("P1", "missing powers: give P1/P2 or P_tot");
        None
    };
    match powers {
        Some(Powers::Explicit { p1, p2, p3 }) => {
            for (name, v) in [("P1", Some(p1)), ("P2", Some(p2)), ("P3", p3)] {
                if let Some(v) = v {
                    if !(v.is_finite() && v >= 0.0) {
                        r.infeasible(name, format!("power {v} must be finite and >= 0"));
                    }
                }
            }
            if let Some(p3) = p3 {
                if scheme == Some(Scheme::Joint) && p3 != p2 {
                    r.infeasible("P3", format!("joint scheme requires P3 = P2 ({p3} != {p2})"));
                }
                if scheme.is_some_and(|s| s != Scheme::Joint) {
                    r.infeasible("P3", "P3 only exists in the joint scheme");
                }
            }
        }
        Some(Powers::Budget { p_tot }) if !(p_tot.is_finite() && p_tot > 0.0) => {
            r.infeasible("P_tot", format!("budget {p_tot} must be positive"));
        }
        Some(Powers::Budget { .. }) => {}
        None => {}
    }

    // Noise
    let noise = match (
        r.number(&root, "N0", "N0"),
        r.number(&root, "N0_dBm", "N0_dBm"),
    ) {
        (Some(_), Some(_)) => {
            r.parse_err("N0", "give either N0 or N0_dBm, not both");
            None
        }
        (Some(w), None) => {
            if !(w.is_finite() && w > 0.0) {
                r.infeasible("N0", format!("noise power {w} must be positive"));
            }
            Some(Noise::Watts(w))
        }
        (None, Some(d)) => {
            if !d.is_finite() {
                r.infeasible("N0_dBm", "must be finite");
            }
            Some(Noise::Dbm(d))
        }
        (None, None) => None,
    };

    let modulation = match r.integer(&root, "M", "M") {
        None => 2,
        Some(m) if m >= 2 && (m as u64).is_power_of_two() => m as usize,
        Some(m) => {
            r.infeasible("M", format!("modulation order {m} is not a power of two >= 2"));
            2
        }
    };
    let relay_mode = match r.string(&root, "relay_mode", "relay_mode").as_deref() {
        None | Some("ideal") => RelayMode::Ideal,
        Some("nonideal") | Some("non-ideal") => RelayMode::Nonideal,
        Some(other) => {
            r.parse_err("relay_mode", format!("unknown relay mode {other:?}"));
            RelayMode::Ideal
        }
    };
    let objective = match r.string(&root, "objective", "objective").as_deref() {
        None | Some("shared-p2") => Objective::SharedP2,
        Some("per-slot") => Objective::PerSlot,
        Some(other) => {
            r.parse_err("objective", format!("unknown objective {other:?}"));
            Objective::SharedP2
        }
    };
    let seed = r.integer(&root, "seed", "seed").map_or(1, |s| s as u64);

    let sweep = r.section(&root, "sweep").and_then(|t| read_sweep(&mut r, t));
    let grid = r.section(&root, "grid").and_then(|t| read_grid(&mut r, t));

    if !r.diags.is_empty() {
        return Err(Diagnostics(r.diags));
    }
    match (scheme, layout, elements, k_db, pathloss, powers) {
        (Some(scheme), Some(layout), Some(elements), Some(k_db), Some(pathloss), Some(powers)) => {
            Ok(ScenarioConfig {
                scheme,
                layout,
                elements,
                k_db,
                pathloss,
                ris_pathloss,
                cascade,
                powers,
                noise,
                modulation,
                relay_mode,
                objective,
                seed,
                sweep,
                grid,
            })
        }
        _ => Err(Diagnostics(vec![Diagnostic {
            kind: DiagnosticKind::Parse,
            field: "<file>".into(),
            line: None,
            message: "incomplete configuration".into(),
        }])),
    }
}

fn read_model_kind(r: &mut Reader<'_>, t: &Table, prefix: &str) -> Option<PathLossKind> {
    let model_field = format!("{prefix}.model");
    match r.string(t, "model", &model_field).as_deref() {
        None | Some("umi") => Some(PathLossKind::Umi),
        Some("umi-street-canyon") => Some(PathLossKind::UmiStreetCanyon),
        Some("custom") => {
            let mut coef = |key: &str| {
                let field = format!("{prefix}.{key}");
                let v = r.number(t, key, &field);
                if v.is_none() && !t.contains_key(key) {
                    r.parse_err(&field, "missing required field for a custom model");
                }
                v
            };
            let (a, b, c) = (
                coef("intercept_db"),
                coef("distance_slope_db"),
                coef("frequency_slope_db"),
            );
            Some(PathLossKind::Custom(AffineLogLoss {
                intercept_db: a?,
                distance_slope_db: b?,
                frequency_slope_db: c?,
            }))
        }
        Some(other) => {
            r.parse_err(
                &model_field,
                format!("unknown model {other:?} (expected umi, umi-street-canyon or custom)"),
            );
            None
        }
    }
}

fn read_sweep(r: &mut Reader<'_>, t: &Table) -> Option<SweepSpec> {
    r.unknown_keys(t, SWEEP_KEYS, "sweep");
    let variable = match r.string(t, "variable", "sweep.variable") {
        Some(s) => match SweepVariable::parse(&s) {
            Some(v) => Some(v),
            None => {
                r.parse_err(
                    "sweep.variable",
                    format!("unknown sweep variable {s:?} (expected snr-db, N, ris-y or relay-y)"),
                );
                None
            }
        },
        None => {
            if !t.contains_key("variable") {
                r.parse_err("sweep.variable", "missing required field");
            }
            None
        }
    };
    let values = if t.contains_key("values") {
        r.numbers(t, "values", "sweep.values")
    } else {
        let start = r.number(t, "start", "sweep.start");
        let stop = r.number(t, "stop", "sweep.stop");
        let step = r.number(t, "step", "sweep.step");
        match (start, stop, step) {
            (Some(a), Some(b), Some(s)) if s > 0.0 && b >= a => {
                let n = ((b - a) / s + 1e-9).floor() as usize;
                Some((0..=n).map(|i| a + i as f64 * s).collect())
            }
            (Some(_), Some(_), Some(_)) => {
                r.infeasible("sweep.step", "need step > 0 and stop >= start");
                None
            }
            _ => {
                r.parse_err("sweep.values", "give values = [...] or start/stop/step");
                None
            }
        }
    };
    if let Some(v) = &values {
        if v.is_empty() {
            r.infeasible("sweep.values", "empty sweep");
        }
    }
    let mut positive = |key: &str, default: u64| -> u64 {
        let field = format!("sweep.{key}");
        match r.integer(t, key, &field) {
            None => default,
            Some(v) if v >= 1 => v as u64,
            Some(v) => {
                r.infeasible(&field, format!("{v} must be >= 1"));
                default
            }
        }
    };
    let trials = t.contains_key("trials").then(|| positive("trials", 1));
    let min_errors = positive("min_errors", SweepSpec::DEFAULT_MIN_ERRORS);
    let symbols = positive("symbols_per_draw", u64::from(SweepSpec::DEFAULT_SYMBOLS_PER_DRAW));
    Some(SweepSpec {
        variable: variable?,
        values: values?,
        trials,
        min_errors,
        symbols_per_draw: symbols.min(u64::from(u32::MAX)) as u32,
    })
}

fn read_grid(r: &mut Reader<'_>, t: &Table) -> Option<GridSpec> {
    r.unknown_keys(t, GRID_KEYS, "grid");
    let mut list = |key: &str| {
        let field = format!("grid.{key}");
        let v = r.numbers(t, key, &field);
        if v.is_none() && !t.contains_key(key) {
            r.parse_err(&field, "missing required field");
        }
        if v.as_ref().is_some_and(Vec::is_empty) {
            r.infeasible(&field, "empty grid axis");
        }
        v
    };
    let ris_y = list("ris_y");
    let relay_y = list("relay_y");
    let trials = match r.integer(t, "trials", "grid.trials") {
        None => 1000,
        Some(v) if v >= 1 => v as u64,
        Some(v) => {
            r.infeasible("grid.trials", format!("{v} must be >= 1"));
            1000
        }
    };
    Some(GridSpec {
        ris_y: ris_y?,
        relay_y: relay_y?,
        trials,
    })
}
