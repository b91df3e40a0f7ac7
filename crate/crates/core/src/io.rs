//! JSON measure and partition files, canonical JSON output and trace CSV.
//!
//! Floats are written with 17 significant digits in the style of C's `%.17g`,
//! so every value re-parses to the same `f64` and re-serializes to the same
//! bytes. `±∞` is written as the strings `"inf"` / `"-inf"`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::RefinementTrace;
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::measure::{Cell, Density, Interval, ProbabilityMeasure, ReferenceMeasure};
use crate::partition::Partition;

/// `x` with 17 significant digits, trailing zeros removed, like `%.17g`.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    if !(-4..17).contains(&exp) {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let digits = (16 - exp) as usize;
        trim_fraction(&format!("{x:.digits$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn format_extended(v: ExtendedReal) -> String {
    match v {
        ExtendedReal::Finite(x) => format_f64(x),
        ExtendedReal::PosInf => "inf".into(),
        ExtendedReal::NegInf => "-inf".into(),
    }
}

/// JSON value with insertion-ordered objects and `%.17g` floats.
#[derive(Clone, Debug, PartialEq)]
pub enum JsonValue {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Array(Vec<JsonValue>),
    Object(Vec<(String, JsonValue)>),
}

impl From<f64> for JsonValue {
    fn from(x: f64) -> Self {
        if x.is_finite() {
            JsonValue::Num(x)
        } else {
            JsonValue::Str(format_f64(x))
        }
    }
}

impl From<ExtendedReal> for JsonValue {
    fn from(v: ExtendedReal) -> Self {
        match v {
            ExtendedReal::Finite(x) => x.into(),
            other => JsonValue::Str(format_extended(other)),
        }
    }
}

impl From<bool> for JsonValue {
    fn from(b: bool) -> Self {
        JsonValue::Bool(b)
    }
}

impl From<usize> for JsonValue {
    fn from(n: usize) -> Self {
        JsonValue::Int(n as i64)
    }
}

impl From<u64> for JsonValue {
    fn from(n: u64) -> Self {
        JsonValue::Int(n as i64)
    }
}

impl From<&str> for JsonValue {
    fn from(s: &str) -> Self {
        JsonValue::Str(s.to_string())
    }
}

impl From<String> for JsonValue {
    fn from(s: String) -> Self {
        JsonValue::Str(s)
    }
}

impl<T: Into<JsonValue>> From<Option<T>> for JsonValue {
    fn from(v: Option<T>) -> Self {
        v.map_or(JsonValue::Null, Into::into)
    }
}

impl From<serde_json::Value> for JsonValue {
    fn from(v: serde_json::Value) -> Self {
        use serde_json::Value;
        match v {
            Value::Null => JsonValue::Null,
            Value::Bool(b) => JsonValue::Bool(b),
            Value::Number(n) => match n.as_i64() {
                Some(i) => JsonValue::Int(i),
                None => JsonValue::Num(n.as_f64().unwrap_or(f64::NAN)),
            },
            Value::String(s) => JsonValue::Str(s),
            Value::Array(a) => JsonValue::Array(a.into_iter().map(Into::into).collect()),
            Value::Object(o) => JsonValue::Object(o.into_iter().map(|(k, v)| (k, v.into())).collect()),
        }
    }
}

impl JsonValue {
    pub fn object() -> Self {
        JsonValue::Object(Vec::new())
    }

    /// Appends a field; no-op on non-objects.
    pub fn with(mut self, key: &str, value: impl Into<JsonValue>) -> Self {
        if let JsonValue::Object(fields) = &mut self {
            fields.push((key.to_string(), value.into()));
        }
        self
    }

    /// Appends the fields of another object.
    pub fn merge(mut self, other: JsonValue) -> Self {
        if let (JsonValue::Object(fields), JsonValue::Object(more)) = (&mut self, other) {
            fields.extend(more);
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&JsonValue> {
        match self {
            JsonValue::Object(fields) => fields.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        self.write_into(&mut out);
        out
    }

    fn write_into(&self, out: &mut String) {
        match self {
            JsonValue::Null => out.push_str("null"),
            JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            JsonValue::Int(i) => {
                let _ = write!(out, "{i}");
            }
            JsonValue::Num(x) if x.is_finite() => out.push_str(&format_f64(*x)),
            JsonValue::Num(x) => write_str(out, &format_f64(*x)),
            JsonValue::Str(s) => write_str(out, s),
            JsonValue::Array(items) => {
                out.push('[');
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    v.write_into(out);
                }
                out.push(']');
            }
            JsonValue::Object(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_str(out, k);
                    out.push(':');
                    v.write_into(out);
                }
                out.push('}');
            }
        }
    }
}

fn write_str(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).unwrap_or_else(|_| "\"\"".into()));
}

pub fn parse_json(text: &str) -> Result<JsonValue> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(v.into())
}

/// Parses and re-serializes; canonical output is a fixed point.
pub fn canonicalize_json(text: &str) -> Result<String> {
    Ok(parse_json(text)?.to_json())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub label: String,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub interval: [f64; 2],
    pub coeffs: Vec<f64>,
}

/// On-disk description of a probability measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MeasureSpec {
    Discrete {
        atoms: Vec<AtomSpec>,
    },
    Density {
        support: Vec<[f64; 2]>,
        pieces: Vec<PieceSpec>,
    },
    /// `uniform` (support only), `beta` (integer shapes, support defaults to
    /// `[0, 1]`) or `gaussian` (mean and sd, truncated to a single support
    /// interval).
    Named {
        name: String,
        #[serde(default)]
        params: Vec<f64>,
        #[serde(default)]
        support: Option<Vec<[f64; 2]>>,
    },
}

fn intervals(spec: &[[f64; 2]]) -> Vec<Interval> {
    spec.iter().map(|[a, b]| Interval::new(*a, *b)).collect()
}

fn single_support(support: &Option<Vec<[f64; 2]>>, name: &str) -> Result<Option<Interval>> {
    match support.as_deref() {
        None => Ok(None),
        Some([iv]) => Ok(Some(Interval::new(iv[0], iv[1]))),
        Some(_) => Err(Error::Parse(format!("named measure {name:?} takes a single support interval"))),
    }
}

fn positive_integer(x: f64, what: &str) -> Result<u32> {
    if x.fract() == 0.0 && (1.0..=1000.0).contains(&x) {
        Ok(x as u32)
    } else {
        Err(Error::Parse(format!("{what} must be a positive integer, got {x}")))
    }
}

impl MeasureSpec {
    pub fn build(&self) -> Result<ProbabilityMeasure> {
        match self {
            MeasureSpec::Discrete { atoms } => {
                let pairs: Vec<(&str, f64)> = atoms.iter().map(|a| (a.label.as_str(), a.mass)).collect();
                ProbabilityMeasure::discrete(&pairs)
            }
            MeasureSpec::Density { support, pieces } => ProbabilityMeasure::piecewise(
                intervals(support),
                pieces
                    .iter()
                    .map(|p| (Interval::new(p.interval[0], p.interval[1]), p.coeffs.clone()))
                    .collect(),
            ),
            MeasureSpec::Named { name, params, support } => match name.to_ascii_lowercase().as_str() {
                "uniform" => {
                    let iv = match (single_support(support, name)?, params.as_slice()) {
                        (Some(iv), []) => iv,
                        (None, [a, b]) => Interval::new(*a, *b),
                        (None, []) => Interval::new(0.0, 1.0),
                        _ => return Err(Error::Parse("uniform takes either a support or two params".into())),
                    };
                    ProbabilityMeasure::uniform(iv.lo, iv.hi)
                }
                "beta" => {
                    let [a, b] = params.as_slice() else {
                        return Err(Error::Parse("beta takes two shape params".into()));
                    };
                    let iv = single_support(support, name)?.unwrap_or(Interval::new(0.0, 1.0));
                    ProbabilityMeasure::beta_on(positive_integer(*a, "beta shape")?, positive_integer(*b, "beta shape")?, iv)
                }
                "gaussian" | "normal" | "truncated-gaussian" => {
                    let [mean, sd] = params.as_slice() else {
                        return Err(Error::Parse("gaussian takes params [mean, sd]".into()));
                    };
                    let iv = single_support(support, name)?
                        .ok_or_else(|| Error::Parse("gaussian needs a bounded support".into()))?;
                    ProbabilityMeasure::truncated_gaussian(*mean, *sd, iv)
                }
                other => Err(Error::Parse(format!("unknown named measure {other:?}"))),
            },
        }
    }

    /// Explicit (`discrete` or `density`) description of a measure.
    pub fn from_measure(m: &ProbabilityMeasure) -> Self {
        match (m.base(), m.density()) {
            (ReferenceMeasure::Counting { atoms }, Density::Atoms(masses)) => MeasureSpec::Discrete {
                atoms: atoms
                    .iter()
                    .zip(masses)
                    .map(|(label, &mass)| AtomSpec {
                        label: label.clone(),
                        mass,
                    })
                    .collect(),
            },
            (base, density) => MeasureSpec::Density {
                support: base.intervals().unwrap_or_default().iter().map(|iv| [iv.lo, iv.hi]).collect(),
                pieces: match density {
                    Density::Pieces(pieces) => pieces
                        .iter()
                        .map(|p| PieceSpec {
                            interval: [p.interval.lo, p.interval.hi],
                            coeffs: p.poly().coeffs().to_vec(),
                        })
                        .collect(),
                    Density::Atoms(_) => Vec::new(),
                },
            },
        }
    }
}

pub fn parse_measure(text: &str) -> Result<ProbabilityMeasure> {
    let spec: MeasureSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.build()
}

pub fn load_measure(path: impl AsRef<Path>) -> Result<ProbabilityMeasure> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_measure(&text)
}

pub fn measure_to_json(m: &ProbabilityMeasure) -> JsonValue {
    serde_json::to_value(MeasureSpec::from_measure(m)).map_or(JsonValue::Null, Into::into)
}

/// On-disk description of a partition: interior breakpoints of a continuous
/// support, groups of atom labels, or explicit interval-union cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartitionSpec {
    Breakpoints { breakpoints: Vec<f64> },
    Groups { groups: Vec<Vec<String>> },
    Cells { cells: Vec<Vec<[f64; 2]>> },
}

impl PartitionSpec {
    pub fn build(&self, base: &ReferenceMeasure) -> Result<Partition> {
        match self {
            PartitionSpec::Breakpoints { breakpoints } => Partition::from_breakpoints(base, breakpoints),
            PartitionSpec::Groups { groups } => Partition::from_groups(base, groups.clone()),
            PartitionSpec::Cells { cells } => Partition::new(
                base.clone(),
                cells.iter().map(|c| Cell::Intervals(intervals(c))).collect(),
            ),
        }
    }

    pub fn from_partition(p: &Partition) -> Self {
        match p.base() {
            ReferenceMeasure::Counting { .. } => PartitionSpec::Groups {
                groups: p
                    .cells()
                    .iter()
                    .map(|c| match c {
                        Cell::Atoms(ls) => ls.clone(),
                        Cell::Intervals(_) => Vec::new(),
                    })
                    .collect(),
            },
            ReferenceMeasure::Lebesgue { .. } => PartitionSpec::Cells {
                cells: p
                    .cells()
                    .iter()
                    .map(|c| match c {
                        Cell::Intervals(ivs) => ivs.iter().map(|iv| [iv.lo, iv.hi]).collect(),
                        Cell::Atoms(_) => Vec::new(),
                    })
                    .collect(),
            },
        }
    }
}

pub fn parse_partition(text: &str, base: &ReferenceMeasure) -> Result<Partition> {
    let spec: PartitionSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.build(base)
}

pub fn partition_to_json(p: &Partition) -> JsonValue {
    serde_json::to_value(PartitionSpec::from_partition(p)).map_or(JsonValue::Null, Into::into)
}

pub fn cell_to_json(c: &Cell) -> JsonValue {
    match c {
        Cell::Atoms(ls) => JsonValue::Array(ls.iter().map(|l| JsonValue::Str(l.clone())).collect()),
        Cell::Intervals(ivs) => JsonValue::Array(
            ivs.iter()
                .map(|iv| JsonValue::Array(vec![iv.lo.into(), iv.hi.into()]))
                .collect(),
        ),
    }
}

pub const TRACE_HEADER: &str = "step,cells,partition_value,oracle_value,gap";

pub fn trace_csv(trace: &RefinementTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.steps.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for s in &trace.steps {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.step,
            s.cells,
            format_extended(s.partition_value),
            format_extended(s.oracle_value),
            format_f64(s.gap)
        );
    }
    out
}

pub fn write_trace_csv(trace: &RefinementTrace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, trace_csv(trace)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
