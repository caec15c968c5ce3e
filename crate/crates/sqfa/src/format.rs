//! JSON interchange format for every model kind.
//!
//! A document is an object whose `model` field is one of `dfa`, `mo1gqfa`, `cl1qfa`,
//! `1qfac`, `1qcfa`. Complex numbers are `[re, im]` pairs and matrices are row-major
//! nested arrays. Every per-symbol, per-outcome or per-state list is in declaration
//! order of the corresponding alphabet or state range. Floats are written with the
//! shortest representation that reads back to the same bits.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sqfa_core::{
    Alphabet, CMatrix, ClQfa, Complex, Dfa, Model, ModelError, ModelKind, MoGqfa, QcfaAut,
    QfacAut, Violation,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("at {path}: {message}")]
    Structure { path: String, message: String },
    #[error("unknown model tag {0:?}")]
    UnknownModel(String),
    #[error("{0}")]
    Model(ModelError),
    #[error("{}", describe_violations(.0))]
    Invalid(Vec<Violation>),
}

fn describe_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl FormatError {
    /// Numerical invariant failure (as opposed to a malformed document).
    pub fn is_invariant(&self) -> bool {
        matches!(self, FormatError::Invalid(_))
    }
}

impl From<ModelError> for FormatError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Invariant(v) => FormatError::Invalid(v),
            other => FormatError::Model(other),
        }
    }
}

type Mat = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfaDoc {
    alphabet: Vec<String>,
    initial: usize,
    accepting: Vec<usize>,
    /// `transitions[state][symbol]`
    transitions: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ControlDoc {
    initial: usize,
    accepting: Vec<usize>,
    /// `transitions[state][outcome]`
    transitions: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoDoc {
    alphabet: Vec<String>,
    dim: usize,
    rho0: Mat,
    /// `channels[symbol]` lists the operation elements.
    channels: Vec<Vec<Mat>>,
    p_acc: Mat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClDoc {
    alphabet: Vec<String>,
    outcomes: Vec<String>,
    q_dim: usize,
    q_init: usize,
    unitaries: Vec<Mat>,
    measurement: Vec<Mat>,
    control: ControlDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QfacDoc {
    alphabet: Vec<String>,
    q_dim: usize,
    c_states: usize,
    q_init: usize,
    c_init: usize,
    /// `unitaries[state][symbol]`
    unitaries: Vec<Vec<Mat>>,
    transitions: Vec<Vec<usize>>,
    accept_projectors: Vec<Mat>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QcfaDoc {
    alphabet: Vec<String>,
    outcomes: Vec<String>,
    q_dim: usize,
    c_states: usize,
    q_init: usize,
    c_init: usize,
    /// `measurements[state][symbol][outcome]`
    measurements: Vec<Vec<Vec<Mat>>>,
    /// `transitions[state][symbol][outcome]`
    transitions: Vec<Vec<Vec<usize>>>,
    accepting: Vec<usize>,
}

#[derive(Serialize)]
struct Tagged<'a, T> {
    model: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

fn structure(path: &str, message: impl Into<String>) -> FormatError {
    FormatError::Structure {
        path: path.to_string(),
        message: message.into(),
    }
}

fn to_matrix(m: &Mat, path: &str) -> Result<CMatrix, FormatError> {
    let rows = m
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex::new(re, im)).collect())
        .collect();
    CMatrix::from_rows(rows).map_err(|e| structure(path, e.to_string()))
}

fn from_matrix(m: &CMatrix) -> Mat {
    m.row_slices()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn to_matrices(ms: &[Mat], path: &str) -> Result<Vec<CMatrix>, FormatError> {
    ms.iter()
        .enumerate()
        .map(|(i, m)| to_matrix(m, &format!("{path}[{i}]")))
        .collect()
}

fn expect_dim(m: &CMatrix, n: usize, path: &str) -> Result<(), FormatError> {
    if m.shape() == (n, n) {
        Ok(())
    } else {
        Err(structure(
            path,
            format!("expected {n}x{n} matrix, got {}x{}", m.rows(), m.cols()),
        ))
    }
}

fn body<T: DeserializeOwned>(value: serde_json::Value) -> Result<T, FormatError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        structure(&path, e.into_inner().to_string())
    })
}

/// Parses a document without checking numerical invariants.
pub fn parse_unvalidated(text: &str) -> Result<Model, FormatError> {
    let mut value: serde_json::Value = serde_json::from_str(text)?;
    let tag = value
        .as_object_mut()
        .ok_or_else(|| structure(".", "document must be an object"))?
        .remove("model")
        .ok_or_else(|| structure("model", "missing model tag"))?;
    let tag = tag
        .as_str()
        .ok_or_else(|| structure("model", "model tag must be a string"))?;
    let kind = ModelKind::from_tag(tag).ok_or_else(|| FormatError::UnknownModel(tag.into()))?;
    Ok(match kind {
        ModelKind::Dfa => Model::Dfa(dfa_from_doc(body(value)?)?),
        ModelKind::Mo1gqfa => Model::Mo(mo_from_doc(body(value)?)?),
        ModelKind::Cl1qfa => Model::Cl(cl_from_doc(body(value)?)?),
        ModelKind::Qfac => Model::Qfac(qfac_from_doc(body(value)?)?),
        ModelKind::Qcfa => Model::Qcfa(qcfa_from_doc(body(value)?)?),
    })
}

/// Parses a document and requires every numerical invariant to hold.
pub fn parse_automaton(text: &str) -> Result<Model, FormatError> {
    let model = parse_unvalidated(text)?;
    model.check()?;
    Ok(model)
}

/// Pretty-printed JSON with a trailing newline; field order is fixed.
pub fn emit_automaton(model: &Model) -> String {
    let model_tag = model.kind().tag();
    let mut out = match model {
        Model::Dfa(d) => tagged(model_tag, &dfa_to_doc(d)),
        Model::Mo(m) => tagged(model_tag, &mo_to_doc(m)),
        Model::Cl(m) => tagged(model_tag, &cl_to_doc(m)),
        Model::Qfac(m) => tagged(model_tag, &qfac_to_doc(m)),
        Model::Qcfa(m) => tagged(model_tag, &qcfa_to_doc(m)),
    };
    out.push('\n');
    out
}

fn tagged<T: Serialize>(model: &'static str, body: &T) -> String {
    let value = serde_json::to_value(Tagged { model, body }).expect("documents always serialize");
    let mut out = String::new();
    render(&value, 0, &mut out);
    out
}

/// An array printed on one line: scalars, or arrays of scalars such as `[re, im]` pairs.
fn is_leaf_array(items: &[Value]) -> bool {
    items.iter().all(|v| match v {
        Value::Array(inner) => inner.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    })
}

fn inline(value: &Value) -> String {
    match value {
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        scalar => scalar.to_string(),
    }
}

fn render(value: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if is_leaf_array(items) => {
            out.push_str(&inline(value));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                render(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn dfa_from_doc(doc: DfaDoc) -> Result<Dfa, FormatError> {
    Ok(Dfa::new(
        Alphabet::new(doc.alphabet)?,
        doc.initial,
        &doc.accepting,
        doc.transitions,
    )?)
}

fn dfa_to_doc(d: &Dfa) -> DfaDoc {
    DfaDoc {
        alphabet: d.alphabet().symbols().to_vec(),
        initial: d.initial(),
        accepting: d.accepting_states().collect(),
        transitions: d.transition_rows(),
    }
}

fn mo_from_doc(doc: MoDoc) -> Result<MoGqfa, FormatError> {
    let rho0 = to_matrix(&doc.rho0, "rho0")?;
    expect_dim(&rho0, doc.dim, "rho0")?;
    let channels = doc
        .channels
        .iter()
        .enumerate()
        .map(|(a, elems)| {
            let path = format!("channels[{a}]");
            let ms = to_matrices(elems, &path)?;
            for (k, m) in ms.iter().enumerate() {
                expect_dim(m, doc.dim, &format!("{path}[{k}]"))?;
            }
            Ok(ms)
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let p_acc = to_matrix(&doc.p_acc, "p_acc")?;
    Ok(MoGqfa::new(Alphabet::new(doc.alphabet)?, rho0, channels, p_acc)?)
}

fn mo_to_doc(m: &MoGqfa) -> MoDoc {
    MoDoc {
        alphabet: m.alphabet().symbols().to_vec(),
        dim: m.dim(),
        rho0: from_matrix(m.rho0()),
        channels: m
            .channels()
            .iter()
            .map(|c| c.iter().map(from_matrix).collect())
            .collect(),
        p_acc: from_matrix(m.p_acc()),
    }
}

fn cl_from_doc(doc: ClDoc) -> Result<ClQfa, FormatError> {
    let unitaries = to_matrices(&doc.unitaries, "unitaries")?;
    let measurement = to_matrices(&doc.measurement, "measurement")?;
    for (i, u) in unitaries.iter().enumerate() {
        expect_dim(u, doc.q_dim, &format!("unitaries[{i}]"))?;
    }
    for (i, p) in measurement.iter().enumerate() {
        expect_dim(p, doc.q_dim, &format!("measurement[{i}]"))?;
    }
    let control = Dfa::new(
        Alphabet::new(doc.outcomes)?,
        doc.control.initial,
        &doc.control.accepting,
        doc.control.transitions,
    )?;
    Ok(ClQfa::new(
        Alphabet::new(doc.alphabet)?,
        doc.q_init,
        unitaries,
        measurement,
        control,
    )?)
}

fn cl_to_doc(m: &ClQfa) -> ClDoc {
    ClDoc {
        alphabet: m.alphabet().symbols().to_vec(),
        outcomes: m.outcomes().symbols().to_vec(),
        q_dim: m.q_dim(),
        q_init: m.q_init(),
        unitaries: m.unitaries().iter().map(from_matrix).collect(),
        measurement: m.measurement().iter().map(from_matrix).collect(),
        control: ControlDoc {
            initial: m.control().initial(),
            accepting: m.control().accepting_states().collect(),
            transitions: m.control().transition_rows(),
        },
    }
}

fn qfac_from_doc(doc: QfacDoc) -> Result<QfacAut, FormatError> {
    if doc.unitaries.len() != doc.c_states {
        return Err(structure(
            "unitaries",
            format!("expected {} classical states, got {}", doc.c_states, doc.unitaries.len()),
        ));
    }
    let unitaries = doc
        .unitaries
        .iter()
        .enumerate()
        .map(|(s, row)| {
            let path = format!("unitaries[{s}]");
            let ms = to_matrices(row, &path)?;
            for (a, u) in ms.iter().enumerate() {
                expect_dim(u, doc.q_dim, &format!("{path}[{a}]"))?;
            }
            Ok(ms)
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let projs = to_matrices(&doc.accept_projectors, "accept_projectors")?;
    for (s, p) in projs.iter().enumerate() {
        expect_dim(p, doc.q_dim, &format!("accept_projectors[{s}]"))?;
    }
    Ok(QfacAut::new(
        Alphabet::new(doc.alphabet)?,
        doc.q_init,
        doc.c_init,
        unitaries,
        doc.transitions,
        projs,
    )?)
}

fn qfac_to_doc(m: &QfacAut) -> QfacDoc {
    QfacDoc {
        alphabet: m.alphabet().symbols().to_vec(),
        q_dim: m.q_dim(),
        c_states: m.num_c_states(),
        q_init: m.q_init(),
        c_init: m.c_init(),
        unitaries: m
            .unitaries()
            .iter()
            .map(|row| row.iter().map(from_matrix).collect())
            .collect(),
        transitions: m.transitions().to_vec(),
        accept_projectors: m.accept_projectors().iter().map(from_matrix).collect(),
    }
}

fn qcfa_from_doc(doc: QcfaDoc) -> Result<QcfaAut, FormatError> {
    if doc.measurements.len() != doc.c_states {
        return Err(structure(
            "measurements",
            format!(
                "expected {} classical states, got {}",
                doc.c_states,
                doc.measurements.len()
            ),
        ));
    }
    let mut measurements = Vec::with_capacity(doc.c_states);
    for (s, row) in doc.measurements.iter().enumerate() {
        let mut per_symbol = Vec::with_capacity(row.len());
        for (a, ops) in row.iter().enumerate() {
            let path = format!("measurements[{s}][{a}]");
            let ms = to_matrices(ops, &path)?;
            for (c, m) in ms.iter().enumerate() {
                expect_dim(m, doc.q_dim, &format!("{path}[{c}]"))?;
            }
            per_symbol.push(ms);
        }
        measurements.push(per_symbol);
    }
    Ok(QcfaAut::new(
        Alphabet::new(doc.alphabet)?,
        Alphabet::new(doc.outcomes)?,
        doc.q_init,
        doc.c_init,
        measurements,
        doc.transitions,
        &doc.accepting,
    )?)
}

fn qcfa_to_doc(m: &QcfaAut) -> QcfaDoc {
    QcfaDoc {
        alphabet: m.alphabet().symbols().to_vec(),
        outcomes: m.outcomes().symbols().to_vec(),
        q_dim: m.q_dim(),
        c_states: m.num_c_states(),
        q_init: m.q_init(),
        c_init: m.c_init(),
        measurements: m
            .measurements()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|ops| ops.iter().map(from_matrix).collect())
                    .collect()
            })
            .collect(),
        transitions: m.transitions().to_vec(),
        accepting: m.accepting_states().collect(),
    }
}
