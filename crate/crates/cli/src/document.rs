//! JSON documents for matrices and tensors.
//!
//! A matrix document is `{"field", "rows", "cols", "data"}` with `data` a
//! list of rows. Real entries are numbers, complex entries `[re, im]`.
//! A tensor document is `{"field", "dim", "slots", "data"}` with `slots` a
//! list of `"up"`/`"down"` and `data` the flat row-major component list.

use indefinite_linalg::duality::SpaceHandle;
use indefinite_linalg::tensor::{Tensor, Variance};
use indefinite_linalg::{DenseMatrix, Field, Scalar};
use serde_json::{Map, Number, Value};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum DocumentError {
    Parse { line: usize, column: usize, message: String },
    Schema(String),
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocumentError::Parse { line, column, message } => {
                write!(f, "malformed JSON at line {line}, column {column}: {message}")
            }
            DocumentError::Schema(msg) => write!(f, "schema violation: {msg}"),
        }
    }
}

impl std::error::Error for DocumentError {}

impl DocumentError {
    pub fn kind(&self) -> &'static str {
        match self {
            DocumentError::Parse { .. } => "ParseError",
            DocumentError::Schema(_) => "SchemaError",
        }
    }
}

type DocResult<T> = Result<T, DocumentError>;

fn schema<T>(msg: impl Into<String>) -> DocResult<T> {
    Err(DocumentError::Schema(msg.into()))
}

pub fn parse_json(bytes: &[u8]) -> DocResult<Value> {
    serde_json::from_slice(bytes).map_err(|e| DocumentError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn object(v: &Value) -> DocResult<&Map<String, Value>> {
    v.as_object().map_or_else(|| schema("document must be a JSON object"), Ok)
}

fn field_of(obj: &Map<String, Value>) -> DocResult<Field> {
    match obj.get("field").and_then(Value::as_str) {
        Some("real") => Ok(Field::Real),
        Some("complex") => Ok(Field::Complex),
        Some(other) => schema(format!("unknown field {other:?}")),
        None => schema("missing string member \"field\""),
    }
}

fn positive(obj: &Map<String, Value>, key: &str) -> DocResult<usize> {
    match obj.get(key).and_then(Value::as_u64) {
        Some(n) if n > 0 => Ok(n as usize),
        _ => schema(format!("\"{key}\" must be a positive integer")),
    }
}

fn entry(v: &Value, field: Field, at: &str) -> DocResult<Scalar> {
    match (field, v) {
        (Field::Real, Value::Number(n)) => Ok(Scalar::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        (Field::Complex, Value::Array(pair)) => match pair.as_slice() {
            [Value::Number(re), Value::Number(im)] => {
                Ok(Scalar::new(re.as_f64().unwrap_or(f64::NAN), im.as_f64().unwrap_or(f64::NAN)))
            }
            _ => schema(format!("entry {at}: complex entries are [re, im] pairs of numbers")),
        },
        (Field::Real, _) => schema(format!("entry {at}: real entries must be numbers")),
        (Field::Complex, _) => schema(format!("entry {at}: complex entries must be [re, im] pairs")),
    }
}

pub fn matrix_from_value(v: &Value) -> DocResult<DenseMatrix> {
    let obj = object(v)?;
    let field = field_of(obj)?;
    let rows = positive(obj, "rows")?;
    let cols = positive(obj, "cols")?;
    let Some(data) = obj.get("data").and_then(Value::as_array) else {
        return schema("missing array member \"data\"");
    };
    if data.len() != rows {
        return schema(format!("data has {} rows, expected {rows}", data.len()));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in data.iter().enumerate() {
        let Some(row) = row.as_array() else {
            return schema(format!("row {i} is not an array"));
        };
        if row.len() != cols {
            return schema(format!("row {i} has {} entries, expected {cols}", row.len()));
        }
        for (j, x) in row.iter().enumerate() {
            entries.push(entry(x, field, &format!("({i},{j})"))?);
        }
    }
    DenseMatrix::new(rows, cols, field, entries).map_err(|e| DocumentError::Schema(e.to_string()))
}

/// Parses a matrix document from raw bytes.
pub fn parse_matrix_document(bytes: &[u8]) -> DocResult<DenseMatrix> {
    matrix_from_value(&parse_json(bytes)?)
}

pub fn tensor_from_value(v: &Value) -> DocResult<Tensor> {
    let obj = object(v)?;
    let field = field_of(obj)?;
    let dim = positive(obj, "dim")?;
    let Some(slots) = obj.get("slots").and_then(Value::as_array) else {
        return schema("missing array member \"slots\"");
    };
    let slots = slots
        .iter()
        .map(|s| match s.as_str() {
            Some("up") => Ok(Variance::Up),
            Some("down") => Ok(Variance::Down),
            _ => schema("slots must be \"up\" or \"down\""),
        })
        .collect::<DocResult<Vec<_>>>()?;
    let Some(data) = obj.get("data").and_then(Value::as_array) else {
        return schema("missing array member \"data\"");
    };
    let components = data
        .iter()
        .enumerate()
        .map(|(k, x)| entry(x, field, &k.to_string()))
        .collect::<DocResult<Vec<_>>>()?;
    let space = SpaceHandle::new("V", dim, field).map_err(|e| DocumentError::Schema(e.to_string()))?;
    Tensor::new(&space, slots, components).map_err(|e| DocumentError::Schema(e.to_string()))
}

/// Either kind of input document, told apart by the presence of `"slots"`.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Matrix(DenseMatrix),
    Tensor(Tensor),
}

pub fn parse_document(bytes: &[u8]) -> DocResult<Document> {
    let v = parse_json(bytes)?;
    if v.get("slots").is_some() {
        tensor_from_value(&v).map(Document::Tensor)
    } else {
        matrix_from_value(&v).map(Document::Matrix)
    }
}

/// Integral values below 2^53 print as integers, everything else in the
/// shortest form that round-trips.
pub fn number(x: f64) -> Value {
    if x == 0.0 {
        return Value::from(0);
    }
    if x.fract() == 0.0 && x.abs() < 9_007_199_254_740_992.0 {
        return Value::from(x as i64);
    }
    Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn scalar(z: Scalar, field: Field) -> Value {
    match field {
        Field::Real => number(z.re),
        Field::Complex => Value::Array(vec![number(z.re), number(z.im)]),
    }
}

/// `[re, im]` regardless of field.
pub fn complex(z: Scalar) -> Value {
    Value::Array(vec![number(z.re), number(z.im)])
}

pub fn matrix_to_value(m: &DenseMatrix) -> Value {
    let field = m.field();
    let data = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| scalar(m.get(i, j), field)).collect()))
        .collect();
    let mut obj = Map::new();
    obj.insert("field".into(), Value::from(field.as_str()));
    obj.insert("rows".into(), Value::from(m.rows()));
    obj.insert("cols".into(), Value::from(m.cols()));
    obj.insert("data".into(), Value::Array(data));
    Value::Object(obj)
}

pub fn tensor_to_value(t: &Tensor) -> Value {
    let field = t.space().field();
    let mut obj = Map::new();
    obj.insert("field".into(), Value::from(field.as_str()));
    obj.insert("dim".into(), Value::from(t.dim()));
    obj.insert("slots".into(), Value::Array(t.slots().iter().map(|s| Value::from(s.as_str())).collect()));
    obj.insert("data".into(), Value::Array(t.components().iter().map(|&z| scalar(z, field)).collect()));
    Value::Object(obj)
}

/// Canonical text form: pretty-printed with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}
