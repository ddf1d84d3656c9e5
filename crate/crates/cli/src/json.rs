use std::io;

use realform::linalg::{CMat, C64};
use serde::Deserialize;
use serde_json::ser::Formatter;
use serde_json::{json, Value};

/// Compact JSON with every float written to 17 significant digits. Keys come
/// out sorted because `serde_json::Map` is ordered.
struct Fixed;

impl Formatter for Fixed {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }
}

pub fn render(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fixed);
    serde::Serialize::serialize(v, &mut ser).expect("writing to memory");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// `[re, im]`. Non-finite parts become `null`.
pub fn complex(z: C64) -> Value {
    json!([real(z.re), real(z.im)])
}

pub fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn matrix(m: &CMat) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array(m.row(i).iter().map(|&z| complex(z)).collect())).collect())
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

impl Entry {
    pub fn value(&self) -> C64 {
        match *self {
            Entry::Pair([re, im]) => C64::new(re, im),
            Entry::Real(re) => C64::new(re, 0.0),
        }
    }
}

pub type Rows = Vec<Vec<Entry>>;

pub fn to_rows(rows: &Rows) -> Vec<Vec<C64>> {
    rows.iter().map(|r| r.iter().map(Entry::value).collect()).collect()
}

pub fn to_cmat(rows: &Rows) -> Option<CMat> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return None;
    }
    let rows = to_rows(rows);
    Some(CMat::from_fn(n, m, |i, j| rows[i][j]))
}
