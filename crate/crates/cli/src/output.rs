use std::io::{self, Write};

use serde_json::{Map, Value};
use uldl_dof::Rational;

/// Decimal places used next to every printed fraction.
const PLACES: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    JsonLines,
    Csv,
}

/// One output row; field order is insertion order.
#[derive(Debug, Clone, Default)]
pub struct Record(Map<String, Value>);

impl Record {
    pub fn new(kind: &str) -> Self {
        let mut r = Record::default();
        r.set("record", kind);
        r
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_owned(), value.into());
        self
    }

    /// `key` as `"p/q"` plus `key_decimal`.
    pub fn rational(&mut self, key: &str, r: Rational) -> &mut Self {
        self.set(key, r.to_string());
        self.set(&format!("{key}_decimal"), r.to_decimal(PLACES))
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

pub fn emit<W: Write>(out: W, format: Format, records: &[Record]) -> io::Result<()> {
    match format {
        Format::JsonLines => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, &r.0)?;
                out.write_all(b"\n")?;
            }
            out.flush()
        }
        Format::Csv => {
            // Header is the union of keys in first-seen order.
            let mut header: Vec<&str> = Vec::new();
            for r in records {
                for k in r.0.keys() {
                    if !header.contains(&k.as_str()) {
                        header.push(k);
                    }
                }
            }
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(&header)?;
            for r in records {
                w.write_record(header.iter().map(|k| cell(r.get(k))))?;
            }
            w.flush()
        }
    }
}
