//! Tabular output shared by every command.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::exact::{render, Rat};

/// Direction a float is rounded in when shortened to 12 significant digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Nearest,
    Up,
    Down,
}

impl Rounding {
    fn note(self) -> Option<&'static str> {
        match self {
            Rounding::Nearest => None,
            Rounding::Up => Some("rounded up"),
            Rounding::Down => Some("rounded down"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Empty,
    Int(u64),
    Text(String),
    Rational(Rat),
    Float(f64, Rounding),
}

impl Cell {
    pub fn opt_float(x: Option<f64>, r: Rounding) -> Cell {
        x.map_or(Cell::Empty, |x| Cell::Float(x, r))
    }

    fn csv(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Int(k) => k.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Rational(x) => render(x),
            Cell::Float(x, r) => sig12(*x, *r),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Int(k) => json!(k),
            Cell::Text(s) => json!(s),
            Cell::Rational(x) => json!(render(x)),
            Cell::Float(x, _) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
        }
    }
}

pub struct Column {
    pub key: &'static str,
    pub rounding: Rounding,
}

impl Column {
    pub fn plain(key: &'static str) -> Column {
        Column { key, rounding: Rounding::Nearest }
    }
    pub fn up(key: &'static str) -> Column {
        Column { key, rounding: Rounding::Up }
    }
    pub fn down(key: &'static str) -> Column {
        Column { key, rounding: Rounding::Down }
    }

    fn header(&self) -> String {
        match self.rounding.note() {
            Some(n) => format!("{} ({n})", self.key),
            None => self.key.to_string(),
        }
    }
}

/// A command result: one row per record, every row tagged with its provenance
/// and the library version.
pub struct Table {
    pub command: Vec<String>,
    pub spec: Value,
    pub columns: Vec<Column>,
    pub rows: Vec<(Vec<Cell>, String)>,
    pub extra: Map<String, Value>,
    /// messages for stderr
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(command: Vec<String>, spec: Value, columns: Vec<Column>) -> Table {
        Table { command, spec, columns, rows: Vec::new(), extra: Map::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, cells: Vec<Cell>, provenance: impl Into<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push((cells, provenance.into()));
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = self.columns.iter().map(Column::header).collect();
        header.extend(["provenance".into(), "version".into()]);
        w.write_record(&header)?;
        for (cells, prov) in &self.rows {
            let mut rec: Vec<String> = cells.iter().map(Cell::csv).collect();
            rec.extend([prov.clone(), crate::VERSION.to_string()]);
            w.write_record(&rec)?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|(cells, prov)| {
                let mut m = Map::new();
                for (c, cell) in self.columns.iter().zip(cells) {
                    m.insert(c.key.to_string(), cell.json());
                }
                m.insert("provenance".into(), json!(prov));
                Value::Object(m)
            })
            .collect();
        let mut top = Map::new();
        top.insert("schema_version".into(), json!(crate::mcengine::SCHEMA_VERSION));
        top.insert("version".into(), json!(crate::VERSION));
        top.insert("command".into(), json!(self.command.join(" ")));
        top.insert("spec".into(), self.spec.clone());
        for (k, v) in &self.extra {
            top.insert(k.clone(), v.clone());
        }
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
        writeln!(out)
    }
}

/// `x` to 12 significant digits, rounded in the given direction; fixed notation
/// for moderate exponents, scientific otherwise.
pub fn sig12(x: f64, dir: Rounding) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{:.11e}", x.abs());
    let (mant, exp) = s.split_once('e').expect("scientific format");
    let mut m: i64 = mant.replace('.', "").parse().expect("digits");
    let mut e: i32 = exp.parse().expect("exponent");
    let neg = x < 0.0;
    let value = |m: i64, e: i32| -> f64 {
        let v: f64 = format!("{m}e{}", e - 11).parse().expect("float");
        if neg {
            -v
        } else {
            v
        }
    };
    // moving the magnitude changes the signed value in the opposite direction for negatives
    let bump_up = |m: &mut i64, e: &mut i32| {
        *m += 1;
        if *m == 1_000_000_000_000 {
            *m = 100_000_000_000;
            *e += 1;
        }
    };
    let bump_down = |m: &mut i64, e: &mut i32| {
        *m -= 1;
        if *m < 100_000_000_000 {
            *m = 999_999_999_999;
            *e -= 1;
        }
    };
    match dir {
        Rounding::Nearest => {}
        Rounding::Up if value(m, e) < x => {
            if neg {
                bump_down(&mut m, &mut e)
            } else {
                bump_up(&mut m, &mut e)
            }
        }
        Rounding::Down if value(m, e) > x => {
            if neg {
                bump_up(&mut m, &mut e)
            } else {
                bump_down(&mut m, &mut e)
            }
        }
        _ => {}
    }
    let digits = m.to_string();
    let sign = if neg { "-" } else { "" };
    if (-5..12).contains(&e) {
        let body = if e >= 0 {
            let (int, frac) = digits.split_at(e as usize + 1);
            if frac.trim_end_matches('0').is_empty() {
                int.to_string()
            } else {
                format!("{int}.{}", frac.trim_end_matches('0'))
            }
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), digits.trim_end_matches('0'))
        };
        format!("{sign}{body}")
    } else {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{sign}{lead}e{e}")
        } else {
            format!("{sign}{lead}.{rest}e{e}")
        }
    }
}
