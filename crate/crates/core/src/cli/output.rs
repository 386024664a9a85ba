use serde_json::{json, Value};

use super::Row;
use crate::measure::DiscreteMeasure;
use crate::moments::SolvabilityReport;
use crate::solvers::ParameterRange;

/// JSON number, or `"inf"`/`"-inf"`/`"NaN"` when not finite.
pub(crate) fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("NaN")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn text(x: f64) -> String {
    match num(x) {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn measure_rows(w: &mut csv::Writer<Vec<u8>>, mu: &DiscreteMeasure, tail: &[String]) {
    let mut cum = 0.0;
    for (i, (x, m)) in mu.iter().enumerate() {
        cum += m;
        let mut rec = vec![i.to_string(), text(x), text(m), text(cum)];
        rec.extend_from_slice(tail);
        w.write_record(&rec).expect("in-memory write");
    }
}

pub(crate) fn measure_csv(mu: &DiscreteMeasure) -> String {
    let mut w = writer();
    w.write_record(["index", "atom", "mass", "cumulative_mass"]).expect("in-memory write");
    measure_rows(&mut w, mu, &[]);
    finish(w)
}

/// One line per atom, tagged with its sweep parameter; failed rows keep a
/// single line with empty atom columns.
pub(crate) fn sweep_csv(rows: &[Row]) -> String {
    let mut w = writer();
    w.write_record(["index", "atom", "mass", "cumulative_mass", "parameter", "max_residual", "flagged"])
        .expect("in-memory write");
    for r in rows {
        let tail = [text(r.parameter), text(r.max_residual), r.flagged.to_string()];
        match &r.measure {
            Some(mu) if !mu.is_empty() => measure_rows(&mut w, mu, &tail),
            _ => {
                let mut rec = vec![String::new(); 4];
                rec.extend_from_slice(&tail);
                w.write_record(&rec).expect("in-memory write");
            }
        }
    }
    finish(w)
}

pub(crate) fn report_csv(report: &SolvabilityReport) -> String {
    let mut w = writer();
    w.write_record(["name", "passed", "witness"]).expect("in-memory write");
    for c in report.conditions() {
        let witness = serde_json::to_string(&c.witness).expect("witness serializes");
        w.write_record([c.name.as_str(), &c.passed.to_string(), &witness])
            .expect("in-memory write");
    }
    finish(w)
}

pub(crate) fn range_csv(r: &ParameterRange) -> String {
    let mut w = writer();
    w.write_record(["kind", "shape", "lo", "hi", "unique"]).expect("in-memory write");
    let field = |v: Value| match v {
        Value::String(s) => s,
        v => v.to_string(),
    };
    w.write_record([
        field(serde_json::to_value(r.kind).expect("kind serializes")),
        field(serde_json::to_value(r.shape).expect("shape serializes")),
        text(r.lo),
        text(r.hi),
        r.unique.to_string(),
    ])
    .expect("in-memory write");
    finish(w)
}

pub(crate) fn roundtrip_csv(rows: &[Value]) -> String {
    let mut w = writer();
    let cols = ["seed", "problem", "order", "parameter", "max_residual", "flagged"];
    w.write_record(cols).expect("in-memory write");
    for r in rows {
        let rec: Vec<String> = cols
            .iter()
            .map(|c| match &r[*c] {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                v => v.to_string(),
            })
            .collect();
        w.write_record(&rec).expect("in-memory write");
    }
    finish(w)
}
