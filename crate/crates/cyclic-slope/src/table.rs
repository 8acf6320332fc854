//! Plain-text rendering of JSON reports.
//!
//! Scalars nested in objects become `path | value` rows in key order. An
//! array whose elements are all flat objects becomes a sub-table with one
//! column per key.

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| scalar(x).is_some() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn flat_object_rows(a: &[Value]) -> Option<(Vec<String>, Vec<Vec<String>>)> {
    let first = a.first()?.as_object()?;
    let keys: Vec<String> = first.keys().cloned().collect();
    let mut rows = Vec::with_capacity(a.len());
    for v in a {
        let o = v.as_object()?;
        if o.keys().ne(keys.iter()) {
            return None;
        }
        rows.push(o.values().map(scalar).collect::<Option<Vec<_>>>()?);
    }
    Some((keys, rows))
}

fn grid(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        padded.join(" | ").trim_end().to_string()
    };
    let mut out = vec![line(header)];
    out.push(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("-+-"));
    out.extend(rows.iter().map(|r| line(r)));
    out.join("\n") + "\n"
}

fn collect(path: &str, v: &Value, rows: &mut Vec<Vec<String>>, sections: &mut Vec<String>) {
    if let Some(s) = scalar(v) {
        rows.push(vec![path.to_string(), s]);
        return;
    }
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                collect(&p, x, rows, sections);
            }
        }
        Value::Array(a) => {
            if let Some((keys, body)) = flat_object_rows(a) {
                sections.push(format!("{path}\n{}", grid(&keys, &body)));
            } else {
                for (i, x) in a.iter().enumerate() {
                    collect(&format!("{path}.{i}"), x, rows, sections);
                }
            }
        }
        _ => {}
    }
}

/// Render any report as text tables.
pub fn render(v: &Value) -> String {
    let mut rows = Vec::new();
    let mut sections = Vec::new();
    collect("", v, &mut rows, &mut sections);
    let mut out = String::new();
    if !rows.is_empty() {
        out.push_str(&grid(&["quantity".into(), "value".into()], &rows));
    }
    for s in sections {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&s);
    }
    out
}
