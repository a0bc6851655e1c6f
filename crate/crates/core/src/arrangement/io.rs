//! Text format:
//!
//! ```text
//! # comment
//! ambient_dim = 3
//! field_order = 3
//! labels = x y z h00
//! [1, 0, 0]
//! [0, 1, 0]
//! [0, 0, 1]
//! [1, z, 1]
//! ```
//!
//! Coefficients use the cyclotomic literal syntax (`1/2 - 3z^2`), with `z` a
//! primitive `field_order`-th root of unity.

use std::fmt::Write as _;

use super::{normalize_projective, Arrangement, Hyperplane};
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_arrangement(text: &str) -> Result<Arrangement> {
    let mut ambient: Option<usize> = None;
    let mut order: Option<u32> = None;
    let mut labels: Option<Vec<String>> = None;
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(body) = line.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| perr(lineno, "hyperplane row must end with `]`"))?;
            rows.push((lineno, body.split(',').map(|s| s.trim().to_string()).collect()));
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| perr(lineno, format!("expected `key = value` or `[...]`, got `{line}`")))?;
        let value = value.trim();
        match key.trim() {
            "ambient_dim" => {
                ambient = Some(
                    value
                        .parse()
                        .map_err(|_| perr(lineno, format!("bad ambient_dim `{value}`")))?,
                )
            }
            "field_order" => {
                let n: u32 = value
                    .parse()
                    .map_err(|_| perr(lineno, format!("bad field_order `{value}`")))?;
                if n == 0 {
                    return Err(perr(lineno, "field_order must be positive"));
                }
                order = Some(n)
            }
            "labels" => labels = Some(value.split_whitespace().map(String::from).collect()),
            other => return Err(perr(lineno, format!("unknown header key `{other}`"))),
        }
    }
    let ambient = ambient.ok_or_else(|| perr(0, "missing ambient_dim"))?;
    let order = order.unwrap_or(1);
    if let Some(l) = &labels {
        if l.len() != rows.len() {
            return Err(perr(0, format!("{} labels for {} hyperplanes", l.len(), rows.len())));
        }
    }
    let mut hyperplanes = Vec::with_capacity(rows.len());
    for (k, (lineno, cells)) in rows.into_iter().enumerate() {
        if cells.len() != ambient {
            return Err(perr(
                lineno,
                format!("expected {ambient} coefficients, got {}", cells.len()),
            ));
        }
        let normal = cells
            .iter()
            .map(|c| CycloNum::parse(c, order).map_err(|e| perr(lineno, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let label = labels.as_ref().map(|l| l[k].clone()).unwrap_or_default();
        hyperplanes.push(Hyperplane::new(normal, label));
    }
    Arrangement::new(ambient, order, hyperplanes).map_err(|e| match e {
        Error::InvalidInput(msg) => perr(0, msg),
        other => other,
    })
}

fn row_text(normal: &[CycloNum]) -> String {
    let cells: Vec<String> = normal.iter().map(|c| c.to_string()).collect();
    format!("[{}]", cells.join(", "))
}

/// Writes the arrangement preserving hyperplane order; with `normalize`, each
/// normal is scaled so its first nonzero coefficient is 1.
pub fn write_arrangement(arr: &Arrangement, normalize: bool) -> String {
    let mut out = String::new();
    writeln!(out, "ambient_dim = {}", arr.ambient_dim()).unwrap();
    writeln!(out, "field_order = {}", arr.field_order()).unwrap();
    if arr.hyperplanes().iter().any(|h| !h.label.is_empty()) {
        let labels: Vec<&str> = arr
            .hyperplanes()
            .iter()
            .map(|h| if h.label.is_empty() { "_" } else { h.label.as_str() })
            .collect();
        writeln!(out, "labels = {}", labels.join(" ")).unwrap();
    }
    for h in arr.hyperplanes() {
        let n = if normalize {
            normalize_projective(&h.normal)
        } else {
            h.normal.clone()
        };
        writeln!(out, "{}", row_text(&n)).unwrap();
    }
    out
}

/// Normalized and sorted by normal; independent of input order and scaling.
pub fn write_canonical(arr: &Arrangement) -> String {
    let mut rows: Vec<(Vec<CycloNum>, String)> = arr
        .hyperplanes()
        .iter()
        .map(|h| (normalize_projective(&h.normal), h.label.clone()))
        .collect();
    rows.sort();
    let hyperplanes = rows.into_iter().map(|(n, l)| Hyperplane::new(n, l)).collect();
    let sorted = Arrangement::new(arr.ambient_dim(), arr.field_order(), hyperplanes).expect("same hyperplanes");
    write_arrangement(&sorted, false)
}
