//! Browser bindings: build example data, verify a document, run a small
//! search, and draw the describing multigraph as SVG.
//!
//! Each exported function wraps a `*_impl` function that returns
//! `Result<String, String>`, so the logic is testable off the browser.

use std::fmt::Write;

use serde_json::json;
use wasm_bindgen::prelude::*;

use trifix_core::document::{data_to_json, parse_data};
use trifix_core::fpdata::{
    build_multigraph, cp2_family, hp2_family, hp2_from_projective, sphere_rotation, HalfInteger,
    Multigraph,
};
use trifix_core::search::{run_search, SearchKind, SearchOptions};
use trifix_core::verify_data;

/// Largest bound the page accepts per dimension, to keep the tab responsive.
pub fn max_bound(kind: SearchKind) -> u64 {
    match kind {
        SearchKind::Dim4 => 60,
        SearchKind::Dim8 => 16,
        SearchKind::Dim12 => 10,
    }
}

fn numbers<T: std::str::FromStr>(params: &str) -> Result<Vec<T>, String> {
    params
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("cannot read `{t}`")))
        .collect()
}

fn exactly<T>(v: Vec<T>, n: usize, names: &str) -> Result<Vec<T>, String> {
    if v.len() == n {
        Ok(v)
    } else {
        Err(format!("expected {n} parameters ({names}), got {}", v.len()))
    }
}

pub fn example_impl(family: &str, params: &str) -> Result<String, String> {
    let data = match family {
        "hp2" => {
            let v = exactly(numbers::<u64>(params)?, 3, "a b c")?;
            hp2_family(v[0], v[1], v[2])
        }
        "cp2" => {
            let v = exactly(numbers::<u64>(params)?, 2, "b c")?;
            cp2_family(v[0], v[1])
        }
        "sphere" => sphere_rotation(&numbers::<u64>(params)?),
        "hp2-projective" => {
            let v = exactly(numbers::<HalfInteger>(params)?, 3, "d e f")?;
            hp2_from_projective(v[0], v[1], v[2])
        }
        other => return Err(format!("unknown family `{other}`")),
    };
    data.map(|d| data_to_json(&d)).map_err(|e| e.to_string())
}

pub fn verify_impl(document: &str) -> Result<String, String> {
    let data = parse_data(document).map_err(|e| e.to_string())?;
    let report = verify_data(&data, None);
    let mut v = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    v["passed"] = json!(report.passed());
    serde_json::to_string_pretty(&v).map_err(|e| e.to_string())
}

pub fn enumerate_impl(dim: u32, max_weight: u32) -> Result<String, String> {
    let kind = SearchKind::from_dim(dim as usize).ok_or("dimension must be 4, 8 or 12")?;
    let w = u64::from(max_weight);
    if w > max_bound(kind) {
        return Err(format!("the page searches up to max weight {} in dimension {dim}", max_bound(kind)));
    }
    let (status, report) = match run_search(kind, w, &SearchOptions::default()) {
        Ok(r) => ("ok", r),
        Err(e) => match e.report() {
            Some(r) => ("failed", r.clone()),
            None => return Err(e.to_string()),
        },
    };
    let mut v = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    v["status"] = json!(status);
    serde_json::to_string_pretty(&v).map_err(|e| e.to_string())
}

/// Vertices on a triangle (or a horizontal pair); parallel edges fan out as
/// quadratic curves with their labels at the apex.
pub fn multigraph_svg(g: &Multigraph) -> String {
    const SIZE: f64 = 360.0;
    let k = g.signs.len();
    let pos: Vec<(f64, f64)> = match k {
        2 => vec![(70.0, 180.0), (290.0, 180.0)],
        _ => vec![(180.0, 50.0), (60.0, 290.0), (300.0, 290.0)],
    };
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE} {SIZE}\" width=\"{SIZE}\" height=\"{SIZE}\" font-family=\"sans-serif\" font-size=\"13\">\n"
    );
    let mut pairs: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.u, e.v)).collect();
    pairs.dedup();
    for (u, v) in pairs {
        let labels = g.labels_between(u, v);
        let ((x1, y1), (x2, y2)) = (pos[u], pos[v]);
        let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
        let len = ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt();
        let (nx, ny) = (-(y2 - y1) / len, (x2 - x1) / len);
        let m = labels.len() as f64;
        for (i, label) in labels.iter().enumerate() {
            let offset = (i as f64 - (m - 1.0) / 2.0) * 44.0;
            let (cx, cy) = (mx + nx * offset, my + ny * offset);
            let _ = writeln!(
                s,
                "  <path d=\"M {x1:.1} {y1:.1} Q {cx:.1} {cy:.1} {x2:.1} {y2:.1}\" fill=\"none\" stroke=\"#555\"/>"
            );
            let (lx, ly) = ((mx + cx) / 2.0, (my + cy) / 2.0);
            let _ = writeln!(
                s,
                "  <text x=\"{lx:.1}\" y=\"{ly:.1}\" text-anchor=\"middle\" dy=\"4\" fill=\"#036\" stroke=\"#fff\" stroke-width=\"3\" paint-order=\"stroke\">{label}</text>"
            );
        }
    }
    for (i, sign) in g.signs.iter().enumerate() {
        let (x, y) = pos[i];
        let fill = if sign.value() > 0 { "#e8f1fb" } else { "#fbeaea" };
        let _ = writeln!(
            s,
            "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"24\" fill=\"{fill}\" stroke=\"#222\"/>\n  <text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"middle\" dy=\"4\">p{} ({})</text>",
            i + 1,
            sign.symbol()
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn graph_svg_impl(document: &str) -> Result<String, String> {
    let data = parse_data(document).map_err(|e| e.to_string())?;
    let g = build_multigraph(&data).map_err(|e| e.to_string())?;
    Ok(multigraph_svg(&g))
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Example data as a JSON document. `params` holds the family parameters
/// separated by spaces or commas.
#[wasm_bindgen]
pub fn example(family: &str, params: &str) -> Result<String, JsValue> {
    js(example_impl(family, params))
}

/// Constraint report for a JSON document.
#[wasm_bindgen]
pub fn verify(document: &str) -> Result<String, JsValue> {
    js(verify_impl(document))
}

/// Search report for dimension 4, 8 or 12 up to a small bound.
#[wasm_bindgen]
pub fn enumerate(dim: u32, max_weight: u32) -> Result<String, JsValue> {
    js(enumerate_impl(dim, max_weight))
}

/// SVG drawing of the describing multigraph.
#[wasm_bindgen]
pub fn graph_svg(document: &str) -> Result<String, JsValue> {
    js(graph_svg_impl(document))
}
