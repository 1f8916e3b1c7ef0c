//! Graphviz rendering of the describing multigraph.

use std::fmt::Write;

use crate::fpdata::{build_multigraph, FixedPointData, FpError, Multigraph};

/// Undirected DOT text: one vertex per fixed point with a `sign` attribute,
/// one edge per weight with a `label` attribute. Output depends only on the
/// graph.
pub fn multigraph_to_dot(g: &Multigraph) -> String {
    let mut out = String::from("graph fixed_points {\n");
    for (i, s) in g.signs.iter().enumerate() {
        let _ = writeln!(
            out,
            "  p{0} [label=\"p{0} ({1})\", sign=\"{2:+}\"];",
            i + 1,
            s.symbol(),
            s.value()
        );
    }
    for e in &g.edges {
        let _ = writeln!(out, "  p{} -- p{} [label=\"{}\"];", e.u + 1, e.v + 1, e.label);
    }
    out.push_str("}\n");
    out
}

pub fn data_to_dot(data: &FixedPointData) -> Result<String, FpError> {
    Ok(multigraph_to_dot(&build_multigraph(data)?))
}
