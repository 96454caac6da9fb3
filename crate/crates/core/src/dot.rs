//! Schematic Graphviz export.

use std::fmt::Write;

use crate::instance::StreamedInstance;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders backbone edges solid and stream edges dashed, labelled `Ψ=<position>`.
pub fn export_dot(i: &StreamedInstance) -> String {
    let mut out = String::new();
    writeln!(out, "graph streamed {{").unwrap();
    writeln!(out, "  label={};", quote(&format!("ω={}", i.omega()))).unwrap();
    for v in i.backbone().labels() {
        writeln!(out, "  {};", quote(v)).unwrap();
    }
    for &(a, b) in i.backbone().edges() {
        writeln!(out, "  {} -- {} [style=solid];", quote(i.label(a)), quote(i.label(b))).unwrap();
    }
    for e in i.stream() {
        let (a, b) = i.edge_label(e);
        writeln!(out, "  {} -- {} [style=dashed, label={}];", quote(&a), quote(&b), quote(&format!("Ψ={}", e.position)))
            .unwrap();
    }
    out.push_str("}\n");
    out
}
