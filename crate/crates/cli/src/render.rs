//! Plain-text output for `--format text`.

use parahecke::commute::{Certificate, Classification, Evidence, InvolutionReport};
use parahecke::group::DoubleCosetRecord;
use parahecke::CoxeterDiagram;
use serde_json::json;

use crate::Format;

fn verdict_word(c: &Certificate) -> String {
    serde_json::to_value(c.verdict).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

pub fn certificate(c: &Certificate) -> String {
    let mut out = format!("{}: {} ({:?})", c.case, verdict_word(c), c.method);
    match &c.evidence {
        Evidence::Commutator { u: Some(u), v: Some(v), w: Some(w), c_uv: Some(a), c_vu: Some(b), .. } => {
            out += &format!("\n  u = {u}\n  v = {v}\n  w = {w}\n  c(u,v;w) = {a}\n  c(v,u;w) = {b}");
        }
        Evidence::Commutator { representatives, pairs_checked, .. } => {
            out += &format!("\n  {representatives} representatives, {pairs_checked} pairs, no mismatch");
        }
        Evidence::Decomposition { w, states, found, .. } => {
            out += &format!("\n  w = {w}\n  {states} states");
            if let Some([v, z, u]) = found {
                out += &format!("\n  reversed: {v} | {z} | {u}");
            }
        }
        Evidence::Heap { w, classes, checks, .. } => {
            out += &format!("\n  w = {w}\n  {} commutation classes", classes.len());
            for line in checks {
                out += &format!("\n  {line}");
            }
        }
        Evidence::Path { path, inner } => {
            out += &format!("\n  path {}\n  {}", path.join(" "), verdict_word(inner));
        }
        Evidence::Automorphism { permutation, representatives, failure, .. } => {
            if let Some(p) = permutation {
                let moved: Vec<String> = p.iter().filter(|(s, t)| s != t).map(|(s, t)| format!("{s}->{t}")).collect();
                let shown = if moved.is_empty() { "identity".to_string() } else { moved.join(" ") };
                out += &format!("\n  pi = {shown} over {representatives} representatives");
            }
            if let Some(f) = failure {
                out += &format!("\n  {f}");
            }
        }
        Evidence::Lift { source_diagram, inner } => {
            out += &format!("\n  from {source_diagram}\n  {}", certificate(inner).replace('\n', "\n  "));
        }
    }
    out
}

pub fn classification(c: &Classification) -> String {
    let rule = serde_json::to_value(c.rule).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    let verdict = serde_json::to_value(c.verdict).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    format!("{verdict} [{rule}] {}", c.detail)
}

pub fn cosets(d: &CoxeterDiagram, records: &[DoubleCosetRecord], format: Format) -> Vec<String> {
    records
        .iter()
        .map(|r| {
            let stab: Vec<&str> = r.stabilizer_subset.iter().map(|&s| d.name(s)).collect();
            match format {
                Format::Json => json!({
                    "representative": r.min_rep.format(),
                    "length": r.min_rep.length(),
                    "stabilizer": stab,
                    "coset_size": r.coset_size.to_string(),
                    "left_quotient_size": r.left_quotient_size.to_string(),
                    "involution": r.involution,
                })
                .to_string(),
                Format::Text => format!(
                    "{:<24} len {:>3}  K = {{{}}}  size {}{}",
                    if r.min_rep.is_identity() { "e".to_string() } else { r.min_rep.format() },
                    r.min_rep.length(),
                    stab.join(","),
                    r.coset_size,
                    if r.involution { "" } else { "  not an involution" },
                ),
            }
        })
        .collect()
}

pub fn involutions(report: &InvolutionReport) -> Vec<String> {
    let mut lines = vec![format!("{} without {}: {} double cosets", report.diagram, report.removed, report.rows.len())];
    for (n, r) in report.rows.iter().enumerate() {
        lines.push(format!(
            "{n:>3}  len {:>3}  |W_I:W_K| {:>8}  size {:>12}  {}  ~{}  {}",
            r.length,
            r.left_quotient_size,
            r.coset_size,
            if r.involution { "inv" } else { "   " },
            r.complement,
            if r.representative.is_empty() { "e" } else { &r.representative },
        ));
    }
    lines.push(format!(
        "total left cosets {}; all involutions: {}",
        report.total_left_cosets, report.all_involutions
    ));
    lines
}
