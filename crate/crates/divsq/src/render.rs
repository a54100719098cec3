//! Plain-text renderings for the command line.

use std::fmt::Write;

use divsq_core::loopspace::{CollapseReport, DLGenerator, E2Generator};
use divsq_core::unstable::EInfinityDims;
use divsq_core::{BigradedDims, HilbertSeries};
use serde_json::{json, Value};

/// Rows are homotopy degrees `t`, columns internal degrees `q`; zeros print as `.`.
pub fn bigraded_table(dims: &BigradedDims) -> String {
    let width = dims
        .iter()
        .map(|(_, c)| c.to_string().len())
        .chain([dims.max_q().to_string().len()])
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    write!(out, "t\\q").unwrap();
    for q in 0..=dims.max_q() {
        write!(out, " {q:>width$}").unwrap();
    }
    out.push('\n');
    for t in 0..=dims.max_t() {
        write!(out, "{t:>3}").unwrap();
        for q in 0..=dims.max_q() {
            let c = dims.get(t, q);
            if c == 0 {
                write!(out, " {:>width$}", ".").unwrap();
            } else {
                write!(out, " {c:>width$}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// One table per filtration degree `s` that has a nonzero entry.
pub fn e_infinity_table(e: &EInfinityDims) -> String {
    let mut out = String::new();
    let mut filtrations: Vec<usize> = e.iter().map(|((s, _, _), _)| s).collect();
    filtrations.dedup();
    for s in filtrations {
        let mut slice = BigradedDims::new(e.max_homotopy, e.max_internal);
        for ((s2, t, q), c) in e.iter() {
            if s2 == s {
                slice.add(t, q, c);
            }
        }
        writeln!(out, "filtration {s}").unwrap();
        out.push_str(&bigraded_table(&slice));
    }
    out
}

pub fn series(h: &HilbertSeries) -> String {
    h.coeffs().iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn collapse_text(r: &CollapseReport) -> String {
    let mut out = String::new();
    match r.first_mismatch {
        None => writeln!(out, "EQUAL through degree {}", r.max_degree).unwrap(),
        Some((d, a, b)) => writeln!(out, "MISMATCH at degree {d}: H_*(QX) has {a}, E2 has {b}").unwrap(),
    }
    writeln!(out, "H_*(QX): {}", series(&r.dl_series)).unwrap();
    writeln!(out, "E2:      {}", series(&r.e2_series)).unwrap();
    out
}

pub fn collapse_value(r: &CollapseReport) -> Value {
    json!({
        "degrees": r.degrees,
        "max_degree": r.max_degree,
        "dl_series": r.dl_series.coeffs(),
        "e2_series": r.e2_series.coeffs(),
        "equal": r.equal,
        "first_mismatch": r.first_mismatch.map(|(d, a, b)| json!({"degree": d, "dl": a, "e2": b})),
    })
}

pub fn dl_label(g: &DLGenerator) -> String {
    if g.b.is_empty() {
        "v".to_string()
    } else {
        let b: Vec<String> = g.b.iter().map(usize::to_string).collect();
        format!("{{{}}}v", b.join(","))
    }
}

pub fn e2_label(g: &E2Generator) -> String {
    let a: Vec<String> = g.a.iter().map(usize::to_string).collect();
    let base = if g.s == 0 { "v".to_string() } else { format!("[{}]v", a.join(",")) };
    if g.ops.is_empty() {
        base
    } else {
        format!("{} {base}", g.ops)
    }
}

/// The JSON document shared by `e2` and `qx`.
pub fn generators_value(k: usize, max_degree: usize, dl: &[DLGenerator], e2: &[E2Generator], equal: bool) -> Value {
    json!({
        "k": k,
        "max_degree": max_degree,
        "dl": dl.iter().map(|g| json!({"b": g.b, "degree": g.degree()})).collect::<Vec<_>>(),
        "e2": e2
            .iter()
            .map(|g| json!({"s": g.s, "a": g.a, "I": g.ops.entries(), "degree": g.degree().total}))
            .collect::<Vec<_>>(),
        "series_equal": equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_layout() {
        let mut d = BigradedDims::new(2, 2);
        d.add(0, 0, 1);
        d.add(2, 1, 3);
        assert_eq!(bigraded_table(&d), "t\\q 0 1 2\n  0 1 . .\n  1 . . .\n  2 . 3 .\n");
    }

    #[test]
    fn labels() {
        assert_eq!(dl_label(&DLGenerator { b: vec![], k: 1 }), "v");
        assert_eq!(dl_label(&DLGenerator { b: vec![2, 1], k: 1 }), "{2,1}v");
    }
}
