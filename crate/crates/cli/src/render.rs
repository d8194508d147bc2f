//! CSV and plain-text projections of the JSON outputs.
//!
//! CSV columns:
//! - fan: `cone,rays`
//! - positivity: `nef,ample,closed_nef,closed_ample,agree`
//! - coh: `kind,m,h0,...,hn` with one `dims` row, then one `contribution` row per character
//! - verify: `a,b,predicate,h1,agree,unexpected_shapes,error`
//! - bench: `a,b,pipeline,h1,characters,micros,cache_hit,report_sha256`
//!
//! Lists inside a cell are space-separated.

use std::fmt::Write;

use serde_json::{json, Value};
use torivan::cohomology::{CohomologyReport, SweepSummary, VanishingVerdict};
use torivan::json::int_to_json;
use torivan::lattice_fan::FanValidation;
use torivan::positivity::{PositivityVerdict, WallWitness};
use torivan::{Fan, ToricDivisor};

use crate::BenchRow;

fn joined<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn fan_csv(fan: &Fan) -> String {
    let mut s = String::from("cone,rays\n");
    for (i, c) in fan.max_cones().iter().enumerate() {
        let _ = writeln!(
            s,
            "{i},{}",
            joined(c.rays().iter().map(|&r| fan.ray_name(r)))
        );
    }
    s
}

pub fn fan_text(fan: &Fan, v: &FanValidation) -> String {
    let mut s = format!("dimension {}\nrays:\n", fan.dim());
    for (i, u) in fan.rays().iter().enumerate() {
        let _ = writeln!(s, "  {:<4} {u}", fan.ray_name(i));
    }
    s.push_str("maximal cones:\n");
    for (i, c) in fan.max_cones().iter().enumerate() {
        let _ = writeln!(
            s,
            "  {i:<4} {}",
            joined(c.rays().iter().map(|&r| fan.ray_name(r)))
        );
    }
    let checks = [
        ("primitive", &v.primitive),
        ("distinct", &v.distinct),
        ("simplicial", &v.simplicial),
        ("smooth", &v.smooth),
        ("intersections", &v.intersections),
        ("complete", &v.complete),
    ];
    for (name, c) in checks {
        let _ = write!(s, "{name}: {}", c.ok);
        if let Some(x) = &c.counterexample {
            let _ = write!(s, " ({x})");
        }
        s.push('\n');
    }
    s
}

pub fn positivity_csv(v: &PositivityVerdict, closed: Option<(bool, bool)>) -> String {
    let agree = closed.map(|(n, a)| n == v.nef && a == v.ample);
    format!(
        "nef,ample,closed_nef,closed_ample,agree\n{},{},{},{},{}\n",
        v.nef,
        v.ample,
        opt(closed.map(|c| c.0)),
        opt(closed.map(|c| c.1)),
        opt(agree)
    )
}

fn witness_text(fan: &Fan, w: &WallWitness) -> String {
    format!(
        "wall between cones {} and {}: phi({}) = {} vs <m_{}, {}> = {}",
        w.wall.left,
        w.wall.right,
        fan.ray_name(w.ray),
        w.phi,
        w.sigma,
        fan.ray_name(w.ray),
        w.bound
    )
}

pub fn positivity_text(
    fan: &Fan,
    d: &ToricDivisor,
    v: &PositivityVerdict,
    closed: Option<(bool, bool)>,
) -> String {
    let mut s = format!(
        "divisor: {}\nnef: {}\nample: {}\n",
        d.display(fan),
        v.nef,
        v.ample
    );
    if let Some(w) = &v.nef_witness {
        let _ = writeln!(s, "not nef: {}", witness_text(fan, w));
    } else if let Some(w) = &v.ample_witness {
        let _ = writeln!(s, "not ample: {}", witness_text(fan, w));
    }
    if let Some((nef, ample)) = closed {
        let _ = writeln!(
            s,
            "closed form: nef={nef} ample={ample} agree={}",
            nef == v.nef && ample == v.ample
        );
    }
    s
}

pub fn report_csv(r: &CohomologyReport) -> String {
    let n = r.dims.len();
    let mut s = format!(
        "kind,m,{}\n",
        (0..n)
            .map(|i| format!("h{i}"))
            .collect::<Vec<_>>()
            .join(",")
    );
    let _ = writeln!(
        s,
        "dims,,{}",
        r.dims
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    for c in &r.contributions {
        let ranks: Vec<String> = (0..n)
            .map(|i| c.ranks.get(&i).copied().unwrap_or(0).to_string())
            .collect();
        let _ = writeln!(s, "contribution,{},{}", joined(&c.m.0), ranks.join(","));
    }
    s
}

pub fn report_text(r: &CohomologyReport) -> String {
    let mut s = format!("divisor: {}\n", r.divisor.display(&r.fan));
    let _ = writeln!(
        s,
        "normal form (cone {}): {}",
        r.base_cone,
        r.normal_form.display(&r.fan)
    );
    let bx: Vec<String> = r
        .search_box
        .lo
        .iter()
        .zip(&r.search_box.hi)
        .map(|(l, h)| format!("[{l}, {h}]"))
        .collect();
    let _ = writeln!(s, "box: {}", bx.join(" x "));
    for (i, h) in r.dims.iter().enumerate() {
        let _ = writeln!(s, "h^{i} = {h}");
    }
    let higher: Vec<_> = r
        .contributions
        .iter()
        .filter(|c| c.ranks.keys().any(|&i| i > 0))
        .collect();
    if !higher.is_empty() {
        s.push_str("higher contributions:\n");
        for c in higher {
            let parts: Vec<String> = c
                .ranks
                .iter()
                .map(|(i, k)| format!("h^{i} += {k}"))
                .collect();
            let _ = writeln!(s, "  m = {}: {}", c.m, parts.join(", "));
        }
    }
    s
}

pub fn sweep_csv(vs: &[VanishingVerdict]) -> String {
    let mut s = String::from("a,b,predicate,h1,agree,unexpected_shapes,error\n");
    for v in vs {
        let error = v.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            joined(&v.params.a),
            v.params.b,
            v.predicate_says_vanishes,
            opt(v.oracle_h1),
            v.agree,
            v.unexpected_shapes,
            error
        );
    }
    s
}

pub fn sweep_text(vs: &[VanishingVerdict], summary: &SweepSummary) -> String {
    let mut s = String::new();
    for v in vs {
        let status = match (&v.error, v.agree) {
            (Some(e), _) => format!("error: {e}"),
            (None, true) => "agree".into(),
            (None, false) => "DISAGREE".into(),
        };
        let _ = writeln!(
            s,
            "a=({}) b={}: predicate={} h1={} {status}",
            v.params
                .a
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            v.params.b,
            v.predicate_says_vanishes,
            opt(v.oracle_h1)
        );
    }
    let _ = writeln!(
        s,
        "total {}, agree {}, disagree {}, errors {}, unexpected disconnected shapes {}",
        summary.total, summary.agree, summary.disagree, summary.errors, summary.unexpected_shapes
    );
    s
}

pub fn bench_json(n: usize, rows: &[BenchRow]) -> Value {
    json!({
        "n": n,
        "rows": rows.iter().map(|r| json!({
            "a": r.a,
            "b": r.b,
            "pipeline": r.pipeline,
            "h1": int_to_json(&r.h1),
            "characters": int_to_json(&r.characters),
            "micros": r.micros as u64,
            "cache_hit": r.cache_hit,
            "report_sha256": r.report_sha256,
        })).collect::<Vec<_>>(),
    })
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from("a,b,pipeline,h1,characters,micros,cache_hit,report_sha256\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.a,
            r.b,
            r.pipeline,
            r.h1,
            r.characters,
            r.micros,
            opt(r.cache_hit),
            r.report_sha256.as_deref().unwrap_or("")
        );
    }
    s
}

pub fn bench_text(rows: &[BenchRow]) -> String {
    let mut s = format!(
        "{:>4} {:>4} {:<12} {:>8} {:>12} {:>10} {:>6}\n",
        "a", "b", "pipeline", "h1", "characters", "micros", "cached"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>4} {:>4} {:<12} {:>8} {:>12} {:>10} {:>6}",
            r.a,
            r.b,
            r.pipeline,
            r.h1,
            r.characters,
            r.micros,
            opt(r.cache_hit)
        );
    }
    s
}
