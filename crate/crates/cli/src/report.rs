use std::fmt::Write as _;
use std::time::Duration;

use hsub::SubgraphResult;

/// What a run prints: result lines on stdout, then `#` report lines.
#[derive(Debug, Default)]
pub struct RunReport {
    pub algorithm: String,
    pub params: Vec<(String, String)>,
    pub lines: Vec<String>,
    pub notes: Vec<String>,
    pub found: bool,
    pub elapsed: Duration,
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn new(algorithm: impl Into<String>) -> Self {
        RunReport {
            algorithm: algorithm.into(),
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    /// Records one subgraph, or "none" when absent.
    pub fn subgraph(&mut self, r: Option<&SubgraphResult>, negate: bool) {
        match r {
            Some(r) => {
                self.lines.push(result_line(r, negate));
                self.found = true;
            }
            None => self.note("result none"),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        let _ = writeln!(out, "# algorithm {}", self.algorithm);
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "# params {}", ps.join(" "));
        }
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        if let Some(s) = self.seed {
            let _ = writeln!(out, "# seed {s}");
        }
        let _ = writeln!(out, "# time_s {:.6}", self.elapsed.as_secs_f64());
        #[cfg(feature = "count-comparisons")]
        {
            let _ = writeln!(out, "# comparisons {}", hsub::vertexmax::comparisons());
        }
        out
    }
}

/// `weight<TAB>v1,v2,...`; the weight is printed with `{:?}` so integral
/// values keep their `.0`.
pub fn result_line(r: &SubgraphResult, negate: bool) -> String {
    let w = if negate { -r.weight } else { r.weight };
    // -0.0 would read oddly after negating an empty sum.
    let w = if w == 0.0 { 0.0 } else { w };
    format!("{w:?}\t{}", join(&r.vertices))
}

pub fn join(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Shortest decimal that round-trips after rounding to 9 places.
pub fn trim_float(x: f64) -> String {
    let s = format!("{x:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}
