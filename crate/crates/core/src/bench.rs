//! Throughput benchmarks with a per-component cost breakdown.
//!
//! The cost of `ln`, `sqrt` and `sin/cos` is estimated by substitution: the
//! generator is timed once with the real math kernel and once per component
//! with that component replaced by a trivial function of the same data
//! movement. The difference is charged to the component, and whatever
//! remains of the total is reported as `other`.

use std::fmt;
use std::hint::black_box;
use std::time::Instant;

use crate::kernel::{MathKernel, NoLn, NoSinCos, NoSqrt, StdMath};
use crate::method::{generator_with, Method, NormalParams, BLOCK};
use crate::uniform::UniformStream;

/// Seed used by every benchmark run.
pub const BENCH_SEED: u64 = 0xBE7C_4000;

/// Smallest sample count accepted by [`bench_method`].
pub const MIN_BENCH_SAMPLES: usize = 1_000_000;
/// Smallest repeat count accepted by [`bench_method`].
pub const MIN_BENCH_REPEATS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Ln,
    Sqrt,
    SinCos,
    Other,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::Ln, Component::Sqrt, Component::SinCos, Component::Other];

    pub fn label(self) -> &'static str {
        match self {
            Component::Ln => "ln",
            Component::Sqrt => "sqrt",
            Component::SinCos => "sin/cos",
            Component::Other => "other",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub method: Method,
    pub ns_per_deviate: f64,
    /// Nanoseconds per deviate for each entry of [`Component::ALL`], in that order.
    pub breakdown: Vec<(Component, f64)>,
    pub n_samples: usize,
    pub uniforms_per_deviate: f64,
}

impl BenchReport {
    pub fn component(&self, c: Component) -> f64 {
        self.breakdown.iter().find(|(k, _)| *k == c).map_or(0.0, |&(_, ns)| ns)
    }
}

/// Cycles per normal deviate on the Fujitsu VP2200, kept for reference only.
/// Rows follow [`Component::ALL`] then the total; columns follow [`Method::ALL`].
pub const HISTORICAL_VP2200: [[f64; 6]; 5] = [
    [13.1, 13.1, 7.1, 13.1, 7.1, 0.3],
    [8.8, 8.8, 1.0, 8.8, 1.0, 0.0],
    [13.8, 6.6, 6.6, 0.0, 0.0, 0.0],
    [5.9, 5.6, 11.6, 11.9, 13.8, 35.1],
    [41.6, 34.1, 26.3, 33.8, 21.9, 35.4],
];

/// Median nanoseconds per deviate over `repeats` timed fills of `n` deviates,
/// after one discarded warm-up fill. Also returns uniforms drawn per deviate.
fn time_kernel<K>(method: Method, n: usize, repeats: usize, buf: &mut [f64]) -> (f64, f64)
where
    K: MathKernel + 'static,
{
    let mut times = Vec::with_capacity(repeats);
    let mut per_deviate = 0.0;
    for rep in 0..=repeats {
        let mut g =
            generator_with::<UniformStream, K>(method, NormalParams::standard(), UniformStream::new(BENCH_SEED));
        let start = Instant::now();
        let mut left = n;
        while left > 0 {
            let k = left.min(buf.len());
            g.fill(&mut buf[..k]);
            black_box(&buf[..k]);
            left -= k;
        }
        let elapsed = start.elapsed().as_nanos() as f64 / n as f64;
        per_deviate = g.uniforms_drawn() as f64 / n as f64;
        if rep > 0 {
            times.push(elapsed);
        }
    }
    times.sort_by(f64::total_cmp);
    (times[times.len() / 2], per_deviate)
}

/// Times `method` on `n` deviates, `repeats` times per kernel.
///
/// `n` and `repeats` are raised to [`MIN_BENCH_SAMPLES`] and [`MIN_BENCH_REPEATS`]
/// when smaller.
pub fn bench_method(method: Method, n: usize, repeats: usize) -> BenchReport {
    bench_method_unchecked(method, n.max(MIN_BENCH_SAMPLES), repeats.max(MIN_BENCH_REPEATS))
}

pub(crate) fn bench_method_unchecked(method: Method, n: usize, repeats: usize) -> BenchReport {
    let mut buf = vec![0.0; n.min(16 * BLOCK)];
    let (total, per_deviate) = time_kernel::<StdMath>(method, n, repeats, &mut buf);
    let saved = |t: f64| (total - t).max(0.0);
    let ln = saved(time_kernel::<NoLn>(method, n, repeats, &mut buf).0);
    let sqrt = saved(time_kernel::<NoSqrt>(method, n, repeats, &mut buf).0);
    let sincos = saved(time_kernel::<NoSinCos>(method, n, repeats, &mut buf).0);
    // timing noise can make the substituted savings exceed the total;
    // scale them down so the breakdown still adds up
    let claimed = ln + sqrt + sincos;
    let scale = if claimed > total { total / claimed } else { 1.0 };
    let (ln, sqrt, sincos) = (ln * scale, sqrt * scale, sincos * scale);
    let other = (total - ln - sqrt - sincos).max(0.0);
    BenchReport {
        method,
        ns_per_deviate: total,
        breakdown: vec![
            (Component::Ln, ln),
            (Component::Sqrt, sqrt),
            (Component::SinCos, sincos),
            (Component::Other, other),
        ],
        n_samples: n,
        uniforms_per_deviate: per_deviate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Table,
    Csv,
}

/// Benchmarks every method in [`Method::ALL`] order.
pub fn bench_all(n: usize, repeats: usize) -> Vec<BenchReport> {
    Method::ALL.iter().map(|&m| bench_method(m, n, repeats)).collect()
}

fn historical(method: Method, row: usize) -> Option<f64> {
    Method::ALL
        .iter()
        .position(|&m| m == method)
        .map(|col| HISTORICAL_VP2200[row][col])
}

/// Renders reports as a table with rows {ln, sqrt, sin/cos, other, total,
/// uniforms/deviate} and one column per method, followed by the historical
/// VP2200 cycle counts and the R1/P2 time ratio when both are present.
pub fn render(reports: &[BenchReport], format: TableFormat) -> String {
    let mut rows: Vec<(String, Vec<f64>, Vec<Option<f64>>)> = Component::ALL
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            (
                c.label().to_string(),
                reports.iter().map(|r| r.component(c)).collect(),
                reports.iter().map(|r| historical(r.method, i)).collect(),
            )
        })
        .collect();
    rows.push((
        "total".to_string(),
        reports.iter().map(|r| r.ns_per_deviate).collect(),
        reports.iter().map(|r| historical(r.method, 4)).collect(),
    ));
    let uniforms: Vec<f64> = reports.iter().map(|r| r.uniforms_per_deviate).collect();
    let ratio = {
        let ns = |m| reports.iter().find(|r| r.method == m).map(|r| r.ns_per_deviate);
        ns(Method::R1).zip(ns(Method::P2)).map(|(r1, p2)| r1 / p2)
    };

    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str("row");
            for r in reports {
                out.push_str(&format!(",{}_ns,{}_vp2200_cycles", r.method.name(), r.method.name()));
            }
            out.push('\n');
            for (label, ns, hist) in &rows {
                out.push_str(label);
                for (v, h) in ns.iter().zip(hist) {
                    out.push_str(&format!(",{v:.3},{}", h.map_or(String::new(), |h| h.to_string())));
                }
                out.push('\n');
            }
            out.push_str("uniforms/deviate");
            for u in &uniforms {
                out.push_str(&format!(",{u:.4},"));
            }
            out.push('\n');
            if let Some(q) = ratio {
                out.push_str(&format!("r1/p2,{q:.3},1.616\n"));
            }
        }
        TableFormat::Table => {
            out.push_str(&format!(
                "nanoseconds per deviate on this host (n = {})\n",
                reports.first().map_or(0, |r| r.n_samples)
            ));
            out.push_str(&format!("{:<18}", ""));
            for r in reports {
                out.push_str(&format!("{:>10}", r.method.to_string()));
            }
            out.push('\n');
            for (label, ns, _) in &rows {
                out.push_str(&format!("{label:<18}"));
                for v in ns {
                    out.push_str(&format!("{v:>10.2}"));
                }
                out.push('\n');
            }
            out.push_str(&format!("{:<18}", "uniforms/deviate"));
            for u in &uniforms {
                out.push_str(&format!("{u:>10.4}"));
            }
            out.push_str("\n\nhistorical: cycles per deviate on the Fujitsu VP2200 (not comparable)\n");
            out.push_str(&format!("{:<18}", ""));
            for r in reports {
                out.push_str(&format!("{:>10}", r.method.to_string()));
            }
            out.push('\n');
            for (label, _, hist) in &rows {
                out.push_str(&format!("{label:<18}"));
                for h in hist {
                    out.push_str(&format!("{:>10}", h.map_or("-".to_string(), |h| format!("{h:.1}"))));
                }
                out.push('\n');
            }
            if let Some(q) = ratio {
                out.push_str(&format!(
                    "\nR1 / P2 time ratio: {q:.3} on this host, {:.3} historically\n",
                    35.4 / 21.9
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(method: Method) -> BenchReport {
        bench_method_unchecked(method, 50_000, 1)
    }

    #[test]
    fn breakdown_sums_to_total() {
        for m in Method::ALL {
            let r = quick(m);
            assert_eq!(r.breakdown.len(), 4);
            let sum: f64 = r.breakdown.iter().map(|&(_, ns)| ns).sum();
            assert!(r.ns_per_deviate > 0.0);
            for &(c, ns) in &r.breakdown {
                assert!(ns >= 0.0 && ns <= r.ns_per_deviate, "{m} {c}: {ns}");
            }
            assert!(
                (sum - r.ns_per_deviate).abs() <= 0.1 * r.ns_per_deviate,
                "{m}: {sum} vs {}",
                r.ns_per_deviate
            );
        }
    }

    #[test]
    fn uniform_consumption_is_reported() {
        assert_eq!(quick(Method::B1).uniforms_per_deviate, 1.0);
        assert_eq!(quick(Method::B2).uniforms_per_deviate, 1.0);
        assert_eq!(quick(Method::B3).uniforms_per_deviate, 1.5);
    }

    #[test]
    fn render_has_table_rows() {
        let reports = vec![quick(Method::P2), quick(Method::R1)];
        let table = render(&reports, TableFormat::Table);
        for label in ["ln", "sqrt", "sin/cos", "other", "total", "historical", "R1 / P2"] {
            assert!(table.contains(label), "{label} missing:\n{table}");
        }
        let csv = render(&reports, TableFormat::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "row,p2_ns,p2_vp2200_cycles,r1_ns,r1_vp2200_cycles");
        assert!(lines[5].starts_with("total,"));
        assert!(lines[5].ends_with(",35.4"));
    }

    #[test]
    fn timing_does_not_change_output() {
        // the buffer holds the last timed fill in full when n fits in it
        let mut timed = vec![0.0; 10_000];
        let _ = time_kernel::<StdMath>(Method::P1, timed.len(), 1, &mut timed);
        let mut plain = vec![0.0; 10_000];
        generator_with::<UniformStream, StdMath>(Method::P1, NormalParams::standard(), UniformStream::new(BENCH_SEED))
            .fill(&mut plain);
        assert_eq!(timed, plain);
    }
}
