//! Force–displacement traces, their CSV form, and comparison against a
//! baseline trace.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CSV_HEADER: &str = "displacement_mm,force_N,phase";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("trace schema mismatch at line {line}: {reason}")]
    Schema { line: usize, reason: String },
    #[error("trace has no samples{0}")]
    Empty(&'static str),
    #[error("trace invariant broken: {0}")]
    Invalid(String),
    #[error("traces cover disjoint displacement ranges [{a0}, {a1}] and [{b0}, {b1}]")]
    Disjoint { a0: f64, a1: f64, b0: f64, b1: f64 },
    #[error("baseline peak force {0} N is not positive")]
    NonPositiveBaseline(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Press,
    Jam,
    Lift,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Press => "press",
            Phase::Jam => "jam",
            Phase::Lift => "lift",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Phase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "press" => Ok(Phase::Press),
            "jam" => Ok(Phase::Jam),
            "lift" => Ok(Phase::Lift),
            other => Err(format!("unknown phase `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// mm
    pub displacement: f64,
    /// N
    pub force: f64,
    pub phase: Phase,
}

/// Run metadata carried alongside the samples (not part of the CSV).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub config_hash: String,
    /// Set when the object lost all contact during the lift.
    #[serde(default)]
    pub escaped: bool,
    #[serde(default)]
    pub protocol: Option<crate::grasp::Protocol>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GraspTrace {
    pub samples: Vec<Sample>,
    #[serde(default)]
    pub meta: TraceMeta,
}

impl GraspTrace {
    pub fn from_samples(samples: Vec<Sample>) -> Self {
        Self {
            samples,
            meta: TraceMeta::default(),
        }
    }

    pub fn phase(&self, phase: Phase) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(move |s| s.phase == phase)
    }

    /// Finite values, and strictly increasing displacement within each phase.
    pub fn check(&self) -> Result<(), TraceError> {
        for (i, s) in self.samples.iter().enumerate() {
            if !(s.displacement.is_finite() && s.force.is_finite()) {
                return Err(TraceError::Invalid(format!("sample {i} is not finite")));
            }
        }
        for phase in [Phase::Press, Phase::Jam, Phase::Lift] {
            let d: Vec<f64> = self.phase(phase).map(|s| s.displacement).collect();
            if d.windows(2).any(|w| w[1] <= w[0]) {
                return Err(TraceError::Invalid(format!(
                    "{phase} displacements are not strictly increasing"
                )));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.samples.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            out.push_str(&fmt_g6(s.displacement));
            out.push(',');
            out.push_str(&fmt_g6(s.force));
            out.push(',');
            out.push_str(s.phase.as_str());
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, TraceError> {
        let schema = |line: usize, reason: String| TraceError::Schema { line, reason };
        if text.contains('\r') {
            return Err(schema(1, "CR line endings are not allowed".into()));
        }
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h == CSV_HEADER => {}
            Some((_, h)) => return Err(schema(1, format!("expected header `{CSV_HEADER}`, got `{h}`"))),
            None => return Err(TraceError::Empty("")),
        }
        let mut samples = Vec::new();
        let mut last: Option<f64> = None;
        for (i, line) in lines {
            let n = i + 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(schema(n, format!("expected 3 fields, got {}", fields.len())));
            }
            let num = |s: &str, what: &str| -> Result<f64, TraceError> {
                let v: f64 = s
                    .parse()
                    .map_err(|_| schema(n, format!("{what} `{s}` is not a number")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(schema(n, format!("{what} `{s}` is not finite")))
                }
            };
            let displacement = num(fields[0], "displacement")?;
            let force = num(fields[1], "force")?;
            let phase = fields[2].parse().map_err(|e| schema(n, e))?;
            if last.is_some_and(|d| displacement < d) {
                return Err(schema(n, "displacement decreases".into()));
            }
            last = Some(displacement);
            samples.push(Sample {
                displacement,
                force,
                phase,
            });
        }
        if samples.is_empty() {
            return Err(TraceError::Empty(""));
        }
        let trace = Self::from_samples(samples);
        trace.check()?;
        Ok(trace)
    }
}

/// `%.6g`: six significant digits, trailing zeros dropped, exponent form
/// outside `1e-4 ≤ |x| < 1e6`.
pub fn fmt_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let fixed = format!("{:.*}", (5 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Peak force over the lift phase.
pub fn max_holding_force(trace: &GraspTrace) -> Result<f64, TraceError> {
    trace
        .phase(Phase::Lift)
        .map(|s| s.force)
        .fold(None, |m: Option<f64>, f| Some(m.map_or(f, |m| m.max(f))))
        .ok_or(TraceError::Empty(" in the lift phase"))
}

/// Mean force of `phase` samples in consecutive bins of `window` mm, starting
/// at the phase's first displacement. Returns (bin centre, mean force).
pub fn binned_force(trace: &GraspTrace, phase: Phase, window: f64) -> Vec<(f64, f64)> {
    let pts: Vec<&Sample> = trace.phase(phase).collect();
    let Some(first) = pts.first() else {
        return Vec::new();
    };
    let start = first.displacement;
    let mut bins: Vec<(f64, f64, usize)> = Vec::new();
    for s in pts {
        let k = ((s.displacement - start) / window + 1e-9).floor() as usize;
        if bins.len() <= k {
            bins.resize(k + 1, (0.0, 0.0, 0));
        }
        bins[k].1 += s.force;
        bins[k].2 += 1;
    }
    bins.iter()
        .enumerate()
        .filter(|(_, b)| b.2 > 0)
        .map(|(k, b)| (start + (k as f64 + 0.5) * window, b.1 / b.2 as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// Trace peak over baseline peak.
    pub ratio: f64,
    pub trace_max: f64,
    pub baseline_max: f64,
    /// Smallest displacement from which the trace's pressing force stays at
    /// or below the baseline, having been above it earlier.
    pub crossover_mm: Option<f64>,
}

fn peak(trace: &GraspTrace) -> Option<f64> {
    let lift: Vec<f64> = trace.phase(Phase::Lift).map(|s| s.force).collect();
    let pool: Vec<f64> = if lift.is_empty() {
        trace.samples.iter().map(|s| s.force).collect()
    } else {
        lift
    };
    pool.into_iter().reduce(f64::max)
}

fn interpolate(pts: &[(f64, f64)], x: f64) -> f64 {
    let i = pts.partition_point(|p| p.0 < x);
    if i == 0 {
        return pts[0].1;
    }
    if i == pts.len() {
        return pts[pts.len() - 1].1;
    }
    let (x0, y0) = pts[i - 1];
    let (x1, y1) = pts[i];
    if x1 == x0 {
        y1
    } else {
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Peak-force ratio against `baseline` and, for pressing curves, the
/// displacement from which the trace no longer exceeds the baseline. Peaks
/// are taken over the lift phase when there is one, else over all samples.
pub fn compare_to_baseline(trace: &GraspTrace, baseline: &GraspTrace) -> Result<ComparisonReport, TraceError> {
    let range = |t: &GraspTrace| -> Result<(f64, f64), TraceError> {
        let first = t.samples.first().ok_or(TraceError::Empty(""))?;
        let last = t.samples.last().ok_or(TraceError::Empty(""))?;
        Ok((first.displacement, last.displacement))
    };
    let (a0, a1) = range(trace)?;
    let (b0, b1) = range(baseline)?;
    let (lo, hi) = (a0.max(b0), a1.min(b1));
    if lo > hi {
        return Err(TraceError::Disjoint { a0, a1, b0, b1 });
    }
    let trace_max = peak(trace).ok_or(TraceError::Empty(""))?;
    let baseline_max = peak(baseline).ok_or(TraceError::Empty(""))?;
    if !(baseline_max > 0.0) {
        return Err(TraceError::NonPositiveBaseline(baseline_max));
    }

    let press = |t: &GraspTrace| -> Vec<(f64, f64)> {
        t.phase(Phase::Press).map(|s| (s.displacement, s.force)).collect()
    };
    let (tp, bp) = (press(trace), press(baseline));
    let crossover_mm = if tp.is_empty() || bp.is_empty() {
        None
    } else {
        let over: Vec<(f64, bool)> = tp
            .iter()
            .filter(|p| p.0 >= lo && p.0 <= hi)
            .map(|&(d, f)| (d, f > interpolate(&bp, d)))
            .collect();
        // Start of the trailing run of samples at or below the baseline.
        let tail = over.iter().rev().take_while(|p| !p.1).count();
        if tail == 0 || tail == over.len() {
            None
        } else {
            Some(over[over.len() - tail].0)
        }
    };
    Ok(ComparisonReport {
        ratio: trace_max / baseline_max,
        trace_max,
        baseline_max,
        crossover_mm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(points: &[(f64, f64, Phase)]) -> GraspTrace {
        GraspTrace::from_samples(
            points
                .iter()
                .map(|&(displacement, force, phase)| Sample {
                    displacement,
                    force,
                    phase,
                })
                .collect(),
        )
    }

    #[test]
    fn g6_matches_printf() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (12.5, "12.5"),
            (0.1 + 0.2, "0.3"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (-0.000123456789, "-0.000123457"),
            (0.0000123456, "1.23456e-05"),
            (999999.5, "1e+06"),
            (2.0 / 3.0, "0.666667"),
            (-41.0, "-41"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g6(x), want, "{x}");
        }
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let t = trace(&[
            (0.0, 0.0, Phase::Press),
            (1.0, 0.125, Phase::Press),
            (2.0, 1.0 / 3.0, Phase::Press),
            (2.0, 1.5, Phase::Jam),
            (3.0, -0.25, Phase::Lift),
        ]);
        let text = t.to_csv();
        assert!(text.starts_with("displacement_mm,force_N,phase\n0,0,press\n"));
        let back = GraspTrace::from_csv(&text).unwrap();
        assert_eq!(back.to_csv(), text);
    }

    #[test]
    fn csv_schema_errors() {
        assert!(matches!(GraspTrace::from_csv(""), Err(TraceError::Empty(_))));
        assert!(matches!(
            GraspTrace::from_csv("displacement_mm,force_N,phase\n"),
            Err(TraceError::Empty(_))
        ));
        assert!(matches!(
            GraspTrace::from_csv("d,f,p\n1,2,press\n"),
            Err(TraceError::Schema { line: 1, .. })
        ));
        assert!(matches!(
            GraspTrace::from_csv("displacement_mm,force_N,phase\n1,2,squeeze\n"),
            Err(TraceError::Schema { line: 2, .. })
        ));
        assert!(GraspTrace::from_csv("displacement_mm,force_N,phase\r\n1,2,press\r\n").is_err());
        assert!(GraspTrace::from_csv("displacement_mm,force_N,phase\n2,1,press\n1,1,press\n").is_err());
    }

    #[test]
    fn holding_force_examples() {
        let falling = trace(&[(0.0, 5.0, Phase::Lift), (1.0, 3.0, Phase::Lift), (2.0, 1.0, Phase::Lift)]);
        assert_eq!(max_holding_force(&falling).unwrap(), 5.0);
        let zero = trace(&[(0.0, 0.0, Phase::Lift), (1.0, 0.0, Phase::Lift)]);
        assert_eq!(max_holding_force(&zero).unwrap(), 0.0);
        let peaked = trace(&[
            (10.0, 2.0, Phase::Lift),
            (30.0, 12.5, Phase::Lift),
            (50.0, 4.0, Phase::Lift),
        ]);
        assert_eq!(max_holding_force(&peaked).unwrap(), 12.5);
        let press_only = trace(&[(0.0, 1.0, Phase::Press)]);
        assert!(max_holding_force(&press_only).is_err());
    }

    #[test]
    fn comparison_examples() {
        let base = trace(&[(0.0, 2.0, Phase::Lift), (1.0, 10.0, Phase::Lift)]);
        let ours = trace(&[(0.0, 14.0, Phase::Lift), (1.0, 3.0, Phase::Lift)]);
        let r = compare_to_baseline(&ours, &base).unwrap();
        assert!((r.ratio - 1.4).abs() < 1e-12);

        let same = compare_to_baseline(&base, &base).unwrap();
        assert_eq!(same.ratio, 1.0);
        assert_eq!(same.crossover_mm, None);

        let far = trace(&[(100.0, 1.0, Phase::Lift)]);
        assert!(matches!(compare_to_baseline(&far, &base), Err(TraceError::Disjoint { .. })));
    }

    #[test]
    fn crossover_on_pressing_curves() {
        let pts = |f: &dyn Fn(f64) -> f64| -> GraspTrace {
            trace(
                &(0..=40)
                    .map(|d| (d as f64, f(d as f64), Phase::Press))
                    .collect::<Vec<_>>(),
            )
        };
        let baseline = pts(&|d| if d < 10.0 { 0.0 } else { 0.4 * (d - 10.0) });
        let ours = pts(&|d| if d < 10.0 { 0.0 } else { 3.0 + 0.2 * (d - 10.0) });
        let r = compare_to_baseline(&ours, &baseline).unwrap();
        // 3 + 0.2x = 0.4x at x = 15 → d = 25
        assert_eq!(r.crossover_mm, Some(25.0));
    }

    #[test]
    fn bins_average_each_window() {
        let t = trace(
            &(0..10)
                .map(|d| (d as f64, d as f64, Phase::Lift))
                .collect::<Vec<_>>(),
        );
        let b = binned_force(&t, Phase::Lift, 5.0);
        assert_eq!(b, vec![(2.5, 2.0), (7.5, 7.0)]);
    }
}
