//! Aggregation of sweep results into per-figure `(x, series, mean, stderr)`
//! tables.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use crate::datagen::{fmt_real, PersonalizedSpec};
use crate::error::{Error, Result};
use crate::evaluation::{Mechanism, PrivacySetting, RESULTS_HEADER};

/// One parsed results row; only the columns figures use.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub mechanism: Mechanism,
    pub privacy: PrivacySetting,
    pub n_voters: usize,
    pub n_records: usize,
    pub d: usize,
    pub bound: f64,
    pub accuracy: f64,
    pub accuracy_ratio: f64,
}

pub fn read_results<R: Read>(input: R, label: &str) -> Result<Vec<ResultRow>> {
    let parse = |line: u64, message: String| Error::Parse {
        path: label.to_string(),
        line,
        message,
    };
    let mut r = csv::Reader::from_reader(input);
    let header = r
        .headers()
        .map_err(|e| parse(1, e.to_string()))?
        .clone();
    if header.iter().ne(RESULTS_HEADER.iter().copied()) {
        return Err(parse(1, format!("expected header {}", RESULTS_HEADER.join(","))));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| parse(e.position().map(|p| p.line()).unwrap_or(0), e.to_string()))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let int = |k: usize| -> Result<usize> {
            rec[k]
                .parse()
                .map_err(|_| parse(line, format!("{} is not an integer", RESULTS_HEADER[k])))
        };
        let real = |k: usize| -> Result<f64> {
            rec[k]
                .parse()
                .map_err(|_| parse(line, format!("{} is not numeric", RESULTS_HEADER[k])))
        };
        rows.push(ResultRow {
            mechanism: rec[0].parse().map_err(|e: Error| parse(line, e.to_string()))?,
            privacy: PrivacySetting::parse_label(&rec[1]).map_err(|e| parse(line, e.to_string()))?,
            n_voters: int(2)?,
            n_records: int(3)?,
            d: int(4)?,
            bound: real(5)?,
            accuracy: real(7)?,
            accuracy_ratio: real(8)?,
        });
    }
    Ok(rows)
}

pub fn read_results_file(path: &Path) -> Result<Vec<ResultRow>> {
    read_results(BufReader::new(File::open(path)?), &path.display().to_string())
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Axis {
    Epsilon,
    Dim,
    Bound,
    FracConservative,
    EpsConservative,
    EpsModerate,
    Voters,
    Records,
    ByMechanism,
    Single,
}

/// True when `p` equals the default spec after `vary` sets the swept field
/// (and any field the figure pins elsewhere).
fn fixed(p: &PersonalizedSpec, vary: impl Fn(&mut PersonalizedSpec)) -> bool {
    let mut q = PersonalizedSpec::default();
    vary(&mut q);
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
    close(p.f_c, q.f_c) && close(p.f_m, q.f_m) && close(p.eps_c, q.eps_c) && close(p.eps_m, q.eps_m)
        && close(p.eps_l, q.eps_l)
}

impl Axis {
    fn numeric(self, r: &ResultRow) -> Option<f64> {
        match (self, &r.privacy) {
            (Self::Epsilon, PrivacySetting::Uniform(e)) => Some(*e),
            (Self::FracConservative, PrivacySetting::Personalized(p))
                if fixed(p, |q| q.f_c = p.f_c) =>
            {
                Some(p.f_c)
            }
            (Self::EpsConservative, PrivacySetting::Personalized(p))
                if fixed(p, |q| {
                    q.eps_c = p.eps_c;
                    q.eps_m = 0.5;
                }) =>
            {
                Some(p.eps_c)
            }
            (Self::EpsModerate, PrivacySetting::Personalized(p)) if fixed(p, |q| q.eps_m = p.eps_m) => {
                Some(p.eps_m)
            }
            (Self::Dim, _) => Some(r.d as f64),
            (Self::Bound, _) => Some(r.bound),
            _ => None,
        }
    }

    fn label(self, r: &ResultRow) -> String {
        match self {
            Self::Voters => format!("N={}", r.n_voters),
            Self::Records => format!("n={}", r.n_records),
            Self::ByMechanism => r.mechanism.to_string(),
            Self::Epsilon => format!("eps={}", r.privacy.label()),
            Self::Single => r.mechanism.to_string(),
            _ => String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Metric {
    Accuracy,
    Ratio,
}

struct Layout {
    id: &'static str,
    mechanism: Option<Mechanism>,
    n_voters: Option<usize>,
    x: Axis,
    series: Axis,
    metric: Metric,
}

const fn layout(
    id: &'static str,
    mechanism: Option<Mechanism>,
    n_voters: Option<usize>,
    x: Axis,
    series: Axis,
    metric: Metric,
) -> Layout {
    Layout {
        id,
        mechanism,
        n_voters,
        x,
        series,
        metric,
    }
}

use Axis::*;
use Metric::*;
const VLCP: Option<Mechanism> = Some(Mechanism::Vlcp);
const VLDP: Option<Mechanism> = Some(Mechanism::Vldp);
const FM: Option<Mechanism> = Some(Mechanism::RldpFm);

const LAYOUTS: &[Layout] = &[
    layout("fig1a", VLCP, Some(50), Epsilon, Records, Accuracy),
    layout("fig1b", VLCP, Some(100), Epsilon, Records, Accuracy),
    layout("fig2a", VLDP, Some(50), Epsilon, Records, Accuracy),
    layout("fig2b", VLDP, Some(100), Epsilon, Records, Accuracy),
    layout("fig3a", FM, Some(50), Epsilon, Records, Accuracy),
    layout("fig3b", FM, Some(100), Epsilon, Records, Accuracy),
    layout("fig4a", None, Some(50), Epsilon, ByMechanism, Accuracy),
    layout("fig4b", None, Some(100), Epsilon, ByMechanism, Accuracy),
    layout("fig5a", VLCP, None, Dim, Epsilon, Accuracy),
    layout("fig5b", FM, None, Dim, Epsilon, Accuracy),
    layout("fig6a", FM, None, FracConservative, Voters, Accuracy),
    layout("fig6b", FM, None, EpsConservative, Voters, Accuracy),
    layout("fig6c", FM, None, EpsModerate, Voters, Accuracy),
    layout("fig7a", VLCP, None, Epsilon, Voters, Accuracy),
    layout("fig7b", VLDP, None, Epsilon, Voters, Accuracy),
    layout("fig7c", FM, None, Epsilon, Voters, Accuracy),
    layout("fig7d", None, None, Epsilon, ByMechanism, Accuracy),
    layout("fig8", None, None, Bound, Single, Accuracy),
    layout("fig8a", VLCP, None, Bound, Single, Accuracy),
    layout("fig8b", VLDP, None, Bound, Single, Accuracy),
    layout("fig9a", FM, None, EpsConservative, Voters, Accuracy),
    layout("fig9b", FM, None, EpsModerate, Voters, Accuracy),
    layout("fig10a", None, None, Epsilon, ByMechanism, Ratio),
    layout("fig10b", None, None, Epsilon, ByMechanism, Ratio),
];

pub fn figure_ids() -> Vec<&'static str> {
    LAYOUTS.iter().map(|l| l.id).collect()
}

/// One aggregated point.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub x: f64,
    pub series: String,
    pub mean: f64,
    pub stderr: f64,
}

/// Mean and standard error (sample standard deviation over `sqrt(k)`;
/// zero for a single value).
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

pub fn aggregate(rows: &[ResultRow], figure: &str) -> Result<Vec<PlotPoint>> {
    let l = LAYOUTS.iter().find(|l| l.id == figure).ok_or_else(|| {
        Error::Config(format!(
            "unknown figure id '{figure}'; valid ids: {}",
            figure_ids().join(", ")
        ))
    })?;
    let selected: Vec<&ResultRow> = rows
        .iter()
        .filter(|r| l.mechanism.is_none_or(|m| m == r.mechanism))
        .filter(|r| l.n_voters.is_none_or(|n| n == r.n_voters))
        .filter(|r| l.x.numeric(r).is_some())
        .collect();
    if matches!(l.series, Single) {
        let first = selected.first().map(|r| r.mechanism);
        if selected.iter().any(|r| Some(r.mechanism) != first) {
            return Err(Error::Config(format!(
                "{figure} is a single-series figure but the results mix mechanisms; use fig8a or fig8b"
            )));
        }
    }
    // Group by (series, x) in order of first appearance, then sort.
    let mut groups: Vec<(String, f64, Vec<f64>)> = Vec::new();
    for r in selected {
        let x = l.x.numeric(r).expect("filtered");
        let s = l.series.label(r);
        let v = match l.metric {
            Accuracy => r.accuracy,
            Ratio => r.accuracy_ratio,
        };
        match groups.iter_mut().find(|(gs, gx, _)| *gs == s && *gx == x) {
            Some(g) => g.2.push(v),
            None => groups.push((s, x, vec![v])),
        }
    }
    let series_order: Vec<String> = groups.iter().fold(Vec::new(), |mut acc, g| {
        if !acc.contains(&g.0) {
            acc.push(g.0.clone());
        }
        acc
    });
    groups.sort_by(|a, b| {
        let ia = series_order.iter().position(|s| *s == a.0);
        let ib = series_order.iter().position(|s| *s == b.0);
        ia.cmp(&ib).then(a.1.total_cmp(&b.1))
    });
    Ok(groups
        .into_iter()
        .map(|(series, x, vals)| {
            let (mean, stderr) = mean_stderr(&vals);
            PlotPoint {
                x,
                series,
                mean,
                stderr,
            }
        })
        .collect())
}

pub fn write_plot<W: Write>(points: &[PlotPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    w.write_record(["x", "series", "mean", "stderr"]).map_err(io)?;
    for p in points {
        w.write_record([format!("{}", p.x), p.series.clone(), fmt_real(p.mean), fmt_real(p.stderr)])
            .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(m: Mechanism, eps: f64, n_voters: usize, n_records: usize, acc: f64) -> ResultRow {
        ResultRow {
            mechanism: m,
            privacy: PrivacySetting::Uniform(eps),
            n_voters,
            n_records,
            d: 10,
            bound: 2.0,
            accuracy: acc,
            accuracy_ratio: acc,
        }
    }

    #[test]
    fn fig1a_groups_by_n() {
        let rows = vec![
            row(Mechanism::Vlcp, 1.0, 50, 50, 0.8),
            row(Mechanism::Vlcp, 1.0, 50, 50, 0.9),
            row(Mechanism::Vlcp, 0.1, 50, 50, 0.6),
            row(Mechanism::Vlcp, 0.1, 50, 100, 0.7),
            row(Mechanism::Vlcp, 0.1, 100, 100, 0.1),
            row(Mechanism::Vldp, 0.1, 50, 100, 0.1),
        ];
        let p = aggregate(&rows, "fig1a").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!((p[0].x, p[0].series.as_str()), (0.1, "n=50"));
        assert_eq!((p[1].x, p[1].series.as_str()), (1.0, "n=50"));
        assert!((p[1].mean - 0.85).abs() < 1e-12);
        assert!((p[1].stderr - 0.05).abs() < 1e-12);
        assert_eq!(p[2].series, "n=100");
    }

    #[test]
    fn fig8_single_series() {
        let mut rows = Vec::new();
        for (b, acc) in [(0.5, 0.6), (2.0, 0.9), (5.0, 0.7)] {
            rows.push(ResultRow {
                bound: b,
                ..row(Mechanism::Vlcp, 0.1, 100, 50, acc)
            });
        }
        let p = aggregate(&rows, "fig8").unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.iter().all(|q| q.series == "vlcp"));
        rows.push(row(Mechanism::Vldp, 0.1, 100, 50, 0.2));
        assert!(aggregate(&rows, "fig8").is_err());
        assert_eq!(aggregate(&rows, "fig8a").unwrap().len(), 3);
    }

    #[test]
    fn personalized_axes() {
        let mut rows = Vec::new();
        for fc in [0.1, 0.3] {
            rows.push(ResultRow {
                privacy: PrivacySetting::Personalized(PersonalizedSpec {
                    f_c: fc,
                    ..Default::default()
                }),
                ..row(Mechanism::RldpFm, 0.0, 100, 50, 0.5)
            });
        }
        rows.push(row(Mechanism::RldpFm, 1.0, 100, 50, 0.9));
        // Belongs to the ε_C sweep, not the f_C one.
        rows.push(ResultRow {
            privacy: PrivacySetting::Personalized(PersonalizedSpec {
                eps_c: 0.3,
                eps_m: 0.5,
                ..Default::default()
            }),
            ..row(Mechanism::RldpFm, 0.0, 100, 50, 0.5)
        });
        let p = aggregate(&rows, "fig6a").unwrap();
        assert_eq!(p.iter().map(|q| q.x).collect::<Vec<_>>(), vec![0.1, 0.3]);
        let p = aggregate(&rows, "fig6b").unwrap();
        assert_eq!(p.iter().map(|q| q.x).collect::<Vec<_>>(), vec![0.3]);
        assert!(aggregate(&rows, "fig6c").unwrap().is_empty());
    }

    #[test]
    fn unknown_figure_lists_ids() {
        match aggregate(&[], "fig99") {
            Err(Error::Config(m)) => assert!(m.contains("fig1a") && m.contains("fig10b")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stderr_oracle() {
        let (m, s) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        // sd = sqrt(5/3), se = sd / 2
        assert!((s - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(mean_stderr(&[0.3]), (0.3, 0.0));
    }
}
