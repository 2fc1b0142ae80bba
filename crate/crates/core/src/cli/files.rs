//! Betas, truth and release CSV files.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::datagen::{fmt_real, ALTERNATIVE_NORM_CAP};
use crate::error::{Error, Result};
use crate::inference::FitResult;
use crate::types::{Corpus, PreferenceVector};

fn csv_err(path: &str) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| {
        let line = e.position().map(|p| p.line()).unwrap_or(0);
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Parse {
                path: path.to_string(),
                line,
                message: format!("{other:?}"),
            },
        }
    }
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

fn beta_columns(d: usize) -> impl Iterator<Item = String> {
    (0..d).map(|k| format!("beta_{k}"))
}

/// One fitted voter.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaRow {
    pub voter_id: u64,
    pub converged: bool,
    pub objective: f64,
    pub beta: PreferenceVector,
}

impl BetaRow {
    pub fn from_fit(voter_id: u64, fit: FitResult) -> Self {
        Self {
            voter_id,
            converged: fit.converged,
            objective: fit.final_objective,
            beta: fit.beta,
        }
    }
}

pub fn write_betas<W: Write>(rows: &[BetaRow], d: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = csv_err("<betas>");
    let mut header = vec!["voter_id".to_string(), "converged".into(), "objective".into()];
    header.extend(beta_columns(d));
    w.write_record(&header).map_err(&err)?;
    for r in rows {
        let mut rec = vec![r.voter_id.to_string(), r.converged.to_string(), fmt_real(r.objective)];
        rec.extend(r.beta.beta.iter().map(|x| fmt_real(*x)));
        w.write_record(&rec).map_err(&err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_betas_file(rows: &[BetaRow], d: usize, path: &Path) -> Result<()> {
    write_betas(rows, d, BufWriter::new(File::create(path)?))
}

pub fn read_betas<R: Read>(input: R, label: &str) -> Result<Vec<BetaRow>> {
    let err = csv_err(label);
    let parse = |line: u64, message: String| Error::Parse {
        path: label.to_string(),
        line,
        message,
    };
    let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let header = r.headers().map_err(&err)?.clone();
    if header.len() < 4
        || &header[0] != "voter_id"
        || &header[1] != "converged"
        || &header[2] != "objective"
        || header.iter().skip(3).zip(beta_columns(header.len() - 3)).any(|(a, b)| a != b)
    {
        return Err(parse(1, "expected header voter_id,converged,objective,beta_0,...".into()));
    }
    let d = header.len() - 3;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(&err)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != d + 3 {
            return Err(parse(line, format!("expected {} fields, found {}", d + 3, rec.len())));
        }
        let voter_id = rec[0]
            .parse()
            .map_err(|_| parse(line, format!("voter_id '{}' is not a non-negative integer", &rec[0])))?;
        let converged = rec[1]
            .parse()
            .map_err(|_| parse(line, format!("converged '{}' is not true/false", &rec[1])))?;
        let num = |k: usize| -> Result<f64> {
            let v: f64 = rec[k]
                .parse()
                .map_err(|_| parse(line, format!("column {} value '{}' is not numeric", &header[k], &rec[k])))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse(line, format!("column {} is not finite", &header[k])))
            }
        };
        let objective = num(2)?;
        let beta = (3..d + 3).map(num).collect::<Result<Vec<_>>>()?;
        rows.push(BetaRow {
            voter_id,
            converged,
            objective,
            beta: PreferenceVector::new(beta),
        });
    }
    if rows.is_empty() {
        return Err(Error::Empty(format!("{label}: no fitted voters")));
    }
    Ok(rows)
}

pub fn read_betas_file(path: &Path) -> Result<Vec<BetaRow>> {
    read_betas(BufReader::new(File::open(path)?), &path.display().to_string())
}

/// `voter_id,beta_0,...` per voter, then a row `m,...` with the population
/// mean.
pub fn write_truth_file(truth: &[PreferenceVector], mean: &[f64], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    let err = csv_err("<truth>");
    let mut header = vec!["voter_id".to_string()];
    header.extend(beta_columns(mean.len()));
    w.write_record(&header).map_err(&err)?;
    for (i, b) in truth.iter().enumerate() {
        let mut rec = vec![i.to_string()];
        rec.extend(b.beta.iter().map(|x| fmt_real(*x)));
        w.write_record(&rec).map_err(&err)?;
    }
    let mut rec = vec!["m".to_string()];
    rec.extend(mean.iter().map(|x| fmt_real(*x)));
    w.write_record(&rec).map_err(&err)?;
    w.flush()?;
    Ok(())
}

/// Metadata shared by every row of a release file.
#[derive(Debug, Clone, PartialEq)]
pub struct ReleaseMeta {
    pub mechanism: String,
    pub epsilon_spec: String,
    pub seed: u64,
    pub bound: f64,
    pub delta: f64,
    pub private: bool,
}

/// One released vector: a voter's local release (`id` = voter id) or the
/// aggregate (`id` = "mean").
#[derive(Debug, Clone, PartialEq)]
pub struct ReleaseRow {
    pub id: String,
    pub epsilon: Option<f64>,
    pub beta: Vec<f64>,
}

pub const RELEASE_META_COLUMNS: [&str; 6] = ["mechanism", "epsilon_spec", "seed", "B", "delta", "private"];

pub fn write_release<W: Write>(meta: &ReleaseMeta, rows: &[ReleaseRow], d: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = csv_err("<release>");
    let mut header: Vec<String> = RELEASE_META_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.push("id".into());
    header.push("epsilon".into());
    header.extend(beta_columns(d));
    w.write_record(&header).map_err(&err)?;
    for r in rows {
        let mut rec = vec![
            meta.mechanism.clone(),
            meta.epsilon_spec.clone(),
            meta.seed.to_string(),
            format!("{}", meta.bound),
            fmt_real(meta.delta),
            meta.private.to_string(),
            r.id.clone(),
            r.epsilon.map(|e| format!("{e}")).unwrap_or_default(),
        ];
        rec.extend(r.beta.iter().map(|x| fmt_real(*x)));
        w.write_record(&rec).map_err(&err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_release_file(meta: &ReleaseMeta, rows: &[ReleaseRow], d: usize, path: &Path) -> Result<()> {
    write_release(meta, rows, d, BufWriter::new(File::create(path)?))
}

/// Reads back the rows of a release file, keyed by `id`.
pub fn read_release_file(path: &Path) -> Result<(ReleaseMeta, Vec<ReleaseRow>)> {
    let label = path.display().to_string();
    let err = csv_err(&label);
    let parse = |line: u64, message: String| Error::Parse {
        path: label.clone(),
        line,
        message,
    };
    let mut r = csv::Reader::from_reader(BufReader::new(File::open(path)?));
    let header = r.headers().map_err(&err)?.clone();
    let d = header.len().saturating_sub(8);
    let mut meta = None;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(&err)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let num = |k: usize| -> Result<f64> {
            rec[k]
                .parse()
                .map_err(|_| parse(line, format!("column {} is not numeric", &header[k])))
        };
        if meta.is_none() {
            meta = Some(ReleaseMeta {
                mechanism: rec[0].to_string(),
                epsilon_spec: rec[1].to_string(),
                seed: rec[2]
                    .parse()
                    .map_err(|_| parse(line, "seed is not an integer".into()))?,
                bound: num(3)?,
                delta: num(4)?,
                private: &rec[5] == "true",
            });
        }
        rows.push(ReleaseRow {
            id: rec[6].to_string(),
            epsilon: if rec[7].is_empty() { None } else { Some(num(7)?) },
            beta: (8..8 + d).map(num).collect::<Result<Vec<_>>>()?,
        });
    }
    let meta = meta.ok_or_else(|| Error::Empty(format!("{label}: no released rows")))?;
    Ok((meta, rows))
}

/// True when every alternative already lies within the preprocessing cap.
pub fn looks_preprocessed(c: &Corpus) -> bool {
    c.voters.iter().all(|v| {
        v.records.iter().all(|r| {
            r.chosen.l2_norm() <= ALTERNATIVE_NORM_CAP + 1e-12
                && r.rejected.l2_norm() <= ALTERNATIVE_NORM_CAP + 1e-12
        })
    })
}
