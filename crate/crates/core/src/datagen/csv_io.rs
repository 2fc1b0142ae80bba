//! Corpus CSV format.
//!
//! ```text
//! voter_id,record_id,x_0,...,x_{d-1},z_0,...,z_{d-1}
//! ```
//!
//! Each row says that the voter chose alternative X over alternative Z.
//! Voters appear in order of first occurrence; records keep file order.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::{validate_corpus, Corpus, FeatureVector, PairwiseComparison, VoterDataset};

/// Formats a real with 17 significant digits, enough to round-trip any f64.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn corpus_header(d: usize) -> Vec<String> {
    let mut h = vec!["voter_id".to_string(), "record_id".to_string()];
    h.extend((0..d).map(|k| format!("x_{k}")));
    h.extend((0..d).map(|k| format!("z_{k}")));
    h
}

pub fn write_corpus<W: Write>(corpus: &Corpus, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(corpus_header(corpus.d)).map_err(csv_io_error)?;
    for v in &corpus.voters {
        for (j, r) in v.records.iter().enumerate() {
            let mut row = vec![v.voter_id.to_string(), j.to_string()];
            row.extend(r.chosen.0.iter().map(|x| fmt_real(*x)));
            row.extend(r.rejected.0.iter().map(|x| fmt_real(*x)));
            w.write_record(&row).map_err(csv_io_error)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_corpus_file(corpus: &Corpus, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_corpus(corpus, std::io::BufWriter::new(f))
}

fn csv_io_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Parses a corpus from CSV. `label` names the source in diagnostics.
pub fn read_corpus<R: Read>(input: R, label: &str) -> Result<Corpus> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: label.to_string(),
        line,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = rdr
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(parse_err(1, "empty file".into()));
    }
    if header.len() < 4 || &header[0] != "voter_id" || &header[1] != "record_id" {
        return Err(parse_err(
            1,
            "header must start with voter_id,record_id followed by x_* and z_* columns".into(),
        ));
    }
    let features = header.len() - 2;
    if features % 2 != 0 {
        return Err(parse_err(1, "header must have as many z_* columns as x_* columns".into()));
    }
    let d = features / 2;
    let expected = corpus_header(d);
    if let Some(k) = (0..header.len()).find(|&k| header[k] != expected[k]) {
        return Err(parse_err(
            1,
            format!("missing column {}: found '{}'", expected[k], &header[k]),
        ));
    }

    let mut voters: Vec<VoterDataset> = Vec::new();
    let mut index: HashMap<u64, usize> = HashMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != header.len() {
            return Err(parse_err(
                line,
                format!(
                    "row has {} fields, header implies {} (d = {d})",
                    rec.len(),
                    header.len()
                ),
            ));
        }
        let voter_id: u64 = rec[0]
            .parse()
            .map_err(|_| parse_err(line, format!("voter_id '{}' is not a non-negative integer", &rec[0])))?;
        rec[1]
            .parse::<u64>()
            .map_err(|_| parse_err(line, format!("record_id '{}' is not a non-negative integer", &rec[1])))?;
        let mut values = Vec::with_capacity(features);
        for k in 2..rec.len() {
            let v: f64 = rec[k]
                .parse()
                .map_err(|_| parse_err(line, format!("column {} value '{}' is not numeric", &header[k], &rec[k])))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("column {} is not finite", &header[k])));
            }
            values.push(v);
        }
        let rejected = values.split_off(d);
        let comparison = PairwiseComparison {
            chosen: FeatureVector(values),
            rejected: FeatureVector(rejected),
        };
        let slot = *index.entry(voter_id).or_insert_with(|| {
            voters.push(VoterDataset {
                voter_id,
                records: Vec::new(),
            });
            voters.len() - 1
        });
        voters[slot].records.push(comparison);
    }
    if voters.is_empty() {
        return Err(Error::Empty(format!("{label}: corpus has no data rows")));
    }
    let corpus = Corpus {
        voters,
        d,
        preprocessed: false,
    };
    validate_corpus(&corpus)?;
    Ok(corpus)
}

pub fn ingest_csv(path: &Path) -> Result<Corpus> {
    let f = std::fs::File::open(path)?;
    read_corpus(std::io::BufReader::new(f), &path.display().to_string())
}
