use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ResultRow;
use crate::error::{Error, Result};

/// Writes `rows` as CSV with a fixed header. Reals use the shortest decimal
/// that round-trips. Fails without touching the filesystem when `rows` is empty.
pub fn emit_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }
    let mut sink = CsvSink::new(path);
    sink.write(rows)?;
    sink.finish()
}

/// Parses a CSV written by [`emit_csv`].
pub fn parse_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_rows(file)
}

pub(crate) fn read_rows(reader: impl std::io::Read) -> Result<Vec<ResultRow>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(Error::from)
}

/// Incremental CSV writer; the file is created on the first non-empty write.
pub struct CsvSink {
    path: PathBuf,
    writer: Option<csv::Writer<File>>,
}

impl CsvSink {
    pub fn new(path: impl AsRef<Path>) -> Self {
        CsvSink {
            path: path.as_ref().to_path_buf(),
            writer: None,
        }
    }

    /// Appends rows and flushes them to disk.
    pub fn write(&mut self, rows: &[ResultRow]) -> Result<()> {
        if rows.is_empty() {
            return Ok(());
        }
        if self.writer.is_none() {
            let file = File::create(&self.path).map_err(|e| Error::io(&self.path, e))?;
            self.writer = Some(csv::Writer::from_writer(file));
        }
        let writer = self.writer.as_mut().expect("opened above");
        for row in rows {
            writer.serialize(row)?;
        }
        writer.flush().map_err(|e| Error::io(&self.path, e))
    }

    pub fn finish(self) -> Result<()> {
        match self.writer {
            Some(mut w) => w.flush().map_err(|e| Error::io(&self.path, e)),
            None => Err(Error::EmptyRows),
        }
    }
}

/// Serializes rows as CSV text.
pub fn csv_string(rows: &[ResultRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Which reuse figure the plot data feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    /// One series per `K`, `x = ln N`, `y = E`.
    ReuseVsLogN,
    /// One series per `N`, `x = K`, `y = E`.
    ReuseVsK,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    /// `"K"` or `"N"`.
    pub key: String,
    pub value: f64,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotData {
    pub figure: Figure,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl PlotData {
    /// Groups the rows that carry an `e_value` into one series per curve.
    pub fn from_rows(rows: &[ResultRow], figure: Figure) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyRows);
        }
        let mut series: Vec<Series> = Vec::new();
        for row in rows {
            let Some(e) = row.e_value else { continue };
            let (key, value, point) = match figure {
                Figure::ReuseVsLogN => ("K", row.k as f64, (row.n.ln(), e)),
                Figure::ReuseVsK => ("N", row.n, (row.k as f64, e)),
            };
            match series.iter_mut().find(|s| s.value == value) {
                Some(s) => s.points.push(point),
                None => series.push(Series {
                    key: key.to_string(),
                    value,
                    points: vec![point],
                }),
            }
        }
        series.sort_by(|a, b| a.value.total_cmp(&b.value));
        for s in &mut series {
            s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        let x_label = match figure {
            Figure::ReuseVsLogN => "ln N",
            Figure::ReuseVsK => "K",
        };
        Ok(PlotData {
            figure,
            x_label: x_label.to_string(),
            y_label: "E(K, N)".to_string(),
            series,
        })
    }
}

/// Writes plot data as JSON. Fails without creating a file when `rows` is empty.
pub fn emit_plotdata(rows: &[ResultRow], figure: Figure, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let data = PlotData::from_rows(rows, figure)?;
    let mut text = serde_json::to_string_pretty(&data)?;
    text.push('\n');
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(text.as_bytes())
        .map_err(|e| Error::io(path, e))
}
