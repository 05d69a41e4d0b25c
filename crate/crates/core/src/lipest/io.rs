//! File formats: a JSON header plus CSV samples for grid functions, and CSV
//! rows for radius sweeps. Floats use the shortest representation that
//! parses back to the same value.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lipest::estimate::LipEstimate;
use crate::lipest::grid::GridFunction;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridHeader<T> {
    pub dim: usize,
    pub origin: Vec<T>,
    pub spacing: Vec<T>,
    pub shape: Vec<usize>,
    /// Largest width of the value brackets, when samples are bracketed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket_width: Option<T>,
}

impl<T: Real> GridHeader<T> {
    pub fn of(f: &GridFunction<T>, bracket_width: Option<T>) -> Self {
        Self {
            dim: f.dim(),
            origin: f.origin().to_vec(),
            spacing: f.spacing().to_vec(),
            shape: f.shape().to_vec(),
            bracket_width,
        }
    }
}

/// Writes samples as CSV with columns `i[,j],x[,y],value`.
pub fn write_samples<T: Real, W: Write>(f: &GridFunction<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if f.dim() == 1 {
        w.write_record(["i", "x", "value"])?;
    } else {
        w.write_record(["i", "j", "x", "y", "value"])?;
    }
    for k in 0..f.len() {
        let mut row: Vec<String> = f.grid_point(k).iter().map(|i| i.to_string()).collect();
        row.extend(f.coords(k).iter().map(|c| c.to_string()));
        row.push(f.value(k).to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads samples written by [`write_samples`], in file order.
pub fn read_samples<T: Real, R: Read>(header: &GridHeader<T>, input: R) -> Result<GridFunction<T>> {
    let mut r = csv::Reader::from_reader(input);
    let col = r
        .headers()?
        .iter()
        .position(|h| h == "value")
        .ok_or_else(|| Error::InvalidGrid("missing `value` column".into()))?;
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = rec.get(col).unwrap_or("");
        let v: f64 = field
            .trim()
            .parse()
            .map_err(|_| Error::InvalidGrid(format!("bad sample `{field}`")))?;
        values.push(T::lit(v));
    }
    GridFunction::from_parts(
        header.origin.clone(),
        header.spacing.clone(),
        header.shape.clone(),
        values,
    )
}

/// Writes `<stem>.json` and `<stem>.csv` into `dir`.
pub fn save_grid<T: Real>(
    f: &GridFunction<T>,
    bracket_width: Option<T>,
    dir: &Path,
    stem: &str,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    let header = GridHeader::of(f, bracket_width);
    fs::write(
        dir.join(format!("{stem}.json")),
        serde_json::to_string_pretty(&header)? + "\n",
    )?;
    let file = fs::File::create(dir.join(format!("{stem}.csv")))?;
    write_samples(f, std::io::BufWriter::new(file))
}

/// Loads a grid saved by [`save_grid`].
pub fn load_grid<T: Real>(dir: &Path, stem: &str) -> Result<(GridHeader<T>, GridFunction<T>)> {
    let header: GridHeader<T> =
        serde_json::from_str(&fs::read_to_string(dir.join(format!("{stem}.json")))?)?;
    let file = fs::File::open(dir.join(format!("{stem}.csv")))?;
    let f = read_samples(&header, std::io::BufReader::new(file))?;
    Ok((header, f))
}

fn point_label(point: &[usize]) -> String {
    point
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(":")
}

/// One row per (point, radius): `point,r,llip,biglip,littlelip`, with 2D
/// points written as `i:j`.
pub fn write_estimates<'a, T, W, I>(estimates: I, out: W) -> Result<()>
where
    T: Real,
    W: Write,
    I: IntoIterator<Item = &'a LipEstimate<T>>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["point", "r", "llip", "biglip", "littlelip"])?;
    for e in estimates {
        let label = point_label(&e.point);
        for k in 0..e.radii.len() {
            w.write_record([
                label.clone(),
                e.radii[k].to_string(),
                e.llip_at_r[k].to_string(),
                e.big_lip_at_r[k].to_string(),
                e.little_lip_at_r[k].to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
