//! Field files: little-endian `f64` pairs `(re, im)` in row-major order, plus a
//! JSON sidecar at `<data path>.json` holding `{n, N, L, domain_tag}` and, for
//! spacetime fields, `N_t` and `L_t` (time is the outermost axis).

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Axis, Domain, Field, Grid, Sampled, SpacetimeField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub n: u32,
    #[serde(rename = "N")]
    pub points: usize,
    #[serde(rename = "L")]
    pub extent: f64,
    pub domain_tag: Domain,
    #[serde(rename = "N_t", default, skip_serializing_if = "Option::is_none")]
    pub time_points: Option<usize>,
    #[serde(rename = "L_t", default, skip_serializing_if = "Option::is_none")]
    pub time_extent: Option<f64>,
}

/// A field read from disk.
#[derive(Debug, Clone, PartialEq)]
pub enum StoredField {
    Space(Field),
    Spacetime(SpacetimeField),
}

pub fn sidecar_path(data: &Path) -> PathBuf {
    let mut s = data.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn write_samples(path: &Path, samples: &[Complex64]) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    for v in samples {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn write_sidecar(path: &Path, sidecar: &Sidecar) -> Result<()> {
    let text = serde_json::to_string_pretty(sidecar)?;
    fs::write(sidecar_path(path), text + "\n")?;
    Ok(())
}

pub fn write_field(path: &Path, f: &Field) -> Result<()> {
    let g = f.grid();
    write_samples(path, f.samples())?;
    write_sidecar(
        path,
        &Sidecar {
            n: g.n(),
            points: g.points(),
            extent: g.extent(),
            domain_tag: f.domain(),
            time_points: None,
            time_extent: None,
        },
    )
}

pub fn write_spacetime(path: &Path, f: &SpacetimeField) -> Result<()> {
    let g = f.space();
    write_samples(path, f.samples())?;
    write_sidecar(
        path,
        &Sidecar {
            n: g.n(),
            points: g.points(),
            extent: g.extent(),
            domain_tag: f.domain(),
            time_points: Some(f.time().points()),
            time_extent: Some(f.time().extent()),
        },
    )
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let side = sidecar_path(path);
    let text =
        fs::read_to_string(&side).map_err(|e| Error::Format(format!("cannot read sidecar {}: {e}", side.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("bad sidecar: {e}")))
}

pub fn read_field(path: &Path) -> Result<StoredField> {
    let side = read_sidecar(path)?;
    let grid = Grid::new(side.n, side.points, side.extent).map_err(|e| Error::Format(e.to_string()))?;
    let time = match (side.time_points, side.time_extent) {
        (Some(n), Some(l)) => Some(Axis::new(n, l).map_err(|e| Error::Format(e.to_string()))?),
        (None, None) => None,
        _ => return Err(Error::Format("N_t and L_t must appear together".into())),
    };
    let expected = grid.len() * time.map_or(1, |t| t.points());
    let bytes = fs::read(path)?;
    if bytes.len() != 16 * expected {
        return Err(Error::Format(format!(
            "expected {} bytes for {expected} complex samples, found {}",
            16 * expected,
            bytes.len()
        )));
    }
    let samples: Vec<Complex64> = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    Ok(match time {
        None => StoredField::Space(Field::new(grid, samples, side.domain_tag)?),
        Some(t) => StoredField::Spacetime(SpacetimeField::new(grid, t, samples, side.domain_tag)?),
    })
}

/// CSV of a 1-D slice: `x,re,im` with shortest round-trip floats.
pub fn write_slice_csv(path: &Path, slice: &[(f64, Complex64)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "re", "im"])?;
    for (x, v) in slice {
        w.write_record([format!("{x:?}"), format!("{:?}", v.re), format!("{:?}", v.im)])?;
    }
    w.flush()?;
    Ok(())
}
