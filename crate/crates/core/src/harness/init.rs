//! Initial data and boundary states built from a configuration.

use std::path::Path;

use super::config::{InitKind, RunConfig};
use crate::error::{Error, Result};
use crate::reference::{smooth_pulse_init, ContactWave};

/// Conservative initial data `w(x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    SmoothPulse,
    Riemann { left: Vec<f64>, right: Vec<f64>, x0: f64 },
    ContactWave(ContactWave),
    Table { x: Vec<f64>, w: Vec<Vec<f64>> },
}

impl InitialData {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        Ok(match cfg.run.init {
            InitKind::SmoothPulse => InitialData::SmoothPulse,
            InitKind::Riemann => InitialData::Riemann {
                left: cfg.run.left.clone(),
                right: cfg.run.right.clone(),
                x0: cfg.run.x0,
            },
            InitKind::ContactWave => InitialData::ContactWave(ContactWave {
                gamma: cfg.model.gamma.unwrap_or(1.4),
                ..ContactWave::default()
            }),
            InitKind::Table => {
                let path = cfg.run.table.as_ref().expect("validated");
                let (x, w) = read_table(path)?;
                InitialData::Table { x, w }
            }
        })
    }

    /// State at `x`; on a jump of piecewise data the side of `toward` wins.
    pub fn state(&self, x: f64, toward: f64) -> Vec<f64> {
        match self {
            InitialData::SmoothPulse => smooth_pulse_init(x).to_vec(),
            InitialData::Riemann { left, right, x0 } => {
                if x < *x0 || (x == *x0 && toward < x) {
                    left.clone()
                } else {
                    right.clone()
                }
            }
            InitialData::ContactWave(c) => c.state(x, 0.0).to_vec(),
            InitialData::Table { x: xs, w } => interpolate(xs, w, x),
        }
    }
}

fn interpolate(xs: &[f64], w: &[Vec<f64>], x: f64) -> Vec<f64> {
    let j = xs.partition_point(|&xi| xi <= x);
    if j == 0 {
        return w[0].clone();
    }
    if j == xs.len() {
        return w[j - 1].clone();
    }
    let s = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    w[j - 1].iter().zip(&w[j]).map(|(a, b)| a + s * (b - a)).collect()
}

/// Reads `x, w0, w1, ..` rows (with a header) sorted by `x`.
pub fn read_table(path: &Path) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let mut reader = csv::Reader::from_path(path)?;
    let (mut xs, mut ws) = (Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record?;
        let values: Vec<f64> = record
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if values.len() < 2 {
            return Err(Error::Config(format!("{}: rows need x and at least one value", path.display())));
        }
        if let Some(&last) = xs.last() {
            if !(values[0] > last) {
                return Err(Error::Config(format!("{}: x must increase", path.display())));
            }
        }
        xs.push(values[0]);
        ws.push(values[1..].to_vec());
    }
    if xs.is_empty() || ws.iter().any(|w| w.len() != ws[0].len()) {
        return Err(Error::Config(format!("{}: empty or ragged table", path.display())));
    }
    Ok((xs, ws))
}
