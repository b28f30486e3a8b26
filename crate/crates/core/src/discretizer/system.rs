use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::calibrate::CalibrationReport;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemMeta {
    pub seed: u64,
    pub template_id: String,
    pub x_max: f64,
    pub count: usize,
    pub strictly_increasing: bool,
    /// Chebyshev constant of the source template on `(1, x_max]`. `None`
    /// marks a hand-built system that is complete as given (no primes
    /// beyond the listed ones).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chebyshev_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationReport>,
}

/// A finite sorted multiset of generalized primes `1 < p_1 ≤ p_2 ≤ ... ≤ x_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeSystem {
    primes: Vec<f64>,
    meta: SystemMeta,
}

impl PrimeSystem {
    pub fn new(primes: Vec<f64>, mut meta: SystemMeta) -> Result<Self> {
        if let Some(&p) = primes.iter().find(|&&p| !(p > 1.0) || !p.is_finite()) {
            return Err(Error::Argument(format!("primes must be finite and > 1, got {p}")));
        }
        if primes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Argument("primes must be sorted".into()));
        }
        if let Some(&last) = primes.last() {
            if last > meta.x_max {
                return Err(Error::Argument(format!("prime {last} exceeds x_max = {}", meta.x_max)));
            }
        }
        meta.count = primes.len();
        meta.strictly_increasing = primes.windows(2).all(|w| w[0] < w[1]);
        Ok(Self { primes, meta })
    }

    /// A complete finite system (no primes beyond those listed), queryable
    /// up to `x_max`.
    pub fn finite(mut primes: Vec<f64>, x_max: f64) -> Result<Self> {
        primes.sort_by(f64::total_cmp);
        let meta = SystemMeta {
            seed: 0,
            template_id: "finite".into(),
            x_max,
            count: 0,
            strictly_increasing: false,
            chebyshev_c: None,
            config: None,
            calibration: None,
        };
        Self::new(primes, meta)
    }

    pub fn primes(&self) -> &[f64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn meta(&self) -> &SystemMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut SystemMeta {
        &mut self.meta
    }

    pub fn x_max(&self) -> f64 {
        self.meta.x_max
    }

    /// Whether the listed primes are all there is.
    pub fn is_complete(&self) -> bool {
        self.meta.chebyshev_c.is_none()
    }

    pub fn check_range(&self, x: f64) -> Result<()> {
        if x > self.meta.x_max {
            return Err(Error::Range { x, x_max: self.meta.x_max });
        }
        Ok(())
    }

    /// The `k` smallest primes as a complete system.
    pub fn restrict(&self, k: usize, x_max: f64) -> Result<Self> {
        Self::finite(self.primes[..k.min(self.len())].to_vec(), x_max)
    }

    pub(crate) fn replace_primes(&mut self, primes: Vec<f64>) -> Result<()> {
        let meta = self.meta.clone();
        *self = Self::new(primes, meta)?;
        Ok(())
    }

    /// Header line of JSON metadata, then one prime per line with 17
    /// significant digits (exact round trip).
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header = serde_json::to_string(&self.meta).map_err(std::io::Error::other)?;
        writeln!(w, "{header}")?;
        for p in &self.primes {
            writeln!(w, "{p:.16e}")?;
        }
        w.flush()
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn read<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty file".into()))?
            .map_err(|e| Error::Format(e.to_string()))?;
        let meta: SystemMeta = serde_json::from_str(&header).map_err(|e| Error::Format(format!("header: {e}")))?;
        let mut primes = Vec::with_capacity(meta.count);
        for (i, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Format(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let p: f64 = line.parse().map_err(|_| Error::Format(format!("line {}: not a number: {line:?}", i + 2)))?;
            primes.push(p);
        }
        if primes.len() != meta.count {
            return Err(Error::Format(format!("header says {} primes, file has {}", meta.count, primes.len())));
        }
        let declared = meta.strictly_increasing;
        let ps = Self::new(primes, meta).map_err(|e| Error::Format(e.to_string()))?;
        if declared && !ps.meta.strictly_increasing {
            return Err(Error::Format("header claims strictly increasing primes, file has repeats".into()));
        }
        Ok(ps)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::read(text.as_bytes())
    }
}
