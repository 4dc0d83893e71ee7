//! Parameter range specifications and cartesian grids.
//!
//! A range is given on the command line as `name=value`,
//! `name=start:stop:step`, or `name=start:stop:COUNTn` (inclusive endpoints,
//! `COUNT` grid points), and in a JSON config as a bare number,
//! `{"start": .., "stop": .., "step": ..}`, or
//! `{"start": .., "stop": .., "count": ..}`.

use anyhow::{bail, Context, Result};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum RangeSpec {
    Value(f64),
    Stepped { start: f64, stop: f64, step: f64 },
    Counted { start: f64, stop: f64, count: usize },
}

impl RangeSpec {
    /// Expand to concrete grid values. Always non-empty on success.
    pub fn values(&self) -> Result<Vec<f64>> {
        match *self {
            RangeSpec::Value(v) => Ok(vec![v]),
            RangeSpec::Stepped { start, stop, step } => {
                if !step.is_finite() || step <= 0.0 {
                    bail!("range step must be > 0, got {step}");
                }
                if stop < start {
                    bail!("range stop {stop} is below start {start}");
                }
                // Inclusive endpoints with a small slack so that e.g.
                // 0:1:0.05 lands exactly on 21 points.
                let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
                Ok((0..n).map(|i| start + i as f64 * step).collect())
            }
            RangeSpec::Counted { start, stop, count } => {
                if count == 0 {
                    bail!("range count must be >= 1");
                }
                if count == 1 {
                    if start != stop {
                        bail!("a 1-point range needs start == stop, got {start}:{stop}");
                    }
                    return Ok(vec![start]);
                }
                if stop < start {
                    bail!("range stop {stop} is below start {start}");
                }
                let h = (stop - start) / (count - 1) as f64;
                Ok((0..count).map(|i| start + i as f64 * h).collect())
            }
        }
    }
}

/// Parse one `--param` argument.
pub fn parse_param(s: &str) -> Result<(String, RangeSpec)> {
    let (name, rest) = s
        .split_once('=')
        .with_context(|| format!("expected name=range, got '{s}'"))?;
    if name.is_empty() {
        bail!("empty parameter name in '{s}'");
    }
    let parts: Vec<&str> = rest.split(':').collect();
    let spec = match parts.as_slice() {
        [v] => RangeSpec::Value(
            v.parse()
                .with_context(|| format!("invalid number '{v}' for parameter {name}"))?,
        ),
        [start, stop, last] => {
            let start: f64 = start
                .parse()
                .with_context(|| format!("invalid range start '{start}' for {name}"))?;
            let stop: f64 = stop
                .parse()
                .with_context(|| format!("invalid range stop '{stop}' for {name}"))?;
            if let Some(count) = last.strip_suffix('n') {
                RangeSpec::Counted {
                    start,
                    stop,
                    count: count
                        .parse()
                        .with_context(|| format!("invalid point count '{last}' for {name}"))?,
                }
            } else {
                RangeSpec::Stepped {
                    start,
                    stop,
                    step: last
                        .parse()
                        .with_context(|| format!("invalid range step '{last}' for {name}"))?,
                }
            }
        }
        _ => bail!("range for {name} must be 'value' or 'start:stop:step' or 'start:stop:COUNTn'"),
    };
    spec.values()?; // reject impossible ranges at parse time
    Ok((name.to_owned(), spec))
}

/// Cartesian product over named axes; the **last axis varies fastest**.
#[derive(Clone, Debug)]
pub struct Grid {
    pub names: Vec<String>,
    pub axes: Vec<Vec<f64>>,
}

impl Grid {
    pub fn new(names: Vec<String>, axes: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != axes.len() {
            bail!("grid axis count mismatch");
        }
        if axes.iter().any(|a| a.is_empty()) {
            bail!("grid axes must be non-empty");
        }
        Ok(Grid { names, axes })
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Values at flat index `idx`, in axis order.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        let mut rem = idx;
        let mut out = vec![0.0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            out[k] = axis[rem % axis.len()];
            rem /= axis.len();
        }
        out
    }
}
