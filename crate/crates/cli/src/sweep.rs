//! `sweep`: evaluate one protocol/channel pair over a parameter grid and emit
//! CSV rows comparing the numeric engine with the closed-form reference.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use qsclab::{average_fidelity, eval, FormulaKey, Params, ProtocolId};
use rayon::prelude::*;
use serde::Deserialize;

use crate::channel_spec::ChannelKind;
use crate::format::fmt_sig;
use crate::grid::{Grid, RangeSpec};

/// Fully resolved sweep description: which protocol and channel, one range
/// per channel parameter (canonical order), and where the CSV goes.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub protocol: ProtocolId,
    pub channel: ChannelKind,
    pub params: Vec<(String, RangeSpec)>,
    pub out: Option<PathBuf>,
    pub sequential: bool,
}

/// JSON mirror of [`SweepConfig`]; CLI flags override individual fields and
/// individual parameter ranges.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub protocol: Option<String>,
    pub channel: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, RangeSpec>,
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("invalid config {}", path.display()))
    }
}

pub fn parse_protocol(tag: &str) -> Result<ProtocolId> {
    ProtocolId::parse(tag).ok_or_else(|| {
        let known: Vec<&str> = ProtocolId::ALL.iter().map(|p| p.tag()).collect();
        anyhow!("unknown protocol '{tag}' (expected one of: {})", known.join(", "))
    })
}

impl SweepConfig {
    /// Merge an optional config file with command-line values. CLI wins
    /// field-by-field; `--param` entries override same-named file ranges.
    pub fn resolve(
        config: Option<ConfigFile>,
        protocol: Option<&str>,
        channel: Option<&str>,
        cli_params: &[(String, RangeSpec)],
        out: Option<PathBuf>,
        sequential: bool,
    ) -> Result<SweepConfig> {
        let file = config.unwrap_or_default();

        let protocol = match protocol.or(file.protocol.as_deref()) {
            Some(tag) => parse_protocol(tag)?,
            None => bail!("no protocol given (use --protocol or a config file)"),
        };
        let channel = match channel.or(file.channel.as_deref()) {
            Some(tag) => ChannelKind::parse(tag)?,
            None => bail!("no channel given (use --channel or a config file)"),
        };

        let mut ranges = file.params;
        for (name, spec) in cli_params {
            ranges.insert(name.clone(), *spec);
        }

        let names = channel.param_names(protocol.spec().n_slots);
        let mut params = Vec::with_capacity(names.len());
        for name in &names {
            let spec = ranges.remove(*name).ok_or_else(|| {
                anyhow!(
                    "missing range for parameter '{name}' (channel {} needs: {})",
                    channel.tag(),
                    names.join(", ")
                )
            })?;
            spec.values()?;
            params.push((name.to_string(), spec));
        }
        if let Some(stray) = ranges.keys().next() {
            bail!(
                "parameter '{stray}' does not apply to channel {} (expected: {})",
                channel.tag(),
                names.join(", ")
            );
        }

        Ok(SweepConfig {
            protocol,
            channel,
            params,
            out: out.or(file.out),
            sequential,
        })
    }

    pub fn grid(&self) -> Result<Grid> {
        let names = self.params.iter().map(|(n, _)| n.clone()).collect();
        let axes = self
            .params
            .iter()
            .map(|(_, spec)| spec.values())
            .collect::<Result<Vec<_>>>()?;
        Grid::new(names, axes)
    }
}

/// One evaluated grid point. The analytic value is optional so callers can
/// also record engine-only curves.
#[derive(Clone, Debug)]
pub struct FidelityRecord {
    pub protocol: ProtocolId,
    pub channel: ChannelKind,
    pub values: Vec<(String, f64)>,
    pub fidelity_numeric: f64,
    pub fidelity_analytic: Option<f64>,
    pub abs_diff: Option<f64>,
}

fn eval_point(
    protocol: ProtocolId,
    channel: ChannelKind,
    names: &[String],
    point: Vec<f64>,
) -> Result<FidelityRecord> {
    let params: Params = names
        .iter()
        .cloned()
        .zip(point.iter().copied())
        .collect();
    let spec = protocol.spec();
    let noise = channel.noise(&params, spec.n_slots)?;
    let numeric = average_fidelity(&spec, &noise)?;
    let analytic = eval(
        FormulaKey::new(protocol.into(), channel.family()),
        &channel.oracle_params(&params)?,
    )?;
    Ok(FidelityRecord {
        protocol,
        channel,
        values: names.iter().cloned().zip(point).collect(),
        fidelity_numeric: numeric,
        fidelity_analytic: Some(analytic),
        abs_diff: Some((numeric - analytic).abs()),
    })
}

/// Evaluate every grid point, in grid order. Parallel by default; the
/// sequential path exists so output equality between the two is testable.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<FidelityRecord>> {
    let grid = cfg.grid()?;
    let names: Vec<String> = grid.names.clone();
    let indices: Vec<usize> = (0..grid.len()).collect();
    if cfg.sequential {
        indices
            .into_iter()
            .map(|i| eval_point(cfg.protocol, cfg.channel, &names, grid.point(i)))
            .collect()
    } else {
        indices
            .into_par_iter()
            .map(|i| eval_point(cfg.protocol, cfg.channel, &names, grid.point(i)))
            .collect()
    }
}

pub fn csv_header(param_names: &[String]) -> String {
    let mut cols = vec!["protocol".to_owned(), "channel".to_owned()];
    cols.extend(param_names.iter().cloned());
    cols.push("fidelity_numeric".to_owned());
    cols.push("fidelity_analytic".to_owned());
    cols.push("abs_diff".to_owned());
    cols.join(",")
}

pub fn csv_row(rec: &FidelityRecord) -> String {
    let mut cols = vec![rec.protocol.tag().to_owned(), rec.channel.tag().to_owned()];
    cols.extend(rec.values.iter().map(|(_, v)| fmt_sig(*v)));
    cols.push(fmt_sig(rec.fidelity_numeric));
    cols.push(rec.fidelity_analytic.map(fmt_sig).unwrap_or_default());
    cols.push(rec.abs_diff.map(fmt_sig).unwrap_or_default());
    cols.join(",")
}

pub fn render_csv(param_names: &[String], records: &[FidelityRecord]) -> String {
    let mut out = String::new();
    out.push_str(&csv_header(param_names));
    out.push('\n');
    for rec in records {
        out.push_str(&csv_row(rec));
        out.push('\n');
    }
    out
}

/// Write to the configured path, or stdout when none is set.
pub fn emit(out: Option<&Path>, csv: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, csv)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

pub fn cmd_sweep(cfg: &SweepConfig) -> Result<()> {
    let records = run_sweep(cfg)?;
    let names: Vec<String> = cfg.params.iter().map(|(n, _)| n.clone()).collect();
    emit(cfg.out.as_deref(), &render_csv(&names, &records))
}
