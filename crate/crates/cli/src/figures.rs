//! `figure`: CSV data behind the survey-style figure set.
//!
//! Panel letters per protocol pair: (a) amplitude damping, (b) phase damping,
//! (c) collective rotation, (d) collective dephasing, (e) the four Pauli
//! variants, (f) damping-family time curves from physical bath rates.
//! Contour ids (3a, 3c, 6) emit dense two-angle fidelity grids.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use qsclab::{average_fidelity, sgad_rates, Error as CoreError, Params, ProtocolId, SgadPhysical};
use rayon::prelude::*;

use crate::channel_spec::ChannelKind;
use crate::format::fmt_sig;
use crate::grid::RangeSpec;
use crate::sweep::emit;

/// Points per one-dimensional curve.
pub const CURVE_POINTS: usize = 201;
/// Points per contour axis.
pub const CONTOUR_POINTS: usize = 61;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + i as f64 * h).collect()
}

/// Protocol pair shown in each curve figure.
pub fn pair_for(fig: char) -> Option<[ProtocolId; 2]> {
    match fig {
        '1' => Some([ProtocolId::B92, ProtocolId::Bbm]),
        '2' => Some([ProtocolId::QkaSingle, ProtocolId::QkaEntangled]),
        '4' => Some([ProtocolId::Lm05, ProtocolId::PingPong]),
        '5' => Some([ProtocolId::QdSingle, ProtocolId::QdBaAn]),
        _ => None,
    }
}

fn engine_fidelity(id: ProtocolId, kind: ChannelKind, params: &Params) -> Result<f64> {
    let spec = id.spec();
    let noise = kind.noise(params, spec.n_slots)?;
    Ok(average_fidelity(&spec, &noise)?)
}

/// Named fidelity column: maps an x value to a cell, `None` rendering blank.
type Column = (String, Box<dyn Fn(f64) -> Result<Option<f64>> + Sync>);

/// One x-column plus one engine-fidelity column per (protocol, channel
/// binding). `None` cells render blank.
fn render_curves(x_name: &str, xs: &[f64], columns: &[Column]) -> Result<String> {
    let header: Vec<&str> = std::iter::once(x_name)
        .chain(columns.iter().map(|(name, _)| name.as_str()))
        .collect();
    let rows: Vec<String> = xs
        .par_iter()
        .map(|&x| -> Result<String> {
            let mut cells = vec![fmt_sig(x)];
            for (_, f) in columns {
                cells.push(f(x)?.map(fmt_sig).unwrap_or_default());
            }
            Ok(cells.join(","))
        })
        .collect::<Result<_>>()?;
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

fn single_channel_columns(pair: [ProtocolId; 2], kind: ChannelKind) -> Vec<Column> {
    pair.into_iter()
        .map(|id| -> Column {
            let f = move |x: f64| -> Result<Option<f64>> {
                let names = kind.param_names(id.spec().n_slots);
                // Curve figures drive every slot with the same value.
                let params: Params = names
                    .iter()
                    .map(|n| (n.to_string(), x))
                    .collect();
                Ok(Some(engine_fidelity(id, kind, &params)?))
            };
            (id.tag().to_owned(), Box::new(f))
        })
        .collect()
}

fn pauli_variant_columns(pair: [ProtocolId; 2]) -> Vec<Column> {
    let variants = [
        (ChannelKind::BitFlip, "bit_flip"),
        (ChannelKind::PhaseFlip, "phase_flip"),
        (ChannelKind::BitPhaseFlip, "bit_phase_flip"),
        (ChannelKind::Depolarizing, "depolarizing"),
    ];
    let mut cols = Vec::new();
    for id in pair {
        for (kind, tag) in variants {
            let f = move |x: f64| -> Result<Option<f64>> {
                let params = Params::new().with("pprime", x);
                Ok(Some(engine_fidelity(id, kind, &params)?))
            };
            cols.push((format!("{}_{tag}", id.tag()), Box::new(f) as _));
        }
    }
    cols
}

/// Physical bindings for the time panels; every field is user-supplied.
#[derive(Clone, Copy, Debug)]
pub struct TimeBinding {
    pub x: f64,
    pub r: f64,
    pub p: f64,
    pub q: f64,
    pub phi: f64,
}

#[derive(Clone, Copy)]
enum TimeCurve {
    /// Zero-temperature damping, `eta = 1 - exp(-t)`.
    Ad,
    /// Thermal bath without squeezing (rates at r = 0).
    Gad,
    /// Squeezed thermal bath (rates at the bound r).
    Sgad,
}

impl TimeCurve {
    fn tag(self) -> &'static str {
        match self {
            TimeCurve::Ad => "ad",
            TimeCurve::Gad => "gad",
            TimeCurve::Sgad => "sgad",
        }
    }
}

/// Fidelity at dimensionless time `t`, or `None` where the fixed-(p, Q)
/// rate decomposition is unphysical (reported as a blank cell, never
/// clamped into a different channel).
fn time_value(id: ProtocolId, curve: TimeCurve, b: TimeBinding, t: f64) -> Result<Option<f64>> {
    let params = match curve {
        TimeCurve::Ad => Params::new().with("eta", 1.0 - (-t).exp()),
        TimeCurve::Gad | TimeCurve::Sgad => {
            let r = match curve {
                TimeCurve::Gad => 0.0,
                _ => b.r,
            };
            let ph = SgadPhysical::new(1.0, t, r, b.phi, b.x, b.p)?;
            let (lambda, mu, nu) = match sgad_rates(&ph) {
                Ok(rates) => rates,
                Err(CoreError::RateOutOfRange { .. }) => return Ok(None),
                Err(e) => return Err(e.into()),
            };
            Params::new()
                .with("lambda", lambda)
                .with("mu", mu)
                .with("nu", nu)
                .with("Q", b.q)
                .with("Phi", b.phi)
        }
    };
    let kind = match curve {
        TimeCurve::Ad => ChannelKind::Ad,
        _ => ChannelKind::Sgad,
    };
    Ok(Some(engine_fidelity(id, kind, &params)?))
}

fn time_panel(pair: [ProtocolId; 2], params: &[(String, RangeSpec)]) -> Result<String> {
    let mut map: std::collections::BTreeMap<&str, RangeSpec> =
        params.iter().map(|(n, s)| (n.as_str(), *s)).collect();
    let mut scalar = |name: &str| -> Result<f64> {
        let spec = map.remove(name).with_context(|| {
            format!("time panels need explicit bindings: --param {name}=VALUE (plus a t range)")
        })?;
        let vals = spec.values()?;
        if vals.len() != 1 {
            bail!("binding '{name}' must be a single value for time panels");
        }
        Ok(vals[0])
    };
    let binding = TimeBinding {
        x: scalar("x")?,
        r: scalar("r")?,
        p: scalar("p")?,
        q: scalar("Q")?,
        phi: scalar("Phi")?,
    };
    let ts = map
        .remove("t")
        .context("time panels need a time range: --param t=START:STOP:STEP")?
        .values()?;
    if let Some(stray) = map.keys().next() {
        bail!("parameter '{stray}' does not apply to time panels (expected: x, r, p, Q, Phi, t)");
    }

    let mut columns: Vec<Column> = Vec::new();
    for id in pair {
        for curve in [TimeCurve::Ad, TimeCurve::Gad, TimeCurve::Sgad] {
            let f = move |t: f64| time_value(id, curve, binding, t);
            columns.push((format!("{}_{}", id.tag(), curve.tag()), Box::new(f) as _));
        }
    }
    render_curves("t", &ts, &columns)
}

/// Dense two-angle fidelity grid for one protocol/channel pair.
fn contour_csv(id: ProtocolId, kind: ChannelKind) -> Result<String> {
    let names = kind.param_names(2);
    let angles = linspace(0.0, 2.0 * std::f64::consts::PI, CONTOUR_POINTS);
    let points: Vec<(f64, f64)> = angles
        .iter()
        .flat_map(|&a| angles.iter().map(move |&b| (a, b)))
        .collect();
    let rows: Vec<String> = points
        .par_iter()
        .map(|&(a, b)| -> Result<String> {
            let params = Params::new().with(names[0], a).with(names[1], b);
            let fid = engine_fidelity(id, kind, &params)?;
            Ok(format!("{},{},{}", fmt_sig(a), fmt_sig(b), fmt_sig(fid)))
        })
        .collect::<Result<_>>()?;
    let mut out = format!("{},{},fidelity\n", names[0], names[1]);
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

/// Stem for multi-file figures: `--out dir/name.csv` → `dir/name`.
fn stem_of(out: Option<&Path>, id: &str) -> PathBuf {
    match out {
        Some(p) => p.with_extension(""),
        None => PathBuf::from(format!("figure_{id}")),
    }
}

pub fn cmd_figure(id: &str, params: &[(String, RangeSpec)], out: Option<&Path>) -> Result<()> {
    if !params.is_empty() && !id.ends_with('f') {
        bail!("--param only applies to time panels (figure ids ending in 'f')");
    }

    // Contour figures first: they have their own file layout.
    match id {
        "3a" => {
            let csv = contour_csv(ProtocolId::QkaEntangled, ChannelKind::Cr)?;
            return emit(out, &csv);
        }
        "3c" => {
            let csv = contour_csv(ProtocolId::QkaEntangled, ChannelKind::Cd)?;
            return emit(out, &csv);
        }
        "6" => {
            let stem = stem_of(out, id);
            for proto in [ProtocolId::QdSingle, ProtocolId::QdBaAn] {
                for (kind, tag) in [(ChannelKind::Cr, "cr"), (ChannelKind::Cd, "cd")] {
                    let csv = contour_csv(proto, kind)?;
                    let path = PathBuf::from(format!(
                        "{}_{}_{tag}.csv",
                        stem.display(),
                        proto.tag()
                    ));
                    emit(Some(&path), &csv)?;
                    println!("wrote {}", path.display());
                }
            }
            return Ok(());
        }
        _ => {}
    }

    let mut chars = id.chars();
    let (fig, panel) = (chars.next(), chars.next());
    let (fig, panel) = match (fig, panel, chars.next()) {
        (Some(f), Some(p), None) => (f, p),
        _ => bail!("unknown figure id '{id}'"),
    };
    let pair = pair_for(fig)
        .with_context(|| format!("unknown figure id '{id}' (curve figures: 1, 2, 4, 5)"))?;

    let csv = match panel {
        'a' => render_curves(
            "eta",
            &linspace(0.0, 1.0, CURVE_POINTS),
            &single_channel_columns(pair, ChannelKind::Ad),
        )?,
        'b' => render_curves(
            "eta",
            &linspace(0.0, 1.0, CURVE_POINTS),
            &single_channel_columns(pair, ChannelKind::Pd),
        )?,
        'c' => render_curves(
            "theta",
            &linspace(0.0, 2.0 * std::f64::consts::PI, CURVE_POINTS),
            &single_channel_columns(pair, ChannelKind::Cr),
        )?,
        'd' => render_curves(
            "phi",
            &linspace(0.0, 2.0 * std::f64::consts::PI, CURVE_POINTS),
            &single_channel_columns(pair, ChannelKind::Cd),
        )?,
        'e' => render_curves(
            "pprime",
            &linspace(0.0, 1.0, CURVE_POINTS),
            &pauli_variant_columns(pair),
        )?,
        'f' => time_panel(pair, params)?,
        _ => bail!("unknown figure id '{id}' (panels: a-f)"),
    };

    emit(out, &csv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::parse_param;

    #[test]
    fn curve_pairs_follow_the_figure_layout() {
        assert_eq!(
            pair_for('1').unwrap(),
            [ProtocolId::B92, ProtocolId::Bbm]
        );
        assert_eq!(
            pair_for('4').unwrap(),
            [ProtocolId::Lm05, ProtocolId::PingPong]
        );
        assert!(pair_for('3').is_none());
    }

    #[test]
    fn rotation_curves_for_the_qkd_pair_coincide() {
        let cols = single_channel_columns(pair_for('1').unwrap(), ChannelKind::Cr);
        for theta in [0.0, 0.3, 1.2, 2.9] {
            let a = (cols[0].1)(theta).unwrap().unwrap();
            let b = (cols[1].1)(theta).unwrap().unwrap();
            assert!((a - b).abs() < 1e-12);
            assert!((a - theta.cos().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn contour_grid_attains_unity_at_zero_angles() {
        let csv = contour_csv(ProtocolId::QkaEntangled, ChannelKind::Cr).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "theta1,theta2,fidelity");
        let first = lines.next().unwrap();
        assert_eq!(first, "0,0,1");
        assert_eq!(csv.lines().count(), 1 + CONTOUR_POINTS * CONTOUR_POINTS);
        for line in csv.lines().skip(1) {
            let fid: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
            assert!((-1e-12..=1.0 + 1e-12).contains(&fid));
        }
    }

    #[test]
    fn time_panel_starts_at_unit_fidelity_and_blanks_invalid_rates() {
        let params: Vec<_> = [
            "x=2.0", "r=0.3", "p=0.8", "Q=0.7", "Phi=0.0", "t=0:3:31n",
        ]
        .iter()
        .map(|s| parse_param(s).unwrap())
        .collect();
        let csv = time_panel(pair_for('1').unwrap(), &params).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,b92_ad,b92_gad,b92_sgad,bbm_ad,bbm_gad,bbm_sgad"
        );
        let t0: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(t0, vec!["0", "1", "1", "1", "1", "1", "1"]);
        // The squeezed-bath decomposition at these bindings is unphysical in
        // an early-time window; those cells must be blank, not fabricated.
        let blank_sgad_cells = csv
            .lines()
            .skip(1)
            .filter(|l| l.split(',').nth(3).unwrap().is_empty())
            .count();
        assert!(blank_sgad_cells > 0, "expected an invalid-rate window");
        for line in csv.lines().skip(1) {
            assert!(!line.split(',').nth(1).unwrap().is_empty());
        }
    }

    #[test]
    fn time_panel_requires_explicit_bindings() {
        let params = vec![parse_param("t=0:3:11n").unwrap()];
        let err = time_panel(pair_for('1').unwrap(), &params)
            .unwrap_err()
            .to_string();
        assert!(err.contains("x="), "{err}");
    }
}
