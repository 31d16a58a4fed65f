//! Scenario files: TOML with one section per pipeline stage.
//!
//! ```toml
//! [frame]
//! n_fft = 256
//! n_cp = 32
//! n_symbols = 11
//! n_empty_prefix = 3
//! occupied = "-100..-1, 1..3, 46..100"
//! sc_spacing_hz = 15000.0
//!
//! [channel]
//! model = "cost207_tu"          # or "flat"
//!
//! [nbi]
//! kind = "ideal_tone"           # fm_carson | fm_wideband
//! center = 24.5
//!
//! [impairments]
//! cfo_hz = [-10500.0, 10500.0]
//! nbi_offset_hz = [-14000.0, 14000.0]
//!
//! [grid]
//! snr_db = [0.0, 10.0, 20.0]
//! sir_db = [0.0, inf]
//!
//! [detection]
//! algorithms = ["sc", "nirs"]
//! timing_rule = "argmax"
//!
//! [run]
//! trials = 2000
//! seed = 1
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::impairments::{NbiKind, NbiSpec};
use crate::ofdm::{FrameSpec, SubcarrierMap};
use crate::sync::{Detector, TimingRule};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Option<String>,
    frame: RawFrame,
    #[serde(default)]
    channel: RawChannel,
    nbi: RawNbi,
    impairments: RawImpairments,
    grid: RawGrid,
    #[serde(default)]
    detection: RawDetection,
    run: RawRun,
    sweep: Option<RawSweep>,
    trace: Option<RawTrace>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrame {
    n_fft: usize,
    n_cp: usize,
    n_symbols: usize,
    n_empty_prefix: usize,
    occupied: String,
    sc_spacing_hz: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    model: String,
}

impl Default for RawChannel {
    fn default() -> Self {
        Self {
            model: "cost207_tu".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNbi {
    kind: String,
    center: f64,
    message_hz: Option<f64>,
    deviation_hz: Option<f64>,
    bandwidth_hz: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawImpairments {
    cfo_hz: [f64; 2],
    nbi_offset_hz: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    snr_db: Vec<f64>,
    sir_db: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDetection {
    algorithms: Vec<String>,
    timing_rule: String,
}

impl Default for RawDetection {
    fn default() -> Self {
        Self {
            algorithms: vec!["sc".into(), "nirs".into()],
            timing_rule: "argmax".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    trials: u64,
    seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    bandwidths_hz: Vec<f64>,
    sir_db: Vec<f64>,
    snr_db: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrace {
    snr_db: f64,
    sir_db: f64,
    percentile_trials: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelModel {
    Cost207Tu,
    Flat,
}

/// Uniform distribution over `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    pub lo: f64,
    pub hi: f64,
}

/// Bandwidth sweep with an FM interferer of fixed message frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub bandwidths_hz: Vec<f64>,
    pub sir_db: Vec<f64>,
    pub snr_db: f64,
}

/// Default cell and trial count of the `trace` command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSpec {
    pub snr_db: f64,
    pub sir_db: f64,
    pub percentile_trials: u64,
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub frame: FrameSpec,
    pub sc_spacing_hz: f64,
    pub channel: ChannelModel,
    pub nbi: NbiKind,
    pub nbi_center: f64,
    pub cfo_hz: Uniform,
    pub nbi_offset_hz: Uniform,
    pub snr_grid: Vec<f64>,
    pub sir_grid: Vec<f64>,
    pub algorithms: Vec<Detector>,
    pub timing_rule: TimingRule,
    pub n_trials: u64,
    pub master_seed: u64,
    pub sweep: Option<SweepSpec>,
    pub trace: Option<TraceSpec>,
}

fn field(name: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{name}: {msg}"))
}

impl Scenario {
    /// Parses and validates TOML text. Syntax errors carry the line and
    /// column; validation errors name the offending field.
    pub fn from_toml(text: &str, default_name: &str) -> Result<Self> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::validate(raw, default_name)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
        Self::from_toml(&text, stem).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn validate(raw: RawScenario, default_name: &str) -> Result<Self> {
        let f = &raw.frame;
        if f.n_fft < 4 || !f.n_fft.is_multiple_of(4) {
            return Err(field("frame.n_fft", format!("must be a positive multiple of 4, got {}", f.n_fft)));
        }
        let map = SubcarrierMap::parse(f.n_fft, &f.occupied).map_err(|e| field("frame.occupied", e))?;
        let frame = FrameSpec::new(map, f.n_cp, f.n_symbols, f.n_empty_prefix).map_err(|e| field("frame", e))?;
        if !(f.sc_spacing_hz > 0.0) {
            return Err(field("frame.sc_spacing_hz", "must be positive"));
        }

        let channel = match raw.channel.model.as_str() {
            "cost207_tu" => ChannelModel::Cost207Tu,
            "flat" => ChannelModel::Flat,
            other => return Err(field("channel.model", format!("unknown model '{other}' (cost207_tu or flat)"))),
        };

        let n = &raw.nbi;
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| field(&format!("nbi.{name}"), "required for this kind"));
        let nbi = match n.kind.as_str() {
            "ideal_tone" => NbiKind::IdealTone,
            "fm_carson" => NbiKind::FmCarson {
                message_hz: need(n.message_hz, "message_hz")?,
                deviation_hz: need(n.deviation_hz, "deviation_hz")?,
            },
            "fm_wideband" => NbiKind::FmWideband {
                bandwidth_hz: need(n.bandwidth_hz, "bandwidth_hz")?,
            },
            other => {
                return Err(field(
                    "nbi.kind",
                    format!("unknown kind '{other}' (ideal_tone, fm_carson or fm_wideband)"),
                ))
            }
        };
        nbi.fm_parameters().map_err(|e| field("nbi", e))?;
        if !n.center.is_finite() {
            return Err(field("nbi.center", "must be finite"));
        }

        let bounds = |name: &str, [lo, hi]: [f64; 2]| {
            if lo.is_finite() && hi.is_finite() && lo <= hi {
                Ok(Uniform { lo, hi })
            } else {
                Err(field(name, format!("need finite bounds with lo <= hi, got [{lo}, {hi}]")))
            }
        };
        let cfo_hz = bounds("impairments.cfo_hz", raw.impairments.cfo_hz)?;
        let max_cfo = cfo_hz.lo.abs().max(cfo_hz.hi.abs()) / f.sc_spacing_hz;
        if max_cfo >= 1.0 {
            return Err(field(
                "impairments.cfo_hz",
                "must stay within one subcarrier spacing, the estimator's range",
            ));
        }
        let nbi_offset_hz = bounds("impairments.nbi_offset_hz", raw.impairments.nbi_offset_hz)?;

        let ratio_grid = |name: &str, values: &[f64]| -> Result<Vec<f64>> {
            if values.is_empty() {
                return Err(field(name, "must not be empty"));
            }
            if let Some(v) = values.iter().find(|v| v.is_nan() || **v == f64::NEG_INFINITY) {
                return Err(field(name, format!("values must be finite or inf, got {v}")));
            }
            Ok(values.to_vec())
        };
        let snr_grid = ratio_grid("grid.snr_db", &raw.grid.snr_db)?;
        let sir_grid = ratio_grid("grid.sir_db", &raw.grid.sir_db)?;

        if raw.detection.algorithms.is_empty() {
            return Err(field("detection.algorithms", "must not be empty"));
        }
        let mut algorithms = Vec::new();
        for a in &raw.detection.algorithms {
            let d: Detector = a.parse().map_err(|e| field("detection.algorithms", e))?;
            if !algorithms.contains(&d) {
                algorithms.push(d);
            }
        }
        let timing_rule = raw
            .detection
            .timing_rule
            .parse()
            .map_err(|e| field("detection.timing_rule", e))?;

        if raw.run.trials == 0 {
            return Err(field("run.trials", "must be at least 1"));
        }

        let sweep = raw
            .sweep
            .map(|s| -> Result<SweepSpec> {
                if s.bandwidths_hz.is_empty() {
                    return Err(field("sweep.bandwidths_hz", "must not be empty"));
                }
                for &b in &s.bandwidths_hz {
                    crate::impairments::carson_deviation(b, crate::impairments::WIDEBAND_MESSAGE_HZ)
                        .map_err(|e| field("sweep.bandwidths_hz", e))?;
                }
                Ok(SweepSpec {
                    bandwidths_hz: s.bandwidths_hz,
                    sir_db: ratio_grid("sweep.sir_db", &s.sir_db)?,
                    snr_db: ratio_grid("sweep.snr_db", &[s.snr_db])?[0],
                })
            })
            .transpose()?;

        let trace = raw
            .trace
            .map(|t| -> Result<TraceSpec> {
                ratio_grid("trace.snr_db", &[t.snr_db])?;
                ratio_grid("trace.sir_db", &[t.sir_db])?;
                if t.percentile_trials == 0 {
                    return Err(field("trace.percentile_trials", "must be at least 1"));
                }
                Ok(TraceSpec {
                    snr_db: t.snr_db,
                    sir_db: t.sir_db,
                    percentile_trials: t.percentile_trials,
                })
            })
            .transpose()?;

        Ok(Scenario {
            name: raw.name.unwrap_or_else(|| default_name.to_string()),
            frame,
            sc_spacing_hz: f.sc_spacing_hz,
            channel,
            nbi,
            nbi_center: n.center,
            cfo_hz,
            nbi_offset_hz,
            snr_grid,
            sir_grid,
            algorithms,
            timing_rule,
            n_trials: raw.run.trials,
            master_seed: raw.run.seed,
            sweep,
            trace,
        })
    }

    pub fn sample_rate(&self) -> f64 {
        self.frame.n_fft() as f64 * self.sc_spacing_hz
    }

    /// Interference descriptor with the randomized fields left at zero.
    pub fn nbi_spec(&self) -> NbiSpec {
        NbiSpec {
            kind: self.nbi,
            center: self.nbi_center,
            phase0: 0.0,
            freq_offset_hz: 0.0,
            sc_spacing_hz: self.sc_spacing_hz,
        }
    }
}

/// Scenario files shipped with the crate, by name.
pub const PRESETS: [(&str, &str); 4] = [
    ("fig1_trace", include_str!("../../presets/fig1_trace.toml")),
    ("fig2_practical_nbi", include_str!("../../presets/fig2_practical_nbi.toml")),
    ("fig3_ideal_nbi", include_str!("../../presets/fig3_ideal_nbi.toml")),
    ("fig8_nbi_bandwidth", include_str!("../../presets/fig8_nbi_bandwidth.toml")),
];

pub fn preset(name: &str) -> Result<Scenario> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Config(format!("no preset named '{name}'")))?;
    Scenario::from_toml(text, name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_parses() {
        for (name, _) in PRESETS {
            let s = preset(name).unwrap();
            assert_eq!(s.name, name);
        }
    }

    #[test]
    fn ideal_preset_matches_reference_setup() {
        let s = preset("fig3_ideal_nbi").unwrap();
        assert_eq!(s.frame, FrameSpec::reference());
        assert_eq!(s.frame.map.len(), 158);
        assert_eq!(s.sc_spacing_hz, 15_000.0);
        assert_eq!(s.nbi, NbiKind::IdealTone);
        assert_eq!(s.nbi_center, 24.5);
        assert_eq!(s.cfo_hz, Uniform { lo: -10_500.0, hi: 10_500.0 });
        assert_eq!(s.nbi_offset_hz, Uniform { lo: -14_000.0, hi: 14_000.0 });
        assert_eq!(s.channel, ChannelModel::Cost207Tu);
        assert_eq!(s.sample_rate(), 3.84e6);
    }

    fn base() -> String {
        PRESETS[2].1.to_string()
    }

    #[test]
    fn syntax_errors_report_position() {
        let text = base().replace("n_cp = 32", "n_cp = = 32");
        let err = Scenario::from_toml(&text, "x").unwrap_err().to_string();
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn validation_errors_name_the_field() {
        let cases = [
            ("trials = 2000", "trials = 0", "run.trials"),
            ("kind = \"ideal_tone\"", "kind = \"gsm\"", "nbi.kind"),
            ("timing_rule = \"midpoint90\"", "timing_rule = \"first\"", "detection.timing_rule"),
            ("model = \"cost207_tu\"", "model = \"rician\"", "channel.model"),
            ("cfo_hz = [-10500.0, 10500.0]", "cfo_hz = [-15000.0, 10500.0]", "impairments.cfo_hz"),
            ("occupied = \"-100..-1, 1..3, 46..100\"", "occupied = \"1..oops\"", "frame.occupied"),
        ];
        for (from, to, name) in cases {
            let text = base().replace(from, to);
            assert_ne!(text, base(), "{from}");
            let err = Scenario::from_toml(&text, "x").unwrap_err().to_string();
            assert!(err.contains(name), "{err}");
        }
        let text = base().replace("[run]", "[run]\nbogus = 1");
        assert!(Scenario::from_toml(&text, "x").is_err());
    }

    #[test]
    fn infinite_ratios_are_accepted() {
        let s = preset("fig1_trace").unwrap();
        assert!(s.sir_grid.iter().all(|v| !v.is_nan()));
        assert!(s.snr_grid.contains(&f64::INFINITY));
    }
}
