//! Scenario-driven front end: loads a scenario, runs one command and writes
//! its artifacts.

pub mod output;

use clap::{Parser, ValueEnum};
use output::{csv, to_json, write_atomic};
use rayon::prelude::*;
use serde_json::Value;
use std::path::{Path, PathBuf};
use susy_channels::onechannel::OneChannelModel;
use susy_channels::oracle::{verify_model, OracleOptions};
use susy_channels::scattering::{diagnostics, mixing_closed_form, spectrum, sweep, MixingCase, MixingInputs};
use susy_channels::scenario::{preset, preset_names, Output, Scenario};
use susy_channels::{Error, Result};

pub const THREADS_VAR: &str = "SUSY_CHANNELS_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// potential.csv: transformed potential and coupling ratio on the r-grid
    Potential,
    /// smatrix.csv: eigenphases, mixing angle and S on the k-grid
    Smatrix,
    /// spectrum.json: zeros and poles of the Jost determinant
    Spectrum,
    /// verify.json: numerical integration against the analytic S
    Verify,
    /// diagnose.json: triviality and low-energy checks
    Diagnose,
}

#[derive(Debug, Parser)]
#[command(name = "susy-channels", version, about = "Exactly solvable coupled-channel scattering models")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Scenario JSON file or preset name
    #[arg(long)]
    pub scenario: String,
    /// Output directory, created if missing
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub override_physics_checks: bool,
    /// Oracle matching radii
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
}

/// What a successful run produced.
#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// False only for a verification that found discrepancies.
    pub passed: bool,
}

/// Preset name or path; the command-line switches are applied before validation.
pub fn load_scenario(source: &str, override_physics: bool, radii: Option<&[f64]>) -> Result<Scenario> {
    let text = match preset(source) {
        Some(s) => s.to_json(),
        None => {
            let path = Path::new(source);
            if !path.exists() {
                return Err(Error::Scenario(format!(
                    "'{source}' is neither a readable file nor a preset ({})",
                    preset_names().join(", ")
                )));
            }
            std::fs::read_to_string(path).map_err(|e| Error::Io(format!("reading {source}: {e}")))?
        }
    };
    if !override_physics && radii.is_none() {
        return Scenario::from_json(&text);
    }
    let mut v: Value = serde_json::from_str(&text).map_err(|e| Error::Scenario(format!("invalid JSON: {e}")))?;
    let obj = v.as_object_mut().ok_or_else(|| Error::Scenario("scenario must be a JSON object".into()))?;
    if override_physics {
        obj.insert("override_physics_checks".into(), Value::Bool(true));
    }
    if let Some(r) = radii {
        let oracle = obj.entry("oracle").or_insert_with(|| Value::Object(Default::default()));
        let oracle = oracle.as_object_mut().ok_or_else(|| Error::Scenario("oracle: expected an object".into()))?;
        oracle.insert("radii".into(), serde_json::to_value(r).expect("floats serialize"));
    }
    Scenario::from_json(&v.to_string())
}

/// Cap rayon's global pool from the environment.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Scenario(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")))?;
    // a pool built earlier in the same process wins; that is fine
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let scenario = load_scenario(&cli.scenario, cli.override_physics_checks, cli.radii.as_deref())?;
    execute(cli.command, &scenario, &cli.out)
}

pub fn execute(command: Command, scenario: &Scenario, out: &Path) -> Result<Outcome> {
    let mut files = Vec::new();
    let mut passed = true;
    match command {
        Command::Potential => {
            for (name, text) in potential(scenario)? {
                files.push(write_atomic(out, name, &text)?);
            }
        }
        Command::Smatrix => {
            for (name, text) in smatrix(scenario)? {
                files.push(write_atomic(out, name, &text)?);
            }
        }
        Command::Spectrum => {
            let cat = spectrum(&scenario.algebraic()?, None);
            files.push(write_atomic(out, "spectrum.json", &to_json(&cat)?)?);
        }
        Command::Verify => {
            let model = scenario.model()?;
            let opts = OracleOptions::from(&scenario.oracle);
            let report = verify_model(&model, &scenario.oracle.k_grid.points(), &opts);
            passed = report.passed;
            files.push(write_atomic(out, "verify.json", &to_json(&report)?)?);
        }
        Command::Diagnose => {
            let model = scenario.model()?;
            let d = diagnostics(&model, &scenario.k_grid.points(), &scenario.r_grid.points())?;
            files.push(write_atomic(out, "diagnose.json", &to_json(&d)?)?);
        }
    }
    Ok(Outcome { files, passed })
}

fn wants(scenario: &Scenario, o: Output) -> bool {
    scenario.outputs.contains(&o)
}

fn potential(scenario: &Scenario) -> Result<Vec<(&'static str, String)>> {
    let model = scenario.model()?;
    let rs = scenario.r_grid.points();
    let rows: Vec<Vec<f64>> = rs
        .par_iter()
        .map(|&r| {
            let v = model.transformed_potential(r)?;
            Ok(vec![r, v[(0, 0)], v[(0, 1)], v[(1, 1)], model.coupling_ratio(r)?])
        })
        .collect::<Result<_>>()?;
    let mut out = vec![("potential.csv", csv(&["r", "V11", "V12", "V22", "sigma"], &rows))];
    if wants(scenario, Output::DiagonalPotential) {
        let rows: Vec<Vec<f64>> = rs
            .iter()
            .map(|&r| {
                let d = model.diagonal_potential(r);
                vec![r, d[(0, 0)], d[(1, 1)]]
            })
            .collect();
        out.push((Output::DiagonalPotential.file_name(), csv(&["r", "V1", "V2"], &rows)));
    }
    Ok(out)
}

fn smatrix(scenario: &Scenario) -> Result<Vec<(&'static str, String)>> {
    let alg = scenario.algebraic()?;
    if alg.n() != 2 {
        return Err(Error::Scenario(format!("smatrix tables need two channels, '{}' has {}", scenario.name, alg.n())));
    }
    let ks = scenario.k_grid.points();
    let pts = sweep(&alg, &ks)?;
    let rows: Vec<Vec<f64>> = pts
        .iter()
        .map(|p| {
            let s = &p.s;
            vec![
                p.k,
                p.delta[0],
                p.delta[1],
                p.epsilon,
                s[(0, 0)].re,
                s[(0, 0)].im,
                s[(0, 1)].re,
                s[(0, 1)].im,
                s[(1, 1)].re,
                s[(1, 1)].im,
            ]
        })
        .collect();
    let header = ["k", "delta1", "delta2", "epsilon", "ReS11", "ImS11", "ReS12", "ImS12", "ReS22", "ImS22"];
    let mut out = vec![("smatrix.csv", csv(&header, &rows))];
    let need_channels = wants(scenario, Output::ClosedFormMixing) || wants(scenario, Output::DiagonalPhases);
    if !need_channels {
        return Ok(out);
    }
    let ch: Vec<OneChannelModel> = scenario.channel_models()?;
    let phases = |k: f64| [ch[0].phase_shift(k), ch[1].phase_shift(k)];
    if wants(scenario, Output::ClosedFormMixing) {
        let params = scenario.pair_params()?;
        let l = [ch[0].l(), ch[1].l()];
        let case = MixingCase::of(l);
        let rows: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| {
                let d = phases(p.k);
                let inputs = MixingInputs { l, kappa: params.kappa, alpha: params.alpha(), delta_diff: d[1] - d[0] };
                let t = mixing_closed_form(case, &inputs, p.k)?;
                Ok(vec![p.k, p.epsilon, t.value(), t.distance(p.epsilon)])
            })
            .collect::<Result<_>>()?;
        out.push((Output::ClosedFormMixing.file_name(), csv(&["k", "epsilon", "tan2epsilon_closed_form", "distance"], &rows)));
    }
    if wants(scenario, Output::DiagonalPhases) {
        let rows: Vec<Vec<f64>> = ks
            .iter()
            .map(|&k| {
                let d = phases(k);
                vec![k, d[0], d[1]]
            })
            .collect();
        out.push((Output::DiagonalPhases.file_name(), csv(&["k", "delta_d1", "delta_d2"], &rows)));
    }
    Ok(out)
}

/// Machine-readable error for stderr.
pub fn error_json(e: &Error) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("kind".into(), Value::String(e.kind().into()));
    obj.insert("message".into(), Value::String(e.to_string()));
    if let Error::Validation(items) = e {
        obj.insert("problems".into(), Value::Array(items.iter().cloned().map(Value::String).collect()));
    }
    let mut root = serde_json::Map::new();
    root.insert("error".into(), Value::Object(obj));
    Value::Object(root).to_string()
}
