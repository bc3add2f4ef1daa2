//! Scenario files: model definitions, grids and artifact selection.

mod presets;

pub use presets::{preset, preset_names};

use crate::coupling::{CouplingParams, GeneralCoupling, TransformedModel};
use crate::error::{Error, Result};
use crate::onechannel::{build_family, Family, OneChannelModel};
use crate::scattering::AlgebraicModel;
use nalgebra::DMatrix;
use crate::oracle::Matching;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Grid {
    pub fn linear(min: f64, max: f64, count: usize) -> Grid {
        Grid { min, max, count, spacing: Spacing::Linear }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::Log => self.min * (self.max / self.min).powf(t),
                }
            })
            .collect()
    }

    fn errors(&self, label: &str) -> Vec<String> {
        let mut errs = Vec::new();
        if !(self.min.is_finite() && self.max.is_finite() && self.min > 0.0) {
            errs.push(format!("{label}: min and max must be finite with min > 0"));
        }
        if self.count == 0 {
            errs.push(format!("{label}: count must be at least 1"));
        }
        if self.count > 1 && self.max <= self.min {
            errs.push(format!("{label}: max must exceed min"));
        }
        errs
    }
}

/// Optional extra artifacts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    /// mixing.csv: extracted and closed-form mixing angle
    ClosedFormMixing,
    /// diagonal_phases.csv: uncoupled channel phase shifts
    DiagonalPhases,
    /// diagonal_potential.csv: uncoupled channel potentials
    DiagonalPotential,
}

impl Output {
    pub fn file_name(self) -> &'static str {
        match self {
            Output::ClosedFormMixing => "mixing.csv",
            Output::DiagonalPhases => "diagonal_phases.csv",
            Output::DiagonalPotential => "diagonal_potential.csv",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub family: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
}

impl ChannelSpec {
    pub fn from_family(f: &Family) -> ChannelSpec {
        let mut v = serde_json::to_value(f).expect("families serialize");
        let obj = v.as_object_mut().expect("families serialize to objects");
        let name = obj.remove("family").and_then(|n| n.as_str().map(str::to_string)).unwrap_or_default();
        ChannelSpec { family: name, params: obj.clone(), l: None }
    }

    pub fn to_family(&self) -> std::result::Result<Family, String> {
        let mut obj = self.params.clone();
        obj.insert("family".into(), Value::String(self.family.clone()));
        serde_json::from_value(Value::Object(obj)).map_err(|e| format!("family '{}': {e}", self.family))
    }
}

/// Two-channel (kappa, q, x) or N-channel (kappa, m, q_matrix, x0) coupling data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSpec {
    pub kappa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<Vec<f64>>>,
}

impl CouplingSpec {
    pub fn pair(kappa: f64, q: f64, x: f64) -> CouplingSpec {
        CouplingSpec { kappa, q: Some(q), x: Some(x), m: None, q_matrix: None, x0: None }
    }
}

fn default_radii() -> Vec<f64> {
    vec![30.0, 45.0, 60.0]
}

fn default_oracle_grid() -> Grid {
    Grid::linear(0.1, 5.0, 20)
}

fn default_rtol() -> f64 {
    1e-11
}

fn default_tolerance() -> f64 {
    1e-6
}

fn default_matching() -> Matching {
    Matching::TailCorrected
}

/// Settings of the numerical verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSettings {
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    #[serde(default = "default_oracle_grid")]
    pub k_grid: Grid,
    #[serde(default = "default_rtol")]
    pub rtol: f64,
    /// Allowed max-norm distance between numerical and analytic S.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_matching")]
    pub matching: Matching,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings { radii: default_radii(), k_grid: default_oracle_grid(), rtol: default_rtol(), tolerance: default_tolerance(), matching: default_matching() }
    }
}

fn default_k_grid() -> Grid {
    Grid::linear(1e-3, 10.0, 400)
}

fn default_r_grid() -> Grid {
    Grid::linear(0.01, 10.0, 400)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub channels: Vec<ChannelSpec>,
    pub coupling: CouplingSpec,
    #[serde(default = "default_k_grid")]
    pub k_grid: Grid,
    #[serde(default = "default_r_grid")]
    pub r_grid: Grid,
    #[serde(default)]
    pub outputs: Vec<Output>,
    #[serde(default)]
    pub override_physics_checks: bool,
    #[serde(default)]
    pub oracle: OracleSettings,
}

const KEYS: [&str; 8] = ["name", "channels", "coupling", "k_grid", "r_grid", "outputs", "override_physics_checks", "oracle"];

fn section<T: DeserializeOwned>(obj: &Map<String, Value>, key: &str, errs: &mut Vec<String>) -> Option<T> {
    let v = obj.get(key)?;
    match serde_json::from_value(v.clone()) {
        Ok(t) => Some(t),
        Err(e) => {
            errs.push(format!("{key}: {e}"));
            None
        }
    }
}

impl Scenario {
    /// Parse JSON text, reporting every schema and validation problem found.
    pub fn from_json(text: &str) -> Result<Scenario> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Scenario(format!("invalid JSON: {e}")))?;
        let obj = v.as_object().ok_or_else(|| Error::Scenario("scenario must be a JSON object".into()))?;
        let mut errs = Vec::new();
        for k in obj.keys() {
            if !KEYS.contains(&k.as_str()) {
                errs.push(format!("unknown key '{k}'"));
            }
        }
        for k in ["name", "channels", "coupling"] {
            if !obj.contains_key(k) {
                errs.push(format!("missing key '{k}'"));
            }
        }
        let name: Option<String> = section(obj, "name", &mut errs);
        let mut channels = Vec::new();
        match obj.get("channels") {
            Some(Value::Array(items)) => {
                for (i, item) in items.iter().enumerate() {
                    match serde_json::from_value::<ChannelSpec>(item.clone()) {
                        Ok(c) => channels.push(c),
                        Err(e) => errs.push(format!("channels[{i}]: {e}")),
                    }
                }
            }
            Some(_) => errs.push("channels: expected a list".into()),
            None => {}
        }
        let coupling: Option<CouplingSpec> = section(obj, "coupling", &mut errs);
        let k_grid = section(obj, "k_grid", &mut errs).unwrap_or_else(default_k_grid);
        let r_grid = section(obj, "r_grid", &mut errs).unwrap_or_else(default_r_grid);
        let outputs = section(obj, "outputs", &mut errs).unwrap_or_default();
        let override_physics_checks = section(obj, "override_physics_checks", &mut errs).unwrap_or(false);
        let oracle = section(obj, "oracle", &mut errs).unwrap_or_default();
        if !errs.is_empty() {
            // still report semantic problems of the parts that did parse
            if let Some(c) = &coupling {
                let partial = Scenario {
                    name: name.clone().unwrap_or_default(),
                    channels: channels.clone(),
                    coupling: c.clone(),
                    k_grid,
                    r_grid,
                    outputs,
                    override_physics_checks,
                    oracle,
                };
                errs.extend(partial.validation_errors());
            }
            return Err(Error::Validation(errs));
        }
        let s = Scenario {
            name: name.unwrap(),
            channels,
            coupling: coupling.unwrap(),
            k_grid,
            r_grid,
            outputs,
            override_physics_checks,
            oracle,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenarios serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let errs = self.validation_errors();
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    pub fn families(&self) -> std::result::Result<Vec<Family>, Vec<String>> {
        let mut errs = Vec::new();
        let mut out = Vec::new();
        for (i, c) in self.channels.iter().enumerate() {
            match c.to_family() {
                Ok(f) => out.push(f),
                Err(e) => errs.push(format!("channels[{i}]: {e}")),
            }
        }
        if errs.is_empty() {
            Ok(out)
        } else {
            Err(errs)
        }
    }

    /// Every problem with the scenario, schema-level and physical.
    pub fn validation_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.name.trim().is_empty() {
            errs.push("name must not be empty".into());
        }
        let n = self.channels.len();
        if n < 2 {
            errs.push(format!("need at least two channels, got {n}"));
        }
        let mut families = Vec::new();
        for (i, c) in self.channels.iter().enumerate() {
            match c.to_family() {
                Ok(f) => {
                    for e in f.validation_errors() {
                        errs.push(format!("channels[{i}]: {e}"));
                    }
                    if let Some(l) = c.l {
                        if l != f.partial_wave() {
                            errs.push(format!("channels[{i}]: l = {l} but family {} has l = {}", f.name(), f.partial_wave()));
                        }
                    }
                    if f.nu() == 0 {
                        errs.push(format!("channels[{i}]: family {} is regular at the origin; the transformation needs nu >= 1", f.name()));
                    }
                    families.push(f);
                }
                Err(e) => errs.push(format!("channels[{i}]: {e}")),
            }
        }
        let c = &self.coupling;
        if !(c.kappa.is_finite() && c.kappa > 0.0) {
            errs.push(format!("coupling: kappa must be finite and positive, got {}", c.kappa));
        }
        let general = c.m.is_some() || c.q_matrix.is_some() || c.x0.is_some();
        if general {
            if c.q.is_some() || c.x.is_some() {
                errs.push("coupling: give either (q, x) or (m, q_matrix, x0), not both".into());
            }
            match self.general_coupling() {
                Ok(g) => {
                    if g.n() != n {
                        errs.push(format!("coupling: dimensions describe {} channels but {n} are listed", g.n()));
                    } else if let Err(Error::Validation(v)) = g.validate() {
                        errs.extend(v);
                    }
                }
                Err(e) => errs.push(e),
            }
        } else {
            match (c.q, c.x) {
                (Some(q), Some(x)) => {
                    if !q.is_finite() || !x.is_finite() {
                        errs.push("coupling: q and x must be finite".into());
                    }
                    if n != 2 {
                        errs.push(format!("coupling: (q, x) describes two channels but {n} are listed"));
                    }
                    if n == 2 && families.len() == 2 && !self.override_physics_checks {
                        let (l1, l2) = (families[0].partial_wave(), families[1].partial_wave());
                        if l1 != l2 && (q.abs() - 1.0).abs() >= 1e-12 {
                            errs.push(format!("coupling: channels have l = ({l1}, {l2}); q must be +-1 (got {q}) unless physics checks are overridden"));
                        }
                    }
                }
                _ => errs.push("coupling: q and x are required for two channels".into()),
            }
        }
        if families.len() == n && !self.override_physics_checks {
            let max_pole = families
                .iter()
                .filter_map(|f| f.jost_function().ok())
                .flat_map(|j| j.poles.into_iter().map(|p| p.im.abs()))
                .fold(0.0, f64::max);
            if c.kappa.is_finite() && c.kappa <= max_pole {
                errs.push(format!("coupling: kappa = {} must exceed the largest |Im| of the Jost-function poles ({max_pole})", c.kappa));
            }
        }
        errs.extend(self.k_grid.errors("k_grid"));
        errs.extend(self.r_grid.errors("r_grid"));
        errs.extend(self.oracle.k_grid.errors("oracle.k_grid"));
        if self.oracle.radii.len() < 3 {
            errs.push("oracle.radii: need at least three matching radii".into());
        }
        if self.oracle.radii.iter().any(|r| !(r.is_finite() && *r >= 20.0)) {
            errs.push("oracle.radii: every radius must be at least 20".into());
        }
        if self.oracle.radii.windows(2).any(|w| w[1] <= w[0]) {
            errs.push("oracle.radii: radii must increase".into());
        }
        if !(self.oracle.rtol > 0.0 && self.oracle.rtol < 1e-3) {
            errs.push("oracle.rtol: must lie in (0, 1e-3)".into());
        }
        if !(self.oracle.tolerance > 0.0 && self.oracle.tolerance.is_finite()) {
            errs.push("oracle.tolerance: must be positive".into());
        }
        let mut seen = Vec::new();
        for o in &self.outputs {
            if seen.contains(o) {
                errs.push(format!("outputs: {o:?} listed twice"));
            }
            seen.push(*o);
        }
        errs
    }

    pub fn is_pair(&self) -> bool {
        self.channels.len() == 2 && self.coupling.q.is_some()
    }

    pub fn pair_params(&self) -> Result<CouplingParams> {
        match (self.coupling.q, self.coupling.x) {
            (Some(q), Some(x)) => Ok(CouplingParams::new(self.coupling.kappa, q, x)),
            _ => Err(Error::Scenario("two-channel coupling (q, x) required".into())),
        }
    }

    pub fn general_coupling(&self) -> std::result::Result<GeneralCoupling, String> {
        let c = &self.coupling;
        if let (Some(q), Some(x)) = (c.q, c.x) {
            return Ok(CouplingParams::new(c.kappa, q, x).to_general());
        }
        let (m, qm, x0) = match (c.m, &c.q_matrix, &c.x0) {
            (Some(m), Some(q), Some(x)) => (m, q, x),
            _ => return Err("coupling: m, q_matrix and x0 are all required for the N-channel form".into()),
        };
        let rows = qm.len();
        if qm.iter().any(|r| r.len() != m) {
            return Err(format!("coupling: every q_matrix row must have m = {m} entries"));
        }
        if x0.len() != m || x0.iter().any(|r| r.len() != m) {
            return Err(format!("coupling: x0 must be {m}x{m}"));
        }
        Ok(GeneralCoupling {
            kappa: c.kappa,
            m,
            q: DMatrix::from_fn(rows, m, |i, j| qm[i][j]),
            x0: DMatrix::from_fn(m, m, |i, j| x0[i][j]),
        })
    }

    pub fn channel_models(&self) -> Result<Vec<OneChannelModel>> {
        let fams = self.families().map_err(Error::Validation)?;
        fams.iter().map(build_family).collect()
    }

    /// The two-channel transformed model, regularity scan included.
    pub fn model(&self) -> Result<TransformedModel> {
        self.validate()?;
        if !self.is_pair() {
            return Err(Error::Scenario(format!(
                "potentials and the oracle are available for two channels only; '{}' has {}",
                self.name,
                self.channels.len()
            )));
        }
        let ch = self.channel_models()?;
        let pair: [OneChannelModel; 2] = ch.try_into().expect("two channels");
        TransformedModel::new(pair, self.pair_params()?, self.override_physics_checks)
    }

    /// Jost-matrix level description, any number of channels.
    pub fn algebraic(&self) -> Result<AlgebraicModel> {
        self.validate()?;
        let fams = self.families().map_err(Error::Validation)?;
        let g = self.general_coupling().map_err(|e| Error::Validation(vec![e]))?;
        let jost: Vec<_> = fams.iter().map(Family::jost_function).collect::<Result<_>>()?;
        let l: Vec<u32> = fams.iter().map(Family::partial_wave).collect();
        let mut lt = l.clone();
        if let (2, Some(q)) = (l.len(), self.coupling.q) {
            if l[0] != l[1] && (q.abs() - 1.0).abs() < 1e-12 {
                lt.swap(0, 1);
            }
        }
        AlgebraicModel::new(&g, jost, l, lt)
    }
}
