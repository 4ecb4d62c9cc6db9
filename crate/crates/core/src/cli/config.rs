//! Run configuration: one TOML document, unknown keys rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::TorusSpec;
use crate::observables::{ProfileMode, TwoPointMode};
use crate::samplers::LengthLaw;

/// Literature value with its quoted uncertainty in the last digits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub model: Model,
    pub dimension: usize,
    pub value: f64,
    pub uncertainty: f64,
    pub text: &'static str,
}

/// Shipped critical couplings: `J_c` for the SAW, `tanh(β_c)` for Ising.
pub const CRITICAL_POINTS: &[CriticalPoint] = &[
    CriticalPoint { model: Model::Saw, dimension: 2, value: 0.379052277758, uncertainty: 4e-12, text: "0.379052277758(4)" },
    CriticalPoint { model: Model::Saw, dimension: 5, value: 0.11314084, uncertainty: 1e-8, text: "0.11314084(1)" },
    CriticalPoint { model: Model::Saw, dimension: 6, value: 0.09192786, uncertainty: 4e-8, text: "0.09192786(4)" },
    CriticalPoint { model: Model::IsingWorm, dimension: 5, value: 0.1134248, uncertainty: 5e-7, text: "0.1134248(5)" },
];

pub fn critical_point(model: Model, dimension: usize) -> Option<CriticalPoint> {
    CRITICAL_POINTS.iter().copied().find(|c| c.model == model && c.dimension == dimension)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Variable-length self-avoiding walk, Berretti–Sokal chain.
    Saw,
    /// Ising walk from the worm chain.
    IsingWorm,
    /// Random-length random walk (direct sampling).
    Rlrw,
    /// Loop-erased random-length walk (direct sampling).
    Rllerw,
}

impl Model {
    pub fn is_markov_chain(self) -> bool {
        matches!(self, Model::Saw | Model::IsingWorm)
    }

    pub fn default_two_point_mode(self) -> TwoPointMode {
        match self {
            Model::Saw | Model::IsingWorm => TwoPointMode::Endpoint,
            Model::Rlrw | Model::Rllerw => TwoPointMode::Visit,
        }
    }
}

/// Walk-length law; size-dependent variants are resolved per torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum LengthLawConfig {
    Deterministic { n: u64 },
    /// `N = floor(L^exponent)`.
    DeterministicPower { exponent: f64 },
    Geometric { p: f64 },
    ScaledHalfNormal { scale: f64, cap: u64 },
    /// `round(L^{d/2} |X|)`, capped at `L^d - 1`.
    CompleteGraph,
}

impl LengthLawConfig {
    pub fn resolve(&self, spec: &TorusSpec) -> Result<LengthLaw> {
        Ok(match self {
            LengthLawConfig::Deterministic { n } => LengthLaw::Deterministic(*n),
            LengthLawConfig::DeterministicPower { exponent } => {
                if !(exponent.is_finite() && *exponent >= 0.0) {
                    return Err(Error::Config(format!("length exponent must be non-negative, got {exponent}")));
                }
                LengthLaw::Deterministic(f64::from(spec.period()).powf(*exponent).floor() as u64)
            }
            LengthLawConfig::Geometric { p } => LengthLaw::geometric(*p)?,
            LengthLawConfig::ScaledHalfNormal { scale, cap } => LengthLaw::scaled_half_normal(*scale, *cap)?,
            LengthLawConfig::CompleteGraph => LengthLaw::complete_graph(spec, spec.volume() - 1),
        })
    }
}

/// Which tables `simulate` writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableToggles {
    #[serde(default = "yes")]
    pub length: bool,
    #[serde(default = "yes")]
    pub winding: bool,
    #[serde(default = "yes")]
    pub two_point: bool,
    #[serde(default = "yes")]
    pub ecdf: bool,
    #[serde(default = "yes")]
    pub profile: bool,
}

fn yes() -> bool {
    true
}

impl Default for ObservableToggles {
    fn default() -> Self {
        ObservableToggles { length: true, winding: true, two_point: true, ecdf: true, profile: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub model: Model,
    pub dimension: usize,
    /// Torus periods `L`, one run per entry.
    pub sizes: Vec<u32>,
    /// SAW fugacity `J`; defaults to the shipped critical value when one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fugacity: Option<f64>,
    /// Ising `tanh(β)`; defaults to the shipped critical value when one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tanh_beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_law: Option<LengthLawConfig>,
    /// Use the lifted (non-reversible) SAW chain.
    #[serde(default)]
    pub lifted: bool,
    /// Measurements per chain (samples for the direct samplers).
    pub measurements: u64,
    /// Sweeps discarded before measuring (Markov chains only).
    #[serde(default = "default_burn_in")]
    pub burn_in_sweeps: u64,
    /// Chain steps per sweep and between measurements; `L^d` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_steps: Option<u64>,
    #[serde(default = "default_chains")]
    pub chains: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub observables: ObservableToggles,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_point_mode: Option<TwoPointMode>,
    #[serde(default)]
    pub profile: ProfileMode,
}

fn default_burn_in() -> u64 {
    100
}

fn default_chains() -> usize {
    1
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.sizes.is_empty() {
            return fail("sizes must list at least one period".into());
        }
        for &l in &self.sizes {
            self.spec(l).map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.chains == 0 {
            return fail("chains must be at least 1".into());
        }
        if self.measurements == 0 {
            return fail("measurements must be at least 1".into());
        }
        if self.sweep_steps == Some(0) {
            return fail("sweep_steps must be positive".into());
        }
        if self.seed > i64::MAX as u64 {
            return fail("seed must be below 2^63 to round-trip through TOML".into());
        }
        let coupling_set = [self.fugacity.is_some(), self.tanh_beta.is_some(), self.length_law.is_some()];
        let expected = match self.model {
            Model::Saw => 0,
            Model::IsingWorm => 1,
            Model::Rlrw | Model::Rllerw => 2,
        };
        for (i, set) in coupling_set.iter().enumerate() {
            if *set && i != expected {
                let name = ["fugacity", "tanh_beta", "length_law"][i];
                return fail(format!("{name} does not apply to model {:?}", self.model));
            }
        }
        match self.model {
            Model::Saw => {
                let j = self.fugacity()?;
                if !(j > 0.0 && j.is_finite()) {
                    return fail(format!("fugacity must be positive, got {j}"));
                }
            }
            Model::IsingWorm => {
                let t = self.tanh_beta()?;
                if !(t > 0.0 && t < 1.0) {
                    return fail(format!("tanh_beta must lie in (0, 1), got {t}"));
                }
            }
            Model::Rlrw | Model::Rllerw => {
                let law = self.length_law.as_ref().ok_or_else(|| Error::Config("length_law is required".into()))?;
                for &l in &self.sizes {
                    let spec = self.spec(l)?;
                    let resolved = law.resolve(&spec)?;
                    if self.model == Model::Rllerw && resolved.max().is_none_or(|m| m >= spec.volume()) {
                        return fail(format!(
                            "loop-erased walks need a length law bounded below the volume {} at L={l}",
                            spec.volume()
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self, period: u32) -> Result<TorusSpec> {
        TorusSpec::new(self.dimension, period)
    }

    pub fn fugacity(&self) -> Result<f64> {
        self.fugacity.or_else(|| critical_point(Model::Saw, self.dimension).map(|c| c.value)).ok_or_else(|| {
            Error::Config(format!("no shipped critical fugacity for d={}; set fugacity", self.dimension))
        })
    }

    pub fn tanh_beta(&self) -> Result<f64> {
        self.tanh_beta.or_else(|| critical_point(Model::IsingWorm, self.dimension).map(|c| c.value)).ok_or_else(|| {
            Error::Config(format!("no shipped critical tanh(beta) for d={}; set tanh_beta", self.dimension))
        })
    }

    /// The shipped critical point in use, if the coupling was left at its default.
    pub fn default_critical_point(&self) -> Option<CriticalPoint> {
        match self.model {
            Model::Saw if self.fugacity.is_none() => critical_point(Model::Saw, self.dimension),
            Model::IsingWorm if self.tanh_beta.is_none() => critical_point(Model::IsingWorm, self.dimension),
            _ => None,
        }
    }

    pub fn two_point_mode(&self) -> TwoPointMode {
        self.two_point_mode.unwrap_or(self.model.default_two_point_mode())
    }

    pub fn sweep_steps(&self, spec: &TorusSpec) -> u64 {
        self.sweep_steps.unwrap_or(spec.volume())
    }

    /// Elementary chain steps (or sampled walk steps, estimated) over the whole run.
    pub fn site_updates(&self) -> f64 {
        self.sizes
            .iter()
            .filter_map(|&l| self.spec(l).ok())
            .map(|spec| {
                let per_chain = if self.model.is_markov_chain() {
                    (self.burn_in_sweeps + self.measurements) as f64 * self.sweep_steps(&spec) as f64
                } else {
                    let mean = self
                        .length_law
                        .as_ref()
                        .and_then(|l| l.resolve(&spec).ok())
                        .map_or(0.0, |law| law.mean());
                    self.measurements as f64 * mean.max(1.0)
                };
                per_chain * self.chains as f64
            })
            .sum()
    }
}

/// `[lo, hi]` with `points` evenly spaced values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridConfig {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points == 0 || !(self.min <= self.max) {
            return Err(Error::Config(format!("bad grid {self:?}")));
        }
        if self.points == 1 {
            return Ok(vec![self.min]);
        }
        let h = (self.max - self.min) / (self.points - 1) as f64;
        Ok((0..self.points).map(|i| self.min + h * i as f64).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedCollapse {
    pub name: String,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Curves written by `theory-eval`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryConfig {
    #[serde(default = "default_theory_dim")]
    pub dimension: usize,
    #[serde(default = "default_xi_grid")]
    pub xi: GridConfig,
    /// Locations of point-mass length laws `G = 1(x >= at)`.
    #[serde(default = "default_point_masses")]
    pub point_mass_at: Vec<f64>,
    /// Include the half-normal length law `G(x) = P(|X| <= x)`.
    #[serde(default = "yes")]
    pub half_normal: bool,
    /// Include the loop-erased complete-graph collapse curve.
    #[serde(default = "yes")]
    pub rllerw_collapse: bool,
    /// Further `H_d` curves.
    #[serde(default)]
    pub collapse: Vec<NamedCollapse>,
    /// Abscissae for the standardized half-normal distribution function.
    #[serde(default = "default_f_grid")]
    pub standardized_f: GridConfig,
}

fn default_theory_dim() -> usize {
    5
}

fn default_xi_grid() -> GridConfig {
    GridConfig { min: 0.05, max: 3.0, points: 60 }
}

fn default_point_masses() -> Vec<f64> {
    vec![1.0]
}

fn default_f_grid() -> GridConfig {
    GridConfig { min: -1.5, max: 5.0, points: 131 }
}

impl Default for TheoryConfig {
    fn default() -> Self {
        TheoryConfig {
            dimension: default_theory_dim(),
            xi: default_xi_grid(),
            point_mass_at: default_point_masses(),
            half_normal: true,
            rllerw_collapse: true,
            collapse: Vec::new(),
            standardized_f: default_f_grid(),
        }
    }
}

/// Exact table written by `oracle`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum OracleConfig {
    /// Exhaustive SAWs: length law and unwrapped two-point function.
    Saw { dimension: usize, period: u32, fugacity: f64 },
    /// High-temperature graphs: `λ` by head, and Ising-walk length law.
    HighTemperature { dimension: usize, period: u32, tanh_beta: f64 },
    /// Transfer-matrix spin correlations on a `d = 2` torus.
    Transfer { period: u32, tanh_beta: f64 },
    /// RLRW two-point function at every `z` with `‖z‖₁ <= radius`.
    Rlrw {
        dimension: usize,
        length_law: LengthLawConfig,
        radius: u64,
        #[serde(default = "default_bound")]
        truncation_bound: f64,
    },
    /// Exact RLLERW endpoint and visit probabilities for `N` uniform on `0..=max_length`.
    Rllerw { dimension: usize, period: u32, max_length: usize },
    /// SRW transition probabilities `p_n(z)` in a box.
    SrwKernel { dimension: usize, n_max: u64, radius: u64 },
}

fn default_bound() -> f64 {
    1e-9
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig::Saw { dimension: 2, period: 3, fugacity: 0.3 }
    }
}

/// Options for `analyze`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Sizes below this are left out of the fits.
    #[serde(default)]
    pub min_size: u32,
    /// Theory curve joined with measured profiles, by its `curve` name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory_curve: Option<String>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { min_size: 0, theory_curve: None }
    }
}

/// The whole configuration document.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationConfig>,
    #[serde(default)]
    pub theory: TheoryConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
}

impl RunConfig {
    /// Parses a TOML document after applying `key=value` overrides (dotted keys; the
    /// value is read as TOML, falling back to a bare string).
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self> {
        let mut doc: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        // partial [theory] and [analysis] tables inherit the remaining defaults, nested grids included
        let defaults = toml::Table::try_from(RunConfig::default()).map_err(|e| Error::Config(e.to_string()))?;
        for section in ["theory", "analysis"] {
            if let (Some(toml::Value::Table(user)), Some(toml::Value::Table(base))) = (doc.get(section), defaults.get(section)) {
                let mut merged = base.clone();
                merge_into(&mut merged, user.clone());
                doc.insert(section.into(), toml::Value::Table(merged));
            }
        }
        RunConfig::deserialize(doc).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, overrides)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn simulation(&self) -> Result<&SimulationConfig> {
        self.simulation.as_ref().ok_or_else(|| Error::Config("missing [simulation] table".into()))
    }
}

fn merge_into(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge_into(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn apply_override(doc: &mut toml::Table, spec: &str) -> Result<()> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{spec}` is not of the form key=value")))?;
    let value: toml::Value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed the key we wrote"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.trim().split('.').collect();
    let (last, path) = parts.split_last().expect("split yields at least one part");
    let mut table = doc;
    for p in path {
        let entry = table.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override `{key}`: `{p}` is not a table")))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[simulation]
model = "saw"
dimension = 5
sizes = [5, 7]
measurements = 100
chains = 2
seed = 9

[theory]
dimension = 3
"#;

    #[test]
    fn parses_and_defaults() {
        let c = RunConfig::parse(SAMPLE, &[]).unwrap();
        let s = c.simulation().unwrap();
        assert_eq!(s.model, Model::Saw);
        assert_eq!(s.fugacity().unwrap(), 0.11314084);
        assert_eq!(s.default_critical_point().unwrap().text, "0.11314084(1)");
        assert_eq!(s.burn_in_sweeps, 100);
        assert_eq!(s.two_point_mode(), TwoPointMode::Endpoint);
        assert_eq!(c.theory.dimension, 3);
        s.validate().unwrap();
    }

    #[test]
    fn round_trips() {
        let mut c = RunConfig::parse(SAMPLE, &[]).unwrap();
        c.theory.collapse.push(NamedCollapse { name: "x".into(), alpha: 1.0, beta: 0.5, gamma: 0.1 });
        c.oracle = OracleConfig::Rlrw {
            dimension: 3,
            length_law: LengthLawConfig::Geometric { p: 0.5 },
            radius: 2,
            truncation_bound: 1e-9,
        };
        let text = c.to_toml().unwrap();
        assert_eq!(RunConfig::parse(&text, &[]).unwrap(), c);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let bad = SAMPLE.replace("chains = 2", "chians = 2");
        assert!(matches!(RunConfig::parse(&bad, &[]), Err(Error::Config(_))));
        let bad_law = "[simulation]\nmodel='rlrw'\ndimension=3\nsizes=[4]\nmeasurements=1\nlength_law={kind='geometric', p=0.5, q=1}";
        assert!(RunConfig::parse(bad_law, &[]).is_err());
    }

    #[test]
    fn overrides_apply() {
        let o = vec!["simulation.seed=42".to_string(), "simulation.model=ising-worm".into(), "theory.xi.points=3".into()];
        let c = RunConfig::parse(SAMPLE, &o).unwrap();
        let s = c.simulation().unwrap();
        assert_eq!(s.seed, 42);
        assert_eq!(s.model, Model::IsingWorm);
        assert_eq!(c.theory.xi.points, 3);
        assert!(RunConfig::parse(SAMPLE, &["nonsense".into()]).is_err());
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::parse(SAMPLE, &[]).unwrap().simulation.unwrap();
        c.sizes.push(1);
        assert!(c.validate().is_err());
        c.sizes.pop();
        c.tanh_beta = Some(0.1);
        assert!(c.validate().is_err());
        c.tanh_beta = None;
        c.dimension = 3;
        assert!(c.validate().is_err(), "no critical default in d=3");
        c.model = Model::Rllerw;
        c.length_law = Some(LengthLawConfig::Geometric { p: 0.5 });
        assert!(c.validate().is_err(), "unbounded law for loop erasure");
        c.length_law = Some(LengthLawConfig::CompleteGraph);
        c.validate().unwrap();
    }

    #[test]
    fn grids() {
        let g = GridConfig { min: 0.0, max: 1.0, points: 5 };
        assert_eq!(g.values().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(GridConfig { min: 1.0, max: 0.0, points: 2 }.values().is_err());
    }
}
