//! Run configuration: model parameters, grid spec, and solver settings,
//! read from TOML. The bundled example configurations are compiled in and
//! addressable by name.

use crate::error::{Error, Result};
use crate::granular::{GridSpec, TriangularFuzzyNumber};
use crate::model::{ModelParams, SolveMethod};
use crate::partition::FuzzyPartition;
use serde::Deserialize;
use std::path::Path;

/// A parameter that is either crisp or a triangular triple.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum FuzzyValue {
    Crisp(f64),
    Triple([f64; 3]),
}

impl FuzzyValue {
    fn to_triangular(self, name: &str) -> Result<TriangularFuzzyNumber> {
        match self {
            FuzzyValue::Crisp(x) => TriangularFuzzyNumber::new(x, x, x),
            FuzzyValue::Triple([l, p, r]) => TriangularFuzzyNumber::new(l, p, r),
        }
        .map_err(|e| Error::Validation(format!("{name}: {e}")))
    }
}

#[derive(Debug, Deserialize)]
struct RawParams {
    a1: FuzzyValue,
    a2: FuzzyValue,
    a3: FuzzyValue,
    a4: FuzzyValue,
    a5: FuzzyValue,
    p0: FuzzyValue,
    q0: FuzzyValue,
    r0: FuzzyValue,
}

#[derive(Debug, Deserialize)]
struct RawGrid {
    alphas: Vec<f64>,
    mus: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct RawSolve {
    t_end: Option<f64>,
    h: Option<f64>,
    methods: Option<Vec<String>>,
    refinement: Option<u32>,
}

#[derive(Debug, Deserialize)]
struct RawConfig {
    params: RawParams,
    grid: Option<RawGrid>,
    solve: Option<RawSolve>,
}

/// Solver settings attached to a configuration.
#[derive(Debug, Clone)]
pub struct SolveSettings {
    pub t_end: f64,
    pub h: f64,
    pub methods: Vec<SolveMethod>,
    pub refinement: u32,
}

impl Default for SolveSettings {
    fn default() -> Self {
        Self {
            t_end: 1.0,
            h: 0.01,
            methods: vec![
                SolveMethod::Reference { refinement: 10 },
                SolveMethod::Euler,
                SolveMethod::FtMidpoint,
            ],
            refinement: 10,
        }
    }
}

impl SolveSettings {
    /// Time partition implied by `t_end` and `h`. The horizon must be an
    /// integer number of steps.
    pub fn partition(&self) -> Result<FuzzyPartition> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::Validation(format!(
                "step size must be positive, got h={}",
                self.h
            )));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::Validation(format!(
                "horizon must be positive, got t_end={}",
                self.t_end
            )));
        }
        let steps = (self.t_end / self.h).round();
        if steps < 2.0 || (steps * self.h - self.t_end).abs() > 1e-9 * self.t_end.max(1.0) {
            return Err(Error::Validation(format!(
                "t_end={} is not an integer number (>= 2) of steps h={}",
                self.t_end, self.h
            )));
        }
        FuzzyPartition::uniform(0.0, self.t_end, steps as usize + 1)
    }
}

/// A fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub name: String,
    pub params: ModelParams,
    pub grid: GridSpec,
    pub solve: SolveSettings,
}

impl RunConfig {
    pub fn from_toml(name: &str, text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::Parse(format!("{name}: {e}")))?;
        let p = &raw.params;
        let params = ModelParams::new(
            p.a1.to_triangular("a1")?,
            p.a2.to_triangular("a2")?,
            p.a3.to_triangular("a3")?,
            p.a4.to_triangular("a4")?,
            p.a5.to_triangular("a5")?,
            p.p0.to_triangular("p0")?,
            p.q0.to_triangular("q0")?,
            p.r0.to_triangular("r0")?,
        )?;
        let grid = match raw.grid {
            Some(g) => GridSpec::new(g.alphas, g.mus)?,
            None => GridSpec::default(),
        };
        let mut solve = SolveSettings::default();
        if let Some(s) = raw.solve {
            if let Some(t) = s.t_end {
                solve.t_end = t;
            }
            if let Some(h) = s.h {
                solve.h = h;
            }
            if let Some(r) = s.refinement {
                solve.refinement = r;
            }
            if let Some(ms) = s.methods {
                let mut methods = Vec::new();
                for m in ms {
                    let mut method: SolveMethod = m.parse()?;
                    if let SolveMethod::Reference { refinement } = &mut method {
                        *refinement = solve.refinement;
                    }
                    methods.push(method);
                }
                solve.methods = methods;
            }
        }
        Ok(Self {
            name: name.to_string(),
            params,
            grid,
            solve,
        })
    }

    /// Loads a bundled configuration by name or a TOML file by path.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if let Some(text) = builtin(name_or_path) {
            return Self::from_toml(name_or_path, text);
        }
        let path = Path::new(name_or_path);
        if !path.exists() {
            return Err(Error::Validation(format!(
                "\"{name_or_path}\" is neither a bundled config ({}) nor an existing file",
                BUILTIN_NAMES.join(", ")
            )));
        }
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| name_or_path.to_string());
        Self::from_toml(&name, &text)
    }
}

/// Names of the compiled-in example configurations.
pub const BUILTIN_NAMES: [&str; 5] = [
    "example4_1",
    "example4_2",
    "example4_3",
    "example4_4",
    "example5_1",
];

/// TOML text of a bundled configuration.
pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "example4_1" => Some(include_str!("../configs/example4_1.toml")),
        "example4_2" => Some(include_str!("../configs/example4_2.toml")),
        "example4_3" => Some(include_str!("../configs/example4_3.toml")),
        "example4_4" => Some(include_str!("../configs/example4_4.toml")),
        "example5_1" => Some(include_str!("../configs/example5_1.toml")),
        _ => None,
    }
}
