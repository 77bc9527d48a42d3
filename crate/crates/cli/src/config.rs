//! Experiment configuration: strict JSON schema, per-scenario validation,
//! and the built-in presets.

use serde::{Deserialize, Serialize};

use resonance_core::beating::BeatingSpec;
use resonance_core::envelope::Envelope;
use resonance_core::grid::{LineGrid, TorusGrid};
use resonance_core::ode::{IntegratorConfig, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Reduced,
    Beating,
    GammaScan,
    ResonantField,
    TransferCheck,
    Nls,
    Decompose,
    Scattering,
    Potential,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Reduced => "reduced",
            Scenario::Beating => "beating",
            Scenario::GammaScan => "gamma-scan",
            Scenario::ResonantField => "resonant-field",
            Scenario::TransferCheck => "transfer-check",
            Scenario::Nls => "nls",
            Scenario::Decompose => "decompose",
            Scenario::Scattering => "scattering",
            Scenario::Potential => "potential",
        }
    }

    pub fn all() -> &'static [Scenario] {
        &[
            Scenario::Reduced,
            Scenario::Beating,
            Scenario::GammaScan,
            Scenario::ResonantField,
            Scenario::TransferCheck,
            Scenario::Nls,
            Scenario::Decompose,
            Scenario::Scattering,
            Scenario::Potential,
        ]
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub p_max: i32,
    pub half_length: f64,
    pub n_x: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            p_max: 8,
            half_length: 160.0,
            n_x: 1024,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PotentialConfig {
    /// `"default"` selects the (1+p²)^{−1} multiplier table.
    Named(String),
    /// Explicit table in mode order p = −p_max ..= p_max.
    Table(Vec<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicsConfig {
    pub eps: f64,
    pub gamma: f64,
    pub mode_p: i32,
    pub mode_q: i32,
    /// Plateau interval of the frequency envelope.
    pub interval: [f64; 2],
    pub envelope_width: f64,
    /// ℓ² norm of each random component in the random-data scenarios.
    pub data_norm: f64,
    /// Frequency width of the Gaussian profiles in the decompose scenario.
    pub profile_sigma: f64,
    pub potential: Option<PotentialConfig>,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        Self {
            eps: 0.1,
            gamma: 0.1,
            mode_p: 0,
            mode_q: 1,
            interval: [-1.0, 1.0],
            envelope_width: 0.75,
            data_norm: 0.1,
            profile_sigma: 0.5,
            potential: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSettings {
    /// `"dopri5"` or `"rk4"`.
    pub method: String,
    pub rtol: f64,
    pub atol: f64,
    /// 0 disables the step cap.
    pub max_step: f64,
    /// Split-step (and rk4) step size.
    pub dt: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            method: "dopri5".into(),
            rtol: 1e-10,
            atol: 1e-12,
            max_step: 0.0,
            dt: 0.01,
        }
    }
}

impl IntegratorSettings {
    pub fn to_core(&self) -> Result<IntegratorConfig, String> {
        let method = match self.method.as_str() {
            "dopri5" => Method::Dopri5,
            "rk4" => Method::Rk4 { dt: self.dt },
            other => return Err(format!("integrator.method: unknown method `{other}`")),
        };
        IntegratorConfig {
            method,
            rtol: self.rtol,
            atol: self.atol,
            max_step: if self.max_step > 0.0 {
                self.max_step
            } else {
                f64::INFINITY
            },
            dense: false,
        }
        .validated()
        .map_err(|e| format!("integrator: {e}"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeConfig {
    /// Horizon; resonant time for the reduced/resonant-field scenarios.
    pub t_end: f64,
    /// Number of beat periods (beating scenario).
    pub periods: f64,
    /// Scattering comparison endpoints.
    pub t0: f64,
    pub t1: f64,
    /// Dyadic list for the decompose scenario.
    pub t_list: Vec<f64>,
    pub sample_interval: f64,
    /// 0 writes snapshots only at the endpoints.
    pub snapshot_interval: f64,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            t_end: 10.0,
            periods: 3.0,
            t0: 10.0,
            t1: 30.0,
            t_list: vec![16.0, 32.0, 64.0, 128.0],
            sample_interval: 1.0,
            snapshot_interval: 0.0,
        }
    }
}

fn default_seed() -> u64 {
    42
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub physics: PhysicsConfig,
    #[serde(default)]
    pub integrator: IntegratorSettings,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn torus(&self) -> Result<TorusGrid, String> {
        TorusGrid::new(self.grid.p_max).map_err(|e| format!("grid.p_max: {e}"))
    }

    pub fn line(&self) -> Result<LineGrid, String> {
        LineGrid::new(self.grid.half_length, self.grid.n_x)
            .map_err(|e| format!("grid.half_length/grid.n_x: {e}"))
    }

    pub fn envelope(&self) -> Result<Envelope, String> {
        Envelope::smooth_plateau(
            self.physics.interval[0],
            self.physics.interval[1],
            self.physics.envelope_width,
        )
        .map_err(|e| format!("physics.interval/physics.envelope_width: {e}"))
    }

    pub fn beating_spec(&self) -> Result<BeatingSpec, String> {
        BeatingSpec::new(
            self.physics.mode_p,
            self.physics.mode_q,
            self.physics.gamma,
            self.physics.eps,
        )
        .map_err(|e| format!("physics: {e}"))
    }

    pub fn potential_table(&self, torus: TorusGrid) -> Result<Option<Vec<f64>>, String> {
        match &self.physics.potential {
            None => Ok(None),
            Some(PotentialConfig::Named(name)) if name == "default" => {
                Ok(Some(resonance_core::nls::default_potential(torus)))
            }
            Some(PotentialConfig::Named(other)) => Err(format!(
                "physics.potential: unknown named potential `{other}` (only \"default\")"
            )),
            Some(PotentialConfig::Table(table)) => {
                if table.len() != torus.n_y() {
                    return Err(format!(
                        "physics.potential: table has {} entries, grid needs {}",
                        table.len(),
                        torus.n_y()
                    ));
                }
                Ok(Some(table.clone()))
            }
        }
    }

    /// Re-validate every module precondition the scenario will rely on.
    pub fn validate(&self) -> Result<(), String> {
        let torus = self.torus()?;
        self.integrator.to_core()?;
        if !(self.integrator.dt > 0.0) {
            return Err(format!(
                "integrator.dt: must be positive, got {}",
                self.integrator.dt
            ));
        }
        if self.time.sample_interval < 0.0 || self.time.snapshot_interval < 0.0 {
            return Err("time.sample_interval/snapshot_interval: must be nonnegative".into());
        }
        match self.scenario {
            Scenario::Reduced => {
                if !(self.physics.data_norm > 0.0) {
                    return Err("physics.data_norm: must be positive".into());
                }
                if !(self.time.t_end >= 0.0) {
                    return Err("time.t_end: must be nonnegative".into());
                }
            }
            Scenario::Beating => {
                let spec = self.beating_spec()?;
                resonance_core::beating::build_two_mode_state(&spec, torus)
                    .map_err(|e| format!("grid.p_max: {e}"))?;
                if !(self.time.periods > 0.0) {
                    return Err("time.periods: must be positive".into());
                }
            }
            Scenario::GammaScan => {}
            Scenario::ResonantField | Scenario::TransferCheck => {
                let line = self.line()?;
                self.envelope()?
                    .sample(&line)
                    .map_err(|e| format!("physics.interval: {e}"))?;
                if matches!(self.scenario, Scenario::ResonantField) {
                    let spec = self.beating_spec()?;
                    resonance_core::beating::build_two_mode_state(&spec, torus)
                        .map_err(|e| format!("grid.p_max: {e}"))?;
                }
                if !(self.time.t_end >= 0.0) {
                    return Err("time.t_end: must be nonnegative".into());
                }
            }
            Scenario::Nls => {
                self.line()?;
                self.potential_table(torus)?;
            }
            Scenario::Decompose => {
                self.line()?;
                if self.time.t_list.is_empty() {
                    return Err("time.t_list: must be a nonempty ascending list".into());
                }
                if self.time.t_list.windows(2).any(|w| w[1] <= w[0]) {
                    return Err("time.t_list: must be strictly ascending".into());
                }
                if !(self.physics.profile_sigma > 0.0) {
                    return Err("physics.profile_sigma: must be positive".into());
                }
            }
            Scenario::Scattering => {
                let line = self.line()?;
                self.envelope()?
                    .sample(&line)
                    .map_err(|e| format!("physics.interval: {e}"))?;
                self.beating_spec()?;
                if !(self.time.t1 > self.time.t0 && self.time.t0 >= 1.0) {
                    return Err(format!(
                        "time.t0/time.t1: need t1 > t0 >= 1, got {} and {}",
                        self.time.t0, self.time.t1
                    ));
                }
            }
            Scenario::Potential => {
                let line = self.line()?;
                self.envelope()?
                    .sample(&line)
                    .map_err(|e| format!("physics.interval: {e}"))?;
                self.beating_spec()?;
                self.potential_table(torus)?;
                if !(self.time.t_end > 0.0) {
                    return Err("time.t_end: must be positive".into());
                }
            }
        }
        Ok(())
    }
}

/// Built-in preset per scenario name.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let scenario = Scenario::all().iter().copied().find(|s| s.name() == name)?;
    let mut cfg = ExperimentConfig {
        scenario,
        grid: GridConfig::default(),
        physics: PhysicsConfig::default(),
        integrator: IntegratorSettings::default(),
        time: TimeConfig::default(),
        seed: default_seed(),
    };
    match scenario {
        Scenario::Reduced => {
            cfg.grid.p_max = 8;
            cfg.integrator.rtol = 1e-12;
            cfg.integrator.atol = 1e-15;
            cfg.time.t_end = 1000.0;
            cfg.time.sample_interval = 10.0;
        }
        Scenario::Beating => {
            cfg.grid.p_max = 4;
            cfg.time.periods = 3.0;
        }
        Scenario::GammaScan => {}
        Scenario::ResonantField => {
            cfg.grid = GridConfig {
                p_max: 4,
                half_length: 16.0,
                n_x: 64,
            };
            cfg.time.t_end = 5.0;
            cfg.time.snapshot_interval = 1.0;
        }
        Scenario::TransferCheck => {
            cfg.grid = GridConfig {
                p_max: 8,
                half_length: 8.0,
                n_x: 64,
            };
            cfg.physics.interval = [-0.9, 1.1];
            cfg.physics.envelope_width = 0.7;
            cfg.physics.data_norm = 0.5;
            cfg.integrator.rtol = 1e-12;
            cfg.integrator.atol = 1e-15;
            cfg.time.t_end = 5.0;
        }
        Scenario::Nls => {
            cfg.grid = GridConfig {
                p_max: 2,
                half_length: 16.0,
                n_x: 128,
            };
            cfg.time.t_end = 10.0;
            cfg.time.sample_interval = 0.5;
            cfg.time.snapshot_interval = 5.0;
            cfg.integrator.dt = 0.01;
        }
        Scenario::Decompose => {
            cfg.grid = GridConfig {
                p_max: 2,
                half_length: 1024.0,
                n_x: 16384,
            };
        }
        Scenario::Scattering => {
            cfg.grid = GridConfig {
                p_max: 6,
                half_length: 320.0,
                n_x: 2048,
            };
            cfg.physics.eps = 0.05;
            cfg.integrator.dt = 0.01;
            cfg.time.t0 = 20.0;
            cfg.time.t1 = 60.0;
            cfg.time.sample_interval = 1.0;
        }
        Scenario::Potential => {
            cfg.grid = GridConfig {
                p_max: 4,
                half_length: 160.0,
                n_x: 1024,
            };
            cfg.physics.eps = 0.15;
            cfg.physics.potential = Some(PotentialConfig::Named("default".into()));
            cfg.integrator.dt = 0.02;
            cfg.time.t_end = 20.0;
            cfg.time.sample_interval = 0.5;
        }
    }
    Some(cfg)
}
