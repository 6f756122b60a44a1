//! Scenario resolution: defaults, optional JSON scenario file, CLI flags.
//!
//! All frequencies on the command line and in scenario files are in units of
//! Gamma; SI enters only through the density, dipole, wavelength and
//! `gamma_hz` parameters.

use chain_lambda::model::clebsch_gordan_couplings;
use chain_lambda::{ChainConfig64, CouplingMode, Detunings64, LindbladMode};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::table::Format;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingModeArg {
    EqualCouplings,
    ClebschGordan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LindbladModeArg {
    CanonicalLindblad,
    PaperFaithful,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if self.points < 1 {
            return Err(CliError::usage("grid needs at least one point"));
        }
        if self.points > 1 && self.max <= self.min {
            return Err(CliError::usage("grid must be ascending (max > min)"));
        }
        if self.points == 1 {
            return Ok(vec![self.min]);
        }
        let n = self.points;
        Ok((0..n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
            .collect())
    }
}

/// Full scenario; every field has a paper-default and can come from a JSON
/// file or command-line flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    /// Total number of atomic states (odd, >= 3).
    pub states: usize,
    /// P_1 / Gamma.
    pub probe: f64,
    /// C_1 / Gamma.
    pub coupling: f64,
    /// Delta_p / Gamma.
    pub probe_detuning: f64,
    /// Delta_c / Gamma.
    pub coupling_detuning: f64,
    /// Linewidth Gamma / (2 pi) in Hz.
    pub gamma_hz: f64,
    /// Gamma_m / Gamma for m = 2 ..; empty means all zero.
    pub dephasing: Vec<f64>,
    /// m^-3.
    pub atomic_density: f64,
    /// C m, first probe transition.
    pub dipole_moment: f64,
    /// m.
    pub probe_wavelength: f64,
    /// P_1 / Gamma sweep grid.
    pub probe_grid: Grid,
    /// Delta_p / Gamma grid for surfaces.
    pub detuning_grid: Grid,
    pub coupling_mode: CouplingModeArg,
    pub lindblad_mode: LindbladModeArg,
    pub format: Format,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            states: 5,
            probe: 0.25,
            coupling: 0.25,
            probe_detuning: 0.0,
            coupling_detuning: 0.0,
            gamma_hz: 5.6e6,
            dephasing: Vec::new(),
            atomic_density: 3.0e15,
            dipole_moment: 2.0e-29,
            probe_wavelength: 780.0e-9,
            probe_grid: Grid {
                min: 0.05,
                max: 2.0,
                points: 40,
            },
            detuning_grid: Grid {
                min: -2.0,
                max: 2.0,
                points: 41,
            },
            coupling_mode: CouplingModeArg::EqualCouplings,
            lindblad_mode: LindbladModeArg::CanonicalLindblad,
            format: Format::Csv,
        }
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::usage(format!("cannot read scenario {}: {e}", path.display()))
        })?;
        let scenario: Scenario = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("malformed scenario {}: {e}", path.display())))?;
        scenario.check()?;
        Ok(scenario)
    }

    pub fn check(&self) -> Result<(), CliError> {
        if self.states < 3 || self.states.is_multiple_of(2) {
            return Err(CliError::usage(format!(
                "--states must be odd and >= 3 (chain atoms have 2n-1 levels), got {}",
                self.states
            )));
        }
        if !(self.gamma_hz > 0.0) {
            return Err(CliError::usage("gamma_hz must be > 0"));
        }
        Ok(())
    }

    pub fn n_ground(&self) -> usize {
        self.states.div_ceil(2)
    }

    /// Gamma in rad/s.
    pub fn gamma_si(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.gamma_hz
    }

    /// Dephasing list in units of `unit`, padded with zeros to the length the
    /// chain needs.
    fn dephasing_in(&self, unit: f64) -> Result<Vec<f64>, CliError> {
        let need = 2 * (self.n_ground() - 1) - 1;
        if self.dephasing.len() > need {
            return Err(CliError::usage(format!(
                "dephasing takes at most {need} rates (m = 2 .. {}) for {} states",
                2 * (self.n_ground() - 1),
                self.states
            )));
        }
        let mut out = vec![0.0; need];
        for (slot, g) in out.iter_mut().zip(&self.dephasing) {
            *slot = g * unit;
        }
        Ok(out)
    }

    /// Chain configuration with every frequency in units of `unit` (pass
    /// [`Scenario::gamma_si`] for SI, `1.0` for Gamma units).
    pub fn config_in(&self, unit: f64) -> Result<ChainConfig64, CliError> {
        let n = self.n_ground();
        let (p1, c1) = (self.probe * unit, self.coupling * unit);
        let cfg = match self.coupling_mode {
            CouplingModeArg::EqualCouplings => ChainConfig64::equal_couplings(n, p1, c1, unit)?,
            CouplingModeArg::ClebschGordan => {
                let (probe, coupling, dipoles) =
                    clebsch_gordan_couplings(n, p1, c1, self.dipole_moment)?;
                ChainConfig64::new(n, probe, coupling, unit)?.with_dipole_moments(dipoles)?
            }
        };
        let cfg = cfg
            .with_dephasing(self.dephasing_in(unit)?)?
            .with_atomic_density(self.atomic_density)?
            .with_probe_wavelength(self.probe_wavelength)?;
        let cfg = if self.coupling_mode == CouplingModeArg::EqualCouplings {
            cfg.with_dipole_moments(vec![self.dipole_moment; n - 1])?
        } else {
            cfg
        };
        Ok(cfg)
    }

    /// SI configuration (rad/s throughout); required wherever chi or the
    /// group velocity is reported.
    pub fn config_si(&self) -> Result<ChainConfig64, CliError> {
        self.config_in(self.gamma_si())
    }

    pub fn detunings_in(&self, unit: f64) -> Detunings64 {
        Detunings64::new(self.probe_detuning * unit, self.coupling_detuning * unit)
    }

    pub fn coupling_mode(&self) -> CouplingMode {
        match self.coupling_mode {
            CouplingModeArg::EqualCouplings => CouplingMode::EqualCouplings,
            CouplingModeArg::ClebschGordan => CouplingMode::ClebschGordan,
        }
    }

    pub fn lindblad_mode(&self) -> LindbladMode {
        match self.lindblad_mode {
            LindbladModeArg::CanonicalLindblad => LindbladMode::CanonicalLindblad,
            LindbladModeArg::PaperFaithful => LindbladMode::PaperFaithful,
        }
    }

    /// Record every parameter and mode flag in a table's metadata.
    pub fn describe(&self, table: &mut crate::table::Table) {
        fn num(x: f64) -> String {
            if x != 0.0 && (x.abs() < 1e-3 || x.abs() >= 1e6) {
                format!("{x:e}")
            } else {
                x.to_string()
            }
        }
        table.meta("states", self.states);
        table.meta("probe_over_gamma", num(self.probe));
        table.meta("coupling_over_gamma", num(self.coupling));
        table.meta("probe_detuning_over_gamma", num(self.probe_detuning));
        table.meta("coupling_detuning_over_gamma", num(self.coupling_detuning));
        table.meta("gamma_hz", num(self.gamma_hz));
        table.meta(
            "dephasing_over_gamma",
            if self.dephasing.is_empty() {
                "0".to_string()
            } else {
                self.dephasing
                    .iter()
                    .map(|g| num(*g))
                    .collect::<Vec<_>>()
                    .join(" ")
            },
        );
        table.meta("atomic_density_m3", num(self.atomic_density));
        table.meta("dipole_moment_cm", num(self.dipole_moment));
        table.meta("probe_wavelength_m", num(self.probe_wavelength));
        table.meta(
            "coupling_mode",
            match self.coupling_mode {
                CouplingModeArg::EqualCouplings => "equal-couplings",
                CouplingModeArg::ClebschGordan => "clebsch-gordan",
            },
        );
        table.meta(
            "lindblad_mode",
            match self.lindblad_mode {
                LindbladModeArg::CanonicalLindblad => "canonical-lindblad",
                LindbladModeArg::PaperFaithful => "paper-faithful",
            },
        );
    }
}
