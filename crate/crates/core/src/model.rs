//! Physical scenario for the chain-Lambda atom and its Hamiltonian.
//!
//! A chain-Lambda atom with `n_ground` ground states has `2 n_ground - 1`
//! levels ordered `g1, e1, g2, e2, ..., gn`. The probe field drives every
//! `g_j - e_j` transition (Rabi frequency `P_j`) and the coupling field every
//! `g_{j+1} - e_j` transition (`C_j`).
//!
//! All frequency-valued fields of [`ChainConfig`] carry one consistent
//! angular-frequency unit chosen by the caller. Dimensionless results (dark
//! states, `R * Gamma^2`, beta) do not depend on that choice; the absolute
//! susceptibility and group velocity require SI units (rad/s), which is what
//! the provided defaults use.

use crate::error::{Error, Result};
use crate::linalg::SymmetricTridiagonal;
use crate::scalar::Scalar;

/// Vacuum permittivity, F/m (CODATA 2018).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Reduced Planck constant, J s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default atomic density, m^-3 (coldish vapor / MOT conditions).
pub const DEFAULT_ATOMIC_DENSITY: f64 = 3.0e15;
/// Default transition dipole moment, C m.
pub const DEFAULT_DIPOLE_MOMENT: f64 = 2.0e-29;
/// Default excited-state decay rate Gamma, rad/s (linewidth 5.6 MHz).
pub const DEFAULT_GAMMA: f64 = 2.0 * std::f64::consts::PI * 5.6e6;
/// Default probe wavelength, m (alkali D2 scale).
pub const DEFAULT_PROBE_WAVELENGTH: f64 = 780.0e-9;

/// Probe and coupling detunings; the two-photon detuning is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detunings<T> {
    pub probe_detuning: T,
    pub coupling_detuning: T,
}

impl<T: Scalar> Detunings<T> {
    pub fn new(probe_detuning: T, coupling_detuning: T) -> Self {
        Self {
            probe_detuning,
            coupling_detuning,
        }
    }

    /// Both fields on resonance.
    pub fn resonant() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Detuned probe, resonant coupling.
    pub fn probe_only(probe_detuning: T) -> Self {
        Self::new(probe_detuning, T::zero())
    }

    /// Two-photon detuning `probe_detuning - coupling_detuning`.
    pub fn two_photon(&self) -> T {
        self.probe_detuning - self.coupling_detuning
    }
}

/// Physical scenario: chain size, Rabi frequencies, decay and dephasing
/// rates, and the SI anchors needed for the susceptibility.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig<T> {
    n_ground: usize,
    probe_rabi: Vec<T>,
    coupling_rabi: Vec<T>,
    gamma: T,
    dephasing: Vec<T>,
    atomic_density: T,
    dipole_moments: Vec<T>,
    probe_angular_frequency: T,
}

impl<T: Scalar> ChainConfig<T> {
    /// New scenario; density, dipoles, dephasing and probe frequency start at
    /// their defaults and can be overridden with the `with_*` methods.
    ///
    /// `probe_rabi` and `coupling_rabi` must have length `n_ground - 1`.
    pub fn new(
        n_ground: usize,
        probe_rabi: Vec<T>,
        coupling_rabi: Vec<T>,
        gamma: T,
    ) -> Result<Self> {
        if n_ground < 2 {
            return Err(Error::Config(format!(
                "n_ground must be >= 2, got {n_ground}"
            )));
        }
        let cfg = Self {
            n_ground,
            probe_rabi,
            coupling_rabi,
            gamma,
            dephasing: vec![T::zero(); 2 * (n_ground - 1) - 1],
            atomic_density: T::of(DEFAULT_ATOMIC_DENSITY),
            dipole_moments: vec![T::of(DEFAULT_DIPOLE_MOMENT); n_ground - 1],
            probe_angular_frequency: T::of(
                2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / DEFAULT_PROBE_WAVELENGTH,
            ),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Equal couplings on every transition: `P_j = p`, `C_j = c`.
    pub fn equal_couplings(n_ground: usize, p: T, c: T, gamma: T) -> Result<Self> {
        Self::new(
            n_ground,
            vec![p; n_ground - 1],
            vec![c; n_ground - 1],
            gamma,
        )
    }

    /// Couplings and dipole moments scaled by the Zeeman transition-strength
    /// ratios relative to the first Lambda subsystem.
    pub fn clebsch_gordan(n_ground: usize, p1: T, c1: T, gamma: T) -> Result<Self> {
        let (probe, coupling, dipoles) =
            clebsch_gordan_couplings(n_ground, p1, c1, T::of(DEFAULT_DIPOLE_MOMENT))?;
        let mut cfg = Self::new(n_ground, probe, coupling, gamma)?;
        cfg.dipole_moments = dipoles;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let m = self.n_ground - 1;
        if self.probe_rabi.len() != m {
            return Err(Error::Config(format!(
                "probe_rabi length {} != n_ground - 1 = {m}",
                self.probe_rabi.len()
            )));
        }
        if self.coupling_rabi.len() != m {
            return Err(Error::Config(format!(
                "coupling_rabi length {} != n_ground - 1 = {m}",
                self.coupling_rabi.len()
            )));
        }
        if self.dipole_moments.len() != m {
            return Err(Error::Config(format!(
                "dipole_moments length {} != n_ground - 1 = {m}",
                self.dipole_moments.len()
            )));
        }
        if self.dephasing.len() != 2 * m - 1 {
            return Err(Error::Config(format!(
                "dephasing length {} != 2 (n_ground - 1) - 1 = {}",
                self.dephasing.len(),
                2 * m - 1
            )));
        }
        if self.gamma < T::zero() || !self.gamma.is_finite() {
            return Err(Error::Config("gamma must be finite and >= 0".into()));
        }
        if self
            .dephasing
            .iter()
            .any(|g| *g < T::zero() || !g.is_finite())
        {
            return Err(Error::Config(
                "dephasing rates must be finite and >= 0".into(),
            ));
        }
        if !(self.atomic_density > T::zero()) {
            return Err(Error::Config("atomic_density must be > 0".into()));
        }
        if !(self.probe_angular_frequency > T::zero()) {
            return Err(Error::Config("probe_angular_frequency must be > 0".into()));
        }
        Ok(())
    }

    /// m-photon dephasing rates `Gamma_m` for `m = 2 .. 2 (n_ground - 1)`.
    pub fn with_dephasing(mut self, dephasing: Vec<T>) -> Result<Self> {
        self.dephasing = dephasing;
        self.validate()?;
        Ok(self)
    }

    pub fn with_atomic_density(mut self, density: T) -> Result<Self> {
        self.atomic_density = density;
        self.validate()?;
        Ok(self)
    }

    pub fn with_dipole_moments(mut self, dipoles: Vec<T>) -> Result<Self> {
        self.dipole_moments = dipoles;
        self.validate()?;
        Ok(self)
    }

    pub fn with_probe_angular_frequency(mut self, omega_p: T) -> Result<Self> {
        self.probe_angular_frequency = omega_p;
        self.validate()?;
        Ok(self)
    }

    /// Replace all per-transition couplings and dipole moments at once.
    pub fn with_couplings(
        mut self,
        probe_rabi: Vec<T>,
        coupling_rabi: Vec<T>,
        dipole_moments: Vec<T>,
    ) -> Result<Self> {
        self.probe_rabi = probe_rabi;
        self.coupling_rabi = coupling_rabi;
        self.dipole_moments = dipole_moments;
        self.validate()?;
        Ok(self)
    }

    /// Set the probe angular frequency from a vacuum wavelength in meters.
    pub fn with_probe_wavelength(self, lambda: T) -> Result<Self> {
        if !(lambda > T::zero()) {
            return Err(Error::Config("probe wavelength must be > 0".into()));
        }
        let omega = T::of(2.0 * std::f64::consts::PI) * T::of(SPEED_OF_LIGHT) / lambda;
        self.with_probe_angular_frequency(omega)
    }

    /// Copy of this scenario with the probe Rabi frequencies rescaled so that
    /// `P_1 = p1`, preserving the configured `P_j / P_1` ratios. If the
    /// configured `P_1` is zero the ratios are taken as all ones.
    pub fn scaled_probe(&self, p1: T) -> Self {
        let mut cfg = self.clone();
        cfg.probe_rabi = self.probe_ratios().into_iter().map(|r| r * p1).collect();
        cfg
    }

    /// `P_j / P_1` ratios (all ones when `P_1 = 0`).
    pub fn probe_ratios(&self) -> Vec<T> {
        let first = self.probe_rabi[0];
        if first == T::zero() {
            vec![T::one(); self.probe_rabi.len()]
        } else {
            self.probe_rabi.iter().map(|p| *p / first).collect()
        }
    }

    pub fn n_ground(&self) -> usize {
        self.n_ground
    }

    /// Total number of levels, `2 n_ground - 1`.
    pub fn n_states(&self) -> usize {
        2 * self.n_ground - 1
    }

    pub fn probe_rabi(&self) -> &[T] {
        &self.probe_rabi
    }

    pub fn coupling_rabi(&self) -> &[T] {
        &self.coupling_rabi
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn dephasing(&self) -> &[T] {
        &self.dephasing
    }

    pub fn atomic_density(&self) -> T {
        self.atomic_density
    }

    pub fn dipole_moments(&self) -> &[T] {
        &self.dipole_moments
    }

    pub fn probe_angular_frequency(&self) -> T {
        self.probe_angular_frequency
    }
}

/// Flat state index of `|g_j>` (1-based `j`).
pub fn ground_index(j: usize) -> usize {
    2 * (j - 1)
}

/// Flat state index of `|e_j>` (1-based `j`).
pub fn excited_index(j: usize) -> usize {
    2 * j - 1
}

/// Rotating-frame Hamiltonian (over hbar) of the chain-Lambda atom.
///
/// Diagonal: `|g_j> -> (j-1) (dp - dc)`, `|e_j> -> j dp - (j-1) dc`;
/// off-diagonal: `P_j` on `(g_j, e_j)` and `C_j` on `(e_j, g_{j+1})`.
pub fn build_hamiltonian<T: Scalar>(
    config: &ChainConfig<T>,
    det: &Detunings<T>,
) -> SymmetricTridiagonal<T> {
    let n = config.n_ground;
    let d = 2 * n - 1;
    let dcp = det.two_photon();
    let mut diag = vec![T::zero(); d];
    let mut off = vec![T::zero(); d - 1];
    for j in 1..=n {
        diag[ground_index(j)] = T::of((j - 1) as f64) * dcp;
    }
    for j in 1..n {
        diag[excited_index(j)] =
            T::of(j as f64) * det.probe_detuning - T::of((j - 1) as f64) * det.coupling_detuning;
        off[2 * j - 2] = config.probe_rabi[j - 1];
        off[2 * j - 1] = config.coupling_rabi[j - 1];
    }
    // off has odd length d - 1 = 2n - 2; last entry is C_{n-1}, set above
    SymmetricTridiagonal::new(diag, off).expect("lengths are consistent by construction")
}

/// Rabi-frequency and dipole-moment ratios for the F = n -> F' = n Zeeman
/// realization, relative to the first Lambda subsystem.
///
/// Returns `(probe_rabi, coupling_rabi, dipole_moments)`, each of length
/// `n_ground - 1`. Only the 5-state (`n_ground = 3`) and 7-state
/// (`n_ground = 4`) ratios are tabulated.
pub fn clebsch_gordan_couplings<T: Scalar>(
    n_ground: usize,
    base_probe: T,
    base_coupling: T,
    base_dipole: T,
) -> Result<(Vec<T>, Vec<T>, Vec<T>)> {
    let (p_ratios, c_ratios): (&[f64], &[f64]) = match n_ground {
        3 => (&[1.0, 1.224_744_871_391_589], &[1.0, 0.816_496_580_927_726]),
        4 => (
            &[1.0, std::f64::consts::SQRT_2, 1.290_994_448_735_805_6],
            &[1.0, 1.095_445_115_010_332_1, 0.774_596_669_241_483_4],
        ),
        _ => {
            return Err(Error::UnsupportedChainLength(
                n_ground,
                "Zeeman ratios tabulated for n_ground in {3, 4}",
            ))
        }
    };
    let probe: Vec<T> = p_ratios.iter().map(|r| base_probe * T::of(*r)).collect();
    let coupling: Vec<T> = c_ratios.iter().map(|r| base_coupling * T::of(*r)).collect();
    // dipole moments scale with the probe transition strengths
    let dipoles: Vec<T> = p_ratios.iter().map(|r| base_dipole * T::of(*r)).collect();
    Ok((probe, coupling, dipoles))
}

/// Susceptibility prefactor `kappa = 2 pi N / (epsilon_0 hbar)` in SI units.
pub fn kappa<T: Scalar>(config: &ChainConfig<T>) -> T {
    T::of(2.0 * std::f64::consts::PI) * config.atomic_density / (T::of(EPSILON_0) * T::of(HBAR))
}
