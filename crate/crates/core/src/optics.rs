//! Probe susceptibility, intensity-dependent dispersion, its maximizer, and
//! group velocity, all from dark-state coherences.

use crate::darkstate::{dark_state_numeric, DarkState};
use crate::error::{Error, Result};
use crate::linalg::SymmetricTridiagonal;
use crate::model::{build_hamiltonian, kappa, ChainConfig, Detunings, SPEED_OF_LIGHT};
use crate::scalar::{c_re, Scalar, C};

/// Dimensionless complex susceptibility at the probe frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibility<T> {
    pub value: C<T>,
}

/// Intensity-dependent dispersion `R = (1/P_1) d(sum_j rho_{g_j e_j}) / d Delta_p`.
///
/// `r` carries (angular frequency)^-2 in whatever unit the inputs used;
/// `r_gamma_sq` is the dimensionless `R Gamma^2` plotted in the figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionResult<T> {
    pub r: T,
    pub r_gamma_sq: T,
}

/// Group velocity and the refractive-index slope that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupVelocityResult<T> {
    /// m/s.
    pub v_g: T,
    /// `d Re(eta) / d Delta_p` in seconds.
    pub refractive_slope: T,
}

/// How sweep points map onto per-transition couplings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingMode {
    /// `P_j = P`, `C_j = C` on every transition.
    EqualCouplings,
    /// Zeeman transition-strength ratios relative to the first Lambda.
    ClebschGordan,
}

/// One sweep output row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub p_over_gamma: T,
    pub r_gamma_sq: T,
    pub v_g: T,
}

/// `chi = kappa sum_j (mu_j^2 / P_j) alpha_{g_j} alpha_{e_j}` from a
/// normalized dark state (real coefficients, so chi is real here).
pub fn susceptibility_from_state<T: Scalar>(
    config: &ChainConfig<T>,
    s: &DarkState<T>,
) -> Result<Susceptibility<T>> {
    if !s.is_normalized() {
        return Err(Error::DegenerateInput(
            "susceptibility requires a normalized dark state".into(),
        ));
    }
    if s.n_states() != config.n_states() {
        return Err(Error::Config(format!(
            "dark state has {} components, config has {} states",
            s.n_states(),
            config.n_states()
        )));
    }
    let k = kappa(config);
    let mut sum = T::zero();
    for j in 1..config.n_ground() {
        let p_j = config.probe_rabi()[j - 1];
        if p_j == T::zero() {
            return Err(Error::DegenerateInput(format!(
                "probe Rabi frequency P_{j} is zero"
            )));
        }
        let mu = config.dipole_moments()[j - 1];
        sum += mu * mu / p_j * s.ground_component(j) * s.excited_component(j);
    }
    Ok(Susceptibility {
        value: c_re(k * sum),
    })
}

/// Closed-form dispersion for equal couplings, `n_ground` in {2, 3, 4}.
///
/// `p` and `c` are interpreted in units of Gamma for `r_gamma_sq`; `r` itself
/// is unit-covariant (degree -2 homogeneous in the inputs).
pub fn dispersion_analytic<T: Scalar>(n_ground: usize, p: T, c: T) -> Result<DispersionResult<T>> {
    if p == T::zero() && c == T::zero() {
        return Err(Error::DegenerateInput(
            "dispersion undefined at P = C = 0".into(),
        ));
    }
    let two = T::of(2.0);
    let o2 = c * c + p * p;
    let o4 = o2 * o2;
    let p2 = p * p;
    let p4 = p2 * p2;
    let r = match n_ground {
        2 => c * c / o4,
        3 => {
            let den = o4 - p2 * o2 + p4;
            c * c * (o4 + two * p2 * o2 - two * p4) / (den * den)
        }
        4 => {
            let four = T::of(4.0);
            let eight = T::of(8.0);
            let den = o4 - two * p2 * o2 + two * p4;
            c * c * (o4 * o4 + four * p4 * o4 - eight * p4 * p2 * o2 + four * p4 * p4)
                / (o4 * den * den)
        }
        _ => {
            return Err(Error::UnsupportedChainLength(
                n_ground,
                "closed-form dispersion exists for n_ground in {2, 3, 4}",
            ))
        }
    };
    Ok(DispersionResult { r, r_gamma_sq: r })
}

fn min_rabi<T: Scalar>(config: &ChainConfig<T>) -> T {
    config
        .probe_rabi()
        .iter()
        .chain(config.coupling_rabi())
        .map(|x| x.abs())
        .fold(T::infinity(), T::min)
}

/// Sum of ground-excited coherences of the normalized dark state of `h`.
fn coherence_sum<T: Scalar>(h: &SymmetricTridiagonal<T>, n_ground: usize) -> T {
    let s = dark_state_numeric(h);
    (1..n_ground).fold(T::zero(), |acc, j| {
        acc + s.ground_component(j) * s.excited_component(j)
    })
}

/// Central-difference dispersion from the numeric dark state at
/// `Delta_p = +-step` (resonant coupling field), normalized by `P_1`.
pub fn dispersion_numeric<T: Scalar>(
    config: &ChainConfig<T>,
    det: &Detunings<T>,
    step: T,
) -> Result<DispersionResult<T>> {
    if det.probe_detuning != T::zero() || det.coupling_detuning != T::zero() {
        return Err(Error::Config(
            "numeric dispersion is taken at Delta_p = Delta_c = 0".into(),
        ));
    }
    let min_rate = min_rabi(config);
    if !(min_rate > T::zero()) {
        return Err(Error::DegenerateInput(
            "numeric dispersion requires nonzero Rabi frequencies".into(),
        ));
    }
    let max_step = T::of(0.1) * min_rate;
    if !(step > T::zero()) || step > max_step {
        return Err(Error::StepSize {
            step: step.to_f64().unwrap_or(f64::NAN),
            max: max_step.to_f64().unwrap_or(f64::NAN),
        });
    }
    let n = config.n_ground();
    let s_plus = coherence_sum(&build_hamiltonian(config, &Detunings::probe_only(step)), n);
    let s_minus = coherence_sum(&build_hamiltonian(config, &Detunings::probe_only(-step)), n);
    let r = (s_plus - s_minus) / (T::of(2.0) * step * config.probe_rabi()[0]);
    let g = config.gamma();
    Ok(DispersionResult {
        r,
        r_gamma_sq: r * g * g,
    })
}

/// Maximize the dispersion over the ratio `x = P / C` by golden-section
/// search on `[0, 4]` to 1e-6; returns `(beta, r_max)`.
///
/// Closed forms are used for `n_ground <= 4`, the numeric dark-state route
/// beyond that.
pub fn dispersion_maximum<T: Scalar>(n_ground: usize, c: T) -> Result<(T, T)> {
    if !(c > T::zero()) {
        return Err(Error::DegenerateInput(format!(
            "dispersion maximum requires coupling Rabi frequency > 0, got {c}"
        )));
    }
    let eval = |x: T| -> Result<T> {
        let p = x * c;
        if n_ground <= 4 {
            Ok(dispersion_analytic(n_ground, p, c)?.r)
        } else {
            let cfg = ChainConfig::equal_couplings(n_ground, p, c, T::zero())?;
            let step = T::of(1e-4) * p.min(c);
            Ok(dispersion_numeric(&cfg, &Detunings::resonant(), step)?.r)
        }
    };
    // golden-section search; the dispersion is unimodal in P/C on this range
    let inv_phi = T::of(0.618_033_988_749_894_9);
    let mut a = T::zero();
    let mut b = T::of(4.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    let tol = T::of(1e-6);
    while b - a > tol {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2)?;
        }
    }
    let beta = (a + b) * T::of(0.5);
    let r_max = eval(beta)?;
    Ok((beta, r_max))
}

/// `v_g = c / (1 + omega_p d Re(eta)/d Delta_p)` with `eta = sqrt(1 + chi)`.
///
/// `chi_slope` is `d Re(chi) / d Delta_p` in seconds, `chi0` the
/// susceptibility at the operating point.
pub fn group_velocity<T: Scalar>(
    chi_slope: T,
    chi0: C<T>,
    omega_p: T,
) -> Result<GroupVelocityResult<T>> {
    let one_plus = C::new(T::one() + chi0.re, chi0.im);
    if one_plus.re <= T::zero() {
        return Err(Error::BranchCut(one_plus.re.to_f64().unwrap_or(f64::NAN)));
    }
    let eta_slope = (c_re(chi_slope) / (one_plus.sqrt() * T::of(2.0))).re;
    let c_light = T::of(SPEED_OF_LIGHT);
    Ok(GroupVelocityResult {
        v_g: c_light / (T::one() + omega_p * eta_slope),
        refractive_slope: eta_slope,
    })
}

/// Per-transition couplings for one sweep point.
fn sweep_config<T: Scalar>(
    template: &ChainConfig<T>,
    p1: T,
    mode: CouplingMode,
) -> Result<ChainConfig<T>> {
    let n = template.n_ground();
    match mode {
        CouplingMode::EqualCouplings => template.clone().with_couplings(
            vec![p1; n - 1],
            vec![template.coupling_rabi()[0]; n - 1],
            vec![template.dipole_moments()[0]; n - 1],
        ),
        CouplingMode::ClebschGordan => {
            let (probe, coupling, dipoles) = crate::model::clebsch_gordan_couplings(
                n,
                p1,
                template.coupling_rabi()[0],
                template.dipole_moments()[0],
            )?;
            template.clone().with_couplings(probe, coupling, dipoles)
        }
    }
}

/// Dispersion and group velocity over a probe-Rabi grid (one row per point).
///
/// The grid and the template couplings share the template's frequency unit;
/// rows report `P_1 / Gamma` and `R Gamma^2`. The template's first coupling
/// entry and dipole moment seed both modes.
pub fn sweep_dispersion<T: Scalar>(
    config: &ChainConfig<T>,
    p_grid: &[T],
    mode: CouplingMode,
) -> Result<Vec<SweepRow<T>>> {
    if p_grid.is_empty() {
        return Err(Error::Config("sweep grid must be nonempty".into()));
    }
    if p_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(
            "sweep grid must be strictly ascending".into(),
        ));
    }
    if !(config.gamma() > T::zero()) {
        return Err(Error::Config(
            "sweep output is Gamma-scaled; gamma must be > 0".into(),
        ));
    }
    let gamma = config.gamma();
    let omega_p = config.probe_angular_frequency();
    let mut rows = Vec::with_capacity(p_grid.len());
    for &p1 in p_grid {
        let cfg = sweep_config(config, p1, mode)?;
        let step = (T::of(1e-4) * gamma).min(T::of(0.05) * min_rabi(&cfg));
        let disp = dispersion_numeric(&cfg, &Detunings::resonant(), step)?;
        let chi_at = |dp: T| -> Result<C<T>> {
            let h = build_hamiltonian(&cfg, &Detunings::probe_only(dp));
            Ok(susceptibility_from_state(&cfg, &dark_state_numeric(&h))?.value)
        };
        let chi0 = chi_at(T::zero())?;
        let slope = (chi_at(step)?.re - chi_at(-step)?.re) / (T::of(2.0) * step);
        let vg = group_velocity(slope, chi0, omega_p)?;
        rows.push(SweepRow {
            p_over_gamma: p1 / gamma,
            r_gamma_sq: disp.r_gamma_sq,
            v_g: vg.v_g,
        });
    }
    Ok(rows)
}
