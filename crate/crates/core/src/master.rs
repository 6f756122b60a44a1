//! Open-system treatment: Liouvillian construction, steady states, probe
//! susceptibility from the full density matrix, and time evolution for
//! adiabatic state preparation.
//!
//! The density matrix is stored in the standard convention `rho = |psi><psi|`
//! and evolves under `rhodot = -i [H, rho] + L[rho]`. Two loss models are
//! provided:
//!
//! * `CanonicalLindblad`: jump operators `|g_j><e_j|` and `|g_{j+1}><e_j|`,
//!   each at rate `Gamma / 2`, plus pure dephasing `Gamma_m` on every
//!   coherence between states `m` photons apart (`m >= 2`). Valid for any
//!   chain length and guaranteed completely positive.
//! * `PaperFaithful`: element-wise rate lists for the 5-state atom in which
//!   the far ground-excited coherences (`rho_{g1 e2}`, `rho_{e1 g3}`) relax
//!   at the bare multiphoton dephasing rate `Gamma_3` rather than
//!   `Gamma / 2 + Gamma_3`, i.e. the radiative contribution is folded into
//!   the dephasing parameter. 5-state only. The two models coincide exactly
//!   for `Gamma_2 = Gamma_4 = 0`, `Gamma_3 = Gamma / 2`.

use crate::darkstate::DarkState;
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, solve_complex_linear, ComplexMatrix, SymmetricTridiagonal,
};
use crate::model::{build_hamiltonian, excited_index, ground_index, kappa, ChainConfig, Detunings};
use crate::optics::{DispersionResult, Susceptibility};
use crate::scalar::{c_re, c_zero, Scalar, C};

/// Loss-model selector for [`build_liouvillian`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LindbladMode {
    CanonicalLindblad,
    PaperFaithful,
}

/// Hermitian, trace-one state of the `2 n_ground - 1` level atom, stored
/// row-major in state order `g1, e1, g2, ..., gn`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    dim: usize,
    entries: Vec<C<T>>,
}

impl<T: Scalar> DensityMatrix<T> {
    pub fn from_entries(dim: usize, entries: Vec<C<T>>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Config(format!(
                "density matrix needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    /// Projector onto one basis state.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut entries = vec![c_zero(); dim * dim];
        entries[index * dim + index] = c_re(T::one());
        Self { dim, entries }
    }

    /// Pure-state projector `|psi><psi|` from real amplitudes (normalized
    /// internally).
    pub fn from_pure_real(amplitudes: &[T]) -> Result<Self> {
        let norm2 = amplitudes.iter().fold(T::zero(), |acc, a| acc + *a * *a);
        if norm2 == T::zero() {
            return Err(Error::DegenerateInput("zero amplitude vector".into()));
        }
        let dim = amplitudes.len();
        let mut entries = vec![c_zero(); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                entries[a * dim + b] = c_re(amplitudes[a] * amplitudes[b] / norm2);
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    pub fn entry(&self, a: usize, b: usize) -> C<T> {
        self.entries[a * self.dim + b]
    }

    /// Coherence `rho_{g_j e_j}` (element in the `g_j` row, `e_j` column).
    pub fn probe_coherence(&self, j: usize) -> C<T> {
        self.entry(ground_index(j), excited_index(j))
    }

    pub fn population(&self, index: usize) -> T {
        self.entry(index, index).re
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).fold(c_zero(), |acc, a| acc + self.entry(a, a))
    }

    /// Largest element magnitude of `rho - rho^dagger`.
    pub fn hermiticity_residual(&self) -> T {
        let mut worst = T::zero();
        for a in 0..self.dim {
            for b in a..self.dim {
                let r = (self.entry(a, b) - self.entry(b, a).conj()).norm();
                if r > worst {
                    worst = r;
                }
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        let m = ComplexMatrix::from_fn(self.dim, self.dim, |a, b| self.entry(a, b));
        let w = hermitian_eigenvalues(&m)?;
        Ok(w.into_iter().fold(T::infinity(), T::min))
    }

    /// Check Hermiticity, unit trace and positivity against the given bounds.
    pub fn validate_with(&self, hermit_tol: T, trace_tol: T, eig_floor: T) -> Result<()> {
        let h = self.hermiticity_residual();
        if h > hermit_tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "hermiticity residual {h} exceeds {hermit_tol}"
            )));
        }
        let tr = self.trace();
        let tr_err = (tr - c_re(T::one())).norm();
        if tr_err > trace_tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace error {tr_err} exceeds {trace_tol}"
            )));
        }
        let lo = self.min_eigenvalue()?;
        if lo < eig_floor {
            return Err(Error::InvalidDensityMatrix(format!(
                "minimum eigenvalue {lo} below {eig_floor}"
            )));
        }
        Ok(())
    }

    /// Steady-state bounds: Hermitian to 1e-10, trace to 1e-10, eigenvalues
    /// above -1e-9.
    pub fn validate(&self) -> Result<()> {
        self.validate_with(T::of(1e-10), T::of(1e-10), T::of(-1e-9))
    }

    /// Accumulation-relaxed bounds (1e-6) for time-evolved states.
    pub fn validate_relaxed(&self) -> Result<()> {
        self.validate_with(T::of(1e-6), T::of(1e-6), T::of(-1e-6))
    }

    /// `<v| rho |v>` for a real vector, e.g. dark-state fidelity.
    pub fn expectation_real(&self, v: &[T]) -> T {
        assert_eq!(v.len(), self.dim);
        let mut acc = c_zero();
        for a in 0..self.dim {
            for b in 0..self.dim {
                acc += c_re(v[a]) * self.entry(a, b) * c_re(v[b]);
            }
        }
        acc.re
    }

    /// Fidelity `<D| rho |D>` against a normalized dark state.
    pub fn dark_state_fidelity(&self, state: &DarkState<T>) -> T {
        self.expectation_real(state.alpha())
    }
}

/// Element-wise loss rates: `rate(a, b)` damps `rho_{ab}`, and each entry of
/// `refills` moves population `rho_{ss} -> rho_{tt}` at `Gamma / 2`.
struct LossModel<T> {
    rate: Vec<T>,
    refills: Vec<(usize, usize)>,
    half_gamma: T,
}

impl<T: Scalar> LossModel<T> {
    fn build(config: &ChainConfig<T>, mode: LindbladMode) -> Result<Self> {
        let n = config.n_ground();
        let d = 2 * n - 1;
        let gamma = config.gamma();
        let deph = config.dephasing();
        let half = T::of(0.5);
        let mut rate = vec![T::zero(); d * d];
        match mode {
            LindbladMode::CanonicalLindblad => {
                // jump operators: each |e_j> leaks Gamma/2 to both neighbors,
                // so every coherence involving an excited state damps at
                // Gamma/2 per excited index, populations at Gamma
                for a in 0..d {
                    for b in 0..d {
                        let mut r = T::zero();
                        if a % 2 == 1 {
                            r += half * gamma;
                        }
                        if b % 2 == 1 {
                            r += half * gamma;
                        }
                        let m = a.abs_diff(b);
                        if m >= 2 {
                            r += deph[m - 2];
                        }
                        rate[a * d + b] = -r;
                    }
                }
                rate.iter_mut()
                    .step_by(d + 1)
                    .enumerate()
                    .for_each(|(a, r)| {
                        *r = if a % 2 == 1 { -gamma } else { T::zero() };
                    });
            }
            LindbladMode::PaperFaithful => {
                if n != 3 {
                    return Err(Error::UnsupportedMode(format!(
                        "paper-faithful loss rates are published for the 5-state atom only \
                         (n_ground = 3), got n_ground = {n}"
                    )));
                }
                let g = gamma;
                let (g2, g3, g4) = (deph[0], deph[1], deph[2]);
                let z = T::zero();
                let hg = half * g;
                // element-wise damping rates, row by row of rho; every entry
                // must be non-positive or trace/positivity preservation breaks
                let rows: [[T; 5]; 5] = [
                    [z, -hg, -g2, -g3, -g4],
                    [-hg, -g, -hg, -g, -g3],
                    [-g2, -hg, z, -hg, -g2],
                    [-g3, -g, -hg, -g, -hg],
                    [-g4, -g3, -g2, -hg, z],
                ];
                for a in 0..5 {
                    for b in 0..5 {
                        rate[a * d + b] = rows[a][b];
                    }
                }
            }
        }
        let refills = (1..n)
            .flat_map(|j| {
                let e = excited_index(j);
                [(ground_index(j), e), (ground_index(j + 1), e)]
            })
            .collect();
        Ok(Self {
            rate,
            refills,
            half_gamma: half * gamma,
        })
    }

    fn apply(&self, d: usize, rho: &[C<T>], out: &mut [C<T>]) {
        for (i, r) in self.rate.iter().enumerate() {
            out[i] += rho[i] * *r;
        }
        for &(t, s) in &self.refills {
            out[t * d + t] += rho[s * d + s] * self.half_gamma;
        }
    }
}

/// `rhodot = -i [H, rho] + loss`, dense row-major, O(d^2).
fn generator_apply<T: Scalar>(
    h: &SymmetricTridiagonal<T>,
    loss: &LossModel<T>,
    rho: &[C<T>],
    out: &mut [C<T>],
) {
    let d = h.dim();
    let diag = h.diag();
    let off = h.offdiag();
    let mi = C::new(T::zero(), -T::one());
    for a in 0..d {
        for b in 0..d {
            // (H rho)_ab
            let mut hr = rho[a * d + b] * diag[a];
            if a > 0 {
                hr += rho[(a - 1) * d + b] * off[a - 1];
            }
            if a + 1 < d {
                hr += rho[(a + 1) * d + b] * off[a];
            }
            // (rho H)_ab
            let mut rh = rho[a * d + b] * diag[b];
            if b > 0 {
                rh += rho[a * d + (b - 1)] * off[b - 1];
            }
            if b + 1 < d {
                rh += rho[a * d + (b + 1)] * off[b];
            }
            out[a * d + b] = mi * (hr - rh);
        }
    }
    loss.apply(d, rho, out);
}

/// Generator of `rhodot = -i [H, rho] + L[rho]` acting on the row-major
/// vectorization of `rho`.
#[derive(Debug, Clone)]
pub struct Liouvillian<T> {
    dim: usize,
    matrix: ComplexMatrix<T>,
    mode: LindbladMode,
}

impl<T: Scalar> Liouvillian<T> {
    /// Density-matrix dimension `d`; the matrix acts on `d^2` vectors.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the vectorized space the generator acts on, `(2n - 1)^2`.
    pub fn superoperator_dim(&self) -> usize {
        self.dim * self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn mode(&self) -> LindbladMode {
        self.mode
    }

    /// `rhodot` for a row-major vectorized `rho`.
    pub fn apply(&self, rho_vec: &[C<T>]) -> Vec<C<T>> {
        self.matrix.mul_vec(rho_vec)
    }
}

/// Assemble the superoperator matrix by applying the generator to every
/// basis matrix `E_{cd}`; columns of the result.
pub fn build_liouvillian<T: Scalar>(
    config: &ChainConfig<T>,
    det: &Detunings<T>,
    mode: LindbladMode,
) -> Result<Liouvillian<T>> {
    let d = config.n_states();
    let loss = LossModel::build(config, mode)?;
    let h = build_hamiltonian(config, det);
    let mut matrix = ComplexMatrix::zeros(d * d, d * d);
    let mut basis = vec![c_zero(); d * d];
    let mut column = vec![c_zero(); d * d];
    for col in 0..d * d {
        basis[col] = c_re(T::one());
        generator_apply(&h, &loss, &basis, &mut column);
        basis[col] = c_zero();
        for (row, v) in column.iter().enumerate() {
            matrix.set(row, col, *v);
        }
    }
    Ok(Liouvillian {
        dim: d,
        matrix,
        mode,
    })
}

/// Solve `L vec(rho) = 0` with the `rho_{g1 g1}` row replaced by the trace
/// constraint `sum_a rho_{aa} = 1`.
pub fn steady_state<T: Scalar>(l: &Liouvillian<T>) -> Result<DensityMatrix<T>> {
    let d = l.dim;
    let mut a = l.matrix.clone();
    let mut b = vec![c_zero(); d * d];
    for col in 0..d * d {
        a.set(0, col, c_zero());
    }
    for k in 0..d {
        a.set(0, k * d + k, c_re(T::one()));
    }
    b[0] = c_re(T::one());
    let x = match solve_complex_linear(&a, &b) {
        Ok(x) => x,
        Err(Error::SingularSystem { .. }) => return Err(Error::NonUniqueSteadyState),
        Err(e) => return Err(e),
    };
    let rho = DensityMatrix::from_entries(d, x)?;
    rho.validate()?;
    Ok(rho)
}

/// `chi = kappa sum_j (mu_j^2 / P_j) alpha*_{g_j} alpha_{e_j}`, reading the
/// amplitude pairing off the Hermitian density matrix (i.e. the conjugate of
/// the `(g_j, e_j)` element), so that `-Im chi` is the probe absorption.
pub fn susceptibility_from_rho<T: Scalar>(
    config: &ChainConfig<T>,
    rho: &DensityMatrix<T>,
) -> Result<Susceptibility<T>> {
    if rho.dim() != config.n_states() {
        return Err(Error::Config(format!(
            "density matrix dimension {} does not match config ({} states)",
            rho.dim(),
            config.n_states()
        )));
    }
    let k = kappa(config);
    let mut sum = c_zero();
    for j in 1..config.n_ground() {
        let p_j = config.probe_rabi()[j - 1];
        if p_j == T::zero() {
            return Err(Error::DegenerateInput(format!(
                "probe Rabi frequency P_{j} is zero"
            )));
        }
        let mu = config.dipole_moments()[j - 1];
        sum += rho.probe_coherence(j).conj() * (mu * mu / p_j);
    }
    Ok(Susceptibility { value: sum * k })
}

/// Central-difference dispersion through full steady states at
/// `Delta_p = +-step`, equal couplings `P_j = p`, `C_j = c`.
pub fn dispersion_master<T: Scalar>(
    config: &ChainConfig<T>,
    p: T,
    c: T,
    step: T,
) -> Result<DispersionResult<T>> {
    let n = config.n_ground();
    let gamma = config.gamma();
    let max_step = T::of(0.1) * gamma;
    if !(step > T::zero()) || step > max_step {
        return Err(Error::StepSize {
            step: step.to_f64().unwrap_or(f64::NAN),
            max: max_step.to_f64().unwrap_or(f64::NAN),
        });
    }
    let cfg = config.clone().with_couplings(
        vec![p; n - 1],
        vec![c; n - 1],
        config.dipole_moments().to_vec(),
    )?;
    let coherences = |dp: T| -> Result<T> {
        let l = build_liouvillian(
            &cfg,
            &Detunings::probe_only(dp),
            LindbladMode::CanonicalLindblad,
        )?;
        let rho = steady_state(&l)?;
        Ok((1..n).fold(T::zero(), |acc, j| acc + rho.probe_coherence(j).re))
    };
    let r = (coherences(step)? - coherences(-step)?) / (T::of(2.0) * step * p);
    Ok(DispersionResult {
        r,
        r_gamma_sq: r * gamma * gamma,
    })
}

/// One absorption-surface cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceRow<T> {
    pub delta_p_over_gamma: T,
    pub p_over_gamma: T,
    pub minus_im_chi: T,
}

/// Steady-state `-Im chi` over a `(Delta_p, P)` grid (canonical loss model;
/// rows ordered detuning-major).
pub fn absorption_surface<T: Scalar>(
    config: &ChainConfig<T>,
    delta_p_grid: &[T],
    p_grid: &[T],
) -> Result<Vec<SurfaceRow<T>>> {
    if delta_p_grid.is_empty() || p_grid.is_empty() {
        return Err(Error::Config("surface grids must be nonempty".into()));
    }
    if delta_p_grid.windows(2).any(|w| w[1] <= w[0]) || p_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(
            "surface grids must be strictly ascending".into(),
        ));
    }
    if !(config.gamma() > T::zero()) {
        return Err(Error::Config(
            "surface output is Gamma-scaled; gamma must be > 0".into(),
        ));
    }
    let gamma = config.gamma();
    let mut rows = Vec::with_capacity(delta_p_grid.len() * p_grid.len());
    for &dp in delta_p_grid {
        for &p in p_grid {
            let cfg = config.scaled_probe(p);
            let l = build_liouvillian(
                &cfg,
                &Detunings::probe_only(dp),
                LindbladMode::CanonicalLindblad,
            )?;
            let rho = steady_state(&l)?;
            let chi = susceptibility_from_rho(&cfg, &rho)?;
            rows.push(SurfaceRow {
                delta_p_over_gamma: dp / gamma,
                p_over_gamma: p / gamma,
                minus_im_chi: -chi.value.im,
            });
        }
    }
    Ok(rows)
}

/// Fixed-step classical fourth-order integration of `rhodot = L(t) rho` with
/// a time-dependent probe amplitude.
///
/// `probe_ramp(t)` gives `P_1(t)`; the other probe transitions keep the
/// configured `P_j / P_1` ratios (all ones when the configured `P_1` is
/// zero). The coupling field and loss rates are constant. Canonical loss
/// model.
pub fn evolve<T: Scalar>(
    config: &ChainConfig<T>,
    rho0: &DensityMatrix<T>,
    probe_ramp: impl Fn(T) -> T,
    t_final: T,
    dt: T,
) -> Result<DensityMatrix<T>> {
    let d = config.n_states();
    if rho0.dim() != d {
        return Err(Error::Config(format!(
            "initial state dimension {} does not match config ({d} states)",
            rho0.dim()
        )));
    }
    rho0.validate_relaxed()?;
    if !(dt > T::zero()) || !(t_final >= T::zero()) {
        return Err(Error::Config("need dt > 0 and t_final >= 0".into()));
    }
    // stability gate dt ||L|| < 0.1, with ||L|| sampled over the ramp
    let mut p_max = T::zero();
    for k in 0..=100 {
        let t = t_final * T::of(k as f64 / 100.0);
        p_max = p_max.max(probe_ramp(t).abs());
    }
    let l_max = build_liouvillian(
        &config.scaled_probe(p_max),
        &Detunings::resonant(),
        LindbladMode::CanonicalLindblad,
    )?;
    let norm = l_max.matrix.norm_inf();
    if dt * norm >= T::of(0.1) {
        return Err(Error::StepSize {
            step: dt.to_f64().unwrap_or(f64::NAN),
            max: (T::of(0.1) / norm).to_f64().unwrap_or(f64::NAN),
        });
    }

    let loss = LossModel::build(config, LindbladMode::CanonicalLindblad)?;
    let ratios = config.probe_ratios();
    let h_at = |t: T| {
        let p1 = probe_ramp(t);
        let cfg = config.clone().with_couplings(
            ratios.iter().map(|r| *r * p1).collect(),
            config.coupling_rabi().to_vec(),
            config.dipole_moments().to_vec(),
        );
        build_hamiltonian(
            &cfg.expect("scaling preserves validity"),
            &Detunings::resonant(),
        )
    };

    let n_steps = (t_final / dt).ceil().to_usize().unwrap_or(0).max(1);
    let dt = t_final / T::of(n_steps as f64);
    let half = T::of(0.5);
    let sixth = T::of(1.0 / 6.0);
    let two = T::of(2.0);
    let dd = d * d;
    let mut rho = rho0.entries().to_vec();
    let mut k1 = vec![c_zero(); dd];
    let mut k2 = vec![c_zero(); dd];
    let mut k3 = vec![c_zero(); dd];
    let mut k4 = vec![c_zero(); dd];
    let mut stage = vec![c_zero(); dd];
    let mut t = T::zero();
    for _ in 0..n_steps {
        let h0 = h_at(t);
        let h_half = h_at(t + half * dt);
        let h1 = h_at(t + dt);
        generator_apply(&h0, &loss, &rho, &mut k1);
        for i in 0..dd {
            stage[i] = rho[i] + k1[i] * (half * dt);
        }
        generator_apply(&h_half, &loss, &stage, &mut k2);
        for i in 0..dd {
            stage[i] = rho[i] + k2[i] * (half * dt);
        }
        generator_apply(&h_half, &loss, &stage, &mut k3);
        for i in 0..dd {
            stage[i] = rho[i] + k3[i] * dt;
        }
        generator_apply(&h1, &loss, &stage, &mut k4);
        for i in 0..dd {
            rho[i] += (k1[i] + (k2[i] + k3[i]) * two + k4[i]) * (dt * sixth);
        }
        t += dt;
    }
    let out = DensityMatrix::from_entries(d, rho)?;
    out.validate_relaxed()
        .map_err(|e| Error::IntegrationInstability(e.to_string()))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darkstate::{dark_state_numeric, normalize, DarkState};
    use approx::assert_relative_eq;

    fn five_state(p: f64, c: f64) -> ChainConfig<f64> {
        ChainConfig::equal_couplings(3, p, c, 1.0).unwrap()
    }

    #[test]
    fn columns_conserve_trace_both_modes() {
        for mode in [LindbladMode::CanonicalLindblad, LindbladMode::PaperFaithful] {
            let cfg = five_state(0.3, 0.25)
                .with_dephasing(vec![0.01, 0.02, 0.03])
                .unwrap();
            let l = build_liouvillian(&cfg, &Detunings::new(0.1, -0.05), mode).unwrap();
            let d = l.dim();
            assert_eq!(l.superoperator_dim(), 25);
            assert_eq!(l.matrix().rows(), 25);
            for col in 0..d * d {
                let mut tr = c_zero::<f64>();
                for a in 0..d {
                    tr += l.matrix().get(a * d + a, col);
                }
                assert!(tr.norm() < 1e-12, "{mode:?} col {col}: {tr}");
            }
        }
    }

    #[test]
    fn dark_state_is_stationary_without_loss() {
        let cfg = ChainConfig::equal_couplings(3, 0.3, 0.25, 0.0).unwrap();
        let l = build_liouvillian(
            &cfg,
            &Detunings::resonant(),
            LindbladMode::CanonicalLindblad,
        )
        .unwrap();
        let dark = dark_state_numeric(&build_hamiltonian(&cfg, &Detunings::resonant()));
        let rho = DensityMatrix::from_pure_real(dark.alpha()).unwrap();
        let rhodot = l.apply(rho.entries());
        let worst = rhodot.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-12, "dark projector not stationary: {worst}");
    }

    #[test]
    fn canonical_population_rates() {
        // rho_{e1 e1} decays at Gamma and refills rho_{g1 g1} at Gamma/2
        let cfg = five_state(0.3, 0.25);
        let l = build_liouvillian(
            &cfg,
            &Detunings::resonant(),
            LindbladMode::CanonicalLindblad,
        )
        .unwrap();
        let d = 5;
        let e1 = excited_index(1);
        let col = e1 * d + e1;
        assert_relative_eq!(l.matrix().get(e1 * d + e1, col).re, -1.0, epsilon = 1e-14);
        assert_relative_eq!(l.matrix().get(0, col).re, 0.5, epsilon = 1e-14);
        assert_relative_eq!(
            l.matrix()
                .get(ground_index(2) * d + ground_index(2), col)
                .re,
            0.5,
            epsilon = 1e-14
        );
    }

    #[test]
    fn modes_coincide_at_matching_rates() {
        let base = five_state(0.3, 0.25);
        let canonical = build_liouvillian(
            &base,
            &Detunings::new(0.07, 0.02),
            LindbladMode::CanonicalLindblad,
        )
        .unwrap();
        let paper_cfg = base.with_dephasing(vec![0.0, 0.5, 0.0]).unwrap();
        let paper = build_liouvillian(
            &paper_cfg,
            &Detunings::new(0.07, 0.02),
            LindbladMode::PaperFaithful,
        )
        .unwrap();
        let d2 = 25;
        for i in 0..d2 {
            for j in 0..d2 {
                let diff = (canonical.matrix().get(i, j) - paper.matrix().get(i, j)).norm();
                assert!(diff == 0.0, "entry ({i}, {j}) differs by {diff}");
            }
        }
    }

    #[test]
    fn paper_mode_needs_five_states() {
        let cfg = ChainConfig::equal_couplings(4, 0.3, 0.25, 1.0).unwrap();
        assert!(matches!(
            build_liouvillian(&cfg, &Detunings::resonant(), LindbladMode::PaperFaithful),
            Err(Error::UnsupportedMode(_))
        ));
    }

    #[test]
    fn steady_state_optical_pumping() {
        // no probe: everything pumps into the uncoupled absorbing |g1>
        let cfg = ChainConfig::<f64>::new(3, vec![0.0, 0.0], vec![0.25, 0.25], 1.0).unwrap();
        let l = build_liouvillian(
            &cfg,
            &Detunings::resonant(),
            LindbladMode::CanonicalLindblad,
        )
        .unwrap();
        let rho = steady_state(&l).unwrap();
        assert!((rho.population(0) - 1.0).abs() < 1e-8);
        for idx in 1..5 {
            assert!(rho.population(idx).abs() < 1e-8);
        }
    }

    #[test]
    fn steady_state_is_dark_projector_at_resonance() {
        let cfg = five_state(0.25, 0.25);
        let l = build_liouvillian(
            &cfg,
            &Detunings::resonant(),
            LindbladMode::CanonicalLindblad,
        )
        .unwrap();
        let rho = steady_state(&l).unwrap();
        let dark = dark_state_numeric(&build_hamiltonian(&cfg, &Detunings::resonant()));
        assert!(rho.dark_state_fidelity(&dark) > 1.0 - 1e-10);
        for j in 1..=2 {
            assert!(rho.population(excited_index(j)) < 1e-10);
        }
    }

    // With all Gamma_m = 0 the paper-faithful rates leave the far
    // ground-excited coherences undamped and the steady state is not
    // positive semidefinite; steady_state refuses to return it. With
    // Gamma_3 = Gamma/2 (radiative contribution included) it is physical.
    #[test]
    fn paper_faithful_needs_radiative_dephasing_for_positivity() {
        let cfg = five_state(0.25, 0.25);
        let l = build_liouvillian(
            &cfg,
            &Detunings::probe_only(0.1),
            LindbladMode::PaperFaithful,
        )
        .unwrap();
        assert!(matches!(
            steady_state(&l),
            Err(Error::InvalidDensityMatrix(_))
        ));

        let cfg = cfg.with_dephasing(vec![0.0, 0.5, 0.0]).unwrap();
        let l = build_liouvillian(
            &cfg,
            &Detunings::probe_only(0.1),
            LindbladMode::PaperFaithful,
        )
        .unwrap();
        assert!(steady_state(&l).is_ok());
    }

    #[test]
    fn no_decay_means_no_unique_steady_state() {
        let cfg = ChainConfig::equal_couplings(3, 0.3, 0.25, 0.0).unwrap();
        let l = build_liouvillian(
            &cfg,
            &Detunings::resonant(),
            LindbladMode::CanonicalLindblad,
        )
        .unwrap();
        assert!(matches!(steady_state(&l), Err(Error::NonUniqueSteadyState)));
    }

    #[test]
    fn susceptibility_of_uncoupled_ground_state() {
        let cfg = five_state(0.3, 0.25);
        let rho = DensityMatrix::basis_state(5, 0);
        let chi = susceptibility_from_rho(&cfg, &rho).unwrap();
        assert_eq!(chi.value, c_zero());
    }

    #[test]
    fn susceptibility_linear_in_rho() {
        let cfg = five_state(0.3, 0.25);
        let l = build_liouvillian(
            &cfg,
            &Detunings::probe_only(0.2),
            LindbladMode::CanonicalLindblad,
        )
        .unwrap();
        let rho1 = steady_state(&l).unwrap();
        let rho2 = DensityMatrix::basis_state(5, 2);
        let (a, b) = (0.3, 0.7);
        let mix = DensityMatrix::from_entries(
            5,
            rho1.entries()
                .iter()
                .zip(rho2.entries())
                .map(|(x, y)| x * a + y * b)
                .collect(),
        )
        .unwrap();
        let chi_mix = susceptibility_from_rho(&cfg, &mix).unwrap();
        let chi1 = susceptibility_from_rho(&cfg, &rho1).unwrap();
        let chi2 = susceptibility_from_rho(&cfg, &rho2).unwrap();
        let expect = chi1.value * a + chi2.value * b;
        assert!((chi_mix.value - expect).norm() < 1e-12 * chi1.value.norm());
    }

    #[test]
    fn transparency_at_two_photon_resonance() {
        let cfg = five_state(0.25, 0.25);
        let l = build_liouvillian(
            &cfg,
            &Detunings::resonant(),
            LindbladMode::CanonicalLindblad,
        )
        .unwrap();
        let rho = steady_state(&l).unwrap();
        let chi = susceptibility_from_rho(&cfg, &rho).unwrap();
        // kappa mu^2 / Gamma sets the scale of chi for Gamma-unit configs
        let scale = kappa(&cfg) * cfg.dipole_moments()[0].powi(2) / cfg.gamma();
        assert!(chi.value.im.abs() < 1e-10 * scale);
    }

    #[test]
    fn generator_preserves_hermiticity() {
        let cfg = five_state(0.3, 0.25)
            .with_dephasing(vec![0.1, 0.0, 0.05])
            .unwrap();
        let l = build_liouvillian(
            &cfg,
            &Detunings::new(0.3, 0.1),
            LindbladMode::CanonicalLindblad,
        )
        .unwrap();
        // deterministic pseudo-random Hermitian rho
        let d = 5;
        let mut rho = vec![c_zero::<f64>(); d * d];
        let mut seed = 0.37_f64;
        for a in 0..d {
            for b in 0..=a {
                seed = (seed * 997.13).fract();
                let re = seed - 0.5;
                seed = (seed * 997.13).fract();
                let im = if a == b { 0.0 } else { seed - 0.5 };
                rho[a * d + b] = C::new(re, im);
                rho[b * d + a] = C::new(re, -im);
            }
        }
        let rhodot = l.apply(&rho);
        let mut tr = c_zero::<f64>();
        for a in 0..d {
            tr += rhodot[a * d + a];
        }
        assert!(tr.norm() < 1e-12);
        for a in 0..d {
            for b in 0..d {
                let diff = (rhodot[a * d + b] - rhodot[b * d + a].conj()).norm();
                assert!(diff < 1e-12, "({a},{b}): {diff}");
            }
        }
    }

    #[test]
    fn evolve_identity_under_zero_generator() {
        let cfg = ChainConfig::new(2, vec![0.0], vec![0.0], 0.0).unwrap();
        let rho0 = DensityMatrix::basis_state(3, 2);
        let rho = evolve(&cfg, &rho0, |_| 0.0, 5.0, 0.05).unwrap();
        for (x, y) in rho.entries().iter().zip(rho0.entries()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn evolve_rejects_coarse_step() {
        let cfg = five_state(0.25, 0.25);
        let rho0 = DensityMatrix::basis_state(5, 0);
        assert!(matches!(
            evolve(&cfg, &rho0, |_| 0.25, 10.0, 5.0),
            Err(Error::StepSize { .. })
        ));
    }

    #[test]
    fn evolve_relaxes_toward_steady_state() {
        let cfg = five_state(0.25, 0.25);
        let rho0 = DensityMatrix::basis_state(5, 0);
        let rho = evolve(&cfg, &rho0, |_| 0.25, 200.0, 0.01).unwrap();
        let l = build_liouvillian(
            &cfg,
            &Detunings::resonant(),
            LindbladMode::CanonicalLindblad,
        )
        .unwrap();
        let target = steady_state(&l).unwrap();
        let diff = rho
            .entries()
            .iter()
            .zip(target.entries())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-6, "distance to steady state: {diff}");
    }

    #[test]
    fn dark_state_fidelity_of_projector() {
        let alpha = normalize(&DarkState::from_components(
            vec![1.0, 0.0, -1.0, 0.0, 1.0],
            false,
        ))
        .unwrap();
        let rho = DensityMatrix::from_pure_real(alpha.alpha()).unwrap();
        assert_relative_eq!(rho.dark_state_fidelity(&alpha), 1.0, epsilon = 1e-14);
    }
}
