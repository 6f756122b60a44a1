//! The near-zero-energy dark dressed state, analytically (closed forms for
//! 3-, 5- and 7-state atoms) and numerically (nearest-zero eigenvector).
//!
//! The closed forms hold for equal couplings (`P_i = P`, `C_i = C`), resonant
//! coupling field, and small probe detuning; they are exact to first order in
//! `Delta_p`. Ground components are zeroth order with the geometric pattern
//! `alpha_{g_{j+1}} / alpha_{g_j} = -P / C`; excited components are linear in
//! `Delta_p` and follow from degenerate perturbation theory (the first-order
//! correction to the dark state is purely excited-state because the bright
//! dressed states pair as `+-Omega`). Every coefficient satisfies the
//! eigenvalue equation of the chain Hamiltonian to first order; the
//! agreement test against the numeric eigensolver pins this down.

use crate::error::{Error, Result};
use crate::linalg::{nearest_zero_eigenpair, SymmetricTridiagonal};
use crate::model::{excited_index, ground_index};
use crate::scalar::Scalar;

/// Dressed-state coefficient vector in state order `g1, e1, g2, ..., gn`.
#[derive(Debug, Clone, PartialEq)]
pub struct DarkState<T> {
    n_states: usize,
    alpha: Vec<T>,
    normalized: bool,
}

impl<T: Scalar> DarkState<T> {
    pub fn from_components(alpha: Vec<T>, normalized: bool) -> Self {
        assert!(
            alpha.len() >= 3 && alpha.len() % 2 == 1,
            "chain atoms have odd state count >= 3"
        );
        Self {
            n_states: alpha.len(),
            alpha,
            normalized,
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_ground(&self) -> usize {
        self.n_states.div_ceil(2)
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Coefficient on `|g_j>` (1-based `j`).
    pub fn ground_component(&self, j: usize) -> T {
        self.alpha[ground_index(j)]
    }

    /// Coefficient on `|e_j>` (1-based `j`).
    pub fn excited_component(&self, j: usize) -> T {
        self.alpha[excited_index(j)]
    }

    pub fn norm(&self) -> T {
        self.alpha
            .iter()
            .fold(T::zero(), |acc, x| acc + *x * *x)
            .sqrt()
    }

    /// Copy with the global sign flipped, if needed, so that the overlap with
    /// `reference` is non-negative. Eigenvector gauge is arbitrary; comparisons
    /// must fix it.
    pub fn aligned_with(&self, reference: &DarkState<T>) -> DarkState<T> {
        assert_eq!(self.n_states, reference.n_states);
        let overlap = self
            .alpha
            .iter()
            .zip(&reference.alpha)
            .fold(T::zero(), |acc, (a, b)| acc + *a * *b);
        if overlap < T::zero() {
            DarkState {
                n_states: self.n_states,
                alpha: self.alpha.iter().map(|x| -*x).collect(),
                normalized: self.normalized,
            }
        } else {
            self.clone()
        }
    }
}

/// Closed-form dark state for equal couplings, resonant coupling field and
/// small probe detuning (`n_ground` in {2, 3, 4}); unnormalized.
pub fn dark_state_analytic<T: Scalar>(
    n_ground: usize,
    p: T,
    c: T,
    delta_p: T,
) -> Result<DarkState<T>> {
    if !(p > T::zero()) {
        return Err(Error::DegenerateInput(format!(
            "closed-form dark state requires probe Rabi frequency > 0, got {p}"
        )));
    }
    let small = T::of(0.1) * p.min(c.abs());
    if delta_p.abs() > small && small > T::zero() {
        log::warn!(
            "probe detuning {delta_p} outside the first-order regime (|Delta_p| <= 0.1 min(P, C))"
        );
    }
    let o2 = c * c + p * p;
    let o4 = o2 * o2;
    let two = T::of(2.0);
    let alpha = match n_ground {
        2 => vec![c / p, delta_p * c / o2, -T::one()],
        3 => {
            let n2 = o4 - c * c * p * p;
            vec![
                c * c / (p * p),
                delta_p * c * c * (o2 + p * p) / (p * n2),
                -c / p,
                // sign fixed by the g3 row of the eigenvalue equation
                -delta_p * c * (two * o2 - p * p) / n2,
                T::one(),
            ]
        }
        4 => {
            let p2 = p * p;
            let c2 = c * c;
            let n2 = o4 - two * c2 * p2; // = C^4 + P^4
            vec![
                -c2 * c / (p2 * p),
                -delta_p * c2 * c * (o4 + two * p2 * p2) / (p2 * o2 * n2),
                c2 / p2,
                delta_p * two * c2 * o2 / (p * n2),
                -c / p,
                delta_p * c * (o4 + two * c2 * c2) / (o2 * (two * c2 * p2 - o4)),
                T::one(),
            ]
        }
        _ => {
            return Err(Error::UnsupportedChainLength(
                n_ground,
                "closed forms exist for n_ground in {2, 3, 4}; use the numeric branch",
            ))
        }
    };
    Ok(DarkState::from_components(alpha, false))
}

/// Normalized nearest-zero eigenvector of the chain Hamiltonian, with the
/// first-significant-component-positive sign convention of the eigensolver.
pub fn dark_state_numeric<T: Scalar>(h: &SymmetricTridiagonal<T>) -> DarkState<T> {
    let (_, v) = nearest_zero_eigenpair(h);
    DarkState::from_components(v, true)
}

/// Rescale to unit Euclidean norm, preserving direction.
pub fn normalize<T: Scalar>(s: &DarkState<T>) -> Result<DarkState<T>> {
    let norm = s.norm();
    if norm == T::zero() || !norm.is_finite() {
        return Err(Error::DegenerateInput(format!(
            "cannot normalize a dark state with norm {norm}"
        )));
    }
    Ok(DarkState {
        n_states: s.n_states,
        alpha: s.alpha.iter().map(|x| *x / norm).collect(),
        normalized: true,
    })
}
