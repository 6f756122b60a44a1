//! Minimal numeric kernel: eigen-decomposition of real symmetric tridiagonal
//! matrices and dense complex linear solves.
//!
//! Everything here is sized for the chain problem (dimension <= 81 for the
//! vectorized 9-state Liouvillian), so dense O(d^3) algorithms are used
//! throughout: QL with implicit shifts for the tridiagonal eigenproblem and
//! LU with partial pivoting for the complex solve.

use crate::error::{Error, Result};
use crate::scalar::{c_zero, Scalar, C};

/// Real symmetric tridiagonal matrix, stored as its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTridiagonal<T> {
    diag: Vec<T>,
    offdiag: Vec<T>,
}

impl<T: Scalar> SymmetricTridiagonal<T> {
    /// `offdiag[i]` couples rows `i` and `i + 1`.
    pub fn new(diag: Vec<T>, offdiag: Vec<T>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Config(
                "tridiagonal matrix must have dimension >= 1".into(),
            ));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Config(format!(
                "off-diagonal length {} does not match dimension {}",
                offdiag.len(),
                diag.len()
            )));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[T] {
        &self.offdiag
    }

    /// Element (i, j); zero outside the three central bands.
    pub fn get(&self, i: usize, j: usize) -> T {
        if i == j {
            self.diag[i]
        } else if i + 1 == j {
            self.offdiag[i]
        } else if j + 1 == i {
            self.offdiag[j]
        } else {
            T::zero()
        }
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            let mut s = self.diag[i].abs();
            if i > 0 {
                s += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                s += self.offdiag[i].abs();
            }
            if s > worst {
                worst = s;
            }
        }
        worst
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length mismatch");
        let mut out = vec![T::zero(); n];
        for i in 0..n {
            let mut s = self.diag[i] * v[i];
            if i > 0 {
                s += self.offdiag[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += self.offdiag[i] * v[i + 1];
            }
            out[i] = s;
        }
        out
    }
}

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![c_zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_assign_at(&mut self, i: usize, j: usize, v: C<T>) {
        self.data[i * self.cols + j] += v;
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).fold(c_zero(), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    /// Largest element magnitude.
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .fold(T::zero(), |acc, z| acc + z.norm())
            })
            .fold(T::zero(), T::max)
    }
}

/// QL with implicit shifts on a tridiagonal matrix.
///
/// `d` holds the diagonal and is overwritten with eigenvalues; `e[i]` couples
/// rows `i` and `i + 1` (entry `e[n-1]` is scratch). When `z` is given it must
/// be the flattened row-major identity; columns accumulate the eigenvectors.
fn ql_implicit<T: Scalar>(d: &mut [T], e: &mut [T], mut z: Option<&mut [T]>) {
    let n = d.len();
    if n <= 1 {
        return;
    }
    let two = T::of(2.0);
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // look for a negligible off-diagonal element to split the problem
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 64, "tridiagonal QL failed to converge");
            // Wilkinson-style shift
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let sign_r = if g >= T::zero() { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zm) = z.as_deref_mut() {
                    for k in 0..n {
                        f = zm[k * n + i + 1];
                        zm[k * n + i + 1] = s * zm[k * n + i] + c * f;
                        zm[k * n + i] = c * zm[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
}

/// Fix eigenvector gauge: first component above the noise floor is positive.
fn apply_sign_convention<T: Scalar>(v: &mut [T]) {
    let thresh = T::epsilon().sqrt();
    for &x in v.iter() {
        if x.abs() > thresh {
            if x < T::zero() {
                for y in v.iter_mut() {
                    *y = -*y;
                }
            }
            return;
        }
    }
}

/// Full eigen-decomposition of a real symmetric tridiagonal matrix.
///
/// Returns `(eigenvalue, unit eigenvector)` pairs in ascending eigenvalue
/// order. Residuals satisfy `||M v - lambda v|| <= 1e-10 ||M||` in `f64`.
pub fn eig_symmetric_tridiagonal<T: Scalar>(m: &SymmetricTridiagonal<T>) -> Vec<(T, Vec<T>)> {
    let n = m.dim();
    let mut d = m.diag.clone();
    let mut e = m.offdiag.clone();
    e.push(T::zero());
    let mut z = vec![T::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = T::one();
    }
    ql_implicit(&mut d, &mut e, Some(&mut z));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("eigenvalues are finite"));
    order
        .into_iter()
        .map(|col| {
            let mut v: Vec<T> = (0..n).map(|k| z[k * n + col]).collect();
            let norm = v.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt();
            for x in v.iter_mut() {
                *x /= norm;
            }
            apply_sign_convention(&mut v);
            (d[col], v)
        })
        .collect()
}

/// Eigenpair with the smallest `|eigenvalue|`; ties break toward the smaller
/// index in ascending order.
pub fn nearest_zero_eigenpair<T: Scalar>(m: &SymmetricTridiagonal<T>) -> (T, Vec<T>) {
    let pairs = eig_symmetric_tridiagonal(m);
    let mut best = 0usize;
    for (i, (val, _)) in pairs.iter().enumerate().skip(1) {
        if val.abs() < pairs[best].0.abs() {
            best = i;
        }
    }
    let (val, vec) = &pairs[best];
    (*val, vec.clone())
}

/// Solve `A x = b` for dense complex `A` by LU with partial pivoting.
pub fn solve_complex_linear<T: Scalar>(a: &ComplexMatrix<T>, b: &[C<T>]) -> Result<Vec<C<T>>> {
    if a.rows != a.cols {
        return Err(Error::Config(format!(
            "matrix not square: {}x{}",
            a.rows, a.cols
        )));
    }
    if b.len() != a.rows {
        return Err(Error::Config(format!(
            "rhs length {} does not match dimension {}",
            b.len(),
            a.rows
        )));
    }
    let n = a.rows;
    let mut lu = a.data.clone();
    let mut x = b.to_vec();
    let scale = a.max_abs();
    let threshold = scale * T::epsilon() * T::of(n as f64) * T::of(16.0);

    for k in 0..n {
        // pivot: largest magnitude in column k at or below the diagonal
        let mut piv = k;
        let mut piv_mag = lu[k * n + k].norm();
        for i in (k + 1)..n {
            let mag = lu[i * n + k].norm();
            if mag > piv_mag {
                piv = i;
                piv_mag = mag;
            }
        }
        if piv_mag <= threshold {
            return Err(Error::SingularSystem {
                pivot: piv_mag.to_f64().unwrap_or(0.0),
                threshold: threshold.to_f64().unwrap_or(0.0),
            });
        }
        if piv != k {
            for j in 0..n {
                lu.swap(k * n + j, piv * n + j);
            }
            x.swap(k, piv);
        }
        let inv_piv = C::new(T::one(), T::zero()) / lu[k * n + k];
        for i in (k + 1)..n {
            let factor = lu[i * n + k] * inv_piv;
            lu[i * n + k] = factor;
            for j in (k + 1)..n {
                let sub = factor * lu[k * n + j];
                lu[i * n + j] -= sub;
            }
            let sub = factor * x[k];
            x[i] -= sub;
        }
    }
    // back substitution
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s -= lu[i * n + j] * x[j];
        }
        x[i] = s / lu[i * n + i];
    }
    Ok(x)
}

/// Householder reduction of a dense real symmetric matrix (lower triangle) to
/// tridiagonal form; values-only, no transform accumulation.
fn householder_tridiagonalize<T: Scalar>(a: &mut [T], n: usize) -> (Vec<T>, Vec<T>) {
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let mut scale = T::zero();
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == T::zero() {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = T::zero();
                for j in 0..=l {
                    let mut g_acc = T::zero();
                    for k in 0..=j {
                        g_acc += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g_acc += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] = a[j * n + k] - f * e[k] - g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    e[0] = T::zero();
    (d, e)
}

/// Eigenvalues (ascending) of a Hermitian complex matrix; values only.
///
/// Works through the 2d x 2d real symmetric embedding `[[Re, -Im], [Im, Re]]`
/// whose spectrum is that of the input doubled. Only the lower triangle of
/// the input is referenced, so slight Hermiticity violations are symmetrized
/// away rather than amplified.
pub fn hermitian_eigenvalues<T: Scalar>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    if m.rows != m.cols {
        return Err(Error::Config(format!(
            "matrix not square: {}x{}",
            m.rows, m.cols
        )));
    }
    let d = m.rows;
    let n = 2 * d;
    let mut a = vec![T::zero(); n * n];
    for i in 0..d {
        for j in 0..=i {
            let z = m.get(i, j);
            a[i * n + j] = z.re;
            a[(i + d) * n + (j + d)] = z.re;
            a[(i + d) * n + j] = z.im;
            // mirror of the Im block within the lower triangle: (-Im)^T = Im
            if i != j {
                a[(j + d) * n + i] = -z.im;
            }
        }
    }
    let (mut diag, mut off) = householder_tridiagonalize(&mut a, n);
    // shift the coupling convention: off[i] couples (i, i+1)
    off.rotate_left(1);
    ql_implicit(&mut diag, &mut off, None);
    diag.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    // spectrum is doubled; average each adjacent pair
    let half = T::of(0.5);
    Ok((0..d)
        .map(|k| (diag[2 * k] + diag[2 * k + 1]) * half)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    type M = SymmetricTridiagonal<f64>;

    fn residual(m: &M, lambda: f64, v: &[f64]) -> f64 {
        let mv = m.mul_vec(v);
        mv.iter()
            .zip(v)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn two_by_two_coupling() {
        let m = M::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let pairs = eig_symmetric_tridiagonal(&m);
        assert_relative_eq!(pairs[0].0, -1.0, epsilon = 1e-14);
        assert_relative_eq!(pairs[1].0, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn resonant_lambda_spectrum() {
        // diag (0,0,0), off (P, C): eigenvalues (-Omega, 0, +Omega)
        let (p, c) = (0.7, 0.25);
        let omega = f64::hypot(p, c);
        let m = M::new(vec![0.0; 3], vec![p, c]).unwrap();
        let pairs = eig_symmetric_tridiagonal(&m);
        assert_relative_eq!(pairs[0].0, -omega, epsilon = 1e-14);
        assert!(pairs[1].0.abs() < 1e-14);
        assert_relative_eq!(pairs[2].0, omega, epsilon = 1e-14);
        for (l, v) in &pairs {
            assert!(residual(&m, *l, v) <= 1e-10 * m.norm_inf());
        }
    }

    #[test]
    fn identity_eigenvalues() {
        let m = M::new(vec![1.0; 3], vec![0.0; 2]).unwrap();
        let pairs = eig_symmetric_tridiagonal(&m);
        for (l, _) in &pairs {
            assert_relative_eq!(*l, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn nearest_zero_null_vector() {
        let (p, c) = (3.0, 4.0);
        let m = M::new(vec![0.0; 3], vec![p, c]).unwrap();
        let (l, v) = nearest_zero_eigenpair(&m);
        assert!(l.abs() < 1e-14);
        // null space is (C, 0, -P), normalized (0.8, 0, -0.6)
        assert_relative_eq!(v[0], 0.8, epsilon = 1e-13);
        assert!(v[1].abs() < 1e-13);
        assert_relative_eq!(v[2], -0.6, epsilon = 1e-13);
    }

    #[test]
    fn nearest_zero_single_entry() {
        let m = M::new(vec![5.0], vec![]).unwrap();
        let (l, v) = nearest_zero_eigenpair(&m);
        assert_eq!(l, 5.0);
        assert_eq!(v, vec![1.0]);
    }

    #[test]
    fn nearest_zero_tie_breaks_ascending() {
        let m = M::new(vec![-1.0, 1.0], vec![0.0]).unwrap();
        let (l, _) = nearest_zero_eigenpair(&m);
        assert_eq!(l, -1.0);
    }

    #[test]
    fn sign_convention_first_nonzero_positive() {
        let m = M::new(vec![0.0; 3], vec![3.0, 4.0]).unwrap();
        for (_, v) in eig_symmetric_tridiagonal(&m) {
            let first = v.iter().find(|x| x.abs() > 1e-8).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn solve_identity() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                C::new(1.0, 0.0)
            } else {
                C::new(0.0, 0.0)
            }
        });
        let b = vec![C::new(1.0, 2.0), C::new(-3.0, 0.5)];
        let x = solve_complex_linear(&a, &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_permutation() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i != j {
                C::new(1.0, 0.0)
            } else {
                C::new(0.0, 0.0)
            }
        });
        let b = vec![C::new(1.0, 0.0), C::new(2.0, 0.0)];
        let x = solve_complex_linear(&a, &b).unwrap();
        assert_relative_eq!(x[0].re, 2.0);
        assert_relative_eq!(x[1].re, 1.0);
    }

    #[test]
    fn solve_rank_deficient_errors() {
        let a = ComplexMatrix::from_fn(2, 2, |_, _| C::new(1.0, 0.0));
        let b = vec![C::new(1.0, 0.0), C::new(2.0, 0.0)];
        match solve_complex_linear(&a, &b) {
            Err(Error::SingularSystem { .. }) => {}
            other => panic!("expected singular system, got {other:?}"),
        }
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let m = M::new(vec![0.3, -1.2, 4.0, 0.01], vec![0.5, 2.0, -0.7]).unwrap();
        let pairs = eig_symmetric_tridiagonal(&m);
        let sum: f64 = pairs.iter().map(|(l, _)| l).sum();
        let trace: f64 = m.diag().iter().sum();
        assert_relative_eq!(sum, trace, epsilon = 1e-10 * m.norm_inf());
    }

    #[test]
    fn hermitian_eigenvalues_known() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let m = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => C::new(1.0, 0.0),
            (0, 1) => C::new(0.0, 1.0),
            _ => C::new(0.0, -1.0),
        });
        let w = hermitian_eigenvalues(&m).unwrap();
        assert_relative_eq!(w[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(w[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn hermitian_eigenvalues_real_diagonal() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                C::new(i as f64, 0.0)
            } else {
                C::new(0.0, 0.0)
            }
        });
        let w = hermitian_eigenvalues(&m).unwrap();
        for (k, v) in w.iter().enumerate() {
            assert_relative_eq!(*v, k as f64, epsilon = 1e-12);
        }
    }
}
