use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_algebra, fill_theta_rows, monomial_index, theta_row, weight_graded, CMatrix};
use crate::error::Result;
use crate::theta::ThetaBasis;

/// Belavin's operator `R(z)` on `V (x) V`:
///
/// ```text
/// R(z)(e_i (x) e_j) = sum_r theta_{j-i+r(k-1)}(-z+tau) / (theta_{kr}(tau) theta_{j-i-r}(-z)) e_{j-r} (x) e_{i+r}
/// ```
///
/// `op[(out, in)]` uses the same row-major index `a*n + b` on both sides.
#[derive(Debug, Clone)]
pub struct RMatrix {
    pub n: usize,
    pub k: usize,
    pub tau: Complex64,
    pub z: Complex64,
    pub basis: ThetaBasis,
    pub op: CMatrix,
}

impl RMatrix {
    /// The vectors `R(z)(e_i (x) e_j)` as rows, in the layout of
    /// [`RelationSystem::coeffs`](super::RelationSystem::coeffs).
    pub fn image_rows(&self) -> CMatrix {
        self.op.transpose()
    }

    pub fn apply(&self, i: usize, j: usize) -> Vec<Complex64> {
        self.op
            .column(monomial_index(self.n, i, j))
            .iter()
            .copied()
            .collect()
    }

    pub fn respects_weight_grading(&self) -> bool {
        weight_graded(&self.image_rows(), self.n)
    }
}

pub fn build_rmatrix(
    n: usize,
    k: usize,
    basis: &ThetaBasis,
    tau: Complex64,
    z: Complex64,
) -> Result<RMatrix> {
    check_algebra(n, k, basis)?;
    let numer = theta_row(basis, tau - z, false)?;
    let at_minus_z = theta_row(basis, -z, true)?;
    let at_tau = theta_row(basis, tau, true)?;
    let op = fill_theta_rows(n, k, &numer, &at_minus_z, &at_tau).transpose();
    Ok(RMatrix {
        n,
        k,
        tau,
        z,
        basis: *basis,
        op,
    })
}

/// `|| R(u)_12 R(u+v)_23 R(v)_12 - R(v)_23 R(u+v)_12 R(u)_23 ||_F / || lhs ||_F`
/// on `V (x) V (x) V`. Zero for `k = 1`; computed but not meaningful otherwise.
pub fn ybe_residual(
    n: usize,
    k: usize,
    basis: &ThetaBasis,
    tau: Complex64,
    u: Complex64,
    v: Complex64,
) -> Result<f64> {
    let ident = DMatrix::<Complex64>::identity(n, n);
    let r_u = build_rmatrix(n, k, basis, tau, u)?.op;
    let r_v = build_rmatrix(n, k, basis, tau, v)?.op;
    let r_uv = build_rmatrix(n, k, basis, tau, u + v)?.op;
    let on12 = |r: &CMatrix| r.kronecker(&ident);
    let on23 = |r: &CMatrix| ident.kronecker(r);
    let lhs = on12(&r_u) * on23(&r_uv) * on12(&r_v);
    let rhs = on23(&r_v) * on12(&r_uv) * on23(&r_u);
    Ok((&lhs - &rhs).norm() / lhs.norm())
}
