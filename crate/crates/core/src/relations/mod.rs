//! Quadratic relations of `Q_{n,k}(E, tau)` and their numerical certification.
//!
//! Row `(i, j)` of the coefficient matrix holds the relation
//!
//! ```text
//! sum_r  theta_{j-i+r(k-1)}(0) / (theta_{j-i-r}(-tau) theta_{kr}(tau))  x_{j-r} x_{i+r}
//! ```
//!
//! with monomial columns in row-major order `x_a x_b -> a*n + b`.

mod graph;
mod rmatrix;

pub use graph::{
    calibrate_characteristics, graph_vanishing_residual, graph_vanishing_residual_with_shift,
    orbit_relation_residual, point_module_orbit, Calibration, OrbitPoint, CALIBRATION_THRESHOLD,
    GRAPH_SAMPLES_FOR_CALIBRATION,
};
pub use rmatrix::{build_rmatrix, ybe_residual, RMatrix};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::arith;
use crate::error::{Error, Result};
use crate::theta::{ThetaBasis, TorusParams, TorusPoint};

pub type CMatrix = DMatrix<Complex64>;

/// Default relative singular-value threshold for rank decisions.
pub const DEFAULT_RANK_REL_TOL: f64 = 1e-8;
/// Smallest spectral gap at which a rank is reported.
pub const MIN_SPECTRAL_GAP: f64 = 10.0;
/// Minimum torus distance from `(1/n) Lambda` for sampled generic points.
pub const GENERIC_MARGIN: f64 = 0.01;

/// The `n^2` relations with their singular-value profile.
#[derive(Debug, Clone)]
pub struct RelationSystem {
    pub n: usize,
    pub k: usize,
    pub tau: Complex64,
    pub basis: ThetaBasis,
    pub coeffs: CMatrix,
    /// Descending.
    pub singular_values: Vec<f64>,
}

/// Column of the monomial `x_a x_b`.
pub fn monomial_index(n: usize, a: usize, b: usize) -> usize {
    a * n + b
}

pub(crate) fn check_algebra(n: usize, k: usize, basis: &ThetaBasis) -> Result<()> {
    arith::negcf(n as i64, k as i64)?;
    if basis.n() != n {
        return Err(Error::invalid(format!(
            "basis has order {}, expected {n}",
            basis.n()
        )));
    }
    Ok(())
}

fn modn(x: i64, n: usize) -> usize {
    x.rem_euclid(n as i64) as usize
}

/// Theta values at one point for every index in `Z_n`, optionally guarded.
pub(crate) fn theta_row(basis: &ThetaBasis, z: Complex64, guard: bool) -> Result<Vec<Complex64>> {
    let values = basis.eval_all(z)?;
    if guard {
        let limit = basis.params().denom_guard();
        if let Some((index, v)) = values.iter().enumerate().find(|(_, v)| v.norm() < limit) {
            return Err(Error::DenominatorNearZero {
                index,
                value: v.norm(),
            });
        }
    }
    Ok(values)
}

/// Fill an `n^2 x n^2` matrix whose row `(i, j)` is
/// `sum_r num[j-i+r(k-1)] / (den_a[j-i-r] den_b[kr]) e_{j-r} (x) e_{i+r}`.
pub(crate) fn fill_theta_rows(
    n: usize,
    k: usize,
    num: &[Complex64],
    den_diff: &[Complex64],
    den_kr: &[Complex64],
) -> CMatrix {
    let size = n * n;
    let (ni, ki) = (n as i64, k as i64);
    let mut m = CMatrix::zeros(size, size);
    for i in 0..ni {
        for j in 0..ni {
            let row = monomial_index(n, i as usize, j as usize);
            for r in 0..ni {
                let c = num[modn(j - i + r * (ki - 1), n)]
                    / (den_diff[modn(j - i - r, n)] * den_kr[modn(ki * r, n)]);
                let col = monomial_index(n, modn(j - r, n), modn(i + r, n));
                m[(row, col)] += c;
            }
        }
    }
    m
}

pub(crate) fn sorted_singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Construct the relation matrix of `Q_{n,k}(E, tau)`.
pub fn build_relations(
    n: usize,
    k: usize,
    basis: &ThetaBasis,
    tau: Complex64,
) -> Result<RelationSystem> {
    check_algebra(n, k, basis)?;
    let at_zero = theta_row(basis, Complex64::new(0.0, 0.0), false)?;
    let at_minus = theta_row(basis, -tau, true)?;
    let at_plus = theta_row(basis, tau, true)?;
    let coeffs = fill_theta_rows(n, k, &at_zero, &at_minus, &at_plus);
    let singular_values = sorted_singular_values(&coeffs);
    Ok(RelationSystem {
        n,
        k,
        tau,
        basis: *basis,
        coeffs,
        singular_values,
    })
}

impl RelationSystem {
    /// `{n, k, eta, tau, chars, rows, singular_values}` with complex entries as
    /// `[re, im]` and rows in the monomial order of [`monomial_index`].
    pub fn to_json(&self) -> serde_json::Value {
        let pair = |z: Complex64| serde_json::json!([z.re, z.im]);
        let rows: Vec<Vec<serde_json::Value>> = (0..self.coeffs.nrows())
            .map(|r| self.coeffs.row(r).iter().map(|&z| pair(z)).collect())
            .collect();
        let chars = self.basis.chars();
        serde_json::json!({
            "n": self.n,
            "k": self.k,
            "eta": pair(self.basis.params().eta()),
            "tau": pair(self.tau),
            "chars": [chars.a, chars.b],
            "rows": rows,
            "singular_values": self.singular_values,
        })
    }

    /// Whether every nonzero entry lies in its row's weight class
    /// `a + b = i + j (mod n)`.
    pub fn respects_weight_grading(&self) -> bool {
        weight_graded(&self.coeffs, self.n)
    }

    /// Monomial columns with a nonzero coefficient in row `(i, j)`.
    pub fn row_support(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        let row = monomial_index(self.n, i, j);
        (0..self.n * self.n)
            .filter(|&c| self.coeffs[(row, c)] != Complex64::new(0.0, 0.0))
            .map(|c| (c / self.n, c % self.n))
            .collect()
    }
}

pub(crate) fn weight_graded(m: &CMatrix, n: usize) -> bool {
    let zero = Complex64::new(0.0, 0.0);
    (0..n * n).all(|row| {
        let w = (row / n + row % n) % n;
        (0..n * n).all(|col| (col / n + col % n) % n == w || m[(row, col)] == zero)
    })
}

/// Numerical rank with its certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankReport {
    pub rank: usize,
    /// `sigma_rank / sigma_{rank+1}`; infinite at full rank.
    pub gap: f64,
    pub sigma_max: f64,
    pub rel_tol: f64,
}

/// Rank from a descending singular-value list.
pub fn rank_from_singular_values(singular_values: &[f64], rel_tol: f64) -> Result<RankReport> {
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    if !(sigma_max > 0.0) {
        return Err(Error::invalid("relation matrix is zero"));
    }
    let rank = singular_values
        .iter()
        .take_while(|&&s| s > rel_tol * sigma_max)
        .count();
    let gap = match singular_values.get(rank) {
        Some(&next) if next > 0.0 => singular_values[rank - 1] / next,
        _ => f64::INFINITY,
    };
    if gap < MIN_SPECTRAL_GAP {
        return Err(Error::RankAmbiguous { gap });
    }
    Ok(RankReport {
        rank,
        gap,
        sigma_max,
        rel_tol,
    })
}

/// Count of singular values above `rel_tol * sigma_max`, refusing to answer
/// when the spectral gap is below [`MIN_SPECTRAL_GAP`].
pub fn relation_rank(sys: &RelationSystem, rel_tol: f64) -> Result<RankReport> {
    rank_from_singular_values(&sys.singular_values, rel_tol)
}

/// Orthonormal basis (as columns) of the span of the top `dim` right singular
/// directions, i.e. the row space of a rank-`dim` matrix.
pub fn row_space(m: &CMatrix, dim: usize) -> CMatrix {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    v_t.rows(0, dim).transpose()
}

/// Distance from `v` to the column span of an orthonormal `q`.
pub fn projection_residual(q: &CMatrix, v: &DVector<Complex64>) -> f64 {
    let coeffs = q.adjoint() * v;
    (v - q * coeffs).norm()
}

/// Largest principal angle between the column spans of two orthonormal bases.
pub fn max_principal_angle(q1: &CMatrix, q2: &CMatrix) -> f64 {
    let residual = q2 - q1 * (q1.adjoint() * q2);
    let s = residual.singular_values();
    let top = s.iter().copied().fold(0.0f64, f64::max);
    top.min(1.0).asin()
}

/// Residual of the commutator `x_a x_b - x_b x_a` against the relation span.
pub fn commutator_residual(sys: &RelationSystem, dim: usize, a: usize, b: usize) -> f64 {
    let q = row_space(&sys.coeffs, dim);
    let mut v = DVector::zeros(sys.n * sys.n);
    v[monomial_index(sys.n, a, b)] += Complex64::new(1.0, 0.0);
    v[monomial_index(sys.n, b, a)] -= Complex64::new(1.0, 0.0);
    projection_residual(&q, &v)
}

/// Draw a torus point at least [`GENERIC_MARGIN`] from `(1/n) Lambda`.
pub fn sample_generic_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> TorusPoint {
    loop {
        let p = TorusPoint::new(rng.random(), rng.random());
        if p.distance_to_torsion(n) >= GENERIC_MARGIN {
            return p;
        }
    }
}

/// A generic `tau` for `Q_{n,k}`, as a complex number.
pub fn sample_generic_tau<R: Rng + ?Sized>(
    n: usize,
    params: &TorusParams,
    rng: &mut R,
) -> Complex64 {
    sample_generic_point(n, rng).to_complex(params)
}

/// `C(n, 2)`.
pub fn expected_relation_rank(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}
