//! Checks that tie the relations to the elliptic curve when `k = 1`: the
//! relations vanish on the graph of `sigma(z) = z + (2-n) tau`, and point
//! modules are given by `sigma`-orbits.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_relations, monomial_index, theta_row, RelationSystem};
use crate::error::{Error, Result};
use crate::theta::{Characteristic, ThetaBasis, TorusParams, TorusPoint};

/// Samples per candidate used by [`calibrate_characteristics`].
pub const GRAPH_SAMPLES_FOR_CALIBRATION: usize = 20;
/// Residual a characteristic must reach to count as calibrated.
pub const CALIBRATION_THRESHOLD: f64 = 1e-6;

fn require_k1(k: usize) -> Result<()> {
    if k != 1 {
        return Err(Error::not_applicable(format!(
            "evaluation on E is only available for k = 1 (got k = {k})"
        )));
    }
    Ok(())
}

/// `|C (l (x) r)| / (sigma_max |l| |r|)` for the relation matrix `C`: zero
/// when every relation vanishes on `(l, r)`, of order one for a generic pair.
fn bilinear_residual(sys: &RelationSystem, left: &[Complex64], right: &[Complex64]) -> f64 {
    let n = sys.n;
    let sigma_max = sys.singular_values.first().copied().unwrap_or(0.0);
    let norm = |v: &[Complex64]| v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let scale = sigma_max * norm(left) * norm(right);
    if !(scale > 0.0) {
        return 0.0;
    }
    let mut total = 0.0;
    for row in 0..n * n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, l) in left.iter().enumerate() {
            for (b, r) in right.iter().enumerate() {
                acc += sys.coeffs[(row, monomial_index(n, a, b))] * l * r;
            }
        }
        total += acc.norm_sqr();
    }
    total.sqrt() / scale
}

/// Max over `samples` seeded points `z` of the relations evaluated on
/// `(theta(z), theta(z + (2-n) tau))`, i.e. `sum c_ab theta_a(z) theta_b(sigma z)`
/// for every row, relative to `sigma_max |theta(z)| |theta(sigma z)|`.
pub fn graph_vanishing_residual(
    n: usize,
    k: usize,
    basis: &ThetaBasis,
    tau: Complex64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    graph_vanishing_residual_with_shift(n, k, basis, tau, (2.0 - n as f64) * tau, samples, seed)
}

/// As [`graph_vanishing_residual`] but with the second point `z + shift`.
pub fn graph_vanishing_residual_with_shift(
    n: usize,
    k: usize,
    basis: &ThetaBasis,
    tau: Complex64,
    shift: Complex64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    require_k1(k)?;
    let sys = build_relations(n, k, basis, tau)?;
    let params = *basis.params();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let z = TorusPoint::new(rng.random(), rng.random()).to_complex(&params);
        let left = theta_row(basis, z, false)?;
        let right = theta_row(basis, z + shift, false)?;
        worst = worst.max(bilinear_residual(&sys, &left, &right));
    }
    Ok(worst)
}

/// Outcome of a characteristic search.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub chars: Characteristic,
    pub residual: f64,
    /// Every candidate with its residual (`None` when evaluation failed).
    pub table: Vec<(Characteristic, Option<f64>)>,
}

/// Pick the characteristic from [`Characteristic::candidates`] that minimises
/// the graph-vanishing residual for `Q_{n,1}`.
pub fn calibrate_characteristics(
    n: usize,
    params: &TorusParams,
    tau: Complex64,
) -> Result<Calibration> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    if n == 1 {
        // no relations at all
        return Ok(Calibration {
            chars: Characteristic::ZERO,
            residual: 0.0,
            table: Vec::new(),
        });
    }
    let table: Vec<(Characteristic, Option<f64>)> = Characteristic::candidates(n)
        .into_iter()
        .map(|chars| {
            let residual = ThetaBasis::new(n, chars, *params)
                .and_then(|basis| {
                    graph_vanishing_residual(n, 1, &basis, tau, GRAPH_SAMPLES_FOR_CALIBRATION, 0)
                })
                .ok()
                .filter(|r| r.is_finite());
            (chars, residual)
        })
        .collect();
    let (chars, residual) = table
        .iter()
        .filter_map(|(c, r)| r.map(|r| (*c, r)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((Characteristic::ZERO, f64::INFINITY));
    if !(residual < CALIBRATION_THRESHOLD) {
        return Err(Error::CalibrationFailed {
            a: chars.a,
            b: chars.b,
            best_residual: residual,
        });
    }
    Ok(Calibration {
        chars,
        residual,
        table,
    })
}

/// One point of a point-module orbit with the evaluation of the degree-one
/// basis there.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    pub point: TorusPoint,
    pub values: Vec<Complex64>,
}

impl OrbitPoint {
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Whether the linear form `sum_alpha b_alpha x_alpha` vanishes at this
    /// point, i.e. annihilates the corresponding component of the module.
    pub fn annihilated_by(&self, b: &[Complex64], rel_tol: f64) -> bool {
        let pairing: Complex64 = b.iter().zip(&self.values).map(|(x, y)| x * y).sum();
        let b_norm = b.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        pairing.norm() <= rel_tol * b_norm * self.norm()
    }
}

/// The points `sigma^{-j} p` for `j = 0..=steps`, with `sigma(z) = z + (2-n) tau`,
/// each with `(theta_0, ..., theta_{n-1})` evaluated there.
pub fn point_module_orbit(
    n: usize,
    k: usize,
    basis: &ThetaBasis,
    tau: Complex64,
    p: TorusPoint,
    steps: usize,
) -> Result<Vec<OrbitPoint>> {
    require_k1(k)?;
    if basis.n() != n {
        return Err(Error::invalid(format!(
            "basis has order {}, expected {n}",
            basis.n()
        )));
    }
    let params = basis.params();
    let step = TorusPoint::from_complex(tau, params).scale(2 - n as i64);
    let mut point = p;
    let mut out = Vec::with_capacity(steps + 1);
    for _ in 0..=steps {
        let values = basis.eval_all(point.to_complex(params))?;
        out.push(OrbitPoint { point, values });
        point = point - step;
    }
    Ok(out)
}

/// Max over consecutive orbit points of the relations evaluated on
/// `(theta(p_{j+1}), theta(p_j))`, normalised as in [`graph_vanishing_residual`].
/// Vanishes exactly when the orbit defines a point module of `Q_{n,1}`.
pub fn orbit_relation_residual(
    n: usize,
    basis: &ThetaBasis,
    tau: Complex64,
    orbit: &[OrbitPoint],
) -> Result<f64> {
    let sys = build_relations(n, 1, basis, tau)?;
    Ok(orbit
        .windows(2)
        .map(|pair| bilinear_residual(&sys, &pair[1].values, &pair[0].values))
        .fold(0.0, f64::max))
}
