//! Order-`n` theta functions on the complex torus `E = C / (Z + Z eta)`.
//!
//! The basis is
//!
//! ```text
//! theta_alpha(z) = sum_{m = alpha (mod n)} exp(pi i (m+a)^2 eta / n + 2 pi i (m+a)(z+b))
//! ```
//!
//! for a characteristic `(a, b)`. Every member satisfies
//! `theta(z+1) = e^{2 pi i a} theta(z)` and
//! `theta(z+eta) = e^{-pi i n eta - 2 pi i n (z+b)} theta(z)`, and the basis is
//! permuted by the Heisenberg translations `z -> z + 1/n`, `z -> z + eta/n`.
//!
//! The characteristic `(n/2, 1/(2n))` returned by [`Characteristic::canonical`]
//! is the one under which the quadratic relations of `Q_{n,k}(E, tau)` have the
//! expected rank and the R-matrix satisfies the Yang-Baxter equation; see
//! [`crate::relations::calibrate_characteristics`].

use std::f64::consts::PI;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute bound on the discarded tail of a theta series.
pub const DEFAULT_TRUNC_TOL: f64 = 1e-14;
/// Default minimum modulus allowed for a theta value used as a denominator.
pub const DEFAULT_DENOM_GUARD: f64 = 1e-10;
/// Hard cap on the number of series terms.
pub const DEFAULT_MAX_TERMS: u64 = 1_000_000;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Lattice datum `eta` of `Lambda = Z + Z eta` plus series precision controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusParams {
    eta: Complex64,
    trunc_tol: f64,
    denom_guard: f64,
    max_terms: u64,
}

impl TorusParams {
    pub fn new(eta: Complex64) -> Result<Self> {
        Self::with_tolerances(eta, DEFAULT_TRUNC_TOL, DEFAULT_DENOM_GUARD)
    }

    pub fn with_tolerances(eta: Complex64, trunc_tol: f64, denom_guard: f64) -> Result<Self> {
        if !(eta.im > 0.0) || !eta.re.is_finite() || !eta.im.is_finite() {
            return Err(Error::invalid(format!(
                "Im(eta) must be positive, got eta = {eta}"
            )));
        }
        if !(trunc_tol > 0.0) || !(denom_guard > 0.0) {
            return Err(Error::invalid("trunc_tol and denom_guard must be positive"));
        }
        Ok(Self {
            eta,
            trunc_tol,
            denom_guard,
            max_terms: DEFAULT_MAX_TERMS,
        })
    }

    pub fn with_max_terms(mut self, max_terms: u64) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    pub fn trunc_tol(&self) -> f64 {
        self.trunc_tol
    }

    pub fn denom_guard(&self) -> f64 {
        self.denom_guard
    }

    pub fn max_terms(&self) -> u64 {
        self.max_terms
    }
}

impl Default for TorusParams {
    fn default() -> Self {
        Self {
            eta: I,
            trunc_tol: DEFAULT_TRUNC_TOL,
            denom_guard: DEFAULT_DENOM_GUARD,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

/// Characteristic offsets `(a, b)` of the theta basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Characteristic {
    pub a: f64,
    pub b: f64,
}

impl Characteristic {
    pub const ZERO: Characteristic = Characteristic { a: 0.0, b: 0.0 };

    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    /// `(n/2, 1/(2n))`: the characteristic matching the algebra's relations.
    pub fn canonical(n: usize) -> Self {
        Self {
            a: n as f64 / 2.0,
            b: 1.0 / (2.0 * n as f64),
        }
    }

    /// The four half-integer characteristics `{0, 1/2}^2`.
    pub fn half_integer() -> [Characteristic; 4] {
        [
            Characteristic::new(0.0, 0.0),
            Characteristic::new(0.0, 0.5),
            Characteristic::new(0.5, 0.0),
            Characteristic::new(0.5, 0.5),
        ]
    }

    /// Search space used by calibration: the half-integer family followed by
    /// the canonical characteristic for `n`.
    pub fn candidates(n: usize) -> Vec<Characteristic> {
        let mut out = Self::half_integer().to_vec();
        out.push(Self::canonical(n));
        out
    }
}

impl Default for Characteristic {
    fn default() -> Self {
        Self::ZERO
    }
}

/// Basis `{theta_alpha : alpha in Z_n}` of the order-`n` theta functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaBasis {
    n: usize,
    chars: Characteristic,
    params: TorusParams,
}

impl ThetaBasis {
    pub fn new(n: usize, chars: Characteristic, params: TorusParams) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("theta order n must be at least 1"));
        }
        if !chars.a.is_finite() || !chars.b.is_finite() {
            return Err(Error::invalid("characteristic offsets must be finite"));
        }
        Ok(Self { n, chars, params })
    }

    /// Basis with [`Characteristic::canonical`].
    pub fn canonical(n: usize, params: TorusParams) -> Result<Self> {
        Self::new(n, Characteristic::canonical(n.max(1)), params)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chars(&self) -> Characteristic {
        self.chars
    }

    pub fn params(&self) -> &TorusParams {
        &self.params
    }

    pub fn reduce(&self, alpha: i64) -> usize {
        alpha.rem_euclid(self.n as i64) as usize
    }

    /// Half-width (in units of the summation variable `m + a`, centred on the
    /// peak term) that bounds the discarded tail by `trunc_tol`.
    pub fn truncation_half_width(&self, z: Complex64) -> Result<f64> {
        let n = self.n as f64;
        let c = PI * self.params.eta.im / n;
        let y = z.im;
        // log-modulus of a term is f(t) = -c t^2 - 2 pi y t, peaking at t* with f(t*) = c t*^2.
        let t_star = -PI * y / c;
        let f_star = c * t_star * t_star;
        let tol = self.params.trunc_tol;
        let tail = |r: f64| {
            let denom = 1.0 - (-2.0 * c * r).exp();
            2.0 * (f_star - c * r * r).exp() / denom
        };
        let mut r = ((f_star + (2.0 / tol).ln()).max(0.0) / c).sqrt() + 1.0;
        while !(tail(r) < tol) {
            r *= 1.25;
            if !r.is_finite() || r / n > self.params.max_terms as f64 {
                break;
            }
        }
        let terms = (2.0 * r / n).ceil() + 1.0;
        if !terms.is_finite() || terms > self.params.max_terms as f64 {
            return Err(Error::NonConvergent {
                terms: if terms.is_finite() {
                    terms as u64
                } else {
                    u64::MAX
                },
                cap: self.params.max_terms,
            });
        }
        Ok(r)
    }

    /// Evaluate `theta_alpha(z)`; `alpha` is reduced mod `n`.
    pub fn eval(&self, alpha: i64, z: Complex64) -> Result<Complex64> {
        let r = self.truncation_half_width(z)?;
        Ok(self.eval_with_half_width(alpha, z, r))
    }

    /// Series summed over `|m + a - t*| <= half_width`, without a tail check.
    pub fn eval_with_half_width(&self, alpha: i64, z: Complex64, half_width: f64) -> Complex64 {
        let n = self.n as f64;
        let eta = self.params.eta;
        let shift = self.reduce(alpha) as f64 + self.chars.a;
        let t_star = -n * z.im / eta.im;
        let q_lo = ((t_star - half_width - shift) / n).ceil() as i64;
        let q_hi = ((t_star + half_width - shift) / n).floor() as i64;
        let zb = z + self.chars.b;
        (q_lo..=q_hi)
            .map(|q| {
                let t = q as f64 * n + shift;
                (I * PI * t * t * eta / n + 2.0 * I * PI * t * zb).exp()
            })
            .sum()
    }

    /// All `n` basis values at `z`, in index order.
    pub fn eval_all(&self, z: Complex64) -> Result<Vec<Complex64>> {
        let r = self.truncation_half_width(z)?;
        Ok((0..self.n as i64)
            .map(|alpha| self.eval_with_half_width(alpha, z, r))
            .collect())
    }

    /// Like [`eval`](Self::eval) but rejects values whose modulus falls below
    /// the denominator guard.
    pub fn eval_denominator(&self, alpha: i64, z: Complex64) -> Result<Complex64> {
        let value = self.eval(alpha, z)?;
        if value.norm() < self.params.denom_guard {
            return Err(Error::DenominatorNearZero {
                index: self.reduce(alpha),
                value: value.norm(),
            });
        }
        Ok(value)
    }
}

/// Evaluate `theta_alpha(z)` for the given basis.
pub fn theta(basis: &ThetaBasis, alpha: i64, z: Complex64) -> Result<Complex64> {
    basis.eval(alpha, z)
}

/// A pair of functional-equation residuals with the magnitude they should be
/// compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub first: f64,
    pub second: f64,
    /// `max(1, |values involved|)`.
    pub scale: f64,
}

impl Residuals {
    pub fn max_relative(&self) -> f64 {
        self.first.max(self.second) / self.scale
    }

    pub fn within(&self, rel_tol: f64) -> bool {
        self.max_relative() <= rel_tol
    }
}

/// Residuals of the lattice laws
/// `theta(z+1) = e^{2 pi i a} theta(z)` and
/// `theta(z+eta) = e^{-pi i n eta - 2 pi i n (z+b)} theta(z)`.
pub fn quasiperiodicity_residuals(
    basis: &ThetaBasis,
    alpha: i64,
    z: Complex64,
) -> Result<Residuals> {
    let n = basis.n as f64;
    let Characteristic { a, b } = basis.chars;
    let eta = basis.params.eta;
    let at_z = basis.eval(alpha, z)?;
    let at_z1 = basis.eval(alpha, z + 1.0)?;
    let at_zeta = basis.eval(alpha, z + eta)?;
    let f1 = (2.0 * I * PI * a).exp();
    let f2 = (-I * PI * n * eta - 2.0 * I * PI * n * (z + b)).exp();
    Ok(Residuals {
        first: (at_z1 - f1 * at_z).norm(),
        second: (at_zeta - f2 * at_z).norm(),
        scale: 1f64.max(at_z.norm()).max(at_z1.norm()).max(at_zeta.norm()),
    })
}

/// Residuals of the Heisenberg laws
/// `theta_alpha(z+1/n) = e^{2 pi i (alpha+a)/n} theta_alpha(z)` and
/// `theta_alpha(z+eta/n) = e^{-pi i eta/n - 2 pi i (z+b)} theta_{alpha+1}(z)`.
pub fn heisenberg_residuals(basis: &ThetaBasis, alpha: i64, z: Complex64) -> Result<Residuals> {
    let n = basis.n as f64;
    let Characteristic { a, b } = basis.chars;
    let eta = basis.params.eta;
    let reduced = basis.reduce(alpha) as f64;
    let at_z = basis.eval(alpha, z)?;
    let next_at_z = basis.eval(alpha + 1, z)?;
    let at_shift1 = basis.eval(alpha, z + 1.0 / n)?;
    let at_shift2 = basis.eval(alpha, z + eta / n)?;
    let f1 = (2.0 * I * PI * (reduced + a) / n).exp();
    let f2 = (-I * PI * eta / n - 2.0 * I * PI * (z + b)).exp();
    Ok(Residuals {
        first: (at_shift1 - f1 * at_z).norm(),
        second: (at_shift2 - f2 * next_at_z).norm(),
        scale: 1f64
            .max(at_z.norm())
            .max(next_at_z.norm())
            .max(at_shift1.norm())
            .max(at_shift2.norm()),
    })
}

/// A point `u + v eta` of `E`, stored in lattice coordinates reduced to `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TorusPoint {
    u: f64,
    v: f64,
}

fn unit_reduce(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Signed distance of `x` to the nearest integer, in `[-1/2, 1/2]`.
fn wrap(x: f64) -> f64 {
    x - x.round()
}

impl TorusPoint {
    pub const ZERO: TorusPoint = TorusPoint { u: 0.0, v: 0.0 };

    pub fn new(u: f64, v: f64) -> Self {
        Self {
            u: unit_reduce(u),
            v: unit_reduce(v),
        }
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// Lattice coordinates of a complex number.
    pub fn from_complex(z: Complex64, params: &TorusParams) -> Self {
        let eta = params.eta;
        let v = z.im / eta.im;
        let u = z.re - v * eta.re;
        Self::new(u, v)
    }

    pub fn to_complex(&self, params: &TorusParams) -> Complex64 {
        torus_to_complex(*self, params)
    }

    /// `c * self` for an integer `c`.
    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.u * c as f64, self.v * c as f64)
    }

    /// Wraparound-aware sup-distance in lattice coordinates.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        wrap(self.u - other.u)
            .abs()
            .max(wrap(self.v - other.v).abs())
    }

    /// Distance to the nearest point of `(1/n) Lambda`.
    pub fn distance_to_torsion(&self, n: usize) -> f64 {
        let n = n as f64;
        (wrap(self.u * n).abs() / n).max(wrap(self.v * n).abs() / n)
    }
}

impl Add for TorusPoint {
    type Output = TorusPoint;
    fn add(self, rhs: Self) -> Self {
        TorusPoint::new(self.u + rhs.u, self.v + rhs.v)
    }
}

impl Sub for TorusPoint {
    type Output = TorusPoint;
    fn sub(self, rhs: Self) -> Self {
        TorusPoint::new(self.u - rhs.u, self.v - rhs.v)
    }
}

impl Neg for TorusPoint {
    type Output = TorusPoint;
    fn neg(self) -> Self {
        TorusPoint::new(-self.u, -self.v)
    }
}

/// `u + v eta`.
pub fn torus_to_complex(p: TorusPoint, params: &TorusParams) -> Complex64 {
    p.u + p.v * params.eta
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_z(rng: &mut ChaCha8Rng, params: &TorusParams) -> Complex64 {
        TorusPoint::new(rng.random(), rng.random()).to_complex(params)
    }

    #[test]
    fn classical_theta3_at_i() {
        // Independent oracle: direct summation of sum_m exp(-pi m^2).
        let oracle: f64 = (-60i64..=60).map(|m| (-PI * (m * m) as f64).exp()).sum();
        let basis = ThetaBasis::new(1, Characteristic::ZERO, TorusParams::default()).unwrap();
        let value = theta(&basis, 0, Complex64::new(0.0, 0.0)).unwrap();
        assert!((value.re - oracle).abs() < 1e-12);
        assert!(value.im.abs() < 1e-12);
        assert!((value.re - 1.086_434_811_213_308).abs() < 1e-12);
    }

    #[test]
    fn index_is_reduced_mod_n() {
        let basis = ThetaBasis::new(3, Characteristic::ZERO, TorusParams::default()).unwrap();
        let z = Complex64::new(0.21, 0.33);
        assert_eq!(basis.eval(3, z).unwrap(), basis.eval(0, z).unwrap());
        assert_eq!(basis.eval(-2, z).unwrap(), basis.eval(1, z).unwrap());
    }

    #[test]
    fn parity_under_negation() {
        let params = TorusParams::default();
        let basis = ThetaBasis::new(3, Characteristic::ZERO, params).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let w = random_z(&mut rng, &params);
            let lhs = basis.eval(1, -w).unwrap();
            let rhs = basis.eval(-1, w).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn quasiperiodicity_for_zero_and_half_chars() {
        let params = TorusParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, chars) in [
            (3, Characteristic::ZERO),
            (4, Characteristic::new(0.5, 0.5)),
        ] {
            let basis = ThetaBasis::new(n, chars, params).unwrap();
            for _ in 0..20 {
                let z = random_z(&mut rng, &params);
                for alpha in 0..n as i64 {
                    let res = quasiperiodicity_residuals(&basis, alpha, z).unwrap();
                    assert!(res.within(1e-12), "{res:?}");
                }
            }
        }
    }

    #[test]
    fn n_one_periodicity_at_origin() {
        let basis = ThetaBasis::new(1, Characteristic::ZERO, TorusParams::default()).unwrap();
        let res = quasiperiodicity_residuals(&basis, 0, Complex64::new(0.0, 0.0)).unwrap();
        assert!(res.first < 1e-15);
    }

    #[test]
    fn heisenberg_laws_and_cyclic_index() {
        let params = TorusParams::default();
        let basis = ThetaBasis::new(3, Characteristic::ZERO, params).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let z = random_z(&mut rng, &params);
            assert!(heisenberg_residuals(&basis, 0, z).unwrap().within(1e-12));
        }
        // alpha = 4 is sent to alpha = 0 for n = 5.
        let basis5 = ThetaBasis::canonical(5, params).unwrap();
        let z = Complex64::new(0.3, 0.4);
        assert!(heisenberg_residuals(&basis5, 4, z).unwrap().within(1e-12));
    }

    #[test]
    fn heisenberg_equals_quasiperiodicity_for_n_one() {
        let basis =
            ThetaBasis::new(1, Characteristic::new(0.5, 0.0), TorusParams::default()).unwrap();
        let z = Complex64::new(0.37, 0.21);
        let h = heisenberg_residuals(&basis, 0, z).unwrap();
        let q = quasiperiodicity_residuals(&basis, 0, z).unwrap();
        assert_eq!(h.first, q.first);
    }

    #[test]
    fn nonconvergent_for_degenerate_lattice() {
        let params = TorusParams::new(Complex64::new(0.0, 1e-12)).unwrap();
        let basis = ThetaBasis::new(2, Characteristic::ZERO, params).unwrap();
        assert!(matches!(
            basis.eval(0, Complex64::new(0.1, 0.0)),
            Err(Error::NonConvergent { .. })
        ));
    }

    #[test]
    fn params_validation() {
        assert!(TorusParams::new(Complex64::new(1.0, 0.0)).is_err());
        assert!(TorusParams::with_tolerances(Complex64::new(0.0, 1.0), 0.0, 1e-10).is_err());
        assert!(ThetaBasis::new(0, Characteristic::ZERO, TorusParams::default()).is_err());
    }

    #[test]
    fn torus_points() {
        let params = TorusParams::default();
        assert_eq!(
            torus_to_complex(TorusPoint::ZERO, &params),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            torus_to_complex(TorusPoint::new(0.5, 0.5), &params),
            Complex64::new(0.5, 0.5)
        );
        let p = TorusPoint::new(0.75, 0.25);
        let q = TorusPoint::new(0.5, 0.9);
        let sum = torus_to_complex(p + q, &params);
        let direct = torus_to_complex(p, &params) + torus_to_complex(q, &params);
        let diff = TorusPoint::from_complex(sum - direct, &params);
        assert!(diff.distance(&TorusPoint::ZERO) < 1e-12);
        assert!(TorusPoint::new(0.999_999_999_999_9, 0.0).distance(&TorusPoint::ZERO) < 1e-12);
        assert_eq!(TorusPoint::new(-0.25, 1.25), TorusPoint::new(0.75, 0.25));
    }

    #[test]
    fn denominator_guard_trips_at_zero() {
        // theta with characteristic (1/2, 1/2) at n = 1 is the odd Jacobi theta, zero at z = 0.
        let basis =
            ThetaBasis::new(1, Characteristic::new(0.5, 0.5), TorusParams::default()).unwrap();
        assert!(matches!(
            basis.eval_denominator(0, Complex64::new(0.0, 0.0)),
            Err(Error::DenominatorNearZero { index: 0, .. })
        ));
    }
}
