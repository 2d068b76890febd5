//! Exact integer data attached to a coprime pair `n > k >= 1`.
//!
//! `n/k` has a unique negative continued fraction `[n_1, ..., n_g]` with all
//! `n_i >= 2`. From it come the tridiagonal determinants `k_i`, `l_i`, the
//! translation `sigma(z)_i = z_i + (k_i + l_i - n) tau` of `E^g`, the reflections
//! `s_i` generating `Sigma_{n/k}`, and the shape of the characteristic variety.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::theta::TorusPoint;

fn check_pair(n: i64, k: i64) -> Result<()> {
    if k < 1 || n <= k {
        return Err(Error::invalid(format!(
            "need n > k >= 1, got n = {n}, k = {k}"
        )));
    }
    if n.gcd(&k) != 1 {
        return Err(Error::invalid(format!(
            "gcd({n}, {k}) = {} is not 1",
            n.gcd(&k)
        )));
    }
    Ok(())
}

/// Negative continued fraction expansion of `n/k`.
pub fn negcf(n: i64, k: i64) -> Result<Vec<i64>> {
    check_pair(n, k)?;
    let (mut num, mut den) = (n, k);
    let mut out = Vec::new();
    while den != 0 {
        let a = Integer::div_ceil(&num, &den);
        out.push(a);
        (num, den) = (den, a * den - num);
    }
    Ok(out)
}

/// `[c_1, ..., c_g] = c_1 - 1/(c_2 - 1/(... - 1/c_g))` as an exact rational.
///
/// Returns `None` on an empty list or a zero intermediate denominator.
pub fn fold_negcf(cf: &[i64]) -> Option<Ratio<i64>> {
    let (last, rest) = cf.split_last()?;
    let mut acc = Ratio::from_integer(*last);
    for &c in rest.iter().rev() {
        if acc == Ratio::from_integer(0) {
            return None;
        }
        acc = Ratio::from_integer(c) - acc.recip();
    }
    Some(acc)
}

/// Determinant of the tridiagonal matrix with `seq` on the diagonal and `-1`
/// off it; the empty determinant is 1.
pub fn tridiag_det(seq: &[i64]) -> i64 {
    let (mut prev, mut cur) = (0i64, 1i64);
    for &x in seq {
        (prev, cur) = (cur, x * cur - prev);
    }
    cur
}

/// Everything derived from the continued fraction of `n/k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionData {
    pub n: i64,
    pub k: i64,
    pub cf: Vec<i64>,
    pub g: usize,
    /// `k_0, ..., k_{g+1}`.
    pub kseq: Vec<i64>,
    /// `l_0, ..., l_{g+1}`.
    pub lseq: Vec<i64>,
    /// Inverse of `k` mod `n`, in `[1, n)`.
    pub kprime: i64,
    /// `c_i = k_i + l_i - n`, so that `tau_i = c_i tau`.
    pub sigma_coeffs: Vec<i64>,
}

/// Build [`FractionData`], computing `k_i` and `l_i` both as determinants and
/// by the three-term recurrence and checking that the two agree.
pub fn fraction_data(n: i64, k: i64) -> Result<FractionData> {
    let cf = negcf(n, k)?;
    let g = cf.len();

    let mut kseq: Vec<i64> = (0..g).map(|i| tridiag_det(&cf[i..])).collect();
    kseq.push(1);
    kseq.push(0);

    let reversed: Vec<i64> = cf.iter().rev().copied().collect();
    let mut lseq = vec![0, 1];
    lseq.extend((2..=g + 1).map(|i| tridiag_det(&reversed[g + 1 - i..])));

    let mut k_rec = vec![n, k];
    let mut l_rec = vec![0, 1];
    for i in 1..=g {
        k_rec.push(k_rec[i] * cf[i - 1] - k_rec[i - 1]);
        l_rec.push(l_rec[i] * cf[i - 1] - l_rec[i - 1]);
    }
    if k_rec != kseq || l_rec != lseq {
        return Err(Error::Internal(format!(
            "determinant and recurrence disagree: k {kseq:?} vs {k_rec:?}, l {lseq:?} vs {l_rec:?}"
        )));
    }
    if kseq[0] != n || kseq[1] != k || lseq[g + 1] != n {
        return Err(Error::Internal(format!(
            "boundary values wrong for {n}/{k}"
        )));
    }

    let kprime = lseq[g];
    if !(1..n).contains(&kprime) || (k * kprime).rem_euclid(n) != 1 % n {
        return Err(Error::Internal(format!(
            "l_g = {kprime} is not the inverse of {k} mod {n}"
        )));
    }

    let sigma_coeffs = (1..=g).map(|i| kseq[i] + lseq[i] - n).collect();
    Ok(FractionData {
        n,
        k,
        cf,
        g,
        kseq,
        lseq,
        kprime,
        sigma_coeffs,
    })
}

/// Which end of `[m, 2, ..., 2]` / `[2, ..., 2, m]` carries the large entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Last,
}

/// Shape of the characteristic variety `X_{n/k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarietyKind {
    /// `E^g`; every `n_i >= 3`.
    PowerOfE { g: usize },
    /// `S^g E`; `n/k = [m, 2^{g-1}]` or `[2^{g-1}, m]` with `m >= 3`, `g >= 2`.
    SymmetricPower { g: usize, m: i64, side: Side },
    /// `P^{n-1}`; every `n_i = 2`.
    ProjectiveSpace { dim: usize },
    /// `E^g / Sigma_{n/k}` with no closed normal form.
    GeneralQuotient { g: usize },
}

impl VarietyKind {
    pub fn label(&self) -> String {
        match *self {
            VarietyKind::PowerOfE { g: 1 } => "E".to_string(),
            VarietyKind::PowerOfE { g } => format!("E^{g}"),
            VarietyKind::SymmetricPower { g, .. } => format!("S^{g}(E)"),
            VarietyKind::ProjectiveSpace { dim } => format!("P^{dim}"),
            VarietyKind::GeneralQuotient { g } => format!("E^{g}/Sigma"),
        }
    }
}

impl fmt::Display for VarietyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn classify_cf(n: i64, cf: &[i64]) -> VarietyKind {
    let g = cf.len();
    if cf.iter().all(|&x| x == 2) {
        return VarietyKind::ProjectiveSpace {
            dim: (n - 1) as usize,
        };
    }
    if cf.iter().all(|&x| x >= 3) {
        return VarietyKind::PowerOfE { g };
    }
    if g >= 2 {
        if cf[1..].iter().all(|&x| x == 2) {
            return VarietyKind::SymmetricPower {
                g,
                m: cf[0],
                side: Side::First,
            };
        }
        if cf[..g - 1].iter().all(|&x| x == 2) {
            return VarietyKind::SymmetricPower {
                g,
                m: cf[g - 1],
                side: Side::Last,
            };
        }
    }
    VarietyKind::GeneralQuotient { g }
}

/// Classify `X_{n/k}`. For symmetric powers the returned `(m, g)` satisfy
/// `n = (m-1)g + 1` and `k = g` (first) or `k = (m-1)(g-1) + 1` (last); this
/// is checked.
pub fn classify_variety(n: i64, k: i64) -> Result<VarietyKind> {
    let cf = negcf(n, k)?;
    let kind = classify_cf(n, &cf);
    if let VarietyKind::SymmetricPower { g, m, side } = kind {
        let g = g as i64;
        let expected_k = match side {
            Side::First => g,
            Side::Last => (m - 1) * (g - 1) + 1,
        };
        if n != (m - 1) * g + 1 || k != expected_k {
            return Err(Error::Internal(format!(
                "symmetric-power parameters inconsistent for {n}/{k}"
            )));
        }
    }
    Ok(kind)
}

/// 1-based indices `i` with `n_i = 2`; the `s_i` for these generate `Sigma_{n/k}`.
pub fn sigma_group_generators(n: i64, k: i64) -> Result<Vec<usize>> {
    let cf = negcf(n, k)?;
    Ok(cf
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == 2)
        .map(|(i, _)| i + 1)
        .collect())
}

/// The reflection `s_i`: replaces `z_i` by `z_{i-1} - z_i + z_{i+1}` with
/// `z_0 = z_{g+1} = 0`. `i` is 1-based.
pub fn apply_s(i: usize, z: &[TorusPoint]) -> Result<Vec<TorusPoint>> {
    let g = z.len();
    if i == 0 || i > g {
        return Err(Error::IndexOutOfRange { index: i, len: g });
    }
    let left = if i >= 2 { z[i - 2] } else { TorusPoint::ZERO };
    let right = if i < g { z[i] } else { TorusPoint::ZERO };
    let mut out = z.to_vec();
    out[i - 1] = left - z[i - 1] + right;
    Ok(out)
}

/// Translation `sigma(z)_i = z_i + c_i tau`.
pub fn apply_sigma(
    fd: &FractionData,
    tau: TorusPoint,
    z: &[TorusPoint],
) -> Result<Vec<TorusPoint>> {
    if z.len() != fd.g {
        return Err(Error::invalid(format!(
            "point has {} coordinates, expected g = {}",
            z.len(),
            fd.g
        )));
    }
    Ok(z.iter()
        .zip(&fd.sigma_coeffs)
        .map(|(&zi, &c)| zi + tau.scale(c))
        .collect())
}

/// Unordered collection of torus points, kept sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusMultiset(Vec<TorusPoint>);

impl TorusMultiset {
    pub fn new(mut points: Vec<TorusPoint>) -> Self {
        points.sort_by(|p, q| p.u().total_cmp(&q.u()).then(p.v().total_cmp(&q.v())));
        Self(points)
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.0
    }

    /// Translate every element by `t`.
    pub fn shifted(&self, t: TorusPoint) -> Self {
        Self::new(self.0.iter().map(|&p| p + t).collect())
    }

    /// Greedy matching under torus distance: each point of `self`, in
    /// lexicographic order, takes the nearest unused point of `other`.
    pub fn approx_eq(&self, other: &TorusMultiset, tol: f64) -> bool {
        if self.0.len() != other.0.len() {
            return false;
        }
        let mut used = vec![false; other.0.len()];
        for p in &self.0 {
            let best = other
                .0
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, q)| (j, p.distance(q)))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((j, d)) if d <= tol => used[j] = true,
                _ => return false,
            }
        }
        true
    }
}

/// The quotient map `rho: E^g -> S^g E` for a symmetric-power kind:
/// `(z_2 - z_1, ..., z_g - z_{g-1}, -z_g)` (first) or
/// `(-z_1, z_1 - z_2, ..., z_{g-1} - z_g)` (last).
pub fn rho_map(kind: &VarietyKind, z: &[TorusPoint]) -> Result<TorusMultiset> {
    let VarietyKind::SymmetricPower { g, side, .. } = *kind else {
        return Err(Error::not_applicable(format!(
            "rho is only defined for symmetric powers, not {kind}"
        )));
    };
    if z.len() != g {
        return Err(Error::invalid(format!(
            "point has {} coordinates, expected g = {g}",
            z.len()
        )));
    }
    let points = match side {
        Side::First => {
            let mut v: Vec<TorusPoint> = z.windows(2).map(|w| w[1] - w[0]).collect();
            v.push(-z[g - 1]);
            v
        }
        Side::Last => {
            let mut v = vec![-z[0]];
            v.extend(z.windows(2).map(|w| w[0] - w[1]));
            v
        }
    };
    Ok(TorusMultiset::new(points))
}

/// Entries and point degrees `d_i = n_i - 2 + [i = 1] + [i = g]` of a
/// standard divisor of type `(n_1, ..., n_g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardDivisorType {
    pub entries: Vec<i64>,
    pub point_degrees: Vec<i64>,
}

pub fn standard_divisor(n: i64, k: i64) -> Result<StandardDivisorType> {
    let entries = negcf(n, k)?;
    let g = entries.len();
    let point_degrees = entries
        .iter()
        .enumerate()
        .map(|(idx, &ni)| ni - 2 + i64::from(idx == 0) + i64::from(idx + 1 == g))
        .collect();
    Ok(StandardDivisorType {
        entries,
        point_degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Laplace-expansion determinant, independent of the recurrence.
    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let size = m.len();
        if size == 0 {
            return 1;
        }
        (0..size)
            .map(|col| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != col)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1 } else { -1 };
                sign * m[0][col] * cofactor_det(&minor)
            })
            .sum()
    }

    fn tridiag_matrix(seq: &[i64]) -> Vec<Vec<i64>> {
        let g = seq.len();
        (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| {
                        if i == j {
                            seq[i]
                        } else if i.abs_diff(j) == 1 {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn random_point(rng: &mut ChaCha8Rng, g: usize) -> Vec<TorusPoint> {
        (0..g)
            .map(|_| TorusPoint::new(rng.random(), rng.random()))
            .collect()
    }

    #[test]
    fn expansions() {
        assert_eq!(negcf(5, 2).unwrap(), vec![3, 2]);
        assert_eq!(negcf(4, 3).unwrap(), vec![2, 2, 2]);
        assert_eq!(negcf(9, 2).unwrap(), vec![5, 2]);
        assert_eq!(negcf(7, 1).unwrap(), vec![7]);
        assert!(matches!(negcf(6, 4), Err(Error::InvalidParams(_))));
        assert!(negcf(3, 3).is_err());
        assert!(negcf(3, 0).is_err());
    }

    #[test]
    fn determinants() {
        assert_eq!(tridiag_det(&[3, 2]), 5);
        assert_eq!(tridiag_det(&[]), 1);
        assert_eq!(tridiag_det(&[7]), 7);
        assert_eq!(cofactor_det(&tridiag_matrix(&[2, 2, 2])), 4);
        assert_eq!(tridiag_det(&[2, 2, 2]), 4);
        for seq in [vec![3, 3, 2], vec![5, 2, 4, 3], vec![2, 7, 2, 2, 3]] {
            assert_eq!(tridiag_det(&seq), cofactor_det(&tridiag_matrix(&seq)));
        }
    }

    #[test]
    fn fraction_data_examples() {
        let fd = fraction_data(5, 2).unwrap();
        assert_eq!(fd.kseq, vec![5, 2, 1, 0]);
        assert_eq!(fd.lseq, vec![0, 1, 3, 5]);
        assert_eq!(fd.kprime, 3);
        assert_eq!(fd.sigma_coeffs, vec![-2, -1]);

        assert_eq!(fraction_data(4, 3).unwrap().sigma_coeffs, vec![0, 0, 0]);

        let fd = fraction_data(8, 3).unwrap();
        assert_eq!(fd.kseq, vec![8, 3, 1, 0]);
        assert_eq!(fd.lseq, vec![0, 1, 3, 8]);
        assert_eq!(fd.kprime, 3);
        assert_eq!(fd.sigma_coeffs, vec![-4, -4]);
    }

    #[test]
    fn symmetric_power_sigma_coefficients() {
        // first: (2-m)(g-i+1); last: -(m-2) i
        for (m, g) in [(3i64, 2i64), (3, 3), (4, 3), (5, 2), (6, 4)] {
            let n = (m - 1) * g + 1;
            let fd = fraction_data(n, g).unwrap();
            let expected: Vec<i64> = (1..=g).map(|i| (2 - m) * (g - i + 1)).collect();
            assert_eq!(fd.sigma_coeffs, expected);
            let fd = fraction_data(n, (m - 1) * (g - 1) + 1).unwrap();
            let expected: Vec<i64> = (1..=g).map(|i| -(m - 2) * i).collect();
            assert_eq!(fd.sigma_coeffs, expected);
        }
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_variety(8, 3).unwrap(),
            VarietyKind::PowerOfE { g: 2 }
        );
        assert_eq!(
            classify_variety(7, 3).unwrap(),
            VarietyKind::SymmetricPower {
                g: 3,
                m: 3,
                side: Side::First
            }
        );
        assert_eq!(
            classify_variety(5, 3).unwrap(),
            VarietyKind::SymmetricPower {
                g: 2,
                m: 3,
                side: Side::Last
            }
        );
        assert_eq!(
            classify_variety(4, 3).unwrap(),
            VarietyKind::ProjectiveSpace { dim: 3 }
        );
        assert_eq!(
            classify_variety(2, 1).unwrap(),
            VarietyKind::ProjectiveSpace { dim: 1 }
        );
        assert_eq!(
            classify_variety(5, 1).unwrap(),
            VarietyKind::PowerOfE { g: 1 }
        );
        assert_eq!(
            classify_variety(12, 5).unwrap(),
            VarietyKind::GeneralQuotient { g: 3 }
        );
        assert_eq!(classify_variety(5, 2).unwrap().label(), "S^2(E)");
        assert_eq!(classify_variety(4, 3).unwrap().label(), "P^3");
    }

    #[test]
    fn generators() {
        assert_eq!(sigma_group_generators(7, 3).unwrap(), vec![2, 3]);
        assert!(sigma_group_generators(8, 3).unwrap().is_empty());
        assert_eq!(sigma_group_generators(4, 3).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn reflections() {
        let z1 = TorusPoint::new(0.1, 0.7);
        let z2 = TorusPoint::new(0.45, 0.2);
        let z3 = TorusPoint::new(0.9, 0.33);
        let out = apply_s(1, &[z1, z2]).unwrap();
        assert!(out[0].distance(&(z2 - z1)) < 1e-12);
        assert_eq!(out[1], z2);
        let out = apply_s(2, &[z1, z2, z3]).unwrap();
        assert!(out[1].distance(&(z1 - z2 + z3)) < 1e-12);
        assert_eq!((out[0], out[2]), (z1, z3));
        assert!(matches!(
            apply_s(3, &[z1, z2]),
            Err(Error::IndexOutOfRange { index: 3, len: 2 })
        ));
        assert!(apply_s(0, &[z1]).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let z = random_point(&mut rng, 4);
            for i in 1..=4 {
                let back = apply_s(i, &apply_s(i, &z).unwrap()).unwrap();
                assert!(back.iter().zip(&z).all(|(a, b)| a.distance(b) < 1e-12));
            }
        }
    }

    #[test]
    fn sigma_translation() {
        let tau = TorusPoint::new(0.123, 0.456);
        let z = vec![
            TorusPoint::new(0.3, 0.1),
            TorusPoint::new(0.8, 0.6),
            TorusPoint::new(0.5, 0.5),
        ];
        let fd = fraction_data(4, 3).unwrap();
        assert_eq!(apply_sigma(&fd, tau, &z).unwrap(), z);

        let fd = fraction_data(5, 2).unwrap();
        let out = apply_sigma(&fd, tau, &z[..2]).unwrap();
        assert!(out[0].distance(&(z[0] - tau.scale(2))) < 1e-12);
        assert!(out[1].distance(&(z[1] - tau)) < 1e-12);
        assert!(apply_sigma(&fd, tau, &z).is_err());

        let fd = fraction_data(7, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let z = random_point(&mut rng, 3);
            for i in 1..=3 {
                let a = apply_sigma(&fd, tau, &apply_s(i, &z).unwrap()).unwrap();
                let b = apply_s(i, &apply_sigma(&fd, tau, &z).unwrap()).unwrap();
                // sigma commutes with s_i exactly when c_{i-1} + c_{i+1} = 2 c_i, i.e. n_i = 2
                if fd.cf[i - 1] == 2 {
                    assert!(a.iter().zip(&b).all(|(p, q)| p.distance(q) < 1e-12));
                }
            }
        }
    }

    #[test]
    fn rho_examples() {
        let kind = classify_variety(5, 2).unwrap();
        let z1 = TorusPoint::new(0.1, 0.2);
        let z2 = TorusPoint::new(0.7, 0.45);
        let rho = rho_map(&kind, &[z1, z2]).unwrap();
        assert!(rho.approx_eq(&TorusMultiset::new(vec![z2 - z1, -z2]), 1e-12));
        assert!(matches!(
            rho_map(&VarietyKind::PowerOfE { g: 2 }, &[z1, z2]),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn rho_is_invariant_and_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (n, k) in [(7, 3), (5, 2), (5, 3), (9, 2), (10, 7)] {
            let fd = fraction_data(n, k).unwrap();
            let kind = classify_variety(n, k).unwrap();
            let VarietyKind::SymmetricPower { m, .. } = kind else {
                panic!("{n}/{k}")
            };
            let gens = sigma_group_generators(n, k).unwrap();
            for _ in 0..100 {
                let z = random_point(&mut rng, fd.g);
                let tau = TorusPoint::new(rng.random(), rng.random());
                let base = rho_map(&kind, &z).unwrap();
                for &i in &gens {
                    assert!(rho_map(&kind, &apply_s(i, &z).unwrap())
                        .unwrap()
                        .approx_eq(&base, 1e-12));
                }
                let moved = rho_map(&kind, &apply_sigma(&fd, tau, &z).unwrap()).unwrap();
                assert!(moved.approx_eq(&base.shifted(tau.scale(m - 2)), 1e-12));
            }
        }
    }

    #[test]
    fn multiset_matching_detects_difference() {
        let a = TorusMultiset::new(vec![TorusPoint::new(0.1, 0.1), TorusPoint::new(0.1, 0.1)]);
        let b = TorusMultiset::new(vec![TorusPoint::new(0.1, 0.1), TorusPoint::new(0.2, 0.1)]);
        assert!(!a.approx_eq(&b, 1e-12));
        let c = TorusMultiset::new(vec![
            TorusPoint::new(0.999_999_999_999_9, 0.1),
            TorusPoint::new(0.1, 0.1),
        ]);
        let d = TorusMultiset::new(vec![TorusPoint::new(0.1, 0.1), TorusPoint::new(0.0, 0.1)]);
        assert!(c.approx_eq(&d, 1e-12));
    }

    #[test]
    fn standard_divisors() {
        let sd = standard_divisor(5, 2).unwrap();
        assert_eq!(sd.entries, vec![3, 2]);
        assert_eq!(sd.point_degrees, vec![2, 1]);
        assert_eq!(standard_divisor(6, 1).unwrap().point_degrees, vec![6]);
        assert_eq!(standard_divisor(7, 3).unwrap().point_degrees, vec![2, 0, 1]);
        assert!(standard_divisor(6, 3).is_err());
    }

    #[test]
    fn fold_round_trip_small() {
        assert_eq!(fold_negcf(&[3, 2]), Some(Ratio::new(5, 2)));
        assert_eq!(fold_negcf(&[]), None);
    }
}
