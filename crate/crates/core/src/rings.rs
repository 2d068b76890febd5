//! Hilbert functions of `Q_{n,k}` and of the twisted homogeneous coordinate
//! rings of `E^g` and `S^g E`, plus Neron-Severi arithmetic on `S^g E`.
//!
//! Everything here is exact and independent of `tau`: dimensions are read off
//! from Neron-Severi classes, which translations do not change.

#![allow(non_snake_case)]

use crate::arith::{classify_variety, Side, VarietyKind};
use crate::error::{Error, Result};

fn overflow() -> Error {
    Error::invalid("value exceeds 64-bit range")
}

/// The class `aD + bF` on `S^g E`, with `F.F = 0`, `F.D^{g-1} = 1`, `D^g = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NSClass {
    pub a: i64,
    pub b: i64,
}

impl NSClass {
    pub const D: NSClass = NSClass { a: 1, b: 0 };
    pub const F: NSClass = NSClass { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        NSClass { a, b }
    }

    pub fn scaled(&self, m: i64) -> Self {
        NSClass {
            a: self.a * m,
            b: self.b * m,
        }
    }
}

/// `dim Q_j = C(n-1+j, j)`, the Hilbert function of a polynomial ring.
pub fn hilbert_Q(n: u64, j: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let top = (n - 1).checked_add(j).ok_or_else(overflow)?;
    // multiplicative formula with exact division at each step
    let mut acc: u128 = 1;
    for i in 1..=j.min(n - 1) as u128 {
        acc = acc * (top as u128 + 1 - i) / i;
        if acc > u64::MAX as u128 {
            return Err(overflow());
        }
    }
    Ok(acc as u64)
}

/// `h^0(S^g E, aD + bF) = (a + gb)/g! * prod_{i=1}^{g-1} (a + i)`.
pub fn caci_h0(g: u64, a: i64, b: i64) -> Result<u64> {
    if g == 0 {
        return Err(Error::invalid("g must be positive"));
    }
    let (a, b, g128) = (a as i128, b as i128, g as i128);
    if a < 0 || a + g128 * b <= 0 {
        return Err(Error::invalid(format!(
            "caci_h0 needs a >= 0 and a + g b > 0 (a={a}, b={b}, g={g})"
        )));
    }
    let mut num: i128 = a + g128 * b;
    for i in 1..g128 {
        num = num.checked_mul(a + i).ok_or_else(overflow)?;
    }
    let fact: i128 = (1..=g128)
        .try_fold(1i128, |acc, i| acc.checked_mul(i))
        .ok_or_else(overflow)?;
    if num % fact != 0 {
        return Err(Error::Internal(format!(
            "caci_h0({g}, {a}, {b}): {num} not divisible by {g}!"
        )));
    }
    u64::try_from(num / fact).map_err(|_| overflow())
}

/// `(n, k)` reduced to data for which `B` has a closed formula.
fn b_kind(n: i64, k: i64) -> Result<VarietyKind> {
    match classify_variety(n, k)? {
        kind @ (VarietyKind::PowerOfE { .. } | VarietyKind::SymmetricPower { .. }) => Ok(kind),
        other => Err(Error::not_applicable(format!(
            "no closed Hilbert function for B when X_{{{n}/{k}}} = {other}"
        ))),
    }
}

/// `dim B_j` for `B(E^g, sigma, L)` (`j^g n`) or `B(S^g E, sigma', L')`
/// (`h^0` of `jD + j(m-1)F`). `B_0 = 1`.
pub fn hilbert_B(n: i64, k: i64, j: u64) -> Result<u64> {
    let kind = b_kind(n, k)?;
    if j == 0 {
        return Ok(1);
    }
    match kind {
        VarietyKind::PowerOfE { g } => {
            let jg = j.checked_pow(g as u32).ok_or_else(overflow)?;
            jg.checked_mul(n as u64).ok_or_else(overflow)
        }
        // the last-side ring is isomorphic to the first-side one
        VarietyKind::SymmetricPower {
            g,
            m,
            side: Side::First | Side::Last,
        } => {
            let j = i64::try_from(j).map_err(|_| overflow())?;
            let b = j.checked_mul(m - 1).ok_or_else(overflow)?;
            caci_h0(g as u64, j, b)
        }
        _ => unreachable!("filtered by b_kind"),
    }
}

/// `dim ker(Q_j -> B_j)` for `j = 1..=maxdeg`. For the polynomial case
/// (`X = P^{n-1}`) the map is injective and the profile is all zeros.
pub fn kernel_profile(n: i64, k: i64, maxdeg: u64) -> Result<Vec<u64>> {
    if let VarietyKind::ProjectiveSpace { .. } = classify_variety(n, k)? {
        return Ok(vec![0; maxdeg as usize]);
    }
    b_kind(n, k)?;
    (1..=maxdeg)
        .map(|j| {
            let q = hilbert_Q(n as u64, j)?;
            let b = hilbert_B(n, k, j)?;
            q.checked_sub(b).ok_or_else(|| {
                Error::Internal(format!(
                    "dim B_{j} = {b} exceeds dim Q_{j} = {q} for {n}/{k}"
                ))
            })
        })
        .collect()
}

/// `(aD + bF)^g = a^g + g a^{g-1} b`.
pub fn ns_selfintersection(c: NSClass, g: u32) -> Result<i64> {
    if g == 0 {
        return Err(Error::invalid("g must be positive"));
    }
    let ag = c.a.checked_pow(g).ok_or_else(overflow)?;
    let cross =
        c.a.checked_pow(g - 1)
            .and_then(|x| x.checked_mul(g as i64))
            .and_then(|x| x.checked_mul(c.b))
            .ok_or_else(overflow)?;
    ag.checked_add(cross).ok_or_else(overflow)
}

/// `[L'_{n/k}] = D + (m-1)F` on `S^g E`.
pub fn ns_class_of_Lprime(n: i64, k: i64) -> Result<NSClass> {
    match classify_variety(n, k)? {
        VarietyKind::SymmetricPower {
            m,
            side: Side::First,
            ..
        } => Ok(NSClass::new(1, m - 1)),
        other => Err(Error::not_applicable(format!(
            "{n}/{k} gives {other}, not a first-side S^g(E)"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GushelFlags {
    pub globally_generated: bool,
    pub ample: bool,
    pub very_ample: bool,
}

pub fn gushel_flags(c: NSClass) -> GushelFlags {
    GushelFlags {
        globally_generated: c.a >= 0 && c.b >= 2,
        ample: c.a >= 1 && c.b >= 1,
        very_ample: c.a >= 1 && c.b >= 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn polynomial_hilbert_function() {
        assert_eq!(hilbert_Q(5, 2).unwrap(), 15);
        assert_eq!(hilbert_Q(5, 3).unwrap(), 35);
        assert_eq!(hilbert_Q(7, 0).unwrap(), 1);
        for n in 1..20 {
            for j in 0..10 {
                assert_eq!(
                    hilbert_Q(n, j).unwrap(),
                    num_integer::binomial(n - 1 + j, j)
                );
            }
        }
        assert!(hilbert_Q(0, 1).is_err());
    }

    #[test]
    fn caci_examples() {
        assert_eq!(caci_h0(2, 2, 4).unwrap(), 15);
        assert_eq!(caci_h0(2, 3, 6).unwrap(), 30);
        for g in 1..8 {
            for b in 0..6 {
                assert_eq!(caci_h0(g, 1, b).unwrap(), 1 + g * b as u64);
            }
        }
        assert!(caci_h0(2, -1, 3).is_err());
        assert!(caci_h0(2, 0, 0).is_err());
    }

    #[test]
    fn b_hilbert_examples() {
        assert_eq!(hilbert_B(8, 3, 3).unwrap(), 72);
        assert_eq!(hilbert_B(5, 2, 2).unwrap(), 15);
        for (n, k) in [(8, 3), (5, 2), (7, 3), (9, 2), (13, 5), (5, 4), (7, 1)] {
            match hilbert_B(n, k, 1) {
                Ok(d) => assert_eq!(d, n as u64, "{n}/{k}"),
                Err(e) => assert!(matches!(e, Error::NotApplicable(_)), "{n}/{k}: {e}"),
            }
        }
        assert_eq!(hilbert_B(8, 3, 0).unwrap(), 1);
        assert!(matches!(hilbert_B(12, 5, 2), Err(Error::NotApplicable(_))));
        assert!(matches!(hilbert_B(4, 3, 2), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn last_side_matches_first_side() {
        // 5/4 = [2,2,2,2] is projective; 7/5 = [2,2,3] and 7/3 = [3,2,2]
        for j in 0..6 {
            assert_eq!(hilbert_B(7, 5, j).unwrap(), hilbert_B(7, 3, j).unwrap());
        }
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_profile(5, 2, 3).unwrap(), vec![0, 0, 5]);
        assert_eq!(kernel_profile(4, 3, 4).unwrap(), vec![0; 4]);
        assert_eq!(kernel_profile(7, 3, 2).unwrap()[1], 0);
        assert!(matches!(
            kernel_profile(12, 5, 3),
            Err(Error::NotApplicable(_))
        ));
        for k in 1..=6u64 {
            let n = 2 * k as i64 + 1;
            let cubic = kernel_profile(n, k as i64, 3).unwrap()[2];
            assert_eq!(cubic, k * (k + 1) * (2 * k + 1) / 6, "k={k}");
        }
    }

    #[test]
    fn ns_examples() {
        assert_eq!(ns_selfintersection(NSClass::new(1, 2), 2).unwrap(), 5);
        assert_eq!(ns_selfintersection(NSClass::F, 2).unwrap(), 0);
        for g in 1..6 {
            assert_eq!(ns_selfintersection(NSClass::D, g).unwrap(), 1);
        }
        assert_eq!(ns_class_of_Lprime(5, 2).unwrap(), NSClass::new(1, 2));
        assert_eq!(ns_class_of_Lprime(7, 3).unwrap(), NSClass::new(1, 2));
        assert_eq!(ns_class_of_Lprime(9, 2).unwrap(), NSClass::new(1, 4));
        assert!(matches!(
            ns_class_of_Lprime(8, 3),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn gushel_examples() {
        let f = |a, b| {
            let g = gushel_flags(NSClass::new(a, b));
            (g.globally_generated, g.ample, g.very_ample)
        };
        assert_eq!(f(1, 2), (true, true, false));
        assert_eq!(f(0, 2), (true, false, false));
        assert_eq!(f(1, 3), (true, true, true));
    }

    #[test]
    fn symmetric_power_degree_one_is_n() {
        for g in 2..8i64 {
            for m in 3..10i64 {
                let n = (m - 1) * g + 1;
                assert_eq!(caci_h0(g as u64, 1, m - 1).unwrap(), n as u64);
                assert_eq!(hilbert_B(n, g, 1).unwrap(), n as u64);
            }
        }
    }

    proptest! {
        #[test]
        fn selfintersection_scales(a in -20i64..20, b in -20i64..20, m in -5i64..5, g in 1u32..5) {
            let c = NSClass::new(a, b);
            let lhs = ns_selfintersection(c.scaled(m), g).unwrap();
            let rhs = m.pow(g) * ns_selfintersection(c, g).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn b_is_monotone(n in 3i64..40, k in 1i64..40, j in 1u64..6) {
            prop_assume!(k < n && num_integer::gcd(n, k) == 1);
            if let Ok(b) = hilbert_B(n, k, j) {
                prop_assert!(hilbert_B(n, k, j + 1).unwrap() >= b);
                prop_assert!(kernel_profile(n, k, 6).is_ok());
            }
        }
    }
}
