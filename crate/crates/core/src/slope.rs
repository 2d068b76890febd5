//! Exact `(rank, degree)` arithmetic for locally free sheaves on an elliptic
//! curve. Semistability is assumed, never checked: only numerical classes are
//! handled.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::arith::{classify_variety, fold_negcf, fraction_data, VarietyKind};
use crate::error::{Error, Result};

/// `p/q` with the denominator always written, so `2` prints as `2/1`.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SheafClass {
    rank: BigInt,
    deg: BigInt,
}

impl SheafClass {
    pub fn new(rank: impl Into<BigInt>, deg: impl Into<BigInt>) -> Result<Self> {
        let rank = rank.into();
        if !rank.is_positive() {
            return Err(Error::invalid(format!("rank must be positive, got {rank}")));
        }
        Ok(SheafClass {
            rank,
            deg: deg.into(),
        })
    }

    pub fn rank(&self) -> &BigInt {
        &self.rank
    }

    pub fn deg(&self) -> &BigInt {
        &self.deg
    }

    pub fn slope(&self) -> BigRational {
        BigRational::new(self.deg.clone(), self.rank.clone())
    }
}

impl fmt::Display for SheafClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rank {}, deg {})", self.rank, self.deg)
    }
}

/// `(r1 r2, d1 r2 + d2 r1)`; slopes add.
pub fn tensor(c1: &SheafClass, c2: &SheafClass) -> SheafClass {
    SheafClass {
        rank: &c1.rank * &c2.rank,
        deg: &c1.deg * &c2.rank + &c2.deg * &c1.rank,
    }
}

/// `1/mu1 + 1/mu2 < 1`, the sufficient condition for `H^0(U) (x) H^0(V) -> H^0(U (x) V)`
/// to be onto. The boundary value `1` returns `false`; note that `<= 1` is
/// already necessary.
pub fn surjectivity_criterion(c1: &SheafClass, c2: &SheafClass) -> Result<bool> {
    let (m1, m2) = (c1.slope(), c2.slope());
    if !m1.is_positive() || !m2.is_positive() {
        return Err(Error::invalid(format!(
            "criterion needs positive slopes, got {} and {}",
            ratio_string(&m1),
            ratio_string(&m2)
        )));
    }
    Ok(m1.recip() + m2.recip() < BigRational::one())
}

/// `pi_* L_{n/k}` on `E` for `X_{n/k} = E^g`: rank `k'`, degree `n`, slope
/// `[n_g, ..., n_1] > 2`.
pub fn pushforward_class(n: i64, k: i64) -> Result<SheafClass> {
    let kind = classify_variety(n, k)?;
    if !matches!(kind, VarietyKind::PowerOfE { .. }) {
        return Err(Error::not_applicable(format!(
            "{n}/{k} gives {kind}; needs every n_i >= 3"
        )));
    }
    let fd = fraction_data(n, k)?;
    let class = SheafClass::new(fd.kprime, n)?;
    let reversed: Vec<i64> = fd.cf.iter().rev().copied().collect();
    let folded = fold_negcf(&reversed)
        .ok_or_else(|| Error::Internal(format!("cannot fold {reversed:?}")))?;
    if folded != Ratio::new(n, fd.kprime) {
        return Err(Error::Internal(format!(
            "{n}/{} differs from reversed fraction {folded}",
            fd.kprime
        )));
    }
    if class.slope() <= BigRational::from_integer(2.into()) {
        return Err(Error::Internal(format!(
            "pushforward slope {n}/{} is not > 2",
            fd.kprime
        )));
    }
    Ok(class)
}

/// Kernel of `H^0(U) (x) O -> U`: rank `deg - rank`, degree `-deg`.
pub fn evaluation_kernel_class(c: &SheafClass) -> Result<SheafClass> {
    if c.deg <= c.rank {
        return Err(Error::invalid(format!(
            "evaluation kernel needs deg > rank, got {c}"
        )));
    }
    SheafClass::new(&c.deg - &c.rank, -&c.deg)
}

/// `(h^0, h^1)` of a semistable class of nonzero degree.
pub fn h0_h1(c: &SheafClass) -> Result<(BigInt, BigInt)> {
    if c.deg.is_zero() {
        Err(Error::DegreeZero)
    } else if c.deg.is_positive() {
        Ok((c.deg.clone(), BigInt::zero()))
    } else {
        Ok((BigInt::zero(), -&c.deg))
    }
}

fn check_pqst(mu_e: &BigRational, p: i64, q: i64, s: i64, t: i64) -> Result<BigRational> {
    if p < 2 || q < 4 || s < 1 || t < 2 {
        return Err(Error::invalid(format!(
            "need p >= 2, q >= 4, s >= 1, t >= 2; got ({p}, {q}, {s}, {t})"
        )));
    }
    let x = mu_e * BigInt::from(s) + BigInt::from(t);
    if x <= BigRational::one() {
        return Err(Error::invalid(format!(
            "need s mu + t > 1, got {}",
            ratio_string(&x)
        )));
    }
    Ok(x)
}

fn alpha_value(mu_e: &BigRational, p: i64, q: i64, x: &BigRational) -> BigRational {
    x / (BigRational::one() - x) + mu_e * BigInt::from(p) + BigInt::from(q)
}

/// `(s mu + t)/(1 - s mu - t) + p mu + q`.
pub fn ker_alpha_slope(mu_e: &BigRational, p: i64, q: i64, s: i64, t: i64) -> Result<BigRational> {
    let x = check_pqst(mu_e, p, q, s, t)?;
    let value = alpha_value(mu_e, p, q, &x);
    let pq = mu_e * BigInt::from(p) + BigInt::from(q);
    let three = BigRational::from_integer(3.into());
    if pq > BigRational::from_integer(4.into())
        && x > three
        && value <= BigRational::from_integer(2.into())
    {
        return Err(Error::Internal(format!(
            "ker(alpha) slope {} is not > 2",
            ratio_string(&value)
        )));
    }
    Ok(value)
}

/// `(p + s) mu + q + t`, which dominates [`ker_alpha_slope`].
pub fn ker_beta_slope(mu_e: &BigRational, p: i64, q: i64, s: i64, t: i64) -> Result<BigRational> {
    let x = check_pqst(mu_e, p, q, s, t)?;
    let value = mu_e * BigInt::from(p + s) + BigInt::from(q + t);
    let alpha = alpha_value(mu_e, p, q, &x);
    if value < alpha {
        return Err(Error::Internal(format!(
            "ker(beta) slope {} below ker(alpha) slope {}",
            ratio_string(&value),
            ratio_string(&alpha)
        )));
    }
    Ok(value)
}

/// For `0 -> A -> V -> B -> 0`: the class of `V` and the interval
/// `[min, max]` of the outer slopes, which contains `mu(V)`.
pub fn exact_sequence_bounds(
    a: &SheafClass,
    b: &SheafClass,
) -> Result<(SheafClass, BigRational, BigRational)> {
    let v = SheafClass {
        rank: &a.rank + &b.rank,
        deg: &a.deg + &b.deg,
    };
    let (sa, sb) = (a.slope(), b.slope());
    let (lo, hi) = if sa <= sb { (sa, sb) } else { (sb, sa) };
    let mu = v.slope();
    if mu < lo || mu > hi {
        return Err(Error::Internal(format!(
            "slope of {v} outside [{}, {}]",
            ratio_string(&lo),
            ratio_string(&hi)
        )));
    }
    Ok((v, lo, hi))
}
