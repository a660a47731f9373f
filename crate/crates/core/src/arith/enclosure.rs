use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{self, fmt_rational, from_big, Rational};

/// Relative width target for enclosures of irrational values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    target_width: Rational,
}

impl PrecisionPolicy {
    pub fn new(target_width: Rational) -> Self {
        assert!(target_width.is_positive(), "target width must be positive");
        Self { target_width }
    }

    /// Relative width `2^-bits`.
    pub fn bits(bits: u32) -> Self {
        Self::new(Rational::new(BigInt::one(), BigInt::one() << bits))
    }

    pub fn target_width(&self) -> &Rational {
        &self.target_width
    }

    /// A policy `factor` times tighter than this one.
    pub fn tightened(&self, factor: u32) -> Self {
        Self::new(&self.target_width / rational::int(factor.max(1) as i64))
    }

    /// Number of fractional bits that suffice for an absolute width of `target * scale`.
    pub(crate) fn bits_for_scale(&self, scale: &Rational) -> u32 {
        let mut bits = 0u32;
        let goal = &self.target_width * scale;
        let mut w = Rational::one();
        while w > goal && bits < 1 << 16 {
            w /= rational::int(2);
            bits += 1;
        }
        bits
    }

    pub fn is_met_by(&self, e: &Enclosure) -> bool {
        if e.is_exact() {
            return true;
        }
        let mag = if e.lo.abs() > e.hi.abs() { e.lo.abs() } else { e.hi.abs() };
        e.width() <= &self.target_width * mag
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self::bits(64)
    }
}

/// A closed rational interval `[lo, hi]` certified to contain some real value.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    #[serde(with = "rational::serde_rational")]
    lo: Rational,
    #[serde(with = "rational::serde_rational")]
    hi: Rational,
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "[{}]", fmt_rational(&self.lo))
        } else {
            write!(f, "[{}, {}] (~{:.12})", fmt_rational(&self.lo), fmt_rational(&self.hi), self.midpoint_f64())
        }
    }
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi");
        Self { lo, hi }
    }

    pub fn exact(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational::to_f64(&((&self.lo + &self.hi) / rational::int(2)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn add_rational(&self, x: &Rational) -> Self {
        Self::new(&self.lo + x, &self.hi + x)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    pub fn scale(&self, x: &Rational) -> Self {
        if x.is_negative() {
            Self::new(&self.hi * x, &self.lo * x)
        } else {
            Self::new(&self.lo * x, &self.hi * x)
        }
    }

    /// Reciprocal of a strictly positive enclosure.
    pub fn recip(&self) -> Self {
        assert!(self.lo.is_positive(), "recip of an enclosure touching zero");
        Self::new(self.hi.recip(), self.lo.recip())
    }

    pub fn powi(&self, e: u32) -> Self {
        if e == 0 {
            return Self::exact(Rational::one());
        }
        if !self.lo.is_negative() {
            return Self::new(rational::pow(&self.lo, e), rational::pow(&self.hi, e));
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn max(&self, other: &Self) -> Self {
        Self::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    /// Enclosure of `x^(1/n)` for a non-negative enclosure `x`.
    pub fn nth_root(&self, n: u32, policy: &PrecisionPolicy) -> Self {
        assert!(!self.lo.is_negative(), "root of a negative enclosure");
        let lo = nth_root_enclosure(&self.lo, n, policy);
        if self.is_exact() {
            return lo;
        }
        let hi = nth_root_enclosure(&self.hi, n, policy);
        Self::new(lo.lo, hi.hi)
    }

    /// Enclosure of `x^(p/q)` for a non-negative enclosure `x`.
    pub fn pow_ratio(&self, p: u32, q: u32, policy: &PrecisionPolicy) -> Self {
        self.powi(p).nth_root(q, &policy.tightened(2))
    }

    /// Widens the endpoints outward onto the dyadic grid `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> Self {
        if self.is_exact() && is_dyadic_with(&self.lo, bits) {
            return self.clone();
        }
        Self::new(rational::dyadic_floor(&self.lo, bits), rational::dyadic_ceil(&self.hi, bits))
    }
}

fn is_dyadic_with(x: &Rational, bits: u32) -> bool {
    let scale = BigInt::one() << bits;
    (x * from_big(scale)).is_integer()
}

/// Enclosure of `x^(1/n)` with `lo^n <= x <= hi^n`.
///
/// Exact when `x` is a perfect `n`-th power. Otherwise the endpoints are
/// consecutive points of the grid `2^-k`, where `k` grows until the policy is
/// met; refining the grid never loosens either endpoint.
pub fn nth_root_enclosure(x: &Rational, n: u32, policy: &PrecisionPolicy) -> Enclosure {
    assert!(n >= 1, "root index must be positive");
    assert!(!x.is_negative(), "root of a negative rational");
    if x.is_zero() || n == 1 {
        return Enclosure::exact(x.clone());
    }
    if let Some(r) = rational::exact_root(x, n) {
        return Enclosure::exact(r);
    }
    let mut k = policy.bits_for_scale(&Rational::one()) + 2;
    loop {
        let scaled = (x * from_big(BigInt::one() << (n as u64 * k as u64))).floor().to_integer();
        let r = scaled.to_biguint().expect("non-negative").nth_root(n);
        let denom = BigInt::one() << k;
        let lo = Rational::new(BigInt::from(r.clone()), denom.clone());
        let hi = Rational::new(BigInt::from(r + 1u32), denom);
        let e = Enclosure::new(lo, hi);
        if policy.is_met_by(&e) {
            return e;
        }
        k += 32;
    }
}
