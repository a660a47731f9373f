use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::enclosure::{Enclosure, PrecisionPolicy};
use super::rational::{self, from_big, int, Rational};

/// Bracket of `atan(1/x)` by consecutive partial sums of the alternating
/// Taylor series, stopped once the next term is below `eps`.
fn atan_inv(x: i64, eps: &Rational) -> Enclosure {
    let x2 = from_big(BigInt::from(x) * BigInt::from(x));
    let mut power = int(x); // x^(2k+1)
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        let term = (&power * int(2 * k + 1)).recip();
        let next = if k % 2 == 0 { &sum + &term } else { &sum - &term };
        let next_term = (&power * &x2 * int(2 * k + 3)).recip();
        if next_term < *eps {
            // Alternating, decreasing terms: the true value lies between
            // consecutive partial sums.
            let after = if k % 2 == 0 { &next - &next_term } else { &next + &next_term };
            let (lo, hi) = if next < after { (next, after) } else { (after, next) };
            return Enclosure::new(lo, hi);
        }
        sum = next;
        power *= &x2;
        k += 1;
    }
}

/// Enclosure of pi from Machin's formula `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi_enclosure(policy: &PrecisionPolicy) -> Enclosure {
    let mut local = policy.tightened(8);
    loop {
        let bits = local.bits_for_scale(&int(3)) + 4;
        let eps = Rational::new(BigInt::one(), BigInt::one() << bits);
        let a = atan_inv(5, &eps).scale(&int(16));
        let b = atan_inv(239, &eps).scale(&int(4));
        let pi = a.sub(&b).round_outward(bits + 2);
        if policy.is_met_by(&pi) {
            return pi;
        }
        local = local.tightened(1 << 16);
    }
}

/// Enclosure of the volume of the `r`-dimensional Euclidean unit ball,
/// `pi^(r/2) / Gamma(r/2 + 1)`.
pub fn ball_volume_enclosure(r: u32, policy: &PrecisionPolicy) -> Enclosure {
    assert!(r >= 1, "ball dimension must be positive");
    let k = r / 2;
    let mut local = policy.tightened(4 * r);
    loop {
        let pi_k = pi_enclosure(&local).powi(k);
        let v = if r.is_multiple_of(2) {
            // pi^k / k!
            pi_k.scale(&from_big(rational::factorial(k)).recip())
        } else {
            // 2^r k! pi^k / r!
            let c = from_big((BigInt::one() << r) * rational::factorial(k)) / from_big(rational::factorial(r));
            pi_k.scale(&c)
        };
        if policy.is_met_by(&v) {
            let bits = policy.bits_for_scale(&v.hi().clone()) + 8;
            let rounded = v.round_outward(bits);
            if policy.is_met_by(&rounded) {
                return rounded;
            }
            return v;
        }
        local = local.tightened(1 << 16);
    }
}

/// `L_n(-2) = sum_k C(n,k) 2^k / k!`, exactly.
pub fn laguerre_at_minus_two(n: u32) -> Rational {
    (0..=n)
        .map(|k| {
            from_big(rational::binomial(n, k) * (BigInt::one() << k)) / from_big(rational::factorial(k))
        })
        .sum()
}
