//! Small exact combinatorics helpers shared across modules.

use num::bigint::BigInt;
use num::{One, Zero};

pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// binom(n, k) as an exact integer; 0 when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Multinomial coefficient binom(sum parts; parts).
pub fn multinomial(parts: &[u32]) -> BigInt {
    let total: u32 = parts.iter().sum();
    let mut acc = factorial(total);
    for &p in parts {
        acc /= factorial(p);
    }
    acc
}

/// Number of monomials of degree d in n variables, binom(d + n - 1, n - 1).
pub fn monomial_count(nvars: usize, d: u32) -> BigInt {
    if nvars == 0 {
        return if d == 0 { BigInt::one() } else { BigInt::zero() };
    }
    binomial(d as u64 + nvars as u64 - 1, nvars as u64 - 1)
}
