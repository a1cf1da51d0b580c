//! Exact rational evaluation of the same quantities as [`crate::threshold`]
//! for small instances (`n <= 64`, integer `m`). Used to pin golden values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

pub const EXACT_LIMIT: u64 = 64;
/// Largest edge count accepted by the exact path; `G(a)^m` grows too large
/// to be useful beyond this.
pub const EXACT_M_LIMIT: u64 = 4096;

fn check(n: u64, k: u64) -> Result<()> {
    if n > EXACT_LIMIT {
        return Err(Error::input(format!("exact path supports n <= {EXACT_LIMIT}, got {n}")));
    }
    if k == 0 || n % 2 == 1 || n < 2 * k {
        return Err(Error::input(format!("need even n >= 2k and k >= 1, got n = {n}, k = {k}")));
    }
    Ok(())
}

fn int(x: u64) -> BigInt {
    BigInt::from(x)
}

pub fn falling_factorial(a: u64, b: u64) -> BigInt {
    (0..b).fold(BigInt::one(), |acc, j| if j > a { BigInt::zero() } else { acc * int(a - j) })
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling_factorial(n, k) / falling_factorial(k, k)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// `(n/2)^(k) / n^(k)`.
fn half_ratio(n: u64, k: u64) -> BigRational {
    ratio(falling_factorial(n / 2, k), falling_factorial(n, k))
}

pub fn phi(n: u64, k: u64) -> Result<BigRational> {
    check(n, k)?;
    Ok(half_ratio(n, k) * BigRational::from_integer(BigInt::one() << k))
}

pub fn first_moment(n: u64, k: u64, m: u64) -> Result<BigRational> {
    check(n, k)?;
    let two = BigRational::from_integer(int(2));
    let base = BigRational::one() - two * half_ratio(n, k);
    Ok(BigRational::from_integer(binomial(n, n / 2)) * Pow::pow(base, m))
}

pub fn f(n: u64, a: u64) -> Result<BigRational> {
    if n > EXACT_LIMIT || n % 2 == 1 || a > n / 2 {
        return Err(Error::input("need even n <= 64 and a <= n/2"));
    }
    let c = binomial(n / 2, a);
    Ok(ratio(&c * &c, binomial(n, n / 2)))
}

pub fn g(n: u64, k: u64, m: u64, a: u64) -> Result<BigRational> {
    check(n, k)?;
    if m > EXACT_M_LIMIT {
        return Err(Error::input(format!("exact path supports m <= {EXACT_M_LIMIT}")));
    }
    if a > n / 2 {
        return Err(Error::input("a exceeds n/2"));
    }
    let nk = falling_factorial(n, k);
    let r = half_ratio(n, k);
    let ra = ratio(falling_factorial(a, k), nk.clone());
    let rb = ratio(falling_factorial(n / 2 - a, k), nk);
    let two = BigRational::from_integer(int(2));
    let four = BigRational::from_integer(int(4));
    let num = BigRational::one() - &four * &r + &two * ra + &two * rb;
    let den = BigRational::one() - &two * &r;
    if num <= BigRational::zero() || den.is_zero() {
        return Err(Error::domain("G numerator or denominator vanishes"));
    }
    let base = num / (&den * &den);
    Ok(Pow::pow(base, m))
}

/// `sum_a F(a) G(a)`.
pub fn second_moment_ratio(n: u64, k: u64, m: u64) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for a in 0..=n / 2 {
        total += f(n, a)? * g(n, k, m, a)?;
    }
    Ok(total)
}

pub fn to_f64(x: &BigRational) -> f64 {
    // Scale so both parts fit comfortably before dividing.
    let bits = x.numer().bits().max(x.denom().bits()) as i64;
    let shift = (bits - 1000).max(0);
    let num: f64 = (x.numer() >> shift as usize).to_string().parse().unwrap_or(f64::NAN);
    let den: f64 = (x.denom() >> shift as usize).to_string().parse().unwrap_or(f64::NAN);
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn phi_exact_values() {
        assert_eq!(phi(4, 2).unwrap(), q(2, 3));
        assert_eq!(phi(6, 3).unwrap(), q(2, 5));
        assert_eq!(phi(10, 1).unwrap(), q(1, 1));
        assert!(phi(66, 3).is_err());
    }

    #[test]
    fn one_edge_instance() {
        assert_eq!(first_moment(4, 2, 1).unwrap(), q(4, 1));
        assert_eq!(first_moment(4, 2, 0).unwrap(), q(6, 1));
        assert_eq!(f(4, 0).unwrap(), q(1, 6));
        assert_eq!(g(4, 2, 1, 0).unwrap(), q(3, 2));
        assert_eq!(f(4, 0).unwrap() * g(4, 2, 1, 0).unwrap(), q(1, 4));
        assert_eq!(second_moment_ratio(4, 2, 1).unwrap(), q(1, 1));
    }

    #[test]
    fn vandermonde_is_exact() {
        for n in (2..=30).step_by(2) {
            let s = (0..=n / 2).fold(BigRational::zero(), |acc, a| acc + f(n, a).unwrap());
            assert_eq!(s, BigRational::one(), "n = {n}");
        }
    }

    #[test]
    fn to_f64_handles_huge_parts() {
        let x = BigRational::new(BigInt::one() << 3000u32, (BigInt::one() << 3000u32) * 3);
        assert!((to_f64(&x) - 1.0 / 3.0).abs() < 1e-15);
    }
}
