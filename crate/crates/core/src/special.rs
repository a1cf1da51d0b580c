//! Log-domain factorials and binomials.
//!
//! Binomial coefficients go through Loader's saddle-point form of the binomial
//! mass function (Stirling remainder plus deviance), which never forms
//! `ln n!` directly. That keeps the absolute error near machine epsilon even
//! when the individual log-factorials are in the tens of thousands.

use std::f64::consts::{LN_2, PI};

/// `ln(n!) - ln(sqrt(2 pi n) (n/e)^n)` for n = 0..=15, evaluated at 40 digits.
const STIRLERR_TABLE: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_258_219_670_26,
    0.041_340_695_955_409_294_093_822_08,
    0.027_677_925_684_998_339_148_789_29,
    0.020_790_672_103_765_093_111_522_77,
    0.016_644_691_189_821_192_163_194_87,
    0.013_876_128_823_070_747_998_745_73,
    0.011_896_709_945_891_770_095_055_72,
    0.010_411_265_261_972_096_497_478_57,
    0.009_255_462_182_712_732_917_728_637,
    0.008_330_563_433_362_871_256_469_319,
    0.007_573_675_487_951_840_794_972_024,
    0.006_942_840_107_209_529_865_664_153,
    0.006_408_994_188_004_207_068_439_631,
    0.005_951_370_112_758_847_735_624_416,
    0.005_554_733_551_962_801_371_038_69,
];

/// Stirling-series remainder of `ln(n!)`.
pub fn stirlerr(n: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15 {
        return STIRLERR_TABLE[n as usize];
    }
    let n = n as f64;
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x/np) + np - x`, accurate when `x` is close to `np`.
pub fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// `ln P[Bin(n, p) = x]` with `q = 1 - p` supplied separately.
pub fn ln_binomial_pmf(x: u64, n: u64, p: f64, q: f64) -> f64 {
    if x > n {
        return f64::NEG_INFINITY;
    }
    let nf = n as f64;
    if x == 0 {
        if n == 0 {
            return 0.0;
        }
        return if p < 0.1 { -bd0(nf, nf * q) - nf * p } else { nf * q.ln() };
    }
    if x == n {
        return if q < 0.1 { -bd0(nf, nf * p) - nf * q } else { nf * p.ln() };
    }
    let xf = x as f64;
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(xf, nf * p) - bd0(nf - xf, nf * q);
    let lf = (2.0 * PI).ln() + xf.ln() + (-xf / nf).ln_1p();
    lc - 0.5 * lf
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0 || k == n {
        return 0.0;
    }
    ln_binomial_pmf(k, n, 0.5, 0.5) + n as f64 * LN_2
}

pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let x = n as f64;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + stirlerr(n)
}

/// `ln` of the falling factorial `a (a-1) ... (a-b+1)`; `0` for `b = 0` and
/// `-inf` when a zero factor appears (`b > a`).
pub fn log_falling_factorial(a: u64, b: u64) -> f64 {
    if b == 0 {
        return 0.0;
    }
    if b > a {
        return f64::NEG_INFINITY;
    }
    if b <= 64 {
        (0..b).map(|j| ((a - j) as f64).ln()).sum()
    } else {
        ln_choose(a, b) + ln_factorial(b)
    }
}

/// `ln(a^{(k)} / n^{(k)})` for falling factorials, `a <= n`.
pub fn log_falling_ratio(a: u64, n: u64, k: u64) -> f64 {
    if k > a {
        return f64::NEG_INFINITY;
    }
    if k <= 512 {
        (0..k).map(|j| ((a - j) as f64 / (n - j) as f64).ln()).sum()
    } else {
        log_falling_factorial(a, k) - log_falling_factorial(n, k)
    }
}

/// `ln(sum exp(x_i))` reduced as a balanced binary tree, so the result does
/// not depend on how callers chunk the input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    fn pair(a: f64, b: f64) -> f64 {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        if hi == f64::INFINITY {
            return hi;
        }
        hi + (lo - hi).exp().ln_1p()
    }
    fn tree(xs: &[f64]) -> f64 {
        match xs.len() {
            0 => f64::NEG_INFINITY,
            1 => xs[0],
            len => {
                let mid = len / 2;
                pair(tree(&xs[..mid]), tree(&xs[mid..]))
            }
        }
    }
    tree(xs)
}

/// Compensated (Kahan-Babuska-Neumaier) summation.
pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn stirlerr_matches_direct_sum_past_the_table() {
        for n in [16u64, 30, 36, 50, 81, 200, 501, 2000] {
            let direct: f64 = (2..=n).map(|j| (j as f64).ln()).sum();
            let x = n as f64;
            let stirling = x * x.ln() - x + 0.5 * (2.0 * PI * x).ln();
            assert!((stirlerr(n) - (direct - stirling)).abs() < 1e-11, "n = {n}");
        }
    }

    #[test]
    fn small_binomials_are_exact_to_rounding() {
        let mut row = vec![1u128];
        for n in 1..=100u64 {
            let mut next = vec![1u128; n as usize + 1];
            for k in 1..n as usize {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
            for k in 0..=n {
                let exact = (row[k as usize] as f64).ln();
                assert!((ln_choose(n, k) - exact).abs() < 1e-12 * exact.max(1.0), "C({n},{k})");
            }
        }
        assert_eq!(ln_choose(3, 5), f64::NEG_INFINITY);
    }

    #[test]
    fn falling_factorial_cases() {
        assert_eq!(log_falling_factorial(5, 0), 0.0);
        assert!(close(log_falling_factorial(4, 2), 12f64.ln(), 1e-15));
        assert_eq!(log_falling_factorial(2, 3), f64::NEG_INFINITY);
        let direct: f64 = (0..100).map(|j| ((1000 - j) as f64).ln()).sum();
        assert!(close(log_falling_factorial(1000, 100), direct, 1e-13));
        assert!(close(log_falling_ratio(30, 60, 700.min(30)), (0..30).map(|j| ((30 - j) as f64 / (60 - j) as f64).ln()).sum(), 1e-14));
        assert_eq!(log_falling_ratio(3, 10, 4), f64::NEG_INFINITY);
    }

    #[test]
    fn compensated_sum_keeps_small_terms() {
        assert_eq!(neumaier_sum([1.0, 1e100, 1.0, -1e100]), 2.0);
        assert_eq!(neumaier_sum([]), 0.0);
    }

    #[test]
    fn log_sum_exp_basic() {
        let xs = [0.0f64.ln(), 1.0f64.ln(), 2.0f64.ln(), 3.0f64.ln()];
        assert!(close(log_sum_exp(&xs).exp(), 6.0, 1e-15));
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert!(close(log_sum_exp(&[1000.0, 1000.0]), 1000.0 + LN_2, 1e-15));
    }
}
