//! Closed-form threshold quantities for two-coloring random k-graphs, all
//! evaluated in the natural-log domain.
//!
//! Notation: `n` vertices (even), uniformity `k`, `m` edges (real-valued; the
//! formulas do not need an integer). `r(a) = a^(k) / n^(k)` is the ratio of
//! falling factorials, so `2 r(n/2) = phi / 2^(k-1)` is the chance a uniform
//! k-set is monochromatic under a fixed equitable coloring.

use std::f64::consts::{E, LN_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{ln_binomial_pmf, ln_choose, log_falling_ratio, log_sum_exp, neumaier_sum};

fn check_nk(n: u64, k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::input("k must be positive"));
    }
    if n % 2 == 1 {
        return Err(Error::input(format!("n must be even, got {n}")));
    }
    if n < 2 * k {
        return Err(Error::input(format!("need n >= 2k, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// `ln(phi / 2^k) = ln((n/2)^(k) / n^(k))`.
fn log_half_ratio(n: u64, k: u64) -> f64 {
    log_falling_ratio(n / 2, n, k)
}

/// `phi(n, k) = 2^k (n/2)^(k) / n^(k)`, always in `[2^-k, 1]`.
pub fn phi(n: u64, k: u64) -> Result<f64> {
    check_nk(n, k)?;
    Ok((k as f64 * LN_2 + log_half_ratio(n, k)).exp())
}

/// Leading term of Erdős' upper bound on the size of a non-2-colorable k-graph:
/// `(e ln 2 / 4) k^2 2^k`.
pub fn erdos_upper_bound(k: u32) -> f64 {
    let k = f64::from(k);
    E * LN_2 / 4.0 * k * k * k.exp2()
}

/// Sharp-threshold density `c* = ln 2 / phi(n, k)`.
pub fn sharp_threshold_c(n: u64, k: u64) -> Result<f64> {
    Ok(LN_2 / phi(n, k)?)
}

/// Edge count `c n 2^(k-1)` for density `c`.
pub fn edges_for_density(n: u64, k: u64, c: f64) -> f64 {
    c * n as f64 * ((k as f64) - 1.0).exp2()
}

pub fn density_for_edges(n: u64, k: u64, m: f64) -> f64 {
    m / (n as f64 * ((k as f64) - 1.0).exp2())
}

fn check_m(m: f64) -> Result<()> {
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::input(format!("edge count must be finite and non-negative, got {m}")));
    }
    Ok(())
}

/// `ln E[X]` where `X` counts proper equitable colorings of a k-graph with `m`
/// edges drawn with replacement:
/// `E[X] = C(n, n/2) (1 - 2 (n/2)^(k) / n^(k))^m`.
pub fn log_first_moment(n: u64, k: u64, m: f64) -> Result<f64> {
    check_nk(n, k)?;
    check_m(m)?;
    let two_r = 2.0 * log_half_ratio(n, k).exp();
    let per_edge = (-two_r).ln_1p();
    let tail = if m == 0.0 { 0.0 } else { m * per_edge };
    Ok(ln_choose(n, n / 2) + tail)
}

/// `ln E[X]` when the `m` edges are distinct:
/// `C(n, n/2) C(M - 2 C(n/2, k), m) / C(M, m)` with `M = C(n, k)`.
/// Needs `M` to fit in a `u64`; `-inf` when `m` exceeds the non-monochromatic
/// k-sets.
pub fn log_first_moment_distinct(n: u64, k: u64, m: u64) -> Result<f64> {
    check_nk(n, k)?;
    let total = crate::exact::binomial(n, k);
    let mono = crate::exact::binomial(n / 2, k) * 2u32;
    let (total, mono) = match (u64::try_from(&total), u64::try_from(&mono)) {
        (Ok(t), Ok(b)) => (t, b),
        _ => return Err(Error::input(format!("C({n}, {k}) is too large for the distinct-edge formula"))),
    };
    if m > total {
        return Err(Error::input(format!("m = {m} exceeds the {total} available k-sets")));
    }
    Ok(ln_choose(n, n / 2) + ln_choose(total - mono, m) - ln_choose(total, m))
}

/// Density `c` at which `E[X]` crosses 1, found by bisection on
/// `log_first_moment(n, k, c n 2^(k-1))`.
pub fn first_moment_root(n: u64, k: u64) -> Result<f64> {
    check_nk(n, k)?;
    if k == 1 {
        return Err(Error::domain("E[X] vanishes for every positive density when k = 1"));
    }
    let f = |c: f64| log_first_moment(n, k, edges_for_density(n, k, c));
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi)? > 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::domain("first moment root not bracketed"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `ln F(a) = ln(C(n/2, a)^2 / C(n, n/2))`.
///
/// Written as binomial mass functions at `p = 1/2` so that no large
/// log-factorials cancel: `F(a) = P[Bin(n/2) = a]^2 / P[Bin(n) = n/2]`.
pub fn log_f(n: u64, a: u64) -> Result<f64> {
    if n % 2 == 1 {
        return Err(Error::input(format!("n must be even, got {n}")));
    }
    let half = n / 2;
    if a > half {
        return Err(Error::input(format!("overlap {a} exceeds n/2 = {half}")));
    }
    Ok(2.0 * ln_binomial_pmf(a, half, 0.5, 0.5) - ln_binomial_pmf(half, n, 0.5, 0.5))
}

/// Cached per-(n, k) pieces of `G`.
struct GTerms {
    n: u64,
    k: u64,
    r_half: f64,
    denom: f64,
}

impl GTerms {
    fn new(n: u64, k: u64) -> Result<Self> {
        check_nk(n, k)?;
        let r_half = log_half_ratio(n, k).exp();
        let denom = (1.0 - 2.0 * r_half).powi(2);
        if denom <= 0.0 {
            return Err(Error::domain("1 - 2 (n/2)^(k)/n^(k) vanishes; G is undefined"));
        }
        Ok(GTerms { n, k, r_half, denom })
    }

    /// `ln G(a) = m ln(num(a) / den)`. With `num = 1 - 4r + 2r_a + 2r_b` and
    /// `den = (1 - 2r)^2`, `num/den - 1 = 2 (r_a + r_b - 2 r^2) / den`, which
    /// is evaluated directly so the tiny excess over 1 keeps full precision.
    fn log_g(&self, m: f64, a: u64) -> Result<f64> {
        let half = self.n / 2;
        if a > half {
            return Err(Error::input(format!("overlap {a} exceeds n/2 = {half}")));
        }
        let r_a = log_falling_ratio(a, self.n, self.k).exp();
        let r_b = log_falling_ratio(half - a, self.n, self.k).exp();
        let excess = 2.0 * (r_a + r_b - 2.0 * self.r_half * self.r_half) / self.denom;
        if excess <= -1.0 {
            return Err(Error::domain(format!(
                "G numerator is non-positive at a = {a} (n = {}, k = {})",
                self.n, self.k
            )));
        }
        if m == 0.0 {
            return Ok(0.0);
        }
        Ok(m * excess.ln_1p())
    }
}

/// `ln G(a)` for `m` edges: the log of the ratio between the probability that
/// a uniform k-set is proper under two equitable colorings whose red classes
/// share `a` vertices, and the square of the single-coloring probability,
/// raised to the power `m`.
pub fn log_g(n: u64, k: u64, m: f64, a: u64) -> Result<f64> {
    check_m(m)?;
    GTerms::new(n, k)?.log_g(m, a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    /// Central interval `(delta, n/2 - delta)`.
    C,
    /// Lower tail `[0, delta]`.
    T1,
    /// Upper tail `[n/2 - delta, n/2]`.
    T2,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentTerm {
    pub a: u64,
    pub log_f: f64,
    pub log_g: f64,
    pub region: Region,
}

impl MomentTerm {
    pub fn log_fg(&self) -> f64 {
        self.log_f + self.log_g
    }
}

/// Full decomposition of `E[X_2] / E[X]^2 = sum_a F(a) G(a)`.
#[derive(Clone, Debug, Serialize)]
pub struct MomentComputation {
    pub n: u64,
    pub k: u64,
    pub m: f64,
    pub log_ex: f64,
    pub terms: Vec<MomentTerm>,
    /// `n ln(n) / k` as defined.
    pub delta_raw: f64,
    /// `min(delta_raw, floor(n/4))`, the split actually used.
    pub delta: f64,
    pub clamped: bool,
    pub central_sum: f64,
    pub tail1_sum: f64,
    pub tail2_sum: f64,
    pub log_ratio: f64,
    pub ratio: f64,
    /// `ratio - 1`, accurate to full relative precision while the ratio is
    /// below 2.
    pub excess: f64,
    pub log_tail_bound: f64,
}

/// Evaluates every term of the second-moment sum and splits it into the
/// central interval and the two tails.
pub fn second_moment_ratio(n: u64, k: u64, m: f64) -> Result<MomentComputation> {
    check_m(m)?;
    let g = GTerms::new(n, k)?;
    let half = n / 2;
    let delta_raw = n as f64 * (n as f64).ln() / k as f64;
    let cap = (n / 4) as f64;
    let (delta, clamped) = if delta_raw > cap { (cap, true) } else { (delta_raw, false) };

    let mut terms = Vec::with_capacity(half as usize + 1);
    for a in 0..=half {
        let af = a as f64;
        let region = if af <= delta {
            Region::T1
        } else if af >= half as f64 - delta {
            Region::T2
        } else {
            Region::C
        };
        terms.push(MomentTerm { a, log_f: log_f(n, a)?, log_g: g.log_g(m, a)?, region });
    }

    let collect = |want: Option<Region>| -> Vec<f64> {
        terms
            .iter()
            .filter(|t| want.map_or(true, |r| t.region == r))
            .map(MomentTerm::log_fg)
            .collect()
    };
    // Since sum F = 1, ratio - 1 = sum F (G - 1); summing that directly keeps
    // the excess when it is far below machine epsilon relative to 1.
    let excess = neumaier_sum(terms.iter().map(|t| t.log_f.exp() * t.log_g.exp_m1()));
    let (log_ratio, ratio, excess) = if excess.is_finite() && excess.abs() < 1.0 {
        (excess.ln_1p(), 1.0 + excess, excess)
    } else {
        let lr = log_sum_exp(&collect(None));
        (lr, lr.exp(), lr.exp_m1())
    };
    let central_sum = log_sum_exp(&collect(Some(Region::C))).exp();
    let tail1_sum = log_sum_exp(&collect(Some(Region::T1))).exp();
    let tail2_sum = log_sum_exp(&collect(Some(Region::T2))).exp();

    Ok(MomentComputation {
        n,
        k,
        m,
        log_ex: log_first_moment(n, k, m)?,
        terms,
        delta_raw,
        delta,
        clamped,
        central_sum,
        tail1_sum,
        tail2_sum,
        log_ratio,
        ratio,
        excess,
        log_tail_bound: log_tail_bound_at(n, k, m, delta)?,
    })
}

/// Binary entropy in bits, with `H(0) = H(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("entropy argument {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

fn log_tail_bound_at(n: u64, k: u64, m: f64, delta: f64) -> Result<f64> {
    let nf = n as f64;
    let c = density_for_edges(n, k, m);
    let h = binary_entropy((2.0 * delta / nf).min(1.0))?;
    Ok(nf.ln() + c * phi(n, k)? * nf - nf * LN_2 * (1.0 - h) + (delta + 1.0).ln())
}

/// `ln` of the lower-tail majorant
/// `n exp(c phi n - n ln 2 (1 - H(2 delta / n))) (delta + 1)`
/// with the clamped `delta`. Bounds the exact lower-tail sum.
pub fn log_tail_bound(n: u64, k: u64, m: f64) -> Result<f64> {
    check_nk(n, k)?;
    check_m(m)?;
    let delta = (nf_ln(n) / k as f64).min((n / 4) as f64);
    log_tail_bound_at(n, k, m, delta)
}

fn nf_ln(n: u64) -> f64 {
    let nf = n as f64;
    nf * nf.ln()
}

pub fn tail_bound(n: u64, k: u64, m: f64) -> Result<f64> {
    Ok(log_tail_bound(n, k, m)?.exp())
}

/// The scalar summary printed by the `threshold` command.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdQuantities {
    pub n: u64,
    pub k: u64,
    pub phi: f64,
    pub c_star: f64,
    pub erdos_bound: f64,
    pub epsilon: f64,
    /// `c* n 2^(k-1)`.
    pub m_star: f64,
    /// Densities `(1 - eps) c*` and `(1 + eps) c*`.
    pub c_lower: f64,
    pub c_upper: f64,
    pub first_moment_root: f64,
}

impl ThresholdQuantities {
    pub fn compute(n: u64, k: u64, epsilon: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::input(format!("epsilon must lie in [0, 1), got {epsilon}")));
        }
        let phi = phi(n, k)?;
        let c_star = LN_2 / phi;
        Ok(ThresholdQuantities {
            n,
            k,
            phi,
            c_star,
            erdos_bound: erdos_upper_bound(k as u32),
            epsilon,
            m_star: edges_for_density(n, k, c_star),
            c_lower: (1.0 - epsilon) * c_star,
            c_upper: (1.0 + epsilon) * c_star,
            first_moment_root: if k >= 2 { first_moment_root(n, k)? } else { 0.0 },
        })
    }
}
