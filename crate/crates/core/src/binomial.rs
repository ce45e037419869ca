//! Binomial tail and truncated-mean kernels.
//!
//! Point masses use Loader's saddle-point expansion (`stirlerr` + `bd0`), which
//! keeps the log-pmf accurate to a few ulps even for millions of trials. Tails
//! are accumulated from the threshold away from the mode so every partial sum
//! adds positive, shrinking terms; beyond [`SUMMATION_LIMIT`] trials the upper
//! tail is evaluated as a regularized incomplete beta function by continued
//! fraction instead.
//!
//! Every routine has a log-space twin so that the equilibrium solver can
//! compare probabilities far below the smallest normal `f64`.

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Result};

/// Largest trial count evaluated by direct summation.
pub const SUMMATION_LIMIT: u64 = 10_000;

const LN_2PI: f64 = 1.837_877_066_409_345_5;
const CF_MAX_ITERATIONS: usize = 1_000_000;
const FP_MIN: f64 = 1e-300;
/// Relative size below which the remaining terms of a tail sum are dropped.
const SUM_EPS: f64 = 1e-18;

/// `ln(n!) - (n + 1/2) ln(n) + n - ln(sqrt(2 pi))` for n = 1..=15.
#[allow(clippy::excessive_precision)]
const STIRLERR_SMALL: [f64; 15] = [
    0.081_061_466_795_327_258,
    0.041_340_695_955_409_294,
    0.027_677_925_684_998_339,
    0.020_790_672_103_765_093,
    0.016_644_691_189_821_192,
    0.013_876_128_823_070_748,
    0.011_896_709_945_891_770,
    0.010_411_265_261_972_096,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_871,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_530,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_848,
    0.005_554_733_551_962_801,
];

/// A request for `Pr(X >= threshold)` with `X ~ Bin(trials, success_prob)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomialQuery {
    pub trials: u64,
    pub success_prob: f64,
    /// May lie outside `0..=trials`.
    pub threshold: i64,
}

impl BinomialQuery {
    pub fn new(trials: u64, success_prob: f64, threshold: i64) -> Result<Self> {
        check_probability("success probability", success_prob)?;
        Ok(Self {
            trials,
            success_prob,
            threshold,
        })
    }

    pub fn tail_prob(&self) -> f64 {
        upper_tail(self.trials, self.success_prob, self.threshold)
    }

    pub fn ln_tail_prob(&self) -> f64 {
        ln_upper_tail(self.trials, self.success_prob, self.threshold)
    }
}

/// `Pr(X >= threshold)` for `X ~ Bin(trials, success_prob)`.
///
/// Exactly 1 when `threshold <= 0` and exactly 0 when `threshold > trials`.
pub fn tail_prob(trials: u64, success_prob: f64, threshold: i64) -> Result<f64> {
    Ok(BinomialQuery::new(trials, success_prob, threshold)?.tail_prob())
}

/// Natural log of [`tail_prob`]; `-inf` when the event is impossible.
pub fn ln_tail_prob(trials: u64, success_prob: f64, threshold: i64) -> Result<f64> {
    Ok(BinomialQuery::new(trials, success_prob, threshold)?.ln_tail_prob())
}

/// `Pr(X = k)` for `X ~ Bin(trials, success_prob)`.
pub fn pmf(trials: u64, k: u64, success_prob: f64) -> Result<f64> {
    check_probability("success probability", success_prob)?;
    Ok(ln_pmf(trials, k, success_prob).exp())
}

/// `E[X * 1{X >= threshold}]` for `X ~ Bin(trials, success_prob)`.
pub fn truncated_mean(trials: u64, success_prob: f64, threshold: i64) -> Result<f64> {
    check_probability("success probability", success_prob)?;
    Ok(truncated_mean_unchecked(trials, success_prob, threshold))
}

pub(crate) fn upper_tail(m: u64, gamma: f64, k: i64) -> f64 {
    match tail_parts(m, gamma, k) {
        Tail::Upper(ln) => ln.exp(),
        Tail::Complement(lower) => 1.0 - lower,
    }
}

pub(crate) fn ln_upper_tail(m: u64, gamma: f64, k: i64) -> f64 {
    match tail_parts(m, gamma, k) {
        Tail::Upper(ln) => ln,
        Tail::Complement(lower) => (-lower).ln_1p(),
    }
}

/// How a tail was obtained: either its logarithm directly, or the value of
/// the complementary lower tail when the upper tail is the larger of the two.
enum Tail {
    Upper(f64),
    Complement(f64),
}

fn tail_parts(m: u64, gamma: f64, k: i64) -> Tail {
    if k <= 0 {
        return Tail::Complement(0.0);
    }
    let k = k as u64;
    if k > m || gamma == 0.0 {
        return Tail::Upper(f64::NEG_INFINITY);
    }
    if gamma == 1.0 {
        return Tail::Complement(0.0);
    }
    if m > SUMMATION_LIMIT {
        if let Some(tail) = tail_by_continued_fraction(m, gamma, k) {
            return tail;
        }
    }
    tail_by_summation(m, gamma, k)
}

fn mode(m: u64, gamma: f64) -> u64 {
    (((m + 1) as f64 * gamma).floor() as u64).min(m)
}

fn tail_by_summation(m: u64, gamma: f64, k: u64) -> Tail {
    let q = 1.0 - gamma;
    let odds = gamma / q;
    let mf = m as f64;
    if k > mode(m, gamma) {
        // pmf is decreasing for j >= k
        let mut sum = 1.0;
        let mut term = 1.0;
        let mut j = k;
        while j < m {
            let ratio = (mf - j as f64) / (j as f64 + 1.0) * odds;
            term *= ratio;
            sum += term;
            j += 1;
            if ratio < 1.0 && term / (1.0 - ratio) < SUM_EPS * sum {
                break;
            }
        }
        Tail::Upper(ln_pmf(m, k, gamma) + sum.ln())
    } else {
        // pmf is decreasing for j <= k - 1 walking downward
        let inv_odds = q / gamma;
        let mut sum = 1.0;
        let mut term = 1.0;
        let mut j = k - 1;
        while j > 0 {
            let ratio = j as f64 / (mf - j as f64 + 1.0) * inv_odds;
            term *= ratio;
            sum += term;
            j -= 1;
            if ratio < 1.0 && term / (1.0 - ratio) < SUM_EPS * sum {
                break;
            }
        }
        let lower = (ln_pmf(m, k - 1, gamma) + sum.ln()).exp();
        Tail::Complement(lower.min(1.0))
    }
}

/// `Pr(X >= k) = I_gamma(k, m - k + 1)`. The incomplete-beta prefactor
/// `x^a (1-x)^b / (a B(a, b))` reduces to `pmf(k) (1 - gamma)`, which is
/// taken from the saddle-point pmf rather than from log-gamma differences.
fn tail_by_continued_fraction(m: u64, gamma: f64, k: u64) -> Option<Tail> {
    let q = 1.0 - gamma;
    let a = k as f64;
    let b = (m - k + 1) as f64;
    if gamma < (a + 1.0) / (a + b + 2.0) {
        let cf = beta_continued_fraction(a, b, gamma)?;
        Some(Tail::Upper(ln_pmf(m, k, gamma) + q.ln() + cf.ln()))
    } else {
        // I_x(a, b) = 1 - I_{1-x}(b, a); that prefactor is pmf(k - 1) * gamma
        let cf = beta_continued_fraction(b, a, q)?;
        let lower = (ln_pmf(m, k - 1, gamma) + gamma.ln() + cf.ln()).exp();
        Some(Tail::Complement(lower.min(1.0)))
    }
}

/// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> Option<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let clamp = |v: f64| if v.abs() < FP_MIN { FP_MIN } else { v };

    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - qab * x / qap);
    let mut h = d;
    for i in 1..=CF_MAX_ITERATIONS {
        let m = i as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            return Some(h);
        }
    }
    None
}

pub(crate) fn truncated_mean_unchecked(m: u64, gamma: f64, threshold: i64) -> f64 {
    let mf = m as f64;
    if threshold <= 0 {
        return mf * gamma;
    }
    let b = threshold as u64;
    if b > m || gamma == 0.0 {
        return 0.0;
    }
    if gamma == 1.0 {
        return mf;
    }
    let q = 1.0 - gamma;
    if b > mode(m, gamma) {
        // j * pmf(j) is decreasing for j >= b
        let odds = gamma / q;
        let mut sum = b as f64;
        let mut prob = 1.0;
        let mut j = b;
        while j < m {
            let ratio = (mf - j as f64) / (j as f64 + 1.0) * odds;
            prob *= ratio;
            let term = (j + 1) as f64 * prob;
            sum += term;
            j += 1;
            let weighted = ratio * (j as f64 + 1.0) / j as f64;
            if weighted < 1.0 && term / (1.0 - weighted) < SUM_EPS * sum {
                break;
            }
        }
        (ln_pmf(m, b, gamma) + sum.ln()).exp()
    } else {
        // subtract E[X 1{X < b}], summed downward from b - 1
        if b == 1 {
            return mf * gamma;
        }
        let inv_odds = q / gamma;
        let top = b - 1;
        let mut sum = top as f64;
        let mut prob = 1.0;
        let mut j = top;
        while j > 1 {
            let ratio = j as f64 / (mf - j as f64 + 1.0) * inv_odds;
            prob *= ratio;
            let term = (j - 1) as f64 * prob;
            sum += term;
            j -= 1;
            if ratio < 1.0 && term / (1.0 - ratio) < SUM_EPS * sum {
                break;
            }
        }
        let lower = (ln_pmf(m, top, gamma) + sum.ln()).exp();
        (mf * gamma - lower).max(0.0)
    }
}

/// Log of the binomial point mass, following Loader's saddle-point form.
pub(crate) fn ln_pmf(m: u64, k: u64, gamma: f64) -> f64 {
    let q = 1.0 - gamma;
    if k > m {
        return f64::NEG_INFINITY;
    }
    if gamma == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if k == m { 0.0 } else { f64::NEG_INFINITY };
    }
    let mf = m as f64;
    if k == 0 {
        if m == 0 {
            return 0.0;
        }
        return if gamma > q { mf * q.ln() } else { mf * (-gamma).ln_1p() };
    }
    if k == m {
        return if gamma > q { mf * (-q).ln_1p() } else { mf * gamma.ln() };
    }
    let kf = k as f64;
    let rest = (m - k) as f64;
    let lc = stirlerr(mf) - stirlerr(kf) - stirlerr(rest) - bd0(kf, mf * gamma) - bd0(rest, mf * q);
    let lf = LN_2PI + kf.ln() + (-kf / mf).ln_1p();
    lc - 0.5 * lf
}

/// Error of Stirling's approximation to `ln(n!)`, for integer `n >= 1`.
fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        return STIRLERR_SMALL[n as usize - 1];
    }
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

/// Deviance term `x ln(x / np) + np - x`, with a series near `x == np`.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
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
