//! Test-only oracles, independent of the library's binomial kernels.
#![allow(dead_code)]

/// Kahan-summed `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for k in 2..=n {
        let y = (k as f64).ln() - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `Pr(X <= k)` for `X ~ Bin(m, g)` by brute-force summation.
///
/// Unnormalised weights come from the ratio recurrence anchored at the mode
/// and are divided by their total, so no factorials or powers are formed.
pub fn lower_tail_brute(m: u64, g: f64, k: i64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    let k = (k as u64).min(m);
    let mode = (((m + 1) as f64 * g).floor() as u64).min(m);
    let odds = g / (1.0 - g);
    let mut w = vec![0.0f64; m as usize + 1];
    w[mode as usize] = 1.0;
    for j in mode..m {
        w[j as usize + 1] = w[j as usize] * ((m - j) as f64 / (j + 1) as f64) * odds;
    }
    for j in (1..=mode).rev() {
        w[j as usize - 1] = w[j as usize] * (j as f64 / (m - j + 1) as f64) / odds;
    }
    let below: f64 = w[..=k as usize].iter().sum();
    let above: f64 = w[k as usize + 1..].iter().sum();
    below / (below + above)
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
#[allow(clippy::excessive_precision)]
const GK_KRONROD: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const GK_GAUSS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * GK_KRONROD[7];
    let mut gauss = fc * GK_GAUSS[3];
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        kronrod += GK_KRONROD[i] * s;
        if i % 2 == 1 {
            gauss += GK_GAUSS[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod (7, 15) quadrature with an absolute tolerance.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    // stop once the error estimate is at the roundoff floor of the panel
    if err <= tol.max(50.0 * f64::EPSILON * value.abs()) || depth == 0 || (b - a) < 1e-15 {
        return value;
    }
    let m = 0.5 * (a + b);
    integrate(f, a, m, 0.5 * tol, depth - 1) + integrate(f, m, b, 0.5 * tol, depth - 1)
}

/// `(n-1) C(n-2, B-2) int_0^gamma t^(B-2) (1-t)^(n-B) dt` for `B >= 2`.
pub fn incomplete_beta_form(n: u64, b: u64, gamma: f64) -> f64 {
    assert!(b >= 2 && b <= n);
    let ln_c = ((n - 1) as f64).ln() + ln_factorial(n - 2) - ln_factorial(b - 2) - ln_factorial(n - b);
    let (pa, pb) = ((b - 2) as f64, (n - b) as f64);
    let nf = (n - 2).max(1) as f64;
    let mode = pa / nf;
    // log-density written relative to the mode so that no large terms cancel
    let mut peak = ln_c;
    if pa > 0.0 {
        peak += pa * mode.ln();
    }
    if pb > 0.0 {
        peak += pb * (-mode).ln_1p();
    }
    let f = move |t: f64| {
        let mut l = peak;
        if pa > 0.0 {
            l += pa * ((t - mode) / mode).ln_1p();
        }
        if pb > 0.0 {
            l += pb * ((mode - t) / (1.0 - mode)).ln_1p();
        }
        l.exp()
    };
    // breakpoints around the density's mode so the peak is resolved
    let sd = (mode * (1.0 - mode) / nf).sqrt().max(1.0 / nf);
    let mut cuts = vec![0.0, gamma];
    for k in [0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0] {
        for s in [-1.0, 1.0] {
            let c = mode + s * k * sd;
            if c > 0.0 && c < gamma {
                cuts.push(c);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    cuts.windows(2)
        .map(|w| integrate(&f, w[0], w[1], 1e-13, 60))
        .sum()
}
