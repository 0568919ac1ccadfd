//! One-dimensional quadrature rules.
//!
//! Three rules cover every integral in the library:
//!
//! * [`integrate`] — globally adaptive Gauss–Kronrod (G10/K21) quadrature
//!   for integrands on finite intervals, with a rigorous-in-practice error
//!   estimate and an interval budget. Integrable endpoint singularities are
//!   handled by adaptive bisection (the Kronrod nodes are interior).
//! * [`gauss_legendre`] — fixed-order Gauss–Legendre nodes and weights for
//!   tensor-product scans whose resolution the caller controls explicitly.
//! * [`periodic_trapezoid`] — the uniform trapezoid rule on `[0, 2π)`,
//!   spectrally convergent for smooth periodic integrands, with an
//!   auto-refining variant.

use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use thiserror::Error;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    /// Estimated value of the integral.
    pub value: f64,
    /// Conservative estimate of the absolute error.
    pub error_estimate: f64,
    /// Number of integrand evaluations spent.
    pub evaluations: usize,
}

/// Failure modes of adaptive integration.
#[derive(Debug, Error)]
pub enum QuadError {
    #[error("integrand returned a non-finite value at x = {x:e}")]
    NonFinite { x: f64 },
    #[error(
        "quadrature did not reach tolerance {requested:e}: achieved {achieved:e} after \
         {evaluations} evaluations (value estimate {value:e})"
    )]
    ToleranceNotReached {
        requested: f64,
        achieved: f64,
        evaluations: usize,
        value: f64,
    },
}

/// Abscissae of the 21-point Kronrod rule on [-1, 1] (positive half, in
/// decreasing order; the final entry is the center). Entries at odd indices
/// are the abscissae of the embedded 10-point Gauss rule. Classical
/// QUADPACK `dqk21` constants.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

/// Weights of the 21-point Kronrod rule, matching [`XGK`].
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Weights of the embedded 10-point Gauss rule; `WG[j]` pairs with
/// `XGK[2j + 1]`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Gauss–Kronrod 21-point evaluation on `[a, b]`: returns the Kronrod value
/// and the QUADPACK-rescaled error estimate.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64), QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64, QuadError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { x })
        }
    };

    let f_center = eval(center)?;
    let mut result_gauss = 0.0;
    let mut result_kronrod = WGK[10] * f_center;
    let mut result_abs = result_kronrod.abs();
    let mut below = [0.0_f64; 10];
    let mut above = [0.0_f64; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        below[j] = f1;
        above[j] = f2;
        let pair = f1 + f2;
        result_kronrod += WGK[j] * pair;
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * pair;
        }
    }

    let mean = 0.5 * result_kronrod;
    let mut result_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        result_asc += WGK[j] * ((below[j] - mean).abs() + (above[j] - mean).abs());
    }

    let value = result_kronrod * half;
    let result_abs = result_abs * half.abs();
    let result_asc = result_asc * half.abs();
    let mut err = ((result_kronrod - result_gauss) * half).abs();
    if result_asc != 0.0 && err != 0.0 {
        err = result_asc * (200.0 * err / result_asc).powf(1.5).min(1.0);
    }
    let underflow_guard = f64::MIN_POSITIVE / (50.0 * f64::EPSILON);
    if result_abs > underflow_guard {
        err = err.max(50.0 * f64::EPSILON * result_abs);
    }
    Ok((value, err))
}

/// A subinterval with its local estimate, ordered by error for the
/// worst-first refinement heap.
#[derive(Debug, Clone, Copy)]
struct Segment {
    err: f64,
    value: f64,
    lo: f64,
    hi: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == std::cmp::Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]` (either
/// orientation) to `max(abs_tol, rel_tol · |value|)`, with a default budget
/// of 4096 subintervals.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult, QuadError> {
    integrate_with_budget(&f, a, b, abs_tol, rel_tol, 4096)
}

/// As [`integrate`], with an explicit bound on the number of subintervals.
pub fn integrate_with_budget<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Result<QuadResult, QuadError> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let (value, err) = gk21(f, lo, hi)?;
    let mut evaluations = 21;
    let mut heap = BinaryHeap::with_capacity(max_segments);
    heap.push(Segment {
        err,
        value,
        lo,
        hi,
    });
    let mut total_value = value;
    let mut total_err = err;

    while total_err > abs_tol.max(rel_tol * total_value.abs()) && heap.len() < max_segments {
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval already at floating-point resolution.
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk21(f, worst.lo, mid)?;
        let (v2, e2) = gk21(f, mid, worst.hi)?;
        evaluations += 42;
        total_value += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment {
            err: e1,
            value: v1,
            lo: worst.lo,
            hi: mid,
        });
        heap.push(Segment {
            err: e2,
            value: v2,
            lo: mid,
            hi: worst.hi,
        });
    }

    // Re-sum over segments (smallest error first) to shed the cancellation
    // accumulated in the running totals.
    let segments = heap.into_sorted_vec();
    let mut value = 0.0;
    let mut error_estimate = 0.0;
    for s in &segments {
        value += s.value;
        error_estimate += s.err;
    }
    let tolerance = abs_tol.max(rel_tol * value.abs());
    if error_estimate > tolerance {
        return Err(QuadError::ToleranceNotReached {
            requested: tolerance,
            achieved: error_estimate,
            evaluations,
            value: sign * value,
        });
    }
    Ok(QuadResult {
        value: sign * value,
        error_estimate,
        evaluations,
    })
}

/// Legendre polynomial `P_n(x)` and its derivative, via the three-term
/// recurrence. The derivative formula assumes `|x| < 1`.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    debug_assert!(n >= 1);
    let mut prev = 1.0; // P_0
    let mut curr = x; // P_1
    for j in 1..n {
        let next = ((2 * j + 1) as f64 * x * curr - j as f64 * prev) / (j + 1) as f64;
        prev = curr;
        curr = next;
    }
    let derivative = n as f64 * (x * curr - prev) / (x * x - 1.0);
    (curr, derivative)
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// recurrence; exact for polynomials of degree ≤ 2n − 1. Nodes are returned
/// in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "a quadrature rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi-style initial guess for the i-th root in decreasing order.
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = f64::NAN;
        for _ in 0..64 {
            let (p, d) = legendre_and_derivative(n, t);
            derivative = d;
            let step = p / d;
            t -= step;
            if step.abs() <= 1e-15 * t.abs().max(1.0) {
                let (_, d) = legendre_and_derivative(n, t);
                derivative = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - t * t) * derivative * derivative);
        nodes[i] = -t;
        nodes[n - 1 - i] = t;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        // The middle node is exactly zero by symmetry.
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (nodes, weights) = gauss_legendre(n);
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        nodes.iter().map(|&t| center + half * t).collect(),
        weights.iter().map(|&w| w * half).collect(),
    )
}

/// Uniform trapezoid rule for `∫₀^{2π} f(θ) dθ` with `f` 2π-periodic
/// (endpoint merged with the start point).
pub fn periodic_trapezoid<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    assert!(n >= 1);
    let h = TAU / n as f64;
    (0..n).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

/// Doubles the node count of [`periodic_trapezoid`] until two successive
/// levels agree to `abs_tol`, starting from 16 nodes and capping at 2¹⁸.
/// Returns the refined value and the node count used.
pub fn periodic_trapezoid_auto<F: Fn(f64) -> f64>(f: F, abs_tol: f64) -> (f64, usize) {
    let mut n = 16;
    let mut prev = periodic_trapezoid(&f, n);
    loop {
        n *= 2;
        let next = periodic_trapezoid(&f, n);
        if (next - prev).abs() <= abs_tol || n >= (1 << 18) {
            return (next, n);
        }
        prev = next;
    }
}
