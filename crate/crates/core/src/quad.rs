//! Globally adaptive 21-point Gauss–Kronrod quadrature on a set of breakpoints.
//!
//! The interval with the largest error estimate is bisected until the summed estimate meets
//! `max(abs_tol, rel_tol · |I|)`. Error estimates follow the QUADPACK rescaling.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
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

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("error estimate {err:e} above target {target:e} after {subdivisions} subdivisions")]
    Tolerance { err: f64, target: f64, subdivisions: usize },
    #[error("integrand returned a non-finite value at {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel, QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadError::NonFinite(x))
        }
    };
    let f_center = eval(center)?;
    let mut res_g = 0.0;
    let mut res_k = f_center * WGK[10];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let err = rescale_error((res_k - res_g) * half, res_abs, res_asc);
    Ok(Panel { a, b, value, err })
}

/// Integrates `f` over `[points[0], points[last]]`, seeding one panel per breakpoint gap.
///
/// `points` must be sorted ascending; zero-width gaps are skipped.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<QuadResult, QuadError> {
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gk21(&f, w[0], w[1])?);
        }
    }
    let total = |heap: &BinaryHeap<Panel>| {
        heap.iter().fold((0.0, 0.0), |(v, e), p: &Panel| (v + p.value, e + p.err))
    };
    let (mut value, mut live_err) = total(&heap);
    let mut subdivisions = 0usize;
    // panels that cannot be split further at machine resolution keep their error here
    let mut frozen_err = 0.0;
    loop {
        if subdivisions.is_multiple_of(64) {
            // exact re-sum keeps the running totals free of drift
            (value, live_err) = total(&heap);
        }
        let err = live_err.max(0.0) + frozen_err;
        let target = abs_tol.max(rel_tol * value.abs());
        if err <= target {
            return Ok(QuadResult { value, abs_err: err, subdivisions });
        }
        if subdivisions >= max_subdivisions {
            return Err(QuadError::Tolerance { err, target, subdivisions });
        }
        let Some(worst) = heap.pop() else {
            return Ok(QuadResult { value: 0.0, abs_err: 0.0, subdivisions });
        };
        if worst.err == 0.0 {
            // every remaining panel is frozen
            return Err(QuadError::Tolerance { err, target, subdivisions });
        }
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            frozen_err += worst.err;
            live_err -= worst.err;
            heap.push(Panel { err: 0.0, ..worst });
            continue;
        }
        let left = gk21(&f, worst.a, mid)?;
        let right = gk21(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        live_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
}
