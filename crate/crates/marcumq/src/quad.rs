//! Adaptive Gauss-Kronrod quadrature (21-point rule, QUADPACK style).
//!
//! The driver repeatedly bisects the interval with the largest estimated
//! error until the global estimate meets the tolerance. Selection ties
//! break on the lowest interval index, so results are fully deterministic.

use crate::error::{Error, Result};

// 21-point Kronrod abscissae on [0, 1] (positive half, descending), the
// embedded 10-point Gauss weights, and the Kronrod weights.
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
    0.000_000_000_000_000_000_000_000_000_000_000,
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

/// QUADPACK error rescaling: sharpens the raw |K - G| difference.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 21-point Kronrod panel; returns (integral, error estimate).
fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv1 = [0.0f64; 10];
    let mut fv2 = [0.0f64; 10];

    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_abs = res_kronrod.abs();

    // odd Kronrod indices coincide with the Gauss nodes
    for (j, wg) in WG.iter().enumerate() {
        let jtw = 2 * j + 1;
        let x = half * XGK[jtw];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += wg * (f1 + f2);
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtw = 2 * j;
        let x = half * XGK[jtw];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half;
    (
        res_kronrod * half,
        rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    )
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub panels: usize,
}

#[derive(Clone, Copy)]
struct Interval {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

/// Integrate `f` over `[a, b]` to absolute tolerance `abs_tol` (plus a
/// relative floor), starting from the partition induced by `seeds`
/// (interior split points; out-of-range seeds are ignored).
pub fn integrate_seeded<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    seeds: &[f64],
    abs_tol: f64,
    max_panels: usize,
) -> Result<QuadResult> {
    if !(b >= a) {
        return Err(Error::InvalidGrid {
            detail: format!("integration bounds [{a}, {b}] are reversed"),
        });
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_err: 0.0,
            panels: 0,
        });
    }

    let mut cuts = vec![a];
    for &s in seeds {
        if s > a && s < b {
            cuts.push(s);
        }
    }
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();

    let mut intervals: Vec<Interval> = cuts
        .windows(2)
        .map(|w| {
            let (value, err) = kronrod_panel(&f, w[0], w[1]);
            Interval {
                lo: w[0],
                hi: w[1],
                value,
                err,
            }
        })
        .collect();

    loop {
        let total_err: f64 = intervals.iter().map(|iv| iv.err).sum();
        let total_val: f64 = intervals.iter().map(|iv| iv.value).sum();
        // relative floor sits above the 50*eps*resabs floor of the panel estimator
        let target = abs_tol.max(total_val.abs() * 1e-13);
        if total_err <= target {
            return Ok(QuadResult {
                value: total_val,
                abs_err: total_err,
                panels: intervals.len(),
            });
        }
        if intervals.len() >= max_panels {
            return Err(Error::Convergence {
                what: format!("adaptive quadrature on [{a}, {b}]"),
                achieved: total_err,
                requested: abs_tol,
            });
        }
        // split the worst interval; first index wins ties
        let mut worst = 0;
        for (i, iv) in intervals.iter().enumerate() {
            if iv.err > intervals[worst].err {
                worst = i;
            }
        }
        let iv = intervals[worst];
        let mid = 0.5 * (iv.lo + iv.hi);
        if mid <= iv.lo || mid >= iv.hi {
            // interval is at floating-point resolution; accept its estimate
            return Ok(QuadResult {
                value: total_val,
                abs_err: total_err,
                panels: intervals.len(),
            });
        }
        let (v1, e1) = kronrod_panel(&f, iv.lo, mid);
        let (v2, e2) = kronrod_panel(&f, mid, iv.hi);
        intervals[worst] = Interval {
            lo: iv.lo,
            hi: mid,
            value: v1,
            err: e1,
        };
        intervals.push(Interval {
            lo: mid,
            hi: iv.hi,
            value: v2,
            err: e2,
        });
    }
}

/// Integrate `f` over `[a, b]` to absolute tolerance `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, max_panels: usize) -> Result<QuadResult> {
    integrate_seeded(f, a, b, &[], abs_tol, max_panels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-12, 64).unwrap();
        assert!((r.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_tail() {
        // ∫_0^∞ e^{-x²/2} dx = √(π/2); truncate at 40
        let r = integrate(|x| (-0.5 * x * x).exp(), 0.0, 40.0, 1e-13, 256).unwrap();
        assert!((r.value - (PI / 2.0).sqrt()).abs() < 1e-12);
        assert!(r.abs_err < 1e-12);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = integrate(|x| x.powf(-0.5), 0.0, 1.0, 1e-10, 4096).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "value = {}", r.value);
    }

    #[test]
    fn seeded_partition_narrow_peak() {
        // narrow bump at x = 7 inside a wide interval
        let f = |x: f64| (-50.0 * (x - 7.0) * (x - 7.0)).exp();
        let exact = (PI / 50.0).sqrt();
        let r = integrate_seeded(f, 0.0, 100.0, &[6.0, 7.0, 8.0], 1e-13, 512).unwrap();
        assert!((r.value - exact).abs() < 1e-12);
    }

    #[test]
    fn reversed_bounds_rejected() {
        assert!(integrate(|x| x, 1.0, 0.0, 1e-10, 16).is_err());
    }

    #[test]
    fn unreachable_tolerance_reports_convergence_error() {
        let err = integrate(|x| x.powf(-0.9), 0.0, 1.0, 1e-14, 8).unwrap_err();
        matches!(err, Error::Convergence { .. });
    }
}
