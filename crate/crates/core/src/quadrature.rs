//! Adaptive 21-point Gauss-Kronrod integration for integrands with Gaussian decay.

use crate::error::{Error, Result};
use crate::psi::PsiSeries;

/// Integration settings. The real line is cut to `[-truncation_radius, truncation_radius]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub truncation_radius: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            truncation_radius: 14.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    /// Default tolerances with the radius widened for polynomial factors of degree `n`.
    pub fn for_degree(n: usize) -> Self {
        QuadratureSpec {
            truncation_radius: (2.0 * n as f64).sqrt() + 8.0,
            ..Self::default()
        }
        .with_min_radius(14.0)
    }

    fn with_min_radius(mut self, r: f64) -> Self {
        self.truncation_radius = self.truncation_radius.max(r);
        self
    }

    /// Both tolerances divided by `factor`.
    pub fn tightened(mut self, factor: f64) -> Self {
        self.abs_tol /= factor;
        self.rel_tol /= factor;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }
}

/// Value and error estimate of an integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

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

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

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

/// The 21 Kronrod nodes and weights on [-1, 1], as flat lists.
pub fn kronrod_rule() -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(21);
    let mut w = Vec::with_capacity(21);
    for i in 0..10 {
        x.extend([-XGK[i], XGK[i]]);
        w.extend([WGK[i], WGK[i]]);
    }
    x.push(0.0);
    w.push(WGK[10]);
    (x, w)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn finite(v: f64, x: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("integrand is not finite at x = {x}")))
    }
}

fn kronrod21<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<Segment> {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let dhlgth = hlgth.abs();
    let fc = finite(f(centr)?, centr)?;
    let mut resg = 0.0;
    let mut resk = WGK[10] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let absc = hlgth * XGK[j];
        let x1 = centr - absc;
        let x2 = centr + absc;
        let f1 = finite(f(x1)?, x1)?;
        let f2 = finite(f(x2)?, x2)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        resk += WGK[j] * fsum;
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * fsum;
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    let mut error = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Segment { a, b, value, error })
}

/// Integral of a fallible integrand over `[a, b]`, bisecting globally on the
/// largest local error. Interior `breakpoints` start as segment boundaries.
pub fn integrate_interval_try<F>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi)
        .collect();
    cuts.sort_by(|x, y| x.total_cmp(y));
    cuts.dedup();
    let mut edges = vec![lo];
    edges.extend(cuts);
    edges.push(hi);

    let mut segs = Vec::with_capacity(edges.len() + 64);
    for w in edges.windows(2) {
        segs.push(kronrod21(&mut f, w[0], w[1])?);
    }
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.error).sum();
        if err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(Estimate {
                value: sign * total,
                error: err,
            });
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if segs.len() + 2 > spec.max_subdivisions || mid <= s.a || mid >= s.b {
            segs.push(s);
            let total: f64 = segs.iter().map(|s| s.value).sum();
            return Err(Error::Quadrature {
                estimate: sign * total,
                error_bound: err,
                subdivisions: segs.len(),
            });
        }
        segs.push(kronrod21(&mut f, s.a, mid)?);
        segs.push(kronrod21(&mut f, mid, s.b)?);
    }
}

/// Integral of `f` over `[a, b]`.
pub fn integrate_interval<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    integrate_interval_try(|x| Ok(f(x)), a, b, breakpoints, spec)
}

/// Integral over the truncated real line.
pub fn integrate_line<F: FnMut(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<f64> {
    let r = spec.truncation_radius;
    Ok(integrate_interval(f, -r, r, &[0.0], spec)?.value)
}

/// Integral over the truncated real line with extra segment boundaries.
pub fn integrate_line_try<F>(f: F, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let r = spec.truncation_radius;
    let mut cuts = breakpoints.to_vec();
    cuts.push(0.0);
    Ok(integrate_interval_try(f, -r, r, &cuts, spec)?.value)
}

/// `eps1 f(x) = 1/2 (int_x^inf f - int_{-inf}^x f)` by two adaptive integrals.
pub fn epsilon1_numeric<F: FnMut(f64) -> f64>(mut f: F, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    let r = spec.truncation_radius;
    let xc = x.clamp(-r, r);
    let right = integrate_interval(&mut f, xc, r, &[0.0], spec)?.value;
    let left = integrate_interval(&mut f, -r, xc, &[0.0], spec)?.value;
    Ok(0.5 * (right - left))
}

/// Closed-form `eps1` of an even weighted polynomial `sum_k c_k psi_2k`.
pub fn epsilon1_even_closed(f: &PsiSeries, x: f64) -> Result<f64> {
    f.check_even()?;
    Ok(f.epsilon1(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_integrals() {
        let spec = QuadratureSpec::default();
        let g = integrate_line(|x| (-x * x).exp(), &spec).unwrap();
        assert!((g - PI.sqrt()).abs() < 1e-13);
        let odd = integrate_line(|x| x * (-x * x).exp(), &spec).unwrap();
        assert!(odd.abs() < 1e-14);
        let abs = integrate_line(|x| x.abs() * (-x * x).exp(), &spec).unwrap();
        assert!((abs - 1.0).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let spec = QuadratureSpec::default();
        let a = integrate_interval(|x| x * x, 0.0, 2.0, &[], &spec).unwrap().value;
        let b = integrate_interval(|x| x * x, 2.0, 0.0, &[], &spec).unwrap().value;
        assert!((a - 8.0 / 3.0).abs() < 1e-14);
        assert_eq!(a, -b);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let spec = QuadratureSpec {
            max_subdivisions: 4,
            ..QuadratureSpec::default()
        };
        let r = integrate_interval(|x: f64| x.abs().sqrt().recip().min(1e8), -1.0, 1.0, &[], &spec);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn epsilon1_examples() {
        let spec = QuadratureSpec::default();
        let even = epsilon1_numeric(|y| (-y * y / 2.0).exp(), 0.0, &spec).unwrap();
        assert!(even.abs() < 1e-14);
        let odd = epsilon1_numeric(|y| y * (-y * y / 2.0).exp(), 0.0, &spec).unwrap();
        assert!((odd - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_epsilon1_rejects_odd_input() {
        assert!(epsilon1_even_closed(&PsiSeries::basis(3), 0.2).is_err());
        assert_eq!(epsilon1_even_closed(&PsiSeries::basis(4), 0.0).unwrap(), 0.0);
    }
}
