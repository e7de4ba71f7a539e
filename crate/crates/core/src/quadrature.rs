//! Adaptive Gauss-Kronrod integration on `(0, inf)` against the weight `zeta^a`.
//!
//! Integrands are either supported on a bounded interval or dominated by a
//! Gaussian `exp(-(zeta - c)^2 / 4t)`, in which case the domain is cut at
//! `tail_sigma` widths `sqrt(2t)` on either side of `c`. An algebraic endpoint
//! behaviour `zeta^(a + endpoint_power)` at the origin is removed from the first
//! panel by the substitution `zeta = b s^m`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::{log_lambda, log_scaled_lambda};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Gaussian tails are cut this many widths `sqrt(2t)` from the centre.
    pub tail_sigma: f64,
    pub max_subdivisions: usize,
    /// Extra power of the integrand at the origin on top of the weight.
    pub endpoint_power: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-14, tail_sigma: 10.0, max_subdivisions: 2000, endpoint_power: 0.0 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.tail_sigma >= 6.0
            && self.endpoint_power > -1.0
            && self.max_subdivisions > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid quadrature settings {self:?}")))
        }
    }

    pub fn with_endpoint_power(mut self, p: f64) -> Self {
        self.endpoint_power = p;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Integration domain on the half-line.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    /// Integrand dominated by `exp(-(zeta - center)^2 / 4t)`.
    Gaussian { center: f64, t: f64 },
    Interval { lo: f64, hi: f64 },
}

impl Support {
    fn window(&self, spec: &QuadratureSpec) -> Result<(f64, f64, Vec<f64>)> {
        match *self {
            Support::Gaussian { center, t } => {
                if !(t > 0.0) || !center.is_finite() {
                    return Err(Error::Domain(format!("Gaussian support needs t > 0, got t = {t}")));
                }
                let sigma = (2.0 * t).sqrt();
                let lo = (center - spec.tail_sigma * sigma).max(0.0);
                let hi = center.max(0.0) + spec.tail_sigma * sigma;
                let n = spec.tail_sigma.ceil() as i64;
                let marks = (-n..=n).map(|k| center + k as f64 * sigma).collect();
                Ok((lo, hi, marks))
            }
            Support::Interval { lo, hi } => {
                if !(lo >= 0.0 && hi >= lo && hi.is_finite()) {
                    return Err(Error::Domain(format!("invalid interval [{lo}, {hi}]")));
                }
                Ok((lo, hi, Vec::new()))
            }
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
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
        self.error.total_cmp(&other.error).then(other.lo.total_cmp(&self.lo))
    }
}

/// 15-point Kronrod rule with the embedded 7-point Gauss error estimate.
fn gk15(g: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Panel {
    let centr = 0.5 * (lo + hi);
    let hlgth = 0.5 * (hi - lo);
    let fc = g(centr);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let absc = hlgth * XGK[j];
        let f1 = g(centr - absc);
        let f2 = g(centr + absc);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * hlgth;
    let resabs = resabs * hlgth.abs();
    let resasc = resasc * hlgth.abs();
    let mut error = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Panel { lo, hi, value, error, resabs }
}

/// Globally adaptive bisection of the given panels of `g` on `breaks`.
fn adaptive(g: impl Fn(f64) -> f64, breaks: &[f64], spec: &QuadratureSpec) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        heap.push(gk15(&g, w[0], w[1]));
        evaluations += 15;
    }
    let sums = |heap: &BinaryHeap<Panel>| {
        heap.iter().fold((0.0, 0.0, 0.0), |(v, e, r), p| (v + p.value, e + p.error, r + p.resabs))
    };
    let (mut value, mut error, mut resabs) = sums(&heap);
    let mut subdivisions = heap.len();
    loop {
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Domain("integrand is not finite on the integration domain".into()));
        }
        let tol = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= tol || error <= 100.0 * f64::EPSILON * resabs {
            break;
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Convergence { value, error, subdivisions });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval cannot be split further in floating point
            heap.push(Panel { error: 0.0, ..worst });
            error -= worst.error;
            continue;
        }
        let left = gk15(&g, worst.lo, mid);
        let right = gk15(&g, mid, worst.hi);
        evaluations += 30;
        subdivisions += 1;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
    }
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    let value = panels.iter().map(|p| p.value).sum();
    let error_estimate = panels.iter().map(|p| p.error).sum();
    Ok(QuadResult { value, error_estimate, evaluations })
}

/// Power used in the origin substitution so the transformed integrand
/// behaves like `s^k` with `k >= 1`.
fn substitution_power(alpha: f64) -> u32 {
    let frac = alpha - alpha.floor();
    if alpha >= 0.0 && frac == 0.0 {
        return 1;
    }
    ((2.0 / (1.0 + alpha)).ceil() as u32).clamp(1, 100_000)
}

/// `int f(zeta) zeta^a dzeta` over `support`.
pub fn integrate_weighted(
    f: impl Fn(f64) -> f64,
    a: f64,
    support: &Support,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    integrate_weighted_with_breaks(f, a, support, &[], spec)
}

/// As [`integrate_weighted`], additionally splitting the domain at `extra`
/// (discontinuities or kinks of the integrand).
pub fn integrate_weighted_with_breaks(
    f: impl Fn(f64) -> f64,
    a: f64,
    support: &Support,
    extra: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    spec.validate()?;
    if !(a > -1.0) {
        return Err(Error::Domain(format!("weight exponent a = {a} must satisfy a > -1")));
    }
    let (lo, hi, marks) = support.window(spec)?;
    if hi <= lo {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }
    let mut pts: Vec<f64> = marks.into_iter().chain(extra.iter().copied()).filter(|&x| x > lo && x < hi).collect();
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let weighted = |x: f64| if a == 0.0 { f(x) } else { f(x) * x.powf(a) };
    let alpha = a + spec.endpoint_power;
    let m = substitution_power(alpha);
    if lo > 0.0 || m == 1 {
        return adaptive(weighted, &pts, spec);
    }
    // first panel [0, b] mapped to s in [0, 1] with zeta = b s^m
    let b = pts[1];
    let mf = m as f64;
    // weight and Jacobian in logs: zeta^a overflows once zeta is subnormal
    let (ln_b, ln_mb) = (b.ln(), (mf * b).ln());
    let head = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let ls = s.ln();
        let ln_zeta = ln_b + mf * ls;
        let jac = (a * ln_zeta + ln_mb + (mf - 1.0) * ls).exp();
        if jac == 0.0 {
            return 0.0;
        }
        f(ln_zeta.exp().max(f64::MIN_POSITIVE)) * jac
    };
    let first = adaptive(head, &[0.0, 1.0], spec)?;
    if pts.len() == 2 {
        return Ok(first);
    }
    let sub = QuadratureSpec { abs_tol: spec.abs_tol.max(0.5 * spec.rel_tol * first.value.abs()), ..*spec };
    let rest = adaptive(weighted, &pts[1..], &sub)?;
    Ok(QuadResult {
        value: first.value + rest.value,
        error_estimate: first.error_estimate + rest.error_estimate,
        evaluations: first.evaluations + rest.evaluations,
    })
}

/// `int_lo^hi f`, unweighted.
pub fn integrate_interval(f: impl Fn(f64) -> f64, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    integrate_weighted(f, 0.0, &Support::Interval { lo, hi }, spec)
}

/// Relative deviation of `int_0^inf x^{nu+1} I_nu(x) e^{-alpha x^2} dx` by
/// quadrature from `2^{-nu-1} alpha^{-nu-1} e^{1/(4 alpha)}`.
pub fn weber_check(nu: f64, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    // x^{nu+1} I_nu(x) = x^{2nu+1} Lambda_nu(x)
    let q = integrate_weighted(
        |x| (log_scaled_lambda(nu, x).unwrap_or(f64::NAN) + x - alpha * x * x).exp(),
        2.0 * nu + 1.0,
        &Support::Gaussian { center: 0.5 / alpha, t: 0.25 / alpha },
        spec,
    )?;
    let closed = (-(nu + 1.0) * (2.0 * alpha).ln() + 0.25 / alpha).exp();
    Ok((q.value - closed).abs() / closed)
}

/// Relative deviation of
/// `int_0^inf zeta e^{-p zeta^2} I_nu(b zeta) I_nu(c zeta) dzeta`
/// from `(1/2p) e^{(b^2+c^2)/4p} I_nu(bc/2p)`.
pub fn product_integral_check(nu: f64, p: f64, b: f64, c: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(p > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::Domain("p, b and c must be positive".into()));
    }
    let ls = |w: f64| log_scaled_lambda(nu, w).unwrap_or(f64::NAN);
    let q = integrate_weighted(
        |x| (nu * (b * c).ln() - p * x * x + ls(b * x) + b * x + ls(c * x) + c * x).exp(),
        2.0 * nu + 1.0,
        &Support::Gaussian { center: (b + c) / (2.0 * p), t: 0.25 / p },
        spec,
    )?;
    let w = b * c / (2.0 * p);
    let log_rhs = -(2.0 * p).ln() + (b * b + c * c) / (4.0 * p) + nu * w.ln() + log_lambda(nu, w)?;
    Ok((q.value.ln() - log_rhs).exp_m1().abs())
}
