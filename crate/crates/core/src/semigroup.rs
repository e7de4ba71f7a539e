//! The Neumann Bessel semigroup `P_t^(a) phi(z) = int phi(zeta) p^(a)(z, zeta, t) zeta^a dzeta`,
//! its extension to `R^n x (0, inf)` for product data, and the Li-Yau and
//! Harnack functionals of the resulting solutions.
//!
//! Space and time derivatives of `P_t phi` are taken under the integral with
//! the exact kernel log-derivatives; finite-difference variants exist as an
//! independent cross-check.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::kernels::{self, KernelPoint};
use crate::quadrature::{integrate_weighted_with_breaks, QuadratureSpec, Support};
use crate::special_fn;

/// Growth class of an initial datum; anything else is rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Decay {
    /// `phi(zeta) = 0` for `zeta > radius`.
    CompactSupport { radius: f64 },
    /// `|phi(zeta)| <= c exp(-zeta^2 / (2 sigma^2))`.
    GaussianDominated { c: f64, sigma: f64 },
    /// `|phi| <= bound`.
    Bounded { bound: f64 },
}

impl Decay {
    fn admits(&self, zeta: f64, v: f64) -> bool {
        let slack = 1.0 + 1e-12;
        match *self {
            Decay::CompactSupport { radius } => zeta <= radius || v == 0.0,
            Decay::GaussianDominated { c, sigma } => v.abs() <= slack * c * (-zeta * zeta / (2.0 * sigma * sigma)).exp(),
            Decay::Bounded { bound } => v.abs() <= slack * bound,
        }
    }
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Initial datum `phi` on `(0, inf)` with declared sign, decay and kinks.
#[derive(Clone)]
pub struct InitialDatum {
    f: ScalarFn,
    pub nonnegative: bool,
    pub decay: Decay,
    /// Points where `phi` is not smooth; used as quadrature breakpoints.
    pub breaks: Vec<f64>,
    /// Whether `phi` is C^1 up to the boundary with `zeta^a phi' -> 0`.
    pub smooth: bool,
    pub label: String,
}

impl fmt::Debug for InitialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialDatum")
            .field("label", &self.label)
            .field("nonnegative", &self.nonnegative)
            .field("decay", &self.decay)
            .field("breaks", &self.breaks)
            .finish()
    }
}

impl InitialDatum {
    /// Build a datum, spot-checking the declared sign and decay on a sample grid.
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        nonnegative: bool,
        decay: Decay,
        breaks: Vec<f64>,
        smooth: bool,
    ) -> Result<Self> {
        let datum = Self { f: Arc::new(f), nonnegative, decay, breaks, smooth, label: label.into() };
        for i in 0..=400 {
            let zeta = 0.05 * i as f64;
            let v = datum.eval(zeta);
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("datum {} is not finite at {zeta}", datum.label)));
            }
            if nonnegative && v < 0.0 {
                return Err(Error::InvalidInput(format!("datum {} declared nonnegative but is {v} at {zeta}", datum.label)));
            }
            if !decay.admits(zeta, v) {
                return Err(Error::InvalidInput(format!("datum {} violates its decay class at {zeta}", datum.label)));
            }
        }
        Ok(datum)
    }

    pub fn constant(c: f64) -> Self {
        Self {
            f: Arc::new(move |_| c),
            nonnegative: c >= 0.0,
            decay: Decay::Bounded { bound: c.abs() },
            breaks: Vec::new(),
            smooth: true,
            label: format!("constant({c})"),
        }
    }

    /// `exp(-c zeta^2)`, `c > 0`.
    pub fn gaussian(c: f64) -> Self {
        assert!(c > 0.0, "Gaussian datum needs c > 0");
        Self {
            f: Arc::new(move |x| (-c * x * x).exp()),
            nonnegative: true,
            decay: Decay::GaussianDominated { c: 1.0, sigma: (0.5 / c).sqrt() },
            breaks: Vec::new(),
            smooth: true,
            label: format!("gaussian({c})"),
        }
    }

    /// Smooth bump `exp(1 - 1/(1 - r^2))`, `r = (zeta - centre)/half_width`, supported in `[lo, hi]`.
    pub fn bump(lo: f64, hi: f64) -> Self {
        assert!(0.0 <= lo && lo < hi, "bump needs 0 <= lo < hi");
        let (m, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        Self {
            f: Arc::new(move |x| {
                let r = (x - m) / h;
                if r.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - r * r)).exp()
                } else {
                    0.0
                }
            }),
            nonnegative: true,
            decay: Decay::CompactSupport { radius: hi },
            breaks: vec![lo, hi],
            smooth: true,
            label: format!("bump({lo},{hi})"),
        }
    }

    /// Indicator of `[lo, hi]`.
    pub fn indicator(lo: f64, hi: f64) -> Self {
        assert!(0.0 <= lo && lo < hi, "indicator needs 0 <= lo < hi");
        Self {
            f: Arc::new(move |x| if (lo..=hi).contains(&x) { 1.0 } else { 0.0 }),
            nonnegative: true,
            decay: Decay::CompactSupport { radius: hi },
            breaks: vec![lo, hi],
            smooth: false,
            label: format!("indicator({lo},{hi})"),
        }
    }

    /// `p^(a)(0, zeta, eps)`: a datum concentrated at the origin, with
    /// `P_s phi(z) = p^(a)(0, z, s + eps)`.
    pub fn point_mass_approx(a: f64, eps: f64) -> Result<Self> {
        let peak = kernels::heat_kernel(a, &KernelPoint::new(0.0, 0.0, eps)?)?;
        Ok(Self {
            f: Arc::new(move |x| peak * (-x * x / (4.0 * eps)).exp()),
            nonnegative: true,
            decay: Decay::GaussianDominated { c: peak, sigma: (2.0 * eps).sqrt() },
            breaks: Vec::new(),
            smooth: true,
            label: format!("point-mass({a},{eps})"),
        })
    }

    pub fn eval(&self, zeta: f64) -> f64 {
        (self.f)(zeta)
    }

    fn quadrature_breaks(&self) -> Vec<f64> {
        let mut b = self.breaks.clone();
        if let Decay::CompactSupport { radius } = self.decay {
            b.push(radius);
        }
        b
    }
}

/// `P_t phi(z)` and its first derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatValue {
    pub u: f64,
    pub du_dz: f64,
    pub du_dt: f64,
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("time t = {t} must be positive")))
    }
}

/// Window holding the bulk of `phi(zeta) p(z, zeta, t)`, plus extra breakpoints.
/// For Gaussian-dominated data the product of the two Gaussians peaks at
/// `z / k`, `k = 1 + 2t/sigma^2`, with time scale `t / k`. Compact data use their
/// whole support, split where the kernel window around `z` begins and ends.
fn datum_window(phi: &InitialDatum, z: f64, t: f64, spec: &QuadratureSpec) -> (Support, Vec<f64>) {
    match phi.decay {
        Decay::GaussianDominated { sigma, .. } => {
            let k = 1.0 + 2.0 * t / (sigma * sigma);
            (Support::Gaussian { center: z / k, t: t / k }, Vec::new())
        }
        Decay::CompactSupport { radius } => {
            let cut = spec.tail_sigma * (2.0 * t).sqrt();
            let marks = [z - cut, z, z + cut].into_iter().filter(|&m| m > 0.0 && m < radius).collect();
            (Support::Interval { lo: 0.0, hi: radius }, marks)
        }
        Decay::Bounded { .. } => (Support::Gaussian { center: z, t }, Vec::new()),
    }
}

const PEAK_SAMPLES: usize = 64;

/// Largest sampled value of `ln |phi(zeta) p(z, zeta, t) zeta^a|` over the window,
/// used to rescale integrands so the absolute tolerance acts relatively.
fn log_peak(
    a: f64,
    phi: &InitialDatum,
    z: f64,
    t: f64,
    support: &Support,
    spec: &QuadratureSpec,
    extra: &dyn Fn(&KernelPoint) -> f64,
) -> f64 {
    let (lo, hi) = match *support {
        Support::Gaussian { center, t: tt } => {
            let cut = spec.tail_sigma * (2.0 * tt).sqrt();
            ((center - cut).max(0.0), center.max(0.0) + cut)
        }
        Support::Interval { lo, hi } => (lo, hi),
    };
    // the kernel window around z, clipped to the support
    let cut = spec.tail_sigma * (2.0 * t).sqrt();
    let (klo, khi) = ((z - cut).max(lo), (z + cut).min(hi));
    let grid = |lo: f64, hi: f64| (0..=PEAK_SAMPLES).map(move |i| lo + (hi - lo) * (i as f64 + 0.5) / (PEAK_SAMPLES as f64 + 1.0));
    let local: Vec<f64> = if klo < khi { grid(klo, khi).collect() } else { Vec::new() };
    let pts = phi.quadrature_breaks().into_iter().filter(|&b| b > lo && b < hi);
    let mut best = f64::NEG_INFINITY;
    for zeta in grid(lo, hi).chain(local).chain(pts) {
        let v = phi.eval(zeta).abs();
        if v == 0.0 || zeta <= 0.0 {
            continue;
        }
        let pt = KernelPoint { z, zeta, t };
        if let Ok(l) = kernels::heat_kernel_log(a, &pt) {
            let l = v.ln() + l + a * zeta.ln() + extra(&pt);
            if l > best {
                best = l;
            }
        }
    }
    if best.is_finite() {
        best
    } else {
        0.0
    }
}

/// `int phi(zeta) p(z, zeta, t) g_k(zeta) zeta^a dzeta` for kernel-side factors `g_k`,
/// returned as `(Q_k, l)` with integral `Q_k e^l`.
fn kernel_integrals<const K: usize>(
    a: f64,
    phi: &InitialDatum,
    z: f64,
    t: f64,
    spec: &QuadratureSpec,
    g: impl Fn(&KernelPoint) -> [f64; K],
) -> Result<([f64; K], f64)> {
    KernelPoint::new(z, 0.0, t)?;
    let (support, marks) = datum_window(phi, z, t, spec);
    let shift = log_peak(a, phi, z, t, &support, spec, &|_| 0.0);
    let mut breaks = phi.quadrature_breaks();
    breaks.extend(marks);
    let mut out = [0.0; K];
    for (k, o) in out.iter_mut().enumerate() {
        let integrand = |zeta: f64| {
            let v = phi.eval(zeta);
            if v == 0.0 {
                return 0.0;
            }
            let pt = KernelPoint { z, zeta, t };
            match kernels::heat_kernel_log(a, &pt) {
                Ok(l) => v * (l - shift).exp() * g(&pt)[k],
                Err(_) => f64::NAN,
            }
        };
        *o = integrate_weighted_with_breaks(integrand, a, &support, &breaks, spec)?.value;
    }
    Ok((out, shift))
}

fn kernel_integral(
    a: f64,
    phi: &InitialDatum,
    z: f64,
    t: f64,
    spec: &QuadratureSpec,
    g: impl Fn(&KernelPoint) -> f64,
) -> Result<f64> {
    let ([q], shift) = kernel_integrals(a, phi, z, t, spec, |pt| [g(pt)])?;
    Ok(q * shift.exp())
}

/// `ln int phi(zeta) p(z, zeta, t) e^{lg(zeta)} zeta^a dzeta` for nonnegative data,
/// rescaled by the sampled peak of the full log-integrand so that factors far
/// below the underflow threshold still contribute.
fn log_kernel_integral(
    a: f64,
    phi: &InitialDatum,
    z: f64,
    t: f64,
    spec: &QuadratureSpec,
    lg: impl Fn(&KernelPoint) -> f64,
) -> Result<f64> {
    let (support, marks) = datum_window(phi, z, t, spec);
    let shift = log_peak(a, phi, z, t, &support, spec, &lg);
    let mut breaks = phi.quadrature_breaks();
    breaks.extend(marks);
    let integrand = |zeta: f64| {
        let v = phi.eval(zeta);
        if v == 0.0 {
            return 0.0;
        }
        let pt = KernelPoint { z, zeta, t };
        match kernels::heat_kernel_log(a, &pt) {
            Ok(l) => v * (l + lg(&pt) - shift).exp(),
            Err(_) => f64::NAN,
        }
    };
    let q = integrate_weighted_with_breaks(integrand, a, &support, &breaks, spec)?.value;
    Ok(q.ln() + shift)
}

/// `ln P_t phi(z)` for nonnegative data; finite even where `P_t phi(z)` underflows.
pub fn apply_log(a: f64, phi: &InitialDatum, z: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_datum(phi)?;
    check_time(t)?;
    let ([q], shift) = kernel_integrals(a, phi, z, t, spec, |_| [1.0])?;
    if !(q > 0.0) {
        return Err(Error::DegenerateDatum { z, value: q * shift.exp() });
    }
    Ok(q.ln() + shift)
}

/// `P_t^(a) phi(z)`.
pub fn apply(a: f64, phi: &InitialDatum, z: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_time(t)?;
    kernel_integral(a, phi, z, t, spec, |_| 1.0)
}

/// `P_t phi(z)` with `d/dz` and `d/dt` differentiated under the integral.
pub fn apply_with_derivatives(a: f64, phi: &InitialDatum, z: f64, t: f64, spec: &QuadratureSpec) -> Result<HeatValue> {
    check_time(t)?;
    let u = kernel_integral(a, phi, z, t, spec, |_| 1.0)?;
    let du_dz = kernel_integral(a, phi, z, t, spec, |pt| kernels::log_grad_z(a, pt).unwrap_or(f64::NAN))?;
    let du_dt = kernel_integral(a, phi, z, t, spec, |pt| kernels::log_deriv_t(a, pt).unwrap_or(f64::NAN))?;
    Ok(HeatValue { u, du_dz, du_dt })
}

/// `P_t phi(z)` with central finite-difference derivatives,
/// steps `1e-5 max(1, z)` in space and `1e-5 t` in time. The solution is even
/// in `z`, which supplies the mirror value below the origin.
pub fn apply_with_fd_derivatives(a: f64, phi: &InitialDatum, z: f64, t: f64, spec: &QuadratureSpec) -> Result<HeatValue> {
    let hz = 1e-5 * z.max(1.0);
    let ht = 1e-5 * t;
    let u = apply(a, phi, z, t, spec)?;
    let up = apply(a, phi, z + hz, t, spec)?;
    let um = apply(a, phi, (z - hz).abs(), t, spec)?;
    let tp = apply(a, phi, z, t + ht, spec)?;
    let tm = apply(a, phi, z, t - ht, spec)?;
    Ok(HeatValue { u, du_dz: (up - um) / (2.0 * hz), du_dt: (tp - tm) / (2.0 * ht) })
}

/// Decay class of `P_s phi`: compact data spread out and are only bounded;
/// Gaussian widths grow like `sigma^2 + 2s`, which is all the window uses.
fn smoothed_decay(decay: Decay, s: f64) -> Decay {
    match decay {
        Decay::GaussianDominated { c, sigma } => Decay::GaussianDominated { c, sigma: (sigma * sigma + 2.0 * s).sqrt() },
        Decay::CompactSupport { .. } => Decay::Bounded { bound: f64::INFINITY },
        d => d,
    }
}

/// `|P_t(P_s phi)(z) - P_{t+s} phi(z)|` with the inner semigroup evaluated by nested quadrature.
pub fn semigroup_residual(a: f64, phi: &InitialDatum, z: f64, s: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_time(s)?;
    check_time(t)?;
    let inner = phi.clone();
    let inner_spec = *spec;
    let ps = InitialDatum {
        f: Arc::new(move |zeta| apply(a, &inner, zeta, s, &inner_spec).unwrap_or(f64::NAN)),
        nonnegative: phi.nonnegative,
        decay: smoothed_decay(phi.decay, s),
        breaks: Vec::new(),
        smooth: true,
        label: format!("P_{s} {}", phi.label),
    };
    let nested = apply(a, &ps, z, t, spec)?;
    let direct = apply(a, phi, z, s + t, spec)?;
    Ok((nested - direct).abs())
}

/// Terms of the Li-Yau inequality `lhs <= bound + remainder` for `u = P_t phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiYauRecord {
    /// `(d_z log u)^2 - d_t log u`.
    pub lhs: f64,
    /// `(a+1)/2t`.
    pub bound: f64,
    /// `(1/u) int phi zeta^2/4t^2 (y^2 - 1) p zeta^a`.
    pub remainder: f64,
    /// `ln(-remainder)`, computed in logs; finite exactly when the remainder
    /// is certified negative, even where `remainder` itself underflows.
    pub ln_neg_remainder: f64,
    pub u: f64,
}

impl LiYauRecord {
    /// `bound + remainder - lhs`, nonnegative when the inequality holds.
    pub fn slack(&self) -> f64 {
        self.bound + self.remainder - self.lhs
    }
}

fn check_datum(phi: &InitialDatum) -> Result<()> {
    if phi.nonnegative {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("datum {} must be nonnegative", phi.label)))
    }
}

pub fn liyau_functional(a: f64, phi: &InitialDatum, z: f64, t: f64, spec: &QuadratureSpec) -> Result<LiYauRecord> {
    check_datum(phi)?;
    check_time(t)?;
    let nu = 0.5 * (a - 1.0);
    let ([u, uz, ut, rem], shift) = kernel_integrals(a, phi, z, t, spec, |pt| {
        let c = if pt.z == 0.0 { 1.0 } else { special_fn::quotient_complement(nu, pt.w()).unwrap_or(f64::NAN) };
        [
            1.0,
            kernels::log_grad_z(a, pt).unwrap_or(f64::NAN),
            kernels::log_deriv_t(a, pt).unwrap_or(f64::NAN),
            -pt.zeta * pt.zeta / (4.0 * t * t) * c * (2.0 - c),
        ]
    })?;
    if !(u > 0.0) {
        return Err(Error::DegenerateDatum { z, value: u * shift.exp() });
    }
    let g = uz / u;
    // 1 - y^2 = c (2 - c) with c = 1 - y
    let ln_neg = if z == 0.0 {
        f64::NEG_INFINITY
    } else if a < 0.0 {
        // the complement changes sign below the sharp order; no log route
        (-rem / u).ln()
    } else {
        log_kernel_integral(a, phi, z, t, spec, |pt| {
            let lc = special_fn::ln_quotient_complement(nu, pt.w()).unwrap_or(f64::NAN);
            2.0 * (pt.zeta / (2.0 * t)).ln() + lc + (2.0 - lc.exp()).ln()
        })? - u.ln()
            - shift
    };
    Ok(LiYauRecord {
        lhs: g * g - ut / u,
        bound: (a + 1.0) / (2.0 * t),
        remainder: rem / u,
        ln_neg_remainder: ln_neg,
        u: u * shift.exp(),
    })
}

/// The left-hand side `(d_z log u)^2 - d_t log u` from finite differences.
pub fn liyau_lhs_fd(a: f64, phi: &InitialDatum, z: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let hv = apply_with_fd_derivatives(a, phi, z, t, spec)?;
    if !(hv.u > 1e-300) {
        return Err(Error::DegenerateDatum { z, value: hv.u });
    }
    let g = hv.du_dz / hv.u;
    Ok(g * g - hv.du_dt / hv.u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarnackValue {
    pub ratio: f64,
    pub log_ratio: f64,
}

/// `P_s phi(z) / [P_t phi(zeta) (t/s)^{(a+1)/2} exp((z - zeta)^2 / 4(t - s))]`.
pub fn harnack_ratio(a: f64, phi: &InitialDatum, z: f64, s: f64, zeta: f64, t: f64, spec: &QuadratureSpec) -> Result<HarnackValue> {
    harnack_ratio_with_exponent(a, phi, z, s, zeta, t, 0.5 * (a + 1.0), spec)
}

/// As [`harnack_ratio`] with `(a+1)/2` replaced by `exponent`.
#[allow(clippy::too_many_arguments)]
pub fn harnack_ratio_with_exponent(
    a: f64,
    phi: &InitialDatum,
    z: f64,
    s: f64,
    zeta: f64,
    t: f64,
    exponent: f64,
    spec: &QuadratureSpec,
) -> Result<HarnackValue> {
    check_datum(phi)?;
    check_time(s)?;
    if !(s < t) {
        return Err(domain(format!("Harnack comparison needs s < t, got s = {s}, t = {t}")));
    }
    let ls = apply_log(a, phi, z, s, spec)?;
    let lt = apply_log(a, phi, zeta, t, spec)?;
    let d = z - zeta;
    let log_ratio = ls - lt - exponent * (t / s).ln() - d * d / (4.0 * (t - s));
    Ok(HarnackValue { ratio: log_ratio.exp(), log_ratio })
}

/// Horizontal factor `g(x)` of a product datum on `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SpatialFactor {
    Constant(f64),
    /// `exp(-c |x - center|^2)`, `c > 0`.
    Gaussian { c: f64, center: Vec<f64> },
}

/// Heat flow of a spatial factor: `ln` of the value, and gradient and time
/// derivative relative to the value.
#[derive(Debug, Clone, PartialEq)]
struct SpatialFlow {
    sign: f64,
    ln_value: f64,
    grad: Vec<f64>,
    dt: f64,
}

impl SpatialFactor {
    fn flow(&self, x: &[f64], t: f64) -> Result<SpatialFlow> {
        match self {
            SpatialFactor::Constant(c) => Ok(SpatialFlow { sign: c.signum(), ln_value: c.abs().ln(), grad: vec![0.0; x.len()], dt: 0.0 }),
            SpatialFactor::Gaussian { c, center } => {
                if center.len() != x.len() {
                    return Err(domain("spatial centre and point have different dimensions"));
                }
                let n = x.len() as f64;
                let q = 1.0 + 4.0 * c * t;
                let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                let ln_value = -0.5 * n * q.ln() - c * r2 / q;
                let grad = x.iter().zip(center).map(|(a, b)| -2.0 * c * (a - b) / q).collect();
                let dt = -2.0 * n * c / q + 4.0 * c * c * r2 / (q * q);
                Ok(SpatialFlow { sign: 1.0, ln_value, grad, dt })
            }
        }
    }

    fn nonnegative(&self) -> bool {
        match self {
            SpatialFactor::Constant(c) => *c >= 0.0,
            SpatialFactor::Gaussian { .. } => true,
        }
    }
}

/// Finite sum of products `g_k(x) h_k(z)` on `R^n x (0, inf)`.
#[derive(Debug, Clone)]
pub struct ExtensionDatum {
    pub n: usize,
    pub terms: Vec<(SpatialFactor, InitialDatum)>,
}

impl ExtensionDatum {
    pub fn product(n: usize, g: SpatialFactor, h: InitialDatum) -> Self {
        Self { n, terms: vec![(g, h)] }
    }

    pub fn constant(n: usize) -> Self {
        Self::product(n, SpatialFactor::Constant(1.0), InitialDatum::constant(1.0))
    }

    pub fn nonnegative(&self) -> bool {
        self.terms.iter().all(|(g, h)| g.nonnegative() && h.nonnegative)
    }
}

/// Extension solution `U(x, z, t)` with horizontal gradient, `dU/dz` and `dU/dt`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionValue {
    pub u: f64,
    pub grad_x: Vec<f64>,
    pub du_dz: f64,
    pub du_dt: f64,
}

fn check_ext(phi: &ExtensionDatum, x: &[f64]) -> Result<()> {
    if x.len() != phi.n || phi.n == 0 {
        return Err(domain(format!("point has dimension {}, datum has {}", x.len(), phi.n)));
    }
    Ok(())
}

/// `U e^{-shift}` and its derivatives, same scale for all fields.
struct ScaledExtension {
    v: ExtensionValue,
    shift: f64,
}

fn extension_scaled(a: f64, phi: &ExtensionDatum, x: &[f64], z: f64, t: f64, spec: &QuadratureSpec) -> Result<ScaledExtension> {
    check_ext(phi, x)?;
    check_time(t)?;
    let mut parts = Vec::with_capacity(phi.terms.len());
    for (g, h) in &phi.terms {
        let gx = g.flow(x, t)?;
        if gx.ln_value == f64::NEG_INFINITY {
            continue;
        }
        let (q, shift) = kernel_integrals(a, h, z, t, spec, |pt| {
            [1.0, kernels::log_grad_z(a, pt).unwrap_or(f64::NAN), kernels::log_deriv_t(a, pt).unwrap_or(f64::NAN)]
        })?;
        parts.push((gx, q, shift));
    }
    let top = parts.iter().map(|p| p.0.ln_value + p.2).fold(f64::NEG_INFINITY, f64::max);
    let top = if top.is_finite() { top } else { 0.0 };
    let mut out = ExtensionValue { u: 0.0, grad_x: vec![0.0; x.len()], du_dz: 0.0, du_dt: 0.0 };
    for (gx, [hu, hz, ht], shift) in parts {
        let w = gx.sign * (gx.ln_value + shift - top).exp();
        out.u += w * hu;
        for (o, d) in out.grad_x.iter_mut().zip(&gx.grad) {
            *o += w * d * hu;
        }
        out.du_dz += w * hz;
        out.du_dt += w * (gx.dt * hu + ht);
    }
    Ok(ScaledExtension { v: out, shift: top })
}

/// Factorized evaluation of the extension semigroup and its derivatives.
pub fn extension_apply_with_derivatives(
    a: f64,
    phi: &ExtensionDatum,
    x: &[f64],
    z: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<ExtensionValue> {
    let ScaledExtension { v, shift } = extension_scaled(a, phi, x, z, t, spec)?;
    let e = shift.exp();
    Ok(ExtensionValue { u: v.u * e, grad_x: v.grad_x.iter().map(|g| g * e).collect(), du_dz: v.du_dz * e, du_dt: v.du_dt * e })
}

/// `U(X, t)` for product data.
pub fn extension_apply(a: f64, phi: &ExtensionDatum, x: &[f64], z: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    extension_apply_with_derivatives(a, phi, x, z, t, spec).map(|v| v.u)
}

/// `ln U(X, t)` for nonnegative product data; finite where `U` underflows.
pub fn extension_apply_log(a: f64, phi: &ExtensionDatum, x: &[f64], z: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !phi.nonnegative() {
        return Err(Error::InvalidInput("extension datum must be nonnegative".into()));
    }
    let ScaledExtension { v, shift } = extension_scaled(a, phi, x, z, t, spec)?;
    if !(v.u > 0.0) {
        return Err(Error::DegenerateDatum { z, value: v.u * shift.exp() });
    }
    Ok(v.u.ln() + shift)
}

/// `U(X, s) / [U(Y, t) (t/s)^{(n+a+1)/2} exp(|X - Y|^2 / 4(t - s))]`.
#[allow(clippy::too_many_arguments)]
pub fn extension_harnack_ratio(
    a: f64,
    phi: &ExtensionDatum,
    x: &[f64],
    z: f64,
    s: f64,
    y: &[f64],
    zeta: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<HarnackValue> {
    extension_harnack_ratio_with_exponent(a, phi, x, z, s, y, zeta, t, 0.5 * (phi.n as f64 + a + 1.0), spec)
}

#[allow(clippy::too_many_arguments)]
pub fn extension_harnack_ratio_with_exponent(
    a: f64,
    phi: &ExtensionDatum,
    x: &[f64],
    z: f64,
    s: f64,
    y: &[f64],
    zeta: f64,
    t: f64,
    exponent: f64,
    spec: &QuadratureSpec,
) -> Result<HarnackValue> {
    if !phi.nonnegative() {
        return Err(Error::InvalidInput("extension datum must be nonnegative".into()));
    }
    check_time(s)?;
    if !(s < t) {
        return Err(domain(format!("Harnack comparison needs s < t, got s = {s}, t = {t}")));
    }
    check_ext(phi, y)?;
    let ls = extension_apply_log(a, phi, x, z, s, spec)?;
    let lt = extension_apply_log(a, phi, y, zeta, t, spec)?;
    let dist2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() + (z - zeta) * (z - zeta);
    let log_ratio = ls - lt - exponent * (t / s).ln() - dist2 / (4.0 * (t - s));
    Ok(HarnackValue { ratio: log_ratio.exp(), log_ratio })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionLiYau {
    /// `|grad_X log U|^2 - d_t log U`.
    pub lhs: f64,
    /// `(n+a+1)/2t`.
    pub bound: f64,
}

pub fn extension_liyau(a: f64, phi: &ExtensionDatum, x: &[f64], z: f64, t: f64, spec: &QuadratureSpec) -> Result<ExtensionLiYau> {
    if !phi.nonnegative() {
        return Err(Error::InvalidInput("extension datum must be nonnegative".into()));
    }
    let ScaledExtension { v, shift } = extension_scaled(a, phi, x, z, t, spec)?;
    if !(v.u > 0.0) {
        return Err(Error::DegenerateDatum { z, value: v.u * shift.exp() });
    }
    let grad2: f64 = v.grad_x.iter().map(|g| (g / v.u) * (g / v.u)).sum::<f64>() + (v.du_dz / v.u).powi(2);
    Ok(ExtensionLiYau { lhs: grad2 - v.du_dt / v.u, bound: 0.5 * (phi.n as f64 + a + 1.0) / t })
}

/// Left-hand side of [`extension_liyau`] from central differences of `ln U`,
/// steps `1e-5 max(1, |x_i|)`, `1e-5 max(1, z)` and `1e-5 t`.
pub fn extension_liyau_lhs_fd(a: f64, phi: &ExtensionDatum, x: &[f64], z: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let lu = |x: &[f64], z: f64, t: f64| extension_apply_log(a, phi, x, z, t, spec);
    let mut grad2 = 0.0;
    for i in 0..x.len() {
        let h = 1e-5 * x[i].abs().max(1.0);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += h;
        xm[i] -= h;
        grad2 += ((lu(&xp, z, t)? - lu(&xm, z, t)?) / (2.0 * h)).powi(2);
    }
    let hz = 1e-5 * z.max(1.0);
    let dz = (lu(x, z + hz, t)? - lu(x, (z - hz).abs(), t)?) / (2.0 * hz);
    let ht = 1e-5 * t;
    let dt = (lu(x, z, t + ht)? - lu(x, z, t - ht)?) / (2.0 * ht);
    Ok(grad2 + dz * dz - dt)
}
