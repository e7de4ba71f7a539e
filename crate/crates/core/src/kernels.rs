//! The Neumann heat kernel `p^(a)(z, zeta, t)` of `B = d^2/dz^2 + (a/z) d/dz`
//! on `(0, inf)` with reference measure `z^a dz`, its log-derivatives, and the
//! product kernel of the extension operator on `R^n x (0, inf)`.
//!
//! Everything is assembled in log form as
//! `-(a+1)/2 ln(2t) + ln(e^{-w} Lambda_nu(w)) - (z - zeta)^2 / 4t`, `w = z zeta / 2t`,
//! so no intermediate quantity overflows.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::quadrature::{integrate_weighted, QuadratureSpec, Support};
use crate::special_fn::{self, ln_gamma, BesselParam};

const LN_2: f64 = std::f64::consts::LN_2;
const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelPoint {
    pub z: f64,
    pub zeta: f64,
    pub t: f64,
}

impl KernelPoint {
    pub fn new(z: f64, zeta: f64, t: f64) -> Result<Self> {
        let pt = Self { z, zeta, t };
        pt.validate()?;
        Ok(pt)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z >= 0.0 && self.z.is_finite() && self.zeta >= 0.0 && self.zeta.is_finite()) {
            return Err(domain(format!("kernel arguments must be finite and nonnegative, got z = {}, zeta = {}", self.z, self.zeta)));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(domain(format!("time t = {} must be positive", self.t)));
        }
        Ok(())
    }

    /// `w = z zeta / 2t`, the argument of the Bessel factor.
    pub fn w(&self) -> f64 {
        self.z * self.zeta / (2.0 * self.t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionPoint {
    pub x: Vec<f64>,
    pub z: f64,
    pub y: Vec<f64>,
    pub zeta: f64,
    pub t: f64,
}

impl ExtensionPoint {
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.is_empty() || self.x.len() != self.y.len() {
            return Err(domain(format!(
                "horizontal coordinates must have equal positive length, got {} and {}",
                self.x.len(),
                self.y.len()
            )));
        }
        KernelPoint { z: self.z, zeta: self.zeta, t: self.t }.validate()
    }

    pub fn vertical(&self) -> KernelPoint {
        KernelPoint { z: self.z, zeta: self.zeta, t: self.t }
    }

    pub fn horizontal_dist2(&self) -> f64 {
        self.x.iter().zip(&self.y).map(|(a, b)| (a - b) * (a - b)).sum()
    }
}

fn prepare(a: f64, pt: &KernelPoint) -> Result<BesselParam> {
    let p = BesselParam::from_a(a)?;
    pt.validate()?;
    Ok(p)
}

/// `ln p^(a)(z, zeta, t)`.
pub fn heat_kernel_log(a: f64, pt: &KernelPoint) -> Result<f64> {
    let p = prepare(a, pt)?;
    let KernelPoint { z, zeta, t } = *pt;
    let half_dim = 0.5 * (a + 1.0);
    if z == 0.0 || zeta == 0.0 {
        let r = z.max(zeta);
        return Ok(-(a * LN_2 + ln_gamma(half_dim)) - half_dim * t.ln() - r * r / (4.0 * t));
    }
    let d = z - zeta;
    Ok(-half_dim * (2.0 * t).ln() + special_fn::log_scaled_lambda(p.nu(), pt.w())? - d * d / (4.0 * t))
}

/// `p^(a)(z, zeta, t)`; symmetric in `z`, `zeta` exactly as computed.
pub fn heat_kernel(a: f64, pt: &KernelPoint) -> Result<f64> {
    heat_kernel_log(a, pt).map(f64::exp)
}

/// `(4 pi t)^{-1/2} (e^{-(z-zeta)^2/4t} + e^{-(z+zeta)^2/4t})`, the `a = 0` kernel
/// as the even reflection of the Gauss-Weierstrass kernel.
pub fn heat_kernel_reflection(z: f64, zeta: f64, t: f64) -> Result<f64> {
    heat_kernel_reflection_log(z, zeta, t).map(f64::exp)
}

pub fn heat_kernel_reflection_log(z: f64, zeta: f64, t: f64) -> Result<f64> {
    KernelPoint::new(z, zeta, t)?;
    let d = z - zeta;
    let near = d * d / (4.0 * t);
    let gap = z * zeta / t;
    Ok(-0.5 * (4.0 * PI * t).ln() - near + (-gap).exp().ln_1p())
}

/// `d/dz ln p^(a) = y(w) zeta/2t - z/2t`, formed as
/// `(zeta - z)/2t - (1 - y(w)) zeta/2t` to avoid cancellation.
pub fn log_grad_z(a: f64, pt: &KernelPoint) -> Result<f64> {
    let p = prepare(a, pt)?;
    let KernelPoint { z, zeta, t } = *pt;
    if z == 0.0 {
        return Ok(0.0);
    }
    let c = special_fn::quotient_complement(p.nu(), pt.w())?;
    Ok((zeta - z) / (2.0 * t) - c * zeta / (2.0 * t))
}

/// `d/dzeta ln p^(a)`, by symmetry of the kernel.
pub fn log_grad_zeta(a: f64, pt: &KernelPoint) -> Result<f64> {
    log_grad_z(a, &KernelPoint { z: pt.zeta, zeta: pt.z, t: pt.t })
}

/// `d/dt ln p^(a) = -(a+1)/2t - y(w) z zeta/2t^2 + (z^2 + zeta^2)/4t^2`.
pub fn log_deriv_t(a: f64, pt: &KernelPoint) -> Result<f64> {
    let p = prepare(a, pt)?;
    let KernelPoint { z, zeta, t } = *pt;
    let d = z - zeta;
    let base = -(a + 1.0) / (2.0 * t) + d * d / (4.0 * t * t);
    if z == 0.0 || zeta == 0.0 {
        return Ok(base);
    }
    let c = special_fn::quotient_complement(p.nu(), pt.w())?;
    Ok(base + c * z * zeta / (2.0 * t * t))
}

/// `(d_z ln p)^2 - d_t ln p` evaluated two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiYauGap {
    /// `(a+1)/2t + zeta^2/4t^2 (y^2 - 1)`.
    pub via_identity: f64,
    /// From [`log_grad_z`] and [`log_deriv_t`].
    pub via_derivatives: f64,
    /// `(a+1)/2t`.
    pub bound: f64,
    /// `bound - gap = zeta^2 (1 - y)(1 + y) / 4t^2`, computed directly.
    pub margin: f64,
    /// `ln(margin)`; finite exactly when the margin is positive, even where
    /// `margin` itself underflows.
    pub log_margin: f64,
}

impl LiYauGap {
    /// Relative disagreement of the two routes, normalised by `max(|gap|, bound)`.
    pub fn route_residual(&self) -> f64 {
        (self.via_identity - self.via_derivatives).abs() / self.via_identity.abs().max(self.bound)
    }

    pub fn strictly_below_bound(&self) -> bool {
        self.log_margin.is_finite()
    }
}

pub fn liyau_gap(a: f64, pt: &KernelPoint) -> Result<LiYauGap> {
    let p = prepare(a, pt)?;
    let KernelPoint { z, zeta, t } = *pt;
    let w = pt.w();
    let bound = (a + 1.0) / (2.0 * t);
    let s = zeta * zeta / (4.0 * t * t);
    let (c, log_c) = if z == 0.0 {
        (1.0, 0.0)
    } else {
        (special_fn::quotient_complement(p.nu(), w)?, special_fn::ln_quotient_complement(p.nu(), w)?)
    };
    let one_plus_y = 2.0 - c;
    let margin = s * c * one_plus_y;
    let log_margin = if zeta > 0.0 && log_c.is_finite() { s.ln() + log_c + one_plus_y.ln() } else { f64::NEG_INFINITY };
    let via_identity = bound - margin;
    let g = log_grad_z(a, pt)?;
    let via_derivatives = g * g - log_deriv_t(a, pt)?;
    Ok(LiYauGap { via_identity, via_derivatives, bound, margin, log_margin })
}

/// `ln G_a(X, Y, t)` for the product kernel
/// `(4 pi t)^{-n/2} e^{-|x-y|^2/4t} p^(a)(z, zeta, t)`.
pub fn extension_kernel_log(a: f64, ept: &ExtensionPoint) -> Result<f64> {
    ept.validate()?;
    let n = ept.dim() as f64;
    let t = ept.t;
    Ok(-0.5 * n * (4.0 * PI * t).ln() - ept.horizontal_dist2() / (4.0 * t) + heat_kernel_log(a, &ept.vertical())?)
}

pub fn extension_kernel(a: f64, ept: &ExtensionPoint) -> Result<f64> {
    extension_kernel_log(a, ept).map(f64::exp)
}

/// `|int p^(a)(z, zeta, t) zeta^a dzeta - 1|`.
pub fn mass_defect(a: f64, z: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    BesselParam::from_a(a)?;
    KernelPoint::new(z, 0.0, t)?;
    let q = integrate_weighted(
        |zeta| heat_kernel_log(a, &KernelPoint { z, zeta, t }).map(f64::exp).unwrap_or(f64::NAN),
        a,
        &Support::Gaussian { center: z, t },
        spec,
    )?;
    Ok((q.value - 1.0).abs())
}

/// Relative deviation of `int p(z, zeta, t) p(zeta, eta, s) zeta^a dzeta` from
/// `p(z, eta, t + s)`. The integrand is rescaled by the target value and
/// integrated over the window of the product Gaussian, centred at
/// `(z s + eta t)/(s + t)` with time scale `st/(s + t)`.
pub fn chapman_kolmogorov_residual(a: f64, z: f64, eta: f64, s: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    BesselParam::from_a(a)?;
    let target = heat_kernel_log(a, &KernelPoint::new(z, eta, t + s)?)?;
    KernelPoint::new(eta, 0.0, s)?;
    let q = integrate_weighted(
        |zeta| {
            let l1 = heat_kernel_log(a, &KernelPoint { z, zeta, t });
            let l2 = heat_kernel_log(a, &KernelPoint { z: zeta, zeta: eta, t: s });
            match (l1, l2) {
                (Ok(l1), Ok(l2)) => (l1 + l2 - target).exp(),
                _ => f64::NAN,
            }
        },
        a,
        &Support::Gaussian { center: (z * s + eta * t) / (s + t), t: s * t / (s + t) },
        spec,
    )?;
    Ok((q.value - 1.0).abs())
}
