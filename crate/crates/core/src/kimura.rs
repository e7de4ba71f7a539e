//! The model Kimura operator `L_b = x d^2/dx^2 + b d/dx` on `(0, inf)`, its
//! heat kernel `k_b`, and the change of variables `x = z^2/4`, `b = (a+1)/2`
//! that carries it onto the Bessel problem.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::kernels::{self, KernelPoint};
use crate::special_fn;

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KimuraParam {
    pub b: f64,
    pub induced_a: f64,
}

impl KimuraParam {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(domain(format!("Kimura parameter b = {b} must be positive")));
        }
        Ok(Self { b, induced_a: 2.0 * b - 1.0 })
    }

    pub fn from_a(a: f64) -> Result<Self> {
        special_fn::BesselParam::from_a(a)?;
        Self::new(0.5 * (a + 1.0))
    }
}

fn check_point(x: f64, y: f64, t: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite() && y > 0.0 && y.is_finite()) {
        return Err(domain(format!("Kimura kernel needs x, y > 0, got x = {x}, y = {y}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("time t = {t} must be positive")));
    }
    Ok(())
}

/// `ln k_b(x, y, t)`, with
/// `k_b = t^{-1} (x/y)^{(1-b)/2} e^{-(x+y)/t} I_{b-1}(2 sqrt(xy)/t)`
/// assembled from the same scaled Bessel core as the Bessel kernel:
/// `(b-1) ln 2 - b ln t + (b-1) ln y - (sqrt x - sqrt y)^2/t + ln(e^{-w} Lambda_{b-1}(w))`.
pub fn kimura_kernel_log(b: f64, x: f64, y: f64, t: f64) -> Result<f64> {
    let p = KimuraParam::new(b)?;
    check_point(x, y, t)?;
    let (sx, sy) = (x.sqrt(), y.sqrt());
    let w = 2.0 * sx * sy / t;
    let d = sx - sy;
    let nu = p.b - 1.0;
    Ok(nu * LN_2 - p.b * t.ln() + nu * y.ln() - d * d / t + special_fn::log_scaled_lambda(nu, w)?)
}

pub fn kimura_kernel(b: f64, x: f64, y: f64, t: f64) -> Result<f64> {
    kimura_kernel_log(b, x, y, t).map(f64::exp)
}

/// Direct transcription of the closed form using `e^{-w} I_{b-1}(w)`; kept
/// separate from [`kimura_kernel_log`] as an independent route for testing.
pub fn kimura_kernel_direct(b: f64, x: f64, y: f64, t: f64) -> Result<f64> {
    KimuraParam::new(b)?;
    check_point(x, y, t)?;
    let w = 2.0 * (x * y).sqrt() / t;
    let scaled = special_fn::bessel_i_scaled(b - 1.0, w)?;
    Ok((x / y).powf(0.5 * (1.0 - b)) / t * (-(x + y) / t + w).exp() * scaled)
}

/// `|(zeta/2) k_b(z^2/4, zeta^2/4, t) / (p^(a)(z, zeta, t) zeta^a) - 1|`, computed
/// from the logs so it stays meaningful where both sides underflow.
pub fn equivalence_residual(a: f64, z: f64, zeta: f64, t: f64) -> Result<f64> {
    let p = KimuraParam::from_a(a)?;
    if !(z > 0.0 && zeta > 0.0) {
        return Err(domain("equivalence check needs z, zeta > 0"));
    }
    let lhs = (0.5 * zeta).ln() + kimura_kernel_log(p.b, 0.25 * z * z, 0.25 * zeta * zeta, t)?;
    let rhs = kernels::heat_kernel_log(a, &KernelPoint::new(z, zeta, t)?)? + a * zeta.ln();
    Ok((lhs - rhs).exp_m1().abs())
}

/// Polynomial `sum c[i][j] x^i t^j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Poly2 {
    pub coeffs: Vec<Vec<f64>>,
}

impl Poly2 {
    pub fn new(coeffs: Vec<Vec<f64>>) -> Self {
        Self { coeffs }
    }

    /// The monomial `x^i t^j`.
    pub fn monomial(i: usize, j: usize) -> Self {
        let mut coeffs = vec![vec![0.0; j + 1]; i + 1];
        coeffs[i][j] = 1.0;
        Self { coeffs }
    }

    /// Partial derivatives of orders `(dx, dt)` at `(x, t)`.
    pub fn eval_deriv(&self, x: f64, t: f64, dx: usize, dt: usize) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.coeffs.iter().enumerate() {
            if i < dx {
                continue;
            }
            for (j, c) in row.iter().enumerate() {
                if j < dt || *c == 0.0 {
                    continue;
                }
                s += c * falling(i, dx) * falling(j, dt) * x.powi((i - dx) as i32) * t.powi((j - dt) as i32);
            }
        }
        s
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.eval_deriv(x, t, 0, 0)
    }

    /// `u(z, t) = v(z^2/4, t)` as a polynomial in `(z, t)`.
    pub fn pullback(&self) -> Poly2 {
        let deg = self.coeffs.len();
        let mut coeffs = vec![Vec::new(); 2 * deg.max(1) - 1];
        for (i, row) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = row.iter().map(|c| c / 4f64.powi(i as i32)).collect();
        }
        Poly2 { coeffs }
    }
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|m| (n - m) as f64).product()
}

/// `(u_t - B^(a) u) - (v_t - L_b v)` with `u(z, t) = v(z^2/4, t)`, both sides from
/// exact polynomial derivatives, divided by `1 + |v_t| + |L_b v|`.
pub fn intertwine_residual(a: f64, v: &Poly2, z: f64, t: f64) -> Result<f64> {
    let p = KimuraParam::from_a(a)?;
    if !(z > 0.0 && z.is_finite() && t.is_finite()) {
        return Err(domain("intertwining check needs z > 0 and finite t"));
    }
    let u = v.pullback();
    let bessel_side = u.eval_deriv(z, t, 0, 1) - u.eval_deriv(z, t, 2, 0) - a / z * u.eval_deriv(z, t, 1, 0);
    let x = 0.25 * z * z;
    let vt = v.eval_deriv(x, t, 0, 1);
    let lv = x * v.eval_deriv(x, t, 2, 0) + p.b * v.eval_deriv(x, t, 1, 0);
    Ok((bessel_side - (vt - lv)).abs() / (1.0 + vt.abs() + lv.abs()))
}

/// `z^a u_z - 2^{2b-1} x^b v_x`, relative to the larger side (absolute when both vanish).
pub fn flux_map_residual(a: f64, v: &Poly2, z: f64, t: f64) -> Result<f64> {
    let p = KimuraParam::from_a(a)?;
    if !(z > 0.0 && z.is_finite() && t.is_finite()) {
        return Err(domain("flux check needs z > 0 and finite t"));
    }
    let lhs = z.powf(a) * v.pullback().eval_deriv(z, t, 1, 0);
    let x = 0.25 * z * z;
    let rhs = 2f64.powf(2.0 * p.b - 1.0) * x.powf(p.b) * v.eval_deriv(x, t, 1, 0);
    let scale = lhs.abs().max(rhs.abs());
    Ok(if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale })
}
