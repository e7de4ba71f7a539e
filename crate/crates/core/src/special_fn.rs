//! Modified Bessel functions of the first kind for real order `nu > -1` and
//! real argument `z >= 0`, the scaled form `Lambda_nu(z) = z^{-nu} I_nu(z)`,
//! and the Bessel quotient `y_nu(z) = I_{nu+1}(z) / I_nu(z)`.
//!
//! Three evaluation regimes are used:
//!
//! * the power series, summed with running rescaling so it never overflows
//!   (all terms are positive for `nu > -1`, so there is no cancellation);
//! * Hankel's asymptotic expansion once `z >= 30 max(1, nu^2)`, truncated at
//!   the smallest term;
//! * closed forms for `nu = +-1/2`.
//!
//! The quotient is never formed as a ratio of raw function values: below the
//! Hankel threshold it comes from the continued fraction generated by the
//! three-term recurrence, above it from the ratio of the two asymptotic sums.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quadrature::{self, QuadratureSpec, Support};

const LN_2: f64 = std::f64::consts::LN_2;
const PI: f64 = std::f64::consts::PI;
/// ln(sqrt(2/pi))
const LN_SQRT_2_OVER_PI: f64 = -0.225_791_352_644_727_43;
const RESCALE: f64 = 1e290;
const MAX_HANKEL_TERMS: usize = 64;
const MAX_CF_ITERATIONS: usize = 1_000_000;

/// Which side of `a = 0` (equivalently `nu = -1/2`) a parameter lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `a >= 0`, `nu >= -1/2`: the quotient stays below one.
    SharpRange,
    /// `-1 < a < 0`, `-1 < nu < -1/2`.
    SubSharpRange,
}

/// The weight exponent `a > -1` together with the Bessel order `nu = (a - 1) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselParam {
    a: f64,
    nu: f64,
    regime: Regime,
}

impl BesselParam {
    pub fn from_a(a: f64) -> Result<Self> {
        if !a.is_finite() || a <= -1.0 {
            return Err(domain(format!("weight exponent a = {a} must satisfy a > -1")));
        }
        let regime = if a >= 0.0 { Regime::SharpRange } else { Regime::SubSharpRange };
        Ok(Self { a, nu: 0.5 * (a - 1.0), regime })
    }

    pub fn from_nu(nu: f64) -> Result<Self> {
        check_order(nu)?;
        Self::from_a(2.0 * nu + 1.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Series,
    HankelAsymptotic,
    ClosedFormHalfOrder,
    ContinuedFraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub method: Method,
}

fn check_order(nu: f64) -> Result<()> {
    if !nu.is_finite() || nu <= -1.0 {
        return Err(domain(format!("order nu = {nu} must satisfy nu > -1")));
    }
    Ok(())
}

fn check_arg(z: f64) -> Result<()> {
    if z.is_nan() || z < 0.0 {
        return Err(domain(format!("argument z = {z} must be nonnegative")));
    }
    if z.is_infinite() {
        return Err(domain("argument z must be finite"));
    }
    Ok(())
}

fn check(nu: f64, z: f64) -> Result<()> {
    check_order(nu)?;
    check_arg(z)
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Asymptotic expansion applies for `z >= 30 max(1, nu^2)`.
pub fn hankel_regime(nu: f64, z: f64) -> bool {
    z >= 30.0 * (nu * nu).max(1.0)
}

/// `Lambda_nu(z) = exp(log_base [+ z]) * mantissa`.
#[derive(Debug, Clone, Copy)]
struct Parts {
    log_base: f64,
    carries_exp: bool,
    mantissa: f64,
    rel_err: f64,
    method: Method,
}

impl Parts {
    fn log_lambda(&self, z: f64) -> f64 {
        let shift = if self.carries_exp { z } else { 0.0 };
        self.log_base + shift + self.mantissa.ln()
    }

    fn log_scaled_lambda(&self, z: f64) -> f64 {
        let shift = if self.carries_exp { 0.0 } else { -z };
        self.log_base + shift + self.mantissa.ln()
    }
}

fn parts(nu: f64, z: f64) -> Parts {
    debug_assert!(z > 0.0);
    if nu == -0.5 {
        return Parts {
            log_base: LN_SQRT_2_OVER_PI - LN_2,
            carries_exp: true,
            mantissa: 1.0 + (-2.0 * z).exp(),
            rel_err: 4.0 * f64::EPSILON,
            method: Method::ClosedFormHalfOrder,
        };
    }
    if nu == 0.5 {
        return Parts {
            log_base: LN_SQRT_2_OVER_PI - LN_2 - z.ln(),
            carries_exp: true,
            mantissa: -(-2.0 * z).exp_m1(),
            rel_err: 4.0 * f64::EPSILON,
            method: Method::ClosedFormHalfOrder,
        };
    }
    if hankel_regime(nu, z) {
        let (sum, tail) = hankel_sum(nu, z);
        Parts {
            log_base: -0.5 * (2.0 * PI * z).ln() - nu * z.ln(),
            carries_exp: true,
            mantissa: sum,
            rel_err: tail / sum.abs() + 8.0 * f64::EPSILON,
            method: Method::HankelAsymptotic,
        }
    } else {
        series_parts(nu, z)
    }
}

fn series_parts(nu: f64, z: f64) -> Parts {
    let q = 0.25 * z * z;
    let mut log_base = -nu * LN_2 - ln_gamma(nu + 1.0);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut k = 0usize;
    loop {
        k += 1;
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            log_base += RESCALE.ln();
        }
        // past the peak of the terms and negligible
        if kf * (kf + nu) > q && term <= 1e-17 * sum {
            break;
        }
    }
    Parts {
        log_base,
        carries_exp: false,
        mantissa: sum,
        rel_err: (k as f64 + 2.0) * f64::EPSILON,
        method: Method::Series,
    }
}

/// Hankel coefficient `(nu, k)` in product form,
/// `prod_{j<k} (nu^2 - (j + 1/2)^2) / k!`, which agrees with the Gamma-ratio
/// definition wherever the latter is defined and extends it continuously.
pub fn hankel_coefficient(nu: f64, k: usize) -> f64 {
    let nu2 = nu * nu;
    (0..k).fold(1.0, |c, j| {
        let h = j as f64 + 0.5;
        c * (nu2 - h * h) / (j as f64 + 1.0)
    })
}

/// Alternating asymptotic sum `sum_k (-1)^k (nu,k) / (2z)^k`, truncated at the
/// smallest term. Returns the sum and the magnitude of the first omitted term.
fn hankel_sum(nu: f64, z: f64) -> (f64, f64) {
    let x = 0.5 / z;
    let nu2 = nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..MAX_HANKEL_TERMS {
        let h = k as f64 - 0.5;
        let next = -term * (nu2 - h * h) / k as f64 * x;
        if next == 0.0 {
            return (sum, 0.0);
        }
        if next.abs() >= term.abs() {
            return (sum, next.abs());
        }
        sum += next;
        term = next;
        if term.abs() < 1e-18 * sum.abs() {
            return (sum, term.abs());
        }
    }
    (sum, term.abs())
}

/// Coefficients `(-1)^k (nu,k)` up to the truncation point of the smaller of
/// the two expansions for orders `nu` and `nu + 1`.
fn hankel_pair_coefficients(nu: f64, z: f64) -> (Vec<f64>, Vec<f64>) {
    let x = 0.5 / z;
    let mut lo = vec![1.0];
    let mut hi = vec![1.0];
    let (n0, n1) = (nu * nu, (nu + 1.0) * (nu + 1.0));
    let mut prev = 1.0_f64;
    for k in 1..MAX_HANKEL_TERMS {
        let h = k as f64 - 0.5;
        let kf = k as f64;
        let c0 = -lo[k - 1] * (n0 - h * h) / kf;
        let c1 = -hi[k - 1] * (n1 - h * h) / kf;
        let mag = c0.abs().max(c1.abs()) * x.powi(k as i32);
        if mag >= prev || mag < 1e-18 {
            if mag < 1e-18 {
                lo.push(c0);
                hi.push(c1);
            }
            break;
        }
        lo.push(c0);
        hi.push(c1);
        prev = mag;
    }
    (lo, hi)
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `I_nu(z)` for `nu > -1`, `z >= 0`.
///
/// Fails with [`Error::Overflow`] once the value exceeds the `f64` range
/// (around `z = 710`); use [`bessel_i_scaled`] there.
pub fn bessel_i(nu: f64, z: f64) -> Result<EvalResult> {
    check(nu, z)?;
    if z == 0.0 {
        let value = if nu > 0.0 {
            0.0
        } else if nu == 0.0 {
            1.0
        } else {
            return Err(domain(format!("I_{nu}(0) diverges for negative order")));
        };
        return Ok(EvalResult { value, abs_error_estimate: 0.0, method: Method::Series });
    }
    let p = parts(nu, z);
    let log_value = p.log_lambda(z) + nu * z.ln();
    if log_value > f64::MAX.ln() {
        return Err(Error::Overflow { nu, z });
    }
    let shift = if p.carries_exp { z } else { 0.0 };
    let value = (p.log_base + shift + nu * z.ln()).exp() * p.mantissa;
    Ok(EvalResult { value, abs_error_estimate: value * p.rel_err, method: p.method })
}

/// `e^{-z} I_nu(z)`; finite for every finite `z`.
pub fn bessel_i_scaled(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if z == 0.0 {
        return bessel_i(nu, 0.0).map(|r| r.value);
    }
    let p = parts(nu, z);
    Ok((p.log_scaled_lambda(z) + nu * z.ln()).exp())
}

/// `ln(z^{-nu} I_nu(z))`; at `z = 0` this is `-ln(2^nu Gamma(nu + 1))`.
pub fn log_lambda(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if z == 0.0 {
        return Ok(-nu * LN_2 - ln_gamma(nu + 1.0));
    }
    Ok(parts(nu, z).log_lambda(z))
}

/// `ln(e^{-z} z^{-nu} I_nu(z))`, the building block of every kernel in this crate.
pub fn log_scaled_lambda(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if z == 0.0 {
        return Ok(-nu * LN_2 - ln_gamma(nu + 1.0));
    }
    Ok(parts(nu, z).log_scaled_lambda(z))
}

/// Bessel quotient `y_nu(z) = I_{nu+1}(z) / I_nu(z)`.
pub fn bessel_quotient(nu: f64, z: f64) -> Result<f64> {
    quotient_eval(nu, z).map(|r| r.value)
}

/// Bessel quotient with its error estimate and the method used.
pub fn quotient_eval(nu: f64, z: f64) -> Result<EvalResult> {
    check(nu, z)?;
    let closed = |value: f64| EvalResult {
        value,
        abs_error_estimate: 4.0 * f64::EPSILON * value,
        method: Method::ClosedFormHalfOrder,
    };
    if z == 0.0 {
        return Ok(EvalResult { value: 0.0, abs_error_estimate: 0.0, method: Method::Series });
    }
    if nu == -0.5 {
        return Ok(closed(z.tanh()));
    }
    if nu == 0.5 && z >= 1.0 {
        return Ok(closed(1.0 / z.tanh() - 1.0 / z));
    }
    if z < 1e-6 * (nu + 1.0) {
        // two terms of the power series; the continued fraction overflows here
        let value = z / (2.0 * (nu + 1.0)) * (1.0 - z * z / (4.0 * (nu + 1.0) * (nu + 2.0)));
        return Ok(EvalResult { value, abs_error_estimate: 2.0 * f64::EPSILON * value, method: Method::Series });
    }
    if hankel_regime(nu + 1.0, z) {
        let (lo, hi) = hankel_pair_coefficients(nu, z);
        let x = 0.5 / z;
        let value = poly(&hi, x) / poly(&lo, x);
        return Ok(EvalResult {
            value,
            abs_error_estimate: 8.0 * f64::EPSILON,
            method: Method::HankelAsymptotic,
        });
    }
    continued_fraction(nu, z)
}

/// Modified Lentz evaluation of `y_nu(z) = 1/(b_1 + 1/(b_2 + ...))`,
/// `b_k = 2(nu + k)/z`, all partial denominators positive for `nu > -1`.
fn continued_fraction(nu: f64, z: f64) -> Result<EvalResult> {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0_f64;
    for k in 1..=MAX_CF_ITERATIONS {
        let b = 2.0 * (nu + k as f64) / z;
        d = b + d;
        if d == 0.0 {
            d = TINY;
        }
        c = b + 1.0 / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok(EvalResult {
                value: f,
                abs_error_estimate: (k as f64).sqrt() * f64::EPSILON * f,
                method: Method::ContinuedFraction,
            });
        }
    }
    Err(Error::Convergence { value: f, error: f64::NAN, subdivisions: MAX_CF_ITERATIONS })
}

/// `1 - y_nu(z)`, computed without cancellation where the quotient is close to one.
pub fn quotient_complement(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if nu == -0.5 {
        let e = (-2.0 * z).exp();
        return Ok(2.0 * e / (1.0 + e));
    }
    if z > 0.0 && hankel_regime(nu + 1.0, z) {
        let (lo, hi) = hankel_pair_coefficients(nu, z);
        let x = 0.5 / z;
        let diff: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| l - h).collect();
        return Ok(poly(&diff, x) / poly(&lo, x));
    }
    Ok(1.0 - bessel_quotient(nu, z)?)
}

/// `ln(1 - y_nu(z))`; NaN when the quotient is not below one.
///
/// For `nu = -1/2` the complement is `2/(e^{2z}+1)`, which underflows long
/// before its logarithm loses accuracy.
pub fn ln_quotient_complement(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if nu == -0.5 {
        return Ok(LN_2 - 2.0 * z - (-2.0 * z).exp().ln_1p());
    }
    Ok(quotient_complement(nu, z)?.ln())
}

/// `y_nu'(z)` from the Riccati equation `y' = 1 - y^2 - (2 nu + 1) y / z`.
///
/// At `z = 0` the limit `1/(2 nu + 2)` is returned. For `nu = -1/2` the
/// closed form `sech^2 z` is used; in the asymptotic regime the derivative
/// of the ratio of Hankel sums avoids the cancellation of the Riccati form.
pub fn quotient_derivative(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if z == 0.0 {
        return Ok(1.0 / (2.0 * nu + 2.0));
    }
    if nu == -0.5 {
        let e = (-2.0 * z).exp();
        return Ok(4.0 * e / ((1.0 + e) * (1.0 + e)));
    }
    if hankel_regime(nu + 1.0, z) {
        let (lo, hi) = hankel_pair_coefficients(nu, z);
        let x = 0.5 / z;
        let n = lo.len();
        // numerator of (S_hi / S_lo)' collected by total degree
        let mut num = vec![0.0; 2 * n];
        for (k, b) in hi.iter().enumerate() {
            for (j, a) in lo.iter().enumerate() {
                num[j + k] += (k as f64 - j as f64) * b * a;
            }
        }
        let s_lo = poly(&lo, x);
        return Ok(-poly(&num, x) / (z * s_lo * s_lo));
    }
    let y = bessel_quotient(nu, z)?;
    Ok(1.0 - y * y - (2.0 * nu + 1.0) * y / z)
}

/// `z (1 - y_nu(z))`, which tends to `(2 nu + 1)/2`.
pub fn asymptotic_tail(nu: f64, z: f64) -> Result<f64> {
    if z <= 0.0 {
        return Err(domain("asymptotic tail needs z > 0"));
    }
    Ok(z * quotient_complement(nu, z)?)
}

/// Constant `C` in `|z (1 - y_nu(z)) - (2 nu + 1)/2| <= C / z` for `z >= 100`.
///
/// From the two-term expansion the leading remainder is
/// `(2 nu + 1)(2 nu + 3) / 8`; the bound doubles it and adds one to absorb
/// higher-order terms over `z >= 100`.
pub fn asymptotic_tail_constant(nu: f64) -> f64 {
    ((2.0 * nu + 1.0) * (2.0 * nu + 3.0)).abs() / 4.0 + 1.0
}

/// Relative deviation between `I_nu(z)` and
/// `(z/2)^nu / Gamma(nu + 1) * exp(int_0^z y_nu)` with the integral by quadrature.
pub fn connection_check(nu: f64, z: f64, spec: &QuadratureSpec) -> Result<f64> {
    check(nu, z)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    let integral = quadrature::integrate_weighted(
        |t| bessel_quotient(nu, t).unwrap_or(f64::NAN),
        0.0,
        &Support::Interval { lo: 0.0, hi: z },
        spec,
    )?;
    // compare logarithms of Lambda_nu to stay finite for every z
    let lhs = log_lambda(nu, z)?;
    let rhs = -nu * LN_2 - ln_gamma(nu + 1.0) + integral.value;
    Ok((rhs - lhs).exp_m1().abs())
}

/// `I_nu(z)` from the Poisson integral
/// `(z/2)^nu / (sqrt(pi) Gamma(nu + 1/2)) int_0^pi e^{z cos s} sin^{2 nu} s ds`, `nu > -1/2`.
pub fn poisson_representation(nu: f64, z: f64, spec: &QuadratureSpec) -> Result<f64> {
    check(nu, z)?;
    if nu <= -0.5 {
        return Err(domain("Poisson representation needs nu > -1/2"));
    }
    let power = 2.0 * nu;
    // sin^{2nu} s = s^{2nu} (sin s / s)^{2nu}; each half handled with its own endpoint weight
    let sinc = |s: f64| if s == 0.0 { 1.0 } else { s.sin() / s };
    let near = quadrature::integrate_weighted(
        |s| (z * (s.cos() - 1.0)).exp() * sinc(s).powf(power),
        power,
        &Support::Interval { lo: 0.0, hi: 0.5 * PI },
        spec,
    )?;
    let far = quadrature::integrate_weighted(
        |s| (-z * (s.cos() + 1.0)).exp() * sinc(s).powf(power),
        power,
        &Support::Interval { lo: 0.0, hi: 0.5 * PI },
        spec,
    )?;
    let log_pref = nu * (0.5 * z).ln() - 0.5 * PI.ln() - ln_gamma(nu + 0.5) + z;
    Ok(log_pref.exp() * (near.value + far.value))
}

/// Location and value of `sup_z y_nu(z)` for `-1 < nu < -1/2`, found by a
/// logarithmic scan followed by golden-section refinement.
pub fn quotient_supremum(nu: f64) -> Result<(f64, f64)> {
    check_order(nu)?;
    if nu >= -0.5 {
        return Err(domain("the quotient supremum is attained only for nu < -1/2"));
    }
    let grid: Vec<f64> = (0..=400).map(|i| 10f64.powf(-2.0 + 9.0 * i as f64 / 400.0)).collect();
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &z) in grid.iter().enumerate() {
        let v = bessel_quotient(nu, z)?;
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(grid.len() - 1)];
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = bessel_quotient(nu, x1)?;
    let mut f2 = bessel_quotient(nu, x2)?;
    while hi - lo > 1e-10 * hi {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = bessel_quotient(nu, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = bessel_quotient(nu, x2)?;
        }
    }
    let z = 0.5 * (lo + hi);
    Ok((z, bessel_quotient(nu, z)?))
}

/// Direct power series for `I_nu(z)` and `I_nu'(z)`, both divided by the leading
/// term `(z/2)^nu / Gamma(nu + 1)`. Independent of every other routine here.
/// Terms are positive apart from the `k = 0` derivative term when `nu < 0`.
fn series_with_derivative(nu: f64, z: f64) -> (f64, f64) {
    let q = 0.25 * z * z;
    let (mut term, mut s, mut d) = (1.0f64, 0.0f64, 0.0f64);
    let mut k = 0.0;
    loop {
        s += term;
        d += (2.0 * k + nu) / z * term;
        if k * (k + nu) > q && term <= 1e-17 * s {
            break;
        }
        term *= q / ((k + 1.0) * (k + nu + 1.0));
        k += 1.0;
    }
    (s, d)
}

/// Residuals of the two recurrences
/// `I_{nu+1}'/I_nu = 1 - (nu+1)/z y_nu` and `I_nu'/I_nu = y_nu + nu/z`,
/// with both sides taken from direct power series. Each residual is divided
/// by the sum of the magnitudes of its terms, since the right-hand sides can
/// vanish for negative orders.
pub fn recurrence_check(nu: f64, z: f64) -> Result<(f64, f64)> {
    check(nu, z)?;
    if !(z > 0.0 && z <= 200.0) {
        return Err(domain("recurrence check uses the power series and needs 0 < z <= 200"));
    }
    let (s0, d0) = series_with_derivative(nu, z);
    let (s1, d1) = series_with_derivative(nu + 1.0, z);
    // normalised sums stay below ~1e90 for z <= 200
    let lead = 0.5 * z / (nu + 1.0);
    let y = lead * s1 / s0;
    let dy1 = lead * d1 / s0;
    let r1 = (dy1 - (1.0 - (nu + 1.0) / z * y)).abs() / (dy1.abs() + 1.0 + ((nu + 1.0) / z * y).abs());
    let r2 = (d0 / s0 - (y + nu / z)).abs() / ((d0 / s0).abs() + y.abs() + (nu / z).abs());
    Ok((r1, r2))
}

/// `|y_{-1/2}(z)^2 - 1 + 4/(e^{2z}+1) (1 - 1/(e^{2z}+1))|`.
pub fn nasell_residual(z: f64) -> Result<f64> {
    check_arg(z)?;
    let y = bessel_quotient(-0.5, z)?;
    let e = 1.0 / ((2.0 * z).exp() + 1.0);
    Ok((y * y - 1.0 + 4.0 * e * (1.0 - e)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Direct partial sum of the defining series, no rescaling.
    fn series_oracle(nu: f64, z: f64, terms: usize) -> f64 {
        (0..terms)
            .map(|k| {
                let k = k as f64;
                ((0.5 * z).ln() * (nu + 2.0 * k) - libm::lgamma(k + 1.0) - libm::lgamma(k + nu + 1.0))
                    .exp()
            })
            .sum()
    }

    #[test]
    fn order_zero_at_one() {
        let r = bessel_i(0.0, 1.0).unwrap();
        assert!((r.value - 1.266066).abs() < 1e-6);
        assert_relative_eq!(r.value, series_oracle(0.0, 1.0, 20), max_relative = 1e-14);
    }

    #[test]
    fn half_order_closed_forms() {
        let v = bessel_i(0.5, 1.0).unwrap().value;
        assert!((v - 0.937674).abs() < 1e-6);
        assert_relative_eq!(v, (2.0 / PI).sqrt() * 1f64.sinh(), max_relative = 1e-15);
        let s = bessel_i_scaled(-0.5, 10.0).unwrap();
        assert!((s - 0.126157).abs() < 1e-6);
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_i(2.0, 0.0).unwrap().value, 0.0);
        assert_eq!(bessel_i(0.0, 0.0).unwrap().value, 1.0);
        assert!(matches!(bessel_i(-0.3, 0.0), Err(Error::Domain(_))));
        assert!(bessel_i_scaled(0.5, 1e-300).unwrap() < 1e-140);
        assert_eq!(log_lambda(0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_i(-1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i(0.0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_quotient(-1.5, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i(0.0, 800.0), Err(Error::Overflow { .. })));
    }

    #[test]
    fn scaled_large_argument() {
        let s = bessel_i_scaled(0.0, 700.0).unwrap();
        let lead = 1.0 / (2.0 * PI * 700.0).sqrt();
        assert!((s / lead - 1.0).abs() < 1e-3);
        assert!(bessel_i_scaled(1.3, 1e12).unwrap().is_finite());
    }

    #[test]
    fn series_against_oracle_across_regimes() {
        for &nu in &[-0.9, -0.75, -0.3, 0.0, 0.7, 1.0, 2.5, 4.0] {
            for &z in &[1e-3, 0.5, 3.0, 12.0, 29.0, 60.0, 200.0, 650.0] {
                let got = bessel_i(nu, z).unwrap().value;
                let want = series_oracle(nu, z, 2000);
                assert_relative_eq!(got, want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn hankel_matches_series_at_switchover() {
        for &nu in &[-0.8f64, 0.0, 0.3, 1.0] {
            let z = 30.0 * (nu * nu).max(1.0);
            let below = series_parts(nu, z).log_lambda(z);
            let above = parts(nu, z).log_lambda(z);
            assert!((below - above).abs() < 1e-13, "nu={nu}");
        }
    }

    #[test]
    fn log_lambda_examples() {
        assert!((log_lambda(0.5, 1.0).unwrap() - (-0.064353)).abs() < 1e-5);
        // Lambda_{-1/2}(2) = sqrt(2) I_{-1/2}(2) = sqrt(2/pi) cosh 2
        let want = ((2.0 / PI).sqrt() * 2f64.cosh()).ln();
        assert!((log_lambda(-0.5, 2.0).unwrap() - want).abs() < 1e-12);
        assert!((want - 1.099211).abs() < 1e-5);
    }

    #[test]
    fn quotient_examples() {
        assert!((bessel_quotient(-0.5, 1.0).unwrap() - 0.761594).abs() < 1e-6);
        assert!((bessel_quotient(-0.5, 1.0).unwrap() - 1f64.tanh()).abs() < 1e-15);
        assert!((bessel_quotient(0.0, 0.01).unwrap() - 0.0050).abs() < 1e-5);
        assert!((bessel_quotient(0.5, 2.0).unwrap() - 0.537314).abs() < 1e-6);
        assert!((bessel_quotient(0.5, 2.0).unwrap() - (1.0 / 2f64.tanh() - 0.5)).abs() < 1e-8);
        assert_eq!(bessel_quotient(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn continued_fraction_matches_series_ratio() {
        for &nu in &[-0.9, -0.6, 0.0, 0.25, 2.0] {
            for &z in &[0.01, 0.7, 5.0, 25.0] {
                let cf = continued_fraction(nu, z).unwrap().value;
                let ratio = series_oracle(nu + 1.0, z, 400) / series_oracle(nu, z, 400);
                assert_relative_eq!(cf, ratio, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn complement_is_consistent() {
        for &nu in &[-0.9, -0.5, 0.0, 1.5] {
            for &z in &[0.5, 40.0, 300.0, 1e5] {
                let c = quotient_complement(nu, z).unwrap();
                let y = bessel_quotient(nu, z).unwrap();
                assert!((c - (1.0 - y)).abs() < 1e-14, "nu={nu} z={z}");
            }
        }
        let l = ln_quotient_complement(-0.5, 2000.0).unwrap();
        assert!((l - (2f64.ln() - 4000.0)).abs() < 1e-12);
    }

    #[test]
    fn quotient_derivative_examples() {
        assert_eq!(quotient_derivative(0.0, 0.0).unwrap(), 0.5);
        assert!((quotient_derivative(-0.5, 1.0).unwrap() - 0.419974).abs() < 1e-6);
        let sech2 = 1.0 / 1f64.cosh().powi(2);
        assert!((quotient_derivative(-0.5, 1.0).unwrap() - sech2).abs() < 1e-15);
        for &z in &[0.5f64, 1.0, 2.0, 5.0] {
            let y = 1.0 / z.tanh() - 1.0 / z;
            let riccati = 1.0 - y * y - 2.0 * y / z;
            let got = quotient_derivative(0.5, z).unwrap();
            assert!(got > 0.0);
            assert!((got - riccati).abs() < 1e-12);
        }
    }

    #[test]
    fn asymptotic_derivative_matches_riccati_with_complement() {
        // above the switchover compare against finite differences of the complement
        for &nu in &[0.0, 0.7, -0.8] {
            let z = 400.0;
            let h = 1e-2;
            let fd = -(quotient_complement(nu, z + h).unwrap() - quotient_complement(nu, z - h).unwrap())
                / (2.0 * h);
            let got = quotient_derivative(nu, z).unwrap();
            assert!((got - fd).abs() < 1e-9 * fd.abs().max(1e-6), "nu={nu} got={got} fd={fd}");
        }
    }

    #[test]
    fn hankel_coefficients() {
        for &nu in &[-0.7, 0.0, 0.3, 2.0] {
            assert_eq!(hankel_coefficient(nu, 0), 1.0);
            let d = hankel_coefficient(nu + 1.0, 1) - hankel_coefficient(nu, 1);
            assert!((d - (2.0 * nu + 1.0)).abs() < 1e-14);
        }
        assert_eq!(hankel_coefficient(0.5, 1), 0.0);
        // Gamma-ratio form at a generic order
        let nu: f64 = 0.3;
        let k = 3;
        let g = |x: f64| libm::tgamma(x);
        let ratio = -g(0.5 - nu + 3.0) * g(0.5 + nu + 3.0) / (g(4.0) * g(0.5 - nu) * g(0.5 + nu));
        assert!((hankel_coefficient(nu, k) - ratio).abs() < 1e-13);
    }

    #[test]
    fn asymptotic_tail_examples() {
        assert!((asymptotic_tail(0.5, 1000.0).unwrap() - 1.0).abs() < 2e-3);
        assert!((asymptotic_tail(0.0, 1000.0).unwrap() - 0.5).abs() < 2e-3);
        let t = asymptotic_tail(-0.5, 30.0).unwrap();
        assert!((t - 60.0 / (60f64.exp() + 1.0)).abs() < 1e-30);
        for &nu in &[-0.9, -0.5, 0.0, 1.0, 3.0] {
            let c = asymptotic_tail_constant(nu);
            for &z in &[100.0, 1e3, 1e5] {
                let dev = (asymptotic_tail(nu, z).unwrap() - (2.0 * nu + 1.0) / 2.0).abs();
                assert!(dev <= c / z, "nu={nu} z={z}");
            }
        }
    }

    #[test]
    fn supremum_exceeds_one_in_sub_sharp_range() {
        for &nu in &[-0.9, -0.75, -0.6] {
            let (z, m) = quotient_supremum(nu).unwrap();
            assert!(m > 1.0);
            assert!(quotient_derivative(nu, z).unwrap().abs() < 1e-6);
        }
        assert!(quotient_supremum(0.0).is_err());
    }

    #[test]
    fn param_regimes() {
        let p = BesselParam::from_a(0.0).unwrap();
        assert_eq!(p.nu(), -0.5);
        assert_eq!(p.regime(), Regime::SharpRange);
        assert_eq!(BesselParam::from_a(-0.2).unwrap().regime(), Regime::SubSharpRange);
        assert!(BesselParam::from_a(-1.0).is_err());
        assert_eq!(BesselParam::from_nu(0.5).unwrap().a(), 2.0);
    }

    #[test]
    fn quotient_at_tiny_arguments() {
        for &nu in &[-0.99, -0.5, 0.0, 3.0] {
            for &z in &[1e-308, 1e-200, 1e-20] {
                let y = bessel_quotient(nu, z).unwrap();
                assert!((y / (z / (2.0 * nu + 2.0)) - 1.0).abs() < 1e-14, "nu={nu} z={z}");
                assert!((quotient_complement(nu, z).unwrap() - 1.0).abs() < 1e-14);
            }
            let z = 0.99e-6 * (nu + 1.0);
            let (a, b) = (bessel_quotient(nu, z).unwrap(), continued_fraction(nu, z).unwrap().value);
            assert!((a / b - 1.0).abs() < 1e-14, "nu={nu}");
        }
    }

    #[test]
    fn recurrences_hold_on_log_grid() {
        for &nu in &[-0.75, -0.5, 0.0, 0.5, 2.0] {
            for i in 0..=60 {
                let z = 10f64.powf(-3.0 + 4.7 * i as f64 / 60.0);
                let (r1, r2) = recurrence_check(nu, z).unwrap();
                assert!(r1 <= 1e-10 && r2 <= 1e-10, "nu={nu} z={z}: {r1} {r2}");
            }
        }
    }

    #[test]
    fn nasell_refinement() {
        for i in 0..=100 {
            let z = 0.1 + 19.9 * i as f64 / 100.0;
            assert!(nasell_residual(z).unwrap() <= 1e-12);
        }
    }
}
