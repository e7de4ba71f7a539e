//! The von Mises-Fisher distribution on `S^{n-1}`: norming constant, density,
//! the identity `d/dz ln(1/a_n(z)) = y_{n/2-1}(z)`, and recovery of the
//! concentration from a mean resultant length by monotone inversion of the quotient.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_interval, QuadratureSpec};
use crate::special_fn::{self, ln_gamma};

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VmfSpec {
    pub n: usize,
    pub omega: Vec<f64>,
    pub z: f64,
}

impl VmfSpec {
    pub fn new(omega: Vec<f64>, z: f64) -> Result<Self> {
        let spec = Self { n: omega.len(), omega, z };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_n(self.n)?;
        if self.omega.len() != self.n {
            return Err(domain(format!("mean direction has length {}, expected {}", self.omega.len(), self.n)));
        }
        check_unit(&self.omega, "mean direction")?;
        if !(self.z >= 0.0 && self.z.is_finite()) {
            return Err(domain(format!("concentration z = {} must be finite and nonnegative", self.z)));
        }
        Ok(())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(domain(format!("sphere dimension n = {n} must be at least 2")));
    }
    Ok(())
}

fn check_unit(v: &[f64], what: &str) -> Result<()> {
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !((norm - 1.0).abs() <= 1e-12) {
        return Err(domain(format!("{what} must be a unit vector, |v| = {norm}")));
    }
    Ok(())
}

fn order(n: usize) -> f64 {
    0.5 * n as f64 - 1.0
}

/// `ln a_n(z) = -nu ln 2 - ln Gamma(nu + 1) - ln Lambda_nu(z)`, `nu = n/2 - 1`.
pub fn log_norming_constant(n: usize, z: f64) -> Result<f64> {
    check_n(n)?;
    if !(z >= 0.0) {
        return Err(domain(format!("concentration z = {z} must be nonnegative")));
    }
    let nu = order(n);
    Ok(-nu * LN_2 - ln_gamma(nu + 1.0) - special_fn::log_lambda(nu, z)?)
}

/// `a_n(z) = (z/2)^{n/2-1} / (Gamma(n/2) I_{n/2-1}(z))`, equal to 1 at `z = 0`.
pub fn norming_constant(n: usize, z: f64) -> Result<f64> {
    if z == 0.0 {
        check_n(n)?;
        return Ok(1.0);
    }
    log_norming_constant(n, z).map(f64::exp)
}

/// Density `a_n(z) e^{z <omega, x>}` with respect to normalised surface measure.
pub fn density(spec: &VmfSpec, x: &[f64]) -> Result<f64> {
    spec.validate()?;
    if x.len() != spec.n {
        return Err(domain(format!("point has length {}, expected {}", x.len(), spec.n)));
    }
    check_unit(x, "point")?;
    if spec.z == 0.0 {
        return Ok(1.0);
    }
    let dot: f64 = spec.omega.iter().zip(x).map(|(a, b)| a * b).sum();
    Ok((log_norming_constant(spec.n, spec.z)? + spec.z * dot).exp())
}

/// `int_0^pi e^{z (cos th - 1)} sin^{n-2} th dth`, normalised so that `z = 0` gives 1.
fn latitude_integral(n: usize, z: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(n == 2 || n == 3) {
        return Err(domain(format!("latitude quadrature is provided for n in {{2, 3}}, got {n}")));
    }
    let k = (n - 2) as i32;
    let q = integrate_interval(|th| (z * (th.cos() - 1.0)).exp() * th.sin().powi(k), 0.0, PI, spec)?;
    let half = 0.5 * n as f64;
    let c = (ln_gamma(half) - ln_gamma(half - 0.5) - 0.5 * PI.ln()).exp();
    Ok(c * q.value)
}

/// Relative deviation of the latitude quadrature of `int e^{z <omega, x>} dsigma`
/// from `Gamma(n/2) (z/2)^{1-n/2} I_{n/2-1}(z) = 1/a_n(z)`, both scaled by `e^{-z}`.
pub fn sphere_integral_check(n: usize, z: f64, spec: &QuadratureSpec) -> Result<f64> {
    let q = latitude_integral(n, z, spec)?;
    let closed = (-log_norming_constant(n, z)? - z).exp();
    Ok((q / closed - 1.0).abs())
}

/// `|int density dsigma - 1|` by latitude quadrature, `n in {2, 3}`.
pub fn density_normalization(n: usize, z: f64, spec: &QuadratureSpec) -> Result<f64> {
    let q = latitude_integral(n, z, spec)?;
    Ok(((log_norming_constant(n, z)? + z).exp() * q - 1.0).abs())
}

/// `|central difference of ln(1/a_n) - y_{n/2-1}(z)|` with step `1e-5 max(1, z)`.
pub fn log_norming_identity_check(n: usize, z: f64) -> Result<f64> {
    check_n(n)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(domain(format!("z = {z} must be positive")));
    }
    let h = (1e-5 * z.max(1.0)).min(0.5 * z);
    let fd = (log_norming_constant(n, z - h)? - log_norming_constant(n, z + h)?) / (2.0 * h);
    Ok((fd - special_fn::bessel_quotient(order(n), z)?).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcentrationEstimate {
    pub z: f64,
    pub rbar: f64,
    pub iterations: usize,
    /// `|y_{n/2-1}(z) - rbar|`.
    pub residual: f64,
}

const MAX_ITERATIONS: usize = 500;

/// Solve `y_{n/2-1}(z) = rbar`. The root is bracketed by doubling from `[0, 1]`,
/// narrowed by bisection to width `1e-2`, then polished by Newton steps that fall
/// back to bisection whenever they leave the bracket.
pub fn estimate_concentration(n: usize, rbar: f64, tol: f64) -> Result<ConcentrationEstimate> {
    check_n(n)?;
    if !(rbar > 0.0 && rbar < 1.0) {
        return Err(domain(format!("mean resultant length {rbar} must lie in (0, 1)")));
    }
    if !(tol > 0.0) {
        return Err(domain("tolerance must be positive"));
    }
    let nu = order(n);
    let y = |z: f64| special_fn::bessel_quotient(nu, z);
    let mut iterations = 0;
    let (mut lo, mut hi) = (0.0, 1.0);
    while y(hi)? < rbar {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if !hi.is_finite() || iterations > MAX_ITERATIONS {
            return Err(domain(format!("no bracket found for rbar = {rbar}")));
        }
    }
    while hi - lo > 1e-2 && iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if y(mid)? < rbar {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let mut z = 0.5 * (lo + hi);
    let mut f = y(z)? - rbar;
    while f.abs() > tol {
        if iterations >= MAX_ITERATIONS {
            return Err(Error::Convergence { value: z, error: f.abs(), subdivisions: iterations });
        }
        iterations += 1;
        if f < 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let slope = special_fn::quotient_derivative(nu, z)?;
        if !(slope > 0.0) {
            return Err(domain(format!("quotient not increasing at z = {z} (slope {slope})")));
        }
        let newton = z - f / slope;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if next == z {
            break;
        }
        z = next;
        f = y(z)? - rbar;
    }
    Ok(ConcentrationEstimate { z, rbar, iterations, residual: f.abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn norming_examples() {
        assert_eq!(norming_constant(3, 0.0).unwrap(), 1.0);
        assert!((norming_constant(5, 1e-12).unwrap() - 1.0).abs() < 1e-12);
        let want3 = 1.0 / 1f64.sinh();
        assert!((norming_constant(3, 1.0).unwrap() - want3).abs() < 1e-14);
        assert!((norming_constant(3, 1.0).unwrap() - 0.850918).abs() < 1e-6);
        assert!((norming_constant(2, 2.0).unwrap() - 0.438676).abs() < 1e-6);
        assert!(norming_constant(1, 1.0).is_err());
    }

    #[test]
    fn density_examples() {
        let s = VmfSpec::new(vec![0.0, 0.0, 1.0], 1.0).unwrap();
        assert!((density(&s, &[0.0, 0.0, 1.0]).unwrap() - 2.313035).abs() < 1e-5);
        assert!((density(&s, &[1.0, 0.0, 0.0]).unwrap() - norming_constant(3, 1.0).unwrap()).abs() < 1e-15);
        let u = VmfSpec::new(vec![1.0, 0.0], 0.0).unwrap();
        assert_eq!(density(&u, &[0.6, 0.8]).unwrap(), 1.0);
        assert!(density(&s, &[0.0, 0.0, 2.0]).is_err());
        assert!(VmfSpec::new(vec![1.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn sphere_integral_examples() {
        assert!(sphere_integral_check(3, 1.0, &spec()).unwrap() <= 1e-9);
        assert!((latitude_integral(3, 1.0, &spec()).unwrap() * 1f64.exp() - 1.175201).abs() < 1e-6);
        assert!((latitude_integral(2, 0.0, &spec()).unwrap() - 1.0).abs() < 1e-12);
        assert!(sphere_integral_check(2, 3.0, &spec()).unwrap() <= 1e-9);
        assert!((latitude_integral(2, 3.0, &spec()).unwrap() * 3f64.exp() - 4.880793).abs() < 1e-6);
        assert!(sphere_integral_check(4, 1.0, &spec()).is_err());
    }

    #[test]
    fn density_is_normalised() {
        for n in [2, 3] {
            for &z in &[0.0, 0.5, 2.0, 10.0] {
                assert!(density_normalization(n, z, &spec()).unwrap() <= 1e-8);
            }
        }
    }

    #[test]
    fn log_norming_identity_examples() {
        let y = special_fn::bessel_quotient(0.5, 2.0).unwrap();
        assert!((y - (1.0 / 2f64.tanh() - 0.5)).abs() < 1e-14);
        assert!((y - 0.537315).abs() < 1e-6);
        assert!(log_norming_identity_check(3, 2.0).unwrap() <= 1e-5);
        assert!((special_fn::bessel_quotient(0.0, 1.0).unwrap() - 0.446390).abs() < 2e-6);
        for n in [2, 3, 5, 10] {
            for &z in &[0.1, 1.0, 5.0, 20.0] {
                assert!(log_norming_identity_check(n, z).unwrap() <= 1e-5);
            }
        }
        assert!(special_fn::bessel_quotient(0.5, 1e-8).unwrap() < 1e-8);
    }

    #[test]
    fn langevin_inversion() {
        let r = 1.0 / 2f64.tanh() - 0.5;
        let est = estimate_concentration(3, r, 1e-12).unwrap();
        assert!((est.z - 2.0).abs() <= 1e-6);
        assert!(est.residual <= 1e-12);
        let small = estimate_concentration(3, 1e-4, 1e-14).unwrap();
        assert!((small.z / 3e-4 - 1.0).abs() < 1e-3);
        assert!(estimate_concentration(3, 1.0, 1e-12).is_err());
        assert!(estimate_concentration(3, 0.0, 1e-12).is_err());
    }

    #[test]
    fn inversion_round_trip() {
        for n in [2, 3, 4, 7] {
            for &z in &[0.1, 1.0, 5.0, 20.0, 200.0] {
                let r = special_fn::bessel_quotient(order(n), z).unwrap();
                let est = estimate_concentration(n, r, 1e-13).unwrap();
                let tol = if z <= 20.0 { 1e-8 } else { 1e-8 * z };
                assert!((est.z - z).abs() <= tol, "n={n} z={z}: {}", est.z);
            }
        }
    }
}
