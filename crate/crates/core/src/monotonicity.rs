//! Struwe energy and Almgren-Poon frequency for solutions of
//! `u_t = u_zz + (a/z) u_z`, measured against the backward Gaussian-Bessel
//! kernel `p^(a)(z, zeta, T - t)`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::kernels::{self, KernelPoint};
use crate::par;
use crate::quadrature::{integrate_weighted, QuadResult, QuadratureSpec, Support};
use crate::report::{CaseRow, VerificationReport};
use crate::semigroup::{self, InitialDatum};
use crate::special_fn;

/// Closed-form or semigroup-generated solution families.
#[derive(Debug, Clone)]
pub enum Family {
    Constant,
    /// `zeta^2 + 2(a+1) t`.
    Homogeneous2,
    /// `zeta^4 + 4(a+3) t zeta^2 + 4(a+3)(a+1) t^2`.
    Homogeneous4,
    /// Linear combination of other fields with the same `a`.
    Mixture(Vec<(f64, CaloricField)>),
    /// `P_{t + t0} phi`, defined for `t > -t0`.
    SemigroupShifted { phi: InitialDatum, t0: f64 },
}

#[derive(Debug, Clone)]
pub struct CaloricField {
    a: f64,
    pub family: Family,
    spec: QuadratureSpec,
}

/// `u`, `u_zeta` and `u_t` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValue {
    pub u: f64,
    pub u_zeta: f64,
    pub u_t: f64,
}

impl CaloricField {
    pub fn constant(a: f64) -> Self {
        Self { a, family: Family::Constant, spec: QuadratureSpec::default() }
    }

    pub fn mixture(a: f64, parts: Vec<(f64, CaloricField)>) -> Result<Self> {
        if parts.iter().any(|(_, f)| f.a != a) {
            return Err(domain("mixture components must share the weight exponent"));
        }
        Ok(Self { a, family: Family::Mixture(parts), spec: QuadratureSpec::default() })
    }

    pub fn semigroup_shifted(a: f64, phi: InitialDatum, t0: f64, spec: QuadratureSpec) -> Result<Self> {
        if !(t0 > 0.0) {
            return Err(domain("shift t0 must be positive"));
        }
        Ok(Self { a, family: Family::SemigroupShifted { phi, t0 }, spec })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Parabolic homogeneity degree, if the field is homogeneous.
    pub fn degree(&self) -> Option<u32> {
        match self.family {
            Family::Constant => Some(0),
            Family::Homogeneous2 => Some(2),
            Family::Homogeneous4 => Some(4),
            _ => None,
        }
    }

    pub fn eval(&self, zeta: f64, t: f64) -> Result<FieldValue> {
        let a = self.a;
        Ok(match &self.family {
            Family::Constant => FieldValue { u: 1.0, u_zeta: 0.0, u_t: 0.0 },
            Family::Homogeneous2 => FieldValue { u: zeta * zeta + 2.0 * (a + 1.0) * t, u_zeta: 2.0 * zeta, u_t: 2.0 * (a + 1.0) },
            Family::Homogeneous4 => {
                let z2 = zeta * zeta;
                let c = 4.0 * (a + 3.0);
                FieldValue {
                    u: z2 * z2 + c * t * z2 + c * (a + 1.0) * t * t,
                    u_zeta: 4.0 * z2 * zeta + 2.0 * c * t * zeta,
                    u_t: c * z2 + 2.0 * c * (a + 1.0) * t,
                }
            }
            Family::Mixture(parts) => {
                let mut out = FieldValue { u: 0.0, u_zeta: 0.0, u_t: 0.0 };
                for (w, f) in parts {
                    let v = f.eval(zeta, t)?;
                    out.u += w * v.u;
                    out.u_zeta += w * v.u_zeta;
                    out.u_t += w * v.u_t;
                }
                out
            }
            Family::SemigroupShifted { phi, t0 } => {
                if !(t + t0 > 0.0) {
                    return Err(domain(format!("shifted field undefined at t = {t}")));
                }
                let hv = semigroup::apply_with_derivatives(a, phi, zeta, t + t0, &self.spec)?;
                FieldValue { u: hv.u, u_zeta: hv.du_dz, u_t: hv.du_dt }
            }
        })
    }

    /// `u_zeta zeta` exactly for polynomial families, by central differences otherwise.
    pub fn u_zeta_zeta(&self, zeta: f64, t: f64) -> Result<f64> {
        let a = self.a;
        Ok(match &self.family {
            Family::Constant => 0.0,
            Family::Homogeneous2 => 2.0,
            Family::Homogeneous4 => 12.0 * zeta * zeta + 8.0 * (a + 3.0) * t,
            Family::Mixture(parts) => {
                let mut s = 0.0;
                for (w, f) in parts {
                    s += w * f.u_zeta_zeta(zeta, t)?;
                }
                s
            }
            Family::SemigroupShifted { .. } => {
                let h = 1e-4 * zeta.max(1.0);
                (self.eval(zeta + h, t)?.u_zeta - self.eval((zeta - h).abs(), t)?.u_zeta * if zeta < h { -1.0 } else { 1.0 })
                    / (2.0 * h)
            }
        })
    }

    /// `|u_t - (u_zz + (a/zeta) u_z)|` at an interior point.
    pub fn pde_residual(&self, zeta: f64, t: f64) -> Result<f64> {
        let v = self.eval(zeta, t)?;
        Ok((v.u_t - self.u_zeta_zeta(zeta, t)? - self.a / zeta * v.u_zeta).abs())
    }

    /// `|zeta^a u_zeta|`, which tends to zero at the boundary.
    pub fn neumann_flux(&self, zeta: f64, t: f64) -> Result<f64> {
        Ok((zeta.powf(self.a) * self.eval(zeta, t)?.u_zeta).abs())
    }

    /// `zeta u_zeta + 2 t u_t - kappa u`, zero for fields homogeneous of degree `kappa`.
    pub fn homogeneity_residual(&self, kappa: f64, zeta: f64, t: f64) -> Result<f64> {
        let v = self.eval(zeta, t)?;
        Ok(zeta * v.u_zeta + 2.0 * t * v.u_t - kappa * v.u)
    }
}

/// Parabolically homogeneous polynomial solution of degree `kappa` in {0, 2, 4}.
pub fn homogeneous_solution(a: f64, kappa: u32) -> Result<CaloricField> {
    special_fn::BesselParam::from_a(a)?;
    let family = match kappa {
        0 => Family::Constant,
        2 => Family::Homogeneous2,
        4 => Family::Homogeneous4,
        k => return Err(Error::UnsupportedKappa(k)),
    };
    Ok(CaloricField { a, family, spec: QuadratureSpec::default() })
}

fn check_times(big_t: f64, t: f64) -> Result<f64> {
    let tau = big_t - t;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(domain(format!("need t < T, got t = {t}, T = {big_t}")));
    }
    Ok(tau)
}

/// `int g(zeta, kernel point) p(z, zeta, tau) zeta^a`; errors inside the integrand surface as NaN.
fn against_kernel(
    a: f64,
    z: f64,
    tau: f64,
    spec: &QuadratureSpec,
    g: impl Fn(f64, &KernelPoint) -> Result<f64>,
) -> Result<QuadResult> {
    KernelPoint::new(z, 0.0, tau)?;
    integrate_weighted(
        |zeta| {
            let pt = KernelPoint { z, zeta, t: tau };
            match (kernels::heat_kernel_log(a, &pt), g(zeta, &pt)) {
                (Ok(l), Ok(v)) => {
                    if v == 0.0 {
                        0.0
                    } else {
                        v * l.exp()
                    }
                }
                _ => f64::NAN,
            }
        },
        a,
        &Support::Gaussian { center: z, t: tau },
        spec,
    )
}

/// Energy value with the propagated quadrature error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn energy_estimate(u: &CaloricField, z: f64, big_t: f64, t: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    let tau = check_times(big_t, t)?;
    let q = against_kernel(u.a, z, tau, spec, |zeta, _| Ok(u.eval(zeta, t)?.u_zeta.powi(2)))?;
    Ok(Estimate { value: 0.5 * tau * q.value, error: 0.5 * tau * q.error_estimate })
}

/// `E(t) = (T - t)/2 int u_zeta^2 p(z, zeta, T - t) zeta^a`.
pub fn energy(u: &CaloricField, z: f64, big_t: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    energy_estimate(u, z, big_t, t, spec).map(|e| e.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyDerivative {
    pub total: f64,
    /// `-(T - t) int [u_t + u_zeta p_zeta/p]^2 p zeta^a`.
    pub dissipation: f64,
    /// `-(T - t) int u_zeta^2 y'(w) z^2/(4 (T-t)^2) p zeta^a`; zero at `z = 0`.
    pub gterm: f64,
}

pub fn energy_derivative(u: &CaloricField, z: f64, big_t: f64, t: f64, spec: &QuadratureSpec) -> Result<EnergyDerivative> {
    let tau = check_times(big_t, t)?;
    let a = u.a;
    let diss = against_kernel(a, z, tau, spec, |zeta, pt| {
        let v = u.eval(zeta, t)?;
        let r = v.u_t + v.u_zeta * kernels::log_grad_zeta(a, pt)?;
        Ok(r * r)
    })?;
    let dissipation = -tau * diss.value;
    let gterm = if z == 0.0 {
        0.0
    } else {
        let nu = 0.5 * (a - 1.0);
        let g = against_kernel(a, z, tau, spec, |zeta, _| {
            let uz = u.eval(zeta, t)?.u_zeta;
            Ok(uz * uz * special_fn::quotient_derivative(nu, z * zeta / (2.0 * tau))?)
        })?;
        -tau * z * z / (4.0 * tau * tau) * g.value
    };
    Ok(EnergyDerivative { total: dissipation + gterm, dissipation, gterm })
}

/// Central difference of [`energy`] in `t` with step `1e-4 (T - t)`.
pub fn energy_derivative_fd(u: &CaloricField, z: f64, big_t: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let tau = check_times(big_t, t)?;
    let h = 1e-4 * tau;
    Ok((energy(u, z, big_t, t + h, spec)? - energy(u, z, big_t, t - h, spec)?) / (2.0 * h))
}

/// `L(t) = 1/2 int u^2 p(z, zeta, T - t) zeta^a`.
pub fn height_functional(u: &CaloricField, z: f64, big_t: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let tau = check_times(big_t, t)?;
    Ok(0.5 * against_kernel(u.a, z, tau, spec, |zeta, _| Ok(u.eval(zeta, t)?.u.powi(2)))?.value)
}

/// `int u [u_t + u_zeta p_zeta/p] p zeta^a`.
fn mixed_integral(u: &CaloricField, z: f64, tau: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let a = u.a;
    Ok(against_kernel(a, z, tau, spec, |zeta, pt| {
        let v = u.eval(zeta, t)?;
        Ok(v.u * (v.u_t + v.u_zeta * kernels::log_grad_zeta(a, pt)?))
    })?
    .value)
}

/// `H(r) = 1/2 int u(zeta, -r^2)^2 p(z, zeta, r^2) zeta^a`.
pub fn height(u: &CaloricField, z: f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_radius(r)?;
    height_functional(u, z, 0.0, -r * r, spec)
}

/// `I(r) = r^2/2 int u_zeta(zeta, -r^2)^2 p(z, zeta, r^2) zeta^a`.
pub fn dirichlet(u: &CaloricField, z: f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_radius(r)?;
    energy(u, z, 0.0, -r * r, spec)
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("radius r = {r} must be positive")))
    }
}

/// `N(r) = I(r) / H(r)`.
pub fn frequency(u: &CaloricField, z: f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    let h = height(u, z, r, spec)?;
    if !(h > 1e-300) {
        return Err(Error::UndefinedFrequency(h));
    }
    Ok(dirichlet(u, z, r, spec)? / h)
}

/// `(|dL/dt - M|, |E + (T-t)/2 M|)` with `M = int u [u_t + u_zeta p_zeta/p] p zeta^a`
/// and `dL/dt` by central differences (step `1e-4 (T - t)`).
pub fn lderivative_check(u: &CaloricField, z: f64, big_t: f64, t: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let tau = check_times(big_t, t)?;
    let m = mixed_integral(u, z, tau, t, spec)?;
    let h = 1e-4 * tau;
    let dl = (height_functional(u, z, big_t, t + h, spec)? - height_functional(u, z, big_t, t - h, spec)?) / (2.0 * h);
    let e = energy(u, z, big_t, t, spec)?;
    Ok(((dl - m).abs(), (e + 0.5 * tau * m).abs()))
}

/// `p_zz/p - (p_z/p)^2 + 1/(2 tau)` in the second kernel argument, as
/// `(central difference of d_zeta log p, y'(w) z^2 / 4 tau^2)`.
pub fn kernel_bracket(a: f64, z: f64, zeta: f64, tau: f64) -> Result<(f64, f64)> {
    let pt = KernelPoint::new(z, zeta, tau)?;
    let h = 1e-4 * zeta.max(1.0);
    let gp = kernels::log_grad_zeta(a, &KernelPoint { zeta: zeta + h, ..pt })?;
    let gm = kernels::log_grad_zeta(a, &KernelPoint { zeta: (zeta - h).max(0.0), ..pt })?;
    let width = zeta + h - (zeta - h).max(0.0);
    let fd = (gp - gm) / width + 1.0 / (2.0 * tau);
    let closed = if z == 0.0 {
        0.0
    } else {
        special_fn::quotient_derivative(0.5 * (a - 1.0), z * zeta / (2.0 * tau))? * z * z / (4.0 * tau * tau)
    };
    Ok((fd, closed))
}

/// Energy along a time grid with monotonicity verdicts on successive pairs.
///
/// Decrease must be strict (margin above three times the propagated
/// quadrature error) when `a >= 0` and `z > 0`, non-strict when `z = 0`;
/// rows with `a < 0`, `z > 0` are informational.
pub fn struwe_scan(u: &CaloricField, z: f64, big_t: f64, t_grid: &[f64], spec: &QuadratureSpec) -> Result<VerificationReport> {
    let est: Vec<Result<Estimate>> = par::map(t_grid, |&t| energy_estimate(u, z, big_t, t, spec));
    let est: Vec<Estimate> = est.into_iter().collect::<Result<_>>()?;
    let a = u.a;
    let strict = z > 0.0 && a >= 0.0 && !matches!(u.family, Family::Constant);
    let mut rows = Vec::new();
    for i in 1..est.len() {
        let (e0, e1) = (est[i - 1], est[i]);
        let tol = 3.0 * (e0.error + e1.error);
        let diff = e1.value - e0.value;
        let row = CaseRow::new("struwe", "energy-monotonicity").a(a).z(z).t(t_grid[i]).values(e1.value, e0.value);
        let row = if strict { row.margin(diff, -diff - tol, true) } else { row.margin(diff, tol - diff, false) };
        rows.push(if z > 0.0 && a < 0.0 { row.informational() } else { row });
    }
    Ok(VerificationReport::new("struwe", rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyCurve {
    pub r_grid: Vec<f64>,
    pub h: Vec<f64>,
    pub i: Vec<f64>,
    pub n: Vec<f64>,
}

pub fn frequency_curve(u: &CaloricField, z: f64, r_grid: &[f64], spec: &QuadratureSpec) -> Result<FrequencyCurve> {
    if r_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("radius grid must be strictly increasing"));
    }
    let vals: Vec<Result<(f64, f64)>> = par::map(r_grid, |&r| Ok((height(u, z, r, spec)?, dirichlet(u, z, r, spec)?)));
    let vals: Vec<(f64, f64)> = vals.into_iter().collect::<Result<_>>()?;
    if let Some(&(h, _)) = vals.iter().find(|(h, _)| !(*h > 1e-300)) {
        return Err(Error::UndefinedFrequency(h));
    }
    Ok(FrequencyCurve {
        r_grid: r_grid.to_vec(),
        h: vals.iter().map(|v| v.0).collect(),
        i: vals.iter().map(|v| v.1).collect(),
        n: vals.iter().map(|v| v.1 / v.0).collect(),
    })
}

/// Frequency along a radius grid. Homogeneous fields at `z = 0` must give
/// `N = kappa/2` to `1e-6`; otherwise `N` must increase, strictly when
/// `a >= 0` or `z = 0`.
pub fn poon_scan(u: &CaloricField, z: f64, r_grid: &[f64], spec: &QuadratureSpec) -> Result<(FrequencyCurve, VerificationReport)> {
    let curve = frequency_curve(u, z, r_grid, spec)?;
    let a = u.a;
    let mut rows = Vec::new();
    match u.degree() {
        Some(k) if z == 0.0 => {
            let want = 0.5 * k as f64;
            for (r, n) in curve.r_grid.iter().zip(&curve.n) {
                rows.push(CaseRow::new("poon", "homogeneous-frequency").a(a).z(z).t(*r).values(*n, want).within((n - want).abs(), 1e-6));
            }
        }
        _ => {
            let strict = a >= 0.0 || z == 0.0;
            let tol = 1e-8;
            for i in 1..curve.n.len() {
                let d = curve.n[i] - curve.n[i - 1];
                let row = CaseRow::new("poon", "frequency-monotonicity").a(a).z(z).t(curve.r_grid[i]).values(curve.n[i], curve.n[i - 1]);
                let row = if strict { row.margin(d, d - tol * curve.n[i].abs(), true) } else { row.margin(d, d + tol * curve.n[i].abs(), false) };
                rows.push(if z > 0.0 && a < 0.0 { row.informational() } else { row });
            }
        }
    }
    Ok((curve, VerificationReport::new("poon", rows)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::tgamma;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    /// `E[zeta^{2m}]` under `p(0, zeta, tau) zeta^a`.
    fn moment(a: f64, m: i32, tau: f64) -> f64 {
        let d = a + 1.0;
        (4.0 * tau).powi(m) * tgamma(d / 2.0 + m as f64) / tgamma(d / 2.0)
    }

    #[test]
    fn polynomial_fields_solve_the_equation() {
        for &a in &[-0.9, 0.0, 1.0, 2.5] {
            for k in [0, 2, 4] {
                let u = homogeneous_solution(a, k).unwrap();
                for &(zeta, t) in &[(0.3, 0.2), (2.0, 1.5), (5.0, -0.7)] {
                    assert!(u.pde_residual(zeta, t).unwrap() <= 1e-8 * (1.0 + u.eval(zeta, t).unwrap().u.abs()));
                    assert!(u.homogeneity_residual(k as f64, zeta, t).unwrap().abs() < 1e-10);
                }
            }
        }
        assert!(matches!(homogeneous_solution(0.0, 3), Err(Error::UnsupportedKappa(3))));
    }

    #[test]
    fn field_examples() {
        let u = homogeneous_solution(1.0, 2).unwrap();
        let v = u.eval(1.3, 0.4).unwrap();
        assert_eq!(v.u_t, 4.0);
        assert_eq!(u.u_zeta_zeta(1.3, 0.4).unwrap() + v.u_zeta / 1.3, 4.0);
        let u = homogeneous_solution(0.0, 4).unwrap();
        let v = u.eval(2.0, 0.5).unwrap();
        assert_eq!(v.u_t, 12.0 * 4.0 + 24.0 * 0.5);
    }

    #[test]
    fn neumann_flux_vanishes() {
        for &a in &[0.0, 0.5, 2.0] {
            let u = homogeneous_solution(a, 2).unwrap();
            assert!(u.neumann_flux(1e-6, 1.0).unwrap() <= 1e-4);
        }
        let u = homogeneous_solution(-0.5, 4).unwrap();
        assert!(u.neumann_flux(1e-8, 1.0).unwrap() < u.neumann_flux(1e-6, 1.0).unwrap());
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy(&CaloricField::constant(0.3), 1.0, 1.0, 0.2, &spec()).unwrap(), 0.0);
        let u = homogeneous_solution(0.0, 2).unwrap();
        assert!((energy(&u, 0.0, 1.0, 0.0, &spec()).unwrap() - 4.0).abs() < 1e-9);
        for &a in &[-0.5, 0.5, 2.0] {
            let u = homogeneous_solution(a, 2).unwrap();
            let tau: f64 = 0.7;
            let want = 2.0 * tau * moment(a, 1, tau);
            assert!((energy(&u, 0.0, 1.0, 0.3, &spec()).unwrap() / want - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn energy_scaling() {
        let u = homogeneous_solution(0.5, 2).unwrap();
        let (z, big_t, t, l) = (0.8, 1.0, 0.4, 1.7);
        let e1 = energy(&u, z, big_t, t, &spec()).unwrap();
        let e2 = energy(&u, l * z, l * l * big_t, l * l * t, &spec()).unwrap();
        assert!((e2 / (l.powi(4) * e1) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn derivative_examples() {
        let d = energy_derivative(&CaloricField::constant(0.0), 1.0, 1.0, 0.5, &spec()).unwrap();
        assert_eq!((d.total, d.dissipation, d.gterm), (0.0, 0.0, 0.0));

        let a = 0.5;
        let u = homogeneous_solution(a, 2).unwrap();
        let d = energy_derivative(&u, 0.0, 1.0, 0.3, &spec()).unwrap();
        assert_eq!(d.gterm, 0.0);
        let want = -8.0 * (a + 1.0) * 0.7;
        assert!((d.dissipation - want).abs() < 1e-8);

        let u = homogeneous_solution(1.0, 2).unwrap();
        for &t in &[0.1, 0.5, 0.9] {
            let d = energy_derivative(&u, 1.0, 1.0, t, &spec()).unwrap();
            assert!(d.gterm < 0.0);
            let fd = energy_derivative_fd(&u, 1.0, 1.0, t, &spec()).unwrap();
            assert!((d.total - fd).abs() <= 1e-4 * fd.abs());
        }
    }

    #[test]
    fn height_and_dirichlet_examples() {
        let u = homogeneous_solution(0.0, 2).unwrap();
        assert!((height(&u, 0.0, 1.0, &spec()).unwrap() - 4.0).abs() < 1e-9);
        assert!((dirichlet(&u, 0.0, 1.0, &spec()).unwrap() - 4.0).abs() < 1e-9);
        let u = homogeneous_solution(1.0, 2).unwrap();
        assert!((height(&u, 0.0, 2.0, &spec()).unwrap() / 128.0 - 1.0).abs() < 1e-10);
        assert!((dirichlet(&u, 0.0, 2.0, &spec()).unwrap() / 128.0 - 1.0).abs() < 1e-10);
        let one = CaloricField::constant(0.4);
        assert!((height(&one, 0.0, 1.3, &spec()).unwrap() - 0.5).abs() < 1e-10);
        assert_eq!(dirichlet(&one, 0.0, 1.3, &spec()).unwrap(), 0.0);
    }

    #[test]
    fn frequency_examples() {
        assert_eq!(frequency(&CaloricField::constant(0.0), 0.0, 1.0, &spec()).unwrap(), 0.0);
        for &a in &[-0.9, 0.0, 2.0] {
            let u = homogeneous_solution(a, 2).unwrap();
            assert!((frequency(&u, 0.0, 0.7, &spec()).unwrap() - 1.0).abs() < 1e-8);
        }
        let u = homogeneous_solution(0.0, 4).unwrap();
        for &r in &[0.5, 1.0, 2.0] {
            assert!((frequency(&u, 0.0, r, &spec()).unwrap() - 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn mixture_frequency_moves_from_one_toward_two() {
        let a = 0.0;
        let u = CaloricField::mixture(a, vec![(1.0, homogeneous_solution(a, 2).unwrap()), (0.1, homogeneous_solution(a, 4).unwrap())]).unwrap();
        let grid: Vec<f64> = (1..=8).map(|i| 0.25 * i as f64).collect();
        let (curve, report) = poon_scan(&u, 0.0, &grid, &spec()).unwrap();
        assert!(report.overall_pass);
        assert!(curve.n[0] > 1.0 && curve.n[7] < 2.0);
        assert!(curve.n.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn lderivative_examples() {
        let (r1, r2) = lderivative_check(&CaloricField::constant(0.0), 1.0, 1.0, 0.5, &spec()).unwrap();
        assert!(r1 < 1e-9 && r2 == 0.0);
        let u = homogeneous_solution(0.0, 2).unwrap();
        let (r1, r2) = lderivative_check(&u, 0.0, 1.0, 0.5, &spec()).unwrap();
        assert!(r1 <= 1e-6 && r2 <= 1e-6);
        let u = homogeneous_solution(1.0, 2).unwrap();
        let (r1, r2) = lderivative_check(&u, 1.0, 1.0, 0.5, &spec()).unwrap();
        assert!(r1 <= 1e-5 && r2 <= 1e-6);
    }

    #[test]
    fn bracket_routes_agree() {
        for &a in &[0.0, 0.5, 2.0] {
            for &(z, zeta, tau) in &[(1.0, 1.0, 0.5), (0.5, 3.0, 1.0), (4.0, 2.0, 0.3)] {
                let (fd, closed) = kernel_bracket(a, z, zeta, tau).unwrap();
                assert!(closed > 0.0);
                assert!((fd - closed).abs() <= 1e-6 * (closed + 1.0 / (2.0 * tau)), "a={a} z={z} zeta={zeta}: {fd} vs {closed}");
            }
        }
        let (fd, closed) = kernel_bracket(0.3, 0.0, 1.0, 0.5).unwrap();
        assert_eq!(closed, 0.0);
        assert!(fd.abs() <= 1e-10);
    }

    #[test]
    fn struwe_scan_examples() {
        let grid: Vec<f64> = (0..20).map(|i| 0.04 * i as f64 + 0.02).collect();
        let u = homogeneous_solution(0.5, 2).unwrap();
        assert!(struwe_scan(&u, 1.0, 1.0, &grid, &spec()).unwrap().overall_pass);
        assert!(struwe_scan(&CaloricField::constant(0.5), 1.0, 1.0, &grid, &spec()).unwrap().overall_pass);
        let u = homogeneous_solution(-0.5, 2).unwrap();
        assert!(struwe_scan(&u, 0.0, 1.0, &grid, &spec()).unwrap().overall_pass);
    }

    #[test]
    fn poon_scan_off_boundary_increases() {
        let u = homogeneous_solution(1.0, 2).unwrap();
        let grid: Vec<f64> = (1..=10).map(|i| 0.2 * i as f64).collect();
        let (_, rep) = poon_scan(&u, 1.0, &grid, &spec()).unwrap();
        assert!(rep.overall_pass, "{:?}", rep.worst());
    }

    #[test]
    fn shifted_field() {
        let u = CaloricField::semigroup_shifted(0.5, InitialDatum::gaussian(1.0), 5.0, spec()).unwrap();
        assert!(u.pde_residual(1.0, -1.0).unwrap() < 1e-5);
        assert!(frequency(&u, 0.0, 1.0, &spec()).unwrap() >= 0.0);
    }
}
