//! Worked values checked through the public API, each against an independent
//! closed form.

use std::f64::consts::PI;

use bessel_heat::cd_gamma::{self, Probe};
use bessel_heat::kernels::{self, ExtensionPoint, KernelPoint};
use bessel_heat::kimura;
use bessel_heat::monotonicity::{self, CaloricField};
use bessel_heat::quadrature::{self, QuadratureSpec, Support};
use bessel_heat::semigroup::{self, ExtensionDatum, InitialDatum, SpatialFactor};
use bessel_heat::special_fn as sf;
use bessel_heat::vmf;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn close(got: f64, want: f64, tol: f64) {
    assert!((got - want).abs() <= tol, "got {got}, want {want} +- {tol}");
}

#[test]
fn bessel_values() {
    close(sf::bessel_i(0.0, 1.0).unwrap().value, 1.266066, 1e-6);
    close(sf::bessel_i(0.5, 1.0).unwrap().value, (2.0 / PI).sqrt() * 1f64.sinh(), 1e-12);
    assert_eq!(sf::bessel_i(2.0, 0.0).unwrap().value, 0.0);
    close(sf::bessel_i_scaled(-0.5, 10.0).unwrap(), (-10f64).exp() * (2.0 / (10.0 * PI)).sqrt() * 10f64.cosh(), 1e-12);
    let big = sf::bessel_i_scaled(0.0, 700.0).unwrap();
    assert!(((big * (2.0 * PI * 700.0).sqrt()) - 1.0).abs() < 1e-3);
    close(sf::log_lambda(0.0, 0.0).unwrap(), 0.0, 1e-15);
    close(sf::log_lambda(0.5, 1.0).unwrap(), 0.937674f64.ln(), 1e-5);
    // z^{1/2} I_{-1/2}(z) = sqrt(2/pi) cosh z
    close(sf::log_lambda(-0.5, 2.0).unwrap(), ((2.0 / PI).sqrt() * 2f64.cosh()).ln(), 1e-12);
}

#[test]
fn quotient_values() {
    close(sf::bessel_quotient(-0.5, 1.0).unwrap(), 1f64.tanh(), 1e-10);
    close(sf::bessel_quotient(0.0, 0.01).unwrap(), 0.005, 1e-5);
    close(sf::bessel_quotient(0.5, 2.0).unwrap(), 1.0 / 2f64.tanh() - 0.5, 1e-8);
    close(sf::quotient_derivative(0.0, 0.0).unwrap(), 0.5, 1e-15);
    close(sf::quotient_derivative(-0.5, 1.0).unwrap(), 1.0 / 1f64.cosh().powi(2), 1e-8);
    for z in [0.5, 1.0, 2.0, 5.0] {
        assert!(sf::quotient_derivative(0.5, z).unwrap() > 0.0);
    }
    close(sf::hankel_coefficient(0.3, 0), 1.0, 0.0);
    close(sf::hankel_coefficient(1.3, 1) - sf::hankel_coefficient(0.3, 1), 2.0 * 0.3 + 1.0, 1e-14);
    close(sf::hankel_coefficient(0.5, 1), 0.0, 0.0);
    close(sf::asymptotic_tail(0.5, 1000.0).unwrap(), 1.0, 2e-3);
    close(sf::asymptotic_tail(0.0, 1000.0).unwrap(), 0.5, 2e-3);
    assert!(sf::asymptotic_tail(-0.5, 40.0).unwrap() < 1e-30);
    assert!(sf::connection_check(-0.5, 1.0, &spec()).unwrap() <= 1e-8);
    assert!(sf::connection_check(1.0, 5.0, &spec()).unwrap() <= 1e-8);
}

#[test]
fn quadrature_values() {
    let q = quadrature::integrate_weighted(|x| (-x * x).exp(), 0.0, &Support::Gaussian { center: 0.0, t: 0.25 }, &spec()).unwrap();
    close(q.value, PI.sqrt() / 2.0, 1e-12);
    let q = quadrature::integrate_weighted(
        |x| x * sf::bessel_i(0.0, x).unwrap().value * (-x * x).exp(),
        0.0,
        &Support::Gaussian { center: 0.0, t: 1.0 },
        &spec(),
    )
    .unwrap();
    close(q.value, 0.25f64.exp() / 2.0, 1e-10);
    let q = quadrature::integrate_weighted(
        |zeta| kernels::heat_kernel(0.5, &KernelPoint { z: 1.0, zeta, t: 1.0 }).unwrap(),
        0.5,
        &Support::Gaussian { center: 1.0, t: 1.0 },
        &spec(),
    )
    .unwrap();
    close(q.value, 1.0, 1e-10);
    for (nu, alpha) in [(0.0, 1.0), (-0.5, 0.5), (1.0, 2.0)] {
        assert!(quadrature::weber_check(nu, alpha, &spec()).unwrap() <= 1e-9);
    }
    assert!(quadrature::product_integral_check(-0.5, 1.0, 1.0, 1.0, &spec()).unwrap() <= 1e-10);
}

#[test]
fn kernel_values() {
    let p = kernels::heat_kernel(0.0, &KernelPoint::new(1.0, 1.0, 1.0).unwrap()).unwrap();
    close(p, (1.0 + (-1f64).exp()) / (4.0 * PI).sqrt(), 1e-9);
    let p = kernels::heat_kernel(0.5, &KernelPoint::new(0.0, 2.0, 1.0).unwrap()).unwrap();
    close(p, (-1f64).exp() / (2f64.powf(0.5) * libm::tgamma(0.75)), 1e-12);
    close(kernels::heat_kernel_reflection(0.0, 0.0, 1.0).unwrap(), 1.0 / PI.sqrt(), 1e-12);
    let r = kernels::heat_kernel_reflection(3.0, 1.0, 0.5).unwrap();
    close(r / kernels::heat_kernel(0.0, &KernelPoint::new(3.0, 1.0, 0.5).unwrap()).unwrap(), 1.0, 1e-12);
    close(kernels::log_grad_z(1.0, &KernelPoint::new(0.0, 5.0, 2.0).unwrap()).unwrap(), 0.0, 0.0);
    close(kernels::log_grad_z(0.0, &KernelPoint::new(1.0, 1.0, 1.0).unwrap()).unwrap(), 0.5f64.tanh() / 2.0 - 0.5, 1e-9);
    close(kernels::log_deriv_t(1.0, &KernelPoint::new(0.0, 2.0, 1.0).unwrap()).unwrap(), 0.0, 1e-15);
    close(kernels::liyau_gap(1.0, &KernelPoint::new(0.0, 2.0, 1.0).unwrap()).unwrap().via_identity, 0.0, 1e-15);
    let g = kernels::liyau_gap(0.0, &KernelPoint::new(1.0, 1.0, 1.0).unwrap()).unwrap();
    close(g.via_identity, 0.5 + 0.25 * (0.5f64.tanh().powi(2) - 1.0), 1e-8);
    let e = ExtensionPoint { x: vec![0.3], z: 0.7, y: vec![0.3], zeta: 0.7, t: 0.4 };
    let want = (4.0 * PI * 0.4f64).powf(-0.5) * kernels::heat_kernel(0.5, &KernelPoint::new(0.7, 0.7, 0.4).unwrap()).unwrap();
    close(kernels::extension_kernel(0.5, &e).unwrap() / want, 1.0, 1e-12);
}

#[test]
fn semigroup_values() {
    close(semigroup::apply(0.5, &InitialDatum::constant(1.0), 2.0, 1.0, &spec()).unwrap(), 1.0, 1e-9);
    for t in [0.1, 1.0, 3.0] {
        // e^{-zeta^2} evolves to (1+4t)^{-1/2} at the origin when a = 0
        close(semigroup::apply(0.0, &InitialDatum::gaussian(1.0), 0.0, t, &spec()).unwrap(), (1.0 + 4.0 * t).powf(-0.5), 1e-10);
    }
    let ind = InitialDatum::indicator(1.0, 2.0);
    let near = semigroup::apply(0.7, &ind, 1.5, 1e-4, &spec()).unwrap();
    let nearer = semigroup::apply(0.7, &ind, 1.5, 1e-6, &spec()).unwrap();
    assert!((nearer - 1.0).abs() <= (near - 1.0).abs() + 1e-12 && (nearer - 1.0).abs() < 1e-6);
    assert!(semigroup::semigroup_residual(0.3, &InitialDatum::constant(1.0), 1.0, 0.5, 0.5, &spec()).unwrap() <= 1e-9);
    assert!(semigroup::semigroup_residual(0.0, &InitialDatum::gaussian(1.0), 1.0, 0.3, 0.4, &spec()).unwrap() <= 1e-8);
    assert!(semigroup::semigroup_residual(1.0, &InitialDatum::bump(0.5, 2.0), 1.0, 0.5, 0.5, &spec()).unwrap() <= 1e-6);

    let r = semigroup::liyau_functional(0.0, &InitialDatum::gaussian(1.0), 0.0, 1.0, &spec()).unwrap();
    close(r.lhs, 0.4, 1e-8);
    close(r.bound, 0.5, 0.0);
    let r = semigroup::liyau_functional(2.0, &InitialDatum::bump(0.5, 2.0), 1.0, 0.5, &spec()).unwrap();
    assert!(r.lhs < r.bound && r.bound == 3.0);
    let fd = semigroup::liyau_lhs_fd(2.0, &InitialDatum::bump(0.5, 2.0), 1.0, 0.5, &spec()).unwrap();
    assert!((fd - r.lhs).abs() < 1e-5 * (1.0 + r.lhs.abs()));

    let h = semigroup::harnack_ratio(1.0, &InitialDatum::constant(1.0), 3.0, 1.0, 0.0, 2.0, &spec()).unwrap();
    close(h.ratio, 1.0 / (2.0 * 2.25f64.exp()), 1e-12);
    let h = semigroup::harnack_ratio(0.0, &InitialDatum::gaussian(1.0), 0.0, 1.0, 0.0, 2.0, &spec()).unwrap();
    close(h.ratio, 3.0 / 5f64.sqrt() / 2f64.sqrt(), 1e-9);
    let h = semigroup::harnack_ratio(0.5, &InitialDatum::bump(0.5, 2.0), 0.01, 0.5, 0.0, 1.0, &spec()).unwrap();
    assert!(h.ratio < 1.0 && h.ratio > 0.0);
}

#[test]
fn extension_values() {
    close(semigroup::extension_apply(0.4, &ExtensionDatum::constant(2), &[0.1, -0.2], 0.5, 0.7, &spec()).unwrap(), 1.0, 1e-8);
    let g = ExtensionDatum::product(1, SpatialFactor::Gaussian { c: 1.0, center: vec![0.0] }, InitialDatum::constant(1.0));
    let t = 0.3;
    close(semigroup::extension_apply(0.2, &g, &[0.5], 1.0, t, &spec()).unwrap(), (1.0 + 4.0 * t).powf(-0.5) * (-0.25 / (1.0 + 4.0 * t)).exp(), 1e-10);
    let h = semigroup::extension_harnack_ratio(1.0, &ExtensionDatum::constant(1), &[0.0], 1.0, 1.0, &[1.0], 0.0, 4.0, &spec()).unwrap();
    close(h.ratio, 1.0 / (8.0 * (2.0f64 / 12.0).exp()), 1e-12);
    let gg = ExtensionDatum::product(1, SpatialFactor::Gaussian { c: 1.0, center: vec![0.0] }, InitialDatum::gaussian(1.0));
    let r = semigroup::extension_liyau(0.0, &gg, &[0.0], 0.0, 1.0, &spec()).unwrap();
    close(r.lhs, 0.8, 1e-8);
    close(r.bound, 1.0, 0.0);
    let h = semigroup::extension_harnack_ratio(0.5, &gg, &[0.2], 1e-8, 0.5, &[0.2], 1e-8, 1.0, &spec()).unwrap();
    assert!(h.ratio.is_finite() && h.ratio < 1.0);
}

#[test]
fn monotonicity_values() {
    let one = CaloricField::constant(0.5);
    close(monotonicity::energy(&one, 0.3, 1.0, 0.2, &spec()).unwrap(), 0.0, 0.0);
    close(monotonicity::height(&one, 0.0, 1.0, &spec()).unwrap(), 0.5, 1e-10);
    let d = monotonicity::energy_derivative(&monotonicity::homogeneous_solution(0.5, 2).unwrap(), 0.0, 1.0, 0.3, &spec()).unwrap();
    assert_eq!(d.gterm, 0.0);
    assert!(d.total <= 0.0);
    for a in [-0.5, 0.0, 1.0] {
        let u2 = monotonicity::homogeneous_solution(a, 2).unwrap();
        close(monotonicity::frequency(&u2, 0.0, 0.8, &spec()).unwrap(), 1.0, 1e-8);
    }
    let u4 = monotonicity::homogeneous_solution(0.0, 4).unwrap();
    for r in [0.5, 1.0, 2.0] {
        close(monotonicity::frequency(&u4, 0.0, r, &spec()).unwrap(), 2.0, 1e-6);
    }
    let u = monotonicity::homogeneous_solution(0.5, 2).unwrap();
    let grid: Vec<f64> = (0..20).map(|i| 0.02 + 0.048 * i as f64).collect();
    assert!(monotonicity::struwe_scan(&u, 1.0, 1.0, &grid, &spec()).unwrap().overall_pass);
    let (r1, r2) = monotonicity::lderivative_check(&monotonicity::homogeneous_solution(1.0, 2).unwrap(), 1.0, 1.0, 0.5, &spec()).unwrap();
    assert!(r1 <= 1e-5 && r2 <= 1e-5);
}

#[test]
fn kimura_values() {
    close(kimura::kimura_kernel(0.5, 1.0, 1.0, 1.0).unwrap(), (-2f64).exp() / PI.sqrt() * 2f64.cosh(), 1e-12);
    assert!(kimura::kimura_kernel(1.0, 1e-200, 1.0, 1.0).unwrap().is_finite());
    for (a, z, zeta, t) in [(0.0, 1.0, 1.0, 1.0), (1.0, 2.0, 0.5, 0.3), (-0.5, 5.0, 5.0, 2.0)] {
        assert!(kimura::equivalence_residual(a, z, zeta, t).unwrap() <= 1e-12);
    }
}

#[test]
fn vmf_values() {
    close(vmf::norming_constant(3, 1.0).unwrap(), 0.5f64.sqrt() / (libm::tgamma(1.5) * 0.937674), 1e-6);
    close(vmf::norming_constant(2, 2.0).unwrap(), 1.0 / 2.279585, 1e-6);
    let s = vmf::VmfSpec::new(vec![0.0, 0.0, 1.0], 1.0).unwrap();
    close(vmf::density(&s, &[0.0, 0.0, 1.0]).unwrap(), 2.313033, 1e-5);
    close(vmf::density(&s, &[1.0, 0.0, 0.0]).unwrap(), vmf::norming_constant(3, 1.0).unwrap(), 1e-14);
    assert!(vmf::sphere_integral_check(3, 1.0, &spec()).unwrap() <= 1e-9);
    assert!(vmf::sphere_integral_check(2, 3.0, &spec()).unwrap() <= 1e-9);
    close(vmf::estimate_concentration(3, 0.537314, 1e-12).unwrap().z, 2.0, 1e-5);
    let small = vmf::estimate_concentration(3, 1e-4, 1e-14).unwrap().z;
    close(small, 3e-4, 1e-9);
}

#[test]
fn curvature_values() {
    assert_eq!(cd_gamma::gamma1(Probe::Z2, 2.0), 16.0);
    assert_eq!(cd_gamma::gamma2(1.0, Probe::Z2, 1.0).unwrap(), 8.0);
    assert_eq!(cd_gamma::cd_residual(1.0, Probe::Z3, 1.0).unwrap().closed_form, 4.5);
    assert_eq!(cd_gamma::cd_residual(-0.5, Probe::Z3, 1.0).unwrap().closed_form, -9.0);
}
