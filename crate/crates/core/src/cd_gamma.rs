//! Carre du champ `Gamma(f) = (f')^2` and iterated `Gamma_2` of the Bessel
//! generator `B = d^2/dz^2 + (a/z) d/dz`, and the curvature-dimension defect
//! `Gamma_2(f) - (Bf)^2/(a+1) = a/(a+1) (f'' - f'/z)^2`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::special_fn::BesselParam;

/// Test functions with hand-coded derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Probe {
    One,
    Z,
    Z2,
    Z3,
    Z4,
    Sin,
    ExpNeg,
}

impl Probe {
    pub const ALL: [Probe; 7] = [Probe::One, Probe::Z, Probe::Z2, Probe::Z3, Probe::Z4, Probe::Sin, Probe::ExpNeg];

    pub fn name(self) -> &'static str {
        match self {
            Probe::One => "1",
            Probe::Z => "z",
            Probe::Z2 => "z^2",
            Probe::Z3 => "z^3",
            Probe::Z4 => "z^4",
            Probe::Sin => "sin z",
            Probe::ExpNeg => "exp(-z)",
        }
    }

    pub fn is_polynomial(self) -> bool {
        !matches!(self, Probe::Sin | Probe::ExpNeg)
    }

    /// `k`-th derivative at `z`, `k <= 4`.
    pub fn deriv(self, k: u32, z: f64) -> f64 {
        let monomial = |n: i32| {
            if k as i32 > n {
                0.0
            } else {
                let c: f64 = (0..k as i32).map(|m| (n - m) as f64).product();
                c * z.powi(n - k as i32)
            }
        };
        match self {
            Probe::One => monomial(0),
            Probe::Z => monomial(1),
            Probe::Z2 => monomial(2),
            Probe::Z3 => monomial(3),
            Probe::Z4 => monomial(4),
            Probe::Sin => match k % 4 {
                0 => z.sin(),
                1 => z.cos(),
                2 => -z.sin(),
                _ => -z.cos(),
            },
            Probe::ExpNeg => {
                if k % 2 == 0 {
                    (-z).exp()
                } else {
                    -(-z).exp()
                }
            }
        }
    }

    pub fn f(self, z: f64) -> f64 {
        self.deriv(0, z)
    }
}

fn check(a: f64, z: f64) -> Result<()> {
    BesselParam::from_a(a)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(domain(format!("z = {z} must be positive")));
    }
    Ok(())
}

/// `(f')^2`.
pub fn gamma1(f: Probe, z: f64) -> f64 {
    f.deriv(1, z).powi(2)
}

/// `Bf = f'' + (a/z) f'`.
pub fn generator(a: f64, f: Probe, z: f64) -> f64 {
    f.deriv(2, z) + a / z * f.deriv(1, z)
}

/// `(f'')^2 + (a/z^2)(f')^2`.
pub fn gamma2(a: f64, f: Probe, z: f64) -> Result<f64> {
    check(a, z)?;
    let (d1, d2) = (f.deriv(1, z), f.deriv(2, z));
    Ok(d2 * d2 + a / (z * z) * d1 * d1)
}

/// `1/2 [B Gamma(f) - 2 Gamma(f, Bf)]` expanded with exact derivatives; the
/// third derivatives cancel only after summation.
pub fn gamma2_commutator(a: f64, f: Probe, z: f64) -> Result<f64> {
    check(a, z)?;
    let (d1, d2, d3) = (f.deriv(1, z), f.deriv(2, z), f.deriv(3, z));
    let b_gamma = 2.0 * d2 * d2 + 2.0 * d1 * d3 + a / z * 2.0 * d1 * d2;
    let bf_prime = d3 + a / z * d2 - a / (z * z) * d1;
    Ok(0.5 * (b_gamma - 2.0 * d1 * bf_prime))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdResidual {
    /// `Gamma_2(f) - (Bf)^2/(a+1)`.
    pub direct: f64,
    /// `a/(a+1) (f'' - f'/z)^2`.
    pub closed_form: f64,
    /// `|direct - closed_form|` over `1 + Gamma_2(f) + (Bf)^2/(a+1)`.
    pub identity_residual: f64,
}

pub fn cd_residual(a: f64, f: Probe, z: f64) -> Result<CdResidual> {
    let g2 = gamma2(a, f, z)?;
    let bf2 = generator(a, f, z).powi(2) / (a + 1.0);
    let direct = g2 - bf2;
    let closed_form = a / (a + 1.0) * (f.deriv(2, z) - f.deriv(1, z) / z).powi(2);
    Ok(CdResidual { direct, closed_form, identity_residual: (direct - closed_form).abs() / (1.0 + g2.abs() + bf2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gamma1_examples() {
        assert_eq!(gamma1(Probe::One, 3.0), 0.0);
        assert_eq!(gamma1(Probe::Z, 0.7), 1.0);
        assert_eq!(gamma1(Probe::Z2, 2.0), 16.0);
    }

    #[test]
    fn gamma2_examples() {
        assert_eq!(gamma2(0.0, Probe::Z, 1.0).unwrap(), 0.0);
        assert_eq!(gamma2(1.0, Probe::Z2, 1.0).unwrap(), 8.0);
        assert!(gamma2(-1.0, Probe::Z, 1.0).is_err());
        assert!(gamma2(0.0, Probe::Z, 0.0).is_err());
    }

    #[test]
    fn cd_examples() {
        for &a in &[-0.5, 0.0, 3.0] {
            assert_eq!(cd_residual(a, Probe::Z2, 1.7).unwrap().closed_form, 0.0);
            assert!(cd_residual(a, Probe::Z2, 1.7).unwrap().direct.abs() < 1e-12);
        }
        let r = cd_residual(1.0, Probe::Z3, 1.0).unwrap();
        assert_eq!(r.closed_form, 4.5);
        assert_eq!(r.direct, 4.5);
        let r = cd_residual(-0.5, Probe::Z3, 1.0).unwrap();
        assert_eq!(r.closed_form, -9.0);
        assert!(r.direct < 0.0);
    }

    #[test]
    fn derivatives_match_differences() {
        for p in Probe::ALL {
            for &z in &[0.3, 1.0, 2.5] {
                for k in 0..4 {
                    let h = 1e-5;
                    let fd = (p.deriv(k, z + h) - p.deriv(k, z - h)) / (2.0 * h);
                    assert!((fd - p.deriv(k + 1, z)).abs() <= 1e-6 * (1.0 + fd.abs()), "{} k={k}", p.name());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn commutator_route_agrees(a in -0.99f64..6.0, z in 0.05f64..20.0, i in 0usize..7) {
            let p = Probe::ALL[i];
            let g = gamma2(a, p, z).unwrap();
            let c = gamma2_commutator(a, p, z).unwrap();
            prop_assert!((g - c).abs() <= 1e-12 * (1.0 + g.abs() + (p.deriv(1, z) * p.deriv(3, z)).abs()));
        }

        #[test]
        fn identity_and_sign(a in -0.99f64..6.0, z in 0.05f64..20.0, i in 0usize..7) {
            let r = cd_residual(a, Probe::ALL[i], z).unwrap();
            prop_assert!(r.identity_residual <= 1e-12);
            if a >= 0.0 {
                prop_assert!(r.closed_form >= 0.0);
            } else {
                prop_assert!(cd_residual(a, Probe::Z3, z).unwrap().direct < 0.0);
            }
        }
    }
}
