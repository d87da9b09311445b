//! Deterministic generation of consistent instances with a planted gauge
//! certificate, the round-trip oracle for the reduction pipeline.
//!
//! A constant system satisfying the case's spectral constraints is gauged by
//! a random invertible matrix (a product of unipotent elementary matrices
//! with polynomial entries and a monomial diagonal, so the determinant is a
//! monomial by construction). The planted certificate is returned alongside
//! the instance and always re-verifies.

use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{CoreError, Result};
use crate::matrix::RatMatrix;
use crate::operators::OperatorCase;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::scalar::ConstantScalar;
use crate::systems::{
    check_consistency_dd, check_consistency_ss, gauge_dd, gauge_ss, DDSystem, GaugeCertificate,
    SigmaSigmaSystem, SystemRef,
};

/// The planted constant matrices (diagonal entries).
#[derive(Clone, Debug)]
pub struct ConstantSpec {
    pub a_diag: Vec<ConstantScalar>,
    pub b_diag: Vec<ConstantScalar>,
}

impl ConstantSpec {
    pub fn diagonal(a: Vec<ConstantScalar>, b: Vec<ConstantScalar>) -> Self {
        ConstantSpec {
            a_diag: a,
            b_diag: b,
        }
    }
}

/// Shape of the random gauge.
#[derive(Clone, Debug)]
pub enum GaugeSpec {
    Identity,
    /// Product of `factors` unipotent elementary matrices with polynomial
    /// entries of the given degree/height bounds, times a monomial diagonal
    /// with exponents in [0, monomial_exponent].
    Random {
        factors: usize,
        degree: usize,
        height: i64,
        monomial_exponent: u32,
    },
}

impl Default for GaugeSpec {
    fn default() -> Self {
        GaugeSpec::Random {
            factors: 3,
            degree: 2,
            height: 3,
            monomial_exponent: 2,
        }
    }
}

/// A generated instance: the system, and the certificate gauging the planted
/// constant system onto it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub system: SystemRef,
    pub planted: GaugeCertificate,
}

fn validate_spec(case: &OperatorCase, spec: &ConstantSpec) -> Result<()> {
    let n = spec.a_diag.len();
    if case.is_two_sigma() {
        if spec.b_diag.len() != n {
            return Err(CoreError::InvalidInput("diagonal lengths differ".into()));
        }
        for c in spec.a_diag.iter().chain(spec.b_diag.iter()) {
            if c.is_zero() {
                return Err(CoreError::InvalidInput(
                    "two-difference constants must be invertible".into(),
                ));
            }
        }
        return Ok(());
    }
    if spec.b_diag.len() != n {
        return Err(CoreError::InvalidInput("diagonal lengths differ".into()));
    }
    for c in &spec.b_diag {
        if c.is_zero() {
            return Err(CoreError::InvalidInput("B constants must be invertible".into()));
        }
    }
    match case {
        OperatorCase::QDilation { .. } => {
            // eigenvalue differences must avoid nonzero integers
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let d = spec.a_diag[i].sub(&spec.a_diag[j]);
                    if let Some(r) = d.as_rational() {
                        if !r.is_zero() && r.denom() == &num_bigint::BigInt::from(1) {
                            return Err(CoreError::InvalidInput(format!(
                                "dilation-case spectrum has integer spacing {}",
                                r
                            )));
                        }
                    }
                }
            }
        }
        OperatorCase::Mahler { .. } => {
            // consistency for constant diagonal pairs forces (q-1) a b = 0
            for a in &spec.a_diag {
                if !a.is_zero() {
                    return Err(CoreError::InvalidInput(
                        "Mahler-case planted diagonal A must vanish".into(),
                    ));
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn random_rational(rng: &mut StdRng, height: i64) -> ConstantScalar {
    let num = rng.gen_range(-height..=height);
    let den = rng.gen_range(1..=height.max(1));
    ConstantScalar::from_rational(BigRational::new(num.into(), den.into()))
}

fn random_poly(rng: &mut StdRng, degree: usize, height: i64) -> Poly {
    let coeffs: Vec<ConstantScalar> = (0..=degree).map(|_| random_rational(rng, height)).collect();
    Poly::from_coeffs(coeffs)
}

/// Random invertible gauge with a monomial determinant.
pub fn random_gauge(rng: &mut StdRng, n: usize, spec: &GaugeSpec) -> RatMatrix {
    match spec {
        GaugeSpec::Identity => RatMatrix::identity(n),
        GaugeSpec::Random {
            factors,
            degree,
            height,
            monomial_exponent,
        } => {
            let mut g = RatMatrix::from_fn(n, |i, j| {
                if i == j {
                    let e = rng.gen_range(0..=*monomial_exponent);
                    RatFunc::from_poly(Poly::monomial(ConstantScalar::one(), e as usize))
                } else {
                    RatFunc::zero()
                }
            });
            for _ in 0..*factors {
                if n < 2 {
                    break;
                }
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let p = random_poly(rng, *degree, *height);
                let mut e = RatMatrix::identity(n);
                e.set_entry(i, j, RatFunc::from_poly(p));
                g = e.mul(&g);
            }
            g
        }
    }
}

/// Deterministically generate a consistent instance for the case by gauging
/// the planted constant system with a random invertible matrix.
pub fn gen_instance(
    case: &OperatorCase,
    spec: &ConstantSpec,
    gspec: &GaugeSpec,
    seed: u64,
) -> Result<Instance> {
    validate_spec(case, spec)?;
    let n = spec.a_diag.len();
    let mut rng = StdRng::seed_from_u64(seed);
    let g = random_gauge(&mut rng, n, gspec);
    if case.is_two_sigma() {
        let planted = SigmaSigmaSystem::new(
            case.clone(),
            RatMatrix::diagonal(spec.a_diag.iter().cloned().map(RatFunc::constant).collect()),
            RatMatrix::diagonal(spec.b_diag.iter().cloned().map(RatFunc::constant).collect()),
        )?;
        let rep = check_consistency_ss(&planted)?;
        if !rep.is_consistent() {
            return Err(CoreError::InvalidInput("planted pair is inconsistent".into()));
        }
        let (sys, cert) = gauge_ss(&planted, &g)?;
        Ok(Instance {
            system: SystemRef::SS(sys),
            planted: cert,
        })
    } else {
        let planted = DDSystem::new(
            case.clone(),
            RatMatrix::diagonal(spec.a_diag.iter().cloned().map(RatFunc::constant).collect()),
            RatMatrix::diagonal(spec.b_diag.iter().cloned().map(RatFunc::constant).collect()),
        )?;
        let rep = check_consistency_dd(&planted)?;
        if !rep.is_consistent() {
            return Err(CoreError::InvalidInput("planted pair is inconsistent".into()));
        }
        let (sys, cert) = gauge_dd(&planted, &g)?;
        Ok(Instance {
            system: SystemRef::DD(sys),
            planted: cert,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case_2m() -> OperatorCase {
        OperatorCase::two_mahler(2, 3).unwrap()
    }

    #[test]
    fn identity_gauge_returns_plant() {
        let spec = ConstantSpec::diagonal(
            vec![ConstantScalar::from_integer(1), ConstantScalar::from_integer(2)],
            vec![ConstantScalar::from_integer(1), ConstantScalar::from_integer(3)],
        );
        let inst = gen_instance(&case_2m(), &spec, &GaugeSpec::Identity, 7).unwrap();
        let SystemRef::SS(sys) = &inst.system else {
            panic!("expected two-difference system")
        };
        assert!(sys.b1().is_constant());
        assert!(sys.b2().is_constant());
    }

    #[test]
    fn determinism_and_consistency() {
        let spec = ConstantSpec::diagonal(
            vec![ConstantScalar::from_integer(1), ConstantScalar::from_integer(2)],
            vec![ConstantScalar::from_integer(1), ConstantScalar::from_integer(3)],
        );
        let a = gen_instance(&case_2m(), &spec, &GaugeSpec::default(), 42).unwrap();
        let b = gen_instance(&case_2m(), &spec, &GaugeSpec::default(), 42).unwrap();
        let (SystemRef::SS(sa), SystemRef::SS(sb)) = (&a.system, &b.system) else {
            panic!()
        };
        assert_eq!(sa, sb);
        assert!(check_consistency_ss(sa).unwrap().is_consistent());
        a.planted.verify().unwrap();
    }

    #[test]
    fn dilation_case_spectral_guard() {
        let case = OperatorCase::q_dilation(ConstantScalar::from_integer(2)).unwrap();
        let bad = ConstantSpec::diagonal(
            vec![ConstantScalar::zero(), ConstantScalar::from_integer(1)],
            vec![ConstantScalar::one(), ConstantScalar::one()],
        );
        assert!(gen_instance(&case, &bad, &GaugeSpec::Identity, 1).is_err());
        let good = ConstantSpec::diagonal(
            vec![ConstantScalar::zero(), ConstantScalar::from_ratio(1, 2)],
            vec![ConstantScalar::one(), ConstantScalar::from_integer(2)],
        );
        let inst = gen_instance(&case, &good, &GaugeSpec::default(), 5).unwrap();
        let SystemRef::DD(sys) = &inst.system else { panic!() };
        assert!(check_consistency_dd(sys).unwrap().is_consistent());
        inst.planted.verify().unwrap();
    }
}
