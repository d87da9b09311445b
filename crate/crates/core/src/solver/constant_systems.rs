//! Closed-form fundamental solutions of constant-coefficient systems.
//!
//! For delta(z) = A z with constant A the solutions are the columns of x^A
//! (dilation/Mahler cases: x^lambda log^j terms from the generalized
//! eigenspaces; shift case: polynomial-times-exponential terms). For a
//! constant two-difference pair the solutions are eigenvector-indexed
//! monomials (two-dilation case), constants (two-Mahler) or declared
//! exponentials (two-shift).

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::matrix::{rational_eigenvalues, scalar_kernel, RatMatrix};
use crate::operators::closed_form::{ClosedFormSolution, PowerExponent};
use crate::operators::OperatorCase;
use crate::ratfunc::RatFunc;
use crate::scalar::ConstantScalar;

/// A fundamental set of vector solutions; each solution is a vector of
/// closed forms.
#[derive(Clone, Debug)]
pub struct FundamentalSet {
    pub solutions: Vec<Vec<ClosedFormSolution>>,
}

impl FundamentalSet {
    /// The distinct nonzero scalar closed forms appearing as components.
    pub fn scalar_components(&self) -> Vec<ClosedFormSolution> {
        let mut out: Vec<ClosedFormSolution> = Vec::new();
        for sol in &self.solutions {
            for c in sol {
                if !c.is_zero() && !out.contains(c) {
                    out.push(c.clone());
                }
            }
        }
        out
    }
}

/// Declared shift-case constants: pairs (lambda, e^lambda).
pub type ShiftConstants = Vec<(ConstantScalar, ConstantScalar)>;

fn mat_scalar(m: &RatMatrix) -> Result<Vec<ConstantScalar>> {
    m.as_scalar_entries()
        .ok_or_else(|| CoreError::InvalidInput("matrix must be constant".into()))
}

fn sub_lambda(entries: &[ConstantScalar], n: usize, lambda: &ConstantScalar) -> RatMatrix {
    RatMatrix::from_scalars(
        n,
        (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    entries[k].sub(lambda)
                } else {
                    entries[k].clone()
                }
            })
            .collect(),
    )
}

/// Fundamental solutions of delta(z) = A z for constant A. The spectrum
/// must split into rational eigenvalues over the represented field; in the
/// shift case each nonzero eigenvalue needs a declared constant e^lambda for
/// later sigma verification.
pub fn solve_constant_dd(
    a: &RatMatrix,
    case: &OperatorCase,
    declared: &ShiftConstants,
) -> Result<FundamentalSet> {
    let n = a.dim();
    let entries = mat_scalar(a)?;
    let eigen = rational_eigenvalues(a)?;
    let mut distinct: Vec<(BigRational, usize)> = Vec::new();
    for e in eigen {
        match distinct.iter_mut().find(|(v, _)| *v == e) {
            Some((_, m)) => *m += 1,
            None => distinct.push((e, 1)),
        }
    }
    let mut solutions = Vec::new();
    for (lambda, mult) in &distinct {
        let ls = ConstantScalar::from_rational(lambda.clone());
        // generalized eigenspace: kernel of (A - lambda)^mult
        let shifted = sub_lambda(&entries, n, &ls);
        let mut power = RatMatrix::identity(n);
        for _ in 0..*mult {
            power = power.mul(&shifted);
        }
        let basis = scalar_kernel(&power);
        // nilpotent action N = (A - lambda) on the eigenspace
        for v in &basis {
            // z(x) = x^lambda sum_k (N^k v / k!) log^k x   (delta = x d/dx)
            // shift case: e^{lambda x} sum_k (N^k v) x^k / k!
            let mut terms: Vec<Vec<(ConstantScalar, u32)>> = vec![Vec::new(); n];
            let mut cur: Vec<ConstantScalar> = v.clone();
            let mut k = 0u32;
            let mut fact = BigRational::one();
            loop {
                if cur.iter().all(|c| c.is_zero()) {
                    break;
                }
                if k > 0 {
                    fact = fact * BigRational::from_integer((k as i64).into());
                }
                for (i, c) in cur.iter().enumerate() {
                    if !c.is_zero() {
                        terms[i].push((c.scale(&(BigRational::one() / fact.clone())), k));
                    }
                }
                // advance: cur = N cur
                let mut next = vec![ConstantScalar::zero(); n];
                for (i, nx) in next.iter_mut().enumerate() {
                    for (j, c) in cur.iter().enumerate() {
                        let m = entries[i * n + j].clone();
                        let m = if i == j { m.sub(&ls) } else { m };
                        *nx = nx.add(&m.mul(c));
                    }
                }
                cur = next;
                k += 1;
                if k as usize > n {
                    return Err(CoreError::Internal("nilpotent part does not terminate".into()));
                }
            }
            let sol: Vec<ClosedFormSolution> = match case {
                OperatorCase::QDilation { .. } | OperatorCase::Mahler { .. } => terms
                    .into_iter()
                    .map(|ts| {
                        ClosedFormSolution::from_terms(
                            ts.into_iter()
                                .map(|(c, k)| {
                                    crate::operators::closed_form::ClosedFormTerm::PowerLog {
                                        coeff: RatFunc::constant(c),
                                        exponent: PowerExponent::Rational(lambda.clone()),
                                        log_power: k,
                                    }
                                })
                                .collect(),
                        )
                    })
                    .collect(),
                OperatorCase::Shift => {
                    let mult = if lambda.is_zero() {
                        Some(ConstantScalar::one())
                    } else {
                        declared
                            .iter()
                            .find(|(l, _)| *l == ls)
                            .map(|(_, c)| c.clone())
                    };
                    let Some(mult) = mult else {
                        return Err(CoreError::UndeclaredConstant(format!("e^({})", ls)));
                    };
                    terms
                        .into_iter()
                        .map(|ts| {
                            let mut poly = crate::poly::Poly::zero();
                            for (c, k) in ts {
                                poly = poly.add(&crate::poly::Poly::monomial(c, k as usize));
                            }
                            ClosedFormSolution::exponential(
                                RatFunc::from_poly(poly),
                                ls.clone(),
                                Some(mult.clone()),
                            )
                        })
                        .collect()
                }
                _ => {
                    return Err(CoreError::InvalidCase(
                        "constant delta-systems live in the single-sigma cases".into(),
                    ))
                }
            };
            solutions.push(sol);
        }
    }
    if solutions.len() != n {
        return Err(CoreError::Internal(
            "generalized eigenspaces do not fill the space".into(),
        ));
    }
    Ok(FundamentalSet { solutions })
}

/// Common eigenvector solutions of a constant two-difference pair. For the
/// two-dilation case these are monomials x^k with q1^k, q2^k in the spectra
/// (|k| up to a fixed search window); for two-Mahler only constants solve;
/// the two-shift case needs declared exponentials and this returns the
/// constant solutions plus any declared rates whose multipliers match.
pub fn solve_constant_ss(
    b1: &RatMatrix,
    b2: &RatMatrix,
    case: &OperatorCase,
    declared: &[(ConstantScalar, ConstantScalar, ConstantScalar)],
) -> Result<FundamentalSet> {
    let n = b1.dim();
    let e1 = mat_scalar(b1)?;
    let e2 = mat_scalar(b2)?;
    let mut solutions: Vec<Vec<ClosedFormSolution>> = Vec::new();
    let mut push_kernel = |m1: RatMatrix, m2: RatMatrix, mk: &dyn Fn(&ConstantScalar) -> ClosedFormSolution| {
        let k1 = scalar_kernel(&m1);
        if k1.is_empty() {
            return;
        }
        // intersect: vectors in ker(m1) with m2 v = 0
        for v in k1 {
            let vv: Vec<RatFunc> = v.iter().map(|c| RatFunc::constant(c.clone())).collect();
            let image = m2.mul_vec(&vv);
            if image.iter().all(|e| e.is_zero()) {
                solutions.push(v.iter().map(|c| mk(c)).collect());
            }
        }
    };
    match case {
        OperatorCase::TwoQDilation { q1, q2 } => {
            for k in -32i64..=32 {
                let l1 = q1.pow(k)?;
                let l2 = q2.pow(k)?;
                let m1 = sub_lambda(&e1, n, &l1);
                let m2 = sub_lambda(&e2, n, &l2);
                let kr = BigRational::from_integer(k.into());
                push_kernel(m1, m2, &|c: &ConstantScalar| {
                    ClosedFormSolution::power_log(
                        RatFunc::constant(c.clone()),
                        PowerExponent::Rational(kr.clone()),
                        0,
                    )
                });
            }
        }
        OperatorCase::TwoMahler { .. } => {
            let m1 = sub_lambda(&e1, n, &ConstantScalar::one());
            let m2 = sub_lambda(&e2, n, &ConstantScalar::one());
            push_kernel(m1, m2, &|c: &ConstantScalar| {
                ClosedFormSolution::power_log(
                    RatFunc::constant(c.clone()),
                    PowerExponent::integer(0),
                    0,
                )
            });
        }
        OperatorCase::TwoShift { .. } => {
            let m1 = sub_lambda(&e1, n, &ConstantScalar::one());
            let m2 = sub_lambda(&e2, n, &ConstantScalar::one());
            push_kernel(m1, m2, &|c: &ConstantScalar| {
                ClosedFormSolution::exponential(
                    RatFunc::constant(c.clone()),
                    ConstantScalar::zero(),
                    None,
                )
            });
            for (rate, c1, c2) in declared {
                let m1 = sub_lambda(&e1, n, c1);
                let m2 = sub_lambda(&e2, n, c2);
                let rate = rate.clone();
                let c1c = c1.clone();
                push_kernel(m1, m2, &|c: &ConstantScalar| {
                    ClosedFormSolution::exponential(
                        RatFunc::constant(c.clone()),
                        rate.clone(),
                        Some(c1c.clone()),
                    )
                });
            }
        }
        _ => {
            return Err(CoreError::InvalidCase(
                "constant two-difference pairs live in the two-sigma cases".into(),
            ))
        }
    }
    Ok(FundamentalSet { solutions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::constant_matrix;

    #[test]
    fn half_power_solution() {
        // case Q, A = [[1/2]] gives x^{1/2}
        let case = OperatorCase::q_dilation(ConstantScalar::from_integer(2)).unwrap();
        let a = constant_matrix(1, vec![ConstantScalar::from_ratio(1, 2)]);
        let f = solve_constant_dd(&a, &case, &Vec::new()).unwrap();
        let comps = f.scalar_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(
            comps[0],
            ClosedFormSolution::power_log(RatFunc::one(), PowerExponent::rational(1, 2), 0)
        );
    }

    #[test]
    fn jordan_block_gives_log() {
        // case Q, A = [[0,1],[0,0]] gives {1, log x}
        let case = OperatorCase::q_dilation(ConstantScalar::from_integer(2)).unwrap();
        let a = constant_matrix(
            2,
            vec![
                ConstantScalar::zero(),
                ConstantScalar::one(),
                ConstantScalar::zero(),
                ConstantScalar::zero(),
            ],
        );
        let f = solve_constant_dd(&a, &case, &Vec::new()).unwrap();
        let comps = f.scalar_components();
        let one = ClosedFormSolution::power_log(RatFunc::one(), PowerExponent::integer(0), 0);
        let logx = ClosedFormSolution::power_log(RatFunc::one(), PowerExponent::integer(0), 1);
        assert!(comps.contains(&one));
        assert!(comps.contains(&logx));
        // delta annihilation: applying delta twice kills every component
        for sol in &f.solutions {
            for c in sol {
                let d = crate::operators::closed_form::delta_closed_form(&case, c).unwrap();
                let dd = crate::operators::closed_form::delta_closed_form(&case, &d).unwrap();
                assert!(dd.is_zero());
            }
        }
    }

    #[test]
    fn two_dilation_monomial() {
        // B1 = [[q1]], B2 = [[q2]] gives x (the k = 1 eigenrelation)
        let q1 = ConstantScalar::generator(0);
        let q2 = ConstantScalar::generator(1);
        let case = OperatorCase::two_q_dilation(q1.clone(), q2.clone()).unwrap();
        let b1 = constant_matrix(1, vec![q1]);
        let b2 = constant_matrix(1, vec![q2]);
        let f = solve_constant_ss(&b1, &b2, &case, &[]).unwrap();
        let comps = f.scalar_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(
            comps[0],
            ClosedFormSolution::power_log(RatFunc::one(), PowerExponent::integer(1), 0)
        );
    }

    #[test]
    fn shift_case_needs_declared_constant() {
        let case = OperatorCase::Shift;
        let a = constant_matrix(1, vec![ConstantScalar::from_integer(2)]);
        assert!(matches!(
            solve_constant_dd(&a, &case, &Vec::new()),
            Err(CoreError::UndeclaredConstant(_))
        ));
        let c = ConstantScalar::generator(0);
        let f = solve_constant_dd(&a, &case, &vec![(ConstantScalar::from_integer(2), c.clone())])
            .unwrap();
        assert_eq!(
            f.scalar_components()[0],
            ClosedFormSolution::exponential(RatFunc::one(), ConstantScalar::from_integer(2), Some(c))
        );
    }

    #[test]
    fn unsplit_spectrum_error() {
        let case = OperatorCase::q_dilation(ConstantScalar::from_integer(2)).unwrap();
        let a = constant_matrix(
            2,
            vec![
                ConstantScalar::zero(),
                ConstantScalar::from_integer(2),
                ConstantScalar::one(),
                ConstantScalar::zero(),
            ],
        );
        assert!(matches!(
            solve_constant_dd(&a, &case, &Vec::new()),
            Err(CoreError::SpectrumSplit(_))
        ));
    }
}
