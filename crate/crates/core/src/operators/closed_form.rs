//! Closed-form solutions: formal sums of r(x) x^alpha log(x)^j terms (the
//! dilation and Mahler cases) or r(x) e^{lambda x} terms (the shift case),
//! with exact termwise operator actions.
//!
//! Symbolic constants that the field cannot produce on its own must be
//! declared by the caller: q^alpha for a non-integer exponent in the
//! dilation case, e^lambda as the shift multiplier of an exponential term,
//! and log(q) when sigma acts on log terms in the dilation case
//! ([`ClosedFormCtx::log_sigma`]). There is no transcendence checking; the
//! rewrite rules are purely syntactic.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{CoreError, Result};
use crate::ratfunc::RatFunc;
use crate::scalar::ConstantScalar;

use super::{OpKind, OperatorCase, ScalarOperator, SigmaIndex};

/// Exponent of the x^alpha factor of a power-log term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PowerExponent {
    /// A rational exponent (required in the Mahler case).
    Rational(BigRational),
    /// A symbolic exponent together with its declared sigma multiplier
    /// (q^alpha in the dilation case).
    Declared {
        alpha: ConstantScalar,
        sigma_multiplier: ConstantScalar,
    },
}

impl PowerExponent {
    pub fn rational(n: i64, d: i64) -> Self {
        PowerExponent::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn integer(n: i64) -> Self {
        PowerExponent::Rational(BigRational::from_integer(n.into()))
    }

    /// The exponent as a scalar, for delta actions.
    pub fn as_scalar(&self) -> ConstantScalar {
        match self {
            PowerExponent::Rational(r) => ConstantScalar::from_rational(r.clone()),
            PowerExponent::Declared { alpha, .. } => alpha.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            PowerExponent::Rational(r) => Some(r.clone()),
            PowerExponent::Declared { .. } => None,
        }
    }
}

/// One term of a closed-form solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedFormTerm {
    /// coeff(x) * x^alpha * log(x)^j  (dilation and Mahler cases).
    PowerLog {
        coeff: RatFunc,
        exponent: PowerExponent,
        log_power: u32,
    },
    /// coeff(x) * e^{rate x}  (shift case); `shift_multiplier` is the
    /// declared constant e^{rate} used by sigma, when available.
    Exponential {
        coeff: RatFunc,
        rate: ConstantScalar,
        shift_multiplier: Option<ConstantScalar>,
    },
}

impl ClosedFormTerm {
    fn sort_key(&self) -> (u8, String, u32) {
        match self {
            ClosedFormTerm::PowerLog {
                exponent,
                log_power,
                ..
            } => (0, format!("{:?}", exponent), *log_power),
            ClosedFormTerm::Exponential { rate, .. } => (1, format!("{:?}", rate), 0),
        }
    }

    fn same_shape(&self, other: &Self) -> bool {
        match (self, other) {
            (
                ClosedFormTerm::PowerLog {
                    exponent: e1,
                    log_power: j1,
                    ..
                },
                ClosedFormTerm::PowerLog {
                    exponent: e2,
                    log_power: j2,
                    ..
                },
            ) => e1 == e2 && j1 == j2,
            (
                ClosedFormTerm::Exponential { rate: r1, .. },
                ClosedFormTerm::Exponential { rate: r2, .. },
            ) => r1 == r2,
            _ => false,
        }
    }

    fn coeff(&self) -> &RatFunc {
        match self {
            ClosedFormTerm::PowerLog { coeff, .. } => coeff,
            ClosedFormTerm::Exponential { coeff, .. } => coeff,
        }
    }

    fn with_coeff(&self, c: RatFunc) -> Self {
        match self {
            ClosedFormTerm::PowerLog {
                exponent,
                log_power,
                ..
            } => ClosedFormTerm::PowerLog {
                coeff: c,
                exponent: exponent.clone(),
                log_power: *log_power,
            },
            ClosedFormTerm::Exponential {
                rate,
                shift_multiplier,
                ..
            } => ClosedFormTerm::Exponential {
                coeff: c,
                rate: rate.clone(),
                shift_multiplier: shift_multiplier.clone(),
            },
        }
    }
}

/// A closed-form solution: a canonical sum of terms (zero terms dropped,
/// like terms merged, deterministic order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormSolution {
    terms: Vec<ClosedFormTerm>,
}

impl ClosedFormSolution {
    pub fn zero() -> Self {
        ClosedFormSolution { terms: Vec::new() }
    }

    pub fn from_terms(terms: Vec<ClosedFormTerm>) -> Self {
        let mut out: Vec<ClosedFormTerm> = Vec::new();
        for t in terms {
            let t = canonicalize_term(t);
            if t.coeff().is_zero() {
                continue;
            }
            if let Some(existing) = out.iter_mut().find(|e| e.same_shape(&t)) {
                let c = existing.coeff().add(t.coeff());
                *existing = existing.with_coeff(c);
            } else {
                out.push(t);
            }
        }
        out.retain(|t| !t.coeff().is_zero());
        out.sort_by_key(|t| t.sort_key());
        ClosedFormSolution { terms: out }
    }

    /// r(x) * x^alpha * log(x)^j.
    pub fn power_log(coeff: RatFunc, exponent: PowerExponent, log_power: u32) -> Self {
        Self::from_terms(vec![ClosedFormTerm::PowerLog {
            coeff,
            exponent,
            log_power,
        }])
    }

    /// r(x) * e^{rate x}.
    pub fn exponential(
        coeff: RatFunc,
        rate: ConstantScalar,
        shift_multiplier: Option<ConstantScalar>,
    ) -> Self {
        Self::from_terms(vec![ClosedFormTerm::Exponential {
            coeff,
            rate,
            shift_multiplier,
        }])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[ClosedFormTerm] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut ts = self.terms.clone();
        ts.extend(other.terms.iter().cloned());
        Self::from_terms(ts)
    }

    pub fn scale_ratfunc(&self, r: &RatFunc) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| t.with_coeff(t.coeff().mul(r)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        self.scale_ratfunc(&RatFunc::from_i64(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Normalize a power-log term so a rational exponent lies in [0, 1), the
/// integer part folded into the rational-function coefficient. Without this,
/// x * x^{1/2} and x^{3/2} would not compare equal.
fn canonicalize_term(t: ClosedFormTerm) -> ClosedFormTerm {
    match t {
        ClosedFormTerm::PowerLog {
            coeff,
            exponent: PowerExponent::Rational(r),
            log_power,
        } => {
            let int_part = r.floor();
            if int_part.is_zero() {
                return ClosedFormTerm::PowerLog {
                    coeff,
                    exponent: PowerExponent::Rational(r),
                    log_power,
                };
            }
            let frac = &r - &int_part;
            let k = i64::try_from(int_part.to_integer()).expect("exponent fits i64");
            let monom = crate::poly::Poly::monomial(ConstantScalar::one(), k.unsigned_abs() as usize);
            let shifted = if k >= 0 {
                coeff.mul(&RatFunc::from_poly(monom))
            } else {
                coeff.div(&RatFunc::from_poly(monom)).expect("nonzero monomial")
            };
            ClosedFormTerm::PowerLog {
                coeff: shifted,
                exponent: PowerExponent::Rational(frac),
                log_power,
            }
        }
        other => other,
    }
}

/// Declared constants needed by sigma actions on closed forms.
#[derive(Clone, Debug, Default)]
pub struct ClosedFormCtx {
    /// The constant sigma adds to log(x) in the dilation case (log q for
    /// sigma1, and log q2 for a second dilation).
    pub log_sigma: Option<ConstantScalar>,
    pub log_sigma2: Option<ConstantScalar>,
}

impl ClosedFormCtx {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_log_sigma(l: ConstantScalar) -> Self {
        ClosedFormCtx {
            log_sigma: Some(l),
            log_sigma2: None,
        }
    }
}

/// Apply delta of the case to a closed form, termwise.
pub fn delta_closed_form(case: &OperatorCase, cf: &ClosedFormSolution) -> Result<ClosedFormSolution> {
    let mut out = Vec::new();
    for t in cf.terms() {
        match (case, t) {
            (
                OperatorCase::QDilation { .. } | OperatorCase::Mahler { .. },
                ClosedFormTerm::PowerLog {
                    coeff,
                    exponent,
                    log_power,
                },
            ) => {
                // delta = x d/dx:
                // (x coeff' + alpha coeff) x^a log^j + j coeff x^a log^{j-1}
                let main = coeff
                    .euler_derivative()
                    .add(&coeff.scale(&exponent.as_scalar()));
                out.push(ClosedFormTerm::PowerLog {
                    coeff: main,
                    exponent: exponent.clone(),
                    log_power: *log_power,
                });
                if *log_power > 0 {
                    out.push(ClosedFormTerm::PowerLog {
                        coeff: coeff.scale(&ConstantScalar::from_integer(*log_power as i64)),
                        exponent: exponent.clone(),
                        log_power: log_power - 1,
                    });
                }
            }
            (
                OperatorCase::Shift,
                ClosedFormTerm::Exponential {
                    coeff,
                    rate,
                    shift_multiplier,
                },
            ) => {
                // d/dx: (coeff' + rate coeff) e^{rate x}
                out.push(ClosedFormTerm::Exponential {
                    coeff: coeff.derivative().add(&coeff.scale(rate)),
                    rate: rate.clone(),
                    shift_multiplier: shift_multiplier.clone(),
                });
            }
            _ => {
                return Err(CoreError::InvalidInput(
                    "closed-form term shape does not match the case".into(),
                ))
            }
        }
    }
    Ok(ClosedFormSolution::from_terms(out))
}

/// Apply sigma (of the given index) to a closed form, termwise.
pub fn sigma_closed_form(
    case: &OperatorCase,
    index: SigmaIndex,
    cf: &ClosedFormSolution,
    ctx: &ClosedFormCtx,
) -> Result<ClosedFormSolution> {
    let mut out = ClosedFormSolution::zero();
    for t in cf.terms() {
        let contrib = match t {
            ClosedFormTerm::PowerLog {
                coeff,
                exponent,
                log_power,
            } => sigma_power_log(case, index, coeff, exponent, *log_power, ctx)?,
            ClosedFormTerm::Exponential {
                coeff,
                rate,
                shift_multiplier,
            } => {
                let (csub, step) = match (case, index) {
                    (OperatorCase::Shift, SigmaIndex::One) => {
                        (coeff.subst_shift(&ConstantScalar::one()), ConstantScalar::one())
                    }
                    (OperatorCase::TwoShift { .. }, SigmaIndex::One) => {
                        (coeff.subst_shift(&ConstantScalar::one()), ConstantScalar::one())
                    }
                    (OperatorCase::TwoShift { alpha }, SigmaIndex::Two) => {
                        (coeff.subst_shift(alpha), alpha.clone())
                    }
                    _ => {
                        return Err(CoreError::InvalidInput(
                            "exponential terms only live in the shift cases".into(),
                        ))
                    }
                };
                // e^{rate (x + step)} = (e^{rate})^{step...}: for step = 1
                // the declared multiplier applies; rate 0 needs nothing
                let mult = if rate.is_zero() {
                    ConstantScalar::one()
                } else if step.is_one() {
                    shift_multiplier.clone().ok_or_else(|| {
                        CoreError::UndeclaredConstant(format!("e^({})", rate))
                    })?
                } else {
                    return Err(CoreError::UndeclaredConstant(format!(
                        "e^({}*({}))",
                        rate, step
                    )));
                };
                ClosedFormSolution::exponential(
                    csub.scale(&mult),
                    rate.clone(),
                    shift_multiplier.clone(),
                )
            }
        };
        out = out.add(&contrib);
    }
    Ok(out)
}

fn sigma_power_log(
    case: &OperatorCase,
    index: SigmaIndex,
    coeff: &RatFunc,
    exponent: &PowerExponent,
    log_power: u32,
    ctx: &ClosedFormCtx,
) -> Result<ClosedFormSolution> {
    match (case, index) {
        (OperatorCase::QDilation { q }, SigmaIndex::One)
        | (OperatorCase::TwoQDilation { q1: q, .. }, SigmaIndex::One)
        | (OperatorCase::TwoQDilation { q2: q, .. }, SigmaIndex::Two) => {
            // coeff(qx) * q^alpha * x^alpha * (log x + l)^j
            let csub = coeff.subst_scale(q);
            let mult = match exponent {
                PowerExponent::Rational(r) => {
                    if r.is_integer() {
                        q.pow(i64::try_from(r.to_integer()).map_err(|_| {
                            CoreError::InvalidInput("exponent too large".into())
                        })?)?
                    } else {
                        return Err(CoreError::UndeclaredConstant(format!("q^({})", r)));
                    }
                }
                PowerExponent::Declared {
                    sigma_multiplier, ..
                } => sigma_multiplier.clone(),
            };
            let base = csub.scale(&mult);
            if log_power == 0 {
                return Ok(ClosedFormSolution::power_log(base, exponent.clone(), 0));
            }
            let l = match index {
                SigmaIndex::One => ctx.log_sigma.clone(),
                SigmaIndex::Two => ctx.log_sigma2.clone(),
            }
            .ok_or_else(|| CoreError::UndeclaredConstant("log(q)".into()))?;
            // binomial expansion of (log x + l)^j
            let mut out = Vec::new();
            let mut binom = BigRational::from_integer(1.into());
            for t in 0..=log_power {
                if t > 0 {
                    binom = binom
                        * BigRational::from_integer(((log_power - t + 1) as i64).into())
                        / BigRational::from_integer((t as i64).into());
                }
                let lpow = l.pow(t as i64)?;
                out.push(ClosedFormTerm::PowerLog {
                    coeff: base.scale(&lpow.scale(&binom)),
                    exponent: exponent.clone(),
                    log_power: log_power - t,
                });
            }
            Ok(ClosedFormSolution::from_terms(out))
        }
        (OperatorCase::Mahler { q }, SigmaIndex::One)
        | (OperatorCase::TwoMahler { q1: q, .. }, SigmaIndex::One)
        | (OperatorCase::TwoMahler { q2: q, .. }, SigmaIndex::Two) => {
            let r = exponent
                .as_rational()
                .ok_or(CoreError::IrrationalMahlerExponent)?;
            // coeff(x^q) * x^{q alpha} * (q log x)^j
            let csub = coeff.subst_pow(*q);
            let qi = BigRational::from_integer((*q as i64).into());
            let new_exp = PowerExponent::Rational(&r * &qi);
            let qj = ConstantScalar::from_rational(qi).pow(log_power as i64)?;
            Ok(ClosedFormSolution::power_log(
                csub.scale(&qj),
                new_exp,
                log_power,
            ))
        }
        _ => Err(CoreError::InvalidInput(
            "power-log terms only live in the dilation and Mahler cases".into(),
        )),
    }
}

/// Apply a scalar operator to a closed form; declared constants come from
/// the context as needed.
pub fn apply_operator_closed_form(
    op: &ScalarOperator,
    cf: &ClosedFormSolution,
    ctx: &ClosedFormCtx,
) -> Result<ClosedFormSolution> {
    let mut acc = ClosedFormSolution::zero();
    let mut cur = cf.clone();
    for (i, c) in op.coeffs().iter().enumerate() {
        if i > 0 {
            cur = match op.kind {
                OpKind::Delta => delta_closed_form(&op.case, &cur)?,
                OpKind::Sigma(idx) => sigma_closed_form(&op.case, idx, &cur, ctx)?,
            };
        }
        if !c.is_zero() {
            acc = acc.add(&cur.scale_ratfunc(c));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_merging() {
        let a = ClosedFormSolution::power_log(RatFunc::x(), PowerExponent::integer(0), 1);
        let b = ClosedFormSolution::power_log(RatFunc::x().neg(), PowerExponent::integer(0), 1);
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn delta_kills_log_squared_minus() {
        // delta = x d/dx on log(x): 1; so (delta - 0)^2 kills log x
        let case = OperatorCase::q_dilation(ConstantScalar::from_integer(2)).unwrap();
        let logx = ClosedFormSolution::power_log(RatFunc::one(), PowerExponent::integer(0), 1);
        let d1 = delta_closed_form(&case, &logx).unwrap();
        let d2 = delta_closed_form(&case, &d1).unwrap();
        assert!(d2.is_zero());
        assert!(!d1.is_zero());
    }

    #[test]
    fn mahler_sigma_on_power() {
        // sigma(x^{1/2}) = x^{3/2} for q = 3
        let case = OperatorCase::mahler(3).unwrap();
        let f = ClosedFormSolution::power_log(RatFunc::one(), PowerExponent::rational(1, 2), 0);
        let s = sigma_closed_form(&case, SigmaIndex::One, &f, &ClosedFormCtx::empty()).unwrap();
        assert_eq!(
            s,
            ClosedFormSolution::power_log(RatFunc::one(), PowerExponent::rational(3, 2), 0)
        );
    }

    #[test]
    fn dilation_sigma_needs_log_constant() {
        let case = OperatorCase::q_dilation(ConstantScalar::generator(0)).unwrap();
        let logx = ClosedFormSolution::power_log(RatFunc::one(), PowerExponent::integer(0), 1);
        assert!(matches!(
            sigma_closed_form(&case, SigmaIndex::One, &logx, &ClosedFormCtx::empty()),
            Err(CoreError::UndeclaredConstant(_))
        ));
        let l = ConstantScalar::generator(1);
        let s = sigma_closed_form(
            &case,
            SigmaIndex::One,
            &logx,
            &ClosedFormCtx::with_log_sigma(l.clone()),
        )
        .unwrap();
        // log(qx) = log x + l
        assert_eq!(
            s,
            ClosedFormSolution::from_terms(vec![
                ClosedFormTerm::PowerLog {
                    coeff: RatFunc::one(),
                    exponent: PowerExponent::integer(0),
                    log_power: 1
                },
                ClosedFormTerm::PowerLog {
                    coeff: RatFunc::constant(l),
                    exponent: PowerExponent::integer(0),
                    log_power: 0
                },
            ])
        );
    }

    #[test]
    fn shift_sigma_uses_declared_multiplier() {
        let c = ConstantScalar::generator(0); // stands for e^2
        let f = ClosedFormSolution::exponential(
            RatFunc::x(),
            ConstantScalar::from_integer(2),
            Some(c.clone()),
        );
        let s = sigma_closed_form(
            &OperatorCase::Shift,
            SigmaIndex::One,
            &f,
            &ClosedFormCtx::empty(),
        )
        .unwrap();
        // (x+1) * c * e^{2x}
        assert_eq!(
            s,
            ClosedFormSolution::exponential(
                crate::ratfunc::ratfunc(&[1, 1], &[1]).scale(&c),
                ConstantScalar::from_integer(2),
                Some(c)
            )
        );
    }
}
