//! Operator cases and scalar skew operators.
//!
//! A case fixes the pair (delta, sigma) acting on rational functions:
//! shift (delta = d/dx, sigma: x -> x+1), q-dilation (delta = x d/dx,
//! sigma: x -> qx) or Mahler (delta = x d/dx, sigma: x -> x^q), together
//! with the commutation constant mu in delta sigma = mu sigma delta; and the
//! two-sigma variants with a pair of shifts, dilations or Mahler operators.
//!
//! sigma is bijective on rational functions in the shift and dilation cases
//! but not in the Mahler case; operations that need the inverse reject the
//! Mahler cases with a dedicated error.

pub mod closed_form;

use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::ratfunc::RatFunc;
use crate::scalar::ConstantScalar;
use crate::series::{ExpansionPoint, PuiseuxSeries};

/// The operator case, carrying its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorCase {
    /// delta = d/dx, sigma(x) = x + 1, mu = 1.
    Shift,
    /// delta = x d/dx, sigma(x) = q x, mu = 1; q not zero and not a root of
    /// unity (symbolic q is assumed transcendental).
    QDilation { q: ConstantScalar },
    /// delta = x d/dx, sigma(x) = x^q, mu = q, integer q >= 2.
    Mahler { q: u32 },
    /// sigma1(x) = x + 1, sigma2(x) = x + alpha with irrational alpha.
    TwoShift { alpha: ConstantScalar },
    /// sigma_j(x) = q_j x with multiplicatively independent q_j.
    TwoQDilation { q1: ConstantScalar, q2: ConstantScalar },
    /// sigma_j(x) = x^{q_j} with multiplicatively independent integers >= 2.
    TwoMahler { q1: u32, q2: u32 },
}

/// Which sigma of a two-sigma case (single-sigma cases use `One`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaIndex {
    One,
    Two,
}

fn q_guard(q: &ConstantScalar) -> Result<()> {
    if let Some(r) = q.as_rational() {
        if r.is_zero() || r.abs().is_one() {
            return Err(CoreError::InvalidCase(format!(
                "q = {} is zero or a root of unity",
                r
            )));
        }
    }
    Ok(())
}

/// Prime exponent vector of a positive integer.
fn prime_exponents(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Multiplicative independence of positive integers, decided by comparing
/// prime-exponent vectors for proportionality.
pub fn multiplicatively_independent(a: u64, b: u64) -> bool {
    if a <= 1 || b <= 1 {
        return false;
    }
    let ea = prime_exponents(a);
    let eb = prime_exponents(b);
    let primes: Vec<u64> = {
        let mut ps: Vec<u64> = ea.iter().chain(eb.iter()).map(|&(p, _)| p).collect();
        ps.sort();
        ps.dedup();
        ps
    };
    let va: Vec<i64> = primes
        .iter()
        .map(|p| ea.iter().find(|&&(q, _)| q == *p).map(|&(_, e)| e as i64).unwrap_or(0))
        .collect();
    let vb: Vec<i64> = primes
        .iter()
        .map(|p| eb.iter().find(|&&(q, _)| q == *p).map(|&(_, e)| e as i64).unwrap_or(0))
        .collect();
    // dependent iff the vectors are proportional
    for i in 0..primes.len() {
        for j in (i + 1)..primes.len() {
            if va[i] * vb[j] != va[j] * vb[i] {
                return true;
            }
        }
    }
    false
}

impl OperatorCase {
    pub fn shift() -> Self {
        OperatorCase::Shift
    }

    pub fn q_dilation(q: ConstantScalar) -> Result<Self> {
        q_guard(&q)?;
        Ok(OperatorCase::QDilation { q })
    }

    pub fn mahler(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(CoreError::InvalidCase("Mahler exponent must be >= 2".into()));
        }
        Ok(OperatorCase::Mahler { q })
    }

    pub fn two_shift(alpha: ConstantScalar) -> Result<Self> {
        if alpha.as_rational().is_some() {
            return Err(CoreError::InvalidCase(
                "the second shift must be a symbolic (irrational) constant".into(),
            ));
        }
        Ok(OperatorCase::TwoShift { alpha })
    }

    pub fn two_q_dilation(q1: ConstantScalar, q2: ConstantScalar) -> Result<Self> {
        q_guard(&q1)?;
        q_guard(&q2)?;
        if let (Some(r1), Some(r2)) = (q1.as_rational(), q2.as_rational()) {
            // rational case: compare signed prime-exponent vectors of the
            // fractions; the sign itself is covered by the root-of-unity
            // guard above
            if !rational_mult_independent(&r1, &r2) {
                return Err(CoreError::InvalidCase(format!(
                    "q1 = {} and q2 = {} are multiplicatively dependent",
                    r1, r2
                )));
            }
        }
        Ok(OperatorCase::TwoQDilation { q1, q2 })
    }

    pub fn two_mahler(q1: u32, q2: u32) -> Result<Self> {
        if q1 < 2 || q2 < 2 {
            return Err(CoreError::InvalidCase("Mahler exponents must be >= 2".into()));
        }
        if !multiplicatively_independent(q1 as u64, q2 as u64) {
            return Err(CoreError::InvalidCase(format!(
                "{} and {} are multiplicatively dependent",
                q1, q2
            )));
        }
        Ok(OperatorCase::TwoMahler { q1, q2 })
    }

    pub fn is_two_sigma(&self) -> bool {
        matches!(
            self,
            OperatorCase::TwoShift { .. }
                | OperatorCase::TwoQDilation { .. }
                | OperatorCase::TwoMahler { .. }
        )
    }

    pub fn is_mahler_like(&self) -> bool {
        matches!(self, OperatorCase::Mahler { .. } | OperatorCase::TwoMahler { .. })
    }

    /// The commutation constant mu with delta sigma = mu sigma delta.
    pub fn mu(&self) -> Result<ConstantScalar> {
        match self {
            OperatorCase::Shift | OperatorCase::QDilation { .. } => Ok(ConstantScalar::one()),
            OperatorCase::Mahler { q } => Ok(ConstantScalar::from_integer(*q as i64)),
            _ => Err(CoreError::NoDerivation),
        }
    }

    /// Where series computations for this case live: at zero for dilation
    /// and Mahler operators, at infinity for shifts.
    pub fn expansion_point(&self) -> ExpansionPoint {
        match self {
            OperatorCase::Shift | OperatorCase::TwoShift { .. } => ExpansionPoint::Infinity,
            _ => ExpansionPoint::Zero,
        }
    }

    /// Apply sigma (index 1 or 2) to a rational function.
    pub fn sigma_of(&self, f: &RatFunc, index: SigmaIndex) -> Result<RatFunc> {
        match (self, index) {
            (OperatorCase::Shift, SigmaIndex::One) => Ok(f.subst_shift(&ConstantScalar::one())),
            (OperatorCase::QDilation { q }, SigmaIndex::One) => Ok(f.subst_scale(q)),
            (OperatorCase::Mahler { q }, SigmaIndex::One) => Ok(f.subst_pow(*q)),
            (OperatorCase::TwoShift { .. }, SigmaIndex::One) => {
                Ok(f.subst_shift(&ConstantScalar::one()))
            }
            (OperatorCase::TwoShift { alpha }, SigmaIndex::Two) => Ok(f.subst_shift(alpha)),
            (OperatorCase::TwoQDilation { q1, .. }, SigmaIndex::One) => Ok(f.subst_scale(q1)),
            (OperatorCase::TwoQDilation { q2, .. }, SigmaIndex::Two) => Ok(f.subst_scale(q2)),
            (OperatorCase::TwoMahler { q1, .. }, SigmaIndex::One) => Ok(f.subst_pow(*q1)),
            (OperatorCase::TwoMahler { q2, .. }, SigmaIndex::Two) => Ok(f.subst_pow(*q2)),
            (_, SigmaIndex::Two) => Err(CoreError::InvalidCase(
                "single-sigma case has no second sigma".into(),
            )),
        }
    }

    /// Apply the inverse of sigma when it exists (not in the Mahler cases).
    pub fn sigma_inverse_of(&self, f: &RatFunc, index: SigmaIndex) -> Result<RatFunc> {
        match (self, index) {
            (OperatorCase::Shift, SigmaIndex::One) => {
                Ok(f.subst_shift(&ConstantScalar::from_integer(-1)))
            }
            (OperatorCase::QDilation { q }, SigmaIndex::One) => Ok(f.subst_scale(&q.inv()?)),
            (OperatorCase::TwoShift { .. }, SigmaIndex::One) => {
                Ok(f.subst_shift(&ConstantScalar::from_integer(-1)))
            }
            (OperatorCase::TwoShift { alpha }, SigmaIndex::Two) => Ok(f.subst_shift(&alpha.neg())),
            (OperatorCase::TwoQDilation { q1, .. }, SigmaIndex::One) => {
                Ok(f.subst_scale(&q1.inv()?))
            }
            (OperatorCase::TwoQDilation { q2, .. }, SigmaIndex::Two) => {
                Ok(f.subst_scale(&q2.inv()?))
            }
            (OperatorCase::Mahler { .. }, _) | (OperatorCase::TwoMahler { .. }, _) => Err(
                CoreError::SigmaNotInvertible("x -> x^q has no rational inverse".into()),
            ),
            (_, SigmaIndex::Two) => Err(CoreError::InvalidCase(
                "single-sigma case has no second sigma".into(),
            )),
        }
    }

    /// Apply the case's derivation to a rational function.
    pub fn delta_of(&self, f: &RatFunc) -> Result<RatFunc> {
        match self {
            OperatorCase::Shift => Ok(f.derivative()),
            OperatorCase::QDilation { .. } | OperatorCase::Mahler { .. } => {
                Ok(f.euler_derivative())
            }
            _ => Err(CoreError::NoDerivation),
        }
    }

    /// Apply sigma to a truncated series in the case's local parameter
    /// (x at zero, or t = 1/x at infinity for shifts).
    pub fn sigma_of_series(&self, s: &PuiseuxSeries, index: SigmaIndex) -> Result<PuiseuxSeries> {
        match (self, index) {
            (OperatorCase::Shift, SigmaIndex::One)
            | (OperatorCase::TwoShift { .. }, SigmaIndex::One) => {
                shift_series(s, &ConstantScalar::one())
            }
            (OperatorCase::TwoShift { alpha }, SigmaIndex::Two) => shift_series(s, alpha),
            (OperatorCase::QDilation { q }, SigmaIndex::One) => s.subst_scale(q),
            (OperatorCase::TwoQDilation { q1, .. }, SigmaIndex::One) => s.subst_scale(q1),
            (OperatorCase::TwoQDilation { q2, .. }, SigmaIndex::Two) => s.subst_scale(q2),
            (OperatorCase::Mahler { q }, SigmaIndex::One) => Ok(s.subst_pow(*q)),
            (OperatorCase::TwoMahler { q1, .. }, SigmaIndex::One) => Ok(s.subst_pow(*q1)),
            (OperatorCase::TwoMahler { q2, .. }, SigmaIndex::Two) => Ok(s.subst_pow(*q2)),
            (_, SigmaIndex::Two) => Err(CoreError::InvalidCase(
                "single-sigma case has no second sigma".into(),
            )),
        }
    }

    /// Apply the derivation to a truncated series in the local parameter.
    pub fn delta_of_series(&self, s: &PuiseuxSeries) -> Result<PuiseuxSeries> {
        match self {
            // in t = 1/x: d/dx = -t^2 d/dt
            OperatorCase::Shift => {
                let d = s.derivative();
                Ok(d.mul_monomial_index(&ConstantScalar::from_integer(-1), 2 * d.ram() as i64))
            }
            OperatorCase::QDilation { .. } | OperatorCase::Mahler { .. } => {
                Ok(s.euler_derivative())
            }
            _ => Err(CoreError::NoDerivation),
        }
    }
}

/// sigma(x) = x + c on a series in t = 1/x: compose with t/(1 + c t).
fn shift_series(s: &PuiseuxSeries, c: &ConstantScalar) -> Result<PuiseuxSeries> {
    use crate::poly::Poly;
    let num = Poly::from_coeffs(vec![ConstantScalar::zero(), ConstantScalar::one()]);
    let den = Poly::from_coeffs(vec![ConstantScalar::one(), c.clone()]);
    let inner_rf = RatFunc::new(num, den)?;
    // expand enough terms of t/(1+ct)
    let inner = crate::series::expand_ratfunc(
        &inner_rf,
        ExpansionPoint::Zero,
        s.trunc().max(1),
        1,
    )?;
    s.compose(&inner)
}

fn rational_mult_independent(r1: &num_rational::BigRational, r2: &num_rational::BigRational) -> bool {
    // |q1|^a = |q2|^b only if the prime supports (numerator and denominator
    // together, with signed exponents) are proportional
    let exps = |r: &num_rational::BigRational| -> Option<Vec<(u64, i64)>> {
        let n = u64::try_from(r.numer().abs()).ok()?;
        let d = u64::try_from(r.denom().abs()).ok()?;
        let mut map: std::collections::BTreeMap<u64, i64> = std::collections::BTreeMap::new();
        for (p, e) in prime_exponents(n) {
            *map.entry(p).or_insert(0) += e as i64;
        }
        for (p, e) in prime_exponents(d) {
            *map.entry(p).or_insert(0) -= e as i64;
        }
        Some(map.into_iter().collect())
    };
    let (Some(v1), Some(v2)) = (exps(r1), exps(r2)) else {
        // too large to factor: conservatively accept
        return true;
    };
    let primes: Vec<u64> = {
        let mut ps: Vec<u64> = v1.iter().chain(v2.iter()).map(|&(p, _)| p).collect();
        ps.sort();
        ps.dedup();
        ps
    };
    let get = |v: &[(u64, i64)], p: u64| v.iter().find(|&&(q, _)| q == p).map(|&(_, e)| e).unwrap_or(0);
    for i in 0..primes.len() {
        for j in (i + 1)..primes.len() {
            let (a1, a2) = (get(&v1, primes[i]), get(&v1, primes[j]));
            let (b1, b2) = (get(&v2, primes[i]), get(&v2, primes[j]));
            if a1 * b2 != a2 * b1 {
                return true;
            }
        }
    }
    false
}

/// Kind of a scalar operator: a polynomial in delta, or in one sigma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpKind {
    Delta,
    Sigma(SigmaIndex),
}

/// Scalar skew operator sum coeffs[i] * op^i with rational function
/// coefficients; the leading coefficient is nonzero and the order is >= 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarOperator {
    pub case: OperatorCase,
    pub kind: OpKind,
    coeffs: Vec<RatFunc>,
}

impl ScalarOperator {
    pub fn new(case: OperatorCase, kind: OpKind, mut coeffs: Vec<RatFunc>) -> Result<Self> {
        while coeffs.last().map(|c| c.is_zero()) == Some(true) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(CoreError::InvalidInput(
                "operator order must be at least 1".into(),
            ));
        }
        if matches!(kind, OpKind::Delta) {
            case.mu()?; // rejects two-sigma cases
        }
        if matches!(kind, OpKind::Sigma(SigmaIndex::Two)) && !case.is_two_sigma() {
            return Err(CoreError::InvalidCase(
                "single-sigma case has no second sigma".into(),
            ));
        }
        Ok(ScalarOperator { case, kind, coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFunc {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn leading(&self) -> &RatFunc {
        self.coeffs.last().unwrap()
    }

    pub fn trailing(&self) -> &RatFunc {
        &self.coeffs[0]
    }

    /// Normalize to a monic leading coefficient.
    pub fn monic(&self) -> Self {
        let linv = self.leading().inv().expect("nonzero leading coefficient");
        ScalarOperator {
            case: self.case.clone(),
            kind: self.kind,
            coeffs: self.coeffs.iter().map(|c| c.mul(&linv)).collect(),
        }
    }

    /// Scale so coefficients are polynomials with no common factor.
    pub fn primitive(&self) -> Self {
        use crate::poly::Poly;
        let den = crate::ratfunc::common_denominator(&self.coeffs);
        let polys: Vec<Poly> = self
            .coeffs
            .iter()
            .map(|c| c.mul(&RatFunc::from_poly(den.clone())).num().clone())
            .collect();
        let mut g = Poly::zero();
        for p in &polys {
            if p.is_zero() {
                continue;
            }
            g = if g.is_zero() { p.clone() } else { Poly::gcd(&g, p) };
        }
        if g.is_zero() {
            g = Poly::one();
        }
        ScalarOperator {
            case: self.case.clone(),
            kind: self.kind,
            coeffs: polys
                .iter()
                .map(|p| RatFunc::from_poly(p.exact_div(&g).expect("gcd divides")))
                .collect(),
        }
    }

    /// The sigma index of a sigma-kind operator.
    pub fn sigma_index(&self) -> Option<SigmaIndex> {
        match self.kind {
            OpKind::Sigma(i) => Some(i),
            OpKind::Delta => None,
        }
    }

    /// Apply to a rational function, exactly.
    pub fn apply_ratfunc(&self, f: &RatFunc) -> Result<RatFunc> {
        let mut acc = RatFunc::zero();
        let mut cur = f.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                cur = match self.kind {
                    OpKind::Delta => self.case.delta_of(&cur)?,
                    OpKind::Sigma(idx) => self.case.sigma_of(&cur, idx)?,
                };
            }
            if !c.is_zero() {
                acc = acc.add(&c.mul(&cur));
            }
        }
        Ok(acc)
    }

    /// Apply to a truncated series in the case's local parameter. The
    /// truncation of the result is reported honestly and may shrink; an
    /// error is returned when no coefficient window survives.
    pub fn apply_series(&self, s: &PuiseuxSeries) -> Result<PuiseuxSeries> {
        let at = self.case.expansion_point();
        let mut acc: Option<PuiseuxSeries> = None;
        let mut cur = s.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                cur = match self.kind {
                    OpKind::Delta => self.case.delta_of_series(&cur)?,
                    OpKind::Sigma(idx) => self.case.sigma_of_series(&cur, idx)?,
                };
            }
            if c.is_zero() {
                continue;
            }
            let cs = crate::series::expand_ratfunc(c, at, cur.trunc().max(1) / cur.ram() as i64 + 1, 1)?;
            let term = cur.mul(&cs);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        let out = acc.expect("operator has nonzero coefficients");
        if !s.is_zero_to_order() && out.trunc() < out.valuation().map(|(v, _)| v).unwrap_or(out.trunc()) {
            return Err(CoreError::InsufficientOrder(
                "series too short for this operator".into(),
            ));
        }
        Ok(out)
    }

    /// Compose with the substitution operator sending f to (left of self)
    /// after multiplying the argument by p: returns self . M_p.
    pub fn compose_multiplication(&self, p: &RatFunc) -> Result<Self> {
        match self.kind {
            OpKind::Sigma(idx) => {
                // sigma^i . M_p = M_{sigma^i(p)} . sigma^i
                let mut coeffs = Vec::with_capacity(self.coeffs.len());
                let mut sp = p.clone();
                for (i, c) in self.coeffs.iter().enumerate() {
                    if i > 0 {
                        sp = self.case.sigma_of(&sp, idx)?;
                    }
                    coeffs.push(c.mul(&sp));
                }
                ScalarOperator::new(self.case.clone(), self.kind, coeffs)
            }
            OpKind::Delta => {
                // delta^i . M_p = sum_j binom(i, j) M_{delta^{i-j}(p)} delta^j
                let n = self.order();
                let mut dp = vec![p.clone()];
                for _ in 0..n {
                    dp.push(self.case.delta_of(dp.last().unwrap())?);
                }
                let mut coeffs = vec![RatFunc::zero(); n + 1];
                for (i, c) in self.coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut binom = BigInt::one();
                    for j in 0..=i {
                        if j > 0 {
                            binom = &binom * BigInt::from((i - j + 1) as i64) / BigInt::from(j as i64);
                        }
                        let b = ConstantScalar::from_rational(num_rational::BigRational::from_integer(
                            binom.clone(),
                        ));
                        coeffs[j] = coeffs[j].add(&c.mul(&dp[i - j]).scale(&b));
                    }
                }
                ScalarOperator::new(self.case.clone(), self.kind, coeffs)
            }
        }
    }
}

/// Witness of the commutation check delta(sigma(f)) = mu sigma(delta(f)).
#[derive(Clone, Debug)]
pub struct CommutationWitness {
    pub mu: ConstantScalar,
    pub lhs: RatFunc,
    pub rhs: RatFunc,
}

/// Check delta sigma = mu sigma delta on a concrete rational function; a
/// mismatch is an internal wiring bug, not a user error.
pub fn check_commutation(case: &OperatorCase, f: &RatFunc) -> Result<CommutationWitness> {
    let mu = case.mu()?;
    let lhs = case.delta_of(&case.sigma_of(f, SigmaIndex::One)?)?;
    let rhs = case
        .sigma_of(&case.delta_of(f)?, SigmaIndex::One)?
        .scale(&mu);
    if lhs != rhs {
        return Err(CoreError::Internal(format!(
            "commutation check failed: {} vs {}",
            lhs, rhs
        )));
    }
    Ok(CommutationWitness { mu, lhs, rhs })
}

/// Turn an inhomogeneous equation op(f) = rhs into a homogeneous operator of
/// order one higher annihilating every such f. For sigma-kind operators this
/// is sigma(rhs) * op - rhs * (sigma . op); for delta-kind it is
/// (rhs * delta - delta(rhs)) . op. The result is normalized monic.
pub fn homogenize(op: &ScalarOperator, rhs: &RatFunc) -> Result<ScalarOperator> {
    if rhs.is_zero() {
        return Err(CoreError::AlreadyHomogeneous);
    }
    match op.kind {
        OpKind::Sigma(idx) => {
            let srhs = op.case.sigma_of(rhs, idx)?;
            // sigma . op = sum sigma(c_i) sigma^{i+1}
            let mut shifted = vec![RatFunc::zero()];
            for c in op.coeffs() {
                shifted.push(op.case.sigma_of(c, idx)?);
            }
            let mut coeffs = Vec::with_capacity(shifted.len());
            for i in 0..shifted.len() {
                let a = op.coeff(i).mul(&srhs);
                let b = shifted[i].mul(rhs);
                coeffs.push(a.sub(&b));
            }
            Ok(ScalarOperator::new(op.case.clone(), op.kind, coeffs)?.monic())
        }
        OpKind::Delta => {
            let drhs = op.case.delta_of(rhs)?;
            // (rhs * delta - delta(rhs)) . op
            let mut coeffs = vec![RatFunc::zero(); op.order() + 2];
            for (i, c) in op.coeffs().iter().enumerate() {
                // rhs * delta . c delta^i = rhs delta(c) delta^i + rhs c delta^{i+1}
                coeffs[i] = coeffs[i].add(&rhs.mul(&op.case.delta_of(c)?));
                coeffs[i + 1] = coeffs[i + 1].add(&rhs.mul(c));
                coeffs[i] = coeffs[i].sub(&drhs.mul(c));
            }
            Ok(ScalarOperator::new(op.case.clone(), op.kind, coeffs)?.monic())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::ratfunc;

    fn case_q2() -> OperatorCase {
        OperatorCase::q_dilation(ConstantScalar::from_integer(2)).unwrap()
    }

    fn case_q_sym() -> OperatorCase {
        OperatorCase::q_dilation(ConstantScalar::generator(0)).unwrap()
    }

    #[test]
    fn sigma_actions() {
        // case S: x^2 -> (x+1)^2
        let f = ratfunc(&[0, 0, 1], &[1]);
        assert_eq!(
            OperatorCase::Shift.sigma_of(&f, SigmaIndex::One).unwrap(),
            ratfunc(&[1, 2, 1], &[1])
        );
        // case Q: 1/(1-x) -> 1/(1-qx)
        let g = ratfunc(&[1], &[1, -1]);
        let q = ConstantScalar::generator(0);
        let expect = RatFunc::new(
            crate::poly::Poly::one(),
            crate::poly::Poly::from_coeffs(vec![ConstantScalar::one(), q.neg()]),
        )
        .unwrap();
        assert_eq!(case_q_sym().sigma_of(&g, SigmaIndex::One).unwrap(), expect);
        // case M q=2: x/(1+x) -> x^2/(1+x^2)
        let h = ratfunc(&[0, 1], &[1, 1]);
        assert_eq!(
            OperatorCase::mahler(2).unwrap().sigma_of(&h, SigmaIndex::One).unwrap(),
            ratfunc(&[0, 0, 1], &[1, 0, 1])
        );
    }

    #[test]
    fn delta_actions() {
        // case Q: x^3 -> 3x^3
        let f = ratfunc(&[0, 0, 0, 1], &[1]);
        assert_eq!(
            case_q2().delta_of(&f).unwrap(),
            ratfunc(&[0, 0, 0, 3], &[1])
        );
        // case S: x^3 -> 3x^2
        assert_eq!(
            OperatorCase::Shift.delta_of(&f).unwrap(),
            ratfunc(&[0, 0, 3], &[1])
        );
        // case M: 1/(1-x) -> x/(1-x)^2 by the quotient rule
        let g = ratfunc(&[1], &[1, -1]);
        assert_eq!(
            OperatorCase::mahler(2).unwrap().delta_of(&g).unwrap(),
            ratfunc(&[0, 1], &[1, -2, 1])
        );
        // two-sigma cases have no derivation
        let c2m = OperatorCase::two_mahler(2, 3).unwrap();
        assert!(matches!(c2m.delta_of(&f), Err(CoreError::NoDerivation)));
    }

    #[test]
    fn commutation_witnesses() {
        // case S, f = x^2: both sides 2x + 2
        let w = check_commutation(&OperatorCase::Shift, &ratfunc(&[0, 0, 1], &[1])).unwrap();
        assert!(w.mu.is_one());
        assert_eq!(w.lhs, ratfunc(&[2, 2], &[1]));
        // case Q, f = x^3: both sides 3 q^3 x^3
        let w = check_commutation(&case_q_sym(), &ratfunc(&[0, 0, 0, 1], &[1])).unwrap();
        let q3 = ConstantScalar::generator(0).pow(3).unwrap();
        assert_eq!(
            w.lhs,
            RatFunc::from_poly(crate::poly::Poly::monomial(
                q3.scale(&num_rational::BigRational::from_integer(3.into())),
                3
            ))
        );
        // case M q=2, f = x: delta(sigma x) = 2x^2 = mu * sigma(delta x)
        let w = check_commutation(&OperatorCase::mahler(2).unwrap(), &RatFunc::x()).unwrap();
        assert_eq!(w.mu, ConstantScalar::from_integer(2));
        assert_eq!(w.lhs, ratfunc(&[0, 0, 2], &[1]));
    }

    #[test]
    fn mult_independence() {
        assert!(multiplicatively_independent(2, 3));
        assert!(multiplicatively_independent(2, 6));
        assert!(!multiplicatively_independent(2, 4));
        assert!(!multiplicatively_independent(4, 8));
        assert!(!multiplicatively_independent(6, 36));
        assert!(multiplicatively_independent(12, 18));
        assert!(OperatorCase::two_mahler(2, 4).is_err());
        assert!(OperatorCase::two_mahler(2, 3).is_ok());
    }

    #[test]
    fn case_guards() {
        assert!(OperatorCase::q_dilation(ConstantScalar::from_integer(1)).is_err());
        assert!(OperatorCase::q_dilation(ConstantScalar::from_integer(-1)).is_err());
        assert!(OperatorCase::q_dilation(ConstantScalar::from_integer(0)).is_err());
        assert!(OperatorCase::q_dilation(ConstantScalar::from_integer(3)).is_ok());
        assert!(OperatorCase::two_shift(ConstantScalar::from_ratio(1, 2)).is_err());
        assert!(OperatorCase::two_shift(ConstantScalar::generator(0)).is_ok());
    }

    #[test]
    fn apply_operator_to_series() {
        use crate::series::expand_ratfunc;
        // op = delta - 1 (case Q) annihilates x
        let case = case_q_sym();
        let op = ScalarOperator::new(
            case.clone(),
            OpKind::Delta,
            vec![RatFunc::from_i64(-1), RatFunc::one()],
        )
        .unwrap();
        let s = expand_ratfunc(&RatFunc::x(), ExpansionPoint::Zero, 10, 1).unwrap();
        assert!(op.apply_series(&s).unwrap().is_zero_to_order());
        // op = sigma - q (case Q) annihilates x
        let op = ScalarOperator::new(
            case.clone(),
            OpKind::Sigma(SigmaIndex::One),
            vec![
                RatFunc::constant(ConstantScalar::generator(0).neg()),
                RatFunc::one(),
            ],
        )
        .unwrap();
        assert!(op.apply_series(&s).unwrap().is_zero_to_order());
        // op = sigma^2 - (1+x) sigma + x (case M q=2) annihilates the
        // powers-of-two indicator to the stated order
        let case = OperatorCase::mahler(2).unwrap();
        let op = ScalarOperator::new(
            case,
            OpKind::Sigma(SigmaIndex::One),
            vec![RatFunc::x(), ratfunc(&[-1, -1], &[1]), RatFunc::one()],
        )
        .unwrap();
        let mut coeffs = vec![ConstantScalar::zero(); 17];
        for k in [1usize, 2, 4, 8, 16] {
            coeffs[k] = ConstantScalar::one();
        }
        let s = PuiseuxSeries::new(1, 0, coeffs, 16);
        let out = op.apply_series(&s).unwrap();
        assert!(out.is_zero_to_order());
        assert!(out.trunc() >= 16);
    }

    #[test]
    fn homogenize_examples() {
        // op = sigma - 1 (case M q=2), rhs = -x: sigma^2 - (1+x) sigma + x
        let case = OperatorCase::mahler(2).unwrap();
        let op = ScalarOperator::new(
            case.clone(),
            OpKind::Sigma(SigmaIndex::One),
            vec![RatFunc::from_i64(-1), RatFunc::one()],
        )
        .unwrap();
        let h = homogenize(&op, &RatFunc::x().neg()).unwrap();
        assert_eq!(h.coeffs(), &[RatFunc::x(), ratfunc(&[-1, -1], &[1]), RatFunc::one()]);

        // op = delta (case S), rhs = 1 -> delta^2
        let op = ScalarOperator::new(
            OperatorCase::Shift,
            OpKind::Delta,
            vec![RatFunc::zero(), RatFunc::one()],
        )
        .unwrap();
        let h = homogenize(&op, &RatFunc::one()).unwrap();
        assert_eq!(h.coeffs(), &[RatFunc::zero(), RatFunc::zero(), RatFunc::one()]);

        // op = sigma - 1 (case S), rhs = 1 -> (sigma - 1)^2
        let op = ScalarOperator::new(
            OperatorCase::Shift,
            OpKind::Sigma(SigmaIndex::One),
            vec![RatFunc::from_i64(-1), RatFunc::one()],
        )
        .unwrap();
        let h = homogenize(&op, &RatFunc::one()).unwrap();
        assert_eq!(
            h.coeffs(),
            &[RatFunc::one(), RatFunc::from_i64(-2), RatFunc::one()]
        );

        // rhs = 0 is already homogeneous
        assert!(matches!(
            homogenize(&op, &RatFunc::zero()),
            Err(CoreError::AlreadyHomogeneous)
        ));
    }

    #[test]
    fn homogenized_operator_annihilates() {
        // f with (sigma - 1) f = -x in case M q = 2 is the powers-of-two
        // series; the homogenized operator kills it
        let case = OperatorCase::mahler(2).unwrap();
        let op = ScalarOperator::new(
            case,
            OpKind::Sigma(SigmaIndex::One),
            vec![RatFunc::from_i64(-1), RatFunc::one()],
        )
        .unwrap();
        let h = homogenize(&op, &RatFunc::x().neg()).unwrap();
        let mut coeffs = vec![ConstantScalar::zero(); 33];
        let mut k = 1usize;
        while k <= 32 {
            coeffs[k] = ConstantScalar::one();
            k *= 2;
        }
        let s = PuiseuxSeries::new(1, 0, coeffs, 32);
        assert!(h.apply_series(&s).unwrap().is_zero_to_order());
    }

    #[test]
    fn sigma_field_endomorphism() {
        let case = OperatorCase::mahler(3).unwrap();
        let f = ratfunc(&[1, 2], &[1, 0, 1]);
        let g = ratfunc(&[0, 5], &[3, 1]);
        let sf = case.sigma_of(&f, SigmaIndex::One).unwrap();
        let sg = case.sigma_of(&g, SigmaIndex::One).unwrap();
        assert_eq!(
            case.sigma_of(&f.mul(&g), SigmaIndex::One).unwrap(),
            sf.mul(&sg)
        );
        assert_eq!(
            case.sigma_of(&f.add(&g), SigmaIndex::One).unwrap(),
            sf.add(&sg)
        );
    }
}
