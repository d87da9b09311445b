//! Rational functions in x over the constants field, kept in lowest terms
//! with a monic denominator.


use crate::error::{CoreError, Result};
use crate::poly::Poly;
use crate::scalar::ConstantScalar;

/// Rational function num/den with gcd(num, den) = 1 and monic den.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Canonicalize a fraction of polynomials. Rejects a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(CoreError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = Poly::gcd(&num, &den);
        let mut num = num.exact_div(&g)?;
        let mut den = den.exact_div(&g)?;
        let lc = den.leading_coeff().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.inv()?;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: ConstantScalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(ConstantScalar::from_integer(n))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn as_scalar(&self) -> Option<ConstantScalar> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    pub fn scale(&self, c: &ConstantScalar) -> Self {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// d/dx by the quotient rule.
    pub fn derivative(&self) -> Self {
        RatFunc::new(
            self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
        .expect("nonzero denominator")
    }

    /// x * d/dx.
    pub fn euler_derivative(&self) -> Self {
        self.derivative().mul(&Self::x())
    }

    /// Substitute x -> x + c.
    pub fn subst_shift(&self, c: &ConstantScalar) -> Self {
        RatFunc::new(self.num.subst_shift(c), self.den.subst_shift(c)).expect("nonzero denominator")
    }

    /// Substitute x -> c*x; c must be nonzero.
    pub fn subst_scale(&self, c: &ConstantScalar) -> Self {
        RatFunc::new(self.num.subst_scale(c), self.den.subst_scale(c)).expect("nonzero denominator")
    }

    /// Substitute x -> x^p, p >= 1.
    pub fn subst_pow(&self, p: u32) -> Self {
        RatFunc::new(self.num.subst_pow(p), self.den.subst_pow(p)).expect("nonzero denominator")
    }

    /// Substitute x -> c * x^k with integer k (possibly negative), c nonzero.
    pub fn subst_monomial(&self, c: &ConstantScalar, k: i64) -> Result<Self> {
        if c.is_zero() {
            return Err(CoreError::InvalidInput("zero substitution constant".into()));
        }
        if k == 0 {
            // evaluates to a constant c
            let v = self.eval(c)?;
            return Ok(RatFunc::constant(v));
        }
        let sub_num = |p: &Poly| -> (Poly, usize) {
            // p(c*x^|k|), with negative k handled by x -> 1/x followed by
            // clearing x powers; returns (poly, cleared power)
            let d = p.degree().unwrap_or(0);
            let mut coeffs = vec![ConstantScalar::zero(); d * (k.unsigned_abs() as usize) + 1];
            let mut cp = ConstantScalar::one();
            for (i, a) in p.coeffs().iter().enumerate() {
                let pos = i * k.unsigned_abs() as usize;
                let idx = if k > 0 { pos } else { d * k.unsigned_abs() as usize - pos };
                coeffs[idx] = coeffs[idx].add(&a.mul(&cp));
                cp = cp.mul(c);
            }
            (Poly::from_coeffs(coeffs), if k > 0 { 0 } else { d * k.unsigned_abs() as usize })
        };
        let (n, sn) = sub_num(&self.num);
        let (d, sd) = sub_num(&self.den);
        // result = n * x^{-sn} / (d * x^{-sd}) = n * x^{sd} / (d * x^{sn})
        RatFunc::new(n.shift(sd), d.shift(sn))
    }

    /// Evaluate at a scalar point; errors when the point is a pole.
    pub fn eval(&self, x: &ConstantScalar) -> Result<ConstantScalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        self.num.eval(x).div(&d)
    }

    /// Valuation at x = 0 (order of zero, negative for a pole); `None` for 0.
    pub fn valuation_at_zero(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        let vd = self.den.valuation().expect("nonzero denominator") as i64;
        Some(vn - vd)
    }

    /// Degree at infinity: deg num - deg den; `None` for 0.
    pub fn degree_at_infinity(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap() as i64)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.render(names);
        }
        let n = self.num.render(names);
        let d = self.den.render(names);
        let wrap = |s: String| {
            if s.contains('+') || s.contains(' ') || s.contains('*') {
                format!("({})", s)
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n), wrap(d))
    }
}

impl std::fmt::Display for RatFunc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

/// Convenience: p(x)/q(x) from integer coefficient slices.
pub fn ratfunc(num: &[i64], den: &[i64]) -> RatFunc {
    RatFunc::new(Poly::from_i64(num), Poly::from_i64(den)).expect("nonzero denominator")
}

/// Least common multiple of denominators of a list of rational functions.
pub fn common_denominator(fs: &[RatFunc]) -> Poly {
    let mut lcm = Poly::one();
    for f in fs {
        let g = Poly::gcd(&lcm, f.den());
        lcm = lcm.mul(&f.den().exact_div(&g).expect("gcd divides"));
    }
    lcm.monic()
}
