//! The represented constants field: rational expressions in x-free symbolic
//! generators with exact rational coefficients.
//!
//! [`ConstantScalar`] is a fraction of multivariate polynomials kept in
//! canonical form (coprime, denominator with leading coefficient one in a
//! deterministic monomial order), so equality is decidable by structural
//! comparison and a zero denominator is unrepresentable.
//!
//! The field is *not* algebraically closed: operations that need eigenvalues
//! work only when the relevant characteristic polynomial splits over this
//! field and report an error otherwise.

pub mod mpoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{CoreError, Result};
use mpoly::MPoly;

/// Element of the constants field Q(g_0, ..., g_{k-1}).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstantScalar {
    num: MPoly,
    den: MPoly,
}

impl ConstantScalar {
    fn normalized(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(CoreError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(ConstantScalar {
                num: MPoly::zero(),
                den: MPoly::one(),
            });
        }
        let g = MPoly::gcd(&num, &den);
        let mut num = num.exact_div(&g).expect("gcd divides");
        let mut den = den.exact_div(&g).expect("gcd divides");
        let lc = den.leading().expect("nonzero").1.clone();
        if !lc.is_one() {
            let inv = BigRational::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(ConstantScalar { num, den })
    }

    pub fn from_fraction(num: MPoly, den: MPoly) -> Result<Self> {
        Self::normalized(num, den)
    }

    pub fn from_mpoly(p: MPoly) -> Self {
        ConstantScalar {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_mpoly(MPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_mpoly(MPoly::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_mpoly(MPoly::constant(BigRational::from_integer(n.into())))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_mpoly(MPoly::constant(r))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self::from_rational(BigRational::new(p.into(), q.into()))
    }

    /// The `idx`-th symbolic generator.
    pub fn generator(idx: usize) -> Self {
        Self::from_mpoly(MPoly::generator(idx))
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == MPoly::one() && self.den == MPoly::one()
    }

    /// True when no symbolic generator occurs.
    pub fn is_rational(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value as a rational number, when generator-free.
    pub fn as_rational(&self) -> Option<BigRational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        let r = self.as_rational()?;
        if r.denom().abs() == BigInt::one() {
            Some(r.numer().clone() * r.denom().signum())
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ConstantScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        Self::normalized(self.den.clone(), self.num.clone())
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

    /// Multiply by a plain rational.
    pub fn scale(&self, c: &BigRational) -> Self {
        self.mul(&Self::from_rational(c.clone()))
    }

    /// Render with generator names.
    pub fn render(&self, names: &[String]) -> String {
        if self.den == MPoly::one() {
            if self.num.num_terms() > 1 {
                return self.num.render(names);
            }
            return self.num.render(names);
        }
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num.render(names))
        } else {
            self.num.render(names)
        };
        let den = if self.den.num_terms() > 1 {
            format!("({})", self.den.render(names))
        } else {
            self.den.render(names)
        };
        format!("{}/{}", num, den)
    }
}

impl std::fmt::Display for ConstantScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

/// Name table for the declared symbolic generators of a computation.
///
/// The scalar values themselves only hold generator indices; this table maps
/// them to names at the parse/print boundary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstantField {
    names: Vec<String>,
}

impl ConstantField {
    pub fn new(names: &[&str]) -> Self {
        ConstantField {
            names: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn from_names(names: Vec<String>) -> Self {
        ConstantField { names }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Generator by name, declaring it if new.
    pub fn declare(&mut self, name: &str) -> ConstantScalar {
        if let Some(i) = self.index_of(name) {
            return ConstantScalar::generator(i);
        }
        self.names.push(name.to_string());
        ConstantScalar::generator(self.names.len() - 1)
    }

    pub fn get(&self, name: &str) -> Option<ConstantScalar> {
        self.index_of(name).map(ConstantScalar::generator)
    }

    pub fn render(&self, c: &ConstantScalar) -> String {
        c.render(&self.names)
    }
}
