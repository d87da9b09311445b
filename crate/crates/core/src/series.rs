//! Truncated Laurent/Puiseux series with explicit ramification.
//!
//! A [`PuiseuxSeries`] stores coefficients for the exponents
//! `val/ram, (val+1)/ram, ..., trunc/ram`; everything beyond `trunc/ram` is
//! unknown. Arithmetic tracks the truncation honestly: results carry the
//! minimum order their inputs support. Binary operations align ramifications
//! by lcm, and [`PuiseuxSeries::compact`] reduces the ramification when all
//! stored exponents share a factor.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::scalar::ConstantScalar;

/// Default truncation order used by series consumers when none is given.
pub const DEFAULT_ORDER: i64 = 64;

/// Truncated Puiseux series: coefficients for exponents `(val..=trunc)/ram`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    ram: u32,
    val: i64,
    coeffs: Vec<ConstantScalar>,
    trunc: i64,
}

impl PuiseuxSeries {
    fn normalize(mut self) -> Self {
        while let Some(first) = self.coeffs.first() {
            if first.is_zero() {
                self.coeffs.remove(0);
                self.val += 1;
            } else {
                break;
            }
        }
        if self.coeffs.is_empty() {
            self.val = self.trunc + 1;
        } else {
            let want = (self.trunc - self.val + 1).max(0) as usize;
            self.coeffs.truncate(want);
            while self.coeffs.len() < want {
                self.coeffs.push(ConstantScalar::zero());
            }
            if want == 0 {
                self.coeffs.clear();
                self.val = self.trunc + 1;
            }
        }
        self
    }

    pub fn new(ram: u32, val: i64, coeffs: Vec<ConstantScalar>, trunc: i64) -> Self {
        assert!(ram >= 1, "ramification must be at least 1");
        PuiseuxSeries {
            ram,
            val,
            coeffs,
            trunc,
        }
        .normalize()
    }

    /// Zero up to the given order.
    pub fn zero(trunc: i64) -> Self {
        PuiseuxSeries {
            ram: 1,
            val: trunc + 1,
            coeffs: Vec::new(),
            trunc,
        }
    }

    pub fn one(trunc: i64) -> Self {
        Self::monomial(ConstantScalar::one(), 0, 1, trunc)
    }

    /// c * x^{k/ram}, known to order trunc (in units of 1/ram).
    pub fn monomial(c: ConstantScalar, k: i64, ram: u32, trunc: i64) -> Self {
        Self::new(ram, k, vec![c], trunc)
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    /// Index of the last known exponent (the series is known modulo
    /// x^{(trunc+1)/ram}).
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero_to_order(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Valuation as (index, ram); `None` when zero to order.
    pub fn valuation(&self) -> Option<(i64, u32)> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some((self.val, self.ram))
        }
    }

    pub fn valuation_rational(&self) -> Option<BigRational> {
        self.valuation()
            .map(|(v, r)| BigRational::new(v.into(), (r as i64).into()))
    }

    /// Coefficient of x^{k/ram}.
    pub fn coeff_index(&self, k: i64) -> ConstantScalar {
        if k < self.val {
            return ConstantScalar::zero();
        }
        self.coeffs
            .get((k - self.val) as usize)
            .cloned()
            .unwrap_or_else(ConstantScalar::zero)
    }

    /// Coefficient of x^e for a rational exponent e.
    pub fn coeff_exponent(&self, e: &BigRational) -> ConstantScalar {
        let scaled = e * BigRational::from_integer((self.ram as i64).into());
        if !scaled.denom().abs().is_one() {
            return ConstantScalar::zero();
        }
        let k = scaled.to_integer();
        let k: i64 = match i64::try_from(k) {
            Ok(v) => v,
            Err(_) => return ConstantScalar::zero(),
        };
        self.coeff_index(k)
    }

    /// Indices (over ram) of the known nonzero coefficients.
    pub fn support(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.val + i as i64)
            .collect()
    }

    /// Exponents of the known nonzero coefficients, as rationals.
    pub fn support_exponents(&self) -> Vec<BigRational> {
        self.support()
            .into_iter()
            .map(|k| BigRational::new(k.into(), (self.ram as i64).into()))
            .collect()
    }

    /// Re-express with ramification `new_ram` (a multiple of the current).
    pub fn with_ram(&self, new_ram: u32) -> Self {
        assert!(new_ram % self.ram == 0, "ramification must refine");
        let f = (new_ram / self.ram) as i64;
        if f == 1 {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * f as usize);
        for c in &self.coeffs {
            coeffs.push(c.clone());
            for _ in 1..f {
                coeffs.push(ConstantScalar::zero());
            }
        }
        // known through trunc/ram = (trunc*f)/(ram*f); intermediate new-grid
        // slots up to that exponent are known to be zero
        PuiseuxSeries {
            ram: new_ram,
            val: self.val * f,
            coeffs,
            trunc: self.trunc * f + (f - 1),
        }
        .normalize()
    }

    /// Reduce the ramification when every stored exponent allows it.
    pub fn compact(&self) -> Self {
        if self.ram == 1 {
            return self.clone();
        }
        if self.support().is_empty() {
            return PuiseuxSeries::zero(self.trunc.div_euclid(self.ram as i64));
        }
        let mut g = self.ram as i64;
        for k in self.support() {
            g = g.gcd(&k);
            if g == 1 {
                return self.clone();
            }
        }
        let new_ram = (self.ram as i64 / g) as u32;
        let first = self.support()[0];
        let mut coeffs = Vec::new();
        let mut k = first;
        while k <= self.trunc {
            coeffs.push(self.coeff_index(k));
            k += g;
        }
        PuiseuxSeries {
            ram: new_ram,
            val: first / g,
            coeffs,
            trunc: self.trunc.div_euclid(g),
        }
        .normalize()
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let r = (self.ram as i64).lcm(&(other.ram as i64)) as u32;
        (self.with_ram(r), other.with_ram(r))
    }

    pub fn truncate_to(&self, trunc: i64) -> Self {
        let mut s = self.clone();
        if trunc < s.trunc {
            s.trunc = trunc;
        }
        s.normalize()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let trunc = a.trunc.min(b.trunc);
        let val = a.val.min(b.val).min(trunc + 1);
        let mut coeffs = Vec::new();
        for k in val..=trunc {
            coeffs.push(a.coeff_index(k).add(&b.coeff_index(k)));
        }
        PuiseuxSeries {
            ram: a.ram,
            val,
            coeffs,
            trunc,
        }
        .normalize()
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            ram: self.ram,
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ConstantScalar) -> Self {
        if c.is_zero() {
            return PuiseuxSeries::zero(self.trunc);
        }
        PuiseuxSeries {
            ram: self.ram,
            val: self.val,
            coeffs: self.coeffs.iter().map(|k| k.mul(c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiply by c * x^{k/ram_of_self}.
    pub fn mul_monomial_index(&self, c: &ConstantScalar, k: i64) -> Self {
        if c.is_zero() {
            return PuiseuxSeries::zero(self.trunc + k);
        }
        PuiseuxSeries {
            ram: self.ram,
            val: self.val + k,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            trunc: self.trunc + k,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let va = a.val;
        let vb = b.val;
        let trunc = (a.trunc + vb).min(b.trunc + va);
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            let mut z = PuiseuxSeries::zero(trunc);
            z.ram = a.ram;
            return z;
        }
        let n = (trunc - (va + vb) + 1).max(0) as usize;
        let mut coeffs = vec![ConstantScalar::zero(); n];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() || i >= n {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= n {
                    break;
                }
                if cb.is_zero() {
                    continue;
                }
                coeffs[k] = coeffs[k].add(&ca.mul(cb));
            }
        }
        PuiseuxSeries {
            ram: a.ram,
            val: va + vb,
            coeffs,
            trunc,
        }
        .normalize()
    }

    /// Multiplicative inverse; the leading coefficient must be known and
    /// nonzero.
    pub fn inv(&self) -> Result<Self> {
        let (v, _) = self.valuation().ok_or_else(|| {
            CoreError::InsufficientOrder("cannot invert a series that is zero to order".into())
        })?;
        let c0 = self.coeffs[0].inv()?;
        let rel = (self.trunc - v) as usize;
        // standard power-series inversion on the unit part
        let mut b = vec![ConstantScalar::zero(); rel + 1];
        b[0] = c0.clone();
        for k in 1..=rel {
            let mut acc = ConstantScalar::zero();
            for j in 1..=k {
                let a_j = &self.coeffs[j];
                if a_j.is_zero() {
                    continue;
                }
                acc = acc.add(&a_j.mul(&b[k - j]));
            }
            b[k] = acc.neg().mul(&c0);
        }
        Ok(PuiseuxSeries {
            ram: self.ram,
            val: -v,
            coeffs: b,
            trunc: self.trunc - 2 * v,
        }
        .normalize())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Substitute x -> x^p (p >= 1): exponents scale by p and so does the
    /// known order.
    pub fn subst_pow(&self, p: u32) -> Self {
        assert!(p >= 1);
        let p = p as i64;
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                for _ in 0..(p - 1) {
                    coeffs.push(ConstantScalar::zero());
                }
            }
            coeffs.push(c.clone());
        }
        PuiseuxSeries {
            ram: self.ram,
            val: self.val * p,
            coeffs,
            trunc: self.trunc * p + (p - 1),
        }
        .normalize()
    }

    /// Substitute x -> c*x (c nonzero). Requires ramification 1 so that
    /// integer powers of c suffice.
    pub fn subst_scale(&self, c: &ConstantScalar) -> Result<Self> {
        if self.ram != 1 {
            return Err(CoreError::BadRamification(
                self.ram,
                "x -> c*x substitution needs integer exponents".into(),
            ));
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, a) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            coeffs.push(a.mul(&c.pow(e)?));
        }
        Ok(PuiseuxSeries {
            ram: 1,
            val: self.val,
            coeffs,
            trunc: self.trunc,
        }
        .normalize())
    }

    /// Compose with an inner series of valuation >= 1 (both ramification 1).
    /// Negative powers of x map to powers of the inverse of the inner series.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.ram != 1 || inner.ram != 1 {
            return Err(CoreError::BadRamification(
                self.ram.max(inner.ram),
                "composition needs integer exponents".into(),
            ));
        }
        let (iv, _) = inner
            .valuation()
            .ok_or_else(|| CoreError::InsufficientOrder("inner series zero to order".into()))?;
        if iv < 1 {
            return Err(CoreError::InvalidInput(
                "composition needs inner valuation >= 1".into(),
            ));
        }
        let trunc = self.trunc.min(inner.trunc);
        let mut out = PuiseuxSeries::zero(trunc);
        if self.coeffs.is_empty() {
            return Ok(out);
        }
        // positive part by Horner, negative part via inner^{-1}
        if self.trunc >= 0 {
            let mut pos = PuiseuxSeries::zero(trunc);
            for k in (0..=self.trunc).rev() {
                pos = pos.mul(inner).truncate_to(trunc).add(&PuiseuxSeries::monomial(
                    self.coeff_index(k),
                    0,
                    1,
                    trunc,
                ));
            }
            out = out.add(&pos);
        }
        if self.val < 0 {
            let inv = inner.inv()?;
            let mut p = inv.clone();
            for k in 1..=(-self.val) {
                let c = self.coeff_index(-k);
                if !c.is_zero() {
                    out = out.add(&p.scale(&c));
                }
                if k < -self.val {
                    p = p.mul(&inv);
                }
            }
        }
        Ok(out)
    }

    /// Derivative with respect to the series variable.
    pub fn derivative(&self) -> Self {
        let r = BigRational::from_integer((self.ram as i64).into());
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = BigRational::from_integer((self.val + i as i64).into()) / r.clone();
            coeffs.push(c.scale(&e));
        }
        PuiseuxSeries {
            ram: self.ram,
            val: self.val - self.ram as i64,
            coeffs,
            trunc: self.trunc - self.ram as i64,
        }
        .normalize()
    }

    /// x * d/dx: multiplies the coefficient of x^e by e.
    pub fn euler_derivative(&self) -> Self {
        let r = BigRational::from_integer((self.ram as i64).into());
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = BigRational::from_integer((self.val + i as i64).into()) / r.clone();
            coeffs.push(c.scale(&e));
        }
        PuiseuxSeries {
            ram: self.ram,
            val: self.val,
            coeffs,
            trunc: self.trunc,
        }
        .normalize()
    }

    /// Exact polynomial reading of the known coefficients. Errors when
    /// fractional or negative exponents are present.
    pub fn to_poly(&self) -> Result<Poly> {
        let s = self.compact();
        if s.ram != 1 && !s.support().is_empty() {
            return Err(CoreError::BadRamification(s.ram, "fractional exponents".into()));
        }
        if let Some((v, _)) = s.valuation() {
            if v < 0 {
                return Err(CoreError::InvalidInput("negative exponents".into()));
            }
        }
        let n = if s.support().is_empty() {
            0
        } else {
            (*s.support().last().unwrap() + 1) as usize
        };
        let mut coeffs = vec![ConstantScalar::zero(); n];
        for k in s.support() {
            coeffs[k as usize] = s.coeff_index(k);
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    pub fn render(&self, names: &[String]) -> String {
        let tail = format!("O(x^({}/{}))", self.trunc + 1, self.ram);
        if self.is_zero_to_order() {
            return tail;
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.val + i as i64;
            let e = BigRational::new(k.into(), (self.ram as i64).into());
            let es = if e.is_zero() {
                String::new()
            } else if e == BigRational::from_integer(1.into()) {
                "*x".into()
            } else if e.denom().is_one() {
                format!("*x^{}", e.numer())
            } else {
                format!("*x^({}/{})", e.numer(), e.denom())
            };
            let cs = c.render(names);
            let cs = if cs.contains('+') || cs.rfind('-').unwrap_or(0) > 0 {
                format!("({})", cs)
            } else {
                cs
            };
            parts.push(format!("{}{}", cs, es));
            if parts.len() > 16 {
                parts.push("...".into());
                break;
            }
        }
        format!("{} + {}", parts.join(" + "), tail)
    }
}

impl std::fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

/// Where a rational function is expanded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionPoint {
    Zero,
    Infinity,
}

/// Expand a rational function as a truncated series at 0, or at infinity in
/// the local parameter t = 1/x, with the requested ramification. `order` is
/// in integer exponent units; the result carries `trunc = order * ram`.
pub fn expand_ratfunc(
    f: &RatFunc,
    at: ExpansionPoint,
    order: i64,
    ram: u32,
) -> Result<PuiseuxSeries> {
    let f = match at {
        ExpansionPoint::Zero => f.clone(),
        ExpansionPoint::Infinity => f.subst_monomial(&ConstantScalar::one(), -1)?,
    };
    if f.is_zero() {
        return Ok(PuiseuxSeries::zero(order * ram as i64));
    }
    let poly_series = |p: &Poly, trunc: i64| -> PuiseuxSeries {
        PuiseuxSeries::new(1, 0, p.coeffs().to_vec(), trunc)
    };
    // factor the valuation out of the denominator so it is a unit
    let vd = f.den().valuation().expect("nonzero denominator") as i64;
    let den_unit = Poly::from_coeffs(f.den().coeffs()[vd as usize..].to_vec());
    let vn = f.num().valuation().expect("nonzero numerator") as i64;
    let num_low = Poly::from_coeffs(f.num().coeffs()[vn as usize..].to_vec());
    let rel = (order - (vn - vd)).max(0) + 1;
    let num_s = poly_series(&num_low, rel);
    let den_s = poly_series(&den_unit, rel);
    let quot = num_s.div(&den_s)?;
    let shifted = quot.mul_monomial_index(&ConstantScalar::one(), vn - vd);
    Ok(shifted.truncate_to(order).with_ram(ram))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::ratfunc;

    fn coeffs_i64(s: &PuiseuxSeries, from: i64, to: i64) -> Vec<i64> {
        (from..=to)
            .map(|k| {
                s.coeff_index(k)
                    .as_rational()
                    .map(|r| {
                        assert!(r.denom() == &num_bigint::BigInt::from(1));
                        i64::try_from(r.numer().clone()).unwrap()
                    })
                    .unwrap_or(0)
            })
            .collect()
    }

    #[test]
    fn geometric_series() {
        // 1/(1-x) at zero, order 4: 1 + x + x^2 + x^3 + x^4
        let s = expand_ratfunc(&ratfunc(&[1], &[1, -1]), ExpansionPoint::Zero, 4, 1).unwrap();
        assert_eq!(coeffs_i64(&s, 0, 4), vec![1, 1, 1, 1, 1]);
        assert_eq!(s.trunc(), 4);
    }

    #[test]
    fn simple_pole() {
        // 1/x at zero: valuation -1, coefficient 1
        let s = expand_ratfunc(&ratfunc(&[1], &[0, 1]), ExpansionPoint::Zero, 4, 1).unwrap();
        assert_eq!(s.valuation(), Some((-1, 1)));
        assert!(s.coeff_index(-1).is_one());
        assert!(s.coeff_index(0).is_zero());
    }

    #[test]
    fn long_division_example() {
        // (1+x)/(1-2x) at zero, order 3: 1 + 3x + 6x^2 + 12x^3
        let s = expand_ratfunc(&ratfunc(&[1, 1], &[1, -2]), ExpansionPoint::Zero, 3, 1).unwrap();
        assert_eq!(coeffs_i64(&s, 0, 3), vec![1, 3, 6, 12]);
    }

    #[test]
    fn substitution_pow() {
        // (x + x^2), x -> x^2 = x^2 + x^4
        let s = PuiseuxSeries::new(1, 1, vec![ConstantScalar::one(), ConstantScalar::one()], 8);
        let t = s.subst_pow(2);
        assert_eq!(coeffs_i64(&t, 0, 5), vec![0, 0, 1, 0, 1, 0]);
        assert_eq!(t.trunc(), 17);
    }

    #[test]
    fn substitution_scale() {
        let q = ConstantScalar::generator(0);
        let s = PuiseuxSeries::monomial(ConstantScalar::one(), 1, 1, 4);
        let t = s.subst_scale(&q).unwrap();
        assert_eq!(t.coeff_index(1), q);
    }

    #[test]
    fn fractional_exponents_and_compaction() {
        // x^{1/2} + x, then x -> x^3 gives x^{3/2} + x^3 with ramification 2
        let s = PuiseuxSeries::new(2, 1, vec![ConstantScalar::one(), ConstantScalar::one()], 8);
        let t = s.subst_pow(3);
        assert_eq!(t.ram(), 2);
        assert!(t
            .coeff_exponent(&BigRational::new(3.into(), 2.into()))
            .is_one());
        assert!(t
            .coeff_exponent(&BigRational::from_integer(3.into()))
            .is_one());
        // a series with only integer exponents compacts to ram 1
        let u = PuiseuxSeries::new(2, 2, vec![ConstantScalar::one()], 9).compact();
        assert_eq!(u.ram(), 1);
        assert_eq!(u.valuation(), Some((1, 1)));
    }

    #[test]
    fn product_truncation_is_honest() {
        // f known to 3 with val 1, g known to 5 with val 2: product known to
        // min(3+2, 5+1) = 5
        let f = PuiseuxSeries::new(1, 1, vec![ConstantScalar::one(); 3], 3);
        let g = PuiseuxSeries::new(1, 2, vec![ConstantScalar::one(); 4], 5);
        assert_eq!(f.mul(&g).trunc(), 5);
    }

    #[test]
    fn mul_matches_expand_of_product() {
        let a = ratfunc(&[1, 2], &[1, -1]);
        let b = ratfunc(&[0, 1], &[1, 1, 1]);
        let n = 12;
        let sa = expand_ratfunc(&a, ExpansionPoint::Zero, n, 1).unwrap();
        let sb = expand_ratfunc(&b, ExpansionPoint::Zero, n, 1).unwrap();
        let sp = expand_ratfunc(&a.mul(&b), ExpansionPoint::Zero, n, 1).unwrap();
        let prod = sa.mul(&sb);
        let t = prod.trunc().min(sp.trunc());
        assert_eq!(prod.truncate_to(t), sp.truncate_to(t));
    }

    #[test]
    fn inverse_round_trip() {
        let f = expand_ratfunc(&ratfunc(&[1, 3, -2], &[1]), ExpansionPoint::Zero, 10, 1).unwrap();
        let inv = f.inv().unwrap();
        let prod = f.mul(&inv);
        assert!(prod.coeff_index(0).is_one());
        for k in 1..=prod.trunc() {
            assert!(prod.coeff_index(k).is_zero());
        }
    }

    #[test]
    fn expansion_at_infinity() {
        // x/(x-1) at infinity: 1 + 1/x + 1/x^2 + ... in t = 1/x
        let s =
            expand_ratfunc(&ratfunc(&[0, 1], &[-1, 1]), ExpansionPoint::Infinity, 5, 1).unwrap();
        assert_eq!(coeffs_i64(&s, 0, 5), vec![1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn composition_shift_at_infinity() {
        // sigma(x) = x+1 acts on series in t = 1/x as t -> t/(1+t).
        // On f(t) = t (i.e. 1/x) this gives t - t^2 + t^3 - ...
        let t = PuiseuxSeries::monomial(ConstantScalar::one(), 1, 1, 6);
        let inner = expand_ratfunc(&ratfunc(&[0, 1], &[1, 1]), ExpansionPoint::Zero, 6, 1).unwrap();
        let out = t.compose(&inner).unwrap();
        assert_eq!(coeffs_i64(&out, 1, 4), vec![1, -1, 1, -1]);
        // and on t^{-1} (i.e. x) it gives (1+t)/t = t^{-1} + 1
        let ti = PuiseuxSeries::monomial(ConstantScalar::one(), -1, 1, 6);
        let out = ti.compose(&inner).unwrap();
        assert_eq!(out.coeff_index(-1), ConstantScalar::one());
        assert_eq!(out.coeff_index(0), ConstantScalar::one());
        assert!(out.coeff_index(1).is_zero());
    }

    #[test]
    fn euler_derivative_scales_by_exponent() {
        let s = PuiseuxSeries::new(2, 1, vec![ConstantScalar::one()], 8);
        let d = s.euler_derivative();
        assert_eq!(d.coeff_index(1), ConstantScalar::from_ratio(1, 2));
    }

    #[test]
    fn to_poly_round_trip() {
        let p = Poly::from_i64(&[3, 0, -1, 2]);
        let s = expand_ratfunc(
            &RatFunc::from_poly(p.clone()),
            ExpansionPoint::Zero,
            10,
            1,
        )
        .unwrap();
        assert_eq!(s.to_poly().unwrap(), p);
    }
}
