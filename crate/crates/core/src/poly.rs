//! Univariate polynomials in x over the constants field.
//!
//! Coefficients are stored ascending with no trailing zeros. Multiplication
//! is schoolbook below [`KARATSUBA_THRESHOLD`] and Karatsuba above it; the
//! threshold is a config knob, desk-scale degrees rarely pass it.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{CoreError, Result};
use crate::scalar::ConstantScalar;

/// Degree above which multiplication switches away from schoolbook.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// Univariate polynomial over [`ConstantScalar`], ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<ConstantScalar>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<ConstantScalar>) -> Self {
        while coeffs.last().map(|c| c.is_zero()) == Some(true) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(ConstantScalar::one())
    }

    pub fn x() -> Self {
        Poly::from_coeffs(vec![ConstantScalar::zero(), ConstantScalar::one()])
    }

    pub fn constant(c: ConstantScalar) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { coeffs: vec![c] }
        }
    }

    /// c * x^k
    pub fn monomial(c: ConstantScalar, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![ConstantScalar::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| ConstantScalar::from_integer(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[ConstantScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ConstantScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(ConstantScalar::zero)
    }

    pub fn leading_coeff(&self) -> Option<&ConstantScalar> {
        self.coeffs.last()
    }

    /// Order of vanishing at x = 0; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ConstantScalar) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|k| k.mul(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.coeffs.len().min(other.coeffs.len()) > KARATSUBA_THRESHOLD {
            return self.mul_karatsuba(other);
        }
        self.mul_schoolbook(other)
    }

    fn mul_schoolbook(&self, other: &Self) -> Self {
        let mut out = vec![ConstantScalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(out)
    }

    fn mul_karatsuba(&self, other: &Self) -> Self {
        let m = self.coeffs.len().max(other.coeffs.len()) / 2;
        let (a0, a1) = self.split_at(m);
        let (b0, b1) = other.split_at(m);
        let z0 = a0.mul(&b0);
        let z2 = a1.mul(&b1);
        let z1 = a0.add(&a1).mul(&b0.add(&b1)).sub(&z0).sub(&z2);
        z0.add(&z1.shift(m)).add(&z2.shift(2 * m))
    }

    fn split_at(&self, m: usize) -> (Poly, Poly) {
        if self.coeffs.len() <= m {
            (self.clone(), Poly::zero())
        } else {
            (
                Poly::from_coeffs(self.coeffs[..m].to_vec()),
                Poly::from_coeffs(self.coeffs[m..].to_vec()),
            )
        }
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![ConstantScalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Quotient and remainder; the divisor's leading coefficient is inverted
    /// exactly (coefficients form a field).
    pub fn div_rem(&self, div: &Self) -> Result<(Poly, Poly)> {
        if div.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        let dlead = div.leading_coeff().unwrap().inv()?;
        let dd = div.degree().unwrap();
        let mut rem = self.clone();
        let mut quo = vec![ConstantScalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.coeffs[rd].mul(&dlead);
            let k = rd - dd;
            quo[k] = c.clone();
            rem = rem.sub(&div.scale(&c).shift(k));
        }
        Ok((Poly::from_coeffs(quo), rem))
    }

    pub fn exact_div(&self, div: &Self) -> Result<Poly> {
        let (q, r) = self.div_rem(div)?;
        if !r.is_zero() {
            return Err(CoreError::Internal("exact_div with nonzero remainder".into()));
        }
        Ok(q)
    }

    /// Monic GCD via the Euclidean algorithm.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut f = a.clone();
        let mut g = b.clone();
        while !g.is_zero() {
            let (_, r) = f.div_rem(&g).expect("nonzero divisor");
            f = g;
            g = r;
        }
        f.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&BigRational::from_integer((i as i64 + 1).into())))
                .collect(),
        )
    }

    pub fn eval(&self, x: &ConstantScalar) -> ConstantScalar {
        let mut out = ConstantScalar::zero();
        for c in self.coeffs.iter().rev() {
            out = out.mul(x).add(c);
        }
        out
    }

    /// Substitute x -> x + c.
    pub fn subst_shift(&self, c: &ConstantScalar) -> Self {
        let mut out = Poly::zero();
        let shift = Poly::from_coeffs(vec![c.clone(), ConstantScalar::one()]);
        for k in self.coeffs.iter().rev() {
            out = out.mul(&shift).add(&Poly::constant(k.clone()));
        }
        out
    }

    /// Substitute x -> c*x.
    pub fn subst_scale(&self, c: &ConstantScalar) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut p = ConstantScalar::one();
        for k in &self.coeffs {
            out.push(k.mul(&p));
            p = p.mul(c);
        }
        Poly::from_coeffs(out)
    }

    /// Substitute x -> x^p.
    pub fn subst_pow(&self, p: u32) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ConstantScalar::zero(); (self.coeffs.len() - 1) * p as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * p as usize] = c.clone();
        }
        Poly::from_coeffs(out)
    }

    /// All rational roots, found from divisor candidates of the integerized
    /// trailing and leading coefficients. Requires generator-free
    /// coefficients; returns `None` when a symbolic coefficient blocks this.
    pub fn rational_roots(&self) -> Option<Vec<BigRational>> {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::Signed;
        if self.is_zero() {
            return Some(Vec::new());
        }
        let mut rat: Vec<BigRational> = Vec::new();
        for c in &self.coeffs {
            rat.push(c.as_rational()?);
        }
        // strip powers of x (root 0)
        let mut roots = Vec::new();
        let val = self.valuation().unwrap();
        if val > 0 {
            roots.push(BigRational::zero());
        }
        let rat = &rat[val..];
        if rat.len() <= 1 {
            return Some(roots);
        }
        // clear denominators to integer coefficients
        let mut lcm = BigInt::from(1);
        for c in rat {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = rat.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let mut p_divs = divisors(&a0);
        if p_divs.is_empty() {
            p_divs.push(BigInt::zero());
        }
        let q_divs = divisors(&an);
        let poly = Poly::from_coeffs(rat.iter().map(|c| ConstantScalar::from_rational(c.clone())).collect());
        for p in &p_divs {
            for q in &q_divs {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(p * BigInt::from(sign), q.clone());
                    if roots.contains(&cand) {
                        continue;
                    }
                    if poly.eval(&ConstantScalar::from_rational(cand.clone())).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }

    /// Square-free factors (Yun's algorithm), each monic, with multiplicity.
    pub fn squarefree_factors(&self) -> Vec<(Poly, u32)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = Poly::gcd(&f, &df);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let mut c = df.exact_div(&a0).expect("gcd divides");
        let mut out = Vec::new();
        let mut mult = 1u32;
        loop {
            let d = c.sub(&b.derivative());
            let a = Poly::gcd(&b, &d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), mult));
            }
            b = b.exact_div(&a).expect("gcd divides");
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.exact_div(&a).expect("gcd divides");
            mult += 1;
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.render(names);
            let cs = if cs.contains('+') || (cs.rfind('-').unwrap_or(0) > 0) {
                format!("({})", cs)
            } else {
                cs
            };
            let t = match i {
                0 => cs,
                1 if c.is_one() => "x".to_string(),
                1 => format!("{}*x", cs),
                _ if c.is_one() => format!("x^{}", i),
                _ => format!("{}*x^{}", cs, i),
            };
            parts.push(t);
        }
        let mut out = String::new();
        for (i, t) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(t);
            } else if let Some(s) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(s);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        out
    }
}

fn divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    use num_traits::Signed;
    let n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut d = BigInt::from(1);
    // trial division is fine at the coefficient sizes we see
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
        if out.len() > 4096 {
            break;
        }
    }
    out
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_and_gcd() {
        // (x^2 - 1) / (x - 1) = x + 1
        let f = Poly::from_i64(&[-1, 0, 1]);
        let g = Poly::from_i64(&[-1, 1]);
        let (q, r) = f.div_rem(&g).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_i64(&[1, 1]));
        assert_eq!(Poly::gcd(&f, &g), g.monic());
    }

    #[test]
    fn substitution_rules() {
        let f = Poly::from_i64(&[0, 0, 1]); // x^2
        assert_eq!(
            f.subst_shift(&ConstantScalar::one()),
            Poly::from_i64(&[1, 2, 1])
        );
        let two = ConstantScalar::from_integer(2);
        assert_eq!(f.subst_scale(&two), Poly::from_i64(&[0, 0, 4]));
        assert_eq!(f.subst_pow(3), Poly::from_i64(&[0, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let a = Poly::from_coeffs((0..80i64).map(ConstantScalar::from_integer).collect());
        let b = Poly::from_coeffs((1..70i64).map(|i| ConstantScalar::from_integer(i * i - 3)).collect());
        assert_eq!(a.mul_karatsuba(&b), a.mul_schoolbook(&b));
    }

    #[test]
    fn rational_roots_found() {
        // (x - 2)(2x + 1)(x^2 + 1)
        let f = Poly::from_i64(&[-2, 1]).mul(&Poly::from_i64(&[1, 2])).mul(&Poly::from_i64(&[1, 0, 1]));
        let roots = f.rational_roots().unwrap();
        assert_eq!(
            roots,
            vec![
                BigRational::new((-1).into(), 2.into()),
                BigRational::from_integer(2.into())
            ]
        );
    }

    #[test]
    fn squarefree_split() {
        // x^2 (x-1)^3
        let f = Poly::from_i64(&[0, 0, 1]).mul(&Poly::from_i64(&[-1, 1]).mul(&Poly::from_i64(&[-1, 1])).mul(&Poly::from_i64(&[-1, 1])));
        let fac = f.squarefree_factors();
        assert_eq!(fac, vec![(Poly::from_i64(&[0, 1]), 2), (Poly::from_i64(&[-1, 1]), 3)]);
    }
}
