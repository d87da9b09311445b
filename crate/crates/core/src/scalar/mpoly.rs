//! Multivariate polynomials over the rationals, used as numerator and
//! denominator of [`ConstantScalar`](super::ConstantScalar).
//!
//! Monomials are exponent vectors with trailing zeros trimmed, so a value
//! built with two declared generators compares equal to the same value built
//! with three. The term map is a `BTreeMap`, which fixes a deterministic
//! monomial order for printing, hashing and canonical normalization.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector with trailing zeros trimmed.
pub type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0));
    }
    trim(out)
}

/// Divide monomial `a` by `b`; `None` if not divisible.
fn mono_div(a: &[u32], b: &[u32]) -> Option<Monomial> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let e = b.get(i).copied().unwrap_or(0);
        if e > a[i] {
            return None;
        }
        out.push(a[i] - e);
    }
    Some(trim(out))
}

/// Multivariate polynomial with `BigRational` coefficients.
///
/// Invariant: no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MPoly { terms }
    }

    /// The generator with the given index, i.e. the monomial `g_idx`.
    pub fn generator(idx: usize) -> Self {
        let mut m = vec![0u32; idx + 1];
        m[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(m, BigRational::one());
        MPoly { terms }
    }

    pub fn from_terms(list: Vec<(Monomial, BigRational)>) -> Self {
        let mut out = MPoly::zero();
        for (m, c) in list {
            out.add_term(trim(m), c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Vec::new()))
    }

    /// Constant value if this polynomial has no generator occurrences.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Vec::new() as &Monomial) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest generator index occurring, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter(|m| !m.is_empty())
            .map(|m| m.len() - 1)
            .max()
    }

    /// Leading term in the deterministic monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(mono_mul(m1, m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = MPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Degree in generator `var`.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.get(var).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// View as univariate in `var`: coefficients (in lower generators only if
    /// `var` is the maximal one) indexed by the exponent of `var`.
    fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.get(var).copied().unwrap_or(0) as usize;
            let mut rest = m.clone();
            if var < rest.len() {
                rest[var] = 0;
            }
            out[e].add_term(trim(rest), c.clone());
        }
        out
    }

    fn from_coeffs_in(var: usize, coeffs: Vec<MPoly>) -> Self {
        let mut out = MPoly::zero();
        for (e, p) in coeffs.into_iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let mut m = vec![0u32; var + 1];
            m[var] = e as u32;
            let xe = MPoly {
                terms: [(trim(m), BigRational::one())].into_iter().collect(),
            };
            out = out.add(&p.mul(&xe));
        }
        out
    }

    /// Exact division; `None` when not divisible.
    pub fn exact_div(&self, div: &Self) -> Option<Self> {
        if div.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if let Some(c) = div.as_constant() {
            return Some(self.scale(&(BigRational::one() / c)));
        }
        // Multivariate long division by the leading term; succeeds exactly
        // when the remainder comes out zero.
        let mut rem = self.clone();
        let mut quo = MPoly::zero();
        let (lm, lc) = {
            let (m, c) = div.leading().unwrap();
            (m.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (m.clone(), c.clone())
            };
            let qm = mono_div(&rm, &lm)?;
            let qc = rc / lc.clone();
            let t = MPoly {
                terms: [(qm, qc)].into_iter().collect(),
            };
            quo = quo.add(&t);
            rem = rem.sub(&t.mul(div));
        }
        Some(quo)
    }

    /// Content w.r.t. `var`: gcd of the univariate coefficients.
    fn content_in(&self, var: usize) -> MPoly {
        let mut g = MPoly::zero();
        for c in self.coeffs_in(var) {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() { c } else { MPoly::gcd(&g, &c) };
            if g.is_constant() && !g.is_zero() {
                return MPoly::one();
            }
        }
        if g.is_zero() {
            MPoly::one()
        } else {
            g
        }
    }

    /// Normalize so the leading coefficient (deterministic order) is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => MPoly::zero(),
            Some((_, c)) => self.scale(&(BigRational::one() / c.clone())),
        }
    }

    /// GCD, normalized monic in the deterministic order. Primitive PRS in the
    /// top generator, recursing on coefficient contents.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return MPoly::one();
        }
        let var = a.max_var().unwrap().max(b.max_var().unwrap());
        let ca = a.content_in(var);
        let cb = b.content_in(var);
        let cont = MPoly::gcd(&ca, &cb);
        let pa = a.exact_div(&ca).expect("content divides");
        let pb = b.exact_div(&cb).expect("content divides");
        let prim = Self::gcd_primitive(pa, pb, var);
        cont.mul(&prim).monic()
    }

    /// PRS on primitives w.r.t. `var`, restoring primitivity every step.
    fn gcd_primitive(mut f: MPoly, mut g: MPoly, var: usize) -> MPoly {
        loop {
            if g.is_zero() {
                let c = f.content_in(var);
                return f.exact_div(&c).expect("content divides");
            }
            if f.degree_in(var) < g.degree_in(var) {
                std::mem::swap(&mut f, &mut g);
                continue;
            }
            let r = Self::pseudo_rem(&f, &g, var);
            f = g;
            g = match r {
                None => MPoly::zero(),
                Some(r) => {
                    if r.is_zero() {
                        MPoly::zero()
                    } else if r.degree_in(var) == 0 && r.max_var() != Some(var) {
                        // nonzero remainder free of var: gcd is var-free
                        return MPoly::one();
                    } else {
                        let c = r.content_in(var);
                        r.exact_div(&c).expect("content divides")
                    }
                }
            };
        }
    }

    /// Pseudo-remainder of `f` by `g` in `var`. Returns `None` when the
    /// result is zero.
    fn pseudo_rem(f: &MPoly, g: &MPoly, var: usize) -> Option<MPoly> {
        let dg = g.degree_in(var);
        let gc = g.coeffs_in(var);
        let glead = gc[dg as usize].clone();
        let mut fc = f.coeffs_in(var);
        while fc.len() as u32 > dg {
            let df = fc.len() as u32 - 1;
            let flead = fc.last().unwrap().clone();
            if flead.is_zero() {
                fc.pop();
                continue;
            }
            // multiply through by glead, subtract flead * x^{df-dg} * g
            for c in fc.iter_mut() {
                *c = c.mul(&glead);
            }
            let shift = (df - dg) as usize;
            for (i, gi) in gc.iter().enumerate() {
                let t = flead.mul(gi);
                fc[i + shift] = fc[i + shift].sub(&t);
            }
            while fc.last().map(|c| c.is_zero()) == Some(true) {
                fc.pop();
            }
            if fc.is_empty() {
                return None;
            }
        }
        Some(MPoly::from_coeffs_in(var, fc))
    }

    /// Render with the given generator names (used by the text encoding).
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        // iterate highest order first for readability
        for (m, c) in self.terms.iter().rev() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = names
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("g{}", i));
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{}^{}", name, e));
                }
            }
            let coeff_str = render_rational(c);
            let term = if factors.is_empty() {
                coeff_str
            } else if c.is_one() {
                factors.join("*")
            } else if (-c.clone()).is_one() {
                format!("-{}", factors.join("*"))
            } else {
                format!("{}*{}", coeff_str, factors.join("*"))
            };
            parts.push(term);
        }
        let mut out = String::new();
        for (i, t) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(t);
            } else if let Some(stripped) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        out
    }
}

pub fn render_rational(c: &BigRational) -> String {
    if c.denom() == &BigInt::one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn rational_is_integer(c: &BigRational) -> bool {
    c.denom().abs() == BigInt::one()
}
