//! Construction of consistent first-order systems from two scalar
//! annihilators, and of annihilator pairs from closed-form solutions.
//!
//! Given a delta-operator L of order n and a sigma-operator S of order m
//! annihilating the same unknown f, the abstract module spanned by the
//! generators g_{i,j} = sigma^j delta^i f (0 <= i < n, 0 <= j < m) is closed
//! under delta and sigma: delta passes sigma powers using
//! delta sigma^j = mu^j sigma^j delta, powers beyond the top are reduced by
//! the scalar equations. Reading the actions off in this basis yields the
//! matrices A and B of a first-order pair that is consistent by
//! construction. No basis minimization is attempted: the dimension is
//! always n*m (resp. m1*m2), which keeps the construction independent of f.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{CoreError, Result};
use crate::matrix::RatMatrix;
use crate::operators::closed_form::{
    apply_operator_closed_form, ClosedFormCtx, ClosedFormSolution, ClosedFormTerm, PowerExponent,
};
use crate::operators::{OpKind, OperatorCase, ScalarOperator, SigmaIndex};
use crate::ratfunc::{common_denominator, RatFunc};
use crate::scalar::ConstantScalar;
use crate::systems::{
    check_consistency_dd, check_consistency_ss, DDSystem, SigmaSigmaSystem,
};

/// Labels the generators of the abstract module: entry k of the system
/// vector stands for sigma^{j} delta^{i} f (differential/difference case)
/// or sigma1^{i} sigma2^{j} f (two-difference case).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleBasis {
    pub labels: Vec<(usize, usize)>,
    pub delta_order: usize,
    pub sigma_order: usize,
}

impl ModuleBasis {
    fn new_grid(n_delta: usize, n_sigma: usize) -> Self {
        let mut labels = Vec::with_capacity(n_delta * n_sigma);
        for j in 0..n_sigma {
            for i in 0..n_delta {
                labels.push((i, j));
            }
        }
        ModuleBasis {
            labels,
            delta_order: n_delta,
            sigma_order: n_sigma,
        }
    }

    pub fn index_of(&self, i: usize, j: usize) -> usize {
        j * self.delta_order + i
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Divide out sigma powers of an operator with vanishing trailing
/// coefficient; possible in the shift/dilation cases where sigma is
/// invertible, rejected in the Mahler cases.
pub fn normalize_trailing(op: &ScalarOperator) -> Result<ScalarOperator> {
    let Some(idx) = op.sigma_index() else {
        return Ok(op.clone());
    };
    let mut coeffs = op.coeffs().to_vec();
    while coeffs.first().map(|c| c.is_zero()) == Some(true) {
        if op.case.is_mahler_like() {
            return Err(CoreError::MahlerTrailingZero);
        }
        coeffs.remove(0);
        let mut out = Vec::with_capacity(coeffs.len());
        for c in &coeffs {
            out.push(op.case.sigma_inverse_of(c, idx)?);
        }
        coeffs = out;
    }
    ScalarOperator::new(op.case.clone(), op.kind, coeffs)
}

fn binomial(i: usize, t: usize) -> ConstantScalar {
    let mut b = BigInt::one();
    for k in 0..t {
        b = b * BigInt::from((i - k) as i64) / BigInt::from((k + 1) as i64);
    }
    ConstantScalar::from_rational(BigRational::from_integer(b))
}

/// Build the consistent pair delta(w) = A w, sigma(w) = B w on the module
/// spanned by sigma^j delta^i f from a delta-operator L and sigma-operator S
/// over the same case. The trailing coefficient of S must be nonzero (after
/// normalization in the shift/dilation cases).
pub fn build_dd_system(
    l_op: &ScalarOperator,
    s_op: &ScalarOperator,
) -> Result<(DDSystem, ModuleBasis)> {
    if l_op.case != s_op.case {
        return Err(CoreError::InvalidInput("operators must share a case".into()));
    }
    if !matches!(l_op.kind, OpKind::Delta) || s_op.sigma_index() != Some(SigmaIndex::One) {
        return Err(CoreError::InvalidInput(
            "need a delta-operator and a sigma-operator".into(),
        ));
    }
    let case = l_op.case.clone();
    let mu = case.mu()?;
    let l_op = l_op.monic();
    let s_op = normalize_trailing(s_op)?.monic();
    if s_op.trailing().is_zero() {
        return Err(CoreError::MahlerTrailingZero);
    }
    let n = l_op.order();
    let m = s_op.order();
    let basis = ModuleBasis::new_grid(n, m);
    let dim = basis.dim();

    // reduced delta^n f = -sum a_i delta^i f
    let a_red: Vec<RatFunc> = (0..n).map(|i| l_op.coeff(i).neg()).collect();
    // reduced sigma^m f = -sum b_j sigma^j f
    let b_red: Vec<RatFunc> = (0..m).map(|j| s_op.coeff(j).neg()).collect();

    // iterated sigma of the a_i for each column j
    let mut sigma_a: Vec<Vec<RatFunc>> = vec![a_red.clone()];
    for _ in 1..m.max(1) {
        let prev = sigma_a.last().unwrap();
        let mut next = Vec::with_capacity(n);
        for c in prev {
            next.push(case.sigma_of(c, SigmaIndex::One)?);
        }
        sigma_a.push(next);
    }
    // iterated delta of the b_j up to order n - 1
    let mut delta_b: Vec<Vec<RatFunc>> = vec![b_red.clone()];
    for _ in 1..n.max(1) {
        let prev = delta_b.last().unwrap();
        let mut next = Vec::with_capacity(m);
        for c in prev {
            next.push(case.delta_of(c)?);
        }
        delta_b.push(next);
    }

    // row src of A expresses delta(g_src) in the basis, likewise B for sigma
    let mut a_mat = RatMatrix::zero(dim);
    let mut b_mat = RatMatrix::zero(dim);
    for j in 0..m {
        let mu_j = RatFunc::constant(mu.pow(j as i64)?);
        for i in 0..n {
            let src = basis.index_of(i, j);
            // delta action: mu^j sigma^j delta^{i+1} f
            if i + 1 < n {
                a_mat.set_entry(src, basis.index_of(i + 1, j), mu_j.clone());
            } else {
                for (ip, coeff) in sigma_a[j].iter().enumerate() {
                    let v = a_mat
                        .entry(src, basis.index_of(ip, j))
                        .add(&mu_j.mul(coeff));
                    a_mat.set_entry(src, basis.index_of(ip, j), v);
                }
            }
            // sigma action: sigma^{j+1} delta^i f
            if j + 1 < m {
                b_mat.set_entry(src, basis.index_of(i, j + 1), RatFunc::one());
            } else {
                // sigma^m delta^i = mu^{-im} delta^i sigma^m, then expand
                // delta^i (b_j' sigma^{j'} f) by the Leibniz rule
                let mu_im = RatFunc::constant(mu.pow(-((i * m) as i64))?);
                for jp in 0..m {
                    for t in 0..=i {
                        // binom(i, t) delta^{i-t}(b_red[jp]) mu^{t jp} g_{t, jp}
                        let coeff = delta_b[i - t][jp]
                            .scale(&binomial(i, t))
                            .scale(&mu.pow((t * jp) as i64)?)
                            .mul(&mu_im);
                        let v = b_mat.entry(src, basis.index_of(t, jp)).add(&coeff);
                        b_mat.set_entry(src, basis.index_of(t, jp), v);
                    }
                }
            }
        }
    }

    if b_mat.det().is_zero() {
        let kernel = b_mat
            .kernel_vector()
            .map(|v| {
                v.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .unwrap_or_default();
        return Err(CoreError::DegeneratePair(format!(
            "sigma action is singular; kernel vector [{}]",
            kernel
        )));
    }
    let sys = DDSystem::new(case, a_mat, b_mat)?;
    let report = check_consistency_dd(&sys)?;
    if !report.is_consistent() {
        return Err(CoreError::Inconsistent(
            "the scalar pair admits no common solution: the module rewrite is not confluent"
                .into(),
        ));
    }
    Ok((sys, basis))
}

/// Two-difference analogue on the module spanned by sigma1^i sigma2^j f.
pub fn build_ss_system(
    s1: &ScalarOperator,
    s2: &ScalarOperator,
) -> Result<(SigmaSigmaSystem, ModuleBasis)> {
    if s1.case != s2.case {
        return Err(CoreError::InvalidInput("operators must share a case".into()));
    }
    if s1.sigma_index() != Some(SigmaIndex::One) || s2.sigma_index() != Some(SigmaIndex::Two) {
        return Err(CoreError::InvalidInput(
            "need a sigma1-operator and a sigma2-operator".into(),
        ));
    }
    let case = s1.case.clone();
    let s1 = normalize_trailing(s1)?.monic();
    let s2 = normalize_trailing(s2)?.monic();
    if s1.trailing().is_zero() || s2.trailing().is_zero() {
        return Err(CoreError::MahlerTrailingZero);
    }
    let m1 = s1.order();
    let m2 = s2.order();
    let basis = ModuleBasis::new_grid(m1, m2);
    let dim = basis.dim();

    let red1: Vec<RatFunc> = (0..m1).map(|i| s1.coeff(i).neg()).collect();
    let red2: Vec<RatFunc> = (0..m2).map(|j| s2.coeff(j).neg()).collect();

    // sigma2^j applied to the sigma1-reduction coefficients and vice versa
    let mut s2_of_red1: Vec<Vec<RatFunc>> = vec![red1.clone()];
    for _ in 1..m2.max(1) {
        let prev = s2_of_red1.last().unwrap();
        let mut next = Vec::with_capacity(m1);
        for c in prev {
            next.push(case.sigma_of(c, SigmaIndex::Two)?);
        }
        s2_of_red1.push(next);
    }
    let mut s1_of_red2: Vec<Vec<RatFunc>> = vec![red2.clone()];
    for _ in 1..m1.max(1) {
        let prev = s1_of_red2.last().unwrap();
        let mut next = Vec::with_capacity(m2);
        for c in prev {
            next.push(case.sigma_of(c, SigmaIndex::One)?);
        }
        s1_of_red2.push(next);
    }

    let mut b1_mat = RatMatrix::zero(dim);
    let mut b2_mat = RatMatrix::zero(dim);
    for j in 0..m2 {
        for i in 0..m1 {
            let src = basis.index_of(i, j);
            // sigma1: (i, j) -> (i+1, j), reduced at the top by S1
            if i + 1 < m1 {
                b1_mat.set_entry(src, basis.index_of(i + 1, j), RatFunc::one());
            } else {
                for (ip, c) in s2_of_red1[j].iter().enumerate() {
                    let v = b1_mat.entry(src, basis.index_of(ip, j)).add(c);
                    b1_mat.set_entry(src, basis.index_of(ip, j), v);
                }
            }
            // sigma2: (i, j) -> (i, j+1), reduced at the top by S2
            if j + 1 < m2 {
                b2_mat.set_entry(src, basis.index_of(i, j + 1), RatFunc::one());
            } else {
                for (jp, c) in s1_of_red2[i].iter().enumerate() {
                    let v = b2_mat.entry(src, basis.index_of(i, jp)).add(c);
                    b2_mat.set_entry(src, basis.index_of(i, jp), v);
                }
            }
        }
    }

    for (label, m) in [("sigma1", &b1_mat), ("sigma2", &b2_mat)] {
        if m.det().is_zero() {
            return Err(CoreError::DegeneratePair(format!(
                "{} action is singular",
                label
            )));
        }
    }
    let sys = SigmaSigmaSystem::new(case, b1_mat, b2_mat)?;
    let report = check_consistency_ss(&sys)?;
    if !report.is_consistent() {
        return Err(CoreError::Inconsistent(
            "the scalar pair admits no common solution: the module rewrite is not confluent"
                .into(),
        ));
    }
    Ok((sys, basis))
}

// ---- annihilators of closed forms ----

/// Pieces of a closed form after clearing denominators: monomial-coefficient
/// power-log data (beta = alpha + k for each monomial x^k of the polynomial
/// coefficient) with the highest log power per effective exponent.
fn power_log_pieces(
    cf: &ClosedFormSolution,
) -> Result<(RatFunc, Vec<(PowerExponent, u32)>)> {
    let denoms: Vec<RatFunc> = cf
        .terms()
        .iter()
        .map(|t| match t {
            ClosedFormTerm::PowerLog { coeff, .. } => RatFunc::from_poly(coeff.den().clone()),
            ClosedFormTerm::Exponential { coeff, .. } => RatFunc::from_poly(coeff.den().clone()),
        })
        .collect();
    let p = common_denominator(&denoms.iter().map(|d| d.inv().unwrap()).collect::<Vec<_>>());
    let p_rf = RatFunc::from_poly(p);
    let cleared = cf.scale_ratfunc(&p_rf);
    let mut pieces: Vec<(PowerExponent, u32)> = Vec::new();
    for t in cleared.terms() {
        let ClosedFormTerm::PowerLog {
            coeff,
            exponent,
            log_power,
        } = t
        else {
            return Err(CoreError::InvalidInput("expected power-log terms".into()));
        };
        if !coeff.is_polynomial() {
            return Err(CoreError::Internal("denominator clearing failed".into()));
        }
        for (k, c) in coeff.num().coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let beta = match exponent {
                PowerExponent::Rational(r) => {
                    PowerExponent::Rational(r + BigRational::from_integer((k as i64).into()))
                }
                PowerExponent::Declared {
                    alpha,
                    sigma_multiplier,
                } => PowerExponent::Declared {
                    alpha: alpha.add(&ConstantScalar::from_integer(k as i64)),
                    sigma_multiplier: sigma_multiplier.clone(),
                },
            };
            match pieces.iter_mut().find(|(b, _)| *b == beta) {
                Some((_, j)) => *j = (*j).max(*log_power),
                None => pieces.push((beta, *log_power)),
            }
        }
    }
    Ok((p_rf, pieces))
}

/// Product of (op - c_i)^{e_i} factors with constant c_i, as an operator.
fn constant_product_operator(
    case: &OperatorCase,
    kind: OpKind,
    factors: &[(ConstantScalar, u32)],
) -> Result<ScalarOperator> {
    // multiply polynomials in the operator symbol; constant coefficients
    // commute with delta and sigma alike
    let mut coeffs = vec![RatFunc::one()];
    for (c, e) in factors {
        for _ in 0..*e {
            let mut next = vec![RatFunc::zero(); coeffs.len() + 1];
            for (i, a) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(a);
                next[i] = next[i].sub(&a.scale(c));
            }
            coeffs = next;
        }
    }
    ScalarOperator::new(case.clone(), kind, coeffs)
}

/// Sigma annihilator of a sum of power-log pieces in a Mahler case, found by
/// exact linear elimination over the sigma-orbit of the closed form.
fn mahler_sigma_annihilator(
    case: &OperatorCase,
    index: SigmaIndex,
    cf: &ClosedFormSolution,
) -> Result<ScalarOperator> {
    // keys: (fractional exponent, log power); terms are canonical, so the
    // exponent already lies in [0, 1) and the coefficient carries the rest
    type Key = (BigRational, u32);
    let coords = |form: &ClosedFormSolution| -> Result<Vec<(Key, RatFunc)>> {
        let mut out: Vec<(Key, RatFunc)> = Vec::new();
        for t in form.terms() {
            let ClosedFormTerm::PowerLog {
                coeff,
                exponent,
                log_power,
            } = t
            else {
                return Err(CoreError::InvalidInput("expected power-log terms".into()));
            };
            let r = exponent
                .as_rational()
                .ok_or(CoreError::IrrationalMahlerExponent)?;
            out.push(((r, *log_power), coeff.clone()));
        }
        Ok(out)
    };

    let ctx = ClosedFormCtx::empty();
    let mut iterates: Vec<ClosedFormSolution> = vec![cf.clone()];
    let max_order = 64usize;
    for order in 1..=max_order {
        let next = crate::operators::closed_form::sigma_closed_form(
            case,
            index,
            iterates.last().unwrap(),
            &ctx,
        )?;
        iterates.push(next);
        // try to express the last iterate in terms of the earlier ones
        let mut keys: Vec<Key> = Vec::new();
        let mut cols: Vec<Vec<(Key, RatFunc)>> = Vec::new();
        for it in &iterates {
            let cs = coords(it)?;
            for (k, _) in &cs {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
            cols.push(cs);
        }
        let rows = keys.len();
        let unknowns = order; // coefficients of sigma^0 .. sigma^{order-1}
        let mut aug: Vec<Vec<RatFunc>> = vec![vec![RatFunc::zero(); unknowns + 1]; rows];
        for (ci, col) in cols.iter().enumerate().take(unknowns) {
            for (k, v) in col {
                let r = keys.iter().position(|kk| kk == k).unwrap();
                aug[r][ci] = v.clone();
            }
        }
        for (k, v) in &cols[order] {
            let r = keys.iter().position(|kk| kk == k).unwrap();
            aug[r][unknowns] = v.clone();
        }
        if let Some(sol) = solve_ratfunc_system(&mut aug, unknowns) {
            // sigma^order f = sum sol_i sigma^i f
            let mut coeffs: Vec<RatFunc> = sol.into_iter().map(|c| c.neg()).collect();
            coeffs.push(RatFunc::one());
            return ScalarOperator::new(case.clone(), OpKind::Sigma(index), coeffs);
        }
    }
    Err(CoreError::ResourceCap(
        "no sigma relation found within the order cap".into(),
    ))
}

/// Gaussian elimination over the rational-function field on an augmented
/// system; returns a solution when the system is consistent and determined
/// on its pivot columns (free columns set to zero).
fn solve_ratfunc_system(aug: &mut [Vec<RatFunc>], unknowns: usize) -> Option<Vec<RatFunc>> {
    let rows = aug.len();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(p) = (row..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, p);
        let pinv = aug[row][col].inv().ok()?;
        for j in col..=unknowns {
            aug[row][j] = aug[row][j].mul(&pinv);
        }
        for r in 0..rows {
            if r == row || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone();
            for j in col..=unknowns {
                let v = aug[r][j].sub(&f.mul(&aug[row][j]));
                aug[r][j] = v;
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    for r in row..rows {
        if !aug[r][unknowns].is_zero() {
            return None;
        }
    }
    let mut out = vec![RatFunc::zero(); unknowns];
    for (r, &pc) in pivots.iter().enumerate() {
        out[pc] = aug[r][unknowns].clone();
    }
    Some(out)
}

/// Build a (delta-op, sigma-op) pair annihilating the closed form in the
/// dilation/Mahler cases, or for the shift case from exponential terms; for
/// two-sigma cases, a (sigma1-op, sigma2-op) pair. Each output is verified
/// against the closed form before it is returned.
pub fn annihilators_of_closed_form(
    cf: &ClosedFormSolution,
    case: &OperatorCase,
    ctx: &ClosedFormCtx,
) -> Result<(ScalarOperator, ScalarOperator)> {
    if cf.is_zero() {
        return Err(CoreError::InvalidInput(
            "the zero function needs no annihilator".into(),
        ));
    }
    let (first, second) = match case {
        OperatorCase::QDilation { q } => {
            let (p, pieces) = power_log_pieces(cf)?;
            let delta_factors: Vec<(ConstantScalar, u32)> = pieces
                .iter()
                .map(|(b, j)| (b.as_scalar(), j + 1))
                .collect();
            let l_tilde = constant_product_operator(case, OpKind::Delta, &delta_factors)?;
            let mut sigma_factors: Vec<(ConstantScalar, u32)> = Vec::new();
            for (b, j) in &pieces {
                let mult = match b {
                    PowerExponent::Rational(r) if r.is_integer() => q.pow(
                        i64::try_from(r.to_integer())
                            .map_err(|_| CoreError::InvalidInput("exponent too large".into()))?,
                    )?,
                    PowerExponent::Rational(r) => {
                        return Err(CoreError::UndeclaredConstant(format!("q^({})", r)))
                    }
                    PowerExponent::Declared {
                        sigma_multiplier, ..
                    } => sigma_multiplier.clone(),
                };
                match sigma_factors.iter_mut().find(|(c, _)| *c == mult) {
                    Some((_, e)) => *e = (*e).max(j + 1),
                    None => sigma_factors.push((mult, j + 1)),
                }
            }
            let s_tilde =
                constant_product_operator(case, OpKind::Sigma(SigmaIndex::One), &sigma_factors)?;
            (
                l_tilde.compose_multiplication(&p)?.monic(),
                s_tilde.compose_multiplication(&p)?.monic(),
            )
        }
        OperatorCase::Mahler { .. } => {
            let (p, pieces) = power_log_pieces(cf)?;
            for (b, _) in &pieces {
                if b.as_rational().is_none() {
                    return Err(CoreError::IrrationalMahlerExponent);
                }
            }
            let delta_factors: Vec<(ConstantScalar, u32)> = pieces
                .iter()
                .map(|(b, j)| (b.as_scalar(), j + 1))
                .collect();
            let l_tilde = constant_product_operator(case, OpKind::Delta, &delta_factors)?;
            let l_full = l_tilde.compose_multiplication(&p)?.monic();
            let s_full = mahler_sigma_annihilator(case, SigmaIndex::One, cf)?.monic();
            (l_full, s_full)
        }
        OperatorCase::Shift => {
            // exponential terms r_i(x) e^{rate_i x}
            let denoms: Vec<RatFunc> = cf
                .terms()
                .iter()
                .map(|t| match t {
                    ClosedFormTerm::Exponential { coeff, .. } => {
                        RatFunc::from_poly(coeff.den().clone()).inv().unwrap()
                    }
                    _ => RatFunc::one(),
                })
                .collect();
            let p = RatFunc::from_poly(common_denominator(&denoms));
            let cleared = cf.scale_ratfunc(&p);
            let mut delta_factors: Vec<(ConstantScalar, u32)> = Vec::new();
            let mut sigma_factors: Vec<(ConstantScalar, u32)> = Vec::new();
            for t in cleared.terms() {
                let ClosedFormTerm::Exponential {
                    coeff,
                    rate,
                    shift_multiplier,
                } = t
                else {
                    return Err(CoreError::InvalidInput(
                        "shift-case closed forms are exponential sums".into(),
                    ));
                };
                let d = coeff.num().degree().unwrap_or(0) as u32 + 1;
                match delta_factors.iter_mut().find(|(c, _)| c == rate) {
                    Some((_, e)) => *e = (*e).max(d),
                    None => delta_factors.push((rate.clone(), d)),
                }
                let mult = if rate.is_zero() {
                    ConstantScalar::one()
                } else {
                    shift_multiplier
                        .clone()
                        .ok_or_else(|| CoreError::UndeclaredConstant(format!("e^({})", rate)))?
                };
                match sigma_factors.iter_mut().find(|(c, _)| *c == mult) {
                    Some((_, e)) => *e = (*e).max(d),
                    None => sigma_factors.push((mult, d)),
                }
            }
            let l_tilde = constant_product_operator(case, OpKind::Delta, &delta_factors)?;
            let s_tilde =
                constant_product_operator(case, OpKind::Sigma(SigmaIndex::One), &sigma_factors)?;
            (
                l_tilde.compose_multiplication(&p)?.monic(),
                s_tilde.compose_multiplication(&p)?.monic(),
            )
        }
        OperatorCase::TwoMahler { .. } => {
            let s1 = mahler_sigma_annihilator(case, SigmaIndex::One, cf)?.monic();
            let s2 = mahler_sigma_annihilator(case, SigmaIndex::Two, cf)?.monic();
            (s1, s2)
        }
        OperatorCase::TwoQDilation { q1, q2 } => {
            let (p, pieces) = power_log_pieces(cf)?;
            let mut f1: Vec<(ConstantScalar, u32)> = Vec::new();
            let mut f2: Vec<(ConstantScalar, u32)> = Vec::new();
            for (b, j) in &pieces {
                let r = b.as_rational().ok_or_else(|| {
                    CoreError::UndeclaredConstant("q^alpha for symbolic alpha".into())
                })?;
                if !r.is_integer() {
                    return Err(CoreError::UndeclaredConstant(format!("q^({})", r)));
                }
                let k = i64::try_from(r.to_integer())
                    .map_err(|_| CoreError::InvalidInput("exponent too large".into()))?;
                for (q, f) in [(q1, &mut f1), (q2, &mut f2)] {
                    let mult = q.pow(k)?;
                    match f.iter_mut().find(|(c, _)| *c == mult) {
                        Some((_, e)) => *e = (*e).max(j + 1),
                        None => f.push((mult, j + 1)),
                    }
                }
            }
            let s1 = constant_product_operator(case, OpKind::Sigma(SigmaIndex::One), &f1)?
                .compose_multiplication(&p)?
                .monic();
            let s2 = constant_product_operator(case, OpKind::Sigma(SigmaIndex::Two), &f2)?
                .compose_multiplication(&p)?
                .monic();
            (s1, s2)
        }
        OperatorCase::TwoShift { .. } => {
            return Err(CoreError::InvalidInput(
                "two-shift closed forms need declared per-sigma constants".into(),
            ))
        }
    };
    for op in [&first, &second] {
        let img = apply_operator_closed_form(op, cf, ctx)?;
        if !img.is_zero() {
            return Err(CoreError::Internal(
                "constructed annihilator fails verification".into(),
            ));
        }
    }
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::ratfunc;

    fn case_q_sym() -> OperatorCase {
        OperatorCase::q_dilation(ConstantScalar::generator(0)).unwrap()
    }

    fn delta_op(case: &OperatorCase, coeffs: Vec<RatFunc>) -> ScalarOperator {
        ScalarOperator::new(case.clone(), OpKind::Delta, coeffs).unwrap()
    }

    fn sigma_op(case: &OperatorCase, coeffs: Vec<RatFunc>) -> ScalarOperator {
        ScalarOperator::new(case.clone(), OpKind::Sigma(SigmaIndex::One), coeffs).unwrap()
    }

    #[test]
    fn first_order_pair_q_case() {
        // L = delta - 1, S = sigma - q annihilate f = x: A = [[1]], B = [[q]]
        let case = case_q_sym();
        let q = ConstantScalar::generator(0);
        let l = delta_op(&case, vec![RatFunc::from_i64(-1), RatFunc::one()]);
        let s = sigma_op(
            &case,
            vec![RatFunc::constant(q.clone().neg()), RatFunc::one()],
        );
        let (sys, basis) = build_dd_system(&l, &s).unwrap();
        assert_eq!(basis.dim(), 1);
        assert_eq!(sys.a().entry(0, 0), &RatFunc::one());
        assert_eq!(sys.b().entry(0, 0), &RatFunc::constant(q));
    }

    #[test]
    fn first_order_pair_mahler_case() {
        // L = delta - 1, S = sigma - x annihilate f = x in the q=2 Mahler
        // case: A = [[1]], B = [[x]]
        let case = OperatorCase::mahler(2).unwrap();
        let l = delta_op(&case, vec![RatFunc::from_i64(-1), RatFunc::one()]);
        let s = sigma_op(&case, vec![RatFunc::x().neg(), RatFunc::one()]);
        let (sys, _) = build_dd_system(&l, &s).unwrap();
        assert_eq!(sys.a().entry(0, 0), &RatFunc::one());
        assert_eq!(sys.b().entry(0, 0), &RatFunc::x());
    }

    #[test]
    fn higher_order_grid_dimension() {
        // orders n=2, m=3 with constant coefficients (annihilating sums of
        // x^alpha terms): dimension 6, consistent
        let case = case_q_sym();
        let gen = ConstantScalar::generator;
        let l = delta_op(
            &case,
            vec![
                RatFunc::constant(gen(1).mul(&gen(2))),
                RatFunc::constant(gen(1).add(&gen(2)).neg()),
                RatFunc::one(),
            ],
        );
        let s = sigma_op(
            &case,
            vec![
                RatFunc::constant(gen(3).mul(&gen(4)).mul(&gen(5)).neg()),
                RatFunc::constant(
                    gen(3).mul(&gen(4)).add(&gen(3).mul(&gen(5))).add(&gen(4).mul(&gen(5))),
                ),
                RatFunc::constant(gen(3).add(&gen(4)).add(&gen(5)).neg()),
                RatFunc::one(),
            ],
        );
        let (sys, basis) = build_dd_system(&l, &s).unwrap();
        assert_eq!(basis.dim(), 6);
        assert_eq!(sys.dim(), 6);
        assert!(check_consistency_dd(&sys).unwrap().is_consistent());
    }

    #[test]
    fn incompatible_pair_rejected() {
        // L = delta, S = sigma - x have no common solution in case Q: the
        // would-be 1x1 system is the spec's own violation example
        let case = case_q_sym();
        let l = delta_op(&case, vec![RatFunc::zero(), RatFunc::one()]);
        let s = sigma_op(&case, vec![RatFunc::x().neg(), RatFunc::one()]);
        assert!(matches!(
            build_dd_system(&l, &s),
            Err(CoreError::Inconsistent(_))
        ));
    }

    #[test]
    fn mahler_power_pair_order_two() {
        // f = x^{1/3}, q = 2: L = delta - 1/3, S = sigma^2 - x; the grid is
        // 1 x 2 with full span, so the built pair is consistent
        let case = OperatorCase::mahler(2).unwrap();
        let l = delta_op(
            &case,
            vec![
                RatFunc::constant(ConstantScalar::from_ratio(-1, 3)),
                RatFunc::one(),
            ],
        );
        let s = sigma_op(&case, vec![RatFunc::x().neg(), RatFunc::zero(), RatFunc::one()]);
        let (sys, basis) = build_dd_system(&l, &s).unwrap();
        assert_eq!(basis.dim(), 2);
        assert_eq!(sys.b().entry(0, 1), &RatFunc::one());
        assert_eq!(sys.b().entry(1, 0), &RatFunc::x());
        assert!(check_consistency_dd(&sys).unwrap().is_consistent());
    }

    #[test]
    fn trailing_zero_normalized_or_rejected() {
        // case Q: S = sigma^2 - q sigma has b0 = 0: normalized down to order 1
        let case = case_q_sym();
        let q = ConstantScalar::generator(0);
        let s = sigma_op(
            &case,
            vec![
                RatFunc::zero(),
                RatFunc::constant(q.neg()),
                RatFunc::one(),
            ],
        );
        let n = normalize_trailing(&s).unwrap();
        assert_eq!(n.order(), 1);
        // case M rejects
        let case_m = OperatorCase::mahler(2).unwrap();
        let s = sigma_op(
            &case_m,
            vec![RatFunc::zero(), RatFunc::x().neg(), RatFunc::one()],
        );
        assert!(matches!(
            normalize_trailing(&s),
            Err(CoreError::MahlerTrailingZero)
        ));
    }

    #[test]
    fn ss_system_examples() {
        // 2Q: S1 = sigma1 - q1, S2 = sigma2 - q2 (f = x): B = [[q1]], [[q2]]
        let q1 = ConstantScalar::generator(0);
        let q2 = ConstantScalar::generator(1);
        let case = OperatorCase::two_q_dilation(q1.clone(), q2.clone()).unwrap();
        let s1 = ScalarOperator::new(
            case.clone(),
            OpKind::Sigma(SigmaIndex::One),
            vec![RatFunc::constant(q1.clone().neg()), RatFunc::one()],
        )
        .unwrap();
        let s2 = ScalarOperator::new(
            case.clone(),
            OpKind::Sigma(SigmaIndex::Two),
            vec![RatFunc::constant(q2.clone().neg()), RatFunc::one()],
        )
        .unwrap();
        let (sys, _) = build_ss_system(&s1, &s2).unwrap();
        assert_eq!(sys.b1().entry(0, 0), &RatFunc::constant(q1));
        assert_eq!(sys.b2().entry(0, 0), &RatFunc::constant(q2));

        // 2M p=2, q=3 (f = x): B1 = [[x]], B2 = [[x^2]]
        let case = OperatorCase::two_mahler(2, 3).unwrap();
        let s1 = ScalarOperator::new(
            case.clone(),
            OpKind::Sigma(SigmaIndex::One),
            vec![RatFunc::x().neg(), RatFunc::one()],
        )
        .unwrap();
        let s2 = ScalarOperator::new(
            case.clone(),
            OpKind::Sigma(SigmaIndex::Two),
            vec![ratfunc(&[0, 0, -1], &[1]), RatFunc::one()],
        )
        .unwrap();
        let (sys, _) = build_ss_system(&s1, &s2).unwrap();
        assert_eq!(sys.b1().entry(0, 0), &RatFunc::x());
        assert_eq!(sys.b2().entry(0, 0), &ratfunc(&[0, 0, 1], &[1]));
        assert!(check_consistency_ss(&sys).unwrap().is_consistent());

        // orders (2, 2) with constant coefficients: 4-dimensional consistent
        // system (two-dilation case, symbolic multipliers)
        let gen = ConstantScalar::generator;
        let case = OperatorCase::two_q_dilation(gen(0), gen(1)).unwrap();
        let s1 = ScalarOperator::new(
            case.clone(),
            OpKind::Sigma(SigmaIndex::One),
            vec![
                RatFunc::constant(gen(2).mul(&gen(3))),
                RatFunc::constant(gen(2).add(&gen(3)).neg()),
                RatFunc::one(),
            ],
        )
        .unwrap();
        let s2 = ScalarOperator::new(
            case.clone(),
            OpKind::Sigma(SigmaIndex::Two),
            vec![
                RatFunc::constant(gen(4).mul(&gen(5))),
                RatFunc::constant(gen(4).add(&gen(5)).neg()),
                RatFunc::one(),
            ],
        )
        .unwrap();
        let (sys, basis) = build_ss_system(&s1, &s2).unwrap();
        assert_eq!(basis.dim(), 4);
        assert!(check_consistency_ss(&sys).unwrap().is_consistent());
    }

    #[test]
    fn round_trip_first_order_from_rational_function() {
        // L = delta - delta(f)/f, S = sigma - sigma(f)/f for rational f
        let case = OperatorCase::mahler(2).unwrap();
        let f = ratfunc(&[1], &[1, -1]);
        let df = case.delta_of(&f).unwrap().div(&f).unwrap();
        let sf = case
            .sigma_of(&f, SigmaIndex::One)
            .unwrap()
            .div(&f)
            .unwrap();
        let l = delta_op(&case, vec![df.neg(), RatFunc::one()]);
        let s = sigma_op(&case, vec![sf.neg(), RatFunc::one()]);
        let (sys, _) = build_dd_system(&l, &s).unwrap();
        assert_eq!(sys.a().entry(0, 0), &df);
        assert_eq!(sys.b().entry(0, 0), &sf);
    }

    #[test]
    fn closed_form_annihilators_mahler_power() {
        // f = x^{1/2}, Mahler q = 3: a sigma relation with rational
        // coefficients exists and both outputs annihilate f
        let case = OperatorCase::mahler(3).unwrap();
        let cf = ClosedFormSolution::power_log(RatFunc::one(), PowerExponent::rational(1, 2), 0);
        let (l, s) = annihilators_of_closed_form(&cf, &case, &ClosedFormCtx::empty()).unwrap();
        assert!(apply_operator_closed_form(&l, &cf, &ClosedFormCtx::empty())
            .unwrap()
            .is_zero());
        assert!(apply_operator_closed_form(&s, &cf, &ClosedFormCtx::empty())
            .unwrap()
            .is_zero());
        // the minimal relation is sigma f = x f (from (3-1)/2 = 1)
        assert_eq!(s.order(), 1);
        assert_eq!(s.coeffs()[0], RatFunc::x().neg());
    }

    #[test]
    fn closed_form_annihilators_log_dilation() {
        // f = log x, case Q: L = delta^2, S = (sigma - 1)^2
        let mut field = crate::scalar::ConstantField::new(&["q"]);
        let lq = field.declare("log_q");
        let case = case_q_sym();
        let cf = ClosedFormSolution::power_log(RatFunc::one(), PowerExponent::integer(0), 1);
        let ctx = ClosedFormCtx::with_log_sigma(lq);
        let (l, s) = annihilators_of_closed_form(&cf, &case, &ctx).unwrap();
        assert_eq!(
            l.coeffs(),
            &[RatFunc::zero(), RatFunc::zero(), RatFunc::one()]
        );
        assert_eq!(
            s.coeffs(),
            &[RatFunc::one(), RatFunc::from_i64(-2), RatFunc::one()]
        );
    }

    #[test]
    fn closed_form_annihilators_shift_exponential() {
        // f = e^{2x} (x + 1), case S with declared c = e^2:
        // L = (delta - 2)^2, S = (sigma - c)^2
        let c = ConstantScalar::generator(0);
        let case = OperatorCase::Shift;
        let cf = ClosedFormSolution::exponential(
            ratfunc(&[1, 1], &[1]),
            ConstantScalar::from_integer(2),
            Some(c.clone()),
        );
        let (l, s) = annihilators_of_closed_form(&cf, &case, &ClosedFormCtx::empty()).unwrap();
        assert_eq!(
            l.coeffs(),
            &[
                RatFunc::from_i64(4),
                RatFunc::from_i64(-4),
                RatFunc::one()
            ]
        );
        assert_eq!(
            s.coeffs(),
            &[
                RatFunc::constant(c.mul(&c)),
                RatFunc::constant(c.scale(&BigRational::from_integer((-2).into()))),
                RatFunc::one()
            ]
        );
    }

    #[test]
    fn built_system_solved_by_generator_series() {
        // for f = 1/(1-x) in the Mahler q=2 case, the generator vector of
        // expansions solves both matrix equations to truncation order
        use crate::series::{expand_ratfunc, ExpansionPoint};
        let case = OperatorCase::mahler(2).unwrap();
        let f = ratfunc(&[1], &[1, -1]);
        let df = case.delta_of(&f).unwrap().div(&f).unwrap();
        let sf = case.sigma_of(&f, SigmaIndex::One).unwrap().div(&f).unwrap();
        let l = delta_op(&case, vec![df.neg(), RatFunc::one()]);
        let s = sigma_op(&case, vec![sf.neg(), RatFunc::one()]);
        let (sys, _) = build_dd_system(&l, &s).unwrap();
        let n = 24;
        let w = expand_ratfunc(&f, ExpansionPoint::Zero, n, 1).unwrap();
        // delta(w) = A w
        let dw = w.euler_derivative();
        let aw = expand_ratfunc(sys.a().entry(0, 0), ExpansionPoint::Zero, n, 1)
            .unwrap()
            .mul(&w);
        assert!(dw.sub(&aw).is_zero_to_order());
        // sigma(w) = B w
        let sw = w.subst_pow(2);
        let bw = expand_ratfunc(sys.b().entry(0, 0), ExpansionPoint::Zero, n, 1)
            .unwrap()
            .mul(&w);
        assert!(sw.sub(&bw).truncate_to(n).is_zero_to_order());
    }
}
