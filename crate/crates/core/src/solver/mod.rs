//! Series extension from scalar operators, rational reconstruction from
//! truncated series, and the certified guess-and-verify rational solver.
//!
//! [`extend_series`] extends a seed to a solution series of one operator by
//! a per-coefficient recurrence; [`pade_reconstruct`] finds a rational
//! function matching a truncated series by an exact null-space computation;
//! [`solve_rational`] chains the two and verifies the candidate symbolically
//! against every supplied operator, so a returned certificate is never
//! false. "Not certified" is deliberately weaker than "irrational": the tool
//! never claims irrationality.

pub mod constant_systems;
pub mod gen_instance;

use num_rational::BigRational;

use crate::error::{CoreError, Result};
use crate::operators::{OpKind, ScalarOperator};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::scalar::ConstantScalar;
use crate::series::PuiseuxSeries;

/// Budget for reconstruction: series order, degree bound and doubling caps.
///
/// The degree bound is clamped so the (D, D) system stays overdetermined:
/// D <= floor(N/2) - 1.
#[derive(Clone, Debug)]
pub struct ReconstructionBudget {
    /// Series truncation order to extend to.
    pub order: i64,
    /// Maximum numerator/denominator degree for reconstruction.
    pub max_degree: usize,
    /// Orders are doubled on failure up to this cap.
    pub max_order: i64,
}

impl Default for ReconstructionBudget {
    fn default() -> Self {
        ReconstructionBudget {
            order: crate::series::DEFAULT_ORDER,
            max_degree: 16,
            max_order: 1024,
        }
    }
}

/// The image of the monomial x^m under the operator, exactly, known through
/// `wanted` coefficients past its valuation.
fn op_image_monomial(op: &ScalarOperator, m: i64, wanted: i64) -> Result<PuiseuxSeries> {
    let mono = PuiseuxSeries::monomial(ConstantScalar::one(), m, 1, m + wanted);
    op.apply_series(&mono)
}

/// Lower bound for the valuation of the image of x^m, cheap to evaluate.
fn op_image_valuation_bound(op: &ScalarOperator, m: i64) -> i64 {
    let case_factor = |i: usize| -> i64 {
        match (&op.kind, &op.case) {
            (OpKind::Sigma(_), crate::operators::OperatorCase::Mahler { q }) => {
                (*q as i64).pow(i as u32)
            }
            (OpKind::Sigma(idx), crate::operators::OperatorCase::TwoMahler { q1, q2 }) => {
                let q = match idx {
                    crate::operators::SigmaIndex::One => *q1,
                    crate::operators::SigmaIndex::Two => *q2,
                };
                (q as i64).pow(i as u32)
            }
            _ => 1,
        }
    };
    let mut bound = i64::MAX;
    for (i, c) in op.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // coefficient valuation in the local parameter
        let cv = match op.case.expansion_point() {
            crate::series::ExpansionPoint::Zero => c.valuation_at_zero().unwrap_or(0),
            crate::series::ExpansionPoint::Infinity => -c.degree_at_infinity().unwrap_or(0),
        };
        // delta does not move the exponent (euler) or moves it up by one
        // (shift case at infinity); sigma scales it in the Mahler cases
        let shifted = match op.kind {
            OpKind::Delta => {
                if matches!(op.case, crate::operators::OperatorCase::Shift) {
                    m + i as i64
                } else {
                    m
                }
            }
            OpKind::Sigma(_) => m * case_factor(i),
        };
        bound = bound.min(cv + shifted);
    }
    bound
}

/// Extend a seed series to a solution of op(y) = 0 of the given order by
/// the coefficient recurrence. The seed must be a ramification-1 series; its
/// known coefficients are taken as exact. Errors:
/// - a vanishing determination slot is a resonance at that index;
/// - a seed that contradicts the operator reports the first bad index;
/// - interference of later unknowns (Mahler, deep trailing valuation)
///   surfaces as an insufficient-order error.
pub fn extend_series(op: &ScalarOperator, seed: &PuiseuxSeries, order: i64) -> Result<PuiseuxSeries> {
    extend_series_multi(&[op.clone()], seed, order)
}

/// Extension driven by one or more operators annihilating the same series:
/// at each index the first operator whose recurrence determines the
/// coefficient is used (later ones break resonances of earlier ones). The
/// result is verified against every operator.
pub fn extend_series_multi(
    ops: &[ScalarOperator],
    seed: &PuiseuxSeries,
    order: i64,
) -> Result<PuiseuxSeries> {
    if ops.is_empty() {
        return Err(CoreError::InvalidInput("no operators supplied".into()));
    }
    let seed = seed.compact();
    if seed.ram() != 1 {
        return Err(CoreError::BadRamification(
            seed.ram(),
            "series extension works on integer exponents".into(),
        ));
    }
    // polynomial coefficients, same solution space
    let ops: Vec<ScalarOperator> = ops.iter().map(|o| o.primitive()).collect();
    // working slack: deepest slot any recurrence may need
    let slack: i64 = ops
        .iter()
        .map(|op| {
            op.coeffs()
                .iter()
                .filter(|c| !c.is_zero())
                .map(|c| {
                    c.num().degree().unwrap_or(0) as i64 + c.den().degree().unwrap_or(0) as i64
                })
                .max()
                .unwrap_or(0)
                + op.order() as i64
        })
        .max()
        .unwrap_or(0)
        + 2;
    let work = order + slack;

    let seed_known = seed.trunc().min(order);
    let mut y = seed.truncate_to(seed_known);
    // residuals per operator, maintained incrementally
    let mut residuals: Vec<PuiseuxSeries> = Vec::new();
    for op in &ops {
        let mut r = PuiseuxSeries::zero(2 * work + 4);
        if let Some((v, _)) = y.valuation() {
            for k in v..=y.trunc() {
                let c = y.coeff_index(k);
                if c.is_zero() {
                    continue;
                }
                r = r.add(&op_image_monomial(op, k, 2 * work + 4 - k)?.scale(&c));
            }
        }
        residuals.push(r);
    }
    // seed slots must already be satisfied where no unknown can help:
    // anything below the first determination slot of the first unknown
    let first_unknown = seed_known + 1;
    for (oi, op) in ops.iter().enumerate() {
        let cutoff = op_image_valuation_bound(op, first_unknown);
        if let Some((rv, _)) = residuals[oi].valuation() {
            if rv < cutoff {
                return Err(CoreError::SeedMismatch { index: rv });
            }
        }
    }

    for m in first_unknown..=order {
        let mut determined = false;
        let mut resonant = false;
        for (oi, op) in ops.iter().enumerate() {
            let im = op_image_monomial(op, m, (2 * work + 4 - m).max(4))?;
            let Some((slot, _)) = im.valuation() else {
                resonant = true;
                continue;
            };
            // later unknowns must not reach this slot
            if op_image_valuation_bound(op, m + 1) <= slot {
                continue;
            }
            let alpha = im.coeff_index(slot);
            let rhs = residuals[oi].coeff_index(slot);
            let c = rhs.neg().div(&alpha)?;
            // record the coefficient and update every residual
            if !c.is_zero() {
                y = y
                    .add(&PuiseuxSeries::monomial(c.clone(), m, 1, m))
                    .truncate_to(m);
                for (ri, ro) in ops.iter().enumerate() {
                    let imr = op_image_monomial(ro, m, 2 * work + 4 - m)?;
                    residuals[ri] = residuals[ri].add(&imr.scale(&c));
                }
            } else {
                y = y.truncate_to(m).add(&PuiseuxSeries::zero(m));
            }
            determined = true;
            break;
        }
        if !determined {
            if resonant {
                return Err(CoreError::Resonance { index: m });
            }
            return Err(CoreError::InsufficientOrder(format!(
                "recurrence is not triangular at index {}",
                m
            )));
        }
    }

    let y = PuiseuxSeries::new(
        1,
        y.valuation().map(|(v, _)| v).unwrap_or(order + 1),
        (y.valuation().map(|(v, _)| v).unwrap_or(order + 1)..=order)
            .map(|k| y.coeff_index(k))
            .collect(),
        order,
    );
    // final verification catches interference and inconsistent seeds
    for op in &ops {
        let r = op.apply_series(&y)?;
        if !r.is_zero_to_order() {
            let (v, _) = r.valuation().unwrap();
            return Err(CoreError::SeedMismatch { index: v });
        }
    }
    Ok(y)
}

/// Outcome of a reconstruction attempt.
#[derive(Clone, Debug)]
pub enum Reconstruction {
    Candidate(RatFunc),
    NoCandidate,
}

/// Rational function of numerator/denominator degree <= budget matching the
/// series through its truncation order, by exact null-space computation of
/// the linear Pade system. All null-space vectors must reduce to the same
/// fraction, otherwise no candidate is reported.
pub fn pade_reconstruct(s: &PuiseuxSeries, budget: &ReconstructionBudget) -> Result<Reconstruction> {
    let s = s.compact();
    if s.ram() != 1 {
        return Err(CoreError::BadRamification(
            s.ram(),
            "reconstruction needs integer exponents".into(),
        ));
    }
    if s.is_zero_to_order() {
        return Ok(Reconstruction::Candidate(RatFunc::zero()));
    }
    let (v, _) = s.valuation().unwrap();
    let u = s.mul_monomial_index(&ConstantScalar::one(), -v); // valuation 0
    let n_rel = u.trunc();
    let mut d = 4usize.min(budget.max_degree);
    loop {
        let d_cap = ((n_rel / 2) - 1).max(1) as usize;
        let deg = d.min(d_cap).min(budget.max_degree);
        if let Some(c) = try_pade(&u, deg, n_rel)? {
            let shifted = attach_monomial(&c, v)?;
            return Ok(Reconstruction::Candidate(shifted));
        }
        if deg >= budget.max_degree || deg >= d_cap {
            return Ok(Reconstruction::NoCandidate);
        }
        d *= 2;
    }
}

fn attach_monomial(f: &RatFunc, v: i64) -> Result<RatFunc> {
    if v == 0 {
        return Ok(f.clone());
    }
    let m = RatFunc::from_poly(Poly::monomial(ConstantScalar::one(), v.unsigned_abs() as usize));
    if v > 0 {
        Ok(f.mul(&m))
    } else {
        f.div(&m)
    }
}

fn try_pade(u: &PuiseuxSeries, d: usize, n_rel: i64) -> Result<Option<RatFunc>> {
    // unknowns: q_0..q_d; equations from coefficients d+1..n_rel of q * u
    let rows: Vec<Vec<ConstantScalar>> = ((d as i64 + 1)..=n_rel)
        .map(|k| {
            (0..=d)
                .map(|j| u.coeff_index(k - j as i64))
                .collect::<Vec<_>>()
        })
        .collect();
    if rows.is_empty() {
        return Ok(None);
    }
    let kernel = scalar_nullspace(&rows, d + 1);
    if kernel.is_empty() {
        return Ok(None);
    }
    let mut found: Option<RatFunc> = None;
    for qvec in &kernel {
        let q = Poly::from_coeffs(qvec.clone());
        if q.is_zero() {
            return Ok(None);
        }
        // p = (q * u) truncated to degree d
        let mut pcoeffs = vec![ConstantScalar::zero(); d + 1];
        for (k, pc) in pcoeffs.iter_mut().enumerate() {
            let mut acc = ConstantScalar::zero();
            for j in 0..=d.min(k) {
                acc = acc.add(&q.coeff(j).mul(&u.coeff_index(k as i64 - j as i64)));
            }
            *pc = acc;
        }
        let p = Poly::from_coeffs(pcoeffs);
        let cand = RatFunc::new(p, q)?;
        // candidate must match the series on every known coefficient
        let check = crate::series::expand_ratfunc(
            &cand,
            crate::series::ExpansionPoint::Zero,
            n_rel,
            1,
        )?;
        if !check.sub(u).truncate_to(n_rel).is_zero_to_order() {
            return Ok(None);
        }
        match &found {
            None => found = Some(cand),
            Some(prev) => {
                if *prev != cand {
                    // ambiguous solution space
                    return Ok(None);
                }
            }
        }
    }
    Ok(found)
}

/// Null-space basis of a rows x cols scalar matrix.
pub fn scalar_nullspace(rows: &[Vec<ConstantScalar>], cols: usize) -> Vec<Vec<ConstantScalar>> {
    let mut m: Vec<Vec<ConstantScalar>> = rows.to_vec();
    let nrows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let pinv = m[row][col].inv().expect("nonzero pivot");
        for j in 0..cols {
            m[row][j] = m[row][j].mul(&pinv);
        }
        for r in 0..nrows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..cols {
                let v = m[r][j].sub(&f.mul(&m[row][j]));
                m[r][j] = v;
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![ConstantScalar::zero(); cols];
        v[free] = ConstantScalar::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = m[r][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Outcome of the certified rational solve.
#[derive(Clone, Debug)]
pub enum SolveOutcome {
    /// A rational function verified symbolically against every operator.
    Certified(RatFunc),
    /// No certificate found within the budget; no irrationality claim.
    NotCertified,
}

/// Extend the seed using the operators, reconstruct a rational candidate and
/// verify it symbolically against every operator. A seed that contradicts an
/// operator is reported with the failing index.
pub fn solve_rational(
    ops: &[ScalarOperator],
    seed: &PuiseuxSeries,
    budget: &ReconstructionBudget,
) -> Result<SolveOutcome> {
    let mut order = budget.order;
    let mut budget_now = budget.clone();
    loop {
        let y = extend_series_multi(ops, seed, order)?;
        if let Reconstruction::Candidate(cand) = pade_reconstruct(&y, &budget_now)? {
            let mut ok = true;
            for op in ops {
                if !op.apply_ratfunc(&cand)?.is_zero() {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(SolveOutcome::Certified(cand));
            }
        }
        if order * 2 > budget.max_order {
            return Ok(SolveOutcome::NotCertified);
        }
        order *= 2;
        budget_now.max_degree = (budget_now.max_degree * 2).min(budget.max_degree.max(budget_now.max_degree));
        budget_now.order = order;
    }
}
