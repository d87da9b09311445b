use consys_core::matrix::RatMatrix;
use consys_core::operators::*;
use consys_core::ratfunc::{ratfunc, RatFunc};
use consys_core::systems::*;

// hand-build the 2x2-order SS module matrices and compare against the
// library path, printing the residual of the consistency identity
fn main() {
    let case = OperatorCase::two_mahler(2, 3).unwrap();
    // sigma1^2 = -(1+x) sigma1 - x ; sigma2^2 = -x sigma2 - 2
    // basis g00, g10, g01, g11 (j-major: index = j*2 + i)
    let z = RatFunc::zero;
    let o = RatFunc::one;
    let s2 = |f: &RatFunc| case.sigma_of(f, SigmaIndex::Two).unwrap();
    let s1 = |f: &RatFunc| case.sigma_of(f, SigmaIndex::One).unwrap();
    let red1 = [ratfunc(&[0, -1], &[1]), ratfunc(&[-1, -1], &[1])]; // [-x, -(1+x)]
    let red2 = [ratfunc(&[-2], &[1]), ratfunc(&[0, -1], &[1])]; // [-2, -x]
    // B1 rows: sigma1(g00)=g10; sigma1(g10)=red1[0] g00 + red1[1] g10;
    // sigma1(g01)=g11; sigma1(g11)= s2(red1[0]) g01 + s2(red1[1]) g11
    let b1 = RatMatrix::from_rows(vec![
        vec![z(), o(), z(), z()],
        vec![red1[0].clone(), red1[1].clone(), z(), z()],
        vec![z(), z(), z(), o()],
        vec![z(), z(), s2(&red1[0]), s2(&red1[1])],
    ])
    .unwrap();
    // B2 rows: sigma2(g00)=g01; sigma2(g10)=g11;
    // sigma2(g01)=red2[0] g00 + red2[1] g01;
    // sigma2(g11)= s1(red2[0]) g10 + s1(red2[1]) g11
    let b2 = RatMatrix::from_rows(vec![
        vec![z(), z(), o(), z()],
        vec![z(), z(), z(), o()],
        vec![red2[0].clone(), z(), red2[1].clone(), z()],
        vec![z(), s1(&red2[0]), z(), s1(&red2[1])],
    ])
    .unwrap();
    let sys = SigmaSigmaSystem::new(case.clone(), b1, b2).unwrap();
    let rep = check_consistency_ss(&sys).unwrap();
    println!("hand residual = {}", rep.residual);
}
