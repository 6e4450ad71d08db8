use std::collections::BTreeSet;

use mahler::field::{rat, rat_int, RadicalMonomial};
use mahler::poly::Poly;
use mahler::ratfun::RationalFunction;
use mahler::residues::{mahler_report, VerificationRoute};
use mahler::structure::tree_of;
use mahler::Scalar;

fn poly(v: &[i64]) -> Poly<Scalar> {
    Poly::new(v.iter().map(|&x| Scalar::from_int(x)).collect())
}

fn summable_example() -> RationalFunction {
    let num = poly(&[0, -4, 1, 4, 0, 0, -1]);
    let den = poly(&[-2, 1]).pow(2).mul(&poly(&[-2, 0, 0, 1]).pow(2));
    RationalFunction::new(num, den).unwrap()
}

#[test]
fn summable_example_reduces_to_zero() {
    let f = summable_example();
    let r = mahler_report(&f, 3).unwrap();
    assert!(r.summable);
    assert!(r.residues_vanish());
    let data = r.tree_data.values().next().unwrap();
    assert_eq!(data.h, 1);
    assert_eq!(data.gamma, RadicalMonomial::from_rational(&rat_int(2)).principal_root(3));
    assert_eq!(r.verify_exact().unwrap(), VerificationRoute::Rational);
    let sol = r.solution.unwrap().to_rational_function().unwrap();
    let expect = RationalFunction::new(Poly::one(), poly(&[-2, 1]).pow(2)).unwrap();
    assert_eq!(sol, expect);
}

#[test]
fn torsion_example_is_not_summable() {
    let f = RationalFunction::new(Poly::one(), poly(&[1, 0, 0, 0, 0, 0, 1])).unwrap();
    let r = mahler_report(&f, 3).unwrap();
    assert!(!r.summable);
    let id = tree_of(&RadicalMonomial::root_of_unity(4, 1), 3);
    let data = &r.tree_data[&id];
    assert_eq!((data.h, data.e), (1, 2));
    let res = r.residues_for(&id).unwrap();
    let quarter = rat(1, 4);
    let mut count = 0;
    for i in 1..=2i64 {
        for l in 1..=2u32 {
            let alpha = RadicalMonomial::root_of_unity(12, 4 * i + 3i64.pow(l));
            let next = Scalar::zeta_pow(12, 4 * i + 3i64.pow(l + 1)).scale_rational(&quarter);
            assert_eq!(res.get(1, &alpha), next);
            count += 1;
        }
    }
    assert_eq!(count, 4);
    assert_eq!(res.residues[&1].len(), 4);
    assert!(r.respects_height_restriction());
    r.verify_exact().unwrap();
}

#[test]
fn hints_are_optional_for_binomials() {
    let f = summable_example();
    let bare = RationalFunction::with_hints(f.num().clone(), f.den().clone(), BTreeSet::new()).unwrap();
    assert!(mahler_report(&bare, 3).unwrap().summable);
}
