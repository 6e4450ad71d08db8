use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use mahler::expr::{parse, InputExpr};
use mahler::field::{rat, rat_int, Field, RadicalMonomial};
use mahler::oracle::{oracle_summable, AnsatzBounds};
use mahler::poly::Poly;
use mahler::ratfun::{find_poles, join_lt, partial_fractions, recombine, split_lt, PartialFraction, RationalFunction};
use mahler::residues::mahler_report;
use mahler::structure::{bouquet, tree_of};
use mahler::vcoeffs::table;
use mahler::Scalar;

fn poly(v: &[i64]) -> Poly<Scalar> {
    Poly::new(v.iter().map(|&x| Scalar::from_int(x)).collect())
}

fn cyclo(n: u64, cs: &[(i64, i64)]) -> Scalar {
    cs.iter()
        .enumerate()
        .fold(Scalar::zero(), |acc, (j, &(a, b))| acc.add_ref(&Scalar::zeta_pow(n, j as i64).scale_rational(&rat(a, b))))
}

fn small_rat() -> impl Strategy<Value = (i64, i64)> {
    (-6i64..=6, 1i64..=4)
}

/// Elements of Q(ζ_n) and of Q(ζ_n)(2^(1/3)).
fn element() -> impl Strategy<Value = Scalar> {
    (prop::sample::select(vec![1u64, 3, 4, 5, 7, 9, 12, 21]), prop::collection::vec(small_rat(), 1..6), any::<bool>(), prop::collection::vec(small_rat(), 1..4)).prop_map(
        |(n, a, radical, b)| {
            let x = cyclo(n, &a);
            if !radical {
                return x;
            }
            let rho = RadicalMonomial::rational_power(&rat_int(2), &rat(1, 3)).value();
            x.add_ref(&cyclo(n, &b).mul_ref(&rho)).add_ref(&rho.pow_u(2))
        },
    )
}

fn monomial() -> impl Strategy<Value = RadicalMonomial> {
    (1i64..=9, 1i64..=4, 1u64..=12, 0i64..12, 0i64..4).prop_map(|(a, b, n, k, v)| {
        RadicalMonomial::from_rational(&rat(a, b))
            .mul(&RadicalMonomial::root_of_unity(n, k))
            .mul(&RadicalMonomial::rational_power(&rat_int(3), &rat(v, 4)))
    })
}

/// A rational function with rational poles among {2, 3, 5, 1/2} and a Laurent part.
fn rational_function(poles: &'static [(i64, i64)]) -> impl Strategy<Value = RationalFunction> {
    (prop::collection::vec((0..poles.len(), 1usize..=2, small_rat()), 0..4), prop::collection::vec((-2i64..=3, small_rat()), 0..3)).prop_map(
        move |(terms, laurent)| {
            let mut pf = PartialFraction::zero();
            for (i, k, (a, b)) in terms {
                let (u, v) = poles[i];
                pf.add_term(&RadicalMonomial::from_rational(&rat(u, v)), k, &Scalar::rational(rat(a, b)));
            }
            let mut l = mahler::ratfun::LaurentPoly::zero();
            for (e, (a, b)) in laurent {
                l.add_term(e, &Scalar::rational(rat(a, b)));
            }
            join_lt(&l, &recombine(&pf).unwrap()).unwrap()
        },
    )
}

const POLES: &[(i64, i64)] = &[(2, 1), (3, 1), (5, 1), (1, 2)];

fn input_expr() -> impl Strategy<Value = InputExpr> {
    let leaf = prop_oneof![
        (0u32..50).prop_map(|n| InputExpr::Int(BigInt::from(n))),
        Just(InputExpr::X),
        (1u64..13).prop_map(InputExpr::Zeta),
        ((1i64..9), (1i64..4), prop::sample::select(vec![2u64, 4, 8])).prop_map(|(a, b, n)| InputExpr::Root(rat(a, b), n)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| InputExpr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| InputExpr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| InputExpr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| InputExpr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| InputExpr::Div(Box::new(a), Box::new(b))),
            (inner, -3i64..=4).prop_map(|(a, k)| InputExpr::Pow(Box::new(a), k)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_is_two_sided(a in element()) {
        prop_assume!(!a.is_zero());
        let b = a.try_inv().unwrap();
        prop_assert_eq!(a.mul_ref(&b), Scalar::from_int(1));
        prop_assert_eq!(b.mul_ref(&a), Scalar::from_int(1));
    }

    #[test]
    fn arithmetic_is_a_commutative_ring(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
    }

    #[test]
    fn pow_p_composes(a in monomial(), p in 2u64..=3, s in 0u32..3, t in 0u32..3) {
        prop_assert_eq!(a.pow_p(p, s).pow_p(p, t), a.pow_p(p, s + t));
    }

    #[test]
    fn tree_is_constant_on_bouquets(a in monomial(), p in 2u64..=3, h in 0u32..3) {
        let gamma = a.pow_p(p, 2);
        let id = tree_of(&gamma, p);
        for beta in bouquet(&gamma, h, p) {
            prop_assert_eq!(&tree_of(&beta, p), &id);
        }
    }

    #[test]
    fn top_universal_coefficient(p in 2u64..=4, m in 1usize..=4) {
        let vt = table(p, m);
        for s in 1..=m {
            prop_assert_eq!(vt.get(s, s).clone(), rat(1, p.pow(s as u32) as i64));
        }
    }

    #[test]
    fn partial_fractions_recombine(f in rational_function(POLES)) {
        let (fl, ft) = split_lt(&f).unwrap();
        let pf = if ft.is_zero() {
            PartialFraction::zero()
        } else {
            partial_fractions(&ft, &find_poles(ft.den(), ft.hints()).unwrap()).unwrap()
        };
        prop_assert_eq!(join_lt(&fl, &recombine(&pf).unwrap()).unwrap(), f);
    }

    #[test]
    fn split_is_sigma_stable(f in rational_function(POLES), p in 2u64..=3) {
        let (fl, ft) = split_lt(&f).unwrap();
        let (sl, st) = split_lt(&f.sigma(p)).unwrap();
        prop_assert_eq!(sl, fl.sigma(p));
        prop_assert_eq!(st, ft.sigma(p));
    }

    #[test]
    fn delta_kernel_is_constants(f in rational_function(POLES), c in small_rat(), p in 2u64..=3) {
        let g = f.add(&RationalFunction::new(Poly::constant(Scalar::rational(rat(c.0, c.1))), Poly::one()).unwrap()).unwrap();
        let constant = g.num().deg0() == 0 && g.den().deg0() == 0;
        prop_assert_eq!(g.delta(p).unwrap().is_zero(), constant);
    }

    #[test]
    fn render_parses_back(e in input_expr()) {
        prop_assert_eq!(parse(&e.render(), 2).unwrap(), e);
    }

    #[test]
    fn residues_are_linear(f in rational_function(POLES), g in rational_function(POLES), a in small_rat(), b in small_rat(), p in 2u64..=3) {
        let (a, b) = (Scalar::rational(rat(a.0, a.1)), Scalar::rational(rat(b.0, b.1)));
        let h = f.scale(&a).add(&g.scale(&b)).unwrap();
        let (rf, rg, rh) = (mahler_report(&f, p).unwrap(), mahler_report(&g, p).unwrap(), mahler_report(&h, p).unwrap());
        for res in &rh.tree_residues {
            let same = |r: &mahler::residues::MahlerReport| r.residues_for(&res.id).map_or(true, |x| (x.gamma.clone(), x.h) == (res.gamma.clone(), res.h));
            prop_assume!(same(&rf) && same(&rg));
        }
        for res in rf.tree_residues.iter().chain(&rg.tree_residues) {
            prop_assume!(rh.residues_for(&res.id).map_or(true, |x| (x.gamma.clone(), x.h) == (res.gamma.clone(), res.h)));
        }
        let ids: std::collections::BTreeSet<_> = rf.tree_residues.iter().chain(&rg.tree_residues).chain(&rh.tree_residues).map(|r| r.id.clone()).collect();
        for id in ids {
            let get = |r: &mahler::residues::MahlerReport, k, alpha: &RadicalMonomial| r.residues_for(&id).map_or_else(Scalar::zero, |x| x.get(k, alpha));
            let mut poles = std::collections::BTreeSet::new();
            for r in [&rf, &rg, &rh] {
                if let Some(x) = r.residues_for(&id) {
                    for (k, m) in &x.residues {
                        for alpha in m.keys() {
                            poles.insert((*k, alpha.clone()));
                        }
                    }
                }
            }
            for (k, alpha) in poles {
                let lhs = get(&rh, k, &alpha);
                let rhs = a.mul_ref(&get(&rf, k, &alpha)).add_ref(&b.mul_ref(&get(&rg, k, &alpha)));
                prop_assert_eq!(lhs, rhs);
            }
        }
        for theta in rf.residues_at_infinity.keys().chain(rg.residues_at_infinity.keys()).chain(rh.residues_at_infinity.keys()) {
            let get = |r: &mahler::residues::MahlerReport| mahler::residues::residue_at_infinity(&r.residues_at_infinity, *theta);
            prop_assert_eq!(get(&rh), a.mul_ref(&get(&rf)).add_ref(&b.mul_ref(&get(&rg))));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn oracle_agrees_with_residues(
        g in rational_function(POLES),
        torsion in any::<bool>(),
        p in 2u64..=3,
        perturb in 0u8..4,
        c in (1i64..=6, 1i64..=4),
    ) {
        // Φ_3 for p = 2 and Φ_4 for p = 3: roots on a cycle
        let cyclo = if p == 2 { poly(&[1, 1, 1]) } else { poly(&[1, 0, 1]) };
        let g = if torsion { g.add(&RationalFunction::new(poly(&[1, 2]), cyclo.clone()).unwrap()).unwrap() } else { g };
        let mut f = g.delta(p).unwrap();
        let c = Scalar::rational(rat(c.0, c.1));
        let bump = match perturb {
            1 => RationalFunction::new(Poly::constant(c), poly(&[-7, 1])).unwrap(),
            2 => RationalFunction::new(poly(&[0, 0, 0, 0, 0, 1]).scale(&c), Poly::one()).unwrap(),
            3 => RationalFunction::new(Poly::constant(c), cyclo).unwrap(),
            _ => RationalFunction::zero(),
        };
        f = f.add(&bump).unwrap();
        let r = mahler_report(&f, p).unwrap();
        let o = oracle_summable(&f, p, &AnsatzBounds::default()).unwrap();
        prop_assert_eq!(r.summable, o.is_some());
        prop_assert_eq!(r.summable, perturb == 0);
        prop_assert_eq!(r.residues_vanish(), r.summable);
        if let Some(w) = o {
            prop_assert_eq!(w.to_rational_function().unwrap().delta(p).unwrap(), f);
        }
    }
}

