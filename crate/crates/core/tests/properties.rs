use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;

use eulercat_core::corpus::{acyclic_random, concrete_category, concrete_random};
use eulercat_core::euler::{
    chi_ext_l2_of_sd_op, chi_leinster, chi_series, coweighting, mobius_inversion, series_num_den,
    series_rational_function, weighting, EulerResult, Undefined,
};
use eulercat_core::exactalg::{
    adjugate, det, eval_at_minus_one, inverse, reduce, series_coefficients, taylor_coefficients,
    Matrix, Poly, Rational,
};
use eulercat_core::fincat::{from_monoid, incidence_matrix, is_acyclic, opposite, FinCat};
use eulercat_core::nerve::{
    chains_ending_at, count_nondegenerate_by_enumeration, count_nondegenerate_by_matrix,
    counts_by_end, finite_level_counts, nondegenerate_chains,
};
use eulercat_core::subdivision::sd;

/// Chains are only walked one by one below this count.
const ENUMERATION_LIMIT: u64 = 200_000;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn rational_matrix() -> impl Strategy<Value = Matrix<Rational>> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec((-3i64..=3, 1i64..=3), n * n)
            .prop_map(move |v| Matrix::from_fn(n, n, |i, j| q(v[i * n + j].0, v[i * n + j].1)))
    })
}

fn small_poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 1..=max_degree + 1).prop_map(|v| Poly::from_ints(&v))
}

fn concrete() -> impl Strategy<Value = FinCat> {
    (
        prop::collection::vec(1usize..=3, 1..=3),
        prop::collection::vec(any::<u64>(), 1..=3),
    )
        .prop_filter_map("closure too large", |(sizes, raw)| {
            let n = sizes.len();
            let gens: Vec<(usize, usize, Vec<usize>)> = raw
                .iter()
                .map(|&r| {
                    let (d, c) = ((r % n as u64) as usize, (r / 7 % n as u64) as usize);
                    let vals = (0..sizes[d])
                        .map(|k| (r >> (8 + 2 * k)) as usize % sizes[c])
                        .collect();
                    (d, c, vals)
                })
                .collect();
            concrete_category(&sizes, &gens, 20)
        })
}

fn monoid() -> impl Strategy<Value = FinCat> {
    (2usize..=3, prop::collection::vec(0usize..3, 4)).prop_filter_map(
        "not associative",
        |(size, cells)| {
            let el: Vec<String> = ["e", "a", "b"][..size]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let mut table = BTreeMap::new();
            for i in 1..size {
                for j in 1..size {
                    let v = cells[(i - 1) * 2 + (j - 1)] % size;
                    table.insert((el[i].clone(), el[j].clone()), el[v].clone());
                }
            }
            from_monoid(&el, "e", &table).ok()
        },
    )
}

fn acyclic() -> impl Strategy<Value = FinCat> {
    (any::<u64>(), 0usize..3)
        .prop_map(|(seed, k)| acyclic_random(3, 5, seed).swap_remove(k).category)
}

fn any_category() -> impl Strategy<Value = FinCat> {
    prop_oneof![acyclic(), concrete(), monoid()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjugate_identity(m in rational_matrix()) {
        let n = m.rows();
        let d = det(&m).unwrap();
        let a = adjugate(&m).unwrap();
        let scaled = Matrix::identity(n).scale(&d);
        prop_assert_eq!(m.mul(&a), scaled.clone());
        prop_assert_eq!(a.mul(&m), scaled);
    }

    #[test]
    fn inverse_exists_iff_det_nonzero(m in rational_matrix()) {
        let d = det(&m).unwrap();
        match inverse(&m).unwrap() {
            Some(inv) => {
                prop_assert!(!d.is_zero());
                prop_assert_eq!(m.mul(&inv), Matrix::identity(m.rows()));
            }
            None => prop_assert!(d.is_zero()),
        }
    }

    #[test]
    fn reduce_is_canonical(num in small_poly(4), den in small_poly(4), common in small_poly(2)) {
        prop_assume!(!den.coeff(0).is_zero() && !common.coeff(0).is_zero());
        let r = reduce(&num, &den).unwrap();
        prop_assert_eq!(reduce(r.num(), r.den()).unwrap(), r.clone());
        prop_assert_eq!(r.num().gcd(r.den()).degree(), Some(0));
        // multiplying through by a common factor changes nothing
        prop_assert_eq!(reduce(&(&num * &common), &(&den * &common)).unwrap(), r.clone());
        prop_assert_eq!(
            taylor_coefficients(&r, 10).unwrap(),
            series_coefficients(&num, &den, 10).unwrap()
        );
        let minus_one = -Rational::one();
        let d = den.eval(&minus_one);
        if !d.is_zero() {
            prop_assert_eq!(eval_at_minus_one(&r), Some(num.eval(&minus_one) / d));
        }
    }

    #[test]
    fn nerve_counts_agree(c in any_category(), n in 0usize..=8) {
        let matrix = count_nondegenerate_by_matrix(&c, n);
        let by_end: BigUint = counts_by_end(&c, n).iter().sum();
        prop_assert_eq!(&by_end, &matrix);
        if matrix <= BigUint::from(ENUMERATION_LIMIT) {
            prop_assert_eq!(count_nondegenerate_by_enumeration(&c, n), matrix.clone());
            let level = nondegenerate_chains(&c, n);
            prop_assert_eq!(BigUint::from(level.len()), matrix);
            prop_assert!(level.chains.iter().all(|ch| ch.is_nondegenerate(&c) && ch.len() == n));
            // the chains split by their final object
            let split: usize = c.object_ids().map(|y| chains_ending_at(&c, n, y).len()).sum();
            prop_assert_eq!(split, level.len());
        }
    }

    #[test]
    fn opposite_transposes_the_incidence_matrix(c in any_category()) {
        prop_assert_eq!(incidence_matrix(&opposite(&c)), incidence_matrix(&c).transpose());
        prop_assert!(opposite(&c).check_associativity().is_ok());
    }

    #[test]
    fn mobius_sum_is_the_leinster_value(c in any_category()) {
        if let Some(inv) = mobius_inversion(&c) {
            let total = inv.entry_sum();
            let w: Rational = weighting(&c).unwrap().into_iter().sum();
            let k: Rational = coweighting(&c).unwrap().into_iter().sum();
            prop_assert_eq!(&w, &total);
            prop_assert_eq!(&k, &total);
            prop_assert_eq!(chi_leinster(&c), EulerResult::Defined(total));
        }
    }

    #[test]
    fn series_poles_need_a_singular_incidence_matrix(c in any_category()) {
        // det(E − (Z − E)t) at t = −1 is det Z
        if chi_series(&c) == EulerResult::Undefined(Undefined::PoleAtMinusOne) {
            prop_assert!(det(&incidence_matrix(&c).to_rational()).unwrap().is_zero());
        }
    }

    #[test]
    fn extended_l2_agrees_with_series(c in any_category()) {
        // level sizes + recurrence fitting against det/adjugate + gcd reduction
        prop_assert_eq!(chi_ext_l2_of_sd_op(&c), chi_series(&c));
    }

    #[test]
    fn subdivision_levels(c in acyclic()) {
        let s = sd(&c).unwrap();
        prop_assert!(is_acyclic(&s.category));
        let levels = finite_level_counts(&c).unwrap();
        for (n, count) in levels.iter().enumerate() {
            let at_level = s.level.iter().filter(|&&l| l == n).count();
            prop_assert_eq!(&BigUint::from(at_level), count);
        }
        let so = sd(&opposite(&c)).unwrap();
        prop_assert_eq!(so.category.num_objects(), s.category.num_objects());
        let mut a = s.level.clone();
        let mut b = so.level.clone();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn pole_witness() {
    let c = eulercat_core::corpus::pole_witness();
    let (num, den) = series_num_den(&c);
    assert_eq!(den, Poly::from_ints(&[1, -2, -3]));
    assert_eq!(num, Poly::from_ints(&[2, 3]));
    assert_eq!(
        chi_series(&c),
        EulerResult::Undefined(Undefined::PoleAtMinusOne)
    );
    assert!(det(&incidence_matrix(&c).to_rational()).unwrap().is_zero());
    // 2 + 3t and (1 − 3t)(1 + t) share no factor, so the pole survives reduction
    assert_eq!(series_rational_function(&c).den().degree(), Some(2));
}

#[test]
fn random_concrete_poles_have_singular_incidence() {
    for nc in concrete_random(300, 5) {
        if chi_series(&nc.category) == EulerResult::Undefined(Undefined::PoleAtMinusOne) {
            assert!(
                det(&incidence_matrix(&nc.category).to_rational())
                    .unwrap()
                    .is_zero(),
                "{}",
                nc.id
            );
        }
    }
}
