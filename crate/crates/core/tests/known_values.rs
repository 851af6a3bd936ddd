use eulercat_core::corpus::{chain_poset, iso_pair, monoid_m};
use eulercat_core::euler::{
    chi_ext_l2_of_sd_op, chi_fil, chi_l2_acyclic, chi_leinster, chi_series, EulerResult,
    NFiltration, Undefined,
};
use eulercat_core::exactalg::{rat, Rational};
use eulercat_core::fincat::from_poset;
use eulercat_core::format::{parse_category, write_category};
use eulercat_core::simplex::{build_eq_simplex, enumerate_admissible_relations, AdmissibleEqRel};
use eulercat_core::subdivision::{length_filtration, sd, sd_truncated};

fn half() -> EulerResult {
    EulerResult::Defined(Rational::new(1.into(), 2.into()))
}

#[test]
fn monoid_with_idempotent() {
    let m = monoid_m();
    assert_eq!(chi_leinster(&m), half());
    assert_eq!(chi_series(&m), half());
    assert_eq!(chi_ext_l2_of_sd_op(&m), half());
    assert_eq!(
        chi_l2_acyclic(&m),
        EulerResult::Undefined(Undefined::NotAcyclic)
    );
}

#[test]
fn chain_posets_are_contractible() {
    for n in 0..5 {
        let (el, covers) = chain_poset(n);
        let c = from_poset(&el, &covers).unwrap();
        for v in [
            chi_leinster(&c),
            chi_series(&c),
            chi_l2_acyclic(&c),
            chi_ext_l2_of_sd_op(&c),
        ] {
            assert_eq!(v, EulerResult::Defined(rat(1)), "[{n}]");
        }
    }
}

#[test]
fn iso_pair_is_one() {
    assert_eq!(chi_series(&iso_pair()), EulerResult::Defined(rat(1)));
    assert_eq!(chi_leinster(&iso_pair()), EulerResult::Defined(rat(1)));
}

#[test]
fn subdivided_chains() {
    let (el, covers) = chain_poset(1);
    let s = sd(&from_poset(&el, &covers).unwrap()).unwrap();
    assert_eq!(length_filtration(&s), NFiltration(vec![0, 0, 1]));

    let (el, covers) = chain_poset(2);
    let c2 = from_poset(&el, &covers).unwrap();
    let s = sd(&c2).unwrap();
    assert_eq!(s.level, [0, 0, 0, 1, 1, 1, 2]);
    assert_eq!(
        chi_fil(&s.category, &length_filtration(&s)).unwrap(),
        EulerResult::Defined(rat(1))
    );

    // a file round trip keeps every value
    let back = parse_category(&write_category(&s.category, None))
        .unwrap()
        .category;
    assert_eq!(chi_series(&back), chi_series(&s.category));
}

#[test]
fn truncated_subdivision_of_the_monoid() {
    let m = monoid_m();
    assert_eq!(sd_truncated(&m, 0).unwrap().category.num_morphisms(), 1);
    let s = sd_truncated(&m, 1).unwrap();
    assert_eq!(s.category.num_objects(), 2);
    // ⟨1⟩ has two faces onto ⟨*⟩ and its identity
    assert_eq!(s.category.num_morphisms(), 4);
}

#[test]
fn equivalence_two_simplex() {
    let rel = AdmissibleEqRel::from_labels(&[0, 1, 0]).unwrap();
    let s = build_eq_simplex(&rel);
    assert_eq!(s.sizes(), [1, 2, 2, 1]);
    assert_eq!(s.level(0), [vec![0], vec![1]]);
    assert_eq!(s.members(0, 0), [vec![0], vec![2]]);
    assert_eq!(s.level(1), [vec![0, 1], vec![1, 2]]);

    let counts: Vec<usize> = (0..=6)
        .map(|n| enumerate_admissible_relations(n).unwrap().len())
        .collect();
    assert_eq!(counts, [1, 1, 2, 5, 15, 52, 203]);
}
