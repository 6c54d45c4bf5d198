mod common;

use commutant::fedder::{fedder_generators, truncated_omega_power, FedderConfig};
use commutant::lemmas::{n4_closed_form, n4_solutions};
use commutant::sop::SopVariant;

#[test]
fn symbolic_commutator_agrees_with_numeric_evaluation() {
    for n in 2..=5 {
        assert!(common::commutator_matches_numeric(n, 40, 7 + n as u64), "n = {n}");
    }
}

#[test]
fn n4_solution_family_is_complete_at_p3() {
    let brute = common::brute_force_n4(3);
    let mut family = n4_solutions(3).unwrap();
    family.sort();
    assert_eq!(brute.len(), 4);
    assert_eq!(brute, family);
}

#[test]
fn n4_solution_family_is_complete_at_p5() {
    let mut family = n4_solutions(5).unwrap();
    family.sort();
    assert_eq!(common::brute_force_n4(5), family);
}

#[test]
fn n4_closed_form_matches_brute_force_sum() {
    for p in [3u32, 5] {
        let total: num_bigint::BigInt = common::brute_force_n4(p).iter().map(|s| s.contribution()).sum();
        let pb = num_bigint::BigInt::from(p);
        let r = ((total % &pb) + &pb) % &pb;
        assert_eq!(r, num_bigint::BigInt::from(n4_closed_form(p).unwrap()));
    }
}

#[test]
fn fold_matches_untruncated_expansion_on_small_systems() {
    let cfg = FedderConfig { term_ceiling: 1_000_000, parallel: false };
    for (n, p, variant) in [(3u8, 2u32, SopVariant::FullOdd), (3, 3, SopVariant::FullOdd), (4, 2, SopVariant::FullEvenChar2)] {
        let gens = fedder_generators(n, p, variant).unwrap();
        let fast = truncated_omega_power(&gens, p, &cfg).unwrap();
        assert_eq!(fast, common::untruncated_fedder(&gens, p), "n = {n}, p = {p}");
    }
}
