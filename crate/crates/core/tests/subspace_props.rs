use nsindex::charspace::{
    canonical_orbit_rep, search_subspace, special_subspace, zero_pattern, SearchOptions,
};
use nsindex::discform::build_disc_space;
use nsindex::oracle::enumerate_index;
use nsindex::strata::{nonsymplectic_index, ZeroPattern};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Any generic (5,2) subspace: characteristic, index 2, Psi constant on the rescaling orbit.
    #[test]
    fn generic_sigma2_subspaces(seed in any::<u64>(), e in 0u128..26) {
        let space = build_disc_space(5, 2, Some(8)).unwrap();
        let opts = SearchOptions { seed, ..SearchOptions::default() };
        let pattern = ZeroPattern::generic(2).unwrap();
        let k = search_subspace(&space, &pattern, opts).unwrap().found.unwrap();
        prop_assert!(k.report().unwrap().all_hold());
        prop_assert_eq!(zero_pattern(k.a()).unwrap(), pattern.clone());

        let r = enumerate_index(&k, 1 << 20).unwrap();
        let c = nonsymplectic_index(5, 2, &pattern).unwrap();
        prop_assert_eq!(c.index, r.index.into());

        let xi = space.working_field().root_of_unity(26).unwrap().pow(e);
        let (norm, moved) = k.rescaled_a(&xi);
        prop_assert!(norm.is_one());
        prop_assert_eq!(canonical_orbit_rep(&space, &moved).unwrap(), k.psi().unwrap().canonical);
    }
}

#[test]
fn search_is_deterministic() {
    let space = build_disc_space(5, 2, Some(8)).unwrap();
    let pattern = ZeroPattern::generic(2).unwrap();
    let opts = SearchOptions {
        seed: 11,
        ..SearchOptions::default()
    };
    let a = search_subspace(&space, &pattern, opts).unwrap();
    let b = search_subspace(&space, &pattern, opts).unwrap();
    assert_eq!(a.scanned, b.scanned);
    assert_eq!(a.found.unwrap().a(), b.found.unwrap().a());
}

#[test]
fn nonzero_pattern_needs_a_larger_field() {
    let space = build_disc_space(5, 2, None).unwrap();
    let out = search_subspace(
        &space,
        &ZeroPattern::generic(2).unwrap(),
        SearchOptions::default(),
    )
    .unwrap();
    assert!(out.found.is_none());
    assert_eq!(out.scanned, 0);
}

#[test]
fn zero_pattern_search_finds_the_special_subspace() {
    let space = build_disc_space(5, 2, None).unwrap();
    let found = search_subspace(
        &space,
        &ZeroPattern::all_zero(2).unwrap(),
        SearchOptions::default(),
    )
    .unwrap()
    .found
    .unwrap();
    let special = special_subspace(&space).unwrap();
    assert_eq!(found.basis(), special.basis());
}

#[test]
fn records_serialize_stably() {
    let space = build_disc_space(7, 1, None).unwrap();
    let k = special_subspace(&space).unwrap();
    let first = serde_json::to_string(&k.record()).unwrap();
    assert_eq!(first, serde_json::to_string(&k.record()).unwrap());
    let gram = serde_json::to_value(space.gram_record()).unwrap();
    assert_eq!(gram["p"], 7);
}

/// f^-1(v_2σ) = v_1 whenever every a_i vanishes.
#[test]
fn wrap_coefficients_of_special_subspaces() {
    for (p, sigma) in [(5, 1), (7, 1), (5, 2), (5, 3)] {
        let k = special_subspace(&build_disc_space(p, sigma, None).unwrap()).unwrap();
        let b = k.wrap_coefficients().unwrap();
        assert!(b[0].is_one());
        assert!(b[1..].iter().all(|x| x.is_zero()));
    }
}
