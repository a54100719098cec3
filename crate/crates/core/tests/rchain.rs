mod common;

use divsq_core::rchain::{
    decompose_complex, dold_kan_k, homology, make_k, make_k_cell, normalize_n, quasi_isomorphism, RVSComplex,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn normalization_inverts_k_on_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let max = rand::Rng::gen_range(&mut rng, 1..=8);
        let (c, _) = common::random_complex(&mut rng, 3, max);
        let s = dold_kan_k(&c, 4).unwrap();
        s.check().unwrap();
        let n = normalize_n(&s).unwrap();
        assert_eq!(n, c.extended(n.len()));
    }
}

#[test]
fn decomposition_recovers_the_elementary_pieces() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let max = rand::Rng::gen_range(&mut rng, 1..=8);
        let (c, summands) = common::random_complex(&mut rng, 3, max);
        assert_eq!(decompose_complex(&c).unwrap(), summands);
        let f = quasi_isomorphism(&c).unwrap();
        assert!(f.is_chain_map());
        assert!(f.is_quasi_isomorphism().unwrap());
    }
}

#[test]
fn normalized_and_unnormalized_homology_agree() {
    let cases = [
        make_k(1, 1, 4, 4).unwrap(),
        make_k(2, 2, 4, 4).unwrap(),
        make_k_cell(1, 1, 2, 4, 4).unwrap(),
        make_k_cell(0, 1, 1, 4, 3).unwrap(),
    ];
    for s in &cases {
        for i in 0..=s.max_degree() {
            let slice = s.slice(i);
            slice.check_identities().unwrap();
            let a = slice.normalize().homology_dims();
            let b = slice.unnormalized().homology_dims();
            let top = slice.level_bound();
            assert_eq!(a[..top], b[..top]);
        }
    }
}

#[test]
fn k_of_a_cell_has_the_cell_homology() {
    let c = RVSComplex::shifted_torsion_cell(1, 1, 2, 8);
    let s = make_k_cell(1, 1, 2, 8, 3).unwrap();
    let h = homology(&normalize_n(&s).unwrap()).unwrap();
    let expected = homology(&c).unwrap();
    assert_eq!(h.groups[1], expected.groups[1]);
    assert_eq!(h.groups[1].dims(), &[0, 1, 1, 0, 0, 0, 0, 0, 0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn k_satisfies_simplicial_identities(seed in any::<u64>(), max in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, _) = common::random_complex(&mut rng, 3, max);
        let s = dold_kan_k(&c, 4).unwrap();
        for i in 0..=max {
            prop_assert!(s.slice(i).check_identities().is_ok());
        }
    }
}
