mod common;

use divsq_core::rchain::{dold_kan_k, homology, make_k, RVSComplex};
use divsq_core::unstable::{
    e_infinity_length, pi_u_closed_form, pi_u_oracle, pi_u_oracle_with, u_dims, u_simplicial, OracleLimits,
    OracleStrategy,
};
use divsq_core::BigradedDims;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn closed(c: &RVSComplex, t: usize, q: usize) -> BigradedDims {
    pi_u_closed_form(c, t, q).unwrap().dims
}

#[test]
fn oracle_matches_closed_form_on_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    for _ in 0..60 {
        let max = rng.gen_range(1..=4);
        let (c, _) = common::random_complex(&mut rng, 3, max);
        let s = dold_kan_k(&c, 4).unwrap();
        if s.level(4).dim(0) > 16 {
            continue;
        }
        let oracle = pi_u_oracle(&s, 3, max).unwrap();
        assert_eq!(oracle.dims, closed(&c, 3, max), "{c:?}");
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} complexes were small enough");
}

#[test]
fn dense_and_adapted_oracles_agree_on_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut checked = 0;
    while checked < 15 {
        let max = rng.gen_range(1..=3);
        let (c, _) = common::random_complex(&mut rng, 2, max);
        if c.levels().iter().map(|v| v.total_dim()).sum::<usize>() > 4 {
            continue;
        }
        let s = dold_kan_k(&c, 3).unwrap();
        let a = pi_u_oracle_with(&s, 2, max, OracleStrategy::Adapted, OracleLimits::default()).unwrap();
        let d = pi_u_oracle_with(&s, 2, max, OracleStrategy::Dense, OracleLimits::default()).unwrap();
        assert_eq!(a.dims, d.dims);
        checked += 1;
    }
}

#[test]
fn u_simplicial_levels_are_u_of_the_levels() {
    let s = make_k(1, 1, 6, 3).unwrap();
    let u = u_simplicial(&s, 6).unwrap();
    for m in 0..=3 {
        let expected = u_dims(s.level(m), 6).unwrap();
        for (q, slice) in u.slices.iter().enumerate() {
            assert_eq!(slice.dims[m] as u64, expected.coeff(q));
        }
    }
}

#[test]
fn closed_form_is_multiplicative_on_direct_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let max = rng.gen_range(1..=8);
        let (a, _) = common::random_complex(&mut rng, 3, max);
        let (b, _) = common::random_complex(&mut rng, 3, max);
        let sum = closed(&a.direct_sum(&b), 6, max);
        assert_eq!(sum, closed(&a, 6, max).convolve(&closed(&b, 6, max)));
    }
}

#[test]
fn length_filtration_marginal_is_the_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..100 {
        let max = rng.gen_range(1..=8);
        let (c, _) = common::random_complex(&mut rng, 3, max);
        let e = e_infinity_length(&c, 6, max).unwrap();
        assert_eq!(e.marginal(), closed(&c, 6, max));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn unit_counts_degree_zero_points(seed in any::<u64>(), max in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, _) = common::random_complex(&mut rng, 3, max);
        let h0 = homology(&c).unwrap().groups[0].dim(0);
        let dims = closed(&c, 4, max);
        prop_assert_eq!(dims.get(0, 0), 1u64 << h0);
        for t in 1..=4 {
            prop_assert_eq!(dims.get(t, 0), 0);
        }
    }
}
