use std::collections::BTreeMap;

use divsq_core::delta::Bounds;
use divsq_core::grading::{BigradedDims, HilbertSeries};
use divsq_core::loopspace::*;
use proptest::prelude::*;

// Every admissible I with entries ≥ 1 and excess ≤ s, straight from the
// definition rather than through r-coordinates.
fn admissible_with_excess(s: usize, max_len: usize, max_entry: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &frontier {
            for i in 1..=max_entry {
                // prepend so that the new entry is the outermost
                let mut cand = vec![i];
                cand.extend_from_slice(seq);
                if cand.windows(2).all(|w| w[0] >= 2 * w[1]) {
                    next.push(cand);
                }
            }
        }
        for seq in &next {
            let e = seq[0] as i64 - seq[1..].iter().sum::<usize>() as i64;
            if e <= s as i64 {
                out.push(seq.clone());
            }
        }
        frontier = next;
    }
    out
}

fn brute_e2(k: usize, d: i64) -> Vec<E2Generator> {
    let mut out = vec![E2Generator::new(0, vec![], vec![], k).unwrap()];
    for s in 1..=6usize {
        for ops in admissible_with_excess(s, 6, 64) {
            let mut a = vec![0usize; s];
            loop {
                let g = E2Generator::new(s, a.clone(), ops.clone(), k).unwrap();
                if g.degree().total <= d {
                    out.push(g);
                }
                let mut pos = 0;
                loop {
                    if pos == s {
                        break;
                    }
                    a[pos] += 1;
                    if decorated_degree(s, &a, &ops, k).total <= d {
                        break;
                    }
                    a[pos] = 0;
                    pos += 1;
                }
                if pos == s {
                    break;
                }
            }
        }
    }
    out.retain(|g| g.degree().total <= d);
    out.sort();
    out.dedup();
    out
}

#[test]
fn e2_enumeration_matches_brute_force() {
    for k in 1..=4 {
        assert_eq!(enum_e2(k, 40), brute_e2(k, 40), "k = {k}");
    }
}

#[test]
fn bijection_round_trip_and_degrees() {
    for k in 1..=4 {
        let e2 = enum_e2(k, 60);
        let dl = enum_dl(k, 60);
        for g in &e2 {
            let d = forward_map(g);
            assert_eq!(d.degree() as i64, g.degree().total, "{g:?}");
            assert_eq!(&inverse_map(&d).unwrap(), g);
        }
        for d in &dl {
            let g = inverse_map(d).unwrap();
            assert_eq!(&forward_map(&g), d);
        }
        let mut mapped: Vec<DLGenerator> = e2.iter().map(forward_map).collect();
        mapped.sort();
        assert_eq!(mapped, dl);
    }
}

#[test]
fn inverse_defined_on_every_small_tuple() {
    for sigma in 1..=5 {
        let mut b = vec![0usize; sigma];
        loop {
            let d = DLGenerator { b: b.clone(), k: 1 };
            let g = inverse_map(&d).unwrap();
            assert_eq!(forward_map(&g), d);
            let mut pos = 0;
            while pos < sigma && b[pos] == 5 {
                b[pos] = 0;
                pos += 1;
            }
            if pos == sigma {
                break;
            }
            b[pos] += 1;
        }
    }
}

#[test]
fn generator_counts_agree_per_degree() {
    for k in 1..=3 {
        let mut by_degree: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
        for g in enum_e2(k, 50) {
            by_degree.entry(g.degree().total).or_default().0 += 1;
        }
        for d in enum_dl(k, 50) {
            by_degree.entry(d.degree() as i64).or_default().1 += 1;
        }
        for (deg, (a, b)) in by_degree {
            assert_eq!(a, b, "k = {k}, degree {deg}");
        }
    }
}

#[test]
fn collapse_through_forty() {
    for ks in [vec![1], vec![2], vec![3], vec![1, 2]] {
        let r = collapse_check(&ks, 40).unwrap();
        assert!(r.equal, "{ks:?}: {:?}", r.first_mismatch);
    }
    assert!(collapse_check(&[1], 20).unwrap().equal);
}

#[test]
fn wedge_series_factor() {
    let both = dl_series(&[1, 2], 30);
    assert_eq!(both, dl_series(&[1], 30).mul(&dl_series(&[2], 30)));
    let both = e2_series(&[1, 2], 30);
    assert_eq!(both, e2_series(&[1], 30).mul(&e2_series(&[2], 30)));
}

#[test]
fn below_the_sphere_only_the_unit() {
    for k in 2..6 {
        let r = collapse_check(&[k], k - 1).unwrap();
        let unit = HilbertSeries::one(k - 1);
        assert_eq!(r.dl_series, unit);
        assert_eq!(r.e2_series, unit);
    }
}

#[test]
fn exterior_splits_as_two_symmetric_factors() {
    let bounds = Bounds {
        max_homotopy: 12,
        max_internal: 12,
        max_weight: 8,
    };
    let mut w = BigradedDims::new(12, 12);
    w.add(1, 1, 1);
    w.add(2, 1, 1);
    w.add(2, 3, 2);
    w.add(3, 0, 1);
    assert_eq!(exterior_splitting_check(&w, bounds), None);
}

proptest! {
    #[test]
    fn forward_preserves_degree(k in 1usize..5, s in 1usize..4, a in proptest::collection::vec(0usize..6, 3), r in proptest::collection::vec(0usize..3, 0..3)) {
        let a = a[..s].to_vec();
        let l = r.len();
        let mut r = r;
        if l > 0 {
            r[l - 1] = r[l - 1].max(1);
        }
        prop_assume!(r.iter().sum::<usize>() <= s);
        let ops: Vec<usize> = (0..l).map(|t| (t..l).map(|j| r[j] << (j - t)).sum()).collect();
        let g = E2Generator::new(s, a, ops, k).unwrap();
        let d = forward_map(&g);
        prop_assert_eq!(d.degree() as i64, g.degree().total);
        prop_assert_eq!(inverse_map(&d).unwrap(), g);
    }
}
