//! Seeded random objects with known answers.
//!
//! Every generator builds its object from a list of indecomposable pieces and
//! then hides the pieces under a random change of basis, so the pieces are the
//! expected output of the decomposition routines.

use divsq_core::rchain::{make_k, make_k_cell, reassemble_complex, ComplexSummand, RVSComplex, SimplicialRVS};
use divsq_core::restricted::{RVSDecomposition, RestrictedVS, Summand};
use divsq_core::{F2Matrix, F2Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_invertible(rng: &mut impl Rng, n: usize) -> F2Matrix {
    loop {
        let rows = (0..n)
            .map(|_| F2Vector::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5))))
            .collect();
        let m = F2Matrix::from_rows(n, rows).expect("square");
        if m.rank() == n {
            return m;
        }
    }
}

pub fn random_summand(rng: &mut impl Rng, max_degree: usize) -> Summand {
    loop {
        let n = rng.gen_range(0..=max_degree);
        let s = match rng.gen_range(0..3) {
            0 => Summand::Free { n },
            1 if n >= 1 => Summand::Torsion { n, k: rng.gen_range(1..=5) },
            _ => Summand::FreeUpToBound { n },
        };
        if s.fits(max_degree) {
            return s;
        }
    }
}

/// A scrambled restricted vector space and its decomposition.
#[derive(Clone, Debug)]
pub struct RestrictedCase {
    pub space: RestrictedVS,
    pub expected: RVSDecomposition,
}

/// Window `N ≤ max_degree`, total dimension at most `max_total`.
pub fn random_restricted(rng: &mut impl Rng, max_degree: usize, max_total: usize) -> RestrictedCase {
    let n = rng.gen_range(1..=max_degree);
    let target = rng.gen_range(0..=max_total);
    let mut summands = Vec::new();
    let mut total = 0;
    for _ in 0..4 * max_total {
        let s = random_summand(rng, n);
        let d = s.degrees(n).len();
        if total + d > target {
            continue;
        }
        total += d;
        summands.push(s);
    }
    let expected = RVSDecomposition::new(n, summands).expect("summands fit");
    let g: Vec<F2Matrix> = expected
        .dims()
        .iter()
        .map(|&d| random_invertible(rng, d))
        .collect();
    let space = expected.reassemble().change_basis(&g).expect("invertible");
    RestrictedCase { space, expected }
}

pub fn random_complex_summand(rng: &mut impl Rng, len: usize, max_degree: usize) -> ComplexSummand {
    let q = rng.gen_range(0..=max_degree);
    let n = rng.gen_range(0..len);
    if q >= 1 && 2 * q <= max_degree && n + 1 < len && rng.gen_bool(0.5) {
        let mut k = 1;
        while (q << (k + 1)) <= max_degree && rng.gen_bool(0.4) {
            k += 1;
        }
        return ComplexSummand::ShiftedTorsionCell { n, q, k };
    }
    if q >= 1 && 2 * q > max_degree {
        ComplexSummand::ShiftedFreeUpToBound { n, q }
    } else {
        ComplexSummand::ShiftedFreePoint { n, q }
    }
}

/// `V` in degrees `n + 1 → n` joined by the identity.
pub fn contractible(n: usize, v: &RestrictedVS) -> RVSComplex {
    let max = v.max_degree();
    let mut levels: Vec<RestrictedVS> = (0..n).map(|_| RestrictedVS::zero(max)).collect();
    levels.push(v.clone());
    levels.push(v.clone());
    let mut differentials: Vec<Vec<F2Matrix>> = (1..=n)
        .map(|l| {
            (0..=max)
                .map(|i| F2Matrix::zeros(levels[l - 1].dim(i), levels[l].dim(i)))
                .collect()
        })
        .collect();
    differentials.push((0..=max).map(|i| F2Matrix::identity(v.dim(i))).collect());
    RVSComplex::new(levels, differentials).expect("identity is a differential")
}

/// A scrambled complex and the sorted elementary complexes it is quasi-isomorphic to.
#[derive(Clone, Debug)]
pub struct ComplexCase {
    pub complex: RVSComplex,
    pub expected: Vec<ComplexSummand>,
}

/// Elementary complexes plus contractible pieces in `len ≥ 2` levels.
pub fn random_complex(rng: &mut impl Rng, len: usize, max_degree: usize) -> ComplexCase {
    let n_max = rng.gen_range(1..=max_degree);
    let count = rng.gen_range(0..=3);
    let mut expected: Vec<ComplexSummand> = (0..count).map(|_| random_complex_summand(rng, len, n_max)).collect();
    expected.sort();
    let mut c = reassemble_complex(&expected, n_max).extended(len);
    for _ in 0..rng.gen_range(0..=2) {
        let q = rng.gen_range(0..=n_max);
        let n = rng.gen_range(0..len - 1);
        let v = if q >= 1 && 2 * q <= n_max && rng.gen_bool(0.5) {
            RestrictedVS::torsion(q, 1, n_max)
        } else {
            RestrictedVS::free(q, n_max)
        };
        c = c.direct_sum(&contractible(n, &v).extended(len));
    }
    let g: Vec<Vec<F2Matrix>> = c
        .levels()
        .iter()
        .map(|v| v.dims().iter().map(|&d| random_invertible(rng, d)).collect())
        .collect();
    ComplexCase {
        complex: c.change_basis(&g).expect("invertible"),
        expected,
    }
}

/// A named elementary simplicial object with its chain complex.
#[derive(Clone, Debug)]
pub struct KCase {
    pub name: String,
    pub complex: RVSComplex,
    pub simplicial: SimplicialRVS,
    pub max_homotopy: usize,
    pub max_internal: usize,
}

/// `K[n,q]` and `K[n,q,k]` at homotopy bound `t` and internal bound at least
/// `q_min`, raised so the suspended kernel class `2^{k+1} q` is visible.
pub fn k_cases(t: usize, q_min: usize) -> Vec<KCase> {
    let mut out = Vec::new();
    for (n, q) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 0), (2, 0)] {
        out.push(KCase {
            name: format!("K[{n},{q}]"),
            complex: RVSComplex::shifted_free_point(n, q, q_min),
            simplicial: make_k(n, q, q_min, t + 1).expect("valid complex"),
            max_homotopy: t,
            max_internal: q_min,
        });
    }
    for (n, q, k) in [(1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1)] {
        let max = q_min.max(q << (k + 1));
        out.push(KCase {
            name: format!("K[{n},{q},{k}]"),
            complex: RVSComplex::shifted_torsion_cell(n, q, k, max),
            simplicial: make_k_cell(n, q, k, max, t + 1).expect("valid complex"),
            max_homotopy: t,
            max_internal: max,
        });
    }
    out
}
