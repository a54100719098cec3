#![allow(dead_code)]

use divsq_core::rchain::{reassemble_complex, ComplexSummand, RVSComplex};
use divsq_core::restricted::RestrictedVS;
use divsq_core::F2Matrix;
use rand::Rng;

pub fn random_invertible(rng: &mut impl Rng, n: usize) -> F2Matrix {
    loop {
        let mut m = F2Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, rng.gen());
            }
        }
        if m.inverse().is_some() {
            return m;
        }
    }
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

// `V` in degrees n+1 → n with the identity between them.
pub fn contractible(n: usize, v: &RestrictedVS) -> RVSComplex {
    let max = v.max_degree();
    let mut levels: Vec<RestrictedVS> = (0..n).map(|_| RestrictedVS::zero(max)).collect();
    levels.push(v.clone());
    levels.push(v.clone());
    let mut differentials: Vec<Vec<F2Matrix>> = (1..=n)
        .map(|l| (0..=max).map(|i| F2Matrix::zeros(levels[l - 1].dim(i), levels[l].dim(i))).collect())
        .collect();
    differentials.push((0..=max).map(|i| F2Matrix::identity(v.dim(i))).collect());
    RVSComplex::new(levels, differentials).unwrap()
}

/// Elementary complexes plus contractible pieces, in `len` levels, conjugated
/// by a random change of basis.
pub fn random_complex(rng: &mut impl Rng, len: usize, max_degree: usize) -> (RVSComplex, Vec<ComplexSummand>) {
    let count = rng.gen_range(0..=3);
    let mut summands: Vec<ComplexSummand> =
        (0..count).map(|_| random_complex_summand(rng, len, max_degree)).collect();
    summands.sort();
    let mut c = reassemble_complex(&summands, max_degree).extended(len);
    for _ in 0..rng.gen_range(0..=2) {
        let q = rng.gen_range(0..=max_degree);
        let n = rng.gen_range(0..len - 1);
        let v = if q >= 1 && 2 * q <= max_degree && rng.gen_bool(0.5) {
            RestrictedVS::torsion(q, 1, max_degree)
        } else {
            RestrictedVS::free(q, max_degree)
        };
        c = c.direct_sum(&contractible(n, &v).extended(len));
    }
    let g: Vec<Vec<F2Matrix>> = c
        .levels()
        .iter()
        .map(|v| v.dims().iter().map(|&d| random_invertible(rng, d)).collect())
        .collect();
    (c.change_basis(&g).unwrap(), summands)
}
