//! The free unstable algebra `U(V) = S(V)/(x² = φ(x))` on a restricted vector
//! space, and the homotopy of `U` applied levelwise to a simplicial restricted
//! vector space.
//!
//! [`pi_u_closed_form`] reads the answer off the homology of the chain
//! complex; [`pi_u_oracle`] computes it by brute force from the simplicial
//! object. The two are independent and are compared in the tests.

mod oracle;
mod sparse;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::delta::{delta_generators, enum_frak_big_s, Bounds, Flavor, IndexSeq, MonomialBasisCounts};
use crate::error::{Error, Result};
use crate::grading::{BigradedDims, HilbertSeries};
use crate::rchain::{homology, RVSComplex};
use crate::restricted::{decompose, RestrictedVS, Summand};

pub use oracle::{pi_u_oracle, pi_u_oracle_with, u_simplicial, OracleLimits, OracleStrategy};

/// Dimensions of a graded algebra by internal degree, truncated.
pub type GradedAlgebraDims = HilbertSeries;

/// Largest number of degree-zero generators accepted before `2^d` is refused.
pub const DEFAULT_BOOLEAN_CAP: usize = 20;

/// Which tensor factor of `U(π_0)[0] ⊗ 𝔖(coker φ) ⊗ 𝔖(Σ ker φ)` a generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    DegreeZero,
    Cokernel,
    SuspendedKernel,
}

/// One algebra generator of `π_*U`, with where it came from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorRecord {
    /// A summand of `π_0`; it generates `U` of that summand at homotopy 0.
    DegreeZero { summand: Summand },
    /// `δ_I x` for the `index`-th basis class `x` in bidegree `base` of the
    /// cokernel or of the suspended kernel.
    Delta {
        factor: Factor,
        ops: IndexSeq,
        base: (usize, usize),
        index: usize,
        homotopy: usize,
        internal: usize,
        polynomial: bool,
    },
}

/// Bigraded dimensions of `π_*U`, with an optional generator ledger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiUResult {
    pub dims: BigradedDims,
    pub generators: Vec<GeneratorRecord>,
}

/// Counts by `(filtration s, homotopy t, internal q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EInfinityDims {
    pub max_homotopy: usize,
    pub max_internal: usize,
    entries: BTreeMap<(usize, usize, usize), u64>,
}

impl EInfinityDims {
    pub fn get(&self, s: usize, t: usize, q: usize) -> u64 {
        self.entries.get(&(s, t, q)).copied().unwrap_or(0)
    }

    /// Nonzero entries in `(s, t, q)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Sum over the filtration.
    pub fn marginal(&self) -> BigradedDims {
        let mut out = BigradedDims::new(self.max_homotopy, self.max_internal);
        for ((_, t, q), c) in self.iter() {
            out.add(t, q, c);
        }
        out
    }
}

/// `U(V)` by internal degree up to `max_internal`, with the default Boolean cap.
pub fn u_dims(v: &RestrictedVS, max_internal: usize) -> Result<GradedAlgebraDims> {
    u_dims_with_cap(v, max_internal, DEFAULT_BOOLEAN_CAP)
}

/// `U` turns sums into tensor products: `U(F(q))` is polynomial on one
/// generator, `U(T(q,k))` is truncated at height `2^k`, and each `F(0)`
/// contributes a two-dimensional Boolean factor.
pub fn u_dims_with_cap(v: &RestrictedVS, max_internal: usize, boolean_cap: usize) -> Result<GradedAlgebraDims> {
    if max_internal > v.max_degree() {
        return Err(Error::InvalidArgument(alloc::format!(
            "internal bound {max_internal} exceeds the window {}",
            v.max_degree()
        )));
    }
    let dec = decompose(v)?;
    let mut series = HilbertSeries::one(max_internal);
    let mut boolean = 0usize;
    for s in dec.summands() {
        match *s {
            Summand::Free { n: 0 } => boolean += 1,
            Summand::Free { n } | Summand::FreeUpToBound { n } => series.mul_polynomial(n),
            Summand::Torsion { n, k } => series.mul_truncated(n, 1 << k),
        }
    }
    if boolean > boolean_cap {
        return Err(Error::SizeLimit {
            what: "degree-zero part of U",
            size: boolean,
            limit: boolean_cap,
        });
    }
    let scaled = series.coeffs().iter().map(|&c| c << boolean).collect();
    Ok(HilbertSeries::from_coeffs(scaled))
}

// Homology with the bigraded cokernel and suspended kernel of φ in
// positive homotopy degrees.
struct PhiParts {
    h0: RestrictedVS,
    coker: BigradedDims,
    suspended_ker: BigradedDims,
}

fn phi_parts(c: &RVSComplex, max_homotopy: usize, max_internal: usize) -> Result<PhiParts> {
    if max_internal > c.max_degree() {
        return Err(Error::InvalidArgument(alloc::format!(
            "internal bound {max_internal} exceeds the window {}",
            c.max_degree()
        )));
    }
    let h = homology(c)?;
    let mut coker = BigradedDims::new(max_homotopy, max_internal);
    let mut suspended_ker = BigradedDims::new(max_homotopy, max_internal);
    for (t, group) in h.groups.iter().enumerate().skip(1) {
        if t > max_homotopy {
            break;
        }
        for j in 1..=max_internal {
            let image = if j % 2 == 0 { group.phi(j / 2).rank() } else { 0 };
            coker.add(t, j, (group.dim(j) - image) as u64);
        }
        // A class killed by φ in internal degree i reappears one homotopy
        // degree up, in internal degree 2i.
        for i in 1..=max_internal / 2 {
            let kernel = group.dim(i) - group.phi(i).rank();
            suspended_ker.add(t + 1, 2 * i, kernel as u64);
        }
    }
    Ok(PhiParts {
        h0: h.groups.into_iter().next().expect("a complex has a level 0"),
        coker,
        suspended_ker,
    })
}

/// `π_*U(K(C)) ≅ U(π_0)[0] ⊗ 𝔖(coker π_{>0}φ) ⊗ 𝔖(Σ ker π_{>0}φ)`, where `Σ`
/// raises homotopy degree by one and doubles internal degree.
pub fn pi_u_closed_form(c: &RVSComplex, max_homotopy: usize, max_internal: usize) -> Result<PiUResult> {
    let parts = phi_parts(c, max_homotopy, max_internal)?;
    let u0 = u_dims(&parts.h0, max_internal)?;
    let mut dims = BigradedDims::new(max_homotopy, max_internal);
    for (q, &count) in u0.coeffs().iter().enumerate() {
        dims.add(0, q, count);
    }
    let bounds = Bounds {
        max_homotopy,
        max_internal,
        max_weight: max_internal.max(1),
    };
    let coker = enum_frak_big_s(&parts.coker, Flavor::Symmetric, bounds).total();
    let ker = enum_frak_big_s(&parts.suspended_ker, Flavor::Symmetric, bounds).total();
    let dims = dims.convolve(&coker).convolve(&ker);

    let mut generators: Vec<GeneratorRecord> = decompose(&parts.h0)?
        .summands()
        .iter()
        .filter(|s| s.degree() <= max_internal)
        .map(|&summand| GeneratorRecord::DegreeZero { summand })
        .collect();
    for (factor, table) in [
        (Factor::Cokernel, &parts.coker),
        (Factor::SuspendedKernel, &parts.suspended_ker),
    ] {
        for ((t, q), count) in table.iter() {
            for g in delta_generators(t, q, Flavor::Symmetric, &bounds) {
                for index in 0..count as usize {
                    generators.push(GeneratorRecord::Delta {
                        factor,
                        ops: g.ops.clone(),
                        base: (t, q),
                        index,
                        homotopy: g.homotopy,
                        internal: g.internal,
                        polynomial: false,
                    });
                }
            }
        }
    }
    Ok(PiUResult { dims, generators })
}

/// The associated graded of the word-length filtration:
/// `E^∞_{s,t} = ⊕_{p+q+r=s} E_r(π_0) ⊗ (𝔖_p(coker) ⊗ 𝔖_q(Σ ker))_t`.
pub fn e_infinity_length(c: &RVSComplex, max_homotopy: usize, max_internal: usize) -> Result<EInfinityDims> {
    let parts = phi_parts(c, max_homotopy, max_internal)?;
    let degree_zero = parts.h0.dim(0);
    if degree_zero > DEFAULT_BOOLEAN_CAP {
        return Err(Error::SizeLimit {
            what: "degree-zero part of U",
            size: degree_zero,
            limit: DEFAULT_BOOLEAN_CAP,
        });
    }
    let bounds = Bounds {
        max_homotopy,
        max_internal,
        max_weight: max_internal + degree_zero,
    };
    let mut exterior = MonomialBasisCounts::unit(bounds);
    for q in 0..=max_internal {
        for _ in 0..parts.h0.dim(q) {
            exterior.mul_exterior(0, q, 1);
        }
    }
    let coker = enum_frak_big_s(&parts.coker, Flavor::Symmetric, bounds);
    let ker = enum_frak_big_s(&parts.suspended_ker, Flavor::Symmetric, bounds);
    let all = exterior.convolve(&coker).convolve(&ker);
    let entries = all.iter().map(|((t, q, w), c)| ((w, t, q), c)).collect();
    Ok(EInfinityDims {
        max_homotopy,
        max_internal,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rchain::RVSComplex;

    #[test]
    fn u_of_single_summands() {
        let f1 = u_dims(&RestrictedVS::free(1, 4), 4).unwrap();
        assert_eq!(f1.coeffs(), &[1, 1, 1, 1, 1]);
        let t11 = u_dims(&RestrictedVS::torsion(1, 1, 4), 4).unwrap();
        assert_eq!(t11.coeffs(), &[1, 1, 0, 0, 0]);
        let f0 = u_dims(&RestrictedVS::free(0, 4), 4).unwrap();
        assert_eq!(f0.coeffs(), &[2, 0, 0, 0, 0]);
        let t12 = u_dims(&RestrictedVS::torsion(1, 2, 8), 8).unwrap();
        assert_eq!(t12.coeffs(), &[1, 1, 1, 1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn boolean_cap_is_enforced() {
        let mut v = RestrictedVS::zero(2);
        for _ in 0..4 {
            v = v.direct_sum(&RestrictedVS::free(0, 2));
        }
        assert_eq!(u_dims_with_cap(&v, 2, 4).unwrap().coeff(0), 16);
        assert!(matches!(u_dims_with_cap(&v, 2, 3), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn closed_form_of_shifted_free_point() {
        let c = RVSComplex::shifted_free_point(2, 1, 6);
        let r = pi_u_closed_form(&c, 6, 6).unwrap();
        let ones: Vec<(usize, usize)> = r.dims.iter().map(|(k, _)| k).collect();
        assert_eq!(ones, vec![(0, 0), (2, 1), (4, 2), (6, 3)]);
        assert!(r.dims.iter().all(|(_, c)| c == 1));
    }

    #[test]
    fn closed_form_of_torsion_cell() {
        // 𝔖F2[1,1] ⊗ 𝔖F2[2,2]
        let c = RVSComplex::shifted_torsion_cell(1, 1, 1, 6);
        let r = pi_u_closed_form(&c, 6, 6).unwrap();
        // {1, u} ⊗ {1, w, δ_2 w, w δ_2 w} with u at (1,1) and w at (2,2).
        let mut expected = BigradedDims::new(6, 6);
        for t in 0..=6 {
            expected.add(t, t, 1);
        }
        assert_eq!(r.dims, expected);
    }

    #[test]
    fn e_infinity_examples() {
        let c = RVSComplex::shifted_free_point(1, 1, 4);
        let e = e_infinity_length(&c, 4, 4).unwrap();
        let entries: Vec<_> = e.iter().collect();
        assert_eq!(entries, vec![((0, 0, 0), 1), ((1, 1, 1), 1)]);
        let c = RVSComplex::point(0, RestrictedVS::free(0, 4));
        let e = e_infinity_length(&c, 4, 4).unwrap();
        let entries: Vec<_> = e.iter().collect();
        assert_eq!(entries, vec![((0, 0, 0), 1), ((1, 0, 0), 1)]);
    }
}
