//! Brute-force homotopy of `U` applied levelwise to a simplicial restricted
//! vector space.
//!
//! Two strategies compute the same normalized complex:
//!
//! * `Dense` builds `U(S_m)` in full on a basis read off from each level and
//!   normalizes by intersecting the kernels of the faces `d_1, …, d_m`.
//! * `Adapted` rebuilds `S` as `⊕_{α: [m] ↠ [k]} α^* N_k` from its normalized
//!   complex, so every degeneracy sends basis monomials to basis monomials and
//!   the normalized complex is spanned by the nondegenerate ones. Internal
//!   degree zero, where `U` is the Boolean algebra `S^0 ↦ Fun((S^0)^*, F2)`,
//!   is handled in the basis of point indicators, where faces act by partial
//!   injections and ranks are counts.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::sparse::sparse_rank;
use super::PiUResult;
use crate::error::{Error, Result};
use crate::f2::{EchelonBasis, F2Matrix, F2Vector};
use crate::grading::BigradedDims;
use crate::rchain::{normalize_n, surjections, SimplicialGraded, SimplicialRVS, SimplicialVS};
use crate::restricted::{decompose_with_generators, RestrictedVS, Summand};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum OracleStrategy {
    #[default]
    Adapted,
    Dense,
}

/// Guardrails on the brute-force computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    /// Monomials per (level, internal degree) in the adapted strategy.
    pub max_monomials: usize,
    /// Dimension of a degree-zero level whose dual is enumerated point by point.
    pub max_boolean_dim: usize,
    /// Dimension per (level, internal degree) in the dense strategy.
    pub max_dense_dim: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_monomials: 4_000_000,
            max_boolean_dim: 24,
            max_dense_dim: 3000,
        }
    }
}

/// `π_t U(S)` in internal degree `q` for `t ≤ max_homotopy`, `q ≤ max_internal`,
/// with the adapted strategy and default limits.
pub fn pi_u_oracle(s: &SimplicialRVS, max_homotopy: usize, max_internal: usize) -> Result<PiUResult> {
    pi_u_oracle_with(s, max_homotopy, max_internal, OracleStrategy::Adapted, OracleLimits::default())
}

pub fn pi_u_oracle_with(
    s: &SimplicialRVS,
    max_homotopy: usize,
    max_internal: usize,
    strategy: OracleStrategy,
    limits: OracleLimits,
) -> Result<PiUResult> {
    if s.level_bound() < max_homotopy + 1 {
        return Err(Error::InsufficientLevels {
            needed: max_homotopy + 1,
            available: s.level_bound(),
        });
    }
    if max_internal > s.max_degree() {
        return Err(Error::InvalidArgument(alloc::format!(
            "internal bound {max_internal} exceeds the window {}",
            s.max_degree()
        )));
    }
    let dims = match strategy {
        OracleStrategy::Dense => dense(s, max_homotopy, max_internal, limits)?,
        OracleStrategy::Adapted => adapted(s, max_homotopy, max_internal, limits)?,
    };
    Ok(PiUResult {
        dims,
        generators: Vec::new(),
    })
}

/// `U(S_m)` for every level, truncated at internal degree `max_internal`, with
/// faces and degeneracies induced as algebra maps.
pub fn u_simplicial(s: &SimplicialRVS, max_internal: usize) -> Result<SimplicialGraded> {
    u_simplicial_upto(s, max_internal, s.level_bound(), OracleLimits::default())
}

// ---------------------------------------------------------------------------
// Monomials in U

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cap {
    // x² = x
    Boolean,
    // exponents below the height
    Height(u32),
    Unbounded,
}

fn cap_of(s: Summand) -> Cap {
    match s {
        Summand::Free { n: 0 } => Cap::Boolean,
        Summand::Torsion { k, .. } => Cap::Height(1 << k),
        _ => Cap::Unbounded,
    }
}

// Sorted by generator, exponents ≥ 1.
type Mono = Vec<(u32, u32)>;

fn combine(cap: Cap, a: u32, b: u32) -> Option<u32> {
    match cap {
        Cap::Boolean => Some(1),
        Cap::Height(h) => (a + b < h).then_some(a + b),
        Cap::Unbounded => Some(a + b),
    }
}

fn mul_mono(a: &[(u32, u32)], b: &[(u32, u32)], caps: &[Cap]) -> Option<Mono> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let g = a[i].0;
                out.push((g, combine(caps[g as usize], a[i].1, b[j].1)?));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some(out)
}

fn frobenius(m: &[(u32, u32)], b: u32, caps: &[Cap]) -> Option<Mono> {
    m.iter()
        .map(|&(g, e)| match caps[g as usize] {
            Cap::Boolean => Some((g, 1)),
            Cap::Height(h) => {
                let x = (e as u64) << b;
                (x < h as u64).then_some((g, x as u32))
            }
            Cap::Unbounded => Some((g, e << b)),
        })
        .collect()
}

fn cancel_pairs(mut p: Vec<Mono>) -> Vec<Mono> {
    p.sort_unstable();
    let mut out: Vec<Mono> = Vec::with_capacity(p.len());
    for m in p {
        if out.last() == Some(&m) {
            out.pop();
        } else {
            out.push(m);
        }
    }
    out
}

fn mul_poly(a: &[Mono], b: &[Mono], caps: &[Cap]) -> Vec<Mono> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            if let Some(m) = mul_mono(x, y, caps) {
                out.push(m);
            }
        }
    }
    cancel_pairs(out)
}

// p^e, using (Σ x)^{2^b} = Σ x^{2^b}.
fn pow_poly(p: &[Mono], e: u32, caps: &[Cap]) -> Vec<Mono> {
    if p.len() == 1 {
        return match frobenius_power(&p[0], e, caps) {
            Some(m) => vec![m],
            None => Vec::new(),
        };
    }
    let mut acc: Vec<Mono> = vec![Vec::new()];
    for b in 0..32 {
        if e >> b & 1 == 1 {
            let f: Vec<Mono> = p.iter().filter_map(|m| frobenius(m, b, caps)).collect();
            acc = mul_poly(&acc, &cancel_pairs(f), caps);
        }
    }
    acc
}

// m^e for a single monomial.
fn frobenius_power(m: &[(u32, u32)], e: u32, caps: &[Cap]) -> Option<Mono> {
    m.iter()
        .map(|&(g, x)| match caps[g as usize] {
            Cap::Boolean => Some((g, 1)),
            Cap::Height(h) => {
                let y = x as u64 * e as u64;
                (y < h as u64).then_some((g, y as u32))
            }
            Cap::Unbounded => Some((g, x * e)),
        })
        .collect()
}

fn image_of_monomial(m: &[(u32, u32)], images: &[Vec<Mono>], caps: &[Cap]) -> Vec<Mono> {
    let mut acc: Vec<Mono> = vec![Vec::new()];
    for &(g, e) in m {
        let img = &images[g as usize];
        if img.is_empty() {
            return Vec::new();
        }
        acc = mul_poly(&acc, &pow_poly(img, e, caps), caps);
        if acc.is_empty() {
            break;
        }
    }
    acc
}

// All monomials of internal degree `d` in generators of the given degrees,
// in lexicographic order, keeping those accepted by `keep`.
fn monomials(
    degrees: &[usize],
    caps: &[Cap],
    d: usize,
    limit: usize,
    keep: &dyn Fn(&[(u32, u32)]) -> bool,
) -> Result<Vec<Mono>> {
    let mut out = Vec::new();
    let mut current: Mono = Vec::new();
    // Suffix minimum of positive degrees, for pruning.
    fn rec(
        g: usize,
        rem: usize,
        degrees: &[usize],
        caps: &[Cap],
        current: &mut Mono,
        out: &mut Vec<Mono>,
        limit: usize,
        keep: &dyn Fn(&[(u32, u32)]) -> bool,
    ) -> Result<()> {
        if g == degrees.len() {
            if rem == 0 && keep(current) {
                if out.len() >= limit {
                    return Err(Error::SizeLimit {
                        what: "monomial basis",
                        size: out.len() + 1,
                        limit,
                    });
                }
                out.push(current.clone());
            }
            return Ok(());
        }
        rec(g + 1, rem, degrees, caps, current, out, limit, keep)?;
        let deg = degrees[g];
        let max_e: u32 = match caps[g] {
            Cap::Boolean => 1,
            Cap::Height(h) => h - 1,
            Cap::Unbounded => u32::MAX,
        };
        let mut e = 1u32;
        while e <= max_e && deg * e as usize <= rem {
            current.push((g as u32, e));
            rec(g + 1, rem - deg * e as usize, degrees, caps, current, out, limit, keep)?;
            current.pop();
            if deg == 0 {
                break;
            }
            e += 1;
        }
        Ok(())
    }
    rec(0, d, degrees, caps, &mut current, &mut out, limit, keep)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Restricted bases

// A basis of a restricted vector space made of the vectors φ^r(g) for the
// summand generators g, with a solver for coordinates.
struct LevelBasis {
    degrees: Vec<usize>,
    caps: Vec<Cap>,
    vectors: Vec<F2Vector>,
    solvers: Vec<EchelonBasis>,
    // labels[d][row] = (generator, r) of the row-th accepted vector in degree d
    labels: Vec<Vec<(u32, u32)>>,
}

impl LevelBasis {
    fn new(v: &RestrictedVS) -> Result<Self> {
        let n = v.max_degree();
        let gens = decompose_with_generators(v)?;
        let mut solvers: Vec<EchelonBasis> =
            (0..=n).map(|d| EchelonBasis::with_coordinates(v.dim(d))).collect();
        let mut labels = vec![Vec::new(); n + 1];
        let mut out = LevelBasis {
            degrees: Vec::new(),
            caps: Vec::new(),
            vectors: Vec::new(),
            solvers: Vec::new(),
            labels: Vec::new(),
        };
        for (idx, g) in gens.iter().enumerate() {
            let mut d = g.summand.degree();
            let mut x = g.vector.clone();
            let mut r = 0u32;
            loop {
                let fresh = solvers[d].insert(x.clone());
                debug_assert!(fresh, "restricted basis vectors are independent");
                labels[d].push((idx as u32, r));
                if d == 0 || 2 * d > n {
                    break;
                }
                x = v.phi(d).mul_vec(&x);
                if x.is_zero() {
                    break;
                }
                d *= 2;
                r += 1;
            }
            out.degrees.push(g.summand.degree());
            out.caps.push(cap_of(g.summand));
            out.vectors.push(g.vector.clone());
        }
        for d in 0..=n {
            debug_assert_eq!(solvers[d].dim(), v.dim(d));
        }
        out.solvers = solvers;
        out.labels = labels;
        Ok(out)
    }

    // x = Σ φ^r(g) written as Σ g^{2^r}.
    fn express(&self, degree: usize, x: &F2Vector) -> Vec<Mono> {
        let coords = self.solvers[degree].coordinates(x).expect("vector lies in the level");
        coords
            .ones()
            .map(|row| {
                let (g, r) = self.labels[degree][row];
                vec![(g, 1u32 << r)]
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Dense strategy

fn u_simplicial_upto(
    s: &SimplicialRVS,
    max_internal: usize,
    top: usize,
    limits: OracleLimits,
) -> Result<SimplicialGraded> {
    let bases: Vec<LevelBasis> = (0..=top).map(|m| LevelBasis::new(s.level(m))).collect::<Result<_>>()?;
    let mut slices = Vec::with_capacity(max_internal + 1);
    // monos[m][d]
    let mut monos: Vec<Vec<Vec<Mono>>> = Vec::with_capacity(top + 1);
    for b in &bases {
        let per_degree = (0..=max_internal)
            .map(|d| monomials(&b.degrees, &b.caps, d, limits.max_dense_dim, &|_| true))
            .collect::<Result<Vec<_>>>()?;
        monos.push(per_degree);
    }
    let indices: Vec<Vec<BTreeMap<Mono, usize>>> = monos
        .iter()
        .map(|per| {
            per.iter()
                .map(|ms| ms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect())
                .collect()
        })
        .collect();
    // Images of the generators under a structure map X_m → X_{m'}.
    let images = |m: usize, target: usize, face: bool, j: usize| -> Vec<Vec<Mono>> {
        let b = &bases[m];
        (0..b.degrees.len())
            .map(|g| {
                let d = b.degrees[g];
                let slice = s.slice(d);
                let map = if face { &slice.faces[m][j] } else { &slice.degeneracies[m][j] };
                let y = map.mul_vec(&b.vectors[g]);
                bases[target].express(d, &y)
            })
            .collect()
    };
    let mut face_images: Vec<Vec<Vec<Vec<Mono>>>> = vec![Vec::new()];
    for m in 1..=top {
        face_images.push(
            (0..=m)
                .map(|j| images(m, m - 1, true, j))
                .collect(),
        );
    }
    let degeneracy_images: Vec<Vec<Vec<Vec<Mono>>>> = (0..top)
        .map(|m| {
            (0..=m)
                .map(|j| images(m, m + 1, false, j))
                .collect()
        })
        .collect();
    let matrix = |src: usize, dst: usize, d: usize, gen_images: &[Vec<Mono>]| -> F2Matrix {
        let caps = &bases[dst].caps;
        let mut out = F2Matrix::zeros(monos[dst][d].len(), monos[src][d].len());
        for (c, mono) in monos[src][d].iter().enumerate() {
            for term in image_of_monomial(mono, gen_images, caps) {
                out.flip(indices[dst][d][&term], c);
            }
        }
        out
    };
    for d in 0..=max_internal {
        let dims = (0..=top).map(|m| monos[m][d].len()).collect();
        let faces = (0..=top)
            .map(|m| {
                if m == 0 {
                    Vec::new()
                } else {
                    (0..=m).map(|j| matrix(m, m - 1, d, &face_images[m][j])).collect()
                }
            })
            .collect();
        let degeneracies = (0..top)
            .map(|m| (0..=m).map(|j| matrix(m, m + 1, d, &degeneracy_images[m][j])).collect())
            .collect();
        slices.push(SimplicialVS {
            dims,
            faces,
            degeneracies,
        });
    }
    Ok(SimplicialGraded { slices })
}

fn dense(s: &SimplicialRVS, max_homotopy: usize, max_internal: usize, limits: OracleLimits) -> Result<BigradedDims> {
    let u = u_simplicial_upto(s, max_internal, max_homotopy + 1, limits)?;
    let mut out = BigradedDims::new(max_homotopy, max_internal);
    for (q, slice) in u.slices.iter().enumerate() {
        let h = slice.normalize().homology_dims();
        for (t, &c) in h.iter().enumerate().take(max_homotopy + 1) {
            out.add(t, q, c as u64);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Adapted strategy

fn coface(m: usize, j: usize) -> impl Iterator<Item = usize> {
    (0..m).map(move |p| if p < j { p } else { p + 1 })
}

struct AdaptedLevel {
    degrees: Vec<usize>,
    caps: Vec<Cap>,
    // bit j set when the surjection of the generator separates j and j+1
    masks: Vec<u64>,
    // (k, surjection, generator of N_k) per generator
    origin: Vec<(usize, usize, usize)>,
    // offsets[k][a]: first generator id for surjection a onto [k]
    offsets: Vec<Vec<usize>>,
    surj: Vec<Vec<Vec<usize>>>,
    surj_index: Vec<BTreeMap<Vec<usize>, usize>>,
}

fn adapted(s: &SimplicialRVS, max_homotopy: usize, max_internal: usize, limits: OracleLimits) -> Result<BigradedDims> {
    let top = max_homotopy + 1;
    if top >= 64 {
        return Err(Error::SizeLimit {
            what: "simplicial level",
            size: top,
            limit: 63,
        });
    }
    let mut out = BigradedDims::new(max_homotopy, max_internal);
    for (t, c) in boolean_homotopy(s.slice(0), max_homotopy, limits)?.into_iter().enumerate() {
        out.add(t, 0, c);
    }
    if max_internal == 0 {
        return Ok(out);
    }

    let nc = normalize_n(s)?;
    let nbases: Vec<LevelBasis> = (0..=top).map(|m| LevelBasis::new(nc.level(m))).collect::<Result<_>>()?;
    // d_0 of each generator of N_k, in the generators of N_{k−1}
    let dgen: Vec<Vec<Vec<Mono>>> = (0..=top)
        .map(|k| {
            if k == 0 {
                return Vec::new();
            }
            let b = &nbases[k];
            (0..b.degrees.len())
                .map(|g| {
                    let d = b.degrees[g];
                    let y = nc.differential(k)[d].mul_vec(&b.vectors[g]);
                    nbases[k - 1].express(d, &y)
                })
                .collect()
        })
        .collect();

    let levels: Vec<AdaptedLevel> = (0..=top)
        .map(|m| {
            let mut lvl = AdaptedLevel {
                degrees: Vec::new(),
                caps: Vec::new(),
                masks: Vec::new(),
                origin: Vec::new(),
                offsets: Vec::new(),
                surj: Vec::new(),
                surj_index: Vec::new(),
            };
            for k in 0..=m {
                let surj = surjections(m, k);
                let mut offs = Vec::with_capacity(surj.len());
                for (a, alpha) in surj.iter().enumerate() {
                    offs.push(lvl.degrees.len());
                    let mut mask = 0u64;
                    for j in 0..m {
                        if alpha[j] != alpha[j + 1] {
                            mask |= 1 << j;
                        }
                    }
                    let b = &nbases[k];
                    for g in 0..b.degrees.len() {
                        lvl.degrees.push(b.degrees[g]);
                        lvl.caps.push(b.caps[g]);
                        lvl.masks.push(mask);
                        lvl.origin.push((k, a, g));
                    }
                }
                lvl.surj_index
                    .push(surj.iter().cloned().enumerate().map(|(a, s)| (s, a)).collect());
                lvl.surj.push(surj);
                lvl.offsets.push(offs);
            }
            lvl
        })
        .collect();

    // face_images[m][j][id], for generators of degree ≤ max_internal
    let face_images: Vec<Vec<Vec<Vec<Mono>>>> = (0..=top)
        .map(|m| {
            if m == 0 {
                return Vec::new();
            }
            let lvl = &levels[m];
            let below = &levels[m - 1];
            (0..=m)
                .map(|j| {
                    (0..lvl.degrees.len())
                        .map(|id| {
                            if lvl.degrees[id] > max_internal {
                                return Vec::new();
                            }
                            let (k, a, g) = lvl.origin[id];
                            let alpha = &lvl.surj[k][a];
                            let composite: Vec<usize> = coface(m, j).map(|p| alpha[p]).collect();
                            let mut hit = vec![false; k + 1];
                            for &v in &composite {
                                hit[v] = true;
                            }
                            let missing: Vec<usize> = (0..=k).filter(|&v| !hit[v]).collect();
                            match missing.as_slice() {
                                [] => {
                                    let a2 = below.surj_index[k][&composite];
                                    vec![vec![((below.offsets[k][a2] + g) as u32, 1)]]
                                }
                                [0] => {
                                    let eta: Vec<usize> = composite.iter().map(|&v| v - 1).collect();
                                    let a2 = below.surj_index[k - 1][&eta];
                                    let base = below.offsets[k - 1][a2] as u32;
                                    dgen[k][g]
                                        .iter()
                                        .map(|mono| mono.iter().map(|&(h, e)| (base + h, e)).collect())
                                        .collect()
                                }
                                _ => Vec::new(),
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    for d in 1..=max_internal {
        let nondeg: Vec<Vec<Mono>> = (0..=top)
            .map(|m| {
                let lvl = &levels[m];
                let full = (1u64 << m) - 1;
                let keep = |mono: &[(u32, u32)]| {
                    mono.iter().fold(0u64, |acc, &(g, _)| acc | lvl.masks[g as usize]) == full
                };
                monomials(&lvl.degrees, &lvl.caps, d, limits.max_monomials, &keep)
            })
            .collect::<Result<_>>()?;
        let mut ranks = vec![0usize; top + 2];
        let mut cleared: Vec<bool> = Vec::new();
        for m in (1..=top).rev() {
            let index: BTreeMap<&Mono, u32> =
                nondeg[m - 1].iter().enumerate().map(|(i, x)| (x, i as u32)).collect();
            let caps = &levels[m - 1].caps;
            let mut columns: Vec<Vec<u32>> = Vec::new();
            for (c, mono) in nondeg[m].iter().enumerate() {
                if cleared.get(c).copied().unwrap_or(false) {
                    continue;
                }
                let mut col: Vec<u32> = Vec::new();
                for j in 0..=m {
                    for term in image_of_monomial(mono, &face_images[m][j], caps) {
                        if let Some(&r) = index.get(&term) {
                            col.push(r);
                        }
                    }
                }
                col.sort_unstable();
                let mut reduced: Vec<u32> = Vec::with_capacity(col.len());
                for r in col {
                    if reduced.last() == Some(&r) {
                        reduced.pop();
                    } else {
                        reduced.push(r);
                    }
                }
                columns.push(reduced);
            }
            let r = sparse_rank(nondeg[m - 1].len(), &columns);
            ranks[m] = r.rank;
            cleared = vec![false; nondeg[m - 1].len()];
            for p in r.pivot_rows {
                cleared[p as usize] = true;
            }
        }
        for t in 0..=max_homotopy {
            let h = nondeg[t].len() - ranks[t] - ranks[t + 1];
            out.add(t, d, h as u64);
        }
    }
    Ok(out)
}

// Homotopy of Fun((X_m)^*, F2) for the simplicial vector space X. A face
// d_j sends the indicator of λ to the indicator of μ when λ = μ ∘ d_j and to
// zero when λ does not factor through d_j, which happens exactly when λ is
// nonzero on ker d_j.
fn boolean_homotopy(x: &SimplicialVS, max_homotopy: usize, limits: OracleLimits) -> Result<Vec<u64>> {
    let top = max_homotopy + 1;
    for m in 0..=top {
        if x.dims[m] > limits.max_boolean_dim {
            return Err(Error::SizeLimit {
                what: "degree-zero level",
                size: x.dims[m],
                limit: limits.max_boolean_dim,
            });
        }
    }
    let as_mask = |v: &F2Vector| v.ones().fold(0u64, |acc, i| acc | 1 << i);
    let mut basis_size = vec![0u64; top + 1];
    let mut ranks = vec![0u64; top + 2];
    for m in 0..=top {
        let kernels: Vec<Vec<u64>> = if m == 0 {
            Vec::new()
        } else {
            x.faces[m]
                .iter()
                .map(|f| f.kernel_basis().basis().iter().map(as_mask).collect())
                .collect()
        };
        let factors = |lambda: u64, j: usize| kernels[j].iter().all(|&v| (lambda & v).count_ones() % 2 == 0);
        for lambda in 0..(1u64 << x.dims[m]) {
            if (1..=m).any(|j| factors(lambda, j)) {
                continue;
            }
            basis_size[m] += 1;
            if m >= 1 && factors(lambda, 0) {
                ranks[m] += 1;
            }
        }
    }
    Ok((0..=max_homotopy)
        .map(|t| basis_size[t] - ranks[t] - ranks[t + 1])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rchain::{make_k, make_k_cell};

    fn entries(r: &PiUResult) -> Vec<((usize, usize), u64)> {
        r.dims.iter().collect()
    }

    #[test]
    fn power_of_sum_uses_frobenius() {
        let caps = [Cap::Unbounded, Cap::Unbounded];
        let p = vec![vec![(0, 1)], vec![(1, 1)]];
        let cube = pow_poly(&p, 3, &caps);
        let expected = cancel_pairs(vec![
            vec![(0, 3)],
            vec![(0, 2), (1, 1)],
            vec![(0, 1), (1, 2)],
            vec![(1, 3)],
        ]);
        assert_eq!(cube, expected);
        let caps = [Cap::Height(2), Cap::Boolean];
        assert!(pow_poly(&[vec![(0, 1)]], 2, &caps).is_empty());
        assert_eq!(pow_poly(&[vec![(1, 1)]], 5, &caps), vec![vec![(1, 1)]]);
    }

    #[test]
    fn monomial_counts() {
        let degrees = [1, 1, 2];
        let caps = [Cap::Unbounded, Cap::Height(2), Cap::Unbounded];
        let ms = monomials(&degrees, &caps, 3, 100, &|_| true).unwrap();
        // x^3, x^2 y, x z, y z
        assert_eq!(ms.len(), 4);
        assert!(matches!(
            monomials(&degrees, &caps, 3, 3, &|_| true),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn u_simplicial_satisfies_identities() {
        let s = make_k(1, 1, 4, 4).unwrap();
        let u = u_simplicial(&s, 4).unwrap();
        for slice in &u.slices {
            slice.check_identities().unwrap();
        }
        assert_eq!(u.slices[1].dims[1], 1);
        assert_eq!(u.slices[4].dims[1], 1);
        let constant = make_k(0, 2, 4, 3).unwrap();
        let u = u_simplicial(&constant, 4).unwrap();
        for slice in &u.slices {
            assert!(slice.dims.iter().all(|&d| d == slice.dims[0]));
        }
        let cell = make_k_cell(1, 1, 1, 4, 3).unwrap();
        for slice in &u_simplicial(&cell, 4).unwrap().slices {
            slice.check_identities().unwrap();
        }
    }

    #[test]
    fn oracle_examples() {
        let s = make_k(1, 1, 4, 4).unwrap();
        let r = pi_u_oracle(&s, 3, 4).unwrap();
        assert_eq!(entries(&r), vec![((0, 0), 1), ((1, 1), 1)]);
        let s = make_k(2, 1, 3, 7).unwrap();
        let r = pi_u_oracle(&s, 6, 3).unwrap();
        assert_eq!(entries(&r), vec![((0, 0), 1), ((2, 1), 1), ((4, 2), 1), ((6, 3), 1)]);
        for n in 1..=2 {
            let s = make_k(n, 0, 2, 5).unwrap();
            let r = pi_u_oracle(&s, 4, 2).unwrap();
            assert_eq!(entries(&r), vec![((0, 0), 1)]);
        }
        let s = make_k(0, 0, 2, 3).unwrap();
        let r = pi_u_oracle(&s, 2, 2).unwrap();
        assert_eq!(entries(&r), vec![((0, 0), 2)]);
    }

    #[test]
    fn strategies_agree_on_small_cases() {
        let cases = [
            make_k(1, 1, 4, 4).unwrap(),
            make_k(1, 2, 4, 4).unwrap(),
            make_k(2, 1, 3, 4).unwrap(),
            make_k(1, 0, 2, 4).unwrap(),
            make_k_cell(1, 1, 1, 4, 4).unwrap(),
            make_k_cell(0, 1, 1, 4, 3).unwrap(),
        ];
        for s in &cases {
            let t = s.level_bound() - 1;
            let q = s.max_degree();
            let a = pi_u_oracle_with(s, t, q, OracleStrategy::Adapted, OracleLimits::default()).unwrap();
            let b = pi_u_oracle_with(s, t, q, OracleStrategy::Dense, OracleLimits::default()).unwrap();
            assert_eq!(a.dims, b.dims);
        }
    }

    #[test]
    fn level_bound_is_checked() {
        let s = make_k(1, 1, 4, 3).unwrap();
        assert!(matches!(pi_u_oracle(&s, 3, 4), Err(Error::InsufficientLevels { .. })));
    }
}
