//! Generators of the E2-page for the suspension spectrum of a wedge of
//! spheres and of the Dyer–Lashof description of `H_*(QX)`, the
//! degree-preserving bijection between them, and the Hilbert-series check
//! that the spectral sequence collapses.
//!
//! On the E2 side a generator is `δ_I [a_1, …, a_s](v)`. On the Dyer–Lashof
//! side it is `{b_1, …, b_σ}(v)`; `b_1 = 0` marks the square of
//! `{b_2, …, b_σ}(v)`. The class `v` itself is `s = 0` on the E2 side and
//! `σ = 0` on the Dyer–Lashof side.

use alloc::vec;
use alloc::vec::Vec;

use crate::delta::{excess, is_admissible, Bounds, Flavor, IndexSeq};
use crate::error::{Error, Result};
use crate::grading::{BigradedDims, HilbertSeries};

/// `δ_I [a_1, …, a_s](v)` for a class `v` of degree `k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct E2Generator {
    pub s: usize,
    pub a: Vec<usize>,
    pub ops: IndexSeq,
    pub k: usize,
}

/// `(filtration, internal, total)` with `total = internal + filtration`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree {
    pub filtration: i64,
    pub internal: u64,
    pub total: i64,
}

impl E2Generator {
    pub fn new(s: usize, a: Vec<usize>, ops: Vec<usize>, k: usize) -> Result<Self> {
        let g = E2Generator {
            s,
            a,
            ops: IndexSeq::new(ops)?,
            k,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.len() != self.s {
            return Err(Error::InvalidArgument("need exactly s entries a_r".into()));
        }
        if self.s == 0 && !self.ops.is_empty() {
            return Err(Error::InvalidArgument("the bare class v carries no operations".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("the class v must have positive degree".into()));
        }
        if !self.ops.is_admissible() || self.ops.excess() > self.s as i64 {
            return Err(Error::InvalidArgument(alloc::format!(
                "operations {:?} must be admissible with excess at most {}",
                self.ops.entries(),
                self.s
            )));
        }
        Ok(())
    }

    pub fn degree(&self) -> Degree {
        decorated_degree(self.s, &self.a, self.ops.entries(), self.k)
    }
}

/// Degree of `[a_1, …, a_s](v)`: internal
/// `Σ a_r (2^s − 2^{r−1}) + 2^s (s−1) + 1 + 2^s k`, filtration `−s`.
pub fn lz_degree(s: usize, a: &[usize], k: usize) -> Degree {
    let two_s = 1u64 << s;
    let mut t = (two_s * s as u64 + 1 + two_s * k as u64) - two_s;
    for (r, &ar) in a.iter().enumerate() {
        t += ar as u64 * (two_s - (1u64 << r));
    }
    Degree {
        filtration: -(s as i64),
        internal: t,
        total: t as i64 - s as i64,
    }
}

/// Degree of `δ_I [a_1, …, a_s](v)`: internal `2^l t`, filtration `−s − |I|`.
pub fn decorated_degree(s: usize, a: &[usize], ops: &[usize], k: usize) -> Degree {
    let base = lz_degree(s, a, k);
    let internal = base.internal << ops.len();
    let filtration = -(s as i64) - ops.iter().sum::<usize>() as i64;
    Degree {
        filtration,
        internal,
        total: internal as i64 + filtration,
    }
}

/// `{b_1, …, b_σ}(v)` for a class `v` of degree `k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DLGenerator {
    pub b: Vec<usize>,
    pub k: usize,
}

impl DLGenerator {
    pub fn degree(&self) -> u64 {
        dl_degree(&self.b, self.k)
    }

    /// `b_1 > 0`: a polynomial generator rather than a square.
    pub fn is_indecomposable(&self) -> bool {
        self.b.first().map_or(true, |&b| b > 0)
    }

    /// The Dyer–Lashof indices `J = (j_1, …, j_σ)`, `j_σ` applied first:
    /// `j_i = 2^{σ−i} k + Σ_{j>i} 2^{j−i−1} l_j + l_i` with `l_i = b_1 + … + b_i`.
    pub fn operations(&self) -> Vec<u64> {
        let sigma = self.b.len();
        let partial: Vec<u64> = self
            .b
            .iter()
            .scan(0u64, |acc, &x| {
                *acc += x as u64;
                Some(*acc)
            })
            .collect();
        (0..sigma)
            .map(|i| {
                let mut j = (self.k as u64) << (sigma - 1 - i);
                for (jj, &l) in partial.iter().enumerate().skip(i + 1) {
                    j += l << (jj - i - 1);
                }
                j + partial[i]
            })
            .collect()
    }
}

/// `2^σ k + Σ_r (2^σ − 2^{r−1}) b_r`.
pub fn dl_degree(b: &[usize], k: usize) -> u64 {
    let sigma = b.len();
    let two = 1u64 << sigma;
    let mut d = two * k as u64;
    for (r, &br) in b.iter().enumerate() {
        d += br as u64 * (two - (1u64 << r));
    }
    d
}

/// `δ_I [a_1, …, a_s](v) ↦ {s − Σ r_t, r_1, …, r_{l−1}, a_1 + r_l − 1, a_2, …, a_s}(v)`
/// with `r_l = i_l` and `r_t = i_t − 2 i_{t+1}`; for empty `I`,
/// `[a_1, …, a_s](v) ↦ {a_1 + s − 1, a_2, …, a_s}(v)`.
pub fn forward_map(g: &E2Generator) -> DLGenerator {
    let ops = g.ops.entries();
    let mut b = Vec::with_capacity(g.s + ops.len());
    if g.s == 0 {
        return DLGenerator { b, k: g.k };
    }
    if ops.is_empty() {
        b.push(g.a[0] + g.s - 1);
    } else {
        let l = ops.len();
        let r: Vec<usize> = (0..l)
            .map(|t| if t + 1 == l { ops[t] } else { ops[t] - 2 * ops[t + 1] })
            .collect();
        b.push(g.s - r.iter().sum::<usize>());
        b.extend_from_slice(&r[..l - 1]);
        b.push(g.a[0] + r[l - 1] - 1);
    }
    b.extend_from_slice(&g.a[1..]);
    DLGenerator { b, k: g.k }
}

/// Inverse of [`forward_map`]. `L` is the unique integer with
/// `b_1 + … + b_L + L < σ ≤ b_1 + … + b_{L+1} + L + 1`; then `s = σ − L`,
/// `r_t = b_{t+1}` for `t < L`, `r_L = s − b_1 − … − b_L`,
/// `a_1 = b_{L+1} − r_L + 1`, `a_i = b_{L+i}`, `i_t = Σ_{j ≥ t} 2^{j−t} r_j`.
pub fn inverse_map(d: &DLGenerator) -> Result<E2Generator> {
    let b = &d.b;
    let sigma = b.len();
    if sigma == 0 {
        return E2Generator::new(0, Vec::new(), Vec::new(), d.k);
    }
    let mut prefix = 0usize;
    for l in 0..sigma {
        let next = prefix + b[l];
        if prefix + l < sigma && sigma <= next + l + 1 {
            let s = sigma - l;
            let (a, ops) = if l == 0 {
                let mut a = b.clone();
                a[0] = b[0] + 1 - s;
                (a, Vec::new())
            } else {
                let mut r: Vec<usize> = b[1..l].to_vec();
                r.push(s - prefix);
                let mut a = b[l..].to_vec();
                a[0] = b[l] + 1 - r[l - 1];
                let ops = (0..l)
                    .map(|t| (t..l).map(|j| r[j] << (j - t)).sum())
                    .collect();
                (a, ops)
            };
            return E2Generator::new(s, a, ops, d.k);
        }
        prefix = next;
    }
    Err(Error::Malformed(alloc::format!("no valid L for {:?}", b)))
}

// All admissible I of length l with entries ≥ 1 and excess ≤ s, via the
// r-coordinates r_t ≥ 0, r_l ≥ 1, Σ r_t ≤ s.
fn decorations(l: usize, s: usize) -> Vec<Vec<usize>> {
    if l == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut r = vec![0usize; l];
    fn rec(pos: usize, budget: usize, r: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let l = r.len();
        if pos == l {
            let ops: Vec<usize> = (0..l).map(|t| (t..l).map(|j| r[j] << (j - t)).sum()).collect();
            out.push(ops);
            return;
        }
        let lo = usize::from(pos + 1 == l);
        for v in lo..=budget {
            r[pos] = v;
            rec(pos + 1, budget - v, r, out);
        }
    }
    rec(0, s, &mut r, &mut out);
    out
}

/// All E2 generators of total degree `≤ max_degree`, including `v` itself.
pub fn enum_e2(k: usize, max_degree: usize) -> Vec<E2Generator> {
    assert!(k >= 1, "the class v must have positive degree");
    let d = max_degree as i64;
    let mut out = Vec::new();
    if k <= max_degree {
        out.push(E2Generator {
            s: 0,
            a: Vec::new(),
            ops: IndexSeq::empty(),
            k,
        });
    }
    let mut s = 1;
    while lz_degree(s, &vec![0; s], k).total <= d {
        for l in 0.. {
            // Decorations only raise the total degree (it equals a Dyer–Lashof
            // degree of length s + l, which is at least 2^{s+l} k).
            if ((k as u64) << (s + l)) > max_degree as u64 {
                break;
            }
            for ops in decorations(l, s) {
                let mut a = vec![0usize; s];
                enumerate_a(s, &mut a, 0, &ops, k, d, &mut out);
            }
        }
        s += 1;
    }
    out.sort();
    out
}

fn enumerate_a(
    s: usize,
    a: &mut Vec<usize>,
    pos: usize,
    ops: &[usize],
    k: usize,
    bound: i64,
    out: &mut Vec<E2Generator>,
) {
    if decorated_degree(s, a, ops, k).total > bound {
        return;
    }
    if pos == s {
        out.push(E2Generator {
            s,
            a: a.clone(),
            ops: IndexSeq::new(ops.to_vec()).expect("positive entries"),
            k,
        });
        return;
    }
    loop {
        enumerate_a(s, a, pos + 1, ops, k, bound, out);
        a[pos] += 1;
        if decorated_degree(s, a, ops, k).total > bound {
            a[pos] = 0;
            return;
        }
    }
}

/// All Dyer–Lashof generators `{b}(v)` of degree `≤ max_degree`, including `v`.
pub fn enum_dl(k: usize, max_degree: usize) -> Vec<DLGenerator> {
    assert!(k >= 1, "the class v must have positive degree");
    let mut out = Vec::new();
    if k <= max_degree {
        out.push(DLGenerator { b: Vec::new(), k });
    }
    let mut sigma = 1;
    while ((k as u64) << sigma) <= max_degree as u64 {
        let mut b = vec![0usize; sigma];
        enumerate_b(&mut b, 0, k, max_degree as u64, &mut out);
        sigma += 1;
    }
    out.sort();
    out
}

fn enumerate_b(b: &mut Vec<usize>, pos: usize, k: usize, bound: u64, out: &mut Vec<DLGenerator>) {
    if pos == b.len() {
        out.push(DLGenerator { b: b.clone(), k });
        return;
    }
    loop {
        enumerate_b(b, pos + 1, k, bound, out);
        b[pos] += 1;
        if dl_degree(b, k) > bound {
            b[pos] = 0;
            return;
        }
    }
}

/// Outcome of comparing the two Hilbert series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseReport {
    pub degrees: Vec<usize>,
    pub max_degree: usize,
    pub dl_series: HilbertSeries,
    pub e2_series: HilbertSeries,
    pub equal: bool,
    /// `(degree, dl coefficient, e2 coefficient)` at the first disagreement.
    pub first_mismatch: Option<(usize, u64, u64)>,
}

/// `H_*(QX)` for `X` a wedge of spheres of the given degrees: polynomial on
/// each `v` and each `{b}(v)` with `b_1 > 0`.
pub fn dl_series(degrees: &[usize], max_degree: usize) -> HilbertSeries {
    let mut s = HilbertSeries::one(max_degree);
    for &k in degrees {
        for g in enum_dl(k, max_degree) {
            if g.is_indecomposable() {
                s.mul_polynomial(g.degree() as usize);
            }
        }
    }
    s
}

/// The E2 algebra: exterior on each `v` and on every decorated generator.
pub fn e2_series(degrees: &[usize], max_degree: usize) -> HilbertSeries {
    let mut s = HilbertSeries::one(max_degree);
    for &k in degrees {
        for g in enum_e2(k, max_degree) {
            s.mul_exterior(g.degree().total as usize);
        }
    }
    s
}

pub fn collapse_check(degrees: &[usize], max_degree: usize) -> Result<CollapseReport> {
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(Error::InvalidArgument("sphere degrees must be positive".into()));
    }
    let dl = dl_series(degrees, max_degree);
    let e2 = e2_series(degrees, max_degree);
    let first_mismatch = dl.first_difference(&e2);
    Ok(CollapseReport {
        degrees: degrees.to_vec(),
        max_degree,
        equal: first_mismatch.is_none(),
        dl_series: dl,
        e2_series: e2,
        first_mismatch,
    })
}

/// Dimension check `𝔈(W) ≅ 𝔖(W) ⊗ 𝔖(ΣW)` for `W` concentrated in positive
/// homotopy degrees, where `Σ` sends `(t, q)` to `(t + 1, 2q)` and doubles
/// weight. Returns the first differing `(t, q, w)` if any.
pub fn exterior_splitting_check(
    w: &BigradedDims,
    bounds: Bounds,
) -> Option<((usize, usize, usize), u64, u64)> {
    use crate::delta::{delta_generators, enum_frak_big_s, MonomialBasisCounts};
    assert!(w.iter().all(|((t, _), _)| t >= 1), "W must sit in positive homotopy degrees");
    let ext = enum_frak_big_s(w, Flavor::Exterior, bounds);
    let sym = enum_frak_big_s(w, Flavor::Symmetric, bounds);
    let half = Bounds {
        max_weight: bounds.max_weight / 2,
        ..bounds
    };
    let mut shifted = MonomialBasisCounts::unit(bounds);
    for ((t, q), mult) in w.iter() {
        for g in delta_generators(t + 1, 2 * q, Flavor::Symmetric, &half) {
            for _ in 0..mult {
                shifted.mul_exterior(g.homotopy, g.internal, 2 * g.weight as usize);
            }
        }
    }
    let product = sym.convolve(&shifted);
    ext.iter()
        .chain(product.iter())
        .map(|(k, _)| k)
        .map(|(t, q, wt)| ((t, q, wt), ext.get(t, q, wt), product.get(t, q, wt)))
        .filter(|&(_, a, b)| a != b)
        .min()
}

/// Sanity check that a decorated sequence is admissible with excess at most `s`.
pub fn is_valid_decoration(ops: &[usize], s: usize) -> bool {
    !ops.contains(&0) && is_admissible(ops) && excess(ops) <= s as i64
}
