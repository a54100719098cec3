//! Higher divided square operations `δ_i`: admissible sequences, the Adem
//! relation, rewriting to admissible form, and counting admissible monomial
//! bases of the symmetric and exterior functors.
//!
//! A word `δ_{i_1} ⋯ δ_{i_k}` is written `I = (i_1, …, i_k)`; `δ_{i_k}` is
//! applied first. `I` is admissible when `i_t ≥ 2 i_{t+1}` for all `t`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::grading::BigradedDims;

/// A finite sequence of positive operation indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSeq(Vec<usize>);

impl IndexSeq {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::InvalidArgument("operation indices must be positive".into()));
        }
        Ok(IndexSeq(entries))
    }

    pub fn empty() -> Self {
        IndexSeq(Vec::new())
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|I| = i_1 + … + i_k`.
    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_admissible(&self) -> bool {
        is_admissible(&self.0)
    }

    pub fn excess(&self) -> i64 {
        excess(&self.0)
    }

    /// `2^k`, the weight of `δ_I x` for `x` of weight 1.
    pub fn weight(&self) -> u64 {
        1u64 << self.0.len()
    }
}

impl fmt::Display for IndexSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "d{i}")?;
        }
        Ok(())
    }
}

pub fn is_admissible(seq: &[usize]) -> bool {
    seq.windows(2).all(|w| w[0] >= 2 * w[1])
}

/// `e(I) = i_1 − i_2 − … − i_k`, and 0 for the empty sequence.
pub fn excess(seq: &[usize]) -> i64 {
    match seq.split_first() {
        None => 0,
        Some((&first, rest)) => first as i64 - rest.iter().map(|&i| i as i64).sum::<i64>(),
    }
}

/// A sum of admissible words with coefficients in F2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DeltaPolynomial {
    terms: BTreeMap<Vec<usize>, ()>,
}

impl DeltaPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds one copy of `word`; two copies cancel.
    pub fn toggle(&mut self, word: Vec<usize>) {
        if self.terms.remove(&word).is_none() {
            self.terms.insert(word, ());
        }
    }

    /// Terms in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = &[usize]> {
        self.terms.keys().map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for DeltaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, t) in self.terms.keys().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", IndexSeq(t.clone()))?;
        }
        Ok(())
    }
}

/// `binom(n, k) mod 2` by Lucas' theorem; zero outside `0 ≤ k ≤ n`.
pub fn binomial_mod2(n: i64, k: i64) -> bool {
    if k == 0 {
        return true;
    }
    if n < 0 || k < 0 || k > n {
        return false;
    }
    (k & !n) == 0
}

/// `δ_i δ_j` for `i < 2j` as a sum of admissible `δ_{i+j−s} δ_s`, with `s`
/// ranging over the integers in `[(i+1)/2, (i+j)/3]` and coefficient
/// `binom(j−i+s−1, j−s)`.
pub fn adem_rewrite(i: usize, j: usize) -> Result<DeltaPolynomial> {
    if i == 0 || j == 0 {
        return Err(Error::InvalidArgument("operation indices must be positive".into()));
    }
    if i >= 2 * j {
        return Err(Error::InvalidArgument(alloc::format!(
            "d{i} d{j} is already admissible"
        )));
    }
    let lo = (i + 1).div_ceil(2);
    let hi = (i + j) / 3;
    let mut out = DeltaPolynomial::zero();
    for s in lo..=hi {
        let (ii, jj, ss) = (i as i64, j as i64, s as i64);
        if binomial_mod2(jj - ii + ss - 1, jj - ss) {
            out.toggle(vec![i + j - s, s]);
        }
    }
    Ok(out)
}

/// Default number of pair rewrites [`normal_form`] may perform.
pub const DEFAULT_FUEL: usize = 1_000_000;

/// Rewrites a word into a sum of admissible words by repeatedly replacing the
/// leftmost inadmissible adjacent pair.
pub fn normal_form(word: &[usize]) -> Result<DeltaPolynomial> {
    normal_form_with_fuel(word, DEFAULT_FUEL)
}

pub fn normal_form_with_fuel(word: &[usize], fuel: usize) -> Result<DeltaPolynomial> {
    if word.contains(&0) {
        return Err(Error::InvalidArgument("operation indices must be positive".into()));
    }
    let mut pending: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
    pending.insert(word.to_vec(), true);
    let mut done = DeltaPolynomial::zero();
    let mut rewrites = 0usize;
    while let Some((w, odd)) = pending.pop_first() {
        if !odd {
            continue;
        }
        let Some(t) = (0..w.len().saturating_sub(1)).find(|&t| w[t] < 2 * w[t + 1]) else {
            done.toggle(w);
            continue;
        };
        rewrites += 1;
        if rewrites > fuel {
            return Err(Error::FuelExhausted { rewrites: fuel });
        }
        for pair in adem_rewrite(w[t], w[t + 1])?.terms() {
            let mut next = Vec::with_capacity(w.len());
            next.extend_from_slice(&w[..t]);
            next.extend_from_slice(pair);
            next.extend_from_slice(&w[t + 2..]);
            let slot = pending.entry(next).or_insert(false);
            *slot = !*slot;
        }
    }
    Ok(done)
}

/// Which functor's basis is being enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `𝔰` / `𝔖`: innermost index at least 2; classes in homotopy degree 0
    /// generate polynomially, all others exterior.
    Symmetric,
    /// `𝔢` / `𝔈`: innermost index at least 1; every generator exterior.
    Exterior,
}

impl Flavor {
    fn min_entry(self) -> usize {
        match self {
            Flavor::Symmetric => 2,
            Flavor::Exterior => 1,
        }
    }
}

/// One algebra generator `δ_I v`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeltaGenerator {
    pub ops: IndexSeq,
    /// Homotopy degree `t + |I|`.
    pub homotopy: usize,
    /// Internal degree `2^{len I} q`.
    pub internal: usize,
    pub weight: u64,
}

/// Truncation bounds for monomial enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_homotopy: usize,
    pub max_internal: usize,
    pub max_weight: usize,
}

/// Generators `δ_I v` for one class `v` in bidegree `(t, q)`, within bounds:
/// `I` admissible, innermost index at least the flavor's minimum, and every
/// `δ_i` applied in degree at least `i` (equivalently `e(I) ≤ t`).
pub fn delta_generators(t: usize, q: usize, flavor: Flavor, bounds: &Bounds) -> Vec<DeltaGenerator> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    // Sequences are grown outward: the next operation is applied last and
    // must be at least twice the previous outermost index.
    while let Some(seq) = stack.pop() {
        let len = seq.len();
        let degree = t + seq.iter().sum::<usize>();
        let internal = q << len;
        let weight = 1usize << len;
        if degree > bounds.max_homotopy || internal > bounds.max_internal || weight > bounds.max_weight {
            continue;
        }
        out.push(DeltaGenerator {
            ops: IndexSeq(seq.iter().rev().copied().collect()),
            homotopy: degree,
            internal,
            weight: weight as u64,
        });
        if 2 * weight > bounds.max_weight || (q << (len + 1)) > bounds.max_internal {
            continue;
        }
        let lo = match seq.last() {
            None => flavor.min_entry(),
            Some(&prev) => 2 * prev,
        };
        for i in lo..=degree.min(bounds.max_homotopy - degree) {
            let mut next = seq.clone();
            next.push(i);
            stack.push(next);
        }
    }
    out.sort();
    out
}

/// Counts of basis monomials by `(homotopy, internal, weight)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasisCounts {
    bounds: Bounds,
    counts: Vec<u64>,
}

impl MonomialBasisCounts {
    fn idx(&self, t: usize, q: usize, w: usize) -> usize {
        (t * (self.bounds.max_internal + 1) + q) * (self.bounds.max_weight + 1) + w
    }

    pub fn unit(bounds: Bounds) -> Self {
        let n = (bounds.max_homotopy + 1) * (bounds.max_internal + 1) * (bounds.max_weight + 1);
        let mut c = MonomialBasisCounts {
            bounds,
            counts: vec![0; n],
        };
        c.counts[0] = 1;
        c
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn get(&self, t: usize, q: usize, w: usize) -> u64 {
        if t > self.bounds.max_homotopy || q > self.bounds.max_internal || w > self.bounds.max_weight {
            return 0;
        }
        self.counts[self.idx(t, q, w)]
    }

    /// Nonzero entries in `(t, q, w)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), u64)> + '_ {
        let b = self.bounds;
        (0..=b.max_homotopy).flat_map(move |t| {
            (0..=b.max_internal).flat_map(move |q| {
                (0..=b.max_weight).filter_map(move |w| {
                    let c = self.get(t, q, w);
                    (c != 0).then_some(((t, q, w), c))
                })
            })
        })
    }

    /// Multiplies by `1 + x^g` (an exterior generator).
    pub fn mul_exterior(&mut self, t: usize, q: usize, w: usize) {
        let b = self.bounds;
        assert!((t, q, w) != (0, 0, 0), "exterior generator in degree zero");
        if t > b.max_homotopy || q > b.max_internal || w > b.max_weight {
            return;
        }
        for tt in (t..=b.max_homotopy).rev() {
            for qq in (q..=b.max_internal).rev() {
                for ww in (w..=b.max_weight).rev() {
                    let src = self.idx(tt - t, qq - q, ww - w);
                    let dst = self.idx(tt, qq, ww);
                    self.counts[dst] += self.counts[src];
                }
            }
        }
    }

    /// Multiplies by `1 / (1 − x^g)` (a polynomial generator).
    pub fn mul_polynomial(&mut self, t: usize, q: usize, w: usize) {
        let b = self.bounds;
        assert!(w >= 1 || t >= 1 || q >= 1, "polynomial generator in degree zero");
        if t > b.max_homotopy || q > b.max_internal || w > b.max_weight {
            return;
        }
        for tt in t..=b.max_homotopy {
            for qq in q..=b.max_internal {
                for ww in w..=b.max_weight {
                    let src = self.idx(tt - t, qq - q, ww - w);
                    let dst = self.idx(tt, qq, ww);
                    self.counts[dst] += self.counts[src];
                }
            }
        }
    }

    /// The product of two count tables (same bounds).
    pub fn convolve(&self, other: &MonomialBasisCounts) -> MonomialBasisCounts {
        assert_eq!(self.bounds, other.bounds);
        let mut out = MonomialBasisCounts::unit(self.bounds);
        out.counts[0] = 0;
        let a: Vec<_> = self.iter().collect();
        let b: Vec<_> = other.iter().collect();
        for &((t1, q1, w1), x) in &a {
            for &((t2, q2, w2), y) in &b {
                let (t, q, w) = (t1 + t2, q1 + q2, w1 + w2);
                if t <= self.bounds.max_homotopy && q <= self.bounds.max_internal && w <= self.bounds.max_weight {
                    let i = out.idx(t, q, w);
                    out.counts[i] += x * y;
                }
            }
        }
        out
    }

    /// Sum over weights.
    pub fn total(&self) -> BigradedDims {
        let mut out = BigradedDims::new(self.bounds.max_homotopy, self.bounds.max_internal);
        for ((t, q, _), c) in self.iter() {
            out.add(t, q, c);
        }
        out
    }

    /// The weight-`w` part.
    pub fn weight_slice(&self, w: usize) -> BigradedDims {
        let mut out = BigradedDims::new(self.bounds.max_homotopy, self.bounds.max_internal);
        for ((t, q, ww), c) in self.iter() {
            if ww == w {
                out.add(t, q, c);
            }
        }
        out
    }
}

/// Monomial counts of `𝔖(V)` or `𝔈(V)` for `V` given by bigraded dimensions.
pub fn enum_frak_big_s(v: &BigradedDims, flavor: Flavor, bounds: Bounds) -> MonomialBasisCounts {
    let mut out = MonomialBasisCounts::unit(bounds);
    for ((t, q), mult) in v.iter() {
        for g in delta_generators(t, q, flavor, &bounds) {
            for _ in 0..mult {
                if t == 0 && flavor == Flavor::Symmetric {
                    out.mul_polynomial(g.homotopy, g.internal, g.weight as usize);
                } else {
                    out.mul_exterior(g.homotopy, g.internal, g.weight as usize);
                }
            }
        }
    }
    out
}

/// Monomial counts of `𝔰(V)` or `𝔢(V)` for `V` graded by homotopy degree
/// only; reported with internal degree 0.
pub fn enum_frak_s(
    dims: &[u64],
    flavor: Flavor,
    max_homotopy: usize,
    max_weight: usize,
) -> MonomialBasisCounts {
    let mut v = BigradedDims::new(max_homotopy, 0);
    for (t, &d) in dims.iter().enumerate() {
        v.add(t, 0, d);
    }
    enum_frak_big_s(
        &v,
        flavor,
        Bounds {
            max_homotopy,
            max_internal: 0,
            max_weight,
        },
    )
}

/// Human-readable form of a generator, e.g. `d4 d2 v`.
pub fn describe(g: &DeltaGenerator, name: &str) -> String {
    if g.ops.is_empty() {
        String::from(name)
    } else {
        alloc::format!("{} {name}", g.ops)
    }
}
