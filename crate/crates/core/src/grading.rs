//! Bigraded dimension tables and truncated power series with integer coefficients.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

/// Dimensions indexed by `(homotopy degree t, internal degree q)`, truncated
/// at `t ≤ max_t` and `q ≤ max_q`. Absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigradedDims {
    max_t: usize,
    max_q: usize,
    entries: BTreeMap<(usize, usize), u64>,
}

impl BigradedDims {
    pub fn new(max_t: usize, max_q: usize) -> Self {
        BigradedDims {
            max_t,
            max_q,
            entries: BTreeMap::new(),
        }
    }

    /// The unit algebra: a single class at `(0, 0)`.
    pub fn unit(max_t: usize, max_q: usize) -> Self {
        let mut d = Self::new(max_t, max_q);
        d.add(0, 0, 1);
        d
    }

    pub fn max_t(&self) -> usize {
        self.max_t
    }

    pub fn max_q(&self) -> usize {
        self.max_q
    }

    pub fn in_window(&self, t: usize, q: usize) -> bool {
        t <= self.max_t && q <= self.max_q
    }

    pub fn get(&self, t: usize, q: usize) -> u64 {
        self.entries.get(&(t, q)).copied().unwrap_or(0)
    }

    /// Adds `count` at `(t, q)`; entries outside the window are dropped.
    pub fn add(&mut self, t: usize, q: usize, count: u64) {
        if count == 0 || !self.in_window(t, q) {
            return;
        }
        *self.entries.entry((t, q)).or_insert(0) += count;
    }

    /// Nonzero entries in `(t, q)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v)).filter(|&(_, v)| v != 0)
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Graded tensor product, truncated to the smaller window.
    pub fn convolve(&self, other: &BigradedDims) -> BigradedDims {
        let mut out = BigradedDims::new(self.max_t.min(other.max_t), self.max_q.min(other.max_q));
        for ((t1, q1), a) in self.iter() {
            for ((t2, q2), b) in other.iter() {
                out.add(t1 + t2, q1 + q2, a * b);
            }
        }
        out
    }

    /// Restricts to a smaller window.
    pub fn truncate(&self, max_t: usize, max_q: usize) -> BigradedDims {
        let mut out = BigradedDims::new(max_t.min(self.max_t), max_q.min(self.max_q));
        for ((t, q), c) in self.iter() {
            out.add(t, q, c);
        }
        out
    }

    /// First `(t, q)` in the common window where the two tables differ,
    /// with both values.
    pub fn first_difference(&self, other: &BigradedDims) -> Option<((usize, usize), u64, u64)> {
        let max_t = self.max_t.min(other.max_t);
        let max_q = self.max_q.min(other.max_q);
        for t in 0..=max_t {
            for q in 0..=max_q {
                let (a, b) = (self.get(t, q), other.get(t, q));
                if a != b {
                    return Some(((t, q), a, b));
                }
            }
        }
        None
    }

    /// Sum over homotopy degrees for each internal degree.
    pub fn internal_marginal(&self) -> Vec<u64> {
        let mut out = vec![0; self.max_q + 1];
        for ((_, q), c) in self.iter() {
            out[q] += c;
        }
        out
    }
}

/// A power series `c_0 + c_1 x + … + c_D x^D`, truncated at degree `D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSeries {
    coeffs: Vec<u64>,
}

impl HilbertSeries {
    pub fn zero(bound: usize) -> Self {
        HilbertSeries {
            coeffs: vec![0; bound + 1],
        }
    }

    pub fn one(bound: usize) -> Self {
        let mut s = Self::zero(bound);
        s.coeffs[0] = 1;
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        HilbertSeries { coeffs }
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> u64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    /// Multiplies in place by `1 + x^d` (an exterior generator of degree `d ≥ 1`).
    pub fn mul_exterior(&mut self, d: usize) {
        assert!(d >= 1, "exterior generator must have positive degree");
        for n in (d..self.coeffs.len()).rev() {
            self.coeffs[n] += self.coeffs[n - d];
        }
    }

    /// Multiplies in place by `1 / (1 − x^d)` (a polynomial generator of degree `d ≥ 1`).
    pub fn mul_polynomial(&mut self, d: usize) {
        assert!(d >= 1, "polynomial generator must have positive degree");
        for n in d..self.coeffs.len() {
            self.coeffs[n] += self.coeffs[n - d];
        }
    }

    /// Multiplies in place by `1 + x^d + … + x^{(h−1)d}` (height-`h` truncated polynomial).
    pub fn mul_truncated(&mut self, d: usize, height: usize) {
        assert!(d >= 1);
        let old = self.coeffs.clone();
        for n in 0..self.coeffs.len() {
            let mut acc = 0;
            let mut m = 0;
            while m < height && m * d <= n {
                acc += old[n - m * d];
                m += 1;
            }
            self.coeffs[n] = acc;
        }
    }

    pub fn mul(&self, other: &HilbertSeries) -> HilbertSeries {
        let bound = self.bound().min(other.bound());
        let mut out = HilbertSeries::zero(bound);
        for (i, &a) in self.coeffs.iter().enumerate().take(bound + 1) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(bound + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// First degree at which the two series differ, with both coefficients.
    pub fn first_difference(&self, other: &HilbertSeries) -> Option<(usize, u64, u64)> {
        (0..=self.bound().min(other.bound()))
            .map(|d| (d, self.coeff(d), other.coeff(d)))
            .find(|&(_, a, b)| a != b)
    }
}
