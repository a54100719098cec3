//! Chain complexes and simplicial objects of restricted vector spaces, and
//! the Dold–Kan functors between them.
//!
//! All structure maps preserve internal degree, so every object here also
//! exists one internal degree at a time as a plain complex or simplicial
//! vector space ([`ChainVS`], [`SimplicialVS`]).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::f2::{complement, EchelonBasis, F2Matrix, F2Vector, Subspace};
use crate::restricted::{
    decompose_with_generators, Problem, RVSMap, RestrictedVS, Summand, ValidationReport,
};

/// A chain complex of restricted vector spaces `C_0 ← C_1 ← … ← C_{len−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RVSComplex {
    levels: Vec<RestrictedVS>,
    // differentials[n − 1][i] is d_n: C_n → C_{n−1} in internal degree i.
    differentials: Vec<Vec<F2Matrix>>,
}

impl RVSComplex {
    /// Wraps the data without checking it; see [`RVSComplex::validate`].
    pub fn from_raw(levels: Vec<RestrictedVS>, differentials: Vec<Vec<F2Matrix>>) -> Self {
        RVSComplex {
            levels,
            differentials,
        }
    }

    pub fn new(levels: Vec<RestrictedVS>, differentials: Vec<Vec<F2Matrix>>) -> Result<Self> {
        let c = Self::from_raw(levels, differentials);
        c.validate().map_err(Error::Invalid)?;
        Ok(c)
    }

    /// Checks levels, shapes, commutation with φ and `d ∘ d = 0`.
    pub fn validate(&self) -> core::result::Result<(), ValidationReport> {
        let mut report = ValidationReport::default();
        if self.levels.is_empty() {
            report.push(None, 0, Problem::Other("a complex needs at least one level".into()));
            return Err(report);
        }
        let n = self.levels[0].max_degree();
        if self.differentials.len() + 1 != self.levels.len() {
            report.push(
                None,
                0,
                Problem::Other(alloc::format!(
                    "{} levels need {} differentials, found {}",
                    self.levels.len(),
                    self.levels.len() - 1,
                    self.differentials.len()
                )),
            );
            return Err(report);
        }
        for (l, v) in self.levels.iter().enumerate() {
            if v.max_degree() != n {
                report.push(
                    Some(l),
                    0,
                    Problem::MaxDegreeMismatch {
                        expected: n,
                        found: v.max_degree(),
                    },
                );
            }
            if let Err(r) = v.validate() {
                for mut viol in r.violations {
                    viol.level = Some(l);
                    report.violations.push(viol);
                }
            }
        }
        if !report.is_ok() {
            return Err(report);
        }
        for (idx, d) in self.differentials.iter().enumerate() {
            let level = idx + 1;
            if d.len() != n + 1 {
                report.push(
                    Some(level),
                    0,
                    Problem::Other(alloc::format!(
                        "differential has {} components, expected {}",
                        d.len(),
                        n + 1
                    )),
                );
                continue;
            }
            for (i, m) in d.iter().enumerate() {
                let expected = (self.levels[level - 1].dim(i), self.levels[level].dim(i));
                if (m.rows(), m.cols()) != expected {
                    report.push(
                        Some(level),
                        i,
                        Problem::ComponentShape {
                            expected,
                            found: (m.rows(), m.cols()),
                        },
                    );
                }
            }
        }
        if !report.is_ok() {
            return Err(report);
        }
        for (idx, d) in self.differentials.iter().enumerate() {
            let level = idx + 1;
            for i in 1..=n / 2 {
                let lhs = self.levels[level - 1].phi(i).mul(&d[i]);
                let rhs = d[2 * i].mul(self.levels[level].phi(i));
                if lhs != rhs {
                    report.push(Some(level), i, Problem::NotCommuting);
                }
            }
            if idx >= 1 {
                for i in 0..=n {
                    if !self.differentials[idx - 1][i].mul(&d[i]).is_zero() {
                        report.push(Some(level), i, Problem::DifferentialSquareNonzero);
                    }
                }
            }
        }
        report.into_result()
    }

    /// `V` placed in homological degree `n`.
    pub fn point(n: usize, v: RestrictedVS) -> Self {
        let max = v.max_degree();
        let mut levels: Vec<RestrictedVS> = (0..n).map(|_| RestrictedVS::zero(max)).collect();
        levels.push(v);
        let differentials = (1..=n)
            .map(|l| {
                (0..=max)
                    .map(|i| F2Matrix::zeros(levels[l - 1].dim(i), levels[l].dim(i)))
                    .collect()
            })
            .collect();
        RVSComplex {
            levels,
            differentials,
        }
    }

    /// `Σ^n C(q)`: `F(q)` in homological degree `n`.
    pub fn shifted_free_point(n: usize, q: usize, max_degree: usize) -> Self {
        Self::point(n, RestrictedVS::free(q, max_degree))
    }

    /// `Σ^n C(q,k)`: the inclusion `F(2^k q) → F(q)` placed in degrees `n + 1 → n`.
    pub fn shifted_torsion_cell(n: usize, q: usize, k: usize, max_degree: usize) -> Self {
        let bottom = RestrictedVS::free(q, max_degree);
        let top = RestrictedVS::free(q << k, max_degree);
        let mut c = Self::point(n, bottom);
        let d: Vec<F2Matrix> = (0..=max_degree)
            .map(|i| {
                let mut m = F2Matrix::zeros(c.levels[n].dim(i), top.dim(i));
                if top.dim(i) == 1 {
                    m.set(0, 0, true);
                }
                m
            })
            .collect();
        c.levels.push(top);
        c.differentials.push(d);
        c
    }

    pub fn zero(max_degree: usize) -> Self {
        Self::point(0, RestrictedVS::zero(max_degree))
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(|v| v.total_dim() == 0)
    }

    pub fn max_degree(&self) -> usize {
        self.levels[0].max_degree()
    }

    pub fn level(&self, n: usize) -> &RestrictedVS {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[RestrictedVS] {
        &self.levels
    }

    /// `d_n: C_n → C_{n−1}` per internal degree, for `n ≥ 1`.
    pub fn differential(&self, n: usize) -> &[F2Matrix] {
        &self.differentials[n - 1]
    }

    pub fn differentials(&self) -> &[Vec<F2Matrix>] {
        &self.differentials
    }

    pub fn differential_map(&self, n: usize) -> RVSMap {
        RVSMap::new(
            self.levels[n].clone(),
            self.levels[n - 1].clone(),
            self.differentials[n - 1].clone(),
        )
        .expect("validated complex")
    }

    /// Pads with zero levels up to `len` levels.
    pub fn extended(&self, len: usize) -> Self {
        let mut c = self.clone();
        let max = self.max_degree();
        while c.levels.len() < len {
            let l = c.levels.len();
            c.levels.push(RestrictedVS::zero(max));
            c.differentials.push(
                (0..=max)
                    .map(|i| F2Matrix::zeros(c.levels[l - 1].dim(i), 0))
                    .collect(),
            );
        }
        c
    }

    pub fn direct_sum(&self, other: &RVSComplex) -> RVSComplex {
        let len = self.len().max(other.len());
        let a = self.extended(len);
        let b = other.extended(len);
        let levels = a.levels.iter().zip(&b.levels).map(|(x, y)| x.direct_sum(y)).collect();
        let differentials = a
            .differentials
            .iter()
            .zip(&b.differentials)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.direct_sum(q)).collect())
            .collect();
        RVSComplex {
            levels,
            differentials,
        }
    }

    /// Conjugates level `n`, degree `i` by the invertible `g[n][i]`.
    pub fn change_basis(&self, g: &[Vec<F2Matrix>]) -> Result<RVSComplex> {
        if g.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "complex change of basis",
                expected: self.len(),
                found: g.len(),
            });
        }
        let levels = self
            .levels
            .iter()
            .zip(g)
            .map(|(v, gl)| v.change_basis(gl))
            .collect::<Result<Vec<_>>>()?;
        let mut differentials = Vec::with_capacity(self.differentials.len());
        for (idx, d) in self.differentials.iter().enumerate() {
            let n = idx + 1;
            let mut comps = Vec::with_capacity(d.len());
            for (i, m) in d.iter().enumerate() {
                let inv = g[n][i].inverse().ok_or_else(|| {
                    Error::InvalidArgument(alloc::format!("singular change of basis at level {n}"))
                })?;
                comps.push(g[n - 1][i].mul(m).mul(&inv));
            }
            differentials.push(comps);
        }
        Ok(RVSComplex {
            levels,
            differentials,
        })
    }

    /// The plain complex in one internal degree.
    pub fn degree_slice(&self, i: usize) -> ChainVS {
        ChainVS {
            dims: self.levels.iter().map(|v| v.dim(i)).collect(),
            differentials: self.differentials.iter().map(|d| d[i].clone()).collect(),
        }
    }
}

/// The homology of a complex, with the chosen cycle representatives.
#[derive(Clone, Debug)]
pub struct Homology {
    pub groups: Vec<RestrictedVS>,
    /// `representatives[n][i]` are cycles in `C_n^i` whose classes form the basis of `H_n^i`.
    pub representatives: Vec<Vec<Vec<F2Vector>>>,
}

/// `H_n = ker d_n / im d_{n+1}` with the induced restriction maps.
pub fn homology(c: &RVSComplex) -> Result<Homology> {
    c.validate().map_err(Error::Invalid)?;
    let max = c.max_degree();
    let mut groups = Vec::with_capacity(c.len());
    let mut representatives = Vec::with_capacity(c.len());
    for n in 0..c.len() {
        let level = &c.levels[n];
        let mut reps: Vec<Vec<F2Vector>> = Vec::with_capacity(max + 1);
        let mut bounds: Vec<Subspace> = Vec::with_capacity(max + 1);
        for i in 0..=max {
            let cycles = if n == 0 {
                Subspace::full(level.dim(i))
            } else {
                c.differentials[n - 1][i].kernel_basis()
            };
            let boundaries = if n + 1 < c.len() {
                c.differentials[n][i].image()
            } else {
                Subspace::zero(level.dim(i))
            };
            reps.push(complement(&boundaries, &cycles)?.into_basis());
            bounds.push(boundaries);
        }
        let dims: Vec<usize> = reps.iter().map(Vec::len).collect();
        let mut phi = Vec::with_capacity(max / 2 + 1);
        for i in 0..=max / 2 {
            let mut ech = EchelonBasis::with_coordinates(level.dim(2 * i));
            for r in &reps[2 * i] {
                ech.insert(r.clone());
            }
            for b in bounds[2 * i].basis() {
                ech.insert(b.clone());
            }
            let columns: Vec<F2Vector> = reps[i]
                .iter()
                .map(|h| {
                    let image = level.phi(i).mul_vec(h);
                    let coords = ech.coordinates(&image).expect("phi preserves cycles");
                    coords.slice(0, dims[2 * i])
                })
                .collect();
            phi.push(F2Matrix::from_columns(dims[2 * i], &columns)?);
        }
        groups.push(RestrictedVS::new(max, dims, phi)?);
        representatives.push(reps);
    }
    Ok(Homology {
        groups,
        representatives,
    })
}

/// An elementary complex, up to quasi-isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComplexSummand {
    /// `Σ^n C(q)`.
    ShiftedFreePoint { n: usize, q: usize },
    /// `Σ^n C(q,k)`.
    ShiftedTorsionCell { n: usize, q: usize, k: usize },
    /// `Σ^n` of a line in degree `q` with `2q > N`.
    ShiftedFreeUpToBound { n: usize, q: usize },
}

impl ComplexSummand {
    pub fn from_summand(n: usize, s: Summand) -> Self {
        match s {
            Summand::Free { n: q } => ComplexSummand::ShiftedFreePoint { n, q },
            Summand::Torsion { n: q, k } => ComplexSummand::ShiftedTorsionCell { n, q, k },
            Summand::FreeUpToBound { n: q } => ComplexSummand::ShiftedFreeUpToBound { n, q },
        }
    }

    pub fn model(&self, max_degree: usize) -> RVSComplex {
        match *self {
            ComplexSummand::ShiftedFreePoint { n, q } | ComplexSummand::ShiftedFreeUpToBound { n, q } => {
                RVSComplex::shifted_free_point(n, q, max_degree)
            }
            ComplexSummand::ShiftedTorsionCell { n, q, k } => {
                RVSComplex::shifted_torsion_cell(n, q, k, max_degree)
            }
        }
    }
}

impl fmt::Display for ComplexSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ComplexSummand::ShiftedFreePoint { n, q } => write!(f, "S^{n} C({q})"),
            ComplexSummand::ShiftedTorsionCell { n, q, k } => write!(f, "S^{n} C({q},{k})"),
            ComplexSummand::ShiftedFreeUpToBound { n, q } => write!(f, "S^{n} C?({q})"),
        }
    }
}

/// The sorted multiset of elementary complexes quasi-isomorphic to `c`.
pub fn decompose_complex(c: &RVSComplex) -> Result<Vec<ComplexSummand>> {
    let h = homology(c)?;
    let mut out = Vec::new();
    for (n, g) in h.groups.iter().enumerate() {
        for gen in decompose_with_generators(g)? {
            out.push(ComplexSummand::from_summand(n, gen.summand));
        }
    }
    out.sort();
    Ok(out)
}

/// The direct sum of the models of `summands`.
pub fn reassemble_complex(summands: &[ComplexSummand], max_degree: usize) -> RVSComplex {
    summands
        .iter()
        .fold(RVSComplex::zero(max_degree), |acc, s| acc.direct_sum(&s.model(max_degree)))
}

/// A morphism of complexes, `components[n][i]: source_n^i → target_n^i`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: RVSComplex,
    pub target: RVSComplex,
    pub components: Vec<Vec<F2Matrix>>,
}

impl ChainMap {
    /// Whether every component commutes with φ and with the differentials.
    pub fn is_chain_map(&self) -> bool {
        let max = self.source.max_degree();
        for n in 0..self.source.len() {
            let s = &self.source.levels[n];
            let t = &self.target.levels[n];
            for i in 1..=max / 2 {
                if t.phi(i).mul(&self.components[n][i]) != self.components[n][2 * i].mul(s.phi(i)) {
                    return false;
                }
            }
            if n >= 1 {
                for i in 0..=max {
                    let lhs = self.target.differentials[n - 1][i].mul(&self.components[n][i]);
                    let rhs = self.components[n - 1][i].mul(&self.source.differentials[n - 1][i]);
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Whether the induced map on homology is bijective in every level and degree.
    pub fn is_quasi_isomorphism(&self) -> Result<bool> {
        let hs = homology(&self.source)?;
        let ht = homology(&self.target)?;
        let max = self.source.max_degree();
        for n in 0..self.source.len() {
            for i in 0..=max {
                let reps_t = &ht.representatives[n][i];
                let reps_s = &hs.representatives[n][i];
                if reps_s.len() != reps_t.len() {
                    return Ok(false);
                }
                let mut ech = EchelonBasis::new(self.target.levels[n].dim(i));
                if n + 1 < self.target.len() {
                    for b in self.target.differentials[n][i].image().basis() {
                        ech.insert(b.clone());
                    }
                }
                for r in reps_s {
                    if !ech.insert(self.components[n][i].mul_vec(r)) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// A quasi-isomorphism from the reassembled elementary complexes to `c`.
///
/// Each homology generator `v` in degree `q` is lifted to a cycle `v̂`; for a
/// torsion generator with `φ^k v = 0` a chain `ŵ` with `d ŵ = φ^k v̂` is
/// chosen, and the cell `C(q,k)` maps its two generators to `v̂` and `ŵ`.
pub fn quasi_isomorphism(c: &RVSComplex) -> Result<ChainMap> {
    let h = homology(c)?;
    let max = c.max_degree();
    let mut summands: Vec<(usize, Summand, F2Vector)> = Vec::new();
    for (n, g) in h.groups.iter().enumerate() {
        for gen in decompose_with_generators(g)? {
            let q = gen.summand.degree();
            let mut lift = F2Vector::zeros(c.levels[n].dim(q));
            for j in gen.vector.ones() {
                lift.xor_assign(&h.representatives[n][q][j]);
            }
            summands.push((n, gen.summand, lift));
        }
    }
    let mut source = RVSComplex::zero(max);
    let mut columns: Vec<Vec<Vec<F2Vector>>> = Vec::new();
    for (n, s, lift) in &summands {
        let model = ComplexSummand::from_summand(*n, *s).model(max);
        let mut cols: Vec<Vec<Vec<F2Vector>>> = vec![vec![Vec::new(); max + 1]; model.len()];
        let q = s.degree();
        push_orbit(c, *n, q, lift, &mut cols[*n]);
        if let Summand::Torsion { k, .. } = *s {
            let top = q << k;
            let target = c.levels[*n].phi_power(q, k).mul_vec(lift);
            let w = c.differentials[*n][top]
                .solve(&target)?
                .ok_or_else(|| Error::InvalidArgument("torsion class does not bound".into()))?;
            push_orbit(c, n + 1, top, &w, &mut cols[n + 1]);
        }
        source = source.direct_sum(&model);
        let len = source.len().max(columns.len());
        columns.resize(len, vec![Vec::new(); max + 1]);
        for (l, per_degree) in cols.into_iter().enumerate() {
            for (i, vs) in per_degree.into_iter().enumerate() {
                columns[l][i].extend(vs);
            }
        }
    }
    let len = source.len().max(c.len());
    let source = source.extended(len);
    let target = c.extended(len);
    columns.resize(len, vec![Vec::new(); max + 1]);
    let components = columns
        .iter()
        .enumerate()
        .map(|(l, per_degree)| {
            per_degree
                .iter()
                .enumerate()
                .map(|(i, vs)| F2Matrix::from_columns(target.levels[l].dim(i), vs))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainMap {
        source,
        target,
        components,
    })
}

// Images of x under φ^r, placed in degrees q, 2q, 4q, … within the window.
fn push_orbit(c: &RVSComplex, level: usize, q: usize, x: &F2Vector, out: &mut [Vec<F2Vector>]) {
    let max = c.max_degree();
    let v = &c.levels[level];
    let mut d = q;
    let mut y = x.clone();
    loop {
        out[d].push(y.clone());
        if d == 0 || 2 * d > max {
            break;
        }
        y = v.phi(d).mul_vec(&y);
        d *= 2;
    }
}

/// A chain complex of finite-dimensional vector spaces, `d_n: C_n → C_{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainVS {
    pub dims: Vec<usize>,
    /// `differentials[n − 1]` is `d_n`.
    pub differentials: Vec<F2Matrix>,
}

impl ChainVS {
    pub fn is_complex(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[0].mul(&w[1]).is_zero())
    }

    /// Homology dimensions in every degree present.
    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.iter().map(F2Matrix::rank).collect();
        (0..self.dims.len())
            .map(|n| {
                let out = if n == 0 { 0 } else { ranks[n - 1] };
                let inc = ranks.get(n).copied().unwrap_or(0);
                self.dims[n] - out - inc
            })
            .collect()
    }
}

/// A simplicial vector space `X_0, …, X_L` with its face and degeneracy maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialVS {
    pub dims: Vec<usize>,
    /// `faces[m][j]` is `d_j: X_m → X_{m−1}` (`faces[0]` is empty).
    pub faces: Vec<Vec<F2Matrix>>,
    /// `degeneracies[m][j]` is `s_j: X_m → X_{m+1}` for `m < L`.
    pub degeneracies: Vec<Vec<F2Matrix>>,
}

impl SimplicialVS {
    pub fn level_bound(&self) -> usize {
        self.dims.len() - 1
    }

    /// Every simplicial identity that stays within levels `0..=L`; returns
    /// the first failing one as a description.
    pub fn check_identities(&self) -> core::result::Result<(), alloc::string::String> {
        let l = self.level_bound();
        let d = |m: usize, j: usize| &self.faces[m][j];
        let s = |m: usize, j: usize| &self.degeneracies[m][j];
        for m in 2..=l {
            for j in 1..=m {
                for i in 0..j {
                    if d(m - 1, i).mul(d(m, j)) != d(m - 1, j - 1).mul(d(m, i)) {
                        return Err(alloc::format!("d{i} d{j} != d{} d{i} at level {m}", j - 1));
                    }
                }
            }
        }
        for m in 0..l {
            for j in 0..=m {
                let sj = s(m, j);
                for i in 0..=m + 1 {
                    let lhs = d(m + 1, i).mul(sj);
                    let ok = if i < j {
                        lhs == s(m - 1, j - 1).mul(d(m, i))
                    } else if i == j || i == j + 1 {
                        lhs.is_identity()
                    } else {
                        lhs == s(m - 1, j).mul(d(m, i - 1))
                    };
                    if !ok {
                        return Err(alloc::format!("d{i} s{j} identity fails at level {m}"));
                    }
                }
                if m + 1 < l {
                    for i in 0..=j {
                        if s(m + 1, i).mul(sj) != s(m + 1, j + 1).mul(s(m, i)) {
                            return Err(alloc::format!("s{i} s{j} identity fails at level {m}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The normalized complex `N_m = ⋂_{j ≥ 1} ker d_j` with differential
    /// `d_0`, together with the inclusions `N_m → X_m`.
    pub fn normalize_with_inclusions(&self) -> (ChainVS, Vec<F2Matrix>) {
        let l = self.level_bound();
        let mut bases: Vec<Subspace> = Vec::with_capacity(l + 1);
        let mut free_cols: Vec<Vec<usize>> = Vec::with_capacity(l + 1);
        for m in 0..=l {
            let (basis, free) = if m == 0 {
                (Subspace::full(self.dims[0]), (0..self.dims[0]).collect())
            } else {
                let mut stacked = F2Matrix::zeros(0, self.dims[m]);
                for j in 1..=m {
                    stacked = stacked.vstack(&self.faces[m][j]);
                }
                kernel_with_free_columns(&stacked)
            };
            bases.push(basis);
            free_cols.push(free);
        }
        let mut differentials = Vec::with_capacity(l);
        for m in 1..=l {
            let columns: Vec<F2Vector> = bases[m]
                .basis()
                .iter()
                .map(|x| {
                    let y = self.faces[m][0].mul_vec(x);
                    F2Vector::from_bools(
                        &free_cols[m - 1].iter().map(|&f| y.get(f)).collect::<Vec<_>>(),
                    )
                })
                .collect();
            differentials.push(
                F2Matrix::from_columns(bases[m - 1].dim(), &columns).expect("matrix size limit"),
            );
        }
        let dims = bases.iter().map(Subspace::dim).collect();
        let inclusions = bases.iter().map(Subspace::as_columns).collect();
        (
            ChainVS {
                dims,
                differentials,
            },
            inclusions,
        )
    }

    pub fn normalize(&self) -> ChainVS {
        self.normalize_with_inclusions().0
    }

    /// The unnormalized complex with `∂ = Σ_j d_j`.
    pub fn unnormalized(&self) -> ChainVS {
        let differentials = (1..=self.level_bound())
            .map(|m| {
                self.faces[m]
                    .iter()
                    .skip(1)
                    .fold(self.faces[m][0].clone(), |acc, f| acc.add(f))
            })
            .collect();
        ChainVS {
            dims: self.dims.clone(),
            differentials,
        }
    }
}

// The kernel from the reduced echelon form, plus its free columns; each basis
// vector is 1 at its own free column and 0 at every other free column.
fn kernel_with_free_columns(m: &F2Matrix) -> (Subspace, Vec<usize>) {
    let rref = m.rref();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..m.cols()).filter(|&c| !is_pivot[c]).collect();
    (m.kernel_basis(), free)
}

/// A simplicial graded vector space, one [`SimplicialVS`] per internal degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialGraded {
    pub slices: Vec<SimplicialVS>,
}

/// A graded chain complex, one [`ChainVS`] per internal degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    pub slices: Vec<ChainVS>,
}

impl SimplicialGraded {
    pub fn normalize(&self) -> GradedComplex {
        GradedComplex {
            slices: self.slices.iter().map(SimplicialVS::normalize).collect(),
        }
    }
}

impl GradedComplex {
    /// `dims[t][q]` of homology for `t` in the trusted range `0..L`.
    pub fn homology_dims(&self) -> Vec<Vec<usize>> {
        let per_q: Vec<Vec<usize>> = self.slices.iter().map(ChainVS::homology_dims).collect();
        let levels = per_q.first().map_or(0, Vec::len);
        (0..levels)
            .map(|t| per_q.iter().map(|h| h[t]).collect())
            .collect()
    }
}

/// A simplicial restricted vector space with levels `0..=L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialRVS {
    levels: Vec<RestrictedVS>,
    // One simplicial vector space per internal degree.
    slices: Vec<SimplicialVS>,
}

impl SimplicialRVS {
    pub fn level_bound(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn max_degree(&self) -> usize {
        self.levels[0].max_degree()
    }

    pub fn level(&self, m: usize) -> &RestrictedVS {
        &self.levels[m]
    }

    pub fn levels(&self) -> &[RestrictedVS] {
        &self.levels
    }

    /// The simplicial vector space in internal degree `i`.
    pub fn slice(&self, i: usize) -> &SimplicialVS {
        &self.slices[i]
    }

    pub fn face(&self, m: usize, j: usize) -> RVSMap {
        let comps = self.slices.iter().map(|s| s.faces[m][j].clone()).collect();
        RVSMap::new(self.levels[m].clone(), self.levels[m - 1].clone(), comps)
            .expect("faces commute with phi")
    }

    pub fn degeneracy(&self, m: usize, j: usize) -> RVSMap {
        let comps = self.slices.iter().map(|s| s.degeneracies[m][j].clone()).collect();
        RVSMap::new(self.levels[m].clone(), self.levels[m + 1].clone(), comps)
            .expect("degeneracies commute with phi")
    }

    /// Simplicial identities in every internal degree, and commutation of
    /// every structure map with φ.
    pub fn check(&self) -> core::result::Result<(), alloc::string::String> {
        for (i, s) in self.slices.iter().enumerate() {
            s.check_identities()
                .map_err(|e| alloc::format!("internal degree {i}: {e}"))?;
        }
        for m in 1..=self.level_bound() {
            for j in 0..=m {
                let comps = self.slices.iter().map(|s| s.faces[m][j].clone()).collect();
                RVSMap::new(self.levels[m].clone(), self.levels[m - 1].clone(), comps)
                    .map_err(|e| alloc::format!("face d{j} at level {m}: {e}"))?;
            }
        }
        for m in 0..self.level_bound() {
            for j in 0..=m {
                let comps = self.slices.iter().map(|s| s.degeneracies[m][j].clone()).collect();
                RVSMap::new(self.levels[m].clone(), self.levels[m + 1].clone(), comps)
                    .map_err(|e| alloc::format!("degeneracy s{j} at level {m}: {e}"))?;
            }
        }
        Ok(())
    }
}

/// `N(S)`: the normalized complex with induced restriction maps. Only levels
/// `0..L−1` carry trustworthy homology.
pub fn normalize_n(s: &SimplicialRVS) -> Result<RVSComplex> {
    let max = s.max_degree();
    let l = s.level_bound();
    let normalized: Vec<(ChainVS, Vec<F2Matrix>)> =
        s.slices.iter().map(SimplicialVS::normalize_with_inclusions).collect();
    let mut levels = Vec::with_capacity(l + 1);
    for m in 0..=l {
        let dims: Vec<usize> = normalized.iter().map(|(c, _)| c.dims[m]).collect();
        let mut phi = Vec::with_capacity(max / 2 + 1);
        for i in 0..=max / 2 {
            let inc_src = &normalized[i].1[m];
            let inc_dst = &normalized[2 * i].1[m];
            let mut ech = EchelonBasis::with_coordinates(inc_dst.rows());
            for col in inc_dst.columns() {
                ech.insert(col);
            }
            let columns: Vec<F2Vector> = inc_src
                .columns()
                .iter()
                .map(|x| {
                    let y = s.levels[m].phi(i).mul_vec(x);
                    ech.coordinates(&y).expect("phi preserves the normalized part")
                })
                .collect();
            phi.push(F2Matrix::from_columns(dims[2 * i], &columns)?);
        }
        levels.push(RestrictedVS::new(max, dims, phi)?);
    }
    let differentials = (1..=l)
        .map(|m| normalized.iter().map(|(c, _)| c.differentials[m - 1].clone()).collect())
        .collect();
    RVSComplex::new(levels, differentials)
}

/// Order-preserving surjections `[m] ↠ [k]` as value lists, ordered
/// lexicographically by their sets of increment positions.
pub fn surjections(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k > m {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut steps: Vec<usize> = (1..=k).collect();
    loop {
        let mut values = Vec::with_capacity(m + 1);
        let mut v = 0;
        let mut next = 0;
        for p in 0..=m {
            if next < k && steps[next] == p {
                v += 1;
                next += 1;
            }
            values.push(v);
        }
        out.push(values);
        // Advance to the next k-subset of {1..m} in lexicographic order.
        let mut idx = k;
        loop {
            if idx == 0 {
                return out;
            }
            idx -= 1;
            if steps[idx] < m - (k - 1 - idx) {
                break;
            }
        }
        steps[idx] += 1;
        for j in idx + 1..k {
            steps[j] = steps[j - 1] + 1;
        }
    }
}

// Components of K(C)_m: (k, surjection) for k ascending.
fn components(m: usize, len: usize) -> Vec<(usize, Vec<usize>)> {
    (0..=m.min(len.saturating_sub(1)))
        .flat_map(|k| surjections(m, k).into_iter().map(move |a| (k, a)))
        .collect()
}

enum Block {
    Identity(Vec<usize>),
    Differential(Vec<usize>),
    Zero,
}

// The block of θ^* on the component indexed by α, following the epi–mono
// factorization of αθ.
fn induced_block(alpha: &[usize], theta: &[usize]) -> Block {
    let k = *alpha.last().unwrap_or(&0);
    let composite: Vec<usize> = theta.iter().map(|&p| alpha[p]).collect();
    let mut hit = vec![false; k + 1];
    for &v in &composite {
        hit[v] = true;
    }
    let missing: Vec<usize> = (0..=k).filter(|&v| !hit[v]).collect();
    match missing.as_slice() {
        [] => Block::Identity(composite),
        [0] => Block::Differential(composite.iter().map(|&v| v - 1).collect()),
        _ => Block::Zero,
    }
}

fn coface(m: usize, j: usize) -> Vec<usize> {
    (0..m).map(|p| if p < j { p } else { p + 1 }).collect()
}

fn codegeneracy(m: usize, j: usize) -> Vec<usize> {
    (0..=m + 1).map(|p| if p <= j { p } else { p - 1 }).collect()
}

/// `K(C)` through level `L`: `K(C)_m = ⊕_{α: [m] ↠ [k]} C_k`.
pub fn dold_kan_k(c: &RVSComplex, level_bound: usize) -> Result<SimplicialRVS> {
    c.validate().map_err(Error::Invalid)?;
    let max = c.max_degree();
    let len = c.len();
    let comps: Vec<Vec<(usize, Vec<usize>)>> =
        (0..=level_bound).map(|m| components(m, len)).collect();
    let index: Vec<BTreeMap<Vec<usize>, usize>> = comps
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, (_, a))| (a.clone(), i)).collect())
        .collect();
    let levels: Vec<RestrictedVS> = comps
        .iter()
        .map(|cs| {
            cs.iter()
                .fold(RestrictedVS::zero(max), |acc, (k, _)| acc.direct_sum(&c.levels[*k]))
        })
        .collect();
    let mut slices = Vec::with_capacity(max + 1);
    for i in 0..=max {
        let offsets: Vec<Vec<usize>> = comps
            .iter()
            .map(|cs| {
                let mut acc = 0;
                cs.iter()
                    .map(|(k, _)| {
                        let o = acc;
                        acc += c.levels[*k].dim(i);
                        o
                    })
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = levels.iter().map(|v| v.dim(i)).collect();
        let build = |src: usize, dst: usize, theta: &[usize]| -> F2Matrix {
            let mut out = F2Matrix::zeros(dims[dst], dims[src]);
            for (ci, (k, alpha)) in comps[src].iter().enumerate() {
                let col0 = offsets[src][ci];
                match induced_block(alpha, theta) {
                    Block::Identity(eta) => {
                        let row0 = offsets[dst][index[dst][&eta]];
                        for x in 0..c.levels[*k].dim(i) {
                            out.set(row0 + x, col0 + x, true);
                        }
                    }
                    Block::Differential(eta) => {
                        let row0 = offsets[dst][index[dst][&eta]];
                        let d = &c.differentials[k - 1][i];
                        for r in 0..d.rows() {
                            for col in d.row(r).ones() {
                                out.set(row0 + r, col0 + col, true);
                            }
                        }
                    }
                    Block::Zero => {}
                }
            }
            out
        };
        let faces = (0..=level_bound)
            .map(|m| {
                if m == 0 {
                    Vec::new()
                } else {
                    (0..=m).map(|j| build(m, m - 1, &coface(m, j))).collect()
                }
            })
            .collect();
        let degeneracies = (0..level_bound)
            .map(|m| (0..=m).map(|j| build(m, m + 1, &codegeneracy(m, j))).collect())
            .collect();
        slices.push(SimplicialVS {
            dims,
            faces,
            degeneracies,
        });
    }
    Ok(SimplicialRVS { levels, slices })
}

/// `K[n,q]`: the simplicial object of `Σ^n F(q)`.
pub fn make_k(n: usize, q: usize, max_degree: usize, level_bound: usize) -> Result<SimplicialRVS> {
    dold_kan_k(&RVSComplex::shifted_free_point(n, q, max_degree), level_bound)
}

/// `K[n,q,k]`: the simplicial object of `Σ^n C(q,k)`.
pub fn make_k_cell(
    n: usize,
    q: usize,
    k: usize,
    max_degree: usize,
    level_bound: usize,
) -> Result<SimplicialRVS> {
    dold_kan_k(&RVSComplex::shifted_torsion_cell(n, q, k, max_degree), level_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surjection_counts_are_binomial() {
        assert_eq!(surjections(3, 2).len(), 3);
        assert_eq!(
            surjections(3, 2),
            vec![vec![0, 1, 2, 2], vec![0, 1, 1, 2], vec![0, 0, 1, 2]]
        );
        for m in 0..8 {
            for k in 0..=m + 1 {
                let mut binom = 1usize;
                for j in 0..k {
                    binom = binom * (m - j) / (j + 1);
                }
                if k > m {
                    binom = 0;
                }
                assert_eq!(surjections(m, k).len(), binom);
            }
        }
    }

    #[test]
    fn homology_of_cells() {
        let h = homology(&RVSComplex::shifted_torsion_cell(0, 1, 1, 8)).unwrap();
        assert_eq!(h.groups[0], RestrictedVS::torsion(1, 1, 8));
        assert_eq!(h.groups[1].total_dim(), 0);
        let h = homology(&RVSComplex::shifted_free_point(0, 3, 12)).unwrap();
        assert_eq!(h.groups[0], RestrictedVS::free(3, 12));
    }

    #[test]
    fn k_levels_count_components() {
        let k = dold_kan_k(&RVSComplex::shifted_free_point(2, 1, 4), 3).unwrap();
        assert_eq!(k.level(3).dim(1), 3);
        let k11 = make_k(1, 1, 4, 3).unwrap();
        let counts: Vec<usize> = (0..=3).map(|m| k11.level(m).dim(1)).collect();
        assert_eq!(counts, vec![0, 1, 2, 3]);
        let cell = make_k_cell(1, 1, 1, 4, 2).unwrap();
        assert_eq!(cell.level(1).dims(), RestrictedVS::free(1, 4).dims());
        let constant = make_k(0, 2, 8, 3).unwrap();
        for m in 0..=3 {
            assert_eq!(constant.level(m), &RestrictedVS::free(2, 8));
        }
    }
}
