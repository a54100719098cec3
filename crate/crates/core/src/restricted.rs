//! Restricted vector spaces: graded F2-vector spaces `V^0, …, V^N` with
//! restriction maps `φ_i: V^i → V^{2i}` and `φ_0 = id`.
//!
//! Every such space splits as a direct sum of free pieces `F(n)` (one
//! generator `ι` with `φ^r ι ≠ 0` throughout the window) and torsion pieces
//! `T(n,k)` (`φ^k ι = 0`). A generator in degree `n` with `2n > N` carries no
//! restriction data at all and is reported as [`Summand::FreeUpToBound`].

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::f2::{complement, EchelonBasis, F2Matrix, F2Vector, Subspace};

/// One subspace per degree `0..=N`.
pub type SubspaceFamily = Vec<Subspace>;

/// What went wrong at one place in a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    DegreeOutOfRange { max_degree: usize },
    PhiOutOfRange,
    PhiShape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    PhiZeroNotIdentity,
    NotCommuting,
    ComponentShape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    MaxDegreeMismatch { expected: usize, found: usize },
    DifferentialSquareNonzero,
    Other(String),
}

/// A single violated invariant, located by internal degree and, for
/// complexes and simplicial objects, by level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub level: Option<usize>,
    pub degree: usize,
    pub problem: Problem,
}

/// Every violation found while validating a structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, level: Option<usize>, degree: usize, problem: Problem) {
        self.violations.push(Violation {
            level,
            degree,
            problem,
        });
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.violations.iter().map(|v| v.degree).collect()
    }

    pub fn into_result(self) -> core::result::Result<(), ValidationReport> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::DegreeOutOfRange { max_degree } => {
                write!(f, "dimension given beyond the maximal degree {max_degree}")
            }
            Problem::PhiOutOfRange => f.write_str("phi given where 2i exceeds the maximal degree"),
            Problem::PhiShape { expected, found } => write!(
                f,
                "phi has shape {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            Problem::PhiZeroNotIdentity => f.write_str("phi_0 is not the identity"),
            Problem::NotCommuting => f.write_str("map does not commute with phi"),
            Problem::ComponentShape { expected, found } => write!(
                f,
                "component has shape {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            Problem::MaxDegreeMismatch { expected, found } => {
                write!(f, "maximal degree {found}, expected {expected}")
            }
            Problem::DifferentialSquareNonzero => f.write_str("d∘d is nonzero"),
            Problem::Other(msg) => f.write_str(msg),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                f.write_str("; ")?;
            }
            match v.level {
                Some(l) => write!(f, "level {l}, degree {}: {}", v.degree, v.problem)?,
                None => write!(f, "degree {}: {}", v.degree, v.problem)?,
            }
        }
        Ok(())
    }
}

/// A restricted vector space truncated at internal degree `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RestrictedVS {
    max_degree: usize,
    dims: Vec<usize>,
    phi: Vec<F2Matrix>,
}

impl RestrictedVS {
    /// Builds and validates from sparse maps; missing dimensions are 0 and
    /// missing restriction maps are zero matrices.
    pub fn from_parts(
        max_degree: usize,
        dims: &BTreeMap<usize, usize>,
        phi: &BTreeMap<usize, F2Matrix>,
    ) -> core::result::Result<Self, ValidationReport> {
        let mut report = ValidationReport::default();
        let mut d = vec![0; max_degree + 1];
        for (&i, &n) in dims {
            if i > max_degree {
                report.push(None, i, Problem::DegreeOutOfRange { max_degree });
            } else {
                d[i] = n;
            }
        }
        for &i in phi.keys() {
            if 2 * i > max_degree {
                report.push(None, i, Problem::PhiOutOfRange);
            }
        }
        let maps = (0..=max_degree / 2)
            .map(|i| {
                phi.get(&i)
                    .cloned()
                    .unwrap_or_else(|| F2Matrix::zeros(d[2 * i], d[i]))
            })
            .collect();
        let v = RestrictedVS::from_raw(max_degree, d, maps);
        report.violations.extend(v.check().violations);
        report.into_result().map(|()| v)
    }

    /// Wraps the data without checking it; see [`RestrictedVS::validate`].
    /// `dims` has length `N + 1` and `phi` has one entry per `i ≤ N/2`.
    pub fn from_raw(max_degree: usize, dims: Vec<usize>, phi: Vec<F2Matrix>) -> Self {
        assert_eq!(dims.len(), max_degree + 1, "one dimension per degree 0..=N");
        assert_eq!(phi.len(), max_degree / 2 + 1, "one restriction map per i ≤ N/2");
        RestrictedVS {
            max_degree,
            dims,
            phi,
        }
    }

    /// Builds from dense data and validates.
    pub fn new(max_degree: usize, dims: Vec<usize>, phi: Vec<F2Matrix>) -> Result<Self> {
        let v = Self::from_raw(max_degree, dims, phi);
        v.validate()?;
        Ok(v)
    }

    fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (i, m) in self.phi.iter().enumerate() {
            let expected = (self.dims[2 * i], self.dims[i]);
            let found = (m.rows(), m.cols());
            if expected != found {
                report.push(None, i, Problem::PhiShape { expected, found });
            } else if i == 0 && !m.is_identity() {
                report.push(None, 0, Problem::PhiZeroNotIdentity);
            }
        }
        report
    }

    /// Checks shapes and `φ_0 = id`, listing every offending degree.
    pub fn validate(&self) -> core::result::Result<(), ValidationReport> {
        self.check().into_result()
    }

    pub fn zero(max_degree: usize) -> Self {
        let dims = vec![0; max_degree + 1];
        let phi = (0..=max_degree / 2).map(|_| F2Matrix::zeros(0, 0)).collect();
        RestrictedVS::from_raw(max_degree, dims, phi)
    }

    /// Free on one generator in degree `n`, truncated at `N`.
    pub fn free(n: usize, max_degree: usize) -> Self {
        if n == 0 {
            let mut v = Self::zero(max_degree);
            v.dims[0] = 1;
            v.phi[0] = F2Matrix::identity(1);
            return v;
        }
        Self::chain(n, usize::MAX, max_degree)
    }

    /// `T(n, k)`: generator in degree `n ≥ 1` with `φ^k ι = 0`.
    pub fn torsion(n: usize, k: usize, max_degree: usize) -> Self {
        assert!(n >= 1 && k >= 1, "torsion summands need n ≥ 1 and k ≥ 1");
        Self::chain(n, k, max_degree)
    }

    // Lines in degrees n, 2n, …, 2^{len−1} n joined by identities.
    fn chain(n: usize, len: usize, max_degree: usize) -> Self {
        let mut dims = vec![0; max_degree + 1];
        let mut degree = n;
        let mut r = 0;
        while degree <= max_degree && r < len {
            dims[degree] = 1;
            degree *= 2;
            r += 1;
        }
        let phi = (0..=max_degree / 2)
            .map(|i| {
                let mut m = F2Matrix::zeros(dims[2 * i], dims[i]);
                if dims[2 * i] == 1 && dims[i] == 1 {
                    m.set(0, 0, true);
                }
                m
            })
            .collect();
        RestrictedVS::from_raw(max_degree, dims, phi)
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    #[inline]
    pub fn dim(&self, degree: usize) -> usize {
        self.dims.get(degree).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `φ_i`; requires `2i ≤ N`.
    pub fn phi(&self, i: usize) -> &F2Matrix {
        &self.phi[i]
    }

    pub fn phis(&self) -> &[F2Matrix] {
        &self.phi
    }

    /// `φ^r: V^i → V^{2^r i}`; requires `2^r i ≤ N`.
    pub fn phi_power(&self, i: usize, r: usize) -> F2Matrix {
        let mut m = F2Matrix::identity(self.dim(i));
        let mut d = i;
        for _ in 0..r {
            if i == 0 {
                break;
            }
            assert!(2 * d <= self.max_degree, "phi power leaves the window");
            m = self.phi[d].mul(&m);
            d *= 2;
        }
        m
    }

    pub fn direct_sum(&self, other: &RestrictedVS) -> RestrictedVS {
        assert_eq!(self.max_degree, other.max_degree, "summands must share the window");
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let phi = self
            .phi
            .iter()
            .zip(&other.phi)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        RestrictedVS::from_raw(self.max_degree, dims, phi)
    }

    /// Conjugates by invertible `g_i: V^i → V^i`, giving `φ'_i = g_{2i} φ_i g_i^{-1}`.
    pub fn change_basis(&self, g: &[F2Matrix]) -> Result<RestrictedVS> {
        if g.len() != self.max_degree + 1 {
            return Err(Error::DimensionMismatch {
                context: "change of basis",
                expected: self.max_degree + 1,
                found: g.len(),
            });
        }
        let mut inverses = Vec::with_capacity(g.len());
        for (i, m) in g.iter().enumerate() {
            if m.rows() != self.dims[i] || m.cols() != self.dims[i] {
                return Err(Error::DimensionMismatch {
                    context: "change of basis",
                    expected: self.dims[i],
                    found: m.rows(),
                });
            }
            inverses.push(m.inverse().ok_or_else(|| {
                Error::InvalidArgument(alloc::format!("change of basis in degree {i} is singular"))
            })?);
        }
        let phi = self
            .phi
            .iter()
            .enumerate()
            .map(|(i, p)| g[2 * i].mul(p).mul(&inverses[i]))
            .collect();
        Ok(RestrictedVS::from_raw(self.max_degree, self.dims.clone(), phi))
    }

    /// `rank(φ^r: V^i → V^{2^r i})` for every `i ≥ 1` and `r ≥ 0` with
    /// `2^r i ≤ N`, together with `(0, 0) ↦ dim V^0`.
    pub fn rank_family(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        out.insert((0, 0), self.dims[0]);
        for i in 1..=self.max_degree {
            let mut m = F2Matrix::identity(self.dims[i]);
            let mut d = i;
            let mut r = 0;
            loop {
                out.insert((i, r), m.rank());
                if 2 * d > self.max_degree {
                    break;
                }
                m = self.phi[d].mul(&m);
                d *= 2;
                r += 1;
            }
        }
        out
    }

    /// The full family `V^i` as subspaces.
    pub fn full_family(&self) -> SubspaceFamily {
        self.dims.iter().map(|&d| Subspace::full(d)).collect()
    }

    pub fn zero_family(&self) -> SubspaceFamily {
        self.dims.iter().map(|&d| Subspace::zero(d)).collect()
    }

    fn check_family(&self, family: &[Subspace]) -> Result<()> {
        if family.len() != self.max_degree + 1 {
            return Err(Error::DimensionMismatch {
                context: "subspace family length",
                expected: self.max_degree + 1,
                found: family.len(),
            });
        }
        for (i, s) in family.iter().enumerate() {
            if s.ambient_dim() != self.dims[i] {
                return Err(Error::DimensionMismatch {
                    context: "subspace family ambient dimension",
                    expected: self.dims[i],
                    found: s.ambient_dim(),
                });
            }
        }
        Ok(())
    }

    /// Whether `φ(V^i) ⊆ V^{2i}` for every `i`.
    pub fn is_phi_closed(&self, family: &[Subspace]) -> Result<bool> {
        self.check_family(family)?;
        Ok(self.first_unclosed(family).is_none())
    }

    fn first_unclosed(&self, family: &[Subspace]) -> Option<usize> {
        (1..=self.max_degree / 2).find(|&i| {
            let target = family[2 * i].echelon();
            family[i]
                .basis()
                .iter()
                .any(|v| !target.contains(&self.phi[i].mul_vec(v)))
        })
    }

    /// The sub-object on a φ-closed family, in the family's bases, with its inclusion.
    pub fn restrict_to(&self, family: &[Subspace]) -> Result<(RestrictedVS, RVSMap)> {
        self.check_family(family)?;
        if let Some(degree) = self.first_unclosed(family) {
            return Err(Error::NotPhiClosed { degree });
        }
        let dims: Vec<usize> = family.iter().map(Subspace::dim).collect();
        let mut phi = Vec::with_capacity(self.phi.len());
        for i in 0..=self.max_degree / 2 {
            let coords = family[2 * i].echelon_with_coordinates();
            let columns: Vec<F2Vector> = family[i]
                .basis()
                .iter()
                .map(|v| {
                    coords
                        .coordinates(&self.phi[i].mul_vec(v))
                        .expect("family is phi-closed")
                })
                .collect();
            phi.push(F2Matrix::from_columns(dims[2 * i], &columns)?);
        }
        let sub = RestrictedVS::from_raw(self.max_degree, dims, phi);
        let components = family.iter().map(Subspace::as_columns).collect();
        let inclusion = RVSMap::new(sub.clone(), self.clone(), components)?;
        Ok((sub, inclusion))
    }
}

impl Subspace {
    fn echelon_with_coordinates(&self) -> EchelonBasis {
        let mut ech = EchelonBasis::with_coordinates(self.ambient_dim());
        for v in self.basis() {
            ech.insert(v.clone());
        }
        ech
    }
}

/// A morphism of restricted vector spaces, one matrix per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RVSMap {
    source: RestrictedVS,
    target: RestrictedVS,
    components: Vec<F2Matrix>,
}

impl RVSMap {
    /// Checks shapes and `φ f = f φ` in every degree.
    pub fn new(source: RestrictedVS, target: RestrictedVS, components: Vec<F2Matrix>) -> Result<Self> {
        let map = RVSMap {
            source,
            target,
            components,
        };
        map.validate().map_err(Error::Invalid)?;
        Ok(map)
    }

    pub fn validate(&self) -> core::result::Result<(), ValidationReport> {
        let mut report = ValidationReport::default();
        let n = self.source.max_degree;
        if self.target.max_degree != n {
            report.push(
                None,
                0,
                Problem::MaxDegreeMismatch {
                    expected: n,
                    found: self.target.max_degree,
                },
            );
            return Err(report);
        }
        if self.components.len() != n + 1 {
            report.push(
                None,
                0,
                Problem::Other(alloc::format!(
                    "{} components given, expected {}",
                    self.components.len(),
                    n + 1
                )),
            );
            return Err(report);
        }
        for (i, m) in self.components.iter().enumerate() {
            let expected = (self.target.dims[i], self.source.dims[i]);
            if (m.rows(), m.cols()) != expected {
                report.push(
                    None,
                    i,
                    Problem::ComponentShape {
                        expected,
                        found: (m.rows(), m.cols()),
                    },
                );
            }
        }
        if !report.is_ok() {
            return Err(report);
        }
        for i in 1..=n / 2 {
            let lhs = self.target.phi[i].mul(&self.components[i]);
            let rhs = self.components[2 * i].mul(&self.source.phi[i]);
            if lhs != rhs {
                report.push(None, i, Problem::NotCommuting);
            }
        }
        report.into_result()
    }

    pub fn identity(v: &RestrictedVS) -> Self {
        let components = v.dims.iter().map(|&d| F2Matrix::identity(d)).collect();
        RVSMap {
            source: v.clone(),
            target: v.clone(),
            components,
        }
    }

    pub fn zero(source: &RestrictedVS, target: &RestrictedVS) -> Self {
        let components = source
            .dims
            .iter()
            .zip(&target.dims)
            .map(|(&s, &t)| F2Matrix::zeros(t, s))
            .collect();
        RVSMap {
            source: source.clone(),
            target: target.clone(),
            components,
        }
    }

    pub fn source(&self) -> &RestrictedVS {
        &self.source
    }

    pub fn target(&self) -> &RestrictedVS {
        &self.target
    }

    pub fn component(&self, degree: usize) -> &F2Matrix {
        &self.components[degree]
    }

    pub fn components(&self) -> &[F2Matrix] {
        &self.components
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &RVSMap) -> RVSMap {
        let components = self
            .components
            .iter()
            .zip(&first.components)
            .map(|(a, b)| a.mul(b))
            .collect();
        RVSMap {
            source: first.source.clone(),
            target: self.target.clone(),
            components,
        }
    }

    pub fn is_isomorphism(&self) -> bool {
        self.components
            .iter()
            .all(|m| m.rows() == m.cols() && m.rank() == m.rows())
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(F2Matrix::is_identity)
    }
}

/// An indecomposable restricted vector space, as seen through the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Summand {
    /// `F(n)`: `φ^r ι ≠ 0` for every `r` with `2^r n ≤ N`, and `2n ≤ N` (or `n = 0`).
    Free { n: usize },
    /// `T(n, k)`: `φ^{k−1} ι ≠ 0 = φ^k ι`, with `2^k n ≤ N`.
    Torsion { n: usize, k: usize },
    /// A generator with `2n > N`: nothing in the window says whether it is free or torsion.
    FreeUpToBound { n: usize },
}

impl Summand {
    pub fn degree(&self) -> usize {
        match *self {
            Summand::Free { n } | Summand::Torsion { n, .. } | Summand::FreeUpToBound { n } => n,
        }
    }

    /// Whether the summand is meaningful in a window of maximal degree `N`.
    pub fn fits(&self, max_degree: usize) -> bool {
        match *self {
            Summand::Free { n } => n == 0 || 2 * n <= max_degree,
            Summand::Torsion { n, k } => {
                n >= 1 && k >= 1 && k < usize::BITS as usize && (n << k) <= max_degree
            }
            Summand::FreeUpToBound { n } => n >= 1 && n <= max_degree && 2 * n > max_degree,
        }
    }

    /// The standard model of this summand in the window.
    pub fn model(&self, max_degree: usize) -> RestrictedVS {
        match *self {
            Summand::Free { n } | Summand::FreeUpToBound { n } => RestrictedVS::free(n, max_degree),
            Summand::Torsion { n, k } => RestrictedVS::torsion(n, k, max_degree),
        }
    }

    /// Degrees `2^a n` occupied in the window, in increasing order.
    pub fn degrees(&self, max_degree: usize) -> Vec<usize> {
        let n = self.degree();
        if n == 0 {
            return vec![0];
        }
        let len = match *self {
            Summand::Torsion { k, .. } => k,
            _ => usize::MAX,
        };
        let mut out = Vec::new();
        let mut d = n;
        while d <= max_degree && out.len() < len {
            out.push(d);
            d *= 2;
        }
        out
    }

    /// Contribution to `rank(φ^r: V^i → V^{2^r i})`.
    pub fn rank_contribution(&self, i: usize, r: usize, max_degree: usize) -> usize {
        if i == 0 {
            return usize::from(self.degree() == 0 && r == 0);
        }
        let degrees = self.degrees(max_degree);
        let Some(a) = degrees.iter().position(|&d| d == i) else {
            return 0;
        };
        match *self {
            Summand::Free { .. } => 1,
            Summand::Torsion { k, .. } => usize::from(a + r < k),
            Summand::FreeUpToBound { .. } => usize::from(r == 0),
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Summand::Free { n } => write!(f, "F({n})"),
            Summand::Torsion { n, k } => write!(f, "T({n},{k})"),
            Summand::FreeUpToBound { n } => write!(f, "F?({n})"),
        }
    }
}

/// A multiset of summands, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RVSDecomposition {
    max_degree: usize,
    summands: Vec<Summand>,
}

impl RVSDecomposition {
    pub fn new(max_degree: usize, mut summands: Vec<Summand>) -> Result<Self> {
        if let Some(s) = summands.iter().find(|s| !s.fits(max_degree)) {
            return Err(Error::InvalidArgument(alloc::format!(
                "{s} does not fit a window of maximal degree {max_degree}"
            )));
        }
        summands.sort();
        Ok(RVSDecomposition {
            max_degree,
            summands,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// The direct sum of the standard models, in sorted order.
    pub fn reassemble(&self) -> RestrictedVS {
        self.summands
            .iter()
            .fold(RestrictedVS::zero(self.max_degree), |acc, s| {
                acc.direct_sum(&s.model(self.max_degree))
            })
    }

    pub fn dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_degree + 1];
        for s in &self.summands {
            for d in s.degrees(self.max_degree) {
                out[d] += 1;
            }
        }
        out
    }

    /// The rank family predicted from the summands alone.
    pub fn rank_family(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        out.insert(
            (0, 0),
            self.summands
                .iter()
                .map(|s| s.rank_contribution(0, 0, self.max_degree))
                .sum(),
        );
        for i in 1..=self.max_degree {
            let mut r = 0;
            loop {
                let total = self
                    .summands
                    .iter()
                    .map(|s| s.rank_contribution(i, r, self.max_degree))
                    .sum();
                out.insert((i, r), total);
                if (i << (r + 1)) > self.max_degree {
                    break;
                }
                r += 1;
            }
        }
        out
    }
}

impl fmt::Display for RVSDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A summand together with the vector in `V^n` generating it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub summand: Summand,
    pub vector: F2Vector,
}

/// Whether a φ-closed family `sub` is a restricted direct summand of `w`:
/// `φ(W^i) ∩ V^{2i} ⊆ φ(V^i)` in every degree.
pub fn is_summand(sub: &[Subspace], w: &RestrictedVS) -> Result<bool> {
    w.check_family(sub)?;
    if let Some(degree) = w.first_unclosed(sub) {
        return Err(Error::NotPhiClosed { degree });
    }
    for i in 1..=w.max_degree / 2 {
        let phi = w.phi(i);
        let image_of_sub = sub[i].map(phi);
        let met = phi.image().intersection(&sub[2 * i]);
        if met.dim() != image_of_sub.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `{w ∈ W^i : φ^n w ∈ V for some n ≥ 0 with 2^n i ≤ N}`, degree by degree.
pub fn phi_preimage(sub: &[Subspace], w: &RestrictedVS) -> Result<SubspaceFamily> {
    w.check_family(sub)?;
    let n = w.max_degree;
    let mut out: Vec<Option<Subspace>> = vec![None; n + 1];
    for i in (0..=n).rev() {
        let mut p = sub[i].clone();
        if i >= 1 && 2 * i <= n {
            let above = out[2 * i].as_ref().expect("higher degrees first");
            p = p.sum(&above.preimage(w.phi(i)));
        }
        out[i] = Some(p);
    }
    Ok(out.into_iter().map(Option::unwrap).collect())
}

/// The splitting `V ≅ free ⊕ nilpotent`.
#[derive(Clone, Debug)]
pub struct FreeNilpotentSplit {
    pub free: RestrictedVS,
    pub nilpotent: RestrictedVS,
    /// `free ⊕ nilpotent → V`.
    pub to_original: RVSMap,
    /// `V → free ⊕ nilpotent`, inverse to `to_original`.
    pub from_original: RVSMap,
}

/// Splits off the part killed by some power of φ inside the window.
pub fn split_free_nilpotent(v: &RestrictedVS) -> Result<FreeNilpotentSplit> {
    v.validate().map_err(Error::Invalid)?;
    let n = v.max_degree;
    let nil_family = phi_preimage(&v.zero_family(), v)?;
    let mut free_family: Vec<Subspace> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut gens: Vec<F2Vector> = Vec::new();
        if i >= 2 && i % 2 == 0 {
            gens.extend(free_family[i / 2].basis().iter().map(|u| v.phi(i / 2).mul_vec(u)));
        }
        let images = Subspace::from_basis(v.dim(i), gens.clone())?;
        let taken = nil_family[i].sum(&images);
        let rest = complement(&taken, &Subspace::full(v.dim(i)))?;
        gens.extend(rest.into_basis());
        free_family.push(Subspace::from_basis(v.dim(i), gens)?);
    }
    let (free, free_in) = v.restrict_to(&free_family)?;
    let (nilpotent, nil_in) = v.restrict_to(&nil_family)?;
    let sum = free.direct_sum(&nilpotent);
    let components: Vec<F2Matrix> = (0..=n)
        .map(|i| free_in.component(i).hstack(nil_in.component(i)))
        .collect();
    let inverses: Vec<F2Matrix> = components
        .iter()
        .map(|m| m.inverse().expect("free and nilpotent parts are complementary"))
        .collect();
    let to_original = RVSMap::new(sum.clone(), v.clone(), components)?;
    let from_original = RVSMap::new(v.clone(), sum, inverses)?;
    Ok(FreeNilpotentSplit {
        free,
        nilpotent,
        to_original,
        from_original,
    })
}

/// Generators of a decomposition into `F(n)`'s and `T(n,k)`'s.
///
/// Degrees are processed in increasing order. In degree `d` the nonzero
/// images of the basis chosen in degree `d/2` are kept, and new generators
/// extend them through the flag `ker φ ⊆ ker φ² ⊆ … ⊆ V^d`, so the level at
/// which a generator first appears is its torsion order.
pub fn decompose_with_generators(v: &RestrictedVS) -> Result<Vec<Generator>> {
    v.validate().map_err(Error::Invalid)?;
    let n = v.max_degree;
    let mut generators = Vec::new();
    let mut bases: Vec<Vec<F2Vector>> = vec![Vec::new(); n + 1];
    for d in 0..=n {
        let dim = v.dim(d);
        if d == 0 {
            for j in 0..dim {
                let u = F2Vector::unit(dim, j);
                generators.push(Generator {
                    summand: Summand::Free { n: 0 },
                    vector: u.clone(),
                });
                bases[0].push(u);
            }
            continue;
        }
        let images: Vec<F2Vector> = if d % 2 == 0 {
            bases[d / 2]
                .iter()
                .map(|b| v.phi(d / 2).mul_vec(b))
                .filter(|x| !x.is_zero())
                .collect()
        } else {
            Vec::new()
        };
        let mut top = 0;
        while (d << (top + 1)) <= n {
            top += 1;
        }
        let mut ech = EchelonBasis::new(dim);
        let mut basis: Vec<F2Vector> = Vec::new();
        let mut used = vec![false; images.len()];
        for s in 1..=top + 1 {
            let flag = if s <= top {
                v.phi_power(d, s).kernel_basis()
            } else {
                Subspace::full(dim)
            };
            let flag_map = if s <= top { Some(v.phi_power(d, s)) } else { None };
            for (idx, x) in images.iter().enumerate() {
                let inside = match &flag_map {
                    Some(m) => m.mul_vec(x).is_zero(),
                    None => true,
                };
                if !used[idx] && inside {
                    used[idx] = true;
                    let fresh = ech.insert(x.clone());
                    debug_assert!(fresh, "restriction images stay independent");
                    basis.push(x.clone());
                }
            }
            for g in flag.basis() {
                if ech.insert(g.clone()) {
                    let summand = if s <= top {
                        Summand::Torsion { n: d, k: s }
                    } else if top >= 1 {
                        Summand::Free { n: d }
                    } else {
                        Summand::FreeUpToBound { n: d }
                    };
                    generators.push(Generator {
                        summand,
                        vector: g.clone(),
                    });
                    basis.push(g.clone());
                }
            }
        }
        debug_assert_eq!(basis.len(), dim);
        bases[d] = basis;
    }
    Ok(generators)
}

/// The summand multiset of `v`.
pub fn decompose(v: &RestrictedVS) -> Result<RVSDecomposition> {
    let gens = decompose_with_generators(v)?;
    RVSDecomposition::new(v.max_degree, gens.into_iter().map(|g| g.summand).collect())
}

/// Basis sets `S^i`: the generators of the summands, grouped by degree.
pub fn extract_basis(v: &RestrictedVS) -> Result<Vec<Vec<F2Vector>>> {
    let mut out = vec![Vec::new(); v.max_degree + 1];
    for g in decompose_with_generators(v)? {
        out[g.summand.degree()].push(g.vector);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_invertible(rng: &mut impl Rng, n: usize) -> F2Matrix {
        loop {
            let rows = (0..n)
                .map(|_| F2Vector::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5))))
                .collect();
            let m = F2Matrix::from_rows(n, rows).unwrap();
            if m.rank() == n {
                return m;
            }
        }
    }

    fn scramble(rng: &mut impl Rng, v: &RestrictedVS) -> RestrictedVS {
        let g: Vec<F2Matrix> = v.dims().iter().map(|&d| random_invertible(rng, d)).collect();
        v.change_basis(&g).unwrap()
    }

    fn sum_of(n: usize, summands: &[Summand]) -> RestrictedVS {
        RVSDecomposition::new(n, summands.to_vec()).unwrap().reassemble()
    }

    fn family(v: &RestrictedVS, vectors: &[(usize, Vec<u8>)]) -> SubspaceFamily {
        let mut f = v.zero_family();
        for (d, bits) in vectors {
            f[*d] = f[*d].sum(&Subspace::span(v.dim(*d), [F2Vector::from_bits(bits)]));
        }
        f
    }

    #[test]
    fn validate_examples() {
        let f2 = RestrictedVS::free(2, 8);
        assert_eq!(f2.dims()[2..].iter().filter(|&&d| d == 1).count(), 3);
        assert!(f2.validate().is_ok());

        let mut phi = f2.phis().to_vec();
        phi[2] = F2Matrix::zeros(1, 1);
        let split = RestrictedVS::from_raw(8, f2.dims().to_vec(), phi);
        assert!(split.validate().is_ok());

        let mut phi = RestrictedVS::free(0, 4).phis().to_vec();
        phi[0] = F2Matrix::zeros(1, 1);
        let bad = RestrictedVS::from_raw(4, vec![1, 0, 0, 0, 0], phi);
        let report = bad.validate().unwrap_err();
        assert_eq!(report.degrees(), vec![0]);
    }

    #[test]
    fn from_parts_reports_every_degree() {
        let mut dims = BTreeMap::new();
        dims.insert(1, 1);
        dims.insert(2, 1);
        dims.insert(9, 1);
        let mut phi = BTreeMap::new();
        phi.insert(1, F2Matrix::zeros(2, 1));
        phi.insert(3, F2Matrix::zeros(0, 0));
        let report = RestrictedVS::from_parts(4, &dims, &phi).unwrap_err();
        let mut degrees = report.degrees();
        degrees.sort();
        assert_eq!(degrees, vec![1, 3, 9]);
    }

    #[test]
    fn summand_criterion_examples() {
        let w = RestrictedVS::free(1, 4);
        assert!(is_summand(&w.zero_family(), &w).unwrap());
        assert!(is_summand(&w.full_family(), &w).unwrap());
        let v = family(&w, &[(2, vec![1]), (4, vec![1])]);
        assert!(!is_summand(&v, &w).unwrap());
        let not_closed = family(&w, &[(1, vec![1])]);
        assert_eq!(is_summand(&not_closed, &w), Err(Error::NotPhiClosed { degree: 1 }));
    }

    #[test]
    fn preimage_examples() {
        let w = sum_of(4, &[Summand::Free { n: 1 }, Summand::Torsion { n: 1, k: 1 }]);
        assert_eq!(phi_preimage(&w.full_family(), &w).unwrap(), w.full_family());
        let p = phi_preimage(&w.zero_family(), &w).unwrap();
        assert_eq!(p[1].dim(), 1);
        assert!(p[1].contains(&F2Vector::from_bits(&[0, 1])));
        assert!(p.iter().enumerate().all(|(i, s)| i == 1 || s.dim() == 0));
        let free = RestrictedVS::free(3, 24);
        assert!(phi_preimage(&free.zero_family(), &free)
            .unwrap()
            .iter()
            .all(|s| s.dim() == 0));
    }

    #[test]
    fn split_examples() {
        let s = split_free_nilpotent(&RestrictedVS::free(3, 12)).unwrap();
        assert_eq!(s.free, RestrictedVS::free(3, 12));
        assert_eq!(s.nilpotent.total_dim(), 0);

        let s = split_free_nilpotent(&RestrictedVS::torsion(1, 2, 8)).unwrap();
        assert_eq!(s.free.total_dim(), 0);
        assert_eq!(s.nilpotent, RestrictedVS::torsion(1, 2, 8));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = scramble(
            &mut rng,
            &sum_of(8, &[Summand::Free { n: 1 }, Summand::Torsion { n: 1, k: 1 }]),
        );
        let s = split_free_nilpotent(&v).unwrap();
        assert_eq!(s.free.dims(), &[0, 1, 1, 0, 1, 0, 0, 0, 1]);
        assert_eq!(s.nilpotent.dims(), &[0, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert!(s.to_original.compose(&s.from_original).is_identity());
        assert!(s.from_original.compose(&s.to_original).is_identity());
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&RestrictedVS::free(2, 16)).unwrap();
        assert_eq!(d.summands(), &[Summand::Free { n: 2 }]);

        let v = RestrictedVS::new(2, vec![0, 1, 1], vec![F2Matrix::zeros(0, 0), F2Matrix::zeros(1, 1)])
            .unwrap();
        let d = decompose(&v).unwrap();
        assert_eq!(
            d.summands(),
            &[Summand::Torsion { n: 1, k: 1 }, Summand::FreeUpToBound { n: 2 }]
        );

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let parts = [
            Summand::Free { n: 1 },
            Summand::Free { n: 1 },
            Summand::Torsion { n: 2, k: 1 },
        ];
        let v = scramble(&mut rng, &sum_of(8, &parts));
        assert_eq!(decompose(&v).unwrap().summands(), &parts);
    }

    #[test]
    fn basis_examples() {
        let s = extract_basis(&RestrictedVS::free(3, 12)).unwrap();
        assert_eq!(s[3].len(), 1);
        assert_eq!(s.iter().map(Vec::len).sum::<usize>(), 1);

        let v = sum_of(8, &[Summand::Free { n: 2 }, Summand::Torsion { n: 1, k: 1 }]);
        let s = extract_basis(&v).unwrap();
        assert_eq!(s[1].len(), 1);
        assert_eq!(s[2].len(), 1);
        assert_eq!(s.iter().map(Vec::len).sum::<usize>(), 2);
    }

    fn random_summands(rng: &mut impl Rng, n: usize, count: usize) -> Vec<Summand> {
        (0..count)
            .map(|_| loop {
                let d = rng.gen_range(0..=n);
                let s = match rng.gen_range(0..3) {
                    0 => Summand::Free { n: d },
                    1 => Summand::Torsion {
                        n: d,
                        k: rng.gen_range(1..4),
                    },
                    _ => Summand::FreeUpToBound { n: d },
                };
                if s.fits(n) {
                    break s;
                }
            })
            .collect()
    }

    #[test]
    fn basis_generates_every_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let n = rng.gen_range(1..17);
            let count = rng.gen_range(0..6);
            let parts = random_summands(&mut rng, n, count);
            let v = scramble(&mut rng, &sum_of(n, &parts));
            let s = extract_basis(&v).unwrap();
            let expected_counts: Vec<usize> = (0..=n)
                .map(|d| parts.iter().filter(|p| p.degree() == d).count())
                .collect();
            assert_eq!(s.iter().map(Vec::len).collect::<Vec<_>>(), expected_counts);
            for i in 1..=n {
                let mut vectors: Vec<F2Vector> = Vec::new();
                let mut d = i;
                let mut r = 0;
                loop {
                    for x in &s[d] {
                        let y = v.phi_power(d, r).mul_vec(x);
                        if !y.is_zero() {
                            vectors.push(y);
                        }
                    }
                    if d % 2 == 1 || d == 0 {
                        break;
                    }
                    d /= 2;
                    r += 1;
                }
                let span = Subspace::span(v.dim(i), vectors.iter().cloned());
                assert_eq!(span.dim(), vectors.len());
                assert_eq!(span.dim(), v.dim(i));
            }
        }
    }

    #[test]
    fn scrambled_round_trip_and_rank_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let n = rng.gen_range(1..20);
            let count = rng.gen_range(0..7);
            let parts = random_summands(&mut rng, n, count);
            let expected = RVSDecomposition::new(n, parts).unwrap();
            let v = scramble(&mut rng, &expected.reassemble());
            let got = decompose(&v).unwrap();
            assert_eq!(got, expected);
            assert_eq!(v.rank_family(), got.rank_family());
            let split = split_free_nilpotent(&v).unwrap();
            let nil = phi_preimage(&v.zero_family(), &v).unwrap();
            assert!(is_summand(&nil, &v).unwrap());
            for (i, m) in split.free.phis().iter().enumerate().skip(1) {
                assert_eq!(m.rank(), split.free.dim(i));
            }
        }
    }
}
