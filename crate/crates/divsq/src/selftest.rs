//! The acceptance suite: exact checks of every identity the library rests on.
//!
//! Each criterion returns a verdict plus a JSON snapshot of what it computed,
//! which `--golden` mode stores and later compares against.

use std::fmt;
use std::time::{Duration, Instant};

use divsq_core::delta::{is_admissible, normal_form};
use divsq_core::loopspace::{collapse_check, dl_degree, enum_dl, enum_e2, forward_map, inverse_map};
use divsq_core::rchain::{dold_kan_k, normalize_n};
use divsq_core::restricted::decompose;
use divsq_core::unstable::{e_infinity_length, pi_u_closed_form, pi_u_oracle};
use serde_json::{json, Value};

use crate::corpus::{self, ComplexCase, RestrictedCase};
use crate::format::bigraded_value;

pub const DEFAULT_SEED: u64 = 0x5eed_0001;

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub snapshot: Value,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {:<28} {} ({:.2?}) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed,
            self.detail
        )
    }
}

pub const NAMES: [&str; 9] = [
    "restricted round trip",
    "rank family",
    "dold-kan round trip",
    "adem engine",
    "oracle vs closed form",
    "length filtration",
    "bijection round trip",
    "degree preservation",
    "collapse",
];

type Check = Result<(String, Value), String>;

fn restricted_corpus(seed: u64) -> Vec<RestrictedCase> {
    let mut rng = corpus::rng(seed);
    (0..1000).map(|_| corpus::random_restricted(&mut rng, 32, 40)).collect()
}

fn complex_corpus(seed: u64) -> Vec<ComplexCase> {
    let mut rng = corpus::rng(seed ^ 0xc0c0);
    (0..200).map(|_| corpus::random_complex(&mut rng, 3, 8)).collect()
}

fn within(elapsed: Duration, budget: Duration, what: &str) -> Result<(), String> {
    if elapsed > budget {
        Err(format!("{what} took {elapsed:.2?}, over the {budget:?} budget"))
    } else {
        Ok(())
    }
}

fn c1(cfg: &SelftestConfig) -> Check {
    let start = Instant::now();
    let cases = restricted_corpus(cfg.seed);
    let mut summands = 0;
    for (i, case) in cases.iter().enumerate() {
        let got = decompose(&case.space).map_err(|e| format!("case {i}: {e}"))?;
        if got != case.expected {
            return Err(format!("case {i}: expected {}, got {got}", case.expected));
        }
        summands += got.summands().len();
    }
    within(start.elapsed(), Duration::from_secs(60), "1000 decompositions")?;
    Ok((
        format!("1000 spaces, {summands} summands"),
        json!(cases.iter().take(50).map(|c| c.expected.to_string()).collect::<Vec<_>>()),
    ))
}

fn c2(cfg: &SelftestConfig) -> Check {
    let cases = restricted_corpus(cfg.seed);
    let mut entries = 0;
    for (i, case) in cases.iter().enumerate() {
        let direct = case.space.rank_family();
        let got = decompose(&case.space).map_err(|e| format!("case {i}: {e}"))?;
        if got.rank_family() != direct {
            return Err(format!("case {i}: reassembled rank family differs"));
        }
        entries += direct.len();
    }
    Ok((format!("{entries} ranks compared"), json!(entries)))
}

fn c3(cfg: &SelftestConfig) -> Check {
    for (i, case) in complex_corpus(cfg.seed).iter().enumerate() {
        let s = dold_kan_k(&case.complex, 3).map_err(|e| format!("complex {i}: {e}"))?;
        let n = normalize_n(&s).map_err(|e| format!("complex {i}: {e}"))?;
        if n != case.complex.extended(n.len()) {
            return Err(format!("complex {i}: N(K(C)) differs from C"));
        }
    }
    Ok(("200 complexes".into(), json!(200)))
}

fn c4(_: &SelftestConfig) -> Check {
    let start = Instant::now();
    let mut pairs = 0;
    let mut forms = serde_json::Map::new();
    for i in 1..=20usize {
        for j in 1..=20usize {
            if is_admissible(&[i, j]) {
                continue;
            }
            pairs += 1;
            let nf = normal_form(&[i, j]).map_err(|e| format!("d{i} d{j}: {e}"))?;
            for term in nf.terms() {
                if !is_admissible(term) {
                    return Err(format!("d{i} d{j}: inadmissible term {term:?}"));
                }
                if term.iter().sum::<usize>() != i + j {
                    return Err(format!("d{i} d{j}: term {term:?} changes the degree"));
                }
                let again = normal_form(term).map_err(|e| format!("{term:?}: {e}"))?;
                if again.len() != 1 || again.terms().next() != Some(term) {
                    return Err(format!("d{i} d{j}: normal form of {term:?} is not itself"));
                }
            }
            forms.insert(format!("d{i} d{j}"), json!(nf.to_string()));
        }
    }
    within(start.elapsed(), Duration::from_secs(10), "the Adem sweep")?;
    Ok((format!("{pairs} inadmissible pairs"), Value::Object(forms)))
}

fn c5(_: &SelftestConfig) -> Check {
    let mut snapshot = serde_json::Map::new();
    for case in corpus::k_cases(6, 6) {
        let (t, q) = (case.max_homotopy, case.max_internal);
        let oracle = pi_u_oracle(&case.simplicial, t, q).map_err(|e| format!("{}: oracle: {e}", case.name))?;
        let closed = pi_u_closed_form(&case.complex, t, q).map_err(|e| format!("{}: {e}", case.name))?;
        if let Some(((tt, qq), a, b)) = oracle.dims.first_difference(&closed.dims) {
            return Err(format!(
                "{} at (t,q) = ({tt},{qq}): oracle {a}, closed form {b}",
                case.name
            ));
        }
        snapshot.insert(case.name.clone(), bigraded_value(&closed.dims));
    }
    Ok(("10 objects at T = 6, Q ≥ 6".into(), Value::Object(snapshot)))
}

fn c6(cfg: &SelftestConfig) -> Check {
    let mut complexes: Vec<_> = complex_corpus(cfg.seed).into_iter().map(|c| c.complex).collect();
    complexes.extend(corpus::k_cases(6, 6).into_iter().map(|c| c.complex));
    for (i, c) in complexes.iter().enumerate() {
        let q = c.max_degree();
        let e = e_infinity_length(c, 6, q).map_err(|e| format!("complex {i}: {e}"))?;
        let closed = pi_u_closed_form(c, 6, q).map_err(|e| format!("complex {i}: {e}"))?;
        if let Some(((t, qq), a, b)) = e.marginal().first_difference(&closed.dims) {
            return Err(format!("complex {i} at ({t},{qq}): E-infinity {a}, closed form {b}"));
        }
    }
    Ok((format!("{} complexes", complexes.len()), json!(complexes.len())))
}

fn c7(_: &SelftestConfig) -> Check {
    let start = Instant::now();
    let mut count = 0;
    for k in 1..=4 {
        for g in enum_e2(k, 60) {
            let back = inverse_map(&forward_map(&g)).map_err(|e| format!("{g:?}: {e}"))?;
            if back != g {
                return Err(format!("inverse(forward({g:?})) = {back:?}"));
            }
            count += 1;
        }
        for d in enum_dl(k, 60) {
            let g = inverse_map(&d).map_err(|e| format!("{d:?}: {e}"))?;
            if forward_map(&g) != d {
                return Err(format!("forward(inverse({d:?})) differs"));
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(10), "the bijection sweep")?;
    Ok((format!("{count} generators, k ≤ 4, degree ≤ 60"), json!(count)))
}

fn c8(_: &SelftestConfig) -> Check {
    let mut count = 0;
    for k in 1..=4 {
        for g in enum_e2(k, 60) {
            let d = forward_map(&g);
            let total = g.degree().total;
            if dl_degree(&d.b, d.k) as i64 != total {
                return Err(format!("{g:?} has total degree {total}, its image {}", dl_degree(&d.b, d.k)));
            }
            count += 1;
        }
    }
    Ok((format!("{count} generators"), json!(count)))
}

fn c9(_: &SelftestConfig) -> Check {
    let start = Instant::now();
    let mut snapshot = serde_json::Map::new();
    for degrees in [vec![1], vec![2], vec![3], vec![1, 2]] {
        let r = collapse_check(&degrees, 40).map_err(|e| e.to_string())?;
        if let Some((d, a, b)) = r.first_mismatch {
            return Err(format!("{degrees:?} at degree {d}: H_*(QX) {a}, E2 {b}"));
        }
        snapshot.insert(format!("{degrees:?}"), json!(r.dl_series.coeffs()));
    }
    within(start.elapsed(), Duration::from_secs(30), "the collapse checks")?;
    Ok(("k = 1, 2, 3 and the wedge {1,2} through 40".into(), Value::Object(snapshot)))
}

/// Runs criterion `id` (1 to 9).
pub fn run_criterion(id: usize, cfg: &SelftestConfig) -> CriterionResult {
    let checks: [fn(&SelftestConfig) -> Check; 9] = [c1, c2, c3, c4, c5, c6, c7, c8, c9];
    assert!((1..=9).contains(&id), "criteria are numbered 1 to 9");
    let start = Instant::now();
    let outcome = checks[id - 1](cfg);
    let elapsed = start.elapsed();
    let (passed, detail, snapshot) = match outcome {
        Ok((d, s)) => (true, d, s),
        Err(d) => (false, d, Value::Null),
    };
    CriterionResult {
        id,
        name: NAMES[id - 1],
        passed,
        detail,
        elapsed,
        snapshot,
    }
}

pub fn run_all(cfg: &SelftestConfig) -> Vec<CriterionResult> {
    (1..=9).map(|id| run_criterion(id, cfg)).collect()
}
