//! Named verification suites over a range of lattice sizes, with
//! serializable reports.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{FactoredRational, Poly, Symbol};
use crate::operators::{check_block_recursion, Params};
use crate::sample::ParamSampler;
use crate::spectrum::{
    charpoly_by_classification, charpoly_from_closed_form, charpoly_ratio, charpoly_specialized,
    geometric_multiplicities, verify_charpoly_at, verify_spectrum, verify_spectrum_symbolic,
};
use crate::steady::{
    check_eigen_equation, steady_state_scaled, steady_state_symbolic, verify_partition, verify_partition_general,
};
use crate::transfer::{propagate_steady, verify_tma};
use crate::transform::verify_b_transform;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Triangular,
    Charpoly,
    Ratio,
    Blockrec,
    Btransform,
    Partition,
    Tma,
    Steady,
    Multiplicity,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Triangular,
        Suite::Charpoly,
        Suite::Ratio,
        Suite::Blockrec,
        Suite::Btransform,
        Suite::Partition,
        Suite::Tma,
        Suite::Steady,
        Suite::Multiplicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Triangular => "triangular",
            Suite::Charpoly => "charpoly",
            Suite::Ratio => "ratio",
            Suite::Blockrec => "blockrec",
            Suite::Btransform => "btransform",
            Suite::Partition => "partition",
            Suite::Tma => "tma",
            Suite::Steady => "steady",
            Suite::Multiplicity => "multiplicity",
        }
    }

    /// What the suite establishes.
    pub fn description(self) -> &'static str {
        match self {
            Suite::Triangular => {
                "conjugation by the rearranged Hadamard matrix makes M_L lower triangular with diagonal lambda_{b^D} - beta^rev.b"
            }
            Suite::Charpoly => {
                "det(x - M_L) = A_L(x) A_L(x+2a+b) B_L(x+b) B_L(x+2a), against interpolated determinants"
            }
            Suite::Ratio => "P_{L+1}/P_L = B_L(x+1) B_L(x+2a+b+1) A_L(x+b+1) A_L(x+2a+1) as factor multisets",
            Suite::Blockrec => "M_L is assembled from M_{L-1} by the two-by-two block recursion",
            Suite::Btransform => "H B_L(beta) H = B_L(beta^rev)^t",
            Suite::Partition => {
                "lcm of steady-state denominators = 2^C(L-1,2) (1+2a)^(L-1) (1+b)^(L-1) (2a+b) = product over weights 1 and 2"
            }
            Suite::Tma => "M_{L+1} T = T M_L != 0 for the recursively built transfer matrices, and T v_L ~ v_{L+1}",
            Suite::Steady => "the triangular solve gives a normalized vector with M x = (sum alpha) x",
            Suite::Multiplicity => {
                "report only: distinct eigenvalues with algebraic and geometric multiplicities (degeneracy probe)"
            }
        }
    }

    /// Largest symbolic size, and largest rational size.
    pub fn caps(self, general: bool) -> (usize, usize) {
        match (self, general) {
            (Suite::Triangular, _) => (4, 8),
            (Suite::Charpoly, _) => (12, 7),
            (Suite::Ratio, _) => (20, 20),
            (Suite::Blockrec, _) => (4, 10),
            (Suite::Btransform, _) => (5, 10),
            (Suite::Partition, false) => (5, 12),
            (Suite::Partition, true) => (3, 12),
            (Suite::Tma, _) => (4, 7),
            (Suite::Steady, _) => (5, 12),
            (Suite::Multiplicity, _) => (0, 6),
        }
    }

    /// Report-only suites never fail.
    pub fn report_only(self) -> bool {
        self == Suite::Multiplicity
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub lmin: usize,
    pub lmax: usize,
    pub symbolic: bool,
    /// Use one independent symbol per configuration and site.
    pub general: bool,
    pub seed: u64,
    /// Random parameter points per size in rational mode.
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            lmin: 1,
            lmax: 4,
            symbolic: false,
            general: false,
            seed: 42,
            samples: 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    #[serde(rename = "L")]
    pub len: usize,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Value>,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub description: &'static str,
    pub seed: u64,
    pub report_only: bool,
    pub passed: bool,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    /// Exit status for command-line use.
    pub fn success(&self) -> bool {
        self.report_only || self.passed
    }
}

fn sym(s: Symbol) -> FactoredRational {
    FactoredRational::from_poly(&Poly::var(s))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable report")
}

fn case(len: usize, mode: &'static str, parameters: Option<Value>, passed: bool, detail: Value) -> CaseResult {
    CaseResult {
        len,
        mode,
        parameters,
        passed,
        detail,
    }
}

fn rational_pairs(cfg: &SuiteConfig, len: usize) -> Result<Vec<(crate::BigRational, crate::BigRational)>> {
    // one stream per size so that results do not depend on the range
    let mut s = ParamSampler::new(cfg.seed ^ ((len as u64) << 32));
    (0..cfg.samples.max(1)).map(|_| s.generic_pair(len)).collect()
}

fn pair_value(a: &crate::BigRational, b: &crate::BigRational) -> Value {
    json!({"alpha": a.to_string(), "beta": b.to_string()})
}

fn run_case(suite: Suite, cfg: &SuiteConfig, len: usize) -> Result<Vec<CaseResult>> {
    let mode = if cfg.symbolic { "symbolic" } else { "rational" };
    let mut out = Vec::new();
    match (suite, cfg.symbolic) {
        (Suite::Triangular, true) => {
            let p = if cfg.general {
                Params::<Poly>::symbolic_general(len)?
            } else {
                Params::<Poly>::symbolic_specialized(len)?
            };
            let c = verify_spectrum_symbolic(&p)?;
            out.push(case(len, mode, None, c.passed(), to_value(&c)));
        }
        (Suite::Triangular, false) => {
            if cfg.general {
                let mut s = ParamSampler::new(cfg.seed ^ ((len as u64) << 32));
                for _ in 0..cfg.samples.max(1) {
                    let p = s.general_params(len, 0.5)?;
                    let c = verify_spectrum(&p, false)?;
                    let params = json!({
                        "alpha": p.alpha().iter().map(|(b, v)| (b.to_string(), v.to_string())).collect::<std::collections::BTreeMap<_, _>>(),
                        "beta": p.betas().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    });
                    out.push(case(len, mode, Some(params), c.passed(), to_value(&c)));
                }
            } else {
                for (a, b) in rational_pairs(cfg, len)? {
                    let c = verify_spectrum(&Params::specialized(len, a.clone(), b.clone())?, false)?;
                    out.push(case(len, mode, Some(pair_value(&a, &b)), c.passed(), to_value(&c)));
                }
            }
        }
        (Suite::Charpoly, true) => {
            let p = charpoly_specialized(len)?;
            let by_class = charpoly_by_classification(len)? == p;
            let by_spectrum = charpoly_from_closed_form(len)? == p;
            let distinct = p.distinct_factors() == 2 * len;
            let detail = json!({
                "charpoly": p.to_string(),
                "classification_agrees": by_class,
                "closed_form_spectrum_agrees": by_spectrum,
                "distinct_factors": p.distinct_factors(),
            });
            out.push(case(len, mode, None, by_class && by_spectrum && distinct, detail));
        }
        (Suite::Charpoly, false) => {
            for (a, b) in rational_pairs(cfg, len)? {
                let ok = verify_charpoly_at(len, &a, &b)?;
                let detail = json!({"interpolated_equals_closed_form": ok});
                out.push(case(len, mode, Some(pair_value(&a, &b)), ok, detail));
            }
        }
        (Suite::Ratio, _) => {
            let q = charpoly_specialized(len + 1)?.checked_div(&charpoly_specialized(len)?);
            let r = charpoly_ratio(len)?;
            let ok = q.as_ref() == Some(&r);
            let detail = json!({
                "ratio": r.to_string(),
                "quotient": q.map(|q| q.to_string()),
                "degree": r.degree(),
            });
            out.push(case(len, "symbolic", None, ok, detail));
        }
        (Suite::Blockrec, true) => {
            let ok = check_block_recursion(len, &Poly::var(Symbol::Alpha), &Poly::var(Symbol::Beta))?;
            out.push(case(len, mode, None, ok, json!({"holds": ok})));
        }
        (Suite::Blockrec, false) => {
            for (a, b) in rational_pairs(cfg, len)? {
                let ok = check_block_recursion(len, &a, &b)?;
                out.push(case(len, mode, Some(pair_value(&a, &b)), ok, json!({"holds": ok})));
            }
        }
        (Suite::Btransform, true) => {
            let beta: Vec<Poly> = (1..=len).map(|j| Poly::var(Symbol::BetaAt(j as u8))).collect();
            let ok = verify_b_transform(&beta)?;
            out.push(case(len, mode, None, ok, json!({"holds": ok})));
        }
        (Suite::Btransform, false) => {
            let mut s = ParamSampler::new(cfg.seed ^ ((len as u64) << 32));
            for _ in 0..cfg.samples.max(1) {
                let beta = s.beta_vector(len);
                let ok = verify_b_transform(&beta)?;
                let params = json!({"beta": beta.iter().map(|v| v.to_string()).collect::<Vec<_>>()});
                out.push(case(len, mode, Some(params), ok, json!({"holds": ok})));
            }
        }
        (Suite::Partition, true) => {
            if cfg.general {
                let c = verify_partition_general(len)?;
                out.push(case(len, mode, None, c.passed(), to_value(&c)));
            } else {
                let c = verify_partition(len)?;
                out.push(case(len, mode, None, c.passed(), to_value(&c)));
            }
        }
        (Suite::Partition, false) | (Suite::Steady, false) => {
            let mut s = ParamSampler::new(cfg.seed ^ ((len as u64) << 32));
            for _ in 0..cfg.samples.max(1) {
                let p = s.general_params(len, 0.5)?;
                // on integer numerators; the eigen equation is homogeneous
                let (v, scale) = steady_state_scaled(&p)?;
                let sum: crate::BigRational = v.iter().sum();
                let eigen = check_eigen_equation(&p, &v)?;
                let normalized = sum == scale;
                let params = json!({
                    "alpha": p.alpha().iter().map(|(b, v)| (b.to_string(), v.to_string())).collect::<std::collections::BTreeMap<_, _>>(),
                    "beta": p.betas().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                });
                let ok = eigen && normalized;
                let detail = json!({"eigen_equation_holds": eigen, "sums_to_one": normalized});
                out.push(case(len, mode, Some(params), ok, detail));
            }
        }
        (Suite::Steady, true) => {
            let x = steady_state_symbolic(len)?;
            let p = Params::<Poly>::symbolic_specialized(len)?;
            let (nums, den) = crate::exact::common_denominator(&x);
            let kernel = check_eigen_equation(&p, &nums)?;
            let sum = x.iter().fold(<FactoredRational as crate::ExactScalar>::zero(), |acc, v| {
                crate::ExactScalar::add(&acc, v)
            });
            let sums = sum == <FactoredRational as crate::ExactScalar>::one();
            let detail = json!({
                "kernel": kernel,
                "sums_to_one": sums,
                "common_denominator": den.to_string(),
            });
            out.push(case(len, mode, None, kernel && sums, detail));
        }
        (Suite::Tma, true) => {
            let (a, b) = (sym(Symbol::Alpha), sym(Symbol::Beta));
            let t = verify_tma(len, &a, &b)?;
            let p = propagate_steady(len, &a, &b)?;
            let detail = json!({"tma": to_value(&t), "propagation": to_value(&p)});
            out.push(case(len, mode, None, t.passed() && p.passed(), detail));
        }
        (Suite::Tma, false) => {
            for (a, b) in rational_pairs(cfg, len)? {
                let t = verify_tma(len, &a, &b)?;
                let p = propagate_steady(len, &a, &b)?;
                let detail = json!({"tma": to_value(&t), "propagation": to_value(&p)});
                out.push(case(len, mode, Some(pair_value(&a, &b)), t.passed() && p.passed(), detail));
            }
        }
        (Suite::Multiplicity, _) => {
            for (a, b) in rational_pairs(cfg, len)? {
                let entries = geometric_multiplicities(len, &a, &b)?;
                // algebraic data must match the factored characteristic polynomial
                let expected = charpoly_specialized(len)?.substitute(&crate::operators::two_symbol_assignment(&a, &b));
                let alg_ok = entries.len() == 2 * len
                    && entries.iter().all(|e| {
                        let mu = crate::exact::parse_rational(&e.eigenvalue).expect("canonical rational");
                        expected.multiplicity(&crate::exact::LinearForm::constant(mu)) == e.alg_mult
                    });
                let detail = json!({
                    "distinct": entries.len(),
                    "algebraic_matches_charpoly": alg_ok,
                    "all_geometric_one": entries.iter().all(|e| e.geo_mult == Some(1)),
                    "entries": to_value(&entries),
                });
                out.push(case(len, mode, Some(pair_value(&a, &b)), alg_ok, detail));
            }
        }
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.lmin == 0 || cfg.lmin > cfg.lmax {
        return Err(Error::Invalid(format!("empty size range {}..={}", cfg.lmin, cfg.lmax)));
    }
    let (sym_cap, num_cap) = suite.caps(cfg.general);
    let symbolic = cfg.symbolic && suite != Suite::Multiplicity;
    let cap = if symbolic { sym_cap } else { num_cap };
    if cfg.lmax > cap {
        return Err(Error::Infeasible {
            what: format!("suite '{suite}' in {} mode", if symbolic { "symbolic" } else { "rational" }),
            len: cfg.lmax,
            max: cap,
        });
    }
    let min_len = if suite == Suite::Blockrec { cfg.lmin.max(2) } else { cfg.lmin };
    let sizes: Vec<usize> = (min_len..=cfg.lmax).collect();
    let cfg = SuiteConfig {
        symbolic,
        ..cfg.clone()
    };
    #[cfg(feature = "parallel")]
    let results: Vec<Result<Vec<CaseResult>>> = {
        use rayon::prelude::*;
        sizes.par_iter().map(|&l| run_case(suite, &cfg, l)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<Vec<CaseResult>>> = sizes.iter().map(|&l| run_case(suite, &cfg, l)).collect();
    let mut cases = Vec::new();
    for r in results {
        cases.extend(r?);
    }
    Ok(SuiteReport {
        suite,
        description: suite.description(),
        seed: cfg.seed,
        report_only: suite.report_only(),
        passed: cases.iter().all(|c| c.passed),
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("nope".parse::<Suite>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn small_runs() {
        let cfg = SuiteConfig {
            lmax: 3,
            ..Default::default()
        };
        for s in [Suite::Triangular, Suite::Charpoly, Suite::Ratio, Suite::Blockrec, Suite::Btransform, Suite::Steady] {
            assert!(run_suite(s, &cfg).unwrap().passed, "{s}");
        }
        let m = run_suite(Suite::Multiplicity, &cfg).unwrap();
        assert!(m.success());
    }

    #[test]
    fn symbolic_cap_is_enforced() {
        let cfg = SuiteConfig {
            lmax: 9,
            symbolic: true,
            ..Default::default()
        };
        assert!(matches!(run_suite(Suite::Triangular, &cfg), Err(Error::Infeasible { max: 4, .. })));
    }

    #[test]
    fn tma_first_size_passes() {
        let cfg = SuiteConfig {
            lmax: 1,
            symbolic: true,
            ..Default::default()
        };
        assert!(run_suite(Suite::Tma, &cfg).unwrap().passed);
    }
}
