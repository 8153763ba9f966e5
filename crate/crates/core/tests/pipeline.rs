//! End-to-end checks across modules on small, hand-verifiable cases.

use aap_core::exact::{rat, ratio, FactoredRational, Poly, Symbol};
use aap_core::operators::{build_m_specialized, Params};
use aap_core::simulate::{simulate_against_exact, DEFAULT_BURN_IN};
use aap_core::spectrum::{charpoly_specialized, spectrum_report};
use aap_core::steady::{steady_state_specialized, steady_state_symbolic, verify_partition};
use aap_core::suite::{run_suite, Suite, SuiteConfig};
use aap_core::transfer::{build_t, verify_tma};
use aap_core::Error;

#[test]
fn spectrum_merges_coinciding_eigenvalues() {
    let r = spectrum_report(2, &ratio(1, 2), &rat(1), false).unwrap();
    let got: Vec<_> = r.entries.iter().map(|e| (e.eigenvalue.as_str(), e.alg_mult)).collect();
    assert_eq!(got, [("0", 1), ("-2", 3)]);
}

#[test]
fn geometric_multiplicities_at_generic_point() {
    let r = spectrum_report(3, &ratio(2, 7), &ratio(5, 3), true).unwrap();
    assert_eq!(r.entries.len(), 6);
    assert_eq!(r.entries.iter().map(|e| e.alg_mult).sum::<u32>(), 8);
    assert!(r.entries.iter().all(|e| e.geo_mult == Some(1)));
}

#[test]
fn charpoly_degree_and_zero_root() {
    for len in 1..=8 {
        let p = charpoly_specialized(len).unwrap();
        assert_eq!(p.degree(), 1 << len);
        assert_eq!(p.distinct_factors(), 2 * len);
    }
}

#[test]
fn one_site_steady_state() {
    let x = steady_state_specialized(1, &rat(1), &rat(1)).unwrap();
    assert_eq!(x, [ratio(2, 3), ratio(1, 3)]);
    let s = steady_state_symbolic(1).unwrap();
    assert_eq!(s[0].to_string(), "(a+b)/(2a+b)");
}

#[test]
fn symbolic_and_rational_steady_states_agree() {
    let at = aap_core::operators::two_symbol_assignment(&ratio(3, 5), &ratio(7, 2));
    let sym = steady_state_symbolic(3).unwrap();
    let num = steady_state_specialized(3, &ratio(3, 5), &ratio(7, 2)).unwrap();
    for (s, n) in sym.iter().zip(&num) {
        assert_eq!(&s.eval(&at).unwrap(), n);
    }
}

#[test]
fn partition_function_at_four_sites() {
    let c = verify_partition(4).unwrap();
    assert!(c.passed());
    assert_eq!(c.lcm.to_string(), "2^3*(1+2a)^3*(1+b)^3*(2a+b)");
}

#[test]
fn simulator_two_thirds() {
    let r = simulate_against_exact(1, &rat(1), &rat(1), 100_000, 7, DEFAULT_BURN_IN).unwrap();
    assert!(r.tv_distance < 0.01);
}

#[test]
fn transfer_first_size_intertwines_symbolically() {
    let a = FactoredRational::from_poly(&Poly::var(Symbol::Alpha));
    let b = FactoredRational::from_poly(&Poly::var(Symbol::Beta));
    assert!(verify_tma(1, &a, &b).unwrap().passed());
    let t = build_t(3, &ratio(1, 3), &rat(2)).unwrap();
    assert_eq!((t.rows(), t.cols()), (16, 8));
}

#[test]
fn printed_transfer_recursion_discrepancy_is_reported() {
    let a = FactoredRational::from_poly(&Poly::var(Symbol::Alpha));
    let b = FactoredRational::from_poly(&Poly::var(Symbol::Beta));
    let c = verify_tma(2, &a, &b).unwrap();
    assert!(!c.intertwines);
    assert_eq!(c.first_difference, Some((0, 0)));
    assert_eq!(c.lhs_entry.as_deref(), Some("-a+2a^2+a^2*b"));
    assert_eq!(c.rhs_entry.as_deref(), Some("-a+2a^2-a*b+a^2*b"));
}

#[test]
fn resonance_is_an_error() {
    // 2a + b = 0 kills the first pivot
    let e = steady_state_specialized(1, &rat(1), &rat(-2)).unwrap_err();
    assert!(matches!(e, Error::Resonance { .. }));
}

#[test]
fn dense_cap() {
    assert!(matches!(build_m_specialized(13, &rat(1), &rat(1)), Err(Error::DenseCap { .. })));
    assert!(Params::specialized(3, rat(1), rat(1)).is_ok());
}

#[test]
fn suite_reports_are_deterministic_and_serializable() {
    let cfg = SuiteConfig {
        lmax: 4,
        ..Default::default()
    };
    let a = serde_json::to_string(&run_suite(Suite::Triangular, &cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_suite(Suite::Triangular, &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"suite\":\"triangular\""));
}
