//! wasm-bindgen exports for the static demo page in `www/`. Each export
//! returns a JSON document; the `*_json` twins are plain Rust so they can
//! be tested natively.

use aap_core::exact::{parse_rational, parse_rational_or_decimal};
use aap_core::simulate::{simulate_against_exact, DEFAULT_BURN_IN};
use aap_core::spectrum::spectrum_report;
use aap_core::steady::{steady_entries, steady_state_specialized};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Keeps the page responsive; the dense and simulation paths get slow past these.
pub const MAX_LEN: usize = 10;
pub const MAX_EVENTS: u64 = 2_000_000;

fn check_len(len: usize) -> Result<(), String> {
    if len == 0 || len > MAX_LEN {
        return Err(format!("L must be between 1 and {MAX_LEN}"));
    }
    Ok(())
}

fn exact(name: &str, s: &str) -> Result<aap_core::BigRational, String> {
    parse_rational(s).map_err(|e| format!("{name}: {e}"))
}

pub fn spectrum_json(len: usize, alpha: &str, beta: &str) -> Result<String, String> {
    check_len(len)?;
    let r = spectrum_report(len, &exact("alpha", alpha)?, &exact("beta", beta)?, false).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

pub fn steady_state_json(len: usize, alpha: &str, beta: &str) -> Result<String, String> {
    check_len(len)?;
    let x = steady_state_specialized(len, &exact("alpha", alpha)?, &exact("beta", beta)?).map_err(|e| e.to_string())?;
    let doc = json!({
        "L": len,
        "parameters": {"alpha": alpha.trim(), "beta": beta.trim()},
        "entries": steady_entries(&x, len),
        "floats": x.iter().map(aap_core::simulate::to_f64).collect::<Vec<_>>(),
    });
    Ok(doc.to_string())
}

pub fn simulate_json(len: usize, alpha: &str, beta: &str, events: u64, seed: u64) -> Result<String, String> {
    check_len(len)?;
    if events == 0 || events > MAX_EVENTS {
        return Err(format!("events must be between 1 and {MAX_EVENTS}"));
    }
    let a = parse_rational_or_decimal(alpha).map_err(|e| format!("alpha: {e}"))?;
    let b = parse_rational_or_decimal(beta).map_err(|e| format!("beta: {e}"))?;
    let r = simulate_against_exact(len, &a, &b, events, seed, DEFAULT_BURN_IN).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn spectrum(len: usize, alpha: &str, beta: &str) -> Result<String, String> {
    spectrum_json(len, alpha, beta)
}

#[wasm_bindgen]
pub fn steady_state(len: usize, alpha: &str, beta: &str) -> Result<String, String> {
    steady_state_json(len, alpha, beta)
}

/// `seed` is a double on the JS side; values up to 2^53 round-trip.
#[wasm_bindgen]
pub fn simulate(len: usize, alpha: &str, beta: &str, events: f64, seed: f64) -> Result<String, String> {
    if !(events.is_finite() && seed.is_finite() && events >= 0.0 && seed >= 0.0) {
        return Err("events and seed must be non-negative numbers".into());
    }
    simulate_json(len, alpha, beta, events as u64, seed as u64)
}
