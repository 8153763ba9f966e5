use aap_web::{simulate, simulate_json, spectrum, spectrum_json, steady_state_json};
use serde_json::Value;

#[test]
fn spectrum_at_half_one() {
    let v: Value = serde_json::from_str(&spectrum_json(2, "1/2", "1").unwrap()).unwrap();
    let mults: Vec<_> = v["entries"].as_array().unwrap().iter().map(|e| (e["eigenvalue"].clone(), e["alg_mult"].clone())).collect();
    assert_eq!(mults, [(Value::from("0"), Value::from(1)), (Value::from("-2"), Value::from(3))]);
    assert_eq!(spectrum(2, "1/2", "1").unwrap(), spectrum_json(2, "1/2", "1").unwrap());
}

#[test]
fn one_site_steady_state() {
    let v: Value = serde_json::from_str(&steady_state_json(1, "1", "1").unwrap()).unwrap();
    assert_eq!(v["entries"][0]["probability"], "2/3");
    assert_eq!(v["entries"][1]["state"], "1");
}

#[test]
fn exact_inputs_reject_decimals() {
    let e = steady_state_json(2, "0.5", "1").unwrap_err();
    assert!(e.starts_with("alpha:"), "{e}");
}

#[test]
fn simulation_is_reproducible() {
    let a = simulate(3, "0.5", "1", 20000.0, 3.0).unwrap();
    assert_eq!(a, simulate_json(3, "1/2", "1", 20000, 3).unwrap());
    let v: Value = serde_json::from_str(&a).unwrap();
    assert!(v["tv_distance"].as_f64().unwrap() < 0.1);
}
