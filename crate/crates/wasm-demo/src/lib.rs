//! Browser bindings. Every export returns a JSON string so the page needs no
//! generated type glue beyond `wasm-bindgen`'s string passing.

use jordan_core::amplification::{conjugation, transpose, two_positivity_test};
use jordan_core::reconstruction::certify_jordan;
use jordan_core::spectral::{dyadic_expand, spectral_decompose};
use jordan_core::{random, Element, Field};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn error(e: impl std::fmt::Display) -> String {
    json!({ "error": e.to_string() }).to_string()
}

/// Spectral decomposition of `λ1 + v` in the spin factor `V_3`.
#[wasm_bindgen]
pub fn spin_spectrum(lambda: f64, v1: f64, v2: f64, v3: f64) -> String {
    let x = Element::spin(lambda, &[v1, v2, v3]);
    let d = spectral_decompose(&x);
    let pieces: Vec<_> = d
        .pairs()
        .iter()
        .map(|(l, p)| json!({ "eigenvalue": l, "projection": p.element() }))
        .collect();
    json!({
        "norm": x.norm(),
        "pieces": pieces,
        "reconstruction_error": d.reconstruct().distance(&x),
    })
    .to_string()
}

/// Greedy dyadic digits of `diag(a, b, c)` together with the error after
/// each digit and the `2^-n` bound it has to stay under.
#[wasm_bindgen]
pub fn dyadic_curve(a: f64, b: f64, c: f64, digits: usize) -> String {
    let x = Element::diag(&[a, b, c]);
    let e = match dyadic_expand(&x, digits.clamp(1, 52)) {
        Ok(e) => e,
        Err(err) => return error(err),
    };
    let mut partial = Element::zero(x.algebra());
    let mut rows = Vec::with_capacity(e.digits.len());
    for (n, p) in e.digits.iter().enumerate() {
        let step = 0.5f64.powi(n as i32 + 1);
        partial = &partial + &p.element().scale(step);
        let diag: Vec<f64> = (0..3)
            .map(|i| p.element().matrix().expect("matrix block")[(i, i)].re)
            .collect();
        rows.push(json!({
            "n": n + 1,
            "digit": diag,
            "error": (&x - &partial).norm(),
            "bound": step,
        }));
    }
    json!({ "digits": rows }).to_string()
}

/// Amplified witness test for a random unitary conjugation on `M_n`,
/// optionally composed with the transpose.
#[wasm_bindgen]
pub fn witness_test(n: usize, with_transpose: bool, seed: u64) -> String {
    let n = n.clamp(2, 4);
    let mut rng = random::rng(seed);
    let mut map = conjugation(&random::unitary(n, Field::Complex, &mut rng));
    if with_transpose {
        map = match map.compose(&transpose(n)) {
            Ok(m) => m,
            Err(e) => return error(e),
        };
    }
    let psi = match certify_jordan(&map) {
        Ok(p) => p,
        Err(_) => return error("map failed the Jordan audit"),
    };
    match two_positivity_test(&psi, 20, &mut rng) {
        Ok(r) => serde_json::to_string(&r).unwrap_or_else(error),
        Err(e) => error(e),
    }
}
