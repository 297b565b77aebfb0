//! Browser demo: small pipelines run end to end and reported as JSON.

use forge_core::algebra::{Constant, FieldSpec, Integers, Ring};
use forge_core::equation::{build_equation_ff, build_equation_int, crt_witness, VerdictInt};
use forge_core::hitting::{enumerate_class, ff_grid, greedy_hitting_set, int_grid, ClassParams};
use forge_core::kernel::{eval_matrix_ff, kernel_basis_ff, sample_kernel, siegel_search};
use forge_core::Budget;
use num_bigint::BigInt;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn js(e: impl ToString) -> JsError {
    JsError::new(&e.to_string())
}

/// Class over F_2, hitting set over GF(2^r), equation, and one kernel sample.
pub fn ff_demo_json(n: usize, d: u32, s: usize, seed: u64) -> Result<String, forge_core::Error> {
    let b = Budget::default();
    let base = FieldSpec::prime(2)?;
    let mut r = 1;
    while 1u64 << r < u64::from(d * d) {
        r += 1;
    }
    let k = FieldSpec::new_bounded(2, r, b.field_size)?;
    let class = enumerate_class(&base, &ClassParams::new(n, d, s, vec![Constant::int(0), Constant::int(1)]), &b)?;
    let hs = greedy_hitting_set(&k, &class, &ff_grid(&k, n, &b)?, None)?;
    let basis = kernel_basis_ff(&eval_matrix_ff(&hs, &b)?);
    let witness = sample_kernel(&base, &basis, seed)?;
    let eq = build_equation_ff(&base, hs)?;
    let mut useful = true;
    for v in &class.members {
        useful &= eq.eval(v)?.0 == base.zero();
    }
    Ok(json!({
        "members": class.len(),
        "ext_degree": r,
        "hitting_set": eq.hitting_set().len(),
        "N": eq.arity(),
        "kernel_dim": basis.len(),
        "degree_bound": eq.formal_degree(),
        "useful": useful,
        "witness_value": eq.eval(&witness)?.0.packed(),
    })
    .to_string())
}

/// Coefficients in {-1, 0, 1}, grid [bound]^n, and a Siegel witness.
pub fn int_demo_json(n: usize, d: u32, s: usize, bound: u64) -> Result<String, forge_core::Error> {
    let b = Budget::default();
    let mut params = ClassParams::new(n, d, s, vec![Constant::int(0), Constant::int(1), Constant::int(-1)]);
    params.delta = true;
    let class = enumerate_class(&Integers, &params, &b)?;
    let hs = greedy_hitting_set(&Integers, &class, &int_grid(bound, n, &b)?, Some(bound))?;
    let witness = siegel_search(&hs, &b)?;
    let eq = build_equation_int(hs, &b)?;
    let mut useful = true;
    for v in &class.members {
        useful &= eq.verdict(v)? != VerdictInt::Nonzero;
    }
    Ok(json!({
        "members": class.len(),
        "hitting_set": eq.hitting_set().len(),
        "N": eq.arity(),
        "M": eq.m_bound().to_string(),
        "ell": eq.ell(),
        "R": eq.big_r(),
        "useful": useful,
        "witness_nonzero": eq.verdict(&witness.h)? == VerdictInt::Nonzero,
        "pigeonhole": witness.pigeonhole,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn ff_demo(n: usize, d: u32, s: usize, seed: u32) -> Result<String, JsError> {
    ff_demo_json(n, d, s, seed.into()).map_err(js)
}

#[wasm_bindgen]
pub fn int_demo(n: usize, d: u32, s: usize, bound: u32) -> Result<String, JsError> {
    int_demo_json(n, d, s, bound.into()).map_err(js)
}

/// Least `r` in `2..=max(l², 2)` not dividing `value`, where `l` is the bit
/// length of `m`.
#[wasm_bindgen]
pub fn crt(value: &str, m: &str) -> Result<u32, JsError> {
    let value: BigInt = value.trim().parse().map_err(js)?;
    let m: BigInt = m.trim().parse().map_err(js)?;
    let r = crt_witness(&value, &m).map_err(js)?;
    u32::try_from(r).map_err(js)
}
