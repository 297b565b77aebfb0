//! The annihilating polynomials `P_N = OR(z) · ∏ factors`.
//!
//! Each equation has a structured evaluator that walks the factor list and
//! reports which factor (if any) vanishes, and a compiled fan-in-2 circuit
//! over the `N` coefficient variables. The two are cross-checked in tests.

mod ff;
mod int;

pub use ff::{build_equation_ff, or_gadget_ff, EquationFF, VerdictFF};
pub use int::{
    build_equation_int, crt_witness, ell_for, or_gadget_int, proxy_eval, qr_eval, qr_root_count, qr_vanishes,
    EquationInt, VerdictInt,
};
