//! Annihilating polynomials ("equations") for classes of small algebraic
//! circuits, over finite fields and over the integers with coefficients in
//! {-1, 0, 1}, together with the machinery needed to certify them: exhaustive
//! class enumeration, hitting sets, kernel and collision witnesses.

pub mod algebra;
pub mod budget;
pub mod circuit;
pub mod equation;
pub mod error;
pub mod hitting;
pub mod io;
pub mod kernel;
pub mod poly;
pub mod vnp;

pub use budget::Budget;
pub use error::{Error, Result};
