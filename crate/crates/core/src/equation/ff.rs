//! Equation over a small finite field `F`, using a hitting set over an
//! extension `K`:
//!
//! `P_N(z) = OR(z) · ∏_{a ∈ H} ∏_{i=1}^{r} (1 - (Σ_m z_m Φ_i(m(a)))^(|F|-1))`
//! with `OR(z) = 1 - ∏_m (1 - z_m^(|F|-1))`.

use crate::algebra::{Constant, FieldElem, FieldSpec, Ring};
use crate::circuit::{Builder, Circuit, Gate};
use crate::error::{Error, Result};
use crate::hitting::HittingSet;
use crate::poly::{CoeffVector, MonomialOrder};

/// Why the equation does or does not vanish at an input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictFF {
    /// `z = 0`, so the OR gadget is zero.
    Or,
    /// `Φ_coord(g(a)) ≠ 0` for the `point`-th hitting-set point.
    Factor {
        point: usize,
        coord: usize,
    },
    Nonzero,
}

/// `1 - ∏ (1 - z_m^(|F|-1))`: 0 on the zero vector and 1 elsewhere.
pub fn or_gadget_ff(f: &FieldSpec, z: &CoeffVector<FieldElem>) -> FieldElem {
    let e = u64::from(f.q() - 1);
    let mut prod = f.one();
    for (_, c) in z.entries() {
        prod = f.mul(prod, f.sub(f.one(), f.pow(*c, e)));
    }
    f.sub(f.one(), prod)
}

#[derive(Clone, Debug)]
pub struct EquationFF {
    base: FieldSpec,
    hs: HittingSet<FieldSpec>,
    /// Row `(a, i)`: the vector `eval(a)^(i)` over `F`, dense in `N`.
    rows: Vec<(usize, usize, Vec<FieldElem>)>,
}

/// Builds the equation for the hitting set `hs` over `K`. The base field must
/// be the prime field of `K` and `K` must have at least `d²` elements.
pub fn build_equation_ff(base: &FieldSpec, hs: HittingSet<FieldSpec>) -> Result<EquationFF> {
    let ext = hs.ring().clone();
    if base.r() != 1 || base.p() != ext.p() {
        return Err(Error::FieldMismatch);
    }
    let d = u64::from(hs.order().d());
    if u64::from(ext.q()) < d * d {
        return Err(Error::ExtensionTooSmall { q: u64::from(ext.q()), needed: d * d });
    }
    let mut rows = Vec::with_capacity(hs.len() * ext.r() as usize);
    for a in 0..hs.len() {
        let ev = hs.eval_vector(a);
        for i in 1..=ext.r() as usize {
            let row =
                ev.iter().map(|&v| base.from_u64(u64::from(ext.phi_project(v, i).expect("index in range")))).collect();
            rows.push((a, i, row));
        }
    }
    Ok(EquationFF { base: base.clone(), hs, rows })
}

impl EquationFF {
    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn ext(&self) -> &FieldSpec {
        self.hs.ring()
    }

    pub fn hitting_set(&self) -> &HittingSet<FieldSpec> {
        &self.hs
    }

    pub fn order(&self) -> MonomialOrder {
        self.hs.order()
    }

    /// `N`.
    pub fn arity(&self) -> usize {
        self.order().len()
    }

    /// `|H| · r`.
    pub fn factor_count(&self) -> usize {
        self.rows.len()
    }

    /// Row `k` as `(point, coordinate, eval(a)^(i))`.
    pub fn factor(&self, k: usize) -> (usize, usize, &[FieldElem]) {
        let (a, i, row) = &self.rows[k];
        (*a, *i, row)
    }

    /// Formal degree `(|F| - 1)(N + |H| r)` of the product as written.
    pub fn formal_degree(&self) -> u64 {
        u64::from(self.base.q() - 1) * (self.arity() + self.factor_count()) as u64
    }

    /// The looser bound `|F| (N + |H| r)`.
    pub fn coarse_degree_bound(&self) -> u64 {
        u64::from(self.base.q()) * (self.arity() + self.factor_count()) as u64
    }

    fn check_input(&self, z: &CoeffVector<FieldElem>) -> Result<()> {
        self.order().ensure_same(&z.order())?;
        if z.entries().any(|(_, c)| !self.base.contains(*c)) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// `Σ_m z_m eval(a)^(i)_m` for factor `k`.
    pub fn linear_form(&self, k: usize, z: &CoeffVector<FieldElem>) -> FieldElem {
        z.dot(&self.base, &self.rows[k].2)
    }

    /// Exact value together with the first reason for vanishing.
    pub fn eval(&self, z: &CoeffVector<FieldElem>) -> Result<(FieldElem, VerdictFF)> {
        self.check_input(z)?;
        let f = &self.base;
        let e = u64::from(f.q() - 1);
        let mut value = or_gadget_ff(f, z);
        let mut verdict = if f.is_zero(&value) { Some(VerdictFF::Or) } else { None };
        for k in 0..self.rows.len() {
            let x = self.linear_form(k, z);
            let factor = f.sub(f.one(), f.pow(x, e));
            if verdict.is_none() && f.is_zero(&factor) {
                let (a, i, _) = &self.rows[k];
                verdict = Some(VerdictFF::Factor { point: *a, coord: *i });
            }
            value = f.mul(value, factor);
        }
        Ok((value, verdict.unwrap_or(VerdictFF::Nonzero)))
    }

    /// Fan-in-2 circuit over `z_0 .. z_{N-1}` computing `P_N`.
    pub fn compile(&self) -> Result<Circuit> {
        let f = &self.base;
        let e = u64::from(f.q() - 1);
        let n = self.arity();
        let mut b = Builder::default();
        let z: Vec<usize> = (0..n).map(|m| b.push(Gate::Var(m))).collect();
        let one = b.constant(Constant::int(1));
        let minus_one = b.constant(Constant::int(-1));
        let one_minus = |b: &mut Builder, g: usize| {
            let neg = b.mul(minus_one, g);
            b.add(one, neg)
        };

        let mut or_terms = Vec::with_capacity(n);
        for &zm in &z {
            let t = b.pow(zm, e);
            or_terms.push(one_minus(&mut b, t));
        }
        let prod = b.tree(or_terms, true).unwrap_or(one);
        let or = one_minus(&mut b, prod);

        let mut factors = vec![or];
        for (_, _, row) in &self.rows {
            let mut terms = Vec::new();
            for (m, c) in row.iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                terms.push(if *c == f.one() {
                    z[m]
                } else {
                    let k = b.constant(f.to_constant(c));
                    b.mul(k, z[m])
                });
            }
            let factor = match b.tree(terms, false) {
                Some(lin) => {
                    let p = b.pow(lin, e);
                    one_minus(&mut b, p)
                }
                // 1 - 0^(|F|-1) = 1
                None => one,
            };
            factors.push(factor);
        }
        let out = b.tree(factors, true).unwrap();
        b.finish(n, out)
    }
}
