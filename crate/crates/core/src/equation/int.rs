//! Equation over the integers for coefficient vectors in {-1, 0, 1}:
//!
//! `P_N(z) = OR(z) · ∏_{a ∈ H} ∏_{r=2}^{ℓ²} Q_r(<z, ẽval_r(a)>)`
//!
//! where `ẽval_r(a)_m = m(a) mod r`, `Q_r(x) = ∏ (x - i)` over `i ∈ [-R, R]`
//! not divisible by `r`, `OR(z) = 1 - ∏ (1 - z_m)`, `M = N B^d`,
//! `ℓ = ⌈log2(M + 1)⌉` and `R = N ℓ²`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{Constant, Integers};
use crate::budget::{self, Budget};
use crate::circuit::{Builder, Circuit, Gate};
use crate::error::{Error, Result};
use crate::hitting::HittingSet;
use crate::poly::{monomial_eval, CoeffVector, MonomialOrder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictInt {
    Or,
    /// `Q_r` vanishes on the proxy inner product at the `point`-th point.
    Factor {
        point: usize,
        r: u64,
    },
    Nonzero,
}

/// `ℓ = ⌈log2(M + 1)⌉`, the bit length of `M`.
pub fn ell_for(m: &BigInt) -> u64 {
    m.bits()
}

/// `1 - ∏ (1 - z_m)`, defined on {-1, 0, 1}-vectors.
pub fn or_gadget_int(z: &CoeffVector<BigInt>) -> Result<BigInt> {
    if let Some(index) = z.first_non_delta() {
        return Err(Error::NotDelta { index });
    }
    let mut prod = BigInt::one();
    for (_, c) in z.entries() {
        prod *= BigInt::one() - c;
    }
    Ok(BigInt::one() - prod)
}

/// `(m(a) mod r)` for every monomial of the order.
pub fn proxy_eval(a: &[BigInt], r: u64, order: MonomialOrder) -> Vec<u64> {
    assert!(r >= 2);
    let modulus = BigInt::from(r);
    let residues: Vec<BigInt> = a.iter().map(|x| x.mod_floor(&modulus)).collect();
    order
        .monomials()
        .map(|e| {
            let mut acc = BigInt::one();
            for (x, &k) in residues.iter().zip(&e) {
                if k > 0 {
                    acc = (acc * x.modpow(&BigInt::from(k), &modulus)) % &modulus;
                }
            }
            acc.to_u64().unwrap()
        })
        .collect()
}

/// Whether `Q_r(x) = 0`, i.e. `x ∈ [-R, R]` and `r ∤ x`.
pub fn qr_vanishes(r: u64, x: &BigInt, big_r: u64) -> bool {
    x.abs() <= BigInt::from(big_r) && !x.is_multiple_of(&BigInt::from(r))
}

/// Number of linear factors of `Q_r`, the count of non-multiples of `r` in
/// `[-R, R]`.
pub fn qr_root_count(r: u64, big_r: u64) -> u64 {
    2 * big_r - 2 * (big_r / r)
}

/// Product of the values `x - i` in a balanced tree, so the big
/// multiplications happen between operands of similar size.
fn product_tree(mut vals: Vec<BigInt>) -> BigInt {
    if vals.iter().any(Zero::is_zero) {
        return BigInt::zero();
    }
    if vals.is_empty() {
        return BigInt::one();
    }
    while vals.len() > 1 {
        let mut next = Vec::with_capacity(vals.len().div_ceil(2));
        let mut it = vals.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a * b,
                None => a,
            });
        }
        vals = next;
    }
    vals.pop().unwrap()
}

/// `Q_r(x) = ∏_{i ∈ [-R, R], r ∤ i} (x - i)`, exactly.
pub fn qr_eval(r: u64, x: &BigInt, big_r: u64) -> BigInt {
    let br = big_r as i64;
    let r = r as i64;
    product_tree((-br..=br).filter(|i| i % r != 0).map(|i| x - i).collect())
}

/// Least `r ∈ [2, max(ℓ², 2)]` with `value mod r ≠ 0`.
pub fn crt_witness(value: &BigInt, m: &BigInt) -> Result<u64> {
    if value.is_zero() || value.abs() > *m {
        return Err(Error::Precondition(format!("need 0 < |value| <= M, got value = {value}, M = {m}")));
    }
    let ell = ell_for(m);
    let top = (ell * ell).max(2);
    (2..=top)
        .find(|&r| !value.is_multiple_of(&BigInt::from(r)))
        .ok_or_else(|| Error::Precondition(format!("no modulus up to {top} detects {value}")))
}

#[derive(Clone, Debug)]
pub struct EquationInt {
    hs: HittingSet<Integers>,
    grid_bound: u64,
    m_bound: BigInt,
    ell: u64,
    big_r: u64,
    /// `proxies[a][r - 2]` is `ẽval_r(a)`.
    proxies: Vec<Vec<Vec<u64>>>,
}

/// Builds the equation for a hitting set inside `[B]^n`.
pub fn build_equation_int(hs: HittingSet<Integers>, budget: &Budget) -> Result<EquationInt> {
    let grid_bound =
        hs.grid_bound().ok_or_else(|| Error::Precondition("integer hitting set has no grid bound B".into()))?;
    let b = BigInt::from(grid_bound);
    if let Some(p) = hs.points().iter().find(|p| p.iter().any(|x| *x < BigInt::one() || *x > b)) {
        return Err(Error::Precondition(format!("point {p:?} outside [1, {grid_bound}]^n")));
    }
    let order = hs.order();
    let n_coeffs = order.len() as u64;
    let m_bound = BigInt::from(n_coeffs) * b.pow(order.d());
    let ell = ell_for(&m_bound);
    let top = ell * ell;
    let big_r = n_coeffs.checked_mul(top).ok_or(Error::Budget {
        what: "Q_r range",
        needed: u128::MAX,
        limit: u64::MAX as u128,
    })?;
    budget::check("equation factors", hs.len() as u128 * top as u128, budget.equation_factors as u128)?;
    let proxies = hs.points().iter().map(|a| (2..=top).map(|r| proxy_eval(a, r, order)).collect()).collect();
    Ok(EquationInt { hs, grid_bound, m_bound, ell, big_r, proxies })
}

impl EquationInt {
    pub fn hitting_set(&self) -> &HittingSet<Integers> {
        &self.hs
    }

    pub fn order(&self) -> MonomialOrder {
        self.hs.order()
    }

    pub fn arity(&self) -> usize {
        self.order().len()
    }

    pub fn grid_bound(&self) -> u64 {
        self.grid_bound
    }

    /// `M = N B^d`.
    pub fn m_bound(&self) -> &BigInt {
        &self.m_bound
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// `R = N ℓ²`.
    pub fn big_r(&self) -> u64 {
        self.big_r
    }

    /// Moduli `2 ..= ℓ²`.
    pub fn moduli(&self) -> std::ops::RangeInclusive<u64> {
        2..=self.ell * self.ell
    }

    /// `|H| (ℓ² - 1)`.
    pub fn factor_count(&self) -> usize {
        self.hs.len() * self.moduli().count()
    }

    pub fn proxy(&self, point: usize, r: u64) -> &[u64] {
        &self.proxies[point][(r - 2) as usize]
    }

    /// Formal degree `N + |H| Σ_r #{i ∈ [-R, R] : r ∤ i}`.
    pub fn formal_degree(&self) -> BigInt {
        let per_point: u64 = self.moduli().map(|r| qr_root_count(r, self.big_r)).sum();
        BigInt::from(self.arity()) + BigInt::from(self.hs.len()) * per_point
    }

    fn check_input(&self, z: &CoeffVector<BigInt>) -> Result<()> {
        self.order().ensure_same(&z.order())?;
        match z.first_non_delta() {
            Some(index) => Err(Error::NotDelta { index }),
            None => Ok(()),
        }
    }

    /// `<z, ẽval_r(a)>` for the `point`-th point.
    pub fn proxy_product(&self, point: usize, r: u64, z: &CoeffVector<BigInt>) -> BigInt {
        let proxy = self.proxy(point, r);
        let mut acc = BigInt::zero();
        for (m, c) in z.entries() {
            acc += c * proxy[m];
        }
        acc
    }

    /// Zero test following the case analysis: `OR(z) = 0` or some `Q_r`
    /// factor has a root at its proxy inner product.
    pub fn verdict(&self, z: &CoeffVector<BigInt>) -> Result<VerdictInt> {
        self.check_input(z)?;
        if z.is_zero() {
            return Ok(VerdictInt::Or);
        }
        for a in 0..self.hs.len() {
            for r in self.moduli() {
                if qr_vanishes(r, &self.proxy_product(a, r, z), self.big_r) {
                    return Ok(VerdictInt::Factor { point: a, r });
                }
            }
        }
        Ok(VerdictInt::Nonzero)
    }

    /// The literal value of `P_N(z)`: every `Q_r` is multiplied out and the
    /// product stops early once a factor is zero.
    pub fn eval_exact(&self, z: &CoeffVector<BigInt>, budget: &Budget) -> Result<BigInt> {
        self.check_input(z)?;
        let total = self.formal_degree();
        budget::check("equation factors", total.to_u128().unwrap_or(u128::MAX), budget.equation_factors as u128)?;
        let or = or_gadget_int(z)?;
        if or.is_zero() {
            return Ok(or);
        }
        let mut parts = vec![or];
        for a in 0..self.hs.len() {
            for r in self.moduli() {
                let q = qr_eval(r, &self.proxy_product(a, r, z), self.big_r);
                if q.is_zero() {
                    return Ok(q);
                }
                parts.push(q);
            }
        }
        Ok(product_tree(parts))
    }

    /// Fan-in-2 circuit over `z_0 .. z_{N-1}`; refuses when the number of
    /// linear factors exceeds `max_factors`.
    pub fn compile(&self, max_factors: u64) -> Result<Circuit> {
        let total = self.formal_degree().to_u64().unwrap_or(u64::MAX);
        budget::check("compiled linear factors", total as u128, max_factors as u128)?;
        let n = self.arity();
        let mut b = Builder::default();
        let z: Vec<usize> = (0..n).map(|m| b.push(Gate::Var(m))).collect();
        let one = b.constant(Constant::int(1));
        let minus_one = b.constant(Constant::int(-1));

        let or_terms = z
            .iter()
            .map(|&zm| {
                let neg = b.mul(minus_one, zm);
                b.add(one, neg)
            })
            .collect();
        let prod = b.tree(or_terms, true).unwrap_or(one);
        let neg = b.mul(minus_one, prod);
        let or = b.add(one, neg);

        let mut factors = vec![or];
        let br = self.big_r as i64;
        for a in 0..self.hs.len() {
            for r in self.moduli() {
                let proxy = self.proxy(a, r);
                let terms: Vec<usize> = proxy
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(m, &c)| {
                        if c == 1 {
                            z[m]
                        } else {
                            let k = b.constant(Constant::int(c as i64));
                            b.mul(k, z[m])
                        }
                    })
                    .collect();
                let lin = match b.tree(terms, false) {
                    Some(g) => g,
                    None => b.constant(Constant::int(0)),
                };
                let roots: Vec<usize> = (-br..=br)
                    .filter(|i| i % r as i64 != 0)
                    .map(|i| {
                        let c = b.constant(Constant::int(-i));
                        b.add(lin, c)
                    })
                    .collect();
                if let Some(q) = b.tree(roots, true) {
                    factors.push(q);
                }
            }
        }
        let out = b.tree(factors, true).unwrap();
        b.finish(n, out)
    }

    /// `|f(a)|` never exceeds `M` and no proxy product exceeds `R` in absolute
    /// value; returns the first member index violating either.
    pub fn check_bounds(&self, members: &[CoeffVector<BigInt>]) -> Option<usize> {
        let r_bound = BigInt::from(self.big_r);
        members.iter().position(|z| {
            (0..self.hs.len()).any(|a| {
                self.hs.value(a, z).abs() > self.m_bound
                    || self.moduli().any(|r| self.proxy_product(a, r, z).abs() > r_bound)
            })
        })
    }
}

/// `m(a)` as an exact integer; shared with tests of the proxy congruence.
#[allow(dead_code)]
pub(crate) fn exact_monomial(e: &[u32], a: &[BigInt]) -> BigInt {
    monomial_eval(&Integers, e, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hitting::{default_constants, enumerate_class, greedy_hitting_set, int_grid, ClassParams};
    use crate::poly::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn dense(order: MonomialOrder, v: &[i64]) -> CoeffVector<BigInt> {
        CoeffVector::from_dense(&Integers, order, &ints(v))
    }

    #[test]
    fn or_examples() {
        let o = MonomialOrder::new(1, 2);
        assert_eq!(or_gadget_int(&dense(o, &[0, 0, 0])).unwrap(), BigInt::zero());
        assert_eq!(or_gadget_int(&dense(o, &[0, 1, 0])).unwrap(), BigInt::one());
        assert_eq!(or_gadget_int(&dense(o, &[-1, 0, -1])).unwrap(), BigInt::from(-3));
        assert_eq!(or_gadget_int(&dense(o, &[2, 0, 0])), Err(Error::NotDelta { index: 0 }));
    }

    #[test]
    fn or_is_zero_only_at_zero() {
        let o = MonomialOrder::new(1, 2);
        for code in 0..27 {
            let v: Vec<i64> = (0..3).map(|k| (code / 3i64.pow(k)) % 3 - 1).collect();
            let z = dense(o, &v);
            assert_eq!(or_gadget_int(&z).unwrap().is_zero(), z.is_zero());
        }
    }

    #[test]
    fn proxy_examples() {
        assert_eq!(proxy_eval(&ints(&[1, 1]), 7, MonomialOrder::new(2, 2)), vec![1; 6]);
        assert_eq!(proxy_eval(&ints(&[2]), 3, MonomialOrder::new(1, 3)), vec![1, 2, 1, 2]);
    }

    #[test]
    fn proxy_congruence() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let order = MonomialOrder::new(2, 3);
        for _ in 0..100 {
            let coeffs: Vec<i64> = (0..order.len()).map(|_| rng.gen_range(-1..=1)).collect();
            let z = dense(order, &coeffs);
            let a = ints(&[rng.gen_range(1..50), rng.gen_range(1..50)]);
            let r = rng.gen_range(2..40u64);
            let proxy = proxy_eval(&a, r, order);
            let inner: BigInt = z.entries().map(|(m, c)| c * proxy[m]).sum();
            let direct: BigInt = z.entries().map(|(m, c)| c * exact_monomial(&order.exponents(m), &a)).sum();
            assert_eq!(inner.mod_floor(&BigInt::from(r)), direct.mod_floor(&BigInt::from(r)));
        }
    }

    #[test]
    fn qr_examples() {
        assert_eq!(qr_eval(2, &BigInt::from(1), 2), BigInt::zero());
        assert_eq!(qr_eval(2, &BigInt::from(0), 2), BigInt::from(-1));
        assert_ne!(qr_eval(3, &BigInt::from(6), 3), BigInt::zero());
        assert_eq!(qr_root_count(2, 2), 2);
        assert_eq!(qr_root_count(3, 3), 4);
        for r in 2..7 {
            for x in -12..=12 {
                let x = BigInt::from(x);
                assert_eq!(qr_eval(r, &x, 5).is_zero(), qr_vanishes(r, &x, 5));
            }
        }
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_witness(&BigInt::one(), &BigInt::from(1)).unwrap(), 2);
        assert_eq!(crt_witness(&BigInt::from(6), &BigInt::from(10)).unwrap(), 4);
        assert!(crt_witness(&BigInt::zero(), &BigInt::from(10)).is_err());
        assert!(crt_witness(&BigInt::from(11), &BigInt::from(10)).is_err());
        // every value up to M is detected below ℓ²
        let m = BigInt::from(5000);
        for v in 1..=5000 {
            let r = crt_witness(&BigInt::from(-v), &m).unwrap();
            assert!(r <= ell_for(&m).pow(2));
            assert_ne!(v % r as i64, 0);
        }
    }

    #[test]
    fn parameter_arithmetic() {
        // (N, B, d) = (3, 4, 2): n = 2, d = 1 gives N = 3.
        let order = MonomialOrder::new(2, 1);
        assert_eq!(order.len(), 3);
        let hs = HittingSet::new(Integers, MonomialOrder::new(2, 2), vec![], Some(4)).unwrap();
        let eq = build_equation_int(hs, &Budget::default()).unwrap();
        assert_eq!(eq.arity(), 6);
        let m = BigInt::from(3) * BigInt::from(4).pow(2);
        assert_eq!(m, BigInt::from(48));
        assert_eq!(ell_for(&m), 6);
        assert_eq!(3 * ell_for(&m).pow(2), 108);
    }

    #[test]
    fn empty_hitting_set_is_or() {
        let o = MonomialOrder::new(1, 1);
        let hs = HittingSet::new(Integers, o, vec![], Some(4)).unwrap();
        let eq = build_equation_int(hs, &Budget::default()).unwrap();
        assert_eq!(eq.factor_count(), 0);
        let z = dense(o, &[-1, -1]);
        assert_eq!(eq.eval_exact(&z, &Budget::default()).unwrap(), BigInt::from(-3));
        assert_eq!(eq.verdict(&z).unwrap(), VerdictInt::Nonzero);
        assert_eq!(eq.verdict(&dense(o, &[0, 0])).unwrap(), VerdictInt::Or);
    }

    #[test]
    fn single_factor_instance_unrolls() {
        // n = 1, d = 0: N = 1, M = 1, ℓ = 1, so the moduli are 2..=1 (none)
        // unless ℓ² >= 2; use d = 1, B = 1: M = 2, ℓ = 2, moduli 2..=4.
        let o = MonomialOrder::new(1, 1);
        let hs = HittingSet::new(Integers, o, vec![ints(&[1])], Some(1)).unwrap();
        let eq = build_equation_int(hs, &Budget::default()).unwrap();
        assert_eq!((eq.ell(), eq.big_r()), (2, 8));
        let z = dense(o, &[1, 1]);
        let mut want = or_gadget_int(&z).unwrap();
        for r in 2..=4 {
            want *= qr_eval(r, &eq.proxy_product(0, r, &z), 8);
        }
        assert_eq!(eq.eval_exact(&z, &Budget::default()).unwrap(), want);
    }

    #[test]
    fn useful_on_small_class_and_compiled_agrees() {
        let b = Budget::default();
        let mut params = ClassParams::new(1, 1, 2, default_constants(&Integers));
        params.delta = true;
        let class = enumerate_class(&Integers, &params, &b).unwrap();
        let grid = int_grid(4, 1, &b).unwrap();
        let hs = greedy_hitting_set(&Integers, &class, &grid, Some(4)).unwrap();
        let eq = build_equation_int(hs, &b).unwrap();
        assert_eq!(eq.check_bounds(&class.members), None);
        for z in &class.members {
            assert_ne!(eq.verdict(z).unwrap(), VerdictInt::Nonzero);
            assert!(eq.eval_exact(z, &b).unwrap().is_zero());
        }
        let circuit = eq.compile(1 << 20).unwrap();
        assert_eq!(BigInt::from(circuit.degree_bound()), eq.formal_degree());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let v: Vec<i64> = (0..eq.arity()).map(|_| rng.gen_range(-1..=1)).collect();
            let z = dense(eq.order(), &v);
            let compiled = circuit.eval(&Integers, &ints(&v)).unwrap();
            assert_eq!(compiled, eq.eval_exact(&z, &b).unwrap());
            assert_eq!(compiled.is_zero(), eq.verdict(&z).unwrap() != VerdictInt::Nonzero);
        }
        // x - 1 vanishes at 1 only if 1 is the only point
        let witness = CoeffVector::from_poly(
            &Poly::from_terms(&Integers, 1, [(vec![1], BigInt::one()), (vec![0], BigInt::from(-1))]),
            eq.order(),
        )
        .unwrap();
        let _ = eq.verdict(&witness).unwrap();
    }
}
