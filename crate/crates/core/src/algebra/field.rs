//! Prime fields and their small extensions `F_{p^r} = F_p[t] / (modulus)`.
//!
//! Elements are stored packed as the integer `sum_i c_i p^i` of their
//! coordinates in the polynomial basis `1, t, ..., t^{r-1}`, which is also the
//! canonical representation. The coordinate map of an element is its digit
//! vector, so the projections onto the base field are digit read-offs.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::ring::{Carrier, Constant, Ring};
use super::{is_prime, prime_factors};
use crate::error::{Error, Result};

/// Fields up to this size get exp/log tables for multiplication.
const TABLE_LIMIT: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    /// Packed value `sum_i c_i p^i`.
    pub fn packed(self) -> u32 {
        self.0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Checked operations on field elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add(FieldElem),
    Mul(FieldElem),
    Neg,
    Inv,
    Pow(i64),
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRepr", into = "FieldSpecRepr")]
pub struct FieldSpec {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Arc<Tables>>,
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    p: u32,
    r: u32,
    /// Ascending coefficients, length `r + 1`, last entry 1.
    modulus: Vec<u32>,
}

impl TryFrom<FieldSpecRepr> for FieldSpec {
    type Error = Error;
    fn try_from(repr: FieldSpecRepr) -> Result<Self> {
        let f = FieldSpec::with_modulus(repr.p, repr.modulus)?;
        if f.r != repr.r {
            return Err(Error::BadModulus(repr.r));
        }
        Ok(f)
    }
}

impl From<FieldSpec> for FieldSpecRepr {
    fn from(f: FieldSpec) -> Self {
        FieldSpecRepr { p: f.p, r: f.r, modulus: f.modulus }
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)?;
        if self.r > 1 {
            write!(f, "[{}]", format_poly(&self.modulus))?;
        }
        Ok(())
    }
}

fn format_poly(c: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &v) in c.iter().enumerate().rev() {
        if v == 0 {
            continue;
        }
        let coef = if v == 1 && i > 0 { String::new() } else { v.to_string() };
        terms.push(match i {
            0 => coef,
            1 => format!("{coef}t"),
            _ => format!("{coef}t^{i}"),
        });
    }
    terms.join("+")
}

impl FieldSpec {
    /// `F_{p^r}` with the lexicographically least monic irreducible modulus,
    /// coefficients compared from `t^{r-1}` down to `t^0`. Size bound `2^20`.
    pub fn new(p: u32, r: u32) -> Result<Self> {
        Self::new_bounded(p, r, 1 << 20)
    }

    pub fn new_bounded(p: u32, r: u32, bound: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if r == 0 {
            return Err(Error::BadModulus(0));
        }
        let q = (p as u64)
            .checked_pow(r)
            .filter(|&q| q <= bound && q <= u32::MAX as u64)
            .ok_or(Error::FieldTooLarge { p: p as u64, r, bound })?;
        // Candidates in increasing packed order of the lower r coefficients.
        for low in 0..q {
            let mut modulus = unpack(low as u32, p, r as usize);
            modulus.push(1);
            if is_irreducible(p, &modulus) {
                return Self::with_modulus(p, modulus);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// Field defined by an explicit monic irreducible modulus (ascending
    /// coefficients).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let r = modulus.len().saturating_sub(1) as u32;
        if r == 0 || modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) || !is_irreducible(p, &modulus) {
            return Err(Error::BadModulus(r));
        }
        let q = (p as u64).checked_pow(r).filter(|&q| q <= u32::MAX as u64).ok_or(Error::FieldTooLarge {
            p: p as u64,
            r,
            bound: u32::MAX as u64,
        })? as u32;
        let mut field = FieldSpec { p, r, q, modulus, tables: None };
        if q <= TABLE_LIMIT {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The base field `F_p` this field extends.
    pub fn base(&self) -> FieldSpec {
        FieldSpec::prime(self.p).expect("p is prime")
    }

    /// Whether `a` is a valid element of this field.
    pub fn contains(&self, a: FieldElem) -> bool {
        a.0 < self.q
    }

    pub fn elem(&self, digits: &[u32]) -> Result<FieldElem> {
        if digits.len() > self.r as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElem(pack(digits, self.p)))
    }

    pub fn from_packed(&self, v: u32) -> Result<FieldElem> {
        if v < self.q {
            Ok(FieldElem(v))
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Image of the integer `v` under `Z -> F_p -> F_q`.
    pub fn from_u64(&self, v: u64) -> FieldElem {
        FieldElem((v % self.p as u64) as u32)
    }

    /// The generator `t` of the polynomial basis (equal to `1` when `r = 1`).
    pub fn generator(&self) -> FieldElem {
        if self.r == 1 {
            FieldElem(1)
        } else {
            FieldElem(self.p)
        }
    }

    /// Coordinate vector `Phi(a)` in the basis `1, t, ..., t^{r-1}`.
    pub fn phi(&self, a: FieldElem) -> Vec<u32> {
        unpack(a.0, self.p, self.r as usize)
    }

    /// `Phi_i(a)`, the `i`-th coordinate (1-based), as a base-field value.
    pub fn phi_project(&self, a: FieldElem, i: usize) -> Result<u32> {
        if i == 0 || i > self.r as usize {
            return Err(Error::ProjectionIndex { index: i, r: self.r });
        }
        Ok((a.0 / self.p.pow(i as u32 - 1)) % self.p)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(0..self.q))
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(1..self.q))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.r == 1 {
            return FieldElem((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        match &self.tables {
            Some(t) => FieldElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_schoolbook(a, b),
        }
    }

    /// Polynomial-basis multiplication followed by reduction by the modulus.
    pub(crate) fn mul_schoolbook(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.p as u64;
        let r = self.r as usize;
        let x = unpack(a.0, self.p, r);
        let y = unpack(b.0, self.p, r);
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        // t^r = -(m_0 + m_1 t + ... + m_{r-1} t^{r-1})
        for k in (r..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &m) in self.modulus[..r].iter().enumerate() {
                prod[k - r + j] = (prod[k - r + j] + (p - c) * m as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..r].iter().map(|&c| c as u32).collect();
        FieldElem(pack(&digits, self.p))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::InverseOfZero);
        }
        Ok(match &self.tables {
            Some(t) => FieldElem(t.exp[((self.q - 1) - t.log[a.0 as usize]) as usize]),
            None => self.pow(a, self.q as u64 - 2),
        })
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem(if self.q > 1 { 1 } else { 0 });
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// Checked arithmetic: operands must belong to this field.
    pub fn apply(&self, a: FieldElem, op: FieldOp) -> Result<FieldElem> {
        let own = |x: FieldElem| if self.contains(x) { Ok(x) } else { Err(Error::FieldMismatch) };
        let a = own(a)?;
        match op {
            FieldOp::Add(b) => Ok(self.add(a, own(b)?)),
            FieldOp::Mul(b) => Ok(self.mul(a, own(b)?)),
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
            FieldOp::Pow(e) if e >= 0 => Ok(self.pow(a, e as u64)),
            FieldOp::Pow(e) => Ok(self.pow(self.inv(a)?, e.unsigned_abs())),
        }
    }

    fn build_tables(&self) -> Tables {
        let q = self.q;
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .map(FieldElem)
            .find(|&g| factors.iter().all(|&f| self.pow_schoolbook(g, order / f).0 != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut x = FieldElem(1);
        for i in 0..(q - 1) {
            exp[i as usize] = x.0;
            exp[(i + q - 1) as usize] = x.0;
            log[x.0 as usize] = i;
            x = self.mul_schoolbook(x, generator);
        }
        Tables { exp, log }
    }

    fn pow_schoolbook(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_schoolbook(acc, base);
            }
            e >>= 1;
            base = self.mul_schoolbook(base, base);
        }
        acc
    }
}

impl Ring for FieldSpec {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        FieldElem(0)
    }
    fn one(&self) -> FieldElem {
        FieldElem(1)
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldSpec::add(self, *a, *b)
    }
    fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldSpec::neg(self, *a)
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldSpec::mul(self, *a, *b)
    }
    fn is_zero(&self, a: &FieldElem) -> bool {
        a.0 == 0
    }
    fn from_bigint(&self, v: &BigInt) -> FieldElem {
        let m = v.mod_floor(&BigInt::from(self.p));
        FieldElem(m.to_u32().expect("residue below p"))
    }
    fn from_constant(&self, c: &Constant) -> Result<FieldElem> {
        match c {
            Constant::Int(v) => Ok(self.from_bigint(v)),
            Constant::Digits(d) if d.len() == 1 || d.len() == self.r as usize => {
                self.elem(d).map_err(|_| Error::CarrierMismatch(format!("digits {d:?} not in {self:?}")))
            }
            Constant::Digits(d) => {
                Err(Error::CarrierMismatch(format!("constant with {} digits in a degree-{} field", d.len(), self.r)))
            }
        }
    }
    fn to_constant(&self, a: &FieldElem) -> Constant {
        if self.r == 1 {
            Constant::Int(BigInt::from(a.0))
        } else {
            Constant::Digits(self.phi(*a))
        }
    }
    fn carrier(&self) -> Carrier {
        Carrier::Field(self.clone())
    }
    fn encode(&self, a: &FieldElem) -> String {
        if self.r == 1 {
            a.0.to_string()
        } else {
            self.phi(*a).iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        }
    }
    fn decode(&self, s: &str) -> Result<FieldElem> {
        let digits: Vec<u32> = s
            .split(',')
            .map(|d| d.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Schema(format!("bad field element {s:?}")))?;
        if self.r == 1 && digits.len() == 1 {
            return self.from_packed(digits[0]);
        }
        self.elem(&digits)
    }
    fn pow(&self, a: &FieldElem, e: u64) -> FieldElem {
        FieldSpec::pow(self, *a, e)
    }
}

pub(crate) fn pack(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

pub(crate) fn unpack(mut v: u32, p: u32, r: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(r);
    for _ in 0..r {
        out.push(v % p);
        v /= p;
    }
    out
}

/// Remainder of `a` modulo monic `m` over F_p (ascending coefficients).
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let p64 = p as u64;
    let mut rem: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    while rem.len() > dm {
        let lead = rem.pop().unwrap();
        if lead != 0 {
            let base = rem.len() - dm;
            for (j, &mj) in m[..dm].iter().enumerate() {
                rem[base + j] = (rem[base + j] + (p64 - lead) * mj as u64) % p64;
            }
        }
    }
    rem.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for low in 0..count {
            let mut g = unpack(low as u32, p, k);
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: a monic polynomial of degree r is reducible iff it
    /// equals a product of two monic polynomials of positive degree.
    fn reducible_by_products(p: u32, r: usize) -> std::collections::HashSet<Vec<u32>> {
        let mut out = std::collections::HashSet::new();
        for a_deg in 1..r {
            let b_deg = r - a_deg;
            for la in 0..p.pow(a_deg as u32) {
                for lb in 0..p.pow(b_deg as u32) {
                    let mut a = unpack(la, p, a_deg);
                    a.push(1);
                    let mut b = unpack(lb, p, b_deg);
                    b.push(1);
                    let mut c = vec![0u32; r + 1];
                    for (i, &x) in a.iter().enumerate() {
                        for (j, &y) in b.iter().enumerate() {
                            c[i + j] = (c[i + j] + x * y) % p;
                        }
                    }
                    out.insert(c);
                }
            }
        }
        out
    }

    fn lex_least_irreducible(p: u32, r: usize) -> Vec<u32> {
        let reducible = reducible_by_products(p, r);
        // Compare from the t^{r-1} coefficient downwards.
        let mut candidates: Vec<Vec<u32>> = (0..p.pow(r as u32))
            .map(|v| {
                let mut c = unpack(v, p, r);
                c.push(1);
                c
            })
            .filter(|c| !reducible.contains(c))
            .collect();
        candidates.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        candidates[0].clone()
    }

    #[test]
    fn make_examples() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        assert_eq!(f2.q(), 2);

        let f16 = FieldSpec::new(2, 4).unwrap();
        assert_eq!(f16.q(), 16);
        assert_eq!(f16.modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(f16.modulus(), lex_least_irreducible(2, 4).as_slice());

        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f9.q(), 9);
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert_eq!(f9.modulus(), lex_least_irreducible(3, 2).as_slice());
    }

    #[test]
    fn modulus_matches_product_oracle() {
        for (p, r) in [(2, 2), (2, 3), (2, 5), (2, 6), (3, 3), (5, 2), (5, 3), (7, 2)] {
            let f = FieldSpec::new(p, r).unwrap();
            assert_eq!(f.modulus(), lex_least_irreducible(p, r as usize).as_slice(), "p={p} r={r}");
        }
    }

    #[test]
    fn make_errors() {
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FieldSpec::new(2, 21), Err(Error::FieldTooLarge { .. })));
        assert!(FieldSpec::new(2, 20).is_ok());
        assert!(FieldSpec::with_modulus(2, vec![1, 0, 1]).is_err()); // (t+1)^2
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f2.add(FieldElem(1), FieldElem(1)), FieldElem(0));

        let f16 = FieldSpec::new(2, 4).unwrap();
        let t = f16.generator();
        let t3 = f16.elem(&[0, 0, 0, 1]).unwrap();
        assert_eq!(f16.mul(t, t3), f16.elem(&[1, 1]).unwrap());

        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f3.pow(FieldElem(2), 2), FieldElem(1));
        assert_eq!(f3.apply(FieldElem(2), FieldOp::Pow(-1)).unwrap(), FieldElem(2));
        assert_eq!(f3.apply(FieldElem(0), FieldOp::Inv), Err(Error::InverseOfZero));
        assert_eq!(f3.apply(FieldElem(7), FieldOp::Neg), Err(Error::FieldMismatch));
        assert_eq!(f3.apply(FieldElem(1), FieldOp::Add(FieldElem(3))), Err(Error::FieldMismatch));
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        for (p, r) in [(2, 4), (3, 2), (5, 2), (2, 8)] {
            let f = FieldSpec::new(p, r).unwrap();
            for a in f.elements() {
                for b in f.elements().step_by(if f.q() > 64 { 7 } else { 1 }) {
                    assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
                }
            }
        }
    }

    #[test]
    fn projections() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let t = f4.generator();
        assert_eq!(f4.phi_project(t, 1).unwrap(), 0);
        assert_eq!(f4.phi_project(t, 2).unwrap(), 1);
        for i in 1..=2 {
            assert_eq!(f4.phi_project(FieldElem::ZERO, i).unwrap(), 0);
        }
        assert!(matches!(f4.phi_project(t, 0), Err(Error::ProjectionIndex { .. })));
        assert!(matches!(f4.phi_project(t, 3), Err(Error::ProjectionIndex { .. })));

        let f27 = FieldSpec::new(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (a, b) = (f27.random(&mut rng), f27.random(&mut rng));
            for i in 1..=3 {
                let lhs = f27.phi_project(f27.add(a, b), i).unwrap();
                let rhs = (f27.phi_project(a, i).unwrap() + f27.phi_project(b, i).unwrap()) % 3;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn phi_is_injective() {
        for (p, r) in [(2, 1), (2, 4), (2, 8), (3, 5), (5, 3), (13, 2)] {
            let f = FieldSpec::new(p, r).unwrap();
            assert!(f.q() <= 256);
            let images: std::collections::HashSet<Vec<u32>> = f.elements().map(|a| f.phi(a)).collect();
            assert_eq!(images.len(), f.q() as usize);
        }
    }

    #[test]
    fn field_axioms_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, r) in [(2, 1), (2, 4), (3, 2), (7, 1), (2, 17), (3, 11)] {
            let f = FieldSpec::new(p, r).unwrap();
            let q = f.q() as u64;
            for _ in 0..1000 {
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
            for _ in 0..100 {
                let a = f.random_nonzero(&mut rng);
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem(1));
                assert_eq!(f.pow(a, q - 1), FieldElem(1));
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let f = FieldSpec::new(3, 2).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"p":3,"r":2,"modulus":[1,0,1]}"#);
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<FieldSpec>(r#"{"p":2,"r":2,"modulus":[1,0,1]}"#).is_err());
        assert_eq!(f.encode(&f.generator()), "0,1");
        assert_eq!(f.decode("0,1").unwrap(), f.generator());
    }
}
