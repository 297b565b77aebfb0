use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::field::FieldSpec;
use crate::error::{Error, Result};

/// A literal scalar appearing in a circuit or a file.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constant {
    /// An integer, embedded into any carrier (reduced mod p over a field).
    Int(BigInt),
    /// A field element given by its base-p digits in the polynomial basis.
    Digits(Vec<u32>),
}

impl Constant {
    pub fn int(v: i64) -> Self {
        Constant::Int(BigInt::from(v))
    }
}

/// The carrier a computation takes place in, as recorded in files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Carrier {
    Int,
    Field(FieldSpec),
}

/// Commutative ring with exact arithmetic. Implemented by the integers and by
/// every [`FieldSpec`].
pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn from_constant(&self, c: &Constant) -> Result<Self::Elem>;
    /// Inverse of `from_constant`, used when writing generated circuits.
    fn to_constant(&self, a: &Self::Elem) -> Constant;
    fn carrier(&self) -> Carrier;
    /// Text form used in coefficient files.
    fn encode(&self, a: &Self::Elem) -> String;
    fn decode(&self, s: &str) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    /// Square-and-multiply.
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// The ring of integers, with arbitrary-precision elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn from_constant(&self, c: &Constant) -> Result<BigInt> {
        match c {
            Constant::Int(v) => Ok(v.clone()),
            Constant::Digits(_) => Err(Error::CarrierMismatch("field-element constant in an integer circuit".into())),
        }
    }
    fn to_constant(&self, a: &BigInt) -> Constant {
        Constant::Int(a.clone())
    }
    fn carrier(&self) -> Carrier {
        Carrier::Int
    }
    fn encode(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn decode(&self, s: &str) -> Result<BigInt> {
        s.trim().parse().map_err(|_| Error::Schema(format!("bad integer {s:?}")))
    }
}
