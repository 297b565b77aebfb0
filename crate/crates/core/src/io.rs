//! JSON file formats. Big integers and field elements are written as strings
//! so the same schema serves every carrier; writers go through
//! [`to_canonical_json`], which sorts keys.

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Carrier, Constant, FieldSpec, Integers, Ring};
use crate::circuit::{Circuit, CircuitRepr};
use crate::equation::{EquationFF, EquationInt};
use crate::error::{Error, Result};
use crate::hitting::{ClassParams, HittingSet, PolyClass};
use crate::poly::{CoeffVector, MonomialOrder};
use crate::vnp::DefinableSpec;

/// Pretty JSON with keys sorted at every level and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("artifact serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

fn check_carrier<R: Ring>(ring: &R, found: &Carrier) -> Result<()> {
    if ring.carrier() == *found {
        Ok(())
    } else {
        Err(Error::CarrierMismatch(format!("file is over {found:?}, expected {:?}", ring.carrier())))
    }
}

pub fn constant_to_value(c: &Constant) -> Value {
    match c {
        Constant::Int(v) => Value::String(v.to_string()),
        Constant::Digits(d) => Value::from(d.clone()),
    }
}

pub fn constant_from_value(v: &Value) -> Result<Constant> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map(Constant::Int)
            .map_err(|_| Error::Schema(format!("constant {s:?} is not a decimal integer"))),
        Value::Array(items) => items
            .iter()
            .map(|x| x.as_u64().and_then(|x| u32::try_from(x).ok()))
            .collect::<Option<Vec<u32>>>()
            .map(Constant::Digits)
            .ok_or_else(|| Error::Schema("digit array must hold small non-negative integers".into())),
        other => Err(Error::Schema(format!("unknown constant encoding {other}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRepr {
    pub exponents: Vec<u32>,
    pub value: String,
}

fn encode_entries<R: Ring>(ring: &R, v: &CoeffVector<R::Elem>) -> Vec<EntryRepr> {
    let order = v.order();
    v.entries().map(|(i, c)| EntryRepr { exponents: order.exponents(i), value: ring.encode(c) }).collect()
}

fn decode_entries<R: Ring>(ring: &R, order: MonomialOrder, entries: &[EntryRepr]) -> Result<CoeffVector<R::Elem>> {
    let pairs =
        entries.iter().map(|e| Ok((order.index(&e.exponents)?, ring.decode(&e.value)?))).collect::<Result<Vec<_>>>()?;
    let mut sorted: Vec<usize> = pairs.iter().map(|(i, _)| *i).collect();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Schema("repeated monomial in coefficient entries".into()));
    }
    CoeffVector::from_entries(ring, order, pairs)
}

/// `{n, d, carrier, entries: [{exponents, value}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffVectorFile {
    pub n: usize,
    pub d: u32,
    pub carrier: Carrier,
    pub entries: Vec<EntryRepr>,
}

impl CoeffVectorFile {
    pub fn new<R: Ring>(ring: &R, v: &CoeffVector<R::Elem>) -> Self {
        let order = v.order();
        CoeffVectorFile { n: order.n(), d: order.d(), carrier: ring.carrier(), entries: encode_entries(ring, v) }
    }

    pub fn order(&self) -> MonomialOrder {
        MonomialOrder::new(self.n, self.d)
    }

    pub fn decode<R: Ring>(&self, ring: &R) -> Result<CoeffVector<R::Elem>> {
        check_carrier(ring, &self.carrier)?;
        decode_entries(ring, self.order(), &self.entries)
    }
}

/// An enumerated class with its parameters; member 0 is the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFile {
    pub n: usize,
    pub d: u32,
    pub s: usize,
    pub m: usize,
    pub delta: bool,
    pub constants: Vec<Value>,
    pub carrier: Carrier,
    pub count: usize,
    pub members: Vec<Vec<EntryRepr>>,
}

impl ClassFile {
    pub fn new<R: Ring>(ring: &R, class: &PolyClass<R::Elem>) -> Self {
        let p = &class.params;
        ClassFile {
            n: p.n,
            d: p.d,
            s: p.s,
            m: p.m,
            delta: p.delta,
            constants: p.constants.iter().map(constant_to_value).collect(),
            carrier: class.carrier.clone(),
            count: class.members.len(),
            members: class.members.iter().map(|v| encode_entries(ring, v)).collect(),
        }
    }

    pub fn params(&self) -> Result<ClassParams> {
        let constants = self.constants.iter().map(constant_from_value).collect::<Result<Vec<_>>>()?;
        let mut p = ClassParams::new(self.n, self.d, self.s, constants);
        p.delta = self.delta;
        p.m = self.m;
        Ok(p)
    }

    pub fn decode<R: Ring>(&self, ring: &R) -> Result<PolyClass<R::Elem>> {
        check_carrier(ring, &self.carrier)?;
        if self.count != self.members.len() {
            return Err(Error::Schema(format!("count {} but {} members", self.count, self.members.len())));
        }
        let params = self.params()?;
        let order = params.order();
        let members = self.members.iter().map(|e| decode_entries(ring, order, e)).collect::<Result<Vec<_>>>()?;
        Ok(PolyClass { params, carrier: self.carrier.clone(), members })
    }
}

/// `{mode, field?, grid_bound?, n, d, points}`. Over a field, `field` is the
/// extension the points live in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingSetFile {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_bound: Option<u64>,
    pub n: usize,
    pub d: u32,
    pub points: Vec<Vec<String>>,
}

impl HittingSetFile {
    pub fn new<R: Ring>(hs: &HittingSet<R>) -> Self {
        let field = match hs.ring().carrier() {
            Carrier::Field(f) => Some(f),
            Carrier::Int => None,
        };
        let order = hs.order();
        HittingSetFile {
            mode: hs.mode().into(),
            field,
            grid_bound: hs.grid_bound(),
            n: order.n(),
            d: order.d(),
            points: hs.points().iter().map(|p| p.iter().map(|x| hs.ring().encode(x)).collect()).collect(),
        }
    }

    pub fn carrier(&self) -> Result<Carrier> {
        match (self.mode.as_str(), &self.field) {
            ("int", None) => Ok(Carrier::Int),
            ("ff", Some(f)) => Ok(Carrier::Field(f.clone())),
            (mode, _) => Err(Error::Schema(format!("mode {mode:?} does not match the field entry"))),
        }
    }

    pub fn decode<R: Ring>(&self, ring: R) -> Result<HittingSet<R>> {
        check_carrier(&ring, &self.carrier()?)?;
        let points = self
            .points
            .iter()
            .map(|p| p.iter().map(|x| ring.decode(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        HittingSet::new(ring, MonomialOrder::new(self.n, self.d), points, self.grid_bound)
    }

    pub fn decode_ff(&self) -> Result<HittingSet<FieldSpec>> {
        let f = self.field.clone().ok_or_else(|| Error::Schema("hitting set has no field".into()))?;
        self.decode(f)
    }

    pub fn decode_int(&self) -> Result<HittingSet<Integers>> {
        self.decode(Integers)
    }
}

/// A coefficient vector together with where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    /// `"kernel"` or `"siegel"`.
    pub source: String,
    /// Reference to the hitting set the witness vanishes on.
    pub hitting_set: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pigeonhole: Option<bool>,
    #[serde(flatten)]
    pub vector: CoeffVectorFile,
}

/// Summary of a built equation; the compiled circuit, when present, is a
/// separate file in the circuit schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationManifest {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<FieldSpec>,
    pub hitting_set: String,
    pub n: usize,
    pub d: u32,
    #[serde(rename = "N")]
    pub arity: usize,
    pub factor_count: usize,
    pub degree_bound: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse_degree_bound: Option<String>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m_bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub big_r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit_gates: Option<usize>,
}

impl EquationManifest {
    pub fn for_ff(eq: &EquationFF, hitting_set: &str) -> Self {
        let order = eq.order();
        EquationManifest {
            mode: "ff".into(),
            field: Some(eq.base().clone()),
            ext: Some(eq.ext().clone()),
            hitting_set: hitting_set.into(),
            n: order.n(),
            d: order.d(),
            arity: eq.arity(),
            factor_count: eq.factor_count(),
            degree_bound: eq.formal_degree().to_string(),
            coarse_degree_bound: Some(eq.coarse_degree_bound().to_string()),
            m_bound: None,
            ell: None,
            big_r: None,
            circuit: None,
            circuit_gates: None,
        }
    }

    pub fn for_int(eq: &EquationInt, hitting_set: &str) -> Self {
        let order = eq.order();
        EquationManifest {
            mode: "int".into(),
            field: None,
            ext: None,
            hitting_set: hitting_set.into(),
            n: order.n(),
            d: order.d(),
            arity: eq.arity(),
            factor_count: eq.factor_count(),
            degree_bound: eq.formal_degree().to_string(),
            coarse_degree_bound: None,
            m_bound: Some(eq.m_bound().to_string()),
            ell: Some(eq.ell()),
            big_r: Some(eq.big_r()),
            circuit: None,
            circuit_gates: None,
        }
    }
}

/// `{n, m, g}` with `g` in the circuit schema over `n + m` variables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DefinableSpecFile {
    pub n: usize,
    pub m: usize,
    pub g: CircuitRepr,
}

impl DefinableSpecFile {
    pub fn new(spec: &DefinableSpec) -> Self {
        DefinableSpecFile { n: spec.n, m: spec.m, g: CircuitRepr::from(&spec.g) }
    }

    pub fn decode(&self) -> Result<DefinableSpec> {
        DefinableSpec::new(Circuit::try_from(self.g.clone())?, self.n, self.m)
    }
}
