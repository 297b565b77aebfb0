//! Algebraic circuits: a topologically ordered list of fan-in-2 gates over
//! variables and constants.

mod enumerate;
mod universal;

pub use enumerate::{circuit_count, enumerate_circuits, walk_expansions, CircuitStream, EnumerationParams};
pub use universal::{LayerGates, LayeredCircuit, UniversalCircuit};

pub use crate::algebra::Constant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::Ring;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Var(usize),
    Const(Constant),
    Add(usize, usize),
    Mul(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    out: usize,
}

impl Circuit {
    /// Validated constructor: every internal gate may only reference earlier
    /// gates and variables must be below `n`.
    pub fn new(n: usize, gates: Vec<Gate>, out: usize) -> Result<Self> {
        if gates.is_empty() {
            return Err(Error::Schema("circuit has no gates".into()));
        }
        for (idx, g) in gates.iter().enumerate() {
            match g {
                Gate::Var(i) if *i >= n => return Err(Error::Schema(format!("gate {idx}: variable {i} but n = {n}"))),
                Gate::Add(a, b) | Gate::Mul(a, b) => {
                    for &t in [a, b] {
                        if t >= idx {
                            return Err(Error::ForwardReference { gate: idx, target: t });
                        }
                    }
                }
                _ => {}
            }
        }
        if out >= gates.len() {
            return Err(Error::Schema(format!("output {out} outside {} gates", gates.len())));
        }
        Ok(Circuit { n, gates, out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.out
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn eval<R: Ring>(&self, ring: &R, point: &[R::Elem]) -> Result<R::Elem> {
        if point.len() != self.n {
            return Err(Error::Schema(format!("point of length {} for {} variables", point.len(), self.n)));
        }
        let mut vals: Vec<R::Elem> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g {
                Gate::Var(i) => point[*i].clone(),
                Gate::Const(c) => ring.from_constant(c)?,
                Gate::Add(a, b) => ring.add(&vals[*a], &vals[*b]),
                Gate::Mul(a, b) => ring.mul(&vals[*a], &vals[*b]),
            };
            vals.push(v);
        }
        Ok(vals.swap_remove(self.out))
    }

    /// Syntactic degree of the output: variables 1, constants 0, sums take the
    /// max and products the sum of their children's degrees.
    pub fn degree_bound(&self) -> u64 {
        self.degree_in(|_| true)
    }

    /// Syntactic degree counting only the variables selected by `counts`.
    pub fn degree_in(&self, counts: impl Fn(usize) -> bool) -> u64 {
        let mut deg: Vec<u64> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g {
                Gate::Var(i) => u64::from(counts(*i)),
                Gate::Const(_) => 0,
                Gate::Add(a, b) => deg[*a].max(deg[*b]),
                Gate::Mul(a, b) => deg[*a].saturating_add(deg[*b]),
            };
            deg.push(v);
        }
        deg[self.out]
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let repr: CircuitRepr = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Circuit::try_from(repr)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CircuitRepr::from(self)).expect("circuit serializes")
    }
}

/// File form: `{n, gates: [{op, arg | args, value?}], out}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircuitRepr {
    pub n: usize,
    pub gates: Vec<GateRepr>,
    pub out: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateRepr {
    pub op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arg: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub args: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
}

impl From<&Circuit> for CircuitRepr {
    fn from(c: &Circuit) -> Self {
        let gates = c
            .gates
            .iter()
            .map(|g| {
                let (op, arg, args, value) = match g {
                    Gate::Var(i) => ("var", Some(*i), None, None),
                    Gate::Const(Constant::Int(v)) => ("const", None, None, Some(Value::String(v.to_string()))),
                    Gate::Const(Constant::Digits(d)) => ("const", None, None, Some(Value::from(d.clone()))),
                    Gate::Add(a, b) => ("add", None, Some(vec![*a, *b]), None),
                    Gate::Mul(a, b) => ("mul", None, Some(vec![*a, *b]), None),
                };
                GateRepr { op: op.into(), arg, args, value }
            })
            .collect();
        CircuitRepr { n: c.n, gates, out: c.out }
    }
}

impl TryFrom<CircuitRepr> for Circuit {
    type Error = Error;

    fn try_from(repr: CircuitRepr) -> Result<Self> {
        let gates =
            repr.gates.into_iter().enumerate().map(|(idx, g)| parse_gate(idx, g)).collect::<Result<Vec<_>>>()?;
        Circuit::new(repr.n, gates, repr.out)
    }
}

fn parse_gate(idx: usize, g: GateRepr) -> Result<Gate> {
    let bad = |msg: &str| Error::Schema(format!("gate {idx}: {msg}"));
    match g.op.as_str() {
        "var" => g.arg.map(Gate::Var).ok_or_else(|| bad("var needs `arg`")),
        "const" => match g.value {
            Some(Value::String(s)) => s
                .trim()
                .parse::<BigInt>()
                .map(|v| Gate::Const(Constant::Int(v)))
                .map_err(|_| bad("constant is not a decimal integer")),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| v.as_u64().and_then(|x| u32::try_from(x).ok()))
                .collect::<Option<Vec<u32>>>()
                .map(|d| Gate::Const(Constant::Digits(d)))
                .ok_or_else(|| bad("digit array must hold small non-negative integers")),
            _ => Err(bad("unknown constant encoding")),
        },
        "add" | "mul" => {
            let args = g.args.ok_or_else(|| bad("needs `args`"))?;
            if args.len() != 2 {
                return Err(bad("internal gates have fan-in exactly 2"));
            }
            Ok(if g.op == "add" { Gate::Add(args[0], args[1]) } else { Gate::Mul(args[0], args[1]) })
        }
        other => Err(bad(&format!("unknown op {other:?}"))),
    }
}

/// Incremental builder for large generated circuits.
#[derive(Debug, Default)]
pub(crate) struct Builder {
    gates: Vec<Gate>,
}

impl Builder {
    pub fn push(&mut self, g: Gate) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub fn add(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Add(a, b))
    }

    pub fn mul(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Mul(a, b))
    }

    pub fn constant(&mut self, c: Constant) -> usize {
        self.push(Gate::Const(c))
    }

    /// Balanced fan-in-2 tree; `None` for an empty input list.
    pub fn tree(&mut self, mut items: Vec<usize>, mul: bool) -> Option<usize> {
        if items.is_empty() {
            return None;
        }
        while items.len() > 1 {
            let mut next = Vec::with_capacity(items.len().div_ceil(2));
            for pair in items.chunks(2) {
                next.push(match pair {
                    [a, b] => {
                        if mul {
                            self.mul(*a, *b)
                        } else {
                            self.add(*a, *b)
                        }
                    }
                    [a] => *a,
                    _ => unreachable!(),
                });
            }
            items = next;
        }
        Some(items[0])
    }

    /// `base^e` by square-and-multiply, `e >= 1`.
    pub fn pow(&mut self, base: usize, e: u64) -> usize {
        assert!(e >= 1);
        let mut acc: Option<usize> = None;
        let mut sq = base;
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => self.mul(a, sq),
                    None => sq,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = self.mul(sq, sq);
        }
        acc.unwrap()
    }

    pub fn finish(self, n: usize, out: usize) -> Result<Circuit> {
        Circuit::new(n, self.gates, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FieldSpec, Integers};

    #[test]
    fn parse_examples() {
        let c = Circuit::parse_json(r#"{"n":1,"gates":[{"op":"var","arg":0}],"out":0}"#).unwrap();
        assert_eq!(c.gates(), &[Gate::Var(0)]);
        let c = Circuit::parse_json(
            r#"{"n":2,"gates":[{"op":"var","arg":0},{"op":"var","arg":1},{"op":"mul","args":[0,1]}],"out":2}"#,
        )
        .unwrap();
        assert_eq!(c.eval(&Integers, &[BigInt::from(2), BigInt::from(3)]).unwrap(), BigInt::from(6));

        let err = Circuit::parse_json(
            r#"{"n":1,"gates":[{"op":"var","arg":0},{"op":"add","args":[2,2]},{"op":"var","arg":0}],"out":1}"#,
        );
        assert_eq!(err, Err(Error::ForwardReference { gate: 1, target: 2 }));
        let self_loop =
            Circuit::parse_json(r#"{"n":1,"gates":[{"op":"var","arg":0},{"op":"mul","args":[1,0]}],"out":1}"#);
        assert_eq!(self_loop, Err(Error::ForwardReference { gate: 1, target: 1 }));
    }

    #[test]
    fn parse_rejects_malformed() {
        for doc in [
            r#"{"n":1,"gates":[{"op":"var","arg":3}],"out":0}"#,
            r#"{"n":1,"gates":[{"op":"var","arg":0},{"op":"add","args":[0]}],"out":1}"#,
            r#"{"n":1,"gates":[{"op":"const","value":1.5}],"out":0}"#,
            r#"{"n":1,"gates":[{"op":"const","value":"x"}],"out":0}"#,
            r#"{"n":1,"gates":[{"op":"pow","args":[0,0]}],"out":0}"#,
            r#"{"n":1,"gates":[{"op":"var","arg":0}],"out":4}"#,
            r#"{"n":1,"gates":[],"out":0}"#,
        ] {
            assert!(Circuit::parse_json(doc).is_err(), "{doc}");
        }
    }

    #[test]
    fn json_round_trip() {
        let c = Circuit::new(
            2,
            vec![
                Gate::Var(1),
                Gate::Const(Constant::int(-7)),
                Gate::Const(Constant::Digits(vec![0, 1])),
                Gate::Add(0, 1),
                Gate::Mul(3, 2),
            ],
            4,
        )
        .unwrap();
        assert_eq!(Circuit::parse_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn eval_examples() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        let c = Circuit::new(1, vec![Gate::Var(0), Gate::Add(0, 0)], 1).unwrap();
        assert_eq!(c.eval(&f2, &[f2.one()]).unwrap(), f2.zero());

        // constant term at the origin
        let c = Circuit::new(2, vec![Gate::Var(0), Gate::Const(Constant::int(5)), Gate::Mul(0, 0), Gate::Add(2, 1)], 3)
            .unwrap();
        assert_eq!(c.eval(&Integers, &[BigInt::from(0), BigInt::from(0)]).unwrap(), BigInt::from(5));

        let digits = Circuit::new(1, vec![Gate::Const(Constant::Digits(vec![1]))], 0).unwrap();
        assert!(matches!(digits.eval(&Integers, &[BigInt::from(0)]), Err(Error::CarrierMismatch(_))));
        let f4 = FieldSpec::new(2, 2).unwrap();
        let wide = Circuit::new(1, vec![Gate::Const(Constant::Digits(vec![1, 0, 1]))], 0).unwrap();
        assert!(matches!(wide.eval(&f4, &[f4.zero()]), Err(Error::CarrierMismatch(_))));
    }

    #[test]
    fn degree_examples() {
        let var = Circuit::new(1, vec![Gate::Var(0)], 0).unwrap();
        assert_eq!(var.degree_bound(), 1);
        let sq = Circuit::new(1, vec![Gate::Var(0), Gate::Mul(0, 0)], 1).unwrap();
        assert_eq!(sq.degree_bound(), 2);
        let c = Circuit::new(1, vec![Gate::Var(0), Gate::Mul(0, 0), Gate::Const(Constant::int(3)), Gate::Add(1, 2)], 3)
            .unwrap();
        assert_eq!(c.degree_bound(), 2);
    }

    #[test]
    fn builder_pow_and_tree() {
        let mut b = Builder::default();
        let x = b.push(Gate::Var(0));
        let p = b.pow(x, 13);
        let c = b.finish(1, p).unwrap();
        assert_eq!(c.degree_bound(), 13);
        assert_eq!(c.eval(&Integers, &[BigInt::from(2)]).unwrap(), BigInt::from(8192));

        let mut b = Builder::default();
        let leaves: Vec<usize> = (0..5).map(|_| b.push(Gate::Var(0))).collect();
        let t = b.tree(leaves, false).unwrap();
        let c = b.finish(1, t).unwrap();
        assert_eq!(c.eval(&Integers, &[BigInt::from(3)]).unwrap(), BigInt::from(15));
    }
}
