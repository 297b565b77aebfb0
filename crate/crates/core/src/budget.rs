//! Desk-scale guardrails shared by every exhaustive routine.
//!
//! Defaults can be overridden with the `FORGE_BUDGET` environment variable,
//! a comma separated list of `key=value` pairs (for example
//! `FORGE_BUDGET=enumeration=50000000,grid=4000000`). A bare integer sets the
//! enumeration budget.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of candidate circuits a single enumeration may visit.
    pub enumeration: u64,
    /// Maximum number of terms in any intermediate sparse polynomial.
    pub expansion_terms: usize,
    /// Maximum field size `q = p^r`.
    pub field_size: u64,
    /// Maximum number of columns of a dense evaluation matrix.
    pub dense_columns: usize,
    /// Maximum number of points in a hitting-set grid.
    pub grid_points: u64,
    /// Maximum number of Boolean summation variables.
    pub boolean_vars: u32,
    /// Maximum number of gates in a generated circuit.
    pub circuit_gates: u64,
    /// Maximum number of entries kept by the meet-in-the-middle tables.
    pub collision_entries: u64,
    /// Maximum number of linear factors in an integer equation.
    pub equation_factors: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration: 10_000_000,
            expansion_terms: 1_000_000,
            field_size: 1 << 20,
            dense_columns: 10_000,
            grid_points: 1 << 20,
            boolean_vars: 16,
            circuit_gates: 2_000_000,
            collision_entries: 1 << 24,
            equation_factors: 50_000_000,
        }
    }
}

impl Budget {
    /// Defaults overlaid with `FORGE_BUDGET`, if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var("FORGE_BUDGET") {
            Ok(spec) => Budget::default().with_overrides(&spec),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = match item.split_once('=') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => ("enumeration", item),
            };
            let value: u64 = parse_count(value).ok_or_else(|| Error::Schema(format!("bad budget value {value:?}")))?;
            match key {
                "enumeration" => self.enumeration = value,
                "terms" | "expansion_terms" => self.expansion_terms = value as usize,
                "field" | "field_size" => self.field_size = value,
                "columns" | "dense_columns" => self.dense_columns = value as usize,
                "grid" | "grid_points" => self.grid_points = value,
                "m" | "boolean_vars" => self.boolean_vars = value as u32,
                "gates" | "circuit_gates" => self.circuit_gates = value,
                "collision" | "collision_entries" => self.collision_entries = value,
                "factors" | "equation_factors" => self.equation_factors = value,
                other => return Err(Error::Schema(format!("unknown budget key {other:?}"))),
            }
        }
        Ok(self)
    }
}

fn parse_count(s: &str) -> Option<u64> {
    if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let m: u64 = mantissa.parse().ok()?;
        let e: u32 = exp.parse().ok()?;
        m.checked_mul(10u64.checked_pow(e)?)
    } else {
        s.parse().ok()
    }
}

pub(crate) fn check(what: &'static str, needed: u128, limit: u128) -> Result<()> {
    if needed > limit {
        Err(Error::Budget { what, needed, limit })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let b = Budget::default().with_overrides("grid=1e3, m=4").unwrap();
        assert_eq!(b.grid_points, 1000);
        assert_eq!(b.boolean_vars, 4);
        let b = Budget::default().with_overrides("12345").unwrap();
        assert_eq!(b.enumeration, 12345);
        assert!(Budget::default().with_overrides("bogus=1").is_err());
    }
}
