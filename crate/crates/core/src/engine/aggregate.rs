use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AggregateValue {
    Int(i64),
    Float(f64),
    Bool(bool),
}

impl AggregateValue {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            AggregateValue::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_float(&self) -> Option<f64> {
        match self {
            AggregateValue::Float(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            AggregateValue::Bool(v) => Some(*v),
            _ => None,
        }
    }
}

impl fmt::Display for AggregateValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AggregateValue::Int(v) => write!(f, "{v}"),
            AggregateValue::Float(v) => write!(f, "{v}"),
            AggregateValue::Bool(v) => write!(f, "{v}"),
        }
    }
}

/// Commutative, associative merge with an identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AggregateOp {
    SumInt,
    SumFloat,
    MinInt,
    MaxInt,
    And,
    Or,
}

impl AggregateOp {
    pub fn identity(&self) -> AggregateValue {
        match self {
            AggregateOp::SumInt => AggregateValue::Int(0),
            AggregateOp::SumFloat => AggregateValue::Float(0.0),
            AggregateOp::MinInt => AggregateValue::Int(i64::MAX),
            AggregateOp::MaxInt => AggregateValue::Int(i64::MIN),
            AggregateOp::And => AggregateValue::Bool(true),
            AggregateOp::Or => AggregateValue::Bool(false),
        }
    }

    fn expected(&self) -> &'static str {
        match self {
            AggregateOp::SumInt | AggregateOp::MinInt | AggregateOp::MaxInt => "integer",
            AggregateOp::SumFloat => "float",
            AggregateOp::And | AggregateOp::Or => "boolean",
        }
    }

    fn merge(&self, a: AggregateValue, b: AggregateValue) -> Option<AggregateValue> {
        use AggregateValue::*;
        Some(match (self, a, b) {
            (AggregateOp::SumInt, Int(x), Int(y)) => Int(x.wrapping_add(y)),
            (AggregateOp::MinInt, Int(x), Int(y)) => Int(x.min(y)),
            (AggregateOp::MaxInt, Int(x), Int(y)) => Int(x.max(y)),
            (AggregateOp::SumFloat, Float(x), Float(y)) => Float(x + y),
            (AggregateOp::And, Bool(x), Bool(y)) => Bool(x && y),
            (AggregateOp::Or, Bool(x), Bool(y)) => Bool(x || y),
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Aggregator {
    pub name: String,
    pub op: AggregateOp,
}

impl Aggregator {
    pub fn new(name: impl Into<String>, op: AggregateOp) -> Self {
        Aggregator {
            name: name.into(),
            op,
        }
    }
}

/// Registered aggregators, in registration order.
#[derive(Clone, Debug, Default)]
pub(crate) struct AggregatorRegistry {
    specs: Vec<Aggregator>,
    index: HashMap<String, usize>,
}

impl AggregatorRegistry {
    pub fn new(specs: Vec<Aggregator>) -> Result<Self> {
        let mut index = HashMap::new();
        for (k, a) in specs.iter().enumerate() {
            if index.insert(a.name.clone(), k).is_some() {
                return Err(Error::Config(format!("aggregator `{}` registered twice", a.name)));
            }
        }
        Ok(AggregatorRegistry { specs, index })
    }

    pub fn identities(&self) -> Vec<AggregateValue> {
        self.specs.iter().map(|a| a.op.identity()).collect()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownAggregator(name.to_string()))
    }

    pub fn accumulate(
        &self,
        slot: usize,
        acc: &mut AggregateValue,
        value: AggregateValue,
    ) -> Result<()> {
        let agg = &self.specs[slot];
        *acc = agg.op.merge(*acc, value).ok_or_else(|| Error::AggregatorType {
            name: agg.name.clone(),
            expected: agg.op.expected(),
        })?;
        Ok(())
    }

    /// Folds per-worker accumulators in worker order.
    pub fn merge_workers<'a>(
        &self,
        partials: impl Iterator<Item = &'a [AggregateValue]>,
    ) -> Vec<AggregateValue> {
        let mut out = self.identities();
        for part in partials {
            for (k, v) in part.iter().enumerate() {
                // types were checked on accumulate
                out[k] = self.specs[k].op.merge(out[k], *v).unwrap_or(out[k]);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_and_identity() {
        let reg = AggregatorRegistry::new(vec![Aggregator::new("s", AggregateOp::SumInt)]).unwrap();
        let mut acc = reg.identities();
        for v in [1, 2, 3] {
            reg.accumulate(0, &mut acc[0], AggregateValue::Int(v)).unwrap();
        }
        assert_eq!(acc[0], AggregateValue::Int(6));
        let none: Vec<&[AggregateValue]> = vec![];
        assert_eq!(reg.merge_workers(none.into_iter())[0], AggregateValue::Int(0));
    }

    #[test]
    fn logical_and() {
        let reg = AggregatorRegistry::new(vec![Aggregator::new("c", AggregateOp::And)]).unwrap();
        let a = [AggregateValue::Bool(true)];
        let b = [AggregateValue::Bool(false)];
        assert_eq!(reg.merge_workers([&a[..], &b[..]].into_iter())[0], AggregateValue::Bool(false));
        assert_eq!(reg.merge_workers([&a[..]].into_iter())[0], AggregateValue::Bool(true));
    }

    #[test]
    fn errors() {
        let reg = AggregatorRegistry::new(vec![Aggregator::new("c", AggregateOp::And)]).unwrap();
        assert!(matches!(reg.lookup("nope"), Err(Error::UnknownAggregator(_))));
        let mut acc = AggregateValue::Bool(true);
        assert!(matches!(
            reg.accumulate(0, &mut acc, AggregateValue::Int(1)),
            Err(Error::AggregatorType { .. })
        ));
        assert!(AggregatorRegistry::new(vec![
            Aggregator::new("x", AggregateOp::Or),
            Aggregator::new("x", AggregateOp::And)
        ])
        .is_err());
    }
}
