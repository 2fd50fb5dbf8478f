//! Interpretation-independent functions and relations.
//!
//! Every function here is total on `Option<Value>`-free inputs and returns
//! `None` for undefined results. Integer window checks are the caller's
//! job (see [`crate::domain::Domain::clamp`]).

use std::collections::BTreeSet;

use crate::domain::Value;
use crate::syntax::{ArithOp, CmpOp, SetOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Aggregate {
    Count,
    Sum,
    Max,
    Min,
}

impl Aggregate {
    pub fn from_name(name: &str) -> Option<Aggregate> {
        match name {
            "count" => Some(Aggregate::Count),
            "sum" => Some(Aggregate::Sum),
            "max" => Some(Aggregate::Max),
            "min" => Some(Aggregate::Min),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Aggregate::Count => "count",
            Aggregate::Sum => "sum",
            Aggregate::Max => "max",
            Aggregate::Min => "min",
        }
    }
}

/// `count` counts members of any arity. `sum` adds the first component of
/// each member and is undefined if one is not an integer. `max` and `min`
/// need a nonempty set of integers.
pub fn aggregate_eval(agg: Aggregate, set: &Value) -> Option<Value> {
    let members = set.as_set()?;
    match agg {
        Aggregate::Count => Some(Value::Int(members.len() as i64)),
        Aggregate::Sum => {
            let mut total: i64 = 0;
            for m in members {
                let key = match m {
                    Value::Tuple(items) => items.first()?.as_int()?,
                    other => other.as_int()?,
                };
                total = total.checked_add(key)?;
            }
            Some(Value::Int(total))
        }
        Aggregate::Max => ints(members)?.into_iter().max().map(Value::Int),
        Aggregate::Min => ints(members)?.into_iter().min().map(Value::Int),
    }
}

fn ints(members: &BTreeSet<Value>) -> Option<Vec<i64>> {
    members.iter().map(Value::as_int).collect()
}

/// Integer arithmetic; division is defined only when exact.
pub fn arith(op: ArithOp, l: &Value, r: &Value) -> Option<Value> {
    let (a, b) = (l.as_int()?, r.as_int()?);
    let n = match op {
        ArithOp::Add => a.checked_add(b)?,
        ArithOp::Sub => a.checked_sub(b)?,
        ArithOp::Mul => a.checked_mul(b)?,
        ArithOp::Div => {
            if b == 0 || a % b != 0 {
                return None;
            }
            a / b
        }
    };
    Some(Value::Int(n))
}

/// Union, intersection and difference of sets of the same arity. The empty
/// set is compatible with every arity.
pub fn set_op(op: SetOp, l: &Value, r: &Value) -> Option<Value> {
    let (a, b) = (l.as_set()?, r.as_set()?);
    if let (Some(x), Some(y)) = (l.set_arity(), r.set_arity()) {
        if x != y {
            return None;
        }
    }
    let out: BTreeSet<Value> = match op {
        SetOp::Union => a.union(b).cloned().collect(),
        SetOp::Inter => a.intersection(b).cloned().collect(),
        SetOp::Diff => a.difference(b).cloned().collect(),
    };
    Some(Value::Set(out))
}

/// Ordering comparisons hold only between integers; `!=` holds between any
/// two distinct values.
pub fn compare(op: CmpOp, l: &Value, r: &Value) -> bool {
    if op == CmpOp::Ne {
        return l != r;
    }
    match (l.as_int(), r.as_int()) {
        (Some(a), Some(b)) => match op {
            CmpOp::Le => a <= b,
            CmpOp::Ge => a >= b,
            CmpOp::Lt => a < b,
            CmpOp::Gt => a > b,
            CmpOp::Ne => unreachable!(),
        },
        _ => false,
    }
}

/// Membership of a tuple (given component-wise) in a set.
pub fn member(elems: &[Value], set: &Value) -> bool {
    match set.as_set() {
        Some(s) => {
            let key = Value::element(elems.to_vec());
            s.contains(&key)
        }
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iset(xs: &[i64]) -> Value {
        Value::set(xs.iter().map(|&n| Value::Int(n))).unwrap()
    }

    #[test]
    fn aggregates_on_small_sets() {
        let s = iset(&[1, 2, 4]);
        assert_eq!(aggregate_eval(Aggregate::Count, &s), Some(Value::Int(3)));
        assert_eq!(aggregate_eval(Aggregate::Sum, &s), Some(Value::Int(7)));
        assert_eq!(aggregate_eval(Aggregate::Max, &s), Some(Value::Int(4)));
        assert_eq!(aggregate_eval(Aggregate::Min, &s), Some(Value::Int(1)));
        let empty = Value::empty_set();
        assert_eq!(aggregate_eval(Aggregate::Count, &empty), Some(Value::Int(0)));
        assert_eq!(aggregate_eval(Aggregate::Sum, &empty), Some(Value::Int(0)));
        assert_eq!(aggregate_eval(Aggregate::Max, &empty), None);
        assert_eq!(aggregate_eval(Aggregate::Min, &empty), None);
    }

    #[test]
    fn sum_keys_on_first_component() {
        let s = Value::set([
            Value::Tuple(vec![Value::Int(2), Value::constant("a")]),
            Value::Tuple(vec![Value::Int(2), Value::constant("b")]),
        ])
        .unwrap();
        assert_eq!(aggregate_eval(Aggregate::Sum, &s), Some(Value::Int(4)));
        assert_eq!(aggregate_eval(Aggregate::Count, &s), Some(Value::Int(2)));
        assert_eq!(aggregate_eval(Aggregate::Max, &s), None);
        let bad = Value::set([Value::constant("a")]).unwrap();
        assert_eq!(aggregate_eval(Aggregate::Sum, &bad), None);
        assert_eq!(aggregate_eval(Aggregate::Count, &Value::Int(3)), None);
    }

    #[test]
    fn exact_division_only() {
        assert_eq!(arith(ArithOp::Div, &Value::Int(6), &Value::Int(3)), Some(Value::Int(2)));
        assert_eq!(arith(ArithOp::Div, &Value::Int(7), &Value::Int(3)), None);
        assert_eq!(arith(ArithOp::Div, &Value::Int(7), &Value::Int(0)), None);
        assert_eq!(arith(ArithOp::Add, &Value::constant("a"), &Value::Int(0)), None);
    }

    #[test]
    fn set_operations_check_arity() {
        let a = iset(&[1, 2]);
        let b = iset(&[2, 3]);
        assert_eq!(set_op(SetOp::Union, &a, &b), Some(iset(&[1, 2, 3])));
        assert_eq!(set_op(SetOp::Inter, &a, &b), Some(iset(&[2])));
        assert_eq!(set_op(SetOp::Diff, &a, &b), Some(iset(&[1])));
        let pairs = Value::set([Value::Tuple(vec![Value::Int(1), Value::Int(1)])]).unwrap();
        assert_eq!(set_op(SetOp::Union, &a, &pairs), None);
        assert_eq!(set_op(SetOp::Union, &Value::empty_set(), &pairs), Some(pairs));
    }

    #[test]
    fn comparisons() {
        assert!(compare(CmpOp::Le, &Value::Int(1), &Value::Int(1)));
        assert!(!compare(CmpOp::Lt, &Value::constant("a"), &Value::constant("b")));
        assert!(compare(CmpOp::Ne, &Value::constant("a"), &Value::constant("b")));
        assert!(!compare(CmpOp::Ne, &Value::Int(2), &Value::Int(2)));
    }

    #[test]
    fn membership() {
        let s = iset(&[1, 2]);
        assert!(member(&[Value::Int(1)], &s));
        assert!(!member(&[Value::Int(3)], &s));
        assert!(!member(&[Value::Int(1)], &Value::Int(1)));
    }
}
