//! JSON encoding of values, atoms and models.
//!
//! Integers are numbers, constants are strings, constructor terms are
//! `{"fn": name, "args": [...]}`, tuples are arrays and sets are
//! `{"set": [...]}` with sorted members.

use serde_json::{json, Value as Json};

use crate::domain::{Atom, AtomSet, Value};
use crate::interp::Assignment;

pub fn value(v: &Value) -> Json {
    match v {
        Value::Int(n) => json!(n),
        Value::Cons(c, args) if args.is_empty() => json!(&**c),
        Value::Cons(c, args) => json!({ "fn": &**c, "args": args.iter().map(value).collect::<Vec<_>>() }),
        Value::Tuple(items) => Json::Array(items.iter().map(value).collect()),
        Value::Set(items) => json!({ "set": items.iter().map(value).collect::<Vec<_>>() }),
    }
}

pub fn atom(a: &Atom) -> Json {
    json!({ "pred": &*a.pred, "args": a.args.iter().map(value).collect::<Vec<_>>() })
}

pub fn atoms(set: &AtomSet) -> Json {
    Json::Array(set.iter().map(atom).collect())
}

/// Function values and comprehension values of an assignment.
pub fn assignment(sigma: &Assignment) -> Json {
    let functions: Vec<Json> = sigma
        .facts
        .iter()
        .map(|((f, args), v)| {
            json!({
                "fn": &**f,
                "args": args.iter().map(value).collect::<Vec<_>>(),
                "value": value(v),
            })
        })
        .collect();
    let sets: Vec<Json> = sigma
        .sets
        .iter()
        .map(|(s, v)| {
            json!({
                "set": crate::syntax::print_term(&crate::syntax::Term::IntSet(Box::new(s.clone()))),
                "value": value(v),
            })
        })
        .collect();
    json!({ "functions": functions, "sets": sets })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_and_tuples_are_distinguishable() {
        let pair = Value::Tuple(vec![Value::Int(1), Value::constant("a")]);
        let set = Value::set([Value::Int(2), Value::Int(1)]).unwrap();
        assert_eq!(value(&pair), json!([1, "a"]));
        assert_eq!(value(&set), json!({ "set": [1, 2] }));
        let f = Value::Cons("f".into(), vec![Value::Int(0)]);
        assert_eq!(value(&f), json!({ "fn": "f", "args": [0] }));
        let a = Atom::new("p", vec![set]);
        assert_eq!(atom(&a).to_string(), r#"{"args":[{"set":[1,2]}],"pred":"p"}"#);
    }
}
