//! Rendering back to surface syntax. `parse ∘ print` is the identity on
//! printed output.

use std::fmt::Write;

use super::{ArithOp, Formula, IntSet, SetOp, Term, Theory};
use crate::domain::Value;

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    term(&mut s, t);
    s
}

pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    formula(&mut s, f, 0);
    s
}

/// One statement per line, directives first.
pub fn print_theory(th: &Theory) -> String {
    let mut out = String::new();
    for ((name, arity), range) in &th.signature.functions {
        let vals: Vec<String> = range.iter().map(value_text).collect();
        let _ = writeln!(out, "#function {name}/{arity} : {{{}}}.", vals.join("; "));
    }
    for (name, arity) in &th.signature.undeclared_ranges {
        let _ = writeln!(out, "#function {name}/{arity}.");
    }
    for f in &th.formulas {
        out.push_str(&statement(f));
        out.push('\n');
    }
    out
}

/// Prints a closed formula as a rule, dropping its universal prefix.
pub fn statement(f: &Formula) -> String {
    let (_, body) = f.universal_prefix();
    match body {
        Formula::Implies(b, h) if **h == Formula::Bot => format!(":- {}.", print_formula(b)),
        Formula::Implies(b, h) => format!("{} :- {}.", print_formula(h), print_formula(b)),
        other => format!("{}.", print_formula(other)),
    }
}

fn value_text(v: &Value) -> String {
    // Values print in term syntax already.
    v.to_string()
}

fn term(out: &mut String, t: &Term) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Term::Val(v) => out.push_str(&value_text(v)),
        Term::Cons(f, args) | Term::Func(f, args) => {
            out.push_str(f);
            if args.len() == 1 && t.is_aggregate() && matches!(args[0], Term::IntSet(_)) {
                term(out, &args[0]);
            } else if !args.is_empty() {
                out.push('(');
                list(out, args);
                out.push(')');
            }
        }
        Term::ExtSet(items) => {
            out.push('{');
            for (i, tuple) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                tuple_text(out, tuple);
            }
            out.push('}');
        }
        Term::IntSet(s) => int_set(out, s),
        Term::Arith(op, l, r) => {
            let sym = match op {
                ArithOp::Add => "+",
                ArithOp::Sub => "-",
                ArithOp::Mul => "*",
                ArithOp::Div => "/",
            };
            operand(out, l);
            let _ = write!(out, " {sym} ");
            operand(out, r);
        }
        Term::SetOp(op, l, r) => {
            let sym = match op {
                SetOp::Union => "\\/",
                SetOp::Inter => "/\\",
                SetOp::Diff => "\\",
            };
            operand(out, l);
            let _ = write!(out, " {sym} ");
            operand(out, r);
        }
    }
}

/// Binary operands are parenthesized whenever they are binary themselves.
fn operand(out: &mut String, t: &Term) {
    let negative_int = matches!(t, Term::Int(n) if *n < 0)
        || matches!(t, Term::Val(Value::Int(n)) if *n < 0);
    if matches!(t, Term::Arith(..) | Term::SetOp(..)) || negative_int {
        out.push('(');
        term(out, t);
        out.push(')');
    } else {
        term(out, t);
    }
}

fn list(out: &mut String, items: &[Term]) {
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        term(out, t);
    }
}

fn tuple_text(out: &mut String, items: &[Term]) {
    if items.len() == 1 {
        term(out, &items[0]);
    } else {
        out.push('(');
        list(out, items);
        out.push(')');
    }
}

fn int_set(out: &mut String, s: &IntSet) {
    out.push('{');
    let implicit = IntSet::implicit_bound(&s.head);
    if implicit != s.bound || s.head.is_empty() {
        for (i, x) in s.bound.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(x);
        }
        if !s.bound.is_empty() {
            out.push(' ');
        }
        out.push_str(": ");
    }
    tuple_text(out, &s.head);
    out.push_str(" : ");
    formula(out, &s.body, 0);
    out.push('}');
}

// Precedence: 0 implication, 1 disjunction, 2 conjunction, 3 unary/atomic.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(_, h) if **h == Formula::Bot => 3,
        Formula::Implies(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        _ => 3,
    }
}

fn formula(out: &mut String, f: &Formula, min: u8) {
    if prec(f) < min {
        out.push('(');
        formula(out, f, 0);
        out.push(')');
        return;
    }
    match f {
        Formula::Bot => out.push_str("#false"),
        Formula::Top => out.push_str("#true"),
        Formula::Pred(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                list(out, args);
                out.push(')');
            }
        }
        Formula::Eq(l, r) => {
            term(out, l);
            out.push_str(" = ");
            term(out, r);
        }
        Formula::Cmp(op, l, r) => {
            term(out, l);
            let _ = write!(out, " {} ", op.symbol());
            term(out, r);
        }
        Formula::Member(elems, s) => {
            tuple_text(out, elems);
            out.push_str(" in ");
            term(out, s);
        }
        Formula::And(a, b) => {
            formula(out, a, 2);
            out.push_str(", ");
            formula(out, b, 3);
        }
        Formula::Or(a, b) => {
            formula(out, a, 1);
            out.push_str("; ");
            formula(out, b, 2);
        }
        Formula::Implies(a, b) if **b == Formula::Bot => {
            out.push_str("not ");
            formula(out, a, 3);
        }
        Formula::Implies(a, b) => {
            formula(out, a, 1);
            out.push_str(" -> ");
            formula(out, b, 0);
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let q = if matches!(f, Formula::Forall(..)) {
                "#forall"
            } else {
                "#exists"
            };
            let _ = write!(out, "{q} {x} ");
            formula(out, body, 3);
        }
    }
}
