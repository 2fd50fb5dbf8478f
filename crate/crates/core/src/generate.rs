//! Seeded random instances: programs in the aggregate fragment, programs
//! without comprehensions, and (interpretation, formula) pairs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{Atom, AtomSet, Domain, Value};
use crate::ht::roots_of;
use crate::interp::{coherence_closure, Assignment, HtInterpretation};
use crate::syntax::{CmpOp, Formula, IntSet, Name, Term};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for random aggregate programs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GzParams {
    pub max_predicates: usize,
    pub max_constants: usize,
    pub max_rules: usize,
    pub max_body: usize,
}

impl Default for GzParams {
    fn default() -> Self {
        GzParams {
            max_predicates: 3,
            max_constants: 3,
            max_rules: 5,
            max_body: 2,
        }
    }
}

struct Vocab {
    preds: Vec<(&'static str, usize)>,
    args: Vec<String>,
}

impl Vocab {
    fn unary(&self) -> Vec<&'static str> {
        self.preds.iter().filter(|p| p.1 == 1).map(|p| p.0).collect()
    }

    fn atom(&self, rng: &mut ChaCha8Rng, var: Option<&str>) -> String {
        let (p, arity) = *self.preds.choose(rng).unwrap();
        if arity == 0 {
            return p.to_string();
        }
        match var {
            Some(v) if rng.gen_bool(0.5) => format!("{p}({v})"),
            _ => format!("{p}({})", self.args.choose(rng).unwrap()),
        }
    }
}

/// A random program of facts and rules whose bodies mix literals and set
/// atoms `count{Z : ...} ⊴ n` or `sum{Z : ...} ⊴ n`.
pub fn gz_program(rng: &mut ChaCha8Rng, params: &GzParams) -> String {
    let names = ["p", "q", "r"];
    let npred = rng.gen_range(1..=params.max_predicates.clamp(1, 3));
    let mut preds: Vec<(&'static str, usize)> = names[..npred]
        .iter()
        .map(|&p| (p, usize::from(rng.gen_bool(0.85))))
        .collect();
    if preds.iter().all(|p| p.1 == 0) {
        preds[0].1 = 1;
    }
    let consts = ["a", "b", "c"];
    let nconst = rng.gen_range(1..=params.max_constants.clamp(1, 3));
    let mut args: Vec<String> = consts[..nconst].iter().map(|c| c.to_string()).collect();
    if rng.gen_bool(0.5) {
        args.extend(["1", "2"].map(String::from));
    }
    let vocab = Vocab { preds, args };

    let nrules = rng.gen_range(1..=params.max_rules.max(1));
    let mut lines = Vec::new();
    for _ in 0..nrules {
        lines.push(if rng.gen_bool(0.3) {
            format!("{}.", vocab.atom(rng, None))
        } else {
            gz_rule(rng, &vocab, params.max_body.max(1))
        });
    }
    lines.join("\n") + "\n"
}

fn gz_rule(rng: &mut ChaCha8Rng, vocab: &Vocab, max_body: usize) -> String {
    let nbody = rng.gen_range(1..=max_body);
    let mut body = Vec::new();
    let mut has_positive_x = false;
    let mut bound_var = false;
    for _ in 0..nbody {
        match rng.gen_range(0..3) {
            0 => {
                let a = vocab.atom(rng, Some("X"));
                has_positive_x |= a.contains("(X)");
                body.push(a);
            }
            1 => body.push(format!("not {}", vocab.atom(rng, None))),
            _ => {
                let (lit, uses_y) = set_atom(rng, vocab, !bound_var);
                bound_var |= uses_y;
                body.push(lit);
            }
        }
    }
    let head = if rng.gen_bool(0.1) {
        String::new()
    } else {
        let unary = vocab.unary();
        let p = *unary.choose(rng).unwrap();
        if bound_var && rng.gen_bool(0.7) {
            format!("{p}(Y)")
        } else if has_positive_x && rng.gen_bool(0.6) {
            format!("{p}(X)")
        } else {
            vocab.atom(rng, None)
        }
    };
    let head = if head.is_empty() { head } else { head + " " };
    format!("{head}:- {}.", body.join(", "))
}

/// A set atom; the bound is sometimes the rule variable `Y`.
fn set_atom(rng: &mut ChaCha8Rng, vocab: &Vocab, allow_var: bool) -> (String, bool) {
    let agg = if rng.gen_bool(0.6) { "count" } else { "sum" };
    let unary = vocab.unary();
    let p = unary.choose(rng).unwrap();
    let mut body = format!("{p}(Z)");
    match rng.gen_range(0..4) {
        0 => {
            let q = unary.choose(rng).unwrap();
            body += &format!(", not {q}(Z)");
        }
        1 => body += &format!(", Z != {}", vocab.args.choose(rng).unwrap()),
        _ => {}
    }
    let rel = *["=", ">=", "<="].choose(rng).unwrap();
    if allow_var && rel == "=" && rng.gen_bool(0.4) {
        return (format!("{agg}{{Z : {body}}} = Y"), true);
    }
    let n = rng.gen_range(0..=3);
    (format!("{agg}{{Z : {body}}} {rel} {n}"), false)
}

/// A random program without comprehensions: predicates over constants and
/// small sets, a partial function `f/0` and possibly `g/1`, assignments,
/// equalities and membership tests.
pub fn zero_program(rng: &mut ChaCha8Rng) -> String {
    let mut lines = vec!["#function f/0 : {a, b}.".to_string()];
    let with_g = rng.gen_bool(0.4);
    if with_g {
        lines.push("#function g/1 : {a, b}.".to_string());
    }
    let terms = ["a", "b", "{a}", "{a, b}"];
    let fun_terms: Vec<&str> = if with_g {
        vec!["f", "g(a)", "g(f)"]
    } else {
        vec!["f"]
    };
    let atom = |rng: &mut ChaCha8Rng| -> String {
        match rng.gen_range(0..4) {
            0 => "s".to_string(),
            1 => format!("q({})", ["a", "b"].choose(rng).unwrap()),
            _ => format!("p({})", terms.choose(rng).unwrap()),
        }
    };
    let nrules = rng.gen_range(2..=5);
    for _ in 0..nrules {
        let line = match rng.gen_range(0..6) {
            0 => format!("{}.", atom(rng)),
            1 => {
                let ft = fun_terms.choose(rng).unwrap();
                let target = if ft.starts_with('g') { *ft } else { "f" };
                format!(
                    "{target} := {} :- {}.",
                    ["a", "b"].choose(rng).unwrap(),
                    literal(rng, &atom, &fun_terms)
                )
            }
            _ => {
                let nb = rng.gen_range(1..=2);
                let body: Vec<String> =
                    (0..nb).map(|_| literal(rng, &atom, &fun_terms)).collect();
                let head = if rng.gen_bool(0.15) {
                    String::new()
                } else if rng.gen_bool(0.3) {
                    format!("q({}) ", fun_terms.choose(rng).unwrap())
                } else {
                    atom(rng) + " "
                };
                format!("{head}:- {}.", body.join(", "))
            }
        };
        lines.push(line);
    }
    lines.join("\n") + "\n"
}

fn literal(
    rng: &mut ChaCha8Rng,
    atom: &dyn Fn(&mut ChaCha8Rng) -> String,
    fun_terms: &[&str],
) -> String {
    match rng.gen_range(0..6) {
        0 | 1 => atom(rng),
        2 => format!("not {}", atom(rng)),
        3 => format!(
            "{} = {}",
            fun_terms.choose(rng).unwrap(),
            ["a", "b"].choose(rng).unwrap()
        ),
        4 => format!(
            "{} in {}",
            fun_terms.choose(rng).unwrap(),
            ["{a}", "{a, b}", "{b} \\/ {a}"].choose(rng).unwrap()
        ),
        _ => format!(
            "not {} = {}",
            fun_terms.choose(rng).unwrap(),
            ["a", "b"].choose(rng).unwrap()
        ),
    }
}

/// The fixed universe used for random (interpretation, formula) pairs.
pub fn pair_domain() -> Domain {
    let mut values = vec![Value::constant("a"), Value::constant("b")];
    values.extend((0..=2).map(Value::Int));
    Domain::new(values, 0, 2)
}

/// A random coherent interpretation over [`pair_domain`] and a random
/// ground formula mixing atoms, a partial function `f/1`, comprehensions,
/// aggregates, connectives and quantifiers.
pub fn interpretation_and_formula(rng: &mut ChaCha8Rng) -> (HtInterpretation, Formula) {
    let domain = pair_domain();
    let vals = domain.values().to_vec();
    let mut atoms_t = AtomSet::new();
    let mut atoms_h = AtomSet::new();
    for p in ["p", "q"] {
        for v in &vals {
            if rng.gen_bool(0.4) {
                let a = Atom::new(p, vec![v.clone()]);
                if rng.gen_bool(0.6) {
                    atoms_h.insert(a.clone());
                }
                atoms_t.insert(a);
            }
        }
    }
    let mut sigma_t = Assignment::default();
    let mut sigma_h = Assignment::default();
    for key in [Value::constant("a"), Value::constant("b"), Value::Int(0)] {
        if rng.gen_bool(0.7) {
            let v = vals.choose(rng).unwrap().clone();
            if rng.gen_bool(0.6) {
                sigma_h.set_fact("f", vec![key.clone()], v.clone());
            }
            sigma_t.set_fact("f", vec![key], v);
        }
    }
    let formula = random_formula(rng, &vals, 3);
    let base = HtInterpretation {
        sigma_h,
        sigma_t,
        atoms_h,
        atoms_t,
    };
    let roots = roots_of(std::slice::from_ref(&formula));
    let interp = coherence_closure(&domain, &base, roots.iter());
    (interp, formula)
}

fn random_formula(rng: &mut ChaCha8Rng, vals: &[Value], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_atom(rng, vals);
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, vals, depth - 1);
    match rng.gen_range(0..6) {
        0 => Formula::and(sub(rng), sub(rng)),
        1 => Formula::or(sub(rng), sub(rng)),
        2 => Formula::implies(sub(rng), sub(rng)),
        3 => Formula::not(sub(rng)),
        4 => {
            let x = Name::from("W");
            let body = Formula::Pred(Name::from("p"), vec![Term::Var(x.clone())]);
            let body = Formula::and(body, sub(rng));
            if rng.gen_bool(0.5) {
                Formula::Exists(x, Box::new(body))
            } else {
                Formula::Forall(x, Box::new(Formula::implies(body, sub(rng))))
            }
        }
        _ => random_atom(rng, vals),
    }
}

fn random_term(rng: &mut ChaCha8Rng, vals: &[Value]) -> Term {
    match rng.gen_range(0..5) {
        0 => Term::Func(Name::from("f"), vec![Term::Val(vals.choose(rng).unwrap().clone())]),
        1 => Term::Func(
            Name::from("f"),
            vec![Term::Func(Name::from("f"), vec![Term::Val(vals.choose(rng).unwrap().clone())])],
        ),
        _ => Term::Val(vals.choose(rng).unwrap().clone()),
    }
}

fn random_set(rng: &mut ChaCha8Rng, vals: &[Value]) -> IntSet {
    let x = Name::from("X");
    let px = |p: &str| Formula::Pred(Name::from(p), vec![Term::Var(x.clone())]);
    let body = match rng.gen_range(0..4) {
        0 => px("p"),
        1 => Formula::and(px("p"), Formula::not(px("q"))),
        2 => Formula::Eq(
            Term::Func(Name::from("f"), vec![Term::Var(x.clone())]),
            Term::Val(vals.choose(rng).unwrap().clone()),
        ),
        _ => Formula::or(px("q"), Formula::implies(px("p"), Formula::Bot)),
    };
    IntSet {
        bound: vec![x.clone()],
        head: vec![Term::Var(x)],
        body,
    }
}

fn random_atom(rng: &mut ChaCha8Rng, vals: &[Value]) -> Formula {
    match rng.gen_range(0..8) {
        0 | 1 => Formula::Pred(
            Name::from(*["p", "q"].choose(rng).unwrap()),
            vec![random_term(rng, vals)],
        ),
        2 => Formula::Eq(random_term(rng, vals), random_term(rng, vals)),
        3 => {
            let agg = *["count", "sum", "max", "min"].choose(rng).unwrap();
            let op = *[CmpOp::Ge, CmpOp::Le, CmpOp::Ne, CmpOp::Gt].choose(rng).unwrap();
            Formula::Cmp(
                op,
                Term::Func(Name::from(agg), vec![Term::IntSet(Box::new(random_set(rng, vals)))]),
                Term::Int(rng.gen_range(0..=2)),
            )
        }
        4 => {
            let members: Vec<Vec<Term>> = vals
                .iter()
                .filter(|_| rng.gen_bool(0.3))
                .map(|v| vec![Term::Val(v.clone())])
                .collect();
            Formula::Eq(Term::IntSet(Box::new(random_set(rng, vals))), Term::ExtSet(members))
        }
        5 => Formula::Member(
            vec![random_term(rng, vals)],
            Term::IntSet(Box::new(random_set(rng, vals))),
        ),
        6 => Formula::Top,
        _ => Formula::Bot,
    }
}
