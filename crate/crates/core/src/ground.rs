//! Instantiation of closed formulas over a finite domain.

use std::collections::BTreeMap;

use crate::domain::{Domain, Value};
use crate::error::{Error, Result};
use crate::interp::eval_static;
use crate::syntax::{print_statement, Formula, IntSet, Name, Term, Theory};

/// Where a ground formula came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    /// Index of the source formula in the theory.
    pub source: usize,
    pub binding: Vec<(Name, Value)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundTheory {
    pub formulas: Vec<Formula>,
    pub provenance: Vec<Provenance>,
}

/// Instantiates each formula's universal prefix over the domain and expands
/// every remaining quantifier, including those inside comprehension bodies,
/// into finite conjunctions and disjunctions.
pub fn ground_theory(theory: &Theory, domain: &Domain, cap: usize) -> Result<GroundTheory> {
    let mut out = GroundTheory::default();
    for (idx, f) in theory.formulas.iter().enumerate() {
        let (vars, body) = f.universal_prefix();
        let count = (domain.len() as u128).saturating_pow(vars.len() as u32);
        if count > cap as u128 {
            return Err(Error::Explosion {
                bound: format!("instances of `{}`", print_statement(f)),
                size: count,
                cap,
            });
        }
        let body = expand_quantifiers(body, domain);
        for vals in domain.tuples(vars.len()) {
            let binding: BTreeMap<Name, Value> =
                vars.iter().cloned().zip(vals.iter().cloned()).collect();
            out.formulas.push(body.subst(&binding));
            out.provenance.push(Provenance {
                source: idx,
                binding: vars.iter().cloned().zip(vals).collect(),
            });
        }
    }
    Ok(out)
}

/// Replaces `#forall X φ` by the conjunction of its instances and
/// `#exists X φ` by their disjunction.
pub fn expand_quantifiers(f: &Formula, domain: &Domain) -> Formula {
    match f {
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let inner = expand_quantifiers(body, domain);
            let parts = domain.values().iter().map(|c| inner.subst_one(x, c));
            if matches!(f, Formula::Forall(..)) {
                Formula::conj(parts)
            } else {
                Formula::disj(parts)
            }
        }
        Formula::Bot | Formula::Top => f.clone(),
        Formula::Pred(p, args) => Formula::Pred(p.clone(), expand_terms(args, domain)),
        Formula::Eq(l, r) => Formula::Eq(expand_term(l, domain), expand_term(r, domain)),
        Formula::Cmp(op, l, r) => Formula::Cmp(*op, expand_term(l, domain), expand_term(r, domain)),
        Formula::Member(e, s) => Formula::Member(expand_terms(e, domain), expand_term(s, domain)),
        Formula::And(a, b) => Formula::and(expand_quantifiers(a, domain), expand_quantifiers(b, domain)),
        Formula::Or(a, b) => Formula::or(expand_quantifiers(a, domain), expand_quantifiers(b, domain)),
        Formula::Implies(a, b) => {
            Formula::implies(expand_quantifiers(a, domain), expand_quantifiers(b, domain))
        }
    }
}

fn expand_terms(ts: &[Term], domain: &Domain) -> Vec<Term> {
    ts.iter().map(|t| expand_term(t, domain)).collect()
}

fn expand_term(t: &Term, domain: &Domain) -> Term {
    match t {
        Term::IntSet(s) => Term::IntSet(Box::new(IntSet {
            bound: s.bound.clone(),
            head: expand_terms(&s.head, domain),
            body: expand_quantifiers(&s.body, domain),
        })),
        Term::Cons(f, args) => Term::Cons(f.clone(), expand_terms(args, domain)),
        Term::Func(f, args) => Term::Func(f.clone(), expand_terms(args, domain)),
        Term::ExtSet(items) => {
            Term::ExtSet(items.iter().map(|tu| expand_terms(tu, domain)).collect())
        }
        Term::Arith(op, l, r) => Term::Arith(
            *op,
            Box::new(expand_term(l, domain)),
            Box::new(expand_term(r, domain)),
        ),
        Term::SetOp(op, l, r) => Term::SetOp(
            *op,
            Box::new(expand_term(l, domain)),
            Box::new(expand_term(r, domain)),
        ),
        Term::Var(_) | Term::Int(_) | Term::Val(_) => t.clone(),
    }
}

/// Evaluates everything that does not depend on an interpretation.
///
/// Builtin atoms over closed static terms become `#true` or `#false`, and
/// a predicate atom with a statically undefined argument becomes `#false`.
/// Connectives are simplified with identities that hold in every
/// here-and-there interpretation. Comprehension bodies are left untouched.
pub fn simplify(f: &Formula, domain: &Domain) -> Formula {
    match f {
        Formula::Bot | Formula::Top => f.clone(),
        Formula::Pred(_, args) => {
            let undefined = args
                .iter()
                .any(|t| t.is_closed() && t.is_static() && eval_static(domain, t).is_none());
            if undefined {
                Formula::Bot
            } else {
                f.clone()
            }
        }
        Formula::Eq(l, r) | Formula::Cmp(_, l, r) => {
            if is_static_closed(l) && is_static_closed(r) {
                truth(crate::ht::satisfies_static(domain, f))
            } else {
                f.clone()
            }
        }
        Formula::Member(e, s) => {
            if e.iter().all(is_static_closed) && is_static_closed(s) {
                truth(crate::ht::satisfies_static(domain, f))
            } else {
                f.clone()
            }
        }
        Formula::And(a, b) => match (simplify(a, domain), simplify(b, domain)) {
            (Formula::Bot, _) | (_, Formula::Bot) => Formula::Bot,
            (Formula::Top, g) | (g, Formula::Top) => g,
            (x, y) => Formula::and(x, y),
        },
        Formula::Or(a, b) => match (simplify(a, domain), simplify(b, domain)) {
            (Formula::Top, _) | (_, Formula::Top) => Formula::Top,
            (Formula::Bot, g) | (g, Formula::Bot) => g,
            (x, y) => Formula::or(x, y),
        },
        Formula::Implies(a, b) => match (simplify(a, domain), simplify(b, domain)) {
            (Formula::Bot, _) | (_, Formula::Top) => Formula::Top,
            (Formula::Top, g) => g,
            (x, y) => Formula::implies(x, y),
        },
        Formula::Forall(..) | Formula::Exists(..) => f.clone(),
    }
}

fn is_static_closed(t: &Term) -> bool {
    t.is_static() && t.is_closed()
}

fn truth(b: bool) -> Formula {
    if b {
        Formula::Top
    } else {
        Formula::Bot
    }
}

/// Human-readable listing of a ground theory.
pub fn render(ground: &GroundTheory) -> String {
    let mut out = String::new();
    for f in &ground.formulas {
        out.push_str(&print_statement(f));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn ints(lo: i64, hi: i64) -> Domain {
        Domain::new((lo..=hi).map(Value::Int), lo, hi)
    }

    #[test]
    fn one_instance_per_domain_element() {
        let th = parse_program("p(Y) :- Y = count{X : q(X)}.").unwrap();
        let d = ints(0, 5);
        let g = ground_theory(&th, &d, 1000).unwrap();
        assert_eq!(g.formulas.len(), 6);
        assert!(g.formulas.iter().all(Formula::is_closed));
        assert_eq!(g.provenance[3].binding, vec![(Name::from("Y"), Value::Int(3))]);
    }

    #[test]
    fn nested_quantifiers_are_expanded() {
        let th = parse_program("p :- #exists X (q(X), #forall Y r(Y)).").unwrap();
        let d = ints(0, 1);
        let g = ground_theory(&th, &d, 1000).unwrap();
        let mut quantified = false;
        g.formulas[0].visit(&mut |f| {
            quantified |= matches!(f, Formula::Forall(..) | Formula::Exists(..));
        });
        assert!(!quantified);
    }

    #[test]
    fn explosion_names_the_formula() {
        let th = parse_program("p(X, Y, Z) :- q(X), q(Y), q(Z).").unwrap();
        let d = ints(0, 50);
        assert!(matches!(ground_theory(&th, &d, 1000), Err(Error::Explosion { .. })));
    }

    #[test]
    fn static_parts_are_evaluated() {
        let th = parse_program("p(X) :- q(X), X + 1 = 3.").unwrap();
        let d = ints(0, 3);
        let g = ground_theory(&th, &d, 1000).unwrap();
        let simplified: Vec<Formula> = g.formulas.iter().map(|f| simplify(f, &d)).collect();
        let live: Vec<&Formula> = simplified.iter().filter(|f| **f != Formula::Top).collect();
        assert_eq!(live.len(), 1);
    }
}
