//! A direct, brute-force equilibrium solver for theories without
//! comprehensions, where set values are plain constants.
//!
//! It shares only the domain, the grounder and the builtin operations with
//! the main solver. Interpretations are pairs of partial function maps and
//! atom sets; every smaller pair is tried when checking minimality.

use std::collections::{BTreeMap, BTreeSet};

use crate::builtins::{self, Aggregate};
use crate::domain::{build_active_domain, Atom, AtomSet, Domain, DomainBounds, Value};
use crate::error::{Error, Result};
use crate::ground::ground_theory;
use crate::ht::FunctionKey;
use crate::syntax::{Formula, Name, Term, Theory};

pub type FunctionMap = BTreeMap<(Name, Vec<Value>), Value>;

/// A stable model: the function map and the atoms.
pub type FunctionalModel = (FunctionMap, AtomSet);

/// Largest atom universe the enumeration accepts.
const MAX_ATOMS: usize = 16;

struct World<'a> {
    domain: &'a Domain,
    sigma: &'a FunctionMap,
    atoms: &'a AtomSet,
}

fn eval(w: &World<'_>, t: &Term) -> Option<Value> {
    match t {
        Term::Int(n) => Some(Value::Int(*n)),
        Term::Val(v) => Some(v.clone()),
        Term::Cons(c, args) => Some(Value::Cons(c.clone(), eval_args(w, args)?)),
        Term::Func(f, args) => match (Aggregate::from_name(f), args.len()) {
            (Some(agg), 1) => {
                let s = eval(w, &args[0])?;
                w.domain.clamp(builtins::aggregate_eval(agg, &s))
            }
            _ => w.sigma.get(&(f.clone(), eval_args(w, args)?)).cloned(),
        },
        Term::ExtSet(items) => {
            let mut elems = Vec::new();
            for tuple in items {
                elems.push(Value::element(eval_args(w, tuple)?));
            }
            Value::set(elems)
        }
        Term::Arith(op, l, r) => w.domain.clamp(builtins::arith(*op, &eval(w, l)?, &eval(w, r)?)),
        Term::SetOp(op, l, r) => builtins::set_op(*op, &eval(w, l)?, &eval(w, r)?),
        Term::Var(_) | Term::IntSet(_) => None,
    }
}

fn eval_args(w: &World<'_>, ts: &[Term]) -> Option<Vec<Value>> {
    ts.iter().map(|t| eval(w, t)).collect()
}

/// Truth in a single world, with implication read classically.
fn holds(w: &World<'_>, f: &Formula) -> bool {
    match f {
        Formula::Bot => false,
        Formula::Top => true,
        Formula::Pred(p, args) => eval_args(w, args).is_some_and(|args| {
            w.atoms.contains(&Atom {
                pred: p.clone(),
                args,
            })
        }),
        Formula::Eq(l, r) => matches!((eval(w, l), eval(w, r)), (Some(a), Some(b)) if a == b),
        Formula::Cmp(op, l, r) => {
            matches!((eval(w, l), eval(w, r)), (Some(a), Some(b)) if builtins::compare(*op, &a, &b))
        }
        Formula::Member(elems, s) => match (eval_args(w, elems), eval(w, s)) {
            (Some(e), Some(s)) => builtins::member(&e, &s),
            _ => false,
        },
        Formula::And(a, b) => holds(w, a) && holds(w, b),
        Formula::Or(a, b) => holds(w, a) || holds(w, b),
        Formula::Implies(a, b) => !holds(w, a) || holds(w, b),
        Formula::Forall(..) | Formula::Exists(..) => unreachable!("grounded"),
    }
}

/// Truth at the here-world of ⟨here, there⟩.
fn holds_here(here: &World<'_>, there: &World<'_>, f: &Formula) -> bool {
    match f {
        Formula::And(a, b) => holds_here(here, there, a) && holds_here(here, there, b),
        Formula::Or(a, b) => holds_here(here, there, a) || holds_here(here, there, b),
        Formula::Implies(a, b) => {
            (!holds_here(here, there, a) || holds_here(here, there, b)) && holds(there, f)
        }
        _ => holds(here, f),
    }
}

/// Stable models of a comprehension-free theory, sorted.
pub fn functional_stable_models(
    theory: &Theory,
    bounds: &DomainBounds,
) -> Result<Vec<FunctionalModel>> {
    let has_sets = theory.formulas.iter().any(|f| {
        let mut found = false;
        f.visit_terms(&mut |t| found |= matches!(t, Term::IntSet(_)));
        found
    });
    if has_sets {
        return Err(Error::Unsupported(
            "the functional solver does not handle comprehensions".into(),
        ));
    }
    if let Some((name, _)) = theory.signature.undeclared_ranges.iter().next() {
        return Err(Error::MissingRange(name.to_string()));
    }
    let domain = build_active_domain(theory, bounds)?;
    let formulas = ground_theory(theory, &domain, bounds.cap)?.formulas;

    let mut keys = Vec::new();
    for ((name, arity), range) in &theory.signature.functions {
        for args in domain.tuples(*arity) {
            keys.push(((name.clone(), args), range.clone()));
        }
    }
    let sigmas = all_maps(&keys);

    let mut out = BTreeSet::new();
    for sigma in &sigmas {
        let universe: Vec<Atom> = atom_universe(&domain, sigma, &formulas).into_iter().collect();
        if universe.len() > MAX_ATOMS {
            return Err(Error::Explosion {
                bound: "atoms for the functional solver".into(),
                size: universe.len() as u128,
                cap: MAX_ATOMS,
            });
        }
        let smaller_sigmas: Vec<FunctionMap> = sub_maps(sigma);
        for t in subsets(&universe) {
            let there = World {
                domain: &domain,
                sigma,
                atoms: &t,
            };
            if !formulas.iter().all(|f| holds(&there, f)) {
                continue;
            }
            let below = smaller_sigmas.iter().any(|sh| {
                subsets(&t.iter().cloned().collect::<Vec<_>>())
                    .into_iter()
                    .filter(|h| sh != sigma || h.len() < t.len())
                    .any(|h| {
                        let here = World {
                            domain: &domain,
                            sigma: sh,
                            atoms: &h,
                        };
                        formulas.iter().all(|f| holds_here(&here, &there, f))
                    })
            });
            if !below {
                out.insert((sigma.clone(), t));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Every atom some predicate occurrence can denote under `sigma` or a
/// sub-map of it.
fn atom_universe(domain: &Domain, sigma: &FunctionMap, formulas: &[Formula]) -> AtomSet {
    let empty = AtomSet::new();
    let w = World {
        domain,
        sigma,
        atoms: &empty,
    };
    let mut out = AtomSet::new();
    for f in formulas {
        f.visit(&mut |g| {
            if let Formula::Pred(p, args) = g {
                if let Some(args) = eval_args(&w, args) {
                    out.insert(Atom {
                        pred: p.clone(),
                        args,
                    });
                }
            }
        });
    }
    out
}

fn all_maps(keys: &[FunctionKey]) -> Vec<FunctionMap> {
    let mut out = vec![FunctionMap::new()];
    for (key, range) in keys {
        let mut next = Vec::new();
        for m in &out {
            next.push(m.clone());
            for v in range {
                let mut m2 = m.clone();
                m2.insert(key.clone(), v.clone());
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

fn sub_maps(sigma: &FunctionMap) -> Vec<FunctionMap> {
    let entries: Vec<_> = sigma.iter().collect();
    (0u32..(1 << entries.len()))
        .map(|mask| {
            entries
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, (k, v))| ((*k).clone(), (*v).clone()))
                .collect()
        })
        .collect()
}

fn subsets(items: &[Atom]) -> Vec<AtomSet> {
    (0u32..(1 << items.len()))
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect()
}
