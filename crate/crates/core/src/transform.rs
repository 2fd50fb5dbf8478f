//! Rewriting an atom argument `p(.., τ, ..)` into `∃V (V = τ ∧ p(.., V, ..))`.
//!
//! Atoms are predicate atoms, equalities, comparisons and membership tests,
//! numbered per statement in pre-order over the stored formula (so a rule
//! body comes before its head): an atom comes before the atoms inside
//! comprehensions among its arguments.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{Formula, IntSet, Name, Term, Theory};

/// Names one argument position of one atom occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AtomSelector {
    /// Statement index.
    pub formula: usize,
    /// Atom occurrence within the statement, in pre-order.
    pub atom: usize,
    /// Argument index within the atom.
    pub arg: usize,
}

impl fmt::Display for AtomSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.formula, self.atom, self.arg)
    }
}

impl std::str::FromStr for AtomSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<AtomSelector> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Selector(format!("expected FORMULA:ATOM:ARG, got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let n = |p: &str| p.parse::<usize>().map_err(|_| bad());
        Ok(AtomSelector {
            formula: n(parts[0])?,
            atom: n(parts[1])?,
            arg: n(parts[2])?,
        })
    }
}

/// Every position the transform accepts, in order.
pub fn eligible_positions(theory: &Theory) -> Vec<AtomSelector> {
    let mut out = Vec::new();
    for (i, f) in theory.formulas.iter().enumerate() {
        let mut arities = Vec::new();
        atom_arities(f, &mut arities);
        for (atom, n) in arities.into_iter().enumerate() {
            for arg in 0..n {
                out.push(AtomSelector {
                    formula: i,
                    atom,
                    arg,
                });
            }
        }
    }
    out
}

fn atom_arities(f: &Formula, out: &mut Vec<usize>) {
    if let Some(args) = atom_args(f) {
        out.push(args.len());
        for t in args {
            term_arities(t, out);
        }
        return;
    }
    f.for_each_child(&mut |g| atom_arities(g, out));
}

fn term_arities(t: &Term, out: &mut Vec<usize>) {
    match t {
        Term::IntSet(s) => {
            s.head.iter().for_each(|h| term_arities(h, out));
            atom_arities(&s.body, out);
        }
        _ => t.for_each_child(&mut |c| term_arities(c, out)),
    }
}

fn atom_args(f: &Formula) -> Option<Vec<&Term>> {
    match f {
        Formula::Pred(_, args) => Some(args.iter().collect()),
        Formula::Eq(l, r) | Formula::Cmp(_, l, r) => Some(vec![l, r]),
        Formula::Member(elems, s) => Some(elems.iter().chain(std::iter::once(s)).collect()),
        _ => None,
    }
}

/// Applies the rewrite at `sel`. An existential that ends up as a conjunct
/// of a rule body is turned into a universally quantified variable of the
/// rule, which is equivalent.
pub fn existential_intro_transform(theory: &Theory, sel: AtomSelector) -> Result<Theory> {
    let Some(target) = theory.formulas.get(sel.formula) else {
        return Err(Error::Selector(format!(
            "statement {} out of range ({} statements)",
            sel.formula,
            theory.formulas.len()
        )));
    };
    let mut used = BTreeSet::new();
    for f in &theory.formulas {
        names_in_formula(f, &mut used);
    }
    let fresh = fresh_name(&used);
    let mut rw = Rewriter {
        target: sel.atom,
        arg: sel.arg,
        seen: 0,
        fresh: fresh.clone(),
        done: false,
        error: None,
    };
    let rewritten = rw.formula(target);
    if let Some(e) = rw.error {
        return Err(e);
    }
    if !rw.done {
        return Err(Error::Selector(format!(
            "statement {} has {} atoms, no atom {}",
            sel.formula, rw.seen, sel.atom
        )));
    }
    let mut out = theory.clone();
    out.formulas[sel.formula] = hoist(rewritten, &fresh);
    Ok(out)
}

fn fresh_name(used: &BTreeSet<Name>) -> Name {
    (1..)
        .map(|i| Name::from(format!("V{i}")))
        .find(|n| !used.contains(n))
        .expect("unbounded")
}

struct Rewriter {
    target: usize,
    arg: usize,
    seen: usize,
    fresh: Name,
    done: bool,
    error: Option<Error>,
}

impl Rewriter {
    fn formula(&mut self, f: &Formula) -> Formula {
        if atom_args(f).is_some() {
            let index = self.seen;
            self.seen += 1;
            if index == self.target {
                self.done = true;
                return self.rewrite_atom(f);
            }
            return self.inside_terms(f);
        }
        match f {
            Formula::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            Formula::Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            Formula::Implies(a, b) => Formula::implies(self.formula(a), self.formula(b)),
            Formula::Forall(x, b) => Formula::Forall(x.clone(), Box::new(self.formula(b))),
            Formula::Exists(x, b) => Formula::Exists(x.clone(), Box::new(self.formula(b))),
            other => other.clone(),
        }
    }

    fn rewrite_atom(&mut self, f: &Formula) -> Formula {
        let args = atom_args(f).expect("atom");
        let Some(tau) = args.get(self.arg).map(|t| (*t).clone()) else {
            self.error = Some(Error::Selector(format!(
                "atom has {} arguments, no argument {}",
                args.len(),
                self.arg
            )));
            return f.clone();
        };
        let v = Term::Var(self.fresh.clone());
        let k = self.arg;
        let pick = |i: usize, t: &Term| if i == k { v.clone() } else { t.clone() };
        let atom = match f {
            Formula::Pred(p, args) => {
                Formula::Pred(p.clone(), args.iter().enumerate().map(|(i, t)| pick(i, t)).collect())
            }
            Formula::Eq(l, r) => Formula::Eq(pick(0, l), pick(1, r)),
            Formula::Cmp(op, l, r) => Formula::Cmp(*op, pick(0, l), pick(1, r)),
            Formula::Member(elems, s) => Formula::Member(
                elems.iter().enumerate().map(|(i, t)| pick(i, t)).collect(),
                pick(elems.len(), s),
            ),
            _ => unreachable!(),
        };
        Formula::Exists(
            self.fresh.clone(),
            Box::new(Formula::and(Formula::Eq(v, tau), atom)),
        )
    }

    /// Continues the numbering inside comprehensions in the atom's arguments.
    fn inside_terms(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::Pred(p, args) => {
                Formula::Pred(p.clone(), args.iter().map(|t| self.term(t)).collect())
            }
            Formula::Eq(l, r) => {
                let l = self.term(l);
                Formula::Eq(l, self.term(r))
            }
            Formula::Cmp(op, l, r) => {
                let l = self.term(l);
                Formula::Cmp(*op, l, self.term(r))
            }
            Formula::Member(elems, s) => {
                let elems = elems.iter().map(|t| self.term(t)).collect();
                Formula::Member(elems, self.term(s))
            }
            other => other.clone(),
        }
    }

    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::IntSet(s) => {
                let head = s.head.iter().map(|h| self.term(h)).collect();
                Term::IntSet(Box::new(IntSet {
                    bound: s.bound.clone(),
                    head,
                    body: self.formula(&s.body),
                }))
            }
            Term::Cons(c, args) => Term::Cons(c.clone(), args.iter().map(|a| self.term(a)).collect()),
            Term::Func(c, args) => Term::Func(c.clone(), args.iter().map(|a| self.term(a)).collect()),
            Term::ExtSet(items) => Term::ExtSet(
                items
                    .iter()
                    .map(|tuple| tuple.iter().map(|a| self.term(a)).collect())
                    .collect(),
            ),
            Term::Arith(op, l, r) => {
                let l = self.term(l);
                Term::Arith(*op, Box::new(l), Box::new(self.term(r)))
            }
            Term::SetOp(op, l, r) => {
                let l = self.term(l);
                Term::SetOp(*op, Box::new(l), Box::new(self.term(r)))
            }
            other => other.clone(),
        }
    }
}

/// `∀x⃗ ((∃V φ) ∧ ψ → χ)` becomes `∀x⃗ ∀V (φ ∧ ψ → χ)` when the existential
/// is a conjunct of the rule body.
fn hoist(f: Formula, fresh: &Name) -> Formula {
    let (mut vars, body) = f.universal_prefix();
    let Formula::Implies(b, h) = body else {
        return f.clone();
    };
    let mut found = false;
    let b2 = unwrap_conjunct(b, fresh, &mut found);
    if !found {
        return f.clone();
    }
    vars.push(fresh.clone());
    Formula::forall(&vars, Formula::implies(b2, (**h).clone()))
}

fn unwrap_conjunct(f: &Formula, fresh: &Name, found: &mut bool) -> Formula {
    match f {
        Formula::Exists(x, body) if x == fresh && !*found => {
            *found = true;
            (**body).clone()
        }
        Formula::And(a, b) => {
            let a = unwrap_conjunct(a, fresh, found);
            Formula::and(a, unwrap_conjunct(b, fresh, found))
        }
        other => other.clone(),
    }
}

fn names_in_formula(f: &Formula, out: &mut BTreeSet<Name>) {
    f.visit(&mut |g| match g {
        Formula::Forall(x, _) | Formula::Exists(x, _) => {
            out.insert(x.clone());
        }
        _ => {}
    });
    f.visit_terms(&mut |t| match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::IntSet(s) => {
            out.extend(s.bound.iter().cloned());
        }
        _ => {}
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_program, print_statement};

    fn sel(formula: usize, atom: usize, arg: usize) -> AtomSelector {
        AtomSelector { formula, atom, arg }
    }

    #[test]
    fn aggregate_bound_becomes_a_rule_variable() {
        let th = parse_program("p(a) :- count{X : p(X)} >= 1.").unwrap();
        // Rule bodies are numbered before heads: atom 0 is the comparison.
        let out = existential_intro_transform(&th, sel(0, 0, 0)).unwrap();
        assert_eq!(
            print_statement(&out.formulas[0]),
            "p(a) :- V1 = count{X : p(X)}, V1 >= 1."
        );
    }

    #[test]
    fn fact_argument_stays_existential() {
        let th = parse_program("p(b).").unwrap();
        let out = existential_intro_transform(&th, sel(0, 0, 0)).unwrap();
        assert_eq!(print_statement(&out.formulas[0]), "#exists V1 (V1 = b, p(V1)).");
    }

    #[test]
    fn positions_cover_atoms_inside_sets() {
        let th = parse_program("p(a) :- count{X : p(X)} >= 1. p(b).").unwrap();
        let pos = eligible_positions(&th);
        // comparison (2 args), p(X) in the set, head p(a), fact p(b)
        assert_eq!(pos.len(), 5);
        let out = existential_intro_transform(&th, sel(0, 1, 0)).unwrap();
        assert!(print_statement(&out.formulas[0]).contains("#exists V1 (V1 = X, p(V1))"));
    }

    #[test]
    fn fresh_name_avoids_existing_variables() {
        let th = parse_program("q(V1) :- r(V1).").unwrap();
        let out = existential_intro_transform(&th, sel(0, 0, 0)).unwrap();
        assert!(print_statement(&out.formulas[0]).contains("V2 = V1"));
    }

    #[test]
    fn out_of_range_selectors() {
        let th = parse_program("p(b).").unwrap();
        assert!(existential_intro_transform(&th, sel(1, 0, 0)).is_err());
        assert!(existential_intro_transform(&th, sel(0, 1, 0)).is_err());
        assert!(existential_intro_transform(&th, sel(0, 0, 1)).is_err());
        assert!("1:2".parse::<AtomSelector>().is_err());
        assert_eq!("1:2:0".parse::<AtomSelector>().unwrap(), sel(1, 2, 0));
    }
}
