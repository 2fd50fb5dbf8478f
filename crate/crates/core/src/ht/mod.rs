//! Here-and-there satisfaction and the equilibrium model search.

mod relevance;
mod search;

use crate::builtins;
use crate::domain::{Atom, AtomSet, Domain, DomainBounds};
use crate::error::{Error, Result};
use crate::ground::{ground_theory, simplify, GroundTheory};
use crate::interp::{
    coherence_closure, eval_all, eval_term, is_coherent, total_closure, Assignment,
    HtInterpretation, World,
};
use crate::syntax::{Formula, IntSet, Name, Theory};
use crate::domain::Value;

pub use relevance::{relevant, upper_bound, Relevant};
pub use search::{find_stable_models, SearchStats, StableModel, StableModelReport};

/// `interp, w ⊨ f` for a ground formula.
///
/// Atoms and builtin relations need every argument defined at `w`; an
/// implication checked at the here-world must also hold at the there-world.
pub fn satisfies(domain: &Domain, interp: &HtInterpretation, w: World, f: &Formula) -> bool {
    match f {
        Formula::Bot => false,
        Formula::Top => true,
        Formula::Pred(p, args) => match eval_all(domain, interp, w, args) {
            Some(args) => interp.atoms(w).contains(&Atom {
                pred: p.clone(),
                args,
            }),
            None => false,
        },
        Formula::Eq(l, r) => match (eval_term(domain, interp, w, l), eval_term(domain, interp, w, r)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
        Formula::Cmp(op, l, r) => match (eval_term(domain, interp, w, l), eval_term(domain, interp, w, r)) {
            (Some(a), Some(b)) => builtins::compare(*op, &a, &b),
            _ => false,
        },
        Formula::Member(elems, s) => {
            match (eval_all(domain, interp, w, elems), eval_term(domain, interp, w, s)) {
                (Some(e), Some(s)) => builtins::member(&e, &s),
                _ => false,
            }
        }
        Formula::And(a, b) => satisfies(domain, interp, w, a) && satisfies(domain, interp, w, b),
        Formula::Or(a, b) => satisfies(domain, interp, w, a) || satisfies(domain, interp, w, b),
        Formula::Implies(a, b) => {
            let here_ok = w == World::There
                || !satisfies(domain, interp, World::Here, a)
                || satisfies(domain, interp, World::Here, b);
            here_ok
                && (!satisfies(domain, interp, World::There, a)
                    || satisfies(domain, interp, World::There, b))
        }
        Formula::Forall(x, body) => domain
            .values()
            .iter()
            .all(|c| satisfies(domain, interp, w, &body.subst_one(x, c))),
        Formula::Exists(x, body) => domain
            .values()
            .iter()
            .any(|c| satisfies(domain, interp, w, &body.subst_one(x, c))),
    }
}

/// Truth of a ground formula built from builtins only.
pub fn satisfies_static(domain: &Domain, f: &Formula) -> bool {
    satisfies(domain, &HtInterpretation::default(), World::There, f)
}

/// `interp` is a coherent model of every formula.
pub fn models(domain: &Domain, interp: &HtInterpretation, formulas: &[Formula]) -> bool {
    let roots = roots_of(formulas);
    is_coherent(domain, interp, &roots)
        && formulas
            .iter()
            .all(|f| satisfies(domain, interp, World::Here, f))
}

/// Comprehensions occurring outside any other comprehension.
pub fn roots_of(formulas: &[Formula]) -> Vec<IntSet> {
    let mut out: Vec<IntSet> = Vec::new();
    for f in formulas {
        for s in f.immediate_int_sets() {
            if !out.contains(s) {
                out.push(s.clone());
            }
        }
    }
    out
}

/// A function applied to argument values, with the values it may take.
pub type FunctionKey = ((Name, Vec<Value>), Vec<Value>);

/// A grounded theory ready for search.
#[derive(Clone, Debug)]
pub struct Problem {
    pub domain: Domain,
    pub ground: GroundTheory,
    /// Simplified ground formulas that are not trivially true.
    pub formulas: Vec<Formula>,
    pub roots: Vec<IntSet>,
    /// Some formula simplified to `#false`.
    pub inconsistent: bool,
    /// Every declared function applied to every tuple of domain values,
    /// with the function's range.
    pub function_keys: Vec<FunctionKey>,
    pub bounds: DomainBounds,
}

impl Problem {
    pub fn new(theory: &Theory, bounds: &DomainBounds) -> Result<Problem> {
        if let Some((name, _)) = theory.signature.undeclared_ranges.iter().next() {
            return Err(Error::MissingRange(name.to_string()));
        }
        let domain = crate::domain::build_active_domain(theory, bounds)?;
        let ground = ground_theory(theory, &domain, bounds.cap)?;
        let mut formulas = Vec::new();
        let mut inconsistent = false;
        for f in &ground.formulas {
            match simplify(f, &domain) {
                Formula::Top => {}
                Formula::Bot => inconsistent = true,
                g => {
                    if !formulas.contains(&g) {
                        formulas.push(g);
                    }
                }
            }
        }
        let roots = roots_of(&formulas);
        let mut function_keys = Vec::new();
        for ((name, arity), range) in &theory.signature.functions {
            for args in domain.tuples(*arity) {
                function_keys.push(((name.clone(), args), range.clone()));
            }
        }
        Ok(Problem {
            domain,
            ground,
            formulas,
            roots,
            inconsistent,
            function_keys,
            bounds: bounds.clone(),
        })
    }

    /// The total, coherent interpretation ⟨σ, T⟩.
    pub fn total(&self, sigma: &Assignment, atoms: &AtomSet) -> HtInterpretation {
        let base = HtInterpretation::total(sigma.clone(), atoms.clone());
        total_closure(&self.domain, &base, self.roots.iter())
    }

    pub fn is_total_model(&self, total: &HtInterpretation) -> bool {
        !self.inconsistent
            && self
                .formulas
                .iter()
                .all(|f| satisfies(&self.domain, total, World::There, f))
    }

    /// A coherent model strictly below the total model `total`, if any.
    pub fn smaller_model(&self, total: &HtInterpretation) -> Option<HtInterpretation> {
        search::find_countermodel(self, total)
    }

    pub fn close(&self, interp: &HtInterpretation) -> HtInterpretation {
        coherence_closure(&self.domain, interp, self.roots.iter())
    }
}

/// Outcome of checking one candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumCheck {
    pub is_model: bool,
    /// A strictly smaller coherent model, when one exists.
    pub countermodel: Option<HtInterpretation>,
}

impl EquilibriumCheck {
    pub fn holds(&self) -> bool {
        self.is_model && self.countermodel.is_none()
    }
}

/// Decides whether the total interpretation ⟨σ, T⟩ is an equilibrium model.
/// Comprehension values in `candidate` are ignored and recomputed.
pub fn check_equilibrium(
    theory: &Theory,
    bounds: &DomainBounds,
    candidate: &HtInterpretation,
) -> Result<EquilibriumCheck> {
    if !candidate.is_total() {
        return Err(Error::Unsupported(
            "equilibrium checks need a total interpretation".into(),
        ));
    }
    let problem = Problem::new(theory, bounds)?;
    let total = problem.total(&candidate.sigma_t, &candidate.atoms_t);
    if !problem.is_total_model(&total) {
        return Ok(EquilibriumCheck {
            is_model: false,
            countermodel: None,
        });
    }
    Ok(EquilibriumCheck {
        is_model: true,
        countermodel: problem.smaller_model(&total),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn atom(p: &str, args: &[i64]) -> Atom {
        Atom::new(p, args.iter().map(|&n| Value::Int(n)).collect())
    }

    fn one_formula(src: &str) -> Formula {
        parse_program(src).unwrap().formulas.remove(0)
    }

    #[test]
    fn implication_checks_both_worlds_at_here() {
        let d = Domain::new([Value::Int(0)], 0, 0);
        let f = one_formula("q :- p.");
        let mut i = HtInterpretation {
            atoms_t: [Atom::new("p", vec![]), Atom::new("q", vec![])].into(),
            ..Default::default()
        };
        assert!(satisfies(&d, &i, World::Here, &f));
        assert!(satisfies(&d, &i, World::There, &f));
        i.atoms_t = [Atom::new("p", vec![])].into();
        // Double negation only looks at the there-world.
        assert!(satisfies(&d, &i, World::Here, &one_formula("not not p.")));
        assert!(!satisfies(&d, &i, World::Here, &one_formula("p.")));
        assert!(!satisfies(&d, &i, World::Here, &f));
    }

    #[test]
    fn negation_is_decided_at_there() {
        let d = Domain::new([Value::Int(0)], 0, 0);
        let f = one_formula(":- p.");
        let mut i = HtInterpretation {
            atoms_t: [Atom::new("p", vec![])].into(),
            ..Default::default()
        };
        assert!(!satisfies(&d, &i, World::Here, &f));
        i.atoms_t.clear();
        assert!(satisfies(&d, &i, World::Here, &f));
    }

    #[test]
    fn equality_needs_definedness() {
        let d = Domain::new((0..=2).map(Value::Int), 0, 2);
        let i = HtInterpretation::default();
        assert!(satisfies_static(&d, &one_formula("1 + 1 = 2.")));
        assert!(!satisfies_static(&d, &one_formula("3 / 2 = 3 / 2.")));
        assert!(!satisfies_static(&d, &one_formula("2 + 1 = 2 + 1.")));
        let _ = i;
    }

    #[test]
    fn example_candidate_with_extra_atoms_is_rejected() {
        let src = "r(1). r(2). q(1).\n\
                   q(2) :- Z = {X : r(X)}, p(Z).\n\
                   p(Y) :- Y = {X : q(X)}.";
        let th = parse_program(src).unwrap();
        let bounds = DomainBounds::with_ints(1, 2);
        let set = |xs: &[i64]| Value::set(xs.iter().map(|&n| Value::Int(n))).unwrap();
        let mut atoms: AtomSet = [atom("q", &[1]), atom("r", &[1]), atom("r", &[2])].into();
        atoms.insert(Atom::new("p", vec![set(&[1])]));
        let good = HtInterpretation::total(Assignment::default(), atoms.clone());
        assert!(check_equilibrium(&th, &bounds, &good).unwrap().holds());

        let mut bad_atoms: AtomSet = [atom("q", &[1]), atom("q", &[2]), atom("r", &[1]), atom("r", &[2])].into();
        bad_atoms.insert(Atom::new("p", vec![set(&[1, 2])]));
        let bad = HtInterpretation::total(Assignment::default(), bad_atoms);
        let check = check_equilibrium(&th, &bounds, &bad).unwrap();
        assert!(check.is_model);
        let cm = check.countermodel.expect("a smaller model");
        let expected_h: AtomSet = [atom("q", &[1]), atom("r", &[1]), atom("r", &[2])].into();
        assert_eq!(cm.atoms_h, expected_h);
    }
}
