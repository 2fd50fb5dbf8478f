//! Interpretations, term evaluation and coherence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::builtins::{self, Aggregate};
use crate::domain::{Atom, AtomSet, Domain, Value};
use crate::ht::satisfies;
use crate::syntax::{Formula, IntSet, Name, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum World {
    Here,
    There,
}

/// Values of evaluable terms at one world. Absent keys are undefined.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Assignment {
    /// Declared functions applied to ground arguments.
    pub facts: BTreeMap<(Name, Vec<Value>), Value>,
    /// Ground set comprehensions.
    pub sets: BTreeMap<IntSet, Value>,
}

impl Assignment {
    pub fn fact(&self, f: &str, args: &[Value]) -> Option<&Value> {
        self.facts.get(&(Name::from(f), args.to_vec()))
    }

    pub fn set_fact(&mut self, f: &str, args: Vec<Value>, v: Value) {
        self.facts.insert((Name::from(f), args), v);
    }

    /// `self` agrees with `other` wherever `self` is defined.
    pub fn leq(&self, other: &Assignment) -> bool {
        self.facts.iter().all(|(k, v)| other.facts.get(k) == Some(v))
            && self.sets.iter().all(|(k, v)| other.sets.get(k) == Some(v))
    }
}

/// ⟨σʰ, σᵗ, Iʰ, Iᵗ⟩ with Iʰ ⊆ Iᵗ and σʰ ≼ σᵗ.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct HtInterpretation {
    pub sigma_h: Assignment,
    pub sigma_t: Assignment,
    pub atoms_h: AtomSet,
    pub atoms_t: AtomSet,
}

impl HtInterpretation {
    pub fn total(sigma: Assignment, atoms: AtomSet) -> Self {
        HtInterpretation {
            sigma_h: sigma.clone(),
            sigma_t: sigma,
            atoms_h: atoms.clone(),
            atoms_t: atoms,
        }
    }

    pub fn is_total(&self) -> bool {
        self.atoms_h == self.atoms_t && self.sigma_h == self.sigma_t
    }

    pub fn is_well_formed(&self) -> bool {
        self.atoms_h.is_subset(&self.atoms_t) && self.sigma_h.leq(&self.sigma_t)
    }

    pub fn sigma(&self, w: World) -> &Assignment {
        match w {
            World::Here => &self.sigma_h,
            World::There => &self.sigma_t,
        }
    }

    pub fn atoms(&self, w: World) -> &AtomSet {
        match w {
            World::Here => &self.atoms_h,
            World::There => &self.atoms_t,
        }
    }

    /// `self` ≤ `other`: same there-world, smaller here-world.
    pub fn leq(&self, other: &HtInterpretation) -> bool {
        self.atoms_t == other.atoms_t
            && self.sigma_t == other.sigma_t
            && self.atoms_h.is_subset(&other.atoms_h)
            && self.sigma_h.leq(&other.sigma_h)
    }
}

impl fmt::Display for HtInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |atoms: &AtomSet| crate::domain::show_atoms(atoms);
        write!(f, "H = {}, T = {}", show(&self.atoms_h), show(&self.atoms_t))
    }
}

/// Value of a ground term at a world; `None` is undefined.
pub fn eval_term(domain: &Domain, interp: &HtInterpretation, w: World, t: &Term) -> Option<Value> {
    let sigma = interp.sigma(w);
    match t {
        Term::Var(_) => None,
        Term::Int(n) => Some(Value::Int(*n)),
        Term::Val(v) => Some(v.clone()),
        Term::Cons(f, args) => {
            let vals = eval_all(domain, interp, w, args)?;
            Some(Value::Cons(f.clone(), vals))
        }
        Term::Func(f, args) => {
            if let (Some(agg), 1) = (Aggregate::from_name(f), args.len()) {
                let s = eval_term(domain, interp, w, &args[0])?;
                return domain.clamp(builtins::aggregate_eval(agg, &s));
            }
            let vals = eval_all(domain, interp, w, args)?;
            sigma.facts.get(&(f.clone(), vals)).cloned()
        }
        Term::ExtSet(items) => {
            let mut members = Vec::with_capacity(items.len());
            for tuple in items {
                members.push(Value::element(eval_all(domain, interp, w, tuple)?));
            }
            Value::set(members)
        }
        Term::IntSet(s) => sigma.sets.get(&**s).cloned(),
        Term::Arith(op, l, r) => {
            let a = eval_term(domain, interp, w, l)?;
            let b = eval_term(domain, interp, w, r)?;
            domain.clamp(builtins::arith(*op, &a, &b))
        }
        Term::SetOp(op, l, r) => {
            let a = eval_term(domain, interp, w, l)?;
            let b = eval_term(domain, interp, w, r)?;
            builtins::set_op(*op, &a, &b)
        }
    }
}

pub fn eval_all(
    domain: &Domain,
    interp: &HtInterpretation,
    w: World,
    ts: &[Term],
) -> Option<Vec<Value>> {
    ts.iter().map(|t| eval_term(domain, interp, w, t)).collect()
}

/// Value of a term that mentions no comprehension and no declared function.
pub fn eval_static(domain: &Domain, t: &Term) -> Option<Value> {
    thread_local! {
        static EMPTY: HtInterpretation = HtInterpretation::default();
    }
    EMPTY.with(|e| eval_term(domain, e, World::There, t))
}

/// Ground atom denoted by a predicate application, if all arguments are
/// defined.
pub fn ground_atom(
    domain: &Domain,
    interp: &HtInterpretation,
    w: World,
    pred: &Name,
    args: &[Term],
) -> Option<Atom> {
    Some(Atom {
        pred: pred.clone(),
        args: eval_all(domain, interp, w, args)?,
    })
}

type Instance = (Vec<Term>, Formula);

fn instances(domain: &Domain, s: &IntSet) -> Vec<Instance> {
    domain.tuples(s.bound.len()).map(|c| s.instance(&c)).collect()
}

/// Extension of a ground comprehension at a world: the set of head values
/// over the bindings that satisfy the body, or undefined as soon as one of
/// those head values is.
pub fn ext(domain: &Domain, interp: &HtInterpretation, w: World, s: &IntSet) -> Option<Value> {
    ext_of(domain, interp, w, &instances(domain, s))
}

fn ext_of(
    domain: &Domain,
    interp: &HtInterpretation,
    w: World,
    insts: &[Instance],
) -> Option<Value> {
    let mut members = BTreeSet::new();
    for (head, body) in insts {
        if satisfies(domain, interp, w, body) {
            let tuple = eval_all(domain, interp, w, head)?;
            members.insert(Value::element(tuple));
        }
    }
    Value::set(members)
}

/// The coherent interpretation agreeing with `interp` on atoms and declared
/// functions whose comprehension values are induced from the roots (and
/// every comprehension nested in them), innermost first.
pub fn coherence_closure<'a, I>(domain: &Domain, interp: &HtInterpretation, roots: I) -> HtInterpretation
where
    I: IntoIterator<Item = &'a IntSet>,
{
    let mut out = interp.clone();
    out.sigma_h.sets.clear();
    out.sigma_t.sets.clear();
    let mut done = BTreeSet::new();
    for s in roots {
        close(domain, &mut out, &mut done, s);
    }
    out
}

/// Closes only the there-world, for total interpretations.
pub fn total_closure<'a, I>(domain: &Domain, interp: &HtInterpretation, roots: I) -> HtInterpretation
where
    I: IntoIterator<Item = &'a IntSet>,
{
    let mut out = interp.clone();
    out.sigma_t.sets.clear();
    out.sigma_h.sets.clear();
    let mut done = BTreeSet::new();
    for s in roots {
        close_there(domain, &mut out, &mut done, s);
    }
    out.sigma_h = out.sigma_t.clone();
    out
}

fn close(domain: &Domain, out: &mut HtInterpretation, done: &mut BTreeSet<IntSet>, s: &IntSet) {
    if done.contains(s) {
        return;
    }
    let insts = instances(domain, s);
    for (head, body) in &insts {
        for inner in nested_sets(head, body) {
            close(domain, out, done, inner);
        }
    }
    let vt = ext_of(domain, out, World::There, &insts);
    let vh = ext_of(domain, out, World::Here, &insts);
    if let Some(vt) = vt {
        if vh.as_ref() == Some(&vt) {
            out.sigma_h.sets.insert(s.clone(), vt.clone());
        }
        out.sigma_t.sets.insert(s.clone(), vt);
    }
    done.insert(s.clone());
}

fn close_there(
    domain: &Domain,
    out: &mut HtInterpretation,
    done: &mut BTreeSet<IntSet>,
    s: &IntSet,
) {
    if done.contains(s) {
        return;
    }
    let insts = instances(domain, s);
    for (head, body) in &insts {
        for inner in nested_sets(head, body) {
            close_there(domain, out, done, inner);
        }
    }
    if let Some(vt) = ext_of(domain, out, World::There, &insts) {
        out.sigma_t.sets.insert(s.clone(), vt);
    }
    done.insert(s.clone());
}

fn nested_sets<'a>(head: &'a [Term], body: &'a Formula) -> Vec<&'a IntSet> {
    let mut out = Vec::new();
    for t in head {
        t.collect_immediate(&mut out);
    }
    body.collect_immediate(&mut out);
    out
}

/// All comprehensions reachable from the roots, with their nested ones.
pub fn reachable_sets(domain: &Domain, roots: &[IntSet]) -> BTreeSet<IntSet> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<IntSet> = roots.to_vec();
    while let Some(s) = stack.pop() {
        if seen.contains(&s) {
            continue;
        }
        for (head, body) in instances(domain, &s) {
            for inner in nested_sets(&head, &body) {
                stack.push(inner.clone());
            }
        }
        seen.insert(s);
    }
    seen
}

/// Coherence relative to a set of roots: the comprehension values are
/// exactly those induced by the rest of the interpretation.
pub fn is_coherent(domain: &Domain, interp: &HtInterpretation, roots: &[IntSet]) -> bool {
    let keys: Vec<IntSet> = roots
        .iter()
        .cloned()
        .chain(interp.sigma_t.sets.keys().cloned())
        .chain(interp.sigma_h.sets.keys().cloned())
        .collect();
    let closed = coherence_closure(domain, interp, keys.iter());
    closed.sigma_h == interp.sigma_h && closed.sigma_t == interp.sigma_t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_program, Term};

    fn q(n: i64) -> Atom {
        Atom::new("q", vec![Value::Int(n)])
    }

    fn set_term(src: &str) -> IntSet {
        let th = parse_program(&format!("p({src}).")).unwrap();
        match &th.formulas[0] {
            Formula::Pred(_, args) => match &args[0] {
                Term::IntSet(s) => (**s).clone(),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    fn ints(xs: &[i64]) -> Value {
        Value::set(xs.iter().map(|&n| Value::Int(n))).unwrap()
    }

    #[test]
    fn closure_follows_both_worlds() {
        let d = Domain::new((0..=3).map(Value::Int), 0, 3);
        let s = set_term("{X : q(X)}");
        let mut i = HtInterpretation {
            atoms_t: [q(1), q(2)].into(),
            atoms_h: [q(1)].into(),
            ..Default::default()
        };
        let c = coherence_closure(&d, &i, [&s]);
        assert_eq!(c.sigma_t.sets.get(&s), Some(&ints(&[1, 2])));
        assert_eq!(c.sigma_h.sets.get(&s), None);
        i.atoms_h = i.atoms_t.clone();
        let c = coherence_closure(&d, &i, [&s]);
        assert_eq!(c.sigma_h.sets.get(&s), Some(&ints(&[1, 2])));
        assert!(is_coherent(&d, &c, &[s]));
    }

    #[test]
    fn undefined_member_poisons_the_set() {
        let d = Domain::new((0..=3).map(Value::Int), 0, 3);
        let i = HtInterpretation::total(Assignment::default(), [q(0), q(2)].into());
        let s2 = set_term("{X : 6 / X : q(X)}");
        let c = coherence_closure(&d, &i, [&s2]);
        assert_eq!(c.sigma_t.sets.get(&s2), None);
    }

    #[test]
    fn nested_sets_are_closed_first() {
        let d = Domain::new(
            (0..=2)
                .map(Value::Int)
                .chain([ints(&[]), ints(&[1]), ints(&[2]), ints(&[1, 2])]),
            0,
            2,
        );
        let s = set_term("{S : S = {X : q(X)}}");
        let i = HtInterpretation::total(Assignment::default(), [q(1)].into());
        let c = coherence_closure(&d, &i, [&s]);
        let inner = set_term("{X : q(X)}");
        assert_eq!(c.sigma_t.sets.get(&inner), Some(&ints(&[1])));
        assert_eq!(c.sigma_t.sets.get(&s), Some(&Value::set([ints(&[1])]).unwrap()));
    }

    #[test]
    fn evaluation_clamps_integers() {
        let d = Domain::new((0..=3).map(Value::Int), 0, 3);
        let i = HtInterpretation::default();
        let t = Term::Arith(
            crate::syntax::ArithOp::Add,
            Box::new(Term::Int(2)),
            Box::new(Term::Int(2)),
        );
        assert_eq!(eval_term(&d, &i, World::There, &t), None);
        assert_eq!(eval_term(&d, &i, World::There, &Term::Int(7)), Some(Value::Int(7)));
    }
}
