//! Over-approximation of the atoms an equilibrium model can contain.
//!
//! Every equilibrium model ⟨σ, T⟩ satisfies T ⊆ U for the set U computed
//! here. U is the least set closed under: for every ground formula, the
//! atoms in strictly positive positions (not under an implication whose
//! antecedent cannot be true given U) are in U, and so are the atoms in
//! the bodies of comprehensions that occur in those positions.
//!
//! Soundness: let T be an equilibrium model and H = T ∩ U. Closing
//! ⟨σ, H, T⟩ gives a coherent interpretation below the total one. Every
//! formula keeps its here-truth on the parts that matter: antecedents only
//! lose truth at the here-world, and every atom a positive position needs
//! (directly or through a comprehension it evaluates) lies in U. So the
//! smaller interpretation is a model, and minimality forces H = T.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use crate::builtins::{self, Aggregate};
use crate::domain::{Atom, AtomSet, Domain, Value};
use crate::error::{Error, Result};
use crate::syntax::{Formula, IntSet, Name, Term};

use super::Problem;

/// Largest value set tracked before giving up and answering "anything".
const VALUE_LIMIT: usize = 4096;
/// Largest candidate-member count for which comprehension values are
/// enumerated as subsets.
const SUBSET_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Poss {
    Any,
    Vals(BTreeSet<Value>),
}

impl Poss {
    fn one(v: Value) -> Poss {
        Poss::Vals(BTreeSet::from([v]))
    }

    fn vals(set: BTreeSet<Value>) -> Poss {
        if set.len() > VALUE_LIMIT {
            Poss::Any
        } else {
            Poss::Vals(set)
        }
    }
}

struct Index {
    by_pred: BTreeMap<(Name, usize), BTreeSet<Vec<Value>>>,
}

impl Index {
    fn new(atoms: &AtomSet) -> Index {
        let mut by_pred: BTreeMap<(Name, usize), BTreeSet<Vec<Value>>> = BTreeMap::new();
        for a in atoms {
            by_pred
                .entry((a.pred.clone(), a.args.len()))
                .or_default()
                .insert(a.args.clone());
        }
        Index { by_pred }
    }
}

struct Analyzer<'a> {
    domain: &'a Domain,
    ranges: BTreeMap<Name, BTreeSet<Value>>,
    index: Index,
    cap: usize,
    /// Comprehension possibilities for the current U.
    memo: RefCell<BTreeMap<IntSet, Poss>>,
    /// Function keys of each declared function.
    keys_of: &'a BTreeMap<Name, Vec<FunctionKey>>,
    /// Function keys read in positive positions.
    keys: RefCell<BTreeSet<FunctionKey>>,
}

type FunctionKey = (Name, Vec<Value>);

/// Atoms and function keys that can be true or defined in an equilibrium
/// model. A function key outside `keys` is undefined in every equilibrium
/// model: the same argument as for atoms applies to function values read
/// in positive positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relevant {
    pub atoms: AtomSet,
    pub keys: BTreeSet<FunctionKey>,
}

/// Computes U for the problem. See the module documentation.
pub fn upper_bound(problem: &Problem) -> Result<AtomSet> {
    Ok(relevant(problem)?.atoms)
}

pub fn relevant(problem: &Problem) -> Result<Relevant> {
    let mut ranges: BTreeMap<Name, BTreeSet<Value>> = BTreeMap::new();
    let mut keys_of: BTreeMap<Name, Vec<FunctionKey>> = BTreeMap::new();
    for (key, range) in &problem.function_keys {
        ranges
            .entry(key.0.clone())
            .or_default()
            .extend(range.iter().cloned());
        keys_of.entry(key.0.clone()).or_default().push(key.clone());
    }
    let mut u = AtomSet::new();
    loop {
        let an = Analyzer {
            domain: &problem.domain,
            ranges: ranges.clone(),
            index: Index::new(&u),
            cap: problem.bounds.cap,
            memo: RefCell::new(BTreeMap::new()),
            keys_of: &keys_of,
            keys: RefCell::new(BTreeSet::new()),
        };
        let mut added = Vec::new();
        for f in &problem.formulas {
            an.walk(f, &mut added)?;
        }
        let before = u.len();
        u.extend(added);
        if u.len() > problem.bounds.cap {
            return Err(Error::Explosion {
                bound: "relevant atoms".into(),
                size: u.len() as u128,
                cap: problem.bounds.cap,
            });
        }
        if u.len() == before {
            return Ok(Relevant {
                atoms: u,
                keys: an.keys.into_inner(),
            });
        }
    }
}

impl Analyzer<'_> {
    fn term(&self, t: &Term) -> Poss {
        match t {
            Term::Int(n) => Poss::one(Value::Int(*n)),
            Term::Val(v) => Poss::one(v.clone()),
            Term::Var(_) => Poss::Any,
            Term::Cons(f, args) => self.combine(args, |vals| Some(Value::Cons(f.clone(), vals))),
            Term::Func(f, args) => {
                if let (Some(agg), 1) = (Aggregate::from_name(f), args.len()) {
                    match self.term(&args[0]) {
                        Poss::Any => Poss::Any,
                        Poss::Vals(sets) => Poss::vals(
                            sets.iter()
                                .filter_map(|s| {
                                    self.domain.clamp(builtins::aggregate_eval(agg, s))
                                })
                                .collect(),
                        ),
                    }
                } else {
                    match self.ranges.get(f) {
                        Some(r) => Poss::vals(r.clone()),
                        None => Poss::Vals(BTreeSet::new()),
                    }
                }
            }
            Term::ExtSet(items) => {
                let flat: Vec<Term> = items.iter().flatten().cloned().collect();
                let width = items.first().map_or(0, Vec::len);
                self.combine(&flat, |vals| {
                    let members = vals.chunks(width.max(1)).map(|c| Value::element(c.to_vec()));
                    Value::set(members)
                })
            }
            Term::IntSet(s) => self.int_set(s),
            Term::Arith(op, l, r) => self.combine(&[(**l).clone(), (**r).clone()], |v| {
                self.domain.clamp(builtins::arith(*op, &v[0], &v[1]))
            }),
            Term::SetOp(op, l, r) => self.combine(&[(**l).clone(), (**r).clone()], |v| {
                builtins::set_op(*op, &v[0], &v[1])
            }),
        }
    }

    /// Applies `f` to every combination of possible argument values.
    fn combine(&self, args: &[Term], f: impl Fn(Vec<Value>) -> Option<Value>) -> Poss {
        let mut combos: Vec<Vec<Value>> = vec![Vec::new()];
        for a in args {
            match self.term(a) {
                Poss::Any => return Poss::Any,
                Poss::Vals(vs) => {
                    if combos.len() * vs.len() > VALUE_LIMIT {
                        return Poss::Any;
                    }
                    combos = combos
                        .into_iter()
                        .flat_map(|c| {
                            vs.iter().map(move |v| {
                                let mut c = c.clone();
                                c.push(v.clone());
                                c
                            })
                        })
                        .collect();
                }
            }
        }
        Poss::vals(combos.into_iter().filter_map(f).collect())
    }

    fn int_set(&self, s: &IntSet) -> Poss {
        if let Some(p) = self.memo.borrow().get(s) {
            return p.clone();
        }
        let p = self.int_set_uncached(s);
        self.memo.borrow_mut().insert(s.clone(), p.clone());
        p
    }

    fn int_set_uncached(&self, s: &IntSet) -> Poss {
        let mut candidates: BTreeSet<Value> = BTreeSet::new();
        for c in self.domain.tuples(s.bound.len()) {
            let (head, body) = s.instance(&c);
            if !self.possible(&body) {
                continue;
            }
            match self.combine(&head, |vals| Some(Value::element(vals))) {
                Poss::Any => return Poss::Any,
                Poss::Vals(vs) => candidates.extend(vs),
            }
            if candidates.len() > SUBSET_LIMIT {
                return Poss::Any;
            }
        }
        let items: Vec<Value> = candidates.into_iter().collect();
        let mut out = BTreeSet::new();
        for mask in 0u32..(1u32 << items.len()) {
            let chosen = items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| v.clone());
            if let Some(v) = Value::set(chosen) {
                out.insert(v);
            }
        }
        Poss::vals(out)
    }

    /// Could `f` be true in some interpretation whose atoms lie in U?
    fn possible(&self, f: &Formula) -> bool {
        match f {
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Pred(p, args) => {
                let Some(tuples) = self.index.by_pred.get(&(p.clone(), args.len())) else {
                    return false;
                };
                let poss: Vec<Poss> = args.iter().map(|a| self.term(a)).collect();
                tuples.iter().any(|tuple| {
                    tuple.iter().zip(&poss).all(|(v, p)| match p {
                        Poss::Any => true,
                        Poss::Vals(vs) => vs.contains(v),
                    })
                })
            }
            Formula::Eq(l, r) => match (self.term(l), self.term(r)) {
                (Poss::Vals(a), Poss::Vals(b)) => a.intersection(&b).next().is_some(),
                _ => true,
            },
            Formula::Cmp(op, l, r) => match (self.term(l), self.term(r)) {
                (Poss::Vals(a), Poss::Vals(b)) => {
                    if a.len() * b.len() > VALUE_LIMIT {
                        return true;
                    }
                    a.iter().any(|x| b.iter().any(|y| builtins::compare(*op, x, y)))
                }
                _ => true,
            },
            Formula::Member(elems, s) => {
                let tuple = self.combine(elems, |vals| Some(Value::element(vals)));
                match (tuple, self.term(s)) {
                    (Poss::Vals(es), Poss::Vals(ss)) => ss.iter().any(|set| {
                        set.as_set()
                            .is_some_and(|m| es.iter().any(|e| m.contains(e)))
                    }),
                    _ => true,
                }
            }
            Formula::And(a, b) => self.possible(a) && self.possible(b),
            Formula::Or(a, b) => self.possible(a) || self.possible(b),
            Formula::Implies(..) | Formula::Forall(..) | Formula::Exists(..) => true,
        }
    }

    /// Records the function keys any subterm of `t` can read.
    fn keys_in(&self, t: &Term) {
        t.visit(&mut |s| {
            let Term::Func(f, args) = s else { return };
            let Some(all) = self.keys_of.get(f) else { return };
            let exact: Option<Vec<Value>> = args
                .iter()
                .map(|a| {
                    if a.is_closed() && a.is_static() {
                        crate::interp::eval_static(self.domain, a)
                    } else {
                        None
                    }
                })
                .collect();
            let mut keys = self.keys.borrow_mut();
            match exact {
                Some(vals) => {
                    let key = (f.clone(), vals);
                    if all.contains(&key) {
                        keys.insert(key);
                    }
                }
                _ => keys.extend(all.iter().cloned()),
            }
        });
    }

    fn walk(&self, f: &Formula, out: &mut Vec<Atom>) -> Result<()> {
        f.for_each_direct_term(&mut |t| self.keys_in(t));
        match f {
            Formula::Top | Formula::Bot => Ok(()),
            Formula::Pred(p, args) => {
                for a in args {
                    self.sets_in(a, out)?;
                }
                let mut combos: Vec<Vec<Value>> = vec![Vec::new()];
                for a in args {
                    let vals: Vec<Value> = match self.term(a) {
                        Poss::Any => self.domain.values().to_vec(),
                        Poss::Vals(vs) => vs.into_iter().collect(),
                    };
                    let size = combos.len() * vals.len();
                    if size > self.cap {
                        return Err(Error::Explosion {
                            bound: format!("possible instances of `{p}`"),
                            size: size as u128,
                            cap: self.cap,
                        });
                    }
                    combos = combos
                        .into_iter()
                        .flat_map(|c| {
                            vals.iter().map(move |v| {
                                let mut c = c.clone();
                                c.push(v.clone());
                                c
                            })
                        })
                        .collect();
                }
                out.extend(combos.into_iter().map(|args| Atom {
                    pred: p.clone(),
                    args,
                }));
                Ok(())
            }
            Formula::Eq(l, r) | Formula::Cmp(_, l, r) => {
                self.sets_in(l, out)?;
                self.sets_in(r, out)
            }
            Formula::Member(elems, s) => {
                for e in elems {
                    self.sets_in(e, out)?;
                }
                self.sets_in(s, out)
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.walk(a, out)?;
                self.walk(b, out)
            }
            Formula::Implies(a, b) => {
                if self.possible(a) {
                    self.walk(b, out)?;
                }
                Ok(())
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => self.walk(body, out),
        }
    }

    /// Adds every atom that can appear in the body of a comprehension
    /// occurring in `t`, at any nesting depth.
    fn sets_in(&self, t: &Term, out: &mut Vec<Atom>) -> Result<()> {
        let mut sets = Vec::new();
        t.collect_immediate(&mut sets);
        for s in sets {
            for c in self.domain.tuples(s.bound.len()) {
                let (head, body) = s.instance(&c);
                for h in &head {
                    self.sets_in(h, out)?;
                }
                self.all_atoms(&body, out)?;
            }
        }
        Ok(())
    }

    fn all_atoms(&self, f: &Formula, out: &mut Vec<Atom>) -> Result<()> {
        match f {
            Formula::Pred(..) => self.walk(f, out),
            Formula::Eq(..) | Formula::Cmp(..) | Formula::Member(..) => self.walk(f, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.all_atoms(a, out)?;
                self.all_atoms(b, out)
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => self.all_atoms(body, out),
            Formula::Top | Formula::Bot => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainBounds;
    use crate::syntax::parse_program;

    fn bound_of(src: &str, lo: i64, hi: i64) -> AtomSet {
        let th = parse_program(src).unwrap();
        let p = Problem::new(&th, &DomainBounds::with_ints(lo, hi)).unwrap();
        upper_bound(&p).unwrap()
    }

    #[test]
    fn heads_of_rules_with_possible_bodies() {
        let u = bound_of("p(1). q(X) :- p(X). r(X) :- s(X).", 0, 2);
        let shown: Vec<String> = u.iter().map(|a| a.to_string()).collect();
        assert_eq!(shown, vec!["p(1)", "q(1)"]);
    }

    #[test]
    fn negative_bodies_do_not_block() {
        let u = bound_of("a :- not b. b :- not a.", 0, 0);
        assert_eq!(u.len(), 2);
    }

    #[test]
    fn aggregate_bodies_are_checked() {
        let u = bound_of("p(a). p(b) :- count{X : p(X)} >= 5.", 0, 3);
        let shown: Vec<String> = u.iter().map(|a| a.to_string()).collect();
        assert_eq!(shown, vec!["p(a)"]);
    }
}
