//! Ground values and the bounded universe they are drawn from.
//!
//! The universe of the logic is built in levels: level 0 holds Herbrand
//! terms and integers, and every further level adds the finite sets of
//! tuples over the previous one. Everything here is finitized by
//! [`DomainBounds`]; results are exact relative to those bounds only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{Formula, Name, Term, Theory};
use crate::syntax::Signature;

/// A canonical ground datum.
///
/// Undefinedness is never a `Value`: partial results are `Option<Value>`
/// with `None` playing the role of the undefined mark, so a value can
/// never contain it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Cons(Name, Vec<Value>),
    /// Only ever appears as a member of a [`Value::Set`], with arity >= 2.
    Tuple(Vec<Value>),
    /// All members share one arity. Arity-1 members are stored bare.
    Set(BTreeSet<Value>),
}

impl Value {
    pub fn constant(name: &str) -> Value {
        Value::Cons(Name::from(name), Vec::new())
    }

    /// Builds a set element from a tuple, unwrapping arity-1 tuples.
    pub fn element(mut tuple: Vec<Value>) -> Value {
        if tuple.len() == 1 {
            tuple.pop().unwrap()
        } else {
            Value::Tuple(tuple)
        }
    }

    /// Arity of this value seen as a set element.
    pub fn elem_arity(&self) -> usize {
        match self {
            Value::Tuple(items) => items.len(),
            _ => 1,
        }
    }

    /// Builds a set, failing when the members disagree on arity.
    pub fn set<I: IntoIterator<Item = Value>>(elems: I) -> Option<Value> {
        let members: BTreeSet<Value> = elems.into_iter().collect();
        let mut arities = members.iter().map(Value::elem_arity);
        if let Some(first) = arities.next() {
            if arities.any(|a| a != first) {
                return None;
            }
        }
        Some(Value::Set(members))
    }

    pub fn empty_set() -> Value {
        Value::Set(BTreeSet::new())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&BTreeSet<Value>> {
        match self {
            Value::Set(s) => Some(s),
            _ => None,
        }
    }

    /// Arity shared by the members of a set; `None` for the empty set and
    /// for non-sets.
    pub fn set_arity(&self) -> Option<usize> {
        self.as_set()
            .and_then(|s| s.iter().next())
            .map(Value::elem_arity)
    }

    /// Nesting depth of sets: 0 for Herbrand terms and integers.
    pub fn set_rank(&self) -> usize {
        match self {
            Value::Int(_) => 0,
            Value::Cons(_, args) | Value::Tuple(args) => {
                args.iter().map(Value::set_rank).max().unwrap_or(0)
            }
            Value::Set(s) => 1 + s.iter().map(Value::set_rank).max().unwrap_or(0),
        }
    }

    /// Checks the structural invariants: flat tuples of arity >= 2 only
    /// inside sets, uniform member arity.
    pub fn is_canonical(&self) -> bool {
        self.canonical_at(false)
    }

    fn canonical_at(&self, in_set: bool) -> bool {
        match self {
            Value::Int(_) => true,
            Value::Cons(_, args) => args.iter().all(|a| a.canonical_at(false)),
            Value::Tuple(items) => {
                in_set
                    && items.len() >= 2
                    && items
                        .iter()
                        .all(|i| !matches!(i, Value::Tuple(_)) && i.canonical_at(false))
            }
            Value::Set(s) => {
                let mut ar = s.iter().map(Value::elem_arity);
                let uniform = match ar.next() {
                    Some(first) => ar.all(|a| a == first),
                    None => true,
                };
                uniform && s.iter().all(|m| m.canonical_at(true))
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Cons(name, args) => {
                write!(f, "{name}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    write_list(f, args)?;
                    write!(f, ")")?;
                }
                Ok(())
            }
            Value::Tuple(items) => {
                write!(f, "(")?;
                write_list(f, items)?;
                write!(f, ")")
            }
            Value::Set(items) => {
                write!(f, "{{")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Value]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

/// A ground predicate atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Name,
    pub args: Vec<Value>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Value>) -> Atom {
        Atom {
            pred: Name::from(pred),
            args,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            write_list(f, &self.args)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

pub type AtomSet = BTreeSet<Atom>;

/// Renders an atom set as `{a, b, c}` in canonical order.
pub fn show_atoms(atoms: &AtomSet) -> String {
    let items: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

/// Finitization of the universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainBounds {
    pub max_depth: u32,
    pub int_lo: i64,
    pub int_hi: i64,
    /// Levels of sets above level 0.
    pub max_set_rank: u32,
    pub max_set_card: usize,
    pub max_arity: usize,
    /// Quantify over the whole bounded universe instead of the active domain.
    pub full_domain: bool,
    /// Hard cap on the size of any constructed value collection.
    pub cap: usize,
}

impl Default for DomainBounds {
    fn default() -> Self {
        DomainBounds {
            max_depth: 2,
            int_lo: 0,
            int_hi: 10,
            max_set_rank: 1,
            max_set_card: 4,
            max_arity: 2,
            full_domain: false,
            cap: 200_000,
        }
    }
}

impl DomainBounds {
    pub fn with_ints(lo: i64, hi: i64) -> Self {
        DomainBounds {
            int_lo: lo,
            int_hi: hi,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.int_lo > self.int_hi {
            return Err(Error::Bounds(format!(
                "integer range [{}, {}] is empty",
                self.int_lo, self.int_hi
            )));
        }
        Ok(())
    }

    fn guard(&self, bound: &str, size: u128) -> Result<()> {
        if size > self.cap as u128 {
            return Err(Error::Explosion {
                bound: bound.to_string(),
                size,
                cap: self.cap,
            });
        }
        Ok(())
    }
}

/// The finite set quantifiers and set comprehensions range over, together
/// with the integer window arithmetic results must fall into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    values: Vec<Value>,
    int_lo: i64,
    int_hi: i64,
}

impl Domain {
    pub fn new<I: IntoIterator<Item = Value>>(values: I, int_lo: i64, int_hi: i64) -> Domain {
        let set: BTreeSet<Value> = values.into_iter().collect();
        Domain {
            values: set.into_iter().collect(),
            int_lo,
            int_hi,
        }
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.values.binary_search(v).is_ok()
    }

    pub fn int_range(&self) -> (i64, i64) {
        (self.int_lo, self.int_hi)
    }

    /// Integers computed by arithmetic or aggregates must land in the
    /// configured window; anything else is undefined.
    pub fn clamp(&self, v: Option<Value>) -> Option<Value> {
        match v {
            Some(Value::Int(n)) if n < self.int_lo || n > self.int_hi => None,
            other => other,
        }
    }

    /// Every tuple of `arity` values, in lexicographic order.
    pub fn tuples(&self, arity: usize) -> Tuples<'_> {
        Tuples::new(&self.values, arity)
    }
}

/// Odometer over `values^arity`.
pub struct Tuples<'a> {
    values: &'a [Value],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> Tuples<'a> {
    fn new(values: &'a [Value], arity: usize) -> Self {
        Tuples {
            values,
            idx: vec![0; arity],
            done: arity > 0 && values.is_empty(),
        }
    }
}

impl Iterator for Tuples<'_> {
    type Item = Vec<Value>;

    fn next(&mut self) -> Option<Vec<Value>> {
        if self.done {
            return None;
        }
        let out: Vec<Value> = self.idx.iter().map(|&i| self.values[i].clone()).collect();
        // advance
        let mut pos = self.idx.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < self.values.len() {
                break;
            }
            self.idx[pos] = 0;
        }
        Some(out)
    }
}

fn binomial_sum(n: u128, k_max: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for k in 0..=k_max as u128 {
        if k > n {
            break;
        }
        total = total.saturating_add(c);
        c = c.saturating_mul(n - k) / (k + 1);
    }
    total
}

/// Herbrand terms up to the depth bound, plus the integer window when the
/// signature uses integers.
fn level_zero(sig: &Signature, bounds: &DomainBounds) -> Result<BTreeSet<Value>> {
    let mut base: BTreeSet<Value> = sig
        .constructors
        .iter()
        .filter(|(_, arity)| *arity == 0)
        .map(|(name, _)| Value::Cons(name.clone(), Vec::new()))
        .collect();
    if sig.uses_integers {
        let span = (bounds.int_hi - bounds.int_lo) as u128 + 1;
        bounds.guard("--max-int", span)?;
        base.extend((bounds.int_lo..=bounds.int_hi).map(Value::Int));
    }
    let compound: Vec<&(Name, usize)> = sig
        .constructors
        .iter()
        .filter(|(_, arity)| *arity > 0)
        .collect();
    let mut current = base;
    for _ in 0..bounds.max_depth {
        if compound.is_empty() {
            break;
        }
        let layer: Vec<Value> = current.iter().cloned().collect();
        let mut next = current.clone();
        for (name, arity) in &compound {
            let count = (layer.len() as u128).saturating_pow(*arity as u32);
            bounds.guard("--max-depth", next.len() as u128 + count)?;
            for args in Tuples::new(&layer, *arity) {
                next.insert(Value::Cons(name.clone(), args));
            }
        }
        current = next;
    }
    Ok(current)
}

/// All sets of at most `max_card` members of the given arities over `base`.
fn sets_over(
    base: &[Value],
    arities: &BTreeSet<usize>,
    bounds: &DomainBounds,
    out: &mut BTreeSet<Value>,
) -> Result<()> {
    for &arity in arities {
        let elems: Vec<Value> = {
            let count = (base.len() as u128).saturating_pow(arity as u32);
            bounds.guard("--max-arity", count)?;
            Tuples::new(base, arity).map(Value::element).collect()
        };
        let total = binomial_sum(elems.len() as u128, bounds.max_set_card);
        bounds.guard("--max-set-card", out.len() as u128 + total)?;
        let mut chosen = Vec::new();
        subsets(&elems, 0, bounds.max_set_card, &mut chosen, out);
    }
    Ok(())
}

fn subsets(
    elems: &[Value],
    from: usize,
    room: usize,
    chosen: &mut Vec<Value>,
    out: &mut BTreeSet<Value>,
) {
    out.insert(Value::Set(chosen.iter().cloned().collect()));
    if room == 0 {
        return;
    }
    for i in from..elems.len() {
        chosen.push(elems[i].clone());
        subsets(elems, i + 1, room - 1, chosen, out);
        chosen.pop();
    }
}

/// Level `level` of the bounded universe.
pub fn build_domain_level(
    sig: &Signature,
    bounds: &DomainBounds,
    level: u32,
) -> Result<BTreeSet<Value>> {
    bounds.validate()?;
    if level > bounds.max_set_rank {
        return Err(Error::Bounds(format!(
            "level {level} exceeds --max-set-rank {}",
            bounds.max_set_rank
        )));
    }
    let mut current = level_zero(sig, bounds)?;
    let arities: BTreeSet<usize> = (1..=bounds.max_arity).collect();
    for _ in 0..level {
        let base: Vec<Value> = current.iter().cloned().collect();
        let mut next = current.clone();
        sets_over(&base, &arities, bounds, &mut next)?;
        current = next;
    }
    Ok(current)
}

/// The subset of the bounded universe used for grounding and comprehension.
///
/// Level 0, every extensional set written in the theory, and every declared
/// function range value are always included. When some variable is used in
/// a set position (compared with a set, passed to an aggregate or a set
/// operation, tested for membership in, or fed into a predicate argument
/// that elsewhere holds a set), the level-1 sets over level 0 with the
/// arities the theory uses are added as well.
pub fn build_active_domain(theory: &Theory, bounds: &DomainBounds) -> Result<Domain> {
    bounds.validate()?;
    let sig = &theory.signature;
    if bounds.full_domain {
        let all = build_domain_level(sig, bounds, bounds.max_set_rank)?;
        return Ok(Domain::new(all, bounds.int_lo, bounds.int_hi));
    }
    let mut values = level_zero(sig, bounds)?;
    let probe = Domain::new(Vec::new(), bounds.int_lo, bounds.int_hi);
    for f in &theory.formulas {
        collect_literal_sets(f, &probe, &mut values);
    }
    for range in sig.functions.values() {
        values.extend(range.iter().cloned());
    }
    if bounds.max_set_rank >= 1 {
        if let Some(arities) = set_sorted_arities(theory) {
            let arities: BTreeSet<usize> = arities
                .into_iter()
                .filter(|a| *a <= bounds.max_arity.max(1))
                .collect();
            let base: Vec<Value> = level_zero(sig, bounds)?.into_iter().collect();
            sets_over(&base, &arities, bounds, &mut values)?;
        }
    }
    bounds.guard("active domain", values.len() as u128)?;
    Ok(Domain::new(values, bounds.int_lo, bounds.int_hi))
}

fn collect_literal_sets(f: &Formula, probe: &Domain, out: &mut BTreeSet<Value>) {
    f.visit_terms(&mut |t| {
        if let Term::ExtSet(_) = t {
            if t.is_closed() && t.is_static() {
                if let Some(v) = crate::interp::eval_static(probe, t) {
                    out.insert(v);
                }
            }
        }
    });
}

/// Arities of set values the theory may quantify over, or `None` when no
/// variable ever sits in a set position.
pub fn set_sorted_arities(theory: &Theory) -> Option<BTreeSet<usize>> {
    let mut usage = SetUsage::default();
    for f in &theory.formulas {
        usage.scan_formula(f);
    }
    // Propagate through predicate argument positions until stable.
    loop {
        let before = (usage.vars.len(), usage.positions.len());
        for f in &theory.formulas {
            usage.propagate(f);
        }
        if (usage.vars.len(), usage.positions.len()) == before {
            break;
        }
    }
    if usage.vars.is_empty() {
        return None;
    }
    let mut arities = usage.arities;
    if arities.is_empty() {
        arities.insert(1);
    }
    Some(arities)
}

#[derive(Default)]
struct SetUsage {
    vars: BTreeSet<Name>,
    positions: BTreeSet<(Name, usize)>,
    arities: BTreeSet<usize>,
}

impl SetUsage {
    fn set_valued(&self, t: &Term) -> bool {
        match t {
            Term::ExtSet(_) | Term::IntSet(_) | Term::SetOp(..) => true,
            Term::Val(v) => v.as_set().is_some(),
            Term::Var(x) => self.vars.contains(x),
            _ => false,
        }
    }

    fn mark(&mut self, t: &Term) {
        if let Term::Var(x) = t {
            self.vars.insert(x.clone());
        }
    }

    fn scan_formula(&mut self, f: &Formula) {
        f.visit_terms(&mut |t| match t {
            Term::IntSet(s) => {
                self.arities.insert(s.head.len());
            }
            Term::ExtSet(items) => {
                if let Some(first) = items.first() {
                    self.arities.insert(first.len());
                }
            }
            _ => {}
        });
    }

    fn propagate(&mut self, f: &Formula) {
        let mut marks: Vec<Term> = Vec::new();
        let mut positions: Vec<(Name, usize)> = Vec::new();
        f.visit(&mut |g| match g {
            Formula::Eq(l, r) => {
                if self.set_valued(l) {
                    marks.push(r.clone());
                }
                if self.set_valued(r) {
                    marks.push(l.clone());
                }
            }
            Formula::Member(_, s) => marks.push(s.clone()),
            Formula::Pred(p, args) => {
                for (i, a) in args.iter().enumerate() {
                    if self.set_valued(a) {
                        positions.push((p.clone(), i));
                    }
                    if self.positions.contains(&(p.clone(), i)) {
                        marks.push(a.clone());
                    }
                }
            }
            _ => {}
        });
        f.visit_terms(&mut |t| match t {
            Term::SetOp(_, l, r) => {
                marks.push((**l).clone());
                marks.push((**r).clone());
            }
            Term::Func(name, args) if crate::builtins::Aggregate::from_name(name).is_some() => {
                marks.extend(args.iter().cloned());
            }
            _ => {}
        });
        for t in &marks {
            self.mark(t);
        }
        self.positions.extend(positions);
    }
}

/// Variables bound to domain values, keyed by name.
pub type Binding = BTreeMap<Name, Value>;

#[cfg(test)]
mod tests {
    use super::*;

    fn sig_with(constants: &[&str]) -> Signature {
        let mut sig = Signature::default();
        for c in constants {
            sig.constructors.insert((Name::from(*c), 0));
        }
        sig
    }

    #[test]
    fn singleton_level_zero() {
        let sig = sig_with(&["c"]);
        let bounds = DomainBounds {
            max_depth: 0,
            ..Default::default()
        };
        let d0 = build_domain_level(&sig, &bounds, 0).unwrap();
        assert_eq!(d0, BTreeSet::from([Value::constant("c")]));
    }

    #[test]
    fn level_one_has_sets_of_each_arity() {
        let sig = sig_with(&["c"]);
        let bounds = DomainBounds {
            max_depth: 0,
            max_arity: 3,
            ..Default::default()
        };
        let d1 = build_domain_level(&sig, &bounds, 1).unwrap();
        let c = Value::constant("c");
        assert!(d1.contains(&Value::empty_set()));
        assert!(d1.contains(&Value::set([c.clone()]).unwrap()));
        assert!(d1.contains(&Value::set([Value::Tuple(vec![c.clone(), c.clone()])]).unwrap()));
        assert!(d1.contains(
            &Value::set([Value::Tuple(vec![c.clone(), c.clone(), c.clone()])]).unwrap()
        ));
        // c, ∅, {c}, {(c,c)}, {(c,c,c)}
        assert_eq!(d1.len(), 5);
    }

    #[test]
    fn level_two_has_nested_sets() {
        let sig = sig_with(&["c"]);
        let bounds = DomainBounds {
            max_depth: 0,
            max_set_rank: 2,
            ..Default::default()
        };
        let d2 = build_domain_level(&sig, &bounds, 2).unwrap();
        let c = Value::constant("c");
        let sc = Value::set([c.clone()]).unwrap();
        let scc = Value::set([Value::Tuple(vec![c.clone(), c])]).unwrap();
        assert!(d2.contains(&Value::set([sc.clone()]).unwrap()));
        assert!(d2.contains(&Value::set([sc, scc]).unwrap()));
    }

    #[test]
    fn levels_are_nested() {
        let sig = sig_with(&["a", "b"]);
        let bounds = DomainBounds {
            max_set_rank: 2,
            max_set_card: 2,
            max_arity: 1,
            ..Default::default()
        };
        let d0 = build_domain_level(&sig, &bounds, 0).unwrap();
        let d1 = build_domain_level(&sig, &bounds, 1).unwrap();
        let d2 = build_domain_level(&sig, &bounds, 2).unwrap();
        assert!(d0.is_subset(&d1));
        assert!(d1.is_subset(&d2));
        assert!(d2.iter().all(Value::is_canonical));
    }

    #[test]
    fn explosion_guard_names_the_bound() {
        let sig = sig_with(&["a", "b", "c", "d"]);
        let bounds = DomainBounds {
            max_set_rank: 2,
            max_set_card: 6,
            cap: 1000,
            ..Default::default()
        };
        match build_domain_level(&sig, &bounds, 2) {
            Err(Error::Explosion { bound, .. }) => assert_eq!(bound, "--max-set-card"),
            other => panic!("expected explosion error, got {other:?}"),
        }
    }

    #[test]
    fn herbrand_depth() {
        let mut sig = sig_with(&["z"]);
        sig.constructors.insert((Name::from("s"), 1));
        let bounds = DomainBounds {
            max_depth: 2,
            max_set_rank: 0,
            ..Default::default()
        };
        let d0 = build_domain_level(&sig, &bounds, 0).unwrap();
        let z = Value::constant("z");
        let sz = Value::Cons("s".into(), vec![z.clone()]);
        let ssz = Value::Cons("s".into(), vec![sz.clone()]);
        assert_eq!(d0, BTreeSet::from([z, sz, ssz]));
    }

    #[test]
    fn set_construction_is_canonical() {
        let a = Value::set([Value::Int(3), Value::Int(1), Value::Int(3)]).unwrap();
        let b = Value::set([Value::Int(1), Value::Int(3)]).unwrap();
        assert_eq!(a, b);
        assert!(Value::set([Value::Int(1), Value::Tuple(vec![Value::Int(1), Value::Int(2)])])
            .is_none());
    }

    #[test]
    fn tuples_enumerates_cartesian_power() {
        let d = Domain::new([Value::Int(1), Value::Int(2)], 0, 5);
        assert_eq!(d.tuples(0).count(), 1);
        assert_eq!(d.tuples(2).count(), 4);
        let empty = Domain::new(Vec::new(), 0, 5);
        assert_eq!(empty.tuples(1).count(), 0);
        assert_eq!(empty.tuples(0).count(), 1);
    }

    #[test]
    fn binomial_sums() {
        assert_eq!(binomial_sum(4, 4), 16);
        assert_eq!(binomial_sum(4, 2), 11);
        assert_eq!(binomial_sum(0, 3), 1);
    }
}
