//! Enumeration of equilibrium models.
//!
//! Total models are enumerated by a depth-first search over the relevant
//! atoms and then the function keys that may be defined; each ground
//! formula is checked as soon as everything it can read has been decided. Every total model found is then tested for minimality
//! by looking for a strictly smaller coherent model.

use std::collections::{BTreeMap, BTreeSet};

use crate::domain::{Atom, AtomSet, DomainBounds, Value};
use crate::error::Result;
use crate::interp::{
    coherence_closure, eval_all, total_closure, Assignment, HtInterpretation, World,
};
use crate::syntax::{Formula, Name, Term, Theory};

use super::{relevant, satisfies, satisfies_static, FunctionKey, Problem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableModel {
    pub atoms: AtomSet,
    /// The total coherent interpretation witnessing the model.
    pub interpretation: HtInterpretation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub domain_size: usize,
    pub ground_formulas: usize,
    pub relevant_atoms: usize,
    /// Function keys that may be defined in some model.
    pub relevant_keys: usize,
    /// Total models found before the minimality test.
    pub total_models: u64,
    pub search_nodes: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StableModelReport {
    /// Sorted by atom set, then by function values.
    pub models: Vec<StableModel>,
    pub stats: SearchStats,
}

impl StableModelReport {
    pub fn atom_sets(&self) -> Vec<AtomSet> {
        self.models.iter().map(|m| m.atoms.clone()).collect()
    }
}

/// All equilibrium models of the theory within the bounds.
pub fn find_stable_models(theory: &Theory, bounds: &DomainBounds) -> Result<StableModelReport> {
    let problem = Problem::new(theory, bounds)?;
    solve(&problem)
}

pub(crate) fn solve(problem: &Problem) -> Result<StableModelReport> {
    let mut report = StableModelReport::default();
    report.stats.domain_size = problem.domain.len();
    report.stats.ground_formulas = problem.ground.formulas.len();
    if problem.inconsistent {
        return Ok(report);
    }
    let rel = relevant(problem)?;
    let u: Vec<Atom> = rel.atoms.into_iter().collect();
    report.stats.relevant_atoms = u.len();
    let mut keys: Vec<_> = problem
        .function_keys
        .iter()
        .filter(|(k, _)| rel.keys.contains(k))
        .cloned()
        .collect();
    // Smaller arguments first, so recursive definitions are checked early.
    keys.sort_by_key(|((_, args), _)| args.iter().map(value_size).sum::<usize>());
    report.stats.relevant_keys = keys.len();
    let buckets = watch_buckets(problem, &keys, &u);
    let mut found: BTreeMap<ModelKey, StableModel> = BTreeMap::new();
    let mut dfs = Dfs {
        problem,
        sigma: Assignment::default(),
        keys: &keys,
        u: &u,
        buckets: &buckets,
        found: &mut found,
        stats: &mut report.stats,
    };
    let mut t = AtomSet::new();
    if dfs.check_bucket(0, &t) {
        dfs.go(0, &mut t);
    }
    report.models = found.into_values().collect();
    Ok(report)
}

/// Groups formulas by the last decision they depend on. Decisions are the
/// relevant atoms, in order, followed by the function keys; bucket `d`
/// holds the formulas that can be checked once the first `d` decisions are
/// made.
fn watch_buckets(problem: &Problem, keys: &[FunctionKey], u: &[Atom]) -> Vec<Vec<usize>> {
    let nkeys = keys.len();
    let natoms = u.len();
    let mut by_pred: BTreeMap<(Name, usize), Vec<usize>> = BTreeMap::new();
    for (i, a) in u.iter().enumerate() {
        by_pred
            .entry((a.pred.clone(), a.args.len()))
            .or_default()
            .push(i);
    }
    let mut key_pos: BTreeMap<&(Name, Vec<Value>), usize> = BTreeMap::new();
    let mut by_fun: BTreeMap<(Name, usize), usize> = BTreeMap::new();
    for (i, (key, _)) in keys.iter().enumerate() {
        key_pos.insert(key, i);
        let last = by_fun.entry((key.0.clone(), key.1.len())).or_default();
        *last = (*last).max(i + 1);
    }
    let exact = |t: &Term| {
        if t.is_closed() && t.is_static() {
            crate::interp::eval_static(&problem.domain, t)
        } else {
            None
        }
    };
    let mut buckets = vec![Vec::new(); nkeys + u.len() + 1];
    for (fi, f) in problem.formulas.iter().enumerate() {
        let mut last: usize = 0;
        f.visit_terms(&mut |t| {
            if let Term::Func(name, args) = t {
                let Some(&fun_last) = by_fun.get(&(name.clone(), args.len())) else {
                    return;
                };
                let vals: Option<Vec<Value>> = args.iter().map(exact).collect();
                match vals {
                    Some(vals) => {
                        if let Some(&i) = key_pos.get(&(name.clone(), vals)) {
                            last = last.max(natoms + i + 1);
                        }
                    }
                    None => last = last.max(natoms + fun_last),
                }
            }
        });
        f.visit(&mut |g| {
            if let Formula::Pred(p, args) = g {
                let pattern: Vec<Option<Value>> = args.iter().map(exact).collect();
                let exact_args: Vec<bool> = args
                    .iter()
                    .map(|t| t.is_closed() && t.is_static())
                    .collect();
                if let Some(idxs) = by_pred.get(&(p.clone(), args.len())) {
                    for &i in idxs {
                        let matches = u[i].args.iter().enumerate().all(|(k, v)| {
                            !exact_args[k] || pattern[k].as_ref() == Some(v)
                        });
                        if matches {
                            last = last.max(i + 1);
                        }
                    }
                }
            }
        });
        buckets[last].push(fi);
    }
    buckets
}

fn value_size(v: &Value) -> usize {
    match v {
        Value::Int(_) => 1,
        Value::Cons(_, args) | Value::Tuple(args) => 1 + args.iter().map(value_size).sum::<usize>(),
        Value::Set(items) => 1 + items.iter().map(value_size).sum::<usize>(),
    }
}

/// Models are ordered by atom set, then by function values.
type ModelKey = (AtomSet, BTreeMap<(Name, Vec<Value>), Value>);

struct Dfs<'a> {
    problem: &'a Problem,
    /// Function values decided so far.
    sigma: Assignment,
    keys: &'a [FunctionKey],
    u: &'a [Atom],
    buckets: &'a [Vec<usize>],
    found: &'a mut BTreeMap<ModelKey, StableModel>,
    stats: &'a mut SearchStats,
}

impl Dfs<'_> {
    fn check_bucket(&self, b: usize, t: &AtomSet) -> bool {
        if self.buckets[b].is_empty() {
            return true;
        }
        let interp = self.problem.total(&self.sigma, t);
        self.buckets[b].iter().all(|&fi| {
            satisfies(&self.problem.domain, &interp, World::There, &self.problem.formulas[fi])
        })
    }

    fn go(&mut self, d: usize, t: &mut AtomSet) {
        self.stats.search_nodes += 1;
        if d < self.u.len() {
            let atom = &self.u[d];
            if self.check_bucket(d + 1, t) {
                self.go(d + 1, t);
            }
            t.insert(atom.clone());
            if self.check_bucket(d + 1, t) {
                self.go(d + 1, t);
            }
            t.remove(atom);
            return;
        }
        let k = d - self.u.len();
        if k == self.keys.len() {
            self.leaf(t);
            return;
        }
        let (key, range) = &self.keys[k];
        if self.check_bucket(d + 1, t) {
            self.go(d + 1, t);
        }
        for v in range {
            self.sigma.facts.insert(key.clone(), v.clone());
            if self.check_bucket(d + 1, t) {
                self.go(d + 1, t);
            }
        }
        self.sigma.facts.remove(key);
    }

    fn leaf(&mut self, t: &AtomSet) {
        self.stats.total_models += 1;
        let key = (t.clone(), self.sigma.facts.clone());
        if self.found.contains_key(&key) {
            return;
        }
        let total = self.problem.total(&self.sigma, t);
        if find_countermodel(self.problem, &total).is_none() {
            self.found.insert(
                key,
                StableModel {
                    atoms: t.clone(),
                    interpretation: total,
                },
            );
        }
    }
}

/// Atoms every coherent model below `total` must contain at the
/// here-world: facts, and heads of rules whose bodies are true at the
/// here-world whenever those atoms are.
fn forced_atoms(problem: &Problem, total: &HtInterpretation) -> AtomSet {
    let mut forced = AtomSet::new();
    loop {
        let before = forced.len();
        for f in &problem.formulas {
            let head = match f {
                Formula::Pred(..) => Some(f),
                Formula::Implies(b, h) if surely_here(problem, total, &forced, b) => Some(&**h),
                _ => None,
            };
            if let Some(Formula::Pred(p, args)) = head {
                if let Some(a) = static_atom(problem, p, args) {
                    forced.insert(a);
                }
            }
        }
        if forced.len() == before {
            return forced;
        }
    }
}

fn static_atom(problem: &Problem, p: &Name, args: &[Term]) -> Option<Atom> {
    if !args.iter().all(|t| t.is_closed() && t.is_static()) {
        return None;
    }
    let empty = HtInterpretation::default();
    Some(Atom {
        pred: p.clone(),
        args: eval_all(&problem.domain, &empty, World::There, args)?,
    })
}

/// `b` holds at the here-world of every coherent interpretation below
/// `total` whose here-atoms include `forced`.
fn surely_here(problem: &Problem, total: &HtInterpretation, forced: &AtomSet, b: &Formula) -> bool {
    match b {
        Formula::Top => true,
        Formula::Pred(p, args) => static_atom(problem, p, args).is_some_and(|a| forced.contains(&a)),
        Formula::And(x, y) => {
            surely_here(problem, total, forced, x) && surely_here(problem, total, forced, y)
        }
        // By persistence, a negation holds at here iff its argument fails at there.
        Formula::Implies(x, y) if **y == Formula::Bot => {
            let closed = total_closure(&problem.domain, total, x.immediate_int_sets());
            !satisfies(&problem.domain, &closed, World::There, x)
        }
        Formula::Eq(..) | Formula::Cmp(..) | Formula::Member(..) => {
            let mut static_only = true;
            b.for_each_direct_term(&mut |t| static_only &= t.is_closed() && t.is_static());
            static_only && satisfies_static(&problem.domain, b)
        }
        _ => false,
    }
}

/// Searches the here-worlds below a total model, smallest first.
pub(crate) fn find_countermodel(
    problem: &Problem,
    total: &HtInterpretation,
) -> Option<HtInterpretation> {
    let forced = forced_atoms(problem, total);
    let free: Vec<Atom> = total.atoms_t.difference(&forced).cloned().collect();
    let keys: Vec<(Name, Vec<crate::domain::Value>)> =
        total.sigma_t.facts.keys().cloned().collect();
    let n = free.len() + keys.len();
    if !forced.is_subset(&total.atoms_t) {
        // Cannot happen for a total model, but stay on the safe side.
        return None;
    }
    let mut base = HtInterpretation {
        sigma_h: Assignment::default(),
        sigma_t: Assignment {
            facts: total.sigma_t.facts.clone(),
            sets: BTreeMap::new(),
        },
        atoms_h: AtomSet::new(),
        atoms_t: total.atoms_t.clone(),
    };
    for size in 0..n {
        let mut chosen: Vec<usize> = Vec::new();
        if let Some(found) = combos(n, size, 0, &mut chosen, &mut |sel| {
            let set: BTreeSet<usize> = sel.iter().copied().collect();
            base.atoms_h = forced.clone();
            base.sigma_h.facts.clear();
            for &i in &set {
                if i < free.len() {
                    base.atoms_h.insert(free[i].clone());
                } else {
                    let k = &keys[i - free.len()];
                    base.sigma_h
                        .facts
                        .insert(k.clone(), total.sigma_t.facts[k].clone());
                }
            }
            let interp = coherence_closure(&problem.domain, &base, problem.roots.iter());
            let ok = problem
                .formulas
                .iter()
                .all(|f| satisfies(&problem.domain, &interp, World::Here, f));
            ok.then_some(interp)
        }) {
            return Some(found);
        }
    }
    None
}

fn combos<T>(
    n: usize,
    size: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    if chosen.len() == size {
        return f(chosen);
    }
    let need = size - chosen.len();
    for i in from..=n.saturating_sub(need) {
        if i >= n {
            break;
        }
        chosen.push(i);
        let r = combos(n, size, i + 1, chosen, f);
        chosen.pop();
        if r.is_some() {
            return r;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{show_atoms, Value};
    use crate::syntax::parse_program;

    fn models(src: &str, lo: i64, hi: i64) -> Vec<String> {
        let th = parse_program(src).unwrap();
        find_stable_models(&th, &DomainBounds::with_ints(lo, hi))
            .unwrap()
            .models
            .iter()
            .map(|m| show_atoms(&m.atoms))
            .collect()
    }

    #[test]
    fn even_loop_has_two_models() {
        assert_eq!(models("a :- not b. b :- not a.", 0, 0), vec!["{a}", "{b}"]);
    }

    #[test]
    fn positive_loop_is_unfounded() {
        assert_eq!(models("a :- b. b :- a.", 0, 0), vec!["{}"]);
    }

    #[test]
    fn constraint_kills_model() {
        assert!(models("a. :- a.", 0, 0).is_empty());
    }

    #[test]
    fn disjunction_is_minimal() {
        assert_eq!(models("a; b.", 0, 0), vec!["{a}", "{b}"]);
    }

    #[test]
    fn vicious_circle_is_rejected() {
        let src = "r(1). r(2). q(1).\n\
                   q(2) :- Z = {X : r(X)}, p(Z).\n\
                   p(Y) :- Y = {X : q(X)}.";
        assert_eq!(models(src, 1, 2), vec!["{p({1}), q(1), r(1), r(2)}"]);
    }

    #[test]
    fn self_supporting_count_has_no_model() {
        assert!(models("p(b). p(a) :- count{X : p(X)} >= 1.", 0, 3).is_empty());
    }

    #[test]
    fn declared_function_values_are_chosen() {
        let src = "#function f/0 : {1; 2}. f := 1 :- a. a.";
        let th = parse_program(src).unwrap();
        let r = find_stable_models(&th, &DomainBounds::with_ints(0, 2)).unwrap();
        assert_eq!(r.models.len(), 1);
        let sigma = &r.models[0].interpretation.sigma_t;
        assert_eq!(sigma.fact("f", &[]), Some(&Value::Int(1)));
    }

    #[test]
    fn combos_enumerate_by_size() {
        let mut seen = Vec::new();
        let _: Option<()> = combos(4, 2, 0, &mut Vec::new(), &mut |s| {
            seen.push(s.to_vec());
            None
        });
        assert_eq!(seen.len(), 6);
    }
}
