//! Terms, formulas and theories.

mod lexer;
mod parser;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::domain::Value;

pub use parser::{expand_sugar, parse_program, parse_statement, Statement};
pub use print::{print_formula, print_term, print_theory, statement as print_statement};

pub type Name = Arc<str>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetOp {
    Union,
    Inter,
    Diff,
}

/// Builtin comparisons other than equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Le,
    Ge,
    Lt,
    Gt,
    Ne,
}

impl CmpOp {
    /// The operator obtained by swapping the operands.
    pub fn flip(self) -> CmpOp {
        match self {
            CmpOp::Le => CmpOp::Ge,
            CmpOp::Ge => CmpOp::Le,
            CmpOp::Lt => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Lt,
            CmpOp::Ne => CmpOp::Ne,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Ne => "!=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Name),
    Int(i64),
    /// A ground value substituted for a variable.
    Val(Value),
    /// Herbrand constructor application; constants have no arguments.
    Cons(Name, Vec<Term>),
    /// Evaluable function application, including aggregates.
    Func(Name, Vec<Term>),
    /// Extensional set; every member tuple has the same length.
    ExtSet(Vec<Vec<Term>>),
    IntSet(Box<IntSet>),
    Arith(ArithOp, Box<Term>, Box<Term>),
    SetOp(SetOp, Box<Term>, Box<Term>),
}

/// `{ x1..xk : t1..tn : body }`. Members are the tuples `t1..tn` over all
/// bindings of the bound variables that make `body` true.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntSet {
    pub bound: Vec<Name>,
    pub head: Vec<Term>,
    pub body: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bot,
    Top,
    Pred(Name, Vec<Term>),
    Eq(Term, Term),
    Cmp(CmpOp, Term, Term),
    Member(Vec<Term>, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Name, Box<Formula>),
    Exists(Name, Box<Formula>),
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bot)
    }

    /// Left-nested conjunction; `Top` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `Bot` when empty.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bot)
    }

    pub fn forall(vars: &[Name], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::Forall(v.clone(), Box::new(acc)))
    }

    /// Splits off the leading universal quantifiers.
    pub fn universal_prefix(&self) -> (Vec<Name>, &Formula) {
        let mut vars = Vec::new();
        let mut cur = self;
        while let Formula::Forall(x, body) = cur {
            vars.push(x.clone());
            cur = body;
        }
        (vars, cur)
    }

    pub fn rank(&self) -> usize {
        let mut r = 0;
        self.for_each_direct_term(&mut |t| r = r.max(t.rank()));
        self.for_each_child(&mut |f| r = r.max(f.rank()));
        r
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn free_var_set(&self) -> BTreeSet<Name> {
        self.free_vars().into_iter().collect()
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        match self {
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                self.for_each_direct_term(&mut |t| t.collect_free(bound, out));
                self.for_each_child(&mut |f| f.collect_free(bound, out));
            }
        }
    }

    /// Replaces free occurrences of variables by values.
    pub fn subst(&self, binding: &BTreeMap<Name, Value>) -> Formula {
        if binding.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Bot | Formula::Top => self.clone(),
            Formula::Pred(p, args) => {
                Formula::Pred(p.clone(), args.iter().map(|t| t.subst(binding)).collect())
            }
            Formula::Eq(l, r) => Formula::Eq(l.subst(binding), r.subst(binding)),
            Formula::Cmp(op, l, r) => Formula::Cmp(*op, l.subst(binding), r.subst(binding)),
            Formula::Member(elems, s) => Formula::Member(
                elems.iter().map(|t| t.subst(binding)).collect(),
                s.subst(binding),
            ),
            Formula::And(a, b) => Formula::and(a.subst(binding), b.subst(binding)),
            Formula::Or(a, b) => Formula::or(a.subst(binding), b.subst(binding)),
            Formula::Implies(a, b) => Formula::implies(a.subst(binding), b.subst(binding)),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let inner = if binding.contains_key(x) {
                    let mut narrowed = binding.clone();
                    narrowed.remove(x);
                    body.subst(&narrowed)
                } else {
                    body.subst(binding)
                };
                match self {
                    Formula::Forall(..) => Formula::Forall(x.clone(), Box::new(inner)),
                    _ => Formula::Exists(x.clone(), Box::new(inner)),
                }
            }
        }
    }

    pub fn subst_one(&self, var: &Name, value: &Value) -> Formula {
        let mut b = BTreeMap::new();
        b.insert(var.clone(), value.clone());
        self.subst(&b)
    }

    /// Calls `f` on the terms sitting directly in this node (not in
    /// subformulas).
    pub fn for_each_direct_term<'a>(&'a self, f: &mut dyn FnMut(&'a Term)) {
        match self {
            Formula::Pred(_, args) => args.iter().for_each(f),
            Formula::Eq(l, r) | Formula::Cmp(_, l, r) => {
                f(l);
                f(r);
            }
            Formula::Member(elems, s) => {
                elems.iter().for_each(&mut *f);
                f(s);
            }
            _ => {}
        }
    }

    pub fn for_each_child<'a>(&'a self, f: &mut dyn FnMut(&'a Formula)) {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                f(a);
                f(b);
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => f(body),
            _ => {}
        }
    }

    /// Pre-order walk over every subformula, including those nested in set
    /// comprehensions.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Formula)) {
        f(self);
        self.for_each_direct_term(&mut |t| t.visit_formulas(f));
        self.for_each_child(&mut |g| g.visit(f));
    }

    /// Pre-order walk over every term, including those nested in set
    /// comprehensions.
    pub fn visit_terms<'a>(&'a self, f: &mut dyn FnMut(&'a Term)) {
        self.for_each_direct_term(&mut |t| t.visit(f));
        self.for_each_child(&mut |g| g.visit_terms(f));
    }

    /// Comprehensions occurring in this formula that are not nested in
    /// another comprehension.
    pub fn immediate_int_sets(&self) -> Vec<&IntSet> {
        let mut out = Vec::new();
        self.collect_immediate(&mut out);
        out
    }

    pub(crate) fn collect_immediate<'a>(&'a self, out: &mut Vec<&'a IntSet>) {
        self.for_each_direct_term(&mut |t| t.collect_immediate(out));
        self.for_each_child(&mut |g| g.collect_immediate(out));
    }

    /// True when the formula contains no quantifier and no comprehension,
    /// and every function application is a builtin over such terms.
    pub fn is_zero_formula(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |g| {
            if matches!(g, Formula::Forall(..) | Formula::Exists(..)) {
                ok = false;
            }
        });
        self.visit_terms(&mut |t| {
            if matches!(t, Term::IntSet(_)) {
                ok = false;
            }
        });
        ok
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Name::from(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::Cons(Name::from(name), Vec::new())
    }

    pub fn rank(&self) -> usize {
        match self {
            Term::IntSet(s) => {
                let head = s.head.iter().map(Term::rank).max().unwrap_or(0);
                head.max(s.body.rank() + 1)
            }
            _ => {
                let mut r = 0;
                self.for_each_child(&mut |t| r = r.max(t.rank()));
                r
            }
        }
    }

    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) && !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::IntSet(s) => {
                let depth = bound.len();
                bound.extend(s.bound.iter().cloned());
                for t in &s.head {
                    t.collect_free(bound, out);
                }
                s.body.collect_free(bound, out);
                bound.truncate(depth);
            }
            _ => self.for_each_child(&mut |t| t.collect_free(bound, out)),
        }
    }

    pub fn subst(&self, binding: &BTreeMap<Name, Value>) -> Term {
        if binding.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(x) => match binding.get(x) {
                Some(v) => Term::Val(v.clone()),
                None => self.clone(),
            },
            Term::Int(_) | Term::Val(_) => self.clone(),
            Term::Cons(f, args) => {
                Term::Cons(f.clone(), args.iter().map(|t| t.subst(binding)).collect())
            }
            Term::Func(f, args) => {
                Term::Func(f.clone(), args.iter().map(|t| t.subst(binding)).collect())
            }
            Term::ExtSet(items) => Term::ExtSet(
                items
                    .iter()
                    .map(|tuple| tuple.iter().map(|t| t.subst(binding)).collect())
                    .collect(),
            ),
            Term::IntSet(s) => {
                let shadowed = s.bound.iter().any(|x| binding.contains_key(x));
                let narrowed;
                let b = if shadowed {
                    let mut m = binding.clone();
                    for x in &s.bound {
                        m.remove(x);
                    }
                    narrowed = m;
                    &narrowed
                } else {
                    binding
                };
                Term::IntSet(Box::new(IntSet {
                    bound: s.bound.clone(),
                    head: s.head.iter().map(|t| t.subst(b)).collect(),
                    body: s.body.subst(b),
                }))
            }
            Term::Arith(op, l, r) => {
                Term::Arith(*op, Box::new(l.subst(binding)), Box::new(r.subst(binding)))
            }
            Term::SetOp(op, l, r) => {
                Term::SetOp(*op, Box::new(l.subst(binding)), Box::new(r.subst(binding)))
            }
        }
    }

    /// Direct subterms, not descending into comprehensions.
    pub fn for_each_child<'a>(&'a self, f: &mut dyn FnMut(&'a Term)) {
        match self {
            Term::Cons(_, args) | Term::Func(_, args) => args.iter().for_each(f),
            Term::ExtSet(items) => items.iter().flatten().for_each(f),
            Term::Arith(_, l, r) | Term::SetOp(_, l, r) => {
                f(l);
                f(r);
            }
            _ => {}
        }
    }

    /// Pre-order walk over this term and all terms nested in it, including
    /// those inside comprehension bodies.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Term)) {
        f(self);
        match self {
            Term::IntSet(s) => {
                s.head.iter().for_each(|t| t.visit(f));
                s.body.visit_terms(f);
            }
            _ => self.for_each_child(&mut |t| t.visit(f)),
        }
    }

    pub fn visit_formulas<'a>(&'a self, f: &mut dyn FnMut(&'a Formula)) {
        match self {
            Term::IntSet(s) => {
                s.head.iter().for_each(|t| t.visit_formulas(f));
                s.body.visit(f);
            }
            _ => self.for_each_child(&mut |t| t.visit_formulas(f)),
        }
    }

    pub(crate) fn collect_immediate<'a>(&'a self, out: &mut Vec<&'a IntSet>) {
        match self {
            Term::IntSet(s) => out.push(s),
            _ => self.for_each_child(&mut |t| t.collect_immediate(out)),
        }
    }

    /// Contains no comprehension and no declared (non-builtin) function, so
    /// its value does not depend on an interpretation.
    pub fn is_static(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |t| match t {
            Term::IntSet(_) => ok = false,
            Term::Func(name, _) if crate::builtins::Aggregate::from_name(name).is_none() => {
                ok = false
            }
            _ => {}
        });
        ok
    }

    pub fn is_aggregate(&self) -> bool {
        matches!(self, Term::Func(name, args)
            if args.len() == 1 && crate::builtins::Aggregate::from_name(name).is_some())
    }
}

impl IntSet {
    /// Element value for one binding of the bound variables, when the head
    /// is exactly the bound variables.
    pub fn head_is_bound_vars(&self) -> bool {
        self.head.len() == self.bound.len()
            && self
                .head
                .iter()
                .zip(&self.bound)
                .all(|(t, x)| matches!(t, Term::Var(y) if y == x))
    }

    /// The bound variables as a 2-part comprehension would bind them.
    pub fn implicit_bound(head: &[Term]) -> Vec<Name> {
        let mut out = Vec::new();
        for t in head {
            t.collect_free(&mut Vec::new(), &mut out);
        }
        out
    }

    /// Binds the bound variables to `vals` in head and body.
    pub fn instance(&self, vals: &[Value]) -> (Vec<Term>, Formula) {
        let binding: BTreeMap<Name, Value> =
            self.bound.iter().cloned().zip(vals.iter().cloned()).collect();
        (
            self.head.iter().map(|t| t.subst(&binding)).collect(),
            self.body.subst(&binding),
        )
    }
}

/// Symbols used by a theory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub constructors: BTreeSet<(Name, usize)>,
    /// Declared evaluable functions with their ranges.
    pub functions: BTreeMap<(Name, usize), Vec<Value>>,
    /// Evaluable functions declared without a range.
    pub undeclared_ranges: BTreeSet<(Name, usize)>,
    pub aggregates: BTreeSet<Name>,
    pub predicates: BTreeSet<(Name, usize)>,
    pub uses_integers: bool,
}

/// A finite set of closed formulas over a signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub signature: Signature,
    pub formulas: Vec<Formula>,
}

impl Theory {
    pub fn rank(&self) -> usize {
        self.formulas.iter().map(Formula::rank).max().unwrap_or(0)
    }

    pub fn is_function_declared(&self, name: &str, arity: usize) -> bool {
        self.signature
            .functions
            .contains_key(&(Name::from(name), arity))
            || self
                .signature
                .undeclared_ranges
                .contains(&(Name::from(name), arity))
    }
}
