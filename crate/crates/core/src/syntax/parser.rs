//! Recursive-descent parser with backtracking.
//!
//! Applications are parsed as constructor terms first and reclassified as
//! evaluable functions once all `#function` declarations are known.

use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{describe, tokenize, Tok, Token};
use super::{ArithOp, CmpOp, Formula, IntSet, Name, SetOp, Signature, Term, Theory};
use crate::builtins::Aggregate;
use crate::domain::Value;
use crate::error::{Error, Result};

/// One surface statement before desugaring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    /// `head :- body.`, `:- body.` or a fact.
    Rule {
        head: Option<Formula>,
        body: Option<Formula>,
    },
    /// `f(args) := value :- body.`
    Assign {
        target: Term,
        value: Term,
        body: Option<Formula>,
    },
    /// `#function f/n : {v1; ...; vk}.`
    Function {
        name: Name,
        arity: usize,
        range: Option<Vec<Value>>,
    },
}

/// Translates a statement into an open formula; directives yield `None`.
///
/// An assignment `f(a) := t :- B` becomes `(B, t = t) -> f(a) = t`; the
/// `t = t` conjunct makes the rule fire only when `t` is defined.
pub fn expand_sugar(stmt: &Statement) -> Option<Formula> {
    match stmt {
        Statement::Rule { head, body } => Some(match (head, body) {
            (Some(h), None) => h.clone(),
            (Some(h), Some(b)) => Formula::implies(b.clone(), h.clone()),
            (None, Some(b)) => Formula::not(b.clone()),
            (None, None) => Formula::Top,
        }),
        Statement::Assign {
            target,
            value,
            body,
        } => {
            let defined = Formula::Eq(value.clone(), value.clone());
            let cond = match body {
                Some(b) => Formula::and(b.clone(), defined),
                None => defined,
            };
            Some(Formula::implies(
                cond,
                Formula::Eq(target.clone(), value.clone()),
            ))
        }
        Statement::Function { .. } => None,
    }
}

/// Parses a single statement (including its final `.`).
pub fn parse_statement(src: &str) -> Result<Statement> {
    let mut p = Parser::new(tokenize(src)?);
    let stmt = p.statement()?;
    p.expect(Tok::Eof)?;
    Ok(stmt)
}

/// Parses a whole program into a closed theory.
pub fn parse_program(src: &str) -> Result<Theory> {
    let mut p = Parser::new(tokenize(src)?);
    let mut statements = Vec::new();
    while p.peek() != &Tok::Eof {
        statements.push(p.statement()?);
    }
    build_theory(&statements)
}

fn build_theory(statements: &[Statement]) -> Result<Theory> {
    let mut sig = Signature::default();
    for stmt in statements {
        if let Statement::Function { name, arity, range } = stmt {
            if Aggregate::from_name(name).is_some() && *arity == 1 {
                return Err(Error::SymbolClash(
                    name.to_string(),
                    "an aggregate",
                    "a declared function",
                ));
            }
            let key = (name.clone(), *arity);
            match range {
                Some(values) => {
                    sig.functions.insert(key, values.clone());
                }
                None => {
                    sig.undeclared_ranges.insert(key);
                }
            }
        }
    }
    let declared: BTreeMap<Name, usize> = sig
        .functions
        .keys()
        .chain(sig.undeclared_ranges.iter())
        .map(|(n, a)| (n.clone(), *a))
        .collect();

    let mut formulas = Vec::new();
    for stmt in statements {
        let Some(open) = expand_sugar(stmt) else {
            continue;
        };
        let resolved = resolve_formula(&open, &declared)?;
        if let Statement::Assign { target, .. } = stmt {
            let target = resolve_term(target, &declared)?;
            if !matches!(target, Term::Func(ref n, _) if Aggregate::from_name(n).is_none()) {
                let name = match &target {
                    Term::Cons(n, _) => n.to_string(),
                    other => format!("{other:?}"),
                };
                return Err(Error::Undeclared(format!(
                    "{name} (assignment target must be a declared #function)"
                )));
            }
        }
        let vars = resolved.free_vars();
        formulas.push(Formula::forall(&vars, resolved));
    }
    collect_signature(&formulas, &mut sig)?;
    Ok(Theory {
        signature: sig,
        formulas,
    })
}

fn resolve_term(t: &Term, declared: &BTreeMap<Name, usize>) -> Result<Term> {
    Ok(match t {
        Term::Cons(name, args) => {
            let args = args
                .iter()
                .map(|a| resolve_term(a, declared))
                .collect::<Result<Vec<_>>>()?;
            if let Some(&arity) = declared.get(name) {
                if arity != args.len() {
                    return Err(Error::Arity {
                        name: name.to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                Term::Func(name.clone(), args)
            } else if args.len() == 1 && Aggregate::from_name(name).is_some() {
                Term::Func(name.clone(), args)
            } else {
                Term::Cons(name.clone(), args)
            }
        }
        Term::Func(name, args) => Term::Func(
            name.clone(),
            args.iter()
                .map(|a| resolve_term(a, declared))
                .collect::<Result<_>>()?,
        ),
        Term::ExtSet(items) => Term::ExtSet(
            items
                .iter()
                .map(|tuple| tuple.iter().map(|a| resolve_term(a, declared)).collect())
                .collect::<Result<_>>()?,
        ),
        Term::IntSet(s) => Term::IntSet(Box::new(IntSet {
            bound: s.bound.clone(),
            head: s
                .head
                .iter()
                .map(|a| resolve_term(a, declared))
                .collect::<Result<_>>()?,
            body: resolve_formula(&s.body, declared)?,
        })),
        Term::Arith(op, l, r) => Term::Arith(
            *op,
            Box::new(resolve_term(l, declared)?),
            Box::new(resolve_term(r, declared)?),
        ),
        Term::SetOp(op, l, r) => Term::SetOp(
            *op,
            Box::new(resolve_term(l, declared)?),
            Box::new(resolve_term(r, declared)?),
        ),
        Term::Var(_) | Term::Int(_) | Term::Val(_) => t.clone(),
    })
}

fn resolve_formula(f: &Formula, declared: &BTreeMap<Name, usize>) -> Result<Formula> {
    let rt = |t: &Term| resolve_term(t, declared);
    Ok(match f {
        Formula::Bot | Formula::Top => f.clone(),
        Formula::Pred(p, args) => {
            Formula::Pred(p.clone(), args.iter().map(rt).collect::<Result<_>>()?)
        }
        Formula::Eq(l, r) => Formula::Eq(rt(l)?, rt(r)?),
        Formula::Cmp(op, l, r) => Formula::Cmp(*op, rt(l)?, rt(r)?),
        Formula::Member(elems, s) => {
            Formula::Member(elems.iter().map(rt).collect::<Result<_>>()?, rt(s)?)
        }
        Formula::And(a, b) => {
            Formula::and(resolve_formula(a, declared)?, resolve_formula(b, declared)?)
        }
        Formula::Or(a, b) => {
            Formula::or(resolve_formula(a, declared)?, resolve_formula(b, declared)?)
        }
        Formula::Implies(a, b) => {
            Formula::implies(resolve_formula(a, declared)?, resolve_formula(b, declared)?)
        }
        Formula::Forall(x, b) => Formula::Forall(x.clone(), Box::new(resolve_formula(b, declared)?)),
        Formula::Exists(x, b) => Formula::Exists(x.clone(), Box::new(resolve_formula(b, declared)?)),
    })
}

fn collect_signature(formulas: &[Formula], sig: &mut Signature) -> Result<()> {
    let mut preds: BTreeSet<(Name, usize)> = BTreeSet::new();
    let mut cons: BTreeSet<(Name, usize)> = BTreeSet::new();
    let mut aggs: BTreeSet<Name> = BTreeSet::new();
    let mut ints = sig
        .functions
        .values()
        .flatten()
        .any(|v| matches!(v, Value::Int(_)));
    for range in sig.functions.values() {
        for v in range {
            collect_value_cons(v, &mut cons);
        }
    }
    for f in formulas {
        f.visit(&mut |g| match g {
            Formula::Pred(p, args) => {
                preds.insert((p.clone(), args.len()));
            }
            Formula::Cmp(op, _, _) if *op != CmpOp::Ne => ints = true,
            _ => {}
        });
        f.visit_terms(&mut |t| match t {
            Term::Cons(name, args) => {
                cons.insert((name.clone(), args.len()));
            }
            Term::Int(_) | Term::Arith(..) => ints = true,
            Term::Val(v) => {
                collect_value_cons(v, &mut cons);
                if matches!(v, Value::Int(_)) {
                    ints = true;
                }
            }
            Term::Func(name, args) if args.len() == 1 && Aggregate::from_name(name).is_some() => {
                aggs.insert(name.clone());
                ints = true;
            }
            _ => {}
        });
    }
    let funcs: BTreeSet<(Name, usize)> = sig
        .functions
        .keys()
        .chain(sig.undeclared_ranges.iter())
        .cloned()
        .collect();
    for key in &preds {
        if cons.contains(key) {
            return Err(Error::SymbolClash(key.0.to_string(), "a predicate", "a constructor"));
        }
        if funcs.iter().any(|(n, _)| *n == key.0) {
            return Err(Error::SymbolClash(
                key.0.to_string(),
                "a predicate",
                "a declared function",
            ));
        }
        if key.1 == 1 && Aggregate::from_name(&key.0).is_some() {
            return Err(Error::SymbolClash(key.0.to_string(), "a predicate", "an aggregate"));
        }
    }
    for key in &cons {
        if funcs.iter().any(|(n, _)| *n == key.0) {
            return Err(Error::SymbolClash(
                key.0.to_string(),
                "a constructor",
                "a declared function",
            ));
        }
    }
    sig.predicates = preds;
    sig.constructors = cons;
    sig.aggregates = aggs;
    sig.uses_integers = ints;
    Ok(())
}

fn collect_value_cons(v: &Value, out: &mut BTreeSet<(Name, usize)>) {
    match v {
        Value::Int(_) => {}
        Value::Cons(name, args) => {
            out.insert((name.clone(), args.len()));
            args.iter().for_each(|a| collect_value_cons(a, out));
        }
        Value::Tuple(items) => items.iter().for_each(|a| collect_value_cons(a, out)),
        Value::Set(items) => items.iter().for_each(|a| collect_value_cons(a, out)),
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let tok = &self.toks[self.pos];
        Err(Error::Syntax {
            line: tok.line,
            col: tok.col,
            msg: msg.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        self.error(format!("expected {wanted}, found {}", describe(self.peek())))
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(&describe(&t))
        }
    }

    /// Runs `f`, rewinding on failure.
    fn attempt<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let saved = self.pos;
        let r = f(self);
        if r.is_err() {
            self.pos = saved;
        }
        r
    }

    fn statement(&mut self) -> Result<Statement> {
        if let Tok::Directive(d) = self.peek() {
            if d == "function" {
                return self.function_directive();
            }
        }
        if self.eat(&Tok::If) {
            let body = self.formula()?;
            self.expect(Tok::Dot)?;
            return Ok(Statement::Rule {
                head: None,
                body: Some(body),
            });
        }
        let assign = self.attempt(|p| {
            let target = p.term()?;
            p.expect(Tok::Assign)?;
            Ok(target)
        });
        if let Ok(target) = assign {
            let value = self.term()?;
            let body = if self.eat(&Tok::If) {
                Some(self.formula()?)
            } else {
                None
            };
            self.expect(Tok::Dot)?;
            return Ok(Statement::Assign {
                target,
                value,
                body,
            });
        }
        let head = self.formula()?;
        let body = if self.eat(&Tok::If) {
            Some(self.formula()?)
        } else {
            None
        };
        if self.peek() != &Tok::Dot {
            return self.unexpected("`.`, `:-` or a connective");
        }
        self.bump();
        Ok(Statement::Rule {
            head: Some(head),
            body,
        })
    }

    fn function_directive(&mut self) -> Result<Statement> {
        self.bump();
        let name = match self.bump() {
            Tok::Ident(n) => Name::from(n.as_str()),
            _ => {
                self.pos -= 1;
                return self.unexpected("a function name");
            }
        };
        self.expect(Tok::Slash)?;
        let arity = match self.bump() {
            Tok::Int(n) => n as usize,
            _ => {
                self.pos -= 1;
                return self.unexpected("an arity");
            }
        };
        let range = if self.eat(&Tok::Colon) {
            self.expect(Tok::LBrace)?;
            let mut values = Vec::new();
            if !self.eat(&Tok::RBrace) {
                loop {
                    let t = self.term()?;
                    match term_to_value(&t) {
                        Some(v) => values.push(v),
                        None => return self.error("function ranges must list ground values"),
                    }
                    if self.eat(&Tok::RBrace) {
                        break;
                    }
                    if !self.eat(&Tok::Semi) && !self.eat(&Tok::Comma) {
                        return self.unexpected("`;` or `}`");
                    }
                }
            }
            values.sort();
            values.dedup();
            Some(values)
        } else {
            None
        };
        self.expect(Tok::Dot)?;
        Ok(Statement::Function { name, arity, range })
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Semi) {
            let g = self.conjunction()?;
            f = Formula::or(f, g);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Comma) {
            let g = self.unary()?;
            f = Formula::and(f, g);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Directive(d) if d == "true" => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Directive(d) if d == "false" => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Directive(d) if d == "forall" || d == "exists" => {
                self.bump();
                let x = match self.bump() {
                    Tok::Var(x) => Name::from(x.as_str()),
                    _ => {
                        self.pos -= 1;
                        return self.unexpected("a variable");
                    }
                };
                let body = self.unary()?;
                Ok(if d == "forall" {
                    Formula::Forall(x, Box::new(body))
                } else {
                    Formula::Exists(x, Box::new(body))
                })
            }
            Tok::LParen => {
                let first = self.attempt(|p| p.atomic());
                match first {
                    Ok(f) => Ok(f),
                    Err(atomic_err) => {
                        let nested = self.attempt(|p| {
                            p.bump();
                            let f = p.formula()?;
                            p.expect(Tok::RParen)?;
                            Ok(f)
                        });
                        nested.map_err(|e| furthest(e, atomic_err))
                    }
                }
            }
            _ => self.atomic(),
        }
    }

    fn atomic(&mut self) -> Result<Formula> {
        let lhs = self.tuple_or_term()?;
        let op = self.peek().clone();
        if op == Tok::In {
            self.bump();
            let s = self.term()?;
            return Ok(Formula::Member(lhs, s));
        }
        let single = |p: &Self, mut v: Vec<Term>| -> Result<Term> {
            if v.len() == 1 {
                Ok(v.pop().unwrap())
            } else {
                p.error("a tuple can only appear in a set or before `in`")
            }
        };
        let cmp = match op {
            Tok::Eq => None,
            Tok::Ne => Some(CmpOp::Ne),
            Tok::Lt => Some(CmpOp::Lt),
            Tok::Le => Some(CmpOp::Le),
            Tok::Gt => Some(CmpOp::Gt),
            Tok::Ge => Some(CmpOp::Ge),
            _ => {
                let t = single(self, lhs)?;
                return match t {
                    Term::Cons(name, args) => Ok(Formula::Pred(name, args)),
                    _ => self.unexpected("a comparison operator"),
                };
            }
        };
        let l = single(self, lhs)?;
        self.bump();
        let r = self.term()?;
        Ok(match cmp {
            None => Formula::Eq(l, r),
            Some(op) => Formula::Cmp(op, l, r),
        })
    }

    /// Either a term or a parenthesized tuple of two or more terms.
    fn tuple_or_term(&mut self) -> Result<Vec<Term>> {
        if self.peek() == &Tok::LParen {
            let tuple = self.attempt(|p| {
                p.bump();
                let mut items = vec![p.term()?];
                while p.eat(&Tok::Comma) {
                    items.push(p.term()?);
                }
                p.expect(Tok::RParen)?;
                if items.len() < 2 {
                    return p.error("not a tuple");
                }
                Ok(items)
            });
            if let Ok(items) = tuple {
                return Ok(items);
            }
        }
        Ok(vec![self.term()?])
    }

    pub(crate) fn term(&mut self) -> Result<Term> {
        let mut t = self.arith()?;
        loop {
            let op = match self.peek() {
                Tok::Union => SetOp::Union,
                Tok::Inter => SetOp::Inter,
                Tok::Backslash => SetOp::Diff,
                _ => return Ok(t),
            };
            self.bump();
            let r = self.arith()?;
            t = Term::SetOp(op, Box::new(t), Box::new(r));
        }
    }

    fn arith(&mut self) -> Result<Term> {
        let mut t = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(t),
            };
            self.bump();
            let r = self.product()?;
            t = Term::Arith(op, Box::new(t), Box::new(r));
        }
    }

    fn product(&mut self) -> Result<Term> {
        let mut t = self.signed()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                _ => return Ok(t),
            };
            self.bump();
            let r = self.signed()?;
            t = Term::Arith(op, Box::new(t), Box::new(r));
        }
    }

    fn signed(&mut self) -> Result<Term> {
        if self.eat(&Tok::Minus) {
            if let Tok::Int(n) = *self.peek() {
                self.bump();
                return Ok(Term::Int(-n));
            }
            let t = self.signed()?;
            return Ok(Term::Arith(ArithOp::Sub, Box::new(Term::Int(0)), Box::new(t)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Term::Int(n))
            }
            Tok::Var(x) => {
                self.bump();
                Ok(Term::Var(Name::from(x.as_str())))
            }
            Tok::Ident(name) => {
                self.bump();
                let name = Name::from(name.as_str());
                match self.peek() {
                    Tok::LParen => {
                        let args = self.arguments()?;
                        Ok(Term::Cons(name, args))
                    }
                    Tok::LBrace if Aggregate::from_name(&name).is_some() => {
                        let s = self.set_term()?;
                        Ok(Term::Func(name, vec![s]))
                    }
                    _ => Ok(Term::Cons(name, Vec::new())),
                }
            }
            Tok::Directive(d) if Aggregate::from_name(&d).is_some() => {
                self.bump();
                let name = Name::from(d.as_str());
                let arg = match self.peek() {
                    Tok::LBrace => self.set_term()?,
                    Tok::LParen => {
                        self.bump();
                        let t = self.term()?;
                        self.expect(Tok::RParen)?;
                        t
                    }
                    _ => return self.unexpected("`{` or `(` after an aggregate"),
                };
                Ok(Term::Func(name, vec![arg]))
            }
            Tok::LBrace => self.set_term(),
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => self.unexpected("a term"),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            if !self.eat(&Tok::Comma) {
                return self.unexpected("`,` or `)`");
            }
        }
    }

    fn set_term(&mut self) -> Result<Term> {
        self.expect(Tok::LBrace)?;
        if self.eat(&Tok::RBrace) {
            return Ok(Term::ExtSet(Vec::new()));
        }
        let three = self.attempt(|p| p.three_part());
        let three_err = match three {
            Ok(t) => return Ok(t),
            Err(e) => e,
        };
        let two = self.attempt(|p| p.two_part());
        let two_err = match two {
            Ok(t) => return Ok(t),
            Err(e) => e,
        };
        let ext = self.attempt(|p| p.extensional());
        ext.map_err(|e| furthest(furthest(e, two_err), three_err))
    }

    /// `{X, Y : head : body}` with the opening brace consumed.
    fn three_part(&mut self) -> Result<Term> {
        let mut bound: Vec<Name> = Vec::new();
        if self.peek() != &Tok::Colon {
            loop {
                match self.bump() {
                    Tok::Var(x) => {
                        let x = Name::from(x.as_str());
                        if bound.contains(&x) {
                            return Err(Error::DuplicateBound(x.to_string()));
                        }
                        bound.push(x);
                    }
                    _ => {
                        self.pos -= 1;
                        return self.unexpected("a variable");
                    }
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::Colon)?;
        let head = self.set_head()?;
        self.expect(Tok::Colon)?;
        let body = self.formula()?;
        self.expect(Tok::RBrace)?;
        Ok(Term::IntSet(Box::new(IntSet { bound, head, body })))
    }

    /// `{head : body}`: every variable of the head is bound.
    fn two_part(&mut self) -> Result<Term> {
        let head = self.set_head()?;
        self.expect(Tok::Colon)?;
        let body = self.formula()?;
        self.expect(Tok::RBrace)?;
        let bound = IntSet::implicit_bound(&head);
        Ok(Term::IntSet(Box::new(IntSet { bound, head, body })))
    }

    fn set_head(&mut self) -> Result<Vec<Term>> {
        let first = self.tuple_or_term()?;
        if first.len() > 1 {
            return Ok(first);
        }
        let mut items = first;
        while self.eat(&Tok::Comma) {
            items.push(self.term()?);
        }
        Ok(items)
    }

    fn extensional(&mut self) -> Result<Term> {
        let mut items = Vec::new();
        loop {
            let tuple = self.tuple_or_term()?;
            if let Some(first) = items.first() {
                let first: &Vec<Term> = first;
                if first.len() != tuple.len() {
                    return self.error("members of a set must all have the same arity");
                }
            }
            items.push(tuple);
            if self.eat(&Tok::RBrace) {
                return Ok(Term::ExtSet(items));
            }
            if !self.eat(&Tok::Comma) && !self.eat(&Tok::Semi) {
                return self.unexpected("`,`, `;` or `}`");
            }
        }
    }
}

/// Keeps whichever syntax error happened later in the input.
fn furthest(a: Error, b: Error) -> Error {
    match (&a, &b) {
        (Error::Syntax { line: la, col: ca, .. }, Error::Syntax { line: lb, col: cb, .. }) => {
            if (lb, cb) > (la, ca) {
                b
            } else {
                a
            }
        }
        (Error::Syntax { .. }, _) => b,
        _ => a,
    }
}

fn term_to_value(t: &Term) -> Option<Value> {
    match t {
        Term::Int(n) => Some(Value::Int(*n)),
        Term::Val(v) => Some(v.clone()),
        Term::Cons(name, args) => Some(Value::Cons(
            name.clone(),
            args.iter().map(term_to_value).collect::<Option<_>>()?,
        )),
        Term::ExtSet(items) => Value::set(
            items
                .iter()
                .map(|tuple| {
                    tuple
                        .iter()
                        .map(term_to_value)
                        .collect::<Option<Vec<_>>>()
                        .map(Value::element)
                })
                .collect::<Option<Vec<_>>>()?,
        ),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(x: &str) -> Term {
        Term::var(x)
    }

    fn pred(p: &str, args: Vec<Term>) -> Formula {
        Formula::Pred(Name::from(p), args)
    }

    #[test]
    fn rule_becomes_closed_implication() {
        let th = parse_program("p(X) :- q(X), not r(X).").unwrap();
        let expected = Formula::forall(
            &[Name::from("X")],
            Formula::implies(
                Formula::and(pred("q", vec![var("X")]), Formula::not(pred("r", vec![var("X")]))),
                pred("p", vec![var("X")]),
            ),
        );
        assert_eq!(th.formulas, vec![expected]);
    }

    #[test]
    fn constraint_and_fact() {
        let th = parse_program(":- p(a). q.").unwrap();
        assert_eq!(
            th.formulas,
            vec![
                Formula::not(pred("p", vec![Term::constant("a")])),
                pred("q", vec![])
            ]
        );
    }

    #[test]
    fn two_and_three_part_sets() {
        let th = parse_program("p({X : q(X)}). r({X, Y : (X, Y) : s(X, Y)}). t({ : a : u}).")
            .unwrap();
        let sets: Vec<IntSet> = th
            .formulas
            .iter()
            .map(|f| match f {
                Formula::Pred(_, args) => match &args[0] {
                    Term::IntSet(s) => (**s).clone(),
                    other => panic!("{other:?}"),
                },
                other => panic!("{other:?}"),
            })
            .collect();
        assert_eq!(sets[0].bound, vec![Name::from("X")]);
        assert_eq!(sets[1].bound, vec![Name::from("X"), Name::from("Y")]);
        assert_eq!(sets[1].head.len(), 2);
        assert!(sets[2].bound.is_empty());
    }

    #[test]
    fn aggregate_spellings_agree() {
        let a = parse_program("p :- count{X : q(X)} >= 1.").unwrap();
        let b = parse_program("p :- #count{X : q(X)} >= 1.").unwrap();
        let c = parse_program("p :- count({X : q(X)}) >= 1.").unwrap();
        assert_eq!(a.formulas, b.formulas);
        assert_eq!(a.formulas, c.formulas);
        assert!(a.signature.aggregates.contains("count"));
    }

    #[test]
    fn extensional_sets_accept_both_separators() {
        let a = parse_program("p({1, 2}).").unwrap();
        let b = parse_program("p({1; 2}).").unwrap();
        assert_eq!(a.formulas, b.formulas);
    }

    #[test]
    fn declared_functions_are_reclassified() {
        let th = parse_program("#function f/1 : {1; 2}. p(X) :- f(X) = 1, q(X).").unwrap();
        let mut found = false;
        th.formulas[0].visit_terms(&mut |t| {
            if let Term::Func(name, _) = t {
                found |= &**name == "f";
            }
        });
        assert!(found);
        assert_eq!(
            th.signature.functions.get(&(Name::from("f"), 1)),
            Some(&vec![Value::Int(1), Value::Int(2)])
        );
    }

    #[test]
    fn assignment_sugar() {
        let stmt = parse_statement("f(a) := 3 :- q.").unwrap();
        let f = expand_sugar(&stmt).unwrap();
        let three = Term::Int(3);
        assert_eq!(
            f,
            Formula::implies(
                Formula::and(pred("q", vec![]), Formula::Eq(three.clone(), three.clone())),
                Formula::Eq(Term::Cons("f".into(), vec![Term::constant("a")]), three)
            )
        );
    }

    #[test]
    fn assignment_to_undeclared_function_is_rejected() {
        assert!(matches!(
            parse_program("f(a) := 3."),
            Err(Error::Undeclared(_))
        ));
    }

    #[test]
    fn duplicate_bound_variable() {
        assert!(matches!(
            parse_program("p({X, X : X : q(X)})."),
            Err(Error::DuplicateBound(_))
        ));
    }

    #[test]
    fn arity_mismatch_for_declared_function() {
        assert!(matches!(
            parse_program("#function f/1 : {1}. p :- f(1, 2) = 1."),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn symbol_clash() {
        assert!(matches!(
            parse_program("p(q). q."),
            Err(Error::SymbolClash(..))
        ));
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_program("p :- q\nr.") {
            Err(Error::Syntax { line: 2, col: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parenthesized_formulas_and_tuples() {
        let th = parse_program("p :- (q ; r), (X, Y) in S, (X + 1) = Y, s(S).").unwrap();
        assert_eq!(th.formulas.len(), 1);
        let th = parse_program("p :- not (q, r).").unwrap();
        assert_eq!(
            th.formulas[0],
            Formula::implies(
                Formula::not(Formula::and(pred("q", vec![]), pred("r", vec![]))),
                pred("p", vec![])
            )
        );
    }

    #[test]
    fn quantifiers() {
        let th = parse_program("p :- #forall X (q(X) -> r(X)).").unwrap();
        assert!(matches!(
            th.formulas[0],
            Formula::Implies(ref b, _) if matches!(**b, Formula::Forall(..))
        ));
    }

    #[test]
    fn negative_literals() {
        let th = parse_program("p(-3).").unwrap();
        assert_eq!(th.formulas[0], pred("p", vec![Term::Int(-3)]));
    }
}
