//! Recursive-descent parser. Every rejection, including model validation
//! failures, is a [`ParseError`] positioned at the offending token or at the
//! declaration of the offending node.

use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{tokenize, Tok, Token};
use super::{Expectation, ParseError, ScenarioDoc, Section};
use crate::assignment::Assignment;
use crate::expr::{BinOp, Expr, UnOp};
use crate::function::StructuralFunction;
use crate::model::{validate, Sfm, SfmParts};
use crate::value::{Domain, NodeId, Rational, Value, KEYWORDS};

/// Loads the text of an included file.
pub type Resolver<'a> = &'a dyn Fn(&str) -> Result<String, String>;

const MAX_DEPTH: usize = 256;

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
    resolver: Option<Resolver<'a>>,
}

type PResult<T> = Result<T, ParseError>;

fn at(tok: &Token, message: impl Into<String>) -> ParseError {
    ParseError::new(tok.line, tok.column, message)
}

impl<'a> Parser<'a> {
    fn new(text: &str, resolver: Option<Resolver<'a>>) -> PResult<Self> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            depth: 0,
            resolver,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        let mut e = at(t, format!("unexpected {}", t.tok.describe()));
        e.expected = expected.iter().map(|s| s.to_string()).collect();
        e
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> PResult<Token> {
        if &self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[&format!("`{}`", tok.symbol())]))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<Token> {
        if self.is_keyword(kw) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[&format!("`{kw}`")]))
        }
    }

    /// A non-keyword identifier.
    fn name(&mut self) -> PResult<(NodeId, Token)> {
        match &self.peek().tok {
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => Err(at(
                self.peek(),
                format!("keyword `{s}` cannot be used as a name"),
            )),
            Tok::Ident(s) => {
                let id = NodeId::new(s);
                Ok((id, self.bump()))
            }
            _ => Err(self.unexpected(&["a name"])),
        }
    }

    fn name_list(&mut self) -> PResult<Vec<(NodeId, Token)>> {
        self.expect(&Tok::LParen)?;
        let mut out: Vec<(NodeId, Token)> = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(out);
        }
        loop {
            let (id, tok) = self.name()?;
            if out.iter().any(|(n, _)| n == &id) {
                return Err(at(&tok, format!("`{id}` is listed twice")));
            }
            out.push((id, tok));
            if self.eat(&Tok::RParen) {
                return Ok(out);
            }
            if !self.eat(&Tok::Comma) {
                return Err(self.unexpected(&["`,`", "`)`"]));
            }
        }
    }

    fn value(&mut self) -> PResult<Value> {
        let t = self.bump();
        let negative = t.tok == Tok::Minus;
        let t = if negative { self.bump() } else { t };
        let v = match &t.tok {
            Tok::Int(n) => Value::Int(*n),
            Tok::Ratio(n, d) => Value::rational(Rational::new(*n, *d)),
            Tok::Ident(s) if s == "true" && !negative => Value::Bool(true),
            Tok::Ident(s) if s == "false" && !negative => Value::Bool(false),
            Tok::Ident(s) if !negative && !KEYWORDS.contains(&s.as_str()) => Value::symbol(s),
            Tok::Str(s) if !negative => Value::symbol(s),
            _ => {
                let mut e = at(&t, format!("expected a value, found {}", t.tok.describe()));
                e.expected = vec!["a number".into(), "a symbol".into()];
                return Err(e);
            }
        };
        Ok(if negative {
            match v {
                Value::Int(n) => Value::Int(-n),
                Value::Rational(r) => Value::rational(-r),
                other => other,
            }
        } else {
            v
        })
    }

    fn domain(&mut self) -> PResult<Domain> {
        if self.eat_keyword("real") {
            return Ok(Domain::Real);
        }
        self.expect(&Tok::LBrace)?;
        let mut vals: Vec<Value> = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(Domain::Finite(vals));
        }
        loop {
            let start = self.peek().clone();
            let v = self.value()?;
            if vals.contains(&v) {
                return Err(at(&start, format!("value {v} appears twice in the domain")));
            }
            vals.push(v);
            if self.eat(&Tok::RBrace) {
                return Ok(Domain::Finite(vals));
            }
            if !self.eat(&Tok::Comma) {
                return Err(self.unexpected(&["`,`", "`}`"]));
            }
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(at(
                self.peek(),
                format!("expression nests deeper than {MAX_DEPTH}"),
            ));
        }
        Ok(())
    }

    fn expr(&mut self, parents: &[NodeId]) -> PResult<Expr> {
        self.enter()?;
        let e = if self.eat_keyword("if") {
            let c = self.or_expr(parents)?;
            self.expect_keyword("then")?;
            let t = self.or_expr(parents)?;
            self.expect_keyword("else")?;
            let e = self.expr(parents)?;
            Expr::ite(c, t, e)
        } else {
            self.or_expr(parents)?
        };
        self.depth -= 1;
        Ok(e)
    }

    fn or_expr(&mut self, parents: &[NodeId]) -> PResult<Expr> {
        let mut l = self.and_expr(parents)?;
        while self.eat(&Tok::Pipe) {
            l = Expr::or(l, self.and_expr(parents)?);
        }
        Ok(l)
    }

    fn and_expr(&mut self, parents: &[NodeId]) -> PResult<Expr> {
        let mut l = self.cmp_expr(parents)?;
        while self.eat(&Tok::Amp) {
            l = Expr::and(l, self.cmp_expr(parents)?);
        }
        Ok(l)
    }

    fn cmp_op(&self) -> Option<BinOp> {
        Some(match self.peek().tok {
            Tok::EqEq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            _ => return None,
        })
    }

    fn cmp_expr(&mut self, parents: &[NodeId]) -> PResult<Expr> {
        let l = self.add_expr(parents)?;
        let Some(op) = self.cmp_op() else {
            return Ok(l);
        };
        self.bump();
        let r = self.add_expr(parents)?;
        if self.cmp_op().is_some() {
            return Err(at(self.peek(), "comparisons do not chain; add parentheses"));
        }
        Ok(Expr::bin(op, l, r))
    }

    fn add_expr(&mut self, parents: &[NodeId]) -> PResult<Expr> {
        let mut l = self.mul_expr(parents)?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(l),
            };
            self.bump();
            l = Expr::bin(op, l, self.mul_expr(parents)?);
        }
    }

    fn mul_expr(&mut self, parents: &[NodeId]) -> PResult<Expr> {
        let mut l = self.unary(parents)?;
        while self.eat(&Tok::Star) {
            l = Expr::bin(BinOp::Mul, l, self.unary(parents)?);
        }
        Ok(l)
    }

    fn unary(&mut self, parents: &[NodeId]) -> PResult<Expr> {
        self.enter()?;
        let e = match self.peek().tok {
            Tok::Bang => {
                self.bump();
                Expr::not(self.unary(parents)?)
            }
            Tok::Minus => {
                let literal = matches!(self.peek_at(1), Tok::Int(_) | Tok::Ratio(..))
                    && *self.peek_at(2) != Tok::Caret;
                if literal {
                    Expr::Lit(self.value()?)
                } else {
                    self.bump();
                    Expr::Unary(UnOp::Neg, Box::new(self.unary(parents)?))
                }
            }
            _ => self.pow(parents)?,
        };
        self.depth -= 1;
        Ok(e)
    }

    fn pow(&mut self, parents: &[NodeId]) -> PResult<Expr> {
        let base = self.primary(parents)?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => {
                let e =
                    u32::try_from(n).map_err(|_| at(&t, format!("exponent {n} is too large")))?;
                Ok(Expr::pow(base, e))
            }
            _ => Err(at(
                &t,
                format!("expected an integer exponent, found {}", t.tok.describe()),
            )),
        }
    }

    fn primary(&mut self, parents: &[NodeId]) -> PResult<Expr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(_) | Tok::Ratio(..) | Tok::Str(_) => Ok(Expr::Lit(self.value()?)),
            Tok::Ident(s) if s == "true" || s == "false" => Ok(Expr::Lit(self.value()?)),
            Tok::Ident(_) => {
                let (id, tok) = self.name()?;
                if !parents.contains(&id) {
                    return Err(at(&tok, format!("`{id}` is not a declared parent")));
                }
                Ok(Expr::Ref(id))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr(parents)?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected(&["an expression"])),
        }
    }

    fn tuple(&mut self) -> PResult<Vec<Value>> {
        self.expect(&Tok::LParen)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(out);
        }
        loop {
            out.push(self.value()?);
            if self.eat(&Tok::RParen) {
                return Ok(out);
            }
            if !self.eat(&Tok::Comma) {
                return Err(self.unexpected(&["`,`", "`)`"]));
            }
        }
    }

    fn table(&mut self, arity: usize) -> PResult<BTreeMap<Vec<Value>, Value>> {
        self.expect(&Tok::LBrace)?;
        let mut rows = BTreeMap::new();
        while !self.eat(&Tok::RBrace) {
            let start = self.peek().clone();
            let key = self.tuple()?;
            if key.len() != arity {
                return Err(at(
                    &start,
                    format!(
                        "row has {} values but the node has {arity} parents",
                        key.len()
                    ),
                ));
            }
            self.expect(&Tok::Arrow)?;
            let v = self.value()?;
            if rows.insert(key, v).is_some() {
                return Err(at(&start, "duplicate table row"));
            }
            self.eat(&Tok::Comma);
        }
        Ok(rows)
    }

    fn model(&mut self) -> PResult<Sfm> {
        self.expect_keyword("model")?;
        self.expect(&Tok::LBrace)?;
        let mut parts = SfmParts::new();
        let mut decl: BTreeMap<NodeId, Token> = BTreeMap::new();
        let mut parent_refs: Vec<(NodeId, Token)> = Vec::new();
        loop {
            if self.eat(&Tok::RBrace) {
                break;
            }
            if !self.is_keyword("node") {
                return Err(self.unexpected(&["`node`", "`}`"]));
            }
            self.bump();
            let (name, tok) = self.name()?;
            if decl.contains_key(&name) {
                return Err(at(&tok, format!("node `{name}` is declared twice")));
            }
            decl.insert(name.clone(), tok.clone());
            let parents = if self.eat_keyword("exo") {
                None
            } else if self.eat_keyword("endo") {
                self.expect_keyword("parents")?;
                let open = self.peek().clone();
                let ps = self.name_list()?;
                if ps.is_empty() {
                    return Err(at(
                        &open,
                        format!("endo-node `{name}` needs at least one parent"),
                    ));
                }
                parent_refs.extend(ps.iter().cloned());
                Some(ps.into_iter().map(|(n, _)| n).collect::<Vec<_>>())
            } else {
                return Err(self.unexpected(&["`exo`", "`endo`"]));
            };
            self.expect_keyword("domain")?;
            let domain = self.domain()?;
            match parents {
                None => {
                    if self.is_keyword("expr") || self.is_keyword("table") {
                        return Err(at(
                            self.peek(),
                            format!("exo-node `{name}` cannot have a structural function"),
                        ));
                    }
                    parts = parts.exo(name, domain);
                }
                Some(ps) => {
                    let f = if self.eat_keyword("expr") {
                        StructuralFunction::expr(ps.clone(), self.expr(&ps)?)
                    } else if self.eat_keyword("table") {
                        let rows = self.table(ps.len())?;
                        StructuralFunction::table(ps.clone(), rows)
                    } else {
                        let mut e = at(
                            self.peek(),
                            format!("endo-node `{name}` needs a structural function"),
                        );
                        e.expected = vec!["`expr`".into(), "`table`".into()];
                        return Err(e);
                    };
                    parts = parts.endo(name, domain, f);
                }
            }
        }
        for (p, tok) in &parent_refs {
            if !decl.contains_key(p) {
                return Err(at(tok, format!("unknown parent `{p}`")));
            }
        }
        let report = validate(&parts);
        if let Some(v) = report.violations.first() {
            let tok = decl
                .get(v.node())
                .cloned()
                .unwrap_or_else(|| self.peek().clone());
            return Err(at(&tok, format!("invalid model: {v}")));
        }
        Ok(Sfm::new(parts).expect("validated"))
    }

    fn model_or_include(&mut self) -> PResult<Sfm> {
        if !self.is_keyword("include") {
            return self.model();
        }
        let kw = self.bump();
        let t = self.bump();
        let Tok::Str(path) = &t.tok else {
            return Err(at(
                &t,
                format!("expected a quoted path, found {}", t.tok.describe()),
            ));
        };
        let Some(resolver) = self.resolver else {
            return Err(at(&kw, "`include` is not available here"));
        };
        let text = resolver(path).map_err(|m| at(&t, format!("cannot include \"{path}\": {m}")))?;
        parse_model(&text).map_err(|e| at(&t, format!("in \"{path}\": {e}")))
    }

    fn assignment(&mut self, model: &Sfm) -> PResult<Assignment> {
        self.expect(&Tok::LBrace)?;
        let a = self.bindings(model, &Tok::RBrace)?;
        self.expect(&Tok::RBrace)?;
        Ok(a)
    }

    /// `Node: value` pairs with optional separating commas, up to `end`.
    fn bindings(&mut self, model: &Sfm, end: &Tok) -> PResult<Assignment> {
        let mut a = Assignment::new();
        while &self.peek().tok != end {
            let (node, tok) = self.name()?;
            if !model.contains(&node) {
                return Err(at(&tok, format!("unknown node `{node}`")));
            }
            if a.contains(&node) {
                return Err(at(&tok, format!("`{node}` is bound twice")));
            }
            self.expect(&Tok::Colon)?;
            let v = self.value()?;
            a.insert(node, v);
            self.eat(&Tok::Comma);
        }
        Ok(a)
    }

    fn known_names(&mut self, model: &Sfm) -> PResult<BTreeSet<NodeId>> {
        let mut out = BTreeSet::new();
        for (n, tok) in self.name_list()? {
            if !model.contains(&n) {
                return Err(at(&tok, format!("unknown node `{n}`")));
            }
            out.insert(n);
        }
        Ok(out)
    }

    fn section(&mut self, model: &Sfm) -> PResult<Section> {
        let start = self.peek().clone();
        let sections = ["`default`", "`actual`", "`vfi`", "`csp`", "`fd`"];
        let Tok::Ident(kw) = &start.tok else {
            return Err(self.unexpected(&sections));
        };
        let section = match kw.as_str() {
            "default" => {
                self.bump();
                let default = self.assignment(model)?;
                self.expect_keyword("actual")?;
                let actual = self.assignment(model)?;
                Section::Default { default, actual }
            }
            "actual" => {
                self.bump();
                let actual = self.assignment(model)?;
                if self.is_keyword("default") {
                    return Err(at(
                        self.peek(),
                        "a scenario has a default world or a tweak, not both",
                    ));
                }
                self.expect_keyword("tweak")?;
                let tweak = self.assignment(model)?;
                Section::Tweak { actual, tweak }
            }
            "vfi" => {
                self.bump();
                Section::Vfi {
                    exo: self.assignment(model)?,
                }
            }
            "csp" => {
                self.bump();
                self.expect_keyword("known")?;
                let known = self.assignment(model)?;
                self.expect_keyword("targets")?;
                let targets = self.known_names(model)?;
                Section::Csp { known, targets }
            }
            "fd" => {
                let mut claims = Vec::new();
                while self.eat_keyword("fd") {
                    let x = self.known_names(model)?;
                    self.expect(&Tok::Arrow)?;
                    let y = self.known_names(model)?;
                    claims.push((x, y));
                }
                Section::Fd { claims }
            }
            _ => return Err(self.unexpected(&sections)),
        };
        if self.is_keyword("tweak") {
            return Err(at(
                self.peek(),
                "a scenario has a default world or a tweak, not both",
            ));
        }
        Ok(section)
    }

    fn expectation(&mut self, model: &Sfm, section: &Section) -> PResult<Option<Expectation>> {
        if !self.eat_keyword("expect") {
            return Ok(None);
        }
        let t = self.peek().clone();
        let wrong = |what: &str| at(&t, format!("`expect {what}` does not fit this scenario"));
        let e = if self.eat_keyword("cause") {
            if !matches!(section, Section::Default { .. } | Section::Tweak { .. }) {
                return Err(wrong("cause"));
            }
            let cause = self.assignment(model)?;
            self.expect_keyword("effect")?;
            let effect = self.assignment(model)?;
            Expectation::Utterance { cause, effect }
        } else if self.eat_keyword("answer") {
            let single = match section {
                Section::Vfi { .. } => true,
                Section::Csp { .. } => false,
                _ => return Err(wrong("answer")),
            };
            let mut answers = vec![self.assignment(model)?];
            while !single && self.peek().tok == Tok::LBrace {
                answers.push(self.assignment(model)?);
            }
            Expectation::Answer(answers)
        } else if self.eat_keyword("holds") {
            if !matches!(section, Section::Fd { .. }) {
                return Err(wrong("holds"));
            }
            Expectation::Holds
        } else {
            return Err(self.unexpected(&["`cause`", "`answer`", "`holds`"]));
        };
        Ok(Some(e))
    }

    fn end(&mut self) -> PResult<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    fn doc(&mut self) -> PResult<ScenarioDoc> {
        let model = self.model_or_include()?;
        let section = self.section(&model)?;
        let expect = self.expectation(&model, &section)?;
        self.end()?;
        Ok(ScenarioDoc {
            model,
            section,
            expect,
        })
    }
}

/// Parses a single `model { ... }` section.
pub fn parse_model(text: &str) -> Result<Sfm, ParseError> {
    let mut p = Parser::new(text, None)?;
    let m = p.model()?;
    p.end()?;
    Ok(m)
}

/// Parses a scenario document; `include` is rejected.
pub fn parse_scenario(text: &str) -> Result<ScenarioDoc, ParseError> {
    Parser::new(text, None)?.doc()
}

/// Parses a scenario document, loading `include "path"` through `resolver`.
pub fn parse_scenario_with(text: &str, resolver: Resolver<'_>) -> Result<ScenarioDoc, ParseError> {
    Parser::new(text, Some(resolver))?.doc()
}

/// Like [`parse_scenario`] on raw bytes; invalid UTF-8 is a positioned error.
pub fn parse_scenario_bytes(bytes: &[u8]) -> Result<ScenarioDoc, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).expect("valid prefix");
        let line = valid.matches('\n').count() + 1;
        let column = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError::new(line, column, "invalid UTF-8")
    })?;
    parse_scenario(text)
}

/// Parses `Node:value` pairs, with or without surrounding braces, against
/// the nodes of `model`.
pub fn parse_assignment(text: &str, model: &Sfm) -> Result<Assignment, ParseError> {
    let mut p = Parser::new(text, None)?;
    let braced = p.eat(&Tok::LBrace);
    let end = if braced { Tok::RBrace } else { Tok::Eof };
    let a = p.bindings(model, &end)?;
    if braced {
        p.expect(&Tok::RBrace)?;
    }
    p.end()?;
    Ok(a)
}

/// Parses an expression whose references must be among `parents`.
pub fn parse_expr(text: &str, parents: &[NodeId]) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, None)?;
    let e = p.expr(parents)?;
    p.end()?;
    Ok(e)
}

/// Parses a single value literal.
pub fn parse_value(text: &str) -> Result<Value, ParseError> {
    let mut p = Parser::new(text, None)?;
    let v = p.value()?;
    p.end()?;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::assignment;
    use crate::fixtures;

    const ASSASSIN: &str = "model {
        node Assassin exo domain {0, 1}
        node Death endo parents (Assassin) domain {0, 1} expr Assassin
    }";

    fn err(text: &str) -> ParseError {
        parse_scenario(text).unwrap_err()
    }

    #[test]
    fn two_node_model_is_identity_copy() {
        let m = parse_model(ASSASSIN).unwrap();
        assert_eq!(m, fixtures::assassin());
        assert_eq!(
            m.function("Death").unwrap(),
            &StructuralFunction::copy_of("Assassin")
        );
    }

    #[test]
    fn boulder_expression() {
        let m = parse_model(
            "model {
              node Boulder exo domain {0, 1}
              node Dodge endo parents (Boulder) domain {0, 1} expr Boulder
              node Survive endo parents (Boulder, Dodge) domain {0, 1} expr !Boulder | Dodge
            }",
        )
        .unwrap();
        let f = m.function("Survive").unwrap();
        assert_eq!(f, fixtures::boulder().function("Survive").unwrap());
        assert_eq!(
            f.body,
            crate::FunctionBody::Expr(Expr::or(
                Expr::not(Expr::var("Boulder")),
                Expr::var("Dodge")
            ))
        );
    }

    #[test]
    fn undeclared_reference_names_the_token() {
        let e = parse_model(
            "model {
  node A exo domain {0, 1}
  node B exo domain {0, 1}
  node C endo parents (A) domain {0, 1} expr A & B
}",
        )
        .unwrap_err();
        assert_eq!((e.line, e.column), (4, 50));
        assert!(e.message.contains("`B`"), "{e}");
    }

    #[test]
    fn unknown_parent_and_duplicates() {
        let e = parse_model("model { node C endo parents (Z) domain {0} expr 0 }").unwrap_err();
        assert!(e.message.contains("unknown parent `Z`"));
        assert_eq!(e.column, 30);
        let e = parse_model("model { node A exo domain {0} node A exo domain {1} }").unwrap_err();
        assert!(e.message.contains("declared twice"));
        let e = parse_model("model { node A exo domain {0, 0} }").unwrap_err();
        assert!(e.message.contains("twice"));
        let e = parse_model("model { node A exo domain {0} expr 1 }").unwrap_err();
        assert!(e.message.contains("cannot have a structural function"));
        let e = parse_model("model { node A exo domain {0} node B endo parents (A) domain {0} }")
            .unwrap_err();
        assert_eq!(e.expected, vec!["`expr`", "`table`"]);
        let e = parse_model("model { node model exo domain {0} }").unwrap_err();
        assert!(e.message.contains("keyword"));
    }

    #[test]
    fn validation_failures_point_at_the_node() {
        let e = parse_model(
            "model {\n node A exo domain {0, 1}\n node B endo parents (A) domain {0} table { (0) -> 0 }\n}",
        )
        .unwrap_err();
        assert_eq!((e.line, e.column), (3, 7));
        assert!(e.message.contains("left-total"), "{e}");
        let e = parse_model(
            "model {\n node A exo domain {0, 1}\n node B endo parents (A) domain {0} expr A + 1\n}",
        )
        .unwrap_err();
        assert_eq!((e.line, e.column), (3, 7));
        let e = parse_model(
            "model {\n node A endo parents (B) domain {0} expr B\n node B endo parents (A) domain {0} expr A\n}",
        )
        .unwrap_err();
        assert!(e.message.contains("cycle"), "{e}");
    }

    #[test]
    fn tables_and_rationals() {
        let m = parse_model(
            "model {
              node H exo domain {150, 180}
              node W endo parents (H) domain {\"tall\", short, -1/2} table { (150) -> short, (180) -> \"tall\" }
              node A endo parents (H) domain {75, 90} expr H * 1/2
            }",
        )
        .unwrap();
        let f = m.function("W").unwrap();
        assert_eq!(f.apply(&[Value::Int(180)]).unwrap(), Value::symbol("tall"));
        assert_eq!(
            m.function("A").unwrap().apply(&[Value::Int(150)]).unwrap(),
            Value::Int(75)
        );
        assert!(m
            .domain("W")
            .unwrap()
            .contains(&Value::rational(Rational::new(-1, 2))));
        let e = parse_model("model { node A exo domain {0} node B endo parents (A) domain {0} table { (0) -> 0 (0) -> 0 } }")
            .unwrap_err();
        assert!(e.message.contains("duplicate table row"));
        let e = parse_model("model { node A exo domain {0} node B endo parents (A) domain {0} table { (0, 0) -> 0 } }")
            .unwrap_err();
        assert!(e.message.contains("1 parents"));
    }

    #[test]
    fn expression_shapes() {
        let m = parse_model(
            "model {
              node A exo domain {-2, -1, 0, 1, 2}
              node B endo parents (A) domain {-8} expr -2^2 * (A - -1 + 1 - A)
              node C endo parents (A) domain {0, 1} expr if A >= 0 & A != 1 then 1 else 0
            }",
        )
        .unwrap();
        let FunctionBody::Expr(b) = &m.function("B").unwrap().body else {
            panic!()
        };
        assert_eq!(b.to_string(), "-2^2 * (A - -1 + 1 - A)");
        let FunctionBody::Expr(c) = &m.function("C").unwrap().body else {
            panic!()
        };
        assert_eq!(c.to_string(), "if A >= 0 & A != 1 then 1 else 0");
        assert!(parse_model(
            "model { node A exo domain {0} node B endo parents (A) domain {0} expr A == A == A }"
        )
        .is_err());
    }

    use crate::function::FunctionBody;

    #[test]
    fn deep_nesting_is_an_error() {
        let body = format!("{}A{}", "(".repeat(1000), ")".repeat(1000));
        let text = format!(
            "model {{ node A exo domain {{0}} node B endo parents (A) domain {{0}} expr {body} }}"
        );
        let e = parse_model(&text).unwrap_err();
        assert!(e.message.contains("nests"));
        let text = format!(
            "model {{ node A exo domain {{0}} node B endo parents (A) domain {{0}} expr {}A }}",
            "!".repeat(5000)
        );
        assert!(parse_model(&text).is_err());
    }

    #[test]
    fn scenario_modes() {
        let doc = parse_scenario(&format!(
            "{ASSASSIN} default {{Assassin:0, Death:0}} actual {{Assassin:1, Death:1}}
             expect cause {{Assassin:1}} effect {{Death:1}}"
        ))
        .unwrap();
        assert!(matches!(doc.section, Section::Default { .. }));
        assert_eq!(
            doc.expect,
            Some(Expectation::Utterance {
                cause: assignment([("Assassin", 1i64)]),
                effect: assignment([("Death", 1i64)]),
            })
        );
        let doc = parse_scenario(&format!(
            "{ASSASSIN} actual {{Assassin:1 Death:1}} tweak {{Assassin:0}}"
        ))
        .unwrap();
        assert_eq!(
            doc.section,
            Section::Tweak {
                actual: assignment([("Assassin", 1i64), ("Death", 1)]),
                tweak: assignment([("Assassin", 0i64)])
            }
        );
        let e = err(&format!("{ASSASSIN} default {{}} actual {{}} tweak {{}}"));
        assert!(e.message.contains("not both"));
        let e = err(&format!("{ASSASSIN} actual {{}} default {{}}"));
        assert!(e.message.contains("not both"));
        let e = err(&format!(
            "{ASSASSIN} vfi {{Assassin:1}} expect cause {{}} effect {{}}"
        ));
        assert!(e.message.contains("does not fit"));
        let e = err(&format!("{ASSASSIN} vfi {{Nobody:1}}"));
        assert!(e.message.contains("unknown node"));
        let e = err(&format!("{ASSASSIN} vfi {{Assassin:1, Assassin:0}}"));
        assert!(e.message.contains("twice"));
        let e = err(&format!("{ASSASSIN} vfi {{}} vfi {{}}"));
        assert_eq!(e.expected, vec!["end of input"]);
        let doc = parse_scenario(&format!(
            "{ASSASSIN} csp known {{Death:1}} targets (Assassin) expect answer {{Assassin:1}} {{Assassin:0}}"
        ))
        .unwrap();
        assert_eq!(
            doc.expect,
            Some(Expectation::Answer(vec![
                assignment([("Assassin", 1i64)]),
                assignment([("Assassin", 0i64)])
            ]))
        );
        let doc = parse_scenario(&format!(
            "{ASSASSIN} fd (Assassin) -> (Death) fd () -> (Assassin) expect holds"
        ))
        .unwrap();
        let Section::Fd { claims } = doc.section else {
            panic!()
        };
        assert_eq!(claims.len(), 2);
    }

    #[test]
    fn include_needs_a_resolver() {
        let text = "include \"m.model\" vfi {Assassin:1}";
        assert!(err(text).message.contains("not available"));
        let resolve = |p: &str| {
            if p == "m.model" {
                Ok(ASSASSIN.to_string())
            } else {
                Err("missing".to_string())
            }
        };
        let doc = parse_scenario_with(text, &resolve).unwrap();
        assert_eq!(doc.model, fixtures::assassin());
        let e = parse_scenario_with("include \"x\" vfi {}", &resolve).unwrap_err();
        assert!(e.message.contains("missing"));
        let bad = |_: &str| Ok("model { node A }".to_string());
        let e = parse_scenario_with("include \"x\" vfi {}", &bad).unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        assert!(e.message.contains("in \"x\": 1:16"), "{e}");
    }

    #[test]
    fn bytes_and_command_line_forms() {
        let e = parse_scenario_bytes(b"model {\n  \xff }").unwrap_err();
        assert_eq!(
            (e.line, e.column, e.message.as_str()),
            (2, 3, "invalid UTF-8")
        );
        let m = fixtures::assassin();
        assert_eq!(
            parse_assignment("Assassin:1, Death:0", &m).unwrap(),
            assignment([("Assassin", 1i64), ("Death", 0)])
        );
        assert_eq!(
            parse_assignment("{Assassin:1}", &m).unwrap(),
            assignment([("Assassin", 1i64)])
        );
        assert_eq!(parse_assignment("", &m).unwrap(), Assignment::new());
        assert!(parse_assignment("Assassin=1", &m).is_err());
        assert_eq!(
            parse_value("-3/6").unwrap(),
            Value::rational(Rational::new(-1, 2))
        );
        assert_eq!(parse_value("true").unwrap(), Value::Bool(true));
        assert!(parse_value("- x").is_err());
    }

    #[test]
    fn error_display() {
        let e = err("model { node");
        assert_eq!(
            e.to_string(),
            "1:13: unexpected end of input (expected a name)"
        );
    }
}
