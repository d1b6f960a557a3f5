//! Recursive-descent parser for spec files and clause expressions.
//!
//! Precedence (loosest to tightest):
//!   1. `<=>` (right)   2. `=>` (right)   3. `\/`   4. `/\`   5. `~`
//!   6. comparisons `=` `#` `\in` `\notin` `\subseteq` (non-chaining)
//!   7. `\cup` `\cap` `\` (left)   8. postfix `[key]`
//! Quantifier bodies extend maximally to the right. `/\` and `\/` chains are
//! flattened to n-ary nodes; `#` and `\notin` desugar to negations.

use crate::diag::{Diagnostic, Span};

use super::ast::{Expr, ExprKind, QuantKind};
use super::lexer::Lexer;
use super::token::{SpannedTok, Tok};

/// Nesting bound that keeps parsing total on adversarial inputs.
const MAX_DEPTH: u32 = 256;

// ---------------------------------------------------------------------------
// Raw (pre-resolution) spec structures handed to the resolver.
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub(super) enum RawType {
    Bool,
    Named(String, Span),
    SetOf(String, Span),
    Map { key: String, key_span: Span, cod: Box<RawType> },
}

#[derive(Debug)]
pub(super) enum RawStmt {
    Require(Expr),
    Update { var: String, span: Span, rhs: Expr },
    Unchanged(Vec<(String, Span)>),
}

#[derive(Debug)]
pub(super) struct RawAction {
    pub name: String,
    pub span: Span,
    pub params: Vec<(String, String, Span)>, // (param name, sort name, position)
    pub stmts: Vec<RawStmt>,
}

#[derive(Debug)]
pub(super) struct RawSpec {
    pub sorts: Vec<(String, Span)>,
    pub consts: Vec<(String, RawType, Span)>,
    pub vars: Vec<(String, RawType, Span)>,
    pub init: Option<Expr>,
    pub actions: Vec<RawAction>,
    pub safety: Option<Expr>,
}

// ---------------------------------------------------------------------------
// Parser core.
// ---------------------------------------------------------------------------

pub(super) struct Parser {
    toks: Vec<SpannedTok>,
    pos: usize,
    depth: u32,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, Diagnostic> {
        Ok(Parser { toks: Lexer::tokenize(src)?, pos: 0, depth: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> SpannedTok {
        let t = self.toks[self.pos].clone();
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

    fn expect(&mut self, t: Tok) -> Result<Span, Diagnostic> {
        if self.peek() == &t {
            Ok(self.bump().span)
        } else {
            Err(Diagnostic::syntax(
                self.peek_span(),
                format!("expected {}, found {}", t.describe(), self.peek().describe()),
            ))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Span), Diagnostic> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let sp = self.bump().span;
                Ok((name, sp))
            }
            other => Err(Diagnostic::syntax(
                self.peek_span(),
                format!("expected {what}, found {}", other.describe()),
            )),
        }
    }

    fn enter(&mut self) -> Result<DepthGuard<'_>, Diagnostic> {
        if self.depth >= MAX_DEPTH {
            return Err(Diagnostic::syntax(self.peek_span(), "expression nesting too deep"));
        }
        self.depth += 1;
        Ok(DepthGuard { p: self })
    }

    // -- Expressions --------------------------------------------------------

    pub fn parse_expr(&mut self) -> Result<Expr, Diagnostic> {
        self.parse_iff()
    }

    fn parse_iff(&mut self) -> Result<Expr, Diagnostic> {
        let guard = self.enter()?;
        let p = &mut *guard.p;
        let lhs = p.parse_implies()?;
        if p.peek() == &Tok::Iff {
            let sp = p.bump().span;
            let rhs = p.parse_iff()?;
            return Ok(Expr::new(ExprKind::Iff(Box::new(lhs), Box::new(rhs)), sp));
        }
        Ok(lhs)
    }

    fn parse_implies(&mut self) -> Result<Expr, Diagnostic> {
        let lhs = self.parse_or()?;
        if self.peek() == &Tok::Implies {
            let sp = self.bump().span;
            let rhs = self.parse_implies()?;
            return Ok(Expr::new(ExprKind::Implies(Box::new(lhs), Box::new(rhs)), sp));
        }
        Ok(lhs)
    }

    fn parse_or(&mut self) -> Result<Expr, Diagnostic> {
        let first = self.parse_and()?;
        if self.peek() != &Tok::Or {
            return Ok(first);
        }
        let sp = first.span;
        let mut items = flatten_or(first);
        while self.eat(&Tok::Or) {
            items.extend(flatten_or(self.parse_and()?));
        }
        Ok(Expr::new(ExprKind::Or(items), sp))
    }

    fn parse_and(&mut self) -> Result<Expr, Diagnostic> {
        let first = self.parse_not()?;
        if self.peek() != &Tok::And {
            return Ok(first);
        }
        let sp = first.span;
        let mut items = flatten_and(first);
        while self.eat(&Tok::And) {
            items.extend(flatten_and(self.parse_not()?));
        }
        Ok(Expr::new(ExprKind::And(items), sp))
    }

    fn parse_not(&mut self) -> Result<Expr, Diagnostic> {
        if self.peek() == &Tok::Not {
            let guard = self.enter()?;
            let p = &mut *guard.p;
            let sp = p.bump().span;
            let inner = p.parse_not()?;
            return Ok(Expr::new(ExprKind::Not(Box::new(inner)), sp));
        }
        self.parse_cmp()
    }

    fn parse_cmp(&mut self) -> Result<Expr, Diagnostic> {
        let lhs = self.parse_setop()?;
        let op = match self.peek() {
            Tok::Eq | Tok::Neq | Tok::In | Tok::NotIn | Tok::Subseteq => self.bump(),
            _ => return Ok(lhs),
        };
        let rhs = self.parse_setop()?;
        if matches!(self.peek(), Tok::Eq | Tok::Neq | Tok::In | Tok::NotIn | Tok::Subseteq) {
            return Err(Diagnostic::syntax(
                self.peek_span(),
                "comparison operators do not chain; parenthesize",
            ));
        }
        let sp = op.span;
        let node = |k| Expr::new(k, sp);
        Ok(match op.tok {
            Tok::Eq => node(ExprKind::Eq(Box::new(lhs), Box::new(rhs))),
            Tok::Neq => node(ExprKind::Not(Box::new(node(ExprKind::Eq(
                Box::new(lhs),
                Box::new(rhs),
            ))))),
            Tok::In => node(ExprKind::In(Box::new(lhs), Box::new(rhs))),
            Tok::NotIn => node(ExprKind::Not(Box::new(node(ExprKind::In(
                Box::new(lhs),
                Box::new(rhs),
            ))))),
            Tok::Subseteq => node(ExprKind::Subseteq(Box::new(lhs), Box::new(rhs))),
            _ => unreachable!(),
        })
    }

    fn parse_setop(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.parse_postfix()?;
        loop {
            let op = match self.peek() {
                Tok::Union | Tok::Inter | Tok::SetMinus => self.bump(),
                _ => return Ok(lhs),
            };
            let rhs = self.parse_postfix()?;
            let kind = match op.tok {
                Tok::Union => ExprKind::Union(Box::new(lhs), Box::new(rhs)),
                Tok::Inter => ExprKind::Inter(Box::new(lhs), Box::new(rhs)),
                Tok::SetMinus => ExprKind::Diff(Box::new(lhs), Box::new(rhs)),
                _ => unreachable!(),
            };
            lhs = Expr::new(kind, op.span);
        }
    }

    fn parse_postfix(&mut self) -> Result<Expr, Diagnostic> {
        let mut e = self.parse_atom()?;
        while self.peek() == &Tok::LBracket {
            let sp = self.bump().span;
            let key = self.parse_expr()?;
            self.expect(Tok::RBracket)?;
            e = Expr::new(ExprKind::MapApp { map: Box::new(e), key: Box::new(key) }, sp);
        }
        Ok(e)
    }

    fn parse_atom(&mut self) -> Result<Expr, Diagnostic> {
        let sp = self.peek_span();
        match self.peek().clone() {
            Tok::TrueKw => {
                self.bump();
                Ok(Expr::new(ExprKind::True, sp))
            }
            Tok::FalseKw => {
                self.bump();
                Ok(Expr::new(ExprKind::False, sp))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::new(ExprKind::Ident(name), sp))
            }
            Tok::PrimedIdent(name) => Err(Diagnostic::new(
                crate::diag::DiagnosticKind::PrimedVariable,
                Some(sp),
                format!("primed variable {name}' may only appear on the left of an update statement"),
            )),
            Tok::LParen => {
                self.bump();
                let e = self.parse_expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBrace => {
                self.bump();
                let mut elems = Vec::new();
                if !self.eat(&Tok::RBrace) {
                    loop {
                        elems.push(self.parse_expr()?);
                        if self.eat(&Tok::Comma) {
                            continue;
                        }
                        self.expect(Tok::RBrace)?;
                        break;
                    }
                }
                Ok(Expr::new(ExprKind::SetLit { sort: None, elems }, sp))
            }
            Tok::LBracket => {
                // [map EXCEPT ![key] = val]
                self.bump();
                let map = self.parse_expr()?;
                self.expect(Tok::Except)?;
                self.expect(Tok::Bang)?;
                self.expect(Tok::LBracket)?;
                let key = self.parse_expr()?;
                self.expect(Tok::RBracket)?;
                self.expect(Tok::Eq)?;
                let val = self.parse_expr()?;
                self.expect(Tok::RBracket)?;
                Ok(Expr::new(
                    ExprKind::MapUpdate { map: Box::new(map), key: Box::new(key), val: Box::new(val) },
                    sp,
                ))
            }
            Tok::Forall | Tok::Exists => self.parse_quant(),
            other => Err(Diagnostic::syntax(
                sp,
                format!("expected an expression, found {}", other.describe()),
            )),
        }
    }

    fn parse_quant(&mut self) -> Result<Expr, Diagnostic> {
        let guard = self.enter()?;
        let p = &mut *guard.p;
        let q = p.bump();
        let kind = if q.tok == Tok::Forall { QuantKind::Forall } else { QuantKind::Exists };
        let mut binders = vec![p.expect_ident("a bound-variable name")?];
        while p.eat(&Tok::Comma) {
            binders.push(p.expect_ident("a bound-variable name")?);
        }
        p.expect(Tok::In)?;
        let (sort_name, _) = p.expect_ident("a sort name")?;
        p.expect(Tok::Colon)?;
        let body = p.parse_expr()?;
        // Desugar multiple binders into nested quantifiers over the same sort.
        let mut e = body;
        for (name, bsp) in binders.into_iter().rev() {
            e = Expr::new(
                ExprKind::Quant {
                    kind,
                    var: name,
                    sort: None,
                    sort_name: sort_name.clone(),
                    body: Box::new(e),
                },
                bsp,
            );
        }
        Ok(e)
    }

    // -- Declarations -------------------------------------------------------

    fn parse_type(&mut self) -> Result<RawType, Diagnostic> {
        match self.peek().clone() {
            Tok::BoolKw => {
                self.bump();
                Ok(RawType::Bool)
            }
            Tok::SetKw => {
                self.bump();
                let (name, sp) = self.expect_ident("a sort name")?;
                Ok(RawType::SetOf(name, sp))
            }
            Tok::MapKw => {
                self.bump();
                let (key, key_span) = self.expect_ident("a key sort name")?;
                let cod = match self.peek().clone() {
                    Tok::BoolKw => {
                        self.bump();
                        RawType::Bool
                    }
                    Tok::Ident(name) => {
                        let sp = self.bump().span;
                        RawType::Named(name, sp)
                    }
                    other => {
                        return Err(Diagnostic::syntax(
                            self.peek_span(),
                            format!("expected a map codomain (BOOL or sort name), found {}", other.describe()),
                        ))
                    }
                };
                Ok(RawType::Map { key, key_span, cod: Box::new(cod) })
            }
            Tok::Ident(name) => {
                let sp = self.bump().span;
                Ok(RawType::Named(name, sp))
            }
            other => Err(Diagnostic::syntax(
                self.peek_span(),
                format!("expected a type (BOOL, SET <sort>, MAP <sort> <cod>, or sort name), found {}", other.describe()),
            )),
        }
    }

    fn parse_action(&mut self) -> Result<RawAction, Diagnostic> {
        let span = self.expect(Tok::Action)?;
        let (name, _) = self.expect_ident("an action name")?;
        let mut params = Vec::new();
        if self.eat(&Tok::LParen) {
            if !self.eat(&Tok::RParen) {
                loop {
                    let (pname, psp) = self.expect_ident("a parameter name")?;
                    self.expect(Tok::Colon)?;
                    let (sort, _) = self.expect_ident("a sort name")?;
                    params.push((pname, sort, psp));
                    if self.eat(&Tok::Comma) {
                        continue;
                    }
                    self.expect(Tok::RParen)?;
                    break;
                }
            }
        }
        self.expect(Tok::LBrace)?;
        let mut stmts = Vec::new();
        while !self.eat(&Tok::RBrace) {
            match self.peek().clone() {
                Tok::Require => {
                    self.bump();
                    stmts.push(RawStmt::Require(self.parse_expr()?));
                }
                Tok::Unchanged => {
                    self.bump();
                    let mut names = vec![self.expect_ident("a variable name")?];
                    while self.eat(&Tok::Comma) {
                        names.push(self.expect_ident("a variable name")?);
                    }
                    stmts.push(RawStmt::Unchanged(names));
                }
                Tok::PrimedIdent(var) => {
                    let sp = self.bump().span;
                    self.expect(Tok::Eq)?;
                    let rhs = self.parse_expr()?;
                    stmts.push(RawStmt::Update { var, span: sp, rhs });
                }
                Tok::Eof => {
                    return Err(Diagnostic::syntax(
                        self.peek_span(),
                        format!("unterminated body of action '{name}': expected '}}'"),
                    ))
                }
                other => {
                    return Err(Diagnostic::syntax(
                        self.peek_span(),
                        format!(
                            "expected an action statement (REQUIRE, <var>' = ..., or UNCHANGED), found {}",
                            other.describe()
                        ),
                    ))
                }
            }
            self.expect(Tok::Semi)?;
        }
        Ok(RawAction { name, span, params, stmts })
    }

    pub(super) fn parse_raw_spec(&mut self) -> Result<RawSpec, Diagnostic> {
        let mut raw = RawSpec {
            sorts: Vec::new(),
            consts: Vec::new(),
            vars: Vec::new(),
            init: None,
            actions: Vec::new(),
            safety: None,
        };
        if self.peek() == &Tok::Eof {
            return Err(Diagnostic::syntax(self.peek_span(), "empty specification"));
        }
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Sort => {
                    self.bump();
                    loop {
                        let (name, sp) = self.expect_ident("a sort name")?;
                        raw.sorts.push((name, sp));
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                Tok::Const => {
                    self.bump();
                    let (name, sp) = self.expect_ident("a constant name")?;
                    self.expect(Tok::Colon)?;
                    let ty = self.parse_type()?;
                    raw.consts.push((name, ty, sp));
                }
                Tok::Var => {
                    self.bump();
                    let (name, sp) = self.expect_ident("a variable name")?;
                    self.expect(Tok::Colon)?;
                    let ty = self.parse_type()?;
                    raw.vars.push((name, ty, sp));
                }
                Tok::Init => {
                    let sp = self.bump().span;
                    if raw.init.is_some() {
                        return Err(Diagnostic::syntax(sp, "duplicate INIT section"));
                    }
                    raw.init = Some(self.parse_expr()?);
                }
                Tok::Safety => {
                    let sp = self.bump().span;
                    if raw.safety.is_some() {
                        return Err(Diagnostic::syntax(sp, "duplicate SAFETY section"));
                    }
                    raw.safety = Some(self.parse_expr()?);
                }
                Tok::Action => raw.actions.push(self.parse_action()?),
                other => {
                    return Err(Diagnostic::syntax(
                        self.peek_span(),
                        format!(
                            "expected a declaration (SORT, CONST, VAR, INIT, ACTION, SAFETY), found {}",
                            other.describe()
                        ),
                    ))
                }
            }
        }
        Ok(raw)
    }

    /// Parse a standalone clause expression; the whole input must be consumed.
    pub fn parse_standalone_expr(&mut self) -> Result<Expr, Diagnostic> {
        let e = self.parse_expr()?;
        if self.peek() != &Tok::Eof {
            return Err(Diagnostic::syntax(
                self.peek_span(),
                format!("unexpected {} after the end of the expression", self.peek().describe()),
            ));
        }
        Ok(e)
    }
}

struct DepthGuard<'a> {
    p: &'a mut Parser,
}

impl Drop for DepthGuard<'_> {
    fn drop(&mut self) {
        self.p.depth -= 1;
    }
}

fn flatten_and(e: Expr) -> Vec<Expr> {
    match e.kind {
        ExprKind::And(xs) => xs,
        _ => vec![e],
    }
}

fn flatten_or(e: Expr) -> Vec<Expr> {
    match e.kind {
        ExprKind::Or(xs) => xs,
        _ => vec![e],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr(src: &str) -> Expr {
        Parser::new(src).unwrap().parse_standalone_expr().unwrap()
    }

    fn expr_err(src: &str) -> Diagnostic {
        match Parser::new(src) {
            Err(d) => d,
            Ok(mut p) => p.parse_standalone_expr().unwrap_err(),
        }
    }

    #[test]
    fn and_or_chains_flatten() {
        let e = expr(r"a /\ b /\ c");
        match e.kind {
            ExprKind::And(xs) => assert_eq!(xs.len(), 3),
            other => panic!("expected And, got {other:?}"),
        }
        let e = expr(r"(a \/ b) \/ c");
        match e.kind {
            ExprKind::Or(xs) => assert_eq!(xs.len(), 3),
            other => panic!("expected Or, got {other:?}"),
        }
    }

    #[test]
    fn precedence_implies_over_or() {
        // a \/ b => c  parses as  (a \/ b) => c
        let e = expr(r"a \/ b => c");
        assert!(matches!(e.kind, ExprKind::Implies(..)));
    }

    #[test]
    fn negation_binds_looser_than_comparison() {
        // ~ x = y  parses as  ~(x = y)
        let e = expr(r"~ x = y");
        match e.kind {
            ExprKind::Not(inner) => assert!(matches!(inner.kind, ExprKind::Eq(..))),
            other => panic!("expected Not, got {other:?}"),
        }
    }

    #[test]
    fn neq_and_notin_desugar() {
        let e = expr(r"x # y");
        assert!(matches!(e.kind, ExprKind::Not(_)));
        let e = expr(r"x \notin S");
        assert!(matches!(e.kind, ExprKind::Not(_)));
    }

    #[test]
    fn quantifier_body_is_maximal() {
        // x /\ \A n \in Node : p \/ q   ==   x /\ (\A n : (p \/ q))
        let e = expr(r"x /\ \A n \in Node : p \/ q");
        match e.kind {
            ExprKind::And(xs) => {
                assert_eq!(xs.len(), 2);
                match &xs[1].kind {
                    ExprKind::Quant { body, .. } => assert!(matches!(body.kind, ExprKind::Or(_))),
                    other => panic!("expected Quant, got {other:?}"),
                }
            }
            other => panic!("expected And, got {other:?}"),
        }
    }

    #[test]
    fn multi_binder_desugars_to_nested() {
        let e = expr(r"\A s, t \in Server : s \in x => t \in x");
        match e.kind {
            ExprKind::Quant { var, body, .. } => {
                assert_eq!(var, "s");
                assert!(matches!(body.kind, ExprKind::Quant { .. }));
            }
            other => panic!("expected Quant, got {other:?}"),
        }
    }

    #[test]
    fn map_forms_parse() {
        let e = expr(r"m[k] = v");
        assert!(matches!(e.kind, ExprKind::Eq(..)));
        let e = expr(r"[m EXCEPT ![k] = v]");
        assert!(matches!(e.kind, ExprKind::MapUpdate { .. }));
    }

    #[test]
    fn comparison_chains_rejected() {
        let d = expr_err(r"a = b = c");
        assert!(d.message.contains("chain"), "{d}");
    }

    #[test]
    fn primed_in_expression_rejected() {
        let d = expr_err(r"decide_abort' = {}");
        assert_eq!(d.kind, crate::diag::DiagnosticKind::PrimedVariable);
    }

    #[test]
    fn deep_nesting_is_rejected_not_crashing() {
        let src = format!("{}x{}", "(".repeat(5000), ")".repeat(5000));
        let d = expr_err(&src);
        assert!(d.message.contains("too deep"), "{d}");
        let src = format!("{}x", "~".repeat(5000));
        let d = expr_err(&src);
        assert!(d.message.contains("too deep"), "{d}");
    }

    #[test]
    fn empty_spec_is_a_syntax_error_at_1_1() {
        let d = Parser::new("").unwrap().parse_raw_spec().unwrap_err();
        assert_eq!(d.span, Some(Span::new(1, 1)));
        assert_eq!(d.kind, crate::diag::DiagnosticKind::Syntax);
    }

    #[test]
    fn action_with_statements_parses() {
        let src = r"
            SORT Node
            VAR decide_abort : SET Node
            VAR go_abort : SET Node
            ACTION Abort(n : Node) {
                REQUIRE n \in go_abort;
                decide_abort' = decide_abort \cup {n};
                UNCHANGED go_abort;
            }
            INIT decide_abort = {} /\ go_abort = {}
            SAFETY TRUE
        ";
        let raw = Parser::new(src).unwrap().parse_raw_spec().unwrap();
        assert_eq!(raw.actions.len(), 1);
        assert_eq!(raw.actions[0].stmts.len(), 3);
        assert!(raw.init.is_some() && raw.safety.is_some());
    }
}
