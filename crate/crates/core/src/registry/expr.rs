//! Composition expressions: the call notation used to build functions out
//! of other functions, e.g.
//!
//! ```text
//! if(condition: is_zero(x),
//!    then: 0,
//!    else: add(y, multiply(subtract(x, 1), y)))
//! ```
//!
//! Arguments are either all positional or all keyed by parameter name.
//! Bare identifiers are parameter references; `true`/`false` are booleans.

use crate::content::syntax::{Cursor, SyntaxError, TokenKind};
use crate::content::ItemId;

use super::datum::Datum;

/// Parsed, not yet resolved against the registry.
#[derive(Debug, Clone, PartialEq)]
pub enum RawExpr {
    Const(Datum),
    List(Vec<RawExpr>),
    Name(String),
    Call {
        function: String,
        args: Vec<(Option<String>, RawExpr)>,
        line: usize,
        column: usize,
    },
}

/// Resolved expression: calls have their arguments in parameter order and
/// names are known parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Datum),
    List(Vec<Expr>),
    Param(usize),
    Call { function: String, args: Vec<Expr> },
    /// Lazy conditional; only the taken branch is evaluated.
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

pub fn parse_expr(text: &str) -> Result<RawExpr, SyntaxError> {
    let mut cur = Cursor::new(text)?;
    let e = parse(&mut cur)?;
    cur.expect_eof()?;
    Ok(e)
}

fn parse(cur: &mut Cursor) -> Result<RawExpr, SyntaxError> {
    let tok = cur.peek().clone();
    match tok.kind {
        TokenKind::Int(n) => {
            cur.bump();
            Ok(RawExpr::Const(Datum::Int(n)))
        }
        TokenKind::Str(s) => {
            cur.bump();
            Ok(RawExpr::Const(Datum::Text(s)))
        }
        TokenKind::ItemId(id) => {
            cur.bump();
            Ok(RawExpr::Const(Datum::Item(ItemId::new(id).expect("lexer emits valid ids"))))
        }
        TokenKind::LBracket => {
            cur.bump();
            let mut items = Vec::new();
            if cur.peek().kind != TokenKind::RBracket {
                loop {
                    items.push(parse(cur)?);
                    if cur.peek().kind == TokenKind::Comma {
                        cur.bump();
                    } else {
                        break;
                    }
                }
            }
            cur.expect(TokenKind::RBracket, "`]`")?;
            Ok(RawExpr::List(items))
        }
        TokenKind::Ident(name) => {
            cur.bump();
            if name == "true" || name == "false" {
                return Ok(RawExpr::Const(Datum::Bool(name == "true")));
            }
            if cur.peek().kind != TokenKind::LParen {
                return Ok(RawExpr::Name(name));
            }
            cur.bump();
            let mut args = Vec::new();
            if cur.peek().kind != TokenKind::RParen {
                loop {
                    let keyed = matches!(cur.peek().kind, TokenKind::Ident(_)) && cur.peek_at(1).kind == TokenKind::Colon;
                    let key = if keyed {
                        let (k, _) = cur.expect_ident()?;
                        cur.bump();
                        Some(k)
                    } else {
                        None
                    };
                    args.push((key, parse(cur)?));
                    if cur.peek().kind == TokenKind::Comma {
                        cur.bump();
                    } else {
                        break;
                    }
                }
            }
            cur.expect(TokenKind::RParen, "`)`")?;
            Ok(RawExpr::Call {
                function: name,
                args,
                line: tok.line,
                column: tok.column,
            })
        }
        _ => Err(cur.error(&["integer", "text literal", "item id", "identifier", "`[`"])),
    }
}

impl RawExpr {
    /// Function ids called anywhere in the expression.
    pub fn called_functions(&self) -> Vec<&str> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a RawExpr, out: &mut Vec<&'a str>) {
            match e {
                RawExpr::Call { function, args, .. } => {
                    out.push(function);
                    args.iter().for_each(|(_, a)| walk(a, out));
                }
                RawExpr::List(xs) => xs.iter().for_each(|x| walk(x, out)),
                RawExpr::Const(_) | RawExpr::Name(_) => {}
            }
        }
        walk(self, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_printed_multiply() {
        let e = parse_expr("if(condition: is_zero(x),\n   then: 0,\n   else: add(y, multiply(subtract(x, 1), y)))").unwrap();
        let RawExpr::Call { function, args, .. } = &e else { panic!() };
        assert_eq!(function, "if");
        assert_eq!(args.iter().map(|(k, _)| k.as_deref().unwrap()).collect::<Vec<_>>(), ["condition", "then", "else"]);
        assert_eq!(e.called_functions(), ["if", "is_zero", "add", "multiply", "subtract"]);
    }

    #[test]
    fn literals_and_lists() {
        assert_eq!(parse_expr("[true, \"a\", Q1, -2]").unwrap(), RawExpr::List(vec![
            RawExpr::Const(Datum::Bool(true)),
            RawExpr::Const(Datum::text("a")),
            RawExpr::Const(Datum::Item(ItemId::new("Q1").unwrap())),
            RawExpr::Const(Datum::Int(-2)),
        ]));
        assert!(parse_expr("f(x,)").is_err());
        assert!(parse_expr("f(x").is_err());
    }
}
