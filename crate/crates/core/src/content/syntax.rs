//! Lexer and recursive-descent parser for the abstract content notation.
//!
//! ```text
//! content   ::= constructor
//! constructor ::= IDENT [ "(" [ argument ("," argument)* ] ")" ]
//! argument  ::= IDENT ":" value
//! value     ::= INT | STRING | QID | label "(" QID ")" | list
//!             | IDENT "(" value ("," value)* ")"        -- function call
//!             | constructor
//! list      ::= "[" [ value ("," value)* ] "]"
//! label     ::= IDENT+
//! ```
//!
//! A call is positional iff its first argument is not `IDENT ":"`. A single
//! word label is told apart from a one-argument call by the whitespace
//! before the parenthesis: `city (Q515)` is a labeled item, `f(Q515)` a call.

use std::fmt;

use indexmap::IndexMap;

use super::value::{
    Content, ConstructorInstantiation, FunctionCall, ItemId, ItemRef, Literal, Value,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    /// Description of the offending token.
    pub found: String,
    /// Token classes that would have been accepted at this position.
    pub expected: Vec<String>,
    pub message: Option<String>,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        if let Some(msg) = &self.message {
            write!(f, "{msg}")?;
        } else {
            write!(f, "unexpected {}", self.found)?;
        }
        if !self.expected.is_empty() {
            write!(f, "; expected {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum TokenKind {
    Ident(String),
    ItemId(String),
    Int(i64),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Eof,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::ItemId(s) => format!("item id `{s}`"),
            TokenKind::Int(n) => format!("integer `{n}`"),
            TokenKind::Str(_) => "text literal".to_string(),
            TokenKind::LParen => "`(`".to_string(),
            TokenKind::RParen => "`)`".to_string(),
            TokenKind::LBracket => "`[`".to_string(),
            TokenKind::RBracket => "`]`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
            TokenKind::Colon => "`:`".to_string(),
            TokenKind::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
    pub space_before: bool,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut space_before = false;

    let err = |line, column, found: String, expected: &[&str], message: Option<String>| SyntaxError {
        line,
        column,
        found,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        message,
    };

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            space_before = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            space_before = true;
            continue;
        }
        let (start_line, start_col) = (line, col);
        let single = match c {
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            ',' => Some(TokenKind::Comma),
            ':' => Some(TokenKind::Colon),
            _ => None,
        };
        let kind = if let Some(kind) = single {
            i += 1;
            col += 1;
            kind
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                let Some(&ch) = chars.get(i) else {
                    return Err(err(
                        start_line,
                        start_col,
                        "unterminated text literal".into(),
                        &["`\"`"],
                        Some("unterminated text literal".into()),
                    ));
                };
                i += 1;
                col += 1;
                match ch {
                    '"' => break,
                    '\\' => {
                        let esc = chars.get(i).copied();
                        let out = match esc {
                            Some('"') => '"',
                            Some('\\') => '\\',
                            Some('n') => '\n',
                            Some('t') => '\t',
                            other => {
                                return Err(err(
                                    line,
                                    col,
                                    other.map_or("end of input".into(), |c| format!("`\\{c}`")),
                                    &["`\\\"`", "`\\\\`", "`\\n`", "`\\t`"],
                                    Some("invalid escape sequence".into()),
                                ))
                            }
                        };
                        s.push(out);
                        i += 1;
                        col += 1;
                    }
                    '\n' => {
                        s.push('\n');
                        line += 1;
                        col = 1;
                    }
                    other => s.push(other),
                }
            }
            TokenKind::Str(s)
        } else if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            i += 1;
            while chars.get(i).is_some_and(|d| d.is_ascii_digit()) {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            col += i - start;
            match digits.parse::<i64>() {
                Ok(n) => TokenKind::Int(n),
                Err(_) => {
                    return Err(err(
                        start_line,
                        start_col,
                        format!("integer `{digits}`"),
                        &[],
                        Some(format!("integer literal `{digits}` out of range")),
                    ))
                }
            }
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while chars.get(i).is_some_and(|d| d.is_alphanumeric() || *d == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            if ItemId::is_valid(&word) {
                TokenKind::ItemId(word)
            } else {
                TokenKind::Ident(word)
            }
        } else {
            return Err(err(
                start_line,
                start_col,
                format!("character {c:?}"),
                &["identifier", "item id", "integer", "text literal", "`[`"],
                None,
            ));
        };
        tokens.push(Token {
            kind,
            line: start_line,
            column: start_col,
            space_before,
        });
        space_before = false;
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        line,
        column: col,
        space_before,
    });
    Ok(tokens)
}

/// Token cursor shared by the content parser and the composition
/// expression parser.
pub(crate) struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Cursor {
            tokens: tokenize(text)?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn peek_at(&self, offset: usize) -> &Token {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx]
    }

    pub fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    pub fn error(&self, expected: &[&str]) -> SyntaxError {
        let tok = self.peek();
        SyntaxError {
            line: tok.line,
            column: tok.column,
            found: tok.kind.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: None,
        }
    }

    pub fn error_at(&self, tok: &Token, message: String) -> SyntaxError {
        SyntaxError {
            line: tok.line,
            column: tok.column,
            found: tok.kind.describe(),
            expected: Vec::new(),
            message: Some(message),
        }
    }

    pub fn expect(&mut self, kind: TokenKind, name: &str) -> Result<Token, SyntaxError> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            Err(self.error(&[name]))
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, Token), SyntaxError> {
        match &self.peek().kind {
            TokenKind::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump()))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    pub fn expect_eof(&self) -> Result<(), SyntaxError> {
        if self.peek().kind == TokenKind::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }
}

/// Parses a complete document. Parsing does not consult the catalog.
pub fn parse_content(text: &str) -> Result<Content, SyntaxError> {
    let mut cur = Cursor::new(text)?;
    let (name, _) = cur.expect_ident()?;
    let root = if cur.peek().kind == TokenKind::LParen {
        cur.bump();
        parse_keyed_arguments(&mut cur, name)?
    } else {
        ConstructorInstantiation::new(name)
    };
    cur.expect_eof()?;
    Ok(Content::new(root))
}

/// Parses a single value, e.g. a command-line argument.
pub fn parse_value(text: &str) -> Result<Value, SyntaxError> {
    let mut cur = Cursor::new(text)?;
    let value = parse_value_inner(&mut cur)?;
    cur.expect_eof()?;
    Ok(value)
}

const VALUE_START: &[&str] = &["integer", "text literal", "item id", "identifier", "`[`"];

fn parse_value_inner(cur: &mut Cursor) -> Result<Value, SyntaxError> {
    match cur.peek().kind.clone() {
        TokenKind::Int(n) => {
            cur.bump();
            Ok(Value::Literal(Literal::Integer(n)))
        }
        TokenKind::Str(s) => {
            cur.bump();
            Ok(Value::Literal(Literal::Text(s)))
        }
        TokenKind::ItemId(id) => {
            cur.bump();
            Ok(Value::item(ItemId::new(id).expect("lexer only emits valid item ids")))
        }
        TokenKind::LBracket => {
            cur.bump();
            let mut items = Vec::new();
            if cur.peek().kind == TokenKind::RBracket {
                cur.bump();
                return Ok(Value::List(items));
            }
            loop {
                items.push(parse_value_inner(cur)?);
                match cur.peek().kind {
                    TokenKind::Comma => {
                        cur.bump();
                    }
                    TokenKind::RBracket => {
                        cur.bump();
                        return Ok(Value::List(items));
                    }
                    _ => return Err(cur.error(&["`,`", "`]`"])),
                }
            }
        }
        TokenKind::Ident(name) => {
            cur.bump();
            parse_after_ident(cur, name)
        }
        _ => Err(cur.error(VALUE_START)),
    }
}

fn parse_after_ident(cur: &mut Cursor, name: String) -> Result<Value, SyntaxError> {
    let next = cur.peek().clone();
    match next.kind {
        TokenKind::Ident(_) => {
            let mut words = vec![name];
            while let TokenKind::Ident(w) = &cur.peek().kind {
                words.push(w.clone());
                cur.bump();
            }
            if cur.peek().kind != TokenKind::LParen {
                return Err(cur.error(&["identifier", "`(`"]));
            }
            cur.bump();
            parse_label_tail(cur, words.join(" "))
        }
        TokenKind::LParen if next.space_before && matches!(cur.peek_at(1).kind, TokenKind::ItemId(_)) && cur.peek_at(2).kind == TokenKind::RParen => {
            cur.bump();
            parse_label_tail(cur, name)
        }
        TokenKind::LParen => {
            cur.bump();
            let keyed = matches!(cur.peek().kind, TokenKind::Ident(_)) && cur.peek_at(1).kind == TokenKind::Colon;
            if keyed || cur.peek().kind == TokenKind::RParen {
                Ok(Value::constructor(parse_keyed_arguments(cur, name)?))
            } else {
                let mut args = Vec::new();
                loop {
                    args.push(parse_value_inner(cur)?);
                    match cur.peek().kind {
                        TokenKind::Comma => {
                            cur.bump();
                        }
                        TokenKind::RParen => {
                            cur.bump();
                            break;
                        }
                        _ => return Err(cur.error(&["`,`", "`)`"])),
                    }
                }
                Ok(Value::FunctionCall(FunctionCall {
                    function_id: name,
                    args,
                }))
            }
        }
        _ => Ok(Value::Enum(name)),
    }
}

/// Parses `QID ")"` after a label and its opening parenthesis.
fn parse_label_tail(cur: &mut Cursor, label: String) -> Result<Value, SyntaxError> {
    let TokenKind::ItemId(id) = cur.peek().kind.clone() else {
        return Err(cur.error(&["item id"]));
    };
    cur.bump();
    cur.expect(TokenKind::RParen, "`)`")?;
    let id = ItemId::new(id).expect("lexer only emits valid item ids");
    Ok(Value::Item(ItemRef {
        id,
        label: Some(label),
    }))
}

/// Parses `[argument ("," argument)*] ")"` after the opening parenthesis.
fn parse_keyed_arguments(cur: &mut Cursor, name: String) -> Result<ConstructorInstantiation, SyntaxError> {
    let mut arguments = IndexMap::new();
    if cur.peek().kind == TokenKind::RParen {
        cur.bump();
        return Ok(ConstructorInstantiation {
            constructor_id: name,
            arguments,
        });
    }
    loop {
        let (key, key_tok) = cur.expect_ident()?;
        cur.expect(TokenKind::Colon, "`:`")?;
        let value = parse_value_inner(cur)?;
        if arguments.contains_key(&key) {
            return Err(cur.error_at(&key_tok, format!("duplicate key `{key}`")));
        }
        arguments.insert(key, value);
        match cur.peek().kind {
            TokenKind::Comma => {
                cur.bump();
            }
            TokenKind::RParen => {
                cur.bump();
                break;
            }
            _ => return Err(cur.error(&["`,`", "`)`"])),
        }
    }
    Ok(ConstructorInstantiation {
        constructor_id: name,
        arguments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_constructor_is_zero_argument_root() {
        let c = parse_content("cultural").unwrap();
        assert_eq!(c.root.constructor_id, "cultural");
        assert!(c.root.arguments.is_empty());
    }

    #[test]
    fn missing_colon_points_at_following_token() {
        let e = parse_content("Ranking(subject Q62)").unwrap_err();
        assert_eq!((e.line, e.column), (1, 17));
        assert_eq!(e.expected, vec!["`:`"]);
        assert!(e.found.contains("Q62"));
    }

    #[test]
    fn labeled_items_and_calls() {
        let v = parse_value("San Francisco (Q62)").unwrap();
        assert_eq!(
            v,
            Value::Item(ItemRef {
                id: ItemId::new("Q62").unwrap(),
                label: Some("San Francisco".into())
            })
        );
        let v = parse_value("city (Q515)").unwrap();
        assert!(matches!(v, Value::Item(ItemRef { label: Some(_), .. })));
        let v = parse_value("label(Q515)").unwrap();
        assert!(matches!(v, Value::FunctionCall(_)));
        let v = parse_value("add(2, -3)").unwrap();
        assert_eq!(
            v,
            Value::FunctionCall(FunctionCall {
                function_id: "add".into(),
                args: vec![Value::int(2), Value::int(-3)]
            })
        );
    }

    #[test]
    fn empty_parens_collapse_to_enum() {
        assert_eq!(parse_value("Foo()").unwrap(), Value::Enum("Foo".into()));
        assert_eq!(parse_value("Foo").unwrap(), Value::Enum("Foo".into()));
    }

    #[test]
    fn duplicate_key_is_error() {
        let e = parse_content("A(x: 1, x: 2)").unwrap_err();
        assert_eq!(e.column, 9);
        assert!(e.message.unwrap().contains("duplicate"));
    }

    #[test]
    fn text_escapes() {
        let v = parse_value(r#""a \"b\" \\ c""#).unwrap();
        assert_eq!(v, Value::text(r#"a "b" \ c"#));
        assert!(parse_value("\"open").is_err());
    }

    #[test]
    fn q_zero_is_an_identifier() {
        assert_eq!(parse_value("Q0").unwrap(), Value::Enum("Q0".into()));
    }

    #[test]
    fn trailing_input_rejected() {
        let e = parse_content("A(x: 1) B").unwrap_err();
        assert_eq!(e.expected, vec!["end of input"]);
    }
}
