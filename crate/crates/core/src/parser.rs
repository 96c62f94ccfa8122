//! ASCII concrete syntax, pretty-printer and the JSON interchange tree.
//!
//! ```text
//! formula := grad ( "->" formula )?            right-assoc, desugars to !lhs | rhs
//! grad    := bool ( ">" grad )?                right-assoc
//! bool    := unary ( ("&" | "|") unary )*      left-assoc, & and | may not mix
//! unary   := "!" unary | primary
//! primary := ident "'"? | "top" | "bot" | "(" formula ")"
//! ```

use std::fmt;

use serde_json::{json, Map, Value};

use crate::formula::{is_ident_char, AtomName, AtomNameError, Formula, Polarity, SElem};

/// Byte range `begin..end` into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(begin: usize, end: usize) -> Self {
        debug_assert!(begin <= end);
        SourceSpan { begin, end }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    Lex,
    Paren,
    Ambiguous,
    Empty,
    Reserved,
    Syntax,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Lex => "E_LEX",
            ErrorCode::Paren => "E_PAREN",
            ErrorCode::Ambiguous => "E_AMBIGUOUS",
            ErrorCode::Empty => "E_EMPTY",
            ErrorCode::Reserved => "E_RESERVED",
            ErrorCode::Syntax => "E_SYNTAX",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub code: ErrorCode,
    pub message: String,
}

impl ParseError {
    fn new(code: ErrorCode, span: SourceSpan, detail: impl fmt::Display) -> Self {
        let template = match code {
            ErrorCode::Lex => "unrecognized input",
            ErrorCode::Paren => "unbalanced parentheses",
            ErrorCode::Ambiguous => "`&` and `|` mixed without parentheses",
            ErrorCode::Empty => "empty formula",
            ErrorCode::Reserved => "reserved word used as an atom",
            ErrorCode::Syntax => "syntax error",
        };
        let detail = detail.to_string();
        let message = if detail.is_empty() { template.to_string() } else { format!("{template}: {detail}") };
        ParseError { span, code, message }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}..{}: {}", self.code.as_str(), self.span.begin, self.span.end, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String, bool),
    Top,
    Bot,
    Not,
    And,
    Or,
    Gt,
    Arrow,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let c = text[i..].chars().next().unwrap();
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let simple = match c {
            '!' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '>' => Some(Tok::Gt),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            i += 1;
            out.push((t, SourceSpan::new(start, i)));
            continue;
        }
        if c == '-' && bytes.get(i + 1) == Some(&b'>') {
            i += 2;
            out.push((Tok::Arrow, SourceSpan::new(start, i)));
            continue;
        }
        if is_ident_char(c) {
            while i < text.len() && is_ident_char(bytes[i] as char) {
                i += 1;
            }
            let word = &text[start..i];
            let primed = bytes.get(i) == Some(&b'\'');
            if primed {
                i += 1;
            }
            let span = SourceSpan::new(start, i);
            let tok = match (word, primed) {
                ("top", false) => Tok::Top,
                ("bot", false) => Tok::Bot,
                ("top" | "bot", true) => {
                    return Err(ParseError::new(
                        ErrorCode::Reserved,
                        span,
                        format!("`{word}` cannot be complemented as an atom"),
                    ))
                }
                _ => Tok::Ident(word.to_string(), primed),
            };
            out.push((tok, span));
            continue;
        }
        return Err(ParseError::new(
            ErrorCode::Lex,
            SourceSpan::new(start, start + c.len_utf8()),
            format!("unexpected character {c:?}"),
        ));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    len: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> SourceSpan {
        self.toks.get(self.pos).map(|(_, s)| *s).unwrap_or(SourceSpan::new(self.len, self.len))
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.grad()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::or(Formula::not(lhs), rhs));
        }
        Ok(lhs)
    }

    fn grad(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.boolean()?;
        if self.peek() == Some(&Tok::Gt) {
            self.bump();
            let rhs = self.grad()?;
            return Ok(Formula::grad(lhs, rhs));
        }
        Ok(lhs)
    }

    fn boolean(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        let mut seen: Option<Tok> = None;
        while let Some(op @ (Tok::And | Tok::Or)) = self.peek().cloned() {
            let (_, span) = self.bump();
            if let Some(prev) = &seen {
                if *prev != op {
                    return Err(ParseError::new(ErrorCode::Ambiguous, span, "add parentheses"));
                }
            }
            let rhs = self.unary()?;
            acc = if op == Tok::And { Formula::and(acc, rhs) } else { Formula::or(acc, rhs) };
            seen = Some(op);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(&Tok::Not) {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let span = self.span();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::new(ErrorCode::Syntax, span, "expected a formula, found end of input"));
        };
        match tok {
            Tok::Ident(name, primed) => {
                self.bump();
                let name = AtomName::new(&name).map_err(|e| match e {
                    AtomNameError::Reserved(_) => ParseError::new(ErrorCode::Reserved, span, e),
                    _ => ParseError::new(ErrorCode::Lex, span, e),
                })?;
                let polarity = if primed { Polarity::Negative } else { Polarity::Positive };
                Ok(Formula::Elem(SElem::Lit { name, polarity }))
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::top())
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::bot())
            }
            Tok::LParen => {
                self.bump();
                if self.peek() == Some(&Tok::RParen) {
                    let close = self.span();
                    return Err(ParseError::new(
                        ErrorCode::Empty,
                        SourceSpan::new(span.begin, close.end),
                        "empty parentheses",
                    ));
                }
                self.depth += 1;
                let inner = self.formula()?;
                self.depth -= 1;
                if self.peek() == Some(&Tok::RParen) {
                    self.bump();
                    Ok(inner)
                } else if self.peek().is_none() {
                    Err(ParseError::new(ErrorCode::Paren, span, "`(` is never closed"))
                } else {
                    Err(ParseError::new(ErrorCode::Syntax, self.span(), "expected `)`"))
                }
            }
            Tok::RParen if self.depth == 0 => Err(ParseError::new(ErrorCode::Paren, span, "`)` without matching `(`")),
            other => {
                Err(ParseError::new(ErrorCode::Syntax, span, format!("expected a formula, found {}", describe(&other))))
            }
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Ident(..) => "an atom",
        Tok::Top => "`top`",
        Tok::Bot => "`bot`",
        Tok::Not => "`!`",
        Tok::And => "`&`",
        Tok::Or => "`|`",
        Tok::Gt => "`>`",
        Tok::Arrow => "`->`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
    }
}

/// Parses the ASCII syntax. `->` is desugared, so it never appears in the result.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError::new(ErrorCode::Empty, SourceSpan::new(0, text.len()), ""));
    }
    let mut p = Parser { toks, pos: 0, len: text.len(), depth: 0 };
    let f = p.formula()?;
    match p.peek() {
        None => Ok(f),
        Some(Tok::RParen) => Err(ParseError::new(ErrorCode::Paren, p.span(), "`)` without matching `(`")),
        Some(t) => {
            let msg = format!("expected an operator or end of input, found {}", describe(t));
            Err(ParseError::new(ErrorCode::Syntax, p.span(), msg))
        }
    }
}

// Binding strength used by the printer: higher binds tighter.
const PREC_GRAD: u8 = 1;
const PREC_BOOL: u8 = 2;
const PREC_NOT: u8 = 3;
const PREC_ATOM: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Grad(..) => PREC_GRAD,
        Formula::And(..) | Formula::Or(..) => PREC_BOOL,
        Formula::Not(_) => PREC_NOT,
        Formula::Elem(_) => PREC_ATOM,
    }
}

/// Minimal-parenthesis rendering; `parse(&pretty(f)) == Ok(f)`.
pub fn pretty(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Elem(s) => out.push_str(&s.to_string()),
        Formula::Not(x) => {
            out.push('!');
            write_wrapped(x, prec(x) < PREC_NOT, out);
        }
        Formula::Grad(l, r) => {
            write_wrapped(l, prec(l) <= PREC_GRAD, out);
            out.push_str(" > ");
            write_wrapped(r, false, out);
        }
        Formula::And(l, r) | Formula::Or(l, r) => {
            let is_and = matches!(f, Formula::And(..));
            // Left operand may repeat the same connective; anything else of
            // equal or lower strength needs parentheses.
            let same = |g: &Formula| matches!((is_and, g), (true, Formula::And(..)) | (false, Formula::Or(..)));
            write_wrapped(l, prec(l) < PREC_BOOL || (prec(l) == PREC_BOOL && !same(l)), out);
            out.push_str(if is_and { " & " } else { " | " });
            write_wrapped(r, prec(r) <= PREC_BOOL, out);
        }
    }
}

fn write_wrapped(f: &Formula, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

/// JSON tree: `{"op":"and"|"or"|"not"|"grad","args":[…]}` for inner nodes and
/// `{"op":"elem","kind":"top"|"bot"|"lit","name":…,"neg":bool}` for leaves.
pub fn to_interchange_value(f: &Formula) -> Value {
    match f {
        Formula::Elem(SElem::Top) => json!({"op": "elem", "kind": "top"}),
        Formula::Elem(SElem::Bot) => json!({"op": "elem", "kind": "bot"}),
        Formula::Elem(SElem::Lit { name, polarity }) => json!({
            "op": "elem",
            "kind": "lit",
            "name": name.as_str(),
            "neg": *polarity == Polarity::Negative,
        }),
        Formula::Not(x) => json!({"op": "not", "args": [to_interchange_value(x)]}),
        Formula::And(l, r) => json!({"op": "and", "args": [to_interchange_value(l), to_interchange_value(r)]}),
        Formula::Or(l, r) => json!({"op": "or", "args": [to_interchange_value(l), to_interchange_value(r)]}),
        Formula::Grad(l, r) => json!({"op": "grad", "args": [to_interchange_value(l), to_interchange_value(r)]}),
    }
}

pub fn to_interchange(f: &Formula) -> String {
    to_interchange_value(f).to_string()
}

pub fn from_interchange(text: &str) -> Result<Formula, ParseError> {
    let whole = SourceSpan::new(0, text.len());
    let value: Value = serde_json::from_str(text).map_err(|e| {
        let at = offset_of(text, e.line(), e.column());
        ParseError::new(ErrorCode::Lex, SourceSpan::new(at, at), e)
    })?;
    from_interchange_value(&value).map_err(|(code, msg)| ParseError::new(code, whole, msg))
}

fn offset_of(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

fn from_interchange_value(v: &Value) -> Result<Formula, (ErrorCode, String)> {
    let malformed = |m: &str| (ErrorCode::Lex, m.to_string());
    let obj: &Map<String, Value> = v.as_object().ok_or_else(|| malformed("node is not an object"))?;
    let op = obj.get("op").and_then(Value::as_str).ok_or_else(|| malformed("missing string field `op`"))?;
    let args = || -> Result<Vec<Formula>, (ErrorCode, String)> {
        obj.get("args")
            .and_then(Value::as_array)
            .ok_or_else(|| malformed("missing array field `args`"))?
            .iter()
            .map(from_interchange_value)
            .collect()
    };
    let binary = |ctor: fn(Formula, Formula) -> Formula| -> Result<Formula, (ErrorCode, String)> {
        let mut a = args()?;
        if a.len() != 2 {
            return Err(malformed(&format!("`{op}` takes 2 args, got {}", a.len())));
        }
        let r = a.pop().unwrap();
        let l = a.pop().unwrap();
        Ok(ctor(l, r))
    };
    match op {
        "and" => binary(Formula::and),
        "or" => binary(Formula::or),
        "grad" => binary(Formula::grad),
        "not" => {
            let mut a = args()?;
            if a.len() != 1 {
                return Err(malformed(&format!("`not` takes 1 arg, got {}", a.len())));
            }
            Ok(Formula::not(a.pop().unwrap()))
        }
        "elem" => match obj.get("kind").and_then(Value::as_str) {
            Some("top") => Ok(Formula::top()),
            Some("bot") => Ok(Formula::bot()),
            Some("lit") => {
                let name =
                    obj.get("name").and_then(Value::as_str).ok_or_else(|| malformed("literal without `name`"))?;
                let neg = match obj.get("neg") {
                    None => false,
                    Some(Value::Bool(b)) => *b,
                    Some(_) => return Err(malformed("`neg` must be a boolean")),
                };
                let name = AtomName::new(name).map_err(|e| match e {
                    AtomNameError::Reserved(_) => (ErrorCode::Reserved, e.to_string()),
                    _ => (ErrorCode::Lex, e.to_string()),
                })?;
                let polarity = if neg { Polarity::Negative } else { Polarity::Positive };
                Ok(Formula::Elem(SElem::Lit { name, polarity }))
            }
            _ => Err(malformed("`kind` must be one of top, bot, lit")),
        },
        other => Err(malformed(&format!("unknown op `{other}`"))),
    }
}
