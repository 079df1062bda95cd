use super::ast::{BinOp, Func, Kind, Node, Span};
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64, bool),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
    line: usize,
    column: usize,
    text: String,
}

fn describe(t: &Token) -> String {
    match t.tok {
        Tok::Eof => "end of input".to_string(),
        _ => format!("'{}'", t.text),
    }
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let (pos, ch) = chars[k];
        if ch == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if ch.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        let start_col = col;
        let start = k;
        let tok = if ch.is_ascii_digit() || ch == '.' {
            let mut is_int = true;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            if k < chars.len() && chars[k].1 == '.' {
                is_int = false;
                k += 1;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
            }
            if k < chars.len() && (chars[k].1 == 'e' || chars[k].1 == 'E') {
                let save = k;
                k += 1;
                if k < chars.len() && (chars[k].1 == '+' || chars[k].1 == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].1.is_ascii_digit() {
                    is_int = false;
                    while k < chars.len() && chars[k].1.is_ascii_digit() {
                        k += 1;
                    }
                } else {
                    k = save;
                }
            }
            let text: String = chars[start..k].iter().map(|c| c.1).collect();
            match text.parse::<f64>() {
                Ok(v) if v.is_finite() => Tok::Number(v, is_int),
                _ => {
                    return Err(ParseError {
                        line,
                        column: start_col,
                        found: format!("'{text}'"),
                        expected: vec!["number".into()],
                    })
                }
            }
        } else if ch.is_alphabetic() || ch == '_' {
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            Tok::Ident(chars[start..k].iter().map(|c| c.1).collect())
        } else {
            k += 1;
            match ch {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(ch),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(ParseError {
                        line,
                        column: start_col,
                        found: format!("'{ch}'"),
                        expected: vec!["expression".into()],
                    })
                }
            }
        };
        let end = if k < chars.len() { chars[k].0 } else { src.len() };
        col += k - start;
        out.push(Token {
            text: src[pos..end].to_string(),
            tok,
            span: Span { start: pos, end },
            line,
            column: start_col,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span {
            start: src.len(),
            end: src.len(),
        },
        line,
        column: col,
        text: String::new(),
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            column: t.column,
            found: describe(t),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            lhs = Node::spanned(Kind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            lhs = Node::spanned(Kind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn factor(&mut self) -> Result<Node, ParseError> {
        let base = self.base()?;
        if self.peek().tok != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(v, true) if v <= u32::MAX as f64 => {
                self.bump();
                let span = Span {
                    start: base.span.start,
                    end: t.span.end,
                };
                Ok(Node::spanned(Kind::Pow(Box::new(base), v as u32), span))
            }
            _ => Err(self.error(&["non-negative integer exponent"])),
        }
    }

    fn base(&mut self) -> Result<Node, ParseError> {
        const EXPECTED: [&str; 6] = ["number", "'i'", "'pi'", "'z'", "function call", "'('"];
        let t = self.peek().clone();
        match &t.tok {
            Tok::Number(v, _) => {
                self.bump();
                Ok(Node::spanned(Kind::Num(*v), t.span))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.error(&["')'", "operator"]));
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => {
                    self.bump();
                    Ok(Node::spanned(Kind::I, t.span))
                }
                "pi" => {
                    self.bump();
                    Ok(Node::spanned(Kind::Pi, t.span))
                }
                "z" => {
                    self.bump();
                    Ok(Node::spanned(Kind::Z, t.span))
                }
                _ => {
                    let Some(func) = Func::from_name(name) else {
                        let mut expected: Vec<&str> = vec!["'i'", "'pi'", "'z'"];
                        expected.extend(Func::ALL.iter().map(|f| f.name()));
                        return Err(self.error(&expected));
                    };
                    self.bump();
                    if self.peek().tok != Tok::LParen {
                        return Err(self.error(&["'('"]));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    if self.peek().tok != Tok::RParen {
                        return Err(self.error(&["')'", "operator"]));
                    }
                    let close = self.bump();
                    let span = Span {
                        start: t.span.start,
                        end: close.span.end,
                    };
                    Ok(Node::spanned(Kind::Call(func, Box::new(arg)), span))
                }
            },
            _ => Err(self.error(&EXPECTED)),
        }
    }
}

pub fn parse(src: &str) -> Result<Node, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let node = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error(&["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]));
    }
    Ok(node)
}
