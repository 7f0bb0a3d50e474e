use super::{BinOp, Expr, ExprKind, Func, ParseError, ParseErrorKind, SourceSpan};

const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn syntax(msg: impl Into<String>, span: SourceSpan) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax(msg.into()),
        span,
    }
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token {
                tok,
                span: SourceSpan::new(i, i + 1),
            });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let span = SourceSpan::new(start, i);
            let text = &src[start..i];
            let value: f64 = text
                .parse()
                .map_err(|_| syntax(format!("malformed number '{text}'"), span))?;
            if !value.is_finite() {
                return Err(syntax(format!("number '{text}' is out of range"), span));
            }
            out.push(Token {
                tok: Tok::Number(value),
                span,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                span: SourceSpan::new(start, i),
            });
            continue;
        }
        let ch = src[i..].chars().next().unwrap_or('?');
        let span = SourceSpan::new(i, i + ch.len_utf8());
        return Err(syntax(format!("unexpected character '{ch}'"), span));
    }
    out.push(Token {
        tok: Tok::End,
        span: SourceSpan::new(src.len(), src.len()),
    });
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    allowed: &'a [String],
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Number(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::End => "end of input".to_string(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(syntax("expression nested too deeply", self.peek().span));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek().tok == Tok::Minus {
            let minus = self.bump();
            let inner = self.power()?;
            let span = minus.span.join(inner.span);
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp_tok = self.bump();
        let text = &self.src[exp_tok.span.start..exp_tok.span.end];
        match exp_tok.tok {
            Tok::Number(_) if text.bytes().all(|b| b.is_ascii_digit()) => {
                let n: u32 = text.parse().map_err(|_| ParseError {
                    kind: ParseErrorKind::NonIntegerExponent(text.to_string()),
                    span: exp_tok.span,
                })?;
                let span = base.span.join(exp_tok.span);
                Ok(Expr::new(ExprKind::Pow(Box::new(base), n), span))
            }
            Tok::Number(_) | Tok::Minus | Tok::Ident(_) | Tok::LParen => Err(ParseError {
                kind: ParseErrorKind::NonIntegerExponent(if text.is_empty() {
                    Self::describe(&exp_tok.tok)
                } else {
                    text.to_string()
                }),
                span: exp_tok.span,
            }),
            other => Err(syntax(
                format!("expected integer exponent, found {}", Self::describe(&other)),
                exp_tok.span,
            )),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = self.bump();
        match tok.tok {
            Tok::Number(v) => Ok(Expr::new(ExprKind::Num(v), tok.span)),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(syntax(
                        format!("expected ')', found {}", Self::describe(&close.tok)),
                        close.span,
                    ));
                }
                Ok(Expr::new(inner.kind, tok.span.join(close.span)))
            }
            Tok::Ident(name) => {
                if self.peek().tok == Tok::LParen {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(ParseError {
                            kind: ParseErrorKind::UnknownIdentifier(name),
                            span: tok.span,
                        });
                    };
                    self.bump();
                    self.enter()?;
                    let arg = self.expr()?;
                    self.depth -= 1;
                    let close = self.bump();
                    if close.tok != Tok::RParen {
                        return Err(syntax(
                            format!(
                                "expected ')' closing {}(, found {}",
                                func.name(),
                                Self::describe(&close.tok)
                            ),
                            close.span,
                        ));
                    }
                    return Ok(Expr::new(
                        ExprKind::Call(func, Box::new(arg)),
                        tok.span.join(close.span),
                    ));
                }
                if name == "pi" {
                    return Ok(Expr::new(ExprKind::Pi, tok.span));
                }
                if self.allowed.contains(&name) {
                    Ok(Expr::new(ExprKind::Var(name), tok.span))
                } else {
                    Err(ParseError {
                        kind: ParseErrorKind::UnknownIdentifier(name),
                        span: tok.span,
                    })
                }
            }
            other => Err(syntax(
                format!("expected an operand, found {}", Self::describe(&other)),
                tok.span,
            )),
        }
    }
}

/// Parses `source` into an expression whose free variables are drawn from
/// `allowed_vars`.
pub fn parse(source: &str, allowed_vars: &[String]) -> Result<Expr, ParseError> {
    let tokens = lex(source)?;
    let mut p = Parser {
        src: source,
        tokens,
        pos: 0,
        allowed: allowed_vars,
        depth: 0,
    };
    let e = p.expr()?;
    let trailing = p.peek().clone();
    if trailing.tok != Tok::End {
        return Err(syntax(
            format!("unexpected {} after expression", Parser::describe(&trailing.tok)),
            trailing.span,
        ));
    }
    Ok(e)
}
