//! Scalar expression language for metric entries, Kähler potentials and
//! immersion components.
//!
//! ```text
//! expr   := term { ("+"|"-") term } ;
//! term   := factor { ("*"|"/") factor } ;
//! factor := ["-"] power ;
//! power  := atom [ "^" integer ] ;
//! atom   := number | ident | ident "(" expr ")" | "(" expr ")" | "pi" ;
//! ```
//!
//! Expressions are immutable once parsed and can be shared across threads.

mod eval;
mod parser;

use std::fmt;

use thiserror::Error;

pub use eval::{eval_generic, eval_value};
pub use parser::parse;

/// Byte offsets `[start, end)` into the source string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn join(self, other: SourceSpan) -> Self {
        Self::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),
    #[error("exponent must be a non-negative integer literal, found '{0}'")]
    NonIntegerExponent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {span}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

impl ParseError {
    /// Renders the error with a caret line under the offending source range.
    pub fn render(&self, source: &str) -> String {
        let start = self.span.start.min(source.len());
        let width = self.span.end.saturating_sub(self.span.start).max(1);
        let pad: String = source[..start].chars().map(|_| ' ').collect();
        format!("{self}\n  {source}\n  {pad}{}", "^".repeat(width))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

/// The single-argument functions the language accepts. All are smooth on
/// their domains, which keeps second-order jets well defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Atan,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Atan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Atan => "atan",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Num(f64),
    Var(String),
    Pi,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

/// A parsed expression node. Equality is structural and ignores spans.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Num(a), Num(b)) => a.to_bits() == b.to_bits(),
            (Var(a), Var(b)) => a == b,
            (Pi, Pi) => true,
            (Neg(a), Neg(b)) => a == b,
            (Binary(o1, a1, b1), Binary(o2, a2, b2)) => o1 == o2 && a1 == a2 && b1 == b2,
            (Pow(a, n), Pow(b, m)) => n == m && a == b,
            (Call(f, a), Call(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: SourceSpan) -> Self {
        Self { kind, span }
    }

    /// Distinct free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match &self.kind {
            ExprKind::Var(name) => {
                if !out.iter().any(|v| v == name) {
                    out.push(name.clone());
                }
            }
            ExprKind::Num(_) | ExprKind::Pi => {}
            ExprKind::Neg(e) | ExprKind::Pow(e, _) | ExprKind::Call(_, e) => e.collect_vars(out),
            ExprKind::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Nodes that print without parentheses in a `power` or `factor` slot.
    fn is_atomic(&self) -> bool {
        matches!(
            self.kind,
            ExprKind::Num(_) | ExprKind::Var(_) | ExprKind::Pi | ExprKind::Call(..)
        )
    }
}

fn fmt_number(v: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // `{:?}` is the shortest representation that round-trips exactly.
    let s = format!("{v:?}");
    f.write_str(&s)
}

/// Pretty-printing is fully parenthesized for binary nodes, so the output
/// always reparses to a structurally identical tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Num(v) => fmt_number(*v, f),
            ExprKind::Var(name) => f.write_str(name),
            ExprKind::Pi => f.write_str("pi"),
            ExprKind::Neg(e) => {
                if e.is_atomic() || matches!(e.kind, ExprKind::Pow(..)) {
                    write!(f, "-{e}")
                } else {
                    write!(f, "-({e})")
                }
            }
            ExprKind::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            ExprKind::Pow(base, n) => {
                if base.is_atomic() {
                    write!(f, "{base}^{n}")
                } else {
                    write!(f, "({base})^{n}")
                }
            }
            ExprKind::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

/// Variable names `prefix1 .. prefixN`.
pub fn indexed_names(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|k| format!("{prefix}{k}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_reparses() {
        let vars = indexed_names("x", 3);
        for src in [
            "x1^2 + x2^2",
            "-x1^2",
            "-(x1 + 2)",
            "4/(1 - x1^2 - x2^2)^2",
            "sin(pi*x1) - -x2",
            "exp(ln(2))*1e-7",
            "(x1*x2)^3/x3",
        ] {
            let e = parse(src, &vars).unwrap();
            let printed = e.to_string();
            let again = parse(&printed, &vars).unwrap();
            assert_eq!(e, again, "{src} -> {printed}");
        }
    }

    #[test]
    fn free_vars_in_order() {
        let vars = indexed_names("u", 3);
        let e = parse("u3*u1 + u3", &vars).unwrap();
        assert_eq!(e.free_vars(), vec!["u3".to_string(), "u1".to_string()]);
    }

    #[test]
    fn error_render_points_at_span() {
        let src = "x1 + foo";
        let err = parse(src, &["x1".to_string()]).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UnknownIdentifier(ref n) if n == "foo"));
        let text = err.render(src);
        assert!(text.ends_with("     ^^^"), "{text}");
    }
}
