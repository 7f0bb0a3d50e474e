use std::collections::HashMap;

use super::{BinOp, Expr, ExprKind, Func};
use crate::error::{GeoError, Result};
use crate::jet::Scalar;

fn domain(e: &Expr, message: impl Into<String>) -> GeoError {
    GeoError::Domain {
        message: message.into(),
        span: e.span,
    }
}

fn finite<T: Scalar>(e: &Expr, v: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(domain(e, "non-finite result"))
    }
}

/// Evaluates `e` over any [`Scalar`], resolving variables through `lookup`.
/// Domain checks use the primal value of each argument.
pub fn eval_generic<T: Scalar>(e: &Expr, lookup: &dyn Fn(&str) -> Option<T>) -> Result<T> {
    let v = match &e.kind {
        ExprKind::Num(v) => T::constant(*v),
        ExprKind::Pi => T::constant(std::f64::consts::PI),
        ExprKind::Var(name) => lookup(name).ok_or_else(|| GeoError::UnboundVariable(name.clone()))?,
        ExprKind::Neg(a) => -eval_generic(a, lookup)?,
        ExprKind::Binary(op, a, b) => {
            let x = eval_generic(a, lookup)?;
            let y = eval_generic(b, lookup)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y.primal() == 0.0 {
                        return Err(domain(e, "division by zero"));
                    }
                    x / y
                }
            }
        }
        ExprKind::Pow(a, n) => {
            let x = eval_generic(a, lookup)?;
            let n = i32::try_from(*n).map_err(|_| domain(e, "exponent too large"))?;
            x.powi(n)
        }
        ExprKind::Call(f, a) => {
            let x = eval_generic(a, lookup)?;
            let p = x.primal();
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => x.tan(),
                Func::Exp => x.exp(),
                Func::Ln => {
                    if p <= 0.0 {
                        return Err(domain(e, format!("ln of non-positive value {p}")));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if p < 0.0 || (T::DIFFERENTIABLE && p == 0.0) {
                        return Err(domain(e, format!("sqrt of non-positive value {p}")));
                    }
                    x.sqrt()
                }
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Tanh => x.tanh(),
                Func::Atan => x.atan(),
            }
        }
    };
    finite(e, v)
}

/// Plain real evaluation with named bindings.
pub fn eval_value(e: &Expr, bindings: &HashMap<String, f64>) -> Result<f64> {
    eval_generic(e, &|name: &str| bindings.get(name).copied())
}
