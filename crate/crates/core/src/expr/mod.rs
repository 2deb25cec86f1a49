//! Scalar expressions for Hamiltonians and custom chart functions.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          // exponent must fold to an integer
//! primary := number | 'x'<i> | ('ln' | 'exp') '(' expr ')' | '(' expr ')'
//! ```
//!
//! Variables are written `x1 .. xn`; a bare `x` is accepted when `n == 1`.
//! Numeric literals are exact rationals. The parser folds a unary minus
//! applied to a constant, and a quotient of two constants, into a single
//! constant, so printed expressions reparse to the same tree.

mod diff;
mod parse;

use std::fmt;

use thiserror::Error;

use crate::linalg::Rational;

pub use parse::parse;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier {name:?} at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("variable x{index} at offset {offset} is out of range for dimension {dim}")]
    IndexOutOfRange {
        offset: usize,
        index: usize,
        dim: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("ln of nonpositive value {0}")]
    LnDomain(f64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("point has dimension {found}, expression is bound to {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Ln,
    Exp,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Ln => "ln",
            Func::Exp => "exp",
        }
    }
}

/// Expression tree. Variables are 0-based internally and print 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Const(Rational),
    Var(usize),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Neg(Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    pub fn eval(&self, x: &[f64]) -> Result<f64, EvalError> {
        Ok(match self {
            Node::Const(c) => c.to_f64(),
            Node::Var(i) => x[*i],
            Node::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Node::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Node::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Node::Div(a, b) => {
                let den = b.eval(x)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval(x)? / den
            }
            Node::Pow(base, k) => {
                let v = base.eval(x)?;
                if *k < 0 && v == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                v.powi(*k)
            }
            Node::Neg(a) => -a.eval(x)?,
            Node::Call(Func::Ln, a) => {
                let v = a.eval(x)?;
                if v <= 0.0 {
                    return Err(EvalError::LnDomain(v));
                }
                v.ln()
            }
            Node::Call(Func::Exp, a) => a.eval(x)?.exp(),
        })
    }

    /// Exact value when the tree contains no variables and no functions.
    pub fn const_value(&self) -> Option<Rational> {
        match self {
            Node::Const(c) => Some(c.clone()),
            Node::Var(_) | Node::Call(..) => None,
            Node::Add(a, b) => Some(a.const_value()? + b.const_value()?),
            Node::Sub(a, b) => Some(a.const_value()? - b.const_value()?),
            Node::Mul(a, b) => Some(a.const_value()? * b.const_value()?),
            Node::Div(a, b) => {
                let den = b.const_value()?;
                if den.is_zero() {
                    None
                } else {
                    Some(a.const_value()? / den)
                }
            }
            Node::Pow(a, k) => a.const_value()?.pow(*k),
            Node::Neg(a) => Some(-a.const_value()?),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Node::Const(_) => None,
            Node::Var(i) => Some(*i),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
            Node::Pow(a, _) | Node::Neg(a) | Node::Call(_, a) => a.max_var(),
        }
    }

    // binding strength used by the printer; mirrors the grammar levels
    fn precedence(&self) -> u8 {
        match self {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Const(c) if !c.is_integer() => 2,
            Node::Neg(_) => 3,
            Node::Const(c) if c.is_negative() => 3,
            Node::Pow(..) => 4,
            Node::Const(_) | Node::Var(_) | Node::Call(..) => 5,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(i) => write!(f, "x{}", i + 1),
            Node::Add(a, b) => {
                a.write_child(f, 1)?;
                f.write_str(" + ")?;
                b.write_child(f, 2)
            }
            Node::Sub(a, b) => {
                a.write_child(f, 1)?;
                f.write_str(" - ")?;
                b.write_child(f, 2)
            }
            Node::Mul(a, b) => {
                a.write_child(f, 2)?;
                f.write_str("*")?;
                b.write_child(f, 3)
            }
            Node::Div(a, b) => {
                a.write_child(f, 2)?;
                f.write_str("/")?;
                b.write_child(f, 3)
            }
            Node::Neg(a) => {
                f.write_str("-")?;
                a.write_child(f, 3)
            }
            Node::Pow(a, k) => {
                a.write_child(f, 5)?;
                if *k < 0 {
                    write!(f, "^({k})")
                } else {
                    write!(f, "^{k}")
                }
            }
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// An expression bound to a dimension `n`: every variable index is below `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Expr {
    root: Node,
    dim: usize,
}

impl Expr {
    pub fn new(root: Node, dim: usize) -> Option<Self> {
        match root.max_var() {
            Some(i) if i >= dim => None,
            _ => Some(Expr { root, dim }),
        }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64, EvalError> {
        if x.len() != self.dim {
            return Err(EvalError::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        self.root.eval(x)
    }

    /// Symbolic partial derivative with respect to the 0-based variable `var`.
    pub fn differentiate(&self, var: usize) -> Expr {
        assert!(
            var < self.dim,
            "variable index {var} out of range for dimension {}",
            self.dim
        );
        Expr {
            root: diff::derivative(&self.root, var),
            dim: self.dim,
        }
    }

    pub fn gradient(&self) -> Vec<Expr> {
        (0..self.dim).map(|i| self.differentiate(i)).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.root.max_var().is_none()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.root, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates() {
        let e = parse("x1*x2", 2).unwrap();
        assert_eq!(e.evaluate(&[2.0, 3.0]).unwrap(), 6.0);
        let ln = parse("ln(x1)", 1).unwrap();
        assert_eq!(ln.evaluate(&[1.0]).unwrap(), 0.0);
        assert!(matches!(ln.evaluate(&[-1.0]), Err(EvalError::LnDomain(_))));
        let div = parse("1/(x1 - 1)", 1).unwrap();
        assert_eq!(div.evaluate(&[1.0]), Err(EvalError::DivisionByZero));
        assert!(matches!(
            e.evaluate(&[1.0]),
            Err(EvalError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn precedence_semantics() {
        let x = [2.0, 3.0];
        let val = |s: &str| parse(s, 2).unwrap().evaluate(&x).unwrap();
        assert_eq!(val("-x1^2"), -4.0);
        assert_eq!(val("(-x1)^2"), 4.0);
        assert_eq!(val("2^3^2"), 512.0);
        assert_eq!(val("x2 - x1 - 1"), 0.0);
        assert_eq!(val("12/x1/x2"), 2.0);
        assert_eq!(val("1 + 2*x2^2"), 19.0);
        assert_eq!(val("x1^-1"), 0.5);
        assert!((val("exp(ln(x2))") - 3.0).abs() < 1e-15);
    }

    #[test]
    fn prints() {
        let e = parse("x1*x2 - ln(x3)", 3).unwrap();
        assert_eq!(e.to_string(), "x1*x2 - ln(x3)");
        let e = parse("(x1 - x2) - (x3 - 1/2)", 3).unwrap();
        assert_eq!(e.to_string(), "x1 - x2 - (x3 - 1/2)");
        let e = parse("(-2)^2 * x1^(-3)", 1).unwrap();
        assert_eq!(e.to_string(), "(-2)^2*x1^(-3)");
    }
}
