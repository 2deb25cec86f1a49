use crate::linalg::Rational;

use super::{Expr, ExprError, Func, Node};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>, ExprError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>, ExprError> {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        let start = self.pos;
        let Some(c) = trimmed.chars().next() else {
            return Ok(None);
        };
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                let len = number_len(trimmed);
                let text = &trimmed[..len];
                self.pos += len;
                let value = text.parse::<Rational>().map_err(|_| ExprError::Syntax {
                    offset: start,
                    message: format!("invalid number {text:?}"),
                })?;
                return Ok(Some((start, Tok::Num(value))));
            }
            c if c.is_alphabetic() || c == '_' => {
                let len = trimmed
                    .char_indices()
                    .find(|(_, c)| !(c.is_alphanumeric() || *c == '_'))
                    .map_or(trimmed.len(), |(i, _)| i);
                self.pos += len;
                return Ok(Some((start, Tok::Ident(trimmed[..len].to_string()))));
            }
            other => {
                return Err(ExprError::Syntax {
                    offset: start,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        self.pos += c.len_utf8();
        Ok(Some((start, tok)))
    }
}

fn number_len(s: &str) -> usize {
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
        i += 1;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
    dim: usize,
}

/// Parse `source` as an expression in the variables `x1 .. x{dim}`.
pub fn parse(source: &str, dim: usize) -> Result<Expr, ExprError> {
    let mut p = Parser {
        toks: Lexer::tokens(source)?,
        idx: 0,
        end: source.len(),
        dim,
    };
    let root = p.expr()?;
    if let Some((offset, tok)) = p.toks.get(p.idx) {
        return Err(ExprError::Syntax {
            offset: *offset,
            message: format!("unexpected {tok:?}"),
        });
    }
    Ok(Expr::new(root, dim).expect("indices validated while parsing"))
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.idx).cloned();
        self.idx += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ExprError> {
        let offset = self.offset();
        match self.bump() {
            Some((_, t)) if t == want => Ok(()),
            Some((_, t)) => Err(ExprError::Syntax {
                offset,
                message: format!("expected {want:?}, found {t:?}"),
            }),
            None => Err(ExprError::Syntax {
                offset,
                message: format!("expected {want:?}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = match (lhs, rhs) {
                        (Node::Const(a), Node::Const(b)) if !b.is_zero() => Node::Const(a / b),
                        (a, b) => Node::Div(Box::new(a), Box::new(b)),
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(match self.unary()? {
                Node::Const(c) => Node::Const(-c),
                other => Node::Neg(Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let offset = self.offset();
        let exponent = self.unary()?;
        let k = exponent
            .const_value()
            .and_then(|v| v.to_i64())
            .and_then(|v| i32::try_from(v).ok())
            .ok_or_else(|| ExprError::Syntax {
                offset,
                message: "exponent must be a constant integer".into(),
            })?;
        Ok(Node::Pow(Box::new(base), k))
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        let offset = self.offset();
        match self.bump() {
            Some((_, Tok::Num(v))) => Ok(Node::Const(v)),
            Some((_, Tok::LParen)) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some((_, Tok::Ident(name))) => self.identifier(offset, name),
            Some((_, tok)) => Err(ExprError::Syntax {
                offset,
                message: format!("unexpected {tok:?}"),
            }),
            None => Err(ExprError::Syntax {
                offset,
                message: "unexpected end of input".into(),
            }),
        }
    }

    fn identifier(&mut self, offset: usize, name: String) -> Result<Node, ExprError> {
        let func = match name.as_str() {
            "ln" => Some(Func::Ln),
            "exp" => Some(Func::Exp),
            _ => None,
        };
        if let Some(func) = func {
            self.expect(Tok::LParen)?;
            let arg = self.expr()?;
            self.expect(Tok::RParen)?;
            return Ok(Node::Call(func, Box::new(arg)));
        }
        if name == "x" && self.dim == 1 {
            return Ok(Node::Var(0));
        }
        let index = name
            .strip_prefix('x')
            .filter(|d| {
                !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) && !d.starts_with('0')
            })
            .and_then(|d| d.parse::<usize>().ok());
        match index {
            Some(i) if i >= 1 && i <= self.dim => Ok(Node::Var(i - 1)),
            Some(i) => Err(ExprError::IndexOutOfRange {
                offset,
                index: i,
                dim: self.dim,
            }),
            None => Err(ExprError::UnknownIdentifier { offset, name }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(i: usize) -> Box<Node> {
        Box::new(Node::Var(i))
    }

    #[test]
    fn builds_expected_tree() {
        let e = parse("x1*x2 - ln(x3)", 3).unwrap();
        let expected = Node::Sub(
            Box::new(Node::Mul(var(0), var(1))),
            Box::new(Node::Call(Func::Ln, var(2))),
        );
        assert_eq!(e.root(), &expected);
    }

    #[test]
    fn double_plus_is_a_syntax_error() {
        let err = parse("x1 + + x2", 2).unwrap_err();
        assert_eq!(
            err,
            ExprError::Syntax {
                offset: 5,
                message: "unexpected Plus".into()
            }
        );
    }

    #[test]
    fn index_out_of_range() {
        assert_eq!(
            parse("x4", 3).unwrap_err(),
            ExprError::IndexOutOfRange {
                offset: 0,
                index: 4,
                dim: 3
            }
        );
        assert!(matches!(
            parse("x0", 3),
            Err(ExprError::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn other_errors() {
        assert!(matches!(
            parse("sin(x1)", 1),
            Err(ExprError::UnknownIdentifier { .. })
        ));
        assert!(matches!(
            parse("y + 1", 1),
            Err(ExprError::UnknownIdentifier { offset: 0, .. })
        ));
        assert!(matches!(
            parse("x1^x1", 1),
            Err(ExprError::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            parse("x1^(1/2)", 1),
            Err(ExprError::Syntax { .. })
        ));
        assert!(matches!(
            parse("(x1", 1),
            Err(ExprError::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            parse("", 1),
            Err(ExprError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse("x1 x1", 1),
            Err(ExprError::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            parse("x1 # 2", 1),
            Err(ExprError::Syntax { offset: 3, .. })
        ));
    }

    #[test]
    fn literal_folding() {
        assert_eq!(
            parse("-1/2", 1).unwrap().root(),
            &Node::Const(Rational::new(-1, 2).unwrap())
        );
        assert_eq!(
            parse("0.25", 1).unwrap().root(),
            &Node::Const(Rational::new(1, 4).unwrap())
        );
        assert_eq!(
            parse("2.5e-1", 1).unwrap().root(),
            &Node::Const(Rational::new(1, 4).unwrap())
        );
        assert_eq!(parse("x", 1).unwrap().root(), &Node::Var(0));
        assert!(parse("x", 2).is_err());
    }
}
