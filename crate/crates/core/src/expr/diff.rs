use crate::linalg::Rational;

use super::{Func, Node};

pub(super) fn derivative(node: &Node, var: usize) -> Node {
    match node {
        Node::Const(_) => zero(),
        Node::Var(i) => Node::Const(if *i == var {
            Rational::one()
        } else {
            Rational::zero()
        }),
        Node::Add(a, b) => add(derivative(a, var), derivative(b, var)),
        Node::Sub(a, b) => sub(derivative(a, var), derivative(b, var)),
        Node::Neg(a) => neg(derivative(a, var)),
        Node::Mul(a, b) => add(
            mul(derivative(a, var), (**b).clone()),
            mul((**a).clone(), derivative(b, var)),
        ),
        Node::Div(a, b) => {
            let da = derivative(a, var);
            let db = derivative(b, var);
            // (a' b - a b') / b^2, with the a' = 0 and b' = 0 shapes kept small
            if is_zero(&db) {
                div(da, (**b).clone())
            } else {
                let num = sub(mul(da, (**b).clone()), mul((**a).clone(), db));
                div(num, pow((**b).clone(), 2))
            }
        }
        Node::Pow(a, k) => {
            let da = derivative(a, var);
            mul(
                mul(
                    Node::Const(Rational::from_integer(*k)),
                    pow((**a).clone(), k - 1),
                ),
                da,
            )
        }
        Node::Call(Func::Ln, a) => div(derivative(a, var), (**a).clone()),
        Node::Call(Func::Exp, a) => mul(node.clone(), derivative(a, var)),
    }
}

fn zero() -> Node {
    Node::Const(Rational::zero())
}

fn is_zero(n: &Node) -> bool {
    matches!(n, Node::Const(c) if c.is_zero())
}

fn is_one(n: &Node) -> bool {
    matches!(n, Node::Const(c) if c.is_one())
}

fn add(a: Node, b: Node) -> Node {
    match (a, b) {
        (Node::Const(x), Node::Const(y)) => Node::Const(x + y),
        (a, b) if is_zero(&b) => a,
        (a, b) if is_zero(&a) => b,
        (a, Node::Neg(b)) => sub(a, *b),
        (a, b) => Node::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Node, b: Node) -> Node {
    match (a, b) {
        (Node::Const(x), Node::Const(y)) => Node::Const(x - y),
        (a, b) if is_zero(&b) => a,
        (a, b) if is_zero(&a) => neg(b),
        (a, b) => Node::Sub(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Node) -> Node {
    match a {
        Node::Const(c) => Node::Const(-c),
        Node::Neg(inner) => *inner,
        Node::Div(num, den) if matches!(*num, Node::Const(_)) => {
            let Node::Const(c) = *num else { unreachable!() };
            Node::Div(Box::new(Node::Const(-c)), den)
        }
        Node::Mul(l, r) if matches!(*l, Node::Const(_)) => {
            let Node::Const(c) = *l else { unreachable!() };
            mul(Node::Const(-c), *r)
        }
        other => Node::Neg(Box::new(other)),
    }
}

fn mul(a: Node, b: Node) -> Node {
    match (a, b) {
        (Node::Const(x), Node::Const(y)) => Node::Const(x * y),
        (a, b) if is_zero(&a) || is_zero(&b) => zero(),
        (a, b) if is_one(&a) => b,
        (a, b) if is_one(&b) => a,
        // keep constants on the left
        (a, b @ Node::Const(_)) => mul(b, a),
        (Node::Const(x), Node::Mul(l, r)) if matches!(*l, Node::Const(_)) => {
            let Node::Const(y) = *l else { unreachable!() };
            mul(Node::Const(x * y), *r)
        }
        (Node::Const(c), b) if c == -Rational::one() => neg(b),
        (a, b) => Node::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Node, b: Node) -> Node {
    match (a, b) {
        (Node::Const(x), Node::Const(y)) if !y.is_zero() => Node::Const(x / y),
        (a, b) if is_one(&b) => a,
        (a, _) if is_zero(&a) => zero(),
        (a, b) => Node::Div(Box::new(a), Box::new(b)),
    }
}

fn pow(a: Node, k: i32) -> Node {
    match (a, k) {
        (_, 0) => Node::Const(Rational::one()),
        (a, 1) => a,
        (Node::Const(c), k) => match c.pow(k) {
            Some(v) => Node::Const(v),
            None => Node::Pow(Box::new(Node::Const(c)), k),
        },
        (a, k) => Node::Pow(Box::new(a), k),
    }
}
