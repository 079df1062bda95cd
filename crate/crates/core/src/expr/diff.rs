use num_complex::Complex64;

use super::ast::{BinOp, Func, Kind, Node};
use super::eval::powu;

fn zero() -> Node {
    Node::constant(Complex64::new(0.0, 0.0))
}

fn cnst(x: f64) -> Node {
    Node::constant(Complex64::new(x, 0.0))
}

fn add(a: Node, b: Node) -> Node {
    Node::binary(BinOp::Add, a, b)
}

fn sub(a: Node, b: Node) -> Node {
    Node::binary(BinOp::Sub, a, b)
}

fn mul(a: Node, b: Node) -> Node {
    Node::binary(BinOp::Mul, a, b)
}

fn div(a: Node, b: Node) -> Node {
    Node::binary(BinOp::Div, a, b)
}

/// Raw derivative; callers simplify afterwards.
pub fn derivative(node: &Node) -> Node {
    match &node.kind {
        Kind::Num(_) | Kind::Const(_) | Kind::I | Kind::Pi => zero(),
        Kind::Z => cnst(1.0),
        Kind::Binary(op, a, b) => {
            let (da, db) = (derivative(a), derivative(b));
            let (a, b) = ((**a).clone(), (**b).clone());
            match op {
                BinOp::Add => add(da, db),
                BinOp::Sub => sub(da, db),
                BinOp::Mul => add(mul(da, b), mul(a, db)),
                // (a'b − ab') / b²
                BinOp::Div => div(sub(mul(da, b.clone()), mul(a, db)), Node::pow(b, 2)),
            }
        }
        Kind::Pow(a, k) => match k {
            0 => zero(),
            1 => derivative(a),
            _ => mul(mul(cnst(*k as f64), Node::pow((**a).clone(), k - 1)), derivative(a)),
        },
        Kind::Call(f, a) => {
            let inner = (**a).clone();
            let outer = match f {
                Func::Exp => Node::call(Func::Exp, inner),
                Func::Log => div(cnst(1.0), inner),
                Func::Sin => Node::call(Func::Cos, inner),
                Func::Cos => sub(zero(), Node::call(Func::Sin, inner)),
                Func::Sinh => Node::call(Func::Cosh, inner),
                Func::Cosh => Node::call(Func::Sinh, inner),
                Func::Sqrt => div(cnst(1.0), mul(cnst(2.0), Node::call(Func::Sqrt, inner))),
            };
            mul(outer, derivative(a))
        }
    }
}

fn is_const(n: &Node, v: f64) -> bool {
    n.as_constant() == Some(Complex64::new(v, 0.0))
}

fn finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

/// Constant folding plus the neutral/absorbing-element identities.
pub fn simplify(node: &Node) -> Node {
    match &node.kind {
        Kind::Num(_) | Kind::I | Kind::Pi => Node::constant(node.as_constant().unwrap()),
        Kind::Const(_) | Kind::Z => node.clone(),
        Kind::Pow(a, k) => {
            let a = simplify(a);
            match (k, a.as_constant()) {
                (0, _) => cnst(1.0),
                (1, _) => a,
                (_, Some(c)) => Node::constant(powu(c, *k)),
                _ => Node::pow(a, *k),
            }
        }
        Kind::Call(f, a) => {
            let a = simplify(a);
            if let Some(c) = a.as_constant() {
                let v = f.apply(c);
                if finite(v) {
                    return Node::constant(v);
                }
            }
            Node::call(*f, a)
        }
        Kind::Binary(op, a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if let (Some(x), Some(y)) = (a.as_constant(), b.as_constant()) {
                let v = match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x / y,
                };
                if finite(v) {
                    return Node::constant(v);
                }
            }
            match op {
                BinOp::Add if is_const(&a, 0.0) => b,
                BinOp::Add | BinOp::Sub if is_const(&b, 0.0) => a,
                BinOp::Mul if is_const(&a, 0.0) || is_const(&b, 0.0) => zero(),
                BinOp::Mul if is_const(&a, 1.0) => b,
                BinOp::Mul if is_const(&b, 1.0) => a,
                BinOp::Mul => fold_product(a, b),
                BinOp::Div if is_const(&a, 0.0) => zero(),
                BinOp::Div if is_const(&b, 1.0) => a,
                _ => Node::binary(*op, a, b),
            }
        }
    }
}

/// Moves constants to the left of a product and merges `c₁·(c₂·x)`.
fn fold_product(a: Node, b: Node) -> Node {
    let (a, b) = match (a.as_constant(), b.as_constant()) {
        (None, Some(_)) => (b, a),
        _ => (a, b),
    };
    if let Some(c1) = a.as_constant() {
        if let Kind::Binary(BinOp::Mul, inner_a, inner_b) = &b.kind {
            if let Some(c2) = inner_a.as_constant() {
                let c = c1 * c2;
                if c == Complex64::new(1.0, 0.0) {
                    return (**inner_b).clone();
                }
                return Node::binary(BinOp::Mul, Node::constant(c), (**inner_b).clone());
            }
        }
    }
    Node::binary(BinOp::Mul, a, b)
}
