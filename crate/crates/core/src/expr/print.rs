use num_complex::Complex64;

use super::ast::{BinOp, Kind, Node};

const ATOM: u8 = 4;
const POW: u8 = 3;

/// Minimal-parenthesis rendering that re-parses to the same tree.
pub fn print(node: &Node) -> String {
    let mut s = String::new();
    write(node, &mut s);
    s
}

fn precedence(node: &Node) -> u8 {
    match &node.kind {
        Kind::Binary(op, ..) => op.precedence(),
        Kind::Pow(..) => POW,
        Kind::Const(c) => precedence(&constant_tree(*c)),
        _ => ATOM,
    }
}

fn write_child(node: &Node, needs_parens: bool, out: &mut String) {
    if needs_parens {
        out.push('(');
        write(node, out);
        out.push(')');
    } else {
        write(node, out);
    }
}

fn write(node: &Node, out: &mut String) {
    match &node.kind {
        Kind::Num(x) => out.push_str(&format_number(*x)),
        Kind::Const(c) => write(&constant_tree(*c), out),
        Kind::I => out.push('i'),
        Kind::Pi => out.push_str("pi"),
        Kind::Z => out.push('z'),
        Kind::Binary(op, a, b) => {
            let p = op.precedence();
            write_child(a, precedence(a) < p, out);
            out.push(' ');
            out.push(op.symbol());
            out.push(' ');
            write_child(b, precedence(b) <= p, out);
        }
        Kind::Pow(a, k) => {
            write_child(a, precedence(a) <= POW, out);
            out.push('^');
            out.push_str(&k.to_string());
        }
        Kind::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write(a, out);
            out.push(')');
        }
    }
}

fn format_number(x: f64) -> String {
    // Display for f64 is the shortest round-trip decimal and never uses an exponent
    format!("{x}")
}

/// Source tree for a folded constant using only grammar constructs.
fn constant_tree(c: Complex64) -> Node {
    let num = |x: f64| Node::new(Kind::Num(x));
    let imag = |x: f64| {
        if x == 1.0 {
            Node::new(Kind::I)
        } else {
            Node::binary(BinOp::Mul, num(x), Node::new(Kind::I))
        }
    };
    let (re, im) = (c.re + 0.0, c.im + 0.0);
    match (re == 0.0, im == 0.0) {
        (_, true) if re >= 0.0 => num(re),
        (_, true) => Node::binary(BinOp::Sub, num(0.0), num(-re)),
        (true, false) if im > 0.0 => imag(im),
        (true, false) => Node::binary(BinOp::Sub, num(0.0), imag(-im)),
        (false, false) => {
            let real = if re >= 0.0 {
                num(re)
            } else {
                Node::binary(BinOp::Sub, num(0.0), num(-re))
            };
            if im > 0.0 {
                Node::binary(BinOp::Add, real, imag(im))
            } else {
                Node::binary(BinOp::Sub, real, imag(-im))
            }
        }
    }
}
