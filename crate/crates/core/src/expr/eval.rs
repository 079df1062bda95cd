use num_complex::Complex64;

use super::ast::{BinOp, Kind, Node};
use super::SINGULARITY_GUARD;
use crate::error::{Error, Result};

pub fn eval_checked(node: &Node, z: Complex64, singularities: &[Complex64]) -> Result<Complex64> {
    if let Some(s) = singularities.iter().find(|s| (z - **s).norm() < SINGULARITY_GUARD) {
        return Err(Error::SingularityHit { z, singularity: *s });
    }
    let w = eval(node, z);
    if w.re.is_finite() && w.im.is_finite() {
        Ok(w)
    } else {
        Err(Error::NonFinite { z })
    }
}

pub fn eval(node: &Node, z: Complex64) -> Complex64 {
    match &node.kind {
        Kind::Num(x) => Complex64::new(*x, 0.0),
        Kind::Const(c) => *c,
        Kind::I => Complex64::i(),
        Kind::Pi => Complex64::new(std::f64::consts::PI, 0.0),
        Kind::Z => z,
        Kind::Binary(op, a, b) => {
            let (x, y) = (eval(a, z), eval(b, z));
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => x / y,
            }
        }
        Kind::Pow(a, k) => powu(eval(a, z), *k),
        Kind::Call(f, a) => f.apply(eval(a, z)),
    }
}

/// Integer power by repeated squaring (exact for small integer bases).
pub fn powu(mut base: Complex64, mut k: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}
