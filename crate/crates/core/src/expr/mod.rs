//! Closed-form holomorphic expressions in one complex variable `z`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' integer)?
//! base   := number | 'i' | 'pi' | 'z' | ident '(' expr ')' | '(' expr ')'
//! ident  := exp | log | sin | cos | sinh | cosh | sqrt
//! ```
//!
//! There is no unary minus and no implicit multiplication; write
//! `0 - z` and `2*z`. `log` and `sqrt` use principal branches (cut along
//! the negative real axis).

mod ast;
mod diff;
mod eval;
mod parse;
mod print;
pub mod rational;
mod vector;

pub use ast::{Func, Node, Span};
pub use vector::{ComplexExprVec, NullityReport};

use num_complex::Complex64;

use crate::error::Result;

/// Distance below which evaluation refuses to approach a declared singularity.
pub const SINGULARITY_GUARD: f64 = 1e-12;

/// Parsed expression together with its declared singular points.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexExpr {
    root: Node,
    singularities: Vec<Complex64>,
}

impl ComplexExpr {
    pub fn parse(src: &str) -> Result<Self> {
        Ok(Self {
            root: parse::parse(src)?,
            singularities: Vec::new(),
        })
    }

    /// Parses `src` and declares the given poles/branch points.
    pub fn parse_with_singularities(src: &str, singularities: &[Complex64]) -> Result<Self> {
        Ok(Self::parse(src)?.with_singularities(singularities))
    }

    pub fn from_node(root: Node) -> Self {
        Self {
            root,
            singularities: Vec::new(),
        }
    }

    pub fn with_singularities(mut self, singularities: &[Complex64]) -> Self {
        self.singularities = singularities.to_vec();
        self
    }

    pub fn node(&self) -> &Node {
        &self.root
    }

    pub fn singularities(&self) -> &[Complex64] {
        &self.singularities
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        eval::eval_checked(&self.root, z, &self.singularities)
    }

    /// Exact symbolic derivative `d/dz`, constant-folded.
    pub fn differentiate(&self) -> Self {
        Self {
            root: diff::simplify(&diff::derivative(&self.root)),
            singularities: self.singularities.clone(),
        }
    }

    /// Whether the expression depends on `z` at all.
    pub fn depends_on_z(&self) -> bool {
        self.root.depends_on_z()
    }

    pub fn to_source(&self) -> String {
        print::print(&self.root)
    }
}

impl std::fmt::Display for ComplexExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_source())
    }
}

impl std::str::FromStr for ComplexExpr {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Builders for assembling expressions programmatically.
pub mod build {
    use super::ast::{Func, Node};
    use num_complex::Complex64;

    pub fn z() -> Node {
        Node::z()
    }
    pub fn c(value: Complex64) -> Node {
        Node::constant(value)
    }
    pub fn re(value: f64) -> Node {
        Node::constant(Complex64::new(value, 0.0))
    }
    pub fn add(a: Node, b: Node) -> Node {
        Node::binary(super::ast::BinOp::Add, a, b)
    }
    pub fn sub(a: Node, b: Node) -> Node {
        Node::binary(super::ast::BinOp::Sub, a, b)
    }
    pub fn mul(a: Node, b: Node) -> Node {
        Node::binary(super::ast::BinOp::Mul, a, b)
    }
    pub fn div(a: Node, b: Node) -> Node {
        Node::binary(super::ast::BinOp::Div, a, b)
    }
    pub fn pow(a: Node, k: u32) -> Node {
        Node::pow(a, k)
    }
    pub fn call(f: Func, a: Node) -> Node {
        Node::call(f, a)
    }
}

#[cfg(test)]
mod tests;
