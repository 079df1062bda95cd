//! Rational normal form of expressions, used for Gauss-map degrees.

use num_complex::Complex64;

use super::ast::{BinOp, Kind, Node};
use crate::error::{Error, Result};

/// Dense complex polynomial, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Complex64>);

const REL_EPS: f64 = 1e-12;

impl Poly {
    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn z() -> Self {
        Poly(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    fn scale(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Drops leading coefficients that are negligible relative to the largest.
    fn trimmed(mut self) -> Self {
        let tol = REL_EPS * self.scale();
        while self.0.len() > 1 && self.0.last().is_some_and(|c| c.norm() <= tol) {
            self.0.pop();
        }
        if self.0.is_empty() {
            self.0.push(Complex64::new(0.0, 0.0));
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.norm() == 0.0)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.0.last().unwrap()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly(
            (0..n)
                .map(|k| self.0.get(k).copied().unwrap_or(zero) + other.0.get(k).copied().unwrap_or(zero))
                .collect(),
        )
        .trimmed()
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }

    /// Polynomial long division: `self = q·d + r`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let mut r = self.0.clone();
        let dn = d.degree();
        let lead = d.leading();
        if self.degree() < dn {
            return (Poly::constant(Complex64::new(0.0, 0.0)), self.clone());
        }
        let mut q = vec![Complex64::new(0.0, 0.0); self.degree() - dn + 1];
        for k in (0..q.len()).rev() {
            let coef = r[k + dn] / lead;
            q[k] = coef;
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= coef * dc;
            }
            r[k + dn] = Complex64::new(0.0, 0.0);
        }
        r.truncate(dn.max(1));
        // remainder coefficients that are rounding noise relative to the dividend
        let tol = 1e-10 * self.scale().max(d.scale());
        for c in r.iter_mut() {
            if c.norm() <= tol {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        (Poly(q).trimmed(), Poly(r).trimmed())
    }

    /// Expression tree `Σ cₖ zᵏ`, skipping noise-level coefficients.
    pub fn to_node(&self) -> Node {
        let tol = REL_EPS * self.scale();
        let mut acc: Option<Node> = None;
        for (k, &c) in self.0.iter().enumerate() {
            if c.norm() <= tol && !(k == 0 && self.degree() == 0) {
                continue;
            }
            let c = Complex64::new(snap(c.re, tol), snap(c.im, tol));
            let negative = acc.is_some() && c.im == 0.0 && c.re < 0.0;
            let c = if negative { -c } else { c };
            let monomial = match k {
                0 => None,
                1 => Some(Node::z()),
                _ => Some(Node::pow(Node::z(), k as u32)),
            };
            let term = match monomial {
                None => Node::constant(c),
                Some(m) if c == Complex64::new(1.0, 0.0) => m,
                Some(m) => Node::binary(BinOp::Mul, Node::constant(c), m),
            };
            let op = if negative { BinOp::Sub } else { BinOp::Add };
            acc = Some(match acc {
                None => term,
                Some(a) => Node::binary(op, a, term),
            });
        }
        acc.unwrap_or_else(|| Node::constant(Complex64::new(0.0, 0.0)))
    }

    fn monic(&self) -> Poly {
        let l = self.leading();
        Poly(self.0.iter().map(|c| c / l).collect())
    }
}

/// Rounds away noise below `tol` around zero and integers.
fn snap(x: f64, tol: f64) -> f64 {
    if x.abs() <= tol {
        0.0
    } else if (x - x.round()).abs() <= tol.max(1e-14 * x.abs()) {
        x.round()
    } else {
        x
    }
}

/// Euclidean gcd with noise-level remainders treated as zero; result is monic.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.monic(), b.monic());
    if y.degree() > x.degree() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y);
        x = y;
        y = if r.is_zero() { r } else { r.monic() };
    }
    x.monic()
}

/// Ratio of polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    fn constant(c: Complex64) -> Self {
        Rational {
            num: Poly::constant(c),
            den: Poly::constant(Complex64::new(1.0, 0.0)),
        }
    }

    fn add(&self, o: &Rational) -> Rational {
        Rational {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    fn mul(&self, o: &Rational) -> Rational {
        Rational {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    fn recip(&self) -> Result<Rational> {
        if self.num.is_zero() {
            return Err(Error::NotRational {
                reason: "division by the zero function".into(),
            });
        }
        Ok(Rational {
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    /// Cancels the common factor of numerator and denominator.
    pub fn reduced(&self) -> Rational {
        if self.num.is_zero() {
            return Rational::constant(Complex64::new(0.0, 0.0));
        }
        let g = gcd(&self.num, &self.den);
        if g.degree() == 0 {
            return self.clone();
        }
        Rational {
            num: self.num.div_rem(&g).0,
            den: self.den.div_rem(&g).0,
        }
    }

    /// Degree as a map of the Riemann sphere: `max(deg P, deg Q)` in lowest terms.
    pub fn degree(&self) -> usize {
        let r = self.reduced();
        r.num.degree().max(r.den.degree())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Expression tree of the reduced form, normalised so the denominator
    /// is monic; a constant denominator is dropped.
    pub fn to_node(&self) -> Node {
        let r = self.reduced();
        let l = r.den.leading();
        let num = Poly(r.num.0.iter().map(|c| c / l).collect());
        let den = r.den.monic();
        if den.degree() == 0 {
            num.to_node()
        } else {
            Node::binary(BinOp::Div, num.to_node(), den.to_node())
        }
    }
}

/// Rational normal form, or `NotRational` when `z` occurs inside a
/// transcendental function.
pub fn to_rational(node: &Node) -> Result<Rational> {
    if !node.depends_on_z() {
        let c = super::eval::eval(node, Complex64::new(0.0, 0.0));
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NotRational {
                reason: "constant subexpression is not finite".into(),
            });
        }
        return Ok(Rational::constant(c));
    }
    match &node.kind {
        Kind::Z => Ok(Rational {
            num: Poly::z(),
            den: Poly::constant(Complex64::new(1.0, 0.0)),
        }),
        Kind::Binary(op, a, b) => {
            let (x, y) = (to_rational(a)?, to_rational(b)?);
            Ok(match op {
                BinOp::Add => x.add(&y),
                BinOp::Sub => x.add(&Rational {
                    num: y.num.neg(),
                    den: y.den,
                }),
                BinOp::Mul => x.mul(&y),
                BinOp::Div => x.mul(&y.recip()?),
            })
        }
        Kind::Pow(a, k) => {
            let base = to_rational(a)?;
            let mut acc = Rational::constant(Complex64::new(1.0, 0.0));
            for _ in 0..*k {
                acc = acc.mul(&base);
            }
            Ok(acc)
        }
        Kind::Call(f, _) => Err(Error::NotRational {
            reason: format!("{}(…) of a non-constant argument", f.name()),
        }),
        Kind::Num(_) | Kind::Const(_) | Kind::I | Kind::Pi => unreachable!("constants handled above"),
    }
}
