use num_complex::Complex64;

/// Byte range in the source text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn apply(self, w: Complex64) -> Complex64 {
        match self {
            Func::Exp => w.exp(),
            Func::Log => w.ln(),
            Func::Sin => w.sin(),
            Func::Cos => w.cos(),
            Func::Sinh => w.sinh(),
            Func::Cosh => w.cosh(),
            Func::Sqrt => w.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Kind {
    /// Non-negative decimal literal as written.
    Num(f64),
    /// Folded complex constant (never produced by the parser).
    Const(Complex64),
    I,
    Pi,
    Z,
    Binary(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
    Call(Func, Box<Node>),
}

/// Expression tree node. Equality ignores source spans.
#[derive(Debug, Clone)]
pub struct Node {
    pub kind: Kind,
    pub span: Span,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        use Kind::*;
        match (&self.kind, &other.kind) {
            (Num(a), Num(b)) => a == b,
            (Const(a), Const(b)) => a == b,
            (I, I) | (Pi, Pi) | (Z, Z) => true,
            (Binary(o1, a1, b1), Binary(o2, a2, b2)) => o1 == o2 && a1 == a2 && b1 == b2,
            (Pow(a1, k1), Pow(a2, k2)) => k1 == k2 && a1 == a2,
            (Call(f1, a1), Call(f2, a2)) => f1 == f2 && a1 == a2,
            _ => false,
        }
    }
}

impl Node {
    pub fn new(kind: Kind) -> Self {
        Self {
            kind,
            span: Span::default(),
        }
    }

    pub fn spanned(kind: Kind, span: Span) -> Self {
        Self { kind, span }
    }

    pub fn z() -> Self {
        Self::new(Kind::Z)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(Kind::Const(c))
    }

    pub fn binary(op: BinOp, a: Node, b: Node) -> Self {
        Self::new(Kind::Binary(op, Box::new(a), Box::new(b)))
    }

    pub fn pow(a: Node, k: u32) -> Self {
        Self::new(Kind::Pow(Box::new(a), k))
    }

    pub fn call(f: Func, a: Node) -> Self {
        Self::new(Kind::Call(f, Box::new(a)))
    }

    /// Value when the node is a constant leaf.
    pub fn as_constant(&self) -> Option<Complex64> {
        match self.kind {
            Kind::Num(x) => Some(Complex64::new(x, 0.0)),
            Kind::Const(c) => Some(c),
            Kind::I => Some(Complex64::i()),
            Kind::Pi => Some(Complex64::new(std::f64::consts::PI, 0.0)),
            _ => None,
        }
    }

    pub fn depends_on_z(&self) -> bool {
        match &self.kind {
            Kind::Z => true,
            Kind::Num(_) | Kind::Const(_) | Kind::I | Kind::Pi => false,
            Kind::Binary(_, a, b) => a.depends_on_z() || b.depends_on_z(),
            Kind::Pow(a, _) | Kind::Call(_, a) => a.depends_on_z(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match &self.kind {
            Kind::Binary(_, a, b) => 1 + a.size() + b.size(),
            Kind::Pow(a, _) | Kind::Call(_, a) => 1 + a.size(),
            _ => 1,
        }
    }
}
