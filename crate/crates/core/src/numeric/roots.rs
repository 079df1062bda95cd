//! Bracketed scalar root finding with tangency detection.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    /// Sign change.
    Simple,
    /// `|g|` touches zero without a sign change (double root).
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub kind: RootKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Number of scan intervals across the bracket.
    pub scan: usize,
    /// Absolute tolerance on the root location.
    pub xtol: f64,
    /// `|g|` below which a critical point counts as a double root.
    pub tangency_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            scan: 2000,
            xtol: 1e-12,
            tangency_tol: 1e-9,
        }
    }
}

/// All roots of `g` in `[lo, hi]`, sorted ascending.
///
/// Sign changes between scan points are bisected to `xtol` and polished
/// with a guarded Newton step; local minima of `|g|` without a sign change
/// are located by bisecting on the sign of `g'` and reported as
/// [`RootKind::Double`] when `|g|` there is below `tangency_tol`.
pub fn find_roots_1d<G>(g: G, bracket: (f64, f64), opts: &RootOptions) -> Result<Vec<Root>>
where
    G: Fn(f64) -> f64,
{
    let (lo, hi) = bracket;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::BracketInvalid { lo, hi });
    }
    let n = opts.scan.max(4);
    let xs: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| g(x)).collect();

    let mut roots: Vec<Root> = Vec::new();
    for k in 0..n {
        let (a, b) = (xs[k], xs[k + 1]);
        let (fa, fb) = (ys[k], ys[k + 1]);
        if fa == 0.0 {
            let touching = k > 0 && ys[k - 1] != 0.0 && ys[k - 1].signum() == fb.signum();
            let kind = if touching { RootKind::Double } else { RootKind::Simple };
            push_unique(&mut roots, a, kind, opts.xtol);
            continue;
        }
        if k + 1 == n && fb == 0.0 {
            push_unique(&mut roots, b, RootKind::Simple, opts.xtol);
            continue;
        }
        if fa.signum() != fb.signum() && fb != 0.0 {
            let x = polish(&g, bisect(&g, a, b, fa, opts.xtol), a, b);
            push_unique(&mut roots, x, RootKind::Simple, opts.xtol);
        }
    }

    // tangencies: interior scan minima of |g| with no sign change around them
    for k in 1..n {
        let (y0, y1, y2) = (ys[k - 1], ys[k], ys[k + 1]);
        let same_sign = y0.signum() == y1.signum() && y1.signum() == y2.signum();
        if !same_sign || y1.abs() > y0.abs() || y1.abs() > y2.abs() {
            continue;
        }
        let x = critical_point(&g, xs[k - 1], xs[k + 1], opts.xtol);
        if g(x).abs() < opts.tangency_tol {
            let bracket = (xs[k - 1], xs[k + 1]);
            if !roots.iter().any(|r| r.x >= bracket.0 && r.x <= bracket.1) {
                roots.push(Root {
                    x,
                    kind: RootKind::Double,
                });
            }
        }
    }

    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    Ok(merge_close_pairs(&g, roots, opts))
}

fn push_unique(roots: &mut Vec<Root>, x: f64, kind: RootKind, xtol: f64) {
    if !roots.iter().any(|r| (r.x - x).abs() <= 10.0 * xtol) {
        roots.push(Root { x, kind });
    }
}

fn bisect<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64, mut fa: f64, xtol: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a) <= xtol || m == a || m == b {
            return m;
        }
        let fm = g(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// One guarded Newton step; kept only if it improves `|g|` and stays in `[a, b]`.
fn polish<G: Fn(f64) -> f64>(g: &G, x: f64, a: f64, b: f64) -> f64 {
    let h = 1e-7 * x.abs().max(1.0);
    let d = (g(x + h) - g(x - h)) / (2.0 * h);
    if d == 0.0 || !d.is_finite() {
        return x;
    }
    let y = x - g(x) / d;
    if y >= a && y <= b && g(y).abs() < g(x).abs() {
        y
    } else {
        x
    }
}

fn derivative<G: Fn(f64) -> f64>(g: &G, x: f64) -> f64 {
    let h = 1e-6 * x.abs().max(1.0);
    (g(x + h) - g(x - h)) / (2.0 * h)
}

/// Point in `[a, b]` where `g'` changes sign (or the endpoint with smaller `|g|`).
fn critical_point<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    let (ga, gb) = (g(a), g(b));
    // we are minimising |g|: flip so the extremum is a minimum of s·g
    let s = if ga.signum() < 0.0 || (ga == 0.0 && gb < 0.0) {
        -1.0
    } else {
        1.0
    };
    let mut da = s * derivative(g, a);
    let db = s * derivative(g, b);
    if !(da < 0.0 && db > 0.0) {
        return if ga.abs() < gb.abs() { a } else { b };
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a <= xtol.max(1e-10 * m.abs()) {
            break;
        }
        let dm = s * derivative(g, m);
        if dm < 0.0 {
            a = m;
            da = dm;
        } else {
            b = m;
        }
    }
    let _ = da;
    0.5 * (a + b)
}

/// Two sign-change roots closer than `sqrt(tangency_tol)` that enclose a
/// tiny extremum are the numerical shadow of a double root.
fn merge_close_pairs<G: Fn(f64) -> f64>(g: &G, roots: Vec<Root>, opts: &RootOptions) -> Vec<Root> {
    let gap = opts.tangency_tol.sqrt();
    let mut out: Vec<Root> = Vec::with_capacity(roots.len());
    let mut k = 0;
    while k < roots.len() {
        if k + 1 < roots.len()
            && roots[k].kind == RootKind::Simple
            && roots[k + 1].kind == RootKind::Simple
            && roots[k + 1].x - roots[k].x < gap
        {
            let mid = critical_point(g, roots[k].x, roots[k + 1].x, opts.xtol);
            if g(mid).abs() < opts.tangency_tol {
                out.push(Root {
                    x: mid,
                    kind: RootKind::Double,
                });
                k += 2;
                continue;
            }
        }
        out.push(roots[k]);
        k += 1;
    }
    out
}
