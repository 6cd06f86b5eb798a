//! Quasi-Newton minimization with a strong-Wolfe line search.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BfgsOptions {
    /// Stop when the gradient ∞-norm drops below this.
    pub tol_grad: f64,
    pub max_iter: usize,
    pub c1: f64,
    pub c2: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self { tol_grad: 1e-5, max_iter: 200, c1: 1e-4, c2: 0.9 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BfgsOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub grad: Vec<f64>,
    pub iterations: usize,
    /// f at the start and after every accepted step.
    pub history: Vec<f64>,
    pub converged: bool,
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct Point {
    alpha: f64,
    f: f64,
    g: DVector<f64>,
    dphi: f64,
}

/// Minimizes `fg`, which returns the value and gradient at a point.
pub fn bfgs<F>(mut fg: F, x0: &[f64], opts: &BfgsOptions) -> Result<BfgsOutcome>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let n = x0.len();
    let mut eval = |x: &DVector<f64>| -> Result<(f64, DVector<f64>)> {
        let (f, g) = fg(x.as_slice())?;
        if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
            return Err(Error::Optimizer { msg: "non-finite objective or gradient".into(), params: x.as_slice().to_vec() });
        }
        Ok((f, DVector::from_vec(g)))
    };
    let mut x = DVector::from_column_slice(x0);
    let (mut f, mut g) = eval(&x)?;
    let mut h = DMatrix::<f64>::identity(n, n);
    let mut history = vec![f];
    let mut iterations = 0;
    let mut converged = inf_norm(&g) < opts.tol_grad;
    let mut scaled = false;
    while !converged && iterations < opts.max_iter {
        let mut p = -(&h * &g);
        if p.dot(&g) >= 0.0 {
            h = DMatrix::identity(n, n);
            p = -g.clone();
        }
        let dphi0 = p.dot(&g);
        let Some(pt) = line_search(&mut eval, &x, f, dphi0, &p, opts)? else {
            // no acceptable step along a descent direction: retry once from steepest descent
            if h != DMatrix::identity(n, n) {
                h = DMatrix::identity(n, n);
                continue;
            }
            break;
        };
        iterations += 1;
        let s = &p * pt.alpha;
        let y = &pt.g - &g;
        x += &s;
        f = pt.f;
        g = pt.g;
        history.push(f);
        let sy = s.dot(&y);
        if sy > 1e-14 {
            if !scaled {
                h = DMatrix::identity(n, n) * (sy / y.dot(&y));
                scaled = true;
            }
            let rho = 1.0 / sy;
            let hy = &h * &y;
            let yhy = y.dot(&hy);
            // H ← (I − ρsyᵀ) H (I − ρysᵀ) + ρssᵀ, expanded
            h += (&s * s.transpose()) * (rho * rho * yhy + rho) - (&hy * s.transpose() + &s * hy.transpose()) * rho;
        }
        converged = inf_norm(&g) < opts.tol_grad;
    }
    Ok(BfgsOutcome { x: x.as_slice().to_vec(), f, grad: g.as_slice().to_vec(), iterations, history, converged })
}

fn line_search<E>(
    eval: &mut E,
    x: &DVector<f64>,
    f0: f64,
    dphi0: f64,
    p: &DVector<f64>,
    opts: &BfgsOptions,
) -> Result<Option<Point>>
where
    E: FnMut(&DVector<f64>) -> Result<(f64, DVector<f64>)>,
{
    let mut probe = |alpha: f64| -> Result<Point> {
        let (f, g) = eval(&(x + p * alpha))?;
        let dphi = g.dot(p);
        Ok(Point { alpha, f, g, dphi })
    };
    let mut prev = Point { alpha: 0.0, f: f0, g: DVector::zeros(0), dphi: dphi0 };
    let mut alpha = 1.0;
    for i in 0..30 {
        let cur = probe(alpha)?;
        if cur.f > f0 + opts.c1 * alpha * dphi0 || (i > 0 && cur.f >= prev.f) {
            return zoom(&mut probe, prev, cur, f0, dphi0, opts);
        }
        if cur.dphi.abs() <= -opts.c2 * dphi0 {
            return Ok(Some(cur));
        }
        if cur.dphi >= 0.0 {
            return zoom(&mut probe, cur, prev, f0, dphi0, opts);
        }
        alpha *= 2.0;
        prev = cur;
    }
    Ok(None)
}

fn zoom<P>(probe: &mut P, mut lo: Point, mut hi: Point, f0: f64, dphi0: f64, opts: &BfgsOptions) -> Result<Option<Point>>
where
    P: FnMut(f64) -> Result<Point>,
{
    for _ in 0..40 {
        let alpha = cubic_min(&lo, &hi).unwrap_or(0.5 * (lo.alpha + hi.alpha));
        let cur = probe(alpha)?;
        if cur.f > f0 + opts.c1 * alpha * dphi0 || cur.f >= lo.f {
            hi = cur;
        } else {
            if cur.dphi.abs() <= -opts.c2 * dphi0 {
                return Ok(Some(cur));
            }
            if cur.dphi * (hi.alpha - lo.alpha) >= 0.0 {
                hi = lo;
            }
            lo = cur;
        }
        if (hi.alpha - lo.alpha).abs() < 1e-14 {
            break;
        }
    }
    // accept the best sufficient-decrease point even if curvature is not met
    Ok((lo.alpha > 0.0 && lo.f < f0).then_some(lo))
}

/// Minimizer of the cubic through two points with slopes, kept well inside the bracket.
fn cubic_min(a: &Point, b: &Point) -> Option<f64> {
    let d1 = a.dphi + b.dphi - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
    let disc = d1 * d1 - a.dphi * b.dphi;
    if disc < 0.0 {
        return None;
    }
    let d2 = (b.alpha - a.alpha).signum() * disc.sqrt();
    let t = b.alpha - (b.alpha - a.alpha) * (b.dphi + d2 - d1) / (b.dphi - a.dphi + 2.0 * d2);
    let (lo, hi) = if a.alpha < b.alpha { (a.alpha, b.alpha) } else { (b.alpha, a.alpha) };
    let margin = 0.1 * (hi - lo);
    (t.is_finite() && t > lo + margin && t < hi - margin).then_some(t)
}
