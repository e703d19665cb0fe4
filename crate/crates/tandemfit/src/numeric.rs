//! Scalar root finding and quadrature used by the reference model.

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Outcome of bracketing a root: the function changed sign, or sat on one
/// side over the whole interval.
pub enum Bracket<S> {
    Straddles,
    /// Same sign at both ends; the sign reported is the sign at `a`.
    OneSided(S),
}

pub fn bracket_sign<S: Scalar>(fa: S, fb: S) -> Bracket<S> {
    if fa == S::zero() || fb == S::zero() || (fa > S::zero()) != (fb > S::zero()) {
        Bracket::Straddles
    } else {
        Bracket::OneSided(fa)
    }
}

/// Brent's method on `[a, b]`, which must straddle a root.
///
/// Converges to `xtol` absolute resolution in the argument. `fa`/`fb` are
/// the (already computed) endpoint values so callers never pay for them
/// twice.
pub fn brent_root<S, F>(mut f: F, a: S, b: S, fa: S, fb: S, xtol: S, max_iter: usize) -> Result<S>
where
    S: Scalar,
    F: FnMut(S) -> S,
{
    let two = S::of(2.0);
    let half = S::of(0.5);
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    if fa == S::zero() {
        return Ok(a);
    }
    if fb == S::zero() {
        return Ok(b);
    }
    if (fa > S::zero()) == (fb > S::zero()) {
        return Err(Error::Numerical(format!(
            "brent_root: no sign change on [{a}, {b}]"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..max_iter {
        if (fb > S::zero()) == (fc > S::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * S::epsilon() * b.abs() + half * xtol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == S::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Inverse quadratic interpolation / secant step.
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = S::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - S::one()));
                q = (qq - S::one()) * (r - S::one()) * (s - S::one());
            }
            if p > S::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = S::of(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b = b + d;
        } else {
            b = b + if xm > S::zero() { tol1 } else { -tol1 };
        }
        fb = f(b);
    }
    Err(Error::Numerical(format!(
        "brent_root: no convergence after {max_iter} iterations (last x = {b})"
    )))
}

/// Composite Simpson rule with a fixed, even panel count.
pub fn simpson_uniform<S, F>(f: F, a: S, b: S, panels: usize) -> S
where
    S: Scalar,
    F: Fn(S) -> S,
{
    assert!(panels >= 2 && panels % 2 == 0, "simpson needs an even panel count");
    let n = S::of(panels as f64);
    let h = (b - a) / n;
    let mut sum = f(a) + f(b);
    for k in 1..panels {
        let x = a + h * S::of(k as f64);
        let w = if k % 2 == 1 { S::of(4.0) } else { S::of(2.0) };
        sum = sum + w * f(x);
    }
    sum * h / S::of(3.0)
}

/// Adaptive Simpson quadrature with panel halving.
///
/// `breakpoints` are interior points where the integrand changes character
/// (here: the Fermi transition window); seeding panels there keeps the
/// recursion shallow. `abs_floor` is the smallest integral magnitude worth
/// resolving: tolerance never drops below `rel_tol * abs_floor`, which
/// stops the recursion from chasing denormal-scale residuals when the
/// integrand underflows. Fails if any panel still misses tolerance at the
/// depth cap.
pub fn integrate_adaptive<S, F>(
    f: &F,
    a: S,
    b: S,
    rel_tol: S,
    abs_floor: S,
    breakpoints: &[S],
) -> Result<S>
where
    S: Scalar,
    F: Fn(S) -> S,
{
    if b <= a {
        return Ok(S::zero());
    }
    let mut edges = vec![a];
    for &p in breakpoints {
        if p > a && p < b {
            edges.push(p);
        }
    }
    edges.push(b);
    edges.sort_by(|x, y| x.partial_cmp(y).expect("finite quadrature edges"));

    // Coarse pass fixes the absolute tolerance scale for every panel.
    let mut coarse = S::zero();
    for w in edges.windows(2) {
        coarse = coarse + simpson_uniform(f, w[0], w[1], 8).abs();
    }
    let abs_tol = rel_tol * coarse.max(abs_floor).max(S::of(f64::MIN_POSITIVE));

    // Error budget proportional to panel width: the panel sum then meets
    // abs_tol overall without re-halving tolerance per recursion level.
    let tol_per_width = abs_tol / (b - a);
    let width_floor = (b - a) * S::of(1e-13);

    let mut total = S::zero();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let m = (lo + hi) * S::of(0.5);
        let (flo, fm, fhi) = (f(lo), f(m), f(hi));
        let whole = (hi - lo) / S::of(6.0) * (flo + S::of(4.0) * fm + fhi);
        total = total
            + adaptive_panel(f, lo, hi, flo, fm, fhi, whole, tol_per_width, width_floor, 48)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_panel<S, F>(
    f: &F,
    a: S,
    b: S,
    fa: S,
    fm: S,
    fb: S,
    whole: S,
    tol_per_width: S,
    width_floor: S,
    depth: usize,
) -> Result<S>
where
    S: Scalar,
    F: Fn(S) -> S,
{
    let m = (a + b) * S::of(0.5);
    let lm = (a + m) * S::of(0.5);
    let rm = (m + b) * S::of(0.5);
    let (flm, frm) = (f(lm), f(rm));
    let h12 = (b - a) / S::of(12.0);
    let left = h12 * (fa + S::of(4.0) * flm + fm);
    let right = h12 * (fm + S::of(4.0) * frm + fb);
    let halves = left + right;
    let residual = halves - whole;
    let width = b - a;
    if residual.abs() <= S::of(15.0) * tol_per_width * width || width <= width_floor {
        return Ok(halves + residual / S::of(15.0));
    }
    if depth == 0 {
        return Err(Error::Numerical(format!(
            "quadrature panel-halving residual {residual} above tolerance on [{a}, {b}]"
        )));
    }
    Ok(adaptive_panel(f, a, m, fa, flm, fm, left, tol_per_width, width_floor, depth - 1)?
        + adaptive_panel(f, m, b, fm, frm, fb, right, tol_per_width, width_floor, depth - 1)?)
}

/// Chebyshev series fitted on `[a, b]` from first-kind nodes, evaluated by
/// the Clenshaw recurrence.
#[derive(Debug, Clone)]
pub struct ChebyshevSeries<S> {
    a: S,
    b: S,
    coeffs: Vec<S>,
}

impl<S: Scalar> ChebyshevSeries<S> {
    pub fn fit<F: FnMut(S) -> S>(mut f: F, a: S, b: S, n: usize) -> Self {
        assert!(n >= 2);
        let half = S::of(0.5);
        let center = (a + b) * half;
        let radius = (b - a) * half;
        let values: Vec<S> = (0..n)
            .map(|k| {
                let theta = std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
                f(center + radius * S::of(theta.cos()))
            })
            .collect();
        let scale = S::of(2.0 / n as f64);
        let coeffs = (0..n)
            .map(|j| {
                let mut acc = S::zero();
                for (k, &v) in values.iter().enumerate() {
                    let theta = std::f64::consts::PI * j as f64 * (k as f64 + 0.5) / n as f64;
                    acc = acc + v * S::of(theta.cos());
                }
                acc * scale
            })
            .collect();
        Self { a, b, coeffs }
    }

    pub fn eval(&self, x: S) -> S {
        let half = S::of(0.5);
        let t = (S::of(2.0) * x - self.a - self.b) / (self.b - self.a);
        let t2 = S::of(2.0) * t;
        let mut d = S::zero();
        let mut dd = S::zero();
        for &c in self.coeffs.iter().skip(1).rev() {
            let sv = d;
            d = t2 * d - dd + c;
            dd = sv;
        }
        t * d - dd + half * self.coeffs[0]
    }
}

/// Contiguous Chebyshev panels over a fixed interval.
#[derive(Debug, Clone)]
pub struct PiecewiseChebyshev<S> {
    lo: S,
    hi: S,
    panels: Vec<ChebyshevSeries<S>>,
}

impl<S: Scalar> PiecewiseChebyshev<S> {
    pub fn fit<F: FnMut(S) -> S>(mut f: F, lo: S, hi: S, panels: usize, degree: usize) -> Self {
        let mut out = Vec::with_capacity(panels);
        for i in 0..panels {
            let a = lo + (hi - lo) * S::of(i as f64 / panels as f64);
            let b = lo + (hi - lo) * S::of((i + 1) as f64 / panels as f64);
            out.push(ChebyshevSeries::fit(&mut f, a, b, degree));
        }
        Self { lo, hi, panels: out }
    }

    pub fn eval(&self, x: S) -> S {
        let n = self.panels.len();
        let t = ((x - self.lo) / (self.hi - self.lo)).as_f64() * n as f64;
        let idx = (t.floor() as isize).clamp(0, n as isize - 1) as usize;
        self.panels[idx].eval(x)
    }
}
