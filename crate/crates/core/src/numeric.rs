//! Small numerical building blocks: sign-change bisection, adaptive Simpson
//! quadrature and a tridiagonal solver.

use crate::error::{Error, Result};

/// A root together with a float enclosure `[lo, hi]` on which the function
/// changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Root {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

pub const MAX_BISECTIONS: usize = 200;

/// Bisects `f` on `[a, b]`, where `f(a)` and `f(b)` have opposite signs,
/// until the enclosure is a pair of adjacent floats (or `f` hits zero).
///
/// The reported value is the enclosure endpoint with the smaller `|f|`.
pub fn bisect<F>(mut f: F, a: f64, b: f64) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(Root { value: lo, lo, hi: lo });
    }
    if fhi == 0.0 {
        return Ok(Root { value: hi, lo: hi, hi });
    }
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return Err(Error::InvalidParameter(format!(
            "bisection bracket [{lo}, {hi}] has no sign change ({flo}, {fhi})"
        )));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            let value = if flo.abs() <= fhi.abs() { lo } else { hi };
            return Ok(Root { value, lo, hi });
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(Root { value: mid, lo: mid, hi: mid });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    Err(Error::NoConvergence("bisection"))
}

/// Settings for [`adaptive_simpson`].
#[derive(Debug, Clone, Copy)]
pub struct SimpsonOptions {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_depth: u32,
    /// Hard cap on integrand evaluations.
    pub max_evaluations: usize,
}

impl Default for SimpsonOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_floor: 1e-14, max_depth: 40, max_evaluations: 200_000 }
    }
}

struct Simpson<'a, F> {
    f: &'a mut F,
    opts: SimpsonOptions,
    evaluations: usize,
    failed: bool,
}

impl<F: FnMut(f64) -> Result<f64>> Simpson<'_, F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        self.evaluations += 1;
        if self.evaluations > self.opts.max_evaluations {
            return Err(Error::NoConvergence("adaptive Simpson quadrature (evaluation budget)"));
        }
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(Error::NonFinite("quadrature integrand"));
        }
        Ok(v)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        &mut self,
        a: f64,
        fa: f64,
        m: f64,
        fm: f64,
        b: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        if depth >= self.opts.max_depth || lm <= a || rm >= b {
            self.failed = true;
            return Ok(left + right + delta / 15.0);
        }
        let l = self.recurse(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)?;
        let r = self.recurse(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1)?;
        Ok(l + r)
    }
}

/// Result of an adaptive Simpson integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub evaluations: usize,
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` with Richardson
/// correction. The absolute target is `max(rel_tol·|I₀|, abs_floor)`, where
/// `I₀` is a 17-point composite Simpson estimate of the integral.
/// Reversed bounds (`a > b`) give the negated integral over `[b, a]`.
pub fn adaptive_simpson<F>(mut f: F, a: f64, b: f64, opts: SimpsonOptions) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(Quadrature { value: 0.0, evaluations: 0 });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter("integration bounds must be finite".into()));
    }
    if a > b {
        let q = adaptive_simpson(f, b, a, opts)?;
        return Ok(Quadrature { value: -q.value, ..q });
    }
    let mut s = Simpson { f: &mut f, opts, evaluations: 0, failed: false };

    // Seed with 8 panels so that narrow features are not missed at the top level.
    const PANELS: usize = 8;
    let h = (b - a) / PANELS as f64;
    let xs: Vec<f64> = (0..=2 * PANELS).map(|k| a + 0.5 * h * k as f64).collect();
    let mut fs = Vec::with_capacity(xs.len());
    for &x in &xs {
        fs.push(s.eval(x)?);
    }
    let wholes: Vec<f64> = (0..PANELS)
        .map(|p| h / 6.0 * (fs[2 * p] + 4.0 * fs[2 * p + 1] + fs[2 * p + 2]))
        .collect();
    let scale: f64 = wholes.iter().sum::<f64>().abs();
    let tol = (opts.rel_tol * scale).max(opts.abs_floor) / PANELS as f64;

    let mut total = 0.0;
    for p in 0..PANELS {
        total += s.recurse(
            xs[2 * p],
            fs[2 * p],
            xs[2 * p + 1],
            fs[2 * p + 1],
            xs[2 * p + 2],
            fs[2 * p + 2],
            wholes[p],
            tol,
            0,
        )?;
    }
    if s.failed {
        return Err(Error::NoConvergence("adaptive Simpson quadrature"));
    }
    Ok(Quadrature { value: total, evaluations: s.evaluations })
}

/// Solves a tridiagonal system with the Thomas algorithm.
///
/// `lower[i]` multiplies `x[i-1]` in row `i` (so `lower[0]` is unused) and
/// `upper[i]` multiplies `x[i+1]` (`upper[n-1]` is unused). Intended for
/// diagonally dominant systems; no pivoting is done.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert!(lower.len() == n && upper.len() == n && rhs.len() == n);
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!(r.lo <= 2f64.sqrt() && 2f64.sqrt() <= r.hi);
        assert!(r.width() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn bisect_exact_zero_and_bad_bracket() {
        let r = bisect(|x| x - 1.0, 0.0, 2.0).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn simpson_polynomial_and_exp() {
        let q = adaptive_simpson(|x| Ok(x * x * x), 0.0, 2.0, SimpsonOptions::default()).unwrap();
        assert_relative_eq!(q.value, 4.0, max_relative = 1e-14);
        let q = adaptive_simpson(|x: f64| Ok(x.exp()), 0.0, 1.0, SimpsonOptions::default()).unwrap();
        assert_relative_eq!(q.value, 1f64.exp() - 1.0, max_relative = 1e-10);
    }

    #[test]
    fn simpson_reversed_bounds() {
        let q = adaptive_simpson(|x| Ok(x * x), 3.0, 0.0, SimpsonOptions::default()).unwrap();
        assert_relative_eq!(q.value, -9.0, max_relative = 1e-14);
    }

    #[test]
    fn simpson_peaked_integrand() {
        let f = |x: f64| Ok(1.0 / (1e-4 + x * x));
        let q = adaptive_simpson(f, -1.0, 1.0, SimpsonOptions::default()).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert_relative_eq!(q.value, exact, max_relative = 1e-9);
    }

    #[test]
    fn simpson_propagates_errors() {
        let r = adaptive_simpson(|_| Err(Error::NoConvergence("x")), 0.0, 1.0, SimpsonOptions::default());
        assert!(r.is_err());
    }

    #[test]
    fn thomas_matches_dense() {
        let lower = [0.0, -1.0, -1.0, -1.0];
        let diag = [4.0, 4.0, 4.0, 4.0];
        let upper = [-1.0, -1.0, -1.0, 0.0];
        let x_true = [1.0, 2.0, -1.0, 0.5];
        let rhs: Vec<f64> = (0..4)
            .map(|i| {
                let mut s = diag[i] * x_true[i];
                if i > 0 {
                    s += lower[i] * x_true[i - 1];
                }
                if i < 3 {
                    s += upper[i] * x_true[i + 1];
                }
                s
            })
            .collect();
        let x = solve_tridiagonal(&lower, &diag, &upper, &rhs);
        for (a, b) in x.iter().zip(x_true.iter()) {
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }
}
