//! Competitor gradient bounds and their comparison with the improved one.
//!
//! Comparisons in negative curvature run in the normalized variables
//! `K = −ρ`, `X = 4LP/(nρP)`, `G = 4Γ(P)/(nKP²)`, `r = 1/(Kt)`, `s = Kt`,
//! in which the dimension `n` drops out. The improved bound reads
//! `G ≤ g(X) = 2 − X + 2r·F(s²(1 − X))`.

use crate::error::{check_finite, check_time, Error, Result};
use crate::kernel::{
    domain_limit, eval_f, eval_f_minus_one, eval_f_prime, eval_phi, eval_s, CurvatureDimension,
};
use crate::report::MarginReport;
use crate::roots::find_roots;

/// `Γ(P)/P² ≤ a·LP/P + (n/2)·b`, equivalently `Φ_t(x) ≤ (ρ/2)·a·x + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearBound {
    pub a: f64,
    pub b: f64,
    /// Point where the line touches Φ_t.
    pub tangency: f64,
}

impl LinearBound {
    /// Value of the line at normalized ratio `x`, on the Φ_t scale.
    pub fn line(&self, rho: f64, x: f64) -> f64 {
        0.5 * rho * self.a * x + self.b
    }
}

/// Tangent line of Φ_t at the point where the kernel argument equals `w`.
fn tangent_from_kernel_argument(rho: f64, t: f64, w: f64) -> Result<LinearBound> {
    let f = eval_f(w)?;
    let fp = eval_f_prime(w)?;
    let s = eval_s(w);
    // 1/S(w)² = F(w)² − w; the first form stays accurate as S overflows.
    let inv_s2 = if s.is_finite() { 1.0 / (s * s) } else { 0.0 };
    Ok(LinearBound {
        a: 1.0 - 2.0 * rho * t * fp,
        b: 0.5 * (f + inv_s2) / t - rho + rho * rho * t * fp,
        tangency: 1.0 - w / (rho * rho * t * t),
    })
}

fn check_linearization(rho: f64, t: f64) -> Result<()> {
    check_finite("rho", rho)?;
    check_time("t", t)?;
    if rho == 0.0 {
        return Err(Error::ZeroCurvature);
    }
    Ok(())
}

/// Hyperbolic family, tangent at `x₀ = 1 − α²/ρ²`, for `α ≥ 0`.
pub fn linearized_bound_hyperbolic(rho: f64, t: f64, alpha: f64) -> Result<LinearBound> {
    check_linearization(rho, t)?;
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    let y = alpha * t;
    tangent_from_kernel_argument(rho, t, y * y)
}

/// Trigonometric family, tangent at `x₀ = 1 + β²/ρ²`, for `0 < β < π/t`.
pub fn linearized_bound_trigonometric(rho: f64, t: f64, beta: f64) -> Result<LinearBound> {
    check_linearization(rho, t)?;
    if !(beta > 0.0 && beta * t < std::f64::consts::PI) {
        return Err(Error::InvalidParameter(format!("beta must lie in (0, pi/t), got {beta}")));
    }
    let y = beta * t;
    tangent_from_kernel_argument(rho, t, -y * y)
}

/// The Euclidean Li-Yau bound `v + n/(2t)` on `Γ(P)/P²`, with `v = LP/P`.
pub fn bound_classical_liyau(n: f64, t: f64, v: f64) -> f64 {
    v + n / (2.0 * t)
}

/// A point `(X, G)` in the normalized variables, with `K = −ρ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedState {
    pub x: f64,
    pub g: f64,
    pub k: f64,
    pub t: f64,
}

impl NormalizedState {
    pub fn new(k: f64, t: f64, x: f64, g: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter(format!("K must be positive, got {k}")));
        }
        check_time("t", t)?;
        check_finite("X", x)?;
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::InvalidParameter(format!("G must be finite and >= 0, got {g}")));
        }
        Ok(Self { x, g, k, t })
    }

    /// From `LP/P` and `Γ(P)/P²` under CD(−K, n).
    pub fn from_ratios(n: f64, k: f64, t: f64, l_ratio: f64, gamma_ratio: f64) -> Result<Self> {
        Self::new(k, t, -4.0 * l_ratio / (n * k), 4.0 * gamma_ratio / (n * k))
    }

    pub fn r(&self) -> f64 {
        1.0 / (self.k * self.t)
    }

    pub fn s(&self) -> f64 {
        self.k * self.t
    }
}

/// `g(X) = 2 − X + 2r·F(s²(1 − X))`, the improved bound on `G`.
pub fn improved_g_bound(k: f64, t: f64, x: f64) -> Result<f64> {
    Ok(2.0 / k * eval_phi(-k, t, x)?)
}

pub fn satisfies_improved(ns: &NormalizedState) -> Result<bool> {
    if ns.x >= domain_limit(-ns.k, ns.t) {
        return Ok(false);
    }
    Ok(ns.g <= improved_g_bound(ns.k, ns.t, ns.x)?)
}

fn davies_g(ns: &NormalizedState, alpha: f64) -> f64 {
    -alpha * ns.x + alpha * alpha / (alpha - 1.0) + 2.0 * alpha * alpha * ns.r()
}

/// `X`-side of the Bakry–Qian bound, `−G + 2r + 2√(G + 1 + 2r)`.
fn bakry_qian_x(r: f64, g: f64) -> f64 {
    -g + 2.0 * r + 2.0 * (g + 1.0 + 2.0 * r).sqrt()
}

/// `X`-side of the Yau bound, `−G + 2r + 2√2·√(G + 8 + 2r)`.
fn yau_x(r: f64, g: f64) -> f64 {
    -g + 2.0 * r + 2.0 * std::f64::consts::SQRT_2 * (g + 8.0 + 2.0 * r).sqrt()
}

/// `X`-side of Hamilton's bound, `−e^{−2s}G + (2/s)e^{2s}`.
fn hamilton_x(s: f64, g: f64) -> f64 {
    -(-2.0 * s).exp() * g + 2.0 / s * (2.0 * s).exp()
}

/// Slope and offset of the Li–Xu bound `G ≤ −A·X + 2B/K`, i.e. the
/// coefficients `(A, B)` of `Γ/P² ≤ A·LP/P + (n/2)B`.
pub fn li_xu_coefficients(k: f64, t: f64) -> Result<(f64, f64)> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!("K must be positive, got {k}")));
    }
    check_time("t", t)?;
    let y = k * t;
    let w = y * y;
    // (sinh 2y − 2y)/(2 sinh² y) = 4y·F'(y²)/2 and coth y = F(y²)/y.
    let a = 1.0 + 2.0 * y * eval_f_prime(w)?;
    let b = k + eval_f(w)? / t;
    Ok((a, b))
}

fn li_xu_g(ns: &NormalizedState) -> Result<f64> {
    let (a, b) = li_xu_coefficients(ns.k, ns.t)?;
    Ok(-a * ns.x + 2.0 * b / ns.k)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("Davies' alpha must exceed 1, got {alpha}")))
    }
}

/// `G ≤ −αX + α²/(α−1) + 2α²r`.
pub fn satisfies_davies(ns: &NormalizedState, alpha: f64) -> Result<bool> {
    check_alpha(alpha)?;
    Ok(ns.g <= davies_g(ns, alpha))
}

/// `X ≤ −G + 2r + 2√2·√(G + 8 + 2r)`, reading the gradient term as `Γ(P)/P²`.
pub fn satisfies_yau(ns: &NormalizedState) -> bool {
    ns.x <= yau_x(ns.r(), ns.g)
}

/// `X ≤ −G + 2r + 2√(G + 1 + 2r)`.
pub fn satisfies_bakry_qian(ns: &NormalizedState) -> bool {
    ns.x <= bakry_qian_x(ns.r(), ns.g)
}

/// `X ≤ −e^{−2s}G + (2/s)e^{2s}`.
pub fn satisfies_hamilton(ns: &NormalizedState) -> bool {
    ns.x <= hamilton_x(ns.s(), ns.g)
}

/// `G ≤ −A·X + 2(1 + coth s)`.
pub fn satisfies_li_xu(ns: &NormalizedState) -> Result<bool> {
    Ok(ns.g <= li_xu_g(ns)?)
}

/// `ln(e^{2x} − 1 − 2x)` for `x > 0` without cancellation.
fn ln_exp_remainder(x: f64) -> f64 {
    if x < 0.5 {
        // Σ_{k≥2} (2x)^k/k! = 2x²·Σ_{j≥0} (2x)^j·2/(j+2)!
        let z = 2.0 * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..30 {
            term *= z / (j + 2) as f64;
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        (2.0 * x * x).ln() + sum.ln()
    } else if x > 20.0 {
        2.0 * x + (-(1.0 + 2.0 * x) * (-2.0 * x).exp()).ln_1p()
    } else {
        ((2.0 * x).exp_m1() - 2.0 * x).ln()
    }
}

/// Logarithm of the Li–Xu Harnack factor for `0 < s < t`, `K > 0`.
pub fn li_xu_harnack_exponent(n: f64, k: f64, s: f64, t: f64, d: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!("K must be positive, got {k}")));
    }
    check_time("s", s)?;
    check_time("t", t)?;
    if s >= t {
        return Err(Error::Hypothesis(format!("the Li-Xu Harnack bound needs s < t, got s = {s}, t = {t}")));
    }
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::InvalidParameter(format!("distance must be finite and >= 0, got {d}")));
    }
    let volume = 0.25 * n * (ln_exp_remainder(k * t) - ln_exp_remainder(k * s));
    // t coth(Kt) − s coth(Ks) = (F(K²t²) − F(K²s²))/K.
    let coth_gap = (eval_f_minus_one(k * k * t * t)? - eval_f_minus_one(k * k * s * s)?) / k;
    let gap = t - s;
    Ok(volume + d * d / (4.0 * gap) * (1.0 + coth_gap / gap))
}

/// A competitor bound from the negative-curvature literature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Competitor {
    Davies { alpha: f64 },
    Yau,
    BakryQian,
    Hamilton,
    LiXu,
}

impl Competitor {
    pub fn label(&self) -> String {
        match self {
            Competitor::Davies { alpha } => format!("davies(alpha={alpha})"),
            Competitor::Yau => "yau".into(),
            Competitor::BakryQian => "bakry-qian".into(),
            Competitor::Hamilton => "hamilton".into(),
            Competitor::LiXu => "li-xu".into(),
        }
    }

    /// The default comparison set.
    pub fn standard_set() -> Vec<Competitor> {
        vec![
            Competitor::Davies { alpha: 1.1 },
            Competitor::Davies { alpha: 2.0 },
            Competitor::Davies { alpha: 10.0 },
            Competitor::BakryQian,
            Competitor::Hamilton,
            Competitor::LiXu,
            Competitor::Yau,
        ]
    }

    /// Slack of this competitor at the extreme state `G = g(X)` allowed by
    /// the improved bound, with the magnitude of the compared values.
    /// Bounds on `G` compare in `G`; bounds on `X` (decreasing in `G`)
    /// compare in `X`. Nonnegative means the competitor admits every state
    /// the improved bound admits at this `X`.
    pub fn margin_at(&self, k: f64, t: f64, x: f64) -> Result<(f64, f64)> {
        let g = improved_g_bound(k, t, x)?;
        let ns = NormalizedState { x, g, k, t };
        let (bound, observed) = match *self {
            Competitor::Davies { alpha } => {
                check_alpha(alpha)?;
                (davies_g(&ns, alpha), g)
            }
            Competitor::LiXu => (li_xu_g(&ns)?, g),
            Competitor::BakryQian => (bakry_qian_x(ns.r(), g), x),
            Competitor::Hamilton => (hamilton_x(ns.s(), g), x),
            Competitor::Yau => (yau_x(ns.r(), g), x),
        };
        Ok((bound - observed, bound.abs() + observed.abs()))
    }
}

/// Left end of the dominance grid.
pub const DOMINANCE_X_MIN: f64 = -50.0;
/// Extra far-left sample confirming the asymptotic ordering.
pub const DOMINANCE_FAR_TAIL: f64 = -1e6;
pub const DOMINANCE_TOLERANCE: f64 = 1e-10;

/// Sweeps `X` over `[−50, ξ]`, where `ξ` is the root of Φ_t, plus a far
/// left sample. States with `X > ξ` would need `G < 0`, so the grid covers
/// every admissible `X` except the far tail.
pub fn dominance_report_with(
    cd: &CurvatureDimension,
    t: f64,
    grid_size: usize,
    competitors: &[Competitor],
) -> Result<Vec<MarginReport>> {
    let rho = cd.rho();
    if rho >= 0.0 {
        return Err(Error::Hypothesis("the competitor bounds assume rho < 0".into()));
    }
    if grid_size < 2 {
        return Err(Error::InvalidParameter("grid_size must be at least 2".into()));
    }
    let k = -rho;
    let xi = find_roots(rho, t)?.xi.expect("rho < 0").value;
    let step = (xi - DOMINANCE_X_MIN) / (grid_size - 1) as f64;
    let mut xs: Vec<f64> = (0..grid_size).map(|i| DOMINANCE_X_MIN + step * i as f64).collect();
    *xs.last_mut().expect("grid_size >= 2") = xi;
    xs.push(DOMINANCE_FAR_TAIL);

    competitors
        .iter()
        .map(|c| {
            let mut report = MarginReport::new(c.label(), DOMINANCE_TOLERANCE);
            for (i, &x) in xs.iter().enumerate() {
                let (margin, scale) = c.margin_at(k, t, x)?;
                report.observe(margin, scale, x, Some(i), t);
            }
            Ok(report)
        })
        .collect()
}

/// [`dominance_report_with`] over [`Competitor::standard_set`].
pub fn dominance_report(cd: &CurvatureDimension, t: f64, grid_size: usize) -> Result<Vec<MarginReport>> {
    dominance_report_with(cd, t, grid_size, &Competitor::standard_set())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn li_xu_anchor() {
        let (a, b) = li_xu_coefficients(1.0, 1.0).unwrap();
        // mpmath: 1 + (sinh 2 − 2)/(2 sinh² 1) and 1 + coth 1
        assert_relative_eq!(a, 1.588973624533021, max_relative = 1e-14);
        assert_relative_eq!(b, 2.313035285499331, max_relative = 1e-14);
        let lin = linearized_bound_hyperbolic(-1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(lin.a, a, max_relative = 1e-14);
        assert_relative_eq!(lin.b, b, max_relative = 1e-14);
        assert_relative_eq!(lin.tangency, 0.0);
    }

    #[test]
    fn zero_alpha_limit() {
        let lin = linearized_bound_hyperbolic(2.0, 0.5, 0.0).unwrap();
        assert_relative_eq!(lin.a, 1.0 - 2.0 * 2.0 * 0.5 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(lin.b, 1.0 / 0.5 - 2.0 + 4.0 * 0.5 / 3.0, max_relative = 1e-15);
        let tiny = linearized_bound_trigonometric(2.0, 0.5, 1e-7).unwrap();
        assert_relative_eq!(tiny.a, lin.a, max_relative = 1e-12);
        assert_relative_eq!(tiny.b, lin.b, max_relative = 1e-12);
    }

    #[test]
    fn large_alpha_stays_finite() {
        let lin = linearized_bound_hyperbolic(-1.0, 1.0, 800.0).unwrap();
        assert!(lin.a.is_finite() && lin.b.is_finite());
    }

    #[test]
    fn trigonometric_domain() {
        assert!(linearized_bound_trigonometric(1.0, 1.0, 0.0).is_err());
        assert!(linearized_bound_trigonometric(1.0, 1.0, std::f64::consts::PI).is_err());
        assert!(linearized_bound_trigonometric(1.0, 1.0, std::f64::consts::FRAC_PI_2).is_ok());
    }

    #[test]
    fn classical_liyau_values() {
        assert_eq!(bound_classical_liyau(2.0, 1.0, 0.0), 1.0);
        assert_eq!(bound_classical_liyau(4.0, 2.0, -1.0), 0.0);
        assert_eq!(bound_classical_liyau(2.0, 0.5, 3.0), 5.0);
    }

    #[test]
    fn simple_satisfaction_cases() {
        let bq = NormalizedState::new(1.0, 1.0, 0.0, 0.0).unwrap();
        assert!(satisfies_bakry_qian(&bq));
        let bad = NormalizedState::new(10.0, 1.0, 10.0, 0.0).unwrap();
        assert!(!satisfies_bakry_qian(&bad));
        assert!(satisfies_hamilton(&NormalizedState::new(1.0, 1.0, 0.0, 0.0).unwrap()));
        assert!(!satisfies_hamilton(&NormalizedState::new(1.0, 1.0, 100.0, 0.0).unwrap()));
        let over = NormalizedState::new(1.0, 1.0, 0.5, 1e3).unwrap();
        assert!(!satisfies_davies(&over, 2.0).unwrap());
        assert!(!satisfies_li_xu(&over).unwrap());
        assert!(!satisfies_yau(&NormalizedState::new(1.0, 1.0, 100.0, 0.0).unwrap()));
        assert!(satisfies_davies(&over, 1.0).is_err());
    }

    #[test]
    fn li_xu_harnack_small_k() {
        let e = li_xu_harnack_exponent(2.0, 1e-7, 1.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(e, 2f64.ln() + 0.25, max_relative = 1e-6);
        assert!(li_xu_harnack_exponent(2.0, 1.0, 2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn ln_exp_remainder_branches_agree() {
        for &x in &[0.49999f64, 0.5, 0.50001, 19.999, 20.0, 20.001] {
            let direct = ((2.0 * x).exp() - 1.0 - 2.0 * x).ln();
            assert_relative_eq!(ln_exp_remainder(x), direct, max_relative = 1e-13);
        }
        assert_relative_eq!(ln_exp_remainder(1e-4), (2e-8f64 * (1.0 + 2e-4 / 3.0 + 1e-8 / 3.0)).ln(), max_relative = 1e-14);
    }

    #[test]
    fn dominance_requires_negative_curvature() {
        let cd = CurvatureDimension::new(1.0, 2.0).unwrap();
        assert!(dominance_report(&cd, 1.0, 10).is_err());
        let cd = CurvatureDimension::new(-1.0, 2.0).unwrap();
        for r in dominance_report(&cd, 1.0, 50).unwrap() {
            assert!(r.passed, "{r}");
        }
    }
}
