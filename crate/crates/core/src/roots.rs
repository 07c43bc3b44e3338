//! Roots of Φ_t and what they certify.
//!
//! For ρ > 0 the concave function Φ_t has two roots `ξ₁ < 0 < ξ₂`, and the
//! normalized Laplacian ratio of any positive solution is trapped between
//! them. For ρ < 0 there is a single root `1 < ξ < 1 + π²/(ρ²t²)`.
//! Integrating the two-sided bound in time gives the ultracontractive
//! envelope of `P_t f / ∫ f dμ`.

use crate::error::{check_finite, check_time, Error, Result};
use crate::kernel::{domain_limit, eval_phi, phi_over_rho_sqrt_form, CurvatureDimension};
use crate::numeric::{adaptive_simpson, bisect, Root, SimpsonOptions};

/// Roots of Φ_t for a fixed `(ρ, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSet {
    pub rho: f64,
    pub t: f64,
    /// Negative root, ρ > 0.
    pub xi1: Option<Root>,
    /// Positive root, ρ > 0.
    pub xi2: Option<Root>,
    /// Unique root, ρ < 0.
    pub xi: Option<Root>,
}

/// Φ_t with the region beyond the domain limit mapped to −∞.
fn phi_or_neg_inf(rho: f64, t: f64, x: f64) -> f64 {
    eval_phi(rho, t, x).unwrap_or(f64::NEG_INFINITY)
}

/// Walks from `start` toward the domain limit, halving the remaining gap,
/// until Φ_t turns negative. Returns `(last positive point, first negative point)`.
fn approach_limit(rho: f64, t: f64, start: f64, first_gap_fraction: f64) -> Result<(f64, f64)> {
    let limit = domain_limit(rho, t);
    let mut lo = start;
    let mut gap = (limit - start) * first_gap_fraction;
    for _ in 0..1100 {
        let x = limit - gap;
        if x <= lo {
            gap *= 0.5;
            continue;
        }
        if x >= limit {
            break;
        }
        if phi_or_neg_inf(rho, t, x) < 0.0 {
            return Ok((lo, x));
        }
        lo = x;
        gap *= 0.5;
    }
    Err(Error::NoConvergence("bracketing toward the domain limit"))
}

/// Finds `[a, b]` with `g(a) > 0 ≥ g(b)` around `guess` by doubling and
/// halving, given `g(0) > 0` and, if `cap` is set, `g(cap) ≤ 0`.
fn geometric_bracket<G: Fn(f64) -> f64>(g: G, guess: f64, cap: Option<f64>) -> Result<(f64, f64)> {
    let clamp = |u: f64| cap.map_or(u, |c| u.min(c));
    let mut u = clamp(guess);
    if g(u) > 0.0 {
        for _ in 0..2200 {
            let next = clamp(2.0 * u);
            if g(next) <= 0.0 {
                return Ok((u, next));
            }
            u = next;
        }
    } else {
        for _ in 0..2200 {
            let next = 0.5 * u;
            if next == 0.0 || g(next) > 0.0 {
                return Ok((next, u));
            }
            u = next;
        }
    }
    Err(Error::NoConvergence("bracketing a root of Phi"))
}

/// Locates every root of Φ_t by bisection to adjacent-float enclosures.
///
/// For ρ > 0 both roots approach 0 like `±4e^{−ρt}` while Φ_t' nearly
/// vanishes there, so they are solved in the offset `|√(1−x) − 1|` where
/// the equation is well conditioned.
pub fn find_roots(rho: f64, t: f64) -> Result<RootSet> {
    check_time("t", t)?;
    check_finite("rho", rho)?;
    if rho == 0.0 {
        return Err(Error::ZeroCurvature);
    }
    if rho > 0.0 {
        // ξ₁ = −v(2 + v) with v = √(1−ξ₁) − 1 > 0; the function is positive at v = 0.
        let g1 = |v: f64| phi_over_rho_sqrt_form(rho, t, 1.0 + v, -v);
        let scale = 2.0 * (-rho * t).exp();
        let (a, b) = geometric_bracket(g1, scale.max(f64::MIN_POSITIVE), None)?;
        let v = bisect(g1, a, b)?;
        let to_x1 = |v: f64| -v * (2.0 + v);
        let xi1 = Root { value: to_x1(v.value), lo: to_x1(v.hi), hi: to_x1(v.lo) };

        let xi2 = if rho * t >= 2.0 {
            // ξ₂ = u(2 − u) with u = 1 − √(1−ξ₂) ∈ (0, 1].
            let g2 = |u: f64| phi_over_rho_sqrt_form(rho, t, 1.0 - u, u);
            let (a, b) = geometric_bracket(g2, scale.max(f64::MIN_POSITIVE), Some(1.0))?;
            let u = bisect(g2, a, b)?;
            let to_x2 = |u: f64| u * (2.0 - u);
            Root { value: to_x2(u.value), lo: to_x2(u.lo), hi: to_x2(u.hi) }
        } else {
            let phi = |x: f64| phi_or_neg_inf(rho, t, x);
            let (a, b) = approach_limit(rho, t, 1.0, 0.5)?;
            bisect(phi, a, b)?
        };
        Ok(RootSet { rho, t, xi1: Some(xi1), xi2: Some(xi2), xi: None })
    } else {
        // Φ_t(1) = 1/t − ρ/2 > 0; start 1e-9 of the domain width from the end.
        let phi = |x: f64| phi_or_neg_inf(rho, t, x);
        let (a, b) = approach_limit(rho, t, 1.0, 1e-9)?;
        let xi = bisect(phi, a, b)?;
        Ok(RootSet { rho, t, xi1: None, xi2: None, xi: Some(xi) })
    }
}

/// Whether `ξ₂ ≤ 1`. Guaranteed when `t ≥ 2/ρ`; outside that window the
/// answer is only informative.
pub fn check_xi2_below_one(rho: f64, t: f64) -> Result<bool> {
    if rho <= 0.0 {
        return Err(Error::Hypothesis("xi2 exists only for rho > 0".into()));
    }
    let roots = find_roots(rho, t)?;
    let xi2 = roots.xi2.expect("rho > 0 yields xi2");
    Ok(xi2.hi <= 1.0)
}

/// Leading-order small-time expressions `(−2/(ρt), π²/(ρ²t²) − 4/(ρt))`.
pub fn small_time_asymptotics(rho: f64, t: f64) -> (f64, f64) {
    let rt = rho * t;
    (-2.0 / rt, std::f64::consts::PI.powi(2) / (rt * rt) - 4.0 / rt)
}

/// Large-time enclosure of ξ₁, valid for `t ≥ 1/(2ρ)`.
pub fn xi1_bracket(rho: f64, t: f64) -> Option<(f64, f64)> {
    if rho <= 0.0 || t < 0.5 / rho {
        return None;
    }
    let e = (-rho * t).exp();
    Some((-4.0 * e - 4.0 * e * e, -4.0 * e + 8.0 * rho * t * e * e))
}

/// Large-time enclosure of ξ₂, valid for `t ≥ 6/ρ`.
pub fn xi2_bracket(rho: f64, t: f64) -> Option<(f64, f64)> {
    if rho <= 0.0 || t < 6.0 / rho {
        return None;
    }
    let e = (-rho * t).exp();
    Some((4.0 * e - 4.0 * e * e, 4.0 * e + 8.0 * rho * t * e * e))
}

/// Two-sided bound on `P_t f / ∫ f dμ` for ρ > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub lower: f64,
    pub upper: f64,
    pub t: f64,
}

impl Envelope {
    pub fn contains(&self, ratio: f64) -> bool {
        self.lower <= ratio && ratio <= self.upper
    }
}

/// Upper end of the numerically integrated window; beyond it the root
/// brackets are integrated in closed form.
pub fn envelope_cutoff(rho: f64, t: f64) -> f64 {
    t.max(6.0 / rho) + 40.0 / rho
}

/// `exp(−(nρ/4)∫_t^∞ ξ₂) ≤ P_t f/∫f dμ ≤ exp(−(nρ/4)∫_t^∞ ξ₁)`.
///
/// The integrals run by adaptive Simpson (relative tolerance 1e-12) up to
/// [`envelope_cutoff`]; the tails use the side of the large-time root
/// brackets that keeps the envelope valid.
pub fn ultracontractive_envelope(cd: &CurvatureDimension, t: f64) -> Result<Envelope> {
    check_time("t", t)?;
    let rho = cd.rho();
    if rho <= 0.0 {
        return Err(Error::Hypothesis("the ultracontractive envelope needs rho > 0".into()));
    }
    let cutoff = envelope_cutoff(rho, t);
    let opts = SimpsonOptions { rel_tol: 1e-12, abs_floor: 1e-300, ..SimpsonOptions::default() };
    let xi1 = |u: f64| find_roots(rho, u).map(|r| r.xi1.expect("rho > 0").value);
    let xi2 = |u: f64| find_roots(rho, u).map(|r| r.xi2.expect("rho > 0").value);
    let int1 = adaptive_simpson(xi1, t, cutoff, opts)?.value;
    let int2 = adaptive_simpson(xi2, t, cutoff, opts)?.value;

    let e1 = (-rho * cutoff).exp();
    let e2 = e1 * e1;
    // ∫_T^∞ of −4e^{−ρu} − 4e^{−2ρu} and of 4e^{−ρu} + 8ρu e^{−2ρu}.
    let tail1 = -4.0 * e1 / rho - 2.0 * e2 / rho;
    let tail2 = 4.0 * e1 / rho + e2 * (4.0 * cutoff + 2.0 / rho);

    let scale = 0.25 * cd.n() * rho;
    Ok(Envelope {
        lower: (-scale * (int2 + tail2)).exp(),
        upper: (-scale * (int1 + tail1)).exp(),
        t,
    })
}

/// Upper bound `(3nρ/2) e² e^{−2ρt}` on `Γ(log P_t f)`, valid for `t ≥ 6/ρ`.
pub fn gradient_decay_bound(cd: &CurvatureDimension, t: f64) -> Result<f64> {
    let rho = cd.rho();
    if rho <= 0.0 {
        return Err(Error::Hypothesis("gradient decay needs rho > 0".into()));
    }
    if !(t >= 6.0 / rho) {
        return Err(Error::Hypothesis(format!("gradient decay needs t >= 6/rho, got t = {t}")));
    }
    Ok(1.5 * cd.n() * rho * (2.0 - 2.0 * rho * t).exp())
}

/// The printed large-time enclosure of the negative-curvature root,
/// `1 + π²/(ρ²t²)(1 − 2/(ρt)) ≤ ξ ≤ 1 + π²/(ρ²t²)`, under both readings of
/// the correction factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeRootBracket {
    /// Lower end with ρ taken literally (negative); exceeds `hi`.
    pub literal_lo: f64,
    /// Lower end with `|ρ|` in the correction factor.
    pub abs_lo: f64,
    pub hi: f64,
}

impl NegativeRootBracket {
    pub fn literal_contains(&self, x: f64) -> bool {
        self.literal_lo <= x && x <= self.hi
    }

    pub fn abs_contains(&self, x: f64) -> bool {
        self.abs_lo <= x && x <= self.hi
    }
}

pub fn negative_root_bracket(rho: f64, t: f64) -> Result<NegativeRootBracket> {
    check_time("t", t)?;
    if rho >= 0.0 {
        return Err(Error::Hypothesis("negative root bracket needs rho < 0".into()));
    }
    if t < 2.0 / rho.abs() {
        return Err(Error::Hypothesis(format!("negative root bracket needs t >= 2/|rho|, got {t}")));
    }
    let width = domain_limit(rho, t) - 1.0;
    Ok(NegativeRootBracket {
        literal_lo: 1.0 + width * (1.0 - 2.0 / (rho * t)),
        abs_lo: 1.0 + width * (1.0 - 2.0 / (rho.abs() * t)),
        hi: 1.0 + width,
    })
}
