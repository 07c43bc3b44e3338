//! Analytic kernels behind the improved Li-Yau bound.
//!
//! Both branches of Φ_t (the `coth` branch for `x ≤ 1` and the `cot` branch
//! for `x ≥ 1`) are evaluated through one entire-in-spirit function of the
//! unified argument `w = ρ²t²(1 − x)`:
//!
//! ```text
//! F(w) = √w coth √w        (w > 0)
//!      = √−w cot √−w       (−π² < w < 0)
//!      = 1                 (w = 0)
//! ```
//!
//! so that `Φ_t(x) = (ρ/2)(x − 2) + F(w)/t`. `y ↦ y coth y` is even, which
//! makes the sign of ρ irrelevant inside `F` and removes the seam at `x = 1`.
//! Near `w = 0` every kernel switches to its Maclaurin series.

use std::f64::consts::PI;

use crate::error::{check_finite, check_time, Error, Result};

/// Below this `|w|` the kernels use their Maclaurin series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

const PI2: f64 = PI * PI;

// Coefficients of y·coth(y) as a power series in w = y².
const F_SERIES: [f64; 6] = [
    1.0,
    1.0 / 3.0,
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93555.0,
];

// k·c_k of the series above.
const F_PRIME_SERIES: [f64; 6] = [
    1.0 / 3.0,
    -2.0 / 45.0,
    2.0 / 315.0,
    -4.0 / 4725.0,
    10.0 / 93555.0,
    -6.0 * 1382.0 / 638512875.0,
];

// k(k−1)·c_k, two extra terms so the window can be wider.
const F_SECOND_SERIES: [f64; 6] = [
    -2.0 / 45.0,
    12.0 / 945.0,
    -12.0 / 4725.0,
    40.0 / 93555.0,
    -30.0 * 1382.0 / 638512875.0,
    42.0 * 4.0 / 18243225.0,
];

// sinh(y)/y = Σ w^k/(2k+1)!, valid for both signs of w.
const S_SERIES: [f64; 6] = [
    1.0,
    1.0 / 6.0,
    1.0 / 120.0,
    1.0 / 5040.0,
    1.0 / 362880.0,
    1.0 / 39916800.0,
];

fn horner(coeffs: &[f64], w: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * w + c)
}

/// The curvature-dimension pair `(ρ, n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureDimension {
    rho: f64,
    n: f64,
}

impl CurvatureDimension {
    pub fn new(rho: f64, n: f64) -> Result<Self> {
        check_finite("rho", rho)?;
        if !(n.is_finite() && n >= 1.0) {
            return Err(Error::InvalidParameter(format!("dimension n must be >= 1, got {n}")));
        }
        Ok(Self { rho, n })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn n(&self) -> f64 {
        self.n
    }
}

/// An evaluation point: time `t` and normalized Laplacian ratio
/// `x = 4 L P_t f / (n ρ P_t f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    pub t: f64,
    pub x: f64,
}

impl BoundQuery {
    pub fn new(t: f64, x: f64) -> Result<Self> {
        check_time("t", t)?;
        check_finite("x", x)?;
        Ok(Self { t, x })
    }

    /// Normalizes a raw ratio `v = L P_t f / P_t f`.
    pub fn from_laplacian_ratio(cd: &CurvatureDimension, t: f64, v: f64) -> Result<Self> {
        if cd.rho() == 0.0 {
            return Err(Error::ZeroCurvature);
        }
        Self::new(t, 4.0 * v / (cd.n() * cd.rho()))
    }
}

/// The unified kernel argument `w = ρ²t²(1 − x)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct KernelArgument(pub f64);

impl KernelArgument {
    pub fn new(rho: f64, t: f64, x: f64) -> Self {
        let rt = rho * t;
        Self(rt * rt * (1.0 - x))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Whether the argument is admissible for the sine branch.
    pub fn is_admissible(self) -> bool {
        self.0 > -PI2
    }
}

fn check_kernel_domain(w: f64) -> Result<()> {
    if w.is_nan() {
        return Err(Error::NonFinite("kernel argument"));
    }
    if w <= -PI2 {
        return Err(Error::KernelDomain { w });
    }
    Ok(())
}

/// `sinh(z) − z` without cancellation for small `z`.
pub(crate) fn sinh_minus_id(z: f64) -> f64 {
    if z.abs() < 1.0 {
        let z2 = z * z;
        let mut term = z * z2 / 6.0;
        let mut sum = term;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= z2 / ((k + 1.0) * (k + 2.0));
            sum += term;
            k += 2.0;
        }
        sum
    } else {
        z.sinh() - z
    }
}

/// `z − sin(z)` without cancellation for small `z`.
pub(crate) fn id_minus_sin(z: f64) -> f64 {
    if z.abs() < 1.0 {
        let z2 = z * z;
        let mut term = z * z2 / 6.0;
        let mut sum = term;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= -z2 / ((k + 1.0) * (k + 2.0));
            sum += term;
            k += 2.0;
        }
        sum
    } else {
        z - z.sin()
    }
}

/// `F(w) = √w coth √w`, continued analytically to `w ∈ (−π², 0]`.
pub fn eval_f(w: f64) -> Result<f64> {
    check_kernel_domain(w)?;
    if w.abs() < SERIES_THRESHOLD {
        return Ok(horner(&F_SERIES, w));
    }
    if w > 0.0 {
        let y = w.sqrt();
        Ok(y / y.tanh())
    } else {
        // y stays in (0, π), so cos/sin needs no argument reduction.
        let y = (-w).sqrt();
        Ok(y * y.cos() / y.sin())
    }
}

/// `F(w) − 1`, accurate for small `w`.
pub(crate) fn eval_f_minus_one(w: f64) -> Result<f64> {
    check_kernel_domain(w)?;
    if w.abs() < 0.05 {
        const TAIL: [f64; 7] = [
            1.0 / 3.0,
            -1.0 / 45.0,
            2.0 / 945.0,
            -1.0 / 4725.0,
            2.0 / 93555.0,
            -1382.0 / 638512875.0,
            4.0 / 18243225.0,
        ];
        return Ok(w * horner(&TAIL, w));
    }
    Ok(eval_f(w)? - 1.0)
}

/// `F'(w)`: `(sinh 2y − 2y)/(4y sinh² y)` with `y = √w` for `w > 0`,
/// `(2y − sin 2y)/(4y sin² y)` with `y = √−w` for `w < 0`, and `1/3` at 0.
pub fn eval_f_prime(w: f64) -> Result<f64> {
    check_kernel_domain(w)?;
    if w.abs() < SERIES_THRESHOLD {
        return Ok(horner(&F_PRIME_SERIES, w));
    }
    if w > 0.0 {
        let y = w.sqrt();
        if y > 20.0 {
            // sinh² overflows long before coth − y csch² loses accuracy here.
            let sh = y.sinh();
            Ok((1.0 / y.tanh() - y / (sh * sh)) / (2.0 * y))
        } else {
            let sh = y.sinh();
            Ok(sinh_minus_id(2.0 * y) / (4.0 * y * sh * sh))
        }
    } else {
        let y = (-w).sqrt();
        let s = y.sin();
        Ok(id_minus_sin(2.0 * y) / (4.0 * y * s * s))
    }
}

/// `F''(w)`, from the Riccati identity `2wF' = w + F − F²`.
pub(crate) fn eval_f_second(w: f64) -> Result<f64> {
    check_kernel_domain(w)?;
    if w.abs() < 0.05 {
        return Ok(horner(&F_SECOND_SERIES, w));
    }
    let f = eval_f(w)?;
    let fp = eval_f_prime(w)?;
    Ok((1.0 - fp * (1.0 + 2.0 * f)) / (2.0 * w))
}

/// `S(w) = sinh(√w)/√w`, `sin(√−w)/√−w` for negative `w`, `S(0) = 1`.
/// The prefactor of the reverse local log-Sobolev inequality is `t·S(w)`.
pub fn eval_s(w: f64) -> f64 {
    if w.abs() < SERIES_THRESHOLD {
        return horner(&S_SERIES, w);
    }
    if w > 0.0 {
        let y = w.sqrt();
        y.sinh() / y
    } else {
        let y = (-w).sqrt();
        y.sin() / y
    }
}

/// `1 + π²/(ρ²t²)`, or `+∞` when ρ = 0.
pub fn domain_limit(rho: f64, t: f64) -> f64 {
    if rho == 0.0 {
        return f64::INFINITY;
    }
    let rt = rho * t;
    1.0 + PI2 / (rt * rt)
}

fn check_phi_args(rho: f64, t: f64, x: f64) -> Result<f64> {
    check_finite("rho", rho)?;
    check_time("t", t)?;
    check_finite("x", x)?;
    if rho == 0.0 {
        return Err(Error::ZeroCurvature);
    }
    let w = KernelArgument::new(rho, t, x).value();
    if w <= -PI2 {
        return Err(Error::Domain { x, limit: domain_limit(rho, t) });
    }
    Ok(w)
}

/// `Φ_t(x) = (ρ/2)(x − 2) + F(ρ²t²(1 − x))/t`.
pub fn eval_phi(rho: f64, t: f64, x: f64) -> Result<f64> {
    let w = check_phi_args(rho, t, x)?;
    Ok(0.5 * rho * (x - 2.0) + eval_f(w)? / t)
}

/// `Φ_t/ρ` for `x = 1 − y² ≤ 1` and ρ > 0, written without cancellation:
/// `y·(coth(ρty) − 1) − (1 − y)²/2` with `coth a − 1 = 2/expm1(2a)`.
pub(crate) fn phi_over_rho_sqrt_form(rho: f64, t: f64, y: f64, one_minus_y: f64) -> f64 {
    let a = rho * t;
    let z = 2.0 * a * y;
    let head = if z == 0.0 { 1.0 / a } else { 2.0 * y / z.exp_m1() };
    head - 0.5 * one_minus_y * one_minus_y
}

/// Φ_t through [`phi_over_rho_sqrt_form`] when ρ > 0 and `2ρt√(1 − x) ≥ 1`,
/// which keeps full relative accuracy near the roots. The region matches
/// [`eval_phi_prime_accurate`] so that the two stay consistent.
pub(crate) fn eval_phi_accurate(rho: f64, t: f64, x: f64) -> Result<f64> {
    if rho > 0.0 && x <= 1.0 {
        check_phi_args(rho, t, x)?;
        let y = (1.0 - x).sqrt();
        if 2.0 * rho * t * y >= 1.0 {
            return Ok(rho * phi_over_rho_sqrt_form(rho, t, y, x / (1.0 + y)));
        }
    }
    eval_phi(rho, t, x)
}

/// Φ_t' differentiated in `y = √(1 − x)` when ρ > 0 and `2ρty ≥ 1`:
/// `d(Φ/ρ)/dy = 2/E − 4ρty(E + 1)/E² + (1 − y)` with `E = expm1(2ρty)`.
pub(crate) fn eval_phi_prime_accurate(rho: f64, t: f64, x: f64) -> Result<f64> {
    if rho > 0.0 && x <= 1.0 {
        check_phi_args(rho, t, x)?;
        let y = (1.0 - x).sqrt();
        let a = rho * t;
        let z = 2.0 * a * y;
        if z >= 1.0 {
            let e = z.exp_m1();
            let one_minus_y = x / (1.0 + y);
            let d = 2.0 / e - 2.0 * z * ((e + 1.0) / e) / e + one_minus_y;
            return Ok(rho * d / (-2.0 * y));
        }
    }
    eval_phi_prime(rho, t, x)
}

/// `Φ_t'(x) = ρ/2 − ρ²t F'(w)`.
pub fn eval_phi_prime(rho: f64, t: f64, x: f64) -> Result<f64> {
    let w = check_phi_args(rho, t, x)?;
    Ok(0.5 * rho - rho * rho * t * eval_f_prime(w)?)
}

/// `Φ_t''(x) = ρ⁴t³ F''(w)`.
pub(crate) fn eval_phi_second(rho: f64, t: f64, x: f64) -> Result<f64> {
    let w = check_phi_args(rho, t, x)?;
    let r2 = rho * rho;
    Ok(r2 * r2 * t * t * t * eval_f_second(w)?)
}

/// `Φ̃_t(x) = Φ_t(x) − ρx + 2ρ`.
pub fn eval_phi_tilde(rho: f64, t: f64, x: f64) -> Result<f64> {
    Ok(eval_phi(rho, t, x)? - rho * x + 2.0 * rho)
}

/// Large-time limit `Φ_∞(x) = (ρ/2)(x − 2 + 2√(1 − x))` for ρ < 0 and `x ≤ 1`.
pub fn eval_phi_limit(rho: f64, x: f64) -> Result<f64> {
    check_finite("rho", rho)?;
    check_finite("x", x)?;
    if rho >= 0.0 {
        return Err(Error::Hypothesis("the large-time limit curve is defined for rho < 0".into()));
    }
    if x > 1.0 {
        return Err(Error::InvalidParameter(format!("the large-time limit curve needs x <= 1, got {x}")));
    }
    Ok(0.5 * rho * (x - 2.0 + 2.0 * (1.0 - x).sqrt()))
}

/// Right-hand side of the improved Li-Yau inequality, `(n/2)Φ_t(x)`.
pub fn liyau_rhs(cd: &CurvatureDimension, t: f64, x: f64) -> Result<f64> {
    Ok(0.5 * cd.n() * eval_phi(cd.rho(), t, x)?)
}
