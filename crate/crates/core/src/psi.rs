//! The convex companion Ψ_{t,ρ}(x) = −√((n/2)Φ_t(4x/(nρ))), its
//! Legendre–Fenchel transform and the Harnack exponent built from it.

use crate::error::{check_finite, check_time, Error, Result};
use crate::kernel::{eval_phi_accurate, eval_phi_prime_accurate, eval_phi_second, CurvatureDimension};
use crate::numeric::{adaptive_simpson, SimpsonOptions};
use crate::roots::find_roots;

/// Interval on which Ψ_{t,ρ} is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiDomain {
    pub lo: f64,
    /// `+∞` for ρ ≤ 0.
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl PsiDomain {
    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    pub fn contains_interior(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }
}

/// Value and maximizer of `Ψ*(z) = sup_y {zy − Ψ(y)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreResult {
    pub value: f64,
    pub argmax: f64,
}

/// Ψ_{t,ρ} for fixed `(cd, t)` with the roots of Φ_t cached.
#[derive(Debug, Clone, Copy)]
pub struct PsiFunction {
    cd: CurvatureDimension,
    t: f64,
    domain: PsiDomain,
}

const INVERSE_MAX_ITER: usize = 400;

impl PsiFunction {
    pub fn new(cd: &CurvatureDimension, t: f64) -> Result<Self> {
        check_time("t", t)?;
        let rho = cd.rho();
        let n = cd.n();
        let domain = if rho == 0.0 {
            PsiDomain { lo: -n / (2.0 * t), hi: f64::INFINITY, lo_open: false, hi_open: true }
        } else {
            let roots = find_roots(rho, t)?;
            let scale = 0.25 * n * rho;
            if rho > 0.0 {
                PsiDomain {
                    lo: scale * roots.xi1.expect("rho > 0").value,
                    hi: scale * roots.xi2.expect("rho > 0").value,
                    lo_open: false,
                    hi_open: false,
                }
            } else {
                PsiDomain {
                    lo: scale * roots.xi.expect("rho < 0").value,
                    hi: f64::INFINITY,
                    lo_open: false,
                    hi_open: true,
                }
            }
        };
        Ok(Self { cd: *cd, t, domain })
    }

    pub fn domain(&self) -> PsiDomain {
        self.domain
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    fn check(&self, x: f64) -> Result<()> {
        check_finite("x", x)?;
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "x = {x} lies outside the domain [{}, {}] of Psi",
                self.domain.lo, self.domain.hi
            )))
        }
    }

    fn check_interior(&self, x: f64) -> Result<()> {
        check_finite("x", x)?;
        if self.domain.contains_interior(x) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "x = {x} is not interior to the domain [{}, {}] of Psi",
                self.domain.lo, self.domain.hi
            )))
        }
    }

    fn phi_arg(&self, x: f64) -> f64 {
        4.0 * x / (self.cd.n() * self.cd.rho())
    }

    /// `Ψ(x) ≤ 0`; vanishes at the finite endpoints when ρ ≠ 0.
    pub fn value(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let n = self.cd.n();
        if self.cd.rho() == 0.0 {
            return Ok(-(n / (2.0 * self.t) + x).max(0.0).sqrt());
        }
        // The finite endpoints are the roots of Φ by definition.
        if x == self.domain.lo || x == self.domain.hi {
            return Ok(0.0);
        }
        let phi = eval_phi_accurate(self.cd.rho(), self.t, self.phi_arg(x))?;
        Ok(-(0.5 * n * phi).max(0.0).sqrt())
    }

    /// `Ψ'(x) = Φ_t'(X)/(ρΨ(x))`, increasing on the interior.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_interior(x)?;
        let rho = self.cd.rho();
        if rho == 0.0 {
            return Ok(-0.5 / (self.cd.n() / (2.0 * self.t) + x).sqrt());
        }
        let psi = self.value(x)?;
        if psi == 0.0 {
            return Err(Error::NonFinite("derivative of Psi at a root of Phi"));
        }
        Ok(eval_phi_prime_accurate(rho, self.t, self.phi_arg(x))? / (rho * psi))
    }

    /// `Ψ''(x) = (4Φ_t''(X)/(nρ²) − Ψ'(x)²)/Ψ(x)`, positive on the interior.
    pub fn second_derivative(&self, x: f64) -> Result<f64> {
        self.check_interior(x)?;
        let rho = self.cd.rho();
        let n = self.cd.n();
        if rho == 0.0 {
            let q = n / (2.0 * self.t) + x;
            return Ok(0.25 / (q * q.sqrt()));
        }
        let psi = self.value(x)?;
        if psi == 0.0 {
            return Err(Error::NonFinite("second derivative of Psi at a root of Phi"));
        }
        let dpsi = self.derivative(x)?;
        let phi2 = eval_phi_second(rho, self.t, self.phi_arg(x))?;
        Ok((4.0 * phi2 / (n * rho * rho) - dpsi * dpsi) / psi)
    }

    fn check_legendre_arg(&self, z: f64) -> Result<()> {
        check_finite("z", z)?;
        if self.cd.rho() <= 0.0 && z >= 0.0 {
            return Err(Error::Range {
                z,
                reason: "for rho <= 0 the derivative of Psi maps onto (-inf, 0); the Harnack inequality only runs forward in time",
            });
        }
        Ok(())
    }

    /// Solves `Ψ'(y) = z` by safeguarded Newton iteration.
    ///
    /// Near an endpoint where Ψ' diverges the bracket is first located by
    /// halving the distance to that endpoint, so arbitrarily large `|z|`
    /// resolves in logarithmically many steps.
    pub fn derivative_inverse(&self, z: f64) -> Result<f64> {
        self.check_legendre_arg(z)?;
        let n = self.cd.n();
        if self.cd.rho() == 0.0 {
            return Ok(0.25 / (z * z) - n / (2.0 * self.t));
        }
        let g = |y: f64| self.derivative(y).map(|d| d - z);
        let PsiDomain { lo, hi, .. } = self.domain;

        // Left end of the bracket: g < 0.
        let width = if hi.is_finite() { hi - lo } else { lo.abs().max(1.0) };
        let mut a = f64::NAN;
        let mut delta = 0.5 * width;
        for _ in 0..1100 {
            let y = lo + delta;
            if y <= lo {
                return Ok(lo);
            }
            if g(y)? < 0.0 {
                a = y;
                break;
            }
            delta *= 0.5;
        }
        // Right end: g > 0.
        let mut b = f64::NAN;
        if hi.is_finite() {
            let mut delta = 0.5 * width;
            for _ in 0..1100 {
                let y = hi - delta;
                if y >= hi {
                    return Ok(hi);
                }
                if g(y)? > 0.0 {
                    b = y;
                    break;
                }
                delta *= 0.5;
            }
        } else {
            let mut span = width;
            for _ in 0..2000 {
                let y = lo + span;
                if g(y)? > 0.0 {
                    b = y;
                    break;
                }
                span *= 2.0;
            }
        }
        if a.is_nan() || b.is_nan() {
            return Err(Error::NoConvergence("bracketing the inverse of the derivative of Psi"));
        }
        if a > b {
            // Only possible for z at the crossing of the two probes; the
            // probes themselves then bracket the solution.
            std::mem::swap(&mut a, &mut b);
        }

        let tol = 1e-13 * (1.0 + z.abs());
        let mut y = 0.5 * (a + b);
        let mut last_residual = f64::INFINITY;
        for _ in 0..INVERSE_MAX_ITER {
            let r = g(y)?;
            if r.abs() <= tol {
                return Ok(y);
            }
            if r < 0.0 {
                a = y;
            } else {
                b = y;
            }
            let mid = a + 0.5 * (b - a);
            if mid <= a || mid >= b {
                return Ok(y);
            }
            let newton = if r.abs() < 0.5 * last_residual {
                self.second_derivative(y).map(|d2| y - r / d2).unwrap_or(f64::NAN)
            } else {
                f64::NAN
            };
            last_residual = r.abs();
            y = if newton > a && newton < b { newton } else { mid };
        }
        Err(Error::NoConvergence("inverse of the derivative of Psi"))
    }

    /// `Ψ*(z) = z·y* − Ψ(y*)` with `Ψ'(y*) = z`. For ρ = 0 the closed form
    /// `−nz/(2t) − 1/(4z)` is used.
    pub fn legendre(&self, z: f64) -> Result<LegendreResult> {
        self.check_legendre_arg(z)?;
        let n = self.cd.n();
        if self.cd.rho() == 0.0 {
            return Ok(LegendreResult {
                value: -n * z / (2.0 * self.t) - 0.25 / z,
                argmax: 0.25 / (z * z) - n / (2.0 * self.t),
            });
        }
        let y = self.derivative_inverse(z)?;
        Ok(LegendreResult { value: z * y - self.value(y)?, argmax: y })
    }
}

pub fn psi_domain(cd: &CurvatureDimension, t: f64) -> Result<PsiDomain> {
    Ok(PsiFunction::new(cd, t)?.domain())
}

pub fn psi(cd: &CurvatureDimension, t: f64, x: f64) -> Result<f64> {
    PsiFunction::new(cd, t)?.value(x)
}

pub fn psi_prime(cd: &CurvatureDimension, t: f64, x: f64) -> Result<f64> {
    PsiFunction::new(cd, t)?.derivative(x)
}

pub fn psi_prime_inverse(cd: &CurvatureDimension, t: f64, z: f64) -> Result<f64> {
    PsiFunction::new(cd, t)?.derivative_inverse(z)
}

pub fn legendre(cd: &CurvatureDimension, t: f64, z: f64) -> Result<LegendreResult> {
    PsiFunction::new(cd, t)?.legendre(z)
}

/// Two space-time points: `P_s f(x) ≤ P_t f(y)·exp(E)` with `d = d(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnackQuery {
    pub s: f64,
    pub t: f64,
    pub d: f64,
}

impl HarnackQuery {
    pub fn new(s: f64, t: f64, d: f64) -> Result<Self> {
        check_time("s", s)?;
        check_time("t", t)?;
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::InvalidParameter(format!("distance must be finite and >= 0, got {d}")));
        }
        Ok(Self { s, t, d })
    }
}

/// Left (`left = true`) or right endpoint of the Ψ_u domain.
fn domain_endpoint(cd: &CurvatureDimension, u: f64, left: bool) -> Result<f64> {
    let dom = psi_domain(cd, u)?;
    Ok(if left { dom.lo } else { dom.hi })
}

/// `E = (d/(t−s))·∫_s^t Ψ*_{u,ρ}(−(t−s)/d) du`.
///
/// `s = t` gives `d·Ψ*_s(0)`, which is finite only for ρ > 0. `d = 0` gives
/// the exact limit `−∫_s^t e_u du`, where `e_u` is the left domain endpoint
/// of Ψ_u when `s < t` and the right one when `s > t`.
pub fn harnack_exponent(cd: &CurvatureDimension, q: &HarnackQuery) -> Result<f64> {
    let HarnackQuery { s, t, d } = *q;
    let rho = cd.rho();
    if rho <= 0.0 && s > t {
        return Err(Error::Range {
            z: if d > 0.0 { (s - t) / d } else { f64::INFINITY },
            reason: "for rho <= 0 the Harnack inequality needs s < t",
        });
    }
    if s == t {
        if d == 0.0 {
            return Ok(0.0);
        }
        if rho <= 0.0 {
            return Err(Error::Range { z: 0.0, reason: "Psi* is infinite at 0 when rho <= 0" });
        }
        return Ok(d * legendre(cd, s, 0.0)?.value);
    }
    let opts = SimpsonOptions::default();
    if d == 0.0 {
        if rho == 0.0 {
            return Ok(0.5 * cd.n() * (t / s).ln());
        }
        let left = s < t;
        let integral = adaptive_simpson(|u| domain_endpoint(cd, u, left), s, t, opts)?.value;
        return Ok(-integral);
    }
    let z = -(t - s) / d;
    let integral = adaptive_simpson(|u| PsiFunction::new(cd, u)?.legendre(z).map(|l| l.value), s, t, opts)?;
    Ok(d / (t - s) * integral.value)
}

/// `exp(E)`, the bound on `p_s(z, x)/p_t(z, y)` for the heat kernel.
pub fn heat_kernel_ratio_bound(cd: &CurvatureDimension, q: &HarnackQuery) -> Result<f64> {
    Ok(harnack_exponent(cd, q)?.exp())
}
