//! Pointwise checks of the gradient, log-Sobolev, Harnack and
//! ultracontractive inequalities on computed heat-semigroup states.

use super::{GridFunction, HeatSolver};
use crate::error::{Error, Result};
use crate::kernel::{domain_limit, eval_phi, eval_phi_tilde, eval_s, CurvatureDimension, KernelArgument};
use crate::psi::{harnack_exponent, HarnackQuery};
use crate::report::MarginReport;
use crate::roots::{gradient_decay_bound, ultracontractive_envelope};
use std::collections::HashMap;

/// Values below this count as zero when dividing by `P_t f`.
const DIVISION_GUARD: f64 = 1e-300;

/// `LP/P`, `Γ(P)/P²` and, for ρ ≠ 0, `X = (4/nρ)·LP/P` at every node.
/// The two boundary nodes hold NaN and are skipped by the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioField {
    pub laplacian_ratio: Vec<f64>,
    pub gamma_ratio: Vec<f64>,
    pub x: Vec<f64>,
}

impl RatioField {
    pub fn interior(&self) -> std::ops::Range<usize> {
        1..self.laplacian_ratio.len() - 1
    }
}

/// Discrete `LP/P` (the generator of the solver) and `(∂_r P)²/P²` (centred
/// differences) on interior nodes.
pub fn compute_ratios(solver: &HeatSolver, ptf: &GridFunction) -> Result<RatioField> {
    let len = solver.grid().len();
    if ptf.values.len() != len {
        return Err(Error::InvalidParameter("state does not match the grid".into()));
    }
    let u = &ptf.values;
    let lu = solver.apply_generator(u);
    let two_h = 2.0 * solver.grid().h();
    let mut laplacian_ratio = vec![f64::NAN; len];
    let mut gamma_ratio = vec![f64::NAN; len];
    for i in 1..len - 1 {
        if !(u[i] >= DIVISION_GUARD) {
            return Err(Error::NonFinite("P_t f vanishes on an interior node"));
        }
        let grad = (u[i + 1] - u[i - 1]) / two_h;
        laplacian_ratio[i] = lu[i] / u[i];
        gamma_ratio[i] = grad * grad / (u[i] * u[i]);
    }
    Ok(RatioField { laplacian_ratio, gamma_ratio, x: vec![f64::NAN; len] })
}

/// [`compute_ratios`] plus the normalized variable `X`.
pub fn compute_x_g(cd: &CurvatureDimension, solver: &HeatSolver, ptf: &GridFunction) -> Result<RatioField> {
    let mut field = compute_ratios(solver, ptf)?;
    let rho = cd.rho();
    if rho != 0.0 {
        let c = 4.0 / (cd.n() * rho);
        for i in field.interior() {
            field.x[i] = c * field.laplacian_ratio[i];
        }
    }
    Ok(field)
}

/// Gradient bound `Γ(P)/P² ≤ (n/2)Φ_t(X)` (classical `LP/P + n/(2t)` when
/// ρ = 0) and the domain bound `X < 1 + π²/(ρ²t²)`.
///
/// Returns the gradient report and the domain report. For ρ = 0 the domain
/// report is vacuous.
pub fn check_liyau(
    cd: &CurvatureDimension,
    solver: &HeatSolver,
    ptf: &GridFunction,
    t: f64,
    tol: f64,
) -> Result<(MarginReport, MarginReport)> {
    let field = compute_x_g(cd, solver, ptf)?;
    let rho = cd.rho();
    let n = cd.n();
    let limit = domain_limit(rho, t);
    let mut grad = MarginReport::new("liyau", tol);
    let mut dom = MarginReport::new("esti2", tol);
    for i in field.interior() {
        let r = solver.grid().node(i);
        let g = field.gamma_ratio[i];
        if rho == 0.0 {
            let bound = field.laplacian_ratio[i] + 0.5 * n / t;
            grad.observe(bound - g, bound.abs() + g, r, Some(i), t);
            continue;
        }
        let x = field.x[i];
        dom.observe(limit - x, limit.abs() + x.abs(), r, Some(i), t);
        let bound = if x < limit { 0.5 * n * eval_phi(rho, t, x)? } else { f64::NEG_INFINITY };
        grad.observe(bound - g, bound.abs() + g, r, Some(i), t);
    }
    Ok((grad, dom))
}

/// `P_t f`, `P_t(f log f)` and `P_t(Γ(f)/f)` at a common time.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupTriple {
    pub f: GridFunction,
    pub f_log_f: GridFunction,
    pub gamma_over_f: GridFunction,
}

impl SemigroupTriple {
    /// Advances the three components by the same duration.
    pub fn evolve_times(solver: &HeatSolver, start: &SemigroupTriple, times: &[f64]) -> Result<Vec<SemigroupTriple>> {
        let f = solver.evolve_times(&start.f, times)?;
        let fl = solver.evolve_times(&start.f_log_f, times)?;
        let gf = solver.evolve_times(&start.gamma_over_f, times)?;
        Ok(f.into_iter()
            .zip(fl)
            .zip(gf)
            .map(|((f, f_log_f), gamma_over_f)| SemigroupTriple { f, f_log_f, gamma_over_f })
            .collect())
    }
}

/// Reverse and forward local log-Sobolev inequalities at every interior
/// node, margins `rhs − lhs`.
///
/// Reverse: `exp(−(2/n)Ent/P + (tρ/2)X − ρt) ≤ t·S(w)·(Φ_t(X) − (2/n)Γ(P)/P²)`.
/// Forward: `exp((2/n)Ent/P − (tρ/2)X + ρt) ≤ t·S(w)·(Φ̃_t(X) + (2/n)P(Γf/f)/P)`,
/// with `w = ρ²t²(1 − X)`. For ρ = 0, with `v = LP/P`:
/// `exp(−(2/n)Ent/P + (2t/n)v) ≤ 1 + (2t/n)(v − Γ(P)/P²)` and
/// `exp((2/n)Ent/P − (2t/n)v) ≤ 1 + (2t/n)(P(Γf/f)/P − v)`.
pub fn check_local_logsob(
    cd: &CurvatureDimension,
    solver: &HeatSolver,
    state: &SemigroupTriple,
    t: f64,
    tol: f64,
) -> Result<(MarginReport, MarginReport)> {
    let field = compute_x_g(cd, solver, &state.f)?;
    let rho = cd.rho();
    let n = cd.n();
    let limit = domain_limit(rho, t);
    let mut reverse = MarginReport::new("logsob_reverse", tol);
    let mut forward = MarginReport::new("logsob_forward", tol);
    for i in field.interior() {
        let r = solver.grid().node(i);
        let p = state.f.values[i];
        let ent_ratio = (state.f_log_f.values[i] - p * p.ln()) / p;
        let q = state.gamma_over_f.values[i] / p;
        let g = field.gamma_ratio[i];
        let v = field.laplacian_ratio[i];
        let (lhs_rev, rhs_rev, lhs_fwd, rhs_fwd) = if rho == 0.0 {
            let c = 2.0 * t / n;
            (
                (-2.0 / n * ent_ratio + c * v).exp(),
                1.0 + c * (v - g),
                (2.0 / n * ent_ratio - c * v).exp(),
                1.0 + c * (q - v),
            )
        } else {
            let x = field.x[i];
            if !(x < limit) {
                reverse.observe(f64::NEG_INFINITY, f64::INFINITY, r, Some(i), t);
                forward.observe(f64::NEG_INFINITY, f64::INFINITY, r, Some(i), t);
                continue;
            }
            let prefactor = t * eval_s(KernelArgument::new(rho, t, x).value());
            let shift = 0.5 * t * rho * x - rho * t;
            (
                (-2.0 / n * ent_ratio + shift).exp(),
                prefactor * (eval_phi(rho, t, x)? - 2.0 / n * g),
                (2.0 / n * ent_ratio - shift).exp(),
                prefactor * (eval_phi_tilde(rho, t, x)? + 2.0 / n * q),
            )
        };
        reverse.observe(rhs_rev - lhs_rev, rhs_rev.abs() + lhs_rev, r, Some(i), t);
        forward.observe(rhs_fwd - lhs_fwd, rhs_fwd.abs() + lhs_fwd, r, Some(i), t);
    }
    Ok((reverse, forward))
}

/// Harnack inequality `P_s f(x) ≤ P_t f(y)·exp(E(s, t, d(x, y)))` over node
/// pairs `(x, y)` on a common radial geodesic; margin
/// `log P_t f(y) + E − log P_s f(x)`.
#[allow(clippy::too_many_arguments)]
pub fn check_harnack(
    cd: &CurvatureDimension,
    solver: &HeatSolver,
    ps: &GridFunction,
    pt: &GridFunction,
    s: f64,
    t: f64,
    node_pairs: &[(usize, usize)],
    tol: f64,
) -> Result<MarginReport> {
    let grid = solver.grid();
    let mut report = MarginReport::new("harnack", tol);
    let mut cache: HashMap<u64, f64> = HashMap::new();
    for &(ix, iy) in node_pairs {
        if ix >= grid.len() || iy >= grid.len() {
            return Err(Error::InvalidParameter(format!("node pair ({ix}, {iy}) is off the grid")));
        }
        let d = solver.space().radial_distance(grid.node(ix), grid.node(iy));
        let e = match cache.get(&d.to_bits()) {
            Some(&e) => e,
            None => {
                let e = harnack_exponent(cd, &HarnackQuery::new(s, t, d)?)?;
                cache.insert(d.to_bits(), e);
                e
            }
        };
        let lhs = ps.values[ix].ln();
        let rhs = pt.values[iy].ln() + e;
        report.observe(rhs - lhs, rhs.abs() + lhs.abs(), d, Some(ix), t);
    }
    Ok(report)
}

/// `P_t f / ∫f dμ` inside the ultracontractive envelope at every node.
pub fn check_ultracontractive(
    cd: &CurvatureDimension,
    solver: &HeatSolver,
    f0: &GridFunction,
    times: &[f64],
    tol: f64,
) -> Result<MarginReport> {
    let mean = solver.mean(f0);
    let states = solver.evolve_times(f0, times)?;
    let mut report = MarginReport::new("ultracontractive", tol);
    for (&t, u) in times.iter().zip(&states) {
        let env = ultracontractive_envelope(cd, t)?;
        for (i, &v) in u.values.iter().enumerate() {
            let ratio = v / mean;
            let margin = (ratio - env.lower).min(env.upper - ratio);
            report.observe(margin, ratio.abs(), solver.grid().node(i), Some(i), t);
        }
    }
    Ok(report)
}

/// `Γ(log P_t f) ≤ (3nρ/2)e²e^{−2ρt}` on interior nodes, for `t ≥ 6/ρ`.
pub fn check_gradient_decay(
    cd: &CurvatureDimension,
    solver: &HeatSolver,
    ptf: &GridFunction,
    t: f64,
    tol: f64,
) -> Result<MarginReport> {
    let bound = gradient_decay_bound(cd, t)?;
    let field = compute_ratios(solver, ptf)?;
    let mut report = MarginReport::new("gradient_decay", tol);
    for i in field.interior() {
        let g = field.gamma_ratio[i];
        report.observe(bound - g, bound + g, solver.grid().node(i), Some(i), t);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::{InitialData, ModelSpace, RadialGrid};
    use super::*;

    fn sphere_solver(cells: usize) -> (ModelSpace, HeatSolver) {
        let s = ModelSpace::sphere(2, 1.0).unwrap();
        let grid = RadialGrid::new(std::f64::consts::PI, cells).unwrap();
        (s, HeatSolver::new(s, grid).unwrap())
    }

    #[test]
    fn constant_state_has_zero_ratios() {
        let (s, solver) = sphere_solver(200);
        let f = GridFunction::from_fn(solver.grid(), |_| 3.0);
        let field = compute_x_g(&s.curvature_dimension(), &solver, &f).unwrap();
        for i in field.interior() {
            assert_eq!(field.x[i], 0.0);
            assert_eq!(field.gamma_ratio[i], 0.0);
        }
    }

    #[test]
    fn constant_data_is_an_equality_case_of_logsob() {
        let (s, solver) = sphere_solver(200);
        let cd = s.curvature_dimension();
        let data = InitialData::Constant(2.0);
        let start = data.sample_triple(&s, solver.grid());
        let states = SemigroupTriple::evolve_times(&solver, &start, &[0.5]).unwrap();
        let (rev, fwd) = check_local_logsob(&cd, &solver, &states[0], 0.5, 1e-12).unwrap();
        assert!(rev.min_margin.abs() < 1e-12, "{}", rev.min_margin);
        assert!(fwd.min_margin.abs() < 1e-12, "{}", fwd.min_margin);
    }

    #[test]
    fn equal_time_equal_point_harnack_margin_is_zero() {
        let (s, solver) = sphere_solver(200);
        let data = InitialData::Cosine { a: 1.0, b: 0.5 };
        let f = GridFunction::from_fn(solver.grid(), |r| data.value(&s, r));
        let rep = check_harnack(&s.curvature_dimension(), &solver, &f, &f, 1.0, 1.0, &[(10, 10), (50, 50)], 0.0).unwrap();
        assert_eq!(rep.min_margin, 0.0);
    }

    #[test]
    fn smooth_sphere_data_passes_liyau_and_esti2() {
        let (s, solver) = sphere_solver(400);
        let cd = s.curvature_dimension();
        let data = InitialData::Cosine { a: 1.0, b: 0.5 };
        let f = GridFunction::from_fn(solver.grid(), |r| data.value(&s, r));
        let u = solver.evolve_times(&f, &[1.0]).unwrap();
        let (g, d) = check_liyau(&cd, &solver, &u[0], 1.0, 1e-6).unwrap();
        assert!(g.passed && g.min_margin > 0.0, "{g}");
        assert!(d.passed && d.min_margin > 0.0, "{d}");
    }
}
