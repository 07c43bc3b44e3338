//! Radial heat equation on the model spaces, used as an oracle for the
//! inequalities of the crate.
//!
//! Rotationally symmetric solutions on Euclidean space, the round sphere
//! and hyperbolic space reduce to `∂_t u = u'' + c(r)u'`, discretized here
//! by a vertex-centred finite-volume scheme with exact cell volumes, so
//! that the weighted mass `Σ V_i u_i` is conserved to rounding. Time
//! stepping is Crank–Nicolson.

mod checks;
mod scenario;

pub use checks::{
    check_gradient_decay, check_harnack, check_liyau, check_local_logsob, check_ultracontractive,
    compute_ratios, compute_x_g, RatioField, SemigroupTriple,
};
pub use scenario::{
    evolve_scenario, run_scenario, run_scenario_at, CalibratedReport, CheckKind, Scenario, ROUNDING_FLOOR,
};

use crate::error::{check_time, Error, Result};
use crate::kernel::{eval_f_minus_one, eval_s, CurvatureDimension};
use crate::numeric::solve_tridiagonal;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Euclidean,
    Sphere,
    Hyperbolic,
}

impl FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "euclidean" | "flat" => Ok(SpaceKind::Euclidean),
            "sphere" => Ok(SpaceKind::Sphere),
            "hyperbolic" => Ok(SpaceKind::Hyperbolic),
            other => Err(Error::Config(format!("unknown space '{other}'"))),
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Euclidean => "euclidean",
            SpaceKind::Sphere => "sphere",
            SpaceKind::Hyperbolic => "hyperbolic",
        })
    }
}

/// A constant-curvature model manifold of dimension `n` with sectional
/// curvature `κ²` (sphere), `−κ²` (hyperbolic) or 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpace {
    kind: SpaceKind,
    n: usize,
    kappa: f64,
}

impl ModelSpace {
    pub fn new(kind: SpaceKind, n: usize, kappa: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter(format!("curvature scale must be positive, got {kappa}")));
        }
        Ok(Self { kind, n, kappa })
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(SpaceKind::Euclidean, n, 1.0)
    }

    pub fn sphere(n: usize, kappa: f64) -> Result<Self> {
        Self::new(SpaceKind::Sphere, n, kappa)
    }

    pub fn hyperbolic(n: usize, kappa: f64) -> Result<Self> {
        Self::new(SpaceKind::Hyperbolic, n, kappa)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Ricci lower bound: `(n−1)κ²`, `−(n−1)κ²` or 0.
    pub fn rho(&self) -> f64 {
        let k2 = (self.n as f64 - 1.0) * self.kappa * self.kappa;
        match self.kind {
            SpaceKind::Euclidean => 0.0,
            SpaceKind::Sphere => k2,
            SpaceKind::Hyperbolic => -k2,
        }
    }

    pub fn curvature_dimension(&self) -> CurvatureDimension {
        CurvatureDimension::new(self.rho(), self.n as f64).expect("n >= 1")
    }

    /// Radial volume density `ω(r)`: `r^{n−1}`, `(sin κr/κ)^{n−1}` or `(sinh κr/κ)^{n−1}`.
    pub fn density(&self, r: f64) -> f64 {
        let k = self.kappa;
        let base = match self.kind {
            SpaceKind::Euclidean => r,
            SpaceKind::Sphere => (k * r).sin().max(0.0) / k,
            SpaceKind::Hyperbolic => (k * r).sinh() / k,
        };
        base.powi(self.n as i32 - 1)
    }

    /// Default truncation radius: the antipode `π/κ` on the sphere, 20 otherwise.
    pub fn default_radius(&self) -> f64 {
        match self.kind {
            SpaceKind::Sphere => PI / self.kappa,
            _ => 20.0,
        }
    }

    /// Geodesic distance between two points on a common radial geodesic.
    pub fn radial_distance(&self, r1: f64, r2: f64) -> f64 {
        (r1 - r2).abs()
    }
}

/// Drift `c(r)` of the radial generator `∂_rr + c(r)∂_r`.
pub fn radial_drift(space: &ModelSpace, r: f64) -> f64 {
    let m = space.n as f64 - 1.0;
    let k = space.kappa;
    match space.kind {
        SpaceKind::Euclidean => m / r,
        SpaceKind::Sphere => m * k * (k * r).cos() / (k * r).sin(),
        SpaceKind::Hyperbolic => m * k / (k * r).tanh(),
    }
}

pub const MIN_CELLS: usize = 100;

/// Nodes `r_i = i·h`, `i = 0..=N`, on `[0, R]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    cells: usize,
    h: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, cells: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidParameter(format!("radius must be positive, got {r_max}")));
        }
        if cells < MIN_CELLS {
            return Err(Error::InvalidParameter(format!("need at least {MIN_CELLS} cells, got {cells}")));
        }
        Ok(Self { r_max, cells, h: r_max / cells as f64 })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.cells + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.cells {
            self.r_max
        } else {
            i as f64 * self.h
        }
    }

    pub fn nearest_node(&self, r: f64) -> usize {
        ((r / self.h).round().max(0.0) as usize).min(self.cells)
    }
}

/// Values at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn from_fn(grid: &RadialGrid, f: impl Fn(f64) -> f64) -> Self {
        Self { values: (0..grid.len()).map(|i| f(grid.node(i))).collect() }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
    }

    fn check_finite(&self) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("heat solver state"))
        }
    }
}

/// Five-point Gauss–Legendre rule on `[−1, 1]`.
const GL_NODES: [f64; 5] = [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn integrate_density(space: &ModelSpace, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    half * GL_NODES.iter().zip(GL_WEIGHTS.iter()).map(|(x, w)| w * space.density(mid + half * x)).sum::<f64>()
}

/// Startup half-steps of backward Euler before Crank–Nicolson, which damp
/// the grid-scale modes that Crank–Nicolson alone leaves undamped.
const SMOOTHING_HALF_STEPS: usize = 4;

/// Finite-volume discretization of the radial generator with zero-flux
/// ends at `r = 0` and `r = R`.
#[derive(Debug, Clone)]
pub struct HeatSolver {
    space: ModelSpace,
    grid: RadialGrid,
    volumes: Vec<f64>,
    /// `L_{i,i−1}` and `L_{i,i+1}`.
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl HeatSolver {
    pub fn new(space: ModelSpace, grid: RadialGrid) -> Result<Self> {
        if space.kind == SpaceKind::Sphere && grid.r_max > PI / space.kappa * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter("sphere grids must stop at the antipode pi/kappa".into()));
        }
        let n = grid.cells;
        let h = grid.h;
        let volumes: Vec<f64> = (0..=n)
            .map(|i| {
                let a = (grid.node(i) - 0.5 * h).max(0.0);
                let b = (grid.node(i) + 0.5 * h).min(grid.r_max);
                integrate_density(&space, a, b)
            })
            .collect();
        if volumes.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::NonFinite("cell volumes"));
        }
        let faces: Vec<f64> = (0..n).map(|i| space.density(grid.node(i) + 0.5 * h)).collect();
        let mut lower = vec![0.0; n + 1];
        let mut upper = vec![0.0; n + 1];
        for i in 0..=n {
            if i > 0 {
                lower[i] = faces[i - 1] / (h * volumes[i]);
            }
            if i < n {
                upper[i] = faces[i] / (h * volumes[i]);
            }
        }
        Ok(Self { space, grid, volumes, lower, upper })
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    /// The discrete generator applied at every node.
    pub fn apply_generator(&self, u: &[f64]) -> Vec<f64> {
        let n = self.grid.cells;
        (0..=n)
            .map(|i| {
                let mut v = 0.0;
                if i > 0 {
                    v += self.lower[i] * (u[i - 1] - u[i]);
                }
                if i < n {
                    v += self.upper[i] * (u[i + 1] - u[i]);
                }
                v
            })
            .collect()
    }

    /// `Σ V_i u_i`.
    pub fn mass(&self, u: &GridFunction) -> f64 {
        self.volumes.iter().zip(&u.values).map(|(v, x)| v * x).sum()
    }

    /// Volume-weighted mean, the discrete `∫ u dμ` for the normalized measure.
    pub fn mean(&self, u: &GridFunction) -> f64 {
        self.mass(u) / self.volumes.iter().sum::<f64>()
    }

    /// One θ-scheme step: `(I − θ dt L)u⁺ = (I + (1−θ) dt L)u`.
    fn step(&self, u: &[f64], dt: f64, theta: f64) -> Vec<f64> {
        let n = self.grid.cells;
        let explicit = 1.0 - theta;
        let rhs: Vec<f64> = if explicit > 0.0 {
            let lu = self.apply_generator(u);
            u.iter().zip(&lu).map(|(a, b)| a + explicit * dt * b).collect()
        } else {
            u.to_vec()
        };
        let c = theta * dt;
        let lower: Vec<f64> = self.lower.iter().map(|l| -c * l).collect();
        let upper: Vec<f64> = self.upper.iter().map(|l| -c * l).collect();
        let diag: Vec<f64> = (0..=n).map(|i| 1.0 + c * (self.lower[i] + self.upper[i])).collect();
        solve_tridiagonal(&lower, &diag, &upper, &rhs)
    }

    /// Largest step length used by [`HeatSolver::evolve_times`]: `h/2`.
    pub fn default_step(&self) -> f64 {
        0.5 * self.grid.h
    }

    /// Advances `u` by `duration` with steps no longer than `max_dt`, the
    /// count rounded up so that the final time is hit exactly.
    pub fn advance(&self, u: &GridFunction, duration: f64, max_dt: f64, smooth_start: bool) -> Result<GridFunction> {
        if duration == 0.0 {
            return Ok(u.clone());
        }
        check_time("duration", duration)?;
        if !(max_dt > 0.0 && max_dt <= self.grid.h) {
            return Err(Error::InvalidParameter(format!("time step must lie in (0, h], got {max_dt}")));
        }
        let steps = (duration / max_dt).ceil().max(1.0) as usize;
        let dt = duration / steps as f64;
        let mut v = u.values.clone();
        let mut start = 0;
        if smooth_start {
            let smoothing = steps.min(SMOOTHING_HALF_STEPS / 2);
            for _ in 0..2 * smoothing {
                v = self.step(&v, 0.5 * dt, 1.0);
            }
            start = smoothing;
        }
        for _ in start..steps {
            v = self.step(&v, dt, 0.5);
        }
        let out = GridFunction { values: v };
        out.check_finite()?;
        Ok(out)
    }

    /// States at each of the increasing `times`, starting from `u0` at time 0.
    pub fn evolve_times(&self, u0: &GridFunction, times: &[f64]) -> Result<Vec<GridFunction>> {
        let mut out = Vec::with_capacity(times.len());
        let mut current = u0.clone();
        let mut now = 0.0;
        for (k, &t) in times.iter().enumerate() {
            check_time("t", t)?;
            if t < now {
                return Err(Error::InvalidParameter("times must be increasing".into()));
            }
            current = self.advance(&current, t - now, self.default_step(), k == 0)?;
            now = t;
            out.push(current.clone());
        }
        Ok(out)
    }
}

/// Evolves `f0` to time `t` with steps of at most `dt ≤ h`.
pub fn evolve(space: &ModelSpace, grid: &RadialGrid, f0: &GridFunction, t: f64, dt: f64) -> Result<GridFunction> {
    let solver = HeatSolver::new(*space, *grid)?;
    if f0.values.len() != grid.len() {
        return Err(Error::InvalidParameter("initial data does not match the grid".into()));
    }
    solver.advance(f0, t, dt, true)
}

/// Radial initial data with closed-form values and derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData {
    Constant(f64),
    /// `a + b·cos(κr)`, with `a > |b|`.
    Cosine { a: f64, b: f64 },
    /// `exp(c·cos(κr))`.
    ExpCos { c: f64 },
    /// Heat kernel of the space at time `t0`, plus a floor `eps > 0`.
    /// Available on Euclidean space and on three-dimensional hyperbolic space.
    Kernel { t0: f64, eps: f64 },
}

impl InitialData {
    pub fn validate(&self, space: &ModelSpace) -> Result<()> {
        match *self {
            InitialData::Constant(c) if !(c > 0.0 && c.is_finite()) => {
                Err(Error::InvalidParameter("constant initial data must be positive".into()))
            }
            InitialData::Cosine { a, b } if !(a.is_finite() && b.is_finite() && a > b.abs()) => {
                Err(Error::InvalidParameter("cosine initial data needs a > |b|".into()))
            }
            InitialData::ExpCos { c } if !c.is_finite() => {
                Err(Error::InvalidParameter("expcos parameter must be finite".into()))
            }
            InitialData::Kernel { t0, eps } => {
                if !(t0 > 0.0 && t0.is_finite() && eps > 0.0 && eps.is_finite()) {
                    return Err(Error::InvalidParameter("kernel initial data needs t0 > 0 and eps > 0".into()));
                }
                match space.kind {
                    SpaceKind::Euclidean => Ok(()),
                    SpaceKind::Hyperbolic if space.n == 3 => Ok(()),
                    _ => Err(Error::InvalidParameter(format!(
                        "no closed-form heat kernel for {} of dimension {}",
                        space.kind, space.n
                    ))),
                }
            }
            _ => Ok(()),
        }
    }

    /// Heat kernel `p_t(r)` on Euclidean space or on H³.
    fn kernel(space: &ModelSpace, t: f64, r: f64) -> f64 {
        let n = space.n as f64;
        match space.kind {
            SpaceKind::Euclidean => (4.0 * PI * t).powf(-0.5 * n) * (-r * r / (4.0 * t)).exp(),
            _ => {
                let k = space.kappa;
                // κr/sinh κr = 1/S(κ²r²)
                (4.0 * PI * t).powf(-1.5) / eval_s(k * k * r * r) * (-k * k * t - r * r / (4.0 * t)).exp()
            }
        }
    }

    /// `d/dr log p_t(r)`.
    fn kernel_log_derivative(space: &ModelSpace, t: f64, r: f64) -> f64 {
        match space.kind {
            SpaceKind::Euclidean => -r / (2.0 * t),
            _ => {
                let k = space.kappa;
                // 1/r − κ coth κr = −(F(κ²r²) − 1)/r
                let geometric = if r == 0.0 {
                    0.0
                } else {
                    -eval_f_minus_one(k * k * r * r).expect("nonnegative argument") / r
                };
                geometric - r / (2.0 * t)
            }
        }
    }

    pub fn value(&self, space: &ModelSpace, r: f64) -> f64 {
        let k = space.kappa;
        match *self {
            InitialData::Constant(c) => c,
            InitialData::Cosine { a, b } => a + b * (k * r).cos(),
            InitialData::ExpCos { c } => (c * (k * r).cos()).exp(),
            InitialData::Kernel { t0, eps } => Self::kernel(space, t0, r) + eps,
        }
    }

    pub fn derivative(&self, space: &ModelSpace, r: f64) -> f64 {
        let k = space.kappa;
        match *self {
            InitialData::Constant(_) => 0.0,
            InitialData::Cosine { b, .. } => -b * k * (k * r).sin(),
            InitialData::ExpCos { c } => -c * k * (k * r).sin() * (c * (k * r).cos()).exp(),
            InitialData::Kernel { t0, .. } => Self::kernel(space, t0, r) * Self::kernel_log_derivative(space, t0, r),
        }
    }

    /// `P_t f(r)` in closed form, where known.
    pub fn exact_solution(&self, space: &ModelSpace, t: f64, r: f64) -> Option<f64> {
        match *self {
            InitialData::Constant(c) => Some(c),
            InitialData::Cosine { a, b } if space.kind == SpaceKind::Sphere => {
                let k = space.kappa;
                Some(a + b * (-(space.n as f64) * k * k * t).exp() * (k * r).cos())
            }
            InitialData::Kernel { t0, eps } => Some(Self::kernel(space, t0 + t, r) + eps),
            _ => None,
        }
    }

    /// `f`, `f log f` and `Γ(f)/f = f'²/f` sampled on the grid.
    pub fn sample_triple(&self, space: &ModelSpace, grid: &RadialGrid) -> SemigroupTriple {
        let f = GridFunction::from_fn(grid, |r| self.value(space, r));
        let f_log_f = GridFunction { values: f.values.iter().map(|v| v * v.ln()).collect() };
        let gamma_over_f = GridFunction::from_fn(grid, |r| {
            let d = self.derivative(space, r);
            d * d / self.value(space, r)
        });
        SemigroupTriple { f, f_log_f, gamma_over_f }
    }
}

impl FromStr for InitialData {
    type Err = Error;

    /// `constant:c`, `cosine:a,b`, `expcos:c` or `kernel:t0,eps`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| a.trim().parse::<f64>().map_err(|e| Error::Config(format!("bad number '{a}' in f0: {e}"))))
                .collect::<Result<_>>()?
        };
        let want = |k: usize| -> Result<()> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::Config(format!("f0 '{s}' expects {k} parameter(s)")))
            }
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "constant" => want(1).map(|_| InitialData::Constant(nums[0])),
            "cosine" => want(2).map(|_| InitialData::Cosine { a: nums[0], b: nums[1] }),
            "expcos" => want(1).map(|_| InitialData::ExpCos { c: nums[0] }),
            "kernel" => want(2).map(|_| InitialData::Kernel { t0: nums[0], eps: nums[1] }),
            other => Err(Error::Config(format!("unknown initial data '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn drift_examples() {
        assert_relative_eq!(radial_drift(&ModelSpace::euclidean(3).unwrap(), 2.0), 1.0);
        assert!(radial_drift(&ModelSpace::sphere(2, 1.0).unwrap(), PI / 2.0).abs() < 1e-15);
        assert_relative_eq!(radial_drift(&ModelSpace::hyperbolic(3, 1.0).unwrap(), 40.0), 2.0);
    }

    #[test]
    fn curvature_of_model_spaces() {
        assert_eq!(ModelSpace::sphere(2, 1.0).unwrap().rho(), 1.0);
        assert_eq!(ModelSpace::hyperbolic(3, 1.0).unwrap().rho(), -2.0);
        assert_eq!(ModelSpace::euclidean(4).unwrap().rho(), 0.0);
        assert_eq!(ModelSpace::sphere(3, 2.0).unwrap().rho(), 8.0);
    }

    #[test]
    fn volumes_sum_to_total_measure() {
        let s = ModelSpace::sphere(3, 1.0).unwrap();
        let solver = HeatSolver::new(s, RadialGrid::new(PI, 400).unwrap()).unwrap();
        // Volume of S³ over the area of S², i.e. ∫_0^π sin² r dr = π/2.
        assert_relative_eq!(solver.volumes().iter().sum::<f64>(), PI / 2.0, max_relative = 1e-13);
        let e = ModelSpace::euclidean(3).unwrap();
        let solver = HeatSolver::new(e, RadialGrid::new(2.0, 200).unwrap()).unwrap();
        assert_relative_eq!(solver.volumes().iter().sum::<f64>(), 8.0 / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn generator_annihilates_constants_and_conserves_mass() {
        let s = ModelSpace::hyperbolic(3, 1.0).unwrap();
        let grid = RadialGrid::new(10.0, 200).unwrap();
        let solver = HeatSolver::new(s, grid).unwrap();
        assert!(solver.apply_generator(&vec![2.5; grid.len()]).iter().all(|v| *v == 0.0));
        let f = GridFunction::from_fn(&grid, |r| 1.0 + (-r * r).exp());
        let m0 = solver.mass(&f);
        let g = solver.advance(&f, 0.7, solver.default_step(), true).unwrap();
        assert_relative_eq!(solver.mass(&g), m0, max_relative = 1e-12);
    }

    #[test]
    fn sphere_cosine_mode_decays_at_rate_n() {
        let s = ModelSpace::sphere(2, 1.0).unwrap();
        let grid = RadialGrid::new(PI, 800).unwrap();
        let solver = HeatSolver::new(s, grid).unwrap();
        let data = InitialData::Cosine { a: 1.0, b: 0.5 };
        let f = GridFunction::from_fn(&grid, |r| data.value(&s, r));
        let u = solver.advance(&f, 1.0, solver.default_step(), true).unwrap();
        for i in (0..grid.len()).step_by(50) {
            let exact = data.exact_solution(&s, 1.0, grid.node(i)).unwrap();
            assert!((u.values[i] - exact).abs() < 1e-5, "node {i}");
        }
    }

    #[test]
    fn kernel_derivative_matches_finite_difference() {
        let s = ModelSpace::hyperbolic(3, 1.0).unwrap();
        let data = InitialData::Kernel { t0: 0.3, eps: 1e-3 };
        for &r in &[1e-3, 0.2, 1.0, 2.5] {
            let h = 1e-6;
            let fd = (data.value(&s, r + h) - data.value(&s, r - h)) / (2.0 * h);
            assert_relative_eq!(data.derivative(&s, r), fd, max_relative = 1e-6);
        }
        assert_eq!(data.derivative(&s, 0.0), 0.0);
    }

    #[test]
    fn parse_initial_data() {
        assert_eq!("cosine:1,0.5".parse::<InitialData>().unwrap(), InitialData::Cosine { a: 1.0, b: 0.5 });
        assert_eq!("kernel:0.05,0.001".parse::<InitialData>().unwrap(), InitialData::Kernel { t0: 0.05, eps: 0.001 });
        assert!("cosine:1".parse::<InitialData>().is_err());
        assert!("bump:1".parse::<InitialData>().is_err());
        let sphere = ModelSpace::sphere(2, 1.0).unwrap();
        assert!(InitialData::Kernel { t0: 0.1, eps: 0.1 }.validate(&sphere).is_err());
        assert!(InitialData::Cosine { a: 0.5, b: 0.5 }.validate(&sphere).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(1.0, 50).is_err());
        let sphere = ModelSpace::sphere(2, 1.0).unwrap();
        assert!(HeatSolver::new(sphere, RadialGrid::new(4.0, 200).unwrap()).is_err());
    }
}
