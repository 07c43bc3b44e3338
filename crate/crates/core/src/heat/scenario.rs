//! Verification scenarios read from `key = value` text, run at three grid
//! resolutions and judged by Richardson extrapolation of each margin.

use super::checks::{
    check_gradient_decay, check_harnack, check_liyau, check_local_logsob, check_ultracontractive, SemigroupTriple,
};
use super::{GridFunction, HeatSolver, InitialData, ModelSpace, RadialGrid, SpaceKind};
use crate::error::{check_time, Error, Result};
use crate::kernel::CurvatureDimension;
use crate::report::MarginReport;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Relative rounding allowance: margins within `1e-10·(1 + scale)` of zero
/// are indistinguishable from zero in double precision after evolution.
pub const ROUNDING_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    LiYau,
    Esti2,
    LogSob,
    Harnack,
    Ultracontractive,
    Gradient,
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "liyau" => Ok(CheckKind::LiYau),
            "esti2" | "domain" => Ok(CheckKind::Esti2),
            "logsob" => Ok(CheckKind::LogSob),
            "harnack" => Ok(CheckKind::Harnack),
            "ultracontractive" => Ok(CheckKind::Ultracontractive),
            "gradient" => Ok(CheckKind::Gradient),
            other => Err(Error::Config(format!("unknown check '{other}'"))),
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::LiYau => "liyau",
            CheckKind::Esti2 => "esti2",
            CheckKind::LogSob => "logsob",
            CheckKind::Harnack => "harnack",
            CheckKind::Ultracontractive => "ultracontractive",
            CheckKind::Gradient => "gradient",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub space: ModelSpace,
    /// Finest cell count; the coarser runs use `N/2` and `N/4`.
    pub cells: usize,
    pub radius: f64,
    pub initial: InitialData,
    pub times: Vec<f64>,
    pub checks: Vec<CheckKind>,
    /// Radii of the Harnack sample points, snapped to the coarsest grid.
    pub harnack_radii: Vec<f64>,
    /// Run the two coarser grids and calibrate tolerances from them.
    pub refine: bool,
    /// CD(ρ, n) parameters the inequalities are checked under; the exact
    /// values of the space when `None`. A claim stronger than the space
    /// satisfies is expected to fail.
    pub claim: Option<CurvatureDimension>,
}

fn parse_list<T: FromStr>(value: &str, key: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| Error::Config(format!("bad entry '{s}' for {key}: {e}"))))
        .collect()
}

fn parse_one<T: FromStr>(value: &str, key: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| Error::Config(format!("bad value '{value}' for {key}: {e}")))
}

impl Scenario {
    /// A scenario with default radius, Harnack radii at `0, R/8, R/4, R/2`
    /// and refinement on.
    pub fn new(space: ModelSpace, cells: usize, initial: InitialData, times: Vec<f64>, checks: Vec<CheckKind>) -> Self {
        let radius = space.default_radius();
        Self {
            space,
            cells,
            radius,
            initial,
            times,
            checks,
            harnack_radii: vec![0.0, radius / 8.0, radius / 4.0, radius / 2.0],
            refine: true,
            claim: None,
        }
    }

    /// The CD(ρ, n) condition the checks assume.
    pub fn curvature_dimension(&self) -> CurvatureDimension {
        self.claim.unwrap_or_else(|| self.space.curvature_dimension())
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_config(&text)
    }

    /// Parses `key = value` lines; `#` starts a comment. Keys: `space`, `n`,
    /// `kappa`, `N`, `R`, `f0`, `times`, `checks`, `harnack_radii`, `refine`,
    /// and optionally `claim_rho` and `claim_n`.
    pub fn from_config(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut n = None;
        let mut kappa = 1.0;
        let mut cells = 2000usize;
        let mut radius = None;
        let mut initial = None;
        let mut times = None;
        let mut checks = None;
        let mut radii = None;
        let mut refine = true;
        let mut claim_rho = None;
        let mut claim_n = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "space" => kind = Some(value.parse::<SpaceKind>()?),
                "n" => n = Some(parse_one::<usize>(value, key)?),
                "kappa" => kappa = parse_one::<f64>(value, key)?,
                "N" => cells = parse_one::<usize>(value, key)?,
                "R" => radius = Some(parse_one::<f64>(value, key)?),
                "f0" => initial = Some(value.parse::<InitialData>()?),
                "times" => times = Some(parse_list::<f64>(value, key)?),
                "checks" => checks = Some(parse_list::<CheckKind>(value, key)?),
                "harnack_radii" => radii = Some(parse_list::<f64>(value, key)?),
                "refine" => refine = parse_one::<bool>(value, key)?,
                "claim_rho" => claim_rho = Some(parse_one::<f64>(value, key)?),
                "claim_n" => claim_n = Some(parse_one::<f64>(value, key)?),
                other => return Err(Error::Config(format!("line {}: unknown key '{other}'", lineno + 1))),
            }
        }
        let missing = |k: &str| Error::Config(format!("missing key '{k}'"));
        let space = ModelSpace::new(kind.ok_or_else(|| missing("space"))?, n.ok_or_else(|| missing("n"))?, kappa)?;
        let mut scenario = Scenario::new(
            space,
            cells,
            initial.ok_or_else(|| missing("f0"))?,
            times.ok_or_else(|| missing("times"))?,
            checks.unwrap_or_else(|| vec![CheckKind::LiYau, CheckKind::Esti2, CheckKind::LogSob, CheckKind::Harnack]),
        );
        if let Some(r) = radius {
            scenario.radius = r;
            scenario.harnack_radii = vec![0.0, r / 8.0, r / 4.0, r / 2.0];
        }
        if let Some(r) = radii {
            scenario.harnack_radii = r;
        }
        scenario.refine = refine;
        if claim_rho.is_some() || claim_n.is_some() {
            let exact = space.curvature_dimension();
            scenario.claim = Some(CurvatureDimension::new(
                claim_rho.unwrap_or(exact.rho()),
                claim_n.unwrap_or(exact.n()),
            )?);
        }
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        self.initial.validate(&self.space)?;
        if self.times.is_empty() {
            return Err(Error::Config("at least one time is required".into()));
        }
        for &t in &self.times {
            check_time("time", t)?;
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("times must be strictly increasing".into()));
        }
        if self.refine && !self.cells.is_multiple_of(4) {
            return Err(Error::Config("N must be divisible by 4 when refine is on".into()));
        }
        let coarsest = if self.refine { self.cells / 4 } else { self.cells };
        RadialGrid::new(self.radius, coarsest)?;
        if self.harnack_radii.iter().any(|r| !(*r >= 0.0 && *r <= self.radius)) {
            return Err(Error::Config("Harnack radii must lie in [0, R]".into()));
        }
        Ok(())
    }

    fn coarsest_cells(&self) -> usize {
        if self.refine {
            self.cells / 4
        } else {
            self.cells
        }
    }

    /// Harnack sample nodes at a resolution, at radii snapped to the coarsest grid.
    fn harnack_nodes(&self, cells: usize) -> Vec<usize> {
        let coarse = self.coarsest_cells();
        let ratio = cells / coarse;
        let h = self.radius / coarse as f64;
        let mut nodes: Vec<usize> =
            self.harnack_radii.iter().map(|r| ((r / h).round() as usize).min(coarse) * ratio).collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }

    /// `(s, t)` index pairs: `s < t`, plus `s > t` when ρ > 0.
    fn time_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.times.len();
        let backward = self.curvature_dimension().rho() > 0.0;
        let mut out = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i < j || (backward && i > j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// All reports of a scenario at one resolution, in a fixed order. Every
/// report is judged against [`ROUNDING_FLOOR`] alone.
pub fn run_scenario_at(scenario: &Scenario, cells: usize) -> Result<Vec<MarginReport>> {
    scenario.validate()?;
    let space = scenario.space;
    let cd = scenario.curvature_dimension();
    let grid = RadialGrid::new(scenario.radius, cells)?;
    let solver = HeatSolver::new(space, grid)?;
    let wants = |c: CheckKind| scenario.checks.contains(&c);
    let start = scenario.initial.sample_triple(&space, &grid);
    let states = if wants(CheckKind::LogSob) {
        SemigroupTriple::evolve_times(&solver, &start, &scenario.times)?
    } else {
        solver
            .evolve_times(&start.f, &scenario.times)?
            .into_iter()
            .map(|f| SemigroupTriple { f, f_log_f: start.f_log_f.clone(), gamma_over_f: start.gamma_over_f.clone() })
            .collect()
    };

    let mut reports = Vec::new();
    let mut push = |r: MarginReport| {
        let tol = ROUNDING_FLOOR * (1.0 + r.scale);
        reports.push(r.with_tolerance(tol));
    };
    let merge_all = |label: &str, items: Vec<MarginReport>| {
        let mut acc = MarginReport::new(label, 0.0);
        for r in &items {
            acc.merge(r);
        }
        acc
    };

    if wants(CheckKind::LiYau) || wants(CheckKind::Esti2) {
        let mut g = Vec::new();
        let mut d = Vec::new();
        for (t, st) in scenario.times.iter().zip(&states) {
            let (a, b) = check_liyau(&cd, &solver, &st.f, *t, 0.0)?;
            g.push(a);
            d.push(b);
        }
        if wants(CheckKind::LiYau) {
            push(merge_all("liyau", g));
        }
        if wants(CheckKind::Esti2) {
            push(merge_all("esti2", d));
        }
    }
    if wants(CheckKind::LogSob) {
        let mut rev = Vec::new();
        let mut fwd = Vec::new();
        for (t, st) in scenario.times.iter().zip(&states) {
            let (a, b) = check_local_logsob(&cd, &solver, st, *t, 0.0)?;
            rev.push(a);
            fwd.push(b);
        }
        push(merge_all("logsob_reverse", rev));
        push(merge_all("logsob_forward", fwd));
    }
    if wants(CheckKind::Harnack) {
        let nodes = scenario.harnack_nodes(cells);
        let pairs: Vec<(usize, usize)> = nodes.iter().flat_map(|&a| nodes.iter().map(move |&b| (a, b))).collect();
        let mut items = Vec::new();
        for (i, j) in scenario.time_pairs() {
            let (s, t) = (scenario.times[i], scenario.times[j]);
            items.push(check_harnack(&cd, &solver, &states[i].f, &states[j].f, s, t, &pairs, 0.0)?);
        }
        push(merge_all("harnack", items));
    }
    if wants(CheckKind::Ultracontractive) {
        push(check_ultracontractive(&cd, &solver, &start.f, &scenario.times, 0.0)?);
    }
    if wants(CheckKind::Gradient) {
        let rho = cd.rho();
        let mut items = Vec::new();
        for (t, st) in scenario.times.iter().zip(&states) {
            if rho > 0.0 && *t >= 6.0 / rho {
                items.push(check_gradient_decay(&cd, &solver, &st.f, *t, 0.0)?);
            }
        }
        if items.is_empty() {
            return Err(Error::Config("gradient check needs rho > 0 and a time t >= 6/rho".into()));
        }
        push(merge_all("gradient_decay", items));
    }
    Ok(reports)
}

/// A fine-grid report with its tolerance calibrated from two coarser grids.
///
/// With margins `m_f, m_m, m_c` on grids `h, 2h, 4h`, the discretization
/// constant is `C = max(|m_f − m_m|/(3h²), |m_m − m_c|/(12h²))`, the
/// extrapolated margin is `m* = m_f + (m_f − m_m)/3`, and the check passes
/// when `m* ≥ −floor` and `m_f ≥ −(C·h² + floor)`, where
/// `floor = 1e-10·(1 + scale)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedReport {
    pub report: MarginReport,
    pub margins: Vec<f64>,
    pub extrapolated: f64,
    pub c_disc: f64,
    pub h: f64,
}

impl CalibratedReport {
    pub const CSV_HEADER: &'static str =
        "label,min_margin,position,node,time,scale,tolerance,passed,extrapolated,c_disc,h";

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.report.csv_row(), self.extrapolated, self.c_disc, self.h)
    }

    pub fn passed(&self) -> bool {
        self.report.passed
    }
}

impl fmt::Display for CalibratedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} extrapolated={:.6e} C_disc={:.3e}", self.report, self.extrapolated, self.c_disc)
    }
}

fn calibrate(fine: MarginReport, mid: Option<&MarginReport>, coarse: Option<&MarginReport>, h: f64) -> CalibratedReport {
    let floor = ROUNDING_FLOOR * (1.0 + fine.scale);
    let m_f = fine.min_margin;
    let (Some(mid), Some(coarse)) = (mid, coarse) else {
        let report = fine.with_tolerance(floor);
        return CalibratedReport { margins: vec![m_f], extrapolated: m_f, c_disc: 0.0, h, report };
    };
    let (m_m, m_c) = (mid.min_margin, coarse.min_margin);
    let margins = vec![m_f, m_m, m_c];
    if margins.iter().all(|m| m.is_infinite() && *m > 0.0) {
        let report = fine.with_tolerance(floor);
        return CalibratedReport { margins, extrapolated: f64::INFINITY, c_disc: 0.0, h, report };
    }
    let c_disc = ((m_f - m_m).abs() / (3.0 * h * h)).max((m_m - m_c).abs() / (12.0 * h * h));
    let extrapolated = m_f + (m_f - m_m) / 3.0;
    let tol = c_disc * h * h + floor;
    let mut report = fine.with_tolerance(tol);
    report.passed = extrapolated >= -floor && m_f >= -tol;
    CalibratedReport { report, margins, extrapolated, c_disc: if c_disc.is_finite() { c_disc } else { f64::NAN }, h }
}

/// Runs a scenario at `N` (and `N/2`, `N/4` when refining) and calibrates
/// every report.
pub fn run_scenario(scenario: &Scenario) -> Result<Vec<CalibratedReport>> {
    scenario.validate()?;
    let fine = run_scenario_at(scenario, scenario.cells)?;
    let h = scenario.radius / scenario.cells as f64;
    if !scenario.refine {
        return Ok(fine.into_iter().map(|r| calibrate(r, None, None, h)).collect());
    }
    let mid = run_scenario_at(scenario, scenario.cells / 2)?;
    let coarse = run_scenario_at(scenario, scenario.cells / 4)?;
    Ok(fine
        .into_iter()
        .zip(mid.iter())
        .zip(coarse.iter())
        .map(|((f, m), c)| calibrate(f, Some(m), Some(c), h))
        .collect())
}

/// Values of the evolved state, for callers that want the raw solution.
pub fn evolve_scenario(scenario: &Scenario, cells: usize) -> Result<(HeatSolver, Vec<GridFunction>)> {
    let grid = RadialGrid::new(scenario.radius, cells)?;
    let solver = HeatSolver::new(scenario.space, grid)?;
    let f0 = GridFunction::from_fn(&grid, |r| scenario.initial.value(&scenario.space, r));
    let states = solver.evolve_times(&f0, &scenario.times)?;
    Ok((solver, states))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERE: &str = "\
# S^2 with smooth data
space = sphere
n = 2
kappa = 1
N = 400
f0 = cosine:1,0.5
times = 0.1, 1, 3
checks = liyau, esti2, logsob, harnack
harnack_radii = 0, 0.5, 1.5, 3.0
";

    #[test]
    fn parses_config() {
        let s = Scenario::from_config(SPHERE).unwrap();
        assert_eq!(s.space.rho(), 1.0);
        assert_eq!(s.cells, 400);
        assert_eq!(s.times, vec![0.1, 1.0, 3.0]);
        assert_eq!(s.checks.len(), 4);
        assert!((s.radius - std::f64::consts::PI).abs() < 1e-15);
        assert!(Scenario::from_config("space = sphere\nn = 2\n").is_err());
        assert!(Scenario::from_config(&SPHERE.replace("N = 400", "N = 402")).is_err());
        assert!(Scenario::from_config(&SPHERE.replace("kappa = 1", "colour = 1")).is_err());
        assert!(Scenario::from_config(&SPHERE.replace("0.1, 1, 3", "1, 0.1")).is_err());
    }

    #[test]
    fn harnack_nodes_coincide_across_resolutions() {
        let s = Scenario::from_config(SPHERE).unwrap();
        let fine = s.harnack_nodes(400);
        let coarse = s.harnack_nodes(100);
        for (a, b) in fine.iter().zip(&coarse) {
            assert_eq!(*a, 4 * b);
        }
    }

    #[test]
    fn overstated_claim_fails() {
        let cfg = "space = euclidean\nn = 3\nN = 400\nR = 12\nf0 = kernel:0.05,1e-9\ntimes = 0.5\n\
                   checks = liyau\nclaim_n = 1\n";
        let s = Scenario::from_config(cfg).unwrap();
        assert_eq!(s.curvature_dimension().n(), 1.0);
        let reports = run_scenario(&s).unwrap();
        assert!(!reports[0].passed(), "{}", reports[0]);
    }

    #[test]
    fn small_sphere_scenario_passes() {
        let s = Scenario::from_config(SPHERE).unwrap();
        for r in run_scenario(&s).unwrap() {
            assert!(r.passed(), "{r}");
        }
    }
}
