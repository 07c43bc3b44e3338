use curvebound::heat::{
    check_harnack, check_liyau, check_local_logsob, evolve, GridFunction, HeatSolver, InitialData, ModelSpace,
    RadialGrid, SemigroupTriple,
};
use curvebound::{harnack_exponent, HarnackQuery};
use std::f64::consts::PI;

fn gaussian(n: usize, t: f64, r: f64) -> f64 {
    (4.0 * PI * t).powf(-0.5 * n as f64) * (-r * r / (4.0 * t)).exp()
}

/// H³ heat kernel written with sinh directly.
fn h3_kernel(t: f64, r: f64) -> f64 {
    let geometric = if r == 0.0 { 1.0 } else { r / r.sinh() };
    (4.0 * PI * t).powf(-1.5) * geometric * (-t - r * r / (4.0 * t)).exp()
}

#[test]
fn constant_data_stays_constant() {
    for space in [
        ModelSpace::euclidean(3).unwrap(),
        ModelSpace::sphere(2, 1.0).unwrap(),
        ModelSpace::hyperbolic(3, 1.0).unwrap(),
    ] {
        let grid = RadialGrid::new(space.default_radius().min(10.0), 200).unwrap();
        let f0 = GridFunction::from_fn(&grid, |_| 1.7);
        let u = evolve(&space, &grid, &f0, 2.0, grid.h() / 2.0).unwrap();
        let drift = u.values.iter().map(|v| (v - 1.7).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-12, "{} drift {drift:e}", space.kind());
    }
}

#[test]
fn euclidean_gaussian_converges_at_second_order() {
    let n = 3;
    let t0 = 0.1;
    let space = ModelSpace::euclidean(n).unwrap();
    for &t in &[0.1, 0.5, 1.0] {
        let mut errors = Vec::new();
        for cells in [400, 800, 1600] {
            let grid = RadialGrid::new(10.0, cells).unwrap();
            let f0 = GridFunction::from_fn(&grid, |r| gaussian(n, t0, r));
            let u = evolve(&space, &grid, &f0, t, grid.h() / 2.0).unwrap();
            let err = (0..grid.len())
                .map(|i| (u.values[i] - gaussian(n, t0 + t, grid.node(i))).abs())
                .fold(0.0, f64::max);
            errors.push(err);
        }
        assert!(errors[0] / errors[1] >= 3.5, "t={t}: {errors:?}");
        assert!(errors[1] / errors[2] >= 3.5, "t={t}: {errors:?}");
    }
}

#[test]
fn hyperbolic_solution_matches_closed_form_kernel() {
    let space = ModelSpace::hyperbolic(3, 1.0).unwrap();
    let data = InitialData::Kernel { t0: 0.1, eps: 1e-3 };
    let mut errors = Vec::new();
    for cells in [500, 1000, 2000] {
        let grid = RadialGrid::new(20.0, cells).unwrap();
        let f0 = GridFunction::from_fn(&grid, |r| data.value(&space, r));
        let u = evolve(&space, &grid, &f0, 0.4, grid.h() / 2.0).unwrap();
        let err = (0..grid.len())
            .map(|i| (u.values[i] - h3_kernel(0.5, grid.node(i)) - 1e-3).abs())
            .fold(0.0, f64::max);
        errors.push(err);
    }
    assert!(errors[0] / errors[1] >= 3.5 && errors[1] / errors[2] >= 3.5, "{errors:?}");
    assert!(errors[2] < 1e-4, "{errors:?}");
}

#[test]
fn mass_and_maximum_principle() {
    let space = ModelSpace::hyperbolic(3, 1.0).unwrap();
    let grid = RadialGrid::new(15.0, 600).unwrap();
    let solver = HeatSolver::new(space, grid).unwrap();
    let data = InitialData::Kernel { t0: 0.05, eps: 1e-2 };
    let f0 = GridFunction::from_fn(&grid, |r| data.value(&space, r));
    let (lo, hi) = (f0.min(), f0.max());
    let m0 = solver.mass(&f0);
    for (k, u) in solver.evolve_times(&f0, &[0.1, 0.5, 1.0, 2.0]).unwrap().iter().enumerate() {
        let t = [0.1, 0.5, 1.0, 2.0][k];
        assert!(((solver.mass(u) - m0) / m0).abs() <= 1e-8 * t);
        assert!(u.min() >= lo - 1e-10 && u.max() <= hi + 1e-10);
        assert!(u.is_positive());
    }
}

#[test]
fn sphere_relaxes_to_its_mean() {
    let space = ModelSpace::sphere(2, 1.0).unwrap();
    let grid = RadialGrid::new(PI, 400).unwrap();
    let solver = HeatSolver::new(space, grid).unwrap();
    let data = InitialData::ExpCos { c: 2.0 };
    let f0 = GridFunction::from_fn(&grid, |r| data.value(&space, r));
    let mean = solver.mean(&f0);
    let u = solver.evolve_times(&f0, &[12.0]).unwrap().pop().unwrap();
    assert!(u.values.iter().all(|v| ((v - mean) / mean).abs() < 1e-9));
}

#[test]
fn small_perturbation_logsob_margins_are_second_order() {
    let space = ModelSpace::sphere(2, 1.0).unwrap();
    let cd = space.curvature_dimension();
    let grid = RadialGrid::new(PI, 800).unwrap();
    let solver = HeatSolver::new(space, grid).unwrap();
    let mut margins = Vec::new();
    for eps in [0.1, 0.05] {
        let start = InitialData::Cosine { a: 1.0, b: eps }.sample_triple(&space, &grid);
        let st = SemigroupTriple::evolve_times(&solver, &start, &[1.0]).unwrap().pop().unwrap();
        let (rev, fwd) = check_local_logsob(&cd, &solver, &st, 1.0, 1e-10).unwrap();
        assert!(rev.passed && fwd.passed, "{rev} {fwd}");
        margins.push((rev.min_margin, fwd.min_margin));
    }
    // Halving the perturbation divides margins by about four.
    let r_rev = margins[0].0 / margins[1].0;
    let r_fwd = margins[0].1 / margins[1].1;
    assert!((3.0..5.0).contains(&r_rev), "{margins:?}");
    assert!((3.0..5.0).contains(&r_fwd), "{margins:?}");
}

#[test]
fn classical_margin_vanishes_as_data_concentrates() {
    let space = ModelSpace::euclidean(2).unwrap();
    let cd = space.curvature_dimension();
    let grid = RadialGrid::new(12.0, 1200).unwrap();
    let solver = HeatSolver::new(space, grid).unwrap();
    let mut margins = Vec::new();
    for t0 in [0.2, 0.05, 0.0125] {
        let data = InitialData::Kernel { t0, eps: 1e-12 };
        let f0 = GridFunction::from_fn(&grid, |r| data.value(&space, r));
        let u = solver.evolve_times(&f0, &[1.0]).unwrap().pop().unwrap();
        let (rep, _) = check_liyau(&cd, &solver, &u, 1.0, 1e-6).unwrap();
        assert!(rep.passed, "{rep}");
        margins.push(rep.min_margin);
    }
    assert!(margins[0] > margins[1] && margins[1] > margins[2], "{margins:?}");
    assert!(margins[2] < 0.02, "{margins:?}");
}

#[test]
fn euclidean_harnack_exponent_is_classical() {
    let cd = ModelSpace::euclidean(3).unwrap().curvature_dimension();
    let e = harnack_exponent(&cd, &HarnackQuery::new(1.0, 2.0, 1.0).unwrap()).unwrap();
    assert!((e - (1.5 * 2f64.ln() + 0.25)).abs() < 1e-12);
}

#[test]
fn sphere_backward_harnack_pairs_pass() {
    let space = ModelSpace::sphere(2, 1.0).unwrap();
    let cd = space.curvature_dimension();
    let grid = RadialGrid::new(PI, 400).unwrap();
    let solver = HeatSolver::new(space, grid).unwrap();
    let data = InitialData::Cosine { a: 1.0, b: 0.8 };
    let f0 = GridFunction::from_fn(&grid, |r| data.value(&space, r));
    let states = solver.evolve_times(&f0, &[0.5, 2.0]).unwrap();
    let pairs: Vec<(usize, usize)> = [0, 100, 200, 400].iter().flat_map(|&a| [0, 200, 400].map(|b| (a, b))).collect();
    let rep = check_harnack(&cd, &solver, &states[1], &states[0], 2.0, 0.5, &pairs, 1e-10).unwrap();
    assert!(rep.passed, "{rep}");
}
