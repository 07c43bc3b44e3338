use curvebound::classical::{linearized_bound_hyperbolic, linearized_bound_trigonometric, Competitor};
use curvebound::classical::li_xu_harnack_exponent;
use curvebound::{
    domain_limit, eval_phi, eval_phi_tilde, find_roots, harnack_exponent, CurvatureDimension, HarnackQuery,
    PsiFunction,
};
use proptest::prelude::*;

fn cd(rho: f64, n: f64) -> CurvatureDimension {
    CurvatureDimension::new(rho, n).unwrap()
}

fn nonzero_rho() -> impl Strategy<Value = f64> {
    prop_oneof![-5.0..-0.05f64, 0.05..5.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_at_one(rho in nonzero_rho(), t in 0.01..20.0f64) {
        let v = eval_phi(rho, t, 1.0).unwrap();
        prop_assert!((v - (1.0 / t - rho / 2.0)).abs() <= 1e-14 * (1.0 / t + rho.abs()));
    }

    #[test]
    fn phi_is_midpoint_concave(rho in nonzero_rho(), t in 0.05..10.0f64, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let limit = domain_limit(rho, t);
        let map = |u: f64| -20.0 + u * (limit - 0.01 * (limit - 1.0) + 20.0);
        let (x, y) = (map(a), map(b));
        let fx = eval_phi(rho, t, x).unwrap();
        let fy = eval_phi(rho, t, y).unwrap();
        let fm = eval_phi(rho, t, 0.5 * (x + y)).unwrap();
        prop_assert!(fm >= 0.5 * (fx + fy) - 1e-12 * (1.0 + fx.abs() + fy.abs()));
    }

    #[test]
    fn phi_tilde_shift(rho in nonzero_rho(), t in 0.05..10.0f64, x in -10.0..1.0f64) {
        let d = eval_phi_tilde(rho, t, x).unwrap() - eval_phi(rho, t, x).unwrap();
        prop_assert!((d - rho * (2.0 - x)).abs() <= 1e-12 * (1.0 + rho.abs() * (2.0 - x)));
    }

    #[test]
    fn tangent_lines_lie_above_phi(rho in nonzero_rho(), t in 0.05..5.0f64, alpha in 0.0..4.0f64,
                                   frac in 0.05..0.95f64, u in 0.0..1.0f64) {
        let limit = domain_limit(rho, t);
        let x = -20.0 + u * (limit - 0.01 * (limit - 1.0) + 20.0);
        let phi = eval_phi(rho, t, x).unwrap();
        let hyp = linearized_bound_hyperbolic(rho, t, alpha).unwrap();
        let tri = linearized_bound_trigonometric(rho, t, frac * std::f64::consts::PI / t).unwrap();
        for lin in [hyp, tri] {
            let line = lin.line(rho, x);
            prop_assert!(line >= phi - 1e-9 * (1.0 + line.abs() + phi.abs()), "{lin:?} at {x}");
        }
    }

    #[test]
    fn negative_curvature_root_changes_sign(rho in -5.0..-0.05f64, t in 0.05..10.0f64) {
        let xi = find_roots(rho, t).unwrap().xi.unwrap();
        prop_assert!(1.0 < xi.lo && xi.hi < domain_limit(rho, t));
        prop_assert!(eval_phi(rho, t, xi.lo).unwrap() >= 0.0);
        prop_assert!(eval_phi(rho, t, xi.hi).map_or(true, |v| v <= 0.0));
    }

    #[test]
    fn fenchel_young(rho in 0.1..3.0f64, n in 1.0..5.0f64, t in 0.1..5.0f64, u in 0.01..0.99f64, z in -20.0..20.0f64) {
        let psi = PsiFunction::new(&cd(rho, n), t).unwrap();
        let dom = psi.domain();
        let x = dom.lo + u * (dom.hi - dom.lo);
        let star = psi.legendre(z).unwrap().value;
        let rhs = z * x - psi.value(x).unwrap();
        prop_assert!(star >= rhs - 1e-9 * (1.0 + star.abs()));
    }

    #[test]
    fn derivative_inverse_roundtrip(rho in nonzero_rho(), n in 1.0..5.0f64, t in 0.1..5.0f64, z in -50.0..-0.01f64) {
        let psi = PsiFunction::new(&cd(rho, n), t).unwrap();
        let y = psi.derivative_inverse(z).unwrap();
        let back = psi.derivative(y).unwrap();
        prop_assert!((back - z).abs() <= 1e-9 * (1.0 + z.abs()));
    }

    #[test]
    fn harnack_exponent_grows_with_distance(rho in prop_oneof![-3.0..-0.1f64, Just(0.0), 0.1..3.0f64],
                                            n in 1.0..5.0f64, s in 0.1..2.0f64, dt in 0.1..2.0f64,
                                            d in 0.05..3.0f64) {
        let c = cd(rho, n);
        let t = s + dt;
        let e1 = harnack_exponent(&c, &HarnackQuery::new(s, t, d).unwrap()).unwrap();
        let e2 = harnack_exponent(&c, &HarnackQuery::new(s, t, 1.5 * d).unwrap()).unwrap();
        prop_assert!(e2 >= e1 - 1e-9 * (1.0 + e1.abs()));
    }

    #[test]
    fn harnack_dominates_li_xu(k in 0.1..4.0f64, n in 1.0..5.0f64, s in 0.05..2.0f64, dt in 0.05..2.0f64,
                               d in 0.05..4.0f64) {
        let t = s + dt;
        let new = harnack_exponent(&cd(-k, n), &HarnackQuery::new(s, t, d).unwrap()).unwrap();
        let old = li_xu_harnack_exponent(n, k, s, t, d).unwrap();
        prop_assert!(new <= old + 1e-10 * (1.0 + old.abs()));
    }

    #[test]
    fn improved_bound_implies_competitors(k in 0.1..5.0f64, t in 0.05..10.0f64, u in 0.0..1.0f64) {
        let xi = find_roots(-k, t).unwrap().xi.unwrap().lo;
        let x = -50.0 + u * (xi + 50.0);
        for c in Competitor::standard_set() {
            let (margin, scale) = c.margin_at(k, t, x).unwrap();
            prop_assert!(margin >= -1e-10 * (1.0 + scale), "{} at X={x}: {margin}", c.label());
        }
    }
}
