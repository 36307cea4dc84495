//! Frozen values from independent evaluations (plain summation, or 40-digit
//! arithmetic where cancellation matters) and the worked examples of the public API.

use hyperentropy::calculus::{
    check_cauchy_riemann, concavity_probe, elementary, hyp_derivative, hyp_limit,
    ComponentFunction, DifferentiableFunction,
};
use hyperentropy::entropy::Measure;
use hyperentropy::entropy::{
    collision_hyp, extropy, extropy_duality_check, hartley, hartley_hyp, renyi, renyi_extropy,
    renyi_extropy_hyp, renyi_hyp, shannon, strong_extropy_hyp, strong_shannon_hyp,
    strong_shannon_via_generating,
};
use hyperentropy::probability::{
    perturbation_family, uniform, uniform_hyp, Case, Family, HyperbolicDistribution,
    RealDistribution,
};
use hyperentropy::stability::{lesche_norm, lesche_norm_hyp, stability_ratio, MeasureSpec};
use hyperentropy::{Error, Hyperbolic, HyperbolicInterval};

const LN2: f64 = std::f64::consts::LN_2;
const S_QUARTER: f64 = 0.5623351446188083;
const R2_QUARTER: f64 = 0.4700036292457356;

fn h(x1: f64, x2: f64) -> Hyperbolic {
    Hyperbolic::new(x1, x2)
}

fn real(p: &[f64]) -> RealDistribution {
    RealDistribution::new(p.to_vec()).unwrap()
}

fn fixture_b() -> HyperbolicDistribution {
    HyperbolicDistribution::validate(&[(0.5, 0.25), (0.5, 0.75)]).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn real_measures_on_three_states() {
    let p = real(&[0.5, 0.25, 0.25]);
    assert!(close(shannon(&p), 1.0397207708399179, 1e-15));
    assert!(close(extropy(&p), 0.778096698957644, 1e-15));
    assert!(close(renyi(&p, 2.0).unwrap(), 0.9808292530117262, 1e-15));
    assert!(close(
        hartley(&real(&[0.1, 0.2, 0.3, 0.2, 0.2])),
        5f64.ln(),
        1e-15
    ));
    let d = extropy_duality_check(&p);
    assert!(d.max_gap() < 1e-12, "{d:?}");
    assert!(close(d.lhs, 0.778096698957644, 1e-12));
}

#[test]
fn renyi_orders_on_four_states() {
    let q = real(&[0.1, 0.2, 0.3, 0.4]);
    assert!(close(renyi(&q, 0.5).unwrap(), 1.3291038624915945, 1e-14));
    assert!(close(renyi(&q, 3.0).unwrap(), 1.1512925464970227, 1e-14));
    assert!(close(shannon(&q), 1.2798542258336676, 1e-15));
    assert!(close(
        renyi_extropy(&q, 2.0).unwrap(),
        0.7971094971990167,
        1e-14
    ));
    assert_eq!(renyi(&q, 1.0).unwrap_err().code(), "OrderOne");
}

#[test]
fn renyi_extropy_near_one_matches_extropy() {
    let p = real(&[0.5, 0.25, 0.25]);
    assert!(close(
        renyi_extropy(&p, 0.999).unwrap(),
        0.778127526407048,
        1e-14
    ));
    assert!(close(
        renyi_extropy(&p, 1.001).unwrap(),
        0.7780658756744436,
        1e-14
    ));
    assert!(close(
        renyi_extropy(&p, 0.5).unwrap(),
        0.794_022_194_489_659,
        1e-14
    ));

    // regression: the limit α → 1_D lands on J_f within the limit tolerance
    let b = HyperbolicDistribution::embed(&p);
    let along = |a: Hyperbolic| {
        renyi_extropy_hyp(&b, a)
            .map(|v| v.value)
            .unwrap_or(h(f64::NAN, f64::NAN))
    };
    let limit = hyp_limit(&along, Hyperbolic::ONE).unwrap();
    assert!(
        limit.approx_eq(Hyperbolic::splat(0.778096698957644), 1e-8),
        "{limit}"
    );
}

#[test]
fn hyperbolic_fixture_values() {
    let b = fixture_b();
    assert_eq!(b.case(), Case::Full);
    assert!(strong_shannon_hyp(&b).approx_eq(h(LN2, S_QUARTER), 1e-15));
    let via = strong_shannon_via_generating(&b).unwrap();
    assert!(via.approx_eq(h(LN2, S_QUARTER), 1e-8), "{via}");
    assert!(renyi_hyp(&b, Hyperbolic::splat(2.0))
        .unwrap()
        .approx_eq(h(LN2, R2_QUARTER), 1e-15));
    assert!(collision_hyp(&b)
        .unwrap()
        .approx_eq(h(LN2, R2_QUARTER), 1e-15));
    assert!(strong_extropy_hyp(&b)
        .unwrap()
        .approx_eq(h(LN2, S_QUARTER), 1e-15));
    assert_eq!(
        hartley_hyp(&uniform_hyp(3).unwrap()).unwrap(),
        Hyperbolic::splat(3f64.ln())
    );

    let u2 = renyi_extropy_hyp(&uniform_hyp(2).unwrap(), Hyperbolic::splat(2.0)).unwrap();
    assert!(u2.value.approx_eq(Hyperbolic::splat(LN2), 1e-15));
    let u3 = strong_extropy_hyp(&uniform_hyp(3).unwrap()).unwrap();
    assert!(u3.approx_eq(Hyperbolic::splat(2.0 * 1.5f64.ln()), 1e-15));
}

#[test]
fn e1_only_distribution() {
    let b = HyperbolicDistribution::validate(&[(0.3, 0.0), (0.7, 0.0)]).unwrap();
    assert_eq!(b.case(), Case::E1Only);
    assert!(strong_shannon_hyp(&b).approx_eq(h(0.6108643020548935, 0.0), 1e-15));
    assert!(matches!(
        renyi_hyp(&b, Hyperbolic::splat(2.0)),
        Err(Error::UnsupportedCase(_))
    ));
}

#[test]
fn generating_function_derivative_at_minus_one() {
    // F(ξ) = Σ ρ^(−ξ); F'(−1_D) = −Σ ρ Log ρ is the strong Shannon entropy
    let b = fixture_b();
    let (p1, p2) = (b.component(0), b.component(1));
    let gen = |p: Vec<f64>| move |t: f64| p.iter().map(|x| x.powf(-t)).sum::<f64>();
    let gen_prime = |p: Vec<f64>| move |t: f64| -p.iter().map(|x| x.powf(-t) * x.ln()).sum::<f64>();
    let whole = HyperbolicInterval::whole();
    let f = DifferentiableFunction::analytic(
        ComponentFunction::new(gen(p1.clone()), gen(p2.clone()), whole),
        ComponentFunction::new(gen_prime(p1), gen_prime(p2), whole),
    );
    let minus_one = -Hyperbolic::ONE;
    let analytic = hyp_derivative(&f, minus_one).unwrap();
    let numeric = hyp_derivative(&f.without_derivative(), minus_one).unwrap();
    assert!(analytic.approx_eq(h(LN2, S_QUARTER), 1e-14), "{analytic}");
    assert!(numeric.approx_eq(h(LN2, S_QUARTER), 1e-7), "{numeric}");
}

#[test]
fn cauchy_riemann_examples() {
    let swap = |x: Hyperbolic| h(x.x2, x.x1);
    let r = check_cauchy_riemann(&swap, h(0.3, 0.7)).unwrap();
    assert!(!r.holds);
    assert!(r.residual_uy_vx > 0.1 || r.residual_ux_vy > 0.1, "{r:?}");

    let log = |x: Hyperbolic| x.ln().unwrap();
    let r = check_cauchy_riemann(&log, h(0.4, 2.5)).unwrap();
    assert!(
        r.holds && r.residual_ux_vy < 1e-6 && r.residual_uy_vx < 1e-6,
        "{r:?}"
    );
}

#[test]
fn mixed_power_is_neither_convex_nor_concave() {
    let f = elementary::power(h(2.0, 0.5));
    let domain =
        HyperbolicInterval::closed(Hyperbolic::splat(0.1), Hyperbolic::splat(4.0)).unwrap();
    let g = ComponentFunction::from_arcs(
        f.value.component(0).clone(),
        f.value.component(1).clone(),
        domain,
    );
    let report = concavity_probe(&g, 2000, 7).unwrap();
    assert!(!report.convex && !report.concave, "{report:?}");
}

#[test]
fn power_and_log_examples() {
    assert_eq!(
        h(4.0, 9.0).pow(Hyperbolic::splat(0.5)).unwrap(),
        h(2.0, 3.0)
    );
    assert_eq!(Hyperbolic::E1 * Hyperbolic::E2, Hyperbolic::ZERO);
    assert_eq!(Hyperbolic::K * Hyperbolic::K, Hyperbolic::ONE);
    assert_eq!(Hyperbolic::embed_real(1.0).unwrap(), Hyperbolic::ONE);
}

#[test]
fn norms_and_families() {
    let pair = perturbation_family(Family::CertaintySpread, 3, 0.1, 0).unwrap();
    assert_eq!(pair.base.probs(), &[1.0, 0.0, 0.0]);
    assert_eq!(pair.perturbed.probs(), &[0.95, 0.025, 0.025]);
    assert!(close(
        lesche_norm(&pair.base, &pair.perturbed).unwrap(),
        0.1,
        1e-15
    ));

    let spike = perturbation_family(Family::UniformSpike, 2, 0.2, 0).unwrap();
    assert_eq!(spike.base.probs(), &[0.5, 0.5]);
    assert!(close(spike.perturbed.probs()[0], 0.55, 1e-15));
    assert!(close(spike.perturbed.probs()[1], 0.45, 1e-15));

    let b2 = HyperbolicDistribution::validate(&[(0.4, 0.3), (0.6, 0.7)]).unwrap();
    assert!(lesche_norm_hyp(&fixture_b(), &b2)
        .unwrap()
        .approx_eq(h(0.2, 0.1), 1e-15));

    let mixed = HyperbolicDistribution::mix(
        &uniform_hyp(2).unwrap(),
        &HyperbolicDistribution::embed(&real(&[1.0, 0.0])),
        Hyperbolic::splat(0.5),
    )
    .unwrap();
    assert_eq!(
        mixed.rho(),
        &[Hyperbolic::splat(0.75), Hyperbolic::splat(0.25)]
    );
}

#[test]
fn stability_ratio_examples() {
    let pair = perturbation_family(Family::CertaintySpread, 3, 0.1, 0).unwrap();
    let r = stability_ratio(MeasureSpec::plain(Measure::Shannon), &pair).unwrap();
    // S(0.95, 0.025, 0.025) / ln 3
    let oracle = -(0.95f64 * 0.95f64.ln() + 2.0 * 0.025 * 0.025f64.ln()) / 3f64.ln();
    assert!(close(r.ratio.x1, oracle, 1e-14));

    // closed-form asymptote for q = 0.5: (ln(N−1) + (q/(1−q)) ln(δ/2)) / ln N
    let n = 100_000usize;
    let pair = perturbation_family(Family::CertaintySpread, n, 0.01, 0).unwrap();
    let r = stability_ratio(
        MeasureSpec::with_order(Measure::Renyi, Hyperbolic::splat(0.5)),
        &pair,
    )
    .unwrap();
    let nf = n as f64;
    // P' = (1 − δ/2, δ/(2(N−1)), …): R_½(P') = 2 ln(√(1 − δ/2) + (N−1)·√(δ/(2(N−1))))
    let direct =
        2.0 * ((1.0 - 0.005f64).sqrt() + (nf - 1.0) * (0.005 / (nf - 1.0)).sqrt()).ln() / nf.ln();
    assert!(
        close(r.ratio.x1, direct, 1e-12),
        "{} vs {direct}",
        r.ratio.x1
    );
    let asymptote = ((nf - 1.0).ln() + 0.005f64.ln()) / nf.ln();
    assert!(
        close(r.ratio.x1, asymptote, 1e-2),
        "{} vs {asymptote}",
        r.ratio.x1
    );
    assert!(r.ratio.x1 > 0.4);
}

#[test]
fn uniform_maxima() {
    for n in [2usize, 7, 64] {
        let ln_n = (n as f64).ln();
        assert!(close(shannon(&uniform(n).unwrap()), ln_n, 1e-13));
        let u = uniform_hyp(n).unwrap();
        assert!(strong_shannon_hyp(&u).approx_eq(Hyperbolic::splat(ln_n), 1e-13));
        assert!(renyi_hyp(&u, h(0.3, 5.0))
            .unwrap()
            .approx_eq(Hyperbolic::splat(ln_n), 1e-13));
    }
}

#[test]
fn validation_errors() {
    assert_eq!(
        RealDistribution::new(vec![0.6, 0.5]).unwrap_err().code(),
        "SumInvalid"
    );
    assert_eq!(
        RealDistribution::new(vec![-0.1, 1.1]).unwrap_err().code(),
        "NegativeComponent"
    );
    let mixed = HyperbolicDistribution::validate(&[(0.5, 0.0), (0.5, 0.0), (0.0, 1.0)]);
    assert_eq!(mixed.unwrap_err().code(), "MixedZeroDivisors");
    assert_eq!(
        renyi_hyp(&fixture_b(), h(1.0, 2.0)).unwrap_err().code(),
        "OrderOnZeroDivisorLine"
    );
}
