//! The invariant suite behind `hyperentropy verify`.
//!
//! Every invariant draws from its own seeded stream, so results are
//! reproducible and independent of which invariants run.

use crate::calculus::{
    check_cauchy_riemann, concavity_probe, derivative_discrepancy, elementary, hyp_derivative,
    lhopital_check, ComponentFunction, DifferentiableFunction,
};
use crate::entropy::Measure;
use crate::entropy::{
    collision, collision_hyp, extropy, extropy_duality_check, hartley, hartley_hyp, renyi,
    renyi_extropy, renyi_extropy_hyp, renyi_hyp, renyi_hyp_limit, shannon, strong_extropy_hyp,
    strong_shannon_hyp, strong_shannon_via_generating,
};
use crate::hyperbolic::{Hyperbolic, HyperbolicInterval};
use crate::probability::{
    hyperbolic_perturbation_family, parse_distribution, perturbation_family, random_distribution,
    random_hyperbolic_distribution, uniform_hyp, Distribution, Family, FileFormat,
    HyperbolicDistribution, RealDistribution,
};
use crate::rng::SeededRng;
use crate::stability::{
    lesche_norm, lesche_norm_hyp, stability_ratio, stability_ratio_hyp, MeasureSpec,
};

/// A distribution file checked by the suite.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub content: String,
    pub format: FileFormat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl InvariantResult {
    /// `PASS name: detail` / `FAIL name: detail`.
    pub fn line(&self) -> String {
        format!(
            "{} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

type Outcome = std::result::Result<String, String>;

struct Ctx<'a> {
    rng: SeededRng,
    fixtures: &'a [Fixture],
}

type Check = fn(&mut Ctx) -> Outcome;

const CHECKS: &[(&str, Check)] = &[
    ("hyperbolic.basis_round_trip", basis_round_trip),
    ("hyperbolic.ring_componentwise", ring_componentwise),
    ("hyperbolic.partial_order", partial_order),
    ("calculus.derivative_agreement", derivative_agreement),
    ("calculus.derivative_linearity", derivative_linearity),
    ("calculus.lhopital_pairs", lhopital_pairs),
    ("calculus.cauchy_riemann", cauchy_riemann),
    ("calculus.concavity_verdicts", concavity_verdicts),
    (
        "calculus.shannon_concave_on_segments",
        shannon_concave_on_segments,
    ),
    ("probability.fixture_round_trip", fixture_round_trip),
    ("probability.embedding_projections", embedding_projections),
    ("probability.mix_sum", mix_sum),
    ("probability.perturbation_norms", perturbation_norms),
    (
        "entropy.componentwise_factorization",
        componentwise_factorization,
    ),
    ("entropy.maxima", maxima),
    ("entropy.nonnegativity", nonnegativity),
    ("entropy.order_monotonicity", order_monotonicity),
    (
        "entropy.concavity_in_distribution",
        concavity_in_distribution,
    ),
    ("entropy.extropy_relations", extropy_relations),
    ("entropy.generating_rewrite", generating_rewrite),
    ("entropy.limit_equivalence", limit_equivalence),
    ("stability.norm_symmetry_triangle", norm_symmetry_triangle),
    (
        "stability.hyperbolic_real_coherence",
        hyperbolic_real_coherence,
    ),
    ("stability.stability_signature", stability_signature),
    ("stability.instability_signature", instability_signature),
];

/// Names of all invariants, in execution order.
pub fn invariant_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs every invariant. `fixtures` are checked by
/// `probability.fixture_round_trip` in addition to the built-in ones.
pub fn run_suite(seed: u64, fixtures: &[Fixture]) -> Vec<InvariantResult> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, &(name, check))| {
            let mut ctx = Ctx {
                rng: SeededRng::derived(seed, i as u64),
                fixtures,
            };
            let outcome = check(&mut ctx);
            InvariantResult {
                name,
                passed: outcome.is_ok(),
                detail: outcome.unwrap_or_else(|e| e),
            }
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn h(x1: f64, x2: f64) -> Hyperbolic {
    Hyperbolic::new(x1, x2)
}

fn random_hyp(rng: &mut SeededRng, lo: f64, hi: f64) -> Hyperbolic {
    h(rng.uniform_in(lo, hi), rng.uniform_in(lo, hi))
}

fn random_full(rng: &mut SeededRng, lo: usize, hi: usize) -> HyperbolicDistribution {
    let n = lo + rng.below(hi - lo + 1);
    random_hyperbolic_distribution(rng, n).expect("normalized exponentials validate")
}

/// A valid order `α ≻ 0` with no component equal to 1.
fn random_order(rng: &mut SeededRng) -> Hyperbolic {
    let mut a = random_hyp(rng, 0.05, 4.0);
    for c in [&mut a.x1, &mut a.x2] {
        if *c == 1.0 {
            *c = 1.5;
        }
    }
    a
}

fn basis_round_trip(ctx: &mut Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (a, b) = (
            ctx.rng.uniform_in(-100.0, 100.0),
            ctx.rng.uniform_in(-100.0, 100.0),
        );
        let (a2, b2) = Hyperbolic::from_unit_k(a, b).to_unit_k();
        let scale = a.abs().max(b.abs());
        worst = worst.max(((a2 - a).abs()).max((b2 - b).abs()) / scale);
    }
    ensure(worst <= 2.0 * f64::EPSILON, || {
        format!("relative error {worst:e}")
    })?;
    Ok(format!("1000 samples, worst relative error {worst:.3e}"))
}

fn ring_componentwise(ctx: &mut Ctx) -> Outcome {
    for _ in 0..1000 {
        let x = random_hyp(&mut ctx.rng, -10.0, 10.0);
        let y = random_hyp(&mut ctx.rng, -10.0, 10.0);
        ensure(x + y == h(x.x1 + y.x1, x.x2 + y.x2), || {
            format!("add {x} {y}")
        })?;
        ensure(x - y == h(x.x1 - y.x1, x.x2 - y.x2), || {
            format!("sub {x} {y}")
        })?;
        ensure(x * y == h(x.x1 * y.x1, x.x2 * y.x2), || {
            format!("mul {x} {y}")
        })?;
        let q = x.checked_div(y).map_err(|e| e.to_string())?;
        ensure(q == h(x.x1 / y.x1, x.x2 / y.x2), || format!("div {x} {y}"))?;
    }
    ensure(Hyperbolic::E1 * Hyperbolic::E2 == Hyperbolic::ZERO, || {
        "e1·e2 ≠ 0".into()
    })?;
    ensure(Hyperbolic::K * Hyperbolic::K == Hyperbolic::ONE, || {
        "k² ≠ 1".into()
    })?;
    ensure(Hyperbolic::ONE.checked_div(Hyperbolic::E1).is_err(), || {
        "division by e1 accepted".into()
    })?;
    Ok("1000 samples".into())
}

fn partial_order(ctx: &mut Ctx) -> Outcome {
    for _ in 0..1000 {
        // small integer grid so that equal components actually occur
        let mut pick = || h(ctx.rng.below(3) as f64, ctx.rng.below(3) as f64);
        let (x, y, z) = (pick(), pick(), pick());
        ensure(x.preceq(x), || format!("{x} not reflexive"))?;
        ensure(!(x.preceq(y) && y.preceq(x)) || x == y, || {
            format!("antisymmetry {x} {y}")
        })?;
        ensure(!(x.preceq(y) && y.preceq(z)) || x.preceq(z), || {
            format!("transitivity {x} {y} {z}")
        })?;
        ensure(x.prec(y) == (x.x1 < y.x1 && x.x2 < y.x2), || {
            format!("strict order {x} {y}")
        })?;
    }
    Ok("1000 triples".into())
}

/// Every shipped differentiable function with a box inside its domain.
fn catalog() -> Vec<(&'static str, DifferentiableFunction, HyperbolicInterval)> {
    let all = HyperbolicInterval::closed(Hyperbolic::splat(-3.0), Hyperbolic::splat(3.0)).unwrap();
    let pos = HyperbolicInterval::closed(Hyperbolic::splat(0.1), Hyperbolic::splat(5.0)).unwrap();
    vec![
        ("identity", elementary::identity(), all),
        ("square", elementary::monomial(2), all),
        ("cube", elementary::monomial(3), all),
        (
            "square_minus_one",
            elementary::shifted_monomial(2, 1.0),
            all,
        ),
        ("shift_minus_one", elementary::shifted_monomial(1, 1.0), all),
        ("one_minus", elementary::reflect(1.0), all),
        ("exp", elementary::exp(), all),
        ("log", elementary::log(), pos),
        ("power_2_0.5", elementary::power(h(2.0, 0.5)), pos),
        ("power_0.3_3.5", elementary::power(h(0.3, 3.5)), pos),
    ]
}

fn derivative_agreement(ctx: &mut Ctx) -> Outcome {
    let mut worst = 0.0f64;
    let seed = ctx.rng.next_u64();
    for (i, (name, f, b)) in catalog().into_iter().enumerate() {
        let d = derivative_discrepancy(&f, &b, 100, seed.wrapping_add(i as u64))
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(d < 1e-6, || format!("{name}: discrepancy {d:e}"))?;
        worst = worst.max(d);
    }
    Ok(format!("worst discrepancy {worst:.3e}"))
}

fn derivative_linearity(ctx: &mut Ctx) -> Outcome {
    let fns = catalog();
    let all = HyperbolicInterval::closed(Hyperbolic::splat(-2.0), Hyperbolic::splat(2.0)).unwrap();
    for _ in 0..50 {
        let (_, f, _) = &fns[ctx.rng.below(7)];
        let (_, g, _) = &fns[ctx.rng.below(7)];
        let (a, b) = (
            random_hyp(&mut ctx.rng, -2.0, 2.0),
            random_hyp(&mut ctx.rng, -2.0, 2.0),
        );
        let combo = f.lin_comb(a, g, b).without_derivative();
        let xi = crate::calculus::sample_point(&mut ctx.rng, &all).map_err(|e| e.to_string())?;
        let fd = |d: &DifferentiableFunction| hyp_derivative(&d.without_derivative(), xi);
        let lhs = hyp_derivative(&combo, xi).map_err(|e| e.to_string())?;
        let rhs = a * fd(f).map_err(|e| e.to_string())? + b * fd(g).map_err(|e| e.to_string())?;
        // finite-difference roundoff grows with |F|/h, so the bound is
        // relative to the magnitude of the combined function values
        let magnitude = (a * f.value.eval(xi)).modulus_k() + (b * g.value.eval(xi)).modulus_k();
        let scale = magnitude.x1.max(magnitude.x2).max(1.0);
        ensure(lhs.approx_eq(rhs, 1e-9 * scale), || {
            format!("at {xi}: {lhs} vs {rhs}")
        })?;
    }
    Ok("50 random combinations".into())
}

fn lhopital_pairs(_: &mut Ctx) -> Outcome {
    let log_over_shift = (
        elementary::log(),
        elementary::shifted_monomial(1, 1.0),
        Hyperbolic::ONE,
        Hyperbolic::ONE,
    );
    let pairs = [
        (
            elementary::shifted_monomial(2, 1.0),
            elementary::shifted_monomial(1, 1.0),
            Hyperbolic::ONE,
            Hyperbolic::splat(2.0),
        ),
        (
            elementary::monomial(3),
            elementary::identity(),
            Hyperbolic::ZERO,
            Hyperbolic::ZERO,
        ),
        log_over_shift,
    ];
    for (f, g, at, expected) in pairs {
        for numeric in [false, true] {
            let (f, g) = if numeric {
                (f.without_derivative(), g.without_derivative())
            } else {
                (f.clone(), g.clone())
            };
            let r = lhopital_check(&f, &g, at).map_err(|e| e.to_string())?;
            ensure(r.agree && r.lhs.approx_eq(expected, 1e-6), || {
                format!("at {at}: {r:?}")
            })?;
        }
    }
    Ok("3 pairs, analytic and finite-difference derivatives".into())
}

fn cauchy_riemann(ctx: &mut Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for (name, f, b) in catalog() {
        for _ in 0..10 {
            let xi = crate::calculus::sample_point(&mut ctx.rng, &b).map_err(|e| e.to_string())?;
            let cr = check_cauchy_riemann(&f, xi).map_err(|e| format!("{name}: {e}"))?;
            ensure(cr.holds, || format!("{name} at {xi}: {cr:?}"))?;
            worst = worst.max(cr.residual_ux_vy).max(cr.residual_uy_vx);
        }
    }
    let swap = |xi: Hyperbolic| h(xi.x2, xi.x1);
    let cr = check_cauchy_riemann(&swap, h(1.0, 2.0)).map_err(|e| e.to_string())?;
    let counter = cr.residual_ux_vy.max(cr.residual_uy_vx);
    ensure(!cr.holds && counter > 0.1, || {
        format!("swap map passed: {cr:?}")
    })?;
    Ok(format!(
        "worst residual {worst:.3e}; swap-map residual {counter:.3}"
    ))
}

fn concavity_verdicts(ctx: &mut Ctx) -> Outcome {
    let seed = ctx.rng.next_u64();
    let log_box = HyperbolicInterval::closed(Hyperbolic::splat(0.1), Hyperbolic::ONE).unwrap();
    let log = elementary::log_on(log_box).value;
    let square = ComponentFunction::uniform(|x| x * x, HyperbolicInterval::unit());
    let mixed = ComponentFunction::new(|x| x * x, f64::sqrt, HyperbolicInterval::unit());
    let expect = [
        (&log, true, false),
        (&square, false, true),
        (&mixed, false, false),
    ];
    for (i, (f, concave, convex)) in expect.into_iter().enumerate() {
        let r = concavity_probe(f, 2000, seed.wrapping_add(i as u64)).map_err(|e| e.to_string())?;
        ensure(r.concave == concave && r.convex == convex, || {
            format!("case {i}: concave={} convex={}", r.concave, r.convex)
        })?;
    }
    Ok("log concave, square convex, mixed power neither".into())
}

fn shannon_concave_on_segments(ctx: &mut Ctx) -> Outcome {
    for _ in 0..20 {
        let a = random_full(&mut ctx.rng, 2, 20);
        let n = a.len();
        let b = random_hyperbolic_distribution(&mut ctx.rng, n).map_err(|e| e.to_string())?;
        let along = move |i: usize| {
            let (a, b) = (a.clone(), b.clone());
            move |t: f64| {
                let m =
                    HyperbolicDistribution::mix(&a, &b, Hyperbolic::splat(t)).expect("t in [0, 1]");
                strong_shannon_hyp(&m).component(i)
            }
        };
        let f = ComponentFunction::new(along(0), along(1), HyperbolicInterval::unit());
        let r = concavity_probe(&f, 200, ctx.rng.next_u64()).map_err(|e| e.to_string())?;
        ensure(r.concave, || {
            format!("witness {:?}", r.concavity_witnesses.first())
        })?;
    }
    Ok("20 segments × 200 samples".into())
}

fn builtin_fixtures() -> Vec<Fixture> {
    let f = |name: &str, content: &str, format| Fixture {
        name: name.into(),
        content: content.into(),
        format,
    };
    vec![
        f(
            "builtin/full.json",
            r#"{"case":"full","rho":[[0.5,0.25],[0.5,0.75]]}"#,
            FileFormat::Json,
        ),
        f(
            "builtin/e1.json",
            r#"{"case":"e1","rho":[[0.3,0.0],[0.7,0.0]]}"#,
            FileFormat::Json,
        ),
        f(
            "builtin/full.csv",
            "p1,p2\n0.5,0.25\n0.5,0.75\n",
            FileFormat::Csv,
        ),
        f("builtin/real.csv", "p\n0.5\n0.25\n0.25\n", FileFormat::Csv),
        f("builtin/real.json", "[0.5, 0.5]", FileFormat::Json),
    ]
}

fn fixture_round_trip(ctx: &mut Ctx) -> Outcome {
    let mut all = builtin_fixtures();
    all.extend(ctx.fixtures.iter().cloned());
    for fx in &all {
        let d =
            parse_distribution(&fx.content, fx.format).map_err(|e| format!("{}: {e}", fx.name))?;
        let (json, csv) = match &d {
            Distribution::Real(p) => (p.to_json(), p.to_csv()),
            Distribution::Hyperbolic(b) => (b.to_json(), b.to_csv()),
        };
        for (text, format) in [(json, FileFormat::Json), (csv, FileFormat::Csv)] {
            let back =
                parse_distribution(&text, format).map_err(|e| format!("{}: {e}", fx.name))?;
            ensure(back == d, || {
                format!("{}: {format:?} round trip changed the data", fx.name)
            })?;
        }
    }
    Ok(format!("{} fixtures", all.len()))
}

fn embedding_projections(ctx: &mut Ctx) -> Outcome {
    for _ in 0..200 {
        let n = 1 + ctx.rng.below(50);
        let p = random_distribution(&mut ctx.rng, n).map_err(|e| e.to_string())?;
        let (p1, p2) = HyperbolicDistribution::embed(&p)
            .projections()
            .map_err(|e| e.to_string())?;
        ensure(p1 == p && p2 == p, || format!("N = {n}"))?;
    }
    Ok("200 distributions".into())
}

fn mix_sum(ctx: &mut Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let a = random_full(&mut ctx.rng, 1, 50);
        let b = random_hyperbolic_distribution(&mut ctx.rng, a.len()).map_err(|e| e.to_string())?;
        let lambda = random_hyp(&mut ctx.rng, 0.0, 1.0);
        let m = HyperbolicDistribution::mix(&a, &b, lambda).map_err(|e| e.to_string())?;
        let sum: Hyperbolic = m.rho().iter().sum();
        worst = worst.max(sum.max_abs_diff(Hyperbolic::ONE));
    }
    ensure(worst <= 1e-12, || format!("sum off by {worst:e}"))?;
    Ok(format!("200 mixes, worst sum error {worst:.3e}"))
}

fn perturbation_norms(ctx: &mut Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for family in Family::ALL {
        for n in [2usize, 3, 10, 100, 1000, 100_000] {
            for delta in [1e-4, 0.01, 0.1, 0.5, 0.99] {
                let pair = perturbation_family(family, n, delta, ctx.rng.next_u64())
                    .map_err(|e| e.to_string())?;
                let norm = lesche_norm(&pair.base, &pair.perturbed).map_err(|e| e.to_string())?;
                let declared = match family {
                    Family::UniformSpike => delta * (n - 1) as f64 / n as f64,
                    _ => delta,
                };
                ensure(norm <= delta + 1e-12, || {
                    format!("{family} N={n} δ={delta}: {norm}")
                })?;
                let gap = (norm - declared).abs();
                ensure(gap <= 1e-12, || {
                    format!("{family} N={n} δ={delta}: {norm} vs {declared}")
                })?;
                worst = worst.max(gap);
            }
        }
    }
    Ok(format!(
        "worst deviation from the declared norm {worst:.3e}"
    ))
}

/// Every hyperbolic measure vs the real measure on each projection.
fn factorization_gap(
    b: &HyperbolicDistribution,
    orders: &[Hyperbolic],
) -> std::result::Result<f64, String> {
    let (p1, p2) = b.projections().map_err(|e| e.to_string())?;
    let s = |e: crate::Error| e.to_string();
    let mut pairs: Vec<(Hyperbolic, Hyperbolic)> = vec![
        (strong_shannon_hyp(b), h(shannon(&p1), shannon(&p2))),
        (hartley_hyp(b).map_err(s)?, h(hartley(&p1), hartley(&p2))),
        (
            collision_hyp(b).map_err(s)?,
            h(collision(&p1), collision(&p2)),
        ),
        (
            strong_extropy_hyp(b).map_err(s)?,
            h(extropy(&p1), extropy(&p2)),
        ),
    ];
    for &a in orders {
        pairs.push((
            renyi_hyp(b, a).map_err(s)?,
            h(renyi(&p1, a.x1).map_err(s)?, renyi(&p2, a.x2).map_err(s)?),
        ));
        pairs.push((
            renyi_extropy_hyp(b, a).map_err(s)?.value,
            h(
                renyi_extropy(&p1, a.x1).map_err(s)?,
                renyi_extropy(&p2, a.x2).map_err(s)?,
            ),
        ));
    }
    Ok(pairs
        .iter()
        .map(|(x, y)| x.max_abs_diff(*y))
        .fold(0.0, f64::max))
}

fn componentwise_factorization(ctx: &mut Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let b = random_full(&mut ctx.rng, 2, 50);
        let orders: Vec<Hyperbolic> = (0..5).map(|_| random_order(&mut ctx.rng)).collect();
        worst = worst.max(factorization_gap(&b, &orders)?);
    }
    ensure(worst <= 1e-12, || format!("gap {worst:e}"))?;
    Ok(format!(
        "100 distributions × 5 orders, worst gap {worst:.3e}"
    ))
}

fn maxima(ctx: &mut Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=64 {
        let u = uniform_hyp(n).map_err(|e| e.to_string())?;
        let target = Hyperbolic::splat((n as f64).ln());
        let mut values = vec![
            strong_shannon_hyp(&u),
            hartley_hyp(&u).map_err(|e| e.to_string())?,
        ];
        for _ in 0..3 {
            values.push(renyi_hyp(&u, random_order(&mut ctx.rng)).map_err(|e| e.to_string())?);
        }
        for v in values {
            worst = worst.max(v.max_abs_diff(target));
        }
    }
    ensure(worst <= 1e-12, || format!("gap {worst:e}"))?;
    Ok(format!("N = 2..64, worst gap {worst:.3e}"))
}

fn nonnegativity(ctx: &mut Ctx) -> Outcome {
    for _ in 0..200 {
        let b = random_full(&mut ctx.rng, 1, 50);
        let a = random_order(&mut ctx.rng);
        let r = renyi_hyp(&b, a).map_err(|e| e.to_string())?;
        // ln of a sum that rounds to exactly 1 can give −1e-16
        ensure(r.succeq(Hyperbolic::splat(-1e-12)), || {
            format!("R_{a} = {r}")
        })?;
    }
    Ok("200 samples".into())
}

fn order_monotonicity(ctx: &mut Ctx) -> Outcome {
    for _ in 0..200 {
        let b = random_full(&mut ctx.rng, 2, 50);
        let a = random_order(&mut ctx.rng);
        let mut c = a + random_hyp(&mut ctx.rng, 0.0, 2.0);
        for x in [&mut c.x1, &mut c.x2] {
            if *x == 1.0 {
                *x = 1.25;
            }
        }
        let (ra, rc) = (
            renyi_hyp(&b, a).map_err(|e| e.to_string())?,
            renyi_hyp(&b, c).map_err(|e| e.to_string())?,
        );
        let slack = 1e-10 * ra.x1.abs().max(ra.x2.abs()).max(1.0);
        ensure((ra + Hyperbolic::splat(slack)).succeq(rc), || {
            format!("α = {a}, β = {c}: {ra} vs {rc}")
        })?;
    }
    Ok("200 ordered pairs".into())
}

fn concavity_in_distribution(ctx: &mut Ctx) -> Outcome {
    let mut checked = 0;
    for _ in 0..50 {
        let a = random_full(&mut ctx.rng, 2, 30);
        let b = random_hyperbolic_distribution(&mut ctx.rng, a.len()).map_err(|e| e.to_string())?;
        let alpha = random_hyp(&mut ctx.rng, 0.01, 0.999);
        let (ra, rb) = (
            renyi_hyp(&a, alpha).map_err(|e| e.to_string())?,
            renyi_hyp(&b, alpha).map_err(|e| e.to_string())?,
        );
        for _ in 0..20 {
            let lambda = random_hyp(&mut ctx.rng, 0.0, 1.0);
            let m = HyperbolicDistribution::mix(&a, &b, lambda).map_err(|e| e.to_string())?;
            let rm = renyi_hyp(&m, alpha).map_err(|e| e.to_string())?;
            let chord = (Hyperbolic::ONE - lambda) * ra + lambda * rb;
            let slack = Hyperbolic::splat(1e-10 * chord.x1.abs().max(chord.x2.abs()).max(1.0));
            ensure((rm + slack).succeq(chord), || {
                format!("α = {alpha}, λ = {lambda}: {rm} vs {chord}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (pair, λ) samples"))
}

fn extropy_relations(ctx: &mut Ctx) -> Outcome {
    for _ in 0..200 {
        // a ∈ [0.5, 1] makes 1 − (1 − a) == a exact, so both sums see the
        // same terms
        let mut entry = || {
            let a = ctx.rng.uniform_in(0.5, 1.0);
            if ctx.rng.below(2) == 0 {
                (a, 1.0 - a)
            } else {
                (1.0 - a, a)
            }
        };
        let (c1, c2) = (entry(), entry());
        let b = HyperbolicDistribution::validate(&[(c1.0, c2.0), (c1.1, c2.1)])
            .map_err(|e| e.to_string())?;
        let (s, j) = (
            strong_shannon_hyp(&b),
            strong_extropy_hyp(&b).map_err(|e| e.to_string())?,
        );
        let ulp = |x: f64| f64::from_bits(x.to_bits() + 1) - x;
        ensure(
            (s.x1 - j.x1).abs() <= ulp(s.x1) && (s.x2 - j.x2).abs() <= ulp(s.x2),
            || format!("N = 2: S_f = {s}, J_f = {j}"),
        )?;
    }
    for _ in 0..200 {
        let b = random_full(&mut ctx.rng, 3, 50);
        let (s, j) = (
            strong_shannon_hyp(&b),
            strong_extropy_hyp(&b).map_err(|e| e.to_string())?,
        );
        ensure(s.succeq(j), || {
            format!("N = {}: S_f = {s}, J_f = {j}", b.len())
        })?;
    }
    let j3 = extropy(&RealDistribution::uniform(3).map_err(|e| e.to_string())?);
    ensure((j3 - 2.0 * 1.5f64.ln()).abs() <= 1e-12, || {
        format!("J(uniform 3) = {j3}")
    })?;
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = 1 + ctx.rng.below(50);
        let p = random_distribution(&mut ctx.rng, n).map_err(|e| e.to_string())?;
        worst = worst.max(extropy_duality_check(&p).max_gap());
    }
    ensure(worst <= 1e-10, || format!("duality gap {worst:e}"))?;
    Ok(format!(
        "N = 2 equality, N ≥ 3 dominance, duality gap {worst:.3e}"
    ))
}

fn generating_rewrite(ctx: &mut Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let b = random_full(&mut ctx.rng, 2, 50);
        let g = strong_shannon_via_generating(&b).map_err(|e| e.to_string())?;
        worst = worst.max(g.max_abs_diff(strong_shannon_hyp(&b)));
    }
    ensure(worst <= 1e-8, || format!("gap {worst:e}"))?;
    Ok(format!("30 distributions, worst gap {worst:.3e}"))
}

fn limit_equivalence(ctx: &mut Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let b = random_full(&mut ctx.rng, 2, 50);
        let r = renyi_hyp_limit(&b).map_err(|e| e.to_string())?;
        worst = worst.max(r.max_gap());
    }
    ensure(worst <= 1e-6, || format!("gap {worst:e}"))?;
    Ok(format!("20 distributions, worst gap {worst:.3e}"))
}

fn norm_symmetry_triangle(ctx: &mut Ctx) -> Outcome {
    for _ in 0..200 {
        let n = 1 + ctx.rng.below(50);
        let mut draw = || random_distribution(&mut ctx.rng, n).expect("valid");
        let (p, q, r) = (draw(), draw(), draw());
        let d =
            |a: &RealDistribution, b: &RealDistribution| lesche_norm(a, b).expect("same length");
        ensure(d(&p, &q) == d(&q, &p), || "asymmetric".into())?;
        ensure(d(&p, &r) <= d(&p, &q) + d(&q, &r) + 1e-15, || {
            "triangle inequality".into()
        })?;
    }
    Ok("200 triples".into())
}

fn hyperbolic_real_coherence(ctx: &mut Ctx) -> Outcome {
    for _ in 0..50 {
        let n = 2 + ctx.rng.below(49);
        let pair = perturbation_family(Family::RandomSmooth, n, 0.1, ctx.rng.next_u64())
            .map_err(|e| e.to_string())?;
        let e = pair.embed();
        let real = lesche_norm(&pair.base, &pair.perturbed).map_err(|e| e.to_string())?;
        let hyp = lesche_norm_hyp(&e.base, &e.perturbed).map_err(|e| e.to_string())?;
        ensure(hyp == Hyperbolic::splat(real), || {
            format!("{hyp} vs {real}")
        })?;
    }
    let specs = [
        (
            MeasureSpec::plain(Measure::StrongShannonHyp),
            MeasureSpec::plain(Measure::Shannon),
        ),
        (
            MeasureSpec::with_order(Measure::RenyiHyp, h(0.5, 2.0)),
            MeasureSpec::with_order(Measure::Renyi, Hyperbolic::splat(0.5)),
        ),
    ];
    let mut worst = 0.0f64;
    for family in Family::ALL {
        let hp = hyperbolic_perturbation_family(family, 40, 0.05, ctx.rng.next_u64())
            .map_err(|e| e.to_string())?;
        let (b1, b2) = hp.base.projections().map_err(|e| e.to_string())?;
        let (q1, q2) = hp.perturbed.projections().map_err(|e| e.to_string())?;
        for (hyp_spec, real_spec) in specs {
            let hr = stability_ratio_hyp(hyp_spec, &hp).map_err(|e| e.to_string())?;
            for (i, (b, q)) in [(&b1, &q1), (&b2, &q2)].into_iter().enumerate() {
                let mut spec = real_spec;
                if let Some(o) = hyp_spec.order {
                    spec.order = Some(Hyperbolic::splat(o.component(i)));
                }
                let mut pair =
                    perturbation_family(family, 40, 0.05, 0).map_err(|e| e.to_string())?;
                pair.base = b.clone();
                pair.perturbed = q.clone();
                let rr = stability_ratio(spec, &pair).map_err(|e| e.to_string())?;
                worst = worst.max((hr.ratio.component(i) - rr.ratio.x1).abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("ratio gap {worst:e}"))?;
    Ok(format!("embedded norms exact, worst ratio gap {worst:.3e}"))
}

const SIGNATURE_N: [usize; 7] = [2, 3, 10, 100, 1_000, 10_000, 100_000];

fn stability_signature(ctx: &mut Ctx) -> Outcome {
    let seed = ctx.rng.next_u64();
    let mut worst = 0.0f64;
    for family in Family::ALL {
        for spec in [
            MeasureSpec::plain(Measure::Shannon),
            MeasureSpec::plain(Measure::StrongShannonHyp),
        ] {
            let mut previous = f64::INFINITY;
            for n in SIGNATURE_N {
                let r = if spec.measure.is_hyperbolic() {
                    let pair = hyperbolic_perturbation_family(family, n, 1e-4, seed)
                        .map_err(|e| e.to_string())?;
                    stability_ratio_hyp(spec, &pair)
                } else {
                    let pair =
                        perturbation_family(family, n, 1e-4, seed).map_err(|e| e.to_string())?;
                    stability_ratio(spec, &pair)
                }
                .map_err(|e| e.to_string())?;
                let ratio = r.ratio.x1.max(r.ratio.x2);
                ensure(ratio < 0.01, || {
                    format!("{family} {} N={n}: ratio {ratio}", spec.measure)
                })?;
                if family == Family::CertaintySpread {
                    ensure(ratio <= previous, || {
                        format!("{} not non-increasing at N={n}", spec.measure)
                    })?;
                }
                previous = ratio;
                worst = worst.max(ratio);
            }
        }
    }
    Ok(format!("δ = 1e-4, N ≤ 1e5, largest ratio {worst:.3e}"))
}

fn instability_signature(_: &mut Ctx) -> Outcome {
    let cases = [
        (
            Family::CertaintySpread,
            MeasureSpec::with_order(Measure::Renyi, Hyperbolic::splat(0.5)),
        ),
        (
            Family::UniformSpike,
            MeasureSpec::with_order(Measure::Renyi, Hyperbolic::splat(2.0)),
        ),
        (
            Family::CertaintySpread,
            MeasureSpec::with_order(Measure::RenyiHyp, Hyperbolic::splat(0.5)),
        ),
        (
            Family::UniformSpike,
            MeasureSpec::with_order(Measure::RenyiHyp, Hyperbolic::splat(2.0)),
        ),
    ];
    let mut report = Vec::new();
    let mut failed = false;
    for (family, spec) in cases {
        let pair = perturbation_family(family, 100_000, 0.01, 0).map_err(|e| e.to_string())?;
        let r = stability_ratio(spec, &pair).map_err(|e| e.to_string())?;
        let ratio = r.ratio.x1.min(r.ratio.x2);
        failed |= ratio.is_nan() || ratio <= 0.4;
        report.push(format!("{spec} on {family}: {ratio:.4}"));
    }
    let detail = format!("N = 1e5, δ = 0.01, threshold 0.4; {}", report.join("; "));
    if failed {
        Err(detail)
    } else {
        Ok(detail)
    }
}
