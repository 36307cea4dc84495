//! Lesche-stability experiments: distribution norms, stability ratios and
//! parameter sweeps.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{parse_order, Measure};
use crate::error::{Error, Result};
use crate::hyperbolic::Hyperbolic;
use crate::probability::{
    hyperbolic_perturbation_family, perturbation_family, Family, HyperbolicDistribution,
    HyperbolicPair, PerturbationPair, RealDistribution,
};

/// Neumaier-compensated sum; plain summation drifts by ~1e-11 over 1e5
/// terms, which is visible against δ.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn abs_diff_sum(a: &[f64], b: &[f64]) -> f64 {
    compensated_sum(a.iter().zip(b).map(|(x, y)| (x - y).abs()))
}

/// `Σ |p − p'|`.
pub fn lesche_norm(p: &RealDistribution, q: &RealDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    Ok(abs_diff_sum(p.probs(), q.probs()))
}

/// `‖𝒫1 − 𝒫1'‖·e1 + ‖𝒫2 − 𝒫2'‖·e2`.
pub fn lesche_norm_hyp(
    a: &HyperbolicDistribution,
    b: &HyperbolicDistribution,
) -> Result<Hyperbolic> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.case() != b.case() {
        return Err(Error::CaseMismatch(format!(
            "cannot compare case {} with case {}",
            a.case(),
            b.case()
        )));
    }
    Ok(Hyperbolic::new(
        abs_diff_sum(&a.component(0), &b.component(0)),
        abs_diff_sum(&a.component(1), &b.component(1)),
    ))
}

/// A measure together with its order, written `name` or `name:order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSpec {
    pub measure: Measure,
    pub order: Option<Hyperbolic>,
}

impl MeasureSpec {
    pub fn new(measure: Measure, order: Option<Hyperbolic>) -> Result<Self> {
        if measure.needs_order() && order.is_none() {
            return Err(Error::Domain(format!("{measure} needs an order")));
        }
        Ok(MeasureSpec {
            measure,
            order: if measure.needs_order() { order } else { None },
        })
    }

    pub fn plain(measure: Measure) -> Self {
        MeasureSpec {
            measure,
            order: None,
        }
    }

    pub fn with_order(measure: Measure, order: Hyperbolic) -> Self {
        MeasureSpec {
            measure,
            order: Some(order),
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            Some(o) if o.x1 == o.x2 => write!(f, "{}:{}", self.measure, o.x1),
            Some(o) => write!(f, "{}:{},{}", self.measure, o.x1, o.x2),
            None => write!(f, "{}", self.measure),
        }
    }
}

impl FromStr for MeasureSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((name, order)) => MeasureSpec::new(name.parse()?, Some(parse_order(order)?)),
            None => MeasureSpec::new(s.parse()?, None),
        }
    }
}

/// One cell of a Lesche experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRecord {
    pub family: Family,
    pub measure: Measure,
    pub order: Option<Hyperbolic>,
    #[serde(rename = "N")]
    pub n: usize,
    pub delta: f64,
    pub norm: Hyperbolic,
    pub ratio: Hyperbolic,
    /// Error code when the cell could not be evaluated; `norm` and `ratio`
    /// are NaN in that case.
    pub error: Option<&'static str>,
}

impl StabilityRecord {
    fn failed(family: Family, spec: MeasureSpec, n: usize, delta: f64, err: &Error) -> Self {
        StabilityRecord {
            family,
            measure: spec.measure,
            order: spec.order,
            n,
            delta,
            norm: Hyperbolic::splat(f64::NAN),
            ratio: Hyperbolic::splat(f64::NAN),
            error: Some(err.code()),
        }
    }

    fn sort_key_cmp(&self, other: &Self) -> Ordering {
        let order_key = |o: Option<Hyperbolic>| o.map(|h| (h.x1, h.x2));
        self.family
            .cmp(&other.family)
            .then(self.measure.cmp(&other.measure))
            .then_with(|| match (order_key(self.order), order_key(other.order)) {
                (Some(a), Some(b)) => a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)),
                (a, b) => a.is_some().cmp(&b.is_some()),
            })
            .then(self.n.cmp(&other.n))
            .then(self.delta.total_cmp(&other.delta))
    }
}

fn log_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::DegenerateN(n));
    }
    Ok((n as f64).ln())
}

/// `|M(P) − M(P')| / ln N` for a real pair. Hyperbolic measures are applied
/// to the embedded pair.
pub fn stability_ratio(spec: MeasureSpec, pair: &PerturbationPair) -> Result<StabilityRecord> {
    if spec.measure.is_hyperbolic() {
        return stability_ratio_hyp(spec, &pair.embed());
    }
    let ln_n = log_n(pair.base.len())?;
    let a = spec.measure.eval_real(&pair.base, spec.order)?;
    let b = spec.measure.eval_real(&pair.perturbed, spec.order)?;
    Ok(StabilityRecord {
        family: pair.family,
        measure: spec.measure,
        order: spec.order,
        n: pair.n,
        delta: pair.delta,
        norm: Hyperbolic::splat(lesche_norm(&pair.base, &pair.perturbed)?),
        ratio: (a - b).modulus_k() * (1.0 / ln_n),
        error: None,
    })
}

/// `|M(B) − M(B')|_k / ((ln N)·1_D)` for a hyperbolic pair. Real measures are
/// applied to each idempotent projection.
pub fn stability_ratio_hyp(spec: MeasureSpec, pair: &HyperbolicPair) -> Result<StabilityRecord> {
    let ln_n = log_n(pair.base.len())?;
    let a = spec.measure.eval_hyp(&pair.base, spec.order)?;
    let b = spec.measure.eval_hyp(&pair.perturbed, spec.order)?;
    Ok(StabilityRecord {
        family: pair.family,
        measure: spec.measure,
        order: spec.order,
        n: pair.n,
        delta: pair.delta,
        norm: lesche_norm_hyp(&pair.base, &pair.perturbed)?,
        ratio: (a - b).modulus_k() * (1.0 / ln_n),
        error: None,
    })
}

/// Parameters of a sweep over the Cartesian product of the grids.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub families: Vec<Family>,
    pub n_grid: Vec<usize>,
    pub delta_grid: Vec<f64>,
    pub measures: Vec<MeasureSpec>,
    pub seed: u64,
}

/// Evaluates every (family, N, δ, measure) cell. Real measures use
/// [`perturbation_family`], hyperbolic measures
/// [`hyperbolic_perturbation_family`], both with the configured seed.
/// Failing cells become records carrying an error code. Output is sorted by
/// (family, measure, order, N, δ) and independent of scheduling.
pub fn stability_sweep(config: &SweepConfig) -> Result<Vec<StabilityRecord>> {
    for (name, empty) in [
        ("families", config.families.is_empty()),
        ("N grid", config.n_grid.is_empty()),
        ("delta grid", config.delta_grid.is_empty()),
        ("measures", config.measures.is_empty()),
    ] {
        if empty {
            return Err(Error::EmptyGrid(format!("{name} must not be empty")));
        }
    }

    let cells: Vec<(Family, usize, f64)> = config
        .families
        .iter()
        .flat_map(|&f| {
            config
                .n_grid
                .iter()
                .flat_map(move |&n| config.delta_grid.iter().map(move |&d| (f, n, d)))
        })
        .collect();

    let mut records: Vec<StabilityRecord> = cells
        .par_iter()
        .flat_map_iter(|&(family, n, delta)| sweep_cell(config, family, n, delta))
        .collect();
    records.sort_by(StabilityRecord::sort_key_cmp);
    Ok(records)
}

fn sweep_cell(config: &SweepConfig, family: Family, n: usize, delta: f64) -> Vec<StabilityRecord> {
    let real_pair = if config.measures.iter().any(|m| !m.measure.is_hyperbolic()) {
        Some(perturbation_family(family, n, delta, config.seed))
    } else {
        None
    };
    let hyp_pair = if config.measures.iter().any(|m| m.measure.is_hyperbolic()) {
        Some(hyperbolic_perturbation_family(
            family,
            n,
            delta,
            config.seed,
        ))
    } else {
        None
    };
    config
        .measures
        .iter()
        .map(|&spec| {
            let result = if spec.measure.is_hyperbolic() {
                match hyp_pair.as_ref().expect("generated above") {
                    Ok(pair) => stability_ratio_hyp(spec, pair),
                    Err(e) => Err(e.clone()),
                }
            } else {
                match real_pair.as_ref().expect("generated above") {
                    Ok(pair) => stability_ratio(spec, pair),
                    Err(e) => Err(e.clone()),
                }
            };
            result.unwrap_or_else(|e| StabilityRecord::failed(family, spec, n, delta, &e))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probability::uniform_hyp;

    fn real(p: &[f64]) -> RealDistribution {
        RealDistribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn norm_examples() {
        let p = real(&[0.5, 0.5]);
        assert_eq!(lesche_norm(&p, &p).unwrap(), 0.0);
        assert_eq!(
            lesche_norm(&real(&[1.0, 0.0]), &real(&[0.0, 1.0])).unwrap(),
            2.0
        );
        let d = lesche_norm(&p, &real(&[0.55, 0.45])).unwrap();
        assert!((d - 0.1).abs() < 1e-15);
        assert_eq!(
            lesche_norm(&p, &real(&[1.0])).unwrap_err(),
            Error::LengthMismatch(2, 1)
        );
    }

    #[test]
    fn hyperbolic_norm_examples() {
        let a = HyperbolicDistribution::validate(&[(0.5, 0.25), (0.5, 0.75)]).unwrap();
        let b = HyperbolicDistribution::validate(&[(0.4, 0.3), (0.6, 0.7)]).unwrap();
        let d = lesche_norm_hyp(&a, &b).unwrap();
        assert!(d.approx_eq(Hyperbolic::new(0.2, 0.1), 1e-15), "{d}");
        assert_eq!(lesche_norm_hyp(&a, &a).unwrap(), Hyperbolic::ZERO);
        let e1 = HyperbolicDistribution::validate(&[(0.3, 0.0), (0.7, 0.0)]).unwrap();
        assert!(matches!(
            lesche_norm_hyp(&a, &e1),
            Err(Error::CaseMismatch(_))
        ));
        assert!(matches!(
            lesche_norm_hyp(&a, &uniform_hyp(3).unwrap()),
            Err(Error::LengthMismatch(2, 3))
        ));
    }

    #[test]
    fn shannon_ratio_example() {
        let pair = perturbation_family(Family::CertaintySpread, 3, 0.1, 0).unwrap();
        let r = stability_ratio(MeasureSpec::plain(Measure::Shannon), &pair).unwrap();
        // S(0.95, 0.025, 0.025) / ln 3, summed independently
        assert!((r.ratio.x1 - 0.21224284925535838).abs() < 1e-14, "{r:?}");
        assert_eq!(r.ratio.x1, r.ratio.x2);
        assert!((r.norm.x1 - 0.1).abs() < 1e-15);
    }

    #[test]
    fn degenerate_pair() {
        let one = real(&[1.0]);
        let pair = PerturbationPair {
            base: one.clone(),
            perturbed: one,
            family: Family::UniformSpike,
            delta: 0.1,
            n: 1,
        };
        assert_eq!(
            stability_ratio(MeasureSpec::plain(Measure::Shannon), &pair).unwrap_err(),
            Error::DegenerateN(1)
        );
    }

    #[test]
    fn spec_parsing() {
        let s: MeasureSpec = "renyi:0.5".parse().unwrap();
        assert_eq!(
            s,
            MeasureSpec::with_order(Measure::Renyi, Hyperbolic::splat(0.5))
        );
        let s: MeasureSpec = "renyi_hyp:2,0.5".parse().unwrap();
        assert_eq!(s.order, Some(Hyperbolic::new(2.0, 0.5)));
        assert_eq!(s.to_string(), "renyi_hyp:2,0.5");
        assert!("renyi".parse::<MeasureSpec>().is_err());
        assert_eq!("shannon:3".parse::<MeasureSpec>().unwrap().order, None);
    }

    #[test]
    fn sweep_sorts_and_reports_errors() {
        let config = SweepConfig {
            families: vec![Family::UniformSpike, Family::CertaintySpread],
            n_grid: vec![100, 10, 1],
            delta_grid: vec![0.1, 1.5],
            measures: vec![
                MeasureSpec::with_order(Measure::Renyi, Hyperbolic::splat(2.0)),
                MeasureSpec::plain(Measure::Shannon),
            ],
            seed: 1,
        };
        let records = stability_sweep(&config).unwrap();
        assert_eq!(records.len(), 2 * 3 * 2 * 2);
        assert_eq!(records[0].family, Family::CertaintySpread);
        assert_eq!(records[0].measure, Measure::Shannon);
        assert_eq!(records[0].n, 1);
        assert_eq!(records[0].error, Some("BadSize"));
        let bad_delta = records
            .iter()
            .filter(|r| r.error == Some("BadDelta"))
            .count();
        assert_eq!(bad_delta, 2 * 2 * 2);
        assert!(records
            .iter()
            .filter(|r| r.error.is_none())
            .all(|r| r.ratio.x1 == r.ratio.x2 && r.ratio.x1 >= 0.0));
        // NaN cells defeat PartialEq; compare the printed form
        assert_eq!(
            format!("{:?}", stability_sweep(&config).unwrap()),
            format!("{records:?}")
        );

        let empty = SweepConfig {
            n_grid: vec![],
            ..config
        };
        assert!(matches!(stability_sweep(&empty), Err(Error::EmptyGrid(_))));
    }
}
