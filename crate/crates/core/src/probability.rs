//! Real and hyperbolic probability distributions, mixing, the perturbation
//! families used by the stability lab, and the distribution file formats.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::Hyperbolic;
use crate::rng::SeededRng;

/// Absolute tolerance on each component sum.
pub const SUM_TOL: f64 = 1e-9;

/// A finite probability vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RealDistribution {
    p: Vec<f64>,
}

fn check_entry(index: usize, component: usize, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite(value));
    }
    if value < 0.0 {
        return Err(Error::NegativeComponent {
            index,
            component,
            value,
        });
    }
    if value > 1.0 + SUM_TOL {
        return Err(Error::ComponentExceedsOne {
            index,
            component,
            value,
        });
    }
    Ok(())
}

impl RealDistribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (i, &v) in p.iter().enumerate() {
            check_entry(i, 1, v)?;
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::RealSumInvalid(sum));
        }
        Ok(RealDistribution { p })
    }

    /// Equiprobable distribution on `n ≥ 1` states.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadSize("uniform distribution needs N >= 1".into()));
        }
        Ok(RealDistribution {
            p: vec![1.0 / n as f64; n],
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.p
    }
}

/// Which sum condition a hyperbolic distribution satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `Σρ = 1_D`.
    #[serde(rename = "full")]
    Full,
    /// `Σρ = 1·e1`, every entry a multiple of `e1`.
    #[serde(rename = "e1")]
    E1Only,
    /// `Σρ = 1·e2`, every entry a multiple of `e2`.
    #[serde(rename = "e2")]
    E2Only,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Full => "full",
            Case::E1Only => "e1",
            Case::E2Only => "e2",
        })
    }
}

/// A vector of elements of `[0, 1_D]` summing to `1_D`, `1·e1` or `1·e2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicDistribution {
    rho: Vec<Hyperbolic>,
    case: Case,
}

impl HyperbolicDistribution {
    /// Validates and classifies raw `(x1, x2)` entries.
    pub fn validate(raw: &[(f64, f64)]) -> Result<Self> {
        Self::new(raw.iter().map(|&p| Hyperbolic::from(p)).collect())
    }

    pub fn new(rho: Vec<Hyperbolic>) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (i, r) in rho.iter().enumerate() {
            check_entry(i, 1, r.x1)?;
            check_entry(i, 2, r.x2)?;
        }
        let pure_e1 = rho.iter().position(|r| r.x1 > 0.0 && r.x2 == 0.0);
        let pure_e2 = rho.iter().position(|r| r.x1 == 0.0 && r.x2 > 0.0);
        if let (Some(e1_index), Some(e2_index)) = (pure_e1, pure_e2) {
            return Err(Error::MixedZeroDivisors { e1_index, e2_index });
        }

        let sum: Hyperbolic = rho.iter().sum();
        let near_one = |s: f64| (s - 1.0).abs() <= SUM_TOL;
        let case = if near_one(sum.x1) && near_one(sum.x2) {
            Case::Full
        } else if near_one(sum.x1) && sum.x2 == 0.0 {
            Case::E1Only
        } else if sum.x1 == 0.0 && near_one(sum.x2) {
            Case::E2Only
        } else {
            return Err(Error::SumInvalid {
                sum1: sum.x1,
                sum2: sum.x2,
            });
        };
        Ok(HyperbolicDistribution { rho, case })
    }

    /// Validates and additionally requires the given case.
    pub fn with_case(rho: Vec<Hyperbolic>, expected: Case) -> Result<Self> {
        let d = Self::new(rho)?;
        if d.case != expected {
            return Err(Error::CaseMismatch(format!(
                "declared case {expected}, entries satisfy case {}",
                d.case
            )));
        }
        Ok(d)
    }

    /// `ρ_s = p_s·e1 + p'_s·e2` from two real distributions of equal length.
    pub fn from_projections(p1: &RealDistribution, p2: &RealDistribution) -> Result<Self> {
        if p1.len() != p2.len() {
            return Err(Error::LengthMismatch(p1.len(), p2.len()));
        }
        let rho = p1
            .probs()
            .iter()
            .zip(p2.probs())
            .map(|(&a, &b)| Hyperbolic::new(a, b))
            .collect();
        Self::with_case(rho, Case::Full)
    }

    /// `ρ_s = p_s·1_D`.
    pub fn embed(p: &RealDistribution) -> Self {
        HyperbolicDistribution {
            rho: p.probs().iter().map(|&x| Hyperbolic::splat(x)).collect(),
            case: Case::Full,
        }
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Ok(Self::embed(&RealDistribution::uniform(n)?))
    }

    pub fn rho(&self) -> &[Hyperbolic] {
        &self.rho
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// The raw `i`-th idempotent components `(p_{1,i}, …, p_{N,i})`, `i ∈ {0, 1}`.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.rho.iter().map(|r| r.component(i)).collect()
    }

    /// `(𝒫1, 𝒫2)`; only case `Full` has two probability projections.
    pub fn projections(&self) -> Result<(RealDistribution, RealDistribution)> {
        self.require_full("projections")?;
        Ok((
            RealDistribution {
                p: self.component(0),
            },
            RealDistribution {
                p: self.component(1),
            },
        ))
    }

    /// The projection carrying the probability mass: `𝒫1` for `Full` and
    /// `E1Only`, `𝒫2` for `E2Only`.
    pub fn projection(&self, i: usize) -> Result<RealDistribution> {
        let ok = match self.case {
            Case::Full => true,
            Case::E1Only => i == 0,
            Case::E2Only => i == 1,
        };
        if !ok {
            return Err(Error::UnsupportedCase(format!(
                "component e{} of a case-{} distribution is identically zero",
                i + 1,
                self.case
            )));
        }
        Ok(RealDistribution {
            p: self.component(i),
        })
    }

    pub(crate) fn require_full(&self, what: &str) -> Result<()> {
        if self.case == Case::Full {
            Ok(())
        } else {
            Err(Error::UnsupportedCase(format!(
                "{what} is defined for case-full distributions only (got case {})",
                self.case
            )))
        }
    }

    /// Entrywise `(1_D − λ)·a + λ·b`.
    pub fn mix(a: &Self, b: &Self, lambda: Hyperbolic) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        if a.case != b.case {
            return Err(Error::CaseMismatch(format!(
                "cannot mix case {} with case {}",
                a.case, b.case
            )));
        }
        if !(lambda.is_finite()
            && lambda.succeq(Hyperbolic::ZERO)
            && lambda.preceq(Hyperbolic::ONE))
        {
            return Err(Error::LambdaOutOfRange(lambda.to_string()));
        }
        let one_minus = Hyperbolic::ONE - lambda;
        let rho = a
            .rho
            .iter()
            .zip(&b.rho)
            .map(|(&x, &y)| one_minus * x + lambda * y)
            .collect();
        Ok(HyperbolicDistribution { rho, case: a.case })
    }
}

/// Uniform distribution on `n` states.
pub fn uniform(n: usize) -> Result<RealDistribution> {
    RealDistribution::uniform(n)
}

/// `(1/N)·1_D` on `n` states.
pub fn uniform_hyp(n: usize) -> Result<HyperbolicDistribution> {
    HyperbolicDistribution::uniform(n)
}

/// Perturbation recipes for Lesche-stability experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Certainty `(1, 0, …, 0)` spread over the other states.
    CertaintySpread,
    /// Uniform distribution with mass moved onto the first state.
    UniformSpike,
    /// Random distribution with a random zero-sum perturbation.
    RandomSmooth,
}

impl Family {
    pub const ALL: [Family; 3] = [
        Family::CertaintySpread,
        Family::UniformSpike,
        Family::RandomSmooth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::CertaintySpread => "CertaintySpread",
            Family::UniformSpike => "UniformSpike",
            Family::RandomSmooth => "RandomSmooth",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match key.as_str() {
            "certaintyspread" => Ok(Family::CertaintySpread),
            "uniformspike" => Ok(Family::UniformSpike),
            "randomsmooth" => Ok(Family::RandomSmooth),
            _ => Err(Error::InvalidFormat(format!(
                "unknown perturbation family {s:?}"
            ))),
        }
    }
}

/// A base distribution and its perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationPair {
    pub base: RealDistribution,
    pub perturbed: RealDistribution,
    pub family: Family,
    pub delta: f64,
    pub n: usize,
}

/// A hyperbolic base distribution and its perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicPair {
    pub base: HyperbolicDistribution,
    pub perturbed: HyperbolicDistribution,
    pub family: Family,
    pub delta: f64,
    pub n: usize,
}

impl PerturbationPair {
    /// The embedded pair `(P·1_D, P'·1_D)`.
    pub fn embed(&self) -> HyperbolicPair {
        HyperbolicPair {
            base: HyperbolicDistribution::embed(&self.base),
            perturbed: HyperbolicDistribution::embed(&self.perturbed),
            family: self.family,
            delta: self.delta,
            n: self.n,
        }
    }
}

fn check_family_args(n: usize, delta: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::BadSize(format!(
            "perturbation families need N >= 2, got {n}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::BadDelta(delta));
    }
    Ok(())
}

/// Generates the `(P, P')` pair of a family. Only `RandomSmooth` uses `seed`.
pub fn perturbation_family(
    family: Family,
    n: usize,
    delta: f64,
    seed: u64,
) -> Result<PerturbationPair> {
    check_family_args(n, delta)?;
    let mut rng = SeededRng::new(seed);
    let (base, perturbed) = generate(family, n, delta, &mut rng);
    Ok(PerturbationPair {
        base: RealDistribution::new(base)?,
        perturbed: RealDistribution::new(perturbed)?,
        family,
        delta,
        n,
    })
}

/// Hyperbolic pair whose `e1` projections are `perturbation_family(.., seed)`
/// and whose `e2` projections come from an independent stream. For the
/// deterministic families both projections coincide.
pub fn hyperbolic_perturbation_family(
    family: Family,
    n: usize,
    delta: f64,
    seed: u64,
) -> Result<HyperbolicPair> {
    let first = perturbation_family(family, n, delta, seed)?;
    let mut rng = SeededRng::derived(seed, 2);
    let (base2, perturbed2) = generate(family, n, delta, &mut rng);
    let base2 = RealDistribution::new(base2)?;
    let perturbed2 = RealDistribution::new(perturbed2)?;
    Ok(HyperbolicPair {
        base: HyperbolicDistribution::from_projections(&first.base, &base2)?,
        perturbed: HyperbolicDistribution::from_projections(&first.perturbed, &perturbed2)?,
        family,
        delta,
        n,
    })
}

fn generate(family: Family, n: usize, delta: f64, rng: &mut SeededRng) -> (Vec<f64>, Vec<f64>) {
    let half = delta / 2.0;
    match family {
        Family::CertaintySpread => {
            let mut base = vec![0.0; n];
            base[0] = 1.0;
            let mut perturbed = vec![half / (n - 1) as f64; n];
            perturbed[0] = 1.0 - half;
            (base, perturbed)
        }
        Family::UniformSpike => {
            let nf = n as f64;
            let base = vec![1.0 / nf; n];
            let mut perturbed = vec![(1.0 - half) / nf; n];
            perturbed[0] += half;
            (base, perturbed)
        }
        Family::RandomSmooth => random_smooth(n, delta, rng),
    }
}

/// `P` from normalized exponentials. The states are split at random into a
/// non-empty "up" and "down" set; `δ/2` of mass is added to the up set
/// (with random exponential weights) and removed from the down set in
/// proportion to `P`. Because both sets together cover every state, one of
/// them carries at least half the mass; the sets are swapped if needed so
/// the down set can give `δ/2` away without going negative. The result has
/// `‖P − P'‖ = δ` up to rounding.
fn random_smooth(n: usize, delta: f64, rng: &mut SeededRng) -> (Vec<f64>, Vec<f64>) {
    let half = delta / 2.0;
    let raw: Vec<f64> = (0..n).map(|_| rng.exponential()).collect();
    let total: f64 = raw.iter().sum();
    let base: Vec<f64> = raw.iter().map(|x| x / total).collect();

    let mut up: Vec<bool> = (0..n).map(|_| rng.next_u64() >> 63 == 1).collect();
    let forced_up = rng.below(n);
    let forced_down = (forced_up + 1 + rng.below(n - 1)) % n;
    up[forced_up] = true;
    up[forced_down] = false;

    let down_mass: f64 = (0..n).filter(|&s| !up[s]).map(|s| base[s]).sum();
    if down_mass < half {
        for u in up.iter_mut() {
            *u = !*u;
        }
    }
    let down_mass: f64 = (0..n).filter(|&s| !up[s]).map(|s| base[s]).sum();

    let weights: Vec<f64> = up
        .iter()
        .map(|&u| if u { rng.exponential() } else { 0.0 })
        .collect();
    let weight_total: f64 = weights.iter().sum();

    let perturbed = (0..n)
        .map(|s| {
            if up[s] {
                base[s] + half * weights[s] / weight_total
            } else {
                base[s] - half * base[s] / down_mass
            }
        })
        .collect();
    (base, perturbed)
}

/// Random distribution on `n` states from normalized exponentials
/// (uniform on the simplex).
pub fn random_distribution(rng: &mut SeededRng, n: usize) -> Result<RealDistribution> {
    if n == 0 {
        return Err(Error::BadSize("random distribution needs N >= 1".into()));
    }
    let raw: Vec<f64> = (0..n).map(|_| rng.exponential()).collect();
    let total: f64 = raw.iter().sum();
    RealDistribution::new(raw.into_iter().map(|x| x / total).collect())
}

/// Random case-`Full` distribution with independent projections.
pub fn random_hyperbolic_distribution(
    rng: &mut SeededRng,
    n: usize,
) -> Result<HyperbolicDistribution> {
    let p1 = random_distribution(rng, n)?;
    let p2 = random_distribution(rng, n)?;
    HyperbolicDistribution::from_projections(&p1, &p2)
}

/// A distribution read from a file: real or hyperbolic.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Real(RealDistribution),
    Hyperbolic(HyperbolicDistribution),
}

impl Distribution {
    /// The hyperbolic view; real distributions are embedded.
    pub fn to_hyperbolic(&self) -> HyperbolicDistribution {
        match self {
            Distribution::Real(p) => HyperbolicDistribution::embed(p),
            Distribution::Hyperbolic(b) => b.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Distribution::Real(p) => p.len(),
            Distribution::Hyperbolic(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// File formats for distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Json,
    Csv,
}

impl FileFormat {
    /// Guesses from a path extension, falling back to the first
    /// non-whitespace character of the content.
    pub fn detect(path: Option<&str>, content: &str) -> FileFormat {
        let ext = path
            .and_then(|p| p.rsplit_once('.'))
            .map(|(_, e)| e.to_ascii_lowercase());
        match ext.as_deref() {
            Some("json") => FileFormat::Json,
            Some("csv") => FileFormat::Csv,
            _ => match content.trim_start().chars().next() {
                Some('[') | Some('{') => FileFormat::Json,
                _ => FileFormat::Csv,
            },
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HyperbolicFile {
    case: Case,
    rho: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonInput {
    Hyperbolic(HyperbolicFile),
    Pairs(Vec<[f64; 2]>),
    Real(Vec<f64>),
}

fn pairs_to_rho(pairs: &[[f64; 2]]) -> Vec<Hyperbolic> {
    pairs.iter().map(|&[a, b]| Hyperbolic::new(a, b)).collect()
}

/// Parses `{"case": …, "rho": [[x1, x2], …]}`, a bare list of pairs, or a
/// list of reals.
pub fn parse_json(content: &str) -> Result<Distribution> {
    let input: JsonInput =
        serde_json::from_str(content).map_err(|e| Error::InvalidFormat(format!("JSON: {e}")))?;
    Ok(match input {
        JsonInput::Hyperbolic(f) => Distribution::Hyperbolic(HyperbolicDistribution::with_case(
            pairs_to_rho(&f.rho),
            f.case,
        )?),
        JsonInput::Pairs(pairs) => {
            Distribution::Hyperbolic(HyperbolicDistribution::new(pairs_to_rho(&pairs))?)
        }
        JsonInput::Real(p) => Distribution::Real(RealDistribution::new(p)?),
    })
}

/// Parses a CSV with header `p` (real) or `p1,p2` (hyperbolic).
pub fn parse_csv(content: &str) -> Result<Distribution> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(content.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::InvalidFormat(format!("CSV: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::InvalidFormat(format!("CSV: {e}")))?;
        let values = record
            .iter()
            .map(|cell| {
                cell.parse::<f64>().map_err(|_| {
                    Error::InvalidFormat(format!("CSV row {}: {cell:?} is not a number", line + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(values);
    }
    match header
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .as_slice()
    {
        ["p"] => Ok(Distribution::Real(RealDistribution::new(
            rows.into_iter().map(|r| r[0]).collect(),
        )?)),
        ["p1", "p2"] => Ok(Distribution::Hyperbolic(HyperbolicDistribution::new(
            rows.into_iter()
                .map(|r| Hyperbolic::new(r[0], r[1]))
                .collect(),
        )?)),
        other => Err(Error::InvalidFormat(format!(
            "CSV header must be `p` or `p1,p2`, found {:?}",
            other.join(",")
        ))),
    }
}

pub fn parse_distribution(content: &str, format: FileFormat) -> Result<Distribution> {
    match format {
        FileFormat::Json => parse_json(content),
        FileFormat::Csv => parse_csv(content),
    }
}

impl HyperbolicDistribution {
    pub fn to_json(&self) -> String {
        let file = HyperbolicFile {
            case: self.case,
            rho: self.rho.iter().map(|r| [r.x1, r.x2]).collect(),
        };
        serde_json::to_string(&file).expect("distribution serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p1,p2\n");
        for r in &self.rho {
            out.push_str(&format!("{:?},{:?}\n", r.x1, r.x2));
        }
        out
    }
}

impl RealDistribution {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.p).expect("distribution serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p\n");
        for p in &self.p {
            out.push_str(&format!("{p:?}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(x1: f64, x2: f64) -> Hyperbolic {
        Hyperbolic::new(x1, x2)
    }

    #[test]
    fn validate_classifies_cases() {
        let b = HyperbolicDistribution::validate(&[(0.5, 0.25), (0.5, 0.75)]).unwrap();
        assert_eq!(b.case(), Case::Full);
        let b = HyperbolicDistribution::validate(&[(0.3, 0.0), (0.7, 0.0)]).unwrap();
        assert_eq!(b.case(), Case::E1Only);
        let b = HyperbolicDistribution::validate(&[(0.0, 0.3), (0.0, 0.7)]).unwrap();
        assert_eq!(b.case(), Case::E2Only);
    }

    #[test]
    fn validate_rejects() {
        match HyperbolicDistribution::validate(&[(0.5, 0.5), (0.6, 0.5)]) {
            Err(Error::SumInvalid { sum1, sum2 }) => {
                assert!((sum1 - 1.1).abs() < 1e-15);
                assert_eq!(sum2, 1.0);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            HyperbolicDistribution::validate(&[(-0.1, 0.5), (1.1, 0.5)]),
            Err(Error::NegativeComponent {
                index: 0,
                component: 1,
                ..
            })
        ));
        assert!(matches!(
            HyperbolicDistribution::validate(&[(0.5, 1.5), (0.5, -0.5)]),
            Err(Error::ComponentExceedsOne {
                index: 0,
                component: 2,
                ..
            })
        ));
        assert!(matches!(
            HyperbolicDistribution::validate(&[]),
            Err(Error::EmptyDistribution)
        ));
        // sums to 1_D, but mixes pure-e1 and pure-e2 entries
        assert!(matches!(
            HyperbolicDistribution::validate(&[(1.0, 0.0), (0.0, 1.0)]),
            Err(Error::MixedZeroDivisors {
                e1_index: 0,
                e2_index: 1
            })
        ));
        assert!(matches!(
            HyperbolicDistribution::validate(&[(0.5, 0.0), (0.0, 0.5)]),
            Err(Error::MixedZeroDivisors { .. })
        ));
        // E1Only needs exact zeros in e2
        assert!(HyperbolicDistribution::validate(&[(0.3, 1e-12), (0.7, 0.0)]).is_err());
    }

    #[test]
    fn real_validation() {
        assert!(RealDistribution::new(vec![0.5, 0.5]).is_ok());
        assert!(RealDistribution::new(vec![0.5, 0.5 + 5e-10]).is_ok());
        assert!(matches!(
            RealDistribution::new(vec![0.5, 0.6]),
            Err(Error::RealSumInvalid(_))
        ));
        assert_eq!(
            RealDistribution::new(vec![]).unwrap_err(),
            Error::EmptyDistribution
        );
        assert!(RealDistribution::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn embedding_and_uniform() {
        let p = RealDistribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        let (p1, p2) = HyperbolicDistribution::embed(&p).projections().unwrap();
        assert_eq!(p1, p);
        assert_eq!(p2, p);
        assert_eq!(uniform(4).unwrap().probs(), &[0.25; 4]);
        assert_eq!(uniform(1).unwrap().probs(), &[1.0]);
        assert_eq!(uniform_hyp(2).unwrap().rho(), &[Hyperbolic::splat(0.5); 2]);
        assert!(uniform(0).is_err());
    }

    #[test]
    fn projections_by_case() {
        let b = HyperbolicDistribution::validate(&[(0.3, 0.0), (0.7, 0.0)]).unwrap();
        assert!(b.projections().is_err());
        assert_eq!(b.projection(0).unwrap().probs(), &[0.3, 0.7]);
        assert!(matches!(b.projection(1), Err(Error::UnsupportedCase(_))));
    }

    #[test]
    fn mixing() {
        let a = uniform_hyp(2).unwrap();
        let b = HyperbolicDistribution::embed(&RealDistribution::new(vec![1.0, 0.0]).unwrap());
        assert_eq!(
            HyperbolicDistribution::mix(&a, &b, Hyperbolic::ZERO).unwrap(),
            a
        );
        assert_eq!(
            HyperbolicDistribution::mix(&a, &b, Hyperbolic::ONE).unwrap(),
            b
        );
        let m = HyperbolicDistribution::mix(&a, &b, Hyperbolic::splat(0.5)).unwrap();
        assert_eq!(m.rho(), &[Hyperbolic::splat(0.75), Hyperbolic::splat(0.25)]);

        assert!(matches!(
            HyperbolicDistribution::mix(&a, &b, h(1.5, 0.5)),
            Err(Error::LambdaOutOfRange(_))
        ));
        let e1 = HyperbolicDistribution::validate(&[(0.3, 0.0), (0.7, 0.0)]).unwrap();
        assert!(matches!(
            HyperbolicDistribution::mix(&a, &e1, Hyperbolic::splat(0.5)),
            Err(Error::CaseMismatch(_))
        ));
    }

    #[test]
    fn certainty_spread_example() {
        let pair = perturbation_family(Family::CertaintySpread, 3, 0.1, 0).unwrap();
        assert_eq!(pair.base.probs(), &[1.0, 0.0, 0.0]);
        assert_eq!(pair.perturbed.probs(), &[0.95, 0.025, 0.025]);
    }

    #[test]
    fn uniform_spike_example() {
        let pair = perturbation_family(Family::UniformSpike, 2, 0.2, 0).unwrap();
        assert_eq!(pair.base.probs(), &[0.5, 0.5]);
        assert!((pair.perturbed.probs()[0] - 0.55).abs() < 1e-15);
        assert!((pair.perturbed.probs()[1] - 0.45).abs() < 1e-15);
    }

    #[test]
    fn family_argument_checks() {
        assert_eq!(
            perturbation_family(Family::UniformSpike, 4, 0.0, 0).unwrap_err(),
            Error::BadDelta(0.0)
        );
        assert!(matches!(
            perturbation_family(Family::UniformSpike, 4, 1.0, 0),
            Err(Error::BadDelta(_))
        ));
        assert!(matches!(
            perturbation_family(Family::RandomSmooth, 1, 0.1, 0),
            Err(Error::BadSize(_))
        ));
    }

    #[test]
    fn random_smooth_is_seeded() {
        let a = perturbation_family(Family::RandomSmooth, 20, 0.3, 5).unwrap();
        let b = perturbation_family(Family::RandomSmooth, 20, 0.3, 5).unwrap();
        let c = perturbation_family(Family::RandomSmooth, 20, 0.3, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.base, c.base);
        let hp = hyperbolic_perturbation_family(Family::RandomSmooth, 20, 0.3, 5).unwrap();
        assert_eq!(hp.base.component(0), a.base.probs());
        assert_ne!(hp.base.component(1), a.base.probs());
        let hp = hyperbolic_perturbation_family(Family::UniformSpike, 5, 0.3, 5).unwrap();
        assert_eq!(hp.base.component(0), hp.base.component(1));
    }

    #[test]
    fn family_names() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!(
            "certainty-spread".parse::<Family>().unwrap(),
            Family::CertaintySpread
        );
        assert!("gaussian".parse::<Family>().is_err());
    }

    #[test]
    fn random_distributions_are_valid() {
        let mut rng = SeededRng::new(3);
        for n in 1..40 {
            let b = random_hyperbolic_distribution(&mut rng, n).unwrap();
            assert_eq!(b.case(), Case::Full);
            assert!(b.rho().iter().all(|r| r.is_positive()));
        }
        assert!(random_distribution(&mut rng, 0).is_err());
    }

    #[test]
    fn file_formats() {
        let json = r#"{"case": "full", "rho": [[0.5, 0.25], [0.5, 0.75]]}"#;
        let d = parse_json(json).unwrap();
        let Distribution::Hyperbolic(b) = &d else {
            panic!()
        };
        assert_eq!(b.rho(), &[h(0.5, 0.25), h(0.5, 0.75)]);
        assert_eq!(parse_json(&b.to_json()).unwrap(), d);
        assert_eq!(parse_csv(&b.to_csv()).unwrap(), d);

        let d = parse_json("[0.25, 0.75]").unwrap();
        let Distribution::Real(p) = &d else { panic!() };
        assert_eq!(parse_csv(&p.to_csv()).unwrap(), d);
        assert_eq!(parse_json(&p.to_json()).unwrap(), d);

        assert!(matches!(
            parse_json(r#"{"case": "e1", "rho": [[0.5, 0.25], [0.5, 0.75]]}"#),
            Err(Error::CaseMismatch(_))
        ));
        assert!(matches!(parse_csv("q\n1\n"), Err(Error::InvalidFormat(_))));
        assert!(matches!(parse_csv("p\nx\n"), Err(Error::InvalidFormat(_))));
        assert!(matches!(
            parse_csv("p1,p2\n0.5,0.5\n0.6,0.5\n"),
            Err(Error::SumInvalid { .. })
        ));
        assert_eq!(FileFormat::detect(Some("a.JSON"), ""), FileFormat::Json);
        assert_eq!(FileFormat::detect(None, "  {"), FileFormat::Json);
        assert_eq!(FileFormat::detect(None, "p\n1"), FileFormat::Csv);
    }
}
