use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hyperentropy::entropy::{parse_order, renyi_hyp, renyi_hyp_limit, strong_shannon_hyp, Measure};
use hyperentropy::probability::{parse_distribution, Case, Distribution, Family, FileFormat};
use hyperentropy::stability::{stability_sweep, MeasureSpec, StabilityRecord, SweepConfig};
use hyperentropy::verify::{run_suite, Fixture};
use hyperentropy::{Error, Hyperbolic};

use crate::args::{Cli, Command, EntropyArgs, Format, LimitsArgs, StabilityArgs, VerifyArgs};
use crate::table::{Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{failed} of {total} invariants failed")]
    Invariants { failed: usize, total: usize },
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Io { .. } => 1,
            Failure::Core(e) if e.is_validation() => 2,
            Failure::Core(_) => 3,
            Failure::Invariants { .. } => 4,
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Fixtures checked by `verify` on every run.
const SHIPPED_FIXTURES: &[(&str, &str)] = &[
    ("fixtures/b.csv", include_str!("../fixtures/b.csv")),
    ("fixtures/b.json", include_str!("../fixtures/b.json")),
    (
        "fixtures/e1_only.json",
        include_str!("../fixtures/e1_only.json"),
    ),
    ("fixtures/half.csv", include_str!("../fixtures/half.csv")),
    (
        "fixtures/three_states.json",
        include_str!("../fixtures/three_states.json"),
    ),
];

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Entropy(args) => entropy(cli, args),
        Command::Stability(args) => stability(cli, args),
        Command::Limits(args) => limits(cli, args),
        Command::Verify(args) => verify(cli, args),
    }
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |source| Failure::Io {
        path: path.display().to_string(),
        source,
    }
}

fn read_input(path: Option<&PathBuf>) -> std::result::Result<(String, Option<String>), Failure> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_error(p))?;
            Ok((text, Some(p.display().to_string())))
        }
        None => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(io_error(Path::new("<stdin>")))?;
            Ok((text, None))
        }
    }
}

fn load_distribution(path: Option<&PathBuf>) -> std::result::Result<Distribution, Failure> {
    let (text, name) = read_input(path)?;
    let format = FileFormat::detect(name.as_deref(), &text);
    Ok(parse_distribution(&text, format)?)
}

fn emit(cli: &Cli, text: &str) -> Outcome {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(io_error(path)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(io_error(Path::new("<stdout>")))
        }
    }
}

/// `name:order` entries; entries without an order fall back to `order`.
fn measure_specs(raw: &[String], order: Option<&str>) -> Result<Vec<MeasureSpec>, Error> {
    let fallback = order.map(parse_order).transpose()?;
    raw.iter()
        .map(|s| match s.split_once(':') {
            Some(_) => s.parse(),
            None => MeasureSpec::new(s.parse()?, fallback),
        })
        .collect()
}

fn parse_list<T: FromStr>(raw: &str, what: &str) -> Result<Vec<T>, Error> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|_| Error::Parse {
                input: s.to_string(),
                reason: format!("not a valid {what}"),
            })
        })
        .collect()
}

fn default_measures(d: &Distribution, order: Option<Hyperbolic>) -> Vec<MeasureSpec> {
    let (plain, ordered): (&[Measure], &[Measure]) = match d {
        Distribution::Real(_) => (
            &[
                Measure::Shannon,
                Measure::Extropy,
                Measure::Hartley,
                Measure::Collision,
            ],
            &[Measure::Renyi, Measure::RenyiExtropy],
        ),
        Distribution::Hyperbolic(b) if b.case() == Case::Full => (
            &[
                Measure::StrongShannonHyp,
                Measure::StrongExtropyHyp,
                Measure::HartleyHyp,
                Measure::CollisionHyp,
            ],
            &[Measure::RenyiHyp, Measure::RenyiExtropyHyp],
        ),
        // only the Shannon measure is defined off the Full case
        Distribution::Hyperbolic(_) => (&[Measure::StrongShannonHyp], &[]),
    };
    let mut specs: Vec<MeasureSpec> = plain.iter().map(|&m| MeasureSpec::plain(m)).collect();
    if let Some(o) = order {
        specs.extend(ordered.iter().map(|&m| MeasureSpec::with_order(m, o)));
    }
    specs
}

fn entropy(cli: &Cli, args: &EntropyArgs) -> Outcome {
    let d = load_distribution(args.input.as_ref())?;
    let specs = if args.measures.is_empty() {
        let order = args.order.as_deref().map(parse_order).transpose()?;
        default_measures(&d, order)
    } else {
        measure_specs(&args.measures, args.order.as_deref())?
    };

    let mut table = Table::new(cli.basis);
    table
        .column("measure")
        .hyp_column("order")
        .hyp_column("value");
    for spec in specs {
        let v = spec.measure.eval(&d, spec.order)?;
        let mut row = vec![Cell::Text(v.measure.to_string())];
        row.extend(table.hyp(v.order));
        row.extend(table.hyp(Some(v.value)));
        table.push(row);
    }
    emit(cli, &table.render(cli.format))
}

fn stability(cli: &Cli, args: &StabilityArgs) -> Outcome {
    let config = SweepConfig {
        families: parse_list::<Family>(&args.families, "family")?,
        n_grid: parse_list(&args.n_grid, "system size")?,
        delta_grid: parse_list(&args.delta_grid, "perturbation size")?,
        measures: measure_specs(&args.measures, args.order.as_deref())?,
        seed: cli.seed,
    };
    // reject bad grid points up front instead of emitting rows of errors
    if let Some(&n) = config.n_grid.iter().find(|&&n| n < 2) {
        return Err(Error::BadSize(format!("N-grid entries must be >= 2, got {n}")).into());
    }
    if let Some(&d) = config.delta_grid.iter().find(|&&d| !(d > 0.0 && d < 1.0)) {
        return Err(Error::BadDelta(d).into());
    }
    let records = stability_sweep(&config)?;
    for r in records.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "warning: {} {} N={} delta={}: {}",
            r.family,
            MeasureSpec {
                measure: r.measure,
                order: r.order
            },
            r.n,
            r.delta,
            r.error.unwrap_or_default()
        );
    }
    emit(cli, &stability_table(cli, &records).render(cli.format))
}

fn stability_table(cli: &Cli, records: &[StabilityRecord]) -> Table {
    let mut table = Table::new(cli.basis);
    table
        .column("family")
        .column("measure")
        .hyp_column("order")
        .column("N")
        .column("delta")
        .hyp_column("norm")
        .hyp_column("ratio");
    for r in records {
        let mut row = vec![
            Cell::Text(r.family.to_string()),
            Cell::Text(r.measure.to_string()),
        ];
        row.extend(table.hyp(r.order));
        row.extend([Cell::Int(r.n), Cell::Num(r.delta)]);
        match r.error {
            Some(code) => row.extend((0..4).map(|_| Cell::Text(format!("error:{code}")))),
            None => {
                row.extend(table.hyp(Some(r.norm)));
                row.extend(table.hyp(Some(r.ratio)));
            }
        }
        table.push(row);
    }
    table
}

/// Orders `1 ∓ 10^-k` for k = 1..=6, closing in on `1_D`.
fn approach_orders() -> impl Iterator<Item = Hyperbolic> {
    (1..=6).flat_map(|k| {
        let t = 10f64.powi(-k);
        [Hyperbolic::splat(1.0 - t), Hyperbolic::splat(1.0 + t)]
    })
}

fn limits(cli: &Cli, args: &LimitsArgs) -> Outcome {
    let b = load_distribution(args.input.as_ref())?.to_hyperbolic();
    let limit = renyi_hyp_limit(&b)?;
    let reference = strong_shannon_hyp(&b);

    let mut table = Table::new(cli.basis);
    table
        .column("row")
        .hyp_column("alpha")
        .hyp_column("value")
        .hyp_column("diff");
    let add = |table: &mut Table, label: &str, alpha: Option<Hyperbolic>, value: Hyperbolic| {
        let mut row = vec![Cell::Text(label.into())];
        row.extend(table.hyp(alpha));
        row.extend(table.hyp(Some(value)));
        row.extend(table.hyp(Some(value - reference)));
        table.push(row);
    };
    for alpha in approach_orders() {
        add(&mut table, "renyi_hyp", Some(alpha), renyi_hyp(&b, alpha)?);
    }
    add(&mut table, "limit", Some(Hyperbolic::ONE), limit.direct);
    add(
        &mut table,
        "lhopital",
        Some(Hyperbolic::ONE),
        limit.lhopital.rhs,
    );
    add(&mut table, "strong_shannon_hyp", None, reference);
    emit(cli, &table.render(cli.format))?;

    if limit.max_gap() >= args.tol {
        return Err(Error::NonConvergent(format!(
            "limit routes differ from S_f by {:e}, tolerance {:e}",
            limit.max_gap(),
            args.tol
        ))
        .into());
    }
    Ok(())
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Outcome {
    let mut fixtures: Vec<Fixture> = SHIPPED_FIXTURES
        .iter()
        .map(|&(name, content)| Fixture {
            name: name.into(),
            content: content.into(),
            format: FileFormat::detect(Some(name), content),
        })
        .collect();
    for path in &args.inputs {
        let content = fs::read_to_string(path).map_err(io_error(path))?;
        let name = path.display().to_string();
        fixtures.push(Fixture {
            format: FileFormat::detect(Some(&name), &content),
            name,
            content,
        });
    }

    let results = run_suite(cli.seed, &fixtures);
    let failed = results.iter().filter(|r| !r.passed).count();
    let report = match cli.format {
        Format::Csv => {
            let mut out: String = results.iter().map(|r| r.line() + "\n").collect();
            out += &format!(
                "{} of {} invariants passed\n",
                results.len() - failed,
                results.len()
            );
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = results
                .iter()
                .map(|r| serde_json::json!({ "name": r.name, "passed": r.passed, "detail": r.detail }))
                .collect();
            serde_json::to_string_pretty(&rows).expect("plain values serialize") + "\n"
        }
    };
    emit(cli, &report)?;
    if failed > 0 {
        return Err(Failure::Invariants {
            failed,
            total: results.len(),
        });
    }
    Ok(())
}
