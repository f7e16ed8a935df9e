//! Command-line driver: batch evaluation of partition functions, Moebius
//! matrices, pairing Gram blocks, cardinalities, Frobenius reports, and the
//! embedded selftest suite. All numeric output carries the exact value; the
//! decimal approximations are advisory only.

mod inputs;
mod report;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pifinite::dw::{
    distinguish, mapping_groupoid, partition_function, sphere_algebra, DwTheory,
    ManifoldDescription,
};
use pifinite::fincat::{cat_linearize, moebius_invert, VecFunctor};
use pifinite::frobenius::{FdAlgebra, FrobeniusAlgebra};
use pifinite::groupoid::PiData;
use pifinite::pairing::{linear_pairing, WeightedVecFunctor};
use pifinite::scalar::{big_rational_approx, Cyclotomic, ExactMatrix};
use pifinite::selftest;
use report::{matrix_csv, matrix_json, scalar_json, Output};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "pifinite", version, about = "exact Dijkgraaf-Witten and homotopy linear algebra computations")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Write machine-readable output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on the homomorphism search space |G|^generators.
    /// Env override: PIFINITE_MAX_HOM_ENUM.
    #[arg(long, global = true)]
    max_hom_enum: Option<u128>,
    /// Worker threads for independent (manifold, theory) evaluations.
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,
    /// Seed for the randomized selftest criteria; identical seeds reproduce
    /// byte-identical reports.
    #[arg(long, global = true, default_value_t = selftest::DEFAULT_SEED)]
    seed: u64,
}

impl RunConfig {
    fn hom_bound(&self) -> u128 {
        self.max_hom_enum
            .or_else(|| std::env::var("PIFINITE_MAX_HOM_ENUM").ok().and_then(|v| v.parse().ok()))
            .unwrap_or(pifinite::dw::DEFAULT_HOM_BOUND)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Dijkgraaf-Witten partition functions and the circle algebra.
    Dw {
        #[command(subcommand)]
        command: DwCommand,
    },
    /// Zeta and Moebius matrices of a finite category.
    Moebius {
        /// Category file (table JSON or {"builtin": "divisor_poset"|"finset", ...}).
        #[arg(long)]
        category: PathBuf,
    },
    /// Pairing computations on weighted categories.
    Pairing {
        #[command(subcommand)]
        command: PairingCommand,
    },
    /// Homotopy cardinalities of groupoids and abstract pi-data.
    Cardinality {
        /// Groupoid file (table JSON, {"bg": ...} or {"action": ...}).
        #[arg(long, conflicts_with = "pi")]
        groupoid: Option<PathBuf>,
        /// Comma-separated homotopy group orders |pi_1|,|pi_2|,...
        #[arg(long)]
        pi: Option<String>,
    },
    /// Semisimplicity and Frobenius reports for an algebra file.
    Frobenius {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Run the embedded acceptance suite and print a pass/fail matrix.
    Selftest {
        /// Run a single criterion (1-16) instead of the full suite.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

#[derive(Subcommand)]
enum DwCommand {
    /// Closed orientable surface of the given genus.
    Surface {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        cocycle: Option<PathBuf>,
    },
    /// Closed manifold with a presented fundamental group.
    Manifold {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        presentation: PathBuf,
    },
    /// The circle algebra DW(S^1) of the 2d theory, with both routes compared.
    SphereAlgebra {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        cocycle: Option<PathBuf>,
    },
    /// Partition a directory of manifolds by a directory of theories.
    Distinguish {
        /// Directory of manifold JSON files.
        #[arg(long)]
        manifolds: PathBuf,
        /// Directory of theory JSON files ({"group": ..., "cocycle": ...?}).
        #[arg(long)]
        theories: PathBuf,
    },
}

#[derive(Subcommand)]
enum PairingCommand {
    /// Gram matrix of the hom-counting pairing on object ranges.
    Gram {
        #[arg(long)]
        category: PathBuf,
        /// Row objects, e.g. "0..6" or "0,2,3".
        #[arg(long)]
        rows: String,
        /// Column objects.
        #[arg(long)]
        cols: String,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {:#}", err);
            if err.to_string().contains("bound") { 3 } else { 2 }
        }
    };
    std::process::exit(code);
}

fn run(cli: &Cli) -> Result<()> {
    let mut output = Output::new(cli.config.out.clone());
    match &cli.command {
        Command::Dw { command } => run_dw(cli, command, &mut output)?,
        Command::Moebius { category } => run_moebius(cli, category, &mut output)?,
        Command::Pairing { command } => run_pairing(cli, command, &mut output)?,
        Command::Cardinality { groupoid, pi } => run_cardinality(cli, groupoid.as_deref(), pi.as_deref(), &mut output)?,
        Command::Frobenius { algebra } => run_frobenius(cli, algebra, &mut output)?,
        Command::Selftest { criterion } => run_selftest(cli, *criterion, &mut output)?,
    }
    output.finish()
}

fn value_report(value: &Cyclotomic, route: &str) -> serde_json::Value {
    let (re, im) = value.approx();
    serde_json::json!({
        "value": scalar_json(value),
        "approx": [re, im],
        "route": route,
    })
}

fn run_dw(cli: &Cli, command: &DwCommand, output: &mut Output) -> Result<()> {
    let bound = cli.config.hom_bound();
    match command {
        DwCommand::Surface { group, genus, cocycle } => {
            let theory = inputs::load_theory(group, cocycle.as_deref())?;
            let m = ManifoldDescription::surface(*genus);
            let z = partition_function(&theory, &m, bound)?;
            match cli.config.format {
                Format::Pretty => output.line(format!(
                    "Z({}; |G| = {}{}) = {}   ~ {:?}",
                    m.label(),
                    theory.group.order(),
                    if theory.twist.is_some() { ", twisted" } else { "" },
                    z.value,
                    z.value.approx()
                )),
                _ => output.json(value_report(&z.value, z.route)),
            }
        }
        DwCommand::Manifold { group, presentation } => {
            let theory = inputs::load_theory(group, None)?;
            let m = inputs::load_manifold(presentation)?;
            let z = partition_function(&theory, &m, bound)?;
            match cli.config.format {
                Format::Pretty => {
                    let data = mapping_groupoid(&m, &theory.group, bound)?;
                    output.line(format!(
                        "Z({}) = {}   ({} homomorphisms, {} components)",
                        m.label(),
                        z.value,
                        data.homs.len(),
                        data.groupoid.components().len()
                    ))
                }
                _ => output.json(value_report(&z.value, z.route)),
            }
        }
        DwCommand::SphereAlgebra { group, cocycle } => {
            let theory = inputs::load_theory(group, cocycle.as_deref())?;
            let report = sphere_algebra(&theory, 2)?;
            match cli.config.format {
                Format::Pretty => {
                    output.line(format!(
                        "DW(S^1): dimension {}, semisimple: {}, window invertible: {}",
                        report.dim, report.semisimple, report.window_invertible
                    ));
                    output.line(format!("regular class representatives: {:?}", report.class_reps));
                    for g in 0..=3usize {
                        let v = report.frobenius.genus_value(g);
                        output.line(format!("  genus {}: {}", g, v));
                    }
                }
                _ => {
                    let genus_table: Vec<serde_json::Value> =
                        (0..=3).map(|g| scalar_json(&report.frobenius.genus_value(g))).collect();
                    output.json(serde_json::json!({
                        "dim": report.dim,
                        "semisimple": report.semisimple,
                        "radical": report.radical,
                        "window_invertible": report.window_invertible,
                        "class_representatives": report.class_reps,
                        "genus_values": genus_table,
                        "route": "span_and_center_agreed",
                    }))
                }
            }
        }
        DwCommand::Distinguish { manifolds, theories } => {
            let manifold_files = inputs::sorted_json_files(manifolds)?;
            let theory_files = inputs::sorted_json_files(theories)?;
            let ms: Vec<(String, ManifoldDescription)> = manifold_files
                .iter()
                .map(|p| Ok((inputs::stem(p), inputs::load_manifold(p)?)))
                .collect::<Result<_>>()?;
            let ts: Vec<(String, DwTheory)> = theory_files
                .iter()
                .map(|p| Ok((inputs::stem(p), inputs::load_theory_file(p)?)))
                .collect::<Result<_>>()?;
            if ms.is_empty() || ts.is_empty() {
                bail!("need at least one manifold and one theory file");
            }
            let manifold_list: Vec<ManifoldDescription> = ms.iter().map(|(_, m)| m.clone()).collect();
            let theory_list: Vec<DwTheory> = ts.iter().map(|(_, t)| t.clone()).collect();
            let report = run_distinguish_parallel(&manifold_list, &theory_list, bound, cli.config.parallel)?;
            match cli.config.format {
                Format::Pretty => {
                    for (bi, block) in report.blocks.iter().enumerate() {
                        let names: Vec<&str> = block.iter().map(|&i| ms[i].0.as_str()).collect();
                        output.line(format!("block {}: {}", bi, names.join(", ")));
                    }
                    for &(a, b, t) in &report.separations {
                        output.line(format!("blocks {} and {} separated by theory {}", a, b, ts[t].0));
                    }
                }
                _ => {
                    output.json(serde_json::json!({
                        "manifolds": ms.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
                        "theories": ts.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
                        "values": report
                            .values
                            .iter()
                            .map(|row| row.iter().map(scalar_json).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                        "blocks": report.blocks,
                        "separations": report.separations,
                    }));
                }
            }
        }
    }
    Ok(())
}

/// Fan the (manifold, theory) grid out over `degree` workers; the grid is
/// pure, so the collected values are deterministic regardless of scheduling.
fn run_distinguish_parallel(
    manifolds: &[ManifoldDescription],
    theories: &[DwTheory],
    bound: u128,
    degree: usize,
) -> Result<pifinite::dw::DistinguishReport> {
    if degree <= 1 {
        return Ok(distinguish(manifolds, theories, bound)?);
    }
    let pairs: Vec<(usize, usize)> = (0..manifolds.len())
        .flat_map(|m| (0..theories.len()).map(move |t| (m, t)))
        .collect();
    let mut values = vec![vec![Cyclotomic::zero(); theories.len()]; manifolds.len()];
    let chunks: Vec<&[(usize, usize)]> = pairs.chunks(pairs.len().div_ceil(degree)).collect();
    let results: Vec<Vec<((usize, usize), Cyclotomic)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                scope.spawn(move || {
                    chunk
                        .iter()
                        .map(|&(m, t)| {
                            let z = partition_function(&theories[t], &manifolds[m], bound)
                                .map(|p| p.value)
                                .unwrap_or_else(|e| panic!("evaluation failed: {}", e));
                            ((m, t), z)
                        })
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for chunk in results {
        for ((m, t), v) in chunk {
            values[m][t] = v;
        }
    }
    // regroup exactly as the serial path does
    let mut blocks: Vec<Vec<usize>> = vec![];
    for i in 0..manifolds.len() {
        match blocks.iter_mut().find(|b| values[b[0]] == values[i]) {
            Some(b) => b.push(i),
            None => blocks.push(vec![i]),
        }
    }
    let mut separations = vec![];
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let (a, b) = (blocks[i][0], blocks[j][0]);
            if let Some(t) = (0..theories.len()).find(|&t| values[a][t] != values[b][t]) {
                separations.push((i, j, t));
            }
        }
    }
    Ok(pifinite::dw::DistinguishReport { blocks, values, separations })
}

fn run_moebius(cli: &Cli, category: &std::path::Path, output: &mut Output) -> Result<()> {
    let cat = inputs::load_category(category)?;
    let f = VecFunctor::constant(&cat, 1);
    let zeta = cat_linearize(&cat, &f);
    let inv = moebius_invert(&cat, &f).map_err(|e| anyhow::anyhow!("{}", e))?;
    let product_is_identity = zeta.matmul(&inv.inverse).is_identity();
    match cli.config.format {
        Format::Pretty => {
            output.line(format!("zeta matrix ({} classes):", zeta.nrows()));
            output.line(matrix_csv(&zeta));
            output.line("moebius matrix:".to_string());
            output.line(matrix_csv(&inv.inverse));
            output.line(format!("product is identity: {}", product_is_identity));
        }
        Format::Csv => {
            output.line(matrix_csv(&zeta));
            output.line(String::new());
            output.line(matrix_csv(&inv.inverse));
        }
        Format::Json => output.json(serde_json::json!({
            "zeta": matrix_json(&zeta),
            "moebius": matrix_json(&inv.inverse),
            "product_is_identity": product_is_identity,
            "max_chain_length": inv.max_chain_length,
        })),
    }
    Ok(())
}

fn parse_range(spec: &str, max: usize) -> Result<Vec<usize>> {
    let spec = spec.trim();
    if let Some((a, b)) = spec.split_once("..") {
        let a: usize = a.parse().context("range start")?;
        let b: usize = b.parse().context("range end")?;
        if b >= max {
            bail!("object {} is outside the category ({} objects)", b, max);
        }
        return Ok((a..=b).collect());
    }
    spec.split(',')
        .map(|s| {
            let i: usize = s.trim().parse().with_context(|| format!("object index {:?}", s))?;
            if i >= max {
                bail!("object {} is outside the category ({} objects)", i, max);
            }
            Ok(i)
        })
        .collect()
}

fn run_pairing(cli: &Cli, command: &PairingCommand, output: &mut Output) -> Result<()> {
    match command {
        PairingCommand::Gram { category, rows, cols } => {
            let wc = inputs::load_weighted_category(category)?;
            let f = WeightedVecFunctor::constant(&wc, 1);
            let row_objs = parse_range(rows, wc.object_count())?;
            let col_objs = parse_range(cols, wc.object_count())?;
            let one_row = ExactMatrix::from_rows(vec![vec![Cyclotomic::one()]]);
            let one_col = ExactMatrix::column(vec![Cyclotomic::one()]);
            let mut m = ExactMatrix::zeros(row_objs.len(), col_objs.len());
            for (i, &d) in row_objs.iter().enumerate() {
                for (j, &c) in col_objs.iter().enumerate() {
                    m[(i, j)] = linear_pairing(&wc, &f, (d, &one_row), (c, &one_col))
                        .map_err(|e| anyhow::anyhow!("{}", e))?;
                }
            }
            let rank = m.rank();
            let det = (m.nrows() == m.ncols()).then(|| m.det());
            match cli.config.format {
                Format::Pretty => {
                    output.line(matrix_csv(&m));
                    output.line(format!("rank: {}", rank));
                    if let Some(d) = &det {
                        output.line(format!("determinant: {}", d));
                    }
                }
                Format::Csv => output.line(matrix_csv(&m)),
                Format::Json => output.json(serde_json::json!({
                    "gram": matrix_json(&m),
                    "rank": rank,
                    "determinant": det.as_ref().map(scalar_json),
                })),
            }
        }
    }
    Ok(())
}

fn run_cardinality(cli: &Cli, groupoid: Option<&std::path::Path>, pi: Option<&str>, output: &mut Output) -> Result<()> {
    if let Some(spec) = pi {
        let orders: Vec<u64> = spec
            .split(',')
            .map(|s| s.trim().parse().with_context(|| format!("pi order {:?}", s)))
            .collect::<Result<_>>()?;
        if orders.contains(&0) {
            bail!("homotopy group orders must be positive");
        }
        let value = PiData::new(orders).homotopy_cardinality();
        match cli.config.format {
            Format::Pretty => output.line(format!("homotopy cardinality: {}", value)),
            _ => output.json(serde_json::json!({
                "value": scalar_json(&Cyclotomic::from_rational(value.clone())),
                "approx": [big_rational_approx(&value), 0.0],
            })),
        }
        return Ok(());
    }
    let Some(path) = groupoid else {
        bail!("pass either --groupoid or --pi");
    };
    let g = inputs::load_groupoid(path)?;
    let comps = g.components();
    let total = g.total_cardinality();
    match cli.config.format {
        Format::Pretty => {
            for (k, c) in comps.iter().enumerate() {
                output.line(format!(
                    "component {}: {} objects, |Aut| = {}, cardinality 1/{}",
                    k,
                    c.objects.len(),
                    c.aut.order(),
                    c.aut.order()
                ));
            }
            output.line(format!("total cardinality: {}", total));
        }
        _ => output.json(serde_json::json!({
            "components": comps
                .iter()
                .map(|c| serde_json::json!({
                    "objects": c.objects.len(),
                    "aut_order": c.aut.order(),
                }))
                .collect::<Vec<_>>(),
            "total": scalar_json(&Cyclotomic::from_rational(total.clone())),
            "approx": [big_rational_approx(&total), 0.0],
        })),
    }
    Ok(())
}

fn run_frobenius(cli: &Cli, path: &std::path::Path, output: &mut Output) -> Result<()> {
    let json = inputs::load_algebra(path)?;
    let algebra = FdAlgebra::from_json(&json).map_err(|e| anyhow::anyhow!("{}", e))?;
    let (semisimple, radical) = algebra.is_semisimple();
    let idempotents = if semisimple && algebra.is_commutative() {
        algebra.central_idempotents().ok().map(|v| v.len())
    } else {
        None
    };
    let window = json
        .counit
        .clone()
        .map(|counit| -> Result<_> {
            let frob = FrobeniusAlgebra::new(algebra.clone(), counit).map_err(|e| anyhow::anyhow!("{}", e))?;
            let genus: Vec<Cyclotomic> = (0..=3).map(|g| frob.genus_value(g)).collect();
            Ok((frob.window_invertible(), genus))
        })
        .transpose()?;
    match cli.config.format {
        Format::Pretty => {
            output.line(format!("dimension {}, semisimple: {}, radical: {}", algebra.dim, semisimple, radical));
            if let Some(n) = idempotents {
                output.line(format!("central idempotents: {}", n));
            }
            if let Some((inv, genus)) = &window {
                output.line(format!("window invertible: {}", inv));
                for (g, v) in genus.iter().enumerate() {
                    output.line(format!("  genus {}: {}", g, v));
                }
            }
        }
        _ => output.json(serde_json::json!({
            "dim": algebra.dim,
            "semisimple": semisimple,
            "radical": radical,
            "central_idempotents": idempotents,
            "window_invertible": window.as_ref().map(|(inv, _)| *inv),
            "genus_values": window.as_ref().map(|(_, genus)| genus.iter().map(scalar_json).collect::<Vec<_>>()),
        })),
    }
    Ok(())
}

fn run_selftest(cli: &Cli, criterion: Option<usize>, output: &mut Output) -> Result<()> {
    let reports = match criterion {
        Some(id) => {
            if !(1..=16).contains(&id) {
                bail!("criterion must be between 1 and 16");
            }
            vec![selftest::run_criterion(id, cli.config.seed)]
        }
        None => selftest::run_all(cli.config.seed),
    };
    let failed = reports.iter().filter(|r| !r.passed).count();
    match cli.config.format {
        Format::Json => output.json(serde_json::json!({
            "seed": cli.config.seed,
            "criteria": reports
                .iter()
                .map(|r| serde_json::json!({
                    "id": r.id,
                    "name": r.name,
                    "passed": r.passed,
                    "details": r.details,
                }))
                .collect::<Vec<_>>(),
            "failed": failed,
        })),
        _ => {
            for r in &reports {
                output.line(format!(
                    "criterion {:2} [{}] {} -- {}",
                    r.id,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.details
                ));
            }
            output.line(format!("{} of {} criteria passed", reports.len() - failed, reports.len()));
        }
    }
    if failed > 0 {
        output.finish()?;
        std::process::exit(1);
    }
    Ok(())
}
