//! `hamsym`: construct semisymmetric graph instances, decide semisymmetry,
//! produce and verify Hamilton-cycle certificates, and reproduce the
//! tabulated results end to end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hamsym_core::autiso::{self, AutConfig, SemisymmetryDecision};
use hamsym_core::bicoset::{self, BuiltBiCoset};
use hamsym_core::error::Error;
use hamsym_core::graph::{to_graph6, PartsJson, SimpleGraph};
use hamsym_core::hamilton::{
    self, bicayley_coordinates, extend_to_derived, semiregular_from_spec, HamiltonCertificate,
    HamiltonInputs, SolveBudget,
};
use hamsym_core::perm::RandomElements;
use hamsym_core::zoo::{self, TableInstance, ZooOptions};

#[derive(Parser)]
#[command(name = "hamsym", version, about = "Semisymmetric graphs and Hamilton cycles")]
struct Cli {
    #[command(flatten)]
    config: ConfigFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigFlags {
    /// Seed for all randomized searches.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Per-instance time budget for the backtracking solver.
    #[arg(long, global = true)]
    time_budget_ms: Option<u64>,
    /// Per-instance node budget for the backtracking solver.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Vertex cap for automorphism-group computations.
    #[arg(long, global = true)]
    max_auto_vertices: Option<usize>,
    /// Enable the large (PSL(2,59)/PSL(2,61)/sporadic) instances.
    #[arg(long, global = true)]
    allow_heavy: bool,
    /// Report format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output directory for graphs, certificates and reports.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Directory with census graph files.
    #[arg(long, global = true)]
    census_dir: Option<PathBuf>,
    /// Directory with group generator files.
    #[arg(long, global = true)]
    groups_dir: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

/// Full run configuration; `HAMSYM_CONFIG` may point at a JSON file with
/// these fields, and command-line flags override it.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
struct RunConfig {
    seed: u64,
    time_budget_ms: u64,
    node_budget: u64,
    max_auto_vertices: usize,
    allow_heavy: bool,
    format: Format,
    out_dir: PathBuf,
    census_dir: PathBuf,
    groups_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0xC0FFEE,
            time_budget_ms: 60_000,
            node_budget: 100_000_000,
            max_auto_vertices: 1000,
            allow_heavy: false,
            format: Format::Text,
            out_dir: PathBuf::from("out"),
            census_dir: PathBuf::from("data/census"),
            groups_dir: None,
        }
    }
}

impl RunConfig {
    fn load(flags: &ConfigFlags) -> Result<RunConfig, Error> {
        let mut cfg = match std::env::var_os("HAMSYM_CONFIG") {
            Some(path) => {
                let text = std::fs::read_to_string(&path)?;
                serde_json::from_str(&text)?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = flags.seed {
            cfg.seed = v;
        }
        if let Some(v) = flags.time_budget_ms {
            cfg.time_budget_ms = v;
        }
        if let Some(v) = flags.node_budget {
            cfg.node_budget = v;
        }
        if let Some(v) = flags.max_auto_vertices {
            cfg.max_auto_vertices = v;
        }
        if flags.allow_heavy {
            cfg.allow_heavy = true;
        }
        if let Some(v) = flags.format {
            cfg.format = v;
        }
        if let Some(v) = &flags.out_dir {
            cfg.out_dir = v.clone();
        }
        if let Some(v) = &flags.census_dir {
            cfg.census_dir = v.clone();
        }
        if flags.groups_dir.is_some() {
            cfg.groups_dir = flags.groups_dir.clone();
        }
        if cfg.time_budget_ms == 0 || cfg.node_budget == 0 || cfg.max_auto_vertices == 0 {
            return Err(Error::Precondition("budgets must be positive".into()));
        }
        Ok(cfg)
    }

    fn zoo_options(&self) -> ZooOptions {
        ZooOptions {
            allow_heavy: self.allow_heavy,
            seed: self.seed,
            budget: 20_000,
            groups_dir: self.groups_dir.clone(),
        }
    }

    fn solve_budget(&self) -> SolveBudget {
        SolveBudget {
            time_ms: self.time_budget_ms,
            nodes: self.node_budget,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a table instance and write its graph files.
    Construct {
        #[arg(long)]
        table: u8,
        #[arg(long)]
        row: u8,
        /// Valency to realize; omit to construct every achievable valency.
        #[arg(long)]
        valency: Option<u64>,
        /// Prime parameter for the parameterized rows.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Decide semisymmetry of a graph file.
    Check { path: PathBuf },
    /// Find and certify a Hamilton cycle for a graph file or table instance.
    Hamilton {
        path: Option<PathBuf>,
        #[arg(long)]
        table: Option<u8>,
        #[arg(long)]
        row: Option<u8>,
        #[arg(long)]
        valency: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Re-check a certificate against a graph file.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Run a whole reproduction target and emit a report.
    Reproduce {
        /// One of: theorem-1-3, corollary-1-2, census.
        #[arg(long)]
        target: String,
        #[arg(long)]
        max_order: Option<usize>,
    },
}

/// One line of a reproduction report.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct ReportRow {
    source: String,
    order: usize,
    valency: usize,
    constructed: bool,
    semisymmetric: String,
    hamiltonian: String,
    method: String,
    elapsed_ms: u64,
    certificate_path: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::load(&cli.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(4);
        }
    };
    match run(cli.command, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::DigestMismatch { .. } => 2,
        Error::BudgetExhausted { .. } | Error::ConstructionFailed(_) | Error::NotApplicable(_) => 3,
        Error::Gated(_) | Error::Recipe(_) => 4,
        _ => 1,
    }
}

fn run(cmd: Command, cfg: &RunConfig) -> Result<u8, Error> {
    match cmd {
        Command::Construct { table, row, valency, p } => {
            let valencies = match valency {
                Some(v) => vec![v],
                None => zoo::row_valencies(table, row, p, &cfg.zoo_options())?,
            };
            let mut instances = Vec::new();
            for v in valencies {
                instances.extend(zoo::table_instance(table, row, v, p, &cfg.zoo_options())?);
            }
            std::fs::create_dir_all(&cfg.out_dir)?;
            for inst in &instances {
                let valency = inst.valency;
                let (graph, _) = materialize(inst)?;
                let stem = format!("t{table}r{row}v{valency}i{}", inst.index);
                let g6 = cfg.out_dir.join(format!("{stem}.g6"));
                std::fs::write(&g6, to_graph6(&graph) + "\n")?;
                let parts = cfg.out_dir.join(format!("{stem}.parts.json"));
                let u_size = graph
                    .bipartition()
                    .map(|(a, _)| a.len())
                    .expect("bi-coset graphs are bipartite");
                std::fs::write(&parts, serde_json::to_string(&PartsJson { u_size })? + "\n")?;
                println!(
                    "{}: {} vertices, valency {valency}, digest {}",
                    g6.display(),
                    graph.n(),
                    graph.digest()
                );
            }
            Ok(0)
        }
        Command::Check { path } => {
            let census = zoo::load_census_graph(&path)?;
            let report = check_graph(&census.graph, cfg)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(0)
        }
        Command::Hamilton { path, table, row, valency, p } => {
            let (graph, inputs_owner, source) = match (path, table, row, valency) {
                (Some(path), None, None, None) => {
                    let census = zoo::load_census_graph(&path)?;
                    (census.graph, None, path.display().to_string())
                }
                (None, Some(t), Some(r), Some(v)) => {
                    let instances = zoo::table_instance(t, r, v, p, &cfg.zoo_options())?;
                    let inst = instances.into_iter().next().expect("non-empty by contract");
                    let (graph, owner) = materialize(&inst)?;
                    (graph, Some(owner), format!("table{t}/row{r}/valency{v}/i0"))
                }
                _ => {
                    return Err(Error::Precondition(
                        "give either a graph file or --table/--row/--valency".into(),
                    ))
                }
            };
            let recovered = if inputs_owner.is_none() {
                census_semiregular(&graph, cfg)
            } else {
                None
            };
            let inputs = match &inputs_owner {
                Some(o) => o.hamilton_inputs(),
                None => HamiltonInputs {
                    semiregular: recovered.as_ref(),
                    bicayley: None,
                },
            };
            let cert = hamilton::orchestrate(&graph, &inputs, &cfg.solve_budget())?;
            hamilton::verify_certificate(&cert, &graph)?;
            std::fs::create_dir_all(&cfg.out_dir)?;
            let path = cfg
                .out_dir
                .join(format!("cert-{}.json", &cert.graph_digest[..16]));
            std::fs::write(&path, serde_json::to_string_pretty(&cert)?)?;
            println!(
                "{source}: Hamilton cycle on {} vertices via {} ({} ms) -> {}",
                graph.n(),
                cert.method,
                cert.elapsed_ms,
                path.display()
            );
            Ok(0)
        }
        Command::Verify { cert, graph } => {
            let cert: HamiltonCertificate = serde_json::from_str(&std::fs::read_to_string(cert)?)?;
            let census = zoo::load_census_graph(&graph)?;
            hamilton::verify_certificate(&cert, &census.graph)?;
            println!("certificate valid: {} vertices via {}", cert.cycle.len(), cert.method);
            Ok(0)
        }
        Command::Reproduce { target, max_order } => reproduce(&target, max_order, cfg),
    }
}

#[derive(Serialize)]
struct CheckReport {
    order: usize,
    valency: Option<usize>,
    bipartite: bool,
    semisymmetric: String,
    detail: String,
}

fn check_graph(graph: &SimpleGraph, cfg: &RunConfig) -> Result<CheckReport, Error> {
    let bipartite = graph.bipartition().is_some();
    if graph.n() > cfg.max_auto_vertices {
        return Ok(CheckReport {
            order: graph.n(),
            valency: graph.is_regular(),
            bipartite,
            semisymmetric: "assumed-from-paper".into(),
            detail: format!(
                "exceeds max_auto_vertices = {}; semisymmetry not decided here",
                cfg.max_auto_vertices
            ),
        });
    }
    let decision = autiso::is_semisymmetric(
        graph,
        &AutConfig {
            max_vertices: cfg.max_auto_vertices,
        },
    )?;
    let (answer, detail) = match decision {
        SemisymmetryDecision::Yes => ("yes".to_string(), String::new()),
        SemisymmetryDecision::No(w) => ("no".to_string(), format!("{w:?}")),
    };
    Ok(CheckReport {
        order: graph.n(),
        valency: graph.is_regular(),
        bipartite,
        semisymmetric: answer,
        detail,
    })
}

/// Keeps the built bi-coset data alive so HamiltonInputs can borrow from it.
struct InstanceArtifacts {
    semiregular: Option<hamilton::SemiregularAuto>,
    bicayley: Option<hamilton::BiCayleyGraph>,
}

impl InstanceArtifacts {
    fn hamilton_inputs(&self) -> HamiltonInputs<'_> {
        HamiltonInputs {
            semiregular: self.semiregular.as_ref(),
            bicayley: self.bicayley.as_ref(),
        }
    }
}

/// Builds an instance's graph plus whatever structured route inputs apply:
/// table 2 rows get the derived graph and its semiregular automorphism,
/// table 1 rows get bi-Cayley coordinates when a regular metacyclic
/// subgroup exists.
fn materialize(inst: &TableInstance) -> Result<(SimpleGraph, InstanceArtifacts), Error> {
    let built = bicoset::build(&inst.spec)?;
    let mut rand = RandomElements::new(0x5EED ^ ((inst.table as u64) << 8) ^ inst.row as u64);
    if inst.derive {
        let derived = bicoset::derived_graph(&built.graph)?;
        let alpha = semiregular_from_spec(&built, inst.p, 10_000, &mut rand)?;
        let alpha = extend_to_derived(&alpha, built.graph.u_size(), inst.q as usize)?;
        return Ok((
            derived.to_simple(),
            InstanceArtifacts {
                semiregular: Some(alpha),
                bicayley: None,
            },
        ));
    }
    let graph = built.graph.to_simple();
    let semiregular = semiregular_from_spec(&built, inst.p, 10_000, &mut rand).ok();
    let bicayley = bicayley_inputs(&built, inst, &mut rand);
    Ok((
        graph,
        InstanceArtifacts {
            semiregular,
            bicayley,
        },
    ))
}

fn bicayley_inputs(
    built: &BuiltBiCoset,
    inst: &TableInstance,
    rand: &mut RandomElements,
) -> Option<hamilton::BiCayleyGraph> {
    let part = inst.p * inst.q;
    let (_r, t, b) = zoo::regular_metacyclic_in(built, part, 20_000, rand).ok()?;
    let a_action = built.vertex_perm(&t);
    let b_action = built.vertex_perm(&b);
    let w = built.graph.u_size();
    bicayley_coordinates(&built.graph, &a_action, &b_action, 0, w).ok()
}

fn reproduce(target: &str, max_order: Option<usize>, cfg: &RunConfig) -> Result<u8, Error> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    let mut rows = Vec::new();
    match target {
        "theorem-1-3" | "theorem-1.3" => {
            let max_order = max_order.unwrap_or(600);
            // Table 2 instances within the order bound.
            let mut selectors: Vec<(u8, u8, u64, Option<u64>)> = vec![
                (2, 1, 15, None),
                (2, 1, 20, None),
                (2, 4, 10, None),
                (2, 4, 15, None),
                (2, 4, 30, None),
                (2, 5, 20, None),
                (2, 5, 30, None),
                (2, 6, 4, None),
            ];
            for p in [5u64, 7, 11] {
                selectors.push((2, 2, p - 1, Some(p)));
                selectors.push((2, 2, (p - 1) * (p - 2) / 2, Some(p)));
            }
            // Table 1 rows within reach (plus heavy rows when allowed).
            for (row, vals) in [
                (3u8, vec![12u64, 24]),
                (6, vec![12, 24]),
                (7, vec![3, 4, 12, 24]),
                (8, vec![6, 12]),
                (9, vec![3, 4, 12, 24]),
                (12, vec![3, 4, 6, 12, 24]),
            ] {
                for v in vals {
                    selectors.push((1, row, v, None));
                }
            }
            if cfg.allow_heavy {
                for (row, vals) in [
                    (1u8, vec![60u64]),
                    (2, vec![60]),
                    (4, vec![60]),
                    (5, vec![60]),
                    (10, vec![6, 10, 15, 30, 60]),
                    (11, vec![6, 10, 15, 30, 60]),
                ] {
                    for v in vals {
                        selectors.push((1, row, v, None));
                    }
                }
            }
            for (t, r, v, p) in selectors {
                rows.extend(instance_rows(t, r, v, p, max_order, cfg));
            }
        }
        "corollary-1-2" | "corollary-1.2" => {
            for (row, src) in [(7u8, "order-110"), (9, "order-182"), (12, "order-506")] {
                rows.extend(instance_rows(1, row, 3, None, usize::MAX, cfg));
                let _ = src;
            }
            rows.extend(census_rows(cfg, |e| e.valency == 3)?);
        }
        "census" => {
            let max_order = max_order.unwrap_or(768);
            rows.extend(census_rows(cfg, |e| e.order <= max_order)?);
        }
        other => {
            return Err(Error::Precondition(format!(
                "unknown reproduction target {other:?}"
            )))
        }
    }
    rows.sort_by(|a, b| a.source.cmp(&b.source));
    emit_report(&rows, cfg)?;
    let bad = rows
        .iter()
        .filter(|r| r.hamiltonian != "yes" && r.constructed)
        .count();
    Ok(if bad == 0 { 0 } else { 3 })
}

fn instance_rows(
    table: u8,
    row: u8,
    valency: u64,
    p: Option<u64>,
    max_order: usize,
    cfg: &RunConfig,
) -> Vec<ReportRow> {
    let source_base = match p {
        Some(p) => format!("table{table}/row{row}/p{p}/valency{valency}"),
        None => format!("table{table}/row{row}/valency{valency}"),
    };
    let instances = match zoo::table_instance(table, row, valency, p, &cfg.zoo_options()) {
        Ok(i) => i,
        Err(e) => {
            return vec![ReportRow {
                source: source_base,
                order: 0,
                valency: valency as usize,
                constructed: false,
                semisymmetric: "unknown".into(),
                hamiltonian: "unknown".into(),
                method: format!("construction failed: {e}"),
                elapsed_ms: 0,
                certificate_path: String::new(),
            }]
        }
    };
    let mut out = Vec::new();
    for inst in &instances {
        let source = format!("{source_base}/i{}", inst.index);
        let row = instance_row(inst, source, max_order, cfg);
        out.push(row);
    }
    out
}

fn instance_row(
    inst: &TableInstance,
    source: String,
    max_order: usize,
    cfg: &RunConfig,
) -> ReportRow {
    let mut report = ReportRow {
        source,
        order: 0,
        valency: inst.valency as usize,
        constructed: false,
        semisymmetric: "unknown".into(),
        hamiltonian: "unknown".into(),
        method: String::new(),
        elapsed_ms: 0,
        certificate_path: String::new(),
    };
    let (graph, artifacts) = match materialize(inst) {
        Ok(x) => x,
        Err(e) => {
            report.method = format!("construction failed: {e}");
            return report;
        }
    };
    report.order = graph.n();
    if graph.n() > max_order {
        report.method = "skipped: above max order".into();
        return report;
    }
    report.constructed = true;
    report.semisymmetric = if graph.n() > cfg.max_auto_vertices {
        "assumed-from-paper".to_string()
    } else {
        match autiso::is_semisymmetric(
            &graph,
            &AutConfig {
                max_vertices: cfg.max_auto_vertices,
            },
        ) {
            Ok(SemisymmetryDecision::Yes) => "yes".into(),
            Ok(SemisymmetryDecision::No(_)) => "no".into(),
            Err(_) => "unknown".into(),
        }
    };
    match hamilton::orchestrate(&graph, &artifacts.hamilton_inputs(), &cfg.solve_budget()) {
        Ok(cert) => {
            if hamilton::verify_certificate(&cert, &graph).is_ok() {
                let path = cfg
                    .out_dir
                    .join(format!("cert-{}.json", &cert.graph_digest[..16]));
                if let Ok(json) = serde_json::to_string_pretty(&cert) {
                    let _ = std::fs::write(&path, json);
                }
                report.hamiltonian = "yes".into();
                report.method = cert.method.clone();
                report.elapsed_ms = cert.elapsed_ms;
                report.certificate_path = path.display().to_string();
            } else {
                report.hamiltonian = "no".into();
                report.method = "certificate rejected".into();
            }
        }
        Err(e) => {
            report.hamiltonian = "unknown".into();
            report.method = format!("{e}");
        }
    }
    report
}

/// Recovers a prime-order semiregular automorphism from a bare graph so the
/// block-lift route can run on census input, trying larger primes first
/// (fewer, bigger blocks mean a smaller thread search).
fn census_semiregular(
    graph: &SimpleGraph,
    cfg: &RunConfig,
) -> Option<hamilton::SemiregularAuto> {
    if graph.n() > cfg.max_auto_vertices {
        return None;
    }
    let aut = autiso::automorphism_group(
        graph,
        None,
        &AutConfig {
            max_vertices: cfg.max_auto_vertices,
        },
    )
    .ok()?;
    let group =
        hamsym_core::perm::PermGroup::from_generators(graph.n(), aut.generators).ok()?;
    let mut rand = RandomElements::new(cfg.seed);
    let mut primes = prime_factors(group.order());
    primes.sort_unstable_by(|a, b| b.cmp(a));
    for p in primes {
        for _ in 0..4 {
            let Ok(t) = hamsym_core::perm::element_of_order(&group, p, 2_000, &mut rand) else {
                break;
            };
            if let Ok(sa) = hamilton::SemiregularAuto::new(t) {
                return Some(sa);
            }
        }
    }
    None
}

fn prime_factors(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n && d < 1_000_000 {
        if n % d == 0 {
            out.push(d as u64);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 && n <= u64::MAX as u128 {
        out.push(n as u64);
    }
    out
}

fn census_rows(
    cfg: &RunConfig,
    keep: impl Fn(&zoo::CensusEntry) -> bool,
) -> Result<Vec<ReportRow>, Error> {
    let entries = match zoo::load_manifest(&cfg.census_dir) {
        Ok(e) => e,
        Err(_) => return Ok(Vec::new()),
    };
    let mut out = Vec::new();
    for entry in entries.into_iter().filter(keep) {
        let path = cfg.census_dir.join(&entry.file);
        let mut report = ReportRow {
            source: format!("census/{}", entry.file),
            order: entry.order,
            valency: entry.valency,
            constructed: false,
            semisymmetric: "unknown".into(),
            hamiltonian: "unknown".into(),
            method: String::new(),
            elapsed_ms: 0,
            certificate_path: String::new(),
        };
        let census = match zoo::load_census_graph(&path) {
            Ok(c) => c,
            Err(e) => {
                report.method = format!("load failed: {e}");
                out.push(report);
                continue;
            }
        };
        report.constructed = true;
        report.semisymmetric = if census.graph.n() > cfg.max_auto_vertices {
            "assumed-from-paper".into()
        } else {
            match autiso::is_semisymmetric(
                &census.graph,
                &AutConfig {
                    max_vertices: cfg.max_auto_vertices,
                },
            ) {
                Ok(SemisymmetryDecision::Yes) => "yes".into(),
                Ok(SemisymmetryDecision::No(_)) => "no".into(),
                Err(_) => "unknown".into(),
            }
        };
        let recovered = census_semiregular(&census.graph, cfg);
        let inputs = HamiltonInputs {
            semiregular: recovered.as_ref(),
            bicayley: None,
        };
        match hamilton::orchestrate(&census.graph, &inputs, &cfg.solve_budget()) {
            Ok(cert) => {
                let path = cfg
                    .out_dir
                    .join(format!("cert-{}.json", &cert.graph_digest[..16]));
                std::fs::write(&path, serde_json::to_string_pretty(&cert)?)?;
                report.hamiltonian = "yes".into();
                report.method = cert.method.clone();
                report.elapsed_ms = cert.elapsed_ms;
                report.certificate_path = path.display().to_string();
            }
            Err(e) => {
                report.method = format!("{e}");
            }
        }
        out.push(report);
    }
    Ok(out)
}

fn emit_report(rows: &[ReportRow], cfg: &RunConfig) -> Result<(), Error> {
    match cfg.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(rows)?),
        Format::Csv => {
            println!(
                "source,order,valency,constructed,semisymmetric,hamiltonian,method,elapsed_ms,certificate_path"
            );
            for r in rows {
                println!(
                    "{},{},{},{},{},{},{},{},{}",
                    r.source,
                    r.order,
                    r.valency,
                    r.constructed,
                    r.semisymmetric,
                    r.hamiltonian,
                    r.method.replace(',', ";"),
                    r.elapsed_ms,
                    r.certificate_path
                );
            }
        }
        Format::Text => {
            for r in rows {
                println!(
                    "{:<40} n={:<5} val={:<3} semisym={:<18} hamilton={:<8} {} ({} ms)",
                    r.source, r.order, r.valency, r.semisymmetric, r.hamiltonian, r.method,
                    r.elapsed_ms
                );
            }
            let ok = rows.iter().filter(|r| r.hamiltonian == "yes").count();
            println!("-- {ok}/{} instances certified", rows.len());
        }
    }
    let report_path = cfg.out_dir.join("report.json");
    std::fs::write(&report_path, serde_json::to_string_pretty(rows)?)?;
    Ok(())
}
