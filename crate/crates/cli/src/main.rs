mod config;
mod render;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use stringc_core::cache::{TableCache, CACHE_ENV};
use stringc_core::catalog::{self, catalog_specs, rows, spec, specs, Family, FamilySpec};
use stringc_core::fp::{default_limit, group_order, FpPresentation};
use stringc_core::involutions::{involution_row, published};
use stringc_core::iso::{find_isomorphism, fingerprint, known_maps, parameter_sweep, verify_known_map};
use stringc_core::report::{classify, involution_table_check, ClassificationReport};
use stringc_core::stringc::{type_string, verify_theorem, TheoremReport};
use stringc_core::structure::structure_report;
use stringc_core::subgroups::rank;
use stringc_core::{Error, GroupInstance, Verdict};

use config::FileConfig;
use render::{emit, json, status, verdict_table, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

/// Why a command did not succeed; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Mismatch(String),
    Engine(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Mismatch(_) => 2,
            Failure::Engine(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage error: {msg}"),
            Failure::Mismatch(msg) => write!(f, "verification mismatch: {msg}"),
            Failure::Engine(msg) => write!(f, "engine error: {msg}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownFamily(_)
            | Error::UnknownRow { .. }
            | Error::ParamCount { .. }
            | Error::UnsupportedM { .. }
            | Error::Parse { .. }
            | Error::UnknownGenerator(_) => Failure::Usage(e.to_string()),
            other => Failure::Engine(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

/// Inclusive range of `m`, written `7` or `7..9`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct MRange {
    lo: u32,
    hi: u32,
}

impl FromStr for MRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("`{s}` is not an m or m-range"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => (parse(s)?, parse(s)?),
        };
        if lo > hi || lo < 5 || hi > 10 {
            return Err(format!("m-range {lo}..{hi} must lie within 5..10"));
        }
        Ok(MRange { lo, hi })
    }
}

impl MRange {
    fn values(self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "stringc",
    version,
    about = "Construct the 2-groups of large exponent and classify their string C-group structures"
)]
struct Cli {
    /// Flat `key = value` file (format, workers, cache_dir, seed, verbosity).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format [default: md].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Cayley table cache; also read from STRINGC_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Seed for sampled associativity checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List or build catalog rows.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Central and non-central involutions, shaped like the published table.
    Involutions(InvolutionArgs),
    /// Classify every catalog group; exit 2 if the winners differ from the expected pair.
    Classify(MArgs),
    /// Check every part of the classification; exit 2 unless all parts hold.
    VerifyTheorem(MArgs),
    /// Sweep a family's parameter ranges and split the groups into isomorphism classes.
    Sweep(SweepArgs),
    /// Finitely presented groups.
    #[command(subcommand)]
    Fp(FpCommand),
    /// Subgroup embeddings and product decompositions.
    Decompose(MArgs),
    /// Isomorphisms between catalog rows.
    #[command(subcommand)]
    Iso(IsoCommand),
    /// Associativity and permutation-oracle checks of the built tables.
    EngineCheck(EngineArgs),
}

#[derive(Args, Debug)]
struct MArgs {
    #[arg(long, default_value = "7")]
    m: MRange,
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    List {
        #[arg(long, value_parser = parse_family)]
        family: Option<Family>,
        #[arg(long, default_value_t = 7)]
        m: u32,
        /// Include rows that duplicate another row.
        #[arg(long)]
        all: bool,
    },
    Build {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 7)]
        m: u32,
        /// Use the row's original parameters.
        #[arg(long)]
        historical: bool,
    },
}

#[derive(Args, Debug)]
struct InvolutionArgs {
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long, requires = "family")]
    n: Option<u32>,
    #[arg(long, default_value_t = 7)]
    m: u32,
    /// Exit 2 if a row differs from the published counts.
    #[arg(long)]
    check: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, default_value_t = 7)]
    m: u32,
    /// Write the full class report as JSON to this path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// `s0, s1, s2` involutions with `(s0 s1)^4`, `(s1 s2)^(2^(m-3))`,
    /// `(s0 s2)^2` and the `e`-dependent relator.
    Coxeter,
}

#[derive(Subcommand, Debug)]
enum FpCommand {
    /// Order by coset enumeration over the trivial subgroup.
    Order {
        #[arg(long, value_enum, conflicts_with = "file", required_unless_present = "file")]
        preset: Option<Preset>,
        /// One relator per line, optionally after a `gens: a b` line.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        e: u32,
        #[arg(long)]
        max_cosets: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum IsoCommand {
    /// Check the maps that identify the duplicate rows.
    Known(MArgs),
    /// Search for an isomorphism between two rows.
    Find {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        source: u32,
        #[arg(long)]
        target: u32,
        /// Family of the target row, when it differs.
        #[arg(long, value_parser = parse_family)]
        target_family: Option<Family>,
        #[arg(long, default_value_t = 7)]
        m: u32,
    },
}

#[derive(Args, Debug)]
struct EngineArgs {
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long, default_value_t = 7)]
    m: u32,
    /// Random triples per group; exhaustive when omitted.
    #[arg(long)]
    samples: Option<u64>,
}

struct Context {
    format: Format,
    cache: Option<TableCache>,
    seed: u64,
    verbosity: u8,
}

impl Context {
    fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let file = match &cli.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        if let Some(workers) = cli.workers.or(file.workers) {
            if workers == 0 {
                return Err(Failure::Usage("--workers must be positive".into()));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build_global()
                .map_err(|e| Failure::Engine(e.to_string()))?;
        }
        let cache = if cli.no_cache {
            None
        } else {
            cli.cache_dir
                .clone()
                .map(TableCache::new)
                .or_else(TableCache::from_env)
                .or_else(|| file.cache_dir.clone().map(TableCache::new))
        };
        Ok(Context {
            format: cli.format.or(file.format).unwrap_or(Format::Md),
            cache,
            seed: cli.seed.or(file.seed).unwrap_or(0),
            verbosity: cli.verbose.max(file.verbosity.unwrap_or(0)),
        })
    }

    fn build(&self, s: &FamilySpec) -> Result<GroupInstance, Failure> {
        let built = match &self.cache {
            Some(cache) => cache.build(s),
            None => catalog::build(s),
        };
        built.map_err(|e| match e {
            Error::OrderMismatch { .. } => Failure::Engine(format!("{}: {e}", s.label())),
            other => other.into(),
        })
    }

    fn build_all(&self, list: Vec<FamilySpec>) -> Result<Vec<(FamilySpec, GroupInstance)>, Failure> {
        let built: Vec<Result<GroupInstance, Failure>> = list.par_iter().map(|s| self.build(s)).collect();
        list.into_iter().zip(built).map(|(s, g)| g.map(|g| (s, g))).collect()
    }

    fn log(&self, level: u8, msg: impl fmt::Display) {
        if self.verbosity >= level {
            eprintln!("{msg}");
        }
    }
}

fn selected_specs(family: Option<Family>, n: Option<u32>, m: u32) -> Result<Vec<FamilySpec>, Failure> {
    Ok(match (family, n) {
        (Some(f), Some(n)) => vec![spec(f, n, m, false)?],
        (Some(f), None) => specs(f, m, false)?,
        (None, _) => catalog_specs(m, false)?,
    })
}

fn params_text(params: &[i64]) -> String {
    format!("({})", params.iter().map(i64::to_string).collect::<Vec<_>>().join(", "))
}

fn catalog_command(ctx: &Context, cmd: &CatalogCommand) -> Outcome {
    match cmd {
        CatalogCommand::List { family, m, all } => {
            let families: Vec<Family> = family.map_or_else(|| Family::CLASSIFIED.to_vec(), |f| vec![f]);
            let mut listed = Vec::new();
            for f in families {
                listed.extend(specs(f, *m, *all)?);
            }
            let mut t = Table::new(&["group", "family", "n", "parameters", "u", "provenance", "duplicate of"]);
            for s in &listed {
                t.push(vec![
                    s.label(),
                    s.family.to_string(),
                    s.n.to_string(),
                    params_text(&s.params),
                    s.u.to_string(),
                    format!("{:?}", s.meta.provenance).to_lowercase(),
                    s.meta.duplicate_of.map(|d| d.to_string()).unwrap_or_default(),
                ]);
            }
            emit(ctx.format, &listed, &t, "")
        }
        CatalogCommand::Build { family, n, m, historical } => {
            if !rows(*family).iter().any(|r| r.n == *n) {
                return Err(Error::UnknownRow { family: family.to_string(), index: *n }.into());
            }
            let s = spec(*family, *n, *m, *historical)?;
            let g = ctx.build(&s)?;
            #[derive(Serialize)]
            struct Built {
                group: String,
                order: usize,
                exponent: u32,
                rank: usize,
                center_order: usize,
                generators: Vec<String>,
            }
            let built = Built {
                group: s.label(),
                order: g.order(),
                exponent: g.exponent(),
                rank: rank(&g),
                center_order: g.center().len(),
                generators: g.generators().iter().map(|(name, _)| name.clone()).collect(),
            };
            let mut t = Table::new(&["group", "order", "exponent", "rank", "center order", "generators"]);
            t.push(vec![
                built.group.clone(),
                built.order.to_string(),
                built.exponent.to_string(),
                built.rank.to_string(),
                built.center_order.to_string(),
                built.generators.join(" "),
            ]);
            emit(ctx.format, &built, &t, "")
        }
    }
}

fn involutions_command(ctx: &Context, args: &InvolutionArgs) -> Outcome {
    let groups = ctx.build_all(selected_specs(args.family, args.n, args.m)?)?;
    let records: Vec<_> = groups.par_iter().map(|(s, g)| involution_row(s, g)).collect();
    let mut t = Table::new(&["group", "central", "non-central", "total", "count", "φ_X", "published"]);
    for ((s, _), r) in groups.iter().zip(&records) {
        t.push(vec![
            r.group.clone(),
            r.central.join(", "),
            r.noncentral.join(", "),
            (r.central_count + r.noncentral_count).to_string(),
            r.count.clone(),
            r.phi.clone().unwrap_or_default(),
            published(s.family, s.n).map(|p| p.shape()).unwrap_or_default(),
        ]);
    }
    let out = emit(ctx.format, &records, &t, "")?;
    if args.check {
        let v = involution_table_check(&groups);
        if !v.pass() {
            print!("{out}");
            let failed: Vec<String> = v.failures().map(|c| format!("{} ({})", c.name, c.detail)).collect();
            return Err(Failure::Mismatch(failed.join("; ")));
        }
    }
    Ok(out)
}

fn classify_command(ctx: &Context, args: &MArgs) -> Outcome {
    let mut reports: Vec<ClassificationReport> = Vec::new();
    for m in args.m.values() {
        let groups = ctx.build_all(catalog_specs(m, false)?)?;
        ctx.log(1, format_args!("classifying {} groups at m = {m}", groups.len()));
        reports.push(classify(m, &groups));
    }
    let mut t = Table::new(&[
        "group",
        "order",
        "exponent",
        "rank",
        "involutions",
        "generated by involutions",
        "violations",
        "certificates",
        "types",
    ]);
    let mut notes = String::new();
    for r in &reports {
        for rec in &r.records {
            let label = spec(rec.family, rec.n, rec.m, false).map(|s| s.label()).unwrap_or_default();
            t.push(vec![
                label,
                rec.order.to_string(),
                rec.exponent.to_string(),
                rec.rank.to_string(),
                format!("{} + {}", rec.involutions.central, rec.involutions.noncentral),
                if rec.generated_by_involutions {
                    "yes".into()
                } else {
                    rec.phi.clone().map(|x| format!("no, φ_{{{}}}", x.join(","))).unwrap_or("no".into())
                },
                rec.violations.as_ref().map(|v| serde_json::to_string(v).unwrap_or_default()).unwrap_or_default(),
                rec.certificates.to_string(),
                rec.schlafli_types.join(" "),
            ]);
        }
        notes.push_str(&format!(
            "\nm = {}: {} groups, {} generated by involutions, winners {} ({})\n",
            r.m,
            r.summary.groups,
            r.summary.generated_by_involutions,
            r.summary.winners.join(", "),
            if r.summary.matches_expected { "as expected" } else { "UNEXPECTED" },
        ));
    }
    let out = if reports.len() == 1 && ctx.format == Format::Json {
        json(&reports[0])?
    } else {
        emit(ctx.format, &reports, &t, &notes)?
    };
    match reports.iter().find(|r| !r.summary.matches_expected) {
        Some(r) => {
            print!("{out}");
            Err(Failure::Mismatch(format!(
                "m = {}: winners {:?}, expected {:?}",
                r.m, r.summary.winners, r.summary.expected_winners
            )))
        }
        None => Ok(out),
    }
}

fn theorem_command(ctx: &Context, args: &MArgs) -> Outcome {
    let reports: Vec<TheoremReport> = args.m.values().map(verify_theorem).collect::<Result<_, _>>()?;
    let parts: Vec<&Verdict> = reports.iter().flat_map(|r| r.parts.iter()).collect();
    let mut t = verdict_table(&parts);
    for r in &reports {
        for o in &r.gamma {
            let types: Vec<String> = o.types.iter().map(|x| type_string(x)).collect();
            t.push(vec![
                format!("Γ at m = {}", r.m),
                o.group.clone(),
                if o.certificates > 0 { "string C-group".into() } else { "none".into() },
                types.join(" "),
            ]);
        }
    }
    let mut notes = String::new();
    for r in &reports {
        let winners = if r.winners.is_empty() { "-".to_string() } else { r.winners.join(", ") };
        notes.push_str(&format!("\nm = {}: {} (connected string C-groups: {winners})\n", r.m, status(r.pass())));
        if let Some(small) = &r.small {
            let types: Vec<String> = small.types.iter().map(|x| type_string(x)).collect();
            notes.push_str(&format!(
                "  small orders: {} group(s) of type {}\n",
                small.distinct_groups,
                types.join(" ")
            ));
        }
    }
    let out = emit(ctx.format, &reports, &t, &notes)?;
    match reports.iter().find(|r| !r.pass()) {
        Some(r) => {
            print!("{out}");
            Err(Failure::Mismatch(format!("classification at m = {} does not hold", r.m)))
        }
        None => Ok(out),
    }
}

fn sweep_command(ctx: &Context, args: &SweepArgs) -> Outcome {
    let report = parameter_sweep(args.family, args.m)?;
    if let Some(path) = &args.report {
        fs::write(path, json(&report)?).map_err(|e| Failure::Engine(format!("{}: {e}", path.display())))?;
    }
    let mut t = Table::new(&["class", "representative", "u", "members", "row"]);
    for (i, c) in report.classes.iter().enumerate() {
        let row = match (&c.catalog_row, &c.elsewhere) {
            (Some(n), _) => format!("{},{n}", report.family),
            (None, Some(other)) => format!("{other} (other family)"),
            (None, None) => "-".into(),
        };
        t.push(vec![
            (i + 1).to_string(),
            params_text(&c.representative.params),
            c.representative.u.to_string(),
            c.members.len().to_string(),
            row,
        ]);
    }
    let notes = format!(
        "\n{} tuples, {} of order 2^{} and exponent as required, {} new classes, perfect matching: {}\n",
        report.tuples,
        report.valid,
        report.m,
        report.new_classes(),
        report.perfect_matching()
    );
    let out = emit(ctx.format, &report, &t, &notes)?;
    if !report.perfect_matching() {
        print!("{out}");
        return Err(Failure::Mismatch(format!(
            "{} new classes against {} rows, unmatched rows {:?}",
            report.new_classes(),
            specs(args.family, args.m, false)?.len(),
            report.unmatched_rows
        )));
    }
    Ok(out)
}

fn fp_command(ctx: &Context, cmd: &FpCommand) -> Outcome {
    let FpCommand::Order { preset, file, m, e, max_cosets } = cmd;
    let pres = match (preset, file) {
        (Some(Preset::Coxeter), _) => FpPresentation::coxeter_quotient(*m, *e)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|err| Failure::Usage(format!("{}: {err}", path.display())))?;
            FpPresentation::parse(&text)?
        }
        (None, None) => return Err(Failure::Usage("give --preset or --file".into())),
    };
    let limit = max_cosets.unwrap_or_else(|| default_limit(*m));
    let order = group_order(&pres, limit)?;
    #[derive(Serialize)]
    struct Order {
        generators: Vec<String>,
        relators: Vec<String>,
        order: usize,
    }
    let result = Order {
        generators: pres.generators.clone(),
        relators: pres.relators.iter().map(|r| r.to_string()).collect(),
        order,
    };
    let mut t = Table::new(&["generators", "relators", "order"]);
    t.push(vec![result.generators.join(" "), result.relators.join("; "), order.to_string()]);
    emit(ctx.format, &result, &t, "")
}

fn decompose_command(ctx: &Context, args: &MArgs) -> Outcome {
    let reports = args.m.values().map(structure_report).collect::<Result<Vec<_>, _>>()?;
    let verdicts: Vec<&Verdict> = reports
        .iter()
        .flat_map(|r| r.embeddings.iter().chain(&r.decompositions).chain(&r.winners).chain(&r.presentations))
        .collect();
    let t = verdict_table(&verdicts);
    let notes: String = reports.iter().map(|r| format!("\nm = {}: {}\n", r.m, status(r.pass()))).collect();
    let out = emit(ctx.format, &reports, &t, &notes)?;
    match reports.iter().find(|r| !r.pass()) {
        Some(r) => {
            print!("{out}");
            Err(Failure::Mismatch(format!("structure claims at m = {} do not hold", r.m)))
        }
        None => Ok(out),
    }
}

fn iso_command(ctx: &Context, cmd: &IsoCommand) -> Outcome {
    match cmd {
        IsoCommand::Known(args) => {
            let mut verdicts = Vec::new();
            for m in args.m.values() {
                for map in known_maps(m) {
                    verdicts.push(verify_known_map(&map, m)?);
                }
            }
            let t = verdict_table(&verdicts.iter().collect::<Vec<_>>());
            let out = emit(ctx.format, &verdicts, &t, "")?;
            if verdicts.iter().all(Verdict::pass) {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Mismatch("a known map is not an isomorphism".into()))
            }
        }
        IsoCommand::Find { family, source, target, target_family, m } => {
            let a_spec = spec(*family, *source, *m, false)?;
            let b_spec = spec(target_family.unwrap_or(*family), *target, *m, false)?;
            let (a, b) = (ctx.build(&a_spec)?, ctx.build(&b_spec)?);
            let witness = find_isomorphism(&a, &b);
            #[derive(Serialize)]
            struct Found {
                source: String,
                target: String,
                isomorphic: bool,
                images: Vec<(String, String)>,
            }
            let found = Found {
                source: a_spec.label(),
                target: b_spec.label(),
                isomorphic: witness.is_some(),
                images: witness
                    .map(|w| a.generators().iter().map(|(n, _)| n.clone()).zip(w.image_words).collect())
                    .unwrap_or_default(),
            };
            let mut t = Table::new(&["source", "target", "isomorphic", "images"]);
            let images: Vec<String> = found.images.iter().map(|(x, y)| format!("{x} -> {y}")).collect();
            t.push(vec![found.source.clone(), found.target.clone(), found.isomorphic.to_string(), images.join(", ")]);
            if ctx.verbosity > 0 && !found.isomorphic {
                ctx.log(1, format_args!("fingerprints equal: {}", fingerprint(&a) == fingerprint(&b)));
            }
            emit(ctx.format, &found, &t, "")
        }
    }
}

fn engine_command(ctx: &Context, args: &EngineArgs) -> Outcome {
    let groups = ctx.build_all(selected_specs(args.family, None, args.m)?)?;
    #[derive(Serialize)]
    struct EngineRow {
        group: String,
        triples: u64,
        exhaustive: bool,
        associative: bool,
        permutation_oracle: bool,
    }
    let rows: Vec<EngineRow> = groups
        .par_iter()
        .map(|(s, g)| {
            let assoc = match args.samples {
                Some(k) => g.check_associativity(Some(k), ctx.seed),
                None => g.check_associativity_default(ctx.seed),
            };
            EngineRow {
                group: s.label(),
                triples: assoc.triples_checked,
                exhaustive: assoc.exhaustive,
                associative: assoc.failure.is_none(),
                permutation_oracle: g.permutation_oracle(),
            }
        })
        .collect();
    let mut t = Table::new(&["group", "triples", "exhaustive", "associative", "permutation oracle"]);
    for r in &rows {
        t.push(vec![
            r.group.clone(),
            r.triples.to_string(),
            r.exhaustive.to_string(),
            status(r.associative).into(),
            status(r.permutation_oracle).into(),
        ]);
    }
    let out = emit(ctx.format, &rows, &t, "")?;
    match rows.iter().find(|r| !r.associative || !r.permutation_oracle) {
        Some(r) => {
            print!("{out}");
            Err(Failure::Mismatch(format!("{} fails the table checks", r.group)))
        }
        None => Ok(out),
    }
}

fn run(cli: &Cli) -> Outcome {
    let ctx = Context::from_cli(cli)?;
    if let Some(cache) = &ctx.cache {
        ctx.log(2, format_args!("cache: {} (from --cache-dir, {CACHE_ENV} or config)", cache.dir().display()));
    }
    let out = match &cli.command {
        Command::Catalog(cmd) => catalog_command(&ctx, cmd),
        Command::Involutions(args) => involutions_command(&ctx, args),
        Command::Classify(args) => classify_command(&ctx, args),
        Command::VerifyTheorem(args) => theorem_command(&ctx, args),
        Command::Sweep(args) => sweep_command(&ctx, args),
        Command::Fp(cmd) => fp_command(&ctx, cmd),
        Command::Decompose(args) => decompose_command(&ctx, args),
        Command::Iso(cmd) => iso_command(&ctx, cmd),
        Command::EngineCheck(args) => engine_command(&ctx, args),
    };
    if let Some(cache) = &ctx.cache {
        ctx.log(1, format_args!("cache hits {}, misses {}", cache.hits(), cache.misses()));
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("stringc: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
