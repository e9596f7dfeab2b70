use biprox::boxalgebra::{BoxContext, CoproductTable, Side, Vector};
use biprox::catalog::{catalog, parse_group_spec, parse_subgroup_spec};
use biprox::fusionring::parse_fusion_text;
use biprox::interval::{subgroup_label, Inclusion};
use biprox::linalg::C64;
use biprox::permgroup::{FiniteGroup, Subgroup, DEFAULT_ORDER_CAP};
use biprox::properties::{classify, ClassifyOptions};
use biprox::reference::{deviation, match_up_to_relabeling, s3_matrix_unit_basis, ReferenceTable};
use biprox::survey::{run_survey, SurveyOptions, DEFAULT_MAX_INDEX};
use biprox::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::process::ExitCode;
use std::sync::Arc;

const SCHEMA: &str = "biprox/1";
/// Reference tables are compared at this entrywise tolerance.
const REFERENCE_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(
    name = "biprox",
    version,
    about = "Intermediate lattices and 2-box algebras of group-subgroup subfactors"
)]
struct Cli {
    /// Output format; each command has its own default
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Refuse groups larger than this
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    max_order: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Primal,
    Dual,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Primal => Side::Primal,
            SideArg::Dual => Side::Dual,
        }
    }
}

#[derive(Args, Debug)]
struct Pair {
    /// Catalog name or `perm:` followed by generators in cycle notation
    #[arg(long)]
    group: String,
    /// `trivial`, `whole`, or generators in cycle notation
    #[arg(long, default_value = "trivial")]
    subgroup: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in groups
    Catalog,
    /// Classify an inclusion on both sides
    Analyze {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Coproduct table of the 2-box space on one side
    Table {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, default_value = "primal")]
        side: SideArg,
        /// Compare against the built-in closed-form table for this inclusion
        #[arg(long, alias = "check-paper")]
        check_reference: bool,
    },
    /// Classify every catalog inclusion of bounded index, one row per equivalence class
    Survey {
        #[arg(long, default_value_t = DEFAULT_MAX_INDEX)]
        max_index: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the summary JSON here (CSV output only)
        #[arg(long)]
        summary: Option<std::path::PathBuf>,
    },
    /// Hasse diagram of the intermediate subgroup lattice
    Lattice {
        #[command(flatten)]
        pair: Pair,
    },
    /// Check the axioms of a fusion ring given as a text tensor
    FusionCheck { file: std::path::PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Catalog => cmd_catalog(cli.format.unwrap_or(Format::Text)),
        Command::Analyze { pair, seed } => cmd_analyze(cli, pair, *seed),
        Command::Table {
            pair,
            side,
            check_reference,
        } => cmd_table(cli, pair, (*side).into(), *check_reference),
        Command::Survey {
            max_index,
            jobs,
            seed,
            summary,
        } => cmd_survey(cli, *max_index, *jobs, *seed, summary.as_deref()),
        Command::Lattice { pair } => cmd_lattice(cli, pair),
        Command::FusionCheck { file } => cmd_fusion(cli, file),
    }
}

fn unsupported(format: Format, command: &str) -> Error {
    Error::Parse {
        pos: 0,
        msg: format!("format {format:?} is not available for `{command}`").to_lowercase(),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn load(cli: &Cli, pair: &Pair) -> Result<(Arc<FiniteGroup>, Subgroup, String)> {
    let spec = parse_group_spec(&pair.group)?;
    let group = FiniteGroup::from_generators_capped(&spec.generators, cli.max_order)?;
    let sub = parse_subgroup_spec(&group, &pair.subgroup)?;
    let label = format!("{}/{}", spec.label, subgroup_label(&group, &sub));
    Ok((Arc::new(group), sub, label))
}

fn cmd_catalog(format: Format) -> Result<String> {
    let entries = catalog();
    match format {
        Format::Text => Ok(entries
            .iter()
            .map(|e| format!("{:<10} {}\n", e.name, e.order))
            .collect()),
        Format::Csv => Ok(std::iter::once("name,order\n".to_string())
            .chain(entries.iter().map(|e| format!("\"{}\",{}\n", e.name, e.order)))
            .collect()),
        Format::Json => {
            let groups: Vec<Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "order": e.order,
                        "generators": biprox::permgroup::format_generators(&e.generators),
                    })
                })
                .collect();
            Ok(pretty(&json!({ "schema": SCHEMA, "groups": groups })))
        }
        f => Err(unsupported(f, "catalog")),
    }
}

fn cmd_analyze(cli: &Cli, pair: &Pair, seed: u64) -> Result<String> {
    let (group, sub, label) = load(cli, pair)?;
    let ctx = BoxContext::new(group.clone(), sub.clone(), label.clone())?;
    let opts = ClassifyOptions {
        seed,
        ..Default::default()
    };
    let primal = classify(&ctx, Side::Primal, &opts)?;
    let dual = classify(&ctx, Side::Dual, &opts)?;
    let inc = Inclusion::new(group, sub, label.clone());
    let lat = ctx.interval().lattice();
    let ore = inc.dual_ore_conditions()?;
    let linearly_primitive = inc.is_linearly_primitive(seed)?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => Ok(pretty(&json!({
            "schema": SCHEMA,
            "inclusion": label,
            "index": primal.index,
            "distributive": primal.distributive,
            "dedekind": primal.dedekind,
            "cyclic": primal.cyclic,
            "w_cyclic": primal.w_cyclic,
            "h_cyclic": primal.witnesses.h_cyclic.is_some(),
            "linearly_primitive": linearly_primitive,
            "dual_ore": {
                "cond_normal": ore.cond_normal,
                "cond_sum": ore.cond_sum,
                "sum": ore.sum_value.to_string(),
            },
            "lattice": {
                "size": lat.len(),
                "height": lat.height(),
                "modular": lat.is_modular(),
                "boolean_rank": lat.boolean_rank().ok(),
                "subgroups": (0..lat.len()).map(|i| lat.label(i).to_string()).collect::<Vec<_>>(),
            },
            "primal": primal,
            "dual": dual,
        }))),
        Format::Text => {
            let mut s = format!("inclusion: {label}\nindex: {}\ninterval: {}\n", primal.index, lat.len());
            for r in [&primal, &dual] {
                let side = r.side.name();
                s += &format!(
                    "{side}: cyclic={} w_cyclic={} w_plus={} Z={} ZZ={} F2={} sum={}\n",
                    r.cyclic, r.w_cyclic, r.w_plus_cyclic, r.z, r.zz, r.f2, r.sum_bound
                );
                let lengths: Vec<String> = r
                    .lengths
                    .iter()
                    .map(|(k, v)| format!("{k}={}", v.value().map_or("?".to_string(), |n| n.to_string())))
                    .collect();
                s += &format!("{side} lengths: {}\n", lengths.join(" "));
            }
            Ok(s)
        }
        f => Err(unsupported(f, "analyze")),
    }
}

fn unit_basis(d: usize) -> Vec<Vector> {
    (0..d)
        .map(|i| (0..d).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

fn is_s3_pair(ctx: &BoxContext, side: Side) -> bool {
    side == Side::Primal && ctx.group().order() == 6 && ctx.group().degree() == 3 && ctx.h_is_trivial()
}

fn is_s4_transposition_pair(ctx: &BoxContext, side: Side) -> bool {
    let g = ctx.group();
    side == Side::Dual
        && g.order() == 24
        && g.degree() == 4
        && ctx.subgroup().order() == 2
        && ctx
            .subgroup()
            .elements()
            .any(|x| g.element(x).cycles().iter().filter(|c| c.len() == 2).count() == 1)
}

fn cmd_table(cli: &Cli, pair: &Pair, side: Side, check: bool) -> Result<String> {
    let (group, sub, label) = load(cli, pair)?;
    let ctx = BoxContext::new(group, sub, label.clone())?;
    let (basis, labels) = if check && is_s3_pair(&ctx, side) {
        let labels = biprox::reference::S3_LABELS.iter().map(|s| s.to_string()).collect();
        (s3_matrix_unit_basis(&ctx)?, labels)
    } else {
        let d = ctx.dim();
        (unit_basis(d), (1..=d).map(|i| format!("e{i}")).collect())
    };
    let table = CoproductTable::build(&ctx, side, &basis, labels)?;
    let mut reference = Value::Null;
    if check {
        reference = if is_s3_pair(&ctx, side) {
            let id: Vec<usize> = (0..6).collect();
            let dev = deviation(&table.entries, &ReferenceTable::s3(), &id);
            if dev > REFERENCE_TOL {
                return Err(Error::TheoremViolation(format!("S3 table deviates by {dev:e}")));
            }
            json!({ "matches": true, "max_deviation": dev })
        } else if is_s4_transposition_pair(&ctx, side) {
            let r = ReferenceTable::s4_s2_dual();
            let perm = match_up_to_relabeling(&table.entries, &r, REFERENCE_TOL)
                .ok_or_else(|| Error::TheoremViolation("no relabeling matches the reference table".into()))?;
            json!({
                "matches": true,
                "max_deviation": deviation(&table.entries, &r, &perm),
                "relabeling": perm.iter().map(|&i| format!("e{}", i + 1)).collect::<Vec<_>>(),
            })
        } else {
            return Err(Error::ContextMismatch);
        };
    }
    match cli.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s = format!("# {label}, {} side, entries times {}\n", side.name(), table.scale_label);
            s += &table.to_text();
            if check {
                s += "reference table: match\n";
            }
            Ok(s)
        }
        Format::Json => Ok(pretty(&json!({
            "schema": SCHEMA,
            "inclusion": label,
            "table": table,
            "reference": reference,
        }))),
        f => Err(unsupported(f, "table")),
    }
}

fn cmd_survey(
    cli: &Cli,
    max_index: usize,
    jobs: Option<usize>,
    seed: u64,
    summary_path: Option<&std::path::Path>,
) -> Result<String> {
    let opts = SurveyOptions {
        max_index,
        max_order: cli.max_order,
        seed,
        jobs,
    };
    let survey = run_survey(&catalog(), &opts)?;
    let summary = json!({ "schema": SCHEMA, "summary": survey.summary });
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            if let Some(p) = summary_path {
                std::fs::write(p, pretty(&summary) + "\n").map_err(|e| Error::Io(e.to_string()))?;
            }
            survey.to_csv()
        }
        Format::Json => Ok(pretty(&json!({
            "schema": SCHEMA,
            "summary": survey.summary,
            "records": survey.records,
        }))),
        f => Err(unsupported(f, "survey")),
    }
}

fn cmd_lattice(cli: &Cli, pair: &Pair) -> Result<String> {
    let (group, sub, label) = load(cli, pair)?;
    let inc = Inclusion::new(group, sub, label.clone());
    let lat = inc.interval()?.lattice();
    let predicates = json!({
        "size": lat.len(),
        "height": lat.height(),
        "distributive": lat.is_distributive(),
        "modular": lat.is_modular(),
        "boolean_rank": lat.boolean_rank().ok(),
        "h_cyclic": inc.is_h_cyclic(),
    });
    match cli.format.unwrap_or(Format::Dot) {
        Format::Dot => Ok(format!(
            "// {}\n{}",
            serde_json::to_string(&predicates).expect("json"),
            lat.to_dot(&label)
        )),
        Format::Json => Ok(pretty(&json!({
            "schema": SCHEMA,
            "inclusion": label,
            "predicates": predicates,
            "dot": lat.to_dot(&label),
        }))),
        f => Err(unsupported(f, "lattice")),
    }
}

fn cmd_fusion(cli: &Cli, file: &std::path::Path) -> Result<String> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
    let ring = parse_fusion_text(&text)?;
    ring.verify_axioms()?;
    let report = ring.report();
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => Ok(pretty(&json!({ "schema": SCHEMA, "fusion": report }))),
        Format::Text => {
            let dims: Vec<String> = report.dims.iter().map(|d| format!("{d:.9}")).collect();
            Ok(format!(
                "rank: {}\ndims: {}\ntotal: {:.9}\nintegral: {}\nsimple: {}\n",
                report.rank,
                dims.join(" "),
                report.total_dim,
                report.integral,
                report.simple
            ))
        }
        f => Err(unsupported(f, "fusion-check")),
    }
}
