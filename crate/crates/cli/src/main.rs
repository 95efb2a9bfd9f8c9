//! `catring`: build and inspect category rings of cyclic groups and compute
//! Hom, Ext, projective dimension and UCT terms of modules over them.
//!
//! Exit codes: 0 success, 1 mathematical failure (no stabilization, failed
//! check), 2 usage or I/O error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use catring::group::{self, CharacterVector, CyclicGroup, SubgroupId};
use catring::homalg::{self, AbGroup, ExtResult, GradedModule, ProjectiveDimension};
use catring::intmat::{format_invariants, Int};
use catring::normalform::{self, CategoryRing, CompletionOptions};
use catring::presentation::{self, build_presentation, presentation_c4};
use catring::Error;

#[derive(Parser)]
#[command(name = "catring", version, about = "Category rings R^{C_k} and their module categories")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest word length considered during completion.
    #[arg(long, global = true, default_value_t = 10)]
    max_len: usize,
    /// Number of consecutive agreeing closed bounds required.
    #[arg(long, global = true, default_value_t = 2)]
    window: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, verify or describe a completed ring.
    #[command(subcommand)]
    Ring(RingCommand),
    /// Double cosets and character induction/restriction in C_k.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Check or construct module files.
    #[command(subcommand)]
    Module(ModuleCommand),
    /// Ext^n(M, N) in both Z/2 degrees.
    Ext {
        #[command(flatten)]
        ring: RingArg,
        m: PathBuf,
        n: PathBuf,
        #[arg(long, short = 'n', default_value_t = 1)]
        degree: usize,
    },
    /// End terms of the universal coefficient sequence for M, N.
    Uct {
        #[command(flatten)]
        ring: RingArg,
        m: PathBuf,
        n: PathBuf,
    },
    /// Projective dimension of M, up to a cap.
    Pd {
        #[command(flatten)]
        ring: RingArg,
        m: PathBuf,
        #[arg(long, default_value_t = 3)]
        cap: usize,
    },
    /// Free resolution of M.
    Resolve {
        #[command(flatten)]
        ring: RingArg,
        m: PathBuf,
        #[arg(long, default_value_t = 3)]
        length: usize,
    },
}

#[derive(Args)]
struct RingArg {
    /// Ring file the modules were defined over.
    #[arg(long)]
    ring: PathBuf,
}

#[derive(Subcommand)]
enum RingCommand {
    /// Complete the presentation of R^{C_k} and write the ring file.
    Build {
        #[arg(long)]
        order: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check relations, units, associativity, and for C_4 the hand-written
    /// presentation.
    Verify { path: PathBuf },
    /// Describe generators, relations and basis of a ring file.
    Info { path: PathBuf },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Representatives of L \ H / K, subgroups given by their orders.
    Cosets {
        #[arg(long)]
        order: u64,
        l: u64,
        h: u64,
        k: u64,
    },
    /// Induce the irreducible character chi from subgroup L to H.
    Induce {
        #[arg(long)]
        order: u64,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long)]
        chi: u64,
    },
    /// Restrict the irreducible character chi from subgroup H to L.
    Restrict {
        #[arg(long)]
        order: u64,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long)]
        chi: u64,
    },
}

#[derive(Subcommand)]
enum ModuleCommand {
    /// Validate a module file against its ring.
    Check {
        #[command(flatten)]
        ring: RingArg,
        m: PathBuf,
    },
    /// The representable module Hom(-, H) in a degree.
    Yoneda {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        object: u64,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Hom(-, H) in degree 0 modulo the submodule generated by one basis
    /// monomial (a global basis index, see `ring info`).
    Cyclic {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        object: u64,
        #[arg(long)]
        basis: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// A graded abelian group over the ring of the trivial group, given by
    /// comma-separated cyclic orders per degree (0 stands for Z).
    Abelian {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value = "")]
        even: String,
        #[arg(long, default_value = "")]
        odd: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Projective dimensions of all cyclic quotients Hom(-, H) / <b>.
    Search {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value_t = 3)]
        cap: usize,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }
}

fn math(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, error: error.into() }
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

type CliResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Ring(RingCommand::Build { order, output }) => ring_build(cli, *order, output.as_deref()),
        Command::Ring(RingCommand::Verify { path }) => ring_verify(cli, path),
        Command::Ring(RingCommand::Info { path }) => ring_info(cli, path),
        Command::Group(g) => group_command(cli, g),
        Command::Module(m) => module_command(cli, m),
        Command::Ext { ring, m, n, degree } => {
            let ring = load_ring(&ring.ring)?;
            let (m, n) = (load_module(&ring, m)?, load_module(&ring, n)?);
            let e = homalg::ext(&m, &n, *degree).map_err(math)?;
            emit(cli, ext_json(&e), &e.to_string())
        }
        Command::Uct { ring, m, n } => {
            let ring = load_ring(&ring.ring)?;
            let (m, n) = (load_module(&ring, m)?, load_module(&ring, n)?);
            let t = homalg::uct_terms(&m, &n).map_err(math)?;
            let mut text = format!(
                "Hom: {}\nExt^1(suspension of M, N): {}\npd_check: {}",
                degrees_text(&t.hom),
                degrees_text(&t.ext1_shifted),
                t.pd_check
            );
            if !t.pd_check {
                text.push_str("\nprojective dimension of M exceeds 1: the terms do not assemble into the sequence");
            }
            let value = json!({
                "hom": ext_json(&t.hom),
                "ext1_shifted": ext_json(&t.ext1_shifted),
                "pd_check": t.pd_check,
            });
            emit(cli, value, &text)
        }
        Command::Pd { ring, m, cap } => {
            let ring = load_ring(&ring.ring)?;
            let m = load_module(&ring, m)?;
            let pd = homalg::projective_dimension(&m, *cap).map_err(math)?;
            let value = match pd {
                ProjectiveDimension::Exactly(n) => json!({ "projective_dimension": n }),
                ProjectiveDimension::AboveCap(c) => json!({ "projective_dimension": null, "above_cap": c }),
            };
            emit(cli, value, &format!("projective dimension: {pd}"))
        }
        Command::Resolve { ring, m, length } => {
            let ring = load_ring(&ring.ring)?;
            let m = load_module(&ring, m)?;
            let res = homalg::free_resolution(&m, *length).map_err(math)?;
            let objects = ring.objects();
            let mut lines = Vec::new();
            let mut steps = Vec::new();
            for (i, f) in res.free.iter().enumerate() {
                let entries: Vec<String> =
                    f.entries().iter().map(|&(h, e)| format!("P({})[{e}]", objects[h])).collect();
                let rendered = if entries.is_empty() { "0".to_string() } else { entries.join(" + ") };
                lines.push(format!("F_{i}: {rendered}"));
                steps.push(json!(f.entries().iter().map(|&(h, e)| json!([objects[h].0, e])).collect::<Vec<_>>()));
            }
            emit(cli, json!({ "free_modules": steps }), &lines.join("\n"))
        }
    }
}

fn emit(cli: &Cli, value: Value, text: &str) -> CliResult {
    if cli.json {
        write_stdout(&format!("{}\n", serde_json::to_string_pretty(&value).expect("json")))
    } else {
        write_stdout(&format!("{text}\n"))
    }
}

/// Writes to stdout, exiting quietly when the reader has gone away.
fn write_stdout(s: &str) -> CliResult {
    let mut out = std::io::stdout().lock();
    match out.write_all(s.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        r => r.map_err(usage),
    }
}

fn ints(v: &[Int]) -> Value {
    json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn ext_json(e: &ExtResult) -> Value {
    json!({ "n": e.n, "degree0": ints(&e.degrees[0]), "degree1": ints(&e.degrees[1]) })
}

fn degrees_text(e: &ExtResult) -> String {
    format!(
        "degree 0: {}; degree 1: {}",
        format_invariants(&e.degrees[0]),
        format_invariants(&e.degrees[1])
    )
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(usage)
}

fn write_or_print(path: Option<&Path>, contents: &str) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, contents).with_context(|| format!("cannot write {}", p.display())).map_err(usage),
        None => write_stdout(contents),
    }
}

fn load_ring(path: &Path) -> std::result::Result<Arc<CategoryRing>, Failure> {
    let s = read(path)?;
    let ring = CategoryRing::from_json(&s).with_context(|| format!("malformed ring file {}", path.display()))?;
    Ok(Arc::new(ring))
}

fn load_module(ring: &Arc<CategoryRing>, path: &Path) -> std::result::Result<Arc<GradedModule>, Failure> {
    let s = read(path)?;
    let hash = GradedModule::ring_hash_of(&s).with_context(|| format!("malformed module file {}", path.display()))?;
    let expected = ring.content_hash();
    if hash != expected {
        return Err(usage(anyhow!(
            "{} was defined over ring {hash}, but the given ring is {expected}",
            path.display()
        )));
    }
    let m = GradedModule::from_json(&s, ring.clone()).with_context(|| format!("invalid module {}", path.display()))?;
    Ok(Arc::new(m))
}

fn options(cli: &Cli) -> CompletionOptions {
    CompletionOptions { max_len: cli.max_len, window: cli.window }
}

fn rank_table(ring: &CategoryRing) -> Vec<Vec<usize>> {
    let n = ring.object_count();
    (0..n).map(|x| (0..n).map(|y| ring.pair_rank(x, y)).collect()).collect()
}

fn ring_build(cli: &Cli, order: u64, output: Option<&Path>) -> CliResult {
    let p = build_presentation(order).map_err(usage)?;
    let ring = normalform::complete(&p, options(cli)).map_err(math)?;
    let contents = ring.to_json();
    let hash = ring.content_hash();
    if let Some(path) = output {
        fs::write(path, &contents).with_context(|| format!("cannot write {}", path.display())).map_err(usage)?;
    }
    let meta = ring.meta();
    let value = json!({
        "order": order,
        "objects": ring.objects().iter().map(|o| o.0).collect::<Vec<_>>(),
        "ranks": rank_table(&ring),
        "total_rank": ring.total_rank(),
        "torsion": ring.has_torsion(),
        "bound": meta.bound,
        "core_length": meta.core_length,
        "hash": hash,
    });
    let mut text = format!(
        "R^{{C_{order}}}: total rank {}, stabilized at length {} (basis words up to length {})\n",
        ring.total_rank(),
        meta.bound,
        meta.core_length
    );
    text.push_str("rank of Hom(X, Y), rows X, columns Y (subgroup orders):\n");
    text.push_str(&ring.to_string());
    if ring.has_torsion() {
        text.push_str("warning: the ring has torsion\n");
    }
    text.push_str(&format!("sha256 {hash}"));
    if let Some(path) = output {
        text.push_str(&format!("\nwrote {}", path.display()));
    }
    emit(cli, value, &text)
}

fn ring_verify(cli: &Cli, path: &Path) -> CliResult {
    let ring = load_ring(path)?;
    let mut checks: Vec<(String, Vec<String>)> = Vec::new();
    let report = normalform::verify_ring(&ring);
    checks.push(("relations, units, associativity on basis triples".into(), report.failures.clone()));
    let random = normalform::check_random_associativity(&ring, cli.seed, 1000, 6);
    checks.push((format!("associativity on 1000 random word triples (seed {})", cli.seed), random));
    if ring.presentation().group.order() == 4 {
        let oracle = presentation_c4();
        let mut failures = Vec::new();
        let keys = ring.presentation().generator_keys();
        for rel in &oracle.relations {
            let mut d = rel.difference();
            let mut ok = true;
            for t in &mut d.terms {
                for g in &mut t.word.path {
                    match keys.iter().position(|k| *k == oracle.generators[*g].order_key()) {
                        Some(i) => *g = i,
                        None => ok = false,
                    }
                }
            }
            if !ok || !ring.normal_form(&d).map(|e| e.is_zero()).unwrap_or(false) {
                failures.push(format!("relation {}: {}", rel.tag, oracle.combination_name(&rel.difference())));
            }
        }
        match presentation::presentations_equivalent(ring.presentation(), &oracle, options(cli)) {
            Ok(r) => failures.extend(r.failures),
            Err(e) => failures.push(e.to_string()),
        }
        checks.push(("hand-written C_4 presentation".into(), failures));
    }
    let passed = checks.iter().all(|(_, f)| f.is_empty());
    let value = json!({
        "passed": passed,
        "checks": checks.iter().map(|(name, f)| json!({ "check": name, "failures": f })).collect::<Vec<_>>(),
        "torsion": report.torsion,
    });
    let mut lines = Vec::new();
    for (name, failures) in &checks {
        lines.push(format!("{} {name}", if failures.is_empty() { "PASS" } else { "FAIL" }));
        lines.extend(failures.iter().map(|f| format!("  {f}")));
    }
    lines.extend(report.torsion.iter().map(|t| format!("torsion: {t}")));
    emit(cli, value, &lines.join("\n"))?;
    if passed {
        Ok(())
    } else {
        Err(math(anyhow!("verification failed")))
    }
}

fn ring_info(cli: &Cli, path: &Path) -> CliResult {
    let ring = load_ring(path)?;
    let p = ring.presentation();
    let generators: Vec<String> = (0..p.generators.len()).map(|g| p.generator_name(g)).collect();
    let basis: Vec<Value> = ring
        .basis()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            json!({
                "index": i,
                "source": ring.objects()[b.source].0,
                "target": ring.objects()[b.target].0,
                "word": p.word_name(&b.word),
                "torsion": b.torsion.as_ref().map(|t| t.to_string()),
            })
        })
        .collect();
    let families: Value = json!(p.family_counts());
    let value = json!({
        "order": p.group.order(),
        "generators": generators,
        "relation_families": families,
        "ranks": rank_table(&ring),
        "basis": basis,
        "hash": ring.content_hash(),
    });
    let mut text = format!("R^{{C_{}}}, {} generators:\n", p.group.order(), generators.len());
    for (i, g) in generators.iter().enumerate() {
        text.push_str(&format!("  {i}: {g}\n"));
    }
    text.push_str("relations per family:");
    for (f, c) in p.family_counts() {
        text.push_str(&format!(" ({f}) {c}"));
    }
    text.push_str("\nbasis:\n");
    for (i, b) in ring.basis().iter().enumerate() {
        let torsion = b.torsion.as_ref().map(|t| format!("  (order {t})")).unwrap_or_default();
        text.push_str(&format!(
            "  {i}: {} -> {}  {}{torsion}\n",
            ring.objects()[b.source],
            ring.objects()[b.target],
            p.word_name(&b.word)
        ));
    }
    text.push_str(&ring.to_string());
    text.push_str(&format!("sha256 {}", ring.content_hash()));
    emit(cli, value, &text)
}

fn group_command(cli: &Cli, g: &GroupCommand) -> CliResult {
    match g {
        GroupCommand::Cosets { order, l, h, k } => {
            let grp = CyclicGroup::new(*order).map_err(usage)?;
            let reps = group::double_cosets(&grp, SubgroupId(*l), SubgroupId(*h), SubgroupId(*k)).map_err(usage)?;
            let names: Vec<String> = reps.iter().map(|e| e.to_string()).collect();
            emit(cli, json!({ "representatives": names }), &names.join(", "))
        }
        GroupCommand::Induce { order, from, to, chi } => {
            let grp = CyclicGroup::new(*order).map_err(usage)?;
            let (l, h) = (grp.subgroup(*from).map_err(usage)?, grp.subgroup(*to).map_err(usage)?);
            let c = group::induce_character(&CharacterVector::irreducible(l, *chi), h).map_err(usage)?;
            emit(cli, json!({ "coefficients": ints(c.coefficients()) }), &c.to_string())
        }
        GroupCommand::Restrict { order, from, to, chi } => {
            let grp = CyclicGroup::new(*order).map_err(usage)?;
            let (h, l) = (grp.subgroup(*from).map_err(usage)?, grp.subgroup(*to).map_err(usage)?);
            let c = group::restrict_character(&CharacterVector::irreducible(h, *chi), l).map_err(usage)?;
            emit(cli, json!({ "coefficients": ints(c.coefficients()) }), &c.to_string())
        }
    }
}

fn parse_orders(s: &str) -> std::result::Result<Vec<i64>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .ok()
                .filter(|&o| o >= 0)
                .ok_or_else(|| usage(anyhow!("{t:?} is not a cyclic order")))
        })
        .collect()
}

fn module_command(cli: &Cli, m: &ModuleCommand) -> CliResult {
    match m {
        ModuleCommand::Check { ring, m } => {
            let ring = load_ring(&ring.ring)?;
            let s = read(m)?;
            let hash = GradedModule::ring_hash_of(&s).map_err(usage)?;
            if hash != ring.content_hash() {
                return Err(usage(anyhow!("{} was defined over a different ring ({hash})", m.display())));
            }
            let module = match GradedModule::from_json(&s, ring.clone()) {
                Ok(module) => module,
                Err(e @ (Error::Json(_) | Error::FormatVersion(_))) => return Err(usage(e)),
                Err(e) => {
                    emit(cli, json!({ "valid": false, "reason": e.to_string() }), &format!("FAIL {e}"))?;
                    return Err(math(e));
                }
            };
            let objects = ring.objects();
            let values: Vec<Value> = (0..objects.len())
                .map(|x| {
                    json!({
                        "object": objects[x].0,
                        "degree0": ints(&module.value(x, 0).invariants()),
                        "degree1": ints(&module.value(x, 1).invariants()),
                    })
                })
                .collect();
            let mut text = String::from("PASS module is well defined and functorial\n");
            for x in 0..objects.len() {
                text.push_str(&format!(
                    "  M({}): degree 0: {}; degree 1: {}\n",
                    objects[x],
                    format_invariants(&module.value(x, 0).invariants()),
                    format_invariants(&module.value(x, 1).invariants())
                ));
            }
            emit(cli, json!({ "valid": true, "values": values }), text.trim_end())
        }
        ModuleCommand::Yoneda { ring, object, degree, output } => {
            let ring = load_ring(&ring.ring)?;
            if *degree > 1 {
                return Err(usage(anyhow!("degree must be 0 or 1")));
            }
            let y = homalg::yoneda(&ring, SubgroupId(*object), *degree).map_err(usage)?;
            write_or_print(output.as_deref(), &y.module().to_json())
        }
        ModuleCommand::Cyclic { ring, object, basis, output } => {
            let ring = load_ring(&ring.ring)?;
            let h = ring.object_index(SubgroupId(*object)).map_err(usage)?;
            let b = ring
                .basis()
                .get(*basis)
                .filter(|b| b.target == h)
                .ok_or_else(|| usage(anyhow!("basis monomial {basis} does not end at object {object}")))?;
            let free = homalg::FreeModule::new(ring.clone(), vec![(h, 0)]);
            let mut v = vec![Int::from(0); free.module().dim(b.source, 0)];
            v[ring.local_index(*basis)] = Int::from(1);
            let q = free.module().quotient_by(&[(b.source, 0, v)]).map_err(math)?;
            write_or_print(output.as_deref(), &q.to_json())
        }
        ModuleCommand::Abelian { ring, even, odd, output } => {
            let ring = load_ring(&ring.ring)?;
            let (e, o) = (parse_orders(even)?, parse_orders(odd)?);
            let m = GradedModule::abelian(ring, AbGroup::from_orders("x", &e), AbGroup::from_orders("y", &o))
                .map_err(usage)?;
            write_or_print(output.as_deref(), &m.to_json())
        }
        ModuleCommand::Search { ring, cap } => {
            let ring = load_ring(&ring.ring)?;
            let results = homalg::cyclic_quotient_dimensions(&ring, *cap).map_err(math)?;
            let p = ring.presentation();
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            for (q, pd) in &results {
                let word = p.word_name(&ring.basis()[q.basis].word);
                lines.push(format!("Hom(-, {}) / <{word}> (basis {}): projective dimension {pd}", ring.objects()[q.object], q.basis));
                let pd_value = match pd {
                    ProjectiveDimension::Exactly(n) => json!(n),
                    ProjectiveDimension::AboveCap(_) => Value::Null,
                };
                rows.push(json!({
                    "object": ring.objects()[q.object].0,
                    "basis": q.basis,
                    "word": word,
                    "projective_dimension": pd_value,
                }));
            }
            let witnesses = results
                .iter()
                .filter(|(_, pd)| !matches!(pd, ProjectiveDimension::Exactly(n) if *n < 2))
                .count();
            lines.push(format!("{witnesses} of {} modules have projective dimension at least 2", results.len()));
            emit(cli, json!({ "cap": cap, "modules": rows, "at_least_two": witnesses }), &lines.join("\n"))
        }
    }
}
