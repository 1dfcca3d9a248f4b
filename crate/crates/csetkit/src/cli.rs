/*! Command-line front end.

Exit codes: `0` for success or a positive verdict, `1` for a computed
negative verdict (not a groupoid, not simple, infinite rank, audit found
counterexamples, inputs not isomorphic, a category file that parses but
violates the axioms), `2` for anything that prevented computing a verdict
(usage, missing files, schema errors).

`--json` switches every command to deterministic machine output: identical
inputs produce byte-identical JSON.
*/

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use serde_json::{json, Map, Value};

use crate::adjunction::{AdjunctionContext, DEFAULT_HOM_BOUND};
use crate::biset::{self, Side};
use crate::burnside::{self, IsoClassRegistry};
use crate::category::{Category, Direction, Walk};
use crate::characterize::{self, AuditOptions, AuditReport};
use crate::cset::{random_cset, CSet};
use crate::examples;
use crate::io;

#[derive(Parser)]
#[command(
    name = "csetkit",
    about = "Finite categories, C-sets, bisets, Burnside rings, and a groupoid audit",
    version
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Carrier-size cap for enumerations (default 8).
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Seed for randomized corpus sampling (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Use a built-in example instead of a file argument.
    #[arg(long, global = true)]
    example: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate and inspect categories.
    #[command(subcommand)]
    Cat(CatCmd),
    /// Work with C-sets over a category.
    #[command(subcommand)]
    Cset(CsetCmd),
    /// Bisets and their composition.
    #[command(subcommand)]
    Biset(BisetCmd),
    /// Restriction/induction along a subcategory inclusion.
    #[command(subcommand)]
    Adj(AdjCmd),
    /// Burnside ring basis, rank, and multiplication table.
    #[command(subcommand)]
    Burnside(BurnsideCmd),
    /// Audit the four equivalent groupoid characterizations.
    Audit(AuditArgs),
    /// List or print the built-in examples.
    #[command(subcommand)]
    Examples(ExamplesCmd),
}

#[derive(Subcommand)]
enum CatCmd {
    /// Check the category axioms of a file.
    Validate { file: Option<PathBuf> },
    /// Is every morphism invertible?
    IsGroupoid { file: Option<PathBuf> },
    /// Build the one-object category of a group table.
    Deloop {
        #[arg(long)]
        table: PathBuf,
    },
}

#[derive(Subcommand)]
enum CsetCmd {
    /// Check functoriality of a C-set file.
    Validate { file: Option<PathBuf> },
    /// Split into indecomposable components.
    Decompose { file: Option<PathBuf> },
    /// Walk-orbit of one element (closed under images and preimages).
    Orbit {
        file: Option<PathBuf>,
        #[arg(long)]
        at: String,
        #[arg(long)]
        elem: String,
    },
    /// C-subset generated by one element (forward images only).
    Generated {
        file: Option<PathBuf>,
        #[arg(long)]
        at: String,
        #[arg(long)]
        elem: String,
    },
    /// Does every element generate the whole C-set?
    IsSimple { file: Option<PathBuf> },
    /// Is the C-set a single walk-orbit?
    IsIndecomposable { file: Option<PathBuf> },
    /// Search for a natural isomorphism between two C-sets.
    Iso { a: PathBuf, b: PathBuf },
    /// Restrict along a subcategory selection.
    Restrict {
        file: Option<PathBuf>,
        #[arg(long)]
        sub: PathBuf,
    },
}

#[derive(Subcommand)]
enum BisetCmd {
    /// Compose two bisets over their shared middle category.
    Compose { left: PathBuf, right: PathBuf },
    /// Build the hom-biset of two functors with a common codomain.
    Hom {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Apply a set-valued walk action to one element.
    WalkAction {
        file: PathBuf,
        /// Which side the walk acts on.
        #[arg(long, value_parser = ["left", "right"])]
        side: String,
        /// Fiber coordinates, e.g. `x,y`.
        #[arg(long)]
        at: String,
        #[arg(long)]
        elem: String,
        /// Start object of the walk.
        #[arg(long)]
        start: String,
        /// Comma-separated steps: `+f` forward, `-f` backward.
        #[arg(long)]
        steps: String,
    },
}

#[derive(Args)]
struct AdjArgs {
    /// Parent category file.
    #[arg(long)]
    cat: Option<PathBuf>,
    /// Subcategory selection file (objects + morphisms).
    #[arg(long)]
    sub: PathBuf,
    /// The C-set to transform.
    #[arg(long)]
    cset: PathBuf,
}

#[derive(Subcommand)]
enum AdjCmd {
    /// r(Psi) for Psi over the parent category.
    Restrict(AdjArgs),
    /// i(Omega) for Omega over the subcategory.
    Induce(AdjArgs),
    /// The unit Omega -> r(i(Omega)) with per-component injectivity.
    Unit(AdjArgs),
    /// Enumerate both hom-sets and verify the adjunction bijection.
    Verify {
        #[command(flatten)]
        args: AdjArgs,
        /// The C-set Psi over the parent category.
        #[arg(long)]
        target: PathBuf,
    },
}

#[derive(Subcommand)]
enum BurnsideCmd {
    /// Number of basis classes, or an infinite-rank certificate.
    Rank {
        #[arg(long)]
        cat: Option<PathBuf>,
        /// Members exhibited by the certificate (default 3).
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// The full basis-product table.
    Table {
        #[arg(long)]
        cat: Option<PathBuf>,
    },
    /// List the enumerated indecomposable classes.
    Classes {
        #[arg(long)]
        cat: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AuditArgs {
    /// Category file to audit.
    #[arg(long)]
    cat: Option<PathBuf>,
    /// Members exhibited by the infinite-type certificate (default 3).
    #[arg(long)]
    nmax: Option<usize>,
    /// Extra corpus C-set files for condition (iv).
    #[arg(long)]
    corpus: Vec<PathBuf>,
    /// Add this many seeded random C-sets to the corpus.
    #[arg(long)]
    sample: Option<usize>,
}

#[derive(Subcommand)]
enum ExamplesCmd {
    /// Names of all built-in categories and C-sets.
    List,
    /// Print one built-in as JSON.
    Show { name: String },
}

/// Parses the arguments, dispatches, prints, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

type CliResult = Result<i32, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.cmd {
        Cmd::Cat(cmd) => run_cat(cli, cmd),
        Cmd::Cset(cmd) => run_cset(cli, cmd),
        Cmd::Biset(cmd) => run_biset(cli, cmd),
        Cmd::Adj(cmd) => run_adj(cli, cmd),
        Cmd::Burnside(cmd) => run_burnside(cli, cmd),
        Cmd::Audit(args) => run_audit(cli, args),
        Cmd::Examples(cmd) => run_examples(cli, cmd),
    }
}

fn category_source(cli: &Cli, file: &Option<PathBuf>) -> Result<(String, Arc<Category>), String> {
    match (&cli.example, file) {
        (Some(name), _) => Ok((name.clone(), io::builtin_category(name).map_err(err)?)),
        (None, Some(path)) => Ok((
            path.display().to_string(),
            io::read_category(path).map_err(err)?,
        )),
        (None, None) => Err("provide a category file or --example NAME".into()),
    }
}

fn cset_source(cli: &Cli, file: &Option<PathBuf>) -> Result<(String, CSet), String> {
    match (&cli.example, file) {
        (Some(name), _) => Ok((name.clone(), io::builtin_cset(name).map_err(err)?)),
        (None, Some(path)) => Ok((
            path.display().to_string(),
            io::read_cset(path).map_err(err)?,
        )),
        (None, None) => Err("provide a C-set file or --example NAME".into()),
    }
}

fn emit(json_mode: bool, value: &Value, text: &[String]) {
    if json_mode {
        println!("{}", serde_json::to_string(value).expect("serializable"));
    } else {
        for line in text {
            println!("{line}");
        }
    }
}

fn subset_json(cset: &CSet, sets: &[BTreeSet<usize>]) -> Value {
    let base = cset.base();
    let mut out = Map::new();
    for x in base.objects() {
        out.insert(
            base.obj_name(x).to_owned(),
            Value::Array(
                sets[x.index()]
                    .iter()
                    .map(|&e| Value::String(cset.carrier(x)[e].clone()))
                    .collect(),
            ),
        );
    }
    Value::Object(out)
}

fn run_cat(cli: &Cli, cmd: &CatCmd) -> CliResult {
    match cmd {
        CatCmd::Validate { file } => {
            // A file that parses but breaks the axioms is a negative
            // verdict, not a failure to compute.
            let outcome = match (&cli.example, file) {
                (Some(name), _) => io::builtin_category(name).map_err(err).map(|c| (name.clone(), c)),
                (None, Some(path)) => match io::read_category(path) {
                    Ok(cat) => Ok((path.display().to_string(), cat)),
                    Err(io::IoError::Category(e)) => {
                        emit(
                            cli.json,
                            &json!({"valid": false, "error": e.to_string()}),
                            &[format!("invalid: {e}")],
                        );
                        return Ok(1);
                    }
                    Err(e) => Err(err(e)),
                },
                (None, None) => Err("provide a category file or --example NAME".into()),
            };
            let (name, cat) = outcome?;
            emit(
                cli.json,
                &json!({
                    "valid": true,
                    "objects": cat.object_count(),
                    "morphisms": cat.morphism_count(),
                    "connected": cat.is_connected(),
                }),
                &[format!(
                    "ok: `{name}` is a category with {} objects and {} morphisms",
                    cat.object_count(),
                    cat.morphism_count()
                )],
            );
            Ok(0)
        }
        CatCmd::IsGroupoid { file } => {
            let (name, cat) = category_source(cli, file)?;
            let verdict = cat.is_groupoid();
            emit(
                cli.json,
                &json!({"groupoid": verdict}),
                &[format!("`{name}` is a groupoid: {verdict}")],
            );
            Ok(if verdict { 0 } else { 1 })
        }
        CatCmd::Deloop { table } => {
            let cat = io::read_delooping(table).map_err(err)?;
            emit(
                cli.json,
                &io::category_json(&cat),
                &[serde_json::to_string_pretty(&io::category_json(&cat)).expect("serializable")],
            );
            Ok(0)
        }
    }
}

fn locate_elem(cset: &CSet, at: &str, token: &str) -> Result<crate::cset::Elem, String> {
    cset.elem(at, token)
        .ok_or_else(|| format!("no element `{token}` in the carrier of `{at}`"))
}

fn run_cset(cli: &Cli, cmd: &CsetCmd) -> CliResult {
    match cmd {
        CsetCmd::Validate { file } => {
            let outcome = match (&cli.example, file) {
                (Some(name), _) => io::builtin_cset(name).map_err(err).map(|c| (name.clone(), c)),
                (None, Some(path)) => match io::read_cset(path) {
                    Ok(cset) => Ok((path.display().to_string(), cset)),
                    Err(io::IoError::CSet(e)) => {
                        emit(
                            cli.json,
                            &json!({"valid": false, "error": e.to_string()}),
                            &[format!("invalid: {e}")],
                        );
                        return Ok(1);
                    }
                    Err(e) => Err(err(e)),
                },
                (None, None) => Err("provide a C-set file or --example NAME".into()),
            };
            let (name, cset) = outcome?;
            emit(
                cli.json,
                &json!({"valid": true, "sizes": cset.sizes(), "total": cset.total_size()}),
                &[format!(
                    "ok: `{name}` is a C-set with carrier sizes {:?}",
                    cset.sizes()
                )],
            );
            Ok(0)
        }
        CsetCmd::Decompose { file } => {
            let (_, cset) = cset_source(cli, file)?;
            let parts = cset.decompose();
            let mut text = vec![format!("{} indecomposable component(s)", parts.len())];
            for (k, part) in parts.iter().enumerate() {
                text.push(format!("  component {k}: sizes {:?}", part.sizes()));
            }
            let value = json!({
                "components": parts.iter().map(io::cset_json).collect::<Vec<_>>(),
            });
            emit(cli.json, &value, &text);
            Ok(0)
        }
        CsetCmd::Orbit { file, at, elem } => {
            let (_, cset) = cset_source(cli, file)?;
            let e = locate_elem(&cset, at, elem)?;
            let orbit = cset.walk_orbit(e);
            let value = subset_json(&cset, orbit.sets());
            emit(
                cli.json,
                &value,
                &[serde_json::to_string_pretty(&value).expect("serializable")],
            );
            Ok(0)
        }
        CsetCmd::Generated { file, at, elem } => {
            let (_, cset) = cset_source(cli, file)?;
            let e = locate_elem(&cset, at, elem)?;
            let generated = cset.generated_subset(e);
            let value = subset_json(&cset, generated.sets());
            emit(
                cli.json,
                &value,
                &[serde_json::to_string_pretty(&value).expect("serializable")],
            );
            Ok(0)
        }
        CsetCmd::IsSimple { file } => {
            let (name, cset) = cset_source(cli, file)?;
            let verdict = cset.is_simple().map_err(err)?;
            emit(
                cli.json,
                &json!({"simple": verdict}),
                &[format!("`{name}` is simple: {verdict}")],
            );
            Ok(if verdict { 0 } else { 1 })
        }
        CsetCmd::IsIndecomposable { file } => {
            let (name, cset) = cset_source(cli, file)?;
            let verdict = cset.is_indecomposable();
            emit(
                cli.json,
                &json!({"indecomposable": verdict}),
                &[format!("`{name}` is indecomposable: {verdict}")],
            );
            Ok(if verdict { 0 } else { 1 })
        }
        CsetCmd::Iso { a, b } => {
            let left = io::read_cset(a).map_err(err)?;
            let right = io::read_cset(b).map_err(err)?;
            match left.isomorphism(&right).map_err(err)? {
                Some(iso) => {
                    let base = left.base();
                    let mut mapping = Map::new();
                    for x in base.objects() {
                        let mut comp = Map::new();
                        for (e, token) in left.carrier(x).iter().enumerate() {
                            comp.insert(
                                token.clone(),
                                Value::String(
                                    right.carrier(x)[iso.components()[x.index()][e]].clone(),
                                ),
                            );
                        }
                        mapping.insert(base.obj_name(x).to_owned(), Value::Object(comp));
                    }
                    let value = json!({"isomorphic": true, "mapping": mapping});
                    emit(
                        cli.json,
                        &value,
                        &[
                            "isomorphic".to_owned(),
                            serde_json::to_string_pretty(&Value::Object(mapping.clone()))
                                .expect("serializable"),
                        ],
                    );
                    Ok(0)
                }
                None => {
                    emit(
                        cli.json,
                        &json!({"isomorphic": false}),
                        &["not isomorphic".to_owned()],
                    );
                    Ok(1)
                }
            }
        }
        CsetCmd::Restrict { file, sub } => {
            let (_, cset) = cset_source(cli, file)?;
            let sub = io::read_subcategory(sub, cset.base().clone()).map_err(err)?;
            let restricted = cset.restrict(&sub).map_err(err)?;
            let value = io::cset_json(&restricted);
            emit(
                cli.json,
                &value,
                &[serde_json::to_string_pretty(&value).expect("serializable")],
            );
            Ok(0)
        }
    }
}

fn parse_walk(cat: &Category, start: &str, steps: &str) -> Result<Walk, String> {
    let start = cat
        .obj(start)
        .ok_or_else(|| format!("unknown object `{start}`"))?;
    let mut parsed = Vec::new();
    if !steps.is_empty() {
        for item in steps.split(',') {
            let (dir, name) = match item.strip_prefix('-') {
                Some(rest) => (Direction::Backward, rest),
                None => (Direction::Forward, item.strip_prefix('+').unwrap_or(item)),
            };
            let m = cat
                .mor(name)
                .ok_or_else(|| format!("unknown morphism `{name}`"))?;
            parsed.push((m, dir));
        }
    }
    Walk::new(cat, start, parsed).map_err(err)
}

fn run_biset(cli: &Cli, cmd: &BisetCmd) -> CliResult {
    match cmd {
        BisetCmd::Compose { left, right } => {
            let omega = io::read_biset(left).map_err(err)?;
            let psi = io::read_biset(right).map_err(err)?;
            let composed = biset::compose(&omega, &psi).map_err(err)?;
            let value = io::biset_json(composed.biset());
            emit(
                cli.json,
                &value,
                &[serde_json::to_string_pretty(&value).expect("serializable")],
            );
            Ok(0)
        }
        BisetCmd::Hom { f, g } => {
            let f = io::read_functor(f).map_err(err)?;
            let g = io::read_functor(g).map_err(err)?;
            let biset = biset::hom_biset(&f, &g).map_err(err)?;
            let value = io::biset_json(&biset);
            emit(
                cli.json,
                &value,
                &[serde_json::to_string_pretty(&value).expect("serializable")],
            );
            Ok(0)
        }
        BisetCmd::WalkAction {
            file,
            side,
            at,
            elem,
            start,
            steps,
        } => {
            let biset = io::read_biset(file).map_err(err)?;
            let side = match side.as_str() {
                "left" => Side::Left,
                _ => Side::Right,
            };
            let (x_name, y_name) = at
                .split_once(',')
                .ok_or_else(|| "--at expects `LEFT_OBJ,RIGHT_OBJ`".to_owned())?;
            let x = biset
                .left()
                .obj(x_name.trim())
                .ok_or_else(|| format!("unknown left object `{x_name}`"))?;
            let y = biset
                .right()
                .obj(y_name.trim())
                .ok_or_else(|| format!("unknown right object `{y_name}`"))?;
            let walk_cat = match side {
                Side::Left => biset.left().clone(),
                Side::Right => biset.right().clone(),
            };
            let walk = parse_walk(&walk_cat, start, steps)?;
            let index = biset
                .fiber(x, y)
                .iter()
                .position(|t| t == elem)
                .ok_or_else(|| format!("no element `{elem}` in fiber ({x_name},{y_name})"))?;
            let out = biset
                .walk_action(side, &walk, (x, y), &BTreeSet::from([index]))
                .map_err(err)?;
            let (ox, oy) = match side {
                Side::Left => (walk.end(), y),
                Side::Right => (x, walk.start()),
            };
            let tokens: Vec<String> = out
                .iter()
                .map(|&e| biset.fiber(ox, oy)[e].clone())
                .collect();
            emit(
                cli.json,
                &json!({
                    "fiber": [biset.left().obj_name(ox), biset.right().obj_name(oy)],
                    "elements": tokens,
                }),
                &[format!(
                    "result in fiber ({},{}): {:?}",
                    biset.left().obj_name(ox),
                    biset.right().obj_name(oy),
                    tokens
                )],
            );
            Ok(0)
        }
    }
}

fn adjunction_context(cli: &Cli, args: &AdjArgs) -> Result<AdjunctionContext, String> {
    let (_, parent) = category_source(cli, &args.cat)?;
    let sub = io::read_subcategory(&args.sub, parent).map_err(err)?;
    Ok(AdjunctionContext::new(sub))
}

fn run_adj(cli: &Cli, cmd: &AdjCmd) -> CliResult {
    match cmd {
        AdjCmd::Restrict(args) => {
            let ctx = adjunction_context(cli, args)?;
            let psi = io::read_cset(&args.cset).map_err(err)?;
            let restricted = ctx.restrict(&psi).map_err(err)?;
            let value = io::cset_json(restricted.dset());
            emit(
                cli.json,
                &value,
                &[serde_json::to_string_pretty(&value).expect("serializable")],
            );
            Ok(0)
        }
        AdjCmd::Induce(args) => {
            let ctx = adjunction_context(cli, args)?;
            let omega = io::read_cset(&args.cset).map_err(err)?;
            let induced = ctx.induce(&omega).map_err(err)?;
            let value = io::cset_json(induced.cset());
            emit(
                cli.json,
                &value,
                &[serde_json::to_string_pretty(&value).expect("serializable")],
            );
            Ok(0)
        }
        AdjCmd::Unit(args) => {
            let ctx = adjunction_context(cli, args)?;
            let omega = io::read_cset(&args.cset).map_err(err)?;
            let eta = ctx.unit(&omega).map_err(err)?;
            let d = ctx.sub().cat().clone();
            let injective = eta.injective_components();
            let mut text = Vec::new();
            let mut per_object = Map::new();
            for y in d.objects() {
                text.push(format!(
                    "eta at {}: {} -> {} elements, injective: {}",
                    d.obj_name(y),
                    eta.src().carrier(y).len(),
                    eta.tgt().carrier(y).len(),
                    injective[y.index()]
                ));
                per_object.insert(
                    d.obj_name(y).to_owned(),
                    Value::Bool(injective[y.index()]),
                );
            }
            let all = injective.iter().all(|&b| b);
            text.push(format!("injective on every component: {all}"));
            emit(
                cli.json,
                &json!({"injective": per_object, "all_injective": all}),
                &text,
            );
            Ok(0)
        }
        AdjCmd::Verify { args, target } => {
            let ctx = adjunction_context(cli, args)?;
            let omega = io::read_cset(&args.cset).map_err(err)?;
            let psi = io::read_cset(target).map_err(err)?;
            let bound = cli.bound.unwrap_or(DEFAULT_HOM_BOUND);
            let report = ctx
                .pair(&omega, &psi)
                .map_err(err)?
                .verify(bound)
                .map_err(err)?;
            let pass = report.pass();
            emit(
                cli.json,
                &json!({
                    "hom_induced_psi": report.hom_induced_psi,
                    "hom_omega_restricted": report.hom_omega_restricted,
                    "mutually_inverse": report.mutually_inverse,
                    "pass": pass,
                }),
                &[
                    format!("|Hom(i(Omega), Psi)| = {}", report.hom_induced_psi),
                    format!("|Hom(Omega, r(Psi))| = {}", report.hom_omega_restricted),
                    format!("alpha and beta mutually inverse: {}", report.mutually_inverse),
                    format!("adjunction verified: {pass}"),
                ],
            );
            Ok(if pass { 0 } else { 1 })
        }
    }
}

fn registry_for(cli: &Cli, cat: &Option<PathBuf>) -> Result<(String, IsoClassRegistry), String> {
    let (name, base) = category_source(cli, cat)?;
    match burnside::enumerate_indecomposables(&base, cli.bound.unwrap_or(8), 3).map_err(err)? {
        burnside::Enumeration::Registry(reg) => Ok((name, reg)),
        burnside::Enumeration::Infinite(_) => Err(format!(
            "`{name}` is not a groupoid; its Burnside ring has infinite rank (run `csetkit burnside rank`)"
        )),
    }
}

fn certificate_json(cert: &characterize::InfiniteTypeCertificate) -> Value {
    json!({
        "alpha": cert.category.mor_name(cert.alpha),
        "dualized": cert.dualized,
        "entries": cert
            .entries
            .iter()
            .map(|e| {
                json!({
                    "n": e.n,
                    "component_sizes": e.component.sizes(),
                    "restriction_size": e.restriction_size,
                })
            })
            .collect::<Vec<_>>(),
    })
}

fn run_burnside(cli: &Cli, cmd: &BurnsideCmd) -> CliResult {
    match cmd {
        BurnsideCmd::Rank { cat, nmax } => {
            let (name, base) = category_source(cli, cat)?;
            let rank = burnside::rank(&base, cli.bound.unwrap_or(8), nmax.unwrap_or(3))
                .map_err(err)?;
            match rank {
                burnside::Rank::Finite(n) => {
                    emit(
                        cli.json,
                        &json!({"rank": n}),
                        &[format!("rank B({name}) = {n}")],
                    );
                    Ok(0)
                }
                burnside::Rank::Infinite(cert) => {
                    let mut text = vec![format!("rank B({name}) is infinite")];
                    text.extend(cert.summary_lines());
                    emit(
                        cli.json,
                        &json!({"rank": "infinite", "certificate": certificate_json(&cert)}),
                        &text,
                    );
                    Ok(1)
                }
            }
        }
        BurnsideCmd::Table { cat } => {
            let (name, mut reg) = registry_for(cli, cat)?;
            let table = reg.multiplication_table().map_err(err)?;
            let basis: Vec<String> = (0..reg.len()).map(|k| reg.class_name(k)).collect();
            let rendered: Vec<Vec<String>> = table
                .iter()
                .map(|row| row.iter().map(|elt| reg.render(elt)).collect())
                .collect();
            let width = rendered
                .iter()
                .flatten()
                .chain(basis.iter())
                .map(|s| s.len())
                .max()
                .unwrap_or(1);
            let mut text = vec![format!("Burnside table of {name}")];
            let header: Vec<String> = basis.iter().map(|b| format!("{b:>width$}")).collect();
            text.push(format!("{:>width$} | {}", "", header.join("  ")));
            for (i, row) in rendered.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                text.push(format!("{:>width$} | {}", basis[i], cells.join("  ")));
            }
            let value = json!({
                "basis": basis,
                "table": table
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|elt| {
                                elt.coeffs()
                                    .map(|(class, coeff)| json!({"class": class, "coeff": coeff}))
                                    .collect::<Vec<_>>()
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            });
            emit(cli.json, &value, &text);
            Ok(0)
        }
        BurnsideCmd::Classes { cat } => {
            let (name, reg) = registry_for(cli, cat)?;
            let mut text = vec![format!(
                "{} indecomposable class(es) over {name}",
                reg.len()
            )];
            for k in 0..reg.len() {
                text.push(format!("  {}", reg.class_name(k)));
            }
            let value = json!({
                "classes": (0..reg.len())
                    .map(|k| json!({"name": reg.class_name(k), "rep": io::cset_json(&reg.reps()[k])}))
                    .collect::<Vec<_>>(),
            });
            emit(cli.json, &value, &text);
            Ok(0)
        }
    }
}

fn audit_report_json(name: &str, report: &AuditReport) -> Value {
    json!({
        "category": name,
        "verdicts": {
            "semisimple": report.semisimple,
            "finite_type": report.finite_type,
            "groupoid": report.groupoid,
            "orbit_equals_generated": report.orbit_equals_generated,
        },
        "registry_size": report.registry_size,
        "counterexample": report.counterexample.as_ref().map(|c| {
            json!({
                "cset": c.cset,
                "at": c.at,
                "elem": c.elem,
                "witness_object": c.witness_object,
                "generated_size": c.generated_size,
                "orbit_size": c.orbit_size,
            })
        }),
        "certificate": report.certificate.as_ref().map(certificate_json),
        "non_simple_witness": report.non_simple_witness,
        "corpus": report.corpus,
        "notes": report.notes,
    })
}

fn run_audit(cli: &Cli, args: &AuditArgs) -> CliResult {
    let (name, base) = category_source(cli, &args.cat)?;
    let mut extra = Vec::new();
    for path in &args.corpus {
        let cset = io::read_cset(path).map_err(err)?;
        if cset.base().as_ref() != base.as_ref() {
            return Err(format!(
                "{}: corpus C-set is not over the audited category",
                path.display()
            ));
        }
        extra.push((path.display().to_string(), cset));
    }
    if let Some(n) = args.sample {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed.unwrap_or(0));
        for k in 0..n {
            extra.push((format!("sample#{k}"), random_cset(&base, 3, &mut rng)));
        }
    }
    let opts = AuditOptions {
        n_max: args.nmax.unwrap_or(3),
        bound: cli.bound.unwrap_or(8),
        extra_corpus: extra,
    };
    let report = characterize::audit(&base, &opts).map_err(err)?;

    let mut text = vec![format!("audit of `{name}`")];
    text.push(format!("  (i)   semisimple:               {}", report.semisimple));
    text.push(format!("  (ii)  finite type:              {}", report.finite_type));
    text.push(format!("  (iii) groupoid:                 {}", report.groupoid));
    text.push(format!(
        "  (iv)  generated = walk-orbit:   {}",
        report.orbit_equals_generated
    ));
    if let Some(n) = report.registry_size {
        text.push(format!("  basis: {n} indecomposable class(es)"));
    }
    if let Some(c) = &report.counterexample {
        text.push(format!(
            "  (iv) counterexample: element `{}` of {}({}) generates {} of {} orbit element(s) at `{}`",
            c.elem, c.cset, c.at, c.generated_size, c.orbit_size, c.witness_object
        ));
    }
    if let Some(cert) = &report.certificate {
        for line in cert.summary_lines() {
            text.push(format!("  (ii) {line}"));
        }
    }
    if let Some(w) = &report.non_simple_witness {
        text.push(format!("  (i) indecomposable but not simple: {w}"));
    }
    for note in &report.notes {
        text.push(format!("  note: {note}"));
    }
    emit(cli.json, &audit_report_json(&name, &report), &text);
    Ok(if report.all_true() { 0 } else { 1 })
}

fn run_examples(cli: &Cli, cmd: &ExamplesCmd) -> CliResult {
    match cmd {
        ExamplesCmd::List => {
            let cats: Vec<&str> = examples::categories().keys().copied().collect();
            let csets: Vec<&str> = examples::csets().keys().copied().collect();
            let mut text = vec!["categories:".to_owned()];
            text.extend(cats.iter().map(|n| format!("  {n}")));
            text.push("csets:".to_owned());
            text.extend(csets.iter().map(|n| format!("  {n}")));
            emit(
                cli.json,
                &json!({"categories": cats, "csets": csets}),
                &text,
            );
            Ok(0)
        }
        ExamplesCmd::Show { name } => {
            let value = if let Ok(cat) = io::builtin_category(name) {
                io::category_json(&cat)
            } else {
                io::cset_json(&io::builtin_cset(name).map_err(err)?)
            };
            emit(
                cli.json,
                &value,
                &[serde_json::to_string_pretty(&value).expect("serializable")],
            );
            Ok(0)
        }
    }
}
