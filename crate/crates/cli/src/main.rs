//! `lvrough`: command-line front end for lvrough-core.
//!
//! Exit codes: 0 ok, 1 check failed, 2 invalid input, 3 budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lvrough_core::approx::{lower_approx, upper_approx, Builtin, Direction, Operator};
use lvrough_core::axiom::{check_axiom, reconstruct_relation, verify_characterization, AxiomId, Mode};
use lvrough_core::fixtures;
use lvrough_core::format::{
    versioned, LatticeSpec, OperatorSpec, RelationSpec, SubsetSpec, UniverseSpec, SCHEMA_VERSION,
};
use lvrough_core::lattice::{verify_laws, FiniteResiduatedLattice};
use lvrough_core::oracle::{self, InstanceSpec};
use lvrough_core::product::{inner_product, nonconstant_advisory, outer_product, subsethood};
use lvrough_core::relation::PropertySet;
use lvrough_core::universe::{enumerate_powerset, verify_subset_laws};
use lvrough_core::{Error, LSubset, LValuedRelation, Universe};

#[derive(Parser)]
#[command(name = "lvrough", version, about = "Lattice-valued rough sets over an L-universe")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice law checks.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// L-universe utilities.
    #[command(subcommand)]
    Universe(UniverseCmd),
    /// Relation property checks.
    #[command(subcommand)]
    Relation(RelationCmd),
    /// Upper or lower approximation of a subset.
    Approx(ApproxArgs),
    /// Inner product, subsethood degree, outer product.
    Product {
        kind: ProductKind,
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        m: Option<PathBuf>,
        #[arg(long)]
        q: Option<PathBuf>,
    },
    /// Axiom checking, reconstruction and theorem verification.
    #[command(subcommand)]
    Axiom(AxiomCmd),
    /// Brute-force theorem verification.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum LatticeCmd {
    Check {
        /// Lattice JSON file.
        #[arg(long, conflicts_with = "fixture")]
        spec: Option<PathBuf>,
        /// Use the lattice of a named fixture.
        #[arg(long)]
        fixture: Option<String>,
    },
}

#[derive(Subcommand)]
enum UniverseCmd {
    /// Lists P(U) in canonical order.
    Enumerate {
        #[command(flatten)]
        ctx: Ctx,
        /// Also run the subset law suite.
        #[arg(long)]
        laws: bool,
    },
}

#[derive(Subcommand)]
enum RelationCmd {
    Check {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        relation: Option<PathBuf>,
        /// Fail unless the relation has these properties, e.g. `RTS`.
        #[arg(long)]
        require: Option<String>,
    },
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    ctx: Ctx,
    #[arg(long)]
    relation: Option<PathBuf>,
    #[arg(long)]
    subset: Option<PathBuf>,
    #[arg(long, default_value = "upper")]
    direction: Direction,
    /// Print both approximations.
    #[arg(long)]
    both: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductKind {
    Inner,
    Subsethood,
    Outer,
}

#[derive(Subcommand)]
enum AxiomCmd {
    Check {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        axiom: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
    Reconstruct {
        #[command(flatten)]
        op: OpArgs,
    },
    Verify {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        theorem: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    Run {
        #[arg(long, conflicts_with = "fixture")]
        instance: Option<PathBuf>,
        /// An oracle fixture name, or `all`.
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Override the sampled-completeness trial count.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Where the lattice and universe come from.
#[derive(Args, Clone)]
struct Ctx {
    #[arg(long)]
    lattice: Option<PathBuf>,
    #[arg(long)]
    universe: Option<PathBuf>,
    /// A worked example or oracle fixture supplying lattice, universe and data.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct OpArgs {
    #[command(flatten)]
    ctx: Ctx,
    /// Operator JSON file or a builtin name.
    #[arg(long)]
    op: Option<String>,
    #[arg(long)]
    direction: Option<Direction>,
}

#[derive(Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeKind,
    #[arg(long, default_value_t = oracle::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeKind {
    Exhaustive,
    Sampled,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        match self.mode {
            ModeKind::Exhaustive => Mode::Exhaustive,
            ModeKind::Sampled => Mode::Sampled {
                seed: self.seed,
                trials: self.trials,
            },
        }
    }
}

enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn report<T: serde::Serialize>(body: T) -> Value {
    serde_json::to_value(versioned(body)).expect("reports serialize")
}

/// Data resolved from `Ctx` plus an optional fixture.
struct Loaded {
    universe: Arc<Universe>,
    example: Option<fixtures::Example>,
}

fn load(ctx: &Ctx) -> Result<Loaded, Failure> {
    let (lspec, uspec, example) = match &ctx.fixture {
        Some(name) => {
            if let Some(ex) = fixtures::example(name) {
                (ex.lattice.clone(), ex.universe.clone(), Some(ex))
            } else if let Some(inst) = fixtures::instance(name) {
                (inst.lattice, inst.universe, None)
            } else {
                return Err(Failure::Input(format!("unknown fixture `{name}`")));
            }
        }
        None => {
            let l = ctx
                .lattice
                .as_ref()
                .ok_or_else(|| Failure::Input("--lattice or --fixture is required".into()))?;
            let u = ctx
                .universe
                .as_ref()
                .ok_or_else(|| Failure::Input("--universe or --fixture is required".into()))?;
            (read_json::<LatticeSpec>(l)?, read_json::<UniverseSpec>(u)?, None)
        }
    };
    let lat = lspec.build()?;
    let universe = uspec.build(&lat)?;
    Ok(Loaded { universe, example })
}

fn subset_arg(
    path: &Option<PathBuf>,
    fallback: Option<&SubsetSpec>,
    what: &str,
    u: &Arc<Universe>,
) -> Result<LSubset, Failure> {
    let spec = match (path, fallback) {
        (Some(p), _) => read_json::<SubsetSpec>(p)?,
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(Failure::Input(format!("--{what} is required"))),
    };
    Ok(spec.build(u)?)
}

fn relation_arg(path: &Option<PathBuf>, loaded: &Loaded) -> Result<LValuedRelation, Failure> {
    let spec = match (path, loaded.example.as_ref().and_then(|e| e.relation.as_ref())) {
        (Some(p), _) => read_json::<RelationSpec>(p)?,
        (None, Some(r)) => r.clone(),
        (None, None) => return Err(Failure::Input("--relation is required".into())),
    };
    Ok(spec.build(&loaded.universe)?)
}

/// `family` supplies the direction of a two-way builtin when none is given.
fn operator_arg(args: &OpArgs, family: Option<Direction>) -> Result<Operator, Failure> {
    let loaded = load(&args.ctx)?;
    let u = &loaded.universe;
    let op = match &args.op {
        Some(text) => match Builtin::parse(text) {
            Some(b) => {
                let dir = args
                    .direction
                    .or(b.natural_direction())
                    .or(family)
                    .ok_or_else(|| Failure::Input(format!("builtin `{text}` needs --direction")))?;
                Operator::builtin(u, b, dir)?
            }
            None => read_json::<OperatorSpec>(Path::new(text))?.build(u)?,
        },
        None => match loaded.example.as_ref().and_then(|e| e.operator.as_ref()) {
            Some(spec) => spec.build(u)?,
            None => return Err(Failure::Input("--op is required".into())),
        },
    };
    if let Some(d) = args.direction {
        if d != op.direction() {
            return Err(Failure::Input(format!(
                "operator is {}, --direction says {}",
                op.direction(),
                d
            )));
        }
    }
    Ok(op)
}

fn lattice_check(spec: &Option<PathBuf>, fixture: &Option<String>) -> Outcome {
    let lspec = match (spec, fixture) {
        (Some(p), _) => read_json::<LatticeSpec>(p)?,
        (None, Some(name)) => fixtures::example(name)
            .map(|e| e.lattice)
            .or_else(|| fixtures::instance(name).map(|i| i.lattice))
            .ok_or_else(|| Failure::Input(format!("unknown fixture `{name}`")))?,
        (None, None) => return Err(Failure::Input("--spec or --fixture is required".into())),
    };
    let lat: Arc<FiniteResiduatedLattice> = match lspec.build() {
        Ok(l) => l,
        Err(e @ (Error::NotALattice { .. } | Error::NotResiduated { .. })) => {
            let violation = match &e {
                Error::NotResiduated { law, witness } => json!({ "law": law, "witness": witness }),
                Error::NotALattice { reason } => json!({ "reason": reason }),
                _ => unreachable!(),
            };
            let body = json!({
                "schema_version": SCHEMA_VERSION,
                "valid": false,
                "error": e.to_string(),
                "violation": violation,
            });
            return Ok((body, false));
        }
        Err(e) => return Err(e.into()),
    };
    let laws = verify_laws(&lat);
    let ok = laws.all_pass();
    let body = json!({
        "schema_version": SCHEMA_VERSION,
        "valid": ok,
        "size": lat.size(),
        "labels": lat.elements().map(|e| lat.format(e)).collect::<Vec<_>>(),
        "chain": lat.is_chain(),
        "caps": lat.caps(),
        "laws": laws,
    });
    Ok((body, ok))
}

fn universe_enumerate(ctx: &Ctx, laws: bool) -> Outcome {
    let loaded = load(ctx)?;
    let ps = enumerate_powerset(&loaded.universe)?;
    let subsets: Vec<SubsetSpec> = ps.iter().map(|s| SubsetSpec::from_subset(&s)).collect();
    let mut body = json!({
        "schema_version": SCHEMA_VERSION,
        "universe": UniverseSpec::from_universe(&loaded.universe),
        "powerset_size": ps.len(),
        "subsets": subsets,
    });
    let mut ok = true;
    if laws {
        let rep = verify_subset_laws(&ps);
        ok = rep.all_pass();
        body["laws"] = serde_json::to_value(rep).expect("serializable");
    }
    Ok((body, ok))
}

fn relation_check(ctx: &Ctx, relation: &Option<PathBuf>, require: &Option<String>) -> Outcome {
    let loaded = load(ctx)?;
    let r = relation_arg(relation, &loaded)?;
    let props = r.properties();
    let ok = match require {
        Some(code) => PropertySet::from_letters(code)
            .ok_or_else(|| Failure::Input(format!("bad property code `{code}`")))?
            .satisfied_by(&props),
        None => true,
    };
    let body = json!({
        "schema_version": SCHEMA_VERSION,
        "relation": RelationSpec::from_relation(&r),
        "properties": props,
        "required": require,
        "satisfied": ok,
    });
    Ok((body, ok))
}

fn approx(args: &ApproxArgs) -> Outcome {
    let loaded = load(&args.ctx)?;
    let u = &loaded.universe;
    let r = relation_arg(&args.relation, &loaded)?;
    let fallback = loaded.example.as_ref().and_then(|e| e.q.as_ref());
    let q = subset_arg(&args.subset, fallback, "subset", u)?;
    let mut body = json!({ "schema_version": SCHEMA_VERSION });
    let dirs: &[Direction] = if args.both {
        &[Direction::Upper, Direction::Lower]
    } else {
        std::slice::from_ref(&args.direction)
    };
    for &d in dirs {
        let out = match d {
            Direction::Upper => upper_approx(&r, &q)?,
            Direction::Lower => lower_approx(&r, &q)?,
        };
        body[d.name()] = serde_json::to_value(SubsetSpec::from_subset(&out)).expect("serializable");
    }
    if dirs.contains(&Direction::Lower) && !u.lattice().caps().mv_algebra {
        body["advisory"] = json!("non-mv-lattice");
    }
    Ok((body, true))
}

fn product(kind: ProductKind, ctx: &Ctx, m: &Option<PathBuf>, q: &Option<PathBuf>) -> Outcome {
    let loaded = load(ctx)?;
    let u = &loaded.universe;
    let ex = loaded.example.as_ref();
    let m = subset_arg(m, ex.and_then(|e| e.m.as_ref()), "m", u)?;
    let q = subset_arg(q, ex.and_then(|e| e.q.as_ref()), "q", u)?;
    let (name, v) = match kind {
        ProductKind::Inner => ("inner", inner_product(&m, &q)?),
        ProductKind::Subsethood => ("subsethood", subsethood(&m, &q)?),
        ProductKind::Outer => ("outer", outer_product(&m, &q)?),
    };
    let mut body = json!({
        "schema_version": SCHEMA_VERSION,
        "product": name,
        "value": u.lattice().format(v),
    });
    if matches!(kind, ProductKind::Outer) {
        if let Some(a) = nonconstant_advisory(u) {
            body["advisory"] = json!(a);
        }
    }
    Ok((body, true))
}

fn axiom(cmd: &AxiomCmd) -> Outcome {
    match cmd {
        AxiomCmd::Check { op, axiom, mode } => {
            let id = AxiomId::parse(axiom)?;
            let operator = operator_arg(op, Some(id.family()))?;
            let rep = check_axiom(&operator, id, mode.mode())?;
            let ok = rep.holds;
            Ok((report(rep), ok))
        }
        AxiomCmd::Reconstruct { op } => {
            let operator = operator_arg(op, None)?;
            match reconstruct_relation(&operator) {
                Ok(r) => {
                    let body = json!({
                        "schema_version": SCHEMA_VERSION,
                        "direction": operator.direction(),
                        "relation": RelationSpec::from_relation(&r),
                        "properties": r.properties(),
                    });
                    Ok((body, true))
                }
                Err(e @ Error::H0Violated { .. }) => {
                    let body = json!({
                        "schema_version": SCHEMA_VERSION,
                        "error": e.to_string(),
                    });
                    Ok((body, false))
                }
                Err(e) => Err(e.into()),
            }
        }
        AxiomCmd::Verify { op, theorem, mode } => {
            let id = AxiomId::parse(theorem)?;
            let operator = operator_arg(op, Some(id.family()))?;
            let rep = verify_characterization(id, &operator, mode.mode())?;
            let ok = rep.confirmed;
            Ok((report(rep), ok))
        }
    }
}

fn oracle_run(
    instance: &Option<PathBuf>,
    fixture: &Option<String>,
    jobs: Option<usize>,
    trials: Option<u64>,
    seed: Option<u64>,
) -> Outcome {
    let specs: Vec<InstanceSpec> = match (instance, fixture) {
        (Some(p), _) => vec![read_json(p)?],
        (None, Some(name)) if name == "all" => fixtures::INSTANCES
            .iter()
            .map(|n| fixtures::instance(n).expect("listed fixture"))
            .collect(),
        (None, Some(name)) => vec![fixtures::instance(name)
            .ok_or_else(|| Failure::Input(format!("unknown oracle fixture `{name}`")))?],
        (None, None) => return Err(Failure::Input("--instance or --fixture is required".into())),
    };
    let mut matrices = Vec::new();
    for mut spec in specs {
        if let Some(t) = trials {
            spec.budget.sample_trials = t;
        }
        if let Some(s) = seed {
            spec.budget.sample_seed = s;
        }
        let inst = spec.build()?;
        matrices.push(oracle::run(&inst, jobs)?);
    }
    let refutations: usize = matrices.iter().map(|m| m.refutations()).sum();
    let body = if matrices.len() == 1 {
        report(matrices.pop().expect("one matrix"))
    } else {
        json!({
            "schema_version": SCHEMA_VERSION,
            "refutations": refutations,
            "matrices": matrices,
        })
    };
    Ok((body, refutations == 0))
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Lattice(LatticeCmd::Check { spec, fixture }) => lattice_check(spec, fixture),
        Command::Universe(UniverseCmd::Enumerate { ctx, laws }) => universe_enumerate(ctx, *laws),
        Command::Relation(RelationCmd::Check {
            ctx,
            relation,
            require,
        }) => relation_check(ctx, relation, require),
        Command::Approx(args) => approx(args),
        Command::Product { kind, ctx, m, q } => product(*kind, ctx, m, q),
        Command::Axiom(cmd) => axiom(cmd),
        Command::Oracle(OracleCmd::Run {
            instance,
            fixture,
            jobs,
            trials,
            seed,
        }) => oracle_run(instance, fixture, *jobs, *trials, *seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok((body, ok)) => {
            println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
