use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use coarse_lab::io::{self, SpaceFile, Witness};
use coarse_lab::pipeline::{self, Chain, GroupSource, OperatorChoice, PipelineConfig, SpaceSource};
use coarse_lab::roe::{self, BandedOperator};
use coarse_lab::witness::{self, convert};
use coarse_lab::{onl, Error, Result};

#[derive(Parser)]
#[command(name = "coarse-lab", version, about = "Coarse spaces, witnesses, band operators and ONL checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Space(SpaceCmd),
    #[command(subcommand)]
    Witness(WitnessCmd),
    #[command(subcommand)]
    Roe(RoeCmd),
    #[command(subcommand)]
    Onl(OnlCmd),
    #[command(subcommand)]
    Pipeline(PipelineCmd),
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Build a space from a built-in family and write it as JSON.
    Build(BuildArgs),
    /// Summarize a space file.
    Show { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cycle,
    Path,
    RandomRegular,
    EdgeList,
    Metric,
    Cayley,
    Box,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `cyclic:N`, `dihedral:N`, `symmetric:K` or a group file; repeat for box spaces.
    #[arg(long)]
    group: Vec<String>,
    #[arg(long)]
    radius: Option<usize>,
    /// Edge list or metric table.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpaceRef {
    #[arg(long)]
    space: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    L1,
    L2,
    Kernel,
    Folner,
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Search ball witnesses `G^r[x] × {0}` for a Følner witness.
    Make {
        #[command(flatten)]
        space: SpaceRef,
        #[arg(long, default_value = "gens")]
        gens: String,
        #[arg(long)]
        tested: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 20)]
        radius_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert between witness kinds.
    Convert {
        #[command(flatten)]
        space: SpaceRef,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        /// Truncation target for kernel → l2, or the displacement for l2 → folner.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Tested entourage for l2 → folner.
        #[arg(long)]
        tested: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure a witness on a tested entourage, failing if above `--epsilon`.
    Verify {
        #[command(flatten)]
        space: SpaceRef,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        tested: String,
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

#[derive(Args)]
struct OperatorRef {
    /// Operator file.
    #[arg(long, conflicts_with = "adjacency")]
    operator: Option<PathBuf>,
    /// Use the 0/1 adjacency operator of this entourage.
    #[arg(long)]
    adjacency: Option<String>,
}

#[derive(Subcommand)]
enum RoeCmd {
    /// Operator norm.
    Norm {
        #[command(flatten)]
        space: SpaceRef,
        #[command(flatten)]
        op: OperatorRef,
    },
    /// `‖Ψ ∘ Φ_S(b) - b‖` for an l2 profile, against the Schur bound.
    Defect {
        #[command(flatten)]
        space: SpaceRef,
        #[command(flatten)]
        op: OperatorRef,
        #[arg(long)]
        profile: PathBuf,
        /// Also require the displacement bound for this epsilon on the band.
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

#[derive(Subcommand)]
enum OnlCmd {
    /// Best localized ratio per window radius.
    Profile {
        #[command(flatten)]
        space: SpaceRef,
        #[arg(long, default_value = "gens")]
        gens: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        windows: Vec<usize>,
        #[arg(long, value_enum, default_value = "adjacency")]
        operator: OperatorKind,
        #[arg(long)]
        constant: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Certificate for the largest window.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Amplify the best localized vector of a window to constant `kappa`.
    Amplify {
        #[command(flatten)]
        space: SpaceRef,
        #[command(flatten)]
        op: OperatorRef,
        /// Band of the operator.
        #[arg(long)]
        band: String,
        #[arg(long)]
        window: String,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower bound for the inverse compression norm.
    Invnorm {
        #[command(flatten)]
        space: SpaceRef,
        #[arg(long)]
        band: String,
        #[arg(long)]
        window: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorKind {
    Adjacency,
    Laplacian,
}

#[derive(Subcommand)]
enum PipelineCmd {
    /// Run a JSON pipeline config.
    Run {
        config: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Command outcome: `Ok(true)` passes, `Ok(false)` is a failed verdict.
type Outcome = Result<bool>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var("COARSE_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        format!("COARSE_LAB_THREADS must be a positive integer, got `{v}`")
    })?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Space(SpaceCmd::Build(a)) => space_build(a),
        Command::Space(SpaceCmd::Show { file }) => space_show(&file),
        Command::Witness(c) => witness_cmd(c),
        Command::Roe(c) => roe_cmd(c),
        Command::Onl(c) => onl_cmd(c),
        Command::Pipeline(PipelineCmd::Run { config, csv, json }) => pipeline_run(&config, csv, json),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing --{flag}")))
}

fn write_out(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn space_build(a: BuildArgs) -> Outcome {
    let groups = || a.group.iter().map(|g| GroupSource::parse(g)).collect::<Result<Vec<_>>>();
    let src = match a.family {
        Family::Cycle => SpaceSource::Cycle { n: need(a.n, "n")? },
        Family::Path => SpaceSource::Path { n: need(a.n, "n")? },
        Family::RandomRegular => SpaceSource::RandomRegular { n: need(a.n, "n")?, d: need(a.d, "d")?, seed: a.seed },
        Family::EdgeList => SpaceSource::EdgeList(need(a.input.clone(), "input")?),
        Family::Metric => SpaceSource::Metric { file: need(a.input.clone(), "input")?, threshold: need(a.threshold, "threshold")? },
        Family::Cayley => {
            let mut g = groups()?;
            if g.len() != 1 {
                return Err(Error::Config("cayley needs exactly one --group".into()));
            }
            SpaceSource::Cayley(g.remove(0))
        }
        Family::Box => SpaceSource::Box { groups: groups()?, radius: need(a.radius, "radius")? },
    };
    let file = src.build()?;
    write_out(&file.to_json(), a.out.as_deref())?;
    if let Some(p) = &a.out {
        eprintln!("{}: {} points written to {}", src.describe(), file.space.len(), p.display());
    }
    Ok(true)
}

fn space_show(path: &Path) -> Outcome {
    let file = SpaceFile::load(path)?;
    println!("points\t{}", file.space.len());
    for (name, e) in &file.entourages {
        let deg = e.degree();
        println!(
            "entourage\t{name}\tpairs={}\tdegree={}\tsymmetric={}\tdiagonal={}",
            e.len(),
            deg.max(),
            e.is_symmetric(),
            e.contains_diagonal()
        );
    }
    Ok(true)
}

fn witness_cmd(c: WitnessCmd) -> Outcome {
    match c {
        WitnessCmd::Make { space, gens, tested, epsilon, radius_max, out } => {
            let file = SpaceFile::load(&space.space)?;
            let g = pipeline::select(&file, &gens)?;
            let t = pipeline::select(&file, &tested)?;
            match witness::folner_from_balls(&g, &t, epsilon, radius_max)? {
                Some((r, w)) => {
                    let q = witness::verify_folner(&w, &t, epsilon)?;
                    eprintln!("radius {r}, ratio {}", io::format_f64(q.epsilon));
                    let support = file.reference(w.support());
                    write_out(&io::to_json_string(&io::witness_to_value(&Witness::Folner(w), support)), out.as_deref())?;
                    Ok(true)
                }
                None => {
                    eprintln!("no ball witness up to radius {radius_max}");
                    Ok(false)
                }
            }
        }
        WitnessCmd::Convert { space, input, to, epsilon, tested, out } => {
            let file = SpaceFile::load(&space.space)?;
            let w = io::load_witness(&input, &file)?;
            let result = match (w, to) {
                (Witness::Folner(f), Target::L1) => Witness::L1(convert::folner_to_l2(&f)?.0),
                (Witness::Folner(f), Target::L2) => Witness::L2(convert::folner_to_l2(&f)?.1),
                (Witness::L2(p), Target::Kernel) => Witness::Kernel(convert::l2_to_kernel(&p)),
                (Witness::Kernel(k), Target::L2) => {
                    let r = convert::kernel_to_l2(&k, need(epsilon, "epsilon")?)?;
                    eprintln!("band radius {}, residual {}", r.radius, io::format_f64(r.residual));
                    Witness::L2(r.profile)
                }
                (Witness::L2(p), Target::Folner) => {
                    let t = pipeline::select(&file, &need(tested, "tested")?)?;
                    let r = convert::l2_to_folner(&p, &t, need(epsilon, "epsilon")?)?;
                    eprintln!("grid {}, ratio {}", r.grid, io::format_f64(r.ratio));
                    Witness::Folner(r.witness)
                }
                (w, _) => return Err(Error::Config(format!("no conversion from {} to the requested kind", w.kind()))),
            };
            let support = file.reference(result.support());
            write_out(&io::to_json_string(&io::witness_to_value(&result, support)), out.as_deref())?;
            Ok(true)
        }
        WitnessCmd::Verify { space, input, tested, epsilon } => {
            let file = SpaceFile::load(&space.space)?;
            let w = io::load_witness(&input, &file)?;
            let t = pipeline::select(&file, &tested)?;
            let (value, extra_ok) = match &w {
                Witness::Folner(f) => (witness::verify_folner(f, &t, f64::INFINITY)?.epsilon, true),
                Witness::L1(p) => (t.pairs().map(|(x, y)| p.distance(x, y)).fold(0.0, f64::max), true),
                Witness::L2(p) => (witness::verify_l2(p, &t)?.epsilon, true),
                Witness::Kernel(k) => {
                    let q = witness::verify_kernel(k, &t)?;
                    println!("min_eigenvalue\t{}", io::format_f64(q.min_eigenvalue));
                    (q.quality.epsilon, q.min_eigenvalue >= -k.psd_tolerance() && q.inside_support)
                }
            };
            println!("kind\t{}", w.kind());
            println!("epsilon\t{}", io::format_f64(value));
            if t.is_empty() {
                println!("note\tvacuous");
            }
            Ok(extra_ok && epsilon.is_none_or(|e| t.is_empty() || value < e))
        }
    }
}

fn operator(file: &SpaceFile, op: &OperatorRef) -> Result<BandedOperator> {
    match (&op.operator, &op.adjacency) {
        (Some(p), _) => io::load_operator(p, file),
        (None, Some(name)) => Ok(BandedOperator::adjacency(&pipeline::select(file, name)?)),
        (None, None) => Err(Error::Config("pass --operator or --adjacency".into())),
    }
}

fn roe_cmd(c: RoeCmd) -> Outcome {
    match c {
        RoeCmd::Norm { space, op } => {
            let file = SpaceFile::load(&space.space)?;
            let b = operator(&file, &op)?;
            let r = roe::operator_norm(&b)?;
            println!("norm\t{}", io::format_f64(r.value));
            println!("method\t{}", r.method.as_str());
            println!("schur_bound\t{}", io::format_f64(roe::schur_bound(&b)));
            Ok(true)
        }
        RoeCmd::Defect { space, op, profile, epsilon } => {
            let file = SpaceFile::load(&space.space)?;
            let b = operator(&file, &op)?;
            let Witness::L2(p) = io::load_witness(&profile, &file)? else {
                return Err(Error::Config("--profile must be an l2 witness".into()));
            };
            let r = match epsilon {
                Some(eps) => match roe::nuclearity_defect(&b, &p, &b.band().clone(), eps) {
                    Err(Error::Inequality(msg)) => {
                        eprintln!("{msg}");
                        return Ok(false);
                    }
                    r => r?,
                },
                None => roe::schur_defect(&b, &p)?,
            };
            println!("defect\t{}", io::format_f64(r.defect));
            println!("bound\t{}", io::format_f64(r.bound));
            println!("operator_norm\t{}", io::format_f64(r.operator_norm));
            let mut ok = r.defect <= r.bound + roe::BOUND_SLACK;
            if let Some(eps) = epsilon {
                println!("delta\t{}", io::format_f64(r.delta));
                ok &= r.defect < eps;
            }
            Ok(ok)
        }
    }
}

fn onl_cmd(c: OnlCmd) -> Outcome {
    match c {
        OnlCmd::Profile { space, gens, windows, operator, constant, csv, certificate } => {
            let mut cfg = PipelineConfig::new(SpaceSource::File(space.space.clone()), Chain::OnlProfile, 1.0);
            cfg.generators = gens.clone();
            cfg.windows = windows.clone();
            cfg.constant = constant;
            cfg.operator = match operator {
                OperatorKind::Adjacency => OperatorChoice::Adjacency,
                OperatorKind::Laplacian => OperatorChoice::Laplacian,
            };
            let report = pipeline::run_pipeline(&cfg)?;
            write_out(&report.to_csv()?, csv.as_deref())?;
            for v in &report.verdicts {
                eprintln!("{}\t{}\t{}", v.check, if v.passed { "pass" } else { "FAIL" }, v.inequality);
            }
            if let Some(path) = certificate {
                let file = SpaceFile::load(&space.space)?;
                let g = pipeline::select(&file, &gens)?;
                let a = match operator {
                    OperatorKind::Adjacency => BandedOperator::adjacency(&g),
                    OperatorKind::Laplacian => BandedOperator::laplacian(&g),
                };
                let w = *windows.iter().max().ok_or_else(|| Error::Config("no windows".into()))?;
                let window = g.power(w);
                let best = onl::beta_check(&a, &window, f64::MIN_POSITIVE)?.best_ratio();
                let c = constant.unwrap_or(best).min(best);
                let c = if window == coarse_lab::Entourage::full(window.space()) { c } else { c.min(1.0 - 1e-15) };
                if let Some(cert) = onl::beta_check(&a, &window, c)?.certificate() {
                    io::save_certificate(cert, file.reference(&window), &path)?;
                }
            }
            Ok(report.passed())
        }
        OnlCmd::Amplify { space, op, band, window, kappa, steps, out } => {
            let file = SpaceFile::load(&space.space)?;
            let a = operator(&file, &op)?;
            let a = a.scale(coarse_lab::linalg::C64::new(1.0 / roe::operator_norm(&a)?.value, 0.0));
            let t = pipeline::select(&file, &band)?;
            let s = pipeline::select(&file, &window)?;
            let check = onl::beta_check(&a, &s, f64::MIN_POSITIVE)?;
            let (_, sparse) = onl::localized_norm(&a, &s, check.center());
            let mut xi = vec![coarse_lab::linalg::C64::new(0.0, 0.0); file.space.len()];
            for (i, v) in sparse {
                xi[i] = v;
            }
            let cert = onl::amplify(&a, &t, &s, &xi, kappa, steps)?;
            eprintln!(
                "start ratio {}, certified ratio {} at {}",
                io::format_f64(check.best_ratio()),
                io::format_f64(cert.ratio),
                file.space.label(cert.center)
            );
            write_out(&io::to_json_string(&io::certificate_to_value(&cert, file.reference(&cert.window))), out.as_deref())?;
            Ok(cert.verify(&a).is_ok())
        }
        OnlCmd::Invnorm { space, band, window, trials, seed } => {
            let file = SpaceFile::load(&space.space)?;
            let t = pipeline::select(&file, &band)?;
            let s = pipeline::select(&file, &window)?;
            let est = onl::inverse_compression_norm(&t, &s, trials, seed)?;
            println!("lower_bound\t{}", io::format_f64(est.lower_bound));
            println!("samples\t{}", est.samples);
            println!("argmax_kind\t{}", est.argmax_kind.as_str());
            Ok(true)
        }
    }
}

fn pipeline_run(config: &Path, csv: Option<PathBuf>, json: Option<PathBuf>) -> Outcome {
    let mut cfg = PipelineConfig::load(config)?;
    cfg.csv = csv.or(cfg.csv);
    cfg.json = json.or(cfg.json);
    let report = pipeline::run_pipeline(&cfg)?;
    if cfg.csv.is_none() && cfg.json.is_none() {
        print!("{}", report.to_csv()?);
    }
    report.emit(cfg.csv.as_deref(), cfg.json.as_deref())?;
    for v in &report.verdicts {
        eprintln!("{}\t{}", if v.passed { "pass" } else { "FAIL" }, v.check);
    }
    Ok(report.passed())
}
