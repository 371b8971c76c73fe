//! Config-driven runs chaining the library operations, with one verdict per
//! checked inequality.

mod report;

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::coarse::Entourage;
use crate::error::{Error, Result};
use crate::gallery::{self, FiniteGroup};
use crate::io::{self, as_array, as_f64, as_str, as_u64, Obj, SpaceFile};
use crate::linalg::C64;
use crate::onl;
use crate::roe::{self, BandedOperator};
use crate::witness::{self, convert, L2Profile};

pub use report::{Cell, Report, Verdict, VERDICT_COLUMNS};

/// Columns of the `onl-profile` table.
pub const PROFILE_COLUMNS: [&str; 8] =
    ["space", "operator", "window_name", "window_radius", "best_ratio", "center", "norm", "method"];

/// Slack allowed on inequalities between two computed norms.
pub const NORM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum GroupSource {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    File(PathBuf),
}

impl GroupSource {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSource::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupSource::Dihedral(n) => FiniteGroup::dihedral(*n),
            GroupSource::Symmetric(k) => FiniteGroup::symmetric(*k),
            GroupSource::File(p) => io::load_group(p),
        }
    }

    /// `cyclic:N`, `dihedral:N`, `symmetric:K`, or a path to a group file.
    pub fn parse(text: &str) -> Result<GroupSource> {
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Config(format!("bad group size in `{text}`")));
        Ok(match text.split_once(':') {
            Some(("cyclic", n)) => GroupSource::Cyclic(num(n)?),
            Some(("dihedral", n)) => GroupSource::Dihedral(num(n)?),
            Some(("symmetric", k)) => GroupSource::Symmetric(num(k)?),
            _ => GroupSource::File(PathBuf::from(text)),
        })
    }

    fn describe(&self) -> String {
        match self {
            GroupSource::Cyclic(n) => format!("cyclic:{n}"),
            GroupSource::Dihedral(n) => format!("dihedral:{n}"),
            GroupSource::Symmetric(k) => format!("symmetric:{k}"),
            GroupSource::File(p) => p.display().to_string(),
        }
    }
}

/// Where the space comes from. Built-in families store their generating
/// entourage as `gens`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSource {
    File(PathBuf),
    Cycle { n: usize },
    Path { n: usize },
    RandomRegular { n: usize, d: usize, seed: u64 },
    EdgeList(PathBuf),
    Metric { file: PathBuf, threshold: f64 },
    Cayley(GroupSource),
    Box { groups: Vec<GroupSource>, radius: usize },
}

impl SpaceSource {
    pub fn build(&self) -> Result<SpaceFile> {
        let (space, gens) = match self {
            SpaceSource::File(p) => return SpaceFile::load(p),
            SpaceSource::Cycle { n } => gallery::cycle(*n),
            SpaceSource::Path { n } => gallery::path(*n),
            SpaceSource::RandomRegular { n, d, seed } => gallery::random_regular_graph(*n, *d, *seed)?,
            SpaceSource::EdgeList(p) => gallery::parse_edge_list(&std::fs::read_to_string(p)?)?,
            SpaceSource::Metric { file, threshold } => gallery::metric_space(&io::load_metric(file)?, *threshold)?,
            SpaceSource::Cayley(g) => {
                let g = g.build()?;
                let (space, act) = gallery::left_translation(&g);
                let mut k: Vec<usize> = g.generators().iter().flat_map(|&s| [s, g.inverse(s)]).collect();
                k.push(g.identity());
                k.sort_unstable();
                k.dedup();
                let t = gallery::group_action_space(&g, &space, &act, &k)?;
                (space, t)
            }
            SpaceSource::Box { groups, radius } => {
                let seq = groups.iter().map(GroupSource::build).collect::<Result<Vec<_>>>()?;
                gallery::box_space(&seq, *radius)?
            }
        };
        let mut file = SpaceFile::new(space);
        file.insert("gens", gens)?;
        Ok(file)
    }

    pub fn describe(&self) -> String {
        match self {
            SpaceSource::File(p) => format!("file:{}", p.display()),
            SpaceSource::Cycle { n } => format!("cycle:{n}"),
            SpaceSource::Path { n } => format!("path:{n}"),
            SpaceSource::RandomRegular { n, d, seed } => format!("random-regular:{n}:{d}:{seed}"),
            SpaceSource::EdgeList(p) => format!("edge-list:{}", p.display()),
            SpaceSource::Metric { file, threshold } => format!("metric:{}:{threshold}", file.display()),
            SpaceSource::Cayley(g) => format!("cayley:{}", g.describe()),
            SpaceSource::Box { groups, radius } => format!(
                "box:{}:{radius}",
                groups.iter().map(GroupSource::describe).collect::<Vec<_>>().join("+")
            ),
        }
    }

    fn from_value(v: &Value, ptr: &str, base: &Path) -> Result<SpaceSource> {
        let mut o = Obj::new(v, ptr)?;
        let (family, fp) = o.req("family")?;
        let usize_key = |o: &mut Obj, key: &'static str| -> Result<usize> {
            let (v, p) = o.req(key)?;
            Ok(as_u64(v, &p)? as usize)
        };
        let path_key = |o: &mut Obj, key: &'static str| -> Result<PathBuf> {
            let (v, p) = o.req(key)?;
            Ok(base.join(as_str(v, &p)?))
        };
        let src = match as_str(family, &fp)? {
            "file" => SpaceSource::File(path_key(&mut o, "path")?),
            "cycle" => SpaceSource::Cycle { n: usize_key(&mut o, "n")? },
            "path" => SpaceSource::Path { n: usize_key(&mut o, "n")? },
            "random-regular" => SpaceSource::RandomRegular {
                n: usize_key(&mut o, "n")?,
                d: usize_key(&mut o, "d")?,
                seed: usize_key(&mut o, "seed")? as u64,
            },
            "edge-list" => SpaceSource::EdgeList(path_key(&mut o, "path")?),
            "metric" => {
                let file = path_key(&mut o, "path")?;
                let (t, tp) = o.req("threshold")?;
                SpaceSource::Metric { file, threshold: as_f64(t, &tp)? }
            }
            "cayley" => {
                let (g, gp) = o.req("group")?;
                SpaceSource::Cayley(group_from_config(g, &gp, base)?)
            }
            "box" => {
                let (gs, gp) = o.req("groups")?;
                let groups = as_array(gs, &gp)?
                    .iter()
                    .enumerate()
                    .map(|(i, g)| group_from_config(g, &format!("{gp}/{i}"), base))
                    .collect::<Result<Vec<_>>>()?;
                SpaceSource::Box { groups, radius: usize_key(&mut o, "radius")? }
            }
            other => return Err(io::schema(&fp, format!("unknown space family `{other}`"))),
        };
        o.finish()?;
        Ok(src)
    }
}

fn group_from_config(v: &Value, ptr: &str, base: &Path) -> Result<GroupSource> {
    let text = as_str(v, ptr)?;
    Ok(match GroupSource::parse(text)? {
        GroupSource::File(p) => GroupSource::File(base.join(p)),
        g => g,
    })
}

/// `diagonal`, `empty`, `full`, `NAME`, or `NAME^K` (the `K`-fold composite).
pub fn select(file: &SpaceFile, selection: &str) -> Result<Entourage> {
    let s = &file.space;
    Ok(match selection {
        "diagonal" => Entourage::diagonal(s),
        "empty" => Entourage::empty(s),
        "full" => Entourage::full(s),
        _ => match selection.rsplit_once('^') {
            Some((name, k)) if file.get(selection).is_err() => {
                let k: usize = k.parse().map_err(|_| Error::Config(format!("bad power in `{selection}`")))?;
                select(file, name)?.power(k)
            }
            _ => file.get(selection)?.clone(),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chain {
    WitnessRoundtrip,
    Nuclearity,
    OnlProfile,
    OnlForward,
}

impl Chain {
    pub fn parse(s: &str) -> Result<Chain> {
        match s {
            "witness-roundtrip" => Ok(Chain::WitnessRoundtrip),
            "nuclearity" => Ok(Chain::Nuclearity),
            "onl-profile" => Ok(Chain::OnlProfile),
            "onl-forward" => Ok(Chain::OnlForward),
            _ => Err(Error::Config(format!("unknown chain `{s}`"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Chain::WitnessRoundtrip => "witness-roundtrip",
            Chain::Nuclearity => "nuclearity",
            Chain::OnlProfile => "onl-profile",
            Chain::OnlForward => "onl-forward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorChoice {
    Adjacency,
    Laplacian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub space: SpaceSource,
    /// Entourage the witnesses, profiles and operators are built from.
    pub generators: String,
    /// Entourage the inequalities are quantified over.
    pub tested: String,
    pub epsilon: f64,
    pub seed: u64,
    pub chain: Chain,
    /// Window radii for `onl-profile`.
    pub windows: Vec<usize>,
    /// Threshold for `onl-profile`; without it only monotonicity is checked.
    pub constant: Option<f64>,
    pub operator: OperatorChoice,
    /// Random operators drawn per chain.
    pub trials: usize,
    /// Largest ball radius tried for witnesses and profiles.
    pub radius_max: usize,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn new(space: SpaceSource, chain: Chain, epsilon: f64) -> PipelineConfig {
        PipelineConfig {
            space,
            generators: "gens".into(),
            tested: "gens".into(),
            epsilon,
            seed: 0,
            chain,
            windows: vec![1, 2, 3],
            constant: None,
            operator: OperatorChoice::Adjacency,
            trials: 10,
            radius_max: 20,
            csv: None,
            json: None,
        }
    }

    /// Paths inside the config are resolved against `base`.
    pub fn from_value(v: &Value, base: &Path) -> Result<PipelineConfig> {
        let mut o = Obj::new(v, "")?;
        let (space, sp) = o.req("space")?;
        let space = SpaceSource::from_value(space, &sp, base)?;
        let (chain, cp) = o.req("chain")?;
        let chain = Chain::parse(as_str(chain, &cp)?).map_err(|e| io::schema(&cp, e.to_string()))?;
        let (eps, ep) = o.req("epsilon")?;
        let epsilon = as_f64(eps, &ep)?;
        if !(epsilon > 0.0) {
            return Err(io::schema(&ep, "epsilon must be positive"));
        }
        let mut cfg = PipelineConfig::new(space, chain, epsilon);
        if let Some((v, p)) = o.opt("generators") {
            cfg.generators = as_str(v, &p)?.to_string();
        }
        if let Some((v, p)) = o.opt("tested") {
            cfg.tested = as_str(v, &p)?.to_string();
        }
        if let Some((v, p)) = o.opt("seed") {
            cfg.seed = as_u64(v, &p)?;
        }
        if let Some((v, p)) = o.opt("windows") {
            cfg.windows = as_array(v, &p)?
                .iter()
                .enumerate()
                .map(|(i, w)| as_u64(w, &format!("{p}/{i}")).map(|w| w as usize))
                .collect::<Result<_>>()?;
        }
        if let Some((v, p)) = o.opt("constant") {
            let c = as_f64(v, &p)?;
            if !(c > 0.0 && c <= 1.0) {
                return Err(io::schema(&p, "constant must lie in (0, 1]"));
            }
            cfg.constant = Some(c);
        }
        if let Some((v, p)) = o.opt("operator") {
            cfg.operator = match as_str(v, &p)? {
                "adjacency" => OperatorChoice::Adjacency,
                "laplacian" => OperatorChoice::Laplacian,
                other => return Err(io::schema(&p, format!("unknown operator `{other}`"))),
            };
        }
        if let Some((v, p)) = o.opt("trials") {
            cfg.trials = as_u64(v, &p)? as usize;
        }
        if let Some((v, p)) = o.opt("radius_max") {
            cfg.radius_max = as_u64(v, &p)? as usize;
        }
        if let Some((v, p)) = o.opt("output") {
            let mut out = Obj::new(v, &p)?;
            if let Some((c, cp)) = out.opt("csv") {
                cfg.csv = Some(base.join(as_str(c, &cp)?));
            }
            if let Some((j, jp)) = out.opt("json") {
                cfg.json = Some(base.join(as_str(j, &jp)?));
            }
            out.finish()?;
        }
        o.finish()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let v = io::read_json(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        PipelineConfig::from_value(&v, base)
    }
}

/// Independent generator for one stage of a run.
pub fn stage_rng(seed: u64, stage: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stage);
    rng
}

/// Uniform complex entries in the unit square on `band`.
pub fn random_operator(band: &Entourage, rng: &mut impl Rng) -> BandedOperator {
    let values = (0..band.len()).map(|_| C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect();
    BandedOperator::new(band.clone(), values).expect("one value per pair")
}

fn normalized(b: &BandedOperator) -> Result<Option<BandedOperator>> {
    let norm = roe::operator_norm(b)?.value;
    Ok(if norm > 0.0 { Some(b.scale(C64::new(1.0 / norm, 0.0))) } else { None })
}

/// Word-length distances `(y, d(x, y))` with `d ≤ r_max`, following pairs
/// `(x, y) ∈ G`, sorted by `y`.
fn distances(gens: &Entourage, r_max: usize) -> Vec<Vec<(usize, usize)>> {
    let n = gens.space().len();
    let mut seen = vec![usize::MAX; n];
    (0..n)
        .map(|x| {
            let mut out = vec![(x, 0)];
            seen[x] = x;
            let mut frontier = vec![x];
            for d in 1..=r_max {
                let mut next = Vec::new();
                for &u in &frontier {
                    for &v in gens.row(u) {
                        if seen[v] != x {
                            seen[v] = x;
                            next.push(v);
                            out.push((v, d));
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                frontier = next;
            }
            out.sort_unstable();
            out
        })
        .collect()
}

fn tent_from(space: &std::sync::Arc<crate::Space>, dist: &[Vec<(usize, usize)>], r: usize) -> Result<L2Profile> {
    let weights: Vec<Vec<(usize, f64)>> = dist
        .iter()
        .map(|row| {
            let w: Vec<(usize, f64)> =
                row.iter().filter(|e| e.1 <= r).map(|&(y, d)| (y, (r + 1 - d) as f64)).collect();
            let norm = w.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt();
            w.into_iter().map(|(y, v)| (y, v / norm)).collect()
        })
        .collect();
    let pairs = weights.iter().enumerate().flat_map(|(x, w)| w.iter().map(move |&(y, _)| (x, y)));
    let support = Entourage::from_pairs(space, pairs)?.symmetrized();
    L2Profile::from_real(support, weights)
}

/// Tent profile `η_x(y) ∝ r + 1 - d(x, y)` on the `G^r` ball, with `d` the
/// word length in `G`.
pub fn tent_profile(gens: &Entourage, r: usize) -> Result<L2Profile> {
    tent_from(gens.space(), &distances(gens, r), r)
}

/// Smallest `r ≤ r_max` whose [`tent_profile`] has displacement below
/// `bound` on `t`, with that displacement.
pub fn ball_profile(gens: &Entourage, t: &Entourage, bound: f64, r_max: usize) -> Result<Option<(usize, L2Profile, f64)>> {
    let dist = distances(gens, r_max);
    for r in 0..=r_max {
        let p = tent_from(gens.space(), &dist, r)?;
        let d = witness::verify_l2(&p, t)?.epsilon;
        if d < bound {
            return Ok(Some((r, p, d)));
        }
    }
    Ok(None)
}

/// Runs the configured chain. Errors abort the run without a report.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Report> {
    let file = cfg.space.build()?;
    let gens = select(&file, &cfg.generators)?;
    let tested = select(&file, &cfg.tested)?;
    let mut report = match cfg.chain {
        Chain::WitnessRoundtrip => witness_roundtrip(cfg, &gens, &tested)?,
        Chain::Nuclearity => nuclearity(cfg, &gens)?,
        Chain::OnlProfile => onl_profile(cfg, &file, &gens)?,
        Chain::OnlForward => onl_forward(cfg, &gens)?,
    };
    let mut meta = vec![
        ("chain".to_string(), cfg.chain.as_str().to_string()),
        ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ("seed".into(), cfg.seed.to_string()),
        ("epsilon".into(), io::format_f64(cfg.epsilon)),
        ("space".into(), cfg.space.describe()),
        ("points".into(), file.space.len().to_string()),
        ("generators".into(), cfg.generators.clone()),
        ("tested".into(), cfg.tested.clone()),
    ];
    meta.append(&mut report.metadata);
    report.metadata = meta;
    Ok(report)
}

fn verdict_table() -> Report {
    Report::new(&VERDICT_COLUMNS)
}

fn finish(mut r: Report) -> Report {
    r.rows = r.verdicts.iter().map(report::verdict_row).collect();
    r
}

fn witness_roundtrip(cfg: &PipelineConfig, gens: &Entourage, t: &Entourage) -> Result<Report> {
    let eps = cfg.epsilon;
    let vac = t.is_empty();
    let mut r = verdict_table();
    let Some((radius, w)) = witness::folner_from_balls(gens, t, eps, cfg.radius_max)? else {
        r.push_verdict(Verdict::new(
            "folner_search",
            "folner_from_balls",
            "radius <= radius_max",
            f64::INFINITY,
            cfg.radius_max as f64,
            false,
        ));
        return Ok(finish(r));
    };
    r.meta("folner_radius", radius);
    let q = witness::verify_folner(&w, t, eps)?;
    r.push_verdict(Verdict::new("folner_ratio", "verify_folner", "ratio < eps", q.epsilon, eps, q.epsilon < eps).vacuous(vac));

    let (l1, l2) = convert::folner_to_l2(&w)?;
    let l1_disp = t.pairs().map(|(x, y)| l1.distance(x, y)).fold(0.0, f64::max);
    r.push_verdict(Verdict::new("l1_displacement", "folner_to_l2", "value < 2 eps", l1_disp, 2.0 * eps, l1_disp < 2.0 * eps).vacuous(vac));
    let disp = witness::verify_l2(&l2, t)?.epsilon;
    let bound = (2.0 * eps).sqrt();
    r.push_verdict(Verdict::new("l2_displacement", "folner_to_l2", "value <= sqrt(2 eps)", disp, bound, disp <= bound).vacuous(vac));

    let k = convert::l2_to_kernel(&l2);
    let kq = witness::verify_kernel(&k, t)?;
    r.push_verdict(
        Verdict::new("kernel_defect", "l2_to_kernel", "sup |1 - k| <= displacement", kq.quality.epsilon, disp, kq.quality.epsilon <= disp)
            .vacuous(vac),
    );
    r.push_verdict(Verdict::new(
        "kernel_psd",
        "l2_to_kernel",
        "min eigenvalue >= -tol",
        kq.min_eigenvalue,
        -k.psd_tolerance(),
        kq.min_eigenvalue >= -k.psd_tolerance(),
    ));

    let back = convert::kernel_to_l2(&k, eps)?;
    r.meta("kernel_band_radius", back.radius);
    r.meta("kernel_displacement_bound", io::format_f64(convert::kernel_displacement_bound(kq.quality.epsilon)));
    r.push_verdict(Verdict::new("sqrt_residual", "kernel_to_l2", "||a - b* b|| < eps", back.residual, eps, back.residual < eps));
    let gram_err = k
        .entries()
        .map(|(x, y, v)| (v - back.profile.inner(x, y)).norm())
        .fold(0.0, f64::max);
    r.push_verdict(Verdict::new("gram_roundtrip", "kernel_to_l2", "sup |k - gram| <= 2 eps", gram_err, 2.0 * eps, gram_err <= 2.0 * eps));

    let disp2 = witness::verify_l2(&back.profile, t)?.epsilon;
    r.meta("recovered_displacement", io::format_f64(disp2));
    if !(disp2 < 1.0) {
        r.push_verdict(Verdict::new("recovered_displacement", "kernel_to_l2", "value < 1", disp2, 1.0, false));
        return Ok(finish(r));
    }
    let padded = disp2 + 1e-12;
    let out = convert::l2_to_folner(&back.profile, t, padded)?;
    r.meta("grid", out.grid);
    let target = 2.0 * disp2 / (1.0 - disp2);
    let ratio = if vac { 0.0 } else { witness::verify_folner(&out.witness, t, f64::INFINITY)?.epsilon };
    r.push_verdict(
        Verdict::new("folner_recovered", "l2_to_folner", "ratio < 2 e' / (1 - e')", ratio, target, ratio < target).vacuous(vac),
    );
    Ok(finish(r))
}

fn operators(cfg: &PipelineConfig, band: &Entourage, stage: u64) -> Result<Vec<(String, BandedOperator)>> {
    let mut rng = stage_rng(cfg.seed, stage);
    let mut out = Vec::new();
    if let Some(a) = normalized(&BandedOperator::adjacency(band))? {
        out.push(("adjacency".to_string(), a));
    }
    for i in 0..cfg.trials {
        if let Some(b) = normalized(&random_operator(band, &mut rng))? {
            out.push((format!("random{i}"), b));
        }
    }
    Ok(out)
}

fn nuclearity(cfg: &PipelineConfig, gens: &Entourage) -> Result<Report> {
    let eps = cfg.epsilon;
    let mut r = verdict_table();
    let deg = gens.degree().max().max(1) as f64;
    // operators are normalized, so δ = eps / deg(T)
    let Some((radius, p, disp)) = ball_profile(gens, gens, eps / deg, cfg.radius_max)? else {
        r.push_verdict(Verdict::new("profile_search", "ball_profile", "radius <= radius_max", f64::INFINITY, cfg.radius_max as f64, false));
        return Ok(finish(r));
    };
    r.meta("profile_radius", radius);
    r.meta("profile_displacement", io::format_f64(disp));
    let vac = gens.is_empty();
    for (name, b) in operators(cfg, gens, 1)? {
        let d = roe::nuclearity_defect(&b, &p, gens, eps)?;
        r.push_verdict(
            Verdict::new(&format!("{name}_schur"), "nuclearity_defect", "defect <= schur bound", d.defect, d.bound, d.defect <= d.bound + NORM_SLACK)
                .vacuous(vac),
        );
        r.push_verdict(Verdict::new(&format!("{name}_eps"), "nuclearity_defect", "defect < eps", d.defect, eps, d.defect < eps).vacuous(vac));
    }
    Ok(finish(r))
}

fn onl_profile(cfg: &PipelineConfig, file: &SpaceFile, gens: &Entourage) -> Result<Report> {
    let a = match cfg.operator {
        OperatorChoice::Adjacency => BandedOperator::adjacency(gens),
        OperatorChoice::Laplacian => BandedOperator::laplacian(gens),
    };
    let op_name = match cfg.operator {
        OperatorChoice::Adjacency => "adjacency",
        OperatorChoice::Laplacian => "laplacian",
    };
    let norm = roe::operator_norm(&a)?;
    let mut r = Report::new(&PROFILE_COLUMNS);
    let mut windows = cfg.windows.clone();
    windows.sort_unstable();
    windows.dedup();
    let mut previous: Option<f64> = None;
    for &w in &windows {
        let window = gens.power(w);
        let name = format!("{}^{w}", cfg.generators);
        let c = cfg.constant.unwrap_or(f64::MIN_POSITIVE).min(if window == Entourage::full(window.space()) { 1.0 } else { 1.0 - 1e-15 });
        let check = onl::beta_check(&a, &window, c)?;
        r.push_row(vec![
            cfg.space.describe().into(),
            op_name.into(),
            name.clone().into(),
            w.into(),
            check.best_ratio().into(),
            file.space.label(check.center()).into(),
            norm.value.into(),
            norm.method.as_str().into(),
        ]);
        if let Some(c) = cfg.constant {
            let ok = match check.certificate() {
                Some(cert) => cert.verify(&a).is_ok(),
                None => false,
            };
            r.push_verdict(Verdict::new(&format!("beta_{name}"), "beta_check", "ratio >= c", check.best_ratio(), c, ok));
        }
        if let Some(prev) = previous {
            r.push_verdict(Verdict::new(
                &format!("monotone_{name}"),
                "beta_check",
                "ratio >= ratio at smaller window",
                check.best_ratio(),
                prev,
                check.best_ratio() >= prev - 1e-12,
            ));
        }
        previous = Some(check.best_ratio());
    }
    Ok(r)
}

fn onl_forward(cfg: &PipelineConfig, gens: &Entourage) -> Result<Report> {
    let eps = cfg.epsilon;
    let mut r = verdict_table();
    if !(eps < 0.5) {
        return Err(Error::Config(format!("onl-forward needs epsilon < 1/2, got {eps}")));
    }
    let deg = gens.degree().max().max(1) as f64;
    let Some((radius, p, disp)) = ball_profile(gens, gens, eps / deg, cfg.radius_max)? else {
        r.push_verdict(Verdict::new("profile_search", "ball_profile", "radius <= radius_max", f64::INFINITY, cfg.radius_max as f64, false));
        return Ok(finish(r));
    };
    r.meta("profile_radius", radius);
    r.meta("profile_displacement", io::format_f64(disp));
    let k = onl::kernel_from_ucp(gens, p.support(), &p)?;
    r.push_verdict(Verdict::new("ucp_kernel_psd", "kernel_from_ucp", "min eigenvalue >= -1e-9", k.min_eigenvalue, -onl::PSD_TOL, true));
    for (name, b) in operators(cfg, gens, 2)? {
        let f = onl::forward_chain(&b, &p, gens, eps)?;
        let lower = (1.0 - eps) * f.operator_norm;
        r.push_verdict(Verdict::new(
            &format!("{name}_compression"),
            "compress",
            "||Phi_S(b)|| >= (1 - eps) ||b||",
            f.compression_norm,
            lower,
            f.compression_norm >= lower - NORM_SLACK,
        ));
        let c = 1.0 - 2.0 * eps;
        let ok = f.certificate.certificate().is_some_and(|cert| cert.verify(&b).is_ok());
        r.push_verdict(Verdict::new(&format!("{name}_beta"), "beta_check", "ratio >= 1 - 2 eps", f.certificate.best_ratio(), c, ok));
    }
    Ok(finish(r))
}
