//! Acceptance suite: ten criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test --test acceptance`; pass criterion numbers after
//! `--` to run a subset.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coarse_lab::gallery;
use coarse_lab::linalg::C64;
use coarse_lab::onl::{self, AmplifiedOperator};
use coarse_lab::pipeline::{self, Chain, PipelineConfig, SpaceSource};
use coarse_lab::roe::{self, BandedOperator};
use coarse_lab::witness::{self, convert, FolnerWitness, L2Profile, Variant};
use coarse_lab::{Entourage, Space};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: coarse_lab::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn crand(r: &mut ChaCha8Rng) -> C64 {
    C64::new(r.gen_range(-1.0..=1.0), r.gen_range(-1.0..=1.0))
}

// ---------------------------------------------------------------------------
// oracles

/// Boolean relation oracle.
#[derive(Clone, PartialEq, Debug)]
struct Rel {
    n: usize,
    m: Vec<bool>,
}

impl Rel {
    fn random(n: usize, p: f64, r: &mut ChaCha8Rng) -> Rel {
        Rel { n, m: (0..n * n).map(|_| r.gen_bool(p)).collect() }
    }
    fn has(&self, x: usize, y: usize) -> bool {
        self.m[x * self.n + y]
    }
    fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Rel {
        Rel { n, m: (0..n * n).map(|i| f(i / n, i % n)).collect() }
    }
    fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n * self.n).filter(|&i| self.m[i]).map(|i| (i / self.n, i % self.n)).collect()
    }
    fn of(e: &Entourage) -> Rel {
        let n = e.space().len();
        let mut m = vec![false; n * n];
        for (x, y) in e.pairs() {
            m[x * n + y] = true;
        }
        Rel { n, m }
    }
    fn compose(&self, o: &Rel) -> Rel {
        Rel::from_fn(self.n, |x, y| (0..self.n).any(|z| self.has(x, z) && o.has(z, y)))
    }
}

fn dense(b: &BandedOperator) -> DMatrix<C64> {
    let n = b.space().len();
    let mut m = DMatrix::zeros(n, n);
    for (x, y, v) in b.entries() {
        m[(x, y)] = v;
    }
    m
}

fn svd_norm(m: &DMatrix<C64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Largest singular value of the columns `cols` of `m`, via the eigenvalues
/// of the Gram matrix.
fn column_norm(m: &DMatrix<C64>, cols: &[usize]) -> f64 {
    let sub = m.select_columns(cols.iter());
    let g = sub.adjoint() * &sub;
    g.symmetric_eigenvalues().max().max(0.0).sqrt()
}

fn cyc_dist(n: usize, x: usize, y: usize) -> usize {
    let d = x.abs_diff(y);
    d.min(n - d)
}

/// Word-length distances from every point by breadth-first search on the
/// pairs of `g`.
fn bfs_all(g: &Entourage) -> Vec<Vec<usize>> {
    let n = g.space().len();
    let mut adj = vec![Vec::new(); n];
    for (x, y) in g.pairs() {
        adj[x].push(y);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = std::collections::VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in &adj[u] {
                    if d[v] == usize::MAX {
                        d[v] = d[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            d
        })
        .collect()
}

fn random_space(r: &mut ChaCha8Rng, max_n: usize) -> (String, std::sync::Arc<Space>, Entourage) {
    let n = r.gen_range(8..=max_n);
    match r.gen_range(0..3) {
        0 => {
            let (s, g) = gallery::cycle(n);
            (format!("cycle({n})"), s, g)
        }
        1 => {
            let (s, g) = gallery::path(n);
            (format!("path({n})"), s, g)
        }
        _ => {
            let n = n + n % 2;
            let seed = r.gen();
            let (s, g) = gallery::random_regular_graph(n, 3, seed).expect("3-regular graph");
            (format!("3-regular({n}, {seed})"), s, g)
        }
    }
}

fn random_operator(band: &Entourage, r: &mut ChaCha8Rng) -> BandedOperator {
    let vals = (0..band.len()).map(|_| crand(r)).collect();
    BandedOperator::new(band.clone(), vals).expect("one value per pair")
}

// ---------------------------------------------------------------------------
// 1

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for seed in 0..500u64 {
        let mut r = rng(seed);
        let n = r.gen_range(1..=12);
        let space = Space::numbered(n);
        let p = r.gen_range(0.05..0.6);
        let (ra, rb, rc) = (Rel::random(n, p, &mut r), Rel::random(n, p, &mut r), Rel::random(n, p, &mut r));
        let mk = |rel: &Rel| Entourage::from_pairs(&space, rel.pairs()).unwrap();
        let (a, b, c) = (mk(&ra), mk(&rb), mk(&rc));
        let ctx = |what: &str| format!("seed {seed} (n = {n}): {what}");

        let diag = Entourage::diagonal(&space);
        ensure(Rel::of(&diag) == Rel::from_fn(n, |x, y| x == y), || ctx("diagonal"))?;
        ensure((0..n).all(|x| diag.contains(x, x)), || ctx("diagonal membership"))?;
        ensure(Rel::of(&a.inverse()) == Rel::from_fn(n, |x, y| ra.has(y, x)), || ctx("inverse"))?;
        ensure(a.inverse().inverse() == a, || ctx("inverse involution"))?;
        let ab = a.compose(&b).unwrap();
        ensure(Rel::of(&ab) == ra.compose(&rb), || ctx("composition"))?;
        ensure(
            ab.compose(&c).unwrap() == a.compose(&b.compose(&c).unwrap()).unwrap(),
            || ctx("associativity"),
        )?;
        ensure(ab.inverse() == b.inverse().compose(&a.inverse()).unwrap(), || ctx("(AB)^-1 = B^-1 A^-1"))?;
        ensure(a.compose(&diag).unwrap() == a && diag.compose(&a).unwrap() == a, || ctx("diagonal is a unit"))?;
        let u = a.union(&b).unwrap();
        ensure(Rel::of(&u) == Rel::from_fn(n, |x, y| ra.has(x, y) || rb.has(x, y)), || ctx("union"))?;
        let i = a.intersection(&b).unwrap();
        ensure(Rel::of(&i) == Rel::from_fn(n, |x, y| ra.has(x, y) && rb.has(x, y)), || ctx("intersection"))?;

        // subset coherence
        let sub_rel = Rel::from_fn(n, |x, y| ra.has(x, y) && (x + 2 * y + seed as usize) % 3 != 0);
        let sub = mk(&sub_rel);
        ensure(sub.is_subset(&a) && i.is_subset(&a) && a.is_subset(&u), || ctx("subset"))?;
        ensure(a.is_subset(&b) == ra.m.iter().zip(&rb.m).all(|(p, q)| !p || *q), || ctx("subset oracle"))?;
        ensure(sub.compose(&c).unwrap().is_subset(&a.compose(&c).unwrap()), || ctx("composition monotone"))?;
        ensure(sub.inverse().is_subset(&a.inverse()), || ctx("inverse monotone"))?;

        // balls and degree
        for x in 0..n {
            let ball: Vec<usize> = (0..n).filter(|&w| ra.has(w, x)).collect();
            ensure(a.ball_of(x) == ball.as_slice(), || ctx("ball"))?;
        }
        let fwd = (0..n).map(|x| (0..n).filter(|&w| ra.has(w, x)).count()).max().unwrap_or(0);
        let bwd = (0..n).map(|x| (0..n).filter(|&w| ra.has(x, w)).count()).max().unwrap_or(0);
        ensure(a.degree().max() == fwd.max(bwd), || ctx("degree"))?;
        checked += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("runtime {secs:.2} s exceeds 5 s"))?;
    Ok(format!("{checked} relation families agree with the oracle in {secs:.2} s"))
}

// ---------------------------------------------------------------------------
// 2

/// Tent-shaped witness `#A_x(y) = R + 1 - d(x, y)` on the `R`-ball.
fn tent_witness(gens: &Entourage, dist: &[Vec<usize>], radius: usize) -> FolnerWitness {
    let n = gens.space().len();
    let ball = gens.power(radius);
    let counts: Vec<_> = (0..n)
        .flat_map(|x| ball.row(x).iter().map(move |&y| (x, y, (radius + 1 - dist[x][y]) as u64)).collect::<Vec<_>>())
        .collect();
    FolnerWitness::new(ball, counts, Variant::Diagonal).unwrap()
}

/// `#(A_x △ A_y) / #(A_x ∩ A_y)` from the section counts.
fn ratio_oracle(w: &FolnerWitness, x: usize, y: usize) -> f64 {
    let n = w.space().len();
    let (mut sym, mut inter) = (0u64, 0u64);
    for z in 0..n {
        let (a, b) = (w.count(x, z), w.count(y, z));
        sym += a.abs_diff(b);
        inter += a.min(b);
    }
    sym as f64 / inter as f64
}

fn l2_oracle(w: &FolnerWitness) -> Vec<Vec<f64>> {
    let n = w.space().len();
    (0..n)
        .map(|x| {
            let total: u64 = (0..n).map(|y| w.count(x, y)).sum();
            (0..n).map(|y| (w.count(x, y) as f64 / total as f64).sqrt()).collect()
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0f64, String::new());
    for seed in 0..100u64 {
        let mut r = rng(1000 + seed);
        let eps = if seed % 2 == 0 { 0.1 } else { 0.3 };
        let (name, _, gens) = random_space(&mut r, 200);
        let t = if r.gen_bool(0.5) { gens.clone() } else { gens.power(2) };
        let ctx = |what: String| format!("seed {seed} {name} eps {eps}: {what}");

        let w = if seed % 4 < 2 {
            match lib(witness::folner_from_balls(&gens, &t, eps, 60), "ball search")? {
                Some((_, w)) => w,
                None => return Err(ctx("no ball witness".into())),
            }
        } else {
            let dist = bfs_all(&gens);
            (1..=200)
                .map(|rad| tent_witness(&gens, &dist, rad))
                .find(|w| witness::verify_folner(w, &t, eps).is_ok())
                .ok_or_else(|| ctx("no tent witness".into()))?
        };
        let ratio = t.pairs().map(|(x, y)| ratio_oracle(&w, x, y)).fold(0.0, f64::max);
        ensure(t.is_empty() || ratio < eps, || ctx(format!("input witness ratio {ratio}")))?;

        let (_, l2) = lib(convert::folner_to_l2(&w), "folner_to_l2")?;
        let eta = l2_oracle(&w);
        let disp_oracle = t
            .pairs()
            .map(|(x, y)| eta[x].iter().zip(&eta[y]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        let disp = lib(witness::verify_l2(&l2, &t), "verify_l2")?.epsilon;
        ensure((disp - disp_oracle).abs() < 1e-12, || ctx(format!("displacement {disp} vs oracle {disp_oracle}")))?;
        ensure(disp <= (2.0 * eps).sqrt(), || ctx(format!("displacement {disp} > sqrt(2 eps)")))?;

        let k = convert::l2_to_kernel(&l2);
        for (x, y) in t.pairs() {
            // `k(x, x) = ‖η_x‖²` carries rounding of a few ulps
            let d = (C64::new(1.0, 0.0) - k.get(x, y)).norm();
            ensure(d <= disp + 8.0 * f64::EPSILON, || ctx(format!("|1 - k| = {d} > {disp} at ({x}, {y})")))?;
        }

        let back = lib(convert::kernel_to_l2(&k, eps), "kernel_to_l2")?;
        let eps1 = lib(witness::verify_l2(&back.profile, &t), "verify_l2")?.epsilon;
        ensure(eps1 < 1.0, || ctx(format!("recovered displacement {eps1} not below 1")))?;
        let out = lib(convert::l2_to_folner(&back.profile, &t, eps1 + 1e-12), "l2_to_folner")?;
        let target = 2.0 * eps1 / (1.0 - eps1);
        if !t.is_empty() {
            lib(witness::verify_folner(&out.witness, &t, target), "verify_folner at 2e'/(1-e')")?;
        }
        let got = t.pairs().map(|(x, y)| ratio_oracle(&out.witness, x, y)).fold(0.0, f64::max);
        ensure(got < target, || ctx(format!("oracle ratio {got} >= {target}")))?;
        if got / target > worst.0 {
            worst = (got / target, name.clone());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("runtime {secs:.1} s exceeds 60 s"))?;
    Ok(format!("100 witnesses, worst final ratio {:.3} of its bound ({}), {secs:.1} s", worst.0, worst.1))
}

// ---------------------------------------------------------------------------
// 3

fn criterion_3() -> Outcome {
    let mut max_gap = f64::NEG_INFINITY;
    for seed in 0..1000u64 {
        let mut r = rng(2000 + seed);
        let n = if seed % 10 == 0 { r.gen_range(150..=300) } else { r.gen_range(2..=120) };
        let space = Space::numbered(n);
        let band = match seed % 3 {
            0 => {
                let p = r.gen_range(0.01..0.2);
                Entourage::from_pairs(&space, Rel::random(n, p, &mut r).pairs()).unwrap()
            }
            1 => {
                let w = r.gen_range(0..4);
                Entourage::from_pairs(&space, (0..n).flat_map(|x| (0..=w).map(move |k| (x, (x + k) % n)))).unwrap()
            }
            _ => gallery::cycle(n).1,
        };
        let b = if seed % 5 == 0 {
            BandedOperator::from_real_fn(band, |x, y| if (x + y) % 2 == 0 { 1.0 } else { -0.5 })
        } else {
            random_operator(&band, &mut r)
        };
        let norm = lib(roe::operator_norm(&b), "operator_norm")?.value;
        let m = dense(&b);
        let deg = {
            let rows = (0..n).map(|x| (0..n).filter(|&y| b.band().contains(x, y)).count()).max().unwrap_or(0);
            let cols = (0..n).map(|y| (0..n).filter(|&x| b.band().contains(x, y)).count()).max().unwrap_or(0);
            rows.max(cols)
        };
        let bound_oracle = deg as f64 * m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let bound = roe::schur_bound(&b);
        ensure((bound - bound_oracle).abs() <= 1e-12 * bound_oracle.max(1.0), || {
            format!("seed {seed}: schur bound {bound} vs oracle {bound_oracle}")
        })?;
        ensure(norm <= bound + 1e-9, || format!("seed {seed}: ‖b‖ = {norm} > {bound}"))?;
        if seed % 25 == 0 {
            let o = svd_norm(&m);
            ensure((o - norm).abs() <= 1e-9 * o.max(1.0), || format!("seed {seed}: norm {norm} vs SVD {o}"))?;
        }
        max_gap = max_gap.max(norm - bound);
    }
    for n in [1usize, 7, 50, 300] {
        let s = Space::numbered(n);
        let b = BandedOperator::from_real_fn(Entourage::full(&s), |_, _| 1.0);
        let norm = lib(roe::operator_norm(&b), "operator_norm")?.value;
        let bound = roe::schur_bound(&b);
        ensure((norm - bound).abs() <= 1e-9, || format!("all-ones on {n} points: ‖b‖ = {norm}, bound {bound}"))?;
    }
    Ok(format!("1000 operators, max(‖b‖ - bound) = {max_gap:.3e}; all-ones full band attains the bound"))
}

// ---------------------------------------------------------------------------
// 4

fn criterion_4() -> Outcome {
    let (space, gens) = gallery::cycle(24);
    let b = BandedOperator::adjacency(&gens);
    let window = Entourage::from_pairs(&space, (0..24).flat_map(|x| (0..8).map(move |k| (x, (x + k) % 24)))).unwrap();
    let p = lib(L2Profile::uniform(&window), "profile")?;
    let d = lib(roe::schur_defect(&b, &p), "schur_defect")?;
    ensure((d.defect - 0.25).abs() <= 1e-9, || format!("ℤ/24 defect {} != 1/4", d.defect))?;
    let psi = lib(roe::schur_reconstruct(&lib(roe::compress(&b, &window), "compress")?, &p), "reconstruct")?;
    let diff = dense(&psi.sub(&b).unwrap()) + dense(&b) * C64::new(1.0 / 8.0, 0.0);
    ensure(diff.iter().all(|z| z.norm() < 1e-12), || "defect operator is not -(1/8)·adjacency".into())?;

    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let mut r = rng(4000 + seed);
        let n = r.gen_range(40..=120);
        let (_, gens) = if seed % 2 == 0 { gallery::cycle(n) } else { gallery::path(n) };
        let t = if r.gen_bool(0.3) { gens.power(2) } else { gens.clone() };
        let b = random_operator(&t, &mut r);
        let b = b.scale(C64::new(r.gen_range(0.25..1.0) / svd_norm(&dense(&b)), 0.0));
        let eps = r.gen_range(0.3..0.9);
        let norm = svd_norm(&dense(&b));
        let deg = t.degree().max() as f64;
        let delta = eps / (norm * deg);
        let Some((_, tent, disp)) = lib(pipeline::ball_profile(&gens, &t, delta, n), "profile")? else {
            return Err(format!("seed {seed}: no profile beats δ = {delta}"));
        };
        // random phases per coordinate leave the Gram kernel unchanged
        let phases: Vec<C64> = (0..n).map(|_| C64::from_polar(1.0, r.gen_range(0.0..2.0 * PI))).collect();
        let vectors = (0..n).map(|x| tent.vector(x).iter().map(|&(y, v)| (y, v * phases[y])).collect()).collect();
        let p = lib(L2Profile::new(tent.support().clone(), vectors), "profile")?;
        ensure(disp < delta, || format!("seed {seed}: displacement {disp} >= δ {delta}"))?;
        let d = lib(roe::nuclearity_defect(&b, &p, &t, eps), "nuclearity_defect")?;
        ensure(d.defect < eps, || format!("seed {seed}: defect {} >= eps {eps}", d.defect))?;
        worst = worst.max(d.defect / eps);
    }
    Ok(format!("ℤ/24 defect = 1/4 exactly; 200 random pairs, largest defect/eps = {worst:.4}"))
}

// ---------------------------------------------------------------------------
// 5

fn criterion_5() -> Outcome {
    let mut lines = Vec::new();
    let mut stated_failures = Vec::new();
    let n = 400;
    let (_, gens) = gallery::cycle(n);
    let a = BandedOperator::adjacency(&gens);
    let m = dense(&a);
    let norm = svd_norm(&m);
    for w in [5usize, 10, 25, 50] {
        let window = gens.power(w);
        let ratio = lib(onl::beta_check(&a, &window, f64::MIN_POSITIVE), "beta_check")?.best_ratio();
        let oracle = (0..n).step_by(7).map(|x| column_norm(&m, window.ball_of(x))).fold(0.0, f64::max) / norm;
        let stated = (PI / (2 * w + 2) as f64).cos();
        let one_sided = (PI / (2 * w + 4) as f64).cos();
        ensure((ratio - oracle).abs() <= 1e-6, || format!("w = {w}: ratio {ratio} vs oracle {oracle}"))?;
        if (ratio - stated).abs() > 1e-6 {
            stated_failures.push(format!("w={w}: {ratio:.9} vs cos(π/(2w+2)) = {stated:.9}"));
        }
        lines.push(format!("w={w} ratio {ratio:.9} oracle {oracle:.9} cos(π/(2w+4)) {one_sided:.9}"));
    }
    for nn in [100usize, 200, 400] {
        for seed in 0..3u64 {
            let (_, g) = lib(gallery::random_regular_graph(nn, 3, seed), "random graph")?;
            let a = BandedOperator::adjacency(&g);
            let window = g.power(3);
            let ratio = lib(onl::beta_check(&a, &window, f64::MIN_POSITIVE), "beta_check")?.best_ratio();
            let m = dense(&a);
            let oracle = (0..nn).map(|x| column_norm(&m, window.ball_of(x))).fold(0.0, f64::max) / svd_norm(&m);
            println!("    3-regular n={nn} seed={seed}: radius-3 ratio {ratio:.6} (oracle {oracle:.6})");
            ensure((ratio - oracle).abs() <= 1e-6, || format!("n = {nn} seed {seed}: {ratio} vs oracle {oracle}"))?;
            ensure(ratio <= 0.99, || format!("n = {nn} seed {seed}: ratio {ratio} > 0.99"))?;
        }
    }
    for l in &lines {
        println!("    {l}");
    }
    ensure(stated_failures.is_empty(), || {
        format!(
            "cycle ratios match the eigensolver oracle and cos(π/(2w+4)), not the stated closed form: {}",
            stated_failures.join("; ")
        )
    })?;
    Ok("cycle curve and expander contrast hold".into())
}

// ---------------------------------------------------------------------------
// 6

fn criterion_6() -> Outcome {
    let mut done = 0;
    let mut attempts = 0;
    let mut min_margin = f64::INFINITY;
    while done < 200 {
        attempts += 1;
        if attempts > 5000 {
            return Err(format!("only {done} valid instances in {attempts} draws"));
        }
        let mut r = rng(6000 + attempts);
        let (name, space, gens) = random_space(&mut r, 60);
        let t = gens.clone();
        let b = random_operator(&t, &mut r);
        let a = b.scale(C64::new(1.0 / lib(roe::operator_norm(&b), "norm")?.value, 0.0));
        let window = gens.power(r.gen_range(0..=2));
        let n = r.gen_range(1..=4);
        let x0 = r.gen_range(0..space.len());
        let ball = window.ball_of(x0).to_vec();
        let mut xi = vec![C64::new(0.0, 0.0); space.len()];
        for &y in &ball {
            xi[y] = crand(&mut r);
        }
        let s = xi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        xi.iter_mut().for_each(|z| *z /= s);

        // ‖(aa*)^n ξ‖ by dense products
        let m = dense(&a);
        let aa = &m * m.adjoint();
        let mut v = DVector::from_vec(xi.clone());
        for _ in 0..n {
            v = &aa * v;
        }
        let target = v.norm();
        if target < 1e-12 {
            continue;
        }
        let kappa = target.powf(1.0 / n as f64) * r.gen_range(0.5..0.999);
        if !(kappa > 0.0 && kappa < 1.0) {
            continue;
        }
        let cert = lib(onl::amplify(&a, &t, &window, &xi, kappa, n), &format!("amplify on {name}"))?;

        let cv = DVector::from_iterator(space.len(), (0..space.len()).map(|x| {
            cert.vector.iter().find(|e| e.0 == x).map_or(C64::new(0.0, 0.0), |e| e.1)
        }));
        let ratio = (&m * &cv).norm() / svd_norm(&m) / cv.norm();
        ensure(ratio > kappa, || format!("{name}: ratio {ratio} <= κ {kappa}"))?;
        min_margin = min_margin.min(ratio - kappa);

        // U^{2n-1}[S[center]] by breadth-first search
        let dist = bfs_all(&t.symmetrized());
        let seeds: Vec<usize> = (0..space.len()).filter(|&w| Rel::of(&window).has(w, cert.center)).collect();
        let allowed: BTreeSet<usize> =
            (0..space.len()).filter(|&w| seeds.iter().any(|&s| dist[s][w] <= 2 * n - 1)).collect();
        let support: BTreeSet<usize> = cert.vector.iter().map(|e| e.0).collect();
        ensure(support.is_subset(&allowed), || format!("{name}: support escapes T^(2n-1)∘S"))?;
        ensure(
            cert.window.ball_of(cert.center).iter().copied().collect::<BTreeSet<_>>() == allowed,
            || format!("{name}: declared window differs from the oracle"),
        )?;
        done += 1;
    }

    // truncated shift: a δ_i = δ_{i+1}, so a* δ_0 = 0
    let (space, gens) = gallery::path(6);
    let a = BandedOperator::from_real_fn(gens.clone(), |x, y| if x == y + 1 { 1.0 } else { 0.0 });
    let mut xi = vec![C64::new(0.0, 0.0); space.len()];
    xi[0] = C64::new(1.0, 0.0);
    match onl::amplify(&a, &gens, &Entourage::diagonal(&space), &xi, 0.5, 2) {
        Err(coarse_lab::Error::Degenerate { j: 0 }) => {}
        other => return Err(format!("truncated shift: expected a degenerate-kernel error, got {other:?}")),
    }
    Ok(format!("200 certificates ({attempts} draws), min ratio - κ = {min_margin:.3e}; degenerate path raised"))
}

// ---------------------------------------------------------------------------
// 7

fn unit_field(n: usize, k: usize, r: &mut ChaCha8Rng) -> Vec<Vec<C64>> {
    (0..n)
        .map(|_| {
            let v: Vec<C64> = (0..k).map(|_| crand(r)).collect();
            let s = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|z| z / s).collect()
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let mut max_excess = f64::NEG_INFINITY;
    for seed in 0..200u64 {
        let mut r = rng(7000 + seed);
        let (name, space, gens) = random_space(&mut r, 50);
        let t = if r.gen_bool(0.3) { gens.power(2) } else { gens.clone() };
        let k = r.gen_range(1..=4);
        let blocks: Vec<Vec<BandedOperator>> = (0..k)
            .map(|_| {
                (0..k)
                    .map(|_| {
                        if r.gen_bool(0.2) {
                            BandedOperator::zero(t.clone())
                        } else {
                            random_operator(&t, &mut r)
                        }
                    })
                    .collect()
            })
            .collect();
        let amp = lib(AmplifiedOperator::new(blocks.clone()), "amplified operator")?;
        let n = space.len();
        let (xi, eta) = (unit_field(n, k, &mut r), unit_field(n, k, &mut r));
        let b = lib(onl::matrix_amplify_compress(&amp, &xi, &eta), "matrix_amplify_compress")?;
        let ctx = |what: String| format!("seed {seed} {name} n={k}: {what}");

        let tr = Rel::of(&t);
        let got = dense(&b);
        for x in 0..n {
            for y in 0..n {
                let mut want = C64::new(0.0, 0.0);
                for i in 0..k {
                    for j in 0..k {
                        want += eta[x][i].conj() * blocks[i][j].get(x, y) * xi[y][j];
                    }
                }
                ensure((got[(x, y)] - want).norm() < 1e-12, || ctx(format!("entry ({x}, {y})")))?;
                ensure(tr.has(x, y) || got[(x, y)] == C64::new(0.0, 0.0), || ctx(format!("nonzero off T at ({x}, {y})")))?;
            }
        }
        let mut big = DMatrix::zeros(n * k, n * k);
        for i in 0..k {
            for j in 0..k {
                for (x, y, v) in blocks[i][j].entries() {
                    big[(x * k + i, y * k + j)] = v;
                }
            }
        }
        let a_norm = svd_norm(&big);
        let b_norm = svd_norm(&got);
        ensure(b_norm <= a_norm + 1e-9, || ctx(format!("‖W*aV‖ = {b_norm} > ‖a‖ = {a_norm}")))?;
        ensure((amp.norm() - a_norm).abs() < 1e-9 * a_norm.max(1.0), || ctx("amplified norm vs SVD".into()))?;

        let window = gens.power(r.gen_range(1..=2));
        let phi_b = lib(roe::compress(&b, &window), "compress")?.norm();
        let phi_a = (0..n)
            .map(|z| {
                let idx: Vec<usize> = window.ball_of(z).iter().flat_map(|&x| (0..k).map(move |i| x * k + i)).collect();
                svd_norm(&big.select_rows(idx.iter()).select_columns(idx.iter()))
            })
            .fold(0.0, f64::max);
        ensure((amp.compression_norm(&window) - phi_a).abs() < 1e-9 * phi_a.max(1.0), || {
            ctx("amplified compression norm vs oracle".into())
        })?;
        ensure(phi_b <= phi_a + 1e-9, || ctx(format!("‖Φ_S(W*aV)‖ = {phi_b} > {phi_a}")))?;
        max_excess = max_excess.max((b_norm - a_norm).max(phi_b - phi_a));
    }
    Ok(format!("200 amplified operators, largest excess over the bounds {max_excess:.3e}"))
}

// ---------------------------------------------------------------------------
// 8

fn criterion_8() -> Outcome {
    let eps = 0.1;
    let start = Instant::now();
    let mut min_ratio = f64::INFINITY;
    let mut min_comp = f64::INFINITY;
    let mut count = 0;
    for seed in 0..50u64 {
        let mut r = rng(8000 + seed);
        let n = r.gen_range(50..=100);
        let (space, gens) = if seed % 3 == 2 { gallery::path(n) } else { gallery::cycle(n) };
        // with or without the diagonal
        let t = if seed % 4 != 3 {
            Entourage::from_pairs(&space, gens.pairs().filter(|(x, y)| x != y)).unwrap()
        } else {
            gens.clone()
        };
        let delta = eps / t.degree().max() as f64;
        let Some((_, tent, disp)) = lib(pipeline::ball_profile(&gens, &t, delta, n), "profile")? else {
            return Err(format!("seed {seed}: no profile beats δ = {delta}"));
        };
        let phases: Vec<C64> = (0..n).map(|_| C64::from_polar(1.0, r.gen_range(0.0..2.0 * PI))).collect();
        let vectors = (0..n).map(|x| tent.vector(x).iter().map(|&(y, v)| (y, v * phases[y])).collect()).collect();
        let p = lib(L2Profile::new(tent.support().clone(), vectors), "profile")?;
        ensure(disp < delta, || format!("seed {seed}: displacement {disp} >= {delta}"))?;

        let samples = [BandedOperator::adjacency(&t), random_operator(&t, &mut r)];
        for b in samples.iter().filter(|b| !b.is_zero()) {
            let f = lib(onl::forward_chain(b, &p, &t, eps), "forward_chain")?;
            let m = dense(b);
            let norm = svd_norm(&m);
            ensure(f.compression_norm >= (1.0 - eps) * norm - 1e-9, || {
                format!("seed {seed}: ‖Φ_S(b)‖ = {} < (1 - eps)‖b‖ = {}", f.compression_norm, (1.0 - eps) * norm)
            })?;
            let cert = f
                .certificate
                .certificate()
                .ok_or_else(|| format!("seed {seed}: no certificate, best ratio {}", f.certificate.best_ratio()))?;
            lib(cert.verify(b), "certificate")?;
            let v = DVector::from_iterator(n, (0..n).map(|x| cert.vector.iter().find(|e| e.0 == x).map_or(C64::new(0.0, 0.0), |e| e.1)));
            let ratio = (&m * &v).norm() / norm;
            ensure(ratio >= 1.0 - 2.0 * eps, || format!("seed {seed}: oracle ratio {ratio} < {}", 1.0 - 2.0 * eps))?;
            let supp: Vec<usize> = cert.vector.iter().map(|e| e.0).collect();
            ensure(p.support().bounds(&supp), || format!("seed {seed}: certificate not S-bounded"))?;
            min_ratio = min_ratio.min(ratio);
            min_comp = min_comp.min(f.compression_norm / norm);
            count += 1;
        }
    }
    Ok(format!(
        "50 profiles, {count} operators: min certificate ratio {min_ratio:.4} >= 0.8, min ‖Φ_S(b)‖/‖b‖ {min_comp:.4} >= 0.9 ({:.1} s)",
        start.elapsed().as_secs_f64()
    ))
}

// ---------------------------------------------------------------------------
// 9

fn criterion_9() -> Outcome {
    // triangular kernel on ℤ/24
    let n = 24;
    let (space, gens) = gallery::cycle(n);
    let window = Entourage::from_pairs(&space, (0..n).flat_map(|x| (0..8).map(move |k| (x, (x + k) % n)))).unwrap();
    let p = lib(L2Profile::uniform(&window), "profile")?;
    let k1 = convert::l2_to_kernel(&p);
    let k2 = lib(onl::kernel_from_ucp(&gens, &window, &p), "kernel_from_ucp")?.kernel;
    let mut max_diff = 0.0f64;
    for x in 0..n {
        for y in 0..n {
            let tri = (8usize.saturating_sub(cyc_dist(n, x, y))) as f64 / 8.0;
            let (a, b) = (k1.get(x, y), k2.get(x, y));
            ensure((a.re - tri).abs() < 1e-15 && a.im == 0.0, || format!("l2_to_kernel({x}, {y}) = {a} vs {tri}"))?;
            ensure((b.re - tri).abs() < 1e-15 && b.im == 0.0, || format!("kernel_from_ucp({x}, {y}) = {b} vs {tri}"))?;
            max_diff = max_diff.max((a - b).norm());
        }
    }
    ensure(max_diff == 0.0, || format!("the two code paths differ by {max_diff:e}"))?;

    // fixtures
    let mut fixtures: Vec<(String, Entourage, L2Profile)> = vec![("ℤ/24 interval".into(), gens.clone(), p)];
    for (name, g) in [
        ("cycle(60)", gallery::cycle(60).1),
        ("path(40)", gallery::path(40).1),
        ("3-regular(40)", lib(gallery::random_regular_graph(40, 3, 5), "graph")?.1),
        ("box(ℤ5, ℤ7, ℤ9)", {
            let gs = [5, 7, 9].map(|m| coarse_lab::gallery::FiniteGroup::cyclic(m).unwrap());
            lib(gallery::box_space(&gs, 1), "box")?.1
        }),
    ] {
        for rad in [1usize, 3] {
            fixtures.push((format!("{name} tent r={rad}"), g.clone(), lib(pipeline::tent_profile(&g, rad), "tent")?));
        }
        let mut r = rng(9000 + g.len() as u64);
        let ball = g.power(2);
        let vectors = (0..g.space().len())
            .map(|x| {
                let row: Vec<(usize, C64)> = ball.row(x).iter().map(|&y| (y, crand(&mut r))).collect();
                let s = row.iter().map(|e| e.1.norm_sqr()).sum::<f64>().sqrt();
                row.into_iter().map(|(y, z)| (y, z / s)).collect()
            })
            .collect();
        fixtures.push((format!("{name} random complex"), g.clone(), lib(L2Profile::new(ball.clone(), vectors), "profile")?));
    }
    let mut min_eig = f64::INFINITY;
    for (name, t, p) in &fixtures {
        let u = lib(onl::kernel_from_ucp(t, p.support(), p), name)?;
        let m = u.kernel.to_dense();
        let eig = m.symmetric_eigenvalues().min();
        ensure(eig >= -1e-9, || format!("{name}: oracle min eigenvalue {eig}"))?;
        ensure((eig - u.min_eigenvalue).abs() < 1e-9, || format!("{name}: reported {} vs oracle {eig}", u.min_eigenvalue))?;
        // Σ_z conj(η_x(z)) η_y(z), the transpose of the Gram kernel ⟨η_x, η_y⟩
        let gram = convert::l2_to_kernel(p);
        let cols = p.to_dense_columns();
        let diff = u
            .kernel
            .entries()
            .map(|(x, y, v)| {
                let direct: C64 = (0..cols.nrows()).map(|z| cols[(z, x)].conj() * cols[(z, y)]).sum();
                (v - direct).norm().max((v - gram.get(y, x)).norm())
            })
            .fold(0.0, f64::max);
        ensure(diff < 1e-12, || format!("{name}: ucp kernel differs from the direct sum by {diff:e}"))?;
        min_eig = min_eig.min(eig);
    }
    Ok(format!("triangular kernel identical on both paths; {} fixtures, min eigenvalue {min_eig:.3e}", fixtures.len()))
}

// ---------------------------------------------------------------------------
// 10

fn configs() -> Vec<PipelineConfig> {
    let mut out = Vec::new();
    let mut c = PipelineConfig::new(SpaceSource::Cycle { n: 24 }, Chain::WitnessRoundtrip, 0.3);
    c.seed = 3;
    out.push(c);
    let mut c = PipelineConfig::new(SpaceSource::RandomRegular { n: 60, d: 3, seed: 9 }, Chain::Nuclearity, 0.45);
    c.seed = 5;
    c.trials = 4;
    out.push(c);
    let mut c = PipelineConfig::new(SpaceSource::Cycle { n: 90 }, Chain::OnlForward, 0.3);
    c.seed = 17;
    c.trials = 3;
    out.push(c);
    let mut c = PipelineConfig::new(SpaceSource::RandomRegular { n: 100, d: 3, seed: 2 }, Chain::OnlProfile, 0.1);
    c.windows = vec![1, 2, 3];
    c.constant = Some(0.5);
    out.push(c);
    out
}

fn run_in_pool(threads: usize, cfg: &PipelineConfig) -> Result<(String, String), String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    pool.install(|| {
        let r = lib(pipeline::run_pipeline(cfg), "run_pipeline")?;
        Ok((lib(r.to_csv(), "csv")?, r.to_json()))
    })
}

fn cli_run(dir: &Path, config: &Path, threads: &str, tag: &str) -> Result<(Vec<u8>, Vec<u8>), String> {
    let csv = dir.join(format!("{tag}.csv"));
    let json = dir.join(format!("{tag}.json"));
    let status = Command::new(env!("CARGO_BIN_EXE_coarse-lab"))
        .args(["pipeline", "run"])
        .arg(config)
        .arg("--csv")
        .arg(&csv)
        .arg("--json")
        .arg(&json)
        .env("COARSE_LAB_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?
        .status;
    ensure(status.success(), || format!("CLI run {tag} exited with {status}"))?;
    Ok((std::fs::read(&csv).map_err(|e| e.to_string())?, std::fs::read(&json).map_err(|e| e.to_string())?))
}

fn criterion_10() -> Outcome {
    let mut runs = 0;
    for cfg in configs() {
        let base = run_in_pool(1, &cfg)?;
        for threads in [1, 2, 4, 8] {
            let again = run_in_pool(threads, &cfg)?;
            ensure(again == base, || format!("{}: report differs with {threads} workers", cfg.chain.as_str()))?;
            runs += 1;
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("run.json");
    let text = r#"{"space": {"family": "cycle", "n": 48}, "chain": "onl-forward", "epsilon": 0.3, "seed": 21, "trials": 3}"#;
    std::fs::write(&config, text).map_err(|e| e.to_string())?;
    let a = cli_run(dir.path(), &config, "1", "a")?;
    let b = cli_run(dir.path(), &config, "1", "b")?;
    let c = cli_run(dir.path(), &config, "6", "c")?;
    ensure(a == b && a == c, || "CLI reports differ between runs".into())?;
    Ok(format!("{runs} in-process runs across 1-8 workers and 3 CLI runs are byte-identical"))
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("coarse axioms against a relation oracle", criterion_1),
        ("property A chain, quantitative", criterion_2),
        ("Schur test bound", criterion_3),
        ("compression defect estimate", criterion_4),
        ("localization curve and expander contrast", criterion_5),
        ("amplification certificates", criterion_6),
        ("band preservation under amplification", criterion_7),
        ("forward localization chain", criterion_8),
        ("ucp kernels are positive", criterion_9),
        ("deterministic reports", criterion_10),
    ];
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let k = i + 1;
        if !wanted.is_empty() && !wanted.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {k:>2} PASS  {name} [{secs:.1} s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {k:>2} FAIL  {name} [{secs:.1} s]: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
