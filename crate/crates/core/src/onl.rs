//! Operator norm localization: condition (β), the `(aa*)^n` amplification,
//! lower bounds for the inverse of `Φ_S` on `E_T`, matrix amplification, and
//! the kernel attached to the Schur-multiplier reconstruction.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coarse::{same_space, Entourage};
use crate::error::{Error, Result};
use crate::linalg::{self, C64, ONE, ZERO};
use crate::roe::{self, check_window, BandedOperator, BlockFamily};
use crate::witness::{KernelMatrix, L2Profile, UNIT_TOL};

/// Slack on `ratio ≥ constant` when the constant is attained exactly.
pub const RATIO_TOL: f64 = 1e-12;
pub const REFINE_STEPS: usize = 100;
/// A kernel eigenvalue below `-PSD_TOL` fails [`kernel_from_ucp`].
pub const PSD_TOL: f64 = 1e-9;

/// A unit vector supported in one window ball that nearly attains `‖a‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaCertificate {
    pub constant: f64,
    pub window: Entourage,
    /// Sparse, ids increasing.
    pub vector: Vec<(usize, C64)>,
    pub center: usize,
    /// `‖aη‖ / ‖a‖`.
    pub ratio: f64,
}

impl BetaCertificate {
    /// Re-checks the certificate against `a`: unit norm, support inside
    /// `S[center]`, and the ratio recomputed from scratch.
    pub fn verify(&self, a: &BandedOperator) -> Result<f64> {
        if !same_space(a.space(), self.window.space()) {
            return Err(Error::SpaceMismatch);
        }
        let norm = linalg::norm2(&self.vector.iter().map(|e| e.1).collect::<Vec<_>>());
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { x: self.center, norm });
        }
        if let Some(&(x, _)) = self.vector.iter().find(|&&(x, _)| !self.window.contains(x, self.center)) {
            return Err(Error::Precondition(format!("point {x} lies outside the window ball at {}", self.center)));
        }
        let ratio = localized_ratio(a, &self.vector)?;
        if !(ratio >= self.constant - RATIO_TOL) {
            return Err(Error::Inequality(format!("ratio {ratio} below constant {}", self.constant)));
        }
        Ok(ratio)
    }
}

fn localized_ratio(a: &BandedOperator, v: &[(usize, C64)]) -> Result<f64> {
    let mut dense = vec![ZERO; a.space().len()];
    for &(x, c) in v {
        dense[x] = c;
    }
    let norm = roe::operator_norm(a)?.value;
    if norm == 0.0 {
        return Err(Error::ZeroOperator);
    }
    Ok(linalg::norm2(&a.apply(&dense)) / norm)
}

#[derive(Debug, Clone, PartialEq)]
pub enum BetaCheck {
    Certified(BetaCertificate),
    Failed { best_ratio: f64, center: usize },
}

impl BetaCheck {
    pub fn best_ratio(&self) -> f64 {
        match self {
            BetaCheck::Certified(c) => c.ratio,
            BetaCheck::Failed { best_ratio, .. } => *best_ratio,
        }
    }

    pub fn center(&self) -> usize {
        match self {
            BetaCheck::Certified(c) => c.center,
            BetaCheck::Failed { center, .. } => *center,
        }
    }

    pub fn certificate(&self) -> Option<&BetaCertificate> {
        match self {
            BetaCheck::Certified(c) => Some(c),
            BetaCheck::Failed { .. } => None,
        }
    }
}

/// `max_{‖η‖=1, supp η ⊆ S[x]} ‖aη‖` with a maximizing vector: the top right
/// singular pair of `a` restricted to the columns `S[x]`.
pub fn localized_norm(a: &BandedOperator, window: &Entourage, x: usize) -> (f64, Vec<(usize, C64)>) {
    let cols = window.ball_of(x);
    if cols.is_empty() {
        return (0.0, Vec::new());
    }
    let mut rows: Vec<usize> = cols.iter().flat_map(|&y| a.band().ball_of(y).iter().copied()).collect();
    rows.sort_unstable();
    rows.dedup();
    if rows.is_empty() {
        return (0.0, vec![(cols[0], ONE)]);
    }
    let block = DMatrix::from_fn(rows.len(), cols.len(), |i, j| a.get(rows[i], cols[j]));
    let (sigma, v) = linalg::top_right_singular(&block);
    (sigma, cols.iter().zip(v.iter()).map(|(&y, &c)| (y, c)).collect())
}

fn validate_constant(c: f64, window: &Entourage) -> Result<()> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::InvalidParameter(format!("constant must lie in (0, 1], got {c}")));
    }
    if c == 1.0 && *window != Entourage::full(window.space()) {
        return Err(Error::InvalidParameter("constant 1 is only allowed for the full window".into()));
    }
    Ok(())
}

/// Condition (β) for one operator: the best window-localized unit vector over
/// all centers, certified if it reaches `c · ‖a‖`.
pub fn beta_check(a: &BandedOperator, window: &Entourage, c: f64) -> Result<BetaCheck> {
    if !same_space(a.space(), window.space()) {
        return Err(Error::SpaceMismatch);
    }
    validate_constant(c, window)?;
    if a.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let norm = roe::operator_norm(a)?.value;
    let n = a.space().len();
    let sigmas: Vec<f64> = (0..n).into_par_iter().map(|x| localized_norm(a, window, x).0).collect();
    let (center, best) = sigmas
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (x, &s)| if s > acc.1 { (x, s) } else { acc });
    let best_ratio = best / norm;
    if best_ratio < c - RATIO_TOL {
        return Ok(BetaCheck::Failed { best_ratio, center });
    }
    let (_, vector) = localized_norm(a, window, center);
    let ratio = localized_ratio(a, &vector)?;
    Ok(BetaCheck::Certified(BetaCertificate { constant: c, window: window.clone(), vector, center, ratio }))
}

/// `T ∪ T^{-1} ∪ Δ`.
fn closed(t: &Entourage) -> Entourage {
    t.symmetrized().union(&Entourage::diagonal(t.space())).expect("same space")
}

/// Upgrades an `S`-bounded vector `ξ` to a certificate at constant `κ` by the
/// telescoping argument on `‖(aa*)^j ξ‖`.
///
/// The window is `U^{∘(2n-1)} ∘ S` with `U = T ∪ T^{-1} ∪ Δ`, which is
/// `T^{∘(2n-1)} ∘ S` when `T` is symmetric and contains the diagonal.
pub fn amplify(
    a: &BandedOperator,
    t: &Entourage,
    window: &Entourage,
    xi: &[C64],
    kappa: f64,
    n: usize,
) -> Result<BetaCertificate> {
    if !same_space(a.space(), t.space()) || !same_space(t.space(), window.space()) {
        return Err(Error::SpaceMismatch);
    }
    if xi.len() != a.space().len() {
        return Err(Error::DimensionMismatch(format!("ξ has {} entries, space has {}", xi.len(), a.space().len())));
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::InvalidParameter(format!("κ must lie in (0, 1), got {kappa}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !a.lies_in(t) {
        return Err(Error::Precondition("operator is not supported on T".into()));
    }
    let norm = roe::operator_norm(a)?.value;
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!("operator must have norm 1, got {norm}")));
    }
    if (linalg::norm2(xi) - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { x: 0, norm: linalg::norm2(xi) });
    }
    let support: Vec<usize> = (0..xi.len()).filter(|&x| xi[x] != ZERO).collect();
    let center = window
        .bounded_witness(&support)
        .ok_or_else(|| Error::Precondition("ξ is not supported in a single window ball".into()))?;

    // v_j = (aa*)^j ξ and w_j = a* v_j
    let mut vs = vec![xi.to_vec()];
    let mut ws = Vec::with_capacity(n);
    for j in 0..n {
        let w = a.apply_adjoint(&vs[j]);
        if w.iter().all(|&z| z == ZERO) {
            return Err(Error::Degenerate { j });
        }
        vs.push(a.apply(&w));
        ws.push(w);
    }
    let norms: Vec<f64> = vs.iter().map(|v| linalg::norm2(v)).collect();
    if !(kappa.powi(n as i32) < norms[n]) {
        return Err(Error::Precondition(format!("κ^n = {} is not below ‖(aa*)^n ξ‖ = {}", kappa.powi(n as i32), norms[n])));
    }
    let j = (0..n)
        .find(|&j| norms[j + 1] / norms[j] > kappa)
        .ok_or_else(|| Error::Inequality("telescoping scan found no step above κ".into()))?;
    let w = &ws[j];
    let wn = linalg::norm2(w);
    let vector: Vec<(usize, C64)> =
        w.iter().enumerate().filter(|e| *e.1 != ZERO).map(|(x, &z)| (x, z / wn)).collect();
    let u = closed(t);
    let big = u.power(2 * n - 1).compose(window)?;
    let ratio = localized_ratio(a, &vector)?;
    if !(ratio > kappa) {
        return Err(Error::Inequality(format!("amplified ratio {ratio} is not above κ = {kappa}")));
    }
    Ok(BetaCertificate { constant: kappa, window: big, vector, center, ratio })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateKind {
    UniformReal,
    UniformComplex,
    Sign,
    Adjacency,
    Laplacian,
    Refined,
}

impl CandidateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CandidateKind::UniformReal => "uniform_real",
            CandidateKind::UniformComplex => "uniform_complex",
            CandidateKind::Sign => "sign",
            CandidateKind::Adjacency => "adjacency",
            CandidateKind::Laplacian => "laplacian",
            CandidateKind::Refined => "refined",
        }
    }
}

/// A lower bound for `‖(Φ_S|_{E_T})^{-1}‖`, never claimed tight.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseNormEstimate {
    pub band: Entourage,
    pub window: Entourage,
    /// `‖argmax‖ / ‖Φ_S(argmax)‖`; infinite when some candidate compresses to 0.
    pub lower_bound: f64,
    pub samples: usize,
    pub argmax_operator: BandedOperator,
    pub argmax_kind: CandidateKind,
}

fn inverse_ratio(a: &BandedOperator, window: &Entourage) -> Result<Option<f64>> {
    let num = roe::operator_norm(a)?.value;
    if num == 0.0 {
        return Ok(None);
    }
    let den = roe::compress(a, window)?.norm();
    Ok(Some(if den == 0.0 { f64::INFINITY } else { num / den }))
}

fn random_candidates(t: &Entourage, trials: usize, seed: u64) -> Vec<(CandidateKind, BandedOperator)> {
    (0..trials)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let real: Vec<C64> = (0..t.len()).map(|_| C64::new(rng.gen_range(-1.0..=1.0), 0.0)).collect();
            let complex: Vec<C64> =
                (0..t.len()).map(|_| C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect();
            let sign: Vec<C64> =
                (0..t.len()).map(|_| if rng.gen::<bool>() { ONE } else { -ONE }).collect();
            [
                (CandidateKind::UniformReal, real),
                (CandidateKind::UniformComplex, complex),
                (CandidateKind::Sign, sign),
            ]
            .into_iter()
            .map(|(kind, v)| (kind, BandedOperator::new(t.clone(), v).expect("band length")))
            .collect::<Vec<_>>()
        })
        .collect()
}

/// Pushes `a` towards operators whose norm is spread across blocks: each
/// step adds the `E_T` part of the top singular direction of `a` and removes
/// that of the worst block, keeping the change only if the ratio grows.
fn refine(a: &BandedOperator, t: &Entourage, window: &Entourage, start: f64) -> Result<(f64, BandedOperator)> {
    let mut best = a.clone();
    let mut best_ratio = start;
    let mut step = 0.5;
    for _ in 0..REFINE_STEPS {
        let dense = best.to_dense();
        let (sigma, u, v) = linalg::top_singular_triple(&dense);
        let blocks: BlockFamily = roe::compress(&best, window)?;
        let (_, z) = blocks.norm_with_argmax();
        let Some(z) = z else { break };
        let idx = blocks.indices(z);
        let (bs, bu, bv) = linalg::top_singular_triple(blocks.block(z));
        let mut bu_full = vec![ZERO; t.space().len()];
        let mut bv_full = vec![ZERO; t.space().len()];
        for (k, &x) in idx.iter().enumerate() {
            bu_full[x] = bu[k];
            bv_full[x] = bv[k];
        }
        let candidate = BandedOperator::from_fn(t.clone(), |x, y| {
            best.get(x, y) + (u[x] * v[y].conj() * sigma - bu_full[x] * bv_full[y].conj() * bs) * step
        });
        match inverse_ratio(&candidate, window)? {
            Some(r) if r > best_ratio => {
                best = candidate;
                best_ratio = r;
            }
            _ => step *= 0.5,
        }
        if !best_ratio.is_finite() {
            break;
        }
    }
    Ok((best_ratio, best))
}

/// Maximizes `‖a‖ / ‖Φ_S(a)‖` over a seeded family of `a ∈ E_T`: per trial a
/// uniform real, a uniform complex and a random sign operator, plus the
/// adjacency and (when `T ⊇ Δ`) Laplacian of `T`; the best candidate is then
/// refined for [`REFINE_STEPS`] steps.
pub fn inverse_compression_norm(t: &Entourage, window: &Entourage, trials: usize, seed: u64) -> Result<InverseNormEstimate> {
    if !same_space(t.space(), window.space()) {
        return Err(Error::SpaceMismatch);
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut candidates = random_candidates(t, trials, seed);
    candidates.push((CandidateKind::Adjacency, BandedOperator::adjacency(t)));
    if t.contains_diagonal() {
        candidates.push((CandidateKind::Laplacian, BandedOperator::laplacian(t).with_band(t.clone())?));
    }
    let ratios: Vec<Option<f64>> = candidates
        .par_iter()
        .map(|(_, a)| inverse_ratio(a, window))
        .collect::<Result<_>>()?;
    let samples = ratios.iter().filter(|r| r.is_some()).count();
    let best = ratios
        .iter()
        .enumerate()
        .filter_map(|(k, r)| r.map(|r| (k, r)))
        .fold(None, |acc: Option<(usize, f64)>, (k, r)| match acc {
            Some((_, b)) if b >= r => acc,
            _ => Some((k, r)),
        });
    let Some((k, ratio)) = best else {
        return Err(Error::ZeroOperator);
    };
    let (kind, a) = candidates.swap_remove(k);
    let (lower_bound, argmax_operator, argmax_kind) = if ratio.is_finite() {
        let (r, refined) = refine(&a, t, window, ratio)?;
        if r > ratio {
            (r, refined, CandidateKind::Refined)
        } else {
            (ratio, a, kind)
        }
    } else {
        (ratio, a, kind)
    };
    Ok(InverseNormEstimate {
        band: t.clone(),
        window: window.clone(),
        lower_bound,
        samples,
        argmax_operator,
        argmax_kind,
    })
}

/// An element of `E_T ⊗ M_n`, stored as an `n × n` grid of operators on `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplifiedOperator {
    band: Entourage,
    blocks: Vec<Vec<BandedOperator>>,
}

impl AmplifiedOperator {
    pub fn new(blocks: Vec<Vec<BandedOperator>>) -> Result<AmplifiedOperator> {
        let n = blocks.len();
        if n == 0 || blocks.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch("amplified operator needs a square, nonempty grid".into()));
        }
        let band = blocks[0][0].band().clone();
        if blocks.iter().flatten().any(|b| b.band() != &band) {
            return Err(Error::DimensionMismatch("blocks must share one band".into()));
        }
        Ok(AmplifiedOperator { band, blocks })
    }

    pub fn band(&self) -> &Entourage {
        &self.band
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize, j: usize) -> &BandedOperator {
        &self.blocks[i][j]
    }

    /// `A_{x,y} ∈ M_n`.
    pub fn matrix_at(&self, x: usize, y: usize) -> DMatrix<C64> {
        let n = self.size();
        DMatrix::from_fn(n, n, |i, j| self.blocks[i][j].get(x, y))
    }

    /// Dense matrix on `ℓ²(X) ⊗ ℂⁿ`, basis `δ_x ⊗ e_i` at index `x·n + i`.
    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.size();
        let pts = self.band.space().len();
        let mut m = DMatrix::zeros(pts * n, pts * n);
        for (i, row) in self.blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                for (x, y, v) in b.entries() {
                    m[(x * n + i, y * n + j)] = v;
                }
            }
        }
        m
    }

    pub fn norm(&self) -> f64 {
        linalg::spectral_norm(&self.to_dense())
    }

    /// `‖Φ_S^{(n)}(a)‖`: the largest block over `S[z] × {1..n}`.
    pub fn compression_norm(&self, window: &Entourage) -> f64 {
        let n = self.size();
        let dense = self.to_dense();
        (0..window.space().len())
            .into_par_iter()
            .map(|z| {
                let idx: Vec<usize> = window.ball_of(z).iter().flat_map(|&x| (0..n).map(move |i| x * n + i)).collect();
                linalg::spectral_norm(&DMatrix::from_fn(idx.len(), idx.len(), |p, q| dense[(idx[p], idx[q])]))
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// `⟨a ξ, η⟩` for `ξ = Σ_y δ_y ⊗ ξ_y`, `η = Σ_x δ_x ⊗ η_x`.
    pub fn pairing(&self, xi: &[Vec<C64>], eta: &[Vec<C64>]) -> C64 {
        self.band
            .pairs()
            .map(|(x, y)| {
                let m = self.matrix_at(x, y);
                let mut s = ZERO;
                for i in 0..self.size() {
                    for j in 0..self.size() {
                        s += eta[x][i].conj() * m[(i, j)] * xi[y][j];
                    }
                }
                s
            })
            .sum()
    }
}

/// `ξ_x / ‖ξ_x‖`, or `e_1` when `ξ_x = 0`.
fn isometry_column(v: &[C64]) -> Vec<C64> {
    let norm = linalg::norm2(v);
    if norm > 0.0 {
        v.iter().map(|z| z / norm).collect()
    } else {
        let mut e = vec![ZERO; v.len()];
        e[0] = ONE;
        e
    }
}

/// `W* a V` for the isometries `V δ_y = δ_y ⊗ ξ̂_y`, `W δ_x = δ_x ⊗ η̂_x`:
/// `(W* a V)_{x,y} = η̂_x* A_{x,y} ξ̂_y`, declared on the band of `a`.
pub fn matrix_amplify_compress(a: &AmplifiedOperator, xi: &[Vec<C64>], eta: &[Vec<C64>]) -> Result<BandedOperator> {
    let pts = a.band.space().len();
    let n = a.size();
    for (name, field) in [("ξ", xi), ("η", eta)] {
        if field.len() != pts || field.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!("{name} must hold {pts} vectors in ℂ^{n}")));
        }
    }
    let xs: Vec<Vec<C64>> = xi.iter().map(|v| isometry_column(v)).collect();
    let es: Vec<Vec<C64>> = eta.iter().map(|v| isometry_column(v)).collect();
    Ok(BandedOperator::from_fn(a.band.clone(), |x, y| {
        let mut s = ZERO;
        for i in 0..n {
            for j in 0..n {
                s += es[x][i].conj() * a.blocks[i][j].get(x, y) * xs[y][j];
            }
        }
        s
    }))
}

/// The kernel `k(x, y) = ⟨Ψ ∘ Φ_S(e_{x,y}) δ_y, δ_x⟩` together with its
/// smallest eigenvalue and `sup_{(x,y) ∈ T} |1 - k(x, y)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct UcpKernel {
    pub kernel: KernelMatrix,
    pub min_eigenvalue: f64,
    pub sup_defect: f64,
}

/// Evaluates `k` pointwise by compressing each matrix unit into the blocks
/// that see it and reconstructing its `(x, y)` entry. Nonzero only on
/// `S ∘ S^{-1}`, where it is reported.
pub fn kernel_from_ucp(t: &Entourage, window: &Entourage, p: &L2Profile) -> Result<UcpKernel> {
    if !same_space(t.space(), window.space()) {
        return Err(Error::SpaceMismatch);
    }
    check_window(window, p)?;
    let support = window.compose(&window.inverse())?;
    let values: Vec<C64> = support
        .pairs()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(x, y)| {
            // Φ_S(e_{x,y}) has a single unit entry in every block z with x, y ∈ S[z]
            let mut k = ZERO;
            for &z in window.row(x) {
                let idx = window.ball_of(z);
                let (Ok(i), Ok(j)) = (idx.binary_search(&x), idx.binary_search(&y)) else { continue };
                let mut block = DMatrix::<C64>::zeros(idx.len(), idx.len());
                block[(i, j)] = ONE;
                k += p.value(x, z).conj() * block[(i, j)] * p.value(y, z);
            }
            k
        })
        .collect();
    let kernel = KernelMatrix::new(support, values)?;
    let min_eigenvalue = kernel.min_eigenvalue();
    if min_eigenvalue < -PSD_TOL {
        return Err(Error::NotPsd { min_eig: min_eigenvalue, tol: PSD_TOL });
    }
    let sup_defect = t.pairs().map(|(x, y)| (ONE - kernel.get(x, y)).norm()).fold(0.0, f64::max);
    Ok(UcpKernel { kernel, min_eigenvalue, sup_defect })
}

/// The forward localization chain for one operator and one field: the
/// compression norm, the Schur defect, and the certificate at `c = 1 - 2ε`
/// on the field's support.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardChain {
    pub operator_norm: f64,
    pub compression_norm: f64,
    pub defect: f64,
    pub certificate: BetaCheck,
}

pub fn forward_chain(b: &BandedOperator, p: &L2Profile, t: &Entourage, eps: f64) -> Result<ForwardChain> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidParameter(format!("ε must lie in (0, 1/2), got {eps}")));
    }
    if !b.lies_in(t) {
        return Err(Error::Precondition("operator is not supported on T".into()));
    }
    let delta = eps / t.degree().max().max(1) as f64;
    for (x, y) in t.pairs() {
        let d = p.distance(x, y);
        if !(d < delta) {
            return Err(Error::Displacement { x, y, value: d, bound: delta });
        }
    }
    let b = b.with_band(t.clone())?;
    let window = p.support();
    let report = roe::schur_defect(&b, p)?;
    let compression_norm = roe::compress(&b, window)?.norm();
    let certificate = beta_check(&b, window, 1.0 - 2.0 * eps)?;
    Ok(ForwardChain { operator_norm: report.operator_norm, compression_norm, defect: report.defect, certificate })
}
