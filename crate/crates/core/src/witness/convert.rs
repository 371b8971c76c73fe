//! Conversions between the witness forms, with the quantitative losses
//! tracked at every step.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{verify_folner, verify_l2, FolnerWitness, KernelMatrix, L1Profile, L2Profile, Variant};
use crate::coarse::Entourage;
use crate::error::{Error, Result, Violation};
use crate::linalg::{self, C64, ZERO};

/// Upper limit for the discretization grid `{n / m}`.
pub const GRID_CAP: u64 = 1_000_000_000;
/// Values within this distance below a grid point snap up to it, so that
/// exact rationals such as `(1/√8)² = 1/8` land on the grid.
pub const GRID_SNAP: f64 = 1e-9;

/// `ζ_x(y) = #A_x(y)`, `ξ_x = ζ_x / ‖ζ_x‖₁`, `η_x = √ξ_x`.
pub fn folner_to_l2(w: &FolnerWitness) -> Result<(L1Profile, L2Profile)> {
    let n = w.space().len();
    let mut xi = Vec::with_capacity(n);
    let mut eta = Vec::with_capacity(n);
    for x in 0..n {
        let total = w.cardinality(x);
        if total == 0 {
            return Err(Violation::EmptySection { x }.into());
        }
        let row: Vec<(usize, f64)> = w.section(x).iter().map(|&(y, c)| (y, c as f64 / total as f64)).collect();
        eta.push(row.iter().map(|&(y, v)| (y, C64::new(v.sqrt(), 0.0))).collect());
        xi.push(row);
    }
    let l1 = L1Profile::new(w.support().clone(), xi)?;
    let l2 = L2Profile::new(w.support().clone(), eta)?;
    Ok((l1, l2))
}

/// Gram kernel `k(x, y) = ⟨η_x, η_y⟩` on `S ∘ S^{-1}`, `S` the profile
/// support.
pub fn l2_to_kernel(p: &L2Profile) -> KernelMatrix {
    let s = p.support();
    let support = s.compose(&s.inverse()).expect("same space");
    let n = p.space().len();
    let values: Vec<C64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|x| support.row(x).iter().map(move |&y| p.inner(x, y)).collect::<Vec<_>>())
        .collect();
    KernelMatrix::new(support, values).expect("one value per support pair")
}

/// Output of [`kernel_to_l2`].
#[derive(Debug, Clone)]
pub struct KernelToL2 {
    pub profile: L2Profile,
    /// Power `m` of `supp(k) ∪ Δ ∪ supp(k)^{-1}` the square root was cut to.
    pub radius: usize,
    /// `‖a - b* b‖` for the truncated root `b`.
    pub residual: f64,
    pub min_eigenvalue: f64,
    /// `max_x |1 - ‖ζ_x‖²|` before normalization.
    pub norm_defect: f64,
}

/// `(2√ε + 2ε) / √(1 - ε)`, the displacement bound after normalizing
/// `ζ_x = b δ_x` when `|1 - k| < ε` on the tested pairs.
pub fn kernel_displacement_bound(eps: f64) -> f64 {
    (2.0 * eps.sqrt() + 2.0 * eps) / (1.0 - eps).sqrt()
}

/// Builds a unit-vector field from a positive definite kernel through a
/// banded approximate square root.
///
/// With `a = kᵀ` (so that `⟨ζ_x, ζ_y⟩ ≈ k(x, y)`), takes `r = a^{1/2}` and
/// cuts it to the bands `S_m = (supp k ∪ Δ ∪ supp k^{-1})^{∘m}`, stopping at
/// the least `m` with `‖a - b* b‖ < eps`.
pub fn kernel_to_l2(k: &KernelMatrix, eps: f64) -> Result<KernelToL2> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let space = k.space().clone();
    let n = space.len();
    for x in 0..n {
        let d = (C64::new(1.0, 0.0) - k.get(x, x)).norm();
        if !(d < eps) {
            return Err(Error::Precondition(format!("|1 - k({x}, {x})| = {d} is not below {eps}")));
        }
    }
    let a = k.to_dense().transpose();
    let (root, min_eigenvalue) = linalg::psd_sqrt(&a);
    let tol = k.psd_tolerance();
    if min_eigenvalue < -tol {
        return Err(Error::NotPsd { min_eig: min_eigenvalue, tol });
    }

    let base = k.support().symmetrized();
    let mut band = base.clone();
    let mut radius = 1;
    let (b, residual) = loop {
        let b = DMatrix::from_fn(n, n, |i, j| if band.contains(i, j) { root[(i, j)] } else { ZERO });
        let residual = linalg::spectral_norm(&(&a - b.adjoint() * &b));
        if residual < eps {
            break (b, residual);
        }
        let next = band.compose(&base)?;
        if next == band {
            return Err(Error::Precondition(format!(
                "square root residual {residual} stays above eps = {eps} at full propagation"
            )));
        }
        band = next;
        radius += 1;
    };

    // ζ_x = b δ_x is column x of b, supported on {z : (z, x) ∈ S_m}
    let mut vectors = Vec::with_capacity(n);
    let mut norm_defect = 0.0f64;
    for x in 0..n {
        let col: Vec<(usize, C64)> = band.ball_of(x).iter().map(|&z| (z, b[(z, x)])).filter(|&(_, v)| v != ZERO).collect();
        let norm = linalg::norm2(&col.iter().map(|&(_, v)| v).collect::<Vec<_>>());
        if !(norm > 1e-12) {
            return Err(Error::DegenerateKernel { x });
        }
        norm_defect = norm_defect.max((1.0 - norm * norm).abs());
        vectors.push(col.into_iter().map(|(z, v)| (z, v / norm)).collect());
    }
    let profile = L2Profile::new(band.inverse(), vectors)?;
    Ok(KernelToL2 { profile, radius, residual, min_eigenvalue, norm_defect })
}

/// Output of [`l2_to_folner`].
#[derive(Debug, Clone)]
pub struct L2ToFolner {
    pub witness: FolnerWitness,
    /// Grid resolution: sections have `⌊m ξ_x(y)⌋` elements.
    pub grid: u64,
    /// Measured displacement of the input profile on the tested pairs.
    pub displacement: f64,
    /// Largest ratio of the output on the tested pairs.
    pub ratio: f64,
}

/// Discretizes `ξ_x = |η_x|²` on a grid `{n / m}` and returns sections
/// `A_x(y) = {0, …, ⌊m ξ_x(y)⌋ - 1}`, with at least one element at the
/// diagonal. The grid doubles from `m = 1` until rounding moves every
/// `‖ξ_x‖₁` by less than `eps / 4`, every tested `‖ξ_x - ξ_y‖₁` by less
/// than `eps / 2`, and the output ratio is below `2 eps / (1 - eps)`.
pub fn l2_to_folner(p: &L2Profile, tested: &Entourage, eps: f64) -> Result<L2ToFolner> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    let q = verify_l2(p, tested)?;
    if let Some((x, y)) = q.worst_pair {
        if !(q.epsilon < eps) {
            return Err(Error::Displacement { x, y, value: q.epsilon, bound: eps });
        }
    }
    let n = p.space().len();
    let xi: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|x| p.vector(x).iter().map(|&(y, v)| (y, v.norm_sqr())).collect())
        .collect();
    let support = p.support().union(&Entourage::diagonal(p.space()))?;
    let l1 = |row: &[(usize, f64)]| row.iter().map(|&(_, v)| v).sum::<f64>();
    let exact = L1Profile::new(support.clone(), xi.clone())?;
    let target = 2.0 * eps / (1.0 - eps);

    let mut m: u64 = 1;
    loop {
        let counts = round_to_grid(&xi, m);
        let mf = m as f64;
        let rounded: Vec<Vec<(usize, f64)>> = counts
            .iter()
            .map(|row| row.iter().map(|&(y, c)| (y, c as f64 / mf)).collect())
            .collect();
        let norm_ok = (0..n).find(|&x| !((l1(&rounded[x]) - l1(&xi[x])).abs() < eps / 4.0));
        let grid = L1Profile::new(support.clone(), rounded)?;
        let pair_ok = tested
            .pairs()
            .find(|&(x, y)| !((grid.distance(x, y) - exact.distance(x, y)).abs() < eps / 2.0));
        let offender = match (norm_ok, pair_ok) {
            (None, None) => {
                let triples = counts
                    .iter()
                    .enumerate()
                    .flat_map(|(x, row)| row.iter().map(move |&(y, c)| (x, y, c)));
                let w = FolnerWitness::new(support.clone(), triples.collect::<Vec<_>>(), Variant::Nonempty)?;
                match verify_folner(&w, tested, target) {
                    Ok(r) => {
                        return Ok(L2ToFolner { witness: w, grid: m, displacement: q.epsilon, ratio: r.epsilon })
                    }
                    Err(Error::Violation(Violation::Ratio { x, .. })) => x,
                    Err(e) => return Err(e),
                }
            }
            (Some(x), _) => x,
            (None, Some((x, _))) => x,
        };
        if m >= GRID_CAP {
            return Err(Error::Discretization { x: offender, cap: GRID_CAP });
        }
        m = (m * 2).min(GRID_CAP);
    }
}

/// `⌊m ξ_x(y)⌋` off the diagonal, `max(1, ⌊m ξ_x(x)⌋)` on it.
fn round_to_grid(xi: &[Vec<(usize, f64)>], m: u64) -> Vec<Vec<(usize, u64)>> {
    let mf = m as f64;
    xi.iter()
        .enumerate()
        .map(|(x, row)| {
            let mut out: Vec<(usize, u64)> = row
                .iter()
                .map(|&(y, v)| {
                    let c = (mf * v + GRID_SNAP).floor() as u64;
                    (y, if y == x { c.max(1) } else { c })
                })
                .filter(|&(_, c)| c > 0)
                .collect();
            if !out.iter().any(|&(y, _)| y == x) {
                out.push((x, 1));
                out.sort_unstable_by_key(|&(y, _)| y);
            }
            out
        })
        .collect()
}
