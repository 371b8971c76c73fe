//! The four witness forms of property A and the checks that certify them.
//!
//! * [`FolnerWitness`]: finite sections `A_x ⊂ X × ℕ` with small
//!   symmetric-difference-to-intersection ratio along a tested entourage.
//! * [`L1Profile`]: probability vectors `ξ_x`.
//! * [`L2Profile`]: unit vectors `η_x` with controlled support.
//! * [`KernelMatrix`]: a positive definite kernel close to `1` along the
//!   tested entourage.
//!
//! Conversions between them live in [`convert`]; the ball-indicator search
//! in [`search`].

pub mod convert;
pub mod search;

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::coarse::{same_space, Entourage, Space};
use crate::error::{Error, Result, Violation};
use crate::linalg::{self, C64, ZERO};

pub use convert::{
    folner_to_l2, kernel_displacement_bound, kernel_to_l2, l2_to_folner, l2_to_kernel, KernelToL2,
    L2ToFolner, GRID_CAP, GRID_SNAP,
};
pub use search::folner_from_balls;

/// Tolerance on `‖η_x‖ = 1`.
pub const UNIT_TOL: f64 = 1e-12;
/// Tolerance on `k(y, x) = conj k(x, y)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Which form of the diagonal condition a Følner witness claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `(x, 0) ∈ A_x` for every `x`.
    Diagonal,
    /// `A_x ≠ ∅` for every `x`.
    Nonempty,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Diagonal => "diagonal",
            Variant::Nonempty => "nonempty",
        }
    }
}

/// Sections `A_x(y) = {0, 1, …, count(x, y) - 1}` stored as counts.
#[derive(Debug, Clone, PartialEq)]
pub struct FolnerWitness {
    support: Entourage,
    sections: Vec<Vec<(usize, u64)>>,
    variant: Variant,
}

impl FolnerWitness {
    /// `counts` are `(x, y, #A_x(y))`; zero counts are dropped, repeated
    /// pairs are summed.
    pub fn new<I>(support: Entourage, counts: I, variant: Variant) -> Result<FolnerWitness>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let n = support.space().len();
        let mut sections: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for (x, y, c) in counts {
            support.space().check(x)?;
            support.space().check(y)?;
            if c == 0 {
                continue;
            }
            if !support.contains(x, y) {
                return Err(Violation::OutsideSupport { x, y }.into());
            }
            sections[x].push((y, c));
        }
        for row in &mut sections {
            row.sort_unstable_by_key(|&(y, _)| y);
            let mut merged: Vec<(usize, u64)> = Vec::with_capacity(row.len());
            for &(y, c) in row.iter() {
                match merged.last_mut() {
                    Some((py, pc)) if *py == y => *pc += c,
                    _ => merged.push((y, c)),
                }
            }
            *row = merged;
        }
        let w = FolnerWitness { support, sections, variant };
        w.check_variant()?;
        Ok(w)
    }

    fn check_variant(&self) -> Result<()> {
        for (x, row) in self.sections.iter().enumerate() {
            match self.variant {
                Variant::Nonempty if row.is_empty() => return Err(Violation::EmptySection { x }.into()),
                Variant::Diagonal if self.count(x, x) == 0 => {
                    return Err(Violation::MissingDiagonal { x }.into())
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn support(&self) -> &Entourage {
        &self.support
    }

    pub fn space(&self) -> &Arc<Space> {
        self.support.space()
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// `(y, #A_x(y))` for the nonempty sections of `A_x`, sorted by `y`.
    pub fn section(&self, x: usize) -> &[(usize, u64)] {
        &self.sections[x]
    }

    pub fn count(&self, x: usize, y: usize) -> u64 {
        self.sections[x]
            .binary_search_by_key(&y, |&(z, _)| z)
            .map_or(0, |k| self.sections[x][k].1)
    }

    /// `#A_x`.
    pub fn cardinality(&self, x: usize) -> u64 {
        self.sections[x].iter().map(|&(_, c)| c).sum()
    }

    /// Largest index in use, i.e. `max #A_x(y)`.
    pub fn max_index(&self) -> u64 {
        self.sections.iter().flatten().map(|&(_, c)| c).max().unwrap_or(0)
    }

    /// `(#(A_x △ A_y), #(A_x ∩ A_y))`.
    pub fn overlap(&self, x: usize, y: usize) -> (u64, u64) {
        let (a, b) = (&self.sections[x], &self.sections[y]);
        let (mut i, mut j) = (0, 0);
        let (mut sym, mut inter) = (0u64, 0u64);
        while i < a.len() || j < b.len() {
            let ya = a.get(i).map_or(usize::MAX, |p| p.0);
            let yb = b.get(j).map_or(usize::MAX, |p| p.0);
            if ya == yb {
                let (ca, cb) = (a[i].1, b[j].1);
                sym += ca.abs_diff(cb);
                inter += ca.min(cb);
                i += 1;
                j += 1;
            } else if ya < yb {
                sym += a[i].1;
                i += 1;
            } else {
                sym += b[j].1;
                j += 1;
            }
        }
        (sym, inter)
    }

    /// `#(A_x △ A_y) / #(A_x ∩ A_y)`; `0/0` counts as `0`, `k/0` as `∞`.
    pub fn ratio(&self, x: usize, y: usize) -> f64 {
        let (sym, inter) = self.overlap(x, y);
        match (sym, inter) {
            (0, _) => 0.0,
            (_, 0) => f64::INFINITY,
            (s, i) => s as f64 / i as f64,
        }
    }

    /// Same sections over a relabelled space: point `x` becomes `perm[x]`.
    pub fn relabel(&self, space: &Arc<Space>, perm: &[usize]) -> Result<FolnerWitness> {
        let support = Entourage::from_pairs(space, self.support.pairs().map(|(x, y)| (perm[x], perm[y])))?;
        let counts = self
            .sections
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().map(move |&(y, c)| (perm[x], perm[y], c)));
        FolnerWitness::new(support, counts.collect::<Vec<_>>(), self.variant)
    }
}

/// Probability vectors `ξ_x` with controlled support.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Profile {
    support: Entourage,
    vectors: Vec<Vec<(usize, f64)>>,
}

impl L1Profile {
    pub fn new(support: Entourage, vectors: Vec<Vec<(usize, f64)>>) -> Result<L1Profile> {
        let vectors = sparse_rows(&support, vectors, |v: &f64| *v != 0.0)?;
        for (x, row) in vectors.iter().enumerate() {
            if let Some(&(y, _)) = row.iter().find(|(_, v)| !(*v >= 0.0) || !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("ξ_{x}({y}) is negative or not finite")));
            }
        }
        Ok(L1Profile { support, vectors })
    }

    pub fn support(&self) -> &Entourage {
        &self.support
    }

    pub fn vector(&self, x: usize) -> &[(usize, f64)] {
        &self.vectors[x]
    }

    /// `‖ξ_x - ξ_y‖₁`.
    pub fn distance(&self, x: usize, y: usize) -> f64 {
        merge_fold(&self.vectors[x], &self.vectors[y], 0.0, |acc, a, b| acc + (a - b).abs())
    }
}

/// Unit vectors `η_x` with `{(x, y) : η_x(y) ≠ 0} ⊆ support`.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Profile {
    support: Entourage,
    vectors: Vec<Vec<(usize, C64)>>,
}

impl L2Profile {
    pub fn new(support: Entourage, vectors: Vec<Vec<(usize, C64)>>) -> Result<L2Profile> {
        let vectors = sparse_rows(&support, vectors, |v: &C64| *v != ZERO)?;
        let p = L2Profile { support, vectors };
        p.check_unit()?;
        Ok(p)
    }

    pub fn from_real(support: Entourage, vectors: Vec<Vec<(usize, f64)>>) -> Result<L2Profile> {
        let vectors = vectors
            .into_iter()
            .map(|row| row.into_iter().map(|(y, v)| (y, C64::new(v, 0.0))).collect())
            .collect();
        L2Profile::new(support, vectors)
    }

    /// `η_x = δ_x` on support `Δ_X`.
    pub fn delta(space: &Arc<Space>) -> L2Profile {
        let vectors = (0..space.len()).map(|x| vec![(x, C64::new(1.0, 0.0))]).collect();
        L2Profile { support: Entourage::diagonal(space), vectors }
    }

    /// Normalized indicator of `{y : (x, y) ∈ support}` for every `x`.
    pub fn uniform(support: &Entourage) -> Result<L2Profile> {
        let n = support.space().len();
        let vectors = (0..n)
            .map(|x| {
                let row = support.row(x);
                let v = C64::new(1.0 / (row.len() as f64).sqrt(), 0.0);
                row.iter().map(|&y| (y, v)).collect()
            })
            .collect();
        L2Profile::new(support.clone(), vectors)
    }

    fn check_unit(&self) -> Result<()> {
        for x in 0..self.vectors.len() {
            let norm = self.norm(x);
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::NotUnit { x, norm });
            }
        }
        Ok(())
    }

    pub fn support(&self) -> &Entourage {
        &self.support
    }

    pub fn space(&self) -> &Arc<Space> {
        self.support.space()
    }

    pub fn vector(&self, x: usize) -> &[(usize, C64)] {
        &self.vectors[x]
    }

    pub fn value(&self, x: usize, y: usize) -> C64 {
        self.vectors[x]
            .binary_search_by_key(&y, |&(z, _)| z)
            .map_or(ZERO, |k| self.vectors[x][k].1)
    }

    pub fn norm(&self, x: usize) -> f64 {
        self.vectors[x].iter().map(|(_, v)| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨η_x, η_y⟩ = Σ_z η_x(z) conj(η_y(z))`.
    pub fn inner(&self, x: usize, y: usize) -> C64 {
        merge_fold(&self.vectors[x], &self.vectors[y], ZERO, |acc, a, b| acc + a * b.conj())
    }

    /// `‖η_x - η_y‖₂`.
    pub fn distance(&self, x: usize, y: usize) -> f64 {
        merge_fold(&self.vectors[x], &self.vectors[y], 0.0, |acc, a, b| acc + (a - b).norm_sqr()).sqrt()
    }

    pub fn is_real(&self) -> bool {
        self.vectors.iter().flatten().all(|(_, v)| v.im == 0.0)
    }

    /// Dense `|X| × |X|` matrix whose column `x` is `η_x`.
    pub fn to_dense_columns(&self) -> DMatrix<C64> {
        let n = self.vectors.len();
        let mut m = DMatrix::zeros(n, n);
        for (x, row) in self.vectors.iter().enumerate() {
            for &(y, v) in row {
                m[(y, x)] = v;
            }
        }
        m
    }
}

/// A kernel `k : X² → ℂ` stored on its support entourage.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    support: Entourage,
    values: Vec<C64>,
}

impl KernelMatrix {
    /// `values` follow the row-major pair order of `support`.
    pub fn new(support: Entourage, values: Vec<C64>) -> Result<KernelMatrix> {
        if values.len() != support.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} kernel values for a support of {} pairs",
                values.len(),
                support.len()
            )));
        }
        Ok(KernelMatrix { support, values })
    }

    pub fn from_fn(support: Entourage, f: impl Fn(usize, usize) -> C64) -> KernelMatrix {
        let values = support.pairs().map(|(x, y)| f(x, y)).collect();
        KernelMatrix { support, values }
    }

    pub fn from_triples(support: Entourage, triples: &[(usize, usize, C64)]) -> Result<KernelMatrix> {
        let mut values = vec![ZERO; support.len()];
        for &(x, y, v) in triples {
            match support.position(x, y) {
                Some(k) => values[k] = v,
                None if v == ZERO => {}
                None => return Err(Violation::OutsideSupport { x, y }.into()),
            }
        }
        Ok(KernelMatrix { support, values })
    }

    pub fn support(&self) -> &Entourage {
        &self.support
    }

    pub fn space(&self) -> &Arc<Space> {
        self.support.space()
    }

    pub fn get(&self, x: usize, y: usize) -> C64 {
        self.support.position(x, y).map_or(ZERO, |k| self.values[k])
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.support.pairs().zip(&self.values).map(|((x, y), &v)| (x, y, v))
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.space().len();
        let mut m = DMatrix::zeros(n, n);
        for (x, y, v) in self.entries() {
            m[(x, y)] = v;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    pub fn hermitian_defect(&self) -> (f64, Option<(usize, usize)>) {
        let mut worst = (0.0, None);
        for (x, y, v) in self.entries() {
            let d = (v - self.get(y, x).conj()).norm();
            if d > worst.0 {
                worst = (d, Some((x, y)));
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.to_dense())
    }

    /// Accepted PSD slack `10⁻⁹ · n · max|k|`.
    pub fn psd_tolerance(&self) -> f64 {
        1e-9 * self.space().len() as f64 * self.max_abs()
    }
}

/// The `ε` achieved by a witness on a tested entourage.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessQuality {
    pub epsilon: f64,
    pub tested: Entourage,
    /// Pair realizing `epsilon`, smallest in row-major order on ties.
    pub worst_pair: Option<(usize, usize)>,
}

impl WitnessQuality {
    /// No pairs were tested.
    pub fn vacuous(&self) -> bool {
        self.tested.is_empty()
    }
}

/// Result of [`verify_kernel`].
#[derive(Debug, Clone, PartialEq)]
pub struct KernelQuality {
    pub quality: WitnessQuality,
    pub min_eigenvalue: f64,
    /// Every nonzero value lies on the declared support.
    pub inside_support: bool,
}

fn sparse_rows<T: Copy>(
    support: &Entourage,
    vectors: Vec<Vec<(usize, T)>>,
    nonzero: impl Fn(&T) -> bool,
) -> Result<Vec<Vec<(usize, T)>>> {
    let n = support.space().len();
    if vectors.len() != n {
        return Err(Error::DimensionMismatch(format!("{} vectors for {n} points", vectors.len())));
    }
    vectors
        .into_iter()
        .enumerate()
        .map(|(x, mut row)| {
            row.retain(|(_, v)| nonzero(v));
            row.sort_by_key(|&(y, _)| y);
            for w in row.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::InvalidParameter(format!("repeated entry ({x}, {})", w[0].0)));
                }
            }
            for &(y, _) in &row {
                support.space().check(y)?;
                if !support.contains(x, y) {
                    return Err(Violation::OutsideSupport { x, y }.into());
                }
            }
            Ok(row)
        })
        .collect()
}

/// Folds `f(acc, a_i, b_i)` over the union of two sorted sparse supports.
fn merge_fold<T: Copy + Default, A>(a: &[(usize, T)], b: &[(usize, T)], init: A, f: impl Fn(A, T, T) -> A) -> A {
    let (mut i, mut j) = (0, 0);
    let mut acc = init;
    while i < a.len() || j < b.len() {
        let ya = a.get(i).map_or(usize::MAX, |p| p.0);
        let yb = b.get(j).map_or(usize::MAX, |p| p.0);
        if ya == yb {
            acc = f(acc, a[i].1, b[j].1);
            i += 1;
            j += 1;
        } else if ya < yb {
            acc = f(acc, a[i].1, T::default());
            i += 1;
        } else {
            acc = f(acc, T::default(), b[j].1);
            j += 1;
        }
    }
    acc
}

fn check_tested(space: &Arc<Space>, tested: &Entourage) -> Result<()> {
    if same_space(space, tested.space()) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// Sup of `score(x, y)` over `tested`, with row-major tie-break.
fn sup_over(tested: &Entourage, score: impl Fn(usize, usize) -> f64 + Sync) -> (f64, Option<(usize, usize)>) {
    let n = tested.space().len();
    let per_row: Vec<(f64, Option<(usize, usize)>)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut best = (0.0, None);
            for &y in tested.row(x) {
                let s = score(x, y);
                if best.1.is_none() || s > best.0 {
                    best = (s, Some((x, y)));
                }
            }
            best
        })
        .collect();
    per_row.into_iter().fold((0.0, None), |best, cand| {
        if cand.1.is_some() && (best.1.is_none() || cand.0 > best.0) {
            cand
        } else {
            best
        }
    })
}

/// Checks all conditions of the Følner definition and returns the largest
/// ratio `#(A_x △ A_y) / #(A_x ∩ A_y)` over `tested`. The bound is strict:
/// a ratio equal to `eps` is a violation.
pub fn verify_folner(w: &FolnerWitness, tested: &Entourage, eps: f64) -> Result<WitnessQuality> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    check_tested(w.space(), tested)?;
    for (x, row) in w.sections.iter().enumerate() {
        if let Some(&(y, _)) = row.iter().find(|&&(y, _)| !w.support.contains(x, y)) {
            return Err(Violation::OutsideSupport { x, y }.into());
        }
    }
    w.check_variant()?;
    let (ratio, pair) = sup_over(tested, |x, y| w.ratio(x, y));
    if let Some((x, y)) = pair {
        let (sym, inter) = w.overlap(x, y);
        if !((sym as f64) < eps * inter as f64) {
            return Err(Violation::Ratio { x, y, ratio, eps }.into());
        }
    }
    Ok(WitnessQuality { epsilon: ratio, tested: tested.clone(), worst_pair: pair })
}

/// `sup_{(x, y) ∈ T} ‖η_x - η_y‖₂`.
pub fn verify_l2(p: &L2Profile, tested: &Entourage) -> Result<WitnessQuality> {
    check_tested(p.space(), tested)?;
    p.check_unit()?;
    let (eps, pair) = sup_over(tested, |x, y| p.distance(x, y));
    Ok(WitnessQuality { epsilon: eps, tested: tested.clone(), worst_pair: pair })
}

/// Min eigenvalue, `sup_{(x, y) ∈ T} |1 - k(x, y)|`, and support containment.
pub fn verify_kernel(k: &KernelMatrix, tested: &Entourage) -> Result<KernelQuality> {
    check_tested(k.space(), tested)?;
    let (defect, at) = k.hermitian_defect();
    if defect > HERMITIAN_TOL {
        let (x, y) = at.expect("nonzero defect has a location");
        return Err(Error::NotHermitian { x, y, defect });
    }
    let (eps, pair) = sup_over(tested, |x, y| (C64::new(1.0, 0.0) - k.get(x, y)).norm());
    Ok(KernelQuality {
        quality: WitnessQuality { epsilon: eps, tested: tested.clone(), worst_pair: pair },
        min_eigenvalue: k.min_eigenvalue(),
        // values are stored on the support only
        inside_support: true,
    })
}

/// Dense check that every nonzero of `m` lies on `support`.
pub fn dense_inside(m: &DMatrix<C64>, support: &Entourage) -> bool {
    (0..m.nrows()).all(|x| (0..m.ncols()).all(|y| m[(x, y)] == ZERO || support.contains(x, y)))
}
