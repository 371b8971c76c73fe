//! Banded operators, operator norms, the Schur test, the block compression
//! `Φ_S`, and the Schur-multiplier reconstruction `Ψ`.
//!
//! Window convention: for a window `S` the block at `z` is indexed by
//! `S[z] = {x : (x, z) ∈ S}`. A unit-vector field `η` is compatible with `S`
//! when `η_x(z) ≠ 0` implies `(x, z) ∈ S`; the support of the field is then
//! itself a compatible window, and with it `Ψ ∘ Φ_S` multiplies matrix
//! entries by `⟨η_y, η_x⟩`.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::coarse::{same_space, Entourage, Space};
use crate::error::{Error, Result};
use crate::linalg::{self, C64, ONE, ZERO};
use crate::witness::L2Profile;

/// Above this many points [`operator_norm`] switches to power iteration.
pub const DENSE_LIMIT: usize = 2000;
pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 100_000;

/// An operator on `ℓ²(X)` whose matrix entries vanish off its band.
/// Values are stored in the band's row-major pair order, so an entry outside
/// the band cannot be represented.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedOperator {
    band: Entourage,
    values: Vec<C64>,
}

impl BandedOperator {
    pub fn new(band: Entourage, values: Vec<C64>) -> Result<BandedOperator> {
        if values.len() != band.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a band of {} pairs",
                values.len(),
                band.len()
            )));
        }
        Ok(BandedOperator { band, values })
    }

    pub fn from_fn(band: Entourage, f: impl Fn(usize, usize) -> C64) -> BandedOperator {
        let values = band.pairs().map(|(x, y)| f(x, y)).collect();
        BandedOperator { band, values }
    }

    pub fn from_real_fn(band: Entourage, f: impl Fn(usize, usize) -> f64) -> BandedOperator {
        Self::from_fn(band, |x, y| C64::new(f(x, y), 0.0))
    }

    /// Entries given as `(x, y, value)`; an entry off the band is an error.
    pub fn from_triples(band: Entourage, triples: &[(usize, usize, C64)]) -> Result<BandedOperator> {
        let mut values = vec![ZERO; band.len()];
        for &(x, y, v) in triples {
            match band.position(x, y) {
                Some(k) => values[k] += v,
                None if v == ZERO => {}
                None => {
                    return Err(Error::InvalidParameter(format!("entry ({x}, {y}) lies off the band")));
                }
            }
        }
        Ok(BandedOperator { band, values })
    }

    /// Keeps the entries of `m` on `band`; fails if `m` has mass elsewhere.
    pub fn from_dense(band: Entourage, m: &DMatrix<C64>) -> Result<BandedOperator> {
        let n = band.space().len();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch(format!("{}×{} matrix on {n} points", m.nrows(), m.ncols())));
        }
        for x in 0..n {
            for y in 0..n {
                if m[(x, y)] != ZERO && !band.contains(x, y) {
                    return Err(Error::InvalidParameter(format!("entry ({x}, {y}) lies off the band")));
                }
            }
        }
        Ok(Self::from_fn(band, |x, y| m[(x, y)]))
    }

    pub fn identity(space: &Arc<Space>) -> BandedOperator {
        Self::from_fn(Entourage::diagonal(space), |_, _| ONE)
    }

    pub fn zero(band: Entourage) -> BandedOperator {
        let values = vec![ZERO; band.len()];
        BandedOperator { band, values }
    }

    /// Ones on the off-diagonal pairs of `band`.
    pub fn adjacency(band: &Entourage) -> BandedOperator {
        Self::from_real_fn(band.clone(), |x, y| if x == y { 0.0 } else { 1.0 })
    }

    /// `D - A` over the off-diagonal pairs of `band` (rows summed).
    pub fn laplacian(band: &Entourage) -> BandedOperator {
        let with_diag = band.union(&Entourage::diagonal(band.space())).expect("same space");
        Self::from_real_fn(with_diag, |x, y| {
            if x == y {
                band.row(x).iter().filter(|&&z| z != x).count() as f64
            } else {
                -1.0
            }
        })
    }

    pub fn band(&self) -> &Entourage {
        &self.band
    }

    pub fn space(&self) -> &Arc<Space> {
        self.band.space()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> C64 {
        self.band.position(x, y).map_or(ZERO, |k| self.values[k])
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.band.pairs().zip(&self.values).map(|((x, y), &v)| (x, y, v))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == ZERO)
    }

    /// The pairs carrying a nonzero value.
    pub fn nonzero_pattern(&self) -> Entourage {
        let pairs: Vec<_> = self.entries().filter(|e| e.2 != ZERO).map(|(x, y, _)| (x, y)).collect();
        Entourage::from_pairs(self.space(), pairs).expect("ids in range")
    }

    /// Whether `self ∈ E_T`, i.e. every nonzero entry lies on `t`.
    pub fn lies_in(&self, t: &Entourage) -> bool {
        same_space(self.space(), t.space()) && self.entries().all(|(x, y, v)| v == ZERO || t.contains(x, y))
    }

    /// Re-declares the band; fails if a nonzero entry falls outside it.
    pub fn with_band(&self, band: Entourage) -> Result<BandedOperator> {
        if !self.lies_in(&band) {
            return Err(Error::InvalidParameter("operator has entries off the new band".into()));
        }
        Ok(Self::from_fn(band, |x, y| self.get(x, y)))
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.space().len();
        let mut m = DMatrix::zeros(n, n);
        for (x, y, v) in self.entries() {
            m[(x, y)] = v;
        }
        m
    }

    pub fn scale(&self, s: C64) -> BandedOperator {
        BandedOperator { band: self.band.clone(), values: self.values.iter().map(|&v| v * s).collect() }
    }

    /// `self - other` on the union of the bands.
    pub fn sub(&self, other: &BandedOperator) -> Result<BandedOperator> {
        let band = self.band.union(&other.band)?;
        Ok(Self::from_fn(band, |x, y| self.get(x, y) - other.get(x, y)))
    }

    pub fn add(&self, other: &BandedOperator) -> Result<BandedOperator> {
        let band = self.band.union(&other.band)?;
        Ok(Self::from_fn(band, |x, y| self.get(x, y) + other.get(x, y)))
    }

    /// Entrywise product with `f(x, y)`.
    pub fn schur_product(&self, f: impl Fn(usize, usize) -> C64) -> BandedOperator {
        let values = self.entries().map(|(x, y, v)| v * f(x, y)).collect();
        BandedOperator { band: self.band.clone(), values }
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.space().len();
        (0..n)
            .map(|x| {
                let off = self.band.row_offset(x);
                self.band.row(x).iter().enumerate().map(|(k, &y)| self.values[off + k] * v[y]).sum()
            })
            .collect()
    }

    pub fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.space().len()];
        for (x, y, a) in self.entries() {
            out[y] += a.conj() * v[x];
        }
        out
    }
}

/// `b1 b2`, declared on `T1 ∘ T2`.
pub fn band_product(b1: &BandedOperator, b2: &BandedOperator) -> Result<BandedOperator> {
    let band = b1.band.compose(&b2.band)?;
    let n = band.space().len();
    let mut acc = vec![ZERO; n];
    let mut values = Vec::with_capacity(band.len());
    for x in 0..n {
        let off1 = b1.band.row_offset(x);
        for (k, &z) in b1.band.row(x).iter().enumerate() {
            let a = b1.values[off1 + k];
            let off2 = b2.band.row_offset(z);
            for (l, &y) in b2.band.row(z).iter().enumerate() {
                acc[y] += a * b2.values[off2 + l];
            }
        }
        for &y in band.row(x) {
            values.push(acc[y]);
            acc[y] = ZERO;
        }
    }
    Ok(BandedOperator { band, values })
}

/// `b*`, declared on `T^{-1}`.
pub fn band_adjoint(b: &BandedOperator) -> BandedOperator {
    let band = b.band.inverse();
    BandedOperator::from_fn(band, |x, y| b.get(y, x).conj())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    ExactEig,
    PowerIter,
}

impl NormMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormMethod::ExactEig => "exact_eig",
            NormMethod::PowerIter => "power_iter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub value: f64,
    pub method: NormMethod,
    pub iterations: usize,
    pub residual: f64,
}

/// Spectral norm: dense Hermitian eigensolve of `b* b` up to
/// [`DENSE_LIMIT`] points, power iteration on `b* b` from the all-ones vector
/// beyond.
pub fn operator_norm(b: &BandedOperator) -> Result<NormReport> {
    if b.space().len() <= DENSE_LIMIT {
        return Ok(NormReport {
            value: linalg::spectral_norm(&b.to_dense()),
            method: NormMethod::ExactEig,
            iterations: 0,
            residual: 0.0,
        });
    }
    power_norm(b, POWER_TOL, POWER_MAX_ITER)
}

/// Power iteration on `b* b`; converged once `‖Mv - λv‖ ≤ tol · λ`.
pub fn power_norm(b: &BandedOperator, tol: f64, max_iter: usize) -> Result<NormReport> {
    let n = b.space().len();
    if n == 0 || b.is_zero() {
        return Ok(NormReport { value: 0.0, method: NormMethod::PowerIter, iterations: 0, residual: 0.0 });
    }
    let mut v = vec![C64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let w = b.apply_adjoint(&b.apply(&v));
        let lambda = linalg::dot_conj(&v, &w).re;
        residual = w.iter().zip(&v).map(|(a, c)| (a - c * lambda).norm_sqr()).sum::<f64>().sqrt();
        let norm = linalg::norm2(&w);
        if norm == 0.0 {
            return Ok(NormReport { value: 0.0, method: NormMethod::PowerIter, iterations: it, residual: 0.0 });
        }
        if residual <= tol * lambda {
            return Ok(NormReport {
                value: lambda.max(0.0).sqrt(),
                method: NormMethod::PowerIter,
                iterations: it,
                residual,
            });
        }
        v = w.into_iter().map(|z| z / norm).collect();
    }
    Err(Error::PowerIteration { iterations: max_iter, residual })
}

/// `max{sup #T[x], sup #T^{-1}[x]} · max |b_{x,y}|`.
pub fn schur_bound(b: &BandedOperator) -> f64 {
    b.band.degree().max() as f64 * b.max_abs()
}

/// `Φ_S(b)`: the principal blocks `[b_{x,y}]_{x,y ∈ S[z]}` for every `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFamily {
    window: Entourage,
    blocks: Vec<DMatrix<C64>>,
}

impl BlockFamily {
    /// Blocks must have side `#S[z]`, indexed by `S[z]` in increasing order.
    pub fn new(window: Entourage, blocks: Vec<DMatrix<C64>>) -> Result<BlockFamily> {
        let n = window.space().len();
        if blocks.len() != n {
            return Err(Error::DimensionMismatch(format!("{} blocks for {n} points", blocks.len())));
        }
        for (z, b) in blocks.iter().enumerate() {
            let side = window.ball_of(z).len();
            if b.nrows() != side || b.ncols() != side {
                return Err(Error::DimensionMismatch(format!(
                    "block {z} is {}×{}, window has {side} points",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(BlockFamily { window, blocks })
    }

    pub fn identity(window: &Entourage) -> BlockFamily {
        let blocks = (0..window.space().len())
            .map(|z| DMatrix::identity(window.ball_of(z).len(), window.ball_of(z).len()))
            .collect();
        BlockFamily { window: window.clone(), blocks }
    }

    pub fn window(&self) -> &Entourage {
        &self.window
    }

    pub fn block(&self, z: usize) -> &DMatrix<C64> {
        &self.blocks[z]
    }

    /// Index set `S[z]` of block `z`.
    pub fn indices(&self, z: usize) -> &[usize] {
        self.window.ball_of(z)
    }

    /// Per-block spectral norms.
    pub fn block_norms(&self) -> Vec<f64> {
        self.blocks.par_iter().map(linalg::spectral_norm).collect()
    }

    /// `‖Φ_S(b)‖ = max_z ‖block_z‖`, with the smallest maximizing `z`.
    pub fn norm_with_argmax(&self) -> (f64, Option<usize>) {
        self.block_norms()
            .into_iter()
            .enumerate()
            .fold((0.0, None), |best, (z, v)| if best.1.is_none() || v > best.0 { (v, Some(z)) } else { best })
    }

    pub fn norm(&self) -> f64 {
        self.norm_with_argmax().0
    }
}

/// `Φ_S(b) = [[b_{x,y}]_{x,y ∈ S[z]}]_{z ∈ X}`.
pub fn compress(b: &BandedOperator, window: &Entourage) -> Result<BlockFamily> {
    if !same_space(b.space(), window.space()) {
        return Err(Error::SpaceMismatch);
    }
    let n = window.space().len();
    let blocks = (0..n)
        .into_par_iter()
        .map(|z| {
            let idx = window.ball_of(z);
            DMatrix::from_fn(idx.len(), idx.len(), |i, j| b.get(idx[i], idx[j]))
        })
        .collect();
    Ok(BlockFamily { window: window.clone(), blocks })
}

/// Checks that `η_x(z) ≠ 0` implies `x ∈ S[z]`.
pub fn check_window(window: &Entourage, p: &L2Profile) -> Result<()> {
    if !same_space(window.space(), p.space()) {
        return Err(Error::SpaceMismatch);
    }
    for x in 0..p.space().len() {
        if let Some(&(z, _)) = p.vector(x).iter().find(|&&(z, _)| !window.contains(x, z)) {
            return Err(Error::Precondition(format!(
                "η_{x}({z}) ≠ 0 but {x} is not in the window block at {z}"
            )));
        }
    }
    Ok(())
}

/// `Ψ(c)_{x,y} = Σ_z conj(η_x(z)) c^{(z)}_{x,y} η_y(z)`, with `c^{(z)}_{x,y} = 0`
/// whenever `x` or `y` is outside `S[z]`. Declared on `P ∘ P^{-1}`, `P` the
/// profile support.
pub fn schur_reconstruct(c: &BlockFamily, p: &L2Profile) -> Result<BandedOperator> {
    check_window(&c.window, p)?;
    let support = p.support();
    let band = support.compose(&support.inverse())?;
    let n = p.space().len();
    let rows: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut acc = vec![ZERO; n];
            for &(z, ex) in p.vector(x) {
                let idx = c.indices(z);
                let i = idx.binary_search(&x).expect("window checked");
                let block = &c.blocks[z];
                for (j, &y) in idx.iter().enumerate() {
                    let ey = p.value(y, z);
                    if ey != ZERO {
                        acc[y] += ex.conj() * block[(i, j)] * ey;
                    }
                }
            }
            band.row(x).iter().map(|&y| acc[y]).collect()
        })
        .collect();
    BandedOperator::new(band, rows.into_iter().flatten().collect())
}

/// `‖Ψ ∘ Φ_S(b) - b‖` and the Schur-test bound for it.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    pub defect: f64,
    /// `max{sup #T[x], sup #T^{-1}[x]} · sup_{(x,y) ∈ T} |1 - ⟨η_y, η_x⟩| · max |b_{x,y}|`.
    pub bound: f64,
    /// The `δ` the profile had to beat on `T` (infinite when unchecked).
    pub delta: f64,
    pub operator_norm: f64,
}

/// `‖Ψ ∘ Φ_S(b) - b‖` with `S` the profile support, no preconditions.
pub fn schur_defect(b: &BandedOperator, p: &L2Profile) -> Result<DefectReport> {
    let t = b.band().clone();
    let window = p.support().clone();
    let psi = schur_reconstruct(&compress(b, &window)?, p)?;
    let defect = operator_norm(&psi.sub(b)?)?.value;
    let sup = t
        .pairs()
        .map(|(x, y)| (ONE - p.inner(y, x)).norm())
        .fold(0.0f64, f64::max);
    let bound = t.degree().max() as f64 * sup * b.max_abs();
    let norm = operator_norm(b)?.value;
    Ok(DefectReport { defect, bound, delta: f64::INFINITY, operator_norm: norm })
}

/// Slack allowed when comparing a computed norm against its Schur bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// The nuclearity estimate: for `b ∈ E_T` and a field with displacement
/// below `δ = eps / (‖b‖ · max{sup #T[x], sup #T^{-1}[x]})` on `T`,
/// `‖Ψ ∘ Φ_S(b) - b‖ ≤ bound < eps`.
pub fn nuclearity_defect(b: &BandedOperator, p: &L2Profile, t: &Entourage, eps: f64) -> Result<DefectReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if !b.lies_in(t) {
        return Err(Error::Precondition("operator is not supported on T".into()));
    }
    let b = b.with_band(t.clone())?;
    let norm = operator_norm(&b)?.value;
    let deg = t.degree().max() as f64;
    let delta = if norm == 0.0 || deg == 0.0 { f64::INFINITY } else { eps / (norm * deg) };
    for (x, y) in t.pairs() {
        let d = p.distance(x, y);
        if !(d < delta) {
            return Err(Error::Displacement { x, y, value: d, bound: delta });
        }
    }
    let mut report = schur_defect(&b, p)?;
    report.delta = delta;
    if report.defect > report.bound + BOUND_SLACK {
        return Err(Error::Inequality(format!(
            "defect {} exceeds its Schur bound {}",
            report.defect, report.bound
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn cycle_adjacency(n: usize) -> BandedOperator {
        let s = Space::numbered(n);
        let band = Entourage::from_pairs(&s, (0..n).flat_map(|i| [(i, (i + 1) % n), ((i + 1) % n, i)])).unwrap();
        BandedOperator::adjacency(&band)
    }

    fn shift(n: usize) -> BandedOperator {
        let s = Space::numbered(n);
        let band = Entourage::from_pairs(&s, (0..n).map(|i| ((i + 1) % n, i))).unwrap();
        BandedOperator::from_real_fn(band, |_, _| 1.0)
    }

    fn interval_profile(n: usize, len: usize) -> L2Profile {
        let s = Space::numbered(n);
        let support = Entourage::from_pairs(&s, (0..n).flat_map(|x| (0..len).map(move |j| (x, (x + j) % n)))).unwrap();
        L2Profile::uniform(&support).unwrap()
    }

    #[test]
    fn product_with_identity() {
        let b = cycle_adjacency(6);
        let id = BandedOperator::identity(b.space());
        let p = band_product(&b, &id).unwrap();
        assert_eq!(p.band(), b.band());
        assert_eq!(p, b);
    }

    #[test]
    fn shift_squared() {
        let s = shift(7);
        let s2 = band_product(&s, &s).unwrap();
        let expected = Entourage::from_pairs(s.space(), (0..7).map(|i| ((i + 2) % 7, i))).unwrap();
        assert_eq!(s2.band(), &expected);
        assert!(s2.values().iter().all(|&v| v == ONE));
    }

    #[test]
    fn adjoint_of_product() {
        let s = Space::numbered(5);
        let t1 = Entourage::from_pairs(&s, [(0, 1), (1, 2), (3, 3), (4, 0)]).unwrap();
        let t2 = Entourage::from_pairs(&s, [(1, 4), (2, 2), (0, 3), (3, 1)]).unwrap();
        let b1 = BandedOperator::from_fn(t1, |x, y| C64::new(x as f64 + 1.0, y as f64 - 2.0));
        let b2 = BandedOperator::from_fn(t2, |x, y| C64::new(y as f64 * 0.5, x as f64));
        let lhs = band_adjoint(&band_product(&b1, &b2).unwrap());
        let rhs = band_product(&band_adjoint(&b2), &band_adjoint(&b1)).unwrap();
        assert_eq!(lhs.band(), &b1.band().compose(b2.band()).unwrap().inverse());
        assert!((lhs.to_dense() - rhs.to_dense()).norm() < 1e-14);
    }

    #[test]
    fn adjoint_examples() {
        let b = cycle_adjacency(5);
        assert_eq!(band_adjoint(&b), b);
        let s = shift(5);
        let inv = band_adjoint(&s);
        assert_eq!(inv.band(), &s.band().inverse());
        assert_eq!(band_adjoint(&inv), s);
    }

    #[test]
    fn norms() {
        let id = BandedOperator::identity(&Space::numbered(4));
        assert_abs_diff_eq!(operator_norm(&id).unwrap().value, 1.0, epsilon = 1e-14);
        let s = Space::numbered(3);
        let ones = BandedOperator::from_real_fn(Entourage::full(&s), |_, _| 1.0);
        assert_abs_diff_eq!(operator_norm(&ones).unwrap().value, 3.0, epsilon = 1e-12);
        // eigenvalues 2cos(2πj/24), the largest in modulus is 2
        let oracle = (0..24).map(|j| (2.0 * (2.0 * PI * j as f64 / 24.0).cos()).abs()).fold(0.0, f64::max);
        assert_abs_diff_eq!(operator_norm(&cycle_adjacency(24)).unwrap().value, oracle, epsilon = 1e-12);
    }

    #[test]
    fn power_iteration_matches_dense() {
        let (_, t) = gallery::random_regular_graph(60, 3, 5).unwrap();
        let b = BandedOperator::from_real_fn(t, |x, y| ((x * 31 + y * 17) % 7) as f64 - 3.0);
        let dense = operator_norm(&b).unwrap();
        let power = power_norm(&b, POWER_TOL, POWER_MAX_ITER).unwrap();
        assert_eq!(power.method, NormMethod::PowerIter);
        assert!(power.residual <= POWER_TOL * power.value * power.value);
        assert_abs_diff_eq!(dense.value, power.value, epsilon = 1e-8);
    }

    #[test]
    fn power_iteration_reports_non_convergence() {
        let b = cycle_adjacency(30).scale(C64::new(1.0, 0.0)).add(&BandedOperator::identity(&Space::numbered(30)));
        let b = b.unwrap().schur_product(|x, y| C64::new(1.0 + 0.01 * (x + y) as f64, 0.0));
        assert!(matches!(power_norm(&b, 1e-15, 3), Err(Error::PowerIteration { iterations: 3, .. })));
    }

    #[test]
    fn schur_bounds() {
        let id = BandedOperator::identity(&Space::numbered(4));
        assert_eq!(schur_bound(&id), 1.0);
        let s = Space::numbered(5);
        let ones = BandedOperator::from_real_fn(Entourage::full(&s), |_, _| 1.0);
        assert_eq!(schur_bound(&ones), 5.0);
        let adj = cycle_adjacency(24);
        assert_eq!(schur_bound(&adj), 2.0);
        let widened = adj.with_band(gallery::cycle(24).1).unwrap();
        assert_eq!(schur_bound(&widened), 3.0);
        assert!(operator_norm(&widened).unwrap().value <= schur_bound(&widened));
    }

    #[test]
    fn compress_on_diagonal_window() {
        let b = cycle_adjacency(6).add(&BandedOperator::identity(&Space::numbered(6))).unwrap();
        let fam = compress(&b, &Entourage::diagonal(b.space())).unwrap();
        for z in 0..6 {
            assert_eq!(fam.block(z).shape(), (1, 1));
            assert_eq!(fam.block(z)[(0, 0)], b.get(z, z));
        }
    }

    #[test]
    fn compress_cycle_into_paths() {
        let b = cycle_adjacency(24);
        let window = gallery::cycle(24).1.power(5);
        let fam = compress(&b, &window).unwrap();
        assert_eq!(fam.block(0).shape(), (11, 11));
        assert_abs_diff_eq!(fam.norm(), 2.0 * (PI / 12.0).cos(), epsilon = 1e-12);
        assert!(fam.norm() <= operator_norm(&b).unwrap().value);
    }

    #[test]
    fn compress_is_unital() {
        let window = gallery::cycle(9).1.power(2);
        let fam = compress(&BandedOperator::identity(window.space()), &window).unwrap();
        assert_eq!(fam, BlockFamily::identity(&window));
    }

    #[test]
    fn reconstruct_with_deltas_keeps_diagonal() {
        let b = cycle_adjacency(8).add(&BandedOperator::from_real_fn(Entourage::diagonal(&Space::numbered(8)), |x, _| x as f64)).unwrap();
        let p = L2Profile::delta(b.space());
        let out = schur_reconstruct(&compress(&b, p.support()).unwrap(), &p).unwrap();
        for x in 0..8 {
            for y in 0..8 {
                let expected = if x == y { b.get(x, x) } else { ZERO };
                assert_eq!(out.get(x, y), expected);
            }
        }
    }

    #[test]
    fn reconstruct_is_unital() {
        let p = interval_profile(12, 4);
        let out = schur_reconstruct(&BlockFamily::identity(p.support()), &p).unwrap();
        let diff = out.sub(&BandedOperator::identity(p.space())).unwrap();
        assert!(diff.max_abs() < 1e-15);
    }

    #[test]
    fn gram_identity_entrywise() {
        let p = interval_profile(24, 8);
        let b = BandedOperator::from_fn(gallery::cycle(24).1.power(2), |x, y| C64::new((x + 2 * y) as f64, x as f64 - y as f64));
        let out = schur_reconstruct(&compress(&b, p.support()).unwrap(), &p).unwrap();
        for x in 0..24 {
            for y in 0..24 {
                let expected = p.inner(y, x) * b.get(x, y);
                assert!((out.get(x, y) - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn window_mismatch_is_rejected() {
        let p = interval_profile(10, 3);
        let fam = compress(&BandedOperator::identity(p.space()), &Entourage::diagonal(p.space())).unwrap();
        assert!(matches!(schur_reconstruct(&fam, &p), Err(Error::Precondition(_))));
    }

    #[test]
    fn defect_examples() {
        let s = Space::numbered(6);
        let full = Entourage::full(&s);
        let constant = L2Profile::uniform(&full).unwrap();
        let b = cycle_adjacency(6);
        assert!(schur_defect(&b, &constant).unwrap().defect < 1e-14);

        let r = schur_defect(&cycle_adjacency(24), &interval_profile(24, 8)).unwrap();
        assert_abs_diff_eq!(r.defect, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(r.bound, 0.25, epsilon = 1e-12);

        let b = cycle_adjacency(10);
        let r = schur_defect(&b, &L2Profile::delta(b.space())).unwrap();
        assert_abs_diff_eq!(r.defect, operator_norm(&b).unwrap().value, epsilon = 1e-12);
    }

    #[test]
    fn nuclearity_precondition() {
        let b = cycle_adjacency(24);
        let p = interval_profile(24, 8);
        // displacement 1/2, δ = eps / (2 · 2)
        assert!(matches!(nuclearity_defect(&b, &p, b.band(), 1.0), Err(Error::Displacement { .. })));
        let r = nuclearity_defect(&b, &p, b.band(), 2.5).unwrap();
        assert!(r.defect <= r.bound + BOUND_SLACK && r.bound < 2.5);
    }
}
