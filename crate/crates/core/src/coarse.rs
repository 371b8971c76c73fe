//! Finite ground sets and entourages.
//!
//! An [`Entourage`] is a finite relation `T ⊂ X × X`. The ball convention
//! throughout the crate is
//!
//! ```text
//! T[Y] = { x : ∃ y ∈ Y, (x, y) ∈ T }
//! ```
//!
//! so `T[x]` is the *column* of `T` at `x`. Relations are stored twice, as
//! row adjacency (`x ↦ {y : (x, y) ∈ T}`, which is `T^{-1}[x]`) and as column
//! adjacency (`x ↦ T[x]`). Both are sorted by id and describe the same pairs.
//! Operators in [`crate::roe`] index their stored entries by the row-major
//! order of the pairs.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite labelled point set. Labels are opaque; everything numeric uses
/// the dense ids `0..len`.
#[derive(Clone, PartialEq, Eq)]
pub struct Space {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Space").field("points", &self.labels.len()).finish()
    }
}

impl Space {
    pub fn new<I, S>(labels: I) -> Result<Arc<Space>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (id, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), id).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Arc::new(Space { labels, index }))
    }

    /// Points labelled `"0"`, `"1"`, ..., `"n-1"`.
    pub fn numbered(n: usize) -> Arc<Space> {
        Space::new((0..n).map(|i| i.to_string())).expect("numbered labels are unique")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn ids<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.id(l.as_ref())).collect()
    }

    pub(crate) fn check(&self, id: usize) -> Result<()> {
        if id < self.len() {
            Ok(())
        } else {
            Err(Error::OutOfRange { id, len: self.len() })
        }
    }
}

pub(crate) fn same_space(a: &Arc<Space>, b: &Arc<Space>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// `sup_x #T[x]` and `sup_x #T^{-1}[x]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeBound {
    pub fwd_deg: usize,
    pub bwd_deg: usize,
}

impl DegreeBound {
    /// The constant `max{sup #T[x], sup #T^{-1}[x]}` of the Schur test.
    pub fn max(&self) -> usize {
        self.fwd_deg.max(self.bwd_deg)
    }
}

/// A finite relation on a [`Space`].
#[derive(Clone)]
pub struct Entourage {
    space: Arc<Space>,
    row_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    col_ptr: Vec<usize>,
    col_idx: Vec<usize>,
}

impl fmt::Debug for Entourage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Entourage")
            .field("points", &self.space.len())
            .field("pairs", &self.pairs().collect::<Vec<_>>())
            .finish()
    }
}

impl PartialEq for Entourage {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space)
            && self.row_ptr == other.row_ptr
            && self.row_idx == other.row_idx
    }
}

impl Eq for Entourage {}

fn csr(n: usize, sorted: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    let mut ptr = vec![0usize; n + 1];
    for &(a, _) in sorted {
        ptr[a + 1] += 1;
    }
    for i in 0..n {
        ptr[i + 1] += ptr[i];
    }
    (ptr, sorted.iter().map(|&(_, b)| b).collect())
}

impl Entourage {
    /// Builds a relation from arbitrary `(x, y)` pairs; duplicates collapse.
    pub fn from_pairs<I>(space: &Arc<Space>, pairs: I) -> Result<Entourage>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut rows: Vec<(usize, usize)> = pairs.into_iter().collect();
        for &(x, y) in &rows {
            space.check(x)?;
            space.check(y)?;
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(Self::from_sorted(space.clone(), rows))
    }

    pub fn from_label_pairs<S: AsRef<str>>(space: &Arc<Space>, pairs: &[(S, S)]) -> Result<Entourage> {
        let ids = pairs
            .iter()
            .map(|(a, b)| Ok((space.id(a.as_ref())?, space.id(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(space, ids)
    }

    fn from_sorted(space: Arc<Space>, rows: Vec<(usize, usize)>) -> Entourage {
        let n = space.len();
        let (row_ptr, row_idx) = csr(n, &rows);
        let mut cols: Vec<(usize, usize)> = rows.iter().map(|&(x, y)| (y, x)).collect();
        cols.sort_unstable();
        let (col_ptr, col_idx) = csr(n, &cols);
        Entourage { space, row_ptr, row_idx, col_ptr, col_idx }
    }

    pub fn empty(space: &Arc<Space>) -> Entourage {
        Self::from_sorted(space.clone(), Vec::new())
    }

    /// `Δ_X`.
    pub fn diagonal(space: &Arc<Space>) -> Entourage {
        Self::from_sorted(space.clone(), (0..space.len()).map(|x| (x, x)).collect())
    }

    /// `X × X`.
    pub fn full(space: &Arc<Space>) -> Entourage {
        let n = space.len();
        let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
        Self::from_sorted(space.clone(), pairs)
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.row_idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_idx.is_empty()
    }

    /// All pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.space.len()).flat_map(move |x| self.row(x).iter().map(move |&y| (x, y)))
    }

    /// `{y : (x, y) ∈ T}`, which is `T^{-1}[x]`.
    pub fn row(&self, x: usize) -> &[usize] {
        &self.row_idx[self.row_ptr[x]..self.row_ptr[x + 1]]
    }

    /// Offset of row `x` in the row-major pair order.
    pub(crate) fn row_offset(&self, x: usize) -> usize {
        self.row_ptr[x]
    }

    /// Position of `(x, y)` in the row-major pair order.
    pub fn position(&self, x: usize, y: usize) -> Option<usize> {
        self.row(x).binary_search(&y).ok().map(|k| self.row_ptr[x] + k)
    }

    /// `T[x] = {w : (w, x) ∈ T}`.
    pub fn ball_of(&self, x: usize) -> &[usize] {
        &self.col_idx[self.col_ptr[x]..self.col_ptr[x + 1]]
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.space.len() && y < self.space.len() && self.row(x).binary_search(&y).is_ok()
    }

    fn ensure_same(&self, other: &Entourage) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `T^{-1} = {(x, y) : (y, x) ∈ T}`.
    pub fn inverse(&self) -> Entourage {
        Entourage {
            space: self.space.clone(),
            row_ptr: self.col_ptr.clone(),
            row_idx: self.col_idx.clone(),
            col_ptr: self.row_ptr.clone(),
            col_idx: self.row_idx.clone(),
        }
    }

    /// `T1 ∘ T2 = {(x, y) : ∃ z, (x, z) ∈ T1, (z, y) ∈ T2}`.
    pub fn compose(&self, other: &Entourage) -> Result<Entourage> {
        self.ensure_same(other)?;
        let n = self.space.len();
        let mut mark = vec![usize::MAX; n];
        let mut out = Vec::new();
        let mut row = Vec::new();
        for x in 0..n {
            row.clear();
            for &z in self.row(x) {
                for &y in other.row(z) {
                    if mark[y] != x {
                        mark[y] = x;
                        row.push(y);
                    }
                }
            }
            row.sort_unstable();
            out.extend(row.iter().map(|&y| (x, y)));
        }
        Ok(Self::from_sorted(self.space.clone(), out))
    }

    /// `T^{∘n}`, with `T^{∘0} = Δ_X`.
    pub fn power(&self, n: usize) -> Entourage {
        let mut acc = Entourage::diagonal(&self.space);
        for _ in 0..n {
            acc = acc.compose(self).expect("same space");
        }
        acc
    }

    pub fn union(&self, other: &Entourage) -> Result<Entourage> {
        self.ensure_same(other)?;
        let mut pairs: Vec<_> = self.pairs().chain(other.pairs()).collect();
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_sorted(self.space.clone(), pairs))
    }

    pub fn intersection(&self, other: &Entourage) -> Result<Entourage> {
        self.ensure_same(other)?;
        let pairs = self.pairs().filter(|&(x, y)| other.contains(x, y)).collect();
        Ok(Self::from_sorted(self.space.clone(), pairs))
    }

    pub fn is_subset(&self, other: &Entourage) -> bool {
        same_space(&self.space, &other.space) && self.pairs().all(|(x, y)| other.contains(x, y))
    }

    /// `Δ_X ∪ T ∪ T^{-1}`.
    pub fn symmetrized(&self) -> Entourage {
        let mut pairs: Vec<_> = self
            .pairs()
            .chain(self.pairs().map(|(x, y)| (y, x)))
            .chain((0..self.space.len()).map(|x| (x, x)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        Self::from_sorted(self.space.clone(), pairs)
    }

    pub fn is_symmetric(&self) -> bool {
        self.row_ptr == self.col_ptr && self.row_idx == self.col_idx
    }

    pub fn contains_diagonal(&self) -> bool {
        (0..self.space.len()).all(|x| self.contains(x, x))
    }

    /// `T[Y]`, sorted.
    pub fn ball(&self, ys: &[usize]) -> Result<Vec<usize>> {
        let n = self.space.len();
        let mut seen = vec![false; n];
        for &y in ys {
            self.space.check(y)?;
            for &x in self.ball_of(y) {
                seen[x] = true;
            }
        }
        Ok((0..n).filter(|&x| seen[x]).collect())
    }

    pub fn ball_labels<S: AsRef<str>>(&self, ys: &[S]) -> Result<Vec<usize>> {
        self.ball(&self.space.ids(ys)?)
    }

    pub fn degree(&self) -> DegreeBound {
        let n = self.space.len();
        let width = |ptr: &[usize]| (0..n).map(|x| ptr[x + 1] - ptr[x]).max().unwrap_or(0);
        DegreeBound { fwd_deg: width(&self.col_ptr), bwd_deg: width(&self.row_ptr) }
    }

    /// Smallest `x` with `Y ⊆ T[x]`, if any.
    pub fn bounded_witness(&self, ys: &[usize]) -> Option<usize> {
        (0..self.space.len())
            .find(|&x| ys.iter().all(|&y| self.ball_of(x).binary_search(&y).is_ok()))
    }

    /// Whether `Y` is `T`-bounded.
    pub fn bounds(&self, ys: &[usize]) -> bool {
        self.bounded_witness(ys).is_some()
    }
}
