//! Example coarse spaces and test families.
//!
//! Every constructor here returns a symmetric entourage containing the
//! diagonal, so powers of it form an increasing exhaustion of the coarse
//! structure it generates.

mod group;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coarse::{Entourage, Space};
use crate::error::{Error, Result};

pub use group::FiniteGroup;

/// Retry budget for the pairing model.
pub const PAIRING_ATTEMPTS: usize = 10_000;

/// A finite metric given as a distance table.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTable {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl MetricTable {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<MetricTable> {
        let n = labels.len();
        if dist.len() != n || dist.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMetric(format!("distance table must be {n}×{n}")));
        }
        let scale = dist.iter().flatten().fold(0.0f64, |m, &d| m.max(d.abs()));
        let tol = 1e-12 * scale.max(1.0);
        for i in 0..n {
            if dist[i][i] != 0.0 {
                return Err(Error::InvalidMetric(format!("d({i}, {i}) ≠ 0")));
            }
            for j in 0..n {
                let d = dist[i][j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidMetric(format!("d({i}, {j}) = {d} is not a finite nonnegative number")));
                }
                if d != dist[j][i] {
                    return Err(Error::InvalidMetric(format!("d({i}, {j}) ≠ d({j}, {i})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] + tol {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails for ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(MetricTable { labels, dist })
    }

    /// Shortest-path metric of a connected graph on `0..n`.
    pub fn graph(n: usize, edges: &[(usize, usize)]) -> Result<MetricTable> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::OutOfRange { id: u.max(v), len: n });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut dist = vec![vec![f64::INFINITY; n]; n];
        for (s, row) in dist.iter_mut().enumerate() {
            let mut queue = std::collections::VecDeque::from([s]);
            row[s] = 0.0;
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if row[v].is_infinite() {
                        row[v] = row[u] + 1.0;
                        queue.push_back(v);
                    }
                }
            }
        }
        if dist.iter().flatten().any(|d| d.is_infinite()) {
            return Err(Error::InvalidMetric("graph is disconnected".into()));
        }
        MetricTable::new((0..n).map(|i| i.to_string()).collect(), dist)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }
}

/// `{(x, y) : d(x, y) ≤ threshold}`.
pub fn metric_space(m: &MetricTable, threshold: f64) -> Result<(Arc<Space>, Entourage)> {
    if !(threshold >= 0.0) {
        return Err(Error::InvalidParameter(format!("threshold must be ≥ 0, got {threshold}")));
    }
    let space = Space::new(m.labels.iter().cloned())?;
    let n = space.len();
    let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| m.dist[x][y] <= threshold);
    let t = Entourage::from_pairs(&space, pairs.collect::<Vec<_>>())?;
    Ok((space, t))
}

/// `T_K = {(k·x, x) : k ∈ K, x ∈ X}` for an action `act[g][x] = g·x`.
pub fn group_action_space(
    g: &FiniteGroup,
    space: &Arc<Space>,
    act: &[Vec<usize>],
    k: &[usize],
) -> Result<Entourage> {
    let n = space.len();
    if act.len() != g.order() || act.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidAction(format!("action table must be {}×{n}", g.order())));
    }
    if act.iter().flatten().any(|&v| v >= n) {
        return Err(Error::InvalidAction("action table entry out of range".into()));
    }
    if (0..n).any(|x| act[g.identity()][x] != x) {
        return Err(Error::InvalidAction("identity does not act trivially".into()));
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            let ab = g.mul(a, b);
            if let Some(x) = (0..n).find(|&x| act[ab][x] != act[a][act[b][x]]) {
                return Err(Error::InvalidAction(format!("(g h)·x ≠ g·(h·x) at g={a}, h={b}, x={x}")));
            }
        }
    }
    if let Some(&bad) = k.iter().find(|&&h| h >= g.order()) {
        return Err(Error::InvalidAction(format!("{bad} is not a group element")));
    }
    Entourage::from_pairs(space, k.iter().flat_map(|&h| (0..n).map(move |x| (act[h][x], x))).collect::<Vec<_>>())
}

/// Left-translation action of a group on itself, as an action table.
pub fn left_translation(g: &FiniteGroup) -> (Arc<Space>, Vec<Vec<usize>>) {
    let space = Space::new(g.elements.iter().cloned()).expect("group labels are unique");
    let act = (0..g.order()).map(|a| (0..g.order()).map(|x| g.mul(a, x)).collect()).collect();
    (space, act)
}

/// Reduced words in the free group on `k` letters of length ≤ `r`. Letter
/// `2i` is generator `i`, letter `2i + 1` its inverse.
pub fn reduced_words(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut words = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &frontier {
            for letter in 0..2 * k {
                if w.last().is_some_and(|&l: &usize| l ^ 1 == letter) {
                    continue;
                }
                let mut v: Vec<usize> = w.clone();
                v.push(letter);
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    words
}

/// `1 + 2k + 2k(2k-1) + … + 2k(2k-1)^{r-1}`.
pub fn free_ball_size(k: usize, r: usize) -> usize {
    let mut total = 1;
    let mut layer = 2 * k;
    for _ in 0..r {
        total += layer;
        layer *= (2 * k).saturating_sub(1);
    }
    total
}

/// Disjoint union of the groups, coarsened by the free-group action through
/// the quotient maps sending the `i`-th free generator to each group's
/// `i`-th generator. Labels are `"m:g"`.
pub fn box_space(seq: &[FiniteGroup], radius: usize) -> Result<(Arc<Space>, Entourage)> {
    let k = seq.first().map_or(0, |g| g.generators.len());
    if let Some((m, g)) = seq.iter().enumerate().find(|(_, g)| g.generators.len() != k) {
        return Err(Error::InvalidGroup(format!(
            "group {m} has {} generators, expected {k}",
            g.generators.len()
        )));
    }
    let words = reduced_words(k, radius);
    let mut labels = Vec::new();
    let mut offsets = Vec::new();
    for (m, g) in seq.iter().enumerate() {
        offsets.push(labels.len());
        labels.extend(g.elements.iter().map(|e| format!("{m}:{e}")));
    }
    let space = Space::new(labels)?;
    let mut pairs = Vec::new();
    for (m, g) in seq.iter().enumerate() {
        let letters: Vec<usize> = g
            .generators
            .iter()
            .flat_map(|&s| [s, g.inverse(s)])
            .collect();
        let images: BTreeSet<usize> = words
            .iter()
            .map(|w| w.iter().fold(g.identity(), |acc, &l| g.mul(acc, letters[l])))
            .collect();
        for &h in &images {
            for x in 0..g.order() {
                pairs.push((offsets[m] + g.mul(h, x), offsets[m] + x));
            }
        }
    }
    let t = Entourage::from_pairs(&space, pairs)?;
    Ok((space, t))
}

/// Cycle `ℤ/n` with `Δ ∪ {(i, i ± 1)}`.
pub fn cycle(n: usize) -> (Arc<Space>, Entourage) {
    let space = Space::numbered(n);
    let pairs: Vec<_> = (0..n)
        .flat_map(|i| [(i, i), (i, (i + 1) % n), ((i + 1) % n, i)])
        .collect();
    let t = Entourage::from_pairs(&space, pairs).expect("ids in range");
    (space, t)
}

/// Path `0 - 1 - … - (n-1)` with `Δ ∪ adjacency`.
pub fn path(n: usize) -> (Arc<Space>, Entourage) {
    let space = Space::numbered(n);
    let t = graph_entourage(&space, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).expect("ids in range");
    (space, t)
}

/// `Δ ∪ {(u, v), (v, u)}` over the given edges.
pub fn graph_entourage(space: &Arc<Space>, edges: &[(usize, usize)]) -> Result<Entourage> {
    let pairs: Vec<_> = (0..space.len())
        .map(|i| (i, i))
        .chain(edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]))
        .collect();
    Entourage::from_pairs(space, pairs)
}

/// Parses an edge list with one `"u v"` pair per line. Blank lines and lines
/// starting with `#` are skipped; points are labelled in order of first
/// appearance.
pub fn parse_edge_list(text: &str) -> Result<(Arc<Space>, Entourage)> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::Schema {
                pointer: format!("line {}", lineno + 1),
                message: format!("expected `u v`, got `{line}`"),
            });
        }
        let mut id = |s: &str| {
            *index.entry(s.to_string()).or_insert_with(|| {
                labels.push(s.to_string());
                labels.len() - 1
            })
        };
        let (u, v) = (id(parts[0]), id(parts[1]));
        edges.push((u, v));
    }
    let space = Space::new(labels)?;
    let t = graph_entourage(&space, &edges)?;
    Ok((space, t))
}

/// Simple `d`-regular graph on `n` vertices from the pairing model, with
/// rejection of loops and multi-edges. Returns `Δ ∪ adjacency`.
pub fn random_regular_graph(n: usize, d: usize, seed: u64) -> Result<(Arc<Space>, Entourage)> {
    if (n * d) % 2 != 0 || (d >= n && !(d == 0 && n == 0)) {
        return Err(Error::InvalidParameter(format!(
            "random regular graph needs n·d even and d < n, got n={n}, d={d}"
        )));
    }
    let space = Space::numbered(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    for _ in 0..PAIRING_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        let ok = stubs.chunks(2).all(|p| {
            let (u, v) = (p[0].min(p[1]), p[0].max(p[1]));
            u != v && seen.insert((u, v))
        });
        if ok {
            let edges: Vec<_> = seen.into_iter().collect();
            let t = graph_entourage(&space, &edges)?;
            return Ok((space, t));
        }
    }
    Err(Error::RandomGraph(format!(
        "pairing model failed {PAIRING_ATTEMPTS} times for n={n}, d={d}"
    )))
}
