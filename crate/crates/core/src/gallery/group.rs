use crate::error::{Error, Result};

/// A finite group given by its multiplication table, with a list of
/// distinguished generators. `table[a][b]` is the id of `a·b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub(crate) elements: Vec<String>,
    pub(crate) table: Vec<Vec<usize>>,
    pub(crate) generators: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the table (closure, associativity, identity, inverses) and
    /// the generator ids.
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<FiniteGroup> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidGroup("no elements".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup(format!("table must be {n}×{n}")));
        }
        if let Some(&bad) = table.iter().flatten().find(|&&v| v >= n) {
            return Err(Error::InvalidGroup(format!("table entry {bad} out of range")));
        }
        if let Some(&g) = generators.iter().find(|&&g| g >= n) {
            return Err(Error::InvalidGroup(format!("generator {g} is not an element")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity && table[b][a] == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroup { elements, table, generators, identity, inverses })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `ℤ/n` with generator `1`.
    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let gens = if n == 1 { vec![0] } else { vec![1] };
        FiniteGroup::new((0..n).map(|i| i.to_string()).collect(), table, gens)
    }

    /// Dihedral group of order `2n`, generated by a rotation `r` and a
    /// reflection `s`. Element `(i, f)` is `r^i s^f`, labelled `r{i}` or `r{i}s`.
    pub fn dihedral(n: usize) -> Result<FiniteGroup> {
        if n < 1 {
            return Err(Error::InvalidGroup("dihedral group needs n ≥ 1".into()));
        }
        let id = |i: usize, f: usize| f * n + i;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for f1 in 0..2 {
            for i1 in 0..n {
                for f2 in 0..2 {
                    for i2 in 0..n {
                        // r^i1 s^f1 · r^i2 s^f2 = r^(i1 ± i2) s^(f1+f2)
                        let i = if f1 == 0 { (i1 + i2) % n } else { (i1 + n - i2) % n };
                        table[id(i1, f1)][id(i2, f2)] = id(i, (f1 + f2) % 2);
                    }
                }
            }
        }
        let labels = (0..2 * n)
            .map(|k| if k < n { format!("r{k}") } else { format!("r{}s", k - n) })
            .collect();
        FiniteGroup::new(labels, table, vec![id(1 % n, 0), id(0, 1)])
    }

    /// Symmetric group on `k ≤ 5` letters generated by the transposition
    /// `(0 1)` and the cycle `(0 1 … k-1)`. Labels are one-line notation.
    pub fn symmetric(k: usize) -> Result<FiniteGroup> {
        if !(1..=5).contains(&k) {
            return Err(Error::InvalidGroup(format!("symmetric groups supported for 1 ≤ k ≤ 5, got {k}")));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..k).collect(), 0, &mut perms);
        perms.sort();
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        // (a·b)(i) = a(b(i))
                        let ab: Vec<usize> = (0..k).map(|i| a[b[i]]).collect();
                        index(&ab)
                    })
                    .collect()
            })
            .collect();
        let mut swap: Vec<usize> = (0..k).collect();
        if k > 1 {
            swap.swap(0, 1);
        }
        let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect::<String>())
            .collect();
        let gens = vec![index(&swap), index(&cycle)];
        FiniteGroup::new(labels, table, gens)
    }
}

fn permutations(p: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == p.len() {
        out.push(p.clone());
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        permutations(p, start + 1, out);
        p.swap(start, i);
    }
}
