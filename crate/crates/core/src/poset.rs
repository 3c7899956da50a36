//! Finite posets stored as dense order matrices, monotone maps and chains.
//!
//! Open sets are up-sets: `U_x = {y : x ≤ y}`.

use std::collections::HashMap;

use crate::error::{Result, WorkbenchError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Builds from a full `leq` matrix, checking the partial-order axioms.
    pub fn from_matrix(ids: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = ids.len();
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(WorkbenchError::InvalidPoset(format!("duplicate element `{id}`")));
            }
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(WorkbenchError::InvalidPoset("order matrix has wrong shape".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(WorkbenchError::InvalidPoset(format!("`{}` is not ≤ itself", ids[i])));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(WorkbenchError::InvalidPoset(format!(
                        "antisymmetry fails for `{}` and `{}`",
                        ids[i], ids[j]
                    )));
                }
                if !leq[i][j] {
                    continue;
                }
                for k in 0..n {
                    if leq[j][k] && !leq[i][k] {
                        return Err(WorkbenchError::InvalidPoset(format!(
                            "transitivity fails for `{}` ≤ `{}` ≤ `{}`",
                            ids[i], ids[j], ids[k]
                        )));
                    }
                }
            }
        }
        Ok(Poset { ids, index, leq })
    }

    /// Builds the order generated by the given `(lower, upper)` pairs.
    pub fn from_relations(ids: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = ids.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(WorkbenchError::InvalidPoset(format!("relation ({a}, {b}) out of range")));
            }
            leq[a][b] = true;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_matrix(ids, leq)
    }

    /// Same as [`Poset::from_relations`] with relations given by element names.
    pub fn from_named_relations(ids: &[&str], pairs: &[(&str, &str)]) -> Result<Self> {
        let ids: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
        let pos =
            |s: &str| ids.iter().position(|x| x == s).ok_or_else(|| WorkbenchError::ElementNotFound(s.to_string()));
        let mut idx = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            idx.push((pos(a)?, pos(b)?));
        }
        Self::from_relations(ids, &idx)
    }

    pub fn antichain(ids: Vec<String>) -> Result<Self> {
        Self::from_relations(ids, &[])
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| WorkbenchError::ElementNotFound(id.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// `a ⋖ b`: `a < b` with nothing strictly between.
    pub fn covers(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) && !(0..self.len()).any(|c| self.lt(a, c) && self.lt(c, b))
    }

    /// All covering pairs, sorted by `(lower, upper)`.
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.covers(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn upper_covers(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.covers(a, b)).collect()
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq[x][y]).collect()
    }

    pub fn up_set_of(&self, id: &str) -> Result<Vec<String>> {
        let x = self.index_of(id)?;
        Ok(self.up_set(x).into_iter().map(|y| self.ids[y].clone()).collect())
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq[y][x]).collect()
    }

    /// Elements above every member of `s`.
    pub fn upper_bounds(&self, s: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|&t| s.iter().all(|&x| self.leq[x][t])).collect()
    }

    pub fn minimal_elements(&self, s: &[usize]) -> Vec<usize> {
        s.iter().copied().filter(|&x| !s.iter().any(|&y| self.lt(y, x))).collect()
    }

    pub fn maximal_elements(&self, s: &[usize]) -> Vec<usize> {
        s.iter().copied().filter(|&x| !s.iter().any(|&y| self.lt(x, y))).collect()
    }

    /// The unique `s ∈ S` below all of `S`, if any.
    pub fn minimum(&self, s: &[usize]) -> Option<usize> {
        s.iter().copied().find(|&x| s.iter().all(|&y| self.leq[x][y]))
    }

    pub fn maximum(&self, s: &[usize]) -> Option<usize> {
        s.iter().copied().find(|&x| s.iter().all(|&y| self.leq[y][x]))
    }

    /// Least upper bound of `s`, if it exists.
    pub fn join(&self, s: &[usize]) -> Option<usize> {
        self.minimum(&self.upper_bounds(s))
    }

    /// Strictly increasing `(k+1)`-tuples in lexicographic order of indices.
    pub fn chains(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k + 1);
        for x in 0..self.len() {
            cur.push(x);
            self.extend_chains(&mut cur, k, &mut out);
            cur.pop();
        }
        out
    }

    fn extend_chains(&self, cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().unwrap();
        for y in 0..self.len() {
            if self.lt(last, y) {
                cur.push(y);
                self.extend_chains(cur, k, out);
                cur.pop();
            }
        }
    }

    /// Length of the longest chain (number of elements minus one); 0 for empty posets.
    pub fn height(&self) -> usize {
        let n = self.len();
        // longest chain ending at each element, indices visited in a linear extension
        let order = self.linear_extension();
        let mut best = vec![0usize; n];
        for &y in &order {
            for &x in &order {
                if self.lt(x, y) {
                    best[y] = best[y].max(best[x] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Indices sorted so that `x < y` implies `x` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).collect();
        v.sort_by_key(|&x| (self.down_set(x).len(), x));
        v
    }

    /// Lexicographically least chain of covers from `x` to `z` (inclusive), if `x ≤ z`.
    pub fn cover_chain(&self, x: usize, z: usize) -> Option<Vec<usize>> {
        if !self.leq[x][z] {
            return None;
        }
        let mut chain = vec![x];
        let mut cur = x;
        while cur != z {
            let next = self
                .upper_covers(cur)
                .into_iter()
                .find(|&y| self.leq[y][z])
                .expect("a cover toward z exists whenever cur < z");
            chain.push(next);
            cur = next;
        }
        Some(chain)
    }

    /// Every maximal chain of covers from `x` to `z`.
    pub fn all_cover_chains(&self, x: usize, z: usize) -> Vec<Vec<usize>> {
        if !self.leq[x][z] {
            return Vec::new();
        }
        if x == z {
            return vec![vec![x]];
        }
        let mut out = Vec::new();
        for y in self.upper_covers(x) {
            if self.leq[y][z] {
                for mut tail in self.all_cover_chains(y, z) {
                    tail.insert(0, x);
                    out.push(tail);
                }
            }
        }
        out
    }

    /// The sub-poset on `subset` (kept in the given order).
    pub fn restrict(&self, subset: &[usize]) -> Poset {
        let ids = subset.iter().map(|&i| self.ids[i].clone()).collect();
        let leq = subset.iter().map(|&a| subset.iter().map(|&b| self.leq[a][b]).collect()).collect();
        Poset::from_matrix(ids, leq).expect("sub-posets inherit the order axioms")
    }
}

/// An element assignment between two posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    pub source: Poset,
    pub target: Poset,
    pub assignment: Vec<usize>,
}

impl MonotoneMap {
    /// Checks totality and order preservation.
    pub fn new(source: Poset, target: Poset, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() || assignment.iter().any(|&y| y >= target.len()) {
            return Err(WorkbenchError::NotMonotone("assignment is not total".into()));
        }
        let m = MonotoneMap { source, target, assignment };
        if let Some((a, b)) = m.violation() {
            return Err(WorkbenchError::NotMonotone(format!(
                "`{}` ≤ `{}` but images `{}` and `{}` are not ordered",
                m.source.id(a),
                m.source.id(b),
                m.target.id(m.assignment[a]),
                m.target.id(m.assignment[b])
            )));
        }
        Ok(m)
    }

    pub fn identity(p: &Poset) -> Self {
        MonotoneMap { source: p.clone(), target: p.clone(), assignment: (0..p.len()).collect() }
    }

    pub fn to_point(p: &Poset, point: &Poset) -> Self {
        MonotoneMap { source: p.clone(), target: point.clone(), assignment: vec![0; p.len()] }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    fn violation(&self) -> Option<(usize, usize)> {
        let n = self.source.len();
        for a in 0..n {
            for b in 0..n {
                if self.source.leq(a, b) && !self.target.leq(self.assignment[a], self.assignment[b]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_monotone(&self) -> bool {
        self.violation().is_none()
    }

    /// `f^{-1}(U_y)` as sorted source indices.
    pub fn preimage_of_up_set(&self, y: usize) -> Vec<usize> {
        (0..self.source.len()).filter(|&x| self.target.leq(y, self.assignment[x])).collect()
    }

    pub fn compose(&self, g: &MonotoneMap) -> MonotoneMap {
        MonotoneMap {
            source: self.source.clone(),
            target: g.target.clone(),
            assignment: self.assignment.iter().map(|&y| g.assignment[y]).collect(),
        }
    }
}

/// Order-preservation test on a raw assignment.
pub fn check_monotone(source: &Poset, target: &Poset, assignment: &[usize]) -> bool {
    MonotoneMap { source: source.clone(), target: target.clone(), assignment: assignment.to_vec() }.is_monotone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> Poset {
        Poset::from_named_relations(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
    }

    fn p1() -> Poset {
        Poset::from_named_relations(&["p0", "p1", "p01"], &[("p0", "p01"), ("p1", "p01")]).unwrap()
    }

    #[test]
    fn up_sets() {
        let c = chain3();
        assert_eq!(c.up_set_of("a").unwrap(), vec!["a", "b", "c"]);
        assert_eq!(c.up_set_of("c").unwrap(), vec!["c"]);
        assert_eq!(p1().up_set_of("p1").unwrap(), vec!["p1", "p01"]);
        assert!(matches!(c.up_set_of("z"), Err(WorkbenchError::ElementNotFound(_))));
    }

    #[test]
    fn chain_enumeration() {
        let anti = Poset::antichain(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        assert!(anti.chains(1).is_empty());
        assert_eq!(chain3().chains(2), vec![vec![0, 1, 2]]);
        assert_eq!(p1().chains(1), vec![vec![0, 2], vec![1, 2]]);
        assert!(chain3().chains(3).is_empty());
    }

    #[test]
    fn minima() {
        let p = p1();
        assert_eq!(p.minimum(&p.up_set(0)), Some(0));
        assert_eq!(p.minimum(&[0, 1]), None);
        assert_eq!(p.minimum(&[0, 2]), Some(0));
    }

    #[test]
    fn monotone_checks() {
        let c = chain3();
        assert!(check_monotone(&c, &c, &[0, 1, 2]));
        assert!(check_monotone(&c, &c, &[1, 1, 1]));
        let two = Poset::from_named_relations(&["a", "b"], &[("a", "b")]).unwrap();
        let p = p1();
        assert!(!check_monotone(&two, &p, &[0, 1]));
    }

    #[test]
    fn rejects_cycles() {
        let r = Poset::from_named_relations(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert!(matches!(r, Err(WorkbenchError::InvalidPoset(_))));
    }

    #[test]
    fn cover_chains_and_height() {
        let c = chain3();
        assert_eq!(c.cover_chain(0, 2), Some(vec![0, 1, 2]));
        assert_eq!(c.height(), 2);
        assert_eq!(p1().join(&[0, 1]), Some(2));
        assert_eq!(p1().cover_relations(), vec![(0, 2), (1, 2)]);
    }
}
