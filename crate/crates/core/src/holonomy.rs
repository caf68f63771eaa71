//! The finite holonomy quotient `H = G / Z^n`, given by an explicit
//! multiplication table.

use crate::{Error, Result};
use std::collections::BTreeMap;

/// A finite group presented by labels and a total multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolonomyGroup {
    labels: Vec<String>,
    /// `mult[i][j]` is the index of `labels[i] * labels[j]`.
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    index: BTreeMap<String, usize>,
}

impl HolonomyGroup {
    /// Validate a multiplication table and build the group.
    pub fn new(labels: Vec<String>, mult: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::BadTable("empty label list".into()));
        }
        if identity >= n {
            return Err(Error::BadTable("identity label out of range".into()));
        }
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::BadTable(format!("duplicate label '{l}'")));
            }
        }
        if mult.len() != n || mult.iter().any(|r| r.len() != n) {
            return Err(Error::BadTable("multiplication table is not square".into()));
        }
        if mult.iter().flatten().any(|&k| k >= n) {
            return Err(Error::BadTable("table entry out of range".into()));
        }
        for i in 0..n {
            if mult[identity][i] != i || mult[i][identity] != i {
                return Err(Error::BadTable(format!(
                    "'{}' is not a two-sided identity at '{}'",
                    labels[identity], labels[i]
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(Error::BadTable(format!(
                            "associativity fails at ('{}','{}','{}')",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mult[a][b] == identity && mult[b][a] == identity) {
                Some(b) => inverse[a] = b,
                None => {
                    return Err(Error::BadTable(format!(
                        "'{}' has no two-sided inverse",
                        labels[a]
                    )))
                }
            }
        }
        Ok(HolonomyGroup { labels, mult, identity, inverse, index })
    }

    /// The trivial group with a single label `e`.
    pub fn trivial() -> Self {
        Self::new(vec!["e".into()], vec![vec![0]], 0).expect("trivial table")
    }

    /// Cyclic group of order `n` with labels `"0", "1", ...`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let labels = (0..n).map(|k| k.to_string()).collect();
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(labels, mult, 0).expect("cyclic table")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn lookup(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut out = self.identity;
        for _ in 0..k.unsigned_abs() {
            out = self.mul(out, base);
        }
        out
    }

    /// Order of a single element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.subset_is_abelian(&(0..self.order()).collect::<Vec<_>>())
    }

    pub fn subset_is_abelian(&self, subset: &[usize]) -> bool {
        subset
            .iter()
            .all(|&a| subset.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A cyclic group contains an element whose order is the group order.
    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// First label (in table order) generating the whole group, if any.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order()).find(|&a| self.element_order(a) == self.order())
    }

    /// Check that a label subset is closed under product and inverse.
    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let set: std::collections::BTreeSet<usize> = subset.iter().copied().collect();
        set.contains(&self.identity)
            && set.iter().all(|&a| set.contains(&self.inv(a)))
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Decompose an abelian subgroup as an internal direct product of cyclic
    /// factors. Returns generator labels `g_1..g_r` such that every element
    /// of the subgroup is uniquely a product `g_1^{e_1} ... g_r^{e_r}` with
    /// `0 <= e_i < order(g_i)`.
    ///
    /// The subgroup must be abelian; the search backtracks over candidate
    /// generators ordered by decreasing element order (then table order),
    /// which makes the result deterministic.
    pub fn abelian_basis(&self, subset: &[usize]) -> Result<Vec<usize>> {
        if !self.is_subgroup(subset) {
            return Err(Error::BadTable("subset is not a subgroup".into()));
        }
        if !self.subset_is_abelian(subset) {
            let (a, b) = subset
                .iter()
                .flat_map(|&a| subset.iter().map(move |&b| (a, b)))
                .find(|&(a, b)| self.mul(a, b) != self.mul(b, a))
                .expect("nonabelian witness");
            return Err(Error::NonabelianLittleGroup(format!(
                "'{}' and '{}' do not commute",
                self.labels[a], self.labels[b]
            )));
        }
        let mut candidates: Vec<usize> =
            subset.iter().copied().filter(|&a| a != self.identity).collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let target: std::collections::BTreeSet<usize> = subset.iter().copied().collect();

        fn span(
            h: &HolonomyGroup,
            gens: &[usize],
        ) -> Option<std::collections::BTreeSet<usize>> {
            let orders: Vec<usize> = gens.iter().map(|&g| h.element_order(g)).collect();
            let total: usize = orders.iter().product();
            let mut seen = std::collections::BTreeSet::new();
            let mut exps = vec![0usize; gens.len()];
            loop {
                let mut x = h.identity;
                for (g, &e) in gens.iter().zip(&exps) {
                    x = h.mul(x, h.pow(*g, e as i64));
                }
                if !seen.insert(x) {
                    return None; // collision: not independent
                }
                let mut i = 0;
                loop {
                    if i == gens.len() {
                        debug_assert_eq!(seen.len(), total);
                        return Some(seen);
                    }
                    exps[i] += 1;
                    if exps[i] < orders[i] {
                        break;
                    }
                    exps[i] = 0;
                    i += 1;
                }
            }
        }

        fn search(
            h: &HolonomyGroup,
            candidates: &[usize],
            target: &std::collections::BTreeSet<usize>,
            current: &mut Vec<usize>,
        ) -> bool {
            match span(h, current) {
                None => false,
                Some(s) if &s == target => true,
                Some(s) => {
                    for &c in candidates {
                        if s.contains(&c) {
                            continue;
                        }
                        current.push(c);
                        if search(h, candidates, target, current) {
                            return true;
                        }
                        current.pop();
                    }
                    false
                }
            }
        }

        let mut basis = Vec::new();
        if target.len() == 1 {
            return Ok(basis);
        }
        if search(self, &candidates, &target, &mut basis) {
            Ok(basis)
        } else {
            Err(Error::BadTable("no cyclic decomposition found (internal)".into()))
        }
    }

    /// Exponents of `x` with respect to an abelian basis, by enumeration.
    pub fn exponents_in_basis(&self, basis: &[usize], x: usize) -> Option<Vec<usize>> {
        let orders: Vec<usize> = basis.iter().map(|&g| self.element_order(g)).collect();
        let mut exps = vec![0usize; basis.len()];
        loop {
            let mut y = self.identity;
            for (g, &e) in basis.iter().zip(&exps) {
                y = self.mul(y, self.pow(*g, e as i64));
            }
            if y == x {
                return Some(exps);
            }
            let mut i = 0;
            loop {
                if i == basis.len() {
                    return None;
                }
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }
}
