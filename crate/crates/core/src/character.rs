//! Characters of the translation lattice as points of the dual torus, the
//! holonomy action on them, orbits, stabilizers and fixed points.

use crate::group::{CrystGroup, GroupElement};
use crate::linalg::{self, IntMat};
use crate::monomial::{Monomial, SymbolTable};
use crate::{rat, rat_int, Error, Rat, Result};
use std::collections::BTreeMap;

/// A character of `Z^n`, stored by its values on the standard lattice basis.
///
/// Coordinates are [`Monomial`]s over a shared symbol table; a character with
/// at least one symbolic coordinate is a stratum representative in the sense
/// that its symbols are generic points of the circle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Character {
    pub symbols: SymbolTable,
    pub coords: Vec<Monomial>,
}

impl Character {
    pub fn new(symbols: SymbolTable, coords: Vec<Monomial>) -> Self {
        assert!(coords.iter().all(|c| c.exps().len() == symbols.len()));
        Character { symbols, coords }
    }

    /// The trivial character.
    pub fn trivial(rank: usize) -> Self {
        Character {
            symbols: SymbolTable::empty(),
            coords: vec![Monomial::one(0); rank],
        }
    }

    /// Fully generic character with one fresh symbol per coordinate.
    pub fn generic(names: &[&str]) -> Self {
        let symbols = SymbolTable::new(names.iter().copied());
        let n = names.len();
        let coords = (0..n).map(|i| Monomial::symbol(i, n)).collect();
        Character { symbols, coords }
    }

    /// Numeric character from angles (value on `e_i` is `e(angle_i)`).
    pub fn from_angles(angles: Vec<Rat>) -> Self {
        Character {
            symbols: SymbolTable::empty(),
            coords: angles.into_iter().map(|a| Monomial::from_angle(a, 0)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_numeric(&self) -> bool {
        self.coords.iter().all(Monomial::is_numeric)
    }

    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(Monomial::is_one)
    }

    /// Value on a lattice vector: the product of coordinate powers.
    pub fn eval_lattice(&self, m: &[i64]) -> Monomial {
        assert_eq!(m.len(), self.rank());
        let mut out = Monomial::one(self.symbols.len());
        for (c, &e) in self.coords.iter().zip(m) {
            out = out.mul(&c.pow(e));
        }
        out
    }
}

/// Action of a holonomy label on a character: `chi'(m) = chi(A_h m)`, i.e.
/// the new `j`-th coordinate is the product of old coordinates raised to the
/// entries of column `j` of `A_h`.
pub fn act(group: &CrystGroup, h: usize, chi: &Character) -> Result<Character> {
    if chi.rank() != group.rank {
        return Err(Error::RankMismatch { expected: group.rank, got: chi.rank() });
    }
    let a = group.lin(h);
    let coords = (0..group.rank)
        .map(|j| {
            let mut out = Monomial::one(chi.symbols.len());
            for i in 0..group.rank {
                out = out.mul(&chi.coords[i].pow(a[(i, j)]));
            }
            out
        })
        .collect();
    Ok(Character { symbols: chi.symbols.clone(), coords })
}

/// Orbit of a character: distinct images, each paired with a holonomy label
/// mapping `chi` to it. The first entry is `(identity, chi)`; the rest follow
/// the config order of labels.
pub fn orbit(group: &CrystGroup, chi: &Character) -> Result<Vec<(usize, Character)>> {
    let e = group.holonomy.identity();
    let mut out = vec![(e, chi.clone())];
    for h in 0..group.holonomy.order() {
        if h == e {
            continue;
        }
        let image = act(group, h, chi)?;
        if !out.iter().any(|(_, c)| c == &image) {
            out.push((h, image));
        }
    }
    Ok(out)
}

/// The stabilizer of a character, presented as the fixing subgroup of the
/// holonomy together with one chosen lift per label.
///
/// The lift of a label is the named generator with that holonomy when one
/// exists (first in name order), else the canonical lift `(a_h, h)`; the
/// identity label always lifts to the identity element. Together with the
/// lattice these lifts generate the stabilizer subgroup of the full group.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerData {
    pub labels: Vec<usize>,
    pub section: BTreeMap<usize, GroupElement>,
}

impl StabilizerData {
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn contains_element(&self, g: &GroupElement) -> bool {
        self.labels.contains(&g.h)
    }

    /// Human-readable description: lattice plus the non-identity lifts.
    pub fn describe(&self, group: &CrystGroup) -> String {
        let e = group.holonomy.identity();
        let lifts: Vec<String> = self
            .labels
            .iter()
            .filter(|&&h| h != e)
            .map(|h| {
                let g = &self.section[h];
                group
                    .generators()
                    .iter()
                    .find(|(_, cand)| cand == &g)
                    .map(|(name, _)| name.clone())
                    .unwrap_or_else(|| group.render_element(g))
            })
            .collect();
        if lifts.is_empty() {
            "the lattice N".to_string()
        } else {
            format!("the lattice N and {}", lifts.join(", "))
        }
    }
}

/// Preferred lift of a holonomy label, as used by [`stabilizer`].
pub fn preferred_lift(group: &CrystGroup, h: usize) -> GroupElement {
    if h == group.holonomy.identity() {
        return group.identity();
    }
    group
        .generators()
        .iter()
        .find(|(_, g)| g.h == h)
        .map(|(_, g)| g.clone())
        .unwrap_or_else(|| group.canonical_lift(h))
}

pub fn stabilizer(group: &CrystGroup, chi: &Character) -> Result<StabilizerData> {
    let mut labels = Vec::new();
    for h in 0..group.holonomy.order() {
        if act(group, h, chi)? == *chi {
            labels.push(h);
        }
    }
    let section =
        labels.iter().map(|&h| (h, preferred_lift(group, h))).collect::<BTreeMap<_, _>>();
    Ok(StabilizerData { labels, section })
}

/// All numeric characters fixed by every holonomy element, computed by
/// solving `(A_h^T - I) theta = 0 (mod 1)` simultaneously via Smith normal
/// form. Errors with [`Error::InfiniteFixedLocus`] when the common fixed set
/// is a positive-dimensional subtorus.
pub fn fixed_points(group: &CrystGroup) -> Result<Vec<Character>> {
    let n = group.rank;
    let e = group.holonomy.identity();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for h in 0..group.holonomy.order() {
        if h == e {
            continue;
        }
        let m = group.lin(h).transpose();
        for i in 0..n {
            let mut row: Vec<i64> = m.row(i).to_vec();
            row[i] -= 1;
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Err(Error::InfiniteFixedLocus(format!(
            "trivial holonomy fixes the whole {n}-torus"
        )));
    }
    let mat = IntMat::from_rows(&rows);
    let snf = linalg::smith_normal_form(&mat);
    let rank = snf.rank();
    if rank < n {
        return Err(Error::InfiniteFixedLocus(format!(
            "fixed locus contains a subtorus of dimension {}",
            n - rank
        )));
    }
    // theta = V phi with d_i phi_i integral: phi_i runs over j/d_i.
    let divisors: Vec<i64> = (0..n).map(|i| snf.d[(i, i)]).collect();
    let mut out = std::collections::BTreeSet::new();
    let mut idx = vec![0i64; n];
    loop {
        let phi: Vec<Rat> =
            idx.iter().zip(&divisors).map(|(&j, &d)| rat(j, d)).collect();
        let theta: Vec<Rat> = (0..n)
            .map(|r| {
                let mut s = rat_int(0);
                for (c, p) in phi.iter().enumerate() {
                    s += rat_int(snf.v[(r, c)]) * p;
                }
                let f = s.floor();
                s - f
            })
            .collect();
        out.insert(theta);
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out.into_iter().map(Character::from_angles).collect());
            }
            idx[i] += 1;
            if idx[i] < divisors[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
