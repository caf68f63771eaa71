//! Extension of lattice characters to their stabilizers and induced
//! representations of the full group as explicit monomial matrices.

use crate::character::{act, orbit, preferred_lift, Character, StabilizerData};
use crate::group::{CrystGroup, GroupElement, Word};
use crate::monomial::{Monomial, SymbolTable};
use crate::{rat_int, Error, Result};
use ndarray::Array2;
use num_complex::Complex64;
use std::collections::BTreeMap;

pub type CMat = Array2<Complex64>;

/// Square matrix with monomial-or-zero entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonMat {
    pub dim: usize,
    entries: Vec<Option<Monomial>>,
}

impl MonMat {
    pub fn identity(dim: usize, symbols: usize) -> Self {
        let mut m = MonMat { dim, entries: vec![None; dim * dim] };
        for i in 0..dim {
            m.set(i, i, Monomial::one(symbols));
        }
        m
    }

    pub fn empty(dim: usize) -> Self {
        MonMat { dim, entries: vec![None; dim * dim] }
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&Monomial> {
        self.entries[i * self.dim + j].as_ref()
    }

    pub fn set(&mut self, i: usize, j: usize, m: Monomial) {
        self.entries[i * self.dim + j] = Some(m);
    }

    /// Matrix product. The matrices occurring here are monomial (one nonzero
    /// entry per row and column), so no entry of a product is ever a genuine
    /// sum; a collision signals an internal bookkeeping bug.
    pub fn mul(&self, other: &MonMat) -> MonMat {
        assert_eq!(self.dim, other.dim);
        let mut out = MonMat::empty(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc: Option<Monomial> = None;
                for k in 0..self.dim {
                    if let (Some(a), Some(b)) = (self.entry(i, k), other.entry(k, j)) {
                        let prod = a.mul(b);
                        assert!(
                            acc.is_none(),
                            "monomial matrix product produced a sum at ({i},{j})"
                        );
                        acc = Some(prod);
                    }
                }
                out.entries[i * self.dim + j] = acc;
            }
        }
        out
    }

    /// Conjugate transpose; inverts a monomial matrix with unit-circle
    /// entries.
    pub fn conj_transpose(&self) -> MonMat {
        let mut out = MonMat::empty(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                if let Some(m) = self.entry(i, j) {
                    out.set(j, i, m.conj());
                }
            }
        }
        out
    }

    /// Exactly one nonzero entry per row and per column.
    pub fn is_monomial(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).filter(|&j| self.entry(i, j).is_some()).count() == 1)
            && (0..self.dim)
                .all(|j| (0..self.dim).filter(|&i| self.entry(i, j).is_some()).count() == 1)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim)
            .all(|i| (0..self.dim).all(|j| i == j || self.entry(i, j).is_none()))
    }

    /// Substitute every symbol by 1, keeping the root-of-unity parts.
    pub fn at_ones(&self) -> MonMat {
        MonMat {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|e| e.as_ref().map(Monomial::numeric_part))
                .collect(),
        }
    }

    pub fn eval(&self, values: &[Complex64]) -> CMat {
        Array2::from_shape_fn((self.dim, self.dim), |(i, j)| {
            self.entry(i, j).map_or(Complex64::new(0.0, 0.0), |m| m.eval(values))
        })
    }
}

/// A character of the stabilizer subgroup extending a lattice character.
///
/// The base character is stored rewritten over the (possibly extended)
/// symbol table, so that base values and section values multiply within one
/// table; `substitutions` records how the original stratum symbols read in
/// the new table (for instance `u = a^2`).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionCharacter {
    pub base: Character,
    pub section: BTreeMap<usize, GroupElement>,
    pub values: BTreeMap<usize, Monomial>,
    pub symbols: SymbolTable,
    pub substitutions: Vec<(String, Monomial)>,
}

impl ExtensionCharacter {
    pub fn labels(&self) -> Vec<usize> {
        self.section.keys().copied().collect()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.section.contains_key(&g.h)
    }

    /// Value on an arbitrary element of the stabilizer, via the factorization
    /// `(v, h) = (v - s_h, e) * s(h)`.
    pub fn value_on(&self, group: &CrystGroup, g: &GroupElement) -> Result<Monomial> {
        let s = self.section.get(&g.h).ok_or_else(|| {
            Error::ElementEscapes(format!(
                "element {} lies outside the stabilizer",
                group.render_element(g)
            ))
        })?;
        let l = group.mul(g, &group.inv(s)?)?;
        let coords = group.lattice_coords(&l);
        Ok(self.base.eval_lattice(&coords).mul(&self.values[&g.h]))
    }

    /// Exhaustive multiplicativity check over all label pairs.
    pub fn check_multiplicative(&self, group: &CrystGroup) -> Result<()> {
        for (&h1, s1) in &self.section {
            for (&h2, s2) in &self.section {
                let h12 = group.holonomy.mul(h1, h2);
                let prod = group.mul(s1, s2)?;
                let defect = group.mul(&prod, &group.inv(&self.section[&h12])?)?;
                let lhs = self.values[&h1].mul(&self.values[&h2]);
                let rhs = self.values[&h12]
                    .mul(&self.base.eval_lattice(&group.lattice_coords(&defect)));
                if lhs != rhs {
                    return Err(Error::InconsistentExtension(format!(
                        "relation at pair ('{}', '{}') has no solution",
                        group.holonomy.label(h1),
                        group.holonomy.label(h2)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Restriction to the lattice: evaluate the base on each basis vector.
    pub fn restricted_base(&self) -> &Character {
        &self.base
    }

    /// Substitute all symbols by 1.
    fn at_ones(&self) -> ExtensionCharacter {
        ExtensionCharacter {
            base: Character::new(
                SymbolTable::empty(),
                self.base.coords.iter().map(Monomial::numeric_part).collect(),
            ),
            section: self.section.clone(),
            values: self
                .values
                .iter()
                .map(|(k, v)| (*k, v.numeric_part()))
                .collect(),
            symbols: SymbolTable::empty(),
            substitutions: Vec::new(),
        }
    }
}

fn fresh_symbol_name(table: &SymbolTable, pivot_name: &str) -> String {
    let preferred = match pivot_name {
        "u" => Some("a"),
        "v" => Some("b"),
        "w" => Some("c"),
        _ => None,
    };
    if let Some(p) = preferred {
        if !table.contains(p) {
            return p.to_string();
        }
    }
    for c in 'a'..='z' {
        let cand = c.to_string();
        if !table.contains(&cand) {
            return cand;
        }
    }
    (0..).map(|i| format!("r{i}")).find(|c| !table.contains(c)).unwrap()
}

/// All extensions of `chi` to the subgroup described by `stab`.
///
/// The extension problem is solved per independent generator of the abelian
/// label group: the value on a generator of order `k` is a `k`-th root of
/// the base value of the lattice part of `s(h)^k`. Numeric targets
/// contribute all `k` roots of unity; symbolic targets introduce one fresh
/// symbol and rewrite the symbol table through the substitution. Every
/// returned extension is verified multiplicative on all label pairs.
pub fn extend_character(
    group: &CrystGroup,
    chi: &Character,
    stab: &StabilizerData,
) -> Result<Vec<ExtensionCharacter>> {
    let e = group.holonomy.identity();
    if !group.holonomy.is_subgroup(&stab.labels) {
        return Err(Error::BadSection("labels do not form a subgroup".into()));
    }
    for &h in &stab.labels {
        if act(group, h, chi)? != *chi {
            return Err(Error::InconsistentExtension(format!(
                "label '{}' does not fix the character",
                group.holonomy.label(h)
            )));
        }
        let s = stab.section.get(&h).ok_or_else(|| {
            Error::BadSection(format!("no lift for label '{}'", group.holonomy.label(h)))
        })?;
        if s.h != h || !group.contains(s) {
            return Err(Error::BadSection(format!(
                "lift of '{}' has the wrong holonomy or lies outside the group",
                group.holonomy.label(h)
            )));
        }
    }
    if stab.section[&e] != group.identity() {
        return Err(Error::BadSection("the identity label must lift to the identity".into()));
    }
    let basis = group.holonomy.abelian_basis(&stab.labels)?;

    let mut table = chi.symbols.clone();
    let mut coords = chi.coords.clone();
    let mut subs: Vec<(String, Monomial)> = Vec::new();
    // one list of candidate values per basis generator
    let mut branch_sets: Vec<Vec<Monomial>> = Vec::new();

    for &hgen in &basis {
        let k = group.holonomy.element_order(hgen) as i64;
        let p = group.pow(&stab.section[&hgen], k)?;
        let target = {
            let tmp = Character::new(table.clone(), coords.clone());
            tmp.eval_lattice(&group.lattice_coords(&p))
        };
        if target.is_numeric() {
            let branches = (0..k)
                .map(|j| {
                    Monomial::from_angle(
                        (target.angle() + rat_int(j)) / rat_int(k),
                        table.len(),
                    )
                })
                .collect();
            branch_sets.push(branches);
        } else if let Some(pivot) = target.exps().iter().position(|e| e.abs() == 1) {
            let eps = target.exps()[pivot];
            let fresh = fresh_symbol_name(&table, table.name(pivot));
            let new_table = table.renamed(pivot, &fresh);
            // solve fresh^k = target for the pivot symbol
            let mut rest_exps = target.exps().to_vec();
            rest_exps[pivot] = 0;
            let rest = Monomial::with_parts(target.angle().clone(), rest_exps);
            let mut power = vec![0i64; table.len()];
            power[pivot] = k;
            let mut repl = rest.inv().mul(&Monomial::with_parts(rat_int(0), power));
            if eps == -1 {
                repl = repl.inv();
            }
            coords = coords.iter().map(|c| c.substitute(pivot, &repl)).collect();
            for set in branch_sets.iter_mut() {
                for m in set.iter_mut() {
                    *m = m.substitute(pivot, &repl);
                }
            }
            subs = subs
                .into_iter()
                .map(|(name, m)| (name, m.substitute(pivot, &repl)))
                .collect();
            subs.push((table.name(pivot).to_string(), repl));
            table = new_table;
            branch_sets.push(vec![Monomial::symbol(pivot, table.len())]);
        } else if target.exps().iter().all(|e| e % k == 0) {
            let branches = (0..k)
                .map(|j| {
                    Monomial::with_parts(
                        (target.angle() + rat_int(j)) / rat_int(k),
                        target.exps().iter().map(|e| e / k).collect(),
                    )
                })
                .collect();
            branch_sets.push(branches);
        } else {
            return Err(Error::InconsistentExtension(format!(
                "cannot extract a {k}-th root of the value on '{}'",
                group.holonomy.label(hgen)
            )));
        }
    }

    let base = Character::new(table.clone(), coords);
    let mut family = Vec::new();
    let mut combo = vec![0usize; branch_sets.len()];
    loop {
        let chosen: Vec<&Monomial> =
            combo.iter().zip(&branch_sets).map(|(&i, set)| &set[i]).collect();
        let mut values = BTreeMap::new();
        for &h in &stab.labels {
            let exps = group
                .holonomy
                .exponents_in_basis(&basis, h)
                .expect("basis spans the subgroup");
            let mut w = group.identity();
            for (&hgen, &e) in basis.iter().zip(&exps) {
                w = group.mul(&w, &group.pow(&stab.section[&hgen], e as i64)?)?;
            }
            let l = group.mul(&stab.section[&h], &group.inv(&w)?)?;
            let mut val = base.eval_lattice(&group.lattice_coords(&l));
            for (t, &e) in chosen.iter().zip(&exps) {
                val = val.mul(&t.pow(e as i64));
            }
            values.insert(h, val);
        }
        let ext = ExtensionCharacter {
            base: base.clone(),
            section: stab.section.clone(),
            values,
            symbols: table.clone(),
            substitutions: subs.clone(),
        };
        ext.check_multiplicative(group)?;
        family.push(ext);
        // advance the branch combination, last generator fastest
        let mut i = branch_sets.len();
        loop {
            if i == 0 {
                return Ok(family);
            }
            i -= 1;
            combo[i] += 1;
            if combo[i] < branch_sets[i].len() {
                break;
            }
            combo[i] = 0;
        }
    }
}

/// A finite-dimensional representation given by monomial matrices on the
/// named generators, together with its inducing data.
#[derive(Debug, Clone, PartialEq)]
pub struct Rep {
    pub dim: usize,
    pub matrices: BTreeMap<String, MonMat>,
    pub transversal: Vec<GroupElement>,
    pub sigma: ExtensionCharacter,
    pub symbols: SymbolTable,
}

fn validate_transversal(
    group: &CrystGroup,
    sigma: &ExtensionCharacter,
    transversal: &[GroupElement],
) -> Result<()> {
    if transversal.is_empty() || transversal[0] != group.identity() {
        return Err(Error::BadTransversal(
            "the first representative must be the identity".into(),
        ));
    }
    for g in transversal {
        if !group.contains(g) {
            return Err(Error::BadTransversal(format!(
                "representative {} is not a group element",
                group.render_element(g)
            )));
        }
    }
    for i in 0..transversal.len() {
        for j in i + 1..transversal.len() {
            let q = group.mul(&group.inv(&transversal[i])?, &transversal[j])?;
            if sigma.contains(&q) {
                return Err(Error::BadTransversal(format!(
                    "representatives {i} and {j} lie in the same coset"
                )));
            }
        }
    }
    let expected = group.holonomy.order() / sigma.section.len();
    if transversal.len() != expected {
        return Err(Error::BadTransversal(format!(
            "expected {expected} coset representatives, got {}",
            transversal.len()
        )));
    }
    Ok(())
}

/// Matrix of an arbitrary group element in the induced representation:
/// `M(g)_{i,j} = sigma(g_i^{-1} g g_j)` when that element lies in the
/// stabilizer, zero otherwise.
pub fn induced_matrix(
    group: &CrystGroup,
    sigma: &ExtensionCharacter,
    transversal: &[GroupElement],
    g: &GroupElement,
) -> Result<MonMat> {
    let dim = transversal.len();
    let mut out = MonMat::empty(dim);
    let mut row_used = vec![false; dim];
    for j in 0..dim {
        let gj = group.mul(g, &transversal[j])?;
        let mut hits = 0;
        for i in 0..dim {
            let p = group.mul(&group.inv(&transversal[i])?, &gj)?;
            if sigma.contains(&p) {
                out.set(i, j, sigma.value_on(group, &p)?);
                hits += 1;
                if row_used[i] {
                    return Err(Error::ElementEscapes(format!(
                        "row {i} used twice for element {}",
                        group.render_element(g)
                    )));
                }
                row_used[i] = true;
            }
        }
        if hits != 1 {
            return Err(Error::ElementEscapes(format!(
                "column {j} has {hits} stabilizer hits for element {}",
                group.render_element(g)
            )));
        }
    }
    Ok(out)
}

/// Construct the induced representation for a validated transversal.
pub fn induce(
    group: &CrystGroup,
    sigma: &ExtensionCharacter,
    transversal: &[GroupElement],
) -> Result<Rep> {
    validate_transversal(group, sigma, transversal)?;
    let mut matrices = BTreeMap::new();
    for (name, g) in group.generators() {
        matrices.insert(name.clone(), induced_matrix(group, sigma, transversal, g)?);
    }
    Ok(Rep {
        dim: transversal.len(),
        matrices,
        transversal: transversal.to_vec(),
        sigma: sigma.clone(),
        symbols: sigma.symbols.clone(),
    })
}

/// Default transversal: the preferred lifts of the orbit labels.
pub fn orbit_transversal(group: &CrystGroup, chi: &Character) -> Result<Vec<GroupElement>> {
    Ok(orbit(group, chi)?
        .into_iter()
        .map(|(h, _)| preferred_lift(group, h))
        .collect())
}

/// Full pipeline for a stratum character: stabilizer, all extensions, one
/// induced representation per extension.
pub fn induce_character(
    group: &CrystGroup,
    chi: &Character,
    transversal: Option<&[GroupElement]>,
) -> Result<Vec<Rep>> {
    let stab = crate::character::stabilizer(group, chi)?;
    let sigmas = extend_character(group, chi, &stab)?;
    let default = match transversal {
        Some(_) => None,
        None => Some(orbit_transversal(group, chi)?),
    };
    let tv = transversal.unwrap_or_else(|| default.as_deref().unwrap());
    sigmas.iter().map(|s| induce(group, s, tv)).collect()
}

impl Rep {
    /// Matrix of an arbitrary group element, computed from the inducing data.
    pub fn matrix_of_element(
        &self,
        group: &CrystGroup,
        g: &GroupElement,
    ) -> Result<MonMat> {
        induced_matrix(group, &self.sigma, &self.transversal, g)
    }

    /// Limit of the family at the trivial character: substitute every symbol
    /// by 1. The result is an exact representation whose entries are roots
    /// of unity.
    pub fn at_ones(&self) -> Rep {
        Rep {
            dim: self.dim,
            matrices: self
                .matrices
                .iter()
                .map(|(k, m)| (k.clone(), m.at_ones()))
                .collect(),
            transversal: self.transversal.clone(),
            sigma: self.sigma.at_ones(),
            symbols: SymbolTable::empty(),
        }
    }
}

/// Matrix of a word, as a product of generator-power matrices.
pub fn rep_of_word(group: &CrystGroup, rep: &Rep, w: &Word) -> Result<MonMat> {
    let mut out = MonMat::identity(rep.dim, rep.symbols.len());
    for (name, exp) in w {
        let m = rep
            .matrices
            .get(name)
            .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
        let base = if *exp < 0 { m.conj_transpose() } else { m.clone() };
        for _ in 0..exp.unsigned_abs() {
            out = out.mul(&base);
        }
    }
    let _ = group;
    Ok(out)
}

/// Result of checking a list of named relations against a representation.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub items: Vec<(String, bool)>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|(_, ok)| *ok)
    }
}

/// Check `M(w1) = M(w2)` exactly for each relation.
pub fn verify_rep(
    group: &CrystGroup,
    rep: &Rep,
    relations: &[(Word, Word, String)],
) -> Result<VerifyReport> {
    let mut items = Vec::new();
    for (lhs, rhs, name) in relations {
        let a = rep_of_word(group, rep, lhs)?;
        let b = rep_of_word(group, rep, rhs)?;
        items.push((name.clone(), a == b));
    }
    Ok(VerifyReport { items })
}

/// Diagonal characters of the restriction to the lattice, with
/// multiplicities. Asserts the multiset is the orbit of the inducing
/// character with uniform multiplicity.
pub fn restrict_to_lattice(
    group: &CrystGroup,
    rep: &Rep,
) -> Result<Vec<(Character, usize)>> {
    let mut diag_mats = Vec::new();
    for i in 0..group.rank {
        let el = group.lattice_basis_element(i);
        let m = rep.matrix_of_element(group, &el)?;
        if !m.is_diagonal() {
            return Err(Error::NotDiagonalOnLattice(format!(
                "lattice basis element {i} acts non-diagonally in this basis"
            )));
        }
        diag_mats.push(m);
    }
    let mut counts: BTreeMap<Character, usize> = BTreeMap::new();
    for j in 0..rep.dim {
        let coords: Vec<Monomial> = diag_mats
            .iter()
            .map(|m| m.entry(j, j).expect("diagonal entry").clone())
            .collect();
        *counts
            .entry(Character::new(rep.symbols.clone(), coords))
            .or_insert(0) += 1;
    }
    let orb = orbit(group, &rep.sigma.base)?;
    let mult = rep.dim / orb.len();
    for (_, chi) in &orb {
        assert_eq!(
            counts.get(chi),
            Some(&mult),
            "lattice restriction does not match the inducing orbit"
        );
    }
    assert_eq!(counts.len(), orb.len(), "extra characters in the restriction");
    Ok(counts.into_iter().collect())
}

/// A representation evaluated at explicit unit-circle symbol values:
/// complex matrices for the named generators, the lattice basis and the
/// canonical lifts of the holonomy labels.
#[derive(Debug, Clone)]
pub struct NumericRep {
    pub dim: usize,
    pub generators: BTreeMap<String, CMat>,
    pub lattice: Vec<CMat>,
    pub lifts: Vec<CMat>,
}

impl NumericRep {
    /// Largest deviation of `M M*` from the identity over all stored
    /// matrices.
    pub fn unitarity_defect(&self) -> f64 {
        let defect = |m: &CMat| {
            let n = m.nrows();
            let mh = m.t().mapv(|z| z.conj());
            let prod = m.dot(&mh);
            let mut worst: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((prod[(i, j)] - Complex64::new(expect, 0.0)).norm());
                }
            }
            worst
        };
        self.generators
            .values()
            .chain(self.lattice.iter())
            .chain(self.lifts.iter())
            .map(|m| defect(m))
            .fold(0.0, f64::max)
    }
}

/// Evaluate a representation at an assignment of unit-circle values to its
/// symbols.
pub fn evaluate(
    group: &CrystGroup,
    rep: &Rep,
    assignment: &BTreeMap<String, Complex64>,
) -> Result<NumericRep> {
    let mut values = Vec::with_capacity(rep.symbols.len());
    for name in rep.symbols.names() {
        let z = assignment
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingSymbol(name.clone()))?;
        if (z.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::OffCircleValue { symbol: name.clone(), modulus: z.norm() });
        }
        values.push(z);
    }
    let generators = rep
        .matrices
        .iter()
        .map(|(name, m)| (name.clone(), m.eval(&values)))
        .collect();
    let mut lattice = Vec::new();
    for i in 0..group.rank {
        let el = group.lattice_basis_element(i);
        lattice.push(rep.matrix_of_element(group, &el)?.eval(&values));
    }
    let mut lifts = Vec::new();
    for h in 0..group.holonomy.order() {
        let el = group.canonical_lift(h);
        lifts.push(rep.matrix_of_element(group, &el)?.eval(&values));
    }
    Ok(NumericRep { dim: rep.dim, generators, lattice, lifts })
}

/// Assignment sending every symbol of a representation to 1.
pub fn ones_assignment(rep: &Rep) -> BTreeMap<String, Complex64> {
    rep.symbols
        .names()
        .iter()
        .map(|n| (n.clone(), Complex64::new(1.0, 0.0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::character::stabilizer;
    use crate::group::word;
    use crate::monomial::Monomial;
    use crate::text::parse_entry;
    use crate::rat;
    use rand::{Rng, SeedableRng};

    fn expect_matrix(table: &SymbolTable, rows: &[&[&str]]) -> MonMat {
        let dim = rows.len();
        let mut m = MonMat::empty(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim);
            for (j, s) in row.iter().enumerate() {
                if let Some(mono) = parse_entry(s, table).unwrap() {
                    m.set(i, j, mono);
                }
            }
        }
        m
    }

    fn hw_stratum_rep(name: &str) -> (CrystGroup, Rep) {
        let g = builtin::hantzsche_wendt();
        let strata = builtin::hantzsche_wendt_strata(&g);
        let s = strata.into_iter().find(|s| s.name == name).unwrap();
        let reps =
            induce_character(&g, &s.character, s.transversal.as_deref()).unwrap();
        assert_eq!(reps.len(), 1, "one symbolic family member");
        (g, reps.into_iter().next().unwrap())
    }

    #[test]
    fn first_coordinate_stratum_extension_introduces_a_square_root() {
        let g = builtin::hantzsche_wendt();
        let strata = builtin::hantzsche_wendt_strata(&g);
        let chi = &strata[0].character;
        let stab = stabilizer(&g, chi).unwrap();
        let family = extend_character(&g, chi, &stab).unwrap();
        assert_eq!(family.len(), 1);
        let ext = &family[0];
        assert_eq!(ext.symbols.names(), ["a"]);
        assert_eq!(ext.substitutions.len(), 1);
        assert_eq!(ext.substitutions[0].0, "u");
        assert_eq!(ext.substitutions[0].1, Monomial::symbol(0, 1).pow(2));
        // sigma(x) = a
        let hx = g.holonomy.lookup("x").unwrap();
        assert_eq!(ext.values[&hx], Monomial::symbol(0, 1));
        // sigma(y^2) = sigma(z^2) = 1
        for name in ["y", "z"] {
            let sq = g.eval_word(&word(&[(name, 2)])).unwrap();
            assert!(ext.value_on(&g, &sq).unwrap().is_one(), "sigma({name}^2)");
        }
    }

    #[test]
    fn first_coordinate_stratum_matrices() {
        let (_, rep) = hw_stratum_rep("(u,1,1)");
        let t = &rep.symbols;
        assert_eq!(rep.matrices["x"], expect_matrix(t, &[&["a", "0"], &["0", "conj(a)"]]));
        assert_eq!(rep.matrices["y"], expect_matrix(t, &[&["0", "1"], &["1", "0"]]));
        assert_eq!(rep.matrices["z"], expect_matrix(t, &[&["0", "a"], &["conj(a)", "0"]]));
    }

    #[test]
    fn second_coordinate_stratum_matrices() {
        let (_, rep) = hw_stratum_rep("(1,v,1)");
        let t = &rep.symbols;
        assert_eq!(t.names(), ["b"]);
        assert_eq!(rep.matrices["x"], expect_matrix(t, &[&["0", "1"], &["1", "0"]]));
        assert_eq!(rep.matrices["y"], expect_matrix(t, &[&["b", "0"], &["0", "conj(b)"]]));
        assert_eq!(rep.matrices["z"], expect_matrix(t, &[&["0", "conj(b)"], &["b", "0"]]));
    }

    #[test]
    fn third_coordinate_stratum_matrices() {
        let (_, rep) = hw_stratum_rep("(1,1,w)");
        let t = &rep.symbols;
        assert_eq!(t.names(), ["c"]);
        assert_eq!(rep.matrices["x"], expect_matrix(t, &[&["0", "conj(c)"], &["c", "0"]]));
        assert_eq!(rep.matrices["y"], expect_matrix(t, &[&["0", "1"], &["1", "0"]]));
        assert_eq!(rep.matrices["z"], expect_matrix(t, &[&["c", "0"], &["0", "conj(c)"]]));
    }

    #[test]
    fn generic_stratum_matrices_and_squares() {
        let (g, rep) = hw_stratum_rep("(u,v,w)");
        let t = &rep.symbols;
        assert_eq!(t.names(), ["u", "v", "w"]);
        assert_eq!(
            rep.matrices["x"],
            expect_matrix(
                t,
                &[
                    &["0", "u", "0", "0"],
                    &["1", "0", "0", "0"],
                    &["0", "0", "0", "conj(u)*w"],
                    &["0", "0", "conj(w)", "0"],
                ]
            )
        );
        assert_eq!(
            rep.matrices["y"],
            expect_matrix(
                t,
                &[
                    &["0", "0", "v", "0"],
                    &["0", "0", "0", "conj(u)"],
                    &["1", "0", "0", "0"],
                    &["0", "u*conj(v)", "0", "0"],
                ]
            )
        );
        let x2 = rep_of_word(&g, &rep, &word(&[("x", 2)])).unwrap();
        let y2 = rep_of_word(&g, &rep, &word(&[("y", 2)])).unwrap();
        let z2 = rep_of_word(&g, &rep, &word(&[("z", 2)])).unwrap();
        assert_eq!(
            x2,
            expect_matrix(
                t,
                &[
                    &["u", "0", "0", "0"],
                    &["0", "u", "0", "0"],
                    &["0", "0", "conj(u)", "0"],
                    &["0", "0", "0", "conj(u)"],
                ]
            )
        );
        assert_eq!(
            y2,
            expect_matrix(
                t,
                &[
                    &["v", "0", "0", "0"],
                    &["0", "conj(v)", "0", "0"],
                    &["0", "0", "v", "0"],
                    &["0", "0", "0", "conj(v)"],
                ]
            )
        );
        assert_eq!(
            z2,
            expect_matrix(
                t,
                &[
                    &["w", "0", "0", "0"],
                    &["0", "conj(w)", "0", "0"],
                    &["0", "0", "conj(w)", "0"],
                    &["0", "0", "0", "w"],
                ]
            )
        );
    }

    #[test]
    fn all_relations_hold_in_every_stratum_rep() {
        let g = builtin::hantzsche_wendt();
        let relations = builtin::hantzsche_wendt_relations();
        for s in builtin::hantzsche_wendt_strata(&g) {
            let reps = induce_character(&g, &s.character, s.transversal.as_deref()).unwrap();
            for rep in reps {
                let report = verify_rep(&g, &rep, &relations).unwrap();
                assert!(report.all_pass(), "relations fail in stratum {}", s.name);
                for m in rep.matrices.values() {
                    assert!(m.is_monomial());
                }
            }
        }
    }

    #[test]
    fn numeric_character_with_partial_stabilizer_has_two_extensions() {
        // (-1, 1, 1) extended only to the subgroup generated by the label of
        // x: the two solutions of sigma(x)^2 = -1
        let g = builtin::hantzsche_wendt();
        let chi = crate::text::parse_stratum("(-1,1,1)").unwrap();
        let hx = g.holonomy.lookup("x").unwrap();
        let e = g.holonomy.identity();
        let stab = crate::character::StabilizerData {
            labels: vec![e, hx],
            section: [
                (e, g.identity()),
                (hx, g.generator("x").unwrap().clone()),
            ]
            .into_iter()
            .collect(),
        };
        let family = extend_character(&g, &chi, &stab).unwrap();
        let mut values: Vec<Monomial> =
            family.iter().map(|ext| ext.values[&hx].clone()).collect();
        values.sort();
        // brute-force oracle: the second roots of -1 are e(1/4) and e(3/4)
        let mut expected = vec![
            Monomial::from_angle(rat(1, 4), 0),
            Monomial::from_angle(rat(3, 4), 0),
        ];
        expected.sort();
        assert_eq!(values, expected);
        for ext in &family {
            ext.check_multiplicative(&g).unwrap();
        }
    }

    #[test]
    fn obstructed_fixed_characters_are_rejected() {
        let g = builtin::hantzsche_wendt();
        for tuple in ["(-1,-1,-1)", "(-1,1,1)"] {
            let chi = crate::text::parse_stratum(tuple).unwrap();
            let stab = stabilizer(&g, &chi).unwrap();
            assert_eq!(stab.order(), 4, "sign characters are fixed");
            let err = extend_character(&g, &chi, &stab).unwrap_err();
            assert!(
                matches!(err, Error::InconsistentExtension(_)),
                "expected an obstruction for {tuple}, got {err:?}"
            );
        }
    }

    #[test]
    fn trivial_character_with_trivial_stabilizer_gives_the_trivial_extension() {
        let g = builtin::hantzsche_wendt();
        let chi = Character::trivial(3);
        let e = g.holonomy.identity();
        let stab = crate::character::StabilizerData {
            labels: vec![e],
            section: [(e, g.identity())].into_iter().collect(),
        };
        let family = extend_character(&g, &chi, &stab).unwrap();
        assert_eq!(family.len(), 1);
        assert!(family[0].values[&e].is_one());
    }

    #[test]
    fn trivial_character_with_full_stabilizer_gives_the_quotient_characters() {
        let g = builtin::hantzsche_wendt();
        let chi = Character::trivial(3);
        let stab = stabilizer(&g, &chi).unwrap();
        let family = extend_character(&g, &chi, &stab).unwrap();
        assert_eq!(family.len(), 4, "the four characters of Z/2 x Z/2");
    }

    #[test]
    fn inducing_the_trivial_lattice_character_gives_the_regular_quotient_action() {
        let g = builtin::hantzsche_wendt();
        let chi = Character::trivial(3);
        let e = g.holonomy.identity();
        let stab = crate::character::StabilizerData {
            labels: vec![e],
            section: [(e, g.identity())].into_iter().collect(),
        };
        let sigma = extend_character(&g, &chi, &stab).unwrap().remove(0);
        let tv: Vec<GroupElement> = (0..4)
            .map(|h| crate::character::preferred_lift(&g, h))
            .collect();
        let rep = induce(&g, &sigma, &tv).unwrap();
        let t = &rep.symbols;
        assert_eq!(
            rep.matrices["x"],
            expect_matrix(
                t,
                &[
                    &["0", "1", "0", "0"],
                    &["1", "0", "0", "0"],
                    &["0", "0", "0", "1"],
                    &["0", "0", "1", "0"],
                ]
            )
        );
        assert_eq!(
            rep.matrices["y"],
            expect_matrix(
                t,
                &[
                    &["0", "0", "1", "0"],
                    &["0", "0", "0", "1"],
                    &["1", "0", "0", "0"],
                    &["0", "1", "0", "0"],
                ]
            )
        );
    }

    #[test]
    fn bad_transversals_are_rejected() {
        let g = builtin::hantzsche_wendt();
        let strata = builtin::hantzsche_wendt_strata(&g);
        let chi = &strata[0].character;
        let stab = stabilizer(&g, chi).unwrap();
        let sigma = extend_character(&g, chi, &stab).unwrap().remove(0);
        let x = g.generator("x").unwrap().clone();
        let y = g.generator("y").unwrap().clone();
        // x lies in the stabilizer, so {e, x} repeats a coset
        let err = induce(&g, &sigma, &[g.identity(), x]).unwrap_err();
        assert!(matches!(err, Error::BadTransversal(_)));
        // wrong size
        let err = induce(&g, &sigma, &[g.identity()]).unwrap_err();
        assert!(matches!(err, Error::BadTransversal(_)));
        // must start with the identity
        let err = induce(&g, &sigma, &[y, g.identity()]).unwrap_err();
        assert!(matches!(err, Error::BadTransversal(_)));
    }

    #[test]
    fn lattice_restriction_is_the_inducing_orbit() {
        let (g, rep) = hw_stratum_rep("(u,1,1)");
        let restriction = restrict_to_lattice(&g, &rep).unwrap();
        assert_eq!(restriction.len(), 2);
        assert!(restriction.iter().all(|(_, m)| *m == 1));
        // coordinates are a^2 and conj(a)^2 after the rewriting u = a^2
        let a2 = Monomial::symbol(0, 1).pow(2);
        assert!(restriction.iter().any(|(chi, _)| chi.coords[0] == a2));
        assert!(restriction.iter().any(|(chi, _)| chi.coords[0] == a2.conj()));

        let (g, rep) = hw_stratum_rep("(u,v,w)");
        let restriction = restrict_to_lattice(&g, &rep).unwrap();
        assert_eq!(restriction.len(), 4);
        assert!(restriction.iter().all(|(_, m)| *m == 1));
    }

    #[test]
    fn word_homomorphism_matches_element_matrices() {
        let (g, rep) = hw_stratum_rep("(u,v,w)");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let names = ["x", "y", "z"];
        let random_word = |rng: &mut rand_chacha::ChaCha8Rng| -> Word {
            (0..rng.gen_range(0..5))
                .map(|_| {
                    (
                        names[rng.gen_range(0..3)].to_string(),
                        rng.gen_range(-2i64..=2),
                    )
                })
                .collect()
        };
        for _ in 0..50 {
            let w1 = random_word(&mut rng);
            let w2 = random_word(&mut rng);
            let mut both = w1.clone();
            both.extend(w2.clone());
            let lhs = rep_of_word(&g, &rep, &both).unwrap();
            let rhs = rep_of_word(&g, &rep, &w1)
                .unwrap()
                .mul(&rep_of_word(&g, &rep, &w2).unwrap());
            assert_eq!(lhs, rhs);
            // and the product route agrees with the direct element formula
            let el = g.eval_word(&both).unwrap();
            assert_eq!(lhs, rep.matrix_of_element(&g, &el).unwrap());
        }
    }

    #[test]
    fn defining_relation_evaluates_to_the_identity_matrix() {
        let (g, rep) = hw_stratum_rep("(u,1,1)");
        let m = rep_of_word(
            &g,
            &rep,
            &word(&[("x", 2), ("y", 1), ("x", 2), ("y", -1)]),
        )
        .unwrap();
        assert_eq!(m, MonMat::identity(2, rep.symbols.len()));
    }

    #[test]
    fn evaluation_at_one_gives_the_limit_matrices() {
        let (g, rep) = hw_stratum_rep("(u,1,1)");
        let assignment: BTreeMap<String, Complex64> =
            [("a".to_string(), Complex64::new(1.0, 0.0))].into_iter().collect();
        let nrep = evaluate(&g, &rep, &assignment).unwrap();
        let px = &nrep.generators["x"];
        let py = &nrep.generators["y"];
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { 1.0 } else { 0.0 };
                let anti = if i != j { 1.0 } else { 0.0 };
                assert!((px[(i, j)] - Complex64::new(id, 0.0)).norm() < 1e-12);
                assert!((py[(i, j)] - Complex64::new(anti, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn evaluation_is_unitary_at_random_unit_values() {
        let (g, rep) = hw_stratum_rep("(u,v,w)");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let assignment: BTreeMap<String, Complex64> = rep
                .symbols
                .names()
                .iter()
                .map(|n| {
                    (
                        n.clone(),
                        Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)),
                    )
                })
                .collect();
            let nrep = evaluate(&g, &rep, &assignment).unwrap();
            assert!(nrep.unitarity_defect() < 1e-9);
        }
    }

    #[test]
    fn evaluation_error_paths() {
        let (g, rep) = hw_stratum_rep("(u,1,1)");
        let err = evaluate(&g, &rep, &BTreeMap::new()).unwrap_err();
        assert_eq!(err, Error::MissingSymbol("a".into()));
        let assignment: BTreeMap<String, Complex64> =
            [("a".to_string(), Complex64::new(1.5, 0.0))].into_iter().collect();
        let err = evaluate(&g, &rep, &assignment).unwrap_err();
        assert!(matches!(err, Error::OffCircleValue { .. }));
    }

    #[test]
    fn dimension_equals_orbit_length() {
        let g = builtin::hantzsche_wendt();
        for s in builtin::hantzsche_wendt_strata(&g) {
            let orbit_len = crate::character::orbit(&g, &s.character).unwrap().len();
            let reps = induce_character(&g, &s.character, s.transversal.as_deref()).unwrap();
            for rep in reps {
                assert_eq!(rep.dim, orbit_len);
            }
        }
    }

    #[test]
    fn restriction_of_a_one_dimensional_representation() {
        // the trivial character of the lattice extended to the whole group
        // restricts back to the trivial character alone
        let g = builtin::hantzsche_wendt();
        let chi = Character::trivial(3);
        let stab = stabilizer(&g, &chi).unwrap();
        let sigma = extend_character(&g, &chi, &stab)
            .unwrap()
            .into_iter()
            .find(|ext| ext.values.values().all(Monomial::is_one))
            .unwrap();
        let rep = induce(&g, &sigma, &[g.identity()]).unwrap();
        assert_eq!(rep.dim, 1);
        let restriction = restrict_to_lattice(&g, &rep).unwrap();
        assert_eq!(restriction.len(), 1);
        assert!(restriction[0].0.is_trivial());
        assert_eq!(restriction[0].1, 1);
    }

    #[test]
    fn klein_bottle_second_stratum_matrices() {
        let g = builtin::klein_bottle();
        let strata = builtin::klein_bottle_strata(&g);
        let s = strata.into_iter().find(|s| s.name == "(1,v)").unwrap();
        let reps = induce_character(&g, &s.character, s.transversal.as_deref()).unwrap();
        assert_eq!(reps.len(), 1);
        let rep = &reps[0];
        let t = &rep.symbols;
        assert_eq!(rep.matrices["x"], expect_matrix(t, &[&["0", "1"], &["1", "0"]]));
        assert_eq!(rep.matrices["t"], expect_matrix(t, &[&["v", "0"], &["0", "conj(v)"]]));
    }

}
