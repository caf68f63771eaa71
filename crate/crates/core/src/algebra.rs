//! Exact group-algebra arithmetic over Gaussian rationals, the conditional
//! expectation onto the lattice subalgebra, the quasi-basis matrix embedding
//! and relative augmentation-ideal membership.

use crate::group::{CrystGroup, GroupElement};
use crate::{rat_int, Error, Rat, Result};
use num_traits::Zero;
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;

/// Exact complex rational `re + im i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat { re: rat_int(n), im: rat_int(0) }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussRat { re: rat_int(0), im: rat_int(1) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn sub(&self, other: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &other.re, im: &self.im - &other.im }
    }

    pub fn mul(&self, other: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn neg(&self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn conj(&self) -> GaussRat {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale(&self, r: &Rat) -> GaussRat {
        GaussRat { re: &self.re * r, im: &self.im * r }
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im < rat_int(0) {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Finitely supported element of the group algebra: a formal sum of group
/// elements with [`GaussRat`] coefficients. Zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupAlgebraElement {
    terms: BTreeMap<GroupElement, GaussRat>,
}

impl GroupAlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(group: &CrystGroup) -> Self {
        Self::single(group.identity(), GaussRat::one())
    }

    pub fn single(g: GroupElement, c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(g, c);
        }
        GroupAlgebraElement { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (GroupElement, GaussRat)>) -> Self {
        let mut out = Self::zero();
        for (g, c) in pairs {
            out.add_term(g, c);
        }
        out
    }

    fn add_term(&mut self, g: GroupElement, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<GroupElement, GaussRat> {
        &self.terms
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &GroupElement) -> GaussRat {
        self.terms.get(g).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        GroupAlgebraElement {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c.scale(r))).collect(),
        }
    }

    /// Convolution product.
    pub fn mul(&self, group: &CrystGroup, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (g1, c1) in &self.terms {
            for (g2, c2) in &other.terms {
                out.add_term(group.mul(g1, g2)?, c1.mul(c2));
            }
        }
        Ok(out)
    }

    /// Star: conjugate coefficients, invert elements.
    pub fn star(&self, group: &CrystGroup) -> Result<Self> {
        let mut out = Self::zero();
        for (g, c) in &self.terms {
            out.add_term(group.inv(g)?, c.conj());
        }
        Ok(out)
    }

    /// Sum of all coefficients (the value of the trivial representation).
    pub fn augmentation(&self) -> GaussRat {
        self.terms
            .values()
            .fold(GaussRat::zero(), |acc, c| acc.add(c))
    }
}

/// Conditional expectation: drop every term outside the subgroup described
/// by the predicate. Idempotent and bimodular over the retained subalgebra.
pub fn expectation(
    x: &GroupAlgebraElement,
    gamma: impl Fn(&GroupElement) -> bool,
) -> GroupAlgebraElement {
    GroupAlgebraElement {
        terms: x
            .terms
            .iter()
            .filter(|(g, _)| gamma(g))
            .map(|(g, c)| (g.clone(), c.clone()))
            .collect(),
    }
}

/// Expectation onto the lattice subalgebra (trivial holonomy label).
pub fn lattice_expectation(group: &CrystGroup, x: &GroupAlgebraElement) -> GroupAlgebraElement {
    let e = group.holonomy.identity();
    expectation(x, |g| g.h == e)
}

/// A section of `G -> H`: one lift per holonomy label, the identity lifting
/// to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    lifts: Vec<GroupElement>,
}

impl Section {
    pub fn new(group: &CrystGroup, lifts: Vec<GroupElement>) -> Result<Self> {
        if lifts.len() != group.holonomy.order() {
            return Err(Error::BadSection(format!(
                "need {} lifts, got {}",
                group.holonomy.order(),
                lifts.len()
            )));
        }
        for (h, g) in lifts.iter().enumerate() {
            if g.h != h {
                return Err(Error::BadSection(format!(
                    "lift of '{}' has holonomy '{}'",
                    group.holonomy.label(h),
                    group.holonomy.label(g.h)
                )));
            }
            if !group.contains(g) {
                return Err(Error::BadSection(format!(
                    "lift of '{}' is not a group element",
                    group.holonomy.label(h)
                )));
            }
        }
        if lifts[group.holonomy.identity()] != group.identity() {
            return Err(Error::BadSection(
                "the identity label must lift to the identity".into(),
            ));
        }
        Ok(Section { lifts })
    }

    /// The canonical section `h -> (a_h, h)`.
    pub fn canonical(group: &CrystGroup) -> Self {
        let lifts = (0..group.holonomy.order())
            .map(|h| group.canonical_lift(h))
            .collect();
        Section { lifts }
    }

    /// The canonical section shifted by lattice vectors (still a section).
    pub fn shifted(group: &CrystGroup, shift: &[i64]) -> Self {
        let e = group.holonomy.identity();
        let lifts = (0..group.holonomy.order())
            .map(|h| {
                if h == e {
                    group.identity()
                } else {
                    let lat = group.lattice_element(shift);
                    group.mul(&lat, &group.canonical_lift(h)).expect("same rank")
                }
            })
            .collect();
        Section { lifts }
    }

    pub fn lift(&self, h: usize) -> &GroupElement {
        &self.lifts[h]
    }

    pub fn len(&self) -> usize {
        self.lifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lifts.is_empty()
    }
}

/// `|H| x |H|` matrix with entries in the lattice subalgebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixOverGammaAlgebra {
    pub size: usize,
    entries: Vec<GroupAlgebraElement>,
}

impl MatrixOverGammaAlgebra {
    pub fn zero(size: usize) -> Self {
        MatrixOverGammaAlgebra { size, entries: vec![GroupAlgebraElement::zero(); size * size] }
    }

    pub fn entry(&self, i: usize, j: usize) -> &GroupAlgebraElement {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GroupAlgebraElement) {
        self.entries[i * self.size + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupAlgebraElement::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.size).all(|i| {
            (0..self.size).all(|j| i == j || self.entry(i, j).is_zero())
        })
    }

    /// Every entry supported inside the lattice subalgebra.
    pub fn supported_in_lattice(&self, group: &CrystGroup) -> bool {
        let e = group.holonomy.identity();
        self.entries
            .iter()
            .all(|x| x.terms().keys().all(|g| g.h == e))
    }

    pub fn mul(&self, group: &CrystGroup, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::SizeMismatch(format!("{} vs {}", self.size, other.size)));
        }
        let mut out = Self::zero(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                let mut acc = GroupAlgebraElement::zero();
                for k in 0..self.size {
                    acc = acc.add(&self.entry(i, k).mul(group, other.entry(k, j))?);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose with entrywise star.
    pub fn star(&self, group: &CrystGroup) -> Result<Self> {
        let mut out = Self::zero(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                out.set(j, i, self.entry(i, j).star(group)?);
            }
        }
        Ok(out)
    }

    pub fn identity(group: &CrystGroup, size: usize) -> Self {
        let mut out = Self::zero(size);
        for i in 0..size {
            out.set(i, i, GroupAlgebraElement::one(group));
        }
        out
    }
}

/// The quasi-basis embedding: `psi(a)_{h',h} = E(g_{h'} a g_h^{-1})`, an
/// `|H| x |H|` matrix over the lattice subalgebra.
pub fn psi(
    group: &CrystGroup,
    a: &GroupAlgebraElement,
    section: &Section,
) -> Result<MatrixOverGammaAlgebra> {
    let n = group.holonomy.order();
    if section.len() != n {
        return Err(Error::BadSection("section size mismatch".into()));
    }
    let e = group.holonomy.identity();
    let inv_lifts: Result<Vec<GroupElement>> =
        (0..n).map(|h| group.inv(section.lift(h))).collect();
    let inv_lifts = inv_lifts?;
    let mut out = MatrixOverGammaAlgebra::zero(n);
    // a term of a with label t contributes to the single column h with
    // h' t h^{-1} trivial, i.e. h = h'^{-1} ... ; collect terms per cell
    for hp in 0..n {
        for h in 0..n {
            let mut cell = GroupAlgebraElement::zero();
            for (g, c) in a.terms() {
                if group.holonomy.mul(group.holonomy.mul(hp, g.h), group.holonomy.inv(h)) != e
                {
                    continue;
                }
                let el = group.mul(&group.mul(section.lift(hp), g)?, &inv_lifts[h])?;
                cell.add_term(el, c.clone());
            }
            out.set(hp, h, cell);
        }
    }
    Ok(out)
}

/// Reconstruction: `(1/|H|) sum_{h',h} g_{h'}^{-1} M_{h',h} g_h`. A left
/// inverse of [`psi`].
pub fn reconstruct(
    group: &CrystGroup,
    m: &MatrixOverGammaAlgebra,
    section: &Section,
) -> Result<GroupAlgebraElement> {
    let n = group.holonomy.order();
    if m.size != n {
        return Err(Error::SizeMismatch(format!(
            "matrix size {} does not match |H| = {n}",
            m.size
        )));
    }
    let mut acc = GroupAlgebraElement::zero();
    for hp in 0..n {
        for h in 0..n {
            let left =
                GroupAlgebraElement::single(group.inv(section.lift(hp))?, GaussRat::one());
            let right = GroupAlgebraElement::single(section.lift(h).clone(), GaussRat::one());
            acc = acc.add(&left.mul(group, m.entry(hp, h))?.mul(group, &right)?);
        }
    }
    Ok(acc.scale(&Rat::new(1.into(), (n as i64).into())))
}

/// The single-sum quasi-basis identity `sum_h g_h^{-1} E(g_h a) = a`,
/// returned as the left-hand side for comparison against `a`.
pub fn quasi_basis_sum(
    group: &CrystGroup,
    a: &GroupAlgebraElement,
    section: &Section,
) -> Result<GroupAlgebraElement> {
    let mut acc = GroupAlgebraElement::zero();
    for h in 0..group.holonomy.order() {
        let lift = GroupAlgebraElement::single(section.lift(h).clone(), GaussRat::one());
        let inv = GroupAlgebraElement::single(group.inv(section.lift(h))?, GaussRat::one());
        let e = lattice_expectation(group, &lift.mul(group, a)?);
        acc = acc.add(&inv.mul(group, &e)?);
    }
    Ok(acc)
}

/// Push an algebra element forward along `G -> H`: coefficient sums per
/// holonomy label.
pub fn push_forward(x: &GroupAlgebraElement) -> BTreeMap<usize, GaussRat> {
    let mut out: BTreeMap<usize, GaussRat> = BTreeMap::new();
    for (g, c) in x.terms() {
        let entry = out.entry(g.h).or_insert_with(GaussRat::zero);
        *entry = entry.add(c);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Membership in `I(G, H) = ker(I(q))`, decided by the vanishing of the
/// push-forward along `G -> H`. The equivalent expectation-side criterion
/// ([`in_augmentation_via_expectation`]) is evaluated as well; the two must
/// agree.
pub fn in_augmentation_relative(
    group: &CrystGroup,
    x: &GroupAlgebraElement,
    section: &Section,
) -> Result<bool> {
    let by_push_forward = push_forward(x).is_empty();
    let by_expectation = in_augmentation_via_expectation(group, x, section)?;
    assert_eq!(
        by_push_forward, by_expectation,
        "the two membership criteria disagree"
    );
    Ok(by_push_forward)
}

/// The expectation-side criterion: the augmentation of `E(x g_h^{-1})`
/// vanishes for every label `h`.
pub fn in_augmentation_via_expectation(
    group: &CrystGroup,
    x: &GroupAlgebraElement,
    section: &Section,
) -> Result<bool> {
    for h in 0..group.holonomy.order() {
        let right = GroupAlgebraElement::single(group.inv(section.lift(h))?, GaussRat::one());
        let e = lattice_expectation(group, &x.mul(group, &right)?);
        if !e.augmentation().is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random finitely supported element: up to `max_support` random short
/// words with small Gaussian-rational coefficients.
pub fn random_element(
    group: &CrystGroup,
    rng: &mut impl Rng,
    max_support: usize,
) -> GroupAlgebraElement {
    let names: Vec<&String> = group.generators().keys().collect();
    assert!(!names.is_empty(), "group has no named generators");
    let mut out = GroupAlgebraElement::zero();
    let terms = rng.gen_range(1..=max_support);
    for _ in 0..terms {
        let len = rng.gen_range(0..4);
        let mut el = group.identity();
        for _ in 0..len {
            let name = names[rng.gen_range(0..names.len())];
            let exp = rng.gen_range(-2i64..=2);
            let g = group.generator(name).expect("named generator");
            el = group.mul(&el, &group.pow(g, exp).expect("rank ok")).expect("rank ok");
        }
        let coeff = GaussRat::new(
            Rat::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into()),
            Rat::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into()),
        );
        out = out.add(&GroupAlgebraElement::single(el, coeff));
    }
    out
}

/// Random element of the ideal generated by the lattice augmentation ideal:
/// a sum of products `p (gamma - 1) q` with random `p`, `q` and random
/// lattice elements `gamma`.
pub fn random_ideal_element(
    group: &CrystGroup,
    rng: &mut impl Rng,
    pieces: usize,
) -> Result<GroupAlgebraElement> {
    let mut out = GroupAlgebraElement::zero();
    for _ in 0..pieces.max(1) {
        let p = random_element(group, rng, 3);
        let q = random_element(group, rng, 3);
        let coords: Vec<i64> =
            (0..group.rank).map(|_| rng.gen_range(-2i64..=2)).collect();
        let gamma = group.lattice_element(&coords);
        let diff = GroupAlgebraElement::single(gamma, GaussRat::one())
            .sub(&GroupAlgebraElement::one(group));
        out = out.add(&p.mul(group, &diff)?.mul(group, &q)?);
    }
    Ok(out)
}
