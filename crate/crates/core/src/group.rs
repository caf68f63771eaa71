//! Crystallographic groups as affine integer-lattice extensions
//! `1 -> Z^n -> G -> H -> 1`, with exact element arithmetic, word
//! evaluation and a torsion-freeness decision procedure.

use crate::holonomy::HolonomyGroup;
use crate::linalg::{self, IntMat};
use crate::{rat_int, Error, Rat, Result};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// An element `(v, h)`: the affine map `xi -> A_h xi + v`.
///
/// `v` is the full rational translation (not the offset against the lift of
/// `h`), so membership in the group is the condition `v - a_h` integral.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub v: Vec<Rat>,
    pub h: usize,
}

impl GroupElement {
    pub fn is_pure_translation(&self, group: &CrystGroup) -> bool {
        self.h == group.holonomy.identity()
    }
}

/// A word over named generators: pairs `(name, exponent)`.
pub type Word = Vec<(String, i64)>;

/// Build a [`Word`] from string slices; test and CLI convenience.
pub fn word(pairs: &[(&str, i64)]) -> Word {
    pairs.iter().map(|(n, e)| (n.to_string(), *e)).collect()
}

/// Extension data for a crystallographic group: holonomy table, integer
/// linear parts, rational translation parts and named generators.
#[derive(Debug, Clone, PartialEq)]
pub struct CrystGroup {
    pub rank: usize,
    pub holonomy: HolonomyGroup,
    lin: Vec<IntMat>,
    trans: Vec<Vec<Rat>>,
    generators: BTreeMap<String, GroupElement>,
}

fn fmt_rat_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl CrystGroup {
    /// Validate the extension data and build the group.
    ///
    /// Checks, in order: holonomy table validity (done by the caller-supplied
    /// [`HolonomyGroup`]), shape and normalization of linear/translation
    /// parts, unimodularity, the homomorphism property of linear parts, the
    /// cocycle condition modulo the lattice, and membership of the named
    /// generators.
    pub fn new(
        rank: usize,
        holonomy: HolonomyGroup,
        lin: Vec<IntMat>,
        trans: Vec<Vec<Rat>>,
        generators: BTreeMap<String, GroupElement>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::MalformedConfig("rank must be positive".into()));
        }
        let n = holonomy.order();
        if lin.len() != n || trans.len() != n {
            return Err(Error::MalformedConfig(
                "need one linear part and one translation per holonomy label".into(),
            ));
        }
        for (i, m) in lin.iter().enumerate() {
            if m.rows != rank || m.cols != rank {
                return Err(Error::MalformedConfig(format!(
                    "linear part for '{}' is not {rank}x{rank}",
                    holonomy.label(i)
                )));
            }
        }
        for (i, t) in trans.iter().enumerate() {
            if t.len() != rank {
                return Err(Error::MalformedConfig(format!(
                    "translation for '{}' has wrong length",
                    holonomy.label(i)
                )));
            }
        }
        let e = holonomy.identity();
        if !lin[e].is_identity() {
            return Err(Error::MalformedConfig(
                "linear part of the identity label must be the identity matrix".into(),
            ));
        }
        if trans[e].iter().any(|c| !c.is_zero()) {
            return Err(Error::MalformedConfig(
                "translation of the identity label must be zero".into(),
            ));
        }
        for (i, m) in lin.iter().enumerate() {
            let det = m.det();
            if det.abs() != 1 {
                return Err(Error::NonUnimodularMatrix {
                    label: holonomy.label(i).to_string(),
                    det,
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if lin[a].mul(&lin[b]) != lin[holonomy.mul(a, b)] {
                    return Err(Error::MalformedConfig(format!(
                        "linear parts are not a homomorphism at ('{}', '{}')",
                        holonomy.label(a),
                        holonomy.label(b)
                    )));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let mut off = lin[a].mul_rat_vec(&trans[b]);
                for (o, (ta, tc)) in
                    off.iter_mut().zip(trans[a].iter().zip(&trans[holonomy.mul(a, b)]))
                {
                    *o = ta + o.clone() - tc;
                }
                if off.iter().any(|c| !c.is_integer()) {
                    return Err(Error::CocycleViolation {
                        h1: holonomy.label(a).to_string(),
                        h2: holonomy.label(b).to_string(),
                        offset: fmt_rat_vec(&off),
                    });
                }
            }
        }
        let group = CrystGroup { rank, holonomy, lin, trans, generators: BTreeMap::new() };
        let mut named = BTreeMap::new();
        for (name, g) in generators {
            if g.v.len() != rank {
                return Err(Error::MalformedConfig(format!(
                    "generator '{name}' has wrong rank"
                )));
            }
            if g.h >= group.holonomy.order() {
                return Err(Error::MalformedConfig(format!(
                    "generator '{name}' has an unknown holonomy label"
                )));
            }
            if !group.contains(&g) {
                return Err(Error::MalformedConfig(format!(
                    "generator '{name}' does not lie in the group: {} - a_h is not integral",
                    fmt_rat_vec(&g.v)
                )));
            }
            named.insert(name, g);
        }
        Ok(CrystGroup { generators: named, ..group })
    }

    pub fn lin(&self, h: usize) -> &IntMat {
        &self.lin[h]
    }

    pub fn trans(&self, h: usize) -> &[Rat] {
        &self.trans[h]
    }

    pub fn generators(&self) -> &BTreeMap<String, GroupElement> {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<&GroupElement> {
        self.generators.get(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Membership: `(v, h)` lies in the group iff `v - a_h` is integral.
    pub fn contains(&self, g: &GroupElement) -> bool {
        g.v.len() == self.rank
            && g.h < self.holonomy.order()
            && g.v.iter().zip(&self.trans[g.h]).all(|(v, a)| (v - a).is_integer())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { v: vec![rat_int(0); self.rank], h: self.holonomy.identity() }
    }

    /// Pure lattice translation by an integer vector.
    pub fn lattice_element(&self, coords: &[i64]) -> GroupElement {
        assert_eq!(coords.len(), self.rank);
        GroupElement {
            v: coords.iter().map(|&c| rat_int(c)).collect(),
            h: self.holonomy.identity(),
        }
    }

    /// The `i`-th standard lattice basis vector as a group element.
    pub fn lattice_basis_element(&self, i: usize) -> GroupElement {
        let mut coords = vec![0i64; self.rank];
        coords[i] = 1;
        self.lattice_element(&coords)
    }

    /// Canonical lift `(a_h, h)` of a holonomy label.
    pub fn canonical_lift(&self, h: usize) -> GroupElement {
        GroupElement { v: self.trans[h].clone(), h }
    }

    fn check_rank(&self, g: &GroupElement) -> Result<()> {
        if g.v.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: g.v.len() });
        }
        Ok(())
    }

    /// `(v1,h1)(v2,h2) = (v1 + A_{h1} v2, h1 h2)`.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        let mut v = self.lin[a.h].mul_rat_vec(&b.v);
        for (x, y) in v.iter_mut().zip(&a.v) {
            *x += y;
        }
        Ok(GroupElement { v, h: self.holonomy.mul(a.h, b.h) })
    }

    /// `(v,h)^{-1} = (-A_h^{-1} v, h^{-1})`.
    pub fn inv(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check_rank(g)?;
        let hinv = self.holonomy.inv(g.h);
        let mut v = self.lin[hinv].mul_rat_vec(&g.v);
        for x in v.iter_mut() {
            *x = -x.clone();
        }
        Ok(GroupElement { v, h: hinv })
    }

    pub fn pow(&self, g: &GroupElement, k: i64) -> Result<GroupElement> {
        let base = if k < 0 { self.inv(g)? } else { g.clone() };
        let mut out = self.identity();
        for _ in 0..k.unsigned_abs() {
            out = self.mul(&out, &base)?;
        }
        Ok(out)
    }

    /// Conjugate `a b a^{-1}`.
    pub fn conj(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.mul(&self.mul(a, b)?, &self.inv(a)?)
    }

    /// Left-to-right product of generator powers.
    pub fn eval_word(&self, w: &Word) -> Result<GroupElement> {
        let mut out = self.identity();
        for (name, exp) in w {
            let g = self.generator(name)?;
            out = self.mul(&out, &self.pow(g, *exp)?)?;
        }
        Ok(out)
    }

    /// Integer lattice coordinates of a pure translation element.
    ///
    /// Panics if the element has nontrivial holonomy or non-integral
    /// coordinates; callers use it only where both are structurally
    /// guaranteed.
    pub fn lattice_coords(&self, g: &GroupElement) -> Vec<i64> {
        assert_eq!(g.h, self.holonomy.identity(), "not a pure translation");
        g.v.iter()
            .map(|c| {
                assert!(c.is_integer(), "non-integral lattice coordinate {c}");
                i64::try_from(c.to_integer()).expect("lattice coordinate overflow")
            })
            .collect()
    }

    /// Offset of an element against the canonical lift of its label:
    /// the integer vector `v - a_h`.
    pub fn lattice_offset(&self, g: &GroupElement) -> Vec<i64> {
        g.v.iter()
            .zip(&self.trans[g.h])
            .map(|(v, a)| {
                let d = v - a;
                assert!(d.is_integer(), "element is not in the group");
                i64::try_from(d.to_integer()).expect("offset overflow")
            })
            .collect()
    }

    /// Decide torsion-freeness; returns a torsion witness when the group has
    /// one.
    ///
    /// For each label `h` of order `k`, an element `(v, h)` is torsion iff
    /// `S_h v = 0` where `S_h = sum_j A_h^j`; solvability of `S_h v = 0` over
    /// the coset `v in a_h + Z^n` is decided exactly with Smith normal form.
    pub fn torsion_witness(&self) -> Option<GroupElement> {
        let e = self.holonomy.identity();
        for h in 0..self.holonomy.order() {
            if h == e {
                continue;
            }
            let k = self.holonomy.element_order(h);
            let mut s = IntMat::zero(self.rank, self.rank);
            for j in 0..k {
                s = s.add(&self.lin[h].pow(j));
            }
            // S (a_h + m) = 0  <=>  S m = -S a_h, which must be integral.
            let rhs_rat = s.mul_rat_vec(&self.trans[h]);
            if rhs_rat.iter().any(|c| !c.is_integer()) {
                continue;
            }
            let rhs: Vec<i64> = rhs_rat
                .iter()
                .map(|c| i64::try_from((-c).to_integer()).expect("overflow"))
                .collect();
            if let Some(m) = linalg::solve(&s, &rhs) {
                let v: Vec<Rat> =
                    self.trans[h].iter().zip(&m).map(|(a, &x)| a + rat_int(x)).collect();
                return Some(GroupElement { v, h });
            }
        }
        None
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_witness().is_none()
    }

    /// Display an element with its holonomy label.
    pub fn render_element(&self, g: &GroupElement) -> String {
        format!("({}, {})", fmt_rat_vec(&g.v), self.holonomy.label(g.h))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, #{})", fmt_rat_vec(&self.v), self.h)
    }
}
