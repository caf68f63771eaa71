//! Limits of induced-representation families at the trivial character,
//! decomposition of the limits into characters of the finite quotient, and
//! the shielded-point scan.

use crate::character::{fixed_points, orbit, stabilizer, Character};
use crate::group::{CrystGroup, GroupElement};
use crate::induction::{
    evaluate, extend_character, induce, orbit_transversal, MonMat, NumericRep, Rep,
};
use crate::{rat, rat_int, Error, Rat, Result};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Comparison tolerances for the floating-point part of the limit analysis.
/// Everything upstream of the trace decomposition is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Matrix-entry comparisons.
    pub entry: f64,
    /// Multiplicity integrality.
    pub multiplicity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { entry: 1e-9, multiplicity: 1e-6 }
    }
}

/// A stratum of the dual torus: a character with generic symbols, plus an
/// optional explicit transversal for the induction step.
#[derive(Debug, Clone, PartialEq)]
pub struct Stratum {
    pub name: String,
    pub character: Character,
    pub transversal: Option<Vec<GroupElement>>,
}

/// A character of the finite quotient, stored as an angle per holonomy
/// label (the value on label `h` is `e(values[h])`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuotientCharacter {
    pub values: Vec<Rat>,
}

impl QuotientCharacter {
    pub fn trivial(order: usize) -> Self {
        QuotientCharacter { values: vec![rat_int(0); order] }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn value(&self, label: usize) -> &Rat {
        &self.values[label]
    }

    pub fn eval(&self, label: usize) -> Complex64 {
        let t = self.values[label].to_f64().expect("angle in f64 range");
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
    }
}

/// All characters of the (abelian) holonomy group, sorted by their value
/// vectors; the trivial character comes first.
pub fn quotient_characters(group: &CrystGroup) -> Result<Vec<QuotientCharacter>> {
    let h = &group.holonomy;
    if !h.is_abelian() {
        return Err(Error::NonabelianQuotient);
    }
    let all: Vec<usize> = (0..h.order()).collect();
    let basis = h.abelian_basis(&all)?;
    let orders: Vec<usize> = basis.iter().map(|&g| h.element_order(g)).collect();
    let exps_of: Vec<Vec<usize>> = all
        .iter()
        .map(|&l| h.exponents_in_basis(&basis, l).expect("basis spans the group"))
        .collect();
    let mut out = Vec::new();
    let mut c = vec![0usize; basis.len()];
    loop {
        let values: Vec<Rat> = all
            .iter()
            .map(|&l| {
                let mut angle = rat_int(0);
                for ((&ci, &ki), &ei) in c.iter().zip(&orders).zip(&exps_of[l]) {
                    angle += rat((ci * ei) as i64, ki as i64);
                }
                let f = angle.floor();
                angle - f
            })
            .collect();
        out.push(QuotientCharacter { values });
        let mut i = 0;
        loop {
            if i == basis.len() {
                out.sort();
                return Ok(out);
            }
            c[i] += 1;
            if c[i] < orders[i] {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

/// Limit of a parametrized family: evaluate the representation with every
/// symbol sent to 1. Exact entries (roots of unity) are available through
/// [`Rep::at_ones`]; this returns the numeric view used by the trace
/// decomposition.
pub fn limit_rep(group: &CrystGroup, rep: &Rep) -> Result<NumericRep> {
    let lim = rep.at_ones();
    evaluate(group, &lim, &BTreeMap::new())
}

/// Decompose a numeric representation that factors through the holonomy
/// quotient into quotient characters with multiplicities
/// `m = (1/|H|) sum_h conj(eta(h)) tr M(s_h)`.
pub fn decompose_through_quotient(
    group: &CrystGroup,
    nrep: &NumericRep,
    tol: &Tolerances,
) -> Result<Vec<(QuotientCharacter, usize)>> {
    for (i, m) in nrep.lattice.iter().enumerate() {
        for r in 0..nrep.dim {
            for c in 0..nrep.dim {
                let expect = if r == c { 1.0 } else { 0.0 };
                if (m[(r, c)] - Complex64::new(expect, 0.0)).norm() > tol.entry {
                    return Err(Error::DoesNotFactor(format!(
                        "lattice generator {i} acts nontrivially"
                    )));
                }
            }
        }
    }
    let chars = quotient_characters(group)?;
    let order = group.holonomy.order();
    let traces: Vec<Complex64> = (0..order)
        .map(|h| (0..nrep.dim).map(|i| nrep.lifts[h][(i, i)]).sum())
        .collect();
    let mut out = Vec::new();
    let mut total = 0usize;
    for eta in chars {
        let mut acc = Complex64::new(0.0, 0.0);
        for h in 0..order {
            acc += eta.eval(h).conj() * traces[h];
        }
        acc /= order as f64;
        let rounded = acc.re.round();
        if acc.im.abs() > tol.multiplicity || (acc.re - rounded).abs() > tol.multiplicity {
            return Err(Error::NonIntegerMultiplicity(format!(
                "multiplicity {acc} for a quotient character"
            )));
        }
        if rounded < 0.0 {
            return Err(Error::NonIntegerMultiplicity(format!(
                "negative multiplicity {rounded}"
            )));
        }
        let mult = rounded as usize;
        total += mult;
        if mult > 0 {
            out.push((eta, mult));
        }
    }
    if total != nrep.dim {
        return Err(Error::NonIntegerMultiplicity(format!(
            "multiplicities sum to {total}, dimension is {}",
            nrep.dim
        )));
    }
    Ok(out)
}

/// Per-stratum record of the scan.
#[derive(Debug, Clone)]
pub struct StratumRecord {
    pub name: String,
    pub orbit_len: usize,
    pub dim: usize,
    /// Coset representatives used for the induction step.
    pub transversal: Vec<GroupElement>,
    /// Exact limit matrices of the named generators (symbols at 1).
    pub limit_matrices: BTreeMap<String, MonMat>,
    pub decomposition: Vec<(QuotientCharacter, usize)>,
    pub witness: Option<QuotientCharacter>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Shielded,
    NotCertified { reason: String },
}

/// Evidence report for the shielded-point scan at the trivial
/// representation. The verdict is stratum-certified: it refers to the
/// strata that were scanned, the 1-orbit component being handled by the
/// finiteness of the fixed set.
#[derive(Debug, Clone)]
pub struct ShieldedReport {
    pub fixed_point_isolation: bool,
    pub fixed_set: Option<Vec<Character>>,
    pub fixed_reason: Option<String>,
    pub strata: Vec<StratumRecord>,
    pub verdict: Verdict,
}

fn process_stratum(
    group: &CrystGroup,
    stratum: &Stratum,
    tol: &Tolerances,
) -> Result<StratumRecord> {
    let chi = &stratum.character;
    if chi.rank() != group.rank {
        return Err(Error::RankMismatch { expected: group.rank, got: chi.rank() });
    }
    for coord in &chi.coords {
        if !coord.angle().is_zero() {
            return Err(Error::MalformedConfig(format!(
                "stratum '{}' does not approach the trivial character",
                stratum.name
            )));
        }
    }
    let orbit_len = orbit(group, chi)?.len();
    let stab = stabilizer(group, chi)?;
    let family = extend_character(group, chi, &stab)?;
    // principal branch: the member whose values all tend to 1 as the
    // symbols do; it exists because every numeric coordinate has angle 0
    let sigma = family
        .iter()
        .find(|ext| ext.values.values().all(|v| v.numeric_part().is_one()))
        .ok_or_else(|| {
            Error::InconsistentExtension(format!(
                "stratum '{}' has no extension converging to the trivial character",
                stratum.name
            ))
        })?;
    let default;
    let tv: &[GroupElement] = match &stratum.transversal {
        Some(t) => t,
        None => {
            default = orbit_transversal(group, chi)?;
            &default
        }
    };
    let rep = induce(group, sigma, tv)?;
    let limit_exact = rep.at_ones();
    let numeric = evaluate(group, &limit_exact, &BTreeMap::new())?;
    let decomposition = decompose_through_quotient(group, &numeric, tol)?;
    let witness = decomposition
        .iter()
        .find(|(eta, mult)| !eta.is_trivial() && *mult > 0)
        .map(|(eta, _)| eta.clone());
    Ok(StratumRecord {
        name: stratum.name.clone(),
        orbit_len,
        dim: rep.dim,
        transversal: rep.transversal,
        limit_matrices: limit_exact.matrices,
        decomposition,
        witness,
        error: None,
    })
}

/// Run the shielded-point scan: fixed-point isolation plus, per stratum,
/// extension, induction, limit and decomposition, recording a nontrivial
/// witness character when one exists.
pub fn shielded_scan(
    group: &CrystGroup,
    strata: &[Stratum],
    tol: &Tolerances,
) -> Result<ShieldedReport> {
    let (fixed_set, fixed_reason) = match fixed_points(group) {
        Ok(set) => (Some(set), None),
        Err(Error::InfiniteFixedLocus(msg)) => (None, Some(msg)),
        Err(other) => return Err(other),
    };
    let isolation = fixed_set.is_some();
    let mut records = Vec::new();
    for stratum in strata {
        match process_stratum(group, stratum, tol) {
            Ok(rec) => records.push(rec),
            Err(Error::MalformedConfig(msg)) => return Err(Error::MalformedConfig(msg)),
            Err(Error::RankMismatch { expected, got }) => {
                return Err(Error::RankMismatch { expected, got })
            }
            Err(e) => records.push(StratumRecord {
                name: stratum.name.clone(),
                orbit_len: 0,
                dim: 0,
                transversal: Vec::new(),
                limit_matrices: BTreeMap::new(),
                decomposition: Vec::new(),
                witness: None,
                error: Some(e.to_string()),
            }),
        }
    }
    let mut reason = None;
    if !isolation {
        reason = Some(format!(
            "infinite fixed locus: {}",
            fixed_reason.as_deref().unwrap_or("unknown")
        ));
    } else {
        for rec in &records {
            if let Some(err) = &rec.error {
                reason = Some(format!("stratum '{}' failed: {err}", rec.name));
                break;
            }
            if rec.witness.is_none() {
                reason = Some(format!(
                    "stratum '{}' has no nontrivial witness character",
                    rec.name
                ));
                break;
            }
        }
    }
    let verdict = match reason {
        None => Verdict::Shielded,
        Some(reason) => Verdict::NotCertified { reason },
    };
    Ok(ShieldedReport {
        fixed_point_isolation: isolation,
        fixed_set,
        fixed_reason,
        strata: records,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::induction::{induce_character, verify_rep, CMat};
    use crate::text::parse_entry;
    use crate::monomial::SymbolTable;
    use ndarray::Array2;

    fn hw_stratum_rep(name: &str) -> (CrystGroup, Rep) {
        let g = builtin::hantzsche_wendt();
        let s = builtin::hantzsche_wendt_strata(&g)
            .into_iter()
            .find(|s| s.name == name)
            .unwrap();
        let reps = induce_character(&g, &s.character, s.transversal.as_deref()).unwrap();
        (g, reps.into_iter().next().unwrap())
    }

    fn close(a: &CMat, b: &CMat) -> bool {
        a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    fn cmat(rows: &[&[f64]]) -> CMat {
        let n = rows.len();
        Array2::from_shape_fn((n, n), |(i, j)| Complex64::new(rows[i][j], 0.0))
    }

    #[test]
    fn two_orbit_limit_matrices_and_decomposition() {
        let (g, rep) = hw_stratum_rep("(u,1,1)");
        let nrep = limit_rep(&g, &rep).unwrap();
        assert!(close(&nrep.generators["x"], &cmat(&[&[1.0, 0.0], &[0.0, 1.0]])));
        assert!(close(&nrep.generators["y"], &cmat(&[&[0.0, 1.0], &[1.0, 0.0]])));
        let dec = decompose_through_quotient(&g, &nrep, &Tolerances::default()).unwrap();
        assert_eq!(dec.len(), 2);
        assert!(dec.iter().all(|(_, m)| *m == 1));
        let eta = dec
            .iter()
            .map(|(eta, _)| eta)
            .find(|eta| !eta.is_trivial())
            .expect("nontrivial constituent");
        // eta is trivial on the label of x and -1 on the labels of y and z
        let hy = g.holonomy.lookup("y").unwrap();
        let hx = g.holonomy.lookup("x").unwrap();
        assert_eq!(*eta.value(hy), rat(1, 2));
        assert!(eta.value(hx).is_zero());
    }

    #[test]
    fn four_orbit_limit_is_the_regular_quotient_representation() {
        let (g, rep) = hw_stratum_rep("(u,v,w)");
        let nrep = limit_rep(&g, &rep).unwrap();
        assert!(close(
            &nrep.generators["x"],
            &cmat(&[
                &[0.0, 1.0, 0.0, 0.0],
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
                &[0.0, 0.0, 1.0, 0.0],
            ])
        ));
        assert!(close(
            &nrep.generators["y"],
            &cmat(&[
                &[0.0, 0.0, 1.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
            ])
        ));
        let dec = decompose_through_quotient(&g, &nrep, &Tolerances::default()).unwrap();
        assert_eq!(dec.len(), 4, "all four quotient characters appear");
        assert!(dec.iter().all(|(_, m)| *m == 1));
    }

    #[test]
    fn limits_satisfy_the_group_relations() {
        let g = builtin::hantzsche_wendt();
        let relations = builtin::hantzsche_wendt_relations();
        for s in builtin::hantzsche_wendt_strata(&g) {
            let reps = induce_character(&g, &s.character, s.transversal.as_deref()).unwrap();
            for rep in reps {
                let lim = rep.at_ones();
                let report = verify_rep(&g, &lim, &relations).unwrap();
                assert!(report.all_pass(), "stratum {}", s.name);
            }
        }
    }

    #[test]
    fn decomposition_is_additive_on_block_sums() {
        let (g, rep2) = hw_stratum_rep("(u,1,1)");
        let (_, rep4) = hw_stratum_rep("(u,v,w)");
        let a = limit_rep(&g, &rep2).unwrap();
        let b = limit_rep(&g, &rep4).unwrap();
        let block = |x: &CMat, y: &CMat| -> CMat {
            let (n, m) = (x.nrows(), y.nrows());
            Array2::from_shape_fn((n + m, n + m), |(i, j)| {
                if i < n && j < n {
                    x[(i, j)]
                } else if i >= n && j >= n {
                    y[(i - n, j - n)]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        };
        let sum = NumericRep {
            dim: a.dim + b.dim,
            generators: a
                .generators
                .iter()
                .map(|(k, m)| (k.clone(), block(m, &b.generators[k])))
                .collect(),
            lattice: a
                .lattice
                .iter()
                .zip(&b.lattice)
                .map(|(x, y)| block(x, y))
                .collect(),
            lifts: a.lifts.iter().zip(&b.lifts).map(|(x, y)| block(x, y)).collect(),
        };
        let tol = Tolerances::default();
        let da = decompose_through_quotient(&g, &a, &tol).unwrap();
        let db = decompose_through_quotient(&g, &b, &tol).unwrap();
        let dsum = decompose_through_quotient(&g, &sum, &tol).unwrap();
        let mut expected: BTreeMap<QuotientCharacter, usize> = BTreeMap::new();
        for (eta, m) in da.into_iter().chain(db) {
            *expected.entry(eta).or_insert(0) += m;
        }
        let got: BTreeMap<QuotientCharacter, usize> = dsum.into_iter().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn multiplicities_sum_to_the_dimension() {
        let g = builtin::hantzsche_wendt();
        for s in builtin::hantzsche_wendt_strata(&g) {
            let reps = induce_character(&g, &s.character, s.transversal.as_deref()).unwrap();
            for rep in reps {
                let nrep = limit_rep(&g, &rep).unwrap();
                let dec =
                    decompose_through_quotient(&g, &nrep, &Tolerances::default()).unwrap();
                let total: usize = dec.iter().map(|(_, m)| m).sum();
                assert_eq!(total, rep.dim);
            }
        }
    }

    #[test]
    fn representations_that_do_not_factor_are_rejected() {
        let (g, rep) = hw_stratum_rep("(u,1,1)");
        // evaluate away from the trivial character: lattice matrices differ
        // from the identity
        let assignment: BTreeMap<String, Complex64> =
            [("a".to_string(), Complex64::from_polar(1.0, 1.0))].into_iter().collect();
        let nrep = crate::induction::evaluate(&g, &rep, &assignment).unwrap();
        let err =
            decompose_through_quotient(&g, &nrep, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::DoesNotFactor(_)));
    }

    #[test]
    fn the_scan_certifies_the_builtin_rank3_group() {
        let g = builtin::hantzsche_wendt();
        let strata = builtin::hantzsche_wendt_strata(&g);
        let report = shielded_scan(&g, &strata, &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Shielded);
        assert!(report.fixed_point_isolation);
        assert_eq!(report.fixed_set.as_ref().unwrap().len(), 8);
        assert_eq!(report.strata.len(), 4);
        for rec in &report.strata {
            assert!(rec.witness.is_some(), "stratum {}", rec.name);
            assert!(rec.error.is_none());
        }
        let hy = g.holonomy.lookup("y").unwrap();
        let first = &report.strata[0];
        assert_eq!(first.orbit_len, 2);
        assert_eq!(*first.witness.as_ref().unwrap().value(hy), rat(1, 2));
        // the generic stratum decomposes as the regular representation
        assert_eq!(report.strata[3].decomposition.len(), 4);
    }

    #[test]
    fn the_scan_verdict_is_stable_under_stratum_permutations() {
        let g = builtin::hantzsche_wendt();
        let mut strata = builtin::hantzsche_wendt_strata(&g);
        strata.reverse();
        strata.swap(0, 2);
        let report = shielded_scan(&g, &strata, &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Shielded);
    }

    #[test]
    fn trivial_holonomy_is_not_certified() {
        let g = builtin::group_z();
        let report = shielded_scan(&g, &[], &Tolerances::default()).unwrap();
        assert!(!report.fixed_point_isolation);
        match report.verdict {
            Verdict::NotCertified { reason } => {
                assert!(reason.contains("infinite fixed locus"), "{reason}")
            }
            Verdict::Shielded => panic!("scan must not certify the integers"),
        }
    }

    #[test]
    fn klein_bottle_scan_reports_the_missing_witness() {
        let g = builtin::klein_bottle();
        let strata = builtin::klein_bottle_strata(&g);
        let report = shielded_scan(&g, &strata, &Tolerances::default()).unwrap();
        assert!(matches!(report.verdict, Verdict::NotCertified { .. }));
        assert!(!report.fixed_point_isolation);
        // the fixed-coordinate stratum limits to the trivial representation
        // alone; the flipped-coordinate stratum does produce a witness
        let u1 = report.strata.iter().find(|r| r.name == "(u,1)").unwrap();
        assert_eq!(u1.dim, 1);
        assert!(u1.witness.is_none());
        assert_eq!(u1.decomposition.len(), 1);
        assert!(u1.decomposition[0].0.is_trivial());
        let v1 = report.strata.iter().find(|r| r.name == "(1,v)").unwrap();
        assert_eq!(v1.dim, 2);
        let eta = v1.witness.as_ref().expect("witness");
        assert_eq!(*eta.value(1), rat(1, 2));
    }

    #[test]
    fn strata_with_nonzero_angles_are_rejected() {
        let g = builtin::hantzsche_wendt();
        let bad = Stratum {
            name: "(-1,1,1)".into(),
            character: crate::text::parse_stratum("(-1,1,1)").unwrap(),
            transversal: None,
        };
        let err = shielded_scan(&g, &[bad], &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::MalformedConfig(_)));
    }

    #[test]
    fn quotient_characters_of_the_klein_four_group() {
        let g = builtin::hantzsche_wendt();
        let chars = quotient_characters(&g).unwrap();
        assert_eq!(chars.len(), 4);
        assert!(chars[0].is_trivial());
        // orthogonality: sum over labels of eta(h) is 0 for nontrivial eta
        for eta in &chars[1..] {
            let total: Complex64 = (0..4).map(|h| eta.eval(h)).sum();
            assert!(total.norm() < 1e-12);
        }
    }

    #[test]
    fn limit_rep_entries_are_exact_roots_of_unity() {
        let (_, rep) = hw_stratum_rep("(1,v,1)");
        let lim = rep.at_ones();
        assert_eq!(lim.symbols, SymbolTable::empty());
        for m in lim.matrices.values() {
            for i in 0..m.dim {
                for j in 0..m.dim {
                    if let Some(e) = m.entry(i, j) {
                        assert!(e.is_numeric());
                    }
                }
            }
        }
        let _ = parse_entry("1", &SymbolTable::empty()).unwrap();
    }
}
