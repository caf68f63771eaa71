//! Constructive certificates for torsion-free crystallographic groups with
//! cyclic holonomy: the transfer homomorphism, a surjection onto Z derived
//! from it, generator lifting along `Z/ab -> Z/b`, and the recursive
//! rank-reduction that terminates in the rank-1 case.

use crate::group::{CrystGroup, GroupElement};
use crate::holonomy::HolonomyGroup;
use crate::linalg::{self, IntMat};
use crate::{rat, rat_int, Error, Result};
use std::collections::BTreeMap;

/// Lift a generator `y` of `Z/b` to a generator of `Z/ab`, for `a, b > 1`.
///
/// Returns `x = y + p_1 ... p_r b (mod ab)` where the `p_i` are the distinct
/// primes of `ab` not dividing `y`; `x` is then a unit mod `ab` congruent to
/// `y` mod `b`.
pub fn gen_lift(a: u64, b: u64, y: u64) -> Result<u64> {
    assert!(a > 1 && b > 1, "gen_lift requires a, b > 1");
    let y = y % b;
    if num_integer::gcd(y, b) != 1 {
        return Err(Error::NotAGenerator { residue: y, modulus: b });
    }
    let ab = a * b;
    let mut primes = Vec::new();
    let mut rem = ab;
    let mut p = 2u64;
    while p * p <= rem {
        if rem % p == 0 {
            primes.push(p);
            while rem % p == 0 {
                rem /= p;
            }
        }
        p += 1;
    }
    if rem > 1 {
        primes.push(rem);
    }
    let prod: u128 = primes.iter().filter(|&&p| y % p != 0).map(|&p| p as u128).product();
    let x = (y as u128 + prod * b as u128) % ab as u128;
    Ok(x as u64)
}

/// Transfer homomorphism `T : G -> Z^n` for the finite-index lattice.
///
/// With coset representatives `r_h = (a_h, h)`, every `g r_h` factors as
/// `r_{sigma(h)} (n_h, e)`; the transfer is the sum of the `n_h`.
pub fn transfer(group: &CrystGroup, g: &GroupElement) -> Result<Vec<i64>> {
    let mut total = vec![0i64; group.rank];
    for h in 0..group.holonomy.order() {
        let r = group.canonical_lift(h);
        let p = group.mul(g, &r)?;
        let target = group.canonical_lift(p.h);
        let n = group.mul(&group.inv(&target)?, &p)?;
        for (t, c) in total.iter_mut().zip(group.lattice_coords(&n)) {
            *t += c;
        }
    }
    Ok(total)
}

/// A surjective homomorphism `phi : G -> Z`, stored as a lattice covector
/// together with its values on the canonical lifts (and, for reporting, on
/// the named generators).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiData {
    pub lattice: Vec<i64>,
    pub lift_values: Vec<i64>,
    pub generator_values: BTreeMap<String, i64>,
}

impl PhiData {
    /// `phi((v, h)) = f . (v - a_h) + c_h`.
    pub fn eval(&self, group: &CrystGroup, g: &GroupElement) -> i64 {
        let offset = group.lattice_offset(g);
        self.lattice.iter().zip(&offset).map(|(f, o)| f * o).sum::<i64>()
            + self.lift_values[g.h]
    }
}

/// Build `phi` by projecting the transfer to the coordinate with maximal
/// absolute value over a generating set (ties broken by coordinate index)
/// and dividing by the content.
pub fn build_phi(group: &CrystGroup) -> Result<PhiData> {
    if let Some(w) = group.torsion_witness() {
        return Err(Error::NotTorsionFree(group.render_element(&w)));
    }
    if !group.holonomy.is_cyclic() {
        return Err(Error::NonCyclicHolonomy(format!(
            "no element of order {} in the holonomy group",
            group.holonomy.order()
        )));
    }
    let e = group.holonomy.identity();
    let mut lattice_rows = Vec::new();
    for i in 0..group.rank {
        lattice_rows.push(transfer(group, &group.lattice_basis_element(i))?);
    }
    let mut lift_rows = Vec::new();
    for h in 0..group.holonomy.order() {
        if h == e {
            lift_rows.push(vec![0i64; group.rank]);
        } else {
            lift_rows.push(transfer(group, &group.canonical_lift(h))?);
        }
    }
    let col_max = |i: usize| {
        lattice_rows
            .iter()
            .chain(lift_rows.iter())
            .map(|row| row[i].abs())
            .max()
            .unwrap_or(0)
    };
    let best = (0..group.rank).max_by_key(|&i| (col_max(i), std::cmp::Reverse(i)));
    let i_star = best.expect("positive rank");
    if col_max(i_star) == 0 {
        return Err(Error::TrivialTransfer);
    }
    let content = linalg::gcd_all(
        lattice_rows.iter().chain(lift_rows.iter()).map(|row| row[i_star]),
    );
    let lattice: Vec<i64> = lattice_rows.iter().map(|row| row[i_star] / content).collect();
    let lift_values: Vec<i64> = lift_rows.iter().map(|row| row[i_star] / content).collect();
    let phi = PhiData { lattice, lift_values, generator_values: BTreeMap::new() };
    let generator_values = group
        .generators()
        .iter()
        .map(|(name, g)| (name.clone(), phi.eval(group, g)))
        .collect();
    Ok(PhiData { generator_values, ..phi })
}

/// Grid sizes recorded in a certificate: exponent window for kernel-group
/// elements and power window for the central generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub element_window: i64,
    pub power_window: i64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { element_window: 1, power_window: 3 }
    }
}

/// Recursive certificate. `Base` covers the rank-1 case (the group is
/// infinite cyclic, exhibited by the bijection `x^k t^l -> k n + l m`);
/// `Step` records one round of the rank reduction.
#[derive(Debug, Clone, PartialEq)]
pub enum CyclicCertificate {
    Base {
        m: i64,
        n: i64,
        x: GroupElement,
        t: GroupElement,
    },
    Step {
        phi: PhiData,
        m: i64,
        a: i64,
        b: i64,
        /// Element with `phi(g) = 1` whose holonomy label generates.
        g: GroupElement,
        /// Basis of `ker(phi) ∩ Z^n` as ambient column vectors.
        kernel_basis: Vec<Vec<i64>>,
        /// Lift generating the holonomy of the kernel group.
        kernel_lift: GroupElement,
        /// The kernel of `phi` realized as a crystallographic group of rank
        /// `n - 1` with cyclic holonomy `Z/a`.
        sub_group: CrystGroup,
        grid: GridSpec,
        sub: Box<CyclicCertificate>,
    },
}

impl CyclicCertificate {
    pub fn depth(&self) -> usize {
        match self {
            CyclicCertificate::Base { .. } => 1,
            CyclicCertificate::Step { sub, .. } => 1 + sub.depth(),
        }
    }
}

/// Cyclic structure of the holonomy: the chosen generator label and the
/// discrete logarithm of every label with respect to it.
struct CyclicIndex {
    order: i64,
    dlog: Vec<i64>,
    labels: Vec<usize>,
}

fn cyclic_index(h: &HolonomyGroup) -> Result<CyclicIndex> {
    let h0 = h.cyclic_generator().ok_or_else(|| {
        Error::NonCyclicHolonomy(format!(
            "no element of order {} in the holonomy group",
            h.order()
        ))
    })?;
    let m = h.order();
    let mut labels = vec![0usize; m];
    let mut dlog = vec![-1i64; m];
    let mut cur = h.identity();
    for j in 0..m {
        labels[j] = cur;
        dlog[cur] = j as i64;
        cur = h.mul(cur, h0);
    }
    if dlog.iter().any(|&d| d < 0) {
        return Err(Error::NonCyclicHolonomy("generator does not reach every label".into()));
    }
    Ok(CyclicIndex { order: m as i64, dlog, labels })
}

fn solve_covector(f: &[i64], rhs: i64) -> Option<Vec<i64>> {
    linalg::solve(&IntMat::from_rows(&[f.to_vec()]), &[rhs])
}

fn internal(msg: impl Into<String>) -> Error {
    Error::CertificateInvalid(msg.into())
}

fn base_certificate(group: &CrystGroup) -> Result<CyclicCertificate> {
    let m = group.holonomy.order() as i64;
    let t = group.lattice_element(&[1]);
    if m == 1 {
        return Ok(CyclicCertificate::Base { m: 1, n: 1, x: t.clone(), t });
    }
    let idx = cyclic_index(&group.holonomy)?;
    let h0 = idx.labels[1];
    if !group.lin(h0).is_identity() {
        // a rank-1 torsion-free group cannot invert the lattice
        return Err(internal("rank-1 holonomy acts nontrivially on a torsion-free group"));
    }
    let x = group.canonical_lift(h0);
    let xm = group.pow(&x, m)?;
    let n_raw = group.lattice_coords(&xm)[0];
    if n_raw == 0 {
        return Err(internal("rank-1 lift has finite order"));
    }
    let l = linalg::gcd(m, n_raw);
    let (mp, np) = (m / l, n_raw / l);
    if group.pow(&x, mp)? != group.pow(&t, np)? {
        return Err(internal("reduced rank-1 relation fails in the group"));
    }
    Ok(CyclicCertificate::Base { m: mp, n: np, x, t })
}

/// Realization data shared by the certificate constructor and verifier.
struct StepData<'a> {
    group: &'a CrystGroup,
    phi: &'a PhiData,
    basis: &'a [Vec<i64>],
    lift: &'a GroupElement,
    sub: &'a CrystGroup,
}

impl<'a> StepData<'a> {
    /// Embed a kernel-group element into the ambient group:
    /// `(u, k) -> (B (u - a'_k), e) * hstar^k`.
    fn embed(&self, el: &GroupElement) -> Result<GroupElement> {
        let k = el.h as i64;
        let offset = self.sub.lattice_offset(el);
        let mut ambient = vec![0i64; self.group.rank];
        for (col, &u) in self.basis.iter().zip(&offset) {
            for (amb, &c) in ambient.iter_mut().zip(col) {
                *amb += c * u;
            }
        }
        let lat = self.group.lattice_element(&ambient);
        self.group.mul(&lat, &self.group.pow(self.lift, k)?)
    }

    /// Invert [`StepData::embed`] when possible.
    fn invert(&self, g: &GroupElement) -> Option<GroupElement> {
        if self.phi.eval(self.group, g) != 0 {
            return None;
        }
        let a = self.sub.holonomy.order();
        let k = (0..a).find(|&k| {
            self.group.pow(self.lift, k as i64).map(|p| p.h) == Ok(g.h)
        })?;
        let w = self
            .group
            .mul(g, &self.group.inv(&self.group.pow(self.lift, k as i64).ok()?).ok()?)
            .ok()?;
        if w.h != self.group.holonomy.identity() {
            return None;
        }
        let coords = self.group.lattice_coords(&w);
        let cols: Vec<Vec<i64>> = (0..self.basis.len())
            .map(|j| self.basis[j].clone())
            .collect();
        let bmat = transpose_columns(&cols, self.group.rank);
        let u = linalg::solve(&bmat, &coords)?;
        let v: Vec<crate::Rat> = self
            .sub
            .trans(k)
            .iter()
            .zip(&u)
            .map(|(t, &c)| t + rat_int(c))
            .collect();
        let el = GroupElement { v, h: k };
        debug_assert_eq!(self.embed(&el).ok().as_ref(), Some(g));
        Some(el)
    }
}

fn transpose_columns(cols: &[Vec<i64>], rows: usize) -> IntMat {
    let mut m = IntMat::zero(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    m
}

/// Produce a recursive certificate for a torsion-free group with cyclic
/// holonomy. Fails with [`Error::NotTorsionFree`] or
/// [`Error::NonCyclicHolonomy`] on invalid input and with
/// [`Error::CertificateInvalid`] if any internal invariant breaks.
pub fn certify_cyclic(group: &CrystGroup) -> Result<CyclicCertificate> {
    if let Some(w) = group.torsion_witness() {
        return Err(Error::NotTorsionFree(group.render_element(&w)));
    }
    if !group.holonomy.is_cyclic() {
        return Err(Error::NonCyclicHolonomy(format!(
            "no element of order {} in the holonomy group",
            group.holonomy.order()
        )));
    }
    if group.rank == 1 {
        return base_certificate(group);
    }
    let phi = build_phi(group)?;
    let idx = cyclic_index(&group.holonomy)?;
    let m = idx.order;
    // values on the powers of the generator
    let c: Vec<i64> = (0..m)
        .map(|j| phi.lift_values[idx.labels[j as usize]])
        .collect();
    let f = &phi.lattice;
    let gcd_f = linalg::gcd_all(f.iter().copied());
    if gcd_f == 0 {
        return Err(internal("phi vanishes on the lattice"));
    }
    let j_set: Vec<i64> = (0..m).filter(|&j| c[j as usize] % gcd_f == 0).collect();
    for &j1 in &j_set {
        for &j2 in &j_set {
            if !j_set.contains(&((j1 + j2) % m)) {
                return Err(internal("kernel image is not a subgroup"));
            }
        }
    }
    let a = j_set.len() as i64;
    let b = m / a;

    // an element with phi = 1
    let gp = (0..m)
        .find_map(|j| {
            let rhs = 1 - c[j as usize];
            if rhs % gcd_f != 0 {
                return None;
            }
            let w = solve_covector(f, rhs)?;
            let label = idx.labels[j as usize];
            let v: Vec<crate::Rat> = group
                .trans(label)
                .iter()
                .zip(&w)
                .map(|(t, &x)| t + rat_int(x))
                .collect();
            Some(GroupElement { v, h: label })
        })
        .ok_or_else(|| internal("phi is not surjective"))?;
    debug_assert_eq!(phi.eval(group, &gp), 1);

    // correct it so the holonomy label generates
    let lift_kernel_label = |j: i64| -> Result<GroupElement> {
        let rhs = -c[j as usize];
        let w = solve_covector(f, rhs)
            .ok_or_else(|| internal("kernel label has no phi-zero lift"))?;
        let label = idx.labels[j as usize];
        let v: Vec<crate::Rat> =
            group.trans(label).iter().zip(&w).map(|(t, &x)| t + rat_int(x)).collect();
        Ok(GroupElement { v, h: label })
    };
    let g = if a == 1 {
        gp
    } else {
        let target = if b == 1 {
            1
        } else {
            gen_lift(a as u64, b as u64, 1)? as i64
        };
        let delta = (idx.dlog[gp.h] - target).rem_euclid(m);
        if !j_set.contains(&delta) {
            return Err(internal("correction defect escapes the kernel image"));
        }
        let h_el = lift_kernel_label(delta)?;
        group.mul(&gp, &group.inv(&h_el)?)?
    };
    if phi.eval(group, &g) != 1 || group.holonomy.element_order(g.h) as i64 != m {
        return Err(internal("constructed generator fails its defining properties"));
    }

    // kernel lattice and holonomy lift
    let f_mat = IntMat::from_rows(&[f.clone()]);
    let basis = linalg::kernel_basis(&f_mat);
    if basis.len() != group.rank - 1 {
        return Err(internal("kernel lattice has unexpected rank"));
    }
    let j_star = j_set
        .iter()
        .copied()
        .find(|&j| j != 0 && m / linalg::gcd(j, m) == a)
        .unwrap_or(0);
    let hstar =
        if j_star == 0 { group.identity() } else { lift_kernel_label(j_star)? };
    let wstar = group.pow(&hstar, a)?;
    if wstar.h != group.holonomy.identity() {
        return Err(internal("kernel lift power is not a translation"));
    }
    let wstar_coords = group.lattice_coords(&wstar);
    let bmat = transpose_columns(&basis, group.rank);
    let c_coords = linalg::solve(&bmat, &wstar_coords)
        .ok_or_else(|| internal("kernel lift power lies outside the kernel lattice"))?;
    // conjugation action restricted to the kernel lattice
    let alin = group.lin(hstar.h);
    let mut cols = Vec::new();
    for col in &basis {
        let image = alin.mul_vec(col);
        let sol = linalg::solve(&bmat, &image)
            .ok_or_else(|| internal("kernel lattice is not invariant"))?;
        cols.push(sol);
    }
    let a_restricted = transpose_columns(&cols, group.rank - 1);
    let sub_rank = group.rank - 1;
    let sub_holonomy = HolonomyGroup::cyclic(a as usize);
    let mut sub_lin = Vec::new();
    let mut sub_trans = Vec::new();
    for k in 0..a {
        sub_lin.push(a_restricted.pow(k as usize));
        sub_trans.push(
            c_coords.iter().map(|&x| rat(k * x, a)).collect::<Vec<crate::Rat>>(),
        );
    }
    let mut sub_gens = BTreeMap::new();
    for i in 0..sub_rank {
        let mut v = vec![rat_int(0); sub_rank];
        v[i] = rat_int(1);
        sub_gens.insert(format!("t{}", i + 1), GroupElement { v, h: 0 });
    }
    if a > 1 {
        sub_gens.insert(
            "s".to_string(),
            GroupElement {
                v: c_coords.iter().map(|&x| rat(x, a)).collect(),
                h: 1,
            },
        );
    }
    let sub_group = CrystGroup::new(sub_rank, sub_holonomy, sub_lin, sub_trans, sub_gens)
        .map_err(|e| internal(format!("kernel realization invalid: {e}")))?;
    if !sub_group.is_torsion_free() {
        return Err(internal("kernel realization has torsion"));
    }
    let sub = certify_cyclic(&sub_group)?;
    Ok(CyclicCertificate::Step {
        phi,
        m,
        a,
        b,
        g,
        kernel_basis: basis,
        kernel_lift: hstar,
        sub_group,
        grid: GridSpec::default(),
        sub: Box::new(sub),
    })
}

/// One named check of a certificate verification.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Verification report: every invariant of the certificate, re-checked
/// against the group.
#[derive(Debug, Clone)]
pub struct CertReport {
    pub checks: Vec<CheckItem>,
}

impl CertReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

pub fn verify_certificate(group: &CrystGroup, cert: &CyclicCertificate) -> CertReport {
    let mut checks = Vec::new();
    verify_inner(group, cert, "", &mut checks);
    CertReport { checks }
}

fn push(checks: &mut Vec<CheckItem>, prefix: &str, name: &str, pass: bool, detail: String) {
    checks.push(CheckItem { name: format!("{prefix}{name}"), pass, detail });
}

fn verify_inner(
    group: &CrystGroup,
    cert: &CyclicCertificate,
    prefix: &str,
    checks: &mut Vec<CheckItem>,
) {
    match cert {
        CyclicCertificate::Base { m, n, x, t } => {
            verify_base(group, *m, *n, x, t, prefix, checks)
        }
        CyclicCertificate::Step {
            phi,
            m,
            a,
            b,
            g,
            kernel_basis,
            kernel_lift,
            sub_group,
            grid,
            sub,
        } => {
            verify_step(
                group,
                phi,
                *m,
                *a,
                *b,
                g,
                kernel_basis,
                kernel_lift,
                sub_group,
                *grid,
                prefix,
                checks,
            );
            verify_inner(sub_group, sub, &format!("{prefix}sub."), checks);
        }
    }
}

fn verify_base(
    group: &CrystGroup,
    m: i64,
    n: i64,
    x: &GroupElement,
    t: &GroupElement,
    prefix: &str,
    checks: &mut Vec<CheckItem>,
) {
    push(checks, prefix, "base.rank", group.rank == 1, format!("rank {}", group.rank));
    push(
        checks,
        prefix,
        "base.torsion_free",
        group.is_torsion_free(),
        "no torsion witness".into(),
    );
    let gcd_ok = m >= 1 && linalg::gcd(m, n) == 1;
    push(checks, prefix, "base.gcd", gcd_ok, format!("gcd({m}, {n})"));
    let membership = group.contains(x)
        && group.contains(t)
        && t.h == group.holonomy.identity()
        && group.rank == 1
        && group.lattice_coords(t)[0].abs() == 1;
    push(checks, prefix, "base.membership", membership, "x, t in G; t unit".into());
    if !membership || !gcd_ok {
        return;
    }
    let relation = match (group.pow(x, m), group.pow(t, n)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    push(checks, prefix, "base.relation", relation, format!("x^{m} = t^{n}"));
    // alpha(k, l) = k n + l m must be well-defined and injective on a window
    // of exponents, and attain every small integer
    let w = 3 * (m.abs() + n.abs()) + 1;
    let mut by_element: BTreeMap<GroupElement, i64> = BTreeMap::new();
    let mut by_value: BTreeMap<i64, GroupElement> = BTreeMap::new();
    let mut coherent = true;
    for k in -w..=w {
        for l in -w..=w {
            let el = match (group.pow(x, k), group.pow(t, l)) {
                (Ok(a), Ok(b)) => match group.mul(&a, &b) {
                    Ok(p) => p,
                    Err(_) => {
                        coherent = false;
                        continue;
                    }
                },
                _ => {
                    coherent = false;
                    continue;
                }
            };
            let alpha = k * n + l * m;
            if let Some(prev) = by_element.insert(el.clone(), alpha) {
                if prev != alpha {
                    coherent = false;
                }
            }
            if let Some(prev) = by_value.insert(alpha, el.clone()) {
                if prev != el {
                    coherent = false;
                }
            }
        }
    }
    push(
        checks,
        prefix,
        "base.alpha_bijective_window",
        coherent,
        format!("window {w}"),
    );
    let surjective = (-3..=3).all(|v| by_value.contains_key(&v));
    push(
        checks,
        prefix,
        "base.alpha_hits_small_integers",
        surjective,
        "values -3..=3 attained".into(),
    );
}

#[allow(clippy::too_many_arguments)]
fn verify_step(
    group: &CrystGroup,
    phi: &PhiData,
    m: i64,
    a: i64,
    b: i64,
    g: &GroupElement,
    kernel_basis: &[Vec<i64>],
    kernel_lift: &GroupElement,
    sub_group: &CrystGroup,
    grid: GridSpec,
    prefix: &str,
    checks: &mut Vec<CheckItem>,
) {
    push(
        checks,
        prefix,
        "torsion_free",
        group.is_torsion_free(),
        "no torsion witness".into(),
    );
    let idx = match cyclic_index(&group.holonomy) {
        Ok(i) => i,
        Err(e) => {
            push(checks, prefix, "cyclic_holonomy", false, e.to_string());
            return;
        }
    };
    push(
        checks,
        prefix,
        "cyclic_holonomy",
        idx.order == m,
        format!("order {} vs m = {m}", idx.order),
    );

    // phi is a homomorphism on a generating set and surjective
    let mut test_elements: Vec<GroupElement> =
        (0..group.rank).map(|i| group.lattice_basis_element(i)).collect();
    for h in 0..group.holonomy.order() {
        test_elements.push(group.canonical_lift(h));
    }
    test_elements.extend(group.generators().values().cloned());
    test_elements.push(g.clone());
    let mut hom = phi.lattice.len() == group.rank
        && phi.lift_values.len() == group.holonomy.order();
    if hom {
        'outer: for p in &test_elements {
            for q in &test_elements {
                let Ok(pq) = group.mul(p, q) else {
                    hom = false;
                    break 'outer;
                };
                if phi.eval(group, &pq) != phi.eval(group, p) + phi.eval(group, q) {
                    hom = false;
                    break 'outer;
                }
            }
        }
    }
    push(checks, prefix, "phi.homomorphism", hom, "checked on generator pairs".into());
    if !hom {
        return;
    }
    let content = linalg::gcd_all(
        phi.lattice
            .iter()
            .copied()
            .chain(phi.lift_values.iter().copied()),
    );
    push(checks, prefix, "phi.surjective", content == 1, format!("content {content}"));
    let gens_match = phi
        .generator_values
        .iter()
        .all(|(name, &v)| group.generator(name).map(|g| phi.eval(group, g) == v) == Ok(true));
    push(checks, prefix, "phi.generator_values", gens_match, "stored values".into());

    // a, b and the kernel image
    let c: Vec<i64> = (0..m)
        .map(|j| phi.lift_values[idx.labels[j as usize]])
        .collect();
    let gcd_f = linalg::gcd_all(phi.lattice.iter().copied());
    let j_set: Vec<i64> = if gcd_f == 0 {
        Vec::new()
    } else {
        (0..m).filter(|&j| c[j as usize] % gcd_f == 0).collect()
    };
    push(
        checks,
        prefix,
        "split.ab",
        a * b == m && a == j_set.len() as i64 && a >= 1 && b >= 1,
        format!("a = {a}, b = {b}, image order {}", j_set.len()),
    );

    // the distinguished element g
    let g_ok = group.contains(g)
        && phi.eval(group, g) == 1
        && group.holonomy.element_order(g.h) as i64 == m;
    push(
        checks,
        prefix,
        "generator.g",
        g_ok,
        format!(
            "phi(g) = {}, order of pi(g) = {}",
            phi.eval(group, g),
            group.holonomy.element_order(g.h)
        ),
    );

    // kernel lattice basis spans ker(f) as a direct summand
    let bmat = transpose_columns(kernel_basis, group.rank);
    let mut basis_ok = kernel_basis.len() == group.rank - 1
        && kernel_basis.iter().all(|col| {
            col.len() == group.rank
                && col.iter().zip(&phi.lattice).map(|(x, f)| x * f).sum::<i64>() == 0
        });
    if basis_ok && group.rank > 1 {
        let snf = linalg::smith_normal_form(&bmat);
        basis_ok = snf.rank() == group.rank - 1
            && snf.diagonal().iter().take(group.rank - 1).all(|&d| d == 1);
    }
    push(checks, prefix, "kernel.basis", basis_ok, "primitive basis of ker(phi)|_N".into());

    // the kernel lift and the realization of the kernel group
    let lift_ok = group.contains(kernel_lift)
        && phi.eval(group, kernel_lift) == 0
        && group.holonomy.element_order(kernel_lift.h) as i64 == a;
    push(checks, prefix, "kernel.lift", lift_ok, "phi = 0, holonomy order a".into());
    let shape_ok = sub_group.rank + 1 == group.rank
        && sub_group.holonomy.order() as i64 == a
        && sub_group.holonomy.is_cyclic()
        && sub_group.is_torsion_free();
    push(checks, prefix, "kernel.group_shape", shape_ok, "rank n-1, holonomy Z/a".into());
    if !(basis_ok && lift_ok && shape_ok && g_ok) {
        return;
    }
    let power_ok = (|| {
        let wstar = group.pow(kernel_lift, a).ok()?;
        if wstar.h != group.holonomy.identity() {
            return None;
        }
        let coords = group.lattice_coords(&wstar);
        let u = linalg::solve(&bmat, &coords)?;
        // the sub-group translations must interpolate this vector
        let expected: Vec<crate::Rat> = u.iter().map(|&x| rat(x, a)).collect();
        if a > 1 && sub_group.trans(1) != expected.as_slice() {
            return None;
        }
        if a > 1 {
            // conjugation action matches the stored linear part
            let alin = group.lin(kernel_lift.h);
            for (j, col) in kernel_basis.iter().enumerate() {
                let image = alin.mul_vec(col);
                let sol = linalg::solve(&bmat, &image)?;
                if sol != sub_group.lin(1).col(j) {
                    return None;
                }
            }
        }
        Some(())
    })()
    .is_some();
    push(
        checks,
        prefix,
        "kernel.realization",
        power_ok,
        "lift power and conjugation action match".into(),
    );

    let data = StepData {
        group,
        phi,
        basis: kernel_basis,
        lift: kernel_lift,
        sub: sub_group,
    };

    // grid of kernel-group elements
    let wnd = grid.element_window;
    let mut sub_elements = Vec::new();
    let sub_rank = sub_group.rank;
    let mut coords = vec![-wnd; sub_rank];
    'grid: loop {
        for k in 0..sub_group.holonomy.order() {
            let v: Vec<crate::Rat> = sub_group
                .trans(k)
                .iter()
                .zip(&coords)
                .map(|(t, &c)| t + rat_int(c))
                .collect();
            sub_elements.push(GroupElement { v, h: k });
        }
        let mut i = 0;
        loop {
            if i == sub_rank {
                break 'grid;
            }
            coords[i] += 1;
            if coords[i] <= wnd {
                break;
            }
            coords[i] = -wnd;
            i += 1;
        }
    }
    let mut embed_ok = true;
    let mut seen = BTreeMap::new();
    for el in &sub_elements {
        match data.embed(el) {
            Ok(image) => {
                if data.phi.eval(group, &image) != 0 {
                    embed_ok = false;
                }
                if seen.insert(image, el.clone()).is_some() {
                    embed_ok = false;
                }
            }
            Err(_) => embed_ok = false,
        }
    }
    push(
        checks,
        prefix,
        "embedding.injective_into_kernel",
        embed_ok,
        format!("{} grid elements", sub_elements.len()),
    );
    // homomorphism on a smaller grid (the grid grows quadratically)
    let small: Vec<&GroupElement> =
        sub_elements.iter().take(5 * sub_group.holonomy.order().max(2)).collect();
    let mut embed_hom = true;
    for p in &small {
        for q in &small {
            let lhs = sub_group
                .mul(p, q)
                .ok()
                .and_then(|pq| data.embed(&pq).ok());
            let rhs = match (data.embed(p), data.embed(q)) {
                (Ok(ep), Ok(eq)) => group.mul(&ep, &eq).ok(),
                _ => None,
            };
            if lhs.is_none() || lhs != rhs {
                embed_hom = false;
            }
        }
    }
    push(
        checks,
        prefix,
        "embedding.homomorphism",
        embed_hom,
        format!("{} element pairs", small.len() * small.len()),
    );

    // psi(h, k) = embed(h) g^{mk}: central power, injectivity, surjectivity
    let gm = match group.pow(g, m) {
        Ok(p) => p,
        Err(_) => {
            push(checks, prefix, "psi.central_power", false, "g^m failed".into());
            return;
        }
    };
    let central = sub_elements.iter().take(24).all(|el| {
        data.embed(el).ok().is_some_and(|e| {
            group.mul(&e, &gm).ok() == group.mul(&gm, &e).ok()
        })
    });
    push(checks, prefix, "psi.central_power", central, "g^m commutes".into());
    let mut psi_images = BTreeMap::new();
    let mut psi_inj = true;
    for el in sub_elements.iter().take(49) {
        for k in -grid.power_window..=grid.power_window {
            let image = data
                .embed(el)
                .ok()
                .and_then(|e| group.pow(&gm, k).ok().map(|p| (e, p)))
                .and_then(|(e, p)| group.mul(&e, &p).ok());
            match image {
                Some(im) => {
                    if psi_images.insert(im, (el.clone(), k)).is_some() {
                        psi_inj = false;
                    }
                }
                None => psi_inj = false,
            }
        }
    }
    push(
        checks,
        prefix,
        "psi.injective_on_grid",
        psi_inj,
        format!("{} pairs", psi_images.len()),
    );

    // generators of ker(phi mod m) are in the image of psi
    let mut gprime_gens: Vec<GroupElement> = Vec::new();
    let f_mat = IntMat::from_rows(&[phi.lattice.clone()]);
    let snf = linalg::smith_normal_form(&f_mat);
    let d = snf.d[(0, 0)];
    for j in 0..group.rank {
        let col = snf.v.col(j);
        let scale = if j == 0 { m / linalg::gcd(d, m) } else { 1 };
        let scaled: Vec<i64> = col.iter().map(|&x| x * scale).collect();
        gprime_gens.push(group.lattice_element(&scaled));
    }
    let g_mod = linalg::gcd(gcd_f, m);
    let jp_set: Vec<i64> = (0..m).filter(|&j| c[j as usize] % g_mod == 0).collect();
    let ap = jp_set.len() as i64;
    if ap > 1 {
        if let Some(jp) = jp_set
            .iter()
            .copied()
            .find(|&j| j != 0 && m / linalg::gcd(j, m) == ap)
        {
            // solve f w + m s = -c[jp]
            let mut row = phi.lattice.clone();
            row.push(m);
            if let Some(sol) =
                linalg::solve(&IntMat::from_rows(&[row]), &[-c[jp as usize]])
            {
                let label = idx.labels[jp as usize];
                let v: Vec<crate::Rat> = group
                    .trans(label)
                    .iter()
                    .zip(&sol)
                    .map(|(t, &x)| t + rat_int(x))
                    .collect();
                gprime_gens.push(GroupElement { v, h: label });
            }
        }
    }
    let surj = gprime_gens.iter().all(|gamma| {
        let val = phi.eval(group, gamma);
        if val % m != 0 {
            return false;
        }
        let k = val / m;
        let delta = group
            .pow(&gm, -k)
            .ok()
            .and_then(|p| group.mul(gamma, &p).ok());
        match delta {
            Some(d) => data.invert(&d).is_some(),
            None => false,
        }
    });
    push(
        checks,
        prefix,
        "psi.surjective_on_generators",
        surj,
        format!("{} generators of ker(phi mod m)", gprime_gens.len()),
    );
}
