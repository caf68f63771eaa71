//! Serde-facing document types. Rationals are serialized as `"p/q"` strings
//! throughout to keep exactness on the wire.

use crate::algebra::{GaussRat, GroupAlgebraElement};
use crate::certify::{CertReport, CyclicCertificate, PhiData};
use crate::character::Character;
use crate::group::{CrystGroup, GroupElement};
use crate::holonomy::HolonomyGroup;
use crate::induction::{MonMat, Rep};
use crate::limits::{QuotientCharacter, ShieldedReport, StratumRecord, Verdict};
use crate::linalg::IntMat;
use crate::monomial::{Monomial, SymbolTable};
use crate::text::{parse_rational, render_entry, render_rational};
use crate::{Error, Rat, Result};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HolonomyConfig {
    pub labels: Vec<String>,
    pub mult: Vec<Vec<String>>,
    pub identity: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub v: Vec<String>,
    pub h: String,
}

/// The group-definition document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupConfig {
    pub rank: usize,
    pub holonomy: HolonomyConfig,
    #[serde(default)]
    pub lin: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default)]
    pub trans: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub generators: BTreeMap<String, GeneratorConfig>,
}

/// Validate a group-definition document and build the group.
///
/// A missing linear part is accepted only for the identity label (it
/// defaults to the identity matrix); a missing translation defaults to the
/// zero vector.
pub fn build_group(config: &GroupConfig) -> Result<CrystGroup> {
    let labels = config.holonomy.labels.clone();
    let lookup = |name: &str| -> Result<usize> {
        labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::MalformedConfig(format!("unknown label '{name}'")))
    };
    let mut mult = Vec::new();
    if config.holonomy.mult.len() != labels.len() {
        return Err(Error::BadTable("multiplication table is not square".into()));
    }
    for row in &config.holonomy.mult {
        let mut r = Vec::new();
        for entry in row {
            r.push(lookup(entry)?);
        }
        mult.push(r);
    }
    let identity = lookup(&config.holonomy.identity)?;
    let holonomy = HolonomyGroup::new(labels.clone(), mult, identity)?;

    let mut lin = Vec::new();
    let mut trans = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        match config.lin.get(label) {
            Some(rows) => {
                if rows.len() != config.rank || rows.iter().any(|r| r.len() != config.rank)
                {
                    return Err(Error::MalformedConfig(format!(
                        "linear part for '{label}' is not {0}x{0}",
                        config.rank
                    )));
                }
                lin.push(IntMat::from_rows(rows));
            }
            None if i == identity => lin.push(IntMat::identity(config.rank)),
            None => {
                return Err(Error::MalformedConfig(format!(
                    "missing linear part for label '{label}'"
                )))
            }
        }
        match config.trans.get(label) {
            Some(coords) => {
                if coords.len() != config.rank {
                    return Err(Error::MalformedConfig(format!(
                        "translation for '{label}' has wrong length"
                    )));
                }
                let v: Result<Vec<Rat>> = coords.iter().map(|s| parse_rational(s)).collect();
                trans.push(v?);
            }
            None => trans.push(vec![Rat::zero(); config.rank]),
        }
    }
    let mut generators = BTreeMap::new();
    for (name, gc) in &config.generators {
        let v: Result<Vec<Rat>> = gc.v.iter().map(|s| parse_rational(s)).collect();
        generators.insert(name.clone(), GroupElement { v: v?, h: lookup(&gc.h)? });
    }
    CrystGroup::new(config.rank, holonomy, lin, trans, generators)
}

pub fn group_from_json(s: &str) -> Result<CrystGroup> {
    let config: GroupConfig = serde_json::from_str(s)
        .map_err(|e| Error::MalformedConfig(format!("invalid JSON: {e}")))?;
    build_group(&config)
}

pub fn group_to_config(group: &CrystGroup) -> GroupConfig {
    let h = &group.holonomy;
    let labels: Vec<String> = h.labels().to_vec();
    let mult = (0..h.order())
        .map(|a| (0..h.order()).map(|b| labels[h.mul(a, b)].clone()).collect())
        .collect();
    let lin = (0..h.order())
        .map(|i| {
            let m = group.lin(i);
            (
                labels[i].clone(),
                (0..m.rows).map(|r| m.row(r).to_vec()).collect::<Vec<_>>(),
            )
        })
        .collect();
    let trans = (0..h.order())
        .map(|i| {
            (
                labels[i].clone(),
                group.trans(i).iter().map(render_rational).collect::<Vec<_>>(),
            )
        })
        .collect();
    let generators = group
        .generators()
        .iter()
        .map(|(name, g)| (name.clone(), element_to_dto(group, g)))
        .map(|(name, dto)| (name, GeneratorConfig { v: dto.v, h: dto.h }))
        .collect();
    GroupConfig {
        rank: group.rank,
        holonomy: HolonomyConfig {
            labels,
            mult,
            identity: h.label(h.identity()).to_string(),
        },
        lin,
        trans,
        generators,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementDto {
    pub v: Vec<String>,
    pub h: String,
}

pub fn element_to_dto(group: &CrystGroup, g: &GroupElement) -> ElementDto {
    ElementDto {
        v: g.v.iter().map(render_rational).collect(),
        h: group.holonomy.label(g.h).to_string(),
    }
}

pub fn element_from_dto(group: &CrystGroup, dto: &ElementDto) -> Result<GroupElement> {
    let h = group
        .holonomy
        .lookup(&dto.h)
        .ok_or_else(|| Error::MalformedConfig(format!("unknown label '{}'", dto.h)))?;
    let v: Result<Vec<Rat>> = dto.v.iter().map(|s| parse_rational(s)).collect();
    Ok(GroupElement { v: v?, h })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomialDto {
    pub angle: String,
    #[serde(default)]
    pub exponents: BTreeMap<String, i64>,
}

pub fn monomial_to_dto(m: &Monomial, table: &SymbolTable) -> MonomialDto {
    MonomialDto {
        angle: render_rational(m.angle()),
        exponents: m
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (table.name(i).to_string(), e))
            .collect(),
    }
}

/// Characters serialize as arrays of monomials.
pub fn character_to_dto(chi: &Character) -> Vec<MonomialDto> {
    chi.coords.iter().map(|c| monomial_to_dto(c, &chi.symbols)).collect()
}

pub fn character_from_dto(coords: &[MonomialDto]) -> Result<Character> {
    let mut names: Vec<String> = Vec::new();
    for c in coords {
        for name in c.exponents.keys() {
            if !names.contains(name) {
                names.push(name.clone());
            }
        }
    }
    names.sort();
    let table = SymbolTable::new(names.clone());
    let mut out = Vec::new();
    for c in coords {
        let mut exps = vec![0i64; table.len()];
        for (name, &e) in &c.exponents {
            exps[table.index(name).expect("collected")] = e;
        }
        out.push(Monomial::with_parts(parse_rational(&c.angle)?, exps));
    }
    Ok(Character::new(table, out))
}

fn matrix_to_dto(m: &MonMat, table: &SymbolTable) -> Vec<Vec<Option<MonomialDto>>> {
    (0..m.dim)
        .map(|i| {
            (0..m.dim)
                .map(|j| m.entry(i, j).map(|e| monomial_to_dto(e, table)))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RepDto {
    pub dim: usize,
    pub symbols: Vec<String>,
    /// Substitutions introduced by root extraction, e.g. `u = a^2`.
    pub substitutions: BTreeMap<String, String>,
    pub transversal: Vec<ElementDto>,
    pub matrices: BTreeMap<String, Vec<Vec<Option<MonomialDto>>>>,
    /// Pretty form of the matrices for human diffing.
    pub rendered: BTreeMap<String, Vec<Vec<String>>>,
}

pub fn rep_to_dto(group: &CrystGroup, rep: &Rep) -> RepDto {
    RepDto {
        dim: rep.dim,
        symbols: rep.symbols.names().to_vec(),
        substitutions: rep
            .sigma
            .substitutions
            .iter()
            .map(|(name, m)| (name.clone(), render_entry(Some(m), &rep.symbols)))
            .collect(),
        transversal: rep.transversal.iter().map(|g| element_to_dto(group, g)).collect(),
        matrices: rep
            .matrices
            .iter()
            .map(|(name, m)| (name.clone(), matrix_to_dto(m, &rep.symbols)))
            .collect(),
        rendered: rep
            .matrices
            .iter()
            .map(|(name, m)| (name.clone(), crate::text::render_matrix(m, &rep.symbols)))
            .collect(),
    }
}

/// Group-algebra elements serialize as coefficient/element term lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDto {
    pub coeff: [String; 2],
    pub element: ElementDto,
}

pub fn algebra_element_to_dto(
    group: &CrystGroup,
    x: &GroupAlgebraElement,
) -> Vec<TermDto> {
    x.terms()
        .iter()
        .map(|(g, c)| TermDto {
            coeff: [render_rational(&c.re), render_rational(&c.im)],
            element: element_to_dto(group, g),
        })
        .collect()
}

pub fn algebra_element_from_dto(
    group: &CrystGroup,
    terms: &[TermDto],
) -> Result<GroupAlgebraElement> {
    let mut pairs = Vec::new();
    for t in terms {
        let g = element_from_dto(group, &t.element)?;
        let c = GaussRat::new(parse_rational(&t.coeff[0])?, parse_rational(&t.coeff[1])?);
        pairs.push((g, c));
    }
    Ok(GroupAlgebraElement::from_terms(pairs))
}

/// Root of unity rendered as `1`, `-1` or `e(p/q)`.
pub fn render_root(angle: &Rat) -> String {
    if angle.is_zero() {
        "1".to_string()
    } else if *angle == crate::rat(1, 2) {
        "-1".to_string()
    } else {
        format!("e({})", render_rational(angle))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuotientCharacterDto {
    /// Value per holonomy label.
    pub values: BTreeMap<String, String>,
}

pub fn quotient_character_to_dto(
    group: &CrystGroup,
    eta: &QuotientCharacter,
) -> QuotientCharacterDto {
    QuotientCharacterDto {
        values: eta
            .values
            .iter()
            .enumerate()
            .map(|(h, angle)| (group.holonomy.label(h).to_string(), render_root(angle)))
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionEntryDto {
    pub character: QuotientCharacterDto,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StratumRecordDto {
    pub stratum: String,
    pub orbit_length: usize,
    pub dim: usize,
    pub transversal: Vec<ElementDto>,
    pub limit: BTreeMap<String, Vec<Vec<String>>>,
    pub decomposition: Vec<DecompositionEntryDto>,
    pub witness: Option<QuotientCharacterDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn stratum_record_to_dto(group: &CrystGroup, rec: &StratumRecord) -> StratumRecordDto {
    let empty = SymbolTable::empty();
    StratumRecordDto {
        stratum: rec.name.clone(),
        orbit_length: rec.orbit_len,
        dim: rec.dim,
        transversal: rec
            .transversal
            .iter()
            .map(|g| element_to_dto(group, g))
            .collect(),
        limit: rec
            .limit_matrices
            .iter()
            .map(|(name, m)| (name.clone(), crate::text::render_matrix(m, &empty)))
            .collect(),
        decomposition: rec
            .decomposition
            .iter()
            .map(|(eta, mult)| DecompositionEntryDto {
                character: quotient_character_to_dto(group, eta),
                multiplicity: *mult,
            })
            .collect(),
        witness: rec.witness.as_ref().map(|eta| quotient_character_to_dto(group, eta)),
        error: rec.error.clone(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShieldedReportDto {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub fixed_point_isolation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_set: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_reason: Option<String>,
    pub strata: Vec<StratumRecordDto>,
}

pub fn shielded_report_to_dto(group: &CrystGroup, report: &ShieldedReport) -> ShieldedReportDto {
    let (verdict, reason) = match &report.verdict {
        Verdict::Shielded => ("shielded".to_string(), None),
        Verdict::NotCertified { reason } => {
            ("not-certified".to_string(), Some(reason.clone()))
        }
    };
    ShieldedReportDto {
        verdict,
        reason,
        fixed_point_isolation: report.fixed_point_isolation,
        fixed_set: report
            .fixed_set
            .as_ref()
            .map(|set| set.iter().map(crate::text::render_character).collect()),
        fixed_reason: report.fixed_reason.clone(),
        strata: report
            .strata
            .iter()
            .map(|r| stratum_record_to_dto(group, r))
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiDto {
    pub lattice: Vec<i64>,
    pub lifts: BTreeMap<String, i64>,
    pub generators: BTreeMap<String, i64>,
}

fn phi_to_dto(group: &CrystGroup, phi: &PhiData) -> PhiDto {
    PhiDto {
        lattice: phi.lattice.clone(),
        lifts: phi
            .lift_values
            .iter()
            .enumerate()
            .map(|(h, &v)| (group.holonomy.label(h).to_string(), v))
            .collect(),
        generators: phi.generator_values.clone(),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateDto {
    Base {
        m: i64,
        n: i64,
        x: ElementDto,
        t: ElementDto,
    },
    Step {
        phi: PhiDto,
        m: i64,
        a: i64,
        b: i64,
        g: ElementDto,
        kernel_basis: Vec<Vec<i64>>,
        kernel_lift: ElementDto,
        sub_group: GroupConfig,
        grid: [i64; 2],
        sub: Box<CertificateDto>,
    },
}

pub fn certificate_to_dto(group: &CrystGroup, cert: &CyclicCertificate) -> CertificateDto {
    match cert {
        CyclicCertificate::Base { m, n, x, t } => CertificateDto::Base {
            m: *m,
            n: *n,
            x: element_to_dto(group, x),
            t: element_to_dto(group, t),
        },
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
        } => CertificateDto::Step {
            phi: phi_to_dto(group, phi),
            m: *m,
            a: *a,
            b: *b,
            g: element_to_dto(group, g),
            kernel_basis: kernel_basis.clone(),
            kernel_lift: element_to_dto(group, kernel_lift),
            sub_group: group_to_config(sub_group),
            grid: [grid.element_window, grid.power_window],
            sub: Box::new(certificate_to_dto(sub_group, sub)),
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckItemDto {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

pub fn report_to_dto(report: &CertReport) -> Vec<CheckItemDto> {
    report
        .checks
        .iter()
        .map(|c| CheckItemDto { name: c.name.clone(), pass: c.pass, detail: c.detail.clone() })
        .collect()
}
