//! Reference data for the built-in rank-3 group and the verification runner
//! that diffs freshly computed results against it.

use crystdual::builtin;
use crystdual::character::{act, fixed_points, orbit, stabilizer, Character};
use crystdual::induction::{induce_character, rep_of_word};
use crystdual::limits::{
    decompose_through_quotient, limit_rep, shielded_scan, Tolerances, Verdict,
};
use crystdual::text::{render_character, render_matrix};
use crystdual::group::word;
use crystdual::json::render_root;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const EMBEDDED: &str = include_str!("../golden/hw.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenChar {
    pub values: BTreeMap<String, String>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HwGolden {
    pub relations: Vec<String>,
    pub unit_translations: BTreeMap<String, Vec<i64>>,
    pub dual_action: BTreeMap<String, String>,
    pub fixed_count: usize,
    pub orbit_lengths: BTreeMap<String, usize>,
    pub stabilizers: BTreeMap<String, Vec<String>>,
    pub matrices: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
    pub squares: BTreeMap<String, Vec<Vec<String>>>,
    pub limits: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
    pub decompositions: BTreeMap<String, Vec<GoldenChar>>,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenItem {
    pub name: String,
    pub pass: bool,
    pub expected: String,
    pub got: String,
}

fn item(out: &mut Vec<GoldenItem>, name: impl Into<String>, expected: String, got: String) {
    let name = name.into();
    out.push(GoldenItem { pass: expected == got, name, expected, got });
}

fn fmt_rows(rows: &[Vec<String>]) -> String {
    let body: Vec<String> = rows.iter().map(|r| r.join(",")).collect();
    format!("[{}]", body.join(" ; "))
}

fn fmt_decomposition(entries: &[(BTreeMap<String, String>, usize)]) -> String {
    let mut sorted = entries.to_vec();
    sorted.sort();
    let body: Vec<String> = sorted
        .iter()
        .map(|(values, m)| {
            let vals: Vec<String> =
                values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{}x({})", m, vals.join(","))
        })
        .collect();
    body.join(" + ")
}

/// Run the whole reproduction suite against the golden data.
pub fn run(golden: &HwGolden) -> Vec<GoldenItem> {
    let mut out = Vec::new();
    let g = builtin::hantzsche_wendt();
    let known = builtin::hantzsche_wendt_relations();

    for name in &golden.relations {
        let got = match known.iter().find(|(_, _, n)| n == name) {
            Some((lhs, rhs, _)) => {
                match (g.eval_word(lhs), g.eval_word(rhs)) {
                    (Ok(a), Ok(b)) if a == b => "holds".to_string(),
                    (Ok(_), Ok(_)) => "fails".to_string(),
                    _ => "evaluation error".to_string(),
                }
            }
            None => "unknown relation".to_string(),
        };
        item(&mut out, format!("relation.{name}"), "holds".into(), got);
    }

    for (gen, expected) in &golden.unit_translations {
        let got = match g.eval_word(&word(&[(gen, 2)])) {
            Ok(sq) if sq.h == g.holonomy.identity() => {
                format!("{:?}", g.lattice_coords(&sq))
            }
            _ => "not a translation".to_string(),
        };
        item(&mut out, format!("square.{gen}"), format!("{expected:?}"), got);
    }

    let generic = Character::generic(&["u", "v", "w"]);
    for (gen, expected) in &golden.dual_action {
        let got = match g.holonomy.lookup(gen) {
            Some(h) => match act(&g, h, &generic) {
                Ok(chi) => render_character(&chi),
                Err(e) => e.to_string(),
            },
            None => "unknown label".to_string(),
        };
        item(&mut out, format!("dual_action.{gen}"), expected.clone(), got);
    }

    let fixed = fixed_points(&g);
    item(
        &mut out,
        "fixed_set.count",
        golden.fixed_count.to_string(),
        match &fixed {
            Ok(set) => set.len().to_string(),
            Err(e) => e.to_string(),
        },
    );

    let strata = builtin::hantzsche_wendt_strata(&g);
    for (name, expected) in &golden.orbit_lengths {
        let got = strata
            .iter()
            .find(|s| &s.name == name)
            .and_then(|s| orbit(&g, &s.character).ok())
            .map(|o| o.len().to_string())
            .unwrap_or_else(|| "unknown stratum".to_string());
        item(&mut out, format!("orbit.{name}"), expected.to_string(), got);
    }

    for (name, expected) in &golden.stabilizers {
        let got = strata
            .iter()
            .find(|s| &s.name == name)
            .and_then(|s| stabilizer(&g, &s.character).ok())
            .map(|st| {
                let labels: Vec<String> = st
                    .labels
                    .iter()
                    .map(|&h| g.holonomy.label(h).to_string())
                    .collect();
                labels.join(",")
            })
            .unwrap_or_else(|| "unknown stratum".to_string());
        item(&mut out, format!("stabilizer.{name}"), expected.join(","), got);
    }

    for (name, gens) in &golden.matrices {
        let rep = strata
            .iter()
            .find(|s| &s.name == name)
            .and_then(|s| induce_character(&g, &s.character, s.transversal.as_deref()).ok())
            .and_then(|mut reps| if reps.is_empty() { None } else { Some(reps.remove(0)) });
        for (gen, expected) in gens {
            let got = rep
                .as_ref()
                .and_then(|r| r.matrices.get(gen))
                .map(|m| {
                    fmt_rows(&render_matrix(m, &rep.as_ref().unwrap().symbols))
                })
                .unwrap_or_else(|| "missing".to_string());
            item(&mut out, format!("matrix.{name}.{gen}"), fmt_rows(expected), got);
        }
    }

    {
        let generic_stratum = strata.iter().find(|s| s.name == "(u,v,w)");
        let rep = generic_stratum.and_then(|s| {
            induce_character(&g, &s.character, s.transversal.as_deref())
                .ok()
                .and_then(|mut reps| if reps.is_empty() { None } else { Some(reps.remove(0)) })
        });
        for (gen, expected) in &golden.squares {
            let got = rep
                .as_ref()
                .and_then(|r| rep_of_word(&g, r, &word(&[(gen, 2)])).ok())
                .map(|m| fmt_rows(&render_matrix(&m, &rep.as_ref().unwrap().symbols)))
                .unwrap_or_else(|| "missing".to_string());
            item(&mut out, format!("square_matrix.{gen}"), fmt_rows(expected), got);
        }
    }

    for (name, gens) in &golden.limits {
        let lim = strata
            .iter()
            .find(|s| &s.name == name)
            .and_then(|s| induce_character(&g, &s.character, s.transversal.as_deref()).ok())
            .and_then(|mut reps| if reps.is_empty() { None } else { Some(reps.remove(0)) })
            .map(|r| r.at_ones());
        for (gen, expected) in gens {
            let got = lim
                .as_ref()
                .and_then(|r| r.matrices.get(gen))
                .map(|m| fmt_rows(&render_matrix(m, &lim.as_ref().unwrap().symbols)))
                .unwrap_or_else(|| "missing".to_string());
            item(&mut out, format!("limit.{name}.{gen}"), fmt_rows(expected), got);
        }
    }

    for (name, expected) in &golden.decompositions {
        let got = strata
            .iter()
            .find(|s| &s.name == name)
            .and_then(|s| {
                let mut reps =
                    induce_character(&g, &s.character, s.transversal.as_deref()).ok()?;
                if reps.is_empty() {
                    return None;
                }
                let rep = reps.remove(0);
                let nrep = limit_rep(&g, &rep).ok()?;
                let dec =
                    decompose_through_quotient(&g, &nrep, &Tolerances::default()).ok()?;
                Some(fmt_decomposition(
                    &dec.iter()
                        .map(|(eta, m)| {
                            let values: BTreeMap<String, String> = eta
                                .values
                                .iter()
                                .enumerate()
                                .map(|(h, a)| {
                                    (g.holonomy.label(h).to_string(), render_root(a))
                                })
                                .collect();
                            (values, *m)
                        })
                        .collect::<Vec<_>>(),
                ))
            })
            .unwrap_or_else(|| "missing".to_string());
        let want = fmt_decomposition(
            &expected
                .iter()
                .map(|c| (c.values.clone(), c.multiplicity))
                .collect::<Vec<_>>(),
        );
        item(&mut out, format!("decomposition.{name}"), want, got);
    }

    let verdict = shielded_scan(&g, &strata, &Tolerances::default())
        .map(|r| match r.verdict {
            Verdict::Shielded => "shielded".to_string(),
            Verdict::NotCertified { reason } => format!("not-certified: {reason}"),
        })
        .unwrap_or_else(|e| e.to_string());
    item(&mut out, "shielded.verdict", golden.verdict.clone(), verdict);

    out
}
