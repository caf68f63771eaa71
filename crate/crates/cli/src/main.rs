mod golden;

use clap::{Args, Parser, Subcommand};
use crystdual::algebra::{
    in_augmentation_relative, in_augmentation_via_expectation, psi, quasi_basis_sum,
    random_element, random_ideal_element, reconstruct, GaussRat, GroupAlgebraElement,
    Section,
};
use crystdual::builtin;
use crystdual::certify::{certify_cyclic, verify_certificate, CyclicCertificate};
use crystdual::character::{fixed_points, orbit, stabilizer};
use crystdual::group::{CrystGroup, GroupElement};
use crystdual::induction::{extend_character, induce, orbit_transversal, Rep};
use crystdual::json;
use crystdual::limits::{shielded_scan, QuotientCharacter, Stratum, Tolerances, Verdict};
use crystdual::text::{matrix_block, parse_stratum, render_character};
use crystdual::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

/// Exact computations with crystallographic groups: dual-torus orbits,
/// induced representations, limit analysis at the trivial character,
/// group-algebra embeddings and holonomy certificates.
#[derive(Parser)]
#[command(name = "crystdual", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Built-in group: hantzsche-wendt | klein-bottle
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,
    /// Path to a group-definition JSON document
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format
    #[arg(long, default_value = "pretty", value_parser = ["json", "pretty"])]
    format: String,
}

impl OutputArgs {
    fn json(&self) -> bool {
        self.format == "json"
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate the group definition, its known relations and torsion-freeness
    Check {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Orbits and stabilizers of dual-torus strata, plus the fixed-point set
    Orbits {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Stratum tuple such as "(u,1,1)"; repeatable. Defaults to the
        /// built-in strata of the group.
        #[arg(long = "stratum")]
        strata: Vec<String>,
    },
    /// Induced representation matrices over one stratum
    Induce {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Stratum tuple such as "(u,1,1)"
        #[arg(long)]
        stratum: String,
        /// Explicit transversal as a comma list of generator names, e.g. "e,y"
        #[arg(long, conflicts_with = "paper_basis")]
        transversal: Option<String>,
        /// Use the transversal of the matching built-in stratum
        #[arg(long)]
        paper_basis: bool,
    },
    /// Shielded-point scan at the trivial character
    Shielded {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Stratum tuple; repeatable. Defaults to the built-in strata.
        #[arg(long = "stratum")]
        strata: Vec<String>,
        /// Multiplicity-integrality tolerance (default 1e-6)
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Consistency suite for the quasi-basis embedding of the group algebra
    Embed {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Recursive certificate for torsion-free groups with cyclic holonomy
    Certify {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify the built-in rank-3 group against the reference data
    HwVerify {
        #[command(flatten)]
        out: OutputArgs,
        /// Override the embedded reference data with a JSON file
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

const EXIT_VALIDATION: i32 = 2;
const EXIT_COMPUTATION: i32 = 3;
const EXIT_GOLDEN_DIFF: i32 = 4;

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::MalformedConfig(_)
        | Error::BadTable(_)
        | Error::NonUnimodularMatrix { .. }
        | Error::CocycleViolation { .. }
        | Error::RankMismatch { .. }
        | Error::UnknownGenerator(_)
        | Error::BadSection(_)
        | Error::BadTransversal(_)
        | Error::SizeMismatch(_)
        | Error::MissingSymbol(_)
        | Error::OffCircleValue { .. } => EXIT_VALIDATION,
        _ => EXIT_COMPUTATION,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::MalformedConfig(_) => "MalformedConfig",
        Error::BadTable(_) => "BadTable",
        Error::NonUnimodularMatrix { .. } => "NonUnimodularMatrix",
        Error::CocycleViolation { .. } => "CocycleViolation",
        Error::RankMismatch { .. } => "RankMismatch",
        Error::UnknownGenerator(_) => "UnknownGenerator",
        Error::InfiniteFixedLocus(_) => "InfiniteFixedLocus",
        Error::NonabelianLittleGroup(_) => "NonabelianLittleGroup",
        Error::InconsistentExtension(_) => "InconsistentExtension",
        Error::BadTransversal(_) => "BadTransversal",
        Error::ElementEscapes(_) => "ElementEscapes",
        Error::NotDiagonalOnLattice(_) => "NotDiagonalOnLattice",
        Error::MissingSymbol(_) => "MissingSymbol",
        Error::OffCircleValue { .. } => "OffCircleValue",
        Error::DoesNotFactor(_) => "DoesNotFactor",
        Error::NonabelianQuotient => "NonabelianQuotient",
        Error::NonIntegerMultiplicity(_) => "NonIntegerMultiplicity",
        Error::BadSection(_) => "BadSection",
        Error::SizeMismatch(_) => "SizeMismatch",
        Error::NotAGenerator { .. } => "NotAGenerator",
        Error::NonCyclicHolonomy(_) => "NonCyclicHolonomy",
        Error::TrivialTransfer => "TrivialTransfer",
        Error::NotTorsionFree(_) => "NotTorsionFree",
        Error::CertificateInvalid(_) => "CertificateInvalid",
    }
}

fn main() {
    let cli = Cli::parse();
    let (code, json_out) = match &cli.command {
        Command::Check { out, .. }
        | Command::Orbits { out, .. }
        | Command::Induce { out, .. }
        | Command::Shielded { out, .. }
        | Command::Embed { out, .. }
        | Command::Certify { out, .. }
        | Command::HwVerify { out, .. } => (run(&cli.command), out.json()),
    };
    match code {
        Ok(c) => std::process::exit(c),
        Err(e) => {
            if json_out {
                let doc = serde_json::json!({
                    "error": e.to_string(),
                    "kind": error_kind(&e),
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                eprintln!("error[{}]: {e}", error_kind(&e));
            }
            std::process::exit(exit_code(&e));
        }
    }
}

struct LoadedGroup {
    group: CrystGroup,
    builtin: Option<String>,
}

fn load_group(args: &GroupArgs) -> Result<LoadedGroup> {
    match (&args.builtin, &args.input) {
        (Some(name), None) => {
            let group = match name.as_str() {
                "hantzsche-wendt" => builtin::hantzsche_wendt(),
                "klein-bottle" => builtin::klein_bottle(),
                other => {
                    return Err(Error::MalformedConfig(format!(
                        "unknown builtin '{other}' (expected hantzsche-wendt or klein-bottle)"
                    )))
                }
            };
            Ok(LoadedGroup { group, builtin: Some(name.clone()) })
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::MalformedConfig(format!("cannot read {}: {e}", path.display()))
            })?;
            Ok(LoadedGroup { group: json::group_from_json(&text)?, builtin: None })
        }
        _ => Err(Error::MalformedConfig(
            "choose exactly one of --builtin or --input".into(),
        )),
    }
}

fn known_relations(
    loaded: &LoadedGroup,
) -> Vec<(crystdual::Word, crystdual::Word, String)> {
    match loaded.builtin.as_deref() {
        Some("hantzsche-wendt") => builtin::hantzsche_wendt_relations(),
        Some("klein-bottle") => builtin::klein_bottle_relations(),
        _ => Vec::new(),
    }
}

fn default_strata(loaded: &LoadedGroup) -> Vec<Stratum> {
    match loaded.builtin.as_deref() {
        Some("hantzsche-wendt") => builtin::hantzsche_wendt_strata(&loaded.group),
        Some("klein-bottle") => builtin::klein_bottle_strata(&loaded.group),
        _ => Vec::new(),
    }
}

fn resolve_strata(loaded: &LoadedGroup, args: &[String]) -> Result<Vec<Stratum>> {
    if args.is_empty() {
        let defaults = default_strata(loaded);
        if defaults.is_empty() {
            return Err(Error::MalformedConfig(
                "no built-in strata for this group; pass --stratum".into(),
            ));
        }
        return Ok(defaults);
    }
    args.iter()
        .map(|s| {
            let character = parse_stratum(s)?;
            Ok(Stratum { name: render_character(&character), character, transversal: None })
        })
        .collect()
}

fn parse_transversal(group: &CrystGroup, spec: &str) -> Result<Vec<GroupElement>> {
    spec.split(',')
        .map(str::trim)
        .map(|token| {
            if token == "e" {
                Ok(group.identity())
            } else {
                group.generator(token).cloned()
            }
        })
        .collect()
}

fn render_quotient_char(group: &CrystGroup, eta: &QuotientCharacter) -> String {
    if eta.is_trivial() {
        return "trivial".to_string();
    }
    let parts: Vec<String> = eta
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != crystdual::rat_int(0))
        .map(|(h, v)| format!("{}={}", group.holonomy.label(h), json::render_root(v)))
        .collect();
    parts.join(",")
}

fn run(command: &Command) -> Result<i32> {
    match command {
        Command::Check { group, out } => cmd_check(group, out),
        Command::Orbits { group, out, strata } => cmd_orbits(group, out, strata),
        Command::Induce { group, out, stratum, transversal, paper_basis } => {
            cmd_induce(group, out, stratum, transversal.as_deref(), *paper_basis)
        }
        Command::Shielded { group, out, strata, tolerance } => {
            cmd_shielded(group, out, strata, *tolerance)
        }
        Command::Embed { group, out } => cmd_embed(group, out),
        Command::Certify { group, out } => cmd_certify(group, out),
        Command::HwVerify { out, golden } => cmd_hw_verify(out, golden.as_deref()),
    }
}

fn cmd_check(group_args: &GroupArgs, out: &OutputArgs) -> Result<i32> {
    let loaded = load_group(group_args)?;
    let g = &loaded.group;
    let mut checks: Vec<(String, bool)> = vec![("definition.valid".into(), true)];
    for (lhs, rhs, name) in known_relations(&loaded) {
        let ok = g.eval_word(&lhs)? == g.eval_word(&rhs)?;
        checks.push((format!("relation.{name}"), ok));
    }
    let witness = g.torsion_witness();
    let torsion_free = witness.is_none();
    let all_ok = checks.iter().all(|(_, ok)| *ok);
    if out.json() {
        let doc = serde_json::json!({
            "rank": g.rank,
            "holonomy_order": g.holonomy.order(),
            "torsion_free": torsion_free,
            "torsion_witness": witness.as_ref().map(|w| json::element_to_dto(g, w)),
            "checks": checks.iter().map(|(n, ok)| serde_json::json!({"name": n, "pass": ok})).collect::<Vec<_>>(),
            "pass": all_ok,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("rank {}, holonomy of order {}", g.rank, g.holonomy.order());
        for (name, ok) in &checks {
            println!("  {} {}", if *ok { "ok  " } else { "FAIL" }, name);
        }
        match &witness {
            None => println!("  torsion-free: yes"),
            Some(w) => println!("  torsion-free: no (witness {})", g.render_element(w)),
        }
    }
    Ok(if all_ok { 0 } else { EXIT_COMPUTATION })
}

fn cmd_orbits(group_args: &GroupArgs, out: &OutputArgs, strata: &[String]) -> Result<i32> {
    let loaded = load_group(group_args)?;
    let g = &loaded.group;
    let strata = resolve_strata(&loaded, strata)?;
    let fixed = fixed_points(g);
    let mut rows = Vec::new();
    for s in &strata {
        let orb = orbit(g, &s.character)?;
        let stab = stabilizer(g, &s.character)?;
        rows.push((
            s.name.clone(),
            orb.iter().map(|(_, c)| render_character(c)).collect::<Vec<_>>(),
            stab.labels
                .iter()
                .map(|&h| g.holonomy.label(h).to_string())
                .collect::<Vec<_>>(),
            stab.describe(g),
        ));
    }
    if out.json() {
        let fixed_doc = match &fixed {
            Ok(set) => serde_json::json!({
                "finite": true,
                "characters": set.iter().map(render_character).collect::<Vec<_>>(),
                "coordinates": set.iter().map(json::character_to_dto).collect::<Vec<_>>(),
            }),
            Err(Error::InfiniteFixedLocus(msg)) => {
                serde_json::json!({"finite": false, "reason": msg})
            }
            Err(e) => return Err(e.clone()),
        };
        let coords: Vec<Vec<Vec<json::MonomialDto>>> = strata
            .iter()
            .map(|s| {
                orbit(g, &s.character)
                    .map(|o| {
                        o.iter().map(|(_, c)| json::character_to_dto(c)).collect()
                    })
                    .unwrap_or_default()
            })
            .collect();
        let doc = serde_json::json!({
            "fixed_points": fixed_doc,
            "strata": rows.iter().zip(&coords).map(|((name, orbit, labels, desc), coord)| serde_json::json!({
                "stratum": name,
                "orbit": orbit,
                "orbit_coordinates": coord,
                "stabilizer_labels": labels,
                "stabilizer": desc,
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        match &fixed {
            Ok(set) => {
                println!("fixed characters ({}):", set.len());
                for c in set {
                    println!("  {}", render_character(c));
                }
            }
            Err(Error::InfiniteFixedLocus(msg)) => println!("fixed locus: {msg}"),
            Err(e) => return Err(e.clone()),
        }
        for (name, orbit, labels, desc) in &rows {
            println!("stratum {name}:");
            println!("  orbit ({}): {}", orbit.len(), orbit.join("  "));
            println!("  stabilizer labels: {{{}}}", labels.join(", "));
            println!("  stabilizer: {desc}");
        }
    }
    Ok(0)
}

fn reps_for_stratum(
    g: &CrystGroup,
    stratum: &Stratum,
    transversal: Option<&[GroupElement]>,
) -> Result<Vec<Rep>> {
    let stab = stabilizer(g, &stratum.character)?;
    let sigmas = extend_character(g, &stratum.character, &stab)?;
    let owned;
    let tv: &[GroupElement] = match transversal {
        Some(t) => t,
        None => match &stratum.transversal {
            Some(t) => t,
            None => {
                owned = orbit_transversal(g, &stratum.character)?;
                &owned
            }
        },
    };
    sigmas.iter().map(|s| induce(g, s, tv)).collect()
}

fn cmd_induce(
    group_args: &GroupArgs,
    out: &OutputArgs,
    stratum: &str,
    transversal: Option<&str>,
    paper_basis: bool,
) -> Result<i32> {
    let loaded = load_group(group_args)?;
    let g = &loaded.group;
    let character = parse_stratum(stratum)?;
    let name = render_character(&character);
    let mut s = Stratum { name: name.clone(), character, transversal: None };
    if paper_basis {
        let known = default_strata(&loaded);
        let matched = known
            .into_iter()
            .find(|k| render_character(&k.character) == name)
            .ok_or_else(|| {
                Error::MalformedConfig(format!(
                    "--paper-basis: '{name}' is not one of the built-in strata"
                ))
            })?;
        s.transversal = matched.transversal;
    }
    let parsed_tv = match transversal {
        Some(spec) => Some(parse_transversal(g, spec)?),
        None => None,
    };
    let reps = reps_for_stratum(g, &s, parsed_tv.as_deref())?;
    if out.json() {
        let doc: Vec<json::RepDto> = reps.iter().map(|r| json::rep_to_dto(g, r)).collect();
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        for (i, rep) in reps.iter().enumerate() {
            if reps.len() > 1 {
                println!("# family member {} of {}", i + 1, reps.len());
            }
            println!("stratum {name}, dimension {}", rep.dim);
            if !rep.sigma.substitutions.is_empty() {
                let subs: Vec<String> = rep
                    .sigma
                    .substitutions
                    .iter()
                    .map(|(old, m)| {
                        format!(
                            "{old} = {}",
                            crystdual::text::render_entry(Some(m), &rep.symbols)
                        )
                    })
                    .collect();
                println!("substitutions: {}", subs.join(", "));
            }
            let tv: Vec<String> =
                rep.transversal.iter().map(|e| g.render_element(e)).collect();
            println!("transversal: {}", tv.join("  "));
            for (gen, m) in &rep.matrices {
                print!("{}", matrix_block(&format!("pi({gen})"), m, &rep.symbols));
            }
            println!();
        }
    }
    Ok(0)
}

fn cmd_shielded(
    group_args: &GroupArgs,
    out: &OutputArgs,
    strata: &[String],
    tolerance: Option<f64>,
) -> Result<i32> {
    let loaded = load_group(group_args)?;
    let g = &loaded.group;
    let strata = resolve_strata(&loaded, strata)?;
    let mut tol = Tolerances::default();
    if let Some(t) = tolerance {
        if !(t > 0.0) {
            return Err(Error::MalformedConfig("tolerance must be positive".into()));
        }
        tol.multiplicity = t;
    }
    let report = shielded_scan(g, &strata, &tol)?;
    if out.json() {
        let dto = json::shielded_report_to_dto(g, &report);
        println!("{}", serde_json::to_string_pretty(&dto).unwrap());
    } else {
        match &report.verdict {
            Verdict::Shielded => println!("verdict: Shielded"),
            Verdict::NotCertified { reason } => {
                println!("verdict: NotCertified ({reason})")
            }
        }
        match (&report.fixed_set, &report.fixed_reason) {
            (Some(set), _) => println!(
                "fixed set: {} characters, trivial character isolated",
                set.len()
            ),
            (None, Some(reason)) => println!("fixed set: {reason}"),
            _ => {}
        }
        println!("{:<12} {:>5} {:>4}  {:<40} {}", "stratum", "orbit", "dim", "limit decomposition", "witness");
        for rec in &report.strata {
            if let Some(err) = &rec.error {
                println!("{:<12} {err}", rec.name);
                continue;
            }
            let dec: Vec<String> = rec
                .decomposition
                .iter()
                .map(|(eta, m)| format!("{}x[{}]", m, render_quotient_char(g, eta)))
                .collect();
            let witness = rec
                .witness
                .as_ref()
                .map(|eta| render_quotient_char(g, eta))
                .unwrap_or_else(|| "-".into());
            println!(
                "{:<12} {:>5} {:>4}  {:<40} {}",
                rec.name,
                rec.orbit_len,
                rec.dim,
                dec.join(" + "),
                witness
            );
        }
    }
    Ok(0)
}

fn cmd_embed(group_args: &GroupArgs, out: &OutputArgs) -> Result<i32> {
    let loaded = load_group(group_args)?;
    let g = &loaded.group;
    let sections = [Section::canonical(g), Section::shifted(g, &vec![1; g.rank])];
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut checks: Vec<(String, bool)> = Vec::new();

    let one = GroupAlgebraElement::one(g);
    checks.push((
        "psi.identity_matrix".into(),
        psi(g, &one, &sections[0])?
            == crystdual::algebra::MatrixOverGammaAlgebra::identity(g, g.holonomy.order()),
    ));

    // diagonality on a lattice-supported element
    let lattice_el = GroupAlgebraElement::single(
        g.lattice_element(&vec![1; g.rank]),
        GaussRat::one(),
    );
    let m = psi(g, &lattice_el, &sections[0])?;
    checks.push(("psi.diagonal_on_lattice".into(), m.is_diagonal()));

    for (si, section) in sections.iter().enumerate() {
        let mut roundtrip = true;
        let mut multiplicative = true;
        let mut star = true;
        let mut single_sum = true;
        for _ in 0..20 {
            let a = random_element(g, &mut rng, 8);
            let b = random_element(g, &mut rng, 4);
            let pa = psi(g, &a, section)?;
            let pb = psi(g, &b, section)?;
            roundtrip &= reconstruct(g, &pa, section)? == a;
            single_sum &= quasi_basis_sum(g, &a, section)? == a;
            multiplicative &= psi(g, &a.mul(g, &b)?, section)? == pa.mul(g, &pb)?;
            star &= psi(g, &a.star(g)?, section)? == pa.star(g)?;
        }
        let tag = if si == 0 { "canonical" } else { "shifted" };
        checks.push((format!("reconstruct.roundtrip.{tag}"), roundtrip));
        checks.push((format!("psi.multiplicative.{tag}"), multiplicative));
        checks.push((format!("psi.star.{tag}"), star));
        checks.push((format!("quasi_basis.single_sum.{tag}"), single_sum));
    }

    let mut agree = true;
    for i in 0..50 {
        let x = if i % 3 == 0 {
            random_ideal_element(g, &mut rng, 2)?
        } else {
            random_element(g, &mut rng, 6)
        };
        agree &= in_augmentation_relative(g, &x, &sections[0])?
            == in_augmentation_via_expectation(g, &x, &sections[0])?;
    }
    checks.push(("membership.criteria_agree".into(), agree));

    // an element with a nontrivial push-forward must be rejected
    let e = g.holonomy.identity();
    if let Some(gen) = g.generators().values().find(|el| el.h != e) {
        let x = GroupAlgebraElement::single(gen.clone(), GaussRat::one())
            .sub(&GroupAlgebraElement::one(g));
        checks.push((
            "membership.rejects_nontrivial_pushforward".into(),
            !in_augmentation_relative(g, &x, &sections[0])?,
        ));
    }

    let all_ok = checks.iter().all(|(_, ok)| *ok);
    if out.json() {
        let doc = serde_json::json!({
            "checks": checks.iter().map(|(n, ok)| serde_json::json!({"name": n, "pass": ok})).collect::<Vec<_>>(),
            "pass": all_ok,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        for (name, ok) in &checks {
            println!("  {} {}", if *ok { "ok  " } else { "FAIL" }, name);
        }
        println!("embedding suite: {}", if all_ok { "pass" } else { "FAIL" });
    }
    Ok(if all_ok { 0 } else { EXIT_COMPUTATION })
}

fn print_certificate_tree(g: &CrystGroup, cert: &CyclicCertificate, indent: usize) {
    let pad = "  ".repeat(indent);
    match cert {
        CyclicCertificate::Base { m, n, x, t } => {
            println!(
                "{pad}base: m={m}, n={n}, x={}, t={}; alpha(x^k t^l) = {n}k + {m}l",
                g.render_element(x),
                g.render_element(t)
            );
        }
        CyclicCertificate::Step { phi, m, a, b, g: gen, sub_group, sub, .. } => {
            let values: Vec<String> = phi
                .generator_values
                .iter()
                .map(|(name, v)| format!("phi({name})={v}"))
                .collect();
            println!(
                "{pad}step: rank {}, m={m}, a={a}, b={b}; {}",
                sub_group.rank + 1,
                values.join(", ")
            );
            println!("{pad}  g = {} (phi(g)=1, pi(g) generates)", g.render_element(gen));
            println!(
                "{pad}  kernel: rank {}, holonomy order {}",
                sub_group.rank,
                sub_group.holonomy.order()
            );
            print_certificate_tree(sub_group, sub, indent + 1);
        }
    }
}

fn cmd_certify(group_args: &GroupArgs, out: &OutputArgs) -> Result<i32> {
    let loaded = load_group(group_args)?;
    let g = &loaded.group;
    let cert = certify_cyclic(g)?;
    let report = verify_certificate(g, &cert);
    if out.json() {
        let doc = serde_json::json!({
            "certificate": json::certificate_to_dto(g, &cert),
            "verification": json::report_to_dto(&report),
            "pass": report.ok(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        print_certificate_tree(g, &cert, 0);
        let failures = report.failures();
        if failures.is_empty() {
            println!("verification: {} checks, all pass", report.checks.len());
        } else {
            for f in &failures {
                println!("verification FAIL: {} ({})", f.name, f.detail);
            }
        }
    }
    Ok(if report.ok() { 0 } else { EXIT_COMPUTATION })
}

fn cmd_hw_verify(out: &OutputArgs, golden_path: Option<&std::path::Path>) -> Result<i32> {
    let text = match golden_path {
        Some(path) => std::fs::read_to_string(path).map_err(|e| {
            Error::MalformedConfig(format!("cannot read {}: {e}", path.display()))
        })?,
        None => golden::EMBEDDED.to_string(),
    };
    let data: golden::HwGolden = serde_json::from_str(&text)
        .map_err(|e| Error::MalformedConfig(format!("invalid golden data: {e}")))?;
    let items = golden::run(&data);
    let diffs: Vec<&golden::GoldenItem> = items.iter().filter(|i| !i.pass).collect();
    if out.json() {
        let doc = serde_json::json!({
            "items": items,
            "diff_count": diffs.len(),
            "pass": diffs.is_empty(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        for i in &items {
            if i.pass {
                println!("  ok   {}", i.name);
            } else {
                println!("  DIFF {}", i.name);
                println!("       expected: {}", i.expected);
                println!("       got:      {}", i.got);
            }
        }
        println!(
            "golden verification: {} items, {} diffs",
            items.len(),
            diffs.len()
        );
    }
    Ok(if diffs.is_empty() { 0 } else { EXIT_GOLDEN_DIFF })
}
