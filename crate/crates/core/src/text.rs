//! Rendering and parsing of monomials, matrices, characters and strata.
//!
//! Entry grammar: `0`, or an optional sign, an optional root-of-unity factor
//! (`-1` is shorthand for `e(1/2)`), and symbol powers `u`, `conj(u)`,
//! `u^3`, `conj(u)^2` joined by `*`. Examples: `a`, `conj(a)`, `conj(u)*w`,
//! `-1`, `e(1/4)*v`.

use crate::character::Character;
use crate::induction::MonMat;
use crate::monomial::{Monomial, SymbolTable};
use crate::{rat, rat_int, Error, Rat, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::str::FromStr;

/// Parse an exact rational written as `p`, `-p/q` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::MalformedConfig(format!("cannot parse rational '{s}'"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| bad())?;
    let d = BigInt::from_str(den).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

pub fn render_rational(r: &Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Render a monomial. `None` renders as `0`.
pub fn render_entry(entry: Option<&Monomial>, table: &SymbolTable) -> String {
    let Some(m) = entry else {
        return "0".to_string();
    };
    let mut factors: Vec<String> = Vec::new();
    let half = rat(1, 2);
    let negative = *m.angle() == half;
    if !m.angle().is_zero() && !negative {
        factors.push(format!("e({})", render_rational(m.angle())));
    }
    for (i, &e) in m.exps().iter().enumerate() {
        let name = table.name(i);
        match e {
            0 => {}
            1 => factors.push(name.to_string()),
            -1 => factors.push(format!("conj({name})")),
            k if k > 1 => factors.push(format!("{name}^{k}")),
            k => factors.push(format!("conj({name})^{}", -k)),
        }
    }
    let body = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Parse an entry against a symbol table; `0` parses to `None`.
pub fn parse_entry(s: &str, table: &SymbolTable) -> Result<Option<Monomial>> {
    let s = s.trim();
    if s == "0" {
        return Ok(None);
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s),
    };
    let mut out = Monomial::one(table.len());
    for factor in body.split('*') {
        let factor = factor.trim();
        if factor == "1" {
            continue;
        }
        if let Some(inner) = factor.strip_prefix("e(").and_then(|r| r.strip_suffix(')')) {
            out = out.mul(&Monomial::from_angle(parse_rational(inner)?, table.len()));
            continue;
        }
        let (name_part, exp) = match factor.split_once('^') {
            Some((n, e)) => (
                n.trim(),
                e.trim().parse::<i64>().map_err(|_| {
                    Error::MalformedConfig(format!("bad exponent in '{factor}'"))
                })?,
            ),
            None => (factor, 1),
        };
        let (name, sign) = match name_part
            .strip_prefix("conj(")
            .and_then(|r| r.strip_suffix(')'))
        {
            Some(inner) => (inner.trim(), -1),
            None => (name_part, 1),
        };
        let idx = table.index(name).ok_or_else(|| {
            Error::MalformedConfig(format!("unknown symbol '{name}' in entry '{s}'"))
        })?;
        out = out.mul(&Monomial::symbol(idx, table.len()).pow(sign * exp));
    }
    if negative {
        out = out.mul(&Monomial::from_angle(rat(1, 2), table.len()));
    }
    Ok(Some(out))
}

/// Render a matrix as entry strings, row-major.
pub fn render_matrix(m: &MonMat, table: &SymbolTable) -> Vec<Vec<String>> {
    (0..m.dim)
        .map(|i| (0..m.dim).map(|j| render_entry(m.entry(i, j), table)).collect())
        .collect()
}

/// Aligned pretty block for terminal output.
pub fn matrix_block(name: &str, m: &MonMat, table: &SymbolTable) -> String {
    let rows = render_matrix(m, table);
    let width = rows
        .iter()
        .flatten()
        .map(String::len)
        .max()
        .unwrap_or(1);
    let mut out = format!("{name} =\n");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&format!("  [ {} ]\n", cells.join("  ")));
    }
    out
}

/// Render a character as a coordinate tuple, e.g. `(u,1,1)`.
pub fn render_character(chi: &Character) -> String {
    let coords: Vec<String> = chi
        .coords
        .iter()
        .map(|c| render_entry(Some(c), &chi.symbols))
        .collect();
    format!("({})", coords.join(","))
}

/// Parse a stratum tuple such as `(u,1,1)`, `(1,v)` or `(1/3,-1,w)`.
/// Tokens are `1`, `-1`, a rational angle `p/q`, or a fresh symbol name;
/// repeated names reuse the same symbol.
pub fn parse_stratum(s: &str) -> Result<Character> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let tokens: Vec<&str> = inner.split(',').map(str::trim).collect();
    if tokens.iter().any(|t| t.is_empty()) {
        return Err(Error::MalformedConfig(format!("bad stratum tuple '{s}'")));
    }
    let is_symbol = |t: &str| {
        t.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
    };
    let mut names: Vec<String> = Vec::new();
    for t in &tokens {
        if is_symbol(t) && !names.iter().any(|n| n == t) {
            names.push(t.to_string());
        }
    }
    let table = SymbolTable::new(names);
    let mut coords = Vec::new();
    for t in &tokens {
        if is_symbol(t) {
            let idx = table.index(t).expect("collected above");
            coords.push(Monomial::symbol(idx, table.len()));
        } else {
            let angle = parse_rational(t)?;
            // "-1" means e(1/2), "1" means e(0); other integers reduce mod 1
            let angle = if angle == rat_int(-1) {
                rat(1, 2)
            } else if angle.is_integer() {
                rat_int(0)
            } else {
                angle
            };
            coords.push(Monomial::from_angle(angle, table.len()));
        }
    }
    Ok(Character::new(table, coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_rendering_roundtrips() {
        let table = SymbolTable::new(["u", "w"]);
        let samples = [
            Monomial::one(2),
            Monomial::symbol(0, 2),
            Monomial::symbol(0, 2).conj(),
            Monomial::symbol(0, 2).conj().mul(&Monomial::symbol(1, 2)),
            Monomial::from_angle(rat(1, 2), 2),
            Monomial::from_angle(rat(1, 4), 2).mul(&Monomial::symbol(1, 2).pow(3)),
            Monomial::from_angle(rat(1, 2), 2).mul(&Monomial::symbol(0, 2).pow(-2)),
        ];
        for m in &samples {
            let s = render_entry(Some(m), &table);
            let back = parse_entry(&s, &table).unwrap().unwrap();
            assert_eq!(&back, m, "roundtrip through '{s}'");
        }
        assert_eq!(render_entry(None, &table), "0");
        assert!(parse_entry("0", &table).unwrap().is_none());
    }

    #[test]
    fn specific_renderings_match_the_display_convention() {
        let table = SymbolTable::new(["u", "w"]);
        assert_eq!(
            render_entry(
                Some(&Monomial::symbol(0, 2).conj().mul(&Monomial::symbol(1, 2))),
                &table
            ),
            "conj(u)*w"
        );
        assert_eq!(render_entry(Some(&Monomial::from_angle(rat(1, 2), 2)), &table), "-1");
        assert_eq!(render_entry(Some(&Monomial::from_angle(rat(1, 4), 2)), &table), "e(1/4)");
    }

    #[test]
    fn stratum_parsing() {
        let chi = parse_stratum("(u,1,1)").unwrap();
        assert_eq!(chi.rank(), 3);
        assert_eq!(chi.symbols.names(), ["u"]);
        assert!(!chi.coords[0].is_numeric());
        assert!(chi.coords[1].is_one());

        let chi = parse_stratum("(1,-1,w)").unwrap();
        assert_eq!(chi.coords[1], Monomial::from_angle(rat(1, 2), 1));

        let chi = parse_stratum("(1/3,1)").unwrap();
        assert_eq!(chi.coords[0], Monomial::from_angle(rat(1, 3), 0));

        assert!(parse_stratum("(u,,1)").is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-2").unwrap(), rat_int(-2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
