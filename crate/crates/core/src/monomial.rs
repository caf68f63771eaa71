//! Exact points of the circle group extended by generic symbols.
//!
//! A [`Monomial`] is a root of unity `e(angle)` (with `e(t) = exp(2 pi i t)`
//! and `angle` a rational mod 1) times a Laurent monomial in a finite list of
//! generic circle symbols. Symbols are treated as algebraically independent
//! generic points of the circle, so equality is syntactic: equal angle and
//! equal exponent vector.

use crate::{rat_int, Rat};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

/// Ordered list of symbol names shared by the monomials of one computation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct SymbolTable {
    names: Vec<String>,
}

impl SymbolTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        SymbolTable { names: names.into_iter().map(Into::into).collect() }
    }

    pub fn empty() -> Self {
        SymbolTable { names: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index(name).is_some()
    }

    /// Replace the name at `pos`, keeping every other position fixed.
    pub fn renamed(&self, pos: usize, fresh: &str) -> SymbolTable {
        let mut names = self.names.clone();
        names[pos] = fresh.to_string();
        SymbolTable { names }
    }
}

/// `e(angle) * prod_i s_i^{e_i}` over a shared symbol table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    angle: Rat,
    exps: Vec<i64>,
}

fn normalize(angle: Rat) -> Rat {
    let f = angle.floor();
    angle - f
}

impl Monomial {
    pub fn one(symbols: usize) -> Self {
        Monomial { angle: rat_int(0), exps: vec![0; symbols] }
    }

    pub fn from_angle(angle: Rat, symbols: usize) -> Self {
        Monomial { angle: normalize(angle), exps: vec![0; symbols] }
    }

    /// The generic symbol at index `idx`.
    pub fn symbol(idx: usize, symbols: usize) -> Self {
        let mut exps = vec![0; symbols];
        exps[idx] = 1;
        Monomial { angle: rat_int(0), exps }
    }

    pub fn with_parts(angle: Rat, exps: Vec<i64>) -> Self {
        Monomial { angle: normalize(angle), exps }
    }

    pub fn angle(&self) -> &Rat {
        &self.angle
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn is_numeric(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_one(&self) -> bool {
        self.angle.is_zero() && self.is_numeric()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.exps.len(), other.exps.len(), "symbol tables differ");
        Monomial {
            angle: normalize(&self.angle + &other.angle),
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// Inverse; on the unit circle this is also complex conjugation.
    pub fn inv(&self) -> Monomial {
        Monomial {
            angle: normalize(-&self.angle),
            exps: self.exps.iter().map(|e| -e).collect(),
        }
    }

    pub fn conj(&self) -> Monomial {
        self.inv()
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial {
            angle: normalize(&self.angle * rat_int(k)),
            exps: self.exps.iter().map(|e| e * k).collect(),
        }
    }

    /// Substitute all symbols by 1, keeping only the root-of-unity part.
    pub fn numeric_part(&self) -> Monomial {
        Monomial { angle: self.angle.clone(), exps: Vec::new() }
    }

    /// Rewrite through the substitution `old symbol at pos := replacement`,
    /// where `replacement` lives over the new table (same length, position
    /// `pos` now naming the fresh symbol).
    pub fn substitute(&self, pos: usize, replacement: &Monomial) -> Monomial {
        let k = self.exps[pos];
        let mut rest = self.clone();
        rest.exps[pos] = 0;
        rest.mul(&replacement.pow(k))
    }

    /// Evaluate at explicit unit-circle values, one per symbol.
    pub fn eval(&self, values: &[Complex64]) -> Complex64 {
        assert_eq!(values.len(), self.exps.len());
        let t = self.angle.to_f64().expect("angle out of f64 range");
        let mut z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t);
        for (v, &e) in values.iter().zip(&self.exps) {
            z *= v.powi(e as i32);
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use proptest::prelude::*;

    fn arb_monomial(symbols: usize) -> impl Strategy<Value = Monomial> {
        (
            (-24i64..24, 1i64..13),
            proptest::collection::vec(-5i64..=5, symbols),
        )
            .prop_map(|((p, q), exps)| Monomial::with_parts(rat(p, q), exps))
    }

    proptest! {
        #[test]
        fn monomials_form_an_abelian_group(
            a in arb_monomial(3),
            b in arb_monomial(3),
            c in arb_monomial(3),
        ) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&a.inv()), Monomial::one(3));
            prop_assert_eq!(a.inv().inv(), a);
        }

        #[test]
        fn pow_is_iterated_multiplication(a in arb_monomial(2), k in 0i64..6) {
            let mut acc = Monomial::one(2);
            for _ in 0..k {
                acc = acc.mul(&a);
            }
            prop_assert_eq!(a.pow(k), acc);
        }

        #[test]
        fn eval_is_multiplicative(a in arb_monomial(2), b in arb_monomial(2)) {
            let vals = [
                Complex64::from_polar(1.0, 0.7),
                Complex64::from_polar(1.0, -2.1),
            ];
            let lhs = a.mul(&b).eval(&vals);
            let rhs = a.eval(&vals) * b.eval(&vals);
            prop_assert!((lhs - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn angle_is_reduced_mod_one() {
        let m = Monomial::from_angle(rat(7, 2), 0);
        assert_eq!(m, Monomial::from_angle(rat(1, 2), 0));
        assert!(!m.is_one());
        assert!(m.is_numeric());
    }

    #[test]
    fn substitution_rewrites_the_pivot_symbol() {
        // table [u, w]; substitute u := a^2 (fresh a at position 0)
        let uw = Monomial::with_parts(rat_int(0), vec![-1, 1]); // conj(u) * w
        let replacement = Monomial::with_parts(rat_int(0), vec![2, 0]); // a^2
        let rewritten = uw.substitute(0, &replacement);
        assert_eq!(rewritten, Monomial::with_parts(rat_int(0), vec![-2, 1]));
    }

    use crate::rat_int;
}
