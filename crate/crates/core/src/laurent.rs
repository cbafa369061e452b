//! Exact Laurent-polynomial arithmetic over the integers in `v = q^{1/2}`.
//!
//! Every polynomial family computed by this crate lives in the ring
//! `Z[q^{1/2}, q^{-1/2}]`. Exponents are stored as integer powers of `v`,
//! so `q^n` has v-exponent `2n` and half-integer powers of `q` stay
//! integral. Coefficients are `i64` with checked arithmetic: an overflow
//! panics instead of wrapping.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// Exponent-span constraints used by degree and positivity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanConstraint {
    /// Every exponent is even and nonnegative, i.e. the value lies in `Z[q]`.
    NonNegQ,
    /// Every v-exponent is <= -1, i.e. the value lies in `q^{-1/2} Z[q^{-1/2}]`.
    StrictlyNegativeV,
}

/// A Laurent polynomial in `v = q^{1/2}` with integer coefficients.
///
/// Canonical form: no stored coefficient is zero, so structural equality
/// is polynomial equality. Values are immutable once built.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, i64>,
}

fn add_coeff(map: &mut BTreeMap<i32, i64>, exp: i32, c: i64) {
    if c == 0 {
        return;
    }
    let entry = map.entry(exp).or_insert(0);
    *entry = entry
        .checked_add(c)
        .expect("laurent coefficient overflow in addition");
    if *entry == 0 {
        map.remove(&exp);
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    /// The monomial `c * v^exp`.
    pub fn monomial(c: i64, exp: i32) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(exp, c);
        }
        LaurentPoly { coeffs }
    }

    /// `v^exp`.
    pub fn v_pow(exp: i32) -> Self {
        LaurentPoly::monomial(1, exp)
    }

    /// `q^n = v^{2n}`.
    pub fn q_pow(n: i32) -> Self {
        LaurentPoly::monomial(1, 2 * n)
    }

    /// `q - 1`, the deformation coefficient of the quadratic relation.
    pub fn q_minus_one() -> Self {
        LaurentPoly::q_pow(1) - LaurentPoly::one()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff_at(0) == 1
    }

    /// Coefficient of `v^exp` (zero when absent).
    pub fn coeff_at(&self, exp: i32) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    /// `(v-exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// The bar involution `q -> q^{-1}`: every v-exponent is negated.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    /// True iff every exponent satisfies the constraint. The zero
    /// polynomial vacuously satisfies every constraint.
    pub fn in_span(&self, constraint: SpanConstraint) -> bool {
        self.coeffs.keys().all(|&e| match constraint {
            SpanConstraint::NonNegQ => e >= 0 && e % 2 == 0,
            SpanConstraint::StrictlyNegativeV => e <= -1,
        })
    }

    /// The part of the polynomial with strictly negative v-exponents.
    pub fn strictly_negative_part(&self) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&e, _)| e < 0)
                .map(|(&e, &c)| (e, c))
                .collect(),
        }
    }

    /// Multiply by the monomial `c * v^exp`.
    pub fn mul_monomial(&self, c: i64, exp: i32) -> Self {
        if c == 0 {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, &k)| {
                    (
                        e + exp,
                        k.checked_mul(c)
                            .expect("laurent coefficient overflow in multiplication"),
                    )
                })
                .collect(),
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut coeffs = self.coeffs.clone();
        for (&e, &c) in &rhs.coeffs {
            add_coeff(&mut coeffs, e, c);
        }
        LaurentPoly { coeffs }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut coeffs = self.coeffs.clone();
        for (&e, &c) in &rhs.coeffs {
            add_coeff(&mut coeffs, e, c.checked_neg().expect("laurent coefficient overflow"));
        }
        LaurentPoly { coeffs }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    // exponents add under multiplication
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut coeffs = BTreeMap::new();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &rhs.coeffs {
                let c = c1
                    .checked_mul(c2)
                    .expect("laurent coefficient overflow in multiplication");
                add_coeff(&mut coeffs, e1 + e2, c);
            }
        }
        LaurentPoly { coeffs }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, &c)| (e, c.checked_neg().expect("laurent coefficient overflow")))
                .collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for p in iter {
            acc = &acc + &p;
        }
        acc
    }
}

// ---- Rendering and parsing ----
//
// Terms are printed in ascending v-exponent order, in q-notation:
// even v-exponent 2n prints as "q^n" ("1", "q", "q^2", "q^(-1)"),
// odd v-exponent prints as a half power ("q^(1/2)", "q^(-3/2)").

fn fmt_power(exp: i32, out: &mut String) {
    if exp % 2 == 0 {
        let n = exp / 2;
        match n {
            0 => out.push('1'),
            1 => out.push('q'),
            _ if n > 0 => out.push_str(&format!("q^{}", n)),
            _ => out.push_str(&format!("q^({})", n)),
        }
    } else {
        out.push_str(&format!("q^({}/2)", exp));
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (&exp, &c)) in self.coeffs.iter().enumerate() {
            let mag = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else if c < 0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if exp == 0 {
                out.push_str(&mag.to_string());
            } else {
                if mag != 1 {
                    out.push_str(&mag.to_string());
                }
                fmt_power(exp, &mut out);
            }
        }
        write!(f, "{}", out)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Error from [`LaurentPoly::from_str`].
#[derive(Debug, Clone, thiserror::Error)]
#[error("invalid polynomial {input:?}: {reason}")]
pub struct ParsePolyError {
    pub input: String,
    pub reason: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn integer(&mut self) -> Result<i64, String> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self
            .src
            .as_bytes()
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err("expected integer".into());
        }
        self.src[start..self.pos]
            .parse::<i64>()
            .map_err(|e| e.to_string())
    }

    /// One unsigned term: INT, INT q-power, or bare q-power. Returns
    /// (coeff, v-exp); the sign is handled by the caller.
    fn term(&mut self) -> Result<(i64, i32), String> {
        let mut coeff: i64 = 1;
        let mut saw_int = false;
        if matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            coeff = self.integer()?;
            saw_int = true;
        }
        if self.peek() == Some(b'q') {
            self.pos += 1;
            let exp = self.q_exponent()?;
            Ok((coeff, exp))
        } else if saw_int {
            Ok((coeff, 0))
        } else {
            Err("expected term".into())
        }
    }

    /// Exponent after a `q`: nothing (q^1), `^INT`, `^(INT)`, or `^(INT/2)`.
    fn q_exponent(&mut self) -> Result<i32, String> {
        if self.peek() != Some(b'^') {
            return Ok(2);
        }
        self.pos += 1;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let n = self.integer()?;
            let exp = if self.peek() == Some(b'/') {
                self.pos += 1;
                if self.bump() != Some(b'2') {
                    return Err("expected denominator 2".into());
                }
                n
            } else {
                2 * n
            };
            if self.bump() != Some(b')') {
                return Err("expected ')'".into());
            }
            i32::try_from(exp).map_err(|_| "exponent out of range".into())
        } else {
            let n = self.integer()?;
            i32::try_from(2 * n).map_err(|_| "exponent out of range".into())
        }
    }
}

impl FromStr for LaurentPoly {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ParsePolyError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut p = Parser { src: s, pos: 0 };
        let mut coeffs = BTreeMap::new();
        let mut sign: i64 = 1;
        if p.peek() == Some(b'-') {
            p.bump();
            sign = -1;
        }
        loop {
            let (c, e) = p.term().map_err(|r| err(&r))?;
            add_coeff(
                &mut coeffs,
                e,
                c.checked_mul(sign).ok_or_else(|| err("overflow"))?,
            );
            match p.peek() {
                None => break,
                Some(b'+') => {
                    p.bump();
                    sign = 1;
                }
                Some(b'-') => {
                    p.bump();
                    sign = -1;
                }
                Some(other) => {
                    return Err(err(&format!("unexpected character {:?}", other as char)))
                }
            }
        }
        Ok(LaurentPoly { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> LaurentPoly {
        LaurentPoly::q_pow(1)
    }

    #[test]
    fn add_cancels() {
        // (q - 1) + 1 = q
        let p = &q() - &LaurentPoly::one();
        assert_eq!(&p + &LaurentPoly::one(), q());
    }

    #[test]
    fn add_identity_and_doubling() {
        let p = &q() - &LaurentPoly::one();
        assert_eq!(&LaurentPoly::zero() + &p, p);
        let doubled = &p + &p;
        assert_eq!(doubled.coeff_at(2), 2);
        assert_eq!(doubled.coeff_at(0), -2);
        assert_eq!(doubled.to_string(), "-2 + 2q");
    }

    #[test]
    fn mul_binomial_square() {
        let p = &q() - &LaurentPoly::one();
        let sq = &p * &p;
        // q^2 - 2q + 1
        assert_eq!(sq.coeff_at(4), 1);
        assert_eq!(sq.coeff_at(2), -2);
        assert_eq!(sq.coeff_at(0), 1);
    }

    #[test]
    fn mul_inverse_exponents() {
        assert!((&LaurentPoly::v_pow(1) * &LaurentPoly::v_pow(-1)).is_one());
    }

    #[test]
    fn mul_type_a_closed_formula_factor() {
        // (-q)(1-q) = -q + q^2
        let minus_q = LaurentPoly::monomial(-1, 2);
        let one_minus_q = &LaurentPoly::one() - &q();
        let prod = &minus_q * &one_minus_q;
        assert_eq!(prod.to_string(), "-q + q^2");
    }

    #[test]
    fn bar_examples() {
        assert_eq!(q().bar(), LaurentPoly::q_pow(-1));
        assert_eq!(LaurentPoly::constant(5).bar(), LaurentPoly::constant(5));
        let sym = &LaurentPoly::v_pow(1) + &LaurentPoly::v_pow(-1);
        assert_eq!(sym.bar(), sym);
    }

    #[test]
    fn coeff_extraction() {
        assert_eq!(LaurentPoly::v_pow(-1).coeff_at(-1), 1);
        let p = &q() - &LaurentPoly::one();
        assert_eq!(p.coeff_at(0), -1);
        assert_eq!(p.coeff_at(2), 1);
        assert_eq!(p.coeff_at(17), 0);
    }

    #[test]
    fn span_constraints() {
        let p = &LaurentPoly::v_pow(-1) + &LaurentPoly::v_pow(-2);
        assert!(p.in_span(SpanConstraint::StrictlyNegativeV));
        assert!(!LaurentPoly::one().in_span(SpanConstraint::StrictlyNegativeV));
        let qm1 = &q() - &LaurentPoly::one();
        assert!(qm1.in_span(SpanConstraint::NonNegQ));
        assert!(!LaurentPoly::v_pow(1).in_span(SpanConstraint::NonNegQ));
        assert!(!LaurentPoly::q_pow(-1).in_span(SpanConstraint::NonNegQ));
    }

    #[test]
    fn display_examples() {
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::v_pow(-1).to_string(), "q^(-1/2)");
        assert_eq!(LaurentPoly::q_pow(-1).to_string(), "q^(-1)");
        assert_eq!(
            (&LaurentPoly::v_pow(-1) + &LaurentPoly::v_pow(1)).to_string(),
            "q^(-1/2) + q^(1/2)"
        );
        assert_eq!((&q() * &q()).to_string(), "q^2");
    }

    #[test]
    fn parse_round_trip_basics() {
        for s in [
            "0",
            "1",
            "-1",
            "q",
            "-q + q^2",
            "q^(-1/2)",
            "2q^(3/2) - 5 + q^(-2)",
        ] {
            let p: LaurentPoly = s.parse().unwrap();
            let back: LaurentPoly = p.to_string().parse().unwrap();
            assert_eq!(p, back, "round trip through {s}");
        }
        assert!("q^".parse::<LaurentPoly>().is_err());
        assert!("2 +".parse::<LaurentPoly>().is_err());
        assert!("x".parse::<LaurentPoly>().is_err());
    }

    prop_compose! {
        fn arb_poly()(terms in proptest::collection::vec((-6i32..=6, -9i64..=9), 0..6)) -> LaurentPoly {
            let mut p = LaurentPoly::zero();
            for (e, c) in terms {
                p = &p + &LaurentPoly::monomial(c, e);
            }
            p
        }
    }

    proptest! {
        #[test]
        fn bar_is_an_involution(p in arb_poly()) {
            prop_assert_eq!(p.bar().bar(), p);
        }

        #[test]
        fn bar_is_multiplicative(p in arb_poly(), r in arb_poly()) {
            prop_assert_eq!((&p * &r).bar(), &p.bar() * &r.bar());
        }

        #[test]
        fn ring_axioms(p in arb_poly(), r in arb_poly(), s in arb_poly()) {
            prop_assert_eq!(&(&p + &r) + &s, &p + &(&r + &s));
            prop_assert_eq!(&(&p * &r) * &s, &p * &(&r * &s));
            prop_assert_eq!(&p * &(&r + &s), &(&p * &r) + &(&p * &s));
            prop_assert_eq!(&p * &r, &r * &p);
        }

        #[test]
        fn display_parse_round_trip(p in arb_poly()) {
            let back: LaurentPoly = p.to_string().parse().unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
