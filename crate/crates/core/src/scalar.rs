//! Exact scalars: arbitrary-precision rationals, finite Laurent polynomials in
//! `z` with rational coefficients, the coefficient rings they are tested
//! against, and the 2-adic valuation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// The rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"3"`, `"-1/2"`, `"+7/4"`. The unicode minus sign is accepted.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let cleaned: String = s.trim().replace('\u{2212}', "-");
    let cleaned = cleaned.strip_prefix('+').unwrap_or(&cleaned);
    let (num, den) = match cleaned.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (cleaned.trim(), "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?;
    let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Returns the integer value of `q` if it is an integer that fits in `i64`.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

fn ord2_int(x: &BigInt) -> i64 {
    x.trailing_zeros().map(|t| t as i64).unwrap_or(0)
}

/// The 2-adic valuation: the exponent `v` with `x = 2^v · (odd/odd)`.
pub fn ord2(x: &Rational) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    Ok(ord2_int(x.numer()) - ord2_int(x.denom()))
}

/// Greatest common divisor in the group of nonzero rationals modulo sign: the
/// positive generator of `Zx + Zy`.
pub fn gcd_rational(x: &Rational, y: &Rational) -> Rational {
    let num = (x.numer() * y.denom()).gcd(&(y.numer() * x.denom()));
    let den = x.denom() * y.denom();
    Rational::new(num, den)
}

/// `2^e` as a rational; negative exponents give fractions.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Serde adapter storing a rational as its `"num/den"` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod serde_rational_opt {
    use super::*;

    pub fn serialize<S: Serializer>(
        q: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(de::Error::custom))
            .transpose()
    }
}

/// A finite Laurent polynomial `Σ c_k z^k` with rational coefficients, stored
/// densely from the lowest to the highest nonzero exponent.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Laurent {
    low: i64,
    coeffs: Vec<Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rational, exp: i64) -> Self {
        Self::from_dense(exp, vec![c])
    }

    /// The variable `z`.
    pub fn z() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn from_dense(low: i64, coeffs: Vec<Rational>) -> Self {
        let mut l = Laurent { low, coeffs };
        l.normalize();
        l
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut acc = Laurent::zero();
        for (e, c) in terms {
            acc = &acc + &Laurent::monomial(c, e);
        }
        acc
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
            return;
        }
        self.coeffs.drain(..lead);
        self.low += lead as i64;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (`None` for zero).
    pub fn low_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coefficient(&self, exp: i64) -> Rational {
        let idx = exp - self.low;
        if idx < 0 {
            return Rational::zero();
        }
        self.coeffs
            .get(idx as usize)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> Vec<(i64, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.low + i as i64, c.clone()))
            .collect()
    }

    /// The value if this is a constant polynomial.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.high_exponent() {
            None => Some(Rational::zero()),
            Some(0) if self.low == 0 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.low >= 0
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_dense(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Laurent {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Evaluation at `z = c`; a negative exponent at `c = 0` is a pole.
    pub fn eval(&self, c: &Rational) -> Result<Rational> {
        if c.is_zero() {
            if self.low < 0 && !self.is_zero() {
                return Err(Error::Pole(format_rational(c)));
            }
            return Ok(self.coefficient(0));
        }
        let mut acc = Rational::zero();
        for (e, coef) in self.terms() {
            acc += coef * power(c, e);
        }
        Ok(acc)
    }
}

fn power(c: &Rational, e: i64) -> Rational {
    let base = if e < 0 { c.recip() } else { c.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl std::ops::Add for &Laurent {
    type Output = Laurent;
    fn add(self, o: &Laurent) -> Laurent {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self
            .high_exponent()
            .unwrap()
            .max(o.high_exponent().unwrap());
        let coeffs = (low..=high)
            .map(|e| self.coefficient(e) + o.coefficient(e))
            .collect();
        Laurent::from_dense(low, coeffs)
    }
}

impl std::ops::Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, o: &Laurent) -> Laurent {
        self + &(-o)
    }
}

impl std::ops::Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, o: &Laurent) -> Laurent {
        if self.is_zero() || o.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Laurent::from_dense(self.low + o.low, coeffs)
    }
}

impl fmt::Display for Laurent {
    /// Renders as `c0 + c1*z + c2*z^2`, lowest exponent first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let monomial = match e {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{e}"),
            };
            if e == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{monomial}")?;
            } else {
                write!(f, "{abs}*{monomial}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Laurent {
    type Err = Error;

    /// Accepts sums of terms such as `1 + z`, `2*z^2`, `-1/2*z^-1`, `3z`.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s
            .replace('\u{2212}', "-")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut pieces: Vec<String> = Vec::new();
        let mut current = String::new();
        let mut prev: Option<char> = None;
        for ch in text.chars() {
            if (ch == '+' || ch == '-') && !current.is_empty() && prev != Some('^') {
                pieces.push(std::mem::take(&mut current));
            }
            current.push(ch);
            prev = Some(ch);
        }
        pieces.push(current);
        let mut acc = Laurent::zero();
        for piece in pieces {
            acc = &acc + &parse_term(&piece)?;
        }
        Ok(acc)
    }
}

fn parse_term(term: &str) -> Result<Laurent> {
    let bad = || Error::Parse(format!("bad polynomial term {term:?}"));
    let (sign, body) = match term.strip_prefix('-') {
        Some(rest) => (-Rational::one(), rest),
        None => (Rational::one(), term.strip_prefix('+').unwrap_or(term)),
    };
    let Some(zpos) = body.find('z') else {
        return Ok(Laurent::constant(sign * parse_rational(body)?));
    };
    let coef_part = body[..zpos].trim_end_matches('*');
    let coef = if coef_part.is_empty() {
        Rational::one()
    } else {
        parse_rational(coef_part)?
    };
    let rest = &body[zpos + 1..];
    let exp = if rest.is_empty() {
        1
    } else {
        let e = rest.strip_prefix('^').ok_or_else(bad)?;
        e.trim_start_matches('(')
            .trim_end_matches(')')
            .parse::<i64>()
            .map_err(|_| bad())?
    };
    Ok(Laurent::monomial(sign * coef, exp))
}

impl Serialize for Laurent {
    /// JSON form `[[exp, "num/den"], ...]`.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.terms();
        let mut seq = s.serialize_seq(Some(terms.len()))?;
        for (e, c) in &terms {
            seq.serialize_element(&(e, format_rational(c)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<(i64, String)>::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            terms.push((e, parse_rational(&c).map_err(de::Error::custom)?));
        }
        Ok(Laurent::from_terms(terms))
    }
}

/// The coefficient rings appearing in the computations, with the canonical
/// inclusions `Z ⊂ Z[1/N] ⊂ Q ⊂ Q[z] ⊂ Q[z, 1/z]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientRing {
    Integers,
    LocalizedIntegers(u64),
    Rationals,
    Poly,
    Laurent,
}

impl CoefficientRing {
    pub fn localized(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "localization requires N >= 1".into(),
            ));
        }
        Ok(CoefficientRing::LocalizedIntegers(n))
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        match self {
            CoefficientRing::Integers => q.is_integer(),
            CoefficientRing::LocalizedIntegers(n) => denominator_divides_power(q.denom(), *n),
            _ => true,
        }
    }

    pub fn contains_laurent(&self, x: &Laurent) -> bool {
        match self {
            CoefficientRing::Laurent => true,
            CoefficientRing::Poly => x.is_polynomial(),
            _ => x.as_constant().is_some_and(|c| self.contains_rational(&c)),
        }
    }
}

/// True iff every prime factor of `den` divides `n`.
fn denominator_divides_power(den: &BigInt, n: u64) -> bool {
    let n = BigInt::from(n);
    let mut d = den.abs();
    loop {
        if d.is_one() {
            return true;
        }
        let g = d.gcd(&n);
        if g.is_one() {
            return false;
        }
        while (&d % &g).is_zero() {
            d /= &g;
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integers => write!(f, "Z"),
            CoefficientRing::LocalizedIntegers(n) => write!(f, "Z[1/{n}]"),
            CoefficientRing::Rationals => write!(f, "Q"),
            CoefficientRing::Poly => write!(f, "Q[z]"),
            CoefficientRing::Laurent => write!(f, "Q[z,1/z]"),
        }
    }
}

/// The value carried by a [`Scalar`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarValue {
    Rational(Rational),
    Laurent(Laurent),
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarValue::Rational(q) => write!(f, "{q}"),
            ScalarValue::Laurent(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for ScalarValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ScalarValue::Rational(q) => s.serialize_str(&format_rational(q)),
            ScalarValue::Laurent(p) => p.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ScalarValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Poly(Laurent),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_rational(&s)
                .map(ScalarValue::Rational)
                .map_err(de::Error::custom),
            Raw::Poly(p) => Ok(ScalarValue::Laurent(p)),
        }
    }
}

/// Membership under the canonical inclusions of rings.
pub fn in_ring(x: &ScalarValue, ring: &CoefficientRing) -> bool {
    match x {
        ScalarValue::Rational(q) => ring.contains_rational(q),
        ScalarValue::Laurent(p) => ring.contains_laurent(p),
    }
}

/// A value tagged with the ring it is declared to live in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scalar {
    pub value: ScalarValue,
    pub ring: CoefficientRing,
}

impl Scalar {
    pub fn new(value: ScalarValue, ring: CoefficientRing) -> Result<Self> {
        if !in_ring(&value, &ring) {
            return Err(Error::NotInRing {
                scalar: value.to_string(),
                ring: ring.to_string(),
            });
        }
        Ok(Scalar { value, ring })
    }
}

/// Exact coefficient arithmetic shared by rational and Laurent-valued modules.
pub trait Coefficient:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn vanishes(&self) -> bool;
    fn from_rational(q: Rational) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn in_ring(&self, ring: &CoefficientRing) -> bool;
    fn to_value(&self) -> ScalarValue;

    fn from_int(v: i64) -> Self {
        Self::from_rational(int(v))
    }
}

impl Coefficient for Rational {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn in_ring(&self, ring: &CoefficientRing) -> bool {
        ring.contains_rational(self)
    }
    fn to_value(&self) -> ScalarValue {
        ScalarValue::Rational(self.clone())
    }
}

impl Coefficient for Laurent {
    fn zero_elem() -> Self {
        Laurent::zero()
    }
    fn one_elem() -> Self {
        Laurent::one()
    }
    fn vanishes(&self) -> bool {
        Laurent::is_zero(self)
    }
    fn from_rational(q: Rational) -> Self {
        Laurent::constant(q)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn in_ring(&self, ring: &CoefficientRing) -> bool {
        ring.contains_laurent(self)
    }
    fn to_value(&self) -> ScalarValue {
        ScalarValue::Laurent(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn ord2_examples() {
        assert_eq!(ord2(&int(8)).unwrap(), 3);
        assert_eq!(ord2(&int(1)).unwrap(), 0);
        assert_eq!(ord2(&rat(-1, 2)).unwrap(), -1);
        assert_eq!(ord2(&rat(12, 5)).unwrap(), 2);
        assert_eq!(ord2(&int(0)), Err(Error::ValuationOfZero));
        assert_eq!(
            Error::ValuationOfZero.to_string(),
            "valuation of zero undefined"
        );
    }

    #[test]
    fn membership_examples() {
        let half = ScalarValue::Rational(rat(1, 2));
        assert!(!in_ring(&half, &CoefficientRing::Integers));
        assert!(in_ring(&half, &CoefficientRing::LocalizedIntegers(6)));
        assert!(!in_ring(
            &ScalarValue::Rational(rat(1, 5)),
            &CoefficientRing::LocalizedIntegers(6)
        ));
        assert!(in_ring(
            &ScalarValue::Rational(rat(7, 36)),
            &CoefficientRing::LocalizedIntegers(6)
        ));
        let zinv = ScalarValue::Laurent(Laurent::monomial(int(1), -1));
        assert!(!in_ring(&zinv, &CoefficientRing::Poly));
        assert!(in_ring(&zinv, &CoefficientRing::Laurent));
        assert!(CoefficientRing::localized(0).is_err());
        assert!(Scalar::new(half, CoefficientRing::Integers).is_err());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rat(-1, 2)), "-1/2");
        assert_eq!(format_rational(&int(3)), "3");
        assert_eq!(q("\u{2212}1/2"), rat(-1, 2));
        assert_eq!(q("+6/4"), rat(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn laurent_parsing_and_display() {
        let p: Laurent = "1 + z".parse().unwrap();
        assert_eq!(p.terms(), vec![(0, int(1)), (1, int(1))]);
        let p: Laurent = "-1/2*z^-1 + 3 - z^2".parse().unwrap();
        assert_eq!(p.to_string(), "-1/2*z^-1 + 3 - z^2");
        let p: Laurent = "2z".parse().unwrap();
        assert_eq!(p, Laurent::monomial(int(2), 1));
        assert_eq!("0".parse::<Laurent>().unwrap(), Laurent::zero());
        assert!("z^".parse::<Laurent>().is_err());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[[1,"2"]]"#);
        assert_eq!(serde_json::from_str::<Laurent>(&json).unwrap(), p);
    }

    #[test]
    fn laurent_eval_and_poles() {
        let p: Laurent = "z^-1 + 2".parse().unwrap();
        assert_eq!(p.eval(&int(2)).unwrap(), rat(5, 2));
        assert!(matches!(p.eval(&int(0)), Err(Error::Pole(_))));
        let poly: Laurent = "1 + z^2".parse().unwrap();
        assert_eq!(poly.eval(&int(0)).unwrap(), int(1));
    }

    #[test]
    fn rational_gcd() {
        assert_eq!(gcd_rational(&rat(1, 2), &rat(1, 3)), rat(1, 6));
        assert_eq!(gcd_rational(&int(4), &int(6)), int(2));
        assert_eq!(gcd_rational(&rat(-3, 4), &rat(9, 2)), rat(3, 4));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-500i64..500, 1i64..200).prop_map(|(a, b)| rat(a, b))
    }

    fn nonzero_rational() -> impl Strategy<Value = Rational> {
        small_rational().prop_filter("nonzero", |x| !Zero::is_zero(x))
    }

    fn small_laurent() -> impl Strategy<Value = Laurent> {
        (-3i64..3, prop::collection::vec(small_rational(), 0..5))
            .prop_map(|(low, cs)| Laurent::from_dense(low, cs))
    }

    proptest! {
        /// The valuation is additive on products.
        #[test]
        fn ord2_is_additive(x in nonzero_rational(), y in nonzero_rational()) {
            prop_assert_eq!(ord2(&(&x * &y)).unwrap(), ord2(&x).unwrap() + ord2(&y).unwrap());
        }

        /// Cross-multiplied sums agree with the exact sum.
        #[test]
        fn fraction_sum_identity(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let lhs = (rat(a, b) + rat(c, d)) * int(b * d);
            prop_assert_eq!(lhs, int(a * d + c * b));
        }

        /// Membership respects the chain Z ⊂ Z[1/N] ⊂ Q ⊂ Q[z] ⊂ Q[z,1/z].
        #[test]
        fn membership_is_monotone(x in small_rational(), n in 1u64..40) {
            let v = ScalarValue::Rational(x);
            let chain = [
                CoefficientRing::Integers,
                CoefficientRing::LocalizedIntegers(n),
                CoefficientRing::Rationals,
                CoefficientRing::Poly,
                CoefficientRing::Laurent,
            ];
            for w in chain.windows(2) {
                prop_assert!(!in_ring(&v, &w[0]) || in_ring(&v, &w[1]));
            }
        }

        /// Laurent arithmetic is a commutative ring and evaluation is a homomorphism.
        #[test]
        fn laurent_ring_laws(a in small_laurent(), b in small_laurent(), c in small_laurent(), t in nonzero_rational()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!((&a * &b).eval(&t).unwrap(), a.eval(&t).unwrap() * b.eval(&t).unwrap());
        }

        /// Display output parses back to the same polynomial.
        #[test]
        fn laurent_text_round_trip(a in small_laurent()) {
            let back: Laurent = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
