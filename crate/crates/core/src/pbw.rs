//! Normal ordering in the enveloping algebra of `g_{n,m}`.
//!
//! Elements are finite sums of PBW monomials `F^a H^b E^c` (order `F < H < E`)
//! with rational coefficients. Products are computed by left-multiplying a
//! normal-ordered element by one generator at a time, using the closed forms
//!
//! * `H·F^a = F^a·(H - na)`
//! * `E·F^a = F^a·E + ma·F^{a-1}·H - (mn·a(a-1)/2)·F^{a-1}`
//! * `E·H^b = (H - n)^b·E`

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcmod::WeightModule;
use crate::hecke::GradedVector;
use crate::scalar::{format_rational, int, parse_rational, Coefficient, Rational};
use crate::zform::ZForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    E,
    F,
    H,
}

impl FromStr for Gen {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E" => Ok(Gen::E),
            "F" => Ok(Gen::F),
            "H" => Ok(Gen::H),
            _ => Err(Error::Parse(format!("unknown generator {s:?}"))),
        }
    }
}

/// A scalar multiple of a word in the generators, read left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub coeff: Rational,
    pub letters: Vec<Gen>,
}

impl Word {
    pub fn new(letters: Vec<Gen>) -> Self {
        Word {
            coeff: Rational::one(),
            letters,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            coeff: &self.coeff * &other.coeff,
            letters,
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `"EEF"`, `"E F"`, or `"-1/2*FHE"`.
    fn from_str(s: &str) -> Result<Self> {
        let (coeff, body) = match s.split_once('*') {
            Some((c, rest)) => (parse_rational(c)?, rest),
            None => (Rational::one(), s),
        };
        let letters = body
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_string().parse())
            .collect::<Result<Vec<Gen>>>()?;
        Ok(Word { coeff, letters })
    }
}

/// Exponent triple `(a, b, c)` of `F^a H^b E^c`.
pub type Monomial = (u32, u32, u32);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UeaElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl UeaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial((0, 0, 0), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn generator(g: Gen) -> Self {
        let m = match g {
            Gen::F => (1, 0, 0),
            Gen::H => (0, 1, 0),
            Gen::E => (0, 0, 1),
        };
        Self::monomial(m, Rational::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    /// Adjoint weight `n(c - a)` if all terms share it.
    pub fn weight(&self, g: &ZForm) -> Option<i64> {
        let mut ws = self
            .terms
            .keys()
            .map(|&(a, _, c)| monomial_weight(g, (a, 0, c)));
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }

    /// The part of adjoint weight `w`.
    pub fn weight_component(&self, g: &ZForm, w: i64) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if monomial_weight(g, *m) == w {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    /// The product `self · other` in normal form.
    pub fn mul(&self, other: &Self, g: &ZForm) -> Self {
        let mut out = Self::zero();
        for (&(a, b, c), coef) in &self.terms {
            let mut acc = other.clone();
            for _ in 0..c {
                acc = left_mul(g, Gen::E, &acc);
            }
            for _ in 0..b {
                acc = left_mul(g, Gen::H, &acc);
            }
            for _ in 0..a {
                acc = left_mul(g, Gen::F, &acc);
            }
            out = out.add(&acc.scale(coef));
        }
        out
    }
}

pub fn monomial_weight(g: &ZForm, (a, _, c): Monomial) -> i64 {
    g.n * (c as i64 - a as i64)
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut r = Rational::one();
    for i in 0..k {
        r = r * int((n - i) as i64) / int((i + 1) as i64);
    }
    r
}

/// `x · u` for a generator `x` and a normal-ordered `u`.
pub fn left_mul(g: &ZForm, x: Gen, u: &UeaElement) -> UeaElement {
    let (n, m) = (int(g.n), int(g.m));
    let mut out = UeaElement::zero();
    for (&(a, b, c), coef) in &u.terms {
        match x {
            Gen::F => out.add_term((a + 1, b, c), coef.clone()),
            Gen::H => {
                out.add_term((a, b + 1, c), coef.clone());
                out.add_term((a, b, c), -(coef * &n * int(a as i64)));
            }
            Gen::E => {
                // F^a (H - n)^b E^{c+1}
                for k in 0..=b {
                    let sign_pow = num_traits::pow(-n.clone(), (b - k) as usize);
                    out.add_term((a, k, c + 1), coef * binomial(b, k) * sign_pow);
                }
                if a > 0 {
                    let a_q = int(a as i64);
                    out.add_term((a - 1, b + 1, c), coef * &m * &a_q);
                    let lower = &m * &n * &a_q * (&a_q - int(1)) / int(2);
                    out.add_term((a - 1, b, c), -(coef * lower));
                }
            }
        }
    }
    out
}

/// The PBW normal form of a word.
pub fn normal_form(word: &Word, g: &ZForm) -> UeaElement {
    let mut acc = UeaElement::one();
    for &x in word.letters.iter().rev() {
        acc = left_mul(g, x, &acc);
    }
    acc.scale(&word.coeff)
}

/// Applies `u` to `v` in `module`, monomial by monomial, rightmost factor
/// first. Every coefficient produced along the way must lie in the module's
/// ring.
pub fn act<C: Coefficient>(
    u: &UeaElement,
    module: &WeightModule<C>,
    v: &GradedVector<C>,
) -> Result<GradedVector<C>> {
    let mut out = GradedVector::zero(v.lattice());
    for (&(a, b, c), coef) in &u.terms {
        let mut acc = v.clone();
        for _ in 0..c {
            acc = module.apply(Gen::E, &acc)?;
        }
        for _ in 0..b {
            acc = module.apply(Gen::H, &acc)?;
        }
        for _ in 0..a {
            acc = module.apply(Gen::F, &acc)?;
        }
        let scaled = acc.scale(&C::from_rational(coef.clone()));
        module.check_ring(&scaled)?;
        out = out.add(&scaled);
    }
    Ok(out)
}

impl fmt::Display for UeaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(a, b, c), coef)| {
                let mut mono = String::new();
                for (g, e) in [("F", a), ("H", b), ("E", c)] {
                    match e {
                        0 => {}
                        1 => mono.push_str(g),
                        _ => mono.push_str(&format!("{g}^{e}")),
                    }
                }
                if mono.is_empty() {
                    format_rational(coef)
                } else if coef.is_one() {
                    mono
                } else {
                    format!("{}*{mono}", format_rational(coef))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for UeaElement {
    /// JSON form `[[a, b, c, "coeff"], ...]`.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (&(a, b, c), coef) in &self.terms {
            seq.serialize_element(&(a, b, c, format_rational(coef)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for UeaElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<(u32, u32, u32, String)>::deserialize(d)?;
        let mut out = UeaElement::zero();
        for (a, b, c, coef) in raw {
            out.add_term((a, b, c), parse_rational(&coef).map_err(de::Error::custom)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::zform::make_zform;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn single_relation() {
        let g = make_zform(1, 1, int(1)).unwrap();
        let ef = normal_form(&w("EF"), &g);
        let mut expected = UeaElement::zero();
        expected.add_term((1, 0, 1), int(1));
        expected.add_term((0, 1, 0), int(1));
        assert_eq!(ef, expected);
        assert_eq!(
            serde_json::to_string(&ef).unwrap(),
            r#"[[0,1,0,"1"],[1,0,1,"1"]]"#
        );
    }

    #[test]
    fn defining_relations_in_every_form() {
        for n in 1..=3 {
            for m in 1..=3 {
                let g = make_zform(n, m, int(1)).unwrap();
                let comm = |x: &str, y: &str| {
                    normal_form(&w(&format!("{x}{y}")), &g)
                        .add(&normal_form(&w(&format!("{y}{x}")), &g).scale(&int(-1)))
                };
                assert_eq!(comm("E", "F"), UeaElement::monomial((0, 1, 0), int(m)));
                assert_eq!(comm("H", "E"), UeaElement::monomial((0, 0, 1), int(n)));
                assert_eq!(comm("H", "F"), UeaElement::monomial((1, 0, 0), int(-n)));
            }
        }
    }

    #[test]
    fn f_e_squared_identity() {
        // F E^2 = E^2 F - 2m EH - nm E, all sides normalized
        for (n, m) in [(1, 1), (2, 3), (3, 2)] {
            let g = make_zform(n, m, int(1)).unwrap();
            let lhs = normal_form(&w("FEE"), &g);
            let rhs = normal_form(&w("EEF"), &g)
                .add(&normal_form(&w("EH"), &g).scale(&int(-2 * m)))
                .add(&normal_form(&w("E"), &g).scale(&int(-n * m)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn e_past_power_of_f_identity() {
        // E F^{p+1} = F^{p+1} E + (nm p(p+1)/2) F^p + m(p+1) H F^p
        for (n, m) in [(1, 1), (2, 1), (3, 4)] {
            let g = make_zform(n, m, int(1)).unwrap();
            for p in 0..6u32 {
                let fp1 = "F".repeat(p as usize + 1);
                let fp = "F".repeat(p as usize);
                let lhs = normal_form(&w(&format!("E{fp1}")), &g);
                let pq = int(p as i64);
                let rhs = normal_form(&w(&format!("{fp1}E")), &g)
                    .add(
                        &normal_form(&w(&fp), &g)
                            .scale(&(int(n * m) * &pq * (&pq + int(1)) / int(2))),
                    )
                    .add(&normal_form(&w(&format!("H{fp}")), &g).scale(&(int(m) * (&pq + int(1)))));
                assert_eq!(lhs, rhs, "p = {p}");
            }
        }
    }

    #[test]
    fn weight_components() {
        let g = make_zform(2, 1, int(1)).unwrap();
        let u = normal_form(&w("EF"), &g).add(&normal_form(&w("E"), &g));
        assert_eq!(u.weight(&g), None);
        assert_eq!(u.weight_component(&g, 2), UeaElement::generator(Gen::E));
        assert_eq!(normal_form(&w("EEF"), &g).weight(&g), Some(2));
        assert_eq!(w("-1/2*FHE").coeff, rat(-1, 2));
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        (
            prop::collection::vec(prop_oneof![Just(Gen::E), Just(Gen::F), Just(Gen::H)], 0..6),
            -3i64..4,
        )
            .prop_map(|(letters, c)| Word {
                coeff: int(c),
                letters,
            })
    }

    proptest! {
        /// Normalizing a normal form changes nothing.
        #[test]
        fn normal_form_is_idempotent(word in word_strategy(), n in 1i64..4, m in 1i64..4) {
            let g = make_zform(n, m, int(1)).unwrap();
            let u = normal_form(&word, &g);
            prop_assert_eq!(u.mul(&UeaElement::one(), &g), u.clone());
            prop_assert_eq!(UeaElement::one().mul(&u, &g), u);
        }

        /// Normal form turns concatenation into multiplication.
        #[test]
        fn normal_form_is_multiplicative(w1 in word_strategy(), w2 in word_strategy(), n in 1i64..4, m in 1i64..4) {
            let g = make_zform(n, m, int(1)).unwrap();
            let lhs = normal_form(&w1.concat(&w2), &g);
            let rhs = normal_form(&w1, &g).mul(&normal_form(&w2, &g), &g);
            prop_assert_eq!(lhs, rhs);
        }

        /// Words are weight-homogeneous and normal ordering keeps the weight.
        #[test]
        fn normal_form_preserves_weight(word in word_strategy(), n in 1i64..4, m in 1i64..4) {
            let g = make_zform(n, m, int(1)).unwrap();
            let u = normal_form(&word, &g);
            let expected: i64 = word.letters.iter().map(|l| match l { Gen::E => n, Gen::F => -n, Gen::H => 0 }).sum();
            if !u.is_zero() {
                prop_assert_eq!(u.weight(&g), Some(expected));
            }
        }

        /// Multiplication is associative.
        #[test]
        fn multiplication_is_associative(a in word_strategy(), b in word_strategy(), c in word_strategy()) {
            let g = make_zform(2, 3, int(1)).unwrap();
            let (x, y, z) = (normal_form(&a, &g), normal_form(&b, &g), normal_form(&c, &g));
            prop_assert_eq!(x.mul(&y, &g).mul(&z, &g), x.mul(&y.mul(&z, &g), &g));
        }
    }
}
