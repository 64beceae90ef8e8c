//! Integral models over `Z` of the principal series: when they are nonzero,
//! their support, and the powers of 2 scaling each basis vector.
//!
//! Besides the closed formulas there is an independent oracle which walks the
//! recurrences defining the extension of a torus homomorphism `φ` to the
//! parabolic subpair and reads off the least admissible `ord_2 φ(1)`.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcmod::{parabolic_zform, principal_series, CharacterModule, Support, WeightModule};
use crate::pbw::Gen;
use crate::scalar::{
    format_rational, int, ord2, pow2, rat, serde_rational, to_i64, CoefficientRing, Rational,
};
use crate::zform::SubalgebraLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Q,
    Qp,
    Qpp,
}

impl Variant {
    pub fn label(&self) -> SubalgebraLabel {
        match self {
            Variant::Q => SubalgebraLabel::Q,
            Variant::Qp => SubalgebraLabel::QPrime,
            Variant::Qpp => SubalgebraLabel::QDoublePrime,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::Q => "q",
            Variant::Qp => "qp",
            Variant::Qpp => "qpp",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(Variant::Q),
            "qp" | "q'" => Ok(Variant::Qp),
            "qpp" | "q''" => Ok(Variant::Qpp),
            _ => Err(Error::Parse(format!(
                "unknown variant {s:?} (expected q, qp or qpp)"
            ))),
        }
    }
}

/// Parameters `(n, m, ε, μ)` of an integral principal series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeParams {
    pub variant: Variant,
    pub n: i64,
    pub m: i64,
    pub eps: Rational,
    pub mu: i64,
}

impl LatticeParams {
    pub fn new(variant: Variant, n: i64, m: i64, eps: Rational, mu: i64) -> Result<Self> {
        if n < 1 || m < 1 {
            return Err(Error::InvalidParameter(format!(
                "n and m must be positive (got n = {n}, m = {m})"
            )));
        }
        if variant == Variant::Qpp && m != 2 * n {
            return Err(Error::InvalidParameter(format!(
                "q'' requires m = 2n (got n = {n}, m = {m})"
            )));
        }
        crate::hcmod::validate_eps(n, &eps)?;
        Ok(LatticeParams {
            variant,
            n,
            m,
            eps,
            mu,
        })
    }

    fn mu_over_2nm(&self) -> Rational {
        rat(self.mu, 2 * self.n * self.m)
    }

    /// Coefficient of the chain `φ(X^{s+1} ⊗ 1) = c(s) φ(X^s ⊗ 1)` along the
    /// raising operator `X` (`E` for `q`, `F` for `q'` and `q''`).
    pub fn primary(&self, p: i64, s: i64) -> Rational {
        let (mu, eps) = (int(self.mu), &self.eps);
        let nm = int(self.n * self.m);
        match self.variant {
            Variant::Q => &mu / (int(4) * &nm) + (int(s + p) + eps) / int(2),
            Variant::Qp => &mu / (int(4) * &nm) + (int(s - p) - eps) / int(2),
            Variant::Qpp => &mu / int(2) - int(self.n) * (int(s - p) - eps),
        }
    }

    /// Coefficient of `φ(Y^{s+1} X^t ⊗ 1) = d(s, t) φ(Y^s X^t ⊗ 1)` with `Y`
    /// the opposite operator.
    pub fn secondary(&self, p: i64, s: i64, t: i64) -> Rational {
        let mu = int(self.mu);
        let eps = &self.eps;
        match self.variant {
            Variant::Q => &mu / int(2) + int(self.n * self.m) * (int(s - t - p) - eps),
            Variant::Qp => &mu / int(2) + int(self.n * self.m) * (int(s - t + p) + eps),
            Variant::Qpp => &mu / int(2) + int(self.n) * (int(s - t + p) + eps),
        }
    }
}

pub fn nonvanishing(params: &LatticeParams) -> bool {
    match params.variant {
        Variant::Q => (params.mu_over_2nm() + &params.eps).is_integer(),
        Variant::Qp => (params.mu_over_2nm() - &params.eps).is_integer(),
        Variant::Qpp => params.mu % 2 == 0,
    }
}

/// The indices carrying a basis vector of the integral model.
pub fn support(params: &LatticeParams) -> Support {
    if !nonvanishing(params) {
        return Support::Empty;
    }
    let x = params.mu_over_2nm();
    match params.variant {
        Variant::Q => {
            Support::AtMost(to_i64(&(-(x + &params.eps))).expect("integral by the criterion"))
        }
        Variant::Qp => {
            Support::AtLeast(to_i64(&(x - &params.eps)).expect("integral by the criterion"))
        }
        Variant::Qpp => Support::All,
    }
}

/// `max({-Σ_{l=0}^{s} ord_2(μ/4nm + (l+p+ε)/2) : 0 <= s <= -(p + μ/2nm + ε + 1)} ∪ {0})`
/// for arbitrary rational `ε`; the upper limit must be an integer.
pub fn exponent_m_raw(p: i64, n: i64, m: i64, eps: &Rational, mu: &Rational) -> Result<i64> {
    let nm = int(n * m);
    let upper = -(int(p) + mu / (int(2) * &nm) + eps + int(1));
    let upper = to_i64(&upper).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "summation bound {} is not an integer",
            format_rational(&upper)
        ))
    })?;
    let mut best = 0;
    let mut running = 0;
    for l in 0..=upper {
        let term = mu / (int(4) * &nm) + (int(l + p) + eps) / int(2);
        running -= ord2(&term)?;
        best = best.max(running);
    }
    Ok(best)
}

/// The exponent `M_p` of the `q` model.
pub fn exponent_m(p: i64, params: &LatticeParams) -> Result<i64> {
    if params.variant != Variant::Q {
        return Err(Error::InvalidParameter(
            "M_p is defined for the q variant".into(),
        ));
    }
    match support(params) {
        Support::AtMost(top) if p > top => Err(Error::IndexAboveTop { p, top }),
        Support::AtMost(_) => exponent_m_raw(p, params.n, params.m, &params.eps, &int(params.mu)),
        _ => Err(Error::NoExtension(format!(
            "mu/2nm + eps is not an integer for {params:?}"
        ))),
    }
}

/// The exponent `N_p` of the `q'` model, computed as `M_{-p}` with `ε`
/// replaced by `-ε`.
pub fn exponent_n(p: i64, params: &LatticeParams) -> Result<i64> {
    if params.variant != Variant::Qp {
        return Err(Error::InvalidParameter(
            "N_p is defined for the q' variant".into(),
        ));
    }
    match support(params) {
        Support::AtLeast(bottom) if p < bottom => Err(Error::IndexBelowBottom { p, bottom }),
        Support::AtLeast(_) => exponent_m_raw(
            -p,
            params.n,
            params.m,
            &-params.eps.clone(),
            &int(params.mu),
        ),
        _ => Err(Error::NoExtension(format!(
            "mu/2nm - eps is not an integer for {params:?}"
        ))),
    }
}

/// The exponent of the basis vector at `p` for any variant.
pub fn exponent(p: i64, params: &LatticeParams) -> Result<i64> {
    match params.variant {
        Variant::Q => exponent_m(p, params),
        Variant::Qp => exponent_n(p, params),
        Variant::Qpp if nonvanishing(params) => Ok(0),
        Variant::Qpp => Err(Error::NoExtension("mu is odd".into())),
    }
}

fn has_odd_denominator(x: &Rational) -> bool {
    let d = x.denom();
    let twos = d.trailing_zeros().unwrap_or(0);
    (d >> twos) != BigInt::one()
}

/// The least `e >= 0` such that `φ(1) = 2^e` extends to an integral
/// homomorphism, found by iterating the recurrences up to `s + t <= depth`.
pub fn oracle_min_exponent(params: &LatticeParams, p: i64, depth: i64) -> Result<i64> {
    let mut chain = vec![Rational::one()];
    let mut terminated = false;
    let mut integral = true;
    for s in 0..depth {
        let c = params.primary(p, s);
        if has_odd_denominator(&c) {
            return Err(Error::NoExtension(format!(
                "odd denominator in step {s} at p = {p}"
            )));
        }
        integral &= c.is_integer();
        let next = chain.last().unwrap() * &c;
        if next.is_zero() {
            terminated = true;
            break;
        }
        chain.push(next);
    }
    if !terminated && !integral {
        return Err(Error::NoExtension(format!(
            "raising chain at p = {p} does not terminate within depth {depth}"
        )));
    }
    let mut need = 0;
    for (t, start) in chain.iter().enumerate() {
        let t = t as i64;
        let mut value = start.clone();
        need = need.max(-ord2(&value)?);
        for s in 0..(depth - t) {
            let d = params.secondary(p, s, t);
            if has_odd_denominator(&d) {
                return Err(Error::NoExtension(format!(
                    "odd denominator in secondary step ({s}, {t})"
                )));
            }
            value *= d;
            if value.is_zero() {
                break;
            }
            need = need.max(-ord2(&value)?);
        }
    }
    Ok(need)
}

/// A reason the raising chain at `p` admits no integral extension with
/// `ord_2 φ(1) <= e_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    OddDenominator { step: i64 },
    Unbounded { step: i64, required: i64 },
}

pub fn primary_chain_obstruction(
    params: &LatticeParams,
    p: i64,
    e_max: i64,
    depth: i64,
) -> Option<Obstruction> {
    let mut running = 0;
    for s in 0..depth {
        let c = params.primary(p, s);
        if c.is_zero() {
            return None;
        }
        if has_odd_denominator(&c) {
            return Some(Obstruction::OddDenominator { step: s });
        }
        running -= ord2(&c).expect("nonzero");
        if running > e_max {
            return Some(Obstruction::Unbounded {
                step: s,
                required: running,
            });
        }
    }
    None
}

/// `Σ_{l=1}^{s} (1 - ord_2 l)`.
pub fn ord2_factorial_deficit(s: u64) -> i64 {
    (1..=s).map(|l| 1 - l.trailing_zeros() as i64).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub variant: Variant,
    pub n: i64,
    pub m: i64,
    #[serde(with = "serde_rational")]
    pub eps: Rational,
    pub mu: i64,
    pub nonzero: bool,
    pub support: Support,
    pub exponents: Vec<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
}

pub const ORACLE_DEPTH: i64 = 64;

/// The lattice `⊕ Z 2^{M_p} w_p` over the window, optionally cross-checked
/// against the oracle at every index.
pub fn integral_model(
    params: &LatticeParams,
    window: RangeInclusive<i64>,
    with_oracle: bool,
) -> Result<LatticeReport> {
    let nonzero = nonvanishing(params);
    let supp = support(params);
    let mut exponents = Vec::new();
    let mut agrees = true;
    for p in supp.clip(window) {
        let e = exponent(p, params)?;
        if with_oracle {
            agrees &= oracle_min_exponent(params, p, ORACLE_DEPTH).ok() == Some(e);
        }
        exponents.push((p, e));
    }
    Ok(LatticeReport {
        variant: params.variant,
        n: params.n,
        m: params.m,
        eps: params.eps.clone(),
        mu: params.mu,
        nonzero,
        support: supp,
        exponents,
        oracle_agrees: with_oracle.then_some(agrees),
    })
}

/// The rational principal series the lattice sits in.
pub fn rational_module(params: &LatticeParams) -> Result<WeightModule<Rational>> {
    let label = params.variant.label();
    let g = parabolic_zform(params.n, params.m, label)?;
    let chi = CharacterModule::new(
        label,
        params.n,
        params.eps.clone(),
        int(params.mu),
        CoefficientRing::Rationals,
    )?;
    principal_series(&g, &chi, CoefficientRing::Rationals)
}

/// Places in the window where a generator maps a lattice basis vector
/// `2^{M_p} w_p` outside the lattice.
pub fn closure_defects(
    params: &LatticeParams,
    window: RangeInclusive<i64>,
) -> Result<Vec<(Gen, i64)>> {
    let module = rational_module(params)?;
    let supp = support(params);
    let mut out = Vec::new();
    for p in supp.clip(window) {
        let here = exponent(p, params)?;
        for (x, q) in [(Gen::E, p + 1), (Gen::F, p - 1)] {
            if !supp.contains(q) {
                continue;
            }
            let there = exponent(q, params)?;
            let c = module.coefficient(x, p) * pow2(here - there);
            if !c.is_integer() {
                out.push((x, p));
            }
        }
    }
    Ok(out)
}

/// True iff `2^e` is a unit of `Z[1/2nm]`, which holds for every `e`.
pub fn is_unit_after_localizing(e: i64, n: i64, m: i64) -> bool {
    let x = pow2(e);
    let ring = CoefficientRing::LocalizedIntegers((2 * n * m) as u64);
    ring.contains_rational(&x) && ring.contains_rational(&x.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(v: Variant, n: i64, m: i64, eps: Rational, mu: i64) -> LatticeParams {
        LatticeParams::new(v, n, m, eps, mu).unwrap()
    }

    #[test]
    fn nonvanishing_examples() {
        assert!(nonvanishing(&params(Variant::Q, 1, 1, int(0), -2)));
        assert!(!nonvanishing(&params(Variant::Q, 2, 1, rat(1, 2), 0)));
        for n in 1..4 {
            for k in 0..n {
                assert!(!nonvanishing(&params(Variant::Qpp, n, 2 * n, rat(k, n), 3)));
            }
        }
        assert!(LatticeParams::new(Variant::Qpp, 1, 1, int(0), 2).is_err());
        assert!(LatticeParams::new(Variant::Q, 2, 1, rat(1, 3), 2).is_err());
    }

    #[test]
    fn exponent_m_examples() {
        let pr = params(Variant::Q, 1, 1, int(0), -2);
        assert_eq!(exponent_m(1, &pr).unwrap(), 0);
        assert_eq!(exponent_m(0, &pr).unwrap(), 1);
        assert_eq!(exponent_m(-1, &pr).unwrap(), 1);
        assert_eq!(exponent_m(-2, &pr).unwrap(), 2);
        assert_eq!(
            exponent_m(2, &pr),
            Err(Error::IndexAboveTop { p: 2, top: 1 })
        );
        assert_eq!(
            Error::IndexAboveTop { p: 2, top: 1 }.to_string(),
            "index above top weight: p = 2, top = 1"
        );
    }

    #[test]
    fn exponent_n_examples() {
        let pr = params(Variant::Qp, 1, 1, int(0), 2);
        assert_eq!(support(&pr), Support::AtLeast(1));
        assert_eq!(exponent_n(1, &pr).unwrap(), 0);
        assert_eq!(exponent_n(2, &pr).unwrap(), 1);
        assert!(matches!(
            exponent_n(0, &pr),
            Err(Error::IndexBelowBottom { .. })
        ));
    }

    #[test]
    fn oracle_examples() {
        let pr = params(Variant::Q, 1, 1, int(0), -2);
        assert_eq!(oracle_min_exponent(&pr, 0, 64).unwrap(), 1);
        assert_eq!(oracle_min_exponent(&pr, 1, 64).unwrap(), 0);
        assert!(oracle_min_exponent(&pr, 2, 64).is_err());
        let bad = params(Variant::Q, 2, 1, rat(1, 2), 0);
        assert!(matches!(
            oracle_min_exponent(&bad, 0, 64),
            Err(Error::NoExtension(_))
        ));
    }

    #[test]
    fn factorial_deficit_values() {
        assert_eq!(ord2_factorial_deficit(0), 0);
        assert_eq!(ord2_factorial_deficit(7), 3);
        for a in 0..=12 {
            assert_eq!(ord2_factorial_deficit((1 << a) - 1), a as i64);
        }
    }

    #[test]
    fn golden_report() {
        let pr = params(Variant::Q, 1, 1, int(0), -2);
        let r = integral_model(&pr, -3..=1, true).unwrap();
        assert_eq!(r.support, Support::AtMost(1));
        assert_eq!(&r.exponents[1..], &[(-2, 2), (-1, 1), (0, 1), (1, 0)]);
        assert_eq!(r.oracle_agrees, Some(true));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""exponents":[[-3,1],[-2,2],[-1,1],[0,1],[1,0]]"#));
        assert_eq!(
            serde_json::to_string(&serde_json::from_str::<LatticeReport>(&json).unwrap()).unwrap(),
            json
        );
        let empty = integral_model(&params(Variant::Q, 2, 1, rat(1, 2), 0), -3..=3, false).unwrap();
        assert!(!empty.nonzero && empty.exponents.is_empty());
    }

    #[test]
    fn qpp_model_is_standard() {
        for mu in -9..=9 {
            let pr = params(Variant::Qpp, 2, 4, rat(1, 2), mu);
            let r = integral_model(&pr, -6..=6, true).unwrap();
            if mu % 2 == 0 {
                assert!(r.exponents.iter().all(|(_, e)| *e == 0));
                assert_eq!(r.exponents.len(), 13);
                assert_eq!(r.oracle_agrees, Some(true));
            } else {
                assert!(!r.nonzero && r.exponents.is_empty());
            }
        }
    }

    #[test]
    fn lattices_are_closed() {
        for (v, n, m) in [
            (Variant::Q, 1, 1),
            (Variant::Q, 2, 3),
            (Variant::Qp, 3, 1),
            (Variant::Qp, 1, 2),
        ] {
            for k in 0..n {
                for mu in -12..=12 {
                    let pr = params(v, n, m, rat(k, n), mu);
                    if nonvanishing(&pr) {
                        assert!(closure_defects(&pr, -15..=15).unwrap().is_empty(), "{pr:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn top_exponent_vanishes() {
        for mu in (-12..=12).step_by(2) {
            let pr = params(Variant::Q, 1, 1, int(0), mu);
            if let Support::AtMost(top) = support(&pr) {
                assert_eq!(exponent_m(top, &pr).unwrap(), 0);
                assert!(is_unit_after_localizing(
                    exponent_m(top - 5, &pr).unwrap(),
                    1,
                    1
                ));
            }
        }
    }

    proptest! {
        /// `N_p(ε, μ) = M_{-p}(-ε, μ)`, with the q' recurrence matching.
        #[test]
        fn mirror_identity(n in 1i64..4, m in 1i64..4, kk in 0i64..3, j in -5i64..5, d in 0i64..8) {
            let k = kk % n;
            let eps = rat(k, n);
            let mu = (2 * n * m) * j + 2 * m * k;
            let pr = params(Variant::Qp, n, m, eps.clone(), mu);
            let Support::AtLeast(bottom) = support(&pr) else { panic!() };
            let p = bottom + d;
            prop_assert_eq!(exponent_n(p, &pr).unwrap(), exponent_m_raw(-p, n, m, &-eps, &int(mu)).unwrap());
            prop_assert_eq!(exponent_n(p, &pr).unwrap(), oracle_min_exponent(&pr, p, 64).unwrap());
        }

        /// Criterion failures are unbounded obstructions at every index.
        #[test]
        fn violations_are_obstructed(n in 1i64..4, m in 1i64..4, kk in 0i64..3, mu in -12i64..13, p in -8i64..9) {
            let k = kk % n;
            for v in [Variant::Q, Variant::Qp] {
                let pr = params(v, n, m, rat(k, n), mu);
                if !nonvanishing(&pr) {
                    prop_assert!(primary_chain_obstruction(&pr, p, 20, 4096).is_some());
                }
            }
        }
    }
}
