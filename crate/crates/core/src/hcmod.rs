//! Weight modules with one basis vector per index `p`, described by
//! coefficient polynomials in `p`, together with the induced, produced and
//! principal series constructions.

use std::fmt;
use std::ops::RangeInclusive;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::{CharacterLattice, GradedVector};
use crate::pbw::Gen;
use crate::scalar::{
    format_rational, int, serde_rational, Coefficient, CoefficientRing, Rational, ScalarValue,
};
use crate::zform::{iwasawa_decompose, make_zform, subalgebra, SubalgebraLabel, ZForm};

/// The set of indices `p` carrying a basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    All,
    AtLeast(i64),
    AtMost(i64),
    Empty,
}

impl Support {
    pub fn contains(&self, p: i64) -> bool {
        match *self {
            Support::All => true,
            Support::AtLeast(b) => p >= b,
            Support::AtMost(t) => p <= t,
            Support::Empty => false,
        }
    }

    pub fn clip(&self, window: RangeInclusive<i64>) -> Vec<i64> {
        window.filter(|p| self.contains(*p)).collect()
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::All => write!(f, "all p"),
            Support::AtLeast(b) => write!(f, "p >= {b}"),
            Support::AtMost(t) => write!(f, "p <= {t}"),
            Support::Empty => write!(f, "empty"),
        }
    }
}

/// A polynomial `Σ c_k p^k` in the index `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> IndexPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.vanishes()) {
            coeffs.pop();
        }
        IndexPoly { coeffs }
    }

    pub fn zero() -> Self {
        IndexPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    pub fn from_rationals(cs: &[Rational]) -> Self {
        Self::new(cs.iter().cloned().map(C::from_rational).collect())
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero_elem)
    }

    pub fn eval(&self, p: i64) -> C {
        let x = C::from_int(p);
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero_elem(), |acc, c| acc.times(&x).plus(c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let len = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            (0..len)
                .map(|k| self.coefficient(k).plus(&o.coefficient(k)))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&C::from_int(-1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero_elem(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.times(c)).collect())
    }

    /// The polynomial `p -> self(p + k)`.
    pub fn shift(&self, k: i64) -> Self {
        let step = Self::from_rationals(&[int(k), int(1)]);
        let mut out = Self::zero();
        for c in self.coeffs.iter().rev() {
            out = out.mul(&step).add(&Self::constant(c.clone()));
        }
        out
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> Result<D>) -> Result<IndexPoly<D>> {
        Ok(IndexPoly::new(
            self.coeffs.iter().map(f).collect::<Result<_>>()?,
        ))
    }
}

impl<C: Coefficient> fmt::Display for IndexPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.vanishes())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})*p"),
                _ => format!("({c})*p^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A weight module with basis `{w_p : p in support}`, where `w_p` has torus
/// weight `weight_base + n·p` and
///
/// * `E w_p = e(p) w_{p+1}`, `F w_p = f(p) w_{p-1}`, `H w_p = h(p) w_p`,
/// * `[H, E] = root·E`, `[E, F] = bracket_scale·H`,
/// * `h(p) = h_per_weight · weight(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightModule<C> {
    pub label: String,
    pub ring: CoefficientRing,
    pub n: i64,
    pub weight_base: i64,
    pub root: Rational,
    pub bracket_scale: C,
    pub h_per_weight: Rational,
    pub support: Support,
    pub e: IndexPoly<C>,
    pub f: IndexPoly<C>,
    pub h: IndexPoly<C>,
    /// Image of every basis vector under the counit, when one is recorded.
    pub counit: Option<C>,
}

impl<C: Coefficient> WeightModule<C> {
    pub fn weight(&self, p: i64) -> i64 {
        self.weight_base + self.n * p
    }

    pub fn index_of(&self, weight: i64) -> Result<i64> {
        let d = weight - self.weight_base;
        if d.rem_euclid(self.n) != 0 {
            return Err(Error::InvalidParameter(format!(
                "weight {weight} does not occur in {}",
                self.label
            )));
        }
        Ok(d / self.n)
    }

    pub fn basis_vector(&self, p: i64) -> GradedVector<C> {
        GradedVector::basis(CharacterLattice::FreeRankOne, self.weight(p))
    }

    /// Matrix coefficient of a generator at index `p`; zero whenever the
    /// source or target index is outside the support.
    pub fn coefficient(&self, x: Gen, p: i64) -> C {
        let (poly, target) = match x {
            Gen::E => (&self.e, p + 1),
            Gen::F => (&self.f, p - 1),
            Gen::H => (&self.h, p),
        };
        if self.support.contains(p) && self.support.contains(target) {
            poly.eval(p)
        } else {
            C::zero_elem()
        }
    }

    pub fn apply(&self, x: Gen, v: &GradedVector<C>) -> Result<GradedVector<C>> {
        let shift = match x {
            Gen::E => self.n,
            Gen::F => -self.n,
            Gen::H => 0,
        };
        let mut out = GradedVector::zero(v.lattice());
        for (w, c) in v.components() {
            let p = self.index_of(w)?;
            if !self.support.contains(p) {
                return Err(Error::InvalidParameter(format!(
                    "index {p} is outside the support of {}",
                    self.label
                )));
            }
            let coef = self.coefficient(x, p);
            if !coef.in_ring(&self.ring) {
                return Err(Error::NotInRing {
                    scalar: coef.to_string(),
                    ring: self.ring.to_string(),
                });
            }
            out.add_component(w + shift, coef.times(c));
        }
        Ok(out)
    }

    pub fn check_ring(&self, v: &GradedVector<C>) -> Result<()> {
        for (_, c) in v.components() {
            if !c.in_ring(&self.ring) {
                return Err(Error::NotInRing {
                    scalar: c.to_string(),
                    ring: self.ring.to_string(),
                });
            }
        }
        Ok(())
    }

    /// The bracket defects as polynomials in `p`, valid away from the
    /// support boundary: `([H,E] - root·E)`, `([H,F] + root·F)`,
    /// `([E,F] - bracket_scale·H)` applied to `w_p`.
    pub fn symbolic_defects(&self) -> [IndexPoly<C>; 3] {
        let root = IndexPoly::constant(C::from_rational(self.root.clone()));
        let he = self.e.mul(&self.h.shift(1).sub(&self.h).sub(&root));
        let hf = self.f.mul(&self.h.shift(-1).sub(&self.h).add(&root));
        let ef = self
            .e
            .shift(-1)
            .mul(&self.f)
            .sub(&self.f.shift(1).mul(&self.e))
            .sub(&self.h.scale(&self.bracket_scale));
        [he, hf, ef]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "[H,E]")]
    HE,
    #[serde(rename = "[H,F]")]
    HF,
    #[serde(rename = "[E,F]")]
    EF,
    #[serde(rename = "weight")]
    Weight,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomFailure {
    pub index: i64,
    pub relation: Relation,
    pub discrepancy: ScalarValue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub label: String,
    pub checked: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates the defining relations on every basis vector of the window.
pub fn check_module_axioms<C: Coefficient>(
    m: &WeightModule<C>,
    window: RangeInclusive<i64>,
) -> AxiomReport {
    let mut failures = Vec::new();
    let root = C::from_rational(m.root.clone());
    let indices = m.support.clip(window);
    for &p in &indices {
        let h = |q: i64| m.coefficient(Gen::H, q);
        let e = |q: i64| m.coefficient(Gen::E, q);
        let f = |q: i64| m.coefficient(Gen::F, q);
        let he = e(p).times(&h(p + 1).minus(&h(p)).minus(&root));
        let hf = f(p).times(&h(p - 1).minus(&h(p)).plus(&root));
        let ef = e(p - 1)
            .times(&f(p))
            .minus(&f(p + 1).times(&e(p)))
            .minus(&m.bracket_scale.times(&h(p)));
        let wt = h(p).minus(&C::from_rational(&m.h_per_weight * int(m.weight(p))));
        for (relation, d) in [
            (Relation::HE, he),
            (Relation::HF, hf),
            (Relation::EF, ef),
            (Relation::Weight, wt),
        ] {
            if !d.vanishes() {
                failures.push(AxiomFailure {
                    index: p,
                    relation,
                    discrepancy: d.to_value(),
                });
            }
        }
    }
    AxiomReport {
        label: m.label.clone(),
        checked: indices.len(),
        failures,
    }
}

/// The module with the `E` coefficient increased by one; a negative control
/// for the relation checks.
pub fn corrupt_e<C: Coefficient>(m: &WeightModule<C>) -> WeightModule<C> {
    let mut out = m.clone();
    out.e = out.e.add(&IndexPoly::constant(C::one_elem()));
    out.label = format!("{} (corrupted)", m.label);
    out
}

/// `ind(λ)`: basis `y_{λ+np} = E^p ⊗ 1`, `p >= 0`.
pub fn induced_module(g: &ZForm, lambda: i64, ring: CoefficientRing) -> WeightModule<Rational> {
    let (n, m) = (int(g.n), int(g.m));
    let lam = int(lambda);
    WeightModule {
        label: format!("ind(lambda={lambda}) over g_{{{},{}}}", g.n, g.m),
        ring,
        n: g.n,
        weight_base: lambda,
        root: n.clone(),
        bracket_scale: m.clone(),
        h_per_weight: int(1),
        support: Support::AtLeast(0),
        e: IndexPoly::constant(int(1)),
        // -m p (np - n + 2λ) / 2
        f: IndexPoly::from_rationals(&[
            int(0),
            -(&m * (int(2) * &lam - &n)) / int(2),
            -(&m * &n) / int(2),
        ]),
        h: IndexPoly::from_rationals(&[lam, n]),
        counit: None,
    }
}

/// `pro(λ)`: the dual basis `y^{λ+np}`, `p >= 0`.
pub fn produced_module(g: &ZForm, lambda: i64, ring: CoefficientRing) -> WeightModule<Rational> {
    let (n, m) = (int(g.n), int(g.m));
    let lam = int(lambda);
    WeightModule {
        label: format!("pro(lambda={lambda}) over g_{{{},{}}}", g.n, g.m),
        ring,
        n: g.n,
        weight_base: lambda,
        root: n.clone(),
        bracket_scale: m.clone(),
        h_per_weight: int(1),
        support: Support::AtLeast(0),
        // -m (p+1)(np + 2λ) / 2
        e: IndexPoly::from_rationals(&[
            -(&m * &lam),
            -(&m * (&n + int(2) * &lam)) / int(2),
            -(&m * &n) / int(2),
        ]),
        f: IndexPoly::constant(int(1)),
        h: IndexPoly::from_rationals(&[lam, n]),
        counit: None,
    }
}

/// The form `g_{n,m}` with the realization parameter each parabolic needs.
pub fn parabolic_zform(n: i64, m: i64, label: SubalgebraLabel) -> Result<ZForm> {
    let q = match label {
        SubalgebraLabel::Q | SubalgebraLabel::Maximal => Rational::new(1.into(), 2.into()),
        SubalgebraLabel::QPrime => int(n * m),
        SubalgebraLabel::QDoublePrime => {
            if m != 2 * n {
                return Err(Error::InvalidParameter(format!(
                    "q'' requires m = 2n (got n = {n}, m = {m})"
                )));
            }
            int(n)
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "{label} is not one of the parabolic forms"
            )))
        }
    };
    make_zform(n, m, q)
}

/// `a·μ + b·ω` where `ω` is the weight of the source vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCoefficient {
    #[serde(with = "serde_rational")]
    pub mu: Rational,
    #[serde(with = "serde_rational")]
    pub weight: Rational,
}

impl AffineCoefficient {
    /// The coefficient as a polynomial in `p` for the weights `n(p + ε)`.
    pub fn as_poly(&self, n: i64, eps: &Rational, mu: &Rational) -> IndexPoly<Rational> {
        let n = int(n);
        IndexPoly::from_rationals(&[&self.mu * mu + &self.weight * &n * eps, &self.weight * &n])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsCoefficients {
    pub label: SubalgebraLabel,
    pub e: AffineCoefficient,
    pub f: AffineCoefficient,
}

/// Reads the principal series actions off the Iwasawa splitting: with
/// `E = c_X X + c_Y Y + c_H H`, `E` acts on a vector of weight `ω` by
/// `c_Y μ + c_H ω`, and likewise for `F`.
pub fn derive_ps_action(g: &ZForm, label: SubalgebraLabel) -> Result<PsCoefficients> {
    let s = subalgebra(g, label)?;
    let t = iwasawa_decompose(g, &s)?;
    Ok(PsCoefficients {
        label,
        e: AffineCoefficient {
            mu: t.e[1].clone(),
            weight: t.e[2].clone(),
        },
        f: AffineCoefficient {
            mu: t.f[1].clone(),
            weight: t.f[2].clone(),
        },
    })
}

/// Checks `ε ∈ {0, 1/n, ..., (n-1)/n}`.
pub fn validate_eps(n: i64, eps: &Rational) -> Result<()> {
    let scaled = eps * int(n);
    if eps < &Rational::zero() || eps >= &Rational::one() || !scaled.is_integer() {
        return Err(Error::InvalidParameter(format!(
            "eps must be one of 0, 1/{n}, ..., {}/{n} (got {})",
            n - 1,
            format_rational(eps)
        )));
    }
    Ok(())
}

/// The character `k_{ε,μ}` of a parabolic subpair: `X·1 = 0`, `Y·1 = μ`,
/// `t·1 = t^{nε}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterModule {
    pub label: SubalgebraLabel,
    #[serde(with = "serde_rational")]
    pub eps: Rational,
    #[serde(with = "serde_rational")]
    pub mu: Rational,
    pub ring: CoefficientRing,
}

impl CharacterModule {
    pub fn new(
        label: SubalgebraLabel,
        n: i64,
        eps: Rational,
        mu: Rational,
        ring: CoefficientRing,
    ) -> Result<Self> {
        validate_eps(n, &eps)?;
        if !ring.contains_rational(&mu) {
            return Err(Error::NotInRing {
                scalar: format_rational(&mu),
                ring: ring.to_string(),
            });
        }
        Ok(CharacterModule {
            label,
            eps,
            mu,
            ring,
        })
    }
}

/// `I(k_{ε,μ})` over a ring in which the Iwasawa splitting exists, with basis
/// vectors `w_p` of weight `n(p + ε)` for all `p`.
pub fn principal_series(
    g: &ZForm,
    chi: &CharacterModule,
    ring: CoefficientRing,
) -> Result<WeightModule<Rational>> {
    let coeffs = derive_ps_action(g, chi.label)?;
    let needed = match chi.label {
        SubalgebraLabel::QDoublePrime => 2,
        _ => 2 * g.n * g.m,
    };
    if !ring.contains_rational(&Rational::new(1.into(), needed.into())) {
        return Err(Error::InvalidParameter(format!(
            "principal series over {ring} needs 1/{needed}; use the lattice module for integral models"
        )));
    }
    if !ring.contains_rational(&chi.mu) {
        return Err(Error::NotInRing {
            scalar: format_rational(&chi.mu),
            ring: ring.to_string(),
        });
    }
    validate_eps(g.n, &chi.eps)?;
    let n = int(g.n);
    let weight_base = (&n * &chi.eps)
        .to_integer()
        .try_into()
        .expect("n·eps is small");
    Ok(WeightModule {
        label: format!(
            "ps({}, eps={}, mu={}) over g_{{{},{}}}",
            chi.label,
            format_rational(&chi.eps),
            format_rational(&chi.mu),
            g.n,
            g.m
        ),
        ring,
        n: g.n,
        weight_base,
        root: n.clone(),
        bracket_scale: int(g.m),
        h_per_weight: int(1),
        support: Support::All,
        e: coeffs.e.as_poly(g.n, &chi.eps, &chi.mu),
        f: coeffs.f.as_poly(g.n, &chi.eps, &chi.mu),
        h: IndexPoly::from_rationals(&[&n * &chi.eps, n.clone()]),
        counit: Some(int(1)),
    })
}

/// The `q'` principal series with `F` acting by the coefficient
/// `μ/2nm - p - ε`, twice the value the Iwasawa splitting produces.
pub fn qprime_module_with_undivided_f(
    g: &ZForm,
    eps: &Rational,
    mu: &Rational,
) -> Result<WeightModule<Rational>> {
    let chi = CharacterModule::new(
        SubalgebraLabel::QPrime,
        g.n,
        eps.clone(),
        mu.clone(),
        CoefficientRing::Rationals,
    )?;
    let mut m = principal_series(g, &chi, CoefficientRing::Rationals)?;
    let two_nm = int(2 * g.n * g.m);
    m.f = IndexPoly::from_rationals(&[mu / two_nm - eps, int(-1)]);
    m.label = format!("{} with undivided F", m.label);
    Ok(m)
}

/// Looks for a diagonal change of basis `b_p = d_p a_p` identifying two
/// modules on the window. Such a rescaling exists iff the `H` actions agree,
/// the products `e(p) f(p+1)` agree, and `e`, `f` vanish at the same places.
pub fn diagonal_equivalence<C: Coefficient>(
    a: &WeightModule<C>,
    b: &WeightModule<C>,
    window: RangeInclusive<i64>,
) -> bool {
    if a.n != b.n || a.weight_base != b.weight_base || a.support != b.support {
        return false;
    }
    for p in a.support.clip(window) {
        let (ea, eb) = (a.coefficient(Gen::E, p), b.coefficient(Gen::E, p));
        let (fa, fb) = (a.coefficient(Gen::F, p + 1), b.coefficient(Gen::F, p + 1));
        if a.coefficient(Gen::H, p) != b.coefficient(Gen::H, p)
            || ea.vanishes() != eb.vanishes()
            || fa.vanishes() != fb.vanishes()
            || ea.times(&fa) != eb.times(&fb)
        {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::{act, normal_form, UeaElement, Word};
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn g(n: i64, m: i64) -> ZForm {
        make_zform(n, m, int(1)).unwrap()
    }

    fn vec_at(m: &WeightModule<Rational>, p: i64, c: Rational) -> GradedVector<Rational> {
        GradedVector::from_components(CharacterLattice::FreeRankOne, [(m.weight(p), c)])
    }

    #[test]
    fn induced_examples() {
        let m = induced_module(&g(1, 1), 1, CoefficientRing::Integers);
        let y3 = m.basis_vector(2);
        assert_eq!(m.apply(Gen::F, &y3).unwrap(), vec_at(&m, 1, int(-3)));
        assert_eq!(m.apply(Gen::H, &y3).unwrap(), vec_at(&m, 2, int(3)));
        for (n, mm) in [(1, 1), (2, 3)] {
            let m = induced_module(&g(n, mm), 4, CoefficientRing::Integers);
            assert!(m.apply(Gen::F, &m.basis_vector(0)).unwrap().is_zero());
            assert!(check_module_axioms(&m, -40..=40).passed());
        }
    }

    #[test]
    fn induced_matches_enveloping_algebra() {
        // F E^p ⊗ 1 = [F, E^p] ⊗ 1, and [F, E^p] only involves H^b E^{p-1},
        // on which H acts by the weight λ + n(p-1)
        for (n, mm, lambda) in [(1, 1, 1), (2, 1, -3), (3, 2, 2)] {
            let gg = g(n, mm);
            let module = induced_module(&gg, lambda, CoefficientRing::Integers);
            for p in 1..6 {
                let fe: Word = format!("F{}", "E".repeat(p as usize)).parse().unwrap();
                let ef: Word = format!("-1*{}F", "E".repeat(p as usize)).parse().unwrap();
                let comm = normal_form(&fe, &gg).add(&normal_form(&ef, &gg));
                let mut coef = Rational::zero();
                for (&(a, b, c), x) in comm.terms() {
                    assert_eq!((a, c), (0, (p - 1) as u32));
                    coef += x * num_traits::pow(int(lambda + n * (p - 1)), b as usize);
                }
                assert_eq!(module.coefficient(Gen::F, p), coef, "p = {p}");
            }
        }
    }

    #[test]
    fn produced_examples() {
        let m = produced_module(&g(1, 1), 1, CoefficientRing::Integers);
        assert_eq!(
            m.apply(Gen::E, &m.basis_vector(0)).unwrap(),
            vec_at(&m, 1, int(-1))
        );
        assert!(m.apply(Gen::F, &m.basis_vector(0)).unwrap().is_zero());
        let m0 = produced_module(&g(1, 1), 0, CoefficientRing::Integers);
        assert!(m0.apply(Gen::E, &m0.basis_vector(0)).unwrap().is_zero());
        assert!(check_module_axioms(&m, -40..=40).passed());
    }

    #[test]
    fn induced_coefficient_identity() {
        for lambda in -6..=6 {
            let gg = g(2, 3);
            let m = induced_module(&gg, lambda, CoefficientRing::Integers);
            for p in 0..=30 {
                let ef = m.coefficient(Gen::E, p - 1) * m.coefficient(Gen::F, p);
                let fe = m.coefficient(Gen::F, p + 1) * m.coefficient(Gen::E, p);
                assert_eq!(ef, fe + int(3) * int(lambda + 2 * p));
            }
        }
    }

    #[test]
    fn ps_coefficients() {
        let q = derive_ps_action(
            &parabolic_zform(2, 3, SubalgebraLabel::Q).unwrap(),
            SubalgebraLabel::Q,
        )
        .unwrap();
        // μ/4nm + (p+ε)/2 with ω = n(p+ε)
        assert_eq!(
            q.e,
            AffineCoefficient {
                mu: rat(1, 24),
                weight: rat(1, 4)
            }
        );
        assert_eq!(
            q.f,
            AffineCoefficient {
                mu: rat(1, 2),
                weight: int(-3)
            }
        );
        let qpp = derive_ps_action(
            &parabolic_zform(3, 6, SubalgebraLabel::QDoublePrime).unwrap(),
            SubalgebraLabel::QDoublePrime,
        )
        .unwrap();
        assert_eq!(
            qpp.f,
            AffineCoefficient {
                mu: rat(1, 2),
                weight: int(-1)
            }
        );
        assert_eq!(
            qpp.e,
            AffineCoefficient {
                mu: rat(1, 2),
                weight: int(1)
            }
        );
        let qp = derive_ps_action(
            &parabolic_zform(2, 3, SubalgebraLabel::QPrime).unwrap(),
            SubalgebraLabel::QPrime,
        )
        .unwrap();
        assert_eq!(
            qp.f,
            AffineCoefficient {
                mu: rat(1, 24),
                weight: rat(-1, 4)
            }
        );
        assert_eq!(
            qp.e,
            AffineCoefficient {
                mu: rat(1, 2),
                weight: int(3)
            }
        );
    }

    #[test]
    fn ps_example_values() {
        let gg = parabolic_zform(1, 1, SubalgebraLabel::Q).unwrap();
        let chi = CharacterModule::new(
            SubalgebraLabel::Q,
            1,
            int(0),
            int(2),
            CoefficientRing::Rationals,
        )
        .unwrap();
        let m = principal_series(&gg, &chi, CoefficientRing::Rationals).unwrap();
        for p in -5..=5 {
            assert_eq!(m.coefficient(Gen::E, p), rat(p + 1, 2));
            assert_eq!(m.coefficient(Gen::F, p), int(1 - p));
            assert_eq!(m.coefficient(Gen::H, p), int(p));
        }
        assert_eq!(m.counit, Some(int(1)));
        let gg = parabolic_zform(1, 2, SubalgebraLabel::QDoublePrime).unwrap();
        let chi = CharacterModule::new(
            SubalgebraLabel::QDoublePrime,
            1,
            int(0),
            int(3),
            CoefficientRing::Rationals,
        )
        .unwrap();
        let m = principal_series(&gg, &chi, CoefficientRing::Rationals).unwrap();
        assert_eq!(m.coefficient(Gen::E, 0), rat(3, 2));
    }

    #[test]
    fn ps_ring_too_small() {
        let gg = parabolic_zform(1, 1, SubalgebraLabel::Q).unwrap();
        let chi = CharacterModule::new(
            SubalgebraLabel::Q,
            1,
            int(0),
            int(2),
            CoefficientRing::Integers,
        )
        .unwrap();
        let err = principal_series(&gg, &chi, CoefficientRing::Integers).unwrap_err();
        assert!(err.to_string().contains("lattice module"));
        assert!(principal_series(&gg, &chi, CoefficientRing::LocalizedIntegers(2)).is_ok());
        assert!(parabolic_zform(2, 3, SubalgebraLabel::QDoublePrime)
            .unwrap_err()
            .to_string()
            .contains("m = 2n"));
        assert!(validate_eps(2, &rat(1, 3)).is_err());
        assert!(validate_eps(2, &int(1)).is_err());
    }

    #[test]
    fn undivided_f_breaks_the_bracket() {
        let gg = parabolic_zform(1, 1, SubalgebraLabel::QPrime).unwrap();
        let bad = qprime_module_with_undivided_f(&gg, &int(0), &int(2)).unwrap();
        assert!(!check_module_axioms(&bad, -10..=10).passed());
        let chi = CharacterModule::new(
            SubalgebraLabel::QPrime,
            1,
            int(0),
            int(2),
            CoefficientRing::Rationals,
        )
        .unwrap();
        let good = principal_series(&gg, &chi, CoefficientRing::Rationals).unwrap();
        assert!(check_module_axioms(&good, -10..=10).passed());
        assert!(good.symbolic_defects().iter().all(|d| d.is_zero()));
    }

    #[test]
    fn corrupted_module_fails_everywhere() {
        let gg = parabolic_zform(1, 1, SubalgebraLabel::Q).unwrap();
        let chi = CharacterModule::new(
            SubalgebraLabel::Q,
            1,
            int(0),
            int(2),
            CoefficientRing::Rationals,
        )
        .unwrap();
        let m = corrupt_e(&principal_series(&gg, &chi, CoefficientRing::Rationals).unwrap());
        let report = check_module_axioms(&m, -30..=30);
        let failing: std::collections::BTreeSet<i64> =
            report.failures.iter().map(|f| f.index).collect();
        assert_eq!(failing.len(), 61);
    }

    #[test]
    fn act_applies_words() {
        let gg = g(1, 1);
        let m = induced_module(&gg, 2, CoefficientRing::Integers);
        let v = m.basis_vector(1);
        let ef = normal_form(&"EF".parse::<Word>().unwrap(), &gg);
        let fe = normal_form(&"FE".parse::<Word>().unwrap(), &gg);
        let h = UeaElement::generator(Gen::H);
        let lhs = act(&ef, &m, &v)
            .unwrap()
            .add(&act(&fe, &m, &v).unwrap().scale(&int(-1)));
        assert_eq!(lhs, act(&h, &m, &v).unwrap());
        assert_eq!(act(&UeaElement::one(), &m, &v).unwrap(), v);
        let half = UeaElement::monomial((0, 0, 1), rat(1, 2));
        assert!(matches!(act(&half, &m, &v), Err(Error::NotInRing { .. })));
    }

    #[test]
    fn index_poly_shift() {
        let p = IndexPoly::<Rational>::from_rationals(&[int(1), int(2), int(3)]);
        for x in -5..5 {
            assert_eq!(p.shift(2).eval(x), p.eval(x + 2));
        }
    }

    fn eps_mu() -> impl Strategy<Value = (i64, i64, i64, Rational)> {
        (1i64..4, 1i64..4).prop_flat_map(|(n, m)| {
            (
                Just(n),
                Just(m),
                0..n,
                (-30i64..30, 1i64..7).prop_map(|(a, b)| rat(a, b)),
            )
        })
    }

    proptest! {
        /// Every principal series satisfies the relations symbolically.
        #[test]
        fn ps_relations((n, m, k, mu) in eps_mu()) {
            let eps = rat(k, n);
            for label in [SubalgebraLabel::Q, SubalgebraLabel::QPrime] {
                let gg = parabolic_zform(n, m, label).unwrap();
                let chi = CharacterModule::new(label, n, eps.clone(), mu.clone(), CoefficientRing::Rationals).unwrap();
                let module = principal_series(&gg, &chi, CoefficientRing::Rationals).unwrap();
                prop_assert!(module.symbolic_defects().iter().all(|d| d.is_zero()));
                prop_assert!(check_module_axioms(&module, -5..=5).passed());
            }
        }

        /// With μ/2nm + ε integral, the q-module's E coefficient vanishes at
        /// exactly one index, the top of the integral support.
        #[test]
        fn single_e_root((n, m, k, _mu) in eps_mu(), j in -6i64..6) {
            let eps = rat(k, n);
            let mu = (int(j) - &eps) * int(2 * n * m);
            let gg = parabolic_zform(n, m, SubalgebraLabel::Q).unwrap();
            let chi = CharacterModule::new(SubalgebraLabel::Q, n, eps.clone(), mu.clone(), CoefficientRing::Rationals).unwrap();
            let module = principal_series(&gg, &chi, CoefficientRing::Rationals).unwrap();
            let roots: Vec<i64> = (-40..=40).filter(|&p| module.coefficient(Gen::E, p).is_zero()).collect();
            prop_assert_eq!(roots, vec![-j]);
            let froots = (-200..=200).filter(|&p| module.coefficient(Gen::F, p).is_zero()).count();
            prop_assert!(froots <= 1);
        }

        /// The torus exponent equals the H eigenvalue.
        #[test]
        fn weights_match(n in 1i64..4, m in 1i64..4, lambda in -6i64..7) {
            for module in [induced_module(&g(n, m), lambda, CoefficientRing::Integers), produced_module(&g(n, m), lambda, CoefficientRing::Integers)] {
                for p in 0..20 {
                    prop_assert_eq!(module.coefficient(Gen::H, p), int(module.weight(p)));
                }
            }
        }
    }
}
