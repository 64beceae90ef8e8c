//! The contraction family of `sl_2` over `Q[z]`: the bracket that picks up a
//! factor `z` on pairs of odd elements, its modules, the isomorphism with
//! the constant family over `Q[z, 1/z]`, and fibers at `z = c`.

use std::ops::RangeInclusive;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcmod::{validate_eps, IndexPoly, Support, WeightModule};
use crate::pbw::Gen;
use crate::scalar::{format_rational, int, Coefficient, CoefficientRing, Laurent, Rational};
use crate::zform::{LieVec, ZForm, E, F, H};

/// Coefficients of `e, f, h` in `Q[z, 1/z]`.
pub type LoopVec = [Laurent; 3];

/// Eigenvalue of the Cartan involution on `e, f, h`.
pub const PARITY: [i8; 3] = [-1, -1, 1];

fn sl2_basis_bracket(i: usize, j: usize) -> LieVec {
    let mut out = [int(0), int(0), int(0)];
    match (i, j) {
        (E, F) => out[H] = int(1),
        (F, E) => out[H] = int(-1),
        (H, E) => out[E] = int(2),
        (E, H) => out[E] = int(-2),
        (H, F) => out[F] = int(-2),
        (F, H) => out[F] = int(2),
        _ => {}
    }
    out
}

/// The bracket of the contraction family extended `Q[z, 1/z]`-bilinearly.
pub fn bracket(x: &LoopVec, y: &LoopVec) -> LoopVec {
    let mut out = [Laurent::zero(), Laurent::zero(), Laurent::zero()];
    for i in 0..3 {
        for j in 0..3 {
            let prod = &x[i] * &y[j];
            if prod.is_zero() {
                continue;
            }
            let bump = if PARITY[i] < 0 && PARITY[j] < 0 { 1 } else { 0 };
            let b = sl2_basis_bracket(i, j);
            for k in 0..3 {
                out[k] = &out[k] + &prod.shift(bump).scale(&b[k]);
            }
        }
    }
    out
}

/// The ordinary `sl_2` bracket over `Q[z, 1/z]`.
pub fn sl2_bracket(x: &LoopVec, y: &LoopVec) -> LoopVec {
    let mut out = [Laurent::zero(), Laurent::zero(), Laurent::zero()];
    for i in 0..3 {
        for j in 0..3 {
            let prod = &x[i] * &y[j];
            let b = sl2_basis_bracket(i, j);
            for k in 0..3 {
                out[k] = &out[k] + &prod.scale(&b[k]);
            }
        }
    }
    out
}

/// An element `x ⊗ z^degree` with `x` in one eigenspace of the involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homogeneous {
    pub vec: LieVec,
    pub degree: i64,
}

impl Homogeneous {
    pub fn new(vec: LieVec, degree: i64) -> Self {
        Homogeneous { vec, degree }
    }

    fn parity(&self) -> Result<Option<i8>> {
        let odd = !self.vec[E].is_zero() || !self.vec[F].is_zero();
        let even = !self.vec[H].is_zero();
        match (odd, even) {
            (true, true) => Err(Error::NotHomogeneous(format!(
                "{:?} mixes h with e, f",
                self.vec
            ))),
            (true, false) => Ok(Some(-1)),
            (false, true) => Ok(Some(1)),
            (false, false) => Ok(None),
        }
    }

    pub fn to_loop(&self) -> LoopVec {
        [
            Laurent::monomial(self.vec[E].clone(), self.degree),
            Laurent::monomial(self.vec[F].clone(), self.degree),
            Laurent::monomial(self.vec[H].clone(), self.degree),
        ]
    }
}

/// `[x z^a, y z^b]`, which is `[x, y] z^{a+b+1}` when both are odd and
/// `[x, y] z^{a+b}` otherwise.
pub fn contraction_bracket(x: &Homogeneous, y: &Homogeneous) -> Result<Homogeneous> {
    let (px, py) = (x.parity()?, y.parity()?);
    let bump = i64::from(px == Some(-1) && py == Some(-1));
    let mut vec = [int(0), int(0), int(0)];
    for i in 0..3 {
        for j in 0..3 {
            let c = &x.vec[i] * &y.vec[j];
            if c.is_zero() {
                continue;
            }
            let b = sl2_basis_bracket(i, j);
            for k in 0..3 {
                vec[k] += &c * &b[k];
            }
        }
    }
    Ok(Homogeneous {
        vec,
        degree: x.degree + y.degree + bump,
    })
}

/// The isomorphism `sl_2 ⊗ Q[z, 1/z] -> contraction ⊗ Q[z, 1/z]` which is
/// the identity on `e, h` and multiplies the `f` coefficient by `z^{-1}`.
pub fn phi(x: &LoopVec) -> LoopVec {
    [x[E].clone(), x[F].shift(-1), x[H].clone()]
}

pub fn basis_loop(i: usize) -> LoopVec {
    let mut out = [Laurent::zero(), Laurent::zero(), Laurent::zero()];
    out[i] = Laurent::one();
    out
}

/// `y_{λ+np} = e^p ⊗ 1`, `p >= 0`.
pub fn contracted_induced(lambda: i64, n: i64) -> Result<WeightModule<Laurent>> {
    check_n(n)?;
    let z = Laurent::z();
    let nq = int(n);
    let lam = int(lambda);
    Ok(WeightModule {
        label: format!("contracted ind(lambda={lambda}, n={n})"),
        ring: CoefficientRing::Poly,
        n,
        weight_base: lambda,
        root: int(2),
        bracket_scale: z.clone(),
        h_per_weight: Rational::new(2.into(), n.into()),
        support: Support::AtLeast(0),
        e: IndexPoly::constant(Laurent::one()),
        // -(z/n) p (np - n + 2λ)
        f: IndexPoly::new(vec![
            Laurent::zero(),
            z.scale(&(-(int(2) * &lam - &nq) / &nq)),
            z.scale(&int(-1)),
        ]),
        h: IndexPoly::from_rationals(&[int(2) * &lam / &nq, int(2)]),
        counit: None,
    })
}

/// The dual basis `y^{λ+np}`, `p >= 0`.
pub fn contracted_produced(lambda: i64, n: i64) -> Result<WeightModule<Laurent>> {
    check_n(n)?;
    let z = Laurent::z();
    let nq = int(n);
    let lam = int(lambda);
    Ok(WeightModule {
        label: format!("contracted pro(lambda={lambda}, n={n})"),
        ring: CoefficientRing::Poly,
        n,
        weight_base: lambda,
        root: int(2),
        bracket_scale: z.clone(),
        h_per_weight: Rational::new(2.into(), n.into()),
        support: Support::AtLeast(0),
        // -(z/n)(p+1)(np + 2λ)
        e: IndexPoly::new(vec![
            z.scale(&(-(int(2) * &lam) / &nq)),
            z.scale(&(-(&nq + int(2) * &lam) / &nq)),
            z.scale(&int(-1)),
        ]),
        f: IndexPoly::constant(Laurent::one()),
        h: IndexPoly::from_rationals(&[int(2) * &lam / &nq, int(2)]),
        counit: None,
    })
}

fn check_n(n: i64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "cover degree must be positive (got {n})"
        )));
    }
    Ok(())
}

/// A contracted principal series, or the marker that the integral version
/// is zero.
#[derive(Clone, Debug, PartialEq)]
pub enum ContractedPs {
    Module(WeightModule<Laurent>),
    Vanishing { reason: String },
}

impl ContractedPs {
    pub fn module(&self) -> Option<&WeightModule<Laurent>> {
        match self {
            ContractedPs::Module(m) => Some(m),
            ContractedPs::Vanishing { .. } => None,
        }
    }
}

/// Basis `w_p` of weight `n(p+ε)` for all `p`, with
/// `e w_p = (μ/2z + p + ε) w_{p+1}`, `f w_p = (μ/2 - z(p+ε)) w_{p-1}` and
/// `h w_p = 2(p+ε) w_p`.
pub fn contracted_ps(
    n: i64,
    eps: &Rational,
    mu: &Laurent,
    ring: CoefficientRing,
) -> Result<ContractedPs> {
    check_n(n)?;
    validate_eps(n, eps)?;
    if !matches!(ring, CoefficientRing::Poly | CoefficientRing::Laurent) {
        return Err(Error::InvalidParameter(format!(
            "contracted modules live over Q[z] or Q[z,1/z], not {ring}"
        )));
    }
    if !ring.contains_laurent(mu) {
        return Err(Error::NotInRing {
            scalar: mu.to_string(),
            ring: ring.to_string(),
        });
    }
    if ring == CoefficientRing::Poly && !mu.coefficient(0).is_zero() {
        return Ok(ContractedPs::Vanishing {
            reason: format!("mu = {mu} has a nonzero constant term"),
        });
    }
    let half = Rational::new(1.into(), 2.into());
    let z = Laurent::z();
    let eps_l = Laurent::constant(eps.clone());
    let nq = int(n);
    let weight_base = (&nq * eps).to_integer().try_into().expect("n·eps is small");
    Ok(ContractedPs::Module(WeightModule {
        label: format!(
            "contracted ps(n={n}, eps={}, mu={mu}) over {ring}",
            format_rational(eps)
        ),
        ring,
        n,
        weight_base,
        root: int(2),
        bracket_scale: z.clone(),
        h_per_weight: Rational::new(2.into(), n.into()),
        support: Support::All,
        e: IndexPoly::new(vec![&mu.shift(-1).scale(&half) + &eps_l, Laurent::one()]),
        f: IndexPoly::new(vec![&mu.scale(&half) - &(&z * &eps_l), z.scale(&int(-1))]),
        h: IndexPoly::from_rationals(&[int(2) * eps, int(2)]),
        counit: Some(Laurent::one()),
    }))
}

/// If `μ = c z` for a rational `c`, returns `c`.
fn linear_coefficient(mu: &Laurent) -> Option<Rational> {
    let c = mu.coefficient(1);
    (mu == &Laurent::monomial(c.clone(), 1)).then_some(c)
}

/// False exactly when some `e` or `f` coefficient of the contracted principal
/// series vanishes at an integer index: `μ = c z` with `c/2 + ε ∈ Z`
/// (a root of `e`) or `c/2 - ε ∈ Z` (a root of `f`).
pub fn generic_irreducibility(eps: &Rational, mu: &Laurent) -> bool {
    match linear_coefficient(mu) {
        Some(c) => {
            let half = &c / int(2);
            !((&half + eps).is_integer() || (&half - eps).is_integer())
        }
        None => true,
    }
}

/// Membership of `μ` in `{2zk - 2zε : k ∈ Z}`, which only sees the roots of
/// the `e` coefficients.
pub fn in_e_root_family(eps: &Rational, mu: &Laurent) -> bool {
    linear_coefficient(mu).is_some_and(|c| (&c / int(2) + eps).is_integer())
}

/// Integer indices in the window where `e` or `f` vanishes.
pub fn coefficient_roots(
    m: &WeightModule<Laurent>,
    window: RangeInclusive<i64>,
) -> Vec<(Gen, i64)> {
    let mut out = Vec::new();
    for p in window {
        for x in [Gen::E, Gen::F] {
            if m.coefficient(x, p).vanishes() {
                out.push((x, p));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialLatticeReport {
    pub closed: bool,
    pub failures: Vec<(Gen, i64)>,
    /// The `Q[z]` basis satisfies the `Q[z,1/z]` coefficient functions
    /// verbatim.
    pub base_change_identity: bool,
}

/// Checks that `⊕ Q[z] w_p` is stable under `e, f, h` over the window.
pub fn polynomial_lattice(
    n: i64,
    eps: &Rational,
    mu: &Laurent,
    window: RangeInclusive<i64>,
) -> Result<PolynomialLatticeReport> {
    if !mu.is_polynomial() || !mu.coefficient(0).is_zero() {
        return Err(Error::InvalidParameter(format!(
            "mu = {mu} must lie in z*Q[z]"
        )));
    }
    let poly = contracted_ps(n, eps, mu, CoefficientRing::Poly)?;
    let laurent = contracted_ps(n, eps, mu, CoefficientRing::Laurent)?;
    let (Some(pm), Some(lm)) = (poly.module(), laurent.module()) else {
        return Err(Error::CheckFailed("expected modules on both sides".into()));
    };
    let mut failures = Vec::new();
    for p in window {
        for x in [Gen::E, Gen::F, Gen::H] {
            if !CoefficientRing::Poly.contains_laurent(&pm.coefficient(x, p)) {
                failures.push((x, p));
            }
        }
    }
    let base_change_identity =
        pm.e == lm.e && pm.f == lm.f && pm.h == lm.h && pm.weight_base == lm.weight_base;
    Ok(PolynomialLatticeReport {
        closed: failures.is_empty(),
        failures,
        base_change_identity,
    })
}

/// The fiber at `z = c`.
pub fn specialize(m: &WeightModule<Laurent>, c: &Rational) -> Result<WeightModule<Rational>> {
    let ev = |x: &Laurent| x.eval(c);
    Ok(WeightModule {
        label: format!("{} at z = {}", m.label, format_rational(c)),
        ring: CoefficientRing::Rationals,
        n: m.n,
        weight_base: m.weight_base,
        root: m.root.clone(),
        bracket_scale: ev(&m.bracket_scale)?,
        h_per_weight: m.h_per_weight.clone(),
        support: m.support,
        e: m.e.map(ev)?,
        f: m.f.map(ev)?,
        h: m.h.map(ev)?,
        counit: m.counit.as_ref().map(ev).transpose()?,
    })
}

/// Pulls an `sl_2`-module back along the realization of `g`, so that `E`
/// acts by `q·e`, `F` by `(n/2q)·f` and `H` by `(n/2)·h`. The module's
/// bracket scale `c` (from `[e, f] = c·h`) must equal `m`.
pub fn pullback(module: &WeightModule<Rational>, g: &ZForm) -> Result<WeightModule<Rational>> {
    if module.bracket_scale != int(g.m) {
        return Err(Error::InvalidParameter(format!(
            "[e,f] = {}·h does not match m = {}",
            module.bracket_scale, g.m
        )));
    }
    if module.n != g.n {
        return Err(Error::InvalidParameter(format!(
            "cover degree {} does not match n = {}",
            module.n, g.n
        )));
    }
    let half_n = Rational::new(g.n.into(), 2.into());
    let f_scale = &half_n / &g.q;
    Ok(WeightModule {
        label: format!(
            "{} pulled back to g_{{{},{}}} with q = {}",
            module.label,
            g.n,
            g.m,
            format_rational(&g.q)
        ),
        ring: module.ring.clone(),
        n: module.n,
        weight_base: module.weight_base,
        root: &module.root * &half_n,
        bracket_scale: module.bracket_scale.clone(),
        h_per_weight: &module.h_per_weight * &half_n,
        support: module.support,
        e: module.e.scale(&g.q),
        f: module.f.scale(&f_scale),
        h: module.h.scale(&half_n),
        counit: module.counit.clone(),
    })
}

/// Whether each generator's coefficients agree exactly on the window.
pub fn same_coefficients(
    a: &WeightModule<Rational>,
    b: &WeightModule<Rational>,
    window: RangeInclusive<i64>,
) -> bool {
    a.support == b.support
        && a.weight_base == b.weight_base
        && a.n == b.n
        && window.clone().all(|p| {
            [Gen::E, Gen::F, Gen::H]
                .iter()
                .all(|&x| a.coefficient(x, p) == b.coefficient(x, p))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hcmod::{
        check_module_axioms, induced_module, parabolic_zform, principal_series, produced_module,
        CharacterModule,
    };
    use crate::scalar::rat;
    use crate::zform::{lie_vec, make_zform, SubalgebraLabel};
    use proptest::prelude::*;

    fn lp(s: &str) -> Laurent {
        s.parse().unwrap()
    }

    #[test]
    fn bracket_examples() {
        let e = Homogeneous::new(lie_vec(1, 0, 0), 0);
        let f = Homogeneous::new(lie_vec(0, 1, 0), 0);
        let h = Homogeneous::new(lie_vec(0, 0, 1), 0);
        assert_eq!(
            contraction_bracket(&e, &f).unwrap(),
            Homogeneous::new(lie_vec(0, 0, 1), 1)
        );
        assert_eq!(
            contraction_bracket(&h, &e).unwrap(),
            Homogeneous::new(lie_vec(2, 0, 0), 0)
        );
        let mixed = Homogeneous::new(lie_vec(1, 0, 1), 0);
        assert!(matches!(
            contraction_bracket(&mixed, &e),
            Err(Error::NotHomogeneous(_))
        ));
    }

    #[test]
    fn jacobi() {
        let basis: Vec<LoopVec> = (0..3).map(basis_loop).collect();
        for x in &basis {
            for y in &basis {
                for w in &basis {
                    let a = bracket(&bracket(x, y), w);
                    let b = bracket(&bracket(y, w), x);
                    let c = bracket(&bracket(w, x), y);
                    for k in 0..3 {
                        assert!((&(&a[k] + &b[k]) + &c[k]).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn phi_preserves_brackets() {
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (basis_loop(i), basis_loop(j));
                assert_eq!(bracket(&phi(&x), &phi(&y)), phi(&sl2_bracket(&x, &y)));
            }
        }
        assert_eq!(phi(&basis_loop(F))[F], Laurent::monomial(int(1), -1));
        assert_eq!(phi(&basis_loop(H)), basis_loop(H));
    }

    #[test]
    fn module_examples() {
        let ind = contracted_induced(1, 1).unwrap();
        assert!(ind.coefficient(Gen::F, 0).is_zero());
        assert_eq!(ind.coefficient(Gen::F, 2), lp("-6z"));
        let pro = contracted_produced(0, 1).unwrap();
        assert!(pro.coefficient(Gen::E, 0).is_zero());
        assert!(pro.coefficient(Gen::F, 0).is_zero());
        let ps = contracted_ps(1, &int(0), &lp("2z"), CoefficientRing::Laurent).unwrap();
        assert_eq!(ps.module().unwrap().coefficient(Gen::E, 0), Laurent::one());
        let v = contracted_ps(1, &int(0), &lp("1 + z"), CoefficientRing::Poly).unwrap();
        assert!(matches!(v, ContractedPs::Vanishing { .. }));
        assert!(contracted_ps(1, &int(0), &lp("z^-1"), CoefficientRing::Poly).is_err());
        for m in [ind, pro, ps.module().unwrap().clone()] {
            assert!(check_module_axioms(&m, -40..=40).passed(), "{}", m.label);
            assert!(m.symbolic_defects().iter().all(|d| d.is_zero()));
        }
    }

    #[test]
    fn irreducibility_examples() {
        assert!(generic_irreducibility(&int(0), &lp("z")));
        assert!(!generic_irreducibility(&int(0), &lp("2z")));
        assert!(!generic_irreducibility(&rat(1, 2), &lp("z")));
        assert!(generic_irreducibility(&int(0), &lp("1 + z")));
        // an f-root outside the e-root family
        let eps = rat(1, 3);
        let mu = lp("2/3*z");
        assert!(!generic_irreducibility(&eps, &mu));
        assert!(!in_e_root_family(&eps, &mu));
    }

    #[test]
    fn polynomial_lattice_examples() {
        for mu in ["2z", "z^2", "z"] {
            let r = polynomial_lattice(1, &int(0), &lp(mu), -20..=20).unwrap();
            assert!(r.closed && r.base_change_identity, "{mu}");
        }
        assert!(polynomial_lattice(1, &int(0), &lp("1"), -3..=3).is_err());
    }

    #[test]
    fn fibers_at_one() {
        for n in 1..=3 {
            for lambda in -4..=4 {
                let g = make_zform(n, 1, int(1)).unwrap();
                let ind = specialize(&contracted_induced(lambda, n).unwrap(), &int(1)).unwrap();
                assert!(same_coefficients(
                    &pullback(&ind, &g).unwrap(),
                    &induced_module(&g, lambda, CoefficientRing::Rationals),
                    -30..=30
                ));
                let pro = specialize(&contracted_produced(lambda, n).unwrap(), &int(1)).unwrap();
                let target = produced_module(&g, lambda, CoefficientRing::Rationals);
                assert!(crate::hcmod::diagonal_equivalence(
                    &pullback(&pro, &g).unwrap(),
                    &target,
                    -30..=30
                ));
                let g_half_n = make_zform(n, 1, rat(n, 2)).unwrap();
                assert!(same_coefficients(
                    &pullback(&pro, &g_half_n).unwrap(),
                    &target,
                    -30..=30
                ));
            }
        }
        let degenerate = specialize(&contracted_induced(2, 1).unwrap(), &int(0)).unwrap();
        assert!(degenerate.bracket_scale.is_zero());
        assert!(check_module_axioms(&degenerate, -10..=10).passed());
        let ps = contracted_ps(1, &int(0), &lp("z^-1"), CoefficientRing::Laurent).unwrap();
        assert!(matches!(
            specialize(ps.module().unwrap(), &int(0)),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn ps_fiber_matches_q_principal_series() {
        for n in 1..=3 {
            for k in 0..n {
                let eps = rat(k, n);
                for mu in ["2z", "z", "-3z + z^2", "1 + z"] {
                    let mu = lp(mu);
                    let c = contracted_ps(n, &eps, &mu, CoefficientRing::Laurent).unwrap();
                    let fiber = specialize(c.module().unwrap(), &int(1)).unwrap();
                    let g = parabolic_zform(n, 1, SubalgebraLabel::Q).unwrap();
                    let mu_g = int(n) * mu.eval(&int(1)).unwrap();
                    let chi = CharacterModule::new(
                        SubalgebraLabel::Q,
                        n,
                        eps.clone(),
                        mu_g,
                        CoefficientRing::Rationals,
                    )
                    .unwrap();
                    let target = principal_series(&g, &chi, CoefficientRing::Rationals).unwrap();
                    assert!(same_coefficients(
                        &pullback(&fiber, &g).unwrap(),
                        &target,
                        -30..=30
                    ));
                }
            }
        }
    }

    fn mu_strategy() -> impl Strategy<Value = Laurent> {
        (
            -2i64..3,
            prop::collection::vec((-6i64..7, 1i64..4).prop_map(|(a, b)| rat(a, b)), 1..4),
        )
            .prop_map(|(low, cs)| Laurent::from_dense(low, cs))
    }

    proptest! {
        /// Contracted principal series satisfy the relations as Laurent identities.
        #[test]
        fn ps_relations(n in 1i64..4, k in 0i64..3, mu in mu_strategy()) {
            let eps = rat(k % n, n);
            let c = contracted_ps(n, &eps, &mu, CoefficientRing::Laurent).unwrap();
            let m = c.module().unwrap();
            prop_assert!(m.symbolic_defects().iter().all(|d| d.is_zero()));
            prop_assert!(check_module_axioms(m, -8..=8).passed());
        }

        /// The criterion matches a direct root search.
        #[test]
        fn irreducibility_matches_roots(n in 1i64..5, k in 0i64..4, c in -40i64..40, d in 1i64..5) {
            let eps = rat(k % n, n);
            let mu = Laurent::monomial(rat(c, d), 1);
            let m = contracted_ps(n, &eps, &mu, CoefficientRing::Laurent).unwrap();
            let roots = coefficient_roots(m.module().unwrap(), -60..=60);
            prop_assert_eq!(generic_irreducibility(&eps, &mu), roots.is_empty());
        }
    }
}
