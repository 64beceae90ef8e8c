//! Named invariant checks grouped into suites, with machine-readable results.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::borelweil::{
    basis_vector, generated_lattice, hom_lattice, integrally_isomorphic, kostant_lattice,
    maximal_lattice, maximality_certificate, minimal_lattice, realize_fraction, Closure,
};
use crate::contraction::{
    basis_loop, bracket, coefficient_roots, contracted_induced, contracted_produced, contracted_ps,
    generic_irreducibility, in_e_root_family, phi, polynomial_lattice, pullback, same_coefficients,
    sl2_bracket, specialize, ContractedPs,
};
use crate::error::{Error, Result};
use crate::hcmod::{
    check_module_axioms, corrupt_e, diagonal_equivalence, induced_module, parabolic_zform,
    principal_series, produced_module, qprime_module_with_undivided_f, CharacterModule,
    WeightModule,
};
use crate::hecke::{
    hecke_mul, hom_action, hom_action_by_sum, project, smash_mul, tensor_action, CharacterLattice,
    GradedMap, GradedVector, HeckeElement, SmashElement,
};
use crate::lattice::{
    exponent, integral_model, is_unit_after_localizing, nonvanishing, oracle_min_exponent,
    ord2_factorial_deficit, support, LatticeParams, Variant, ORACLE_DEPTH,
};
use crate::pbw::{normal_form, Gen, UeaElement, Word};
use crate::scalar::{format_rational, int, rat, CoefficientRing, Laurent, Rational};
use crate::zform::{classify, make_zform, SubalgebraLabel, ZForm, ZFormClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Hecke,
    Modules,
    Lattice,
    Contraction,
    Borelweil,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [
        Suite::Hecke,
        Suite::Modules,
        Suite::Lattice,
        Suite::Contraction,
        Suite::Borelweil,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Hecke => "hecke",
            Suite::Modules => "modules",
            Suite::Lattice => "lattice",
            Suite::Contraction => "contraction",
            Suite::Borelweil => "borelweil",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A known discrepancy that reproduced as expected.
    Finding,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Finding => "MISMATCH (documented)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.status)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Corrupts the modules fed to the relation checks, so that a healthy
    /// driver must report failures.
    pub inject_fault: bool,
}

/// Outcome of one check: `Ok(detail)` or `Err(first counterexample)`.
type Outcome = std::result::Result<String, String>;

struct Collector {
    suite: Suite,
    checks: Vec<Check>,
}

impl Collector {
    fn run(&mut self, name: &str, f: impl FnOnce() -> Outcome) {
        let (status, detail) = match f() {
            Ok(d) => (Status::Pass, d),
            Err(d) => (Status::Fail, d),
        };
        self.push(name, status, detail);
    }

    fn push(&mut self, name: &str, status: Status, detail: String) {
        self.checks.push(Check {
            suite: self.suite,
            name: name.to_string(),
            status,
            detail,
        });
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn verify(suite: Suite, opts: VerifyOptions) -> VerifyReport {
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    let mut checks = Vec::new();
    for s in suites {
        let mut c = Collector {
            suite: s,
            checks: Vec::new(),
        };
        match s {
            Suite::Hecke => hecke_suite(&mut c),
            Suite::Modules => modules_suite(&mut c, opts),
            Suite::Lattice => lattice_suite(&mut c),
            Suite::Contraction => contraction_suite(&mut c, opts),
            Suite::Borelweil => borelweil_suite(&mut c),
            Suite::All => unreachable!(),
        }
        checks.extend(c.checks);
    }
    let passed = checks.iter().all(|c| c.status != Status::Fail);
    VerifyReport {
        suite,
        passed,
        checks,
    }
}

const Z: CharacterLattice = CharacterLattice::FreeRankOne;

fn sample_vector(lattice: CharacterLattice) -> GradedVector<Rational> {
    GradedVector::from_components(
        lattice,
        (-12i64..=12).map(|l| (l, rat(l * l - 3 * l + 1, 1 + l.rem_euclid(4)))),
    )
}

fn hecke_suite(c: &mut Collector) {
    c.run("orthogonal_idempotents", || {
        for l in -10..=10 {
            for m in -10..=10 {
                let prod = hecke_mul(
                    &HeckeElement::idempotent(Z, l),
                    &HeckeElement::idempotent(Z, m),
                )
                .map_err(|e| e.to_string())?;
                let expect = if l == m {
                    HeckeElement::idempotent(Z, l)
                } else {
                    HeckeElement::zero(Z)
                };
                ensure(prod == expect, || format!("p_{l} p_{m}"))?;
            }
        }
        Ok("441 pairs".into())
    });
    c.run("type_decomposition", || {
        for n in 1..=6u64 {
            let lattice = CharacterLattice::cyclic(n).map_err(|e| e.to_string())?;
            let v = sample_vector(lattice);
            let mut sum = GradedVector::zero(lattice);
            for l in lattice.elements().unwrap_or_default() {
                sum = sum.add(&project(&v, l));
            }
            ensure(sum == v, || format!("Z/{n}"))?;
        }
        Ok("Z/1 .. Z/6".into())
    });
    c.run("hom_projection_formula", || {
        let v = sample_vector(Z);
        for shift in -3..=3i64 {
            let f = GradedMap::new(Z, (-8..=8).map(|w| ((w + shift, w), int(w - shift))));
            for l in -6..=6 {
                ensure(
                    hom_action(l, &f, &v) == hom_action_by_sum(l, &f, &v),
                    || format!("shift {shift}, lambda {l}"),
                )?;
            }
        }
        Ok(String::new())
    });
    c.run("schur_property", || {
        for a in -4..=4 {
            for b in -4..=4 {
                let f = GradedMap::new(Z, [((b, a), int(1))]);
                ensure(f.project(0).is_zero() == (a != b), || {
                    format!("k_{a} -> k_{b}")
                })?;
            }
        }
        Ok(String::new())
    });
    c.run("tensor_weights", || {
        let v = sample_vector(Z);
        for l in -6..=6 {
            let t = tensor_action(l, &v, &v).map_err(|e| e.to_string())?;
            ensure(t.terms.keys().all(|&(a, b)| a + b == l), || {
                format!("lambda {l}")
            })?;
        }
        Ok(String::new())
    });
    c.run("smash_associativity", || {
        let mut checked = 0usize;
        for g in [zf(1, 1), zf(2, 1), zf(1, 3)] {
            let mut gens = Vec::new();
            for a in 0..=2u32 {
                for b in 0..=2 - a {
                    for cc in 0..=2 - a - b {
                        for l in -3..=3 {
                            gens.push(SmashElement::new(
                                &UeaElement::monomial((a, b, cc), int(1)),
                                l,
                                Z,
                            ));
                        }
                    }
                }
            }
            for x in &gens {
                for y in &gens {
                    let xy = smash_mul(&g, x, y).map_err(|e| e.to_string())?;
                    for z in &gens {
                        let yz = smash_mul(&g, y, z).map_err(|e| e.to_string())?;
                        if xy.is_zero() && yz.is_zero() {
                            continue;
                        }
                        let lhs = smash_mul(&g, &xy, z).map_err(|e| e.to_string())?;
                        let rhs = smash_mul(&g, x, &yz).map_err(|e| e.to_string())?;
                        ensure(lhs == rhs, || format!("g_{{{},{}}}", g.n, g.m))?;
                        checked += 1;
                    }
                }
            }
        }
        Ok(format!("{checked} triples"))
    });
}

fn zf(n: i64, m: i64) -> ZForm {
    make_zform(n, m, int(1)).expect("valid parameters")
}

/// Rational `μ` samples used for principal series.
pub const MU_SAMPLES: [(i64, i64); 7] = [(-3, 1), (-1, 2), (0, 1), (1, 3), (2, 1), (7, 4), (5, 1)];

/// Every module family over the standard grid: `ind` and `pro` for
/// `(n, m) ∈ {1,2,3}²`, `λ ∈ [-6, 6]`, and the three principal series with
/// every residue `ε` and the `μ` samples.
pub fn module_grid() -> Result<Vec<WeightModule<Rational>>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for m in 1..=3 {
            let g = zf(n, m);
            for lambda in -6..=6 {
                out.push(induced_module(&g, lambda, CoefficientRing::Rationals));
                out.push(produced_module(&g, lambda, CoefficientRing::Rationals));
            }
            for label in [
                SubalgebraLabel::Q,
                SubalgebraLabel::QPrime,
                SubalgebraLabel::QDoublePrime,
            ] {
                if label == SubalgebraLabel::QDoublePrime && m != 2 * n {
                    continue;
                }
                let g = parabolic_zform(n, m, label)?;
                for k in 0..n {
                    for &(a, b) in &MU_SAMPLES {
                        let chi = CharacterModule::new(
                            label,
                            n,
                            rat(k, n),
                            rat(a, b),
                            CoefficientRing::Rationals,
                        )?;
                        out.push(principal_series(&g, &chi, CoefficientRing::Rationals)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn modules_suite(c: &mut Collector, opts: VerifyOptions) {
    c.run("bracket_relations", || {
        let mut modules = module_grid().map_err(|e| e.to_string())?;
        if opts.inject_fault {
            for m in modules.iter_mut() {
                *m = corrupt_e(m);
            }
        }
        let mut checked = 0;
        for m in &modules {
            let r = check_module_axioms(m, -40..=40);
            if let Some(f) = r.failures.first() {
                return Err(format!("{}: {:?} at p = {}", m.label, f.relation, f.index));
            }
            checked += r.checked;
        }
        Ok(format!(
            "{} modules, {checked} basis vectors",
            modules.len()
        ))
    });
    c.run("symbolic_relations", || {
        for m in module_grid().map_err(|e| e.to_string())? {
            ensure(m.symbolic_defects().iter().all(|d| d.is_zero()), || {
                m.label.clone()
            })?;
        }
        Ok(String::new())
    });
    c.run("negative_control", || {
        let g = parabolic_zform(1, 1, SubalgebraLabel::Q).map_err(|e| e.to_string())?;
        let chi = CharacterModule::new(
            SubalgebraLabel::Q,
            1,
            int(0),
            int(-2),
            CoefficientRing::Rationals,
        )
        .map_err(|e| e.to_string())?;
        let m =
            principal_series(&g, &chi, CoefficientRing::Rationals).map_err(|e| e.to_string())?;
        let r = check_module_axioms(&corrupt_e(&m), -30..=30);
        let bad: std::collections::BTreeSet<i64> = r.failures.iter().map(|f| f.index).collect();
        ensure(bad.len() == r.checked, || {
            format!(
                "corruption detected at {} of {} indices",
                bad.len(),
                r.checked
            )
        })?;
        Ok(format!("corrupted E detected at all {} indices", r.checked))
    });
    let mut printed_failures = 0usize;
    let mut total = 0usize;
    let mut derived_ok = true;
    let mut printed_err = None;
    for n in 1..=3 {
        for m in 1..=3 {
            let Ok(g) = parabolic_zform(n, m, SubalgebraLabel::QPrime) else {
                continue;
            };
            for k in 0..n {
                for &(a, b) in &MU_SAMPLES {
                    let (eps, mu) = (rat(k, n), rat(a, b));
                    total += 1;
                    match CharacterModule::new(
                        SubalgebraLabel::QPrime,
                        n,
                        eps.clone(),
                        mu.clone(),
                        CoefficientRing::Rationals,
                    )
                    .and_then(|chi| principal_series(&g, &chi, CoefficientRing::Rationals))
                    {
                        Ok(d) => derived_ok &= check_module_axioms(&d, -20..=20).passed(),
                        Err(_) => derived_ok = false,
                    }
                    match qprime_module_with_undivided_f(&g, &eps, &mu) {
                        Ok(p) if !check_module_axioms(&p, -20..=20).passed() => {
                            printed_failures += 1
                        }
                        Ok(_) => {}
                        Err(e) => printed_err = Some(e.to_string()),
                    }
                }
            }
        }
    }
    c.run("qprime_derived_f_coefficient", || {
        ensure(derived_ok, || {
            "derived q' module fails the relations".into()
        })?;
        Ok(format!("{total} parameter sets"))
    });
    let (status, detail) = match printed_err {
        Some(e) => (Status::Fail, e),
        None if printed_failures == total => (
            Status::Finding,
            format!("F = mu/2nm - p - eps breaks [E,F] = mH in {printed_failures}/{total} cases; half of it passes"),
        ),
        None => (Status::Fail, format!("printed coefficient failed only {printed_failures}/{total} cases")),
    };
    c.push("qprime_printed_f_coefficient", status, detail);
    c.run("pbw_normal_form", || {
        let words = all_words(3);
        for g in [zf(1, 1), zf(2, 3), zf(3, 1)] {
            for w1 in &words {
                for w2 in &words {
                    let direct = normal_form(&w1.concat(w2), &g);
                    let staged = normal_form(w1, &g).mul(&normal_form(w2, &g), &g);
                    ensure(direct == staged, || {
                        format!("{:?} {:?}", w1.letters, w2.letters)
                    })?;
                }
            }
        }
        Ok(format!("{} word pairs per form", words.len() * words.len()))
    });
    c.run("classification_roundtrip", || {
        let qs = [
            rat(1, 1),
            rat(-1, 1),
            rat(1, 2),
            rat(-1, 2),
            rat(2, 1),
            rat(-2, 1),
        ];
        for n in 1..=5 {
            for m in 1..=5 {
                for q in &qs {
                    let g = make_zform(n, m, q.clone()).map_err(|e| e.to_string())?;
                    let got = classify(&g.table()).map_err(|e| e.to_string())?;
                    let want = ZFormClass {
                        n,
                        m,
                        q: num_traits::Signed::abs(q),
                    };
                    ensure(got == want, || format!("({n},{m},{})", format_rational(q)))?;
                }
            }
        }
        Ok("150 forms".into())
    });
}

fn all_words(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::new(Vec::new())];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for x in [Gen::E, Gen::F, Gen::H] {
                let mut v: Vec<Gen> = w.clone();
                v.push(x);
                out.push(Word::new(v.clone()));
                next.push(v);
            }
        }
        frontier = next;
    }
    out
}

/// The parameter sets of the lattice grid: `n, m ≤ 3`, every `ε`, every
/// `μ ∈ [-12, 12]`, with the `q''` variant only where `m = 2n`.
pub fn lattice_grid() -> Vec<LatticeParams> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for m in 1..=3 {
            for k in 0..n {
                for mu in -12..=12 {
                    for v in [Variant::Q, Variant::Qp, Variant::Qpp] {
                        if v == Variant::Qpp && m != 2 * n {
                            continue;
                        }
                        if let Ok(p) = LatticeParams::new(v, n, m, rat(k, n), mu) {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Indices compared against the oracle: nine indices from the top for `q`,
/// from the bottom for `q'`, and `[-8, 8]` for `q''`.
pub fn oracle_window(params: &LatticeParams) -> Vec<i64> {
    match support(params) {
        crate::hcmod::Support::AtMost(top) => (top - 8..=top).collect(),
        crate::hcmod::Support::AtLeast(bottom) => (bottom..=bottom + 8).collect(),
        crate::hcmod::Support::All => (-8..=8).collect(),
        crate::hcmod::Support::Empty => Vec::new(),
    }
}

fn lattice_suite(c: &mut Collector) {
    let grid = lattice_grid();
    c.run("formula_oracle_equivalence", || {
        let mut count = 0;
        for params in grid.iter().filter(|p| nonvanishing(p)) {
            for p in oracle_window(params) {
                let e = exponent(p, params).map_err(|e| e.to_string())?;
                let o = oracle_min_exponent(params, p, ORACLE_DEPTH)
                    .map_err(|e| format!("{params:?} at {p}: {e}"))?;
                ensure(e == o, || {
                    format!("{params:?} at p = {p}: formula {e}, oracle {o}")
                })?;
                count += 1;
            }
        }
        Ok(format!("grid size {count}"))
    });
    c.run("nonvanishing_matches_oracle", || {
        let mut count = 0;
        for params in grid.iter().filter(|p| !nonvanishing(p)) {
            for p in -8..=8 {
                ensure(
                    oracle_min_exponent(params, p, ORACLE_DEPTH).is_err(),
                    || format!("{params:?} extends at {p}"),
                )?;
                count += 1;
            }
        }
        Ok(format!("{count} obstructed indices"))
    });
    c.run("factorial_deficit_golden", || {
        for a in 0..=12u32 {
            let s = (1u64 << a) - 1;
            ensure(ord2_factorial_deficit(s) == a as i64, || format!("a = {a}"))?;
        }
        Ok(String::new())
    });
    c.run("golden_exponent_table", || {
        let params = LatticeParams::new(Variant::Q, 1, 1, int(0), -2).map_err(|e| e.to_string())?;
        let r = integral_model(&params, -2..=1, true).map_err(|e| e.to_string())?;
        ensure(
            r.exponents == vec![(-2, 2), (-1, 1), (0, 1), (1, 0)] && r.oracle_agrees == Some(true),
            || format!("{:?}", r.exponents),
        )?;
        Ok(String::new())
    });
    c.run("qpp_exponents", || {
        for mu in -9..=9 {
            let params =
                LatticeParams::new(Variant::Qpp, 1, 2, int(0), mu).map_err(|e| e.to_string())?;
            let r = integral_model(&params, -10..=10, false).map_err(|e| e.to_string())?;
            if mu % 2 == 0 {
                ensure(
                    r.exponents.len() == 21 && r.exponents.iter().all(|&(_, e)| e == 0),
                    || format!("mu = {mu}"),
                )?;
            } else {
                ensure(!r.nonzero && r.exponents.is_empty(), || {
                    format!("mu = {mu}")
                })?;
            }
        }
        Ok(String::new())
    });
    c.run("lattice_closure", || {
        for params in grid.iter().filter(|p| nonvanishing(p)) {
            let window = oracle_window(params);
            let (lo, hi) = (window[0], *window.last().unwrap_or(&window[0]));
            let defects =
                crate::lattice::closure_defects(params, lo..=hi).map_err(|e| e.to_string())?;
            ensure(defects.is_empty(), || format!("{params:?}: {defects:?}"))?;
        }
        Ok(String::new())
    });
    c.run("localization_consistency", || {
        for params in grid.iter().filter(|p| nonvanishing(p)) {
            for p in oracle_window(params) {
                let e = exponent(p, params).map_err(|e| e.to_string())?;
                ensure(is_unit_after_localizing(e, params.n, params.m), || {
                    format!("{params:?} at {p}")
                })?;
            }
        }
        Ok(String::new())
    });
}

fn lp(s: &str) -> Laurent {
    s.parse().expect("valid Laurent literal")
}

fn contraction_suite(c: &mut Collector, opts: VerifyOptions) {
    c.run("contraction_jacobi", || {
        let basis: Vec<_> = (0..3).map(basis_loop).collect();
        for x in &basis {
            for y in &basis {
                for w in &basis {
                    let (a, b, cc) = (
                        bracket(&bracket(x, y), w),
                        bracket(&bracket(y, w), x),
                        bracket(&bracket(w, x), y),
                    );
                    ensure(
                        (0..3).all(|k| (&(&a[k] + &b[k]) + &cc[k]).is_zero()),
                        || "Jacobi".into(),
                    )?;
                }
            }
        }
        Ok(String::new())
    });
    c.run("phi_preserves_brackets", || {
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (basis_loop(i), basis_loop(j));
                ensure(
                    bracket(&phi(&x), &phi(&y)) == phi(&sl2_bracket(&x, &y)),
                    || format!("pair ({i},{j})"),
                )?;
            }
        }
        Ok("9 pairs".into())
    });
    c.run("contracted_relations", || {
        let mut modules = Vec::new();
        for n in 1..=3 {
            for lambda in -6..=6 {
                modules.push(contracted_induced(lambda, n).map_err(|e| e.to_string())?);
                modules.push(contracted_produced(lambda, n).map_err(|e| e.to_string())?);
            }
            for k in 0..n {
                for mu in ["z", "2z", "-3z + z^2", "1 + z", "z^-1 + 5"] {
                    if let ContractedPs::Module(m) =
                        contracted_ps(n, &rat(k, n), &lp(mu), CoefficientRing::Laurent)
                            .map_err(|e| e.to_string())?
                    {
                        modules.push(m);
                    }
                }
            }
        }
        if opts.inject_fault {
            for m in modules.iter_mut() {
                *m = corrupt_e(m);
            }
        }
        for m in &modules {
            let r = check_module_axioms(m, -40..=40);
            if let Some(f) = r.failures.first() {
                return Err(format!("{}: {:?} at p = {}", m.label, f.relation, f.index));
            }
        }
        Ok(format!("{} modules", modules.len()))
    });
    c.run("fiber_at_one", || {
        for n in 1..=3 {
            for lambda in -6..=6 {
                let g = zf(n, 1);
                let ind = specialize(
                    &contracted_induced(lambda, n).map_err(|e| e.to_string())?,
                    &int(1),
                )
                .map_err(|e| e.to_string())?;
                let target = induced_module(&g, lambda, CoefficientRing::Rationals);
                ensure(
                    same_coefficients(
                        &pullback(&ind, &g).map_err(|e| e.to_string())?,
                        &target,
                        -30..=30,
                    ),
                    || format!("ind n={n} lambda={lambda}"),
                )?;
                let pro = specialize(
                    &contracted_produced(lambda, n).map_err(|e| e.to_string())?,
                    &int(1),
                )
                .map_err(|e| e.to_string())?;
                let target = produced_module(&g, lambda, CoefficientRing::Rationals);
                let g_half = make_zform(n, 1, rat(n, 2)).map_err(|e| e.to_string())?;
                let pulled = pullback(&pro, &g_half).map_err(|e| e.to_string())?;
                ensure(same_coefficients(&pulled, &target, -30..=30), || {
                    format!("pro n={n} lambda={lambda}")
                })?;
                ensure(
                    diagonal_equivalence(
                        &pullback(&pro, &g).map_err(|e| e.to_string())?,
                        &target,
                        -30..=30,
                    ),
                    || format!("pro n={n} lambda={lambda} up to rescaling"),
                )?;
            }
            let g = parabolic_zform(n, 1, SubalgebraLabel::Q).map_err(|e| e.to_string())?;
            for k in 0..n {
                for mu in ["z", "2z", "-3z + z^2", "1 + z"] {
                    let mu = lp(mu);
                    let eps = rat(k, n);
                    let cps = contracted_ps(n, &eps, &mu, CoefficientRing::Laurent)
                        .map_err(|e| e.to_string())?;
                    let ContractedPs::Module(m) = cps else {
                        return Err("unexpected vanishing".into());
                    };
                    let fiber = specialize(&m, &int(1)).map_err(|e| e.to_string())?;
                    let mu_g = int(n) * mu.eval(&int(1)).map_err(|e| e.to_string())?;
                    let chi = CharacterModule::new(
                        SubalgebraLabel::Q,
                        n,
                        eps,
                        mu_g,
                        CoefficientRing::Rationals,
                    )
                    .map_err(|e| e.to_string())?;
                    let target = principal_series(&g, &chi, CoefficientRing::Rationals)
                        .map_err(|e| e.to_string())?;
                    ensure(
                        same_coefficients(
                            &pullback(&fiber, &g).map_err(|e| e.to_string())?,
                            &target,
                            -30..=30,
                        ),
                        || format!("ps n={n} mu={m:?}", m = m.label),
                    )?;
                }
            }
        }
        Ok(String::new())
    });
    c.run("vanishing_and_polynomial_closure", || {
        for mu in ["1", "1 + z", "z", "2z", "z^2"] {
            let l = lp(mu);
            let vanishing = !l.coefficient(0).is_zero();
            let r =
                contracted_ps(1, &int(0), &l, CoefficientRing::Poly).map_err(|e| e.to_string())?;
            ensure(
                matches!(r, ContractedPs::Vanishing { .. }) == vanishing,
                || format!("mu = {mu}"),
            )?;
            if !vanishing {
                let rep =
                    polynomial_lattice(1, &int(0), &l, -40..=40).map_err(|e| e.to_string())?;
                ensure(rep.closed && rep.base_change_identity, || {
                    format!("mu = {mu}: {:?}", rep.failures)
                })?;
            }
        }
        Ok("mu in {1, 1+z, z, 2z, z^2}".into())
    });
    c.run("generic_irreducibility", || {
        let mut count = 0;
        for n in 1..=4 {
            for k in 0..n {
                let eps = rat(k, n);
                for num in -24..=24 {
                    for den in 1..=4 {
                        let mu = Laurent::monomial(rat(num, den), 1);
                        let m = contracted_ps(n, &eps, &mu, CoefficientRing::Laurent)
                            .map_err(|e| e.to_string())?;
                        let roots = coefficient_roots(m.module().ok_or("vanishing")?, -60..=60);
                        ensure(
                            generic_irreducibility(&eps, &mu) == roots.is_empty(),
                            || format!("eps {eps}, mu {mu}"),
                        )?;
                        count += 1;
                    }
                }
            }
        }
        Ok(format!("{count} parameters"))
    });
    let eps = rat(1, 3);
    let mu = lp("2/3*z");
    let missed = !generic_irreducibility(&eps, &mu) && !in_e_root_family(&eps, &mu);
    c.push(
        "e_root_family_reducibility",
        if missed {
            Status::Finding
        } else {
            Status::Fail
        },
        "the family 2zk - 2z*eps misses f-roots, e.g. eps = 1/3, mu = 2z/3".into(),
    );
}

fn borelweil_suite(c: &mut Collector) {
    c.run("lattice_relations", || {
        for lambda in 0..=12 {
            for l in [minimal_lattice(lambda), maximal_lattice(lambda)] {
                let l = l.and_then(|s| s.realize()).map_err(|e| e.to_string())?;
                l.check_relations()
                    .map_err(|e| format!("lambda {lambda}: {e}"))?;
                ensure(l.has_irreducible_weights(), || {
                    format!("lambda {lambda}: weights {:?}", l.weights)
                })?;
            }
        }
        Ok(String::new())
    });
    c.run("minimal_in_maximal", || {
        for lambda in 0..=12 {
            let (min, max) = (minimal_lattice(lambda), maximal_lattice(lambda));
            let (min, max) = (
                min.map_err(|e| e.to_string())?,
                max.map_err(|e| e.to_string())?,
            );
            ensure(max.index_of(&min).is_some(), || format!("lambda {lambda}"))?;
        }
        Ok(String::new())
    });
    c.run("hom_rank_one", || {
        for lambda in 0..=12 {
            let min = minimal_lattice(lambda)
                .and_then(|s| s.realize())
                .map_err(|e| e.to_string())?;
            let max = maximal_lattice(lambda)
                .and_then(|s| s.realize())
                .map_err(|e| e.to_string())?;
            let h = hom_lattice(&min, &max).map_err(|e| e.to_string())?;
            ensure(h.rank == 1, || format!("lambda {lambda}: rank {}", h.rank))?;
        }
        Ok(String::new())
    });
    c.run("maximality_certificate", || {
        for lambda in 0..=12 {
            let max = maximal_lattice(lambda).map_err(|e| e.to_string())?;
            let r = maximality_certificate(&max, &[2, 3, 5], Closure::Hyperalgebra)
                .map_err(|e| e.to_string())?;
            ensure(r.certified, || {
                format!("lambda {lambda}: {:?}", r.enlargeable)
            })?;
        }
        Ok(String::new())
    });
    c.run("duality_roundtrip", || {
        for lambda in 0..=12 {
            let amb = kostant_lattice(lambda).map_err(|e| e.to_string())?;
            let low = generated_lattice(
                &amb,
                &[basis_vector(amb.rank(), amb.rank() - 1)],
                Closure::Hyperalgebra,
            )
            .and_then(|s| s.realize())
            .map_err(|e| e.to_string())?;
            let max = maximal_lattice(lambda)
                .and_then(|s| s.realize())
                .map_err(|e| e.to_string())?;
            ensure(
                integrally_isomorphic(&crate::borelweil::dual_lattice(&low), &max),
                || format!("lambda {lambda}"),
            )?;
        }
        Ok(String::new())
    });
    c.run("counit_fractions", || {
        for lambda in -5..=5 {
            for n in 1..=20 {
                let r = realize_fraction(lambda, n)
                    .map_err(|e| format!("lambda {lambda}, n {n}: {e}"))?;
                let want = if n == 1 { Rational::zero() } else { rat(1, n) };
                ensure(r.realized == want, || format!("lambda {lambda}, n {n}"))?;
            }
        }
        Ok("n <= 20, lambda in [-5, 5]".into())
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn modules_suite_reports_finding() {
        let r = verify(Suite::Modules, VerifyOptions::default());
        assert!(r.passed, "{:#?}", r.checks);
        let finding = r
            .checks
            .iter()
            .find(|c| c.name == "qprime_printed_f_coefficient")
            .unwrap();
        assert_eq!(finding.status, Status::Finding);
        assert_eq!(
            r.checks
                .iter()
                .find(|c| c.name == "bracket_relations")
                .unwrap()
                .status,
            Status::Pass
        );
    }

    #[test]
    fn injected_fault_fails() {
        let r = verify(Suite::Modules, VerifyOptions { inject_fault: true });
        assert!(!r.passed);
    }
}
