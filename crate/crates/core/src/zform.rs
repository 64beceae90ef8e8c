//! Split ℤ-forms `g_{n,m}` of `sl2`: the rank-3 Lie algebra over ℤ with basis
//! `E, F, H`, brackets `[H,E] = nE`, `[H,F] = -nF`, `[E,F] = mH`, and the
//! realization `E ↦ q·e`, `F ↦ (nm/2q)·f`, `H ↦ (n/2)·h` into traceless 2×2
//! matrices.
//!
//! Lie algebra elements are coefficient vectors `[x_E, x_F, x_H]`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{int, parse_rational, rat, serde_rational, CoefficientRing, Rational};

pub const E: usize = 0;
pub const F: usize = 1;
pub const H: usize = 2;

pub type LieVec = [Rational; 3];
pub type Mat2 = [[Rational; 2]; 2];

pub fn lie_vec(x_e: i64, x_f: i64, x_h: i64) -> LieVec {
    [int(x_e), int(x_f), int(x_h)]
}

fn basis_vec(i: usize) -> LieVec {
    let mut v = lie_vec(0, 0, 0);
    v[i] = int(1);
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZForm {
    pub n: i64,
    pub m: i64,
    #[serde(with = "serde_rational")]
    pub q: Rational,
}

/// Images of `E`, `F`, `H` under the realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub images: [Mat2; 3],
}

pub fn mat_e() -> Mat2 {
    [[int(0), int(1)], [int(0), int(0)]]
}
pub fn mat_f() -> Mat2 {
    [[int(0), int(0)], [int(1), int(0)]]
}
pub fn mat_h() -> Mat2 {
    [[int(1), int(0)], [int(0), int(-1)]]
}

pub fn mat_scale(a: &Mat2, c: &Rational) -> Mat2 {
    [[&a[0][0] * c, &a[0][1] * c], [&a[1][0] * c, &a[1][1] * c]]
}

pub fn mat_add(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [&a[0][0] + &b[0][0], &a[0][1] + &b[0][1]],
        [&a[1][0] + &b[1][0], &a[1][1] + &b[1][1]],
    ]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let entry = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

pub fn mat_commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    mat_add(&mat_mul(a, b), &mat_scale(&mat_mul(b, a), &int(-1)))
}

/// Scales a Lie vector.
pub fn lie_scale(x: &LieVec, c: &Rational) -> LieVec {
    [&x[0] * c, &x[1] * c, &x[2] * c]
}

pub fn lie_add(x: &LieVec, y: &LieVec) -> LieVec {
    [&x[0] + &y[0], &x[1] + &y[1], &x[2] + &y[2]]
}

/// Constructs `g_{n,m}` with realization parameter `q`.
pub fn make_zform(n: i64, m: i64, q: Rational) -> Result<ZForm> {
    if n <= 0 || m <= 0 {
        return Err(Error::InvalidParameter(format!(
            "n and m must be positive (got n = {n}, m = {m})"
        )));
    }
    if q.is_zero() {
        return Err(Error::InvalidParameter("q must be nonzero".into()));
    }
    Ok(ZForm { n, m, q })
}

impl ZForm {
    /// The bracket of two elements, extended bilinearly from the basis.
    pub fn bracket(&self, x: &LieVec, y: &LieVec) -> LieVec {
        let (n, m) = (int(self.n), int(self.m));
        // [E,F] = mH, [H,E] = nE, [H,F] = -nF
        let ef = &x[E] * &y[F] - &x[F] * &y[E];
        let he = &x[H] * &y[E] - &x[E] * &y[H];
        let hf = &x[H] * &y[F] - &x[F] * &y[H];
        [&n * he, -(&n * hf), &m * ef]
    }

    /// Adjoint `T¹`-weight of each basis vector.
    pub fn weights(&self) -> [i64; 3] {
        [self.n, -self.n, 0]
    }

    pub fn realization(&self) -> Realization {
        let two_q = &self.q * int(2);
        Realization {
            images: [
                mat_scale(&mat_e(), &self.q),
                mat_scale(&mat_f(), &(int(self.n * self.m) / two_q)),
                mat_scale(&mat_h(), &rat(self.n, 2)),
            ],
        }
    }

    pub fn realize(&self, x: &LieVec) -> Mat2 {
        let r = self.realization();
        let mut acc = mat_scale(&mat_e(), &int(0));
        for i in 0..3 {
            acc = mat_add(&acc, &mat_scale(&r.images[i], &x[i]));
        }
        acc
    }

    /// The bracket table of this form in the basis `(E, F, H)`.
    pub fn table(&self) -> BracketTable {
        let mut brackets = vec![vec![vec![0i64; 3]; 3]; 3];
        for (i, row) in brackets.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let b = self.bracket(&basis_vec(i), &basis_vec(j));
                *entry = b
                    .iter()
                    .map(|c| c.to_integer().try_into().unwrap())
                    .collect();
            }
        }
        let realization = self
            .realization()
            .images
            .iter()
            .map(|m| {
                m.iter()
                    .map(|row| row.iter().map(|c| c.to_string()).collect())
                    .collect()
            })
            .collect();
        BracketTable {
            basis: vec!["E".into(), "F".into(), "H".into()],
            weights: self.weights().to_vec(),
            brackets,
            realization,
        }
    }
}

/// A rank-3 Lie algebra over ℤ presented by structure constants, a weight
/// for each basis vector, and matrix images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketTable {
    #[serde(default)]
    pub basis: Vec<String>,
    pub weights: Vec<i64>,
    /// `brackets[i][j]` holds the coordinates of `[x_i, x_j]`.
    pub brackets: Vec<Vec<Vec<i64>>>,
    /// Matrix images `[[a, b], [c, d]]` with entries as rational strings.
    pub realization: Vec<Vec<Vec<String>>>,
}

impl BracketTable {
    /// Re-expresses the table in a new basis `y_k = Σ_j change[k][j]·x_j`,
    /// where `change` is invertible over ℤ.
    pub fn change_basis(&self, change: [[i64; 3]; 3]) -> Result<BracketTable> {
        let to_q = |m: &[[i64; 3]; 3]| -> Vec<Vec<Rational>> {
            m.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect()
        };
        let c = to_q(&change);
        let mut brackets = vec![vec![vec![0i64; 3]; 3]; 3];
        let mut weights = vec![0i64; 3];
        for k in 0..3 {
            let support: Vec<usize> = (0..3).filter(|&j| change[k][j] != 0).collect();
            let w = self.weights[support[0]];
            if support.iter().any(|&j| self.weights[j] != w) {
                return Err(Error::InvalidParameter(
                    "basis change must preserve weights".into(),
                ));
            }
            weights[k] = w;
        }
        // new coordinates solve old = Σ_k new_k · y_k
        let ct: Vec<Vec<Rational>> = (0..3)
            .map(|j| (0..3).map(|k| c[k][j].clone()).collect())
            .collect();
        for k in 0..3 {
            for l in 0..3 {
                let mut old = vec![Rational::zero(); 3];
                for i in 0..3 {
                    for j in 0..3 {
                        let coef = &c[k][i] * &c[l][j];
                        if coef.is_zero() {
                            continue;
                        }
                        for (t, o) in old.iter_mut().enumerate() {
                            *o += &coef * int(self.brackets[i][j][t]);
                        }
                    }
                }
                let new = linalg::solve(&ct, &old).ok_or_else(|| {
                    Error::InvalidParameter("basis change is not invertible".into())
                })?;
                for t in 0..3 {
                    if !new[t].is_integer() {
                        return Err(Error::InvalidParameter(
                            "basis change is not invertible over Z".into(),
                        ));
                    }
                    brackets[k][l][t] = new[t].to_integer().try_into().unwrap();
                }
            }
        }
        let old_real = self.realization_matrices()?;
        let realization = (0..3)
            .map(|k| {
                let mut acc = mat_scale(&mat_e(), &int(0));
                for j in 0..3 {
                    acc = mat_add(&acc, &mat_scale(&old_real[j], &c[k][j]));
                }
                acc.iter()
                    .map(|row| row.iter().map(|v| v.to_string()).collect())
                    .collect()
            })
            .collect();
        Ok(BracketTable {
            basis: (0..3).map(|k| format!("y{k}")).collect(),
            weights,
            brackets,
            realization,
        })
    }

    fn realization_matrices(&self) -> Result<Vec<Mat2>> {
        if self.realization.len() != 3 {
            return Err(Error::NotSplitZForm(
                "realization must give three matrices".into(),
            ));
        }
        self.realization
            .iter()
            .map(|m| {
                if m.len() != 2 || m.iter().any(|r| r.len() != 2) {
                    return Err(Error::NotSplitZForm(
                        "realization matrices must be 2x2".into(),
                    ));
                }
                Ok([
                    [parse_rational(&m[0][0])?, parse_rational(&m[0][1])?],
                    [parse_rational(&m[1][0])?, parse_rational(&m[1][1])?],
                ])
            })
            .collect()
    }

    fn bracket_of(&self, x: &LieVec, y: &LieVec) -> LieVec {
        let mut out = lie_vec(0, 0, 0);
        for i in 0..3 {
            for j in 0..3 {
                let coef = &x[i] * &y[j];
                if coef.is_zero() {
                    continue;
                }
                for (t, o) in out.iter_mut().enumerate() {
                    *o += &coef * int(self.brackets[i][j][t]);
                }
            }
        }
        out
    }
}

/// The isomorphism class `(n, m, ±q)`; `q` is reported as its absolute value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZFormClass {
    pub n: i64,
    pub m: i64,
    #[serde(with = "serde_rational")]
    pub q: Rational,
}

/// Recovers the invariants `(n, m, ±q)` of a split ℤ-form given by a bracket
/// table, weights, and a realization.
pub fn classify(table: &BracketTable) -> Result<ZFormClass> {
    let not_split = |why: &str| Error::NotSplitZForm(why.to_string());
    if table.weights.len() != 3 || table.brackets.len() != 3 {
        return Err(not_split("expected a rank-3 table"));
    }
    if table
        .brackets
        .iter()
        .any(|r| r.len() != 3 || r.iter().any(|v| v.len() != 3))
    {
        return Err(not_split(
            "bracket table must be 3x3 with 3 coordinates per entry",
        ));
    }
    let zero_pos: Vec<usize> = (0..3).filter(|&i| table.weights[i] == 0).collect();
    let pos: Vec<usize> = (0..3).filter(|&i| table.weights[i] > 0).collect();
    let neg: Vec<usize> = (0..3).filter(|&i| table.weights[i] < 0).collect();
    if zero_pos.len() != 1
        || pos.len() != 1
        || neg.len() != 1
        || table.weights[pos[0]] != -table.weights[neg[0]]
    {
        return Err(not_split(
            "weight spaces are not free of rank 1 with weights -n, 0, n",
        ));
    }
    let (i0, ip, ineg) = (zero_pos[0], pos[0], neg[0]);
    let n = table.weights[ip];
    let unit = |i: usize| basis_vec(i);

    for i in 0..3 {
        for j in 0..3 {
            let a = table.bracket_of(&unit(i), &unit(j));
            let b = table.bracket_of(&unit(j), &unit(i));
            if lie_add(&a, &b).iter().any(|c| !c.is_zero()) {
                return Err(not_split("bracket is not antisymmetric"));
            }
            let w = table.weights[i] + table.weights[j];
            for (t, c) in a.iter().enumerate() {
                if !c.is_zero() && table.weights[t] != w {
                    return Err(not_split("bracket does not respect the weight grading"));
                }
            }
        }
    }
    let jacobi_ok = (0..3).all(|i| {
        (0..3).all(|j| {
            (0..3).all(|k| {
                let (x, y, z) = (unit(i), unit(j), unit(k));
                let s = lie_add(
                    &lie_add(
                        &table.bracket_of(&table.bracket_of(&x, &y), &z),
                        &table.bracket_of(&table.bracket_of(&y, &z), &x),
                    ),
                    &table.bracket_of(&table.bracket_of(&z, &x), &y),
                );
                s.iter().all(|c| c.is_zero())
            })
        })
    });
    if !jacobi_ok {
        return Err(not_split("Jacobi identity fails"));
    }

    // H is the generator of the weight-0 line acting on the positive root line by +n.
    let h_action = table.bracket_of(&unit(i0), &unit(ip));
    let h_sign = if h_action[ip] == int(n) {
        int(1)
    } else if h_action[ip] == int(-n) {
        int(-1)
    } else {
        return Err(not_split(
            "the weight-0 generator does not act on the root lines by the weight",
        ));
    };
    let h_vec = lie_scale(&unit(i0), &h_sign);
    let ef = table.bracket_of(&unit(ip), &unit(ineg));
    if !ef[ip].is_zero() || !ef[ineg].is_zero() {
        return Err(not_split("[E,F] does not lie in ZH"));
    }
    let c = &ef[i0] * &h_sign;
    if c.is_zero() {
        return Err(not_split("[E,F] vanishes"));
    }
    let m = c.abs();
    let f_sign = if c.is_positive() { int(1) } else { int(-1) };
    let e_vec = unit(ip);
    let f_vec = lie_scale(&unit(ineg), &f_sign);

    let real = table.realization_matrices()?;
    let realize = |x: &LieVec| {
        let mut acc = mat_scale(&mat_e(), &int(0));
        for (j, mat) in real.iter().enumerate() {
            acc = mat_add(&acc, &mat_scale(mat, &x[j]));
        }
        acc
    };
    for i in 0..3 {
        if !(&real[i][0][0] + &real[i][1][1]).is_zero() {
            return Err(not_split("realization matrices must be traceless"));
        }
        for j in 0..3 {
            let lhs = realize(&table.bracket_of(&unit(i), &unit(j)));
            let rhs = mat_commutator(&real[i], &real[j]);
            if lhs != rhs {
                return Err(not_split("realization does not preserve brackets"));
            }
        }
    }
    let alpha_h = realize(&h_vec);
    if alpha_h != mat_scale(&mat_h(), &rat(n, 2)) {
        return Err(not_split("realization of H must be (n/2)h"));
    }
    let alpha_e = realize(&e_vec);
    if !alpha_e[0][0].is_zero()
        || !alpha_e[1][0].is_zero()
        || !alpha_e[1][1].is_zero()
        || alpha_e[0][1].is_zero()
    {
        return Err(not_split(
            "realization of the positive root vector is not a multiple of e",
        ));
    }
    let q = alpha_e[0][1].clone();
    let expected_f = mat_scale(&mat_f(), &(&m * int(n) / (int(2) * &q)));
    if realize(&f_vec) != expected_f {
        return Err(not_split("realization of F is not (nm/2q)f"));
    }
    let m = m
        .to_integer()
        .try_into()
        .map_err(|_| not_split("m out of range"))?;
    Ok(ZFormClass { n, m, q: q.abs() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubalgebraLabel {
    B,
    BBar,
    Q,
    QPrime,
    QDoublePrime,
    Maximal,
}

impl std::fmt::Display for SubalgebraLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SubalgebraLabel::B => "b",
            SubalgebraLabel::BBar => "bbar",
            SubalgebraLabel::Q => "q",
            SubalgebraLabel::QPrime => "q'",
            SubalgebraLabel::QDoublePrime => "q''",
            SubalgebraLabel::Maximal => "maximal",
        };
        write!(f, "{s}")
    }
}

impl SubalgebraLabel {
    pub fn is_parabolic(&self) -> bool {
        matches!(
            self,
            SubalgebraLabel::Q | SubalgebraLabel::QPrime | SubalgebraLabel::QDoublePrime
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subalgebra {
    pub label: SubalgebraLabel,
    /// Integer combinations of `E, F, H`.
    pub basis: Vec<[i64; 3]>,
    pub base_ring: CoefficientRing,
}

impl Subalgebra {
    pub fn basis_vecs(&self) -> Vec<LieVec> {
        self.basis
            .iter()
            .map(|b| lie_vec(b[0], b[1], b[2]))
            .collect()
    }

    /// Expresses `[x, y]` for every pair of basis vectors as an integer
    /// combination of the basis; errors if some bracket leaves the span.
    pub fn check_closure(&self, g: &ZForm) -> Result<()> {
        let vecs = self.basis_vecs();
        let cols: Vec<Vec<Rational>> = (0..3)
            .map(|t| vecs.iter().map(|v| v[t].clone()).collect())
            .collect();
        for x in &vecs {
            for y in &vecs {
                let b = g.bracket(x, y);
                let coords = linalg::solve(&cols, &b).filter(|c| {
                    let back = c.iter().zip(&vecs).fold(lie_vec(0, 0, 0), |acc, (ci, v)| {
                        lie_add(&acc, &lie_scale(v, ci))
                    });
                    back == b
                });
                match coords {
                    Some(c) if c.iter().all(|v| v.is_integer()) => {}
                    _ => {
                        return Err(Error::CheckFailed(format!(
                            "bracket of {x:?} and {y:?} leaves the integral span of {}",
                            self.label
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    /// The ring over which the Iwasawa splitting `g = S ⊕ ZH` is solvable.
    pub fn iwasawa_ring(&self, g: &ZForm) -> CoefficientRing {
        match self.label {
            SubalgebraLabel::QDoublePrime => CoefficientRing::LocalizedIntegers(2),
            _ => CoefficientRing::LocalizedIntegers(2 * (g.n * g.m) as u64),
        }
    }
}

/// The Borel, parabolic and maximal subalgebras of `g_{n,m}`.
pub fn subalgebra(g: &ZForm, label: SubalgebraLabel) -> Result<Subalgebra> {
    let (n, m) = (g.n, g.m);
    let nm = n * m;
    let require = |ok: bool, what: &str| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{label} requires {what} (got n = {n}, m = {m}, q = {})",
                g.q
            )))
        }
    };
    let basis = match label {
        SubalgebraLabel::B => vec![[1, 0, 0], [0, 0, 1]],
        SubalgebraLabel::BBar => vec![[0, 1, 0], [0, 0, 1]],
        SubalgebraLabel::Q => {
            require(g.q == rat(1, 2), "q = 1/2")?;
            vec![[-2 * nm, 1, 2 * m], [2 * nm, 1, 0]]
        }
        SubalgebraLabel::QPrime => {
            require(g.q == int(nm), "q = nm")?;
            vec![[-1, 2 * nm, 2 * m], [1, 2 * nm, 0]]
        }
        SubalgebraLabel::QDoublePrime => {
            require(g.q == int(n) && m == 2 * n, "q = n and m = 2n")?;
            vec![[-1, 1, 2], [1, 1, 0]]
        }
        SubalgebraLabel::Maximal => {
            require(g.q == rat(1, 2), "q = 1/2")?;
            vec![[-2 * nm, 1, 2 * m], [-2 * n, 0, 1]]
        }
    };
    Ok(Subalgebra {
        label,
        basis,
        base_ring: CoefficientRing::Integers,
    })
}

/// Coefficients `(c_X, c_Y, c_H)` writing `E` and `F` in terms of the
/// parabolic basis `X, Y` and `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IwasawaTable {
    pub label: SubalgebraLabel,
    pub e: [Rational; 3],
    pub f: [Rational; 3],
    pub ring: CoefficientRing,
}

pub fn iwasawa_decompose(g: &ZForm, s: &Subalgebra) -> Result<IwasawaTable> {
    iwasawa_decompose_over(s, &s.iwasawa_ring(g))
}

/// The Iwasawa splitting over an explicit ring; a coefficient outside the
/// ring is reported with the offending denominator.
pub fn iwasawa_decompose_over(s: &Subalgebra, ring: &CoefficientRing) -> Result<IwasawaTable> {
    if !s.label.is_parabolic() {
        return Err(Error::InvalidParameter(format!(
            "{} is not one of the parabolic forms",
            s.label
        )));
    }
    let vecs = s.basis_vecs();
    let cols = [vecs[0].clone(), vecs[1].clone(), basis_vec(H)];
    let a: Vec<Vec<Rational>> = (0..3)
        .map(|t| cols.iter().map(|c| c[t].clone()).collect())
        .collect();
    let mut out: Vec<[Rational; 3]> = Vec::new();
    for target in [basis_vec(E), basis_vec(F)] {
        let c = linalg::solve(&a, &target)
            .ok_or_else(|| Error::CheckFailed("parabolic basis and H do not span".into()))?;
        let back = (0..3).fold(lie_vec(0, 0, 0), |acc, i| {
            lie_add(&acc, &lie_scale(&cols[i], &c[i]))
        });
        if back != target {
            return Err(Error::CheckFailed("Iwasawa re-expansion mismatch".into()));
        }
        for v in &c {
            if !ring.contains_rational(v) {
                return Err(Error::NotInvertible {
                    integer: v.denom().to_string(),
                    ring: ring.to_string(),
                });
            }
        }
        out.push([c[0].clone(), c[1].clone(), c[2].clone()]);
    }
    let f = out.pop().unwrap();
    let e = out.pop().unwrap();
    Ok(IwasawaTable {
        label: s.label,
        e,
        f,
        ring: ring.clone(),
    })
}

/// True iff `x` lies in the complex parabolic `{[[a, b-a], [a+b, -a]]}` that
/// the parabolic ℤ-forms are preimages of.
pub fn in_complex_parabolic(x: &Mat2) -> bool {
    let a = &x[0][0];
    let b = &x[1][0] - a;
    x[0][1] == &b - a && x[1][1] == -a.clone()
}
