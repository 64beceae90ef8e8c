//! Integral lattices in the irreducible `SL_2`-modules over `Q`.
//!
//! Every lattice here has one-dimensional weight spaces, so a sublattice that
//! is stable under the torus is determined by one positive rational scale
//! per weight. A [`Sublattice`] records those scales against the basis of an
//! ambient [`FiniteLattice`], and closure under the raising and lowering
//! operators only ever replaces a scale by a gcd.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel, primitive_integer_vector};
use crate::scalar::{format_rational, gcd_rational, int, Rational};

/// A free abelian group with a basis of weight vectors, listed from the
/// highest weight down, and integer matrices for `E` and `F`. Entry `[i][j]`
/// is the coefficient of basis vector `i` in the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteLattice {
    pub weights: Vec<i64>,
    pub e: Vec<Vec<i64>>,
    pub f: Vec<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    /// Closed under the divided powers `E^j / j!` and `F^j / j!`.
    #[default]
    Hyperalgebra,
    /// Closed under `E` and `F` only.
    Enveloping,
}

fn to_i64(x: &Rational) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::CheckFailed(format!(
            "entry {} is not integral",
            format_rational(x)
        )));
    }
    x.to_integer().to_i64().ok_or_else(|| {
        Error::InvalidParameter(format!("entry {} exceeds 64 bits", format_rational(x)))
    })
}

fn square(r: usize) -> Vec<Vec<i64>> {
    vec![vec![0; r]; r]
}

type QMatrix = Vec<Vec<Rational>>;

fn to_q(m: &[Vec<i64>]) -> QMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| int(x)).collect())
        .collect()
}

fn qmul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let r = a.len();
    let c = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Rational::zero(); c]; r];
    for i in 0..r {
        for k in 0..b.len() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..c {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

impl FiniteLattice {
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn highest_weight(&self) -> Option<i64> {
        self.weights.first().copied()
    }

    fn checked(self) -> Result<Self> {
        self.check_relations()?;
        Ok(self)
    }

    /// `[E,F] = H`, `[H,E] = 2E` and `[H,F] = -2F` as exact matrix identities.
    pub fn check_relations(&self) -> Result<()> {
        let r = self.rank();
        if self.e.len() != r
            || self.f.len() != r
            || self.e.iter().chain(&self.f).any(|row| row.len() != r)
        {
            return Err(Error::CheckFailed(format!("matrices are not {r}x{r}")));
        }
        let (e, f) = (to_q(&self.e), to_q(&self.f));
        let (ef, fe) = (qmul(&e, &f), qmul(&f, &e));
        for i in 0..r {
            for j in 0..r {
                let h = if i == j {
                    int(self.weights[i])
                } else {
                    Rational::zero()
                };
                if &ef[i][j] - &fe[i][j] != h {
                    return Err(Error::CheckFailed(format!("[E,F] != H at entry ({i},{j})")));
                }
                let shift = self.weights[i] - self.weights[j];
                if self.e[i][j] != 0 && shift != 2 {
                    return Err(Error::CheckFailed(format!(
                        "[H,E] != 2E at entry ({i},{j})"
                    )));
                }
                if self.f[i][j] != 0 && shift != -2 {
                    return Err(Error::CheckFailed(format!(
                        "[H,F] != -2F at entry ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether the weights are `λ, λ-2, ..., -λ`, the weights of the
    /// irreducible module of highest weight `λ`.
    pub fn has_irreducible_weights(&self) -> bool {
        let Some(top) = self.highest_weight() else {
            return false;
        };
        top >= 0
            && self.rank() as i64 == top + 1
            && self
                .weights
                .iter()
                .enumerate()
                .all(|(i, &w)| w == top - 2 * i as i64)
    }

    fn distinct_weights(&self) -> Result<()> {
        let mut ws = self.weights.clone();
        ws.sort_unstable();
        ws.dedup();
        if ws.len() != self.rank() {
            return Err(Error::InvalidParameter(
                "weight spaces must be one-dimensional".into(),
            ));
        }
        Ok(())
    }

    /// The operators a sublattice must be stable under.
    fn closure_operators(&self, mode: Closure) -> Vec<QMatrix> {
        let (e, f) = (to_q(&self.e), to_q(&self.f));
        let mut ops = vec![e.clone(), f.clone()];
        if mode == Closure::Hyperalgebra {
            for base in [e, f] {
                let mut power = base.clone();
                for j in 2..self.rank() {
                    power = qmul(&power, &base);
                    let fact = (1..=j as i64).fold(int(1), |acc, k| acc * int(k));
                    ops.push(
                        power
                            .iter()
                            .map(|row| row.iter().map(|x| x / &fact).collect())
                            .collect(),
                    );
                }
            }
        }
        ops
    }
}

/// The lattice with basis `v_{λ+2n-2i}`, `0 <= i <= λ+2n`, where
/// `E v_{λ+2n-2i} = (λ+2n-i+1) v_{λ+2n-2i+2}` and
/// `F v_{λ+2n-2i} = (i+1) v_{λ+2n-2i-2}`.
pub fn shifted_kostant_lattice(lambda: i64, n: i64) -> Result<FiniteLattice> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!(
            "n must be nonnegative (got {n})"
        )));
    }
    let top = lambda + 2 * n;
    if top < 0 {
        return Err(Error::InvalidParameter(format!(
            "lambda + 2n must be nonnegative (got {top})"
        )));
    }
    let r = (top + 1) as usize;
    let mut e = square(r);
    let mut f = square(r);
    for i in 0..r {
        if i > 0 {
            e[i - 1][i] = top - i as i64 + 1;
        }
        if i + 1 < r {
            f[i + 1][i] = i as i64 + 1;
        }
    }
    let weights = (0..r).map(|i| top - 2 * i as i64).collect();
    FiniteLattice { weights, e, f }.checked()
}

/// The divided-power lattice of highest weight `h`, with basis
/// `u_k = F^k v_h / k!`.
pub fn kostant_lattice(h: i64) -> Result<FiniteLattice> {
    shifted_kostant_lattice(h, 0)
}

/// A torus-stable sublattice of the rational span of an ambient lattice:
/// `⊕ scales[i] · Z b_i`, with a zero scale for a missing weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    pub ambient: FiniteLattice,
    pub scales: Vec<Rational>,
}

impl Sublattice {
    pub fn new(ambient: FiniteLattice, scales: Vec<Rational>) -> Result<Self> {
        if scales.len() != ambient.rank() {
            return Err(Error::InvalidParameter(
                "one scale per ambient basis vector".into(),
            ));
        }
        let scales = scales.into_iter().map(|s| s.abs()).collect();
        Ok(Sublattice { ambient, scales })
    }

    pub fn full(ambient: FiniteLattice) -> Self {
        let scales = vec![int(1); ambient.rank()];
        Sublattice { ambient, scales }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Sublattice {
            ambient: self.ambient.clone(),
            scales: self.scales.iter().map(|s| (s * k).abs()).collect(),
        }
    }

    /// The scale of the highest weight component.
    pub fn highest_scale(&self) -> &Rational {
        &self.scales[0]
    }

    /// Rescales so that the highest weight component is `Z b_0`.
    pub fn normalized(&self) -> Result<Self> {
        let top = self.highest_scale().clone();
        if top.is_zero() {
            return Err(Error::InvalidParameter(
                "highest weight component is zero".into(),
            ));
        }
        Ok(self.scale(&(int(1) / top)))
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Sublattice) -> bool {
        self.ambient == other.ambient
            && self.scales.iter().zip(&other.scales).all(|(s, o)| {
                if o.is_zero() {
                    true
                } else {
                    !s.is_zero() && (o / s).is_integer()
                }
            })
    }

    /// `[self : other]` when `other ⊆ self` and both have the same rank.
    pub fn index_of(&self, other: &Sublattice) -> Option<BigInt> {
        if !self.contains(other)
            || self
                .scales
                .iter()
                .zip(&other.scales)
                .any(|(s, o)| s.is_zero() != o.is_zero())
        {
            return None;
        }
        let mut idx = BigInt::one();
        for (s, o) in self.scales.iter().zip(&other.scales) {
            if !s.is_zero() {
                idx *= (o / s).to_integer();
            }
        }
        Some(idx)
    }

    /// The basis `scales[i] · b_i` as a lattice in its own right. Fails when
    /// the sublattice is not stable under `E` and `F`.
    pub fn realize(&self) -> Result<FiniteLattice> {
        let idx: Vec<usize> = (0..self.scales.len())
            .filter(|&i| !self.scales[i].is_zero())
            .collect();
        let r = idx.len();
        let mut e = square(r);
        let mut f = square(r);
        for (out, src) in [(&mut e, &self.ambient.e), (&mut f, &self.ambient.f)] {
            for (b, &j) in idx.iter().enumerate() {
                for row in 0..self.scales.len() {
                    if src[row][j] == 0 {
                        continue;
                    }
                    let Some(a) = idx.iter().position(|&i| i == row) else {
                        return Err(Error::CheckFailed(format!(
                            "image of basis vector {j} leaves the sublattice"
                        )));
                    };
                    let entry = &self.scales[j] * int(src[row][j]) / &self.scales[row];
                    out[a][b] = to_i64(&entry)?;
                }
            }
        }
        let weights = idx.iter().map(|&i| self.ambient.weights[i]).collect();
        FiniteLattice { weights, e, f }.checked()
    }
}

/// The smallest torus-stable sublattice containing the generators and
/// stable under the operators selected by `mode`.
pub fn generated_lattice(
    ambient: &FiniteLattice,
    generators: &[Vec<Rational>],
    mode: Closure,
) -> Result<Sublattice> {
    ambient.distinct_weights()?;
    let r = ambient.rank();
    let mut scales = vec![Rational::zero(); r];
    let absorb = |scales: &mut Vec<Rational>, i: usize, c: Rational| -> bool {
        if c.is_zero() {
            return false;
        }
        let next = if scales[i].is_zero() {
            c.abs()
        } else {
            gcd_rational(&scales[i], &c)
        };
        let changed = next != scales[i];
        scales[i] = next;
        changed
    };
    for v in generators {
        if v.len() != r {
            return Err(Error::InvalidParameter(format!(
                "generator has length {}, expected {r}",
                v.len()
            )));
        }
        for (i, c) in v.iter().enumerate() {
            absorb(&mut scales, i, c.clone());
        }
    }
    if scales.iter().all(Zero::is_zero) {
        return Err(Error::InvalidParameter("generators are all zero".into()));
    }
    let ops = ambient.closure_operators(mode);
    let mut changed = true;
    while changed {
        changed = false;
        for op in &ops {
            for j in 0..r {
                if scales[j].is_zero() {
                    continue;
                }
                for i in 0..r {
                    if !op[i][j].is_zero() {
                        let c = &scales[j] * &op[i][j];
                        changed |= absorb(&mut scales, i, c);
                    }
                }
            }
        }
    }
    Sublattice::new(ambient.clone(), scales)
}

/// The unit vector on basis index `i`.
pub fn basis_vector(rank: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); rank];
    v[i] = int(1);
    v
}

/// `Hom(L, Z)` with `(x·φ)(v) = -φ(x·v)`, listed from the highest weight
/// down.
pub fn dual_lattice(l: &FiniteLattice) -> FiniteLattice {
    let r = l.rank();
    let flip = |m: &Vec<Vec<i64>>| {
        let mut out = square(r);
        for i in 0..r {
            for j in 0..r {
                out[r - 1 - i][r - 1 - j] = -m[j][i];
            }
        }
        out
    };
    FiniteLattice {
        weights: l.weights.iter().rev().map(|w| -w).collect(),
        e: flip(&l.e),
        f: flip(&l.f),
    }
}

/// The dual of a sublattice of the divided-power lattice of highest weight
/// `h`, realized inside the same rational module through the invariant
/// pairing `<u_k, u_{h-k}> = (-1)^k C(h,k)`.
pub fn embedded_dual(l: &Sublattice) -> Result<Sublattice> {
    let h = l.ambient.highest_weight().unwrap_or(-1);
    if l.ambient != kostant_lattice(h)? {
        return Err(Error::InvalidParameter(
            "embedded duals need the divided-power ambient".into(),
        ));
    }
    if l.scales.iter().any(Zero::is_zero) {
        return Err(Error::InvalidParameter(
            "embedded duals need full rank".into(),
        ));
    }
    let hb = BigInt::from(h);
    let scales = (0..=h as usize)
        .map(|k| {
            let c = Rational::from_integer(binomial(hb.clone(), BigInt::from(k)));
            int(1) / (c * &l.scales[h as usize - k])
        })
        .collect();
    Sublattice::new(l.ambient.clone(), scales)
}

/// The lattice generated by the highest weight vector.
pub fn minimal_lattice(lambda: i64) -> Result<Sublattice> {
    check_lambda(lambda)?;
    let amb = kostant_lattice(lambda)?;
    let v = basis_vector(amb.rank(), 0);
    generated_lattice(&amb, &[v], Closure::Hyperalgebra)
}

/// The dual of the lattice generated by a lowest weight vector, normalized
/// so that its highest weight component is `Z`.
pub fn maximal_lattice(lambda: i64) -> Result<Sublattice> {
    check_lambda(lambda)?;
    let amb = kostant_lattice(lambda)?;
    let lowest = basis_vector(amb.rank(), amb.rank() - 1);
    embedded_dual(&generated_lattice(&amb, &[lowest], Closure::Hyperalgebra)?)?.normalized()
}

fn check_lambda(lambda: i64) -> Result<()> {
    if lambda < 0 {
        return Err(Error::InvalidParameter(format!(
            "highest weight must be nonnegative (got {lambda})"
        )));
    }
    Ok(())
}

/// The positive generator of the image of the highest weight component under
/// the counit normalized by `b_0 ↦ 1`.
pub fn hom_generator_index(v: &Sublattice) -> Result<BigInt> {
    let c = v.highest_scale();
    if c.is_zero() || !c.is_integer() {
        return Err(Error::InvalidParameter(format!(
            "highest component scale {} is not a positive integer",
            format_rational(c)
        )));
    }
    Ok(c.to_integer().abs())
}

/// If `a` and `b` differ by a diagonal change of basis, the diagonal.
pub fn diagonal_isomorphism(a: &FiniteLattice, b: &FiniteLattice) -> Option<Vec<Rational>> {
    if a.weights != b.weights {
        return None;
    }
    let r = a.rank();
    let mut d = vec![int(1); r];
    for i in 1..r {
        let (fa, fb) = (a.f[i][i - 1], b.f[i][i - 1]);
        let (ea, eb) = (a.e[i - 1][i], b.e[i - 1][i]);
        // D F_a = F_b D on the entry (i, i-1): d_i fa = fb d_{i-1}
        d[i] = if fa != 0 {
            &d[i - 1] * int(fb) / int(fa)
        } else if eb != 0 {
            &d[i - 1] * int(ea) / int(eb)
        } else {
            return None;
        };
        if d[i].is_zero() {
            return None;
        }
    }
    let ok = |x: &Vec<Vec<i64>>, y: &Vec<Vec<i64>>| {
        (0..r).all(|i| (0..r).all(|j| &d[i] * int(x[i][j]) == int(y[i][j]) * &d[j]))
    };
    (ok(&a.e, &b.e) && ok(&a.f, &b.f)).then_some(d)
}

/// Whether the diagonal isomorphism exists and is invertible over `Z`.
pub fn integrally_isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> bool {
    diagonal_isomorphism(a, b).is_some_and(|d| d.iter().all(|x| x.abs() == int(1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomReport {
    /// Dimension over `Q` of the space of intertwiners.
    pub rank: usize,
    /// A basis of the integral intertwiners, each a matrix with entry
    /// `[i][j]` the coefficient of target basis `i` in the image of source
    /// basis `j`. For rank 1 this is the primitive generator.
    pub generators: Vec<Vec<Vec<String>>>,
}

/// Solves `T E_a = E_b T`, `T F_a = F_b T`, `T H_a = H_b T` for `T: a -> b`.
pub fn hom_lattice(a: &FiniteLattice, b: &FiniteLattice) -> Result<HomReport> {
    let (ra, rb) = (a.rank(), b.rank());
    // The H equations alone force T to preserve weights.
    let unknowns: Vec<(usize, usize)> = (0..rb)
        .flat_map(|i| (0..ra).map(move |j| (i, j)))
        .filter(|&(i, j)| b.weights[i] == a.weights[j])
        .collect();
    let col = |i: usize, j: usize| unknowns.iter().position(|&u| u == (i, j));
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (ma, mb) in [(&a.e, &b.e), (&a.f, &b.f)] {
        for i in 0..rb {
            for j in 0..ra {
                // (T M_a)[i][j] - (M_b T)[i][j]
                let mut row = vec![Rational::zero(); unknowns.len()];
                for k in 0..ra {
                    if ma[k][j] != 0 {
                        if let Some(c) = col(i, k) {
                            row[c] += int(ma[k][j]);
                        }
                    }
                }
                for k in 0..rb {
                    if mb[i][k] != 0 {
                        if let Some(c) = col(k, j) {
                            row[c] -= int(mb[i][k]);
                        }
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let basis = kernel(&rows, unknowns.len());
    let generators = basis
        .iter()
        .map(|v| {
            let ints = primitive_integer_vector(v);
            let mut m = vec![vec!["0".to_string(); ra]; rb];
            for (&(i, j), x) in unknowns.iter().zip(&ints) {
                m[i][j] = x.to_string();
            }
            m
        })
        .collect();
    Ok(HomReport {
        rank: basis.len(),
        generators,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enlargement {
    pub index: usize,
    pub weight: i64,
    pub prime: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub primes: Vec<u64>,
    pub checked: usize,
    /// Basis vectors `b` and primes `ρ` for which adding `b/ρ` keeps the
    /// highest weight component equal to `Z`.
    pub enlargeable: Vec<Enlargement>,
    pub certified: bool,
}

/// For every basis vector `b` of `l` and prime `ρ`, closes `l + Z b/ρ` and
/// checks that the highest weight component grows.
pub fn maximality_certificate(
    l: &Sublattice,
    primes: &[u64],
    mode: Closure,
) -> Result<CertificateReport> {
    if l.highest_scale() != &int(1) {
        return Err(Error::InvalidParameter(
            "the highest weight component must be Z".into(),
        ));
    }
    let mut enlargeable = Vec::new();
    let mut checked = 0;
    for (i, s) in l.scales.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        for &p in primes {
            if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
                return Err(Error::InvalidParameter(format!("{p} is not a prime")));
            }
            checked += 1;
            let mut gens: Vec<Vec<Rational>> = l
                .scales
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let mut v = vec![Rational::zero(); l.scales.len()];
                    v[k] = c.clone();
                    v
                })
                .collect();
            gens[i][i] = s / Rational::from_integer(BigInt::from(p));
            let bigger = generated_lattice(&l.ambient, &gens, mode)?;
            if bigger.highest_scale() == &int(1) {
                enlargeable.push(Enlargement {
                    index: i,
                    weight: l.ambient.weights[i],
                    prime: p,
                });
            }
        }
    }
    Ok(CertificateReport {
        primes: primes.to_vec(),
        checked,
        certified: enlargeable.is_empty(),
        enlargeable,
    })
}

fn mod_one(x: &Rational) -> Rational {
    x - x.floor()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounitWitness {
    pub lambda: i64,
    pub n: i64,
    /// The value `φ(v_λ)` reduced into `[0, 1)`.
    #[serde(with = "crate::scalar::serde_rational")]
    pub fraction: Rational,
    pub weight_check: bool,
    pub f_check: bool,
    pub h_check: bool,
}

/// The functional `φ(v_{λ+2n-2i}) = 1/n` for `i = n` and `0` otherwise on
/// [`shifted_kostant_lattice`], checked to commute with `F` and `H` when the
/// target is `Q/Z` with weight `λ`.
pub fn counit_fraction_witness(lambda: i64, n: i64) -> Result<CounitWitness> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "n must be positive (got {n})"
        )));
    }
    if lambda + n < 0 {
        return Err(Error::InvalidParameter(format!(
            "weight {lambda} does not occur in the lattice of highest weight {} (need lambda + n >= 0)",
            lambda + 2 * n
        )));
    }
    let l = shifted_kostant_lattice(lambda, n)?;
    let r = l.rank();
    let value = Rational::new(BigInt::one(), BigInt::from(n));
    let phi: Vec<Rational> = (0..r)
        .map(|i| {
            if i as i64 == n {
                value.clone()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let weight_check = (0..r).all(|i| phi[i].is_zero() || l.weights[i] == lambda);
    let apply =
        |m: &Vec<Vec<i64>>, j: usize| -> Rational { (0..r).map(|i| &phi[i] * int(m[i][j])).sum() };
    let f_check = (0..r).all(|j| mod_one(&apply(&l.f, j)).is_zero());
    let h_check =
        (0..r).all(|j| mod_one(&(&phi[j] * int(l.weights[j]) - int(lambda) * &phi[j])).is_zero());
    if !(weight_check && f_check && h_check) {
        return Err(Error::CheckFailed(format!(
            "counit witness fails at lambda = {lambda}, n = {n}"
        )));
    }
    Ok(CounitWitness {
        lambda,
        n,
        fraction: mod_one(&value),
        weight_check,
        f_check,
        h_check,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionRealization {
    /// The witness is taken on the lattice for `multiplier · n` and scaled by
    /// `multiplier`.
    pub multiplier: i64,
    pub witness: CounitWitness,
    #[serde(with = "crate::scalar::serde_rational")]
    pub realized: Rational,
}

/// Realizes `1/n mod Z` in the image of the counit for weight `λ`, using the
/// smallest `k >= 1` with `λ + kn >= 0`.
pub fn realize_fraction(lambda: i64, n: i64) -> Result<FractionRealization> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "n must be positive (got {n})"
        )));
    }
    let k = if lambda >= 0 {
        1
    } else {
        ((-lambda + n - 1) / n).max(1)
    };
    let witness = counit_fraction_witness(lambda, k * n)?;
    let realized = mod_one(&(int(k) * &witness.fraction));
    Ok(FractionRealization {
        multiplier: k,
        witness,
        realized,
    })
}
