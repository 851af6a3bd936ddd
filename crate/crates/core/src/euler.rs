//! Euler characteristics of finite categories.
//!
//! Each characteristic is total: non-existence is reported as
//! [`EulerResult::Undefined`] with a reason rather than as an error.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactalg::{
    adjugate, det, eval_at_minus_one, inverse, rational_from_sequence, reduce, solve, Matrix, Poly,
    Rational, RationalFunction,
};
use crate::fincat::{incidence_matrix, is_acyclic, FinCat, ObjId};
use crate::nerve::{finite_level_counts, level_counts};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Undefined {
    NotFinite,
    NoWeighting,
    NoCoweighting,
    PoleAtMinusOne,
    NotAcyclic,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EulerResult {
    Defined(Rational),
    Undefined(Undefined),
}

impl EulerResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            EulerResult::Defined(v) => Some(v),
            EulerResult::Undefined(_) => None,
        }
    }
}

impl From<Option<Rational>> for EulerResult {
    fn from(v: Option<Rational>) -> Self {
        v.map_or(
            EulerResult::Undefined(Undefined::PoleAtMinusOne),
            EulerResult::Defined,
        )
    }
}

/// `p/q`, `p`, or `UNDEFINED(Reason)`.
impl fmt::Display for EulerResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EulerResult::Defined(v) => write!(f, "{v}"),
            EulerResult::Undefined(r) => write!(f, "UNDEFINED({r:?})"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiltrationError {
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("category is not acyclic")]
pub struct NotAcyclic;

/// Values `μ(x)` per object, strictly increasing along non-identity morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NFiltration(pub Vec<u64>);

impl NFiltration {
    pub fn check(&self, c: &FinCat) -> Result<(), FiltrationError> {
        if self.0.len() != c.num_objects() {
            return Err(FiltrationError::InvalidFiltration(format!(
                "{} values for {} objects",
                self.0.len(),
                c.num_objects()
            )));
        }
        for f in c.morphism_ids().filter(|&f| !c.is_identity(f)) {
            let (x, y) = (c.dom(f), c.cod(f));
            if self.0[x.0] >= self.0[y.0] {
                return Err(FiltrationError::InvalidFiltration(format!(
                    "μ({}) = {} is not below μ({}) = {}",
                    c.object_label(x),
                    self.0[x.0],
                    c.object_label(y),
                    self.0[y.0]
                )));
            }
        }
        Ok(())
    }
}

/// Below this many objects acyclic inputs still go through the dense
/// matrix routes, so small cases always exercise the general formulas.
const DENSE_LIMIT: usize = 10;

fn ones(n: usize) -> Vec<Rational> {
    vec![Rational::one(); n]
}

/// A solution of `Z·w = 1` (column), if any.
pub fn weighting(c: &FinCat) -> Option<Vec<Rational>> {
    solve(&incidence_matrix(c).to_rational(), &ones(c.num_objects())).expect("shapes agree")
}

/// A solution of `c·Z = 1` (row), if any.
pub fn coweighting(c: &FinCat) -> Option<Vec<Rational>> {
    solve(
        &incidence_matrix(c).transpose().to_rational(),
        &ones(c.num_objects()),
    )
    .expect("shapes agree")
}

/// Weighting and coweighting of an acyclic category by substitution in
/// topological order; `Z` is unitriangular there, so both are integral.
fn triangular_weights(c: &FinCat, order: &[ObjId]) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = c.num_objects();
    let mut w = vec![BigInt::zero(); n];
    for &x in order.iter().rev() {
        let mut v = BigInt::one();
        for &f in c.outgoing(x) {
            if !c.is_identity(f) {
                v -= &w[c.cod(f).0];
            }
        }
        w[x.0] = v;
    }
    let mut k = vec![BigInt::zero(); n];
    for &y in order {
        let mut v = BigInt::one();
        for &f in c.incoming(y) {
            if !c.is_identity(f) {
                v -= &k[c.dom(f).0];
            }
        }
        k[y.0] = v;
    }
    (w, k)
}

pub fn chi_leinster(c: &FinCat) -> EulerResult {
    if c.num_objects() > DENSE_LIMIT && is_acyclic(c) {
        let order = c.topological_order().expect("acyclic");
        let (w, k) = triangular_weights(c, &order);
        let (sw, sk): (BigInt, BigInt) = (w.iter().sum(), k.iter().sum());
        assert_eq!(sw, sk, "weighting and coweighting sums differ");
        return EulerResult::Defined(Rational::from_integer(sw));
    }
    let Some(w) = weighting(c) else {
        return EulerResult::Undefined(Undefined::NoWeighting);
    };
    let Some(k) = coweighting(c) else {
        return EulerResult::Undefined(Undefined::NoCoweighting);
    };
    let (sw, sk): (Rational, Rational) = (w.iter().sum(), k.iter().sum());
    assert_eq!(sw, sk, "weighting and coweighting sums differ");
    EulerResult::Defined(sw)
}

/// `Z⁻¹`, whose `(i, j)` entry is the Möbius function `μ(x_i, x_j)`.
pub fn mobius_inversion(c: &FinCat) -> Option<Matrix<Rational>> {
    inverse(&incidence_matrix(c).to_rational()).expect("incidence matrices are square")
}

/// `E − (Z − E)t` over ℚ[t].
pub fn series_matrix(c: &FinCat) -> Matrix<Poly> {
    let z = incidence_matrix(c);
    let n = z.size();
    Matrix::from_fn(n, n, |i, j| {
        let off = -BigInt::from(z.get(i, j) - u64::from(i == j));
        Poly::new(vec![
            Rational::from_integer(BigInt::from(u8::from(i == j))),
            Rational::from_integer(off),
        ])
    })
}

/// The unreduced pair `(sum adj(E − (Z−E)t), det(E − (Z−E)t))`.
pub fn series_num_den(c: &FinCat) -> (Poly, Poly) {
    if c.num_objects() == 0 {
        return (Poly::zero(), Poly::one());
    }
    let m = series_matrix(c);
    let den = det(&m).expect("square");
    let num = adjugate(&m).expect("square, non-empty").entry_sum();
    (num, den)
}

/// For acyclic `c`: `x = 1 + t(Z − E)x` solved by substitution in reverse
/// topological order; the generating function is the polynomial `Σ x_i`.
fn triangular_series(c: &FinCat, order: &[ObjId]) -> Poly {
    let mut x = vec![Poly::zero(); c.num_objects()];
    let t = Poly::t();
    for &a in order.iter().rev() {
        let mut s = Poly::zero();
        for &f in c.outgoing(a) {
            if !c.is_identity(f) {
                s = &s + &x[c.cod(f).0];
            }
        }
        x[a.0] = &Poly::one() + &(&t * &s);
    }
    x.iter().fold(Poly::zero(), |acc, p| &acc + p)
}

/// The reduced rational function equal to `Σ #N̄_n t^n` as a power series.
pub fn series_rational_function(c: &FinCat) -> RationalFunction {
    if c.num_objects() > DENSE_LIMIT {
        if let Some(order) = is_acyclic(c).then(|| c.topological_order()).flatten() {
            return RationalFunction::from_poly(triangular_series(c, &order));
        }
    }
    let (num, den) = series_num_den(c);
    reduce(&num, &den).expect("det(E − (Z−E)t) has constant term 1")
}

pub fn chi_series(c: &FinCat) -> EulerResult {
    eval_at_minus_one(&series_rational_function(c)).into()
}

/// `Σ (−1)^n #N̄_n` for finite acyclic `c`.
pub fn chi_l2_acyclic(c: &FinCat) -> EulerResult {
    if !is_acyclic(c) {
        return EulerResult::Undefined(Undefined::NotAcyclic);
    }
    let counts = finite_level_counts(c).expect("acyclic categories have finite nerves");
    let mut total = BigInt::zero();
    for (n, k) in counts.into_iter().enumerate() {
        let k = BigInt::from(k);
        if n % 2 == 0 {
            total += k;
        } else {
            total -= k;
        }
    }
    EulerResult::Defined(Rational::from_integer(total))
}

/// `f_χ(t) = Σ_n (−1)^n (Σ_i (−1)^i #N̄_i(A)_n) t^n`, where `N̄_i(A)_n` are
/// the `i`-chains whose largest filtration value along the chain is `n`.
pub fn filtered_series(c: &FinCat, mu: &NFiltration) -> Result<Poly, FiltrationError> {
    mu.check(c)?;
    // (end object, max μ) → signed count of chains of the current length
    let mut level: BTreeMap<(usize, u64), BigInt> = c
        .object_ids()
        .map(|x| ((x.0, mu.0[x.0]), BigInt::one()))
        .collect();
    let mut by_max: BTreeMap<u64, BigInt> = BTreeMap::new();
    let mut sign = BigInt::one();
    while !level.is_empty() {
        for (&(_, m), k) in &level {
            *by_max.entry(m).or_default() += &sign * k;
        }
        let mut next: BTreeMap<(usize, u64), BigInt> = BTreeMap::new();
        for (&(y, m), k) in &level {
            for &f in c.outgoing(ObjId(y)) {
                if !c.is_identity(f) {
                    let z = c.cod(f).0;
                    *next.entry((z, m.max(mu.0[z]))).or_default() += k;
                }
            }
        }
        level = next;
        sign = -sign;
    }
    let degree = by_max.keys().next_back().map_or(0, |&m| m as usize + 1);
    let mut coeffs = vec![Rational::zero(); degree];
    for (m, k) in by_max {
        let k = if m % 2 == 0 { k } else { -k };
        coeffs[m as usize] = Rational::from_integer(k);
    }
    Ok(Poly::new(coeffs))
}

pub fn chi_fil(c: &FinCat, mu: &NFiltration) -> Result<EulerResult, FiltrationError> {
    if !is_acyclic(c) {
        return Ok(EulerResult::Undefined(Undefined::NotAcyclic));
    }
    let f = filtered_series(c, mu)?;
    Ok(EulerResult::Defined(f.eval(&-Rational::one())))
}

/// `μ(x)` = position of `x` in the topological order of the objects.
pub fn filtration_from_topological_order(c: &FinCat) -> Result<NFiltration, NotAcyclic> {
    if !is_acyclic(c) {
        return Err(NotAcyclic);
    }
    let order = c.topological_order().ok_or(NotAcyclic)?;
    let mut mu = vec![0u64; c.num_objects()];
    for (i, x) in order.into_iter().enumerate() {
        mu[x.0] = i as u64;
    }
    Ok(NFiltration(mu))
}

/// Longest non-identity path ending at each object (for acyclic `c`).
pub fn height_filtration(c: &FinCat) -> Result<NFiltration, NotAcyclic> {
    if !is_acyclic(c) {
        return Err(NotAcyclic);
    }
    let order = c.topological_order().ok_or(NotAcyclic)?;
    let mut h = vec![0u64; c.num_objects()];
    for x in order {
        for &f in c.outgoing(x) {
            if !c.is_identity(f) {
                let y = c.cod(f).0;
                h[y] = h[y].max(h[x.0] + 1);
            }
        }
    }
    Ok(NFiltration(h))
}

/// `χ_ex^(2)(Sd(C)^op)`: the L² level series of `Sd(C)^op` is
/// `Σ h_n z^n` with `h_n` the number of level-`n` objects of `Sd(C)`,
/// continued to `z = −1`.
///
/// The continuation is rebuilt from the first `2d + 2` level sizes by
/// Berlekamp–Massey; the series has a recurrence of order at most `d`,
/// the number of objects. No determinant or adjugate is involved, so this
/// is an independent route to the value of [`chi_series`].
pub fn chi_ext_l2_of_sd_op(c: &FinCat) -> EulerResult {
    let terms = 2 * c.num_objects() + 2;
    let h: Vec<Rational> = level_counts(c, terms - 1)
        .into_iter()
        .map(|k| Rational::from_integer(BigInt::from(k)))
        .collect();
    eval_at_minus_one(&rational_from_sequence(&h)).into()
}
