//! Necessary conditions on fixed-point data, from the signature formula,
//! localization of equivariant classes, and the three-point edge structure.
//!
//! Every check is a pure function of its input. The dimension-12 chain
//! ([`dim12_chain`]) runs the three-point conditions in a fixed order and
//! records which one refutes a candidate.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::{
    elementary_symmetric, rational_sum, solve_vandermonde, IntPolynomial, TruncatedSeries,
};
use crate::fpdata::{FixedPoint, FixedPointData, TriplePattern};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("sign sum {sum} violates |sign| <= k - 2 for k = {points} fixed points")]
    SignBound { sum: i64, points: usize },
    #[error("a single fixed point is only possible on a point")]
    SinglePoint,
    #[error("degree {m} exceeds the number of weights {n}")]
    Degree { m: usize, n: usize },
    #[error("expected {expected} class values, got {found}")]
    ClassValues { expected: usize, found: usize },
    #[error("pattern length must be {expected}, got {found}")]
    PatternLength { expected: usize, found: usize },
    #[error("stage order: {0}")]
    StageOrder(String),
}

fn require_len(p: &TriplePattern, n: usize) -> Result<(), ConstraintError> {
    if p.n() != n {
        return Err(ConstraintError::PatternLength {
            expected: n,
            found: p.n(),
        });
    }
    Ok(())
}

/// Outcome of the truncated signature expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignatureResult {
    /// No coefficient of positive degree survives up to the truncation order.
    Constant { value: i64 },
    NonConstant { first_degree: usize },
}

impl SignatureResult {
    pub fn is_constant(&self) -> bool {
        matches!(self, SignatureResult::Constant { .. })
    }
}

/// `4 * (largest weight) + 1`.
pub fn default_truncation(data: &FixedPointData) -> usize {
    4 * data.max_weight().unwrap_or(0) as usize + 1
}

/// `Σ_p ε(p) ∏_i (1 + t^{w_{p,i}}) / (1 - t^{w_{p,i}})` expanded to order `order`.
pub fn signature_expansion(data: &FixedPointData, order: usize) -> TruncatedSeries {
    let mut total = vec![BigInt::zero(); order + 1];
    for p in data.points() {
        let mut s = TruncatedSeries::constant(BigInt::from(p.sign.value()), order);
        for &w in p.weights() {
            s.mul_weight_factor(w);
        }
        for (t, c) in total.iter_mut().zip(s.coefficients()) {
            *t += c;
        }
    }
    TruncatedSeries::from_coeffs(total)
}

pub fn signature_series(data: &FixedPointData, order: usize) -> SignatureResult {
    let s = signature_expansion(data, order);
    match s.first_nonconstant_degree() {
        None => SignatureResult::Constant {
            value: i64::try_from(s.coeff(0)).expect("constant term is a sign sum"),
        },
        Some(first_degree) => SignatureResult::NonConstant { first_degree },
    }
}

/// Exact test that the signature rational function is constant, for any
/// number of points: clears the common denominator `∏_p ∏_i (1 - t^{w_{p,i}})`
/// and checks that the resulting polynomial vanishes.
pub fn signature_exact(data: &FixedPointData) -> bool {
    let numer: Vec<IntPolynomial> = data
        .points()
        .iter()
        .map(|p| product_of_binomials(p.weights(), true))
        .collect();
    let denom: Vec<IntPolynomial> = data
        .points()
        .iter()
        .map(|p| product_of_binomials(p.weights(), false))
        .collect();
    let sigma: i64 = data.points().iter().map(|p| p.sign.value()).sum();
    let mut residual = IntPolynomial::zero();
    for (i, p) in data.points().iter().enumerate() {
        let mut term = IntPolynomial::monomial(p.sign.value(), 0);
        term = term.mul(&numer[i]);
        for (j, d) in denom.iter().enumerate() {
            if j != i {
                term = term.mul(d);
            }
        }
        residual = &residual + &term;
    }
    let all_denoms = denom.iter().fold(IntPolynomial::one(), |acc, d| acc.mul(d));
    residual = &residual - &all_denoms.scale(&BigInt::from(sigma));
    residual.is_zero()
}

fn product_of_binomials(exps: &[u64], plus: bool) -> IntPolynomial {
    exps.iter()
        .fold(IntPolynomial::one(), |acc, &w| acc.mul(&IntPolynomial::binomial(w, plus)))
}

/// Signed sum of the four products obtained by clearing denominators in the
/// three-point signature identity:
///
/// `-∏(1-t^a)(1-t^b)(1-t^c) + ∏(1+t^a)(1+t^b)(1-t^c) + ∏(1+t^a)(1-t^b)(1+t^c) - ∏(1-t^a)(1+t^b)(1+t^c)`.
pub fn three_point_residual(p: &TriplePattern) -> IntPolynomial {
    let prod = |sa: bool, sb: bool, sc: bool| {
        product_of_binomials(p.a(), sa)
            .mul(&product_of_binomials(p.b(), sb))
            .mul(&product_of_binomials(p.c(), sc))
    };
    let mut r = -&prod(false, false, false);
    r = &r + &prod(true, true, false);
    r = &r + &prod(true, false, true);
    r = &r - &prod(false, true, true);
    r
}

/// The signature of the pattern's data is identically 1.
pub fn signature_exact_3pt(p: &TriplePattern) -> bool {
    three_point_residual(p).is_zero()
}

/// `Σ_p ε(p)`, which equals the signature; rejects sums with `|Σ| > k - 2`.
pub fn sign_sum(data: &FixedPointData) -> Result<i64, ConstraintError> {
    let sum: i64 = data.points().iter().map(|p| p.sign.value()).sum();
    let k = data.len();
    if k == 1 && data.half_dim() > 0 {
        return Err(ConstraintError::SinglePoint);
    }
    if k >= 2 && sum.unsigned_abs() as usize > k - 2 {
        return Err(ConstraintError::SignBound { sum, points: k });
    }
    Ok(sum)
}

/// The smallest weight occurs equally often at positive and negative points.
pub fn min_weight_balance(data: &FixedPointData) -> bool {
    let Some(w) = data.min_weight() else {
        return true;
    };
    let mut balance: i64 = 0;
    for p in data.points() {
        balance += p.sign.value() * p.multiplicity(w) as i64;
    }
    balance == 0
}

/// Every weight value occurs an even number of times over all points.
pub fn weight_parity(data: &FixedPointData) -> bool {
    data.weight_multiplicities().values().all(|m| m % 2 == 0)
}

/// An odd number of fixed points needs dimension divisible by four.
pub fn dim_mod4_check(data: &FixedPointData) -> bool {
    data.len() % 2 == 0 || data.dim() % 4 == 0
}

/// `Σ_p ε(p) · value(p) / ∏_i w_{p,i}`.
pub fn localization_value(
    data: &FixedPointData,
    class_values: &[BigInt],
) -> Result<BigRational, ConstraintError> {
    if class_values.len() != data.len() {
        return Err(ConstraintError::ClassValues {
            expected: data.len(),
            found: class_values.len(),
        });
    }
    Ok(rational_sum(data.points().iter().zip(class_values).map(|(p, v)| {
        BigRational::new(v * p.sign.value(), p.weight_product())
    })))
}

/// Localized integral of the unit class.
pub fn integral_of_one(data: &FixedPointData) -> BigRational {
    localization_value(data, &vec![BigInt::one(); data.len()]).expect("one value per point")
}

/// Coefficient of `x^{2m}` in `∏_i (1 + w_i² x²)`: the m-th elementary
/// symmetric polynomial of the squared weights.
pub fn pontryagin_restriction(point: &FixedPoint, m: usize) -> Result<BigInt, ConstraintError> {
    let n = point.weights().len();
    if m > n {
        return Err(ConstraintError::Degree { m, n });
    }
    let squares: Vec<BigInt> = point
        .weights()
        .iter()
        .map(|&w| BigInt::from(w) * BigInt::from(w))
        .collect();
    Ok(elementary_symmetric(&squares, m))
}

/// Fixed points grouped by their m-th Pontryagin restriction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VandermondeReport {
    pub m: usize,
    /// Distinct restriction value → `Σ ε(p) / ∏ w` over the points sharing it.
    #[serde(serialize_with = "ser_groups")]
    pub groups: BTreeMap<BigInt, BigRational>,
    /// `Σ_i B_i^l A_i` for `l = 0..s`, i.e. the localized integrals of `P_m^l`.
    #[serde(serialize_with = "ser_rationals")]
    pub moments: Vec<BigRational>,
    pub all_zero: bool,
    /// `dim >= 4km`, where every group sum is forced to vanish.
    pub forced: bool,
}

impl VandermondeReport {
    pub fn violated(&self) -> bool {
        self.forced && !self.all_zero
    }

    pub fn distinct_values(&self) -> usize {
        self.groups.len()
    }
}

fn ser_groups<S: Serializer>(g: &BTreeMap<BigInt, BigRational>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(g.iter().map(|(k, v)| (k.to_string(), v.to_string())))
}

fn ser_rationals<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

pub fn vandermonde_vanishing(
    data: &FixedPointData,
    m: usize,
) -> Result<VandermondeReport, ConstraintError> {
    let mut groups: BTreeMap<BigInt, BigRational> = BTreeMap::new();
    let mut restrictions = Vec::with_capacity(data.len());
    for p in data.points() {
        let b = pontryagin_restriction(p, m)?;
        let contribution = BigRational::new(BigInt::from(p.sign.value()), p.weight_product());
        *groups.entry(b.clone()).or_insert_with(BigRational::zero) += &contribution;
        restrictions.push((b, contribution));
    }
    // Moments straight from the fixed points, not from the grouped sums.
    let moments: Vec<BigRational> = (0..groups.len())
        .map(|l| {
            rational_sum(restrictions.iter().map(|(b, c)| {
                BigRational::from_integer(num_traits::pow(b.clone(), l)) * c
            }))
        })
        .collect();
    let all_zero = groups.values().all(Zero::is_zero);
    debug_assert_eq!(all_zero, moments.iter().all(Zero::is_zero));
    Ok(VandermondeReport {
        m,
        forced: data.dim() >= 4 * data.len() * m,
        groups,
        moments,
        all_zero,
    })
}

/// Recovers the group sums from the moments by solving the Vandermonde system.
pub fn group_sums_from_moments(report: &VandermondeReport) -> Vec<BigRational> {
    let nodes: Vec<BigRational> = report
        .groups
        .keys()
        .map(|b| BigRational::from_integer(b.clone()))
        .collect();
    solve_vandermonde(&nodes, &report.moments).expect("restriction values are distinct")
}

/// Subset sums of `v`, indexed by bitmask.
fn subset_sums(v: &[u64]) -> Vec<u64> {
    let mut sums = vec![0u64; 1 << v.len()];
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + v[low];
    }
    sums
}

/// The multisets
/// `A = {Σ d·a + e·b + f·c : |d| odd, |e| even, |f| even}` and
/// `B = {Σ d·a + e·b + f·c : |d| even, |e| odd, |f| odd}` over 0/1 vectors,
/// each returned sorted.
pub fn multisets_ab(p: &TriplePattern) -> (Vec<u64>, Vec<u64>) {
    let (sa, sb, sc) = (subset_sums(p.a()), subset_sums(p.b()), subset_sums(p.c()));
    let size = 1usize << (3 * p.n() - 2);
    let (mut a_set, mut b_set) = (Vec::with_capacity(size), Vec::with_capacity(size));
    for (d, x) in sa.iter().enumerate() {
        let d_odd = d.count_ones() % 2 == 1;
        for (e, y) in sb.iter().enumerate() {
            let e_odd = e.count_ones() % 2 == 1;
            if e_odd == d_odd {
                continue;
            }
            for (f, z) in sc.iter().enumerate() {
                let f_odd = f.count_ones() % 2 == 1;
                if f_odd != e_odd {
                    continue;
                }
                if d_odd {
                    a_set.push(x + y + z);
                } else {
                    b_set.push(x + y + z);
                }
            }
        }
    }
    a_set.sort_unstable();
    b_set.sort_unstable();
    (a_set, b_set)
}

/// Smallest value whose multiplicity differs between two sorted multisets.
pub fn first_discrepancy(x: &[u64], y: &[u64]) -> Option<u64> {
    let (mut i, mut j) = (0, 0);
    loop {
        match (x.get(i), y.get(j)) {
            (None, None) => return None,
            (Some(&u), None) => return Some(u),
            (None, Some(&v)) => return Some(v),
            (Some(&u), Some(&v)) if u == v => {
                i += 1;
                j += 1;
            }
            (Some(&u), Some(&v)) => return Some(u.min(v)),
        }
    }
}

/// `a1 = b1 + c1` and, when `n >= 2`, `a2 ∈ {b1 + c2, b2 + c1}`.
pub fn low_label_rules(p: &TriplePattern) -> bool {
    let (a, b, c) = (p.a(), p.b(), p.c());
    if a[0] != b[0] + c[0] {
        return false;
    }
    p.n() < 2 || a[1] == b[0] + c[1] || a[1] == b[1] + c[0]
}

pub fn prop42_checks(p: &TriplePattern) -> bool {
    prop42_failure(p).is_none()
}

/// Why the low-label rules or `A = B` fail, if they do.
pub fn prop42_failure(p: &TriplePattern) -> Option<String> {
    let (a, b, c) = (p.a(), p.b(), p.c());
    if a[0] != b[0] + c[0] {
        return Some(format!("a1 = {} but b1 + c1 = {}", a[0], b[0] + c[0]));
    }
    if p.n() >= 2 && a[1] != b[0] + c[1] && a[1] != b[1] + c[0] {
        return Some(format!(
            "a2 = {} matches neither b1 + c2 = {} nor b2 + c1 = {}",
            a[1],
            b[0] + c[1],
            b[1] + c[0]
        ));
    }
    let (am, bm) = multisets_ab(p);
    first_discrepancy(&am, &bm).map(|x| {
        let count = |v: &[u64]| v.iter().filter(|&&y| y == x).count();
        format!("A != B: {x} occurs {} times in A, {} in B", count(&am), count(&bm))
    })
}

/// `c1 c2 + b1 b2 - a1 a2 = 0`, the vanishing of the localized unit class.
///
/// Requires `n = 2` and the low-label rules. When `a2 = b2 + c1` only, b and c
/// are swapped first so that `a2 = b1 + c2`; in that normal form the relation
/// reads `b2 = b1 + c1 + c2`.
pub fn dim8_relation(p: &TriplePattern) -> Result<bool, ConstraintError> {
    require_len(p, 2)?;
    if !low_label_rules(p) {
        return Err(ConstraintError::StageOrder(
            "dim-8 relation needs a1 = b1 + c1 and a2 in {b1 + c2, b2 + c1}".into(),
        ));
    }
    let (a, b, c) = (p.a(), p.b(), p.c());
    let lhs = (c[0] * c[1] + b[0] * b[1]) as i128;
    Ok(lhs == (a[0] * a[1]) as i128)
}

/// Normal-form reading: swap so `a2 = b1 + c2`, then test `b2 = b1 + c1 + c2`.
/// Passes if either admissible normalization satisfies it.
pub fn dim8_normal_form_relation(p: &TriplePattern) -> Result<bool, ConstraintError> {
    require_len(p, 2)?;
    if !low_label_rules(p) {
        return Err(ConstraintError::StageOrder("low-label rules fail".into()));
    }
    let holds = |q: &TriplePattern| q.a()[1] == q.b()[0] + q.c()[1] && q.b()[1] == q.b()[0] + q.c()[0] + q.c()[1];
    Ok(holds(p) || holds(&p.swapped_bc()))
}

fn square_sum(v: &[u64]) -> u128 {
    v.iter().map(|&x| (x as u128) * (x as u128)).sum()
}

/// `Σ a_i² = Σ b_i² = Σ c_i²`: the three first Pontryagin restrictions agree.
pub fn equal_square_sums(p: &TriplePattern) -> bool {
    let sa = square_sum(p.a());
    sa == square_sum(p.b()) && sa == square_sum(p.c())
}

/// `a3` is not strictly larger than every other label.
pub fn biggest_weight_rule(p: &TriplePattern) -> Result<bool, ConstraintError> {
    require_len(p, 3)?;
    Ok(p.b()[2].max(p.c()[2]) >= p.a()[2])
}

fn require_b3_max(p: &TriplePattern) -> Result<u64, ConstraintError> {
    let b3 = p.b()[2];
    if p.max_entry() != b3 {
        return Err(ConstraintError::StageOrder(format!(
            "b3 = {b3} is not the biggest label (max is {})",
            p.max_entry()
        )));
    }
    Ok(b3)
}

/// No `a_i` or `c_i` equals `b3` when `b3` is the biggest label.
pub fn lemma64_check(p: &TriplePattern) -> Result<bool, ConstraintError> {
    require_len(p, 3)?;
    let b3 = require_b3_max(p)?;
    Ok(!p.a().iter().chain(p.c()).any(|&x| x == b3))
}

/// Permutations `(i1, i2, i3)` and `(j1, j2, j3)` of the indices, zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Witness {
    pub i: [usize; 3],
    pub j: [usize; 3],
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "i=({},{},{}) j=({},{},{})",
            self.i[0] + 1,
            self.i[1] + 1,
            self.i[2] + 1,
            self.j[0] + 1,
            self.j[1] + 1,
            self.j[2] + 1
        )
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// All permutation pairs with `a_{i1} + c_{j1} = b3`, `a_{i2} + c_{j2} = b3`,
/// `a_{i3} = c_{j3}` and `c1 ≠ c_{j3}`. Requires `b3` to be the biggest label.
pub fn lemma66_filter(p: &TriplePattern) -> Result<Vec<Witness>, ConstraintError> {
    require_len(p, 3)?;
    let b3 = require_b3_max(p)?;
    let (a, c) = (p.a(), p.c());
    let mut out = Vec::new();
    for i in PERMUTATIONS {
        for j in PERMUTATIONS {
            if a[i[0]] + c[j[0]] == b3
                && a[i[1]] + c[j[1]] == b3
                && a[i[2]] == c[j[2]]
                && c[0] != c[j[2]]
            {
                out.push(Witness { i, j });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinalOutcome {
    /// Every witness is contradicted.
    pub contradicted: bool,
    pub uncontradicted: Option<Witness>,
}

/// Whether one witness is contradicted. From `Σ a² = Σ c²` with the c labels
/// `{b3 - a_{i1}, b3 - a_{i2}, a_{i3}}` one gets `a_{i1} + a_{i2} = b3`, hence
/// `c_{j1} = a_{i2}` and `c_{j2} = a_{i1}`; since `c1 ≠ c_{j3}`, `c1` is one of
/// those, which clashes with `c1 < a1` (itself a consequence of `a1 = b1 + c1`).
fn witness_contradicted(p: &TriplePattern, w: &Witness) -> bool {
    let (a, c) = (p.a(), p.c());
    let b3 = p.b()[2];
    if square_sum(a) != square_sum(c) {
        return true;
    }
    // Σa² - Σc² = 2·b3·(a_{i1} + a_{i2} - b3), so equal sums force this.
    let pair = a[w.i[0]] + a[w.i[1]];
    if pair != b3 {
        return true;
    }
    let forced = [a[w.i[1]], a[w.i[0]]];
    debug_assert_eq!(c[w.j[0]], forced[0]);
    debug_assert_eq!(c[w.j[1]], forced[1]);
    let c1 = c[0];
    if c1 >= a[0] {
        return true;
    }
    forced.contains(&c1)
}

pub fn final_contradiction(
    p: &TriplePattern,
    witnesses: &[Witness],
) -> Result<FinalOutcome, ConstraintError> {
    require_len(p, 3)?;
    if witnesses.is_empty() {
        return Err(ConstraintError::StageOrder(
            "final step needs at least one normal-bundle witness".into(),
        ));
    }
    let uncontradicted = witnesses
        .iter()
        .find(|w| !witness_contradicted(p, w))
        .copied();
    Ok(FinalOutcome {
        contradicted: uncontradicted.is_none(),
        uncontradicted,
    })
}

/// Stages of the dimension-12 chain, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Prop42,
    PontryaginEqual,
    BiggestWeight,
    Normalize,
    NormalBundle,
    Final,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Prop42,
        Stage::PontryaginEqual,
        Stage::BiggestWeight,
        Stage::Normalize,
        Stage::NormalBundle,
        Stage::Final,
    ];

    /// Stages that can refute a candidate.
    pub const KILLING: [Stage; 5] = [
        Stage::Prop42,
        Stage::PontryaginEqual,
        Stage::BiggestWeight,
        Stage::NormalBundle,
        Stage::Final,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Stage::Prop42 => "prop42",
            Stage::PontryaginEqual => "pontryagin-equal",
            Stage::BiggestWeight => "biggest-weight",
            Stage::Normalize => "normalize",
            Stage::NormalBundle => "normal-bundle",
            Stage::Final => "final",
        }
    }

    pub fn from_key(key: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|s| s.key() == key)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl Serialize for Stage {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.key())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    /// Survived every stage that was run. A complete run carries the
    /// uncontradicted witness.
    Admissible {
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Witness>,
    },
    RefutedAt { stage: Stage },
}

impl Verdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Verdict::Admissible { .. })
    }

    pub fn refuted_stage(&self) -> Option<Stage> {
        match self {
            Verdict::RefutedAt { stage } => Some(*stage),
            Verdict::Admissible { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub candidate: TriplePattern,
    pub stages: Vec<StageRecord>,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// When `b3 = c3` both orientations qualify for the normalization step;
    /// this is the verdict under the other one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tie_alternate: Option<Verdict>,
}

impl Certificate {
    /// Whether the orientation tie, if any, was resolved consistently.
    pub fn tie_consistent(&self) -> bool {
        self.tie_alternate
            .as_ref()
            .map_or(true, |alt| alt.is_admissible() == self.verdict.is_admissible())
    }
}

struct ChainRun {
    stages: Vec<StageRecord>,
    verdict: Option<Verdict>,
}

impl ChainRun {
    fn record(&mut self, stage: Stage, passed: bool, witness: Option<String>) -> bool {
        self.stages.push(StageRecord {
            stage,
            passed,
            witness,
        });
        if !passed {
            self.verdict = Some(Verdict::RefutedAt { stage });
        }
        passed
    }
}

/// Full dimension-12 chain.
pub fn dim12_chain(p: &TriplePattern) -> Result<Certificate, ConstraintError> {
    dim12_chain_until(p, None)
}

/// Runs the chain, stopping after `stop` when given. A candidate that
/// survives a truncated run is reported admissible without a witness.
pub fn dim12_chain_until(
    p: &TriplePattern,
    stop: Option<Stage>,
) -> Result<Certificate, ConstraintError> {
    require_len(p, 3)?;
    let mut run = ChainRun {
        stages: Vec::with_capacity(Stage::ALL.len()),
        verdict: None,
    };
    let done = |stage: Stage| stop == Some(stage);
    let finish = |run: ChainRun, tie_alternate: Option<Verdict>| Certificate {
        candidate: p.clone(),
        stages: run.stages,
        verdict: run.verdict.unwrap_or(Verdict::Admissible { witness: None }),
        tie_alternate,
    };

    let failure = prop42_failure(p);
    if !run.record(Stage::Prop42, failure.is_none(), failure) || done(Stage::Prop42) {
        return Ok(finish(run, None));
    }

    let sums = [square_sum(p.a()), square_sum(p.b()), square_sum(p.c())];
    let equal = sums[0] == sums[1] && sums[1] == sums[2];
    let note = format!("sums of squares a={}, b={}, c={}", sums[0], sums[1], sums[2]);
    if !run.record(Stage::PontryaginEqual, equal, Some(note)) || done(Stage::PontryaginEqual) {
        return Ok(finish(run, None));
    }

    let ok = biggest_weight_rule(p)?;
    let note = (!ok).then(|| format!("a3 = {} is the strict maximum", p.a()[2]));
    if !run.record(Stage::BiggestWeight, ok, note) || done(Stage::BiggestWeight) {
        return Ok(finish(run, None));
    }

    let (b3, c3) = (p.b()[2], p.c()[2]);
    let (primary, alternate, note) = match c3.cmp(&b3) {
        std::cmp::Ordering::Greater => (p.swapped_bc(), None, "swapped b and c"),
        std::cmp::Ordering::Less => (p.clone(), None, "b3 already biggest"),
        std::cmp::Ordering::Equal => {
            // Tie: the c-array is the lexicographically smaller one.
            let (keep, swap) = (p.clone(), p.swapped_bc());
            if keep.c() <= keep.b() {
                (keep, Some(swap), "b3 = c3 tie")
            } else {
                (swap, Some(keep), "b3 = c3 tie")
            }
        }
    };
    run.record(
        Stage::Normalize,
        true,
        Some(format!("{note}; normalized {primary}")),
    );
    if done(Stage::Normalize) {
        return Ok(finish(run, None));
    }

    let tail = |q: &TriplePattern, run: &mut ChainRun| -> Result<(), ConstraintError> {
        let distinct = lemma64_check(q)?;
        let witnesses = lemma66_filter(q)?;
        let passed = distinct && !witnesses.is_empty();
        let note = if !distinct {
            format!("some a_i or c_i equals b3 = {}", q.b()[2])
        } else {
            format!("{} witness pair(s)", witnesses.len())
        };
        if !run.record(Stage::NormalBundle, passed, Some(note)) || done(Stage::NormalBundle) {
            return Ok(());
        }
        let outcome = final_contradiction(q, &witnesses)?;
        let note = match outcome.uncontradicted {
            Some(w) => format!("uncontradicted witness {w}"),
            None => format!("all {} witness pair(s) force c1 = a_i > c1", witnesses.len()),
        };
        if run.record(Stage::Final, !outcome.contradicted, Some(note)) {
            run.verdict = Some(Verdict::Admissible {
                witness: outcome.uncontradicted,
            });
        }
        Ok(())
    };

    tail(&primary, &mut run)?;
    let tie_alternate = match alternate {
        Some(q) => {
            let mut alt = ChainRun {
                stages: Vec::new(),
                verdict: None,
            };
            tail(&q, &mut alt)?;
            Some(alt.verdict.unwrap_or(Verdict::Admissible { witness: None }))
        }
        None => None,
    };
    Ok(finish(run, tie_alternate))
}
