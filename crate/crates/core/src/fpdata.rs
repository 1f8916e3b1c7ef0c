//! Fixed-point data of circle actions with isolated fixed points, the
//! three-point edge-label patterns, and describing multigraphs.
//!
//! A fixed point carries a sign and a multiset of positive integer weights;
//! weights are kept sorted ascending so that multiset equality is plain
//! vector equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Orientation sign of a fixed point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl TryFrom<i64> for Sign {
    type Error = String;

    fn try_from(v: i64) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i64 {
    fn from(s: Sign) -> i64 {
        s.value()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("not describable: {0}")]
    NotDescribable(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedPoint {
    pub sign: Sign,
    weights: Vec<u64>,
}

impl FixedPoint {
    /// Weights are a multiset; they are stored sorted.
    pub fn new(sign: Sign, weights: impl Into<Vec<u64>>) -> Self {
        let mut weights = weights.into();
        weights.sort_unstable();
        Self { sign, weights }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Number of times `w` occurs among the weights.
    pub fn multiplicity(&self, w: u64) -> usize {
        self.weights.iter().filter(|&&x| x == w).count()
    }

    pub fn weight_product(&self) -> num_bigint::BigInt {
        self.weights.iter().map(|&w| num_bigint::BigInt::from(w)).product()
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}", self.sign.symbol())?;
        for w in &self.weights {
            write!(f, ", {w}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoPoints,
    ZeroDimension,
    NonPositiveWeight { point: usize },
    SizeMismatch { point: usize, expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPoints => write!(f, "no fixed points"),
            Violation::ZeroDimension => write!(f, "half dimension must be positive"),
            Violation::NonPositiveWeight { point } => {
                write!(f, "non-positive weight at point {}", point + 1)
            }
            Violation::SizeMismatch {
                point,
                expected,
                found,
            } => write!(
                f,
                "size mismatch at point {}: expected {expected} weights, found {found}",
                point + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct ValidationReport(pub Vec<Violation>);

/// Signs and weights of all fixed points of an action on a manifold of
/// dimension `2 * half_dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedPointData {
    half_dim: usize,
    points: Vec<FixedPoint>,
}

impl FixedPointData {
    /// Unchecked; run [`FixedPointData::validate`] before the constraint checks.
    pub fn new(half_dim: usize, points: Vec<FixedPoint>) -> Self {
        Self { half_dim, points }
    }

    pub fn validate(&self) -> Result<(), ValidationReport> {
        let mut violations = Vec::new();
        if self.points.is_empty() {
            violations.push(Violation::NoPoints);
        }
        if self.half_dim == 0 {
            violations.push(Violation::ZeroDimension);
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.weights.contains(&0) {
                violations.push(Violation::NonPositiveWeight { point: i });
            }
            if p.weights.len() != self.half_dim {
                violations.push(Violation::SizeMismatch {
                    point: i,
                    expected: self.half_dim,
                    found: p.weights.len(),
                });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ValidationReport(violations))
        }
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn dim(&self) -> usize {
        2 * self.half_dim
    }

    pub fn points(&self) -> &[FixedPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.points.iter().flat_map(|p| p.weights.iter().copied()).max()
    }

    pub fn min_weight(&self) -> Option<u64> {
        self.points.iter().flat_map(|p| p.weights.iter().copied()).min()
    }

    /// Total multiplicity of every weight value over all points.
    pub fn weight_multiplicities(&self) -> BTreeMap<u64, usize> {
        let mut counts = BTreeMap::new();
        for w in self.points.iter().flat_map(|p| p.weights.iter()) {
            *counts.entry(*w).or_insert(0) += 1;
        }
        counts
    }

    /// Reverses the orientation: every sign flips.
    pub fn flipped(&self) -> Self {
        Self {
            half_dim: self.half_dim,
            points: self
                .points
                .iter()
                .map(|p| FixedPoint::new(p.sign.flipped(), p.weights.clone()))
                .collect(),
        }
    }

    /// Multiplies every weight by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        Self {
            half_dim: self.half_dim,
            points: self
                .points
                .iter()
                .map(|p| FixedPoint::new(p.sign, p.weights.iter().map(|w| w * factor).collect::<Vec<_>>()))
                .collect(),
        }
    }

    fn sorted_points(&self) -> Vec<FixedPoint> {
        let mut pts = self.points.clone();
        pts.sort();
        pts
    }

    /// Equal as multisets of points, ignoring point order.
    pub fn same_up_to_reorder(&self, other: &Self) -> bool {
        self.half_dim == other.half_dim && self.sorted_points() == other.sorted_points()
    }

    /// Equal up to point order and possibly a global sign flip.
    pub fn same_up_to_orientation(&self, other: &Self) -> bool {
        self.same_up_to_reorder(other) || self.same_up_to_reorder(&other.flipped())
    }
}

impl fmt::Display for FixedPointData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Edge labels `(a, b, c)` of the three-vertex multigraph: `a` joins p1-p2,
/// `b` joins p1-p3 and `c` joins p2-p3. Signs are always `(+, +, -)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriplePattern {
    a: Vec<u64>,
    b: Vec<u64>,
    c: Vec<u64>,
}

impl TriplePattern {
    /// Sorts each array; rejects empty arrays, unequal lengths and zero entries.
    pub fn new(
        a: impl Into<Vec<u64>>,
        b: impl Into<Vec<u64>>,
        c: impl Into<Vec<u64>>,
    ) -> Result<Self, FpError> {
        let (mut a, mut b, mut c) = (a.into(), b.into(), c.into());
        if a.is_empty() || a.len() != b.len() || a.len() != c.len() {
            return Err(FpError::InvalidPattern(format!(
                "arrays must share a positive length, got {}, {}, {}",
                a.len(),
                b.len(),
                c.len()
            )));
        }
        if a.iter().chain(&b).chain(&c).any(|&x| x == 0) {
            return Err(FpError::InvalidPattern("entries must be positive".into()));
        }
        a.sort_unstable();
        b.sort_unstable();
        c.sort_unstable();
        Ok(Self { a, b, c })
    }

    pub(crate) fn from_sorted(a: Vec<u64>, b: Vec<u64>, c: Vec<u64>) -> Self {
        debug_assert!(a.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(b.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(c.windows(2).all(|w| w[0] <= w[1]));
        Self { a, b, c }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    pub fn c(&self) -> &[u64] {
        &self.c
    }

    pub fn entries(&self) -> impl Iterator<Item = u64> + '_ {
        self.a.iter().chain(&self.b).chain(&self.c).copied()
    }

    pub fn max_entry(&self) -> u64 {
        self.entries().max().unwrap_or(0)
    }

    /// Exchanges the roles of p1 and p2.
    pub fn swapped_bc(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
        }
    }

    pub fn scaled(&self, factor: u64) -> Self {
        let s = |v: &[u64]| v.iter().map(|x| x * factor).collect();
        Self {
            a: s(&self.a),
            b: s(&self.b),
            c: s(&self.c),
        }
    }

    pub fn gcd(&self) -> u64 {
        self.entries().fold(0, num_integer::gcd)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "a=({}) b=({}) c=({})", join(&self.a), join(&self.b), join(&self.c))
    }
}

fn union(x: &[u64], y: &[u64]) -> Vec<u64> {
    let mut v: Vec<u64> = x.iter().chain(y).copied().collect();
    v.sort_unstable();
    v
}

/// p1 = a ⊎ b (+), p2 = a ⊎ c (+), p3 = b ⊎ c (−); each point carries `2n` weights.
pub fn data_from_pattern(p: &TriplePattern) -> FixedPointData {
    FixedPointData::new(
        2 * p.n(),
        vec![
            FixedPoint::new(Sign::Plus, union(&p.a, &p.b)),
            FixedPoint::new(Sign::Plus, union(&p.a, &p.c)),
            FixedPoint::new(Sign::Minus, union(&p.b, &p.c)),
        ],
    )
}

/// A decomposition together with the indices of the points playing p1, p2, p3.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Decomposition {
    pub pattern: TriplePattern,
    pub roles: [usize; 3],
}

/// Multiset difference of sorted slices; `None` unless `sub ⊆ whole`.
fn multiset_minus(whole: &[u64], sub: &[u64]) -> Option<Vec<u64>> {
    let mut out = Vec::with_capacity(whole.len().saturating_sub(sub.len()));
    let mut j = 0;
    for &x in whole {
        if j < sub.len() && sub[j] == x {
            j += 1;
        } else {
            out.push(x);
        }
    }
    (j == sub.len()).then_some(out)
}

fn multiset_intersection(x: &[u64], y: &[u64]) -> Vec<u64> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(x[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Distinct sorted sub-multisets of `pool` (sorted) of size `k`.
fn sub_multisets(pool: &[u64], k: usize) -> Vec<Vec<u64>> {
    fn rec(pool: &[u64], k: usize, start: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let mut i = start;
        while i < pool.len() {
            if pool.len() - i < k - cur.len() {
                break;
            }
            cur.push(pool[i]);
            rec(pool, k, i + 1, cur, out);
            cur.pop();
            // skip equal values so each sub-multiset appears once
            let v = pool[i];
            while i < pool.len() && pool[i] == v {
                i += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(pool, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Every way of reading three-point data as a pattern, with role assignments.
pub fn decompositions(data: &FixedPointData) -> Result<Vec<Decomposition>, FpError> {
    if data.len() != 3 {
        return Err(FpError::UnsupportedShape(format!(
            "edge-label patterns need exactly 3 fixed points, got {}",
            data.len()
        )));
    }
    let pts = data.points();
    let mut out = BTreeSet::new();
    for lone in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&i| i != lone).collect();
        if pts[others[0]].sign != pts[others[1]].sign || pts[lone].sign == pts[others[0]].sign {
            continue;
        }
        for (p1, p2) in [(others[0], others[1]), (others[1], others[0])] {
            let (w1, w2, w3) = (pts[p1].weights(), pts[p2].weights(), pts[lone].weights());
            if w1.len() != w2.len() || w1.len() != w3.len() || w1.len() % 2 != 0 || w1.is_empty() {
                continue;
            }
            let n = w1.len() / 2;
            for a in sub_multisets(&multiset_intersection(w1, w2), n) {
                let (Some(b), Some(c)) = (multiset_minus(w1, &a), multiset_minus(w2, &a)) else {
                    continue;
                };
                if union(&b, &c) == w3 {
                    out.insert(Decomposition {
                        pattern: TriplePattern::from_sorted(a, b, c),
                        roles: [p1, p2, lone],
                    });
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// All patterns `(a, b, c)` reproducing the data; empty when none exists.
pub fn pattern_from_data(data: &FixedPointData) -> Result<BTreeSet<TriplePattern>, FpError> {
    Ok(decompositions(data)?.into_iter().map(|d| d.pattern).collect())
}

fn positive(name: &str, v: u64) -> Result<u64, FpError> {
    if v == 0 {
        return Err(FpError::InvalidParameter(format!("{name} must be positive")));
    }
    Ok(v)
}

/// The 8-dimensional three-point family
/// `{+, a+b, a+c, a, a+b+c}, {+, a+b, a+c, b, c}, {-, a, a+b+c, b, c}`.
pub fn hp2_family(a: u64, b: u64, c: u64) -> Result<FixedPointData, FpError> {
    let (a, b, c) = (positive("a", a)?, positive("b", b)?, positive("c", c)?);
    Ok(FixedPointData::new(
        4,
        vec![
            FixedPoint::new(Sign::Plus, [a + b, a + c, a, a + b + c]),
            FixedPoint::new(Sign::Plus, [a + b, a + c, b, c]),
            FixedPoint::new(Sign::Minus, [a, a + b + c, b, c]),
        ],
    ))
}

/// The 4-dimensional family `{+, b+c, b}, {+, b+c, c}, {-, b, c}`.
pub fn cp2_family(b: u64, c: u64) -> Result<FixedPointData, FpError> {
    let (b, c) = (positive("b", b)?, positive("c", c)?);
    Ok(FixedPointData::new(
        2,
        vec![
            FixedPoint::new(Sign::Plus, [b + c, b]),
            FixedPoint::new(Sign::Plus, [b + c, c]),
            FixedPoint::new(Sign::Minus, [b, c]),
        ],
    ))
}

/// Rotation of an even sphere: two points, equal weights, opposite signs.
pub fn sphere_rotation(weights: &[u64]) -> Result<FixedPointData, FpError> {
    if weights.is_empty() {
        return Err(FpError::InvalidParameter("at least one weight is required".into()));
    }
    for &w in weights {
        positive("weight", w)?;
    }
    Ok(FixedPointData::new(
        weights.len(),
        vec![
            FixedPoint::new(Sign::Plus, weights.to_vec()),
            FixedPoint::new(Sign::Minus, weights.to_vec()),
        ],
    ))
}

/// An integer or half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub fn from_int(v: i64) -> Self {
        Self { twice: 2 * v }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInteger {
    type Err = FpError;

    /// Accepts `3`, `5/2` and `2.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FpError::InvalidParameter(format!("`{s}` is not an integer or half-integer"));
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "1" => Ok(Self::from_int(num)),
                "2" => Ok(Self::from_twice(num)),
                _ => Err(bad()),
            };
        }
        if let Some((int, frac)) = s.split_once('.') {
            let whole: i64 = if int.is_empty() || int == "-" {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let negative = int.starts_with('-');
            let half = match frac.trim_end_matches('0') {
                "" => 0,
                "5" => 1,
                _ => return Err(bad()),
            };
            let twice = 2 * whole + if negative { -half } else { half };
            return Ok(Self::from_twice(twice));
        }
        s.parse::<i64>().map(Self::from_int).map_err(|_| bad())
    }
}

/// Fixed-point data of the circle action `[g^d x0 : g^e x1 : g^f x2]` on the
/// quaternionic projective plane.
///
/// Requires `0 <= d < e < f`, all integers or all half-integers. `d = 0` is
/// accepted; it still has three isolated fixed points with positive weights.
pub fn hp2_from_projective(
    d: HalfInteger,
    e: HalfInteger,
    f: HalfInteger,
) -> Result<FixedPointData, FpError> {
    if d.is_integer() != e.is_integer() || e.is_integer() != f.is_integer() {
        return Err(FpError::InvalidParameter(
            "d, e, f must be all integers or all half-integers".into(),
        ));
    }
    if !(d.twice >= 0 && d < e && e < f) {
        return Err(FpError::InvalidParameter(format!(
            "need 0 <= d < e < f, got d={d}, e={e}, f={f}"
        )));
    }
    // Sums and differences of same-type half-integers are integers.
    let plus = |x: HalfInteger, y: HalfInteger| ((x.twice + y.twice) / 2).unsigned_abs();
    let minus = |x: HalfInteger, y: HalfInteger| ((x.twice - y.twice) / 2).unsigned_abs();
    Ok(FixedPointData::new(
        4,
        vec![
            FixedPoint::new(Sign::Plus, [plus(e, d), minus(e, d), plus(f, d), minus(f, d)]),
            FixedPoint::new(Sign::Minus, [plus(d, e), minus(d, e), plus(f, e), minus(f, e)]),
            FixedPoint::new(Sign::Plus, [plus(d, f), minus(d, f), plus(e, f), minus(e, f)]),
        ],
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: u64,
}

/// Signed, labeled multigraph; vertex `i` is fixed point `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Multigraph {
    pub signs: Vec<Sign>,
    pub edges: Vec<Edge>,
}

impl Multigraph {
    pub fn has_self_loops(&self) -> bool {
        self.edges.iter().any(|e| e.u == e.v)
    }

    /// Sorted labels of the edges at `vertex`.
    pub fn incident_labels(&self, vertex: usize) -> Vec<u64> {
        let mut labels: Vec<u64> = self
            .edges
            .iter()
            .filter(|e| e.u == vertex || e.v == vertex)
            .map(|e| e.label)
            .collect();
        labels.sort_unstable();
        labels
    }

    /// Signs and incident label multisets agree with the data.
    pub fn describes(&self, data: &FixedPointData) -> bool {
        self.signs.len() == data.len()
            && data.points().iter().enumerate().all(|(i, p)| {
                self.signs[i] == p.sign && self.incident_labels(i) == p.weights()
            })
    }

    /// Labels of the parallel edges between `u` and `v`, sorted.
    pub fn labels_between(&self, u: usize, v: usize) -> Vec<u64> {
        let (u, v) = (u.min(v), u.max(v));
        self.edges
            .iter()
            .filter(|e| e.u == u && e.v == v)
            .map(|e| e.label)
            .collect()
    }
}

/// Describing multigraph for two or three fixed points.
///
/// With two points the weights must agree and the signs differ; the graph is
/// `n` parallel edges. With three points the lexicographically least
/// decomposition fixes the labels between each pair.
pub fn build_multigraph(data: &FixedPointData) -> Result<Multigraph, FpError> {
    let signs: Vec<Sign> = data.points().iter().map(|p| p.sign).collect();
    let mut edges = Vec::new();
    match data.len() {
        2 => {
            let (p, q) = (&data.points()[0], &data.points()[1]);
            if p.sign == q.sign || p.weights() != q.weights() {
                return Err(FpError::NotDescribable(
                    "two fixed points need opposite signs and equal weights".into(),
                ));
            }
            edges.extend(p.weights().iter().map(|&label| Edge { u: 0, v: 1, label }));
        }
        3 => {
            let best = decompositions(data)?.into_iter().next().ok_or_else(|| {
                FpError::NotDescribable("no edge-label decomposition exists".into())
            })?;
            let [p1, p2, p3] = best.roles;
            let mut push = |x: usize, y: usize, labels: &[u64]| {
                for &label in labels {
                    edges.push(Edge {
                        u: x.min(y),
                        v: x.max(y),
                        label,
                    });
                }
            };
            push(p1, p2, best.pattern.a());
            push(p1, p3, best.pattern.b());
            push(p2, p3, best.pattern.c());
        }
        k => {
            return Err(FpError::UnsupportedShape(format!(
                "multigraphs are built for 2 or 3 fixed points, got {k}"
            )))
        }
    }
    edges.sort_unstable();
    Ok(Multigraph { signs, edges })
}
