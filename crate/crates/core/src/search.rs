//! Exhaustive search over canonical three-point patterns with a weight bound.
//!
//! Candidates are generated already satisfying `a1 = b1 + c1` and (for
//! `n >= 2`) `a2 ∈ {b1 + c2, b2 + c1}`, grouped by the prefix of `a`. Groups
//! come out in lexicographic order and are evaluated independently, so a
//! multi-worker run merges into exactly the single-worker report.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Duration;

use indexmap::IndexMap;
use num_traits::Zero;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::constraints::{
    dim12_chain_until, dim8_relation, integral_of_one, prop42_checks, signature_exact_3pt,
    Certificate, ConstraintError, Stage,
};
use crate::fpdata::{data_from_pattern, TriplePattern};

/// A pattern with sorted arrays and `b <= c` lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(TriplePattern);

impl CanonicalForm {
    pub fn pattern(&self) -> &TriplePattern {
        &self.0
    }

    pub fn into_pattern(self) -> TriplePattern {
        self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Breaks the p1/p2 symmetry by ordering `b <= c`.
pub fn canonicalize(p: &TriplePattern) -> CanonicalForm {
    if p.c() < p.b() {
        CanonicalForm(p.swapped_bc())
    } else {
        CanonicalForm(p.clone())
    }
}

/// Leading entries of `a` shared by one generation group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Prefix {
    pub a1: u64,
    pub a2: Option<u64>,
}

/// Group prefixes in lexicographic order.
pub fn prefixes(n: usize, max_weight: u64) -> Vec<Prefix> {
    let mut out = Vec::new();
    for a1 in 2..=max_weight {
        if n == 1 {
            out.push(Prefix { a1, a2: None });
        } else {
            out.extend((a1..=max_weight).map(|a2| Prefix { a1, a2: Some(a2) }));
        }
    }
    out
}

/// Sorted arrays of length `len` with entries in `lo..=hi`, appended to `head`.
fn extend_sorted(head: &[u64], len: usize, hi: u64, out: &mut Vec<Vec<u64>>) {
    if head.len() == len {
        out.push(head.to_vec());
        return;
    }
    let lo = head.last().copied().unwrap_or(1);
    let mut cur = head.to_vec();
    for x in lo..=hi {
        cur.push(x);
        extend_sorted(&cur, len, hi, out);
        cur.pop();
    }
}

fn tails(head: &[u64], len: usize, hi: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    if head.windows(2).all(|w| w[0] <= w[1]) && head.iter().all(|&x| x >= 1 && x <= hi) {
        extend_sorted(head, len, hi, &mut out);
    }
    out
}

/// All canonical patterns of one prefix group, sorted.
pub fn generate_group(n: usize, max_weight: u64, prefix: Prefix) -> Vec<CanonicalForm> {
    let w = max_weight;
    let mut group = BTreeSet::new();
    let mut push = |a: Vec<u64>, b: Vec<u64>, c: Vec<u64>| {
        if b <= c {
            group.insert(CanonicalForm(TriplePattern::from_sorted(a, b, c)));
        }
    };
    for b1 in 1..prefix.a1 {
        let c1 = prefix.a1 - b1;
        match (n, prefix.a2) {
            (1, _) => push(vec![prefix.a1], vec![b1], vec![c1]),
            (_, Some(a2)) => {
                // a2 = b1 + c2 with b2 free, or a2 = b2 + c1 with c2 free.
                let mut pairs: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
                if a2 > b1 {
                    let c_head = [c1, a2 - b1];
                    for b in tails(&[b1], n, w) {
                        for c in tails(&c_head, n, w) {
                            pairs.push((b.clone(), c));
                        }
                    }
                }
                if a2 > c1 {
                    let b_head = [b1, a2 - c1];
                    for b in tails(&b_head, n, w) {
                        for c in tails(&[c1], n, w) {
                            pairs.push((b.clone(), c));
                        }
                    }
                }
                for (b, c) in pairs {
                    for a in tails(&[prefix.a1, a2], n, w) {
                        push(a, b.clone(), c.clone());
                    }
                }
            }
            (_, None) => unreachable!("prefixes for n >= 2 carry a2"),
        }
    }
    group.into_iter().collect()
}

/// Every canonical pattern of length `n` with entries in `1..=max_weight` that
/// meets the low-label rules, once each, in lexicographic order.
pub fn enumerate_patterns(
    n: usize,
    max_weight: u64,
    primitive_only: bool,
) -> impl Iterator<Item = CanonicalForm> {
    assert!((1..=3).contains(&n), "pattern length must be 1, 2 or 3");
    prefixes(n, max_weight)
        .into_iter()
        .flat_map(move |p| generate_group(n, max_weight, p))
        .filter(move |p| !primitive_only || p.pattern().gcd() == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchKind {
    Dim4,
    Dim8,
    Dim12,
}

impl SearchKind {
    pub fn from_dim(dim: usize) -> Option<Self> {
        match dim {
            4 => Some(SearchKind::Dim4),
            8 => Some(SearchKind::Dim8),
            12 => Some(SearchKind::Dim12),
            _ => None,
        }
    }

    pub fn dim(self) -> usize {
        4 * self.n()
    }

    pub fn n(self) -> usize {
        match self {
            SearchKind::Dim4 => 1,
            SearchKind::Dim8 => 2,
            SearchKind::Dim12 => 3,
        }
    }

    /// Kill-count keys, in pipeline order.
    pub fn stage_keys(self) -> Vec<&'static str> {
        match self {
            SearchKind::Dim4 => vec!["prop42"],
            SearchKind::Dim8 => vec!["prop42", "dim8-relation"],
            SearchKind::Dim12 => Stage::KILLING.iter().map(|s| s.key()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub workers: usize,
    pub primitive_only: bool,
    /// Dimension 12 only: halt the chain after this stage.
    pub stop_stage: Option<Stage>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            primitive_only: false,
            stop_stage: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Survivor {
    #[serde(flatten)]
    pub pattern: TriplePattern,
    #[serde(skip_serializing_if = "IndexMap::is_empty")]
    pub checks: IndexMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub kind: SearchKind,
    pub bound: u64,
    pub half_pattern_n: usize,
    pub primitive_only: bool,
    pub stop_stage: Option<Stage>,
    pub total_generated: u64,
    pub kills_per_stage: IndexMap<String, u64>,
    pub survivors: Vec<Survivor>,
    pub wall_time: Duration,
}

impl PartialEq for SearchReport {
    /// Everything except the wall time.
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.bound == other.bound
            && self.half_pattern_n == other.half_pattern_n
            && self.primitive_only == other.primitive_only
            && self.stop_stage == other.stop_stage
            && self.total_generated == other.total_generated
            && self.kills_per_stage == other.kills_per_stage
            && self.survivors == other.survivors
    }
}

impl SearchReport {
    fn empty(kind: SearchKind, bound: u64, opts: &SearchOptions) -> Self {
        Self {
            kind,
            bound,
            half_pattern_n: kind.n(),
            primitive_only: opts.primitive_only,
            stop_stage: opts.stop_stage,
            total_generated: 0,
            kills_per_stage: kind.stage_keys().into_iter().map(|k| (k.to_string(), 0)).collect(),
            survivors: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn total_killed(&self) -> u64 {
        self.kills_per_stage.values().sum()
    }

    pub fn survivor_patterns(&self) -> Vec<TriplePattern> {
        self.survivors.iter().map(|s| s.pattern.clone()).collect()
    }

    /// Appends a report over later candidates.
    pub fn merge(&mut self, other: SearchReport) {
        self.total_generated += other.total_generated;
        for (k, v) in other.kills_per_stage {
            *self.kills_per_stage.entry(k).or_insert(0) += v;
        }
        self.survivors.extend(other.survivors);
        self.wall_time += other.wall_time;
    }
}

impl Serialize for SearchReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("dim", &self.kind.dim())?;
        m.serialize_entry("bound", &self.bound)?;
        m.serialize_entry("n", &self.half_pattern_n)?;
        m.serialize_entry("primitive", &self.primitive_only)?;
        if let Some(stage) = self.stop_stage {
            m.serialize_entry("stop_stage", &stage)?;
        }
        m.serialize_entry("total", &self.total_generated)?;
        m.serialize_entry("kills", &self.kills_per_stage)?;
        m.serialize_entry("survivors", &self.survivors)?;
        m.serialize_entry("wall_time_ms", &(self.wall_time.as_millis() as u64))?;
        m.end()
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("classification mismatch: {} missing, {} unexpected", missing.len(), unexpected.len())]
    ClassificationMismatch {
        report: Box<SearchReport>,
        missing: Vec<TriplePattern>,
        unexpected: Vec<TriplePattern>,
    },
    #[error("{} candidate(s) survived the full dimension-12 chain", report.survivors.len())]
    TheoremContradiction { report: Box<SearchReport> },
    #[error("cross-check failed on {pattern}: {detail}")]
    CrossCheck { pattern: TriplePattern, detail: String },
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

impl SearchError {
    /// The report the search produced before the failing comparison, if any.
    pub fn report(&self) -> Option<&SearchReport> {
        match self {
            SearchError::ClassificationMismatch { report, .. }
            | SearchError::TheoremContradiction { report } => Some(report),
            _ => None,
        }
    }
}

/// Wall-clock timer; reads zero where the platform has no clock.
struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed();
        #[cfg(target_arch = "wasm32")]
        Duration::ZERO
    }
}

/// What happened to one candidate.
pub enum Outcome {
    Killed(&'static str),
    Survived(Box<Survivor>),
}

/// Evaluates the prefix groups on `workers` threads and merges the partial
/// reports in prefix order.
pub fn parallel_partition<F>(
    kind: SearchKind,
    bound: u64,
    opts: &SearchOptions,
    eval: F,
) -> Result<SearchReport, SearchError>
where
    F: Fn(&TriplePattern) -> Result<Outcome, SearchError> + Sync,
{
    let start = Stopwatch::start();
    let n = kind.n();
    let groups = prefixes(n, bound);
    let run_group = |prefix: &Prefix| -> Result<SearchReport, SearchError> {
        let mut part = SearchReport::empty(kind, bound, opts);
        for cand in generate_group(n, bound, *prefix) {
            if opts.primitive_only && cand.pattern().gcd() != 1 {
                continue;
            }
            part.total_generated += 1;
            match eval(cand.pattern())? {
                Outcome::Killed(key) => *part.kills_per_stage.entry(key.to_string()).or_insert(0) += 1,
                Outcome::Survived(s) => part.survivors.push(*s),
            }
        }
        Ok(part)
    };
    let parts: Vec<Result<SearchReport, SearchError>> = if opts.workers <= 1 {
        groups.iter().map(run_group).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| SearchError::Pool(e.to_string()))?;
        pool.install(|| groups.par_iter().map(run_group).collect())
    };
    let mut report = SearchReport::empty(kind, bound, opts);
    for part in parts {
        report.merge(part?);
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

fn compare_survivors(
    report: SearchReport,
    expected: BTreeSet<TriplePattern>,
) -> Result<SearchReport, SearchError> {
    let got: BTreeSet<TriplePattern> = report.survivor_patterns().into_iter().collect();
    if got == expected {
        return Ok(report);
    }
    Err(SearchError::ClassificationMismatch {
        missing: expected.difference(&got).cloned().collect(),
        unexpected: got.difference(&expected).cloned().collect(),
        report: Box::new(report),
    })
}

/// `{(b+c; b; c) : b <= c, b + c <= W}`.
pub fn dim4_family(max_weight: u64, primitive_only: bool) -> BTreeSet<TriplePattern> {
    let mut out = BTreeSet::new();
    for b in 1..max_weight {
        for c in b..=max_weight.saturating_sub(b) {
            let p = TriplePattern::from_sorted(vec![b + c], vec![b], vec![c]);
            if !primitive_only || p.gcd() == 1 {
                out.insert(p);
            }
        }
    }
    out
}

/// Canonical patterns of the 8-dimensional family with `a + b + c <= W`:
/// `a = {a+b, a+c}`, `b = {a, a+b+c}`, `c = {b, c}`.
pub fn dim8_family(max_weight: u64, primitive_only: bool) -> BTreeSet<TriplePattern> {
    let mut out = BTreeSet::new();
    for a in 1..=max_weight {
        for b in 1..=max_weight {
            for c in 1..=max_weight {
                if a + b + c > max_weight {
                    continue;
                }
                let p = TriplePattern::new(vec![a + b, a + c], vec![a, a + b + c], vec![b, c])
                    .expect("positive entries");
                if !primitive_only || p.gcd() == 1 {
                    out.insert(canonicalize(&p).into_pattern());
                }
            }
        }
    }
    out
}

/// Survivors of the low-label rules and `A = B` for `n = 1`; must equal
/// [`dim4_family`].
pub fn classify_dim4(max_weight: u64, opts: &SearchOptions) -> Result<SearchReport, SearchError> {
    let report = parallel_partition(SearchKind::Dim4, max_weight, opts, |p| {
        Ok(if prop42_checks(p) {
            Outcome::Survived(Box::new(Survivor {
                pattern: p.clone(),
                checks: IndexMap::from([("prop42".to_string(), true)]),
                certificate: None,
            }))
        } else {
            Outcome::Killed("prop42")
        })
    })?;
    compare_survivors(report, dim4_family(max_weight, opts.primitive_only))
}

/// Survivors of the multiset test and the vanishing unit integral for
/// `n = 2`; must equal [`dim8_family`]. Each candidate is cross-checked
/// against the exact signature identity and the localized unit integral.
pub fn classify_dim8(max_weight: u64, opts: &SearchOptions) -> Result<SearchReport, SearchError> {
    let report = parallel_partition(SearchKind::Dim8, max_weight, opts, |p| {
        let multisets = prop42_checks(p);
        let exact = signature_exact_3pt(p);
        if multisets != exact {
            return Err(SearchError::CrossCheck {
                pattern: p.clone(),
                detail: format!("multiset test {multisets}, exact signature {exact}"),
            });
        }
        if !multisets {
            return Ok(Outcome::Killed("prop42"));
        }
        let relation = dim8_relation(p)?;
        let integral_zero = integral_of_one(&data_from_pattern(p)).is_zero();
        if relation != integral_zero {
            return Err(SearchError::CrossCheck {
                pattern: p.clone(),
                detail: format!("relation {relation}, unit integral vanishes {integral_zero}"),
            });
        }
        if !relation {
            return Ok(Outcome::Killed("dim8-relation"));
        }
        Ok(Outcome::Survived(Box::new(Survivor {
            pattern: p.clone(),
            checks: IndexMap::from([
                ("prop42".to_string(), true),
                ("signature-exact".to_string(), true),
                ("dim8-relation".to_string(), true),
                ("localization".to_string(), true),
            ]),
            certificate: None,
        })))
    })?;
    compare_survivors(report, dim8_family(max_weight, opts.primitive_only))
}

/// Runs the dimension-12 chain on every candidate. Without a stop stage any
/// survivor is an error.
pub fn refute_dim12(max_weight: u64, opts: &SearchOptions) -> Result<SearchReport, SearchError> {
    let report = parallel_partition(SearchKind::Dim12, max_weight, opts, |p| {
        let cert = dim12_chain_until(p, opts.stop_stage)?;
        if !cert.tie_consistent() {
            return Err(SearchError::CrossCheck {
                pattern: p.clone(),
                detail: "the two b3 = c3 normalizations disagree".into(),
            });
        }
        Ok(match cert.verdict.refuted_stage() {
            Some(stage) => Outcome::Killed(stage.key()),
            None => Outcome::Survived(Box::new(Survivor {
                pattern: p.clone(),
                checks: IndexMap::new(),
                certificate: Some(cert),
            })),
        })
    })?;
    if opts.stop_stage.is_none() && !report.survivors.is_empty() {
        return Err(SearchError::TheoremContradiction {
            report: Box::new(report),
        });
    }
    Ok(report)
}

/// Dispatches on the dimension.
pub fn run_search(
    kind: SearchKind,
    max_weight: u64,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    match kind {
        SearchKind::Dim4 => classify_dim4(max_weight, opts),
        SearchKind::Dim8 => classify_dim8(max_weight, opts),
        SearchKind::Dim12 => refute_dim12(max_weight, opts),
    }
}
