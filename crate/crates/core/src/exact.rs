//! Exact arithmetic kernels: sparse integer polynomials, dense truncated
//! power series and rationals in one indeterminate `t`.
//!
//! Nothing in here rounds. Coefficients are [`BigInt`] and every comparison
//! in the crate is a literal equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("linear system is singular")]
    Singular,
    #[error("system dimensions do not match: {nodes} nodes, {rhs} right-hand sides")]
    DimensionMismatch { nodes: usize, rhs: usize },
}

/// Sparse polynomial with integer coefficients, stored as `exponent -> coefficient`.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    terms: BTreeMap<u64, BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: u64) -> Self {
        let coeff = coeff.into();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging repeated
    /// exponents.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (exp, c) in terms {
            p.add_term(exp, c.into());
        }
        p
    }

    /// `1 + t^exp` when `plus`, otherwise `1 - t^exp`.
    pub fn binomial(exp: u64, plus: bool) -> Self {
        let second = if plus { 1 } else { -1 };
        Self::from_terms([(0, BigInt::one()), (exp, BigInt::from(second))])
    }

    fn add_term(&mut self, exp: u64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent carrying a non-zero coefficient.
    pub fn low_degree(&self) -> Option<u64> {
        self.terms.keys().next().copied()
    }

    pub fn coeff(&self, exp: u64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Exact product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    /// Drops every term above `order` and densifies.
    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for (e, c) in self.terms.range(..=order as u64) {
            coeffs[*e as usize] = c.clone();
        }
        TruncatedSeries { coeffs }
    }
}

/// Exact product of two sparse polynomials.
pub fn poly_mul(p: &IntPolynomial, q: &IntPolynomial) -> IntPolynomial {
    p.mul(q)
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: Self) -> IntPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: Self) -> IntPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: Self) -> IntPolynomial {
        IntPolynomial::mul(self, rhs)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(e, c)| (*e, c)))
    }
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (u64, &'a BigInt)>,
) -> fmt::Result {
    let mut first = true;
    for (exp, c) in terms {
        if c.is_zero() {
            continue;
        }
        let negative = c < &BigInt::zero();
        let abs = if negative { -c } else { c.clone() };
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { '-' } else { '+' })?;
        }
        first = false;
        match exp {
            0 => write!(f, "{abs}")?,
            _ if abs.is_one() => {}
            _ => write!(f, "{abs}")?,
        }
        match exp {
            0 => {}
            1 => write!(f, "t")?,
            _ => write!(f, "t^{exp}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Power series in `t` truncated at order `N`; always stores exactly `N + 1`
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigInt::one(), order)
    }

    pub fn constant(value: BigInt, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// Takes `coeffs[0..]` as degrees `0..`; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    ///
    /// Panics on an empty coefficient vector.
    pub fn from_coeffs<C: Into<BigInt>>(coeffs: impl IntoIterator<Item = C>) -> Self {
        let coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        assert!(!coeffs.is_empty(), "a truncated series needs at least the constant term");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, degree: usize) -> &BigInt {
        &self.coeffs[degree]
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn check_order(&self, other: &Self) -> Result<(), ExactError> {
        if self.order() != other.order() {
            return Err(ExactError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = Self::zero(n);
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs[..=n - i].iter().enumerate() {
                if !y.is_zero() {
                    out.coeffs[i + j] += x * y;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        Self {
            coeffs: self.coeffs.iter().map(|c| c * &k).collect(),
        }
    }

    /// Multiplies in place by `(1 + t^w) / (1 - t^w)` in linear time: a strided
    /// prefix sum divides by `1 - t^w`, a strided shift-add multiplies by `1 + t^w`.
    ///
    /// Agrees with `self.mul(&weight_factor_series(w, self.order()))`.
    pub fn mul_weight_factor(&mut self, w: u64) {
        assert!(w >= 1, "weights are positive");
        let w = match usize::try_from(w) {
            Ok(w) if w <= self.order() => w,
            // t^w vanishes at this order: the factor is 1.
            _ => return,
        };
        for d in w..self.coeffs.len() {
            let prev = self.coeffs[d - w].clone();
            self.coeffs[d] += prev;
        }
        for d in (w..self.coeffs.len()).rev() {
            let prev = self.coeffs[d - w].clone();
            self.coeffs[d] += prev;
        }
    }

    /// Lowest positive degree with a non-zero coefficient.
    pub fn first_nonconstant_degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, c)| !c.is_zero())
            .map(|(d, _)| d)
    }

    pub fn is_constant(&self) -> bool {
        self.first_nonconstant_degree().is_none()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().enumerate().map(|(d, c)| (d as u64, c)))?;
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

/// Truncation to order `order` of `(1 + t^w) / (1 - t^w) = 1 + 2 Σ_{j≥1} t^{jw}`.
///
/// # Panics
///
/// Panics if `w == 0`.
pub fn weight_factor_series(w: u64, order: usize) -> TruncatedSeries {
    assert!(w >= 1, "weights are positive");
    let mut s = TruncatedSeries::one(order);
    let two = BigInt::from(2);
    if let Ok(step) = usize::try_from(w) {
        for d in (step..=order).step_by(step) {
            s.coeffs[d] = two.clone();
        }
    }
    s
}

/// Exact product of two truncated series of equal order.
pub fn series_mul(s: &TruncatedSeries, u: &TruncatedSeries) -> Result<TruncatedSeries, ExactError> {
    s.mul(u)
}

/// Exact, reduced sum; the empty sum is zero.
pub fn rational_sum<I: IntoIterator<Item = BigRational>>(values: I) -> BigRational {
    values.into_iter().fold(BigRational::zero(), |acc, v| acc + v)
}

/// Elementary symmetric polynomial `e_m(values)`; `e_0 = 1` and `e_m = 0` for `m > len`.
pub fn elementary_symmetric(values: &[BigInt], m: usize) -> BigInt {
    // e[j] holds e_j of the prefix processed so far.
    let mut e = vec![BigInt::zero(); m + 1];
    e[0] = BigInt::one();
    for (seen, v) in values.iter().enumerate() {
        for j in (1..=m.min(seen + 1)).rev() {
            let add = &e[j - 1] * v;
            e[j] += add;
        }
    }
    e.swap_remove(m)
}

/// Solves `Σ_i nodes[i]^l · x_i = rhs[l]` for `l = 0..s` (a transposed
/// Vandermonde system) by Gaussian elimination over the rationals.
pub fn solve_vandermonde(
    nodes: &[BigRational],
    rhs: &[BigRational],
) -> Result<Vec<BigRational>, ExactError> {
    let s = nodes.len();
    if rhs.len() != s {
        return Err(ExactError::DimensionMismatch {
            nodes: s,
            rhs: rhs.len(),
        });
    }
    // Row l: [nodes_0^l, ..., nodes_{s-1}^l | rhs_l]
    let mut rows: Vec<Vec<BigRational>> = (0..s)
        .map(|l| {
            let mut row: Vec<BigRational> = nodes
                .iter()
                .map(|b| num_traits::pow(b.clone(), l))
                .collect();
            row.push(rhs[l].clone());
            row
        })
        .collect();
    for col in 0..s {
        let pivot = (col..s)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or(ExactError::Singular)?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for x in rows[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..s {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            let (pivot_row, target) = if r < col {
                let (lo, hi) = rows.split_at_mut(col);
                (&hi[0], &mut lo[r])
            } else {
                let (lo, hi) = rows.split_at_mut(r);
                (&lo[col], &mut hi[0])
            };
            for (t, p) in target.iter_mut().zip(pivot_row) {
                *t -= &factor * p;
            }
        }
    }
    Ok(rows.into_iter().map(|mut row| row.swap_remove(s)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(terms: &[(u64, i64)]) -> IntPolynomial {
        IntPolynomial::from_terms(terms.iter().copied())
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn poly_mul_examples() {
        let one_minus_t = poly(&[(0, 1), (1, -1)]);
        let one_plus_t = poly(&[(0, 1), (1, 1)]);
        assert_eq!(poly_mul(&one_minus_t, &one_plus_t), poly(&[(0, 1), (2, -1)]));

        let p = poly(&[(0, 1), (2, 1)]);
        assert_eq!(poly_mul(&p, &IntPolynomial::one()), p);

        assert_eq!(
            poly_mul(&one_plus_t, &one_plus_t),
            poly(&[(0, 1), (1, 2), (2, 1)])
        );
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = poly(&[(3, 5), (3, -5), (1, 2)]);
        assert_eq!(p.len(), 1);
        assert!((&p - &p).is_zero());
        assert_eq!(p.to_string(), "2t");
        assert_eq!(poly(&[(0, 1), (2, -1), (5, 3)]).to_string(), "1 - t^2 + 3t^5");
    }

    #[test]
    fn weight_factor_examples() {
        assert_eq!(
            weight_factor_series(1, 3),
            TruncatedSeries::from_coeffs([1, 2, 2, 2])
        );
        assert_eq!(weight_factor_series(5, 3), TruncatedSeries::one(3));
        assert_eq!(
            weight_factor_series(2, 5),
            TruncatedSeries::from_coeffs([1, 0, 2, 0, 2, 0])
        );
    }

    #[test]
    fn series_mul_examples() {
        let s = TruncatedSeries::from_coeffs([1, 2]);
        assert_eq!(series_mul(&s, &s).unwrap(), TruncatedSeries::from_coeffs([1, 4]));

        let u = TruncatedSeries::from_coeffs([3, -1, 7]);
        assert_eq!(series_mul(&TruncatedSeries::one(2), &u).unwrap(), u);

        let l = TruncatedSeries::from_coeffs([1, 2, 2]);
        let r = TruncatedSeries::from_coeffs([1, 0, 2]);
        assert_eq!(series_mul(&l, &r).unwrap(), TruncatedSeries::from_coeffs([1, 2, 4]));
    }

    #[test]
    fn series_order_mismatch() {
        let err = series_mul(&TruncatedSeries::one(2), &TruncatedSeries::one(3)).unwrap_err();
        assert_eq!(err, ExactError::OrderMismatch { left: 2, right: 3 });
    }

    #[test]
    fn rational_sum_examples() {
        // Common denominator 12: 1 + 3 - 4 = 0.
        assert_eq!(
            rational_sum([ratio(1, 12), ratio(1, 4), ratio(-1, 3)]),
            BigRational::zero()
        );
        assert_eq!(rational_sum(Vec::new()), BigRational::zero());
        let half = rational_sum([ratio(2, 4)]);
        assert_eq!(half, ratio(1, 2));
        assert_eq!(half.numer(), &BigInt::from(1));
        assert_eq!(half.denom(), &BigInt::from(2));
    }

    #[test]
    fn elementary_symmetric_small() {
        let v: Vec<BigInt> = [1, 4, 4, 9].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(elementary_symmetric(&v, 0), BigInt::from(1));
        assert_eq!(elementary_symmetric(&v, 1), BigInt::from(18));
        // 4 + 4 + 9 + 16 + 36 + 36
        assert_eq!(elementary_symmetric(&v, 2), BigInt::from(105));
        assert_eq!(elementary_symmetric(&v, 4), BigInt::from(144));
        assert_eq!(elementary_symmetric(&v, 5), BigInt::from(0));
    }

    #[test]
    fn vandermonde_recovers_weights() {
        let nodes = [ratio(18, 1), ratio(10, 1), ratio(12, 1)];
        let x = [ratio(1, 12), ratio(1, 4), ratio(-1, 3)];
        let rhs: Vec<BigRational> = (0..3)
            .map(|l| rational_sum(nodes.iter().zip(&x).map(|(b, a)| num_traits::pow(b.clone(), l) * a)))
            .collect();
        assert_eq!(solve_vandermonde(&nodes, &rhs).unwrap(), x.to_vec());

        let repeated = [ratio(2, 1), ratio(2, 1)];
        assert_eq!(
            solve_vandermonde(&repeated, &[ratio(0, 1), ratio(0, 1)]).unwrap_err(),
            ExactError::Singular
        );
    }

    fn arb_poly() -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec((0u64..40, -1_000_000i64..=1_000_000), 0..=8)
            .prop_map(IntPolynomial::from_terms)
    }

    proptest! {
        #[test]
        fn poly_mul_commutes_and_associates(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(poly_mul(&p, &q), poly_mul(&q, &p));
            prop_assert_eq!(poly_mul(&poly_mul(&p, &q), &r), poly_mul(&p, &poly_mul(&q, &r)));
        }

        #[test]
        fn weight_factor_times_denominator(w in 1u64..12, order in 0usize..40) {
            let lhs = weight_factor_series(w, order)
                .mul(&IntPolynomial::binomial(w, false).truncate(order))
                .unwrap();
            prop_assert_eq!(lhs, IntPolynomial::binomial(w, true).truncate(order));
        }

        #[test]
        fn series_agrees_with_polynomials(p in arb_poly(), q in arb_poly(), order in 0usize..50) {
            let via_series = p.truncate(order).mul(&q.truncate(order)).unwrap();
            prop_assert_eq!(via_series, poly_mul(&p, &q).truncate(order));
        }

        #[test]
        fn linear_time_factor_matches_product(
            coeffs in prop::collection::vec(-50i64..50, 1..30),
            w in 1u64..40,
        ) {
            let s = TruncatedSeries::from_coeffs(coeffs);
            let mut fast = s.clone();
            fast.mul_weight_factor(w);
            prop_assert_eq!(fast, s.mul(&weight_factor_series(w, s.order())).unwrap());
        }
    }
}
