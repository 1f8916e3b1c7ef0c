//! Reference computations that share no code with the library: dense i128
//! arithmetic and direct enumeration.

#![allow(dead_code)]

use std::collections::HashMap;

/// A point as (sign, weights).
pub type Point = (i64, Vec<u64>);

fn mul_trunc(x: &[i128], y: &[i128], order: usize) -> Vec<i128> {
    let mut out = vec![0i128; order + 1];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate().take(order + 1 - i) {
            out[i + j] += a * b;
        }
    }
    out
}

/// Coefficients of `Σ ε ∏ (1 + t^w)/(1 - t^w)` up to `t^order`, expanding each
/// factor as `1 + 2t^w + 2t^{2w} + ...`.
pub fn signature_coefficients(points: &[Point], order: usize) -> Vec<i128> {
    let mut total = vec![0i128; order + 1];
    for (sign, weights) in points {
        let mut s = vec![0i128; order + 1];
        s[0] = 1;
        for &w in weights {
            let mut f = vec![0i128; order + 1];
            f[0] = 1;
            let mut k = w as usize;
            while k <= order {
                f[k] = 2;
                k += w as usize;
            }
            s = mul_trunc(&s, &f, order);
        }
        for (t, c) in total.iter_mut().zip(s) {
            *t += *sign as i128 * c;
        }
    }
    total
}

pub fn series_constant(points: &[Point], order: usize) -> bool {
    signature_coefficients(points, order)[1..].iter().all(|&c| c == 0)
}

fn poly_mul(x: &[i128], y: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; x.len() + y.len() - 1];
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn binomial(w: u64, plus: bool) -> Vec<i128> {
    let mut p = vec![0i128; w as usize + 1];
    p[0] = 1;
    p[w as usize] = if plus { 1 } else { -1 };
    p
}

/// The signature sum is a constant rational function: after multiplying by
/// the product `D` of all `(1 - t^w)`, the numerator is a constant times `D`.
pub fn identity_holds(points: &[Point]) -> bool {
    let mut denom = vec![1i128];
    for (_, ws) in points {
        for &w in ws {
            denom = poly_mul(&denom, &binomial(w, false));
        }
    }
    let mut numer = vec![0i128; denom.len()];
    for (i, (sign, ws)) in points.iter().enumerate() {
        let mut term = vec![*sign as i128];
        for &w in ws {
            term = poly_mul(&term, &binomial(w, true));
        }
        for (j, (_, other)) in points.iter().enumerate() {
            if j != i {
                for &w in other {
                    term = poly_mul(&term, &binomial(w, false));
                }
            }
        }
        for (k, c) in term.into_iter().enumerate() {
            numer[k] += c;
        }
    }
    let c0 = numer[0];
    numer.iter().zip(&denom).all(|(n, d)| *n == c0 * d)
}

/// Whether the two subset-sum multisets of a three-point pattern agree,
/// counted over all `2^{3n}` bit vectors.
pub fn multisets_equal(a: &[u64], b: &[u64], c: &[u64]) -> bool {
    let n = a.len();
    let mut balance: HashMap<u64, i64> = HashMap::new();
    for bits in 0u32..(1 << (3 * n)) {
        let (mut pa, mut pb, mut pc, mut sum) = (0, 0, 0, 0u64);
        for i in 0..n {
            if bits >> i & 1 == 1 {
                pa += 1;
                sum += a[i];
            }
            if bits >> (n + i) & 1 == 1 {
                pb += 1;
                sum += b[i];
            }
            if bits >> (2 * n + i) & 1 == 1 {
                pc += 1;
                sum += c[i];
            }
        }
        let (oa, ob, oc) = (pa % 2 == 1, pb % 2 == 1, pc % 2 == 1);
        if oa && !ob && !oc {
            *balance.entry(sum).or_insert(0) += 1;
        } else if !oa && ob && oc {
            *balance.entry(sum).or_insert(0) -= 1;
        }
    }
    balance.values().all(|&v| v == 0)
}

/// Points `(+, a ∪ b)`, `(+, a ∪ c)`, `(-, b ∪ c)`.
pub fn pattern_points(a: &[u64], b: &[u64], c: &[u64]) -> Vec<Point> {
    let join = |x: &[u64], y: &[u64]| {
        let mut v: Vec<u64> = x.iter().chain(y).copied().collect();
        v.sort_unstable();
        v
    };
    vec![(1, join(a, b)), (1, join(a, c)), (-1, join(b, c))]
}

/// Fixed-point data of `[g^d x0 : g^e x1 : g^f x2]` on the quaternionic
/// projective plane, from twice the parameters.
pub fn projective_points(d2: i64, e2: i64, f2: i64) -> Vec<Point> {
    let w = |x: i64| x.unsigned_abs() / 2;
    let mut pts = vec![
        (1, vec![w(e2 + d2), w(e2 - d2), w(f2 + d2), w(f2 - d2)]),
        (-1, vec![w(d2 + e2), w(d2 - e2), w(f2 + e2), w(f2 - e2)]),
        (1, vec![w(d2 + f2), w(d2 - f2), w(e2 + f2), w(e2 - f2)]),
    ];
    for p in &mut pts {
        p.1.sort_unstable();
    }
    pts
}

/// Sorted multisets of size `len` over `1..=max`.
pub fn sorted_arrays(len: usize, max: u64) -> Vec<Vec<u64>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for head in sorted_arrays(len - 1, max) {
        let lo = head.last().copied().unwrap_or(1);
        for x in lo..=max {
            let mut v = head.clone();
            v.push(x);
            out.push(v);
        }
    }
    out
}
