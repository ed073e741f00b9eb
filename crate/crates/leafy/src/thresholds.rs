//! The density constant c_k and the order thresholds n₀(k), n₁(k).
//!
//! c_k = (√k+√2)·√(k(k−1)) controls the minimum-degree condition
//! δ(G) ≥ c_k√n. The thresholds are the least orders from which two
//! inequalities hold for every larger order:
//!
//! * n₁(k): least n with n − 4·c_k·√n − 12k + 14 ≥ 0,
//! * n₀(k): least n with n − 4·c_k·√n − 2k² − 4k − 4 ≥ 0.
//!
//! Both expressions are decreasing then increasing in n and negative at
//! n = 0, so each has a single sign change and "least n where it holds"
//! is well-defined; binary search applies.
//!
//! All comparisons against c_k√n are evaluated in exact integer
//! arithmetic: c_k² = k(k−1)(k+2+2√(2k)), so after two squarings (each
//! guarded by a sign check, making them equivalences) a condition of the
//! form `x ≥ 4c_k√n` becomes polynomial in integers. Big integers avoid
//! overflow for large k.

use num_bigint::BigInt;

/// c_k, n₀(k) and n₁(k) for one class bound k.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Thresholds {
    pub k: usize,
    /// (√k+√2)·√(k(k−1)), to f64 precision. Exact comparisons do not use
    /// this field; it is informational (c_2 = 4 exactly).
    pub c_k: f64,
    /// Least n with n − 4c_k√n − 2k² − 4k − 4 ≥ 0.
    pub n0: usize,
    /// Least n with n − 4c_k√n − 12k + 14 ≥ 0.
    pub n1: usize,
}

/// c_k = (√k+√2)·√(k(k−1)), computed as √(k(k−1)·(k+2+2√(2k))) so that
/// perfect squares (like c_2 = 4) come out exact in f64.
pub fn ck(k: usize) -> f64 {
    assert!(k >= 2, "class bound k must be at least 2");
    let kf = k as f64;
    (kf * (kf - 1.0) * (kf + 2.0 + 2.0 * (2.0 * kf).sqrt())).sqrt()
}

/// Exact test of `x ≥ 4·c_k·√n` for nonnegative integers x, n.
///
/// Squaring twice: x² ≥ 16c_k²n = 16k(k−1)(k+2)n + 32k(k−1)n·√(2k), then
/// with P = x² − 16k(k−1)(k+2)n the condition is P ≥ 0 and
/// P² ≥ 2k·(32k(k−1)n)². Each squaring step keeps both sides nonnegative,
/// so the chain is an equivalence, not just an implication.
fn ge_4ck_sqrt(x: &BigInt, n: usize, k: usize) -> bool {
    if x.sign() == num_bigint::Sign::Minus {
        return false;
    }
    let n = BigInt::from(n);
    let k_ = BigInt::from(k);
    let kk1 = &k_ * (&k_ - 1); // k(k−1)
    let p: BigInt = x * x - 16 * &kk1 * (&k_ + 2) * &n;
    if p.sign() == num_bigint::Sign::Minus {
        return false;
    }
    let q = 32 * &kk1 * &n; // the coefficient of √(2k)
    &p * &p >= 2 * k_ * &q * &q
}

/// Exact test of `n − 4·c_k·√n − b ≥ 0` (b may be negative).
fn order_inequality_holds(n: usize, k: usize, b: i64) -> bool {
    let x = BigInt::from(n) - BigInt::from(b);
    ge_4ck_sqrt(&x, n, k)
}

/// Least n satisfying `order_inequality_holds` (single sign change in n).
fn least_order(k: usize, b: i64) -> usize {
    let mut hi: usize = 1;
    while !order_inequality_holds(hi, k, b) {
        hi = hi.checked_mul(2).expect("threshold exceeds usize range");
    }
    let mut lo = 0; // invariant: fails at lo (b > 0 for every k ≥ 2 here)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if order_inequality_holds(mid, k, b) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Computes c_k, n₀(k) and n₁(k). Requires k ≥ 2.
pub fn thresholds(k: usize) -> Thresholds {
    assert!(k >= 2, "class bound k must be at least 2");
    let ik = i64::try_from(k).expect("k exceeds i64 range");
    let n1 = least_order(k, 12 * ik - 14);
    let n0 = least_order(k, 2 * ik * ik + 4 * ik + 4);
    debug_assert!(n0 >= n1);
    Thresholds { k, c_k: ck(k), n0, n1 }
}

/// Exact test of the minimum-degree density condition `delta ≥ c_k·√n`.
pub fn min_degree_is_dense(delta: usize, n: usize, k: usize) -> bool {
    assert!(k >= 2, "class bound k must be at least 2");
    // delta ≥ c_k√n ⇔ 4·delta ≥ 4·c_k·√n.
    ge_4ck_sqrt(&(BigInt::from(delta) * 4), n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_four_n1_values() {
        assert_eq!(thresholds(2).n1, 276);
        assert_eq!(thresholds(3).n1, 994);
        assert_eq!(thresholds(4).n1, 2306);
        assert_eq!(thresholds(5).n1, 4356);
    }

    #[test]
    fn c2_is_exactly_four() {
        assert_eq!(ck(2), 4.0);
    }

    #[test]
    fn n1_is_tight() {
        // The defining inequality fails just below each threshold and
        // holds from it onward.
        for k in 2..=8 {
            let b = 12 * k as i64 - 14;
            let n1 = thresholds(k).n1;
            assert!(!order_inequality_holds(n1 - 1, k, b), "k={k}");
            for n in n1..n1 + 64 {
                assert!(order_inequality_holds(n, k, b), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn n0_dominates_n1_and_cubic_bound() {
        for k in 2..=50 {
            let t = thresholds(k);
            assert!(t.n0 >= t.n1, "k={k}");
            assert!(t.n1 > 16 * k * k * k, "k={k}: n1={} vs {}", t.n1, 16 * k * k * k);
        }
    }

    #[test]
    fn exact_matches_float_away_from_boundary() {
        for k in 2..=6usize {
            for n in [10usize, 100, 500, 1000, 5000] {
                for delta in [0usize, 5, 50, 200, 1000] {
                    let float = delta as f64 - ck(k) * (n as f64).sqrt();
                    if float.abs() > 1e-6 {
                        assert_eq!(
                            min_degree_is_dense(delta, n, k),
                            float > 0.0,
                            "k={k} n={n} delta={delta}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn dense_boundary_is_exact() {
        // k=2, n=4: c_2√4 = 8 exactly, so 8 passes and 7 fails.
        assert!(min_degree_is_dense(8, 4, 2));
        assert!(!min_degree_is_dense(7, 4, 2));
        // K20 at k=2: 19 ≥ 4√20 ≈ 17.89.
        assert!(min_degree_is_dense(19, 20, 2));
        // K5 at k=2: 4 < 4√5.
        assert!(!min_degree_is_dense(4, 5, 2));
    }

    #[test]
    fn large_k_does_not_overflow() {
        let t = thresholds(600);
        assert!(t.n1 > 16 * 600 * 600 * 600);
        assert!(t.n0 >= t.n1);
    }
}
