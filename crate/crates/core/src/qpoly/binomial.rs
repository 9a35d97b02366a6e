use crate::error::{Error, Result};

use super::QPolynomial;

/// Gaussian binomial `(n choose k)_q`, computed from its product form
/// `prod_{i=n-k+1..n} (1 - q^i) / prod_{i=1..k} (1 - q^i)` by exact division.
pub fn qbinomial(n: i64, k: i64) -> Result<QPolynomial> {
    if n < 0 || k < 0 || k > n {
        return Err(Error::domain(format!("q-binomial ({n} choose {k}) needs 0 <= k <= n")));
    }
    // Symmetry keeps the products short.
    let k = k.min(n - k);
    let num: QPolynomial = (n - k + 1..=n).map(QPolynomial::one_minus_q_pow).product();
    let den: QPolynomial = (1..=k).map(QPolynomial::one_minus_q_pow).product();
    num.exact_div(&den)
}

/// Like [`qbinomial`], but zero outside `0 <= k <= n` instead of an error.
pub fn qbinomial_or_zero(n: i64, k: i64) -> QPolynomial {
    qbinomial(n, k).unwrap_or_default()
}

/// Sums `q^#{(s, t) in S x T : t > s}` over every split of `{1, ..., s + t}`
/// into `S` and `T` with `#S = s_size`, by direct enumeration.
pub fn partition_sum(s_size: usize, t_size: usize) -> QPolynomial {
    let total = s_size + t_size;
    assert!(total < 64, "partition_sum enumerates subsets of at most 63 elements");
    let mut acc = vec![0u64; s_size * t_size + 1];
    let mut visit = |s_mask: u64| {
        // Walk left to right; each element of T pairs with every earlier S element.
        let mut seen_s = 0usize;
        let mut inv = 0usize;
        for i in 0..total {
            if s_mask >> i & 1 == 1 {
                seen_s += 1;
            } else {
                inv += seen_s;
            }
        }
        acc[inv] += 1;
    };
    for_each_subset(total, s_size, &mut visit);
    QPolynomial::from_terms(acc.into_iter().enumerate().map(|(e, c)| (e as i64, c)))
}

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(u64)) {
    fn go(start: usize, n: usize, left: usize, mask: u64, f: &mut impl FnMut(u64)) {
        if left == 0 {
            f(mask);
            return;
        }
        for i in start..=n - left {
            go(i + 1, n, left - 1, mask | 1 << i, f);
        }
    }
    go(0, n, k, 0, f);
}
