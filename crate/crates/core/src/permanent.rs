//! Permanents of 0/1 matrices by Ryser's inclusion–exclusion formula.

use num_bigint::BigUint;

/// Largest dimension accepted by [`permanent_01`].
pub const MAX_DIM: usize = 20;

/// Permanent of the `n x n` 0/1 matrix whose row `i` has ones at the set
/// bits of `rows[i]`.
///
/// Subsets are visited in Gray-code order so each step adjusts the row sums
/// by a single column. Every term is bounded by `n^n <= 20^20` and there are
/// at most `2^20` of them, so the running sum fits an `i128` exactly.
///
/// # Panics
/// If `rows.len() > MAX_DIM`.
pub fn permanent_01(rows: &[u64]) -> BigUint {
    let n = rows.len();
    assert!(n <= MAX_DIM, "permanent dimension {n} exceeds {MAX_DIM}");
    if n == 0 {
        return BigUint::from(1u8);
    }
    let mut row_sums = vec![0i128; n];
    let mut total: i128 = 0;
    let mut prev_gray = 0u64;
    for k in 1u64..1 << n {
        let gray = k ^ (k >> 1);
        let col = (gray ^ prev_gray).trailing_zeros();
        let added = gray >> col & 1 == 1;
        for (sum, &row) in row_sums.iter_mut().zip(rows) {
            if row >> col & 1 == 1 {
                *sum += if added { 1 } else { -1 };
            }
        }
        prev_gray = gray;
        if row_sums.iter().any(|&s| s == 0) {
            continue;
        }
        let product: i128 = row_sums.iter().product();
        if gray.count_ones() % 2 == 0 {
            total += product;
        } else {
            total -= product;
        }
    }
    if n % 2 == 1 {
        total = -total;
    }
    debug_assert!(total >= 0);
    BigUint::from(total as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full(n: usize) -> Vec<u64> {
        vec![(1u64 << n) - 1; n]
    }

    #[test]
    fn all_ones_is_factorial() {
        let mut fact = 1u128;
        for n in 1..=12 {
            fact *= n as u128;
            assert_eq!(permanent_01(&full(n)), BigUint::from(fact), "n={n}");
        }
    }

    #[test]
    fn identity_and_empty() {
        let id: Vec<u64> = (0..6).map(|i| 1 << i).collect();
        assert_eq!(permanent_01(&id), BigUint::from(1u8));
        assert_eq!(permanent_01(&[]), BigUint::from(1u8));
        assert_eq!(permanent_01(&[0, 0b11]), BigUint::from(0u8));
    }

    #[test]
    fn twenty_by_twenty_fits() {
        // 20! = 2432902008176640000
        assert_eq!(
            permanent_01(&full(20)),
            BigUint::from(2_432_902_008_176_640_000u128)
        );
    }
}
