//! Binomial coefficients and colexicographic ranking of k-subsets.
//!
//! A sorted tuple `v_0 < v_1 < ... < v_{r-1}` is ranked by the combinatorial
//! number system: `rank = sum_i C(v_i, i+1)`. For vertices drawn from `[0, n)`
//! the rank is a bijection onto `[0, C(n, r))`, independent of `n`.

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Checked binomial coefficient. `None` means u64 overflow; `C(n, k) = 0` for `k > n`.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // Multiply first, then divide; the running product of i consecutive
        // binomials is always divisible by i.
        acc = acc.checked_mul((n - k + i) as u128)? / i as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Colex rank of a strictly increasing vertex tuple. `None` on u64 overflow.
pub fn colex_rank(sorted: &[u32]) -> Option<u64> {
    let mut key = 0u64;
    for (i, &v) in sorted.iter().enumerate() {
        key = key.checked_add(binomial(v as u64, i as u64 + 1)?)?;
    }
    Some(key)
}

/// Invert [`colex_rank`]: the strictly increasing `r`-tuple with the given rank.
pub fn colex_unrank(mut key: u64, r: u32) -> SmallVec<[u32; 4]> {
    let mut out: SmallVec<[u32; 4]> = SmallVec::with_capacity(r as usize);
    for i in (1..=r as u64).rev() {
        // Largest v with C(v, i) <= key. C(v, i) is strictly increasing in v
        // for v >= i, so binary search after doubling an upper bound.
        let mut lo = i.saturating_sub(1); // C(i-1, i) = 0 <= key
        let mut hi = i.max(1);
        while binomial(hi, i).is_some_and(|c| c <= key) {
            lo = hi;
            hi *= 2;
        }
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            // Overflowing C(mid, i) certainly exceeds key.
            if binomial(mid, i).is_some_and(|c| c <= key) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        key -= binomial(lo, i).expect("below key, fits u64");
        out.push(lo as u32);
    }
    out.reverse();
    out
}

/// Upper bound on a Pascal table allocation; vertex counts needing more are
/// far past anything the key space supports anyway.
const TABLE_BUDGET_BYTES: usize = 256 * 1024 * 1024;

/// Pascal table of `C(v, j)` for `v in 0..=n`, `j in 0..=r`, laid out row-major.
///
/// Construction fails with [`Error::Resource`] if the table exceeds its
/// memory budget or any entry overflows u64, so every key derived from the
/// table is known to fit the key width.
#[derive(Debug, Clone)]
pub struct BinomTable {
    cols: usize,
    data: Vec<u64>,
}

impl BinomTable {
    pub fn new(n: u32, r: u32) -> Result<BinomTable> {
        let rows = n as usize + 1;
        let cols = r as usize + 1;
        if rows.saturating_mul(cols).saturating_mul(8) > TABLE_BUDGET_BYTES {
            return Err(Error::Resource(format!(
                "binomial table for n={n}, r={r} exceeds {TABLE_BUDGET_BYTES} bytes"
            )));
        }
        let mut data = vec![0u64; rows * cols];
        data[0] = 1;
        for v in 1..rows {
            data[v * cols] = 1;
            for j in 1..cols {
                let above = data[(v - 1) * cols + j];
                let left = data[(v - 1) * cols + j - 1];
                data[v * cols + j] = above.checked_add(left).ok_or_else(|| {
                    Error::Resource(format!("C({v}, {j}) overflows the 64-bit key space"))
                })?;
            }
        }
        Ok(BinomTable { cols, data })
    }

    /// `C(v, j)`; `v` must be within the table.
    #[inline(always)]
    pub fn get(&self, v: u32, j: u32) -> u64 {
        self.data[v as usize * self.cols + j as usize]
    }

    /// Colex rank of a strictly increasing tuple with all entries within the table.
    #[inline]
    pub fn rank(&self, sorted: &[u32]) -> u64 {
        let mut key = 0u64;
        for (i, &v) in sorted.iter().enumerate() {
            key += self.get(v, i as u32 + 1);
        }
        key
    }
}

/// Visit all k-subsets of `[0, n)` as sorted slices, in lexicographic order.
pub fn for_each_combination<F: FnMut(&[u32])>(n: u32, k: u32, mut f: F) {
    if k > n {
        return;
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let k = k as usize;
    let mut c: Vec<u32> = (0..k as u32).collect();
    loop {
        f(&c);
        // lex successor: bump the rightmost entry below its maximum
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] < n - (k - i) as u32 {
                break;
            }
        }
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}
