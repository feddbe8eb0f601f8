//! Fixed-width bitsets over the power set `2^[n]`, used as families during
//! search. Bit `x` stands for the subset with mask `x`.

/// Words needed for a universe of `size` points.
#[inline]
pub(crate) fn words_for(size: usize) -> usize {
    size.div_ceil(64).max(1)
}

#[inline]
pub(crate) fn count(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub(crate) fn and_into(dst: &mut [u64], a: &[u64], b: &[u64]) {
    for ((d, x), y) in dst.iter_mut().zip(a).zip(b) {
        *d = x & y;
    }
}

#[inline]
pub(crate) fn and_assign(dst: &mut [u64], a: &[u64]) {
    for (d, x) in dst.iter_mut().zip(a) {
        *d &= x;
    }
}

#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

#[inline]
pub(crate) fn set(a: &mut [u64], i: usize) {
    a[i >> 6] |= 1 << (i & 63);
}

#[inline]
pub(crate) fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&w| w == 0)
}

/// True when `a \ b` has a set bit below `limit`.
#[inline]
pub(crate) fn has_new_below(a: &[u64], b: &[u64], limit: usize) -> bool {
    let full = limit >> 6;
    for i in 0..full {
        if a[i] & !b[i] != 0 {
            return true;
        }
    }
    let rem = limit & 63;
    if rem != 0 {
        let mask = (1u64 << rem) - 1;
        if a[full] & !b[full] & mask != 0 {
            return true;
        }
    }
    false
}

/// Indices of set bits, ascending.
pub(crate) fn ones(a: &[u64]) -> impl Iterator<Item = usize> + '_ {
    a.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            }
        })
    })
}
