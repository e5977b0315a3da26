//! Canonical enumeration of projective points over a field with `q` elements.
//!
//! A point is represented by the vector whose first nonzero coordinate is 1.
//! Points with an earlier leading coordinate come first; within a block the free
//! coordinates run through the element codes with the last one varying fastest.

use core::ops::Range;

use crate::field::FqElem;

/// |P^2(F_q)| = q^2 + q + 1.
pub fn p2_size(q: u64) -> u64 {
    q * q + q + 1
}

/// The `index`-th point of P^2: (1:y:z) for index = yq + z, then (0:1:z), then (0:0:1).
#[inline]
pub fn p2_point(q: u64, index: u64) -> [FqElem; 3] {
    let qq = q * q;
    if index < qq {
        [FqElem::ONE, FqElem(index / q), FqElem(index % q)]
    } else if index < qq + q {
        [FqElem::ZERO, FqElem::ONE, FqElem(index - qq)]
    } else {
        debug_assert_eq!(index, qq + q);
        [FqElem::ZERO, FqElem::ZERO, FqElem::ONE]
    }
}

pub fn enumerate_p2(q: u64) -> impl Iterator<Item = [FqElem; 3]> {
    (0..p2_size(q)).map(move |i| p2_point(q, i))
}

/// Splits `0..total` into contiguous ranges of at most `chunk` indices.
pub fn chunks(total: u64, chunk: u64) -> impl Iterator<Item = Range<u64>> {
    let chunk = chunk.max(1);
    (0..total.div_ceil(chunk)).map(move |k| k * chunk..((k + 1) * chunk).min(total))
}

/// Number of points of P^(n-1) over F_q.
pub fn pn_size(q: u64, n: usize) -> u64 {
    (0..n as u32).map(|k| q.pow(k)).sum()
}

/// All points of P^(n-1)(F_q), n <= 5; unused trailing coordinates are zero.
pub fn pn_points(q: u64, n: usize) -> impl Iterator<Item = [FqElem; 5]> {
    assert!((1..=5).contains(&n));
    (0..n).flat_map(move |lead| {
        let free = (n - 1 - lead) as u32;
        (0..q.pow(free)).map(move |mut code| {
            let mut x = [FqElem::ZERO; 5];
            x[lead] = FqElem::ONE;
            for k in (lead + 1..n).rev() {
                x[k] = FqElem(code % q);
                code /= q;
            }
            x
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_sizes() {
        assert_eq!(enumerate_p2(3).count(), 13);
        assert_eq!(enumerate_p2(5).count(), 31);
        assert_eq!(p2_size(16807), 16807 * 16807 + 16807 + 1);
        assert_eq!(p2_size(16807), 282_492_057);
    }

    #[test]
    fn p2_order_and_distinctness() {
        let pts: alloc::vec::Vec<_> = enumerate_p2(3).collect();
        assert_eq!(pts[0], [FqElem(1), FqElem(0), FqElem(0)]);
        assert_eq!(pts[9], [FqElem(0), FqElem(1), FqElem(0)]);
        assert_eq!(pts[12], [FqElem(0), FqElem(0), FqElem(1)]);
        let mut s = pts.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 13);
    }

    #[test]
    fn chunking_covers_range() {
        let parts: alloc::vec::Vec<_> = chunks(10, 4).collect();
        assert_eq!(parts, [0..4, 4..8, 8..10]);
        assert_eq!(chunks(0, 4).count(), 0);
    }

    #[test]
    fn p4_points() {
        assert_eq!(pn_points(3, 5).count() as u64, pn_size(3, 5));
        assert_eq!(pn_size(3, 5), 121);
    }
}
