//! Pure index mappings for the four array restructurings plus affine
//! index permutations.
//!
//! Every function here is total over its stated preconditions and free of
//! side effects; the store module executes these mappings and the codegen
//! module renders them as Java accessor bodies.

use crate::error::{Error, Result};

/// Which of the two split sub-arrays an element lands in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Half {
    First,
    Second,
}

/// Location of an element inside the split pair of sub-arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitLocation {
    pub half: Half,
    pub offset: usize,
}

/// Source array of a merged element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MergeSource {
    A,
    B,
}

/// A rows x cols shape; both dimensions are at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dim2 {
    pub rows: usize,
    pub cols: usize,
}

impl Dim2 {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroSize);
        }
        Ok(Dim2 { rows, cols })
    }

    /// Total number of cells.
    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }
}

/// Index permutation `i -> (k*i + b) mod n`.
///
/// The map is a bijection on `[0, n)` exactly when `gcd(k, n) = 1`;
/// check with [`affine_valid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub k: usize,
    pub b: usize,
    pub n: usize,
}

/// Sub-array lengths for splitting `size` elements by index parity.
///
/// Even sizes split in half; odd sizes give the even-index sub-array one
/// extra slot. The two lengths always sum to `size`.
pub fn split_sizes(size: usize) -> Result<(usize, usize)> {
    if size == 0 {
        return Err(Error::ZeroSize);
    }
    if size % 2 == 0 {
        Ok((size / 2, size / 2))
    } else {
        let first = size / 2 + 1;
        Ok((first, size - first))
    }
}

/// Maps a logical position onto the split layout: even positions go to
/// the first sub-array, odd to the second, both at offset `pos / 2`.
pub fn split_locate(pos: usize, size: usize) -> Result<SplitLocation> {
    if size == 0 {
        return Err(Error::ZeroSize);
    }
    if pos >= size {
        return Err(Error::OutOfBounds {
            index: pos,
            len: size,
        });
    }
    let half = if pos % 2 == 0 { Half::First } else { Half::Second };
    Ok(SplitLocation {
        half,
        offset: pos / 2,
    })
}

/// Maps a position in a merged array back onto its two sources.
///
/// The first `2 * min(len_a, len_b)` positions interleave A and B
/// (even -> A, odd -> B); the remaining positions run in order through
/// the tail of the longer source. Exact inverse of the parity split, so
/// split-then-merge round-trips.
pub fn merge_locate(pos: usize, len_a: usize, len_b: usize) -> Result<(MergeSource, usize)> {
    let total = len_a + len_b;
    if pos >= total {
        return Err(Error::OutOfBounds {
            index: pos,
            len: total,
        });
    }
    let shorter = len_a.min(len_b);
    let interleaved = 2 * shorter;
    if pos < interleaved {
        let source = if pos % 2 == 0 { MergeSource::A } else { MergeSource::B };
        Ok((source, pos / 2))
    } else {
        let tail_offset = shorter + (pos - interleaved);
        if len_a > len_b {
            Ok((MergeSource::A, tail_offset))
        } else {
            Ok((MergeSource::B, tail_offset))
        }
    }
}

/// Chooses a 2-D shape for folding a 1-D array of `size` elements.
///
/// `cols` is the hint if given, otherwise the smallest value whose square
/// covers `size` (a near-square shape); `rows` is the smallest row count
/// that makes `rows * cols >= size`.
pub fn fold_dims(size: usize, cols_hint: Option<usize>) -> Result<Dim2> {
    if size == 0 {
        return Err(Error::ZeroSize);
    }
    let cols = match cols_hint {
        Some(0) => return Err(Error::ZeroSize),
        Some(c) => c,
        None => ceil_sqrt(size),
    };
    let rows = size.div_ceil(cols);
    Ok(Dim2 { rows, cols })
}

/// Row-major position of a 1-D index inside a folded 2-D backing.
pub fn fold_locate(pos: usize, dims: Dim2) -> Result<(usize, usize)> {
    if pos >= dims.cells() {
        return Err(Error::OutOfBounds {
            index: pos,
            len: dims.cells(),
        });
    }
    Ok((pos / dims.cols, pos % dims.cols))
}

/// Row-major 1-D index of a 2-D coordinate; exact inverse of
/// [`fold_locate`] over `[0, rows*cols)`.
pub fn flatten_locate(row: usize, col: usize, dims: Dim2) -> Result<usize> {
    if row >= dims.rows || col >= dims.cols {
        return Err(Error::OutOfBounds2 {
            row,
            col,
            rows: dims.rows,
            cols: dims.cols,
        });
    }
    Ok(row * dims.cols + col)
}

/// Applies the permutation `(k*i + b) mod n`.
pub fn affine_index(i: usize, map: AffineMap) -> Result<usize> {
    if map.n == 0 {
        return Err(Error::ZeroSize);
    }
    if i >= map.n {
        return Err(Error::OutOfBounds {
            index: i,
            len: map.n,
        });
    }
    let v = (map.k as u128 * i as u128 + map.b as u128) % map.n as u128;
    Ok(v as usize)
}

/// True when the map is a bijection on `[0, n)`, i.e. `gcd(k, n) = 1`.
pub fn affine_valid(map: AffineMap) -> bool {
    map.n != 0 && gcd(map.k, map.n) == 1
}

/// The map that undoes `map`: composing the two is the identity on
/// `[0, n)`. Errors when `map` is not a bijection.
pub fn affine_inverse(map: AffineMap) -> Result<AffineMap> {
    if !affine_valid(map) {
        return Err(Error::NotInvertible { k: map.k, n: map.n });
    }
    if map.n == 1 {
        return Ok(AffineMap { k: 1, b: 0, n: 1 });
    }
    let k_inv = mod_inverse(map.k % map.n, map.n);
    // Solve k_inv * (k*i + b) + b' = i (mod n)  =>  b' = -k_inv * b (mod n)
    let b_inv = (map.n - ((k_inv as u128 * (map.b % map.n) as u128) % map.n as u128) as usize) % map.n;
    Ok(AffineMap {
        k: k_inv,
        b: b_inv,
        n: map.n,
    })
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Multiplicative inverse of `a` mod `n` for gcd(a, n) = 1, n > 1.
fn mod_inverse(a: usize, n: usize) -> usize {
    // Extended Euclid on (a, n); coefficients tracked in i128.
    let (mut old_r, mut r) = (a as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(n as i128) as usize
}

/// Smallest integer whose square is at least `n`.
fn ceil_sqrt(n: usize) -> usize {
    if n <= 1 {
        return n;
    }
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_sizes_even_and_odd() {
        assert_eq!(split_sizes(100000).unwrap(), (50000, 50000));
        assert_eq!(split_sizes(23).unwrap(), (12, 11));
        assert_eq!(split_sizes(1).unwrap(), (1, 0));
        assert!(matches!(split_sizes(0), Err(Error::ZeroSize)));
    }

    #[test]
    fn split_locate_examples() {
        assert_eq!(
            split_locate(0, 23).unwrap(),
            SplitLocation { half: Half::First, offset: 0 }
        );
        assert_eq!(
            split_locate(5, 23).unwrap(),
            SplitLocation { half: Half::Second, offset: 2 }
        );
        assert_eq!(
            split_locate(22, 23).unwrap(),
            SplitLocation { half: Half::First, offset: 11 }
        );
        assert!(matches!(split_locate(23, 23), Err(Error::OutOfBounds { .. })));
    }

    #[test]
    fn split_locate_matches_flat_reference() {
        // Brute-force oracle: write p at logical p through the split layout
        // and read the halves back in even/odd order.
        for size in 1..=64usize {
            let (first_len, second_len) = split_sizes(size).unwrap();
            let mut first = vec![usize::MAX; first_len];
            let mut second = vec![usize::MAX; second_len];
            for p in 0..size {
                let loc = split_locate(p, size).unwrap();
                match loc.half {
                    Half::First => first[loc.offset] = p,
                    Half::Second => second[loc.offset] = p,
                }
            }
            let evens: Vec<usize> = (0..size).step_by(2).collect();
            let odds: Vec<usize> = (1..size).step_by(2).collect();
            assert_eq!(first, evens, "size {size}");
            assert_eq!(second, odds, "size {size}");
        }
    }

    /// Oracle: build the merged order explicitly — alternate while both
    /// sources have elements, then append the longer one's tail.
    fn merged_order(len_a: usize, len_b: usize) -> Vec<(MergeSource, usize)> {
        let mut out = Vec::with_capacity(len_a + len_b);
        let (mut ia, mut ib) = (0, 0);
        while ia < len_a && ib < len_b {
            out.push((MergeSource::A, ia));
            ia += 1;
            out.push((MergeSource::B, ib));
            ib += 1;
        }
        while ia < len_a {
            out.push((MergeSource::A, ia));
            ia += 1;
        }
        while ib < len_b {
            out.push((MergeSource::B, ib));
            ib += 1;
        }
        out
    }

    #[test]
    fn merge_locate_examples() {
        assert_eq!(merge_locate(0, 3, 3).unwrap(), (MergeSource::A, 0));
        assert_eq!(merge_locate(3, 3, 3).unwrap(), (MergeSource::B, 1));
        assert_eq!(merge_locate(5, 2, 4).unwrap(), (MergeSource::B, 3));
        assert!(matches!(merge_locate(6, 3, 3), Err(Error::OutOfBounds { .. })));
    }

    #[test]
    fn merge_locate_matches_enumeration() {
        for len_a in 0..=12 {
            for len_b in 0..=12 {
                let expect = merged_order(len_a, len_b);
                for (pos, want) in expect.iter().enumerate() {
                    assert_eq!(
                        merge_locate(pos, len_a, len_b).unwrap(),
                        *want,
                        "pos {pos} of {len_a}+{len_b}"
                    );
                }
            }
        }
    }

    #[test]
    fn fold_dims_examples() {
        assert_eq!(fold_dims(4, None).unwrap(), Dim2 { rows: 2, cols: 2 });
        assert_eq!(fold_dims(100000, None).unwrap(), Dim2 { rows: 316, cols: 317 });
        assert_eq!(fold_dims(5, Some(2)).unwrap(), Dim2 { rows: 3, cols: 2 });
        assert!(matches!(fold_dims(0, None), Err(Error::ZeroSize)));
        assert!(matches!(fold_dims(5, Some(0)), Err(Error::ZeroSize)));
    }

    #[test]
    fn fold_dims_bounds_hold() {
        // rows*cols covers size, and one row fewer would not.
        for size in 1..=2000usize {
            let d = fold_dims(size, None).unwrap();
            assert!(d.cells() >= size, "size {size}");
            assert!((d.rows - 1) * d.cols < size, "size {size}");
        }
    }

    #[test]
    fn fold_and_flatten_locate_examples() {
        let d = Dim2 { rows: 3, cols: 2 };
        assert_eq!(fold_locate(0, d).unwrap(), (0, 0));
        assert_eq!(fold_locate(5, d).unwrap(), (2, 1));
        let wide = Dim2 { rows: 500, cols: 200 };
        assert_eq!(fold_locate(202, wide).unwrap(), (1, 2));
        assert_eq!(flatten_locate(0, 0, wide).unwrap(), 0);
        assert_eq!(flatten_locate(1, 2, wide).unwrap(), 202);
        assert_eq!(flatten_locate(499, 199, wide).unwrap(), 99999);
        assert!(matches!(fold_locate(6, d), Err(Error::OutOfBounds { .. })));
        assert!(matches!(flatten_locate(3, 0, d), Err(Error::OutOfBounds2 { .. })));
    }

    #[test]
    fn affine_index_examples() {
        let fig_map = AffineMap { k: 3, b: 0, n: 100 };
        assert_eq!(affine_index(1, fig_map).unwrap(), 3);
        assert_eq!(affine_index(0, fig_map).unwrap(), 0);
        let shifted = AffineMap { k: 2, b: 3, n: 101 };
        assert_eq!(affine_index(2, shifted).unwrap(), 7);
        assert!(matches!(
            affine_index(100, fig_map),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn affine_valid_by_enumeration() {
        // Validity must agree with the image actually being a permutation.
        for (k, n, want) in [(3, 100, true), (2, 100, false), (1, 7, true)] {
            let map = AffineMap { k, b: 0, n };
            assert_eq!(affine_valid(map), want);
            let mut seen = vec![false; n];
            let mut collision = false;
            for i in 0..n {
                let v = affine_index(i, map).unwrap();
                if seen[v] {
                    collision = true;
                }
                seen[v] = true;
            }
            assert_eq!(!collision && seen.iter().all(|&s| s), want);
        }
    }

    #[test]
    fn affine_inverse_round_trips() {
        let cases = [
            AffineMap { k: 3, b: 0, n: 100 },
            AffineMap { k: 1, b: 0, n: 9 },
            AffineMap { k: 2, b: 3, n: 101 },
            AffineMap { k: 7, b: 5, n: 12 },
            AffineMap { k: 67, b: 99, n: 100 },
        ];
        for map in cases {
            let inv = affine_inverse(map).unwrap();
            for i in 0..map.n {
                let there = affine_index(i, map).unwrap();
                assert_eq!(affine_index(there, inv).unwrap(), i, "map {map:?}");
            }
        }
        assert_eq!(
            affine_inverse(AffineMap { k: 3, b: 0, n: 100 }).unwrap(),
            AffineMap { k: 67, b: 0, n: 100 }
        );
        assert_eq!(
            affine_inverse(AffineMap { k: 1, b: 0, n: 9 }).unwrap(),
            AffineMap { k: 1, b: 0, n: 9 }
        );
        let inv = affine_inverse(AffineMap { k: 2, b: 3, n: 101 }).unwrap();
        assert_eq!(inv.k, 51);
        assert!(matches!(
            affine_inverse(AffineMap { k: 2, b: 0, n: 100 }),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn ceil_sqrt_exact() {
        for n in 1..=100_000usize {
            let r = ceil_sqrt(n);
            assert!(r * r >= n);
            assert!((r - 1) * (r - 1) < n);
        }
    }
}
