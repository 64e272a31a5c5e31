//! Hypercube vertices, Hamming distance, the r-distance adjacency and the
//! level/shadow/cover structure.
//!
//! Coordinate `i` (1-based) of a vertex lives at bit `i - 1` of its mask. When
//! a vertex is printed as a 0–1 string, coordinate 1 is the leftmost
//! character, so `"100"` is the mask `0b001`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension a [`Vertex`] can hold (one machine word).
pub const N_MAX: u32 = 64;

/// Sets over at most this many coordinates index membership with a dense
/// bitmap over all `2^n` positions; larger ones fall back to hashing.
const DENSE_MEMBERSHIP_MAX_N: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `r` even and `2 <= r <= floor(2n/3)`.
    #[default]
    Strict,
    /// Any `1 <= r <= n`.
    Exploratory,
}

/// An instance: the dimension `n` of the cube and the distance `r` that
/// defines adjacency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub n: u32,
    pub r: u32,
    pub mode: Mode,
}

impl Params {
    pub fn new(n: u32, r: u32) -> Result<Self> {
        Self::with_mode(n, r, Mode::Strict)
    }

    pub fn exploratory(n: u32, r: u32) -> Result<Self> {
        Self::with_mode(n, r, Mode::Exploratory)
    }

    pub fn with_mode(n: u32, r: u32, mode: Mode) -> Result<Self> {
        if n == 0 || n > N_MAX {
            return Err(Error::Dimension(n));
        }
        let bad = |reason| Err(Error::Distance { n, r, reason });
        match mode {
            Mode::Strict => {
                if !r.is_multiple_of(2) {
                    return bad("r must be even");
                }
                if r < 2 {
                    return bad("r must be at least 2");
                }
                if 3 * r > 2 * n {
                    return bad("r must not exceed 2n/3");
                }
            }
            Mode::Exploratory => {
                if r == 0 || r > n {
                    return bad("r must lie in 1..=n");
                }
            }
        }
        Ok(Params { n, r, mode })
    }

    /// `r / 2`; only meaningful for even `r`.
    pub fn half_r(&self) -> u32 {
        self.r / 2
    }

    pub fn is_even(&self) -> bool {
        self.r.is_multiple_of(2)
    }

    /// Whether `(n, r)` satisfies the strict rules regardless of the mode
    /// this value was built with.
    pub fn is_strictly_valid(&self) -> bool {
        Params::new(self.n, self.r).is_ok()
    }

    /// `2r <= n`, the range where the level-sum upper bound holds.
    pub fn upper_bound_range(&self) -> bool {
        2 * self.r <= self.n
    }

    pub fn vertex_count(&self) -> u128 {
        1u128 << self.n
    }
}

/// All strictly valid `(n, r)` pairs with `n` in the given range, in
/// ascending `(n, r)` order.
pub fn valid_grid(ns: std::ops::RangeInclusive<u32>) -> Vec<Params> {
    ns.flat_map(|n| {
        (2..=n)
            .step_by(2)
            .filter_map(move |r| Params::new(n, r).ok())
    })
    .collect()
}

/// A vertex of the `n`-cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    bits: u64,
    dim: u8,
}

impl Vertex {
    pub fn new(bits: u64, n: u32) -> Result<Self> {
        if n == 0 || n > N_MAX {
            return Err(Error::Dimension(n));
        }
        if bits & !width_mask(n) != 0 {
            return Err(Error::TooLarge(format!(
                "mask {bits:#x} has bits outside {n} coordinates"
            )));
        }
        Ok(Vertex { bits, dim: n as u8 })
    }

    /// Builds a vertex without range checks; callers guarantee `bits < 2^n`.
    pub(crate) fn from_raw(bits: u64, n: u32) -> Self {
        debug_assert!(bits & !width_mask(n) == 0);
        Vertex { bits, dim: n as u8 }
    }

    pub fn zero(n: u32) -> Result<Self> {
        Vertex::new(0, n)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn dim(&self) -> u32 {
        u32::from(self.dim)
    }

    /// Value of coordinate `i` (1-based).
    pub fn coordinate(&self, i: u32) -> bool {
        (self.bits >> (i - 1)) & 1 == 1
    }

    pub fn translate(&self, mask: u64) -> Vertex {
        Vertex::from_raw(self.bits ^ (mask & width_mask(self.dim())), self.dim())
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            f.write_str(if (self.bits >> i) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.len() as u32;
        if n == 0 || n > N_MAX {
            return Err(Error::Dimension(n));
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        Ok(Vertex::from_raw(bits, n))
    }
}

pub(crate) fn width_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn same_dim(u: &Vertex, v: &Vertex) -> Result<()> {
    if u.dim != v.dim {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(())
}

fn check_dim(v: &Vertex, n: u32) -> Result<()> {
    if v.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.dim(),
        });
    }
    Ok(())
}

pub fn hamming_distance(u: &Vertex, v: &Vertex) -> Result<u32> {
    same_dim(u, v)?;
    Ok((u.bits ^ v.bits).count_ones())
}

/// Number of ones in `v`.
pub fn level(v: &Vertex) -> u32 {
    v.bits.count_ones()
}

/// Every `n`-bit mask with exactly `weight` ones, ascending.
#[derive(Debug, Clone)]
pub struct WeightMasks {
    next: Option<u128>,
    limit: u128,
}

impl WeightMasks {
    pub fn new(n: u32, weight: u32) -> Self {
        let limit = 1u128 << n;
        let next = if weight > n {
            None
        } else {
            Some((1u128 << weight) - 1)
        };
        WeightMasks { next, limit }
    }
}

impl Iterator for WeightMasks {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let x = self.next?;
        self.next = if x == 0 {
            None
        } else {
            // Gosper's hack: next larger integer with the same popcount.
            let low = x & x.wrapping_neg();
            let ripple = x + low;
            let succ = (((ripple ^ x) >> 2) / low) | ripple;
            (succ < self.limit).then_some(succ)
        };
        Some(x as u64)
    }
}

/// Scatters the low bits of `compact` into the set positions of `positions`
/// (a software `pdep`).
fn deposit(mut compact: u64, mut positions: u64) -> u64 {
    let mut out = 0;
    while positions != 0 && compact != 0 {
        let low = positions & positions.wrapping_neg();
        if compact & 1 == 1 {
            out |= low;
        }
        compact >>= 1;
        positions ^= low;
    }
    out
}

/// The vertices at distance exactly `params.r` from `v`, ascending.
pub fn r_neighbors(v: &Vertex, params: &Params) -> Result<Vec<Vertex>> {
    check_dim(v, params.n)?;
    let mut out: Vec<Vertex> = WeightMasks::new(params.n, params.r)
        .map(|m| Vertex::from_raw(v.bits ^ m, params.n))
        .collect();
    out.sort_unstable();
    Ok(out)
}

pub fn is_triangle(u: &Vertex, v: &Vertex, w: &Vertex, params: &Params) -> Result<bool> {
    check_dim(u, params.n)?;
    same_dim(u, v)?;
    same_dim(u, w)?;
    if u == v || v == w || u == w {
        return Err(Error::NonDistinct);
    }
    let r = params.r;
    Ok((u.bits ^ v.bits).count_ones() == r
        && (v.bits ^ w.bits).count_ones() == r
        && (u.bits ^ w.bits).count_ones() == r)
}

/// Vertices obtained by clearing exactly `depth` ones of `v`, ascending.
pub fn shadows(v: &Vertex, depth: u32) -> Result<Vec<Vertex>> {
    let ones = level(v);
    if depth > ones {
        return Err(Error::Depth {
            depth,
            available: ones,
        });
    }
    let mut out: Vec<Vertex> = WeightMasks::new(ones, depth)
        .map(|m| Vertex::from_raw(v.bits ^ deposit(m, v.bits), v.dim()))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Vertices obtained by setting exactly `depth` zeros of `v`, ascending.
pub fn covers(v: &Vertex, depth: u32, params: &Params) -> Result<Vec<Vertex>> {
    check_dim(v, params.n)?;
    let zeros_mask = !v.bits & width_mask(params.n);
    let zeros = zeros_mask.count_ones();
    if depth > zeros {
        return Err(Error::Depth {
            depth,
            available: zeros,
        });
    }
    let mut out: Vec<Vertex> = WeightMasks::new(zeros, depth)
        .map(|m| Vertex::from_raw(v.bits | deposit(m, zeros_mask), params.n))
        .collect();
    out.sort_unstable();
    Ok(out)
}

#[derive(Debug, Clone)]
enum Membership {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

impl Membership {
    fn build(n: u32, members: &[Vertex]) -> Self {
        if n <= DENSE_MEMBERSHIP_MAX_N {
            let mut words = vec![0u64; (1usize << n).div_ceil(64)];
            for v in members {
                words[(v.bits >> 6) as usize] |= 1 << (v.bits & 63);
            }
            Membership::Dense(words)
        } else {
            Membership::Sparse(members.iter().map(|v| v.bits).collect())
        }
    }

    fn contains(&self, bits: u64) -> bool {
        match self {
            Membership::Dense(words) => words
                .get((bits >> 6) as usize)
                .is_some_and(|w| (w >> (bits & 63)) & 1 == 1),
            Membership::Sparse(set) => set.contains(&bits),
        }
    }
}

/// A duplicate-free, ascending set of vertices of one `n`-cube with
/// constant-time membership.
#[derive(Debug, Clone)]
pub struct VertexSet {
    n: u32,
    members: Vec<Vertex>,
    index: Membership,
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.members == other.members
    }
}

impl Eq for VertexSet {}

impl VertexSet {
    pub fn empty(n: u32) -> Result<Self> {
        Self::from_vertices(n, Vec::new())
    }

    /// Sorts and deduplicates `members`.
    pub fn from_vertices(n: u32, mut members: Vec<Vertex>) -> Result<Self> {
        if n == 0 || n > N_MAX {
            return Err(Error::Dimension(n));
        }
        for v in &members {
            check_dim(v, n)?;
        }
        members.sort_unstable();
        members.dedup();
        let index = Membership::build(n, &members);
        Ok(VertexSet { n, members, index })
    }

    pub fn from_bits<I: IntoIterator<Item = u64>>(n: u32, bits: I) -> Result<Self> {
        let members = bits
            .into_iter()
            .map(|b| Vertex::new(b, n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_vertices(n, members)
    }

    /// Every vertex of the `n`-cube.
    pub fn full(n: u32) -> Result<Self> {
        if n > DENSE_MEMBERSHIP_MAX_N {
            return Err(Error::TooLarge(format!("2^{n} vertices")));
        }
        Self::from_bits(n, 0..(1u64 << n))
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vertex> {
        self.members.iter()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        v.dim() == self.n && self.index.contains(v.bits)
    }

    pub fn contains_bits(&self, bits: u64) -> bool {
        self.index.contains(bits)
    }

    pub fn translate(&self, mask: u64) -> VertexSet {
        let moved = self.members.iter().map(|v| v.translate(mask)).collect();
        VertexSet::from_vertices(self.n, moved).expect("translation preserves dimension")
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Vertex;
    type IntoIter = std::slice::Iter<'a, Vertex>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    fn strs(vs: &[Vertex]) -> Vec<String> {
        vs.iter().map(|x| x.to_string()).collect()
    }

    fn sorted(mut xs: Vec<&str>) -> Vec<String> {
        let mut vs: Vec<Vertex> = xs.drain(..).map(v).collect();
        vs.sort();
        strs(&vs)
    }

    #[test]
    fn params_rules() {
        assert!(Params::new(6, 2).is_ok());
        assert!(Params::new(6, 4).is_ok());
        assert!(Params::new(6, 3).is_err());
        assert!(Params::new(6, 6).is_err());
        assert!(Params::new(3, 2).is_ok());
        assert!(Params::new(2, 2).is_err());
        assert!(Params::exploratory(2, 2).is_ok());
        assert!(Params::exploratory(5, 3).is_ok());
        assert!(Params::exploratory(5, 6).is_err());
        assert!(Params::new(0, 2).is_err());
        assert!(Params::new(65, 2).is_err());
        assert!(Params::new(64, 42).is_ok());
    }

    #[test]
    fn coordinate_one_is_leftmost() {
        let x = v("100");
        assert_eq!(x.bits(), 1);
        assert!(x.coordinate(1));
        assert_eq!(x.to_string(), "100");
        assert_eq!(v("010110").to_string(), "010110");
        assert!("01a".parse::<Vertex>().is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hamming_distance(&v("0110"), &v("0110")).unwrap(), 0);
        assert_eq!(hamming_distance(&v("000"), &v("111")).unwrap(), 3);
        assert_eq!(hamming_distance(&v("010110"), &v("011001")).unwrap(), 4);
        assert!(matches!(
            hamming_distance(&v("00"), &v("000")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn neighbor_examples() {
        let p = Params::exploratory(3, 2).unwrap();
        assert_eq!(
            strs(&r_neighbors(&v("000"), &p).unwrap()),
            sorted(vec!["011", "101", "110"])
        );
        let p = Params::new(6, 2).unwrap();
        assert_eq!(r_neighbors(&v("101100"), &p).unwrap().len(), 15);
        let p = Params::exploratory(4, 4).unwrap();
        assert_eq!(strs(&r_neighbors(&v("0000"), &p).unwrap()), vec!["1111"]);
    }

    #[test]
    fn triangle_examples() {
        let p = Params::new(3, 2).unwrap();
        assert!(is_triangle(&v("110"), &v("101"), &v("011"), &p).unwrap());
        assert!(!is_triangle(&v("000"), &v("011"), &v("111"), &p).unwrap());
        assert!(is_triangle(&v("000"), &v("110"), &v("101"), &p).unwrap());
        assert_eq!(
            is_triangle(&v("000"), &v("000"), &v("101"), &p),
            Err(Error::NonDistinct)
        );
    }

    #[test]
    fn level_examples() {
        assert_eq!(level(&v("000000")), 0);
        assert_eq!(level(&v("010110")), 3);
        assert_eq!(level(&v("111")), 3);
    }

    #[test]
    fn shadow_and_cover_examples() {
        assert_eq!(
            strs(&shadows(&v("110"), 1).unwrap()),
            sorted(vec!["010", "100"])
        );
        assert_eq!(
            strs(&shadows(&v("1110"), 2).unwrap()),
            sorted(vec!["0010", "0100", "1000"])
        );
        assert_eq!(strs(&shadows(&v("1011"), 3).unwrap()), vec!["0000"]);
        assert!(shadows(&v("100"), 2).is_err());

        let p3 = Params::exploratory(3, 2).unwrap();
        assert_eq!(
            strs(&covers(&v("010"), 1, &p3).unwrap()),
            sorted(vec!["011", "110"])
        );
        assert_eq!(strs(&covers(&v("000"), 3, &p3).unwrap()), vec!["111"]);
        let p4 = Params::exploratory(4, 2).unwrap();
        assert_eq!(strs(&covers(&v("0101"), 2, &p4).unwrap()), vec!["1111"]);
        assert!(covers(&v("0101"), 3, &p4).is_err());
    }

    #[test]
    fn weight_masks_full_width() {
        assert_eq!(WeightMasks::new(64, 64).collect::<Vec<_>>(), vec![u64::MAX]);
        assert_eq!(WeightMasks::new(64, 1).count(), 64);
        assert_eq!(WeightMasks::new(5, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(WeightMasks::new(3, 4).count(), 0);
        let masks: Vec<u64> = WeightMasks::new(10, 4).collect();
        assert_eq!(masks.len(), 210);
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn vertex_set_dedups_and_sorts() {
        let s = VertexSet::from_bits(3, [5, 1, 5, 0]).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.contains_bits(5) && !s.contains_bits(2));
        assert!(VertexSet::from_bits(3, [8]).is_err());
        let big = VertexSet::from_bits(40, [1 << 39, 3]).unwrap();
        assert!(big.contains_bits(1 << 39) && !big.contains_bits(2));
    }

    #[test]
    fn valid_grid_lists_even_r_up_to_two_thirds() {
        let g: Vec<(u32, u32)> = valid_grid(2..=6).iter().map(|p| (p.n, p.r)).collect();
        assert_eq!(g, vec![(3, 2), (4, 2), (5, 2), (6, 2), (6, 4)]);
    }
}
