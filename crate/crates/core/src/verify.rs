//! Brute-force ground truth: triangle-freeness, independence and triangle
//! counts, over explicit vertex sets and over the whole cube.

use serde::Serialize;

use crate::bounds::binomial_u128;
use crate::cube::{Params, Vertex, VertexSet, WeightMasks};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    Edge,
    Triangle,
}

/// A witness that a set lacks a property: two members at distance exactly
/// `r`, or three members pairwise at distance `r`. Witnesses are ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witnesses: Vec<Vertex>,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            ViolationKind::Edge => "edge",
            ViolationKind::Triangle => "triangle",
        };
        write!(f, "{kind}:")?;
        for w in &self.witnesses {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Violated(Violation),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Verdict::Ok => None,
            Verdict::Violated(v) => Some(v),
        }
    }
}

/// Caps on whole-cube enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_dimension: u32,
    /// Upper limit on `2^n * C(n, r)^2`, the distance tests the whole-cube
    /// triangle count performs.
    pub max_work: u128,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_dimension: 20,
            max_work: 1 << 33,
        }
    }
}

fn check_set_dim(set: &VertexSet, params: &Params) -> Result<()> {
    if set.dim() != params.n {
        return Err(Error::DimensionMismatch {
            expected: params.n,
            found: set.dim(),
        });
    }
    Ok(())
}

/// Members of `set` greater than `u` at distance exactly `r` from it,
/// ascending. Scans members or flips masks, whichever is fewer.
pub(crate) fn upper_neighbors_in(set: &VertexSet, u: u64, r: u32) -> Vec<u64> {
    let n = set.dim();
    let degree = binomial_u128(n, r);
    if (set.len() as u128) <= degree {
        let start = set.members().partition_point(|v| v.bits() <= u);
        set.members()[start..]
            .iter()
            .map(|v| v.bits())
            .filter(|&b| (b ^ u).count_ones() == r)
            .collect()
    } else {
        let mut out: Vec<u64> = WeightMasks::new(n, r)
            .map(|m| u ^ m)
            .filter(|&b| b > u && set.contains_bits(b))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Calls `visit(u, v, w)` for every triangle `u < v < w` of `set`, in
/// ascending lexicographic order; stops early when `visit` returns `false`.
pub(crate) fn for_each_triangle<F>(set: &VertexSet, r: u32, mut visit: F)
where
    F: FnMut(u64, u64, u64) -> bool,
{
    for u in set.iter().map(Vertex::bits) {
        let nbrs = upper_neighbors_in(set, u, r);
        for (i, &v) in nbrs.iter().enumerate() {
            for &w in &nbrs[i + 1..] {
                if (v ^ w).count_ones() == r && !visit(u, v, w) {
                    return;
                }
            }
        }
    }
}

/// `Ok` iff no three members are pairwise at distance `r`; otherwise the
/// least violating triple in ascending order.
pub fn check_triangle_free(set: &VertexSet, params: &Params) -> Result<Verdict> {
    check_set_dim(set, params)?;
    let mut found = None;
    for_each_triangle(set, params.r, |u, v, w| {
        found = Some([u, v, w]);
        false
    });
    Ok(match found {
        None => Verdict::Ok,
        Some(t) => Verdict::Violated(Violation {
            kind: ViolationKind::Triangle,
            witnesses: t.iter().map(|&b| Vertex::from_raw(b, params.n)).collect(),
        }),
    })
}

/// `Ok` iff no two members are at distance exactly `r`; otherwise the least
/// violating pair.
pub fn check_independent(set: &VertexSet, params: &Params) -> Result<Verdict> {
    check_set_dim(set, params)?;
    for u in set.iter().map(Vertex::bits) {
        if let Some(&v) = upper_neighbors_in(set, u, params.r).first() {
            return Ok(Verdict::Violated(Violation {
                kind: ViolationKind::Edge,
                witnesses: vec![
                    Vertex::from_raw(u, params.n),
                    Vertex::from_raw(v, params.n),
                ],
            }));
        }
    }
    Ok(Verdict::Ok)
}

/// Triangles of the whole `r`-distance graph, counted as the sum over edges
/// of common neighbours, divided by three.
pub fn count_triangles_graph(params: &Params) -> Result<u128> {
    count_triangles_graph_with(params, &EnumerationLimits::default())
}

pub fn count_triangles_graph_with(params: &Params, limits: &EnumerationLimits) -> Result<u128> {
    let n = params.n;
    let r = params.r;
    let degree = binomial_u128(n, r);
    let work = (1u128 << n).saturating_mul(degree.saturating_mul(degree));
    if n > limits.max_dimension || work > limits.max_work {
        return Err(Error::TooLarge(format!(
            "n={n}, r={r} needs {work} distance tests (limit n<={}, {} tests)",
            limits.max_dimension, limits.max_work
        )));
    }
    let masks: Vec<u64> = WeightMasks::new(n, r).collect();
    let mut total: u128 = 0;
    for u in 0..(1u64 << n) {
        for &m in &masks {
            let v = u ^ m;
            if v < u {
                continue;
            }
            // common neighbours w = u ^ m2 with d(v, w) = r
            total += masks
                .iter()
                .filter(|&&m2| (m ^ m2).count_ones() == r)
                .count() as u128;
        }
    }
    debug_assert_eq!(total % 3, 0);
    Ok(total / 3)
}

pub fn count_triangles_in_set(set: &VertexSet, params: &Params) -> Result<u128> {
    check_set_dim(set, params)?;
    let mut count = 0u128;
    for_each_triangle(set, params.r, |_, _, _| {
        count += 1;
        true
    });
    Ok(count)
}
