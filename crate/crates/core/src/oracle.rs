//! Exact maximum triangle-free subsets of small cubes by branch and bound,
//! and the sandwich report that sets them between constructions and bounds.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bounds::{self, REAL_TOLERANCE};
use crate::constructions::{self, SamplingPlan};
use crate::cube::{Params, Vertex, VertexSet, WeightMasks};
use crate::error::{Error, Result};

/// Largest dimension the search accepts at all; optimality is only
/// realistic far below it.
pub const ORACLE_MAX_DIMENSION: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: u64,
    pub time_budget: Option<Duration>,
    /// Fix the all-zeros vertex as included. Sound because translations of
    /// the cube act transitively on vertices.
    pub allow_symmetry: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: 200_000_000,
            time_budget: None,
            allow_symmetry: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub best_size: usize,
    pub witness: VertexSet,
    /// The search space was exhausted, so `best_size` is the maximum.
    pub optimal: bool,
    pub nodes: u64,
}

impl OracleResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "best_size": self.best_size,
            "optimal": self.optimal,
            "nodes": self.nodes,
            "witness": self.witness.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }
}

struct Search<'a> {
    n: u32,
    size: usize,
    neighbors: Vec<Vec<u32>>,
    r: u32,
    level_of: Vec<usize>,
    /// Per-level cap on members of any triangle-free set, when known.
    level_caps: Option<Vec<usize>>,
    in_set: Vec<bool>,
    forbid: Vec<u32>,
    chosen: Vec<u32>,
    chosen_per_level: Vec<usize>,
    undo: Vec<u32>,
    best: Vec<u32>,
    nodes: u64,
    aborted: bool,
    limits: &'a SearchLimits,
    deadline: Option<Instant>,
}

impl<'a> Search<'a> {
    fn new(params: &Params, limits: &'a SearchLimits) -> Result<Self> {
        let n = params.n;
        let size = 1usize << n;
        let masks: Vec<u64> = WeightMasks::new(n, params.r).collect();
        let neighbors = (0..size as u64)
            .map(|v| {
                let mut nb: Vec<u32> = masks.iter().map(|m| (v ^ m) as u32).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        let level_caps = if params.is_even() && params.upper_bound_range() {
            let caps = (0..=n)
                .map(|k| {
                    bounds::level_bound(params, k)
                        .map(|(b, _)| b.to_usize().unwrap_or(usize::MAX))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(caps)
        } else {
            None
        };
        Ok(Search {
            n,
            size,
            neighbors,
            r: params.r,
            level_of: (0..size as u64).map(|v| v.count_ones() as usize).collect(),
            level_caps,
            in_set: vec![false; size],
            forbid: vec![0; size],
            chosen: Vec::new(),
            chosen_per_level: vec![0; n as usize + 1],
            undo: Vec::new(),
            best: Vec::new(),
            nodes: 0,
            aborted: false,
            limits,
            deadline: limits.time_budget.map(|d| Instant::now() + d),
        })
    }

    fn include(&mut self, v: u32) -> usize {
        let mark = self.undo.len();
        let r = self.r;
        for &u in &self.neighbors[v as usize] {
            if !self.in_set[u as usize] {
                continue;
            }
            // u and v are adjacent and chosen: their common neighbours are out
            for &w in &self.neighbors[v as usize] {
                if (w ^ u).count_ones() == r {
                    self.forbid[w as usize] += 1;
                    self.undo.push(w);
                }
            }
        }
        self.in_set[v as usize] = true;
        self.chosen.push(v);
        self.chosen_per_level[self.level_of[v as usize]] += 1;
        mark
    }

    fn exclude_last(&mut self, mark: usize) {
        let v = self.chosen.pop().expect("chosen is non-empty");
        self.in_set[v as usize] = false;
        self.chosen_per_level[self.level_of[v as usize]] -= 1;
        for w in self.undo.drain(mark..) {
            self.forbid[w as usize] -= 1;
        }
    }

    /// Largest size any completion of the current partial set can reach.
    fn optimistic(&self, next: usize) -> usize {
        let mut per_level = vec![0usize; self.n as usize + 1];
        let mut open = 0;
        for v in next..self.size {
            if self.forbid[v] == 0 {
                per_level[self.level_of[v]] += 1;
                open += 1;
            }
        }
        let plain = self.chosen.len() + open;
        match &self.level_caps {
            None => plain,
            Some(caps) => {
                let capped: usize = per_level
                    .iter()
                    .zip(caps)
                    .zip(&self.chosen_per_level)
                    .map(|((&avail, &cap), &taken)| avail.min(cap.saturating_sub(taken)))
                    .sum();
                plain.min(self.chosen.len() + capped)
            }
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            self.aborted = true;
        } else if let Some(deadline) = self.deadline {
            if self.nodes.is_multiple_of(1024) && Instant::now() >= deadline {
                self.aborted = true;
            }
        }
        !self.aborted
    }

    fn run(&mut self, next: usize) {
        if !self.tick() {
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if next == self.size || self.optimistic(next) <= self.best.len() {
            return;
        }
        if self.forbid[next] == 0 {
            let mark = self.include(next as u32);
            self.run(next + 1);
            self.exclude_last(mark);
            if self.aborted {
                return;
            }
        }
        let pinned = next == 0 && self.limits.allow_symmetry;
        if !pinned {
            self.run(next + 1);
        }
    }
}

/// Depth-first include/exclude search over vertices in ascending order.
///
/// Prunes a branch when the open (non-forbidden) vertices cannot lift it
/// above the incumbent, and for `2r <= n` when the per-level caps from
/// [`bounds::level_bound`] cannot. Running out of budget returns the
/// incumbent with `optimal = false`.
pub fn max_triangle_free_exact(params: &Params, limits: &SearchLimits) -> Result<OracleResult> {
    if params.n > ORACLE_MAX_DIMENSION {
        return Err(Error::TooLarge(format!(
            "oracle search needs n <= {ORACLE_MAX_DIMENSION}, got {}",
            params.n
        )));
    }
    let mut search = Search::new(params, limits)?;
    search.run(0);
    let witness = VertexSet::from_vertices(
        params.n,
        search
            .best
            .iter()
            .map(|&b| Vertex::from_raw(u64::from(b), params.n))
            .collect(),
    )?;
    Ok(OracleResult {
        best_size: witness.len(),
        witness,
        optimal: !search.aborted,
        nodes: search.nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichCheck {
    pub claim: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub best_size: usize,
    pub optimal: bool,
    pub nodes: u64,
}

/// Constructions, lower bound, oracle and upper bounds for one instance,
/// with every comparison between them that must hold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub n: u32,
    pub r: u32,
    pub constructions: Vec<(String, usize)>,
    pub lower_probabilistic: Option<f64>,
    pub oracle: Option<OracleSummary>,
    pub upper_r2: Option<String>,
    pub upper_level_sum: Option<String>,
    pub checks: Vec<SandwichCheck>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn to_table_row(&self) -> String {
        let mut row = format!("{:>3} {:>3}", self.n, self.r);
        let cons: Vec<String> = self
            .constructions
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(row, "  {:<40}", cons.join(" ")).unwrap();
        match self.lower_probabilistic {
            Some(l) => write!(row, " {l:>12.3}").unwrap(),
            None => write!(row, " {:>12}", "-").unwrap(),
        }
        match &self.oracle {
            Some(o) => write!(row, " {:>8}{}", o.best_size, if o.optimal { "" } else { "+" }).unwrap(),
            None => write!(row, " {:>8}", "-").unwrap(),
        }
        let dash = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
        write!(
            row,
            " {:>10} {:>12}  {}",
            dash(&self.upper_r2),
            dash(&self.upper_level_sum),
            if self.holds() { "ok" } else { "VIOLATED" }
        )
        .unwrap();
        row
    }

    pub fn table_header() -> String {
        format!(
            "{:>3} {:>3}  {:<40} {:>12} {:>8} {:>10} {:>12}  {}",
            "n", "r", "constructions", "lower_prob", "oracle", "upper_r2", "upper_level", "status"
        )
    }
}

/// Builds the sandwich for `params`. Constructions are materialized only
/// when small, and the oracle only runs when `params.n <= oracle_max_n`.
pub fn sandwich_report(params: &Params, limits: &SearchLimits, oracle_max_n: u32) -> SandwichReport {
    let mut cons = Vec::new();
    if params.is_even() {
        if let Some(p) = constructions::select_antipodal_prime(params.n, params.r) {
            if let Ok(s) = constructions::antipodal_construction(params.n, p, params.r) {
                cons.push(("antipodal".to_string(), s.len()));
            }
        }
        if let Ok(s) = constructions::fixed_bit_construction(params) {
            cons.push(("fixed_bit".to_string(), s.len()));
        }
    }
    if params.n <= ORACLE_MAX_DIMENSION {
        if let Ok((s, _)) = constructions::alteration_construction(params, &SamplingPlan::default()) {
            cons.push(("alteration".to_string(), s.len()));
        }
    }

    let lower = bounds::lower_bound_probabilistic(params).ok();
    let oracle = (params.n <= oracle_max_n.min(ORACLE_MAX_DIMENSION))
        .then(|| max_triangle_free_exact(params, limits).ok())
        .flatten();
    let upper_r2 = (params.r == 2).then(|| bounds::upper_bound_r2(params.n));
    let upper_level = bounds::upper_bound_level_sum(params).ok().map(|(s, _)| s);

    let uppers: Vec<(&str, f64)> = [("upper_r2", &upper_r2), ("upper_level_sum", &upper_level)]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|x| (k, x.to_f64().unwrap_or(f64::INFINITY))))
        .collect();

    let mut checks = Vec::new();
    let mut check = |claim: String, holds: bool| checks.push(SandwichCheck { claim, holds });
    for (name, size) in &cons {
        if let Some(o) = oracle.as_ref().filter(|o| o.optimal) {
            check(format!("{name} {size} <= oracle {}", o.best_size), *size <= o.best_size);
        }
        for (u, val) in &uppers {
            check(format!("{name} {size} <= {u} {val}"), *size as f64 <= *val);
        }
    }
    if let Some(l) = lower {
        if let Some(o) = oracle.as_ref().filter(|o| o.optimal) {
            check(
                format!("lower_probabilistic {l:.6} <= oracle {}", o.best_size),
                l <= o.best_size as f64 + REAL_TOLERANCE,
            );
        }
        for (u, val) in &uppers {
            check(format!("lower_probabilistic {l:.6} <= {u} {val}"), l <= val + REAL_TOLERANCE);
        }
    }
    if let Some(o) = &oracle {
        for (u, val) in &uppers {
            check(format!("oracle {} <= {u} {val}", o.best_size), o.best_size as f64 <= *val);
        }
        // an inexhaustive oracle must still not exceed the trivial bound
        check(
            format!("oracle {} <= 2^n", o.best_size),
            o.best_size as u128 <= params.vertex_count(),
        );
    }

    SandwichReport {
        n: params.n,
        r: params.r,
        constructions: cons,
        lower_probabilistic: lower,
        oracle: oracle.map(|o| OracleSummary {
            best_size: o.best_size,
            optimal: o.optimal,
            nodes: o.nodes,
        }),
        upper_r2: upper_r2.map(|x| x.to_string()),
        upper_level_sum: upper_level.map(|x| x.to_string()),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::check_triangle_free;

    /// Exhaustive maximum over all subsets of the cube, using triangle
    /// bitmasks over the `2^n <= 16` vertices.
    fn exhaustive_max(n: u32, r: u32) -> usize {
        let size = 1u32 << n;
        let d = |a: u32, b: u32| (a ^ b).count_ones();
        let mut tris = Vec::new();
        for a in 0..size {
            for b in a + 1..size {
                for c in b + 1..size {
                    if d(a, b) == r && d(b, c) == r && d(a, c) == r {
                        tris.push((1u32 << a) | (1 << b) | (1 << c));
                    }
                }
            }
        }
        (0u64..(1u64 << size))
            .filter(|&s| tris.iter().all(|&t| (s as u32) & t != t))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn exhaustive_ground_truths() {
        // frozen from exhaustive_max; recomputed here as they are cheap
        assert_eq!(exhaustive_max(2, 2), 4);
        assert_eq!(exhaustive_max(3, 2), 4);
        assert_eq!(exhaustive_max(4, 2), 8);
    }

    #[test]
    fn small_optima() {
        let cases = [
            (Params::exploratory(2, 2).unwrap(), 4),
            (Params::new(3, 2).unwrap(), 4),
            (Params::new(4, 2).unwrap(), 8),
        ];
        for (p, want) in cases {
            for sym in [true, false] {
                let limits = SearchLimits {
                    allow_symmetry: sym,
                    ..Default::default()
                };
                let res = max_triangle_free_exact(&p, &limits).unwrap();
                assert!(res.optimal);
                assert_eq!(res.best_size, want, "n={} r={} sym={sym}", p.n, p.r);
                assert!(check_triangle_free(&res.witness, &p).unwrap().is_ok());
            }
        }
    }

    #[test]
    fn budget_exhaustion_keeps_a_valid_witness() {
        let p = Params::new(6, 2).unwrap();
        let mut last = 0;
        for budget in [1u64, 10, 100, 1000, 10_000] {
            let limits = SearchLimits {
                max_nodes: budget,
                ..Default::default()
            };
            let res = max_triangle_free_exact(&p, &limits).unwrap();
            assert!(!res.optimal);
            assert!(res.best_size >= last);
            last = res.best_size;
            assert!(check_triangle_free(&res.witness, &p).unwrap().is_ok());
        }
    }

    #[test]
    fn refuses_huge_cubes() {
        let p = Params::new(20, 2).unwrap();
        assert!(max_triangle_free_exact(&p, &SearchLimits::default()).is_err());
    }

    #[test]
    fn sandwich_small() {
        let rep = sandwich_report(&Params::new(3, 2).unwrap(), &SearchLimits::default(), 5);
        assert!(rep.holds(), "{:?}", rep.checks);
        assert_eq!(rep.oracle.as_ref().unwrap().best_size, 4);
        assert!(rep.upper_level_sum.is_none());
        assert!(rep.constructions.contains(&("fixed_bit".to_string(), 2)));

        let rep = sandwich_report(&Params::new(4, 2).unwrap(), &SearchLimits::default(), 5);
        assert!(rep.holds());
        assert_eq!(rep.upper_r2.as_deref(), Some("13"));
    }

    #[test]
    fn sandwich_with_inexhaustive_oracle() {
        let limits = SearchLimits {
            max_nodes: 20_000,
            ..Default::default()
        };
        let rep = sandwich_report(&Params::new(9, 2).unwrap(), &limits, 9);
        assert!(rep.constructions.contains(&("antipodal".to_string(), 32)));
        assert!(!rep.oracle.as_ref().unwrap().optimal);
        assert!(rep.holds(), "{:?}", rep.checks);
    }
}
