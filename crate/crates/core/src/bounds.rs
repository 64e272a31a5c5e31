//! Closed-form lower and upper bounds on the largest triangle-free subset of
//! the `r`-distance graph.
//!
//! Everything that is an integer or a ratio of integers is evaluated exactly
//! with arbitrary-precision arithmetic. Square roots and the asymptotic form
//! are `f64`; compare those with a tolerance of [`REAL_TOLERANCE`].

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::constructions::select_antipodal_prime;
use crate::cube::{Mode, Params};
use crate::error::{Error, Result};

/// The constant `2√2/3` of the probabilistic lower bound.
pub const LOWER_BOUND_CONSTANT: f64 = 2.0 * std::f64::consts::SQRT_2 / 3.0;

/// Comparison tolerance for real-valued bounds.
pub const REAL_TOLERANCE: f64 = 1e-9;

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || n < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` in `u128`, saturating. Used for work estimates only.
pub fn binomial_u128(n: u32, k: u32) -> u128 {
    binomial(i64::from(n), i64::from(k))
        .to_u128()
        .unwrap_or(u128::MAX)
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn floor_to_uint(q: &BigRational) -> BigUint {
    q.floor().to_integer().to_biguint().unwrap_or_default()
}

fn ceil_to_uint(q: &BigRational) -> BigUint {
    q.ceil().to_integer().to_biguint().unwrap_or_default()
}

fn require_even(params: &Params) -> Result<u32> {
    if !params.is_even() {
        return Err(Error::NonIntegral {
            n: params.n,
            r: params.r,
        });
    }
    Ok(params.half_r())
}

/// `C(n, r) · C(r, r/2) · C(n − r, r/2)`: the number of ordered
/// `(v, w)` completing a triangle with a fixed vertex `u`.
fn triangle_product(params: &Params) -> Result<BigUint> {
    let h = i64::from(require_even(params)?);
    let (n, r) = (i64::from(params.n), i64::from(params.r));
    Ok(binomial(n, r) * binomial(r, h) * binomial(n - r, h))
}

/// Exact number of triangles in the `r`-distance graph:
/// `2^n · C(n,r) · C(r,r/2) · C(n−r,r/2) / 6`.
pub fn triangle_count_formula(params: &Params) -> Result<BigUint> {
    let total = (BigUint::one() << params.n) * triangle_product(params)?;
    let (q, rem) = total.div_rem(&big(6));
    if !rem.is_zero() {
        return Err(Error::NonIntegral {
            n: params.n,
            r: params.r,
        });
    }
    Ok(q)
}

/// The sampling probability maximising `E[X − Y] = 2^n p − p^3 T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplingProbability {
    /// Probability to sample with, in `(0, 1]`.
    pub value: f64,
    /// `sqrt(2 / product)` before clamping; `None` when the product is zero.
    pub unclamped: Option<f64>,
    pub clamped: bool,
}

pub fn optimal_sampling_probability(params: &Params) -> Result<SamplingProbability> {
    let product = triangle_product(params)?;
    if product.is_zero() {
        return Ok(SamplingProbability {
            value: 1.0,
            unclamped: None,
            clamped: true,
        });
    }
    let raw = (2.0 / product.to_f64().unwrap_or(f64::INFINITY)).sqrt();
    Ok(SamplingProbability {
        value: raw.min(1.0),
        unclamped: Some(raw),
        clamped: raw > 1.0,
    })
}

/// `c · 2^n / sqrt(C(n,r) C(r,r/2) C(n−r,r/2))` with `c = 2√2/3`.
///
/// Errors with [`Error::NotApplicable`] when the graph has no triangles (the
/// whole cube is then triangle-free and the formula divides by zero).
pub fn lower_bound_probabilistic(params: &Params) -> Result<f64> {
    let product = triangle_product(params)?;
    if product.is_zero() {
        return Err(Error::NotApplicable(format!(
            "the {}-distance graph on the {}-cube has no triangles",
            params.r, params.n
        )));
    }
    let cube = 2f64.powi(params.n as i32);
    Ok(LOWER_BOUND_CONSTANT * cube / product.to_f64().unwrap_or(f64::INFINITY).sqrt())
}

/// `√2 · (2/3) · 2^n / (e^r · 2^(r/2) · (n/r)^(3r/4))`.
pub fn lower_bound_asymptotic(params: &Params) -> f64 {
    let n = f64::from(params.n);
    let r = f64::from(params.r);
    // evaluated in logs; the terms are individually huge for n near 64
    let log_value = std::f64::consts::SQRT_2.ln() + (2.0f64 / 3.0).ln() + n * 2f64.ln()
        - r
        - (r / 2.0) * 2f64.ln()
        - (3.0 * r / 4.0) * (n / r).ln();
    log_value.exp()
}

/// `2^(n/p + p − 1)`, the size of the antipodal-block construction.
pub fn antipodal_size(n: u32, p: u32) -> Result<BigUint> {
    if p == 0 || !n.is_multiple_of(p) {
        return Err(Error::BlockDoesNotDivide { p, n });
    }
    Ok(BigUint::one() << (n / p + p - 1))
}

/// `C(n, r/2) − C(n−2, r/2)`, the size of the fixed-bit construction.
pub fn fixed_bit_size(params: &Params) -> Result<BigUint> {
    let h = i64::from(require_even(params)?);
    let n = i64::from(params.n);
    Ok(binomial(n, h) - binomial(n - 2, h))
}

/// `(s − 1) · C(n − 1, k − 1)`: the largest family of `k`-subsets of an
/// `n`-set with no `s` pairwise disjoint members, valid when `n >= k·s`.
pub fn frankl_bound(n: u32, k: u32, s: u32) -> Result<BigUint> {
    if k < 1 || s < 2 {
        return Err(Error::NotApplicable(format!("k={k}, s={s}: need k >= 1, s >= 2")));
    }
    if u64::from(n) < u64::from(k) * u64::from(s) {
        return Err(Error::NotApplicable(format!("n={n} < k*s={}", k * s)));
    }
    Ok(big(u64::from(s - 1)) * binomial(i64::from(n) - 1, i64::from(k) - 1))
}

/// `1 + Σ_{k=1..n} (2/k) C(n, k−1)`, summed term by term.
pub fn shadow_sum_r2(n: u32) -> BigRational {
    let n = i64::from(n);
    (1..=n).fold(BigRational::one(), |acc, k| {
        acc + ratio(big(2) * binomial(n, k - 1), big(k as u64))
    })
}

/// `1 + (2/(n+1)) (2^(n+1) − 2)`, the closed form of [`shadow_sum_r2`].
pub fn upper_bound_r2_exact(n: u32) -> BigRational {
    let top = (BigUint::one() << (n + 1)) - big(2);
    BigRational::one() + ratio(big(2) * top, big(u64::from(n) + 1))
}

/// Upper bound for `r = 2`: [`upper_bound_r2_exact`] rounded up.
pub fn upper_bound_r2(n: u32) -> BigUint {
    ceil_to_uint(&upper_bound_r2_exact(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelRule {
    /// `C(n, k)`, every vertex of the level.
    Trivial,
    /// Shadows `r/2` levels down plus the matching bound.
    Shadow,
    /// Mirror image of the shadow rule through `k ↔ n − k`.
    Cover,
}

/// Per-level upper bounds on `S_k`, the members of a triangle-free set with
/// exactly `k` ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelProfile {
    #[serde(serialize_with = "decimal::vec")]
    pub per_level: Vec<BigUint>,
    pub rules: Vec<LevelRule>,
}

impl LevelProfile {
    pub fn total(&self) -> BigUint {
        self.per_level.iter().sum()
    }
}

fn require_upper_range(params: &Params) -> Result<u32> {
    let h = require_even(params)?;
    if !params.upper_bound_range() {
        return Err(Error::NotApplicable(format!(
            "2r = {} exceeds n = {}",
            2 * params.r,
            params.n
        )));
    }
    Ok(h)
}

/// Bound on `S_k` for a triangle-free set, with the rule that produced it.
///
/// Levels `k <= r/2` use `C(n, k)`. Levels `r/2 < k <= floor(n/2)` fix a
/// shadow `r/2` levels down: the remaining ones of the members above it are
/// `r/2`-subsets of the other `n − (k − r/2)` coordinates with no three
/// pairwise disjoint, so at most `2 C(n−(k−r/2)−1, r/2−1)` of them, giving
/// `C(k, r/2) S_k <= 2 C(n, k−r/2) C(n−(k−r/2)−1, r/2−1)`. Upper levels use
/// the same count on covers, i.e. the value at `n − k`.
pub fn level_bound(params: &Params, k: u32) -> Result<(BigUint, LevelRule)> {
    let h = require_upper_range(params)?;
    let n = params.n;
    if k > n {
        return Err(Error::NotApplicable(format!("level {k} exceeds n = {n}")));
    }
    if k > n / 2 {
        let (value, _) = level_bound(params, n - k)?;
        return Ok((value, LevelRule::Cover));
    }
    let full = binomial(i64::from(n), i64::from(k));
    if k <= h {
        return Ok((full, LevelRule::Trivial));
    }
    let base = k - h;
    let free = n - base;
    // the matching bound needs |X| >= k*s with k = r/2, s = 3
    if free < 3 * h {
        return Err(Error::NotApplicable(format!(
            "level {k}: n - (k - r/2) = {free} < 3r/2 = {}",
            3 * h
        )));
    }
    let per_shadow = frankl_bound(free, h, 3)?;
    let numerator = binomial(i64::from(n), i64::from(base)) * per_shadow;
    let value = numerator / binomial(i64::from(k), i64::from(h));
    Ok((value.min(full), LevelRule::Shadow))
}

/// Sum of [`level_bound`] over all levels, each counted once.
pub fn upper_bound_level_sum(params: &Params) -> Result<(BigUint, LevelProfile)> {
    require_upper_range(params)?;
    let mut per_level = Vec::with_capacity(params.n as usize + 1);
    let mut rules = Vec::with_capacity(params.n as usize + 1);
    for k in 0..=params.n {
        let (value, rule) = level_bound(params, k)?;
        per_level.push(value);
        rules.push(rule);
    }
    let profile = LevelProfile { per_level, rules };
    Ok((profile.total(), profile))
}

/// The three successively weaker sums of the general upper-bound argument,
/// each summing up to `floor(n/2)` and doubling:
///
/// * `literal`: `2(Σ_{i<=r/2} C(n,i) + Σ_{k=r/2+1}^{n/2} C(n,k) r/(n−k+r/2))`
/// * `relaxed`: the same with `r/(n−k+1)`
/// * `simplified`: the same with `C(n+1,k) r/(n+1)`
///
/// For even `n` the doubling counts the middle level twice, so `literal` is
/// never smaller than [`upper_bound_level_sum`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelaxationChain {
    pub literal: BigRational,
    pub relaxed: BigRational,
    pub simplified: BigRational,
}

pub fn relaxation_chain(params: &Params) -> Result<RelaxationChain> {
    let h = i64::from(require_upper_range(params)?);
    let n = i64::from(params.n);
    let r = i64::from(params.r);
    let mut head = BigRational::zero();
    for i in 0..=h {
        head += ratio(binomial(n, i), BigUint::one());
    }
    let mut literal = head.clone();
    let mut relaxed = head.clone();
    let mut simplified = head;
    for k in (h + 1)..=(n / 2) {
        let c = binomial(n, k);
        literal += ratio(&c * big(r as u64), big((n - k + h) as u64));
        relaxed += ratio(&c * big(r as u64), big((n - k + 1) as u64));
        simplified += ratio(binomial(n + 1, k) * big(r as u64), big((n + 1) as u64));
    }
    let two = ratio(big(2), BigUint::one());
    Ok(RelaxationChain {
        literal: literal * &two,
        relaxed: relaxed * &two,
        simplified: simplified * two,
    })
}

mod decimal {
    use super::*;

    pub fn uint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn opt<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_str(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn vec<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AntipodalEntry {
    pub p: u32,
    #[serde(serialize_with = "decimal::uint")]
    pub size: BigUint,
}

/// Every bound the library knows for one `(n, r)`. Absent entries come with
/// a reason in `notes`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub r: u32,
    pub mode: Mode,
    pub lower_probabilistic: Option<f64>,
    pub lower_asymptotic: f64,
    pub antipodal: Option<AntipodalEntry>,
    #[serde(serialize_with = "decimal::opt")]
    pub fixed_bit: Option<BigUint>,
    #[serde(serialize_with = "decimal::opt")]
    pub upper_r2: Option<BigUint>,
    #[serde(serialize_with = "decimal::opt")]
    pub upper_level_sum: Option<BigUint>,
    /// The doubled half-sum, floored; counts the middle level twice for even n.
    #[serde(serialize_with = "decimal::opt")]
    pub upper_level_sum_doubled: Option<BigUint>,
    pub upper_applicable: bool,
    #[serde(serialize_with = "decimal::opt")]
    pub triangle_count: Option<BigUint>,
    pub optimal_probability: f64,
    pub probability_clamped: bool,
    pub level_profile: Option<LevelProfile>,
    pub notes: Vec<String>,
}

impl BoundReport {
    /// The largest present lower value (constructions and real bounds).
    pub fn best_lower(&self) -> Option<f64> {
        let mut vals = vec![self.lower_asymptotic];
        vals.extend(self.lower_probabilistic);
        vals.extend(self.antipodal.as_ref().and_then(|a| a.size.to_f64()));
        vals.extend(self.fixed_bit.as_ref().and_then(|x| x.to_f64()));
        vals.into_iter().reduce(f64::max)
    }

    /// The smallest present upper value.
    pub fn best_upper(&self) -> Option<&BigUint> {
        [&self.upper_r2, &self.upper_level_sum]
            .into_iter()
            .flatten()
            .min()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Aligned two-column text rendering.
    pub fn to_table(&self) -> String {
        let show = |v: &Option<BigUint>| v.as_ref().map_or("-".to_string(), |x| x.to_string());
        let real = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6}"));
        let rows: Vec<(&str, String)> = vec![
            ("n", self.n.to_string()),
            ("r", self.r.to_string()),
            ("triangle_count", show(&self.triangle_count)),
            ("optimal_probability", format!("{:.6}", self.optimal_probability)),
            ("lower_probabilistic", real(self.lower_probabilistic)),
            ("lower_asymptotic", real(Some(self.lower_asymptotic))),
            (
                "antipodal",
                self.antipodal
                    .as_ref()
                    .map_or("-".to_string(), |a| format!("{} (p={})", a.size, a.p)),
            ),
            ("fixed_bit", show(&self.fixed_bit)),
            ("upper_r2", show(&self.upper_r2)),
            ("upper_level_sum", show(&self.upper_level_sum)),
            (
                "upper_level_sum_doubled",
                show(&self.upper_level_sum_doubled),
            ),
            ("upper_applicable", self.upper_applicable.to_string()),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            writeln!(out, "{k:<width$}  {v}").unwrap();
        }
        for note in &self.notes {
            writeln!(out, "note: {note}").unwrap();
        }
        out
    }
}

pub fn bound_report(params: &Params) -> BoundReport {
    let mut notes = Vec::new();
    let lower_probabilistic = match lower_bound_probabilistic(params) {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("lower_probabilistic: {e}"));
            None
        }
    };
    let (optimal_probability, probability_clamped) = match optimal_sampling_probability(params) {
        Ok(p) => (p.value, p.clamped),
        Err(_) => (1.0, true),
    };
    let antipodal = match params.is_even().then(|| select_antipodal_prime(params.n, params.r)) {
        Some(Some(p)) => Some(AntipodalEntry {
            p,
            size: antipodal_size(params.n, p).expect("selected prime divides n"),
        }),
        _ => {
            notes.push("antipodal: no prime p with p | n, p ∤ r and n/p > r".into());
            None
        }
    };
    let fixed_bit = fixed_bit_size(params).ok();
    if fixed_bit.is_none() {
        notes.push("fixed_bit: r is odd".into());
    }
    let triangle_count = triangle_count_formula(params).ok();
    if triangle_count.is_none() {
        notes.push("triangle_count: r is odd".into());
    }
    let upper_r2 = (params.r == 2).then(|| upper_bound_r2(params.n));
    let level = upper_bound_level_sum(params);
    let upper_applicable = level.is_ok();
    let (upper_level_sum, level_profile) = match level {
        Ok((sum, profile)) => (Some(sum), Some(profile)),
        Err(e) => {
            notes.push(format!("upper_level_sum: {e}"));
            (None, None)
        }
    };
    let upper_level_sum_doubled = relaxation_chain(params)
        .ok()
        .map(|c| floor_to_uint(&c.literal));
    BoundReport {
        n: params.n,
        r: params.r,
        mode: params.mode,
        lower_probabilistic,
        lower_asymptotic: lower_bound_asymptotic(params),
        antipodal,
        fixed_bit,
        upper_r2,
        upper_level_sum,
        upper_level_sum_doubled,
        upper_applicable,
        triangle_count,
        optimal_probability,
        probability_clamped,
        level_profile,
        notes,
    }
}
