//! Point counts and trace-of-Frobenius censuses of plane curves.
//!
//! A census tallies `t = q + 1 - #C_f(F_q)` over every form of a degree
//! (exhaustive) or over seeded uniform draws (Monte Carlo). Work is split
//! into indexed tasks whose tallies are merged in index order, so results
//! never depend on the worker count.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::eval_map::build_matrix;
use crate::field::{Field, FieldElement};
use crate::forms::{basis_len, decode_index, lead_len, FormError, FormSampler, TernaryForm};
use crate::par;
use crate::smooth::{SmoothScratch, SmoothnessTester};

/// Exhaustive censuses are refused above this many forms.
pub const EXHAUSTIVE_CAP: u64 = 1 << 35;

/// Monte Carlo draws per task.
const MC_CHUNK: u64 = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("{q}^{dim} forms exceed the exhaustive cap of 2^35")]
    TooLarge { q: u32, dim: usize },
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("shard count must be at least 1")]
    NoShards,
    #[error("smooth form with t={t} violates the Weil bound at q={q}, d={d}")]
    WeilViolation { q: u32, d: u32, t: i64 },
    #[error("KS normalization needs a smooth quartic census (got d={d}, smooth_only={smooth_only})")]
    NotSmoothQuartic { d: u32, smooth_only: bool },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Values of every degree-`d` monomial at every rational point, stored both
/// point-major (for dot products) and monomial-major (for incremental
/// updates).
#[derive(Debug, Clone)]
pub struct PointTable {
    field: Arc<Field>,
    n_points: usize,
    dim: usize,
    by_point: Vec<u16>,
    by_monomial: Vec<u16>,
}

impl PointTable {
    pub fn new(field: &Arc<Field>, d: u32) -> PointTable {
        let m = build_matrix(field, d);
        let (n_points, dim) = (m.rows(), m.cols());
        let by_point: Vec<u16> = m.matrix.data.iter().map(|e| e.0).collect();
        let mut by_monomial = vec![0u16; n_points * dim];
        for r in 0..n_points {
            for c in 0..dim {
                by_monomial[c * n_points + r] = by_point[r * dim + c];
            }
        }
        PointTable { field: field.clone(), n_points, dim, by_point, by_monomial }
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Number of rational points where the form with these codes vanishes.
    pub fn count_zeros(&self, coeffs: &[u16]) -> usize {
        debug_assert_eq!(coeffs.len(), self.dim);
        let field = &*self.field;
        if field.is_prime_field() {
            let p = field.p() as u64;
            self.by_point
                .chunks_exact(self.dim)
                .filter(|row| {
                    let s: u64 = row.iter().zip(coeffs).map(|(&m, &c)| m as u64 * c as u64).sum();
                    s.is_multiple_of(p)
                })
                .count()
        } else {
            self.by_point
                .chunks_exact(self.dim)
                .filter(|row| {
                    row.iter()
                        .zip(coeffs)
                        .fold(FieldElement::ZERO, |acc, (&m, &c)| {
                            field.add(acc, field.mul(FieldElement(m), FieldElement(c)))
                        })
                        .is_zero()
                })
                .count()
        }
    }

    /// Adds `s` times monomial column `c` to a vector of point values.
    #[inline]
    fn add_column(&self, vals: &mut [u16], c: usize, s: FieldElement) {
        let col = &self.by_monomial[c * self.n_points..(c + 1) * self.n_points];
        let field = &*self.field;
        if s == FieldElement::ONE {
            for (v, &m) in vals.iter_mut().zip(col) {
                *v = field.add(FieldElement(*v), FieldElement(m)).0;
            }
        } else {
            for (v, &m) in vals.iter_mut().zip(col) {
                *v = field.add(FieldElement(*v), field.mul(s, FieldElement(m))).0;
            }
        }
    }
}

/// `#C_f(F_q)`, the number of rational points on the curve `f = 0`.
pub fn count_points(f: &TernaryForm) -> usize {
    PointTable::new(f.field(), f.degree()).count_zeros(&f.codes())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusMode {
    Exhaustive,
    MonteCarlo,
}

impl CensusMode {
    pub fn label(self) -> &'static str {
        match self {
            CensusMode::Exhaustive => "exhaustive",
            CensusMode::MonteCarlo => "mc",
        }
    }
}

/// Counts of forms by trace `t = q + 1 - #C_f(F_q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceHistogram {
    pub field: Arc<Field>,
    pub d: u32,
    pub mode: CensusMode,
    pub smooth_only: bool,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    /// Forms examined, including rejected ones.
    pub total: u64,
    pub rejected_singular: u64,
    pub counts: BTreeMap<i64, u64>,
}

impl TraceHistogram {
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn count(&self, t: i64) -> u64 {
        self.counts.get(&t).copied().unwrap_or(0)
    }

    /// Forms that made it into `counts`.
    pub fn tallied(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Per-task tally indexed by the number of zeros.
#[derive(Debug, Clone)]
struct Tally {
    by_zeros: Vec<u64>,
    rejected: u64,
}

impl Tally {
    fn new(n_points: usize) -> Tally {
        Tally { by_zeros: vec![0; n_points + 1], rejected: 0 }
    }

    fn merge(&mut self, other: &Tally) {
        for (a, b) in self.by_zeros.iter_mut().zip(&other.by_zeros) {
            *a += b;
        }
        self.rejected += other.rejected;
    }
}

fn genus(d: u32) -> i64 {
    ((d as i64 - 1) * (d as i64 - 2) / 2).max(0)
}

fn finish(
    field: &Arc<Field>,
    d: u32,
    mode: CensusMode,
    smooth_only: bool,
    (seed, samples): (Option<u64>, Option<u64>),
    tally: Tally,
) -> Result<TraceHistogram, CensusError> {
    let q = field.q() as i64;
    let g = genus(d);
    let mut counts = BTreeMap::new();
    for (n, &c) in tally.by_zeros.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let t = q + 1 - n as i64;
        if smooth_only && t * t > 4 * g * g * q {
            return Err(CensusError::WeilViolation { q: q as u32, d, t });
        }
        counts.insert(t, c);
    }
    let total = tally.by_zeros.iter().sum::<u64>() + tally.rejected;
    Ok(TraceHistogram {
        field: field.clone(),
        d,
        mode,
        smooth_only,
        seed,
        samples,
        total,
        rejected_singular: tally.rejected,
        counts,
    })
}

/// Tallies every degree-`d` form on `workers` threads.
///
/// Point counts and smoothness are invariant under scaling, so a leading
/// block whose first nonzero code is 1 stands in for its `q - 1` scalar
/// multiples and the other nonzero blocks are skipped.
pub fn census_exhaustive(
    field: &Arc<Field>,
    d: u32,
    smooth_only: bool,
    workers: usize,
) -> Result<TraceHistogram, CensusError> {
    census_exhaustive_impl(field, d, smooth_only, workers, true)
}

fn census_exhaustive_impl(
    field: &Arc<Field>,
    d: u32,
    smooth_only: bool,
    workers: usize,
    use_scalars: bool,
) -> Result<TraceHistogram, CensusError> {
    if workers == 0 {
        return Err(CensusError::NoShards);
    }
    let q = field.q();
    let n = basis_len(d);
    if (q as u64).checked_pow(n as u32).is_none_or(|t| t > EXHAUSTIVE_CAP) {
        return Err(CensusError::TooLarge { q, dim: n });
    }
    let table = PointTable::new(field, d);
    let tester = if smooth_only { Some(SmoothnessTester::new(field.clone(), d)?) } else { None };
    let lead = lead_len(n);
    let blocks = (q as u64).pow(lead as u32) as usize;
    let tallies = par::run_indexed(blocks, workers, |b| {
        let mut codes = decode_index(b as u64, q, lead);
        let weight = match codes.iter().find(|&&c| c != 0) {
            None => 1,
            Some(1) if use_scalars => (q - 1) as u64,
            Some(_) if use_scalars => return Tally::new(table.n_points()),
            Some(_) => 1,
        };
        codes.resize(n, 0);
        exhaustive_block(&table, tester.as_ref(), &mut codes, lead, weight)
    });
    let mut tally = Tally::new(table.n_points());
    for t in &tallies {
        tally.merge(t);
    }
    finish(field, d, CensusMode::Exhaustive, smooth_only, (None, None), tally)
}

/// Walks the tail coefficients in odometer order, keeping the point values
/// up to date by adding one monomial column per increment.
fn exhaustive_block(
    table: &PointTable,
    tester: Option<&SmoothnessTester>,
    codes: &mut [u16],
    lead: usize,
    weight: u64,
) -> Tally {
    let field = &*table.field;
    let q = field.q() as u16;
    // step[a] = (a + 1) - a as field elements, wrapping at q - 1; all ones
    // in a prime field.
    let step: Vec<FieldElement> = (0..q)
        .map(|a| field.sub(FieldElement((a + 1) % q), FieldElement(a)))
        .collect();
    let n = codes.len();
    let mut tally = Tally::new(table.n_points);
    let mut vals = vec![0u16; table.n_points];
    for (c, &code) in codes.iter().enumerate().take(lead) {
        table.add_column(&mut vals, c, FieldElement(code));
    }
    let mut scratch = SmoothScratch::default();
    loop {
        let smooth = tester.is_none_or(|t| t.is_smooth_codes(codes, &mut scratch));
        if smooth {
            let zeros = vals.iter().filter(|&&v| v == 0).count();
            tally.by_zeros[zeros] += weight;
        } else {
            tally.rejected += weight;
        }
        let mut c = n;
        loop {
            if c == lead {
                return tally;
            }
            c -= 1;
            table.add_column(&mut vals, c, step[codes[c] as usize]);
            codes[c] += 1;
            if codes[c] < q {
                break;
            }
            codes[c] = 0;
        }
    }
}

/// Tallies `samples` seeded uniform forms; draw `i` depends only on
/// `(seed, i)`, so the result is the same for every worker count.
pub fn census_monte_carlo(
    field: &Arc<Field>,
    d: u32,
    samples: u64,
    seed: u64,
    smooth_only: bool,
    workers: usize,
) -> Result<TraceHistogram, CensusError> {
    if samples == 0 {
        return Err(CensusError::NoSamples);
    }
    if workers == 0 {
        return Err(CensusError::NoShards);
    }
    let table = PointTable::new(field, d);
    let tester = if smooth_only { Some(SmoothnessTester::new(field.clone(), d)?) } else { None };
    let sampler = FormSampler::new(field.clone(), d, seed);
    let chunks = samples.div_ceil(MC_CHUNK) as usize;
    let n = basis_len(d);
    let tallies = par::run_indexed(chunks, workers, |chunk| {
        let mut tally = Tally::new(table.n_points());
        let mut codes = vec![0u16; n];
        let mut scratch = SmoothScratch::default();
        let start = chunk as u64 * MC_CHUNK;
        for draw in start..(start + MC_CHUNK).min(samples) {
            sampler.fill(draw, &mut codes);
            if tester.as_ref().is_none_or(|t| t.is_smooth_codes(&codes, &mut scratch)) {
                tally.by_zeros[table.count_zeros(&codes)] += 1;
            } else {
                tally.rejected += 1;
            }
        }
        tally
    });
    let mut tally = Tally::new(table.n_points());
    for t in &tallies {
        tally.merge(t);
    }
    finish(field, d, CensusMode::MonteCarlo, smooth_only, (Some(seed), Some(samples)), tally)
}

/// `#GL_3(F_q) = (q^3 - 1)(q^3 - q)(q^3 - q^2)`.
pub fn gl3_order(q: u32) -> BigUint {
    let q3 = BigUint::from(q).pow(3);
    let q = BigUint::from(q);
    (&q3 - 1u32) * (&q3 - &q) * (&q3 - &q * &q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KsRow {
    pub t: i64,
    pub x: f64,
    pub count: u64,
    /// `sqrt(q) * count / total`.
    pub density: f64,
    pub ks_density: Option<f64>,
    /// `sqrt(q) * (density(t) - density(-t))`.
    pub v_value: f64,
    /// Binomial standard error of `density`, Monte Carlo only.
    pub std_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KsSummary {
    pub rows: Vec<KsRow>,
}

/// Rows for every `t` with `count(t) > 0` or `count(-t) > 0`, ascending.
/// `ks_density` is left empty.
pub fn summarize(hist: &TraceHistogram) -> KsSummary {
    let sq = (hist.q() as f64).sqrt();
    let total = hist.total as f64;
    let density = |t: i64| sq * hist.count(t) as f64 / total;
    let mut ts: Vec<i64> = hist.counts.keys().flat_map(|&t| [t, -t]).collect();
    ts.sort_unstable();
    ts.dedup();
    let rows = ts
        .into_iter()
        .map(|t| {
            let count = hist.count(t);
            let std_error = match hist.mode {
                CensusMode::Exhaustive => None,
                CensusMode::MonteCarlo => {
                    let p = count as f64 / total;
                    Some(sq * (p * (1.0 - p) / total).sqrt())
                }
            };
            KsRow {
                t,
                x: t as f64 / sq,
                count,
                density: density(t),
                ks_density: None,
                v_value: sq * (density(t) - density(-t)),
                std_error,
            }
        })
        .collect();
    KsSummary { rows }
}

/// [`summarize`] plus `ks_density = sqrt(q) * N / ((q^6 + 1) * #GL_3)`, where
/// `N` is the absolute form count (Monte Carlo counts are scaled by
/// `q^dim / samples` first).
pub fn ks_normalize(hist: &TraceHistogram) -> Result<KsSummary, CensusError> {
    if hist.d != 4 || !hist.smooth_only {
        return Err(CensusError::NotSmoothQuartic { d: hist.d, smooth_only: hist.smooth_only });
    }
    let q = hist.q() as f64;
    let scale = match hist.mode {
        CensusMode::Exhaustive => 1.0,
        CensusMode::MonteCarlo => q.powi(basis_len(hist.d) as i32) / hist.total as f64,
    };
    let denom = (q.powi(6) + 1.0) * biguint_to_f64(&gl3_order(hist.q()));
    let mut summary = summarize(hist);
    for row in &mut summary.rows {
        row.ks_density = Some(q.sqrt() * row.count as f64 * scale / denom);
    }
    Ok(summary)
}

pub(crate) fn biguint_to_f64(v: &BigUint) -> f64 {
    v.to_string().parse().expect("decimal digits parse as f64")
}
