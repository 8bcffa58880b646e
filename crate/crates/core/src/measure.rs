//! Sequential projection measurements: exact outcome distribution, seeded
//! Monte Carlo sampling and a Pearson goodness-of-fit test.
//!
//! Sampling uses ChaCha8 seeded with `seed_from_u64(seed)`; shots are split
//! into batches of [`BATCH_SHOTS`] and batch `k` draws from stream `k`. The
//! result therefore depends only on `(chain, shots, seed)`, not on the number
//! of worker threads.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::direction::Direction;
use crate::general_j::{general_amplitudes_j, GeneralJError, SpinSystem};
use crate::spin1;

pub const BATCH_SHOTS: u64 = 1 << 16;
/// Cells expecting fewer counts than this are pooled.
pub const MIN_EXPECTED: f64 = 5.0;
pub const FIT_ALPHA: f64 = 1e-3;
const MAX_OUTCOMES: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("a chain needs at least one analyzer")]
    NoAnalyzers,
    #[error("prepared projection index {index} is outside 0..{dim}")]
    ProjectionOutOfRange { index: usize, dim: usize },
    #[error("shots must be positive")]
    ZeroShots,
    #[error("chain has more than {MAX_OUTCOMES} outcome sequences")]
    TooManyOutcomes,
    #[error("every cell expects fewer than {MIN_EXPECTED} counts")]
    InsufficientShots,
    #[error(transparent)]
    GeneralJ(#[from] GeneralJError),
}

/// Outcome sequence: one projection index (0 = `+J`) per analyzer.
pub type Outcome = Vec<usize>;
pub type Distribution = BTreeMap<Outcome, f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementChain {
    system: SpinSystem,
    prepared: Direction,
    prepared_index: usize,
    analyzers: Vec<Direction>,
}

impl MeasurementChain {
    pub fn new(
        system: SpinSystem,
        prepared: Direction,
        prepared_index: usize,
        analyzers: Vec<Direction>,
    ) -> Result<Self, MeasureError> {
        if analyzers.is_empty() {
            return Err(MeasureError::NoAnalyzers);
        }
        if prepared_index >= system.dim() {
            return Err(MeasureError::ProjectionOutOfRange {
                index: prepared_index,
                dim: system.dim(),
            });
        }
        Ok(Self {
            system,
            prepared,
            prepared_index,
            analyzers,
        })
    }

    pub fn system(&self) -> SpinSystem {
        self.system
    }

    pub fn prepared(&self) -> Direction {
        self.prepared
    }

    pub fn prepared_index(&self) -> usize {
        self.prepared_index
    }

    pub fn analyzers(&self) -> &[Direction] {
        &self.analyzers
    }

    /// `P[t][i][f]`: probability of outcome `f` at analyzer `t` given the
    /// state collapsed onto projection `i` of the previous direction.
    pub fn transitions(&self) -> Result<Vec<Vec<Vec<f64>>>, MeasureError> {
        let mut from = self.prepared;
        let mut out = Vec::with_capacity(self.analyzers.len());
        for to in &self.analyzers {
            let table = if self.system == SpinSystem::spin_one() {
                spin1::probability_table(&from, to)
                    .entries
                    .iter()
                    .map(|r| r.to_vec())
                    .collect()
            } else {
                general_amplitudes_j(&self.system, &from, to)?.probabilities()
            };
            out.push(table);
            from = *to;
        }
        Ok(out)
    }
}

/// Exact probability of every outcome sequence, zero-probability ones
/// included.
pub fn chain_distribution(chain: &MeasurementChain) -> Result<Distribution, MeasureError> {
    let dim = chain.system.dim();
    let steps = chain.analyzers.len();
    let cells = (dim as f64).powi(steps as i32);
    if cells > MAX_OUTCOMES as f64 {
        return Err(MeasureError::TooManyOutcomes);
    }
    let p = chain.transitions()?;
    let mut dist = Distribution::new();
    let mut frontier = vec![(Vec::new(), chain.prepared_index, 1.0)];
    while let Some((seq, state, prob)) = frontier.pop() {
        let t = seq.len();
        if t == steps {
            dist.insert(seq, prob);
            continue;
        }
        for (f, &pf) in p[t][state].iter().enumerate() {
            let mut next = seq.clone();
            next.push(f);
            frontier.push((next, f, prob * pf));
        }
    }
    Ok(dist)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OutcomeHistogram {
    pub counts: BTreeMap<Outcome, u64>,
    pub shots: u64,
}

impl OutcomeHistogram {
    pub fn frequency(&self, outcome: &[usize]) -> f64 {
        self.counts.get(outcome).copied().unwrap_or(0) as f64 / self.shots as f64
    }

    /// Counts of analyzer `step`'s outcome alone.
    pub fn marginal(&self, step: usize) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for (seq, &n) in &self.counts {
            *out.entry(seq[step]).or_insert(0) += n;
        }
        out
    }

    fn merge(mut self, other: Self) -> Self {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.shots += other.shots;
        self
    }
}

/// Probability of analyzer `step`'s outcome alone.
pub fn marginal_distribution(dist: &Distribution, step: usize) -> BTreeMap<usize, f64> {
    let mut out = BTreeMap::new();
    for (seq, &p) in dist {
        *out.entry(seq[step]).or_insert(0.0) += p;
    }
    out
}

/// Sample `shots` runs of the chain, collapsing onto the observed projection
/// after every analyzer.
pub fn simulate(
    chain: &MeasurementChain,
    shots: u64,
    seed: u64,
) -> Result<OutcomeHistogram, MeasureError> {
    if shots == 0 {
        return Err(MeasureError::ZeroShots);
    }
    let cumulative: Vec<Vec<Vec<f64>>> = chain
        .transitions()?
        .into_iter()
        .map(|step| {
            step.into_iter()
                .map(|row| {
                    row.iter()
                        .scan(0.0, |acc, p| {
                            *acc += p;
                            Some(*acc)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let batches = shots.div_ceil(BATCH_SHOTS);
    let hist = (0..batches)
        .into_par_iter()
        .map(|k| {
            let n = BATCH_SHOTS.min(shots - k * BATCH_SHOTS);
            run_batch(&cumulative, chain.prepared_index, n, seed, k)
        })
        .reduce(OutcomeHistogram::default, OutcomeHistogram::merge);
    Ok(hist)
}

fn run_batch(
    cumulative: &[Vec<Vec<f64>>],
    start: usize,
    shots: u64,
    seed: u64,
    stream: u64,
) -> OutcomeHistogram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut counts: HashMap<Outcome, u64> = HashMap::new();
    let mut seq = Vec::with_capacity(cumulative.len());
    for _ in 0..shots {
        seq.clear();
        let mut state = start;
        for step in cumulative {
            let row = &step[state];
            let u: f64 = rng.random::<f64>() * row[row.len() - 1];
            // the last index absorbs round-off in the running sum
            state = row.iter().position(|&c| u < c).unwrap_or(row.len() - 1);
            seq.push(state);
        }
        match counts.get_mut(&seq) {
            Some(n) => *n += 1,
            None => {
                counts.insert(seq.clone(), 1);
            }
        }
    }
    OutcomeHistogram {
        counts: counts.into_iter().collect(),
        shots,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
    pub pass: bool,
    /// Outcomes that were folded into a neighbour because they expected too
    /// few counts.
    pub pooled: usize,
}

/// Pearson chi-square of `h` against `dist`. Cells expecting fewer than
/// [`MIN_EXPECTED`] counts are pooled into one cell, which is itself folded
/// into the smallest retained cell if it is still too small. Counts in an
/// outcome of zero probability fail outright. Passes when the upper-tail
/// probability exceeds [`FIT_ALPHA`].
pub fn goodness_of_fit(
    h: &OutcomeHistogram,
    dist: &Distribution,
) -> Result<FitReport, MeasureError> {
    let n = h.shots as f64;
    if h.counts
        .iter()
        .any(|(k, &c)| c > 0 && dist.get(k).copied().unwrap_or(0.0) <= 0.0)
    {
        return Ok(FitReport {
            chi2: f64::INFINITY,
            dof: 0,
            p_value: 0.0,
            pass: false,
            pooled: 0,
        });
    }
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut pool_obs, mut pool_exp, mut pooled) = (0.0, 0.0, 0);
    for (k, &p) in dist.iter().filter(|(_, &p)| p > 0.0) {
        let obs = h.counts.get(k).copied().unwrap_or(0) as f64;
        let exp = n * p;
        if exp < MIN_EXPECTED {
            pool_obs += obs;
            pool_exp += exp;
            pooled += 1;
        } else {
            cells.push((obs, exp));
        }
    }
    if pooled > 0 {
        if pool_exp >= MIN_EXPECTED {
            cells.push((pool_obs, pool_exp));
        } else if let Some(smallest) = cells
            .iter_mut()
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite expectations"))
        {
            smallest.0 += pool_obs;
            smallest.1 += pool_exp;
        }
    }
    if cells.is_empty() {
        return Err(MeasureError::InsufficientShots);
    }
    let chi2: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len() - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .expect("positive degrees of freedom")
            .sf(chi2)
    };
    Ok(FitReport {
        chi2,
        dof,
        p_value,
        pass: p_value > FIT_ALPHA,
        pooled,
    })
}

/// Largest `|freq - p| / sqrt(p (1 - p) / shots)` over all outcome sequences
/// and all single-analyzer marginals. Cells with `p` of 0 or 1 contribute
/// infinity if the frequency differs at all.
pub fn max_binomial_z(h: &OutcomeHistogram, dist: &Distribution) -> f64 {
    let n = h.shots as f64;
    let z = |count: u64, p: f64| {
        let freq = count as f64 / n;
        let sd = (p * (1.0 - p) / n).sqrt();
        if sd == 0.0 {
            if (freq - p).abs() < 1e-12 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (freq - p).abs() / sd
        }
    };
    let mut worst: f64 = 0.0;
    for (k, &p) in dist {
        worst = worst.max(z(h.counts.get(k).copied().unwrap_or(0), p.clamp(0.0, 1.0)));
    }
    let steps = dist.keys().next().map_or(0, Vec::len);
    for t in 0..steps {
        let observed = h.marginal(t);
        for (k, p) in marginal_distribution(dist, t) {
            worst = worst.max(z(observed.get(&k).copied().unwrap_or(0), p.clamp(0.0, 1.0)));
        }
    }
    worst
}
