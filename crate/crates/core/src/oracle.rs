//! Brute-force search for linear codes on tiny networks.
//!
//! Exhaustive mode settles whether a `(K, N)` linear code exists. Two
//! reductions keep it tractable without losing completeness:
//!
//! * every `V_l` must have full column rank (otherwise some nonzero source
//!   pattern of transmitter `l` is invisible while it changes the sum);
//! * replacing every `V_l` by `V_l M` for one invertible `M` preserves
//!   decodability, so `V_1` ranges over reduced column-echelon forms only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::network::Network;
use crate::verify::decoder_exists;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    /// Enumerate everything if the reduced space has at most `budget` points.
    Exhaustive { budget: u64 },
    /// Independent uniformly random tuples; trial `t` uses stream `t` of a
    /// ChaCha8 generator seeded with `seed`.
    Random { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchOutcome {
    Achievable(LinearCode),
    Impossible,
    Unknown(String),
}

/// Number of full-column-rank `rows x k` matrices, `prod_{i<k} (2^rows - 2^i)`.
fn full_rank_count(rows: usize, k: usize) -> Option<u128> {
    if k > rows {
        return Some(0);
    }
    let total = 1u128.checked_shl(rows as u32)?;
    (0..k).try_fold(1u128, |acc, i| acc.checked_mul(total - (1u128 << i)))
}

/// Number of `k`-dimensional subspaces of `F_2^rows`.
fn subspace_count(rows: usize, k: usize) -> Option<u128> {
    if k > rows {
        return Some(0);
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num = num.checked_mul((1u128.checked_shl((rows - i) as u32)?) - 1)?;
        den = den.checked_mul((1u128 << (i + 1)) - 1)?;
    }
    Some(num / den)
}

/// Size of the reduced search space, or `None` on overflow.
pub fn reduced_space(users: usize, rows: usize, k: usize) -> Option<u128> {
    let first = subspace_count(rows, k)?;
    let rest = full_rank_count(rows, k)?;
    (1..users).try_fold(first, |acc, _| acc.checked_mul(rest))
}

fn matrix_from_bits(rows: usize, k: usize, bits: u64) -> Gf2Matrix {
    Gf2Matrix::from_fn(rows, k, |r, c| (bits >> (r * k + c)) & 1 == 1)
}

/// Full-column-rank matrices in increasing bit order (bit `r k + c` is entry
/// `(r, c)`).
fn full_rank_matrices(rows: usize, k: usize) -> Vec<Gf2Matrix> {
    (0..1u64 << (rows * k))
        .map(|bits| matrix_from_bits(rows, k, bits))
        .filter(|v| v.rank() == k)
        .collect()
}

fn is_column_echelon(v: &Gf2Matrix) -> bool {
    let (r, _) = v.transpose().rref();
    r.transpose() == *v
}

fn witness(network: &Network, k: usize, uses: usize, vs: Vec<Gf2Matrix>) -> Result<LinearCode> {
    LinearCode::new(*network, uses, k, vs, "oracle")
}

fn passes(code: &LinearCode) -> bool {
    decoder_exists(code).map(|r| r.pass).unwrap_or(false)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))
}

/// Searches for a `K`-bit, `N`-use linear code on `network`.
///
/// The exhaustive result is the first witness in enumeration order
/// (`V_1` most significant), independent of `jobs`.
pub fn oracle_search(
    network: &Network,
    k: usize,
    uses: usize,
    mode: SearchMode,
    jobs: usize,
) -> Result<SearchOutcome> {
    if uses == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let users = network.users();
    let rows = uses * network.q() as usize;
    if k == 0 {
        let empty = vec![Gf2Matrix::zeros(rows, 0); users];
        return Ok(SearchOutcome::Achievable(witness(network, 0, uses, empty)?));
    }
    if k > rows {
        return Ok(match mode {
            SearchMode::Exhaustive { .. } => SearchOutcome::Impossible,
            SearchMode::Random { .. } => {
                SearchOutcome::Unknown(format!("K={k} exceeds the {rows} available levels"))
            }
        });
    }
    match mode {
        SearchMode::Exhaustive { budget } => {
            let size = reduced_space(users, rows, k);
            let too_big = |what: String| {
                Ok(SearchOutcome::Unknown(format!(
                    "exhaustive search space {what} exceeds budget {budget}"
                )))
            };
            if rows * k > 24 {
                return too_big(format!("2^{} raw matrices per transmitter", rows * k));
            }
            match size {
                None => return too_big("(overflow)".into()),
                Some(s) if s > u128::from(budget) => return too_big(s.to_string()),
                Some(_) => {}
            }
            let all = full_rank_matrices(rows, k);
            let firsts: Vec<&Gf2Matrix> = all.iter().filter(|v| is_column_echelon(v)).collect();
            let radix = all.len() as u128;
            let total = firsts.len() as u128 * radix.pow(users as u32 - 1);
            let found = pool(jobs)?.install(|| {
                (0..total).into_par_iter().find_map_first(|mut idx| {
                    let mut vs = vec![Gf2Matrix::zeros(0, 0); users];
                    for slot in vs.iter_mut().skip(1).rev() {
                        *slot = all[(idx % radix) as usize].clone();
                        idx /= radix;
                    }
                    vs[0] = firsts[idx as usize].clone();
                    let code = witness(network, k, uses, vs).ok()?;
                    passes(&code).then_some(code)
                })
            });
            Ok(found.map_or(SearchOutcome::Impossible, SearchOutcome::Achievable))
        }
        SearchMode::Random { trials, seed } => {
            let found = pool(jobs)?.install(|| {
                (0..trials).into_par_iter().find_map_first(|t| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(t);
                    let vs = (0..users)
                        .map(|_| Gf2Matrix::from_fn(rows, k, |_, _| rng.gen()))
                        .collect();
                    let code = witness(network, k, uses, vs).ok()?;
                    passes(&code).then_some(code)
                })
            });
            Ok(found.map_or_else(
                || SearchOutcome::Unknown(format!("no code in {trials} random trials (seed {seed})")),
                SearchOutcome::Achievable,
            ))
        }
    }
}
