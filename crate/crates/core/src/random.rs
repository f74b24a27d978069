//! Seeded random compact sets in `[0,1]`.

use num_bigint::BigInt;
use num_traits::One;

use crate::cover::{self, GridSpec};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rng::SplitMix64;
use crate::scalar::{self, Scalar};
use crate::set::CompactSet;

#[derive(Clone, Debug, PartialEq)]
pub enum RandomMode {
    /// Dyadic subdivision with random survivors.
    CantorLike,
    /// A random nonempty subset of the grid, fattened into the grid neighbourhood.
    GridFattened(GridSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomSetParams {
    pub seed: u64,
    pub depth: u32,
    pub keep_num: u64,
    pub keep_den: u64,
    pub mode: RandomMode,
}

impl RandomSetParams {
    pub fn cantor_like(seed: u64, depth: u32, keep_num: u64, keep_den: u64) -> Self {
        Self {
            seed,
            depth,
            keep_num,
            keep_den,
            mode: RandomMode::CantorLike,
        }
    }

    pub fn grid_fattened(seed: u64, grid: GridSpec) -> Self {
        Self {
            seed,
            depth: 0,
            keep_num: 1,
            keep_den: 2,
            mode: RandomMode::GridFattened(grid),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.keep_den == 0 || self.keep_num > self.keep_den {
            return Err(Error::InvalidArgument(format!(
                "keep probability {}/{} is not in [0,1]",
                self.keep_num, self.keep_den
            )));
        }
        Ok(())
    }
}

/// Keeps each candidate with the configured probability, forcing one survivor
/// when every candidate was dropped.
fn select<T: Clone>(rng: &mut SplitMix64, candidates: &[T], num: u64, den: u64) -> Vec<T> {
    let mut kept: Vec<T> = candidates
        .iter()
        .filter(|_| rng.chance(num, den))
        .cloned()
        .collect();
    if kept.is_empty() {
        let forced = rng.below(candidates.len() as u64) as usize;
        kept.push(candidates[forced].clone());
    }
    kept
}

pub fn random_compact(params: &RandomSetParams) -> Result<CompactSet> {
    params.validate()?;
    let mut rng = SplitMix64::new(params.seed);
    match &params.mode {
        RandomMode::CantorLike => {
            let mut alive: Vec<BigInt> = vec![BigInt::from(0)];
            for _ in 0..params.depth {
                let children: Vec<BigInt> = alive
                    .iter()
                    .flat_map(|k| [k * 2, k * 2 + 1])
                    .collect();
                alive = select(&mut rng, &children, params.keep_num, params.keep_den);
            }
            let den = BigInt::one() << params.depth;
            CompactSet::normalize(
                alive
                    .into_iter()
                    .map(|k| {
                        let lo = Scalar::new(k.clone(), den.clone());
                        let hi = Scalar::new(k + 1, den.clone());
                        Interval::new(lo, hi).expect("dyadic cell")
                    })
                    .collect(),
            )
        }
        RandomMode::GridFattened(g) => {
            let points: Vec<Scalar> = cover::grid_set(g.m())
                .parts()
                .iter()
                .map(|iv| iv.lo().clone())
                .collect();
            let kept = select(&mut rng, &points, params.keep_num, params.keep_den);
            let r = g.eps() / scalar::int(2);
            CompactSet::normalize(
                kept.iter()
                    .map(|d| Interval::new(d - &r, d + &r).expect("r > 0"))
                    .collect(),
            )
        }
    }
}
