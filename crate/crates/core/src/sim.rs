//! Seedable Monte Carlo for the fair k-player game, plus the exact expected
//! duration of the last-survivor game.
//!
//! Reproducibility contract: trial `t` of a run seeded with `s` draws from
//! ChaCha8 keyed by four SplitMix64 outputs of `s` (little-endian), on
//! stream `t`. Each round draws one value uniformly from `[0, m(m-1))` by
//! rejection on 64-bit outputs and maps it giver-major to an ordered
//! `(giver, receiver)` pair of the `m` active players. Sums of duration
//! powers are accumulated as exact integers, so statistics do not depend on
//! evaluation order.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::algebra::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StopRule {
    /// Stop as soon as any player is broke.
    FirstRuin,
    /// Broke players drop out; stop when one player holds everything.
    LastSurvivor,
}

impl StopRule {
    pub fn as_str(self) -> &'static str {
        match self {
            StopRule::FirstRuin => "first-ruin",
            StopRule::LastSurvivor => "last-survivor",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameConfig {
    capitals: Vec<u32>,
    stop_rule: StopRule,
}

impl GameConfig {
    pub fn new(capitals: Vec<u32>, stop_rule: StopRule) -> Result<Self> {
        if capitals.len() < 2 {
            return Err(Error::Domain("a game needs at least two players"));
        }
        if capitals.contains(&0) {
            return Err(Error::Domain("capitals must be positive"));
        }
        Ok(GameConfig {
            capitals,
            stop_rule,
        })
    }

    pub fn capitals(&self) -> &[u32] {
        &self.capitals
    }

    pub fn stop_rule(&self) -> StopRule {
        self.stop_rule
    }

    pub fn players(&self) -> usize {
        self.capitals.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameOutcome {
    pub duration: u64,
    pub first_ruined: usize,
    /// The player holding everything at the end; absent when a first-ruin
    /// game stops with more than one solvent player.
    pub winner: Option<usize>,
}

/// Uniform draw from `[0, n)` by rejection.
fn uniform_below<R: RngCore>(rng: &mut R, n: u64) -> u64 {
    debug_assert!(n > 0);
    // 2^64 mod n
    let rejected = n.wrapping_neg() % n;
    loop {
        let v = rng.next_u64();
        if v <= u64::MAX - rejected {
            return v % n;
        }
    }
}

/// Plays one game to completion.
pub fn simulate_duration<R: RngCore>(config: &GameConfig, rng: &mut R) -> GameOutcome {
    let mut capitals = config.capitals.clone();
    let total: u64 = capitals.iter().map(|&c| u64::from(c)).sum();
    let mut active: Vec<usize> = (0..capitals.len()).collect();
    let mut duration = 0u64;
    let mut first_ruined = None;
    loop {
        let m = active.len() as u64;
        let draw = uniform_below(rng, m * (m - 1));
        let giver_pos = (draw / (m - 1)) as usize;
        let mut receiver_pos = (draw % (m - 1)) as usize;
        if receiver_pos >= giver_pos {
            receiver_pos += 1;
        }
        let (giver, receiver) = (active[giver_pos], active[receiver_pos]);
        capitals[giver] -= 1;
        capitals[receiver] += 1;
        duration += 1;
        debug_assert_eq!(capitals.iter().map(|&c| u64::from(c)).sum::<u64>(), total);

        if capitals[giver] > 0 {
            continue;
        }
        let first = *first_ruined.get_or_insert(giver);
        active.remove(giver_pos);
        if active.len() == 1 || config.stop_rule == StopRule::FirstRuin {
            return GameOutcome {
                duration,
                first_ruined: first,
                winner: (active.len() == 1).then(|| active[0]),
            };
        }
    }
}

/// The generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    SplitMix64::seed_from_u64(seed).fill_bytes(&mut key);
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Aggregate of a Monte Carlo run.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialStats {
    pub trials: u64,
    pub seed: u64,
    pub stop_rule: StopRule,
    /// Exact sample mean of the durations.
    pub exact_mean: Rational,
    pub sample_mean: f64,
    /// `(1/n) sum (d - mean)^j` for `j = 1..=max_moment_order`.
    pub sample_central_moments: Vec<f64>,
    /// Unbiased sample variance, `n/(n-1)` times the second central moment.
    pub sample_variance: f64,
    /// `sqrt(sample_variance / n)`.
    pub standard_error_of_mean: f64,
    /// Large-sample standard error of the sample variance,
    /// `sqrt((m4 - m2^2) / n)`; `None` for a single trial.
    pub standard_error_of_variance: Option<f64>,
    /// How often each player was the first to go broke.
    pub first_ruined_counts: Vec<u64>,
    /// How often each player ended holding everything.
    pub winner_counts: Vec<u64>,
}

fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Runs `trials` independent games. Identical inputs give bit-identical
/// statistics.
pub fn run_trials(
    config: &GameConfig,
    trials: u64,
    seed: u64,
    max_moment_order: usize,
) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required"));
    }
    let orders = max_moment_order.max(4);
    let mut power_sums = vec![BigUint::zero(); orders + 1];
    let mut first_ruined_counts = vec![0u64; config.players()];
    let mut winner_counts = vec![0u64; config.players()];
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let outcome = simulate_duration(config, &mut rng);
        first_ruined_counts[outcome.first_ruined] += 1;
        if let Some(w) = outcome.winner {
            winner_counts[w] += 1;
        }
        let d = BigUint::from(outcome.duration);
        let mut p = BigUint::from(1u32);
        for sum in power_sums.iter_mut() {
            *sum += &p;
            p *= &d;
        }
    }

    let n = Rational::from_integer(BigInt::from(trials));
    let sums: Vec<Rational> = power_sums
        .into_iter()
        .map(|s| Rational::from_integer(BigInt::from(s)))
        .collect();
    let mean = &sums[1] / &n;
    // (1/n) sum_d (d - mean)^j = (1/n) sum_k C(j,k) (-mean)^(j-k) S_k
    let central: Vec<Rational> = (1..=orders)
        .map(|j| {
            let mut acc = Rational::zero();
            let mut binom = BigInt::from(1);
            for k in 0..=j {
                if k > 0 {
                    binom = binom * BigInt::from(j - k + 1) / BigInt::from(k);
                }
                let term = num_traits::pow(-mean.clone(), j - k) * &sums[k];
                acc += term * Rational::from_integer(binom.clone());
            }
            acc / &n
        })
        .collect();
    let m2 = &central[1];
    let m4 = &central[3];
    let sample_variance = if trials > 1 {
        m2 * &n / (&n - Rational::from_integer(BigInt::from(1)))
    } else {
        Rational::zero()
    };
    let se_mean = libm::sqrt(to_f64(&(&sample_variance / &n)));
    let se_var = (trials > 1).then(|| libm::sqrt(to_f64(&((m4 - m2 * m2) / &n)).max(0.0)));

    Ok(TrialStats {
        trials,
        seed,
        stop_rule: config.stop_rule,
        sample_mean: to_f64(&mean),
        exact_mean: mean,
        sample_central_moments: central[..max_moment_order].iter().map(to_f64).collect(),
        sample_variance: to_f64(&sample_variance),
        standard_error_of_mean: se_mean,
        standard_error_of_variance: se_var,
        first_ruined_counts,
        winner_counts,
    })
}

/// Expected duration until one player holds everything:
/// `sum_{i<j} A_i A_j`.
pub fn ross_expectation(capitals: &[i64]) -> Result<Rational> {
    if capitals.len() < 2 {
        return Err(Error::Domain("a game needs at least two players"));
    }
    if capitals.iter().any(|&c| c < 1) {
        return Err(Error::Domain("capitals must be positive"));
    }
    let mut acc = BigInt::zero();
    for (i, &a) in capitals.iter().enumerate() {
        for &b in &capitals[i + 1..] {
            acc += BigInt::from(a) * BigInt::from(b);
        }
    }
    Ok(Rational::from_integer(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn cfg(c: &[u32], rule: StopRule) -> GameConfig {
        GameConfig::new(c.to_vec(), rule).unwrap()
    }

    #[test]
    fn trivial_games() {
        for seed in 0..50 {
            let mut rng = trial_rng(seed, 0);
            for rule in [StopRule::FirstRuin, StopRule::LastSurvivor] {
                assert_eq!(simulate_duration(&cfg(&[1, 1], rule), &mut rng).duration, 1);
            }
            let o = simulate_duration(&cfg(&[1, 1, 1], StopRule::FirstRuin), &mut rng);
            assert_eq!(o.duration, 1);
            assert_eq!(o.winner, None);
            let o = simulate_duration(&cfg(&[1, 1, 1], StopRule::LastSurvivor), &mut rng);
            assert!(o.duration >= 2);
            assert!(o.winner.is_some());
            assert_ne!(o.winner, Some(o.first_ruined));
        }
    }

    #[test]
    fn two_player_rules_agree_path_by_path() {
        for t in 0..200 {
            let a = simulate_duration(&cfg(&[3, 5], StopRule::FirstRuin), &mut trial_rng(9, t));
            let b = simulate_duration(&cfg(&[3, 5], StopRule::LastSurvivor), &mut trial_rng(9, t));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn uniform_below_covers_range() {
        let mut rng = trial_rng(1, 0);
        let mut seen = [0u32; 12];
        for _ in 0..12_000 {
            seen[uniform_below(&mut rng, 12) as usize] += 1;
        }
        assert!(seen.iter().all(|&c| c > 800), "{seen:?}");
    }

    #[test]
    fn ross_examples() {
        assert_eq!(ross_expectation(&[3, 4]).unwrap(), int(12));
        assert_eq!(ross_expectation(&[1, 1, 1]).unwrap(), int(3));
        assert_eq!(ross_expectation(&[1, 2, 3, 4]).unwrap(), int(35));
        assert!(ross_expectation(&[1]).is_err());
        assert!(ross_expectation(&[1, 0]).is_err());
    }

    #[test]
    fn config_and_trial_validation() {
        assert!(GameConfig::new(vec![1], StopRule::FirstRuin).is_err());
        assert!(GameConfig::new(vec![1, 0], StopRule::FirstRuin).is_err());
        assert!(run_trials(&cfg(&[1, 1], StopRule::FirstRuin), 0, 1, 2).is_err());
    }

    #[test]
    fn one_step_games_have_zero_spread() {
        let s = run_trials(&cfg(&[1, 1], StopRule::FirstRuin), 100, 7, 3).unwrap();
        assert_eq!(s.sample_mean, 1.0);
        assert_eq!(s.exact_mean, int(1));
        assert_eq!(s.sample_variance, 0.0);
        assert_eq!(s.sample_central_moments, [0.0, 0.0, 0.0]);
        assert_eq!(s.first_ruined_counts.iter().sum::<u64>(), 100);
        assert_eq!(s.winner_counts.iter().sum::<u64>(), 100);
    }
}
