//! Exact ground truth at fixed capitals.
//!
//! With the total capital `N` fixed, the game is an absorbing chain on the
//! compositions of `N`. Interior values satisfy averaging equations
//! `h(x) - w * sum_t h(x + t) = b(x)`, so binomial moments and ruin
//! probabilities are solutions of one shared matrix `I - w * adjacency`,
//! factored once.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::linear::ExactLu;
use crate::algebra::Rational;
use crate::{Error, Result};

/// Interior states (every capital at least 1) for a fixed total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    players: usize,
    total: u32,
    states: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
}

impl StateSpace {
    pub fn players(&self) -> usize {
        self.players
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    /// Interior states in lexicographic order.
    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, state: &[u32]) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// States one transfer away, giver-major. Absorbing neighbours are
    /// included; they have a zero coordinate.
    fn neighbours(&self, state: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
        let n = self.players;
        let state = state.to_vec();
        (0..n).flat_map(move |giver| {
            let state = state.clone();
            (0..n).filter(move |&r| r != giver).map(move |receiver| {
                let mut next = state.clone();
                next[giver] -= 1;
                next[receiver] += 1;
                next
            })
        })
    }
}

/// All capital vectors with entries `>= 1` summing to `total`, in
/// lexicographic order.
pub fn enumerate_interior_states(players: usize, total: u32) -> Result<StateSpace> {
    if players != 2 && players != 3 {
        return Err(Error::UnsupportedPlayers { players });
    }
    if (total as usize) < players {
        return Err(Error::Domain(
            "total capital must be at least the number of players",
        ));
    }
    let mut states = Vec::new();
    match players {
        2 => {
            for a in 1..total {
                states.push(alloc::vec![a, total - a]);
            }
        }
        _ => {
            for a in 1..total - 1 {
                for b in 1..total - a {
                    states.push(alloc::vec![a, b, total - a - b]);
                }
            }
        }
    }
    let index = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    Ok(StateSpace {
        players,
        total,
        states,
        index,
    })
}

/// Factored averaging operator for one total capital; answers every query
/// for every interior state at once.
#[derive(Clone, Debug)]
pub struct ChainOracle {
    space: StateSpace,
    weight: Rational,
    lu: ExactLu,
}

impl ChainOracle {
    pub fn new(players: usize, total: u32) -> Result<Self> {
        let space = enumerate_interior_states(players, total)?;
        let transfers = players * (players - 1);
        let weight = Rational::new(BigInt::one(), BigInt::from(transfers));
        let n = space.len();
        let mut matrix = alloc::vec![alloc::vec![Rational::zero(); n]; n];
        for (i, s) in space.states.iter().enumerate() {
            matrix[i][i] += Rational::one();
            for next in space.neighbours(s) {
                if let Some(j) = space.index_of(&next) {
                    matrix[i][j] -= &weight;
                }
            }
        }
        let lu = ExactLu::factor(&matrix)?;
        Ok(ChainOracle { space, weight, lu })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    /// `table[i][s]` is `E[C(D, i)]` from interior state `s`, for
    /// `i = 0..=max_order`.
    pub fn binomial_moments(&self, max_order: usize) -> Result<Vec<Vec<Rational>>> {
        let n = self.space.len();
        let mut table = Vec::with_capacity(max_order + 1);
        table.push(alloc::vec![Rational::one(); n]);
        for order in 1..=max_order {
            let prev = &table[order - 1];
            // f_0 is 1 on absorbing states, higher orders vanish there
            let absorbed = if order == 1 {
                Rational::one()
            } else {
                Rational::zero()
            };
            let rhs: Vec<Rational> = self
                .space
                .states
                .iter()
                .map(|s| {
                    let mut acc = Rational::zero();
                    for next in self.space.neighbours(s) {
                        match self.space.index_of(&next) {
                            Some(j) => acc += &prev[j],
                            None => acc += &absorbed,
                        }
                    }
                    acc * &self.weight
                })
                .collect();
            table.push(self.lu.solve(&rhs)?);
        }
        Ok(table)
    }

    /// `table[p][s]`: probability that player `p` is the first to reach 0
    /// from interior state `s`.
    pub fn first_ruin_probabilities(&self) -> Result<Vec<Vec<Rational>>> {
        (0..self.space.players)
            .map(|p| {
                let rhs: Vec<Rational> = self
                    .space
                    .states
                    .iter()
                    .map(|s| {
                        let hits = self.space.neighbours(s).filter(|next| next[p] == 0).count();
                        Rational::from_integer(BigInt::from(hits)) * &self.weight
                    })
                    .collect();
                self.lu.solve(&rhs)
            })
            .collect()
    }
}

/// Exact binomial moments and first-ruin probabilities at one capital
/// vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub capitals: Vec<u32>,
    /// `E[C(D, i)]` for `i = 0..=max_order`.
    pub binomial_moments: Vec<Rational>,
    /// Per player, the probability of being the first to go broke.
    pub first_ruin_probabilities: Vec<Rational>,
}

fn validate_capitals(capitals: &[i64]) -> Result<Vec<u32>> {
    if capitals.len() != 2 && capitals.len() != 3 {
        return Err(Error::UnsupportedPlayers {
            players: capitals.len(),
        });
    }
    capitals
        .iter()
        .map(|&c| {
            u32::try_from(c)
                .ok()
                .filter(|&c| c >= 1)
                .ok_or(Error::Domain("capitals must be positive"))
        })
        .collect()
}

pub fn oracle_binomial_moments(capitals: &[i64], max_order: usize) -> Result<OracleResult> {
    let capitals = validate_capitals(capitals)?;
    let oracle = ChainOracle::new(capitals.len(), capitals.iter().sum())?;
    let idx = oracle.space.index_of(&capitals).expect("interior state");
    let binomial_moments = oracle
        .binomial_moments(max_order)?
        .into_iter()
        .map(|mut row| row.swap_remove(idx))
        .collect();
    let first_ruin_probabilities = oracle
        .first_ruin_probabilities()?
        .into_iter()
        .map(|mut row| row.swap_remove(idx))
        .collect();
    Ok(OracleResult {
        capitals,
        binomial_moments,
        first_ruin_probabilities,
    })
}

pub fn oracle_first_ruin_probabilities(capitals: &[i64]) -> Result<Vec<Rational>> {
    let capitals = validate_capitals(capitals)?;
    let oracle = ChainOracle::new(capitals.len(), capitals.iter().sum())?;
    let idx = oracle.space.index_of(&capitals).expect("interior state");
    Ok(oracle
        .first_ruin_probabilities()?
        .into_iter()
        .map(|mut row| row.swap_remove(idx))
        .collect())
}
