use num_bigint::BigInt;
use ruin_core::algebra::Rational;
use ruin_core::oracle::{oracle_first_ruin_probabilities, ChainOracle};

fn r(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[test]
fn mean_duration_closed_forms() {
    for total in 2..=12u32 {
        let oracle = ChainOracle::new(2, total).unwrap();
        let f = oracle.binomial_moments(1).unwrap();
        for (i, s) in oracle.space().states().iter().enumerate() {
            assert_eq!(f[1][i], r(i64::from(s[0] * s[1])), "{s:?}");
        }
    }
    for total in 3..=10u32 {
        let oracle = ChainOracle::new(3, total).unwrap();
        let f = oracle.binomial_moments(1).unwrap();
        for (i, s) in oracle.space().states().iter().enumerate() {
            let engel = Rational::new(BigInt::from(3 * s[0] * s[1] * s[2]), BigInt::from(total));
            assert_eq!(f[1][i], engel, "{s:?}");
        }
    }
}

#[test]
fn ruin_probabilities_sum_to_one_and_match_two_player_formula() {
    for (players, max_total) in [(2usize, 12u32), (3, 10)] {
        for total in players as u32..=max_total {
            let oracle = ChainOracle::new(players, total).unwrap();
            let probs = oracle.first_ruin_probabilities().unwrap();
            for (i, s) in oracle.space().states().iter().enumerate() {
                let sum: Rational = probs.iter().map(|row| row[i].clone()).sum();
                assert_eq!(sum, r(1), "{s:?}");
                if players == 2 {
                    // player 1 wins with probability A / (A + B)
                    let win = Rational::new(BigInt::from(s[0]), BigInt::from(total));
                    assert_eq!(r(1) - &probs[0][i], win);
                }
            }
        }
    }
}

#[test]
fn ruin_probabilities_are_permutation_equivariant() {
    let base = [2i64, 3, 5];
    let p = oracle_first_ruin_probabilities(&base).unwrap();
    let perms = [[0usize, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for perm in perms {
        let permuted: Vec<i64> = perm.iter().map(|&i| base[i]).collect();
        let q = oracle_first_ruin_probabilities(&permuted).unwrap();
        for (slot, &i) in perm.iter().enumerate() {
            assert_eq!(q[slot], p[i], "perm {perm:?}");
        }
    }
}

#[test]
fn rich_player_ruin_decays() {
    let values: Vec<Rational> = (1..=10)
        .map(|n| oracle_first_ruin_probabilities(&[1, 1, n]).unwrap()[2].clone())
        .collect();
    for w in values.windows(2) {
        assert!(w[1] < w[0], "{} !< {}", w[1], w[0]);
    }
    assert!(values.iter().all(|v| *v > r(0)));
}
