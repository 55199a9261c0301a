use num_bigint::BigInt;
use num_traits::ToPrimitive;
use ruin_core::algebra::Rational;
use ruin_core::sim::{ross_expectation, run_trials, GameConfig, StopRule};

const GATE: f64 = 4.0;
const TRIALS: u64 = 20_000;

fn within(label: &str, observed: f64, expected: f64, se: f64) {
    let z = (observed - expected) / se;
    assert!(
        z.abs() <= GATE,
        "{label}: observed {observed}, expected {expected}, z = {z:.2}"
    );
}

#[test]
fn identical_inputs_reproduce_identical_stats() {
    let cfg = GameConfig::new(vec![2, 3, 4], StopRule::LastSurvivor).unwrap();
    let a = run_trials(&cfg, 2_000, 42, 4).unwrap();
    let b = run_trials(&cfg, 2_000, 42, 4).unwrap();
    assert_eq!(a, b);
    let c = run_trials(&cfg, 2_000, 43, 4).unwrap();
    assert_ne!(a.exact_mean, c.exact_mean);
}

#[test]
fn two_player_mean_variance_and_wins() {
    let (a, b) = (3u32, 5u32);
    let s = run_trials(
        &GameConfig::new(vec![a, b], StopRule::FirstRuin).unwrap(),
        TRIALS,
        11,
        4,
    )
    .unwrap();
    let (af, bf) = (f64::from(a), f64::from(b));
    within("mean", s.sample_mean, af * bf, s.standard_error_of_mean);
    let var = af * bf * (af * af + bf * bf - 2.0) / 3.0;
    within(
        "variance",
        s.sample_variance,
        var,
        s.standard_error_of_variance.unwrap(),
    );
    let n = s.trials as f64;
    let p = af / (af + bf);
    let freq = s.winner_counts[0] as f64 / n;
    within("win frequency", freq, p, (p * (1.0 - p) / n).sqrt());
}

#[test]
fn three_player_first_ruin_mean_and_variance() {
    let cap = [2u32, 3, 4];
    let s = run_trials(
        &GameConfig::new(cap.to_vec(), StopRule::FirstRuin).unwrap(),
        TRIALS,
        5,
        4,
    )
    .unwrap();
    let [a, b, c] = cap.map(f64::from);
    let t = a + b + c;
    within(
        "mean",
        s.sample_mean,
        3.0 * a * b * c / t,
        s.standard_error_of_mean,
    );
    let inner =
        a * a * b + a * a * c + a * b * b - 3.0 * a * b * c + a * c * c + b * b * c + b * c * c
            - a
            - b
            - c;
    let var = 3.0 * a * b * c * inner / (2.0 * t * t);
    within(
        "variance",
        s.sample_variance,
        var,
        s.standard_error_of_variance.unwrap(),
    );
    assert!(s.winner_counts.iter().all(|&w| w == 0));
}

#[test]
fn last_survivor_means_follow_pairwise_products() {
    for (cap, seed) in [
        (vec![1u32, 1, 1], 1u64),
        (vec![2, 2, 3], 2),
        (vec![1, 2, 1, 2], 3),
        (vec![1, 1, 1, 1, 1], 4),
    ] {
        let capitals: Vec<i64> = cap.iter().map(|&c| i64::from(c)).collect();
        let expected = ross_expectation(&capitals).unwrap().to_f64().unwrap();
        let s = run_trials(
            &GameConfig::new(cap.clone(), StopRule::LastSurvivor).unwrap(),
            TRIALS,
            seed,
            2,
        )
        .unwrap();
        within(
            &format!("{cap:?}"),
            s.sample_mean,
            expected,
            s.standard_error_of_mean,
        );
        assert_eq!(s.winner_counts.iter().sum::<u64>(), s.trials);
    }
}

#[test]
fn exact_mean_is_the_integer_average() {
    let s = run_trials(
        &GameConfig::new(vec![1, 2], StopRule::FirstRuin).unwrap(),
        1_000,
        3,
        2,
    )
    .unwrap();
    let scaled = &s.exact_mean * Rational::from_integer(BigInt::from(1000));
    assert!(scaled.is_integer());
    assert_eq!(s.exact_mean.to_f64().unwrap(), s.sample_mean);
}
