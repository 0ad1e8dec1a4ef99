use num_traits::ToPrimitive;
use parkmodel::montecarlo::tuple_space_size;
use parkmodel::{
    estimate_expected_total, estimate_prob, expected_random_naples, prob_model1, prob_model2,
    BigRational, Model, NaplesSemantics, PreferenceTuple,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIRST_FIT: NaplesSemantics = NaplesSemantics::FirstFitBackward;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn calibration_against_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut beyond3 = 0;
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    while compared < 60 {
        let n = rng.random_range(2..=5u32);
        let prefs: Vec<u32> = (0..n).map(|_| rng.random_range(1..=n)).collect();
        let a = PreferenceTuple::linear(&prefs).unwrap();
        let p = q(rng.random_range(1..=7), 8);
        let (model, k) = match compared % 3 {
            0 => (Model::RandomDirection, 0),
            1 => (Model::RandomNaples, 1),
            _ => (Model::RandomNaples, 2),
        };
        let exact = match model {
            Model::RandomDirection => prob_model1(&a).unwrap(),
            Model::RandomNaples => prob_model2(&a, k, FIRST_FIT).unwrap(),
        }
        .eval(&p)
        .to_f64()
        .unwrap();
        if exact == 0.0 || exact == 1.0 {
            continue;
        }
        let est = estimate_prob(&a, model, k, FIRST_FIT, &p, 20_000, compared as u64).unwrap();
        let z = est.z_score(exact);
        worst = worst.max(z);
        beyond3 += usize::from(z > 3.0);
        compared += 1;
    }
    assert!(worst < 5.0, "worst z = {worst}");
    assert!(beyond3 <= 3, "{beyond3} comparisons beyond 3 sigma");
}

#[test]
fn bernoulli_stderr() {
    let a = PreferenceTuple::linear(&[1, 2, 2, 1]).unwrap();
    let est = estimate_prob(
        &a,
        Model::RandomDirection,
        0,
        FIRST_FIT,
        &q(1, 2),
        100_000,
        5,
    )
    .unwrap();
    let expect = (est.mean * (1.0 - est.mean) / 100_000.0).sqrt();
    assert_eq!(est.stderr, expect);
    assert_eq!(est.trials, 100_000);
    assert_eq!(est.seed, 5);
}

#[test]
fn small_total_estimates() {
    let est = estimate_expected_total(
        3,
        Model::RandomDirection,
        0,
        FIRST_FIT,
        &q(1, 3),
        40_000,
        4,
        11,
    )
    .unwrap();
    let scale = tuple_space_size(3);
    assert!((est.mean * scale - 16.0).abs() < 4.0 * est.stderr * scale);

    let est = estimate_expected_total(
        6,
        Model::RandomNaples,
        1,
        FIRST_FIT,
        &q(1, 2),
        50_000,
        4,
        12,
    )
    .unwrap();
    let scale = tuple_space_size(6);
    assert!((est.mean * scale - 23121.375).abs() < 4.0 * est.stderr * scale);

    let exact = expected_random_naples(5, 2, &q(1, 3))
        .unwrap()
        .to_f64()
        .unwrap();
    let est = estimate_expected_total(
        5,
        Model::RandomNaples,
        2,
        FIRST_FIT,
        &q(1, 3),
        50_000,
        2,
        13,
    )
    .unwrap();
    let scale = tuple_space_size(5);
    assert!((est.mean * scale - exact).abs() < 4.0 * est.stderr * scale);
}

#[test]
fn reproducible_across_thread_counts() {
    let a = PreferenceTuple::linear(&[3, 3, 1, 2, 2]).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                (
                    estimate_prob(&a, Model::RandomNaples, 1, FIRST_FIT, &q(1, 2), 300_000, 77)
                        .unwrap(),
                    estimate_expected_total(
                        7,
                        Model::RandomNaples,
                        1,
                        FIRST_FIT,
                        &q(1, 2),
                        150_000,
                        1,
                        77,
                    )
                    .unwrap(),
                )
            })
    };
    assert_eq!(run(1), run(4));
}
