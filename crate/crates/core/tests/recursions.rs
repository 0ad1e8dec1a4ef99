use parkmodel::verify::verify_recursion_brute_force;
use parkmodel::{
    expected_random_direction, expected_random_naples, naples_count, parking_count, BigRational,
    BigUint, NaplesSemantics, RecursionCache,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

#[test]
fn known_sequences() {
    let parking = [1u64, 3, 16, 125, 1296, 16807, 262144, 4782969];
    let naples1 = [1u64, 4, 24, 203, 2225, 30067, 484071, 9057316];
    let naples2 = [1u64, 4, 27, 240, 2731, 38034, 627405];
    for (i, v) in parking.iter().enumerate() {
        assert_eq!(parking_count(i + 1), big(*v));
        assert_eq!(expected_random_direction(i + 1), big(*v));
    }
    for (i, v) in naples1.iter().enumerate() {
        assert_eq!(naples_count(i + 1, 1), big(*v));
    }
    for (i, v) in naples2.iter().enumerate() {
        assert_eq!(naples_count(i + 1, 2), big(*v));
    }
    assert_eq!(
        expected_random_naples(6, 1, &q(1, 2)).unwrap(),
        q(184971, 8)
    );
    assert_eq!(
        expected_random_naples(8, 1, &q(1, 2)).unwrap(),
        q(108464465, 16)
    );
}

#[test]
fn k_zero_is_classic() {
    for n in 1..=10 {
        assert_eq!(naples_count(n, 0), parking_count(n));
    }
}

#[test]
fn endpoints_of_p() {
    for k in 0..=3 {
        let mut zero = RecursionCache::new(k, q(0, 1)).unwrap();
        let mut one = RecursionCache::new(k, q(1, 1)).unwrap();
        for n in 1..=12 {
            let p = BigRational::from_integer(zero.parking(n).clone().into());
            assert_eq!(zero.expected(n), &p, "k={k} n={n}");
            let nk = BigRational::from_integer(one.naples(n).clone().into());
            assert_eq!(one.expected(n), &nk, "k={k} n={n}");
        }
    }
}

#[test]
fn increasing_in_p() {
    let ps: Vec<_> = (0..=8).map(|i| q(i, 8)).collect();
    for k in 1..=3 {
        for n in 2..=10 {
            let vals: Vec<_> = ps
                .iter()
                .map(|p| expected_random_naples(n, k, p).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[0] < w[1]), "k={k} n={n}");
        }
    }
}

#[test]
fn cache_grows_monotonically() {
    let mut c = RecursionCache::new(1, q(1, 2)).unwrap();
    c.fill(5);
    assert_eq!(c.filled_to(), 5);
    let t5 = c.expected(5).clone();
    c.fill(9);
    assert_eq!(c.expected(5), &t5);
    assert_eq!(t5, q(6977, 4));
}

#[test]
fn rejects_bad_probability() {
    assert!(RecursionCache::new(1, q(-1, 2)).is_err());
    assert!(expected_random_naples(3, 1, &q(3, 2)).is_err());
}

#[test]
fn brute_force_agreement() {
    let ps = [q(0, 1), q(1, 4), q(1, 2), q(3, 4), q(1, 1)];
    let rows =
        verify_recursion_brute_force(5, 1, NaplesSemantics::JumpBackThenForward, &ps).unwrap();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.agrees()));
    for k in 2..=3 {
        let rows =
            verify_recursion_brute_force(5, k, NaplesSemantics::FirstFitBackward, &ps).unwrap();
        assert!(rows.iter().all(|r| r.agrees()), "k={k}");
    }
}
