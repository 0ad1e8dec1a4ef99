use parkmodel::verify::{compare_naples_semantics, verify_recursion_brute_force};
use parkmodel::{naples_count, BigRational, BigUint, NaplesSemantics};

#[test]
fn first_fit_matches_counting_recursion() {
    for k in 1..=3 {
        for row in compare_naples_semantics(6, k).unwrap() {
            assert_eq!(row.recursion, naples_count(row.n, k));
            assert_eq!(
                BigUint::from(row.first_fit),
                row.recursion,
                "k={k} n={}",
                row.n
            );
        }
    }
}

#[test]
fn jump_back_departs_for_larger_k() {
    let rows = compare_naples_semantics(5, 2).unwrap();
    let jump: Vec<u64> = rows.iter().map(|r| r.jump_back).collect();
    assert_eq!(jump, vec![1, 4, 27, 244, 2808]);
    for row in compare_naples_semantics(5, 1).unwrap() {
        assert_eq!(row.jump_back, row.first_fit);
    }
}

#[test]
fn default_is_first_fit() {
    assert_eq!(
        NaplesSemantics::default(),
        NaplesSemantics::FirstFitBackward
    );
}

#[test]
fn expected_value_recursion_needs_first_fit() {
    let ps: Vec<_> = [(1, 4), (1, 2), (3, 4)]
        .iter()
        .map(|&(a, b)| BigRational::new(a.into(), b.into()))
        .collect();
    let first = verify_recursion_brute_force(5, 2, NaplesSemantics::FirstFitBackward, &ps).unwrap();
    assert!(first.iter().all(|r| r.agrees()));
    let jump =
        verify_recursion_brute_force(5, 2, NaplesSemantics::JumpBackThenForward, &ps).unwrap();
    assert!(jump.iter().any(|r| !r.agrees()));
}
