use parkmodel::{
    park_forward, park_naples_det, park_with_choices, ChoiceVector, Model, NaplesSemantics,
    ParkingResult, PreferenceTuple,
};
use proptest::prelude::*;

const JUMP: NaplesSemantics = NaplesSemantics::JumpBackThenForward;
const FIRST_FIT: NaplesSemantics = NaplesSemantics::FirstFitBackward;

fn tuple_strategy(max_n: usize) -> impl Strategy<Value = Vec<u32>> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(1..=n as u32, n))
}

fn tuple_and_bits(max_n: usize) -> impl Strategy<Value = (Vec<u32>, u64)> {
    tuple_strategy(max_n).prop_flat_map(|t| {
        let len = t.len() - 1;
        (Just(t), 0..1u64 << len)
    })
}

fn spots_are_distinct(r: &ParkingResult, n: usize) -> bool {
    match r.assignment() {
        None => true,
        Some(spots) => {
            let mut seen = vec![false; n + 1];
            spots.iter().all(|&s| {
                let s = s as usize;
                let fresh = (1..=n).contains(&s) && !seen[s];
                seen[s] = true;
                fresh
            })
        }
    }
}

proptest! {
    #[test]
    fn replay_is_deterministic((t, bits) in tuple_and_bits(12), k in 0u32..4) {
        let a = PreferenceTuple::linear(&t).unwrap();
        let b = ChoiceVector::new(bits, t.len() - 1).unwrap();
        for model in [Model::RandomDirection, Model::RandomNaples] {
            let first = park_with_choices(&a, &b, model, k, FIRST_FIT).unwrap();
            prop_assert_eq!(&first, &park_with_choices(&a, &b, model, k, FIRST_FIT).unwrap());
            prop_assert!(spots_are_distinct(&first, t.len()));
        }
    }

    #[test]
    fn all_forward_is_classic(t in tuple_strategy(12)) {
        let a = PreferenceTuple::linear(&t).unwrap();
        let classic = park_forward(&a).unwrap();
        let ones = ChoiceVector::all_ones(t.len() - 1);
        prop_assert_eq!(&classic, &park_with_choices(&a, &ones, Model::RandomDirection, 0, JUMP).unwrap());
        prop_assert_eq!(&classic, &park_with_choices(&a, &ones, Model::RandomNaples, 3, JUMP).unwrap());
    }

    #[test]
    fn all_backward_is_deterministic_naples(t in tuple_strategy(12), k in 0u32..4) {
        let a = PreferenceTuple::linear(&t).unwrap();
        let zeros = ChoiceVector::all_zeros(t.len() - 1);
        for sem in [JUMP, FIRST_FIT] {
            prop_assert_eq!(
                park_naples_det(&a, k, sem).unwrap(),
                park_with_choices(&a, &zeros, Model::RandomNaples, k, sem).unwrap()
            );
        }
    }

    #[test]
    fn unblocked_cars_ignore_their_bit((t, bits) in tuple_and_bits(10)) {
        let a = PreferenceTuple::linear(&t).unwrap();
        let b = ChoiceVector::new(bits, t.len() - 1).unwrap();
        for model in [Model::RandomDirection, Model::RandomNaples] {
            let base = park_with_choices(&a, &b, model, 1, JUMP).unwrap();
            let Some(spots) = base.assignment() else { continue };
            for car in 2..=t.len() {
                if u32::from(spots[car - 1]) == t[car - 1] {
                    let flipped = b.with_car(car, !b.forward(car));
                    prop_assert_eq!(&base, &park_with_choices(&a, &flipped, model, 1, JUMP).unwrap());
                }
            }
        }
    }
}

#[test]
fn semantics_coincide_for_k_at_most_one() {
    for n in 1..=6usize {
        let total = n.pow(n as u32);
        for idx in 0..total {
            let mut rest = idx;
            let prefs: Vec<u32> = (0..n)
                .map(|_| {
                    let v = (rest % n) as u32 + 1;
                    rest /= n;
                    v
                })
                .collect();
            let a = PreferenceTuple::linear(&prefs).unwrap();
            for bits in 0..1u64 << (n - 1) {
                let b = ChoiceVector::new(bits, n - 1).unwrap();
                for k in 0..=1 {
                    assert_eq!(
                        park_with_choices(&a, &b, Model::RandomNaples, k, JUMP).unwrap(),
                        park_with_choices(&a, &b, Model::RandomNaples, k, FIRST_FIT).unwrap(),
                        "{a} beta={bits:b} k={k}"
                    );
                }
            }
        }
    }
}

#[test]
fn semantics_differ_at_k3() {
    let a = PreferenceTuple::linear(&[5, 5, 1, 5, 2]).unwrap();
    let jump = park_naples_det(&a, 3, JUMP).unwrap();
    let first = park_naples_det(&a, 3, FIRST_FIT).unwrap();
    assert_eq!(jump.assignment(), Some(&[5, 2, 1, 3, 4][..]));
    assert_eq!(first.assignment(), Some(&[5, 4, 1, 3, 2][..]));
}

#[test]
fn input_validation() {
    assert!(PreferenceTuple::linear(&[]).is_err());
    assert!(PreferenceTuple::linear(&[0, 1]).is_err());
    assert!(PreferenceTuple::linear(&[1, 3]).is_err());
    assert!(PreferenceTuple::circular(&[1, 3]).is_ok());
    let a = PreferenceTuple::linear(&[1, 1, 1]).unwrap();
    let short = ChoiceVector::new(0, 1).unwrap();
    assert!(park_with_choices(&a, &short, Model::RandomNaples, 1, JUMP).is_err());
    let c = PreferenceTuple::circular(&[1, 1]).unwrap();
    assert!(park_forward(&c).is_err());
    assert_eq!(
        "2,2,2".parse::<PreferenceTuple>().unwrap(),
        PreferenceTuple::linear(&[2, 2, 2]).unwrap()
    );
    assert_eq!(
        PreferenceTuple::linear(&[4, 3, 3, 1]).unwrap().to_string(),
        "4,3,3,1"
    );
}
