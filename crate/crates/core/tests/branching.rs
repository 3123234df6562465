use proptest::prelude::*;

use symbranch::abelian::Weight;
use symbranch::localize::{Caps, Engine};
use symbranch::oracle::oracle_branch;
use symbranch::pairs::PairSpec;
use symbranch::Error;

fn engine(pair: &str) -> Engine {
    Engine::new(PairSpec::parse(pair).unwrap(), Caps::default()).unwrap()
}

fn agree(e: &Engine, lambda: &Weight) {
    let t = e.branch_table(lambda).unwrap();
    t.check_invariants().unwrap();
    let oracle = oracle_branch(e.pair(), lambda, e.caps().max_dim).unwrap();
    let got: Vec<_> = t.nonzero().into_iter().map(|(mu, m)| (mu, m as u64)).collect();
    let want: Vec<_> = oracle.entries.into_iter().collect();
    assert_eq!(got, want, "{} λ={lambda}", e.pair());
}

#[test]
fn diag_u3_matches_oracle() {
    let e = engine("diag:u3");
    for lambda in e.pair().g().dominant_box(0, 1) {
        agree(&e, &lambda);
    }
    agree(&e, &Weight::new(vec![2, 1, 0, 1, 0, 0]));
}

#[test]
fn negative_entries_and_shifts() {
    let e = engine("upq:2,1");
    for lambda in e.pair().g().dominant_box(-2, 1) {
        agree(&e, &lambda);
    }
    let e = engine("diag:u2");
    agree(&e, &Weight::new(vec![1, -2, 0, -1]));
}

#[test]
fn upq32_corner() {
    let e = engine("upq:3,2");
    for lambda in [vec![1, 0, 0, 0, 0], vec![1, 1, 0, 0, 0], vec![2, 1, 0, 0, 0], vec![1, 1, 1, 0, -1]] {
        agree(&e, &Weight::new(lambda));
    }
}

#[test]
fn invalid_input_is_rejected() {
    let e = engine("upq:2,1");
    assert!(matches!(e.branch_table(&Weight::new(vec![0, 1, 0])), Err(Error::NotDominant(_))));
    assert!(matches!(
        e.branch_mult(&Weight::new(vec![1, 0, 0]), &Weight::new(vec![0, 1, 0])),
        Err(Error::NotDominant(_))
    ));
    let tight = Engine::new(PairSpec::parse("upq:3,1").unwrap(), Caps { max_weyl: 10, ..Caps::default() });
    assert!(matches!(tight, Err(Error::WeylCap { .. })));
    let small = Engine::new(PairSpec::parse("upq:2,1").unwrap(), Caps { max_dim: 5, ..Caps::default() }).unwrap();
    assert!(matches!(small.branch_table(&Weight::new(vec![2, 1, 0])), Err(Error::DimensionCap { .. })));
}

#[test]
fn parallel_tables_are_deterministic() {
    let e = engine("upq:2,2");
    let lambda = Weight::new(vec![2, 1, 1, 0]);
    let a = e.branch_table(&lambda).unwrap();
    let b = e.branch_table(&lambda).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_upq21_agrees(mut v in prop::collection::vec(-2i64..4, 3)) {
        v.sort_unstable_by(|a, b| b.cmp(a));
        agree(&engine("upq:2,1"), &Weight::new(v));
    }

    #[test]
    fn random_clebsch_gordan(n in 0i64..12, m in 0i64..12) {
        let e = engine("diag:su2");
        let t = e.branch_table(&Weight::new(vec![n, m])).unwrap();
        let total: i64 = t.nonzero().iter().map(|(mu, c)| c * (mu.0[0] + 1)).sum();
        prop_assert_eq!(total, (n + 1) * (m + 1));
    }
}
