use funalign::capacity::{capacity_symmetric, luser_linear_capacity};
use funalign::code::LinearCode;
use funalign::network::{Network, NetworkParamsSym};
use funalign::oracle::{oracle_search, SearchMode, SearchOutcome};
use funalign::verify::{decoder_exists, simulate};
use funalign::{Gf2Matrix, Rate};
use proptest::prelude::*;

const EXHAUSTIVE: SearchMode = SearchMode::Exhaustive { budget: 1 << 24 };

fn best_single_use(net: &Network, max_k: usize) -> usize {
    (1..=max_k)
        .take_while(|&k| {
            matches!(
                oracle_search(net, k, 1, EXHAUSTIVE, 2).unwrap(),
                SearchOutcome::Achievable(_)
            )
        })
        .last()
        .unwrap_or(0)
}

#[test]
fn single_use_optimum_brackets_the_capacity() {
    for users in 2..=3 {
        for m in 0..=3u32 {
            for n in 0..=3u32 {
                if m.max(n) == 0 {
                    continue;
                }
                let net: Network = NetworkParamsSym::new(m, n, users).unwrap().into();
                let cap: Rate = if users == 2 {
                    capacity_symmetric(m, n)
                } else {
                    luser_linear_capacity(m, n, users).unwrap()
                };
                let best = Rate::from_integer(best_single_use(&net, 3) as i64);
                assert!(best <= cap, "({m},{n},{users}): {best} > {cap}");
                assert!(best >= cap.floor(), "({m},{n},{users}): {best} < floor {cap}");
            }
        }
    }
}

#[test]
fn witnesses_decode() {
    let net: Network = NetworkParamsSym::new(2, 3, 3).unwrap().into();
    match oracle_search(&net, 1, 1, EXHAUSTIVE, 3).unwrap() {
        SearchOutcome::Achievable(code) => assert!(simulate(&code, 5, 100).unwrap()),
        other => panic!("expected a witness, got {other:?}"),
    }
}

#[test]
fn two_uses_on_one_two() {
    // Capacity 1: rate 1 over two uses exists, rate 3/2 exceeds the cut-set bound.
    let net: Network = NetworkParamsSym::new(1, 2, 2).unwrap().into();
    assert!(matches!(
        oracle_search(&net, 2, 2, EXHAUSTIVE, 2).unwrap(),
        SearchOutcome::Achievable(_)
    ));
    assert_eq!(oracle_search(&net, 3, 2, EXHAUSTIVE, 2).unwrap(), SearchOutcome::Impossible);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn decodable_random_codes_simulate(
        m in 0u32..4, n in 1u32..4, k in 1usize..3, seed in any::<u64>(),
        bits in proptest::collection::vec(any::<bool>(), 2 * 3 * 2),
    ) {
        let net: Network = NetworkParamsSym::new(m, n, 2).unwrap().into();
        let q = m.max(n) as usize;
        let mut it = bits.into_iter();
        let vs: Vec<Gf2Matrix> = (0..2)
            .map(|_| Gf2Matrix::from_fn(q, k, |_, _| it.next().unwrap_or(false)))
            .collect();
        let code = LinearCode::new(net, 1, k, vs, "random").unwrap();
        if decoder_exists(&code).unwrap().pass {
            prop_assert!(simulate(&code, seed, 20).unwrap());
        }
    }
}
