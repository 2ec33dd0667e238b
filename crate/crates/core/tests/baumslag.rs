use proptest::prelude::*;

use surfgroup::baumslag::{BaumslagInstance, BoxOutcome};
use surfgroup::exec::Execution;
use surfgroup::{Error, Word};

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn word_over_f3(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=3u32, any::<bool>()), 1..=max_len).prop_map(|tokens| {
        let text: Vec<String> = tokens
            .iter()
            .map(|&(g, inv)| format!("x{g}{}", if inv { "-" } else { "" }))
            .collect();
        w(&text.join(" "))
    })
}

#[test]
fn commuting_pairs_are_rejected_because_they_collapse() {
    let u = w("x1 x2");
    let a1 = u.pow(-3);
    assert!(u.pow(3).multiply(&a1).is_identity());
    assert!(matches!(
        BaumslagInstance::new(u, vec![a1]),
        Err(Error::CommutingPair(_))
    ));
    assert!(matches!(
        BaumslagInstance::new(w("x1"), vec![w("x1 x1")]),
        Err(Error::CommutingPair(_))
    ));
}

#[test]
fn thresholds_for_simple_instances() {
    let inst = BaumslagInstance::new(w("x1"), vec![w("x2")]).unwrap();
    assert_eq!(inst.find_n0(50, None).unwrap(), 1);
    let u = w("x1 x2 x1-");
    let inst = BaumslagInstance::new(u.clone(), vec![u.pow(-2).multiply(&w("x3"))]).unwrap();
    assert_eq!(inst.find_n0(50, None).unwrap(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The box search agrees with evaluating every word of the box directly,
    /// and the closed-form word equals the iterated product.
    #[test]
    fn box_search_matches_direct_evaluation(
        u in word_over_f3(4),
        a in prop::collection::vec(word_over_f3(4), 1..=2),
        n_max in 1i64..=4,
    ) {
        prop_assume!(!u.is_identity() && a.iter().all(|ai| !ai.is_identity() && !u.commutes(ai)));
        let inst = BaumslagInstance::new(u.clone(), a.clone()).unwrap();

        let range: Vec<i64> = (1..=n_max).chain((1..=n_max).map(|n| -n)).collect();
        let mut vectors: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..a.len() {
            vectors = vectors
                .into_iter()
                .flat_map(|v| range.iter().map(move |&n| [v.clone(), vec![n]].concat()))
                .collect();
        }
        let mut first_failure = None;
        for v in &vectors {
            let product = v.iter().zip(&a).fold(Word::identity(), |acc, (&n, ai)| {
                acc.multiply(&u.pow(n)).multiply(ai)
            });
            prop_assert_eq!(&inst.word(v).unwrap(), &product);
            if first_failure.is_none() && product.is_identity() {
                first_failure = Some(v.clone());
            }
        }

        let seq = inst.check_box_with(1, n_max, None, Execution::Sequential).unwrap();
        let par = inst.check_box_with(1, n_max, None, Execution::Parallel).unwrap();
        prop_assert_eq!(&seq, &par);
        match (&seq, &first_failure) {
            (BoxOutcome::Holds, None) => {}
            (BoxOutcome::Fails(v), Some(_)) => prop_assert!(inst.word(v).unwrap().is_identity()),
            _ => prop_assert!(false, "search {:?} vs direct {:?}", seq, first_failure),
        }
    }
}
