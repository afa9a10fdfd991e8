use proptest::prelude::*;

use urm::formats::{from_json, to_json, InstanceDoc, MultisetDoc, PuzzleDoc};
use urm_core::constructions::best_construction;
use urm_core::zebra::{default_naming, puzzle_from_multiset};

/// Normalized multiset documents: ascending, non-empty element lists.
fn multiset_doc() -> impl Strategy<Value = MultisetDoc> {
    (1..=24usize).prop_flat_map(|m| {
        let full = (1u32 << m) - 1;
        prop::collection::vec(1..=full, 0..20).prop_map(move |masks| MultisetDoc {
            m,
            components: masks
                .into_iter()
                .map(|b| (1..=m).filter(|e| b >> (e - 1) & 1 == 1).collect())
                .collect(),
        })
    })
}

proptest! {
    #[test]
    fn multiset_documents_round_trip(doc in multiset_doc()) {
        let text = to_json(&doc);
        let ms = from_json::<MultisetDoc>(&text).unwrap().to_multiset().unwrap();
        prop_assert_eq!(to_json(&MultisetDoc::from_multiset(&ms)), text);
    }

    #[test]
    fn instance_documents_round_trip(n in 1..=20usize, m in 1..=8usize) {
        let inst = best_construction(n, m).unwrap();
        let text = to_json(&InstanceDoc::from_instance(&inst));
        let back = from_json::<InstanceDoc>(&text).unwrap().to_instance().unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(to_json(&InstanceDoc::from_instance(&back)), text);
    }

    #[test]
    fn puzzle_documents_round_trip(n in 1..=6usize, m in 1..=6usize, seed in any::<u64>()) {
        let inst = best_construction(n, m).unwrap();
        let pz = puzzle_from_multiset(&inst, default_naming(n, m), seed).unwrap();
        let text = to_json(&PuzzleDoc::from_puzzle(&pz));
        let back = from_json::<PuzzleDoc>(&text).unwrap().to_puzzle().unwrap();
        prop_assert_eq!(&back, &pz);
        prop_assert_eq!(to_json(&PuzzleDoc::from_puzzle(&back)), text);
    }
}
