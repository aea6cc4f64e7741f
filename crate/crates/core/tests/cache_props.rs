use dessin_core::algebra::{rat, LaurentPolynomial};
use dessin_core::npoint::suv_alphabet;
use dessin_core::virasoro::{CorrelatorTable, PartitionKey, Strategy as Elimination, VirasoroEngine, VirasoroError};
use proptest::prelude::*;

fn table_of(entries: Vec<(u32, Vec<u32>, i64, [i32; 3])>) -> CorrelatorTable {
    let mut t = CorrelatorTable::new();
    for (g, parts, c, e) in entries {
        t.insert(PartitionKey::new(g, &parts), LaurentPolynomial::monomial(&suv_alphabet(), &e, rat(c, 7)));
    }
    t
}

fn entries() -> impl Strategy<Value = Vec<(u32, Vec<u32>, i64, [i32; 3])>> {
    let entry = (0u32..4, prop::collection::vec(1u32..9, 1..5), -50i64..50, prop::array::uniform3(0i32..6));
    prop::collection::vec(entry, 100)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn json_round_trip(e in entries()) {
        let t = table_of(e);
        let back = CorrelatorTable::from_json_str(&t.to_json_string()).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.to_json_string(), t.to_json_string());
    }

    #[test]
    fn file_round_trip(e in entries()) {
        let t = table_of(e);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/table.json");
        t.save(&path).unwrap();
        prop_assert_eq!(CorrelatorTable::load(&path).unwrap(), t);
    }
}

#[test]
fn wrong_version_is_rejected() {
    let text = table_of(vec![(0, vec![1], 1, [1, 1, 1])]).to_json_string().replace("\"version\":1", "\"version\":2");
    assert!(matches!(CorrelatorTable::from_json_str(&text), Err(VirasoroError::Version { found: 2, .. })));
}

#[test]
fn extending_a_loaded_table_keeps_every_entry() {
    let mut e = VirasoroEngine::new();
    e.raw(1, &[3, 2]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.json");
    e.table().save(&path).unwrap();

    let loaded = CorrelatorTable::load(&path).unwrap();
    let mut warm = VirasoroEngine::with_table(loaded.clone(), Elimination::Largest);
    let cold = VirasoroEngine::new().raw(2, &[5, 4]);
    assert_eq!(warm.raw(2, &[5, 4]), cold);
    assert!(warm.table().stats().hits > 0);
    let grown = warm.into_table();
    assert!(grown.len() > loaded.len());
    for (k, v) in loaded.entries() {
        assert_eq!(grown.get(k), Some(v));
    }
}
