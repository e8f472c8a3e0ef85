mod common;

use common::*;
use eewt_core::storage::{self, ShareFile, StorageError};
use eewt_core::{IndexSet, NestedScheme};
use proptest::prelude::*;
use rand::RngCore;

fn reference() -> NestedScheme {
    let f = eewt_core::Field::from_modulus(2, 3, 0xB).unwrap();
    NestedScheme::eval(&f, 7, 5, 3, None).unwrap()
}

fn pick(files: &[ShareFile], j: &IndexSet) -> Vec<ShareFile> {
    j.iter().map(|i| files[i].clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn round_trip_random_messages(seed: u64, len in 0usize..=4096) {
        let s = reference();
        let mut msg = vec![0u8; len];
        rng_for(seed).fill_bytes(&mut msg);
        let files = storage::split(&s, &msg, seed).unwrap();
        // files survive serialization
        let files: Vec<ShareFile> = files.iter().map(|f| ShareFile::from_bytes(&f.to_bytes()).unwrap()).collect();
        for j in IndexSet::combinations(7, 5) {
            prop_assert_eq!(&storage::reconstruct(&s, &pick(&files, &j)).unwrap(), &msg);
        }
    }

    #[test]
    fn padding_is_unambiguous(seed: u64, len in 0usize..64, m in 1u32..=16, k in 1usize..6) {
        let mut msg = vec![0u8; len];
        rng_for(seed).fill_bytes(&mut msg);
        // trailing zeros must survive
        msg.extend([0, 0]);
        let symbols = storage::pack_message(&msg, m, k);
        prop_assert_eq!(symbols.len() % k, 0);
        prop_assert!(symbols.iter().all(|g| (g.value() as u32) < 1 << m));
        prop_assert_eq!(storage::unpack_message(&symbols, m).unwrap(), msg);
    }
}

#[test]
fn split_is_deterministic() {
    let s = reference();
    let a = storage::split(&s, b"same input", 3).unwrap();
    let b = storage::split(&s, b"same input", 3).unwrap();
    let c = storage::split(&s, b"same input", 4).unwrap();
    assert_eq!(
        a.iter().map(ShareFile::to_bytes).collect::<Vec<_>>(),
        b.iter().map(ShareFile::to_bytes).collect::<Vec<_>>()
    );
    assert_ne!(a[0].payload, c[0].payload);
}

#[test]
fn too_few_shares() {
    let s = reference();
    let files = storage::split(&s, b"secret", 1).unwrap();
    let j = IndexSet::new(7, vec![0, 2, 4, 6]).unwrap();
    match storage::reconstruct(&s, &pick(&files, &j)) {
        Err(StorageError::InsufficientShares { have: 4, need: 5 }) => {}
        other => panic!("{other:?}"),
    }
    let mut dup = pick(&files, &j);
    dup.push(files[0].clone());
    assert!(matches!(
        storage::reconstruct(&s, &dup),
        Err(StorageError::InsufficientShares { have: 4, need: 5 })
    ));
}

#[test]
fn tampered_share_detected() {
    let s = reference();
    let files = storage::split(&s, &[7u8; 100], 1).unwrap();
    let mut all = files.clone();
    all[3].payload[2] ^= 1;
    // all 7 shares give an overdetermined system, so the edit is caught
    assert!(matches!(storage::reconstruct(&s, &all), Err(StorageError::CorruptShare(_))));
    let mut bytes = files[0].to_bytes();
    bytes[0] = b'X';
    assert!(ShareFile::from_bytes(&bytes).is_err());
}

#[test]
fn adversary_view_on_wiretap_sized_sets() {
    let s = reference();
    let files = storage::split(&s, &[1u8; 300], 9).unwrap();
    for w in IndexSet::combinations(7, 3) {
        let report = storage::adversary_view(&s, &pick(&files, &w)).unwrap();
        assert!(report.full_secrecy());
        assert_eq!(report.equivocation_per_block.dims, 2);
    }
    let report = storage::adversary_view(&s, &pick(&files, &IndexSet::new(7, vec![0, 1, 2, 3]).unwrap())).unwrap();
    assert_eq!(report.shortfall(), 1);
}
