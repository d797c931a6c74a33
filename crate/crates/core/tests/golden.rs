//! Generator snapshot. Regenerate with `DODGSON_BLESS=1 cargo test --test golden`.

use std::path::PathBuf;

use dodgson_core::io::{parse_matrix, render_matrix};
use dodgson_core::matrix::random_matrix;
use dodgson_core::RingDomain;

#[test]
fn seeded_integer_matrix_snapshot() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/random_integers_n4_b9_s42.txt");
    let a = random_matrix(RingDomain::Integers, 4, 9, 42);
    if std::env::var_os("DODGSON_BLESS").is_some() {
        std::fs::write(&path, render_matrix(&a)).unwrap();
    }
    let golden = std::fs::read_to_string(&path).expect("golden file present");
    assert_eq!(render_matrix(&a), golden);
    assert_eq!(parse_matrix(&golden).unwrap(), a);
}

#[test]
fn distinct_seeds_give_distinct_matrices() {
    for seed in 0..100u64 {
        let a = random_matrix(RingDomain::Integers, 4, 9, seed);
        let b = random_matrix(RingDomain::Integers, 4, 9, seed + 1000);
        assert_ne!(a, b, "seeds {seed} and {}", seed + 1000);
    }
}
