//! Persisting the descendent memo across runs.
use moduli::cache::CacheStore;
use moduli::descendent::{memo_clear, psi_correlator};

fn main() {
    let path = std::env::temp_dir().join("moduli-example-cache.txt");
    let mut store = CacheStore::open(&path).unwrap();
    println!("{}: {:?}, {} entries", path.display(), store.status, store.len());
    store.seed_memos();
    let v = psi_correlator(4, &[3, 3, 3, 3, 2]);
    store.absorb_memos();
    store.save().unwrap();
    memo_clear();
    let reloaded = CacheStore::open(&path).unwrap();
    reloaded.seed_memos();
    assert_eq!(psi_correlator(4, &[3, 3, 3, 3, 2]), v);
    println!("saved {} entries; value {v}", reloaded.len());
}
