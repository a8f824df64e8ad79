//! Process-wide memo tables: concurrent readers, serialized insertion.
//! Values are computed outside the lock, so two threads may race on the
//! same key; both write the same value.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{OnceLock, RwLock};

pub struct Memo<K, V> {
    map: OnceLock<RwLock<HashMap<K, V>>>,
}

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    pub const fn new() -> Self {
        Memo { map: OnceLock::new() }
    }

    fn table(&self) -> &RwLock<HashMap<K, V>> {
        self.map.get_or_init(|| RwLock::new(HashMap::new()))
    }

    pub fn get(&self, k: &K) -> Option<V> {
        self.table().read().unwrap().get(k).cloned()
    }

    pub fn insert(&self, k: K, v: V) {
        self.table().write().unwrap().insert(k, v);
    }

    pub fn entries(&self) -> Vec<(K, V)> {
        self.table()
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.table().read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.table().write().unwrap().clear();
    }
}

impl<K: Eq + Hash + Clone, V: Clone> Default for Memo<K, V> {
    fn default() -> Self {
        Self::new()
    }
}
