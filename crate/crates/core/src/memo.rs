//! Insert-once memo maps.
//!
//! A key is computed outside the lock and inserted with "first writer wins"
//! semantics, so concurrent readers can never observe two values for one key.

use alloc::collections::BTreeMap;

#[cfg(feature = "std")]
pub(crate) struct MemoMap<K, V> {
    inner: std::sync::RwLock<BTreeMap<K, V>>,
}

#[cfg(not(feature = "std"))]
pub(crate) struct MemoMap<K, V> {
    inner: core::cell::RefCell<BTreeMap<K, V>>,
}

impl<K: Ord, V: Clone> MemoMap<K, V> {
    pub(crate) fn new() -> Self {
        MemoMap {
            inner: Default::default(),
        }
    }

    #[cfg(feature = "std")]
    pub(crate) fn get(&self, key: &K) -> Option<V> {
        self.inner
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(key)
            .cloned()
    }

    #[cfg(not(feature = "std"))]
    pub(crate) fn get(&self, key: &K) -> Option<V> {
        self.inner.borrow().get(key).cloned()
    }

    /// Inserts `value` unless the key is already present; returns the stored value.
    #[cfg(feature = "std")]
    pub(crate) fn insert(&self, key: K, value: V) -> V {
        let mut guard = self.inner.write().unwrap_or_else(|e| e.into_inner());
        guard.entry(key).or_insert(value).clone()
    }

    #[cfg(not(feature = "std"))]
    pub(crate) fn insert(&self, key: K, value: V) -> V {
        self.inner.borrow_mut().entry(key).or_insert(value).clone()
    }

    #[cfg(feature = "std")]
    pub(crate) fn len(&self) -> usize {
        self.inner.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    #[cfg(not(feature = "std"))]
    pub(crate) fn len(&self) -> usize {
        self.inner.borrow().len()
    }
}
