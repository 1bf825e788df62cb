//! Memoisation of analyses keyed by the query string.
//!
//! Successful results are cached, including empty ones. Errors are not.

use std::collections::{BTreeSet, HashMap};
use std::num::NonZeroUsize;
use std::sync::Mutex;

use lru::LruCache;

use crate::analyzer::{Analysis, AnalyzeError, Analyzer, Tagset};

pub const DEFAULT_CAPACITY: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheConfig {
    /// Bounded, least recently used entry evicted first. Capacity 0
    /// disables caching.
    Lru {
        capacity: usize,
    },
    Unlimited,
}

impl Default for CacheConfig {
    fn default() -> Self {
        CacheConfig::Lru {
            capacity: DEFAULT_CAPACITY,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub evictions: u64,
    pub current_size: usize,
}

impl CacheStats {
    pub fn hit_rate(&self) -> f64 {
        let total = self.hits + self.misses;
        if total == 0 {
            0.0
        } else {
            self.hits as f64 / total as f64
        }
    }
}

enum Store<V> {
    Off,
    Lru(LruCache<String, V>),
    Unlimited(HashMap<String, V>),
}

struct Inner<V> {
    store: Store<V>,
    stats: CacheStats,
}

/// Thread-safe string-keyed cache.
pub struct Cache<V> {
    config: CacheConfig,
    inner: Mutex<Inner<V>>,
}

impl<V: Clone> Cache<V> {
    pub fn new(config: CacheConfig) -> Self {
        let store = match config {
            CacheConfig::Lru { capacity } => match NonZeroUsize::new(capacity) {
                Some(cap) => Store::Lru(LruCache::new(cap)),
                None => Store::Off,
            },
            CacheConfig::Unlimited => Store::Unlimited(HashMap::new()),
        };
        Cache {
            config,
            inner: Mutex::new(Inner {
                store,
                stats: CacheStats::default(),
            }),
        }
    }

    pub fn config(&self) -> CacheConfig {
        self.config
    }

    pub fn get(&self, key: &str) -> Option<V> {
        let mut inner = self.lock();
        let found = match &mut inner.store {
            Store::Off => None,
            Store::Lru(c) => c.get(key).cloned(),
            Store::Unlimited(m) => m.get(key).cloned(),
        };
        if found.is_some() {
            inner.stats.hits += 1;
        } else {
            inner.stats.misses += 1;
        }
        found
    }

    pub fn insert(&self, key: &str, value: V) {
        let mut inner = self.lock();
        let evicted = match &mut inner.store {
            Store::Off => false,
            Store::Lru(c) => matches!(c.push(key.to_owned(), value), Some((k, _)) if k != key),
            Store::Unlimited(m) => {
                m.insert(key.to_owned(), value);
                false
            }
        };
        if evicted {
            inner.stats.evictions += 1;
        }
        inner.stats.current_size = inner.len();
    }

    /// Returns the cached value or computes, stores and returns it. The
    /// lock is not held while `compute` runs, so concurrent misses on the
    /// same key may both compute.
    pub fn get_or_compute<E, F>(&self, key: &str, compute: F) -> Result<V, E>
    where
        F: FnOnce(&str) -> Result<V, E>,
    {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let value = compute(key)?;
        self.insert(key, value.clone());
        Ok(value)
    }

    pub fn stats(&self) -> CacheStats {
        self.lock().stats
    }

    /// Drops every entry; counters are kept.
    pub fn clear(&self) {
        let mut inner = self.lock();
        match &mut inner.store {
            Store::Off => {}
            Store::Lru(c) => c.clear(),
            Store::Unlimited(m) => m.clear(),
        }
        inner.stats.current_size = 0;
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, Inner<V>> {
        // a panic in another thread cannot leave the store half-updated
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }
}

impl<V> Inner<V> {
    fn len(&self) -> usize {
        match &self.store {
            Store::Off => 0,
            Store::Lru(c) => c.len(),
            Store::Unlimited(m) => m.len(),
        }
    }
}

/// An [`Analyzer`] with a result cache in front of it.
pub struct CachedAnalyzer {
    analyzer: Analyzer,
    cache: Cache<Vec<Analysis>>,
}

impl CachedAnalyzer {
    pub fn new(analyzer: Analyzer, config: CacheConfig) -> Self {
        CachedAnalyzer {
            analyzer,
            cache: Cache::new(config),
        }
    }

    pub fn analyzer(&self) -> &Analyzer {
        &self.analyzer
    }

    pub fn analyze(&self, word: &str) -> Result<Vec<Analysis>, AnalyzeError> {
        self.cache
            .get_or_compute(word, |w| self.analyzer.analyze(w))
    }

    pub fn lemmatize(&self, word: &str) -> Result<BTreeSet<String>, AnalyzeError> {
        Ok(self
            .analyze(word)?
            .into_iter()
            .map(|a| a.record.lemma)
            .collect())
    }

    pub fn tags(&self, word: &str, tagset: Tagset) -> Result<BTreeSet<String>, AnalyzeError> {
        let tag_map = self.analyzer.tag_map();
        Ok(self
            .analyze(word)?
            .iter()
            .flat_map(|a| tag_map.tags(tagset, &a.record.paradigm))
            .collect())
    }

    pub fn stats(&self) -> CacheStats {
        self.cache.stats()
    }

    pub fn clear(&self) {
        self.cache.clear()
    }
}
