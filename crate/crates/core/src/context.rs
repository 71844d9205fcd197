use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use dashmap::DashMap;

use crate::marked::MinimalMarkedTable;
use crate::structures::{CanonicalStructure, Certificate, ClassDefinition};

/// A class together with memo tables shared by every operation on it.
///
/// The tables only ever cache values of pure functions, so a `Context` can be
/// shared across threads; results do not depend on what is already cached.
pub struct Context {
    class: ClassDefinition,
    pub(crate) levels: RwLock<Vec<Arc<Vec<CanonicalStructure>>>>,
    /// Marked-structure certificate → certificate of its reduction.
    pub(crate) reductions: DashMap<Certificate, Certificate>,
    pub(crate) minimal: RwLock<BTreeMap<usize, Arc<MinimalMarkedTable>>>,
}

impl Context {
    pub fn new(class: ClassDefinition) -> Self {
        Context {
            class,
            levels: RwLock::new(Vec::new()),
            reductions: DashMap::new(),
            minimal: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn class(&self) -> &ClassDefinition {
        &self.class
    }

    /// Number of structure levels currently cached.
    pub fn cached_levels(&self) -> usize {
        self.levels.read().unwrap().len()
    }

    /// Install precomputed levels `0..levels.len()`, e.g. from a disk cache.
    /// Only takes effect if nothing deeper is cached already.
    pub fn seed_levels(&self, levels: Vec<Vec<CanonicalStructure>>) {
        let mut guard = self.levels.write().unwrap();
        if guard.len() < levels.len() {
            *guard = levels.into_iter().map(Arc::new).collect();
        }
    }

    /// Snapshot of the cached levels.
    pub fn levels_snapshot(&self) -> Vec<Arc<Vec<CanonicalStructure>>> {
        self.levels.read().unwrap().clone()
    }

    pub fn reduction_cache_len(&self) -> usize {
        self.reductions.len()
    }
}
