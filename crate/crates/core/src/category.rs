use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use crate::block_decomp::LinkageClass;
use crate::charlat::Character;
use crate::root_data::{RootSystem, RootType, Weight};
use crate::standard_chars::{KostantTable, VermaExpansion};

/// Entry point to the computations: a root system plus the caches shared by
/// every operation (partition functions, simple characters, linkage classes).
///
/// All caches are internally synchronized; a `CategoryO` can be shared
/// between threads by reference.
pub struct CategoryO {
    pub(crate) rs: Arc<RootSystem>,
    pub(crate) kostant_tables: Mutex<HashMap<Vec<Weight>, Arc<KostantTable>>>,
    pub(crate) simple_cache: RwLock<HashMap<Weight, (Character, VermaExpansion)>>,
    pub(crate) linkage_cache: RwLock<HashMap<Weight, Arc<LinkageClass>>>,
}

impl CategoryO {
    pub fn new(root_type: RootType) -> Self {
        CategoryO {
            rs: Arc::new(RootSystem::new(root_type)),
            kostant_tables: Mutex::new(HashMap::new()),
            simple_cache: RwLock::new(HashMap::new()),
            linkage_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    /// Shorthand for `w . 0` given a word such as `"st"`.
    ///
    /// Panics on a malformed word; use [`crate::root_data::WeylGroup::from_word`]
    /// for fallible parsing.
    pub fn w0(&self, word: &str) -> Weight {
        let w = self.rs.weyl().from_word(word).expect("valid word");
        self.rs.dot_action(w, self.rs.zero())
    }

    /// Partition-function table over the given positive roots, shared per
    /// root list.
    pub fn kostant_table(&self, roots: &[Weight]) -> Arc<KostantTable> {
        let mut key = roots.to_vec();
        key.sort();
        let mut tables = self.kostant_tables.lock().expect("kostant cache lock");
        tables
            .entry(key.clone())
            .or_insert_with(|| Arc::new(KostantTable::new(&self.rs, &key)))
            .clone()
    }
}
