//! Memoization for the enumeration workhorses.
//!
//! Groups are immutable after construction and carry a process-unique id,
//! so caching by id is sound. Catalog scans hit the same (source, target)
//! pairs thousands of times; without this layer the suites spend most of
//! their time re-enumerating identical hom-sets.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::group::FiniteGroup;
use crate::hom::{automorphism_group, homs, AutomorphismGroup, GroupHom};
use crate::subgroup::{subgroups, Subgroup};

static HOMS: Lazy<Mutex<HashMap<(u64, u64), Arc<Vec<GroupHom>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));
static SUBGROUPS: Lazy<Mutex<HashMap<u64, Arc<Vec<Subgroup>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));
static AUTS: Lazy<Mutex<HashMap<u64, Arc<AutomorphismGroup>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn homs_cached(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Arc<Vec<GroupHom>> {
    let key = (a.uid(), b.uid());
    if let Some(hit) = HOMS.lock().unwrap().get(&key) {
        return Arc::clone(hit);
    }
    let computed = Arc::new(homs(a, b));
    HOMS.lock().unwrap().entry(key).or_insert(computed).clone()
}

pub fn subgroups_cached(g: &Arc<FiniteGroup>) -> Arc<Vec<Subgroup>> {
    let key = g.uid();
    if let Some(hit) = SUBGROUPS.lock().unwrap().get(&key) {
        return Arc::clone(hit);
    }
    let computed = Arc::new(subgroups(g));
    SUBGROUPS.lock().unwrap().entry(key).or_insert(computed).clone()
}

pub fn automorphisms_cached(g: &Arc<FiniteGroup>) -> Arc<AutomorphismGroup> {
    let key = g.uid();
    if let Some(hit) = AUTS.lock().unwrap().get(&key) {
        return Arc::clone(hit);
    }
    let computed = Arc::new(automorphism_group(g));
    AUTS.lock().unwrap().entry(key).or_insert(computed).clone()
}
