//! Per-group transition caching over projected states.

use rustc_hash::FxHashMap;

use super::{Instantiator, Result, State};

/// For every group, the projected successors of every projected source
/// state seen so far.
#[derive(Clone, Debug, Default)]
pub struct GroupCache {
    entries: Vec<FxHashMap<Box<[u32]>, Vec<Box<[u32]>>>>,
    pub hits: Vec<u64>,
    pub misses: Vec<u64>,
}

impl GroupCache {
    pub fn new(groups: usize) -> GroupCache {
        GroupCache {
            entries: vec![FxHashMap::default(); groups],
            hits: vec![0; groups],
            misses: vec![0; groups],
        }
    }

    /// Cached projected successors for a projected source, if any.
    pub fn lookup(&self, k: usize, key: &[u32]) -> Option<&[Box<[u32]>]> {
        self.entries[k].get(key).map(Vec::as_slice)
    }

    pub fn len(&self, k: usize) -> usize {
        self.entries[k].len()
    }
}

impl Instantiator {
    /// [`Instantiator::group_next`] through the cache: the group's successor
    /// function runs once per distinct projection of the source state, and
    /// its projected results are merged into `s` on every later request.
    pub fn cached_next(&mut self, s: &[u32], k: usize, cache: &mut GroupCache) -> Result<Vec<State>> {
        let key = self.matrix.project(s, k);
        if !cache.entries[k].contains_key(&key) {
            cache.misses[k] += 1;
            let succ = self.group_next(s, k)?;
            let projected = succ.iter().map(|t| self.matrix.project(t, k)).collect();
            cache.entries[k].insert(key.clone(), projected);
        } else {
            cache.hits[k] += 1;
        }
        Ok(cache.entries[k][&key]
            .iter()
            .map(|t| self.matrix.next_apply(s, t, k))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_pbes;

    #[test]
    fn independent_columns_share_an_entry() {
        // group 1 ignores b entirely
        let p = parse_pbes("pbes nu X(a: Bool, b: Bool) = X(!a, b); init X(true, true);").unwrap();
        let mut inst = Instantiator::new(&p).unwrap();
        let mut cache = GroupCache::new(1);
        let s1: State = vec![0, 0, 0].into();
        let mut s2: State = s1.clone();
        s2[2] = inst.table(2).len() as u32;
        let _ = inst.encode_values(0, &[crate::sort::Value::Bool(true), crate::sort::Value::Bool(true)]);
        let a = inst.cached_next(&s1, 0, &mut cache).unwrap();
        let b = inst.cached_next(&s2, 0, &mut cache).unwrap();
        assert_eq!((cache.hits[0], cache.misses[0]), (1, 1));
        assert_eq!(a, inst.group_next(&s1, 0).unwrap());
        assert_eq!(b, inst.group_next(&s2, 0).unwrap());
        assert_ne!(a, b);
    }
}
