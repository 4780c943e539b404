use std::cmp::Ordering;
use std::collections::HashSet;

use super::{GroupElement, ElementCache};
use crate::diagram::Node;
use crate::error::{Error, Result};

impl GroupElement {
    /// Bruhat order by the lifting recursion along the normal form of `other`:
    /// for each left descent `s` of `other`, strip `s` from `self` when it is
    /// also a left descent there.
    pub fn bruhat_leq(&self, other: &GroupElement) -> Result<bool> {
        self.same_group(other)?;
        if self.length() > other.length() {
            return Ok(false);
        }
        let g = &self.group;
        let mut cols = g.inverse_columns(&self.word);
        let mut remaining = self.length();
        for &s in &other.word {
            if remaining == 0 {
                break;
            }
            if g.root_sign(&cols[s as usize]) == Ordering::Less {
                g.right_step(&mut cols, s as usize);
                remaining -= 1;
            }
        }
        Ok(remaining == 0)
    }

    /// `{v : v <= self}` by subword dynamic programming over the normal form,
    /// failing once more than `guard` elements are found.
    pub fn bruhat_lower_set(&self, guard: usize) -> Result<Vec<GroupElement>> {
        let mut cache = ElementCache::new(self.group.clone());
        let ids = lower_set_ids(&mut cache, &self.word, guard)?;
        let mut out: Vec<GroupElement> = ids
            .into_iter()
            .map(|id| GroupElement { group: self.group.clone(), word: cache.word(id).to_vec() })
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Ids of all subword products of `word`.
pub(crate) fn lower_set_ids(cache: &mut ElementCache, word: &[Node], guard: usize) -> Result<Vec<u32>> {
    let mut set: Vec<u32> = vec![cache.identity()];
    let mut seen: HashSet<u32> = set.iter().copied().collect();
    for &s in word {
        let n = set.len();
        for i in 0..n {
            let y = cache.right_mul(set[i], s);
            if seen.insert(y) {
                set.push(y);
                if set.len() > guard {
                    return Err(Error::GuardExceeded(guard));
                }
            }
        }
    }
    Ok(set)
}
