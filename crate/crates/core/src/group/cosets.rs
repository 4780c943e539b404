use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use super::{mask_of, nodes_of, Bound, CoxeterGroup, ElementCache, GroupElement, NodeMask};
use crate::diagram::Node;
use crate::error::{Error, Result};

/// One double coset `W_I w W_I`, described by its minimal representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCosetRecord {
    pub min_rep: GroupElement,
    /// `K = {s ∈ I : w^{-1} s w ∈ I}`, so that `W_I ∩ w W_I w^{-1} = W_K`.
    pub stabilizer_subset: BTreeSet<Node>,
    pub coset_size: u128,
    /// `|W_I| / |W_K|`, the number of left cosets `xW_I` inside the double coset.
    pub left_quotient_size: u128,
    pub involution: bool,
}

impl CoxeterGroup {
    /// Minimal left coset representatives of `W_I` inside `W_A` (no right
    /// descent in `I`), by BFS under left multiplication by `A`. The set is
    /// closed under suffixes, so the BFS reaches all of it.
    pub(crate) fn coset_rep_ids(
        &self,
        cache: &mut ElementCache,
        ambient: NodeMask,
        subset: NodeMask,
        bound: Bound,
    ) -> Vec<u32> {
        let gens: Vec<Node> = nodes_of(ambient).into_iter().collect();
        let mut out = vec![cache.identity()];
        let mut seen: HashSet<u32> = out.iter().copied().collect();
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            i += 1;
            if !bound.admits(cache.length(x) + 1) {
                continue;
            }
            let ldesc = cache.left_descents(x);
            for &s in &gens {
                if ldesc >> s & 1 == 1 {
                    continue;
                }
                let y = cache.left_mul(x, s);
                if !seen.contains(&y) && cache.right_descents(y) & subset == 0 {
                    seen.insert(y);
                    out.push(y);
                }
            }
        }
        out.sort_by(|&a, &b| (cache.length(a), cache.word(a)).cmp(&(cache.length(b), cache.word(b))));
        out
    }

    /// Elements of `W^I = {x : no right descent in I}` up to the bound.
    pub fn minimal_coset_reps(self: &Arc<Self>, subset: &BTreeSet<Node>, bound: Bound) -> Result<Vec<GroupElement>> {
        if bound == Bound::All && !self.diagram.is_spherical(&self.diagram.all_nodes().into_iter().collect()) {
            return Err(Error::InfiniteGroup);
        }
        let mut cache = ElementCache::new(self.clone());
        let all = mask_of(&self.diagram.all_nodes());
        let ids = self.coset_rep_ids(&mut cache, all, mask_of(subset), bound);
        Ok(ids.into_iter().map(|id| GroupElement { group: self.clone(), word: cache.word(id).to_vec() }).collect())
    }

    /// `K = {s ∈ I : w^{-1} s w ∈ I}` for an `I`-reduced `w`.
    pub fn stabilizer_subset(self: &Arc<Self>, w: &GroupElement, subset: &BTreeSet<Node>) -> BTreeSet<Node> {
        let winv = w.inverse();
        subset
            .iter()
            .copied()
            .filter(|&s| {
                let c = winv.mul_gen_right(s).mul(w).expect("same group");
                c.length() == 1 && subset.contains(&c.word[0])
            })
            .collect()
    }

    /// Double cosets `W_I \ W / W_I` by minimal representative, up to the bound.
    pub fn double_cosets(self: &Arc<Self>, subset: &BTreeSet<Node>, bound: Bound) -> Result<Vec<DoubleCosetRecord>> {
        let wi = self.diagram.parabolic_order(subset).ok_or(Error::NonSpherical)?;
        if bound == Bound::All && !self.diagram.is_spherical(&self.diagram.all_nodes().into_iter().collect()) {
            return Err(Error::InfiniteGroup);
        }
        let mut cache = ElementCache::new(self.clone());
        let all = mask_of(&self.diagram.all_nodes());
        let i_mask = mask_of(subset);
        let reps = self.coset_rep_ids(&mut cache, all, i_mask, bound);
        let mut out = Vec::new();
        for id in reps {
            if cache.left_descents(id) & i_mask != 0 {
                continue;
            }
            let min_rep = GroupElement { group: self.clone(), word: cache.word(id).to_vec() };
            out.push(self.record(min_rep, subset, wi));
        }
        Ok(out)
    }

    pub(crate) fn record(self: &Arc<Self>, min_rep: GroupElement, subset: &BTreeSet<Node>, wi: u128) -> DoubleCosetRecord {
        let k = self.stabilizer_subset(&min_rep, subset);
        let wk = self.diagram.parabolic_order(&k).expect("subset of a spherical set");
        let left_quotient_size = wi / wk;
        let involution = min_rep.is_involution();
        DoubleCosetRecord {
            min_rep,
            stabilizer_subset: k,
            coset_size: left_quotient_size * wi,
            left_quotient_size,
            involution,
        }
    }

    /// All elements of the double coset `W_I w W_I`, sorted in ShortLex order.
    pub fn double_coset_elements(self: &Arc<Self>, w: &GroupElement, subset: &BTreeSet<Node>) -> Result<Vec<GroupElement>> {
        if !self.diagram.is_spherical(subset) {
            return Err(Error::NonSpherical);
        }
        let mut cache = ElementCache::new(self.clone());
        let start = cache.intern_nf(w.word.clone());
        let mut seen: HashSet<u32> = HashSet::from([start]);
        let mut queue = vec![start];
        while let Some(x) = queue.pop() {
            for &s in subset {
                for y in [cache.left_mul(x, s), cache.right_mul(x, s)] {
                    if seen.insert(y) {
                        queue.push(y);
                    }
                }
            }
        }
        let mut out: Vec<GroupElement> =
            seen.into_iter().map(|id| GroupElement { group: self.clone(), word: cache.word(id).to_vec() }).collect();
        out.sort();
        Ok(out)
    }

    /// Minimal representative of `W_I w W_I` by stripping descents in `I`
    /// from both sides, with the stripped letters.
    pub fn strip_to_min_rep(self: &Arc<Self>, w: &GroupElement, subset: &BTreeSet<Node>) -> (GroupElement, Vec<Node>) {
        let mask = mask_of(subset);
        let mut cur = w.clone();
        let mut stripped = Vec::new();
        loop {
            let l = cur.left_descent_mask() & mask;
            if l != 0 {
                let s = l.trailing_zeros() as Node;
                stripped.push(s);
                cur = cur.mul_gen_left(s);
                continue;
            }
            let r = cur.right_descent_mask() & mask;
            if r != 0 {
                let s = r.trailing_zeros() as Node;
                stripped.push(s);
                cur = cur.mul_gen_right(s);
                continue;
            }
            return (cur, stripped);
        }
    }
}

/// Multi-parameter Poincaré series of a spherical `W_J`: exponent vectors
/// (letter counts per class, `class_of[s]`) with multiplicities. Built along a
/// chain `J_1 ⊂ J_2 ⊂ ... ⊂ J` as a product of coset-representative sums.
pub fn poincare_coefficients(
    group: &Arc<CoxeterGroup>,
    subset: &BTreeSet<Node>,
    class_of: &[usize],
    classes: usize,
) -> Result<BTreeMap<Vec<u32>, u128>> {
    if !group.diagram().is_spherical(subset) {
        return Err(Error::NonSpherical);
    }
    let mut cache = ElementCache::new(group.clone());
    let mut poly: BTreeMap<Vec<u32>, u128> = BTreeMap::from([(vec![0; classes], 1)]);
    let mut prev: NodeMask = 0;
    for &s in subset {
        let cur = prev | 1 << s;
        let reps = group.coset_rep_ids(&mut cache, cur, prev, Bound::All);
        let mut factor: BTreeMap<Vec<u32>, u128> = BTreeMap::new();
        for id in reps {
            let mut e = vec![0u32; classes];
            for &t in cache.word(id) {
                e[class_of[t as usize]] += 1;
            }
            *factor.entry(e).or_default() += 1;
        }
        let mut next: BTreeMap<Vec<u32>, u128> = BTreeMap::new();
        for (a, ca) in &poly {
            for (b, cb) in &factor {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *next.entry(e).or_default() += ca * cb;
            }
        }
        poly = next;
        prev = cur;
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(spec: &str) -> Arc<CoxeterGroup> {
        CoxeterGroup::from_spec(spec).unwrap()
    }

    #[test]
    fn a2_double_cosets() {
        let g = grp("A2");
        let i = g.diagram().parse_subset("2").unwrap();
        let recs = g.double_cosets(&i, Bound::All).unwrap();
        let reps: Vec<String> = recs.iter().map(|r| r.min_rep.to_string()).collect();
        assert_eq!(reps, ["e", "1"]);
        let sizes: Vec<u128> = recs.iter().map(|r| r.coset_size).collect();
        assert_eq!(sizes, [2, 4]);
    }

    #[test]
    fn e8_maximal_d7() {
        let g = grp("E8");
        let d = g.diagram();
        let i = d.complement_of(d.node("1").unwrap());
        assert_eq!(g.minimal_coset_reps(&i, Bound::All).unwrap().len(), 2160);
        let recs = g.double_cosets(&i, Bound::All).unwrap();
        assert_eq!(recs.len(), 10);
        let mut sizes: Vec<u128> = recs.iter().map(|r| r.left_quotient_size).collect();
        sizes.sort();
        assert_eq!(sizes, [1, 1, 14, 64, 64, 280, 280, 448, 448, 560]);
        assert!(recs.iter().all(|r| r.involution));
        let find = |n: usize| recs.iter().find(|r| r.min_rep.length() == n).unwrap().min_rep.clone();
        for word in ["13425431", "13425463576452431"] {
            let w = d.parse_word(word).unwrap();
            assert!(g.is_reduced(&w).unwrap());
            assert_eq!(find(w.len()), g.element(&w).unwrap(), "{word}");
        }
        let total: u128 = recs.iter().map(|r| r.coset_size).sum();
        assert_eq!(total, 696_729_600);
    }

    #[test]
    fn coset_records_partition_small_groups() {
        for (spec, sub) in [("A3", "1,3"), ("B3", "2,3"), ("H3", "1"), ("I2(6)", "1"), ("D4", "1,3,4")] {
            let g = grp(spec);
            let d = g.diagram();
            let i = d.parse_subset(sub).unwrap();
            let recs = g.double_cosets(&i, Bound::All).unwrap();
            let all: BTreeSet<Node> = d.all_nodes().into_iter().collect();
            let els = g.enumerate(&all, Bound::All).unwrap();
            let total: u128 = recs.iter().map(|r| r.coset_size).sum();
            assert_eq!(total, els.len() as u128, "{spec}");
            let mask = mask_of(&i);
            let reps: BTreeSet<GroupElement> = recs.iter().map(|r| r.min_rep.clone()).collect();
            let mut counts: BTreeMap<GroupElement, u128> = BTreeMap::new();
            for w in &els {
                let (m, _) = g.strip_to_min_rep(w, &i);
                assert!(m.is_i_reduced(mask));
                assert!(reps.contains(&m), "{spec} {w}");
                *counts.entry(m).or_default() += 1;
            }
            for r in &recs {
                assert_eq!(counts[&r.min_rep], r.coset_size, "{spec} {}", r.min_rep);
                assert!(r.stabilizer_subset.is_subset(&i));
                assert_eq!(r.coset_size, r.left_quotient_size * d.parabolic_order(&i).unwrap());
            }
        }
    }

    #[test]
    fn poincare_series() {
        let g = grp("B3");
        let all: BTreeSet<Node> = g.diagram().all_nodes().into_iter().collect();
        let classes = g.diagram().conjugacy_classes();
        let mut class_of = vec![0; 3];
        for (k, c) in classes.iter().enumerate() {
            for &s in c {
                class_of[s as usize] = k;
            }
        }
        let p = poincare_coefficients(&g, &all, &class_of, classes.len()).unwrap();
        assert_eq!(p.values().sum::<u128>(), 48);
        // direct count by letter classes
        let mut direct: BTreeMap<Vec<u32>, u128> = BTreeMap::new();
        for w in g.enumerate(&all, Bound::All).unwrap() {
            let mut e = vec![0u32; classes.len()];
            for &s in w.word() {
                e[class_of[s as usize]] += 1;
            }
            *direct.entry(e).or_default() += 1;
        }
        assert_eq!(p, direct);
    }

    #[test]
    fn infinite_cases() {
        let g = grp("~A2");
        let i = g.diagram().parse_subset("1,2").unwrap();
        assert_eq!(g.double_cosets(&i, Bound::All).unwrap_err(), Error::InfiniteGroup);
        assert!(!g.double_cosets(&i, Bound::Length(6)).unwrap().is_empty());
        let all: BTreeSet<Node> = g.diagram().all_nodes().into_iter().collect();
        assert_eq!(g.double_cosets(&all, Bound::Length(3)).unwrap_err(), Error::NonSpherical);
    }
}
