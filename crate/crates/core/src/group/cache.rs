use std::collections::HashMap;
use std::sync::Arc;

use super::{CoxeterGroup, NodeMask};
use crate::diagram::Node;

const UNKNOWN: u32 = u32::MAX;

/// Interns normal forms and memoises multiplication by generators on each
/// side. Confined to one computation; not shared between threads.
pub struct ElementCache {
    group: Arc<CoxeterGroup>,
    words: Vec<Vec<Node>>,
    index: HashMap<Vec<Node>, u32>,
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
    left_desc: Vec<Option<NodeMask>>,
    right_desc: Vec<Option<NodeMask>>,
}

impl ElementCache {
    pub fn new(group: Arc<CoxeterGroup>) -> ElementCache {
        let mut c = ElementCache {
            group,
            words: Vec::new(),
            index: HashMap::new(),
            left: Vec::new(),
            right: Vec::new(),
            left_desc: Vec::new(),
            right_desc: Vec::new(),
        };
        c.intern_nf(Vec::new());
        c
    }

    pub fn group(&self) -> &Arc<CoxeterGroup> {
        &self.group
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Interns a word already in normal form.
    pub fn intern_nf(&mut self, word: Vec<Node>) -> u32 {
        if let Some(&id) = self.index.get(&word) {
            return id;
        }
        let id = self.words.len() as u32;
        let r = self.group.rank();
        self.index.insert(word.clone(), id);
        self.words.push(word);
        self.left.push(vec![UNKNOWN; r]);
        self.right.push(vec![UNKNOWN; r]);
        self.left_desc.push(None);
        self.right_desc.push(None);
        id
    }

    /// Interns an arbitrary word (computes its normal form).
    pub fn intern(&mut self, word: &[Node]) -> u32 {
        let nf = self.group.extract(self.group.inverse_columns(word));
        self.intern_nf(nf)
    }

    pub fn lookup(&self, word: &[Node]) -> Option<u32> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: u32) -> &[Node] {
        &self.words[id as usize]
    }

    pub fn length(&self, id: u32) -> usize {
        self.words[id as usize].len()
    }

    pub fn left_mul(&mut self, id: u32, s: Node) -> u32 {
        let known = self.left[id as usize][s as usize];
        if known != UNKNOWN {
            return known;
        }
        let mut w = Vec::with_capacity(self.length(id) + 1);
        w.push(s);
        w.extend_from_slice(&self.words[id as usize]);
        let y = self.intern(&w);
        self.left[id as usize][s as usize] = y;
        self.left[y as usize][s as usize] = id;
        y
    }

    pub fn right_mul(&mut self, id: u32, s: Node) -> u32 {
        let known = self.right[id as usize][s as usize];
        if known != UNKNOWN {
            return known;
        }
        let mut w = self.words[id as usize].clone();
        w.push(s);
        let y = self.intern(&w);
        self.right[id as usize][s as usize] = y;
        self.right[y as usize][s as usize] = id;
        y
    }

    pub fn right_descents(&mut self, id: u32) -> NodeMask {
        if let Some(m) = self.right_desc[id as usize] {
            return m;
        }
        let m = self.group.right_descent_mask(&self.words[id as usize]);
        self.right_desc[id as usize] = Some(m);
        m
    }

    pub fn left_descents(&mut self, id: u32) -> NodeMask {
        if let Some(m) = self.left_desc[id as usize] {
            return m;
        }
        let m = self.group.left_descent_mask(&self.words[id as usize]);
        self.left_desc[id as usize] = Some(m);
        m
    }

    /// `a * b` by right multiplication along the normal form of `b`.
    pub fn mul(&mut self, a: u32, b: u32) -> u32 {
        let word = self.words[b as usize].clone();
        word.into_iter().fold(a, |acc, s| self.right_mul(acc, s))
    }

    pub fn inverse(&mut self, id: u32) -> u32 {
        let rev: Vec<Node> = self.words[id as usize].iter().rev().copied().collect();
        self.intern(&rev)
    }
}
