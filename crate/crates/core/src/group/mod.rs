//! Coxeter groups through the geometric representation.
//!
//! Root coordinates live in `Z[λ_L]^rank`, stored as flat `i64` vectors of
//! `rank * degree` entries. Elements are kept as ShortLex normal forms.
//!
//! Coordinates are checked for overflow; an overflow panics. It only arises
//! for very long words in groups with exponential root growth, far beyond
//! the lengths used here.

mod bruhat;
mod cache;
mod cosets;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use cache::ElementCache;
pub use cosets::{poincare_coefficients, DoubleCosetRecord};

use crate::cyclofield::{embed_lambda, make_field, Field, IntMulMatrix};
use crate::diagram::{CoxeterDiagram, Node};
use crate::error::{Error, Result};

const MAX_DEGREE: usize = 32;

/// A node set as a bitmask; ranks are limited to 64.
pub type NodeMask = u64;

pub fn mask_of<'a, I: IntoIterator<Item = &'a Node>>(nodes: I) -> NodeMask {
    nodes.into_iter().fold(0, |m, &s| m | (1 << s))
}

pub fn nodes_of(mask: NodeMask) -> BTreeSet<Node> {
    (0..64).filter(|s| mask >> s & 1 == 1).collect()
}

/// Enumeration cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Length(usize),
    All,
}

impl Bound {
    fn admits(self, len: usize) -> bool {
        match self {
            Bound::Length(n) => len <= n,
            Bound::All => true,
        }
    }
}

/// A Coxeter system with its geometric representation.
#[derive(Debug)]
pub struct CoxeterGroup {
    diagram: CoxeterDiagram,
    field: Field,
    degree: usize,
    /// `(j, c_tj)` for every neighbour `j` of `t`, `c_tj = 2cos(π/m_tj)`.
    neighbours: Vec<Vec<(usize, IntMulMatrix)>>,
}

impl CoxeterGroup {
    pub fn new(diagram: CoxeterDiagram) -> Result<Arc<CoxeterGroup>> {
        if diagram.rank() > 64 {
            return Err(Error::LimitExceeded(format!("rank {} above 64", diagram.rank())));
        }
        let field = make_field(diagram.finite_bonds())?;
        let degree = field.degree();
        if degree > MAX_DEGREE {
            return Err(Error::LimitExceeded(format!("field degree {degree}")));
        }
        let mut neighbours = vec![Vec::new(); diagram.rank()];
        for ((a, b), m) in diagram.bonds() {
            let c = embed_lambda(&field, m)?;
            let mat = IntMulMatrix::new(&c)
                .ok_or_else(|| Error::LimitExceeded("non-integral Cartan entry".into()))?;
            neighbours[a as usize].push((b as usize, mat.clone()));
            neighbours[b as usize].push((a as usize, mat));
        }
        Ok(Arc::new(CoxeterGroup { diagram, field, degree, neighbours }))
    }

    pub fn from_spec(spec: &str) -> Result<Arc<CoxeterGroup>> {
        Self::new(CoxeterDiagram::parse(spec)?)
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        &self.diagram
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    fn check_word(&self, word: &[Node]) -> Result<()> {
        match word.iter().find(|&&s| s as usize >= self.rank()) {
            Some(s) => Err(Error::UnknownNode(s.to_string())),
            None => Ok(()),
        }
    }

    fn simple_root(&self, t: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank() * self.degree];
        v[t * self.degree] = 1;
        v
    }

    /// Applies `s_t` in place: only coordinate `t` changes,
    /// `v_t <- -v_t + Σ_j c_tj v_j`.
    fn reflect(&self, t: usize, v: &mut [i64]) {
        let d = self.degree;
        let mut acc = [0i64; MAX_DEGREE];
        for k in 0..d {
            acc[k] = -v[t * d + k];
        }
        for (j, m) in &self.neighbours[t] {
            m.mul_add(&v[j * d..(j + 1) * d], &mut acc[..d]).expect("root coordinate overflow");
        }
        v[t * d..(t + 1) * d].copy_from_slice(&acc[..d]);
    }

    /// Sign of a root: the sign of any nonzero coordinate.
    fn root_sign(&self, v: &[i64]) -> Ordering {
        let d = self.degree;
        for coord in v.chunks(d) {
            if coord.iter().any(|&c| c != 0) {
                return if d == 1 { coord[0].cmp(&0) } else { self.field.int_sign(coord) };
            }
        }
        Ordering::Equal
    }

    /// `dst += c_tu * src`, coordinate-wise over the root space.
    fn add_scaled(&self, m: &IntMulMatrix, src: &[i64], dst: &mut [i64]) {
        let d = self.degree;
        for (s, t) in src.chunks(d).zip(dst.chunks_mut(d)) {
            if s.iter().any(|&c| c != 0) {
                m.mul_add(s, t).expect("root coordinate overflow");
            }
        }
    }

    /// `w(α_s)` for `w` given by `word`.
    pub fn act_on_simple_root(&self, word: &[Node], s: Node) -> Vec<i64> {
        let mut v = self.simple_root(s as usize);
        for &a in word.iter().rev() {
            self.reflect(a as usize, &mut v);
        }
        v
    }

    /// Columns `g^{-1}(α_t)` for all `t`.
    fn inverse_columns(&self, word: &[Node]) -> Vec<Vec<i64>> {
        let mut cols: Vec<Vec<i64>> = (0..self.rank()).map(|t| self.simple_root(t)).collect();
        for &a in word {
            for col in cols.iter_mut() {
                self.reflect(a as usize, col);
            }
        }
        cols
    }

    /// Peels off least left descents until none remain; the letters give the
    /// ShortLex normal form.
    fn extract(&self, mut cols: Vec<Vec<i64>>) -> Vec<Node> {
        let mut out = Vec::new();
        loop {
            let Some(t) = (0..self.rank()).find(|&t| self.root_sign(&cols[t]) == Ordering::Less) else {
                return out;
            };
            out.push(t as Node);
            self.right_step(&mut cols, t);
        }
    }

    /// ShortLex normal form of `word` and whether `word` was reduced.
    pub fn normal_form(&self, word: &[Node]) -> Result<(Vec<Node>, bool)> {
        self.check_word(word)?;
        let nf = self.extract(self.inverse_columns(word));
        let reduced = nf.len() == word.len();
        Ok((nf, reduced))
    }

    pub fn is_reduced(&self, word: &[Node]) -> Result<bool> {
        self.check_word(word)?;
        // a word is reduced iff every prefix w has w(α_next) > 0
        let mut cols: Vec<Vec<i64>> = (0..self.rank()).map(|t| self.simple_root(t)).collect();
        for &s in word {
            if self.root_sign(&cols[s as usize]) == Ordering::Less {
                return Ok(false);
            }
            self.right_step(&mut cols, s as usize);
        }
        Ok(true)
    }

    /// Updates columns `w(α_t)` (or `w^{-1}(α_t)`) for `w -> ws` (or `w -> sw`).
    fn right_step(&self, cols: &mut [Vec<i64>], s: usize) {
        let col_s = std::mem::take(&mut cols[s]);
        for (u, m) in &self.neighbours[s] {
            self.add_scaled(m, &col_s, &mut cols[*u]);
        }
        cols[s] = col_s.into_iter().map(|c| -c).collect();
    }

    pub fn element(self: &Arc<Self>, word: &[Node]) -> Result<GroupElement> {
        let (nf, _) = self.normal_form(word)?;
        Ok(GroupElement { group: self.clone(), word: nf })
    }

    pub fn parse_element(self: &Arc<Self>, text: &str) -> Result<GroupElement> {
        let word = self.diagram.parse_word(text)?;
        self.element(&word)
    }

    pub fn identity(self: &Arc<Self>) -> GroupElement {
        GroupElement { group: self.clone(), word: Vec::new() }
    }

    pub fn generator(self: &Arc<Self>, s: Node) -> Result<GroupElement> {
        self.element(&[s])
    }

    /// Right descent mask of the element with (any) word `word`.
    pub fn right_descent_mask(&self, word: &[Node]) -> NodeMask {
        let mut cols: Vec<Vec<i64>> = (0..self.rank()).map(|t| self.simple_root(t)).collect();
        for &a in word.iter().rev() {
            for col in cols.iter_mut() {
                self.reflect(a as usize, col);
            }
        }
        self.negative_mask(&cols)
    }

    pub fn left_descent_mask(&self, word: &[Node]) -> NodeMask {
        self.negative_mask(&self.inverse_columns(word))
    }

    fn negative_mask(&self, cols: &[Vec<i64>]) -> NodeMask {
        cols.iter()
            .enumerate()
            .filter(|(_, c)| self.root_sign(c) == Ordering::Less)
            .fold(0, |m, (t, _)| m | (1 << t))
    }

    /// Elements of `W_I` up to the bound, in ShortLex order.
    pub fn enumerate(self: &Arc<Self>, subset: &BTreeSet<Node>, bound: Bound) -> Result<Vec<GroupElement>> {
        if bound == Bound::All && !self.diagram.is_spherical(subset) {
            return Err(Error::NonSpherical);
        }
        let words = self.enumerate_words(mask_of(subset), bound);
        Ok(words.into_iter().map(|word| GroupElement { group: self.clone(), word }).collect())
    }

    /// BFS over normal forms of `W_I`; each layer is sorted.
    pub(crate) fn enumerate_words(&self, subset: NodeMask, bound: Bound) -> Vec<Vec<Node>> {
        let gens: Vec<Node> = nodes_of(subset).into_iter().collect();
        let mut out = vec![Vec::new()];
        let mut layer: Vec<Vec<Node>> = vec![Vec::new()];
        let mut len = 0;
        while !layer.is_empty() && bound.admits(len + 1) {
            let mut next = BTreeSet::new();
            for w in &layer {
                let desc = self.right_descent_mask(w);
                for &s in &gens {
                    if desc >> s & 1 == 0 {
                        let mut ws = w.clone();
                        ws.push(s);
                        next.insert(self.extract(self.inverse_columns(&ws)));
                    }
                }
            }
            layer = next.into_iter().collect();
            out.extend(layer.iter().cloned());
            len += 1;
        }
        out
    }

    /// Longest element of the spherical `W_I` by greedy ascent, with the
    /// opposition `s -> w_0 s w_0` on `I` (entry `p[s]`, identity outside `I`).
    pub fn longest_element(self: &Arc<Self>, subset: &BTreeSet<Node>) -> Result<(GroupElement, Vec<Node>)> {
        if !self.diagram.is_spherical(subset) {
            return Err(Error::NonSpherical);
        }
        // columns w(α_t), updated under right multiplication
        let mut cols: Vec<Vec<i64>> = (0..self.rank()).map(|t| self.simple_root(t)).collect();
        let mut word = Vec::new();
        while let Some(&s) = subset.iter().find(|&&s| self.root_sign(&cols[s as usize]) == Ordering::Greater) {
            word.push(s);
            self.right_step(&mut cols, s as usize);
        }
        let w0 = self.element(&word)?;
        let mut opp: Vec<Node> = self.diagram.all_nodes();
        for &s in subset {
            let conj = w0.mul(&self.generator(s)?)?.mul(&w0)?;
            opp[s as usize] = conj.word[0];
        }
        Ok((w0, opp))
    }
}

/// A group element in ShortLex normal form.
#[derive(Clone)]
pub struct GroupElement {
    group: Arc<CoxeterGroup>,
    word: Vec<Node>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word
            && (Arc::ptr_eq(&self.group, &other.group) || self.group.diagram == other.group.diagram)
    }
}
impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.word.hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// ShortLex order on normal forms.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.word.len(), &self.word).cmp(&(other.word.len(), &other.word))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.group.diagram.format_word(&self.word))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.group.diagram.format_word_compact(&self.word))
    }
}

impl GroupElement {
    pub fn group(&self) -> &Arc<CoxeterGroup> {
        &self.group
    }

    pub fn word(&self) -> &[Node] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    fn same_group(&self, other: &GroupElement) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group.diagram == other.group.diagram {
            Ok(())
        } else {
            Err(Error::DiagramMismatch)
        }
    }

    /// Wraps a word already known to be in normal form.
    pub(crate) fn from_normal_form(group: &Arc<CoxeterGroup>, word: Vec<Node>) -> GroupElement {
        GroupElement { group: group.clone(), word }
    }

    /// The element of the same group given by `word`.
    fn sibling(&self, word: &[Node]) -> GroupElement {
        let nf = self.group.extract(self.group.inverse_columns(word));
        GroupElement { group: self.group.clone(), word: nf }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        self.same_group(other)?;
        let mut w = self.word.clone();
        w.extend_from_slice(&other.word);
        Ok(self.sibling(&w))
    }

    pub fn inverse(&self) -> GroupElement {
        let rev: Vec<Node> = self.word.iter().rev().copied().collect();
        self.sibling(&rev)
    }

    pub fn mul_gen_right(&self, s: Node) -> GroupElement {
        let mut w = self.word.clone();
        w.push(s);
        self.sibling(&w)
    }

    pub fn mul_gen_left(&self, s: Node) -> GroupElement {
        let mut w = Vec::with_capacity(self.word.len() + 1);
        w.push(s);
        w.extend_from_slice(&self.word);
        self.sibling(&w)
    }

    pub fn right_descent_mask(&self) -> NodeMask {
        self.group.right_descent_mask(&self.word)
    }

    pub fn left_descent_mask(&self) -> NodeMask {
        self.group.left_descent_mask(&self.word)
    }

    pub fn right_descents(&self) -> BTreeSet<Node> {
        nodes_of(self.right_descent_mask())
    }

    pub fn left_descents(&self) -> BTreeSet<Node> {
        nodes_of(self.left_descent_mask())
    }

    /// `No right descent in I` (minimal in `wW_I`).
    pub fn is_right_reduced(&self, subset: NodeMask) -> bool {
        self.right_descent_mask() & subset == 0
    }

    /// Minimal in `W_I w W_I`.
    pub fn is_i_reduced(&self, subset: NodeMask) -> bool {
        (self.right_descent_mask() | self.left_descent_mask()) & subset == 0
    }

    pub fn is_involution(&self) -> bool {
        self.inverse() == *self
    }

    pub fn in_parabolic(&self, subset: NodeMask) -> bool {
        self.word.iter().all(|&s| subset >> s & 1 == 1)
    }

    /// `s ∈ supp(w)` for every letter of the normal form (support is
    /// word-independent).
    pub fn support(&self) -> BTreeSet<Node> {
        self.word.iter().copied().collect()
    }

    pub fn format(&self) -> String {
        self.group.diagram.format_word(&self.word)
    }
}
