//! Coxeter diagrams: construction from the family/attachment notation,
//! finite-type recognition, automorphisms and generator conjugacy classes.

mod catalog;
mod parse;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use catalog::{AffineType, FiniteType};

use crate::error::{Error, Result};

/// Node index into [`CoxeterDiagram::nodes`]. Words are sequences of these.
pub type Node = u8;

/// A Coxeter matrix entry `m_st` for `s != t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Bond {
    Finite(u32),
    Infinite,
}

impl Bond {
    pub fn commutes(self) -> bool {
        self == Bond::Finite(2)
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Bond::Finite(m) if m % 2 == 1)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Bond::Finite(m) => Some(m),
            Bond::Infinite => None,
        }
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Finite(m) => write!(f, "{m}"),
            Bond::Infinite => write!(f, "inf"),
        }
    }
}

/// Node identifier: component index and label within that component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId {
    pub component: u8,
    pub label: u8,
}

/// How a diagram was described, kept so it can be printed back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramKind {
    Spherical(FiniteType),
    Affine(AffineType),
    /// New node 0 attached to named components; one superscript list per component.
    Attached(Vec<(FiniteType, Vec<u8>)>),
    /// Disjoint product of named components without attachment.
    Product(Vec<FiniteType>),
    Explicit { zero_based: bool },
}

/// A Coxeter diagram with its matrix stored as a sparse symmetric bond map.
#[derive(Clone, Debug)]
pub struct CoxeterDiagram {
    nodes: Vec<NodeId>,
    names: Vec<String>,
    bonds: BTreeMap<(Node, Node), Bond>,
    kind: DiagramKind,
}

impl PartialEq for CoxeterDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.bonds == other.bonds
    }
}
impl Eq for CoxeterDiagram {}

impl CoxeterDiagram {
    pub(crate) fn from_parts(
        nodes: Vec<NodeId>,
        bonds: BTreeMap<(Node, Node), Bond>,
        kind: DiagramKind,
    ) -> Self {
        let names = nodes
            .iter()
            .map(|n| format!("{}{}", n.label, "'".repeat(n.component as usize)))
            .collect();
        let bonds = bonds
            .into_iter()
            .filter(|(_, b)| !b.commutes())
            .map(|((a, b), m)| ((a.min(b), a.max(b)), m))
            .collect();
        CoxeterDiagram { nodes, names, bonds, kind }
    }

    /// Parses the family / attachment / explicit matrix notation.
    pub fn parse(spec: &str) -> Result<Self> {
        parse::parse_diagram(spec)
    }

    /// Builds a diagram from an explicit bond list on nodes labelled `1..=n`.
    pub fn from_bonds(n: usize, bonds: &[(u8, u8, Bond)]) -> Result<Self> {
        let nodes: Vec<NodeId> = (1..=n as u8).map(|label| NodeId { component: 0, label }).collect();
        let mut map = BTreeMap::new();
        for &(a, b, m) in bonds {
            if a == b || a == 0 || b == 0 || a as usize > n || b as usize > n {
                return Err(Error::UnknownNode(format!("{a}-{b}")));
            }
            if map.insert((a.min(b) - 1, a.max(b) - 1), m).is_some() {
                return Err(Error::DuplicateBond(format!("{a}-{b}")));
            }
        }
        Ok(Self::from_parts(nodes, map, DiagramKind::Explicit { zero_based: false }))
    }

    pub fn rank(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn kind(&self) -> &DiagramKind {
        &self.kind
    }

    pub fn all_nodes(&self) -> Vec<Node> {
        (0..self.rank() as Node).collect()
    }

    pub fn name(&self, s: Node) -> &str {
        &self.names[s as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Looks up a node by its printable label (`0`, `3`, `1'`).
    pub fn node(&self, name: &str) -> Result<Node> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as Node)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn bond(&self, s: Node, t: Node) -> Bond {
        if s == t {
            return Bond::Finite(1);
        }
        *self.bonds.get(&(s.min(t), s.max(t))).unwrap_or(&Bond::Finite(2))
    }

    /// Stored bonds, all with `m >= 3`.
    pub fn bonds(&self) -> impl Iterator<Item = ((Node, Node), Bond)> + '_ {
        self.bonds.iter().map(|(&k, &v)| (k, v))
    }

    pub fn neighbours(&self, s: Node) -> Vec<Node> {
        (0..self.rank() as Node)
            .filter(|&t| t != s && !self.bond(s, t).commutes())
            .collect()
    }

    /// Finite bonds `>= 3`.
    pub fn finite_bonds(&self) -> BTreeSet<u32> {
        self.bonds.values().filter_map(|b| b.finite()).collect()
    }

    /// Parses a word: space-separated labels, or a compact string of
    /// single-character labels each optionally followed by primes.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Node>> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(Vec::new());
        }
        if text.contains(char::is_whitespace) {
            return text.split_whitespace().map(|tok| self.node(tok)).collect();
        }
        let mut out = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let mut label = chars[i].to_string();
            i += 1;
            while i < chars.len() && chars[i] == '\'' {
                label.push('\'');
                i += 1;
            }
            out.push(self.node(&label)?);
        }
        Ok(out)
    }

    /// Space-separated printable labels.
    pub fn format_word(&self, word: &[Node]) -> String {
        word.iter().map(|&s| self.name(s)).collect::<Vec<_>>().join(" ")
    }

    /// Compact form used in the word tables (`0120`, `11'`).
    pub fn format_word_compact(&self, word: &[Node]) -> String {
        if word.is_empty() {
            return "e".to_string();
        }
        word.iter().map(|&s| self.name(s)).collect()
    }

    /// Parses a comma-separated node list.
    pub fn parse_subset(&self, text: &str) -> Result<BTreeSet<Node>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(BTreeSet::new());
        }
        text.split(',').map(|t| self.node(t.trim())).collect()
    }

    /// `S \ {i}`.
    pub fn complement_of(&self, i: Node) -> BTreeSet<Node> {
        (0..self.rank() as Node).filter(|&s| s != i).collect()
    }

    /// Connected components of the subdiagram induced on `subset`.
    pub fn components(&self, subset: &BTreeSet<Node>) -> Vec<Vec<Node>> {
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for &start in subset {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(s) = queue.pop_front() {
                for t in self.neighbours(s) {
                    if subset.contains(&t) && seen.insert(t) {
                        comp.push(t);
                        queue.push_back(t);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components(&self.all_nodes().into_iter().collect()).len() <= 1
    }

    /// Matches every component of the induced subdiagram against the
    /// finite-type catalog.
    pub fn classify_spherical(&self, subset: &BTreeSet<Node>) -> Sphericity {
        let mut components = Vec::new();
        let mut order: u128 = 1;
        for comp in self.components(subset) {
            match catalog::recognize_finite(self, &comp) {
                Some((ty, nodes)) => {
                    order = order.saturating_mul(ty.order());
                    components.push(FiniteComponent { ty, nodes });
                }
                None => return Sphericity::NotFinite { component: comp },
            }
        }
        Sphericity::Finite(FiniteTypeDecomposition { components, order })
    }

    pub fn is_spherical(&self, subset: &BTreeSet<Node>) -> bool {
        matches!(self.classify_spherical(subset), Sphericity::Finite(_))
    }

    /// `|W_I|` when `I` is spherical.
    pub fn parabolic_order(&self, subset: &BTreeSet<Node>) -> Option<u128> {
        match self.classify_spherical(subset) {
            Sphericity::Finite(d) => Some(d.order),
            Sphericity::NotFinite { .. } => None,
        }
    }

    /// Recognises a connected diagram as an irreducible affine type, returning
    /// the correspondence from affine labels `0..=n` to nodes.
    pub fn recognize_affine(&self) -> Option<(AffineType, Vec<Node>)> {
        catalog::recognize_affine(self)
    }

    /// Partition of the generators into conjugacy classes: two generators are
    /// conjugate iff joined by a path of odd bonds.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Node>> {
        let n = self.rank();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (&(s, t), &m) in &self.bonds {
            if m.is_odd() {
                let a = find(&mut parent, s as usize);
                let b = find(&mut parent, t as usize);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut classes: BTreeMap<usize, Vec<Node>> = BTreeMap::new();
        for s in 0..n {
            let r = find(&mut parent, s);
            classes.entry(r).or_default().push(s as Node);
        }
        classes.into_values().collect()
    }

    /// All bond-preserving node permutations, optionally stabilising `fix`
    /// setwise. Entry `p[s]` is the image of node `s`.
    pub fn automorphisms(&self, fix: Option<&BTreeSet<Node>>) -> Vec<Vec<Node>> {
        catalog::isomorphisms(self, &self.all_nodes(), self, &self.all_nodes())
            .into_iter()
            .filter(|p| match fix {
                Some(set) => set.iter().all(|s| set.contains(&p[*s as usize])),
                None => true,
            })
            .collect()
    }

    /// Automorphisms plus, for named affine diagrams, the special vertices
    /// (orbit of node 0).
    pub fn symmetry(&self, fix: Option<&BTreeSet<Node>>) -> Symmetry {
        let automorphisms = self.automorphisms(fix);
        let special = match self.kind {
            DiagramKind::Affine(_) => {
                let zero = self.node("0").ok();
                zero.map(|z| {
                    self.automorphisms(None)
                        .iter()
                        .map(|p| p[z as usize])
                        .collect::<BTreeSet<_>>()
                })
            }
            _ => None,
        };
        Symmetry { automorphisms, special_vertices: special }
    }

    /// Special vertices of a connected affine diagram (named or recognised).
    pub fn special_vertices(&self) -> Option<BTreeSet<Node>> {
        let zero = match self.kind {
            DiagramKind::Affine(_) => self.node("0").ok()?,
            _ => self.recognize_affine()?.1[0],
        };
        Some(self.automorphisms(None).iter().map(|p| p[zero as usize]).collect())
    }

    /// Returns the diagram obtained by relabelling through a node bijection
    /// onto the same label set; used by tests.
    pub fn is_isomorphic(&self, other: &CoxeterDiagram) -> bool {
        self.rank() == other.rank()
            && !catalog::isomorphisms(self, &self.all_nodes(), other, &other.all_nodes()).is_empty()
    }

    /// Canonical printer, a right inverse of [`CoxeterDiagram::parse`] up to isomorphism.
    pub fn to_spec(&self) -> String {
        match &self.kind {
            DiagramKind::Spherical(t) => t.to_string(),
            DiagramKind::Affine(t) => t.to_string(),
            DiagramKind::Product(ts) => {
                ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" x ")
            }
            DiagramKind::Attached(parts) => parts
                .iter()
                .map(|(t, sup)| {
                    if sup.is_empty() {
                        t.to_string()
                    } else {
                        let idx: Vec<String> = sup.iter().map(|i| i.to_string()).collect();
                        format!("{}^{{{}}}", t, idx.join(","))
                    }
                })
                .collect::<Vec<_>>()
                .join(" x "),
            DiagramKind::Explicit { zero_based } => {
                let mut s = if *zero_based {
                    format!("matrix{{0..{}", self.rank() - 1)
                } else {
                    format!("matrix{{{}", self.rank())
                };
                for (&(a, b), m) in &self.bonds {
                    s.push_str(&format!("; {}-{}:{}", self.name(a), self.name(b), m));
                }
                s.push('}');
                s
            }
        }
    }

    /// Same node set with bonds replaced; used to build bond-increased targets.
    pub fn with_bonds(&self, bonds: &[(Node, Node, Bond)]) -> CoxeterDiagram {
        let mut map = self.bonds.clone();
        for &(a, b, m) in bonds {
            map.insert((a.min(b), a.max(b)), m);
        }
        let mut d = CoxeterDiagram::from_parts(
            self.nodes.clone(),
            map,
            DiagramKind::Explicit { zero_based: self.names.iter().any(|n| n == "0") },
        );
        d.names = self.names.clone();
        d
    }
}

impl fmt::Display for CoxeterDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_spec())
    }
}

/// One irreducible finite component: `nodes[j]` carries catalog label `j+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteComponent {
    pub ty: FiniteType,
    pub nodes: Vec<Node>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTypeDecomposition {
    pub components: Vec<FiniteComponent>,
    pub order: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sphericity {
    Finite(FiniteTypeDecomposition),
    NotFinite { component: Vec<Node> },
}

#[derive(Clone, Debug)]
pub struct Symmetry {
    pub automorphisms: Vec<Vec<Node>>,
    pub special_vertices: Option<BTreeSet<Node>>,
}
