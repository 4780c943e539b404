//! Bourbaki labellings of the irreducible spherical and affine diagrams, and
//! graph matching against them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Bond, CoxeterDiagram, DiagramKind, Node, NodeId};

/// Irreducible finite Coxeter types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2(u32),
}

impl FiniteType {
    pub fn rank(self) -> usize {
        match self {
            FiniteType::A(n) | FiniteType::B(n) | FiniteType::D(n) => n,
            FiniteType::E6 => 6,
            FiniteType::E7 => 7,
            FiniteType::E8 => 8,
            FiniteType::F4 | FiniteType::H4 => 4,
            FiniteType::H3 => 3,
            FiniteType::I2(_) => 2,
        }
    }

    /// `|W|`.
    pub fn order(self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        match self {
            FiniteType::A(n) => fact(n + 1),
            FiniteType::B(n) => (1u128 << n) * fact(n),
            FiniteType::D(n) => (1u128 << (n - 1)) * fact(n),
            FiniteType::E6 => 51_840,
            FiniteType::E7 => 2_903_040,
            FiniteType::E8 => 696_729_600,
            FiniteType::F4 => 1152,
            FiniteType::H3 => 120,
            FiniteType::H4 => 14_400,
            FiniteType::I2(m) => 2 * m as u128,
        }
    }

    /// Bonds `(s, t, m)` on labels `1..=rank`.
    pub fn bond_list(self) -> Vec<(u8, u8, u32)> {
        let path = |n: usize| (1..n as u8).map(|i| (i, i + 1, 3)).collect::<Vec<_>>();
        match self {
            FiniteType::A(n) => path(n),
            FiniteType::B(n) => {
                let mut b = path(n);
                b.last_mut().unwrap().2 = 4;
                b
            }
            FiniteType::D(n) => {
                let mut b = path(n - 1);
                b.push((n as u8 - 2, n as u8, 3));
                b
            }
            FiniteType::E6 | FiniteType::E7 | FiniteType::E8 => {
                let n = self.rank() as u8;
                let mut b = vec![(1, 3, 3), (2, 4, 3)];
                b.extend((3..n).map(|i| (i, i + 1, 3)));
                b
            }
            FiniteType::F4 => vec![(1, 2, 3), (2, 3, 4), (3, 4, 3)],
            FiniteType::H3 => vec![(1, 2, 3), (2, 3, 5)],
            FiniteType::H4 => vec![(1, 2, 3), (2, 3, 3), (3, 4, 5)],
            FiniteType::I2(m) => vec![(1, 2, m)],
        }
    }

    pub fn diagram(self) -> CoxeterDiagram {
        let n = self.rank();
        let nodes = (1..=n as u8).map(|label| NodeId { component: 0, label }).collect();
        let bonds = self
            .bond_list()
            .into_iter()
            .map(|(a, b, m)| ((a - 1, b - 1), Bond::Finite(m)))
            .collect();
        CoxeterDiagram::from_parts(nodes, bonds, DiagramKind::Spherical(self))
    }

    fn candidates(rank: usize) -> Vec<FiniteType> {
        let mut v = vec![FiniteType::A(rank)];
        if rank >= 2 {
            v.push(FiniteType::B(rank));
        }
        if rank >= 4 {
            v.push(FiniteType::D(rank));
        }
        match rank {
            3 => v.push(FiniteType::H3),
            4 => v.extend([FiniteType::F4, FiniteType::H4]),
            6 => v.push(FiniteType::E6),
            7 => v.push(FiniteType::E7),
            8 => v.push(FiniteType::E8),
            _ => {}
        }
        v
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E6 => f.write_str("E6"),
            FiniteType::E7 => f.write_str("E7"),
            FiniteType::E8 => f.write_str("E8"),
            FiniteType::F4 => f.write_str("F4"),
            FiniteType::H3 => f.write_str("H3"),
            FiniteType::H4 => f.write_str("H4"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

/// Irreducible affine Coxeter types, nodes labelled `0..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AffineType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl AffineType {
    /// The `n` of `~X_n`; the diagram has `n + 1` nodes.
    pub fn rank(self) -> usize {
        match self {
            AffineType::A(n) | AffineType::B(n) | AffineType::C(n) | AffineType::D(n) => n,
            AffineType::E6 => 6,
            AffineType::E7 => 7,
            AffineType::E8 => 8,
            AffineType::F4 => 4,
            AffineType::G2 => 2,
        }
    }

    /// Bonds on labels `0..=n`.
    pub fn bond_list(self) -> Vec<(u8, u8, Bond)> {
        let fin = |v: Vec<(u8, u8, u32)>| {
            v.into_iter().map(|(a, b, m)| (a, b, Bond::Finite(m))).collect::<Vec<_>>()
        };
        match self {
            AffineType::A(1) => vec![(0, 1, Bond::Infinite)],
            AffineType::A(n) => {
                let mut b = fin(FiniteType::A(n).bond_list());
                b.push((0, 1, Bond::Finite(3)));
                b.push((0, n as u8, Bond::Finite(3)));
                b
            }
            AffineType::B(n) => {
                let mut b = fin(FiniteType::B(n).bond_list());
                b.push((0, 2, Bond::Finite(3)));
                b
            }
            AffineType::C(n) => {
                let mut b = fin(FiniteType::B(n).bond_list());
                b.push((0, 1, Bond::Finite(4)));
                b
            }
            AffineType::D(n) => {
                let mut b = fin(FiniteType::D(n).bond_list());
                b.push((0, 2, Bond::Finite(3)));
                b
            }
            AffineType::E6 => {
                let mut b = fin(FiniteType::E6.bond_list());
                b.push((0, 2, Bond::Finite(3)));
                b
            }
            AffineType::E7 => {
                let mut b = fin(FiniteType::E7.bond_list());
                b.push((0, 1, Bond::Finite(3)));
                b
            }
            AffineType::E8 => {
                let mut b = fin(FiniteType::E8.bond_list());
                b.push((0, 8, Bond::Finite(3)));
                b
            }
            AffineType::F4 => {
                let mut b = fin(FiniteType::F4.bond_list());
                b.push((0, 1, Bond::Finite(3)));
                b
            }
            AffineType::G2 => fin(vec![(1, 2, 6), (0, 2, 3)]),
        }
    }

    pub fn diagram(self) -> CoxeterDiagram {
        let n = self.rank();
        let nodes = (0..=n as u8).map(|label| NodeId { component: 0, label }).collect();
        let bonds = self.bond_list().into_iter().map(|(a, b, m)| ((a, b), m)).collect();
        CoxeterDiagram::from_parts(nodes, bonds, DiagramKind::Affine(self))
    }

    /// The spherical type obtained by deleting node 0.
    pub fn finite_part(self) -> FiniteType {
        match self {
            AffineType::A(n) => FiniteType::A(n),
            AffineType::B(n) | AffineType::C(n) => FiniteType::B(n),
            AffineType::D(n) => FiniteType::D(n),
            AffineType::E6 => FiniteType::E6,
            AffineType::E7 => FiniteType::E7,
            AffineType::E8 => FiniteType::E8,
            AffineType::F4 => FiniteType::F4,
            AffineType::G2 => FiniteType::I2(6),
        }
    }

    fn candidates(nodes: usize) -> Vec<AffineType> {
        if nodes < 2 {
            return Vec::new();
        }
        let n = nodes - 1;
        let mut v = vec![AffineType::A(n)];
        if n >= 2 {
            v.push(AffineType::C(n));
        }
        if n >= 3 {
            v.push(AffineType::B(n));
        }
        if n >= 4 {
            v.push(AffineType::D(n));
        }
        match n {
            2 => v.push(AffineType::G2),
            4 => v.push(AffineType::F4),
            6 => v.push(AffineType::E6),
            7 => v.push(AffineType::E7),
            8 => v.push(AffineType::E8),
            _ => {}
        }
        v
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineType::A(n) => write!(f, "~A{n}"),
            AffineType::B(n) => write!(f, "~B{n}"),
            AffineType::C(n) => write!(f, "~C{n}"),
            AffineType::D(n) => write!(f, "~D{n}"),
            AffineType::E6 => f.write_str("~E6"),
            AffineType::E7 => f.write_str("~E7"),
            AffineType::E8 => f.write_str("~E8"),
            AffineType::F4 => f.write_str("~F4"),
            AffineType::G2 => f.write_str("~G2"),
        }
    }
}

pub(super) fn recognize_finite(d: &CoxeterDiagram, comp: &[Node]) -> Option<(FiniteType, Vec<Node>)> {
    let k = comp.len();
    if k == 2 {
        let ty = match d.bond(comp[0], comp[1]) {
            Bond::Finite(3) => FiniteType::A(2),
            Bond::Finite(4) => FiniteType::B(2),
            Bond::Finite(m) if m >= 5 => FiniteType::I2(m),
            _ => return None,
        };
        let cat = ty.diagram();
        let iso = isomorphisms_limited(&cat, &cat.all_nodes(), d, comp, 1);
        return iso.into_iter().next().map(|m| (ty, m));
    }
    // Spherical diagrams are trees; checking the edge count prunes cycles early.
    let edges = d
        .bonds()
        .filter(|((a, b), _)| comp.contains(a) && comp.contains(b))
        .count();
    if edges + 1 != k {
        return None;
    }
    FiniteType::candidates(k).into_iter().find_map(|ty| {
        let cat = ty.diagram();
        isomorphisms_limited(&cat, &cat.all_nodes(), d, comp, 1)
            .into_iter()
            .next()
            .map(|m| (ty, m))
    })
}

pub(super) fn recognize_affine(d: &CoxeterDiagram) -> Option<(AffineType, Vec<Node>)> {
    if !d.is_connected() {
        return None;
    }
    AffineType::candidates(d.rank()).into_iter().find_map(|ty| {
        let cat = ty.diagram();
        isomorphisms_limited(&cat, &cat.all_nodes(), d, &d.all_nodes(), 1)
            .into_iter()
            .next()
            .map(|m| (ty, m))
    })
}

pub(super) fn isomorphisms(
    a: &CoxeterDiagram,
    a_nodes: &[Node],
    b: &CoxeterDiagram,
    b_nodes: &[Node],
) -> Vec<Vec<Node>> {
    isomorphisms_limited(a, a_nodes, b, b_nodes, usize::MAX)
}

/// Bond-preserving bijections `a_nodes -> b_nodes`; entry `i` of a result is
/// the image of `a_nodes[i]`.
pub(super) fn isomorphisms_limited(
    a: &CoxeterDiagram,
    a_nodes: &[Node],
    b: &CoxeterDiagram,
    b_nodes: &[Node],
    limit: usize,
) -> Vec<Vec<Node>> {
    if a_nodes.len() != b_nodes.len() {
        return Vec::new();
    }
    let signature = |d: &CoxeterDiagram, set: &[Node], s: Node| {
        let mut sig: Vec<Bond> = set
            .iter()
            .filter(|&&t| t != s)
            .map(|&t| d.bond(s, t))
            .filter(|m| !m.commutes())
            .collect();
        sig.sort();
        sig
    };
    let a_sig: Vec<Vec<Bond>> = a_nodes.iter().map(|&s| signature(a, a_nodes, s)).collect();
    let b_sig: Vec<Vec<Bond>> = b_nodes.iter().map(|&s| signature(b, b_nodes, s)).collect();
    let mut a_multi: BTreeMap<&Vec<Bond>, usize> = BTreeMap::new();
    let mut b_multi: BTreeMap<&Vec<Bond>, usize> = BTreeMap::new();
    for s in &a_sig {
        *a_multi.entry(s).or_default() += 1;
    }
    for s in &b_sig {
        *b_multi.entry(s).or_default() += 1;
    }
    if a_multi != b_multi {
        return Vec::new();
    }

    // Visit a's nodes in BFS order so each new node is constrained by an assigned neighbour.
    let mut order = Vec::with_capacity(a_nodes.len());
    let mut placed = BTreeSet::new();
    for start in 0..a_nodes.len() {
        if !placed.insert(start) {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for y in 0..a_nodes.len() {
                if !a.bond(a_nodes[x], a_nodes[y]).commutes() && x != y && placed.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }

    struct Search<'a> {
        a: &'a CoxeterDiagram,
        a_nodes: &'a [Node],
        b: &'a CoxeterDiagram,
        b_nodes: &'a [Node],
        a_sig: Vec<Vec<Bond>>,
        b_sig: Vec<Vec<Bond>>,
        order: Vec<usize>,
        image: Vec<Option<usize>>,
        used: Vec<bool>,
        out: Vec<Vec<Node>>,
        limit: usize,
    }
    impl Search<'_> {
        fn go(&mut self, k: usize) {
            if self.out.len() >= self.limit {
                return;
            }
            if k == self.order.len() {
                let img = self.image.iter().map(|i| self.b_nodes[i.unwrap()]).collect();
                self.out.push(img);
                return;
            }
            let x = self.order[k];
            for y in 0..self.b_nodes.len() {
                if self.used[y] || self.a_sig[x] != self.b_sig[y] {
                    continue;
                }
                let ok = self.order[..k].iter().all(|&px| {
                    let py = self.image[px].unwrap();
                    self.a.bond(self.a_nodes[x], self.a_nodes[px])
                        == self.b.bond(self.b_nodes[y], self.b_nodes[py])
                });
                if !ok {
                    continue;
                }
                self.used[y] = true;
                self.image[x] = Some(y);
                self.go(k + 1);
                self.image[x] = None;
                self.used[y] = false;
            }
        }
    }
    let n = a_nodes.len();
    let mut search = Search {
        a,
        a_nodes,
        b,
        b_nodes,
        a_sig,
        b_sig,
        order,
        image: vec![None; n],
        used: vec![false; n],
        out: Vec::new(),
        limit,
    };
    search.go(0);
    search.out
}
