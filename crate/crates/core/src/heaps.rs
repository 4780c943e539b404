//! Heaps of reduced words: commutation classes, braid-move closure at the
//! class level, and counts of letters between two occurrences of a label.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::diagram::{Bond, CoxeterDiagram, Node};
use crate::error::{Error, Result};
use crate::group::CoxeterGroup;

/// Closure search limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_classes: usize,
    pub max_steps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_classes: 10_000, max_steps: 1_000_000 }
    }
}

/// Occurrence poset of a word: `x < y` iff `x` precedes `y` and they are
/// linked by a chain of non-commuting (or equal) letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Heap {
    labels: Vec<Node>,
    /// `below[y]` is the bitset of `x` with `x < y`.
    below: Vec<Vec<u64>>,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

impl Heap {
    pub fn new(d: &CoxeterDiagram, word: &[Node]) -> Heap {
        let n = word.len();
        let blocks = n.div_ceil(64).max(1);
        let mut below: Vec<Vec<u64>> = Vec::with_capacity(n);
        for y in 0..n {
            let mut set = vec![0u64; blocks];
            for x in 0..y {
                if word[x] == word[y] || !d.bond(word[x], word[y]).commutes() {
                    set_bit(&mut set, x);
                    for (a, b) in set.iter_mut().zip(&below[x]) {
                        *a |= b;
                    }
                }
            }
            below.push(set);
        }
        Heap { labels: word.to_vec(), below }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Node] {
        &self.labels
    }

    /// Strict order `x < y`.
    pub fn less(&self, x: usize, y: usize) -> bool {
        bit(&self.below[y], x)
    }

    /// Lexicographically least linear extension (as a permutation of occurrences).
    fn lex_least_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .filter(|&y| !placed[y] && (0..n).all(|x| placed[x] || !self.less(x, y)))
                .min_by_key(|&y| self.labels[y])
                .expect("heap is acyclic");
            placed[next] = true;
            out.push(next);
        }
        out
    }

    pub fn canonical_word(&self) -> Vec<Node> {
        self.lex_least_order().into_iter().map(|i| self.labels[i]).collect()
    }

    /// Occurrences of `label`, in heap (= position) order.
    pub fn occurrences(&self, label: Node) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i] == label).collect()
    }
}

/// A commutation class of reduced words, keyed by its lex-least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationClass {
    pub canonical_word: Vec<Node>,
    pub heap: Heap,
    pub letter_counts: BTreeMap<Node, usize>,
}

impl PartialOrd for CommutationClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for CommutationClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical_word.cmp(&other.canonical_word)
    }
}

impl CommutationClass {
    pub(crate) fn from_reduced(d: &CoxeterDiagram, word: &[Node]) -> CommutationClass {
        let canonical_word = Heap::new(d, word).canonical_word();
        let heap = Heap::new(d, &canonical_word);
        let mut letter_counts = BTreeMap::new();
        for &s in &canonical_word {
            *letter_counts.entry(s).or_insert(0) += 1;
        }
        CommutationClass { canonical_word, heap, letter_counts }
    }

    pub fn count(&self, label: Node) -> usize {
        self.letter_counts.get(&label).copied().unwrap_or(0)
    }

    /// Words reachable by one braid move followed by commutations.
    fn braid_neighbours(&self, d: &CoxeterDiagram) -> Vec<Vec<Node>> {
        let heap = &self.heap;
        let n = heap.len();
        let labels = heap.labels();
        let present: BTreeSet<Node> = labels.iter().copied().collect();
        let mut out = Vec::new();
        for &s in &present {
            for &t in present.range(s + 1..) {
                let m = match d.bond(s, t) {
                    Bond::Finite(m) if m >= 3 => m as usize,
                    _ => continue,
                };
                let chain: Vec<usize> = (0..n).filter(|&i| labels[i] == s || labels[i] == t).collect();
                if chain.len() < m {
                    continue;
                }
                for start in 0..=chain.len() - m {
                    let run = &chain[start..start + m];
                    if run.windows(2).any(|w| labels[w[0]] == labels[w[1]]) {
                        continue;
                    }
                    let (lo, hi) = (run[0], run[m - 1]);
                    let blocked = (0..n).any(|x| !run.contains(&x) && heap.less(lo, x) && heap.less(x, hi));
                    if blocked {
                        continue;
                    }
                    // linear extension: everything below max(run) outside run, then run, then the rest
                    let mut word: Vec<Node> = (0..n).filter(|&x| !run.contains(&x) && heap.less(x, hi)).map(|x| labels[x]).collect();
                    word.extend(run.iter().map(|&x| if labels[x] == s { t } else { s }));
                    word.extend((0..n).filter(|&x| !run.contains(&x) && !heap.less(x, hi) && x != hi).map(|x| labels[x]));
                    out.push(word);
                }
            }
        }
        out
    }
}

fn require_reduced(group: &CoxeterGroup, word: &[Node]) -> Result<()> {
    if group.is_reduced(word)? {
        Ok(())
    } else {
        Err(Error::NotReduced(group.diagram().format_word(word)))
    }
}

pub fn commutation_canonical(group: &CoxeterGroup, word: &[Node]) -> Result<CommutationClass> {
    require_reduced(group, word)?;
    Ok(CommutationClass::from_reduced(group.diagram(), word))
}

/// Result of a braid closure search.
#[derive(Clone, Debug)]
pub struct Closure {
    /// Sorted by canonical word.
    pub classes: Vec<CommutationClass>,
    /// False when a limit stopped the search; `classes` is then a subset.
    pub complete: bool,
}

/// BFS over commutation classes connected by braid moves, stopping at the limits.
pub fn braid_closure_partial(group: &CoxeterGroup, word: &[Node], limits: Limits) -> Result<Closure> {
    require_reduced(group, word)?;
    let d = group.diagram();
    let start = CommutationClass::from_reduced(d, word);
    let mut seen: BTreeMap<Vec<Node>, CommutationClass> = BTreeMap::new();
    let mut queue = VecDeque::from([start.canonical_word.clone()]);
    seen.insert(start.canonical_word.clone(), start);
    let mut steps = 0usize;
    let mut complete = true;
    'bfs: while let Some(key) = queue.pop_front() {
        let neighbours = seen[&key].braid_neighbours(d);
        for w in neighbours {
            steps += 1;
            if steps > limits.max_steps {
                complete = false;
                break 'bfs;
            }
            let class = CommutationClass::from_reduced(d, &w);
            if !seen.contains_key(&class.canonical_word) {
                if seen.len() >= limits.max_classes {
                    complete = false;
                    break 'bfs;
                }
                queue.push_back(class.canonical_word.clone());
                seen.insert(class.canonical_word.clone(), class);
            }
        }
    }
    Ok(Closure { classes: seen.into_values().collect(), complete })
}

/// Full braid closure, or `LimitExceeded`.
pub fn braid_closure(group: &CoxeterGroup, word: &[Node], limits: Limits) -> Result<Vec<CommutationClass>> {
    let c = braid_closure_partial(group, word, limits)?;
    if c.complete {
        Ok(c.classes)
    } else {
        Err(Error::LimitExceeded(format!("braid closure stopped after {} classes", c.classes.len())))
    }
}

/// Checks that `words` are reduced expressions of one element and that the
/// set of their commutation classes is closed under braid moves, so it is the
/// set of all classes of that element.
pub fn is_braid_closed(group: &CoxeterGroup, words: &[Vec<Node>]) -> Result<bool> {
    let d = group.diagram();
    let Some(first) = words.first() else { return Ok(false) };
    let target = group.normal_form(first)?.0;
    let mut keys = BTreeSet::new();
    let mut classes = Vec::new();
    for w in words {
        if !group.is_reduced(w)? || group.normal_form(w)?.0 != target {
            return Ok(false);
        }
        let c = CommutationClass::from_reduced(d, w);
        keys.insert(c.canonical_word.clone());
        classes.push(c);
    }
    for c in &classes {
        for n in c.braid_neighbours(d) {
            if !keys.contains(&CommutationClass::from_reduced(d, &n).canonical_word) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Which pair of occurrences of the anchor label to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pair {
    FirstTwo,
    LastTwo,
}

/// Bounds on the number of `k` letters between the selected pair of anchor
/// occurrences, over all words of the class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BetweenCounts {
    /// Minimum over linear extensions: `k` occurrences strictly between the pair.
    pub forced: usize,
    /// Maximum: `k` occurrences incomparable-or-between, neither `<= a` nor `>= b`.
    pub possible: usize,
}

pub fn between_counts(class: &CommutationClass, anchor: Node, which: Pair, k: Node) -> Result<BetweenCounts> {
    let heap = &class.heap;
    let occ = heap.occurrences(anchor);
    if occ.len() < 2 {
        return Err(Error::TooFewOccurrences);
    }
    let (a, b) = match which {
        Pair::FirstTwo => (occ[0], occ[1]),
        Pair::LastTwo => (occ[occ.len() - 2], occ[occ.len() - 1]),
    };
    let ks = heap.occurrences(k);
    let forced = ks.iter().filter(|&&x| heap.less(a, x) && heap.less(x, b)).count();
    let possible = ks
        .iter()
        .filter(|&&x| x != a && x != b && !heap.less(x, a) && !heap.less(b, x))
        .count();
    Ok(BetweenCounts { forced, possible })
}

/// Brute-force closure on raw words under commutations and braid relations.
pub fn closure_oracle(group: &CoxeterGroup, word: &[Node], limits: Limits) -> Result<BTreeSet<Vec<Node>>> {
    require_reduced(group, word)?;
    raw_closure(group.diagram(), word, limits, true)
}

/// Words reachable by commutations alone (the linear extensions of the heap).
pub fn commutation_oracle(d: &CoxeterDiagram, word: &[Node], limits: Limits) -> Result<BTreeSet<Vec<Node>>> {
    raw_closure(d, word, limits, false)
}

fn raw_closure(d: &CoxeterDiagram, word: &[Node], limits: Limits, braids: bool) -> Result<BTreeSet<Vec<Node>>> {
    let mut seen = BTreeSet::from([word.to_vec()]);
    let mut queue = VecDeque::from([word.to_vec()]);
    while let Some(w) = queue.pop_front() {
        for p in 0..w.len().saturating_sub(1) {
            let (s, t) = (w[p], w[p + 1]);
            if s == t {
                continue;
            }
            let m = match d.bond(s, t) {
                Bond::Finite(m) => m as usize,
                Bond::Infinite => continue,
            };
            if m > 2 && !braids {
                continue;
            }
            if p + m > w.len() || (0..m).any(|j| w[p + j] != if j % 2 == 0 { s } else { t }) {
                continue;
            }
            let mut v = w.clone();
            for j in 0..m {
                v[p + j] = if j % 2 == 0 { t } else { s };
            }
            if seen.insert(v.clone()) {
                if seen.len() > limits.max_classes.max(limits.max_steps) {
                    return Err(Error::LimitExceeded(format!("{} words", seen.len())));
                }
                queue.push_back(v);
            }
        }
    }
    Ok(seen)
}
