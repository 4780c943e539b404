//! The word table: one row per case `(W, I = S \ {i})` with a witness
//! `w = u w_I i`, a label `k`, and the between-count pattern to check.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::diagram::{CoxeterDiagram, Node};
use crate::error::{Error, Result};
use crate::group::{mask_of, CoxeterGroup};

const EMBEDDED: &str = include_str!("../../tables/appendix.txt");

/// How a row's heap data is turned into a proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarPattern {
    /// `k` never lies between the first two `i`'s of any expression with the
    /// fewest `i`'s; the expression is essentially unique.
    FirstTwo,
    /// As `FirstTwo`, but several braid classes are involved.
    FirstTwoMulti,
    /// Every expression has at least `n` occurrences of `k` between its last two `i`'s.
    LastTwoAtLeast(usize),
}

impl StarPattern {
    pub fn is_star(self) -> bool {
        self != StarPattern::FirstTwo
    }

    pub(crate) fn parse(text: &str) -> Option<StarPattern> {
        match text {
            "-" => Some(StarPattern::FirstTwo),
            "first-two" => Some(StarPattern::FirstTwoMulti),
            t => t.strip_prefix("last-two>=")?.parse().ok().map(StarPattern::LastTwoAtLeast),
        }
    }
}

impl fmt::Display for StarPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarPattern::FirstTwo => f.write_str("-"),
            StarPattern::FirstTwoMulti => f.write_str("first-two"),
            StarPattern::LastTwoAtLeast(n) => write!(f, "last-two>={n}"),
        }
    }
}

/// Parametrized word families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `D_n`, `n/2 < i < n-1`.
    D,
    /// `~B_n`, `1 < i < n-1`.
    AffineB,
    /// `~B_n`, `i = n`.
    AffineBEnd,
    /// `~C_n`, `1 <= i < n`.
    AffineC,
    /// `~D_n`, `1 < i < n-1`.
    AffineD,
}

fn desc(hi: usize, lo: usize) -> Vec<usize> {
    if hi < lo {
        return Vec::new();
    }
    (lo..=hi).rev().collect()
}

fn asc(lo: usize, hi: usize) -> Vec<usize> {
    if hi < lo {
        return Vec::new();
    }
    (lo..=hi).collect()
}

impl Family {
    fn parse(key: &str, range: &str) -> Option<Family> {
        let f = match key {
            "D" => Family::D,
            "~B" => Family::AffineB,
            "~B-end" => Family::AffineBEnd,
            "~C" => Family::AffineC,
            "~D" => Family::AffineD,
            _ => return None,
        };
        (f.range_text() == range).then_some(f)
    }

    pub fn range_text(self) -> &'static str {
        match self {
            Family::D => "n/2<i<n-1",
            Family::AffineB | Family::AffineD => "1<i<n-1",
            Family::AffineBEnd => "i=n",
            Family::AffineC => "1<=i<n",
        }
    }

    pub fn min_rank(self) -> usize {
        match self {
            Family::D => 5,
            Family::AffineB => 4,
            Family::AffineBEnd => 3,
            Family::AffineC => 2,
            Family::AffineD => 4,
        }
    }

    pub fn in_range(self, n: usize, i: usize) -> bool {
        n >= self.min_rank()
            && match self {
                Family::D => 2 * i > n && i < n - 1,
                Family::AffineB | Family::AffineD => 1 < i && i < n - 1,
                Family::AffineBEnd => i == n,
                Family::AffineC => 1 <= i && i < n,
            }
    }

    /// All in-range `(n, i)` with `n <= max_n`.
    pub fn parameters(self, max_n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for n in self.min_rank()..=max_n {
            for i in 0..=n {
                if self.in_range(n, i) {
                    out.push((n, i));
                }
            }
        }
        out
    }

    fn diagram_spec(self, n: usize) -> String {
        match self {
            Family::D => format!("D{n}"),
            Family::AffineB | Family::AffineBEnd => format!("~B{n}"),
            Family::AffineC => format!("~C{n}"),
            Family::AffineD => format!("~D{n}"),
        }
    }

    /// `(u, w_I, k)` as label sequences.
    fn words(self, n: usize, i: usize) -> (Vec<usize>, Vec<usize>, usize) {
        match self {
            Family::D => {
                let mut u = Vec::new();
                for j in 0..n - i {
                    u.extend(desc(i + j, 2 * i + 1 + j - n));
                }
                let mut wi = vec![n];
                wi.extend(desc(n - 2, i + 1));
                // the ascending run starts at 2i-n so that w stays inside the
                // D-residue on nodes 2i-n..n; starting at 1 would leave 1 as
                // a left descent of w whenever 2i-n > 1
                wi.extend(asc(2 * i - n, i - 1));
                (u, wi, n)
            }
            Family::AffineB | Family::AffineD => {
                let mut u = desc(i, 2);
                u.extend([0, 1]);
                u.extend(asc(2, i));
                let mut wi = asc(i + 1, n);
                let top = if self == Family::AffineB { n - 1 } else { n - 2 };
                wi.extend(desc(top, i + 1));
                (u, wi, i + 1)
            }
            Family::AffineBEnd => {
                let mut u = Vec::new();
                for j in 1..=n {
                    u.extend(desc(n, j));
                }
                let mut wi = vec![0];
                wi.extend(asc(2, n - 1));
                (u, wi, 0)
            }
            Family::AffineC => {
                let mut u = desc(i, 1);
                u.push(0);
                u.extend(asc(1, i));
                let mut wi = asc(i + 1, n);
                wi.extend(desc(n - 1, i + 1));
                (u, wi, i + 1)
            }
        }
    }

    fn case_id(self, n: usize, i: usize) -> String {
        match self {
            Family::D => format!("D_{{{n},{i}}}"),
            Family::AffineB | Family::AffineBEnd => format!("~B_{{{n},{i}}}"),
            Family::AffineC => format!("~C_{{{n},{i}}}"),
            Family::AffineD => format!("~D_{{{n},{i}}}"),
        }
    }
}

/// One line of the table, as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub id: String,
    pub diagram: String,
    pub u: String,
    pub w_i: String,
    pub i: String,
    pub k: String,
    pub pattern: StarPattern,
    pub family: Option<Family>,
}

/// A concrete witness: the words resolved against a diagram.
#[derive(Clone, Debug)]
pub struct WordSet {
    pub case: String,
    pub group: Arc<CoxeterGroup>,
    pub subset: BTreeSet<Node>,
    pub u: Vec<Node>,
    pub w_i: Vec<Node>,
    pub i: Node,
    pub k: Node,
    pub pattern: StarPattern,
}

impl WordSet {
    pub fn diagram(&self) -> &CoxeterDiagram {
        self.group.diagram()
    }

    /// `u w_I i`.
    pub fn word(&self) -> Vec<Node> {
        let mut w = self.u.clone();
        w.extend_from_slice(&self.w_i);
        w.push(self.i);
        w
    }

    /// Moves right descents of `u` lying in `I` into the front of `w_I`,
    /// deleting the exchanged letter from `u`. The element `w` is unchanged
    /// and `u` becomes a minimal double coset representative whenever `w` is.
    pub fn with_reduced_u(mut self) -> Result<WordSet> {
        let g = self.group.clone();
        loop {
            let e = g.element(&self.u)?;
            let Some(&s) = e.right_descents().iter().find(|s| self.subset.contains(s)) else { break };
            let target = e.mul_gen_right(s);
            let p = (0..self.u.len())
                .rev()
                .find(|&p| {
                    let mut x = self.u.clone();
                    x.remove(p);
                    g.element(&x).is_ok_and(|x| x == target)
                })
                .expect("exchange condition");
            self.u.remove(p);
            self.w_i.insert(0, s);
        }
        Ok(self)
    }

    /// Checks that `w = u w_I i` is reduced, `u` and `w` are `I`-reduced, and
    /// `w_I` lies in `W_I`.
    pub fn check(&self) -> std::result::Result<(), String> {
        let g = &self.group;
        let d = g.diagram();
        let mask = mask_of(&self.subset);
        let w = self.word();
        if !g.is_reduced(&w).map_err(|e| e.to_string())? {
            return Err(format!("{} is not reduced", d.format_word(&w)));
        }
        if self.w_i.iter().any(|s| !self.subset.contains(s)) {
            return Err("w_I leaves W_I".into());
        }
        for (name, word) in [("u", &self.u), ("w", &w)] {
            let e = g.element(word).map_err(|e| e.to_string())?;
            if !e.is_i_reduced(mask) {
                return Err(format!("{name} = {} is not I-reduced", d.format_word(word)));
            }
        }
        Ok(())
    }
}

impl TableRow {
    pub fn is_star(&self) -> bool {
        self.pattern.is_star()
    }

    /// Builds the witness for a fixed row (`params = None`) or a family
    /// member `(n, i)`.
    pub fn instantiate(&self, params: Option<(usize, usize)>) -> Result<WordSet> {
        let bad = |reason: String| Error::MalformedRow { row: self.id.clone(), reason };
        let (case, spec, u, wi, i, k) = match (self.family, params) {
            (None, None) => (
                self.id.clone(),
                self.diagram.clone(),
                self.u.clone(),
                self.w_i.clone(),
                self.i.clone(),
                self.k.clone(),
            ),
            (Some(f), Some((n, i))) => {
                if !f.in_range(n, i) {
                    return Err(bad(format!("parameters n={n}, i={i} outside {}", f.range_text())));
                }
                let (u, wi, k) = f.words(n, i);
                let join = |v: Vec<usize>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                (f.case_id(n, i), f.diagram_spec(n), join(u), join(wi), i.to_string(), k.to_string())
            }
            (None, Some(_)) => return Err(bad("row takes no parameters".into())),
            (Some(_), None) => return Err(bad("parametrized row needs (n, i)".into())),
        };
        let group = CoxeterGroup::from_spec(&spec).map_err(|e| bad(e.to_string()))?;
        let d = group.diagram();
        let node = |t: &str| d.node(t).map_err(|e| bad(e.to_string()));
        let i = node(&i)?;
        let k = node(&k)?;
        let u = d.parse_word(&u).map_err(|e| bad(e.to_string()))?;
        let w_i = d.parse_word(&wi).map_err(|e| bad(e.to_string()))?;
        let subset = d.complement_of(i);
        let ws = WordSet { case, group, subset, u, w_i, i, k, pattern: self.pattern }.with_reduced_u()?;
        ws.check().map_err(bad)?;
        Ok(ws)
    }

    /// Every instance: the row itself, or each family member with `n <= max_n`.
    pub fn instances(&self, max_n: usize) -> Result<Vec<WordSet>> {
        match self.family {
            None => Ok(vec![self.instantiate(None)?]),
            Some(f) => f.parameters(max_n).into_iter().map(|p| self.instantiate(Some(p))).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    rows: Vec<TableRow>,
}

impl Table {
    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn get(&self, id: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    /// Looks up a row by id, also resolving concrete family ids such as
    /// `D_{7,5}` to the family row and its parameters.
    pub fn resolve(&self, id: &str) -> Option<(&TableRow, Option<(usize, usize)>)> {
        if let Some(r) = self.get(id) {
            return Some((r, None));
        }
        for r in &self.rows {
            let Some(f) = r.family else { continue };
            let prefix = &r.id[..r.id.find('{')? + 1];
            let Some(rest) = id.strip_prefix(prefix).and_then(|s| s.strip_suffix('}')) else { continue };
            let Some((a, b)) = rest.split_once(',') else { continue };
            let (Ok(n), Ok(i)) = (a.trim().parse::<usize>(), b.trim().parse::<usize>()) else { continue };
            if f.in_range(n, i) {
                return Some((r, Some((n, i))));
            }
        }
        None
    }
}

/// Parses the line format `id | diagram | u | w_I | i | k | pattern [| family=..; range=..]`.
pub fn parse_table(text: &str) -> Result<Table> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        let id = cols[0].to_string();
        let bad = |reason: &str| Error::MalformedRow { row: id.clone(), reason: reason.to_string() };
        if cols.len() != 7 && cols.len() != 8 {
            return Err(bad("expected 7 or 8 columns"));
        }
        let pattern = StarPattern::parse(cols[6]).ok_or_else(|| bad("unknown pattern"))?;
        let family = match cols.get(7) {
            None => None,
            Some(extra) => {
                let mut key = None;
                let mut range = None;
                for field in extra.split(';') {
                    match field.trim().split_once('=') {
                        Some(("family", v)) => key = Some(v.trim()),
                        Some(("range", v)) => range = Some(v.trim()),
                        _ => return Err(bad("unknown family field")),
                    }
                }
                let (k, r) = key.zip(range).ok_or_else(|| bad("family needs family= and range="))?;
                Some(Family::parse(k, r).ok_or_else(|| bad("unknown family or range"))?)
            }
        };
        rows.push(TableRow {
            id: id.clone(),
            diagram: cols[1].to_string(),
            u: cols[2].to_string(),
            w_i: cols[3].to_string(),
            i: cols[4].to_string(),
            k: cols[5].to_string(),
            pattern,
            family,
        });
    }
    Ok(Table { rows })
}

/// The table compiled into the library.
pub fn embedded_table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| parse_table(EMBEDDED).expect("embedded table parses"))
}
