use serde::{Deserialize, Serialize};

use crate::diagram::{CoxeterDiagram, Node};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Two structure constants compared directly.
    DirectCommutator,
    /// No reversed factorization `w = v'z'u'` below the given one.
    BruhatDecomposition,
    /// Occurrence counts over every reduced expression exclude a reversed factorization.
    HeapExclusion,
    /// Row-specific between-count pattern over every reduced expression.
    StarPattern,
    /// Shortest path between two nodes outside `I`.
    PathWitness,
    /// A diagram automorphism inverting every minimal representative.
    Automorphism,
    /// A witness re-verified in a diagram with larger bonds.
    Lift,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Noncommutative,
    Commutative,
    CommutativeUpToBound,
    Inconclusive,
}

/// Method-specific evidence. Words use the space-separated node-label format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// A pair with `c^I_{u,v;w} != c^I_{v,u;w}`, or the scan summary when none was found.
    Commutator {
        u: Option<String>,
        v: Option<String>,
        w: Option<String>,
        c_uv: Option<String>,
        c_vu: Option<String>,
        psi_uv: Option<String>,
        psi_vu: Option<String>,
        representatives: usize,
        pairs_checked: usize,
        bound: Option<usize>,
    },
    Decomposition {
        u: String,
        z: String,
        v: String,
        w: String,
        states: usize,
        guard: usize,
        /// `(v', z', u')` when a reversed factorization exists.
        found: Option<[String; 3]>,
    },
    Heap {
        w: String,
        u: String,
        w_i: String,
        i: String,
        k: String,
        classes: Vec<String>,
        checks: Vec<String>,
        pattern: Option<String>,
        /// A second, independent certificate when one was run.
        second: Option<Box<Certificate>>,
    },
    Path {
        path: Vec<String>,
        inner: Box<Certificate>,
    },
    Automorphism {
        /// `(s, pi(s))` for every node.
        permutation: Option<Vec<(String, String)>>,
        representatives: usize,
        bound: Option<usize>,
        failure: Option<String>,
    },
    Lift {
        source_diagram: String,
        inner: Box<Certificate>,
    },
}

/// A verdict together with the data needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub case: String,
    pub diagram: String,
    pub subset: Vec<String>,
    pub method: Method,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        serde_json::from_str(text).map_err(|e| Error::MalformedWitness(e.to_string()))
    }

    pub fn is_noncommutative(&self) -> bool {
        self.verdict == Verdict::Noncommutative
    }

    pub(crate) fn diagram_and_subset(&self) -> Result<(CoxeterDiagram, std::collections::BTreeSet<Node>)> {
        let d = CoxeterDiagram::parse(&self.diagram)?;
        let subset = self.subset.iter().map(|s| d.node(s)).collect::<Result<_>>()?;
        Ok((d, subset))
    }

    /// Re-derives the verdict from the recorded evidence. Returns whether
    /// the recomputed verdict matches.
    pub fn recheck(&self) -> Result<bool> {
        super::verify::recheck(self)
    }
}

pub(crate) fn subset_names(d: &CoxeterDiagram, subset: &std::collections::BTreeSet<Node>) -> Vec<String> {
    subset.iter().map(|&s| d.name(s).to_string()).collect()
}
