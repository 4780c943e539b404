use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::certificate::Verdict;
use crate::diagram::{CoxeterDiagram, FiniteType, Node, Sphericity};
use crate::error::{Error, Result};

/// Which entry of the classification produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `I = S` in a finite group: a single double coset.
    WholeGroup,
    /// Two or more nodes removed from a connected diagram.
    SeveralRemoved,
    /// Finite type, one node removed, looked up in the list of commutative pairs.
    SphericalList,
    /// Affine type with a special node removed.
    AffineSpecial,
    /// Affine type with a non-special node removed.
    AffineNonSpecial,
    /// Connected, neither finite nor affine.
    GeneralInfinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub rule: Rule,
    /// Set for verdicts that rest on the general classification with no
    /// finite-type or affine table behind them.
    pub theorem_level: bool,
    /// The matched type and label, e.g. `D7, node 5`.
    pub detail: String,
}

/// Whether removing catalog label `i` from an irreducible finite type gives a
/// commutative parabolic Hecke algebra.
pub fn spherical_commutative(ty: FiniteType, i: usize) -> bool {
    match ty {
        FiniteType::A(_) | FiniteType::B(_) | FiniteType::I2(_) => true,
        FiniteType::D(n) => 2 * i <= n || i + 1 >= n,
        FiniteType::E6 => matches!(i, 1 | 2 | 6),
        FiniteType::E7 => matches!(i, 1 | 2 | 7),
        FiniteType::E8 => matches!(i, 1 | 8),
        FiniteType::F4 => matches!(i, 1 | 4),
        FiniteType::H3 => matches!(i, 1 | 3),
        FiniteType::H4 => i == 1,
    }
}

fn class(verdict: bool, rule: Rule, detail: String) -> Classification {
    let verdict = if verdict { Verdict::Commutative } else { Verdict::Noncommutative };
    Classification { verdict, rule, theorem_level: false, detail }
}

/// Table lookup for commutativity of `H^I` on a connected diagram.
pub fn classify(d: &CoxeterDiagram, subset: &BTreeSet<Node>) -> Result<Classification> {
    if !d.is_connected() {
        return Err(Error::Disconnected);
    }
    if subset.iter().any(|&s| s as usize >= d.rank()) {
        return Err(Error::InvalidSubset("node outside the diagram".into()));
    }
    if !d.is_spherical(subset) {
        return Err(Error::NonSpherical);
    }
    let removed: Vec<Node> = d.all_nodes().into_iter().filter(|s| !subset.contains(s)).collect();
    let names: Vec<&str> = removed.iter().map(|&s| d.name(s)).collect();
    match removed.len() {
        0 => return Ok(class(true, Rule::WholeGroup, "no node removed".into())),
        1 => {}
        _ => return Ok(class(false, Rule::SeveralRemoved, format!("nodes {} removed", names.join(",")))),
    }
    let i = removed[0];
    let all: BTreeSet<Node> = d.all_nodes().into_iter().collect();
    if let Sphericity::Finite(dec) = d.classify_spherical(&all) {
        let comp = &dec.components[0];
        let label = comp.nodes.iter().position(|&s| s == i).expect("node in its component") + 1;
        return Ok(class(spherical_commutative(comp.ty, label), Rule::SphericalList, format!("{}, label {label}", comp.ty)));
    }
    if let Some((ty, _)) = d.recognize_affine() {
        let special = d.special_vertices().unwrap_or_default();
        let detail = format!("{ty}, node {}", d.name(i));
        return Ok(if special.contains(&i) {
            class(true, Rule::AffineSpecial, detail)
        } else {
            class(false, Rule::AffineNonSpecial, detail)
        });
    }
    Ok(Classification {
        verdict: Verdict::Noncommutative,
        rule: Rule::GeneralInfinite,
        theorem_level: true,
        detail: format!("node {} of a non-affine infinite diagram", d.name(i)),
    })
}
