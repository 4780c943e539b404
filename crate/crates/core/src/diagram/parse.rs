use std::collections::BTreeMap;

use super::{AffineType, Bond, CoxeterDiagram, DiagramKind, FiniteType, Node, NodeId};
use crate::error::{Error, Result};

pub(super) fn parse_diagram(spec: &str) -> Result<CoxeterDiagram> {
    let spec = spec.trim();
    if let Some(body) = spec.strip_prefix("matrix") {
        return parse_matrix(spec, body.trim());
    }
    if let Some(rest) = spec.strip_prefix('~') {
        return Ok(parse_affine(rest.trim())?.diagram());
    }
    let parts: Vec<&str> = spec.split(" x ").map(str::trim).collect();
    let mut comps = Vec::with_capacity(parts.len());
    for part in &parts {
        let (name, sup) = match part.find('^') {
            Some(p) => (&part[..p], Some(&part[p + 1..])),
            None => (&part[..], None),
        };
        let ty = parse_finite(name.trim())?;
        let sup = match sup {
            Some(s) => parse_superscript(s.trim(), ty.rank())?,
            None => Vec::new(),
        };
        comps.push((ty, sup));
    }
    if comps.len() == 1 && comps[0].1.is_empty() {
        return Ok(comps[0].0.diagram());
    }
    let attached = comps.iter().any(|(_, s)| !s.is_empty());
    let mut nodes = Vec::new();
    let mut bonds = BTreeMap::new();
    if attached {
        nodes.push(NodeId { component: 0, label: 0 });
    }
    for (c, (ty, sup)) in comps.iter().enumerate() {
        let base = nodes.len() as Node;
        for label in 1..=ty.rank() as u8 {
            nodes.push(NodeId { component: c as u8, label });
        }
        for (a, b, m) in ty.bond_list() {
            bonds.insert((base + a - 1, base + b - 1), Bond::Finite(m));
        }
        let mut mult: BTreeMap<u8, u32> = BTreeMap::new();
        for &i in sup {
            *mult.entry(i).or_default() += 1;
        }
        for (i, k) in mult {
            bonds.insert((0, base + i - 1), Bond::Finite(2 + k));
        }
    }
    let kind = if attached {
        DiagramKind::Attached(comps)
    } else {
        DiagramKind::Product(comps.into_iter().map(|(t, _)| t).collect())
    };
    Ok(CoxeterDiagram::from_parts(nodes, bonds, kind))
}

fn split_family(name: &str) -> Result<(char, &str)> {
    let mut chars = name.chars();
    let fam = chars.next().ok_or_else(|| Error::UnknownFamily(name.to_string()))?;
    if !fam.is_ascii_uppercase() {
        return Err(Error::UnknownFamily(name.to_string()));
    }
    Ok((fam, chars.as_str()))
}

fn parse_rank(name: &str, digits: &str) -> Result<usize> {
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::UnknownFamily(name.to_string()));
    }
    digits
        .parse()
        .map_err(|_| Error::RankOutOfRange { family: name.to_string(), rank: usize::MAX })
}

fn parse_finite(name: &str) -> Result<FiniteType> {
    let (fam, rest) = split_family(name)?;
    if fam == 'I' {
        let inner = rest
            .strip_prefix("2(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))?;
        let m = parse_rank(name, inner)?;
        if m < 3 {
            return Err(Error::RankOutOfRange { family: "I2".into(), rank: m });
        }
        return Ok(match m {
            3 => FiniteType::A(2),
            4 => FiniteType::B(2),
            _ => FiniteType::I2(m as u32),
        });
    }
    let n = parse_rank(name, rest)?;
    let out_of_range = || Error::RankOutOfRange { family: fam.to_string(), rank: n };
    let ty = match fam {
        'A' if n >= 1 => FiniteType::A(n),
        'B' | 'C' if n >= 2 => FiniteType::B(n),
        'D' if n >= 4 => FiniteType::D(n),
        'E' => match n {
            6 => FiniteType::E6,
            7 => FiniteType::E7,
            8 => FiniteType::E8,
            _ => return Err(out_of_range()),
        },
        'F' if n == 4 => FiniteType::F4,
        'G' if n == 2 => FiniteType::I2(6),
        'H' if n == 3 => FiniteType::H3,
        'H' if n == 4 => FiniteType::H4,
        'A' | 'B' | 'C' | 'D' | 'F' | 'G' | 'H' => return Err(out_of_range()),
        _ => return Err(Error::UnknownFamily(name.to_string())),
    };
    Ok(ty)
}

fn parse_affine(name: &str) -> Result<AffineType> {
    let (fam, rest) = split_family(name)?;
    let n = parse_rank(name, rest)?;
    let out_of_range = || Error::RankOutOfRange { family: format!("~{fam}"), rank: n };
    let ty = match fam {
        'A' if n >= 1 => AffineType::A(n),
        'B' if n >= 3 => AffineType::B(n),
        'C' if n >= 2 => AffineType::C(n),
        'D' if n >= 4 => AffineType::D(n),
        'E' => match n {
            6 => AffineType::E6,
            7 => AffineType::E7,
            8 => AffineType::E8,
            _ => return Err(out_of_range()),
        },
        'F' if n == 4 => AffineType::F4,
        'G' if n == 2 => AffineType::G2,
        'A' | 'B' | 'C' | 'D' | 'F' | 'G' => return Err(out_of_range()),
        _ => return Err(Error::UnknownFamily(format!("~{name}"))),
    };
    Ok(ty)
}

/// `{i,j,...}` or a bare single index. Each index may repeat at most three times.
fn parse_superscript(text: &str, rank: usize) -> Result<Vec<u8>> {
    let bad = || Error::MalformedSuperscript(text.to_string());
    let inner = if let Some(r) = text.strip_prefix('{') {
        r.strip_suffix('}').ok_or_else(bad)?
    } else {
        text
    };
    let mut out = Vec::new();
    for tok in inner.split(',') {
        let i: usize = tok.trim().parse().map_err(|_| bad())?;
        if i == 0 || i > rank {
            return Err(bad());
        }
        out.push(i as u8);
    }
    for &i in &out {
        if out.iter().filter(|&&j| j == i).count() > 3 {
            return Err(bad());
        }
    }
    Ok(out)
}

fn parse_matrix(spec: &str, body: &str) -> Result<CoxeterDiagram> {
    let syntax = |reason: &str| Error::DiagramSyntax { spec: spec.to_string(), reason: reason.to_string() };
    let inner = body
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| syntax("expected braces"))?;
    let mut items = inner.split(';').map(str::trim);
    let head = items.next().ok_or_else(|| syntax("missing node count"))?;
    let (zero_based, n) = match head.strip_prefix("0..") {
        Some(top) => (true, top.parse::<usize>().map_err(|_| syntax("bad node range"))? + 1),
        None => (false, head.parse::<usize>().map_err(|_| syntax("bad node count"))?),
    };
    if n == 0 || n > 64 {
        return Err(syntax("node count must be between 1 and 64"));
    }
    let first = if zero_based { 0u8 } else { 1u8 };
    let nodes: Vec<NodeId> = (0..n as u8).map(|i| NodeId { component: 0, label: first + i }).collect();
    let mut bonds = BTreeMap::new();
    for item in items.filter(|s| !s.is_empty()) {
        let (pair, m) = item.split_once(':').ok_or_else(|| syntax("expected i-j:m"))?;
        let (a, b) = pair.split_once('-').ok_or_else(|| syntax("expected i-j:m"))?;
        let idx = |t: &str| -> Result<Node> {
            let v: usize = t.trim().parse().map_err(|_| Error::UnknownNode(t.trim().to_string()))?;
            if v < first as usize || v >= first as usize + n {
                return Err(Error::UnknownNode(t.trim().to_string()));
            }
            Ok((v - first as usize) as Node)
        };
        let (a, b) = (idx(a)?, idx(b)?);
        if a == b {
            return Err(syntax("diagonal entry"));
        }
        let m = match m.trim() {
            "inf" | "∞" => Bond::Infinite,
            t => {
                let v: u32 = t.parse().map_err(|_| syntax("bad bond value"))?;
                if v < 2 {
                    return Err(Error::BondTooSmall(v));
                }
                Bond::Finite(v)
            }
        };
        if bonds.insert((a.min(b), a.max(b)), m).is_some() {
            return Err(Error::DuplicateBond(item.to_string()));
        }
    }
    Ok(CoxeterDiagram::from_parts(nodes, bonds, DiagramKind::Explicit { zero_based }))
}
