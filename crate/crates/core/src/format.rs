//! Line-based text formats and the JSON-lines report.
//!
//! Every format starts with a `<kind> 1` header line. `#` starts a comment
//! and blank lines are ignored.

use serde::Serialize;

use crate::amalgam::{Fact, FactValue};
use crate::error::{Error, Result};
use crate::ordering::HfOrdering;
use crate::predim::Orientation;
use crate::pstss::{PartialSts, VertexId};
use crate::trees::{display_address, BinaryTreeLabeling};

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Content lines with 1-based line numbers, comments stripped, after the
/// header has been checked.
fn content_lines<'a>(text: &'a str, kind: &str) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty());
    match lines.next() {
        Some((_, t)) if t == [kind, "1"] => {}
        Some((n, t)) => return Err(parse_error(n, format!("expected `{kind} 1` header, found `{}`", t.join(" ")))),
        None => return Err(parse_error(1, format!("missing `{kind} 1` header"))),
    }
    Ok(lines.collect())
}

pub fn write_pstss(p: &PartialSts) -> String {
    let mut out = String::from("pstss 1\n");
    for name in p.names() {
        out.push_str(&format!("v {name}\n"));
    }
    for b in p.blocks() {
        let [x, y, z] = p.block_names(b);
        out.push_str(&format!("b {x} {y} {z}\n"));
    }
    out
}

pub fn parse_pstss(text: &str) -> Result<PartialSts> {
    let mut vertices = Vec::new();
    let mut blocks = Vec::new();
    for (n, t) in content_lines(text, "pstss")? {
        match t.as_slice() {
            ["v", name] => {
                if !blocks.is_empty() {
                    return Err(parse_error(n, "vertex after the first block"));
                }
                vertices.push(name.to_string());
            }
            ["b", x, y, z] => blocks.push([x.to_string(), y.to_string(), z.to_string()]),
            _ => return Err(parse_error(n, format!("unrecognized line `{}`", t.join(" ")))),
        }
    }
    PartialSts::build(vertices, blocks)
}

pub fn write_hforder(p: &PartialSts, order: &HfOrdering) -> String {
    write_names("hforder", order.sequence().iter().map(|&v| p.name(v)))
}

fn write_names<'a>(kind: &str, names: impl Iterator<Item = &'a str>) -> String {
    let mut out = format!("{kind} 1\n");
    for n in names {
        out.push_str(n);
        out.push('\n');
    }
    out
}

/// Vertex names in increasing order.
pub fn parse_hforder(text: &str) -> Result<Vec<String>> {
    content_lines(text, "hforder")?
        .into_iter()
        .map(|(n, t)| match t.as_slice() {
            [name] => Ok(name.to_string()),
            _ => Err(parse_error(n, "expected one vertex name per line")),
        })
        .collect()
}

/// Resolves the names of an `hforder` file against `p`.
pub fn parse_hforder_in(p: &PartialSts, text: &str) -> Result<Vec<VertexId>> {
    parse_hforder(text)?.iter().map(|n| p.id(n)).collect()
}

/// A confined core, one vertex name per line.
pub fn write_core(p: &PartialSts, core: &crate::ordering::ConfinedCore) -> String {
    let mut out = write_names("core", core.core.iter().map(|&v| p.name(v)));
    if let Some(a) = &core.anchored_over {
        out.push_str(&format!("# anchored over {}\n", p.set_names(a).join(" ")));
    }
    out
}

pub fn write_orientation(p: &PartialSts, o: &Orientation) -> String {
    let mut out = String::from("orient 1\n");
    for (b, apex) in o.pairs() {
        let [x, y, z] = p.block_names(b);
        out.push_str(&format!("{x} {y} {z} -> {}\n", p.name(*apex)));
    }
    out
}

pub fn parse_orientation(p: &PartialSts, text: &str) -> Result<Orientation> {
    let mut apex = Vec::new();
    for (n, t) in content_lines(text, "orient")? {
        let [x, y, z, "->", a] = t.as_slice() else {
            return Err(parse_error(n, "expected `<b1> <b2> <b3> -> <apex>`"));
        };
        let (x, y, z, a) = (p.id(x)?, p.id(y)?, p.id(z)?, p.id(a)?);
        let block = p
            .block_of_pair(x, y)
            .filter(|b| b.contains(z))
            .ok_or_else(|| parse_error(n, "not a block of the structure"))?;
        apex.push((block, a));
    }
    Orientation::new(p, apex)
}

pub fn write_tree(p: &PartialSts, t: &BinaryTreeLabeling) -> String {
    let mut out = String::from("btree 1\n");
    for s in crate::trees::tree_addresses(t.height) {
        if let Some(v) = t.node(&s) {
            out.push_str(&format!("{} {}\n", display_address(&s), p.name(v)));
        }
    }
    out
}

/// The height is one more than the longest address.
pub fn parse_tree(p: &PartialSts, text: &str) -> Result<BinaryTreeLabeling> {
    let mut nodes = std::collections::BTreeMap::new();
    for (n, t) in content_lines(text, "btree")? {
        let [s, name] = t.as_slice() else {
            return Err(parse_error(n, "expected `<address> <vertex>`"));
        };
        let addr = if *s == "EPS" { String::new() } else { s.to_string() };
        if !addr.chars().all(|c| c == '0' || c == '1') {
            return Err(parse_error(n, format!("bad address `{s}`")));
        }
        if nodes.insert(addr, p.id(name)?).is_some() {
            return Err(parse_error(n, format!("address `{s}` repeated")));
        }
    }
    let height = nodes.keys().map(|s| s.len() + 1).max().unwrap_or(0);
    Ok(BinaryTreeLabeling { height, nodes })
}

pub fn write_glue(pairs: &[(String, String)]) -> String {
    let mut out = String::from("glue 1\n");
    for (b, c) in pairs {
        out.push_str(&format!("{b} {c}\n"));
    }
    out
}

pub fn parse_glue(text: &str) -> Result<Vec<(String, String)>> {
    content_lines(text, "glue")?
        .into_iter()
        .map(|(n, t)| match t.as_slice() {
            [b, c] => Ok((b.to_string(), c.to_string())),
            _ => Err(parse_error(n, "expected `<bname> <cname>`")),
        })
        .collect()
}

/// `<name> <level>` pairs of a levels sidecar (no header).
pub fn parse_levels(text: &str) -> Result<Vec<(String, usize)>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .map(|(n, t)| match t.as_slice() {
            [name, level] => level
                .parse()
                .map(|l| (name.to_string(), l))
                .map_err(|_| parse_error(n, format!("bad level `{level}`"))),
            _ => Err(parse_error(n, "expected `<name> <level>`")),
        })
        .collect()
}

#[derive(Serialize)]
struct ReportLine<'a> {
    fact: &'a str,
    value: serde_json::Value,
    certificate: Option<&'a str>,
}

/// One JSON object per line: `{"fact", "value", "certificate"}`.
pub fn report_line(fact: &str, value: FactValue, certificate: Option<&str>) -> String {
    let value = match value {
        FactValue::Bool(b) => serde_json::Value::Bool(b),
        FactValue::Int(i) => serde_json::Value::from(i),
    };
    serde_json::to_string(&ReportLine {
        fact,
        value,
        certificate,
    })
    .expect("report lines serialize")
}

pub fn write_report(facts: &[Fact]) -> String {
    facts
        .iter()
        .map(|f| report_line(&f.name, f.value, None) + "\n")
        .collect()
}
