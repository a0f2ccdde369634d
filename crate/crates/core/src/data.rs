//! Text formats, the bundled 56-point biplanes, and difference-set fixtures.
//!
//! An incidence file is a `v b` header followed by `v` rows of `b` characters
//! from `{0,1}`; row `i` lists the blocks through point `i`. Lines starting with
//! `#` are comments and may appear anywhere.

use std::fmt::Write as _;
use std::path::Path;

use crate::code::SupportSet;
use crate::design::IncidenceStructure;
use crate::error::{Error, Result};

/// Identifiers of the five biplanes with 56 points, in table order.
pub const BIPLANE_IDS: [&str; 5] = ["B1", "B2", "B3", "B4", "B5"];

const BUNDLED: [&str; 5] = [
    include_str!("../../../data/biplanes/B1.inc"),
    include_str!("../../../data/biplanes/B2.inc"),
    include_str!("../../../data/biplanes/B3.inc"),
    include_str!("../../../data/biplanes/B4.inc"),
    include_str!("../../../data/biplanes/B5.inc"),
];

/// A parsed incidence file: the structure plus its comment lines (without `#`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceFile {
    pub comments: Vec<String>,
    pub structure: IncidenceStructure,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_incidence_file(text: &str) -> Result<IncidenceFile> {
    let mut comments = Vec::new();
    let mut content = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim_end();
        if let Some(c) = trimmed.strip_prefix('#') {
            comments.push(c.trim().to_string());
        } else if !trimmed.is_empty() {
            content.push((i + 1, trimmed));
        }
    }
    let Some(&(header_line, header)) = content.first() else {
        return Err(parse_error(1, 1, "missing \"v b\" header"));
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_error(header_line, 1, "header must be two integers \"v b\""));
    }
    let parse_dim = |f: &str| {
        f.parse::<usize>().map_err(|_| {
            parse_error(
                header_line,
                header.find(f).unwrap_or(0) + 1,
                format!("bad dimension {f:?}"),
            )
        })
    };
    let (v, b) = (parse_dim(fields[0])?, parse_dim(fields[1])?);
    let body = &content[1..];
    if body.len() != v {
        let line = body.last().map_or(header_line, |r| r.0) + 1;
        return Err(parse_error(line, 1, format!("expected {v} rows, found {}", body.len())));
    }
    let mut rows = Vec::with_capacity(v);
    for &(line, row) in body {
        let mut entries = Vec::with_capacity(b);
        for (col, ch) in row.chars().enumerate() {
            match ch {
                '0' => entries.push(0),
                '1' => entries.push(1),
                other => return Err(parse_error(line, col + 1, format!("illegal character {other:?}"))),
            }
        }
        if entries.len() != b {
            return Err(parse_error(
                line,
                entries.len().min(b) + 1,
                format!("ragged row: expected {b} entries, found {}", entries.len()),
            ));
        }
        rows.push(entries);
    }
    let structure = if v == 0 {
        IncidenceStructure::from_blocks(0, &vec![Vec::new(); b])?
    } else {
        IncidenceStructure::from_incidence_rows(&rows)?
    };
    Ok(IncidenceFile { comments, structure })
}

pub fn parse_incidence(text: &str) -> Result<IncidenceStructure> {
    parse_incidence_file(text).map(|f| f.structure)
}

pub fn serialize_incidence(d: &IncidenceStructure) -> String {
    serialize_incidence_with_comments(d, &[])
}

pub fn serialize_incidence_with_comments(d: &IncidenceStructure, comments: &[String]) -> String {
    let mut s = String::with_capacity((d.b() + 1) * (d.v() + 1) + 16);
    for c in comments {
        let _ = writeln!(s, "# {c}");
    }
    let _ = writeln!(s, "{} {}", d.v(), d.b());
    for row in d.incidence_rows() {
        s.extend(row.iter().map(|&e| if e == 1 { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

pub fn read_incidence(path: &Path) -> Result<IncidenceStructure> {
    parse_incidence(&std::fs::read_to_string(path)?)
}

/// The five bundled biplanes as `(id, structure)` pairs.
pub fn bundled_biplanes() -> Result<Vec<(String, IncidenceStructure)>> {
    BIPLANE_IDS
        .iter()
        .zip(BUNDLED)
        .map(|(id, text)| Ok((id.to_string(), parse_incidence(text)?)))
        .collect()
}

pub fn bundled_biplane(id: &str) -> Result<IncidenceStructure> {
    let i = BIPLANE_IDS
        .iter()
        .position(|&b| b == id)
        .ok_or_else(|| Error::DataIntegrity(format!("no bundled biplane {id:?}")))?;
    parse_incidence(BUNDLED[i])
}

pub fn bundled_biplane_text(id: &str) -> Option<&'static str> {
    BIPLANE_IDS.iter().position(|&b| b == id).map(|i| BUNDLED[i])
}

/// Loads `B1.inc` … `B5.inc` from `dir`.
pub fn load_biplane_dir(dir: &Path) -> Result<Vec<(String, IncidenceStructure)>> {
    BIPLANE_IDS
        .iter()
        .map(|id| {
            let path = dir.join(format!("{id}.inc"));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::DataIntegrity(format!("{}: {e}", path.display())))?;
            let d = parse_incidence(&text).map_err(|e| Error::DataIntegrity(format!("{}: {e}", path.display())))?;
            Ok((id.to_string(), d))
        })
        .collect()
}

/// One support per line, space-separated coordinates, lines in the given order.
pub fn format_supports(supports: &[SupportSet]) -> String {
    let mut s = String::new();
    for sup in supports {
        let mut first = true;
        for c in sup.coordinates() {
            if !first {
                s.push(' ');
            }
            first = false;
            let _ = write!(s, "{c}");
        }
        s.push('\n');
    }
    s
}

/// Parses [`format_supports`] output. With `length = None` the ambient length
/// is one past the largest coordinate seen.
pub fn parse_supports(text: &str, length: Option<usize>) -> Result<Vec<SupportSet>> {
    let mut lists = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut coords = Vec::new();
        for f in line.split_whitespace() {
            let c = f.parse::<usize>().map_err(|_| {
                parse_error(i + 1, line.find(f).unwrap_or(0) + 1, format!("not an index: {f:?}"))
            })?;
            coords.push(c);
        }
        lists.push((i + 1, coords));
    }
    let length = length.unwrap_or_else(|| {
        lists
            .iter()
            .flat_map(|(_, c)| c.iter().copied())
            .max()
            .map_or(0, |m| m + 1)
    });
    lists
        .into_iter()
        .map(|(line, c)| SupportSet::new(length, c).map_err(|e| parse_error(line, 1, e.to_string())))
        .collect()
}

/// A group small enough to search exhaustively for difference sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    Cyclic(usize),
    /// `(Z_2)^m`, elements encoded as `m`-bit integers.
    ElementaryAbelian2(u32),
}

impl Group {
    pub fn order(&self) -> usize {
        match *self {
            Group::Cyclic(n) => n,
            Group::ElementaryAbelian2(m) => 1 << m,
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        match *self {
            Group::Cyclic(n) => (a + b) % n,
            Group::ElementaryAbelian2(_) => a ^ b,
        }
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        match *self {
            Group::Cyclic(n) => (a + n - b) % n,
            Group::ElementaryAbelian2(_) => a ^ b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceSetSpec {
    pub group: Group,
    pub elements: Vec<usize>,
}

/// The design whose blocks are the translates `g + D`; block `g` is indexed by `g`.
pub fn develop_difference_set(spec: &DifferenceSetSpec) -> Result<IncidenceStructure> {
    let v = spec.group.order();
    let mut seen = vec![false; v];
    for &d in &spec.elements {
        if d >= v {
            return Err(Error::IndexOutOfRange { index: d, limit: v });
        }
        if std::mem::replace(&mut seen[d], true) {
            return Err(Error::InvalidStructure(format!("duplicate element {d}")));
        }
    }
    let blocks: Vec<Vec<usize>> = (0..v)
        .map(|g| {
            let mut b: Vec<usize> = spec.elements.iter().map(|&d| spec.group.add(g, d)).collect();
            b.sort_unstable();
            b
        })
        .collect();
    IncidenceStructure::from_blocks(v, &blocks)
}

fn is_difference_set(group: Group, set: &[usize], lambda: usize) -> bool {
    let mut counts = vec![0usize; group.order()];
    for &a in set {
        for &b in set {
            if a != b {
                counts[group.sub(a, b)] += 1;
            }
        }
    }
    counts[1..].iter().all(|&c| c == lambda)
}

/// Exhaustive search for a `(v, k, λ)` difference set containing 0 (every
/// difference set has such a translate). Groups of order above 16 are refused.
pub fn find_difference_set(group: Group, k: usize, lambda: usize) -> Result<Option<DifferenceSetSpec>> {
    let v = group.order();
    if v > 16 {
        return Err(Error::Inadmissible(format!("group order {v} exceeds the search limit 16")));
    }
    if k == 0 || k > v || k * (k - 1) != lambda * (v - 1) {
        return Ok(None);
    }
    let mut rest: Vec<usize> = (0..k - 1).collect();
    loop {
        let set: Vec<usize> = std::iter::once(0).chain(rest.iter().map(|&x| x + 1)).collect();
        if is_difference_set(group, &set, lambda) {
            return Ok(Some(DifferenceSetSpec { group, elements: set }));
        }
        if !crate::design::next_combination(&mut rest, v - 1) {
            return Ok(None);
        }
    }
}

/// The Fano plane developed from `{1,2,4}` in `Z_7`.
pub fn fano_plane() -> IncidenceStructure {
    develop_difference_set(&DifferenceSetSpec {
        group: Group::Cyclic(7),
        elements: vec![1, 2, 4],
    })
    .expect("valid difference set")
}

/// The 2-(11,5,2) biplane from the quadratic residues mod 11.
pub fn biplane_11() -> IncidenceStructure {
    develop_difference_set(&DifferenceSetSpec {
        group: Group::Cyclic(11),
        elements: vec![1, 3, 4, 5, 9],
    })
    .expect("valid difference set")
}

/// A 2-(16,6,2) biplane developed in `(Z_2)^4`.
pub fn biplane_16() -> IncidenceStructure {
    develop_difference_set(&DifferenceSetSpec {
        group: Group::ElementaryAbelian2(4),
        elements: vec![0, 1, 2, 4, 8, 15],
    })
    .expect("valid difference set")
}
