//! Text formats: frame description files, presentation files, and the
//! DOT emitter for Hasse diagrams.
//!
//! Frame files list elements and Hasse covers; the order is the
//! reflexive-transitive closure of the covers, and top and bottom are
//! inferred and validated downstream by the frame check. Presentation
//! files list generators, a total meet table (one line per unordered
//! pair), and coverage instances. Blank lines and `#` comments are
//! ignored. Parse errors cite the offending line; semilattice or frame
//! law violations are not parse errors and surface from the respective
//! validators instead.

use crate::bits::Bits;
use crate::frame::Frame;
use crate::poset::{Poset, PosetError};
use crate::presentation::Instance;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

fn meaningful(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Kind of a description file, decided by its first meaningful line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Frame,
    Presentation,
}

pub fn sniff(text: &str) -> Result<FileKind, ParseError> {
    match meaningful(text).next() {
        Some((_, l)) if l.starts_with("frame") => Ok(FileKind::Frame),
        Some((_, l)) if l.starts_with("gens") => Ok(FileKind::Presentation),
        Some((line, l)) => err(
            line,
            format!("expected `frame <name>` or `gens <id>...`, found `{l}`"),
        ),
        None => err(0, "empty description"),
    }
}

/// A parsed frame file: name and order data. Whether the poset is a
/// frame is a separate question for `check_frame`.
#[derive(Debug)]
pub struct FrameFile {
    pub name: String,
    pub poset: Poset,
}

pub fn parse_frame(text: &str) -> Result<FrameFile, ParseError> {
    let mut name = None;
    let mut elems: Vec<(usize, String)> = Vec::new();
    let mut covers: Vec<(usize, String, String)> = Vec::new();
    for (line, l) in meaningful(text) {
        let mut words = l.split_whitespace();
        match words.next() {
            Some("frame") => {
                if name.is_some() {
                    return err(line, "duplicate `frame` header");
                }
                match (words.next(), words.next()) {
                    (Some(n), None) => name = Some(n.to_string()),
                    _ => return err(line, "expected `frame <name>`"),
                }
            }
            Some("elem") => match (words.next(), words.next()) {
                (Some(id), None) => elems.push((line, id.to_string())),
                _ => return err(line, "expected `elem <id>`"),
            },
            Some("cover") => match (words.next(), words.next(), words.next()) {
                (Some(lo), Some(hi), None) => covers.push((line, lo.to_string(), hi.to_string())),
                _ => return err(line, "expected `cover <lower> <upper>`"),
            },
            Some(other) => return err(line, format!("unknown directive `{other}`")),
            None => unreachable!(),
        }
    }
    let Some(name) = name else {
        return err(0, "missing `frame <name>` header");
    };
    for (i, (line, id)) in elems.iter().enumerate() {
        if elems[..i].iter().any(|(_, other)| other == id) {
            return err(*line, format!("duplicate element `{id}`"));
        }
    }
    for (line, lo, hi) in &covers {
        for id in [lo, hi] {
            if !elems.iter().any(|(_, e)| e == id) {
                return err(*line, format!("unknown element `{id}` in cover"));
            }
        }
    }
    let ids: Vec<String> = elems.into_iter().map(|(_, id)| id).collect();
    let pairs: Vec<(String, String)> = covers
        .iter()
        .map(|(_, lo, hi)| (lo.clone(), hi.clone()))
        .collect();
    match Poset::from_covers(&ids, &pairs) {
        Ok(poset) => Ok(FrameFile { name, poset }),
        Err(PosetError::Cycle(a, b)) => {
            let line = covers
                .iter()
                .find(|(_, lo, hi)| (lo == &a || lo == &b) && (hi == &a || hi == &b))
                .map(|(l, _, _)| *l)
                .unwrap_or(0);
            err(line, format!("cover cycle through `{a}` and `{b}`"))
        }
        Err(e) => err(0, e.to_string()),
    }
}

/// A parsed presentation file: generator ids, raw meet table, and
/// coverage instances. Semilattice laws are checked by the caller via
/// `GenSemilattice::new`.
#[derive(Debug)]
pub struct PresentationFile {
    pub gens: Vec<String>,
    pub meet: Vec<u32>,
    pub instances: Vec<Instance>,
}

pub fn parse_presentation(text: &str) -> Result<PresentationFile, ParseError> {
    let mut gens: Option<(usize, Vec<String>)> = None;
    let mut meets: Vec<(usize, String, String, String)> = Vec::new();
    let mut covers: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (line, l) in meaningful(text) {
        let mut words = l.split_whitespace();
        match words.next() {
            Some("gens") => {
                if gens.is_some() {
                    return err(line, "duplicate `gens` line");
                }
                let ids: Vec<String> = words.map(String::from).collect();
                if ids.is_empty() {
                    return err(line, "expected `gens <id>...`");
                }
                gens = Some((line, ids));
            }
            Some("meet") => match (words.next(), words.next(), words.next(), words.next()) {
                (Some(a), Some(b), Some(c), None) => {
                    meets.push((line, a.into(), b.into(), c.into()))
                }
                _ => return err(line, "expected `meet <a> <b> <c>`"),
            },
            Some("cover") => {
                let rest: Vec<&str> = l.split_whitespace().skip(1).collect();
                let Some(bar) = rest.iter().position(|w| *w == "|") else {
                    return err(line, "expected `cover <target> | <member>...`");
                };
                if bar != 1 {
                    return err(line, "expected exactly one target before `|`");
                }
                covers.push((
                    line,
                    rest[0].to_string(),
                    rest[bar + 1..].iter().map(|s| s.to_string()).collect(),
                ));
            }
            Some(other) => return err(line, format!("unknown directive `{other}`")),
            None => unreachable!(),
        }
    }
    let Some((gline, ids)) = gens else {
        return err(0, "missing `gens` line");
    };
    for id in &ids {
        if ids.iter().filter(|other| *other == id).count() > 1 {
            return err(gline, format!("duplicate generator `{id}`"));
        }
    }
    let n = ids.len();
    let at = |line: usize, id: &str| -> Result<usize, ParseError> {
        match ids.iter().position(|g| g == id) {
            Some(i) => Ok(i),
            None => err(line, format!("unknown generator `{id}`")),
        }
    };
    let mut table: Vec<Option<u32>> = vec![None; n * n];
    for i in 0..n {
        table[i * n + i] = Some(i as u32);
    }
    for (line, a, b, c) in &meets {
        let (a, b, c) = (at(*line, a)?, at(*line, b)?, at(*line, c)?);
        for (x, y) in [(a, b), (b, a)] {
            if let Some(prev) = table[x * n + y] {
                if prev != c as u32 {
                    return err(*line, "conflicting meet for this pair".to_string());
                }
            }
            table[x * n + y] = Some(c as u32);
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if table[a * n + b].is_none() {
                return err(
                    gline,
                    format!("missing `meet {} {} <c>` line", ids[a], ids[b]),
                );
            }
        }
    }
    let meet: Vec<u32> = table.into_iter().map(|x| x.unwrap()).collect();
    let mut instances = Vec::new();
    for (line, target, members) in &covers {
        let target = at(*line, target)?;
        let mut cover = Bits::empty(n);
        for m in members {
            cover.insert(at(*line, m)?);
        }
        instances.push(Instance { target, cover });
    }
    Ok(PresentationFile {
        gens: ids,
        meet,
        instances,
    })
}

fn quote(id: &str) -> String {
    format!("\"{}\"", id.replace('"', "\\\""))
}

/// DOT rendering of the Hasse diagram: nodes in element order, edges
/// exactly the covering pairs.
pub fn hasse_dot(name: &str, frame: &Frame) -> String {
    let mut out = String::new();
    let graph_name: String = name
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect();
    out.push_str(&format!("digraph {graph_name} {{\n"));
    out.push_str("  rankdir=BT;\n");
    for x in frame.elems() {
        out.push_str(&format!("  {};\n", quote(frame.id(x))));
    }
    for (lo, hi) in frame.poset().covers() {
        out.push_str(&format!(
            "  {} -> {};\n",
            quote(frame.id(lo)),
            quote(frame.id(hi))
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{boolean_square, chain, check_frame};
    use crate::presentation::GenSemilattice;

    const DIAMOND: &str = "\
frame diamond
elem bot
elem a
elem b
elem top
cover bot a
cover bot b
cover a top
cover b top
";

    #[test]
    fn parse_diamond() {
        let ff = parse_frame(DIAMOND).unwrap();
        assert_eq!(ff.name, "diamond");
        assert_eq!(ff.poset.len(), 4);
        assert!(check_frame(&ff.poset).valid());
    }

    #[test]
    fn parse_errors_cite_lines() {
        let bad = "frame f\nelem a\ncover a b\n";
        let e = parse_frame(bad).unwrap_err();
        assert_eq!(e.line, 3);
        let dup = "frame f\nelem a\nelem a\n";
        let e = parse_frame(dup).unwrap_err();
        assert_eq!(e.line, 3);
        let cyc = "frame f\nelem a\nelem b\ncover a b\ncover b a\n";
        let e = parse_frame(cyc).unwrap_err();
        assert!(e.message.contains("cycle"));
        assert!(sniff("nonsense here\n").is_err());
    }

    #[test]
    fn parse_presentation_roundtrip() {
        let text = "\
# one generator under a top
gens top g
meet top g g
cover g |
";
        let pf = parse_presentation(text).unwrap();
        assert_eq!(pf.gens, vec!["top".to_string(), "g".to_string()]);
        let sl = GenSemilattice::new(pf.gens.clone(), pf.meet.clone()).unwrap();
        assert_eq!(sl.top(), 0);
        assert_eq!(pf.instances.len(), 1);
        assert!(pf.instances[0].cover.is_empty());
        assert_eq!(sniff(text).unwrap(), FileKind::Presentation);
        assert_eq!(sniff(DIAMOND).unwrap(), FileKind::Frame);
    }

    #[test]
    fn presentation_requires_total_meets() {
        let text = "gens top a b\nmeet top a a\nmeet top b b\n";
        let e = parse_presentation(text).unwrap_err();
        assert!(e.message.contains("missing `meet a b"));
    }

    #[test]
    fn conflicting_meets_rejected() {
        let text = "gens top a b\nmeet top a a\nmeet top b b\nmeet a b a\nmeet b a b\n";
        let e = parse_presentation(text).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.message.contains("conflicting meet"));
    }

    #[test]
    fn dot_shapes() {
        let three = hasse_dot("threechain", &chain(3));
        assert_eq!(three.matches(" -> ").count(), 2);
        assert_eq!(three.matches(";\n").count(), 3 + 2 + 1); // nodes + edges + rankdir
        let square = hasse_dot("square", &boolean_square());
        assert_eq!(square.matches(" -> ").count(), 4);
        // stable output
        assert_eq!(square, hasse_dot("square", &boolean_square()));
    }
}
