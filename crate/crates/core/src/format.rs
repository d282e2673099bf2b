//! Text formats: plain edge lists and graph6.

use crate::error::{Error, Result};
use crate::graph::Graph;

const G6_HEADER: &str = ">>graph6<<";

fn parse_err(line: usize, byte: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        byte,
        message: message.into(),
    }
}

/// Parses an edge list: one `u v` pair per line, `#` starts a comment.
/// The order is one past the largest index, or the value of an `# order: N`
/// comment if that is larger.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut order = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let (content, comment) = match raw.find('#') {
            Some(i) => (&raw[..i], Some(&raw[i + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some(rest) = c.trim().strip_prefix("order:") {
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(line, 0, format!("bad order declaration {:?}", rest.trim())))?;
                order = order.max(n);
            }
        }
        let mut tokens = Vec::new();
        let mut offset = 0;
        for tok in content.split_whitespace() {
            let at = content[offset..].find(tok).unwrap() + offset;
            offset = at + tok.len();
            tokens.push((at, tok));
        }
        match tokens.as_slice() {
            [] => continue,
            [(bu, u), (bv, v)] => {
                let u: usize = u
                    .parse()
                    .map_err(|_| parse_err(line, *bu, format!("expected vertex index, found {u:?}")))?;
                let v: usize = v
                    .parse()
                    .map_err(|_| parse_err(line, *bv, format!("expected vertex index, found {v:?}")))?;
                if u == v {
                    return Err(parse_err(line, *bu, format!("self-loop at vertex {u}")));
                }
                order = order.max(u + 1).max(v + 1);
                edges.push((u, v));
            }
            _ => {
                let at = tokens.get(2).map_or(tokens[0].0, |t| t.0);
                return Err(parse_err(line, at, "expected exactly two vertex indices"));
            }
        }
    }
    Graph::from_edges(order, edges)
}

/// Emits an edge list with an `# order:` header line.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("# order: {}\n", g.order());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses one graph6 string (an optional `>>graph6<<` header is accepted).
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let s = text.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(G6_HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(1, i, format!("byte {b:#04x} outside the graph6 range")));
        }
    }
    let take = |from: usize, count: usize| -> Result<u64> {
        if from + count > bytes.len() {
            return Err(parse_err(1, bytes.len(), "truncated order field"));
        }
        Ok(bytes[from..from + count]
            .iter()
            .fold(0u64, |acc, &b| (acc << 6) | u64::from(b - 63)))
    };
    let (n, mut pos) = match bytes.first() {
        None => return Err(parse_err(1, 0, "empty graph6 string")),
        Some(126) if bytes.get(1) == Some(&126) => (take(2, 6)? as usize, 8),
        Some(126) => (take(1, 3)? as usize, 4),
        Some(&b) => (usize::from(b - 63), 1),
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let needed = pairs.div_ceil(6);
    if bytes.len() - pos != needed {
        return Err(parse_err(
            1,
            pos,
            format!(
                "expected {needed} adjacency bytes for order {n}, found {}",
                bytes.len() - pos
            ),
        ));
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + bit / 6] - 63;
            if (byte >> (5 - bit % 6)) & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    pos += needed;
    debug_assert_eq!(pos, bytes.len());
    Graph::from_edges(n, edges)
}

/// Encodes a graph as graph6 (no header, no trailing newline).
pub fn write_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Accepts either format: a single token of graph6 characters is read as
/// graph6, anything else as an edge list.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let meaningful: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    match meaningful.as_slice() {
        [single] if single.bytes().all(|b| (63..=126).contains(&b)) => parse_graph6(single),
        _ => parse_edge_list(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph6_known_strings() {
        // 0-2, 0-4, 1-3, 3-4
        let g = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(write_graph6(&g), "DQc");
        assert_eq!(parse_graph6("DQc").unwrap(), g);
        assert_eq!(write_graph6(&Graph::empty(0)), "?");
        assert_eq!(write_graph6(&Graph::complete(4)), "C~");
        assert_eq!(write_graph6(&Graph::path(2)), "A_");
        assert_eq!(parse_graph6(">>graph6<<C~\n").unwrap(), Graph::complete(4));
    }

    #[test]
    fn graph6_long_order_field() {
        let g = Graph::path(70);
        let s = write_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(&s[..4], "~?@E");
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn graph6_errors() {
        assert!(matches!(parse_graph6(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph6("D Q"), Err(Error::Parse { byte: 1, .. })));
        assert!(matches!(parse_graph6("DQ"), Err(Error::Parse { .. })));
    }

    #[test]
    fn edge_list_roundtrip_and_errors() {
        let text = "# a path\n0 1\n1 2   # trailing\n\n2 3\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g, Graph::path(4));
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
        let padded = parse_edge_list("# order: 6\n0 1\n").unwrap();
        assert_eq!(padded.order(), 6);
        match parse_edge_list("0 1\n1 x\n") {
            Err(Error::Parse { line, byte, .. }) => assert_eq!((line, byte), (2, 2)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_edge_list("0 1 2\n"),
            Err(Error::Parse { line: 1, byte: 4, .. })
        ));
        assert!(matches!(parse_edge_list("3 3\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn autodetect() {
        assert_eq!(parse_graph("DQc\n").unwrap().size(), 4);
        assert_eq!(parse_graph("0 1\n").unwrap(), Graph::path(2));
    }
}
