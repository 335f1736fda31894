//! The `knet` text format.
//!
//! ```text
//! knet 1
//! n <width>
//! c <i1> <i2> ... <ik>
//! r
//! c ...
//! ```
//!
//! Indices are 0-based and strictly increasing inside a `c` line. An `r` line
//! between comparators starts a new round; comparators inside one round must
//! not share a line. Lines starting with `#` are comments. Blank lines are
//! ignored. The writer emits LF line endings and no comments.

use std::fmt::Write as _;

use super::{Comparator, Network};
use crate::error::{Error, Result};

pub fn read_network(text: &str) -> Result<Network> {
    let mut content = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    match content.next() {
        Some((_, "knet 1")) => {}
        Some((no, l)) => return Err(Error::parse(no, format!("expected `knet 1`, found `{l}`"))),
        None => return Err(Error::parse(1, "missing `knet 1` header")),
    }

    let width = match content.next() {
        Some((no, l)) => {
            let rest = l
                .strip_prefix("n ")
                .ok_or_else(|| Error::parse(no, format!("expected `n <width>`, found `{l}`")))?;
            let w: usize = rest
                .parse()
                .map_err(|_| Error::parse(no, format!("invalid width `{rest}`")))?;
            if w == 0 {
                return Err(Error::parse(no, "width must be at least 1"));
            }
            w
        }
        None => return Err(Error::parse(1, "missing `n <width>` line")),
    };

    let mut comparators = Vec::new();
    let mut marks = Vec::new();
    let mut pending_mark: Option<usize> = None;
    // Text line of each comparator, for round-conflict errors.
    let mut origins = Vec::new();

    for (no, l) in content {
        if l == "r" {
            if comparators.is_empty() || pending_mark.is_some() {
                return Err(Error::parse(no, "empty round"));
            }
            pending_mark = Some(no);
            continue;
        }
        let rest = l
            .strip_prefix("c ")
            .ok_or_else(|| Error::parse(no, format!("unrecognised line `{l}`")))?;
        let lines = rest
            .split(' ')
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::parse(no, format!("invalid index `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if lines.len() < 2 {
            return Err(Error::parse(no, "comparator needs at least 2 lines"));
        }
        if lines.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(no, "indices must be strictly increasing"));
        }
        let max = *lines.last().unwrap();
        if max >= width {
            return Err(Error::parse(no, format!("index {max} ≥ width {width}")));
        }
        if pending_mark.take().is_some() {
            marks.push(comparators.len());
        }
        origins.push(no);
        comparators.push(Comparator::new(lines).map_err(|e| Error::parse(no, e.to_string()))?);
    }
    if let Some(no) = pending_mark {
        return Err(Error::parse(no, "empty round"));
    }

    // Without any `r` lines the network has no round structure and lines may
    // repeat freely.
    if !marks.is_empty() {
        let mut last_round = vec![usize::MAX; width];
        let mut round = 0;
        let mut next_mark = marks.iter().peekable();
        for (idx, c) in comparators.iter().enumerate() {
            if next_mark.peek() == Some(&&idx) {
                next_mark.next();
                round += 1;
            }
            for &i in c.lines() {
                if last_round[i] == round {
                    return Err(Error::parse(
                        origins[idx],
                        format!("line {i} appears twice in round {}", round + 1),
                    ));
                }
                last_round[i] = round;
            }
        }
    }
    let marks = (!marks.is_empty()).then_some(marks);
    Network::with_marks(width, comparators, marks).map_err(|e| Error::parse(1, e.to_string()))
}

pub fn write_network(net: &Network) -> String {
    let mut out = String::new();
    let marks = net.round_marks().unwrap_or(&[]);
    let _ = writeln!(out, "knet 1");
    let _ = writeln!(out, "n {}", net.width());
    let mut next_mark = marks.iter().peekable();
    for (idx, c) in net.comparators().iter().enumerate() {
        if next_mark.peek() == Some(&&idx) {
            next_mark.next();
            out.push_str("r\n");
        }
        out.push('c');
        for i in c.lines() {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_triangle() {
        let net = read_network("knet 1\nn 3\nc 0 1\nc 1 2\nc 0 1\n").unwrap();
        assert_eq!(net.width(), 3);
        assert_eq!(net.size(), 3);
        assert_eq!(net.round_marks(), None);
        assert_eq!(net.comparators()[1].lines(), &[1, 2]);
    }

    #[test]
    fn index_out_of_range() {
        let err = read_network("knet 1\nn 2\nc 0 2\n").unwrap_err();
        assert_eq!(err, Error::parse(3, "index 2 ≥ width 2"));
        assert_eq!(err.to_string(), "parse error at line 3: index 2 ≥ width 2");
    }

    #[test]
    fn malformed_inputs() {
        let cases = [
            ("", 1),
            ("knet 2\nn 3\n", 1),
            ("knet 1\nwidth 3\n", 2),
            ("knet 1\nn 0\n", 2),
            ("knet 1\nn x\n", 2),
            ("knet 1\nn 3\nc 1 0\n", 3),
            ("knet 1\nn 3\nc 1\n", 3),
            ("knet 1\nn 3\nc 0 -1\n", 3),
            ("knet 1\nn 3\nc 0  1\n", 3),
            ("knet 1\nn 3\nx 0 1\n", 3),
            ("knet 1\nn 3\nr\nc 0 1\n", 3),
            ("knet 1\nn 3\nc 0 1\nr\nr\nc 1 2\n", 5),
            ("knet 1\nn 3\nc 0 1\nr\n", 4),
            ("knet 1\nn 3\nc 0 1\nc 1 2\nr\nc 0 1\n", 4),
            ("knet 1\r\nn 3\r\n", 1),
        ];
        for (text, line) in cases {
            match read_network(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn duplicate_line_in_round() {
        let err = read_network("knet 1\nn 4\nc 0 1\nr\nc 1 2\nc 2 3\n").unwrap_err();
        assert_eq!(err, Error::parse(6, "line 2 appears twice in round 2"));
    }

    #[test]
    fn comments_and_rounds() {
        let text = "# header comment\nknet 1\nn 4\nc 0 1\nc 2 3\n# mid\nr\nc 1 2\n";
        let net = read_network(text).unwrap();
        assert_eq!(net.round_marks(), Some(&[2][..]));
        assert_eq!(write_network(&net), "knet 1\nn 4\nc 0 1\nc 2 3\nr\nc 1 2\n");
    }

    #[test]
    fn writes_canonical_form() {
        let net = Network::new(
            3,
            vec![
                Comparator::pair(0, 1).unwrap(),
                Comparator::new(vec![0, 1, 2]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(write_network(&net), "knet 1\nn 3\nc 0 1\nc 0 1 2\n");
        assert_eq!(read_network(&write_network(&net)).unwrap(), net);
    }
}
