//! Plain-text snapshot files:
//!
//! ```text
//! t 3
//! sources 4 17
//! observed 2 4 9 17 20
//! ```
//!
//! Ids are ascending and space-separated; the `sources` line may be empty
//! when the true sources are unknown.

use std::io::{BufRead, Write};

use crate::graph::NodeSet;

use super::HarnessError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotFile {
    pub t: u32,
    pub sources: NodeSet,
    pub observed: NodeSet,
}

pub fn write_snapshot<W: Write>(snap: &SnapshotFile, mut out: W) -> std::io::Result<()> {
    writeln!(out, "t {}", snap.t)?;
    writeln!(out, "sources {}", snap.sources)?;
    writeln!(out, "observed {}", snap.observed)?;
    Ok(())
}

fn parse_line<T: std::str::FromStr>(
    line: Option<std::io::Result<String>>,
    number: usize,
    key: &str,
) -> Result<Vec<T>, HarnessError> {
    let bad = |msg: String| HarnessError::Snapshot { line: number, message: msg };
    let line = line.ok_or_else(|| bad(format!("missing `{key}` line")))??;
    let mut fields = line.split_whitespace();
    if fields.next() != Some(key) {
        return Err(bad(format!("expected `{key}`")));
    }
    fields
        .map(|f| f.parse().map_err(|_| bad(format!("bad value {f:?}"))))
        .collect()
}

pub fn read_snapshot<R: BufRead>(input: R) -> Result<SnapshotFile, HarnessError> {
    let mut lines = input.lines();
    let t: Vec<u32> = parse_line(lines.next(), 1, "t")?;
    let [t] = t[..] else {
        return Err(HarnessError::Snapshot {
            line: 1,
            message: "expected one value".into(),
        });
    };
    let sources: Vec<usize> = parse_line(lines.next(), 2, "sources")?;
    let observed: Vec<usize> = parse_line(lines.next(), 3, "observed")?;
    Ok(SnapshotFile {
        t,
        sources: sources.into_iter().collect(),
        observed: observed.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let snap = SnapshotFile {
            t: 3,
            sources: NodeSet::from([17, 4]),
            observed: NodeSet::from([2, 4, 9, 17, 20]),
        };
        let mut buf = Vec::new();
        write_snapshot(&snap, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "t 3\nsources 4 17\nobserved 2 4 9 17 20\n"
        );
        assert_eq!(read_snapshot(&buf[..]).unwrap(), snap);
    }

    #[test]
    fn empty_sources_line() {
        let snap = read_snapshot("t 0\nsources\nobserved 1\n".as_bytes()).unwrap();
        assert!(snap.sources.is_empty());
    }

    #[test]
    fn errors_carry_line() {
        let err = read_snapshot("t 1\nsources 1\nobs 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, HarnessError::Snapshot { line: 3, .. }));
        let err = read_snapshot("t x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, HarnessError::Snapshot { line: 1, .. }));
        assert!(read_snapshot("t 1\n".as_bytes()).is_err());
    }
}
