//! Plain-text region sets.
//!
//! ```text
//! ddm-regions v1 d=2 n=1 m=1
//! S 0 1 4 5 8
//! U 0 3 7 6 9
//! ```
//!
//! The header gives the dimension count and the number of subscription
//! (`n`) and update (`m`) regions. Each following line is a role letter,
//! the region id, and the lower/upper pair of every dimension in turn.
//! Blank lines and `#` comments are ignored.

use std::io::{BufRead, Write};
use std::path::Path;

use ddm_core::{validate_regions, Interval, Region, Role};

use crate::error::{CliError, CliResult};

pub const MAGIC: &str = "ddm-regions v1";

pub fn write_regions<W: Write>(mut w: W, subs: &[Region], upds: &[Region]) -> std::io::Result<()> {
    let d = subs.iter().chain(upds).next().map_or(1, Region::dims);
    writeln!(w, "{MAGIC} d={d} n={} m={}", subs.len(), upds.len())?;
    for r in subs.iter().chain(upds) {
        let tag = match r.role {
            Role::Subscription => 'S',
            Role::Update => 'U',
        };
        write!(w, "{tag} {}", r.id)?;
        for iv in &r.extents {
            write!(w, " {} {}", iv.lower(), iv.upper())?;
        }
        writeln!(w)?;
    }
    w.flush()
}

pub fn save_regions(path: &Path, subs: &[Region], upds: &[Region]) -> CliResult<()> {
    let f = std::fs::File::create(path).map_err(CliError::io(path.display()))?;
    write_regions(std::io::BufWriter::new(f), subs, upds).map_err(CliError::io(path.display()))
}

struct Header {
    d: usize,
    n: usize,
    m: usize,
}

fn parse_header(line: &str) -> Option<Header> {
    let rest = line.strip_prefix(MAGIC)?;
    let mut d = None;
    let mut n = None;
    let mut m = None;
    for field in rest.split_whitespace() {
        let (key, value) = field.split_once('=')?;
        let value: usize = value.parse().ok()?;
        match key {
            "d" => d = Some(value),
            "n" => n = Some(value),
            "m" => m = Some(value),
            _ => return None,
        }
    }
    Some(Header { d: d?, n: n?, m: m? })
}

/// Parses a region set; `origin` names the source in error messages.
pub fn read_regions<R: BufRead>(r: R, origin: &str) -> CliResult<(Vec<Region>, Vec<Region>)> {
    let fail = |line, message: String| CliError::Format {
        path: origin.to_string(),
        line,
        message,
    };
    let mut header = None;
    let mut subs = Vec::new();
    let mut upds = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(CliError::io(origin))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(h) = &header else {
            header = Some(parse_header(line).ok_or_else(|| fail(lineno, format!("expected `{MAGIC} d=.. n=.. m=..`")))?);
            continue;
        };
        let mut tok = line.split_whitespace();
        let role = match tok.next() {
            Some("S") => Role::Subscription,
            Some("U") => Role::Update,
            other => return Err(fail(lineno, format!("expected role S or U, found {other:?}"))),
        };
        let id: u32 = tok
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| fail(lineno, "missing or bad region id".into()))?;
        let coords = tok
            .map(|t| t.parse::<f64>().map_err(|e| fail(lineno, format!("bad coordinate `{t}`: {e}"))))
            .collect::<CliResult<Vec<_>>>()?;
        if coords.len() != 2 * h.d {
            return Err(fail(lineno, format!("expected {} coordinates, found {}", 2 * h.d, coords.len())));
        }
        let extents = coords
            .chunks(2)
            .map(|c| Interval::new(c[0], c[1]))
            .collect::<ddm_core::Result<Vec<_>>>()
            .map_err(|e| fail(lineno, e.to_string()))?;
        let region = Region::new(id, role, extents);
        match role {
            Role::Subscription => subs.push(region),
            Role::Update => upds.push(region),
        }
    }
    let h = header.ok_or_else(|| fail(0, "empty region file".into()))?;
    if subs.len() != h.n || upds.len() != h.m {
        return Err(fail(
            0,
            format!("header announces n={} m={}, found {} and {}", h.n, h.m, subs.len(), upds.len()),
        ));
    }
    subs.sort_by_key(|r| r.id);
    upds.sort_by_key(|r| r.id);
    for set in [&subs, &upds] {
        if let Err(v) = validate_regions(set) {
            return Err(fail(0, format!("{} invalid region(s), first: {}", v.len(), v[0])));
        }
    }
    Ok((subs, upds))
}

pub fn load_regions(path: &Path) -> CliResult<(Vec<Region>, Vec<Region>)> {
    let f = std::fs::File::open(path).map_err(CliError::io(path.display()))?;
    read_regions(std::io::BufReader::new(f), &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Vec<Region>, Vec<Region>) {
        let iv = |a, b| Interval::new(a, b).unwrap();
        (
            vec![
                Region::subscription(0, vec![iv(0.1, 0.7), iv(-3.0, 2.5)]),
                Region::subscription(1, vec![iv(1e-300, 1e300), iv(0.0, 0.0)]),
            ],
            vec![Region::update(0, vec![iv(1.0 / 3.0, 2.0 / 3.0), iv(5.0, 6.0)])],
        )
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let (s, u) = sample();
        let mut buf = Vec::new();
        write_regions(&mut buf, &s, &u).unwrap();
        assert!(buf.starts_with(b"ddm-regions v1 d=2 n=2 m=1\n"));
        let (s2, u2) = read_regions(&buf[..], "mem").unwrap();
        assert_eq!((s, u), (s2, u2));
    }

    #[test]
    fn malformed_files_name_the_line() {
        let cases = [
            ("", 0),
            ("ddm-regions v2 d=1 n=0 m=0\n", 1),
            ("ddm-regions v1 d=1 n=1 m=0\nX 0 1 2\n", 2),
            ("ddm-regions v1 d=1 n=1 m=0\nS 0 1\n", 2),
            ("ddm-regions v1 d=1 n=1 m=0\nS 0 3 1\n", 2),
            ("ddm-regions v1 d=1 n=1 m=0\nS zero 1 2\n", 2),
            ("ddm-regions v1 d=1 n=2 m=0\nS 0 1 2\n", 0),
            ("ddm-regions v1 d=1 n=1 m=0\nS 4 1 2\n", 0),
        ];
        for (text, line) in cases {
            match read_regions(text.as_bytes(), "t") {
                Err(CliError::Format { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
