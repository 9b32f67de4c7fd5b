//! Plain-text code files.
//!
//! ```text
//! # free-form comment lines
//! n = 8
//! k_t = 0
//! k_cs = 0
//! k_ccz = 1
//! k_0 = 1
//! base = RM(0,3)          (optional)
//! puncture = 3,10,19      (optional, decimal point indices)
//! rows:
//! 00001111
//! ...
//! ```
//!
//! Rows follow in block order T, CS, CCZ, 0. A file with `base` but no
//! `rows:` section is a recipe: the rows are obtained by puncturing the base
//! code on the listed coordinates, all logical rows going to the T block.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec};
use crate::reedmuller::rm_generator;
use crate::trio::{puncture, GenTrioMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub r: usize,
    pub m: usize,
    pub puncture: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub comments: Vec<String>,
    pub provenance: Option<Provenance>,
    pub code: GenTrioMatrix,
}

/// Maps a decimal coordinate between bit orders: with `lsb_first`, the
/// label's first variable is the least significant bit.
pub fn remap_coordinate(c: usize, m: usize, lsb_first: bool) -> usize {
    if !lsb_first {
        return c;
    }
    (0..m).fold(0, |acc, j| acc | ((c >> j & 1) << (m - 1 - j)))
}

/// Punctures `RM(r, m)` on `coords`; every logical row goes to the T block.
pub fn materialize(p: &Provenance) -> Result<GenTrioMatrix> {
    let space = rm_generator(p.r, p.m)?.generator;
    let k = space.select_columns(&p.puncture).rank();
    puncture(&space, &p.puncture, k, 0, 0)
}

fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse { line, msg: format!("expected an integer, got {s:?}") })
}

fn parse_base(line: usize, s: &str) -> Result<(usize, usize)> {
    let inner = s
        .trim()
        .strip_prefix("RM(")
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| Error::Parse { line, msg: format!("expected RM(r,m), got {s:?}") })?;
    let (a, b) = inner.split_once(',').ok_or_else(|| Error::Parse { line, msg: "expected RM(r,m)".into() })?;
    Ok((parse_usize(line, a)?, parse_usize(line, b)?))
}

impl CodeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut comments = Vec::new();
        let mut n = None;
        let (mut kt, mut kcs, mut kccz, mut k0) = (None, None, None, None);
        let mut base = None;
        let mut punct = None;
        let mut rows: Option<Vec<(usize, BitVec)>> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.trim();
            if let Some(c) = t.strip_prefix('#') {
                comments.push(c.trim().to_string());
                continue;
            }
            if t.is_empty() {
                continue;
            }
            if let Some(rs) = rows.as_mut() {
                let v: BitVec = t.parse().map_err(|_| Error::Parse { line, msg: "row must be 0/1 characters".into() })?;
                rs.push((line, v));
                continue;
            }
            if t == "rows:" {
                rows = Some(Vec::new());
                continue;
            }
            let (key, value) =
                t.split_once('=').ok_or_else(|| Error::Parse { line, msg: format!("expected key = value, got {t:?}") })?;
            match key.trim() {
                "n" => n = Some(parse_usize(line, value)?),
                "k_t" => kt = Some(parse_usize(line, value)?),
                "k_cs" => kcs = Some(parse_usize(line, value)?),
                "k_ccz" => kccz = Some(parse_usize(line, value)?),
                "k_0" => k0 = Some(parse_usize(line, value)?),
                "base" => base = Some(parse_base(line, value)?),
                "puncture" => {
                    let v = value.trim();
                    punct = Some(if v.is_empty() {
                        Vec::new()
                    } else {
                        v.split(',').map(|x| parse_usize(line, x)).collect::<Result<Vec<_>>>()?
                    })
                }
                other => return Err(Error::Parse { line, msg: format!("unknown key {other:?}") }),
            }
        }
        let provenance = match (base, punct) {
            (Some((r, m)), p) => Some(Provenance { r, m, puncture: p.unwrap_or_default() }),
            (None, Some(_)) => return Err(Error::Parse { line: 0, msg: "puncture list needs a base code".into() }),
            (None, None) => None,
        };
        let code = match rows {
            None => {
                let p = provenance
                    .as_ref()
                    .ok_or_else(|| Error::Parse { line: 0, msg: "file has neither rows nor a base code".into() })?;
                materialize(p)?
            }
            Some(rs) => {
                let n = n.ok_or_else(|| Error::Parse { line: 0, msg: "missing n".into() })?;
                let (kt, kcs, kccz, k0) = (kt.unwrap_or(0), kcs.unwrap_or(0), kccz.unwrap_or(0), k0.unwrap_or(0));
                let want = kt + 2 * kcs + 3 * kccz + k0;
                if rs.len() != want {
                    return Err(Error::Parse {
                        line: rs.last().map_or(0, |r| r.0),
                        msg: format!("expected {want} rows, found {}", rs.len()),
                    });
                }
                for (line, r) in &rs {
                    if r.len() != n {
                        return Err(Error::Parse { line: *line, msg: format!("row has length {}, expected {n}", r.len()) });
                    }
                }
                let mut it = rs.into_iter().map(|(_, v)| v);
                let mut take = |k: usize| BitMatrix::from_rows(n, it.by_ref().take(k).collect());
                let t = take(kt)?;
                let cs = take(2 * kcs)?;
                let ccz = take(3 * kccz)?;
                let g0 = take(k0)?;
                GenTrioMatrix::new(n, t, cs, ccz, g0)?
            }
        };
        if let Some(nn) = n {
            if nn != code.n() {
                return Err(Error::Parse { line: 0, msg: format!("header says n = {nn}, code has n = {}", code.n()) });
            }
        }
        Ok(CodeFile { comments, provenance, code })
    }

    pub fn serialize(&self) -> String {
        let g = &self.code;
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "n = {}", g.n());
        let _ = writeln!(s, "k_t = {}", g.k_t());
        let _ = writeln!(s, "k_cs = {}", g.k_cs());
        let _ = writeln!(s, "k_ccz = {}", g.k_ccz());
        let _ = writeln!(s, "k_0 = {}", g.k_0());
        if let Some(p) = &self.provenance {
            let _ = writeln!(s, "base = RM({},{})", p.r, p.m);
            let list: Vec<String> = p.puncture.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(s, "puncture = {}", list.join(","));
        }
        let _ = writeln!(s, "rows:");
        for r in g.full_matrix().rows() {
            let _ = writeln!(s, "{r}");
        }
        s
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.serialize())?;
        Ok(())
    }
}
