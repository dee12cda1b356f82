use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Result, SailError};

/// One nonzero of `F_mat`, block `block`, position `(i, j)` (1-based,
/// upper triangle).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpaEntry {
    pub mat: usize,
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// An SDP in SDPA sparse format. Negative block sizes denote diagonal
/// (LP) blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpaProblem {
    pub comments: Vec<String>,
    pub m: usize,
    pub block_sizes: Vec<i64>,
    pub c: Vec<f64>,
    pub entries: Vec<SdpaEntry>,
}

impl SdpaProblem {
    pub fn to_sdpa_string(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "\"{c}");
        }
        let _ = writeln!(s, "{}", self.m);
        let _ = writeln!(s, "{}", self.block_sizes.len());
        let sizes: Vec<String> = self.block_sizes.iter().map(i64::to_string).collect();
        let _ = writeln!(s, "{}", sizes.join(" "));
        let c: Vec<String> = self.c.iter().map(f64::to_string).collect();
        let _ = writeln!(s, "{}", c.join(" "));
        for e in &self.entries {
            let _ = writeln!(s, "{} {} {} {} {}", e.mat, e.block, e.i, e.j, e.value);
        }
        s
    }
}

/// Writes `problem` to `path`. Refuses empty programs.
pub fn export_sdpa(problem: &SdpaProblem, path: &Path) -> Result<()> {
    if problem.m == 0 || problem.block_sizes.is_empty() || problem.entries.is_empty() {
        return Err(SailError::Assembly("refusing to export an empty program".into()));
    }
    std::fs::write(path, problem.to_sdpa_string())?;
    Ok(())
}

fn header_tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || matches!(c, ',' | '(' | ')' | '{' | '}'))
        .filter(|t| !t.is_empty())
}

pub fn parse_sdpa(text: &str) -> Result<SdpaProblem> {
    let err = |line: usize, reason: &str| SailError::SdpaParse {
        line,
        reason: reason.to_string(),
    };
    let mut comments = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((_, l)) = lines.peek() {
        if let Some(rest) = l.strip_prefix('"').or_else(|| l.strip_prefix('*')) {
            comments.push(rest.to_string());
            lines.next();
        } else {
            break;
        }
    }
    let mut next = |what: &str| -> Result<(usize, &str)> {
        lines
            .next()
            .map(|(k, l)| (k + 1, l))
            .ok_or_else(|| err(0, &format!("missing {what}")))
    };
    let (ln, l) = next("m")?;
    let m: usize = header_tokens(l)
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err(ln, "bad constraint count"))?;
    let (ln, l) = next("block count")?;
    let nblocks: usize = header_tokens(l)
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err(ln, "bad block count"))?;
    let (ln, l) = next("block structure")?;
    let block_sizes: Vec<i64> = header_tokens(l)
        .take(nblocks)
        .map(|t| t.parse().map_err(|_| err(ln, "bad block size")))
        .collect::<Result<_>>()?;
    if block_sizes.len() != nblocks || block_sizes.contains(&0) {
        return Err(err(ln, "block structure does not match block count"));
    }
    let (ln, l) = next("objective vector")?;
    let c: Vec<f64> = header_tokens(l)
        .take(m)
        .map(|t| t.parse().map_err(|_| err(ln, "bad objective entry")))
        .collect::<Result<_>>()?;
    if c.len() != m {
        return Err(err(ln, "objective vector length differs from m"));
    }

    let mut entries = Vec::new();
    for (k, l) in lines {
        let ln = k + 1;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 5 {
            return Err(err(ln, "expected `mat block i j value`"));
        }
        let idx = |t: &str| t.parse::<usize>().map_err(|_| err(ln, "bad index"));
        let e = SdpaEntry {
            mat: idx(toks[0])?,
            block: idx(toks[1])?,
            i: idx(toks[2])?,
            j: idx(toks[3])?,
            value: toks[4].parse().map_err(|_| err(ln, "bad value"))?,
        };
        if e.mat > m || e.block == 0 || e.block > nblocks {
            return Err(err(ln, "matrix or block index out of range"));
        }
        let size = block_sizes[e.block - 1].unsigned_abs() as usize;
        if e.i == 0 || e.j == 0 || e.i > size || e.j > size || e.i > e.j {
            return Err(err(ln, "entry outside the block's upper triangle"));
        }
        if block_sizes[e.block - 1] < 0 && e.i != e.j {
            return Err(err(ln, "off-diagonal entry in a diagonal block"));
        }
        entries.push(e);
    }
    Ok(SdpaProblem {
        comments,
        m,
        block_sizes,
        c,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roa::assemble_sos;
    use crate::poly::{Monomial, PolyVectorField, Polynomial};
    use nalgebra::DMatrix;

    fn toy() -> SdpaProblem {
        let f = PolyVectorField::new(vec![Polynomial::from_terms(
            1,
            [(Monomial(vec![1]), -1.0), (Monomial(vec![3]), 1.0)],
        )]);
        assemble_sos(&DMatrix::identity(1, 1), &f, 2).unwrap().to_sdpa().unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let p = toy();
        let back = parse_sdpa(&p.to_sdpa_string()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn toy_header() {
        let p = toy();
        // x^2 .. x^6
        assert_eq!(p.m, 5);
        assert_eq!(p.block_sizes, vec![3, -8]);
        let text = p.to_sdpa_string();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('"')).collect();
        assert_eq!(body[0], "5");
        assert_eq!(body[1], "2");
        assert_eq!(body[2], "3 -8");
    }

    #[test]
    fn accepts_punctuated_headers() {
        let text = "* comment\n1\n2\n{2, -1}\n(1.5)\n0 2 1 1 1\n1 1 1 2 0.5\n";
        let p = parse_sdpa(text).unwrap();
        assert_eq!(p.block_sizes, vec![2, -1]);
        assert_eq!(p.c, vec![1.5]);
        assert_eq!(p.entries.len(), 2);
    }

    #[test]
    fn rejects_lower_triangle_entry() {
        let text = "1\n1\n2\n1\n1 1 2 1 1.0\n";
        assert!(matches!(parse_sdpa(text), Err(SailError::SdpaParse { line: 5, .. })));
    }

    #[test]
    fn empty_program_is_not_written() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.dat-s");
        let empty = SdpaProblem {
            comments: vec![],
            m: 0,
            block_sizes: vec![],
            c: vec![],
            entries: vec![],
        };
        assert!(export_sdpa(&empty, &path).is_err());
        assert!(!path.exists());
    }
}
