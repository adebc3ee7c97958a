use std::fmt::Write as _;

use super::TannerGraph;
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Alist {
        line,
        msg: msg.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line as (1-based line number, parsed integers).
    fn next_ints(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        for (idx, raw) in self.inner.by_ref() {
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            let nums = trimmed
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| err(idx + 1, format!("bad integer {tok:?} in {what}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((idx + 1, nums));
        }
        Err(err(0, format!("unexpected end of input while reading {what}")))
    }
}

fn expect_len(line: usize, nums: &[usize], len: usize, what: &str) -> Result<()> {
    if nums.len() != len {
        return Err(err(
            line,
            format!("{what}: expected {len} entries, found {}", nums.len()),
        ));
    }
    Ok(())
}

/// Reads one adjacency block (variables or checks) and returns 0-indexed
/// neighbor lists. Entries beyond the declared degree must be zero padding.
fn read_block(
    lines: &mut Lines<'_>,
    degrees: &[usize],
    max_degree: usize,
    bound: usize,
    what: &str,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::with_capacity(degrees.len());
    for (k, &deg) in degrees.iter().enumerate() {
        let (line, nums) = lines.next_ints(what)?;
        if nums.len() < deg || nums.len() > max_degree.max(deg) {
            return Err(err(
                line,
                format!(
                    "{what} {}: declared degree {deg}, found {} entries",
                    k + 1,
                    nums.len()
                ),
            ));
        }
        let (head, pad) = nums.split_at(deg);
        if pad.iter().any(|&p| p != 0) {
            return Err(err(line, format!("{what} {}: nonzero entry in padding", k + 1)));
        }
        let mut list = Vec::with_capacity(deg);
        for &v in head {
            if v == 0 || v > bound {
                return Err(err(
                    line,
                    format!("{what} {}: index {v} out of range 1..={bound}", k + 1),
                ));
            }
            list.push(v - 1);
        }
        out.push(list);
    }
    Ok(out)
}

/// Parses the standard alist layout into a [`TannerGraph`].
///
/// Both the per-variable and per-check adjacency blocks are read and must
/// describe the same bipartite graph.
pub fn load_alist(text: &str) -> Result<TannerGraph> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (l1, header) = lines.next_ints("header")?;
    expect_len(l1, &header, 2, "header")?;
    let (n, m) = (header[0], header[1]);
    if n == 0 || m == 0 {
        return Err(err(l1, "n and m must be positive"));
    }
    let (l2, maxes) = lines.next_ints("max degrees")?;
    expect_len(l2, &maxes, 2, "max degrees")?;
    let (max_var, max_check) = (maxes[0], maxes[1]);

    let (l3, var_deg) = lines.next_ints("variable degrees")?;
    expect_len(l3, &var_deg, n, "variable degrees")?;
    let (l4, check_deg) = lines.next_ints("check degrees")?;
    expect_len(l4, &check_deg, m, "check degrees")?;
    if var_deg.iter().any(|&d| d > max_var) {
        return Err(err(l3, "variable degree exceeds declared maximum"));
    }
    if check_deg.iter().any(|&d| d > max_check) {
        return Err(err(l4, "check degree exceeds declared maximum"));
    }

    let var_lists = read_block(&mut lines, &var_deg, max_var, m, "variable")?;
    let check_lists = read_block(&mut lines, &check_deg, max_check, n, "check")?;

    let graph = TannerGraph::from_checks(n, check_lists)?;
    for (i, mut list) in var_lists.into_iter().enumerate() {
        list.sort_unstable();
        if list != graph.var_checks()[i] {
            return Err(err(
                0,
                format!("variable {} adjacency disagrees with the check block", i + 1),
            ));
        }
    }
    Ok(graph)
}

/// Serializes a graph in alist layout with 1-indexed, zero-padded rows.
pub fn write_alist(graph: &TannerGraph) -> String {
    let max_var = graph.var_checks().iter().map(Vec::len).max().unwrap_or(0);
    let max_check = graph.check_members().iter().map(Vec::len).max().unwrap_or(0);
    let mut s = String::new();
    let join = |v: &mut dyn Iterator<Item = usize>| {
        v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(s, "{} {}", graph.n(), graph.m());
    let _ = writeln!(s, "{max_var} {max_check}");
    let _ = writeln!(s, "{}", join(&mut graph.var_checks().iter().map(Vec::len)));
    let _ = writeln!(s, "{}", join(&mut graph.check_members().iter().map(Vec::len)));
    for list in graph.var_checks() {
        let mut row: Vec<usize> = list.iter().map(|c| c + 1).collect();
        row.resize(max_var, 0);
        let _ = writeln!(s, "{}", join(&mut row.into_iter()));
    }
    for list in graph.check_members() {
        let mut row: Vec<usize> = list.iter().map(|i| i + 1).collect();
        row.resize(max_check, 0);
        let _ = writeln!(s, "{}", join(&mut row.into_iter()));
    }
    s
}
