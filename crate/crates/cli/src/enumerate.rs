//! Batch enumeration: every canonical divisor in an entry box, classified
//! independently and streamed as JSON lines in canonical order.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use csdiv::divisor::Divisor;
use csdiv::equiv::SearchBudget;
use csdiv::Z;
use rayon::prelude::*;

use crate::report;
use crate::Failure;

pub struct Job {
    pub max_length: usize,
    pub range: (i64, i64),
    pub max_bfs_nodes: Option<usize>,
    pub min_entry: Option<i64>,
    pub traces: bool,
    pub out: Option<PathBuf>,
}

/// Parses an inclusive entry range written `LO..HI` or `LO..=HI`.
pub fn parse_entry_range(text: &str) -> Result<(i64, i64), String> {
    let Some((lo, hi)) = text.split_once("..") else {
        return Err(format!("entry range '{text}' must look like LO..HI"));
    };
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let parse = |part: &str| {
        part.trim()
            .parse::<i64>()
            .map_err(|_| format!("entry range bound '{part}' is not an integer"))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(format!("empty entry range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

pub fn run(job: &Job) -> Result<(), Failure> {
    if job.max_length < 2 {
        return Err(Failure { code: 3, message: "max length must be at least 2".into() });
    }
    let divisors = canonical_box(job.max_length, job.range);
    let lines = divisors
        .par_iter()
        .map(|d| {
            let mut budget = SearchBudget::for_pair(d, d);
            if let Some(nodes) = job.max_bfs_nodes {
                budget.max_nodes = nodes;
            }
            if let Some(entry) = job.min_entry {
                budget.min_entry = Z::from(entry);
            }
            let set = report::classify(d, &budget, job.traces)?;
            Ok(set.value.to_string())
        })
        .collect::<Result<Vec<String>, csdiv::Error>>()
        .map_err(Failure::from)?;
    let io_failure = |e: io::Error| Failure { code: 3, message: e.to_string() };
    match &job.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(io_failure)?);
            write_lines(&mut w, &lines).map_err(io_failure)?;
            w.flush().map_err(io_failure)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_lines(&mut w, &lines).map_err(io_failure)
        }
    }
}

/// Every divisor with length 2 to `max_length` and entries inside the range,
/// one representative per rotation/reflection class, in canonical order.
fn canonical_box(max_length: usize, (lo, hi): (i64, i64)) -> Vec<Divisor> {
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    for r in 2..=max_length {
        let mut tuple = vec![lo; r];
        loop {
            let d = Divisor::new(tuple.clone()).expect("length is at least two");
            seen.insert(d.canonical_entries());
            let mut pos = r;
            while pos > 0 {
                if tuple[pos - 1] < hi {
                    tuple[pos - 1] += 1;
                    break;
                }
                tuple[pos - 1] = lo;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    seen.into_iter()
        .map(|entries| {
            Divisor::new(entries.into_iter().map(Z::from).collect()).expect("canonical entries")
        })
        .collect()
}

fn write_lines<W: Write>(w: &mut W, lines: &[String]) -> io::Result<()> {
    for line in lines {
        writeln!(w, "{line}")?;
    }
    Ok(())
}
