//! Golden copies of the PSL(2,169) breakdown and the per-q counts, and
//! row-level comparison against computed rows.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::PolytopeRecord;

pub const TABLE1_CSV: &str = include_str!("../data/table1.csv");
pub const TABLE2_CSV: &str = include_str!("../data/table2.csv");

/// One row of the PSL(2,169) breakdown: polytopes of one type with given
/// parabolic subgroups, listed up to duality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Table1Row {
    pub schlafli: String,
    pub count: usize,
    pub parabolic1: String,
    pub parabolic2: String,
}

impl Table1Row {
    fn key(&self) -> (String, String, String) {
        (self.schlafli.clone(), self.parabolic1.clone(), self.parabolic2.clone())
    }

    fn dual_key(&self) -> (String, String, String) {
        (reverse_type(&self.schlafli), self.parabolic2.clone(), self.parabolic1.clone())
    }
}

impl fmt::Display for Table1Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.schlafli, self.count, self.parabolic1, self.parabolic2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Row {
    pub q: u128,
    /// `None` where the count is not known.
    pub count: Option<usize>,
    /// Blank for even q.
    pub q_mod_4: Option<u128>,
    pub q_mod_20: Option<u128>,
    /// Concatenated case labels, such as `(b)(d)(e)`.
    pub cases: String,
}

impl fmt::Display for Table2Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |x: Option<u128>| x.map(|v| v.to_string()).unwrap_or_default();
        let count = self.count.map(|c| c.to_string()).unwrap_or_else(|| "?".into());
        write!(f, "{},{},{},{},{}", self.q, count, opt(self.q_mod_4), opt(self.q_mod_20), self.cases)
    }
}

pub const TABLE1_HEADER: &str = "type,count,parabolic1,parabolic2";
pub const TABLE2_HEADER: &str = "q,count,q_mod_4,q_mod_20,cases";

fn reverse_type(s: &str) -> String {
    let inner = s.trim_start_matches('[').trim_end_matches(']');
    let mut parts: Vec<&str> = inner.split(',').collect();
    parts.reverse();
    format!("[{}]", parts.join(","))
}

fn data_lines(csv: &str) -> impl Iterator<Item = (usize, &str)> {
    csv.lines().enumerate().skip(1).filter(|(_, l)| !l.trim().is_empty())
}

/// Splits on commas outside brackets and parentheses.
fn split_fields(line: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut depth = 0i32;
    for ch in line.chars() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            out.push(String::new());
        } else {
            out.last_mut().unwrap().push(ch);
        }
    }
    out.iter().map(|s| s.trim().to_string()).collect()
}

pub fn parse_table1(csv: &str) -> Result<Vec<Table1Row>> {
    data_lines(csv)
        .map(|(n, line)| {
            let bad = || Error::Parse(format!("table 1 line {}: `{line}`", n + 1));
            let f = split_fields(line);
            if f.len() != 4 {
                return Err(bad());
            }
            Ok(Table1Row {
                schlafli: f[0].clone(),
                count: f[1].parse().map_err(|_| bad())?,
                parabolic1: f[2].clone(),
                parabolic2: f[3].clone(),
            })
        })
        .collect()
}

pub fn parse_table2(csv: &str) -> Result<Vec<Table2Row>> {
    data_lines(csv)
        .map(|(n, line)| {
            let bad = || Error::Parse(format!("table 2 line {}: `{line}`", n + 1));
            let f = split_fields(line);
            if f.len() != 5 {
                return Err(bad());
            }
            let opt = |s: &str| -> Result<Option<u128>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| bad())
                }
            };
            Ok(Table2Row {
                q: f[0].parse().map_err(|_| bad())?,
                count: if f[1] == "?" { None } else { Some(f[1].parse().map_err(|_| bad())?) },
                q_mod_4: opt(&f[2])?,
                q_mod_20: opt(&f[3])?,
                cases: f[4].clone(),
            })
        })
        .collect()
}

pub fn golden_table1() -> Vec<Table1Row> {
    parse_table1(TABLE1_CSV).expect("embedded table 1 parses")
}

pub fn golden_table2() -> Vec<Table2Row> {
    parse_table2(TABLE2_CSV).expect("embedded table 2 parses")
}

/// Groups records by (type, parabolic1, parabolic2) and folds each row into
/// its dual row. Of a dual pair, the orientation present in `prefer` is
/// kept, otherwise the lexicographically smaller. Folding needs both halves
/// of a pair to have equal counts; unequal pairs are kept apart.
pub fn table1_rows(records: &[PolytopeRecord], prefer: &[Table1Row]) -> Vec<Table1Row> {
    let mut counts: BTreeMap<(String, String, String), usize> = BTreeMap::new();
    for r in records {
        *counts
            .entry((r.schlafli.to_string(), r.parabolic1.to_string(), r.parabolic2.to_string()))
            .or_default() += 1;
    }
    let preferred: Vec<_> = prefer.iter().map(Table1Row::key).collect();
    let mut out = Vec::new();
    for ((schlafli, parabolic1, parabolic2), &count) in &counts {
        let row = Table1Row { schlafli: schlafli.clone(), count, parabolic1: parabolic1.clone(), parabolic2: parabolic2.clone() };
        let (key, dual) = (row.key(), row.dual_key());
        if key != dual && counts.get(&dual) == Some(&count) {
            let keep_dual = if preferred.contains(&dual) {
                true
            } else if preferred.contains(&key) {
                false
            } else {
                dual < key
            };
            if keep_dual {
                continue;
            }
        }
        out.push(row);
    }
    out.sort();
    out
}

/// Row-level differences: `-` for golden rows not reproduced, `+` for
/// computed rows not in the golden copy.
pub fn diff_table1(golden: &[Table1Row], computed: &[Table1Row]) -> Vec<String> {
    let mut g = golden.to_vec();
    let mut c = computed.to_vec();
    g.sort();
    c.sort();
    let mut out: Vec<String> = g.iter().filter(|r| !c.contains(r)).map(|r| format!("-{r}")).collect();
    out.extend(c.iter().filter(|r| !g.contains(r)).map(|r| format!("+{r}")));
    out
}

/// Compares computed rows with golden rows of the same q. Golden rows with
/// unknown counts and q absent from `computed` are skipped.
pub fn diff_table2(golden: &[Table2Row], computed: &[Table2Row]) -> Vec<String> {
    let mut out = Vec::new();
    for c in computed {
        match golden.iter().find(|g| g.q == c.q) {
            Some(g) if g.count.is_none() => {}
            Some(g) if g != c => {
                out.push(format!("-{g}"));
                out.push(format!("+{c}"));
            }
            Some(_) => {}
            None => out.push(format!("+{c}")),
        }
    }
    out
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut s = format!("{TABLE1_HEADER}\n");
    for r in rows {
        s.push_str(&format!("{r}\n"));
    }
    s
}

pub fn table2_csv(rows: &[Table2Row]) -> String {
    let mut s = format!("{TABLE2_HEADER}\n");
    for r in rows {
        s.push_str(&format!("{r}\n"));
    }
    s
}
