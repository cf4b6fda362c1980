//! `chiral`: command-line front end for chiral-core.
//!
//! Exit status is 0 on success, 1 on usage or input errors, and 2 when a
//! verification or golden-table comparison mismatches.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use chiral_core::classifier::{self, Existence};
use chiral_core::conjecture;
use chiral_core::constructions::{self, Family};
use chiral_core::enumerator::{self, COUNTING_CONVENTION};
use chiral_core::polytope::{self, RecordJson};
use chiral_core::tables;
use chiral_core::{FieldCtx, GroupKind, Pgl};

#[derive(Parser, Debug)]
#[command(name = "chiral", version, about = "Chiral 4-polytopes for PSL(2,q) and PGL(2,q)")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide existence and predicted counts from the arithmetic of q.
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "psl")]
        group: GroupKind,
    },
    /// Build an explicit family of polytopes.
    Construct {
        #[command(flatten)]
        field: FieldArgs,
        /// pgl, psl, 534, 535 or 353.
        #[arg(long)]
        family: Family,
        /// Keep only affine records whose σ2 has order K.
        #[arg(long)]
        k: Option<u128>,
    },
    /// Exhaustive search.
    Enumerate {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "psl")]
        group: GroupKind,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(4..=5))]
        rank: u8,
    },
    /// Re-verify records from a JSON or JSONL file.
    Verify {
        #[arg(long)]
        triple: PathBuf,
    },
    /// Search for primitive pairs with Ω a square and verify the candidate.
    Conjecture {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e1: usize,
        #[arg(long)]
        e2: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Samples for the intersection test; 0 skips candidate verification.
        #[arg(long, default_value_t = 100_000)]
        verify_budget: u64,
    },
    /// Recompute a table and diff it against the embedded golden copy.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        reproduce: u8,
        #[arg(long, default_value_t = 83)]
        max_q: u128,
    },
}

#[derive(clap::Args, Debug)]
struct FieldArgs {
    /// `p^d` or `q`.
    #[arg(long)]
    field: String,
    /// Defining polynomial coefficients c0,c1,...,1.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
}

impl FieldArgs {
    fn build(&self) -> Result<Arc<FieldCtx>, Failure> {
        let f = FieldCtx::parse(&self.field).map_err(|e| Failure::usage(format!("--field: {e}")))?;
        match &self.modulus {
            None => Ok(f),
            Some(m) => FieldCtx::new(f.p(), f.degree(), Some(m)).map_err(|e| Failure::usage(format!("--modulus: {e}"))),
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: String) -> Failure {
        Failure { code: 1, message }
    }

    fn mismatch(message: String) -> Failure {
        Failure { code: 2, message }
    }
}

impl From<chiral_core::Error> for Failure {
    fn from(e: chiral_core::Error) -> Failure {
        Failure::usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Classify { field, group } => classify(cli, field, *group),
        Command::Construct { field, family, k } => construct(cli, field, *family, *k),
        Command::Enumerate { field, group, rank } => enumerate(cli, field, *group, *rank),
        Command::Verify { triple } => verify(cli, triple),
        Command::Conjecture { p, e1, e2, budget, seed, verify_budget } => {
            conjecture(cli, *p, *e1, *e2, *budget, *seed, *verify_budget)
        }
        Command::Tables { reproduce, max_q } => tables(cli, *reproduce, *max_q),
    }
}

fn classify(cli: &Cli, field: &FieldArgs, group: GroupKind) -> Result<(), Failure> {
    let f = field.build()?;
    let r = classifier::classify(f.q(), group)?;
    let group_name = format!("{}(2,{})", group.name(), f.q());
    let out = match cli.format {
        Format::Json => serde_json::to_string_pretty(&r).expect("report serializes") + "\n",
        _ => {
            let verdict = match r.exists {
                Existence::Yes => "exists".to_string(),
                Existence::No => "none".to_string(),
                Existence::Unresolved => "unresolved (Conjecture case 3)".to_string(),
            };
            let cases: String = r.cases.iter().map(|c| c.label()).collect();
            let mut s = format!("{group_name}: {verdict}");
            if !cases.is_empty() && r.exists != Existence::Unresolved {
                s.push_str(&format!(", cases {cases}"));
            }
            s.push('\n');
            for (t, n) in &r.family_counts {
                s.push_str(&format!("  {t}: {n}\n"));
            }
            match r.predicted_total() {
                Some(n) => s.push_str(&format!("  total: {n}\n")),
                None if r.exists != Existence::Unresolved => {
                    s.push_str("  total: unknown (counts above cover the affine families only)\n")
                }
                None => {}
            }
            s
        }
    };
    emit(cli, &out)
}

fn jsonl(pg: &Pgl, records: &[polytope::PolytopeRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(&r.to_json(pg)).expect("record serializes") + "\n")
        .collect()
}

fn construct(cli: &Cli, field: &FieldArgs, family: Family, k: Option<u128>) -> Result<(), Failure> {
    let pg = Pgl::new(field.build()?);
    let mut records = constructions::build_family(&pg, family)?;
    if let Some(k) = k {
        records.retain(|r| r.schlafli.p2 == k);
    }
    let out = match cli.format {
        Format::Text => records
            .iter()
            .map(|r| format!("{} {} {} | {} ; {} ; {}\n", r.schlafli, r.parabolic1, r.parabolic2,
                pg.format(&r.triple.s1), pg.format(&r.triple.s2), pg.format(&r.triple.s3)))
            .collect(),
        _ => jsonl(&pg, &records),
    };
    eprintln!("{} record(s), family {family}, field GF({})", records.len(), pg.field().describe());
    emit(cli, &out)
}

fn enumerate(cli: &Cli, field: &FieldArgs, group: GroupKind, rank: u8) -> Result<(), Failure> {
    let pg = Pgl::new(field.build()?);
    if rank == 5 {
        let (quads, stats) = enumerator::enumerate_rank5(&pg, group)?;
        let out = json!({
            "field": pg.field().describe(),
            "group": group.name(),
            "rank": 5,
            "count": quads.len(),
            "relation_solutions": stats.relation_solutions,
            "generating": stats.generating,
            "intersection": stats.intersection,
            "chiral": stats.chiral,
        });
        return emit(cli, &(serde_json::to_string_pretty(&out).expect("serializes") + "\n"));
    }
    let e = enumerator::enumerate_rank4(&pg, group)?;
    let records = e.under(&pg, COUNTING_CONVENTION);
    eprintln!(
        "{} record(s), convention {}, field GF({}), group {}",
        records.len(),
        COUNTING_CONVENTION.name(),
        pg.field().describe(),
        group.name()
    );
    let out = match cli.format {
        Format::Text => records
            .iter()
            .map(|r| format!("{} {} {}\n", r.schlafli, r.parabolic1, r.parabolic2))
            .collect(),
        _ => jsonl(&pg, &records),
    };
    emit(cli, &out)
}

fn verify(cli: &Cli, path: &PathBuf) -> Result<(), Failure> {
    let text = fs::read_to_string(path)?;
    let items: Vec<RecordJson> = match serde_json::from_str::<Vec<RecordJson>>(&text) {
        Ok(v) => v,
        Err(_) => text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(|e| Failure::usage(format!("--triple: {e}"))))
            .collect::<Result<_, _>>()?,
    };
    let mut out = String::new();
    let mut mismatches = 0;
    for item in &items {
        let (pg, kind, t) = item.decode()?;
        let v = polytope::verify(&pg, &t, kind);
        let group = format!("{}(2,{})", kind.name(), pg.q());
        let schlafli = v.schlafli.map(|s| s.to_string()).unwrap_or_else(|| "?".into());
        if v.schlafli.map(|s| s.as_array()) != Some(item.schlafli) {
            mismatches += 1;
        }
        out.push_str(&match cli.format {
            Format::Json => serde_json::to_string(&json!({
                "verdict": v.verdict(),
                "schlafli": schlafli,
                "group": group,
                "relations": v.relations,
                "intersection": v.intersection,
                "generation": v.generation,
                "chiral": v.chiral,
            }))
            .expect("serializes")
                + "\n",
            _ => format!("{}, type {schlafli}, group {group}\n", v.verdict()),
        });
    }
    emit(cli, &out)?;
    if mismatches > 0 {
        return Err(Failure::mismatch(format!("{mismatches} record(s) disagree with their stored type")));
    }
    Ok(())
}

fn conjecture(cli: &Cli, p: u64, e1: usize, e2: usize, budget: u64, seed: u64, verify_budget: u64) -> Result<(), Failure> {
    let r = conjecture::search_witness(p, e1, e2, budget, seed)?;
    let mut report = json!({
        "p": p,
        "e1": e1,
        "e2": e2,
        "seed": seed,
        "samples": r.primitive_samples,
        "fraction": r.fraction(),
        "unconditioned_samples": r.samples,
        "unconditioned_fraction": r.unconditioned_fraction(),
        "witness": r.witness.as_ref().map(|(i, w)| json!({"sample": i, "value": w.to_json()})),
    });
    if let (Some((_, w)), true) = (&r.witness, verify_budget > 0) {
        if chiral_core::arith::gcd(e1 as u128, e2 as u128) == 1 {
            let (pg, t) = conjecture::build_candidate(w)?;
            let v = conjecture::verify_candidate(&pg, &t, w, verify_budget, seed);
            report["candidate"] = json!([pg.format(&t.s1), pg.format(&t.s2), pg.format(&t.s3)]);
            report["verification"] = serde_json::to_value(&v).expect("serializes");
        }
    }
    let out = serde_json::to_string_pretty(&report).expect("serializes") + "\n";
    emit(cli, &out)
}

fn tables(cli: &Cli, which: u8, max_q: u128) -> Result<(), Failure> {
    let (csv, diff) = if which == 1 {
        let pg = Pgl::new(FieldCtx::of_order(169)?);
        let e = enumerator::enumerate_rank4(&pg, GroupKind::Psl)?;
        let golden = tables::golden_table1();
        let rows = tables::table1_rows(&e.under(&pg, COUNTING_CONVENTION), &golden);
        (tables::table1_csv(&rows), tables::diff_table1(&golden, &rows))
    } else {
        let golden = tables::golden_table2();
        let mut rows = Vec::new();
        for g in golden.iter().filter(|g| g.q <= max_q) {
            let row = if g.count.is_some() {
                enumerator::table2_row(g.q)?
            } else {
                // Unknown counts: residues and cases only.
                let r = classifier::classify(g.q, GroupKind::Psl)?;
                let (q_mod_4, q_mod_20) = classifier::table_residue_columns(g.q);
                tables::Table2Row {
                    q: g.q,
                    count: None,
                    q_mod_4,
                    q_mod_20,
                    cases: r.cases.iter().map(|c| c.label()).collect(),
                }
            };
            eprintln!("{row}");
            rows.push(row);
        }
        (tables::table2_csv(&rows), tables::diff_table2(&golden, &rows))
    };
    emit(cli, &csv)?;
    if diff.is_empty() {
        eprintln!("matches golden table {which}");
        Ok(())
    } else {
        for line in &diff {
            eprintln!("{line}");
        }
        Err(Failure::mismatch(format!("{} diff line(s) against golden table {which}", diff.len())))
    }
}
