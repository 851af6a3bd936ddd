use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use eulercat_core::corpus;
use eulercat_core::euler::{
    chi_ext_l2_of_sd_op, chi_fil, chi_l2_acyclic, chi_leinster, chi_series,
    filtration_from_topological_order, EulerResult, FiltrationError, NFiltration, Undefined,
};
use eulercat_core::fincat::{is_acyclic, FinCat};
use eulercat_core::format::{self, parse_category, write_category, FormatError, Meta};
use eulercat_core::nerve::{level_counts, nondegenerate_chains};
use eulercat_core::simplex::{
    build_eq_simplex, check_relation, enumerate_admissible_relations, SimplexError,
};
use eulercat_core::subdivision::{sd_with, SdError};
use eulercat_core::verify::{self, Family};

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error(transparent)]
    Sd(#[from] SdError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

#[derive(Parser)]
#[command(
    name = "eulercat",
    version,
    about = "Exact Euler characteristics of finite categories"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a category file.
    Validate { file: PathBuf },
    /// Euler characteristics, one `method<TAB>value` line each.
    Chi {
        /// Comma-separated: leinster, series, l2, fil, l2ext, all.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        method: Vec<String>,
        /// Filtration values for `fil`, one per object in file order.
        #[arg(long, value_delimiter = ',')]
        filtration: Option<Vec<u64>>,
        file: PathBuf,
    },
    /// Non-degenerate nerve sizes, one `n<TAB>count` line per level.
    Nerve {
        #[arg(long)]
        max: usize,
        /// Also list the chains of each level.
        #[arg(long)]
        list: bool,
        file: PathBuf,
    },
    /// Barycentric subdivision, written as a category file.
    Sd {
        /// Keep only chains of length at most K; required for non-acyclic input.
        #[arg(long)]
        max_level: Option<usize>,
        /// Label objects `<...>` instead of `⟨...⟩`.
        #[arg(long)]
        ascii: bool,
        #[arg(short, long)]
        out: PathBuf,
        file: PathBuf,
    },
    /// Equivalence-simplex checks on every admissible relation up to `n`.
    Simplex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        check_all: bool,
    },
    /// Run the verification harness on a generated family.
    Verify {
        /// posets-exhaustive, acyclic-random or monoids-small.
        #[arg(long)]
        family: Family,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit JSON instead of TSV.
        #[arg(long)]
        json: bool,
    },
    /// Print a generated category file.
    #[command(subcommand)]
    Gen(Gen),
}

#[derive(Subcommand)]
enum Gen {
    /// The chain poset on `n` elements.
    PosetChain {
        #[arg(long)]
        n: usize,
    },
    PosetRandom {
        #[arg(long)]
        objects: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A random acyclic category on at most `objects` objects.
    AcyclicRandom {
        #[arg(long)]
        objects: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Monoid {
        /// M, Z2 or trivial.
        #[arg(long)]
        preset: String,
    },
    /// Two objects joined by mutually inverse morphisms.
    IsoPair,
    /// A category whose series has a pole at t = −1.
    PoleWitness,
}

struct Outcome {
    stdout: String,
    verified: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            verified: true,
        }
    }
}

fn read_category(path: &Path) -> Result<(FinCat, Meta), CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    let file = parse_category(&text).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })?;
    Ok((file.category, file.meta))
}

const METHODS: [&str; 5] = ["leinster", "series", "l2", "fil", "l2ext"];

fn run_chi(
    file: &Path,
    methods: &[String],
    filtration: Option<&[u64]>,
) -> Result<String, CliError> {
    let mut wanted = Vec::new();
    for m in methods {
        match m.as_str() {
            "all" => wanted.extend(METHODS),
            other => match METHODS.iter().find(|&&k| k == other) {
                Some(&k) => wanted.push(k),
                None => return Err(CliError::Usage(format!("unknown method {other:?}"))),
            },
        }
    }
    if filtration.is_some() && !wanted.contains(&"fil") {
        return Err(CliError::Usage(
            "--filtration only applies to method fil".into(),
        ));
    }
    let (c, _) = read_category(file)?;
    let mut out = String::new();
    let mut seen = Vec::new();
    for m in wanted {
        if seen.contains(&m) {
            continue;
        }
        seen.push(m);
        let value = match m {
            "leinster" => chi_leinster(&c),
            "series" => chi_series(&c),
            "l2" => chi_l2_acyclic(&c),
            "l2ext" => chi_ext_l2_of_sd_op(&c),
            _ => match filtration {
                Some(v) => chi_fil(&c, &NFiltration(v.to_vec()))?,
                None => match filtration_from_topological_order(&c) {
                    Ok(mu) => chi_fil(&c, &mu)?,
                    Err(_) => EulerResult::Undefined(Undefined::NotAcyclic),
                },
            },
        };
        out.push_str(&format!("{m}\t{value}\n"));
    }
    Ok(out)
}

fn run_validate(file: &Path) -> Result<String, CliError> {
    let (c, meta) = read_category(file)?;
    let mut out = format!(
        "ok\tobjects={}\tmorphisms={}\tacyclic={}",
        c.num_objects(),
        c.num_morphisms(),
        is_acyclic(&c)
    );
    if meta.truncated {
        out.push_str("\ttruncated");
    }
    out.push('\n');
    Ok(out)
}

fn run_nerve(file: &Path, max: usize, list: bool) -> Result<String, CliError> {
    let (c, _) = read_category(file)?;
    let mut out = String::new();
    for (n, count) in level_counts(&c, max).iter().enumerate() {
        out.push_str(&format!("{n}\t{count}\n"));
        if list {
            for ch in nondegenerate_chains(&c, n).chains {
                out.push_str(&format!("\t{}\n", ch.label(&c, false)));
            }
        }
    }
    Ok(out)
}

fn run_sd(
    file: &Path,
    max_level: Option<usize>,
    ascii: bool,
    out_path: &Path,
) -> Result<String, CliError> {
    let (c, _) = read_category(file)?;
    if max_level.is_none() && !is_acyclic(&c) {
        return Err(CliError::Usage(
            "Sd of a non-acyclic category is infinite; pass --max-level".into(),
        ));
    }
    let s = sd_with(&c, max_level, ascii)?;
    let meta = Meta {
        truncated: s.truncated.is_some(),
        max_level: s.truncated,
    };
    let write = |path: PathBuf, text: String| {
        fs::write(&path, text).map_err(|source| CliError::Io { path, source })
    };
    write(
        out_path.to_owned(),
        write_category(&s.category, Some(&meta)),
    )?;
    let mut levels = String::from("object\tlevel\n");
    for x in s.category.object_ids() {
        levels.push_str(&format!(
            "{}\t{}\n",
            s.category.object_label(x),
            s.level[x.0]
        ));
    }
    let mut sidecar = out_path.as_os_str().to_owned();
    sidecar.push(".levels.tsv");
    write(PathBuf::from(sidecar), levels)?;
    Ok(String::new())
}

fn run_simplex(n: usize, check_all: bool) -> Result<Outcome, CliError> {
    let mut out = String::new();
    let mut verified = true;
    for k in 0..=n {
        for rel in enumerate_admissible_relations(k)? {
            if check_all {
                let exact = check_relation(&rel).is_exact();
                verified &= exact;
                out.push_str(&format!(
                    "{}\t{}\n",
                    rel.id(),
                    if exact { "exact" } else { "FAIL" }
                ));
            } else {
                let sizes = build_eq_simplex(&rel).sizes();
                let sizes: Vec<String> = sizes.iter().map(usize::to_string).collect();
                out.push_str(&format!("{}\t{}\t{}\n", rel.id(), rel, sizes.join(",")));
            }
        }
    }
    Ok(Outcome {
        stdout: out,
        verified,
    })
}

fn run_verify(family: Family, size: usize, seed: u64, json: bool) -> Result<Outcome, CliError> {
    let bound = verify::size_bound(family);
    if size > bound {
        return Err(CliError::Usage(format!(
            "size {size} exceeds the bound {bound} for this family"
        )));
    }
    let report = verify::verify_family(family, size, seed);
    for id in &report.sd_skipped {
        eprintln!(
            "{id}: subdivision above {} objects, Sd checks skipped",
            verify::SD_OBJECT_CAP
        );
    }
    let stdout = if json {
        report.to_json()
    } else {
        report.to_tsv()
    };
    Ok(Outcome {
        stdout,
        verified: report.all_pass(),
    })
}

fn run_gen(g: &Gen) -> Result<String, CliError> {
    Ok(match g {
        Gen::PosetChain { n } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let (el, covers) = corpus::chain_poset(n - 1);
            format::write_poset(&el, &covers)
        }
        Gen::PosetRandom { objects, seed } => {
            let (el, covers) = corpus::random_poset(*objects, *seed);
            format::write_poset(&el, &covers)
        }
        Gen::AcyclicRandom { objects, seed } => {
            if *objects == 0 {
                return Err(CliError::Usage("--objects must be at least 1".into()));
            }
            let c = corpus::acyclic_random(1, *objects, *seed)
                .remove(0)
                .category;
            write_category(&c, None)
        }
        Gen::Monoid { preset } => {
            let (el, unit, table) = match preset.as_str() {
                "M" => corpus::monoid_m_table(),
                "Z2" => corpus::z2_table(),
                "trivial" => (vec!["e".to_string()], "e".to_string(), Default::default()),
                other => return Err(CliError::Usage(format!("unknown preset {other:?}"))),
            };
            format::write_monoid(&el, &unit, &table)
        }
        Gen::IsoPair => write_category(&corpus::iso_pair(), None),
        Gen::PoleWitness => write_category(&corpus::pole_witness(), None),
    })
}

fn dispatch(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Validate { file } => run_validate(&file).map(Outcome::ok),
        Command::Chi {
            method,
            filtration,
            file,
        } => run_chi(&file, &method, filtration.as_deref()).map(Outcome::ok),
        Command::Nerve { max, list, file } => run_nerve(&file, max, list).map(Outcome::ok),
        Command::Sd {
            max_level,
            ascii,
            out,
            file,
        } => run_sd(&file, max_level, ascii, &out).map(Outcome::ok),
        Command::Simplex { n, check_all } => run_simplex(n, check_all),
        Command::Verify {
            family,
            size,
            seed,
            json,
        } => run_verify(family, size, seed, json),
        Command::Gen(g) => run_gen(&g).map(Outcome::ok),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("EULERCAT_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "EULERCAT_THREADS must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| dispatch(cli.command));
    match result {
        Ok(outcome) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(outcome.stdout.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("eulercat: {e}");
            ExitCode::from(2)
        }
    }
}
