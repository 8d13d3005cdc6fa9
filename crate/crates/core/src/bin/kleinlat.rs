use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kleinlat::bincodes::{construction_a_code, construction_b_code, BinaryCode};
use kleinlat::checks::{self, Params, Report, Status, CHECK_IDS};
use kleinlat::lattices::{
    construction_a_lattice, construction_b_lattice, count_by_norm, discriminant_group, theta_series, Lattice,
};
use kleinlat::qseries::{self, QSeries};
use kleinlat::{text, voamod, Error};

const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "kleinlat", version, about = "Codes, lattices and lattice VOA characters with exact certificates")]
struct Cli {
    /// Series comparisons run through q^N.
    #[arg(long, global = true, default_value_t = 10)]
    precision: i64,
    /// Worker threads for `verify`.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Record the decision path in verdict certificates.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Theta,
    Vl,
    VlPlus,
    VlMinus,
    TwistedPlus,
    TwistedMinus,
}

#[derive(Subcommand)]
enum Cmd {
    /// Summarise a Kleinian or binary code file.
    Codes { file: PathBuf },
    /// Summarise a lattice file, or the construction A/B lattice of a binary code file.
    Lattices {
        file: PathBuf,
        #[arg(long, value_enum)]
        construction: Option<Construction>,
    },
    /// Print a theta series or character of a lattice.
    Qseries {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Theta)]
        kind: Kind,
        #[arg(long, value_enum)]
        construction: Option<Construction>,
    },
    /// Run registered checks.
    Verify {
        ids: Vec<String>,
        #[arg(long)]
        all: bool,
        /// List the registered ids and exit.
        #[arg(long)]
        list: bool,
    },
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Usage(e.to_string()),
            e => Failure::Run(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("kleinlat: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Run(e)) => {
            eprintln!("kleinlat: {e}");
            ExitCode::from(if matches!(e, Error::Defect(_)) { 2 } else { 1 })
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn header_word(src: &str) -> &str {
    src.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_whitespace().next())
        .unwrap_or("")
}

fn load_lattice(path: &PathBuf, construction: Option<Construction>) -> Result<Lattice, Failure> {
    let src = read(path)?;
    match (header_word(&src), construction) {
        ("lattice", None) => Ok(text::parse_lattice(&src)?),
        ("binary", Some(c)) => {
            let code = text::parse_binary(&src)?;
            Ok(match c {
                Construction::A => construction_a_lattice(&code)?,
                Construction::B => construction_b_lattice(&code)?,
            })
        }
        ("binary", None) => Err(Failure::Usage("a binary code needs --construction a|b".into())),
        ("lattice", Some(_)) => Err(Failure::Usage("--construction applies to binary code files".into())),
        (w, _) => Err(Failure::Usage(format!("{}: unexpected header `{w}`", path.display()))),
    }
}

fn emit(format: Format, v: &Value, text: &str) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("json")),
        Format::Text => print!("{text}"),
    }
}

fn binary_summary(c: &BinaryCode) -> Result<Value, Failure> {
    Ok(json!({
        "length": c.len(),
        "dim": c.dim(),
        "doubly_even": c.is_doubly_even(),
        "self_dual": c.is_self_dual(),
        "weight_enumerator": c.weight_enumerator()?.coeffs,
        "rows": c.rows_as_strings(),
    }))
}

fn codes(cli: &Cli, path: &PathBuf) -> Result<u8, Failure> {
    let src = read(path)?;
    let (v, t) = match header_word(&src) {
        "binary" => {
            let c = text::parse_binary(&src)?;
            let v = binary_summary(&c)?;
            (
                v,
                format!(
                    "{c}weight enumerator: {}\ndoubly even: {}\nself-dual: {}\n",
                    c.weight_enumerator()?,
                    c.is_doubly_even(),
                    c.is_self_dual()
                ),
            )
        }
        "kleinian" => {
            let k = text::parse_kleinian(&src)?;
            let (a, b) = (construction_a_code(&k), construction_b_code(&k));
            let v = json!({
                "length": k.len(),
                "size": k.size(),
                "even": k.is_even(),
                "self_dual": k.is_self_dual(),
                "weight_enumerator": k.weight_enumerator()?.coeffs,
                "construction_a": binary_summary(&a)?,
                "construction_b": binary_summary(&b)?,
            });
            let t = format!(
                "{k}size: {}\neven: {}\nself-dual: {}\nweight enumerator: {}\nconstruction A:\n{a}construction B:\n{b}",
                k.size(),
                k.is_even(),
                k.is_self_dual(),
                k.weight_enumerator()?
            );
            (v, t)
        }
        w => return Err(Failure::Usage(format!("{}: unexpected header `{w}`", path.display()))),
    };
    emit(cli.format, &v, &t);
    Ok(0)
}

fn lattices(cli: &Cli, l: &Lattice) -> Result<u8, Failure> {
    let disc = discriminant_group(l)?;
    let theta = theta_series(l, None, cli.precision)?;
    let roots = count_by_norm(l, None, 128)?.get(128).copied().unwrap_or(0);
    let v = json!({
        "rank": l.rank(),
        "det": l.det().to_string(),
        "even": l.is_even(),
        "unimodular": l.is_unimodular(),
        "discriminant": disc.factors,
        "norm2_vectors": roots,
        "theta": series_json(&theta),
        "basis": l.to_string(),
    });
    let t = format!(
        "{l}det: {}\neven: {}\nunimodular: {}\ndiscriminant: {:?}\nnorm-2 vectors: {roots}\ntheta:\n{theta}",
        l.det(),
        l.is_even(),
        l.is_unimodular(),
        disc.factors
    );
    emit(cli.format, &v, &t);
    Ok(0)
}

fn series_json(s: &QSeries) -> Value {
    json!({ "terms": s.terms().iter().map(|(e, c)| json!([e, c.to_string()])).collect::<Vec<_>>(), "precision": s.precision() })
}

fn series(cli: &Cli, l: &Lattice, kind: Kind) -> Result<u8, Failure> {
    let n = l.rank() as u32;
    let p = cli.precision;
    let s = match kind {
        Kind::Theta => theta_series(l, None, p)?,
        Kind::Vl => qseries::ch_vl(&theta_series(l, None, p)?, n)?,
        Kind::VlPlus => qseries::ch_vl_plus(&theta_series(l, None, p)?, n)?,
        Kind::VlMinus => qseries::ch_vl_minus(&theta_series(l, None, p)?, n)?,
        Kind::TwistedPlus | Kind::TwistedMinus => {
            let dim_t = voamod::twisted_dimension(l)?;
            qseries::ch_twisted_pm(n, dim_t, matches!(kind, Kind::TwistedPlus), p)?
        }
    };
    emit(cli.format, &series_json(&s), &s.to_string());
    Ok(0)
}

fn report_text(r: &Report) -> String {
    let tag = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Defect => "DEFECT",
    };
    let mut s = format!("{tag:<6} {} ({} ms)\n", r.id, r.millis);
    for f in &r.failures {
        s.push_str(&format!("       {f}\n"));
    }
    s
}

fn verify(cli: &Cli, ids: &[String], all: bool, list: bool) -> Result<u8, Failure> {
    if list {
        for id in CHECK_IDS {
            println!("{id}");
        }
        return Ok(0);
    }
    let ids: Vec<String> = match (all, ids.is_empty()) {
        (true, true) => CHECK_IDS.iter().map(|s| s.to_string()).collect(),
        (false, false) => ids.to_vec(),
        (true, false) => return Err(Failure::Usage("give check ids or --all, not both".into())),
        (false, true) => return Err(Failure::Usage("no check ids given (try --all or --list)".into())),
    };
    if let Some(bad) = ids.iter().find(|id| !checks::is_registered(id)) {
        return Err(Failure::Usage(format!("unknown check id `{bad}`")));
    }
    if cli.precision < 1 {
        return Err(Failure::Usage("--precision must be at least 1".into()));
    }
    let params = Params { precision: cli.precision, trace: cli.trace };
    let reports = checks::run_batch(&ids, &params, cli.jobs)?;
    let v = json!(reports);
    let t: String = reports.iter().map(report_text).collect();
    emit(cli.format, &v, &t);
    let worst = reports.iter().map(|r| r.status).max().unwrap_or(Status::Pass);
    Ok(match worst {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Defect => 2,
    })
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    if cli.jobs == 0 {
        return Err(Failure::Usage("--jobs must be positive".into()));
    }
    match &cli.cmd {
        Cmd::Codes { file } => codes(cli, file),
        Cmd::Lattices { file, construction } => lattices(cli, &load_lattice(file, *construction)?),
        Cmd::Qseries { file, kind, construction } => series(cli, &load_lattice(file, *construction)?, *kind),
        Cmd::Verify { ids, all, list } => verify(cli, ids, *all, *list),
    }
}
