//! One line per acceptance criterion. Each criterion runs its registered
//! checks at `q^10` and must finish inside its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kleinlat::checks::{run_check, Params, Status};

/// Series precision, as an exponent of `q`.
const PRECISION: i64 = 10;

struct Criterion {
    n: u32,
    title: &'static str,
    checks: &'static [&'static str],
    limit: Duration,
}

const fn mins(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

const CRITERIA: &[Criterion] = &[
    Criterion { n: 1, title: "Kleinian classification at n = 2, 4", checks: &["lemma-LHo1"], limit: Duration::from_secs(60) },
    Criterion {
        n: 2,
        title: "construction identities and enumerator substitution",
        checks: &["construction-identities"],
        limit: Duration::from_secs(60),
    },
    Criterion { n: 3, title: "code counts", checks: &["code-counts"], limit: mins(1) },
    Criterion { n: 4, title: "recovery round trips", checks: &["recovery"], limit: mins(1) },
    Criterion { n: 5, title: "theta identities, rho, |P(2)| = 480", checks: &["lattice-identities"], limit: mins(5) },
    Criterion { n: 6, title: "isometry witness and rejection in rank 16", checks: &["isometry"], limit: mins(10) },
    Criterion { n: 7, title: "five even overlattices of sqrt2 E8", checks: &["overlattices"], limit: mins(10) },
    Criterion { n: 8, title: "character identities and the root-count criterion", checks: &["characters"], limit: mins(2) },
    Criterion {
        n: 9,
        title: "pair verdicts with re-verified certificates",
        checks: &[
            "thm-MTT",
            "table2-row:L(C)~L(D)",
            "table2-row:VL~VN",
            "table2-row:L+(C)~L+(D)",
            "table2-row:VL+~VN+",
            "table2-row:L+(C)~L(D)",
            "table2-row:VL+~VN",
        ],
        limit: mins(15),
    },
    Criterion { n: 10, title: "property suites over 200 random lattices", checks: &["properties"], limit: mins(10) },
];

fn main() -> ExitCode {
    let params = Params { precision: PRECISION, trace: false };
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let mut problems = Vec::new();
        for id in c.checks {
            match run_check(id, &params) {
                Ok(r) if r.status == Status::Pass => {}
                Ok(r) => problems.extend(r.failures.iter().map(|f| format!("{id}: {f}"))),
                Err(e) => problems.push(format!("{id}: {e}")),
            }
        }
        let took = start.elapsed();
        if took > c.limit {
            problems.push(format!("took {:.1}s, limit {}s", took.as_secs_f64(), c.limit.as_secs()));
        }
        let tag = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("{tag} criterion {:>2}: {} ({:.1}s / {}s)", c.n, c.title, took.as_secs_f64(), c.limit.as_secs());
        for p in &problems {
            println!("     {p}");
        }
        failed += !problems.is_empty() as usize;
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
