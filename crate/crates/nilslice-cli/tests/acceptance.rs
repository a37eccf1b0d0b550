//! Acceptance suite: one line per criterion, from two report-all runs with
//! the default configuration (m ≤ 6, seed 1).

use std::process::ExitCode;

use nilslice::liealg::Family;
use nilslice_cli::{run, CampaignConfig, CampaignReport, CellResult, Command, Report, Tolerances};

const SEED: u64 = 1;
const M_MAX: usize = 6;
const RESIDUAL_TOL: f64 = 1e-9;
const ROUND_TRIP_TOL: f64 = 1e-8;
const FD_TOL: f64 = 1e-6;
const RANK_TOL: f64 = 1e-8;
const SUPPORT_MATCH_TOL: f64 = 1e-9;
const SIMPLE_FRACTION: f64 = 0.95;
const DISTINCT_FRACTION: f64 = 0.99;
const CHARPOLY_BUDGET_MS: f64 = 120_000.0;

struct Line {
    pass: bool,
    text: String,
}

fn line(pass: bool, text: String) -> Line {
    Line { pass, text }
}

fn campaign(r: &Report, c: Command) -> &CampaignReport {
    r.campaign(c).expect("report-all runs every campaign")
}

fn max_metric(cells: &[&CellResult], name: &str) -> f64 {
    cells.iter().filter_map(|c| c.metric(name)).fold(0.0, f64::max)
}

fn all(c: &CampaignReport) -> Vec<&CellResult> {
    c.cells.iter().collect()
}

fn count(cells: &[&CellResult], name: &str) -> usize {
    cells.iter().filter_map(|c| c.metric(name)).sum::<f64>() as usize
}

fn failures(cells: &[&CellResult]) -> String {
    let v: Vec<String> = cells
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}(m={}, n={}): {}", c.kind, c.m, c.n, c.info.get("failure").map_or("", |s| s)))
        .collect();
    if v.is_empty() {
        String::new()
    } else {
        format!("; failed: {}", v.join(", "))
    }
}

fn charpoly(r: &Report) -> Line {
    let c = campaign(r, Command::VerifyCharpoly);
    let cells: Vec<&CellResult> = c.cells.iter().filter(|x| x.m >= 2).collect();
    let samples_ok = cells.iter().all(|x| x.samples == 25);
    let nonzero = count(&cells, "nonzero_residuals");
    let pass = cells.iter().all(|x| x.pass) && samples_ok && nonzero == 0 && c.elapsed_ms < CHARPOLY_BUDGET_MS;
    line(
        pass,
        format!(
            "characteristic-polynomial identities: {} cells m=2..6 x 25 samples, {} nonzero exact residuals, {:.1} s (budget 120 s){}",
            cells.len(),
            nonzero,
            c.elapsed_ms / 1e3,
            failures(&cells)
        ),
    )
}

fn jm(r: &Report) -> Line {
    let c = campaign(r, Command::VerifyJm);
    let cells = all(c);
    let solver = cells.iter().filter(|x| x.info.get("h").is_some_and(|h| h == "solver")).count();
    line(
        c.pass,
        format!(
            "JM triples: bracket relations exact in {}/{} cells m<=6 (kinds C, D, B; {} via solver){}",
            cells.iter().filter(|x| x.pass).count(),
            cells.len(),
            solver,
            failures(&cells)
        ),
    )
}

/// The derived type-C weights equal the weights read off from the
/// homogeneity of the closed form; the printed z-weight exponent m+n−i+1
/// agrees with them only when n = 0 (the derivation gives m−n−i+1).
fn lambda(r: &Report) -> (Line, bool) {
    let c = campaign(r, Command::VerifyLambda);
    let cells = all(c);
    let sp: Vec<&CellResult> = cells.iter().copied().filter(|x| x.kind == Family::C).collect();
    let printed_ok = sp.iter().filter(|x| x.info.get("printed_weights").is_some_and(|s| s == "match")).count();
    let known = sp.iter().all(|x| x.info.get("printed_weights").is_some_and(|s| (s == "match") == (x.n == 0)));
    let samples_ok = cells.iter().all(|x| x.samples == 50);
    let mismatches = count(&cells, "action_mismatches");
    let scaling = max_metric(&cells, "max_mu_scaling_error");
    let rest = c.pass && samples_ok && mismatches == 0 && scaling < RESIDUAL_TOL;
    let pass = rest && printed_ok == sp.len();
    let text = format!(
        "lambda-action: matrix vs coordinate action exact on 50 samples in {}/{} cells ({} mismatches); mu -> r^2 mu max rel err {:.1e} (tol 1e-9); \
         type-C weights equal the homogeneity weights in {}/{} cells, printed z-weight formula matches in {}/{} (only n = 0){}",
        cells.iter().filter(|x| x.pass).count(),
        cells.len(),
        mismatches,
        scaling,
        sp.iter().filter(|x| x.pass).count(),
        sp.len(),
        printed_ok,
        sp.len(),
        failures(&cells)
    );
    (line(pass, text), rest && known)
}

fn transversality(r: &Report) -> Line {
    let c = campaign(r, Command::VerifyTransversality);
    let cells = all(c);
    let dims = cells.iter().all(|x| x.metric("dim_v") == Some((x.m + 2 * x.n) as f64));
    let modified = cells.iter().filter(|x| x.kind == Family::C && x.n >= 1 && 2 * x.n == x.m).count();
    line(
        c.pass && dims,
        format!(
            "transversality: exact verdict true in {}/{} cells m<=6 ({} modified sp cells), dim V = m+2n everywhere: {}{}",
            cells.iter().filter(|x| x.pass).count(),
            cells.len(),
            modified,
            dims,
            failures(&cells)
        ),
    )
}

fn kleinian(r: &Report) -> Line {
    let c = campaign(r, Command::VerifyKleinian);
    let cells = all(c);
    let table: Vec<String> = cells
        .iter()
        .map(|x| format!("{}{}:{}", x.kind, x.m, x.info.get("found").map_or("?", |s| s)))
        .collect();
    let expected_cells = Family::ALL
        .iter()
        .map(|&f| (1..=M_MAX).filter(|&m| nilslice::slices::OrbitIndex::new(f, m, 1).is_ok()).count())
        .sum::<usize>();
    line(
        c.pass && cells.len() == expected_cells,
        format!("Kleinian degenerations: {}/{} match [{}]{}", cells.iter().filter(|x| x.pass).count(), expected_cells, table.join(" "), failures(&cells)),
    )
}

fn embedding(r: &Report) -> Line {
    let c = campaign(r, Command::VerifyEmbedding);
    let cells: Vec<&CellResult> = c.cells.iter().filter(|x| x.kind != Family::B).collect();
    let samples_ok = cells.iter().all(|x| x.samples == 100);
    let surface = max_metric(&cells, "max_surface_residual");
    let rt = max_metric(&cells, "max_round_trip_error");
    let repeated: usize = cells.iter().map(|x| x.skipped).sum();
    let min_simple = cells.iter().filter_map(|x| x.metric("simple_support_fraction")).fold(1.0, f64::min);
    let pass = cells.iter().all(|x| x.pass)
        && samples_ok
        && surface < RESIDUAL_TOL
        && rt < ROUND_TRIP_TOL
        && min_simple >= SIMPLE_FRACTION;
    line(
        pass,
        format!(
            "embedding: {} cells (C, D, n>=1, m<=6) x 100 samples, surface residual max {:.1e} (tol 1e-9), round trip max {:.1e} (tol 1e-8), \
             {} repeated-support samples skipped, min simple fraction {:.2}{}",
            cells.len(),
            surface,
            rt,
            repeated,
            min_simple,
            failures(&cells)
        ),
    )
}

fn partners(r: &Report) -> Line {
    let c = campaign(r, Command::VerifyEmbedding);
    let cells: Vec<&CellResult> = c.cells.iter().filter(|x| x.kind == Family::B).collect();
    let matches = count(&cells, "partner_matches");
    let total: usize = cells.iter().map(|x| x.samples).sum();
    let pairs = count(&cells, "same_fiber_pairs");
    let distinct = count(&cells, "distinct_support_pairs");
    let disc = max_metric(&cells, "max_partner_discrepancy");
    let pass = cells.iter().all(|x| x.pass && x.samples == 100)
        && matches == total
        && disc < SUPPORT_MATCH_TOL
        && pairs > 0
        && distinct as f64 >= DISTINCT_FRACTION * pairs as f64;
    line(
        pass,
        format!(
            "type-B 2:1 structure: partner supports identical in {}/{} samples (max discrepancy {:.1e}), non-partner same-fiber pairs distinct {}/{}{}",
            matches,
            total,
            disc,
            distinct,
            pairs,
            failures(&cells)
        ),
    )
}

fn smoothness(r: &Report) -> Line {
    let c = campaign(r, Command::VerifySmoothness);
    let cells = all(c);
    let fd = max_metric(&cells, "max_fd_error");
    let deficient = count(&cells, "rank_deficient");
    let samples_ok = cells.iter().all(|x| x.samples == 10);
    line(
        c.pass && samples_ok && deficient == 0 && fd < FD_TOL,
        format!(
            "fiber smoothness: rank m at 10 regular samples in {}/{} cells ({} rank-deficient), analytic vs finite-difference max {:.1e} (tol 1e-6){}",
            cells.iter().filter(|x| x.pass).count(),
            cells.len(),
            deficient,
            fd,
            failures(&cells)
        ),
    )
}

fn determinism(a: &Report, b: &Report) -> Line {
    let ja = a.without_timings().to_json();
    let jb = b.without_timings().to_json();
    line(ja == jb, format!("determinism: two report-all runs with seed {SEED}, {} bytes each, identical: {}", ja.len(), ja == jb))
}

fn main() -> ExitCode {
    let config = CampaignConfig { seed: SEED, m_max: M_MAX, ..CampaignConfig::default() };
    let tol = Tolerances::default();
    assert_eq!(
        (tol.residual, tol.round_trip, tol.finite_difference, tol.rank, tol.support_match),
        (RESIDUAL_TOL, ROUND_TRIP_TOL, FD_TOL, RANK_TOL, SUPPORT_MATCH_TOL),
        "pinned tolerances changed"
    );
    let first = run(Command::ReportAll, &config).expect("default config is valid");
    let second = run(Command::ReportAll, &config).expect("default config is valid");

    let (lambda_line, lambda_known) = lambda(&first);
    let lines = [
        charpoly(&first),
        jm(&first),
        lambda_line,
        transversality(&first),
        kleinian(&first),
        embedding(&first),
        partners(&first),
        smoothness(&first),
        determinism(&first, &second),
    ];
    let mut ok = true;
    for (k, l) in lines.iter().enumerate() {
        println!("criterion {} {}: {}", k + 1, if l.pass { "PASS" } else { "FAIL" }, l.text);
        // criterion 3 fails by the printed z-weights alone; that state is expected
        ok &= l.pass || (k == 2 && lambda_known);
    }
    if lambda_known && !lines[2].pass {
        println!("note: criterion 3 fails only on the printed type-C z-weight exponent; the derived weights are m-n-i+1");
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
