use std::time::Instant;

use nilslice::hilbert::{
    b_fiber_partner, ideal_point_distance, ideal_point_from_coords, ideal_point_numeric, project_to_fiber, round_trip,
    support_points, HilbertError,
};
use nilslice::kernel::{multiset_distance, ComplexF, GaussianRational};
use nilslice::liealg::{AlgebraKind, Family};
use nilslice::sampling::{cell_id, random_coords, random_nonzero_rational, random_rational, sample_rng, SampleRng};
use nilslice::slices::{
    coordinate_weights, corrected_sp_weights, jm_h, jm_triple, lambda_act_coords, lambda_act_matrix,
    printed_sp_weights, slice_point, OrbitIndex, SliceCoords,
};
use nilslice::spectra::{
    charpoly_identity_check, fiber_residual, is_regular, kleinian_check, spectral_class_of, surface, SpectralClass,
};
use nilslice::transversality::{fiber_jacobian_rank, jacobian_fd_error, transversality_certificate, ReducedMap};
use rayon::prelude::*;

use crate::report::{CampaignReport, CellResult};
use crate::{CampaignConfig, Command};

const ROOT_TOL: f64 = 1e-12;
/// Smoothness draws at most this many candidates per wanted regular sample.
const REGULAR_ATTEMPTS: usize = 20;

/// Runs one campaign over its cells. Cells run in parallel, each with its
/// own sample streams, so the result does not depend on scheduling.
pub fn run_campaign(command: Command, config: &CampaignConfig) -> CampaignReport {
    let start = Instant::now();
    let cells = campaign_cells(command, config);
    let work = || -> Vec<CellResult> {
        cells
            .par_iter()
            .map(|&idx| {
                let t = Instant::now();
                let mut cell = CellResult::new(idx.family(), idx.m(), idx.n);
                if let Err(e) = run_cell(command, config, idx, &mut cell) {
                    cell.fail(e);
                }
                cell.elapsed_ms = t.elapsed().as_secs_f64() * 1e3;
                cell
            })
            .collect()
    };
    let cells = match crate::thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool").install(work),
        None => work(),
    };
    CampaignReport {
        command,
        pass: cells.iter().all(|c| c.pass),
        cells,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn campaign_cells(command: Command, config: &CampaignConfig) -> Vec<OrbitIndex> {
    match command {
        Command::VerifyKleinian => config.cells(&Family::ALL).into_iter().filter(|i| i.n == 1).collect(),
        Command::VerifyEmbedding => config.cells(&Family::ALL).into_iter().filter(|i| i.n >= 1).collect(),
        Command::ReportAll => Vec::new(),
        _ => config.cells(&Family::ALL),
    }
}

fn run_cell(command: Command, config: &CampaignConfig, idx: OrbitIndex, cell: &mut CellResult) -> Result<(), String> {
    match command {
        Command::VerifyCharpoly => charpoly_cell(config, idx, cell),
        Command::VerifyJm => jm_cell(idx, cell),
        Command::VerifyLambda => lambda_cell(config, idx, cell),
        Command::VerifyTransversality => transversality_cell(idx, cell),
        Command::VerifyKleinian => kleinian_cell(idx, cell),
        Command::VerifyEmbedding if idx.family() == Family::B => partner_cell(config, idx, cell),
        Command::VerifyEmbedding => embedding_cell(config, idx, cell),
        Command::VerifySmoothness => smoothness_cell(config, idx, cell),
        Command::ReportAll => Ok(()),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn to_c(c: &SliceCoords<GaussianRational>) -> SliceCoords<ComplexF> {
    c.map(GaussianRational::to_complex)
}

fn class_of(idx: OrbitIndex, c: &SliceCoords<GaussianRational>) -> Result<SpectralClass, String> {
    spectral_class_of(&slice_point(idx, c).map_err(err)?).map_err(err)
}

/// Exact closed-form identity, plus the fiber equation at the sample's own
/// spectral class.
fn charpoly_cell(config: &CampaignConfig, idx: OrbitIndex, cell: &mut CellResult) -> Result<(), String> {
    let samples = config.samples_for(Command::VerifyCharpoly);
    let id = cell_id(0, idx);
    let mut nonzero = 0;
    cell.set("max_residual", 0.0);
    cell.set("max_fiber_residual", 0.0);
    for s in 0..samples {
        let c = random_coords(idx, &mut sample_rng(config.seed, id, s as u64));
        let r = charpoly_identity_check(idx, &c).map_err(err)?;
        if !r.is_zero() {
            nonzero += 1;
            cell.max("max_residual", r.to_complex().max_abs_coeff());
        }
        let tau = class_of(idx, &c)?;
        let fr = fiber_residual(idx, &c, &tau).map_err(err)?;
        cell.max("max_fiber_residual", fr.max_abs_coeff() / tau.reduced.max_abs_coeff().max(1.0));
    }
    cell.samples = samples;
    cell.set("nonzero_residuals", nonzero as f64);
    if nonzero > 0 {
        cell.fail(format!("{nonzero} samples with nonzero residual"));
    }
    if cell.metric("max_fiber_residual").unwrap_or(0.0) >= config.tol.residual {
        cell.fail("fiber equation residual above tolerance");
    }
    Ok(())
}

fn jm_cell(idx: OrbitIndex, cell: &mut CellResult) -> Result<(), String> {
    let t = jm_triple(idx).map_err(err)?;
    cell.note("h", if t.h == jm_h(idx) { "closed-form" } else { "solver" });
    if !t.relations_hold() {
        cell.fail("bracket relations do not hold");
    }
    Ok(())
}

fn lambda_cell(config: &CampaignConfig, idx: OrbitIndex, cell: &mut CellResult) -> Result<(), String> {
    let samples = config.samples_for(Command::VerifyLambda);
    let id = cell_id(2, idx);
    let h = jm_h(idx);
    let mut mismatches = 0;
    cell.set("max_mu_scaling_error", 0.0);
    for s in 0..samples {
        let mut rng = sample_rng(config.seed, id, s as u64);
        let c = random_coords(idx, &mut rng);
        let r = random_nonzero_rational(&mut rng);
        let lhs = lambda_act_matrix(&r, &slice_point(idx, &c).map_err(err)?, &h).map_err(err)?;
        let moved = lambda_act_coords(idx, &r, &c).map_err(err)?;
        if lhs != slice_point(idx, &moved).map_err(err)? {
            mismatches += 1;
        }
        let expect = class_of(idx, &c)?.scaled(r.to_complex());
        let got = class_of(idx, &moved)?;
        let scale = expect.mu.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mut e = multiset_distance(&expect.mu, &got.mu) / scale;
        if let (Some(p), Some(q)) = (expect.p_sign, got.p_sign) {
            e = e.max((p - q).norm() / p.norm().max(1.0));
        }
        cell.max("max_mu_scaling_error", e);
    }
    cell.samples = samples;
    cell.set("action_mismatches", mismatches as f64);
    if mismatches > 0 {
        cell.fail(format!("{mismatches} samples where matrix and coordinate actions differ"));
    }
    if cell.metric("max_mu_scaling_error").unwrap_or(0.0) >= config.tol.residual {
        cell.fail("squared eigenvalues do not scale by r²");
    }
    let w = coordinate_weights(idx).map_err(err)?;
    cell.note("weights", format!("{w:?}"));
    if idx.family() == Family::C {
        if w != corrected_sp_weights(idx) {
            cell.fail("derived weights differ from the homogeneity weights");
        }
        let printed = w == printed_sp_weights(idx);
        cell.note("printed_weights", if printed { "match" } else { "differ" });
    }
    Ok(())
}

fn transversality_cell(idx: OrbitIndex, cell: &mut CellResult) -> Result<(), String> {
    let c = transversality_certificate(idx).map_err(err)?;
    cell.set("rank_ad", c.rank_ad as f64);
    cell.set("dim_v", c.dim_v as f64);
    cell.set("rank_joint", c.rank_joint as f64);
    if !c.verdict {
        cell.fail("slice directions are not complementary to the orbit");
    }
    if c.dim_v != idx.codim() {
        cell.fail("slice dimension differs from the codimension");
    }
    Ok(())
}

fn kleinian_cell(idx: OrbitIndex, cell: &mut CellResult) -> Result<(), String> {
    let kind = AlgebraKind::new(idx.family(), idx.m()).map_err(err)?;
    let r = kleinian_check(kind).map_err(err)?;
    cell.note("expected", r.expected.to_string());
    cell.note("found", r.found.to_string());
    cell.note("normal_form", r.normal_form);
    if !r.matches {
        cell.fail("singularity type differs from the expected one");
    }
    Ok(())
}

/// Moves a perturbed copy of x onto the fiber through x.
fn same_fiber_point(
    map: &ReducedMap,
    idx: OrbitIndex,
    x: &SliceCoords<GaussianRational>,
    rng: &mut SampleRng,
) -> Result<SliceCoords<ComplexF>, String> {
    let base = to_c(x).to_flat();
    let start: Vec<ComplexF> = base.iter().map(|v| v + random_rational(rng).to_complex() * 0.1).collect();
    let y = project_to_fiber(map, &base, &start).map_err(err)?;
    SliceCoords::from_flat(idx, y).map_err(err)
}

fn coord_distance(a: &SliceCoords<ComplexF>, b: &SliceCoords<ComplexF>) -> f64 {
    a.to_flat().iter().zip(b.to_flat()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Support points on the surface, ideal point round trip, and distinct
/// supports for distinct points of one fiber.
fn embedding_cell(config: &CampaignConfig, idx: OrbitIndex, cell: &mut CellResult) -> Result<(), String> {
    let tol = &config.tol;
    let samples = config.samples_for(Command::VerifyEmbedding);
    let id = cell_id(6, idx);
    let map = ReducedMap::new(idx).map_err(err)?;
    let (mut repeated, mut pairs, mut distinct) = (0usize, 0usize, 0usize);
    for k in ["max_surface_residual", "max_round_trip_error", "max_remainder"] {
        cell.set(k, 0.0);
    }
    for s in 0..samples {
        let mut rng = sample_rng(config.seed, id, s as u64);
        let c = random_coords(idx, &mut rng);
        let ip = ideal_point_from_coords(idx, &c).map_err(err)?;
        cell.max("max_remainder", ip.remainder);
        if !ip.degrees_ok(idx.n) {
            cell.fail("ideal point has the wrong degrees");
        }
        let tau = class_of(idx, &c)?;
        let surf = surface(&tau).map_err(err)?;
        let sp = support_points(&ip, ROOT_TOL).map_err(err)?;
        for pt in &sp.points {
            cell.max("max_surface_residual", surf.relative_residual(*pt));
        }
        match round_trip(&sp, &tau, idx, tol.separation) {
            Ok((back, _)) => cell.max("max_round_trip_error", ideal_point_distance(&ip, &back)),
            Err(HilbertError::RepeatedSupport) => repeated += 1,
            Err(e) => return Err(err(e)),
        }
        let Ok(other) = same_fiber_point(&map, idx, &c, &mut rng) else { continue };
        if coord_distance(&other, &to_c(&c)) < tol.separation {
            continue;
        }
        let ip2 = ideal_point_numeric(idx, &other, &tau).map_err(err)?;
        if ip2.remainder > tol.residual * tau.reduced.max_abs_coeff().max(1.0) {
            continue;
        }
        pairs += 1;
        if support_points(&ip2, ROOT_TOL).map_err(err)?.distance(&sp) > tol.separation {
            distinct += 1;
        }
    }
    cell.samples = samples;
    cell.skipped = repeated;
    record_pairs(cell, pairs, distinct);
    let simple = (samples - repeated) as f64 / samples.max(1) as f64;
    cell.set("simple_support_fraction", simple);
    if cell.metric("max_remainder").unwrap_or(0.0) != 0.0 {
        cell.fail("exact ideal point has a nonzero remainder");
    }
    if cell.metric("max_surface_residual").unwrap_or(0.0) >= tol.residual {
        cell.fail("support point off the surface");
    }
    if cell.metric("max_round_trip_error").unwrap_or(0.0) >= tol.round_trip {
        cell.fail("round trip error above tolerance");
    }
    if samples > 0 && simple < 0.95 {
        cell.fail("fewer than 95% of samples have simple support");
    }
    Ok(())
}

fn record_pairs(cell: &mut CellResult, pairs: usize, distinct: usize) {
    cell.set("same_fiber_pairs", pairs as f64);
    cell.set("distinct_support_pairs", distinct as f64);
    if pairs > 0 && (distinct as f64) < 0.99 * pairs as f64 {
        cell.fail("same-fiber pairs with equal supports");
    }
}

/// so(2m+1): the partner (−a₀, −d₀) has the same support; other points of
/// the fiber do not.
fn partner_cell(config: &CampaignConfig, idx: OrbitIndex, cell: &mut CellResult) -> Result<(), String> {
    let tol = &config.tol;
    let samples = config.samples_for(Command::VerifyEmbedding);
    let id = cell_id(7, idx);
    let map = ReducedMap::new(idx).map_err(err)?;
    let (mut same, mut pairs, mut distinct) = (0usize, 0usize, 0usize);
    cell.set("max_partner_discrepancy", 0.0);
    cell.set("max_surface_residual", 0.0);
    for s in 0..samples {
        let mut rng = sample_rng(config.seed, id, s as u64);
        let c = random_coords(idx, &mut rng);
        let partner = b_fiber_partner(&c).map_err(err)?;
        let sp = support_points(&ideal_point_from_coords(idx, &c).map_err(err)?, ROOT_TOL).map_err(err)?;
        let sq = support_points(&ideal_point_from_coords(idx, &partner).map_err(err)?, ROOT_TOL).map_err(err)?;
        let d = sp.distance(&sq);
        cell.max("max_partner_discrepancy", d);
        if d < tol.support_match {
            same += 1;
        }
        let tau = class_of(idx, &c)?;
        let surf = surface(&tau).map_err(err)?;
        for pt in &sp.points {
            cell.max("max_surface_residual", surf.relative_residual(*pt));
        }
        let Ok(other) = same_fiber_point(&map, idx, &c, &mut rng) else { continue };
        if coord_distance(&other, &to_c(&c)) < tol.separation || coord_distance(&other, &to_c(&partner)) < tol.separation
        {
            continue;
        }
        let ip2 = ideal_point_numeric(idx, &other, &tau).map_err(err)?;
        if ip2.remainder > tol.residual * tau.reduced.max_abs_coeff().max(1.0) {
            continue;
        }
        pairs += 1;
        if support_points(&ip2, ROOT_TOL).map_err(err)?.distance(&sp) > tol.separation {
            distinct += 1;
        }
    }
    cell.samples = samples;
    cell.set("partner_matches", same as f64);
    record_pairs(cell, pairs, distinct);
    if same < samples {
        cell.fail(format!("{} partners with different supports", samples - same));
    }
    if cell.metric("max_surface_residual").unwrap_or(0.0) >= tol.residual {
        cell.fail("support point off the surface");
    }
    Ok(())
}

fn smoothness_cell(config: &CampaignConfig, idx: OrbitIndex, cell: &mut CellResult) -> Result<(), String> {
    let wanted = config.samples_for(Command::VerifySmoothness);
    let id = cell_id(8, idx);
    let map = ReducedMap::new(idx).map_err(err)?;
    let (mut found, mut rank_failures) = (0usize, 0usize);
    cell.set("max_fd_error", 0.0);
    let mut attempt = 0;
    while found < wanted && attempt < wanted * REGULAR_ATTEMPTS {
        let c = random_coords(idx, &mut sample_rng(config.seed, id, attempt as u64));
        attempt += 1;
        let tau = class_of(idx, &c)?;
        if !is_regular(&tau, config.tol.separation) {
            continue;
        }
        found += 1;
        let x = to_c(&c);
        if fiber_jacobian_rank(&map, &x, config.tol.rank) != idx.m() {
            rank_failures += 1;
        }
        cell.max("max_fd_error", jacobian_fd_error(&map, &x.to_flat(), 1e-5).map_err(err)?);
    }
    cell.samples = found;
    cell.skipped = attempt - found;
    cell.set("rank_deficient", rank_failures as f64);
    if found < wanted {
        cell.fail(format!("only {found} regular samples in {attempt} draws"));
    }
    if rank_failures > 0 {
        cell.fail(format!("{rank_failures} regular samples with Jacobian rank below m"));
    }
    if cell.metric("max_fd_error").unwrap_or(0.0) >= config.tol.finite_difference {
        cell.fail("analytic and finite-difference Jacobians disagree");
    }
    Ok(())
}
