//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `--nocapture`). Tolerances are pinned here and
//! nowhere else.
//!
//! Run with:
//!   cargo test -p fidlim --test acceptance -- --nocapture --test-threads=1

use std::time::Instant;

use fidlim::blocking::{
    block_ensemble, converse_sweep, product_spectrum, sigma_d, ConverseRow, DimensionRule, Spectrum,
};
use fidlim::channels::random_channel;
use fidlim::coding::{
    appendix_ensemble, average_fidelity, eta, fuzz_bound, fuzz_inequality, optimize_planar_tilt,
    optimize_unitary_decoder, project_ensemble, sqrt_fid_projected_average, topd_encoder,
    with_identity_decoder, CodingScheme, FuzzConfig, OptMethod, SourceEnsemble,
};
use fidlim::fidelity::{fidelity_general, fidelity_oracle};
use fidlim::{child_rng, random_density, random_probabilities, random_pure_state, Pure64};

struct Criterion {
    id: u32,
    label: &'static str,
    started: Instant,
}

impl Criterion {
    fn new(id: u32, label: &'static str) -> Self {
        Self {
            id,
            label,
            started: Instant::now(),
        }
    }

    fn finish(self, pass: bool, detail: String) {
        let line = format!(
            "criterion {:>2}: {} - {} [{}] ({:.2?})",
            self.id,
            if pass { "PASS" } else { "FAIL" },
            self.label,
            detail,
            self.started.elapsed()
        );
        println!("{line}");
        assert!(pass, "{line}");
    }
}

fn random_ensemble(n: usize, m: usize, rng: &mut impl rand::Rng) -> SourceEnsemble<f64> {
    let probs = random_probabilities::<f64, _>(m, rng);
    let signals = probs
        .into_iter()
        .map(|p| (p, random_pure_state::<f64, _>(n, rng).unwrap()))
        .collect();
    SourceEnsemble::new(signals).unwrap()
}

/// 1. Identity-decoder fidelity of the worked example:
///    F = 2(.49)cos²15° + (.02)(.25) = 0.919352..., within ±0.0005 of the
///    rounded 0.919. Runtime < 1 s.
#[test]
fn criterion_01_appendix_identity_decoder() {
    let c = Criterion::new(1, "appendix identity-decoder fidelity ≈ 0.919");
    let (e, enc, _) = appendix_ensemble::<f64>().unwrap();
    let f = average_fidelity(&e, &with_identity_decoder(enc)).unwrap();
    let exact = 2.0 * 0.49 * 15f64.to_radians().cos().powi(2) + 0.02 * 0.25;
    let pass = (f - 0.919).abs() <= 5e-4
        && (f - exact).abs() < 1e-12
        && (f - 0.91935).abs() < 5e-5
        && c.started.elapsed().as_secs_f64() < 1.0;
    c.finish(pass, format!("F = {f:.6}"));
}

/// 2. Measure-and-prepare decoder: F = .49 + .49 + .02·.25 = 0.985 ± 1e-6.
#[test]
fn criterion_02_appendix_measure_prepare() {
    let c = Criterion::new(2, "appendix measure-prepare fidelity = 0.985");
    let (e, enc, mp) = appendix_ensemble::<f64>().unwrap();
    let scheme = CodingScheme::new(enc, mp.as_kraus().unwrap()).unwrap();
    let f = average_fidelity(&e, &scheme).unwrap();
    let pass = (f - 0.985).abs() <= 1e-6;
    c.finish(pass, format!("F = {f:.9}"));
}

/// 3. Optimal unitary decoder: rotation angle 0.791° ± 0.02°, fidelity gain
///    over the identity decoder below 5e-4, and the measure-prepare value
///    0.985 strictly above the best unitary. Runtime < 30 s.
///
///    Known red: the angle clause pins 0.791°, but the optimum is 0.70483°.
///    Three independent searches (axis-angle pattern search over the full
///    rotation group, Riemannian gradient ascent over all 3x3 unitaries,
///    and a golden-section sweep of the one-parameter tilt toward |a₂⟩)
///    converge to the same angle and the same fidelity 0.9194394390, and
///    the first-order condition puts the root at 0.0123016 rad. The other
///    two clauses hold.
#[test]
fn criterion_03_appendix_optimal_unitary() {
    let c = Criterion::new(3, "appendix optimal unitary decoder");
    let (e, enc, mp) = appendix_ensemble::<f64>().unwrap();
    let f_id = average_fidelity(&e, &with_identity_decoder(enc.clone())).unwrap();
    let mp_scheme = CodingScheme::new(enc.clone(), mp.as_kraus().unwrap()).unwrap();
    let f_mp = average_fidelity(&e, &mp_scheme).unwrap();

    let mut rng = child_rng(42, 0);
    let best = optimize_unitary_decoder(&e, &enc, OptMethod::Auto, 10, &mut rng).unwrap();
    let (tilt_angle, tilt_f) = optimize_planar_tilt(&e, &enc, [1.0, -1.0, 0.0]).unwrap();

    let angle = best
        .rotation_angle_deg
        .unwrap_or_else(|| tilt_angle.to_degrees().abs());
    let searches_agree = (best.fidelity - tilt_f).abs() < 1e-7;
    let gain = best.fidelity - f_id;

    let angle_ok = (angle - 0.791).abs() <= 0.02;
    let gain_ok = gain > 0.0 && gain < 5e-4;
    let mp_wins = f_mp > best.fidelity;
    let in_time = c.started.elapsed().as_secs_f64() < 30.0;
    let pass = angle_ok && gain_ok && mp_wins && searches_agree && in_time;
    c.finish(
        pass,
        format!(
            "angle = {angle:.4}° (claimed 0.791±0.02 → {angle_ok}), gain = {gain:.3e} (<5e-4 → {gain_ok}), 0.985 > {0:.6} → {mp_wins}",
            best.fidelity
        ),
    );
}

/// 4. η-achieving scheme: top-d encoder with the identity decoder hits
///    F = η to 1e-10 on 100 random ensembles, every valid d.
#[test]
fn criterion_04_topd_achieves_eta() {
    let c = Criterion::new(4, "top-d encoder + identity decoder achieves η");
    let mut worst = 0.0f64;
    for trial in 0..100u64 {
        let mut rng = child_rng(4242, trial);
        let n = 3 + (trial as usize) % 4;
        let e = random_ensemble(n, 2 + (trial as usize) % 6, &mut rng);
        let rho = e.density();
        for d in 1..n {
            let scheme = with_identity_decoder(topd_encoder(&e, d).unwrap());
            let f = average_fidelity(&e, &scheme).unwrap();
            worst = worst.max((f - eta(&rho, d)).abs());
        }
    }
    c.finish(worst < 1e-10, format!("max |F − η| = {worst:.3e}"));
}

/// 5. The square-root fidelity average collapses: Σ p √F(π, π̃) = 1 − η
///    within 1e-10 on the same style of ensembles.
#[test]
fn criterion_05_sqrt_fidelity_equality() {
    let c = Criterion::new(5, "Σ p √F(π, π̃) = 1 − η");
    let mut worst = 0.0f64;
    for trial in 0..100u64 {
        let mut rng = child_rng(4242, trial);
        let n = 3 + (trial as usize) % 4;
        let e = random_ensemble(n, 2 + (trial as usize) % 6, &mut rng);
        for d in 1..n {
            let pe = project_ensemble(&e, d).unwrap();
            let avg = sqrt_fid_projected_average(&pe, &e).unwrap();
            worst = worst.max((avg - (1.0 - pe.eta())).abs());
        }
    }
    c.finish(worst < 1e-10, format!("max deviation = {worst:.3e}"));
}

/// 6. Bound-chain fuzz: 10⁴ random (ensemble, arbitrary encoding, CPTP
///    decoder) trials with zero violations of F ≤ (3+2√2)η + 1e-9 and the
///    per-trial chain X ≤ η, |Y − 2η| < 1e-9, Z ≤ 2√(XY). Runtime < 2 min.
#[test]
fn criterion_06_lemma_fuzz() {
    let c = Criterion::new(6, "10⁴-trial fuzz of F ≤ (3+2√2)η and the X/Y/Z chain");
    let config = FuzzConfig::new(10_000, 42, FuzzConfig::default_dims());
    let report = fuzz_bound(&config).unwrap();
    let in_time = c.started.elapsed().as_secs_f64() < 120.0;
    let pass = report.passed() && in_time;
    c.finish(
        pass,
        format!(
            "{} violations, max F/η = {:.6}, in_time = {in_time}",
            report.violations.len(),
            report.max_ratio
        ),
    );
}

/// 7. Fidelity-inequality fuzz: 10⁴ random triples (dims 2–4, the first
///    two states subnormalized with traces in [0.3, 1]) satisfy the bound
///    within 1e-9, in both the unit-trace and subnormalized-third-state
///    forms. Runtime < 1 min.
#[test]
fn criterion_07_inequality_fuzz() {
    let c = Criterion::new(7, "10⁴-triple fuzz of the fidelity inequality");
    let report = fuzz_inequality(10_000, 42, &[2, 3, 4]).unwrap();
    let in_time = c.started.elapsed().as_secs_f64() < 60.0;
    let pass = report.passed()
        && report.min_margin >= -1e-9
        && report.min_margin_subnormalized >= -1e-9
        && in_time;
    c.finish(
        pass,
        format!(
            "{} violations, min margin = {:.3e} / {:.3e} (subnormalized)",
            report.violations, report.min_margin, report.min_margin_subnormalized
        ),
    );
}

/// 8. Closed-form fidelity vs the purification-maximization oracle: within
///    1e-6 on 200 random pairs of dims 2–4, oracle never above the closed
///    form beyond 1e-9. Runtime < 1 min.
#[test]
fn criterion_08_oracle_agreement() {
    let c = Criterion::new(8, "closed-form fidelity vs purification oracle");
    let mut worst_gap = 0.0f64;
    let mut worst_over = f64::NEG_INFINITY;
    for trial in 0..200u64 {
        let mut rng = child_rng(888, trial);
        let dim = 2 + (trial as usize) % 3;
        let t1 = 0.3 + 0.7 * rand::Rng::gen::<f64>(&mut rng);
        let a = random_density::<f64, _>(dim, 1 + (trial as usize) % dim, &mut rng)
            .unwrap()
            .with_trace(t1)
            .unwrap();
        let b = random_density::<f64, _>(dim, dim, &mut rng).unwrap();
        let closed = fidelity_general(&a, &b).unwrap().value();
        let oracle = fidelity_oracle(&a, &b, 20, 5, &mut rng).unwrap().value();
        worst_gap = worst_gap.max((closed - oracle).abs());
        worst_over = worst_over.max(oracle - closed);
    }
    let in_time = c.started.elapsed().as_secs_f64() < 60.0;
    let pass = worst_gap < 1e-6 && worst_over <= 1e-9 && in_time;
    c.finish(
        pass,
        format!("max |closed − oracle| = {worst_gap:.3e}, max overshoot = {worst_over:.3e}"),
    );
}

/// 9. Converse sweep for spectrum (0.9, 0.1), δ = 0.1, N = 1..200:
///    Σ_d ≤ ε_N + 2^{−Nδ} at every N, Σ_d(200) < ½·Σ_d(20), and the two
///    frozen golden values reproduce. Runtime < 10 s.
#[test]
fn criterion_09_converse_sweep() {
    let c = Criterion::new(9, "converse sweep Σ_d ≤ ε_N + 2^{−Nδ}, N = 1..200");
    let base = Spectrum::new(vec![0.9f64, 0.1]).unwrap();
    let rows = converse_sweep(&base, 0.1, 1..=200, DimensionRule::FloorOfPower).unwrap();
    let all_hold = rows.iter().all(ConverseRow::holds);
    let s20 = rows[19].sigma_d;
    let s200 = rows[199].sigma_d;
    let decays = s200 < 0.5 * s20;
    // golden values from the first verified combinatorial enumeration
    let golden = (s20 - 0.4217659251846).abs() < 1e-9 && (s200 - 6.450312678852e-3).abs() < 1e-12;
    let in_time = c.started.elapsed().as_secs_f64() < 10.0;
    let pass = all_hold && decays && golden && in_time;
    c.finish(
        pass,
        format!("rows hold = {all_hold}, Σ_d(20) = {s20:.10}, Σ_d(200) = {s200:.6e}"),
    );
}

/// 10. Cross-module spectral consistency: dense η(ρ^N, d) equals the
///     combinatorial Σ_d within 1e-9 for base (0.9, 0.1), N ≤ 5, all d.
#[test]
fn criterion_10_dense_vs_combinatorial() {
    let c = Criterion::new(10, "dense η(ρ^N, d) = combinatorial Σ_d");
    let base = Spectrum::new(vec![0.9f64, 0.1]).unwrap();
    let source = SourceEnsemble::new(vec![
        (0.9, Pure64::basis(2, 0).unwrap()),
        (0.1, Pure64::basis(2, 1).unwrap()),
    ])
    .unwrap();
    let mut worst = 0.0f64;
    for n in 1..=5u32 {
        let rho_n = block_ensemble(&source, n).unwrap().density();
        let ps = product_spectrum(&base, n).unwrap();
        for d in 1..=2usize.pow(n) {
            let dense = eta(&rho_n, d);
            let comb = sigma_d(&ps, d as f64).unwrap();
            worst = worst.max((dense - comb).abs());
        }
    }
    c.finish(worst < 1e-9, format!("max |η − Σ_d| = {worst:.3e}"));
}

/// 11. Scope note: the asymptotic coding statements (fidelity → 1 above the
///     entropy rate, → 0 below) are not desk-scale reproducible as stated;
///     they are covered exactly by the finite-N inequalities of criteria 6
///     and 9. This criterion re-checks the finite-N facts those proofs
///     actually rest on, at a second parameter point.
#[test]
fn criterion_11_finite_n_scope() {
    let c = Criterion::new(11, "finite-N surrogates for the asymptotic statements");
    // below-entropy rate: the Σ_d ceiling forces low fidelity for large N
    let base = Spectrum::new(vec![0.8f64, 0.2]).unwrap();
    let rows = converse_sweep(&base, 0.05, 1..=150, DimensionRule::FloorOfPower).unwrap();
    let all_hold = rows.iter().all(ConverseRow::holds);
    let ceiling_drops = rows[149].six_sigma_d < rows[49].six_sigma_d;
    // above-entropy rate at finite N: top-d with d = 2^N keeps F = 1, and
    // even d < 2^N at high rate keeps F = η close to 1
    let source = SourceEnsemble::new(vec![
        (0.8, Pure64::basis(2, 0).unwrap()),
        (0.2, Pure64::basis(2, 1).unwrap()),
    ])
    .unwrap();
    let block = block_ensemble(&source, 4).unwrap();
    let rho = block.density();
    // η(ρ^4, 14) = 1 − 0.2⁴ − 0.8·0.2³ = 0.992 for this base
    let f_high_rate = average_fidelity(
        &block,
        &with_identity_decoder(topd_encoder(&block, 14).unwrap()),
    )
    .unwrap();
    let achievable_close = (f_high_rate - eta(&rho, 14)).abs() < 1e-10 && f_high_rate > 0.99;
    let pass = all_hold && ceiling_drops && achievable_close;
    c.finish(
        pass,
        format!(
            "rows hold = {all_hold}, 6Σ_d(150) = {:.3e}, F(top-14, N=4) = {f_high_rate:.6}",
            rows[149].six_sigma_d
        ),
    );
}

/// Sanity pin for criterion 6's companion claim: a random CPTP decoder on a
/// top-d encoding can be checked with the exact same machinery the fuzz
/// campaigns use, and the known tight point F/η = 1 is reproduced by the
/// identity decoder.
#[test]
fn tight_point_ratio_is_one() {
    let c = Criterion::new(6, "tight point: top-d + identity gives F/η = 1");
    let mut worst = 0.0f64;
    for trial in 0..50u64 {
        let mut rng = child_rng(606, trial);
        let n = 3 + (trial as usize) % 4;
        let d = 1 + (trial as usize) % (n - 1);
        let e = random_ensemble(n, 3, &mut rng);
        let rho = e.density();
        let f = average_fidelity(&e, &with_identity_decoder(topd_encoder(&e, d).unwrap())).unwrap();
        worst = worst.max((f / eta(&rho, d) - 1.0).abs());
        // and a random decoder stays within the lemma ceiling
        let dec = random_channel::<f64, _>(n, n, n, &mut rng).unwrap();
        let f_rand = average_fidelity(
            &e,
            &CodingScheme::new(topd_encoder(&e, d).unwrap(), dec).unwrap(),
        )
        .unwrap();
        assert!(f_rand <= (3.0 + 2.0 * 2f64.sqrt()) * eta(&rho, d) + 1e-9);
    }
    c.finish(worst < 1e-9, format!("max |F/η − 1| = {worst:.3e}"));
}
