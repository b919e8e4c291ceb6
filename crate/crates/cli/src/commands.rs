use std::path::PathBuf;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use fidlim::blocking::{
    block_ensemble, converse_sweep, product_spectrum, sigma_d, ConverseRow, DimensionRule, Spectrum,
};
use fidlim::child_rng;
use fidlim::coding::{
    appendix_ensemble, average_fidelity, eta, fuzz_bound as run_fuzz_bound,
    fuzz_inequality as run_fuzz_inequality, fuzz_trial, optimize_planar_tilt,
    optimize_unitary_decoder, with_identity_decoder, CodingScheme, FuzzConfig, FuzzReport,
    OptMethod,
};

use crate::report::{envelope, to_json, write_file};
use crate::{Format, OutputArgs, EXIT_OK, EXIT_VIOLATION};

fn require_json(output: &OutputArgs) -> anyhow::Result<()> {
    if output.format == Some(Format::Csv) {
        bail!("this command only emits JSON reports");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// appendix

#[derive(Debug, Serialize)]
struct AppendixConfig {
    seed: u64,
    restarts: usize,
}

#[derive(Debug, Serialize)]
struct DecoderSearch {
    fidelity: f64,
    angle_deg: Option<f64>,
}

#[derive(Debug, Serialize)]
struct AppendixBody {
    #[serde(rename = "F_identity")]
    f_identity: f64,
    #[serde(rename = "F_measure_prepare")]
    f_measure_prepare: f64,
    best_unitary: DecoderSearch,
    best_unitary_angle_deg: Option<f64>,
    planar_tilt: DecoderSearch,
    eta_d2: f64,
    six_eta: f64,
    sharp_bound: f64,
    unitary_gain_over_identity: f64,
    nonunitary_beats_best_unitary: bool,
}

pub fn appendix(restarts: usize, seed: u64, output: &OutputArgs) -> anyhow::Result<u8> {
    require_json(output)?;
    let (ensemble, encoding, mp) = appendix_ensemble::<f64>()?;

    let f_identity = average_fidelity(&ensemble, &with_identity_decoder(encoding.clone()))?;
    let mp_scheme = CodingScheme::new(encoding.clone(), mp.as_kraus()?)?;
    let f_mp = average_fidelity(&ensemble, &mp_scheme)?;

    let mut rng = child_rng(seed, 0);
    let best = optimize_unitary_decoder(&ensemble, &encoding, OptMethod::Auto, restarts, &mut rng)?;
    let (tilt_angle, tilt_f) = optimize_planar_tilt(&ensemble, &encoding, [1.0, -1.0, 0.0])?;

    let rho = ensemble.density();
    let eta2 = eta(&rho, 2);

    let body = AppendixBody {
        f_identity,
        f_measure_prepare: f_mp,
        best_unitary: DecoderSearch {
            fidelity: best.fidelity,
            angle_deg: best.rotation_angle_deg,
        },
        best_unitary_angle_deg: best.rotation_angle_deg,
        planar_tilt: DecoderSearch {
            fidelity: tilt_f,
            angle_deg: Some(tilt_angle.to_degrees().abs()),
        },
        eta_d2: eta2,
        six_eta: 6.0 * eta2,
        sharp_bound: (3.0 + 2.0 * 2f64.sqrt()) * eta2,
        unitary_gain_over_identity: best.fidelity - f_identity,
        nonunitary_beats_best_unitary: f_mp > best.fidelity,
    };

    println!("F(identity decoder)        = {:.6}", body.f_identity);
    println!("F(measure-prepare decoder) = {:.6}", body.f_measure_prepare);
    println!(
        "F(best unitary decoder)    = {:.6}  (angle {} deg, gain {:.3e})",
        body.best_unitary.fidelity,
        body.best_unitary_angle_deg
            .map(|a| format!("{:.4}", a))
            .unwrap_or_else(|| "n/a".into()),
        body.unitary_gain_over_identity
    );
    println!(
        "planar tilt toward |a2>    = {:.6}  (angle {:.4} deg)",
        body.planar_tilt.fidelity,
        body.planar_tilt.angle_deg.unwrap()
    );
    println!(
        "eta(d=2) = {:.6}   6*eta = {:.4}   (3+2sqrt2)*eta = {:.4}",
        body.eta_d2, body.six_eta, body.sharp_bound
    );
    println!(
        "verdict: the nonunitary decoder {} every unitary decoder",
        if body.nonunitary_beats_best_unitary {
            "beats"
        } else {
            "does NOT beat"
        }
    );

    let wrapped = envelope("appendix", AppendixConfig { seed, restarts }, body);
    if let Some(path) = &output.out {
        write_file(path, &to_json(&wrapped)?)?;
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// fuzz-bound

#[derive(Debug, Serialize, Deserialize)]
struct StoredFuzzReport {
    config: FuzzConfig,
    #[serde(flatten)]
    report: FuzzReport,
}

pub fn fuzz_bound(
    trials: u64,
    seed: u64,
    dims: Option<Vec<(usize, usize)>>,
    allow_vacuous: bool,
    replay: Option<PathBuf>,
    trial: Option<u64>,
    output: &OutputArgs,
) -> anyhow::Result<u8> {
    require_json(output)?;
    if let Some(path) = replay {
        return replay_fuzz(&path, trial);
    }
    if trials == 0 {
        bail!("--trials must be at least 1");
    }
    let dims = dims.unwrap_or_else(FuzzConfig::default_dims);
    if dims.is_empty() {
        bail!("--dims must name at least one n:d pair");
    }
    for &(n, d) in &dims {
        if n == 0 || d == 0 {
            bail!("dimensions must be positive, got {n}:{d}");
        }
        if d >= n && !allow_vacuous {
            bail!("pair {n}:{d} has d >= n; pass --allow-vacuous to include it");
        }
    }

    let config = FuzzConfig::new(trials, seed, dims);
    let report = run_fuzz_bound(&config)?;
    let passed = report.passed();
    println!(
        "fuzz-bound: {} trials, {} violations, max F/eta ratio {:.6}",
        report.trials,
        report.violations.len(),
        report.max_ratio
    );

    let wrapped = envelope("fuzz-bound", config, report);
    if let Some(path) = &output.out {
        write_file(path, &to_json(&wrapped)?)?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_VIOLATION })
}

fn replay_fuzz(path: &PathBuf, trial: Option<u64>) -> anyhow::Result<u8> {
    let raw =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let stored: StoredFuzzReport =
        serde_json::from_str(&raw).with_context(|| "report file does not parse")?;
    let trials: Vec<u64> = match trial {
        Some(t) => vec![t],
        None => stored.report.violations.iter().map(|v| v.trial).collect(),
    };
    if trials.is_empty() {
        println!("replay: no recorded violations in {}", path.display());
        return Ok(EXIT_OK);
    }
    let mut violated = false;
    for t in trials {
        if t >= stored.config.trials {
            bail!("trial {t} outside the campaign of {}", stored.config.trials);
        }
        let out = fuzz_trial::<f64>(&stored.config, t)?;
        let holds = out.chain_holds(fidlim::coding::BOUND_SLACK);
        violated |= !holds;
        println!(
            "replay trial {t}: F={:.12} eta={:.12} X={:.3e} Y={:.12} Z={:.3e} chain_holds={}",
            out.f_bar, out.eta, out.x_bar, out.y_bar, out.z_bar, holds
        );
    }
    Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
}

// ---------------------------------------------------------------------------
// fuzz-inequality

#[derive(Debug, Serialize)]
struct InequalityConfig {
    trials: u64,
    seed: u64,
    dims: Vec<usize>,
}

pub fn fuzz_inequality(
    trials: u64,
    seed: u64,
    dims: Vec<usize>,
    output: &OutputArgs,
) -> anyhow::Result<u8> {
    require_json(output)?;
    if trials == 0 {
        bail!("--trials must be at least 1");
    }
    if dims.is_empty() || dims.iter().any(|&d| d == 0 || d > 6) {
        bail!("--dims must list dimensions in 1..=6");
    }
    let report = run_fuzz_inequality(trials, seed, &dims)?;
    let passed = report.passed();
    println!(
        "fuzz-inequality: {} trials, {} violations, min margin {:.3e} (subnormalized {:.3e}), max margin {:.3e}",
        report.trials,
        report.violations,
        report.min_margin,
        report.min_margin_subnormalized,
        report.max_margin
    );
    let wrapped = envelope(
        "fuzz-inequality",
        InequalityConfig { trials, seed, dims },
        report,
    );
    if let Some(path) = &output.out {
        write_file(path, &to_json(&wrapped)?)?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_VIOLATION })
}

// ---------------------------------------------------------------------------
// converse

#[derive(Debug, Serialize)]
struct ConverseConfig {
    spectrum: Vec<f64>,
    delta: f64,
    n_start: u32,
    n_end: u32,
    rule: DimensionRule,
    seed: u64,
}

fn converse_csv(config: &ConverseConfig, rows: &[ConverseRow<f64>]) -> String {
    let mut s = String::new();
    s.push_str(&format!("# tool_version={}\n", env!("CARGO_PKG_VERSION")));
    s.push_str("# command=converse\n");
    s.push_str(&format!("# seed={}\n", config.seed));
    s.push_str(&format!(
        "# config={}\n",
        serde_json::to_string(config).expect("config serializes")
    ));
    s.push_str("N,d,entropy,epsilon_N,two_pow_neg_Ndelta,sigma_d,bound,six_sigma_d\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.block_len,
            r.d,
            r.entropy,
            r.epsilon,
            r.two_pow_neg_ndelta,
            r.sigma_d,
            r.bound,
            r.six_sigma_d
        ));
    }
    s
}

pub fn converse(
    spectrum: Vec<f64>,
    delta: f64,
    n_range: (u32, u32),
    literal_qubits: bool,
    seed: u64,
    output: &OutputArgs,
) -> anyhow::Result<u8> {
    let base =
        Spectrum::new(spectrum.clone()).map_err(|e| anyhow::anyhow!("invalid --spectrum: {e}"))?;
    if delta <= 0.0 {
        bail!("--delta must be positive");
    }
    let rule = if literal_qubits {
        DimensionRule::PowerOfFloor
    } else {
        DimensionRule::FloorOfPower
    };
    let rows = converse_sweep(&base, delta, n_range.0..=n_range.1, rule)?;
    let all_hold = rows.iter().all(ConverseRow::holds);
    let last = rows.last().expect("range is nonempty");
    println!(
        "converse: N={}..{}, S={:.6}; sigma_d at N={} is {:.6e}; every row satisfies sigma_d <= eps_N + 2^-Ndelta: {}",
        n_range.0, n_range.1, last.entropy, last.block_len, last.sigma_d, all_hold
    );

    let config = ConverseConfig {
        spectrum,
        delta,
        n_start: n_range.0,
        n_end: n_range.1,
        rule,
        seed,
    };
    match output.format {
        Some(Format::Json) => {
            let wrapped = envelope("converse", &config, serde_json::json!({ "rows": rows }));
            if let Some(path) = &output.out {
                write_file(path, &to_json(&wrapped)?)?;
            }
        }
        _ => {
            let csv = converse_csv(&config, &rows);
            if let Some(path) = &output.out {
                write_file(path, &csv)?;
            }
        }
    }
    Ok(if all_hold { EXIT_OK } else { EXIT_VIOLATION })
}

// ---------------------------------------------------------------------------
// block-demo

#[derive(Debug, Serialize)]
struct BlockDemoConfig {
    n_block: u32,
    d: u64,
    trials: u64,
    seed: u64,
    base: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct BlockDemoBody {
    block_signals: usize,
    block_dim: usize,
    #[serde(rename = "F_topd_identity")]
    f_topd_identity: f64,
    sigma_d: f64,
    eta_dense: f64,
    six_sigma_d: f64,
    random_decoder_max: f64,
    random_decoder_min: f64,
    topd_matches_sigma: bool,
    all_below_ceiling: bool,
}

pub fn block_demo(
    n_block: u32,
    d: u64,
    trials: u64,
    seed: u64,
    base: Vec<f64>,
    output: &OutputArgs,
) -> anyhow::Result<u8> {
    require_json(output)?;
    if n_block == 0 || n_block > 5 {
        bail!("--N must be in 1..=5 for the dense demo");
    }
    let base_spectrum =
        Spectrum::new(base.clone()).map_err(|e| anyhow::anyhow!("invalid --base: {e}"))?;
    let m = base.len();
    let signals = base_spectrum
        .values()
        .iter()
        .enumerate()
        .map(|(i, &p)| Ok((p, fidlim::Pure64::basis(m, i)?)))
        .collect::<fidlim::Result<Vec<_>>>()?;
    let source = fidlim::coding::SourceEnsemble::new(signals)?;
    let block = block_ensemble(&source, n_block)?;
    let block_dim = block.dim();
    if d == 0 || d as usize > block_dim {
        bail!("--d must be in 1..={}", block_dim);
    }

    let rho_n = block.density();
    let eta_dense = eta(&rho_n, d as usize);
    let ps = product_spectrum(&base_spectrum, n_block)?;
    let sigma = sigma_d(&ps, d as f64)?;

    let encoding = fidlim::coding::topd_encoder(&block, d as usize)?;
    let f_topd = average_fidelity(&block, &with_identity_decoder(encoding.clone()))?;

    let mut decoder_max = f64::NEG_INFINITY;
    let mut decoder_min = f64::INFINITY;
    for t in 0..trials {
        let mut rng = child_rng(seed, t);
        let decoder =
            fidlim::channels::random_channel::<f64, _>(block_dim, block_dim, block_dim, &mut rng)?;
        let scheme = CodingScheme::new(encoding.clone(), decoder)?;
        let f = average_fidelity(&block, &scheme)?;
        decoder_max = decoder_max.max(f);
        decoder_min = decoder_min.min(f);
    }

    let ceiling = 6.0 * sigma;
    let body = BlockDemoBody {
        block_signals: block.len(),
        block_dim,
        f_topd_identity: f_topd,
        sigma_d: sigma,
        eta_dense,
        six_sigma_d: ceiling,
        random_decoder_max: decoder_max,
        random_decoder_min: decoder_min,
        topd_matches_sigma: (f_topd - sigma).abs() < 1e-10,
        all_below_ceiling: f_topd <= ceiling + 1e-9 && decoder_max <= ceiling + 1e-9,
    };

    println!(
        "block-demo: N={} d={} ({} signals, dim {})",
        n_block, d, body.block_signals, body.block_dim
    );
    println!(
        "F(top-d, identity) = {:.12}   sigma_d = {:.12}   match: {}",
        body.f_topd_identity, body.sigma_d, body.topd_matches_sigma
    );
    println!(
        "random decoders in [{:.6}, {:.6}], ceiling 6*sigma_d = {:.6}",
        body.random_decoder_min, body.random_decoder_max, body.six_sigma_d
    );

    let ok = body.topd_matches_sigma && body.all_below_ceiling;
    let wrapped = envelope(
        "block-demo",
        BlockDemoConfig {
            n_block,
            d,
            trials,
            seed,
            base,
        },
        body,
    );
    if let Some(path) = &output.out {
        write_file(path, &to_json(&wrapped)?)?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
}
