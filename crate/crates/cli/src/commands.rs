use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use parrondo_qw::config::RunConfig;
use parrondo_qw::game::play;
use parrondo_qw::oracle::{
    check_parity_zeros, compare_block_and_dense, compare_fast_and_dense, DEFAULT_DENSE_CAP,
};
use parrondo_qw::report::{self, SimulateSummary, SweepSummary, VerifyReport};
use parrondo_qw::scan::{check_sweep_symmetry, run_sweep, verify_theorem};
use parrondo_qw::{CoinParams, Error, Schedule, StateVector, WalkOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::CommonArgs;

/// Amplitude tolerance for `oracle-check`.
const ORACLE_TOLERANCE: f64 = 1e-10;
const ORACLE_STEPS: usize = 50;
const ORACLE_RANDOM_COINS: usize = 20;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NormDrift { .. } | Error::Eigen(_) => 3,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn load(args: &CommonArgs) -> Result<RunConfig, Failure> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = RunConfig::from_toml_str(&text)?;
    if let Some(r) = args.resolution {
        cfg.game.resolution = r;
    }
    if let Some(seed) = args.seed {
        cfg.game.seed = seed;
    }
    cfg.validate()?;
    if let Some(g) = args.guard {
        if !(g.is_finite() && g >= 0.0) {
            return Err(Failure::new(
                2,
                format!("--guard must be a finite non-negative number, got {g}"),
            ));
        }
    }
    Ok(cfg)
}

fn out_dir(args: &CommonArgs, cfg: &RunConfig) -> PathBuf {
    args.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.output.dir))
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::new(1, format!("cannot start worker pool: {e}")))
}

/// Writes all files only after every one of them has been produced.
fn write_files(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::new(1, format!("cannot write to {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    for (name, bytes) in files {
        fs::write(dir.join(name), bytes).map_err(io)?;
    }
    Ok(())
}

fn walks(cfg: &RunConfig) -> Result<(WalkOperator, WalkOperator), Failure> {
    let lattice = cfg.lattice()?;
    Ok((
        WalkOperator::search(lattice, cfg.coin1()?, &cfg.game.marked)?,
        WalkOperator::search(lattice, cfg.coin2()?, &cfg.game.marked)?,
    ))
}

pub fn simulate(args: &CommonArgs) -> CmdResult {
    let cfg = load(args)?;
    let lattice = cfg.lattice()?;
    let marked = cfg.marked_set()?;
    let (w1, w2) = walks(&cfg)?;
    let guard = args.guard.unwrap_or(cfg.game.guard);
    let schedule = (cfg.game.n1, cfg.game.n2);
    let outcome =
        pool(args.threads)?.install(|| play(&w1, &w2, schedule, &marked, cfg.game.horizon, guard))?;

    let v = outcome.verdict;
    let summary = SimulateSummary {
        dim: lattice.dim(),
        side: lattice.side(),
        marked: cfg.game.marked.clone(),
        measure: cfg.game.measure,
        coin1: cfg.coin1()?,
        coin2: cfg.coin2()?,
        schedule,
        horizon: cfg.game.horizon,
        p10: v.p10,
        p01: v.p01,
        p_combo: v.p_combo,
        baseline: v.baseline,
        guard,
        verdict: v.kind,
        axes_homogeneous: w1.is_homogeneous() && w2.is_homogeneous(),
    };
    let fmt = cfg.output.format;
    let ext = fmt.extension();
    let files = vec![
        (format!("trace.{ext}"), report::trace_table(&outcome.combo, fmt)?),
        (
            format!("trace_u1.{ext}"),
            report::trace_table(&outcome.single1, fmt)?,
        ),
        (
            format!("trace_u2.{ext}"),
            report::trace_table(&outcome.single2, fmt)?,
        ),
        ("summary.json".to_string(), report::to_json(&summary)?),
    ];
    write_files(&out_dir(args, &cfg), &files)?;
    println!(
        "p10={} p01={} pCombo={} baseline={} verdict={}",
        v.p10, v.p01, v.p_combo, v.baseline, v.kind
    );
    Ok(0)
}

pub fn sweep(args: &CommonArgs) -> CmdResult {
    let cfg = load(args)?;
    let mut spec = cfg.sweep_spec()?;
    if let Some(g) = args.guard {
        spec.guard = g;
    }
    let rows = pool(args.threads)?.install(|| run_sweep(&spec))?;
    let mut summary = SweepSummary::new(spec.clone(), &rows);

    let origin_only = spec.axis_marks == [0];
    if origin_only && spec.lattice.side() % 2 == 0 && rows.len() % 2 == 0 {
        let half = rows.len() / 2;
        summary.symmetry = Some(check_sweep_symmetry(&rows, cfg.game.symmetry_margin)?);
        summary.max_theorem_violation = Some(
            (0..half)
                .map(|k| (rows[k].p_combo - rows[k + half].p_combo).abs())
                .fold(0.0, f64::max),
        );
    }

    let fmt = cfg.output.format;
    let files = vec![
        (
            format!("sweep.{}", fmt.extension()),
            report::sweep_table(&rows, fmt)?,
        ),
        ("summary.json".to_string(), report::to_json(&summary)?),
    ];
    write_files(&out_dir(args, &cfg), &files)?;
    println!(
        "rows={} positive={} negative={} none={}",
        rows.len(),
        summary.n_positive,
        summary.n_negative,
        summary.n_none
    );
    if let Some(sym) = &summary.symmetry {
        println!(
            "symmetry: {} pairs checked, {} excluded, {} mismatches",
            sym.pairs_checked,
            sym.excluded.len(),
            sym.mismatches.len()
        );
    }
    Ok(0)
}

pub fn verify(args: &CommonArgs) -> CmdResult {
    let cfg = load(args)?;
    let lattice = cfg.lattice()?;
    if lattice.side() % 2 != 0 {
        return Err(Failure::new(
            2,
            format!("verify needs an even side, got {}", lattice.side()),
        ));
    }
    if cfg.game.marked != [0] {
        return Err(Failure::new(
            2,
            "verify needs exactly position 0 marked (game.marked = [0])",
        ));
    }
    let (w1, w2) = walks(&cfg)?;
    let theorem = verify_theorem(
        lattice,
        cfg.coin1()?,
        cfg.coin2()?,
        cfg.game.verify_horizon,
        &cfg.theorem_options(),
    )?;
    let parity = if lattice.dim() == 1 {
        Some(check_parity_zeros(&w1, &w2, cfg.game.parity_horizon)?)
    } else {
        None
    };
    let passed = theorem.max_difference < cfg.game.threshold
        && parity
            .as_ref()
            .is_none_or(|p| p.max_violation < cfg.game.parity_threshold);
    let report = VerifyReport {
        theorem,
        parity,
        threshold: cfg.game.threshold,
        parity_threshold: cfg.game.parity_threshold,
        passed,
    };
    write_files(
        &out_dir(args, &cfg),
        &[("verify.json".into(), report::to_json(&report)?)],
    )?;
    if passed {
        println!(
            "theorem max difference {:e} over {} states",
            report.theorem.max_difference, report.theorem.states_checked
        );
        Ok(0)
    } else {
        eprintln!(
            "violation: theorem difference {:e} (threshold {:e}), parity {:?}",
            report.theorem.max_difference,
            report.threshold,
            report.parity.as_ref().map(|p| p.max_violation)
        );
        Ok(1)
    }
}

#[derive(Serialize)]
struct OracleReport {
    dim: usize,
    side: usize,
    configs_checked: usize,
    steps: usize,
    max_difference: f64,
    tolerance: f64,
    passed: bool,
}

pub fn oracle_check(args: &CommonArgs) -> CmdResult {
    let cfg = load(args)?;
    let lattice = cfg.lattice()?;
    if lattice.state_len() > DEFAULT_DENSE_CAP {
        return Err(Failure::new(
            2,
            format!(
                "state dimension {} exceeds the dense cap {DEFAULT_DENSE_CAP}",
                lattice.state_len()
            ),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.game.seed);
    let mut random_coin = || {
        CoinParams::new(
            rng.random::<f64>() * TAU,
            rng.random::<f64>() * TAU,
            rng.random::<f64>() * TAU,
        )
    };
    let mut pairs = vec![(cfg.coin1()?, cfg.coin2()?)];
    pairs.extend((0..ORACLE_RANDOM_COINS).map(|_| (random_coin(), random_coin())));

    let mut state_rng = ChaCha8Rng::seed_from_u64(cfg.game.seed.wrapping_add(1));
    let mut worst = 0.0f64;
    for (c1, c2) in &pairs {
        let w1 = WalkOperator::search(lattice, *c1, &cfg.game.marked)?;
        let w2 = WalkOperator::search(lattice, *c2, &cfg.game.marked)?;
        let schedule = Schedule::new(cfg.game.n1, cfg.game.n2, w1.clone(), w2.clone())?;
        let states = [
            StateVector::uniform(lattice),
            StateVector::random(lattice, &mut state_rng),
        ];
        for psi in &states {
            worst = worst
                .max(compare_fast_and_dense(&w1, psi, ORACLE_STEPS, DEFAULT_DENSE_CAP)?)
                .max(compare_fast_and_dense(&w2, psi, ORACLE_STEPS, DEFAULT_DENSE_CAP)?)
                .max(compare_block_and_dense(
                    &schedule,
                    psi,
                    ORACLE_STEPS,
                    DEFAULT_DENSE_CAP,
                )?);
        }
    }
    let report = OracleReport {
        dim: lattice.dim(),
        side: lattice.side(),
        configs_checked: pairs.len(),
        steps: ORACLE_STEPS,
        max_difference: worst,
        tolerance: ORACLE_TOLERANCE,
        passed: worst < ORACLE_TOLERANCE,
    };
    write_files(
        &out_dir(args, &cfg),
        &[("oracle.json".into(), report::to_json(&report)?)],
    )?;
    println!(
        "max amplitude difference {worst:e} over {} coin pairs",
        pairs.len()
    );
    Ok(if report.passed { 0 } else { 1 })
}
