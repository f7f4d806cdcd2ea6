//! θ sweeps over the second strategy and the numerical checks of the even-side
//! sign-flip identity.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{classify, run_trace, ParadoxKind, ParadoxVerdict, Schedule};
use crate::operators::{CoinParams, WalkOperator};
use crate::state::{LatticeSpec, MarkedSet, Measure, StateVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub lattice: LatticeSpec,
    /// Marked positions on every axis; the marked vertices are their product.
    pub axis_marks: Vec<usize>,
    pub coin1: CoinParams,
    /// θ of this coin is replaced by the sweep variable.
    pub coin2_base: CoinParams,
    pub schedule: (usize, usize),
    pub horizon: usize,
    pub resolution: usize,
    pub guard: f64,
    #[serde(default)]
    pub measure: Measure,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::config(
                "resolution",
                format!("need at least 2 grid points, got {}", self.resolution),
            ));
        }
        if self.horizon == 0 {
            return Err(Error::ZeroHorizon);
        }
        if self.schedule.0 + self.schedule.1 == 0 {
            return Err(Error::EmptySchedule);
        }
        self.marked_set().map(|_| ())
    }

    /// `θ_k = 2πk / resolution`.
    pub fn theta(&self, k: usize) -> f64 {
        TAU * k as f64 / self.resolution as f64
    }

    pub fn marked_set(&self) -> Result<MarkedSet> {
        Ok(MarkedSet::product(&self.lattice, &self.axis_marks)?.with_measure(self.measure))
    }

    pub fn walk1(&self) -> Result<WalkOperator> {
        WalkOperator::search(self.lattice, self.coin1, &self.axis_marks)
    }

    pub fn walk2(&self, theta: f64) -> Result<WalkOperator> {
        WalkOperator::search(self.lattice, self.coin2_base.with_theta(theta), &self.axis_marks)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    pub p10: f64,
    pub p01: f64,
    pub p_combo: f64,
    pub verdict: ParadoxVerdict,
}

/// One row per grid point, in grid order. `p̄_{(1,0)}` does not depend on θ
/// and is computed once. Grid points run on the current rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let marked = spec.marked_set()?;
    let baseline = marked.baseline(&spec.lattice);
    let initial = StateVector::uniform(spec.lattice);
    let walk1 = spec.walk1()?;
    let p10 = run_trace(
        &Schedule::single(walk1.clone(), 1)?,
        &initial,
        &marked,
        spec.horizon,
    )?
    .mean();
    let (n1, n2) = spec.schedule;

    (0..spec.resolution)
        .into_par_iter()
        .map(|k| {
            let theta = spec.theta(k);
            let walk2 = spec.walk2(theta)?;
            let p01 = run_trace(
                &Schedule::single(walk2.clone(), 1)?,
                &initial,
                &marked,
                spec.horizon,
            )?
            .mean();
            let combo = Schedule::new(n1, n2, walk1.clone(), walk2)?;
            let p_combo = run_trace(&combo, &initial, &marked, spec.horizon)?.mean();
            Ok(SweepRow {
                theta,
                p10,
                p01,
                p_combo,
                verdict: classify(p10, p01, p_combo, baseline, spec.guard),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryMismatch {
    pub index: usize,
    pub theta: f64,
    pub kind: ParadoxKind,
    pub shifted_kind: ParadoxKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub guard_margin: f64,
    pub pairs_checked: usize,
    /// Grid indices `k < resolution / 2` skipped because a probability at `θ_k`
    /// or `θ_k + π` sits within the margin of the baseline.
    pub excluded: Vec<usize>,
    pub mismatches: Vec<SymmetryMismatch>,
}

impl SymmetryReport {
    pub fn is_symmetric(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares verdicts at `θ_k` and `θ_k + π` over a sweep with an even number
/// of grid points.
pub fn check_sweep_symmetry(rows: &[SweepRow], guard_margin: f64) -> Result<SymmetryReport> {
    if !rows.len().is_multiple_of(2) || rows.is_empty() {
        return Err(Error::Precondition(format!(
            "symmetry check needs an even, non-zero resolution; got {}",
            rows.len()
        )));
    }
    let half = rows.len() / 2;
    let near = |r: &SweepRow| {
        [r.p10, r.p01, r.p_combo]
            .iter()
            .any(|p| (p - r.verdict.baseline).abs() < guard_margin)
    };
    let mut report = SymmetryReport {
        guard_margin,
        pairs_checked: 0,
        excluded: Vec::new(),
        mismatches: Vec::new(),
    };
    for k in 0..half {
        let (a, b) = (&rows[k], &rows[k + half]);
        if near(a) || near(b) {
            report.excluded.push(k);
            continue;
        }
        report.pairs_checked += 1;
        if a.verdict.kind != b.verdict.kind {
            report.mismatches.push(SymmetryMismatch {
                index: k,
                theta: a.theta,
                kind: a.verdict.kind,
                shifted_kind: b.verdict.kind,
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremOptions {
    /// Random initial states in addition to the uniform one.
    pub random_states: usize,
    pub seed: u64,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        Self {
            random_states: 20,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub dim: usize,
    pub side: usize,
    pub coin1: CoinParams,
    pub coin2: CoinParams,
    pub tmax: usize,
    pub states_checked: usize,
    /// `"vertex"` (full coin sum, `d = 1`) or `"diagonal"` (`d ≥ 2`).
    pub quantity: &'static str,
    pub max_difference: f64,
    /// Block index at which `max_difference` was attained.
    pub worst_t: usize,
}

/// Success probability at the origin whose invariance is being checked.
fn origin_quantity(state: &StateVector) -> f64 {
    let origin = vec![0; state.lattice().dim()];
    let q = if state.lattice().dim() == 1 {
        state.vertex_probability(&origin)
    } else {
        state.diagonal_coin_probability(&origin)
    };
    q.expect("origin is always in range")
}

/// Largest `|q((U₂U₁)^t ψ) − q((Ũ₂U₁)^t ψ)|` over `t = 1..=tmax` and the given
/// initial states, where `q` is the origin quantity. No parity precondition,
/// so odd sides can be probed too. Returns `(difference, t)`.
pub fn theorem_gap(
    lattice: LatticeSpec,
    coin1: CoinParams,
    coin2: CoinParams,
    tmax: usize,
    initial_states: &[StateVector],
) -> Result<(f64, usize)> {
    let w1 = WalkOperator::search(lattice, coin1, &[0])?;
    let w2 = WalkOperator::search(lattice, coin2, &[0])?;
    let plain = Schedule::new(1, 1, w1.clone(), w2.clone())?;
    let flipped = Schedule::new(1, 1, w1, w2.negate_unmarked())?;
    let mut scratch = Vec::new();
    let mut worst = (0.0f64, 0usize);
    for psi in initial_states {
        let mut a = psi.clone();
        let mut b = psi.clone();
        for t in 1..=tmax {
            plain.apply_block(&mut a, &mut scratch)?;
            flipped.apply_block(&mut b, &mut scratch)?;
            let diff = (origin_quantity(&a) - origin_quantity(&b)).abs();
            if diff > worst.0 {
                worst = (diff, t);
            }
        }
    }
    Ok(worst)
}

/// Checks that the origin success probability of `U₂U₁` and `Ũ₂U₁` agree for
/// every block up to `tmax`, from the uniform state and from
/// `opts.random_states` seeded random states. Needs an even side.
pub fn verify_theorem(
    lattice: LatticeSpec,
    coin1: CoinParams,
    coin2: CoinParams,
    tmax: usize,
    opts: &TheoremOptions,
) -> Result<TheoremReport> {
    if !lattice.side().is_multiple_of(2) {
        return Err(Error::OddSide(lattice.side()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let states: Vec<StateVector> = std::iter::once(StateVector::uniform(lattice))
        .chain((0..opts.random_states).map(|_| StateVector::random(lattice, &mut rng)))
        .collect();
    let (max_difference, worst_t) = theorem_gap(lattice, coin1, coin2, tmax, &states)?;
    Ok(TheoremReport {
        dim: lattice.dim(),
        side: lattice.side(),
        coin1,
        coin2,
        tmax,
        states_checked: states.len(),
        quantity: if lattice.dim() == 1 { "vertex" } else { "diagonal" },
        max_difference,
        worst_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use std::f64::consts::PI;

    fn lat(d: usize, n: usize) -> LatticeSpec {
        LatticeSpec::new(d, n).unwrap()
    }

    fn random_coin(rng: &mut impl Rng) -> CoinParams {
        CoinParams::new(
            rng.random::<f64>() * TAU,
            rng.random::<f64>() * TAU,
            rng.random::<f64>() * TAU,
        )
    }

    fn spec(l: LatticeSpec, coin1: CoinParams, coin2: CoinParams, res: usize, horizon: usize) -> SweepSpec {
        SweepSpec {
            lattice: l,
            axis_marks: vec![0],
            coin1,
            coin2_base: coin2,
            schedule: (1, 1),
            horizon,
            resolution: res,
            guard: 0.0,
            measure: Measure::Full,
        }
    }

    #[test]
    fn smoke_sweep() {
        let s = spec(
            lat(1, 2),
            CoinParams::new(0.3, 0.4, 0.5),
            CoinParams::new(1.0, 2.0, 0.0),
            4,
            50,
        );
        let rows = run_sweep(&s).unwrap();
        assert_eq!(rows.len(), 4);
        for (k, r) in rows.iter().enumerate() {
            assert_eq!(r.theta, TAU * k as f64 / 4.0);
            for p in [r.p10, r.p01, r.p_combo] {
                assert!((0.0..=1.0).contains(&p));
            }
            assert_eq!(r.p10, rows[0].p10);
        }
    }

    #[test]
    fn resolution_and_schedule_checks() {
        let mut s = spec(
            lat(1, 4),
            CoinParams::new(0.3, 0.4, 0.5),
            CoinParams::new(1.0, 2.0, 0.0),
            1,
            10,
        );
        assert!(matches!(run_sweep(&s), Err(Error::Config { .. })));
        s.resolution = 4;
        s.schedule = (0, 0);
        assert!(matches!(run_sweep(&s), Err(Error::EmptySchedule)));
        s.schedule = (1, 1);
        s.axis_marks = vec![9];
        assert!(run_sweep(&s).is_err());
    }

    #[test]
    fn identical_strategies_collapse_to_single_strategy() {
        let l = lat(1, 10);
        let coin = CoinParams::new(PI / 3.0, PI / 3.0, PI / 2.0);
        let s = spec(l, coin, coin, 4, 300);
        let rows = run_sweep(&s).unwrap();
        // θ₁ = π/2 is grid point 1
        let row = rows[1];
        let m = MarkedSet::origin(&l);
        let w = WalkOperator::search(l, coin, &[0]).unwrap();
        let squared = run_trace(
            &Schedule::single(w, 2).unwrap(),
            &StateVector::uniform(l),
            &m,
            300,
        )
        .unwrap();
        assert_eq!(row.p_combo, squared.mean());
        assert_eq!(row.p01, row.p10);
        assert_eq!(row.verdict.kind, ParadoxKind::None);
    }

    #[test]
    fn symmetry_requires_even_resolution() {
        let s = spec(
            lat(1, 4),
            CoinParams::new(0.3, 0.4, 0.5),
            CoinParams::new(1.0, 2.0, 0.0),
            3,
            10,
        );
        let rows = run_sweep(&s).unwrap();
        assert!(matches!(
            check_sweep_symmetry(&rows, 1e-4),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn symmetric_sweep_even_side() {
        let s = spec(
            lat(1, 10),
            CoinParams::new(4.0 * PI / 12.0, 5.0 * PI / 12.0, 23.0 * PI / 12.0),
            CoinParams::new(4.0 * PI / 12.0, 5.0 * PI / 12.0, 0.0),
            24,
            1000,
        );
        let rows = run_sweep(&s).unwrap();
        let report = check_sweep_symmetry(&rows, 1e-4).unwrap();
        assert!(report.is_symmetric(), "{report:?}");
        assert_eq!(rows[0].verdict.kind, rows[12].verdict.kind);
        // the combined strategy is exactly symmetric; the single one is not
        for k in 0..12 {
            assert!((rows[k].p_combo - rows[k + 12].p_combo).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_measure_sweep_is_symmetric_in_two_dimensions() {
        let mut s = spec(
            lat(2, 16),
            CoinParams::new(4.0 * PI / 12.0, 5.0 * PI / 12.0, 23.0 * PI / 12.0),
            CoinParams::new(4.0 * PI / 12.0, 5.0 * PI / 12.0, 0.0),
            36,
            1000,
        );
        s.measure = Measure::Diagonal;
        let rows = run_sweep(&s).unwrap();
        let report = check_sweep_symmetry(&rows, 1e-4).unwrap();
        assert!(report.is_symmetric(), "{report:?}");
        assert!(rows.iter().any(|r| r.verdict.kind == ParadoxKind::Positive));
        assert!(rows.iter().all(|r| r.verdict.kind != ParadoxKind::Negative));
    }

    #[test]
    fn theorem_holds_for_even_sides() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let opts = TheoremOptions {
            random_states: 3,
            seed: 1,
        };
        let r = verify_theorem(
            lat(1, 10),
            random_coin(&mut rng),
            random_coin(&mut rng),
            500,
            &opts,
        )
        .unwrap();
        assert!(r.max_difference < 1e-10, "{r:?}");
        assert_eq!(r.states_checked, 4);
        assert_eq!(r.quantity, "vertex");
        let r = verify_theorem(
            lat(2, 4),
            random_coin(&mut rng),
            random_coin(&mut rng),
            200,
            &opts,
        )
        .unwrap();
        assert!(r.max_difference < 1e-10, "{r:?}");
        assert_eq!(r.quantity, "diagonal");
    }

    #[test]
    fn theorem_fails_for_odd_side() {
        let l = lat(1, 9);
        assert!(matches!(
            verify_theorem(
                l,
                CoinParams::new(0.1, 0.2, 0.3),
                CoinParams::new(0.1, 0.2, 0.3),
                5,
                &TheoremOptions::default()
            ),
            Err(Error::OddSide(9))
        ));
        // coarse grid search for a counterexample
        let grid = [0.5, 1.7, 2.9, 4.1, 5.3];
        let uniform = [StateVector::uniform(l)];
        let mut found = 0.0f64;
        'outer: for &a in &grid {
            for &b in &grid {
                for &t in &grid {
                    let c1 = CoinParams::new(a, b, t);
                    let c2 = CoinParams::new(b, a, t + 1.0);
                    found = found.max(theorem_gap(l, c1, c2, 50, &uniform).unwrap().0);
                    if found > 1e-3 {
                        break 'outer;
                    }
                }
            }
        }
        assert!(found > 1e-3, "{found}");
    }

    #[test]
    fn theorem_gap_does_not_grow_with_horizon() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let l = lat(1, 6);
        let (c1, c2) = (random_coin(&mut rng), random_coin(&mut rng));
        let states = [StateVector::uniform(l), StateVector::random(l, &mut rng)];
        for tmax in [10, 100, 1000] {
            let (gap, _) = theorem_gap(l, c1, c2, tmax, &states).unwrap();
            assert!(gap <= 1e-12 * tmax as f64, "{tmax}: {gap}");
        }
    }
}
