//! The Parrondo game: block schedules, averaged success probabilities and the
//! positive/negative paradox classification.
//!
//! Time `t` counts blocks, i.e. powers of `U_{(n1,n2)} = (U₂)^{n2} (U₁)^{n1}`,
//! and the `t = 0` term (the initial state itself) is part of every average.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use nalgebra::linalg::Schur;
use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::WalkOperator;
use crate::oracle::{build_block, CMatrix, DEFAULT_DENSE_CAP};
use crate::state::{MarkedSet, StateVector};

/// Norm drift beyond which an evolution is reported as numerically broken.
pub const NORM_DRIFT_LIMIT: f64 = 1e-9;

/// `n1` steps of `walk1` followed by `n2` steps of `walk2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    n1: usize,
    n2: usize,
    walk1: WalkOperator,
    walk2: WalkOperator,
}

impl Schedule {
    pub fn new(n1: usize, n2: usize, walk1: WalkOperator, walk2: WalkOperator) -> Result<Self> {
        if n1 + n2 == 0 {
            return Err(Error::EmptySchedule);
        }
        if walk1.lattice() != walk2.lattice() {
            return Err(Error::ShapeMismatch("walks on different lattices".into()));
        }
        Ok(Self { n1, n2, walk1, walk2 })
    }

    /// `n` repetitions of a single strategy per block.
    pub fn single(walk: WalkOperator, n: usize) -> Result<Self> {
        Self::new(n, 0, walk.clone(), walk)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn walk1(&self) -> &WalkOperator {
        &self.walk1
    }

    pub fn walk2(&self) -> &WalkOperator {
        &self.walk2
    }

    /// The elementary steps of one block, in application order.
    fn steps(&self) -> impl Iterator<Item = &WalkOperator> {
        std::iter::repeat_n(&self.walk1, self.n1).chain(std::iter::repeat_n(&self.walk2, self.n2))
    }

    pub fn apply_block(&self, state: &mut StateVector, scratch: &mut Vec<Complex64>) -> Result<()> {
        for w in self.steps() {
            w.step_with(state, scratch)?;
        }
        Ok(())
    }
}

/// Success probability per block and its running mean.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityTrace {
    /// `p(t)` for `t = 0..T`.
    pub per_block: Vec<f64>,
    /// `p̄(t + 1) = (1 / (t + 1)) Σ_{u ≤ t} p(u)`.
    pub running_mean: Vec<f64>,
    pub horizon: usize,
    /// Success probability after every elementary step (`n1 + n2` per block),
    /// starting with the initial state. Only filled by
    /// [`run_trace_with_substeps`]; for plotting, never for averages.
    pub substeps: Option<Vec<f64>>,
}

impl ProbabilityTrace {
    /// `p̄_{(n1,n2)}(T)`.
    pub fn mean(&self) -> f64 {
        *self.running_mean.last().expect("horizon is at least 1")
    }
}

fn check_inputs(
    schedule: &Schedule,
    initial: &StateVector,
    marked: &MarkedSet,
    horizon: usize,
) -> Result<()> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    if initial.lattice() != schedule.walk1.lattice() {
        return Err(Error::ShapeMismatch(
            "initial state and schedule lattices differ".into(),
        ));
    }
    marked.check_lattice(initial.lattice())
}

fn trace_impl(
    schedule: &Schedule,
    initial: &StateVector,
    marked: &MarkedSet,
    horizon: usize,
    record_substeps: bool,
) -> Result<ProbabilityTrace> {
    check_inputs(schedule, initial, marked, horizon)?;
    let flats = marked.flat_indices(initial.lattice());
    let norm0 = initial.norm_sqr();
    let mut state = initial.clone();
    let mut scratch = Vec::with_capacity(state.amplitudes().len());
    let mut per_block = Vec::with_capacity(horizon);
    let mut running_mean = Vec::with_capacity(horizon);
    let mut substeps = record_substeps.then(Vec::new);
    let mut sum = 0.0;

    for t in 0..horizon {
        if t > 0 {
            match substeps.as_mut() {
                Some(sub) => {
                    for w in schedule.steps() {
                        w.step_with(&mut state, &mut scratch)?;
                        sub.push(state.probability_on(&flats));
                    }
                }
                None => schedule.apply_block(&mut state, &mut scratch)?,
            }
            let drift = (state.norm_sqr() - norm0).abs();
            if drift > NORM_DRIFT_LIMIT {
                return Err(Error::NormDrift { t, drift });
            }
        }
        let p = state.probability_on(&flats);
        if t == 0 {
            if let Some(sub) = substeps.as_mut() {
                sub.push(p);
            }
        }
        sum += p;
        per_block.push(p);
        running_mean.push(sum / (t + 1) as f64);
    }
    Ok(ProbabilityTrace {
        per_block,
        running_mean,
        horizon,
        substeps,
    })
}

/// Evolves `initial` block by block and records the success probability on
/// `marked` (full coin sum) for `t = 0..horizon`.
pub fn run_trace(
    schedule: &Schedule,
    initial: &StateVector,
    marked: &MarkedSet,
    horizon: usize,
) -> Result<ProbabilityTrace> {
    trace_impl(schedule, initial, marked, horizon, false)
}

/// [`run_trace`] that additionally records every intra-block step.
pub fn run_trace_with_substeps(
    schedule: &Schedule,
    initial: &StateVector,
    marked: &MarkedSet,
    horizon: usize,
) -> Result<ProbabilityTrace> {
    trace_impl(schedule, initial, marked, horizon, true)
}

/// Knobs for the exact infinite-time average.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitOptions {
    /// Maximum state dimension for the dense eigendecomposition.
    pub cap: usize,
    /// Eigenphases closer than this (radians) are treated as degenerate.
    pub phase_tol: f64,
    /// Largest accepted `‖Uψ − λψ‖` of any eigenpair.
    pub residual_tol: f64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_DENSE_CAP,
            phase_tol: 1e-8,
            residual_tol: 1e-8,
        }
    }
}

/// Orthonormal eigenbasis of a unitary matrix.
#[derive(Clone, Debug)]
pub struct EigenBasis {
    /// Eigenphases in `(-π, π]`, one per column of `vectors`.
    pub phases: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenBasis {
    /// Diagonalizes a unitary through its complex Schur form. For a normal
    /// matrix the triangular factor is diagonal, so the Schur vectors are an
    /// orthonormal eigenbasis even inside degenerate eigenspaces.
    pub fn from_unitary(u: &CMatrix, residual_tol: f64) -> Result<Self> {
        let schur = Schur::try_new(u.clone(), f64::EPSILON, 0)
            .ok_or_else(|| Error::Eigen("Schur iteration did not converge".into()))?;
        let (q, t) = schur.unpack();
        let lambdas: Vec<Complex64> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
        let basis = Self {
            phases: lambdas.iter().map(|l| l.arg()).collect(),
            vectors: q,
        };
        let worst = basis.max_residual(u, &lambdas);
        if worst.is_nan() || worst > residual_tol {
            return Err(Error::Eigen(format!(
                "eigenpair residual {worst:e} exceeds {residual_tol:e}"
            )));
        }
        Ok(basis)
    }

    fn max_residual(&self, u: &CMatrix, lambdas: &[Complex64]) -> f64 {
        let uq = u * &self.vectors;
        (0..lambdas.len())
            .map(|j| (uq.column(j) - self.vectors.column(j) * lambdas[j]).norm())
            .fold(0.0, f64::max)
    }

    /// Indices grouped by eigenphase: consecutive phases (on the circle)
    /// closer than `tol` fall in the same group.
    pub fn phase_groups(&self, tol: f64) -> Vec<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.phases.len()).collect();
        order.sort_by(|&a, &b| {
            self.phases[a]
                .partial_cmp(&self.phases[b])
                .unwrap_or(Ordering::Equal)
        });
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (k, &i) in order.iter().enumerate() {
            if k > 0 && self.phases[i] - self.phases[order[k - 1]] < tol {
                groups.last_mut().expect("non-empty").push(i);
            } else {
                groups.push(vec![i]);
            }
        }
        // phases just above -π and at π are neighbours on the circle
        if groups.len() > 1 {
            let first = self.phases[order[0]];
            let last = self.phases[order[order.len() - 1]];
            if first + TAU - last < tol {
                let tail = groups.pop().expect("len > 1");
                groups[0].extend(tail);
            }
        }
        groups
    }

    /// Cesàro average of the probability on the flat indices `targets`:
    /// `Σ_g Σ_{i ∈ targets} |(P_g ψ)_i|²` where `P_g` projects onto the
    /// eigenspace of phase group `g`.
    pub fn cesaro_average(&self, initial: &[Complex64], targets: &[usize], phase_tol: f64) -> f64 {
        let psi = DVector::from_column_slice(initial);
        let overlaps = self.vectors.adjoint() * psi;
        self.phase_groups(phase_tol)
            .iter()
            .map(|group| {
                targets
                    .iter()
                    .map(|&row| {
                        group
                            .iter()
                            .map(|&j| self.vectors[(row, j)] * overlaps[j])
                            .sum::<Complex64>()
                            .norm_sqr()
                    })
                    .sum::<f64>()
            })
            .sum()
    }
}

/// `lim_{T→∞} p̄_{(n1,n2)}(T)`, computed exactly from the eigendecomposition
/// of the dense block operator. The Cesàro limit always exists for a unitary
/// evolution, so a value is returned unconditionally.
pub fn limit_success(
    schedule: &Schedule,
    initial: &StateVector,
    marked: &MarkedSet,
    opts: &LimitOptions,
) -> Result<f64> {
    check_inputs(schedule, initial, marked, 1)?;
    let block = build_block(
        &schedule.walk1,
        schedule.n1,
        &schedule.walk2,
        schedule.n2,
        opts.cap,
    )?;
    let basis = EigenBasis::from_unitary(block.matrix(), opts.residual_tol)?;
    let targets = marked.flat_indices(initial.lattice());
    Ok(basis.cesaro_average(initial.amplitudes(), &targets, opts.phase_tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParadoxKind {
    Positive,
    Negative,
    None,
}

impl ParadoxKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ParadoxKind::Positive => "positive",
            ParadoxKind::Negative => "negative",
            ParadoxKind::None => "none",
        }
    }
}

impl std::fmt::Display for ParadoxKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParadoxVerdict {
    pub kind: ParadoxKind,
    pub p10: f64,
    pub p01: f64,
    pub p_combo: f64,
    pub baseline: f64,
    pub guard: f64,
}

/// Positive paradox: both single strategies strictly below the baseline and
/// the combination strictly above, each by more than `guard`. Negative
/// paradox: the mirror image.
pub fn classify(p10: f64, p01: f64, p_combo: f64, baseline: f64, guard: f64) -> ParadoxVerdict {
    let below = |p: f64| p < baseline - guard;
    let above = |p: f64| p > baseline + guard;
    let kind = if below(p10) && below(p01) && above(p_combo) {
        ParadoxKind::Positive
    } else if above(p10) && above(p01) && below(p_combo) {
        ParadoxKind::Negative
    } else {
        ParadoxKind::None
    };
    ParadoxVerdict {
        kind,
        p10,
        p01,
        p_combo,
        baseline,
        guard,
    }
}

/// Finite-horizon game from the uniform state: `p̄_{(1,0)}(T)`,
/// `p̄_{(0,1)}(T)` and `p̄_{(n1,n2)}(T)`, classified against `m / N^d`.
pub fn play(
    walk1: &WalkOperator,
    walk2: &WalkOperator,
    (n1, n2): (usize, usize),
    marked: &MarkedSet,
    horizon: usize,
    guard: f64,
) -> Result<GameOutcome> {
    let lattice = *walk1.lattice();
    let initial = StateVector::uniform(lattice);
    let single1 = run_trace(&Schedule::single(walk1.clone(), 1)?, &initial, marked, horizon)?;
    let single2 = run_trace(&Schedule::single(walk2.clone(), 1)?, &initial, marked, horizon)?;
    let combo = run_trace(
        &Schedule::new(n1, n2, walk1.clone(), walk2.clone())?,
        &initial,
        marked,
        horizon,
    )?;
    let verdict = classify(
        single1.mean(),
        single2.mean(),
        combo.mean(),
        marked.baseline(&lattice),
        guard,
    );
    Ok(GameOutcome {
        single1,
        single2,
        combo,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameOutcome {
    pub single1: ProbabilityTrace,
    pub single2: ProbabilityTrace,
    pub combo: ProbabilityTrace,
    pub verdict: ParadoxVerdict,
}
