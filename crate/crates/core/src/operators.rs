//! Coin and shift operators of the walk on `T^d_N`.
//!
//! A single axis evolves by `U = S·C` on `C^2 ⊗ C^N`:
//!
//! * `C` applies the marked block (default `-I₂`) at marked positions and the
//!   parametrized block `C(α, β, θ)` everywhere else,
//! * `S` moves `L` amplitudes to `j + 1` and `R` amplitudes to `j - 1`, mod `N`.
//!
//! The `d`-dimensional walk is the tensor product of one axis operator per
//! axis. Nothing here materializes a dense matrix; see [`crate::oracle`] for
//! that.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{LatticeSpec, StateVector};

/// A 2×2 coin block, row-major: `block[row][col]`.
pub type CoinBlock = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn minus_identity() -> CoinBlock {
    let m = Complex64::new(-1.0, 0.0);
    [[m, ZERO], [ZERO, m]]
}

fn negate(block: &CoinBlock) -> CoinBlock {
    [[-block[0][0], -block[0][1]], [-block[1][0], -block[1][1]]]
}

/// Angles `(α, β, θ)` of the unmarked coin block, each reduced to `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoinParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

fn reduce(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl CoinParams {
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Self {
        Self {
            alpha: reduce(alpha),
            beta: reduce(beta),
            theta: reduce(theta),
        }
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Self::new(self.alpha, self.beta, theta)
    }

    /// The same coin with `θ` advanced by `π`, i.e. the unmarked block negated.
    pub fn shifted_by_pi(self) -> Self {
        self.with_theta(self.theta + PI)
    }

    /// ```text
    /// ⎡ e^{iα} cos θ    e^{-iβ} sin θ ⎤
    /// ⎣ e^{iβ} sin θ   -e^{-iα} cos θ ⎦
    /// ```
    pub fn block(&self) -> CoinBlock {
        let (s, c) = self.theta.sin_cos();
        [
            [
                Complex64::from_polar(c, self.alpha),
                Complex64::from_polar(s, -self.beta),
            ],
            [
                Complex64::from_polar(s, self.beta),
                -Complex64::from_polar(c, -self.alpha),
            ],
        ]
    }
}

/// One axis factor `U = S·C` (or `S·C̃` when `negated`).
#[derive(Clone, Debug, PartialEq)]
pub struct AxisUnitary {
    side: usize,
    coin: CoinParams,
    marked: Vec<usize>,
    negated: bool,
    marked_block: CoinBlock,
    is_marked: Vec<bool>,
}

impl AxisUnitary {
    /// Axis operator with the given unmarked coin and marked positions. The
    /// marked set may be empty.
    pub fn new(side: usize, coin: CoinParams, marked: &[usize]) -> Result<Self> {
        if side < 2 {
            return Err(Error::InvalidLattice(format!(
                "side must be at least 2, got {side}"
            )));
        }
        let mut is_marked = vec![false; side];
        for &j in marked {
            if j >= side {
                return Err(Error::InvalidMarkedSet(format!(
                    "axis position {j} out of range for side {side}"
                )));
            }
            is_marked[j] = true;
        }
        let marked = (0..side).filter(|&j| is_marked[j]).collect();
        Ok(Self {
            side,
            coin,
            marked,
            negated: false,
            marked_block: minus_identity(),
            is_marked,
        })
    }

    /// Replaces the marked block `C_M`. Callers are responsible for passing a
    /// unitary block.
    pub fn with_marked_block(mut self, block: CoinBlock) -> Self {
        self.marked_block = block;
        self
    }

    /// `C ↦ C̃`: toggles the sign of the unmarked block only.
    pub fn negate_unmarked(&self) -> Self {
        Self {
            negated: !self.negated,
            ..self.clone()
        }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn coin(&self) -> CoinParams {
        self.coin
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn marked_block(&self) -> CoinBlock {
        self.marked_block
    }

    /// The block actually applied at unmarked positions.
    pub fn unmarked_block(&self) -> CoinBlock {
        let b = self.coin.block();
        if self.negated {
            negate(&b)
        } else {
            b
        }
    }

    pub fn is_marked(&self, position: usize) -> bool {
        self.is_marked[position]
    }
}

/// `U^{(1)} ⊗ … ⊗ U^{(d)}`, one axis operator per torus axis.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkOperator {
    lattice: LatticeSpec,
    axes: Vec<AxisUnitary>,
}

impl WalkOperator {
    pub fn new(lattice: LatticeSpec, axes: Vec<AxisUnitary>) -> Result<Self> {
        if axes.len() != lattice.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} axis operators for dimension {}",
                axes.len(),
                lattice.dim()
            )));
        }
        if let Some(a) = axes.iter().find(|a| a.side != lattice.side()) {
            return Err(Error::ShapeMismatch(format!(
                "axis operator of side {} on a lattice of side {}",
                a.side,
                lattice.side()
            )));
        }
        Ok(Self { lattice, axes })
    }

    /// The same axis operator on every axis, `U^{⊗d}`.
    pub fn homogeneous(lattice: LatticeSpec, axis: AxisUnitary) -> Result<Self> {
        Self::new(lattice, vec![axis; lattice.dim()])
    }

    /// Convenience for the common case: coin `C(α, β, θ)` with the same
    /// marked positions on every axis.
    pub fn search(lattice: LatticeSpec, coin: CoinParams, axis_marks: &[usize]) -> Result<Self> {
        Self::homogeneous(lattice, AxisUnitary::new(lattice.side(), coin, axis_marks)?)
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn axes(&self) -> &[AxisUnitary] {
        &self.axes
    }

    pub fn is_homogeneous(&self) -> bool {
        self.axes.windows(2).all(|w| w[0] == w[1])
    }

    /// Negates the unmarked block on every axis.
    pub fn negate_unmarked(&self) -> Self {
        Self {
            lattice: self.lattice,
            axes: self.axes.iter().map(AxisUnitary::negate_unmarked).collect(),
        }
    }

    /// One step `U` in place, using `scratch` as the swap buffer.
    pub fn step_with(&self, state: &mut StateVector, scratch: &mut Vec<Complex64>) -> Result<()> {
        check_shape(state, &self.lattice)?;
        for (axis, op) in self.axes.iter().enumerate() {
            coin_shift_axis(state, axis, op, scratch);
        }
        Ok(())
    }
}

fn check_shape(state: &StateVector, lattice: &LatticeSpec) -> Result<()> {
    if state.lattice() != lattice {
        return Err(Error::ShapeMismatch(format!(
            "state on {:?} evolved by operator on {:?}",
            state.lattice(),
            lattice
        )));
    }
    Ok(())
}

/// Iterates over the axis slices of `axis`: yields `(base, stride)` where the
/// local index `l ∈ [0, 2N)` lives at `base + l * stride`.
fn axis_slices(lattice: &LatticeSpec, axis: usize) -> impl Iterator<Item = usize> {
    let stride = lattice.axis_stride(axis);
    let block = lattice.axis_len() * stride;
    let outer = lattice.state_len() / block;
    (0..outer).flat_map(move |o| (0..stride).map(move |i| o * block + i))
}

/// Applies the coin-conditioned shift on one axis.
pub fn apply_shift_axis(state: &mut StateVector, axis: usize) -> Result<()> {
    let lattice = *state.lattice();
    lattice.check_axis(axis)?;
    let n = lattice.side();
    let stride = lattice.axis_stride(axis);
    let src = state.amplitudes().to_vec();
    let dst = state.amplitudes_mut();
    for base in axis_slices(&lattice, axis) {
        for j in 0..n {
            dst[base + ((j + 1) % n) * stride] = src[base + j * stride];
            dst[base + (n + (j + n - 1) % n) * stride] = src[base + (n + j) * stride];
        }
    }
    Ok(())
}

/// Applies the position-dependent coin of `op` on one axis.
pub fn apply_coin_axis(state: &mut StateVector, axis: usize, op: &AxisUnitary) -> Result<()> {
    let lattice = *state.lattice();
    lattice.check_axis(axis)?;
    if op.side != lattice.side() {
        return Err(Error::ShapeMismatch(format!(
            "coin of side {} on a lattice of side {}",
            op.side,
            lattice.side()
        )));
    }
    let n = lattice.side();
    let stride = lattice.axis_stride(axis);
    let unmarked = op.unmarked_block();
    let amps = state.amplitudes_mut();
    for base in axis_slices(&lattice, axis) {
        for j in 0..n {
            let b = if op.is_marked[j] {
                &op.marked_block
            } else {
                &unmarked
            };
            let (il, ir) = (base + j * stride, base + (n + j) * stride);
            let (l, r) = (amps[il], amps[ir]);
            amps[il] = b[0][0] * l + b[0][1] * r;
            amps[ir] = b[1][0] * l + b[1][1] * r;
        }
    }
    Ok(())
}

/// One step `U = S·C` of `walk` (coin first, then shift, on every axis).
pub fn step(state: &mut StateVector, walk: &WalkOperator) -> Result<()> {
    walk.step_with(state, &mut Vec::new())
}

/// Fused coin + shift on one axis, writing into `scratch` and swapping.
fn coin_shift_axis(state: &mut StateVector, axis: usize, op: &AxisUnitary, scratch: &mut Vec<Complex64>) {
    let lattice = *state.lattice();
    let n = lattice.side();
    let stride = lattice.axis_stride(axis);
    let block_len = lattice.axis_len() * stride;
    let unmarked = op.unmarked_block();
    let src = state.amplitudes();
    scratch.clear();
    scratch.resize(src.len(), ZERO);

    for base in (0..src.len()).step_by(block_len) {
        for j in 0..n {
            let b = if op.is_marked[j] {
                &op.marked_block
            } else {
                &unmarked
            };
            let sl = base + j * stride;
            let sr = base + (n + j) * stride;
            let dl = base + ((j + 1) % n) * stride;
            let dr = base + (n + (j + n - 1) % n) * stride;
            for i in 0..stride {
                let (l, r) = (src[sl + i], src[sr + i]);
                scratch[dl + i] = b[0][0] * l + b[0][1] * r;
                scratch[dr + i] = b[1][0] * l + b[1][1] * r;
            }
        }
    }
    state.swap_amplitudes(scratch);
}
