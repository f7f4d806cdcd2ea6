//! Brute-force dense reference for the walk operators.
//!
//! Matrices here are built directly from the operator formulas (explicit `S`
//! and `C` matrices, Kronecker products across axes) and never go through the
//! fast path in [`crate::operators`], so the two can check each other.
//! Tolerances used against this module assume state dimensions up to
//! [`DEFAULT_DENSE_CAP`]; products of larger matrices accumulate roughly ten
//! times more rounding error.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::Schedule;
use crate::operators::{AxisUnitary, CoinParams, WalkOperator};
use crate::state::{LatticeSpec, MarkedSet, StateVector};

pub const DEFAULT_DENSE_CAP: usize = 4096;

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A walk operator materialized as a `(2N)^d × (2N)^d` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary {
    lattice: LatticeSpec,
    matrix: CMatrix,
}

impl DenseUnitary {
    pub fn from_matrix(lattice: LatticeSpec, matrix: CMatrix) -> Result<Self> {
        let n = lattice.state_len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for state dimension {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { lattice, matrix })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `max |U†U − I|` over all entries.
    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.matrix)
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &DenseUnitary) -> Result<DenseUnitary> {
        if self.lattice != other.lattice {
            return Err(Error::ShapeMismatch(
                "composing operators on different lattices".into(),
            ));
        }
        Ok(Self {
            lattice: self.lattice,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn pow(&self, k: usize) -> DenseUnitary {
        let mut m = CMatrix::identity(self.matrix.nrows(), self.matrix.ncols());
        for _ in 0..k {
            m = &self.matrix * m;
        }
        Self {
            lattice: self.lattice,
            matrix: m,
        }
    }
}

pub fn unitarity_error(m: &CMatrix) -> f64 {
    let prod = m.adjoint() * m;
    let id = CMatrix::identity(m.nrows(), m.ncols());
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_cap(lattice: &LatticeSpec, cap: usize) -> Result<()> {
    if lattice.state_len() > cap {
        return Err(Error::DenseCapExceeded {
            dim: lattice.state_len(),
            cap,
        });
    }
    Ok(())
}

fn block_matrix(block: &[[Complex64; 2]; 2]) -> CMatrix {
    CMatrix::from_fn(2, 2, |r, c| block[r][c])
}

/// `S` on one axis, `2N × 2N`, basis index `s·N + j`.
pub fn shift_matrix(side: usize) -> CMatrix {
    let mut s = CMatrix::zeros(2 * side, 2 * side);
    for j in 0..side {
        s[((j + 1) % side, j)] = ONE;
        s[(side + (j + side - 1) % side, side + j)] = ONE;
    }
    s
}

/// `C = C_M ⊗ Σ_{v∈M}|v⟩⟨v| + C_unmarked ⊗ (I − Σ_{v∈M}|v⟩⟨v|)` on one axis.
pub fn coin_matrix(axis: &AxisUnitary) -> CMatrix {
    let n = axis.side();
    let marked_proj = CMatrix::from_fn(n, n, |r, c| if r == c && axis.is_marked(r) { ONE } else { ZERO });
    let unmarked_proj = CMatrix::identity(n, n) - &marked_proj;
    block_matrix(&axis.marked_block()).kronecker(&marked_proj)
        + block_matrix(&axis.unmarked_block()).kronecker(&unmarked_proj)
}

/// `U = S·C` on one axis.
pub fn axis_matrix(axis: &AxisUnitary) -> CMatrix {
    shift_matrix(axis.side()) * coin_matrix(axis)
}

/// Materializes `walk` as the Kronecker product of its axis matrices.
pub fn build_dense(walk: &WalkOperator, cap: usize) -> Result<DenseUnitary> {
    let lattice = *walk.lattice();
    check_cap(&lattice, cap)?;
    let matrix = walk
        .axes()
        .iter()
        .map(axis_matrix)
        .reduce(|acc, m| acc.kronecker(&m))
        .expect("lattice has at least one axis");
    DenseUnitary::from_matrix(lattice, matrix)
}

/// Dense walk with an arbitrary vertex-marked set: `-I` on the whole
/// `2^d`-dimensional coin space of every marked vertex, `C(α,β,θ)^{⊗d}`
/// elsewhere, followed by the shift on every axis.
///
/// For `d = 1` this coincides with [`build_dense`]. For `d ≥ 2` it is a
/// different model from the per-axis tensor product and has no fast path.
pub fn build_dense_vertex_marked(
    lattice: LatticeSpec,
    coin: CoinParams,
    marked: &MarkedSet,
    cap: usize,
) -> Result<DenseUnitary> {
    check_cap(&lattice, cap)?;
    marked.check_lattice(&lattice)?;
    let d = lattice.dim();
    let n = lattice.side();
    let unit = block_matrix(&coin.block());
    let unmarked = (1..d).fold(unit.clone(), |acc, _| acc.kronecker(&unit));

    let len = lattice.state_len();
    let mut c = CMatrix::zeros(len, len);
    for v in 0..lattice.vertex_count() {
        let vertex: Vec<usize> = (0..d).rev().map(|a| (v / n.pow(a as u32)) % n).collect();
        let flats = lattice.vertex_flats(&vertex);
        let is_marked = marked.vertices().contains(&vertex);
        for (a, &ra) in flats.iter().enumerate() {
            for (b, &cb) in flats.iter().enumerate() {
                c[(ra, cb)] = match (is_marked, a == b) {
                    (true, true) => -ONE,
                    (true, false) => ZERO,
                    (false, _) => unmarked[(a, b)],
                };
            }
        }
    }
    let s = (1..d).fold(shift_matrix(n), |acc, _| acc.kronecker(&shift_matrix(n)));
    DenseUnitary::from_matrix(lattice, s * c)
}

/// Dense block operator `(U₂)^{n2} (U₁)^{n1}`.
pub fn build_block(
    walk1: &WalkOperator,
    n1: usize,
    walk2: &WalkOperator,
    n2: usize,
    cap: usize,
) -> Result<DenseUnitary> {
    let u1 = build_dense(walk1, cap)?;
    let u2 = build_dense(walk2, cap)?;
    u2.pow(n2).compose(&u1.pow(n1))
}

fn to_dvector(state: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(state.amplitudes())
}

/// `U^t |ψ⟩` by repeated matrix-vector products.
pub fn evolve_dense(u: &DenseUnitary, initial: &StateVector, t: usize) -> Result<StateVector> {
    if u.lattice != *initial.lattice() {
        return Err(Error::ShapeMismatch("state and operator lattices differ".into()));
    }
    let mut v = to_dvector(initial);
    for _ in 0..t {
        v = &u.matrix * v;
    }
    StateVector::from_amplitudes(u.lattice, v.as_slice().to_vec())
}

/// Maximum amplitude difference between the fast path and the dense oracle
/// over `t = 0..=steps`, starting from `initial`.
pub fn compare_fast_and_dense(
    walk: &WalkOperator,
    initial: &StateVector,
    steps: usize,
    cap: usize,
) -> Result<f64> {
    let u = build_dense(walk, cap)?;
    let mut fast = initial.clone();
    let mut dense = to_dvector(initial);
    let mut scratch = Vec::new();
    let mut worst = 0.0f64;
    for t in 0..=steps {
        if t > 0 {
            walk.step_with(&mut fast, &mut scratch)?;
            dense = &u.matrix * dense;
        }
        let diff = fast
            .amplitudes()
            .iter()
            .zip(dense.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(diff);
    }
    Ok(worst)
}

/// Same as [`compare_fast_and_dense`] for whole blocks of a schedule.
pub fn compare_block_and_dense(
    schedule: &Schedule,
    initial: &StateVector,
    blocks: usize,
    cap: usize,
) -> Result<f64> {
    let u = build_block(
        schedule.walk1(),
        schedule.n1(),
        schedule.walk2(),
        schedule.n2(),
        cap,
    )?;
    let mut fast = initial.clone();
    let mut dense = to_dvector(initial);
    let mut scratch = Vec::new();
    let mut worst = 0.0f64;
    for t in 0..=blocks {
        if t > 0 {
            schedule.apply_block(&mut fast, &mut scratch)?;
            dense = &u.matrix * dense;
        }
        let diff = fast
            .amplitudes()
            .iter()
            .zip(dense.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(diff);
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// Position-block entries with odd `i + j` vanish.
    Even,
    /// Position-block entries with even `i + j` vanish.
    Odd,
}

impl Parity {
    pub fn compose(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Checkerboard zero pattern on the `N × N` position blocks of a
/// single-axis `2N × 2N` matrix. Only meaningful for even `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParityPattern {
    side: usize,
    parity: Parity,
}

impl ParityPattern {
    pub fn new(side: usize, parity: Parity) -> Result<Self> {
        if !side.is_multiple_of(2) {
            return Err(Error::OddSide(side));
        }
        Ok(Self { side, parity })
    }

    /// Whether position block `(i, j)` may be nonzero.
    pub fn allows(&self, i: usize, j: usize) -> bool {
        let even = (i + j).is_multiple_of(2);
        match self.parity {
            Parity::Even => even,
            Parity::Odd => !even,
        }
    }

    /// Largest modulus among the entries the pattern forces to zero.
    pub fn max_violation(&self, m: &CMatrix) -> f64 {
        let n = self.side;
        let mut worst = 0.0f64;
        for r in 0..2 * n {
            for c in 0..2 * n {
                if !self.allows(r % n, c % n) {
                    worst = worst.max(m[(r, c)].norm());
                }
            }
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityParameters {
    pub side: usize,
    pub coin1: CoinParams,
    pub coin2: CoinParams,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityReport {
    pub tmax: usize,
    /// Worst modulus over every entry the even pattern forbids, all `t`.
    pub max_violation: f64,
    /// Worst of `|⟨s,0|(U₂U₁)^t|L,1⟩|` and `|⟨s,0|(U₂U₁)^t|R,N−1⟩|`.
    pub named_amplitude_max: f64,
    pub pattern_checked: String,
    pub parameters: ParityParameters,
}

/// Checks the even checkerboard pattern of `(U₂U₁)^t` for `t = 1..=tmax` on
/// an even cycle with the origin marked, including the two amplitudes
/// `⟨s,0|(U₂U₁)^t|L,1⟩` and `⟨s,0|(U₂U₁)^t|R,N−1⟩`.
pub fn check_parity_zeros(walk1: &WalkOperator, walk2: &WalkOperator, tmax: usize) -> Result<ParityReport> {
    let lattice = *walk1.lattice();
    if lattice.dim() != 1 || walk2.lattice() != &lattice {
        return Err(Error::Precondition(
            "parity check needs two walks on the same one-dimensional cycle".into(),
        ));
    }
    let n = lattice.side();
    if !n.is_multiple_of(2) {
        return Err(Error::OddSide(n));
    }
    for w in [walk1, walk2] {
        if w.axes()[0].marked() != [0] {
            return Err(Error::Precondition(
                "parity check needs exactly the origin marked".into(),
            ));
        }
    }
    let pattern = ParityPattern::new(n, Parity::Even)?;
    let u = build_dense(walk2, usize::MAX)?.compose(&build_dense(walk1, usize::MAX)?)?;
    let mut power = CMatrix::identity(2 * n, 2 * n);
    let mut max_violation = 0.0f64;
    let mut named = 0.0f64;
    for _ in 0..tmax {
        power = u.matrix() * power;
        max_violation = max_violation.max(pattern.max_violation(&power));
        for s in 0..2 {
            let row = s * n;
            named = named
                .max(power[(row, 1)].norm())
                .max(power[(row, n + n - 1)].norm());
        }
    }
    Ok(ParityReport {
        tmax,
        max_violation: max_violation.max(named),
        named_amplitude_max: named,
        pattern_checked: "position blocks with odd i+j vanish".into(),
        parameters: ParityParameters {
            side: n,
            coin1: walk1.axes()[0].coin(),
            coin2: walk2.axes()[0].coin(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::step;
    use crate::state::{BasisIndex, Coin};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

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

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_coin_gives_phase_permutation() {
        let walk = WalkOperator::search(lat(1, 2), CoinParams::new(0.0, 0.0, 0.0), &[0]).unwrap();
        let u = build_dense(&walk, DEFAULT_DENSE_CAP).unwrap();
        for c in 0..4 {
            let nonzero: Vec<f64> = (0..4)
                .map(|r| u.matrix()[(r, c)].norm())
                .filter(|&x| x > 0.0)
                .collect();
            assert_eq!(nonzero.len(), 1);
            assert!((nonzero[0] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn marked_column() {
        let walk = WalkOperator::search(lat(1, 4), CoinParams::new(0.3, 2.0, 1.0), &[0]).unwrap();
        let u = build_dense(&walk, DEFAULT_DENSE_CAP).unwrap();
        // column |L,0⟩ = index 0; row |L,1⟩ = index 1
        for r in 0..8 {
            let want = if r == 1 { -ONE } else { ZERO };
            assert_eq!(u.matrix()[(r, 0)], want);
        }
    }

    #[test]
    fn columns_match_fast_path_on_basis_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (d, n) in [(1, 6), (2, 3), (2, 4), (3, 2)] {
            let l = lat(d, n);
            let walk = WalkOperator::search(l, random_coin(&mut rng), &[0]).unwrap();
            let u = build_dense(&walk, DEFAULT_DENSE_CAP).unwrap();
            assert!(u.unitarity_error() < 1e-10);
            for v in 0..l.state_len() {
                let mut s = StateVector::basis(l, &BasisIndex::from_flat(v, &l).unwrap()).unwrap();
                step(&mut s, &walk).unwrap();
                for r in 0..l.state_len() {
                    assert!((s.amplitudes()[r] - u.matrix()[(r, v)]).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn matvec_matches_step_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let l = lat(1, 6);
        let walk = WalkOperator::search(l, random_coin(&mut rng), &[0]).unwrap();
        let u = build_dense(&walk, DEFAULT_DENSE_CAP).unwrap();
        for _ in 0..100 {
            let psi = StateVector::random(l, &mut rng);
            let diff = compare_fast_and_dense(&walk, &psi, 1, DEFAULT_DENSE_CAP).unwrap();
            assert!(diff < 1e-12, "{diff}");
            let dense = evolve_dense(&u, &psi, 1).unwrap();
            let mut fast = psi.clone();
            step(&mut fast, &walk).unwrap();
            for (a, b) in dense.amplitudes().iter().zip(fast.amplitudes()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn axis_matrices_unitary_and_negation_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let coin = random_coin(&mut rng);
            let op = AxisUnitary::new(4, coin, &[0]).unwrap();
            let neg = op.negate_unmarked();
            assert!(unitarity_error(&axis_matrix(&op)) < 1e-12);
            assert!(unitarity_error(&axis_matrix(&neg)) < 1e-12);

            // C + C̃ = −2 I₂ ⊗ |0⟩⟨0|
            let sum = coin_matrix(&op) + coin_matrix(&neg);
            let mut want = CMatrix::zeros(8, 8);
            want[(0, 0)] = Complex64::new(-2.0, 0.0);
            want[(4, 4)] = Complex64::new(-2.0, 0.0);
            assert!(max_diff(&sum, &want) < 1e-12);

            // C̃ equals the coin at θ + π
            let shifted = AxisUnitary::new(4, coin.shifted_by_pi(), &[0]).unwrap();
            assert!(max_diff(&coin_matrix(&neg), &coin_matrix(&shifted)) < 1e-12);
        }
    }

    #[test]
    fn kronecker_matches_fast_path_2d() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..=4 {
            let l = lat(2, n);
            let walk = WalkOperator::new(
                l,
                vec![
                    AxisUnitary::new(n, random_coin(&mut rng), &[0]).unwrap(),
                    AxisUnitary::new(n, random_coin(&mut rng), &[n - 1]).unwrap(),
                ],
            )
            .unwrap();
            let psi = StateVector::random(l, &mut rng);
            assert!(compare_fast_and_dense(&walk, &psi, 30, DEFAULT_DENSE_CAP).unwrap() < 1e-12);
        }
    }

    #[test]
    fn dense_cap_enforced() {
        let walk = WalkOperator::search(lat(2, 10), CoinParams::new(0.0, 0.0, 1.0), &[0]).unwrap();
        assert!(matches!(
            build_dense(&walk, 100),
            Err(Error::DenseCapExceeded { dim: 400, cap: 100 })
        ));
    }

    #[test]
    fn evolve_dense_edge_cases() {
        let l = lat(1, 5);
        let walk = WalkOperator::search(l, CoinParams::new(0.0, 0.0, 0.0), &[]).unwrap();
        let u = build_dense(&walk, DEFAULT_DENSE_CAP).unwrap();
        let psi = StateVector::random(l, &mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(evolve_dense(&u, &psi, 0).unwrap(), psi);

        // θ = 0 with nothing marked: a full lap brings every marginal back.
        let back = evolve_dense(&u, &psi, 5).unwrap();
        for j in 0..5 {
            let a = psi.vertex_probability(&[j]).unwrap();
            let b = back.vertex_probability(&[j]).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        assert!((back.norm_sqr() - 1.0).abs() < 1e-10);

        let other = StateVector::uniform(lat(1, 4));
        assert!(evolve_dense(&u, &other, 1).is_err());
    }

    #[test]
    fn block_operator_is_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let l = lat(1, 5);
        let w1 = WalkOperator::search(l, random_coin(&mut rng), &[0]).unwrap();
        let w2 = WalkOperator::search(l, random_coin(&mut rng), &[0]).unwrap();
        let b = build_block(&w1, 2, &w2, 3, DEFAULT_DENSE_CAP).unwrap();
        let u1 = axis_matrix(&w1.axes()[0]);
        let u2 = axis_matrix(&w2.axes()[0]);
        let want = &u2 * &u2 * &u2 * &u1 * &u1;
        assert!(max_diff(b.matrix(), &want) < 1e-10);
    }

    #[test]
    fn vertex_marked_matches_product_in_one_dimension() {
        let l = lat(1, 6);
        let coin = CoinParams::new(0.4, 1.2, 2.5);
        let m = MarkedSet::new(&l, vec![vec![0], vec![3]]).unwrap();
        let a = build_dense_vertex_marked(l, coin, &m, DEFAULT_DENSE_CAP).unwrap();
        let b = build_dense(
            &WalkOperator::search(l, coin, &[0, 3]).unwrap(),
            DEFAULT_DENSE_CAP,
        )
        .unwrap();
        assert!(max_diff(a.matrix(), b.matrix()) < 1e-15);

        let l2 = lat(2, 3);
        let m2 = MarkedSet::new(&l2, vec![vec![0, 1], vec![2, 2]]).unwrap();
        let c = build_dense_vertex_marked(l2, coin, &m2, DEFAULT_DENSE_CAP).unwrap();
        assert!(c.unitarity_error() < 1e-12);
    }

    #[test]
    fn parity_closure_on_realized_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 6;
        let odd = ParityPattern::new(n, Parity::Odd).unwrap();
        let even = ParityPattern::new(n, Parity::Even).unwrap();
        let u1 = axis_matrix(&AxisUnitary::new(n, random_coin(&mut rng), &[0]).unwrap());
        let u2 = axis_matrix(&AxisUnitary::new(n, random_coin(&mut rng), &[0]).unwrap());
        assert_eq!(odd.max_violation(&u1), 0.0);
        assert_eq!(odd.max_violation(&u2), 0.0);
        let prod = &u2 * &u1;
        assert_eq!(Parity::Odd.compose(Parity::Odd), Parity::Even);
        assert_eq!(even.max_violation(&prod), 0.0);
        assert_eq!(even.max_violation(&(&prod * &prod)), 0.0);
        assert!(ParityPattern::new(5, Parity::Even).is_err());
        // odd side breaks the pattern: the wrap edge N-1 → 0 joins equal parities
        let u_odd = axis_matrix(&AxisUnitary::new(5, random_coin(&mut rng), &[0]).unwrap());
        let bogus = ParityPattern {
            side: 5,
            parity: Parity::Odd,
        };
        assert!(bogus.max_violation(&u_odd) > 0.1);
    }

    #[test]
    fn parity_zeros_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let l = lat(1, 4);
        let w1 = WalkOperator::search(l, random_coin(&mut rng), &[0]).unwrap();
        let w2 = WalkOperator::search(l, random_coin(&mut rng), &[0]).unwrap();
        let r = check_parity_zeros(&w1, &w2, 20).unwrap();
        assert!(r.max_violation < 1e-12);

        let l = lat(1, 6);
        let w1 = WalkOperator::search(l, CoinParams::new(0.3, 0.1, 0.0), &[0]).unwrap();
        let w2 = WalkOperator::search(l, CoinParams::new(1.3, 2.1, 0.0), &[0]).unwrap();
        assert_eq!(check_parity_zeros(&w1, &w2, 10).unwrap().max_violation, 0.0);

        let l = lat(1, 5);
        let w = WalkOperator::search(l, CoinParams::new(0.3, 0.1, PI / 3.0), &[0]).unwrap();
        assert!(matches!(check_parity_zeros(&w, &w, 5), Err(Error::OddSide(5))));

        let l = lat(1, 4);
        let w = WalkOperator::search(l, CoinParams::new(0.3, 0.1, 1.0), &[1]).unwrap();
        assert!(matches!(
            check_parity_zeros(&w, &w, 5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn named_amplitudes_vanish() {
        let l = lat(1, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let w1 = WalkOperator::search(l, random_coin(&mut rng), &[0]).unwrap();
        let w2 = WalkOperator::search(l, random_coin(&mut rng), &[0]).unwrap();
        let u = build_dense(&w2, DEFAULT_DENSE_CAP)
            .unwrap()
            .compose(&build_dense(&w1, DEFAULT_DENSE_CAP).unwrap())
            .unwrap();
        for t in 1..10 {
            for start in [BasisIndex::one(Coin::L, 1), BasisIndex::one(Coin::R, 7)] {
                let psi = StateVector::basis(l, &start).unwrap();
                let out = evolve_dense(&u, &psi, t).unwrap();
                assert_eq!(out.vertex_probability(&[0]).unwrap(), 0.0);
            }
        }
    }
}
