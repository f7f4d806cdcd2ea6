//! Hilbert-space layout for walks on the torus `T^d_N`.
//!
//! Each axis carries a two-level coin and an `N`-level position register, so
//! the state space is `(C^2 ⊗ C^N)^{⊗d}` with dimension `(2N)^d`. Amplitudes
//! are stored in a flat array using an axis-major mixed-radix index: axis 0 is
//! the most significant digit, every digit has radix `2N`, and inside a digit
//! the pair `(coin, position)` maps to `coin * N + position`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest state dimension the crate will allocate.
const MAX_STATE_LEN: usize = 1 << 32;

/// Coin label of one axis. `L` moves the walker to `j + 1`, `R` to `j - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coin {
    L = 0,
    R = 1,
}

impl Coin {
    pub const ALL: [Coin; 2] = [Coin::L, Coin::R];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    dim: usize,
    side: usize,
}

impl LatticeSpec {
    pub fn new(dim: usize, side: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidLattice("dimension must be at least 1".into()));
        }
        if side < 2 {
            return Err(Error::InvalidLattice(format!(
                "side must be at least 2, got {side}"
            )));
        }
        let len = u32::try_from(dim)
            .ok()
            .and_then(|d| (2 * side).checked_pow(d))
            .filter(|&len| len <= MAX_STATE_LEN);
        if len.is_none() {
            return Err(Error::InvalidLattice(format!(
                "state dimension (2*{side})^{dim} is too large"
            )));
        }
        Ok(Self { dim, side })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn vertex_count(&self) -> usize {
        self.side.pow(self.dim as u32)
    }

    /// Length of one axis factor, `2N`.
    pub fn axis_len(&self) -> usize {
        2 * self.side
    }

    /// Total state dimension `(2N)^d`.
    pub fn state_len(&self) -> usize {
        self.axis_len().pow(self.dim as u32)
    }

    /// Flat-index stride of `axis`.
    pub fn axis_stride(&self, axis: usize) -> usize {
        self.axis_len().pow((self.dim - 1 - axis) as u32)
    }

    pub(crate) fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange { axis, dim: self.dim });
        }
        Ok(())
    }

    pub(crate) fn check_vertex(&self, vertex: &[usize]) -> Result<()> {
        if vertex.len() != self.dim || vertex.iter().any(|&j| j >= self.side) {
            return Err(Error::VertexOutOfRange {
                vertex: vertex.to_vec(),
                dim: self.dim,
                side: self.side,
            });
        }
        Ok(())
    }

    /// Flat index of the basis vector with the given per-axis coins and
    /// positions. Inputs must already be validated.
    pub(crate) fn flat_unchecked(&self, coins: impl Iterator<Item = usize>, vertex: &[usize]) -> usize {
        coins
            .zip(vertex)
            .fold(0, |acc, (s, &j)| acc * self.axis_len() + s * self.side + j)
    }

    /// Flat index of the position-`vertex` component carrying coin `s` on
    /// every axis.
    fn diagonal_flat(&self, coin: Coin, vertex: &[usize]) -> usize {
        self.flat_unchecked(std::iter::repeat(coin.index()), vertex)
    }

    /// All `2^d` flat indices sitting over `vertex`.
    pub(crate) fn vertex_flats(&self, vertex: &[usize]) -> Vec<usize> {
        (0..1usize << self.dim)
            .map(|mask| {
                let coins = (0..self.dim).map(move |axis| (mask >> (self.dim - 1 - axis)) & 1);
                self.flat_unchecked(coins, vertex)
            })
            .collect()
    }
}

/// A basis label `|s_1, j_1⟩ ⊗ … ⊗ |s_d, j_d⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub coins: Vec<Coin>,
    pub positions: Vec<usize>,
}

impl BasisIndex {
    pub fn new(coins: Vec<Coin>, positions: Vec<usize>) -> Self {
        Self { coins, positions }
    }

    /// Single-axis label `|s, j⟩`.
    pub fn one(coin: Coin, position: usize) -> Self {
        Self::new(vec![coin], vec![position])
    }

    pub fn to_flat(&self, lattice: &LatticeSpec) -> Result<usize> {
        if self.coins.len() != lattice.dim() {
            return Err(Error::ShapeMismatch(format!(
                "basis label has {} coins for a {}-dimensional lattice",
                self.coins.len(),
                lattice.dim()
            )));
        }
        lattice.check_vertex(&self.positions)?;
        Ok(lattice.flat_unchecked(self.coins.iter().map(|c| c.index()), &self.positions))
    }

    pub fn from_flat(flat: usize, lattice: &LatticeSpec) -> Result<Self> {
        if flat >= lattice.state_len() {
            return Err(Error::ShapeMismatch(format!(
                "flat index {flat} exceeds state dimension {}",
                lattice.state_len()
            )));
        }
        let n = lattice.side();
        let mut coins = vec![Coin::L; lattice.dim()];
        let mut positions = vec![0; lattice.dim()];
        let mut rest = flat;
        for axis in (0..lattice.dim()).rev() {
            let local = rest % lattice.axis_len();
            rest /= lattice.axis_len();
            coins[axis] = if local < n { Coin::L } else { Coin::R };
            positions[axis] = local % n;
        }
        Ok(Self { coins, positions })
    }
}

/// Pure state over the composite coin ⊗ position basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    lattice: LatticeSpec,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The uniform superposition over every coin and position label.
    pub fn uniform(lattice: LatticeSpec) -> Self {
        let len = lattice.state_len();
        let a = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
        Self {
            lattice,
            amps: vec![a; len],
        }
    }

    pub fn basis(lattice: LatticeSpec, label: &BasisIndex) -> Result<Self> {
        let flat = label.to_flat(&lattice)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); lattice.state_len()];
        amps[flat] = Complex64::new(1.0, 0.0);
        Ok(Self { lattice, amps })
    }

    pub fn from_amplitudes(lattice: LatticeSpec, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != lattice.state_len() {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for state dimension {}",
                amps.len(),
                lattice.state_len()
            )));
        }
        Ok(Self { lattice, amps })
    }

    /// Haar-distributed random pure state (normalized complex Gaussian).
    pub fn random<R: Rng + ?Sized>(lattice: LatticeSpec, rng: &mut R) -> Self {
        let mut amps: Vec<Complex64> = (0..lattice.state_len())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Self { lattice, amps }
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Swaps storage with a buffer of the same length.
    pub(crate) fn swap_amplitudes(&mut self, other: &mut Vec<Complex64>) {
        debug_assert_eq!(other.len(), self.amps.len());
        std::mem::swap(&mut self.amps, other);
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, label: &BasisIndex) -> Result<Complex64> {
        Ok(self.amps[label.to_flat(&self.lattice)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by `e^{i phase}`.
    pub fn apply_global_phase(&mut self, phase: f64) {
        let z = Complex64::from_polar(1.0, phase);
        self.amps.iter_mut().for_each(|a| *a *= z);
    }

    /// Probability of finding the walker at `vertex`, summed over all `2^d`
    /// coin tuples.
    pub fn vertex_probability(&self, vertex: &[usize]) -> Result<f64> {
        self.lattice.check_vertex(vertex)?;
        Ok(self
            .lattice
            .vertex_flats(vertex)
            .into_iter()
            .map(|i| self.amps[i].norm_sqr())
            .sum())
    }

    /// Probability restricted to the two diagonal coin tuples `(L,…,L)` and
    /// `(R,…,R)` at `vertex`. For `d = 1` this is the vertex probability.
    pub fn diagonal_coin_probability(&self, vertex: &[usize]) -> Result<f64> {
        self.lattice.check_vertex(vertex)?;
        Ok(Coin::ALL
            .iter()
            .map(|&c| self.amps[self.lattice.diagonal_flat(c, vertex)].norm_sqr())
            .sum())
    }

    /// Total probability on a marked set under its measure.
    pub fn marked_probability(&self, marked: &MarkedSet) -> Result<f64> {
        marked.check_lattice(&self.lattice)?;
        Ok(self.probability_on(&marked.flat_indices(&self.lattice)))
    }

    pub(crate) fn probability_on(&self, flats: &[usize]) -> f64 {
        flats.iter().map(|&i| self.amps[i].norm_sqr()).sum()
    }
}

/// Which coin components over a marked vertex count as finding it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// All `2^d` coin tuples.
    #[default]
    Full,
    /// Only `(L,…,L)` and `(R,…,R)`. Identical to `Full` for `d = 1`.
    Diagonal,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Full => "full",
            Measure::Diagonal => "diagonal",
        }
    }
}

/// Sorted, duplicate-free set of marked vertices, together with the coin
/// components measured over each of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedSet {
    vertices: Vec<Vec<usize>>,
    #[serde(default)]
    measure: Measure,
}

impl MarkedSet {
    pub fn new(lattice: &LatticeSpec, mut vertices: Vec<Vec<usize>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidMarkedSet(
                "at least one vertex must be marked".into(),
            ));
        }
        for v in &vertices {
            lattice.check_vertex(v)?;
        }
        vertices.sort();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidMarkedSet("duplicate vertex".into()));
        }
        Ok(Self {
            vertices,
            measure: Measure::Full,
        })
    }

    pub fn with_measure(mut self, measure: Measure) -> Self {
        self.measure = measure;
        self
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    /// Cartesian product of the same per-axis marked positions on every axis.
    /// For `d = 1` this is just the given positions.
    pub fn product(lattice: &LatticeSpec, axis_marks: &[usize]) -> Result<Self> {
        let mut vertices: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..lattice.dim() {
            vertices = vertices
                .into_iter()
                .flat_map(|prefix| {
                    axis_marks.iter().map(move |&j| {
                        let mut v = prefix.clone();
                        v.push(j);
                        v
                    })
                })
                .collect();
        }
        Self::new(lattice, vertices)
    }

    /// `{(0, …, 0)}`.
    pub fn origin(lattice: &LatticeSpec) -> Self {
        Self {
            vertices: vec![vec![0; lattice.dim()]],
            measure: Measure::Full,
        }
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    /// `m`.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Uniform-guess success rate `m / N^d`, whatever the measure.
    pub fn baseline(&self, lattice: &LatticeSpec) -> f64 {
        self.len() as f64 / lattice.vertex_count() as f64
    }

    pub(crate) fn check_lattice(&self, lattice: &LatticeSpec) -> Result<()> {
        for v in &self.vertices {
            lattice.check_vertex(v).map_err(|_| {
                Error::InvalidMarkedSet(format!(
                    "vertex {v:?} does not fit a torus of dimension {} and side {}",
                    lattice.dim(),
                    lattice.side()
                ))
            })?;
        }
        Ok(())
    }

    /// Flat indices of the measured coin tuples over every marked vertex.
    pub(crate) fn flat_indices(&self, lattice: &LatticeSpec) -> Vec<usize> {
        match self.measure {
            Measure::Full => self
                .vertices
                .iter()
                .flat_map(|v| lattice.vertex_flats(v))
                .collect(),
            Measure::Diagonal => self
                .vertices
                .iter()
                .flat_map(|v| Coin::ALL.map(|c| lattice.diagonal_flat(c, v)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lat(d: usize, n: usize) -> LatticeSpec {
        LatticeSpec::new(d, n).unwrap()
    }

    #[test]
    fn lattice_validation() {
        assert!(LatticeSpec::new(0, 4).is_err());
        assert!(LatticeSpec::new(1, 1).is_err());
        assert!(LatticeSpec::new(64, 10).is_err());
        let l = lat(2, 3);
        assert_eq!(l.vertex_count(), 9);
        assert_eq!(l.state_len(), 36);
        assert_eq!(l.axis_stride(0), 6);
        assert_eq!(l.axis_stride(1), 1);
    }

    #[test]
    fn uniform_amplitudes() {
        let s = StateVector::uniform(lat(1, 4));
        assert_eq!(s.amplitudes().len(), 8);
        for a in s.amplitudes() {
            assert!((a.re - 0.353553).abs() < 1e-6);
            assert_eq!(a.im, 0.0);
        }
        let s = StateVector::uniform(lat(2, 3));
        assert_eq!(s.amplitudes().len(), 36);
        assert!(s.amplitudes().iter().all(|a| (a.re - 1.0 / 6.0).abs() < 1e-15));
        let s = StateVector::uniform(lat(1, 2));
        assert!(s.amplitudes().iter().all(|a| *a == Complex64::new(0.5, 0.0)));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vertex_probabilities() {
        let s = StateVector::uniform(lat(1, 4));
        assert!((s.vertex_probability(&[0]).unwrap() - 0.25).abs() < 1e-15);

        let s = StateVector::uniform(lat(2, 3));
        assert!((s.vertex_probability(&[0, 0]).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        assert!((s.diagonal_coin_probability(&[0, 0]).unwrap() - 2.0 / 36.0).abs() < 1e-15);

        let s = StateVector::basis(lat(1, 4), &BasisIndex::one(Coin::L, 2)).unwrap();
        assert_eq!(s.vertex_probability(&[2]).unwrap(), 1.0);

        let label = BasisIndex::new(vec![Coin::R, Coin::R], vec![0, 0]);
        let s = StateVector::basis(lat(2, 3), &label).unwrap();
        assert_eq!(s.diagonal_coin_probability(&[0, 0]).unwrap(), 1.0);

        let label = BasisIndex::new(vec![Coin::L, Coin::R], vec![0, 0]);
        let s = StateVector::basis(lat(2, 3), &label).unwrap();
        assert_eq!(s.vertex_probability(&[0, 0]).unwrap(), 1.0);
        assert_eq!(s.diagonal_coin_probability(&[0, 0]).unwrap(), 0.0);
    }

    #[test]
    fn out_of_range_vertex() {
        let s = StateVector::uniform(lat(1, 4));
        assert!(matches!(
            s.vertex_probability(&[4]),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(s.diagonal_coin_probability(&[0, 0]).is_err());
    }

    #[test]
    fn marked_set_rules() {
        let l = lat(1, 10);
        assert!(MarkedSet::new(&l, vec![]).is_err());
        assert!(MarkedSet::new(&l, vec![vec![1], vec![1]]).is_err());
        assert!(MarkedSet::new(&l, vec![vec![10]]).is_err());
        let m = MarkedSet::new(&l, vec![vec![6], vec![0]]).unwrap();
        assert_eq!(m.vertices(), &[vec![0], vec![6]]);
        assert_eq!(m.baseline(&l), 0.2);

        let l2 = lat(2, 4);
        let p = MarkedSet::product(&l2, &[0, 2]).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.baseline(&l2), 0.25);
        assert_eq!(MarkedSet::product(&l2, &[0]).unwrap(), MarkedSet::origin(&l2));
    }

    #[test]
    fn random_state_is_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = StateVector::random(lat(2, 4), &mut rng);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn diagonal_measure() {
        let l1 = LatticeSpec::new(1, 5).unwrap();
        let l2 = LatticeSpec::new(2, 5).unwrap();
        let psi1 = StateVector::uniform(l1);
        let psi2 = StateVector::uniform(l2);
        let full = MarkedSet::origin(&l1);
        let diag = full.clone().with_measure(Measure::Diagonal);
        assert_eq!(
            psi1.marked_probability(&full).unwrap(),
            psi1.marked_probability(&diag).unwrap()
        );
        let full = MarkedSet::product(&l2, &[0, 2]).unwrap();
        let diag = full.clone().with_measure(Measure::Diagonal);
        assert!((psi2.marked_probability(&full).unwrap() - 4.0 / 25.0).abs() < 1e-15);
        assert!((psi2.marked_probability(&diag).unwrap() - 2.0 / 25.0).abs() < 1e-15);
        assert_eq!(diag.baseline(&l2), full.baseline(&l2));
    }

    proptest! {
        #[test]
        fn flat_index_round_trip(d in 1usize..4, n in 2usize..7, seed in any::<u64>()) {
            let l = lat(d, n);
            let flat = (seed % l.state_len() as u64) as usize;
            let label = BasisIndex::from_flat(flat, &l).unwrap();
            prop_assert_eq!(label.to_flat(&l).unwrap(), flat);
        }

        #[test]
        fn probabilities_partition_unity(d in 1usize..3, n in 2usize..6, seed in any::<u64>()) {
            let l = lat(d, n);
            let s = StateVector::random(l, &mut ChaCha8Rng::seed_from_u64(seed));
            let mut total = 0.0;
            for v in 0..l.vertex_count() {
                let vertex: Vec<usize> = (0..d).rev().map(|a| (v / n.pow(a as u32)) % n).collect();
                let p = s.vertex_probability(&vertex).unwrap();
                let q = s.diagonal_coin_probability(&vertex).unwrap();
                prop_assert!(q <= p + 1e-15);
                total += p;
            }
            prop_assert!((total - 1.0).abs() < 1e-10);
        }
    }
}
