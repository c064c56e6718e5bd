//! Closed-system propagation by exact diagonalisation of each excitation
//! sector, and the atomic Kraus operators `E_ijk(t) = ⟨ijk| e^{−iHt} |000⟩`.

use crate::error::{Error, Result};
use crate::hilbert::{enumerate_sector, BasisState, FullSpace, SectorBasis, ATOMIC_DIM};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, AtomicOp, CMatrix, C64};
use crate::model::{build_hamiltonian, SystemParams};

/// Field photon-number outcomes `(n_cav1, n_fibre, n_cav2)` with at most two
/// photons, lexicographically ordered. `[0, 0, 0]` comes first.
pub const FIELD_OUTCOMES: [[u8; 3]; 10] = [
    [0, 0, 0],
    [0, 0, 1],
    [0, 0, 2],
    [0, 1, 0],
    [0, 1, 1],
    [0, 2, 0],
    [1, 0, 0],
    [1, 0, 1],
    [1, 1, 0],
    [2, 0, 0],
];

fn popcount(k: usize) -> usize {
    (k & 1) + ((k >> 1) & 1)
}

/// `e^{−iHt}` on each excitation sector.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub time: f64,
    pub blocks: Vec<CMatrix>,
}

impl Propagator {
    /// Block-diagonal 19×19 matrix on the layout of `space`.
    pub fn full_matrix(&self, space: &FullSpace) -> CMatrix {
        let d = space.dim();
        let mut u = CMatrix::zeros(d, d);
        for (n, block) in self.blocks.iter().enumerate() {
            let off = space.offset(n).expect("sector within range");
            u.view_mut((off, off), block.shape()).copy_from(block);
        }
        u
    }
}

/// Cached spectral data for one parameter set.
///
/// Building it costs three small eigendecompositions; afterwards any time can
/// be evaluated without further factorisation.
#[derive(Debug, Clone)]
pub struct Evolver {
    params: SystemParams,
    sectors: Vec<SectorSpectrum>,
}

#[derive(Debug, Clone)]
struct SectorSpectrum {
    basis: SectorBasis,
    values: Vec<f64>,
    vectors: CMatrix,
    /// Row of each atomic-vacuum input state in this sector: `(atomic index, row)`.
    inputs: Vec<(usize, usize)>,
}

impl SectorSpectrum {
    /// `Σ_m V[r, m] e^{−iλ_m t} conj(V[c, m])`
    fn amplitude(&self, phases: &[C64], r: usize, c: usize) -> C64 {
        let v = &self.vectors;
        phases
            .iter()
            .enumerate()
            .map(|(m, ph)| v[(r, m)] * ph * v[(c, m)].conj())
            .sum()
    }

    fn phases(&self, t: f64) -> Vec<C64> {
        self.values
            .iter()
            .map(|&l| C64::from_polar(1.0, -l * t))
            .collect()
    }
}

impl Evolver {
    pub fn new(params: &SystemParams) -> Self {
        let sectors = (0..=2)
            .map(|n| {
                let basis = enumerate_sector(n).expect("sector within range");
                let h = build_hamiltonian(params, n).expect("sector within range");
                let (values, vectors) = hermitian_eigen(&h.matrix);
                let inputs = (0..ATOMIC_DIM)
                    .filter_map(|k| basis.atomic_vacuum_index(k).map(|row| (k, row)))
                    .collect();
                SectorSpectrum {
                    basis,
                    values,
                    vectors,
                    inputs,
                }
            })
            .collect();
        Self {
            params: *params,
            sectors,
        }
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn sector_eigenvalues(&self, n: usize) -> &[f64] {
        &self.sectors[n].values
    }

    pub fn propagator(&self, t: f64) -> Propagator {
        let blocks = self
            .sectors
            .iter()
            .map(|s| {
                let d = s.values.len();
                let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(s.phases(t)));
                debug_assert_eq!(diag.nrows(), d);
                &s.vectors * diag * s.vectors.adjoint()
            })
            .collect();
        Propagator { time: t, blocks }
    }

    pub fn kraus_set(&self, t: f64) -> KrausSet {
        let mut operators: Vec<([u8; 3], AtomicOp)> = FIELD_OUTCOMES
            .iter()
            .map(|f| (*f, AtomicOp::zeros()))
            .collect();
        for sector in &self.sectors {
            let phases = sector.phases(t);
            for &(col_atomic, col) in &sector.inputs {
                for (field, op) in operators.iter_mut() {
                    let photons: usize = field.iter().map(|&n| n as usize).sum();
                    for row_atomic in 0..ATOMIC_DIM {
                        if popcount(row_atomic) + photons != sector.basis.excitation_count() {
                            continue;
                        }
                        let out = BasisState::new(
                            (row_atomic >> 1) as u8,
                            (row_atomic & 1) as u8,
                            *field,
                        );
                        let row = sector
                            .basis
                            .index_of(&out)
                            .expect("state with matching excitation count is in sector");
                        op[(row_atomic, col_atomic)] = sector.amplitude(&phases, row, col);
                    }
                }
            }
        }
        KrausSet { time: t, operators }
    }

    /// The vacuum-outcome Kraus operator alone; cheaper than a full set.
    pub fn vacuum_kraus(&self, t: f64) -> AtomicOp {
        let mut e = AtomicOp::zeros();
        for sector in &self.sectors {
            let phases = sector.phases(t);
            for &(r_atomic, row) in &sector.inputs {
                for &(c_atomic, col) in &sector.inputs {
                    e[(r_atomic, c_atomic)] = sector.amplitude(&phases, row, col);
                }
            }
        }
        e
    }

    pub fn leakage(&self, t: f64) -> f64 {
        let e = self.vacuum_kraus(t);
        let kept = (e.adjoint() * e).trace().re / ATOMIC_DIM as f64;
        (1.0 - kept).clamp(0.0, 1.0)
    }

    /// Largest probability, over pure atomic inputs, that the field ends up
    /// outside the vacuum. Diagnostic only.
    pub fn worst_case_leakage(&self, t: f64) -> f64 {
        let e = self.vacuum_kraus(t);
        let p = e.adjoint() * e;
        let m = CMatrix::from_fn(4, 4, |i, j| p[(i, j)]);
        let min = hermitian_eigenvalues(&m)[0];
        (1.0 - min).clamp(0.0, 1.0)
    }
}

/// Atomic Kraus operators indexed by the field outcome.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub time: f64,
    pub operators: Vec<([u8; 3], AtomicOp)>,
}

impl KrausSet {
    /// Wrap arbitrary operators, e.g. a single unitary.
    pub fn from_operators(time: f64, ops: impl IntoIterator<Item = AtomicOp>) -> Self {
        let operators = ops
            .into_iter()
            .enumerate()
            .map(|(k, op)| {
                let tag = FIELD_OUTCOMES.get(k).copied().unwrap_or([u8::MAX; 3]);
                (tag, op)
            })
            .collect();
        Self { time, operators }
    }

    pub fn get(&self, field: [u8; 3]) -> Option<&AtomicOp> {
        self.operators
            .iter()
            .find(|(f, _)| *f == field)
            .map(|(_, op)| op)
    }

    /// `E_000`, the operator for the field found in vacuum.
    pub fn vacuum(&self) -> &AtomicOp {
        self.get([0, 0, 0]).unwrap_or_else(|| &self.operators[0].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AtomicOp> {
        self.operators.iter().map(|(_, op)| op)
    }

    /// `max |Σ E†E − I|`
    pub fn completeness_defect(&self) -> f64 {
        let sum: AtomicOp = self.iter().map(|e| e.adjoint() * e).sum();
        (sum - AtomicOp::identity())
            .iter()
            .fold(0.0, |acc, z| acc.max(z.norm()))
    }
}

pub fn propagator(params: &SystemParams, t: f64) -> Propagator {
    Evolver::new(params).propagator(t)
}

pub fn kraus_set(params: &SystemParams, t: f64) -> KrausSet {
    Evolver::new(params).kraus_set(t)
}

/// `1 − Tr[E₀₀₀†E₀₀₀]/4`: the input-averaged probability that photons remain
/// in the cavities or the fibre at time `t`.
pub fn leakage(params: &SystemParams, t: f64) -> f64 {
    Evolver::new(params).leakage(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecouplingTime {
    pub time: f64,
    pub leakage: f64,
}

/// Local minima of the leakage on `(0, t_max]`.
///
/// The leakage is sampled every `dt`; each interior grid minimum is refined
/// by golden-section search to a resolution of `dt·1e−3`. An empty result
/// means the leakage is monotone on the window.
pub fn find_decoupling_times(
    params: &SystemParams,
    t_max: f64,
    dt: f64,
) -> Result<Vec<DecouplingTime>> {
    Evolver::new(params).decoupling_times(t_max, dt)
}

impl Evolver {
    pub fn decoupling_times(&self, t_max: f64, dt: f64) -> Result<Vec<DecouplingTime>> {
        if !(dt > 0.0) || !(dt < t_max) || !t_max.is_finite() {
            return Err(Error::Domain {
                what: "find_decoupling_times",
                detail: format!("need 0 < dt < t_max, got dt = {dt}, t_max = {t_max}"),
            });
        }
        let n = (t_max / dt + 1e-9).floor() as usize;
        let grid: Vec<f64> = (0..=n).map(|k| self.leakage(k as f64 * dt)).collect();
        let mut out = Vec::new();
        for k in 1..n {
            if grid[k] < grid[k - 1] && grid[k] <= grid[k + 1] {
                let lo = (k - 1) as f64 * dt;
                let hi = (k + 1) as f64 * dt;
                let time = golden_section_min(|t| self.leakage(t), lo, hi, dt * 1e-3);
                out.push(DecouplingTime {
                    time,
                    leakage: self.leakage(time),
                });
            }
        }
        Ok(out)
    }
}

/// Keep the deepest minima that are at least `min_separation` apart, returned
/// in time order. Shallow ripples next to a genuine decoupling are dropped.
pub fn select_gate_times(minima: &[DecouplingTime], min_separation: f64) -> Vec<DecouplingTime> {
    let mut by_depth = minima.to_vec();
    by_depth.sort_by(|a, b| a.leakage.total_cmp(&b.leakage));
    let mut kept: Vec<DecouplingTime> = Vec::new();
    for m in by_depth {
        if kept
            .iter()
            .all(|k| (k.time - m.time).abs() >= min_separation)
        {
            kept.push(m);
        }
    }
    kept.sort_by(|a, b| a.time.total_cmp(&b.time));
    kept
}

/// Minimise a unimodal `f` on `[lo, hi]` to interval width `tol`.
pub(crate) fn golden_section_min(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}
