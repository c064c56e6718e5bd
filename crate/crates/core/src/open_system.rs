//! Lossy dynamics: the Lindblad generator on the 19-state space, its exact
//! exponential, an RK4 cross-check, and process tomography of the atoms.
//!
//! `ρ̇ = −i[H,ρ] + (γ/2)Σⱼ L[aⱼ]ρ + (κ/2)Σⱼ L[σⱼ⁻]ρ + (β/2) L[b]ρ` with
//! `L[o]ρ = 2oρo† − o†oρ − ρo†o`. Density matrices are vectorised row-major
//! (see [`crate::linalg::vectorize`]).

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::gates::{ChannelMatrix, ChannelOrigin};
use crate::hilbert::{full_space, FullSpace, Mode, ATOMIC_DIM};
use crate::linalg::{
    expm, hermitian_eigenvalues, hermiticity_defect, matmul, max_abs, trace, unvectorize,
    vectorize, AtomicOp, CMatrix, Superop, C64, I,
};
use crate::model::{full_hamiltonian, SystemParams};

const TRACE_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-8;
/// Looser bound applied to evolved states before reporting a failure.
const EVOLVED_POSITIVITY_TOL: f64 = 1e-6;
const CHANNEL_TOL: f64 = 1e-6;

/// State of atoms and field on [`full_space`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let d = matrix.nrows();
        if matrix.shape() != (d, d) || d != full_space().dim() {
            return Err(Error::InvalidState(format!(
                "expected a {n}×{n} matrix, got {:?}",
                matrix.shape(),
                n = full_space().dim()
            )));
        }
        let herm = hermiticity_defect(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr = trace(&matrix);
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// `ρ_atoms ⊗ |000⟩⟨000|`
    pub fn from_atomic(rho_atoms: &AtomicOp) -> Result<Self> {
        let space = full_space();
        Self::new(embed_atomic(rho_atoms, &space))
    }

    /// Pure state `|ψ⟩⊗|000⟩` from atomic amplitudes.
    pub fn from_atomic_pure(psi: &nalgebra::Vector4<C64>) -> Result<Self> {
        Self::from_atomic(&(psi * psi.adjoint()))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_inner(self) -> CMatrix {
        self.matrix
    }

    /// `⟨N⟩`, total excitation number.
    pub fn mean_excitations(&self) -> f64 {
        let space = full_space();
        (0..space.dim())
            .map(|i| self.matrix[(i, i)].re * space.state(i).excitations() as f64)
            .sum()
    }
}

fn embed_atomic(op: &AtomicOp, space: &FullSpace) -> CMatrix {
    let d = space.dim();
    let mut m = CMatrix::zeros(d, d);
    for a in 0..ATOMIC_DIM {
        for b in 0..ATOMIC_DIM {
            m[(space.atomic_vacuum_index(a), space.atomic_vacuum_index(b))] = op[(a, b)];
        }
    }
    m
}

/// Trace over the field; works for any operator, Hermitian or not.
pub fn partial_trace_matrix(m: &CMatrix, space: &FullSpace) -> AtomicOp {
    let mut out = AtomicOp::zeros();
    for (i, si) in space.states().iter().enumerate() {
        for (j, sj) in space.states().iter().enumerate() {
            if si.field() == sj.field() {
                out[(si.atomic_index(), sj.atomic_index())] += m[(i, j)];
            }
        }
    }
    out
}

pub fn partial_trace_field(rho: &DensityMatrix) -> AtomicOp {
    partial_trace_matrix(rho.matrix(), &full_space())
}

/// One dissipative channel `(rate/2)·L[o]`, with `o` stored sparsely as
/// `(row, col, amplitude)` triples.
#[derive(Debug, Clone)]
struct Dissipator {
    entries: Vec<(usize, usize, f64)>,
    rate: f64,
}

#[derive(Debug, Clone)]
pub struct Liouvillian {
    generator: CMatrix,
    /// `H − (i/2) Σ rate·o†o`
    effective_hamiltonian: CMatrix,
    dissipators: Vec<Dissipator>,
    params: SystemParams,
    space: FullSpace,
}

pub fn build_liouvillian(params: &SystemParams) -> Liouvillian {
    let space = full_space();
    let h = full_hamiltonian(params, &space);
    let d = space.dim();
    let id = CMatrix::identity(d, d);

    let mut generator = (h.kronecker(&id) - id.kronecker(&h.transpose())) * (-I);
    let mut dissipators = Vec::new();
    let mut effective_hamiltonian = h.clone();
    for (mode, rate) in [
        (Mode::Cavity1, params.gamma),
        (Mode::Cavity2, params.gamma),
        (Mode::Atom1, params.kappa),
        (Mode::Atom2, params.kappa),
        (Mode::Fibre, params.beta),
    ] {
        if rate == 0.0 {
            continue;
        }
        let o = space.lowering(mode);
        let n = o.adjoint() * &o;
        let term = o.kronecker(&o.conjugate()) * C64::new(2.0, 0.0)
            - n.kronecker(&id)
            - id.kronecker(&n.transpose());
        generator += term * C64::new(rate / 2.0, 0.0);
        effective_hamiltonian -= &n * C64::new(0.0, rate / 2.0);
        let entries = o
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(k, z)| (k % d, k / d, z.re))
            .collect();
        dissipators.push(Dissipator { entries, rate });
    }
    Liouvillian {
        generator,
        effective_hamiltonian,
        dissipators,
        params: *params,
        space,
    }
}

impl Liouvillian {
    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn space(&self) -> &FullSpace {
        &self.space
    }

    /// Induced ∞-norm (max row sum) of the generator.
    pub fn norm_inf(&self) -> f64 {
        self.generator
            .row_iter()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `vec(I)ᵀ·L`; zero when the generator preserves trace.
    pub fn trace_defect(&self) -> f64 {
        let d = self.space.dim();
        let id = vectorize(&CMatrix::identity(d, d));
        let left = id.transpose() * &self.generator;
        left.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// `e^{Lt}` by scaling and squaring.
    pub fn propagator(&self, t: f64) -> CMatrix {
        expm(&(&self.generator * C64::new(t, 0.0)))
    }

    /// Right-hand side in matrix form, independent of the superoperator:
    /// `−i(H_eff ρ − ρ H_eff†) + Σ rate·o ρ o†`.
    fn rhs(&self, rho: &CMatrix) -> CMatrix {
        let h = &self.effective_hamiltonian;
        let mut out = (h * rho - rho * h.adjoint()) * (-I);
        for dis in &self.dissipators {
            for &(i, k, a) in &dis.entries {
                for &(j, l, b) in &dis.entries {
                    out[(i, j)] += rho[(k, l)] * (dis.rate * a * b);
                }
            }
        }
        out
    }

    fn rk4(&self, rho0: &CMatrix, t: f64, step: f64) -> CMatrix {
        let n = (t / step).ceil().max(0.0) as usize;
        if n == 0 {
            return rho0.clone();
        }
        let h = t / n as f64;
        let half = C64::new(h / 2.0, 0.0);
        let full = C64::new(h, 0.0);
        let sixth = C64::new(h / 6.0, 0.0);
        let mut rho = rho0.clone();
        for _ in 0..n {
            let k1 = self.rhs(&rho);
            let k2 = self.rhs(&(&rho + &k1 * half));
            let k3 = self.rhs(&(&rho + &k2 * half));
            let k4 = self.rhs(&(&rho + &k3 * full));
            rho += (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * sixth;
        }
        rho
    }

    /// RK4 at steps `h` and `h/2`; returns the finer solution and the
    /// Richardson estimate `max|ρ_{h/2} − ρ_h| / 15` of its error.
    pub fn rk4_with_error(&self, rho0: &DensityMatrix, t: f64, step: f64) -> (CMatrix, f64) {
        let coarse = self.rk4(rho0.matrix(), t, step);
        let fine = self.rk4(rho0.matrix(), t, step / 2.0);
        let err = max_abs(&(&fine - &coarse)) / 15.0;
        (fine, err)
    }

    /// Column `k` of `e^{Lt}` applied to each `|m⟩⟨n| ⊗ |000⟩⟨000|`, as a
    /// 361×16 block ordered by `4m + n`.
    fn probe_columns(&self, prop: &CMatrix) -> CMatrix {
        let d = self.space.dim();
        let mut cols = CMatrix::zeros(d * d, ATOMIC_DIM * ATOMIC_DIM);
        for m in 0..ATOMIC_DIM {
            for n in 0..ATOMIC_DIM {
                let src = self.space.atomic_vacuum_index(m) * d + self.space.atomic_vacuum_index(n);
                cols.set_column(m * ATOMIC_DIM + n, &prop.column(src));
            }
        }
        cols
    }

    fn channel_from_probes(&self, probes: &CMatrix, t: f64) -> Result<ChannelMatrix> {
        let d = self.space.dim();
        let mut map = Superop::zeros();
        for k in 0..ATOMIC_DIM * ATOMIC_DIM {
            let evolved = unvectorize(&DVector::from_column_slice(probes.column(k).as_slice()), d);
            let red = partial_trace_matrix(&evolved, &self.space);
            for a in 0..ATOMIC_DIM {
                for b in 0..ATOMIC_DIM {
                    map[(a * ATOMIC_DIM + b, k)] = red[(a, b)];
                }
            }
        }
        let ch = ChannelMatrix::new(map, ChannelOrigin::Dissipative);
        ch.validate(CHANNEL_TOL, CHANNEL_TOL)
            .map_err(|e| Error::IntegrationFailure {
                time: t,
                detail: e.to_string(),
            })?;
        Ok(ch)
    }

    /// `1 − (1/4) Σₘ ⟨field vacuum⟩` over the evolved diagonal probes; for a
    /// closed system this equals `1 − Tr[E†₀₀₀E₀₀₀]/4`.
    fn probe_leakage(&self, probes: &CMatrix) -> f64 {
        let d = self.space.dim();
        let mut stay = 0.0;
        for m in 0..ATOMIC_DIM {
            let col = probes.column(m * ATOMIC_DIM + m);
            for a in 0..ATOMIC_DIM {
                let v = self.space.atomic_vacuum_index(a);
                stay += col[v * d + v].re;
            }
        }
        1.0 - stay / ATOMIC_DIM as f64
    }

    /// Atomic channels at `t_start + k·dt` for `k = 0..=steps`, advancing the
    /// 16 tomography probes with one precomputed step propagator.
    pub fn tomography_series(
        &self,
        t_start: f64,
        dt: f64,
        steps: usize,
    ) -> Result<Vec<TomographyPoint>> {
        let mut probes = self.probe_columns(&self.propagator(t_start));
        let step = self.propagator(dt);
        let mut out = Vec::with_capacity(steps + 1);
        for k in 0..=steps {
            let time = t_start + k as f64 * dt;
            if k > 0 {
                probes = matmul(&step, &probes);
            }
            out.push(TomographyPoint {
                time,
                channel: self.channel_from_probes(&probes, time)?,
                leakage: self.probe_leakage(&probes),
            });
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct TomographyPoint {
    pub time: f64,
    pub channel: ChannelMatrix,
    pub leakage: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvolveMethod {
    /// Matrix exponential of the full generator.
    Exact,
    /// Classical fixed-step RK4; `step` must satisfy `step·‖L‖ ≤ 0.1`.
    Rk4 { step: f64 },
}

pub fn evolve(
    li: &Liouvillian,
    rho0: &DensityMatrix,
    t: f64,
    method: EvolveMethod,
) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(Error::Domain {
            what: "evolve",
            detail: format!("t must be non-negative, got {t}"),
        });
    }
    let d = li.space.dim();
    let out = match method {
        EvolveMethod::Exact => {
            let v = li.propagator(t) * vectorize(rho0.matrix());
            unvectorize(&v, d)
        }
        EvolveMethod::Rk4 { step } => {
            let bound = step * li.norm_inf();
            if !(step > 0.0) || bound > 0.1 {
                return Err(Error::Domain {
                    what: "evolve",
                    detail: format!("RK4 step {step} gives h·‖L‖ = {bound:.3} > 0.1"),
                });
            }
            li.rk4_with_error(rho0, t, step).0
        }
    };
    let min = hermitian_eigenvalues(&out)[0];
    if min < -EVOLVED_POSITIVITY_TOL {
        return Err(Error::IntegrationFailure {
            time: t,
            detail: format!("state lost positivity (eigenvalue {min:.3e})"),
        });
    }
    DensityMatrix::new(out).map_err(|e| Error::IntegrationFailure {
        time: t,
        detail: e.to_string(),
    })
}

/// Reconstruct the atomic channel at time `t` by evolving the operator basis
/// `|m⟩⟨n| ⊗ |000⟩⟨000|` and tracing out the field.
pub fn tomography_channel(li: &Liouvillian, t: f64) -> Result<ChannelMatrix> {
    let probes = li.probe_columns(&li.propagator(t));
    li.channel_from_probes(&probes, t)
}
