//! Scoring atomic channels against target two-qubit unitaries.
//!
//! Channels are stored as 16×16 superoperators on row-major vectorised 4×4
//! operators, so `ρ ↦ Σ E ρ E†` becomes `Σ E ⊗ E*`. The Haar-averaged gate
//! fidelity follows from the entanglement fidelity,
//! `F = (d·F_e + 1)/(d + 1)` with `F_e = Tr[(U ⊗ U*)† S]/d²` and `d = 4`.

use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dynamics::KrausSet;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, AtomicOp, CMatrix, Superop, C64};

const D: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Swap,
    ControlledPhase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateTarget {
    pub kind: GateKind,
    /// Entangling phase ϑ; zero for swap.
    pub theta: f64,
    pub matrix: AtomicOp,
}

fn diag_phases(theta1: f64, theta2: f64, theta3: f64) -> AtomicOp {
    AtomicOp::from_diagonal(&nalgebra::Vector4::new(
        C64::new(1.0, 0.0),
        C64::from_polar(1.0, theta1),
        C64::from_polar(1.0, theta2),
        C64::from_polar(1.0, theta3),
    ))
}

pub fn swap_matrix() -> AtomicOp {
    let o = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    AtomicOp::new(o, z, z, z, z, z, o, z, z, o, z, z, z, z, z, o)
}

impl GateTarget {
    pub fn swap() -> Self {
        Self {
            kind: GateKind::Swap,
            theta: 0.0,
            matrix: swap_matrix(),
        }
    }

    /// `Diag(1, 1, 1, e^{iϑ})`
    pub fn cphase(theta: f64) -> Self {
        Self {
            kind: GateKind::ControlledPhase,
            theta: theta.rem_euclid(TAU),
            matrix: diag_phases(0.0, 0.0, theta),
        }
    }

    /// `Diag(1, e^{iϑ₁}, e^{iϑ₂}, e^{i(ϑ+ϑ₁+ϑ₂)})`, a controlled phase dressed
    /// with local phase gates.
    pub fn cphase_with_local_phases(theta: f64, theta1: f64, theta2: f64) -> Self {
        Self {
            kind: GateKind::ControlledPhase,
            theta: theta.rem_euclid(TAU),
            matrix: diag_phases(theta1, theta2, theta + theta1 + theta2),
        }
    }

    /// Swap followed by local phase gates `diag(1, e^{iα}) ⊗ diag(1, e^{iβ})`.
    pub fn swap_with_local_phases(alpha: f64, beta: f64) -> Self {
        Self {
            kind: GateKind::Swap,
            theta: 0.0,
            matrix: diag_phases(beta, alpha, alpha + beta) * swap_matrix(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelOrigin {
    Closed,
    Dissipative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    pub map: Superop,
    pub origin: ChannelOrigin,
}

fn vec_row_major(m: &AtomicOp) -> nalgebra::SVector<C64, 16> {
    nalgebra::SVector::from_fn(|k, _| m[(k / D, k % D)])
}

fn unvec_row_major(v: &nalgebra::SVector<C64, 16>) -> AtomicOp {
    AtomicOp::from_fn(|i, j| v[i * D + j])
}

/// `A ⊗ B*`, the superoperator of `ρ ↦ A ρ B†`.
pub fn conjugation_superop(a: &AtomicOp, b: &AtomicOp) -> Superop {
    a.kronecker(&b.conjugate())
}

impl ChannelMatrix {
    pub fn new(map: Superop, origin: ChannelOrigin) -> Self {
        Self { map, origin }
    }

    pub fn identity() -> Self {
        Self::new(Superop::identity(), ChannelOrigin::Closed)
    }

    /// `ρ ↦ U ρ U†`
    pub fn unitary(u: &AtomicOp) -> Self {
        Self::new(conjugation_superop(u, u), ChannelOrigin::Closed)
    }

    /// `ρ ↦ Tr(ρ)·I/4`
    pub fn completely_depolarizing() -> Self {
        let mut map = Superop::zeros();
        for a in 0..D {
            for b in 0..D {
                map[(a * D + a, b * D + b)] = C64::new(0.25, 0.0);
            }
        }
        Self::new(map, ChannelOrigin::Closed)
    }

    pub fn apply(&self, rho: &AtomicOp) -> AtomicOp {
        unvec_row_major(&(self.map * vec_row_major(rho)))
    }

    /// `self` followed by `ρ ↦ U ρ U†`.
    pub fn then_unitary(&self, u: &AtomicOp) -> Self {
        Self::new(conjugation_superop(u, u) * self.map, self.origin)
    }

    /// Largest deviation of `Tr Λ(|m⟩⟨n|)` from `δ_mn`.
    pub fn trace_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for m in 0..D {
            for n in 0..D {
                let tr: C64 = (0..D).map(|i| self.map[(i * D + i, m * D + n)]).sum();
                let expect = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((tr - expect).norm());
            }
        }
        worst
    }

    /// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`.
    pub fn choi(&self) -> CMatrix {
        CMatrix::from_fn(D * D, D * D, |r, c| {
            let (i, m) = (r / D, r % D);
            let (j, n) = (c / D, c % D);
            self.map[(m * D + n, i * D + j)]
        })
    }

    pub fn choi_min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.choi())[0]
    }

    /// Check trace preservation and complete positivity.
    pub fn validate(&self, trace_tol: f64, positivity_tol: f64) -> Result<()> {
        let tp = self.trace_defect();
        if tp > trace_tol {
            return Err(Error::Inconsistent(format!(
                "channel not trace preserving: defect {tp:.3e} > {trace_tol:.1e}"
            )));
        }
        let min = self.choi_min_eigenvalue();
        if min < -positivity_tol {
            return Err(Error::Inconsistent(format!(
                "channel not completely positive: Choi eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }
}

pub fn channel_from_kraus(ks: &KrausSet) -> Result<ChannelMatrix> {
    let defect = ks.completeness_defect();
    if defect > 1e-8 {
        return Err(Error::Inconsistent(format!(
            "Kraus completeness violated by {defect:.3e}"
        )));
    }
    let map = ks.iter().map(|e| conjugation_superop(e, e)).sum();
    Ok(ChannelMatrix::new(map, ChannelOrigin::Closed))
}

/// `F_e = Tr[(U ⊗ U*)† S] / d²`
pub fn entanglement_fidelity(ch: &ChannelMatrix, target: &AtomicOp) -> f64 {
    let su = conjugation_superop(target, target);
    let overlap: C64 = su
        .iter()
        .zip(ch.map.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    overlap.re / (D * D) as f64
}

/// Haar average over pure inputs of `⟨ψ|U† Λ(|ψ⟩⟨ψ|) U|ψ⟩`.
pub fn average_fidelity(ch: &ChannelMatrix, target: &GateTarget) -> f64 {
    average_fidelity_unitary(ch, &target.matrix)
}

pub fn average_fidelity_unitary(ch: &ChannelMatrix, u: &AtomicOp) -> f64 {
    let fe = entanglement_fidelity(ch, u);
    ((D as f64 * fe + 1.0) / (D as f64 + 1.0)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Sample-mean estimate of [`average_fidelity`] over Haar-random pure states
/// (normalised complex Gaussian vectors). Deterministic for a fixed seed.
pub fn average_fidelity_monte_carlo(
    ch: &ChannelMatrix,
    target: &GateTarget,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples < 100 {
        return Err(Error::Domain {
            what: "average_fidelity_monte_carlo",
            detail: format!("need at least 100 samples, got {samples}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let psi = haar_state(&mut rng);
        let f = pure_state_fidelity(ch, &target.matrix, &psi);
        sum += f;
        sum_sq += f * f;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(MonteCarloEstimate {
        mean,
        std_error: (var / n).sqrt(),
    })
}

pub fn haar_state(rng: &mut impl rand::Rng) -> nalgebra::Vector4<C64> {
    let v = nalgebra::Vector4::from_fn(|_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    v.unscale(v.norm())
}

/// `⟨ψ|U† Λ(|ψ⟩⟨ψ|) U|ψ⟩`
pub fn pure_state_fidelity(ch: &ChannelMatrix, u: &AtomicOp, psi: &nalgebra::Vector4<C64>) -> f64 {
    let out = ch.apply(&(psi * psi.adjoint()));
    let ideal = u * psi;
    (ideal.adjoint() * out * ideal)[(0, 0)].re
}

/// Phases read off the diagonal of `E_000`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlledPhase {
    /// `arg E₁₁ − arg E₁₀ − arg E₀₁ + arg E₀₀`, in `[0, 2π)`.
    pub theta: f64,
    pub theta1: f64,
    pub theta2: f64,
    /// Weight of the diagonal in `E_000`, `Σ|diag|² / Tr[E†E]`.
    pub diag_dominance: f64,
}

impl ControlledPhase {
    /// `ϑ` folded into `[0, π]`. `U_ϑ` and `U_{−ϑ}` differ by local
    /// operations, so this is the local invariant.
    pub fn entangling_angle(&self) -> f64 {
        if self.theta > PI {
            TAU - self.theta
        } else {
            self.theta
        }
    }

    pub fn from_operator(e: &AtomicOp) -> Result<Self> {
        for k in 0..D {
            let modulus = e[(k, k)].norm();
            if modulus < 1e-6 {
                return Err(Error::PhaseUndefined { index: k, modulus });
            }
        }
        let arg = |k: usize| e[(k, k)].arg();
        let theta1 = (arg(1) - arg(0)).rem_euclid(TAU);
        let theta2 = (arg(2) - arg(0)).rem_euclid(TAU);
        let theta = (arg(3) - arg(2) - arg(1) + arg(0)).rem_euclid(TAU);
        let diag: f64 = (0..D).map(|k| e[(k, k)].norm_sqr()).sum();
        let total = e.norm_squared();
        Ok(Self {
            theta,
            theta1,
            theta2,
            diag_dominance: diag / total,
        })
    }

    /// Same phases read from a channel, through the coherences
    /// `S[(a,0),(a,0)] = Σₖ Eₖ[a,a] Eₖ[0,0]*`. Used when no Kraus set exists.
    pub fn from_channel(ch: &ChannelMatrix) -> Result<Self> {
        let coh = |a: usize| ch.map[(a * D, a * D)];
        for k in 1..D {
            let modulus = coh(k).norm();
            if modulus < 1e-6 {
                return Err(Error::PhaseUndefined { index: k, modulus });
            }
        }
        let arg = |k: usize| coh(k).arg();
        let diag: f64 = (0..D).map(|a| ch.map[(a * D + a, a * D + a)].re).sum();
        Ok(Self {
            theta: (arg(3) - arg(2) - arg(1)).rem_euclid(TAU),
            theta1: arg(1).rem_euclid(TAU),
            theta2: arg(2).rem_euclid(TAU),
            diag_dominance: diag / D as f64,
        })
    }
}

pub fn extract_controlled_phase(ks: &KrausSet) -> Result<ControlledPhase> {
    ControlledPhase::from_operator(ks.vacuum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseOptimized {
    pub fidelity: f64,
    pub theta1: f64,
    pub theta2: f64,
}

/// Best fidelity against `Diag(1, e^{iϑ₁}, e^{iϑ₂}, e^{i(ϑ+ϑ₁+ϑ₂)})` over the
/// local phases `ϑ₁`, `ϑ₂`.
pub fn fidelity_local_phase_optimized(ch: &ChannelMatrix, theta: f64) -> PhaseOptimized {
    optimize_local_phases(ch, &AtomicOp::identity(), theta)
}

/// Best fidelity against `SWAP` dressed with local phase gates.
pub fn swap_fidelity_phase_optimized(ch: &ChannelMatrix) -> PhaseOptimized {
    optimize_local_phases(ch, &swap_matrix(), 0.0)
}

/// Maximise the fidelity against `Diag(1, e^{ix₁}, e^{ix₂}, e^{i(ϑ+x₁+x₂)})·B`.
///
/// In either phase alone the fidelity is `a + p cos x + q sin x`, so each
/// coordinate step is solved exactly from three evaluations.
pub fn optimize_local_phases(ch: &ChannelMatrix, base: &AtomicOp, theta: f64) -> PhaseOptimized {
    let undone = ch.then_unitary(&base.adjoint());
    let fid =
        |x1: f64, x2: f64| average_fidelity_unitary(&undone, &diag_phases(x1, x2, theta + x1 + x2));

    // S[(a,0),(a,0)] ≈ E_aa E_00* for a near-diagonal dominant Kraus operator
    let guess = |a: usize| undone.map[(a * D, a * D)].arg();
    let mut x = [guess(1), guess(2)];
    let mut best = fid(x[0], x[1]);
    for _ in 0..500 {
        let before = x;
        for k in 0..2 {
            let eval = |v: f64| {
                let mut y = x;
                y[k] = v;
                fid(y[0], y[1])
            };
            let f0 = eval(0.0);
            let f1 = eval(PI / 2.0);
            let f2 = eval(PI);
            let a = 0.5 * (f0 + f2);
            let p = 0.5 * (f0 - f2);
            let q = f1 - a;
            x[k] = q.atan2(p);
        }
        best = fid(x[0], x[1]);
        let moved = (0..2)
            .map(|k| {
                let d = (x[k] - before[k]).rem_euclid(TAU);
                d.min(TAU - d)
            })
            .fold(0.0, f64::max);
        if moved < 1e-6 {
            break;
        }
    }
    PhaseOptimized {
        fidelity: best,
        theta1: x[0].rem_euclid(TAU),
        theta2: x[1].rem_euclid(TAU),
    }
}
