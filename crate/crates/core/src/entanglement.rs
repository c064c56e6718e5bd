//! Two-qubit concurrence and entanglement of formation.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, AtomicOp, CMatrix, C64};

const TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: AtomicOp,
}

fn to_dynamic(m: &AtomicOp) -> CMatrix {
    CMatrix::from_fn(4, 4, |i, j| m[(i, j)])
}

impl TwoQubitState {
    pub fn new(matrix: AtomicOp) -> Result<Self> {
        let herm = (matrix - matrix.adjoint())
            .iter()
            .fold(0.0_f64, |a, z| a.max(z.norm()));
        if herm > TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eigenvalues(&to_dynamic(&matrix))[0];
        if min < -TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn pure(psi: &nalgebra::Vector4<C64>) -> Result<Self> {
        let psi = psi.unscale(psi.norm());
        Self::new(psi * psi.adjoint())
    }

    pub fn matrix(&self) -> &AtomicOp {
        &self.matrix
    }
}

/// `σy ⊗ σy` in the computational basis.
fn sigma_yy() -> AtomicOp {
    let z = C64::new(0.0, 0.0);
    let p = C64::new(1.0, 0.0);
    let m = C64::new(-1.0, 0.0);
    AtomicOp::new(z, z, z, m, z, z, p, z, z, p, z, z, m, z, z, z)
}

/// Spin-flipped state `(σy⊗σy) ρ* (σy⊗σy)`.
pub fn spin_flip(rho: &AtomicOp) -> AtomicOp {
    let yy = sigma_yy();
    yy * rho.conjugate() * yy
}

/// Wootters concurrence. With `ρ = W W†` built from the eigen-decomposition,
/// the `λᵢ` are the singular values of the symmetric matrix `Wᵀ (σy⊗σy) W`.
pub fn concurrence(rho: &TwoQubitState) -> f64 {
    let (values, vectors) = hermitian_eigen(&to_dynamic(rho.matrix()));
    let w = CMatrix::from_fn(4, 4, |r, c| vectors[(r, c)] * values[c].max(0.0).sqrt());
    let tau = w.transpose() * to_dynamic(&sigma_yy()) * &w;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0)
}

/// Binary entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0)
}

/// Entanglement of formation in ebits.
pub fn entanglement_of_formation(rho: &TwoQubitState) -> f64 {
    eof_from_concurrence(concurrence(rho))
}
