//! Physical parameters and the rotating-frame Hamiltonian of two atoms coupled
//! to their cavities, with the cavities joined by a single fibre mode.
//!
//! All rates are in units of a reference coupling `g` and times in `1/g`.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::hilbert::{enumerate_sector, full_space, BasisState, FullSpace, Mode, MAX_EXCITATIONS};
use crate::linalg::{hermitian_eigenvalues, CMatrix, C64};

/// Couplings, detuning, fibre phase and decay rates.
///
/// Field names follow the Hamiltonian
/// `H = Δ|1₂⟩⟨1₂| + Σⱼ (gⱼ|0ⱼ⟩⟨1ⱼ|aⱼ† + h.c.) + ν[b(a₁† + e^{iφ}a₂†) + h.c.]`
/// and the dissipators (atomic emission κ, cavity loss γ, fibre loss β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub g1: C64,
    pub g2: C64,
    pub nu: f64,
    /// Detuning Δ of atom 2 from the cavity resonance.
    pub detuning: f64,
    pub phi: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub beta: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            g1: C64::new(1.0, 0.0),
            g2: C64::new(1.0, 0.0),
            nu: 1.0,
            detuning: 0.0,
            phi: 0.0,
            kappa: 0.0,
            gamma: 0.0,
            beta: 0.0,
        }
    }
}

impl SystemParams {
    /// Real couplings `g1`, `g2`, fibre coupling `nu` and detuning, no losses.
    pub fn closed(g1: f64, g2: f64, nu: f64, detuning: f64) -> Self {
        Self {
            g1: C64::new(g1, 0.0),
            g2: C64::new(g2, 0.0),
            nu,
            detuning,
            ..Self::default()
        }
    }

    pub fn with_losses(mut self, kappa: f64, gamma: f64, beta: f64) -> Self {
        self.kappa = kappa;
        self.gamma = gamma;
        self.beta = beta;
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    /// `g ≡ |g1|`
    pub fn g(&self) -> f64 {
        self.g1.norm()
    }

    /// `δ ≡ |g2| − |g1|`
    pub fn delta(&self) -> f64 {
        self.g2.norm() - self.g1.norm()
    }

    pub fn is_closed(&self) -> bool {
        self.kappa == 0.0 && self.gamma == 0.0 && self.beta == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64); 4] = [
            ("nu", self.nu),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("beta", self.beta),
        ];
        for (field, v) in checks {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams {
                    field,
                    detail: format!("must be finite and non-negative, got {v}"),
                });
            }
        }
        let finite: [(&'static str, f64); 6] = [
            ("g1", self.g1.re),
            ("g1", self.g1.im),
            ("g2", self.g2.re),
            ("g2", self.g2.im),
            ("detuning", self.detuning),
            ("phi", self.phi),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidParams {
                    field,
                    detail: format!("must be finite, got {v}"),
                });
            }
        }
        Ok(())
    }
}

/// The Hamiltonian restricted to one excitation sector.
#[derive(Debug, Clone)]
pub struct HamiltonianBlock {
    pub sector: usize,
    pub matrix: CMatrix,
}

impl HamiltonianBlock {
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

/// Nonzero couplings `(target, amplitude)` reached from `s` by the part of `H`
/// that raises the cavity/fibre index ordering; the Hermitian conjugate is
/// added by the caller.
fn off_diagonal_terms(params: &SystemParams, s: &BasisState) -> Vec<(BasisState, C64)> {
    let mut out = Vec::with_capacity(4);
    // g_j |0_j⟩⟨1_j| a_j†
    for (atom, cavity, g) in [
        (Mode::Atom1, Mode::Cavity1, params.g1),
        (Mode::Atom2, Mode::Cavity2, params.g2),
    ] {
        if let Some(t) = s.lowered(atom).and_then(|t| t.raised(cavity)) {
            let bose = (s.occupation(cavity) as f64 + 1.0).sqrt();
            out.push((t, g * bose));
        }
    }
    // ν b a_1† and ν e^{iφ} b a_2†
    let phase2 = C64::from_polar(1.0, params.phi);
    for (cavity, phase) in [(Mode::Cavity1, C64::new(1.0, 0.0)), (Mode::Cavity2, phase2)] {
        if let Some(t) = s.lowered(Mode::Fibre).and_then(|t| t.raised(cavity)) {
            let bose = (s.occupation(Mode::Fibre) as f64).sqrt()
                * (s.occupation(cavity) as f64 + 1.0).sqrt();
            out.push((t, phase * params.nu * bose));
        }
    }
    out
}

pub fn build_hamiltonian(params: &SystemParams, sector: usize) -> Result<HamiltonianBlock> {
    let basis = enumerate_sector(sector)?;
    let d = basis.dim();
    let mut h = CMatrix::zeros(d, d);
    for (col, s) in basis.states().iter().enumerate() {
        h[(col, col)] += C64::new(params.detuning * s.atom2 as f64, 0.0);
        for (t, amp) in off_diagonal_terms(params, s) {
            let row = basis.index_of(&t)?;
            h[(row, col)] += amp;
            h[(col, row)] += amp.conj();
        }
    }
    Ok(HamiltonianBlock { sector, matrix: h })
}

/// Block-diagonal Hamiltonian on the 19-dimensional space of [`full_space`].
pub fn full_hamiltonian(params: &SystemParams, space: &FullSpace) -> CMatrix {
    let d = space.dim();
    let mut h = CMatrix::zeros(d, d);
    for n in 0..=MAX_EXCITATIONS {
        let block = build_hamiltonian(params, n).expect("sector within range");
        let off = space.offset(n).expect("sector within range");
        h.view_mut((off, off), block.matrix.shape())
            .copy_from(&block.matrix);
    }
    h
}

/// Normal modes of the three coupled bosonic modes in the rotating frame.
#[derive(Debug, Clone)]
pub struct NormalModes {
    /// Frequencies of `c`, `c₋`, `c₊` relative to the cavity frequency.
    pub frequencies: [f64; 3],
    /// Rows express `c`, `c₋`, `c₊` in terms of `(a₁, b, a₂)`.
    pub transform: CMatrix,
}

pub fn normal_mode_frequencies(params: &SystemParams) -> NormalModes {
    let r = SQRT_2 * params.nu;
    let e = C64::from_polar(1.0, -params.phi);
    let s = 1.0 / SQRT_2;
    let z = C64::new(0.0, 0.0);
    #[rustfmt::skip]
    let transform = CMatrix::from_row_slice(3, 3, &[
        C64::new(s, 0.0),   z,                       -e * s,
        C64::new(0.5, 0.0), C64::new(-s, 0.0),       e * 0.5,
        C64::new(0.5, 0.0), C64::new(s, 0.0),        e * 0.5,
    ]);
    NormalModes {
        frequencies: [0.0, -r, r],
        transform,
    }
}

/// Single-particle matrix of the fibre coupling on `(a₁, b, a₂)`:
/// `H_f = Σ M_ij x_i† x_j`.
pub fn mode_coupling_matrix(params: &SystemParams) -> CMatrix {
    let nu = C64::new(params.nu, 0.0);
    let e = C64::from_polar(params.nu, params.phi);
    let z = C64::new(0.0, 0.0);
    CMatrix::from_row_slice(3, 3, &[z, nu, z, nu, z, e.conj(), z, e, z])
}

fn require_positive(what: &'static str, values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !(*v > 0.0) || !v.is_finite() {
            return Err(Error::Domain {
                what,
                detail: format!("{name} must be positive, got {v}"),
            });
        }
    }
    Ok(())
}

/// Number of fibre modes that interact appreciably with the cavities,
/// `n = l·ν̄ / (2πc)`. The single-mode model needs `n ≲ 1`.
pub fn short_fibre_mode_count(length_m: f64, nubar: f64, c_light: f64) -> Result<f64> {
    require_positive(
        "short_fibre_mode_count",
        &[("length", length_m), ("nubar", nubar), ("c", c_light)],
    )?;
    Ok(length_m * nubar / (2.0 * PI * c_light))
}

/// Cavity–fibre coupling estimate `ν ≃ √(4π·ν̄·c / l)`.
pub fn fibre_coupling_estimate(length_m: f64, nubar: f64, c_light: f64) -> Result<f64> {
    require_positive(
        "fibre_coupling_estimate",
        &[("length", length_m), ("nubar", nubar), ("c", c_light)],
    )?;
    Ok((4.0 * PI * nubar * c_light / length_m).sqrt())
}

/// Effective coupling and decay of a far-detuned lambda system after
/// eliminating its excited level: `(d·h²/(d²+ξ²), ξ·h²/(d²+ξ²))`.
pub fn lambda_effective_params(h: f64, d: f64, xi: f64) -> Result<(f64, f64)> {
    let denom = d * d + xi * xi;
    if !(denom > 0.0) || !denom.is_finite() {
        return Err(Error::Domain {
            what: "lambda_effective_params",
            detail: format!("d² + ξ² must be positive, got d = {d}, ξ = {xi}"),
        });
    }
    let h2 = h * h;
    Ok((d * h2 / denom, xi * h2 / denom))
}

/// Per-sector spectra, handy for the `spectrum` command and tests.
pub fn spectra(params: &SystemParams) -> Vec<Vec<f64>> {
    (0..=MAX_EXCITATIONS)
        .map(|n| {
            build_hamiltonian(params, n)
                .expect("sector within range")
                .eigenvalues()
        })
        .collect()
}

/// Convenience for callers that need the space and the assembled `H` together.
pub fn assembled(params: &SystemParams) -> (FullSpace, CMatrix) {
    let space = full_space();
    let h = full_hamiltonian(params, &space);
    (space, h)
}
