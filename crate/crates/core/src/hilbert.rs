//! Basis enumeration for two two-level atoms and three bosonic modes
//! (cavity 1, fibre, cavity 2), truncated at two total excitations.
//!
//! Starting from the field vacuum the Hamiltonian conserves the excitation
//! number and the dissipators only remove excitations, so the truncation is
//! exact for every evolution this crate performs.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

pub const MAX_EXCITATIONS: usize = 2;

/// Dimensions of sectors 0, 1, 2.
pub const SECTOR_DIMS: [usize; 3] = [1, 5, 13];

pub const FULL_DIM: usize = 19;

/// Two-qubit computational basis, `|atom1 atom2⟩`: |00⟩, |01⟩, |10⟩, |11⟩.
pub const ATOMIC_DIM: usize = 4;

/// A subsystem that carries excitations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Atom1,
    Atom2,
    Cavity1,
    Fibre,
    Cavity2,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Atom1,
        Mode::Atom2,
        Mode::Cavity1,
        Mode::Fibre,
        Mode::Cavity2,
    ];
}

/// `|atom1 atom2; n_cav1 n_fibre n_cav2⟩`.
///
/// Field order follows the canonical lexicographic order of the basis, so the
/// derived `Ord` is the canonical one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    pub atom1: u8,
    pub atom2: u8,
    /// `(n_cav1, n_fibre, n_cav2)`
    pub photons: [u8; 3],
}

impl BasisState {
    pub const fn new(atom1: u8, atom2: u8, photons: [u8; 3]) -> Self {
        Self {
            atom1,
            atom2,
            photons,
        }
    }

    /// Atoms in computational state `k` (see [`ATOMIC_DIM`]), field in vacuum.
    pub const fn atomic_with_vacuum(k: usize) -> Self {
        Self::new((k >> 1) as u8, (k & 1) as u8, [0, 0, 0])
    }

    pub fn excitations(&self) -> usize {
        self.atom1 as usize
            + self.atom2 as usize
            + self.photons.iter().map(|&n| n as usize).sum::<usize>()
    }

    pub fn occupation(&self, mode: Mode) -> u8 {
        match mode {
            Mode::Atom1 => self.atom1,
            Mode::Atom2 => self.atom2,
            Mode::Cavity1 => self.photons[0],
            Mode::Fibre => self.photons[1],
            Mode::Cavity2 => self.photons[2],
        }
    }

    /// Index of the atomic part in the two-qubit computational basis.
    pub fn atomic_index(&self) -> usize {
        2 * self.atom1 as usize + self.atom2 as usize
    }

    pub fn field(&self) -> [u8; 3] {
        self.photons
    }

    pub(crate) fn with(&self, mode: Mode, n: u8) -> Self {
        let mut s = *self;
        match mode {
            Mode::Atom1 => s.atom1 = n,
            Mode::Atom2 => s.atom2 = n,
            Mode::Cavity1 => s.photons[0] = n,
            Mode::Fibre => s.photons[1] = n,
            Mode::Cavity2 => s.photons[2] = n,
        }
        s
    }

    /// Remove one excitation from `mode`, if any.
    pub fn lowered(&self, mode: Mode) -> Option<Self> {
        let n = self.occupation(mode);
        (n > 0).then(|| self.with(mode, n - 1))
    }

    /// Add one excitation to `mode`, if the result stays inside the model
    /// (atoms are two-level, total excitations at most two).
    pub fn raised(&self, mode: Mode) -> Option<Self> {
        let n = self.occupation(mode);
        let is_atom = matches!(mode, Mode::Atom1 | Mode::Atom2);
        if (is_atom && n >= 1) || self.excitations() >= MAX_EXCITATIONS {
            return None;
        }
        Some(self.with(mode, n + 1))
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c1, b, c2] = self.photons;
        write!(f, "|{}{};{}{}{}⟩", self.atom1, self.atom2, c1, b, c2)
    }
}

/// All basis states with a fixed total excitation number, canonically ordered.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    excitation_count: usize,
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
}

impl SectorBasis {
    pub fn excitation_count(&self) -> usize {
        self.excitation_count
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, s: &BasisState) -> Result<usize> {
        self.index
            .get(s)
            .copied()
            .ok_or_else(|| Error::StateNotInSector {
                state: s.to_string(),
                sector: self.excitation_count,
            })
    }

    /// Position of the state with atoms in computational state `k` and the
    /// field in vacuum, if it lives in this sector.
    pub fn atomic_vacuum_index(&self, k: usize) -> Option<usize> {
        self.index.get(&BasisState::atomic_with_vacuum(k)).copied()
    }
}

pub fn enumerate_sector(n: usize) -> Result<SectorBasis> {
    if n > MAX_EXCITATIONS {
        return Err(Error::UnsupportedSector(n));
    }
    let mut states = Vec::new();
    // nested loops emit states in lexicographic order
    for atom1 in 0..=1u8 {
        for atom2 in 0..=1u8 {
            for c1 in 0..=2u8 {
                for b in 0..=2u8 {
                    for c2 in 0..=2u8 {
                        let s = BasisState::new(atom1, atom2, [c1, b, c2]);
                        if s.excitations() == n {
                            states.push(s);
                        }
                    }
                }
            }
        }
    }
    let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    Ok(SectorBasis {
        excitation_count: n,
        states,
        index,
    })
}

/// Ordered direct sum of sectors 0, 1 and 2.
#[derive(Debug, Clone)]
pub struct FullSpace {
    sectors: Vec<SectorBasis>,
    offsets: [usize; 3],
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
}

impl FullSpace {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn sector(&self, n: usize) -> Result<&SectorBasis> {
        self.sectors.get(n).ok_or(Error::UnsupportedSector(n))
    }

    pub fn sectors(&self) -> &[SectorBasis] {
        &self.sectors
    }

    pub fn offset(&self, n: usize) -> Result<usize> {
        self.offsets
            .get(n)
            .copied()
            .ok_or(Error::UnsupportedSector(n))
    }

    pub fn index_of(&self, s: &BasisState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn state(&self, i: usize) -> &BasisState {
        &self.states[i]
    }

    /// Global index of `|k⟩_atoms ⊗ |000⟩_field`.
    pub fn atomic_vacuum_index(&self, k: usize) -> usize {
        self.index[&BasisState::atomic_with_vacuum(k)]
    }

    /// Annihilation (or σ⁻ for atoms) operator of `mode` on the full space.
    pub fn lowering(&self, mode: Mode) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for (col, s) in self.states.iter().enumerate() {
            if let Some(t) = s.lowered(mode) {
                let amp = (s.occupation(mode) as f64).sqrt();
                m[(self.index[&t], col)] = C64::new(amp, 0.0);
            }
        }
        m
    }

    /// Diagonal total-excitation-number operator.
    pub fn excitation_operator(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(self.states[i].excitations() as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }
}

pub fn full_space() -> FullSpace {
    let sectors: Vec<SectorBasis> = (0..=MAX_EXCITATIONS)
        .map(|n| enumerate_sector(n).expect("sector within range"))
        .collect();
    let mut offsets = [0; 3];
    let mut states = Vec::with_capacity(FULL_DIM);
    for (n, sector) in sectors.iter().enumerate() {
        offsets[n] = states.len();
        states.extend_from_slice(sector.states());
    }
    let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    FullSpace {
        sectors,
        offsets,
        states,
        index,
    }
}
