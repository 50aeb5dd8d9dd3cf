//! Resonance shift of two co-accelerated atoms in front of a perfectly
//! conducting plate at `z = 0`, from image worldlines.
//!
//! The plate adds to every field correlation the free correlation with the
//! reflected worldline, contracted with `S = diag(-1, -1, 1)`. Reflection in
//! `z` commutes with boosts along `x`, so an image of a co-accelerated atom is
//! itself co-accelerated and the free kernel applies unchanged.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::resonance::{
    evaluate_terms, Atom, CorrelatedState, DdcKernelParams, DipolePair, FieldKernel, PairAmplitudes, PairTerm,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorGeometry {
    /// Height of atom A above the plate.
    pub z_atom_a: f64,
    /// Distance from A to B along the normal.
    pub separation_l: f64,
}

impl MirrorGeometry {
    pub fn new(z_atom_a: f64, separation_l: f64) -> Result<Self> {
        let g = Self { z_atom_a, separation_l };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z_atom_a > 0.0) || !(self.separation_l > 0.0) || !self.z_atom_a.is_finite() || !self.separation_l.is_finite() {
            return Err(domain(format!(
                "mirror geometry needs z > 0 and L > 0, got z = {}, L = {}",
                self.z_atom_a, self.separation_l
            )));
        }
        Ok(())
    }

    pub fn z_atom_b(&self) -> f64 {
        self.z_atom_a + self.separation_l
    }

    /// Distance from one atom to the image of the other.
    pub fn r_bar(&self) -> f64 {
        self.separation_l + 2.0 * self.z_atom_a
    }
}

/// An atom or its mirror image: height above the plate and dipole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageAtom {
    pub z: f64,
    pub dipole: [f64; 3],
}

impl ImageAtom {
    pub fn reflect(&self) -> Self {
        Self { z: -self.z, dipole: reflect_dipole(&self.dipole) }
    }
}

/// `(μx, μy, μz) → (-μx, -μy, μz)`
pub fn reflect_dipole(mu: &[f64; 3]) -> [f64; 3] {
    [-mu[0], -mu[1], mu[2]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorResult {
    /// `free_part + plate_part`.
    pub total: f64,
    pub free_part: f64,
    pub plate_part: f64,
    pub numerical_error: f64,
}

fn plate_terms(pair: &DipolePair, state: &CorrelatedState, geom: &MirrorGeometry, a: f64) -> [PairTerm; 2] {
    let atom_a = ImageAtom { z: geom.z_atom_a, dipole: pair.mu_a };
    let atom_b = ImageAtom { z: geom.z_atom_b(), dipole: pair.mu_b };
    let (image_a, image_b) = (atom_a.reflect(), atom_b.reflect());
    [
        PairTerm {
            kernel: FieldKernel::new(a, atom_a.z - image_b.z),
            first: atom_a.dipole,
            second: image_b.dipole,
            amplitudes: PairAmplitudes::for_pair(state, Atom::A, Atom::B),
        },
        PairTerm {
            kernel: FieldKernel::new(a, atom_b.z - image_a.z),
            first: atom_b.dipole,
            second: image_a.dipole,
            amplitudes: PairAmplitudes::for_pair(state, Atom::B, Atom::A),
        },
    ]
}

/// Kernel parameters covering both the direct and the image separation.
pub fn mirror_params(geom: &MirrorGeometry, omega0: f64, a: f64) -> Result<DdcKernelParams> {
    geom.validate()?;
    DdcKernelParams::automatic(&[geom.separation_l, geom.r_bar()], omega0, a)
}

pub fn mirror_resonance_energy(
    pair: &DipolePair,
    state: &CorrelatedState,
    geom: &MirrorGeometry,
    omega0: f64,
    a: f64,
    params: &DdcKernelParams,
) -> Result<MirrorResult> {
    geom.validate()?;
    if !(a >= 0.0) || !a.is_finite() {
        return Err(domain(format!("acceleration must be non-negative, got {a}")));
    }
    let free = evaluate_terms(&pair.free_terms(state, geom.separation_l, a), omega0, params)?;
    let plate = evaluate_terms(&plate_terms(pair, state, geom, a), omega0, params)?;
    Ok(MirrorResult {
        total: free.energy + plate.energy,
        free_part: free.energy,
        plate_part: plate.energy,
        numerical_error: free.numerical_error + plate.numerical_error,
    })
}

/// Both dipoles unit length in the `xz` plane at polar angle `kπ/n`, `k < n`.
pub fn polar_orientation_grid(n: usize) -> Vec<DipolePair> {
    (0..n)
        .map(|k| {
            let theta = std::f64::consts::PI * k as f64 / n as f64;
            let (s, c) = theta.sin_cos();
            // exact zeros keep the configuration flags meaningful
            let clean = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
            let mu = [clean(s), 0.0, clean(c)];
            DipolePair { mu_a: mu, mu_b: mu }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationRow {
    pub id: usize,
    pub pair: DipolePair,
    pub result: MirrorResult,
}

impl OrientationRow {
    /// `|total| / |free_part|`; infinite when the free shift vanishes.
    pub fn modulation(&self) -> f64 {
        self.result.total.abs() / self.result.free_part.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationTable {
    pub rows: Vec<OrientationRow>,
    /// Row with the largest finite `|total| / |free_part|`.
    pub enhancement: Option<usize>,
    /// Row with the smallest `|total| / |free_part|`.
    pub inhibition: Option<usize>,
}

pub fn orientation_scan(
    state: &CorrelatedState,
    geom: &MirrorGeometry,
    omega0: f64,
    a: f64,
    params: &DdcKernelParams,
    grid: &[DipolePair],
) -> Result<OrientationTable> {
    let rows: Vec<OrientationRow> = grid
        .par_iter()
        .enumerate()
        .map(|(id, pair)| {
            mirror_resonance_energy(pair, state, geom, omega0, a, params).map(|result| OrientationRow {
                id,
                pair: *pair,
                result,
            })
        })
        .collect::<Result<_>>()?;
    let ranked: Vec<&OrientationRow> = rows.iter().filter(|r| r.modulation().is_finite()).collect();
    let enhancement = ranked.iter().max_by(|x, y| x.modulation().total_cmp(&y.modulation())).map(|r| r.id);
    let inhibition = ranked.iter().min_by(|x, y| x.modulation().total_cmp(&y.modulation())).map(|r| r.id);
    Ok(OrientationTable { rows, enhancement, inhibition })
}
