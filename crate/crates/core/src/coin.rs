//! Unitary coin operators on the `2^d`-dimensional internal space.
//!
//! A coin maps internal amplitudes as `new[nu] = Σ_mu C[nu][mu] · old[mu]`,
//! so column `mu` is the image of basis state `|mu>`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::lattice::check_dim;
use crate::tolerance;

#[derive(Clone, PartialEq)]
pub struct CoinOperator {
    dim: usize,
    /// Row-major `2^d x 2^d`.
    entries: Vec<Complex64>,
}

impl fmt::Debug for CoinOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        writeln!(f, "CoinOperator(d = {}) [", self.dim)?;
        for row in self.entries.chunks(n) {
            write!(f, "  ")?;
            for a in row {
                write!(f, "{:>8.4}{:+.4}i ", a.re, a.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CoinOperator {
    fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let n = 1usize << dim;
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        CoinOperator { dim, entries }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::from_fn(dim, |r, c| {
            Complex64::new(if r == c { 1.0 } else { 0.0 }, 0.0)
        }))
    }

    /// `H ⊗ ... ⊗ H`; entry `(nu, mu) = 2^{-d/2} (-1)^{popcount(nu & mu)}`.
    pub fn hadamard_tensor(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let scale = (1usize << dim) as f64;
        let scale = scale.sqrt().recip();
        Ok(Self::from_fn(dim, |nu, mu| {
            let sign = if (nu & mu).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(sign * scale, 0.0)
        }))
    }

    /// `2^d`-point discrete Fourier transform; entry `(nu, mu) = 2^{-d/2} e^{2πi mu nu / 2^d}`.
    pub fn dft(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let n = 1usize << dim;
        let scale = (n as f64).sqrt().recip();
        Ok(Self::from_fn(dim, |nu, mu| {
            // reduce mod n first so the phase angle stays exact-ish for large products
            let phase = TAU * ((nu * mu) % n) as f64 / n as f64;
            Complex64::from_polar(scale, phase)
        }))
    }

    /// Grover diffusion `(2/2^d) J - I`.
    pub fn grover(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let off = 2.0 / (1usize << dim) as f64;
        Ok(Self::from_fn(dim, |nu, mu| {
            Complex64::new(if nu == mu { off - 1.0 } else { off }, 0.0)
        }))
    }

    /// `R(β) = diag(e^{iβ/2}, e^{-iβ/2})` on a single qubit.
    pub fn phase_rotation(beta: f64) -> Self {
        let beta = beta.rem_euclid(TAU);
        let zero = Complex64::new(0.0, 0.0);
        CoinOperator {
            dim: 1,
            entries: vec![
                Complex64::from_polar(1.0, beta / 2.0),
                zero,
                zero,
                Complex64::from_polar(1.0, -beta / 2.0),
            ],
        }
    }

    /// Diagonal of `R(β_1) ⊗ ... ⊗ R(β_d)`; qubit `i` sees `betas[i]`.
    fn product_phases(betas: &[f64]) -> Vec<Complex64> {
        let dim = betas.len();
        (0..1usize << dim)
            .map(|mu| {
                let angle: f64 = betas
                    .iter()
                    .enumerate()
                    .map(|(axis, &b)| {
                        let half = b.rem_euclid(TAU) / 2.0;
                        if (mu >> (dim - 1 - axis)) & 1 == 0 {
                            half
                        } else {
                            -half
                        }
                    })
                    .sum();
                Complex64::from_polar(1.0, angle)
            })
            .collect()
    }

    /// Conjugates by per-qubit phase rotations: `(⊗R(β_i)) · self · (⊗R(β_i))^{-1}`.
    pub fn dressed(&self, betas: &[f64]) -> Result<Self> {
        if betas.len() != self.dim {
            return Err(WalkError::PhaseCount {
                expected: self.dim,
                got: betas.len(),
            });
        }
        let phases = Self::product_phases(betas);
        Ok(Self::from_fn(self.dim, |nu, mu| {
            phases[nu] * self.entry(nu, mu) * phases[mu].conj()
        }))
    }

    /// Validates a user-supplied matrix given as rows.
    pub fn custom(dim: usize, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        check_dim(dim)?;
        let n = 1usize << dim;
        let bad_cols = rows.iter().map(Vec::len).find(|&len| len != n);
        if rows.len() != n || bad_cols.is_some() {
            return Err(WalkError::MatrixShape {
                expected: n,
                rows: rows.len(),
                cols: bad_cols.unwrap_or(n),
            });
        }
        let coin = CoinOperator {
            dim,
            entries: rows.into_iter().flatten().collect(),
        };
        let (deviation, row, col) = coin.unitarity_defect();
        if deviation > tolerance::CUSTOM_UNITARITY {
            return Err(WalkError::NotUnitary {
                deviation,
                row,
                col,
            });
        }
        Ok(coin)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix side, `2^d`.
    pub fn size(&self) -> usize {
        1 << self.dim
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.size() + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.size()).map(<[_]>::to_vec).collect()
    }

    /// `max |(C^†C - I)_{rc}|` and the entry where it occurs.
    pub fn unitarity_defect(&self) -> (f64, usize, usize) {
        let n = self.size();
        let mut worst = (0.0, 0, 0);
        for r in 0..n {
            for c in 0..n {
                let mut acc: Complex64 = (0..n)
                    .map(|k| self.entry(k, r).conj() * self.entry(k, c))
                    .sum();
                if r == c {
                    acc -= 1.0;
                }
                if acc.norm() > worst.0 {
                    worst = (acc.norm(), r, c);
                }
            }
        }
        worst
    }

    /// Applies the coin to one site's internal amplitudes in place.
    #[inline]
    pub(crate) fn apply_to(&self, amps: &mut [Complex64], scratch: &mut [Complex64]) {
        let n = self.size();
        scratch.copy_from_slice(amps);
        for (row, out) in self.entries.chunks_exact(n).zip(amps.iter_mut()) {
            *out = row.iter().zip(scratch.iter()).map(|(c, a)| c * a).sum();
        }
    }

    pub fn max_entry_deviation(&self, other: &CoinOperator) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
