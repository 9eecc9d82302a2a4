//! Joint position/coin state of a walker on the unbounded integer lattice Z^d.
//!
//! After `t` steps every coordinate has moved by ±1 exactly `t` times, so the
//! support lies in `[-t, t]^d` and each coordinate has the parity of `t`. The
//! state therefore stores only the parity-matching sites: along each axis the
//! reduced index `k ∈ 0..=t` stands for the coordinate `x = 2k - t`.
//!
//! Under a shift the reduced index of a `+` component advances by one while a
//! `-` component keeps its index (`x - 1 = 2k - (t + 1)`). The buffer is laid
//! out for a fixed capacity so this becomes an in-place move toward higher
//! offsets; see [`crate::evolve::apply_shift`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::tolerance;
use crate::MAX_DIM;

/// A point of Z^d.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn origin(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// Point reflection through the origin.
    pub fn negated(&self) -> Self {
        LatticePoint(self.0.iter().map(|x| -x).collect())
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Index `mu` of an internal basis state `|e_1 e_2 ... e_d>`.
///
/// Bit `b_i` of `mu` (with `b_1` the most significant of the `d` bits) is 0 for
/// `e_i = +` and 1 for `e_i = -`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoinIndex(pub usize);

impl CoinIndex {
    /// Whether the qubit steering `axis` (0-based) is in `|+>`.
    #[inline]
    pub fn is_plus(self, axis: usize, dim: usize) -> bool {
        (self.0 >> (dim - 1 - axis)) & 1 == 0
    }

    /// Lattice displacement applied by the conditional shift.
    pub fn displacement(self, dim: usize) -> Vec<i64> {
        (0..dim)
            .map(|axis| if self.is_plus(axis, dim) { 1 } else { -1 })
            .collect()
    }
}

pub fn check_dim(dim: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(WalkError::Dimension(dim))
    }
}

/// Named initial internal states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardState {
    /// `|- ... ->`
    AllMinus,
    /// `|+ ... +>`
    AllPlus,
    /// `⊗^d (|+> + i|->)/√2`, the state giving a symmetric 1-D walk.
    SymmetricProduct,
    /// `(|+-> - |-+>)/√2`, d = 2 only.
    Singlet,
}

impl StandardState {
    pub fn name(self) -> &'static str {
        match self {
            StandardState::AllMinus => "all_minus",
            StandardState::AllPlus => "all_plus",
            StandardState::SymmetricProduct => "symmetric_product",
            StandardState::Singlet => "singlet",
        }
    }
}

impl FromStr for StandardState {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "all_minus" | "minus" => Ok(StandardState::AllMinus),
            "all_plus" | "plus" => Ok(StandardState::AllPlus),
            "symmetric_product" | "symmetric" | "psi_s" => Ok(StandardState::SymmetricProduct),
            "singlet" | "psi_minus" => Ok(StandardState::Singlet),
            other => Err(WalkError::Config(format!("unknown initial state {other:?}"))),
        }
    }
}

/// Normalized vector of `2^d` internal amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct InternalState {
    dim: usize,
    amps: Vec<Complex64>,
}

impl InternalState {
    pub fn new(dim: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        let expected = 1usize << dim;
        if amps.len() != expected {
            return Err(WalkError::InternalLength {
                expected,
                got: amps.len(),
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > tolerance::INPUT_NORM {
            return Err(WalkError::NotNormalized(norm));
        }
        Ok(InternalState { dim, amps })
    }

    pub fn standard(name: StandardState, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let n = 1usize << dim;
        let zero = Complex64::new(0.0, 0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amps = match name {
            StandardState::AllMinus => {
                let mut v = vec![zero; n];
                v[n - 1] = Complex64::new(1.0, 0.0);
                v
            }
            StandardState::AllPlus => {
                let mut v = vec![zero; n];
                v[0] = Complex64::new(1.0, 0.0);
                v
            }
            StandardState::SymmetricProduct => {
                let qubit = [Complex64::new(s, 0.0), Complex64::new(0.0, s)];
                (0..n)
                    .map(|mu| {
                        (0..dim).fold(Complex64::new(1.0, 0.0), |acc, axis| {
                            acc * qubit[(mu >> (dim - 1 - axis)) & 1]
                        })
                    })
                    .collect()
            }
            StandardState::Singlet => {
                if dim != 2 {
                    return Err(WalkError::SingletDimension(dim));
                }
                vec![zero, Complex64::new(s, 0.0), Complex64::new(-s, 0.0), zero]
            }
        };
        Ok(InternalState { dim, amps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

/// Bytes of amplitude storage needed for a `dim`-dimensional walk of `steps` steps.
pub fn storage_bytes(dim: usize, steps: usize) -> u128 {
    let side = steps as u128 + 1;
    side.pow(dim as u32) * (1u128 << dim) * std::mem::size_of::<Complex64>() as u128
}

/// Amplitude field `ψ(x, mu)` of a walker after `t` steps.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    dim: usize,
    t: usize,
    /// Largest `t` the buffer can hold without regridding.
    capacity: usize,
    /// Site-major: amplitude of site `s`, coin `mu` at `s * 2^d + mu`.
    amps: Vec<Complex64>,
}

impl WalkState {
    /// Walker at the origin with the given internal state and `t = 0`.
    pub fn new_localized(dim: usize, internal: &InternalState) -> Result<Self> {
        Self::with_capacity(dim, internal, 0)
    }

    /// Like [`new_localized`](Self::new_localized), sized up front for `steps` steps.
    pub fn with_capacity(dim: usize, internal: &InternalState, steps: usize) -> Result<Self> {
        check_dim(dim)?;
        if internal.dim() != dim {
            return Err(WalkError::InternalLength {
                expected: 1 << dim,
                got: internal.amplitudes().len(),
            });
        }
        let mut state = WalkState::zeroed(dim, 0, steps);
        state.amps[..1 << dim].copy_from_slice(internal.amplitudes());
        Ok(state)
    }

    fn zeroed(dim: usize, t: usize, capacity: usize) -> Self {
        let sites = (capacity + 1).pow(dim as u32);
        WalkState {
            dim,
            t,
            capacity,
            amps: vec![Complex64::new(0.0, 0.0); sites << dim],
        }
    }

    /// Builds a state at time `t` from explicit `(point, mu, amplitude)` entries.
    ///
    /// Entries must respect the parity and support constraints of time `t`.
    /// Repeated entries are summed.
    pub fn from_amplitudes<I>(dim: usize, t: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticePoint, usize, Complex64)>,
    {
        check_dim(dim)?;
        let mut state = WalkState::zeroed(dim, t, t);
        for (point, mu, amp) in entries {
            if mu >= 1 << dim {
                return Err(WalkError::Config(format!("coin index {mu} out of range")));
            }
            let site = state.site_of(point.coords()).ok_or_else(|| {
                WalkError::Config(format!("point {point} not reachable at t = {t}"))
            })?;
            state.amps[(site << dim) + mu] += amp;
        }
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of internal basis states, `2^d`.
    pub fn coin_dim(&self) -> usize {
        1 << self.dim
    }

    /// Steps elapsed.
    pub fn steps(&self) -> usize {
        self.t
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Ensures `additional` more steps fit without reallocating.
    pub fn reserve_steps(&mut self, additional: usize) {
        let needed = self.t + additional;
        if needed <= self.capacity {
            return;
        }
        let mut grown = WalkState::zeroed(self.dim, self.t, needed);
        let n = self.coin_dim();
        let targets: Vec<usize> = grown.active_sites().collect();
        for (old, new) in self.active_sites().zip(targets) {
            grown.amps[new * n..(new + 1) * n].copy_from_slice(&self.amps[old * n..(old + 1) * n]);
        }
        *self = grown;
    }

    pub(crate) fn side(&self) -> usize {
        self.capacity + 1
    }

    /// Flat site offset of one unit along `axis`.
    pub(crate) fn stride(&self, axis: usize) -> usize {
        self.side().pow((self.dim - 1 - axis) as u32)
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub(crate) fn advance_clock(&mut self) {
        debug_assert!(self.t < self.capacity);
        self.t += 1;
    }

    /// Flat index of the first site of every row of the active box `[0, t]^d`.
    /// Each row holds `t + 1` consecutive sites along the last axis.
    pub(crate) fn active_rows(&self) -> Vec<usize> {
        let outer = self.dim - 1;
        let span = self.t + 1;
        let count = span.pow(outer as u32);
        (0..count)
            .map(|mut r| {
                let mut site = 0;
                for axis in (0..outer).rev() {
                    site += (r % span) * self.stride(axis);
                    r /= span;
                }
                site
            })
            .collect()
    }

    /// Active sites in increasing flat order.
    pub(crate) fn active_sites(&self) -> impl Iterator<Item = usize> + '_ {
        let span = self.t + 1;
        self.active_rows()
            .into_iter()
            .flat_map(move |row| row..row + span)
    }

    /// Lattice point of a flat site index.
    pub(crate) fn point_of(&self, mut site: usize) -> LatticePoint {
        let side = self.side();
        let t = self.t as i64;
        let mut coords = vec![0i64; self.dim];
        for axis in (0..self.dim).rev() {
            coords[axis] = 2 * (site % side) as i64 - t;
            site /= side;
        }
        LatticePoint(coords)
    }

    /// Flat site index of `coords`, or `None` if no amplitude can live there at time `t`.
    pub(crate) fn site_of(&self, coords: &[i64]) -> Option<usize> {
        if coords.len() != self.dim {
            return None;
        }
        let t = self.t as i64;
        let mut site = 0;
        for (axis, &x) in coords.iter().enumerate() {
            let shifted = x + t;
            if !(0..=2 * t).contains(&shifted) || shifted % 2 != 0 {
                return None;
            }
            site += (shifted / 2) as usize * self.stride(axis);
        }
        Some(site)
    }

    /// `ψ(x, mu)`; zero anywhere the walker cannot be.
    pub fn amplitude(&self, point: &[i64], mu: usize) -> Complex64 {
        match self.site_of(point) {
            Some(site) if mu < self.coin_dim() => self.amps[(site << self.dim) + mu],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Total probability `Σ |ψ|²`, with compensated summation.
    pub fn norm(&self) -> f64 {
        // Neumaier: keeps the rounding of a 10^7-term sum near one ulp
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for a in &self.amps {
            let x = a.norm_sqr();
            let t = sum + x;
            if sum.abs() >= x {
                comp += (sum - t) + x;
            } else {
                comp += (x - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }

    /// Internal amplitudes at every reachable site, in lexicographic point order.
    pub fn sites(&self) -> impl Iterator<Item = (LatticePoint, &[Complex64])> + '_ {
        let n = self.coin_dim();
        self.active_sites()
            .map(move |s| (self.point_of(s), &self.amps[s * n..(s + 1) * n]))
    }

    /// Every stored amplitude that is not exactly zero, with its point and coin index.
    pub fn nonzero_amplitudes(&self) -> Vec<(LatticePoint, usize, Complex64)> {
        let n = self.coin_dim();
        let mut out = Vec::new();
        for (site, chunk) in self.amps.chunks(n).enumerate() {
            for (mu, &a) in chunk.iter().enumerate() {
                if a != Complex64::new(0.0, 0.0) {
                    out.push((self.point_of(site), mu, a));
                }
            }
        }
        out
    }

    /// Number of nonzero amplitudes sitting where no walker can be at time `t`:
    /// some `|x_i| > t`, or `x_i` with the wrong parity.
    pub fn support_violations(&self) -> usize {
        let n = self.coin_dim();
        let side = self.side() as i64;
        let t = self.t as i64;
        let mut bad = 0;
        for (site, chunk) in self.amps.chunks(n).enumerate() {
            let nonzero = chunk.iter().filter(|a| a.norm_sqr() != 0.0).count();
            if nonzero == 0 {
                continue;
            }
            let mut rest = site as i64;
            let ok = (0..self.dim).all(|_| {
                let x = 2 * (rest % side) - t;
                rest /= side;
                x.abs() <= t && (x - t) % 2 == 0
            });
            if !ok {
                bad += nonzero;
            }
        }
        bad
    }

    /// Probability mass per site over the active box, in flat active order.
    pub(crate) fn active_masses(&self) -> Vec<f64> {
        let n = self.coin_dim();
        self.active_sites()
            .map(|s| self.amps[s * n..(s + 1) * n].iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }

    /// Largest `|ψ_a(x, mu) - ψ_b(x, mu)|` over both supports.
    pub fn max_amplitude_deviation(&self, other: &WalkState) -> f64 {
        let mut worst: f64 = 0.0;
        for (p, mu, a) in self.nonzero_amplitudes() {
            worst = worst.max((a - other.amplitude(p.coords(), mu)).norm());
        }
        for (p, mu, b) in other.nonzero_amplitudes() {
            worst = worst.max((self.amplitude(p.coords(), mu) - b).norm());
        }
        worst
    }
}
