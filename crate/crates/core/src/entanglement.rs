//! Spin-momentum entanglement of a single-particle state.
//!
//! The global state is pure, so the entanglement across the momentum ⊗ spin
//! cut is the von Neumann entropy (in bits) of either reduced 2x2 density
//! matrix. For the three prepared families the boosted entropy has the
//! closed form `h(p)` with
//!
//! ```text
//! p = (1 + r) / 2,   r^2 = cos^2(2η) + sin^2(δ) sin^2(2η)   (psi, psi_tilde)
//!                    r^2 = cos^2(2η) + cos^2(δ) sin^2(2η)   (xi)
//! ```
//!
//! and `h` the binary entropy.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::WignerAngle;
use crate::states::{HelicityClass, Momentum, PreparationAngle, Spin, SpinMomentumState};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues within this distance of 0 or 1 are clamped.
const CLAMP_TOL: f64 = 1e-12;
/// Eigenvalues below `-NEGATIVE_FLOOR` are an error.
const NEGATIVE_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    Spin,
    Momentum,
}

/// Hermitian, unit-trace 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix2 {
    m: [[Complex64; 2]; 2],
}

impl DensityMatrix2 {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let skew = (m[0][1] - m[1][0].conj())
            .norm()
            .max(m[0][0].im.abs())
            .max(m[1][1].im.abs());
        if skew > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {skew:e})"
            )));
        }
        let trace = m[0][0].re + m[1][1].re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} != 1")));
        }
        Ok(DensityMatrix2 { m })
    }

    pub fn from_real_diagonal(a: f64, b: f64) -> Result<Self> {
        let z = Complex64::new(0.0, 0.0);
        Self::new([[a.into(), z], [z, b.into()]])
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    /// Eigenvalues `[larger, smaller]` from trace and determinant.
    ///
    /// The smaller one is taken as `det / larger`, which keeps its relative
    /// precision when it is tiny.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = self.m[0][1];
        let trace = a + d;
        let gap = ((a - d) * (a - d) + 4.0 * b.norm_sqr()).sqrt();
        let large = 0.5 * (trace + gap);
        let det = a * d - b.norm_sqr();
        let small = if large > 0.0 {
            det / large
        } else {
            0.5 * (trace - gap)
        };
        [large, small]
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        self.eigenvalues()[1] >= -tol
    }
}

/// Entropy in bits, `0 <= value <= 1` for a qubit.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct EntropyBits(f64);

impl EntropyBits {
    fn clamped(v: f64) -> Self {
        EntropyBits(v.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Larger eigenvalue `p = (1 + r) / 2` of the boosted reduced state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenvalueP {
    /// `p` in `[1/2, 1]`.
    pub p: f64,
    /// Smaller eigenvalue `1 - p`, computed without cancellation.
    pub q: f64,
    /// `r = 2p - 1`, the Bloch radius of the reduced state.
    pub radius: f64,
}

/// `-x log2 x`, with `0 log 0 = 0`.
fn plogp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy of the pair `(p, q)`, `p + q = 1`.
fn entropy_pair(p: f64, q: f64) -> f64 {
    plogp(p) + plogp(q)
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_pair(p, 1.0 - p)
}

pub fn reduced_density_matrix(state: &SpinMomentumState, keep: Subsystem) -> DensityMatrix2 {
    let zero = Complex64::new(0.0, 0.0);
    let mut m = [[zero; 2]; 2];
    let momenta = [Momentum::Plus, Momentum::Minus];
    let spins = [Spin::Up, Spin::Down];
    match keep {
        Subsystem::Spin => {
            for (i, &s) in spins.iter().enumerate() {
                for (j, &t) in spins.iter().enumerate() {
                    m[i][j] = momenta
                        .iter()
                        .map(|&p| state.amplitude(p, s) * state.amplitude(p, t).conj())
                        .sum();
                }
            }
        }
        Subsystem::Momentum => {
            for (i, &p) in momenta.iter().enumerate() {
                for (j, &k) in momenta.iter().enumerate() {
                    m[i][j] = spins
                        .iter()
                        .map(|&s| state.amplitude(p, s) * state.amplitude(k, s).conj())
                        .sum();
                }
            }
        }
    }
    // exact Hermitian symmetry and real diagonal
    m[1][0] = m[0][1].conj();
    m[0][0].im = 0.0;
    m[1][1].im = 0.0;
    DensityMatrix2 { m }
}

/// `-Σ λ log2 λ` over the eigenvalues of `rho`.
pub fn von_neumann_entropy(rho: &DensityMatrix2) -> Result<EntropyBits> {
    let [large, small] = rho.eigenvalues();
    if small < -NEGATIVE_FLOOR {
        return Err(Error::NegativeEigenvalue(small));
    }
    let clamp = |x: f64| {
        if x.abs() <= CLAMP_TOL || x < 0.0 {
            0.0
        } else if (x - 1.0).abs() <= CLAMP_TOL || x > 1.0 {
            1.0
        } else {
            x
        }
    };
    Ok(EntropyBits::clamped(entropy_pair(
        clamp(large),
        clamp(small),
    )))
}

/// Entanglement of the prepared state in its rest frame.
pub fn rest_frame_entropy(eta: PreparationAngle, class: HelicityClass) -> EntropyBits {
    match class {
        HelicityClass::EqualPlus | HelicityClass::EqualMinus => {
            let (s, c) = eta.radians().sin_cos();
            EntropyBits::clamped(entropy_pair(c * c, s * s))
        }
        HelicityClass::Unequal => EntropyBits(0.0),
    }
}

/// `sin^2(2η)`, the `δ`-dependent weight in `1 - r^2 = sin^2(2η) * weight`
/// (`cos^2 δ` for equal helicity, `sin^2 δ` for unequal) and its complement.
fn deficit_terms(eta: f64, delta: f64, class: HelicityClass) -> (f64, f64, f64) {
    let s2e = (2.0 * eta).sin().powi(2);
    let (sd, cd) = delta.sin_cos();
    if class.is_equal_helicity() {
        (s2e, cd * cd, sd * sd)
    } else {
        (s2e, sd * sd, cd * cd)
    }
}

pub fn larger_eigenvalue(
    eta: PreparationAngle,
    delta: WignerAngle,
    class: HelicityClass,
) -> EigenvalueP {
    let (e, d) = (eta.radians(), delta.radians());
    let (s2e, weight, complement) = deficit_terms(e, d, class);
    let c2e = (2.0 * e).cos();
    let radius = (c2e * c2e + complement * s2e).sqrt().min(1.0);
    // q = (1 - r) / 2 = (1 - r^2) / (2 (1 + r))
    let q = s2e * weight / (2.0 * (1.0 + radius));
    EigenvalueP {
        p: 0.5 * (1.0 + radius),
        q,
        radius,
    }
}

/// Boosted-frame entanglement `h(p)` from the closed form.
pub fn boosted_entropy_closed_form(
    eta: PreparationAngle,
    delta: WignerAngle,
    class: HelicityClass,
) -> EntropyBits {
    let ev = larger_eigenvalue(eta, delta, class);
    EntropyBits::clamped(entropy_pair(ev.p, ev.q))
}

/// `dE/dδ = (1 / ln 2) p'(δ) ln((1 - p) / p)`, in bits per radian.
///
/// For equal helicity `p' = sin(2δ) sin^2(2η) / (4 r)`; unequal helicity
/// flips its sign. Where `r = 0` (the Bell point at `δ ∈ {0, π}` for equal
/// helicity, `δ = π/2` for unequal) or `p = 1` the expression is `0 · ∞`
/// and the analytic limit `0` is returned.
pub fn boosted_entropy_derivative(
    eta: PreparationAngle,
    delta: WignerAngle,
    class: HelicityClass,
) -> f64 {
    let ev = larger_eigenvalue(eta, delta, class);
    let (e, d) = (eta.radians(), delta.radians());
    let numerator = (2.0 * d).sin() * (2.0 * e).sin().powi(2);
    if numerator == 0.0 || ev.radius == 0.0 || ev.q == 0.0 {
        return 0.0;
    }
    let sign = if class.is_equal_helicity() { 1.0 } else { -1.0 };
    let dp = sign * numerator / (4.0 * ev.radius);
    dp * (ev.q / ev.p).ln() / LN_2
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DifferenceBound {
    /// Rest minus boosted entropy for equal helicity, boosted minus rest for unequal.
    pub difference: f64,
    /// `sin^2(2η) sin^2(δ) / (2 ln 2)`.
    pub bound: f64,
}

impl DifferenceBound {
    pub fn holds(&self, tol: f64) -> bool {
        self.difference >= self.bound - tol && self.bound >= 0.0
    }
}

pub fn entanglement_difference_bound(
    eta: PreparationAngle,
    delta: WignerAngle,
    class: HelicityClass,
) -> DifferenceBound {
    let rest = rest_frame_entropy(eta, class).value();
    let boosted = boosted_entropy_closed_form(eta, delta, class).value();
    let difference = if class.is_equal_helicity() {
        rest - boosted
    } else {
        boosted - rest
    };
    let bound = (2.0 * eta.radians()).sin().powi(2) * delta.radians().sin().powi(2) / (2.0 * LN_2);
    DifferenceBound { difference, bound }
}

/// Entropy of a state through partial trace and diagonalisation.
pub fn state_entropy(state: &SpinMomentumState, keep: Subsystem) -> Result<EntropyBits> {
    von_neumann_entropy(&reduced_density_matrix(state, keep))
}
