//! Spin-momentum states of a single spin-1/2 particle with two sharp,
//! opposite momenta `p+` and `p-` along the z axis.
//!
//! A state is a vector in `C^2 (momentum) ⊗ C^2 (spin)` and its amplitudes
//! are always stored in the order
//!
//! ```text
//! (p+ ↑, p+ ↓, p- ↑, p- ↓)
//! ```
//!
//! which is also the order used in serialized output.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kinematics::{LorentzMatrix4, WignerAngle};

const NORM_TOL: f64 = 1e-12;

/// Which family of rest-frame states is prepared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HelicityClass {
    /// `cos(eta)|p+,↑> + sin(eta)|p-,↓>`, helicity +1 components.
    #[serde(rename = "psi")]
    EqualPlus,
    /// `cos(eta)|p+,↓> + sin(eta)|p-,↑>`, helicity -1 components.
    #[serde(rename = "psi_tilde")]
    EqualMinus,
    /// `cos(eta)|p+,↑> + sin(eta)|p-,↑>`, a product state.
    #[serde(rename = "xi")]
    Unequal,
}

impl HelicityClass {
    pub const ALL: [HelicityClass; 3] = [
        HelicityClass::EqualPlus,
        HelicityClass::EqualMinus,
        HelicityClass::Unequal,
    ];

    pub fn is_equal_helicity(self) -> bool {
        !matches!(self, HelicityClass::Unequal)
    }

    pub fn name(self) -> &'static str {
        match self {
            HelicityClass::EqualPlus => "psi",
            HelicityClass::EqualMinus => "psi_tilde",
            HelicityClass::Unequal => "xi",
        }
    }
}

impl fmt::Display for HelicityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HelicityClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "psi" | "equal-plus" | "equal_plus" => Ok(HelicityClass::EqualPlus),
            "psitilde" | "psi-tilde" | "psi_tilde" | "equal-minus" | "equal_minus" => {
                Ok(HelicityClass::EqualMinus)
            }
            "xi" | "unequal" => Ok(HelicityClass::Unequal),
            other => Err(format!(
                "unknown helicity class `{other}` (expected psi, psi-tilde or xi)"
            )),
        }
    }
}

/// State preparation angle `eta`, `0 <= eta < 2 pi`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PreparationAngle(f64);

impl PreparationAngle {
    pub fn new(eta: f64) -> Result<Self> {
        if (0.0..TAU).contains(&eta) {
            Ok(PreparationAngle(eta))
        } else {
            Err(domain("preparation angle eta", eta, "0 <= eta < 2 pi"))
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PreparationAngle {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        PreparationAngle::new(value)
    }
}

impl From<PreparationAngle> for f64 {
    fn from(a: PreparationAngle) -> f64 {
        a.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Rest,
    Boosted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Momentum {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

fn index(p: Momentum, s: Spin) -> usize {
    let m = match p {
        Momentum::Plus => 0,
        Momentum::Minus => 2,
    };
    m + match s {
        Spin::Up => 0,
        Spin::Down => 1,
    }
}

/// A normalized spin-momentum state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinMomentumState {
    amplitudes: [Complex64; 4],
    frame: Frame,
    momenta: Option<[[f64; 4]; 2]>,
}

impl SpinMomentumState {
    /// Builds a state from amplitudes in `(p+↑, p+↓, p-↑, p-↓)` order.
    pub fn from_amplitudes(amplitudes: [Complex64; 4], frame: Frame) -> Result<Self> {
        let n: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(domain("state norm squared", n, "|psi|^2 = 1"));
        }
        Ok(SpinMomentumState {
            amplitudes,
            frame,
            momenta: None,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    pub fn amplitude(&self, p: Momentum, s: Spin) -> Complex64 {
        self.amplitudes[index(p, s)]
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// The spin amplitudes `(↑, ↓)` attached to momentum branch `p`.
    pub fn spinor(&self, p: Momentum) -> [Complex64; 2] {
        [self.amplitude(p, Spin::Up), self.amplitude(p, Spin::Down)]
    }

    /// Four-momenta attached to the `p+` and `p-` labels, if recorded.
    pub fn momenta(&self) -> Option<[[f64; 4]; 2]> {
        self.momenta
    }

    /// Records the transformed momenta `Λ p+` and `Λ p-` on the labels.
    ///
    /// The entanglement quantities depend only on the amplitudes; this is
    /// bookkeeping for callers that have a concrete boost matrix at hand.
    pub fn with_transformed_momenta(
        mut self,
        lambda: &LorentzMatrix4,
        p_plus: [f64; 4],
        p_minus: [f64; 4],
    ) -> Self {
        self.momenta = Some([lambda.apply(p_plus), lambda.apply(p_minus)]);
        self
    }

    fn map_spinors(
        &self,
        f: impl Fn(Momentum, [Complex64; 2]) -> [Complex64; 2],
        frame: Frame,
    ) -> SpinMomentumState {
        let plus = f(Momentum::Plus, self.spinor(Momentum::Plus));
        let minus = f(Momentum::Minus, self.spinor(Momentum::Minus));
        SpinMomentumState {
            amplitudes: [plus[0], plus[1], minus[0], minus[1]],
            frame,
            momenta: self.momenta,
        }
    }

    /// Max amplitude-wise distance `max_i |a_i - b_i|`.
    pub fn distance(&self, other: &SpinMomentumState) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Amplitude-wise distance after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &SpinMomentumState) -> f64 {
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Rest-frame state of the requested class.
pub fn prepare_state(class: HelicityClass, eta: PreparationAngle) -> SpinMomentumState {
    let (s, c) = eta.radians().sin_cos();
    let mut amplitudes = [Complex64::new(0.0, 0.0); 4];
    let (first, second) = match class {
        HelicityClass::EqualPlus => (Spin::Up, Spin::Down),
        HelicityClass::EqualMinus => (Spin::Down, Spin::Up),
        HelicityClass::Unequal => (Spin::Up, Spin::Up),
    };
    amplitudes[index(Momentum::Plus, first)] = c.into();
    amplitudes[index(Momentum::Minus, second)] = s.into();
    SpinMomentumState {
        amplitudes,
        frame: Frame::Rest,
        momenta: None,
    }
}

/// Sign branch of the spin rotation; `Plus` acts on `p+`, `Minus` on `p-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl From<Momentum> for Branch {
    fn from(p: Momentum) -> Branch {
        match p {
            Momentum::Plus => Branch::Plus,
            Momentum::Minus => Branch::Minus,
        }
    }
}

/// Spin rotation about the y axis,
///
/// ```text
/// U± = [[ cos(δ/2), ±sin(δ/2)],
///       [∓sin(δ/2),  cos(δ/2)]]
/// ```
///
/// acting on spin column vectors `(↑, ↓)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WignerRotationMatrix {
    entries: [[Complex64; 2]; 2],
    branch: Branch,
}

impl WignerRotationMatrix {
    /// Rotation for an arbitrary signed angle; `U±(-δ)` is a valid input here.
    pub fn with_signed_angle(angle: f64, branch: Branch) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        let s = match branch {
            Branch::Plus => s,
            Branch::Minus => -s,
        };
        WignerRotationMatrix {
            entries: [[c.into(), s.into()], [(-s).into(), c.into()]],
            branch,
        }
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn apply(&self, spinor: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.entries;
        [
            m[0][0] * spinor[0] + m[0][1] * spinor[1],
            m[1][0] * spinor[0] + m[1][1] * spinor[1],
        ]
    }

    pub fn transpose(&self) -> [[Complex64; 2]; 2] {
        let m = &self.entries;
        [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
    }

    pub fn determinant(&self) -> Complex64 {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// `max |U U† - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let m = &self.entries;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let e: Complex64 = (0..2).map(|k| m[i][k] * m[j][k].conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((e - target).norm());
            }
        }
        worst
    }
}

pub fn wigner_rotation_matrix(delta: WignerAngle, branch: Branch) -> WignerRotationMatrix {
    WignerRotationMatrix::with_signed_angle(delta.radians(), branch)
}

/// Moves a rest-frame state into the boosted frame.
///
/// The spin attached to `p+` is rotated with `U+(δ)` and the spin attached
/// to `p-` with `U-(δ)`; the momentum labels become `p'± = Λ p±`.
pub fn boost_state(state: &SpinMomentumState, delta: WignerAngle) -> Result<SpinMomentumState> {
    if state.frame == Frame::Boosted {
        return Err(Error::AlreadyBoosted);
    }
    let plus = wigner_rotation_matrix(delta, Branch::Plus);
    let minus = wigner_rotation_matrix(delta, Branch::Minus);
    Ok(state.map_spinors(
        |p, spinor| match p {
            Momentum::Plus => plus.apply(spinor),
            Momentum::Minus => minus.apply(spinor),
        },
        Frame::Boosted,
    ))
}

/// `-i σ_Z ⊗ σ_Y`: momentum-local `σ_Z`, spin-local `σ_Y`, global phase `-i`.
///
/// Maps boosted `psi` onto boosted `psi_tilde` for the same `(eta, delta)`.
pub fn local_unitary_map_psi_to_psitilde(state: &SpinMomentumState) -> SpinMomentumState {
    // -i σ_Y = [[0, -1], [1, 0]]
    state.map_spinors(
        |p, [up, down]| {
            let sign = match p {
                Momentum::Plus => 1.0,
                Momentum::Minus => -1.0,
            };
            [-down * sign, up * sign]
        },
        state.frame,
    )
}

/// Controlled-`iσ_Y` on the spin, with momentum branch `p-` as control.
///
/// Maps boosted `psi` onto boosted `xi` for the same `(eta, delta)`.
pub fn controlled_u_map_psi_to_xi(state: &SpinMomentumState) -> SpinMomentumState {
    // iσ_Y = [[0, 1], [-1, 0]]
    state.map_spinors(
        |p, [up, down]| match p {
            Momentum::Plus => [up, down],
            Momentum::Minus => [down, -up],
        },
        state.frame,
    )
}

/// Serialized form of a state together with how it was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub class: HelicityClass,
    pub eta: f64,
    pub delta: f64,
    pub frame: Frame,
    /// `[re, im]` pairs in `(p+↑, p+↓, p-↑, p-↓)` order.
    pub amplitudes: [[f64; 2]; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momenta: Option<[[f64; 4]; 2]>,
}

impl StateRecord {
    pub fn new(
        class: HelicityClass,
        eta: PreparationAngle,
        delta: WignerAngle,
        state: &SpinMomentumState,
    ) -> Self {
        let delta = match state.frame {
            Frame::Rest => 0.0,
            Frame::Boosted => delta.radians(),
        };
        StateRecord {
            class,
            eta: eta.radians(),
            delta,
            frame: state.frame,
            amplitudes: state.amplitudes.map(|a| [a.re, a.im]),
            momenta: state.momenta,
        }
    }

    pub fn to_state(&self) -> Result<SpinMomentumState> {
        let amps = self.amplitudes.map(|[re, im]| Complex64::new(re, im));
        let mut s = SpinMomentumState::from_amplitudes(amps, self.frame)?;
        s.momenta = self.momenta;
        Ok(s)
    }
}

/// Closed-form boosted `psi` amplitudes for comparison against [`boost_state`].
pub fn boosted_psi_closed_form(eta: f64, delta: f64) -> [f64; 4] {
    let (se, ce) = eta.sin_cos();
    let (sd, cd) = (0.5 * delta).sin_cos();
    [ce * cd, -ce * sd, -se * sd, se * cd]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn eta(x: f64) -> PreparationAngle {
        PreparationAngle::new(x).unwrap()
    }

    fn delta(x: f64) -> WignerAngle {
        WignerAngle::new(x).unwrap()
    }

    fn real_amplitudes(s: &SpinMomentumState) -> [f64; 4] {
        s.amplitudes().map(|a| {
            assert_eq!(a.im, 0.0);
            a.re
        })
    }

    fn assert_amplitudes(s: &SpinMomentumState, expected: [f64; 4], tol: f64) {
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert_abs_diff_eq!(a.re, e, epsilon = tol);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = tol);
        }
    }

    #[test]
    fn bell_state_at_quarter_pi() {
        let s = prepare_state(HelicityClass::EqualPlus, eta(FRAC_PI_4));
        assert_amplitudes(&s, [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2], 1e-15);
        assert_eq!(s.frame(), Frame::Rest);
    }

    #[test]
    fn prepared_amplitude_patterns() {
        let s = prepare_state(HelicityClass::EqualPlus, eta(0.0));
        assert_eq!(real_amplitudes(&s), [1.0, 0.0, 0.0, 0.0]);

        let (se, ce) = 0.6f64.sin_cos();
        let s = prepare_state(HelicityClass::EqualMinus, eta(0.6));
        assert_eq!(real_amplitudes(&s), [0.0, ce, se, 0.0]);

        let s = prepare_state(HelicityClass::Unequal, eta(0.6));
        assert_eq!(real_amplitudes(&s), [ce, 0.0, se, 0.0]);
        // (cos η |p+> + sin η |p->) ⊗ |↑>
        assert_eq!(s.amplitude(Momentum::Plus, Spin::Down), 0.0.into());
        assert_eq!(s.amplitude(Momentum::Minus, Spin::Down), 0.0.into());
    }

    #[test]
    fn preparation_angle_range() {
        assert!(PreparationAngle::new(TAU).is_err());
        assert!(PreparationAngle::new(-0.1).is_err());
        assert!(PreparationAngle::new(6.2).is_ok());
    }

    #[test]
    fn rotation_matrix_special_values() {
        let id = wigner_rotation_matrix(WignerAngle::ZERO, Branch::Plus);
        assert_eq!(
            *id.entries(),
            [[1.0.into(), 0.0.into()], [0.0.into(), 1.0.into()]]
        );
        let half_turn = wigner_rotation_matrix(delta(PI), Branch::Plus);
        let e = half_turn.entries();
        assert_abs_diff_eq!(e[0][0].re, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(e[0][1].re, 1.0, epsilon = 1e-16);
        assert_abs_diff_eq!(e[1][0].re, -1.0, epsilon = 1e-16);
        assert_abs_diff_eq!(e[1][1].re, 0.0, epsilon = 1e-16);
    }

    #[test]
    fn minus_branch_is_transpose_and_reversed_angle() {
        for d in [0.1, 0.7, 1.3, 2.9, PI] {
            let plus = wigner_rotation_matrix(delta(d), Branch::Plus);
            let minus = wigner_rotation_matrix(delta(d), Branch::Minus);
            let reversed = WignerRotationMatrix::with_signed_angle(-d, Branch::Plus);
            assert_eq!(*minus.entries(), plus.transpose());
            for i in 0..2 {
                for j in 0..2 {
                    assert_abs_diff_eq!(
                        minus.entries()[i][j].re,
                        reversed.entries()[i][j].re,
                        epsilon = 1e-15
                    );
                }
            }
            assert!(plus.unitarity_defect() < 1e-12);
            assert_abs_diff_eq!(plus.determinant().re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn boost_with_zero_angle_is_identity() {
        for class in HelicityClass::ALL {
            let rest = prepare_state(class, eta(1.1));
            let boosted = boost_state(&rest, WignerAngle::ZERO).unwrap();
            assert_eq!(boosted.amplitudes(), rest.amplitudes());
            assert_eq!(boosted.frame(), Frame::Boosted);
        }
    }

    #[test]
    fn boosting_twice_is_rejected() {
        let rest = prepare_state(HelicityClass::EqualPlus, eta(0.3));
        let once = boost_state(&rest, delta(0.5)).unwrap();
        assert!(matches!(
            boost_state(&once, delta(0.5)),
            Err(Error::AlreadyBoosted)
        ));
    }

    #[test]
    fn psi_at_right_angle_factorises() {
        for e in [0.0, 0.3, FRAC_PI_4, 1.2, 4.0] {
            let b = boost_state(
                &prepare_state(HelicityClass::EqualPlus, eta(e)),
                delta(FRAC_PI_2),
            )
            .unwrap();
            let (se, ce) = e.sin_cos();
            // (cos η |p+'> - sin η |p-'>) ⊗ (|↑> - |↓>)/√2
            let expected = [
                ce * FRAC_1_SQRT_2,
                -ce * FRAC_1_SQRT_2,
                -se * FRAC_1_SQRT_2,
                se * FRAC_1_SQRT_2,
            ];
            assert_amplitudes(&b, expected, 1e-15);
        }
    }

    #[test]
    fn boosted_xi_amplitudes() {
        for (e, d) in [(0.6, 0.3), (1.0, 2.5), (FRAC_PI_4, FRAC_PI_2)] {
            let b = boost_state(&prepare_state(HelicityClass::Unequal, eta(e)), delta(d)).unwrap();
            let (se, ce) = f64::sin_cos(e);
            let (sd, cd) = (0.5 * d).sin_cos();
            assert_amplitudes(&b, [ce * cd, -ce * sd, se * cd, se * sd], 1e-15);
        }
    }

    #[test]
    fn boosted_psi_tilde_amplitudes() {
        let (e, d) = (0.9, 1.7);
        let b = boost_state(&prepare_state(HelicityClass::EqualMinus, eta(e)), delta(d)).unwrap();
        let (se, ce) = f64::sin_cos(e);
        let (sd, cd) = (0.5 * d).sin_cos();
        assert_amplitudes(&b, [ce * sd, ce * cd, se * cd, se * sd], 1e-15);
    }

    #[test]
    fn local_unitary_and_controlled_gate_equivalences() {
        for (e, d) in [(0.2, 0.4), (0.6, 2.0), (3.5, 1.0), (5.9, 3.1)] {
            let psi =
                boost_state(&prepare_state(HelicityClass::EqualPlus, eta(e)), delta(d)).unwrap();
            let psi_tilde =
                boost_state(&prepare_state(HelicityClass::EqualMinus, eta(e)), delta(d)).unwrap();
            let xi = boost_state(&prepare_state(HelicityClass::Unequal, eta(e)), delta(d)).unwrap();

            let mapped = local_unitary_map_psi_to_psitilde(&psi);
            assert!(mapped.distance(&psi_tilde) < 1e-12);
            let twice = local_unitary_map_psi_to_psitilde(&mapped);
            assert!(twice.distance_up_to_phase(&psi) < 1e-12);

            let controlled = controlled_u_map_psi_to_xi(&psi);
            assert!(controlled.distance(&xi) < 1e-12);
            assert_eq!(
                controlled.spinor(Momentum::Plus),
                psi.spinor(Momentum::Plus)
            );
        }
    }

    #[test]
    fn record_round_trips_through_json() {
        let rest = prepare_state(HelicityClass::Unequal, eta(0.6));
        let boosted = boost_state(&rest, delta(0.3)).unwrap();
        let rec = StateRecord::new(HelicityClass::Unequal, eta(0.6), delta(0.3), &boosted);
        let json = serde_json::to_string(&rec).unwrap();
        assert!(json.starts_with(
            r#"{"class":"xi","eta":0.6,"delta":0.3,"frame":"boosted","amplitudes":[["#
        ));
        let back: StateRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_state().unwrap(), boosted);
    }

    #[test]
    fn transformed_momenta_are_recorded() {
        use crate::kinematics::{compose_boosts, BoostGeometry};
        let g = BoostGeometry::from_values(0.6, 0.6, 2.0).unwrap();
        let (u, v) = g.velocities();
        let c = compose_boosts(u, v);
        let rest = prepare_state(HelicityClass::EqualPlus, eta(0.6));
        let b = boost_state(&rest, c.angle)
            .unwrap()
            .with_transformed_momenta(&c.boost, [1.25, 0.0, 0.0, 0.75], [1.25, 0.0, 0.0, -0.75]);
        let [pp, pm] = b.momenta().unwrap();
        // mass shell is preserved: E^2 - |p|^2 = 1
        for p in [pp, pm] {
            assert_abs_diff_eq!(
                p[0] * p[0] - p[1] * p[1] - p[2] * p[2] - p[3] * p[3],
                1.0,
                epsilon = 1e-10
            );
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn unit_state() -> impl Strategy<Value = SpinMomentumState> {
            proptest::array::uniform8(-1.0f64..1.0)
                .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
                .prop_map(|v| {
                    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let amps = [0, 2, 4, 6].map(|i| Complex64::new(v[i] / n, v[i + 1] / n));
                    SpinMomentumState::from_amplitudes(amps, Frame::Rest).unwrap()
                })
        }

        proptest! {
            #[test]
            fn operations_preserve_norm(s in unit_state(), d in 0.0..=PI) {
                let b = boost_state(&s, delta(d)).unwrap();
                prop_assert!((b.norm_sqr() - 1.0).abs() < 1e-12);
                prop_assert!((local_unitary_map_psi_to_psitilde(&b).norm_sqr() - 1.0).abs() < 1e-12);
                prop_assert!((controlled_u_map_psi_to_xi(&b).norm_sqr() - 1.0).abs() < 1e-12);
            }

            #[test]
            fn boosted_psi_matches_closed_form(e in 0.0..TAU, d in 0.0..=PI) {
                let b = boost_state(&prepare_state(HelicityClass::EqualPlus, eta(e)), delta(d)).unwrap();
                let expected = boosted_psi_closed_form(e, d);
                for (a, x) in b.amplitudes().iter().zip(expected) {
                    prop_assert!((a - x).norm() < 1e-12);
                }
            }
        }
    }
}
