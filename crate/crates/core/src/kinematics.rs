//! Thomas-Wigner rotation of two composed Lorentz boosts.
//!
//! Units are natural (`c = 1`): speeds are fractions of the speed of light
//! and all angles are in radians. The particle moves along `+z` with speed
//! `u`; the observer is boosted with speed `v` along a direction in the
//! x-z plane that makes the boosting angle `phi` with the z axis.
//!
//! Three independent routes to the rotation angle are provided:
//!
//! * [`wigner_angle_cos_form`]: the classical `cos(delta) + 1 = N^2 / M` quotient,
//! * [`wigner_angle_tan_form`]: the half-angle form `tan(delta/2) = sin(phi) / (cos(phi) + D)`,
//! * [`compose_boosts`]: explicit 4x4 boost matrices, multiplied and split
//!   into a pure boost times a pure rotation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A speed in units of `c`, `0 <= value < 1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Speed(f64);

impl Speed {
    pub const REST: Speed = Speed(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..1.0).contains(&value) {
            Ok(Speed(value))
        } else {
            Err(domain("speed", value, "0 <= speed < 1"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Speed {
    type Error = crate::Error;

    fn try_from(value: f64) -> Result<Self> {
        Speed::new(value)
    }
}

impl From<Speed> for f64 {
    fn from(s: Speed) -> f64 {
        s.0
    }
}

/// Lorentz factor `1 / sqrt(1 - u^2)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LorentzGamma(f64);

impl LorentzGamma {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn lorentz_gamma(u: Speed) -> LorentzGamma {
    let u = u.value();
    // (1 - u)(1 + u) keeps full precision as u -> 1
    LorentzGamma(1.0 / ((1.0 - u) * (1.0 + u)).sqrt())
}

/// `gamma * u`, the spatial part of the four-velocity.
fn gamma_speed(u: Speed) -> f64 {
    lorentz_gamma(u).value() * u.value()
}

/// Boost geometry `(u, v, phi)` with `phi` the angle between the particle's
/// direction of motion and the observer's boost direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostGeometry {
    u: Speed,
    v: Speed,
    phi: f64,
}

impl BoostGeometry {
    pub fn new(u: Speed, v: Speed, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&phi) {
            return Err(domain("boosting angle phi", phi, "0 <= phi <= pi"));
        }
        Ok(BoostGeometry { u, v, phi })
    }

    /// Convenience constructor from raw numbers.
    pub fn from_values(u: f64, v: f64, phi: f64) -> Result<Self> {
        Self::new(Speed::new(u)?, Speed::new(v)?, phi)
    }

    pub fn u(&self) -> Speed {
        self.u
    }

    pub fn v(&self) -> Speed {
        self.v
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Particle velocity along `+z` and observer velocity at angle `phi` in the x-z plane.
    pub fn velocities(&self) -> (Velocity3, Velocity3) {
        let (s, c) = boosting_sin_cos(self.phi);
        let u = Velocity3 {
            x: 0.0,
            y: 0.0,
            z: self.u.value(),
        };
        let v = Velocity3 {
            x: self.v.value() * s,
            y: 0.0,
            z: self.v.value() * c,
        };
        (u, v)
    }
}

/// `sin` and `cos` of the boosting angle, exact at the collinear endpoints.
fn boosting_sin_cos(phi: f64) -> (f64, f64) {
    if phi == 0.0 {
        (0.0, 1.0)
    } else if phi == PI {
        (0.0, -1.0)
    } else {
        phi.sin_cos()
    }
}

/// Unsigned Wigner rotation angle, `0 <= delta <= pi`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct WignerAngle(f64);

impl WignerAngle {
    pub const ZERO: WignerAngle = WignerAngle(0.0);

    pub fn new(delta: f64) -> Result<Self> {
        if (0.0..=PI).contains(&delta) {
            Ok(WignerAngle(delta))
        } else {
            Err(domain("Wigner angle delta", delta, "0 <= delta <= pi"))
        }
    }

    /// Clamps into `[0, pi]`; for values produced by floating-point formulas.
    fn clamped(delta: f64) -> Self {
        WignerAngle(delta.clamp(0.0, PI))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }
}

impl TryFrom<f64> for WignerAngle {
    type Error = crate::Error;

    fn try_from(value: f64) -> Result<Self> {
        WignerAngle::new(value)
    }
}

impl From<WignerAngle> for f64 {
    fn from(a: WignerAngle) -> f64 {
        a.0
    }
}

/// The speed factor `D >= 1`; `+inf` when either speed vanishes.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct SpeedFactorD(f64);

impl SpeedFactorD {
    pub fn value(self) -> f64 {
        self.0
    }

    /// True when one of the speeds is zero and no rotation can occur.
    pub fn is_degenerate(self) -> bool {
        self.0.is_infinite()
    }
}

/// `D = sqrt((g_u + 1)(g_v + 1) / ((g_u - 1)(g_v - 1)))`.
///
/// Evaluated as `(g_u + 1)(g_v + 1) / (g_u u g_v v)`, which is the same
/// quantity since `g^2 - 1 = g^2 u^2`, but has no `g - 1` cancellation for
/// slow speeds.
pub fn speed_factor_d(u: Speed, v: Speed) -> SpeedFactorD {
    if u.value() == 0.0 || v.value() == 0.0 {
        return SpeedFactorD(f64::INFINITY);
    }
    let gu = lorentz_gamma(u).value();
    let gv = lorentz_gamma(v).value();
    SpeedFactorD((gu + 1.0) * (gv + 1.0) / (gamma_speed(u) * gamma_speed(v)))
}

/// Wigner angle from `cos(delta) + 1 = N^2 / M` with
/// `N = 1 + g_u + g_v + g_u g_v (1 + u v cos(phi))` and
/// `M = (g_u + 1)(g_v + 1)(g_u g_v (1 + u v cos(phi)) + 1)`.
///
/// `arccos` loses half the significant digits near `delta = 0`, so the
/// angle is recovered from both `1 + cos(delta) = N^2 / M` and its
/// complement `1 - cos(delta) = 2 - N^2 / M`. The complement is evaluated
/// from the exact identity `2M - N^2 = (g_u u)^2 (g_v v)^2 sin^2(phi)`, so
/// neither term involves a cancellation.
pub fn wigner_angle_cos_form(g: BoostGeometry) -> WignerAngle {
    let (s, c) = boosting_sin_cos(g.phi);
    let gu = lorentz_gamma(g.u).value();
    let gv = lorentz_gamma(g.v).value();
    let composite = gu * gv * (1.0 + g.u.value() * g.v.value() * c);
    let n = 1.0 + gu + gv + composite;
    let m = (gu + 1.0) * (gv + 1.0) * (composite + 1.0);
    let one_plus_cos = n * n / m;
    let cross = gamma_speed(g.u) * gamma_speed(g.v) * s;
    let one_minus_cos = cross * cross / m;
    let sin_delta = (one_plus_cos * one_minus_cos).sqrt();
    let cos_delta = 0.5 * (one_plus_cos - one_minus_cos);
    WignerAngle::clamped(sin_delta.atan2(cos_delta))
}

/// Wigner angle from `tan(delta / 2) = sin(phi) / (cos(phi) + D)`.
///
/// Uses `atan2`, so `cos(phi) + D -> 0` (the `delta -> pi` limit) is finite.
/// Returns zero when either speed vanishes.
pub fn wigner_angle_tan_form(g: BoostGeometry) -> WignerAngle {
    let d = speed_factor_d(g.u, g.v);
    if d.is_degenerate() {
        return WignerAngle::ZERO;
    }
    let (s, c) = boosting_sin_cos(g.phi);
    WignerAngle::clamped(2.0 * s.atan2(c + d.value()))
}

/// Wigner angle read off the explicit matrix composition.
pub fn wigner_angle_matrix(g: BoostGeometry) -> WignerAngle {
    let (u, v) = g.velocities();
    compose_boosts(u, v).angle
}

/// Boosting angle `phi* = arccos(-1 / D)` of maximal Wigner rotation.
///
/// `None` when a speed is zero: the rotation then vanishes for every `phi`.
pub fn argmax_boost_angle(u: Speed, v: Speed) -> Option<f64> {
    let d = speed_factor_d(u, v);
    if d.is_degenerate() {
        None
    } else {
        Some((-1.0 / d.value()).acos())
    }
}

/// True iff `delta(g) >= pi/2`.
///
/// Evaluated as `sin(phi) - cos(phi) >= D`. The squared form
/// `1 - sin(2 phi) >= D^2` also accepts the mirror branch
/// `cos(phi) - sin(phi) >= D`; since `D > 1` that branch is empty on
/// `[0, pi]` but not for negative angles, so the squared form must not be
/// used outside the boosting-angle domain.
pub fn ultra_relativistic_condition(g: BoostGeometry) -> bool {
    let d = speed_factor_d(g.u, g.v);
    if d.is_degenerate() {
        return false;
    }
    let (s, c) = boosting_sin_cos(g.phi);
    s - c >= d.value()
}

/// Interval of boosting angles with `delta >= pi/2`, or `None` if `D > sqrt(2)`.
///
/// Solves `sqrt(2) sin(phi - pi/4) = D`.
pub fn ultra_relativistic_interval(u: Speed, v: Speed) -> Option<(f64, f64)> {
    let d = speed_factor_d(u, v).value();
    let ratio = d / std::f64::consts::SQRT_2;
    if ratio > 1.0 {
        return None;
    }
    let a = ratio.asin();
    Some((FRAC_PI_4 + a, 5.0 * FRAC_PI_4 - a))
}

/// Least equal speed `u = v` at which `delta(phi) >= pi/2`.
///
/// For `u = v = sin(theta)` one has `D = cot^2(theta / 2)`, so the boundary
/// `D = sin(phi) - cos(phi) =: s` gives `u = 2 sqrt(s) / (1 + s)`.
/// `None` when `s <= 1`, i.e. for `phi <= pi/2`, where the threshold is
/// only reached in the light-speed limit.
pub fn equal_speed_threshold(phi: f64) -> Option<f64> {
    if !(FRAC_PI_2..=PI).contains(&phi) {
        return None;
    }
    let (sn, cs) = boosting_sin_cos(phi);
    let s = sn - cs;
    if s <= 1.0 {
        return None;
    }
    Some(2.0 * s.sqrt() / (1.0 + s))
}

/// A sub-luminal three-velocity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Velocity3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Velocity3 {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Velocity3 { x, y, z };
        let n = v.norm();
        if n < 1.0 && n.is_finite() {
            Ok(v)
        } else {
            Err(domain("|velocity|", n, "|velocity| < 1"))
        }
    }

    pub fn norm(&self) -> f64 {
        self.as_vector().norm()
    }

    fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }
}

const MINKOWSKI: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// A 4x4 Lorentz transformation acting on `(t, x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzMatrix4(Matrix4<f64>);

impl LorentzMatrix4 {
    /// Active pure boost giving a particle at rest the velocity `w`.
    pub fn pure_boost(w: Velocity3) -> Self {
        let beta = w.as_vector();
        let gamma = 1.0 / (1.0 - beta.norm_squared()).sqrt();
        // (gamma - 1) / |w|^2 without the cancellation
        let k = gamma * gamma / (gamma + 1.0);
        let mut m = Matrix4::identity();
        m[(0, 0)] = gamma;
        for i in 0..3 {
            m[(0, i + 1)] = gamma * beta[i];
            m[(i + 1, 0)] = gamma * beta[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] += k * beta[i] * beta[j];
            }
        }
        LorentzMatrix4(m)
    }

    /// Pure boost whose first column is `(gamma, gamma * w)`.
    ///
    /// Taking `gamma` from a matrix entry avoids forming `1 - |w|^2`.
    fn boost_from_column(gamma: f64, gw: [f64; 3]) -> Self {
        let mut m = Matrix4::identity();
        m[(0, 0)] = gamma;
        for i in 0..3 {
            m[(0, i + 1)] = gw[i];
            m[(i + 1, 0)] = gw[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] += gw[i] * gw[j] / (gamma + 1.0);
            }
        }
        LorentzMatrix4(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// Entries in row-major order.
    pub fn rows(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[(i, j)];
            }
        }
        out
    }

    /// Spatial 3x3 block.
    pub fn spatial_block(&self) -> Matrix3<f64> {
        self.0.fixed_view::<3, 3>(1, 1).into_owned()
    }

    pub fn apply(&self, p: [f64; 4]) -> [f64; 4] {
        let r = self.0 * nalgebra::Vector4::from(p);
        [r[0], r[1], r[2], r[3]]
    }

    /// `max |L^T eta L - eta|`, relative to the largest squared entry of `L`.
    ///
    /// Boost entries grow like `gamma`, so the absolute residual grows like
    /// `gamma^2 * eps`; the relative form is scale free.
    pub fn metric_defect(&self) -> f64 {
        let eta = Matrix4::from_diagonal(&nalgebra::Vector4::from(MINKOWSKI));
        let residual = self.0.transpose() * eta * self.0 - eta;
        let scale = self.0.amax().powi(2).max(1.0);
        residual.amax() / scale
    }

    /// Proper orthochronous Lorentz transformation to tolerance `tol`.
    pub fn is_proper_orthochronous(&self, tol: f64) -> bool {
        let scale = self.0.amax().powi(4).max(1.0);
        self.metric_defect() <= tol
            && (self.0.determinant() - 1.0).abs() <= tol * scale
            && self.0[(0, 0)] >= 1.0 - tol
    }
}

impl std::ops::Mul for LorentzMatrix4 {
    type Output = LorentzMatrix4;

    fn mul(self, rhs: LorentzMatrix4) -> LorentzMatrix4 {
        LorentzMatrix4(self.0 * rhs.0)
    }
}

/// Result of composing two boosts: `boost * rotation = B(v_vec) B(u_vec)`.
#[derive(Clone, Copy, Debug)]
pub struct BoostComposition {
    pub product: LorentzMatrix4,
    pub boost: LorentzMatrix4,
    pub rotation: LorentzMatrix4,
    pub angle: WignerAngle,
    /// Unit rotation axis (right-hand rule); `None` when `angle == 0`.
    pub axis: Option<[f64; 3]>,
    raw_defect: f64,
}

impl BoostComposition {
    /// `max |R^T R - 1|` of the spatial block of `B(-w) L` before it is
    /// projected onto the nearest rotation.
    pub fn rotation_orthogonality_defect(&self) -> f64 {
        self.raw_defect
    }
}

/// Composes the boost `u_vec` followed by `v_vec` and splits the product into
/// a pure boost times a pure rotation.
///
/// The pure boost factor of the polar decomposition is the boost to the
/// composite velocity `w = L[i][0] / L[0][0]`, built from the first column of
/// `L`. The spatial block of `B(-w) L` is projected onto its nearest rotation
/// and the angle is read from its trace and antisymmetric part.
pub fn compose_boosts(u_vec: Velocity3, v_vec: Velocity3) -> BoostComposition {
    let product = LorentzMatrix4::pure_boost(v_vec) * LorentzMatrix4::pure_boost(u_vec);
    let m = product.matrix();
    let t = m[(0, 0)];
    let gw = [m[(1, 0)], m[(2, 0)], m[(3, 0)]];
    let boost = LorentzMatrix4::boost_from_column(t, gw);
    let raw = (LorentzMatrix4::boost_from_column(t, gw.map(|x| -x)) * product).spatial_block();
    let raw_defect = (raw.transpose() * raw - Matrix3::identity()).amax();
    // orthogonal polar factor U V^T
    let svd = raw.svd(true, true);
    let r = svd.u.expect("requested") * svd.v_t.expect("requested");
    let mut rm = Matrix4::identity();
    rm.fixed_view_mut::<3, 3>(1, 1).copy_from(&r);
    let rotation = LorentzMatrix4(rm);

    let cos_delta = 0.5 * (r.trace() - 1.0);
    let a = Vector3::new(
        r[(2, 1)] - r[(1, 2)],
        r[(0, 2)] - r[(2, 0)],
        r[(1, 0)] - r[(0, 1)],
    );
    let sin_delta = 0.5 * a.norm();
    let angle = WignerAngle::clamped(sin_delta.atan2(cos_delta));
    let axis = if sin_delta > 0.0 {
        let n = a / a.norm();
        Some([n[0], n[1], n[2]])
    } else {
        None
    };

    BoostComposition {
        product,
        boost,
        rotation,
        angle,
        axis,
        raw_defect,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn geom(u: f64, v: f64, phi: f64) -> BoostGeometry {
        BoostGeometry::from_values(u, v, phi).unwrap()
    }

    fn speed(u: f64) -> Speed {
        Speed::new(u).unwrap()
    }

    #[test]
    fn gamma_matches_boost_matrix_entry() {
        assert_eq!(lorentz_gamma(Speed::REST).value(), 1.0);
        for (u, expected) in [(0.95, 3.2026), (0.995, 10.0125)] {
            let g = lorentz_gamma(speed(u)).value();
            let b = LorentzMatrix4::pure_boost(Velocity3::new(u, 0.0, 0.0).unwrap());
            assert_abs_diff_eq!(g, b.matrix()[(0, 0)], epsilon = 1e-12);
            assert_abs_diff_eq!(g, expected, epsilon = 1e-4);
        }
    }

    #[test]
    fn speed_domain_is_enforced() {
        assert!(Speed::new(1.0).is_err());
        assert!(Speed::new(-0.1).is_err());
        assert!(Speed::new(f64::NAN).is_err());
        assert!(BoostGeometry::from_values(0.5, 0.5, 3.5).is_err());
        assert!(BoostGeometry::from_values(0.5, 0.5, -1e-9).is_err());
        assert!(WignerAngle::new(4.0).is_err());
    }

    // Reference values from a 40-digit mpmath evaluation of the tangent form.
    const DELTA_HALF_HALF_PERP: f64 = 0.143_347_568_905_365_36;

    #[test]
    fn three_routes_agree_for_perpendicular_half_c() {
        let g = geom(0.5, 0.5, FRAC_PI_2);
        let cos_form = wigner_angle_cos_form(g).radians();
        let tan_form = wigner_angle_tan_form(g).radians();
        let matrix = wigner_angle_matrix(g).radians();
        assert_abs_diff_eq!(cos_form, DELTA_HALF_HALF_PERP, epsilon = 1e-14);
        assert_abs_diff_eq!(tan_form, DELTA_HALF_HALF_PERP, epsilon = 1e-14);
        assert_abs_diff_eq!(matrix, DELTA_HALF_HALF_PERP, epsilon = 1e-12);
    }

    #[test]
    fn collinear_and_rest_cases_vanish_exactly() {
        for g in [
            geom(0.5, 0.5, 0.0),
            geom(0.5, 0.5, PI),
            geom(0.0, 0.9, 1.0),
            geom(0.9, 0.0, 2.0),
            geom(0.999, 0.999, PI),
        ] {
            assert_eq!(wigner_angle_cos_form(g).radians(), 0.0, "{g:?}");
            assert_eq!(wigner_angle_tan_form(g).radians(), 0.0, "{g:?}");
        }
    }

    #[test]
    fn speed_factor_values() {
        // (g + 1) / (g - 1) with g = 2 / sqrt(3)
        let g: f64 = 2.0 / 3f64.sqrt();
        assert_abs_diff_eq!(
            speed_factor_d(speed(0.5), speed(0.5)).value(),
            (g + 1.0) / (g - 1.0),
            epsilon = 1e-11
        );
        assert_abs_diff_eq!(
            speed_factor_d(speed(0.5), speed(0.5)).value(),
            13.928,
            epsilon = 1e-3
        );
        assert_abs_diff_eq!(
            speed_factor_d(speed(0.995), speed(0.995)).value(),
            1.221_913_430_018_819_5,
            epsilon = 1e-13
        );
        assert!(speed_factor_d(Speed::REST, speed(0.3)).is_degenerate());
        let near_light = speed_factor_d(speed(0.999_999_9), speed(0.999_999_9)).value();
        assert!((1.0..1.001).contains(&near_light));
    }

    fn grid_argmax(u: f64, v: f64, n: usize) -> f64 {
        let step = PI / (n - 1) as f64;
        (0..n)
            .map(|i| i as f64 * step)
            .max_by(|a, b| {
                let da = wigner_angle_tan_form(geom(u, v, *a)).radians();
                let db = wigner_angle_tan_form(geom(u, v, *b)).radians();
                da.total_cmp(&db)
            })
            .unwrap()
    }

    #[test]
    fn argmax_agrees_with_grid_search() {
        for (u, expected) in [
            (0.95, 2.122_454_267_215_956_7),
            (0.995, 2.529_397_622_820_325),
        ] {
            let phi_star = argmax_boost_angle(speed(u), speed(u)).unwrap();
            assert_abs_diff_eq!(phi_star, expected, epsilon = 1e-13);
            let n = 31_416;
            assert!((grid_argmax(u, u, n) - phi_star).abs() <= PI / (n - 1) as f64);
        }
        assert_eq!(argmax_boost_angle(Speed::REST, speed(0.5)), None);
        let slow = argmax_boost_angle(speed(1e-4), speed(1e-4)).unwrap();
        assert_abs_diff_eq!(slow, FRAC_PI_2, epsilon = 1e-7);
    }

    #[test]
    fn rotation_beyond_right_angle_at_phi_star() {
        let phi_star = argmax_boost_angle(speed(0.995), speed(0.995)).unwrap();
        let g = geom(0.995, 0.995, phi_star);
        let delta = wigner_angle_tan_form(g).radians();
        assert_abs_diff_eq!(delta, 1.917_202_592_050_856_6, epsilon = 1e-12);
        assert_abs_diff_eq!(wigner_angle_matrix(g).radians(), delta, epsilon = 1e-9);
        assert!(delta > FRAC_PI_2);
    }

    #[test]
    fn ultra_relativistic_examples() {
        assert!(ultra_relativistic_condition(geom(
            0.995,
            0.995,
            3.0 * FRAC_PI_4
        )));
        for i in 0..=100 {
            let phi = PI * i as f64 / 100.0;
            assert!(!ultra_relativistic_condition(geom(0.95, 0.95, phi)));
        }
        for u in [0.1, 0.9, 0.999, 0.999_999] {
            assert!(!ultra_relativistic_condition(geom(u, u, FRAC_PI_2)));
        }
    }

    #[test]
    fn squared_inequality_matches_only_on_boosting_domain() {
        let d = speed_factor_d(speed(0.999_99), speed(0.999_99)).value();
        for i in 0..=1000 {
            let phi = PI * i as f64 / 1000.0;
            let g = geom(0.999_99, 0.999_99, phi);
            let squared = 1.0 - (2.0 * phi).sin() >= d * d;
            assert_eq!(squared, ultra_relativistic_condition(g), "phi = {phi}");
        }
        // mirror branch: holds at phi = -pi / 4 although sin - cos < 0
        let phi = -FRAC_PI_4;
        assert!(1.0 - (2.0 * phi).sin() >= d * d);
        assert!(phi.sin() - phi.cos() < 0.0);
    }

    #[test]
    fn ultra_interval_endpoints_are_right_angles() {
        let (lo, hi) = ultra_relativistic_interval(speed(0.995), speed(0.995)).unwrap();
        assert_abs_diff_eq!(lo, 1.828_605_231_742_770_3, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 2.883_783_748_641_919_6, epsilon = 1e-12);
        for phi in [lo, hi] {
            let delta = wigner_angle_tan_form(geom(0.995, 0.995, phi)).radians();
            assert_abs_diff_eq!(delta, FRAC_PI_2, epsilon = 1e-6);
        }
        assert!(ultra_relativistic_interval(speed(0.95), speed(0.95)).is_none());
    }

    #[test]
    fn equal_speed_threshold_at_three_quarter_pi() {
        let u = equal_speed_threshold(3.0 * FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(u, 0.985_171_431_009_416, epsilon = 1e-12);
        assert_abs_diff_eq!(
            speed_factor_d(speed(u), speed(u)).value(),
            2f64.sqrt(),
            epsilon = 1e-10
        );
        assert!(equal_speed_threshold(FRAC_PI_2).is_none());
        assert!(equal_speed_threshold(1.0).is_none());
    }

    #[test]
    fn relativistic_limit_converges_to_boosting_angle() {
        for phi in [0.5, 1.0, 2.0, 3.0] {
            let mut last = f64::INFINITY;
            for u in [0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999_999, 0.999_999_9] {
                let gap = (wigner_angle_tan_form(geom(u, u, phi)).radians() - phi).abs();
                assert!(gap < last, "phi = {phi}, u = {u}");
                last = gap;
            }
            assert!(last < 0.015, "phi = {phi}: {last}");
        }
    }

    #[test]
    fn collinear_composition_is_pure_boost() {
        let c = compose_boosts(
            Velocity3::new(0.0, 0.0, 0.5).unwrap(),
            Velocity3::new(0.0, 0.0, 0.7).unwrap(),
        );
        assert_eq!(c.angle.radians(), 0.0);
        assert!(c.axis.is_none());
        let r = c.rotation.matrix();
        assert!((r - Matrix4::identity()).amax() < 1e-12);
    }

    #[test]
    fn perpendicular_composition_rotates_about_y() {
        let u = Velocity3::new(0.0, 0.0, 0.5).unwrap();
        let v = Velocity3::new(0.5, 0.0, 0.0).unwrap();
        let c = compose_boosts(u, v);
        assert_abs_diff_eq!(c.angle.radians(), DELTA_HALF_HALF_PERP, epsilon = 1e-12);
        let axis = c.axis.unwrap();
        assert_abs_diff_eq!(axis[0], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(axis[2], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(axis[1].abs(), 1.0, epsilon = 1e-10);

        let swapped = compose_boosts(v, u);
        assert_abs_diff_eq!(swapped.angle.radians(), c.angle.radians(), epsilon = 1e-12);
        let swapped_axis = swapped.axis.unwrap();
        assert_abs_diff_eq!(swapped_axis[1], -axis[1], epsilon = 1e-10);

        assert!(c.rotation_orthogonality_defect() < 1e-10);
        for m in [c.product, c.boost, c.rotation] {
            assert!(m.is_proper_orthochronous(1e-12));
        }
        let recomposed = c.boost * c.rotation;
        assert!((recomposed.matrix() - c.product.matrix()).amax() < 1e-12);
    }

    #[test]
    fn boost_factor_is_symmetric_rotation_fixes_time() {
        let (u, v) = geom(0.9, 0.8, 2.0).velocities();
        let c = compose_boosts(u, v);
        let b = c.boost.matrix();
        assert!((b - b.transpose()).amax() < 1e-12);
        let r = c.rotation.matrix();
        assert_abs_diff_eq!(r[(0, 0)], 1.0, epsilon = 1e-12);
        for i in 1..4 {
            assert_abs_diff_eq!(r[(0, i)], 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r[(i, 0)], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn concave_in_boosting_angle() {
        for u in [0.1, 0.5, 0.95, 0.995, 0.9999] {
            let n = 2001;
            let h = PI / (n - 1) as f64;
            let d: Vec<f64> = (0..n)
                .map(|i| wigner_angle_tan_form(geom(u, u, (i as f64 * h).min(PI))).radians())
                .collect();
            for w in d.windows(3) {
                assert!(w[0] - 2.0 * w[1] + w[2] <= 1e-6, "u = {u}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn cos_and_tan_forms_agree(u in 0.01f64..0.99, v in 0.01f64..0.99, phi in 0.0..=PI) {
                let g = geom(u, v, phi);
                let a = wigner_angle_cos_form(g).radians();
                let b = wigner_angle_tan_form(g).radians();
                prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
                prop_assert_eq!(ultra_relativistic_condition(g), b >= FRAC_PI_2);
            }

            #[test]
            fn matrix_oracle_agrees(u in 0.01f64..0.99, v in 0.01f64..0.99, phi in 0.0..=PI) {
                let g = geom(u, v, phi);
                let (uv, vv) = g.velocities();
                let c = compose_boosts(uv, vv);
                prop_assert!((c.angle.radians() - wigner_angle_tan_form(g).radians()).abs() < 1e-8);
                prop_assert!(c.product.is_proper_orthochronous(1e-12));
                prop_assert!(c.rotation.is_proper_orthochronous(1e-12));
            }

            #[test]
            fn boost_matrices_preserve_metric(x in -0.57f64..0.57, y in -0.57f64..0.57, z in -0.57f64..0.57) {
                let b = LorentzMatrix4::pure_boost(Velocity3::new(x, y, z).unwrap());
                prop_assert!(b.is_proper_orthochronous(1e-12));
            }
        }
    }
}
