//! Self-check suite over every module invariant.
//!
//! Each check reduces a family of comparisons to one "max violation" number
//! and compares it with a named tolerance. Random samples come from a fixed
//! seed, so reports are reproducible.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::{
    boosted_entropy_closed_form, boosted_entropy_derivative, entanglement_difference_bound,
    rest_frame_entropy, state_entropy, Subsystem,
};
use crate::error::{Error, Result};
use crate::kinematics::{
    argmax_boost_angle, compose_boosts, ultra_relativistic_condition, wigner_angle_cos_form,
    wigner_angle_matrix, wigner_angle_tan_form, BoostGeometry, Speed, WignerAngle,
};
use crate::states::{
    boost_state, boosted_psi_closed_form, controlled_u_map_psi_to_xi,
    local_unitary_map_psi_to_psitilde, prepare_state, wigner_rotation_matrix, Branch, Frame,
    HelicityClass, PreparationAngle, SpinMomentumState,
};
use crate::sweep::{find_local_extrema, sweep_entanglement, uniform_grid, Regime, SweepRequest};

const SEED: u64 = 0x5eed_2b0a_57ed;
const RANDOM_SAMPLES: usize = 1000;
const ARGMAX_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Cosine form against tangent form, moderate speeds.
    pub formula: f64,
    /// Cosine form against tangent form, speeds up to 0.9999.
    pub formula_ultra: f64,
    /// Closed form against the 4×4 composition.
    pub matrix: f64,
    pub metric: f64,
    pub orthogonality: f64,
    pub axis: f64,
    /// Largest admissible positive second difference of δ(φ).
    pub concavity: f64,
    pub norm: f64,
    pub amplitude: f64,
    pub entropy: f64,
    pub derivative: f64,
    pub extremum: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            formula: 1e-10,
            formula_ultra: 1e-6,
            matrix: 1e-8,
            metric: 1e-12,
            orthogonality: 1e-10,
            axis: 1e-8,
            concavity: 1e-6,
            norm: 1e-12,
            amplitude: 1e-12,
            entropy: 1e-12,
            derivative: 1e-6,
            extremum: 1e-6,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 12] = [
        "formula",
        "formula_ultra",
        "matrix",
        "metric",
        "orthogonality",
        "axis",
        "concavity",
        "norm",
        "amplitude",
        "entropy",
        "derivative",
        "extremum",
    ];

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "formula" => &mut self.formula,
            "formula_ultra" => &mut self.formula_ultra,
            "matrix" => &mut self.matrix,
            "metric" => &mut self.metric,
            "orthogonality" => &mut self.orthogonality,
            "axis" => &mut self.axis,
            "concavity" => &mut self.concavity,
            "norm" => &mut self.norm,
            "amplitude" => &mut self.amplitude,
            "entropy" => &mut self.entropy,
            "derivative" => &mut self.derivative,
            "extremum" => &mut self.extremum,
            _ => return None,
        })
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidRequest(format!(
                "tolerance {key} = {value} must be finite and non-negative"
            )));
        }
        let slot = self.slot(key).ok_or_else(|| {
            Error::InvalidRequest(format!(
                "unknown tolerance key `{key}` (expected one of {})",
                Self::KEYS.join(", ")
            ))
        })?;
        *slot = value;
        Ok(())
    }

    /// Parses `key=value`.
    pub fn apply_override(&mut self, entry: &str) -> Result<()> {
        let (key, value) = entry.split_once('=').ok_or_else(|| {
            Error::InvalidRequest(format!("tolerance override `{entry}` is not key=value"))
        })?;
        let value: f64 = value.trim().parse().map_err(|_| {
            Error::InvalidRequest(format!(
                "tolerance override `{entry}` has a non-numeric value"
            ))
        })?;
        self.set(key.trim(), value)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    /// Number of sample points the check evaluated.
    pub samples: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub grid: usize,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(
                f,
                "{} {:width$}  samples={:<8} max_violation={:<10.3e} tol={:.1e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.samples,
                c.max_violation,
                c.tolerance,
            )?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} of {} checks passed (grid {})",
            self.checks.len() - failed,
            self.checks.len(),
            self.grid
        )
    }
}

struct Suite {
    grid: usize,
    tol: Tolerances,
    checks: Vec<CheckResult>,
}

impl Suite {
    fn record(&mut self, name: &'static str, samples: usize, max_violation: f64, tolerance: f64) {
        self.checks.push(CheckResult {
            name,
            samples,
            max_violation,
            tolerance,
            // NaN violations fail
            passed: max_violation <= tolerance,
        });
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn par_max<T: Sync>(items: &[T], f: impl Fn(&T) -> f64 + Sync + Send) -> f64 {
    items.par_iter().map(f).reduce(|| 0.0, nan_max)
}

fn speed(x: f64) -> Speed {
    Speed::new(x).expect("grid speeds lie in [0, 1)")
}

fn geometry_grid(lo: f64, hi: f64, n: usize) -> Vec<BoostGeometry> {
    let speeds = uniform_grid(lo, hi, n);
    let phis = uniform_grid(0.0, PI, n);
    let mut out = Vec::with_capacity(n * n * n);
    for &u in &speeds {
        for &v in &speeds {
            for &phi in &phis {
                out.push(
                    BoostGeometry::new(speed(u), speed(v), phi).expect("grid angle in [0, pi]"),
                );
            }
        }
    }
    out
}

fn random_eta(rng: &mut ChaCha8Rng) -> PreparationAngle {
    PreparationAngle::new(rng.gen_range(0.0..2.0 * PI)).expect("sampled in [0, 2pi)")
}

fn random_delta(rng: &mut ChaCha8Rng) -> WignerAngle {
    WignerAngle::new(rng.gen_range(0.0..=PI)).expect("sampled in [0, pi]")
}

fn random_state(rng: &mut ChaCha8Rng) -> SpinMomentumState {
    let mut a = [Complex64::new(0.0, 0.0); 4];
    for z in &mut a {
        *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut a {
        *z /= norm;
    }
    SpinMomentumState::from_amplitudes(a, Frame::Rest).expect("normalised above")
}

/// Runs every check; `grid` is the per-axis resolution of the deterministic grids.
pub fn run_suite(grid: usize, tol: &Tolerances) -> Result<Report> {
    if grid < 3 {
        return Err(Error::InvalidRequest(format!(
            "grid = {grid} but at least 3 is required"
        )));
    }
    let mut suite = Suite {
        grid,
        tol: *tol,
        checks: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    kinematics_checks(&mut suite, &mut rng);
    states_checks(&mut suite, &mut rng);
    entanglement_checks(&mut suite, &mut rng);
    sweep_checks(&mut suite)?;
    Ok(Report {
        grid,
        checks: suite.checks,
    })
}

fn kinematics_checks(s: &mut Suite, rng: &mut ChaCha8Rng) {
    let n = s.grid;
    let t = s.tol;

    let moderate = geometry_grid(0.01, 0.99, n);
    let v = par_max(&moderate, |&g| {
        (wigner_angle_cos_form(g).radians() - wigner_angle_tan_form(g).radians()).abs()
    });
    s.record("kinematics.cos_vs_tan", moderate.len(), v, t.formula);

    let fast = geometry_grid(0.01, 0.9999, n);
    let v = par_max(&fast, |&g| {
        (wigner_angle_cos_form(g).radians() - wigner_angle_tan_form(g).radians()).abs()
    });
    s.record(
        "kinematics.cos_vs_tan_ultra",
        fast.len(),
        v,
        t.formula_ultra,
    );

    let v = par_max(&moderate, |&g| {
        (wigner_angle_tan_form(g).radians() - wigner_angle_matrix(g).radians()).abs()
    });
    s.record("kinematics.tan_vs_matrix", moderate.len(), v, t.matrix);

    let compositions: Vec<_> = moderate
        .par_iter()
        .map(|g| {
            let (a, b) = g.velocities();
            compose_boosts(a, b)
        })
        .collect();
    let v = par_max(&compositions, |c| {
        [&c.product, &c.boost, &c.rotation]
            .iter()
            .map(|m| m.metric_defect())
            .fold(0.0, nan_max)
    });
    s.record("kinematics.lorentz_metric", compositions.len(), v, t.metric);

    let v = par_max(&compositions, |c| {
        let proper = [&c.product, &c.boost, &c.rotation]
            .iter()
            .all(|m| m.is_proper_orthochronous(t.metric.max(1e-12)));
        if proper {
            0.0
        } else {
            1.0
        }
    });
    s.record(
        "kinematics.proper_orthochronous",
        compositions.len(),
        v,
        0.0,
    );

    let v = par_max(&compositions, |c| c.rotation_orthogonality_defect());
    s.record(
        "kinematics.rotation_orthogonality",
        compositions.len(),
        v,
        t.orthogonality,
    );

    let v = par_max(&compositions, |c| match c.axis {
        Some(axis) => 1.0 - axis[1].abs(),
        None => 0.0,
    });
    s.record(
        "kinematics.axis_perpendicular",
        compositions.len(),
        v,
        t.axis,
    );

    // second differences of δ(φ) in rad/rad²
    let speeds = uniform_grid(0.05, 0.9999, n);
    let phis = uniform_grid(0.0, PI, 10 * n);
    let h = phis[1] - phis[0];
    let pairs: Vec<(f64, f64)> = speeds
        .iter()
        .flat_map(|&u| speeds.iter().map(move |&v| (u, v)))
        .collect();
    let v = par_max(&pairs, |&(u, v)| {
        let d: Vec<f64> = phis
            .iter()
            .map(|&phi| {
                wigner_angle_tan_form(BoostGeometry::new(speed(u), speed(v), phi).unwrap())
                    .radians()
            })
            .collect();
        d.windows(3)
            .map(|w| ((w[2] - 2.0 * w[1] + w[0]) / (h * h)).max(0.0))
            .fold(0.0, nan_max)
    });
    s.record(
        "kinematics.concavity",
        pairs.len() * phis.len(),
        v,
        t.concavity,
    );

    let mut zero_cases = Vec::new();
    for &u in &uniform_grid(0.0, 0.9999, n) {
        for &phi in &uniform_grid(0.0, PI, n) {
            zero_cases.push((u, 0.0, phi));
            zero_cases.push((0.0, u, phi));
        }
        for &w in &uniform_grid(0.0, 0.9999, n) {
            zero_cases.push((u, w, 0.0));
            zero_cases.push((u, w, PI));
        }
    }
    let v = par_max(&zero_cases, |&(u, w, phi)| {
        let g = BoostGeometry::from_values(u, w, phi).unwrap();
        wigner_angle_cos_form(g)
            .radians()
            .max(wigner_angle_tan_form(g).radians())
    });
    s.record("kinematics.degenerate_zero", zero_cases.len(), v, 0.0);

    // mismatches counted away from the π/2 level set itself
    let v = par_max(&fast, |&g| {
        let d = wigner_angle_tan_form(g).radians();
        if (d - FRAC_PI_2).abs() < 1e-12 || ultra_relativistic_condition(g) == (d >= FRAC_PI_2) {
            0.0
        } else {
            1.0
        }
    });
    s.record("kinematics.ultra_condition", fast.len(), v, 0.0);

    // grid argmax within one step of arccos(-1/D), in units of the step
    let pairs: Vec<(Speed, Speed)> = (0..n)
        .map(|_| {
            (
                speed(rng.gen_range(0.05..0.9999)),
                speed(rng.gen_range(0.05..0.9999)),
            )
        })
        .collect();
    let phis = uniform_grid(0.0, PI, ARGMAX_SAMPLES);
    let step = phis[1] - phis[0];
    let v = par_max(&pairs, |&(u, v)| {
        let (best, _) = phis
            .iter()
            .map(|&phi| {
                (
                    phi,
                    wigner_angle_tan_form(BoostGeometry::new(u, v, phi).unwrap()).radians(),
                )
            })
            .fold(
                (0.0, f64::NEG_INFINITY),
                |acc, x| if x.1 > acc.1 { x } else { acc },
            );
        (best - argmax_boost_angle(u, v).unwrap()).abs() / step
    });
    s.record(
        "kinematics.argmax_phi_star",
        pairs.len() * ARGMAX_SAMPLES,
        v,
        1.0,
    );
}

fn states_checks(s: &mut Suite, rng: &mut ChaCha8Rng) {
    let t = s.tol;
    let samples: Vec<(
        HelicityClass,
        PreparationAngle,
        WignerAngle,
        SpinMomentumState,
    )> = (0..RANDOM_SAMPLES)
        .map(|i| {
            let class = HelicityClass::ALL[i % 3];
            (class, random_eta(rng), random_delta(rng), random_state(rng))
        })
        .collect();

    let mut norm = 0.0_f64;
    for (_, _, delta, state) in &samples {
        let boosted = boost_state(state, *delta).expect("rest-frame input");
        for out in [
            &boosted,
            &local_unitary_map_psi_to_psitilde(state),
            &controlled_u_map_psi_to_xi(state),
        ] {
            norm = nan_max(norm, (out.norm_sqr() - 1.0).abs());
        }
    }
    s.record("states.norm_preservation", samples.len(), norm, t.norm);

    let mut identity = 0.0_f64;
    for (class, eta, _, _) in &samples {
        let rest = prepare_state(*class, *eta);
        let boosted = boost_state(&rest, WignerAngle::ZERO).expect("rest-frame input");
        identity = nan_max(identity, boosted.distance(&rest));
    }
    s.record(
        "states.zero_boost_identity",
        samples.len(),
        identity,
        t.amplitude,
    );

    let mut regression = 0.0_f64;
    for (_, eta, delta, _) in &samples {
        let boosted = boost_state(&prepare_state(HelicityClass::EqualPlus, *eta), *delta).unwrap();
        let closed = boosted_psi_closed_form(eta.radians(), delta.radians());
        for (a, c) in boosted.amplitudes().iter().zip(closed) {
            regression = nan_max(regression, (a - Complex64::new(c, 0.0)).norm());
        }
    }
    s.record(
        "states.boosted_psi_closed_form",
        samples.len(),
        regression,
        t.amplitude,
    );

    let mut lu = 0.0_f64;
    let mut cu = 0.0_f64;
    for (_, eta, delta, _) in &samples {
        let psi = boost_state(&prepare_state(HelicityClass::EqualPlus, *eta), *delta).unwrap();
        let psitilde =
            boost_state(&prepare_state(HelicityClass::EqualMinus, *eta), *delta).unwrap();
        let xi = boost_state(&prepare_state(HelicityClass::Unequal, *eta), *delta).unwrap();
        lu = nan_max(
            lu,
            psitilde.distance(&local_unitary_map_psi_to_psitilde(&psi)),
        );
        cu = nan_max(cu, xi.distance(&controlled_u_map_psi_to_xi(&psi)));
    }
    s.record(
        "states.local_unitary_equivalence",
        samples.len(),
        lu,
        t.amplitude,
    );
    s.record(
        "states.controlled_u_equivalence",
        samples.len(),
        cu,
        t.amplitude,
    );

    let mut unitary = 0.0_f64;
    for (_, _, delta, _) in &samples {
        for branch in [Branch::Plus, Branch::Minus] {
            let u = wigner_rotation_matrix(*delta, branch);
            unitary = nan_max(unitary, u.unitarity_defect());
            unitary = nan_max(unitary, (u.determinant() - 1.0).norm());
        }
    }
    s.record(
        "states.rotation_unitarity",
        2 * samples.len(),
        unitary,
        t.amplitude,
    );
}

fn entanglement_checks(s: &mut Suite, rng: &mut ChaCha8Rng) {
    let n = s.grid;
    let t = s.tol;

    let mut oracle = 0.0_f64;
    let mut subsystems = 0.0_f64;
    let mut helicity = 0.0_f64;
    for class in HelicityClass::ALL {
        for _ in 0..RANDOM_SAMPLES {
            let (eta, delta) = (random_eta(rng), random_delta(rng));
            let boosted = boost_state(&prepare_state(class, eta), delta).unwrap();
            let spin = state_entropy(&boosted, Subsystem::Spin).map_or(f64::NAN, |e| e.value());
            let momentum =
                state_entropy(&boosted, Subsystem::Momentum).map_or(f64::NAN, |e| e.value());
            let closed = boosted_entropy_closed_form(eta, delta, class).value();
            oracle = nan_max(oracle, (spin - closed).abs());
            subsystems = nan_max(subsystems, (spin - momentum).abs());
            if class == HelicityClass::EqualPlus {
                let tilde =
                    boost_state(&prepare_state(HelicityClass::EqualMinus, eta), delta).unwrap();
                let e = state_entropy(&tilde, Subsystem::Spin).map_or(f64::NAN, |e| e.value());
                helicity = nan_max(helicity, (e - spin).abs());
            }
        }
    }
    s.record(
        "entanglement.closed_form_oracle",
        3 * RANDOM_SAMPLES,
        oracle,
        t.entropy,
    );
    s.record(
        "entanglement.subsystem_symmetry",
        3 * RANDOM_SAMPLES,
        subsystems,
        t.entropy,
    );
    s.record(
        "entanglement.helicity_equivalence",
        RANDOM_SAMPLES,
        helicity,
        t.entropy,
    );

    // η strictly inside (0, π/2) avoids the degenerate product and Bell points' endpoints
    let etas: Vec<PreparationAngle> = (1..=n)
        .map(|i| PreparationAngle::new(i as f64 * FRAC_PI_2 / (n + 1) as f64).unwrap())
        .collect();
    let first = uniform_grid(0.0, FRAC_PI_2, 4 * n);
    let second = uniform_grid(FRAC_PI_2, PI, 4 * n);
    let monotone = |class: HelicityClass| {
        let sign = if class.is_equal_helicity() { 1.0 } else { -1.0 };
        let mut worst = 0.0_f64;
        for &eta in &etas {
            let e = |d: f64| {
                boosted_entropy_closed_form(eta, WignerAngle::new(d).unwrap(), class).value()
            };
            for w in first.windows(2) {
                worst = nan_max(worst, (sign * (e(w[1]) - e(w[0]))).max(0.0));
            }
            for w in second.windows(2) {
                worst = nan_max(worst, (sign * (e(w[0]) - e(w[1]))).max(0.0));
            }
        }
        worst
    };
    let count = etas.len() * (first.len() + second.len());
    s.record(
        "entanglement.monotonicity_equal",
        count,
        monotone(HelicityClass::EqualPlus),
        0.0,
    );
    s.record(
        "entanglement.monotonicity_unequal",
        count,
        monotone(HelicityClass::Unequal),
        0.0,
    );

    let h = 1e-6;
    let deltas = uniform_grid(0.01, PI - 0.01, 4 * n);
    let mut derivative = 0.0_f64;
    for class in HelicityClass::ALL {
        for &eta in &etas {
            for &d in &deltas {
                let e = |x: f64| {
                    boosted_entropy_closed_form(eta, WignerAngle::new(x).unwrap(), class).value()
                };
                let fd = (e(d + h) - e(d - h)) / (2.0 * h);
                let analytic = boosted_entropy_derivative(eta, WignerAngle::new(d).unwrap(), class);
                derivative = nan_max(derivative, (fd - analytic).abs());
            }
        }
    }
    s.record(
        "entanglement.derivative_vs_fd",
        3 * etas.len() * deltas.len(),
        derivative,
        t.derivative,
    );

    let all_etas = uniform_grid(0.0, 2.0 * PI - 1e-9, 4 * n);
    let half = uniform_grid(0.0, FRAC_PI_2, 4 * n);
    let mut duality = 0.0_f64;
    for &eta in &all_etas {
        let eta = PreparationAngle::new(eta).unwrap();
        for &d in &half {
            let equal = boosted_entropy_closed_form(
                eta,
                WignerAngle::new(d).unwrap(),
                HelicityClass::EqualPlus,
            );
            let unequal = boosted_entropy_closed_form(
                eta,
                WignerAngle::new(FRAC_PI_2 - d).unwrap(),
                HelicityClass::Unequal,
            );
            duality = nan_max(duality, (equal.value() - unequal.value()).abs());
        }
    }
    s.record(
        "entanglement.duality",
        all_etas.len() * half.len(),
        duality,
        t.entropy,
    );

    let full = uniform_grid(0.0, PI, 4 * n);
    let mut reflection = 0.0_f64;
    for class in HelicityClass::ALL {
        for &eta in &all_etas {
            let eta = PreparationAngle::new(eta).unwrap();
            for &d in &full {
                let a =
                    boosted_entropy_closed_form(eta, WignerAngle::new(d).unwrap(), class).value();
                let b = boosted_entropy_closed_form(eta, WignerAngle::new(PI - d).unwrap(), class)
                    .value();
                reflection = nan_max(reflection, (a - b).abs());
            }
        }
    }
    s.record(
        "entanglement.reflection_symmetry",
        3 * all_etas.len() * full.len(),
        reflection,
        t.entropy,
    );

    let bound_grid = 4 * n;
    let mut bound = 0.0_f64;
    for class in HelicityClass::ALL {
        for &eta in &uniform_grid(0.0, 2.0 * PI - 1e-9, bound_grid) {
            let eta = PreparationAngle::new(eta).unwrap();
            for &d in &uniform_grid(0.0, PI, bound_grid) {
                let b = entanglement_difference_bound(eta, WignerAngle::new(d).unwrap(), class);
                bound = nan_max(bound, (b.bound - b.difference).max(0.0));
            }
        }
    }
    s.record(
        "entanglement.difference_bound",
        3 * bound_grid * bound_grid,
        bound,
        t.entropy,
    );

    let right = WignerAngle::new(FRAC_PI_2).unwrap();
    let mut special = 0.0_f64;
    for &eta in &all_etas {
        let eta = PreparationAngle::new(eta).unwrap();
        for class in [HelicityClass::EqualPlus, HelicityClass::EqualMinus] {
            special = nan_max(
                special,
                boosted_entropy_closed_form(eta, right, class).value(),
            );
        }
    }
    let bell = PreparationAngle::new(FRAC_PI_4).unwrap();
    special = nan_max(
        special,
        (boosted_entropy_closed_form(bell, right, HelicityClass::Unequal).value() - 1.0).abs(),
    );
    s.record(
        "entanglement.right_angle_cases",
        2 * all_etas.len() + 1,
        special,
        t.entropy,
    );
}

fn sweep_checks(s: &mut Suite) -> Result<()> {
    let n = s.grid;
    let t = s.tol;
    let speeds = uniform_grid(0.3, 0.999, n.min(12));
    let etas = [0.3, 0.6, 1.0, 2.5];

    let mut consistency = 0.0_f64;
    let mut capped = 0.0_f64;
    let mut nonneg = 0.0_f64;
    let mut phi_star = 0.0_f64;
    let mut regime = 0.0_f64;
    let mut rows = 0;
    let mut extremum_count = 0;
    let mut phi_star_count = 0;
    for &sp in &speeds {
        let u = speed(sp);
        for &eta in &etas {
            let eta = PreparationAngle::new(eta)?;
            for class in HelicityClass::ALL {
                let req = SweepRequest::full_range(u, u, eta, class);
                let series = sweep_entanglement(&req)?;
                let rest = rest_frame_entropy(eta, class).value();
                for row in &series.rows {
                    let g = BoostGeometry::new(u, u, row.phi)?;
                    let expected =
                        boosted_entropy_closed_form(eta, wigner_angle_tan_form(g), class).value();
                    consistency = nan_max(consistency, (row.entropy - expected).abs());
                    if class.is_equal_helicity() {
                        capped = nan_max(capped, (row.entropy - rest).max(0.0));
                    } else {
                        nonneg = nan_max(nonneg, (-row.entropy).max(0.0));
                    }
                }
                rows += series.rows.len();

                let report = find_local_extrema(&series)?;
                let star = argmax_boost_angle(u, u).expect("nonzero speeds");
                let star_delta = wigner_angle_tan_form(BoostGeometry::new(u, u, star)?);
                for e in &report.extrema {
                    extremum_count += 1;
                    let g = BoostGeometry::new(u, u, e.phi)?;
                    if (e.delta - FRAC_PI_2).abs() > 1e-9
                        && (e.regime == Regime::Ultra) != ultra_relativistic_condition(g)
                    {
                        regime = 1.0;
                    }
                }
                if star_delta.radians() < FRAC_PI_2 {
                    phi_star_count += 1;
                    phi_star = nan_max(
                        phi_star,
                        match report.extrema.as_slice() {
                            [only] => (only.phi - star).abs(),
                            _ => f64::INFINITY,
                        },
                    );
                }
            }
        }
    }
    s.record("sweep.row_consistency", rows, consistency, t.entropy);
    s.record("sweep.equal_helicity_capped", rows, capped, t.entropy);
    s.record("sweep.unequal_helicity_nonnegative", rows, nonneg, 0.0);
    s.record(
        "sweep.extremum_at_phi_star",
        phi_star_count,
        phi_star,
        t.extremum,
    );
    s.record("sweep.regime_consistency", extremum_count, regime, 0.0);
    Ok(())
}
