//! Entanglement as a function of the boosting angle, `E(δ(φ))`.
//!
//! A sweep evaluates the Wigner angle (tangent form) and the closed-form
//! boosted entropy on a uniform `φ` grid. Local extrema of the sampled
//! curve are located by a strict three-point test and refined by a
//! golden-section search on the continuous curve.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::boosted_entropy_closed_form;
use crate::error::{Error, Result};
use crate::kinematics::{
    ultra_relativistic_interval, wigner_angle_tan_form, BoostGeometry, Speed, WignerAngle,
};
use crate::states::{HelicityClass, PreparationAngle};

pub const DEFAULT_SAMPLES: usize = 2001;
/// Neighbouring entropies closer than this count as equal.
pub const PLATEAU_TOL: f64 = 1e-14;
/// Target bracket width of the golden-section refinement.
pub const REFINE_TOL: f64 = 1e-8;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRequest {
    pub u: Speed,
    pub v: Speed,
    pub eta: PreparationAngle,
    pub class: HelicityClass,
    pub phi_min: f64,
    pub phi_max: f64,
    pub samples: usize,
}

impl SweepRequest {
    /// Full `[0, π]` sweep with the default grid.
    pub fn full_range(u: Speed, v: Speed, eta: PreparationAngle, class: HelicityClass) -> Self {
        SweepRequest {
            u,
            v,
            eta,
            class,
            phi_min: 0.0,
            phi_max: PI,
            samples: DEFAULT_SAMPLES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::InvalidRequest(format!(
                "samples = {} but at least 2 are required",
                self.samples
            )));
        }
        let in_range = |x: f64| (0.0..=PI).contains(&x);
        if !(in_range(self.phi_min) && in_range(self.phi_max) && self.phi_min < self.phi_max) {
            return Err(Error::InvalidRequest(format!(
                "phi range [{}, {}] must satisfy 0 <= phi_min < phi_max <= pi",
                self.phi_min, self.phi_max
            )));
        }
        Ok(())
    }

    /// Uniform grid with both endpoints hit exactly.
    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.phi_min, self.phi_max, self.samples)
    }

    fn geometry(&self, phi: f64) -> BoostGeometry {
        BoostGeometry::new(self.u, self.v, phi.clamp(0.0, PI))
            .expect("angle clamped into the boosting domain")
    }

    /// `(δ(φ), E(δ(φ)))`.
    pub fn evaluate(&self, phi: f64) -> (WignerAngle, f64) {
        let delta = wigner_angle_tan_form(self.geometry(phi));
        let entropy = boosted_entropy_closed_form(self.eta, delta, self.class).value();
        (delta, entropy)
    }
}

pub(crate) fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub phi: f64,
    pub delta: f64,
    pub entropy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    #[serde(flatten)]
    pub request: SweepRequest,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSeries {
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

impl SweepSeries {
    pub fn request(&self) -> &SweepRequest {
        &self.metadata.request
    }
}

pub fn sweep_entanglement(req: &SweepRequest) -> Result<SweepSeries> {
    req.validate()?;
    let rows = req
        .grid()
        .into_par_iter()
        .map(|phi| {
            let (delta, entropy) = req.evaluate(phi);
            SweepRow {
                phi,
                delta: delta.radians(),
                entropy,
            }
        })
        .collect();
    Ok(SweepSeries {
        rows,
        metadata: SweepMetadata {
            request: *req,
            version: VERSION.to_string(),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremumKind {
    LocalMin,
    LocalMax,
}

/// `Ultra` when `δ > π/2` at the extremum, `Mid` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Mid,
    Ultra,
}

impl Regime {
    pub fn of(delta: WignerAngle) -> Regime {
        if delta.radians() > FRAC_PI_2 {
            Regime::Ultra
        } else {
            Regime::Mid
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub phi: f64,
    pub entropy: f64,
    pub delta: f64,
    pub kind: ExtremumKind,
    pub regime: Regime,
    /// Detected on a run of equal samples rather than a single sample.
    pub plateau: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExtremumReport {
    pub extrema: Vec<Extremum>,
}

impl ExtremumReport {
    pub fn of_kind(&self, kind: ExtremumKind) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(move |e| e.kind == kind)
    }

    pub fn kinds(&self) -> Vec<ExtremumKind> {
        self.extrema.iter().map(|e| e.kind).collect()
    }
}

/// Golden-section search for a minimum of `f` on `[a, b]`; returns `(x, f(x))`.
pub fn golden_section_minimize(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Interior local extrema of a sweep, refined on the continuous curve.
pub fn find_local_extrema(series: &SweepSeries) -> Result<ExtremumReport> {
    let rows = &series.rows;
    if rows.len() < 3 {
        return Err(Error::InvalidRequest(format!(
            "extremum search needs at least 3 rows, got {}",
            rows.len()
        )));
    }
    let req = series.request();
    let cmp = |a: f64, b: f64| {
        if (a - b).abs() <= PLATEAU_TOL {
            std::cmp::Ordering::Equal
        } else {
            a.total_cmp(&b)
        }
    };

    let mut extrema = Vec::new();
    let mut i = 1;
    while i < rows.len() - 1 {
        // extend over a run of samples equal to rows[i]
        let mut end = i;
        while end + 1 < rows.len() - 1 && cmp(rows[end + 1].entropy, rows[i].entropy).is_eq() {
            end += 1;
        }
        let left = cmp(rows[i].entropy, rows[i - 1].entropy);
        let right = cmp(rows[end].entropy, rows[end + 1].entropy);
        let kind = match (left, right) {
            (std::cmp::Ordering::Less, std::cmp::Ordering::Less) => Some(ExtremumKind::LocalMin),
            (std::cmp::Ordering::Greater, std::cmp::Ordering::Greater) => {
                Some(ExtremumKind::LocalMax)
            }
            _ => None,
        };
        if let Some(kind) = kind {
            let (lo, hi) = (rows[i - 1].phi, rows[end + 1].phi);
            let sign = match kind {
                ExtremumKind::LocalMin => 1.0,
                ExtremumKind::LocalMax => -1.0,
            };
            let (phi, _) =
                golden_section_minimize(|x| sign * req.evaluate(x).1, lo, hi, REFINE_TOL);
            let (delta, entropy) = req.evaluate(phi);
            extrema.push(Extremum {
                phi,
                entropy,
                delta: delta.radians(),
                kind,
                regime: Regime::of(delta),
                plateau: end > i,
            });
        }
        i = end + 1;
    }
    Ok(ExtremumReport { extrema })
}

/// `(φ, δ(φ))` samples for fixed speeds.
pub fn wigner_angle_sweep(u: Speed, v: Speed, phis: &[f64]) -> Result<Vec<[f64; 2]>> {
    phis.iter()
        .map(|&phi| {
            let g = BoostGeometry::new(u, v, phi)?;
            Ok([phi, wigner_angle_tan_form(g).radians()])
        })
        .collect()
}

/// Where `δ(u, v, φ) >= π/2` on a square speed grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionDataset {
    pub phi: f64,
    pub speeds: Vec<f64>,
    /// `ultra[i][j]` is the cell `u = speeds[i]`, `v = speeds[j]`.
    pub ultra: Vec<Vec<bool>>,
}

pub fn threshold_speed_region(phi: f64, speeds: &[f64]) -> Result<RegionDataset> {
    if !(phi > 0.0 && phi < PI) {
        return Err(crate::error::domain(
            "boosting angle phi",
            phi,
            "0 < phi < pi",
        ));
    }
    let speeds: Vec<Speed> = speeds
        .iter()
        .map(|&s| Speed::new(s))
        .collect::<Result<_>>()?;
    let ultra = speeds
        .par_iter()
        .map(|&u| {
            speeds
                .iter()
                .map(|&v| {
                    let g = BoostGeometry::new(u, v, phi).expect("phi validated above");
                    crate::kinematics::ultra_relativistic_condition(g)
                })
                .collect()
        })
        .collect();
    Ok(RegionDataset {
        phi,
        speeds: speeds.iter().map(|s| s.value()).collect(),
        ultra,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FigureId {
    #[serde(rename = "1a")]
    Fig1a,
    #[serde(rename = "1b")]
    Fig1b,
    #[serde(rename = "1c")]
    Fig1c,
    #[serde(rename = "3a")]
    Fig3a,
    #[serde(rename = "3b")]
    Fig3b,
    #[serde(rename = "3c")]
    Fig3c,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig1c,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig3c,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FigureId::Fig1a => "1a",
            FigureId::Fig1b => "1b",
            FigureId::Fig1c => "1c",
            FigureId::Fig3a => "3a",
            FigureId::Fig3b => "3b",
            FigureId::Fig3c => "3c",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

/// Grid and curve-set overrides for [`emit_figure`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FigureOverrides {
    /// Points per curve (per axis for the region figure).
    pub samples: Option<usize>,
    /// Boosting angles drawn in 1a.
    pub phis: Option<Vec<f64>>,
    /// Equal speeds drawn in 1b.
    pub speeds: Option<Vec<f64>>,
}

pub const FIG1A_PHIS: [f64; 3] = [FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4];
pub const FIG1B_SPEEDS: [f64; 4] = [0.5, 0.9, 0.99, 0.999];
/// Upper end of the equal-speed axis of 1a.
pub const FIG1A_MAX_SPEED: f64 = 0.9999;
/// Speed window of the 1c region plot.
pub const FIG1C_SPEEDS: (f64, f64) = (0.9, 0.9999);
pub const FIG1C_SAMPLES: usize = 201;
pub const FIG3_ETA: f64 = 0.6;
pub const FIG3_MID_SPEED: f64 = 0.95;
pub const FIG3_ULTRA_SPEED: f64 = 0.995;

#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    /// The fixed parameter of the curve (`φ` for 1a, `u = v` for 1b).
    pub parameter: f64,
    /// `[x, δ]` pairs.
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarkedAngle {
    pub phi: f64,
    pub delta: f64,
    /// This row is a solved `δ = π/2` crossing rather than a grid point.
    pub crossing: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FigureData {
    /// 1a: `δ` against `u = v`, one curve per boosting angle.
    AngleVsSpeed(Vec<Curve>),
    /// 1b: `δ` against `φ`, one curve per equal speed.
    AngleVsBoostingAngle(Vec<Curve>),
    /// 1c: ultra-relativistic region.
    Region(RegionDataset),
    /// 3a, 3c: entanglement sweeps.
    Entanglement(SweepSeries),
    /// 3b: `δ(φ)` with the `δ = π/2` crossings inserted.
    AngleWithCrossings {
        speed: f64,
        rows: Vec<MarkedAngle>,
        crossings: Option<(f64, f64)>,
    },
}

fn fig3_request(speed: f64, samples: usize) -> Result<SweepRequest> {
    let s = Speed::new(speed)?;
    Ok(SweepRequest {
        samples,
        ..SweepRequest::full_range(
            s,
            s,
            PreparationAngle::new(FIG3_ETA)?,
            HelicityClass::EqualPlus,
        )
    })
}

pub fn emit_figure(id: FigureId, overrides: &FigureOverrides) -> Result<FigureData> {
    let samples = overrides.samples.unwrap_or(match id {
        FigureId::Fig1c => FIG1C_SAMPLES,
        _ => DEFAULT_SAMPLES,
    });
    if samples < 2 {
        return Err(Error::InvalidRequest(format!(
            "samples = {samples} but at least 2 are required"
        )));
    }
    match id {
        FigureId::Fig1a => {
            let phis = overrides
                .phis
                .clone()
                .unwrap_or_else(|| FIG1A_PHIS.to_vec());
            let speeds = uniform_grid(0.0, FIG1A_MAX_SPEED, samples);
            let curves = phis
                .iter()
                .map(|&phi| {
                    let points = speeds
                        .iter()
                        .map(|&u| {
                            let g = BoostGeometry::from_values(u, u, phi)?;
                            Ok([u, wigner_angle_tan_form(g).radians()])
                        })
                        .collect::<Result<_>>()?;
                    Ok(Curve {
                        parameter: phi,
                        points,
                    })
                })
                .collect::<Result<_>>()?;
            Ok(FigureData::AngleVsSpeed(curves))
        }
        FigureId::Fig1b => {
            let speeds = overrides
                .speeds
                .clone()
                .unwrap_or_else(|| FIG1B_SPEEDS.to_vec());
            let phis = uniform_grid(0.0, PI, samples);
            let curves = speeds
                .iter()
                .map(|&u| {
                    let s = Speed::new(u)?;
                    Ok(Curve {
                        parameter: u,
                        points: wigner_angle_sweep(s, s, &phis)?,
                    })
                })
                .collect::<Result<_>>()?;
            Ok(FigureData::AngleVsBoostingAngle(curves))
        }
        FigureId::Fig1c => {
            let speeds = uniform_grid(FIG1C_SPEEDS.0, FIG1C_SPEEDS.1, samples);
            Ok(FigureData::Region(threshold_speed_region(
                3.0 * FRAC_PI_4,
                &speeds,
            )?))
        }
        FigureId::Fig3a => Ok(FigureData::Entanglement(sweep_entanglement(
            &fig3_request(FIG3_MID_SPEED, samples)?,
        )?)),
        FigureId::Fig3c => Ok(FigureData::Entanglement(sweep_entanglement(
            &fig3_request(FIG3_ULTRA_SPEED, samples)?,
        )?)),
        FigureId::Fig3b => {
            let s = Speed::new(FIG3_ULTRA_SPEED)?;
            let crossings = ultra_relativistic_interval(s, s);
            let mut rows: Vec<MarkedAngle> =
                wigner_angle_sweep(s, s, &uniform_grid(0.0, PI, samples))?
                    .into_iter()
                    .map(|[phi, delta]| MarkedAngle {
                        phi,
                        delta,
                        crossing: false,
                    })
                    .collect();
            if let Some((lo, hi)) = crossings {
                for phi in [lo, hi] {
                    let delta = wigner_angle_tan_form(BoostGeometry::new(s, s, phi)?).radians();
                    rows.push(MarkedAngle {
                        phi,
                        delta,
                        crossing: true,
                    });
                }
                rows.sort_by(|a, b| a.phi.total_cmp(&b.phi));
            }
            Ok(FigureData::AngleWithCrossings {
                speed: FIG3_ULTRA_SPEED,
                rows,
                crossings,
            })
        }
    }
}
