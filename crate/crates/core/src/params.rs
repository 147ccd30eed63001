//! Physical parameters of the driven dimer and the dipole-dipole geometry.
//!
//! All rates are expressed in a common unit; the library never assumes a
//! particular value of `gamma`, but the CLI normalizes every rate by the local
//! decay rate so that `gamma == 1` there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the coupling rates follow from the inter-emitter distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryMode {
    /// Full retarded dipole-dipole expressions.
    Exact,
    /// Short-distance limit, `J ~ 1/(k r12)^3`, `gamma12 = sqrt(gamma1 gamma2)`.
    #[default]
    NearField,
}

/// Coherent (`J`) and collective dissipative (`gamma12`) coupling of two equal
/// dipoles at dimensionless distance `kr12`.
///
/// `mu_dot_r` is the cosine between the dipole orientation and the separation
/// vector; zero means perpendicular dipoles.
pub fn coupling_from_distance(
    kr12: f64,
    gamma1: f64,
    gamma2: f64,
    mu_dot_r: f64,
    mode: GeometryMode,
) -> Result<(f64, f64)> {
    if !(kr12 > 0.0) || !kr12.is_finite() {
        return Err(Error::DistanceDomain { kr12 });
    }
    if !(gamma1 > 0.0 && gamma2 > 0.0) {
        return Err(Error::InvalidParams(format!(
            "local decay rates must be positive (got {gamma1}, {gamma2})"
        )));
    }
    if !(mu_dot_r.abs() <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "mu_dot_r = {mu_dot_r} is not a cosine"
        )));
    }
    let g = (gamma1 * gamma2).sqrt();
    let para = 1.0 - mu_dot_r * mu_dot_r;
    let perp = 1.0 - 3.0 * mu_dot_r * mu_dot_r;
    let x = kr12;
    match mode {
        GeometryMode::NearField => Ok((0.75 * g * perp / (x * x * x), g)),
        GeometryMode::Exact => {
            let (s, co) = x.sin_cos();
            let j = 0.75 * g * (-para * co / x + perp * (s / (x * x) + co / (x * x * x)));
            let g12 = 1.5 * g * (para * s / x + perp * (co / (x * x) - s / (x * x * x)));
            Ok((j, g12))
        }
    }
}

/// `beta = atan(delta / J)`, the single-excitation mixing angle.
pub fn mixing_angle(delta_emit: f64, j_coupling: f64) -> Result<f64> {
    if delta_emit == 0.0 && j_coupling == 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    Ok(delta_emit.atan2(j_coupling))
}

/// Inverse of [`mixing_angle`] together with [`rabi_splitting`]: `(J, delta)`.
pub fn params_from_beta(big_r: f64, beta: f64) -> Result<(f64, f64)> {
    if !(big_r > 0.0) || !big_r.is_finite() {
        return Err(Error::InvalidParams(format!("R = {big_r} must be positive")));
    }
    if !(beta.abs() <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidParams(format!(
            "beta = {beta} outside [-pi/2, pi/2]"
        )));
    }
    let (s, c) = beta.sin_cos();
    Ok((big_r * c, big_r * s))
}

/// `R = sqrt(J^2 + delta^2)`.
pub fn rabi_splitting(j_coupling: f64, delta_emit: f64) -> f64 {
    j_coupling.hypot(delta_emit)
}

/// Distance information kept alongside the rates so that the coupling can be
/// re-derived at a perturbed distance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub kr12: f64,
    pub mu_dot_r: f64,
    pub mode: GeometryMode,
    /// When false, `gamma12` is a free parameter and is kept fixed when the
    /// distance changes.
    pub collective_from_geometry: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Laser detuning from the mean emitter frequency.
    pub delta_laser: f64,
    /// Half the splitting between the bare emitter frequencies.
    pub delta_emit: f64,
    pub omega_drive: f64,
    pub j_coupling: f64,
    pub gamma: f64,
    pub gamma12: f64,
    /// Computed: `sqrt(J^2 + delta^2)`.
    pub big_r: f64,
    /// Computed: `atan2(delta, J)`.
    pub beta: f64,
    pub geometry: Option<Geometry>,
    /// Detector (sensor) linewidth used by spectra.
    pub det_linewidth: f64,
}

impl SystemParams {
    fn base(j_coupling: f64, delta_emit: f64) -> Result<Self> {
        let beta = mixing_angle(delta_emit, j_coupling)?;
        let p = Self {
            delta_laser: 0.0,
            delta_emit,
            omega_drive: 0.0,
            j_coupling,
            gamma: 1.0,
            gamma12: 0.0,
            big_r: rabi_splitting(j_coupling, delta_emit),
            beta,
            geometry: None,
            det_linewidth: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Undriven dimer with the given coupling and detuning, `gamma = 1`,
    /// no collective decay.
    pub fn from_coupling(j_coupling: f64, delta_emit: f64) -> Result<Self> {
        Self::base(j_coupling, delta_emit)
    }

    pub fn from_mixing(big_r: f64, beta: f64) -> Result<Self> {
        let (j, d) = params_from_beta(big_r, beta)?;
        let mut p = Self::base(j, d)?;
        // keep the requested angle and splitting bit-exact
        p.big_r = big_r;
        p.beta = beta;
        Ok(p)
    }

    /// Coupling from the inter-emitter distance with `gamma1 = gamma2 = 1`;
    /// `gamma12` follows the geometry until overridden with
    /// [`SystemParams::with_gamma12`].
    pub fn from_distance(kr12: f64, delta_emit: f64, mode: GeometryMode) -> Result<Self> {
        Self::from_distance_aligned(kr12, delta_emit, mode, 0.0)
    }

    pub fn from_distance_aligned(
        kr12: f64,
        delta_emit: f64,
        mode: GeometryMode,
        mu_dot_r: f64,
    ) -> Result<Self> {
        let (j, g12) = coupling_from_distance(kr12, 1.0, 1.0, mu_dot_r, mode)?;
        let mut p = Self::base(j, delta_emit)?;
        p.gamma12 = g12;
        p.geometry = Some(Geometry {
            kr12,
            mu_dot_r,
            mode,
            collective_from_geometry: true,
        });
        p.validate()?;
        Ok(p)
    }

    pub fn kr12(&self) -> Option<f64> {
        self.geometry.map(|g| g.kr12)
    }

    pub fn mu_dot_r(&self) -> f64 {
        self.geometry.map_or(0.0, |g| g.mu_dot_r)
    }

    #[must_use]
    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega_drive = omega;
        self
    }

    #[must_use]
    pub fn with_delta_laser(mut self, delta: f64) -> Self {
        self.delta_laser = delta;
        self
    }

    #[must_use]
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    /// Fixes the collective decay rate; it no longer follows the distance.
    #[must_use]
    pub fn with_gamma12(mut self, gamma12: f64) -> Self {
        self.gamma12 = gamma12;
        if let Some(g) = self.geometry.as_mut() {
            g.collective_from_geometry = false;
        }
        self
    }

    #[must_use]
    pub fn with_det_linewidth(mut self, linewidth: f64) -> Self {
        self.det_linewidth = linewidth;
        self
    }

    /// Replaces `(J, delta)` and the derived `(R, beta)`; drops any geometry.
    pub fn with_coupling(mut self, j_coupling: f64, delta_emit: f64) -> Result<Self> {
        self.beta = mixing_angle(delta_emit, j_coupling)?;
        self.j_coupling = j_coupling;
        self.delta_emit = delta_emit;
        self.big_r = rabi_splitting(j_coupling, delta_emit);
        self.geometry = None;
        self.validate()?;
        Ok(self)
    }

    /// Same emitters at another distance: `J` (and `gamma12` when it follows
    /// the geometry) are recomputed, `delta`, drive and detuning are kept.
    pub fn with_distance(mut self, kr12: f64) -> Result<Self> {
        let geom = self.geometry.ok_or_else(|| {
            Error::InvalidParams("parameters carry no distance information".into())
        })?;
        let (j, g12) =
            coupling_from_distance(kr12, self.gamma, self.gamma, geom.mu_dot_r, geom.mode)?;
        self.j_coupling = j;
        self.big_r = rabi_splitting(j, self.delta_emit);
        self.beta = mixing_angle(self.delta_emit, j)?;
        if geom.collective_from_geometry {
            self.gamma12 = g12;
        }
        self.geometry = Some(Geometry { kr12, ..geom });
        self.validate()?;
        Ok(self)
    }

    /// Same emitters with the sign of the detuning flipped, i.e. the emitter
    /// labels exchanged.
    #[must_use]
    pub fn exchanged(mut self) -> Self {
        self.delta_emit = -self.delta_emit;
        self.beta = -self.beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("delta_laser", self.delta_laser),
            ("delta_emit", self.delta_emit),
            ("omega_drive", self.omega_drive),
            ("j_coupling", self.j_coupling),
            ("gamma", self.gamma),
            ("gamma12", self.gamma12),
            ("det_linewidth", self.det_linewidth),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("{name} = {v} is not finite")));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::InvalidParams(format!(
                "gamma = {} must be positive",
                self.gamma
            )));
        }
        if self.gamma12.abs() > self.gamma * (1.0 + 1e-12) {
            return Err(Error::InvalidParams(format!(
                "|gamma12| = {} exceeds gamma = {}",
                self.gamma12.abs(),
                self.gamma
            )));
        }
        if self.j_coupling < 0.0 {
            return Err(Error::InvalidParams(format!(
                "J = {} < 0 (dipole alignment beyond the magic angle) is not supported",
                self.j_coupling
            )));
        }
        if self.det_linewidth < 0.0 {
            return Err(Error::InvalidParams("det_linewidth must be >= 0".into()));
        }
        if self.delta_emit == 0.0 && self.j_coupling == 0.0 {
            return Err(Error::DegenerateGeometry);
        }
        let r = rabi_splitting(self.j_coupling, self.delta_emit);
        if (self.big_r - r).abs() > 1e-12 * r {
            return Err(Error::InvalidParams(format!(
                "R = {} inconsistent with sqrt(J^2 + delta^2) = {r}",
                self.big_r
            )));
        }
        let b = self.delta_emit.atan2(self.j_coupling);
        if (self.beta - b).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!(
                "beta = {} inconsistent with atan2(delta, J) = {b}",
                self.beta
            )));
        }
        Ok(())
    }
}
