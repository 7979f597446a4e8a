//! Sample grids over ℍ*.
//!
//! Grids are log-radial × angular × t boxes. The frame fields degenerate as
//! z → 0, so grids keep |z| ≥ 0.05 unless explicitly overridden.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::StarPoint;

/// A log-radial × angular × vertical sampling box.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub r_count: usize,
    pub angles: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
    /// Permit radii below the 0.05 guard.
    #[serde(default)]
    pub allow_small_z: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::standard()
    }
}

impl GridSpec {
    /// The fixed grid used by the verification suites:
    /// |z| ∈ {0.25, 0.5, 1, 2, 4}, 16 angles, t ∈ {−2, −1, 0, 1, 2}.
    pub fn standard() -> Self {
        GridSpec {
            r_min: 0.25,
            r_max: 4.0,
            r_count: 5,
            angles: 16,
            t_min: -2.0,
            t_max: 2.0,
            t_count: 5,
            allow_small_z: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r_min <= 0.0 || self.r_max < self.r_min {
            return Err(Error::DomainViolation(
                "grid radii must satisfy 0 < r_min ≤ r_max".into(),
            ));
        }
        if self.r_min < 0.05 && !self.allow_small_z {
            return Err(Error::DomainViolation(
                "grid reaches |z| < 0.05; set allow_small_z to override".into(),
            ));
        }
        if self.r_count == 0 || self.angles == 0 || self.t_count == 0 {
            return Err(Error::DomainViolation(
                "grid counts must be positive".into(),
            ));
        }
        if self.t_max < self.t_min {
            return Err(Error::DomainViolation("grid requires t_min ≤ t_max".into()));
        }
        Ok(())
    }

    /// The grid points, in deterministic (r, angle, t) order.
    pub fn points(&self) -> Result<Vec<StarPoint>> {
        self.validate()?;
        let mut out = Vec::with_capacity(self.r_count * self.angles * self.t_count);
        for i in 0..self.r_count {
            let r = if self.r_count == 1 {
                self.r_min
            } else {
                let f = i as f64 / (self.r_count - 1) as f64;
                self.r_min * (self.r_max / self.r_min).powf(f)
            };
            for j in 0..self.angles {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / self.angles as f64;
                for k in 0..self.t_count {
                    let t = if self.t_count == 1 {
                        self.t_min
                    } else {
                        self.t_min
                            + (self.t_max - self.t_min) * k as f64 / (self.t_count - 1) as f64
                    };
                    out.push(StarPoint::new(Complex64::from_polar(r, phi), t)?);
                }
            }
        }
        Ok(out)
    }
}

/// The standard verification grid as a point list.
pub fn standard_grid() -> Vec<StarPoint> {
    GridSpec::standard()
        .points()
        .expect("standard grid is valid")
}
