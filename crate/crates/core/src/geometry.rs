//! Network layout: a square area with uniformly dropped APs and UEs.

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use rand::Rng;

use crate::{Error, RMatrix};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Links shorter than this are clamped; equals the path-loss reference distance.
pub const MIN_DISTANCE: f64 = 1.0;

/// Deployment dimensions for one campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct SimGeometry {
    /// Side of the square deployment area, meters.
    pub area_side: f64,
    /// Number of access points `L`.
    pub num_aps: usize,
    /// Antennas per access point `N`.
    pub antennas_per_ap: usize,
    /// Number of single-antenna users `K`.
    pub num_ues: usize,
    /// Carrier wavelength, meters.
    pub wavelength: f64,
    /// Inter-element spacing of each AP's linear array, in wavelengths.
    pub antenna_spacing: f64,
}

impl SimGeometry {
    pub fn new(
        area_side: f64,
        num_aps: usize,
        antennas_per_ap: usize,
        num_ues: usize,
        carrier_hz: f64,
    ) -> Result<Self, Error> {
        if !(carrier_hz > 0.0) {
            return Err(Error::InvalidGeometry("carrier frequency must be positive"));
        }
        let geometry = SimGeometry {
            area_side,
            num_aps,
            antennas_per_ap,
            num_ues,
            wavelength: SPEED_OF_LIGHT / carrier_hz,
            antenna_spacing: 0.5,
        };
        geometry.validate()?;
        Ok(geometry)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.area_side > 0.0) || !self.area_side.is_finite() {
            return Err(Error::InvalidGeometry("area side must be positive"));
        }
        if self.num_aps == 0 || self.antennas_per_ap == 0 || self.num_ues == 0 {
            return Err(Error::InvalidGeometry("AP, antenna and UE counts must be at least 1"));
        }
        if !(self.wavelength > 0.0) {
            return Err(Error::InvalidGeometry("wavelength must be positive"));
        }
        if !(self.antenna_spacing > 0.0) {
            return Err(Error::InvalidGeometry("antenna spacing must be positive"));
        }
        Ok(())
    }

    /// Total number of network-side antennas `M = L·N`.
    pub fn total_antennas(&self) -> usize {
        self.num_aps * self.antennas_per_ap
    }

    /// AP index owning network antenna `m`.
    pub fn ap_of_antenna(&self, m: usize) -> usize {
        m / self.antennas_per_ap
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// AP and UE positions for one Monte Carlo drop.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkDrop {
    pub ap_positions: Vec<Point>,
    pub ue_positions: Vec<Point>,
    /// `L×K` link distances, clamped below at [`MIN_DISTANCE`].
    pub distances: RMatrix,
}

impl NetworkDrop {
    /// Builds a drop from explicit positions.
    pub fn from_positions(ap_positions: Vec<Point>, ue_positions: Vec<Point>) -> Self {
        let distances = RMatrix::from_fn(ap_positions.len(), ue_positions.len(), |l, k| {
            ap_positions[l].distance(&ue_positions[k]).max(MIN_DISTANCE)
        });
        NetworkDrop {
            ap_positions,
            ue_positions,
            distances,
        }
    }

    pub fn num_aps(&self) -> usize {
        self.ap_positions.len()
    }

    pub fn num_ues(&self) -> usize {
        self.ue_positions.len()
    }

    /// Azimuth of UE `k` seen from AP `l`, radians from the x-axis.
    pub fn azimuth(&self, l: usize, k: usize) -> f64 {
        let ap = self.ap_positions[l];
        let ue = self.ue_positions[k];
        (ue.y - ap.y).atan2(ue.x - ap.x)
    }
}

/// Drops `L` APs and `K` UEs i.i.d. uniformly on the square (a binomial point process).
pub fn drop_network<R: Rng + ?Sized>(geometry: &SimGeometry, rng: &mut R) -> NetworkDrop {
    let side = geometry.area_side;
    let point = |rng: &mut R| Point {
        x: rng.random::<f64>() * side,
        y: rng.random::<f64>() * side,
    };
    let aps = (0..geometry.num_aps).map(|_| point(rng)).collect();
    let ues = (0..geometry.num_ues).map(|_| point(rng)).collect();
    NetworkDrop::from_positions(aps, ues)
}
