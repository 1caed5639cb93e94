//! First-order wiring cost of delivering generated words to the compute
//! lanes: central generator vs. engines placed next to the lanes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TERA: f64 = 1e12;
pub const FEMTO: f64 = 1e-15;

/// Accelerator-scale inputs, in SI units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    /// Parallel compute lanes fed with generated words.
    pub lanes: f64,
    pub word_bits: f64,
    pub freq_hz: f64,
    /// Fraction of lane-cycles that actually consume a generated word.
    pub gamma: f64,
    pub die_side_mm: f64,
    /// Energy per bit per millimetre of wire, J/(bit*mm).
    pub wire_energy: f64,
    /// Wire length from a local engine to its lanes; zero by default.
    #[serde(default)]
    pub local_hop_mm: f64,
}

impl CostParams {
    /// R = 16384, w = 32, f = 1 GHz, gamma = 1/8, d = 15 mm, E = 40 fJ/bit/mm.
    pub fn reference() -> Self {
        CostParams {
            lanes: 16384.0,
            word_bits: 32.0,
            freq_hz: 1e9,
            gamma: 0.125,
            die_side_mm: 15.0,
            wire_energy: 40.0 * FEMTO,
            local_hop_mm: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lanes", self.lanes),
            ("word_bits", self.word_bits),
            ("freq_hz", self.freq_hz),
            ("gamma", self.gamma),
            ("die_side_mm", self.die_side_mm),
        ];
        for (field, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::validation(field, format!("{v} must be positive")));
            }
        }
        if self.gamma > 1.0 {
            return Err(Error::validation("gamma", format!("{} exceeds 1", self.gamma)));
        }
        if !(self.wire_energy >= 0.0 && self.wire_energy.is_finite()) {
            return Err(Error::validation("wire_energy", "must be non-negative"));
        }
        if !(self.local_hop_mm >= 0.0 && self.local_hop_mm <= self.die_side_mm / 2.0) {
            return Err(Error::validation("local_hop_mm", "must be in [0, d/2]"));
        }
        Ok(())
    }
}

/// Bits per second the lanes can consume: `gamma * R * w * f`.
pub fn required_throughput(p: &CostParams) -> Result<f64> {
    p.validate()?;
    Ok(p.gamma * p.lanes * p.word_bits * p.freq_hz)
}

/// Watts spent moving every word an average Manhattan distance of `d/2`.
pub fn central_wiring_power(p: &CostParams) -> Result<f64> {
    Ok(required_throughput(p)? * (p.die_side_mm / 2.0) * p.wire_energy)
}

/// Bits per second per millimetre across one axis, with the traffic split
/// over two axes of width `d`.
pub fn per_axis_bandwidth_density(p: &CostParams) -> Result<f64> {
    Ok(required_throughput(p)? / (2.0 * p.die_side_mm))
}

/// Watts for engines that sit `local_hop_mm` from their lanes.
pub fn distributed_wiring_power(p: &CostParams) -> Result<f64> {
    Ok(required_throughput(p)? * p.local_hop_mm * p.wire_energy)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub throughput_bps: f64,
    pub central_power_w: f64,
    pub per_axis_density_bps_per_mm: f64,
    pub distributed_power_w: f64,
    pub saving_w: f64,
}

pub fn cost_report(p: &CostParams) -> Result<CostReport> {
    let central = central_wiring_power(p)?;
    let distributed = distributed_wiring_power(p)?;
    Ok(CostReport {
        throughput_bps: required_throughput(p)?,
        central_power_w: central,
        per_axis_density_bps_per_mm: per_axis_bandwidth_density(p)?,
        distributed_power_w: distributed,
        saving_w: central - distributed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_figures() {
        let p = CostParams::reference();
        let tp = required_throughput(&p).unwrap();
        assert!((tp - 65.536 * TERA).abs() < 1.0);
        let watts = central_wiring_power(&p).unwrap();
        assert!((watts - 19.6608).abs() < 1e-9, "{watts}");
        let density = per_axis_bandwidth_density(&p).unwrap() / TERA;
        assert!((density - 2.18453).abs() < 1e-5, "{density}");
        assert_eq!(distributed_wiring_power(&p).unwrap(), 0.0);
    }

    #[test]
    fn full_occupancy_and_zero_energy() {
        let mut p = CostParams::reference();
        p.gamma = 1.0;
        assert_eq!(required_throughput(&p).unwrap(), 16384.0 * 32.0 * 1e9);
        p.wire_energy = 0.0;
        assert_eq!(central_wiring_power(&p).unwrap(), 0.0);
    }

    #[test]
    fn local_hop() {
        let mut p = CostParams::reference();
        p.local_hop_mm = 0.1;
        let tp = required_throughput(&p).unwrap();
        let local = distributed_wiring_power(&p).unwrap();
        assert!((local - tp * 0.1 * 40e-15).abs() < 1e-12);
        assert!(local <= central_wiring_power(&p).unwrap());
    }

    #[test]
    fn invalid_params() {
        for f in [
            |p: &mut CostParams| p.lanes = 0.0,
            |p: &mut CostParams| p.gamma = 1.5,
            |p: &mut CostParams| p.gamma = 0.0,
            |p: &mut CostParams| p.die_side_mm = -1.0,
            |p: &mut CostParams| p.wire_energy = f64::NAN,
            |p: &mut CostParams| p.local_hop_mm = 10.0,
        ] {
            let mut p = CostParams::reference();
            f(&mut p);
            assert!(required_throughput(&p).is_err());
        }
    }
}
