//! Channel containers, synthetic generators, structure analysis and the
//! binary trace format.

pub mod analysis;
pub mod synthetic;
pub mod trace;

pub use analysis::{coupling_map, eigenvalue_concentration};
pub use synthetic::{
    draw_trial, geometric_self_interference, rayleigh_channel, SiChannelParams, TrialChannels,
};
pub use trace::{
    decode_trace, encode_trace, load_trace, read_sidecar, save_trace, sidecar_path, trace_from_json, trace_to_json,
    write_sidecar, TraceError,
};

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// One realization of every link in the cell.
///
/// * `h_self`: `M_Rx × M_Tx` self-interference channel
/// * `h_up`: `M_Rx × K_Up` uplink channel
/// * `h_down`: `K_Down × M_Tx` downlink channel
/// * `h_usr`: `K_Down × K_Up` uplink-user to downlink-user interference; `None` means zero
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSet {
    pub h_self: ComplexMatrix,
    pub h_up: ComplexMatrix,
    pub h_down: ComplexMatrix,
    pub h_usr: Option<ComplexMatrix>,
    pub subcarrier_index: usize,
}

impl ChannelSet {
    pub fn new(
        h_self: ComplexMatrix,
        h_up: ComplexMatrix,
        h_down: ComplexMatrix,
        h_usr: Option<ComplexMatrix>,
    ) -> Result<Self> {
        let set = Self {
            h_self,
            h_up,
            h_down,
            h_usr,
            subcarrier_index: 0,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn m_rx(&self) -> usize {
        self.h_self.rows()
    }

    pub fn m_tx(&self) -> usize {
        self.h_self.cols()
    }

    pub fn k_up(&self) -> usize {
        self.h_up.cols()
    }

    pub fn k_down(&self) -> usize {
        self.h_down.rows()
    }

    /// `h_usr`, materialized as zeros when absent.
    pub fn h_usr_or_zero(&self) -> ComplexMatrix {
        self.h_usr
            .clone()
            .unwrap_or_else(|| ComplexMatrix::zeros(self.k_down(), self.k_up()))
    }

    pub fn validate(&self) -> Result<()> {
        let (m_rx, m_tx) = self.h_self.shape();
        if self.h_up.rows() != m_rx {
            return Err(Error::Dimension(format!(
                "h_up has {} rows but h_self has {m_rx} receive antennas",
                self.h_up.rows()
            )));
        }
        if self.h_down.cols() != m_tx {
            return Err(Error::Dimension(format!(
                "h_down has {} columns but h_self has {m_tx} transmit antennas",
                self.h_down.cols()
            )));
        }
        if let Some(u) = &self.h_usr {
            if u.shape() != (self.k_down(), self.k_up()) {
                return Err(Error::Dimension(format!(
                    "h_usr is {}x{}, expected {}x{}",
                    u.rows(),
                    u.cols(),
                    self.k_down(),
                    self.k_up()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_catches_mismatched_links() {
        let ok = ChannelSet::new(
            ComplexMatrix::zeros(3, 2),
            ComplexMatrix::zeros(3, 1),
            ComplexMatrix::zeros(4, 2),
            None,
        )
        .unwrap();
        assert_eq!((ok.m_rx(), ok.m_tx(), ok.k_up(), ok.k_down()), (3, 2, 1, 4));
        assert_eq!(ok.h_usr_or_zero().shape(), (4, 1));

        assert!(ChannelSet::new(
            ComplexMatrix::zeros(3, 2),
            ComplexMatrix::zeros(2, 1),
            ComplexMatrix::zeros(4, 2),
            None
        )
        .is_err());
        assert!(ChannelSet::new(
            ComplexMatrix::zeros(3, 2),
            ComplexMatrix::zeros(3, 1),
            ComplexMatrix::zeros(4, 2),
            Some(ComplexMatrix::zeros(1, 4))
        )
        .is_err());
    }
}
