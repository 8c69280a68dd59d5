//! Planar antenna array and transmit/receive partition heuristics.
//!
//! Elements sit on a rectangular grid indexed row-major: element
//! `row * n_cols + col`. Row 0 is the northern edge, column 0 the western
//! edge.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::seeded_rng;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default element pitch: 76 mm, about 0.6 wavelengths at 2.4 GHz.
pub const DEFAULT_SPACING_M: f64 = 0.076;
pub const DEFAULT_CARRIER_HZ: f64 = 2.4e9;
pub const DEFAULT_ROWS: usize = 8;
pub const DEFAULT_COLS: usize = 9;

#[derive(Clone, Debug, PartialEq)]
pub struct ArrayGeometry {
    n_rows: usize,
    n_cols: usize,
    spacing: f64,
    positions: Vec<[f64; 3]>,
}

impl ArrayGeometry {
    pub fn rectangular(n_rows: usize, n_cols: usize, spacing: f64) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::Argument(format!("array must be non-empty, got {n_rows}x{n_cols}")));
        }
        if n_rows * n_cols < 2 {
            return Err(Error::Argument("array needs at least two elements".into()));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::Argument(format!("spacing must be positive, got {spacing}")));
        }
        let positions = (0..n_rows)
            .flat_map(|r| (0..n_cols).map(move |c| [c as f64 * spacing, -(r as f64) * spacing, 0.0]))
            .collect();
        Ok(Self {
            n_rows,
            n_cols,
            spacing,
            positions,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn n_elements(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.n_rows && col < self.n_cols);
        row * self.n_cols + col
    }

    /// `(row, col)` of an element index.
    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index / self.n_cols, index % self.n_cols)
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let (pa, pb) = (self.positions[a], self.positions[b]);
        let d: f64 = pa.iter().zip(&pb).map(|(x, y)| (x - y) * (x - y)).sum();
        d.sqrt()
    }
}

impl Default for ArrayGeometry {
    fn default() -> Self {
        Self::rectangular(DEFAULT_ROWS, DEFAULT_COLS, DEFAULT_SPACING_M).expect("default geometry is valid")
    }
}

/// Disjoint transmit and receive element sets, each sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    tx: Vec<usize>,
    rx: Vec<usize>,
    n_elements: usize,
}

impl Partition {
    pub fn new(mut tx: Vec<usize>, mut rx: Vec<usize>, n_elements: usize) -> Result<Self> {
        tx.sort_unstable();
        rx.sort_unstable();
        if tx.is_empty() || rx.is_empty() {
            return Err(Error::Argument("partition needs at least one tx and one rx element".into()));
        }
        if tx.windows(2).any(|w| w[0] == w[1]) || rx.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Argument("partition contains duplicate elements".into()));
        }
        if tx.iter().chain(&rx).any(|&i| i >= n_elements) {
            return Err(Error::Argument(format!("partition index out of range for {n_elements} elements")));
        }
        if tx.iter().any(|i| rx.binary_search(i).is_ok()) {
            return Err(Error::Argument("tx and rx sets overlap".into()));
        }
        Ok(Self { tx, rx, n_elements })
    }

    pub fn tx(&self) -> &[usize] {
        &self.tx
    }

    pub fn rx(&self) -> &[usize] {
        &self.rx
    }

    pub fn m_tx(&self) -> usize {
        self.tx.len()
    }

    pub fn m_rx(&self) -> usize {
        self.rx.len()
    }

    /// Size of the array the partition was drawn from.
    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn is_tx(&self, index: usize) -> bool {
        self.tx.binary_search(&index).is_ok()
    }

    fn from_fill_order(order: &[usize], m_tx: usize) -> Result<Self> {
        Self::new(order[..m_tx].to_vec(), order[m_tx..].to_vec(), order.len())
    }
}

fn check_m_tx(geom: &ArrayGeometry, m_tx: usize) -> Result<()> {
    let m = geom.n_elements();
    if m_tx == 0 || m_tx >= m {
        return Err(Error::Argument(format!("m_tx must lie in [1, {}), got {m_tx}", m)));
    }
    Ok(())
}

/// Transmit fills columns west to east, each column north to south.
pub fn east_west(geom: &ArrayGeometry, m_tx: usize) -> Result<Partition> {
    check_m_tx(geom, m_tx)?;
    let order: Vec<usize> = (0..geom.n_cols())
        .flat_map(|c| (0..geom.n_rows()).map(move |r| (r, c)))
        .map(|(r, c)| geom.index(r, c))
        .collect();
    Partition::from_fill_order(&order, m_tx)
}

/// Transmit fills rows north to south, each row west to east.
pub fn north_south(geom: &ArrayGeometry, m_tx: usize) -> Result<Partition> {
    check_m_tx(geom, m_tx)?;
    let order: Vec<usize> = (0..geom.n_elements()).collect();
    Partition::from_fill_order(&order, m_tx)
}

/// Transmit fills anti-diagonal bands from the northwest corner; within a
/// band, lower column first.
pub fn nw_se(geom: &ArrayGeometry, m_tx: usize) -> Result<Partition> {
    check_m_tx(geom, m_tx)?;
    let mut order: Vec<usize> = (0..geom.n_elements()).collect();
    order.sort_by_key(|&i| {
        let (r, c) = geom.coords(i);
        (r + c, c)
    });
    Partition::from_fill_order(&order, m_tx)
}

/// Checkerboard: even `row + col` parity transmits. `m_tx` must be the
/// floor or ceiling of half the array; the parity set is trimmed or topped
/// up in row-major order to hit it exactly.
pub fn interleaved(geom: &ArrayGeometry, m_tx: usize) -> Result<Partition> {
    let m = geom.n_elements();
    if m_tx != m / 2 && m_tx != m.div_ceil(2) {
        return Err(Error::Argument(format!(
            "interleaved partition of {m} elements needs m_tx = {} or {}, got {m_tx}",
            m / 2,
            m.div_ceil(2)
        )));
    }
    let parity = |i: usize| {
        let (r, c) = geom.coords(i);
        (r + c) % 2 == 0
    };
    let mut tx: Vec<usize> = (0..m).filter(|&i| parity(i)).collect();
    if tx.len() > m_tx {
        tx.truncate(m_tx);
    } else {
        let extra: Vec<usize> = (0..m).filter(|&i| !parity(i)).take(m_tx - tx.len()).collect();
        tx.extend(extra);
    }
    tx.sort_unstable();
    let rx = (0..m).filter(|i| tx.binary_search(i).is_err()).collect();
    Partition::new(tx, rx, m)
}

/// Uniformly random `m_tx`-subset via a seeded Fisher-Yates shuffle.
pub fn random_partition(geom: &ArrayGeometry, m_tx: usize, seed: u64) -> Result<Partition> {
    check_m_tx(geom, m_tx)?;
    let mut order: Vec<usize> = (0..geom.n_elements()).collect();
    order.shuffle(&mut seeded_rng(seed));
    Partition::from_fill_order(&order, m_tx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionKind {
    EastWest,
    NorthSouth,
    NwSe,
    Interleaved,
    Random,
}

impl PartitionKind {
    pub const ALL: [PartitionKind; 5] = [
        PartitionKind::EastWest,
        PartitionKind::NorthSouth,
        PartitionKind::NwSe,
        PartitionKind::Interleaved,
        PartitionKind::Random,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PartitionKind::EastWest => "east-west",
            PartitionKind::NorthSouth => "north-south",
            PartitionKind::NwSe => "nw-se",
            PartitionKind::Interleaved => "interleaved",
            PartitionKind::Random => "random",
        }
    }

    /// `seed` is only consulted by [`PartitionKind::Random`].
    pub fn build(self, geom: &ArrayGeometry, m_tx: usize, seed: u64) -> Result<Partition> {
        match self {
            PartitionKind::EastWest => east_west(geom, m_tx),
            PartitionKind::NorthSouth => north_south(geom, m_tx),
            PartitionKind::NwSe => nw_se(geom, m_tx),
            PartitionKind::Interleaved => interleaved(geom, m_tx),
            PartitionKind::Random => random_partition(geom, m_tx, seed),
        }
    }
}

impl fmt::Display for PartitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PartitionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PartitionKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::Config(format!("unknown partition kind {s:?}")))
    }
}
