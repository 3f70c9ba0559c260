use crate::error::{Error, Result};

/// Who hears whom. Node 0 is the access point, node `i + 1` is station `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HearingMatrix {
    nodes: usize,
    cells: Vec<bool>,
}

impl HearingMatrix {
    /// Single collision domain: everybody hears everybody.
    pub fn full(stations: usize) -> Self {
        let nodes = stations + 1;
        HearingMatrix { nodes, cells: vec![true; nodes * nodes] }
    }

    /// Build from explicit rows (`rows[v][u]`: node `v` hears node `u`).
    pub fn from_rows(rows: &[Vec<bool>], allow_asymmetric: bool) -> Result<Self> {
        let nodes = rows.len();
        if nodes < 2 {
            return Err(Error::config("hearing", "needs the AP and at least one station"));
        }
        for (v, row) in rows.iter().enumerate() {
            if row.len() != nodes {
                return Err(Error::config(
                    format!("hearing[{v}]"),
                    format!("row has {} entries, expected {nodes}", row.len()),
                ));
            }
            if !row[v] {
                return Err(Error::config(format!("hearing[{v}][{v}]"), "diagonal must be 1"));
            }
        }
        if !allow_asymmetric {
            for v in 0..nodes {
                for u in 0..v {
                    if rows[v][u] != rows[u][v] {
                        return Err(Error::config(
                            format!("hearing[{v}][{u}]"),
                            "matrix is asymmetric; set hearing_asymmetric = true to allow",
                        ));
                    }
                }
            }
        }
        Ok(HearingMatrix { nodes, cells: rows.iter().flatten().copied().collect() })
    }

    /// Full matrix with the listed station pairs (0-based) mutually hidden.
    pub fn with_hidden_pairs(stations: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::full(stations);
        for &(a, b) in pairs {
            if a >= stations || b >= stations || a == b {
                return Err(Error::config("hidden_pairs", format!("bad pair {}:{}", a + 1, b + 1)));
            }
            m.set(a + 1, b + 1, false);
            m.set(b + 1, a + 1, false);
        }
        Ok(m)
    }

    pub fn set(&mut self, listener: usize, source: usize, heard: bool) {
        self.cells[listener * self.nodes + source] = heard;
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn stations(&self) -> usize {
        self.nodes - 1
    }

    #[inline]
    pub fn hears(&self, listener: usize, source: usize) -> bool {
        self.cells[listener * self.nodes + source]
    }

    pub fn is_full(&self) -> bool {
        self.cells.iter().all(|&c| c)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.nodes).all(|v| (0..v).all(|u| self.hears(v, u) == self.hears(u, v)))
    }

    /// Stations (0-based) whose transmissions station `station` can sense.
    pub fn heard_set(&self, station: usize) -> Vec<usize> {
        (0..self.stations()).filter(|&s| s != station && self.hears(station + 1, s + 1)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.cells.chunks(self.nodes).map(|r| r.to_vec()).collect()
    }
}
