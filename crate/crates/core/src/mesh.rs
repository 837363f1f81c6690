//! Flat structured meshes: tori Tᵈ and cylinders \[0, L₀\]×Tᵈ⁻¹.
//!
//! A mesh is a product of axes, each either periodic or an interval, with at
//! most one interval axis (the "time" axis of a cylinder). Axis i has
//! `counts[i]` cells of spacing hᵢ = extentᵢ/countsᵢ; a periodic axis carries
//! `counts[i]` nodes, an interval axis `counts[i] + 1` (both endpoints).
//! Coordinates are physical (arc length), so the flat metric is the identity
//! in these coordinates and quadrature weights are plain cell volumes with
//! trapezoid halving at interval ends.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_DIM: usize = 4;

/// Hard cap on total node count; guards refinement loops against blow-up.
pub const MAX_NODES: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Periodic,
    Interval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<R: Real> {
    counts: Vec<usize>,
    extents: Vec<R>,
    topology: Vec<Topology>,
    // derived
    node_counts: Vec<usize>,
    strides: Vec<usize>,
    num_nodes: usize,
}

impl<R: Real> Mesh<R> {
    /// General constructor. Dimension 2–4, at least 4 cells per axis,
    /// positive extents, at most one interval axis.
    pub fn new(counts: &[usize], extents: &[R], topology: &[Topology]) -> Result<Self> {
        let dim = counts.len();
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::InvalidMesh(format!("dimension {dim} not in 2..=4")));
        }
        if extents.len() != dim || topology.len() != dim {
            return Err(Error::InvalidMesh("counts/extents/topology lengths differ".into()));
        }
        if counts.iter().any(|&c| c < 4) {
            return Err(Error::InvalidMesh("fewer than 4 cells on an axis".into()));
        }
        if extents.iter().any(|&e| e <= R::zero()) {
            return Err(Error::InvalidMesh("non-positive extent".into()));
        }
        let n_interval = topology.iter().filter(|&&t| t == Topology::Interval).count();
        if n_interval > 1 {
            return Err(Error::InvalidMesh("more than one interval axis".into()));
        }
        let nodes: usize = (0..dim)
            .map(|a| counts[a] + usize::from(topology[a] == Topology::Interval))
            .product();
        if nodes > MAX_NODES {
            return Err(Error::InvalidMesh(format!(
                "{nodes} nodes exceeds the configured cap {MAX_NODES}"
            )));
        }
        Ok(Self::assemble(counts, extents, topology))
    }

    fn assemble(counts: &[usize], extents: &[R], topology: &[Topology]) -> Self {
        let dim = counts.len();
        let node_counts: Vec<usize> = (0..dim)
            .map(|a| counts[a] + usize::from(topology[a] == Topology::Interval))
            .collect();
        let mut strides = vec![1usize; dim];
        for a in (0..dim.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * node_counts[a + 1];
        }
        let num_nodes = node_counts.iter().product();
        Self {
            counts: counts.to_vec(),
            extents: extents.to_vec(),
            topology: topology.to_vec(),
            node_counts,
            strides,
            num_nodes,
        }
    }

    /// Torus with unit extents.
    pub fn torus(counts: &[usize]) -> Result<Self> {
        let ext = vec![R::one(); counts.len()];
        Self::new(counts, &ext, &vec![Topology::Periodic; counts.len()])
    }

    /// Cylinder \[0,1\]×Tᵈ⁻¹ with unit extents; axis 0 is the interval axis.
    pub fn cylinder(counts: &[usize]) -> Result<Self> {
        let ext = vec![R::one(); counts.len()];
        let mut topo = vec![Topology::Periodic; counts.len()];
        topo[0] = Topology::Interval;
        Self::new(counts, &ext, &topo)
    }

    /// Same topology and extents, different cell counts (refinement studies).
    pub fn with_counts(&self, counts: &[usize]) -> Result<Self> {
        Self::new(counts, &self.extents, &self.topology)
    }

    /// Slice-of-boundary constructor: drops one axis, keeping the rest.
    /// Used internally for boundary restriction; may produce dimension 1.
    pub fn drop_axis(&self, axis: usize) -> Self {
        let keep: Vec<usize> = (0..self.dim()).filter(|&a| a != axis).collect();
        let counts: Vec<usize> = keep.iter().map(|&a| self.counts[a]).collect();
        let extents: Vec<R> = keep.iter().map(|&a| self.extents[a]).collect();
        let topo: Vec<Topology> = keep.iter().map(|&a| self.topology[a]).collect();
        Self::assemble(&counts, &extents, &topo)
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn extents(&self) -> &[R] {
        &self.extents
    }

    pub fn topology(&self) -> &[Topology] {
        &self.topology
    }

    /// Nodes along an axis (cells, plus one on an interval axis).
    pub fn node_count(&self, axis: usize) -> usize {
        self.node_counts[axis]
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    /// Grid spacing hᵢ = extentᵢ / countsᵢ.
    pub fn spacing(&self, axis: usize) -> R {
        self.extents[axis] / R::of(self.counts[axis] as f64)
    }

    pub fn max_spacing(&self) -> R {
        (0..self.dim()).map(|a| self.spacing(a)).fold(R::zero(), R::max)
    }

    /// Volume of one cell, Π hᵢ.
    pub fn cell_volume(&self) -> R {
        (0..self.dim()).map(|a| self.spacing(a)).fold(R::one(), |p, h| p * h)
    }

    pub fn total_volume(&self) -> R {
        self.extents.iter().fold(R::one(), |p, &e| p * e)
    }

    /// The unique interval axis, if any.
    pub fn interval_axis(&self) -> Option<usize> {
        self.topology.iter().position(|&t| t == Topology::Interval)
    }

    pub fn is_closed(&self) -> bool {
        self.interval_axis().is_none()
    }

    /// Linear node index stride of an axis (row-major, axis 0 slowest).
    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// Multi-index of a node from its linear index.
    #[inline]
    pub fn node_coords(&self, mut idx: usize) -> [usize; MAX_DIM] {
        let mut c = [0usize; MAX_DIM];
        for a in 0..self.dim() {
            c[a] = idx / self.strides[a];
            idx %= self.strides[a];
        }
        c
    }

    /// Linear index from a multi-index.
    #[inline]
    pub fn node_index(&self, coords: &[usize]) -> usize {
        let mut idx = 0;
        for a in 0..self.dim() {
            debug_assert!(coords[a] < self.node_counts[a]);
            idx += coords[a] * self.strides[a];
        }
        idx
    }

    /// Physical position of a node.
    pub fn position(&self, coords: &[usize]) -> [R; MAX_DIM] {
        let mut x = [R::zero(); MAX_DIM];
        for a in 0..self.dim() {
            x[a] = R::of(coords[a] as f64) * self.spacing(a);
        }
        x
    }

    /// Quadrature weight of a node: 1, halved once at each interval endpoint.
    #[inline]
    pub fn node_weight(&self, coords: &[usize]) -> R {
        match self.interval_axis() {
            Some(t) if coords[t] == 0 || coords[t] + 1 == self.node_counts[t] => R::of(0.5),
            _ => R::one(),
        }
    }

    /// Whether a node lies on the interval-axis boundary.
    #[inline]
    pub fn on_boundary(&self, coords: &[usize]) -> bool {
        match self.interval_axis() {
            Some(t) => coords[t] == 0 || coords[t] + 1 == self.node_counts[t],
            None => false,
        }
    }

    /// Base linear indices of all grid lines along `axis` (nodes with that
    /// coordinate zero); a line visits `node_count(axis)` nodes with stride
    /// `stride(axis)`.
    pub fn line_starts(&self, axis: usize) -> Vec<usize> {
        let mut starts = Vec::with_capacity(self.num_nodes / self.node_counts[axis]);
        let mut coords = [0usize; MAX_DIM];
        loop {
            starts.push(self.node_index(&coords[..self.dim()]));
            // odometer over all axes except `axis`
            let mut a = self.dim();
            loop {
                if a == 0 {
                    return starts;
                }
                a -= 1;
                if a == axis {
                    continue;
                }
                coords[a] += 1;
                if coords[a] < self.node_counts[a] {
                    break;
                }
                coords[a] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_counts_and_volume() {
        let m = Mesh::<f64>::torus(&[8, 8, 8]).unwrap();
        assert_eq!(m.num_nodes(), 512);
        assert!((m.total_volume() - 1.0).abs() < 1e-15);
        assert!((m.spacing(1) - 0.125).abs() < 1e-15);
        assert!(m.is_closed());
    }

    #[test]
    fn cylinder_has_extra_time_layer() {
        let m = Mesh::<f64>::cylinder(&[8, 8, 8, 8]).unwrap();
        assert_eq!(m.node_count(0), 9);
        assert_eq!(m.node_count(1), 8);
        assert_eq!(m.num_nodes(), 9 * 8 * 8 * 8);
        assert_eq!(m.interval_axis(), Some(0));
    }

    #[test]
    fn invalid_meshes_are_rejected() {
        assert!(Mesh::<f64>::torus(&[8]).is_err());
        assert!(Mesh::<f64>::torus(&[8, 3]).is_err());
        assert!(Mesh::<f64>::new(
            &[8, 8],
            &[1.0, 1.0],
            &[Topology::Interval, Topology::Interval]
        )
        .is_err());
        assert!(Mesh::<f64>::new(&[8, 8], &[1.0, -1.0], &[Topology::Periodic, Topology::Periodic])
            .is_err());
    }

    #[test]
    fn index_round_trip() {
        let m = Mesh::<f64>::cylinder(&[4, 5, 6]).unwrap();
        for idx in 0..m.num_nodes() {
            let c = m.node_coords(idx);
            assert_eq!(m.node_index(&c[..3]), idx);
        }
    }

    #[test]
    fn trapezoid_weights_tile_the_volume() {
        let m = Mesh::<f64>::new(
            &[4, 6],
            &[2.0, 3.0],
            &[Topology::Interval, Topology::Periodic],
        )
        .unwrap();
        let mut total = 0.0;
        for idx in 0..m.num_nodes() {
            let c = m.node_coords(idx);
            total += m.node_weight(&c[..2]) * m.cell_volume();
        }
        assert!((total - 6.0).abs() < 1e-13);
    }

    #[test]
    fn line_iteration_covers_every_node_once() {
        let m = Mesh::<f64>::cylinder(&[4, 4, 5]).unwrap();
        for axis in 0..3 {
            let mut seen = vec![false; m.num_nodes()];
            for start in m.line_starts(axis) {
                for k in 0..m.node_count(axis) {
                    let idx = start + k * m.stride(axis);
                    assert!(!seen[idx]);
                    seen[idx] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn nonuniform_spacing_follows_extents() {
        let m = Mesh::<f64>::new(
            &[8, 16],
            &[2.0, 1.0],
            &[Topology::Periodic, Topology::Periodic],
        )
        .unwrap();
        assert!((m.spacing(0) - 0.25).abs() < 1e-15);
        assert!((m.spacing(1) - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn dropped_axis_keeps_remaining_geometry() {
        let m = Mesh::<f64>::new(
            &[4, 8, 6],
            &[1.0, 2.0, 3.0],
            &[Topology::Interval, Topology::Periodic, Topology::Periodic],
        )
        .unwrap();
        let s = m.drop_axis(0);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.counts(), &[8, 6]);
        assert!((s.extents()[1] - 3.0).abs() < 1e-15);
        assert!(s.is_closed());
    }
}
