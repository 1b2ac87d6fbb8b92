//! Marching-squares extraction of a scalar level set.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::geometry::{Domain, Point2};

/// Samples of `f - threshold` on a uniform node lattice covering a domain.
pub(crate) struct ScalarGrid {
    origin: Point2,
    dx: f64,
    dy: f64,
    nx: usize,
    ny: usize,
    values: Vec<f64>,
}

impl ScalarGrid {
    /// Lattice with the largest spacing not exceeding `cell` that divides
    /// both domain sides.
    pub(crate) fn sample<F>(f: F, threshold: f64, domain: &Domain, cell: f64) -> Self
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let cells_x = (domain.width() / cell - 1e-9).ceil().max(1.0) as usize;
        let cells_y = (domain.height() / cell - 1e-9).ceil().max(1.0) as usize;
        let (nx, ny) = (cells_x + 1, cells_y + 1);
        let dx = domain.width() / cells_x as f64;
        let dy = domain.height() / cells_y as f64;
        let origin = Point2::new(domain.x_min, domain.y_min);
        let values = (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % nx, k / nx);
                f(origin.x + i as f64 * dx, origin.y + j as f64 * dy) - threshold
            })
            .collect();
        Self {
            origin,
            dx,
            dy,
            nx,
            ny,
            values,
        }
    }

    #[cfg(test)]
    pub(crate) fn max_cell_diagonal(&self) -> f64 {
        self.dx.hypot(self.dy)
    }

    fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    fn inside(&self, i: usize, j: usize) -> bool {
        self.value(i, j) < 0.0
    }

    fn node(&self, i: usize, j: usize) -> Point2 {
        Point2::new(
            self.origin.x + i as f64 * self.dx,
            self.origin.y + j as f64 * self.dy,
        )
    }

    fn horizontal(&self, i: usize, j: usize) -> EdgeId {
        EdgeId(2 * (j * self.nx + i))
    }

    fn vertical(&self, i: usize, j: usize) -> EdgeId {
        EdgeId(2 * (j * self.nx + i) + 1)
    }

    /// Interpolated crossing on an edge whose end nodes differ in sign.
    fn crossing(&self, edge: EdgeId) -> Point2 {
        let node = edge.0 / 2;
        let (i, j) = (node % self.nx, node / self.nx);
        let (i1, j1) = if edge.0.is_multiple_of(2) {
            (i + 1, j)
        } else {
            (i, j + 1)
        };
        let (va, vb) = (self.value(i, j), self.value(i1, j1));
        let t = va / (va - vb);
        let (a, b) = (self.node(i, j), self.node(i1, j1));
        a + (b - a) * t
    }

    /// Contour polylines of the zero level set. Each polyline is a chain of
    /// edge crossings; the flag marks closed loops (first vertex not repeated).
    pub(crate) fn contours(&self) -> Vec<(Vec<Point2>, bool)> {
        let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
        for j in 0..self.ny - 1 {
            for i in 0..self.nx - 1 {
                self.cell_segments(i, j, &mut segments);
            }
        }

        let mut incident: HashMap<EdgeId, Vec<usize>> = HashMap::new();
        for (k, &(a, b)) in segments.iter().enumerate() {
            incident.entry(a).or_default().push(k);
            incident.entry(b).or_default().push(k);
        }

        let mut used = vec![false; segments.len()];
        let mut out = Vec::new();
        // Open chains start at an edge used by a single segment (domain
        // border); whatever remains afterwards are closed loops.
        let mut starts: Vec<(EdgeId, usize)> = Vec::new();
        for (k, &(a, b)) in segments.iter().enumerate() {
            for e in [a, b] {
                if incident[&e].len() == 1 {
                    starts.push((e, k));
                }
            }
        }
        for (k, &(a, _)) in segments.iter().enumerate() {
            starts.push((a, k));
        }

        for (start_edge, first) in starts {
            if used[first] {
                continue;
            }
            let open = incident[&start_edge].len() == 1;
            let mut chain = vec![self.crossing(start_edge)];
            let mut edge = start_edge;
            let mut seg = first;
            loop {
                used[seg] = true;
                let (a, b) = segments[seg];
                let next_edge = if a == edge { b } else { a };
                if next_edge == start_edge {
                    break;
                }
                chain.push(self.crossing(next_edge));
                edge = next_edge;
                match incident[&edge].iter().find(|&&s| !used[s]) {
                    Some(&s) => seg = s,
                    None => break,
                }
            }
            out.push((chain, !open));
        }
        out
    }

    /// Stretches of the domain perimeter where the level set is interior,
    /// ending at the same edge crossings the contours use. The flag marks a
    /// fully interior perimeter.
    pub(crate) fn perimeter_runs(&self) -> Vec<(Vec<Point2>, bool)> {
        let (nx, ny) = (self.nx, self.ny);
        // Perimeter nodes counterclockwise from the lower-left corner.
        let mut ring: Vec<(usize, usize)> = Vec::with_capacity(2 * (nx + ny));
        ring.extend((0..nx - 1).map(|i| (i, 0)));
        ring.extend((0..ny - 1).map(|j| (nx - 1, j)));
        ring.extend((1..nx).rev().map(|i| (i, ny - 1)));
        ring.extend((1..ny).rev().map(|j| (0, j)));
        let inside: Vec<bool> = ring.iter().map(|&(i, j)| self.inside(i, j)).collect();
        if inside.iter().all(|&v| v) {
            return vec![(ring.iter().map(|&(i, j)| self.node(i, j)).collect(), true)];
        }
        let n = ring.len();
        let Some(start) = (0..n).find(|&k| !inside[k]) else {
            return Vec::new();
        };
        let mut runs = Vec::new();
        let mut current: Vec<Point2> = Vec::new();
        for step in 1..=n {
            let k = (start + step) % n;
            let prev = (start + step - 1) % n;
            if inside[k] {
                if current.is_empty() {
                    current.push(self.ring_crossing(ring[prev], ring[k]));
                }
                current.push(self.node(ring[k].0, ring[k].1));
            } else if !current.is_empty() {
                current.push(self.ring_crossing(ring[prev], ring[k]));
                runs.push((std::mem::take(&mut current), false));
            }
        }
        runs
    }

    fn ring_crossing(&self, a: (usize, usize), b: (usize, usize)) -> Point2 {
        let edge = match (b.0 as isize - a.0 as isize, b.1 as isize - a.1 as isize) {
            (1, 0) => self.horizontal(a.0, a.1),
            (-1, 0) => self.horizontal(b.0, b.1),
            (0, 1) => self.vertical(a.0, a.1),
            _ => self.vertical(b.0, b.1),
        };
        self.crossing(edge)
    }

    fn cell_segments(&self, i: usize, j: usize, out: &mut Vec<(EdgeId, EdgeId)>) {
        let bl = self.inside(i, j);
        let br = self.inside(i + 1, j);
        let tr = self.inside(i + 1, j + 1);
        let tl = self.inside(i, j + 1);
        let bottom = self.horizontal(i, j);
        let right = self.vertical(i + 1, j);
        let top = self.horizontal(i, j + 1);
        let left = self.vertical(i, j);

        let mut crossed = Vec::with_capacity(4);
        if bl != br {
            crossed.push(bottom);
        }
        if br != tr {
            crossed.push(right);
        }
        if tr != tl {
            crossed.push(top);
        }
        if tl != bl {
            crossed.push(left);
        }
        match crossed.len() {
            0 => {}
            2 => out.push((crossed[0], crossed[1])),
            _ => {
                // Saddle: resolve with the cell-centre average.
                let centre = (self.value(i, j)
                    + self.value(i + 1, j)
                    + self.value(i + 1, j + 1)
                    + self.value(i, j + 1))
                    / 4.0;
                let centre_inside = centre < 0.0;
                if centre_inside == bl {
                    // Centre joins bl and tr; cut off br and tl.
                    out.push((bottom, right));
                    out.push((top, left));
                } else {
                    out.push((left, bottom));
                    out.push((right, top));
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct EdgeId(usize);
