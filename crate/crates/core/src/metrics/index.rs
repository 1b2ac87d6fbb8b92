use crate::geometry::{distance, Point2};

/// Uniform bucket grid for nearest-neighbour queries over a fixed point set.
#[derive(Debug, Clone)]
pub struct PointIndex {
    points: Vec<Point2>,
    origin: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    // CSR layout: bucket b holds entries[starts[b]..starts[b + 1]].
    starts: Vec<usize>,
    entries: Vec<u32>,
}

impl PointIndex {
    /// # Panics
    /// If `points` is empty.
    pub fn new(points: &[Point2]) -> Self {
        assert!(!points.is_empty(), "cannot index an empty point set");
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let (w, h) = ((hi.x - lo.x).max(1e-12), (hi.y - lo.y).max(1e-12));
        // About two points per bucket.
        let cell = (w * h * 2.0 / points.len() as f64)
            .sqrt()
            .max(w.max(h) / 4096.0);
        let nx = ((w / cell).floor() as usize + 1).max(1);
        let ny = ((h / cell).floor() as usize + 1).max(1);

        let bucket_of = |p: Point2| {
            let i = (((p.x - lo.x) / cell) as usize).min(nx - 1);
            let j = (((p.y - lo.y) / cell) as usize).min(ny - 1);
            j * nx + i
        };
        let mut counts = vec![0usize; nx * ny + 1];
        for &p in points {
            counts[bucket_of(p) + 1] += 1;
        }
        for b in 1..counts.len() {
            counts[b] += counts[b - 1];
        }
        let starts = counts.clone();
        let mut fill = counts;
        let mut entries = vec![0u32; points.len()];
        for (k, &p) in points.iter().enumerate() {
            let b = bucket_of(p);
            entries[fill[b]] = k as u32;
            fill[b] += 1;
        }
        Self {
            points: points.to_vec(),
            origin: lo,
            cell,
            nx,
            ny,
            starts,
            entries,
        }
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    fn cell_coords(&self, p: Point2) -> (usize, usize) {
        let fi = ((p.x - self.origin.x) / self.cell).floor();
        let fj = ((p.y - self.origin.y) / self.cell).floor();
        let i = fi.clamp(0.0, (self.nx - 1) as f64) as usize;
        let j = fj.clamp(0.0, (self.ny - 1) as f64) as usize;
        (i, j)
    }

    /// Index and distance of the point nearest to `p`. Ties go to the lowest index.
    pub fn nearest(&self, p: Point2) -> (usize, f64) {
        let (ci, cj) = self.cell_coords(p);
        let mut best = (usize::MAX, f64::INFINITY);
        let mut r = 0usize;
        loop {
            let i0 = ci.saturating_sub(r);
            let i1 = (ci + r).min(self.nx - 1);
            let j0 = cj.saturating_sub(r);
            let j1 = (cj + r).min(self.ny - 1);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let on_ring = i + r == ci || i == ci + r || j + r == cj || j == cj + r;
                    if !on_ring {
                        continue;
                    }
                    let b = j * self.nx + i;
                    for &k in &self.entries[self.starts[b]..self.starts[b + 1]] {
                        let k = k as usize;
                        let d = distance(self.points[k], p);
                        if d < best.1 || (d == best.1 && k < best.0) {
                            best = (k, d);
                        }
                    }
                }
            }
            // Distance from p to the nearest cell not yet visited.
            let mut bound = f64::INFINITY;
            if i0 > 0 {
                bound = bound.min(p.x - (self.origin.x + i0 as f64 * self.cell));
            }
            if i1 + 1 < self.nx {
                bound = bound.min(self.origin.x + (i1 + 1) as f64 * self.cell - p.x);
            }
            if j0 > 0 {
                bound = bound.min(p.y - (self.origin.y + j0 as f64 * self.cell));
            }
            if j1 + 1 < self.ny {
                bound = bound.min(self.origin.y + (j1 + 1) as f64 * self.cell - p.y);
            }
            if bound == f64::INFINITY || best.1 < bound.max(0.0) {
                return best;
            }
            r += 1;
        }
    }

    /// Indices of all points within distance `radius` of `p`.
    pub fn within(&self, p: Point2, radius: f64) -> Vec<usize> {
        let lo = self.cell_coords(Point2::new(p.x - radius, p.y - radius));
        let hi = self.cell_coords(Point2::new(p.x + radius, p.y + radius));
        let mut out = Vec::new();
        for j in lo.1..=hi.1 {
            for i in lo.0..=hi.0 {
                let b = j * self.nx + i;
                for &k in &self.entries[self.starts[b]..self.starts[b + 1]] {
                    if distance(self.points[k as usize], p) <= radius {
                        out.push(k as usize);
                    }
                }
            }
        }
        out
    }
}
