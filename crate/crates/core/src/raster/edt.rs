//! Exact Euclidean distance transform (Felzenszwalb & Huttenlocher).
//!
//! Two separable passes of the lower envelope of parabolas over integer cell
//! offsets. Squared distances are integers well below 2^53, so every value
//! is exact before the final square root.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::raster::{Grid, Mask};

/// Distance in meters from every cell center to the nearest true cell center.
pub fn distance_transform(mask: &Mask) -> Result<Grid> {
    let header = *mask.header();
    let cellsize = header.cellsize;
    let cells = squared_cell_distances(mask)?
        .into_iter()
        .map(|d2| d2.sqrt() * cellsize)
        .collect();
    Grid::new(header, cells)
}

/// Squared distance in cell units to the nearest true cell.
pub fn squared_cell_distances(mask: &Mask) -> Result<Vec<f64>> {
    if !mask.any() {
        return Err(Error::NoSourceCells);
    }
    let ncols = mask.header().ncols;
    let nrows = mask.header().nrows;

    // Column pass, stored transposed so each column is contiguous.
    let mut by_col: Vec<f64> = vec![0.0; ncols * nrows];
    by_col.par_chunks_mut(nrows).enumerate().for_each_init(
        || Scratch::new(nrows),
        |scratch, (col, out)| {
            for (row, f) in scratch.f.iter_mut().enumerate() {
                *f = if mask.get(row, col) {
                    0.0
                } else {
                    f64::INFINITY
                };
            }
            scratch.envelope(out);
        },
    );

    let mut result = vec![0.0; ncols * nrows];
    result.par_chunks_mut(ncols).enumerate().for_each_init(
        || Scratch::new(ncols),
        |scratch, (row, out)| {
            for (col, f) in scratch.f.iter_mut().enumerate() {
                *f = by_col[col * nrows + row];
            }
            scratch.envelope(out);
        },
    );
    Ok(result)
}

struct Scratch {
    f: Vec<f64>,
    /// Parabola apexes in the envelope.
    v: Vec<usize>,
    /// Boundaries between envelope segments.
    z: Vec<f64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            f: vec![0.0; n],
            v: Vec::with_capacity(n),
            z: Vec::with_capacity(n + 1),
        }
    }

    /// out[q] = min_p (q - p)^2 + f[p]. Infinite samples contribute nothing.
    fn envelope(&mut self, out: &mut [f64]) {
        let f = &self.f;
        let v = &mut self.v;
        let z = &mut self.z;
        v.clear();
        z.clear();
        for (q, &fq) in f.iter().enumerate() {
            if !fq.is_finite() {
                continue;
            }
            let qf = q as f64;
            loop {
                let Some(&p) = v.last() else {
                    v.push(q);
                    z.push(f64::NEG_INFINITY);
                    break;
                };
                let pf = p as f64;
                let s = ((fq + qf * qf) - (f[p] + pf * pf)) / (2.0 * (qf - pf));
                if s <= *z.last().unwrap() {
                    v.pop();
                    z.pop();
                } else {
                    v.push(q);
                    z.push(s);
                    break;
                }
            }
        }
        if v.is_empty() {
            out.fill(f64::INFINITY);
            return;
        }
        let mut k = 0;
        for (q, o) in out.iter_mut().enumerate() {
            let qf = q as f64;
            while k + 1 < v.len() && z[k + 1] < qf {
                k += 1;
            }
            let d = qf - v[k] as f64;
            *o = d * d + f[v[k]];
        }
    }
}
