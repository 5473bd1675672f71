use crate::error::{Error, Result};

/// Equispaced points of the coarse scan, endpoints included.
pub const GRID_POINTS: usize = 21;
/// Absolute width at which golden-section refinement stops.
pub const GOLDEN_TOLERANCE: f64 = 1e-3;

/// Minimises a scalar function on `[0, 1]`.
///
/// A coarse grid scan picks the best grid point (smallest argument on ties);
/// golden-section search then refines inside its two neighbouring cells.
/// The refined point is kept only if it beats the grid point. Non-finite
/// values count as `+inf`.
pub fn optimize_unit_interval<F>(mut objective: F) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut f = |x: f64| {
        let y = objective(x);
        if y.is_nan() {
            f64::INFINITY
        } else {
            y
        }
    };
    let step = 1.0 / (GRID_POINTS - 1) as f64;
    let mut best = (0.0, f64::INFINITY);
    let mut best_idx = 0;
    for i in 0..GRID_POINTS {
        let x = i as f64 * step;
        let y = f(x);
        if y < best.1 {
            best = (x, y);
            best_idx = i;
        }
    }
    if best.1 == f64::INFINITY {
        return Err(Error::InfiniteObjective);
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = best_idx.saturating_sub(1) as f64 * step;
    let mut b = ((best_idx + 1).min(GRID_POINTS - 1)) as f64 * step;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > GOLDEN_TOLERANCE {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let (x, y) = if fc <= fd { (c, fc) } else { (d, fd) };
    Ok(if y < best.1 { (x, y) } else { best })
}
