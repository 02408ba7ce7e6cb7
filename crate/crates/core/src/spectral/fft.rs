//! Three-dimensional complex FFT built from 1D rustfft passes.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type Plans = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

thread_local! {
    static PLANS: RefCell<HashMap<usize, Plans>> = RefCell::new(HashMap::new());
}

fn plans(n: usize) -> Plans {
    PLANS.with(|cell| {
        let mut map = cell.borrow_mut();
        map.entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
            })
            .clone()
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

/// Unnormalized in-place transform of an `n^3` array, third axis fastest.
pub(crate) fn transform(data: &mut [Complex64], n: usize, dir: Direction) {
    debug_assert_eq!(data.len(), n * n * n);
    let (fwd, inv) = plans(n);
    let fft = match dir {
        Direction::Forward => fwd,
        Direction::Inverse => inv,
    };
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];

    // axis 3: contiguous rows
    fft.process_with_scratch(data, &mut scratch);

    // axis 2: stride n inside each n*n slab
    let mut lines = vec![Complex64::new(0.0, 0.0); n * n];
    for slab in data.chunks_exact_mut(n * n) {
        for i2 in 0..n {
            for i3 in 0..n {
                lines[i3 * n + i2] = slab[i2 * n + i3];
            }
        }
        fft.process_with_scratch(&mut lines, &mut scratch);
        for i2 in 0..n {
            for i3 in 0..n {
                slab[i2 * n + i3] = lines[i3 * n + i2];
            }
        }
    }

    // axis 1: stride n*n, processed one i2-plane at a time
    for i2 in 0..n {
        for i1 in 0..n {
            for i3 in 0..n {
                lines[i3 * n + i1] = data[(i1 * n + i2) * n + i3];
            }
        }
        fft.process_with_scratch(&mut lines, &mut scratch);
        for i1 in 0..n {
            for i3 in 0..n {
                data[(i1 * n + i2) * n + i3] = lines[i3 * n + i1];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_then_inverse_scales_by_volume() {
        let n = 8;
        let mut data: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let orig = data.clone();
        transform(&mut data, n, Direction::Forward);
        transform(&mut data, n, Direction::Inverse);
        let scale = (n * n * n) as f64;
        for (a, b) in data.iter().zip(&orig) {
            assert!((a / scale - b).norm() < 1e-13);
        }
    }

    #[test]
    fn single_plane_wave_lands_on_one_bin() {
        let n = 8;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n * n];
        // e^{i (x1 + 2 x2 - x3)} sampled at x = 2π i / n
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    let phase = 2.0 * std::f64::consts::PI / n as f64
                        * (i1 as f64 + 2.0 * i2 as f64 - i3 as f64);
                    data[(i1 * n + i2) * n + i3] = Complex64::from_polar(1.0, phase);
                }
            }
        }
        transform(&mut data, n, Direction::Forward);
        let target = (n + 2) * n + (n - 1);
        for (i, v) in data.iter().enumerate() {
            let expect = if i == target { (n * n * n) as f64 } else { 0.0 };
            assert!((v.re - expect).abs() < 1e-9 && v.im.abs() < 1e-9, "bin {i}");
        }
    }
}
