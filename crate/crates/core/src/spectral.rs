//! Spectral differentiation of periodic samples.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Index of node `(i0, i1, i2)` in a row-major grid of the given shape.
pub fn node_index(shape: [usize; 3], i: [usize; 3]) -> usize {
    (i[0] * shape[1] + i[1]) * shape[2] + i[2]
}

/// Angular wavenumber of FFT bin `j` on `n` nodes; the Nyquist bin maps to 0.
fn wavenumber(j: usize, n: usize) -> f64 {
    if 2 * j < n {
        j as f64
    } else if 2 * j == n {
        0.0
    } else {
        j as f64 - n as f64
    }
}

/// Derivative along `axis` of samples on a uniform periodic grid with the
/// given period, by trigonometric interpolation.
pub fn diff_axis(data: &[Complex64], shape: [usize; 3], axis: usize, period: f64) -> Vec<Complex64> {
    let n = shape[axis];
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    if n <= 1 {
        return out;
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let scale = 2.0 * std::f64::consts::PI / period;
    let factors: Vec<Complex64> = (0..n).map(|j| Complex64::new(0.0, scale * wavenumber(j, n) / n as f64)).collect();
    let stride = match axis {
        0 => shape[1] * shape[2],
        1 => shape[2],
        _ => 1,
    };
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];
    let others: Vec<usize> = (0..3).filter(|&a| a != axis).collect();
    for p in 0..shape[others[0]] {
        for q in 0..shape[others[1]] {
            let mut idx = [0usize; 3];
            idx[others[0]] = p;
            idx[others[1]] = q;
            let base = node_index(shape, idx);
            for (j, v) in line.iter_mut().enumerate() {
                *v = data[base + j * stride];
            }
            fwd.process_with_scratch(&mut line, &mut scratch);
            for (v, f) in line.iter_mut().zip(&factors) {
                *v *= f;
            }
            inv.process_with_scratch(&mut line, &mut scratch);
            for (j, v) in line.iter().enumerate() {
                out[base + j * stride] = *v;
            }
        }
    }
    out
}

/// Samples of `f(x)` at the nodes of a periodic grid (`x_a = a-th node * period / n`).
pub fn sample<F: Fn([f64; 3]) -> Complex64>(shape: [usize; 3], periods: [f64; 3], f: F) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(shape.iter().product());
    for i in 0..shape[0] {
        for j in 0..shape[1] {
            for k in 0..shape[2] {
                out.push(f([
                    periods[0] * i as f64 / shape[0] as f64,
                    periods[1] * j as f64 / shape[1] as f64,
                    periods[2] * k as f64 / shape[2] as f64,
                ]));
            }
        }
    }
    out
}
