//! Radix-2 FFT generic over the scalar type.

use num_complex::Complex;

use crate::scalar::{root_of_unity, Real};

/// Precomputed plan for forward transforms `X_k = Σ_l x_l e^{−2πi kl/n}`.
#[derive(Clone, Debug)]
pub struct Fft<T> {
    n: usize,
    twiddles: Vec<Complex<T>>,
}

impl<T: Real> Fft<T> {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "FFT length must be a power of two");
        let twiddles = (0..n / 2).map(|k| root_of_unity::<T>(k, n).conj()).collect();
        Fft { n, twiddles }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, data: &mut [Complex<T>]) {
        let n = self.n;
        assert_eq!(data.len(), n);
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..len / 2 {
                    let t = self.twiddles[k * stride].clone() * data[start + k + len / 2].clone();
                    let u = data[start + k].clone();
                    data[start + k] = u.clone() + t.clone();
                    data[start + k + len / 2] = u - t;
                }
            }
            len <<= 1;
        }
    }
}
