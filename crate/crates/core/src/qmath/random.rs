use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{c, CVector, ComplexMatrix};

/// The one generator type threaded through every stochastic routine.
pub type QRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> QRng {
    QRng::seed_from_u64(seed)
}

/// Independent stream `stream` derived from `seed`, for sharded work.
pub fn stream_rng(seed: u64, stream: u64) -> QRng {
    let mut rng = QRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian(rng: &mut QRng) -> num_complex::Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im)
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn complex_gaussian_matrix(rows: usize, cols: usize, rng: &mut QRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary: QR of a Ginibre matrix, with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary(d: usize, rng: &mut QRng) -> ComplexMatrix {
    assert!(d >= 1, "haar_unitary needs d >= 1");
    let qr = complex_gaussian_matrix(d, d, rng).qr();
    let (mut q, rmat) = qr.unpack();
    for k in 0..d {
        let rkk = rmat[(k, k)];
        let phase = if rkk.norm() > 0.0 {
            rkk / rkk.norm()
        } else {
            c(1.0, 0.0)
        };
        let col = q.column(k) * phase;
        q.set_column(k, &col);
    }
    q
}

/// Uniformly random pure state in `C^d`.
pub fn haar_state(d: usize, rng: &mut QRng) -> CVector {
    loop {
        let v = CVector::from_fn(d, |_, _| complex_gaussian(rng));
        let n = v.norm();
        if n > 0.0 {
            return v / c(n, 0.0);
        }
    }
}
