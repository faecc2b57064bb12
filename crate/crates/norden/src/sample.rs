//! Deterministic, counter-based pseudo-random sampling.
//!
//! Every random quantity in a verification run is a pure function of
//! `(seed, stream, index)`, with no mutable generator state. That makes
//! runs exactly reproducible regardless of evaluation order, and lets
//! point `i` be regenerated in isolation (e.g. when re-checking a reported
//! failure). The mixing function is the standard splitmix64 finalizer,
//! which passes through statistical test batteries and is more than enough
//! for sampling evaluation points.

/// Distinct derivation streams so points, vectors, and test data never
/// share counters.
pub mod stream {
    pub const POINTS: u64 = 1;
    pub const VECTORS: u64 = 2;
    pub const EXPRS: u64 = 3;
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn finalize(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the key for one `(seed, stream)` lane.
pub fn stream_key(seed: u64, stream: u64) -> u64 {
    finalize(seed ^ finalize(stream.wrapping_mul(GOLDEN)))
}

/// The `index`-th raw word of a lane.
pub fn u64_at(key: u64, index: u64) -> u64 {
    finalize(key.wrapping_add(index.wrapping_mul(GOLDEN)))
}

/// Uniform in `[0, 1)`.
pub fn unit_at(key: u64, index: u64) -> f64 {
    // Top 53 bits → the full double mantissa range.
    (u64_at(key, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in `[-1, 1)`.
pub fn symmetric_at(key: u64, index: u64) -> f64 {
    2.0 * unit_at(key, index) - 1.0
}

/// The `index`-th sample point of a box, one counter slot per coordinate.
pub fn point_in_box(key: u64, index: u64, sample_box: &[[f64; 2]]) -> Vec<f64> {
    let dim = sample_box.len() as u64;
    sample_box
        .iter()
        .enumerate()
        .map(|(d, [lo, hi])| {
            let u = unit_at(key, index * dim + d as u64);
            lo + u * (hi - lo)
        })
        .collect()
}

/// The `index`-th random direction: components uniform in `[-1, 1)`,
/// normalized so the largest |component| is exactly 1.
pub fn unit_vector(key: u64, index: u64, dim: usize) -> Vec<f64> {
    let d = dim as u64;
    for salt in 0..16 {
        let v: Vec<f64> = (0..dim)
            .map(|c| symmetric_at(key, (index * 16 + salt) * d + c as u64))
            .collect();
        let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if max > 1e-6 {
            return v.iter().map(|x| x / max).collect();
        }
    }
    // Unreachable in practice; a basis vector is a valid direction.
    let mut v = vec![0.0; dim];
    v[0] = 1.0;
    v
}
