//! Orthonormal 8×8 DCT-II.

use std::f64::consts::PI;
use std::sync::OnceLock;

pub const BLOCK: usize = 8;
pub const BLOCK_AREA: usize = BLOCK * BLOCK;

pub type Block = [f64; BLOCK_AREA];

/// `basis[k * 8 + n] = α(k) cos(π (2n + 1) k / 16)`.
fn basis() -> &'static Block {
    static BASIS: OnceLock<Block> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut m = [0.0; BLOCK_AREA];
        for k in 0..BLOCK {
            let alpha = if k == 0 { (1.0 / BLOCK as f64).sqrt() } else { (2.0 / BLOCK as f64).sqrt() };
            for n in 0..BLOCK {
                m[k * BLOCK + n] = alpha * (PI * (2 * n + 1) as f64 * k as f64 / (2 * BLOCK) as f64).cos();
            }
        }
        m
    })
}

/// `C · X · Cᵀ`
pub fn forward_dct(block: &Block) -> Block {
    let c = basis();
    let mut tmp = [0.0; BLOCK_AREA];
    for k in 0..BLOCK {
        for col in 0..BLOCK {
            tmp[k * BLOCK + col] = (0..BLOCK).map(|n| c[k * BLOCK + n] * block[n * BLOCK + col]).sum();
        }
    }
    let mut out = [0.0; BLOCK_AREA];
    for row in 0..BLOCK {
        for l in 0..BLOCK {
            out[row * BLOCK + l] = (0..BLOCK).map(|n| tmp[row * BLOCK + n] * c[l * BLOCK + n]).sum();
        }
    }
    out
}

/// `Cᵀ · Y · C`
pub fn inverse_dct(coeffs: &Block) -> Block {
    let c = basis();
    let mut tmp = [0.0; BLOCK_AREA];
    for n in 0..BLOCK {
        for col in 0..BLOCK {
            tmp[n * BLOCK + col] = (0..BLOCK).map(|k| c[k * BLOCK + n] * coeffs[k * BLOCK + col]).sum();
        }
    }
    let mut out = [0.0; BLOCK_AREA];
    for row in 0..BLOCK {
        for m in 0..BLOCK {
            out[row * BLOCK + m] = (0..BLOCK).map(|l| tmp[row * BLOCK + l] * c[l * BLOCK + m]).sum();
        }
    }
    out
}

/// Forward transform of 8-bit samples centred on 128.
pub fn block_dct(samples: &[u8; BLOCK_AREA]) -> Block {
    let mut centered = [0.0; BLOCK_AREA];
    for (c, &s) in centered.iter_mut().zip(samples) {
        *c = f64::from(s) - 128.0;
    }
    forward_dct(&centered)
}
