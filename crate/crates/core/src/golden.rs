//! Published reference tables.
//!
//! These are the 8×8 matrices printed for the default HVS-CSF configuration
//! and for a 3840×2160 target display (maxima 65535×65535). Tests and the
//! CLI `--golden` check read them from here only.

/// HVS-CSF weighting matrix for the default configuration, 4 decimals.
pub const REFERENCE_FWM: [[f64; 8]; 8] = [
    [1.0000, 1.0000, 1.0000, 1.0000, 0.9599, 0.8746, 0.7684, 0.6571],
    [1.0000, 1.0000, 1.0000, 1.0000, 0.9283, 0.8404, 0.7371, 0.6306],
    [1.0000, 1.0000, 0.9571, 0.8898, 0.8192, 0.7371, 0.6471, 0.5558],
    [1.0000, 1.0000, 0.8898, 0.7617, 0.6669, 0.5912, 0.5196, 0.4495],
    [0.9599, 0.9283, 0.8192, 0.6669, 0.5419, 0.4564, 0.3930, 0.3393],
    [0.8746, 0.8404, 0.7371, 0.5912, 0.4564, 0.3598, 0.2948, 0.2480],
    [0.7684, 0.7371, 0.6471, 0.5196, 0.3930, 0.2948, 0.2278, 0.1828],
    [0.6571, 0.6306, 0.5558, 0.4495, 0.3393, 0.2480, 0.1828, 0.1391],
];

/// Default intra quantization matrix, `round(16 / H)` of [`REFERENCE_FWM`].
pub const REFERENCE_INTRA_QM: [[u8; 8]; 8] = [
    [16, 16, 16, 16, 17, 18, 21, 24],
    [16, 16, 16, 16, 17, 19, 22, 25],
    [16, 16, 17, 18, 20, 22, 25, 29],
    [16, 16, 18, 21, 24, 27, 31, 36],
    [17, 17, 20, 24, 30, 35, 41, 47],
    [18, 19, 22, 27, 35, 44, 54, 65],
    [21, 22, 25, 31, 41, 54, 70, 88],
    [24, 25, 29, 36, 47, 65, 88, 115],
];

/// Default inter quantization matrix. Stored verbatim; the linear model that
/// derives it from the intra matrix is not published with coefficients.
pub const REFERENCE_INTER_QM: [[u8; 8]; 8] = [
    [16, 16, 16, 16, 17, 18, 20, 24],
    [16, 16, 16, 17, 18, 20, 24, 25],
    [16, 16, 17, 18, 20, 24, 25, 28],
    [16, 17, 18, 20, 24, 25, 28, 33],
    [17, 18, 20, 24, 25, 28, 33, 41],
    [18, 20, 24, 25, 28, 33, 41, 54],
    [20, 24, 25, 28, 33, 41, 54, 71],
    [24, 25, 28, 33, 41, 54, 71, 91],
];

/// Display-adapted weighting matrix for a 3840×2160 target, 4 decimals.
///
/// The published values were obtained by adapting the 4-decimal
/// [`REFERENCE_FWM`]; adapting the full-precision matrix differs by up to
/// 8.3e-5 at (6, 7) and (7, 6).
pub const REFERENCE_ADAPTED_FWM_4K: [[f64; 8]; 8] = [
    [1.0000, 1.0000, 1.0000, 1.0000, 0.9798, 0.9454, 0.9114, 0.8832],
    [1.0000, 1.0000, 1.0000, 1.0000, 0.9643, 0.9309, 0.8996, 0.8739],
    [1.0000, 1.0000, 0.9736, 0.9396, 0.9125, 0.8873, 0.8652, 0.8475],
    [1.0000, 1.0000, 0.9396, 0.8780, 0.8439, 0.8265, 0.8156, 0.8085],
    [0.9798, 0.9643, 0.9125, 0.8439, 0.7953, 0.7730, 0.7662, 0.7666],
    [0.9454, 0.9309, 0.8873, 0.8265, 0.7730, 0.7418, 0.7306, 0.7319],
    [0.9114, 0.8996, 0.8652, 0.8156, 0.7662, 0.7306, 0.7132, 0.7106],
    [0.8832, 0.8739, 0.8475, 0.8085, 0.7666, 0.7319, 0.7106, 0.7030],
];

/// Intra adaptive quantization matrix for a 3840×2160 target.
pub const REFERENCE_AQM_INTRA_4K: [[u8; 8]; 8] = [
    [16, 16, 16, 16, 16, 17, 18, 18],
    [16, 16, 16, 16, 17, 17, 18, 18],
    [16, 16, 16, 17, 18, 18, 18, 19],
    [16, 16, 17, 18, 19, 19, 20, 20],
    [16, 17, 18, 19, 20, 21, 21, 21],
    [17, 17, 18, 19, 21, 22, 22, 22],
    [18, 18, 18, 20, 21, 22, 22, 23],
    [18, 18, 19, 20, 21, 22, 23, 23],
];
