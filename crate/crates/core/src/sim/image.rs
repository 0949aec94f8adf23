//! 8-bit grayscale images, binary PGM I/O and resampling.

use std::io::{BufRead, Write};

use crate::error::{domain, Error, Result};

/// Smallest side accepted by the codec.
pub const MIN_SIDE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Image {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width < MIN_SIDE || height < MIN_SIDE {
            return domain(format!("image {width}x{height} is smaller than 8x8"));
        }
        if samples.len() != width * height {
            return domain(format!(
                "expected {} samples for {width}x{height}, got {}",
                width * height,
                samples.len()
            ));
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self::new(width, height, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }

    /// Sample with coordinates clamped to the image (edge replication).
    pub fn get_clamped(&self, x: usize, y: usize) -> u8 {
        self.get(x.min(self.width - 1), y.min(self.height - 1))
    }

    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.samples)?;
        Ok(())
    }

    /// Reads a binary (P5) PGM with maxval ≤ 255.
    pub fn read_pgm<R: BufRead>(mut input: R) -> Result<Self> {
        let mut header = Vec::new();
        let mut tokens = Vec::new();
        while tokens.len() < 4 {
            let mut byte = [0u8; 1];
            if input.read(&mut byte)? == 0 {
                return Err(Error::Parse("PGM header truncated".into()));
            }
            match byte[0] {
                b'#' if header.is_empty() => {
                    let mut comment = Vec::new();
                    input.read_until(b'\n', &mut comment)?;
                }
                c if c.is_ascii_whitespace() => {
                    if !header.is_empty() {
                        tokens.push(String::from_utf8_lossy(&header).into_owned());
                        header.clear();
                    }
                }
                c => header.push(c),
            }
        }
        if tokens[0] != "P5" {
            return Err(Error::Parse(format!("unsupported PGM magic {:?}, expected P5", tokens[0])));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad PGM header field {s:?}")))
        };
        let (width, height, maxval) = (num(&tokens[1])?, num(&tokens[2])?, num(&tokens[3])?);
        if maxval == 0 || maxval > 255 {
            return Err(Error::Parse(format!("unsupported PGM maxval {maxval}")));
        }
        let mut samples = vec![0u8; width * height];
        input
            .read_exact(&mut samples)
            .map_err(|_| Error::Parse("PGM pixel data truncated".into()))?;
        Self::new(width, height, samples)
    }
}

/// Area-coverage weights for resampling a line of `src` samples to `dst`.
fn box_weights(src: usize, dst: usize) -> Vec<Vec<(usize, f64)>> {
    let scale = src as f64 / dst as f64;
    (0..dst)
        .map(|i| {
            let (lo, hi) = (i as f64 * scale, (i + 1) as f64 * scale);
            let first = lo.floor() as usize;
            let last = (hi.ceil() as usize).min(src);
            (first..last)
                .filter_map(|k| {
                    let overlap = hi.min(k as f64 + 1.0) - lo.max(k as f64);
                    (overlap > 0.0).then(|| (k, overlap / scale))
                })
                .collect()
        })
        .collect()
}

/// Box-average downsampling (each output pixel averages the input area it
/// covers). Dimensions must not grow.
pub fn downsample_box(image: &Image, width: usize, height: usize) -> Result<Image> {
    if width > image.width || height > image.height {
        return domain(format!(
            "cannot downsample {}x{} to larger {width}x{height}",
            image.width, image.height
        ));
    }
    if width == image.width && height == image.height {
        return Ok(image.clone());
    }
    let wx = box_weights(image.width, width);
    let wy = box_weights(image.height, height);
    let mut rows = vec![0.0f64; width * image.height];
    for y in 0..image.height {
        for (x, taps) in wx.iter().enumerate() {
            rows[y * width + x] = taps.iter().map(|&(k, w)| w * f64::from(image.get(k, y))).sum();
        }
    }
    Image::from_fn(width, height, |x, y| {
        let v: f64 = wy[y].iter().map(|&(k, w)| w * rows[k * width + x]).sum();
        v.round().clamp(0.0, 255.0) as u8
    })
}

/// Bilinear upsampling with pixel-centre alignment. Same-size input is
/// returned unchanged.
pub fn upsample_bilinear(image: &Image, width: usize, height: usize) -> Result<Image> {
    if width < image.width || height < image.height {
        return domain(format!(
            "cannot upsample {}x{} to smaller {width}x{height}",
            image.width, image.height
        ));
    }
    if width == image.width && height == image.height {
        return Ok(image.clone());
    }
    let taps = |src: usize, dst: usize| -> Vec<(usize, usize, f64)> {
        let scale = src as f64 / dst as f64;
        (0..dst)
            .map(|i| {
                let pos = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, (src - 1) as f64);
                let lo = pos.floor() as usize;
                let hi = (lo + 1).min(src - 1);
                (lo, hi, pos - lo as f64)
            })
            .collect()
    };
    let tx = taps(image.width, width);
    let ty = taps(image.height, height);
    Image::from_fn(width, height, |x, y| {
        let (x0, x1, fx) = tx[x];
        let (y0, y1, fy) = ty[y];
        let p = |xx, yy| f64::from(image.get(xx, yy));
        let top = p(x0, y0) * (1.0 - fx) + p(x1, y0) * fx;
        let bottom = p(x0, y1) * (1.0 - fx) + p(x1, y1) * fx;
        (top * (1.0 - fy) + bottom * fy).round().clamp(0.0, 255.0) as u8
    })
}
