//! Seeded i.i.d. sample streams.
//!
//! A stream is identified by `(seed, stream_id)`; the ChaCha block counter is
//! the position within it. Distinct stream ids select disjoint ChaCha
//! streams under the same key, so trials can be generated in parallel and
//! reproduced individually.

use std::io::BufRead;
use std::path::{Path, PathBuf};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::points::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distribution {
    /// Uniform on `[0, 1)^s`.
    UniformCube,
    /// Standard normal in every coordinate.
    Gaussian,
}

impl Distribution {
    pub fn name(self) -> &'static str {
        match self {
            Distribution::UniformCube => "uniform",
            Distribution::Gaussian => "gaussian",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "uniform" | "uniform_cube" => Some(Distribution::UniformCube),
            "gaussian" | "normal" => Some(Distribution::Gaussian),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampleSource {
    UniformCube { seed: u64, stream_id: u64 },
    Gaussian { seed: u64, stream_id: u64 },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub points: PointSet,
    pub source: SampleSource,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn seed(&self) -> Option<u64> {
        match self.source {
            SampleSource::UniformCube { seed, .. } | SampleSource::Gaussian { seed, .. } => {
                Some(seed)
            }
            SampleSource::File(_) => None,
        }
    }
}

/// A resumable stream: drawing `n` then `m` points yields the same points as
/// drawing `n + m` at once.
#[derive(Debug, Clone)]
pub struct SampleStream {
    distribution: Distribution,
    dim: usize,
    seed: u64,
    stream_id: u64,
    rng: ChaCha12Rng,
    drawn: usize,
}

impl SampleStream {
    pub fn new(distribution: Distribution, dim: usize, seed: u64, stream_id: u64) -> Self {
        assert!(dim >= 1, "sample dimension must be positive");
        SampleStream {
            distribution,
            dim,
            seed,
            stream_id,
            rng: stream_rng(seed, stream_id),
            drawn: 0,
        }
    }

    pub fn distribution(&self) -> Distribution {
        self.distribution
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points drawn so far.
    pub fn drawn(&self) -> usize {
        self.drawn
    }

    /// ChaCha word position (the counter part of the stream state).
    pub fn word_pos(&self) -> u128 {
        self.rng.get_word_pos()
    }

    /// Appends `n` fresh points to `out`.
    pub fn extend(&mut self, out: &mut PointSet, n: usize) {
        assert_eq!(out.dim(), self.dim, "stream and point set dimensions differ");
        let mut point = vec![0.0; self.dim];
        for _ in 0..n {
            for x in point.iter_mut() {
                *x = match self.distribution {
                    Distribution::UniformCube => unit_f64(self.rng.next_u64()),
                    Distribution::Gaussian => self.rng.sample(StandardNormal),
                };
            }
            out.push_unchecked(&point);
        }
        self.drawn += n;
    }

    pub fn next_batch(&mut self, n: usize) -> SampleBatch {
        let mut points = PointSet::with_capacity(self.dim, n);
        self.extend(&mut points, n);
        SampleBatch {
            points,
            source: self.source(),
        }
    }

    pub fn source(&self) -> SampleSource {
        match self.distribution {
            Distribution::UniformCube => SampleSource::UniformCube {
                seed: self.seed,
                stream_id: self.stream_id,
            },
            Distribution::Gaussian => SampleSource::Gaussian {
                seed: self.seed,
                stream_id: self.stream_id,
            },
        }
    }
}

pub(crate) fn stream_rng(seed: u64, stream_id: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Top 53 bits as a multiple of `2^-53`; always in `[0, 1)`.
fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn sample_uniform_cube(s: usize, n: usize, seed: u64, stream_id: u64) -> SampleBatch {
    SampleStream::new(Distribution::UniformCube, s, seed, stream_id).next_batch(n)
}

pub fn sample_gaussian(s: usize, n: usize, seed: u64, stream_id: u64) -> SampleBatch {
    SampleStream::new(Distribution::Gaussian, s, seed, stream_id).next_batch(n)
}

/// Mixes a sequence of words into one stream id (SplitMix64 finalizer per word).
pub fn derive_stream_id(parts: &[u64]) -> u64 {
    let mut h = 0x9E37_79B9_7F4A_7C15u64;
    for &p in parts {
        h = splitmix64(h ^ p);
    }
    h
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A seed drawn from operating-system entropy.
pub fn entropy_seed() -> u64 {
    rand::rng().next_u64()
}

/// Reads CSV points: one point per line, `s` comma-separated decimals.
/// Blank lines and lines starting with `#` are skipped.
pub fn load_samples(path: &Path, s: usize) -> Result<SampleBatch> {
    let file = std::fs::File::open(path)?;
    let points = parse_samples(std::io::BufReader::new(file), s)?;
    Ok(SampleBatch {
        points,
        source: SampleSource::File(path.to_path_buf()),
    })
}

pub fn parse_samples<R: BufRead>(reader: R, s: usize) -> Result<PointSet> {
    if s == 0 {
        return Err(Error::InvalidInput("sample dimension must be positive".into()));
    }
    let mut points = PointSet::new(s);
    let mut row = Vec::with_capacity(s);
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        row.clear();
        for cell in trimmed.split(',') {
            let cell = cell.trim();
            let value: f64 = cell
                .parse()
                .map_err(|_| Error::parse(lineno, format!("not a number: {cell:?}")))?;
            if !value.is_finite() {
                return Err(Error::parse(lineno, format!("non-finite value {cell:?}")));
            }
            row.push(value);
        }
        if row.len() != s {
            return Err(Error::parse(
                lineno,
                format!("expected {s} coordinates, found {}", row.len()),
            ));
        }
        points.push_unchecked(&row);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn uniform_is_deterministic_and_in_unit_cube() {
        let a = sample_uniform_cube(2, 3, 7, 0);
        let b = sample_uniform_cube(2, 3, 7, 0);
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        let big = sample_uniform_cube(3, 10_000, 1, 2);
        assert!(big.points.as_flat().iter().all(|&x| (0.0..1.0).contains(&x)));
    }

    #[test]
    fn unit_f64_is_half_open() {
        assert_eq!(unit_f64(0), 0.0);
        assert!(unit_f64(u64::MAX) < 1.0);
    }

    #[test]
    fn uniform_mean_is_one_half() {
        let batch = sample_uniform_cube(2, 100_000, 11, 0);
        for c in 0..2 {
            let mean: f64 = batch.points.rows().map(|r| r[c]).sum::<f64>() / 1e5;
            assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        }
    }

    #[test]
    fn gaussian_moments() {
        let a = sample_gaussian(2, 100_000, 5, 3);
        assert_eq!(a, sample_gaussian(2, 100_000, 5, 3));
        for c in 0..2 {
            let xs: Vec<f64> = a.points.rows().map(|r| r[c]).collect();
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
            assert!(mean.abs() < 0.02, "mean {mean}");
            assert!((var - 1.0).abs() < 0.05, "var {var}");
        }
    }

    #[test]
    fn prefix_property() {
        for dist in [Distribution::UniformCube, Distribution::Gaussian] {
            let mut stream = SampleStream::new(dist, 3, 99, 4);
            let mut split = PointSet::new(3);
            stream.extend(&mut split, 17);
            stream.extend(&mut split, 40);
            let whole = SampleStream::new(dist, 3, 99, 4).next_batch(57);
            assert_eq!(split, whole.points);
        }
    }

    #[test]
    fn streams_do_not_overlap() {
        let mut a = stream_rng(42, 0);
        let mut b = stream_rng(42, 1);
        let pairs = |rng: &mut ChaCha12Rng| {
            let words: Vec<u64> = (0..10_000).map(|_| rng.next_u64()).collect();
            words.windows(2).map(|w| (w[0], w[1])).collect::<HashSet<_>>()
        };
        let pa = pairs(&mut a);
        let pb = pairs(&mut b);
        assert_eq!(pa.intersection(&pb).count(), 0);
    }

    #[test]
    fn derived_stream_ids_differ() {
        let ids: HashSet<u64> = (0..1000u64).map(|i| derive_stream_id(&[7, 2, 2, 0, i])).collect();
        assert_eq!(ids.len(), 1000);
        assert_eq!(derive_stream_id(&[1, 2]), derive_stream_id(&[1, 2]));
        assert_ne!(derive_stream_id(&[1, 2]), derive_stream_id(&[2, 1]));
    }

    #[test]
    fn csv_parsing() {
        let text = "# header\n0.1, 0.2\n\n0.3,0.4\n";
        let pts = parse_samples(text.as_bytes(), 2).unwrap();
        assert_eq!(pts.to_rows(), vec![vec![0.1, 0.2], vec![0.3, 0.4]]);

        let err = parse_samples("0.1,0.2\n0.3,abc\n".as_bytes(), 2).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let err = parse_samples("0.1,0.2,0.3\n".as_bytes(), 2).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
