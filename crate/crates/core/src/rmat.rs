//! R-MAT recursive matrix generator.
//!
//! Each edge is placed by descending `scale` levels of a 2x2 quadrant split,
//! choosing quadrant (0,0), (0,1), (1,0), (1,1) with probabilities a, b, c, d.
//! The same probabilities are used at every level (no per-level noise).
//!
//! Randomness comes from ChaCha8 seeded with `rng_seed`. Draw `e` reads the
//! keystream starting at word `2 * scale * e`, so any split of the draws
//! across threads produces the same edge list as a sequential run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csr::{CooTriple, CsrMatrix, Duplicates};
use crate::error::{Result, SpgemmError};

/// Largest supported scale; 2^30 rows still fit the 32-bit column index.
pub const MAX_SCALE: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RmatSpec {
    pub scale: u32,
    pub edge_factor: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub rng_seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmatKind {
    /// Uniform quadrant probabilities (Erdos-Renyi-like).
    Er,
    /// Graph500 skewed probabilities.
    G500,
}

impl std::str::FromStr for RmatKind {
    type Err = SpgemmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(Self::Er),
            "g500" => Ok(Self::G500),
            _ => Err(SpgemmError::InvalidArgument(format!("unknown generator kind {s:?}"))),
        }
    }
}

impl std::fmt::Display for RmatKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Er => "ER",
            Self::G500 => "G500",
        })
    }
}

pub fn er_spec(scale: u32, edge_factor: usize, seed: u64) -> RmatSpec {
    RmatSpec { scale, edge_factor, a: 0.25, b: 0.25, c: 0.25, d: 0.25, rng_seed: seed }
}

pub fn g500_spec(scale: u32, edge_factor: usize, seed: u64) -> RmatSpec {
    RmatSpec { scale, edge_factor, a: 0.57, b: 0.19, c: 0.19, d: 0.05, rng_seed: seed }
}

impl RmatSpec {
    pub fn new(kind: RmatKind, scale: u32, edge_factor: usize, seed: u64) -> Self {
        match kind {
            RmatKind::Er => er_spec(scale, edge_factor, seed),
            RmatKind::G500 => g500_spec(scale, edge_factor, seed),
        }
    }

    pub fn dimension(&self) -> usize {
        1usize << self.scale
    }

    pub fn num_draws(&self) -> usize {
        self.dimension() * self.edge_factor
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SpgemmError::InvalidArgument(m));
        if self.scale > MAX_SCALE {
            return bad(format!("scale {} exceeds the index limit (max {MAX_SCALE})", self.scale));
        }
        if self.edge_factor < 1 {
            return bad("edge factor must be at least 1".into());
        }
        let p = [self.a, self.b, self.c, self.d];
        if p.iter().any(|&x| x.is_nan() || x < 0.0) {
            return bad(format!("quadrant probabilities must be nonnegative: {p:?}"));
        }
        if (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return bad(format!("quadrant probabilities must sum to 1: {p:?}"));
        }
        Ok(())
    }
}

fn draw_range(spec: &RmatSpec, draws: std::ops::Range<usize>, out: &mut Vec<(u32, u32)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    rng.set_word_pos(2 * spec.scale as u128 * draws.start as u128);
    let (ab, abc) = (spec.a + spec.b, spec.a + spec.b + spec.c);
    for _ in draws {
        let (mut row, mut col) = (0u32, 0u32);
        for level in (0..spec.scale).rev() {
            let bit = 1u32 << level;
            let r: f64 = rng.random();
            if r < spec.a {
            } else if r < ab {
                col |= bit;
            } else if r < abc {
                row |= bit;
            } else {
                row |= bit;
                col |= bit;
            }
        }
        out.push((row, col));
    }
}

/// Raw edge draws before duplicate removal, in draw order.
pub fn generate_edges(spec: &RmatSpec, nworkers: usize) -> Result<Vec<(u32, u32)>> {
    spec.validate()?;
    let total = spec.num_draws();
    let nworkers = nworkers.max(1).min(total.max(1));
    if nworkers == 1 {
        let mut out = Vec::with_capacity(total);
        draw_range(spec, 0..total, &mut out);
        return Ok(out);
    }
    let chunk = total.div_ceil(nworkers);
    let parts: Vec<Vec<(u32, u32)>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..nworkers)
            .map(|t| {
                let range = (t * chunk).min(total)..((t + 1) * chunk).min(total);
                s.spawn(move || {
                    let mut out = Vec::with_capacity(range.len());
                    draw_range(spec, range, &mut out);
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("generator worker panicked")).collect()
    });
    Ok(parts.concat())
}

/// Generates the pattern matrix with repeated edges collapsed to a single
/// entry of value 1.0. Self loops are kept.
pub fn generate(spec: &RmatSpec) -> Result<CsrMatrix> {
    generate_with_workers(spec, 1)
}

pub fn generate_with_workers(spec: &RmatSpec, nworkers: usize) -> Result<CsrMatrix> {
    let edges = generate_edges(spec, nworkers)?;
    let n = spec.dimension();
    let triples: Vec<CooTriple> =
        edges.iter().map(|&(r, c)| CooTriple::new(r as usize, c as usize, 1.0)).collect();
    CsrMatrix::from_triples(n, n, &triples, Duplicates::KeepFirst)
}
