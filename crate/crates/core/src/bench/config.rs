//! `key = value` settings file for benchmark runs.

use std::path::Path;

use crate::accum::DEFAULT_HASH_MULTIPLIER;
use crate::error::{Result, SpgemmError};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSettings {
    pub repetitions: usize,
    pub warmup: bool,
    pub threads: Vec<usize>,
    /// Cells whose problem scale is at most this are checked against the
    /// reference product before timing.
    pub verify_max_scale: u32,
    pub hash_multiplier: u64,
    pub chunk_width: usize,
}

pub fn default_thread_sweep() -> Vec<usize> {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut v = vec![1];
    while *v.last().unwrap() < cores.max(4) {
        v.push(v.last().unwrap() * 2);
    }
    v
}

impl Default for BenchSettings {
    fn default() -> Self {
        Self {
            repetitions: 10,
            warmup: true,
            threads: vec![std::thread::available_parallelism().map_or(1, |n| n.get())],
            verify_max_scale: 12,
            hash_multiplier: DEFAULT_HASH_MULTIPLIER,
            chunk_width: 8,
        }
    }
}

impl BenchSettings {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| SpgemmError::InvalidArgument(format!("config line {}: {msg}", n + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<u64>().map_err(|_| bad(format!("bad number {v:?} for {key}")));
            match key {
                "repetitions" => s.repetitions = num(value)? as usize,
                "warmup" => {
                    s.warmup = match value {
                        "true" | "1" | "yes" => true,
                        "false" | "0" | "no" => false,
                        _ => return Err(bad(format!("bad boolean {value:?}"))),
                    }
                }
                "threads" => {
                    s.threads = value.split(',').map(|t| num(t.trim()).map(|x| x as usize)).collect::<Result<_>>()?;
                }
                "verify_max_scale" => s.verify_max_scale = num(value)? as u32,
                "hash_multiplier" => s.hash_multiplier = num(value)?,
                "chunk_width" => s.chunk_width = num(value)? as usize,
                _ => return Err(bad(format!("unknown key {key:?}"))),
            }
        }
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(SpgemmError::InvalidArgument("repetitions must be at least 1".into()));
        }
        if self.threads.is_empty() || self.threads.contains(&0) {
            return Err(SpgemmError::InvalidArgument("thread counts must be positive".into()));
        }
        if ![4, 8, 16].contains(&self.chunk_width) {
            return Err(SpgemmError::InvalidArgument(format!("chunk width {} not in {{4, 8, 16}}", self.chunk_width)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let s = BenchSettings::parse(
            "# comment\nrepetitions = 3\nwarmup=false\nthreads = 1, 2,4\nverify_max_scale=10\nhash_multiplier=7\nchunk_width=16\n",
        )
        .unwrap();
        assert_eq!(s.repetitions, 3);
        assert!(!s.warmup);
        assert_eq!(s.threads, vec![1, 2, 4]);
        assert_eq!(s.verify_max_scale, 10);
        assert_eq!(s.hash_multiplier, 7);
        assert_eq!(s.chunk_width, 16);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BenchSettings::parse("repetitions=0").is_err());
        assert!(BenchSettings::parse("colour=blue").is_err());
        assert!(BenchSettings::parse("threads=1,x").is_err());
        assert!(BenchSettings::parse("chunk_width=5").is_err());
        assert!(BenchSettings::parse("just text").is_err());
    }

    #[test]
    fn thread_sweep_doubles() {
        let v = default_thread_sweep();
        assert_eq!(v[0], 1);
        assert!(v.windows(2).all(|w| w[1] == 2 * w[0]));
        assert!(*v.last().unwrap() >= 4);
    }
}
