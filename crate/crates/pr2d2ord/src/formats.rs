//! Draw files.
//!
//! The text format has one row per draw with a header
//! `chain,draw,beta[1],…,beta[p],phi[1],…,phi[p],W,tau[1],…,tau[K-1]`.
//!
//! The binary format is little-endian throughout:
//!
//! | offset | size | field |
//! |--------|------|-------|
//! | 0  | 4 | magic `PR2D` |
//! | 4  | 1 | version (1) |
//! | 5  | 3 | zero |
//! | 8  | 4 | `p` (u32) |
//! | 12 | 4 | `K` (u32) |
//! | 16 | 4 | chains (u32) |
//! | 20 | 4 | draws per chain (u32) |
//! | 24 | 4 | warmup (u32) |
//! | 28 | 4 | prior name length `m` (u32) |
//! | 32 | 8 | seed (u64) |
//! | 40 | m | prior name, UTF-8 |
//!
//! followed by `chains × draws × (2p + K)` IEEE-754 doubles, chain-major,
//! in the column order of the text format. Sampler statistics are not
//! stored; they are reported in the summary.

use std::io::{Read, Write};

use pr2d2ord_core::draws::{ChainDraws, ChainStats, PosteriorDraws};

pub const MAGIC: &[u8; 4] = b"PR2D";
pub const VERSION: u8 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("not a draws file (bad magic bytes)")]
    Magic,
    #[error("unsupported draws format version {0}")]
    Version(u8),
    #[error("malformed draws file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Model(#[from] pr2d2ord_core::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn empty_stats() -> ChainStats {
    ChainStats {
        step_size: f64::NAN,
        mean_accept_stat: f64::NAN,
        divergences: 0,
        warmup_divergences: 0,
        max_depth_hits: 0,
        leapfrog_steps: 0,
        reinits: 0,
    }
}

pub fn write_draws_csv<W: Write>(draws: &PosteriorDraws, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["chain".to_string(), "draw".to_string()];
    header.extend(draws.names());
    w.write_record(&header)?;
    let mut rec = Vec::with_capacity(header.len());
    for c in 0..draws.num_chains() {
        for i in 0..draws.draws_per_chain() {
            rec.clear();
            rec.push((c + 1).to_string());
            rec.push((i + 1).to_string());
            rec.extend(draws.draw(c, i).iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a text draws file. Run metadata other than the dimensions is not
/// part of the text format and comes back empty.
pub fn read_draws_csv<R: Read>(input: R) -> Result<PosteriorDraws> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header.len() < 2 || header[0] != "chain" || header[1] != "draw" {
        return Err(FormatError::Malformed("header must start with chain,draw".into()));
    }
    let p = header.iter().filter(|h| h.starts_with("beta[")).count();
    let k = header.iter().filter(|h| h.starts_with("tau[")).count() + 1;
    let width = 2 * p + k;
    if p == 0 || header.len() != width + 2 {
        return Err(FormatError::Malformed(format!("unexpected column count {}", header.len())));
    }
    let mut chains: Vec<Vec<f64>> = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec[i].parse::<f64>().map_err(|_| FormatError::Malformed(format!("row {}: bad number '{}'", row + 1, &rec[i])))
        };
        let c = num(0)? as usize;
        if c == 0 {
            return Err(FormatError::Malformed(format!("row {}: chains are numbered from 1", row + 1)));
        }
        if chains.len() < c {
            chains.resize(c, Vec::new());
        }
        for i in 2..rec.len() {
            chains[c - 1].push(num(i)?);
        }
    }
    let chains = chains.into_iter().map(|values| ChainDraws { values, stats: empty_stats() }).collect();
    Ok(PosteriorDraws::new(p, k, "", 0, 0, chains)?)
}

pub fn write_draws_bin<W: Write>(draws: &PosteriorDraws, mut out: W) -> Result<()> {
    let u32_of = |v: usize| -> Result<[u8; 4]> {
        u32::try_from(v).map(u32::to_le_bytes).map_err(|_| FormatError::Malformed("dimension exceeds u32".into()))
    };
    out.write_all(MAGIC)?;
    out.write_all(&[VERSION, 0, 0, 0])?;
    out.write_all(&u32_of(draws.p)?)?;
    out.write_all(&u32_of(draws.k)?)?;
    out.write_all(&u32_of(draws.num_chains())?)?;
    out.write_all(&u32_of(draws.draws_per_chain())?)?;
    out.write_all(&u32_of(draws.warmup)?)?;
    out.write_all(&u32_of(draws.prior.len())?)?;
    out.write_all(&draws.seed.to_le_bytes())?;
    out.write_all(draws.prior.as_bytes())?;
    for c in 0..draws.num_chains() {
        for v in draws.chain_values(c) {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_draws_bin<R: Read>(mut input: R) -> Result<PosteriorDraws> {
    let mut head = [0u8; 40];
    input.read_exact(&mut head)?;
    if &head[..4] != MAGIC {
        return Err(FormatError::Magic);
    }
    if head[4] != VERSION {
        return Err(FormatError::Version(head[4]));
    }
    let u32_at = |o: usize| u32::from_le_bytes(head[o..o + 4].try_into().expect("4 bytes")) as usize;
    let (p, k, chains, per_chain, warmup, name_len) = (u32_at(8), u32_at(12), u32_at(16), u32_at(20), u32_at(24), u32_at(28));
    let seed = u64::from_le_bytes(head[32..40].try_into().expect("8 bytes"));
    let mut name = vec![0u8; name_len];
    input.read_exact(&mut name)?;
    let prior = String::from_utf8(name).map_err(|_| FormatError::Malformed("prior name is not UTF-8".into()))?;
    let width = 2 * p + k;
    let mut buf = [0u8; 8];
    let mut out = Vec::with_capacity(chains);
    for _ in 0..chains {
        let mut values = Vec::with_capacity(per_chain * width);
        for _ in 0..per_chain * width {
            input.read_exact(&mut buf)?;
            values.push(f64::from_le_bytes(buf));
        }
        out.push(ChainDraws { values, stats: empty_stats() });
    }
    let mut rest = Vec::new();
    input.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(FormatError::Malformed(format!("{} trailing bytes", rest.len())));
    }
    Ok(PosteriorDraws::new(p, k, &prior, seed, warmup, out)?)
}
