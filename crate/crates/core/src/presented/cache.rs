//! On-disk cache of echelon bases, enabled by the `PENTA_CACHE` variable.
//!
//! File layout: magic, format version, letter count, degree, row count, rows
//! (length, then monomial / numerator / denominator triples with signed
//! little-endian big integers), and finally a SHA-256 of everything before it.

use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use super::quotient::{DegreeData, Row};
use crate::scalar::Q;

const MAGIC: &[u8; 8] = b"PENTAECH";
const VERSION: u32 = 1;

fn dir() -> Option<PathBuf> {
    std::env::var_os("PENTA_CACHE")
        .filter(|s| !s.is_empty())
        .map(PathBuf::from)
}

fn path(key: &str, degree: u32) -> Option<PathBuf> {
    dir().map(|d| d.join(format!("{key}-d{degree}.ech")))
}

pub fn encode(letters: usize, degree: u32, data: &DegreeData) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(letters as u32).to_le_bytes());
    buf.extend_from_slice(&degree.to_le_bytes());
    buf.extend_from_slice(&(data.rows.len() as u32).to_le_bytes());
    let put_int = |buf: &mut Vec<u8>, x: &BigInt| {
        let b = x.to_signed_bytes_le();
        buf.extend_from_slice(&(b.len() as u32).to_le_bytes());
        buf.extend_from_slice(&b);
    };
    for row in &data.rows {
        buf.extend_from_slice(&(row.len() as u32).to_le_bytes());
        for (m, c) in row {
            buf.extend_from_slice(&m.to_le_bytes());
            put_int(&mut buf, c.numer());
            put_int(&mut buf, c.denom());
        }
    }
    let sum = Sha256::digest(&buf);
    buf.extend_from_slice(&sum);
    buf
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Option<&[u8]> {
        let s = self.buf.get(self.pos..self.pos + n)?;
        self.pos += n;
        Some(s)
    }
    fn u32(&mut self) -> Option<u32> {
        Some(u32::from_le_bytes(self.take(4)?.try_into().ok()?))
    }
    fn u64(&mut self) -> Option<u64> {
        Some(u64::from_le_bytes(self.take(8)?.try_into().ok()?))
    }
    fn int(&mut self) -> Option<BigInt> {
        let n = self.u32()? as usize;
        Some(BigInt::from_signed_bytes_le(self.take(n)?))
    }
}

/// Decodes a cache file, rejecting anything with a bad checksum or header.
pub fn decode(bytes: &[u8], letters: usize, degree: u32) -> Option<DegreeData> {
    if bytes.len() < 32 {
        return None;
    }
    let (body, sum) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != sum {
        return None;
    }
    let mut r = Reader { buf: body, pos: 0 };
    if r.take(8)? != MAGIC || r.u32()? != VERSION {
        return None;
    }
    if r.u32()? as usize != letters || r.u32()? != degree {
        return None;
    }
    let nrows = r.u32()? as usize;
    let mut rows: Vec<Row> = Vec::with_capacity(nrows);
    for _ in 0..nrows {
        let len = r.u32()? as usize;
        let mut row = Vec::with_capacity(len);
        for _ in 0..len {
            let m = r.u64()?;
            let num = r.int()?;
            let den = r.int()?;
            if den == BigInt::from(0) {
                return None;
            }
            row.push((m, Q::new(num, den)));
        }
        if row.is_empty() {
            return None;
        }
        rows.push(row);
    }
    (r.pos == body.len()).then(|| DegreeData::from_rows(rows))
}

pub(crate) fn load(key: &str, letters: usize, degree: u32) -> Option<DegreeData> {
    let p = path(key, degree)?;
    let bytes = std::fs::read(&p).ok()?;
    let data = decode(&bytes, letters, degree);
    if data.is_none() {
        log::warn!("ignoring corrupt cache file {}", p.display());
    }
    data
}

/// Best effort: failures are logged, never fatal. Writes go through a
/// temporary file and an atomic rename.
pub(crate) fn store(key: &str, letters: usize, degree: u32, data: &DegreeData) {
    let Some(p) = path(key, degree) else { return };
    let result = (|| -> std::io::Result<()> {
        let dir = p.parent().expect("cache file has a parent");
        std::fs::create_dir_all(dir)?;
        static SEQ: AtomicUsize = AtomicUsize::new(0);
        let seq = SEQ.fetch_add(1, Ordering::Relaxed);
        let tmp = dir.join(format!(".{key}-d{degree}.{}.{seq}.tmp", std::process::id()));
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(&encode(letters, degree, data))?;
        f.sync_all()?;
        std::fs::rename(&tmp, &p)
    })();
    if let Err(e) = result {
        log::warn!("could not write cache file {}: {e}", p.display());
    }
}
