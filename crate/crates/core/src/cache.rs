//! Binary result cache: versioned, content-keyed, bit-exact.
//!
//! Entry layout (little-endian):
//!   magic "EKC1" | u32 version | u32 key length | key bytes (UTF-8)
//!   | u32 rows | u32 cols | u64 modulus | u64 nnz
//!   | nnz * (u32 row, u32 col, u64 value) | u64 checksum
//!
//! The checksum is a FNV-1a fold of everything before it. Writes go
//! through a temp file and an atomic rename, so concurrent writers leave
//! exactly one valid entry; corrupt entries read as misses.

use crate::linalg::dense::Mat;
use crate::error::Error;
use crate::Result;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

const MAGIC: &[u8; 4] = b"EKC1";
/// Bump on any change of symbol normalization or operator conventions;
/// stale entries are then ignored.
pub const CACHE_VERSION: u32 = 1;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Content key for a cached matrix.
pub fn cache_key(kind: &str, p: u64, m: u32, modulus: u64, extra: &str) -> String {
    if extra.is_empty() {
        format!("{kind}-p{p}-m{m}-M{modulus}")
    } else {
        format!("{kind}-p{p}-m{m}-M{modulus}-{extra}")
    }
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.ekc"))
}

/// Serialize a sparse view of a matrix under the given key.
pub fn cache_put(dir: &Path, key: &str, modulus: u64, mat: &Mat<u64>) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Cache { key: key.to_string(), source: e })?;
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    buf.extend_from_slice(&(key.len() as u32).to_le_bytes());
    buf.extend_from_slice(key.as_bytes());
    buf.extend_from_slice(&(mat.rows as u32).to_le_bytes());
    buf.extend_from_slice(&(mat.cols as u32).to_le_bytes());
    buf.extend_from_slice(&modulus.to_le_bytes());
    let mut triples: Vec<(u32, u32, u64)> = Vec::new();
    for i in 0..mat.rows {
        for j in 0..mat.cols {
            let v = *mat.at(i, j);
            if v != 0 {
                triples.push((i as u32, j as u32, v));
            }
        }
    }
    buf.extend_from_slice(&(triples.len() as u64).to_le_bytes());
    for (i, j, v) in triples {
        buf.extend_from_slice(&i.to_le_bytes());
        buf.extend_from_slice(&j.to_le_bytes());
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let checksum = fnv1a(&buf);
    buf.extend_from_slice(&checksum.to_le_bytes());
    // atomic write: unique temp file then rename (single winner)
    static COUNTER: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
    let unique = COUNTER.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    let final_path = entry_path(dir, key);
    let tmp_path = dir.join(format!(
        ".{key}.{}.{unique}.tmp",
        std::process::id()
    ));
    {
        let mut f = std::fs::File::create(&tmp_path)
            .map_err(|e| Error::Cache { key: key.to_string(), source: e })?;
        f.write_all(&buf).map_err(|e| Error::Cache { key: key.to_string(), source: e })?;
        f.sync_all().ok();
    }
    std::fs::rename(&tmp_path, &final_path)
        .map_err(|e| Error::Cache { key: key.to_string(), source: e })?;
    Ok(())
}

/// Read an entry; corrupt or version-mismatched entries are misses.
pub fn cache_get(dir: &Path, key: &str) -> Result<Option<(u64, Mat<u64>)>> {
    let path = entry_path(dir, key);
    let mut buf = Vec::new();
    match std::fs::File::open(&path) {
        Err(_) => return Ok(None),
        Ok(mut f) => {
            if f.read_to_end(&mut buf).is_err() {
                return Ok(None);
            }
        }
    }
    if buf.len() < 8 + 4 + 4 + 4 {
        return Ok(None);
    }
    let (body, tail) = buf.split_at(buf.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().unwrap());
    if fnv1a(body) != stored {
        return Ok(None);
    }
    let parsed = (|| -> Option<(u64, Mat<u64>)> {
        let mut pos = 0usize;
        let mut take = |n: usize| -> Option<&[u8]> {
            if pos + n > body.len() {
                return None;
            }
            let s = &body[pos..pos + n];
            pos += n;
            Some(s)
        };
        if take(4)? != MAGIC {
            return None;
        }
        let version = u32::from_le_bytes(take(4)?.try_into().ok()?);
        if version != CACHE_VERSION {
            return None;
        }
        let klen = u32::from_le_bytes(take(4)?.try_into().ok()?) as usize;
        if take(klen)? != key.as_bytes() {
            return None;
        }
        let rows = u32::from_le_bytes(take(4)?.try_into().ok()?) as usize;
        let cols = u32::from_le_bytes(take(4)?.try_into().ok()?) as usize;
        let modulus = u64::from_le_bytes(take(8)?.try_into().ok()?);
        let nnz = u64::from_le_bytes(take(8)?.try_into().ok()?) as usize;
        let mut mat = Mat { rows, cols, data: vec![0u64; rows.checked_mul(cols)?] };
        for _ in 0..nnz {
            let i = u32::from_le_bytes(take(4)?.try_into().ok()?) as usize;
            let j = u32::from_le_bytes(take(4)?.try_into().ok()?) as usize;
            let v = u64::from_le_bytes(take(8)?.try_into().ok()?);
            if i >= rows || j >= cols {
                return None;
            }
            *mat.at_mut(i, j) = v;
        }
        Some((modulus, mat))
    })();
    Ok(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = std::env::temp_dir().join(format!("eiskit-cache-test-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let mat = Mat::from_rows(vec![vec![1u64, 0, 3], vec![0, 5, 0]]);
        let key = cache_key("t2", 5, 2, 11, "");
        cache_put(&dir, &key, 25, &mat).unwrap();
        let (modulus, back) = cache_get(&dir, &key).unwrap().unwrap();
        assert_eq!(modulus, 25);
        assert_eq!(back, mat);
        // corrupt the file: entry becomes a miss
        let path = dir.join(format!("{key}.ekc"));
        let mut bytes = std::fs::read(&path).unwrap();
        let n = bytes.len();
        bytes[n / 2] ^= 0xff;
        std::fs::write(&path, bytes).unwrap();
        assert!(cache_get(&dir, &key).unwrap().is_none());
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn concurrent_writers_leave_one_valid_entry() {
        let dir =
            std::env::temp_dir().join(format!("eiskit-cache-race-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let key = cache_key("race", 5, 2, 11, "");
        let dirc = dir.clone();
        let keyc = key.clone();
        let handles: Vec<_> = (0..8)
            .map(|t| {
                let dir = dirc.clone();
                let key = keyc.clone();
                std::thread::spawn(move || {
                    let mat = Mat::from_rows(vec![vec![t as u64 + 1, 2], vec![3, 4]]);
                    cache_put(&dir, &key, 25, &mat).unwrap();
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
        let got = cache_get(&dir, &key).unwrap();
        assert!(got.is_some(), "one valid entry must win");
        let _ = std::fs::remove_dir_all(&dir);
    }
}
