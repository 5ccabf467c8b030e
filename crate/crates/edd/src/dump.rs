//! Binary cache for condensed distances.
//!
//! Layout: `N` as a little-endian `u64`, then the N(N−1)/2 distances as
//! little-endian `f64`, in condensed pair order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use edd_core::distances::n_pairs;
use edd_core::CondensedDistances;

use crate::error::{Error, Result};

pub fn write_distances<W: Write>(mut out: W, distances: &CondensedDistances) -> std::io::Result<()> {
    out.write_all(&(distances.n_points() as u64).to_le_bytes())?;
    for v in distances.values() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()
}

pub fn read_distances<R: Read>(mut input: R) -> Result<CondensedDistances> {
    let mut word = [0u8; 8];
    input
        .read_exact(&mut word)
        .map_err(|_| Error::BadDump("missing point count".into()))?;
    let n = usize::try_from(u64::from_le_bytes(word))
        .map_err(|_| Error::BadDump("point count overflows".into()))?;
    let expected = n
        .checked_mul(n.saturating_sub(1))
        .map(|x| x / 2)
        .ok_or_else(|| Error::BadDump("point count overflows".into()))?;
    let mut values = Vec::with_capacity(expected.min(1 << 24));
    for k in 0..expected {
        input
            .read_exact(&mut word)
            .map_err(|_| Error::BadDump(format!("truncated after {k} of {expected} distances")))?;
        values.push(f64::from_le_bytes(word));
    }
    if input.read(&mut word).map_err(|e| Error::io("<dump>", e))? != 0 {
        return Err(Error::BadDump("trailing bytes".into()));
    }
    debug_assert_eq!(values.len(), n_pairs(n));
    Ok(CondensedDistances::from_values(values, n)?)
}

pub fn save_distances(path: impl AsRef<Path>, distances: &CondensedDistances) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_distances(BufWriter::new(file), distances).map_err(|e| Error::io(path, e))
}

pub fn load_distances(path: impl AsRef<Path>) -> Result<CondensedDistances> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_distances(BufReader::new(file))
}
