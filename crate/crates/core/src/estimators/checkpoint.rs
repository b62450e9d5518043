//! Model checkpoints.
//!
//! Layout, all integers and floats little-endian:
//!
//! | bytes | content |
//! |---|---|
//! | 8 | magic `DNNCKPT\0` |
//! | 4 | `u32` format version |
//! | 4 | `u32` header length `h` |
//! | h | UTF-8 JSON [`CheckpointHeader`] |
//! | 8 | `u64` parameter count `m` |
//! | 8m | `f64` parameters in vectorization order |

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{Activation, Architecture, ClassConstraints, NetworkParams};

pub const CHECKPOINT_MAGIC: [u8; 8] = *b"DNNCKPT\0";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub widths: Vec<usize>,
    pub activation: String,
    pub constraints: Option<ClassConstraints>,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub params: NetworkParams,
    pub constraints: Option<ClassConstraints>,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl Checkpoint {
    pub fn new(params: NetworkParams) -> Self {
        Self { params, constraints: None, metadata: BTreeMap::new() }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        write_checkpoint(self, &mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        read_checkpoint(BufReader::new(File::open(path)?))
    }
}

pub fn write_checkpoint(ckpt: &Checkpoint, mut out: impl Write) -> Result<()> {
    let arch = ckpt.params.arch();
    let header = CheckpointHeader {
        widths: arch.widths().to_vec(),
        activation: arch.activation().id().to_string(),
        constraints: ckpt.constraints,
        metadata: ckpt.metadata.clone(),
    };
    let json = serde_json::to_vec(&header)?;
    let header_len = u32::try_from(json.len()).map_err(|_| Error::Checkpoint("header too large".into()))?;
    out.write_all(&CHECKPOINT_MAGIC)?;
    out.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
    out.write_all(&header_len.to_le_bytes())?;
    out.write_all(&json)?;
    let theta = ckpt.params.theta();
    out.write_all(&(theta.len() as u64).to_le_bytes())?;
    for v in theta {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_array<const K: usize>(input: &mut impl Read, what: &str) -> Result<[u8; K]> {
    let mut buf = [0u8; K];
    input
        .read_exact(&mut buf)
        .map_err(|e| Error::Checkpoint(format!("truncated {what}: {e}")))?;
    Ok(buf)
}

pub fn read_checkpoint(mut input: impl Read) -> Result<Checkpoint> {
    if read_array::<8>(&mut input, "magic")? != CHECKPOINT_MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let version = u32::from_le_bytes(read_array(&mut input, "version")?);
    if version != CHECKPOINT_VERSION {
        return Err(Error::Checkpoint(format!("unsupported version {version}")));
    }
    let header_len = u32::from_le_bytes(read_array(&mut input, "header length")?) as usize;
    let mut json = vec![0u8; header_len];
    input
        .read_exact(&mut json)
        .map_err(|e| Error::Checkpoint(format!("truncated header: {e}")))?;
    let header: CheckpointHeader =
        serde_json::from_slice(&json).map_err(|e| Error::Checkpoint(format!("bad header: {e}")))?;
    let arch = Architecture::new(header.widths, Activation::from_id(&header.activation)?)?;
    let count = u64::from_le_bytes(read_array(&mut input, "parameter count")?) as usize;
    if count != arch.param_count() {
        return Err(Error::Checkpoint(format!(
            "{count} parameters stored for an architecture with {}",
            arch.param_count()
        )));
    }
    let mut theta = Vec::with_capacity(count);
    for _ in 0..count {
        theta.push(f64::from_le_bytes(read_array(&mut input, "parameters")?));
    }
    let mut rest = [0u8; 1];
    if input.read(&mut rest)? != 0 {
        return Err(Error::Checkpoint("trailing bytes after parameters".into()));
    }
    Ok(Checkpoint { params: NetworkParams::new(arch, theta)?, constraints: header.constraints, metadata: header.metadata })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        let arch = Architecture::new(vec![2, 3, 1], Activation::Tanh).unwrap();
        let theta: Vec<f64> = (0..arch.param_count()).map(|i| (i as f64 - 6.0) * 0.37).collect();
        let mut c = Checkpoint::new(NetworkParams::new(arch, theta).unwrap());
        c.constraints = Some(ClassConstraints::new(3, 5.0, 1.0, Some(9)).unwrap());
        c.metadata.insert("estimator".into(), "npdnn".into());
        c
    }

    #[test]
    fn round_trip() {
        let c = sample();
        let mut buf = Vec::new();
        write_checkpoint(&c, &mut buf).unwrap();
        assert_eq!(&buf[..8], b"DNNCKPT\0");
        assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 1);
        let back = read_checkpoint(&buf[..]).unwrap();
        assert_eq!(back, c);
        let n = c.params.theta().len();
        let tail = &buf[buf.len() - 8 * n - 8..];
        assert_eq!(u64::from_le_bytes(tail[..8].try_into().unwrap()), n as u64);
        assert_eq!(f64::from_le_bytes(tail[8..16].try_into().unwrap()), c.params.theta()[0]);
    }

    #[test]
    fn corrupt_inputs() {
        let mut buf = Vec::new();
        write_checkpoint(&sample(), &mut buf).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_checkpoint(&bad[..]), Err(Error::Checkpoint(_))));
        assert!(matches!(read_checkpoint(&buf[..buf.len() - 3]), Err(Error::Checkpoint(_))));
        let mut long = buf.clone();
        long.push(0);
        assert!(read_checkpoint(&long[..]).is_err());
        let mut version = buf;
        version[8] = 9;
        assert!(read_checkpoint(&version[..]).is_err());
    }
}
