//! Binary container for one recorded channel.
//!
//! Layout, all little-endian: magic `AETR`, version `u16`, channel id `u16`,
//! sample rate `f64` (Hz), start time `f64` (s), sample count `u64`, then
//! `f32` samples.

use crate::error::{Error, Result};
use crate::signal::TraceRecord;
use std::io::{Read, Write};
use std::path::Path;

pub const MAGIC: &[u8; 4] = b"AETR";
pub const VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub channel_id: u16,
    pub sample_rate_hz: f64,
    pub t0_s: f64,
    pub samples: Vec<f32>,
}

impl TraceFile {
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&self.channel_id.to_le_bytes())?;
        w.write_all(&self.sample_rate_hz.to_le_bytes())?;
        w.write_all(&self.t0_s.to_le_bytes())?;
        w.write_all(&(self.samples.len() as u64).to_le_bytes())?;
        for s in &self.samples {
            w.write_all(&s.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format(format!(
                "bad magic {:?}, expected {:?}",
                magic, MAGIC
            )));
        }
        let version = read_u16(&mut r)?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let channel_id = read_u16(&mut r)?;
        let sample_rate_hz = read_f64(&mut r)?;
        let t0_s = read_f64(&mut r)?;
        let count = read_u64(&mut r)?;
        let mut samples = Vec::with_capacity(count as usize);
        let mut buf = [0u8; 4];
        for _ in 0..count {
            r.read_exact(&mut buf)?;
            samples.push(f32::from_le_bytes(buf));
        }
        Ok(Self {
            channel_id,
            sample_rate_hz,
            t0_s,
            samples,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::fs::File::open(path.as_ref()).map_err(|e| {
            Error::Data(format!("cannot open {}: {e}", path.as_ref().display()))
        })?;
        Self::read_from(std::io::BufReader::new(f))
    }

    pub fn to_record(&self) -> TraceRecord {
        TraceRecord {
            channel_id: self.channel_id,
            sample_rate_hz: self.sample_rate_hz,
            t0_s: self.t0_s,
            samples: self.samples.iter().map(|&x| x as f64).collect(),
        }
    }

    pub fn from_record(rec: &TraceRecord) -> Self {
        Self {
            channel_id: rec.channel_id,
            sample_rate_hz: rec.sample_rate_hz,
            t0_s: rec.t0_s,
            samples: rec.samples.iter().map(|&x| x as f32).collect(),
        }
    }
}

fn read_u16(r: &mut impl Read) -> Result<u16> {
    let mut b = [0u8; 2];
    r.read_exact(&mut b)?;
    Ok(u16::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}
