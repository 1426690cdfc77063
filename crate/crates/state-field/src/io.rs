//! Snapshot serialization for spinor fields.
//!
//! Binary layout (all little-endian):
//! magic `EDSPIN1` (7 bytes), `dim` as u32, `points` as 3×u64,
//! `extents` as 3×f64, `spacing` as 3×f64, `time` as f64, then per lattice
//! point in row-major order the four doubles Re ψ₊, Im ψ₊, Re ψ₋, Im ψ₋.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::SpinorField;
use crate::lattice::Lattice;
use crate::StateError;

pub const SNAPSHOT_MAGIC: &[u8; 7] = b"EDSPIN1";

/// Largest lattice the JSON exporter will serialize.
pub const JSON_MAX_POINTS: usize = 4096;

pub fn write_snapshot(field: &SpinorField, mut out: impl Write) -> Result<(), StateError> {
    let lat = field.lattice();
    out.write_all(SNAPSHOT_MAGIC)?;
    out.write_all(&(lat.dim() as u32).to_le_bytes())?;
    for p in lat.points() {
        out.write_all(&(p as u64).to_le_bytes())?;
    }
    for e in lat.extents() {
        out.write_all(&e.to_le_bytes())?;
    }
    for h in lat.spacing() {
        out.write_all(&h.to_le_bytes())?;
    }
    out.write_all(&field.time.to_le_bytes())?;
    for i in 0..field.n_points() {
        out.write_all(&field.psi_plus[i].re.to_le_bytes())?;
        out.write_all(&field.psi_plus[i].im.to_le_bytes())?;
        out.write_all(&field.psi_minus[i].re.to_le_bytes())?;
        out.write_all(&field.psi_minus[i].im.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_snapshot_file(field: &SpinorField, path: impl AsRef<Path>) -> Result<(), StateError> {
    let file = std::fs::File::create(path)?;
    write_snapshot(field, std::io::BufWriter::new(file))
}

fn read_u32(inp: &mut impl Read) -> Result<u32, StateError> {
    let mut buf = [0u8; 4];
    inp.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64(inp: &mut impl Read) -> Result<u64, StateError> {
    let mut buf = [0u8; 8];
    inp.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64(inp: &mut impl Read) -> Result<f64, StateError> {
    let mut buf = [0u8; 8];
    inp.read_exact(&mut buf)?;
    Ok(f64::from_le_bytes(buf))
}

pub fn read_snapshot(mut inp: impl Read) -> Result<SpinorField, StateError> {
    let mut magic = [0u8; 7];
    inp.read_exact(&mut magic)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(StateError::BadSnapshot("bad magic".into()));
    }
    let dim = read_u32(&mut inp)? as usize;
    if dim == 0 || dim > 3 {
        return Err(StateError::BadSnapshot(format!("dimension {dim} out of range")));
    }
    let mut points = [0usize; 3];
    for p in points.iter_mut() {
        let v = read_u64(&mut inp)?;
        if v > u64::from(u32::MAX) {
            return Err(StateError::BadSnapshot("point count overflows".into()));
        }
        *p = v as usize;
    }
    let mut extents = [0.0f64; 3];
    for e in extents.iter_mut() {
        *e = read_f64(&mut inp)?;
    }
    let mut spacing = [0.0f64; 3];
    for h in spacing.iter_mut() {
        *h = read_f64(&mut inp)?;
    }
    let time = read_f64(&mut inp)?;
    let lattice = Lattice::centered(dim, &points[..dim], &extents[..dim])?;
    for a in 0..dim {
        let expect = lattice.spacing()[a];
        if (spacing[a] - expect).abs() > 1e-12 * expect.max(1.0) {
            return Err(StateError::BadSnapshot(format!(
                "stored spacing {} disagrees with {} points over extent {}",
                spacing[a], points[a], extents[a]
            )));
        }
    }
    let n = lattice.n_total();
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for _ in 0..n {
        let pr = read_f64(&mut inp)?;
        let pi = read_f64(&mut inp)?;
        let mr = read_f64(&mut inp)?;
        let mi = read_f64(&mut inp)?;
        plus.push(Complex64::new(pr, pi));
        minus.push(Complex64::new(mr, mi));
    }
    let mut field = SpinorField::from_amplitudes(lattice, plus, minus)?;
    field.time = time;
    Ok(field)
}

pub fn read_snapshot_file(path: impl AsRef<Path>) -> Result<SpinorField, StateError> {
    let file = std::fs::File::open(path)?;
    read_snapshot(std::io::BufReader::new(file))
}

/// Human-inspectable export for small lattices.
#[derive(Debug, Serialize, Deserialize)]
pub struct JsonSnapshot {
    pub lattice: Lattice,
    pub time: f64,
    /// `[re, im]` pairs in row-major order.
    pub psi_plus: Vec<[f64; 2]>,
    pub psi_minus: Vec<[f64; 2]>,
}

pub fn to_json(field: &SpinorField) -> Result<String, StateError> {
    let n = field.n_points();
    if n > JSON_MAX_POINTS {
        return Err(StateError::LatticeTooLarge { points: n, max: JSON_MAX_POINTS });
    }
    let snap = JsonSnapshot {
        lattice: field.lattice().clone(),
        time: field.time,
        psi_plus: field.psi_plus.iter().map(|c| [c.re, c.im]).collect(),
        psi_minus: field.psi_minus.iter().map(|c| [c.re, c.im]).collect(),
    };
    serde_json::to_string_pretty(&snap).map_err(|e| StateError::BadSnapshot(e.to_string()))
}

pub fn from_json(text: &str) -> Result<SpinorField, StateError> {
    let snap: JsonSnapshot =
        serde_json::from_str(text).map_err(|e| StateError::BadSnapshot(e.to_string()))?;
    let plus: Vec<Complex64> = snap.psi_plus.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    let minus: Vec<Complex64> = snap.psi_minus.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    let mut field = SpinorField::from_amplitudes(snap.lattice, plus, minus)?;
    field.time = snap.time;
    Ok(field)
}
