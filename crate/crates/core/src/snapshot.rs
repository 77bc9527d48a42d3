//! RSFD binary snapshots of field pairs.
//!
//! Layout (little-endian): magic `"RSFD"`, version `u32 = 1`, `n_x u32`,
//! `n_y u32`, representation tag `u8` (0 = physical, 1 = mixed), box
//! half-length `L f64`, time `f64`, then two blocks (first field, second
//! field) of `n_x · n_y` complex samples as `(re f64, im f64)` pairs,
//! row-major in x-major order. Mixed rows are ordered by increasing ξ and
//! columns by increasing mode p; physical rows by increasing x.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::field::{ProductField, Representation};
use crate::grid::{LineGrid, TorusGrid};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"RSFD";
const VERSION: u32 = 1;

/// A pair of fields sharing one grid and representation at a common time.
#[derive(Debug, Clone)]
pub struct FieldPairSnapshot {
    pub first: ProductField,
    pub second: ProductField,
    pub time: f64,
}

impl FieldPairSnapshot {
    pub fn new(first: ProductField, second: ProductField, time: f64) -> Result<Self> {
        first.check_same_grid(&second)?;
        if first.representation() != second.representation() {
            return Err(Error::Format(
                "snapshot fields must share a representation".into(),
            ));
        }
        Ok(Self {
            first,
            second,
            time,
        })
    }
}

fn write_block(out: &mut impl Write, field: &ProductField) -> Result<()> {
    for c in field.data() {
        out.write_all(&c.re.to_le_bytes())?;
        out.write_all(&c.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_rsfd(path: &Path, snapshot: &FieldPairSnapshot) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    let line = snapshot.first.line();
    let torus = snapshot.first.torus();
    out.write_all(&(line.n_x() as u32).to_le_bytes())?;
    out.write_all(&(torus.n_y() as u32).to_le_bytes())?;
    let tag: u8 = match snapshot.first.representation() {
        Representation::Physical => 0,
        Representation::Mixed => 1,
    };
    out.write_all(&[tag])?;
    out.write_all(&line.half_length().to_le_bytes())?;
    out.write_all(&snapshot.time.to_le_bytes())?;
    write_block(&mut out, &snapshot.first)?;
    write_block(&mut out, &snapshot.second)?;
    out.flush()?;
    Ok(())
}

fn read_exact<const N: usize>(input: &mut impl Read) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    input.read_exact(&mut buf)?;
    Ok(buf)
}

fn read_block(input: &mut impl Read, len: usize) -> Result<Vec<Complex64>> {
    let mut data = Vec::with_capacity(len);
    for _ in 0..len {
        let re = f64::from_le_bytes(read_exact::<8>(input)?);
        let im = f64::from_le_bytes(read_exact::<8>(input)?);
        data.push(Complex64::new(re, im));
    }
    Ok(data)
}

pub fn read_rsfd(path: &Path) -> Result<FieldPairSnapshot> {
    let mut input = std::io::BufReader::new(std::fs::File::open(path)?);
    let magic = read_exact::<4>(&mut input)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let version = u32::from_le_bytes(read_exact::<4>(&mut input)?);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n_x = u32::from_le_bytes(read_exact::<4>(&mut input)?) as usize;
    let n_y = u32::from_le_bytes(read_exact::<4>(&mut input)?) as usize;
    let tag = read_exact::<1>(&mut input)?[0];
    let repr = match tag {
        0 => Representation::Physical,
        1 => Representation::Mixed,
        other => return Err(Error::Format(format!("unknown representation tag {other}"))),
    };
    let half_length = f64::from_le_bytes(read_exact::<8>(&mut input)?);
    let time = f64::from_le_bytes(read_exact::<8>(&mut input)?);
    if n_y % 2 == 0 {
        return Err(Error::Format(format!("n_y must be odd, got {n_y}")));
    }
    let line = LineGrid::new(half_length, n_x)
        .map_err(|e| Error::Format(format!("invalid line grid: {e}")))?;
    let torus = TorusGrid::new((n_y as i32 - 1) / 2)
        .map_err(|e| Error::Format(format!("invalid torus grid: {e}")))?;
    let first = ProductField::from_data(line, torus, repr, read_block(&mut input, n_x * n_y)?)?;
    let second = ProductField::from_data(line, torus, repr, read_block(&mut input, n_x * n_y)?)?;
    let mut trailing = [0u8; 1];
    if input.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after field blocks".into()));
    }
    FieldPairSnapshot::new(first, second, time)
}
