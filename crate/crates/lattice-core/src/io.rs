//! On-disk formats for tables and vectors.
//!
//! Binary layout, shared by both kinds:
//!
//! ```text
//! magic   4 bytes   "MOTB" (masked-output table) or "HIVB" (dividends)
//! version u16 LE    currently 1
//! n       u8        variable count, 1..=24
//! values  2^n x f64 LE, in bitmask order
//! ```
//!
//! A CSV debug form (`mask,value` with a header row) is emitted next to
//! the binary when requested; the binary is the interchange format.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{LatticeError, Result};
use crate::mask::validate_var_count;
use crate::table::{InteractionVector, MaskedOutputTable};

pub const TABLE_MAGIC: [u8; 4] = *b"MOTB";
pub const VECTOR_MAGIC: [u8; 4] = *b"HIVB";
pub const FORMAT_VERSION: u16 = 1;

fn write_payload(w: &mut impl Write, magic: [u8; 4], n: u8, values: &[f64]) -> Result<()> {
    w.write_all(&magic)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&[n])?;
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_payload(r: &mut impl Read, magic: [u8; 4]) -> Result<(u8, Vec<f64>)> {
    let mut found = [0u8; 4];
    r.read_exact(&mut found)?;
    if found != magic {
        return Err(LatticeError::BadMagic {
            expected: magic,
            found,
        });
    }
    let mut version = [0u8; 2];
    r.read_exact(&mut version)?;
    let version = u16::from_le_bytes(version);
    if version != FORMAT_VERSION {
        return Err(LatticeError::UnsupportedVersion(version));
    }
    let mut n = [0u8; 1];
    r.read_exact(&mut n)?;
    let n = n[0];
    let len = validate_var_count(n as usize)?;

    let mut values = Vec::with_capacity(len);
    let mut buf = [0u8; 8];
    for _ in 0..len {
        r.read_exact(&mut buf)?;
        values.push(f64::from_le_bytes(buf));
    }
    // The payload is fixed-size; anything after it is corruption.
    if r.read(&mut buf[..1])? != 0 {
        return Err(LatticeError::TrailingData { expected: len });
    }
    Ok((n, values))
}

pub fn write_table(w: &mut impl Write, table: &MaskedOutputTable) -> Result<()> {
    write_payload(w, TABLE_MAGIC, table.n(), table.values())
}

pub fn read_table(r: &mut impl Read) -> Result<MaskedOutputTable> {
    let (n, values) = read_payload(r, TABLE_MAGIC)?;
    MaskedOutputTable::new(n, values)
}

pub fn write_vector(w: &mut impl Write, iv: &InteractionVector) -> Result<()> {
    write_payload(w, VECTOR_MAGIC, iv.n(), iv.dividends())
}

pub fn read_vector(r: &mut impl Read) -> Result<InteractionVector> {
    let (n, values) = read_payload(r, VECTOR_MAGIC)?;
    InteractionVector::new(n, values)
}

pub fn write_table_file(path: &Path, table: &MaskedOutputTable) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_table(&mut w, table)?;
    w.flush()?;
    Ok(())
}

pub fn read_table_file(path: &Path) -> Result<MaskedOutputTable> {
    read_table(&mut BufReader::new(File::open(path)?))
}

pub fn write_vector_file(path: &Path, iv: &InteractionVector) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_vector(&mut w, iv)?;
    w.flush()?;
    Ok(())
}

pub fn read_vector_file(path: &Path) -> Result<InteractionVector> {
    read_vector(&mut BufReader::new(File::open(path)?))
}

fn write_csv(w: &mut impl Write, values: &[f64]) -> Result<()> {
    writeln!(w, "mask,value")?;
    for (mask, v) in values.iter().enumerate() {
        writeln!(w, "{mask},{v}")?;
    }
    Ok(())
}

pub fn write_table_csv(w: &mut impl Write, table: &MaskedOutputTable) -> Result<()> {
    write_csv(w, table.values())
}

pub fn write_vector_csv(w: &mut impl Write, iv: &InteractionVector) -> Result<()> {
    write_csv(w, iv.dividends())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        let t = MaskedOutputTable::new(3, (0..8).map(f64::from).collect()).unwrap();
        let mut buf = Vec::new();
        write_table(&mut buf, &t).unwrap();
        assert_eq!(&buf[0..4], b"MOTB");
        assert_eq!(buf.len(), 4 + 2 + 1 + 8 * 8);
        let back = read_table(&mut buf.as_slice()).unwrap();
        assert_eq!(back, t);

        let iv = InteractionVector::new(2, vec![0.0, -1.5, 2.25, 1e-300]).unwrap();
        let mut buf = Vec::new();
        write_vector(&mut buf, &iv).unwrap();
        assert_eq!(&buf[0..4], b"HIVB");
        assert_eq!(read_vector(&mut buf.as_slice()).unwrap(), iv);
    }

    #[test]
    fn rejects_wrong_magic_and_version() {
        let iv = InteractionVector::new(1, vec![1.0, 2.0]).unwrap();
        let mut buf = Vec::new();
        write_vector(&mut buf, &iv).unwrap();
        assert!(matches!(
            read_table(&mut buf.as_slice()),
            Err(LatticeError::BadMagic { .. })
        ));

        let mut tampered = buf.clone();
        tampered[4] = 9;
        assert!(matches!(
            read_vector(&mut tampered.as_slice()),
            Err(LatticeError::UnsupportedVersion(9))
        ));
    }

    #[test]
    fn rejects_truncation_and_trailing_bytes() {
        let t = MaskedOutputTable::new(2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let mut buf = Vec::new();
        write_table(&mut buf, &t).unwrap();

        let truncated = &buf[..buf.len() - 3];
        assert!(read_table(&mut &truncated[..]).is_err());

        let mut extended = buf.clone();
        extended.push(0);
        assert!(matches!(
            read_table(&mut extended.as_slice()),
            Err(LatticeError::TrailingData { expected: 4 })
        ));
    }

    #[test]
    fn csv_debug_form() {
        let t = MaskedOutputTable::new(1, vec![0.5, -2.0]).unwrap();
        let mut buf = Vec::new();
        write_table_csv(&mut buf, &t).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "mask,value\n0,0.5\n1,-2\n");
    }
}
