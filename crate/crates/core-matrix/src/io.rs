//! On-disk formats.
//!
//! Text: line 1 `PSDPROBE 1`, line 2 `n=<int>`, line 3 `bound=<decimal>`,
//! then n(n+1)/2 whitespace-separated decimals in row-major lower-triangle
//! order. Binary: 8-byte magic `PSDPRB01`, little-endian u64 n, f64 bound,
//! then f64 triangle. Round trips are bit-exact on the stored triangle.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;

use crate::{MatrixError, SymmetricMatrix};

pub const TEXT_MAGIC: &str = "PSDPROBE 1";
pub const BINARY_MAGIC: &[u8; 8] = b"PSDPRB01";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Binary,
}

pub fn write_matrix(m: &SymmetricMatrix, path: &Path, format: Format) -> Result<(), MatrixError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix_to(m, &mut w, format)
}

pub fn write_matrix_to(
    m: &SymmetricMatrix,
    w: &mut impl Write,
    format: Format,
) -> Result<(), MatrixError> {
    match format {
        Format::Text => {
            writeln!(w, "{}", TEXT_MAGIC)?;
            writeln!(w, "n={}", m.n())?;
            writeln!(w, "bound={}", m.entry_bound())?;
            // one stored row per line; Display for f64 is shortest round-trip
            let tri = m.triangle();
            let mut pos = 0;
            for i in 0..m.n() {
                let row = &tri[pos..pos + i + 1];
                pos += i + 1;
                let line: Vec<String> = row.iter().map(|v| format!("{}", v)).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
        }
        Format::Binary => {
            w.write_all(BINARY_MAGIC)?;
            w.write_all(&(m.n() as u64).to_le_bytes())?;
            w.write_all(&m.entry_bound().to_le_bytes())?;
            for &v in m.triangle() {
                w.write_all(&v.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

/// Reads either format, sniffing the 8-byte magic.
pub fn read_matrix(path: &Path) -> Result<SymmetricMatrix, MatrixError> {
    let mut f = File::open(path)?;
    let mut magic = [0u8; 8];
    let got = f.read(&mut magic)?;
    f.seek(SeekFrom::Start(0))?;
    if got == 8 && &magic == BINARY_MAGIC {
        read_binary(&mut f)
    } else {
        read_matrix_from(&mut BufReader::new(f))
    }
}

/// Reads the text format from a buffered reader.
pub fn read_matrix_from(r: &mut impl BufRead) -> Result<SymmetricMatrix, MatrixError> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| MatrixError::MalformedHeader("empty input".into()))??;
    if header.trim() != TEXT_MAGIC {
        return Err(MatrixError::MalformedHeader(format!(
            "expected `{}`, got `{}`",
            TEXT_MAGIC,
            header.trim()
        )));
    }
    let n_line = lines
        .next()
        .ok_or_else(|| MatrixError::MalformedHeader("missing n= line".into()))??;
    let n: usize = n_line
        .trim()
        .strip_prefix("n=")
        .ok_or_else(|| MatrixError::MalformedHeader("missing n= prefix".into()))?
        .parse()
        .map_err(|e| MatrixError::MalformedHeader(format!("bad n: {}", e)))?;
    if n == 0 {
        return Err(MatrixError::ZeroDimension);
    }
    let b_line = lines
        .next()
        .ok_or_else(|| MatrixError::MalformedHeader("missing bound= line".into()))??;
    let bound: f64 = b_line
        .trim()
        .strip_prefix("bound=")
        .ok_or_else(|| MatrixError::MalformedHeader("missing bound= prefix".into()))?
        .parse()
        .map_err(|e| MatrixError::MalformedHeader(format!("bad bound: {}", e)))?;
    let want = n * (n + 1) / 2;
    let mut tri = Vec::with_capacity(want);
    for line in lines {
        let line = line?;
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|e| MatrixError::MalformedHeader(format!("bad entry `{}`: {}", tok, e)))?;
            tri.push(v);
        }
        if tri.len() > want {
            break;
        }
    }
    if tri.len() != want {
        return Err(MatrixError::DimensionMismatch(format!(
            "expected {} triangle entries, got {}",
            want,
            tri.len()
        )));
    }
    SymmetricMatrix::from_triangle(n, bound, tri)
}

fn read_binary(r: &mut impl Read) -> Result<SymmetricMatrix, MatrixError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != BINARY_MAGIC {
        return Err(MatrixError::MalformedHeader("bad binary magic".into()));
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    if n == 0 {
        return Err(MatrixError::ZeroDimension);
    }
    r.read_exact(&mut b8)?;
    let bound = f64::from_le_bytes(b8);
    let want = n * (n + 1) / 2;
    let mut tri = Vec::with_capacity(want);
    for _ in 0..want {
        r.read_exact(&mut b8)?;
        tri.push(f64::from_le_bytes(b8));
    }
    SymmetricMatrix::from_triangle(n, bound, tri)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn roundtrip_text(m: &SymmetricMatrix) -> SymmetricMatrix {
        let mut buf = Vec::new();
        write_matrix_to(m, &mut buf, Format::Text).unwrap();
        read_matrix_from(&mut Cursor::new(buf)).unwrap()
    }

    #[test]
    fn text_roundtrip_identity() {
        let m = SymmetricMatrix::identity(2);
        assert_eq!(roundtrip_text(&m), m);
    }

    #[test]
    fn text_roundtrip_awkward_values() {
        let m = SymmetricMatrix::from_triangle(
            2,
            1.0,
            vec![0.1 + 0.2, -1.0 / 3.0, f64::MIN_POSITIVE],
        )
        .unwrap();
        let r = roundtrip_text(&m);
        assert_eq!(r.triangle(), m.triangle());
    }

    #[test]
    fn binary_roundtrip() {
        let m = SymmetricMatrix::from_triangle(3, 2.0, vec![1.0, -0.5, 2.0, 0.1, 0.0, -2.0])
            .unwrap();
        let mut buf = Vec::new();
        write_matrix_to(&m, &mut buf, Format::Binary).unwrap();
        let r = read_binary(&mut Cursor::new(buf)).unwrap();
        assert_eq!(r, m);
    }

    #[test]
    fn zero_dimension_rejected() {
        let input = "PSDPROBE 1\nn=0\nbound=1\n";
        assert!(read_matrix_from(&mut Cursor::new(input.as_bytes())).is_err());
    }

    #[test]
    fn bound_violation_rejected() {
        let input = "PSDPROBE 1\nn=1\nbound=1\n1.5\n";
        let err = read_matrix_from(&mut Cursor::new(input.as_bytes())).unwrap_err();
        assert!(matches!(err, MatrixError::BoundViolation { .. }));
    }

    #[test]
    fn bad_magic_rejected() {
        let input = "NOTAMAGIC\nn=1\nbound=1\n0\n";
        assert!(read_matrix_from(&mut Cursor::new(input.as_bytes())).is_err());
    }

    #[test]
    fn file_sniffing() {
        let dir = tempfile::tempdir().unwrap();
        let m = SymmetricMatrix::identity(4);
        for (name, fmt) in [("t.psd", Format::Text), ("b.psd", Format::Binary)] {
            let p = dir.path().join(name);
            write_matrix(&m, &p, fmt).unwrap();
            assert_eq!(read_matrix(&p).unwrap(), m);
        }
    }
}
