use std::io::{self, Write};

use super::GridRaster;

pub const PGM_NEITHER: u8 = 0;
pub const PGM_UPPER_ONLY: u8 = 128;
pub const PGM_BOTH: u8 = 255;

fn flag(b: bool) -> u8 {
    u8::from(b)
}

/// One row per cell in scan order, with a column per named set.
pub fn write_csv<W: Write>(raster: &GridRaster, mut w: W) -> io::Result<()> {
    write!(w, "lambda_re,lambda_im,in_lower,in_upper")?;
    if let Some(first) = raster.verdicts.first() {
        for (name, _) in &first.delta_detail {
            write!(w, ",{name}")?;
        }
    }
    writeln!(w)?;
    for v in &raster.verdicts {
        write!(w, "{:.12},{:.12},{},{}", v.lambda.re, v.lambda.im, flag(v.in_lower), flag(v.in_upper))?;
        for (_, member) in &v.delta_detail {
            write!(w, ",{}", flag(*member))?;
        }
        writeln!(w)?;
    }
    w.flush()
}

/// Binary greymap, top row at the largest imaginary part.
pub fn write_pgm<W: Write>(raster: &GridRaster, mut w: W) -> io::Result<()> {
    let (nx, ny) = raster.resolution;
    write!(w, "P5\n{nx} {ny}\n255\n")?;
    let mut row = Vec::with_capacity(nx);
    for iy in (0..ny).rev() {
        row.clear();
        row.extend((0..nx).map(|ix| {
            let v = raster.at(ix, iy);
            match (v.in_lower, v.in_upper) {
                (true, _) => PGM_BOTH,
                (false, true) => PGM_UPPER_ONLY,
                (false, false) => PGM_NEITHER,
            }
        }));
        w.write_all(&row)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::DiagonalTuple;
    use crate::operators::ComplexMatrix;
    use crate::spectra::{scan_grid, Region, SpectralFamily};

    fn raster() -> GridRaster {
        let d = DiagonalTuple::dense(vec![
            ComplexMatrix::real(&[&[0.0, 0.0], &[0.0, 1.0]]),
            ComplexMatrix::real(&[&[0.0, 0.0], &[0.0, 2.0]]),
        ])
        .unwrap();
        scan_grid(&d, SpectralFamily::LeftSpec, Region::new(-0.5, 1.5, -0.5, 0.5).unwrap(), (2, 1), 1e-9).unwrap()
    }

    #[test]
    fn pgm_layout() {
        let mut buf = Vec::new();
        write_pgm(&raster(), &mut buf).unwrap();
        assert_eq!(&buf[..buf.len() - 2], b"P5\n2 1\n255\n");
        // Centers at 0 and 1, both eigenvalues of the leading entry.
        assert_eq!(&buf[buf.len() - 2..], &[PGM_BOTH, PGM_BOTH]);
    }

    #[test]
    fn csv_header_and_rows() {
        let mut buf = Vec::new();
        write_csv(&raster(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "lambda_re,lambda_im,in_lower,in_upper,sigma_l(D1),delta_2,delta'_2,delta''_2");
        assert_eq!(lines[1], "0.000000000000,0.000000000000,1,1,1,0,0,0");
        assert_eq!(lines.len(), 3);
    }
}
