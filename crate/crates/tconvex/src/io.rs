//! File formats: point-cloud CSV (one row per point, `%.17g` numbers) and
//! JSON documents for the other artifacts.

use crate::error::Error;
use crate::geom::PointCloud;
use crate::Result;
use std::io::{BufRead, Write};
use std::path::Path;

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros stripped,
/// scientific notation outside the fixed-notation exponent window. 17 digits
/// make the decimal round-trip exact for binary doubles.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp_str) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp_str.parse().expect("exponent");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if neg { "-" } else { "" };
    if exp < -4 || exp >= 17 {
        let frac = digits[1..].trim_end_matches('0');
        let mantissa = if frac.is_empty() {
            digits[..1].to_string()
        } else {
            format!("{}.{}", &digits[..1], frac)
        };
        format!(
            "{sign}{mantissa}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else if exp >= 0 {
        let k = (exp + 1) as usize;
        let int_part = &digits[..k];
        let frac = digits[k..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        let all = format!("{zeros}{digits}");
        let frac = all.trim_end_matches('0');
        format!("{sign}0.{frac}")
    }
}

/// Writes a cloud as CSV, one row per point, `%.17g` cells, no header unless
/// requested.
pub fn write_cloud_csv(path: &Path, cloud: &PointCloud, header: bool) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_cloud_csv_to(&mut out, cloud, header)
}

pub fn write_cloud_csv_to(out: &mut impl Write, cloud: &PointCloud, header: bool) -> Result<()> {
    if header {
        let names: Vec<String> = (0..cloud.dim()).map(|j| format!("x{j}")).collect();
        writeln!(out, "{}", names.join(","))?;
    }
    for p in cloud.iter() {
        let cells: Vec<String> = p.iter().map(|&x| fmt_g17(x)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Reads a cloud from CSV. A non-numeric first row is treated as a header.
/// Parse failures report the 1-based row number.
pub fn read_cloud_csv(path: &Path) -> Result<PointCloud> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        let row_number = line_no + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = line
            .split(',')
            .map(|cell| cell.trim().parse::<f64>())
            .collect();
        match parsed {
            Ok(row) => {
                if let Some(first) = rows.first() {
                    if row.len() != first.len() {
                        return Err(Error::Parse {
                            row: row_number,
                            msg: format!(
                                "expected {} columns, found {}",
                                first.len(),
                                row.len()
                            ),
                        });
                    }
                }
                rows.push(row);
            }
            Err(e) => {
                if line_no == 0 {
                    continue; // header row
                }
                return Err(Error::Parse {
                    row: row_number,
                    msg: e.to_string(),
                });
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("CSV contains no data rows"));
    }
    PointCloud::from_rows(&rows)
}

/// Compact single-line JSON plus a trailing newline; byte-stable for golden
/// comparisons.
pub fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_formats_simple_values() {
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(-1.0), "-1");
        assert_eq!(fmt_g17(123.0), "123");
        assert_eq!(fmt_g17(0.5), "0.5");
        assert_eq!(fmt_g17(0.0001), "0.0001");
        // 1e-5 is not exactly representable; C's %.17g prints the full digits.
        assert_eq!(fmt_g17(0.00001), "1.0000000000000001e-05");
        assert_eq!(fmt_g17(1e17), "1e+17");
        assert_eq!(fmt_g17(1e16), "10000000000000000");
    }

    #[test]
    fn g17_round_trips_awkward_doubles() {
        let samples = [
            std::f64::consts::PI,
            1.0 / 3.0,
            f64::MIN_POSITIVE,
            f64::MAX,
            2f64.powi(-1074),
            -9.87654321e-200,
            6.02214076e23,
        ];
        for &x in &samples {
            let s = fmt_g17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "value {x} via {s}");
        }
    }

    #[test]
    fn g17_round_trips_a_pseudorandom_sweep() {
        let mut state = 0x12345678u64;
        for _ in 0..20_000 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let x = f64::from_bits(state);
            if !x.is_finite() {
                continue;
            }
            let back: f64 = fmt_g17(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn csv_round_trip_with_and_without_header() {
        let dir = std::env::temp_dir().join(format!("tconvex-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cloud = PointCloud::from_rows(&[
            vec![std::f64::consts::PI, -0.25],
            vec![1e-11, 3.0],
        ])
        .unwrap();
        for header in [false, true] {
            let path = dir.join(format!("cloud-{header}.csv"));
            write_cloud_csv(&path, &cloud, header).unwrap();
            let back = read_cloud_csv(&path).unwrap();
            assert_eq!(back, cloud);
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn csv_parse_error_carries_row_number() {
        let dir = std::env::temp_dir().join(format!("tconvex-io-err-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        std::fs::write(&path, "1.0,2.0\n3.0,oops\n").unwrap();
        match read_cloud_csv(&path) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        std::fs::remove_dir_all(&dir).ok();
    }
}
