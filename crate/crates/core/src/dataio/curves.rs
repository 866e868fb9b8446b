//! Curve files: CSV with `# key = value` metadata lines.
//!
//! ```text
//! # x_label = time
//! # x_unit = s
//! x,y,sigma
//! 0e0,1.5e-3,1e-5
//! ```
//!
//! The `sigma` column is optional. Numbers are written in shortest
//! round-trip exponent form, so write then read is the identity.

use std::path::Path;

use crate::error::{Error, Result};
use crate::SimCurve;

pub fn curve_to_string(curve: &SimCurve) -> String {
    let mut out = String::new();
    for (k, v) in &curve.meta {
        out.push_str(&format!("# {k} = {}\n", v.replace('\n', " ")));
    }
    let sigma = curve.sigma();
    out.push_str(if sigma.is_some() { "x,y,sigma\n" } else { "x,y\n" });
    for i in 0..curve.len() {
        out.push_str(&format!("{:e},{:e}", curve.x()[i], curve.y()[i]));
        if let Some(s) = sigma {
            out.push_str(&format!(",{:e}", s[i]));
        }
        out.push('\n');
    }
    out
}

pub fn write_curve(curve: &SimCurve, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, curve_to_string(curve)).map_err(|e| Error::io(path, e))
}

pub fn read_curve(path: impl AsRef<Path>) -> Result<SimCurve> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_curve(&text, path)
}

/// Parses curve text; `source` labels errors. Rows are numbered from 1 after
/// the header. A non-monotone abscissa is sorted with a warning.
pub fn parse_curve(text: &str, source: &Path) -> Result<SimCurve> {
    let err = |row: usize, message: String| Error::Curve {
        path: source.to_path_buf(),
        row,
        message,
    };
    let mut meta = Vec::new();
    for line in text.lines().map(str::trim).take_while(|l| l.starts_with('#') || l.is_empty()) {
        if let Some((k, v)) = line.trim_start_matches('#').split_once('=') {
            meta.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| err(0, e.to_string()))?.clone();
    let ncols = header.len();
    if !(2..=3).contains(&ncols) {
        return Err(err(0, format!("expected 2 or 3 columns (x, y[, sigma]), found {ncols}")));
    }
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); ncols];
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| err(row, e.to_string()))?;
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell
                .parse()
                .map_err(|_| err(row, format!("column `{}`: `{cell}` is not a number", &header[c])))?;
            if !v.is_finite() {
                return Err(err(row, format!("column `{}`: non-finite value `{cell}`", &header[c])));
            }
            cols[c].push(v);
        }
    }
    let mut order: Vec<usize> = (0..cols[0].len()).collect();
    if cols[0].windows(2).any(|w| !(w[1] > w[0])) && cols[0].windows(2).any(|w| !(w[1] < w[0])) {
        log::warn!("{}: abscissa is not monotone; sorting rows", source.display());
        order.sort_by(|&a, &b| cols[0][a].total_cmp(&cols[0][b]));
        if let Some(w) = order.windows(2).find(|w| cols[0][w[0]] == cols[0][w[1]]) {
            return Err(err(w[1] + 1, format!("duplicate abscissa {:e}", cols[0][w[1]])));
        }
    }
    let pick = |c: &Vec<f64>| order.iter().map(|&i| c[i]).collect::<Vec<f64>>();
    let sigma = (ncols == 3).then(|| pick(&cols[2]));
    let mut curve = SimCurve::with_sigma(pick(&cols[0]), pick(&cols[1]), sigma).map_err(|e| err(0, e.to_string()))?;
    for (k, v) in meta {
        curve.meta.insert(k, v);
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn src() -> &'static Path {
        Path::new("t.csv")
    }

    #[test]
    fn three_point_round_trip() {
        let c = SimCurve::with_sigma(vec![0.0, 1e-9, 2.5e-9], vec![1.0 / 3.0, -2e-300, 7.0], Some(vec![0.1, 0.2, 0.3]))
            .unwrap()
            .labeled("time", "s", "rate", "1/s")
            .with_meta("note", "a, b");
        let text = curve_to_string(&c);
        assert_eq!(parse_curve(&text, src()).unwrap(), c);
        let plain = SimCurve::new(vec![3.0, 2.0, 1.0], vec![0.1, 0.2, 0.3]).unwrap();
        assert_eq!(parse_curve(&curve_to_string(&plain), src()).unwrap(), plain);
    }

    #[test]
    fn nan_names_row() {
        let e = parse_curve("x,y\n1,2\n2,NaN\n", src()).unwrap_err();
        assert!(matches!(e, Error::Curve { row: 2, .. }), "{e}");
        let e = parse_curve("x,y\n1,2\n2,abc\n", src()).unwrap_err();
        assert!(matches!(e, Error::Curve { row: 2, .. }), "{e}");
    }

    #[test]
    fn ragged_rows() {
        assert!(matches!(parse_curve("x,y\n1,2\n2\n", src()), Err(Error::Curve { .. })));
        assert!(parse_curve("x\n1\n", src()).is_err());
    }

    #[test]
    fn unsorted_is_sorted() {
        let c = parse_curve("x,y\n2,20\n1,10\n3,30\n", src()).unwrap();
        assert_eq!(c.x(), &[1.0, 2.0, 3.0]);
        assert_eq!(c.y(), &[10.0, 20.0, 30.0]);
        assert!(parse_curve("x,y\n2,20\n1,10\n2,30\n", src()).is_err());
    }
}
