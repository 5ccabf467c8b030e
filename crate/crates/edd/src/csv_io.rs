//! CSV ingestion and export of point clouds.
//!
//! Comma-separated, one point per row. The first row is a header when any of
//! its feature cells fails to parse as a finite number. An optional label
//! column is selected by header name, or by 0-based column index; its values
//! are interned into class ids in first-appearance order.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use edd_core::{Dataset, Labels};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvData {
    pub dataset: Dataset,
    pub labels: Option<Labels>,
    /// Names of the feature columns, when the file had a header.
    pub header: Option<Vec<String>>,
}

fn parse_finite(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&str>) -> Result<CsvData> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, label_column, path)
}

/// Parses CSV from any reader; `source` is only used in error messages.
pub fn read_csv<R: Read>(reader: R, label_column: Option<&str>, source: &Path) -> Result<CsvData> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(records.len() + 1, |p| p.line() as usize);
        records.push((line, rec));
    }
    let Some((_, first)) = records.first() else {
        return Err(Error::EmptyFile(source.to_path_buf()));
    };
    let width = first.len();

    let by_name = label_column.and_then(|name| first.iter().position(|c| c == name));
    let by_index = label_column.and_then(|s| s.parse::<usize>().ok());
    let has_header = by_name.is_some()
        || first
            .iter()
            .enumerate()
            .any(|(i, c)| Some(i) != by_index && parse_finite(c).is_none());
    let label_idx = match label_column {
        None => None,
        Some(name) => match by_name.or(by_index) {
            Some(i) if i < width => Some(i),
            _ => return Err(Error::UnknownLabelColumn(name.to_string())),
        },
    };

    let header = has_header.then(|| {
        first
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != label_idx)
            .map(|(_, c)| c.to_string())
            .collect::<Vec<_>>()
    });
    let body = if has_header { &records[1..] } else { &records[..] };
    if body.is_empty() {
        return Err(Error::EmptyFile(source.to_path_buf()));
    }

    let n_dims = width - usize::from(label_idx.is_some());
    let mut values = Vec::with_capacity(body.len() * n_dims);
    let mut label_values = Vec::new();
    for (line, rec) in body {
        if rec.len() != width {
            return Err(Error::RaggedRows {
                row: *line,
                expected: width,
                found: rec.len(),
            });
        }
        for (col, cell) in rec.iter().enumerate() {
            if Some(col) == label_idx {
                label_values.push(cell.to_string());
                continue;
            }
            let v = parse_finite(cell).ok_or_else(|| Error::NonNumericCell {
                row: *line,
                col: col + 1,
                value: cell.to_string(),
            })?;
            values.push(v);
        }
    }
    if n_dims == 0 {
        return Err(Error::Core(edd_core::Error::EmptyDataset));
    }
    let dataset = Dataset::new(values, body.len(), n_dims)?;
    let labels = label_idx.map(|_| Labels::intern(&label_values));
    Ok(CsvData {
        dataset,
        labels,
        header,
    })
}

/// Writes points (and optionally labels, as a trailing `label` column).
///
/// Values use Rust's shortest round-trip formatting, so reading the file
/// back yields bit-identical numbers.
pub fn write_csv<W: Write>(
    out: W,
    dataset: &Dataset,
    labels: Option<&Labels>,
    header: Option<&[String]>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut names: Vec<String> = match header {
        Some(h) => h.to_vec(),
        None => (0..dataset.n_dims()).map(|d| format!("x{d}")).collect(),
    };
    if labels.is_some() {
        names.push("label".to_string());
    }
    w.write_record(&names)?;
    let mut row = Vec::with_capacity(names.len());
    for (i, p) in dataset.rows().enumerate() {
        row.clear();
        row.extend(p.iter().map(|v| v.to_string()));
        if let Some(l) = labels {
            let id = l.ids()[i];
            row.push(match l.names() {
                Some(n) => n[id].clone(),
                None => id.to_string(),
            });
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

pub fn save_csv(
    path: impl AsRef<Path>,
    dataset: &Dataset,
    labels: Option<&Labels>,
    header: Option<&[String]>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(std::io::BufWriter::new(file), dataset, labels, header)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str, label: Option<&str>) -> Result<CsvData> {
        read_csv(text.as_bytes(), label, Path::new("test.csv"))
    }

    #[test]
    fn plain_numeric() {
        let d = parse("1,2\n3,4\n5,6\n", None).unwrap();
        assert_eq!(d.dataset.n_points(), 3);
        assert_eq!(d.dataset.n_dims(), 2);
        assert_eq!(d.dataset.as_slice(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert!(d.header.is_none());
        assert!(d.labels.is_none());
    }

    #[test]
    fn header_and_named_label() {
        let d = parse("x,y,c\n1,2,a\n3,4,a\n5e-1,1E2,b\n", Some("c")).unwrap();
        let l = d.labels.unwrap();
        assert_eq!(l.ids(), &[0, 0, 1]);
        assert_eq!(l.n_classes(), 2);
        assert_eq!(d.header.unwrap(), vec!["x", "y"]);
        assert_eq!(d.dataset.point(2), &[0.5, 100.0]);
    }

    #[test]
    fn label_by_index_without_header() {
        let d = parse("dog,1,2\ncat,3,4\ndog,5,6\n", Some("0")).unwrap();
        assert_eq!(d.labels.unwrap().ids(), &[0, 1, 0]);
        assert_eq!(d.dataset.as_slice(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert!(d.header.is_none());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse("1,2\n3,4,5\n", None),
            Err(Error::RaggedRows { row: 2, expected: 2, found: 3 })
        ));
        assert!(matches!(
            parse("1,2\n3,x\n", None),
            Err(Error::NonNumericCell { row: 2, col: 2, .. })
        ));
        assert!(matches!(
            parse("1,2\n3,inf\n", None),
            Err(Error::NonNumericCell { row: 2, col: 2, .. })
        ));
        assert!(matches!(parse("", None), Err(Error::EmptyFile(_))));
        assert!(matches!(parse("a,b\n", None), Err(Error::EmptyFile(_))));
        assert!(matches!(
            parse("x,y\n1,2\n", Some("z")),
            Err(Error::UnknownLabelColumn(_))
        ));
        assert!(matches!(
            load_csv("/definitely/not/here.csv", None),
            Err(Error::FileNotFound(_))
        ));
    }

    #[test]
    fn write_then_read_with_labels() {
        let data = Dataset::from_rows(&[[0.1, -2.5], [1e-300, 3.0]]).unwrap();
        let labels = Labels::intern(["p", "q"]);
        let mut buf = Vec::new();
        write_csv(&mut buf, &data, Some(&labels), None).unwrap();
        let back = parse(std::str::from_utf8(&buf).unwrap(), Some("label")).unwrap();
        assert_eq!(back.dataset, data);
        assert_eq!(back.labels.unwrap().ids(), labels.ids());
        assert_eq!(back.header.unwrap(), vec!["x0", "x1"]);
    }

    proptest! {
        #[test]
        fn values_round_trip_bit_for_bit(
            values in proptest::collection::vec(
                any::<f64>().prop_filter("finite", |v| v.is_finite()), 1..60),
            d in 1usize..4,
        ) {
            let n = values.len() / d;
            prop_assume!(n >= 1);
            let data = Dataset::new(values[..n * d].to_vec(), n, d).unwrap();
            let mut buf = Vec::new();
            write_csv(&mut buf, &data, None, None).unwrap();
            let back = read_csv(buf.as_slice(), None, Path::new("rt")).unwrap();
            let same = back.dataset.as_slice().iter().zip(data.as_slice())
                .all(|(a, b)| a.to_bits() == b.to_bits());
            prop_assert!(same);
        }
    }
}
