//! CSV ingestion: rectangular numeric matrices with optional header row.

use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

/// A parsed data file, normalized so that rows are observations.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub matrix: Array2<f64>,
    pub column_names: Vec<String>,
    pub rows_are_samples: bool,
}

fn csv_error(path: &Path, line: u64, msg: String) -> Error {
    Error::CsvFormat {
        path: path.display().to_string(),
        line,
        msg,
    }
}

/// Read a CSV file of finite reals.
///
/// With `has_header`, the first row supplies unique column names; otherwise
/// names are synthesized as c0, c1, …. With `transpose`, the parsed matrix
/// is transposed (for files that ship variables as rows) and names become
/// r0, r1, … since the original header labeled the other axis.
pub fn read_csv(path: &Path, has_header: bool, transpose: bool) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;

    let mut names: Vec<String> = Vec::new();
    if has_header {
        let headers = reader
            .headers()
            .map_err(|e| csv_error(path, 1, e.to_string()))?;
        names = headers.iter().map(str::to_string).collect();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(csv_error(path, 1, format!("duplicate column name '{name}'")));
            }
        }
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, 0, e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(csv_error(
                path,
                line,
                format!("ragged row: {} fields, expected {expected}", record.len()),
            ));
        }
        let mut row = Vec::with_capacity(expected);
        for (col, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| {
                csv_error(
                    path,
                    line,
                    format!("non-numeric value '{cell}' in column {}", col + 1),
                )
            })?;
            if !value.is_finite() {
                return Err(csv_error(
                    path,
                    line,
                    format!("non-finite value '{cell}' in column {}", col + 1),
                ));
            }
            row.push(value);
        }
        rows.push(row);
    }

    let n = rows.len();
    let p = width.unwrap_or(0);
    if n == 0 || p == 0 {
        return Err(csv_error(path, 0, "no data rows".into()));
    }
    if has_header && names.len() != p {
        return Err(csv_error(
            path,
            1,
            format!("header has {} names but rows have {p} fields", names.len()),
        ));
    }

    let mut matrix = Array2::<f64>::zeros((n, p));
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            matrix[[i, j]] = v;
        }
    }

    if transpose {
        matrix = matrix.reversed_axes().as_standard_layout().to_owned();
        names = (0..matrix.ncols()).map(|j| format!("r{j}")).collect();
    } else if !has_header {
        names = (0..p).map(|j| format!("c{j}")).collect();
    }

    Ok(Dataset {
        matrix,
        column_names: names,
        rows_are_samples: true,
    })
}

/// Resolve a column selection such as `a,b,c`, `0,2,5`, or `1..4` (half-open
/// index range) against the dataset's column names.
pub fn parse_column_selection(selection: &str, names: &[String]) -> Result<Vec<usize>> {
    let mut indices = Vec::new();
    for token in selection.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "empty token in column selection '{selection}'"
            )));
        }
        if let Some((start, end)) = token.split_once("..") {
            let start: usize = start.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("bad range start in '{token}'"))
            })?;
            let end: usize = end
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad range end in '{token}'")))?;
            if start >= end || end > names.len() {
                return Err(Error::InvalidParameter(format!(
                    "range '{token}' out of bounds for {} columns",
                    names.len()
                )));
            }
            indices.extend(start..end);
        } else if let Ok(idx) = token.parse::<usize>() {
            if idx >= names.len() {
                return Err(Error::InvalidParameter(format!(
                    "column index {idx} out of bounds for {} columns",
                    names.len()
                )));
            }
            indices.push(idx);
        } else if let Some(idx) = names.iter().position(|n| n == token) {
            indices.push(idx);
        } else {
            return Err(Error::InvalidParameter(format!(
                "unknown column '{token}'"
            )));
        }
    }
    if indices.is_empty() {
        return Err(Error::InvalidParameter("empty column selection".into()));
    }
    Ok(indices)
}

/// Extract the selected columns as an n×k matrix, in selection order.
pub fn select_columns(matrix: &Array2<f64>, indices: &[usize]) -> Array2<f64> {
    let n = matrix.nrows();
    let mut out = Array2::<f64>::zeros((n, indices.len()));
    for (dst, &src) in indices.iter().enumerate() {
        out.column_mut(dst).assign(&matrix.column(src));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use std::io::Write;

    fn write_temp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn minimal_parse_with_header() {
        let f = write_temp("a,b\n1,2\n");
        let ds = read_csv(f.path(), true, false).unwrap();
        assert_eq!(ds.matrix, array![[1.0, 2.0]]);
        assert_eq!(ds.column_names, vec!["a", "b"]);
        assert!(ds.rows_are_samples);
    }

    #[test]
    fn transpose_flips_axes() {
        let f = write_temp("a,b\n1,2\n");
        let ds = read_csv(f.path(), true, true).unwrap();
        assert_eq!(ds.matrix, array![[1.0], [2.0]]);
        assert_eq!(ds.column_names, vec!["r0"]);
    }

    #[test]
    fn rejects_nan_cells() {
        let f = write_temp("a,b\n1,NaN\n");
        let err = read_csv(f.path(), true, false).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("non-finite"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");
        assert!(msg.contains("column 2"), "{msg}");
    }

    #[test]
    fn rejects_ragged_rows_with_line_number() {
        let f = write_temp("1,2\n3\n");
        let err = read_csv(f.path(), false, false).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("ragged"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn rejects_non_numeric_cells() {
        let f = write_temp("1,2\n3,four\n");
        let err = read_csv(f.path(), false, false).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("non-numeric"), "{msg}");
        assert!(msg.contains("column 2"), "{msg}");
    }

    #[test]
    fn rejects_duplicate_header_names() {
        let f = write_temp("a,a\n1,2\n");
        assert!(read_csv(f.path(), true, false).is_err());
    }

    #[test]
    fn synthesizes_names_without_header() {
        let f = write_temp("1,2,3\n4,5,6\n");
        let ds = read_csv(f.path(), false, false).unwrap();
        assert_eq!(ds.column_names, vec!["c0", "c1", "c2"]);
        assert_eq!(ds.matrix.dim(), (2, 3));
    }

    #[test]
    fn column_selection_forms() {
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        assert_eq!(parse_column_selection("a,c", &names).unwrap(), vec![0, 2]);
        assert_eq!(parse_column_selection("1..3", &names).unwrap(), vec![1, 2]);
        assert_eq!(parse_column_selection("3,0", &names).unwrap(), vec![3, 0]);
        assert!(parse_column_selection("e", &names).is_err());
        assert!(parse_column_selection("4", &names).is_err());
        assert!(parse_column_selection("2..2", &names).is_err());
    }
}
