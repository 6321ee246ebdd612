//! Input file format: matrices as arrays of rows of `[re, im]` pairs.
//!
//! ```json
//! { "A": [[[1, 0], [0, 0]], [[0, 0], [2, 0]]],
//!   "B": [[[0.5, 0]], [[0, 0.5]]],
//!   "D": [[[1, 0]]] }
//! ```

use serde::{Deserialize, Serialize};
use specbox_core::jframe::{JFrameData, JFrameVariant};
use specbox_core::{BlockOperator, CMatrix, Complex64, HermitianMatrix};

use crate::error::{CliError, CliResult};

pub type MatrixRows = Vec<Vec<Complex64>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JFrameFile {
    pub variant: JFrameVariant,
    #[serde(rename = "P")]
    pub p: MatrixRows,
    pub coupling: MatrixRows,
    #[serde(rename = "Q")]
    pub q: MatrixRows,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixRows>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixRows>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<MatrixRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jframe: Option<JFrameFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

/// Parsed file together with its source text, for diagnostics.
pub struct Parsed {
    pub file: ProblemFile,
    text: String,
}

/// Line of the first occurrence of the key `"name"` in `text`, if any.
fn field_line(text: &str, name: &str) -> Option<usize> {
    let key = format!("\"{name}\"");
    text.lines().position(|l| l.contains(&key)).map(|i| i + 1)
}

pub fn to_rows(m: &CMatrix) -> MatrixRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn matrix_from_rows(rows: &MatrixRows) -> Result<CMatrix, String> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err("matrix must have at least one row and one column".into());
    }
    let cols = rows[0].len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(format!("row {i} has {} entries, expected {cols}", r.len()));
        }
        if let Some(j) = r.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(format!("entry ({i}, {j}) is not finite"));
        }
    }
    Ok(CMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

impl ProblemFile {
    pub fn parse(text: &str) -> CliResult<Parsed> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(Parsed {
            file,
            text: text.to_owned(),
        })
    }

    pub fn from_operator(s: &BlockOperator) -> Self {
        ProblemFile {
            a: Some(to_rows(s.a().matrix())),
            b: Some(to_rows(s.b())),
            d: Some(to_rows(s.d().matrix())),
            jframe: None,
            meta: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem file serializes")
    }
}

impl Parsed {
    fn diag(&self, field: &str, msg: impl std::fmt::Display) -> CliError {
        match field_line(&self.text, field.split('.').next_back().unwrap_or(field)) {
            Some(l) => CliError::Validation(format!("line {l}: field {field}: {msg}")),
            None => CliError::Validation(format!("field {field}: {msg}")),
        }
    }

    fn matrix(&self, field: &str, rows: Option<&MatrixRows>) -> CliResult<CMatrix> {
        let rows = rows.ok_or_else(|| CliError::Validation(format!("field {field}: missing")))?;
        matrix_from_rows(rows).map_err(|m| self.diag(field, m))
    }

    fn hermitian(&self, field: &str, rows: Option<&MatrixRows>, tol: f64) -> CliResult<HermitianMatrix> {
        let m = self.matrix(field, rows)?;
        HermitianMatrix::with_tolerance(m, tol).map_err(|e| self.diag(field, e))
    }

    /// The block operator `[[A, B], [-B*, D]]`; `tol_herm` is the relative
    /// Hermitian-symmetry tolerance for `A` and `D`.
    pub fn operator(&self, tol_herm: f64) -> CliResult<BlockOperator> {
        let a = self.hermitian("A", self.file.a.as_ref(), tol_herm)?;
        let d = self.hermitian("D", self.file.d.as_ref(), tol_herm)?;
        let b = self.matrix("B", self.file.b.as_ref())?;
        if b.nrows() != a.dim() || b.ncols() != d.dim() {
            return Err(self.diag(
                "B",
                format!(
                    "expected {}x{} (rows of A by columns of D), found {}x{}",
                    a.dim(),
                    d.dim(),
                    b.nrows(),
                    b.ncols()
                ),
            ));
        }
        Ok(BlockOperator::new(a, b, d)?)
    }

    pub fn jframe(&self) -> CliResult<JFrameData> {
        let j = self
            .file
            .jframe
            .as_ref()
            .ok_or_else(|| CliError::Validation("field jframe: missing".into()))?;
        let p = self.matrix("jframe.P", Some(&j.p))?;
        let k = self.matrix("jframe.coupling", Some(&j.coupling))?;
        let q = self.matrix("jframe.Q", Some(&j.q))?;
        JFrameData::new(j.variant, p, k, q).map_err(|e| self.diag("jframe", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"{
  "A": [[[1, 0], [0, 0]], [[0, 0], [2, 0]]],
  "B": [[[0.5, 0]], [[0, 0.5]]],
  "D": [[[1, 0]]]
}"#;

    #[test]
    fn parses_operator() {
        let p = ProblemFile::parse(GOOD).unwrap();
        let s = p.operator(1e-10).unwrap();
        assert_eq!((s.n(), s.m()), (2, 1));
        assert_eq!(s.b()[(1, 0)], Complex64::new(0.0, 0.5));
    }

    #[test]
    fn dimension_mismatch_names_line_and_field() {
        let bad = GOOD.replace(r#""B": [[[0.5, 0]], [[0, 0.5]]]"#, r#""B": [[[0.5, 0], [1, 0]], [[0, 0.5], [1, 0]]]"#);
        let err = ProblemFile::parse(&bad).unwrap().operator(1e-10).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("line 3") && msg.contains("field B") && msg.contains("2x1"), "{msg}");
    }

    #[test]
    fn ragged_and_non_hermitian_rejected() {
        let ragged = GOOD.replace(r#"[[0, 0], [2, 0]]"#, r#"[[0, 0]]"#);
        let msg = ProblemFile::parse(&ragged).unwrap().operator(1e-10).unwrap_err().to_string();
        assert!(msg.contains("field A") && msg.contains("row 1"), "{msg}");
        let skew = GOOD.replace(r#"[[1, 0], [0, 0]]"#, r#"[[1, 0], [3, 0]]"#);
        let msg = ProblemFile::parse(&skew).unwrap().operator(1e-10).unwrap_err().to_string();
        assert!(msg.contains("field A") && msg.contains("Hermitian"), "{msg}");
    }

    #[test]
    fn syntax_error_is_parse_error() {
        let err = ProblemFile::parse("{\"A\": [").map(|_| ()).unwrap_err();
        assert!(matches!(err, CliError::Parse(_)));
        assert!(err.to_string().contains("line 1"));
        assert!(matches!(ProblemFile::parse(r#"{"X": 1}"#).map(|_| ()), Err(CliError::Parse(_))));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let p = ProblemFile::parse(GOOD).unwrap().file;
        let mut q = p.clone();
        q.a = Some(vec![vec![Complex64::new(0.1 + 0.2, 1.0 / 3.0)]]);
        q.meta = Some(serde_json::json!({"note": "x"}));
        let back = ProblemFile::parse(&q.to_json()).unwrap().file;
        assert_eq!(back, q);
        let z = back.a.unwrap()[0][0];
        assert_eq!(z.re.to_bits(), (0.1f64 + 0.2).to_bits());
        assert_eq!(z.im.to_bits(), (1.0f64 / 3.0).to_bits());
    }
}
