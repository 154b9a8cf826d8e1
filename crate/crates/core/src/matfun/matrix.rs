use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra;

/// Symmetry tolerance relative to the largest entry.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Structure tag carried by a [`Matrix`], verified on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Structure {
    #[default]
    General,
    UpperTriangular,
    /// `[[A, B], [0, C]]` with `A` of order `n1` and `C` of order `n2`.
    BlockUpperTriangular { n1: usize, n2: usize },
    Circulant,
    Symmetric,
    AntiBidiagonal,
    Jacobi,
}

impl Structure {
    pub fn name(&self) -> &'static str {
        match self {
            Structure::General => "general",
            Structure::UpperTriangular => "upper-triangular",
            Structure::BlockUpperTriangular { .. } => "block-upper-triangular",
            Structure::Circulant => "circulant",
            Structure::Symmetric => "symmetric",
            Structure::AntiBidiagonal => "anti-bidiagonal",
            Structure::Jacobi => "jacobi",
        }
    }

    /// Structures whose matrices are symmetric.
    pub fn is_symmetric(&self) -> bool {
        matches!(
            self,
            Structure::Symmetric | Structure::AntiBidiagonal | Structure::Jacobi
        )
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::BlockUpperTriangular { n1, n2 } => write!(f, "block-upper-triangular({n1},{n2})"),
            s => f.write_str(s.name()),
        }
    }
}

/// Dense real matrix, row-major.
///
/// Square matrices carry a verified [`Structure`]; rectangular matrices
/// (Sylvester blocks) are always [`Structure::General`].
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    structure: Structure,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
            structure: Structure::General,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &v) in d.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    /// General matrix from rows; rows must be nonempty, equally long and finite.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        if r == 0 || c == 0 {
            return Err(Error::InvalidInput("matrix must have at least one entry".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != c {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(r, c, data)
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(p) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "entry ({}, {}) is not finite",
                p / cols,
                p % cols
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            data,
            structure: Structure::General,
        })
    }

    /// Square matrix from a closure over `(i, j)`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    /// Re-tags the matrix after verifying the structure.
    pub fn with_structure(mut self, structure: Structure) -> Result<Self> {
        self.verify(structure)?;
        self.structure = structure;
        Ok(self)
    }

    /// Tags without verification; for constructors that build the pattern
    /// directly.
    pub(crate) fn tagged(mut self, structure: Structure) -> Self {
        debug_assert!(self.verify(structure).is_ok(), "constructor broke {structure}");
        self.structure = structure;
        self
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Order of a square matrix.
    pub fn order(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Sets an entry and drops the structure tag.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
        self.structure = Structure::General;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diag().iter().sum()
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Smallest entry with its position.
    pub fn min_entry(&self) -> (usize, usize, f64) {
        let (p, v) = self
            .data
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |(bp, bv), (p, &v)| if v < bv { (p, v) } else { (bp, bv) });
        (p / self.cols, p % self.cols, v)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0.0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
            structure: self.structure,
        }
    }

    /// `self + s * I`.
    pub fn shift(&self, s: f64) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m.data[i * self.cols + i] += s;
        }
        m.structure = match self.structure {
            Structure::AntiBidiagonal | Structure::Jacobi => Structure::Symmetric,
            s => s,
        };
        m
    }

    /// Accumulates `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
        self.structure = Structure::General;
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn powi(&self, p: usize) -> Matrix {
        let mut out = Matrix::identity(self.rows);
        for _ in 0..p {
            out = out.matmul(self);
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = self.get(r0 + i, c0 + j);
            }
        }
        m
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
        self.structure = Structure::General;
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    fn mismatch(&self, declared: Structure, reason: String) -> Error {
        Error::StructureMismatch {
            declared: declared.to_string(),
            reason,
        }
    }

    /// Checks that the entries satisfy `structure`.
    pub fn verify(&self, structure: Structure) -> Result<()> {
        if structure != Structure::General && !self.is_square() {
            return Err(self.mismatch(structure, "matrix is not square".into()));
        }
        let n = self.rows;
        match structure {
            Structure::General => Ok(()),
            Structure::UpperTriangular => {
                for i in 0..n {
                    for j in 0..i {
                        if self.get(i, j) != 0.0 {
                            return Err(Error::NotTriangular {
                                i,
                                j,
                                value: self.get(i, j),
                            });
                        }
                    }
                }
                Ok(())
            }
            Structure::BlockUpperTriangular { n1, n2 } => {
                if n1 == 0 || n2 == 0 || n1 + n2 != n {
                    return Err(self.mismatch(structure, format!("blocks do not partition order {n}")));
                }
                for i in n1..n {
                    for j in 0..n1 {
                        if self.get(i, j) != 0.0 {
                            return Err(self.mismatch(structure, format!("entry ({i}, {j}) below the blocks is nonzero")));
                        }
                    }
                }
                Ok(())
            }
            Structure::Circulant => {
                let tol = SYMMETRY_TOL * self.max_norm();
                for i in 1..n {
                    for j in 0..n {
                        let expected = self.get(0, (j + n - i) % n);
                        if (self.get(i, j) - expected).abs() > tol {
                            return Err(self.mismatch(structure, format!("row {i} is not a cyclic shift of row 0 at column {j}")));
                        }
                    }
                }
                Ok(())
            }
            Structure::Symmetric => self.check_symmetric(),
            Structure::AntiBidiagonal => {
                self.check_symmetric()?;
                for i in 0..n {
                    for j in 0..n {
                        let on_band = i + j + 1 == n || i + j == n;
                        if !on_band && self.get(i, j) != 0.0 {
                            return Err(self.mismatch(structure, format!("entry ({i}, {j}) lies off the anti-band")));
                        }
                    }
                }
                Ok(())
            }
            Structure::Jacobi => {
                self.check_symmetric()?;
                for i in 0..n {
                    for j in 0..n {
                        if i.abs_diff(j) > 1 && self.get(i, j) != 0.0 {
                            return Err(self.mismatch(structure, format!("entry ({i}, {j}) is outside the tridiagonal band")));
                        }
                    }
                }
                for i in 1..n {
                    if self.get(i, i - 1) <= 0.0 {
                        return Err(self.mismatch(structure, format!("subdiagonal entry ({i}, {}) is not positive", i - 1)));
                    }
                }
                let eigs = spectra::sym_eigs(self)?;
                let lowest = eigs.values[0].re;
                if lowest < -1e-9 * (1.0 + self.max_norm()) {
                    return Err(self.mismatch(structure, format!("not nonnegative definite: eigenvalue {lowest}")));
                }
                Ok(())
            }
        }
    }

    fn check_symmetric(&self) -> Result<()> {
        let tol = SYMMETRY_TOL * self.max_norm();
        let n = self.rows;
        for i in 0..n {
            for j in i + 1..n {
                let gap = (self.get(i, j) - self.get(j, i)).abs();
                if gap > tol {
                    return Err(Error::NotSymmetric { i, j, gap });
                }
            }
        }
        Ok(())
    }

    /// Tag test without raising.
    pub fn satisfies(&self, structure: Structure) -> bool {
        self.verify(structure).is_ok()
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

// JSON wire format: {"n": k, "rows": [[...]], "structure": "..."}.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    n: usize,
    rows: Vec<Vec<f64>>,
    #[serde(default = "general_name")]
    structure: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<[usize; 2]>,
}

fn general_name() -> String {
    "general".into()
}

fn parse_structure(name: &str, blocks: Option<[usize; 2]>) -> Result<Structure> {
    Ok(match name {
        "general" => Structure::General,
        "upper-triangular" => Structure::UpperTriangular,
        "block-upper-triangular" => {
            let [n1, n2] = blocks.ok_or_else(|| {
                Error::InvalidInput("block-upper-triangular needs \"blocks\": [n1, n2]".into())
            })?;
            Structure::BlockUpperTriangular { n1, n2 }
        }
        "circulant" => Structure::Circulant,
        "symmetric" => Structure::Symmetric,
        "anti-bidiagonal" => Structure::AntiBidiagonal,
        "jacobi" => Structure::Jacobi,
        other => return Err(Error::InvalidInput(format!("unknown structure `{other}`"))),
    })
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks = match self.structure {
            Structure::BlockUpperTriangular { n1, n2 } => Some([n1, n2]),
            _ => None,
        };
        MatrixJson {
            n: self.rows,
            rows: self.to_rows(),
            structure: self.structure.name().to_string(),
            blocks,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = MatrixJson::deserialize(d)?;
        Matrix::try_from(json).map_err(D::Error::custom)
    }
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self> {
        if json.rows.len() != json.n || json.rows.iter().any(|r| r.len() != json.n) {
            return Err(Error::InvalidInput(format!("rows do not form a {0}x{0} matrix", json.n)));
        }
        let structure = parse_structure(&json.structure, json.blocks)?;
        Matrix::from_rows(&json.rows)?.with_structure(structure)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_shift() {
        let a = Matrix::from_rows(&[[1.0, 1.0], [0.0, 2.0]]).unwrap();
        assert_eq!((&a * &a).to_rows(), vec![vec![1.0, 3.0], vec![0.0, 4.0]]);
        assert_eq!(a.shift(-1.0).diag(), vec![0.0, 1.0]);
        assert_eq!(a.powi(0), Matrix::identity(2));
    }

    #[test]
    fn structure_validators() {
        let tri = Matrix::from_rows(&[[1.0, 2.0], [0.0, 3.0]]).unwrap();
        assert!(tri.satisfies(Structure::UpperTriangular));
        assert!(matches!(
            tri.transpose().verify(Structure::UpperTriangular),
            Err(Error::NotTriangular { i: 1, j: 0, .. })
        ));
        let circ = Matrix::from_rows(&[[1.0, 2.0, 3.0], [3.0, 1.0, 2.0], [2.0, 3.0, 1.0]]).unwrap();
        assert!(circ.satisfies(Structure::Circulant));
        assert!(!circ.satisfies(Structure::Symmetric));
        let anti = Matrix::from_rows(&[[0.0, 0.0, 3.0], [0.0, 1.0, 2.0], [3.0, 2.0, 0.0]]).unwrap();
        assert!(anti.satisfies(Structure::AntiBidiagonal));
        assert!(!Matrix::identity(3).satisfies(Structure::AntiBidiagonal));
        let jac = Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        assert!(jac.satisfies(Structure::Jacobi));
        let indefinite = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(!indefinite.satisfies(Structure::Jacobi));
        let block = Matrix::from_rows(&[[2.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(block.satisfies(Structure::BlockUpperTriangular { n1: 1, n2: 1 }));
        assert!(!block.satisfies(Structure::BlockUpperTriangular { n1: 2, n2: 1 }));
    }

    #[test]
    fn json_schema() {
        let m: Matrix = serde_json::from_str(r#"{"n":2,"rows":[[0,2],[2,0]],"structure":"symmetric"}"#).unwrap();
        assert_eq!(m.structure(), Structure::Symmetric);
        let err = serde_json::from_str::<Matrix>(r#"{"n":2,"rows":[[0,2],[1,0]],"structure":"circulant"}"#);
        assert!(err.unwrap_err().to_string().contains("circulant"));
        let b: Matrix = serde_json::from_str(
            r#"{"n":2,"rows":[[2,1],[0,1]],"structure":"block-upper-triangular","blocks":[1,1]}"#,
        )
        .unwrap();
        let back: Matrix = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        assert_eq!(back, b);
        assert!(serde_json::from_str::<Matrix>(r#"{"n":3,"rows":[[0,2],[2,0]]}"#).is_err());
    }

    #[test]
    fn min_entry_reports_position() {
        let m = Matrix::from_rows(&[[1.0, -2.0], [-1.0, 0.0]]).unwrap();
        assert_eq!(m.min_entry(), (0, 1, -2.0));
    }
}
