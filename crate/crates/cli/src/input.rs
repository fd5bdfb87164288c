//! Family and observable files.
//!
//! Complex numbers are `[re, im]` pairs and matrices are lists of rows:
//!
//! ```json
//! {
//!   "dim_system": 2,
//!   "dim_noise": 2,
//!   "kraus": [[[[1, 0], [0, 0]], [[0, 0], [0.8, 0]]], ...],
//!   "generator": {"type": "hamiltonian", "matrix": [...]}
//! }
//! ```
//!
//! Derivative data is either a `dkraus`/`ddkraus` pair or a `generator`.

use crate::failure::Failure;
use qmarkov::family::{make_family_conjugation, make_family_hamiltonian, ParamFamily};
use qmarkov::{ComplexMatrix, KrausFamily, Tolerances};
use serde::Deserialize;
use std::path::Path;

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    #[serde(default)]
    #[allow(dead_code)]
    name: Option<String>,
    dim_system: usize,
    dim_noise: usize,
    kraus: Vec<RawMatrix>,
    #[serde(default)]
    dkraus: Option<Vec<RawMatrix>>,
    #[serde(default)]
    ddkraus: Option<Vec<RawMatrix>>,
    #[serde(default)]
    generator: Option<GeneratorEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorEntry {
    #[serde(rename = "type")]
    kind: GeneratorKind,
    matrix: RawMatrix,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum GeneratorKind {
    Hamiltonian,
    Conjugation,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservableFile {
    dim: usize,
    matrix: RawMatrix,
}

/// A parsed family file.
#[derive(Debug, Clone)]
pub struct LoadedFamily {
    pub base: KrausFamily,
    pub family: Option<ParamFamily>,
}

impl LoadedFamily {
    pub fn param(&self, file: &str) -> Result<&ParamFamily, Failure> {
        self.family
            .as_ref()
            .ok_or_else(|| Failure::schema(format!("{file}: no derivative data (dkraus/ddkraus or generator)"), "generator"))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        Failure::schema(format!("{}: {}", path.display(), e.inner()), &field)
    })
}

fn matrix(raw: &RawMatrix, rows: usize, cols: usize, field: &str) -> Result<ComplexMatrix, Failure> {
    if raw.len() != rows {
        return Err(Failure::schema(format!("expected {rows} rows, found {}", raw.len()), field));
    }
    if let Some(r) = raw.iter().position(|row| row.len() != cols) {
        return Err(Failure::schema(
            format!("expected {cols} entries, found {}", raw[r].len()),
            &format!("{field}[{r}]"),
        ));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
        let [re, im] = raw[i][j];
        num_complex::Complex64::new(re, im)
    }))
}

fn matrix_list(raw: &[RawMatrix], count: usize, dim: usize, field: &str) -> Result<Vec<ComplexMatrix>, Failure> {
    if raw.len() != count {
        return Err(Failure::schema(format!("expected {count} matrices, found {}", raw.len()), field));
    }
    raw.iter()
        .enumerate()
        .map(|(i, m)| matrix(m, dim, dim, &format!("{field}[{i}]")))
        .collect()
}

pub fn load_family(path: &Path, tol: &Tolerances) -> Result<LoadedFamily, Failure> {
    let file: FamilyFile = read_json(path)?;
    let (d, k) = (file.dim_system, file.dim_noise);
    if d == 0 || k == 0 {
        return Err(Failure::schema("dimensions must be positive".into(), if d == 0 { "dim_system" } else { "dim_noise" }));
    }
    let kraus = matrix_list(&file.kraus, k, d, "kraus")?;
    let base = KrausFamily::with_tolerance(kraus, tol.structural)?;
    let family = match (file.dkraus, file.ddkraus, file.generator) {
        (None, None, None) => None,
        (Some(dk), Some(ddk), None) => {
            let dk = matrix_list(&dk, k, d, "dkraus")?;
            let ddk = matrix_list(&ddk, k, d, "ddkraus")?;
            Some(ParamFamily::explicit_with(base.clone(), dk, ddk, tol)?)
        }
        (None, None, Some(g)) => Some(match g.kind {
            GeneratorKind::Hamiltonian => {
                make_family_hamiltonian(&base, &matrix(&g.matrix, d * k, d * k, "generator.matrix")?)?
            }
            GeneratorKind::Conjugation => make_family_conjugation(&base, &matrix(&g.matrix, d, d, "generator.matrix")?)?,
        }),
        (Some(_), None, _) | (None, Some(_), _) => {
            return Err(Failure::schema("dkraus and ddkraus must be given together".into(), "dkraus"));
        }
        (Some(_), Some(_), Some(_)) => {
            return Err(Failure::schema("give either dkraus/ddkraus or a generator".into(), "generator"));
        }
    };
    Ok(LoadedFamily { base, family })
}

pub fn load_observable(path: &Path) -> Result<ComplexMatrix, Failure> {
    let file: ObservableFile = read_json(path)?;
    matrix(&file.matrix, file.dim, file.dim, "matrix")
}
