//! Input file formats: JSON documents for groups, automorphisms, matrices,
//! and homology map tuples. Unknown fields are rejected everywhere so a
//! typo'd key fails loudly instead of being silently ignored.

use reidemeister::{Automorphism, FiniteGroup, GroupError, IntMatrix};
use serde::Deserialize;
use std::fmt;
use std::path::{Path, PathBuf};

/// Nesting limit for `product`/`semidirect` specs that reference other
/// group files; keeps reference cycles from recursing forever.
const MAX_SPEC_DEPTH: usize = 16;

#[derive(Debug)]
pub enum InputError {
    Io { path: PathBuf, detail: String },
    Json { path: PathBuf, detail: String },
    Spec { path: PathBuf, detail: String },
    Group { path: PathBuf, err: GroupError },
    Value { detail: String },
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io { path, detail } => {
                write!(f, "{}: {}", path.display(), detail)
            }
            InputError::Json { path, detail } => {
                write!(f, "{}: {}", path.display(), detail)
            }
            InputError::Spec { path, detail } => {
                write!(f, "{}: {}", path.display(), detail)
            }
            InputError::Group { path, err } => {
                write!(f, "{}: {}", path.display(), err)
            }
            InputError::Value { detail } => write!(f, "{}", detail),
        }
    }
}

impl std::error::Error for InputError {}

/// One group spec document. All kinds share this raw shape; which fields
/// are required (and which are forbidden) depends on `kind`, checked in
/// `build_group`. `deny_unknown_fields` keeps the format closed.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecFile {
    pub kind: String,
    /// cyclic / dihedral / symmetric parameter
    pub n: Option<usize>,
    /// table kind
    pub order: Option<usize>,
    pub table: Option<Vec<Vec<usize>>>,
    pub names: Option<Vec<String>>,
    /// permutation kind
    pub degree: Option<usize>,
    pub generators: Option<Vec<Vec<usize>>>,
    /// product kind: paths to the two factor spec files
    pub factors: Option<Vec<String>>,
    /// semidirect kind: base group file, automorphism file, twist order
    pub base: Option<String>,
    pub automorphism: Option<String>,
    pub m: Option<usize>,
}

/// An automorphism document: the image of every element, in element order.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutSpecFile {
    pub images: Vec<usize>,
}

/// A square integer matrix document.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub matrix: Vec<Vec<i64>>,
}

/// A tuple of homology maps: maps[k] acts on degree-k homology.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapsFile {
    pub maps: Vec<Vec<Vec<i64>>>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| InputError::Json {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })
}

/// Re-read a file as an untyped JSON value for echoing into reports.
pub fn echo_json(path: &Path) -> Result<serde_json::Value, InputError> {
    read_json(path)
}

pub fn load_group(path: &Path) -> Result<FiniteGroup, InputError> {
    load_group_depth(path, 0)
}

fn spec_err(path: &Path, detail: impl Into<String>) -> InputError {
    InputError::Spec { path: path.to_path_buf(), detail: detail.into() }
}

fn load_group_depth(path: &Path, depth: usize) -> Result<FiniteGroup, InputError> {
    if depth > MAX_SPEC_DEPTH {
        return Err(spec_err(path, "group specs nest too deeply (reference cycle?)"));
    }
    let spec: GroupSpecFile = read_json(path)?;
    build_group(&spec, path, depth)
}

/// Resolve a referenced file relative to the directory of the referencing
/// spec, so bundles of files can be moved together.
fn sibling(path: &Path, name: &str) -> PathBuf {
    match path.parent() {
        Some(dir) => dir.join(name),
        None => PathBuf::from(name),
    }
}

fn build_group(spec: &GroupSpecFile, path: &Path, depth: usize) -> Result<FiniteGroup, InputError> {
    // every kind must use exactly its own fields
    let mut allowed: Vec<&str> = Vec::new();
    let present: Vec<&str> = [
        ("n", spec.n.is_some()),
        ("order", spec.order.is_some()),
        ("table", spec.table.is_some()),
        ("names", spec.names.is_some()),
        ("degree", spec.degree.is_some()),
        ("generators", spec.generators.is_some()),
        ("factors", spec.factors.is_some()),
        ("base", spec.base.is_some()),
        ("automorphism", spec.automorphism.is_some()),
        ("m", spec.m.is_some()),
    ]
    .iter()
    .filter(|(_, p)| *p)
    .map(|(f, _)| *f)
    .collect();

    let group = match spec.kind.as_str() {
        "cyclic" | "dihedral" | "symmetric" => {
            allowed.push("n");
            let n = spec.n.ok_or_else(|| {
                spec_err(path, format!("kind \"{}\" requires field \"n\"", spec.kind))
            })?;
            let built = match spec.kind.as_str() {
                "cyclic" => FiniteGroup::cyclic(n),
                "dihedral" => FiniteGroup::dihedral(n),
                _ => FiniteGroup::symmetric(n),
            };
            built.map_err(|err| InputError::Group { path: path.to_path_buf(), err })?
        }
        "table" => {
            allowed.extend(["order", "table", "names"]);
            let order = spec.order.ok_or_else(|| spec_err(path, "kind \"table\" requires \"order\""))?;
            let rows = spec
                .table
                .as_ref()
                .ok_or_else(|| spec_err(path, "kind \"table\" requires \"table\""))?;
            if rows.len() != order {
                return Err(spec_err(
                    path,
                    format!("table has {} rows, expected order {}", rows.len(), order),
                ));
            }
            let g = FiniteGroup::from_table(rows, spec.names.clone())
                .map_err(|err| InputError::Group { path: path.to_path_buf(), err })?;
            if g.identity() != 0 {
                return Err(spec_err(
                    path,
                    format!("table identity is element {}, must be element 0", g.identity()),
                ));
            }
            g
        }
        "permutation" => {
            allowed.extend(["degree", "generators"]);
            let degree =
                spec.degree.ok_or_else(|| spec_err(path, "kind \"permutation\" requires \"degree\""))?;
            let gens = spec
                .generators
                .as_ref()
                .ok_or_else(|| spec_err(path, "kind \"permutation\" requires \"generators\""))?;
            FiniteGroup::from_permutations(degree, gens)
                .map_err(|err| InputError::Group { path: path.to_path_buf(), err })?
        }
        "product" => {
            allowed.push("factors");
            let factors =
                spec.factors.as_ref().ok_or_else(|| spec_err(path, "kind \"product\" requires \"factors\""))?;
            if factors.len() != 2 {
                return Err(spec_err(
                    path,
                    format!("kind \"product\" takes exactly 2 factor files, got {}", factors.len()),
                ));
            }
            let a = load_group_depth(&sibling(path, &factors[0]), depth + 1)?;
            let b = load_group_depth(&sibling(path, &factors[1]), depth + 1)?;
            FiniteGroup::direct_product(&a, &b)
                .map_err(|err| InputError::Group { path: path.to_path_buf(), err })?
        }
        "semidirect" => {
            allowed.extend(["base", "automorphism", "m"]);
            let base =
                spec.base.as_ref().ok_or_else(|| spec_err(path, "kind \"semidirect\" requires \"base\""))?;
            let aut_file = spec
                .automorphism
                .as_ref()
                .ok_or_else(|| spec_err(path, "kind \"semidirect\" requires \"automorphism\""))?;
            let m = spec.m.ok_or_else(|| spec_err(path, "kind \"semidirect\" requires \"m\""))?;
            let g = load_group_depth(&sibling(path, base), depth + 1)?;
            let phi = load_automorphism(&sibling(path, aut_file), &g)?;
            g.semidirect_with_cyclic(&phi, m)
                .map_err(|err| InputError::Group { path: path.to_path_buf(), err })?
        }
        other => {
            return Err(spec_err(
                path,
                format!(
                    "unknown kind \"{}\" (expected cyclic, dihedral, symmetric, table, \
                     permutation, product, or semidirect)",
                    other
                ),
            ));
        }
    };

    for field in present {
        if !allowed.contains(&field) {
            return Err(spec_err(
                path,
                format!("field \"{}\" is not allowed for kind \"{}\"", field, spec.kind),
            ));
        }
    }
    Ok(group)
}

pub fn load_automorphism(path: &Path, g: &FiniteGroup) -> Result<Automorphism, InputError> {
    let spec: AutSpecFile = read_json(path)?;
    g.automorphism_from_full_images(&spec.images)
        .map_err(|err| InputError::Group { path: path.to_path_buf(), err })
}

pub fn load_matrix(path: &Path) -> Result<IntMatrix, InputError> {
    let spec: MatrixFile = read_json(path)?;
    matrix_from_rows(&spec.matrix).map_err(|detail| spec_err(path, detail))
}

pub fn load_maps(path: &Path) -> Result<Vec<IntMatrix>, InputError> {
    let spec: MapsFile = read_json(path)?;
    spec.maps
        .iter()
        .enumerate()
        .map(|(k, rows)| {
            matrix_from_rows(rows).map_err(|detail| spec_err(path, format!("map {}: {}", k, detail)))
        })
        .collect()
}

fn matrix_from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix, String> {
    let n = rows.len();
    if n == 0 {
        return Err("matrix must have at least one row".into());
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(format!("row {} has length {}, expected {}", i, row.len(), n));
        }
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Ok(IntMatrix::from_i64_rows(&refs))
}

/// Parse a comma-separated integer vector from the command line.
pub fn parse_vector(s: &str) -> Result<Vec<i64>, InputError> {
    s.split(',')
        .map(|part| {
            part.trim().parse::<i64>().map_err(|_| InputError::Value {
                detail: format!("\"{}\" is not an integer vector entry", part.trim()),
            })
        })
        .collect()
}
