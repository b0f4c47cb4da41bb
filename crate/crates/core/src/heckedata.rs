//! Dataset model for one cyclotomic Hecke algebra: group presentation data,
//! irreducible characters, generic representation matrices, and Schur
//! elements. The data files are the trust boundary; [`validate_dataset`]
//! is the trust anchor that catches transcription errors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::exactnum::Cyclotomic;
use crate::laurent::{LaurentError, LaurentPoly, LaurentRepr, Var};

pub type LpMat = Vec<Vec<LaurentPoly>>;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("unknown generator symbol `{symbol}`")]
    UnknownSymbol { symbol: String },
    #[error("unknown character label `{label}`")]
    UnknownLabel { label: String },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Presentation data for one group, as shipped in the data file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub name: String,
    pub generators: Vec<String>,
    /// Each chain is a list of words asserted pairwise equal, e.g.
    /// `[sts, tst]` or `[stus, tust, ustu]`.
    pub braid_relations: Vec<Vec<Vec<String>>>,
    /// Roots of the deformation relation of each generator, in `q`.
    pub parameters: BTreeMap<String, Vec<LaurentPoly>>,
    pub mu_order: u32,
    /// Words whose images are candidates for a nonzero scalar central
    /// element, e.g. `(st)^3` spelled out letter by letter.
    pub central_candidates: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrChar {
    pub label: String,
    pub dim: usize,
    pub b: u32,
}

#[derive(Debug, Clone)]
pub struct Representation {
    pub label: String,
    /// One square matrix per generator, in generator order.
    pub matrices: Vec<LpMat>,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub group: GroupSpec,
    pub characters: Vec<IrrChar>,
    pub representations: BTreeMap<String, Representation>,
    /// Expanded Schur elements, in `q`.
    pub schur: BTreeMap<String, LaurentPoly>,
    /// Schur elements exactly as loaded, factored where the file says so.
    pub schur_repr: BTreeMap<String, LaurentRepr>,
    /// Label of the character whose Schur element carries the Poincare
    /// polynomial (the trivial character), when the file declares it.
    pub poincare_label: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRepr {
    format_version: u32,
    group: GroupSpec,
    characters: Vec<IrrChar>,
    representations: BTreeMap<String, Vec<LpMat>>,
    schur: BTreeMap<String, LaurentRepr>,
    #[serde(default)]
    poincare_label: Option<String>,
    #[serde(default)]
    #[allow(dead_code)]
    golden: Option<serde_json::Value>,
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let repr: FileRepr = serde_json::from_str(&text).map_err(|source| DataError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    build_dataset(repr)
}

fn build_dataset(repr: FileRepr) -> Result<Dataset, DataError> {
    if repr.format_version != 1 {
        return Err(DataError::Schema(format!(
            "unsupported format_version {}",
            repr.format_version
        )));
    }
    let group = repr.group;
    if group.generators.is_empty() {
        return Err(DataError::Schema("no generators".into()));
    }
    let gens: BTreeSet<&String> = group.generators.iter().collect();
    if gens.len() != group.generators.len() {
        return Err(DataError::Schema("duplicate generator symbols".into()));
    }
    if group.mu_order < 1 {
        return Err(DataError::Schema("mu_order must be >= 1".into()));
    }
    for chain in &group.braid_relations {
        if chain.len() < 2 {
            return Err(DataError::Schema(
                "braid-relation chain needs at least two words".into(),
            ));
        }
        for word in chain {
            check_word(&group, word)?;
        }
    }
    for word in &group.central_candidates {
        check_word(&group, word)?;
    }
    if group.parameters.len() != group.generators.len()
        || !group.generators.iter().all(|g| group.parameters.contains_key(g))
    {
        return Err(DataError::Schema(
            "parameters must list exactly the generators".into(),
        ));
    }
    for (g, ps) in &group.parameters {
        if ps.is_empty() {
            return Err(DataError::Schema(format!("empty parameter list for `{g}`")));
        }
        for p in ps {
            if p.var() != Var::Q {
                return Err(DataError::Schema(format!(
                    "parameter of `{g}` not in variable q"
                )));
            }
        }
        for (i, a) in ps.iter().enumerate() {
            if ps[i + 1..].contains(a) {
                return Err(DataError::Schema(format!(
                    "repeated parameter for `{g}`: {a}"
                )));
            }
        }
    }

    let mut labels = BTreeSet::new();
    for ch in &repr.characters {
        if !labels.insert(ch.label.clone()) {
            return Err(DataError::Schema(format!("duplicate label {}", ch.label)));
        }
        if ch.dim == 0 {
            return Err(DataError::Schema(format!("{} has dim 0", ch.label)));
        }
    }
    check_label_set(&labels, repr.representations.keys(), "representations")?;
    check_label_set(&labels, repr.schur.keys(), "schur")?;

    let mut representations = BTreeMap::new();
    for ch in &repr.characters {
        let mats = repr.representations.get(&ch.label).expect("checked above");
        if mats.len() != group.generators.len() {
            return Err(DataError::Schema(format!(
                "{}: expected {} generator matrices, found {}",
                ch.label,
                group.generators.len(),
                mats.len()
            )));
        }
        for m in mats {
            if m.len() != ch.dim || m.iter().any(|row| row.len() != ch.dim) {
                return Err(DataError::Schema(format!(
                    "{}: matrix is not {} x {}",
                    ch.label, ch.dim, ch.dim
                )));
            }
            for row in m {
                for entry in row {
                    if entry.var() != Var::Q {
                        return Err(DataError::Schema(format!(
                            "{}: matrix entry not in variable q",
                            ch.label
                        )));
                    }
                }
            }
        }
        representations.insert(
            ch.label.clone(),
            Representation {
                label: ch.label.clone(),
                matrices: mats.clone(),
            },
        );
    }

    let mut schur = BTreeMap::new();
    for (label, entry) in &repr.schur {
        let expanded = entry.expand()?;
        if expanded.is_zero() {
            return Err(DataError::Schema(format!("{label}: zero Schur element")));
        }
        if expanded.var() != Var::Q {
            return Err(DataError::Schema(format!(
                "{label}: Schur element not in variable q"
            )));
        }
        schur.insert(label.clone(), expanded);
    }

    if let Some(pl) = &repr.poincare_label {
        if !labels.contains(pl) {
            return Err(DataError::UnknownLabel { label: pl.clone() });
        }
    }

    Ok(Dataset {
        group,
        characters: repr.characters,
        representations,
        schur,
        schur_repr: repr.schur,
        poincare_label: repr.poincare_label,
    })
}

fn check_word(group: &GroupSpec, word: &[String]) -> Result<(), DataError> {
    for sym in word {
        if !group.generators.contains(sym) {
            return Err(DataError::UnknownSymbol {
                symbol: sym.clone(),
            });
        }
    }
    Ok(())
}

fn check_label_set<'a>(
    expected: &BTreeSet<String>,
    found: impl Iterator<Item = &'a String>,
    section: &str,
) -> Result<(), DataError> {
    let found: BTreeSet<String> = found.cloned().collect();
    if &found == expected {
        return Ok(());
    }
    let missing: Vec<&String> = expected.difference(&found).collect();
    let extra: Vec<&String> = found.difference(expected).collect();
    Err(DataError::LabelMismatch(format!(
        "{section}: missing {missing:?}, unexpected {extra:?}"
    )))
}

impl Dataset {
    pub fn labels(&self) -> Vec<String> {
        self.characters.iter().map(|c| c.label.clone()).collect()
    }

    pub fn character(&self, label: &str) -> Result<&IrrChar, DataError> {
        self.characters
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| DataError::UnknownLabel {
                label: label.to_string(),
            })
    }

    pub fn representation(&self, label: &str) -> Result<&Representation, DataError> {
        self.representations
            .get(label)
            .ok_or_else(|| DataError::UnknownLabel {
                label: label.to_string(),
            })
    }

    pub fn schur_element(&self, label: &str) -> Result<&LaurentPoly, DataError> {
        self.schur.get(label).ok_or_else(|| DataError::UnknownLabel {
            label: label.to_string(),
        })
    }

    pub fn generator_index(&self, symbol: &str) -> Result<usize, DataError> {
        self.group
            .generators
            .iter()
            .position(|g| g == symbol)
            .ok_or_else(|| DataError::UnknownSymbol {
                symbol: symbol.to_string(),
            })
    }

    /// Ordered product of generator matrices along `word`; the empty word
    /// gives the identity.
    pub fn eval_word(&self, rep_label: &str, word: &[String]) -> Result<LpMat, DataError> {
        let rep = self.representation(rep_label)?;
        let dim = rep.matrices[0].len();
        let mut acc = lp_identity(dim);
        for sym in word {
            let g = self.generator_index(sym)?;
            acc = lp_mat_mul(&acc, &rep.matrices[g]);
        }
        Ok(acc)
    }

    /// Trace of [`Dataset::eval_word`].
    pub fn char_value(&self, rep_label: &str, word: &[String]) -> Result<LaurentPoly, DataError> {
        let m = self.eval_word(rep_label, word)?;
        Ok(lp_trace(&m))
    }
}

pub fn lp_identity(dim: usize) -> LpMat {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        LaurentPoly::one(Var::Q)
                    } else {
                        LaurentPoly::zero(Var::Q)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn lp_mat_mul(a: &LpMat, b: &LpMat) -> LpMat {
    let n = a.len();
    let mut out = vec![vec![LaurentPoly::zero(Var::Q); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                let t = &out[i][j] + &(&a[i][k] * &b[k][j]);
                out[i][j] = t;
            }
        }
    }
    out
}

fn lp_trace(m: &LpMat) -> LaurentPoly {
    let mut acc = LaurentPoly::zero(Var::Q);
    for (i, row) in m.iter().enumerate() {
        acc = &acc + &row[i];
    }
    acc
}

fn lp_mat_is_zero(m: &LpMat) -> bool {
    m.iter().all(|row| row.iter().all(|e| e.is_zero()))
}

fn lp_mat_sub(a: &LpMat, b: &LpMat) -> LpMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}: {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}

/// Run the four dataset checks: (a) braid-relation chains hold in every
/// representation, (b) each generator matrix is annihilated by its
/// deformation polynomial, (c) the trace at the identity is the dimension,
/// (d) the Schur elements satisfy sum(dim/s) = 1 exactly.
pub fn validate_dataset(ds: &Dataset) -> ValidationReport {
    let mut checks = Vec::new();

    let mut braid_fail = Vec::new();
    for ch in &ds.characters {
        for (ci, chain) in ds.group.braid_relations.iter().enumerate() {
            let first = ds
                .eval_word(&ch.label, &chain[0])
                .expect("validated symbols");
            for word in &chain[1..] {
                let m = ds.eval_word(&ch.label, word).expect("validated symbols");
                if !lp_mat_is_zero(&lp_mat_sub(&first, &m)) {
                    braid_fail.push(format!("{} chain {}", ch.label, ci));
                }
            }
        }
    }
    checks.push(CheckResult {
        name: "braid_relations".into(),
        pass: braid_fail.is_empty(),
        detail: if braid_fail.is_empty() {
            "all chains hold in all representations".into()
        } else {
            format!("failing: {braid_fail:?}")
        },
    });

    let mut deform_fail = Vec::new();
    for ch in &ds.characters {
        let rep = &ds.representations[&ch.label];
        for (g, sym) in ds.group.generators.iter().enumerate() {
            let m = &rep.matrices[g];
            let dim = m.len();
            let mut prod = lp_identity(dim);
            for p in &ds.group.parameters[sym] {
                let mut shifted = m.clone();
                for i in 0..dim {
                    let t = &shifted[i][i] - p;
                    shifted[i][i] = t;
                }
                prod = lp_mat_mul(&prod, &shifted);
            }
            if !lp_mat_is_zero(&prod) {
                deform_fail.push(format!("{} generator {}", ch.label, sym));
            }
        }
    }
    checks.push(CheckResult {
        name: "deformation_relations".into(),
        pass: deform_fail.is_empty(),
        detail: if deform_fail.is_empty() {
            "every generator matrix is annihilated by its parameter polynomial".into()
        } else {
            format!("failing: {deform_fail:?}")
        },
    });

    let mut trace_fail = Vec::new();
    for ch in &ds.characters {
        let tr = ds.char_value(&ch.label, &[]).expect("identity word");
        if tr != LaurentPoly::from_int(Var::Q, ch.dim as i64) {
            trace_fail.push(ch.label.clone());
        }
    }
    checks.push(CheckResult {
        name: "identity_trace".into(),
        pass: trace_fail.is_empty(),
        detail: if trace_fail.is_empty() {
            "trace at the identity equals the dimension".into()
        } else {
            format!("failing: {trace_fail:?}")
        },
    });

    // sum(dim/s) = 1 with cleared denominators:
    // sum_chi dim_chi * prod_{psi != chi} s_psi == prod_psi s_psi.
    let mut prod = LaurentPoly::one(Var::Q);
    for s in ds.schur.values() {
        prod = &prod * s;
    }
    let mut tot = LaurentPoly::zero(Var::Q);
    for ch in &ds.characters {
        let mut part = LaurentPoly::constant(Var::Q, Cyclotomic::from_int(ch.dim as i64));
        for other in &ds.characters {
            if other.label != ch.label {
                part = &part * &ds.schur[&other.label];
            }
        }
        tot = &tot + &part;
    }
    let schur_ok = tot == prod;
    checks.push(CheckResult {
        name: "schur_sum".into(),
        pass: schur_ok,
        detail: if schur_ok {
            "sum of dim/s over all characters is exactly 1".into()
        } else {
            "sum of dim/s is not 1".into()
        },
    });

    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    pub fn data_path(name: &str) -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../data")
            .join(name)
    }

    fn word(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn load_shipped_datasets() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        assert_eq!(g4.group.name, "G4");
        assert_eq!(g4.characters.len(), 7);
        assert_eq!(g4.group.mu_order, 6);
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        assert_eq!(g12.group.name, "G12");
        let labels = g12.labels();
        assert_eq!(labels.first().unwrap(), "phi{1,0}");
        assert_eq!(labels.last().unwrap(), "phi{4,3}");
        assert_eq!(labels.len(), 8);
        assert_eq!(g12.group.mu_order, 2);
    }

    #[test]
    fn eval_word_and_traces() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        let id = g4.eval_word("phi{3,2}", &[]).unwrap();
        assert_eq!(id, lp_identity(3));
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        assert!(g12
            .char_value("phi{1,0}", &word("s"))
            .unwrap()
            .is_one());
        let q2 = LaurentPoly::monomial(Var::Q, 2, Cyclotomic::one());
        assert_eq!(g12.char_value("phi{1,12}", &word("s")).unwrap(), q2);
        for ch in &g12.characters {
            assert_eq!(
                g12.char_value(&ch.label, &[]).unwrap(),
                LaurentPoly::from_int(Var::Q, ch.dim as i64)
            );
        }
        assert!(matches!(
            g12.eval_word("phi{1,0}", &word("x")),
            Err(DataError::UnknownSymbol { .. })
        ));
        assert!(matches!(
            g12.eval_word("phi{9,9}", &[]),
            Err(DataError::UnknownLabel { .. })
        ));
    }

    #[test]
    fn braid_words_agree() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        for ch in &g4.characters {
            let sts = g4.eval_word(&ch.label, &word("sts")).unwrap();
            let tst = g4.eval_word(&ch.label, &word("tst")).unwrap();
            assert_eq!(sts, tst, "{}", ch.label);
        }
    }

    #[test]
    fn shipped_datasets_validate() {
        for name in ["g4.json", "g12.json"] {
            let ds = load_dataset(data_path(name)).unwrap();
            let report = validate_dataset(&ds);
            assert!(report.all_pass(), "{name}:\n{report}");
        }
    }

    #[test]
    fn missing_schur_is_label_mismatch() {
        let text = std::fs::read_to_string(data_path("g4.json")).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["schur"].as_object_mut().unwrap().remove("phi{2,1}");
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("broken.json");
        std::fs::write(&p, serde_json::to_string(&v).unwrap()).unwrap();
        assert!(matches!(
            load_dataset(&p),
            Err(DataError::LabelMismatch(_))
        ));
    }

    #[test]
    fn empty_file_is_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("empty.json");
        std::fs::write(&p, "").unwrap();
        assert!(matches!(load_dataset(&p), Err(DataError::Parse { .. })));
    }
}
