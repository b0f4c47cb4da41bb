//! Block structure of a decomposition matrix: the connected components of
//! its row/column bipartite graph, their catalogue shapes, and the central
//! character data that links rows of a common block.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::decomp::DecompositionMatrix;
use crate::exactnum::{Cyclotomic, RootOfUnity};
use crate::heckedata::{lp_mat_mul, DataError, Dataset, LpMat};
use crate::laurent::LaurentPoly;

#[derive(Debug, thiserror::Error)]
pub enum BlockError {
    #[error("central candidate does not act as a scalar in {label}")]
    NonScalar { label: String },
    #[error(transparent)]
    Data(#[from] DataError),
}

fn lp_mat_eq(a: &LpMat, b: &LpMat) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(ra, rb)| {
            ra.len() == rb.len()
                && ra
                    .iter()
                    .zip(rb)
                    .all(|(x, y)| x.checked_sub(y).map(|d| d.is_zero()).unwrap_or(false))
        })
}

/// Does the word's image commute with every generator in every
/// representation?
pub fn verify_central(ds: &Dataset, word: &[String]) -> Result<bool, BlockError> {
    for ch in &ds.characters {
        let w = ds.eval_word(&ch.label, word)?;
        for g in &ds.representations[&ch.label].matrices {
            if !lp_mat_eq(&lp_mat_mul(&w, g), &lp_mat_mul(g, &w)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The scalar by which a central word acts in each representation.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    pub word: Vec<String>,
    pub values: BTreeMap<String, LaurentPoly>,
}

pub fn lambda_table(ds: &Dataset, word: &[String]) -> Result<LambdaTable, BlockError> {
    let mut values = BTreeMap::new();
    for ch in &ds.characters {
        let w = ds.eval_word(&ch.label, word)?;
        let scal = w[0][0].clone();
        for (i, row) in w.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let ok = if i == j {
                    e.checked_sub(&scal).map(|d| d.is_zero()).unwrap_or(false)
                } else {
                    e.is_zero()
                };
                if !ok {
                    return Err(BlockError::NonScalar {
                        label: ch.label.clone(),
                    });
                }
            }
        }
        values.insert(ch.label.clone(), scal);
    }
    Ok(LambdaTable {
        word: word.to_vec(),
        values,
    })
}

/// First central candidate of the dataset that both commutes with all
/// generators and acts as a scalar in every representation.
pub fn good_central(ds: &Dataset) -> Result<Option<LambdaTable>, BlockError> {
    for word in &ds.group.central_candidates {
        if !verify_central(ds, word)? {
            continue;
        }
        match lambda_table(ds, word) {
            Ok(tab) => return Ok(Some(tab)),
            Err(BlockError::NonScalar { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaPart {
    pub value: Cyclotomic,
    pub labels: Vec<String>,
}

/// Non-defect-zero labels grouped by the specialized central scalar, in
/// order of first appearance.
pub fn lambda_partition(
    ds: &Dataset,
    tab: &LambdaTable,
    xi: &RootOfUnity,
    dz: &BTreeSet<String>,
) -> Vec<LambdaPart> {
    let mut parts: Vec<LambdaPart> = Vec::new();
    for ch in &ds.characters {
        if dz.contains(&ch.label) {
            continue;
        }
        let v = tab.values[&ch.label].eval_root(xi);
        if let Some(p) = parts.iter_mut().find(|p| (&p.value - &v).is_zero()) {
            p.labels.push(ch.label.clone());
        } else {
            parts.push(LambdaPart {
                value: v,
                labels: vec![ch.label.clone()],
            });
        }
    }
    parts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShapeTag {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    Ii,
    #[serde(rename = "iii")]
    Iii,
    #[serde(rename = "iv")]
    Iv,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "defect_zero_singleton")]
    DefectZeroSingleton,
    #[serde(rename = "other")]
    Other,
}

impl ShapeTag {
    pub fn name(&self) -> &'static str {
        match self {
            ShapeTag::I => "i",
            ShapeTag::Ii => "ii",
            ShapeTag::Iii => "iii",
            ShapeTag::Iv => "iv",
            ShapeTag::V => "v",
            ShapeTag::DefectZeroSingleton => "defect_zero_singleton",
            ShapeTag::Other => "other",
        }
    }
}

fn catalogue() -> Vec<(ShapeTag, Vec<Vec<u32>>)> {
    vec![
        (ShapeTag::I, vec![vec![1], vec![1]]),
        (ShapeTag::Ii, vec![vec![1, 0], vec![1, 1], vec![0, 1]]),
        (
            ShapeTag::Iii,
            vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![1, 1], vec![1, 0]],
        ),
        (
            ShapeTag::Iv,
            vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![0, 1], vec![1, 0]],
        ),
        (
            ShapeTag::V,
            vec![
                vec![1, 0, 0],
                vec![1, 1, 0],
                vec![1, 1, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![0, 0, 1],
            ],
        ),
    ]
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Match a block against the catalogue, up to row order and column
/// permutation. A lone unit entry on a defect-zero row is its own tag.
pub fn shape_tag(sub: &[Vec<u32>], row_labels: &[String], dz: &[String]) -> ShapeTag {
    let (nr, nc) = (sub.len(), sub[0].len());
    if nr == 1 && nc == 1 && sub[0][0] == 1 && dz.contains(&row_labels[0]) {
        return ShapeTag::DefectZeroSingleton;
    }
    let mut rs: Vec<Vec<u32>> = sub.to_vec();
    rs.sort();
    for (tag, shape) in catalogue() {
        if shape.len() != nr || shape[0].len() != nc {
            continue;
        }
        for perm in permutations(nc) {
            let mut ps: Vec<Vec<u32>> = shape
                .iter()
                .map(|r| perm.iter().map(|&p| r[p]).collect())
                .collect();
            ps.sort();
            if ps == rs {
                return tag;
            }
        }
    }
    ShapeTag::Other
}

/// Connected components of the bipartite row/column graph of a matrix,
/// as sorted index lists, ordered by smallest row index.
pub fn components(
    rows: &[String],
    cols: &[String],
    entries: &[Vec<u32>],
) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (nr, nc) = (rows.len(), cols.len());
    let mut parent: Vec<usize> = (0..nr + nc).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..nr {
        for j in 0..nc {
            if entries[i][j] != 0 {
                let a = find(&mut parent, i);
                let b = find(&mut parent, nr + j);
                parent[a] = b;
            }
        }
    }
    let mut comps: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for i in 0..nr {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().0.push(i);
    }
    for j in 0..nc {
        let r = find(&mut parent, nr + j);
        comps.entry(r).or_default().1.push(j);
    }
    let mut out: Vec<(Vec<usize>, Vec<usize>)> = comps.into_values().collect();
    out.sort_by_key(|(ri, _)| ri.first().copied().unwrap_or(usize::MAX));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Block {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub sub: Vec<Vec<u32>>,
    pub shape: ShapeTag,
}

pub fn block_partition(dm: &DecompositionMatrix) -> Vec<Block> {
    components(&dm.rows, &dm.cols, &dm.entries)
        .into_iter()
        .map(|(ri, cj)| {
            let rows: Vec<String> = ri.iter().map(|&i| dm.rows[i].clone()).collect();
            let cols: Vec<String> = cj.iter().map(|&j| dm.cols[j].clone()).collect();
            let sub: Vec<Vec<u32>> = ri
                .iter()
                .map(|&i| cj.iter().map(|&j| dm.entries[i][j]).collect())
                .collect();
            let shape = shape_tag(&sub, &rows, &dm.defect_zero);
            Block {
                rows,
                cols,
                sub,
                shape,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{decomposition_matrix, word_basis};
    use crate::heckedata::load_dataset;
    use crate::speceng::Specialization;
    use std::path::{Path, PathBuf};

    fn data_path(name: &str) -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../data")
            .join(name)
    }

    fn words(ss: &[&str]) -> Vec<String> {
        ss.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn central_candidates() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        assert!(verify_central(&g4, &words(&["s", "t", "s", "t", "s", "t"])).unwrap());
        assert!(!verify_central(&g4, &words(&["s"])).unwrap());
        let tab = good_central(&g4).unwrap().unwrap();
        assert_eq!(tab.word.join(""), "ststst");
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let tab = good_central(&g12).unwrap().unwrap();
        assert_eq!(tab.word.join(""), "stusstusstus");
        // scalar at the trivial character is a plain power of q
        let v = &tab.values["phi{1,0}"];
        assert_eq!(v.terms().len(), 1);
    }

    #[test]
    fn non_scalar_word_is_rejected() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        let err = lambda_table(&g4, &words(&["s", "t"])).unwrap_err();
        assert!(matches!(err, BlockError::NonScalar { .. }));
    }

    #[test]
    fn shape_catalogue() {
        let lab = |n: usize| -> Vec<String> { (0..n).map(|i| format!("r{i}")).collect() };
        assert_eq!(
            shape_tag(&[vec![1]], &lab(1), &["r0".to_string()]),
            ShapeTag::DefectZeroSingleton
        );
        assert_eq!(
            shape_tag(&[vec![1]], &lab(1), &[]),
            ShapeTag::Other
        );
        assert_eq!(
            shape_tag(&[vec![1], vec![1]], &lab(2), &[]),
            ShapeTag::I
        );
        assert_eq!(
            shape_tag(&[vec![0, 1], vec![1, 1], vec![1, 0]], &lab(3), &[]),
            ShapeTag::Ii
        );
        // column swap of shape iii still matches iii, and is not iv
        assert_eq!(
            shape_tag(
                &[vec![0, 1], vec![1, 1], vec![1, 0], vec![1, 1], vec![0, 1]],
                &lab(5),
                &[]
            ),
            ShapeTag::Iii
        );
        assert_eq!(
            shape_tag(
                &[vec![1, 0], vec![0, 1], vec![1, 1], vec![0, 1], vec![1, 0]],
                &lab(5),
                &[]
            ),
            ShapeTag::Iv
        );
        assert_eq!(
            shape_tag(&[vec![1, 1], vec![1, 1]], &lab(2), &[]),
            ShapeTag::Other
        );
    }

    #[test]
    fn g12_zeta8_blocks_and_lambda() {
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(8, 1), g12.group.mu_order);
        let wb = word_basis(&g12, 12).unwrap();
        let dm = decomposition_matrix(&g12, &spec, &wb).unwrap();
        let bl = block_partition(&dm);
        assert_eq!(bl.len(), 3);
        assert_eq!(bl[0].shape, ShapeTag::V);
        assert_eq!(bl[0].cols, ["phi{1,0}", "phi{1,12}", "phi{2,1}"]);
        assert_eq!(
            bl[0].rows,
            [
                "phi{1,0}",
                "phi{1,12}",
                "phi{2,1}",
                "phi{3,2}",
                "phi{3,6}",
                "phi{4,3}"
            ]
        );
        assert_eq!(bl[1].shape, ShapeTag::DefectZeroSingleton);
        assert_eq!(bl[2].shape, ShapeTag::DefectZeroSingleton);

        // the block partition refines the central-character partition
        let tab = good_central(&g12).unwrap().unwrap();
        let dz: BTreeSet<String> = dm.defect_zero.iter().cloned().collect();
        let parts = lambda_partition(&g12, &tab, &spec.xi, &dz);
        for b in &bl {
            let nondz: Vec<&String> = b.rows.iter().filter(|l| !dz.contains(*l)).collect();
            if nondz.is_empty() {
                continue;
            }
            assert!(parts
                .iter()
                .any(|p| nondz.iter().all(|l| p.labels.contains(l))));
        }
    }
}
