//! The decomposition-matrix engine: exact eigen machinery, irreducibility
//! certificates, the N-linear decomposition solver, and the hypothesis
//! search that assembles the full matrix.
//!
//! Everything runs over explicit cyclotomic fields. All iteration orders
//! are fixed by the dataset's label order, so results are byte-reproducible.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use serde::Serialize;

use crate::basicsets;
use crate::blocks;
use crate::exactnum::{Cyclotomic, Rat};
use crate::heckedata::{DataError, Dataset};
use crate::laurent::LaurentError;
use crate::speceng::{cyc_identity, cyc_mat_mul, cyc_trace, spec_report, specialize_rep, CycMat, Specialization};

/// A word in the generators, by generator index.
pub type Word = Vec<usize>;

#[derive(Debug, thiserror::Error)]
pub enum DecompError {
    #[error("word basis: character rank {rank} of {need} not reached at length cap {cap}")]
    WordBasisCap { cap: u32, rank: usize, need: usize },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    BasicSets(#[from] basicsets::BasicSetsError),
    #[error(transparent)]
    Blocks(#[from] blocks::BlockError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IrreducibleReason {
    DefectZero,
    DimOne,
    DimTwoNoInvariantLine,
    SearchHypothesisVerified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Certificate {
    Irreducible { reason: IrreducibleReason },
    Reducible { witness: BTreeMap<String, u32> },
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TieRecord {
    pub kind: String,
    pub labels: Vec<String>,
}

/// The decomposition matrix of one specialization, with one row per
/// ordinary character and one column per modular-irreducible class,
/// each column named by its minimal-a lift.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionMatrix {
    pub spec: Specialization,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<u32>>,
    pub certificates: BTreeMap<String, Certificate>,
    /// Defect-zero singletons first, then the modular-equality classes in
    /// order of first appearance.
    pub classes: Vec<Vec<String>>,
    pub defect_zero: Vec<String>,
    pub semisimple: bool,
    pub ties: Vec<TieRecord>,
    /// Surviving hypothesis-search candidates, when the search ran.
    pub search_candidates: Option<Vec<Vec<String>>>,
    /// Unit rows of each column, i.e. the ordinary lifts of the class.
    pub col_lifts: BTreeMap<String, Vec<String>>,
    pub word_basis: Vec<String>,
    pub word_basis_len: u32,
}

pub struct WordBasis {
    pub words: Vec<Word>,
    pub max_len: u32,
}

pub fn render_word(ds: &Dataset, w: &Word) -> String {
    w.iter()
        .map(|&g| ds.group.generators[g].as_str())
        .collect::<Vec<_>>()
        .join("")
}

/// Rank of a matrix of cyclotomics by Gaussian elimination.
pub fn cyc_rank(rows: &[Vec<Cyclotomic>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut a: Vec<Vec<Cyclotomic>> = rows.to_vec();
    let (nr, nc) = (a.len(), a[0].len());
    let mut r = 0;
    for c in 0..nc {
        let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = &*x * &pv;
        }
        for i in 0..nr {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..nc {
                    let t = &a[i][j] - &(&f * &a[r][j]);
                    a[i][j] = t;
                }
            }
        }
        r += 1;
        if r == nr {
            break;
        }
    }
    r
}

/// Exact nullspace basis of a rows x cols matrix.
pub fn cyc_nullspace(m: &[Vec<Cyclotomic>]) -> Vec<Vec<Cyclotomic>> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut a: Vec<Vec<Cyclotomic>> = m.to_vec();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = &*x * &pv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &a[i][j] - &(&f * &a[r][j]);
                    a[i][j] = t;
                }
            }
        }
        piv_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for fc in 0..cols {
        if piv_cols.contains(&fc) {
            continue;
        }
        let mut v = vec![Cyclotomic::zero(); cols];
        v[fc] = Cyclotomic::one();
        for (i, &pc) in piv_cols.iter().enumerate() {
            v[pc] = a[i][fc].neg();
        }
        basis.push(v);
    }
    basis
}

/// Exact basis of `ker(m - lambda I)`.
pub fn eigenspace(m: &CycMat, lambda: &Cyclotomic) -> Vec<Vec<Cyclotomic>> {
    let d = m.len();
    let shifted: Vec<Vec<Cyclotomic>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        &m[i][j] - lambda
                    } else {
                        m[i][j].clone()
                    }
                })
                .collect()
        })
        .collect();
    cyc_nullspace(&shifted)
}

/// All lines (one representative per basis vector of each simultaneous
/// eigenspace) fixed by every matrix with an eigenvalue from its allowed
/// list. Vectors are normalized so the first nonzero coordinate is 1 and
/// returned with their eigenvalue tuple.
pub fn common_invariant_line(
    mats: &[CycMat],
    allowed: &[Vec<Cyclotomic>],
) -> Vec<(Vec<Cyclotomic>, Vec<Cyclotomic>)> {
    let d = mats[0].len();
    let dedup: Vec<Vec<Cyclotomic>> = allowed
        .iter()
        .map(|al| {
            let mut seen: Vec<Cyclotomic> = Vec::new();
            for x in al {
                if seen.iter().all(|y| !(x - y).is_zero()) {
                    seen.push(x.clone());
                }
            }
            seen
        })
        .collect();
    let mut out = Vec::new();
    for tup in dedup.iter().multi_cartesian_product() {
        let mut rows = Vec::with_capacity(mats.len() * d);
        for (m, lam) in mats.iter().zip(&tup) {
            for i in 0..d {
                rows.push(
                    (0..d)
                        .map(|j| {
                            if i == j {
                                &m[i][j] - *lam
                            } else {
                                m[i][j].clone()
                            }
                        })
                        .collect::<Vec<_>>(),
                );
            }
        }
        for v in cyc_nullspace(&rows) {
            let piv = v.iter().position(|e| !e.is_zero()).expect("basis vector");
            let inv = v[piv].inv().expect("nonzero");
            let norm: Vec<Cyclotomic> = v.iter().map(|e| e * &inv).collect();
            out.push((norm, tup.iter().map(|&l| l.clone()).collect()));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Ok(Vec<Cyclotomic>),
    NoFieldSolution,
    Dependent,
}

/// Solve `sum c_i basis_i = target` over the cyclotomic field; the basis
/// must be independent for the solution to be unique.
pub fn solve_unique(basis: &[Vec<Cyclotomic>], target: &[Cyclotomic]) -> SolveOutcome {
    let k = basis.len();
    let m = target.len();
    let mut a: Vec<Vec<Cyclotomic>> = (0..m)
        .map(|i| {
            let mut row: Vec<Cyclotomic> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = &*x * &pv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=k {
                    let t = &a[i][j] - &(&f * &a[r][j]);
                    a[i][j] = t;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    if piv.len() < k {
        return SolveOutcome::Dependent;
    }
    for row in a.iter().take(m).skip(r) {
        if !row[k].is_zero() {
            return SolveOutcome::NoFieldSolution;
        }
    }
    let mut x = vec![Cyclotomic::zero(); k];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = a[i][k].clone();
    }
    SolveOutcome::Ok(x)
}

#[derive(Debug, Clone, PartialEq)]
pub enum NnintOutcome {
    Ok(Vec<u32>),
    NoFieldSolution,
    NonInteger,
    Negative,
    Dependent,
}

/// The unique field solution restricted to nonnegative integers; the three
/// failure modes are reported distinctly.
pub fn nnint_decompose(target: &[Cyclotomic], basis: &[Vec<Cyclotomic>]) -> NnintOutcome {
    let coeffs = match solve_unique(basis, target) {
        SolveOutcome::Ok(c) => c,
        SolveOutcome::NoFieldSolution => return NnintOutcome::NoFieldSolution,
        SolveOutcome::Dependent => return NnintOutcome::Dependent,
    };
    let mut out = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let Some(r) = c.as_rational() else {
            return NnintOutcome::NonInteger;
        };
        if !r.is_integer() {
            return NnintOutcome::NonInteger;
        }
        let n = r.to_integer();
        if n < 0.into() {
            return NnintOutcome::Negative;
        }
        out.push(u32::try_from(&n).expect("small multiplicity"));
    }
    NnintOutcome::Ok(out)
}

/// Deterministic word list: all products of generators of length <= L,
/// with L grown until the generic character matrix has full row rank.
/// Rank is probed at the rational points q = 2 and q = 3.
pub fn word_basis(ds: &Dataset, cap: u32) -> Result<WordBasis, DecompError> {
    let nsym = ds.group.generators.len();
    let labels = ds.labels();
    let need = labels.len();
    let mut best_rank = 0;
    for q0 in [2i64, 3] {
        let x = Cyclotomic::from_int(q0);
        let gen_at: Vec<Vec<CycMat>> = labels
            .iter()
            .map(|l| {
                ds.representations[l]
                    .matrices
                    .iter()
                    .map(|m| {
                        m.iter()
                            .map(|row| {
                                row.iter()
                                    .map(|e| e.eval_cyc(&x).expect("nonzero point"))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut words: Vec<Word> = vec![vec![]];
        let mut prev_words: Vec<Word> = vec![vec![]];
        let mut prev_mats: Vec<Vec<CycMat>> = labels
            .iter()
            .map(|l| vec![cyc_identity(ds.character(l).expect("known label").dim)])
            .collect();
        let mut rows: Vec<Vec<Cyclotomic>> = prev_mats
            .iter()
            .map(|ms| vec![cyc_trace(&ms[0])])
            .collect();
        for len in 1..=cap {
            let mut cur_words: Vec<Word> = Vec::with_capacity(prev_words.len() * nsym);
            let mut cur_mats: Vec<Vec<CycMat>> = vec![Vec::new(); need];
            for (wi, w) in prev_words.iter().enumerate() {
                for gi in 0..nsym {
                    let mut nw = w.clone();
                    nw.push(gi);
                    cur_words.push(nw);
                    for li in 0..need {
                        let m = cyc_mat_mul(&prev_mats[li][wi], &gen_at[li][gi]);
                        rows[li].push(cyc_trace(&m));
                        cur_mats[li].push(m);
                    }
                }
            }
            words.extend(cur_words.iter().cloned());
            prev_words = cur_words;
            prev_mats = cur_mats;
            let rank = cyc_rank(&rows);
            best_rank = best_rank.max(rank);
            if rank == need {
                return Ok(WordBasis {
                    words,
                    max_len: len,
                });
            }
        }
    }
    Err(DecompError::WordBasisCap {
        cap,
        rank: best_rank,
        need,
    })
}

/// Character vectors of every label over `words` at the specialization,
/// plus the specialized generator matrices.
pub fn char_vectors(
    ds: &Dataset,
    spec: &Specialization,
    words: &[Word],
) -> (BTreeMap<String, Vec<Cyclotomic>>, BTreeMap<String, Vec<CycMat>>) {
    let mut index: HashMap<&[usize], usize> = HashMap::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        index.insert(w.as_slice(), i);
    }
    let mut vectors = BTreeMap::new();
    let mut gen_mats = BTreeMap::new();
    for ch in &ds.characters {
        let gens = specialize_rep(&ds.representations[&ch.label], spec);
        let mut mats: Vec<CycMat> = Vec::with_capacity(words.len());
        let mut v = Vec::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            let m = if w.is_empty() {
                cyc_identity(ch.dim)
            } else {
                let parent = index[&w[..w.len() - 1]];
                debug_assert!(parent < i);
                cyc_mat_mul(&mats[parent], &gens[w[w.len() - 1]])
            };
            v.push(cyc_trace(&m));
            mats.push(m);
        }
        vectors.insert(ch.label.clone(), v);
        gen_mats.insert(ch.label.clone(), gens);
    }
    (vectors, gen_mats)
}

struct LabelOrder {
    index: BTreeMap<String, usize>,
}

impl LabelOrder {
    fn new(ds: &Dataset) -> Self {
        LabelOrder {
            index: ds
                .characters
                .iter()
                .enumerate()
                .map(|(i, c)| (c.label.clone(), i))
                .collect(),
        }
    }
    fn key(&self, label: &str) -> usize {
        self.index[label]
    }
    fn sort(&self, labels: &mut [String]) {
        labels.sort_by_key(|l| self.key(l));
    }
}

/// Candidate subsets of unresolved class names, smallest size first, that
/// satisfy: (a) every other unresolved class N-decomposes over
/// base + candidate, (b) no candidate member N-decomposes over the rest,
/// and the caller's global check (Lemma GR, lambda linkage). All accepted
/// candidates of the minimal viable size are returned.
fn search_hypotheses(
    vectors: &BTreeMap<String, Vec<Cyclotomic>>,
    base_names: &[String],
    unresolved: &[(String, Vec<String>)],
    order: &[String],
    mut global_check: impl FnMut(&[String]) -> Result<bool, DecompError>,
) -> Result<Vec<Vec<String>>, DecompError> {
    let mut accepted: Vec<Vec<String>> = Vec::new();
    for size in 1..=order.len() {
        for combo in (0..order.len()).combinations(size) {
            let b_names: Vec<String> = combo.iter().map(|&i| order[i].clone()).collect();
            let full: Vec<String> = base_names
                .iter()
                .cloned()
                .chain(b_names.iter().cloned())
                .collect();
            let basis: Vec<Vec<Cyclotomic>> =
                full.iter().map(|n| vectors[n].clone()).collect();
            let mut ok = true;
            for (name, _) in unresolved {
                if b_names.contains(name) {
                    continue;
                }
                if !matches!(nnint_decompose(&vectors[name], &basis), NnintOutcome::Ok(_)) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            for bn in &b_names {
                let others: Vec<Vec<Cyclotomic>> = full
                    .iter()
                    .filter(|n| *n != bn)
                    .map(|n| vectors[n].clone())
                    .collect();
                if matches!(nnint_decompose(&vectors[bn], &others), NnintOutcome::Ok(_)) {
                    ok = false;
                    break;
                }
            }
            if ok && global_check(&b_names)? {
                accepted.push(b_names);
            }
        }
        if !accepted.is_empty() {
            break;
        }
    }
    Ok(accepted)
}

pub fn decomposition_matrix(
    ds: &Dataset,
    spec: &Specialization,
    basis: &WordBasis,
) -> Result<DecompositionMatrix, DecompError> {
    let words = &basis.words;
    let labels = ds.labels();
    let order = LabelOrder::new(ds);
    let report = spec_report(ds, spec);
    let dz: Vec<String> = labels
        .iter()
        .filter(|l| report.defect_zero.contains(*l))
        .cloned()
        .collect();
    let rendered_words: Vec<String> = words.iter().map(|w| render_word(ds, w)).collect();
    let (vectors, gen_mats) = char_vectors(ds, spec, words);

    if report.semisimple {
        let n = labels.len();
        return Ok(DecompositionMatrix {
            spec: spec.clone(),
            rows: labels.clone(),
            cols: labels.clone(),
            entries: (0..n)
                .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
                .collect(),
            certificates: labels
                .iter()
                .map(|l| {
                    (
                        l.clone(),
                        Certificate::Irreducible {
                            reason: IrreducibleReason::DefectZero,
                        },
                    )
                })
                .collect(),
            classes: labels.iter().map(|l| vec![l.clone()]).collect(),
            defect_zero: dz,
            semisimple: true,
            ties: Vec::new(),
            search_candidates: None,
            col_lifts: labels.iter().map(|l| (l.clone(), vec![l.clone()])).collect(),
            word_basis: rendered_words,
            word_basis_len: basis.max_len,
        });
    }

    let mut ties: Vec<TieRecord> = Vec::new();
    let a_vals: BTreeMap<String, Rat> = labels
        .iter()
        .map(|l| (l.clone(), basicsets::a_value(ds, l).expect("valid dataset")))
        .collect();

    // Step 3: modular-equality classes over the non-defect-zero labels.
    let rest: Vec<String> = labels
        .iter()
        .filter(|l| !report.defect_zero.contains(*l))
        .cloned()
        .collect();
    let mut classes: Vec<Vec<String>> = Vec::new();
    for l in &rest {
        if let Some(cl) = classes.iter_mut().find(|cl| vectors[&cl[0]] == vectors[l]) {
            cl.push(l.clone());
        } else {
            classes.push(vec![l.clone()]);
        }
    }
    let mut named: Vec<(String, Vec<String>)> = Vec::new();
    for cl in &classes {
        let best = cl
            .iter()
            .min_by_key(|l| (a_vals[*l].clone(), order.key(l)))
            .expect("nonempty class")
            .clone();
        let amin = &a_vals[&best];
        let tied: Vec<String> = cl.iter().filter(|l| &a_vals[*l] == amin).cloned().collect();
        if tied.len() > 1 {
            ties.push(TieRecord {
                kind: "class_name".into(),
                labels: tied,
            });
        }
        named.push((best, cl.clone()));
    }

    // Criteria (2)-(3): dimension-1 classes and dimension-2 classes
    // without an invariant line are irreducible.
    let mut certified: Vec<(String, Vec<String>, IrreducibleReason)> = Vec::new();
    let mut unresolved: Vec<(String, Vec<String>)> = Vec::new();
    let allowed: Vec<Vec<Cyclotomic>> = ds
        .group
        .generators
        .iter()
        .map(|g| {
            ds.group.parameters[g]
                .iter()
                .map(|p| p.eval_root(&spec.xi))
                .collect()
        })
        .collect();
    for (name, cl) in named.iter() {
        let dim = ds.character(name).expect("known label").dim;
        if dim == 1 {
            certified.push((name.clone(), cl.clone(), IrreducibleReason::DimOne));
        } else if dim == 2 {
            if common_invariant_line(&gen_mats[name], &allowed).is_empty() {
                certified.push((
                    name.clone(),
                    cl.clone(),
                    IrreducibleReason::DimTwoNoInvariantLine,
                ));
            } else {
                unresolved.push((name.clone(), cl.clone()));
            }
        } else {
            unresolved.push((name.clone(), cl.clone()));
        }
    }

    // Step 4: closure under N-decomposition over the certified set.
    let mut reducible: BTreeMap<String, (Vec<String>, BTreeMap<String, u32>)> = BTreeMap::new();
    let mut progress = true;
    while progress && !unresolved.is_empty() {
        progress = false;
        let basis_names: Vec<String> = dz
            .iter()
            .cloned()
            .chain(certified.iter().map(|(n, _, _)| n.clone()))
            .collect();
        let basis_vecs: Vec<Vec<Cyclotomic>> =
            basis_names.iter().map(|n| vectors[n].clone()).collect();
        let mut keep = Vec::new();
        for (name, cl) in unresolved {
            match nnint_decompose(&vectors[&name], &basis_vecs) {
                NnintOutcome::Ok(coeffs) => {
                    let witness: BTreeMap<String, u32> = basis_names
                        .iter()
                        .cloned()
                        .zip(coeffs.iter().copied())
                        .collect();
                    reducible.insert(name, (cl, witness));
                    progress = true;
                }
                _ => keep.push((name, cl)),
            }
        }
        unresolved = keep;
    }

    // Step 5: hypothesis search with the global consistency checks.
    let mut search_candidates: Option<Vec<Vec<String>>> = None;
    if !unresolved.is_empty() {
        let mut search_order: Vec<String> = unresolved.iter().map(|(n, _)| n.clone()).collect();
        search_order.sort_by_key(|n| {
            (
                ds.character(n).expect("known label").dim,
                a_vals[n].clone(),
                order.key(n),
            )
        });
        let base_names: Vec<String> = dz
            .iter()
            .cloned()
            .chain(certified.iter().map(|(n, _, _)| n.clone()))
            .collect();
        let degs_at = basicsets::generic_degree_values(ds, spec)?;
        let central = blocks::good_central(ds)?;
        let lambda_at: Option<BTreeMap<String, Cyclotomic>> = central.as_ref().map(|tab| {
            tab.values
                .iter()
                .map(|(l, v)| (l.clone(), v.eval_root(&spec.xi)))
                .collect()
        });
        let dz_set: BTreeSet<String> = dz.iter().cloned().collect();
        let accepted = search_hypotheses(
            &vectors,
            &base_names,
            &unresolved,
            &search_order,
            |b_names| {
                let mut cand_cols: Vec<String> = base_names
                    .iter()
                    .cloned()
                    .chain(b_names.iter().cloned())
                    .collect();
                order.sort(&mut cand_cols);
                let cand_basis: Vec<Vec<Cyclotomic>> =
                    cand_cols.iter().map(|n| vectors[n].clone()).collect();
                let mut cand_entries: Vec<Vec<u32>> = Vec::with_capacity(labels.len());
                for l in &labels {
                    match nnint_decompose(&vectors[l], &cand_basis) {
                        NnintOutcome::Ok(row) => cand_entries.push(row),
                        _ => return Ok(false),
                    }
                }
                // (c) Lemma GR must hold for every column
                let gr = basicsets::lemma_gr_columns(&degs_at, &labels, &cand_cols, &cand_entries);
                if !gr.values().all(|&ok| ok) {
                    return Ok(false);
                }
                // (d) lambda linkage: blocks must not join characters with
                // different central-element scalars
                if let Some(lam) = &lambda_at {
                    for (row_idx, _) in blocks::components(&labels, &cand_cols, &cand_entries) {
                        let vals: Vec<&Cyclotomic> = row_idx
                            .iter()
                            .map(|&i| &labels[i])
                            .filter(|l| !dz_set.contains(*l))
                            .map(|l| &lam[l])
                            .collect();
                        if vals.windows(2).any(|w| !(w[0] - w[1]).is_zero()) {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            },
        )?;
        if accepted.len() == 1 {
            let chosen: BTreeSet<String> = accepted[0].iter().cloned().collect();
            let mut still = Vec::new();
            for (n, cl) in unresolved {
                if chosen.contains(&n) {
                    certified.push((n, cl, IrreducibleReason::SearchHypothesisVerified));
                } else {
                    still.push((n, cl));
                }
            }
            let basis_names: Vec<String> = dz
                .iter()
                .cloned()
                .chain(certified.iter().map(|(n, _, _)| n.clone()))
                .collect();
            let basis_vecs: Vec<Vec<Cyclotomic>> =
                basis_names.iter().map(|n| vectors[n].clone()).collect();
            for (name, cl) in still {
                let NnintOutcome::Ok(coeffs) = nnint_decompose(&vectors[&name], &basis_vecs)
                else {
                    unreachable!("accepted hypothesis decomposes every class");
                };
                let witness: BTreeMap<String, u32> = basis_names
                    .iter()
                    .cloned()
                    .zip(coeffs.iter().copied())
                    .collect();
                reducible.insert(name, (cl, witness));
            }
            unresolved = Vec::new();
        }
        search_candidates = Some(accepted);
    }

    // Step 6: assemble every row over the final column set. Classes still
    // unresolved keep their own columns and are marked undetermined.
    let mut col_names: Vec<String> = dz
        .iter()
        .cloned()
        .chain(certified.iter().map(|(n, _, _)| n.clone()))
        .chain(unresolved.iter().map(|(n, _)| n.clone()))
        .collect();
    order.sort(&mut col_names);
    let basis_vecs: Vec<Vec<Cyclotomic>> =
        col_names.iter().map(|n| vectors[n].clone()).collect();
    let mut entries: Vec<Vec<u32>> = Vec::with_capacity(labels.len());
    for l in &labels {
        let NnintOutcome::Ok(row) = nnint_decompose(&vectors[l], &basis_vecs) else {
            panic!("row {l} does not decompose over the final columns");
        };
        entries.push(row);
    }

    let mut certificates: BTreeMap<String, Certificate> = BTreeMap::new();
    for l in &dz {
        certificates.insert(
            l.clone(),
            Certificate::Irreducible {
                reason: IrreducibleReason::DefectZero,
            },
        );
    }
    for (_, cl, reason) in &certified {
        for l in cl {
            certificates.insert(l.clone(), Certificate::Irreducible { reason: *reason });
        }
    }
    for (cl, witness) in reducible.values() {
        for l in cl {
            certificates.insert(
                l.clone(),
                Certificate::Reducible {
                    witness: witness.clone(),
                },
            );
        }
    }
    for (_, cl) in &unresolved {
        for l in cl {
            certificates.insert(l.clone(), Certificate::Undetermined);
        }
    }

    let mut all_classes: Vec<Vec<String>> = dz.iter().map(|l| vec![l.clone()]).collect();
    all_classes.extend(named.iter().map(|(_, cl)| cl.clone()));

    // Invariants: dimension conservation and the character identity.
    for (i, l) in labels.iter().enumerate() {
        let dim: usize = ds.character(l).expect("known label").dim;
        let total: usize = col_names
            .iter()
            .enumerate()
            .map(|(j, c)| entries[i][j] as usize * ds.character(c).expect("known label").dim)
            .sum();
        assert_eq!(dim, total, "dimension conservation for {l}");
        for wi in 0..words.len() {
            let mut s = Cyclotomic::zero();
            for (j, c) in col_names.iter().enumerate() {
                if entries[i][j] != 0 {
                    let term = Cyclotomic::from_int(entries[i][j] as i64);
                    s = &s + &(&term * &vectors[c][wi]);
                }
            }
            assert!(
                (&s - &vectors[l][wi]).is_zero(),
                "character identity for {l} at word {wi}"
            );
        }
    }

    // Column lifts and naming: the chosen name must be the minimal-a lift.
    let mut col_lifts = BTreeMap::new();
    for (j, c) in col_names.iter().enumerate() {
        let lifts: Vec<String> = labels
            .iter()
            .enumerate()
            .filter(|(i, _)| entries[*i][j] == 1 && entries[*i].iter().sum::<u32>() == 1)
            .map(|(_, l)| l.clone())
            .collect();
        let best = lifts
            .iter()
            .min_by_key(|l| (a_vals[*l].clone(), order.key(l)))
            .expect("every column has a unit row")
            .clone();
        let amin = &a_vals[&best];
        let tied: Vec<String> = lifts.iter().filter(|l| &a_vals[*l] == amin).cloned().collect();
        if tied.len() > 1 {
            ties.push(TieRecord {
                kind: "column_name".into(),
                labels: tied,
            });
        }
        assert_eq!(&best, c, "column named by its minimal-a lift");
        col_lifts.insert(c.clone(), lifts);
    }

    Ok(DecompositionMatrix {
        spec: spec.clone(),
        rows: labels,
        cols: col_names,
        entries,
        certificates,
        classes: all_classes,
        defect_zero: dz,
        semisimple: false,
        ties,
        search_candidates,
        col_lifts,
        word_basis: rendered_words,
        word_basis_len: basis.max_len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RootOfUnity;
    use crate::heckedata::load_dataset;
    use std::path::{Path, PathBuf};

    fn data_path(name: &str) -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../data")
            .join(name)
    }

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    #[test]
    fn eigenspace_examples() {
        let i = Cyclotomic::zeta(4);
        assert_eq!(eigenspace(&vec![vec![i.clone()]], &i).len(), 1);
        let id = cyc_identity(2);
        assert_eq!(eigenspace(&id, &c(1)).len(), 2);
        let d = vec![vec![c(1), c(0)], vec![c(0), i.clone()]];
        assert!(eigenspace(&d, &c(-1)).is_empty());
    }

    #[test]
    fn invariant_lines_of_diagonal_pair() {
        let i = Cyclotomic::zeta(4);
        let d = vec![vec![c(1), c(0)], vec![c(0), i.clone()]];
        let lines = common_invariant_line(
            &[d.clone(), d.clone()],
            &[vec![c(1), i.clone()], vec![c(1), i.clone()]],
        );
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].0, vec![c(1), c(0)]);
        assert_eq!(lines[0].1, vec![c(1), c(1)]);
        assert_eq!(lines[1].0, vec![c(0), c(1)]);
        assert_eq!(lines[1].1, vec![i.clone(), i.clone()]);
        let ones = common_invariant_line(
            &vec![vec![vec![c(1)]]; 3],
            &[vec![c(1)], vec![c(1)], vec![c(1)]],
        );
        assert_eq!(ones.len(), 1);
    }

    #[test]
    fn g12_phi21_at_zeta8_has_no_invariant_line() {
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(8, 1), g12.group.mu_order);
        let mats = specialize_rep(&g12.representations["phi{2,1}"], &spec);
        let i = Cyclotomic::zeta(4);
        let allowed = vec![vec![c(1), i.clone()]; 3];
        assert!(common_invariant_line(&mats, &allowed).is_empty());
    }

    #[test]
    fn nnint_outcomes() {
        let e1 = vec![c(1), c(0)];
        let e2 = vec![c(0), c(1)];
        assert_eq!(
            nnint_decompose(&vec![c(2), c(3)], &[e1.clone(), e2.clone()]),
            NnintOutcome::Ok(vec![2, 3])
        );
        assert_eq!(
            nnint_decompose(&e1, &[e1.clone(), e2.clone()]),
            NnintOutcome::Ok(vec![1, 0])
        );
        assert_eq!(
            nnint_decompose(&vec![c(-1), c(0)], &[e1.clone(), e2.clone()]),
            NnintOutcome::Negative
        );
        let half = Cyclotomic::from_rat(crate::exactnum::parse_rat("1/2").unwrap());
        assert_eq!(
            nnint_decompose(&vec![half, c(0)], &[e1.clone(), e2.clone()]),
            NnintOutcome::NonInteger
        );
        assert_eq!(
            nnint_decompose(&vec![c(1), c(1)], &[vec![c(1), c(0)]]),
            NnintOutcome::NoFieldSolution
        );
        assert_eq!(
            nnint_decompose(&vec![c(1), c(1)], &[e1.clone(), e1.clone()]),
            NnintOutcome::Dependent
        );
        let i = Cyclotomic::zeta(4);
        assert_eq!(
            nnint_decompose(&vec![i, c(0)], &[e1.clone(), e2.clone()]),
            NnintOutcome::NonInteger
        );
    }

    #[test]
    fn word_basis_lengths() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        let wb = word_basis(&g4, 12).unwrap();
        assert_eq!(wb.max_len, 6);
        assert_eq!(wb.words.len(), 127);
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let wb = word_basis(&g12, 12).unwrap();
        assert_eq!(wb.max_len, 6);
        assert_eq!(wb.words.len(), 1093);
    }

    #[test]
    fn nnint_spec_examples_at_zeta8() {
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(8, 1), g12.group.mu_order);
        let wb = word_basis(&g12, 12).unwrap();
        let (vectors, _) = char_vectors(&g12, &spec, &wb.words);
        let basis_names = ["phi{1,0}", "phi{2,1}", "phi{1,12}", "phi{2,4}", "phi{2,5}"];
        let basis: Vec<Vec<Cyclotomic>> =
            basis_names.iter().map(|n| vectors[*n].clone()).collect();
        assert_eq!(
            nnint_decompose(&vectors["phi{3,2}"], &basis),
            NnintOutcome::Ok(vec![1, 1, 0, 0, 0])
        );
        assert_eq!(
            nnint_decompose(&vectors["phi{3,6}"], &basis),
            NnintOutcome::Ok(vec![0, 1, 1, 0, 0])
        );
    }

    #[test]
    fn g12_zeta8_appendix_matrix() {
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(8, 1), g12.group.mu_order);
        let wb = word_basis(&g12, 12).unwrap();
        let dm = decomposition_matrix(&g12, &spec, &wb).unwrap();
        assert!(!dm.semisimple);
        assert_eq!(
            dm.cols,
            ["phi{1,0}", "phi{1,12}", "phi{2,1}", "phi{2,4}", "phi{2,5}"]
        );
        let expect = [
            ("phi{1,0}", [1, 0, 0, 0, 0]),
            ("phi{1,12}", [0, 1, 0, 0, 0]),
            ("phi{2,1}", [0, 0, 1, 0, 0]),
            ("phi{2,4}", [0, 0, 0, 1, 0]),
            ("phi{2,5}", [0, 0, 0, 0, 1]),
            ("phi{3,2}", [1, 0, 1, 0, 0]),
            ("phi{3,6}", [0, 1, 1, 0, 0]),
            ("phi{4,3}", [1, 1, 1, 0, 0]),
        ];
        for (label, row) in expect {
            let i = dm.rows.iter().position(|l| l == label).unwrap();
            assert_eq!(dm.entries[i], row, "{label}");
        }
        assert_eq!(dm.defect_zero, ["phi{2,4}", "phi{2,5}"]);
        assert_eq!(
            dm.certificates["phi{2,1}"],
            Certificate::Irreducible {
                reason: IrreducibleReason::DimTwoNoInvariantLine
            }
        );
        assert_eq!(
            dm.certificates["phi{4,3}"],
            Certificate::Reducible {
                witness: BTreeMap::from([
                    ("phi{1,0}".into(), 1),
                    ("phi{1,12}".into(), 1),
                    ("phi{2,1}".into(), 1),
                    ("phi{2,4}".into(), 0),
                    ("phi{2,5}".into(), 0),
                ])
            }
        );
    }

    #[test]
    fn semisimple_point_gives_identity() {
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(5, 1), g12.group.mu_order);
        let wb = word_basis(&g12, 12).unwrap();
        let dm = decomposition_matrix(&g12, &spec, &wb).unwrap();
        assert!(dm.semisimple);
        assert_eq!(dm.cols, dm.rows);
        for (i, row) in dm.entries.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert_eq!(e, u32::from(i == j));
            }
        }
    }

    #[test]
    fn g4_zeta6_matrix() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(6, 1), g4.group.mu_order);
        let wb = word_basis(&g4, 12).unwrap();
        let dm = decomposition_matrix(&g4, &spec, &wb).unwrap();
        assert_eq!(dm.cols, ["phi{1,0}", "phi{1,4}", "phi{1,8}", "phi{2,3}"]);
        assert_eq!(dm.defect_zero, ["phi{2,3}"]);
        assert_eq!(
            dm.entries,
            [
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![1, 1, 0, 0],
                vec![0, 0, 0, 1],
                vec![0, 1, 1, 0],
                vec![1, 1, 1, 0],
            ]
        );
        assert!(dm.ties.is_empty());
        assert!(dm.search_candidates.is_none());
        assert_eq!(dm.col_lifts["phi{1,0}"], ["phi{1,0}"]);
        assert_eq!(dm.col_lifts["phi{2,3}"], ["phi{2,3}"]);
    }

    #[test]
    fn hypothesis_search_synthetic() {
        // unresolved classes X = e1, Y = e2, Z = e1 + e2; the unique minimal
        // viable hypothesis is {X, Y}
        let vectors: BTreeMap<String, Vec<Cyclotomic>> = BTreeMap::from([
            ("X".to_string(), vec![c(1), c(0)]),
            ("Y".to_string(), vec![c(0), c(1)]),
            ("Z".to_string(), vec![c(1), c(1)]),
        ]);
        let unresolved: Vec<(String, Vec<String>)> = ["X", "Y", "Z"]
            .iter()
            .map(|n| (n.to_string(), vec![n.to_string()]))
            .collect();
        let order: Vec<String> = ["X", "Y", "Z"].iter().map(|s| s.to_string()).collect();
        let mut checked = Vec::new();
        let accepted = search_hypotheses(&vectors, &[], &unresolved, &order, |b| {
            checked.push(b.to_vec());
            Ok(true)
        })
        .unwrap();
        assert_eq!(accepted, vec![vec!["X".to_string(), "Y".to_string()]]);
        assert_eq!(checked.len(), 1);
        // a failing global check rejects the only candidate
        let accepted = search_hypotheses(&vectors, &[], &unresolved, &order, |_| Ok(false))
            .unwrap();
        assert!(accepted.is_empty());
    }
}
