//! a-values, generic degrees, canonical and optimal basic sets, and the
//! two degree conjectures, including an exact sign routine for real
//! cyclotomic numbers.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::blocks::Block;
use crate::decomp::DecompositionMatrix;
use crate::exactnum::{rat_int, Cyclotomic, Rat, RootOfUnity};
use crate::heckedata::{DataError, Dataset};
use crate::laurent::{LaurentError, LaurentPoly, LaurentRepr, Var};
use crate::speceng::Specialization;

#[derive(Debug, thiserror::Error)]
pub enum BasicSetsError {
    #[error("schur element of {label} is not stored in factored form")]
    NotFactored { label: String },
    #[error("generic degree of {label} is not Laurent: lcm is not divisible by its Schur element")]
    InexactDegree { label: String },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Valuation of the Schur element after the cyclotomic substitution
/// `q = y^mu`, renormalized back to the q-scale.
pub fn a_value(ds: &Dataset, label: &str) -> Result<Rat, BasicSetsError> {
    let mu = ds.group.mu_order;
    let s = ds.schur_element(label)?;
    let v = s.substitute_power(mu)?.valuation()?;
    Ok(Rat::new(v.into(), i64::from(mu).into()))
}

pub fn a_values(ds: &Dataset) -> Result<BTreeMap<String, Rat>, BasicSetsError> {
    ds.labels()
        .into_iter()
        .map(|l| a_value(ds, &l).map(|a| (l, a)))
        .collect()
}

#[derive(Debug, Clone)]
pub struct FineFactor {
    pub poly: LaurentPoly,
    pub mult: u32,
    pub order: Option<u32>,
}

/// Least common multiple of all Schur elements, assembled from their
/// stored factorizations: every distinct factor polynomial at its maximal
/// multiplicity, units and monomials dropped.
pub fn lcm_poincare(ds: &Dataset) -> Result<(LaurentPoly, Vec<FineFactor>), BasicSetsError> {
    let mut fine: Vec<FineFactor> = Vec::new();
    for l in ds.labels() {
        let LaurentRepr::Factored(fac) = &ds.schur_repr[&l] else {
            return Err(BasicSetsError::NotFactored { label: l });
        };
        for (poly, mult) in &fac.factors {
            if let Some(f) = fine
                .iter_mut()
                .find(|f| f.poly.checked_sub(poly).map(|d| d.is_zero()).unwrap_or(false))
            {
                f.mult = f.mult.max(*mult);
            } else {
                fine.push(FineFactor {
                    poly: poly.clone(),
                    mult: *mult,
                    order: crate::speceng::factor_root_order(poly),
                });
            }
        }
    }
    let mut p = LaurentPoly::one(Var::Q);
    for f in &fine {
        p = p.checked_mul(&f.poly.pow(f.mult))?;
    }
    Ok((p, fine))
}

/// `p / s_chi` for every label; exact by construction when `p` is the
/// Schur lcm, and exact up to the stored normalization for the Poincare
/// choice.
pub fn generic_degrees(
    ds: &Dataset,
    p: &LaurentPoly,
) -> Result<BTreeMap<String, LaurentPoly>, BasicSetsError> {
    let mut out = BTreeMap::new();
    for l in ds.labels() {
        let q = p
            .exact_div(ds.schur_element(&l)?)
            .map_err(|_| BasicSetsError::InexactDegree { label: l.clone() })?;
        out.insert(l, q);
    }
    Ok(out)
}

/// Generic degrees with respect to the Schur lcm, evaluated at the
/// specialization point.
pub fn generic_degree_values(
    ds: &Dataset,
    spec: &Specialization,
) -> Result<BTreeMap<String, Cyclotomic>, BasicSetsError> {
    let (p, _) = lcm_poincare(ds)?;
    let degs = generic_degrees(ds, &p)?;
    Ok(degs
        .into_iter()
        .map(|(l, d)| (l, d.eval_root(&spec.xi)))
        .collect())
}

/// Per column: the specialized generic degrees of its rows, weighted by
/// the decomposition numbers, must sum to zero.
pub fn lemma_gr_columns(
    degs_at: &BTreeMap<String, Cyclotomic>,
    rows: &[String],
    cols: &[String],
    entries: &[Vec<u32>],
) -> BTreeMap<String, bool> {
    let mut res = BTreeMap::new();
    for (j, c) in cols.iter().enumerate() {
        let mut s = Cyclotomic::zero();
        for (i, l) in rows.iter().enumerate() {
            if entries[i][j] != 0 {
                let w = Cyclotomic::from_int(entries[i][j] as i64);
                s = &s + &(&w * &degs_at[l]);
            }
        }
        res.insert(c.clone(), s.is_zero());
    }
    res
}

pub fn lemma_gr(
    ds: &Dataset,
    dm: &DecompositionMatrix,
) -> Result<BTreeMap<String, bool>, BasicSetsError> {
    let degs_at = generic_degree_values(ds, &dm.spec)?;
    Ok(lemma_gr_columns(&degs_at, &dm.rows, &dm.cols, &dm.entries))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasicSetDiag {
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

pub type BasicSetOutcome = (Option<BTreeMap<String, String>>, Option<BasicSetDiag>);

/// The unique row of strictly minimal a-value among the nonzero rows of
/// each column, where its entry is 1; fails with a diagnostic otherwise.
pub fn canonical_basic_set(
    ds: &Dataset,
    dm: &DecompositionMatrix,
) -> Result<BasicSetOutcome, BasicSetsError> {
    let avs = a_values(ds)?;
    let mut chosen = BTreeMap::new();
    for (j, c) in dm.cols.iter().enumerate() {
        let nz: Vec<(usize, &String)> = dm
            .rows
            .iter()
            .enumerate()
            .filter(|(i, _)| dm.entries[*i][j] != 0)
            .collect();
        let amin = nz.iter().map(|(_, l)| &avs[*l]).min().expect("nonzero column");
        let mins: Vec<(usize, &String)> = nz
            .iter()
            .filter(|(_, l)| &avs[*l] == amin)
            .cloned()
            .collect();
        if mins.len() != 1 {
            return Ok((
                None,
                Some(BasicSetDiag {
                    reason: "non_unique_min_a".into(),
                    column: Some(c.clone()),
                    label: None,
                    labels: Some(mins.iter().map(|(_, l)| (*l).clone()).collect()),
                }),
            ));
        }
        let (i, l) = mins[0];
        if dm.entries[i][j] != 1 {
            return Ok((
                None,
                Some(BasicSetDiag {
                    reason: "min_a_entry_not_one".into(),
                    column: Some(c.clone()),
                    label: Some(l.clone()),
                    labels: None,
                }),
            ));
        }
        if nz.iter().any(|(_, m)| *m != l && &avs[*m] <= amin) {
            return Ok((
                None,
                Some(BasicSetDiag {
                    reason: "not_strictly_minimal".into(),
                    column: Some(c.clone()),
                    label: None,
                    labels: None,
                }),
            ));
        }
        chosen.insert(c.clone(), l.clone());
    }
    let distinct: std::collections::BTreeSet<&String> = chosen.values().collect();
    if distinct.len() != dm.cols.len() {
        return Ok((
            None,
            Some(BasicSetDiag {
                reason: "not_bijective".into(),
                column: None,
                label: None,
                labels: None,
            }),
        ));
    }
    Ok((Some(chosen), None))
}

/// The minimal-(a, label) unit row of each column.
pub fn optimal_basic_set(
    ds: &Dataset,
    dm: &DecompositionMatrix,
) -> Result<BasicSetOutcome, BasicSetsError> {
    let avs = a_values(ds)?;
    let key = |l: &String| {
        (
            avs[l].clone(),
            ds.labels().iter().position(|x| x == l).expect("known label"),
        )
    };
    let mut out = BTreeMap::new();
    for c in &dm.cols {
        let lifts = &dm.col_lifts[c];
        if lifts.is_empty() {
            return Ok((
                None,
                Some(BasicSetDiag {
                    reason: "no_unit_row".into(),
                    column: Some(c.clone()),
                    label: None,
                    labels: None,
                }),
            ));
        }
        let best = lifts.iter().min_by_key(|l| key(l)).expect("nonempty").clone();
        out.insert(c.clone(), best);
    }
    let distinct: std::collections::BTreeSet<&String> = out.values().collect();
    if distinct.len() != dm.cols.len() {
        return Ok((
            None,
            Some(BasicSetDiag {
                reason: "not_bijective".into(),
                column: None,
                label: None,
                labels: None,
            }),
        ));
    }
    Ok((Some(out), None))
}

/// Per column: the weighted sum of generic degrees vanishes at the
/// specialization point to exactly the order of the Poincare lcm.
pub fn conj1(
    dm: &DecompositionMatrix,
    degs: &BTreeMap<String, LaurentPoly>,
    p: &LaurentPoly,
) -> Result<BTreeMap<String, bool>, BasicSetsError> {
    let xi = &dm.spec.xi;
    let ord_p = p.vanishing_order(xi)?;
    let mut res = BTreeMap::new();
    for (j, c) in dm.cols.iter().enumerate() {
        let mut v = LaurentPoly::zero(Var::Q);
        for (i, l) in dm.rows.iter().enumerate() {
            if dm.entries[i][j] != 0 {
                let w = LaurentPoly::constant(
                    Var::Q,
                    Cyclotomic::from_int(dm.entries[i][j] as i64),
                );
                v = v.checked_add(&w.checked_mul(&degs[l])?)?;
            }
        }
        res.insert(c.clone(), v.vanishing_order(xi)? == ord_p);
    }
    Ok(res)
}

/// Exact division by `(q - xi)^times`.
pub fn deflate(
    lp: &LaurentPoly,
    xi: &RootOfUnity,
    times: u32,
) -> Result<LaurentPoly, BasicSetsError> {
    if times == 0 {
        return Ok(lp.clone());
    }
    let linear = LaurentPoly::gen(Var::Q)
        .checked_sub(&LaurentPoly::constant(Var::Q, xi.to_cyclotomic()))?;
    Ok(lp.exact_div(&linear.pow(times))?)
}

#[derive(Debug, Clone, Serialize)]
pub struct Conj2Block {
    pub members: Vec<String>,
    #[serde(rename = "chi_B")]
    pub chi_b: String,
    pub min_a_tied: Option<Vec<String>>,
    pub ratios: BTreeMap<String, Option<Cyclotomic>>,
    pub holds: bool,
    #[serde(rename = "B_plus")]
    pub b_plus: Vec<String>,
    #[serde(rename = "B_minus")]
    pub b_minus: Vec<String>,
    pub l_mod2: BTreeMap<String, u8>,
}

/// Per block: deflated Schur ratios against the minimal-a member must be
/// real and nonzero, and their signs split the block.
pub fn conj2(
    ds: &Dataset,
    blocks: &[Block],
    xi: &RootOfUnity,
) -> Result<Vec<Conj2Block>, BasicSetsError> {
    let xival = xi.to_cyclotomic();
    let labels = ds.labels();
    let mut out = Vec::new();
    for b in blocks {
        let members = &b.rows;
        let avs: BTreeMap<String, Rat> = members
            .iter()
            .map(|l| a_value(ds, l).map(|a| (l.clone(), a)))
            .collect::<Result<_, _>>()?;
        let amin = avs.values().min().expect("nonempty block").clone();
        let mins: Vec<String> = members
            .iter()
            .filter(|l| avs[l.as_str()] == amin)
            .cloned()
            .collect();
        let chi_b = mins
            .iter()
            .min_by_key(|l| labels.iter().position(|x| x == *l).expect("known label"))
            .expect("nonempty")
            .clone();
        let ords: BTreeMap<String, u32> = members
            .iter()
            .map(|l| {
                let s = ds.schur_element(l)?;
                let o = s.vanishing_order(xi)?;
                Ok::<_, BasicSetsError>((l.clone(), o))
            })
            .collect::<Result<_, _>>()?;
        let s_chi = ds.schur_element(&chi_b)?;
        let mut ratios: BTreeMap<String, Option<Cyclotomic>> = BTreeMap::new();
        let mut holds = true;
        let mut b_plus = Vec::new();
        let mut b_minus = Vec::new();
        let mut l_mod2 = BTreeMap::new();
        for l in members {
            let t = ords[chi_b.as_str()].min(ords[l.as_str()]);
            let num = deflate(s_chi, xi, t)?.eval_cyc(&xival)?;
            let den = deflate(ds.schur_element(l)?, xi, t)?.eval_cyc(&xival)?;
            if den.is_zero() {
                holds = false;
                ratios.insert(l.clone(), None);
                continue;
            }
            let r = num.div(&den).expect("nonzero denominator");
            let real = (&r - &r.conj()).is_zero();
            let nonzero = !r.is_zero();
            holds = holds && real && nonzero;
            if real && nonzero {
                let sgn = real_sign(&r).expect("real value");
                if sgn > 0 {
                    b_plus.push(l.clone());
                    l_mod2.insert(l.clone(), 0u8);
                } else {
                    b_minus.push(l.clone());
                    l_mod2.insert(l.clone(), 1u8);
                }
            }
            ratios.insert(l.clone(), Some(r));
        }
        out.push(Conj2Block {
            members: members.clone(),
            chi_b,
            min_a_tied: if mins.len() > 1 { Some(mins) } else { None },
            ratios,
            holds,
            b_plus,
            b_minus,
            l_mod2,
        });
    }
    Ok(out)
}

// ---------- exact sign of a real cyclotomic ----------

#[derive(Debug, Clone)]
struct Interval {
    lo: Rat,
    hi: Rat,
}

impl Interval {
    fn point(x: Rat) -> Self {
        Interval { lo: x.clone(), hi: x }
    }
    fn zero() -> Self {
        Interval::point(Rat::zero())
    }
    fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }
    fn widen(&self, eps: &Rat) -> Interval {
        Interval {
            lo: &self.lo - eps,
            hi: &self.hi + eps,
        }
    }
    /// Multiply by an exact rational.
    fn scale(&self, c: &Rat) -> Interval {
        if c >= &Rat::zero() {
            Interval {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        } else {
            Interval {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        }
    }
    fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat_int(2)
    }
    fn radius(&self) -> Rat {
        (&self.hi - &self.lo) / rat_int(2)
    }
}

/// Bracketing interval for `atan(1/x)` from the alternating Leibniz
/// series; consecutive partial sums straddle the limit.
fn atan_inv_interval(x: i64, terms: usize) -> Interval {
    let mut s = Rat::zero();
    let mut prev = Rat::zero();
    let xr = rat_int(x);
    let x2 = &xr * &xr;
    let mut p = xr.recip();
    for k in 0..terms {
        prev = s.clone();
        let term = &p / rat_int(2 * k as i64 + 1);
        if k % 2 == 0 {
            s = &s + &term;
        } else {
            s = &s - &term;
        }
        p = &p / &x2;
    }
    if s <= prev {
        Interval { lo: s, hi: prev }
    } else {
        Interval { lo: prev, hi: s }
    }
}

fn pi_interval(terms: usize) -> Interval {
    let a = atan_inv_interval(5, terms).scale(&rat_int(16));
    let b = atan_inv_interval(239, terms).scale(&rat_int(-4));
    a.add(&b)
}

/// Rigorous enclosure of `cos` over a short interval: Taylor at the
/// midpoint with an alternating-tail bound, widened by the radius via the
/// Lipschitz constant 1.
fn cos_interval(theta: &Interval, terms: usize) -> Interval {
    let c = theta.midpoint();
    let c2 = &c * &c;
    let mut s = Rat::zero();
    let mut p = Rat::one();
    for k in 0..terms {
        if k > 0 {
            p = &p * &c2 / rat_int((2 * k as i64 - 1) * (2 * k as i64));
        }
        if k % 2 == 0 {
            s = &s + &p;
        } else {
            s = &s - &p;
        }
    }
    let tail = {
        let k = terms as i64;
        let t = &p * &c2 / rat_int((2 * k - 1) * (2 * k));
        t.abs() * rat_int(2)
    };
    Interval::point(s).widen(&(tail + theta.radius()))
}

/// Exact sign of a real cyclotomic number: `None` if the value is not
/// real, otherwise -1, 0, or 1. Irrational values are bracketed by
/// adaptive rational interval arithmetic, which terminates because a
/// nonzero field element is nonzero in the canonical embedding.
pub fn real_sign(x: &Cyclotomic) -> Option<i8> {
    if x.is_zero() {
        return Some(0);
    }
    if !(x - &x.conj()).is_zero() {
        return None;
    }
    if let Some(r) = x.as_rational() {
        return Some(if r.is_positive() { 1 } else { -1 });
    }
    let n = i64::from(x.order());
    for prec in 0..64 {
        let terms = 10 + 4 * prec;
        let pi = pi_interval(terms);
        let mut acc = Interval::zero();
        for (&e, c) in x.coeffs() {
            let theta = pi.scale(&Rat::new((2 * i64::from(e)).into(), n.into()));
            acc = acc.add(&cos_interval(&theta, terms).scale(c));
        }
        if acc.lo > Rat::zero() {
            return Some(1);
        }
        if acc.hi < Rat::zero() {
            return Some(-1);
        }
    }
    unreachable!("interval refinement did not separate a nonzero real value from zero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::block_partition;
    use crate::decomp::{decomposition_matrix, word_basis};
    use crate::exactnum::parse_rat;
    use crate::heckedata::load_dataset;
    use std::path::{Path, PathBuf};

    fn data_path(name: &str) -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../data")
            .join(name)
    }

    fn rint(n: i64) -> Rat {
        rat_int(n)
    }

    #[test]
    fn a_value_tables() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        let expect = [
            ("phi{1,0}", -12),
            ("phi{1,4}", -3),
            ("phi{1,8}", 0),
            ("phi{2,1}", -7),
            ("phi{2,3}", -3),
            ("phi{2,5}", -1),
            ("phi{3,2}", -3),
        ];
        for (l, a) in expect {
            assert_eq!(a_value(&g4, l).unwrap(), rint(a), "{l}");
        }
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let expect = [
            ("phi{1,0}", -24),
            ("phi{1,12}", 0),
            ("phi{2,1}", -4),
            ("phi{2,4}", -4),
            ("phi{2,5}", -4),
            ("phi{3,2}", -10),
            ("phi{3,6}", -2),
            ("phi{4,3}", -4),
        ];
        for (l, a) in expect {
            assert_eq!(a_value(&g12, l).unwrap(), rint(a), "{l}");
        }
    }

    #[test]
    fn poincare_lcm_and_degrees() {
        for name in ["g4.json", "g12.json"] {
            let ds = load_dataset(data_path(name)).unwrap();
            let (p, fine) = lcm_poincare(&ds).unwrap();
            assert!(!fine.is_empty());
            let degs = generic_degrees(&ds, &p).unwrap();
            assert_eq!(degs.len(), ds.labels().len());
            // the lcm is the trivial Schur element up to a single monomial
            let triv = ds.poincare_label.as_ref().unwrap();
            let ratio = p.exact_div(ds.schur_element(triv).unwrap()).unwrap();
            assert_eq!(ratio.terms().len(), 1);
        }
    }

    #[test]
    fn poincare_degrees_at_zeta8() {
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let triv = g12.poincare_label.clone().unwrap();
        let p = g12.schur_element(&triv).unwrap().clone();
        let degs = generic_degrees(&g12, &p).unwrap();
        let xi = RootOfUnity::new(8, 1);
        let expect = [
            ("phi{1,0}", 1),
            ("phi{1,12}", 1),
            ("phi{2,1}", 4),
            ("phi{2,4}", 0),
            ("phi{2,5}", 0),
            ("phi{3,2}", -3),
            ("phi{3,6}", -3),
            ("phi{4,3}", 2),
        ];
        for (l, v) in expect {
            assert_eq!(degs[l].eval_root(&xi), Cyclotomic::from_int(v), "{l}");
        }
    }

    #[test]
    fn lemma_gr_and_conjectures_at_g4_zeta6() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(6, 1), g4.group.mu_order);
        let wb = word_basis(&g4, 12).unwrap();
        let dm = decomposition_matrix(&g4, &spec, &wb).unwrap();
        let gr = lemma_gr(&g4, &dm).unwrap();
        assert!(gr.values().all(|&v| v));

        let (p, _) = lcm_poincare(&g4).unwrap();
        let degs = generic_degrees(&g4, &p).unwrap();
        let c1 = conj1(&dm, &degs, &p).unwrap();
        assert!(c1.values().all(|&v| v));

        let bl = block_partition(&dm);
        let c2 = conj2(&g4, &bl, &spec.xi).unwrap();
        assert_eq!(c2.len(), 2);
        let main = &c2[0];
        assert_eq!(main.chi_b, "phi{1,0}");
        assert_eq!(main.min_a_tied, None);
        assert!(main.holds);
        let expect = [
            ("phi{1,0}", 1),
            ("phi{1,4}", 3),
            ("phi{1,8}", 1),
            ("phi{2,1}", -2),
            ("phi{2,5}", -2),
            ("phi{3,2}", 1),
        ];
        for (l, v) in expect {
            assert_eq!(
                main.ratios[l].as_ref().unwrap(),
                &Cyclotomic::from_int(v),
                "{l}"
            );
        }
        assert_eq!(
            main.b_plus,
            ["phi{1,0}", "phi{1,4}", "phi{1,8}", "phi{3,2}"]
        );
        assert_eq!(main.b_minus, ["phi{2,1}", "phi{2,5}"]);
        assert_eq!(main.l_mod2["phi{2,1}"], 1);
        assert!(c2[1].holds);
    }

    #[test]
    fn canonical_and_optimal_sets() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(6, 1), g4.group.mu_order);
        let wb = word_basis(&g4, 12).unwrap();
        let dm = decomposition_matrix(&g4, &spec, &wb).unwrap();
        let (canon, diag) = canonical_basic_set(&g4, &dm).unwrap();
        assert_eq!(diag, None);
        let canon = canon.unwrap();
        assert_eq!(canon["phi{1,0}"], "phi{1,0}");
        assert_eq!(canon["phi{1,4}"], "phi{2,1}");
        assert_eq!(canon["phi{1,8}"], "phi{3,2}");
        assert_eq!(canon["phi{2,3}"], "phi{2,3}");
        let (opt, diag) = optimal_basic_set(&g4, &dm).unwrap();
        assert_eq!(diag, None);
        let opt = opt.unwrap();
        for c in &dm.cols {
            assert_eq!(&opt[c], c);
        }
    }

    #[test]
    fn canonical_diagnostics_fire() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(6, 1), g4.group.mu_order);
        let wb = word_basis(&g4, 12).unwrap();
        let mut dm = decomposition_matrix(&g4, &spec, &wb).unwrap();
        // a(phi{1,4}) = a(phi{2,3}) = -3: a column touching exactly these
        // two rows has no unique minimum
        let i14 = dm.rows.iter().position(|l| l == "phi{1,4}").unwrap();
        let i23 = dm.rows.iter().position(|l| l == "phi{2,3}").unwrap();
        for (i, row) in dm.entries.iter_mut().enumerate() {
            row[0] = u32::from(i == i14 || i == i23);
        }
        let (set, diag) = canonical_basic_set(&g4, &dm).unwrap();
        assert!(set.is_none());
        let diag = diag.unwrap();
        assert_eq!(diag.reason, "non_unique_min_a");
        assert_eq!(
            diag.labels,
            Some(vec!["phi{1,4}".to_string(), "phi{2,3}".to_string()])
        );
    }

    #[test]
    fn exact_signs() {
        // sqrt(2) - 1 > 0
        let z8 = Cyclotomic::zeta(8);
        let sqrt2 = &z8 - &z8.pow(3).unwrap();
        assert_eq!(real_sign(&(&sqrt2 - &Cyclotomic::from_int(1))), Some(1));
        assert_eq!(real_sign(&(&Cyclotomic::from_int(2) - &sqrt2)), Some(1));
        // golden ratio combinations: 2 cos(72) > 0, 2 cos(144) < 0
        let z5 = Cyclotomic::zeta(5);
        assert_eq!(real_sign(&(&z5 + &z5.pow(4).unwrap())), Some(1));
        assert_eq!(
            real_sign(&(&z5.pow(2).unwrap() + &z5.pow(3).unwrap())),
            Some(-1)
        );
        // rational fast path and zero
        assert_eq!(real_sign(&Cyclotomic::from_rat(parse_rat("-7/3").unwrap())), Some(-1));
        assert_eq!(real_sign(&Cyclotomic::zero()), Some(0));
        // non-real input is rejected
        assert_eq!(real_sign(&Cyclotomic::zeta(4)), None);
        // a tighter margin: sqrt(2) - 141/100 > 0 but only by 4e-3
        let tight = &sqrt2 - &Cyclotomic::from_rat(parse_rat("141/100").unwrap());
        assert_eq!(real_sign(&tight), Some(1));
        let tighter = &sqrt2 - &Cyclotomic::from_rat(parse_rat("1414213/1000000").unwrap());
        assert_eq!(real_sign(&tighter), Some(1));
    }

    #[test]
    fn deflate_matches_vanishing_order() {
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let xi = RootOfUnity::new(8, 1);
        let s = g12.schur_element("phi{1,0}").unwrap();
        let t = s.vanishing_order(&xi).unwrap();
        assert!(t > 0);
        let d = deflate(s, &xi, t).unwrap();
        assert!(!d.eval_cyc(&xi.to_cyclotomic()).unwrap().is_zero());
        assert!(deflate(s, &xi, t + 1).is_err());
    }
}
