//! Specialization engine: find the root-of-unity orders where the algebra
//! degenerates, evaluate representations and Schur elements there, and
//! report defect-zero characters and semisimplicity.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::exactnum::{Cyclotomic, RootOfUnity};
use crate::heckedata::{Dataset, Representation};
use crate::laurent::{LaurentPoly, LaurentRepr};

pub type CycMat = Vec<Vec<Cyclotomic>>;

/// Largest root-of-unity order considered when inferring which cyclotomic
/// a data-file factor is. Far above anything a rank-2 group needs.
pub const MAX_FACTOR_ORDER: u32 = 512;

/// A specialization point. The decomposition theory lives at the level of
/// `y` with `y^mu = q`; the result tables are keyed by the value of `q`.
/// Constructing from a q-value picks the principal lift for `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Specialization {
    /// Value of `y`.
    pub zeta: RootOfUnity,
    /// Value of `q`, always `zeta^mu_order`.
    pub xi: RootOfUnity,
}

impl Specialization {
    /// Lift a q-value `xi = zeta_m^k` to the principal y-root
    /// `zeta_{m * mu}^k`.
    pub fn from_q_root(xi: RootOfUnity, mu_order: u32) -> Self {
        let zeta = RootOfUnity::new(xi.order() * mu_order, xi.exponent() as i64);
        debug_assert_eq!(zeta.pow(mu_order), xi);
        Specialization { zeta, xi }
    }

    pub fn from_y_root(zeta: RootOfUnity, mu_order: u32) -> Self {
        let xi = zeta.pow(mu_order);
        Specialization { zeta, xi }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecReport {
    pub spec: Specialization,
    /// theta(s_chi) for every label.
    pub schur_values: BTreeMap<String, Cyclotomic>,
    /// Labels with nonzero specialized Schur element.
    pub defect_zero: BTreeSet<String>,
    pub semisimple: bool,
}

/// The least `m` such that `factor` divides `q^m - 1`, if any; this is the
/// order of the roots of a cyclotomic factor as shipped in a data file.
/// Factors with roots off the unit circle have none.
pub fn factor_root_order(factor: &LaurentPoly) -> Option<u32> {
    if factor.is_zero() || factor.degree().ok()? < 1 {
        return None;
    }
    let var = factor.var();
    for m in 1..=MAX_FACTOR_ORDER {
        let qm = &LaurentPoly::monomial(var, m as i64, Cyclotomic::one())
            - &LaurentPoly::one(var);
        if qm.exact_div(factor).is_ok() {
            return Some(m);
        }
    }
    None
}

/// Orders `m` (in the q-variable) at which some Schur element vanishes at
/// the primitive root `zeta_m`; everywhere else the specialized algebra is
/// semisimple. Candidates are the divisors of the lcm of the root orders
/// of the cyclotomic factors present in the data.
pub fn critical_orders(ds: &Dataset) -> BTreeSet<u32> {
    let mut factor_orders: BTreeSet<u32> = BTreeSet::new();
    let mut direct: BTreeSet<u32> = BTreeSet::new();
    for repr in ds.schur_repr.values() {
        match repr {
            LaurentRepr::Factored(f) => {
                for (factor, _) in &f.factors {
                    if let Some(m) = factor_root_order(factor) {
                        factor_orders.insert(m);
                    }
                }
            }
            LaurentRepr::Plain(p) => {
                for m in 1..=MAX_FACTOR_ORDER {
                    if p.eval_root(&RootOfUnity::new(m, 1)).is_zero() {
                        direct.insert(m);
                    }
                }
            }
        }
    }
    let lcm = factor_orders.iter().fold(1u32, |a, &b| num_integer::lcm(a, b));
    let mut candidates: BTreeSet<u32> = (1..=lcm).filter(|m| lcm % m == 0).collect();
    candidates.extend(direct);

    candidates
        .into_iter()
        .filter(|&m| {
            let xi = RootOfUnity::new(m, 1);
            ds.schur.values().any(|s| s.eval_root(&xi).is_zero())
        })
        .collect()
}

/// Evaluate every entry of every generator matrix at `q = xi`.
pub fn specialize_rep(rep: &Representation, spec: &Specialization) -> Vec<CycMat> {
    rep.matrices
        .iter()
        .map(|m| {
            m.iter()
                .map(|row| row.iter().map(|e| e.eval_root(&spec.xi)).collect())
                .collect()
        })
        .collect()
}

pub fn spec_report(ds: &Dataset, spec: &Specialization) -> SpecReport {
    let mut schur_values = BTreeMap::new();
    let mut defect_zero = BTreeSet::new();
    for ch in &ds.characters {
        let v = ds.schur[&ch.label].eval_root(&spec.xi);
        if !v.is_zero() {
            defect_zero.insert(ch.label.clone());
        }
        schur_values.insert(ch.label.clone(), v);
    }
    let semisimple = defect_zero.len() == ds.characters.len();
    SpecReport {
        spec: spec.clone(),
        schur_values,
        defect_zero,
        semisimple,
    }
}

pub fn cyc_identity(dim: usize) -> CycMat {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        Cyclotomic::one()
                    } else {
                        Cyclotomic::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn cyc_mat_mul(a: &CycMat, b: &CycMat) -> CycMat {
    let n = a.len();
    let mut out = vec![vec![Cyclotomic::zero(); n]; n];
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

pub fn cyc_trace(m: &CycMat) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    for (i, row) in m.iter().enumerate() {
        acc = &acc + &row[i];
    }
    acc
}

pub fn cyc_mat_eq(a: &CycMat, b: &CycMat) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heckedata::load_dataset;
    use std::path::{Path, PathBuf};

    fn data_path(name: &str) -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../data")
            .join(name)
    }

    #[test]
    fn critical_orders_of_shipped_groups() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        assert_eq!(
            critical_orders(&g4),
            BTreeSet::from([1u32, 2, 6, 12])
        );
        // 1 is the q -> -q twin of -1 and is critical as well
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        assert_eq!(
            critical_orders(&g12),
            BTreeSet::from([1u32, 2, 8, 12, 24])
        );
    }

    #[test]
    fn one_dim_reps_specialize_to_scalars() {
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(8, 1), g12.group.mu_order);
        let i = Cyclotomic::zeta(4);
        let triv = specialize_rep(&g12.representations["phi{1,0}"], &spec);
        let sign = specialize_rep(&g12.representations["phi{1,12}"], &spec);
        for g in 0..3 {
            assert_eq!(triv[g], vec![vec![Cyclotomic::one()]]);
            // q^2 at q = zeta_8 is i
            assert_eq!(sign[g], vec![vec![i.clone()]]);
        }
    }

    #[test]
    fn g12_at_zeta8_schur_values() {
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(8, 1), g12.group.mu_order);
        let report = spec_report(&g12, &spec);
        let values: Vec<Cyclotomic> = g12
            .labels()
            .iter()
            .map(|l| report.schur_values[l].clone())
            .collect();
        let expected: Vec<Cyclotomic> = [0, 0, 0, 4, -288, 0, 0, 0]
            .iter()
            .map(|&n| Cyclotomic::from_int(n))
            .collect();
        assert_eq!(values, expected);
        assert_eq!(
            report.defect_zero,
            BTreeSet::from(["phi{2,4}".to_string(), "phi{2,5}".to_string()])
        );
        assert!(!report.semisimple);
    }

    #[test]
    fn noncritical_order_is_semisimple() {
        let g12 = load_dataset(data_path("g12.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(5, 1), g12.group.mu_order);
        let report = spec_report(&g12, &spec);
        assert!(report.semisimple);
        assert!(report.schur_values.values().all(|v| !v.is_zero()));
    }

    #[test]
    fn specialization_is_a_ring_homomorphism() {
        let g4 = load_dataset(data_path("g4.json")).unwrap();
        let spec = Specialization::from_q_root(RootOfUnity::new(6, 1), g4.group.mu_order);
        let word: Vec<String> = ["s", "t"].iter().map(|s| s.to_string()).collect();
        let lp = g4.eval_word("phi{2,1}", &word).unwrap();
        let direct: CycMat = lp
            .iter()
            .map(|row| row.iter().map(|e| e.eval_root(&spec.xi)).collect())
            .collect();
        let mats = specialize_rep(&g4.representations["phi{2,1}"], &spec);
        let product = cyc_mat_mul(&mats[0], &mats[1]);
        assert_eq!(direct, product);
    }

    #[test]
    fn principal_lift() {
        let spec = Specialization::from_q_root(RootOfUnity::new(8, 3), 2);
        assert_eq!(spec.zeta, RootOfUnity::new(16, 3));
        assert_eq!(spec.xi, RootOfUnity::new(8, 3));
        let y = Specialization::from_y_root(RootOfUnity::new(16, 3), 2);
        assert_eq!(y.xi, RootOfUnity::new(8, 3));
    }
}
