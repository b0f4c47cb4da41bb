//! Laurent polynomials over cyclotomic fields in one named variable.
//!
//! Two variables exist in this crate: `q`, the parameter of the generic
//! algebra, and `y` with `y^mu = q` used for Schur-element valuations.
//! Arithmetic never mixes them; conversion goes through
//! [`LaurentPoly::substitute_power`].

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::{Cyclotomic, NumError, RootOfUnity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "q")]
    Q,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::Y => "y",
            Var::Q => "q",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LaurentError {
    #[error("variable mismatch: {left} vs {right}")]
    VarMismatch { left: Var, right: Var },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("inexact division, remainder {remainder}")]
    InexactDivision { remainder: Box<LaurentPoly> },
    #[error(transparent)]
    Num(#[from] NumError),
}

/// A Laurent polynomial with [`Cyclotomic`] coefficients. Zero coefficients
/// are never stored; the zero polynomial has an empty term map.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    var: Var,
    terms: BTreeMap<i64, Cyclotomic>,
}

impl LaurentPoly {
    pub fn zero(var: Var) -> Self {
        LaurentPoly {
            var,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(var: Var) -> Self {
        Self::constant(var, Cyclotomic::one())
    }

    pub fn constant(var: Var, c: Cyclotomic) -> Self {
        Self::monomial(var, 0, c)
    }

    pub fn from_int(var: Var, n: i64) -> Self {
        Self::constant(var, Cyclotomic::from_int(n))
    }

    pub fn monomial(var: Var, exp: i64, coeff: Cyclotomic) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { var, terms }
    }

    /// The variable itself, `x^1`.
    pub fn gen(var: Var) -> Self {
        Self::monomial(var, 1, Cyclotomic::one())
    }

    pub fn from_terms(var: Var, terms: impl IntoIterator<Item = (i64, Cyclotomic)>) -> Self {
        let mut map: BTreeMap<i64, Cyclotomic> = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.remove(&e) {
                None => {
                    map.insert(e, c);
                }
                Some(prev) => {
                    let s = &prev + &c;
                    if !s.is_zero() {
                        map.insert(e, s);
                    }
                }
            }
        }
        LaurentPoly { var, terms: map }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn terms(&self) -> &BTreeMap<i64, Cyclotomic> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> Cyclotomic {
        self.terms.get(&exp).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    /// Minimal exponent with nonzero coefficient.
    pub fn valuation(&self) -> Result<i64, LaurentError> {
        self.terms
            .keys()
            .next()
            .copied()
            .ok_or(LaurentError::ZeroPolynomial)
    }

    /// Maximal exponent with nonzero coefficient.
    pub fn degree(&self) -> Result<i64, LaurentError> {
        self.terms
            .keys()
            .next_back()
            .copied()
            .ok_or(LaurentError::ZeroPolynomial)
    }

    fn check_var(&self, other: &Self) -> Result<(), LaurentError> {
        if self.var != other.var {
            return Err(LaurentError::VarMismatch {
                left: self.var,
                right: other.var,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_var(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.remove(e) {
                None => {
                    terms.insert(*e, c.clone());
                }
                Some(prev) => {
                    let s = &prev + c;
                    if !s.is_zero() {
                        terms.insert(*e, s);
                    }
                }
            }
        }
        Ok(LaurentPoly {
            var: self.var,
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.checked_add(&other.negate())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_var(other)?;
        let mut terms: BTreeMap<i64, Cyclotomic> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                let prod = ca * cb;
                if prod.is_zero() {
                    continue;
                }
                match terms.remove(&e) {
                    None => {
                        terms.insert(e, prod);
                    }
                    Some(prev) => {
                        let s = &prev + &prod;
                        if !s.is_zero() {
                            terms.insert(e, s);
                        }
                    }
                }
            }
        }
        Ok(LaurentPoly {
            var: self.var,
            terms,
        })
    }

    pub fn negate(&self) -> Self {
        LaurentPoly {
            var: self.var,
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero(self.var);
        }
        LaurentPoly {
            var: self.var,
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Multiply by `x^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        LaurentPoly {
            var: self.var,
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.var);
        for _ in 0..n {
            acc = acc.checked_mul(self).expect("same variable");
        }
        acc
    }

    /// Exact value at a root of unity: `x = zeta` maps each term
    /// `c x^e` to `c zeta^e`, folding exponents modulo the order.
    pub fn eval_root(&self, at: &RootOfUnity) -> Cyclotomic {
        let n = at.order() as i64;
        let k = at.exponent() as i64;
        let mut acc = Cyclotomic::zero();
        for (e, c) in &self.terms {
            let exp = (e.rem_euclid(n) * k).rem_euclid(n) as u32;
            acc = &acc + &(c * &Cyclotomic::zeta_pow(at.order(), exp));
        }
        acc
    }

    /// Evaluate at an arbitrary nonzero cyclotomic. Fails only when the
    /// polynomial has negative exponents and `at` is zero.
    pub fn eval_cyc(&self, at: &Cyclotomic) -> Result<Cyclotomic, LaurentError> {
        if self.is_zero() {
            return Ok(Cyclotomic::zero());
        }
        let v = self.valuation().expect("nonzero");
        let d = self.degree().expect("nonzero");
        if v >= 0 {
            // Horner on the plain polynomial part, descending exponents.
            let mut acc = Cyclotomic::zero();
            let mut prev: Option<i64> = None;
            for (e, c) in self.terms.iter().rev() {
                if let Some(p) = prev {
                    for _ in 0..(p - e) {
                        acc = &acc * at;
                    }
                }
                acc = &acc + c;
                prev = Some(*e);
            }
            for _ in 0..prev.unwrap() {
                acc = &acc * at;
            }
            return Ok(acc);
        }
        let inv = at.inv()?;
        // x^v * (polynomial of degree d - v), evaluated as p(at) * inv^(-v)
        let shifted = self.shift(-v);
        debug_assert!(shifted.valuation().unwrap() == 0 && shifted.degree().unwrap() == d - v);
        let mut val = shifted.eval_cyc(at)?;
        for _ in 0..(-v) {
            val = &val * &inv;
        }
        Ok(val)
    }

    /// Reinterpret a polynomial in `q` as one in `y` via `y^k = q`:
    /// every exponent is multiplied by `k` and the tag becomes `y`.
    pub fn substitute_power(&self, k: u32) -> Result<Self, LaurentError> {
        if self.var != Var::Q {
            return Err(LaurentError::VarMismatch {
                left: self.var,
                right: Var::Q,
            });
        }
        assert!(k >= 1, "power substitution needs k >= 1");
        Ok(LaurentPoly {
            var: Var::Y,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e * k as i64, c.clone()))
                .collect(),
        })
    }

    /// Exact quotient `self / other`; the error carries the nonzero
    /// remainder when the division does not come out even.
    pub fn exact_div(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_var(other)?;
        if other.is_zero() {
            return Err(NumError::DivisionByZero.into());
        }
        if self.is_zero() {
            return Ok(Self::zero(self.var));
        }
        let va = self.valuation().expect("nonzero");
        let vb = other.valuation().expect("nonzero");
        let a = dense_coeffs(&self.shift(-va));
        let b = dense_coeffs(&other.shift(-vb));
        let (q, r) = poly_divmod(&a, &b);
        if r.iter().any(|c| !c.is_zero()) {
            let rem = from_dense(self.var, &r).shift(va);
            return Err(LaurentError::InexactDivision {
                remainder: Box::new(rem),
            });
        }
        Ok(from_dense(self.var, &q).shift(va - vb))
    }

    /// Multiplicity of the linear factor `(x - zeta)`, by repeated exact
    /// synthetic division of the polynomial part.
    pub fn vanishing_order(&self, at: &RootOfUnity) -> Result<u32, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        let v = self.valuation().expect("nonzero");
        let zeta = at.to_cyclotomic();
        let mut coeffs = dense_coeffs(&self.shift(-v));
        let mut order = 0;
        loop {
            if coeffs.len() == 1 {
                return Ok(order);
            }
            let (quot, rem) = synth_div(&coeffs, &zeta);
            if !rem.is_zero() {
                return Ok(order);
            }
            coeffs = quot;
            order += 1;
        }
    }
}

/// Coefficients `[c_0, ..., c_d]` of a polynomial with valuation >= 0.
fn dense_coeffs(p: &LaurentPoly) -> Vec<Cyclotomic> {
    let d = p.degree().expect("nonzero polynomial") as usize;
    let mut out = vec![Cyclotomic::zero(); d + 1];
    for (e, c) in &p.terms {
        out[*e as usize] = c.clone();
    }
    out
}

fn from_dense(var: Var, coeffs: &[Cyclotomic]) -> LaurentPoly {
    LaurentPoly::from_terms(
        var,
        coeffs
            .iter()
            .enumerate()
            .map(|(e, c)| (e as i64, c.clone())),
    )
}

/// Long division of dense polynomials over the coefficient field.
fn poly_divmod(a: &[Cyclotomic], b: &[Cyclotomic]) -> (Vec<Cyclotomic>, Vec<Cyclotomic>) {
    let db = b.len() - 1;
    debug_assert!(!b[db].is_zero());
    if a.len() <= db {
        return (vec![Cyclotomic::zero()], a.to_vec());
    }
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    let mut rem = a.to_vec();
    let mut quot = vec![Cyclotomic::zero(); a.len() - db];
    for i in (db..a.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let f = &rem[i] * &lead_inv;
        quot[i - db] = f.clone();
        for (j, bc) in b.iter().enumerate() {
            let t = &rem[i - db + j] - &(&f * bc);
            rem[i - db + j] = t;
        }
    }
    rem.truncate(db.max(1));
    (quot, rem)
}

/// Synthetic division of `p` (dense, ascending) by `(x - zeta)`.
fn synth_div(coeffs: &[Cyclotomic], zeta: &Cyclotomic) -> (Vec<Cyclotomic>, Cyclotomic) {
    let d = coeffs.len() - 1;
    let mut quot = vec![Cyclotomic::zero(); d];
    let mut carry = coeffs[d].clone();
    for i in (0..d).rev() {
        quot[i] = carry.clone();
        carry = &coeffs[i] + &(&carry * zeta);
    }
    (quot, carry)
}

/// The `d`-th cyclotomic polynomial, monic of degree phi(d), in `var`.
pub fn cyclotomic_poly(d: u32, var: Var) -> LaurentPoly {
    assert!(d >= 1);
    let mut known: BTreeMap<u32, LaurentPoly> = BTreeMap::new();
    for m in 1..=d {
        if d % m != 0 {
            continue;
        }
        // x^m - 1 divided by the product of Phi_e over proper divisors e of m
        let mut xm = LaurentPoly::monomial(var, m as i64, Cyclotomic::one());
        xm = xm
            .checked_sub(&LaurentPoly::one(var))
            .expect("same variable");
        let mut div = LaurentPoly::one(var);
        for (e, phi) in &known {
            if m % e == 0 && *e < m {
                div = div.checked_mul(phi).expect("same variable");
            }
        }
        let phi_m = xm.exact_div(&div).expect("cyclotomic polynomials divide x^m - 1");
        known.insert(m, phi_m);
    }
    known.remove(&d).expect("computed")
}

impl<'a> std::ops::Add for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("variable mismatch in +")
    }
}

impl<'a> std::ops::Sub for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("variable mismatch in -")
    }
}

impl<'a> std::ops::Mul for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("variable mismatch in *")
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.negate()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let (sign, mag) = match c.as_rational() {
                Some(r) if r < num_traits::Zero::zero() => {
                    ("-", Cyclotomic::from_rat(-r).to_string())
                }
                Some(r) => ("+", Cyclotomic::from_rat(r).to_string()),
                None => ("+", format!("({c})")),
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let coeff_is_one = mag == "1";
            match (*e, coeff_is_one) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "{}", self.var)?,
                (1, false) => write!(f, "{}*{}", mag, self.var)?,
                (_, true) => write!(f, "{}^{}", self.var, e)?,
                (_, false) => write!(f, "{}*{}^{}", mag, self.var, e)?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a BTreeMap<i64, Cyclotomic>);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (e, c) in self.0 {
                    map.serialize_entry(&e.to_string(), c)?;
                }
                map.end()
            }
        }
        let mut st = serializer.serialize_struct("LaurentPoly", 2)?;
        st.serialize_field("var", &self.var)?;
        st.serialize_field("terms", &Terms(&self.terms))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            var: Var,
            terms: BTreeMap<String, Cyclotomic>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let mut terms = BTreeMap::new();
        for (key, c) in repr.terms {
            let e: i64 = key
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("bad exponent key `{key}`")))?;
            if c.is_zero() {
                continue;
            }
            if terms.insert(e, c).is_some() {
                return Err(D::Error::custom(format!("duplicate exponent {e}")));
            }
        }
        Ok(LaurentPoly {
            var: repr.var,
            terms,
        })
    }
}

/// Factored storage form for Schur elements:
/// `unit * x^monomial * prod factor_i^mult_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactoredLaurent {
    pub var: Var,
    pub unit: Cyclotomic,
    pub monomial: i64,
    pub factors: Vec<(LaurentPoly, u32)>,
}

impl FactoredLaurent {
    pub fn expand(&self) -> Result<LaurentPoly, LaurentError> {
        let mut acc = LaurentPoly::monomial(self.var, self.monomial, self.unit.clone());
        for (f, mult) in &self.factors {
            if f.var() != self.var {
                return Err(LaurentError::VarMismatch {
                    left: self.var,
                    right: f.var(),
                });
            }
            for _ in 0..*mult {
                acc = acc.checked_mul(f)?;
            }
        }
        Ok(acc)
    }
}

/// A Laurent polynomial as it appears in a data file: either expanded
/// or in factored form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LaurentRepr {
    Plain(LaurentPoly),
    Factored(FactoredLaurent),
}

impl LaurentRepr {
    pub fn expand(&self) -> Result<LaurentPoly, LaurentError> {
        match self {
            LaurentRepr::Plain(p) => Ok(p.clone()),
            LaurentRepr::Factored(f) => f.expand(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_int;

    fn y() -> LaurentPoly {
        LaurentPoly::gen(Var::Y)
    }

    fn yc(n: i64) -> LaurentPoly {
        LaurentPoly::from_int(Var::Y, n)
    }

    #[test]
    fn ring_basics() {
        let a = &y() - &yc(1);
        let b = &y() + &yc(1);
        let prod = &a * &b;
        assert_eq!(prod, &LaurentPoly::monomial(Var::Y, 2, Cyclotomic::one()) - &yc(1));
        let q2 = LaurentPoly::monomial(Var::Q, 2, Cyclotomic::one());
        let sum = &(&q2 + &LaurentPoly::one(Var::Q)) + &q2.negate();
        assert!(sum.is_one());
        let inv_y = LaurentPoly::monomial(Var::Y, -1, Cyclotomic::one());
        assert!((&inv_y * &y()).is_one());
    }

    #[test]
    fn var_mismatch_is_an_error() {
        let e = y().checked_add(&LaurentPoly::gen(Var::Q)).unwrap_err();
        assert!(matches!(e, LaurentError::VarMismatch { .. }));
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1, Var::Y), &y() - &yc(1));
        let phi4 = cyclotomic_poly(4, Var::Y);
        assert_eq!(phi4, &y().pow(2) + &yc(1));
        assert_eq!(cyclotomic_poly(8, Var::Y), &y().pow(4) + &yc(1));
        let phi12 = cyclotomic_poly(12, Var::Y);
        assert_eq!(phi12, &(&y().pow(4) - &y().pow(2)) + &yc(1));
        for d in 1..=30u32 {
            let p = cyclotomic_poly(d, Var::Y);
            assert!(p.eval_root(&RootOfUnity::new(d, 1)).is_zero(), "Phi_{d}");
        }
    }

    #[test]
    fn eval_examples() {
        let p = &y() - &yc(1);
        assert!(p.eval_root(&RootOfUnity::one()).is_zero());
        let q2p1 = &LaurentPoly::monomial(Var::Q, 2, Cyclotomic::one()) + &LaurentPoly::one(Var::Q);
        assert!(q2p1.eval_root(&RootOfUnity::new(4, 1)).is_zero());
        let qinv = LaurentPoly::monomial(Var::Q, -1, Cyclotomic::one());
        assert_eq!(qinv.eval_root(&RootOfUnity::new(8, 1)), Cyclotomic::zeta_pow(8, 7));
        assert_eq!(
            qinv.eval_cyc(&Cyclotomic::from_int(2)).unwrap(),
            Cyclotomic::from_rat(crate::exactnum::parse_rat("1/2").unwrap())
        );
        assert!(qinv.eval_cyc(&Cyclotomic::zero()).is_err());
    }

    #[test]
    fn valuation_and_degree() {
        let p = LaurentPoly::from_terms(
            Var::Y,
            [(-1, Cyclotomic::one()), (-3, Cyclotomic::one())],
        );
        assert_eq!(p.valuation().unwrap(), -3);
        assert_eq!(p.degree().unwrap(), -1);
        let q5 = LaurentPoly::monomial(Var::Q, 5, Cyclotomic::one());
        assert_eq!(q5.valuation().unwrap(), 5);
        assert_eq!(yc(7).valuation().unwrap(), 0);
        assert!(matches!(
            LaurentPoly::zero(Var::Y).valuation(),
            Err(LaurentError::ZeroPolynomial)
        ));
    }

    #[test]
    fn substitute_power_examples() {
        let q2p1 = &LaurentPoly::monomial(Var::Q, 2, Cyclotomic::one()) + &LaurentPoly::one(Var::Q);
        let sub = q2p1.substitute_power(2).unwrap();
        assert_eq!(sub, &y().pow(4) + &yc(1));
        let qinv = LaurentPoly::monomial(Var::Q, -1, Cyclotomic::one());
        assert_eq!(
            qinv.substitute_power(6).unwrap(),
            LaurentPoly::monomial(Var::Y, -6, Cyclotomic::one())
        );
        assert!(LaurentPoly::one(Var::Q).substitute_power(3).unwrap().is_one());
        assert!(y().substitute_power(2).is_err());
    }

    #[test]
    fn exact_division() {
        let y2m1 = &y().pow(2) - &yc(1);
        let ym1 = &y() - &yc(1);
        assert_eq!(y2m1.exact_div(&ym1).unwrap(), &y() + &yc(1));
        let a = LaurentPoly::from_terms(
            Var::Y,
            [(-2, Cyclotomic::from_int(3)), (4, Cyclotomic::zeta(8))],
        );
        assert!(a.exact_div(&a).unwrap().is_one());
        let y2p1 = &y().pow(2) + &yc(1);
        match y2p1.exact_div(&ym1) {
            Err(LaurentError::InexactDivision { remainder }) => {
                assert_eq!(*remainder, yc(2));
            }
            other => panic!("expected inexact division, got {other:?}"),
        }
    }

    #[test]
    fn vanishing_orders() {
        let z8 = RootOfUnity::new(8, 1);
        let lin = &y() - &LaurentPoly::constant(Var::Y, z8.to_cyclotomic());
        let p = &(&lin * &lin) * &(&y() + &yc(1));
        assert_eq!(p.vanishing_order(&z8).unwrap(), 2);
        let phi8 = &y().pow(4) + &yc(1);
        assert_eq!(phi8.vanishing_order(&z8).unwrap(), 1);
        let ym1 = &y() - &yc(1);
        assert_eq!(ym1.vanishing_order(&RootOfUnity::new(3, 1)).unwrap(), 0);
        assert!(LaurentPoly::zero(Var::Y).vanishing_order(&z8).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let p = LaurentPoly::from_terms(
            Var::Q,
            [
                (-2, Cyclotomic::from_rat(rat_int(3) / rat_int(2))),
                (1, Cyclotomic::zeta(8)),
            ],
        );
        let js = serde_json::to_string(&p).unwrap();
        let back: LaurentPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
        let fac = FactoredLaurent {
            var: Var::Q,
            unit: Cyclotomic::from_int(-2),
            monomial: -3,
            factors: vec![(
                &LaurentPoly::gen(Var::Q) - &LaurentPoly::one(Var::Q),
                2,
            )],
        };
        let js = serde_json::to_string(&fac).unwrap();
        let repr: LaurentRepr = serde_json::from_str(&js).unwrap();
        let expanded = repr.expand().unwrap();
        assert_eq!(expanded, fac.expand().unwrap());
        assert_eq!(expanded.valuation().unwrap(), -3);
        assert_eq!(expanded.degree().unwrap(), -1);
        let plain: LaurentRepr =
            serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(plain.expand().unwrap(), p);
    }

    #[test]
    fn display_forms() {
        let p = LaurentPoly::from_terms(
            Var::Q,
            [
                (2, Cyclotomic::from_int(1)),
                (0, Cyclotomic::from_int(-1)),
                (-1, Cyclotomic::from_int(3)),
            ],
        );
        assert_eq!(p.to_string(), "q^2 - 1 + 3*q^-1");
        assert_eq!(LaurentPoly::zero(Var::Y).to_string(), "0");
        let r = LaurentPoly::monomial(Var::Q, 1, Cyclotomic::zeta(8));
        assert_eq!(r.to_string(), "(zeta8)*q");
    }
}
