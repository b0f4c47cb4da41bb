//! Exact arithmetic in cyclotomic fields Q(zeta_n) over arbitrary-precision
//! rationals.
//!
//! Elements are stored on the power basis {zeta_n^e : 0 <= e < phi(n)},
//! reduced modulo the cyclotomic polynomial Phi_n, and the order n is always
//! descended to the smallest divisor of the ambient order whose field contains
//! the element.  Equality is therefore structural.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("order {elem} does not divide target order {target}")]
    IncompatibleOrder { elem: u32, target: u32 },
    #[error("exponent {exp} out of range for order {order}")]
    ExponentRange { exp: u32, order: u32 },
    #[error("galois exponent {k} not coprime to order {order}")]
    GaloisNotCoprime { k: u32, order: u32 },
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn parse_rat(s: &str) -> Result<Rat, NumError> {
    let bad = || NumError::BadRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// ---------- per-order reduction tables ----------

struct OrderTable {
    n: u32,
    phi: usize,
    /// reduce[e] = coordinates of zeta_n^e on the power basis, 0 <= e < n.
    reduce: Vec<Vec<Rat>>,
    primes: Vec<u32>,
}

fn factor_primes(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u32) -> u32 {
    let mut out = n;
    for p in factor_primes(n) {
        out = out / p * (p - 1);
    }
    out
}

/// Coefficients of Phi_n, ascending degree, computed by exact division of
/// x^n - 1 by the lower cyclotomic polynomials.
fn cyclotomic_coeffs(n: u32, cache: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(c) = cache.get(&n) {
        return c.clone();
    }
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_coeffs(d, cache);
            num = poly_div_exact(&num, &div);
        }
    }
    cache.insert(n, num.clone());
    num
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dn = rem.len() - 1;
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        q[i] = c.clone();
        for j in 0..=dd {
            rem[i + j] -= &c * &den[j];
        }
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    q
}

fn build_table(n: u32) -> OrderTable {
    let mut cache = HashMap::new();
    let coeffs = cyclotomic_coeffs(n, &mut cache);
    let phi = coeffs.len() - 1;
    let mut reduce: Vec<Vec<Rat>> = Vec::with_capacity(n as usize);
    for e in 0..phi {
        let mut row = vec![Rat::zero(); phi];
        row[e] = Rat::one();
        reduce.push(row);
    }
    if phi < n as usize {
        // zeta^phi = -(c_0 + c_1 zeta + ... + c_{phi-1} zeta^{phi-1})
        let head: Vec<Rat> = (0..phi)
            .map(|i| Rat::from_integer(-coeffs[i].clone()))
            .collect();
        reduce.push(head);
        for e in phi + 1..n as usize {
            let prev = &reduce[e - 1];
            let overflow = prev[phi - 1].clone();
            let mut row = vec![Rat::zero(); phi];
            for j in 1..phi {
                row[j] = prev[j - 1].clone();
            }
            if !overflow.is_zero() {
                for j in 0..phi {
                    let add = &overflow * &reduce[phi][j];
                    row[j] += add;
                }
            }
            reduce.push(row);
        }
    }
    OrderTable {
        n,
        phi,
        reduce,
        primes: factor_primes(n),
    }
}

fn table(n: u32) -> Arc<OrderTable> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<OrderTable>>>> = OnceLock::new();
    let m = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = m.lock().unwrap();
    guard.entry(n).or_insert_with(|| Arc::new(build_table(n))).clone()
}

// ---------- RootOfUnity ----------

/// zeta_order^exponent in lowest terms: gcd(order, exponent) = 1 after
/// construction, so `order` is the true multiplicative order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct RootOfUnity {
    order: u32,
    exponent: u32,
}

impl RootOfUnity {
    pub fn new(order: u32, exponent: i64) -> RootOfUnity {
        assert!(order >= 1, "root order must be positive");
        let e = exponent.rem_euclid(order as i64) as u32;
        if e == 0 {
            return RootOfUnity { order: 1, exponent: 0 };
        }
        let g = num_integer::gcd(order, e);
        RootOfUnity {
            order: order / g,
            exponent: e / g,
        }
    }

    pub fn one() -> RootOfUnity {
        RootOfUnity { order: 1, exponent: 0 }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn pow(&self, k: u32) -> RootOfUnity {
        RootOfUnity::new(self.order, self.exponent as i64 * k as i64)
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        Cyclotomic::zeta_pow(self.order, self.exponent)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exponent) {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (n, 1) => write!(f, "zeta{n}"),
            (n, k) => write!(f, "zeta{n}^{k}"),
        }
    }
}

// ---------- Cyclotomic ----------

/// Exact element of Q(zeta_order), canonical: power-basis reduced and at the
/// minimal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u32,
    coeffs: BTreeMap<u32, Rat>,
}

impl Cyclotomic {
    pub fn zero() -> Cyclotomic {
        Cyclotomic { order: 1, coeffs: BTreeMap::new() }
    }

    pub fn one() -> Cyclotomic {
        Cyclotomic::from_int(1)
    }

    pub fn from_int(v: i64) -> Cyclotomic {
        Cyclotomic::from_rat(rat_int(v))
    }

    pub fn from_rat(v: Rat) -> Cyclotomic {
        let mut coeffs = BTreeMap::new();
        if !v.is_zero() {
            coeffs.insert(0, v);
        }
        Cyclotomic { order: 1, coeffs }
    }

    pub fn zeta(n: u32) -> Cyclotomic {
        Cyclotomic::zeta_pow(n, 1)
    }

    /// zeta_n^k as a canonical element.
    pub fn zeta_pow(n: u32, k: u32) -> Cyclotomic {
        let r = RootOfUnity::new(n, k as i64);
        let t = table(r.order);
        let dense = t.reduce[r.exponent as usize].clone();
        canonicalize(r.order, dense)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Rat> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.order == 1
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.order == 1 {
            Some(self.coeffs.get(&0).cloned().unwrap_or_else(Rat::zero))
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    fn dense(&self, t: &OrderTable) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); t.phi];
        for (&e, c) in &self.coeffs {
            out[e as usize] = c.clone();
        }
        out
    }

    /// Re-express at a multiple of the current order without descending; the
    /// result is power-basis reduced at `target` but its order is `target`.
    pub fn embed(&self, target: u32) -> Result<Cyclotomic, NumError> {
        if target % self.order != 0 {
            return Err(NumError::IncompatibleOrder { elem: self.order, target });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let t = table(target);
        let stride = target / self.order;
        let mut dense = vec![Rat::zero(); t.phi];
        for (&e, c) in &self.coeffs {
            add_scaled(&mut dense, c, &t.reduce[(e * stride) as usize]);
        }
        Ok(Cyclotomic { order: target, coeffs: sparsify(dense) })
    }

    /// Descend to the minimal order; already-canonical values are unchanged.
    pub fn canonicalize(&self) -> Cyclotomic {
        let t = table(self.order);
        canonicalize_with(self.order, self.dense(&t), &t)
    }

    pub fn add(&self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, true)
    }

    fn combine(&self, rhs: &Cyclotomic, negate: bool) -> Cyclotomic {
        let n = num_integer::lcm(self.order, rhs.order);
        let t = table(n);
        let sa = n / self.order;
        let sb = n / rhs.order;
        let mut dense = vec![Rat::zero(); t.phi];
        for (&e, c) in &self.coeffs {
            add_scaled(&mut dense, c, &t.reduce[(e * sa) as usize]);
        }
        for (&e, c) in &rhs.coeffs {
            if negate {
                sub_scaled(&mut dense, c, &t.reduce[(e * sb) as usize]);
            } else {
                add_scaled(&mut dense, c, &t.reduce[(e * sb) as usize]);
            }
        }
        canonicalize_with(n, dense, &t)
    }

    pub fn mul(&self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero();
        }
        if let Some(r) = self.as_rational() {
            return rhs.scale(&r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(&r);
        }
        let n = num_integer::lcm(self.order, rhs.order);
        let t = table(n);
        let sa = n / self.order;
        let sb = n / rhs.order;
        // exponent convolution mod n, then one table reduction pass
        let mut conv = vec![Rat::zero(); n as usize];
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &rhs.coeffs {
                let mut e = ea * sa + eb * sb;
                if e >= n {
                    e -= n;
                }
                conv[e as usize] += ca * cb;
            }
        }
        let mut dense = vec![Rat::zero(); t.phi];
        for (e, c) in conv.into_iter().enumerate() {
            if !c.is_zero() {
                add_scaled(&mut dense, &c, &t.reduce[e]);
            }
        }
        canonicalize_with(n, dense, &t)
    }

    pub fn scale(&self, r: &Rat) -> Cyclotomic {
        if r.is_zero() {
            return Cyclotomic::zero();
        }
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c * r)).collect(),
        }
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }

    pub fn inv(&self) -> Result<Cyclotomic, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Cyclotomic::from_rat(r.recip()));
        }
        let t = table(self.order);
        let phi = t.phi;
        // columns: self * zeta^j on the power basis, built by shift-and-fold
        let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(phi);
        let mut cur = self.dense(&t);
        cols.push(cur.clone());
        for _ in 1..phi {
            cur = shift_fold(&cur, &t);
            cols.push(cur.clone());
        }
        // solve sum_j x_j * cols[j] = e_0
        let mut aug: Vec<Vec<Rat>> = (0..phi)
            .map(|i| {
                let mut row: Vec<Rat> = (0..phi).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Rat::one() } else { Rat::zero() });
                row
            })
            .collect();
        let x = solve_square(&mut aug).expect("unit in a field has an inverse");
        let mut coeffs = BTreeMap::new();
        for (j, v) in x.into_iter().enumerate() {
            if !v.is_zero() {
                coeffs.insert(j as u32, v);
            }
        }
        // the inverse lives in the same minimal field as the element
        Ok(Cyclotomic { order: self.order, coeffs })
    }

    pub fn div(&self, rhs: &Cyclotomic) -> Result<Cyclotomic, NumError> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Galois automorphism zeta -> zeta^k; k must be coprime to the order.
    pub fn galois(&self, k: u32) -> Result<Cyclotomic, NumError> {
        let n = self.order;
        if n == 1 {
            return Ok(self.clone());
        }
        let k = k % n;
        if num_integer::gcd(n, k) != 1 {
            return Err(NumError::GaloisNotCoprime { k, order: n });
        }
        let t = table(n);
        let mut dense = vec![Rat::zero(); t.phi];
        for (&e, c) in &self.coeffs {
            let target = ((e as u64 * k as u64) % n as u64) as usize;
            add_scaled(&mut dense, c, &t.reduce[target]);
        }
        // automorphisms preserve the minimal order
        Ok(Cyclotomic { order: n, coeffs: sparsify(dense) })
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Cyclotomic {
        if self.order == 1 {
            return self.clone();
        }
        self.galois(self.order - 1).expect("order-1 is coprime to order")
    }

    pub fn pow(&self, k: i64) -> Result<Cyclotomic, NumError> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = Cyclotomic::one();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Approximate complex value; diagnostics only, never used for equality.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (&e, c) in &self.coeffs {
            let angle = 2.0 * std::f64::consts::PI * e as f64 / self.order as f64;
            let cf = rat_to_f64(c);
            re += cf * angle.cos();
            im += cf * angle.sin();
        }
        (re, im)
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

fn add_scaled(dense: &mut [Rat], c: &Rat, row: &[Rat]) {
    for (d, r) in dense.iter_mut().zip(row) {
        if !r.is_zero() {
            *d += c * r;
        }
    }
}

fn sub_scaled(dense: &mut [Rat], c: &Rat, row: &[Rat]) {
    for (d, r) in dense.iter_mut().zip(row) {
        if !r.is_zero() {
            *d -= c * r;
        }
    }
}

/// Multiply a dense power-basis vector by zeta, folding the overflow with the
/// reduction table.
fn shift_fold(v: &[Rat], t: &OrderTable) -> Vec<Rat> {
    let phi = t.phi;
    let mut out = vec![Rat::zero(); phi];
    for j in 1..phi {
        out[j] = v[j - 1].clone();
    }
    let overflow = v[phi - 1].clone();
    if !overflow.is_zero() {
        add_scaled(&mut out, &overflow, &t.reduce[phi]);
    }
    out
}

fn sparsify(dense: Vec<Rat>) -> BTreeMap<u32, Rat> {
    dense
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e as u32, c))
        .collect()
}

fn canonicalize(order: u32, dense: Vec<Rat>) -> Cyclotomic {
    let t = table(order);
    canonicalize_with(order, dense, &t)
}

fn canonicalize_with(order: u32, dense: Vec<Rat>, t: &OrderTable) -> Cyclotomic {
    debug_assert_eq!(dense.len(), t.phi);
    let support: Vec<usize> = dense
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, _)| e)
        .collect();
    if support.is_empty() {
        return Cyclotomic::zero();
    }
    if support == [0] {
        return Cyclotomic::from_rat(dense[0].clone());
    }
    let mut order = order;
    let mut dense = dense;
    'outer: loop {
        let primes = if order == t.n { t.primes.clone() } else { factor_primes(order) };
        for p in primes {
            if let Some((m, lower)) = try_descend(order, p, &dense) {
                order = m;
                dense = lower;
                if dense.iter().all(|c| c.is_zero()) {
                    return Cyclotomic::zero();
                }
                let nz: Vec<usize> = dense
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(e, _)| e)
                    .collect();
                if nz == [0] {
                    return Cyclotomic::from_rat(dense[0].clone());
                }
                continue 'outer;
            }
        }
        break;
    }
    Cyclotomic { order, coeffs: sparsify(dense) }
}

/// If the element given on the power basis of order n lies in Q(zeta_{n/p}),
/// return its coordinates there.  Membership is decided by Galois fixedness,
/// the rewrite by a small linear solve.
fn try_descend(n: u32, p: u32, dense: &[Rat]) -> Option<(u32, Vec<Rat>)> {
    let m = n / p;
    let t = table(n);
    // the subgroup fixing Q(zeta_m) is {k = 1 mod m, gcd(k, n) = 1}
    let mut k = 1 + m;
    while k < n {
        if num_integer::gcd(k, n) == 1 {
            let mut image = vec![Rat::zero(); t.phi];
            for (e, c) in dense.iter().enumerate() {
                if !c.is_zero() {
                    let target = ((e as u64 * k as u64) % n as u64) as usize;
                    add_scaled(&mut image, c, &t.reduce[target]);
                }
            }
            if image != dense {
                return None;
            }
        }
        k += m;
    }
    // rewrite on the basis {zeta_n^{p j} : j < phi(m)} = {zeta_m^j}
    let tm = table(m);
    let cols: Vec<&Vec<Rat>> = (0..tm.phi)
        .map(|j| &t.reduce[(p as usize * j) % n as usize])
        .collect();
    let mut aug: Vec<Vec<Rat>> = (0..t.phi)
        .map(|i| {
            let mut row: Vec<Rat> = cols.iter().map(|col| col[i].clone()).collect();
            row.push(dense[i].clone());
            row
        })
        .collect();
    let sol = solve_rect(&mut aug, tm.phi)
        .expect("galois-fixed element must lie in the subfield");
    Some((m, sol))
}

/// Solve a square augmented system in place; None when singular.
fn solve_square(aug: &mut [Vec<Rat>]) -> Option<Vec<Rat>> {
    let k = aug.len();
    solve_rect(aug, k)
}

/// Gaussian elimination on an augmented (rows x (k+1)) system with rows >= k;
/// returns the unique solution, or None when inconsistent or rank-deficient.
fn solve_rect(aug: &mut [Vec<Rat>], k: usize) -> Option<Vec<Rat>> {
    let rows = aug.len();
    let mut r = 0;
    let mut piv = Vec::with_capacity(k);
    for c in 0..k {
        let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for x in aug[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for i in 0..rows {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in c..=k {
                    let t = &f * &aug[r][j];
                    aug[i][j] -= t;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    if piv.len() < k {
        return None;
    }
    for row in aug.iter().skip(r) {
        if !row[k].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); k];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = aug[i][k].clone();
    }
    Some(x)
}

// ---------- operator sugar ----------

impl std::ops::Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::add(self, rhs)
    }
}

impl std::ops::Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::sub(self, rhs)
    }
}

impl std::ops::Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::mul(self, rhs)
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic::neg(self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.coeffs {
            let s = format_rat(c);
            if first {
                first = false;
            } else if !s.starts_with('-') {
                write!(f, "+")?;
            }
            let root = if e == 1 {
                format!("zeta{}", self.order)
            } else {
                format!("zeta{}^{e}", self.order)
            };
            if e == 0 {
                write!(f, "{s}")?;
            } else if s == "1" {
                write!(f, "{root}")?;
            } else if s == "-1" {
                write!(f, "-{root}")?;
            } else {
                write!(f, "{s}*{root}")?;
            }
        }
        Ok(())
    }
}

// ---------- serde ----------

impl serde::Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        if let Some(r) = self.as_rational() {
            return ser.serialize_str(&format_rat(&r));
        }
        let mut map = ser.serialize_map(Some(2))?;
        map.serialize_entry("order", &self.order)?;
        let coeffs: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .map(|(e, c)| (e.to_string(), format_rat(c)))
            .collect();
        map.serialize_entry("coeffs", &coeffs)?;
        map.end()
    }
}

impl<'de> serde::Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Rational(String),
            Field { order: u32, coeffs: BTreeMap<String, String> },
        }
        match Repr::deserialize(de)? {
            Repr::Rational(s) => {
                let r = parse_rat(&s).map_err(D::Error::custom)?;
                Ok(Cyclotomic::from_rat(r))
            }
            Repr::Field { order, coeffs } => {
                if order == 0 {
                    return Err(D::Error::custom("cyclotomic order must be positive"));
                }
                let t = table(order);
                let mut dense = vec![Rat::zero(); t.phi];
                for (es, cs) in coeffs {
                    let e: u32 = es
                        .parse()
                        .map_err(|_| D::Error::custom(format!("bad exponent key {es:?}")))?;
                    if e >= order {
                        return Err(D::Error::custom(
                            NumError::ExponentRange { exp: e, order }.to_string(),
                        ));
                    }
                    let c = parse_rat(&cs).map_err(D::Error::custom)?;
                    add_scaled(&mut dense, &c, &t.reduce[e as usize]);
                }
                Ok(canonicalize_with(order, dense, &t))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> Cyclotomic {
        Cyclotomic::zeta(n)
    }

    #[test]
    fn zeta3_sum_is_minus_one() {
        let s = &z(3) + &z(3).pow(2).unwrap();
        assert_eq!(s, Cyclotomic::from_int(-1));
    }

    #[test]
    fn zeta8_squared_is_zeta4() {
        assert_eq!(&z(8) * &z(8), z(4));
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&z(4) * &z(4), Cyclotomic::from_int(-1));
    }

    #[test]
    fn inv_of_root() {
        assert_eq!(z(8).pow(3).unwrap().inv().unwrap(), z(8).pow(5).unwrap());
        assert_eq!(
            Cyclotomic::from_int(2).inv().unwrap(),
            Cyclotomic::from_rat(Rat::new(BigInt::from(1), BigInt::from(2)))
        );
        let one_plus_i = &Cyclotomic::one() + &z(4);
        let got = one_plus_i.inv().unwrap();
        assert_eq!(&got * &one_plus_i, Cyclotomic::one());
        let half = Rat::new(BigInt::from(1), BigInt::from(2));
        let want = &Cyclotomic::from_rat(half.clone()) - &z(4).scale(&half);
        assert_eq!(got, want);
        assert_eq!(Cyclotomic::zero().inv(), Err(NumError::DivisionByZero));
    }

    #[test]
    fn embed_examples() {
        let e = z(4).embed(8).unwrap();
        assert_eq!(e.order(), 8);
        assert_eq!(e.coeffs().iter().collect::<Vec<_>>(), vec![(&2, &Rat::one())]);
        assert_eq!(e.canonicalize(), z(4));
        let one = Cyclotomic::one().embed(12).unwrap();
        assert_eq!(one.canonicalize(), Cyclotomic::one());
        assert!(z(8).embed(12).is_err());
        // zeta6 in order 12 coordinates descends back to the order-3 form
        let z6 = Cyclotomic::zeta(6);
        assert_eq!(z6.embed(12).unwrap().canonicalize(), z6);
    }

    #[test]
    fn canonical_order_is_minimal() {
        // zeta6 = -zeta3^2 lives in Q(zeta3)
        assert_eq!(z(6).order(), 3);
        assert_eq!(z(6), z(3).pow(2).unwrap().neg());
        // zeta8^4 = -1 is rational
        assert_eq!(z(8).pow(4).unwrap(), Cyclotomic::from_int(-1));
        assert!(z(8).pow(4).unwrap().is_rational());
        // sqrt(2) = zeta8 + zeta8^7 stays at order 8
        let r2 = &z(8) + &z(8).pow(7).unwrap();
        assert_eq!(r2.order(), 8);
        assert_eq!(&r2 * &r2, Cyclotomic::from_int(2));
    }

    #[test]
    fn roots_sum_to_zero() {
        for n in 2..=20u32 {
            let mut s = Cyclotomic::zero();
            for k in 0..n {
                s = &s + &Cyclotomic::zeta_pow(n, k);
            }
            assert!(s.is_zero(), "order {n}");
        }
    }

    #[test]
    fn conjugation_and_galois() {
        let x = &z(4).scale(&rat_int(3)) + &Cyclotomic::from_int(5);
        let c = x.conj();
        assert_eq!(&x + &c, Cyclotomic::from_int(10));
        assert_eq!(&x * &c, Cyclotomic::from_int(34));
        let r2 = &z(8) + &z(8).pow(7).unwrap();
        assert_eq!(r2.conj(), r2);
        assert_eq!(z(5).galois(2).unwrap(), z(5).pow(2).unwrap());
        assert!(z(4).galois(2).is_err());
    }

    #[test]
    fn root_of_unity_reduction() {
        let r = RootOfUnity::new(8, 2);
        assert_eq!((r.order(), r.exponent()), (4, 1));
        assert_eq!(RootOfUnity::new(6, 6), RootOfUnity::one());
        assert_eq!(RootOfUnity::new(12, -1), RootOfUnity::new(12, 11));
        assert_eq!(r.to_cyclotomic(), z(4));
    }

    #[test]
    fn to_complex_examples() {
        let (re, im) = z(4).to_complex_f64();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
        let (re, im) = Cyclotomic::from_int(-1).to_complex_f64();
        assert!((re + 1.0).abs() < 1e-12 && im.abs() < 1e-12);
        let (re, im) = z(3).to_complex_f64();
        assert!((re + 0.5).abs() < 1e-12 && (im - 0.75f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn serde_round_trip() {
        let vals = [
            Cyclotomic::zero(),
            Cyclotomic::from_rat(Rat::new(BigInt::from(-7), BigInt::from(3))),
            &z(8).scale(&rat_int(2)) - &Cyclotomic::one(),
            z(48),
        ];
        for v in vals {
            let s = serde_json::to_string(&v).unwrap();
            let back: Cyclotomic = serde_json::from_str(&s).unwrap();
            assert_eq!(back, v, "{s}");
        }
        let r: Cyclotomic = serde_json::from_str("\"-3/4\"").unwrap();
        assert_eq!(r, Cyclotomic::from_rat(Rat::new(BigInt::from(-3), BigInt::from(4))));
    }
}
