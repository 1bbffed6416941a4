//! Exact arithmetic in the cyclotomic field Q(ζ_n).
//!
//! An element is stored in the power basis `1, ζ, …, ζ^{φ(n)-1}` of
//! `Q[x]/(Φ_n(x))` as a vector of integer numerators over one common positive
//! denominator, reduced so that the gcd of all entries is one. The
//! representation is therefore canonical and field equality is plain
//! structural equality.
//!
//! Numbers whose numerators and denominator fit in an `i64` take an
//! overflow-checked machine-integer path; anything larger transparently
//! switches to `BigInt`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Precomputed data for one cyclotomic order.
#[derive(Debug)]
pub struct Cyclotomic {
    n: u32,
    phi: usize,
    /// Φ_n, coefficients from the constant term up, monic.
    poly: Vec<BigInt>,
    /// `x^k mod Φ_n` for `k < reduce.len()`.
    reduce: Vec<Vec<i64>>,
}

impl Cyclotomic {
    /// Order `n` of the root of unity.
    pub fn order(&self) -> u32 {
        self.n
    }

    /// Degree of the field over Q, i.e. Euler's totient of `n`.
    pub fn degree(&self) -> usize {
        self.phi
    }

    /// Coefficients of the cyclotomic polynomial Φ_n, constant term first.
    pub fn polynomial(&self) -> &[BigInt] {
        &self.poly
    }

    /// Canonical coefficients of `x^k` for any `k ≥ 0`.
    fn power(&self, k: usize) -> &[i64] {
        &self.reduce[k % self.n as usize]
    }
}

fn field_cache() -> &'static RwLock<HashMap<u32, &'static Cyclotomic>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, &'static Cyclotomic>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Returns the (cached, leaked) field data for order `n`.
///
/// Each order is initialised at most once; concurrent readers share it.
pub fn cyclotomic(n: u32) -> &'static Cyclotomic {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(f) = field_cache().read().unwrap().get(&n) {
        return f;
    }
    let poly = cyclotomic_poly(n);
    let mut cache = field_cache().write().unwrap();
    if let Some(f) = cache.get(&n) {
        return f;
    }
    let field: &'static Cyclotomic = Box::leak(Box::new(build_field(n, poly)));
    cache.insert(n, field);
    field
}

/// Φ_n by exact division of `x^n - 1` by every Φ_d with `d | n`, `d < n`.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    if let Some(f) = field_cache().read().unwrap().get(&n) {
        return f.poly.clone();
    }
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic(d).poly.clone();
            p = poly_div_exact(&p, &q);
        }
    }
    p
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

fn build_field(n: u32, poly: Vec<BigInt>) -> Cyclotomic {
    let phi = poly.len() - 1;
    let len = (n as usize).max(2 * phi);
    let mut reduce = Vec::with_capacity(len);
    let mut cur = vec![BigInt::zero(); phi];
    cur[0] = BigInt::one();
    for _ in 0..len {
        reduce.push(
            cur.iter()
                .map(|c| c.to_i64().expect("cyclotomic reduction table overflow"))
                .collect(),
        );
        // multiply by x and reduce the overflow term with Φ_n
        let top = cur[phi - 1].clone();
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigInt::zero();
        if !top.is_zero() {
            for i in 0..phi {
                cur[i] -= &top * &poly[i];
            }
        }
    }
    Cyclotomic { n, phi, poly, reduce }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Coeffs {
    Small { num: SmallVec<[i64; 8]>, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

impl Coeffs {
    fn zero(phi: usize) -> Self {
        Coeffs::Small { num: SmallVec::from_elem(0, phi), den: 1 }
    }

    fn to_big(&self) -> (Vec<BigInt>, BigInt) {
        match self {
            Coeffs::Small { num, den } => {
                (num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*den))
            }
            Coeffs::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    fn from_i128(mut num: Vec<i128>, mut den: i128) -> Self {
        debug_assert!(den != 0);
        if num.iter().all(|&c| c == 0) {
            return Coeffs::zero(num.len());
        }
        if den < 0 {
            if den == i128::MIN || num.contains(&i128::MIN) {
                return Self::from_big(
                    num.into_iter().map(BigInt::from).collect(),
                    BigInt::from(den),
                );
            }
            den = -den;
            num.iter_mut().for_each(|c| *c = -*c);
        }
        let mut g = den;
        for &c in &num {
            if g == 1 {
                break;
            }
            g = g.gcd(&c);
        }
        if g > 1 {
            den /= g;
            num.iter_mut().for_each(|c| *c /= g);
        }
        let fits = |c: i128| c > i64::MIN as i128 && c <= i64::MAX as i128;
        if fits(den) && num.iter().all(|&c| fits(c)) {
            Coeffs::Small { num: num.into_iter().map(|c| c as i64).collect(), den: den as i64 }
        } else {
            Coeffs::Big { num: num.into_iter().map(BigInt::from).collect(), den: BigInt::from(den) }
        }
    }

    fn from_big(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert!(!den.is_zero());
        if num.iter().all(|c| c.is_zero()) {
            return Coeffs::zero(num.len());
        }
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            den /= &g;
            num.iter_mut().for_each(|c| *c /= &g);
        }
        let small = |c: &BigInt| c.to_i64().filter(|&v| v != i64::MIN);
        if let (Some(d), Some(ns)) =
            (small(&den), num.iter().map(small).collect::<Option<SmallVec<[i64; 8]>>>())
        {
            Coeffs::Small { num: ns, den: d }
        } else {
            Coeffs::Big { num, den }
        }
    }
}

/// An exact element of Q(ζ_n) in canonical power-basis form.
#[derive(Clone)]
pub struct CycNum {
    field: &'static Cyclotomic,
    coeffs: Coeffs,
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.field.n == other.field.n {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = unify(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[{}]({})", self.field.n, self)
    }
}

fn unify(a: &CycNum, b: &CycNum) -> (CycNum, CycNum) {
    let n = a.field.n.lcm(&b.field.n);
    (a.lift(n), b.lift(n))
}

impl CycNum {
    pub fn zero(n: u32) -> Self {
        let field = cyclotomic(n);
        CycNum { field, coeffs: Coeffs::zero(field.phi) }
    }

    pub fn one(n: u32) -> Self {
        Self::from_int(n, 1)
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        Self::from_ratio(n, v, 1)
    }

    /// The rational number `p/q` viewed in Q(ζ_n). Panics if `q == 0`.
    pub fn from_ratio(n: u32, p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        let field = cyclotomic(n);
        let mut num = vec![0i128; field.phi];
        num[0] = p as i128;
        CycNum { field, coeffs: Coeffs::from_i128(num, q as i128) }
    }

    pub fn from_rational(n: u32, r: &BigRational) -> Self {
        let field = cyclotomic(n);
        let mut num = vec![BigInt::zero(); field.phi];
        num[0] = r.numer().clone();
        CycNum { field, coeffs: Coeffs::from_big(num, r.denom().clone()) }
    }

    /// The canonical form of `Σ raw[k] ζ_n^k` (any length, any degree).
    pub fn canonicalize(n: u32, raw: &[BigRational]) -> Self {
        let field = cyclotomic(n);
        let mut den = BigInt::one();
        for r in raw {
            den = den.lcm(r.denom());
        }
        let mut num = vec![BigInt::zero(); field.phi];
        for (k, r) in raw.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let scaled = r.numer() * (&den / r.denom());
            for (i, &t) in field.power(k).iter().enumerate() {
                if t != 0 {
                    num[i] += &scaled * t;
                }
            }
        }
        CycNum { field, coeffs: Coeffs::from_big(num, den) }
    }

    /// ζ_n^k, for any integer `k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let field = cyclotomic(n);
        let e = k.rem_euclid(n as i64) as usize;
        let num = field.power(e).iter().map(|&c| c as i128).collect();
        CycNum { field, coeffs: Coeffs::from_i128(num, 1) }
    }

    pub fn order(&self) -> u32 {
        self.field.n
    }

    pub fn field(&self) -> &'static Cyclotomic {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coeffs::Small { num, .. } => num.iter().all(|&c| c == 0),
            Coeffs::Big { num, .. } => num.iter().all(|c| c.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.coeffs {
            Coeffs::Small { num, den } => *den == 1 && num[0] == 1 && num[1..].iter().all(|&c| c == 0),
            Coeffs::Big { .. } => false,
        }
    }

    /// `Some(r)` when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        let c = self.coefficients();
        if c[1..].iter().all(|x| x.is_zero()) {
            Some(c[0].clone())
        } else {
            None
        }
    }

    /// Power-basis coefficients as rationals (length φ(n)).
    pub fn coefficients(&self) -> Vec<BigRational> {
        let (num, den) = self.coeffs.to_big();
        num.into_iter().map(|c| BigRational::new(c, den.clone())).collect()
    }

    /// The same field element viewed in Q(ζ_m) where `n | m`.
    pub fn lift(&self, m: u32) -> CycNum {
        let n = self.field.n;
        if n == m {
            return self.clone();
        }
        assert!(m.is_multiple_of(n), "cannot embed Q(ζ_{n}) into Q(ζ_{m})");
        let target = cyclotomic(m);
        let step = (m / n) as usize;
        let (num, den) = self.coeffs.to_big();
        let mut out = vec![BigInt::zero(); target.phi];
        for (k, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, &t) in target.power(k * step).iter().enumerate() {
                if t != 0 {
                    out[i] += c * t;
                }
            }
        }
        CycNum { field: target, coeffs: Coeffs::from_big(out, den) }
    }

    fn add_impl(&self, other: &CycNum, sign: i64) -> CycNum {
        if self.field.n != other.field.n {
            let (a, b) = unify(self, other);
            return a.add_impl(&b, sign);
        }
        if let (Coeffs::Small { num: a, den: da }, Coeffs::Small { num: b, den: db }) =
            (&self.coeffs, &other.coeffs)
        {
            let (da, db) = (*da as i128, *db as i128);
            let (den, fa, fb) = if da == db { (da, 1, 1) } else { (da * db, db, da) };
            let num = a
                .iter()
                .zip(b.iter())
                .map(|(&x, &y)| x as i128 * fa + sign as i128 * (y as i128 * fb))
                .collect();
            return CycNum { field: self.field, coeffs: Coeffs::from_i128(num, den) };
        }
        let (a, da) = self.coeffs.to_big();
        let (b, db) = other.coeffs.to_big();
        let num = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| x * &db + BigInt::from(sign) * y * &da)
            .collect();
        CycNum { field: self.field, coeffs: Coeffs::from_big(num, da * db) }
    }

    fn mul_impl(&self, other: &CycNum) -> CycNum {
        if self.field.n != other.field.n {
            let (a, b) = unify(self, other);
            return a.mul_impl(&b);
        }
        let field = self.field;
        let phi = field.phi;
        if let (Coeffs::Small { num: a, den: da }, Coeffs::Small { num: b, den: db }) =
            (&self.coeffs, &other.coeffs)
        {
            if let Some(c) = mul_small(field, a, b, *da as i128 * *db as i128) {
                return CycNum { field, coeffs: c };
            }
        }
        let (a, da) = self.coeffs.to_big();
        let (b, db) = other.coeffs.to_big();
        let mut conv = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigInt> = conv[..phi].to_vec();
        for (k, c) in conv.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (i, &t) in field.power(k).iter().enumerate() {
                if t != 0 {
                    out[i] += c * t;
                }
            }
        }
        CycNum { field, coeffs: Coeffs::from_big(out, da * db) }
    }

    /// Multiplicative inverse. Zero yields [`Error::DivisionByZero`].
    pub fn invert(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = self.field;
        let phi = field.phi;
        if phi == 1 {
            let r = self.coefficients()[0].recip();
            return Ok(CycNum::from_rational(field.n, &r));
        }
        // Solve M y = e_0, where column j of M holds the coefficients of a·ζ^j.
        let mut cols = Vec::with_capacity(phi);
        for j in 0..phi {
            cols.push((self * &CycNum::root_of_unity(field.n, j as i64)).coefficients());
        }
        let mut m: Vec<Vec<BigRational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..phi).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for c in 0..phi {
            let p = (c..phi).find(|&r| !m[r][c].is_zero()).ok_or(Error::DivisionByZero)?;
            m.swap(c, p);
            let inv = m[c][c].recip();
            for v in m[c].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..phi {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for k in c..=phi {
                        let sub = &f * &m[c][k];
                        m[r][k] -= sub;
                    }
                }
            }
        }
        let y: Vec<BigRational> = m.into_iter().map(|row| row[phi].clone()).collect();
        Ok(CycNum::canonicalize(field.n, &y))
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let mut base = if e < 0 { self.invert()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one(self.field.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Canonical text form, e.g. `1 - 1/2*z^3` with `z = ζ_n`.
    pub fn canonical_string(&self) -> String {
        if self.field.phi == 1 {
            format!("{self}")
        } else {
            format!("{self} [z=ζ{}]", self.field.n)
        }
    }
}

fn mul_small(field: &Cyclotomic, a: &[i64], b: &[i64], den: i128) -> Option<Coeffs> {
    let phi = field.phi;
    let mut conv = vec![0i128; 2 * phi - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                conv[i + j] = conv[i + j].checked_add(x as i128 * y as i128)?;
            }
        }
    }
    let mut out = conv[..phi].to_vec();
    for k in phi..conv.len() {
        let c = conv[k];
        if c == 0 {
            continue;
        }
        for (i, &t) in field.power(k).iter().enumerate() {
            if t != 0 {
                out[i] = out[i].checked_add(c.checked_mul(t as i128)?)?;
            }
        }
    }
    Some(Coeffs::from_i128(out, den))
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coefficients();
        let mut first = true;
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("{}/{}", abs.numer(), abs.denom())
            };
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl serde::Serialize for CycNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.canonical_string())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &'a CycNum) -> CycNum {
                let f: fn(&CycNum, &CycNum) -> CycNum = $body;
                f(self, rhs)
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &'a CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_impl(b, 1));
binop!(Sub, sub, |a, b| a.add_impl(b, -1));
binop!(Mul, mul, |a, b| a.mul_impl(b));

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        *self = self.add_impl(rhs, 1);
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        *self = self.add_impl(rhs, -1);
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, rhs: &CycNum) {
        *self = self.mul_impl(rhs);
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        let coeffs = match &self.coeffs {
            Coeffs::Small { num, den } => Coeffs::Small { num: num.iter().map(|c| -c).collect(), den: *den },
            Coeffs::Big { num, den } => Coeffs::from_big(num.iter().map(|c| -c).collect(), den.clone()),
        };
        CycNum { field: self.field, coeffs }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}
