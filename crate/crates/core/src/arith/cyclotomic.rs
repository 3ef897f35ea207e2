//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! Elements are kept in the power basis `1, ζ, …, ζ^{φ(N)-1}` reduced modulo
//! the N-th cyclotomic polynomial Φ_N, so two elements are equal exactly
//! when their coefficient vectors are. Coefficients are stored as an
//! integer vector over one positive common denominator, with the content
//! of the vector coprime to the denominator.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// Φ_N together with the data needed to reduce modulo it.
#[derive(Debug)]
pub struct CyclotomicPoly {
    order: usize,
    /// Coefficients, lowest degree first; monic of degree φ(N).
    coeffs: Vec<i64>,
    /// Nonzero coefficients below the leading term, as (degree, value).
    tail: Vec<(usize, i64)>,
}

impl CyclotomicPoly {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Reduces a polynomial (lowest degree first) modulo Φ_N in place and
    /// returns exactly `degree()` coefficients.
    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let deg = self.degree();
        if v.len() > deg {
            for i in (deg..v.len()).rev() {
                if v[i].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut v[i]);
                let base = i - deg;
                for &(j, p) in &self.tail {
                    let slot = &mut v[base + j];
                    match p {
                        1 => *slot -= &c,
                        -1 => *slot += &c,
                        _ => *slot -= &c * p,
                    }
                }
            }
        }
        v.resize(deg, BigInt::zero());
        v
    }
}

fn poly_cache() -> &'static Mutex<HashMap<usize, Arc<CyclotomicPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CyclotomicPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns Φ_N, computing and caching it on first use.
pub fn cyclotomic_poly(order: usize) -> Result<Arc<CyclotomicPoly>> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    if let Some(p) = poly_cache()
        .lock()
        .expect("poly cache poisoned")
        .get(&order)
    {
        return Ok(Arc::clone(p));
    }
    // x^N - 1 divided by Φ_d for every proper divisor d of N.
    let mut num = vec![0i64; order + 1];
    num[0] = -1;
    num[order] = 1;
    for d in 1..order {
        if order % d == 0 {
            let divisor = cyclotomic_poly(d)?;
            num = exact_div_monic(&num, divisor.coeffs());
        }
    }
    let tail = num[..num.len() - 1]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, c))
        .collect();
    let poly = Arc::new(CyclotomicPoly {
        order,
        coeffs: num,
        tail,
    });
    let mut cache = poly_cache().lock().expect("poly cache poisoned");
    Ok(Arc::clone(cache.entry(order).or_insert(poly)))
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &p) in den.iter().enumerate() {
                rem[i + j] -= c * p;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "cyclotomic division not exact");
    quot
}

pub fn euler_phi(n: usize) -> usize {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// An element of Q(ζ_N) in reduced canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElem {
    order: usize,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloElem {
    fn build(order: usize, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut e = CycloElem { order, num, den };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    fn check_order(&self, other: &CycloElem) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    fn poly(&self) -> Arc<CyclotomicPoly> {
        cyclotomic_poly(self.order).expect("order validated at construction")
    }

    pub fn zero(order: usize) -> Result<Self> {
        let p = cyclotomic_poly(order)?;
        Ok(CycloElem {
            order,
            num: vec![BigInt::zero(); p.degree()],
            den: BigInt::one(),
        })
    }

    pub fn one(order: usize) -> Result<Self> {
        Self::from_rational(order, &Rational::one())
    }

    pub fn from_integer(order: usize, n: i64) -> Result<Self> {
        Self::from_rational(order, &rational::int(n))
    }

    pub fn from_rational(order: usize, q: &Rational) -> Result<Self> {
        let mut e = Self::zero(order)?;
        e.num[0] = q.numer().clone();
        e.den = q.denom().clone();
        Ok(e)
    }

    /// ζ_N^a, for any integer exponent.
    pub fn root_of_unity(order: usize, exponent: i64) -> Result<Self> {
        Self::from_exponent_sum(order, [(exponent, BigInt::one())])
    }

    /// Σ c·ζ_N^e over the given (exponent, coefficient) pairs, with integer
    /// coefficients. Exponents are taken mod N.
    pub fn from_exponent_sum<I>(order: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, BigInt)>,
    {
        let p = cyclotomic_poly(order)?;
        let n = order as i64;
        let mut v = vec![BigInt::zero(); order];
        for (e, c) in terms {
            v[e.rem_euclid(n) as usize] += c;
        }
        Ok(Self::build(order, p.reduce(v), BigInt::one()))
    }

    /// Builds an element from power-basis coefficients (length φ(N)).
    pub fn from_coeffs(order: usize, coeffs: &[Rational]) -> Result<Self> {
        let p = cyclotomic_poly(order)?;
        if coeffs.len() != p.degree() {
            return Err(Error::Parse(format!(
                "order {order} needs {} coefficients, got {}",
                p.degree(),
                coeffs.len()
            )));
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::build(order, num, den))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// φ(N), the length of the coefficient vector.
    pub fn degree(&self) -> usize {
        self.num.len()
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The rational value, if every coefficient past the constant vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn try_add(&self, other: &CycloElem) -> Result<CycloElem> {
        self.check_order(other)?;
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a + b)
                .collect();
            return Ok(Self::build(self.order, num, self.den.clone()));
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Ok(Self::build(self.order, num, &self.den * &other.den))
    }

    pub fn try_sub(&self, other: &CycloElem) -> Result<CycloElem> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &CycloElem) -> Result<CycloElem> {
        self.check_order(other)?;
        let num = mul_reduce(&self.poly(), &self.num, &other.num);
        Ok(Self::build(self.order, num, &self.den * &other.den))
    }

    pub fn neg(&self) -> CycloElem {
        CycloElem {
            order: self.order,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, q: &Rational) -> CycloElem {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::build(self.order, num, &self.den * q.denom())
    }

    /// Multiplies by ζ_N^e.
    pub fn mul_root(&self, e: i64) -> CycloElem {
        let n = self.order as i64;
        self.reindex(|i| (i as i64 + e).rem_euclid(n) as usize)
    }

    /// The Galois automorphism ζ ↦ ζ^u. `u` must be coprime to N.
    pub fn galois(&self, u: i64) -> Result<CycloElem> {
        let n = self.order as i64;
        if u.rem_euclid(n.max(1)).gcd(&n) != 1 && n > 1 {
            return Err(Error::invalid(
                "galois exponent coprime to order",
                format!("gcd({u}, {n}) != 1"),
            ));
        }
        Ok(self.reindex(|i| (i as i64 * u).rem_euclid(n) as usize))
    }

    /// Complex conjugation, ζ ↦ ζ^{N-1}.
    pub fn conj(&self) -> CycloElem {
        let n = self.order as i64;
        self.reindex(|i| (i as i64 * (n - 1)).rem_euclid(n) as usize)
    }

    fn reindex(&self, f: impl Fn(usize) -> usize) -> CycloElem {
        let mut v = vec![BigInt::zero(); self.order];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                v[f(i)] += c;
            }
        }
        Self::build(self.order, self.poly().reduce(v), self.den.clone())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on
    /// (x, Φ_N) over Q.
    pub fn inverse(&self) -> Result<CycloElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let poly = self.poly();
        let modulus: Vec<Rational> = poly.coeffs().iter().map(|&c| rational::int(c)).collect();
        let a: Vec<Rational> = self
            .num
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let s = poly_inverse_mod(a, modulus);
        // (num/den)^{-1} = den * num^{-1}
        let scaled: Vec<Rational> = s
            .into_iter()
            .map(|c| c * Rational::from_integer(self.den.clone()))
            .collect();
        let mut coeffs = scaled;
        coeffs.resize(poly.degree(), Rational::zero());
        Self::from_coeffs(self.order, &coeffs)
    }

    pub fn pow(&self, exp: u32) -> CycloElem {
        let mut acc = CycloElem::one(self.order).expect("valid order");
        for _ in 0..exp {
            acc = acc.try_mul(self).expect("same order");
        }
        acc
    }

    /// Product of many elements, normalizing only once at the end.
    pub fn product<'a, I>(order: usize, factors: I) -> Result<CycloElem>
    where
        I: IntoIterator<Item = &'a CycloElem>,
    {
        let poly = cyclotomic_poly(order)?;
        let mut num = vec![BigInt::zero(); poly.degree()];
        num[0] = BigInt::one();
        let mut den = BigInt::one();
        for f in factors {
            if f.order != order {
                return Err(Error::OrderMismatch {
                    left: order,
                    right: f.order,
                });
            }
            num = mul_reduce(&poly, &num, &f.num);
            den *= &f.den;
        }
        Ok(Self::build(order, num, den))
    }

    /// Sum of many elements over the least common denominator.
    pub fn sum<'a, I>(order: usize, terms: I) -> Result<CycloElem>
    where
        I: IntoIterator<Item = &'a CycloElem>,
    {
        let terms: Vec<&CycloElem> = terms.into_iter().collect();
        let poly = cyclotomic_poly(order)?;
        let mut den = BigInt::one();
        for t in &terms {
            if t.order != order {
                return Err(Error::OrderMismatch {
                    left: order,
                    right: t.order,
                });
            }
            den = den.lcm(&t.den);
        }
        let mut num = vec![BigInt::zero(); poly.degree()];
        for t in terms {
            let f = &den / &t.den;
            for (acc, c) in num.iter_mut().zip(&t.num) {
                if !c.is_zero() {
                    *acc += c * &f;
                }
            }
        }
        Ok(Self::build(order, num, den))
    }

    /// Integer numerator vector and positive common denominator.
    pub fn parts(&self) -> (&[BigInt], &BigInt) {
        (&self.num, &self.den)
    }
}

fn mul_reduce(poly: &CyclotomicPoly, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let mut prod = vec![BigInt::zero(); 2 * n - 1];
    let b_nz: Vec<(usize, &BigInt)> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for &(j, y) in &b_nz {
            prod[i + j] += x * y;
        }
    }
    poly.reduce(prod)
}

fn trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![Rational::zero()], rem);
    }
    let lead_inv = den[dd].recip();
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] * &lead_inv;
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
        }
        quot[i] = c;
    }
    rem.truncate(dd.max(1));
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Returns s with s·a ≡ 1 (mod m), assuming gcd(a, m) = 1 and a ≠ 0 mod m.
fn poly_inverse_mod(mut a: Vec<Rational>, m: Vec<Rational>) -> Vec<Rational> {
    trim(&mut a);
    let (mut r0, mut r1) = (m, a);
    let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
    while r1.len() > 1 {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        // keep r1 monic to slow coefficient growth
        let lead = r1.last().cloned().expect("nonempty");
        if !lead.is_zero() && !lead.is_one() {
            let inv = lead.recip();
            r1.iter_mut().for_each(|c| *c *= &inv);
            s1.iter_mut().for_each(|c| *c *= &inv);
        }
    }
    let c = r1[0].recip();
    s1.into_iter().map(|x| x * &c).collect()
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElem({}; {})", self.order, self)
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloWire {
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for CycloElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloWire {
            order: self.order,
            coeffs: self
                .coeffs()
                .iter()
                .map(rational::to_decimal_string)
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = CycloWire::deserialize(d)?;
        let coeffs = wire
            .coeffs
            .iter()
            .map(|s| rational::parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        CycloElem::from_coeffs(wire.order, &coeffs).map_err(serde::de::Error::custom)
    }
}
