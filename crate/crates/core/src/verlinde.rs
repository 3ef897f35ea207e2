//! Dimension and trace formulas for SL_r and PGL_r moduli spaces.
//!
//! All line-bundle exponents are powers `k` of the determinant bundle `D`.
//! For degree `d` with `δ = gcd(r, d)` only multiples of `r/δ` are
//! meaningful. The trace of an order-`r` element of the Jacobian is stated
//! for powers of the generator `L_d = D^{r/δ}`; the conversion `k_L = kδ/r`
//! is done here and never exposed.
//!
//! Each sum runs over T_k/S_r. The per-orbit weight `1/|δ(t)|²` is built
//! from the closed-form inverse of `1 - w` for a root of unity `w` of exact
//! order `M`:
//!
//! ```text
//! 1/(1 - w) = -(1/M) Σ_{j=0}^{M-1} j·w^j
//! ```
//!
//! which avoids a polynomial gcd per orbit.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::rational::{self, int, rpow, Rational};
use crate::arith::CycloElem;
use crate::error::{Error, Result};
use crate::weights::{is_prime, LevelContext, OrbitPoint, WeightTable};

pub use crate::oracle::pgl2_sine_formula;

/// One dimension computation: rank `r`, degree class `d`, power `k` of `D`,
/// genus `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModuliQuery {
    r: usize,
    d: usize,
    k: usize,
    g: usize,
    /// Original degree when it was reduced mod r.
    reduced_from: Option<i64>,
}

impl ModuliQuery {
    /// Builds a query. `d` is reduced mod `r`; the original value is kept
    /// for [`ModuliQuery::warnings`].
    pub fn new(r: usize, d: i64, k: usize, g: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::invalid("rank r >= 2", format!("r = {r}")));
        }
        if g < 1 {
            return Err(Error::invalid("genus g >= 1", format!("g = {g}")));
        }
        let reduced = d.rem_euclid(r as i64);
        Ok(ModuliQuery {
            r,
            d: reduced as usize,
            k,
            g,
            reduced_from: (reduced != d).then_some(d),
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn warnings(&self) -> Vec<String> {
        self.reduced_from
            .map(|d| format!("degree {d} reduced mod {} to {}", self.r, self.d))
            .into_iter()
            .collect()
    }

    /// δ = gcd(r, d), with gcd(r, 0) = r.
    pub fn delta(&self) -> usize {
        self.r.gcd(&self.d)
    }

    pub fn with_genus(&self, g: usize) -> Self {
        ModuliQuery { g, ..*self }
    }

    pub fn with_degree(&self, d: usize) -> Self {
        ModuliQuery {
            d: d % self.r,
            reduced_from: None,
            ..*self
        }
    }

    /// k must be a multiple of r/δ.
    pub fn check_sl(&self) -> Result<()> {
        let step = self.r / self.delta();
        if self.k % step != 0 {
            return Err(Error::invalid(
                "k multiple of r/gcd(r,d)",
                format!(
                    "k = {} is not a multiple of {step} (r = {}, d = {})",
                    self.k, self.r, self.d
                ),
            ));
        }
        Ok(())
    }

    /// r prime, and k a multiple of r (of 2r when r is even).
    pub fn check_pgl(&self) -> Result<()> {
        check_descent(self.r, self.k)?;
        self.check_sl()
    }

    fn check_dimension_genus(&self) -> Result<()> {
        if self.g < 2 {
            return Err(Error::invalid(
                "genus g >= 2 for a dimension",
                format!("g = {}; genus 1 gives only a formal value", self.g),
            ));
        }
        Ok(())
    }
}

/// The descent condition for D^k to the PGL_r quotient, with r prime.
pub fn check_descent(r: usize, k: usize) -> Result<()> {
    if !is_prime(r) {
        return Err(Error::invalid("r prime", format!("r = {r}")));
    }
    let step = if r % 2 == 0 { 2 * r } else { r };
    if k % step != 0 {
        let hyp = if r % 2 == 0 {
            "k multiple of 2r for even r"
        } else {
            "k multiple of r"
        };
        return Err(Error::invalid(hyp, format!("r = {r}, k = {k}")));
    }
    Ok(())
}

/// A computed dimension with the identities it was checked against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimResult {
    pub r: usize,
    /// `None` for totals summed over all degrees.
    pub d: Option<usize>,
    pub k: usize,
    pub g: usize,
    pub formula: &'static str,
    #[serde(with = "rational::as_string")]
    pub value: Rational,
    pub is_integer: bool,
    /// Genus-one evaluations are formal values, not dimensions.
    pub formal: bool,
    pub checks: Vec<String>,
}

impl DimResult {
    fn new(
        r: usize,
        d: Option<usize>,
        k: usize,
        g: usize,
        formula: &'static str,
        value: Rational,
    ) -> Self {
        DimResult {
            r,
            d,
            k,
            g,
            formula,
            is_integer: rational::is_integer(&value),
            value,
            formal: g < 2,
            checks: vec!["exact-rational".to_string()],
        }
    }

    fn require_dimension(mut self) -> Result<Self> {
        if self.formal {
            return Ok(self);
        }
        if !self.is_integer {
            return Err(Error::Inconsistency(format!(
                "{} for r={} d={:?} k={} g={} is {} (not an integer)",
                self.formula, self.r, self.d, self.k, self.g, self.value
            )));
        }
        if !rational::is_non_negative(&self.value) {
            return Err(Error::Inconsistency(format!(
                "{} is negative: {}",
                self.formula, self.value
            )));
        }
        self.checks.push("integral".to_string());
        self.checks.push("non-negative".to_string());
        Ok(self)
    }
}

/// `((-1)^{r-1} ζ_r^c)^{-d}` as an exponent of ζ_N.
fn phase_exponent(ctx: &LevelContext, class: usize, d: usize) -> i64 {
    let n = ctx.order() as i64;
    let sign = if ctx.r() % 2 == 0 { n / 2 } else { 0 };
    let base = sign + class as i64 * ctx.shifted_level() as i64;
    (-(d as i64) * base).rem_euclid(n)
}

/// δ(t) = Π_{i<j} (t_i - t_j), in the order the exponents are stored.
pub fn vandermonde(ctx: &LevelContext, p: &OrbitPoint) -> CycloElem {
    let n = ctx.order();
    let a = p.exponents();
    let factors: Vec<CycloElem> = (0..a.len())
        .flat_map(|i| (i + 1..a.len()).map(move |j| (i, j)))
        .map(|(i, j)| {
            CycloElem::from_exponent_sum(n, [(a[i], BigInt::one()), (a[j], -BigInt::one())])
                .expect("positive order")
        })
        .collect();
    CycloElem::product(n, &factors).expect("same order")
}

/// |δ(t)|² = δ(t)·conj(δ(t)).
pub fn vandermonde_sq(ctx: &LevelContext, p: &OrbitPoint) -> CycloElem {
    let delta = vandermonde(ctx, p);
    delta.try_mul(&delta.conj()).expect("same order")
}

/// 1/(1 - ζ_N^m), for m not divisible by N.
fn inv_one_minus_root(n: usize, m: i64) -> CycloElem {
    let m = m.rem_euclid(n as i64);
    debug_assert!(m != 0);
    let exact = n as i64 / m.gcd(&(n as i64));
    let terms = (1..exact).map(|j| (j * m, BigInt::from(j)));
    CycloElem::from_exponent_sum(n, terms)
        .expect("positive order")
        .scale(&rational::rat(-1, exact))
}

/// 1/|1 - ζ_N^m|².
fn inv_abs_sq_one_minus_root(n: usize, m: i64) -> CycloElem {
    inv_one_minus_root(n, m)
        .try_mul(&inv_one_minus_root(n, -m))
        .expect("same order")
}

/// Precomputed per-level data: the orbits of T_k and their weights
/// `1/|δ(t)|²`, plus per-genus class sums.
#[derive(Debug)]
pub struct Level {
    table: WeightTable,
    inv_vdm_sq: Vec<CycloElem>,
    class_sums: Mutex<HashMap<usize, Arc<Vec<CycloElem>>>>,
}

impl Level {
    pub fn new(ctx: &LevelContext) -> Self {
        let table = WeightTable::new(ctx);
        let n = ctx.order();
        let mut pair_cache: HashMap<i64, CycloElem> = HashMap::new();
        let inv_vdm_sq = table
            .orbits()
            .iter()
            .map(|p| {
                let a = p.exponents();
                let mut factors = Vec::with_capacity(a.len() * (a.len() - 1) / 2);
                for i in 0..a.len() {
                    for j in i + 1..a.len() {
                        // |1 - ζ^m|² = |1 - ζ^{-m}|², so key on the smaller one
                        let m = ctx.window(a[i] - a[j]).abs();
                        factors.push(
                            pair_cache
                                .entry(m)
                                .or_insert_with(|| inv_abs_sq_one_minus_root(n, m))
                                .clone(),
                        );
                    }
                }
                CycloElem::product(n, &factors).expect("same order")
            })
            .collect();
        Level {
            table,
            inv_vdm_sq,
            class_sums: Mutex::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &LevelContext {
        self.table.ctx()
    }

    pub fn table(&self) -> &WeightTable {
        &self.table
    }

    /// 1/|δ(t)|² for each orbit, aligned with `table().orbits()`.
    pub fn inv_vandermonde_sq(&self) -> &[CycloElem] {
        &self.inv_vdm_sq
    }

    /// For each center class c, Σ 1/|δ(t)|^{2g-2} over the orbits of that class.
    pub fn class_sums(&self, g: usize) -> Arc<Vec<CycloElem>> {
        if let Some(s) = self.class_sums.lock().expect("class sums poisoned").get(&g) {
            return Arc::clone(s);
        }
        let ctx = self.ctx();
        let n = ctx.order();
        let mut buckets: Vec<Vec<CycloElem>> = vec![Vec::new(); ctx.r()];
        for (p, x) in self.table.orbits().iter().zip(&self.inv_vdm_sq) {
            buckets[p.center_class()].push(x.pow(g as u32 - 1));
        }
        let sums: Vec<CycloElem> = buckets
            .iter()
            .map(|b| CycloElem::sum(n, b).expect("same order"))
            .collect();
        let sums = Arc::new(sums);
        self.class_sums
            .lock()
            .expect("class sums poisoned")
            .insert(g, Arc::clone(&sums));
        sums
    }

    /// Σ_{t ∈ T_k/S_r} ((-1)^{r-1} t^{k+r})^{-d} / |δ(t)|^{2g-2}, exactly.
    pub fn phased_sum(&self, d: usize, g: usize) -> Result<Rational> {
        let ctx = *self.ctx();
        let sums = self.class_sums(g);
        let terms: Vec<CycloElem> = sums
            .iter()
            .enumerate()
            .map(|(c, s)| s.mul_root(phase_exponent(&ctx, c, d)))
            .collect();
        CycloElem::sum(ctx.order(), &terms)?
            .as_rational()
            .ok_or_else(|| {
                Error::Inconsistency(format!("phased sum for d={d} g={g} is not rational"))
            })
    }

    /// Σ_{t ∈ T'_k/S_r} 1/|δ(t)|^{2g-2}.
    pub fn t_prime_sum(&self, g: usize) -> Result<Rational> {
        let sums = self.class_sums(g);
        sums[self.ctx().t_prime_class()]
            .as_rational()
            .ok_or_else(|| Error::Inconsistency(format!("T'_k sum for g={g} is not rational")))
    }
}

/// Caches [`Level`]s so sweeps over d and g reuse the per-orbit work.
#[derive(Debug, Default)]
pub struct Evaluator {
    levels: Mutex<HashMap<(usize, usize), Arc<Level>>>,
}

fn sl_prefactor(r: usize, k: usize, g: usize) -> Rational {
    let e = (g - 1) as i64;
    rpow(&int(r as i64), e) * rpow(&int((k + r) as i64), (r as i64 - 1) * e)
}

/// `(k/r + 1)^{(r-1)(g-1)}`.
fn trace_value(r: usize, k: usize, g: usize) -> Rational {
    rpow(
        &rational::rat((k + r) as i64, r as i64),
        (r as i64 - 1) * (g as i64 - 1),
    )
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn level(&self, r: usize, k: usize) -> Result<Arc<Level>> {
        let ctx = LevelContext::new(r, k)?;
        if let Some(l) = self
            .levels
            .lock()
            .expect("level cache poisoned")
            .get(&(r, k))
        {
            return Ok(Arc::clone(l));
        }
        let level = Arc::new(Level::new(&ctx));
        let mut cache = self.levels.lock().expect("level cache poisoned");
        Ok(Arc::clone(cache.entry((r, k)).or_insert(level)))
    }

    fn sl_value(&self, q: &ModuliQuery) -> Result<(Rational, Vec<String>)> {
        let level = self.level(q.r, q.k)?;
        let sum = level.phased_sum(q.d, q.g)?;
        let mut checks = Vec::new();
        if q.d == 0 {
            let unsigned = CycloElem::sum(level.ctx().order(), level.class_sums(q.g).iter())?
                .as_rational()
                .ok_or_else(|| Error::Inconsistency("unsigned sum not rational".into()))?;
            if unsigned != sum {
                return Err(Error::Inconsistency(format!(
                    "d=0 phase is not trivial: {sum} vs {unsigned}"
                )));
            }
            checks.push("phase-free-d0".to_string());
        }
        Ok((sl_prefactor(q.r, q.k, q.g) * sum, checks))
    }

    /// dim H^0(M_r^d, D^k) for g ≥ 2.
    pub fn sl_dimension(&self, q: &ModuliQuery) -> Result<DimResult> {
        q.check_dimension_genus()?;
        self.sl_dimension_formal(q)
    }

    /// As [`Evaluator::sl_dimension`] but also accepts g = 1, flagged formal.
    pub fn sl_dimension_formal(&self, q: &ModuliQuery) -> Result<DimResult> {
        q.check_sl()?;
        let (value, extra) = self.sl_value(q)?;
        let mut res = DimResult::new(q.r, Some(q.d), q.k, q.g, "sl_verlinde_sum", value);
        res.checks.extend(extra);
        res.require_dimension()
    }

    /// Σ_d dim H^0(M_r^d, D^k) from the T'_k sum, checked against the
    /// individual degrees.
    pub fn sl_dimension_sum(&self, r: usize, k: usize, g: usize) -> Result<DimResult> {
        let q = ModuliQuery::new(r, 0, k, g)?;
        q.check_dimension_genus()?;
        if k % r != 0 {
            return Err(Error::invalid(
                "r divides k (every degree must be admissible)",
                format!("r = {r}, k = {k}"),
            ));
        }
        let level = self.level(r, k)?;
        let e = (g - 1) as i64;
        let value = rpow(&int(r as i64), g as i64)
            * rpow(&int((k + r) as i64), (r as i64 - 1) * e)
            * level.t_prime_sum(g)?;
        let mut by_degree = Rational::zero();
        for d in 0..r {
            by_degree += self.sl_dimension(&q.with_degree(d))?.value;
        }
        if by_degree != value {
            return Err(Error::Inconsistency(format!(
                "degree sum {by_degree} != T'_k total {value} (r={r} k={k} g={g})"
            )));
        }
        let mut res = DimResult::new(r, None, k, g, "sl_degree_total", value);
        res.checks.push("degree-sum".to_string());
        res.require_dimension()
    }

    /// dim H^0(M_{PGL_r}^d, D^k) for g ≥ 2, r prime.
    pub fn pgl_dimension(&self, q: &ModuliQuery) -> Result<DimResult> {
        q.check_dimension_genus()?;
        self.pgl_dimension_formal(q)
    }

    /// The PGL component value by three routes: from the SL dimension, from
    /// the bare orbit sum, and as the average of the traces of the `r^{2g}`
    /// elements of J_r. Accepts g = 1.
    pub fn pgl_routes(&self, q: &ModuliQuery) -> Result<[Rational; 3]> {
        q.check_pgl()?;
        let (r, k, g) = (q.r as i64, q.k, q.g as i64);
        let level = self.level(q.r, q.k)?;
        let (sl, _) = self.sl_value(q)?;
        let bare = level.phased_sum(q.d, q.g)?;
        let inv_r2g = rpow(&int(r), -2 * g);
        let tr = trace_value(q.r, k, q.g);
        let r2g_minus_one = rpow(&int(r), 2 * g) - Rational::one();

        let from_sl = &inv_r2g * &sl + (Rational::one() - &inv_r2g) * &tr;
        let from_sum = &inv_r2g * &tr * (rpow(&int(r), r * (g - 1)) * &bare + &r2g_minus_one);
        let averaged = (&sl + &r2g_minus_one * trace_alpha(q)?) * &inv_r2g;
        Ok([from_sl, from_sum, averaged])
    }

    /// As [`Evaluator::pgl_dimension`] but also accepts g = 1; the three
    /// routes of [`Evaluator::pgl_routes`] must agree.
    pub fn pgl_dimension_formal(&self, q: &ModuliQuery) -> Result<DimResult> {
        let [from_sl, from_sum, averaged] = self.pgl_routes(q)?;
        if from_sl != from_sum || from_sl != averaged {
            return Err(Error::Inconsistency(format!(
                "PGL dimension routes disagree for r={} d={} k={} g={}: {from_sl}, {from_sum}, {averaged}",
                q.r, q.d, q.k, q.g
            )));
        }
        let mut res = DimResult::new(q.r, Some(q.d), q.k, q.g, "pgl_component_average", from_sl);
        res.checks.push("sl-form=sum-form".to_string());
        res.checks.push("trace-average".to_string());
        res.require_dimension()
    }

    /// dim H^0(M_{PGL_r}, D^k) summed over all degrees, checked against the
    /// individual components.
    pub fn pgl_total(&self, r: usize, k: usize, g: usize) -> Result<DimResult> {
        let q = ModuliQuery::new(r, 0, k, g)?;
        q.check_dimension_genus()?;
        check_descent(r, k)?;
        let level = self.level(r, k)?;
        let (ri, gi) = (r as i64, g as i64);
        let value = rpow(&int(ri), 1 - 2 * gi)
            * trace_value(r, k, g)
            * (rpow(&int(ri), ri * (gi - 1)) * level.t_prime_sum(g)? + rpow(&int(ri), 2 * gi)
                - Rational::one());
        let mut by_degree = Rational::zero();
        for d in 0..r {
            by_degree += self.pgl_dimension(&q.with_degree(d))?.value;
        }
        if by_degree != value {
            return Err(Error::Inconsistency(format!(
                "PGL components sum to {by_degree}, total formula gives {value} (r={r} k={k} g={g})"
            )));
        }
        let mut res = DimResult::new(r, None, k, g, "pgl_total", value);
        res.checks.push("component-sum".to_string());
        res.require_dimension()
    }
}

pub fn sl_dimension(q: &ModuliQuery) -> Result<DimResult> {
    Evaluator::new().sl_dimension(q)
}

pub fn sl_dimension_sum(r: usize, k: usize, g: usize) -> Result<DimResult> {
    Evaluator::new().sl_dimension_sum(r, k, g)
}

pub fn pgl_dimension(q: &ModuliQuery) -> Result<DimResult> {
    Evaluator::new().pgl_dimension(q)
}

pub fn pgl_total(r: usize, k: usize, g: usize) -> Result<DimResult> {
    Evaluator::new().pgl_total(r, k, g)
}

/// Trace of an order-r element of the Jacobian on H^0(M_r^d, D^k).
///
/// With `L_d = D^{r/δ}` the trace on `L_d^{k_L}` is `(k_L + 1)^{(r-1)(g-1)}`
/// for d coprime to r and `(k_L/r + 1)^{(r-1)(g-1)}` for d = 0; in powers of
/// D both read `(k/r + 1)^{(r-1)(g-1)}`.
pub fn trace_alpha(q: &ModuliQuery) -> Result<Rational> {
    let r = q.r;
    if !is_prime(r) {
        return Err(Error::invalid(
            "r prime (every nonzero element has order r)",
            format!("r = {r}"),
        ));
    }
    q.check_sl()?;
    let k_l = q.k * q.delta() / r;
    if q.d == 0 {
        if k_l % r != 0 || (r % 2 == 0 && k_l % (2 * r) != 0) {
            return Err(Error::invalid(
                "degree 0: k multiple of r, of 2r if r even",
                format!("r = {r}, k = {}", q.k),
            ));
        }
        Ok(rpow(
            &(rational::rat(k_l as i64, r as i64) + Rational::one()),
            exp(q),
        ))
    } else {
        if r % 2 == 0 && k_l % 2 != 0 {
            return Err(Error::invalid(
                "coprime degree, r even: power of L_d must be even",
                format!("r = {r}, k = {} gives L_d-power {k_l}", q.k),
            ));
        }
        Ok(rpow(&int(k_l as i64 + 1), exp(q)))
    }
}

fn exp(q: &ModuliQuery) -> i64 {
    (q.r as i64 - 1) * (q.g as i64 - 1)
}

/// Checks the Schur-determinant reduction for the character of
/// `V_{kϖ_{r-d}}` at `t`: the r×r determinant with rows
/// `t_j^{k+r-1}, …, t_j^{k+d}, t_j^{d-1}, …, 1` equals
/// `((-1)^{r-1} ζ)^{-d} δ(t)` where `t^{k+r} = ζ`.
pub fn schur_character_check(ctx: &LevelContext, p: &OrbitPoint, d: usize) -> bool {
    let r = ctx.r();
    if d >= r {
        return false;
    }
    let k = ctx.k() as i64;
    let rl = r as i64;
    let row_exps: Vec<i64> = (k + d as i64..k + rl)
        .rev()
        .chain((0..d as i64).rev())
        .collect();
    let n = ctx.order() as i64;
    let a = p.exponents();
    let mut counts = vec![0i64; n as usize];
    for_each_permutation(r, |perm, sign| {
        let e: i64 = (0..r).map(|i| a[perm[i]] * row_exps[i]).sum();
        counts[e.rem_euclid(n) as usize] += sign;
    });
    let det = CycloElem::from_exponent_sum(
        ctx.order(),
        counts
            .iter()
            .enumerate()
            .map(|(e, &c)| (e as i64, BigInt::from(c))),
    )
    .expect("positive order");
    let expected = vandermonde(ctx, p).mul_root(phase_exponent(ctx, p.center_class(), d));
    det == expected
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize], i64)) {
    fn rec(k: usize, perm: &mut Vec<usize>, sign: i64, f: &mut impl FnMut(&[usize], i64)) {
        if k == perm.len() {
            f(perm, sign);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, if i == k { sign } else { -sign }, f);
            perm.swap(k, i);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    rec(0, &mut perm, 1, &mut f);
}

/// Trace of the k-th symmetric power of `diag(1, ζ_r, …, ζ_r^{r-1})`.
pub fn sym_power_trace(r: usize, k: usize) -> Rational {
    if k % r == 0 {
        Rational::one()
    } else {
        Rational::zero()
    }
}

pub use crate::oracle::sym_power_trace_brute;

/// The genus-one probe for the PGL_r component of degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct N1Result {
    pub r: usize,
    pub k: usize,
    /// `1 + ((k+1)^{r-1} - 1)/r²`.
    #[serde(with = "rational::as_string")]
    pub value: Rational,
    pub is_integer: bool,
    /// The PGL component formula evaluated formally at g = 1, d = 0.
    #[serde(with = "rational::as_string")]
    pub formal_pgl_value: Rational,
    pub agrees_with_formal_pgl: bool,
}

/// `N(1) = 1 + ((k+1)^{r-1} - 1)/r²` next to the formal genus-one value of
/// the PGL component formula. The two coincide for r = 2 only; for larger r
/// the formal value counts P_k, which is `C(k+r-1, r-1)` rather than
/// `(k+1)^{r-1}`. At genus one every orbit weight is 1, so the formal value
/// is `(C(k+r-1, r-1) + r² - 1)/r²`.
pub fn remark_n1(r: usize, k: usize) -> Result<N1Result> {
    check_descent(r, k)?;
    let ri = r as i64;
    let value =
        Rational::one() + (rpow(&int(k as i64 + 1), ri - 1) - Rational::one()) / int(ri * ri);
    let count = binomial_big(k + r - 1, r - 1);
    let formal = Rational::new(count + BigInt::from(ri * ri - 1), BigInt::from(ri * ri));
    Ok(N1Result {
        r,
        k,
        is_integer: rational::is_integer(&value),
        agrees_with_formal_pgl: formal == value,
        value,
        formal_pgl_value: formal,
    })
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}
