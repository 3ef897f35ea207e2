//! Independent cross-checks for the exact pipeline: high-precision floating
//! evaluation of every sum and brute-force enumerations.
//!
//! Nothing here feeds back into an exact result. A disagreement is reported
//! to the caller, which decides how loudly to fail.

use std::collections::BTreeSet;

pub use astro_float::BigFloat;
use astro_float::{Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{CycloElem, Rational};
use crate::error::{Error, Result};
use crate::verlinde::{check_descent, ModuliQuery};
use crate::weights::{enumerate_tk, enumerate_tk_prime, LevelContext, OrbitPoint};

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision and comparison tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionConfig {
    pub bits: usize,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            bits: 256,
            tol_abs: 1e-20,
            tol_rel: 1e-30,
        }
    }
}

impl PrecisionConfig {
    pub fn new(bits: usize, tol_abs: f64, tol_rel: f64) -> Result<Self> {
        if bits < 64 {
            return Err(Error::invalid(
                "precision >= 64 bits",
                format!("bits = {bits}"),
            ));
        }
        if !(tol_abs > 0.0 && tol_rel > 0.0) {
            return Err(Error::invalid(
                "positive tolerances",
                format!("tol_abs = {tol_abs}, tol_rel = {tol_rel}"),
            ));
        }
        Ok(PrecisionConfig {
            bits,
            tol_abs,
            tol_rel,
        })
    }

    /// Whether `approx` is within `tol_abs + tol_rel·|exact|` of `exact`.
    pub fn agrees(&self, approx: &BigFloat, exact: &Rational) -> bool {
        let mut f = Fp::new(self.bits);
        let e = f.rational(exact);
        let diff = approx.sub(&e, self.bits, RM).abs();
        let bound = f.float(self.tol_abs).add(
            &f.float(self.tol_rel).mul(&e.abs(), self.bits, RM),
            self.bits,
            RM,
        );
        !diff.is_nan() && diff.cmp(&bound).is_some_and(|c| c <= 0)
    }

    /// |approx - exact| as an f64, for reporting.
    pub fn error(&self, approx: &BigFloat, exact: &Rational) -> f64 {
        let mut f = Fp::new(self.bits);
        let e = f.rational(exact);
        to_f64(&approx.sub(&e, self.bits, RM).abs())
    }
}

/// Precision plus the constants cache astro-float needs for π and trig.
struct Fp {
    p: usize,
    cc: Consts,
}

#[derive(Clone)]
struct Complex {
    re: BigFloat,
    im: BigFloat,
}

impl Fp {
    fn new(p: usize) -> Self {
        Fp {
            p,
            cc: Consts::new().expect("astro-float constants"),
        }
    }

    fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.p)
    }

    fn float(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    fn bigint(&mut self, n: &BigInt) -> BigFloat {
        BigFloat::parse(&n.to_string(), Radix::Dec, self.p, RM, &mut self.cc)
    }

    fn rational(&mut self, q: &Rational) -> BigFloat {
        let n = self.bigint(q.numer());
        let d = self.bigint(q.denom());
        n.div(&d, self.p, RM)
    }

    fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    /// exp(2πi·num/den).
    fn root(&mut self, num: i64, den: i64) -> Complex {
        let two_pi = self.pi().mul(&self.int(2), self.p, RM);
        let theta = two_pi
            .mul(&self.int(num), self.p, RM)
            .div(&self.int(den), self.p, RM);
        Complex {
            re: theta.cos(self.p, RM, &mut self.cc),
            im: theta.sin(self.p, RM, &mut self.cc),
        }
    }

    fn cmul(&self, a: &Complex, b: &Complex) -> Complex {
        let p = self.p;
        Complex {
            re: a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM),
            im: a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM),
        }
    }

    fn csub(&self, a: &Complex, b: &Complex) -> Complex {
        Complex {
            re: a.re.sub(&b.re, self.p, RM),
            im: a.im.sub(&b.im, self.p, RM),
        }
    }

    fn abs_sq(&self, a: &Complex) -> BigFloat {
        let p = self.p;
        a.re.mul(&a.re, p, RM).add(&a.im.mul(&a.im, p, RM), p, RM)
    }

    fn powi(&self, x: &BigFloat, e: i64) -> BigFloat {
        let base = if e < 0 {
            self.int(1).div(x, self.p, RM)
        } else {
            x.clone()
        };
        let mut acc = self.int(1);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base, self.p, RM);
        }
        acc
    }
}

pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    x.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

/// Numerical value of a cyclotomic element as (re, im).
pub fn eval_cyclo(x: &CycloElem, cfg: &PrecisionConfig) -> (BigFloat, BigFloat) {
    let mut f = Fp::new(cfg.bits);
    let n = x.order() as i64;
    let mut re = f.int(0);
    let mut im = f.int(0);
    for (i, c) in x.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let z = f.root(i as i64, n);
        let c = f.rational(c);
        re = re.add(&c.mul(&z.re, f.p, RM), f.p, RM);
        im = im.add(&c.mul(&z.im, f.p, RM), f.p, RM);
    }
    (re, im)
}

/// Per-orbit data on the unit circle: |δ(t)|² and `((-1)^{r-1} t^{k+r})^{-d}`.
fn orbit_terms(f: &mut Fp, ctx: &LevelContext, p: &OrbitPoint, d: usize) -> (BigFloat, Complex) {
    let n = ctx.order() as i64;
    let t: Vec<Complex> = p.exponents().iter().map(|&a| f.root(a, n)).collect();
    let mut delta = Complex {
        re: f.int(1),
        im: f.int(0),
    };
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            delta = f.cmul(&delta, &f.csub(&t[i], &t[j]));
        }
    }
    // t_1^{k+r}: angle (k+r)·a_1/N; the sign (-1)^{r-1} is half a turn
    let shift = ctx.shifted_level() as i64;
    let half_turns = if ctx.r() % 2 == 0 { n / 2 } else { 0 };
    let phase = f.root(-(d as i64) * (shift * p.exponents()[0] + half_turns), n);
    (f.abs_sq(&delta), phase)
}

fn imaginary_guard(f: &Fp, im: &BigFloat, cfg: &PrecisionConfig, what: &str) -> Result<()> {
    let tol = f.float(cfg.tol_abs);
    if im.abs().cmp(&tol).is_none_or(|c| c > 0) {
        return Err(Error::PrecisionExhausted(format!(
            "{what}: imaginary residue {} exceeds tolerance",
            to_f64(im)
        )));
    }
    Ok(())
}

fn sl_bare_sum(
    f: &mut Fp,
    ctx: &LevelContext,
    d: usize,
    g: usize,
    cfg: &PrecisionConfig,
) -> Result<BigFloat> {
    let mut re = f.int(0);
    let mut im = f.int(0);
    for p in enumerate_tk(ctx) {
        let (vdm, phase) = orbit_terms(f, ctx, &p, d);
        let w = f.powi(&vdm, 1 - g as i64);
        re = re.add(&phase.re.mul(&w, f.p, RM), f.p, RM);
        im = im.add(&phase.im.mul(&w, f.p, RM), f.p, RM);
    }
    imaginary_guard(f, &im, cfg, "SL orbit sum")?;
    Ok(re)
}

/// Floating evaluation of dim H^0(M_r^d, D^k) from `t_i = exp(2πi a_i/N)`.
pub fn float_eval_sl(q: &ModuliQuery, cfg: &PrecisionConfig) -> Result<BigFloat> {
    q.check_sl()?;
    let ctx = LevelContext::new(q.r(), q.k())?;
    let mut f = Fp::new(cfg.bits);
    let sum = sl_bare_sum(&mut f, &ctx, q.d(), q.g(), cfg)?;
    let e = q.g() as i64 - 1;
    let pre = f.powi(&f.int(q.r() as i64), e).mul(
        &f.powi(&f.int((q.k() + q.r()) as i64), (q.r() as i64 - 1) * e),
        f.p,
        RM,
    );
    Ok(pre.mul(&sum, f.p, RM))
}

/// Floating evaluation of the PGL_r component, from the SL value and the trace.
pub fn float_eval_pgl(q: &ModuliQuery, cfg: &PrecisionConfig) -> Result<BigFloat> {
    q.check_pgl()?;
    let sl = float_eval_sl(q, cfg)?;
    let f = Fp::new(cfg.bits);
    let (r, k, g) = (q.r() as i64, q.k() as i64, q.g() as i64);
    let r2g = f.powi(&f.int(r), 2 * g);
    let tr = f.powi(&f.int(k + r).div(&f.int(r), f.p, RM), (r - 1) * (g - 1));
    let num = sl.add(&r2g.sub(&f.int(1), f.p, RM).mul(&tr, f.p, RM), f.p, RM);
    Ok(num.div(&r2g, f.p, RM))
}

/// Floating evaluation of the SL total over degrees from the T'_k sum.
pub fn float_eval_sl_sum(r: usize, k: usize, g: usize, cfg: &PrecisionConfig) -> Result<BigFloat> {
    let ctx = LevelContext::new(r, k)?;
    let mut f = Fp::new(cfg.bits);
    let mut sum = f.int(0);
    for p in enumerate_tk_prime(&ctx) {
        let (vdm, _) = orbit_terms(&mut f, &ctx, &p, 0);
        sum = sum.add(&f.powi(&vdm, 1 - g as i64), f.p, RM);
    }
    let e = g as i64 - 1;
    let pre = f.powi(&f.int(r as i64), g as i64).mul(
        &f.powi(&f.int((k + r) as i64), (r as i64 - 1) * e),
        f.p,
        RM,
    );
    Ok(pre.mul(&sum, f.p, RM))
}

/// Floating evaluation of the PGL_r total over degrees, generic path.
pub fn float_eval_pgl_total(
    r: usize,
    k: usize,
    g: usize,
    cfg: &PrecisionConfig,
) -> Result<BigFloat> {
    check_descent(r, k)?;
    let ctx = LevelContext::new(r, k)?;
    let mut f = Fp::new(cfg.bits);
    let mut sum = f.int(0);
    for p in enumerate_tk_prime(&ctx) {
        let (vdm, _) = orbit_terms(&mut f, &ctx, &p, 0);
        sum = sum.add(&f.powi(&vdm, 1 - g as i64), f.p, RM);
    }
    let (ri, ki, gi) = (r as i64, k as i64, g as i64);
    let tr = f.powi(
        &f.int(ki + ri).div(&f.int(ri), f.p, RM),
        (ri - 1) * (gi - 1),
    );
    let inner = f
        .powi(&f.int(ri), ri * (gi - 1))
        .mul(&sum, f.p, RM)
        .add(&f.powi(&f.int(ri), 2 * gi), f.p, RM)
        .sub(&f.int(1), f.p, RM);
    Ok(f.powi(&f.int(ri), 1 - 2 * gi)
        .mul(&tr, f.p, RM)
        .mul(&inner, f.p, RM))
}

/// The rank-2 total as a sine sum:
/// `2^{1-2g} (k/2+1)^{g-1} (Σ_{l odd, 0<l<k+2} sin^{2-2g}(lπ/(k+2)) + 2^{2g} - 1)`.
pub fn pgl2_sine_formula(k: usize, g: usize, cfg: &PrecisionConfig) -> Result<BigFloat> {
    if k % 4 != 0 {
        return Err(Error::invalid("k divisible by 4", format!("k = {k}")));
    }
    if g < 2 {
        return Err(Error::invalid(
            "genus g >= 2 for a dimension",
            format!("g = {g}"),
        ));
    }
    let mut f = Fp::new(cfg.bits);
    let pi = f.pi();
    let den = f.int(k as i64 + 2);
    let mut sum = f.int(0);
    for l in (1..k as i64 + 2).step_by(2) {
        let s = pi
            .mul(&f.int(l), f.p, RM)
            .div(&den, f.p, RM)
            .sin(f.p, RM, &mut f.cc);
        sum = sum.add(&f.powi(&s, 2 - 2 * g as i64), f.p, RM);
    }
    let gi = g as i64;
    let inner = sum
        .add(&f.powi(&f.int(2), 2 * gi), f.p, RM)
        .sub(&f.int(1), f.p, RM);
    let pre = f
        .powi(&f.int(2), 1 - 2 * gi)
        .mul(&f.powi(&f.int(k as i64 / 2 + 1), gi - 1), f.p, RM);
    Ok(pre.mul(&inner, f.p, RM))
}

/// |S_{0j}|² for SL_2 at level k from its sine expression,
/// `sin²((j+1)π/(k+2)) / (k/2 + 1)`.
pub fn sl2_s_entry_sq(k: usize, j: usize, cfg: &PrecisionConfig) -> BigFloat {
    let mut f = Fp::new(cfg.bits);
    let s = f
        .pi()
        .mul(&f.int(j as i64 + 1), f.p, RM)
        .div(&f.int(k as i64 + 2), f.p, RM)
        .sin(f.p, RM, &mut f.cc);
    let half = f.int(k as i64 + 2).div(&f.int(2), f.p, RM);
    s.mul(&s, f.p, RM).div(&half, f.p, RM)
}

/// Scans every strictly decreasing tuple of exponents in (-N/2, N/2] and
/// keeps those satisfying the T_k conditions. Independent of the weight
/// parametrization.
pub fn brute_scan_tk(ctx: &LevelContext) -> Result<Vec<OrbitPoint>> {
    if ctx.r() > 4 || ctx.k() > 8 {
        return Err(Error::CostGuard(format!(
            "brute scan limited to r <= 4, k <= 8 (got r = {}, k = {})",
            ctx.r(),
            ctx.k()
        )));
    }
    let n = ctx.order() as i64;
    let r = ctx.r();
    let window: Vec<i64> = (-(n - 1) / 2..=n / 2).rev().collect();
    let mut found = BTreeSet::new();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let tuple: Vec<i64> = idx.iter().map(|&i| window[i]).collect();
        let sum: i64 = tuple.iter().sum();
        let res = tuple[0].rem_euclid(r as i64);
        if sum.rem_euclid(n) == 0 && tuple.iter().all(|a| a.rem_euclid(r as i64) == res) {
            found.insert(OrbitPoint::from_exponents(ctx, &tuple)?);
        }
        // next r-combination of window indices
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(found.into_iter().collect());
            }
            i -= 1;
            if idx[i] < window.len() - (r - i) {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Trace of `S^k diag(1, ζ_r, …, ζ_r^{r-1})` by summing `ζ_r^{Σ}` over all
/// multisets of size k from `{0, …, r-1}`.
pub fn sym_power_trace_brute(r: usize, k: usize) -> Rational {
    fn rec(r: usize, start: usize, left: usize, acc: usize, counts: &mut [i64]) {
        if left == 0 {
            counts[acc % r] += 1;
            return;
        }
        for e in start..r {
            rec(r, e, left - 1, acc + e, counts);
        }
    }
    let mut counts = vec![0i64; r];
    rec(r, 0, k, 0, &mut counts);
    let value = CycloElem::from_exponent_sum(
        r,
        counts
            .iter()
            .enumerate()
            .map(|(e, &c)| (e as i64, BigInt::from(c))),
    )
    .expect("positive order");
    value
        .as_rational()
        .expect("symmetric-power trace of a rational representation is rational")
}

/// Distance from the nearest integer, for integrality sanity checks.
pub fn distance_to_integer(x: &BigFloat, cfg: &PrecisionConfig) -> f64 {
    let f = Fp::new(cfg.bits);
    let half = f.int(1).div(&f.int(2), f.p, RM);
    let rounded = x.add(&half, f.p, RM).floor();
    to_f64(&x.sub(&rounded, f.p, RM).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;
    use crate::verlinde::sym_power_trace;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn config_validation() {
        assert!(PrecisionConfig::new(32, 1e-20, 1e-30).is_err());
        assert!(PrecisionConfig::new(128, 0.0, 1e-30).is_err());
        assert!(PrecisionConfig::new(128, 1e-20, 1e-30).is_ok());
    }

    #[test]
    fn float_sl_examples() {
        let c = cfg();
        let v = float_eval_sl(&ModuliQuery::new(2, 0, 4, 2).unwrap(), &c).unwrap();
        assert!(c.agrees(&v, &int(35)));
        let v = float_eval_sl(&ModuliQuery::new(2, 0, 0, 2).unwrap(), &c).unwrap();
        let tight = PrecisionConfig::new(256, 1e-30, 1e-40).unwrap();
        assert!(tight.agrees(&v, &int(1)));
        let v = float_eval_sl(&ModuliQuery::new(2, 1, 4, 2).unwrap(), &c).unwrap();
        assert!(c.agrees(&v, &int(19)));
        assert!(!c.agrees(&v, &int(20)));
    }

    #[test]
    fn float_pgl_examples() {
        let c = cfg();
        assert!(c.agrees(&float_eval_pgl_total(2, 4, 2, &c).unwrap(), &int(9)));
        assert!(c.agrees(
            &float_eval_pgl(&ModuliQuery::new(2, 1, 4, 2).unwrap(), &c).unwrap(),
            &int(4)
        ));
        assert!(c.agrees(&float_eval_sl_sum(2, 4, 2, &c).unwrap(), &int(54)));
    }

    #[test]
    fn sine_form_matches_generic_path() {
        let c = cfg();
        assert!(c.agrees(&pgl2_sine_formula(4, 2, &c).unwrap(), &int(9)));
        for k in [4, 8, 12] {
            for g in 2..=4 {
                let a = pgl2_sine_formula(k, g, &c).unwrap();
                let b = float_eval_pgl_total(2, k, g, &c).unwrap();
                let diff = to_f64(&a.sub(&b, 256, RM).abs());
                assert!(diff < 1e-40, "k={k} g={g} diff={diff}");
            }
        }
        assert!(pgl2_sine_formula(6, 2, &c).is_err());
        assert!(pgl2_sine_formula(4, 1, &c).is_err());
    }

    #[test]
    fn brute_scan_examples() {
        let c = LevelContext::new(2, 4).unwrap();
        assert_eq!(brute_scan_tk(&c).unwrap().len(), 5);
        assert_eq!(
            brute_scan_tk(&LevelContext::new(2, 0).unwrap())
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            brute_scan_tk(&LevelContext::new(3, 3).unwrap())
                .unwrap()
                .len(),
            10
        );
        assert!(brute_scan_tk(&LevelContext::new(5, 1).unwrap()).is_err());
        assert!(brute_scan_tk(&LevelContext::new(2, 9).unwrap()).is_err());
    }

    #[test]
    fn sym_power_brute_examples() {
        assert_eq!(sym_power_trace_brute(3, 3), int(1));
        assert_eq!(sym_power_trace_brute(3, 4), int(0));
        assert_eq!(sym_power_trace_brute(2, 0), int(1));
        for r in 1..=4 {
            for k in 0..=8 {
                assert_eq!(sym_power_trace_brute(r, k), sym_power_trace(r, k));
            }
        }
    }

    #[test]
    fn cyclo_evaluation() {
        let c = cfg();
        let x = CycloElem::root_of_unity(4, 1).unwrap();
        let (re, im) = eval_cyclo(&x, &c);
        assert!(to_f64(&re).abs() < 1e-60);
        assert!((to_f64(&im) - 1.0).abs() < 1e-15);
    }
}
