//! The first row of the modular S-matrix, for SL_r and for the PGL_r theory
//! obtained by restricting to the root lattice, identifying center orbits
//! and resolving the fixed point into `r` copies.
//!
//! Only squared magnitudes are exact: `|S_{0λ}|² = |δ(t_λ)|² / (r (k+r)^{r-1})`.

use num_traits::One;
use serde::Serialize;

use crate::arith::rational::{int, rpow};
use crate::arith::{CycloElem, Rational};
use crate::error::{Error, Result};
use crate::oracle::{eval_cyclo, to_f64, PrecisionConfig};
use crate::verlinde::{check_descent, vandermonde_sq, Evaluator};
use crate::weights::{
    center_orbits_on_pk_prime, weight_to_orbit, DominantWeight, LevelContext, WeightTable,
};

/// One index of an S-matrix row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SEntry {
    pub label: String,
    /// Representative weight; for fixed-point copies, `(k/r)ρ`.
    pub weight: DominantWeight,
    pub orbit_members: Vec<DominantWeight>,
    /// `Some(i)` for the i-th copy ν^(i) of the fixed point, 1-based.
    pub copy_index: Option<usize>,
    pub s0_squared: CycloElem,
}

/// Serialized form of an [`SEntry`].
#[derive(Debug, Clone, Serialize)]
pub struct SRowRecord {
    pub label: String,
    pub orbit_members: Vec<Vec<usize>>,
    pub s0_squared: CycloElem,
    pub s0_float: f64,
}

impl SEntry {
    pub fn record(&self, cfg: &PrecisionConfig) -> SRowRecord {
        let (re, _) = eval_cyclo(&self.s0_squared, cfg);
        SRowRecord {
            label: self.label.clone(),
            orbit_members: self
                .orbit_members
                .iter()
                .map(|w| w.marks().to_vec())
                .collect(),
            s0_squared: self.s0_squared.clone(),
            s0_float: to_f64(&re).max(0.0).sqrt(),
        }
    }
}

fn s0_squared(ctx: &LevelContext, w: &DominantWeight) -> Result<CycloElem> {
    let p = weight_to_orbit(ctx, w)?;
    let r = ctx.r() as i64;
    let norm = int(r) * rpow(&int(ctx.shifted_level() as i64), r - 1);
    Ok(vandermonde_sq(ctx, &p).scale(&norm.recip()))
}

/// |S_{0λ}|² for every λ ∈ P_k; the row is checked to have norm one.
pub fn s_row_sl(ctx: &LevelContext) -> Result<Vec<SEntry>> {
    let table = WeightTable::new(ctx);
    let entries = table
        .weights()
        .iter()
        .map(|w| {
            Ok(SEntry {
                label: w.label(),
                weight: w.clone(),
                orbit_members: vec![w.clone()],
                copy_index: None,
                s0_squared: s0_squared(ctx, w)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = CycloElem::sum(ctx.order(), entries.iter().map(|e| &e.s0_squared))?;
    if total.as_rational() != Some(Rational::one()) {
        return Err(Error::Inconsistency(format!(
            "S row for r={} k={} has squared norm {total}",
            ctx.r(),
            ctx.k()
        )));
    }
    Ok(entries)
}

/// The PGL_r row: `r²|S_{0λ}|²` per non-trivial center orbit of P'_k, and
/// `r` copies of `|S_{0,(k/r)ρ}|²`.
pub fn s_row_pgl(ctx: &LevelContext) -> Result<Vec<SEntry>> {
    let (r, k) = (ctx.r(), ctx.k());
    check_descent(r, k)?;
    let split = center_orbits_on_pk_prime(ctx)?;
    let r_sq = int((r * r) as i64);
    let mut entries = Vec::with_capacity(split.orbits.len() + r);
    for orbit in &split.orbits {
        let rep = &orbit[0];
        let s = s0_squared(ctx, rep)?;
        for other in &orbit[1..] {
            if s0_squared(ctx, other)? != s {
                return Err(Error::Inconsistency(format!(
                    "|S|^2 differs between {} and {} in one center orbit",
                    rep.label(),
                    other.label()
                )));
            }
        }
        let labels: Vec<String> = orbit.iter().map(DominantWeight::label).collect();
        entries.push(SEntry {
            label: labels.join("~"),
            weight: rep.clone(),
            orbit_members: orbit.clone(),
            copy_index: None,
            s0_squared: s.scale(&r_sq),
        });
    }
    let fixed = s0_squared(ctx, &split.fixed)?;
    for i in 1..=r {
        entries.push(SEntry {
            label: format!("nu^({i})"),
            weight: split.fixed.clone(),
            orbit_members: vec![split.fixed.clone()],
            copy_index: Some(i),
            s0_squared: fixed.clone(),
        });
    }
    Ok(entries)
}

/// Σ |S'_{0λ}|^{2-2g} over the PGL_r row, checked against the closed-form
/// PGL_r total.
pub fn cft_total(r: usize, k: usize, g: usize) -> Result<Rational> {
    cft_total_with(&Evaluator::new(), r, k, g)
}

pub fn cft_total_with(eval: &Evaluator, r: usize, k: usize, g: usize) -> Result<Rational> {
    if g < 2 {
        return Err(Error::invalid(
            "genus g >= 2 for a dimension",
            format!("g = {g}"),
        ));
    }
    let ctx = LevelContext::new(r, k)?;
    let row = s_row_pgl(&ctx)?;
    let mut terms = Vec::with_capacity(row.len());
    let mut fixed_term: Option<CycloElem> = None;
    for e in &row {
        let term = match (&e.copy_index, &fixed_term) {
            (Some(_), Some(t)) => t.clone(),
            _ => e.s0_squared.inverse()?.pow(g as u32 - 1),
        };
        if e.copy_index.is_some() {
            fixed_term = Some(term.clone());
        }
        terms.push(term);
    }
    let total = CycloElem::sum(ctx.order(), &terms)?
        .as_rational()
        .ok_or_else(|| {
            Error::Inconsistency(format!(
                "S-matrix sum for r={r} k={k} g={g} is not rational"
            ))
        })?;
    let expected = eval.pgl_total(r, k, g)?.value;
    if total != expected {
        return Err(Error::Inconsistency(format!(
            "S-matrix sum {total} != PGL total {expected} (r={r} k={k} g={g})"
        )));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use crate::oracle::sl2_s_entry_sq;

    fn ctx(r: usize, k: usize) -> LevelContext {
        LevelContext::new(r, k).unwrap()
    }

    #[test]
    fn sl2_level_one() {
        let row = s_row_sl(&ctx(2, 1)).unwrap();
        assert_eq!(row.len(), 2);
        for e in &row {
            assert_eq!(e.s0_squared.as_rational(), Some(rat(1, 2)));
        }
    }

    #[test]
    fn sl2_matches_sine_expression() {
        let cfg = PrecisionConfig::default();
        for k in 0..=10 {
            let row = s_row_sl(&ctx(2, k)).unwrap();
            for (j, e) in row.iter().enumerate() {
                let (re, im) = eval_cyclo(&e.s0_squared, &cfg);
                let want = sl2_s_entry_sq(k, j, &cfg);
                assert!(
                    to_f64(&re.sub(&want, 256, astro_float::RoundingMode::ToEven).abs()) < 1e-60
                );
                assert!(to_f64(&im).abs() < 1e-60);
            }
        }
    }

    #[test]
    fn pgl2_level_four() {
        let row = s_row_pgl(&ctx(2, 4)).unwrap();
        assert_eq!(row.len(), 3);
        assert_eq!(row[0].orbit_members.len(), 2);
        for e in &row {
            assert_eq!(e.s0_squared.as_rational(), Some(rat(1, 3)));
        }
        assert_eq!(row[1].copy_index, Some(1));
        assert_eq!(row[2].label, "nu^(2)");
    }

    #[test]
    fn pgl_row_counts() {
        for (r, k, pk_prime) in [(2usize, 8usize, 5usize), (3, 3, 4), (3, 6, 10), (5, 5, 26)] {
            let row = s_row_pgl(&ctx(r, k)).unwrap();
            assert_eq!(row.len(), (pk_prime - 1) / r + r, "r={r} k={k}");
        }
        assert!(s_row_pgl(&ctx(2, 2)).is_err());
    }

    #[test]
    fn cft_examples() {
        assert_eq!(cft_total(2, 4, 2).unwrap(), int(9));
        assert_eq!(cft_total(2, 0, 2).unwrap(), int(2));
        let eval = Evaluator::new();
        assert_eq!(
            cft_total_with(&eval, 3, 3, 2).unwrap(),
            eval.pgl_total(3, 3, 2).unwrap().value
        );
        assert!(cft_total(2, 4, 1).is_err());
    }

    #[test]
    fn records_carry_floats() {
        let row = s_row_pgl(&ctx(2, 4)).unwrap();
        let rec = row[0].record(&PrecisionConfig::default());
        assert!((rec.s0_float - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(rec.orbit_members, vec![vec![0], vec![4]]);
    }
}
