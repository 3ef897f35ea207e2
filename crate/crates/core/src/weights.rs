//! Index sets of the Verlinde sums and the action of the center on them.
//!
//! A dominant weight of level at most `k` is stored by its marks in the
//! fundamental-weight basis. Its image in the torus is the diagonal matrix
//! `t = exp 2πi (λ+ρ)/(k+r)`, whose entries are all `N`-th roots of unity
//! for `N = r(k+r)`; an [`OrbitPoint`] stores the exponents of those roots,
//! which is an exact and hashable name for the `S_r`-orbit of `t`.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};

/// Rank `r`, level `k`, and the working root-of-unity order `N = r(k+r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelContext {
    r: usize,
    k: usize,
    order: usize,
}

impl LevelContext {
    pub fn new(r: usize, k: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::invalid("rank r >= 2", format!("r = {r}")));
        }
        Ok(LevelContext {
            r,
            k,
            order: r * (k + r),
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// N = r(k+r).
    pub fn order(&self) -> usize {
        debug_assert_eq!(self.order, self.r * (self.k + self.r));
        self.order
    }

    /// k + r, the shifted level.
    pub fn shifted_level(&self) -> usize {
        self.k + self.r
    }

    /// Reduces an exponent into the window (-N/2, N/2].
    pub fn window(&self, a: i64) -> i64 {
        let n = self.order as i64;
        let m = a.rem_euclid(n);
        if 2 * m > n {
            m - n
        } else {
            m
        }
    }

    /// Center class of the orbits making up T'_k: the scalar `(-1)^{r-1}`
    /// written as a power of ζ_r.
    pub fn t_prime_class(&self) -> usize {
        if self.r % 2 == 0 {
            self.r / 2
        } else {
            0
        }
    }
}

/// A dominant weight of SL_r in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DominantWeight {
    marks: Vec<usize>,
}

impl DominantWeight {
    pub fn new(marks: Vec<usize>) -> Self {
        DominantWeight { marks }
    }

    /// ρ: every mark equal to one.
    pub fn rho(r: usize) -> Self {
        DominantWeight {
            marks: vec![1; r - 1],
        }
    }

    /// The weight `(k/r)ρ`.
    pub fn scaled_rho(r: usize, multiple: usize) -> Self {
        DominantWeight {
            marks: vec![multiple; r - 1],
        }
    }

    pub fn marks(&self) -> &[usize] {
        &self.marks
    }

    /// λ(H_θ), the sum of the marks.
    pub fn level(&self) -> usize {
        self.marks.iter().sum()
    }

    /// Partition coordinates of λ+ρ: `ℓ_i = Σ_{j≥i} (m_j + 1)`, `ℓ_r = 0`.
    fn shifted_partition(&self) -> Vec<i64> {
        let r = self.marks.len() + 1;
        let mut ell = vec![0i64; r];
        for i in (0..r - 1).rev() {
            ell[i] = ell[i + 1] + self.marks[i] as i64 + 1;
        }
        ell
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.marks.iter().map(|m| m.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Canonical representative of an `S_r`-orbit in T_k: the exponents of the
/// entries of `t` as powers of ζ_N, windowed into (-N/2, N/2] and sorted in
/// strictly decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbitPoint {
    exponents: Vec<i64>,
    /// `c` with `t^{k+r} = ζ_r^c`.
    center_class: usize,
}

impl OrbitPoint {
    /// Canonicalizes an exponent tuple and checks the defining conditions
    /// of T_k: distinct entries, determinant one, `t^{k+r}` central.
    pub fn from_exponents(ctx: &LevelContext, exponents: &[i64]) -> Result<Self> {
        let r = ctx.r();
        let n = ctx.order() as i64;
        if exponents.len() != r {
            return Err(Error::invalid(
                "one exponent per diagonal entry",
                format!("expected {r}, got {}", exponents.len()),
            ));
        }
        let mut exps: Vec<i64> = exponents.iter().map(|&a| ctx.window(a)).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        if exps.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(
                "distinct diagonal entries",
                format!("{exponents:?}"),
            ));
        }
        if exps.iter().sum::<i64>().rem_euclid(n) != 0 {
            return Err(Error::invalid("determinant one", format!("{exponents:?}")));
        }
        let class = exps[0].rem_euclid(r as i64);
        if exps.iter().any(|a| a.rem_euclid(r as i64) != class) {
            return Err(Error::invalid(
                "t^(k+r) is a scalar",
                format!("{exponents:?} not congruent mod {r}"),
            ));
        }
        Ok(OrbitPoint {
            exponents: exps,
            center_class: class as usize,
        })
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn center_class(&self) -> usize {
        self.center_class
    }
}

/// All dominant weights of level at most `k`, in lexicographic order of marks.
pub fn enumerate_pk(ctx: &LevelContext) -> Vec<DominantWeight> {
    fn rec(slots: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<DominantWeight>) {
        if slots == 0 {
            out.push(DominantWeight::new(prefix.clone()));
            return;
        }
        for m in 0..=budget {
            prefix.push(m);
            rec(slots - 1, budget - m, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(ctx.r() - 1, ctx.k(), &mut Vec::new(), &mut out);
    out
}

/// `λ ↦ t_λ = exp 2πi (λ+ρ)/(k+r)`, as exponents `a_i = r·ℓ_i − Σℓ` of ζ_N.
pub fn weight_to_orbit(ctx: &LevelContext, weight: &DominantWeight) -> Result<OrbitPoint> {
    if weight.marks().len() + 1 != ctx.r() {
        return Err(Error::invalid(
            "r-1 marks",
            format!("{} marks for r = {}", weight.marks().len(), ctx.r()),
        ));
    }
    if weight.level() > ctx.k() {
        return Err(Error::invalid(
            "level at most k",
            format!(
                "{} has level {} > k = {}",
                weight.label(),
                weight.level(),
                ctx.k()
            ),
        ));
    }
    let ell = weight.shifted_partition();
    let s: i64 = ell.iter().sum();
    let r = ctx.r() as i64;
    let exps: Vec<i64> = ell.iter().map(|l| r * l - s).collect();
    OrbitPoint::from_exponents(ctx, &exps)
}

/// T_k/S_r, listed in the order of [`enumerate_pk`].
pub fn enumerate_tk(ctx: &LevelContext) -> Vec<OrbitPoint> {
    enumerate_pk(ctx)
        .iter()
        .map(|w| weight_to_orbit(ctx, w).expect("enumerated weights are in P_k"))
        .collect()
}

/// T'_k/S_r: the orbits with `t^{k+r} = (-1)^{r-1}`.
pub fn enumerate_tk_prime(ctx: &LevelContext) -> Vec<OrbitPoint> {
    let class = ctx.t_prime_class();
    enumerate_tk(ctx)
        .into_iter()
        .filter(|p| p.center_class() == class)
        .collect()
}

/// Whether λ lies in the root lattice: `Σ j·m_j ≡ 0 (mod r)`.
pub fn is_root_lattice(ctx: &LevelContext, weight: &DominantWeight) -> bool {
    let r = ctx.r();
    let s: usize = weight
        .marks()
        .iter()
        .enumerate()
        .map(|(i, m)| (i + 1) * m)
        .sum();
    s % r == 0
}

/// Multiplication of `t` by the generator ζ_r of the center.
pub fn center_action(ctx: &LevelContext, p: &OrbitPoint) -> OrbitPoint {
    let shift = ctx.shifted_level() as i64;
    let exps: Vec<i64> = p.exponents().iter().map(|a| a + shift).collect();
    OrbitPoint::from_exponents(ctx, &exps).expect("center action preserves T_k")
}

/// P_k and T_k/S_r side by side, with the inverse of the bijection.
#[derive(Debug, Clone)]
pub struct WeightTable {
    ctx: LevelContext,
    weights: Vec<DominantWeight>,
    orbits: Vec<OrbitPoint>,
    index: HashMap<OrbitPoint, usize>,
}

impl WeightTable {
    pub fn new(ctx: &LevelContext) -> Self {
        let weights = enumerate_pk(ctx);
        let orbits: Vec<OrbitPoint> = weights
            .iter()
            .map(|w| weight_to_orbit(ctx, w).expect("enumerated weights are in P_k"))
            .collect();
        let index = orbits
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        WeightTable {
            ctx: *ctx,
            weights,
            orbits,
            index,
        }
    }

    pub fn ctx(&self) -> &LevelContext {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[DominantWeight] {
        &self.weights
    }

    pub fn orbits(&self) -> &[OrbitPoint] {
        &self.orbits
    }

    pub fn index_of(&self, p: &OrbitPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn orbit_to_weight(&self, p: &OrbitPoint) -> Option<&DominantWeight> {
        self.index_of(p).map(|i| &self.weights[i])
    }

    /// The center action transported to weights through the bijection.
    pub fn center_action_on_weight(&self, w: &DominantWeight) -> Result<DominantWeight> {
        let p = weight_to_orbit(&self.ctx, w)?;
        let q = center_action(&self.ctx, &p);
        self.orbit_to_weight(&q)
            .cloned()
            .ok_or_else(|| Error::Inconsistency(format!("center action left T_k at {q:?}")))
    }
}

/// P'_k split into orbits of the center, with the fixed weight `(k/r)ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterOrbits {
    /// Non-trivial orbits, each sorted; ordered by smallest member.
    pub orbits: Vec<Vec<DominantWeight>>,
    pub fixed: DominantWeight,
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn center_orbits_on_pk_prime(ctx: &LevelContext) -> Result<CenterOrbits> {
    let (r, k) = (ctx.r(), ctx.k());
    if !is_prime(r) {
        return Err(Error::invalid("r prime", format!("r = {r}")));
    }
    if k % r != 0 {
        return Err(Error::invalid("r divides k", format!("r = {r}, k = {k}")));
    }
    let table = WeightTable::new(ctx);
    let root_weights: BTreeSet<DominantWeight> = table
        .weights()
        .iter()
        .filter(|w| is_root_lattice(ctx, w))
        .cloned()
        .collect();
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    let mut fixed = Vec::new();
    for w in &root_weights {
        if seen.contains(w) {
            continue;
        }
        let mut orbit = vec![w.clone()];
        let mut cur = table.center_action_on_weight(w)?;
        while &cur != w {
            if !root_weights.contains(&cur) {
                return Err(Error::Inconsistency(format!(
                    "center action maps {} out of the root lattice",
                    w.label()
                )));
            }
            orbit.push(cur.clone());
            cur = table.center_action_on_weight(&cur)?;
        }
        orbit.sort();
        seen.extend(orbit.iter().cloned());
        if orbit.len() == 1 {
            fixed.push(orbit.pop().expect("singleton"));
        } else if orbit.len() == r {
            orbits.push(orbit);
        } else {
            return Err(Error::Inconsistency(format!(
                "orbit of size {} for prime r = {r}",
                orbit.len()
            )));
        }
    }
    match fixed.as_slice() {
        [f] if *f == DominantWeight::scaled_rho(r, k / r) => Ok(CenterOrbits {
            orbits,
            fixed: f.clone(),
        }),
        _ => Err(Error::Inconsistency(format!(
            "expected the single fixed weight (k/r)rho, found {fixed:?}"
        ))),
    }
}

/// One line of the orbit listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub marks: Vec<usize>,
    pub exponents: Vec<i64>,
    #[serde(rename = "N")]
    pub order: usize,
    pub center_class: usize,
    pub in_root_lattice: bool,
}

pub fn orbit_listing(ctx: &LevelContext) -> Vec<OrbitRecord> {
    let table = WeightTable::new(ctx);
    table
        .weights()
        .iter()
        .zip(table.orbits())
        .map(|(w, p)| OrbitRecord {
            marks: w.marks().to_vec(),
            exponents: p.exponents().to_vec(),
            order: ctx.order(),
            center_class: p.center_class(),
            in_root_lattice: is_root_lattice(ctx, w),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(r: usize, k: usize) -> LevelContext {
        LevelContext::new(r, k).unwrap()
    }

    fn w(m: &[usize]) -> DominantWeight {
        DominantWeight::new(m.to_vec())
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn pk_enumeration() {
        let pk = enumerate_pk(&ctx(2, 4));
        assert_eq!(pk, (0..=4).map(|j| w(&[j])).collect::<Vec<_>>());
        assert_eq!(enumerate_pk(&ctx(2, 0)), vec![w(&[0])]);
        assert_eq!(enumerate_pk(&ctx(3, 3)).len(), 10);
        let sorted = {
            let mut v = enumerate_pk(&ctx(4, 3));
            v.sort();
            v
        };
        assert_eq!(enumerate_pk(&ctx(4, 3)), sorted);
    }

    #[test]
    fn weight_images() {
        for j in 0..=4 {
            let p = weight_to_orbit(&ctx(2, 4), &w(&[j])).unwrap();
            let a = j as i64 + 1;
            assert_eq!(p.exponents(), &[a, -a]);
        }
        assert_eq!(
            weight_to_orbit(&ctx(2, 0), &w(&[0])).unwrap().exponents(),
            &[1, -1]
        );
        let p = weight_to_orbit(&ctx(3, 3), &w(&[1, 1])).unwrap();
        assert_eq!(p.exponents(), &[6, 0, -6]);
        assert_eq!(p.center_class(), 0);
        assert!(weight_to_orbit(&ctx(3, 3), &w(&[2, 2])).is_err());
        assert!(weight_to_orbit(&ctx(3, 3), &w(&[1])).is_err());
    }

    #[test]
    fn orbit_point_rejects_bad_tuples() {
        let c = ctx(2, 4);
        assert!(OrbitPoint::from_exponents(&c, &[3, 3]).is_err());
        assert!(OrbitPoint::from_exponents(&c, &[3, -2]).is_err());
        assert!(OrbitPoint::from_exponents(&c, &[2, 4, -6]).is_err());
        // exponents must share a residue mod r
        let c3 = ctx(3, 0);
        assert!(OrbitPoint::from_exponents(&c3, &[1, 0, -1]).is_err());
        assert_eq!(
            OrbitPoint::from_exponents(&c3, &[-3, 3, 0])
                .unwrap()
                .exponents(),
            &[3, 0, -3]
        );
    }

    #[test]
    fn tk_counts() {
        assert_eq!(enumerate_tk(&ctx(2, 4)).len(), 5);
        assert_eq!(enumerate_tk(&ctx(3, 0)).len(), 1);
        for r in 2..=5 {
            for k in 0..=12 {
                assert_eq!(enumerate_tk(&ctx(r, k)).len(), binomial(k + r - 1, r - 1));
            }
        }
    }

    #[test]
    fn tk_prime_examples() {
        let p: Vec<Vec<i64>> = enumerate_tk_prime(&ctx(2, 4))
            .iter()
            .map(|p| p.exponents().to_vec())
            .collect();
        assert_eq!(p, vec![vec![1, -1], vec![3, -3], vec![5, -5]]);
        assert_eq!(enumerate_tk_prime(&ctx(2, 0)).len(), 1);
        assert_eq!(enumerate_tk_prime(&ctx(3, 3)).len(), 4);
    }

    #[test]
    fn root_lattice() {
        assert!(is_root_lattice(&ctx(2, 4), &w(&[2])));
        assert!(is_root_lattice(&ctx(3, 3), &w(&[1, 1])));
        assert!(!is_root_lattice(&ctx(3, 3), &w(&[1, 0])));
    }

    #[test]
    fn root_lattice_matches_tk_prime() {
        for r in 2..=5 {
            for k in 0..=10 {
                let c = ctx(r, k);
                for wt in enumerate_pk(&c) {
                    let p = weight_to_orbit(&c, &wt).unwrap();
                    assert_eq!(
                        is_root_lattice(&c, &wt),
                        p.center_class() == c.t_prime_class(),
                        "r={r} k={k} {}",
                        wt.label()
                    );
                }
            }
        }
    }

    #[test]
    fn center_action_examples() {
        let c = ctx(2, 4);
        let p = OrbitPoint::from_exponents(&c, &[1, -1]).unwrap();
        assert_eq!(center_action(&c, &p).exponents(), &[5, -5]);
        let p = OrbitPoint::from_exponents(&c, &[3, -3]).unwrap();
        assert_eq!(center_action(&c, &p), p);
    }

    #[test]
    fn center_action_has_order_dividing_r() {
        for r in 2..=5 {
            for k in 0..=8 {
                let c = ctx(r, k);
                for p in enumerate_tk(&c) {
                    let mut q = p.clone();
                    for _ in 0..r {
                        q = center_action(&c, &q);
                    }
                    assert_eq!(q, p);
                }
            }
        }
    }

    #[test]
    fn center_action_preserves_tk_prime_when_r_divides_k() {
        for (r, k) in [(2, 4), (2, 8), (3, 3), (3, 6), (5, 5)] {
            let c = ctx(r, k);
            let prime: BTreeSet<OrbitPoint> = enumerate_tk_prime(&c).into_iter().collect();
            for p in &prime {
                assert!(prime.contains(&center_action(&c, p)));
            }
        }
    }

    /// On weights the center acts by rotating the affine marks
    /// `(k - Σm, m_1, …, m_{r-1})` one step to the left.
    #[test]
    fn center_action_is_alcove_rotation() {
        for r in 2..=5 {
            for k in 0..=7 {
                let c = ctx(r, k);
                let table = WeightTable::new(&c);
                for wt in table.weights() {
                    let mut affine = vec![k - wt.level()];
                    affine.extend_from_slice(wt.marks());
                    affine.rotate_left(1);
                    let expected = w(&affine[1..]);
                    assert_eq!(table.center_action_on_weight(wt).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn center_orbits() {
        let o = center_orbits_on_pk_prime(&ctx(2, 4)).unwrap();
        assert_eq!(o.orbits, vec![vec![w(&[0]), w(&[4])]]);
        assert_eq!(o.fixed, w(&[2]));
        let o = center_orbits_on_pk_prime(&ctx(2, 8)).unwrap();
        assert_eq!(
            o.orbits,
            vec![vec![w(&[0]), w(&[8])], vec![w(&[2]), w(&[6])]]
        );
        assert_eq!(o.fixed, w(&[4]));
        let o = center_orbits_on_pk_prime(&ctx(3, 3)).unwrap();
        assert_eq!(o.fixed, w(&[1, 1]));
        assert_eq!(o.orbits, vec![vec![w(&[0, 0]), w(&[0, 3]), w(&[3, 0])]]);
        assert!(center_orbits_on_pk_prime(&ctx(4, 4)).is_err());
        assert!(center_orbits_on_pk_prime(&ctx(3, 4)).is_err());
    }

    #[test]
    fn listing_fields() {
        let rows = orbit_listing(&ctx(2, 4));
        assert_eq!(rows.len(), 5);
        let json = serde_json::to_value(&rows[2]).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"marks": [2], "exponents": [3, -3], "N": 12, "center_class": 1, "in_root_lattice": true})
        );
    }
}
