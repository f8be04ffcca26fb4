//! The property suite behind `octabill --command verify`.
//!
//! Every check is exact and deterministic for a given [`VerifyConfig`]; the
//! report carries no timings so two runs serialize byte for byte.

use serde::Serialize;
use serde_json::{json, Value};

use crate::billiard::{build_table_atlas, orbit, step_polygon, OrbitOutcome, TableAtlas};
use crate::error::Result;
use crate::field::{QSqrt2, Sign};
use crate::geometry::{AffineMap, Location, Point2};
use crate::induced::{build_induced_atlas, conjugacy_check_gamma, conjugacy_check_h, ConjugacyReport, InducedAtlas};
use crate::lifting::{sweep, SweepConfig};
use crate::renorm::{
    aperiodic_point, build_renormalization, cell_pqrk, enumerate_components, is_inscribed, is_table_octagon,
    measure_component_period, nested_quadrilaterals, octagons_disjoint, residual_measure, t_prime_polygon_period,
    period_family, RenormalizationData,
};
use crate::sampling::{bounding_box, Sampler, DEFAULT_SEED};

/// Counterexamples kept per check.
const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Random points per sampled check.
    pub samples: usize,
    /// Budget for each first return in the conjugacy checks.
    pub return_budget: u64,
    /// Budget for each `T`-period measurement.
    pub period_budget: u64,
    /// Deepest census level counted.
    pub census_depth: usize,
    /// Deepest census level whose periods are measured.
    pub period_depth: usize,
    /// Largest `k` in `residual(k+1) = 3λ²·residual(k)`.
    pub measure_depth: usize,
    /// Nested quadrilaterals `G_i` checked around `c`.
    pub nested_depth: usize,
    /// Steps the orbit of `c` must survive.
    pub aperiodic_steps: u64,
    /// Family bounds `n ≤ n_max`, `k ≤ k_max`.
    pub family_n_max: u32,
    pub family_k_max: u64,
    pub seed: u64,
    /// Replaces `λ` in the measure identity. Used as a negative control.
    pub lambda_override: Option<QSqrt2>,
    /// Run the lifting sweep (about 15 s in release).
    pub lifting: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 1000,
            return_budget: 10_000,
            period_budget: 1_000_000,
            census_depth: 4,
            period_depth: 3,
            measure_depth: 4,
            nested_depth: 6,
            aperiodic_steps: 100_000,
            family_n_max: 4,
            family_k_max: 64,
            seed: DEFAULT_SEED,
            lambda_override: None,
            lifting: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
    pub counterexamples: Vec<Value>,
}

impl Check {
    fn new(name: &str, bad: Vec<Value>, detail: Value) -> Self {
        let passed = bad.is_empty();
        Check { name: name.to_string(), passed, detail, counterexamples: bad.into_iter().take(MAX_COUNTEREXAMPLES).collect() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// The three atlases every check draws on.
pub struct Context {
    pub atlas: TableAtlas,
    pub induced: InducedAtlas,
    pub renorm: RenormalizationData,
}

impl Context {
    pub fn canonical() -> Self {
        let atlas = build_table_atlas();
        let induced = build_induced_atlas(&atlas);
        let renorm = build_renormalization(&induced);
        Context { atlas, induced, renorm }
    }
}

/// `T(γ^i) = γ^{i+3}` for every necklace octagon.
pub fn check_necklace(ctx: &Context) -> Result<Check> {
    let mut bad = Vec::new();
    for i in 0..8 {
        let img = step_polygon(&ctx.atlas.necklace[i], &ctx.atlas)?;
        let ok = img.as_ref().is_some_and(|p| p.same_vertex_set(&ctx.atlas.necklace[(i + 3) % 8]));
        if !ok {
            bad.push(json!({ "i": i, "image": img.map(|p| p.vertices().to_vec()) }));
        }
    }
    Ok(Check::new("necklace", bad, json!({ "octagons": 8 })))
}

/// Points of `Z` stay in `Z` under `T` and `T⁻¹`, or hit the singular set.
pub fn check_z_invariance(ctx: &Context, cfg: &VerifyConfig) -> Result<Check> {
    let at = &ctx.atlas;
    let (lo, hi) = bounding_box(at.region_z.vertices());
    let pts = Sampler::new(cfg.seed).filtered(&lo, &hi, cfg.samples, |p| at.in_region_z(p));
    let mut bad = Vec::new();
    let mut singular = 0;
    for p in &pts {
        for (dir, img) in [("forward", at.step(p)?), ("inverse", at.step_inv(p)?)] {
            match img {
                None => singular += 1,
                Some(q) if at.in_region_z(&q) => {}
                Some(q) => bad.push(json!({ "x": p, "direction": dir, "image": q })),
            }
        }
    }
    Ok(Check::new("z_invariance", bad, json!({ "samples": pts.len(), "singular": singular })))
}

/// `T(Rp) = R(Tp)` for the rotation `R` by `π/4` about the table center.
pub fn check_equivariance(ctx: &Context, cfg: &VerifyConfig) -> Result<Check> {
    let at = &ctx.atlas;
    let (lo, hi) = bounding_box(at.region_z.vertices());
    let pts = Sampler::new(cfg.seed ^ 0x5eed).filtered(&lo, &hi, cfg.samples, |p| at.in_region_z(p));
    let r = AffineMap::rotation_octant(&at.center(), 1);
    let mut bad = Vec::new();
    for p in &pts {
        let lhs = at.step(&r.apply(p))?;
        let rhs = at.step(p)?.map(|q| r.apply(&q));
        if lhs != rhs {
            bad.push(json!({ "x": p, "lhs": lhs, "rhs": rhs }));
        }
    }
    Ok(Check::new("equivariance", bad, json!({ "samples": pts.len() })))
}

fn quad_samples(ctx: &Context, cfg: &VerifyConfig, salt: u64) -> Vec<Point2> {
    Sampler::new(cfg.seed ^ salt).in_polygon(&ctx.induced.quad, cfg.samples)
}

/// The piecewise-rotation form of `T′` agrees with folding `T`.
pub fn check_oracle(ctx: &Context, cfg: &VerifyConfig) -> Result<Check> {
    let ia = &ctx.induced;
    let mut bad = Vec::new();
    let pts = quad_samples(ctx, cfg, 0x0);
    for x in &pts {
        let lhs = ia.t_prime(x)?;
        let rhs = ia.t_prime_oracle(x)?;
        if lhs != rhs {
            bad.push(json!({ "x": x, "lhs": lhs, "rhs": rhs }));
        }
    }
    Ok(Check::new("oracle_equivalence", bad, json!({ "samples": pts.len() })))
}

fn conjugacy_check(name: &str, rep: ConjugacyReport) -> Check {
    let detail = json!({ "samples": rep.samples, "max_return_steps": rep.max_return_steps });
    let bad = rep.failures.iter().map(|f| json!(f)).collect();
    Check::new(name, bad, detail)
}

/// `Γ(T′x) = T″(Γx)`.
pub fn check_gamma(ctx: &Context, cfg: &VerifyConfig) -> Result<Check> {
    let pts = quad_samples(ctx, cfg, 0x1);
    let rep = conjugacy_check_gamma(&pts, &ctx.induced, &ctx.renorm.gamma_map, cfg.return_budget)?;
    Ok(conjugacy_check("gamma_conjugacy", rep))
}

/// `H(T′x) = T₄(Hx)`.
pub fn check_h(ctx: &Context, cfg: &VerifyConfig) -> Result<Check> {
    let pts = quad_samples(ctx, cfg, 0x2);
    let rep = conjugacy_check_h(&pts, &ctx.induced, cfg.return_budget)?;
    Ok(conjugacy_check("h_conjugacy", rep))
}

/// `Γ` is a direct similarity of ratio `λ²` carrying `γ²` onto the `OPQ` octagon.
pub fn check_gamma_ratio(ctx: &Context) -> Result<Check> {
    let rd = &ctx.renorm;
    let mut bad = Vec::new();
    let ratio = rd.gamma_map.similarity_ratio();
    if ratio.as_ref() != Some(&rd.lambda.square()) {
        bad.push(json!({ "ratio": ratio, "expected": rd.lambda.square() }));
    }
    if !rd.gamma_map.preserves_orientation() {
        bad.push(json!("Γ reverses orientation"));
    }
    let img = rd.region_y.1.map(&rd.gamma_map)?;
    if !img.same_vertex_set(&rd.u1) {
        bad.push(json!("Γ(γ²) differs from the octagon in OPQ"));
    }
    Ok(Check::new("gamma_ratio", bad, json!({ "lambda": rd.lambda })))
}

/// Named points, piece angles and areas of the induced atlas.
pub fn check_atlas_invariants(ctx: &Context) -> Result<Check> {
    let bad = ctx.induced.invariant_violations().into_iter().map(Value::from).collect();
    Ok(Check::new("atlas_invariants", bad, json!({ "pieces": ctx.induced.pieces.len() })))
}

/// `3^k` components per level, disjoint, inscribed, regular and `T′`-periodic.
pub fn check_census(ctx: &Context, cfg: &VerifyConfig) -> Result<Check> {
    let rd = &ctx.renorm;
    let comps = enumerate_components(cfg.census_depth, rd)?;
    let mut bad = Vec::new();
    let mut counts = vec![0usize; cfg.census_depth + 1];
    for c in &comps {
        counts[c.level as usize] += 1;
    }
    for (k, &n) in counts.iter().enumerate() {
        if n != 3usize.pow(k as u32) {
            bad.push(json!({ "level": k, "count": n }));
        }
    }
    for (i, a) in comps.iter().enumerate() {
        for b in &comps[i + 1..] {
            if !octagons_disjoint(&a.polygon, &b.polygon) {
                bad.push(json!({ "overlap": [a.address, b.address] }));
            }
        }
    }
    let mut t_prime_periods = Vec::new();
    for c in &comps {
        if !is_table_octagon(&c.polygon, &c.side) {
            bad.push(json!({ "address": c.address, "problem": "not a regular octagon of side h_k" }));
        }
        if !is_inscribed(&c.polygon, &cell_pqrk(rd, &c.address)) {
            bad.push(json!({ "address": c.address, "problem": "not inscribed in its PQRK cell" }));
        }
        match t_prime_polygon_period(&c.polygon, &ctx.induced, 10_000) {
            Ok(r) => t_prime_periods.push(r.period),
            Err(e) => bad.push(json!({ "address": c.address, "problem": e.to_string() })),
        }
    }
    t_prime_periods.sort_unstable();
    t_prime_periods.dedup();
    Ok(Check::new("census", bad, json!({ "counts": counts, "t_prime_periods": t_prime_periods })))
}

/// Every measured `T`-period belongs to the closed-form families.
pub fn check_periods(ctx: &Context, cfg: &VerifyConfig) -> Result<Check> {
    let rd = &ctx.renorm;
    let family = period_family(cfg.family_n_max, cfg.family_k_max)?;
    let mut comps = vec![rd.necklace_component()];
    comps.extend(enumerate_components(cfg.period_depth, rd)?);
    let mut bad = Vec::new();
    let mut by_level: Vec<(i64, Vec<u64>)> = Vec::new();
    for c in &comps {
        let p = match measure_component_period(c, &ctx.atlas, cfg.period_budget) {
            Ok(p) => p,
            Err(e) => {
                bad.push(json!({ "level": c.level, "address": c.address, "problem": e.to_string() }));
                continue;
            }
        };
        if !family.contains(&p) {
            bad.push(json!({ "level": c.level, "address": c.address, "period": p }));
        }
        match by_level.last_mut() {
            Some((l, v)) if *l == c.level => v.push(p),
            _ => by_level.push((c.level, vec![p])),
        }
    }
    if by_level.first().map(|(l, v)| (*l, v.as_slice())) != Some((-1, &[8][..])) {
        bad.push(json!({ "problem": "the necklace octagon does not have period 8" }));
    }
    let levels: Vec<Value> = by_level
        .into_iter()
        .map(|(level, mut v)| {
            v.sort_unstable();
            v.dedup();
            json!({ "level": level, "periods": v })
        })
        .collect();
    Ok(Check::new("period_families", bad, json!({ "components": comps.len(), "levels": levels })))
}

/// `residual(k+1) = 3λ²·residual(k)` from the actual polygons, and `3λ² < 1`.
pub fn check_measure(ctx: &Context, cfg: &VerifyConfig) -> Result<Check> {
    let rd = &ctx.renorm;
    let lambda = cfg.lambda_override.clone().unwrap_or_else(|| rd.lambda.clone());
    let ratio = QSqrt2::from_int(3) * lambda.square();
    let mut bad = Vec::new();
    let mut rows = Vec::new();
    let mut prev = residual_measure(0, rd)?;
    for k in 0..=cfg.measure_depth {
        let next = residual_measure(k + 1, rd)?;
        let ok = next == &ratio * &prev;
        rows.push(json!({ "level": k, "residual": prev, "ratio_check": ok }));
        if !ok {
            bad.push(json!({ "level": k, "residual": prev, "next": next }));
        }
        prev = next;
    }
    if (QSqrt2::one() - ratio.clone()).sign() != Sign::Positive {
        bad.push(json!({ "ratio": ratio, "problem": "3λ² ≥ 1" }));
    }
    Ok(Check::new("measure", bad, json!({ "lambda": lambda, "rows": rows })))
}

/// `g(c) = c`, `c` inside the nested `G_i`, and a long aperiodic orbit.
pub fn check_aperiodic(ctx: &Context, cfg: &VerifyConfig) -> Result<Check> {
    let rd = &ctx.renorm;
    let c = aperiodic_point(rd)?;
    let mut bad = Vec::new();
    if rd.g_map.apply(&c) != c {
        bad.push(json!("g(c) ≠ c"));
    }
    for (i, g) in nested_quadrilaterals(rd, cfg.nested_depth + 1).iter().enumerate() {
        if g.locate(&c) != Location::Interior {
            bad.push(json!({ "outside": i }));
        }
    }
    let out = orbit(&c, &ctx.atlas, cfg.aperiodic_steps)?;
    if !matches!(out, OrbitOutcome::BudgetExceeded { .. }) {
        bad.push(json!({ "orbit": out }));
    }
    Ok(Check::new("aperiodic", bad, json!({ "c": c, "orbit": out })))
}

/// Grid sweep of the sector, every component explained as a lift.
pub fn check_lifting(ctx: &Context) -> Result<Check> {
    let cfg = SweepConfig::acceptance(&ctx.induced, &ctx.renorm);
    let rep = sweep(&ctx.induced, &ctx.renorm, &cfg)?;
    let bad = rep
        .literal_unmatched()
        .iter()
        .map(|c| json!({ "center": c.center, "period": c.period }))
        .collect();
    let detail = json!({
        "grid_points": rep.grid_points,
        "components": rep.components.len(),
        "over_budget_points": rep.over_budget_points,
        "singular_points": rep.singular_points,
    });
    Ok(Check::new("lifting", bad, detail))
}

/// Runs the whole suite.
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let ctx = Context::canonical();
    let mut checks = vec![
        check_necklace(&ctx)?,
        check_z_invariance(&ctx, cfg)?,
        check_equivariance(&ctx, cfg)?,
        check_atlas_invariants(&ctx)?,
        check_oracle(&ctx, cfg)?,
        check_gamma(&ctx, cfg)?,
        check_h(&ctx, cfg)?,
        check_gamma_ratio(&ctx)?,
        check_census(&ctx, cfg)?,
        check_periods(&ctx, cfg)?,
        check_measure(&ctx, cfg)?,
        check_aperiodic(&ctx, cfg)?,
    ];
    if cfg.lifting {
        checks.push(check_lifting(&ctx)?);
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { seed: cfg.seed, samples: cfg.samples, passed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig { samples: 40, census_depth: 2, period_depth: 1, measure_depth: 2, ..Default::default() }
    }

    #[test]
    fn small_suite_passes() {
        let rep = run(&small()).unwrap();
        for c in &rep.checks {
            assert!(c.passed, "{}: {:?}", c.name, c.counterexamples);
        }
    }

    #[test]
    fn perturbed_lambda_breaks_measure() {
        let ctx = Context::canonical();
        let bumped = &ctx.renorm.lambda + &QSqrt2::from_fracs(1, 1000, 0, 1);
        let cfg = VerifyConfig { lambda_override: Some(bumped), ..small() };
        assert!(!check_measure(&ctx, &cfg).unwrap().passed);
    }
}
