//! Command-line front end shared by the `octabill` binary and the tests.
//!
//! Exit codes: `0` when every check passes, `1` when a check fails or the
//! engine reports an error, `2` for usage errors.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::billiard::{orbit, trajectory, OrbitOutcome};
use crate::error::Error;
use crate::field::{parse_ratio, QSqrt2};
use crate::geometry::{Location, Point2};
use crate::render;
use crate::renorm::{
    aperiodic_point, enumerate_components_capped, measure_component_period, nested_quadrilaterals,
    period_family_members, DEFAULT_DEPTH_CAP,
};
use crate::sampling::seed_from_env;
use crate::verify::{self, Context, VerifyConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Vertices of an orbit drawn in the `orbit` SVG.
const ORBIT_SVG_POINTS: usize = 2000;
/// Returns of `T″` drawn in the trajectory figure.
const TRAJECTORY_RETURNS: usize = 12;
/// Spiral rounds drawn in the census figure.
const SPIRAL_ROUNDS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Orbit,
    Atlas,
    Components,
    Periods,
    Verify,
    Aperiodic,
    Render,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
}

/// Exact outer billiard outside the regular octagon.
#[derive(Clone, Debug, Parser)]
#[command(name = "octabill", version)]
pub struct Args {
    #[arg(long, value_enum)]
    pub command: Command,
    /// Exact seed `"a p/q b r/s a p/q b r/s"`: x = p/q + (r/s)√2, then y.
    #[arg(long)]
    pub seed: Option<String>,
    /// Census depth.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Iteration budget.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Random samples per sampled check.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Output file, or directory for `render`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Engine(_) => EXIT_CHECK_FAILED,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// What a command produced.
#[derive(Debug)]
pub struct Output {
    /// Text for stdout or `--out`.
    pub text: String,
    pub passed: bool,
}

/// Parses one coordinate `p/q + (r/s)√2` from its two rationals.
fn coordinate(a: &str, b: &str) -> Result<QSqrt2, CliError> {
    for t in [a, b] {
        if t.contains(['.', 'e', 'E']) {
            return Err(usage(format!("decimal seeds are not accepted: {t:?}")));
        }
    }
    let a = parse_ratio(a).map_err(|e| usage(e.to_string()))?;
    let b = parse_ratio(b).map_err(|e| usage(e.to_string()))?;
    Ok(QSqrt2::new(a, b))
}

/// Accepts `"a p/q b r/s a p/q b r/s"` or the bare form `"p/q r/s p/q r/s"`.
pub fn parse_seed(s: &str) -> Result<Point2, CliError> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    let nums: Vec<&str> = match toks.len() {
        8 => {
            for (i, label) in [(0, "a"), (2, "b"), (4, "a"), (6, "b")] {
                if toks[i] != label {
                    return Err(usage(format!("expected {label:?} at position {}, found {:?}", i + 1, toks[i])));
                }
            }
            vec![toks[1], toks[3], toks[5], toks[7]]
        }
        4 => toks,
        n => return Err(usage(format!("seed needs 8 tokens \"a p/q b r/s a p/q b r/s\", got {n}"))),
    };
    Ok(Point2::new(coordinate(nums[0], nums[1])?, coordinate(nums[2], nums[3])?))
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn depth_checked(args: &Args, default: usize) -> Result<usize, CliError> {
    let d = args.depth.unwrap_or(default);
    if d > DEFAULT_DEPTH_CAP {
        return Err(usage(format!("depth {d} exceeds the cap {DEFAULT_DEPTH_CAP}")));
    }
    Ok(d)
}

fn budget_checked(args: &Args, default: u64) -> Result<u64, CliError> {
    match args.budget.unwrap_or(default) {
        0 => Err(usage("budget must be at least 1")),
        b => Ok(b),
    }
}

fn cmd_orbit(args: &Args, ctx: &Context) -> Result<Output, CliError> {
    let seed = args.seed.as_deref().ok_or_else(|| usage("orbit needs --seed"))?;
    let p = parse_seed(seed)?;
    if ctx.atlas.table.locate(&p) != Location::Exterior {
        return Err(usage("seed lies in the closed table"));
    }
    let budget = budget_checked(args, crate::billiard::DEFAULT_BUDGET)?;
    let out = orbit(&p, &ctx.atlas, budget)?;
    if args.format == Format::Svg {
        let n = match out {
            OrbitOutcome::Periodic { period } => period as usize + 1,
            OrbitOutcome::HitSingular { step } | OrbitOutcome::Escaped { step } => step as usize + 1,
            OrbitOutcome::BudgetExceeded { budget } => budget as usize,
        };
        let pts = trajectory(&p, &ctx.atlas, n.min(ORBIT_SVG_POINTS))?;
        return Ok(Output { text: render::render_orbit(&ctx.atlas, &pts), passed: true });
    }
    let steps_used = match out {
        OrbitOutcome::Periodic { period } => period,
        OrbitOutcome::HitSingular { step } | OrbitOutcome::Escaped { step } => step,
        OrbitOutcome::BudgetExceeded { budget } => budget,
    };
    let mut v = json!({ "seed": p });
    let obj = v.as_object_mut().expect("object");
    if let Value::Object(fields) = serde_json::to_value(&out).map_err(Error::from)? {
        obj.extend(fields);
    }
    obj.insert("steps_used".into(), json!(steps_used));
    Ok(Output { text: to_json(&v), passed: true })
}

fn cmd_atlas(args: &Args, ctx: &Context) -> Result<Output, CliError> {
    if args.format == Format::Svg {
        return Ok(Output { text: render::render_necklace(&ctx.atlas), passed: true });
    }
    let at = &ctx.atlas;
    let v = json!({
        "vertices": at.table.vertices(),
        "corner_points": at.corner_points,
        "necklace": at.necklace.iter().map(|g| g.vertices().to_vec()).collect::<Vec<_>>(),
        "region_z": at.region_z.vertices(),
        "named_points": ctx.induced.points,
    });
    Ok(Output { text: to_json(&v), passed: true })
}

fn cmd_components(args: &Args, ctx: &Context) -> Result<Output, CliError> {
    let depth = depth_checked(args, 3)?;
    if args.format == Format::Svg {
        let text = render::render_census(&ctx.renorm, depth, SPIRAL_ROUNDS)?;
        return Ok(Output { text, passed: true });
    }
    let budget = budget_checked(args, crate::billiard::DEFAULT_BUDGET)?;
    let mut comps = enumerate_components_capped(depth, DEFAULT_DEPTH_CAP, &ctx.renorm)?;
    let mut passed = true;
    for c in &mut comps {
        match measure_component_period(c, &ctx.atlas, budget) {
            Ok(p) => c.period = Some(p),
            Err(_) => passed = false,
        }
    }
    Ok(Output { text: to_json(&json!(comps)), passed })
}

fn cmd_periods(args: &Args, ctx: &Context) -> Result<Output, CliError> {
    let depth = depth_checked(args, 3)?;
    let budget = budget_checked(args, crate::billiard::DEFAULT_BUDGET)?;
    let members = period_family_members(4, 64)?;
    let mut comps = vec![ctx.renorm.necklace_component()];
    comps.extend(enumerate_components_capped(depth, DEFAULT_DEPTH_CAP, &ctx.renorm)?);
    let mut rows = Vec::new();
    let mut passed = true;
    for c in &comps {
        let period = measure_component_period(c, &ctx.atlas, budget).ok();
        let member = period.and_then(|p| members.iter().find(|m| m.value == p));
        passed &= member.is_some();
        rows.push(json!({ "level": c.level, "address": c.address, "period": period, "member": member }));
    }
    let v = json!({ "family_bounds": { "n_max": 4, "k_max": 64 }, "components": rows, "all_members": passed });
    Ok(Output { text: to_json(&v), passed })
}

fn cmd_verify(args: &Args) -> Result<Output, CliError> {
    let mut cfg = VerifyConfig { samples: args.samples, seed: seed_from_env(), ..Default::default() };
    if args.samples == 0 {
        return Err(usage("samples must be at least 1"));
    }
    if let Some(d) = args.depth {
        cfg.census_depth = depth_checked(args, d)?;
    }
    if let Some(b) = args.budget {
        cfg.period_budget = budget_checked(args, b)?;
    }
    let rep = verify::run(&cfg)?;
    Ok(Output { text: to_json(&json!(rep)), passed: rep.passed })
}

fn cmd_aperiodic(args: &Args, ctx: &Context) -> Result<Output, CliError> {
    let rd = &ctx.renorm;
    let budget = budget_checked(args, 100_000)?;
    let c = aperiodic_point(rd)?;
    let fixed = rd.g_map.apply(&c) == c;
    let nested: Vec<bool> =
        nested_quadrilaterals(rd, 7).iter().map(|g| g.locate(&c) == Location::Interior).collect();
    let out = orbit(&c, &ctx.atlas, budget)?;
    let passed = fixed && nested.iter().all(|&b| b) && matches!(out, OrbitOutcome::BudgetExceeded { .. });
    let v = json!({ "c": c, "fixed_by_g": fixed, "inside_nested": nested, "orbit": out });
    Ok(Output { text: to_json(&v), passed })
}

/// Figure names and contents written by `render`.
pub fn figures(ctx: &Context, depth: usize) -> Result<Vec<(&'static str, String)>, Error> {
    let start = render::trajectory_start(&ctx.induced, &ctx.renorm);
    Ok(vec![
        ("necklace.svg", render::render_necklace(&ctx.atlas)),
        ("induced.svg", render::render_induced(&ctx.induced)),
        ("trajectory.svg", render::render_trajectory(&ctx.induced, &ctx.renorm, &start, TRAJECTORY_RETURNS, 10_000)?),
        ("census.svg", render::render_census(&ctx.renorm, depth, SPIRAL_ROUNDS)?),
    ])
}

fn cmd_render(args: &Args, ctx: &Context) -> Result<Output, CliError> {
    let depth = depth_checked(args, 3)?;
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
    std::fs::create_dir_all(&dir).map_err(Error::from)?;
    let mut written = Vec::new();
    for (name, svg) in figures(ctx, depth)? {
        let path = dir.join(name);
        std::fs::write(&path, svg).map_err(Error::from)?;
        written.push(path.display().to_string());
    }
    Ok(Output { text: to_json(&json!({ "written": written })), passed: true })
}

/// Runs a parsed command. `render` writes its own files; everything else
/// returns text for the caller to place.
pub fn execute(args: &Args) -> Result<Output, CliError> {
    if args.command == Command::Verify {
        return cmd_verify(args);
    }
    let ctx = Context::canonical();
    match args.command {
        Command::Orbit => cmd_orbit(args, &ctx),
        Command::Atlas => cmd_atlas(args, &ctx),
        Command::Components => cmd_components(args, &ctx),
        Command::Periods => cmd_periods(args, &ctx),
        Command::Aperiodic => cmd_aperiodic(args, &ctx),
        Command::Render => cmd_render(args, &ctx),
        Command::Verify => unreachable!("handled above"),
    }
}

/// Full CLI behavior, returning the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let out = match execute(&args) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("octabill: {e}");
            return e.exit_code();
        }
    };
    let placed = match (&args.out, args.command) {
        (Some(path), c) if c != Command::Render => std::fs::write(path, &out.text),
        _ => {
            print!("{}", out.text);
            Ok(())
        }
    };
    if let Err(e) = placed {
        eprintln!("octabill: {e}");
        return EXIT_CHECK_FAILED;
    }
    if out.passed {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_forms() {
        let p = parse_seed("a 0 b 0 a 4 b 2").unwrap();
        assert_eq!(p, Point2::from_ints(0, 0, 4, 2));
        assert_eq!(parse_seed("0 0 4 2").unwrap(), p);
        assert_eq!(parse_seed("a 1/2 b -3/4 a 0 b 1").unwrap().x, QSqrt2::from_fracs(1, 2, -3, 4));
    }

    #[test]
    fn seed_rejections() {
        for bad in ["a 0.5 b 0 a 4 b 2", "a 0 b 0 a 4", "x 0 b 0 a 4 b 2", "a 1/0 b 0 a 4 b 2"] {
            assert!(matches!(parse_seed(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }
}
