use std::io::Read;

use clap::{Args, ValueEnum};
use mf_core::abelian::{theta_eval, SiegelTau, ThetaChar};
use mf_core::continuation::{
    algebraic_monodromy, continue_along, germ_builtin, BuiltinKind, PathPoly,
};
use mf_core::difference::{
    cauchy_pompeiu_solve, dbar_residual, manufactured_psi, parse_rational,
    solve_polynomial_difference, solve_polynomial_difference_exact, GridFunction, RationalPoly,
    MANUFACTURED_ANNULUS,
};
use mf_core::elliptic::{eisenstein, EisensteinInvariants, Lattice};
use mf_core::foundations::{parse_bipoly, parse_complex, Poly, ToleranceCtx};
use mf_core::modular::{
    coset_monodromy, coset_table, default_generators, galois_check, SubgroupTag,
};
use mf_core::normal_forms::{
    self, lambda_orbit, lambda_to_weierstrass, ConvertOptions, CurveForm, CurveInput, FormTag,
};
use mf_core::Complex64;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::{CliError, Outcome};

pub fn tolerance(cfg: &RunConfig) -> Result<ToleranceCtx, CliError> {
    Ok(ToleranceCtx::new(cfg.tol, cfg.tol)?)
}

pub fn parse_c(s: &str) -> Result<Complex64, CliError> {
    parse_complex(s).map_err(|e| CliError::Input(format!("bad complex number '{s}': {e}")))
}

/// A literal JSON argument, `@path` for a file, or `-` for stdin.
pub fn json_text(arg: &str) -> Result<String, CliError> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

pub fn parse_json<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(&json_text(arg)?)
        .map_err(|e| CliError::Input(format!("invalid {what} JSON: {e}")))
}

pub fn json_out<T: Serialize>(v: &T) -> Result<Outcome, CliError> {
    let mut text = serde_json::to_string_pretty(v)
        .map_err(|e| CliError::Numerical(format!("serialization: {e}")))?;
    text.push('\n');
    Ok(Outcome { text, pass: true })
}

fn json_only(cfg: &RunConfig, cmd: &str) -> Result<(), CliError> {
    if cfg.format == Format::Csv {
        return Err(CliError::Input(format!("{cmd} has no CSV output")));
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    /// Period ratio in the upper half-plane, e.g. 0.3+1.1i
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["lambda", "curve"])]
    pub tau: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "curve")]
    pub lambda: Option<String>,
    /// Curve JSON such as {"form":"lambda","lambda":[-1,0]}; @file or - for stdin
    #[arg(long)]
    pub curve: Option<String>,
}

#[derive(Debug, Serialize)]
struct InvariantsOut {
    g2: Complex64,
    g3: Complex64,
    delta: Complex64,
    j_paper: Complex64,
    j_classical: Complex64,
    lambda: Complex64,
    lambda_orbit: [Complex64; 6],
    /// Truncation error bounds; absent when the invariants come from a formula.
    tail_bound_g2: Option<f64>,
    tail_bound_g3: Option<f64>,
}

fn lambda_of(
    form: CurveForm,
    tau: Option<Complex64>,
    cfg: &RunConfig,
) -> Result<Complex64, CliError> {
    let opts = ConvertOptions {
        branch: cfg.branch.map(Into::into),
        tau,
        trunc: cfg.trunc,
        tol: tolerance(cfg)?,
    };
    match normal_forms::convert(&form, FormTag::Lambda, &opts)?.form {
        CurveForm::Lambda { lambda } => Ok(lambda),
        other => Err(CliError::Numerical(format!(
            "conversion ended at {:?}",
            other.tag()
        ))),
    }
}

pub fn invariants(a: &InvariantsArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    json_only(cfg, "invariants")?;
    let tol = tolerance(cfg)?;
    let (inv, lambda, tails) = if let Some(t) = &a.tau {
        let tau = parse_c(t)?;
        let inv = eisenstein(&Lattice::from_tau(tau)?, cfg.trunc, &tol)?;
        let form = CurveForm::Weierstrass {
            g2: inv.g2,
            g3: inv.g3,
        };
        let lambda = lambda_of(form, Some(tau), cfg)?;
        let tails = (Some(inv.tail_bound_g2), Some(inv.tail_bound_g3));
        (inv, lambda, tails)
    } else if let Some(l) = &a.lambda {
        let lambda = parse_c(l)?;
        normal_forms::CurveForm::Lambda { lambda }.validate()?;
        let (g2, g3) = lambda_to_weierstrass(lambda)?;
        (EisensteinInvariants::from_g(g2, g3)?, lambda, (None, None))
    } else if let Some(c) = &a.curve {
        let input: CurveInput = parse_json(c, "curve")?;
        input.form.validate()?;
        let lambda = lambda_of(input.form, input.tau, cfg)?;
        let (g2, g3) = match input.form {
            CurveForm::Weierstrass { g2, g3 } => (g2, g3),
            _ => lambda_to_weierstrass(lambda)?,
        };
        (EisensteinInvariants::from_g(g2, g3)?, lambda, (None, None))
    } else {
        return Err(CliError::Input(
            "one of --tau, --lambda or --curve is required".into(),
        ));
    };
    json_out(&InvariantsOut {
        g2: inv.g2,
        g3: inv.g3,
        delta: inv.delta,
        j_paper: inv.j_paper,
        j_classical: inv.j_classical(),
        lambda,
        lambda_orbit: lambda_orbit(lambda)?,
        tail_bound_g2: tails.0,
        tail_bound_g3: tails.1,
    })
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// Curve JSON; @file or - for stdin
    #[arg(long)]
    pub curve: String,
    /// Target form: weierstrass, lambda, legendre_a or inoue
    #[arg(long)]
    pub to: String,
}

pub fn convert(a: &ConvertArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    json_only(cfg, "convert")?;
    let input: CurveInput = parse_json(&a.curve, "curve")?;
    let target: FormTag = a.to.parse()?;
    let opts = ConvertOptions {
        branch: cfg.branch.map(Into::into),
        tau: input.tau,
        trunc: cfg.trunc,
        tol: tolerance(cfg)?,
    };
    json_out(&normal_forms::convert(&input.form, target, &opts)?)
}

#[derive(Debug, Args)]
pub struct MonodromyArgs {
    /// Polynomial P(z, y), e.g. "y^2 - (1-z^2)(1-z^2/4)"
    pub polynomial: String,
    /// Base point away from the branch points
    #[arg(long, allow_hyphen_values = true, default_value = "0.31+0.17i")]
    pub base: String,
}

#[derive(Debug, Serialize)]
struct MonodromyOut {
    base_point: Complex64,
    fiber: Vec<Complex64>,
    branch_points: Vec<Complex64>,
    /// Loop around each finite branch point, in cycle notation.
    permutations: Vec<String>,
    infinity_permutation: String,
    image_order: usize,
    transitive: bool,
    product_is_identity: bool,
}

pub fn monodromy(a: &MonodromyArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    json_only(cfg, "monodromy")?;
    let p = parse_bipoly(&a.polynomial)?;
    let base = parse_c(&a.base)?;
    let rep = algebraic_monodromy(&p, base, &tolerance(cfg)?)?;
    let mut perms: Vec<String> = rep.generators.iter().map(ToString::to_string).collect();
    let infinity = perms.pop().unwrap_or_else(|| "()".into());
    json_out(&MonodromyOut {
        base_point: rep.base_point,
        fiber: rep.fiber,
        branch_points: rep.branch_points,
        permutations: perms,
        infinity_permutation: infinity,
        image_order: rep.image_order,
        transitive: rep.transitive,
        product_is_identity: rep.product_is_identity,
    })
}

#[derive(Debug, Args)]
pub struct CosetsArgs {
    /// Subgroup: full, gamma2, gamma24 or gamma28
    #[arg(long)]
    pub sub: String,
    /// Supergroup containing it
    #[arg(long = "super")]
    pub sup: String,
}

#[derive(Debug, Serialize)]
struct CosetsOut {
    subgroup: SubgroupTag,
    supergroup: SubgroupTag,
    index: usize,
    representatives: Vec<String>,
    generators: Vec<String>,
    generator_permutations: Vec<String>,
    image_order: usize,
    transitive: bool,
    abelian: bool,
    galois: bool,
}

pub fn cosets(a: &CosetsArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    json_only(cfg, "cosets")?;
    let sub: SubgroupTag = a.sub.parse()?;
    let sup: SubgroupTag = a.sup.parse()?;
    let t = coset_table(sub, sup, &default_generators(sup))?;
    let m = coset_monodromy(&t);
    json_out(&CosetsOut {
        subgroup: sub,
        supergroup: sup,
        index: t.index(),
        representatives: t.representatives.iter().map(ToString::to_string).collect(),
        generators: t.generators.iter().map(ToString::to_string).collect(),
        generator_permutations: m.permutations.iter().map(ToString::to_string).collect(),
        image_order: m.image_order,
        transitive: m.transitive,
        abelian: m.abelian,
        galois: galois_check(&t),
    })
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    /// Period matrix: a complex number for genus 1, or JSON rows of [re, im]
    #[arg(long, allow_hyphen_values = true)]
    pub tau: String,
    /// Characteristic as JSON [[num, den], ...]; zero by default
    #[arg(long = "char")]
    pub characteristic: Option<String>,
    /// Argument as JSON [[re, im], ...]; zero by default
    #[arg(long)]
    pub z: Option<String>,
}

#[derive(Debug, Serialize)]
struct ThetaOut {
    genus: usize,
    characteristic: ThetaChar,
    z: Vec<Complex64>,
    value: Complex64,
    tail_bound: f64,
    radius: usize,
}

pub fn siegel_from_arg(arg: &str, tol: &ToleranceCtx) -> Result<SiegelTau, CliError> {
    let text = json_text(arg)?;
    if text.trim_start().starts_with('[') {
        let rows: Vec<Vec<Complex64>> = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("invalid tau JSON: {e}")))?;
        Ok(SiegelTau::from_rows(&rows, tol)?)
    } else {
        Ok(SiegelTau::genus1(parse_c(&text)?)?)
    }
}

pub fn theta(a: &ThetaArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    json_only(cfg, "theta")?;
    let tol = tolerance(cfg)?;
    let t = siegel_from_arg(&a.tau, &tol)?;
    let n = t.n();
    let ch: ThetaChar = match &a.characteristic {
        Some(s) => parse_json(s, "characteristic")?,
        None => ThetaChar::zero(n),
    };
    let z: Vec<Complex64> = match &a.z {
        Some(s) => parse_json(s, "z")?,
        None => vec![Complex64::new(0.0, 0.0); n],
    };
    let v = theta_eval(&ch, &z, &t, cfg.theta_radius, &tol)?;
    json_out(&ThetaOut {
        genus: n,
        characteristic: ch,
        z,
        value: v.value,
        tail_bound: v.tail_bound,
        radius: v.radius,
    })
}

#[derive(Debug, Args)]
pub struct DiffeqArgs {
    /// Coefficients of f, constant term first: integers, a/b, decimals or
    /// complex. Put `--` before the list when a coefficient such as -1/2
    /// starts with a minus sign.
    #[arg(allow_negative_numbers = true)]
    pub coeffs: Vec<String>,
    /// Instead solve dbar(psi) = u on an N_R x N_THETA polar grid for a
    /// manufactured u
    #[arg(long, value_name = "N_R,N_THETA", conflicts_with = "coeffs")]
    pub dbar_grid: Option<String>,
}

#[derive(Debug, Serialize)]
struct ExactOut {
    exact: bool,
    f: RationalPoly,
    g: RationalPoly,
    g_display: String,
    residual: f64,
}

#[derive(Debug, Serialize)]
struct FloatOut {
    exact: bool,
    f: Poly,
    g: Poly,
    residual: f64,
}

#[derive(Debug, Serialize)]
struct DbarOut {
    n_r: usize,
    n_theta: usize,
    annulus: (f64, f64),
    residual: f64,
    max_abs_u: f64,
    max_abs_psi: f64,
}

pub fn diffeq(a: &DiffeqArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    if let Some(grid) = &a.dbar_grid {
        return dbar(grid, cfg);
    }
    json_only(cfg, "diffeq")?;
    let tokens: Vec<&str> = a
        .coeffs
        .iter()
        .flat_map(|s| s.split(|c: char| c.is_whitespace() || c == ','))
        .filter(|s| !s.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(CliError::Input("no coefficients given".into()));
    }
    let rational: Option<Vec<_>> = tokens.iter().map(|t| parse_rational(t)).collect();
    match rational {
        Some(c) => {
            let f = RationalPoly::new(c);
            let sol = solve_polynomial_difference_exact(&f);
            if !sol.residual.is_zero() {
                return Err(CliError::Numerical(format!(
                    "nonzero exact residual {}",
                    sol.residual
                )));
            }
            json_out(&ExactOut {
                exact: true,
                g_display: sol.g.to_string(),
                f,
                g: sol.g,
                residual: 0.0,
            })
        }
        None => {
            let c = tokens
                .iter()
                .map(|t| parse_c(t))
                .collect::<Result<Vec<_>, _>>()?;
            let f = Poly::new(c);
            let sol = solve_polynomial_difference(&f);
            json_out(&FloatOut {
                exact: false,
                f,
                g: sol.g,
                residual: sol.residual,
            })
        }
    }
}

fn dbar(grid: &str, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let bad = || CliError::Input(format!("--dbar-grid expects N_R,N_THETA, got '{grid}'"));
    let (a, b) = grid.split_once(',').ok_or_else(bad)?;
    let n_r: usize = a.trim().parse().map_err(|_| bad())?;
    let n_theta: usize = b.trim().parse().map_err(|_| bad())?;
    let (r0, r1) = MANUFACTURED_ANNULUS;
    let u = GridFunction::from_fn(r0, r1, n_r, n_theta, manufactured_psi)?.dbar();
    let psi = cauchy_pompeiu_solve(&u, cfg.tol.max(1e-12))?;
    match cfg.format {
        Format::Csv => {
            let mut buf = Vec::new();
            psi.write_csv(&mut buf)?;
            let text = String::from_utf8(buf).map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok(Outcome { text, pass: true })
        }
        Format::Json => json_out(&DbarOut {
            n_r,
            n_theta,
            annulus: (r0, r1),
            residual: dbar_residual(&u, &psi),
            max_abs_u: u.max_abs(),
            max_abs_psi: psi.max_abs(),
        }),
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GermKind {
    Sqrt,
    Log,
    Elliptic,
}

#[derive(Debug, Args)]
pub struct ContinueArgs {
    #[arg(long, value_enum)]
    pub germ: GermKind,
    /// Modulus k of the elliptic integral
    #[arg(long, allow_hyphen_values = true, default_value = "0.5")]
    pub k: String,
    /// Path vertices as JSON [[re, im], ...]; the germ is centered at the first
    #[arg(long)]
    pub path: String,
    /// Fraction of the convergence radius used per step, in (0, 1]
    #[arg(long, default_value_t = 0.5)]
    pub step_ctl: f64,
}

#[derive(Debug, Serialize)]
struct ContinueOut {
    kind: BuiltinKind,
    start: Complex64,
    start_value: Complex64,
    end: Complex64,
    end_value: Complex64,
    conv_radius_est: f64,
    coeffs: Vec<Complex64>,
}

pub fn continue_germ(a: &ContinueArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let tol = tolerance(cfg)?;
    let kind = match a.germ {
        GermKind::Sqrt => BuiltinKind::Sqrt,
        GermKind::Log => BuiltinKind::Log,
        GermKind::Elliptic => BuiltinKind::EllipticIntegral { k: parse_c(&a.k)? },
    };
    let path: PathPoly = parse_json(&a.path, "path")?;
    let g0 = germ_builtin(kind, path.start(), cfg.series_order)?;
    match cfg.format {
        Format::Json => {
            let g = continue_along(&g0, &path, a.step_ctl, &tol)?;
            json_out(&ContinueOut {
                kind,
                start: path.start(),
                start_value: g0.value(),
                end: g.center(),
                end_value: g.value(),
                conv_radius_est: g.conv_radius_est(),
                coeffs: g.coeffs().to_vec(),
            })
        }
        Format::Csv => {
            let mut text = String::from("re,im,value_re,value_im\n");
            let mut g = g0;
            let v = path.vertices();
            text.push_str(&format!(
                "{},{},{},{}\n",
                v[0].re,
                v[0].im,
                g.value().re,
                g.value().im
            ));
            for w in v.windows(2) {
                g = continue_along(&g, &PathPoly::new(w.to_vec())?, a.step_ctl, &tol)?;
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    w[1].re,
                    w[1].im,
                    g.value().re,
                    g.value().im
                ));
            }
            Ok(Outcome { text, pass: true })
        }
    }
}
